//! A block of the partitioned matrix read as a bilinear form `(u, v) ↦ uᵀ A v`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bilinear<F: Field> {
    matrix: Mat<F>,
}

impl<F: Field> Bilinear<F> {
    pub fn new(matrix: Mat<F>) -> Self {
        Bilinear { matrix }
    }

    pub fn matrix(&self) -> &Mat<F> {
        &self.matrix
    }

    /// `m = dim U`.
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// `n = dim V`.
    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.matrix.ctx()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn transpose(&self) -> Self {
        Bilinear {
            matrix: self.matrix.transpose(),
        }
    }

    fn check(&self, x: Option<&Subspace<F>>, y: Option<&Subspace<F>>) -> Result<()> {
        for (s, n) in [(x, self.rows()), (y, self.cols())] {
            if let Some(s) = s {
                if s.ctx() != self.ctx() {
                    return Err(Error::FieldMismatch);
                }
                if s.ambient() != n {
                    return Err(Error::AmbientMismatch {
                        left: s.ambient(),
                        right: n,
                    });
                }
            }
        }
        Ok(())
    }

    /// Rank of `(u_iᵀ A v_j)` over bases of `x` and `y`.
    pub fn restricted_rank(&self, x: &Subspace<F>, y: &Subspace<F>) -> Result<usize> {
        self.check(Some(x), Some(y))?;
        if x.is_zero() || y.is_zero() {
            return Ok(0);
        }
        let xa = x.basis().mat_mul(&self.matrix)?;
        Ok(xa.mat_mul(&y.basis().transpose())?.rank())
    }

    /// `{v ∈ V : A(x, v) = 0 for all x ∈ X}`.
    pub fn right_orth(&self, x: &Subspace<F>) -> Result<Subspace<F>> {
        self.check(Some(x), None)?;
        let xa = x.basis().mat_mul(&self.matrix)?;
        Ok(Subspace::from_spanning(&xa.kernel_basis()))
    }

    /// `{u ∈ U : A(u, y) = 0 for all y ∈ Y}`.
    pub fn left_orth(&self, y: &Subspace<F>) -> Result<Subspace<F>> {
        self.check(None, Some(y))?;
        let ya = y.basis().mat_mul(&self.matrix.transpose())?;
        Ok(Subspace::from_spanning(&ya.kernel_basis()))
    }

    /// True iff the form vanishes on `x × y`.
    pub fn vanishes_on(&self, x: &Subspace<F>, y: &Subspace<F>) -> Result<bool> {
        Ok(self.restricted_rank(x, y)? == 0)
    }
}

pub fn restricted_rank<F: Field>(
    a: &Bilinear<F>,
    x: &Subspace<F>,
    y: &Subspace<F>,
) -> Result<usize> {
    a.restricted_rank(x, y)
}

pub fn right_orth<F: Field>(a: &Bilinear<F>, x: &Subspace<F>) -> Result<Subspace<F>> {
    a.right_orth(x)
}

pub fn left_orth<F: Field>(a: &Bilinear<F>, y: &Subspace<F>) -> Result<Subspace<F>> {
    a.left_orth(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::subspace::{enumerate_subspaces, DEFAULT_ENUMERATION_LIMIT};

    fn form(p: u64, rows: &[Vec<i64>]) -> Bilinear<Gf> {
        Bilinear::new(Mat::from_ints(&p, rows[0].len(), rows).unwrap())
    }

    fn all_matrices(p: u64, m: usize, n: usize) -> Vec<Bilinear<Gf>> {
        let total = (p as usize).pow((m * n) as u32);
        (0..total)
            .map(|mut code| {
                let rows: Vec<Vec<i64>> = (0..m)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let v = code % p as usize;
                                code /= p as usize;
                                v as i64
                            })
                            .collect()
                    })
                    .collect();
                form(p, &rows)
            })
            .collect()
    }

    #[test]
    fn restricted_rank_examples() {
        let a = form(2, &[vec![1, 0], vec![0, 0]]);
        let e1 = Subspace::coordinate(&2, 2, &[0]);
        assert_eq!(a.restricted_rank(&e1, &Subspace::full(&2, 2)).unwrap(), 1);
        assert_eq!(
            a.restricted_rank(&Subspace::zero(&2, 2), &Subspace::full(&2, 2))
                .unwrap(),
            0
        );
        let i3 = Bilinear::new(Mat::<Gf>::identity(&2, 3));
        assert_eq!(
            i3.restricted_rank(&Subspace::full(&2, 3), &Subspace::full(&2, 3))
                .unwrap(),
            3
        );
        assert!(matches!(
            a.restricted_rank(&Subspace::zero(&2, 3), &Subspace::full(&2, 2)),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn orth_examples() {
        let i2 = Bilinear::new(Mat::<Gf>::identity(&2, 2));
        assert_eq!(
            i2.right_orth(&Subspace::zero(&2, 2)).unwrap(),
            Subspace::full(&2, 2)
        );
        assert_eq!(
            i2.right_orth(&Subspace::coordinate(&2, 2, &[0])).unwrap(),
            Subspace::coordinate(&2, 2, &[1])
        );
        let zero = form(2, &[vec![0, 0], vec![0, 0]]);
        assert_eq!(
            zero.right_orth(&Subspace::full(&2, 2)).unwrap(),
            Subspace::full(&2, 2)
        );
        assert_eq!(
            i2.left_orth(&Subspace::zero(&2, 2)).unwrap(),
            Subspace::full(&2, 2)
        );
        let a = form(2, &[vec![1, 0], vec![0, 0]]);
        assert_eq!(
            a.left_orth(&Subspace::full(&2, 2)).unwrap(),
            Subspace::coordinate(&2, 2, &[1])
        );
        assert_eq!(
            i2.left_orth(&Subspace::full(&2, 2)).unwrap(),
            Subspace::zero(&2, 2)
        );
    }

    #[test]
    fn orth_laws_exhaustive() {
        for p in [2u64, 3] {
            let subs = enumerate_subspaces(2, p, DEFAULT_ENUMERATION_LIMIT).unwrap();
            for a in all_matrices(p, 2, 2) {
                for x in &subs {
                    let xp = a.right_orth(x).unwrap();
                    let xpp = a.left_orth(&xp).unwrap();
                    assert!(xpp.contains(x).unwrap());
                    assert_eq!(a.right_orth(&xpp).unwrap(), xp);
                    for x2 in &subs {
                        let x2p = a.right_orth(x2).unwrap();
                        if x2.contains(x).unwrap() {
                            assert!(xp.contains(&x2p).unwrap());
                        }
                        let sum = x.join(x2).unwrap();
                        assert_eq!(a.right_orth(&sum).unwrap(), xp.meet(&x2p).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_iff_rank_zero() {
        let subs = enumerate_subspaces(2, 2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        for a in all_matrices(2, 2, 2) {
            for x in &subs {
                for y in &subs {
                    let direct = x.basis().row_vecs().iter().all(|u| {
                        let ua = a.matrix().left_apply(u);
                        y.basis()
                            .row_vecs()
                            .iter()
                            .all(|v| crate::matrix::dot(&2, &ua, v).is_zero())
                    });
                    assert_eq!(a.vanishes_on(x, y).unwrap(), direct);
                }
            }
        }
    }
}
