//! Points of orthoscheme complexes as formal convex combinations along chains,
//! the product-splitting map, and the Lovász-type evaluations on them.

use std::collections::HashSet;

use malachite_base::num::basic::traits::{One, Zero};

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::sppa::WmvspInstance;
use crate::subspace::{Orientation, Subspace, SubspaceChain};
use crate::Rat;

/// A point of K(L) (`Ascending`) or K(M̌) (`Descending`). Terms run from the
/// bottom of the support chain to its top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPoint<F: Field> {
    terms: Vec<(Rat, Subspace<F>)>,
    orientation: Orientation,
}

/// `(X_1..X_μ, Y_1..Y_ν)`.
pub type SubspaceTuple<F> = (Vec<Subspace<F>>, Vec<Subspace<F>>);

impl<F: Field> ComplexPoint<F> {
    /// Validates and normalizes: zero terms dropped, repeated elements merged,
    /// terms sorted along the chain.
    pub fn new(terms: Vec<(Rat, Subspace<F>)>, orientation: Orientation) -> Result<Self> {
        let mut merged: Vec<(Rat, Subspace<F>)> = Vec::with_capacity(terms.len());
        for (c, s) in terms {
            if c < Rat::ZERO {
                return Err(Error::InvalidPoint(format!("negative coefficient {c}")));
            }
            if c == Rat::ZERO {
                continue;
            }
            match merged.iter_mut().find(|(_, t)| *t == s) {
                Some((acc, _)) => *acc += c,
                None => merged.push((c, s)),
            }
        }
        let total: Rat = merged.iter().map(|(c, _)| c.clone()).sum();
        if total != Rat::ONE {
            return Err(Error::InvalidPoint(format!("coefficients sum to {total}")));
        }
        merged.sort_by_key(|(_, s)| orientation.rank_of(s));
        SubspaceChain::new(merged.iter().map(|(_, s)| s.clone()).collect(), orientation)
            .map_err(|_| Error::InvalidPoint("support is not a chain".into()))?;
        Ok(ComplexPoint {
            terms: merged,
            orientation,
        })
    }

    pub fn vertex(s: Subspace<F>, orientation: Orientation) -> Self {
        ComplexPoint {
            terms: vec![(Rat::ONE, s)],
            orientation,
        }
    }

    pub fn bottom(ctx: &F::Ctx, ambient: usize, orientation: Orientation) -> Self {
        Self::vertex(orientation.bottom(ctx, ambient), orientation)
    }

    pub fn terms(&self) -> &[(Rat, Subspace<F>)] {
        &self.terms
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn ambient(&self) -> usize {
        self.terms[0].1.ambient()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.terms[0].1.ctx()
    }

    pub fn support(&self) -> SubspaceChain<F> {
        SubspaceChain::new(
            self.terms.iter().map(|(_, s)| s.clone()).collect(),
            self.orientation,
        )
        .expect("support is a chain by construction")
    }

    pub fn is_vertex(&self) -> bool {
        self.terms.len() == 1
    }

    /// Σ coeff · rank, the Lovász extension of the lattice rank.
    pub fn d1(&self) -> Rat {
        self.terms
            .iter()
            .map(|(c, s)| c * Rat::from(self.orientation.rank_of(s)))
            .sum()
    }

    /// Σ coeff · dim, the Lovász extension of `dim` in either orientation.
    pub fn dim_value(&self) -> Rat {
        self.terms.iter().map(|(c, s)| c * Rat::from(s.dim())).sum()
    }

    /// Squared distance from the bottom: Σ_k u_k² with u_k the total mass at rank ≥ k.
    pub fn d2(&self) -> Rat {
        let n = self.ambient();
        let mut mass = vec![Rat::ZERO; n + 1];
        for (c, s) in &self.terms {
            mass[self.orientation.rank_of(s)] += c;
        }
        let mut u = Rat::ZERO;
        let mut total = Rat::ZERO;
        for k in (1..=n).rev() {
            u += &mass[k];
            total += &u * &u;
        }
        total
    }
}

pub fn d1_value<F: Field>(x: &ComplexPoint<F>) -> Rat {
    x.d1()
}

pub fn d2_value<F: Field>(x: &ComplexPoint<F>) -> Rat {
    x.d2()
}

/// Splits a point of a product of complexes into one chain of tuples by
/// repeatedly peeling the smallest remaining top coefficient. Output is top first.
pub fn combine_product<F: Field>(parts: &[ComplexPoint<F>]) -> Vec<(Rat, Vec<Subspace<F>>)> {
    let mut idx: Vec<usize> = parts.iter().map(|p| p.terms.len() - 1).collect();
    let mut left: Vec<Rat> = parts
        .iter()
        .map(|p| p.terms.last().expect("nonempty").0.clone())
        .collect();
    let mut out = Vec::new();
    if parts.is_empty() {
        return out;
    }
    loop {
        let c = left.iter().min().expect("nonempty").clone();
        out.push((
            c.clone(),
            parts
                .iter()
                .zip(&idx)
                .map(|(p, &i)| p.terms[i].1.clone())
                .collect(),
        ));
        let mut done = false;
        for (k, p) in parts.iter().enumerate() {
            left[k] -= &c;
            if left[k] == Rat::ZERO {
                if idx[k] == 0 {
                    done = true;
                } else {
                    idx[k] -= 1;
                    left[k] = p.terms[idx[k]].0.clone();
                }
            }
        }
        if done {
            return out;
        }
    }
}

/// A point of ∏ K(L_α) × ∏ K(M̌_β).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoint<F: Field> {
    pub xs: Vec<ComplexPoint<F>>,
    pub ys: Vec<ComplexPoint<F>>,
}

impl<F: Field> ProductPoint<F> {
    /// `x_α = 1·{0}`, `y_β = 1·V`.
    pub fn bottom(ctx: &F::Ctx, row_dims: &[usize], col_dims: &[usize]) -> Self {
        ProductPoint {
            xs: row_dims
                .iter()
                .map(|&m| ComplexPoint::bottom(ctx, m, Orientation::Ascending))
                .collect(),
            ys: col_dims
                .iter()
                .map(|&n| ComplexPoint::bottom(ctx, n, Orientation::Descending))
                .collect(),
        }
    }

    pub fn vertex(tuple: &SubspaceTuple<F>) -> Self {
        ProductPoint {
            xs: tuple
                .0
                .iter()
                .map(|x| ComplexPoint::vertex(x.clone(), Orientation::Ascending))
                .collect(),
            ys: tuple
                .1
                .iter()
                .map(|y| ComplexPoint::vertex(y.clone(), Orientation::Descending))
                .collect(),
        }
    }

    pub fn parts(&self) -> Vec<ComplexPoint<F>> {
        self.xs.iter().chain(&self.ys).cloned().collect()
    }
}

/// The tuples in the support chain of `z`, top first, without repeats.
pub fn support_tuples<F: Field>(z: &ProductPoint<F>) -> Vec<SubspaceTuple<F>> {
    let mu = z.xs.len();
    let mut seen = HashSet::new();
    combine_product(&z.parts())
        .into_iter()
        .map(|(_, mut t)| {
            let ys = t.split_off(mu);
            (t, ys)
        })
        .filter(|t| seen.insert(t.clone()))
        .collect()
}

/// Lovász extension of `R(X, Y)` at `(x, y)`, evaluated along the combined chain.
pub fn r_bar<F: Field>(a: &Bilinear<F>, x: &ComplexPoint<F>, y: &ComplexPoint<F>) -> Result<Rat> {
    let mut total = Rat::ZERO;
    for (c, t) in combine_product(&[x.clone(), y.clone()]) {
        let r = a.restricted_rank(&t[0], &t[1])?;
        if r > 0 {
            total += c * Rat::from(r);
        }
    }
    Ok(total)
}

/// The relaxed objective −ΣC·dim − ΣD·dim + M·ΣR̄ (+ ε Σ d² when `perturbed`),
/// every term being the Lovász extension of its lattice counterpart.
pub fn eval_objective<F: Field>(
    inst: &WmvspInstance<F>,
    z: &ProductPoint<F>,
    perturbed: bool,
) -> Result<Rat> {
    inst.problem().objective(z, perturbed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::frame::{coords_l, recover_l, FrameL};
    use crate::matrix::Mat;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_signeds(n, d)
    }

    fn e(p: u64, n: usize, i: &[usize]) -> Subspace<Gf> {
        Subspace::coordinate(&p, n, i)
    }

    #[test]
    fn combine_two_factors() {
        let p = e(2, 2, &[0]);
        let x = ComplexPoint::new(
            vec![(r(1, 2), p.clone()), (r(1, 2), Subspace::full(&2, 2))],
            Orientation::Ascending,
        )
        .unwrap();
        let q = e(2, 2, &[1]);
        let y = ComplexPoint::vertex(q.clone(), Orientation::Descending);
        let out = combine_product(&[x.clone(), y]);
        assert_eq!(
            out,
            vec![
                (r(1, 2), vec![Subspace::full(&2, 2), q.clone()]),
                (r(1, 2), vec![p, q])
            ]
        );
        let single = combine_product(std::slice::from_ref(&x));
        assert_eq!(single.len(), 2);
        assert_eq!(single[0], (r(1, 2), vec![Subspace::full(&2, 2)]));
    }

    #[test]
    fn d1_examples() {
        assert_eq!(
            ComplexPoint::<Gf>::bottom(&2, 3, Orientation::Ascending).d1(),
            r(0, 1)
        );
        let half = ComplexPoint::new(
            vec![
                (r(1, 2), Subspace::<Gf>::zero(&2, 2)),
                (r(1, 2), Subspace::full(&2, 2)),
            ],
            Orientation::Ascending,
        )
        .unwrap();
        assert_eq!(half.d1(), r(1, 1));
        assert_eq!(
            ComplexPoint::<Gf>::bottom(&2, 3, Orientation::Descending).d1(),
            r(0, 1)
        );
        assert_eq!(
            ComplexPoint::<Gf>::vertex(Subspace::zero(&2, 3), Orientation::Descending).d1(),
            r(3, 1)
        );
    }

    #[test]
    fn d2_examples() {
        let full = ComplexPoint::<Gf>::vertex(Subspace::full(&2, 4), Orientation::Ascending);
        assert_eq!(full.d2(), r(4, 1));
        assert_eq!(
            ComplexPoint::<Gf>::bottom(&2, 4, Orientation::Ascending).d2(),
            r(0, 1)
        );
        let x = ComplexPoint::new(
            vec![(r(1, 2), Subspace::zero(&2, 2)), (r(1, 2), e(2, 2, &[0]))],
            Orientation::Ascending,
        )
        .unwrap();
        assert_eq!(x.d2(), r(1, 4));
    }

    #[test]
    fn point_validation() {
        let z = Subspace::<Gf>::zero(&2, 2);
        assert!(ComplexPoint::new(vec![(r(1, 2), z.clone())], Orientation::Ascending).is_err());
        assert!(ComplexPoint::new(
            vec![(r(1, 2), e(2, 2, &[0])), (r(1, 2), e(2, 2, &[1]))],
            Orientation::Ascending
        )
        .is_err());
        let p = ComplexPoint::new(
            vec![
                (r(1, 2), z.clone()),
                (r(0, 1), e(2, 2, &[0])),
                (r(1, 2), z.clone()),
            ],
            Orientation::Ascending,
        )
        .unwrap();
        assert!(p.is_vertex());
    }

    #[test]
    fn support_tuples_examples() {
        let t = (vec![e(2, 2, &[0])], vec![e(2, 2, &[1])]);
        assert_eq!(support_tuples(&ProductPoint::vertex(&t)), vec![t.clone()]);
        let x = ComplexPoint::new(
            vec![(r(1, 2), e(2, 2, &[0])), (r(1, 2), Subspace::full(&2, 2))],
            Orientation::Ascending,
        )
        .unwrap();
        let z = ProductPoint {
            xs: vec![x],
            ys: vec![ComplexPoint::vertex(e(2, 2, &[1]), Orientation::Descending)],
        };
        assert_eq!(support_tuples(&z).len(), 2);
    }

    fn rand_point(
        p: u64,
        n: usize,
        coords: &[i64],
        denom: i64,
        perm_seed: usize,
    ) -> ComplexPoint<Gf> {
        let mut atoms: Vec<Vec<Gf>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        Gf::new(
                            ((i == j) as i64) + ((j > i && (perm_seed >> (i + j)) & 1 == 1) as i64),
                            p,
                        )
                    })
                    .collect()
            })
            .collect();
        atoms.rotate_left(perm_seed % n.max(1));
        let fr = FrameL::new(&p, atoms).unwrap();
        let c: Vec<Rat> = coords.iter().take(n).map(|&v| r(v, denom)).collect();
        recover_l(&c, &fr).unwrap()
    }

    proptest! {
        #[test]
        fn combine_conserves_and_projects(
            c1 in prop::collection::vec(0i64..=4, 3),
            c2 in prop::collection::vec(0i64..=4, 2),
            c3 in prop::collection::vec(0i64..=4, 3),
            s in 0usize..64,
        ) {
            let parts = vec![rand_point(2, 3, &c1, 4, s), rand_point(2, 2, &c2, 4, s + 1), rand_point(2, 3, &c3, 4, s + 2)];
            let out = combine_product(&parts);
            let total: Rat = out.iter().map(|(c, _)| c.clone()).sum();
            prop_assert!(total == Rat::ONE);
            prop_assert!(out.iter().all(|(c, _)| *c > Rat::ZERO));
            let bound = 1 + parts.iter().map(|p| p.terms().len() - 1).sum::<usize>();
            prop_assert!(out.len() <= bound);
            for (k, p) in parts.iter().enumerate() {
                let proj = ComplexPoint::new(out.iter().map(|(c, t)| (c.clone(), t[k].clone())).collect(), p.orientation()).unwrap();
                prop_assert_eq!(&proj, p);
            }
        }

        #[test]
        fn d2_matches_frame_coordinates(c in prop::collection::vec(0i64..=5, 4), s in 0usize..64) {
            let x = rand_point(3, 4, &c, 5, s);
            let fr = crate::frame::frame_for_chain_l(&x.support().extend_to_maximal(&3, 4)).unwrap();
            let coords = coords_l(&x, &fr).unwrap();
            let sq: Rat = coords.iter().map(|v| v * v).sum();
            prop_assert_eq!(x.d2(), sq);
            prop_assert!(x.d2() <= r(4, 1));
        }
    }

    #[test]
    fn r_bar_vertex_matches_rank() {
        let a = Bilinear::new(Mat::<Gf>::identity(&2, 2));
        let x = ComplexPoint::vertex(Subspace::full(&2, 2), Orientation::Ascending);
        let y = ComplexPoint::vertex(e(2, 2, &[0]), Orientation::Descending);
        assert_eq!(r_bar(&a, &x, &y).unwrap(), r(1, 1));
    }
}
