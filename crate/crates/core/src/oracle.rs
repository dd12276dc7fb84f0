//! Exhaustive ground truth over small prime fields.

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::orthoscheme::SubspaceTuple;
use crate::sppa::WmvspInstance;
use crate::subspace::{enumerate_subspaces, subspace_count, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_tuples: u128,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit {
            max_tuples: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: i64,
    /// Every vanishing tuple attaining the optimum, in enumeration order.
    pub optima: Vec<SubspaceTuple<Gf>>,
}

fn lattices(dims: &[usize], p: u64, limit: u128) -> Result<Vec<Vec<Subspace<Gf>>>> {
    dims.iter()
        .map(|&d| enumerate_subspaces(d, p, limit))
        .collect()
}

fn check_count(dims: impl Iterator<Item = usize>, p: u64, limit: u128) -> Result<()> {
    let count = dims.fold(1u128, |acc, d| acc.saturating_mul(subspace_count(d, p)));
    if count > limit {
        return Err(Error::LimitExceeded { count, limit });
    }
    Ok(())
}

struct Search<'a> {
    inst: &'a WmvspInstance<Gf>,
    xs: &'a [Vec<Subspace<Gf>>],
    ys: &'a [Vec<Subspace<Gf>>],
    best: i64,
    optima: Vec<SubspaceTuple<Gf>>,
}

impl Search<'_> {
    fn go_x(&mut self, cur: &mut Vec<Subspace<Gf>>) {
        let al = cur.len();
        if al == self.xs.len() {
            self.go_y(cur, &mut Vec::new());
            return;
        }
        for x in &self.xs[al] {
            cur.push(x.clone());
            self.go_x(cur);
            cur.pop();
        }
    }

    fn go_y(&mut self, xs: &[Subspace<Gf>], cur: &mut Vec<Subspace<Gf>>) {
        let be = cur.len();
        if be == self.ys.len() {
            let t = (xs.to_vec(), cur.clone());
            let v = self.inst.weighted_dim(&t);
            if v > self.best {
                self.best = v;
                self.optima.clear();
            }
            if v == self.best {
                self.optima.push(t);
            }
            return;
        }
        for y in &self.ys[be] {
            // early cutoff: every block of this column must already vanish
            let ok = (0..xs.len()).all(|al| {
                self.inst
                    .block(al, be)
                    .vanishes_on(&xs[al], y)
                    .expect("shapes checked")
            });
            if ok {
                cur.push(y.clone());
                self.go_y(xs, cur);
                cur.pop();
            }
        }
    }
}

/// Maximum of `ΣC dim X + ΣD dim Y` over all vanishing tuples, with every optimum.
pub fn brute_force_wmvsp(inst: &WmvspInstance<Gf>, limit: OracleLimit) -> Result<OracleResult> {
    brute_force_wmvsp_jobs(inst, limit, 1)
}

/// As [`brute_force_wmvsp`], splitting the first row lattice across `jobs` threads.
pub fn brute_force_wmvsp_jobs(
    inst: &WmvspInstance<Gf>,
    limit: OracleLimit,
    jobs: usize,
) -> Result<OracleResult> {
    let p = *inst.ctx();
    let dims = inst.row_dims().iter().chain(inst.col_dims()).copied();
    check_count(dims, p, limit.max_tuples)?;
    let xs = lattices(inst.row_dims(), p, limit.max_tuples)?;
    let ys = lattices(inst.col_dims(), p, limit.max_tuples)?;
    let run = |first: &[Subspace<Gf>]| {
        let mut lx = xs.clone();
        if let Some(l) = lx.first_mut() {
            *l = first.to_vec();
        }
        let mut s = Search {
            inst,
            xs: &lx,
            ys: &ys,
            best: i64::MIN,
            optima: Vec::new(),
        };
        s.go_x(&mut Vec::new());
        (s.best, s.optima)
    };
    let parts: Vec<(i64, Vec<SubspaceTuple<Gf>>)> = match xs.first() {
        Some(first) if jobs > 1 && first.len() > 1 => {
            let chunk = first.len().div_ceil(jobs);
            std::thread::scope(|sc| {
                let handles: Vec<_> = first
                    .chunks(chunk)
                    .map(|c| sc.spawn(move || run(c)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("oracle worker panicked"))
                    .collect()
            })
        }
        Some(first) => vec![run(first)],
        None => vec![run(&[])],
    };
    let optimum = parts
        .iter()
        .map(|(b, _)| *b)
        .max()
        .expect("at least one part");
    let optima = parts
        .into_iter()
        .filter(|(b, _)| *b == optimum)
        .flat_map(|(_, o)| o)
        .collect();
    Ok(OracleResult { optimum, optima })
}

/// `m + n − max{dim X + dim Y : A_i(X, Y) = 0 for all i}`.
pub fn brute_force_ncrank(matrices: &[Bilinear<Gf>], limit: OracleLimit) -> Result<usize> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no matrices".into()))?;
    let (m, n, p) = (first.rows(), first.cols(), *first.ctx());
    if matrices.iter().any(|b| b.rows() != m || b.cols() != n) {
        return Err(Error::ShapeMismatch("matrices differ in shape".into()));
    }
    check_count([m, n].into_iter(), p, limit.max_tuples)?;
    let xs = enumerate_subspaces(m, p, limit.max_tuples)?;
    let ys = enumerate_subspaces(n, p, limit.max_tuples)?;
    let mut best = 0;
    for x in &xs {
        for y in &ys {
            if x.dim() + y.dim() > best
                && matrices
                    .iter()
                    .all(|a| a.vanishes_on(x, y).expect("shapes checked"))
            {
                best = x.dim() + y.dim();
            }
        }
    }
    Ok(m + n - best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;

    fn inst(rows: &[Vec<i64>], rd: Vec<usize>, cd: Vec<usize>) -> WmvspInstance<Gf> {
        let m = Mat::from_ints(&2, rows[0].len(), rows).unwrap();
        let (c, d) = (vec![1; rd.len()], vec![1; cd.len()]);
        WmvspInstance::from_matrix(&m, rd, cd, c, d).unwrap()
    }

    #[test]
    fn diagonal_scalar_blocks() {
        let i = inst(&[vec![1, 0], vec![0, 1]], vec![1, 1], vec![1, 1]);
        let res = brute_force_wmvsp(&i, OracleLimit::default()).unwrap();
        assert_eq!(res.optimum, 2);
        let f = Subspace::full(&2, 1);
        let z = Subspace::zero(&2, 1);
        let a = (vec![f.clone(), z.clone()], vec![z.clone(), f.clone()]);
        let b = (vec![z.clone(), f.clone()], vec![f.clone(), z.clone()]);
        assert_eq!(res.optima.len(), 4);
        assert!(res.optima.contains(&a) && res.optima.contains(&b));
        assert_eq!(
            brute_force_wmvsp_jobs(&i, OracleLimit::default(), 3).unwrap(),
            res
        );
    }

    #[test]
    fn zero_matrix_all_full() {
        let i = inst(&[vec![0, 0, 0], vec![0, 0, 0]], vec![1, 1], vec![2, 1]);
        let res = brute_force_wmvsp(&i, OracleLimit::default()).unwrap();
        assert_eq!(res.optimum, 5);
        assert_eq!(res.optima.len(), 1);
        assert!(res.optima[0]
            .0
            .iter()
            .chain(&res.optima[0].1)
            .all(|s| s.is_full()));
    }

    #[test]
    fn identity_pairs() {
        let i = inst(&[vec![1, 0], vec![0, 1]], vec![2], vec![2]);
        let res = brute_force_wmvsp(&i, OracleLimit::default()).unwrap();
        assert_eq!(res.optimum, 2);
        let a = i.block(0, 0);
        for (xs, ys) in &res.optima {
            assert_eq!(ys[0], a.right_orth(&xs[0]).unwrap());
        }
        assert_eq!(res.optima.len(), 5);
    }

    #[test]
    fn limit_is_enforced() {
        let i = inst(&[vec![1, 0], vec![0, 1]], vec![2], vec![2]);
        assert!(matches!(
            brute_force_wmvsp(&i, OracleLimit { max_tuples: 10 }),
            Err(Error::LimitExceeded {
                count: 25,
                limit: 10
            })
        ));
    }

    #[test]
    fn ncrank_examples() {
        let i2 = Bilinear::new(Mat::<Gf>::identity(&2, 2));
        assert_eq!(
            brute_force_ncrank(std::slice::from_ref(&i2), OracleLimit::default()).unwrap(),
            2
        );
        let z = Bilinear::new(Mat::<Gf>::zeros(&2, 2, 2));
        assert_eq!(brute_force_ncrank(&[z], OracleLimit::default()).unwrap(), 0);
        let a = Bilinear::new(Mat::<Gf>::from_ints(&2, 2, &[vec![1, 0], vec![0, 0]]).unwrap());
        let b = Bilinear::new(Mat::<Gf>::from_ints(&2, 2, &[vec![0, 1], vec![1, 1]]).unwrap());
        let v = brute_force_ncrank(&[a.clone(), b.clone()], OracleLimit::default()).unwrap();
        assert!(v >= a.rank().max(b.rank()) && v <= 2);
    }
}
