//! Random instances, flags and cube points.

use rand::Rng;
use wmvsp::subspace::{enumerate_subspaces, DEFAULT_ENUMERATION_LIMIT};
use wmvsp::{
    Field, Gf, GfInstance, Mat, Orientation, QInstance, Rat, Subspace, SubspaceChain,
    WmvspInstance, Q,
};

pub struct Shape {
    pub max_blocks: usize,
    pub max_dim: usize,
    pub max_entry: i64,
    pub max_weight: i64,
}

fn block_type<R: Rng>(rng: &mut R, s: &Shape) -> (Vec<usize>, Vec<usize>) {
    let mu = rng.gen_range(1..=s.max_blocks);
    let nu = rng.gen_range(1..=s.max_blocks);
    let rd = (0..mu).map(|_| rng.gen_range(1..=s.max_dim)).collect();
    let cd = (0..nu).map(|_| rng.gen_range(1..=s.max_dim)).collect();
    (rd, cd)
}

fn weights<R: Rng>(rng: &mut R, k: usize, max: i64) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(0..=max)).collect()
}

pub fn gf_matrix<R: Rng>(rng: &mut R, p: u64, m: usize, n: usize, max_entry: i64) -> Mat<Gf> {
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max_entry)).collect())
        .collect();
    Mat::from_ints(&p, n, &rows).unwrap()
}

pub fn gf_instance<R: Rng>(rng: &mut R, p: u64, s: &Shape) -> GfInstance {
    let (rd, cd) = block_type(rng, s);
    let a = gf_matrix(rng, p, rd.iter().sum(), cd.iter().sum(), s.max_entry);
    let (c, d) = (
        weights(rng, rd.len(), s.max_weight),
        weights(rng, cd.len(), s.max_weight),
    );
    WmvspInstance::from_matrix(&a, rd, cd, c, d).unwrap()
}

/// Entries `k/d` with `|k| ≤ 3`, `d ≤ 3`, zero about a third of the time.
pub fn q_instance<R: Rng>(rng: &mut R, s: &Shape) -> QInstance {
    let (rd, cd) = block_type(rng, s);
    let (m, n): (usize, usize) = (rd.iter().sum(), cd.iter().sum());
    let rows = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(1.0 / 3.0) {
                        Q::zero(&())
                    } else {
                        let k = rng.gen_range(-3i64..=3);
                        let d = rng.gen_range(1i64..=3);
                        Q::parse(&(), &format!("{k}/{d}")).unwrap()
                    }
                })
                .collect()
        })
        .collect();
    let a = Mat::from_rows(&(), n, rows).unwrap();
    let (c, d) = (
        weights(rng, rd.len(), s.max_weight),
        weights(rng, cd.len(), s.max_weight),
    );
    WmvspInstance::from_matrix(&a, rd, cd, c, d).unwrap()
}

/// A uniformly random complete flag of `GF(p)^n` from a random invertible matrix.
pub fn random_flag<R: Rng>(
    rng: &mut R,
    p: u64,
    n: usize,
    orientation: Orientation,
) -> SubspaceChain<Gf> {
    let g = loop {
        let g = gf_matrix(rng, p, n, n, p as i64 - 1);
        if g.rank() == n {
            break g;
        }
    };
    let mut els: Vec<Subspace<Gf>> = (0..=n)
        .map(|k| Subspace::from_spanning(&g.select_rows(&(0..k).collect::<Vec<_>>())))
        .collect();
    if orientation == Orientation::Descending {
        els.reverse();
    }
    SubspaceChain::new(els, orientation).unwrap()
}

/// Every complete flag of `GF(p)^n`, ascending.
pub fn all_maximal_chains(p: u64, n: usize) -> Vec<SubspaceChain<Gf>> {
    let subs = enumerate_subspaces(n, p, DEFAULT_ENUMERATION_LIMIT).unwrap();
    let mut chains: Vec<Vec<Subspace<Gf>>> = vec![vec![Subspace::zero(&p, n)]];
    for d in 1..=n {
        chains = chains
            .into_iter()
            .flat_map(|c| {
                let top = c.last().unwrap().clone();
                subs.iter()
                    .filter(|s| s.dim() == d && s.contains(&top).unwrap())
                    .map(|s| {
                        let mut c2 = c.clone();
                        c2.push(s.clone());
                        c2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    chains
        .into_iter()
        .map(|c| SubspaceChain::new(c, Orientation::Ascending).unwrap())
        .collect()
}

/// A rational in `[0, 1]` with denominator `den`.
pub fn unit_rat<R: Rng>(rng: &mut R, den: u64) -> Rat {
    Rat::from_unsigneds(rng.gen_range(0..=den), den)
}

pub fn unit_coords<R: Rng>(rng: &mut R, n: usize, den: u64) -> Vec<Rat> {
    (0..n).map(|_| unit_rat(rng, den)).collect()
}

/// Span of the vectors indexed by `set` (complement when `complement`).
pub fn span_of<F: Field>(
    ctx: &F::Ctx,
    n: usize,
    vectors: &[Vec<F>],
    set: usize,
    complement: bool,
) -> Subspace<F> {
    let rows = vectors
        .iter()
        .enumerate()
        .filter(|(i, _)| (set >> i & 1 == 1) != complement)
        .map(|(_, v)| v.clone())
        .collect();
    Subspace::from_vectors(ctx, n, rows).unwrap()
}

/// Whether `s` is the span of some subset of `vectors` (or of the complement
/// of a subset when `complement`), found by brute force.
pub fn is_subset_span<F: Field>(
    ctx: &F::Ctx,
    vectors: &[Vec<F>],
    s: &Subspace<F>,
    complement: bool,
) -> bool {
    let n = s.ambient();
    (0..1usize << vectors.len()).any(|set| span_of(ctx, n, vectors, set, complement) == *s)
}
