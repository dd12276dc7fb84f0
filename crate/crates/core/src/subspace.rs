//! The subspace lattice of F^k: canonical subspaces, lattice operations,
//! chains and exhaustive enumeration over prime fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::matrix::Mat;

/// Default cap on the number of subspaces [`enumerate_subspaces`] will produce.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000;

/// A subspace stored by its RREF basis, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    basis: Mat<F>,
}

impl<F: Field> Subspace<F> {
    /// Row space of `vectors`.
    pub fn from_spanning(vectors: &Mat<F>) -> Self {
        Subspace {
            basis: vectors.rref().reduced.nonzero_rows(),
        }
    }

    pub fn from_vectors(ctx: &F::Ctx, ambient: usize, vectors: Vec<Vec<F>>) -> Result<Self> {
        Ok(Self::from_spanning(&Mat::from_rows(ctx, ambient, vectors)?))
    }

    pub fn zero(ctx: &F::Ctx, ambient: usize) -> Self {
        Subspace {
            basis: Mat::zeros(ctx, 0, ambient),
        }
    }

    pub fn full(ctx: &F::Ctx, ambient: usize) -> Self {
        Subspace {
            basis: Mat::identity(ctx, ambient),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ctx: &F::Ctx, ambient: usize, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| {
                let mut v = vec![F::zero(ctx); ambient];
                v[i] = F::one(ctx);
                v
            })
            .collect();
        Self::from_vectors(ctx, ambient, rows).expect("widths agree")
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.basis.ctx()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Mat<F> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx() != other.ctx() {
            return Err(Error::FieldMismatch);
        }
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch {
                left: self.ambient(),
                right: other.ambient(),
            });
        }
        Ok(())
    }

    /// Rows of a matrix whose kernel is this subspace.
    pub fn annihilator(&self) -> Mat<F> {
        self.basis.kernel_basis()
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let constraints = self.annihilator().stack(&other.annihilator())?;
        Ok(Subspace {
            basis: constraints.kernel_basis(),
        })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_spanning(&self.basis.stack(&other.basis)?))
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(other.basis.rows() == 0 || self.basis.stack(&other.basis)?.rank() == self.dim())
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        let mut m = self.basis.clone();
        m.push_row(v.to_vec());
        m.rank() == self.dim()
    }

    /// Span of `self` and one more vector.
    pub fn with_vector(&self, v: &[F]) -> Self {
        let mut m = self.basis.clone();
        m.push_row(v.to_vec());
        Self::from_spanning(&m)
    }

    /// A complement of `inner` inside `outer`, found by greedily extending
    /// `inner` with the basis vectors of `outer` in order.
    pub fn complement_within(inner: &Self, outer: &Self) -> Result<Self> {
        inner.check(outer)?;
        if !outer.contains(inner)? {
            return Err(Error::NotContained(
                "inner is not a subspace of outer".into(),
            ));
        }
        let mut acc = inner.clone();
        let mut picked = Mat::zeros(inner.ctx(), 0, inner.ambient());
        for v in outer.basis.row_vecs() {
            if acc.dim() == outer.dim() {
                break;
            }
            if !acc.contains_vector(&v) {
                acc = acc.with_vector(&v);
                picked.push_row(v);
            }
        }
        Ok(Self::from_spanning(&picked))
    }

    /// Image under `v ↦ v·m` (row vectors).
    pub fn image(&self, m: &Mat<F>) -> Result<Self> {
        Ok(Self::from_spanning(&self.basis.mat_mul(m)?))
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in F^{}: {:?})",
            self.dim(),
            self.ambient(),
            self.basis
        )
    }
}

pub fn meet<F: Field>(x: &Subspace<F>, y: &Subspace<F>) -> Result<Subspace<F>> {
    x.meet(y)
}

pub fn join<F: Field>(x: &Subspace<F>, y: &Subspace<F>) -> Result<Subspace<F>> {
    x.join(y)
}

pub fn contains<F: Field>(x: &Subspace<F>, y: &Subspace<F>) -> Result<bool> {
    x.contains(y)
}

pub fn complement_within<F: Field>(
    inner: &Subspace<F>,
    outer: &Subspace<F>,
) -> Result<Subspace<F>> {
    Subspace::complement_within(inner, outer)
}

/// Direction of a chain. `Descending` chains live in the opposite lattice M̌,
/// whose bottom is the full space and whose top is `{0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ascending,
    Descending,
}

impl Orientation {
    /// Lattice rank of `s` in this orientation: `dim` for L, `ambient − dim` for M̌.
    pub fn rank_of<F: Field>(self, s: &Subspace<F>) -> usize {
        match self {
            Orientation::Ascending => s.dim(),
            Orientation::Descending => s.ambient() - s.dim(),
        }
    }

    pub fn bottom<F: Field>(self, ctx: &F::Ctx, ambient: usize) -> Subspace<F> {
        match self {
            Orientation::Ascending => Subspace::zero(ctx, ambient),
            Orientation::Descending => Subspace::full(ctx, ambient),
        }
    }

    pub fn top<F: Field>(self, ctx: &F::Ctx, ambient: usize) -> Subspace<F> {
        self.flip().bottom(ctx, ambient)
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Ascending => Orientation::Descending,
            Orientation::Descending => Orientation::Ascending,
        }
    }

    /// `a ≤ b` in this orientation.
    pub fn le<F: Field>(self, a: &Subspace<F>, b: &Subspace<F>) -> Result<bool> {
        match self {
            Orientation::Ascending => b.contains(a),
            Orientation::Descending => a.contains(b),
        }
    }
}

/// A strictly nested list of subspaces, bottom first in its orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceChain<F: Field> {
    elements: Vec<Subspace<F>>,
    orientation: Orientation,
}

impl<F: Field> SubspaceChain<F> {
    pub fn new(elements: Vec<Subspace<F>>, orientation: Orientation) -> Result<Self> {
        for w in elements.windows(2) {
            w[0].check(&w[1])?;
            if w[0] == w[1] || !orientation.le(&w[0], &w[1])? {
                return Err(Error::InvalidChain(
                    "elements are not strictly nested".into(),
                ));
            }
        }
        Ok(SubspaceChain {
            elements,
            orientation,
        })
    }

    /// The coordinate flag `{0} ⊂ span e1 ⊂ … ⊂ F^n`, reversed for `Descending`.
    pub fn standard(ctx: &F::Ctx, ambient: usize, orientation: Orientation) -> Self {
        let mut elements: Vec<_> = (0..=ambient)
            .map(|k| Subspace::coordinate(ctx, ambient, &(0..k).collect::<Vec<_>>()))
            .collect();
        if orientation == Orientation::Descending {
            elements.reverse();
        }
        SubspaceChain {
            elements,
            orientation,
        }
    }

    pub fn elements(&self) -> &[Subspace<F>] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Subspace<F>> {
        self.elements
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// One element per rank, from bottom to top.
    pub fn is_maximal(&self, ambient: usize) -> bool {
        self.elements.len() == ambient + 1
            && self
                .elements
                .iter()
                .enumerate()
                .all(|(k, s)| s.ambient() == ambient && self.orientation.rank_of(s) == k)
    }

    /// Refines the chain to a maximal one containing every input element.
    pub fn extend_to_maximal(&self, ctx: &F::Ctx, ambient: usize) -> Self {
        let mut asc: Vec<Subspace<F>> = self.elements.clone();
        if self.orientation == Orientation::Descending {
            asc.reverse();
        }
        if asc.first().is_none_or(|s| !s.is_zero()) {
            asc.insert(0, Subspace::zero(ctx, ambient));
        }
        if !asc.last().expect("nonempty").is_full() {
            asc.push(Subspace::full(ctx, ambient));
        }
        let mut out = vec![asc[0].clone()];
        for upper in &asc[1..] {
            let mut cur = out.last().expect("nonempty").clone();
            for v in upper.basis.row_vecs() {
                if cur.dim() + 1 >= upper.dim() {
                    break;
                }
                if !cur.contains_vector(&v) {
                    cur = cur.with_vector(&v);
                    out.push(cur.clone());
                }
            }
            out.push(upper.clone());
        }
        if self.orientation == Orientation::Descending {
            out.reverse();
        }
        SubspaceChain {
            elements: out,
            orientation: self.orientation,
        }
    }
}

pub fn extend_to_maximal_chain<F: Field>(
    c: &SubspaceChain<F>,
    ctx: &F::Ctx,
    ambient: usize,
) -> SubspaceChain<F> {
    c.extend_to_maximal(ctx, ambient)
}

/// Number of `k`-dimensional subspaces of GF(p)^n.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(p.saturating_pow((n - i) as u32).saturating_sub(1));
        den = den.saturating_mul(p.saturating_pow((i + 1) as u32) - 1);
    }
    num / den
}

/// Total number of subspaces of GF(p)^n (saturating).
pub fn subspace_count(n: usize, p: u64) -> u128 {
    (0..=n).fold(0u128, |acc, k| {
        acc.saturating_add(gaussian_binomial(n, k, p))
    })
}

/// Every subspace of GF(p)^n, each once, ordered by dimension then pivot set.
pub fn enumerate_subspaces(ambient: usize, p: u64, limit: u128) -> Result<Vec<Subspace<Gf>>> {
    let count = subspace_count(ambient, p);
    if count > limit {
        return Err(Error::LimitExceeded { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    for k in 0..=ambient {
        for pivots in combinations(ambient, k) {
            // free slots: row i, columns after its pivot that are not pivots
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &pc)| {
                    let piv = &pivots;
                    (pc + 1..ambient)
                        .filter(move |j| !piv.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let total = (p as u128).pow(free.len() as u32);
            for mut code in 0..total {
                let mut m = Mat::<Gf>::zeros(&p, k, ambient);
                for (i, &pc) in pivots.iter().enumerate() {
                    m.set(i, pc, Gf::new(1, p));
                }
                for &(i, j) in &free {
                    m.set(i, j, Gf::new((code % p as u128) as i64, p));
                    code /= p as u128;
                }
                out.push(Subspace { basis: m });
            }
        }
    }
    Ok(out)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
