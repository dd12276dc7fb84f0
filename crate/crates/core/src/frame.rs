//! Frames: Boolean sublattices realized by ordered bases, the common frame of
//! two maximal chains, A-orthogonal frames, and cube coordinates.

use malachite_base::num::basic::traits::{One, Zero};

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::orthoscheme::ComplexPoint;
use crate::subspace::{Orientation, Subspace, SubspaceChain};
use crate::Rat;

/// Frame of L = subspaces of F^m: atom `i` is the line spanned by `atoms[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameL<F: Field> {
    atoms: Vec<Vec<F>>,
    ctx: F::Ctx,
}

/// Frame of M̌ = subspaces of F^n with reversed order. The M̌-atom `f_j` is the
/// hyperplane spanned by every `v_k` except `v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameM<F: Field> {
    vectors: Vec<Vec<F>>,
    ctx: F::Ctx,
}

fn check_basis<F: Field>(ctx: &F::Ctx, vectors: &[Vec<F>]) -> Result<()> {
    let n = vectors.len();
    let m = Mat::from_rows(ctx, n, vectors.to_vec())?;
    if m.rank() != n {
        return Err(Error::InvalidChain("frame vectors are not a basis".into()));
    }
    Ok(())
}

impl<F: Field> FrameL<F> {
    pub fn new(ctx: &F::Ctx, atoms: Vec<Vec<F>>) -> Result<Self> {
        check_basis(ctx, &atoms)?;
        Ok(FrameL {
            atoms,
            ctx: ctx.clone(),
        })
    }

    pub fn atoms(&self) -> &[Vec<F>] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Join of the atoms flagged in `set`.
    pub fn element(&self, set: &[bool]) -> Subspace<F> {
        let rows = self
            .atoms
            .iter()
            .zip(set)
            .filter(|(_, &b)| b)
            .map(|(a, _)| a.clone())
            .collect();
        Subspace::from_vectors(&self.ctx, self.dim(), rows).expect("atoms share width")
    }

    /// Which atoms lie below `s`; fails unless `s` is a join of atoms.
    pub fn index_set(&self, s: &Subspace<F>) -> Result<Vec<bool>> {
        let set: Vec<bool> = self.atoms.iter().map(|a| s.contains_vector(a)).collect();
        if set.iter().filter(|&&b| b).count() != s.dim() {
            return Err(Error::NotRepresentable);
        }
        Ok(set)
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        FrameL {
            atoms: order.iter().map(|&i| self.atoms[i].clone()).collect(),
            ctx: self.ctx.clone(),
        }
    }
}

impl<F: Field> FrameM<F> {
    pub fn new(ctx: &F::Ctx, vectors: Vec<Vec<F>>) -> Result<Self> {
        check_basis(ctx, &vectors)?;
        Ok(FrameM {
            vectors,
            ctx: ctx.clone(),
        })
    }

    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// M̌-join of the atoms flagged in `set`: the span of the `v_k` not flagged.
    pub fn element(&self, set: &[bool]) -> Subspace<F> {
        let rows = self
            .vectors
            .iter()
            .zip(set)
            .filter(|(_, &b)| !b)
            .map(|(v, _)| v.clone())
            .collect();
        Subspace::from_vectors(&self.ctx, self.dim(), rows).expect("vectors share width")
    }

    /// Which M̌-atoms lie below `y` in M̌, i.e. `{j : v_j ∉ y}`.
    pub fn index_set(&self, y: &Subspace<F>) -> Result<Vec<bool>> {
        let inside: Vec<bool> = self.vectors.iter().map(|v| y.contains_vector(v)).collect();
        if inside.iter().filter(|&&b| b).count() != y.dim() {
            return Err(Error::NotRepresentable);
        }
        Ok(inside.into_iter().map(|b| !b).collect())
    }

    /// The M̌-atom `f_j` as a subspace.
    pub fn hyperplane(&self, j: usize) -> Subspace<F> {
        let mut set = vec![false; self.dim()];
        set[j] = true;
        self.element(&set)
    }
}

/// Paired frames diagonalizing a bilinear form: `e_iᵀ A v_j = diag[i]` when
/// `i = j < r`, zero otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AOrthFrame<F: Field> {
    pub e: FrameL<F>,
    pub f: FrameM<F>,
    pub r: usize,
    pub diag: Vec<F>,
}

impl<F: Field> AOrthFrame<F> {
    /// `P[i][j] = e_iᵀ A v_j`.
    pub fn pairing_matrix(&self, a: &Bilinear<F>) -> Result<Mat<F>> {
        let e = Mat::from_rows(&self.e.ctx, a.rows(), self.e.atoms.clone())?;
        let v = Mat::from_rows(&self.f.ctx, a.cols(), self.f.vectors.clone())?;
        e.mat_mul(a.matrix())?.mat_mul(&v.transpose())
    }

    /// True iff the pairing matrix is diagonal with exactly `r` nonzeros, all in front.
    pub fn is_valid_for(&self, a: &Bilinear<F>) -> Result<bool> {
        let p = self.pairing_matrix(a)?;
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                let d = p.get(i, j);
                let ok = if i == j && i < self.r {
                    *d == self.diag[i] && !d.is_zero()
                } else {
                    d.is_zero()
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(self.r == a.rank() && self.diag.len() == self.r)
    }
}

fn require_maximal<F: Field>(c: &SubspaceChain<F>, ambient: usize, o: Orientation) -> Result<()> {
    if c.orientation() != o {
        return Err(Error::InvalidChain("wrong chain orientation".into()));
    }
    if let Some(s) = c.elements().first() {
        if s.ambient() != ambient {
            return Err(Error::AmbientMismatch {
                left: s.ambient(),
                right: ambient,
            });
        }
    }
    if !c.is_maximal(ambient) {
        return Err(Error::NotMaximal(format!(
            "chain of length {} in dimension {ambient}",
            c.len()
        )));
    }
    Ok(())
}

/// First basis vector of `outer` outside `inner`.
fn new_vector<F: Field>(outer: &Subspace<F>, inner: &Subspace<F>) -> Vec<F> {
    outer
        .basis()
        .row_vecs()
        .into_iter()
        .find(|v| !inner.contains_vector(v))
        .expect("outer strictly contains inner")
}

/// A frame in which every element of both maximal ascending chains is a join of atoms.
pub fn frame_for_two_chains<F: Field>(
    c: &SubspaceChain<F>,
    d: &SubspaceChain<F>,
) -> Result<FrameL<F>> {
    let Some(first) = c.elements().first() else {
        return Err(Error::NotMaximal("empty chain".into()));
    };
    let n = first.ambient();
    let ctx = first.ctx().clone();
    require_maximal(c, n, Orientation::Ascending)?;
    require_maximal(d, n, Orientation::Ascending)?;
    let (p, q) = (c.elements(), d.elements());
    let meets: Vec<Vec<Subspace<F>>> = p
        .iter()
        .map(|pi| q.iter().map(|qj| pi.meet(qj)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut atoms = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        let j = (1..=n)
            .find(|&j| meets[i][j].dim() == meets[i - 1][j].dim() + 1)
            .expect("p_i ∧ 1 gains a dimension over p_{i-1} ∧ 1");
        debug_assert!(!used[j], "sigma must be a bijection");
        used[j] = true;
        atoms.push(new_vector(&meets[i][j], &meets[i - 1][j - 1]));
    }
    FrameL::new(&ctx, atoms)
}

/// Frame of L adapted to one maximal ascending chain.
pub fn frame_for_chain_l<F: Field>(c: &SubspaceChain<F>) -> Result<FrameL<F>> {
    frame_for_two_chains(c, c)
}

/// Frame of M̌ adapted to one maximal descending chain `V = Y_0 ⊃ … ⊃ Y_n = {0}`:
/// `v_i ∈ Y_{i-1} \ Y_i`, so `Y_i` is the M̌-join of the first `i` atoms.
pub fn frame_for_chain_m<F: Field>(c: &SubspaceChain<F>) -> Result<FrameM<F>> {
    let Some(first) = c.elements().first() else {
        return Err(Error::NotMaximal("empty chain".into()));
    };
    let n = first.ambient();
    require_maximal(c, n, Orientation::Descending)?;
    let ys = c.elements();
    let vectors = (1..=n).map(|i| new_vector(&ys[i - 1], &ys[i])).collect();
    FrameM::new(first.ctx(), vectors)
}

/// Dedupes an ascending sequence that may repeat elements.
fn dedupe<F: Field>(v: Vec<Subspace<F>>) -> Vec<Subspace<F>> {
    let mut out: Vec<Subspace<F>> = Vec::with_capacity(v.len());
    for s in v {
        if out.last() != Some(&s) {
            out.push(s);
        }
    }
    out
}

/// An A-orthogonal frame whose L part contains `x_chain` and `y_chain^⊥`, and
/// whose M̌ part contains `y_chain` and `x_chain^⊥`.
pub fn a_orthogonal_frame<F: Field>(
    a: &Bilinear<F>,
    x_chain: &SubspaceChain<F>,
    y_chain: &SubspaceChain<F>,
) -> Result<AOrthFrame<F>> {
    let (m, n) = (a.rows(), a.cols());
    let ctx = a.ctx().clone();
    require_maximal(x_chain, m, Orientation::Ascending)?;
    require_maximal(y_chain, n, Orientation::Descending)?;

    // (i) common frame of X and Y^⊥
    let yperp: Vec<Subspace<F>> = y_chain
        .elements()
        .iter()
        .map(|y| a.left_orth(y))
        .collect::<Result<_>>()?;
    let yperp =
        SubspaceChain::new(dedupe(yperp), Orientation::Ascending)?.extend_to_maximal(&ctx, m);
    let e0 = frame_for_two_chains(x_chain, &yperp)?;

    // (ii) atoms pairing nontrivially first, left-kernel atoms last
    let images: Vec<Vec<F>> = e0
        .atoms()
        .iter()
        .map(|u| a.matrix().left_apply(u))
        .collect();
    let live: Vec<usize> = (0..m)
        .filter(|&i| images[i].iter().any(|x| !x.is_zero()))
        .collect();
    let dead = (0..m).filter(|&i| images[i].iter().all(|x| x.is_zero()));
    let order: Vec<usize> = live.iter().copied().chain(dead).collect();
    let r = live.len();
    let e = e0.permuted(&order);

    // (iii)+(iv) functionals φ: φ_i = e_i A for i < r, the rest picked along Ann(Y_j)
    let mut phi: Vec<Option<Vec<F>>> = live.iter().map(|&i| Some(images[i].clone())).collect();
    phi.resize(n, None);
    let w = Subspace::from_vectors(&ctx, n, phi[..r].iter().flatten().cloned().collect())?;
    let mut next_free = r;
    let mut prev = Subspace::zero(&ctx, n);
    for yj in &y_chain.elements()[1..] {
        let t = Subspace::from_spanning(&yj.annihilator());
        let grew = t.meet(&w)?.dim() > prev.meet(&w)?.dim();
        if grew {
            debug_assert!(phi[..r]
                .iter()
                .flatten()
                .any(|f| t.contains_vector(f) && !prev.contains_vector(f)));
        } else {
            phi[next_free] = Some(new_vector(&t, &prev));
            next_free += 1;
        }
        prev = t;
    }
    let phi: Vec<Vec<F>> = phi
        .into_iter()
        .map(|f| f.expect("every functional assigned"))
        .collect();
    let phi = Mat::from_rows(&ctx, n, phi)?;
    let dual = phi
        .inverse()
        .ok_or_else(|| Error::InvalidChain("functionals are dependent".into()))?
        .transpose();
    let f = FrameM::new(&ctx, dual.row_vecs())?;
    let diag = vec![F::one(&ctx); r];
    Ok(AOrthFrame { e, f, r, diag })
}

fn coords_by<F: Field>(
    x: &ComplexPoint<F>,
    dim: usize,
    index_set: impl Fn(&Subspace<F>) -> Result<Vec<bool>>,
) -> Result<Vec<Rat>> {
    let mut out = vec![Rat::ZERO; dim];
    for (c, s) in x.terms() {
        for (o, inside) in out.iter_mut().zip(index_set(s)?) {
            if inside {
                *o += c;
            }
        }
    }
    Ok(out)
}

fn recover_by<F: Field>(
    coords: &[Rat],
    orientation: Orientation,
    element: impl Fn(&[bool]) -> Subspace<F>,
) -> Result<ComplexPoint<F>> {
    let one = Rat::ONE;
    if let Some(bad) = coords.iter().find(|c| **c < Rat::ZERO || **c > one) {
        return Err(Error::OutOfRange(format!("coordinate {bad} outside [0,1]")));
    }
    let n = coords.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| coords[j].cmp(&coords[i]).then(i.cmp(&j)));
    let mut set = vec![false; n];
    let mut terms = Vec::new();
    let mut upper = one.clone();
    for &i in &order {
        let c = &upper - &coords[i];
        if c != Rat::ZERO {
            terms.push((c, element(&set)));
        }
        set[i] = true;
        upper = coords[i].clone();
    }
    if upper != Rat::ZERO {
        terms.push((upper, element(&set)));
    }
    ComplexPoint::new(terms, orientation)
}

/// Cube coordinates of `x` in `fr`: coordinate `i` sums the coefficients of
/// support elements containing atom `i`.
pub fn coords_l<F: Field>(x: &ComplexPoint<F>, fr: &FrameL<F>) -> Result<Vec<Rat>> {
    coords_by(x, fr.dim(), |s| fr.index_set(s))
}

/// Inverse of [`coords_l`]: sort the coordinates decreasingly and telescope.
pub fn recover_l<F: Field>(coords: &[Rat], fr: &FrameL<F>) -> Result<ComplexPoint<F>> {
    if coords.len() != fr.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for {} atoms",
            coords.len(),
            fr.dim()
        )));
    }
    recover_by(coords, Orientation::Ascending, |s| fr.element(s))
}

/// M̌ mirror of [`coords_l`]: `coords_m(1·V) = 0`, `coords_m(1·{0}) = 1`.
pub fn coords_m<F: Field>(y: &ComplexPoint<F>, fr: &FrameM<F>) -> Result<Vec<Rat>> {
    coords_by(y, fr.dim(), |s| fr.index_set(s))
}

pub fn recover_m<F: Field>(coords: &[Rat], fr: &FrameM<F>) -> Result<ComplexPoint<F>> {
    if coords.len() != fr.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for {} atoms",
            coords.len(),
            fr.dim()
        )));
    }
    recover_by(coords, Orientation::Descending, |s| fr.element(s))
}
