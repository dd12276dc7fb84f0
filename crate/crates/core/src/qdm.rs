//! Quasi-DM decomposition: a block-triangular form whose diagonal blocks are
//! quasi DM-irreducible, found by solving WMVSP under special weights.

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::orthoscheme::SubspaceTuple;
use crate::sppa::{solve_wmvsp, SolverConfig, WmvspInstance};
use crate::subspace::{complement_within, Subspace};
use crate::Rat;
use malachite_base::num::basic::traits::One;

/// Anything that returns an optimal tuple of a WMVSP instance. With `Some(t)`
/// the solver may instead return any vanishing tuple of weighted dimension above `t`.
pub type WmvspSolver<'a, F> =
    dyn FnMut(&WmvspInstance<F>, Option<i64>) -> Result<SubspaceTuple<F>> + 'a;

/// Which extreme mv-subspace the weights single out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extreme {
    Max,
    Min,
}

/// Weights whose unique optimum is the maximal (resp. minimal) mv-subspace.
pub fn weights_extreme<F: Field>(inst: &WmvspInstance<F>, which: Extreme) -> (Vec<i64>, Vec<i64>) {
    let (mu, nu) = (inst.mu(), inst.nu());
    match which {
        Extreme::Max => {
            let m = inst.m() as i64;
            (vec![m + 2; mu], vec![m + 1; nu])
        }
        Extreme::Min => {
            let n = inst.n() as i64;
            (vec![n + 1; mu], vec![n + 2; nu])
        }
    }
}

/// Weights favouring row block `alpha` among mv-subspaces of a DM-regular instance.
pub fn weights_row<F: Field>(
    inst: &WmvspInstance<F>,
    alpha: usize,
) -> Result<(Vec<i64>, Vec<i64>)> {
    let ma = *inst
        .row_dims()
        .get(alpha)
        .ok_or(Error::IndexOutOfRange(alpha))? as i64;
    let m = inst.m() as i64;
    let mp = 2 * ma + 1;
    let c = (0..inst.mu())
        .map(|a| {
            if a == alpha {
                m * mp * (mp + 1)
            } else {
                m * mp * mp
            }
        })
        .collect();
    Ok((c, vec![mp * (m * mp + ma); inst.nu()]))
}

/// Column analogue of [`weights_row`].
pub fn weights_col<F: Field>(inst: &WmvspInstance<F>, beta: usize) -> Result<(Vec<i64>, Vec<i64>)> {
    let nb = *inst
        .col_dims()
        .get(beta)
        .ok_or(Error::IndexOutOfRange(beta))? as i64;
    let n = inst.n() as i64;
    let np = 2 * nb + 1;
    let d = (0..inst.nu())
        .map(|b| {
            if b == beta {
                n * np * (np + 1)
            } else {
                n * np * np
            }
        })
        .collect();
    Ok((vec![np * (n * np + nb); inst.mu()], d))
}

/// Which part of `(X, Y)` a restriction keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `A^{X,Y^c}`: rows in `X_α`, columns in a complement of `Y_β`.
    KeepXComplY,
    /// `A^{X^c,Y}`: rows in a complement of `X_α`, columns in `Y_β`.
    ComplXKeepY,
}

/// A restricted instance together with what is needed to lift its solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction<F: Field> {
    /// Nonempty blocks only, unit weights.
    pub instance: WmvspInstance<F>,
    /// `row_map[i]` is the original row block of restricted block `i`.
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
    /// Per original block, rows form a basis of the kept subspace.
    row_bases: Vec<Mat<F>>,
    col_bases: Vec<Mat<F>>,
    /// Added to every lifted tuple.
    base: SubspaceTuple<F>,
}

impl<F: Field> Restriction<F> {
    /// Maps a tuple of the restricted instance back to the original one.
    pub fn lift(&self, t: &SubspaceTuple<F>) -> Result<SubspaceTuple<F>> {
        self.instance.check_tuple(t)?;
        let mut xs = self.base.0.clone();
        for (i, &al) in self.row_map.iter().enumerate() {
            xs[al] = xs[al].join(&t.0[i].image(&self.row_bases[al])?)?;
        }
        let mut ys = self.base.1.clone();
        for (j, &be) in self.col_map.iter().enumerate() {
            ys[be] = ys[be].join(&t.1[j].image(&self.col_bases[be])?)?;
        }
        Ok((xs, ys))
    }
}

/// Restriction of `inst` to the interval `lower ⪯ (X', Y') ⪯ upper` of vanishing
/// tuples: rows complement `lower.X` inside `upper.X`, columns complement
/// `upper.Y` inside `lower.Y`.
pub fn restrict_interval<F: Field>(
    inst: &WmvspInstance<F>,
    lower: &SubspaceTuple<F>,
    upper: &SubspaceTuple<F>,
) -> Result<Restriction<F>> {
    for t in [lower, upper] {
        if !inst.is_vanishing(t)? {
            return Err(Error::NotVanishing);
        }
    }
    let row_bases = lower
        .0
        .iter()
        .zip(&upper.0)
        .map(|(lo, up)| complement_within(lo, up).map(|s| s.basis().clone()))
        .collect::<Result<Vec<_>>>()?;
    let col_bases = upper
        .1
        .iter()
        .zip(&lower.1)
        .map(|(lo, up)| complement_within(lo, up).map(|s| s.basis().clone()))
        .collect::<Result<Vec<_>>>()?;
    let row_map: Vec<usize> = (0..inst.mu())
        .filter(|&a| row_bases[a].rows() > 0)
        .collect();
    let col_map: Vec<usize> = (0..inst.nu())
        .filter(|&b| col_bases[b].rows() > 0)
        .collect();
    let blocks = row_map
        .iter()
        .map(|&al| {
            col_map
                .iter()
                .map(|&be| {
                    let a = inst.block(al, be).matrix();
                    Ok(Bilinear::new(
                        row_bases[al]
                            .mat_mul(a)?
                            .mat_mul(&col_bases[be].transpose())?,
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let instance = WmvspInstance::unit(
        inst.ctx(),
        row_map.iter().map(|&a| row_bases[a].rows()).collect(),
        col_map.iter().map(|&b| col_bases[b].rows()).collect(),
        blocks,
    )?;
    Ok(Restriction {
        instance,
        row_map,
        col_map,
        row_bases,
        col_bases,
        base: (lower.0.clone(), upper.1.clone()),
    })
}

/// `A^{X,Y^c}` or `A^{X^c,Y}` for a vanishing tuple `t = (X, Y)`.
pub fn restrict_matrix<F: Field>(
    inst: &WmvspInstance<F>,
    t: &SubspaceTuple<F>,
    side: Side,
) -> Result<Restriction<F>> {
    inst.check_tuple(t)?;
    match side {
        Side::KeepXComplY => restrict_interval(inst, &inst.bottom_tuple(), t),
        Side::ComplXKeepY => restrict_interval(inst, t, &top_tuple(inst)),
    }
}

/// `(F^{m_α}; {0})`, the top of the product lattice.
fn top_tuple<F: Field>(inst: &WmvspInstance<F>) -> SubspaceTuple<F> {
    (
        inst.row_dims()
            .iter()
            .map(|&m| Subspace::full(inst.ctx(), m))
            .collect(),
        inst.col_dims()
            .iter()
            .map(|&n| Subspace::zero(inst.ctx(), n))
            .collect(),
    )
}

fn solve_with<F: Field>(
    inst: &WmvspInstance<F>,
    (c, d): (Vec<i64>, Vec<i64>),
    target: Option<i64>,
    solve: &mut WmvspSolver<'_, F>,
) -> Result<(SubspaceTuple<F>, i64)> {
    let w = inst.with_weights(c, d)?;
    let t = solve(&w, target)?;
    if !w.is_vanishing(&t)? {
        return Err(Error::NotVanishing);
    }
    let v = w.weighted_dim(&t);
    Ok((t, v))
}

/// Scans the row weights then the column weights and returns the first optimum
/// beating both trivial mv-subspaces. Under these weights any vanishing tuple
/// beating them already has maximum dimension, so the solver may stop early.
fn find_witness<F: Field>(
    inst: &WmvspInstance<F>,
    solve: &mut WmvspSolver<'_, F>,
) -> Result<Option<SubspaceTuple<F>>> {
    let row = (0..inst.mu()).map(|a| weights_row(inst, a));
    let col = (0..inst.nu()).map(|b| weights_col(inst, b));
    for weights in row.chain(col) {
        let (c, d) = weights?;
        let trivial = inst.with_weights(c.clone(), d.clone())?;
        let bar = trivial
            .weighted_dim(&top_tuple(inst))
            .max(trivial.weighted_dim(&inst.bottom_tuple()));
        let (t, v) = solve_with(inst, (c, d), Some(bar), solve)?;
        if v > bar {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIrreducibility<F: Field> {
    pub irreducible: bool,
    /// A nontrivial mv-subspace when reducible.
    pub witness: Option<SubspaceTuple<F>>,
}

/// Tests quasi DM-irreducibility of a DM-regular instance.
pub fn is_quasi_irreducible<F: Field>(
    inst: &WmvspInstance<F>,
    solve: &mut WmvspSolver<'_, F>,
) -> Result<QuasiIrreducibility<F>> {
    if inst.m() != inst.n() {
        return Err(Error::NotDmRegular(format!(
            "{}x{} is not square",
            inst.m(),
            inst.n()
        )));
    }
    if inst.m() > 0 {
        let unit = inst.with_weights(vec![1; inst.mu()], vec![1; inst.nu()])?;
        let (_, v) = solve_with(
            &unit,
            (unit.weights_c().to_vec(), unit.weights_d().to_vec()),
            None,
            solve,
        )?;
        if v != inst.n() as i64 {
            return Err(Error::NotDmRegular(format!(
                "maximum vanishing dimension {v} differs from {}",
                inst.n()
            )));
        }
    }
    let witness = find_witness(inst, solve)?;
    Ok(QuasiIrreducibility {
        irreducible: witness.is_none(),
        witness,
    })
}

/// A chain of mv-subspaces, strictly increasing in the order
/// `(X, Y) ⪯ (X', Y')` iff `X ⊆ X'` and `Y ⊇ Y'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvChain<F: Field> {
    pub elements: Vec<SubspaceTuple<F>>,
    /// Unweighted `Σ dim X_α + Σ dim Y_β` per element.
    pub dims: Vec<i64>,
}

fn tuple_le<F: Field>(a: &SubspaceTuple<F>, b: &SubspaceTuple<F>) -> Result<bool> {
    for (x, x2) in a.0.iter().zip(&b.0) {
        if !x2.contains(x)? {
            return Ok(false);
        }
    }
    for (y, y2) in a.1.iter().zip(&b.1) {
        if !y.contains(y2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl<F: Field> MvChain<F> {
    /// Checks that every element vanishes and that the chain strictly increases.
    pub fn new(inst: &WmvspInstance<F>, elements: Vec<SubspaceTuple<F>>) -> Result<Self> {
        for t in &elements {
            if !inst.is_vanishing(t)? {
                return Err(Error::NotVanishing);
            }
        }
        for (i, w) in elements.windows(2).enumerate() {
            if w[0] == w[1] || !tuple_le(&w[0], &w[1])? {
                return Err(Error::InvalidChain(format!(
                    "elements {i} and {} are not strictly nested",
                    i + 1
                )));
            }
        }
        let dims = elements
            .iter()
            .map(|(xs, ys)| xs.iter().chain(ys).map(|s| s.dim() as i64).sum())
            .collect();
        Ok(MvChain { elements, dims })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn qdm_reg<F: Field>(
    inst: &WmvspInstance<F>,
    solve: &mut WmvspSolver<'_, F>,
) -> Result<Vec<SubspaceTuple<F>>> {
    if inst.m() != inst.n() {
        return Err(Error::NotDmRegular(format!(
            "{}x{} is not square",
            inst.m(),
            inst.n()
        )));
    }
    if inst.m() == 0 {
        return Ok(vec![inst.bottom_tuple()]);
    }
    let Some(w) = find_witness(inst, solve)? else {
        return Ok(vec![inst.bottom_tuple(), top_tuple(inst)]);
    };
    let below = restrict_matrix(inst, &w, Side::KeepXComplY)?;
    let above = restrict_matrix(inst, &w, Side::ComplXKeepY)?;
    let mut out = Vec::new();
    for r in [&below, &above] {
        for t in qdm_reg(&r.instance, solve)? {
            let t = r.lift(&t)?;
            if out.last() != Some(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// The q-DM chain of `inst` using `solve` for every WMVSP subproblem.
pub fn qdm_with<F: Field>(
    inst: &WmvspInstance<F>,
    solve: &mut WmvspSolver<'_, F>,
) -> Result<MvChain<F>> {
    let (max, _) = solve_with(inst, weights_extreme(inst, Extreme::Max), None, solve)?;
    let (min, _) = solve_with(inst, weights_extreme(inst, Extreme::Min), None, solve)?;
    let core = restrict_interval(inst, &min, &max)?;
    let elements = qdm_reg(&core.instance, solve)?
        .iter()
        .map(|t| core.lift(t))
        .collect::<Result<Vec<_>>>()?;
    MvChain::new(inst, elements)
}

/// SPPA configuration for one subproblem: the step parameter is rescaled so
/// that `λ_k · W` matches the unit-weight schedule, `W` the largest weight.
pub fn subproblem_config<F: Field>(
    inst: &WmvspInstance<F>,
    cfg: &SolverConfig,
    target: Option<i64>,
) -> SolverConfig {
    let w = inst
        .weights_c()
        .iter()
        .chain(inst.weights_d())
        .copied()
        .max()
        .unwrap_or(1)
        .max(1);
    let a = Rat::ONE - (Rat::ONE - &cfg.a) / Rat::from(w);
    SolverConfig {
        a,
        target,
        ..cfg.clone()
    }
}

/// SPPA as a subproblem solver.
pub fn sppa_solver<F: Field>(
    cfg: &SolverConfig,
) -> impl FnMut(&WmvspInstance<F>, Option<i64>) -> Result<SubspaceTuple<F>> + '_ {
    move |i, target| solve_wmvsp(i, &subproblem_config(i, cfg, target)).map(|r| r.tuple())
}

/// The q-DM chain of `inst` with SPPA as the subproblem solver.
pub fn qdm<F: Field>(inst: &WmvspInstance<F>, cfg: &SolverConfig) -> Result<MvChain<F>> {
    qdm_with(inst, &mut sppa_solver(cfg))
}

/// One diagonal block of the staircase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBlock {
    pub level: usize,
    /// `(original row block, rows contributed)`, nonzero counts only.
    pub rows: Vec<(usize, usize)>,
    pub cols: Vec<(usize, usize)>,
    pub row_start: usize,
    pub col_start: usize,
}

impl DiagonalBlock {
    pub fn size(&self) -> (usize, usize) {
        (
            self.rows.iter().map(|r| r.1).sum(),
            self.cols.iter().map(|c| c.1).sum(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTriangularForm<F: Field> {
    /// Invertible `m_α × m_α`; the columns are the adapted basis.
    pub e: Vec<Mat<F>>,
    pub f: Vec<Mat<F>>,
    /// Row `i` of `transformed` is row `row_perm[i]` of `Eᵀ A F`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub row_levels: Vec<usize>,
    pub col_levels: Vec<usize>,
    pub blocks: Vec<DiagonalBlock>,
    pub transformed: Mat<F>,
}

impl<F: Field> BlockTriangularForm<F> {
    pub fn diag_sizes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| b.size()).collect()
    }

    /// Diagonal block `k` as a partitioned matrix in its own right.
    pub fn block_instance(&self, k: usize) -> Result<WmvspInstance<F>> {
        let b = self.blocks.get(k).ok_or(Error::IndexOutOfRange(k))?;
        let (r, c) = b.size();
        let rows: Vec<usize> = (b.row_start..b.row_start + r).collect();
        let cols: Vec<usize> = (b.col_start..b.col_start + c).collect();
        let sub = self.transformed.select_rows(&rows).select_cols(&cols);
        let rd: Vec<usize> = b.rows.iter().map(|r| r.1).collect();
        let cd: Vec<usize> = b.cols.iter().map(|c| c.1).collect();
        let (c1, d1) = (vec![1; rd.len()], vec![1; cd.len()]);
        WmvspInstance::from_matrix(&sub, rd, cd, c1, d1)
    }

    /// Recomputes the transformation and checks the zero pattern.
    pub fn verify(&self, inst: &WmvspInstance<F>) -> Result<()> {
        let t = transform(inst, &self.e, &self.f)?;
        for (i, &ri) in self.row_perm.iter().enumerate() {
            for (j, &cj) in self.col_perm.iter().enumerate() {
                if t.get(ri, cj) != self.transformed.get(i, j) {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({i},{j}) differs from the recomputed form"
                    )));
                }
                if self.row_levels[i] < self.col_levels[j] && !self.transformed.get(i, j).is_zero()
                {
                    return Err(Error::NotVanishing);
                }
            }
        }
        for e in self.e.iter().chain(&self.f) {
            if e.rank() != e.rows() {
                return Err(Error::ShapeMismatch("basis change is singular".into()));
            }
        }
        Ok(())
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    dims.iter()
        .map(|&d| {
            acc += d;
            acc - d
        })
        .collect()
}

/// `blockdiag(E)ᵀ · A · blockdiag(F)`.
fn transform<F: Field>(inst: &WmvspInstance<F>, e: &[Mat<F>], f: &[Mat<F>]) -> Result<Mat<F>> {
    let (ro, co) = (offsets(inst.row_dims()), offsets(inst.col_dims()));
    let mut t = Mat::zeros(inst.ctx(), inst.m(), inst.n());
    for al in 0..inst.mu() {
        for be in 0..inst.nu() {
            let b = e[al]
                .transpose()
                .mat_mul(inst.block(al, be).matrix())?
                .mat_mul(&f[be])?;
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    t.set(ro[al] + i, co[be] + j, b.get(i, j).clone());
                }
            }
        }
    }
    Ok(t)
}

/// Basis of the ambient space adapted to an increasing chain, with the level of each vector.
fn adapted_basis<F: Field>(
    ctx: &F::Ctx,
    ambient: usize,
    chain: &[&Subspace<F>],
    levels: &[usize],
    last: usize,
) -> Result<(Mat<F>, Vec<usize>)> {
    let mut rows = Vec::new();
    let mut lv = Vec::new();
    let mut prev = Subspace::zero(ctx, ambient);
    let full = Subspace::full(ctx, ambient);
    for (s, &l) in chain
        .iter()
        .copied()
        .chain([&full])
        .zip(levels.iter().chain([&last]))
    {
        let comp = complement_within(&prev, s)?;
        for r in comp.basis().row_vecs() {
            rows.push(r);
            lv.push(l);
        }
        prev = s.clone();
    }
    Ok((Mat::from_rows(ctx, ambient, rows)?, lv))
}

/// Nested bases adapted to `chain`, the transformed matrix and its staircase.
pub fn assemble_block_triangular<F: Field>(
    inst: &WmvspInstance<F>,
    chain: &MvChain<F>,
) -> Result<BlockTriangularForm<F>> {
    let chain = MvChain::new(inst, chain.elements.clone())?;
    let l = chain.len();
    if l == 0 {
        return Err(Error::InvalidChain("empty chain".into()));
    }
    let ctx = inst.ctx();
    let mut e = Vec::new();
    let mut row_lv = Vec::new();
    for (al, &m) in inst.row_dims().iter().enumerate() {
        let xs: Vec<&Subspace<F>> = chain.elements.iter().map(|t| &t.0[al]).collect();
        let levels: Vec<usize> = (0..l).collect();
        let (b, lv) = adapted_basis(ctx, m, &xs, &levels, l)?;
        e.push(b.transpose());
        row_lv.push(lv);
    }
    let mut f = Vec::new();
    let mut col_lv = Vec::new();
    for (be, &n) in inst.col_dims().iter().enumerate() {
        // Y^{l-1} ⊆ … ⊆ Y^0: a vector first met in Y^k has level k + 1
        let ys: Vec<&Subspace<F>> = chain.elements.iter().rev().map(|t| &t.1[be]).collect();
        let levels: Vec<usize> = (1..=l).rev().collect();
        let (b, lv) = adapted_basis(ctx, n, &ys, &levels, 0)?;
        f.push(b.transpose());
        col_lv.push(lv);
    }
    let t = transform(inst, &e, &f)?;
    // (level desc, block, index) for rows and columns alike
    let order = |lvs: &[Vec<usize>], dims: &[usize]| {
        let off = offsets(dims);
        let mut idx: Vec<(usize, usize, usize)> = lvs
            .iter()
            .enumerate()
            .flat_map(|(b, lv)| lv.iter().enumerate().map(move |(i, &v)| (v, b, i)))
            .collect();
        idx.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let perm: Vec<usize> = idx.iter().map(|&(_, b, i)| off[b] + i).collect();
        (perm, idx)
    };
    let (row_perm, ridx) = order(&row_lv, inst.row_dims());
    let (col_perm, cidx) = order(&col_lv, inst.col_dims());
    let transformed = t.select_rows(&row_perm).select_cols(&col_perm);
    let row_levels: Vec<usize> = ridx.iter().map(|x| x.0).collect();
    let col_levels: Vec<usize> = cidx.iter().map(|x| x.0).collect();
    let tally = |idx: &[(usize, usize, usize)], level: usize| {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &(_, b, _) in idx.iter().filter(|x| x.0 == level) {
            match out.last_mut() {
                Some(last) if last.0 == b => last.1 += 1,
                _ => out.push((b, 1)),
            }
        }
        out
    };
    let mut blocks = Vec::new();
    let (mut rs, mut cs) = (0, 0);
    for level in (0..=l).rev() {
        let rows = tally(&ridx, level);
        let cols = tally(&cidx, level);
        let b = DiagonalBlock {
            level,
            rows,
            cols,
            row_start: rs,
            col_start: cs,
        };
        let (r, c) = b.size();
        rs += r;
        cs += c;
        if r + c > 0 {
            blocks.push(b);
        }
    }
    let form = BlockTriangularForm {
        e,
        f,
        row_perm,
        col_perm,
        row_levels,
        col_levels,
        blocks,
        transformed,
    };
    form.verify(inst)?;
    Ok(form)
}
