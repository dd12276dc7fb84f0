//! The splitting proximal point solver for WMVSP and its nc-rank variant.
//!
//! The lattice problem is relaxed to the penalty form
//! `g = −ΣC dim X − ΣD dim Y + M ΣR`, extended to the orthoscheme complex,
//! perturbed by `ε d²`, and minimized by cycling through the resolvents of the
//! summands. After every sweep the support of the iterate is scanned for the
//! best lattice point.

use malachite_base::num::basic::traits::{One, Zero};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::orthoscheme::{r_bar, support_tuples, ProductPoint, SubspaceTuple};
use crate::resolvent::{prox_linear_quad, prox_r, ProxParams};
use crate::subspace::Subspace;
use crate::Rat;

/// A partitioned matrix with nonnegative integer weights on its row and column blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WmvspInstance<F: Field> {
    ctx: F::Ctx,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    blocks: Vec<Vec<Bilinear<F>>>,
    c: Vec<i64>,
    d: Vec<i64>,
}

impl<F: Field> WmvspInstance<F> {
    pub fn new(
        ctx: &F::Ctx,
        row_dims: Vec<usize>,
        col_dims: Vec<usize>,
        blocks: Vec<Vec<Bilinear<F>>>,
        c: Vec<i64>,
        d: Vec<i64>,
    ) -> Result<Self> {
        if blocks.len() != row_dims.len() || c.len() != row_dims.len() || d.len() != col_dims.len()
        {
            return Err(Error::ShapeMismatch(
                "block grid or weights do not match the block type".into(),
            ));
        }
        for (alpha, row) in blocks.iter().enumerate() {
            if row.len() != col_dims.len() {
                return Err(Error::ShapeMismatch(format!(
                    "block row {alpha} has {} blocks",
                    row.len()
                )));
            }
            for (beta, b) in row.iter().enumerate() {
                if b.ctx() != ctx {
                    return Err(Error::FieldMismatch);
                }
                if b.rows() != row_dims[alpha] || b.cols() != col_dims[beta] {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({alpha},{beta}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        row_dims[alpha],
                        col_dims[beta]
                    )));
                }
            }
        }
        if let Some(&w) = c.iter().chain(&d).find(|&&w| w < 0) {
            return Err(Error::NegativeWeight(w));
        }
        Ok(WmvspInstance {
            ctx: ctx.clone(),
            row_dims,
            col_dims,
            blocks,
            c,
            d,
        })
    }

    /// Same blocks, all weights one.
    pub fn unit(
        ctx: &F::Ctx,
        row_dims: Vec<usize>,
        col_dims: Vec<usize>,
        blocks: Vec<Vec<Bilinear<F>>>,
    ) -> Result<Self> {
        let (c, d) = (vec![1; row_dims.len()], vec![1; col_dims.len()]);
        Self::new(ctx, row_dims, col_dims, blocks, c, d)
    }

    /// Cuts a full matrix into blocks of the given type.
    pub fn from_matrix(
        a: &Mat<F>,
        row_dims: Vec<usize>,
        col_dims: Vec<usize>,
        c: Vec<i64>,
        d: Vec<i64>,
    ) -> Result<Self> {
        if row_dims.iter().sum::<usize>() != a.rows() || col_dims.iter().sum::<usize>() != a.cols()
        {
            return Err(Error::ShapeMismatch(
                "block type does not cover the matrix".into(),
            ));
        }
        let ro = offsets(&row_dims);
        let co = offsets(&col_dims);
        let blocks = (0..row_dims.len())
            .map(|al| {
                (0..col_dims.len())
                    .map(|be| {
                        let rows: Vec<usize> = (ro[al]..ro[al] + row_dims[al]).collect();
                        let cols: Vec<usize> = (co[be]..co[be] + col_dims[be]).collect();
                        Bilinear::new(a.select_rows(&rows).select_cols(&cols))
                    })
                    .collect()
            })
            .collect();
        Self::new(a.ctx(), row_dims, col_dims, blocks, c, d)
    }

    pub fn with_weights(&self, c: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        Self::new(
            &self.ctx,
            self.row_dims.clone(),
            self.col_dims.clone(),
            self.blocks.clone(),
            c,
            d,
        )
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn blocks(&self) -> &[Vec<Bilinear<F>>] {
        &self.blocks
    }

    pub fn block(&self, alpha: usize, beta: usize) -> &Bilinear<F> {
        &self.blocks[alpha][beta]
    }

    pub fn weights_c(&self) -> &[i64] {
        &self.c
    }

    pub fn weights_d(&self) -> &[i64] {
        &self.d
    }

    pub fn mu(&self) -> usize {
        self.row_dims.len()
    }

    pub fn nu(&self) -> usize {
        self.col_dims.len()
    }

    /// Total row dimension `m`.
    pub fn m(&self) -> usize {
        self.row_dims.iter().sum()
    }

    /// Total column dimension `n`.
    pub fn n(&self) -> usize {
        self.col_dims.iter().sum()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.c.iter().chain(&self.d).all(|&w| w == 1)
    }

    /// The blocks glued back into one `m × n` matrix.
    pub fn assembled(&self) -> Mat<F> {
        let mut out = Mat::zeros(&self.ctx, self.m(), self.n());
        let ro = offsets(&self.row_dims);
        let co = offsets(&self.col_dims);
        for (al, row) in self.blocks.iter().enumerate() {
            for (be, b) in row.iter().enumerate() {
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        out.set(ro[al] + i, co[be] + j, b.matrix().get(i, j).clone());
                    }
                }
            }
        }
        out
    }

    /// `ΣC_α m_α + ΣD_β n_β`, the value of the all-full tuple when it vanishes.
    pub fn max_weight_total(&self) -> i64 {
        dot_i64(&self.c, &self.row_dims) + dot_i64(&self.d, &self.col_dims)
    }

    pub fn check_tuple(&self, t: &SubspaceTuple<F>) -> Result<()> {
        if t.0.len() != self.mu() || t.1.len() != self.nu() {
            return Err(Error::ShapeMismatch("tuple length".into()));
        }
        for (x, &m) in t.0.iter().zip(&self.row_dims) {
            if x.ambient() != m {
                return Err(Error::AmbientMismatch {
                    left: x.ambient(),
                    right: m,
                });
            }
        }
        for (y, &n) in t.1.iter().zip(&self.col_dims) {
            if y.ambient() != n {
                return Err(Error::AmbientMismatch {
                    left: y.ambient(),
                    right: n,
                });
            }
        }
        Ok(())
    }

    pub fn weighted_dim(&self, t: &SubspaceTuple<F>) -> i64 {
        let xs: Vec<usize> = t.0.iter().map(|x| x.dim()).collect();
        let ys: Vec<usize> = t.1.iter().map(|y| y.dim()).collect();
        dot_i64(&self.c, &xs) + dot_i64(&self.d, &ys)
    }

    /// `Σ_{α,β} R(X_α, Y_β)`.
    pub fn total_restricted_rank(&self, t: &SubspaceTuple<F>) -> Result<usize> {
        self.check_tuple(t)?;
        let mut total = 0;
        for (al, row) in self.blocks.iter().enumerate() {
            for (be, b) in row.iter().enumerate() {
                total += b.restricted_rank(&t.0[al], &t.1[be])?;
            }
        }
        Ok(total)
    }

    pub fn is_vanishing(&self, t: &SubspaceTuple<F>) -> Result<bool> {
        Ok(self.total_restricted_rank(t)? == 0)
    }

    /// The penalized lattice objective `g`.
    pub fn lattice_objective(&self, t: &SubspaceTuple<F>) -> Result<i64> {
        Ok(-self.weighted_dim(t) + penalty_m(self) * self.total_restricted_rank(t)? as i64)
    }

    /// `({0},…; {0},…)`, always vanishing with value 0.
    pub fn trivial_tuple(&self) -> SubspaceTuple<F> {
        (
            self.row_dims
                .iter()
                .map(|&m| Subspace::zero(&self.ctx, m))
                .collect(),
            self.col_dims
                .iter()
                .map(|&n| Subspace::zero(&self.ctx, n))
                .collect(),
        )
    }

    /// `({0},…; V,…)`, the bottom of the product lattice.
    pub fn bottom_tuple(&self) -> SubspaceTuple<F> {
        (
            self.row_dims
                .iter()
                .map(|&m| Subspace::zero(&self.ctx, m))
                .collect(),
            self.col_dims
                .iter()
                .map(|&n| Subspace::full(&self.ctx, n))
                .collect(),
        )
    }

    pub(crate) fn problem(&self) -> Problem<F> {
        let couplings = (0..self.mu())
            .flat_map(|al| (0..self.nu()).map(move |be| (al, be)))
            .map(|(al, be)| (al, be, self.blocks[al][be].clone()))
            .collect();
        let bound = self
            .is_unit_weight()
            .then(|| (self.m() + self.n() - self.assembled().rank()) as i64);
        Problem {
            ctx: self.ctx.clone(),
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            couplings,
            penalty: penalty_m(self),
            epsilon: epsilon(self),
            order: default_order(self.mu(), self.nu(), self.mu() * self.nu(), false),
            dim_bound: bound,
        }
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect()
}

fn dot_i64(w: &[i64], dims: &[usize]) -> i64 {
    w.iter().zip(dims).map(|(&w, &d)| w * d as i64).sum()
}

/// `M = ΣC_α m_α + ΣD_β n_β + 1`.
pub fn penalty_m<F: Field>(inst: &WmvspInstance<F>) -> i64 {
    inst.max_weight_total() + 1
}

/// `ε = 1 / (4(n + m))`.
pub fn epsilon<F: Field>(inst: &WmvspInstance<F>) -> Rat {
    epsilon_for(inst.m(), inst.n())
}

fn epsilon_for(m: usize, n: usize) -> Rat {
    Rat::from_unsigneds(1usize, 4 * (m + n).max(1))
}

/// `λ_k = (1 − a) / (2ε(k + 1))` with `a = ½`, i.e. `(n + m)/(k + 1)`.
pub fn lambda_k<F: Field>(k: usize, inst: &WmvspInstance<F>) -> Rat {
    lambda_with(k, &epsilon(inst), &half())
}

fn half() -> Rat {
    Rat::from_signeds(1i64, 2)
}

/// Step size for strong-convexity parameter `2ε` and schedule parameter `a`.
pub fn lambda_with(k: usize, eps: &Rat, a: &Rat) -> Rat {
    (Rat::ONE - a) / (Rat::from(2) * eps * Rat::from(k + 1))
}

/// One summand of the split objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summand {
    /// `−C_α dim + ε d²` on `K(L_α)`.
    Row(usize),
    /// `−D_β dim + ε d²` on `K(M̌_β)`.
    Col(usize),
    /// `M · R̄` for the coupling with this index.
    Block(usize),
}

fn default_order(mu: usize, nu: usize, blocks: usize, blocks_first: bool) -> Vec<Summand> {
    let rows = (0..mu).map(Summand::Row);
    let cols = (0..nu).map(Summand::Col);
    let bl = (0..blocks).map(Summand::Block);
    if blocks_first {
        bl.chain(rows).chain(cols).collect()
    } else {
        rows.chain(cols).chain(bl).collect()
    }
}

/// The split objective in a form shared by WMVSP and nc-rank: each coupling
/// ties one row lattice to one column lattice through a bilinear form.
#[derive(Clone, Debug)]
pub(crate) struct Problem<F: Field> {
    ctx: F::Ctx,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    c: Vec<i64>,
    d: Vec<i64>,
    couplings: Vec<(usize, usize, Bilinear<F>)>,
    penalty: i64,
    epsilon: Rat,
    order: Vec<Summand>,
    /// Upper bound on the weighted dimension certified by weak duality.
    dim_bound: Option<i64>,
}

impl<F: Field> Problem<F> {
    fn m(&self) -> usize {
        self.row_dims.iter().sum()
    }

    fn n(&self) -> usize {
        self.col_dims.iter().sum()
    }

    fn check_point(&self, z: &ProductPoint<F>) -> Result<()> {
        let ok = z.xs.len() == self.row_dims.len()
            && z.ys.len() == self.col_dims.len()
            && z.xs
                .iter()
                .zip(&self.row_dims)
                .all(|(x, &m)| x.ambient() == m)
            && z.ys
                .iter()
                .zip(&self.col_dims)
                .all(|(y, &n)| y.ambient() == n);
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(
                "point does not match the block type".into(),
            ))
        }
    }

    pub(crate) fn objective(&self, z: &ProductPoint<F>, perturbed: bool) -> Result<Rat> {
        self.check_point(z)?;
        let w = |v: i64| Rat::from(v);
        let mut total = Rat::ZERO;
        for (x, &c) in z.xs.iter().zip(&self.c) {
            total -= w(c) * x.dim_value();
        }
        for (y, &d) in z.ys.iter().zip(&self.d) {
            total -= w(d) * y.dim_value();
        }
        for (al, be, a) in &self.couplings {
            total += w(self.penalty) * r_bar(a, &z.xs[*al], &z.ys[*be])?;
        }
        if perturbed {
            for p in z.xs.iter().chain(&z.ys) {
                total += &self.epsilon * p.d2();
            }
        }
        Ok(total)
    }

    fn weighted_dim(&self, t: &SubspaceTuple<F>) -> i64 {
        let xs: Vec<usize> = t.0.iter().map(|x| x.dim()).collect();
        let ys: Vec<usize> = t.1.iter().map(|y| y.dim()).collect();
        dot_i64(&self.c, &xs) + dot_i64(&self.d, &ys)
    }

    fn lattice_objective(&self, t: &SubspaceTuple<F>) -> Result<i64> {
        let mut r = 0;
        for (al, be, a) in &self.couplings {
            r += a.restricted_rank(&t.0[*al], &t.1[*be])?;
        }
        Ok(-self.weighted_dim(t) + self.penalty * r as i64)
    }

    fn apply(&self, s: Summand, z: &mut ProductPoint<F>, lambda: &Rat) -> Result<()> {
        let w = |v: i64| Rat::from(v);
        match s {
            Summand::Row(al) => {
                let p = ProxParams::new(lambda.clone(), self.epsilon.clone(), w(self.c[al]))?;
                z.xs[al] = prox_linear_quad(&z.xs[al], &p)?;
            }
            Summand::Col(be) => {
                let p = ProxParams::new(lambda.clone(), self.epsilon.clone(), w(self.d[be]))?;
                z.ys[be] = prox_linear_quad(&z.ys[be], &p)?;
            }
            Summand::Block(i) => {
                let (al, be, a) = &self.couplings[i];
                let p = ProxParams::new(lambda.clone(), self.epsilon.clone(), w(self.penalty))?;
                let (x, y) = prox_r(&z.xs[*al], &z.ys[*be], a, &p)?;
                z.xs[*al] = x;
                z.ys[*be] = y;
            }
        }
        Ok(())
    }

    fn sweep(&self, state: &ProductPoint<F>, lambda: &Rat) -> Result<ProductPoint<F>> {
        self.check_point(state)?;
        let mut z = state.clone();
        for &s in &self.order {
            self.apply(s, &mut z, lambda)?;
        }
        Ok(z)
    }

    fn extract(&self, state: &ProductPoint<F>) -> Result<(SubspaceTuple<F>, i64)> {
        let mut best: Option<(SubspaceTuple<F>, i64)> = None;
        for t in support_tuples(state) {
            let g = self.lattice_objective(&t)?;
            if best.as_ref().is_none_or(|(_, b)| g < *b) {
                best = Some((t, g));
            }
        }
        Ok(best.expect("support is nonempty"))
    }

    fn set_order(&mut self, order: &Option<Vec<usize>>) -> Result<()> {
        if let Some(perm) = order {
            let mut seen = vec![false; self.order.len()];
            if perm.len() != seen.len()
                || perm
                    .iter()
                    .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
            {
                return Err(Error::OutOfRange(
                    "sweep order is not a permutation of the summands".into(),
                ));
            }
            self.order = perm.iter().map(|&i| self.order[i]).collect();
        }
        Ok(())
    }

    fn run(&self, cfg: &SolverConfig) -> Result<Run<F>> {
        if cfg.max_sweeps == 0 {
            return Err(Error::OutOfRange("max-sweeps must be at least 1".into()));
        }
        if cfg.a <= Rat::ZERO || cfg.a >= Rat::ONE {
            return Err(Error::OutOfRange(format!(
                "a = {} must lie in (0,1)",
                cfg.a
            )));
        }
        let stall_limit = cfg
            .stall_sweeps
            .unwrap_or(50 * (self.m() + self.n()).max(1));
        let mut state = ProductPoint::bottom(&self.ctx, &self.row_dims, &self.col_dims);
        let (mut best, mut best_g) = self.extract(&state)?;
        let tight =
            |t: &SubspaceTuple<F>, g: i64| g <= 0 && self.dim_bound == Some(self.weighted_dim(t));
        let mut trace = Vec::new();
        let mut stall = 0;
        let mut sweeps = 0;
        let mut certificate = Certificate::SweepLimit;
        if tight(&best, best_g) {
            certificate = Certificate::WeakDualityTight;
        } else {
            for k in 0..cfg.max_sweeps {
                let lambda = lambda_with(k, &self.epsilon, &cfg.a);
                state = self.sweep(&state, &lambda)?;
                sweeps = k + 1;
                let (t, g) = self.extract(&state)?;
                if g < best_g {
                    best = t;
                    best_g = g;
                    stall = 0;
                } else {
                    stall += 1;
                }
                trace.push(best_g);
                if tight(&best, best_g) {
                    certificate = Certificate::WeakDualityTight;
                    break;
                }
                if cfg.target.is_some_and(|t| -best_g > t) {
                    certificate = Certificate::TargetReached;
                    break;
                }
                if stall >= stall_limit {
                    certificate = Certificate::Stall;
                    break;
                }
            }
        }
        debug_assert!(best_g <= 0, "the trivial tuple bounds the incumbent");
        Ok(Run {
            tuple: best,
            objective: best_g,
            sweeps,
            certificate,
            trace,
            state,
        })
    }
}

struct Run<F: Field> {
    tuple: SubspaceTuple<F>,
    objective: i64,
    sweeps: usize,
    certificate: Certificate,
    trace: Vec<i64>,
    state: ProductPoint<F>,
}

/// Why the solver stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Unit weights and the dimension meets the weak-duality bound: provably optimal.
    WeakDualityTight,
    /// No improvement for `stall_sweeps` sweeps.
    Stall,
    /// `max_sweeps` reached.
    SweepLimit,
    /// The weighted dimension passed [`SolverConfig::target`].
    TargetReached,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_sweeps: usize,
    /// `None` means `50·(m + n)`.
    pub stall_sweeps: Option<usize>,
    pub a: Rat,
    /// Permutation of the default summand order (rows, columns, blocks row-major).
    pub sweep_order: Option<Vec<usize>>,
    /// Stop as soon as a vanishing tuple of larger weighted dimension is found.
    pub target: Option<i64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_sweeps: 10_000,
            stall_sweeps: None,
            a: half(),
            sweep_order: None,
            target: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionReport<F: Field> {
    pub xs: Vec<Subspace<F>>,
    pub ys: Vec<Subspace<F>>,
    pub weighted_dim: i64,
    pub objective: i64,
    pub sweeps: usize,
    pub certificate: Certificate,
    /// Best lattice objective after each sweep.
    pub trace: Vec<i64>,
    /// Final iterate.
    pub state: ProductPoint<F>,
}

impl<F: Field> SolutionReport<F> {
    pub fn tuple(&self) -> SubspaceTuple<F> {
        (self.xs.clone(), self.ys.clone())
    }
}

/// Applies one full sweep of resolvents with step `λ_k`.
pub fn sweep<F: Field>(
    state: &ProductPoint<F>,
    k: usize,
    inst: &WmvspInstance<F>,
) -> Result<ProductPoint<F>> {
    inst.problem().sweep(state, &lambda_k(k, inst))
}

/// Best lattice point in the support of `state`, first occurrence on ties.
pub fn extract_candidate<F: Field>(
    state: &ProductPoint<F>,
    inst: &WmvspInstance<F>,
) -> Result<(SubspaceTuple<F>, i64)> {
    let p = inst.problem();
    p.check_point(state)?;
    p.extract(state)
}

pub fn solve_wmvsp<F: Field>(
    inst: &WmvspInstance<F>,
    cfg: &SolverConfig,
) -> Result<SolutionReport<F>> {
    let mut p = inst.problem();
    p.set_order(&cfg.sweep_order)?;
    let run = p.run(cfg)?;
    debug_assert!(inst.is_vanishing(&run.tuple)?);
    Ok(SolutionReport {
        weighted_dim: inst.weighted_dim(&run.tuple),
        xs: run.tuple.0,
        ys: run.tuple.1,
        objective: run.objective,
        sweeps: run.sweeps,
        certificate: run.certificate,
        trace: run.trace,
        state: run.state,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcRankReport<F: Field> {
    pub ncrank: usize,
    /// `X ⊆ F^m` with `dim Σ A_i(X) ≤ dim X − shrink`.
    pub shrunk: Subspace<F>,
    pub y: Subspace<F>,
    pub shrink: i64,
    pub sweeps: usize,
    pub certificate: Certificate,
    pub trace: Vec<i64>,
}

/// nc-rank of the matrix space spanned by `matrices` via the same SPPA with a
/// single row and column lattice coupled through every `A_i`.
pub fn solve_ncrank<F: Field>(
    matrices: &[Bilinear<F>],
    cfg: &SolverConfig,
) -> Result<NcRankReport<F>> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::ShapeMismatch("no matrices".into()))?;
    let (m, n) = (first.rows(), first.cols());
    if let Some(b) = matrices.iter().find(|b| b.rows() != m || b.cols() != n) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} among {m}x{} matrices",
            b.rows(),
            b.cols(),
            n
        )));
    }
    if matrices.iter().any(|b| b.ctx() != first.ctx()) {
        return Err(Error::FieldMismatch);
    }
    let max_rank = matrices.iter().map(|b| b.rank()).max().unwrap_or(0);
    let mut p = Problem {
        ctx: first.ctx().clone(),
        row_dims: vec![m],
        col_dims: vec![n],
        c: vec![1],
        d: vec![1],
        couplings: matrices.iter().map(|a| (0, 0, a.clone())).collect(),
        penalty: (m + n + 1) as i64,
        epsilon: epsilon_for(m, n),
        order: default_order(1, 1, matrices.len(), true),
        dim_bound: Some((m + n - max_rank) as i64),
    };
    p.set_order(&cfg.sweep_order)?;
    let run = p.run(cfg)?;
    let (x, y) = (run.tuple.0[0].clone(), run.tuple.1[0].clone());
    let total = x.dim() + y.dim();
    Ok(NcRankReport {
        ncrank: m + n - total,
        shrink: total as i64 - n as i64,
        shrunk: x,
        y,
        sweeps: run.sweeps,
        certificate: run.certificate,
        trace: run.trace,
    })
}

/// `dim Σ_i A_i(X)` with `A_i(X) = {x A_i : x ∈ X}`.
pub fn image_dim<F: Field>(matrices: &[Bilinear<F>], x: &Subspace<F>) -> Result<usize> {
    let Some(first) = matrices.first() else {
        return Ok(0);
    };
    let mut acc = Subspace::zero(first.ctx(), first.cols());
    for a in matrices {
        acc = acc.join(&x.image(a.matrix())?)?;
    }
    Ok(acc.dim())
}

/// The sweep count guaranteed by the convergence theorem, reported but never run.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperBound {
    /// `W⁸ m⁹ n⁹ (m+n)²⁴` resolvent steps.
    pub iterations: BigUint,
    /// `W⁸ m⁸ n⁸ (m+n)²⁴` sweeps.
    pub sweeps: BigUint,
    /// `h(½) = 2^{3/2} · ¾`, irrational; kept as a display string and a float for humans.
    pub h_half: String,
    pub h_half_approx: f64,
}

pub fn paper_bound<F: Field>(inst: &WmvspInstance<F>) -> PaperBound {
    let w = inst
        .weights_c()
        .iter()
        .chain(inst.weights_d())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1) as u64;
    let (m, n) = (inst.m().max(1) as u64, inst.n().max(1) as u64);
    let b = |x: u64| BigUint::from(x);
    let base = b(w).pow(8) * b(m + n).pow(24);
    PaperBound {
        iterations: &base * b(m).pow(9) * b(n).pow(9),
        sweeps: base * b(m).pow(8) * b(n).pow(8),
        h_half: "3*sqrt(2)/2".into(),
        h_half_approx: h_of(0.5),
    }
}

/// `h(a) = 2^{2−a} (1−a)² (1+a) / a`.
pub fn h_of(a: f64) -> f64 {
    2f64.powf(2.0 - a) * (1.0 - a).powi(2) * (1.0 + a) / a
}

/// Rank of the assembled matrix as an integer bound helper.
pub fn weak_duality_bound<F: Field>(inst: &WmvspInstance<F>) -> usize {
    inst.m() + inst.n() - inst.assembled().rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::orthoscheme::{eval_objective, ComplexPoint};
    use crate::subspace::Orientation;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from_signeds(n, d)
    }

    fn inst(
        p: u64,
        a: &[Vec<i64>],
        rd: Vec<usize>,
        cd: Vec<usize>,
        c: Vec<i64>,
        d: Vec<i64>,
    ) -> WmvspInstance<Gf> {
        let m = Mat::from_ints(&p, a[0].len(), a).unwrap();
        WmvspInstance::from_matrix(&m, rd, cd, c, d).unwrap()
    }

    fn diag11() -> WmvspInstance<Gf> {
        inst(
            2,
            &[vec![1, 0], vec![0, 1]],
            vec![1, 1],
            vec![1, 1],
            vec![1, 1],
            vec![1, 1],
        )
    }

    #[test]
    fn penalty_examples() {
        assert_eq!(penalty_m(&diag11()), 5);
        let z = inst(
            2,
            &[vec![1, 0], vec![0, 1]],
            vec![1, 1],
            vec![1, 1],
            vec![0, 0],
            vec![0, 0],
        );
        assert_eq!(penalty_m(&z), 1);
        let t = inst(
            2,
            &[vec![1, 0], vec![0, 1]],
            vec![2],
            vec![2],
            vec![3],
            vec![2],
        );
        assert_eq!(penalty_m(&t), 11);
    }

    #[test]
    fn epsilon_examples() {
        let e = |m: usize, n: usize| {
            let a = vec![vec![0; n]; m];
            epsilon(&inst(2, &a, vec![m], vec![n], vec![1], vec![1]))
        };
        assert_eq!(e(2, 2), r(1, 16));
        assert_eq!(e(1, 1), r(1, 8));
        assert_eq!(e(3, 5), r(1, 32));
    }

    #[test]
    fn lambda_schedule() {
        let i = inst(
            2,
            &[vec![0, 0], vec![0, 0]],
            vec![2],
            vec![2],
            vec![1],
            vec![1],
        );
        assert_eq!(lambda_k(0, &i), r(4, 1));
        assert_eq!(lambda_k(3, &i), r(1, 1));
        let mut prev = lambda_k(0, &i);
        let (mut s1, mut s2) = (Rat::ZERO, Rat::ZERO);
        for k in 1..200 {
            let l = lambda_k(k, &i);
            assert!(l < prev);
            s1 += &l;
            s2 += &l * &l;
            prev = l;
        }
        // 4·(H_200 − 1) ≈ 19.5 keeps growing; squares stay below 16·π²/6
        assert!(s1 > r(18, 1));
        assert!(s2 < r(27, 1));
    }

    #[test]
    fn sweep_identity_when_everything_vanishes() {
        let i = inst(
            2,
            &[vec![0, 0], vec![0, 0]],
            vec![2],
            vec![2],
            vec![0],
            vec![0],
        );
        let mut p = i.problem();
        p.epsilon = Rat::ZERO;
        let z = ProductPoint::bottom(&2, &[2], &[2]);
        assert_eq!(p.sweep(&z, &r(3, 1)).unwrap(), z);
    }

    #[test]
    fn sweep_scalar_block() {
        // λ0 = 2: x jumps to 1, y stays at V, then the hinge meets them at ½
        let i = inst(2, &[vec![1]], vec![1], vec![1], vec![1], vec![1]);
        let z0 = ProductPoint::bottom(&2, &[1], &[1]);
        let z1 = sweep(&z0, 0, &i).unwrap();
        assert_eq!(sweep(&z0, 0, &i).unwrap(), z1);
        assert_eq!(z1.xs[0].dim_value(), r(1, 2));
        assert_eq!(z1.ys[0].dim_value(), r(1, 2));
    }

    #[test]
    fn candidate_examples() {
        let i = diag11();
        let t = i.trivial_tuple();
        assert_eq!(i.lattice_objective(&t).unwrap(), 0);
        let (got, g) = extract_candidate(&ProductPoint::vertex(&t), &i).unwrap();
        assert_eq!((got, g), (t, 0));
        assert_eq!(i.lattice_objective(&i.bottom_tuple()).unwrap(), -2);
        let full = (
            vec![Subspace::full(&2, 1), Subspace::zero(&2, 1)],
            vec![Subspace::zero(&2, 1), Subspace::full(&2, 1)],
        );
        let z = ProductPoint {
            xs: vec![
                ComplexPoint::new(
                    vec![
                        (r(1, 2), Subspace::zero(&2, 1)),
                        (r(1, 2), Subspace::full(&2, 1)),
                    ],
                    Orientation::Ascending,
                )
                .unwrap(),
                ComplexPoint::bottom(&2, 1, Orientation::Ascending),
            ],
            ys: vec![
                ComplexPoint::vertex(Subspace::zero(&2, 1), Orientation::Descending),
                ComplexPoint::bottom(&2, 1, Orientation::Descending),
            ],
        };
        let (best, g) = extract_candidate(&z, &i).unwrap();
        assert_eq!(best, full);
        assert_eq!(g, -2);
    }

    #[test]
    fn objective_on_vertices_and_tops() {
        let i = inst(
            2,
            &[vec![0, 0, 0], vec![0, 0, 0]],
            vec![1, 1],
            vec![2, 1],
            vec![2, 3],
            vec![1, 2],
        );
        let full = (
            vec![Subspace::full(&2, 1), Subspace::full(&2, 1)],
            vec![Subspace::full(&2, 2), Subspace::full(&2, 1)],
        );
        assert_eq!(
            eval_objective(&i, &ProductPoint::vertex(&full), false).unwrap(),
            r(-(2 + 3 + 2 + 2), 1)
        );
        let d = diag11();
        let t = (
            vec![Subspace::full(&2, 1), Subspace::full(&2, 1)],
            vec![Subspace::full(&2, 1), Subspace::zero(&2, 1)],
        );
        assert_eq!(
            eval_objective(&d, &ProductPoint::vertex(&t), false).unwrap(),
            Rat::from(d.lattice_objective(&t).unwrap())
        );
    }

    #[test]
    fn solve_examples() {
        let rep = solve_wmvsp(&diag11(), &SolverConfig::default()).unwrap();
        assert_eq!(rep.weighted_dim, 2);
        assert!(diag11().is_vanishing(&rep.tuple()).unwrap());

        let i2 = inst(
            2,
            &[vec![1, 0], vec![0, 1]],
            vec![2],
            vec![2],
            vec![1],
            vec![1],
        );
        let rep = solve_wmvsp(&i2, &SolverConfig::default()).unwrap();
        assert_eq!(rep.weighted_dim, 2);
        assert_eq!(rep.certificate, Certificate::WeakDualityTight);

        let z = inst(
            3,
            &[vec![0, 0, 0], vec![0, 0, 0]],
            vec![1, 1],
            vec![2, 1],
            vec![1, 1],
            vec![1, 1],
        );
        let rep = solve_wmvsp(&z, &SolverConfig::default()).unwrap();
        assert_eq!(rep.weighted_dim, 5);
        assert!(rep.xs.iter().chain(&rep.ys).all(|s| s.is_full()));
    }

    #[test]
    fn solve_rejects_negative_weights() {
        let m = Mat::<Gf>::identity(&2, 1);
        assert_eq!(
            WmvspInstance::from_matrix(&m, vec![1], vec![1], vec![-1], vec![1]),
            Err(Error::NegativeWeight(-1))
        );
    }

    #[test]
    fn ncrank_examples() {
        let i2 = Bilinear::new(Mat::<Gf>::identity(&2, 2));
        let rep = solve_ncrank(&[i2], &SolverConfig::default()).unwrap();
        assert_eq!(rep.ncrank, 2);
        let z = Bilinear::new(Mat::<Gf>::zeros(&2, 2, 2));
        let rep = solve_ncrank(std::slice::from_ref(&z), &SolverConfig::default()).unwrap();
        assert_eq!(rep.ncrank, 0);
        assert!(rep.shrunk.is_full());
        assert!(
            (image_dim(&[z], &rep.shrunk).unwrap() as i64) <= rep.shrunk.dim() as i64 - rep.shrink
        );
        let bad = Bilinear::new(Mat::<Gf>::zeros(&2, 2, 3));
        assert!(matches!(
            solve_ncrank(
                &[Bilinear::new(Mat::<Gf>::identity(&2, 2)), bad],
                &SolverConfig::default()
            ),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn deterministic_reports() {
        let i = inst(
            3,
            &[vec![1, 2, 0], vec![2, 1, 1], vec![0, 1, 2]],
            vec![1, 2],
            vec![2, 1],
            vec![2, 1],
            vec![3, 1],
        );
        let a = solve_wmvsp(&i, &SolverConfig::default()).unwrap();
        let b = solve_wmvsp(&i, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn paper_bound_is_huge_but_finite() {
        let b = paper_bound(&diag11());
        assert_eq!(b.sweeps, BigUint::from(2u64).pow(64));
        assert_eq!(b.iterations, BigUint::from(2u64).pow(66));
        assert!((b.h_half_approx - 1.5 * 2f64.sqrt()).abs() < 1e-12);
    }
}
