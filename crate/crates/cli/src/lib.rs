//! Library half of the `wmvsp` binary: argument types and the subcommands.
//!
//! [`run`] never prints or exits; it returns what should go to stdout and
//! stderr together with the exit code, so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 solver failure, 2 bad input, 3 oracle mismatch,
//! 4 failed self-check (`--verify`, shrunk-subspace inequality).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use wmvsp::format::{
    BlockTriangularView, InstanceFile, NcRankView, OracleView, PaperBoundView, QdmView, RunRecord,
    SolutionView, Weights,
};
use wmvsp::oracle::{brute_force_ncrank, brute_force_wmvsp, brute_force_wmvsp_jobs, OracleLimit};
use wmvsp::qdm::{
    assemble_block_triangular, is_quasi_irreducible, qdm, sppa_solver, BlockTriangularForm,
};
use wmvsp::sppa::{paper_bound, solve_ncrank, solve_wmvsp};
use wmvsp::{Field, FieldTag, Gf, SolverConfig, Subspace, Q};

pub const EXIT_SOLVER: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "wmvsp",
    version,
    about = "Exact solver for weighted maximum vanishing subspace problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Solve a partitioned instance.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Compare with the exhaustive oracle (finite fields only).
        #[arg(long)]
        check_oracle: bool,
        /// Print the theoretical sweep bound instead of solving.
        #[arg(long)]
        paper_bound: bool,
    },
    /// Quasi-DM block-triangular form.
    Qdm {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Recompute the transformation and check the zero pattern.
        #[arg(long)]
        verify: bool,
    },
    /// Non-commutative rank of the `matrices` tuple.
    Ncrank {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Compare with the exhaustive oracle.
        #[arg(long)]
        check_oracle: bool,
    },
    /// Exhaustive optimum over a finite field.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Worker threads for the enumeration.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Largest number of subspace tuples to enumerate.
        #[arg(long, default_value_t = OracleLimit::default().max_tuples)]
        limit: u128,
    },
    /// Print a random instance file (test helper).
    RandomInstance(RandomArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Instance file (JSON).
    pub file: PathBuf,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
    /// Include the solver trace (the optimal tuples for `oracle`).
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Hard sweep limit (default 10000)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_sweeps: Option<u64>,
    /// Sweeps without improvement before stopping (default 50(m+n)).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub stall: Option<u64>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig {
            stall_sweeps: self.stall.map(|k| k as usize),
            ..SolverConfig::default()
        };
        if let Some(k) = self.max_sweeps {
            cfg.max_sweeps = k as usize;
        }
        cfg
    }
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "gf:2")]
    pub field: FieldTag,
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub row_blocks: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub col_blocks: Vec<usize>,
    /// Entries are drawn from 0..=max-entry.
    #[arg(long, default_value_t = 2)]
    pub max_entry: i64,
    /// Weights are drawn from 0..=max-weight; 1 means unit weights.
    #[arg(long, default_value_t = 1)]
    pub max_weight: i64,
    /// Emit an nc-rank file with this many matrices instead.
    #[arg(long)]
    pub matrices: Option<usize>,
}

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Verify(String),
    #[error(transparent)]
    Solver(#[from] wmvsp::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Solver(_) => EXIT_SOLVER,
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Output of a command plus a failure detected after the report was built.
struct Report {
    out: String,
    late: Option<Failure>,
}

type Run = Result<Report, Failure>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    #[serde(flatten)]
    pub solution: SolutionView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_optimum: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcRankResult {
    #[serde(flatten)]
    pub ncrank: NcRankView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_ncrank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdmResult {
    #[serde(flatten)]
    pub qdm: QdmView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

macro_rules! dispatch {
    ($file:expr, $f:ident($($arg:expr),*)) => {
        match $file.field {
            FieldTag::Prime(_) => $f::<Gf>($($arg),*),
            FieldTag::Rational => $f::<Q>($($arg),*),
        }
    };
}

pub fn run(cli: Cli) -> Outcome {
    let res = match &cli.cmd {
        Cmd::Solve {
            common,
            solver,
            check_oracle,
            paper_bound,
        } => with_file(common, |f, h| {
            dispatch!(
                f,
                cmd_solve(f, h, common, solver, *check_oracle, *paper_bound)
            )
        }),
        Cmd::Qdm {
            common,
            solver,
            verify,
        } => with_file(common, |f, h| {
            dispatch!(f, cmd_qdm(f, h, common, solver, *verify))
        }),
        Cmd::Ncrank {
            common,
            solver,
            check_oracle,
        } => with_file(common, |f, h| {
            dispatch!(f, cmd_ncrank(f, h, common, solver, *check_oracle))
        }),
        Cmd::Oracle {
            common,
            jobs,
            limit,
        } => with_file(common, |f, h| cmd_oracle(f, h, common, *jobs, *limit)),
        Cmd::RandomInstance(args) => random_instance(args),
    };
    match res {
        Ok(Report { out, late: None }) => Outcome {
            stdout: out,
            ..Outcome::default()
        },
        Ok(Report { out, late: Some(e) }) => Outcome {
            stdout: out,
            stderr: format!("error: {e}\n"),
            code: e.code(),
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.code(),
        },
    }
}

/// Reads the instance and hashes its canonical serialization.
pub fn load(path: &std::path::Path) -> Result<(InstanceFile, String), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let canon = serde_json::to_vec(&file).expect("instance file serializes");
    Ok((file, hex::encode(Sha256::digest(&canon))))
}

fn with_file(common: &Common, f: impl FnOnce(&InstanceFile, String) -> Run) -> Run {
    let (file, hash) = load(&common.file)?;
    f(&file, hash)
}

fn json<R: Serialize>(rec: &RunRecord<R>) -> String {
    let mut s = serde_json::to_string_pretty(rec).expect("record serializes");
    s.push('\n');
    s
}

fn record<R>(command: &str, hash: String, result: R) -> RunRecord<R> {
    RunRecord {
        command: command.into(),
        instance_hash: hash,
        result,
        certificate: None,
        sweeps: None,
        trace: None,
    }
}

fn need_finite(file: &InstanceFile) -> Result<(), Failure> {
    match file.field {
        FieldTag::Prime(_) => Ok(()),
        FieldTag::Rational => Err(Failure::Input(
            "the oracle needs a finite field (gf:p)".into(),
        )),
    }
}

fn fmt_subspace<F: Field>(s: &Subspace<F>) -> String {
    if s.is_zero() {
        return "{0}".into();
    }
    let rows: Vec<String> = s
        .basis()
        .row_vecs()
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", xs.join(" "))
        })
        .collect();
    format!("span{{{}}}", rows.join(", "))
}

fn fmt_trace(out: &mut String, trace: &[i64]) {
    let xs: Vec<String> = trace.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(out, "trace (best g per sweep): {}", xs.join(" "));
}

fn cmd_solve<F: Field>(
    file: &InstanceFile,
    hash: String,
    c: &Common,
    s: &SolverArgs,
    check_oracle: bool,
    bound: bool,
) -> Run {
    let inst = file.instance::<F>().map_err(input)?;
    if check_oracle {
        need_finite(file)?;
    }
    let mut out = String::new();
    if bound {
        let b = PaperBoundView::new(&paper_bound(&inst));
        if c.json {
            out = json(&record("solve", hash, b));
        } else {
            let _ = writeln!(out, "paper bound (computed, not run):");
            let _ = writeln!(
                out,
                "  resolvent steps W^8 m^9 n^9 (m+n)^24 = {}",
                b.iterations
            );
            let _ = writeln!(out, "  sweeps          W^8 m^8 n^8 (m+n)^24 = {}", b.sweeps);
            let _ = writeln!(out, "  h(1/2) = {} ~ {:.6}", b.h_half, b.h_half_approx);
        }
        return Ok(Report { out, late: None });
    }
    let rep = solve_wmvsp(&inst, &s.config())?;
    let mut late = None;
    let mut oracle_optimum = None;
    if check_oracle {
        let o = brute_force_wmvsp(
            &file.instance::<Gf>().map_err(input)?,
            OracleLimit::default(),
        )?;
        if o.optimum != rep.weighted_dim {
            late = Some(Failure::Mismatch(format!(
                "solver found {}, oracle optimum is {}",
                rep.weighted_dim, o.optimum
            )));
        }
        oracle_optimum = Some(o.optimum);
    }
    if c.json {
        let mut r = record(
            "solve",
            hash,
            SolveResult {
                solution: SolutionView::new(&rep),
                oracle_optimum,
            },
        );
        r.certificate = Some(rep.certificate);
        r.sweeps = Some(rep.sweeps);
        r.trace = c.verbose.then(|| rep.trace.clone());
        out = json(&r);
    } else {
        let _ = writeln!(out, "weighted dimension: {}", rep.weighted_dim);
        let _ = writeln!(out, "objective g: {}", rep.objective);
        let _ = writeln!(
            out,
            "certificate: {} after {} sweeps",
            cert_name(rep.certificate),
            rep.sweeps
        );
        for (i, x) in rep.xs.iter().enumerate() {
            let _ = writeln!(out, "X_{}: dim {} {}", i + 1, x.dim(), fmt_subspace(x));
        }
        for (j, y) in rep.ys.iter().enumerate() {
            let _ = writeln!(out, "Y_{}: dim {} {}", j + 1, y.dim(), fmt_subspace(y));
        }
        if let Some(o) = oracle_optimum {
            let verdict = if o == rep.weighted_dim {
                "match"
            } else {
                "MISMATCH"
            };
            let _ = writeln!(out, "oracle optimum: {o} ({verdict})");
        }
        if c.verbose {
            fmt_trace(&mut out, &rep.trace);
        }
    }
    Ok(Report { out, late })
}

fn cert_name(c: wmvsp::Certificate) -> String {
    serde_json::to_value(c)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

/// `*` for nonzero entries, with bars between diagonal blocks.
pub fn staircase<F: Field>(form: &BlockTriangularForm<F>) -> String {
    let t = &form.transformed;
    let col_cuts: Vec<usize> = form
        .blocks
        .iter()
        .map(|b| b.col_start)
        .filter(|&c| c > 0)
        .collect();
    let row_cuts: Vec<usize> = form
        .blocks
        .iter()
        .map(|b| b.row_start)
        .filter(|&r| r > 0)
        .collect();
    let width = t.cols() * 2 + col_cuts.len() * 2;
    let mut out = String::new();
    for i in 0..t.rows() {
        if row_cuts.contains(&i) {
            let _ = writeln!(out, "  {}", "-".repeat(width.saturating_sub(1)));
        }
        let mut line = String::from("  ");
        for j in 0..t.cols() {
            if col_cuts.contains(&j) {
                line.push_str("| ");
            }
            line.push(if t.get(i, j).is_zero() { '.' } else { '*' });
            line.push(' ');
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}

fn cmd_qdm<F: Field>(
    file: &InstanceFile,
    hash: String,
    c: &Common,
    s: &SolverArgs,
    verify: bool,
) -> Run {
    let inst = file.instance::<F>().map_err(input)?;
    let cfg = s.config();
    let chain = qdm(&inst, &cfg)?;
    let form = assemble_block_triangular(&inst, &chain)?;
    let mut solve = sppa_solver::<F>(&cfg);
    let mut irreducible = Vec::with_capacity(form.blocks.len());
    for (k, b) in form.blocks.iter().enumerate() {
        let (r, cc) = b.size();
        let verdict = if r != cc || r == 0 {
            None
        } else {
            match is_quasi_irreducible(&form.block_instance(k)?, &mut solve) {
                Ok(q) => Some(q.irreducible),
                Err(wmvsp::Error::NotDmRegular(_)) => None,
                Err(e) => return Err(e.into()),
            }
        };
        irreducible.push(verdict);
    }
    let mut late = None;
    let verified = verify.then(|| match form.verify(&inst) {
        Ok(()) => true,
        Err(e) => {
            late = Some(Failure::Verify(format!(
                "block-triangular form failed verification: {e}"
            )));
            false
        }
    });
    let view = QdmView::new(&chain, &form, irreducible.clone());
    let mut out = String::new();
    if c.json {
        out = json(&record(
            "qdm",
            hash,
            QdmResult {
                qdm: view,
                verified,
            },
        ));
    } else {
        let BlockTriangularView {
            row_perm,
            col_perm,
            diag_sizes,
            ..
        } = &view.form;
        let _ = writeln!(
            out,
            "q-DM chain: {} elements, dims {:?}",
            chain.len(),
            chain.dims
        );
        for (name, ms) in [("E", &form.e), ("F", &form.f)] {
            for (i, m) in ms.iter().enumerate() {
                let _ = write!(out, "{name}_{} =\n{m}", i + 1);
            }
        }
        let _ = writeln!(out, "row permutation: {row_perm:?}");
        let _ = writeln!(out, "column permutation: {col_perm:?}");
        let _ = write!(out, "staircase:\n{}", staircase(&form));
        let sizes: Vec<String> = diag_sizes.iter().map(|(r, c)| format!("{r}x{c}")).collect();
        let _ = writeln!(out, "diagonal blocks: {}", sizes.join(", "));
        if irreducible.len() == 1 && irreducible[0] == Some(true) {
            let _ = writeln!(out, "the matrix is quasi DM-irreducible");
        } else {
            for (k, v) in irreducible.iter().enumerate() {
                let what = match v {
                    Some(true) => "quasi DM-irreducible",
                    Some(false) => "reducible",
                    None => "not square or not DM-regular",
                };
                let _ = writeln!(out, "block {}: {what}", k + 1);
            }
        }
        match verified {
            Some(true) => out.push_str("verify: ok\n"),
            Some(false) => out.push_str("verify: FAILED\n"),
            None => {}
        }
    }
    Ok(Report { out, late })
}

fn cmd_ncrank<F: Field>(
    file: &InstanceFile,
    hash: String,
    c: &Common,
    s: &SolverArgs,
    check_oracle: bool,
) -> Run {
    let ms = file.ncrank_matrices::<F>().map_err(input)?;
    if check_oracle {
        need_finite(file)?;
    }
    let rep = solve_ncrank(&ms, &s.config())?;
    let view = NcRankView::new(&rep, &ms)?;
    let rhs = view.x.dim as i64 - view.shrink;
    let mut late = None;
    if view.image_dim as i64 > rhs {
        late = Some(Failure::Verify(format!(
            "dim sum A_i(X) = {} exceeds dim X - c = {rhs}",
            view.image_dim
        )));
    }
    let mut oracle_ncrank = None;
    if check_oracle {
        let o = brute_force_ncrank(
            &file.ncrank_matrices::<Gf>().map_err(input)?,
            OracleLimit::default(),
        )?;
        if o != rep.ncrank {
            late = Some(Failure::Mismatch(format!(
                "solver found nc-rank {}, oracle says {o}",
                rep.ncrank
            )));
        }
        oracle_ncrank = Some(o);
    }
    let mut out = String::new();
    if c.json {
        let mut r = record(
            "ncrank",
            hash,
            NcRankResult {
                ncrank: view,
                oracle_ncrank,
            },
        );
        r.certificate = Some(rep.certificate);
        r.sweeps = Some(rep.sweeps);
        r.trace = c.verbose.then(|| rep.trace.clone());
        out = json(&r);
    } else {
        let _ = writeln!(out, "nc-rank: {}", rep.ncrank);
        let _ = writeln!(
            out,
            "shrunk subspace X: dim {} {}",
            rep.shrunk.dim(),
            fmt_subspace(&rep.shrunk)
        );
        let ok = if view.image_dim as i64 <= rhs {
            "holds"
        } else {
            "FAILS"
        };
        let _ = writeln!(
            out,
            "dim sum A_i(X) = {} <= dim X - c = {} - {} = {rhs} ({ok})",
            view.image_dim, view.x.dim, view.shrink
        );
        let _ = writeln!(
            out,
            "certificate: {} after {} sweeps",
            cert_name(rep.certificate),
            rep.sweeps
        );
        if let Some(o) = oracle_ncrank {
            let verdict = if o == rep.ncrank { "match" } else { "MISMATCH" };
            let _ = writeln!(out, "oracle nc-rank: {o} ({verdict})");
        }
        if c.verbose {
            fmt_trace(&mut out, &rep.trace);
        }
    }
    Ok(Report { out, late })
}

fn cmd_oracle(file: &InstanceFile, hash: String, c: &Common, jobs: usize, limit: u128) -> Run {
    need_finite(file)?;
    let inst = file.instance::<Gf>().map_err(input)?;
    let res = brute_force_wmvsp_jobs(&inst, OracleLimit { max_tuples: limit }, jobs.max(1))?;
    let mut out = String::new();
    if c.json {
        out = json(&record("oracle", hash, OracleView::new(&res)));
    } else {
        let _ = writeln!(out, "optimum: {}", res.optimum);
        let _ = writeln!(out, "optimal tuples: {}", res.optima.len());
        if c.verbose {
            for (xs, ys) in &res.optima {
                let xs: Vec<String> = xs.iter().map(fmt_subspace).collect();
                let ys: Vec<String> = ys.iter().map(fmt_subspace).collect();
                let _ = writeln!(out, "  X = ({}), Y = ({})", xs.join(", "), ys.join(", "));
            }
        }
    }
    Ok(Report { out, late: None })
}

fn random_instance(a: &RandomArgs) -> Run {
    if a.max_entry < 0 || a.max_weight < 0 {
        return Err(Failure::Input("bounds must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut mat = |r: usize, c: usize| -> Vec<Vec<String>> {
        (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| rng.gen_range(0..=a.max_entry).to_string())
                    .collect()
            })
            .collect()
    };
    let file = match a.matrices {
        Some(n) => {
            let (m, k) = (a.row_blocks.iter().sum(), a.col_blocks.iter().sum());
            InstanceFile {
                field: a.field,
                row_blocks: Vec::new(),
                col_blocks: Vec::new(),
                blocks: Vec::new(),
                weights: None,
                matrices: Some((0..n.max(1)).map(|_| mat(m, k)).collect()),
            }
        }
        None => {
            let blocks = a
                .row_blocks
                .iter()
                .map(|&r| a.col_blocks.iter().map(|&c| mat(r, c)).collect())
                .collect();
            let weights = (a.max_weight != 1).then(|| Weights {
                c: a.row_blocks
                    .iter()
                    .map(|_| rng.gen_range(0..=a.max_weight))
                    .collect(),
                d: a.col_blocks
                    .iter()
                    .map(|_| rng.gen_range(0..=a.max_weight))
                    .collect(),
            });
            InstanceFile {
                field: a.field,
                row_blocks: a.row_blocks.clone(),
                col_blocks: a.col_blocks.clone(),
                blocks,
                weights,
                matrices: None,
            }
        }
    };
    let mut out = serde_json::to_string_pretty(&file).expect("instance file serializes");
    out.push('\n');
    Ok(Report { out, late: None })
}
