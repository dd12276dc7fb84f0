//! Instance files and serializable views of solver output.
//!
//! Scalars travel as strings (`"3"`, `"-7/2"`) so rational entries stay exact.
//! Views hold only plain data and deserialize back, which is what the CLI's
//! machine output round-trips through.

use serde::{Deserialize, Serialize};

use crate::bilinear::Bilinear;
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::matrix::Mat;
use crate::oracle::OracleResult;
use crate::orthoscheme::SubspaceTuple;
use crate::qdm::{BlockTriangularForm, MvChain};
use crate::sppa::{
    image_dim, Certificate, NcRankReport, PaperBound, SolutionReport, WmvspInstance,
};
use crate::subspace::Subspace;
use crate::Gf;

/// Rows of scalar strings.
pub type ScalarMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub field: FieldTag,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub col_blocks: Vec<usize>,
    /// `blocks[α][β]` is the `m_α × n_β` block.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<Vec<ScalarMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    /// Matrix tuple for `ncrank`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<ScalarMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    #[serde(rename = "C")]
    pub c: Vec<i64>,
    #[serde(rename = "D")]
    pub d: Vec<i64>,
}

fn parse_matrix<F: Field>(
    ctx: &F::Ctx,
    rows: usize,
    cols: usize,
    data: &ScalarMatrix,
    what: &str,
) -> Result<Mat<F>> {
    if data.len() != rows {
        return Err(Error::Parse(format!(
            "{what}: expected {rows} rows, found {}",
            data.len()
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        out.push(
            row.iter()
                .map(|s| F::parse(ctx, s))
                .collect::<Result<Vec<F>>>()?,
        );
    }
    Mat::from_rows(ctx, cols, out)
}

/// Scalar strings of a matrix, row by row.
pub fn mat_strings<F: Field>(m: &Mat<F>) -> ScalarMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

impl InstanceFile {
    pub fn ctx<F: Field>(&self) -> Result<F::Ctx> {
        F::ctx_from_tag(self.field)
    }

    /// The partitioned instance; weights default to all ones.
    pub fn instance<F: Field>(&self) -> Result<WmvspInstance<F>> {
        let ctx = self.ctx::<F>()?;
        let (mu, nu) = (self.row_blocks.len(), self.col_blocks.len());
        if self.blocks.len() != mu {
            return Err(Error::Parse(format!(
                "expected {mu} block rows, found {}",
                self.blocks.len()
            )));
        }
        let mut grid = Vec::with_capacity(mu);
        for (al, row) in self.blocks.iter().enumerate() {
            if row.len() != nu {
                return Err(Error::Parse(format!(
                    "block row {al} has {} blocks, expected {nu}",
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(nu);
            for (be, data) in row.iter().enumerate() {
                let what = format!("block ({al},{be})");
                out.push(Bilinear::new(parse_matrix(
                    &ctx,
                    self.row_blocks[al],
                    self.col_blocks[be],
                    data,
                    &what,
                )?));
            }
            grid.push(out);
        }
        let (c, d) = match &self.weights {
            Some(w) => (w.c.clone(), w.d.clone()),
            None => (vec![1; mu], vec![1; nu]),
        };
        if c.len() != mu || d.len() != nu {
            return Err(Error::Parse(format!(
                "weights need {mu} C and {nu} D entries"
            )));
        }
        WmvspInstance::new(
            &ctx,
            self.row_blocks.clone(),
            self.col_blocks.clone(),
            grid,
            c,
            d,
        )
    }

    /// The matrix tuple of an nc-rank file.
    pub fn ncrank_matrices<F: Field>(&self) -> Result<Vec<Bilinear<F>>> {
        let ctx = self.ctx::<F>()?;
        let ms = self
            .matrices
            .as_ref()
            .ok_or_else(|| Error::Parse("missing `matrices`".into()))?;
        let first = ms
            .first()
            .ok_or_else(|| Error::Parse("`matrices` is empty".into()))?;
        let m = first.len();
        let n = first.first().map_or(0, Vec::len);
        ms.iter()
            .enumerate()
            .map(|(i, data)| {
                parse_matrix(&ctx, m, n, data, &format!("matrix {i}")).map(Bilinear::new)
            })
            .collect()
    }

    pub fn from_instance<F: Field>(inst: &WmvspInstance<F>) -> Self {
        InstanceFile {
            field: F::tag(inst.ctx()),
            row_blocks: inst.row_dims().to_vec(),
            col_blocks: inst.col_dims().to_vec(),
            blocks: inst
                .blocks()
                .iter()
                .map(|r| r.iter().map(|b| mat_strings(b.matrix())).collect())
                .collect(),
            weights: (!inst.is_unit_weight()).then(|| Weights {
                c: inst.weights_c().to_vec(),
                d: inst.weights_d().to_vec(),
            }),
            matrices: None,
        }
    }

    pub fn from_matrices<F: Field>(matrices: &[Bilinear<F>]) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::ShapeMismatch("no matrices".into()))?;
        Ok(InstanceFile {
            field: F::tag(first.ctx()),
            row_blocks: Vec::new(),
            col_blocks: Vec::new(),
            blocks: Vec::new(),
            weights: None,
            matrices: Some(matrices.iter().map(|a| mat_strings(a.matrix())).collect()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceView {
    pub dim: usize,
    /// RREF basis rows.
    pub basis: ScalarMatrix,
}

impl SubspaceView {
    pub fn new<F: Field>(s: &Subspace<F>) -> Self {
        SubspaceView {
            dim: s.dim(),
            basis: mat_strings(s.basis()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleView {
    #[serde(rename = "X")]
    pub xs: Vec<SubspaceView>,
    #[serde(rename = "Y")]
    pub ys: Vec<SubspaceView>,
}

impl TupleView {
    pub fn new<F: Field>(t: &SubspaceTuple<F>) -> Self {
        TupleView {
            xs: t.0.iter().map(SubspaceView::new).collect(),
            ys: t.1.iter().map(SubspaceView::new).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionView {
    pub weighted_dim: i64,
    /// Lattice objective `g` of the reported tuple.
    pub objective: i64,
    pub tuple: TupleView,
}

impl SolutionView {
    pub fn new<F: Field>(r: &SolutionReport<F>) -> Self {
        SolutionView {
            weighted_dim: r.weighted_dim,
            objective: r.objective,
            tuple: TupleView::new(&r.tuple()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcRankView {
    pub ncrank: usize,
    pub shrink: i64,
    #[serde(rename = "X")]
    pub x: SubspaceView,
    #[serde(rename = "Y")]
    pub y: SubspaceView,
    /// `dim Σ A_i(X)`.
    pub image_dim: usize,
}

impl NcRankView {
    pub fn new<F: Field>(r: &NcRankReport<F>, matrices: &[Bilinear<F>]) -> Result<Self> {
        Ok(NcRankView {
            ncrank: r.ncrank,
            shrink: r.shrink,
            x: SubspaceView::new(&r.shrunk),
            y: SubspaceView::new(&r.y),
            image_dim: image_dim(matrices, &r.shrunk)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTriangularView {
    #[serde(rename = "E")]
    pub e: Vec<ScalarMatrix>,
    #[serde(rename = "F")]
    pub f: Vec<ScalarMatrix>,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub diag_sizes: Vec<(usize, usize)>,
    pub transformed: ScalarMatrix,
}

impl BlockTriangularView {
    pub fn new<F: Field>(b: &BlockTriangularForm<F>) -> Self {
        BlockTriangularView {
            e: b.e.iter().map(mat_strings).collect(),
            f: b.f.iter().map(mat_strings).collect(),
            row_perm: b.row_perm.clone(),
            col_perm: b.col_perm.clone(),
            diag_sizes: b.diag_sizes(),
            transformed: mat_strings(&b.transformed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdmView {
    /// Unit-weight dimension of each chain element, bottom to top.
    pub chain_dims: Vec<i64>,
    pub chain: Vec<TupleView>,
    pub form: BlockTriangularView,
    /// Whether each square diagonal block passed the quasi-irreducibility test.
    pub irreducible: Vec<Option<bool>>,
}

impl QdmView {
    pub fn new<F: Field>(
        chain: &MvChain<F>,
        form: &BlockTriangularForm<F>,
        irreducible: Vec<Option<bool>>,
    ) -> Self {
        QdmView {
            chain_dims: chain.dims.clone(),
            chain: chain.elements.iter().map(TupleView::new).collect(),
            form: BlockTriangularView::new(form),
            irreducible,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleView {
    pub optimum: i64,
    pub optima: Vec<TupleView>,
}

impl OracleView {
    pub fn new(r: &OracleResult) -> Self {
        OracleView {
            optimum: r.optimum,
            optima: r.optima.iter().map(TupleView::new::<Gf>).collect(),
        }
    }
}

/// The sweep bound, as decimal strings since it overflows every machine integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperBoundView {
    pub iterations: String,
    pub sweeps: String,
    pub h_half: String,
    pub h_half_approx: f64,
}

impl PaperBoundView {
    pub fn new(b: &PaperBound) -> Self {
        PaperBoundView {
            iterations: b.iterations.to_string(),
            sweeps: b.sweeps.to_string(),
            h_half: b.h_half.clone(),
            h_half_approx: b.h_half_approx,
        }
    }
}

/// One machine-readable record per CLI run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunRecord<R> {
    pub command: String,
    /// SHA-256 of the canonical instance JSON.
    pub instance_hash: String,
    pub result: R,
    pub certificate: Option<Certificate>,
    pub sweeps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<i64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    const SAMPLE: &str = r#"{
        "field": "q",
        "row_blocks": [1, 1],
        "col_blocks": [2],
        "blocks": [[[["1", "-1/2"]]], [[["0", "3"]]]],
        "weights": {"C": [2, 1], "D": [3]}
    }"#;

    #[test]
    fn parses_rational_blocks() {
        let f: InstanceFile = serde_json::from_str(SAMPLE).unwrap();
        let inst = f.instance::<Q>().unwrap();
        assert_eq!(inst.row_dims(), &[1, 1]);
        assert_eq!(inst.weights_c(), &[2, 1]);
        assert_eq!(inst.block(0, 0).matrix().get(0, 1).to_string(), "-1/2");
        assert_eq!(InstanceFile::from_instance(&inst), f);
    }

    #[test]
    fn wrong_field_for_type() {
        let f: InstanceFile = serde_json::from_str(SAMPLE).unwrap();
        assert!(f.instance::<Gf>().is_err());
    }

    #[test]
    fn rejects_bad_shapes_and_tags() {
        let bad = SAMPLE.replace(r#"["0", "3"]"#, r#"["0"]"#);
        let f: InstanceFile = serde_json::from_str(&bad).unwrap();
        assert!(matches!(f.instance::<Q>(), Err(Error::Parse(_))));
        assert!(
            serde_json::from_str::<InstanceFile>(&SAMPLE.replace("\"q\"", "\"gf:4\"")).is_err()
        );
        assert!(
            serde_json::from_str::<InstanceFile>(&SAMPLE.replace("\"q\"", "\"real\"")).is_err()
        );
    }

    #[test]
    fn negative_weight_rejected() {
        let f: InstanceFile = serde_json::from_str(&SAMPLE.replace("[3]", "[-1]")).unwrap();
        assert!(matches!(f.instance::<Q>(), Err(Error::NegativeWeight(-1))));
    }

    #[test]
    fn gf_reduces_entries() {
        let s = r#"{"field": "gf:3", "matrices": [[["4", "1/2"], ["0", "-1"]]]}"#;
        let f: InstanceFile = serde_json::from_str(s).unwrap();
        let ms = f.ncrank_matrices::<Gf>().unwrap();
        assert_eq!(
            mat_strings(ms[0].matrix()),
            vec![vec!["1", "2"], vec!["0", "2"]]
        );
        assert_eq!(
            InstanceFile::from_matrices(&ms)
                .unwrap()
                .ncrank_matrices::<Gf>()
                .unwrap(),
            ms
        );
    }
}
