//! Dense matrices over an exact [`Field`] and the elimination primitives
//! everything else is built on.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense row-major matrix. Vectors are rows throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    ctx: F::Ctx,
    data: Vec<F>,
}

/// Output of [`Mat::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub reduced: Mat<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            ctx: ctx.clone(),
            data: vec![F::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one(ctx));
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that 0-row matrices keep their width.
    pub fn from_rows(ctx: &F::Ctx, cols: usize, rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Mat {
            rows: n,
            cols,
            ctx: ctx.clone(),
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(ctx: &F::Ctx, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| F::from_i64(ctx, v)).collect())
            .collect();
        Self::from_rows(ctx, cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Exact product `self * other`.
    pub fn mat_mul(&self, other: &Mat<F>) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[F]) -> Vec<F> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![F::zero(&self.ctx); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + a.clone() * self.get(k, j).clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Mat<F>) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data,
        })
    }

    pub fn push_row(&mut self, row: Vec<F>) {
        assert_eq!(row.len(), self.cols, "row width");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Mat {
            rows: idx.len(),
            cols: self.cols,
            ctx: self.ctx.clone(),
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.rows,
            cols: idx.len(),
            ctx: self.ctx.clone(),
            data,
        }
    }

    /// The unique reduced row echelon form, with rank and pivot columns.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            reduced: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (rows, in RREF) of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let Rref {
            reduced,
            rank,
            pivots,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Self::zeros(&self.ctx, 0, self.cols);
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(&self.ctx); self.cols];
            v[f] = F::one(&self.ctx);
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -reduced.get(i, f).clone();
            }
            basis.push_row(v);
        }
        basis.rref().reduced
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one(&self.ctx));
        }
        let r = aug.rref();
        if r.pivots.iter().take(n).copied().ne(0..n) || r.rank < n {
            return None;
        }
        Some(r.reduced.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Drops zero rows (used on RREF output).
    pub(crate) fn nonzero_rows(&self) -> Self {
        let idx: Vec<usize> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .collect();
        self.select_rows(&idx)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn rref<F: Field>(m: &Mat<F>) -> Rref<F> {
    m.rref()
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    m.rank()
}

pub fn kernel_basis<F: Field>(m: &Mat<F>) -> Mat<F> {
    m.kernel_basis()
}

pub fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Result<Mat<F>> {
    a.mat_mul(b)
}

#[cfg(test)]
pub(crate) fn dot<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(ctx), |acc, (x, y)| acc + x.clone() * y.clone())
}
