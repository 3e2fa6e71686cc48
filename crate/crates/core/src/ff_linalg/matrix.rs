use serde::{Deserialize, Serialize};

use super::field::{Elem, Field};
use super::subspace::SubspaceBasis;
use crate::error::{Error, Result};

/// Dense row-major matrix of field elements. The field is passed to each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, e: Elem) {
        self.data[r * self.cols + c] = e;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem], f: &Field) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    pub fn scale(&self, t: Elem, f: &Field) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&e| f.mul(t, e)).collect() }
    }

    pub fn sub(&self, other: &Matrix, f: &Field) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn pow(&self, e: usize, f: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self, f)?;
        }
        Ok(acc)
    }

    pub fn rank(&self, f: &Field) -> usize {
        rref(self, f).dim()
    }

    /// Inverse by Gauss–Jordan elimination, `None` if singular.
    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let s = f.inv(a.get(col, col));
            a.scale_row(col, s, f);
            inv.scale_row(col, s, f);
            for r in 0..n {
                let factor = a.get(r, col);
                if r != col && factor != 0 {
                    a.add_row_multiple(r, col, f.neg(factor), f);
                    inv.add_row_multiple(r, col, f.neg(factor), f);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: Elem, f: &Field) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, f.mul(s, v));
        }
    }

    /// `row[dst] += s · row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, s: Elem, f: &Field) {
        for c in 0..self.cols {
            let v = f.add(self.get(dst, c), f.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    pub fn to_doc(&self, f: &Field) -> MatrixDoc {
        MatrixDoc {
            p: f.p(),
            k: f.spec().k,
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|&e| e as u32).collect(),
        }
    }
}

/// Serialized matrix: `{"p":..,"k":..,"rows":..,"cols":..,"entries":[..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub p: u32,
    pub k: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl MatrixDoc {
    /// Rebuilds the matrix; for `k > 1` only the fixed fields GF(4), GF(8), GF(9) are recognised.
    pub fn into_matrix(self) -> Result<(Field, Matrix)> {
        let q = (self.p as u64).pow(self.k);
        let field = if self.k == 1 { Field::prime(self.p)? } else { Field::of_order(q)? };
        if field.p() != self.p || field.spec().k != self.k {
            return Err(Error::UnsupportedField(q));
        }
        if self.entries.iter().any(|&e| e as u64 >= q) {
            return Err(Error::InvalidArgument("matrix entry outside the field".into()));
        }
        let m = Matrix::from_vec(self.rows, self.cols, self.entries.into_iter().map(|e| e as Elem).collect())?;
        Ok((field, m))
    }
}

/// In-place reduction of `rows` (each of length `cols`) to reduced row echelon form.
/// Returns the pivot columns; zero rows are removed.
pub(crate) fn rref_rows(rows: &mut Vec<Vec<Elem>>, cols: usize, f: &Field) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let s = f.inv(rows[r][c]);
        if s != 1 {
            for e in rows[r][c..].iter_mut() {
                *e = f.mul(s, *e);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let factor = other[c];
            if factor != 0 {
                let nf = f.neg(factor);
                for (o, &pv) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                    *o = f.add(*o, f.mul(nf, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Canonical reduced echelon basis of the row space of `m`.
pub fn rref(m: &Matrix, f: &Field) -> SubspaceBasis {
    SubspaceBasis::from_vectors(m.cols(), m.row_vecs(), f)
}

/// `{w : m·w = 0}` as a subspace of `F^cols`.
pub fn kernel(m: &Matrix, f: &Field) -> SubspaceBasis {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(&mut rows, m.cols(), f);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut w = vec![0; m.cols()];
            w[fc] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                w[pc] = f.neg(row[fc]);
            }
            w
        })
        .collect();
    SubspaceBasis::from_vectors(m.cols(), basis, f)
}

/// `{w : m·w ∈ target}`.
pub fn preimage(m: &Matrix, target: &SubspaceBasis, f: &Field) -> Result<SubspaceBasis> {
    if target.ambient() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: target.ambient() });
    }
    // Rows of `ann` cut out `target`: h·u = 0 for all h iff u ∈ target.
    let ann = kernel(&target.to_matrix(), f);
    let cut = ann.to_matrix().mul(m, f)?;
    Ok(kernel(&cut, f))
}
