//! Dense row-major matrices over the rationals.
//!
//! Maps act on column vectors by left multiplication, so `g ∘ f` is
//! `g.mul(&f)`. Shape mismatches in the arithmetic helpers are programming
//! errors and panic; fallible entry points return [`Error::Shape`].

use std::fmt;

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{shape, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Output of [`RationalMatrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rref: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds from row vectors; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row);
        }
        Ok(Self { rows: r, cols, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Self { rows, cols, entries: vals.iter().map(|&v| super::rational::int(v)).collect() }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.entries[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[Rational]) -> Self {
        Self::from_columns(v.len(), &[v.to_vec()])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: {:?} x {:?}", self.shape(), other.shape());
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape(format!("product of {:?} and {:?}", self.shape(), other.shape())));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|a| -a).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// `[self | other]`
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Self { rows: self.rows, cols, entries }
    }

    /// `[self; other]`
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn hcat_all(rows: usize, parts: &[&Self]) -> Self {
        parts.iter().fold(Self::zeros(rows, 0), |acc, p| acc.hcat(p))
    }

    pub fn vcat_all(cols: usize, parts: &[&Self]) -> Self {
        parts.iter().fold(Self::zeros(0, cols), |acc, p| acc.vcat(p))
    }

    /// Block matrix from a grid; `row_sizes`/`col_sizes` pin down empty blocks.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&Self>>]) -> Self {
        let total_c: usize = col_sizes.iter().sum();
        let mut out = Self::zeros(row_sizes.iter().sum(), total_c);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    assert_eq!(b.shape(), (rs, cs), "block ({bi},{bj})");
                    out.set_block(r0, c0, b);
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.set(oi, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for (oj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, entries }
    }

    /// Gauss-Jordan elimination to the unique reduced row echelon form.
    pub fn row_reduce(&self) -> Rref {
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
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &factor * rv;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { rref: m, pivots, rank }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Indices of the leftmost maximal independent set of columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.row_reduce().pivots
    }

    /// Columns forming a basis of `{v : self·v = 0}`, one per free column.
    pub fn kernel_matrix(&self) -> Self {
        let Rref { rref, pivots, .. } = self.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (kj, &f) in free.iter().enumerate() {
            k.set(f, kj, Rational::one());
            for (pi, &p) in pivots.iter().enumerate() {
                k.set(p, kj, -rref.get(pi, f));
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hcat(&Self::identity(n)).row_reduce();
        if aug.rank < n || aug.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(aug.rref.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Some `x` with `self·x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(shape(format!("rhs of length {} for {} rows", b.len(), self.rows)));
        }
        Ok(self.solve_matrix(&Self::column_vector(b))?.map(|x| x.column(0)))
    }

    /// Column-wise solve of `self·X = b`.
    pub fn solve_matrix(&self, b: &Self) -> Result<Option<Self>> {
        if b.rows != self.rows {
            return Err(shape(format!("rhs {:?} for matrix {:?}", b.shape(), self.shape())));
        }
        let Rref { rref, pivots, .. } = self.hcat(b).row_reduce();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (pi, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, rref.get(pi, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

}

#[derive(serde::Serialize, serde::Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<String>>,
}

impl serde::Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data = (0..self.rows).map(|i| self.row(i).iter().map(format_rational).collect()).collect();
        MatrixRepr { rows: self.rows, cols: self.cols, data }.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        let mut rows = Vec::with_capacity(r.data.len());
        for row in &r.data {
            let parsed: crate::error::Result<Vec<Rational>> = row.iter().map(|x| super::rational::parse_rational(x)).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        if rows.len() != r.rows {
            return Err(D::Error::custom("row count does not match data"));
        }
        RationalMatrix::from_rows(rows, r.cols).map_err(D::Error::custom)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(format_rational).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{frac, int};

    fn m(rows: usize, cols: usize, v: &[i64]) -> RationalMatrix {
        RationalMatrix::from_i64(rows, cols, v)
    }

    #[test]
    fn rref_identity_and_zero() {
        let r = RationalMatrix::identity(2).row_reduce();
        assert_eq!(r.rref, RationalMatrix::identity(2));
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
        let z = RationalMatrix::zeros(2, 2).row_reduce();
        assert_eq!(z.rref, RationalMatrix::zeros(2, 2));
        assert!(z.pivots.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let r = m(2, 2, &[1, 2, 2, 4]).row_reduce();
        assert_eq!(r.rref, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank, 1);
        // independent oracle: the determinant vanishes, an entry does not
        let det = int(1) * int(4) - int(2) * int(2);
        assert_eq!(det, int(0));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(RationalMatrix::identity(3).kernel_matrix().cols(), 0);
        assert_eq!(RationalMatrix::zeros(3, 3).kernel_matrix().cols(), 3);
        let a = m(1, 2, &[1, 1]);
        let k = a.kernel_matrix();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(k.column(0), vec![int(-1), int(1)]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), int(-4)];
        assert_eq!(RationalMatrix::identity(2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(RationalMatrix::zeros(2, 2).solve(&b).unwrap(), None);
        assert_eq!(m(1, 1, &[2]).solve(&[int(1)]).unwrap(), Some(vec![frac(1, 2)]));
        assert!(m(1, 1, &[2]).solve(&[int(1), int(1)]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(3, 3, &[2, 1, 0, 1, 1, 1, 0, 3, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(3));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert_eq!(RationalMatrix::zeros(0, 0).inverse(), Some(RationalMatrix::zeros(0, 0)));
        assert!(m(2, 2, &[0, 1, 0, 1]).inverse().is_none());
    }

    #[test]
    fn serde_round_trip() {
        let a = RationalMatrix::new(2, 1, vec![frac(1, 3), int(-2)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":1,"data":[["1/3"],["-2"]]}"#);
        assert_eq!(serde_json::from_str::<RationalMatrix>(&s).unwrap(), a);
        let e = RationalMatrix::zeros(0, 3);
        assert_eq!(serde_json::from_str::<RationalMatrix>(&serde_json::to_string(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn empty_shapes() {
        let a = RationalMatrix::zeros(0, 3);
        assert_eq!(a.kernel_matrix().cols(), 3);
        let b = RationalMatrix::zeros(3, 0);
        assert_eq!(b.rank(), 0);
        assert_eq!(a.mul(&b), RationalMatrix::zeros(0, 0));
        assert_eq!(b.mul(&a), RationalMatrix::zeros(3, 3));
    }
}
