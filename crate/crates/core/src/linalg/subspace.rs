//! Subspaces of `Q^n` held as independent column bases.

use super::matrix::RationalMatrix;
use super::rational::Rational;
use crate::error::{shape, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    /// Wraps a basis; fails if the columns are dependent.
    pub fn new(basis: RationalMatrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::Invalid("subspace basis columns are dependent".into()));
        }
        Ok(Self { ambient_dim: basis.rows(), basis })
    }

    /// Span of arbitrary columns, keeping the leftmost independent ones.
    pub fn span(vectors: &RationalMatrix) -> Self {
        let basis = vectors.select_columns(&vectors.pivot_columns());
        Self { ambient_dim: vectors.rows(), basis }
    }

    pub(crate) fn from_independent(basis: RationalMatrix) -> Self {
        debug_assert_eq!(basis.rank(), basis.cols());
        Self { ambient_dim: basis.rows(), basis }
    }

    pub fn zero(n: usize) -> Self {
        Self { ambient_dim: n, basis: RationalMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Self { ambient_dim: n, basis: RationalMatrix::identity(n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> RationalMatrix {
        self.basis
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis.hcat(&other.basis).rank() == self.dim()
    }

    /// Coefficients of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.basis.solve(v).ok().flatten()
    }

    /// Coordinates of every column of `m`, if all lie in the subspace.
    pub fn coordinates_of(&self, m: &RationalMatrix) -> Option<RationalMatrix> {
        self.basis.solve_matrix(m).ok().flatten()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }

    pub fn sum(&self, other: &Subspace) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Self::span(&self.basis.hcat(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let k = self.basis.hcat(&other.basis.neg()).kernel_matrix();
        let coeffs = k.submatrix(0..self.dim(), 0..k.cols());
        Self::span(&self.basis.mul(&coeffs))
    }

    /// Whether `self ∩ other = 0`.
    pub fn is_independent_of(&self, other: &Subspace) -> bool {
        self.basis.hcat(&other.basis).rank() == self.dim() + other.dim()
    }

    /// Complement spanned by the standard vectors at the non-pivot columns of
    /// the rref of `basisᵀ`.
    pub fn pivot_complement(&self) -> Self {
        let pivots = self.basis.transpose().row_reduce().pivots;
        let free: Vec<usize> = (0..self.ambient_dim).filter(|c| !pivots.contains(c)).collect();
        let id = RationalMatrix::identity(self.ambient_dim);
        Self { ambient_dim: self.ambient_dim, basis: id.select_columns(&free) }
    }

    /// Columns of `candidates` that extend this basis, chosen greedily left to right.
    pub fn extend_from(&self, candidates: &RationalMatrix) -> RationalMatrix {
        let all = self.basis.hcat(candidates);
        let picked: Vec<usize> =
            all.pivot_columns().into_iter().filter(|&c| c >= self.dim()).map(|c| c - self.dim()).collect();
        candidates.select_columns(&picked)
    }

    /// `{x : m·x ∈ self}` inside the source of `m`.
    pub fn preimage(&self, m: &RationalMatrix) -> Self {
        assert_eq!(m.rows(), self.ambient_dim);
        let k = m.hcat(&self.basis.neg()).kernel_matrix();
        Self::span(&k.submatrix(0..m.cols(), 0..k.cols()))
    }

    /// `m(self)` as a subspace of the target of `m`.
    pub fn image_under(&self, m: &RationalMatrix) -> Self {
        Self::span(&m.mul(&self.basis))
    }
}

/// `{y : xᵀ·pairing·y = 0 for all x ∈ s}`.
pub fn subspace_annihilator(s: &Subspace, pairing: &RationalMatrix) -> Result<Subspace> {
    if pairing.rows() != s.ambient_dim() {
        return Err(shape(format!(
            "pairing has {} rows but the subspace lives in dimension {}",
            pairing.rows(),
            s.ambient_dim()
        )));
    }
    let conditions = s.basis().transpose().mul(pairing);
    Ok(Subspace::from_independent(conditions.kernel_matrix()))
}

/// Image of a matrix as a subspace.
pub fn image(m: &RationalMatrix) -> Subspace {
    Subspace::span(m)
}

/// Kernel of a matrix as a subspace.
pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    Subspace::from_independent(m.kernel_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn e(n: usize, i: usize) -> RationalMatrix {
        RationalMatrix::identity(n).select_columns(&[i])
    }

    #[test]
    fn annihilator_examples() {
        let id = RationalMatrix::identity(2);
        assert_eq!(subspace_annihilator(&Subspace::zero(2), &id).unwrap().dim(), 2);
        assert_eq!(subspace_annihilator(&Subspace::full(2), &id).unwrap().dim(), 0);
        let ann = subspace_annihilator(&Subspace::new(e(2, 0)).unwrap(), &id).unwrap();
        assert!(ann.same_as(&Subspace::new(e(2, 1)).unwrap()));
        assert!(subspace_annihilator(&Subspace::full(3), &id).is_err());
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::new(RationalMatrix::from_i64(3, 2, &[1, 0, 0, 1, 0, 0])).unwrap();
        let b = Subspace::new(RationalMatrix::from_i64(3, 2, &[0, 0, 1, 0, 0, 1])).unwrap();
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vector(&[int(0), int(1), int(0)]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn complement_and_preimage() {
        let y = Subspace::new(RationalMatrix::from_i64(2, 1, &[1, 1])).unwrap();
        let c = y.pivot_complement();
        assert_eq!(c.dim(), 1);
        assert!(y.is_independent_of(&c));
        let m = RationalMatrix::from_i64(2, 2, &[1, 0, 0, 0]);
        let pre = Subspace::zero(2).preimage(&m);
        assert!(pre.same_as(&Subspace::new(e(2, 1)).unwrap()));
    }

    #[test]
    fn span_drops_dependent_columns() {
        let s = Subspace::span(&RationalMatrix::from_i64(2, 3, &[1, 2, 0, 1, 2, 1]));
        assert_eq!(s.dim(), 2);
        assert!(Subspace::new(RationalMatrix::from_i64(2, 2, &[1, 2, 1, 2])).is_err());
    }
}
