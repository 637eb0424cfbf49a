//! Inertia of symmetric forms by exact congruence.

use num_traits::Zero;

use super::matrix::RationalMatrix;
use super::rational::{sign, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

/// Lagrange diagonalization: symmetric pivoting, and when every remaining
/// diagonal entry is zero, the substitution `e_i <- e_i + e_j` on a nonzero
/// off-diagonal pair.
pub fn symmetric_signature(g: &RationalMatrix) -> Result<Inertia> {
    if !g.is_symmetric() {
        return Err(Error::Invalid("signature of a non-symmetric matrix".into()));
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut inertia = Inertia { n_plus: 0, n_minus: 0, n_zero: 0 };
    for k in 0..n {
        let diag = (k..n).find(|&i| !a.get(i, i).is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_zero());
                let Some((i, j)) = pair else {
                    inertia.n_zero += n - k;
                    break;
                };
                add_congruent(&mut a, i, j);
                i
            }
        };
        swap_congruent(&mut a, k, p);
        let pivot = a.get(k, k).clone();
        match sign(&pivot) {
            1 => inertia.n_plus += 1,
            _ => inertia.n_minus += 1,
        }
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f: Rational = a.get(i, k) / &pivot;
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
            for j in k..n {
                let v = a.get(j, i) - &f * a.get(j, k);
                a.set(j, i, v);
            }
        }
    }
    Ok(inertia)
}

fn swap_congruent(a: &mut RationalMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

fn add_congruent(a: &mut RationalMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: usize, v: &[i64]) -> Inertia {
        symmetric_signature(&RationalMatrix::from_i64(n, n, v)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(sig(3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]), Inertia { n_plus: 3, n_minus: 0, n_zero: 0 });
        assert_eq!(sig(2, &[0, 1, 1, 0]), Inertia { n_plus: 1, n_minus: 1, n_zero: 0 });
        assert_eq!(sig(2, &[0, 0, 0, 0]), Inertia { n_plus: 0, n_minus: 0, n_zero: 2 });
        assert_eq!(sig(0, &[]), Inertia { n_plus: 0, n_minus: 0, n_zero: 0 });
    }

    #[test]
    fn degenerate_and_mixed() {
        // [[1,1],[1,1]] has eigenvalues 2 and 0
        assert_eq!(sig(2, &[1, 1, 1, 1]), Inertia { n_plus: 1, n_minus: 0, n_zero: 1 });
        // hyperbolic block plus a negative line
        assert_eq!(sig(3, &[0, 2, 0, 2, 0, 0, 0, 0, -3]), Inertia { n_plus: 1, n_minus: 2, n_zero: 0 });
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(symmetric_signature(&RationalMatrix::from_i64(2, 2, &[0, 1, 0, 0])).is_err());
        assert!(symmetric_signature(&RationalMatrix::zeros(2, 3)).is_err());
    }
}
