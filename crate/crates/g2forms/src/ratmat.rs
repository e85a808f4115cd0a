//! Exact rational matrices: rank and nullspace by Gaussian elimination.
//!
//! Matrices here are small (at most 35×35), so plain elimination over `ℚ`
//! is fast enough and keeps every rank decision exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> RatMat {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Builds a matrix from its columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> RatMat {
        let mut m = RatMat::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has wrong length");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    /// Reduced row echelon form, returning the pivot column of each step.
    fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c).clone() * inv.clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(row, c).clone();
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column, each scaled
    /// to a primitive integer vector with positive leading entry.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pivot_col) in pivots.iter().enumerate() {
                v[pivot_col] = -m.get(row, free).clone();
            }
            basis.push(primitive_integer(&v));
        }
        basis
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).clone() * v[c].clone())
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }
}

/// Rescales a rational vector to integer entries with gcd 1 and positive
/// first nonzero entry. The zero vector is returned unchanged.
pub fn primitive_integer(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for n in &scaled {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = scaled.into_iter().map(|n| n / &gcd).collect();
    if let Some(first) = out.iter().find(|n| !n.is_zero()) {
        if first.is_negative() {
            for n in &mut out {
                *n = -n.clone();
            }
        }
    }
    out.into_iter().map(Rat::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn mat(rows: usize, cols: usize, entries: &[i64]) -> RatMat {
        assert_eq!(entries.len(), rows * cols);
        let mut m = RatMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rat(entries[r * cols + c]));
            }
        }
        m
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(mat(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(mat(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]).rank(), 3);
        assert_eq!(RatMat::zeros(4, 5).rank(), 0);
        // Rank survives entries that would overflow fixed-width arithmetic
        // after elimination (denominator growth handled by BigRational).
        let tricky = mat(3, 4, &[2, 4, 1, 7, 3, 9, 2, 5, 5, 13, 3, 12]);
        assert_eq!(tricky.rank(), 2);
    }

    #[test]
    fn nullspace_vectors_are_in_the_kernel_and_primitive() {
        let m = mat(2, 4, &[1, 2, 3, 4, 2, 4, 6, 8]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            assert!(v.iter().all(|x| x.denom() == &BigInt::from(1)));
            let first = v.iter().find(|x| !x.is_zero()).unwrap();
            assert!(first > &Rat::zero());
        }
    }

    #[test]
    fn full_rank_matrix_has_trivial_nullspace() {
        let m = mat(2, 2, &[1, 1, 0, 1]);
        assert!(m.nullspace().is_empty());
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let v = vec![Rat::new((-3).into(), 2.into()), Rat::new(9.into(), 4.into())];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![rat(2), rat(-3)]);
    }
}
