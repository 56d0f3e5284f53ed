//! Dense Gaussian elimination over an exact field (the rationals or the
//! rational-function field).

use num_traits::{One, Zero};

use super::{RatFunc, Rational};

pub trait FieldElem: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `self / rhs`; `rhs` is nonzero.
    fn div(&self, rhs: &Self) -> Self;
}

impl FieldElem for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl FieldElem for RatFunc {
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.nvars())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("pivot is nonzero")
    }
}

/// Reduce `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref<F: FieldElem>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv_pivot = m[r][c].one_like().div(&m[r][c]);
        if !(m[r][c].sub(&m[r][c].one_like())).is_zero() {
            for x in m[r].iter_mut().skip(c) {
                *x = x.mul(&inv_pivot);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldElem>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : m x = 0}`; `zero` fixes the element type for empty inputs.
pub fn nullspace<F: FieldElem>(m: &[Vec<F>], ncols: usize, zero: &F) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.zero_like(); ncols];
            v[f] = zero.one_like();
            for (row, &pc) in pivots.iter().enumerate() {
                let entry = &work[row][f];
                if !entry.is_zero() {
                    v[pc] = zero.zero_like().sub(entry);
                }
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    /// Consistent with free parameters; one particular solution (free = 0).
    Many(Vec<F>),
    Inconsistent,
}

/// Solve `a x = b` where `a` has `ncols` columns.
pub fn solve<F: FieldElem>(a: &[Vec<F>], b: &[F], ncols: usize, zero: &F) -> Solution<F> {
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![zero.zero_like(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Many(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rank_nullity() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m, 3, &q(0));
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s: Rational = m[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(Zero::is_zero(&s));
        }
    }

    #[test]
    fn solves_over_functions() {
        let u = RatFunc::var(1, 0);
        let one = RatFunc::one(1);
        let zero = RatFunc::zero(1);
        // diag(u, 1) x = (1, 1)
        let a = vec![vec![u.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        match solve(&a, &[one.clone(), one.clone()], 2, &zero) {
            Solution::Unique(x) => {
                assert_eq!(x[0], u.recip().unwrap());
                assert_eq!(x[1], one);
            }
            other => panic!("unexpected {other:?}"),
        }
        let singular = vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        assert_eq!(solve(&singular, &[one.clone(), zero.clone()], 2, &zero), Solution::Inconsistent);
    }
}
