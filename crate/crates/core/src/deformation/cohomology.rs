use num_traits::Zero;

use crate::algebroid::{AlgebroidPresentation, Section};
use crate::constructions::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::linalg::{self, Solution};
use crate::ring::{q, RatFunc, Rational, VectorField};

use super::complex::DefComplex;
use super::multider::{index_tuple, MultiDer};

/// Free coordinates of `Der^k` over a point: tuples whose first `k − 1`
/// slots increase, times the `r` output components. The symbol vanishes.
pub fn cochain_coordinates(degree: usize, rank: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for idx in 0..rank.pow(degree as u32) {
        let t = index_tuple(idx, degree, rank);
        if t[..degree - 1].windows(2).all(|p| p[0] < p[1]) {
            for c in 0..rank {
                out.push((t.clone(), c));
            }
        }
    }
    out
}

pub fn cochain_from_coords(degree: usize, rank: usize, coords: &[Rational]) -> MultiDer {
    let index = cochain_coordinates(degree, rank);
    MultiDer::from_fn(
        degree,
        rank,
        0,
        |t| {
            let comps = (0..rank)
                .map(|c| {
                    let pos = index.iter().position(|(s, k)| s == t && *k == c).expect("sorted tuple");
                    RatFunc::constant(0, coords[pos].clone())
                })
                .collect();
            Section::new(comps)
        },
        |_| VectorField::zero(0),
    )
}

pub fn cochain_coords(w: &MultiDer) -> Vec<Rational> {
    cochain_coordinates(w.degree(), w.rank())
        .iter()
        .map(|(t, c)| w.d_at(t).component(*c).constant_value().unwrap_or_else(Rational::zero))
        .collect()
}

/// Matrix of `d_def: Der^k → Der^{k+1}` over a point; column `j` is the
/// image of the `j`-th coordinate cochain.
pub fn coboundary_matrix(a: &AlgebroidPresentation, degree: usize) -> Result<Vec<Vec<Rational>>> {
    if !a.is_point() {
        return Err(Error::BaseNotPoint);
    }
    let cx = DefComplex::commutative(a)?;
    let r = a.rank();
    let ncols = cochain_coordinates(degree, r).len();
    let nrows = cochain_coordinates(degree + 1, r).len();
    let mut m = vec![vec![Rational::zero(); ncols]; nrows];
    for j in 0..ncols {
        let mut e = vec![Rational::zero(); ncols];
        e[j] = q(1);
        let img = cochain_coords(&cx.d(&cochain_from_coords(degree, r, &e))?);
        for (row, v) in m.iter_mut().zip(img) {
            row[j] = v;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub degree: usize,
    pub cochain_dim: usize,
    /// Rank of `d` into this degree.
    pub rank_in: usize,
    /// Rank of `d` out of this degree.
    pub rank_out: usize,
    pub dimension: usize,
    /// Cocycles spanning a complement of the coboundaries.
    pub representatives: Vec<MultiDer>,
    /// Whether the composite of the two matrices vanishes.
    pub dd_zero: bool,
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>], inner: usize) -> Vec<Vec<Rational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn columns(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// `H^k_def` of the algebra over a point, `k ∈ {2, 3}`, viewed as a
/// commutative associative algebroid with zero anchor.
pub fn cohomology_point(algebra: &FiniteAlgebra, degree: usize) -> Result<CohomologyData> {
    if !(2..=3).contains(&degree) {
        return Err(Error::Invalid("cohomology is computed in degrees 2 and 3".into()));
    }
    let a = algebra.presentation("algebra")?;
    let r = a.rank();
    let dim_prev = cochain_coordinates(degree - 1, r).len();
    let dim = cochain_coordinates(degree, r).len();
    let d_in = coboundary_matrix(&a, degree - 1)?;
    let d_out = coboundary_matrix(&a, degree)?;
    let rank_in = linalg::rank(&d_in);
    let rank_out = linalg::rank(&d_out);
    let dd_zero = mat_mul(&d_out, &d_in, dim).iter().flatten().all(Zero::is_zero);
    let kernel = linalg::nullspace(&d_out, dim, &Rational::zero());
    let mut span = columns(&d_in, dim_prev);
    let mut current = linalg::rank(&span);
    let mut representatives = Vec::new();
    for v in kernel {
        span.push(v.clone());
        let next = linalg::rank(&span);
        if next > current {
            current = next;
            representatives.push(cochain_from_coords(degree, r, &v));
        } else {
            span.pop();
        }
    }
    Ok(CohomologyData {
        degree,
        cochain_dim: dim,
        rank_in,
        rank_out,
        dimension: dim - rank_out - rank_in,
        representatives,
        dd_zero,
    })
}

/// Checks that `μ1` and `μ1'` are 2-cocycles with equal symbols and that
/// `μ1 − μ1' = d_def φ`.
pub fn equivalence_check(a: &AlgebroidPresentation, mu1: &MultiDer, mu1p: &MultiDer, phi: &MultiDer) -> Result<Report> {
    let cx = DefComplex::commutative(a)?;
    let names = a.base_vars();
    let mut report = Report::new(format!("{} infinitesimal equivalence", a.name()));
    for (tag, m) in [("mu1", mu1), ("mu1'", mu1p)] {
        let d = cx.d(m)?;
        report.record("cocycle", tag, (!d.is_zero()).then(|| d.format_with(names)));
    }
    let sym: Vec<String> = mu1
        .sigma_values()
        .iter()
        .zip(mu1p.sigma_values())
        .enumerate()
        .filter(|(_, (s, t))| s != t)
        .map(|(i, (s, t))| {
            let diff = s - t;
            let comps: Vec<String> = diff.components().iter().map(|c| c.format_with(names)).collect();
            format!("E{}: [{}]", i + 1, comps.join(", "))
        })
        .collect();
    report.record("symbol", "sigma(mu1) = sigma(mu1')", (!sym.is_empty()).then_some(sym));
    let residual = &(mu1 - mu1p) - &cx.d(phi)?;
    report.record(
        "coboundary",
        "mu1 - mu1' = d phi",
        (!residual.is_zero()).then(|| residual.format_with(names)),
    );
    Ok(report)
}

/// Over a point, some `φ` with `μ1 − μ1' = d_def φ`.
pub fn solve_equivalence(a: &AlgebroidPresentation, mu1: &MultiDer, mu1p: &MultiDer) -> Result<MultiDer> {
    let r = a.rank();
    let d1 = coboundary_matrix(a, 1)?;
    let target = cochain_coords(&(mu1 - mu1p));
    let ncols = cochain_coordinates(1, r).len();
    match linalg::solve(&d1, &target, ncols, &Rational::zero()) {
        Solution::Unique(x) | Solution::Many(x) => Ok(cochain_from_coords(1, r, &x)),
        Solution::Inconsistent => {
            let diff = mu1 - mu1p;
            Err(Error::NotEquivalent(diff.format_with(a.base_vars()).join("; ")))
        }
    }
}
