//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive pseudo-remainder sequences: pick a variable, split off
//! the content (gcd of the coefficients, which involve fewer variables), and
//! run the PRS on the primitive parts. Adequate for the small polynomials that
//! appear as structure functions.

use super::poly::{Monomial, Poly};
use super::Rational;
use num_traits::One;

/// Monic gcd. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a == b {
        return a.monic();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }

    let shared = (0..n).find(|&v| a.involves(v) && b.involves(v));
    let v = match shared {
        Some(v) => v,
        None => {
            // No common variable: the gcd divides every coefficient of `a` in
            // any variable that only `a` involves.
            let v = (0..n).find(|&v| a.involves(v)).expect("non-constant");
            return gcd(&content(a, v), b);
        }
    };

    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

fn monomial_gcd(m: &Poly, p: &Poly) -> Poly {
    let (mono, _) = m.leading().expect("nonzero");
    let mut g = mono.clone();
    for (t, _) in p.terms() {
        g = g.gcd(t);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, Rational::one())
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content(p: &Poly, var: usize) -> Poly {
    let mut acc: Option<Poly> = None;
    for (_, c) in p.coefficients_in(var) {
        let next = match acc {
            None => c.monic(),
            Some(g) => gcd(&g, &c),
        };
        if next.is_one() {
            return next;
        }
        acc = Some(next);
    }
    acc.unwrap_or_else(|| Poly::zero(p.nvars()))
}

fn primitive_part(p: &Poly, var: usize) -> Poly {
    let c = content(p, var);
    p.div_exact(&c).expect("content divides")
}

fn leading_in(p: &Poly, var: usize) -> (u32, Poly) {
    p.coefficients_in(var)
        .into_iter()
        .next_back()
        .expect("nonzero polynomial")
}

fn pseudo_remainder(a: &Poly, b: &Poly, var: usize) -> Poly {
    let n = a.nvars();
    let (db, lb) = leading_in(b, var);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_in(&r, var);
        if dr < db {
            break;
        }
        let mut shift = vec![0; n];
        shift[var] = dr - db;
        let shifted = &(&lr * b).mul_term(&Monomial::from_exponents(shift), &Rational::one());
        r = &(&lb * &r) - shifted;
    }
    r
}

fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, var);
        if r.is_zero() {
            return b.monic();
        }
        if !r.involves(var) {
            return Poly::one(a.nvars());
        }
        a = b;
        b = primitive_part(&r, var);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<Poly> {
        (0..n).map(|i| Poly::var(n, i)).collect()
    }

    #[test]
    fn recovers_common_factor() {
        let v = vars(3);
        let one = Poly::one(3);
        let f = &(&v[0] + &v[1]) * &(&v[2] - &one);
        let a = &f * &(&v[0] - &v[2]);
        let b = &f * &(&(&v[1] * &v[1]) + &v[0]);
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let v = vars(2);
        let a = &v[0] + &v[1];
        let b = &v[0] - &v[1];
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_case() {
        let v = vars(2);
        let a = &(&v[0] * &v[0]) * &v[1];
        let b = &(&v[0] * &v[1]) + &(&v[0] * &v[0]);
        assert_eq!(gcd(&a, &b), v[0].clone());
    }
}
