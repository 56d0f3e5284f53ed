use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// Polynomial in the jet variables `u^i_x`, `u^i_xx` with coefficients in the
/// rational functions of `u`.
///
/// Keys hold the exponents of `u^1_x..u^n_x, u^1_xx..u^n_xx`; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, RatFunc>,
}

impl JetPoly {
    pub fn zero(n: usize) -> Self {
        JetPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        let n = f.nvars();
        let mut p = JetPoly::zero(n);
        p.add_term(vec![0; 2 * n], f);
        p
    }

    fn jet(n: usize, slot: usize) -> Self {
        let mut key = vec![0; 2 * n];
        key[slot] = 1;
        let mut p = JetPoly::zero(n);
        p.add_term(key, RatFunc::one(n));
        p
    }

    /// `u^i_x`.
    pub fn ux(n: usize, i: usize) -> Self {
        Self::jet(n, i)
    }

    /// `u^i_xx`.
    pub fn uxx(n: usize, i: usize) -> Self {
        Self::jet(n, n + i)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RatFunc)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: Vec<u32>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, f: &RatFunc) -> JetPoly {
        let mut out = JetPoly::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * f);
        }
        out
    }

    pub fn involves_second_order(&self) -> bool {
        self.terms.keys().any(|k| k[self.n..].iter().any(|&e| e > 0))
    }

    /// `∂/∂u^i` acting on the coefficients.
    pub fn partial_u(&self, i: usize) -> JetPoly {
        let mut out = JetPoly::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.derivative(i));
        }
        out
    }

    /// Derivative with respect to the jet variable in `slot`.
    fn partial_slot(&self, slot: usize) -> JetPoly {
        let mut out = JetPoly::zero(self.n);
        for (k, c) in &self.terms {
            let e = k[slot];
            if e > 0 {
                let mut k2 = k.clone();
                k2[slot] -= 1;
                out.add_term(k2, c.scale(&crate::ring::q(e as i64)));
            }
        }
        out
    }

    /// `∂/∂u^i_x`.
    pub fn partial_ux(&self, i: usize) -> JetPoly {
        self.partial_slot(i)
    }

    /// Values as parseable strings, e.g. `u1*u1_x*u2_x`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (slot, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if slot < self.n {
                    format!("{}_x", names[slot])
                } else {
                    format!("{}_xx", names[slot - self.n])
                };
                factors.push(if e == 1 { base } else { format!("{base}^{e}") });
            }
            let coeff = c.format_with(names);
            let simple = c.den().is_one() && c.num().num_terms() == 1;
            let term = match (factors.is_empty(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => factors.join("*"),
                (false, "-1") => format!("-{}", factors.join("*")),
                (false, _) if simple => format!("{coeff}*{}", factors.join("*")),
                (false, _) => format!("({coeff})*{}", factors.join("*")),
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                let _ = write!(out, " - {rest}");
            } else {
                let _ = write!(out, " + {term}");
            }
        }
        out
    }
}

/// Total `x`-derivative `u^i ↦ u^i_x ↦ u^i_xx`.
pub fn total_x(f: &JetPoly) -> Result<JetPoly> {
    if f.involves_second_order() {
        return Err(Error::JetOrderOverflow);
    }
    let n = f.n;
    let mut out = JetPoly::zero(n);
    for i in 0..n {
        out = &out + &(&JetPoly::ux(n, i) * &f.partial_u(i));
        out = &out + &(&JetPoly::uxx(n, i) * &f.partial_ux(i));
    }
    Ok(out)
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        JetPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        self + &(-rhs)
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.n);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                let k: Vec<u32> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["u1".into(), "u2".into()]
    }

    #[test]
    fn total_derivative_examples() {
        let u1 = JetPoly::from_ratfunc(RatFunc::var(2, 0));
        assert_eq!(total_x(&u1).unwrap(), JetPoly::ux(2, 0));
        let p = &u1 * &JetPoly::ux(2, 1);
        let want = &(&JetPoly::ux(2, 0) * &JetPoly::ux(2, 1)) + &(&u1 * &JetPoly::uxx(2, 1));
        assert_eq!(total_x(&p).unwrap(), want);
        let f = RatFunc::var(2, 0).pow(2);
        let want = JetPoly::ux(2, 0).scale(&f.derivative(0));
        assert_eq!(total_x(&JetPoly::from_ratfunc(f)).unwrap(), want);
        assert!(matches!(total_x(&JetPoly::uxx(2, 0)), Err(Error::JetOrderOverflow)));
    }

    #[test]
    fn formats_products() {
        let p = &JetPoly::from_ratfunc(RatFunc::var(2, 0)) * &(&JetPoly::ux(2, 0) * &JetPoly::ux(2, 1));
        assert_eq!(p.format_with(&names()), "u1*u1_x*u2_x");
        assert_eq!(JetPoly::zero(2).format_with(&names()), "0");
    }
}
