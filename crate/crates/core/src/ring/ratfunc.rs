use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// Rational function `num / den` in normal form: coprime, with a monic
/// denominator (leading coefficient 1 under graded-lex order). Normal forms
/// are unique, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RatFunc::zero(n);
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(n),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RatFunc {
            num: Poly::zero(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc {
            num: Poly::one(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFunc {
            num: Poly::constant(nvars, c),
            den: Poly::one(nvars),
        }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(Poly::from_int(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: Poly::one(n),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.recip_unchecked())
    }

    fn recip_unchecked(&self) -> RatFunc {
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Partial derivative by the quotient rule. Panics on a bad index; see
    /// [`partial_derive`] for the checked form.
    pub fn derivative(&self, var: usize) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative(var));
        }
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(top, self.den.pow(2))
    }

    pub fn embed(&self, nvars: usize, offset: usize) -> RatFunc {
        RatFunc {
            num: self.num.embed(nvars, offset),
            den: self.den.embed(nvars, offset),
        }
    }

    pub fn format_with(&self, names: &[String]) -> String {
        let num = self.num.format_with(names);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.format_with(names);
        let num = if self.num.num_terms() > 1 || num.contains('/') {
            format!("({num})")
        } else {
            num
        };
        let den = if self.den.num_terms() > 1 || den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}

/// Checked partial derivative.
pub fn partial_derive(f: &RatFunc, var_index: usize) -> Result<RatFunc> {
    if var_index >= f.nvars() {
        return Err(Error::IndexOutOfRange {
            index: var_index,
            len: f.nvars(),
        });
    }
    Ok(f.derivative(var_index))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("u{i}")).collect();
        f.write_str(&self.format_with(&names))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc::from_poly(num);
            }
            return RatFunc::normalized(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel before multiplying so intermediate sizes stay small.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> RatFunc {
        RatFunc::var(n, i)
    }

    #[test]
    fn cancellation() {
        let one = RatFunc::one(1);
        let u = v(1, 0);
        let num = &(&u * &u) - &one;
        let den = &u - &one;
        let q = num.checked_div(&den).unwrap();
        assert_eq!(q, &u + &one);
        assert!(q.is_polynomial());
    }

    #[test]
    fn common_denominator() {
        let u1 = v(2, 0);
        let u2 = v(2, 1);
        let one = RatFunc::one(2);
        let s = &one.checked_div(&u1).unwrap() + &one.checked_div(&u2).unwrap();
        let expected = (&u1 + &u2).checked_div(&(&u1 * &u2)).unwrap();
        assert_eq!(s, expected);
        assert_eq!(s.den(), &(&Poly::var(2, 0) * &Poly::var(2, 1)));
    }

    #[test]
    fn quotient_rule() {
        let u = v(1, 0);
        let inv = u.recip().unwrap();
        let expected = -&(&u * &u).recip().unwrap();
        assert_eq!(inv.derivative(0), expected);
        assert!(partial_derive(&inv, 1).is_err());
    }

    #[test]
    fn division_by_zero() {
        let u = v(1, 0);
        assert!(matches!(u.checked_div(&(&u - &u)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn denominator_is_monic() {
        let u = v(1, 0);
        let two = RatFunc::from_int(1, 2);
        let f = RatFunc::one(1).checked_div(&(&two * &u)).unwrap();
        assert!(f.den().leading().unwrap().1.is_one());
        assert_eq!(f.format_with(&["u".to_string()]), "(1/2)/u");
    }
}
