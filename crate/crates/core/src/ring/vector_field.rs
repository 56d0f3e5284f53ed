use std::ops::{Add, Neg, Sub};

use super::RatFunc;
use crate::error::{Error, Result};

/// Vector field `Σ V^μ ∂/∂u^μ` with rational-function components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField {
    nvars: usize,
    components: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(components: Vec<RatFunc>) -> Self {
        let nvars = components.len();
        debug_assert!(components.iter().all(|c| c.nvars() == nvars));
        VectorField { nvars, components }
    }

    pub fn zero(nvars: usize) -> Self {
        VectorField {
            nvars,
            components: vec![RatFunc::zero(nvars); nvars],
        }
    }

    /// The coordinate field `∂/∂u^i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars);
        v.components[i] = RatFunc::one(nvars);
        v
    }

    pub fn dim(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn component(&self, mu: usize) -> &RatFunc {
        &self.components[mu]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RatFunc::is_zero)
    }

    /// `V(f) = Σ V^μ ∂f/∂u^μ`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(f.nvars());
        for (mu, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(mu);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// `[V, W]^μ = V(W^μ) − W(V^μ)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let components = (0..self.nvars)
            .map(|mu| &self.apply(&other.components[mu]) - &other.apply(&self.components[mu]))
            .collect();
        VectorField {
            nvars: self.nvars,
            components,
        }
    }

    pub fn scale(&self, f: &RatFunc) -> VectorField {
        VectorField {
            nvars: self.nvars,
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }
}

/// Checked `V(f)`.
pub fn vf_apply(v: &VectorField, f: &RatFunc) -> Result<RatFunc> {
    if v.dim() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: f.nvars(),
        });
    }
    Ok(v.apply(f))
}

/// Checked `[V, W]`.
pub fn vf_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    Ok(v.bracket(w))
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            nvars: self.nvars,
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            nvars: self.nvars,
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            nvars: self.nvars,
            components: self.components.iter().map(|a| -a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(i: usize) -> RatFunc {
        RatFunc::var(2, i)
    }

    fn rho() -> (VectorField, VectorField) {
        // e1 ↦ u2∂2, e2 ↦ u2∂1 + u2²∂2
        let r1 = VectorField::new(vec![RatFunc::zero(2), u(1)]);
        let r2 = VectorField::new(vec![u(1), &u(1) * &u(1)]);
        (r1, r2)
    }

    #[test]
    fn apply_to_coordinate() {
        let (_, r2) = rho();
        assert_eq!(vf_apply(&r2, &u(0)).unwrap(), u(1));
        let ones = VectorField::new(vec![RatFunc::one(2), RatFunc::one(2)]);
        assert_eq!(ones.apply(&(&u(0) * &u(1))), &u(0) + &u(1));
        assert!(VectorField::zero(2).apply(&(&u(0) * &u(1))).is_zero());
    }

    #[test]
    fn action_is_a_homomorphism() {
        // [ρ(e1), ρ(e2)] = ρ([e1, e2]) = ρ(e2); reversed order gives −ρ(e2).
        let (r1, r2) = rho();
        assert_eq!(r1.bracket(&r2), r2);
        assert_eq!(r2.bracket(&r1), -&r2);
        assert!(r2.bracket(&r2).is_zero());
    }

    #[test]
    fn coordinate_against_euler_like() {
        let d1 = VectorField::coordinate(1, 0);
        let x = VectorField::new(vec![RatFunc::var(1, 0)]);
        assert_eq!(d1.bracket(&x), d1);
    }

    #[test]
    fn dimension_checks() {
        assert!(vf_apply(&VectorField::zero(1), &u(0)).is_err());
        assert!(vf_bracket(&VectorField::zero(1), &VectorField::zero(2)).is_err());
    }
}
