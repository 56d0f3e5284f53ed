use std::ops::{Add, Sub};

/// Truncated series `Σ_{k ≤ order} ħ^k a_k`; products drop every term of
/// degree above the order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Clone> HSeries<T> {
    /// Coefficients `a_0..=a_order`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        HSeries { coeffs }
    }

    /// `a` at degree zero, `zero` elsewhere.
    pub fn constant(a: T, zero: T, order: usize) -> Self {
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = a;
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Cauchy product through an arbitrary bilinear map, truncated at the
    /// smaller of the two orders.
    pub fn convolve<U, V, F>(&self, other: &HSeries<U>, zero: V, mut f: F) -> HSeries<V>
    where
        U: Clone,
        V: Clone + Add<Output = V>,
        F: FnMut(&T, &U) -> V,
    {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k).fold(zero.clone(), |acc, i| acc + f(&self.coeffs[i], &other.coeffs[k - i]))
            })
            .collect();
        HSeries { coeffs }
    }

    pub fn map<V, F: FnMut(&T) -> V>(&self, f: F) -> HSeries<V> {
        HSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Add<Output = T>> Add for HSeries<T> {
    type Output = HSeries<T>;
    fn add(self, rhs: HSeries<T>) -> HSeries<T> {
        let order = self.order().min(rhs.order());
        HSeries {
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .take(order + 1)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Clone + Sub<Output = T>> Sub for HSeries<T> {
    type Output = HSeries<T>;
    fn sub(self, rhs: HSeries<T>) -> HSeries<T> {
        let order = self.order().min(rhs.order());
        HSeries {
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .take(order + 1)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncates_products() {
        let a = HSeries::new(vec![1i64, 2, 3]);
        let b = HSeries::new(vec![4i64, 5, 6]);
        let c = a.convolve(&b, 0i64, |x, y| x * y);
        assert_eq!(c.coeffs(), &[4, 13, 28]);
    }
}
