use std::ops::{Add, Sub};

use crate::algebroid::{OpTable, Section};
use crate::error::{Error, Result};
use crate::ring::{RatFunc, VectorField};

/// Degree-`n` multiderivation `(D, σ_D)` stored by its values on frame tuples.
///
/// `D` is tensorial and antisymmetric in its first `n − 1` arguments and
/// satisfies `D(.., fX) = f D(.., X) + σ_D(..)(f) X` in the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDer {
    degree: usize,
    rank: usize,
    nvars: usize,
    /// `D(E_{i_1}, .., E_{i_n})` at the row-major index of `(i_1..i_n)`.
    d: Vec<Section>,
    /// `σ_D(E_{i_1}, .., E_{i_{n−1}})`.
    sigma: Vec<VectorField>,
}

pub(crate) fn tuple_index(t: &[usize], r: usize) -> usize {
    t.iter().fold(0, |acc, &i| acc * r + i)
}

pub(crate) fn index_tuple(mut idx: usize, len: usize, r: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = idx % r;
        idx /= r;
    }
    t
}

/// Sign of the permutation sorting `t`, or `None` if `t` has a repeat.
fn sort_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut s = t.to_vec();
    let mut odd = false;
    for i in 0..s.len() {
        for j in 0..s.len() - 1 - i {
            if s[j] == s[j + 1] {
                return None;
            }
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((s, odd))
}

impl MultiDer {
    /// Validates table sizes and the antisymmetry of `D` and `σ_D`.
    pub fn new(degree: usize, rank: usize, nvars: usize, d: Vec<Section>, sigma: Vec<VectorField>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Invalid("multiderivations have degree >= 1".into()));
        }
        let w = MultiDer {
            degree,
            rank,
            nvars,
            d,
            sigma,
        };
        if w.d.len() != rank.pow(degree as u32) || w.sigma.len() != rank.pow(degree as u32 - 1) {
            return Err(Error::Shape("multiderivation table sizes".into()));
        }
        if w.d.iter().any(|s| s.rank() != rank || s.components().iter().any(|c| c.nvars() != nvars))
            || w.sigma.iter().any(|v| v.dim() != nvars)
        {
            return Err(Error::Shape("multiderivation values".into()));
        }
        for idx in 0..w.d.len() {
            let t = index_tuple(idx, degree, rank);
            let (head, last) = t.split_at(degree - 1);
            let expected = match sort_sign(head) {
                None => Section::zero(rank, nvars),
                Some((mut s, odd)) => {
                    s.push(last[0]);
                    let v = w.d[tuple_index(&s, rank)].clone();
                    if odd {
                        -&v
                    } else {
                        v
                    }
                }
            };
            if w.d[idx] != expected {
                return Err(Error::Invalid(format!("D is not antisymmetric at {t:?}")));
            }
        }
        for idx in 0..w.sigma.len() {
            let t = index_tuple(idx, degree - 1, rank);
            let expected = match sort_sign(&t) {
                None => VectorField::zero(nvars),
                Some((s, odd)) => {
                    let v = w.sigma[tuple_index(&s, rank)].clone();
                    if odd {
                        -&v
                    } else {
                        v
                    }
                }
            };
            if w.sigma[idx] != expected {
                return Err(Error::Invalid(format!("symbol is not antisymmetric at {t:?}")));
            }
        }
        Ok(w)
    }

    /// Tables filled by `fd` and `fs` on sorted tuples and extended by antisymmetry.
    pub fn from_fn(
        degree: usize,
        rank: usize,
        nvars: usize,
        mut fd: impl FnMut(&[usize]) -> Section,
        mut fs: impl FnMut(&[usize]) -> VectorField,
    ) -> Self {
        let mut d = vec![Section::zero(rank, nvars); rank.pow(degree as u32)];
        for (idx, slot) in d.iter_mut().enumerate() {
            let t = index_tuple(idx, degree, rank);
            let (head, last) = t.split_at(degree - 1);
            if let Some((mut s, odd)) = sort_sign(head) {
                if s == head {
                    *slot = fd(&t);
                } else {
                    s.push(last[0]);
                    // Sorted tuples precede their permutations in row-major order.
                    let v = fd(&s);
                    *slot = if odd { -&v } else { v };
                }
            }
        }
        let mut sigma = vec![VectorField::zero(nvars); rank.pow(degree as u32 - 1)];
        for (idx, slot) in sigma.iter_mut().enumerate() {
            let t = index_tuple(idx, degree - 1, rank);
            if let Some((s, odd)) = sort_sign(&t) {
                let v = fs(&s);
                *slot = if odd { -&v } else { v };
            }
        }
        MultiDer {
            degree,
            rank,
            nvars,
            d,
            sigma,
        }
    }

    pub fn zero(degree: usize, rank: usize, nvars: usize) -> Self {
        Self::from_fn(
            degree,
            rank,
            nvars,
            |_| Section::zero(rank, nvars),
            |_| VectorField::zero(nvars),
        )
    }

    /// Degree 2 from its table and `σ(E_i)`.
    pub fn degree2(table: &OpTable, sigma: Vec<VectorField>) -> Result<Self> {
        let r = table.rank();
        let nvars = sigma.first().map_or_else(
            || table.get(0, 0).components().first().map_or(0, RatFunc::nvars),
            VectorField::dim,
        );
        MultiDer::new(2, r, nvars, table.sections().to_vec(), sigma)
    }

    /// Degree 1 from `φ(E_i)` and the symbol vector field.
    pub fn degree1(values: Vec<Section>, sigma: VectorField) -> Result<Self> {
        let r = values.len();
        let nvars = sigma.dim();
        MultiDer::new(1, r, nvars, values, vec![sigma])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn d_at(&self, t: &[usize]) -> &Section {
        &self.d[tuple_index(t, self.rank)]
    }

    pub fn sigma_at(&self, t: &[usize]) -> &VectorField {
        &self.sigma[tuple_index(t, self.rank)]
    }

    pub fn d_values(&self) -> &[Section] {
        &self.d
    }

    pub fn sigma_values(&self) -> &[VectorField] {
        &self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(Section::is_zero) && self.sigma.iter().all(VectorField::is_zero)
    }

    /// The `D` table of a degree-2 multiderivation.
    pub fn to_table(&self) -> OpTable {
        assert_eq!(self.degree, 2, "to_table needs degree 2");
        OpTable::from_fn(self.rank, |i, j| self.d_at(&[i, j]).clone())
    }

    pub fn scale(&self, c: &RatFunc) -> MultiDer {
        MultiDer {
            d: self.d.iter().map(|s| s.scale(c)).collect(),
            sigma: self.sigma.iter().map(|v| v.scale(c)).collect(),
            ..self.clone()
        }
    }

    fn check_arity(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(Error::ArityMismatch { expected, found });
        }
        Ok(())
    }

    /// First-slot index tuples with their coefficient product.
    fn expand<'a>(&self, args: &'a [Section]) -> Vec<(Vec<usize>, RatFunc)> {
        let mut acc: Vec<(Vec<usize>, RatFunc)> = vec![(Vec::new(), RatFunc::one(self.nvars))];
        for x in args {
            let mut next = Vec::new();
            for (t, f) in &acc {
                for (i, c) in x.components().iter().enumerate() {
                    if c.is_zero() || t.contains(&i) {
                        continue;
                    }
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push((t2, f * c));
                }
            }
            acc = next;
        }
        acc
    }

    /// `σ_D(X_1, .., X_{n−1})`.
    pub fn sigma_eval(&self, args: &[Section]) -> Result<VectorField> {
        self.check_arity(args.len(), self.degree - 1)?;
        let mut v = VectorField::zero(self.nvars);
        for (t, f) in self.expand(args) {
            let s = self.sigma_at(&t);
            if !s.is_zero() {
                v = &v + &s.scale(&f);
            }
        }
        Ok(v)
    }

    /// `D(X_1, .., X_n)` by tensorial expansion of the first `n − 1` slots and
    /// the symbol's Leibniz rule in the last.
    pub fn eval(&self, args: &[Section]) -> Result<Section> {
        self.check_arity(args.len(), self.degree)?;
        let (head, last) = args.split_at(self.degree - 1);
        let y = &last[0];
        let mut out = Section::zero(self.rank, self.nvars);
        for (mut t, f) in self.expand(head) {
            let s = self.sigma_at(&t).scale(&f);
            t.push(0);
            let slot = t.len() - 1;
            for (j, g) in y.components().iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                t[slot] = j;
                out.add_scaled(&(&f * g), self.d_at(&t));
                if !s.is_zero() {
                    out.add_to_component(j, &s.apply(g));
                }
            }
        }
        Ok(out)
    }

    /// Values on sorted frame tuples as strings, for reports.
    pub fn format_with(&self, names: &[String]) -> Vec<String> {
        let mut out = Vec::new();
        for (idx, s) in self.d.iter().enumerate() {
            let t = index_tuple(idx, self.degree, self.rank);
            let (head, _) = t.split_at(self.degree - 1);
            if !s.is_zero() && head.windows(2).all(|w| w[0] < w[1]) {
                let label: Vec<String> = t.iter().map(|i| format!("E{}", i + 1)).collect();
                out.push(format!("D({}) = [{}]", label.join(","), s.format_with(names).join(", ")));
            }
        }
        for (idx, v) in self.sigma.iter().enumerate() {
            let t = index_tuple(idx, self.degree - 1, self.rank);
            if !v.is_zero() && t.windows(2).all(|w| w[0] < w[1]) {
                let label: Vec<String> = t.iter().map(|i| format!("E{}", i + 1)).collect();
                let comps: Vec<String> = v.components().iter().map(|c| c.format_with(names)).collect();
                out.push(format!("sigma({}) = [{}]", label.join(","), comps.join(", ")));
            }
        }
        out
    }
}

/// `ω(X_1, .., X_n)`.
pub fn multider_eval(w: &MultiDer, args: &[Section]) -> Result<Section> {
    w.eval(args)
}

impl Add for &MultiDer {
    type Output = MultiDer;
    fn add(self, rhs: &MultiDer) -> MultiDer {
        MultiDer {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect(),
            sigma: self.sigma.iter().zip(&rhs.sigma).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl Sub for &MultiDer {
    type Output = MultiDer;
    fn sub(self, rhs: &MultiDer) -> MultiDer {
        MultiDer {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect(),
            sigma: self.sigma.iter().zip(&rhs.sigma).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_in_last_slot() {
        // μ(E1, E1) = E2 on a rank-2 bundle over one variable, σ(E1) = ∂.
        let n = 1;
        let table = OpTable::from_fn(2, |i, j| {
            if (i, j) == (0, 0) {
                Section::basis(2, n, 1)
            } else {
                Section::zero(2, n)
            }
        });
        let sigma = vec![VectorField::coordinate(1, 0), VectorField::zero(1)];
        let w = MultiDer::degree2(&table, sigma).unwrap();
        let u = RatFunc::var(1, 0);
        let x = Section::basis(2, n, 0);
        let fy = Section::scaled_basis(2, 0, &u.pow(2));
        let got = w.eval(&[x.clone(), fy]).unwrap();
        let want = &Section::scaled_basis(2, 1, &u.pow(2)) + &Section::scaled_basis(2, 0, &u.scale(&crate::ring::q(2)));
        assert_eq!(got, want);
        // tensorial in the first slot
        let fx = Section::scaled_basis(2, 0, &u);
        assert_eq!(w.eval(&[fx, x.clone()]).unwrap(), Section::scaled_basis(2, 1, &u));
        assert!(matches!(w.eval(&[x]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let w = MultiDer::from_fn(3, 2, 0, |t| if t == [0, 1, 0] { Section::basis(2, 0, 1) } else { Section::zero(2, 0) }, |_| VectorField::zero(0));
        assert_eq!(w.d_at(&[1, 0, 0]), &-&Section::basis(2, 0, 1));
        assert!(w.d_at(&[0, 0, 1]).is_zero());
        let mut d = w.d_values().to_vec();
        d[tuple_index(&[1, 0, 0], 2)] = Section::zero(2, 0);
        assert!(MultiDer::new(3, 2, 0, d, w.sigma_values().to_vec()).is_err());
    }
}
