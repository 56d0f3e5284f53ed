use std::ops::{Add, Neg, Sub};

use crate::ring::RatFunc;

/// Section `Σ f^i E_i` of a bundle with a global frame.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Section(Vec<RatFunc>);

impl Section {
    pub fn new(components: Vec<RatFunc>) -> Self {
        Section(components)
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        Section(vec![RatFunc::zero(nvars); rank])
    }

    /// Frame element `E_i`.
    pub fn basis(rank: usize, nvars: usize, i: usize) -> Self {
        let mut s = Self::zero(rank, nvars);
        s.0[i] = RatFunc::one(nvars);
        s
    }

    /// `f · E_i`.
    pub fn scaled_basis(rank: usize, i: usize, f: &RatFunc) -> Self {
        let mut s = Self::zero(rank, f.nvars());
        s.0[i] = f.clone();
        s
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.0
    }

    pub fn component(&self, i: usize) -> &RatFunc {
        &self.0[i]
    }

    pub fn into_components(self) -> Vec<RatFunc> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(RatFunc::is_zero)
    }

    pub fn scale(&self, f: &RatFunc) -> Section {
        if f.is_one() {
            return self.clone();
        }
        Section(self.0.iter().map(|c| c * f).collect())
    }

    /// `self += f · other`, skipping zero entries.
    pub fn add_scaled(&mut self, f: &RatFunc, other: &Section) {
        if f.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = &*a + &(f * b);
            }
        }
    }

    /// `self += f · E_i`.
    pub fn add_to_component(&mut self, i: usize, f: &RatFunc) {
        if !f.is_zero() {
            self.0[i] = &self.0[i] + f;
        }
    }

    /// Components as parseable expression strings.
    pub fn format_with(&self, names: &[String]) -> Vec<String> {
        self.0.iter().map(|c| c.format_with(names)).collect()
    }

    pub fn embed(&self, rank: usize, offset: usize, nvars: usize, var_offset: usize) -> Section {
        let mut out = Section::zero(rank, nvars);
        for (i, c) in self.0.iter().enumerate() {
            out.0[offset + i] = c.embed(nvars, var_offset);
        }
        out
    }
}

impl Add for &Section {
    type Output = Section;
    fn add(self, rhs: &Section) -> Section {
        Section(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Section {
    type Output = Section;
    fn sub(self, rhs: &Section) -> Section {
        Section(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for Section {
    type Output = Section;
    fn add(self, rhs: Section) -> Section {
        &self + &rhs
    }
}

impl Sub for Section {
    type Output = Section;
    fn sub(self, rhs: Section) -> Section {
        &self - &rhs
    }
}

/// Values `op(E_i, E_j)` of a bilinear operation on the frame, row-major in `(i, j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpTable {
    rank: usize,
    values: Vec<Section>,
}

impl OpTable {
    pub fn from_fn(rank: usize, mut f: impl FnMut(usize, usize) -> Section) -> Self {
        let mut values = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                values.push(f(i, j));
            }
        }
        OpTable { rank, values }
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        Self::from_fn(rank, |_, _| Section::zero(rank, nvars))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &Section {
        &self.values[i * self.rank + j]
    }

    /// Structure constant `t^k_{ij}`.
    pub fn coeff(&self, k: usize, i: usize, j: usize) -> &RatFunc {
        self.get(i, j).component(k)
    }

    pub fn transpose(&self) -> OpTable {
        Self::from_fn(self.rank, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Section::is_zero)
    }

    /// Bilinear extension over the coefficient field.
    pub fn eval(&self, x: &Section, y: &Section) -> Section {
        let nvars = x.0.first().map_or(0, RatFunc::nvars);
        let mut out = Section::zero(self.rank, nvars);
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let t = self.get(i, j);
                if t.is_zero() {
                    continue;
                }
                out.add_scaled(&(xi * yj), t);
            }
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(&Section) -> Section) -> OpTable {
        OpTable {
            rank: self.rank,
            values: self.values.iter().map(&mut f).collect(),
        }
    }

    pub fn sections(&self) -> &[Section] {
        &self.values
    }
}

impl Sub for &OpTable {
    type Output = OpTable;
    fn sub(self, rhs: &OpTable) -> OpTable {
        OpTable {
            rank: self.rank,
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}
