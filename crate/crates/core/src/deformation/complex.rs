use rayon::prelude::*;

use crate::algebroid::{AlgebroidPresentation, Section};
use crate::error::{Error, Result};
use crate::ring::VectorField;

use super::multider::{index_tuple, MultiDer};

/// The pre-Lie algebroid whose deformation complex is used.
#[derive(Clone, Copy, Debug)]
pub enum DefComplex<'a> {
    /// `∗_A` with the presentation's anchor.
    PreLie(&'a AlgebroidPresentation),
    /// A commutative associative algebroid as a pre-Lie one: `∗ = ·`, zero anchor.
    Commutative(&'a AlgebroidPresentation),
}

impl<'a> DefComplex<'a> {
    /// The pre-Lie structure when present, otherwise the commutative view.
    pub fn of(a: &'a AlgebroidPresentation) -> Result<Self> {
        if a.has_prelie() {
            a.anchor()?;
            Ok(DefComplex::PreLie(a))
        } else if a.has_product() {
            Ok(DefComplex::Commutative(a))
        } else {
            Err(Error::MissingStructure("prelie"))
        }
    }

    pub fn commutative(a: &'a AlgebroidPresentation) -> Result<Self> {
        a.product()?;
        Ok(DefComplex::Commutative(a))
    }

    pub fn presentation(&self) -> &'a AlgebroidPresentation {
        match self {
            DefComplex::PreLie(a) | DefComplex::Commutative(a) => a,
        }
    }

    pub fn star(&self, x: &Section, y: &Section) -> Result<Section> {
        match self {
            DefComplex::PreLie(a) => a.prelie(x, y),
            DefComplex::Commutative(a) => a.multiply(x, y),
        }
    }

    /// Sub-adjacent bracket `X∗Y − Y∗X`.
    pub fn bracket(&self, x: &Section, y: &Section) -> Result<Section> {
        match self {
            DefComplex::PreLie(_) => Ok(&self.star(x, y)? - &self.star(y, x)?),
            DefComplex::Commutative(a) => Ok(a.zero_section()),
        }
    }

    pub fn anchor_of(&self, x: &Section) -> Result<VectorField> {
        match self {
            DefComplex::PreLie(a) => a.anchor_of(x),
            DefComplex::Commutative(a) => Ok(VectorField::zero(a.nvars())),
        }
    }

    fn sign(i: usize) -> bool {
        i % 2 == 1
    }

    /// `d_def ω` on frame tuples `(X_1..X_{n+1})`.
    fn d_value(&self, w: &MultiDer, xs: &[Section]) -> Result<Section> {
        let n = w.degree();
        let a = self.presentation();
        let mut out = a.zero_section();
        let mut acc = |s: Section, negative: bool| {
            out = if negative { &out - &s } else { &out + &s };
        };
        let last = &xs[n];
        for i in 0..n {
            // (−1)^{i+1} with 1-based i is + for even 0-based i.
            let neg = Self::sign(i);
            let without: Vec<Section> = xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x.clone()).collect();
            acc(self.star(&xs[i], &w.eval(&without)?)?, neg);
            let mut moved: Vec<Section> = xs[..n].iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x.clone()).collect();
            moved.push(xs[i].clone());
            acc(self.star(&w.eval(&moved)?, last)?, neg);
            moved.pop();
            moved.push(self.star(&xs[i], last)?);
            acc(w.eval(&moved)?, !neg);
        }
        if !matches!(self, DefComplex::Commutative(_)) {
            for i in 0..n {
                for j in i + 1..n {
                    // (−1)^{i+j} is unchanged by the shift to 0-based indices.
                    let neg = Self::sign(i + j);
                    let mut args = vec![self.bracket(&xs[i], &xs[j])?];
                    args.extend(xs.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| x.clone()));
                    acc(w.eval(&args)?, neg);
                }
            }
        }
        Ok(out)
    }

    /// Symbol of `d_def ω` on frame tuples `(X_1..X_n)`.
    fn d_symbol(&self, w: &MultiDer, xs: &[Section]) -> Result<VectorField> {
        let n = w.degree();
        let nv = self.presentation().nvars();
        let mut out = VectorField::zero(nv);
        if let DefComplex::Commutative(_) = self {
            // Every term involves the anchor or the bracket, both zero here.
            return Ok(out);
        }
        for i in 0..n {
            let neg = Self::sign(i);
            let without: Vec<Section> = xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x.clone()).collect();
            let t1 = self.anchor_of(&xs[i])?.bracket(&w.sigma_eval(&without)?);
            let mut moved = without;
            moved.push(xs[i].clone());
            let t3 = self.anchor_of(&w.eval(&moved)?)?;
            let t = &t1 + &t3;
            out = if neg { &out - &t } else { &out + &t };
        }
        for i in 0..n {
            for j in i + 1..n {
                let neg = Self::sign(i + j);
                let mut args = vec![self.bracket(&xs[i], &xs[j])?];
                args.extend(xs.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| x.clone()));
                let t = w.sigma_eval(&args)?;
                out = if neg { &out - &t } else { &out + &t };
            }
        }
        Ok(out)
    }

    /// The coboundary `d_def ω ∈ Der^{n+1}` with its symbol.
    pub fn d(&self, w: &MultiDer) -> Result<MultiDer> {
        let a = self.presentation();
        let (r, nv) = (a.rank(), a.nvars());
        if w.rank() != r || w.nvars() != nv {
            return Err(Error::Shape("cochain does not match the presentation".into()));
        }
        let n = w.degree();
        let basis: Vec<Section> = (0..r).map(|i| a.basis(i)).collect();
        let frame = |t: &[usize]| -> Vec<Section> { t.iter().map(|&i| basis[i].clone()).collect() };
        // Only tuples whose first n slots increase are computed; the rest follow
        // by antisymmetry.
        let dvals: Vec<(usize, Section)> = (0..r.pow(n as u32 + 1))
            .into_par_iter()
            .filter_map(|idx| {
                let t = index_tuple(idx, n + 1, r);
                t[..n].windows(2).all(|p| p[0] < p[1]).then_some((idx, t))
            })
            .map(|(idx, t)| Ok((idx, self.d_value(w, &frame(&t))?)))
            .collect::<Result<_>>()?;
        let svals: Vec<(usize, VectorField)> = (0..r.pow(n as u32))
            .into_par_iter()
            .filter_map(|idx| {
                let t = index_tuple(idx, n, r);
                t.windows(2).all(|p| p[0] < p[1]).then_some((idx, t))
            })
            .map(|(idx, t)| Ok((idx, self.d_symbol(w, &frame(&t))?)))
            .collect::<Result<_>>()?;
        let lookup_d = |t: &[usize]| {
            let idx = super::multider::tuple_index(t, r);
            dvals.iter().find(|(i, _)| *i == idx).map(|(_, s)| s.clone()).unwrap_or_else(|| Section::zero(r, nv))
        };
        let lookup_s = |t: &[usize]| {
            let idx = super::multider::tuple_index(t, r);
            svals.iter().find(|(i, _)| *i == idx).map(|(_, v)| v.clone()).unwrap_or_else(|| VectorField::zero(nv))
        };
        Ok(MultiDer::from_fn(n + 1, r, nv, lookup_d, lookup_s))
    }
}

/// `d_def ω` in the deformation complex of `a` (its pre-Lie structure, or the
/// commutative view when it has only a product).
pub fn d_def(a: &AlgebroidPresentation, w: &MultiDer) -> Result<MultiDer> {
    DefComplex::of(a)?.d(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Fixture;
    use crate::ring::RatFunc;

    #[test]
    fn d_of_identity_is_product() {
        let a = Fixture::Fm2.load().unwrap();
        let r = a.rank();
        let id = MultiDer::degree1((0..r).map(|i| a.basis(i)).collect(), VectorField::zero(0)).unwrap();
        let d = DefComplex::commutative(&a).unwrap().d(&id).unwrap();
        // X·φ(Y) + φ(X)·Y − φ(X·Y) = X·Y for φ = id.
        assert_eq!(d.to_table(), *a.product().unwrap());
        let dd = DefComplex::commutative(&a).unwrap().d(&d).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_tangent_line() {
        let a = Fixture::Tr.load().unwrap();
        let u = RatFunc::var(1, 0);
        let phi = MultiDer::degree1(vec![Section::new(vec![u.pow(2)])], VectorField::new(vec![u.clone()])).unwrap();
        let cx = DefComplex::of(&a).unwrap();
        let d1 = cx.d(&phi).unwrap();
        assert!(cx.d(&d1).unwrap().is_zero());
    }
}
