use rayon::prelude::*;

use crate::algebroid::{
    basis_args, label, scaled_args, scaled_tuples, triples, AlgebroidPresentation, Arg, OpTable,
    PresentationParts, Section,
};
use crate::error::{Error, Result};
use crate::report::{CheckRecord, Report};
use crate::ring::{HSeries, VectorField};

use super::complex::DefComplex;
use super::multider::MultiDer;

/// A pre-Lie deformation `X ·_ħ Y = X·Y + Σ_{k=1}^n ħ^k μ_k(X, Y)` of a
/// commutative associative algebroid (anchor zero, `μ_0 = ·`).
///
/// With `formal` set, every `μ_k` beyond the stored ones is declared zero and
/// the checks run to order `2n`, past which the pre-Lie rule has no terms.
#[derive(Clone, Debug)]
pub struct FormalDeformation {
    base: AlgebroidPresentation,
    mus: Vec<MultiDer>,
    formal: bool,
}

impl FormalDeformation {
    pub fn new(base: AlgebroidPresentation, mus: Vec<MultiDer>, formal: bool) -> Result<Self> {
        base.product()?;
        for (k, m) in mus.iter().enumerate() {
            if m.degree() != 2 {
                return Err(Error::Invalid(format!("mu{} must have degree 2", k + 1)));
            }
            if m.rank() != base.rank() || m.nvars() != base.nvars() {
                return Err(Error::Shape(format!("mu{} does not match the base", k + 1)));
            }
        }
        Ok(FormalDeformation { base, mus, formal })
    }

    pub fn base(&self) -> &AlgebroidPresentation {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.mus.len()
    }

    pub fn is_formal(&self) -> bool {
        self.formal
    }

    pub fn mus(&self) -> &[MultiDer] {
        &self.mus
    }

    /// `μ_k`, with `μ_0` the base product.
    pub fn mu(&self, k: usize) -> MultiDer {
        let a = &self.base;
        if k == 0 {
            let t = a.product().expect("checked at construction");
            MultiDer::from_fn(2, a.rank(), a.nvars(), |s| t.get(s[0], s[1]).clone(), |_| {
                VectorField::zero(a.nvars())
            })
        } else {
            self.mus
                .get(k - 1)
                .cloned()
                .unwrap_or_else(|| MultiDer::zero(2, a.rank(), a.nvars()))
        }
    }

    /// Highest order at which the pre-Lie rule is checked.
    pub fn checked_order(&self) -> usize {
        if self.formal {
            2 * self.order()
        } else {
            self.order()
        }
    }

    /// `μ_0..=μ_top`.
    fn mu_list(&self, top: usize) -> Vec<MultiDer> {
        (0..=top).map(|k| self.mu(k)).collect()
    }
}

/// `S ·_ħ T`, truncated at the smaller order.
fn hbar_product(mus: &[MultiDer], s: &HSeries<Section>, t: &HSeries<Section>, zero: &Section) -> Result<HSeries<Section>> {
    let order = s.order().min(t.order());
    let mut out = vec![zero.clone(); order + 1];
    for (i, mu) in mus.iter().enumerate().take(order + 1) {
        for j in 0..=order - i {
            for l in 0..=order - i - j {
                let v = mu.eval(&[s.coeff(j).clone(), t.coeff(l).clone()])?;
                out[i + j + l] = &out[i + j + l] + &v;
            }
        }
    }
    Ok(HSeries::new(out))
}

/// Order-by-order `(X·Y)·Z − X·(Y·Z) − (Y·X)·Z + Y·(X·Z)` for `·_ħ`.
fn pre_lie_residual(mus: &[MultiDer], x: &Section, y: &Section, z: &Section, order: usize) -> Result<HSeries<Section>> {
    let zero = Section::zero(x.rank(), x.components().first().map_or(0, |c| c.nvars()));
    let c = |s: &Section| HSeries::constant(s.clone(), zero.clone(), order);
    let (x, y, z) = (c(x), c(y), c(z));
    let assoc = |p: &HSeries<Section>, q: &HSeries<Section>| -> Result<HSeries<Section>> {
        let left = hbar_product(mus, &hbar_product(mus, p, q, &zero)?, &z, &zero)?;
        let right = hbar_product(mus, p, &hbar_product(mus, q, &z, &zero)?, &zero)?;
        Ok(left - right)
    };
    Ok(assoc(&x, &y)? - assoc(&y, &x)?)
}

/// Verifies the pre-Lie rule order by order on frame triples and on triples
/// with one slot scaled by a coordinate, plus the Leibniz rule of each `μ_k`
/// against its symbol.
pub fn check_n_deformation(def: &FormalDeformation) -> Result<Report> {
    let a = &def.base;
    let names = a.base_vars().to_vec();
    let mut report = Report::new(format!("{} pre-Lie {}-deformation", a.name(), def.order()));
    let top = def.checked_order();
    let mus = def.mu_list(top);
    let basis = basis_args(a);
    let scaled = scaled_args(a);
    let mut tuples = triples(&basis, |_, _, _| true);
    tuples.extend(scaled_tuples(&basis, &scaled, 3, &[0, 1, 2]));
    let per_tuple: Vec<Result<HSeries<Section>>> = tuples
        .par_iter()
        .map(|t| pre_lie_residual(&mus, &t[0].section, &t[1].section, &t[2].section, top))
        .collect();
    let per_tuple: Vec<HSeries<Section>> = per_tuple.into_iter().collect::<Result<_>>()?;
    for k in 0..=top {
        for (t, res) in tuples.iter().zip(&per_tuple) {
            let r = res.coeff(k);
            report.push(CheckRecord {
                law: "pre-lie-rule".into(),
                instance: format!("order {k} {}", label(t)),
                pass: r.is_zero(),
                witness: (!r.is_zero()).then(|| r.format_with(&names)),
            });
        }
    }
    for (k, mu) in mus.iter().enumerate().skip(1).take(def.order()) {
        leibniz_law(&mut report, k, mu, a, &basis, &scaled)?;
    }
    Ok(report)
}

fn leibniz_law(report: &mut Report, k: usize, mu: &MultiDer, a: &AlgebroidPresentation, basis: &[Arg], scaled: &[Arg]) -> Result<()> {
    let names = a.base_vars();
    for x in basis {
        for y in scaled {
            // y = f·E_j: μ(X, fE_j) − f μ(X, E_j) − σ(X)(f) E_j.
            let (j, f) = y
                .section
                .components()
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .expect("scaled argument is nonzero");
            let lhs = mu.eval(&[x.section.clone(), y.section.clone()])?;
            let plain = mu.eval(&[x.section.clone(), a.basis(j)])?.scale(f);
            let sym = a.basis(j).scale(&mu.sigma_eval(&[x.section.clone()])?.apply(f));
            let r = &(&lhs - &plain) - &sym;
            report.record(
                "leibniz",
                format!("mu{k} ({}, {})", x.label, y.label),
                (!r.is_zero()).then(|| r.format_with(names)),
            );
        }
    }
    Ok(())
}

/// The F-algebroid `(A, [−,−], ·, σ_{μ1})` with `[X, Y] = μ1(X,Y) − μ1(Y,X)`.
pub fn semiclassical_limit(def: &FormalDeformation) -> Result<AlgebroidPresentation> {
    let report = check_n_deformation(def)?;
    if def.order() == 0 || !report.overall() {
        return Err(Error::NotADeformation(Box::new(report)));
    }
    let a = &def.base;
    let mu1 = def.mu(1);
    let mut parts = PresentationParts::new(format!("{} semi-classical limit", a.name()), a.base_vars().to_vec(), a.rank());
    parts.product = Some(a.product()?.clone());
    parts.bracket = Some(OpTable::from_fn(a.rank(), |i, j| mu1.d_at(&[i, j]) - mu1.d_at(&[j, i])));
    parts.anchor = Some((0..a.rank()).map(|i| mu1.sigma_at(&[i]).clone()).collect());
    parts.identity = a.identity().cloned();
    AlgebroidPresentation::new(parts)
}

/// `Θ_n` from `μ_1..μ_n`: the order-`n+1` pre-Lie residual without `μ_{n+1}`,
/// with symbol `Σ σ_{μi}(μj(X,Y) − μj(Y,X)) − [σ_{μi}X, σ_{μj}Y]` over
/// `i + j = n + 1`, `i, j ≥ 1`.
pub fn obstruction(def: &FormalDeformation) -> Result<MultiDer> {
    let report = check_n_deformation(def)?;
    if !report.overall() {
        return Err(Error::NotADeformation(Box::new(report)));
    }
    Ok(theta(def))
}

fn theta(def: &FormalDeformation) -> MultiDer {
    let a = &def.base;
    let (r, nv) = (a.rank(), a.nvars());
    let n = def.order();
    let pairs: Vec<(MultiDer, MultiDer)> = (1..=n).map(|i| (def.mu(i), def.mu(n + 1 - i))).collect();
    let value = |t: &[usize]| -> Section {
        let (x, y, z) = (a.basis(t[0]), a.basis(t[1]), a.basis(t[2]));
        let ev = |m: &MultiDer, p: &Section, q: &Section| m.eval(&[p.clone(), q.clone()]).expect("arity 2");
        let mut out = Section::zero(r, nv);
        for (mi, mj) in &pairs {
            out = &out + &ev(mi, &ev(mj, &x, &y), &z);
            out = &out - &ev(mi, &x, &ev(mj, &y, &z));
            out = &out - &ev(mi, &ev(mj, &y, &x), &z);
            out = &out + &ev(mi, &y, &ev(mj, &x, &z));
        }
        out
    };
    let symbol = |t: &[usize]| -> VectorField {
        let (x, y) = (a.basis(t[0]), a.basis(t[1]));
        let ev = |m: &MultiDer, p: &Section, q: &Section| m.eval(&[p.clone(), q.clone()]).expect("arity 2");
        let sig = |m: &MultiDer, p: &Section| m.sigma_eval(&[p.clone()]).expect("arity 1");
        let mut out = VectorField::zero(nv);
        for (mi, mj) in &pairs {
            let skew = &ev(mj, &x, &y) - &ev(mj, &y, &x);
            out = &out + &sig(mi, &skew);
            out = &out - &sig(mi, &x).bracket(&sig(mj, &y));
        }
        out
    };
    MultiDer::from_fn(3, r, nv, value, symbol)
}

/// Extends an order-`n` deformation by `μ_{n+1} = ψ` when `Θ_n = d_def ψ`.
pub fn extend(def: &FormalDeformation, psi: &MultiDer) -> Result<FormalDeformation> {
    let th = obstruction(def)?;
    let cx = DefComplex::commutative(&def.base)?;
    let residual = &th - &cx.d(psi)?;
    if !residual.is_zero() {
        return Err(Error::ObstructionNonzero(residual.format_with(def.base.base_vars()).join("; ")));
    }
    let mut mus = def.mus.clone();
    mus.push(psi.clone());
    let out = FormalDeformation::new(def.base.clone(), mus, false)?;
    let report = check_n_deformation(&out)?;
    if !report.overall() {
        return Err(Error::NotADeformation(Box::new(report)));
    }
    Ok(out)
}
