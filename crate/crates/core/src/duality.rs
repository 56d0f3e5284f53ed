//! Eventual identities, Dubrovin duality and Nijenhuis deformations.
//!
//! With `ℰ` fixed, every relation checked here is bilinear over functions in
//! the remaining arguments `X, Y` (the non-tensorial Leibniz terms cancel
//! inside `P_ℰ` and `Ψ`), so frame pairs suffice. Nijenhuis torsions of a
//! bracket or pre-Lie product are differential, so they are also checked with
//! one argument scaled by each coordinate.

use rayon::prelude::*;

use crate::algebroid::{
    basis_args, check_f_algebroid, check_pre_f, scaled_args, AlgebroidPresentation, Arg, OpTable, Section,
};
use crate::error::{Error, Result};
use crate::report::{CheckRecord, Report};
use crate::ring::{linalg, RatFunc, VectorField};

/// Bundle endomorphism `N(E_i) = Σ_k N[k][i] E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMap {
    matrix: Vec<Vec<RatFunc>>,
}

impl BundleMap {
    pub fn new(matrix: Vec<Vec<RatFunc>>) -> Self {
        BundleMap { matrix }
    }

    pub fn identity(rank: usize, nvars: usize) -> Self {
        BundleMap {
            matrix: (0..rank)
                .map(|k| {
                    (0..rank)
                        .map(|i| if i == k { RatFunc::one(nvars) } else { RatFunc::zero(nvars) })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn diagonal(entries: Vec<RatFunc>) -> Self {
        let r = entries.len();
        let n = entries.first().map_or(0, RatFunc::nvars);
        let mut m = BundleMap::identity(r, n).matrix;
        for (k, e) in entries.into_iter().enumerate() {
            m[k][k] = e;
        }
        BundleMap { matrix: m }
    }

    pub fn matrix(&self) -> &[Vec<RatFunc>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &Section) -> Section {
        Section::new(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(x.components())
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .fold(RatFunc::zero(x.components()[0].nvars()), |acc, (a, b)| &acc + &(a * b))
                })
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BundleMap) -> BundleMap {
        let r = self.rank();
        let n = self.matrix[0][0].nvars();
        BundleMap {
            matrix: (0..r)
                .map(|k| {
                    (0..r)
                        .map(|i| {
                            (0..r).fold(RatFunc::zero(n), |acc, j| &acc + &(&self.matrix[k][j] * &other.matrix[j][i]))
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn check_shape(&self, a: &AlgebroidPresentation) -> Result<()> {
        let r = a.rank();
        if self.matrix.len() != r
            || self
                .matrix
                .iter()
                .any(|row| row.len() != r || row.iter().any(|f| f.nvars() != a.nvars()))
        {
            return Err(Error::Shape(format!("bundle map must be {r}x{r} over the base variables")));
        }
        Ok(())
    }
}

fn residual_record(law: &str, instance: String, r: Section, names: &[String]) -> CheckRecord {
    CheckRecord {
        law: law.to_string(),
        instance,
        pass: r.is_zero(),
        witness: (!r.is_zero()).then(|| r.format_with(names)),
    }
}

fn pair_sweep<F>(report: &mut Report, law: &str, a: &AlgebroidPresentation, pairs: &[(usize, usize)], f: F) -> Result<()>
where
    F: Fn(&Section, &Section) -> Result<Section> + Sync,
{
    let recs: Vec<Result<CheckRecord>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let r = f(&a.basis(i), &a.basis(j))?;
            Ok(residual_record(law, format!("(E{}, E{})", i + 1, j + 1), r, a.base_vars()))
        })
        .collect();
    for r in recs {
        report.push(r?);
    }
    Ok(())
}

fn pairs(r: usize, strict: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in i..r {
            if !(strict && i == j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn subject(a: &AlgebroidPresentation, ev: &Section, what: &str) -> String {
    format!("{what} [{}]", ev.format_with(a.base_vars()).join(", "))
}

/// `P_ℰ(X, Y) = [e, ℰ]·X·Y` on frame pairs.
pub fn is_pseudo_eventual_identity(a: &AlgebroidPresentation, ev: &Section) -> Result<Report> {
    let e = a.identity_or_solve()?;
    a.bracket_table()?;
    a.anchor()?;
    let e_ev = a.bracket(&e, ev)?;
    let mut report = Report::new(subject(a, ev, "pseudo-eventual identity"));
    pair_sweep(&mut report, "P_E(X,Y) = [e,E].X.Y", a, &pairs(a.rank(), false), |x, y| {
        let lhs = a.p_tensor(ev, x, y)?;
        let rhs = a.multiply(&a.multiply(&e_ev, x)?, y)?;
        Ok(&lhs - &rhs)
    })?;
    Ok(report)
}

/// `Ψ(ℰ, X, Y) = −(ℰ∗e)·X·Y` and `(X∗ℰ)·Y = (Y∗ℰ)·X` on frame pairs.
pub fn is_pre_f_eventual_identity(a: &AlgebroidPresentation, ev: &Section) -> Result<Report> {
    let e = a.identity_or_solve()?;
    a.prelie_table()?;
    a.anchor()?;
    let ev_e = a.prelie(ev, &e)?;
    let mut report = Report::new(subject(a, ev, "pre-F pseudo-eventual identity"));
    pair_sweep(&mut report, "Psi(E,X,Y) = -(E*e).X.Y", a, &pairs(a.rank(), false), |x, y| {
        let lhs = a.psi(ev, x, y)?;
        let rhs = a.multiply(&a.multiply(&ev_e, x)?, y)?;
        Ok(&lhs + &rhs)
    })?;
    pair_sweep(&mut report, "(X*E).Y = (Y*E).X", a, &pairs(a.rank(), true), |x, y| {
        Ok(&a.multiply(&a.prelie(x, ev)?, y)? - &a.multiply(&a.prelie(y, ev)?, x)?)
    })?;
    Ok(report)
}

/// Which family of eventual identities is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventualKind {
    F,
    PreF,
}

impl EventualKind {
    pub fn check(self, a: &AlgebroidPresentation, ev: &Section) -> Result<Report> {
        match self {
            EventualKind::F => is_pseudo_eventual_identity(a, ev),
            EventualKind::PreF => is_pre_f_eventual_identity(a, ev),
        }
    }
}

/// `ℰ⁻¹` with `ℰ·ℰ⁻¹ = e`, by a linear solve over the function field.
pub fn invert_section(a: &AlgebroidPresentation, ev: &Section) -> Result<Section> {
    let e = a.identity_or_solve()?;
    let m = a.multiplication_matrix(ev)?;
    match linalg::solve(&m, e.components(), a.rank(), &RatFunc::zero(a.nvars())) {
        linalg::Solution::Unique(x) => Ok(Section::new(x)),
        _ => Err(Error::NotInvertible),
    }
}

/// Output of a duality: the dual presentation plus everything needed to undo it.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityCertificate {
    pub kind: EventualKind,
    pub original: AlgebroidPresentation,
    pub ev_identity: Section,
    pub inverse: Section,
    pub dual: AlgebroidPresentation,
    /// `ℰ⁻²`, the inverse of the old identity under the dual product.
    pub e_dagger: Section,
}

fn dual_product(a: &AlgebroidPresentation, ev: &Section) -> Result<OpTable> {
    let r = a.rank();
    let mut values = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            values.push(a.multiply(&a.multiply(&a.basis(i), &a.basis(j))?, ev)?);
        }
    }
    Ok(OpTable::from_fn(r, |i, j| values[i * r + j].clone()))
}

fn dualize(a: &AlgebroidPresentation, ev: &Section, kind: EventualKind) -> Result<DualityCertificate> {
    let report = kind.check(a, ev)?;
    if !report.overall() {
        return Err(Error::NotEventual(Box::new(report)));
    }
    let inverse = invert_section(a, ev)?;
    let mut parts = a.parts().clone();
    parts.product = Some(dual_product(a, ev)?);
    parts.identity = Some(inverse.clone());
    if kind == EventualKind::F {
        parts.prelie = None;
    }
    let dual = AlgebroidPresentation::new(parts)?;
    let e_dagger = a.multiply(&inverse, &inverse)?;
    Ok(DualityCertificate {
        kind,
        original: a.clone(),
        ev_identity: ev.clone(),
        inverse,
        dual,
        e_dagger,
    })
}

/// `X·_ℰ Y = X·Y·ℰ` with identity `ℰ⁻¹`; bracket and anchor unchanged.
pub fn dubrovin_dual(a: &AlgebroidPresentation, ev: &Section) -> Result<DualityCertificate> {
    dualize(a, ev, EventualKind::F)
}

/// Pre-F version: keeps `∗` and the anchor.
pub fn pre_f_dual(a: &AlgebroidPresentation, ev: &Section) -> Result<DualityCertificate> {
    dualize(a, ev, EventualKind::PreF)
}

impl DualityCertificate {
    /// Re-derive every claim of the certificate: the dual satisfies its
    /// structure check, its identity is `ℰ⁻¹`, the old identity is eventual for
    /// it, and dualizing again at `e†` gives back the original product and
    /// identity.
    pub fn verify_involution(&self) -> Result<Report> {
        let a = &self.original;
        let names = a.base_vars();
        let mut report = Report::new(format!(
            "duality at [{}]",
            self.ev_identity.format_with(names).join(", ")
        ));
        let e = a.identity_or_solve()?;
        let prod = a.multiply(&self.ev_identity, &self.inverse)?;
        report.record("E . E^-1 = e", "", (prod != e).then(|| (&prod - &e).format_with(names)));
        let structure = match self.kind {
            EventualKind::F => check_f_algebroid(&self.dual)?,
            EventualKind::PreF => check_pre_f(&self.dual)?,
        };
        report.record(
            "dual structure check",
            structure.subject.clone(),
            structure
                .first_failure()
                .map(|f| f.witness.clone().unwrap_or_default()),
        );
        let found = crate::algebroid::find_identity(&self.dual);
        report.record(
            "dual identity = E^-1",
            "",
            (found.as_ref() != Some(&self.inverse)).then(|| match &found {
                Some(f) => (f - &self.inverse).format_with(names),
                None => vec!["no identity".to_string()],
            }),
        );
        let ev_check = self.kind.check(&self.dual, &e)?;
        report.record(
            "e eventual on dual",
            "",
            ev_check.first_failure().map(|f| f.witness.clone().unwrap_or_default()),
        );
        let again = dualize(&self.dual, &self.e_dagger, self.kind)?;
        let r = a.rank();
        for i in 0..r {
            for j in i..r {
                let d = &again.dual.product()?.get(i, j).clone() - a.product()?.get(i, j);
                report.record(
                    "second dual product = original",
                    format!("(E{}, E{})", i + 1, j + 1),
                    (!d.is_zero()).then(|| d.format_with(names)),
                );
            }
        }
        let back = again.dual.identity().cloned().unwrap_or_else(|| a.zero_section());
        report.record(
            "second dual identity = e",
            "",
            (back != e).then(|| (&back - &e).format_with(names)),
        );
        Ok(report)
    }
}

/// Closure of eventual identities: `ℰ1·ℰ2`, `ℰ1⁻¹` and, for F-algebroids,
/// `[ℰ1, ℰ2]` are again (pseudo-)eventual identities.
pub fn ev_identity_closure(
    a: &AlgebroidPresentation,
    e1: &Section,
    e2: &Section,
    kind: EventualKind,
) -> Result<Report> {
    for ev in [e1, e2] {
        let r = kind.check(a, ev)?;
        if !r.overall() {
            return Err(Error::NotEventual(Box::new(r)));
        }
    }
    let names = a.base_vars();
    let mut report = Report::new(format!(
        "eventual identity closure [{}] [{}]",
        e1.format_with(names).join(", "),
        e2.format_with(names).join(", ")
    ));
    let mut candidates = vec![("E1.E2", a.multiply(e1, e2)?)];
    if kind == EventualKind::F {
        candidates.push(("[E1,E2]", a.bracket(e1, e2)?));
    }
    if let Ok(inv) = invert_section(a, e1) {
        candidates.push(("E1^-1", inv));
    }
    for (label, s) in candidates {
        let sub = kind.check(a, &s)?;
        for mut rec in sub.checks {
            rec.law = format!("{label}: {}", rec.law);
            report.push(rec);
        }
    }
    Ok(report)
}

/// Which torsion identities a Nijenhuis check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NijenhuisMode {
    Comm,
    Lie,
    PreLie,
    F,
    PreF,
}

impl NijenhuisMode {
    pub const ALL: [NijenhuisMode; 5] = [
        NijenhuisMode::Comm,
        NijenhuisMode::Lie,
        NijenhuisMode::PreLie,
        NijenhuisMode::F,
        NijenhuisMode::PreF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NijenhuisMode::Comm => "comm",
            NijenhuisMode::Lie => "lie",
            NijenhuisMode::PreLie => "prelie",
            NijenhuisMode::F => "f",
            NijenhuisMode::PreF => "pre_f",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    fn parts(self) -> &'static [Op] {
        match self {
            NijenhuisMode::Comm => &[Op::Product],
            NijenhuisMode::Lie => &[Op::Bracket],
            NijenhuisMode::PreLie => &[Op::PreLie],
            NijenhuisMode::F => &[Op::Product, Op::Bracket],
            NijenhuisMode::PreF => &[Op::Product, Op::PreLie],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Product,
    Bracket,
    PreLie,
}

impl Op {
    fn apply(self, a: &AlgebroidPresentation, x: &Section, y: &Section) -> Result<Section> {
        match self {
            Op::Product => a.multiply(x, y),
            Op::Bracket => a.bracket(x, y),
            Op::PreLie => a.prelie(x, y),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Op::Product => "product",
            Op::Bracket => "bracket",
            Op::PreLie => "pre-Lie product",
        }
    }

    fn require(self, a: &AlgebroidPresentation) -> Result<()> {
        match self {
            Op::Product => a.product().map(|_| ()),
            Op::Bracket => a.bracket_table().and(a.anchor()).map(|_| ()),
            Op::PreLie => a.prelie_table().and(a.anchor()).map(|_| ()),
        }
    }
}

/// `N(X)∘Y + X∘N(Y) − N(X∘Y)`.
fn deformed(op: Op, a: &AlgebroidPresentation, n: &BundleMap, x: &Section, y: &Section) -> Result<Section> {
    let t1 = op.apply(a, &n.apply(x), y)?;
    let t2 = op.apply(a, x, &n.apply(y))?;
    let t3 = n.apply(&op.apply(a, x, y)?);
    Ok(&(&t1 + &t2) - &t3)
}

fn torsion(op: Op, a: &AlgebroidPresentation, n: &BundleMap, x: &Section, y: &Section) -> Result<Section> {
    let lhs = op.apply(a, &n.apply(x), &n.apply(y))?;
    let rhs = n.apply(&deformed(op, a, n, x, y)?);
    Ok(&lhs - &rhs)
}

/// Vanishing Nijenhuis torsion of `N` for the operations selected by `mode`.
pub fn is_nijenhuis(a: &AlgebroidPresentation, n: &BundleMap, mode: NijenhuisMode) -> Result<Report> {
    n.check_shape(a)?;
    for op in mode.parts() {
        op.require(a)?;
    }
    let mut report = Report::new(format!("Nijenhuis ({})", mode.name()));
    let basis = basis_args(a);
    let scaled = scaled_args(a);
    let mut tuples: Vec<(&Arg, &Arg)> = Vec::new();
    for x in &basis {
        for y in &basis {
            tuples.push((x, y));
        }
    }
    for s in &scaled {
        for b in &basis {
            tuples.push((s, b));
            tuples.push((b, s));
        }
    }
    for &op in mode.parts() {
        let law = format!("torsion of {}", op.name());
        let recs: Vec<Result<CheckRecord>> = tuples
            .par_iter()
            .map(|(x, y)| {
                let r = torsion(op, a, n, &x.section, &y.section)?;
                Ok(residual_record(&law, format!("({}, {})", x.label, y.label), r, a.base_vars()))
            })
            .collect();
        for r in recs {
            report.push(r?);
        }
    }
    Ok(report)
}

fn deformed_table(op: Op, a: &AlgebroidPresentation, n: &BundleMap) -> Result<OpTable> {
    let r = a.rank();
    let values: Vec<Section> = (0..r * r)
        .into_par_iter()
        .map(|idx| deformed(op, a, n, &a.basis(idx / r), &a.basis(idx % r)))
        .collect::<Result<_>>()?;
    Ok(OpTable::from_fn(r, |i, j| values[i * r + j].clone()))
}

/// Deformed structure `(·_N, [−,−]_N, ∗_N, a∘N)` for every operation present.
/// The identity is dropped since `·_N` need not have one.
pub fn deform_by_nijenhuis(a: &AlgebroidPresentation, n: &BundleMap) -> Result<AlgebroidPresentation> {
    n.check_shape(a)?;
    let mode = match (a.has_bracket(), a.has_prelie()) {
        (_, true) if a.has_product() => NijenhuisMode::PreF,
        (true, false) if a.has_product() => NijenhuisMode::F,
        (_, true) => NijenhuisMode::PreLie,
        (true, false) => NijenhuisMode::Lie,
        (false, false) => NijenhuisMode::Comm,
    };
    let mut report = is_nijenhuis(a, n, mode)?;
    if mode == NijenhuisMode::PreF && a.has_bracket() {
        report.absorb(is_nijenhuis(a, n, NijenhuisMode::Lie)?);
    }
    if !report.overall() {
        return Err(Error::NotNijenhuis(Box::new(report)));
    }
    let mut parts = a.parts().clone();
    if a.has_product() {
        parts.product = Some(deformed_table(Op::Product, a, n)?);
    }
    if a.has_bracket() {
        parts.bracket = Some(deformed_table(Op::Bracket, a, n)?);
    }
    if a.has_prelie() {
        parts.prelie = Some(deformed_table(Op::PreLie, a, n)?);
    }
    if let Some(anchor) = &parts.anchor {
        let nv = a.nvars();
        let new: Vec<VectorField> = (0..a.rank())
            .map(|i| {
                let mut v = VectorField::zero(nv);
                for (k, col) in anchor.iter().enumerate() {
                    let c = &n.matrix()[k][i];
                    if !c.is_zero() {
                        v = &v + &col.scale(c);
                    }
                }
                v
            })
            .collect();
        parts.anchor = Some(new);
    }
    parts.identity = None;
    if !parts.name.is_empty() {
        parts.name = format!("{} deformed", parts.name);
    }
    AlgebroidPresentation::new(parts)
}

/// `N = ℰ·_A`, after checking that `ℰ` is a pseudo-eventual identity of the given kind.
pub fn nijenhuis_from_eventual(a: &AlgebroidPresentation, ev: &Section, kind: EventualKind) -> Result<BundleMap> {
    let report = kind.check(a, ev)?;
    if !report.overall() {
        return Err(Error::NotEventual(Box::new(report)));
    }
    Ok(BundleMap::new(a.multiplication_matrix(ev)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{semisimple, Fixture};
    use crate::exprparse::parse_expr;

    fn sec(a: &AlgebroidPresentation, comps: &[&str]) -> Section {
        Section::new(comps.iter().map(|s| parse_expr(s, a.base_vars()).unwrap()).collect())
    }

    #[test]
    fn euler_is_eventual_on_ss2() {
        let a = semisimple(2).unwrap();
        assert!(is_pseudo_eventual_identity(&a, &sec(&a, &["u1", "u2"])).unwrap().overall());
        assert!(!is_pseudo_eventual_identity(&a, &sec(&a, &["u2", "0"])).unwrap().overall());
        assert!(is_pseudo_eventual_identity(&a, &sec(&a, &["1", "1"])).unwrap().overall());
    }

    #[test]
    fn inverse_sections() {
        let a = semisimple(2).unwrap();
        assert_eq!(invert_section(&a, &sec(&a, &["u1", "u2"])).unwrap(), sec(&a, &["1/u1", "1/u2"]));
        let t = Fixture::Tr2.load().unwrap();
        assert!(matches!(invert_section(&t, &sec(&t, &["0", "1"])), Err(Error::NotInvertible)));
    }

    #[test]
    fn tr2_pre_f_eventual() {
        let t = Fixture::Tr2.load().unwrap();
        assert!(is_pre_f_eventual_identity(&t, &sec(&t, &["u1", "u2"])).unwrap().overall());
        assert!(!is_pre_f_eventual_identity(&t, &sec(&t, &["u1^2", "u2"])).unwrap().overall());
        let n = nijenhuis_from_eventual(&t, &sec(&t, &["u1", "u2"]), EventualKind::PreF).unwrap();
        assert_eq!(n, BundleMap::new(vec![
            vec![RatFunc::var(2, 0), RatFunc::zero(2)],
            vec![RatFunc::var(2, 1), RatFunc::var(2, 0)],
        ]));
        assert!(is_nijenhuis(&t, &n, NijenhuisMode::PreF).unwrap().overall());
    }

    #[test]
    fn identity_dual_is_trivial() {
        let a = semisimple(2).unwrap();
        let cert = dubrovin_dual(&a, &sec(&a, &["1", "1"])).unwrap();
        assert_eq!(cert.dual.product().unwrap(), a.product().unwrap());
        assert!(cert.verify_involution().unwrap().overall());
    }

    #[test]
    fn constant_nilpotent_fails_comm() {
        let a = semisimple(2).unwrap();
        let n = BundleMap::new(vec![
            vec![RatFunc::zero(2), RatFunc::one(2)],
            vec![RatFunc::zero(2), RatFunc::zero(2)],
        ]);
        let r = is_nijenhuis(&a, &n, NijenhuisMode::Comm).unwrap();
        assert!(!r.overall());
        assert!(r.first_failure().unwrap().witness.is_some());
    }

    #[test]
    fn identity_map_is_nijenhuis_everywhere() {
        let a = semisimple(2).unwrap();
        let id = BundleMap::identity(2, 2);
        for mode in NijenhuisMode::ALL {
            assert!(is_nijenhuis(&a, &id, mode).unwrap().overall(), "{mode:?}");
        }
        let d = deform_by_nijenhuis(&a, &id).unwrap();
        assert_eq!(d.parts().product, a.parts().product);
        assert_eq!(d.parts().bracket, a.parts().bracket);
    }
}
