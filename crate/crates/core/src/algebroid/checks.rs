//! Identity checkers.
//!
//! `Φ`, `Ψ` and associativity are tensorial, so checking them on frame tuples
//! is enough. Jacobi and the pre-Lie associator are not: they are first-order
//! differential in each coefficient. Their defect under `X ↦ fX` is
//! `f·(defect) + (first-order operator)(f)`, so evaluating with `f` ranging
//! over `1, u^1, .., u^n` in one slot at a time detects every failure.

use rayon::prelude::*;

use crate::error::Result;
use crate::report::{CheckRecord, Report};
use crate::ring::RatFunc;

use super::presentation::AlgebroidPresentation;
use super::section::Section;

/// A labelled argument for a check instance.
#[derive(Clone, Debug)]
pub struct Arg {
    pub label: String,
    pub section: Section,
}

impl Arg {
    pub fn new(label: impl Into<String>, section: Section) -> Self {
        Arg {
            label: label.into(),
            section,
        }
    }
}

pub fn basis_args(a: &AlgebroidPresentation) -> Vec<Arg> {
    (0..a.rank())
        .map(|i| Arg::new(format!("E{}", i + 1), a.basis(i)))
        .collect()
}

/// `u^μ · E_i` for every coordinate and frame element.
pub fn scaled_args(a: &AlgebroidPresentation) -> Vec<Arg> {
    let mut out = Vec::new();
    for (mu, name) in a.base_vars().iter().enumerate() {
        for i in 0..a.rank() {
            out.push(Arg::new(
                format!("{name}*E{}", i + 1),
                Section::scaled_basis(a.rank(), i, &a.var(mu)),
            ));
        }
    }
    out
}

pub(crate) fn label(args: &[&Arg]) -> String {
    let inner: Vec<&str> = args.iter().map(|a| a.label.as_str()).collect();
    format!("({})", inner.join(", "))
}

/// Evaluate `residual` on every tuple in parallel and record the outcomes in
/// input order.
pub(crate) fn sweep<'a, F>(
    report: &mut Report,
    law: &str,
    names: &[String],
    tuples: Vec<Vec<&'a Arg>>,
    residual: F,
) -> Result<()>
where
    F: Fn(&[&'a Arg]) -> Result<Section> + Sync,
{
    let records: Vec<Result<CheckRecord>> = tuples
        .par_iter()
        .map(|t| {
            let r = residual(t)?;
            Ok(CheckRecord {
                law: law.to_string(),
                instance: label(t),
                pass: r.is_zero(),
                witness: (!r.is_zero()).then(|| r.format_with(names)),
            })
        })
        .collect();
    for rec in records {
        report.push(rec?);
    }
    Ok(())
}

pub(crate) fn triples<'a>(args: &'a [Arg], keep: impl Fn(usize, usize, usize) -> bool) -> Vec<Vec<&'a Arg>> {
    let mut out = Vec::new();
    for (i, x) in args.iter().enumerate() {
        for (j, y) in args.iter().enumerate() {
            for (k, z) in args.iter().enumerate() {
                if keep(i, j, k) {
                    out.push(vec![x, y, z]);
                }
            }
        }
    }
    out
}

/// Tuples taking one slot from `scaled` and the others from `basis`, for each slot in `slots`.
pub(crate) fn scaled_tuples<'a>(basis: &'a [Arg], scaled: &'a [Arg], arity: usize, slots: &[usize]) -> Vec<Vec<&'a Arg>> {
    let mut out = Vec::new();
    for &slot in slots {
        let mut acc: Vec<Vec<&Arg>> = vec![Vec::new()];
        for pos in 0..arity {
            let pool = if pos == slot { scaled } else { basis };
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    pool.iter().map(move |a| {
                        let mut t = prefix.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

fn subject(a: &AlgebroidPresentation, what: &str) -> String {
    if a.name().is_empty() {
        what.to_string()
    } else {
        format!("{} {what}", a.name())
    }
}

/// Commutativity and associativity of `·_A` on frame triples.
pub fn check_comm_assoc(a: &AlgebroidPresentation) -> Result<Report> {
    let mut report = Report::new(subject(a, "commutative associative"));
    a.product()?;
    let names = a.base_vars();
    let basis = basis_args(a);
    let pairs: Vec<Vec<&Arg>> = triples(&basis, |i, j, k| i < j && k == 0)
        .into_iter()
        .map(|t| t[..2].to_vec())
        .collect();
    sweep(&mut report, "commutativity", names, pairs, |t| {
        Ok(&a.multiply(&t[0].section, &t[1].section)? - &a.multiply(&t[1].section, &t[0].section)?)
    })?;
    sweep(&mut report, "associativity", names, triples(&basis, |_, _, _| true), |t| {
        let (x, y, z) = (&t[0].section, &t[1].section, &t[2].section);
        Ok(&a.multiply(&a.multiply(x, y)?, z)? - &a.multiply(x, &a.multiply(y, z)?)?)
    })?;
    Ok(report)
}

fn jacobiator(a: &AlgebroidPresentation, x: &Section, y: &Section, z: &Section) -> Result<Section> {
    let t1 = a.bracket(x, &a.bracket(y, z)?)?;
    let t2 = a.bracket(y, &a.bracket(z, x)?)?;
    let t3 = a.bracket(z, &a.bracket(x, y)?)?;
    Ok(&(&t1 + &t2) + &t3)
}

/// Antisymmetry, anchor homomorphism and Jacobi (also with a scaled first slot).
pub fn check_lie_algebroid(a: &AlgebroidPresentation) -> Result<Report> {
    let mut report = Report::new(subject(a, "Lie algebroid"));
    a.bracket_table()?;
    a.anchor()?;
    let names = a.base_vars();
    let basis = basis_args(a);
    let scaled = scaled_args(a);
    let pairs: Vec<Vec<&Arg>> = triples(&basis, |i, j, k| i <= j && k == 0)
        .into_iter()
        .map(|t| t[..2].to_vec())
        .collect();
    sweep(&mut report, "antisymmetry", names, pairs.clone(), |t| {
        Ok(&a.bracket(&t[0].section, &t[1].section)? + &a.bracket(&t[1].section, &t[0].section)?)
    })?;
    let anchor_records: Vec<CheckRecord> = pairs
        .par_iter()
        .map(|t| -> Result<CheckRecord> {
            let (x, y) = (&t[0].section, &t[1].section);
            let lhs = a.anchor_of(&a.bracket(x, y)?)?;
            let rhs = a.anchor_of(x)?.bracket(&a.anchor_of(y)?);
            let d = &lhs - &rhs;
            Ok(CheckRecord {
                law: "anchor homomorphism".into(),
                instance: label(t),
                pass: d.is_zero(),
                witness: (!d.is_zero()).then(|| d.components().iter().map(|c| c.format_with(names)).collect()),
            })
        })
        .collect::<Result<_>>()?;
    for r in anchor_records {
        report.push(r);
    }
    sweep(&mut report, "Jacobi", names, triples(&basis, |_, _, _| true), |t| {
        jacobiator(a, &t[0].section, &t[1].section, &t[2].section)
    })?;
    sweep(&mut report, "Jacobi (scaled)", names, scaled_tuples(&basis, &scaled, 3, &[0]), |t| {
        jacobiator(a, &t[0].section, &t[1].section, &t[2].section)
    })?;
    Ok(report)
}

/// `Φ = 0` on frame quadruples, using its symmetry in `(X, Y)` and `(Z, W)`.
pub fn check_hertling_manin(a: &AlgebroidPresentation) -> Result<Report> {
    let mut report = Report::new(subject(a, "Hertling-Manin"));
    a.product()?;
    a.bracket_table()?;
    let basis = basis_args(a);
    let r = basis.len();
    let mut quads = Vec::new();
    for i in 0..r {
        for j in i..r {
            for k in 0..r {
                for l in k..r {
                    quads.push(vec![&basis[i], &basis[j], &basis[k], &basis[l]]);
                }
            }
        }
    }
    sweep(&mut report, "Phi = 0", a.base_vars(), quads, |t| {
        a.phi(&t[0].section, &t[1].section, &t[2].section, &t[3].section)
    })?;
    Ok(report)
}

/// Commutative associative algebroid + Lie algebroid + `Φ = 0`.
pub fn check_f_algebroid(a: &AlgebroidPresentation) -> Result<Report> {
    a.product()?;
    a.bracket_table()?;
    a.anchor()?;
    let mut report = Report::new(subject(a, "F-algebroid"));
    report.absorb(check_comm_assoc(a)?);
    report.absorb(check_lie_algebroid(a)?);
    report.absorb(check_hertling_manin(a)?);
    Ok(report)
}

fn associator(a: &AlgebroidPresentation, x: &Section, y: &Section, z: &Section) -> Result<Section> {
    Ok(&a.prelie(x, &a.prelie(y, z)?)? - &a.prelie(&a.prelie(x, y)?, z)?)
}

fn associator_defect(a: &AlgebroidPresentation, x: &Section, y: &Section, z: &Section) -> Result<Section> {
    Ok(&associator(a, x, y, z)? - &associator(a, y, x, z)?)
}

/// Associator symmetry `(X, Y, Z) = (Y, X, Z)` on frame triples and with each
/// slot scaled by a coordinate.
pub fn check_pre_lie_algebroid(a: &AlgebroidPresentation) -> Result<Report> {
    let mut report = Report::new(subject(a, "pre-Lie algebroid"));
    a.prelie_table()?;
    a.anchor()?;
    let names = a.base_vars();
    let basis = basis_args(a);
    let scaled = scaled_args(a);
    sweep(&mut report, "associator symmetry", names, triples(&basis, |i, j, _| i < j), |t| {
        associator_defect(a, &t[0].section, &t[1].section, &t[2].section)
    })?;
    sweep(
        &mut report,
        "associator symmetry (scaled)",
        names,
        scaled_tuples(&basis, &scaled, 3, &[0, 1, 2]),
        |t| associator_defect(a, &t[0].section, &t[1].section, &t[2].section),
    )?;
    Ok(report)
}

/// Pre-F-algebroid: commutative associative, pre-Lie, and `Ψ(X,Y,Z) = Ψ(Y,X,Z)`.
pub fn check_pre_f(a: &AlgebroidPresentation) -> Result<Report> {
    a.product()?;
    a.prelie_table()?;
    let mut report = Report::new(subject(a, "pre-F-algebroid"));
    report.absorb(check_comm_assoc(a)?);
    report.absorb(check_pre_lie_algebroid(a)?);
    let basis = basis_args(a);
    sweep(&mut report, "Psi symmetry", a.base_vars(), triples(&basis, |i, j, _| i < j), |t| {
        let (x, y, z) = (&t[0].section, &t[1].section, &t[2].section);
        Ok(&a.psi(x, y, z)? - &a.psi(y, x, z)?)
    })?;
    Ok(report)
}

/// PreLie-Com algebroid: as [`check_pre_f`] but with `Ψ = 0`.
pub fn check_prelie_com(a: &AlgebroidPresentation) -> Result<Report> {
    a.product()?;
    a.prelie_table()?;
    let mut report = Report::new(subject(a, "PreLie-Com algebroid"));
    report.absorb(check_comm_assoc(a)?);
    report.absorb(check_pre_lie_algebroid(a)?);
    let basis = basis_args(a);
    sweep(&mut report, "Psi = 0", a.base_vars(), triples(&basis, |_, j, k| j <= k), |t| {
        a.psi(&t[0].section, &t[1].section, &t[2].section)
    })?;
    Ok(report)
}

/// Laws selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    CommAssoc,
    LieAlgebroid,
    FAlgebroid,
    PreLieAlgebroid,
    PreF,
    PreLieCom,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::CommAssoc,
        Law::LieAlgebroid,
        Law::FAlgebroid,
        Law::PreLieAlgebroid,
        Law::PreF,
        Law::PreLieCom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::CommAssoc => "comm-assoc",
            Law::LieAlgebroid => "lie-algebroid",
            Law::FAlgebroid => "f-algebroid",
            Law::PreLieAlgebroid => "pre-lie-algebroid",
            Law::PreF => "pre-f",
            Law::PreLieCom => "prelie-com",
        }
    }

    pub fn parse(s: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == s)
    }

    pub fn check(self, a: &AlgebroidPresentation) -> Result<Report> {
        match self {
            Law::CommAssoc => check_comm_assoc(a),
            Law::LieAlgebroid => check_lie_algebroid(a),
            Law::FAlgebroid => check_f_algebroid(a),
            Law::PreLieAlgebroid => check_pre_lie_algebroid(a),
            Law::PreF => check_pre_f(a),
            Law::PreLieCom => check_prelie_com(a),
        }
    }

    /// The strongest laws whose structures are all present.
    pub fn applicable(a: &AlgebroidPresentation) -> Vec<Law> {
        let mut out = Vec::new();
        if a.has_product() && a.has_bracket() && a.has_anchor() {
            out.push(Law::FAlgebroid);
        } else if a.has_bracket() && a.has_anchor() {
            out.push(Law::LieAlgebroid);
        } else if a.has_product() && !a.has_prelie() {
            out.push(Law::CommAssoc);
        }
        if a.has_product() && a.has_prelie() && a.has_anchor() {
            out.push(Law::PreF);
        } else if a.has_prelie() && a.has_anchor() {
            out.push(Law::PreLieAlgebroid);
        }
        out
    }
}

/// Residual helper for callers that compare two sections.
pub fn difference(x: &Section, y: &Section) -> Section {
    x - y
}

/// `f · X`.
pub fn scale(f: &RatFunc, x: &Section) -> Section {
    x.scale(f)
}
