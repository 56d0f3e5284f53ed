//! Named example algebroids and constructors for action algebroids, direct
//! products and Poisson seeds.

use std::fmt;
use std::str::FromStr;

use crate::algebroid::{
    check_f_algebroid, check_pre_f, AlgebroidPresentation, OpTable, PresentationParts, Section,
};
use crate::error::{Error, Result};
use crate::ring::{linalg, q, Monomial, Poly, RatFunc, Rational, VectorField};

/// Structure constants `t[k][i][j]` over ℚ.
pub type Constants = Vec<Vec<Vec<Rational>>>;

/// A finite-dimensional algebra over ℚ: commutative product plus a bracket
/// or a pre-Lie product.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebra {
    pub dim: usize,
    pub product: Constants,
    pub bracket: Option<Constants>,
    pub prelie: Option<Constants>,
}

fn zero_constants(r: usize) -> Constants {
    vec![vec![vec![q(0); r]; r]; r]
}

fn lift(t: &Constants, r: usize, n: usize) -> OpTable {
    OpTable::from_fn(r, |i, j| {
        Section::new((0..r).map(|k| RatFunc::constant(n, t[k][i][j].clone())).collect())
    })
}

fn lower(t: &OpTable) -> Result<Constants> {
    let r = t.rank();
    let mut out = zero_constants(r);
    for (k, slice) in out.iter_mut().enumerate() {
        for (i, row) in slice.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = t
                    .coeff(k, i, j)
                    .constant_value()
                    .ok_or_else(|| Error::Invalid("structure functions are not constant".into()))?;
            }
        }
    }
    Ok(out)
}

impl FiniteAlgebra {
    /// Constants of a presentation over a point.
    pub fn from_presentation(a: &AlgebroidPresentation) -> Result<Self> {
        if !a.is_point() {
            return Err(Error::BaseNotPoint);
        }
        Ok(FiniteAlgebra {
            dim: a.rank(),
            product: lower(a.product()?)?,
            bracket: a.parts().bracket.as_ref().map(lower).transpose()?,
            prelie: a.parts().prelie.as_ref().map(lower).transpose()?,
        })
    }

    fn parts(&self, name: &str, base_vars: Vec<String>) -> PresentationParts {
        let n = base_vars.len();
        let r = self.dim;
        let mut parts = PresentationParts::new(name, base_vars, r);
        parts.product = Some(lift(&self.product, r, n));
        parts.bracket = self.bracket.as_ref().map(|t| lift(t, r, n));
        parts.prelie = self.prelie.as_ref().map(|t| lift(t, r, n));
        parts
    }

    /// The algebra as a presentation over a point, with its identity if it has one.
    pub fn presentation(&self, name: &str) -> Result<AlgebroidPresentation> {
        let a = AlgebroidPresentation::new(self.parts(name, Vec::new()))?;
        with_found_identity(a)
    }

    /// The bracket, or the commutator of the pre-Lie product.
    fn lie_bracket(&self) -> Option<Constants> {
        if let Some(b) = &self.bracket {
            return Some(b.clone());
        }
        let l = self.prelie.as_ref()?;
        let r = self.dim;
        let mut b = zero_constants(r);
        for k in 0..r {
            for i in 0..r {
                for j in 0..r {
                    b[k][i][j] = &l[k][i][j] - &l[k][j][i];
                }
            }
        }
        Some(b)
    }
}

fn with_found_identity(a: AlgebroidPresentation) -> Result<AlgebroidPresentation> {
    if a.identity().is_some() {
        return Ok(a);
    }
    match crate::algebroid::find_identity(&a) {
        Some(e) => {
            let mut parts = a.into_parts();
            parts.identity = Some(e);
            AlgebroidPresentation::new(parts)
        }
        None => Ok(a),
    }
}

/// An algebra acting on a coordinate chart by vector fields, `ρ(e_i) = rho[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionSpec {
    algebra: FiniteAlgebra,
    base_vars: Vec<String>,
    rho: Vec<VectorField>,
}

impl ActionSpec {
    /// Checks `ρ[x, y] = [ρx, ρy]` on the basis, where `[x, y]` is the bracket
    /// or the commutator of the pre-Lie product.
    pub fn new(algebra: FiniteAlgebra, base_vars: Vec<String>, rho: Vec<VectorField>) -> Result<Self> {
        let n = base_vars.len();
        if rho.len() != algebra.dim || rho.iter().any(|v| v.dim() != n) {
            return Err(Error::Shape(format!(
                "action: expected {} vector fields of dimension {n}",
                algebra.dim
            )));
        }
        let b = algebra
            .lie_bracket()
            .ok_or(Error::MissingStructure("bracket"))?;
        for i in 0..algebra.dim {
            for j in i + 1..algebra.dim {
                let mut lhs = VectorField::zero(n);
                for (k, rk) in rho.iter().enumerate() {
                    lhs = &lhs + &rk.scale(&RatFunc::constant(n, b[k][i][j].clone()));
                }
                let rhs = rho[i].bracket(&rho[j]);
                if lhs != rhs {
                    let d = &lhs - &rhs;
                    let shown: Vec<String> = d.components().iter().map(|c| c.format_with(&base_vars)).collect();
                    return Err(Error::NotAHomomorphism(format!(
                        "rho[e{}, e{}] - [rho e{}, rho e{}] = ({})",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1,
                        shown.join(", ")
                    )));
                }
            }
        }
        Ok(ActionSpec {
            algebra,
            base_vars,
            rho,
        })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    fn build(&self, name: &str, keep_bracket: bool, keep_prelie: bool) -> Result<AlgebroidPresentation> {
        let mut parts = self.algebra.parts(name, self.base_vars.clone());
        if !keep_bracket {
            parts.bracket = None;
        }
        if !keep_prelie {
            parts.prelie = None;
        }
        parts.anchor = Some(self.rho.clone());
        let point = self.algebra.presentation(name)?;
        if let Some(e) = point.identity() {
            let n = self.base_vars.len();
            parts.identity = Some(Section::new(
                e.components()
                    .iter()
                    .map(|c| RatFunc::constant(n, c.constant_value().unwrap_or_else(|| q(0))))
                    .collect(),
            ));
        }
        AlgebroidPresentation::new(parts)
    }
}

/// Trivial bundle `M × g` with constant structure constants and anchor `ρ`.
pub fn action_f_algebroid(spec: &ActionSpec) -> Result<AlgebroidPresentation> {
    if spec.algebra.bracket.is_none() {
        return Err(Error::MissingStructure("bracket"));
    }
    let point = spec.algebra.presentation("")?;
    let report = check_f_algebroid(&point)?;
    if !report.overall() {
        return Err(Error::NotFManifoldAlgebra(Box::new(report)));
    }
    spec.build("", true, false)
}

/// Pre-F analogue of [`action_f_algebroid`]: `X ∗ Y = L_{ρ(X)} Y + X ∗ Y`.
pub fn action_pre_f(spec: &ActionSpec) -> Result<AlgebroidPresentation> {
    if spec.algebra.prelie.is_none() {
        return Err(Error::MissingStructure("prelie"));
    }
    let point = spec.algebra.presentation("")?;
    let report = check_pre_f(&point)?;
    if !report.overall() {
        return Err(Error::NotFManifoldAlgebra(Box::new(report)));
    }
    spec.build("", false, true)
}

fn suffixed(vars: &[String], tag: usize) -> Vec<String> {
    vars.iter().map(|v| format!("{v}#{tag}")).collect()
}

fn block_table(t1: &OpTable, t2: &OpTable, r1: usize, n1: usize, n: usize) -> OpTable {
    let r = r1 + t2.rank();
    OpTable::from_fn(r, |i, j| match (i < r1, j < r1) {
        (true, true) => t1.get(i, j).embed(r, 0, n, 0),
        (false, false) => t2.get(i - r1, j - r1).embed(r, r1, n, n1),
        _ => Section::zero(r, n),
    })
}

/// Direct product over the product base. Variables of the factors are
/// suffixed with `#1` and `#2`.
pub fn direct_product(a1: &AlgebroidPresentation, a2: &AlgebroidPresentation) -> Result<AlgebroidPresentation> {
    for a in [a1, a2] {
        let report = check_f_algebroid(a)?;
        if !report.overall() {
            return Err(Error::NotFAlgebroid(Box::new(report)));
        }
    }
    let (n1, n2) = (a1.nvars(), a2.nvars());
    let (r1, r2) = (a1.rank(), a2.rank());
    let n = n1 + n2;
    let mut vars = suffixed(a1.base_vars(), 1);
    vars.extend(suffixed(a2.base_vars(), 2));
    let name = if a1.name().is_empty() || a2.name().is_empty() {
        String::new()
    } else {
        format!("{} x {}", a1.name(), a2.name())
    };
    let mut parts = PresentationParts::new(name, vars, r1 + r2);
    parts.product = Some(block_table(a1.product()?, a2.product()?, r1, n1, n));
    parts.bracket = Some(block_table(a1.bracket_table()?, a2.bracket_table()?, r1, n1, n));
    if let (Some(l1), Some(l2)) = (&a1.parts().prelie, &a2.parts().prelie) {
        parts.prelie = Some(block_table(l1, l2, r1, n1, n));
    }
    let mut anchor = Vec::with_capacity(r1 + r2);
    for v in a1.anchor()? {
        let mut c: Vec<RatFunc> = v.components().iter().map(|f| f.embed(n, 0)).collect();
        c.extend((0..n2).map(|_| RatFunc::zero(n)));
        anchor.push(VectorField::new(c));
    }
    for v in a2.anchor()? {
        let mut c: Vec<RatFunc> = (0..n1).map(|_| RatFunc::zero(n)).collect();
        c.extend(v.components().iter().map(|f| f.embed(n, n1)));
        anchor.push(VectorField::new(c));
    }
    parts.anchor = Some(anchor);
    if let (Some(e1), Some(e2)) = (a1.identity(), a2.identity()) {
        parts.identity = Some(&e1.embed(r1 + r2, 0, n, 0) + &e2.embed(r1 + r2, r1, n, n1));
    }
    AlgebroidPresentation::new(parts)
}

/// Canonical Poisson bracket on `(q_1..q_m, p_1..p_m)`: `{q_i, p_i} = 1`.
pub fn poisson_bracket(f: &RatFunc, g: &RatFunc) -> RatFunc {
    let m = f.nvars() / 2;
    let mut out = RatFunc::zero(f.nvars());
    for i in 0..m {
        out = &out + &(&(&f.derivative(i) * &g.derivative(m + i)) - &(&f.derivative(m + i) * &g.derivative(i)));
    }
    out
}

/// `H_f` with `H_f(g) = {f, g}`.
pub fn hamiltonian_field(f: &RatFunc) -> VectorField {
    let n = f.nvars();
    let m = n / 2;
    let mut c = vec![RatFunc::zero(n); n];
    for i in 0..m {
        c[i] = -f.derivative(m + i);
        c[m + i] = f.derivative(i);
    }
    VectorField::new(c)
}

/// Coefficients of `g` in the ℚ-span of `fs`, or `None` if it lies outside.
fn express_in_span(g: &RatFunc, fs: &[RatFunc]) -> Option<Vec<Rational>> {
    let mut den = g.den().clone();
    for f in fs {
        den = &den * f.den();
    }
    let clear = |h: &RatFunc| -> Poly {
        // h·den is a polynomial since den is a multiple of h's denominator.
        (&(h.num() * &den))
            .div_exact(h.den())
            .expect("denominator divides the common multiple")
    };
    let target = clear(g);
    let cols: Vec<Poly> = fs.iter().map(clear).collect();
    let mut monomials: Vec<_> = target.terms().map(|(m, _)| m.clone()).collect();
    for c in &cols {
        monomials.extend(c.terms().map(|(m, _)| m.clone()));
    }
    monomials.sort();
    monomials.dedup();
    let rows: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|m| cols.iter().map(|c| c.coefficient(m)).collect())
        .collect();
    let rhs: Vec<Rational> = monomials.iter().map(|m| target.coefficient(m)).collect();
    match linalg::solve(&rows, &rhs, fs.len(), &q(0)) {
        linalg::Solution::Unique(x) => Some(x),
        linalg::Solution::Many(x) => Some(x),
        linalg::Solution::Inconsistent => None,
    }
}

/// Finite-rank piece of the Poisson F-algebroid `M × C^∞(M)`: the frame is the
/// seed `fs`, with pointwise product, Poisson bracket and Hamiltonian anchor.
/// The base variables are `(q_1..q_m, p_1..p_m)`.
pub fn poisson_seed(base_vars: Vec<String>, fs: &[RatFunc]) -> Result<AlgebroidPresentation> {
    let n = base_vars.len();
    if n % 2 != 0 {
        return Err(Error::Invalid("a canonical Poisson base has even dimension".into()));
    }
    if fs.is_empty() || fs.iter().any(|f| f.nvars() != n) {
        return Err(Error::Shape("seed functions must be over the base variables".into()));
    }
    let r = fs.len();
    let zero = vec![q(0); r];
    for (i, f) in fs.iter().enumerate() {
        let mut others = fs.to_vec();
        others.remove(i);
        if express_in_span(f, &others).is_some() || f.is_zero() {
            return Err(Error::Invalid(format!(
                "seed function {} is linearly dependent on the others",
                f.format_with(&base_vars)
            )));
        }
    }
    let mut product = vec![vec![zero.clone(); r]; r];
    let mut bracket = vec![vec![zero.clone(); r]; r];
    for i in 0..r {
        for j in 0..r {
            for (what, value, slot) in [
                ("*", &fs[i] * &fs[j], &mut product[i][j]),
                ("{,}", poisson_bracket(&fs[i], &fs[j]), &mut bracket[i][j]),
            ] {
                *slot = express_in_span(&value, fs).ok_or_else(|| {
                    Error::NotClosed(format!(
                        "{} {what} {} = {} is outside the span",
                        fs[i].format_with(&base_vars),
                        fs[j].format_with(&base_vars),
                        value.format_with(&base_vars)
                    ))
                })?;
            }
        }
    }
    let to_table = |t: &Vec<Vec<Vec<Rational>>>| {
        OpTable::from_fn(r, |i, j| {
            Section::new(t[i][j].iter().map(|c| RatFunc::constant(n, c.clone())).collect())
        })
    };
    let mut parts = PresentationParts::new("", base_vars, r);
    parts.product = Some(to_table(&product));
    parts.bracket = Some(to_table(&bracket));
    parts.anchor = Some(fs.iter().map(hamiltonian_field).collect());
    if let Some(e) = express_in_span(&RatFunc::one(n), fs) {
        parts.identity = Some(Section::new(e.into_iter().map(|c| RatFunc::constant(n, c)).collect()));
    }
    AlgebroidPresentation::new(parts)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn delta_table(n: usize) -> OpTable {
    OpTable::from_fn(n, |i, j| {
        if i == j {
            Section::basis(n, n, i)
        } else {
            Section::zero(n, n)
        }
    })
}

fn tangent_parts(name: String, n: usize, product: OpTable, identity: Section) -> PresentationParts {
    let mut parts = PresentationParts::new(name, names("u", n), n);
    parts.product = Some(product);
    parts.prelie = Some(OpTable::zero(n, n));
    parts.anchor = Some((0..n).map(|i| VectorField::coordinate(n, i)).collect());
    parts.identity = Some(identity);
    parts
}

/// Semi-simple tangent presentation in canonical coordinates: `∂_i·∂_j = δ_ij ∂_i`,
/// zero connection, so `∂_i ∗ ∂_j = 0` and `[∂_i, ∂_j] = 0`.
pub fn semisimple(n: usize) -> Result<AlgebroidPresentation> {
    if n == 0 {
        return Err(Error::Invalid("semisimple needs n >= 1".into()));
    }
    let e = Section::new(vec![RatFunc::one(n); n]);
    let mut parts = tangent_parts(format!("SS{n}"), n, delta_table(n), e);
    parts.bracket = Some(OpTable::zero(n, n));
    AlgebroidPresentation::new(parts)
}

fn fm2_algebra() -> FiniteAlgebra {
    let mut product = zero_constants(2);
    product[0][0][0] = q(1);
    product[1][0][1] = q(1);
    product[1][1][0] = q(1);
    let mut bracket = zero_constants(2);
    bracket[1][0][1] = q(1);
    bracket[1][1][0] = q(-1);
    FiniteAlgebra {
        dim: 2,
        product,
        bracket: Some(bracket),
        prelie: None,
    }
}

/// Two-dimensional F-manifold algebra `e1·e1 = e1, e1·e2 = e2, [e1, e2] = e2`.
pub fn fm2() -> FiniteAlgebra {
    fm2_algebra()
}

/// FM2 acting on the plane by `ρ(e1) = u2∂2, ρ(e2) = u2∂1 + u2²∂2`.
pub fn act2_spec() -> Result<ActionSpec> {
    let vars = names("u", 2);
    let u2 = RatFunc::var(2, 1);
    let rho = vec![
        VectorField::new(vec![RatFunc::zero(2), u2.clone()]),
        VectorField::new(vec![u2.clone(), u2.pow(2)]),
    ];
    ActionSpec::new(fm2_algebra(), vars, rho)
}

/// Constant vector fields `∂_1..∂_n` of the polynomial pre-Lie-Com algebra:
/// `∂_i·∂_j = δ_ij ∂_i`, `∂_i ∗ ∂_j = 0`.
pub fn constant_fields_algebra(n: usize) -> FiniteAlgebra {
    let mut product = zero_constants(n);
    for i in 0..n {
        product[i][i][i] = q(1);
    }
    FiniteAlgebra {
        dim: n,
        product,
        bracket: None,
        prelie: Some(zero_constants(n)),
    }
}

/// Action of [`constant_fields_algebra`] by `ρ(∂_i) = ∂/∂u^i`. Sections of the
/// action algebroid are the polynomial vector fields `Σ p_i ∂_i`.
pub fn dn_spec(n: usize) -> Result<ActionSpec> {
    ActionSpec::new(
        constant_fields_algebra(n),
        names("u", n),
        (0..n).map(|i| VectorField::coordinate(n, i)).collect(),
    )
}

/// Monomial vector fields `m·∂_i` with `deg m ≤ cap`.
pub fn monomial_sections(n: usize, cap: u32) -> Vec<(String, Section)> {
    let vars = names("u", n);
    let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                let used: u32 = e.iter().sum();
                (0..=cap - used).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for e in &exps {
        let m = RatFunc::from_poly(Poly::term(Monomial::from_exponents(e.clone()), q(1)));
        for i in 0..n {
            let label = format!("({})*E{}", m.format_with(&vars), i + 1);
            out.push((label, Section::scaled_basis(n, i, &m)));
        }
    }
    out
}

/// `ℚ[u]/(u^m)` over a point, frame `E_k = u^k`.
pub fn truncated_polynomials(m: usize) -> Result<AlgebroidPresentation> {
    if m == 0 {
        return Err(Error::Invalid("TRUNC needs m >= 1".into()));
    }
    let mut parts = PresentationParts::new(format!("TRUNC{m}"), Vec::new(), m);
    parts.product = Some(OpTable::from_fn(m, |i, j| {
        if i + j < m {
            Section::basis(m, 0, i + j)
        } else {
            Section::zero(m, 0)
        }
    }));
    parts.identity = Some(Section::basis(m, 0, 0));
    AlgebroidPresentation::new(parts)
}

/// Named examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    Fm2,
    Act2,
    Ss(usize),
    Tr,
    Tr2,
    /// Polynomial vector fields on `ℝ^n`; the cap bounds the degree of the
    /// monomial sections swept in addition to the frame checks.
    Dn(usize, u32),
    PoissonSeed,
    Trunc(usize),
}

pub const DEFAULT_DN_CAP: u32 = 3;

impl Fixture {
    pub fn load(self) -> Result<AlgebroidPresentation> {
        let a = match self {
            Fixture::Fm2 => fm2_algebra().presentation("FM2")?,
            Fixture::Act2 => action_f_algebroid(&act2_spec()?)?,
            Fixture::Ss(n) => semisimple(n)?,
            Fixture::Tr => {
                let mut parts = PresentationParts::new("TR", vec!["u".to_string()], 1);
                parts.product = Some(OpTable::from_fn(1, |_, _| Section::basis(1, 1, 0)));
                parts.prelie = Some(OpTable::zero(1, 1));
                parts.anchor = Some(vec![VectorField::new(vec![RatFunc::var(1, 0)])]);
                parts.identity = Some(Section::basis(1, 1, 0));
                AlgebroidPresentation::new(parts)?
            }
            Fixture::Tr2 => {
                let c = OpTable::from_fn(2, |i, j| match (i, j) {
                    (0, k) | (k, 0) => Section::basis(2, 2, k),
                    _ => Section::zero(2, 2),
                });
                AlgebroidPresentation::new(tangent_parts("TR2".into(), 2, c, Section::basis(2, 2, 0)))?
            }
            Fixture::Dn(n, _) => action_pre_f(&dn_spec(n)?)?,
            Fixture::PoissonSeed => {
                let vars = vec!["q".to_string(), "p".to_string()];
                poisson_seed(vars, &[RatFunc::one(2)])?
            }
            Fixture::Trunc(m) => truncated_polynomials(m)?,
        };
        Ok(a.with_name(self.to_string()))
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Fm2 => write!(f, "FM2"),
            Fixture::Act2 => write!(f, "ACT2"),
            Fixture::Ss(n) => write!(f, "SS{n}"),
            Fixture::Tr => write!(f, "TR"),
            Fixture::Tr2 => write!(f, "TR2"),
            Fixture::Dn(n, cap) if *cap == DEFAULT_DN_CAP => write!(f, "DN{n}"),
            Fixture::Dn(n, cap) => write!(f, "DN{n}-{cap}"),
            Fixture::PoissonSeed => write!(f, "POISSON_SEED"),
            Fixture::Trunc(m) => write!(f, "TRUNC{m}"),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFixture(s.to_string());
        let count = |t: &str| -> Result<usize> {
            t.parse::<usize>().ok().filter(|&n| (1..=8).contains(&n)).ok_or_else(unknown)
        };
        let upper = s.to_ascii_uppercase();
        Ok(match upper.as_str() {
            "FM2" => Fixture::Fm2,
            "ACT2" => Fixture::Act2,
            "TR" => Fixture::Tr,
            "TR2" => Fixture::Tr2,
            "POISSON_SEED" => Fixture::PoissonSeed,
            _ => {
                if let Some(rest) = upper.strip_prefix("SS") {
                    Fixture::Ss(count(rest)?)
                } else if let Some(rest) = upper.strip_prefix("TRUNC") {
                    Fixture::Trunc(count(rest)?)
                } else if let Some(rest) = upper.strip_prefix("DN") {
                    match rest.split_once('-') {
                        Some((n, cap)) => Fixture::Dn(
                            count(n)?,
                            cap.parse().ok().filter(|&c| c <= 8).ok_or_else(unknown)?,
                        ),
                        None => Fixture::Dn(count(rest)?, DEFAULT_DN_CAP),
                    }
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

pub fn load_fixture(name: &str) -> Result<AlgebroidPresentation> {
    name.parse::<Fixture>()?.load()
}

/// One line per fixture family: name pattern and description.
pub fn fixture_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("FM2", "2-dim F-manifold algebra over a point"),
        ("ACT2", "action F-algebroid of FM2 on the plane"),
        ("SS<n>", "semi-simple tangent presentation, n = 1..8"),
        ("TR", "tangent line with (f d)*(g d) = u f g' d"),
        ("TR2", "rank-2 tangent PreLie-Com algebroid with identity d1"),
        ("DN<n>[-cap]", "polynomial vector fields on R^n (sweep degree cap, default 3)"),
        ("POISSON_SEED", "Poisson seed {1} on (q, p)"),
        ("TRUNC<m>", "Q[u]/(u^m) over a point"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{check_prelie_com, find_identity, sub_adjacent};
    use crate::exprparse::parse_expr;

    #[test]
    fn fixture_names_roundtrip() {
        for s in ["FM2", "ACT2", "SS3", "TR", "TR2", "DN2", "DN2-2", "POISSON_SEED", "TRUNC4"] {
            assert_eq!(s.parse::<Fixture>().unwrap().to_string(), s);
        }
        assert!(matches!("SS0".parse::<Fixture>(), Err(Error::UnknownFixture(_))));
        assert!(matches!("XYZ".parse::<Fixture>(), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn act2_is_f_algebroid_with_identity() {
        let a = Fixture::Act2.load().unwrap();
        assert!(check_f_algebroid(&a).unwrap().overall());
        assert_eq!(a.identity(), Some(&a.basis(0)));
    }

    #[test]
    fn non_homomorphic_action_is_rejected() {
        let n = 2;
        let rho = vec![
            VectorField::new(vec![RatFunc::zero(n), RatFunc::var(n, 1)]),
            VectorField::new(vec![RatFunc::var(n, 0), RatFunc::zero(n)]),
        ];
        let err = ActionSpec::new(fm2(), names("u", 2), rho).unwrap_err();
        assert!(matches!(err, Error::NotAHomomorphism(_)));
    }

    #[test]
    fn zero_action_passes() {
        let spec = ActionSpec::new(fm2(), names("u", 2), vec![VectorField::zero(2); 2]).unwrap();
        assert!(check_f_algebroid(&action_f_algebroid(&spec).unwrap()).unwrap().overall());
    }

    #[test]
    fn dn_is_prelie_com_and_sub_adjacent_commutes() {
        let spec = dn_spec(2).unwrap();
        let a = action_pre_f(&spec).unwrap();
        assert!(check_prelie_com(&a).unwrap().overall());
        let alg = spec.algebra().clone();
        let sub = FiniteAlgebra {
            bracket: alg.lie_bracket(),
            prelie: None,
            ..alg
        };
        let spec2 = ActionSpec::new(sub, names("u", 2), (0..2).map(|i| VectorField::coordinate(2, i)).collect()).unwrap();
        let lhs = sub_adjacent(&a).unwrap();
        let rhs = action_f_algebroid(&spec2).unwrap();
        assert_eq!(lhs.parts().bracket, rhs.parts().bracket);
        assert_eq!(lhs.parts().product, rhs.parts().product);
        assert_eq!(lhs.parts().anchor, rhs.parts().anchor);
    }

    #[test]
    fn direct_products() {
        let ss1 = semisimple(1).unwrap();
        let p = direct_product(&ss1, &ss1).unwrap();
        let ss2 = semisimple(2).unwrap();
        assert_eq!(p.parts().product, ss2.parts().product);
        assert_eq!(p.parts().anchor, ss2.parts().anchor);
        assert_eq!(p.base_vars(), ["u1#1", "u1#2"]);
        let fm = Fixture::Fm2.load().unwrap();
        let f4 = direct_product(&fm, &fm).unwrap();
        assert_eq!(f4.rank(), 4);
        assert!(check_f_algebroid(&f4).unwrap().overall());
    }

    #[test]
    fn poisson_seeds() {
        let vars = vec!["q".to_string(), "p".to_string()];
        let a = Fixture::PoissonSeed.load().unwrap();
        assert!(check_f_algebroid(&a).unwrap().overall());
        let q2 = parse_expr("q^2", &vars).unwrap();
        assert!(matches!(poisson_seed(vars.clone(), &[q2]), Err(Error::NotClosed(_))));
        let four: Vec<RatFunc> = ["1", "p", "q", "p*q"].iter().map(|s| parse_expr(s, &vars).unwrap()).collect();
        assert!(matches!(poisson_seed(vars, &four), Err(Error::NotClosed(_))));
    }

    #[test]
    fn semisimple_identity() {
        let a = semisimple(2).unwrap();
        assert_eq!(find_identity(&a), Some(Section::new(vec![RatFunc::one(2); 2])));
    }
}
