use crate::error::{Error, Result};
use crate::ring::{linalg, RatFunc, VectorField};

use super::section::{OpTable, Section};

/// Raw ingredients of a presentation; validated by [`AlgebroidPresentation::new`].
#[derive(Clone, Debug, PartialEq)]
pub struct PresentationParts {
    pub name: String,
    pub base_vars: Vec<String>,
    pub rank: usize,
    pub product: Option<OpTable>,
    pub bracket: Option<OpTable>,
    pub prelie: Option<OpTable>,
    /// `anchor[i] = a(E_i)`.
    pub anchor: Option<Vec<VectorField>>,
    pub identity: Option<Section>,
}

impl PresentationParts {
    pub fn new(name: impl Into<String>, base_vars: Vec<String>, rank: usize) -> Self {
        PresentationParts {
            name: name.into(),
            base_vars,
            rank,
            product: None,
            bracket: None,
            prelie: None,
            anchor: None,
            identity: None,
        }
    }
}

/// Rank-`r` anchored bundle over a coordinate chart with `n` base variables,
/// given by the values of its operations on a global frame. Immutable once
/// validated.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidPresentation {
    parts: PresentationParts,
}

impl AlgebroidPresentation {
    pub fn new(mut parts: PresentationParts) -> Result<Self> {
        let n = parts.base_vars.len();
        let r = parts.rank;
        if r == 0 {
            return Err(Error::Invalid("rank must be at least 1".into()));
        }
        for (i, v) in parts.base_vars.iter().enumerate() {
            if parts.base_vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate base variable `{v}`")));
            }
        }
        let check_section = |what: &str, s: &Section| -> Result<()> {
            if s.rank() != r || s.components().iter().any(|c| c.nvars() != n) {
                return Err(Error::Shape(format!("{what}: expected {r} components over {n} variables")));
            }
            Ok(())
        };
        for (what, table) in [
            ("product", &parts.product),
            ("bracket", &parts.bracket),
            ("prelie", &parts.prelie),
        ] {
            if let Some(t) = table {
                if t.rank() != r {
                    return Err(Error::Shape(format!("{what}: table rank {} != {r}", t.rank())));
                }
                for s in t.sections() {
                    check_section(what, s)?;
                }
            }
        }
        if n == 0 && parts.anchor.is_none() {
            parts.anchor = Some(vec![VectorField::zero(0); r]);
        }
        if let Some(a) = &parts.anchor {
            if a.len() != r || a.iter().any(|v| v.dim() != n) {
                return Err(Error::Shape(format!("anchor: expected {r} vector fields of dimension {n}")));
            }
        }
        if let Some(c) = &parts.product {
            for i in 0..r {
                for j in i + 1..r {
                    if c.get(i, j) != c.get(j, i) {
                        return Err(Error::Invalid(format!(
                            "product not commutative at (E{}, E{})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        if let Some(b) = &parts.bracket {
            for i in 0..r {
                for j in i..r {
                    if b.get(i, j) != &-b.get(j, i) {
                        return Err(Error::Invalid(format!(
                            "bracket not antisymmetric at (E{}, E{})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
            if let Some(l) = &parts.prelie {
                if b != &(l - &l.transpose()) {
                    return Err(Error::Invalid(
                        "bracket differs from the commutator of the pre-Lie product".into(),
                    ));
                }
            }
        }
        if let Some(e) = &parts.identity {
            check_section("identity", e)?;
            let c = parts
                .product
                .as_ref()
                .ok_or_else(|| Error::Invalid("identity given without a product".into()))?;
            for i in 0..r {
                let ei = Section::basis(r, n, i);
                if c.eval(e, &ei) != ei {
                    return Err(Error::Invalid(format!("identity fails on E{}", i + 1)));
                }
            }
        }
        Ok(AlgebroidPresentation { parts })
    }

    pub fn parts(&self) -> &PresentationParts {
        &self.parts
    }

    pub fn into_parts(self) -> PresentationParts {
        self.parts
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.parts.name = name.into();
        self
    }

    pub fn base_vars(&self) -> &[String] {
        &self.parts.base_vars
    }

    pub fn nvars(&self) -> usize {
        self.parts.base_vars.len()
    }

    pub fn rank(&self) -> usize {
        self.parts.rank
    }

    pub fn is_point(&self) -> bool {
        self.nvars() == 0
    }

    pub fn product(&self) -> Result<&OpTable> {
        self.parts.product.as_ref().ok_or(Error::MissingStructure("product"))
    }

    pub fn bracket_table(&self) -> Result<&OpTable> {
        self.parts.bracket.as_ref().ok_or(Error::MissingStructure("bracket"))
    }

    pub fn prelie_table(&self) -> Result<&OpTable> {
        self.parts.prelie.as_ref().ok_or(Error::MissingStructure("prelie"))
    }

    pub fn anchor(&self) -> Result<&[VectorField]> {
        self.parts.anchor.as_deref().ok_or(Error::MissingStructure("anchor"))
    }

    pub fn identity(&self) -> Option<&Section> {
        self.parts.identity.as_ref()
    }

    pub fn has_product(&self) -> bool {
        self.parts.product.is_some()
    }

    pub fn has_bracket(&self) -> bool {
        self.parts.bracket.is_some()
    }

    pub fn has_prelie(&self) -> bool {
        self.parts.prelie.is_some()
    }

    pub fn has_anchor(&self) -> bool {
        self.parts.anchor.is_some()
    }

    pub fn zero_section(&self) -> Section {
        Section::zero(self.rank(), self.nvars())
    }

    pub fn basis(&self, i: usize) -> Section {
        Section::basis(self.rank(), self.nvars(), i)
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::var(self.nvars(), i)
    }

    pub fn constant(&self, c: i64) -> RatFunc {
        RatFunc::from_int(self.nvars(), c)
    }

    fn check_shape(&self, x: &Section) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::Shape(format!(
                "section has {} components, rank is {}",
                x.rank(),
                self.rank()
            )));
        }
        if x.components().iter().any(|c| c.nvars() != self.nvars()) {
            return Err(Error::Shape("section over the wrong variables".into()));
        }
        Ok(())
    }

    /// `X ·_A Y`.
    pub fn multiply(&self, x: &Section, y: &Section) -> Result<Section> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        Ok(self.product()?.eval(x, y))
    }

    /// `a_A(X) = Σ f^i a(E_i)`.
    pub fn anchor_of(&self, x: &Section) -> Result<VectorField> {
        let a = self.anchor()?;
        let mut v = VectorField::zero(self.nvars());
        for (f, col) in x.components().iter().zip(a) {
            if !f.is_zero() && !col.is_zero() {
                v = &v + &col.scale(f);
            }
        }
        Ok(v)
    }

    /// `Σ_j V(g^j) E_j`: a vector field differentiating the coefficients of `y`.
    fn derivative_terms(&self, v: &VectorField, y: &Section) -> Section {
        Section::new(y.components().iter().map(|g| v.apply(g)).collect())
    }

    /// `[X, Y]_A` with the anchor's Leibniz terms in both slots.
    pub fn bracket(&self, x: &Section, y: &Section) -> Result<Section> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        let b = self.bracket_table()?;
        let ax = self.anchor_of(x)?;
        let ay = self.anchor_of(y)?;
        let mut out = b.eval(x, y);
        if !ax.is_zero() {
            out = &out + &self.derivative_terms(&ax, y);
        }
        if !ay.is_zero() {
            out = &out - &self.derivative_terms(&ay, x);
        }
        Ok(out)
    }

    /// `X ∗_A Y`: tensorial in `X`, Leibniz in `Y`.
    pub fn prelie(&self, x: &Section, y: &Section) -> Result<Section> {
        self.check_shape(x)?;
        self.check_shape(y)?;
        let l = self.prelie_table()?;
        let ax = self.anchor_of(x)?;
        let mut out = l.eval(x, y);
        if !ax.is_zero() {
            out = &out + &self.derivative_terms(&ax, y);
        }
        Ok(out)
    }

    /// `P_X(Y, Z) = [X, Y·Z] − [X, Y]·Z − Y·[X, Z]`.
    pub fn p_tensor(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let yz = self.multiply(y, z)?;
        let t1 = self.bracket(x, &yz)?;
        let t2 = self.multiply(&self.bracket(x, y)?, z)?;
        let t3 = self.multiply(y, &self.bracket(x, z)?)?;
        Ok(&(&t1 - &t2) - &t3)
    }

    /// `Φ(X, Y, Z, W) = P_{X·Y}(Z, W) − X·P_Y(Z, W) − Y·P_X(Z, W)`.
    pub fn phi(&self, x: &Section, y: &Section, z: &Section, w: &Section) -> Result<Section> {
        let xy = self.multiply(x, y)?;
        let t1 = self.p_tensor(&xy, z, w)?;
        let t2 = self.multiply(x, &self.p_tensor(y, z, w)?)?;
        let t3 = self.multiply(y, &self.p_tensor(x, z, w)?)?;
        Ok(&(&t1 - &t2) - &t3)
    }

    /// `Ψ(X, Y, Z) = X∗(Y·Z) − (X∗Y)·Z − Y·(X∗Z)`.
    pub fn psi(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let t1 = self.prelie(x, &self.multiply(y, z)?)?;
        let t2 = self.multiply(&self.prelie(x, y)?, z)?;
        let t3 = self.multiply(y, &self.prelie(x, z)?)?;
        Ok(&(&t1 - &t2) - &t3)
    }

    /// The identity given in the presentation, or else the solution of
    /// `e·E_i = E_i`.
    pub fn identity_or_solve(&self) -> Result<Section> {
        match self.identity() {
            Some(e) => Ok(e.clone()),
            None => find_identity(self).ok_or(Error::MissingStructure("identity")),
        }
    }

    /// Matrix of `X ↦ S·X`: column `i` holds `S·E_i`.
    pub fn multiplication_matrix(&self, s: &Section) -> Result<Vec<Vec<RatFunc>>> {
        let r = self.rank();
        let cols: Vec<Section> = (0..r)
            .map(|i| self.multiply(s, &self.basis(i)))
            .collect::<Result<_>>()?;
        Ok((0..r)
            .map(|k| (0..r).map(|i| cols[i].component(k).clone()).collect())
            .collect())
    }
}

/// Solve `e·E_i = E_i` for all `i`. `None` when the product has no identity.
pub fn find_identity(a: &AlgebroidPresentation) -> Option<Section> {
    let c = a.product().ok()?;
    let r = a.rank();
    let n = a.nvars();
    // Unknowns e^k; equation rows indexed by (i, component m):
    //   Σ_k e^k c^m_{ki} = δ_{mi}.
    let mut rows = Vec::with_capacity(r * r);
    let mut rhs = Vec::with_capacity(r * r);
    for i in 0..r {
        for m in 0..r {
            rows.push((0..r).map(|k| c.coeff(m, k, i).clone()).collect::<Vec<_>>());
            rhs.push(if m == i { RatFunc::one(n) } else { RatFunc::zero(n) });
        }
    }
    match linalg::solve(&rows, &rhs, r, &RatFunc::zero(n)) {
        linalg::Solution::Unique(e) => Some(Section::new(e)),
        // Two identities would coincide (e = e·e' = e'), so a consistent but
        // underdetermined system cannot occur for a genuine identity.
        linalg::Solution::Many(_) | linalg::Solution::Inconsistent => None,
    }
}

/// The sub-adjacent structure: bracket `[X, Y] = X∗Y − Y∗X`, i.e. `b = l − lᵀ`.
pub fn sub_adjacent(a: &AlgebroidPresentation) -> Result<AlgebroidPresentation> {
    let l = a.prelie_table()?;
    let mut parts = a.parts().clone();
    parts.bracket = Some(l - &l.transpose());
    AlgebroidPresentation::new(parts)
}
