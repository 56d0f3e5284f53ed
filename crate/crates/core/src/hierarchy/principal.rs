use crate::algebroid::{AlgebroidPresentation, Section};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{Poly, RatFunc};

use super::flows::{check_tangent, flow_from_section, pairwise};

/// Christoffel symbols `Γ^k_{ij}`, stored as `gamma[k][i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    gamma: Vec<Vec<Vec<RatFunc>>>,
}

impl Connection {
    /// The flat connection of the working coordinates.
    pub fn zero(n: usize) -> Self {
        Connection {
            gamma: vec![vec![vec![RatFunc::zero(n); n]; n]; n],
        }
    }

    pub fn new(gamma: Vec<Vec<Vec<RatFunc>>>) -> Result<Self> {
        let n = gamma.len();
        if gamma.iter().any(|s| s.len() != n || s.iter().any(|r| r.len() != n || r.iter().any(|f| f.nvars() != n))) {
            return Err(Error::Shape("Christoffel symbols must be n x n x n over n variables".into()));
        }
        Ok(Connection { gamma })
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(RatFunc::is_zero)
    }

    /// `∇_{∂_j} X`.
    pub fn covariant(&self, j: usize, x: &Section) -> Section {
        let n = self.dim();
        Section::new(
            (0..n)
                .map(|i| {
                    (0..n).fold(x.component(i).derivative(j), |acc, k| &acc + &(&self.gamma[i][j][k] * x.component(k)))
                })
                .collect(),
        )
    }
}

fn check_shapes(t: &AlgebroidPresentation, conn: &Connection, x: &Section) -> Result<()> {
    check_tangent(t)?;
    if conn.dim() != t.rank() || x.rank() != t.rank() {
        return Err(Error::Shape("connection, section and presentation dimensions differ".into()));
    }
    Ok(())
}

/// `(∇_Z X)·W = (∇_W X)·Z` on frame pairs.
pub fn check_flat_condition(t: &AlgebroidPresentation, conn: &Connection, x: &Section) -> Result<Report> {
    check_shapes(t, conn, x)?;
    let n = t.rank();
    let mut report = Report::new(format!("{} flatness condition", t.name()));
    let grads: Vec<Section> = (0..n).map(|j| conn.covariant(j, x)).collect();
    for a in 0..n {
        for b in a + 1..n {
            let r = &t.multiply(&grads[a], &t.basis(b))? - &t.multiply(&grads[b], &t.basis(a))?;
            report.record(
                "flat-condition",
                format!("(E{}, E{})", a + 1, b + 1),
                (!r.is_zero()).then(|| r.format_with(t.base_vars())),
            );
        }
    }
    Ok(report)
}

/// `X_{(p,α)}` for every flat basis element `p` and level `α ≤ α_max`, with the
/// report of the recursion re-substitution and of pairwise flow commutation.
#[derive(Clone, Debug)]
pub struct HierarchyData {
    pub flat_basis: Vec<Section>,
    /// `table[p][α]`.
    pub table: Vec<Vec<Section>>,
    pub report: Report,
}

/// Right-hand side `R^i_j = c^i_{jk} X^k` of the recursion.
fn recursion_rhs(t: &AlgebroidPresentation, prev: &Section) -> Result<Vec<Vec<RatFunc>>> {
    let n = t.rank();
    let c = t.product()?;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(RatFunc::zero(n), |acc, k| &acc + &(c.coeff(i, j, k) * prev.component(k))))
                .collect()
        })
        .collect())
}

/// Polynomial `φ` with `∂_j φ = g_j`, zero constant of integration.
fn potential(g: &[RatFunc], names: &[String]) -> Result<RatFunc> {
    let n = g.len();
    let mut phi = Poly::zero(n);
    for (j, gj) in g.iter().enumerate() {
        if !gj.is_polynomial() {
            return Err(Error::NonPolynomialAntiderivative(gj.format_with(names)));
        }
        let rest = gj.num() - &phi.derivative(j);
        phi = &phi + &rest.integrate(j);
    }
    Ok(RatFunc::from_poly(phi))
}

/// Levels `α = 0..=α_max` of the recursion `∂_j X^i_{(p,α)} = c^i_{jk} X^k_{(p,α−1)}`
/// with integration constants zero. Only the flat connection `Γ = 0` is supported.
pub fn principal_hierarchy(
    t: &AlgebroidPresentation,
    conn: &Connection,
    flat_basis: &[Section],
    alpha_max: usize,
) -> Result<HierarchyData> {
    check_tangent(t)?;
    let n = t.rank();
    let names = t.base_vars();
    if conn.dim() != n {
        return Err(Error::Shape("connection dimension".into()));
    }
    if !conn.is_zero() {
        return Err(Error::NonZeroConnection);
    }
    for (p, x) in flat_basis.iter().enumerate() {
        if x.rank() != n {
            return Err(Error::Shape("flat basis section rank".into()));
        }
        if (0..n).any(|j| !conn.covariant(j, x).is_zero()) {
            return Err(Error::NotFlat(p + 1));
        }
    }
    let mut report = Report::new(format!("{} principal hierarchy", t.name()));
    let mut table = Vec::new();
    for (p, x0) in flat_basis.iter().enumerate() {
        let mut levels = vec![x0.clone()];
        for alpha in 1..=alpha_max {
            let rhs = recursion_rhs(t, &levels[alpha - 1])?;
            for (i, row) in rhs.iter().enumerate() {
                for j in 0..n {
                    for l in j + 1..n {
                        let w = &row[j].derivative(l) - &row[l].derivative(j);
                        if !w.is_zero() {
                            return Err(Error::NotCompatible {
                                alpha,
                                witness: format!("p={}, i={}, ({},{}): {}", p + 1, i + 1, j + 1, l + 1, w.format_with(names)),
                            });
                        }
                    }
                }
            }
            let comps = rhs.iter().map(|row| potential(row, names)).collect::<Result<Vec<_>>>()?;
            let x = Section::new(comps);
            // Re-substitute into the recursion.
            for (i, row) in rhs.iter().enumerate() {
                let bad: Vec<String> = (0..n)
                    .filter(|&j| x.component(i).derivative(j) != row[j])
                    .map(|j| format!("d_{} X^{}", names[j], i + 1))
                    .collect();
                report.record(
                    "recursion",
                    format!("X({},{}) component {}", p + 1, alpha, i + 1),
                    (!bad.is_empty()).then_some(bad),
                );
            }
            levels.push(x);
        }
        table.push(levels);
    }
    let mut flows = Vec::new();
    for (p, levels) in table.iter().enumerate() {
        for (alpha, x) in levels.iter().enumerate() {
            flows.push((format!("t({},{})", p + 1, alpha), flow_from_section(t, x)?));
        }
    }
    pairwise(&mut report, &flows)?;
    Ok(HierarchyData {
        flat_basis: flat_basis.to_vec(),
        table,
        report,
    })
}
