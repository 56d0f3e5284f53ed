use rayon::prelude::*;

use crate::algebroid::{AlgebroidPresentation, Section};
use crate::duality::is_pseudo_eventual_identity;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{RatFunc, VectorField};

use super::jet::{total_x, JetPoly};

/// `u^i_t = V^i_j(u) u^j_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HydroFlow {
    v: Vec<Vec<RatFunc>>,
    names: Vec<String>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("u{i}")).collect()
}

impl HydroFlow {
    pub fn new(v: Vec<Vec<RatFunc>>) -> Result<Self> {
        let n = v.len();
        Self::with_names(v, default_names(n))
    }

    pub fn with_names(v: Vec<Vec<RatFunc>>, names: Vec<String>) -> Result<Self> {
        let n = v.len();
        if v.iter().any(|row| row.len() != n) {
            return Err(Error::Shape("flow matrix must be square".into()));
        }
        if v.iter().flatten().any(|f| f.nvars() != n) || names.len() != n {
            return Err(Error::Shape("flow coefficients must live on an n-dimensional chart".into()));
        }
        Ok(HydroFlow { v, names })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn matrix(&self) -> &[Vec<RatFunc>] {
        &self.v
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `V^i_j u^j_x`.
    pub fn rhs(&self, i: usize) -> JetPoly {
        let n = self.dim();
        let mut out = JetPoly::zero(n);
        for (j, f) in self.v[i].iter().enumerate() {
            out = &out + &JetPoly::ux(n, j).scale(f);
        }
        out
    }

    /// `D_t P` along this flow for `P` of first order.
    pub fn derive(&self, p: &JetPoly) -> Result<JetPoly> {
        if p.involves_second_order() {
            return Err(Error::JetOrderOverflow);
        }
        let n = self.dim();
        let mut out = JetPoly::zero(n);
        for j in 0..n {
            let rhs = self.rhs(j);
            out = &out + &(&p.partial_u(j) * &rhs);
            let dp = p.partial_ux(j);
            if !dp.is_zero() {
                out = &out + &(&dp * &total_x(&rhs)?);
            }
        }
        Ok(out)
    }
}

/// `D_t D_τ u^i − D_τ D_t u^i` for every component.
pub fn flow_commutator(f: &HydroFlow, g: &HydroFlow) -> Result<Vec<JetPoly>> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    (0..f.dim())
        .map(|i| Ok(&f.derive(&g.rhs(i))? - &g.derive(&f.rhs(i))?))
        .collect()
}

pub fn flows_commute(f: &HydroFlow, g: &HydroFlow) -> Result<Report> {
    let mut report = Report::new("flow commutator");
    record_commutator(&mut report, "", f, g)?;
    Ok(report)
}

fn record_commutator(report: &mut Report, tag: &str, f: &HydroFlow, g: &HydroFlow) -> Result<()> {
    for (i, r) in flow_commutator(f, g)?.iter().enumerate() {
        let inst = format!("{tag}{}", f.names()[i]);
        report.record("flows-commute", inst, (!r.is_zero()).then(|| vec![r.format_with(f.names())]));
    }
    Ok(())
}

/// Whether the presentation is a tangent bundle with the identity anchor.
pub fn check_tangent(t: &AlgebroidPresentation) -> Result<()> {
    let n = t.nvars();
    if t.rank() != n {
        return Err(Error::NotTangent(format!("rank {} over {} variables", t.rank(), n)));
    }
    let anchor = t.anchor().map_err(|_| Error::NotTangent("no anchor".into()))?;
    if anchor.iter().enumerate().any(|(i, v)| *v != VectorField::coordinate(n, i)) {
        return Err(Error::NotTangent("anchor is not the identity".into()));
    }
    t.product()?;
    Ok(())
}

/// `V^i_j = Σ_k c^i_{jk} X^k`.
pub fn flow_from_section(t: &AlgebroidPresentation, x: &Section) -> Result<HydroFlow> {
    check_tangent(t)?;
    let n = t.rank();
    if x.rank() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.rank(),
        });
    }
    let c = t.product()?;
    let v = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(RatFunc::zero(n), |acc, k| &acc + &(c.coeff(i, j, k) * x.component(k)))
                })
                .collect()
        })
        .collect();
    HydroFlow::with_names(v, t.base_vars().to_vec())
}

/// Flows of `ℰ1`, `ℰ2` and `ℰ1·ℰ2` commute pairwise.
pub fn eventual_identity_flows(t: &AlgebroidPresentation, e1: &Section, e2: &Section) -> Result<Report> {
    for e in [e1, e2] {
        let r = is_pseudo_eventual_identity(t, e)?;
        if !r.overall() {
            return Err(Error::NotEventual(Box::new(r)));
        }
    }
    let prod = t.multiply(e1, e2)?;
    let flows = [
        ("E1", flow_from_section(t, e1)?),
        ("E2", flow_from_section(t, e2)?),
        ("E1*E2", flow_from_section(t, &prod)?),
    ];
    let mut report = Report::new(format!("{} eventual identity flows", t.name()));
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let tag = format!("[{}, {}] ", flows[a].0, flows[b].0);
        record_commutator(&mut report, &tag, &flows[a].1, &flows[b].1)?;
    }
    Ok(report)
}

/// All pairs `i < j` of labelled flows, checked in parallel.
pub(crate) fn pairwise(report: &mut Report, flows: &[(String, HydroFlow)]) -> Result<()> {
    let pairs: Vec<(usize, usize)> = (0..flows.len()).flat_map(|i| (i + 1..flows.len()).map(move |j| (i, j))).collect();
    let reports: Vec<Result<Report>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut r = Report::new("");
            let tag = format!("[{}, {}] ", flows[i].0, flows[j].0);
            record_commutator(&mut r, &tag, &flows[i].1, &flows[j].1)?;
            Ok(r)
        })
        .collect();
    for r in reports {
        report.absorb(r?);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::semisimple;

    #[test]
    fn designated_pair_does_not_commute() {
        let n = 2;
        let u = |i| RatFunc::var(n, i);
        let z = || RatFunc::zero(n);
        let f = HydroFlow::new(vec![vec![u(1), z()], vec![z(), z()]]).unwrap();
        let g = HydroFlow::new(vec![vec![u(0), z()], vec![z(), z()]]).unwrap();
        let res = flow_commutator(&f, &g).unwrap();
        let want = &(&JetPoly::from_ratfunc(u(0)) * &JetPoly::ux(n, 0)) * &JetPoly::ux(n, 1);
        assert_eq!(res[0], want);
        assert!(res[1].is_zero());
        assert!(!flows_commute(&f, &g).unwrap().overall());
        assert!(flows_commute(&f, &f).unwrap().overall());
    }

    #[test]
    fn unit_and_euler_flows() {
        let t = semisimple(2).unwrap();
        let e = t.identity().unwrap().clone();
        let fe = flow_from_section(&t, &e).unwrap();
        assert_eq!(fe.matrix()[0][0], RatFunc::one(2));
        assert!(fe.matrix()[0][1].is_zero());
        let euler = Section::new(vec![RatFunc::var(2, 0), RatFunc::var(2, 1)]);
        let fu = flow_from_section(&t, &euler).unwrap();
        assert_eq!(fu.matrix()[1][1], RatFunc::var(2, 1));
        assert!(flows_commute(&fe, &fu).unwrap().overall());
        assert!(eventual_identity_flows(&t, &euler, &e).unwrap().overall());
    }
}
