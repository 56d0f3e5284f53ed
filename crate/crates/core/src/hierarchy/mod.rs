//! Hydrodynamic-type flows `u^i_t = V^i_j(u) u^j_x` built from sections of a
//! tangent presentation, their commutators in second-order jets, and the
//! principal hierarchy recursion.

mod flows;
mod jet;
mod principal;

pub use flows::{check_tangent, eventual_identity_flows, flow_commutator, flow_from_section, flows_commute, HydroFlow};
pub use jet::{total_x, JetPoly};
pub use principal::{check_flat_condition, principal_hierarchy, Connection, HierarchyData};
