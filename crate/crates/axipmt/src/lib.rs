// Validators deliberately write `!(x > 0.0)` so that NaN parameters fail
// the check; rewriting via partial_cmp would obscure that intent.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical machinery for axisymmetric, asymptotically flat Riemannian
//! 3-metrics written in the cylindrical gauge
//!
//! ```text
//!   g = e^{2α−2u}(dρ² + dz²) + ρ² e^{−2u} (dφ + B dρ + A dz)²
//! ```
//!
//! on the half-plane {(ρ, z) : ρ ≥ 0}, together with the planar potential
//! theory (reflection kernels, representation formulas, Riesz and
//! Moser–Trudinger-type inequalities) used to relate smallness of the ADM
//! mass to flatness of the metric.
//!
//! Module map:
//! - [`field_core`] — half-plane points, scalar fields with derivative
//!   access, grids, regions, and the quadrature substrate (composite
//!   Simpson, tanh-sinh for endpoint singularities, polar decompositions
//!   about singular points).
//! - [`metric_model`] — metric assembly, Brill's scalar-curvature formula,
//!   the ρ-coordinate identity residual, mean curvature of ρ-level sets.
//! - [`metric_families`] — Kerr-Newman in the Weyl chart via prolate
//!   spheroidal coordinates, geometrostatic (conformally flat multi-hole)
//!   data, flat space, compact perturbations.
//! - [`geometry_functionals`] — ADM flux mass, Brill mass, volume, area,
//!   segment length, Sobolev and Hölder norms, falloff checks.
//! - [`conditions`] — radial monotonicity, area-enlarging, sub-inverse-mean-
//!   curvature-flow checks, minimal coordinate spheres, the Penrose-derived
//!   location bound.
//! - [`potential_theory`] — Γ/H_N/H_D kernels, Green and gradient
//!   representation formulas, Riesz potential bounds, log-moment and
//!   Moser–Trudinger-like inequality verifiers with seeded batteries.
//! - [`stability_harness`] — mass→0 parameter sweeps and rate fitting.

pub mod error;
pub mod jet;

pub mod field_core;

pub mod conditions;
pub mod geometry_functionals;
pub mod metric_families;
pub mod metric_model;
pub mod potential_theory;
pub mod stability_harness;

pub use conditions::{ConditionGrid, ConditionVerdict};
pub use error::{AxiError, Result};
pub use field_core::{
    Grid2D, HalfPlanePoint, PartialKind, Region, Resolution, SampledField, ScalarField2D,
};
pub use geometry_functionals::{
    ComponentFrame, CylPoint3, FalloffReport, FunctionalRecord, GeneratingCurve, HolderTarget,
    MassMethod, MassResult, SobolevTarget,
};
pub use jet::Jet2;
pub use metric_model::{AsymConstants, AxiMetric, MetricMatrix};
pub use potential_theory::{InequalityCheck, Kernel, MtVariant};
pub use stability_harness::{DeclaredCondition, SweepMember, SweepReport, SweepRow, SweepSpec};
