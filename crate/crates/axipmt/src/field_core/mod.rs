//! Half-plane points, scalar fields with derivative access, uniform grids,
//! regions, and quadrature — the numerical substrate for every other module.
//!
//! A [`ScalarField2D`] is a deterministic evaluator on the (ρ, z) half-plane
//! with one of two derivative modes:
//! - closed form: the field is a [`Jet2`]-valued expression, so first and
//!   second partials are exact to rounding;
//! - finite difference: central second-order stencils with step
//!   h = max(10⁻⁵, 10⁻⁴·ρ), switching to one-sided second-order stencils
//!   when the stencil would cross ρ = 0.

mod quadrature;
mod region;

pub use quadrature::{
    integrate_2d, integrate_boundary, integrate_polar, simpson, tanh_sinh, trapezoid_periodic,
    Resolution, SideSelector,
};
pub use region::Region;

use crate::error::{AxiError, Result};
use crate::jet::Jet2;
use std::io::Write as IoWrite;
use std::sync::Arc;

/// A point of the closed half-plane {ρ ≥ 0}.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HalfPlanePoint {
    pub rho: f64,
    pub z: f64,
}

impl HalfPlanePoint {
    /// Construct with the ρ ≥ 0 invariant enforced.
    pub fn new(rho: f64, z: f64) -> Result<Self> {
        if !(rho.is_finite() && z.is_finite()) {
            return Err(AxiError::Config(format!("non-finite point ({rho}, {z})")));
        }
        if rho < 0.0 {
            return Err(AxiError::OutOfDomain(format!("rho = {rho} < 0")));
        }
        Ok(HalfPlanePoint { rho, z })
    }

    /// Infallible constructor for points produced by interior arithmetic;
    /// debug-asserts the invariant.
    pub fn at(rho: f64, z: f64) -> Self {
        debug_assert!(rho >= 0.0, "rho = {rho} < 0");
        HalfPlanePoint { rho, z }
    }

    /// Euclidean distance to another half-plane point (same meridian).
    pub fn dist(self, o: HalfPlanePoint) -> f64 {
        ((self.rho - o.rho).powi(2) + (self.z - o.z).powi(2)).sqrt()
    }

    /// Spherical radius r = √(ρ² + z²).
    pub fn r(self) -> f64 {
        (self.rho * self.rho + self.z * self.z).sqrt()
    }
}

/// Which partial derivative to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialKind {
    Rho,
    Z,
    RhoRho,
    ZZ,
    RhoZ,
}

/// Derivative mode of a field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivMode {
    /// Exact jets from a closed-form expression.
    ClosedForm,
    /// Finite differences with the given step (None = local default rule).
    FiniteDifference { h: Option<f64> },
}

type JetFn = dyn Fn(Jet2, Jet2) -> Jet2 + Send + Sync;
type EvalFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

#[derive(Clone)]
enum FieldImpl {
    Closed(Arc<JetFn>),
    FiniteDiff { eval: Arc<EvalFn>, h: Option<f64> },
}

/// A scalar function on the half-plane with value and first/second
/// partial-derivative access.
#[derive(Clone)]
pub struct ScalarField2D {
    imp: FieldImpl,
    samples: Option<Arc<SampledField>>,
}

impl std::fmt::Debug for ScalarField2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mode = match &self.imp {
            FieldImpl::Closed(_) => "closed-form".to_string(),
            FieldImpl::FiniteDiff { h, .. } => format!("finite-difference(h={h:?})"),
        };
        write!(f, "ScalarField2D[{mode}]")
    }
}

impl ScalarField2D {
    /// A closed-form field from a jet-valued expression.
    pub fn closed_form<F>(f: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Jet2 + Send + Sync + 'static,
    {
        ScalarField2D { imp: FieldImpl::Closed(Arc::new(f)), samples: None }
    }

    /// The identically-zero field (closed form, exact zeros).
    pub fn zero() -> Self {
        Self::closed_form(|_, _| Jet2::cst(0.0))
    }

    /// A constant field.
    pub fn constant(c: f64) -> Self {
        Self::closed_form(move |_, _| Jet2::cst(c))
    }

    /// A finite-difference field from a plain evaluator; `h = None` selects
    /// the default local step rule.
    pub fn finite_difference<F>(f: F, h: Option<f64>) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField2D { imp: FieldImpl::FiniteDiff { eval: Arc::new(f), h }, samples: None }
    }

    /// Bilinear interpolation of grid samples, finite-difference derivatives.
    pub fn from_samples(samples: SampledField) -> Self {
        let arc = Arc::new(samples);
        let s = Arc::clone(&arc);
        let spacing = s.grid.spacing();
        let h = Some(0.5 * spacing.0.min(spacing.1));
        ScalarField2D {
            imp: FieldImpl::FiniteDiff { eval: Arc::new(move |r, z| s.bilinear(r, z)), h },
            samples: Some(arc),
        }
    }

    /// Pointwise sum of two fields (closed form iff both are).
    pub fn sum(a: &ScalarField2D, b: &ScalarField2D) -> ScalarField2D {
        match (&a.imp, &b.imp) {
            (FieldImpl::Closed(fa), FieldImpl::Closed(fb)) => {
                let (fa, fb) = (Arc::clone(fa), Arc::clone(fb));
                ScalarField2D::closed_form(move |r, z| fa(r, z) + fb(r, z))
            }
            _ => {
                let (ca, cb) = (a.clone(), b.clone());
                let h = match (&a.imp, &b.imp) {
                    (FieldImpl::FiniteDiff { h, .. }, _) => *h,
                    (_, FieldImpl::FiniteDiff { h, .. }) => *h,
                    _ => None,
                };
                ScalarField2D::finite_difference(
                    move |r, z| ca.eval_raw(r, z) + cb.eval_raw(r, z),
                    h,
                )
            }
        }
    }

    pub fn deriv_mode(&self) -> DerivMode {
        match &self.imp {
            FieldImpl::Closed(_) => DerivMode::ClosedForm,
            FieldImpl::FiniteDiff { h, .. } => DerivMode::FiniteDifference { h: *h },
        }
    }

    /// A new field g(ρ, z, f(ρ, z)) built by post-composing this field with
    /// a jet expression. A closed-form field yields a closed-form composite
    /// (exact derivatives through the chain rule); a finite-difference field
    /// yields a finite-difference composite whose stencils sample the whole
    /// composition, preserving its own step choice.
    pub fn derived<G>(&self, g: G) -> ScalarField2D
    where
        G: Fn(Jet2, Jet2, Jet2) -> Jet2 + Send + Sync + 'static,
    {
        match &self.imp {
            FieldImpl::Closed(f) => {
                let f = Arc::clone(f);
                ScalarField2D::closed_form(move |r, z| g(r, z, f(r, z)))
            }
            FieldImpl::FiniteDiff { eval, h } => {
                let eval = Arc::clone(eval);
                ScalarField2D::finite_difference(
                    move |r, z| g(Jet2::cst(r), Jet2::cst(z), Jet2::cst(eval(r, z))).v,
                    *h,
                )
            }
        }
    }

    /// Attach a precomputed sample grid (kept alongside, not consulted for
    /// evaluation unless the field was built with [`Self::from_samples`]).
    pub fn with_samples(mut self, samples: SampledField) -> Self {
        self.samples = Some(Arc::new(samples));
        self
    }

    pub fn samples(&self) -> Option<&SampledField> {
        self.samples.as_deref()
    }

    /// Raw value at (ρ, z).
    pub fn eval_raw(&self, rho: f64, z: f64) -> f64 {
        match &self.imp {
            FieldImpl::Closed(f) => f(Jet2::cst(rho), Jet2::cst(z)).v,
            FieldImpl::FiniteDiff { eval, .. } => eval(rho, z),
        }
    }

    /// Value at a half-plane point.
    pub fn eval(&self, p: HalfPlanePoint) -> f64 {
        self.eval_raw(p.rho, p.z)
    }

    /// Local finite-difference step at ρ: h = max(10⁻⁵, 10⁻⁴·ρ) unless the
    /// field carries an explicit step.
    fn fd_step(&self, rho: f64) -> f64 {
        match &self.imp {
            FieldImpl::FiniteDiff { h: Some(h), .. } => *h,
            _ => (1e-4 * rho).max(1e-5),
        }
    }

    /// Full second-order jet at a point. Closed-form fields return exact
    /// jets; finite-difference fields assemble stencils (one-sided past
    /// ρ = 0).
    pub fn jet_at(&self, p: HalfPlanePoint) -> Jet2 {
        match &self.imp {
            FieldImpl::Closed(f) => f(Jet2::var_rho(p.rho), Jet2::var_z(p.z)),
            FieldImpl::FiniteDiff { eval, .. } => {
                let (rho, z) = (p.rho, p.z);
                let h = self.fd_step(rho);
                let f = |r: f64, zz: f64| eval(r, zz);
                let v = f(rho, z);
                let one_sided = rho - h < 0.0;
                let (dr, drr, drz) = if one_sided {
                    let dr = (-3.0 * v + 4.0 * f(rho + h, z) - f(rho + 2.0 * h, z)) / (2.0 * h);
                    let drr = (2.0 * v - 5.0 * f(rho + h, z) + 4.0 * f(rho + 2.0 * h, z)
                        - f(rho + 3.0 * h, z))
                        / (h * h);
                    let dzp = (-3.0 * f(rho, z + h) + 4.0 * f(rho + h, z + h)
                        - f(rho + 2.0 * h, z + h))
                        / (2.0 * h);
                    let dzm = (-3.0 * f(rho, z - h) + 4.0 * f(rho + h, z - h)
                        - f(rho + 2.0 * h, z - h))
                        / (2.0 * h);
                    (dr, drr, (dzp - dzm) / (2.0 * h))
                } else {
                    let dr = (f(rho + h, z) - f(rho - h, z)) / (2.0 * h);
                    let drr = (f(rho + h, z) - 2.0 * v + f(rho - h, z)) / (h * h);
                    let drz = (f(rho + h, z + h) - f(rho + h, z - h) - f(rho - h, z + h)
                        + f(rho - h, z - h))
                        / (4.0 * h * h);
                    (dr, drr, drz)
                };
                let dz = (f(rho, z + h) - f(rho, z - h)) / (2.0 * h);
                let dzz = (f(rho, z + h) - 2.0 * v + f(rho, z - h)) / (h * h);
                Jet2 { v, dr, dz, drr, drz, dzz }
            }
        }
    }

    /// The requested partial derivative.
    pub fn partial(&self, p: HalfPlanePoint, which: PartialKind) -> Result<f64> {
        if p.rho < 0.0 {
            return Err(AxiError::OutOfDomain(format!("rho = {} < 0", p.rho)));
        }
        let j = self.jet_at(p);
        let v = match which {
            PartialKind::Rho => j.dr,
            PartialKind::Z => j.dz,
            PartialKind::RhoRho => j.drr,
            PartialKind::ZZ => j.dzz,
            PartialKind::RhoZ => j.drz,
        };
        if !v.is_finite() {
            return Err(AxiError::Numeric(format!(
                "non-finite {which:?} derivative at ({}, {})",
                p.rho, p.z
            )));
        }
        Ok(v)
    }

    /// Sample the field on a grid.
    pub fn sample(&self, grid: &Grid2D) -> SampledField {
        let mut values = Vec::with_capacity(grid.n_rho * grid.n_z);
        for j in 0..grid.n_z {
            for i in 0..grid.n_rho {
                let p = grid.node(i, j);
                values.push(self.eval(p));
            }
        }
        SampledField { grid: grid.clone(), values }
    }
}

/// Uniform rectangular grid on the half-plane.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid2D {
    pub rho_min: f64,
    pub rho_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub n_rho: usize,
    pub n_z: usize,
}

impl Grid2D {
    /// Grid staying strictly off the axis (ρ_min > 0).
    pub fn new(
        rho_min: f64,
        rho_max: f64,
        z_min: f64,
        z_max: f64,
        n_rho: usize,
        n_z: usize,
    ) -> Result<Self> {
        if rho_min <= 0.0 {
            return Err(AxiError::Config(format!(
                "grid rho_min = {rho_min} must be > 0 (use axis_regular for axis-touching grids)"
            )));
        }
        Self::axis_regular(rho_min, rho_max, z_min, z_max, n_rho, n_z)
    }

    /// Grid allowed to touch ρ = 0 for explicitly axis-regular fields.
    pub fn axis_regular(
        rho_min: f64,
        rho_max: f64,
        z_min: f64,
        z_max: f64,
        n_rho: usize,
        n_z: usize,
    ) -> Result<Self> {
        if !(rho_min.is_finite() && rho_max.is_finite() && z_min.is_finite() && z_max.is_finite()) {
            return Err(AxiError::Config("non-finite grid bounds".into()));
        }
        if rho_min < 0.0 || rho_max <= rho_min || z_max <= z_min {
            return Err(AxiError::Config(format!(
                "bad grid bounds rho [{rho_min}, {rho_max}], z [{z_min}, {z_max}]"
            )));
        }
        if n_rho < 2 || n_z < 2 {
            return Err(AxiError::Config(format!("grid needs n >= 2, got {n_rho} x {n_z}")));
        }
        Ok(Grid2D { rho_min, rho_max, z_min, z_max, n_rho, n_z })
    }

    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.rho_max - self.rho_min) / (self.n_rho - 1) as f64,
            (self.z_max - self.z_min) / (self.n_z - 1) as f64,
        )
    }

    pub fn node(&self, i: usize, j: usize) -> HalfPlanePoint {
        let (dr, dz) = self.spacing();
        HalfPlanePoint::at(self.rho_min + dr * i as f64, self.z_min + dz * j as f64)
    }
}

/// Grid samples of a field; CSV row-major with z as the slow index.
#[derive(Clone, Debug)]
pub struct SampledField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n_rho + i]
    }

    /// Bilinear interpolation; clamps to the grid box edge within one cell
    /// of rounding, errors out by panic-free saturation otherwise.
    pub fn bilinear(&self, rho: f64, z: f64) -> f64 {
        let g = &self.grid;
        let (dr, dz) = g.spacing();
        let fx = ((rho - g.rho_min) / dr).clamp(0.0, (g.n_rho - 1) as f64);
        let fy = ((z - g.z_min) / dz).clamp(0.0, (g.n_z - 1) as f64);
        let i = (fx.floor() as usize).min(g.n_rho - 2);
        let j = (fy.floor() as usize).min(g.n_z - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let v00 = self.value(i, j);
        let v10 = self.value(i + 1, j);
        let v01 = self.value(i, j + 1);
        let v11 = self.value(i + 1, j + 1);
        v00 * (1.0 - tx) * (1.0 - ty)
            + v10 * tx * (1.0 - ty)
            + v01 * (1.0 - tx) * ty
            + v11 * tx * ty
    }

    /// CSV dump: header `rho,z,value`, rows with z varying slowest.
    pub fn write_csv<W: IoWrite>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "rho,z,value")?;
        for j in 0..self.grid.n_z {
            for i in 0..self.grid.n_rho {
                let p = self.grid.node(i, j);
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_float(p.rho),
                    fmt_float(p.z),
                    fmt_float(self.value(i, j))
                )?;
            }
        }
        Ok(())
    }
}

/// Fixed decimal-scientific float formatting used in every CSV artifact so
/// that repeated runs are byte-identical.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}
