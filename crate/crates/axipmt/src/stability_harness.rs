//! Mass→0 sweeps: drive a family schedule of strictly decreasing ADM mass
//! through the full measurement stack — flux/Brill masses, W^{1,p} norms,
//! volume/area/length deviations against the flat baseline, condition
//! margins, Hölder estimates — and fit log-log convergence rates.
//!
//! The underlying statements are ε–δ existence claims without published
//! rates, so the harness reports monotone decrease and fitted slopes; it
//! never asserts a rate of its own.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::conditions::{area_enlarging, radial_monotonicity, ConditionGrid};
use crate::error::{AxiError, Result};
use crate::field_core::{fmt_float, HalfPlanePoint, Region, Resolution};
use crate::geometry_functionals::{
    adm_flux_mass, area, brill_mass, falloff_check, holder_norm_estimate, segment_length,
    sobolev_norm, volume, ComponentFrame, CylPoint3, GeneratingCurve, HolderTarget, SobolevTarget,
};
use crate::metric_families::{
    flat_metric, geometrostatic_metric, kerr_newman_metric, GeometrostaticParams, KerrNewmanParams,
    Puncture,
};
use crate::metric_model::AxiMetric;

/// Which decay condition every schedule member must satisfy before the sweep
/// proceeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeclaredCondition {
    RadialMonotone,
    AreaEnlarging,
}

/// One family instance in a schedule.
#[derive(Clone, Debug)]
pub struct SweepMember {
    pub label: String,
    pub metric: AxiMetric,
    /// Mass parameter of the schedule (the family's nominal ADM mass).
    pub declared_mass: f64,
}

/// A full sweep plan: schedule, gating condition, measurement regions
/// (fixed off-axis conventions parameterized by σ), exponents, and
/// resolutions.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub name: String,
    pub members: Vec<SweepMember>,
    pub condition: DeclaredCondition,
    /// Axis offset of the measurement regions; must be positive.
    pub sigma: f64,
    /// Sobolev exponent p ∈ [1, 2).
    pub p: f64,
    pub flux_radii: Vec<f64>,
    pub brill_radius: f64,
    pub falloff_radii: Vec<f64>,
    pub holder_beta: f64,
    pub resolution: Resolution,
    pub seed: u64,
}

impl SweepSpec {
    /// Kerr–Newman schedule at fixed ratios a/m and e/m, so the family stays
    /// uniformly inside m² > a² + e² and the asymptotic constants scale
    /// together.
    pub fn kerr_newman(
        masses: &[f64],
        a_over_m: f64,
        e_over_m: f64,
        resolution: Resolution,
    ) -> Result<SweepSpec> {
        let mut members = Vec::with_capacity(masses.len());
        for &m in masses {
            let params = KerrNewmanParams::new(m, a_over_m * m, e_over_m * m)?;
            members.push(SweepMember {
                label: format!("kerr-newman(m={m})"),
                metric: kerr_newman_metric(&params)?,
                declared_mass: m,
            });
        }
        let spec = SweepSpec {
            name: "kerr-newman".into(),
            members,
            condition: DeclaredCondition::RadialMonotone,
            resolution,
            ..SweepSpec::defaults()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Two equal punctures at z = ±1 with all four charges scaled by s;
    /// total mass 4s.
    pub fn geometrostatic(scales: &[f64], resolution: Resolution) -> Result<SweepSpec> {
        let mut members = Vec::with_capacity(scales.len());
        for &s in scales {
            let params = GeometrostaticParams::new(vec![
                Puncture { z: -1.0, a: s, b: s },
                Puncture { z: 1.0, a: s, b: s },
            ])?;
            members.push(SweepMember {
                label: format!("geometrostatic(a=b={s})"),
                metric: geometrostatic_metric(&params)?,
                declared_mass: params.adm_mass(),
            });
        }
        let spec = SweepSpec {
            name: "geometrostatic".into(),
            members,
            condition: DeclaredCondition::AreaEnlarging,
            resolution,
            ..SweepSpec::defaults()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The flat singleton: every deviation column must come out exactly 0.
    pub fn flat_singleton(resolution: Resolution) -> SweepSpec {
        SweepSpec {
            name: "flat".into(),
            members: vec![SweepMember {
                label: "flat".into(),
                metric: flat_metric(),
                declared_mass: 0.0,
            }],
            condition: DeclaredCondition::RadialMonotone,
            resolution,
            ..SweepSpec::defaults()
        }
    }

    fn defaults() -> SweepSpec {
        SweepSpec {
            name: String::new(),
            members: Vec::new(),
            condition: DeclaredCondition::RadialMonotone,
            sigma: 0.1,
            p: 1.0,
            flux_radii: vec![50.0, 100.0, 200.0],
            brill_radius: 200.0,
            falloff_radii: vec![20.0, 40.0, 80.0],
            holder_beta: 0.5,
            resolution: Resolution::default(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(AxiError::Config("sweep schedule is empty".into()));
        }
        for w in self.members.windows(2) {
            if !(w[1].declared_mass < w[0].declared_mass) {
                return Err(AxiError::Config(format!(
                    "schedule masses must strictly decrease: {} -> {}",
                    w[0].declared_mass, w[1].declared_mass
                )));
            }
        }
        if !(self.sigma > 0.0) {
            return Err(AxiError::Config(format!(
                "measurement regions must avoid the axis: sigma = {} must be > 0",
                self.sigma
            )));
        }
        if !(1.0..2.0).contains(&self.p) {
            return Err(AxiError::Config(format!(
                "Sobolev exponent p = {} outside [1, 2)",
                self.p
            )));
        }
        if !(0.0 < self.holder_beta && self.holder_beta < 1.0) {
            return Err(AxiError::Config(format!(
                "Hölder exponent β = {} outside (0, 1)",
                self.holder_beta
            )));
        }
        if self.flux_radii.is_empty() {
            return Err(AxiError::Config("flux radii list is empty".into()));
        }
        Ok(())
    }
}

/// One row of the sweep report. Deviations are absolute differences against
/// the flat baseline computed with identical regions and resolutions.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepRow {
    pub label: String,
    pub mass: f64,
    pub w1p_g: f64,
    pub w1p_q: f64,
    pub vol_dev: f64,
    pub area_dev: f64,
    pub len_dev: f64,
    pub rm_margin: f64,
    pub ae_margin: f64,
    pub holder_beta: f64,
    pub flux_mass: f64,
    pub brill_mass: f64,
}

/// Sweep outcome: ordered rows plus fitted log-log slopes for the columns
/// where a fit is defined.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepReport {
    pub name: String,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub slopes: BTreeMap<String, f64>,
}

impl SweepReport {
    /// CSV with the fixed column set; floats in fixed scientific notation so
    /// regeneration is byte-identical.
    pub fn csv(&self) -> String {
        let mut out = String::from(
            "mass,w1p_g,w1p_q,vol_dev,area_dev,len_dev,rm_margin,ae_margin,holder_beta,flux_mass,brill_mass\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                fmt_float(r.mass),
                fmt_float(r.w1p_g),
                fmt_float(r.w1p_q),
                fmt_float(r.vol_dev),
                fmt_float(r.area_dev),
                fmt_float(r.len_dev),
                fmt_float(r.rm_margin),
                fmt_float(r.ae_margin),
                fmt_float(r.holder_beta),
                fmt_float(r.flux_mass),
                fmt_float(r.brill_mass),
            ));
        }
        out
    }

    /// JSON summary: sweep identity and fitted slopes.
    pub fn json_summary(&self) -> Result<String> {
        #[derive(serde::Serialize)]
        struct Summary<'a> {
            name: &'a str,
            seed: u64,
            rows: usize,
            slopes: &'a BTreeMap<String, f64>,
        }
        serde_json::to_string_pretty(&Summary {
            name: &self.name,
            seed: self.seed,
            rows: self.rows.len(),
            slopes: &self.slopes,
        })
        .map_err(|e| AxiError::Config(format!("summary serialization failed: {e}")))
    }
}

fn member_err(label: &str, stage: &str, e: AxiError) -> AxiError {
    AxiError::Precondition(format!("sweep member '{label}' failed at {stage}: {e}"))
}

/// Run the sweep: audit falloff and the declared condition on every member,
/// then measure each row (rows in parallel, assembled in schedule order).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let res = &spec.resolution;
    let solid = Region::cylinder(1.0, 2.0, spec.sigma);
    let planar = Region::rectangle(1.0, 2.0, spec.sigma);
    let band = GeneratingCurve::Segment {
        p: HalfPlanePoint::at(2.0, 0.0),
        q: HalfPlanePoint::at(2.0, 1.0),
    };
    let chord =
        (CylPoint3 { rho: 1.2, z: -0.5, phi: 0.0 }, CylPoint3 { rho: 2.5, z: 0.8, phi: 0.9 });
    let annulus = Region::Annulus { r0: 2.0, r1: 4.0 };
    let brill_region = Region::ball(0.0, 0.0, spec.brill_radius);

    let flat = flat_metric();
    let base_vol = volume(&flat, &solid, res)?;
    let base_area = area(&flat, &band, res)?;
    let base_len = segment_length(&flat, chord.0, chord.1, res)?;

    let outcomes: Vec<Result<SweepRow>> = spec
        .members
        .par_iter()
        .map(|mem| -> Result<SweepRow> {
            let label = mem.label.as_str();
            let fall = falloff_check(&mem.metric, &spec.falloff_radii, res)
                .map_err(|e| member_err(label, "falloff audit", e))?;
            if !fall.pass {
                return Err(AxiError::Precondition(format!(
                    "sweep member '{label}' violates its declared falloff: estimated c = {:.6e} > declared {:.6e}",
                    fall.c_estimate, fall.declared_c
                )));
            }
            let grid = ConditionGrid::standard(
                &mem.metric,
                (res.n_rho / 2).max(32),
                (res.n_z / 2).max(32),
            );
            let rm = radial_monotonicity(&mem.metric, None, &grid)
                .map_err(|e| member_err(label, "radial-monotonicity scan", e))?;
            let ae = area_enlarging(&mem.metric, None, &grid)
                .map_err(|e| member_err(label, "area-enlarging scan", e))?;
            let declared_holds = match spec.condition {
                DeclaredCondition::RadialMonotone => rm.holds,
                DeclaredCondition::AreaEnlarging => ae.holds,
            };
            if !declared_holds {
                return Err(AxiError::Precondition(format!(
                    "sweep member '{label}' fails the declared {:?} condition (margin {:.6e})",
                    spec.condition,
                    match spec.condition {
                        DeclaredCondition::RadialMonotone => rm.margin,
                        DeclaredCondition::AreaEnlarging => ae.margin,
                    }
                )));
            }
            let flux = adm_flux_mass(&mem.metric, &spec.flux_radii, res)
                .map_err(|e| member_err(label, "flux mass", e))?;
            let brill = brill_mass(&mem.metric, &brill_region, res)
                .map_err(|e| member_err(label, "brill mass", e))?;
            let w1p_g = sobolev_norm(
                &mem.metric,
                &solid,
                spec.p,
                SobolevTarget::GMinusDelta,
                ComponentFrame::Orthonormal,
                res,
            )
            .map_err(|e| member_err(label, "W1p(g−δ)", e))?;
            let w1p_q = sobolev_norm(
                &mem.metric,
                &planar,
                spec.p,
                SobolevTarget::QMinusDelta,
                ComponentFrame::Orthonormal,
                res,
            )
            .map_err(|e| member_err(label, "W1p(q−δ)", e))?;
            let vol = volume(&mem.metric, &solid, res)
                .map_err(|e| member_err(label, "volume", e))?;
            let ar = area(&mem.metric, &band, res).map_err(|e| member_err(label, "area", e))?;
            let len = segment_length(&mem.metric, chord.0, chord.1, res)
                .map_err(|e| member_err(label, "segment length", e))?;
            let holder = holder_norm_estimate(
                &mem.metric,
                &annulus,
                spec.holder_beta,
                HolderTarget::GMinusDelta,
                res.n_angular,
            )
            .map_err(|e| member_err(label, "Hölder estimate", e))?;
            let row = SweepRow {
                label: mem.label.clone(),
                mass: mem.declared_mass,
                w1p_g,
                w1p_q,
                vol_dev: (vol - base_vol).abs(),
                area_dev: (ar - base_area).abs(),
                len_dev: (len - base_len).abs(),
                rm_margin: rm.margin,
                ae_margin: ae.margin,
                holder_beta: holder,
                flux_mass: flux.value,
                brill_mass: brill.value,
            };
            let finite = [
                row.mass, row.w1p_g, row.w1p_q, row.vol_dev, row.area_dev, row.len_dev,
                row.rm_margin, row.ae_margin, row.holder_beta, row.flux_mass, row.brill_mass,
            ]
            .iter()
            .all(|v| v.is_finite());
            if !finite {
                return Err(AxiError::Numeric(format!(
                    "sweep member '{label}' produced a non-finite entry: {row:?}"
                )));
            }
            Ok(row)
        })
        .collect();

    // surface the first failing member in schedule order
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        rows.push(outcome?);
    }
    for w in rows.windows(2) {
        if !(w[1].flux_mass < w[0].flux_mass) {
            return Err(AxiError::Numeric(format!(
                "computed flux mass fails to decrease along the schedule: {} ({}) -> {} ({})",
                w[0].flux_mass, w[0].label, w[1].flux_mass, w[1].label
            )));
        }
    }

    let mut report =
        SweepReport { name: spec.name.clone(), seed: spec.seed, rows, slopes: BTreeMap::new() };
    for column in ["w1p_g", "w1p_q", "vol_dev", "area_dev", "len_dev", "holder_beta"] {
        if let Ok(slope) = fit_rate(&report, column) {
            report.slopes.insert(column.to_string(), slope);
        }
    }
    Ok(report)
}

fn column_value(row: &SweepRow, column: &str) -> Option<f64> {
    Some(match column {
        "w1p_g" => row.w1p_g,
        "w1p_q" => row.w1p_q,
        "vol_dev" => row.vol_dev,
        "area_dev" => row.area_dev,
        "len_dev" => row.len_dev,
        "rm_margin" => row.rm_margin,
        "ae_margin" => row.ae_margin,
        "holder_beta" => row.holder_beta,
        "flux_mass" => row.flux_mass,
        "brill_mass" => row.brill_mass,
        _ => return None,
    })
}

/// Least-squares slope of log(column) against log(mass); positive slope
/// means the column decays as the mass does.
pub fn fit_rate(report: &SweepReport, column: &str) -> Result<f64> {
    if report.rows.len() < 3 {
        return Err(AxiError::Precondition(format!(
            "rate fit needs at least 3 rows, got {}",
            report.rows.len()
        )));
    }
    let mut xs = Vec::with_capacity(report.rows.len());
    let mut ys = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        let v = column_value(row, column)
            .ok_or_else(|| AxiError::Config(format!("unknown sweep column '{column}'")))?;
        if !(v > 0.0 && row.mass > 0.0) {
            return Err(AxiError::Precondition(format!(
                "rate fit needs positive values: column '{column}' has {v} at mass {}",
                row.mass
            )));
        }
        xs.push(row.mass.ln());
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    if sxx <= 0.0 {
        return Err(AxiError::Precondition("rate fit needs at least two distinct masses".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_families::{perturb, BumpSpec, BumpTarget};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn synthetic_report(values: &[f64]) -> SweepReport {
        let masses = [1.0, 0.5, 0.25, 0.125];
        let rows = masses
            .iter()
            .zip(values)
            .map(|(&m, &v)| SweepRow {
                label: format!("synthetic(m={m})"),
                mass: m,
                w1p_g: v,
                w1p_q: v,
                vol_dev: v,
                area_dev: v,
                len_dev: v,
                rm_margin: 0.0,
                ae_margin: 0.0,
                holder_beta: v,
                flux_mass: m,
                brill_mass: m,
            })
            .collect();
        SweepReport { name: "synthetic".into(), seed: 0, rows, slopes: BTreeMap::new() }
    }

    #[test]
    fn fit_rate_recovers_synthetic_slopes() {
        let linear = synthetic_report(&[0.7, 0.35, 0.175, 0.0875]);
        assert_abs_diff_eq!(fit_rate(&linear, "w1p_g").unwrap(), 1.0, epsilon = 1e-6);
        let sqrt = synthetic_report(&[1.0, 0.5f64.sqrt(), 0.5, 0.125f64.sqrt()]);
        assert_abs_diff_eq!(fit_rate(&sqrt, "vol_dev").unwrap(), 0.5, epsilon = 1e-6);
    }

    #[test]
    fn fit_rate_rejects_bad_inputs() {
        let mut short = synthetic_report(&[1.0, 0.5, 0.25, 0.125]);
        short.rows.truncate(2);
        assert!(fit_rate(&short, "w1p_g").is_err());
        let zeroed = synthetic_report(&[1.0, 0.0, 0.25, 0.125]);
        assert!(fit_rate(&zeroed, "w1p_g").is_err());
        let ok = synthetic_report(&[1.0, 0.5, 0.25, 0.125]);
        assert!(matches!(fit_rate(&ok, "no_such_column"), Err(AxiError::Config(_))));
    }

    #[test]
    fn flat_singleton_rows_are_exactly_zero() {
        let spec = SweepSpec::flat_singleton(Resolution::coarse());
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 1);
        let r = &report.rows[0];
        assert_eq!(r.w1p_g, 0.0);
        assert_eq!(r.w1p_q, 0.0);
        assert_eq!(r.vol_dev, 0.0);
        assert_eq!(r.area_dev, 0.0);
        assert_eq!(r.len_dev, 0.0);
        assert_eq!(r.holder_beta, 0.0);
        assert_abs_diff_eq!(r.rm_margin, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.flux_mass, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.brill_mass, 0.0, epsilon = 1e-14);
        // a singleton cannot support a rate fit
        assert!(report.slopes.is_empty());
    }

    #[test]
    fn charged_rotating_sweep_decreases_all_deviation_columns() {
        let spec = SweepSpec::kerr_newman(&[1.0, 0.5, 0.25, 0.125], 0.5, 0.3, Resolution::coarse())
            .unwrap();
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 4);
        for w in report.rows.windows(2) {
            assert!(w[1].w1p_g < w[0].w1p_g, "w1p_g not strictly decreasing");
            assert!(w[1].w1p_q < w[0].w1p_q, "w1p_q not strictly decreasing");
            assert!(w[1].vol_dev < w[0].vol_dev, "vol_dev not decreasing");
            assert!(w[1].area_dev < w[0].area_dev, "area_dev not decreasing");
            assert!(w[1].len_dev < w[0].len_dev, "len_dev not decreasing");
            assert!(w[1].holder_beta < w[0].holder_beta, "holder not decreasing");
            assert!(w[1].flux_mass < w[0].flux_mass, "flux mass not decreasing");
        }
        for r in &report.rows {
            assert_relative_eq!(r.flux_mass, r.mass, max_relative = 0.01);
            assert!(r.rm_margin > 0.0, "strict monotonicity margin for {}", r.label);
            assert!(
                r.vol_dev >= 0.0 && r.area_dev >= 0.0 && r.len_dev >= 0.0,
                "deviations must be nonnegative"
            );
        }
        let slope = report.slopes.get("w1p_g").copied().unwrap();
        assert!(slope > 0.0, "fitted w1p_g slope {slope} should be positive");
    }

    #[test]
    fn geometrostatic_sweep_decreases_under_area_enlarging() {
        let spec = SweepSpec::geometrostatic(&[0.2, 0.1, 0.05], Resolution::coarse()).unwrap();
        assert_eq!(spec.condition, DeclaredCondition::AreaEnlarging);
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 3);
        for w in report.rows.windows(2) {
            assert!(w[1].vol_dev < w[0].vol_dev, "vol_dev not decreasing");
            assert!(w[1].area_dev < w[0].area_dev, "area_dev not decreasing");
            assert!(w[1].flux_mass < w[0].flux_mass, "flux mass not decreasing");
        }
        for r in &report.rows {
            assert!(r.ae_margin > 0.0, "area-enlarging margin for {}", r.label);
        }
    }

    #[test]
    fn report_regenerates_bit_identically() {
        let spec = SweepSpec::kerr_newman(&[0.5, 0.25], 0.5, 0.3, Resolution::coarse()).unwrap();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.csv(), b.csv());
        assert_eq!(a.json_summary().unwrap(), b.json_summary().unwrap());
        // header is the fixed contract
        assert!(a.csv().starts_with(
            "mass,w1p_g,w1p_q,vol_dev,area_dev,len_dev,rm_margin,ae_margin,holder_beta,flux_mass,brill_mass\n"
        ));
    }

    #[test]
    fn failing_member_aborts_with_its_name() {
        let broken = perturb(
            &flat_metric(),
            &[(
                BumpTarget::Alpha,
                BumpSpec { amplitude: 0.5, center_rho: 2.0, center_z: 0.0, radius: 1.0 },
            )],
        )
        .unwrap();
        let mut spec = SweepSpec::flat_singleton(Resolution::coarse());
        spec.members =
            vec![SweepMember { label: "broken-bump".into(), metric: broken, declared_mass: 0.5 }];
        let err = run_sweep(&spec).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("broken-bump"), "error must identify the member: {msg}");
    }

    #[test]
    fn schedules_must_strictly_decrease() {
        assert!(SweepSpec::kerr_newman(&[0.5, 1.0], 0.5, 0.3, Resolution::coarse()).is_err());
        let mut spec = SweepSpec::flat_singleton(Resolution::coarse());
        spec.sigma = 0.0;
        assert!(spec.validate().is_err());
    }
}
