//! Subcommand implementations. Every handler returns `Result<()>`; the
//! dispatcher maps error kinds to exit codes.

use std::path::{Path, PathBuf};

use axipmt::conditions::{
    area_enlarging, radial_monotonicity, rm_implies_ae_check, sub_imcf_check, ConditionGrid,
};
use axipmt::error::{AxiError, Result};
use axipmt::field_core::{fmt_float, HalfPlanePoint, Region, Resolution, ScalarField2D};
use axipmt::geometry_functionals::{
    adm_flux_mass, area, brill_mass, holder_norm_estimate, segment_length, sobolev_norm,
    ComponentFrame, CylPoint3, GeneratingCurve, HolderTarget, SobolevTarget,
};
use axipmt::metric_families::{
    flat_metric, geometrostatic_metric, kerr_newman_metric, GeometrostaticParams, KerrNewmanParams,
    Puncture,
};
use axipmt::metric_model::AxiMetric;
use axipmt::potential_theory::{
    battery_csv, green_reconstruct, log_moment_check, moser_trudinger_like_check, mt_battery,
    riesz_battery, Kernel, MtVariant,
};
use axipmt::stability_harness::{run_sweep, SweepSpec};

use crate::config::FileConfig;

pub struct FamilySelection {
    pub kind: String,
    pub m: f64,
    pub a: f64,
    pub e: f64,
    pub scale: f64,
    pub punctures: Vec<Puncture>,
}

impl FamilySelection {
    /// Merge flags over the config `[family]` block; flags win field by field.
    pub fn resolve(
        cfg: &FileConfig,
        kind: Option<&str>,
        m: Option<f64>,
        a: Option<f64>,
        e: Option<f64>,
        scale: Option<f64>,
    ) -> FamilySelection {
        let file = cfg.family.as_ref();
        let kind = kind
            .map(str::to_string)
            .or_else(|| file.and_then(|f| f.kind.clone()))
            .unwrap_or_else(|| "flat".into());
        let punctures = file
            .and_then(|f| f.punctures.as_ref())
            .map(|ps| ps.iter().map(|p| Puncture { z: p.z, a: p.a, b: p.b }).collect::<Vec<_>>())
            .unwrap_or_default();
        FamilySelection {
            kind,
            m: m.or_else(|| file.and_then(|f| f.m)).unwrap_or(1.0),
            a: a.or_else(|| file.and_then(|f| f.a)).unwrap_or(0.0),
            e: e.or_else(|| file.and_then(|f| f.e)).unwrap_or(0.0),
            scale: scale.or_else(|| file.and_then(|f| f.scale)).unwrap_or(0.5),
            punctures,
        }
    }

    pub fn build(&self) -> Result<AxiMetric> {
        match self.kind.as_str() {
            "flat" => Ok(flat_metric()),
            "kerr-newman" => kerr_newman_metric(&KerrNewmanParams::new(self.m, self.a, self.e)?),
            "geometrostatic" => {
                let punctures = if self.punctures.is_empty() {
                    vec![
                        Puncture { z: -1.0, a: self.scale, b: self.scale },
                        Puncture { z: 1.0, a: self.scale, b: self.scale },
                    ]
                } else {
                    self.punctures.clone()
                };
                geometrostatic_metric(&GeometrostaticParams::new(punctures)?)
            }
            other => Err(AxiError::Config(format!(
                "unknown family '{other}' (expected flat, kerr-newman, or geometrostatic)"
            ))),
        }
    }
}

fn write_if(path: Option<&Path>, content: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, content)
            .map_err(|e| AxiError::Config(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn json_out(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    if path.is_some() {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| AxiError::Config(format!("serialization failed: {e}")))?;
        text.push('\n');
        write_if(path, &text)?;
    }
    Ok(())
}

pub fn run_mass(
    family: &FamilySelection,
    method: &str,
    radii: &[f64],
    truncation: f64,
    res: &Resolution,
    json: Option<&Path>,
) -> Result<()> {
    let metric = family.build()?;
    let result = match method {
        "flux" => adm_flux_mass(&metric, radii, res)?,
        "brill" => brill_mass(&metric, &Region::ball(0.0, 0.0, truncation), res)?,
        other => {
            return Err(AxiError::Config(format!(
                "unknown mass method '{other}' (expected flux or brill)"
            )))
        }
    };
    println!("mass ({method}) = {:.6}", result.value);
    println!(
        "truncation radius = {}, tail estimate = {:.3e}",
        result.truncation_radius, result.tail_error
    );
    json_out(
        json,
        &serde_json::json!({
            "family": family.kind,
            "method": method,
            "mass": result,
        }),
    )
}

pub fn run_curvature(
    family: &FamilySelection,
    rho: f64,
    z: f64,
    grid: bool,
    bounds: (f64, f64, f64, f64),
    res: &Resolution,
    csv: Option<&Path>,
) -> Result<()> {
    let metric = family.build()?;
    let p = HalfPlanePoint::at(rho, z);
    if !metric.in_domain(p) {
        return Err(AxiError::OutOfDomain(format!(
            "({rho}, {z}) is outside the {} chart domain",
            metric.family_tag
        )));
    }
    let r = metric.brill_scalar_curvature(p)?;
    println!("scalar curvature at ({rho}, {z}) = {}", fmt_float(r));
    if grid {
        let (r_lo, r_hi, z_lo, z_hi) = bounds;
        if !(r_lo > 0.0 && r_hi > r_lo && z_hi > z_lo) {
            return Err(AxiError::Config(format!(
                "bad curvature grid bounds [{r_lo}, {r_hi}] x [{z_lo}, {z_hi}]"
            )));
        }
        let mut out = String::from("rho,z,value\n");
        for i in 0..res.n_rho {
            let rho = r_lo * (r_hi / r_lo).powf(i as f64 / (res.n_rho - 1) as f64);
            for j in 0..res.n_z {
                let z = z_lo + (z_hi - z_lo) * j as f64 / (res.n_z - 1) as f64;
                let q = HalfPlanePoint::at(rho, z);
                if !metric.in_domain(q) {
                    continue;
                }
                let v = metric.brill_scalar_curvature(q)?;
                out.push_str(&format!("{},{},{}\n", fmt_float(rho), fmt_float(z), fmt_float(v)));
            }
        }
        write_if(csv, &out)?;
        if csv.is_none() {
            print!("{out}");
        }
    }
    Ok(())
}

pub fn run_check(
    cfg: &FileConfig,
    family: &FamilySelection,
    condition: Option<&str>,
    n_rho: Option<usize>,
    n_z: Option<usize>,
    res: &Resolution,
    json: Option<&Path>,
) -> Result<()> {
    let file = cfg.check.as_ref();
    let condition = condition
        .map(str::to_string)
        .or_else(|| file.and_then(|c| c.condition.clone()))
        .unwrap_or_else(|| "radial-monotone".into());
    let n_rho = n_rho.or_else(|| file.and_then(|c| c.n_rho)).unwrap_or(200);
    let n_z = n_z.or_else(|| file.and_then(|c| c.n_z)).unwrap_or(400);
    let metric = family.build()?;
    let grid = ConditionGrid::standard(&metric, n_rho, n_z);
    let record = match condition.as_str() {
        "radial-monotone" => {
            radial_monotonicity(&metric, None, &grid)?.record("radial-monotone")
        }
        "area-enlarging" => area_enlarging(&metric, None, &grid)?.record("area-enlarging"),
        "sub-imcf" => sub_imcf_check(&metric, &grid)?.record("sub-imcf"),
        "rm-implies-ae" => {
            let rep = rm_implies_ae_check(&metric, &grid, res)?;
            serde_json::json!({
                "condition": "rm-implies-ae",
                "holds": rep.holds,
                "rm_margin": rep.rm_margin,
                "ae_margin": rep.ae_margin,
                "reconstruction_error": rep.reconstruction_error,
                "r_far": rep.r_far,
            })
        }
        other => {
            return Err(AxiError::Config(format!(
                "unknown condition '{other}' (expected radial-monotone, area-enlarging, sub-imcf, or rm-implies-ae)"
            )))
        }
    };
    let text = serde_json::to_string_pretty(&record)
        .map_err(|e| AxiError::Config(format!("serialization failed: {e}")))?;
    println!("{text}");
    json_out(json, &record)
}

#[allow(clippy::too_many_arguments)]
pub fn run_geometry(
    family: &FamilySelection,
    measure: &str,
    rho0: f64,
    rho1: f64,
    sigma: f64,
    sphere_r: Option<f64>,
    band: (f64, f64, f64),
    endpoints: (&[f64], &[f64]),
    res: &Resolution,
    json: Option<&Path>,
) -> Result<()> {
    let metric = family.build()?;
    let (label, value) = match measure {
        "volume" => {
            let v = axipmt::geometry_functionals::volume(
                &metric,
                &Region::cylinder(rho0, rho1, sigma),
                res,
            )?;
            (format!("volume of cylinder [{rho0}, {rho1}] (sigma = {sigma})"), v)
        }
        "area" => {
            let curve = match sphere_r {
                Some(r) => GeneratingCurve::semicircle(0.0, r),
                None => GeneratingCurve::Segment {
                    p: HalfPlanePoint::at(band.0, band.1),
                    q: HalfPlanePoint::at(band.0, band.2),
                },
            };
            let a = area(&metric, &curve, res)?;
            let what = match sphere_r {
                Some(r) => format!("sphere r = {r}"),
                None => format!("band rho = {}, z in [{}, {}]", band.0, band.1, band.2),
            };
            (format!("area of {what}"), a)
        }
        "length" => {
            let (f, t) = endpoints;
            if f.len() != 3 || t.len() != 3 {
                return Err(AxiError::Config("length endpoints must be rho,z,phi triples".into()));
            }
            let p = CylPoint3 { rho: f[0], z: f[1], phi: f[2] };
            let q = CylPoint3 { rho: t[0], z: t[1], phi: t[2] };
            let l = segment_length(&metric, p, q, res)?;
            (format!("length of chord {f:?} -> {t:?}"), l)
        }
        other => {
            return Err(AxiError::Config(format!(
                "unknown measure '{other}' (expected volume, area, or length)"
            )))
        }
    };
    println!("{label} = {}", fmt_float(value));
    json_out(
        json,
        &serde_json::json!({ "family": family.kind, "measure": measure, "value": value }),
    )
}

pub fn run_norms(
    family: &FamilySelection,
    p: f64,
    beta: f64,
    sigma: f64,
    res: &Resolution,
    json: Option<&Path>,
) -> Result<()> {
    let metric = family.build()?;
    let w_solid = sobolev_norm(
        &metric,
        &Region::cylinder(1.0, 2.0, sigma),
        p,
        SobolevTarget::GMinusDelta,
        ComponentFrame::Orthonormal,
        res,
    )?;
    let w_orbit = sobolev_norm(
        &metric,
        &Region::rectangle(1.0, 2.0, sigma),
        p,
        SobolevTarget::QMinusDelta,
        ComponentFrame::Orthonormal,
        res,
    )?;
    let holder = holder_norm_estimate(
        &metric,
        &Region::Annulus { r0: 2.0, r1: 4.0 },
        beta,
        HolderTarget::GMinusDelta,
        res.n_angular,
    )?;
    println!("W^(1,{p}) of g - delta on the solid region  = {}", fmt_float(w_solid));
    println!("W^(1,{p}) of q - delta on the orbit region  = {}", fmt_float(w_orbit));
    println!("C^(0,{beta}) estimate of g - delta on A(2,4) = {}", fmt_float(holder));
    json_out(
        json,
        &serde_json::json!({
            "family": family.kind,
            "p": p,
            "beta": beta,
            "sigma": sigma,
            "w1p_g": w_solid,
            "w1p_q": w_orbit,
            "holder": holder,
        }),
    )
}

/// Returns the number of failed cases; exit code 1 when nonzero.
pub fn run_verify(
    suite: &str,
    seed: u64,
    cases: usize,
    res: &Resolution,
    csv: Option<&Path>,
) -> Result<usize> {
    let mut failures = 0usize;
    let mut csv_blob = String::new();
    let run_log_moment = |failures: &mut usize| -> Result<()> {
        let disk = Region::Ball { center_rho: 2.0, center_z: 0.0, radius: 1.0 };
        let center = HalfPlanePoint::at(2.0, 0.0);
        let mut ok = true;
        for k in 1..=5usize {
            let chk = log_moment_check(&disk, center, k as u32, res)?;
            let expect =
                std::f64::consts::PI * (1..=k).product::<usize>() as f64 / 2f64.powi(k as i32);
            if !(chk.holds && (chk.lhs - expect).abs() <= 1e-6) {
                ok = false;
                *failures += 1;
            }
        }
        println!("suite log-moment: {} (5 cases)", if ok { "PASS" } else { "FAIL" });
        Ok(())
    };
    let run_riesz = |failures: &mut usize, blob: &mut String| -> Result<()> {
        let rows = riesz_battery(seed, cases, &res.halved())?;
        let bad = rows.iter().filter(|r| !r.holds).count();
        *failures += bad;
        blob.push_str(&battery_csv(&rows));
        println!("suite riesz: {} ({} cases)", if bad == 0 { "PASS" } else { "FAIL" }, rows.len());
        Ok(())
    };
    let run_mt = |failures: &mut usize, blob: &mut String| -> Result<()> {
        let rows = mt_battery(seed, cases, res)?;
        let bad = rows.iter().filter(|r| !r.holds).count();
        *failures += bad;
        blob.push_str(&battery_csv(&rows));
        // equality at the zero field is part of the contract
        let zero = ScalarField2D::zero();
        let rect = Region::rectangle(1.0, 2.0, 0.0);
        let eq = moser_trudinger_like_check(&zero, &rect, 0.1, MtVariant::LemmaGamma, res)?;
        if !(eq.holds && (eq.lhs - eq.rhs).abs() <= 1e-12 * eq.rhs) {
            *failures += 1;
        }
        println!(
            "suite integrability: {} ({} cases + equality)",
            if bad == 0 { "PASS" } else { "FAIL" },
            rows.len()
        );
        Ok(())
    };
    let run_green = |failures: &mut usize| -> Result<()> {
        let rect = Region::rectangle(1.0, 2.0, 0.0);
        let psi = ScalarField2D::closed_form(|r, z| r.sq() - z.sq());
        let x = HalfPlanePoint::at(1.5, 0.0);
        let mut ok = true;
        for kernel in
            [Kernel::Gamma, Kernel::Neumann { rho0: 1.0 }, Kernel::Dirichlet { rho0: 1.0 }]
        {
            let v = green_reconstruct(&psi, &rect, kernel, x, res)?;
            if (v - 2.25).abs() > 1e-6 {
                ok = false;
                *failures += 1;
            }
        }
        println!("suite green: {} (3 kernels)", if ok { "PASS" } else { "FAIL" });
        Ok(())
    };
    match suite {
        "log-moment" => run_log_moment(&mut failures)?,
        "riesz" => run_riesz(&mut failures, &mut csv_blob)?,
        "integrability" => run_mt(&mut failures, &mut csv_blob)?,
        "green" => run_green(&mut failures)?,
        "all" => {
            run_log_moment(&mut failures)?;
            run_riesz(&mut failures, &mut csv_blob)?;
            run_mt(&mut failures, &mut csv_blob)?;
            run_green(&mut failures)?;
        }
        other => {
            return Err(AxiError::Config(format!(
                "unknown suite '{other}' (expected log-moment, riesz, integrability, green, or all)"
            )))
        }
    }
    if !csv_blob.is_empty() {
        write_if(csv, &csv_blob)?;
    }
    Ok(failures)
}

#[allow(clippy::too_many_arguments)]
pub fn run_sweep_cmd(
    cfg: &FileConfig,
    family: Option<&str>,
    masses: Option<Vec<f64>>,
    a_over_m: Option<f64>,
    e_over_m: Option<f64>,
    scales: Option<Vec<f64>>,
    seed: u64,
    res: Resolution,
    csv: Option<&PathBuf>,
    json: Option<&PathBuf>,
) -> Result<()> {
    let file = cfg.sweep.as_ref();
    let family = family
        .map(str::to_string)
        .or_else(|| file.and_then(|s| s.family.clone()))
        .unwrap_or_else(|| "kerr-newman".into());
    let mut spec = match family.as_str() {
        "kerr-newman" => {
            let masses = masses
                .or_else(|| file.and_then(|s| s.masses.clone()))
                .unwrap_or_else(|| vec![1.0, 0.5, 0.25, 0.125]);
            let a_over_m = a_over_m.or_else(|| file.and_then(|s| s.a_over_m)).unwrap_or(0.5);
            let e_over_m = e_over_m.or_else(|| file.and_then(|s| s.e_over_m)).unwrap_or(0.3);
            SweepSpec::kerr_newman(&masses, a_over_m, e_over_m, res)?
        }
        "geometrostatic" => {
            let scales = scales
                .or_else(|| file.and_then(|s| s.scales.clone()))
                .unwrap_or_else(|| vec![0.2, 0.1, 0.05]);
            SweepSpec::geometrostatic(&scales, res)?
        }
        "flat" => SweepSpec::flat_singleton(res),
        other => {
            return Err(AxiError::Config(format!(
                "unknown sweep family '{other}' (expected kerr-newman, geometrostatic, or flat)"
            )))
        }
    };
    spec.seed = seed;
    let report = run_sweep(&spec)?;
    let csv_text = report.csv();
    match csv {
        Some(p) => write_if(Some(p), &csv_text)?,
        None => print!("{csv_text}"),
    }
    let mut summary = report.json_summary()?;
    summary.push('\n');
    match json {
        Some(p) => write_if(Some(p), &summary)?,
        None => print!("{summary}"),
    }
    Ok(())
}

pub fn run_families() {
    println!("flat              the Euclidean baseline; every deviation functional is zero");
    println!(
        "kerr-newman       rotating charged family; parameters --m, --a, --e with m^2 > a^2 + e^2"
    );
    println!("geometrostatic    conformally flat multi-puncture family; --scale s places equal");
    println!("                  punctures a = b = s at z = -1 and z = +1 (total mass 4s), or give");
    println!("                  a [family] punctures array in the config for arbitrary layouts");
}
