//! Configuration file support: a TOML document with nested sections and
//! arrays. Unknown keys are rejected, every numeric field must be finite,
//! and command-line flags override whatever the file provides.

use std::path::PathBuf;

use axipmt::error::{AxiError, Result};
use axipmt::field_core::Resolution;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub resolution: Option<ResolutionConfig>,
    pub family: Option<FamilyConfig>,
    pub sweep: Option<SweepConfig>,
    pub check: Option<CheckConfig>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    pub n_1d: Option<usize>,
    pub n_rho: Option<usize>,
    pub n_z: Option<usize>,
    pub n_angular: Option<usize>,
    pub n_radial: Option<usize>,
    pub n_sphere: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: Option<String>,
    pub m: Option<f64>,
    pub a: Option<f64>,
    pub e: Option<f64>,
    pub scale: Option<f64>,
    pub punctures: Option<Vec<PunctureConfig>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureConfig {
    pub z: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: Option<String>,
    pub masses: Option<Vec<f64>>,
    pub a_over_m: Option<f64>,
    pub e_over_m: Option<f64>,
    pub scales: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub condition: Option<String>,
    pub n_rho: Option<usize>,
    pub n_z: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AxiError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| AxiError::Config(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut floats: Vec<(&str, f64)> = Vec::new();
        if let Some(f) = &self.family {
            for (n, v) in
                [("family.m", f.m), ("family.a", f.a), ("family.e", f.e), ("family.scale", f.scale)]
            {
                if let Some(v) = v {
                    floats.push((n, v));
                }
            }
            if let Some(ps) = &f.punctures {
                for p in ps {
                    floats.extend([("puncture.z", p.z), ("puncture.a", p.a), ("puncture.b", p.b)]);
                }
            }
        }
        if let Some(s) = &self.sweep {
            for (n, v) in [("sweep.a_over_m", s.a_over_m), ("sweep.e_over_m", s.e_over_m)] {
                if let Some(v) = v {
                    floats.push((n, v));
                }
            }
            for list in [&s.masses, &s.scales].into_iter().flatten() {
                for &v in list {
                    floats.push(("sweep list entry", v));
                }
            }
        }
        for (name, v) in floats {
            if !v.is_finite() {
                return Err(AxiError::Config(format!("{name} = {v} is not finite")));
            }
        }
        Ok(())
    }

    /// Base resolution profile with the file's per-field overrides applied.
    pub fn resolution(&self, base: Resolution) -> Resolution {
        let mut r = base;
        if let Some(c) = &self.resolution {
            if let Some(n) = c.n_1d {
                r.n_1d = n;
            }
            if let Some(n) = c.n_rho {
                r.n_rho = n;
            }
            if let Some(n) = c.n_z {
                r.n_z = n;
            }
            if let Some(n) = c.n_angular {
                r.n_angular = n;
            }
            if let Some(n) = c.n_radial {
                r.n_radial = n;
            }
            if let Some(n) = c.n_sphere {
                r.n_sphere = n;
            }
        }
        r
    }
}
