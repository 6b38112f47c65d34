//! Families of datasets that differ only in one aberration strength.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::generate::{generate, GenerateOptions, GenerationSummary};
use super::manifest::DatasetManifest;
use crate::error::{Error, Result};
use crate::lens::AberrationProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    TcaR,
    TcaG,
    TcaB,
    Vignette,
    Saturation,
    Distortion,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::TcaR,
        SweepAxis::TcaG,
        SweepAxis::TcaB,
        SweepAxis::Vignette,
        SweepAxis::Saturation,
        SweepAxis::Distortion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::TcaR => "tca_r",
            SweepAxis::TcaG => "tca_g",
            SweepAxis::TcaB => "tca_b",
            SweepAxis::Vignette => "vignette",
            SweepAxis::Saturation => "saturation",
            SweepAxis::Distortion => "distortion",
        }
    }

    /// `base` with this axis set to `strength`.
    ///
    /// TCA strengths are offsets from unit scale (`s = 1 + strength`), so 0
    /// is neutral on every axis except saturation, where the strength is the
    /// factor itself.
    pub fn apply(self, base: &AberrationProfile, strength: f64) -> Result<AberrationProfile> {
        let mut p = *base;
        match self {
            SweepAxis::TcaR => p.tca_scale[0] = 1.0 + strength,
            SweepAxis::TcaG => p.tca_scale[1] = 1.0 + strength,
            SweepAxis::TcaB => p.tca_scale[2] = 1.0 + strength,
            SweepAxis::Vignette => p.vignette_strength = strength,
            SweepAxis::Saturation => p.saturation = strength,
            SweepAxis::Distortion => p.distortion_k1 = strength,
        }
        p.validate().map_err(|e| match e {
            Error::Argument(msg) => {
                Error::Argument(format!("{} strength {strength}: {msg}", self.name()))
            }
            other => other,
        })?;
        Ok(p)
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown sweep axis {s:?}")))
    }
}

/// Directory name for one member of a sweep.
pub fn sweep_dir_name(axis: SweepAxis, strength: f64) -> String {
    format!("{axis}_{strength}")
}

/// Generate one dataset per strength under `out_root`. Every strength is
/// validated before anything is written.
pub fn sweep(
    manifest: &DatasetManifest,
    base: &AberrationProfile,
    axis: SweepAxis,
    strengths: &[f64],
    out_root: &Path,
    options: &GenerateOptions,
) -> Result<Vec<(PathBuf, GenerationSummary)>> {
    if strengths.is_empty() {
        return Err(Error::Argument("sweep needs at least one strength".into()));
    }
    let profiles = strengths
        .iter()
        .map(|&s| axis.apply(base, s))
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<String> = strengths.iter().map(|&s| sweep_dir_name(axis, s)).collect();
    names.sort();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Argument("sweep strengths must be distinct".into()));
    }
    let mut out = Vec::with_capacity(strengths.len());
    for (&s, profile) in strengths.iter().zip(&profiles) {
        let dir = out_root.join(sweep_dir_name(axis, s));
        log::info!("sweep {axis} = {s} -> {}", dir.display());
        let summary = generate(manifest, profile, &dir, options)?;
        out.push((dir, summary));
    }
    Ok(out)
}
