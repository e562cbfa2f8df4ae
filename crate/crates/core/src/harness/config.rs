//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # unit circle at k = 150: exact, Kirchhoff and first-order BT currents
//! geometry.kind   = circle
//! geometry.radius = 1
//! wave.k          = 150
//! wave.omega_deg  = 0
//! trace.samples   = 2048
//! trace.kinds     = exact, kirchhoff, bt1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are configuration errors.

use std::path::Path;

use crate::ansatz::{Convention, ExpansionConfig};
use crate::currents::{CurrentKind, ShadowMode};
use crate::error::{Error, Result};
use crate::fock::FockEvaluator;
use crate::geometry::{CurveGeometry, WaveConfig, DEFAULT_REGION_EPSILON};

/// Every recognised key, in documentation order.
pub const KEYS: [&str; 13] = [
    "geometry.kind",
    "geometry.radius",
    "geometry.a",
    "geometry.b",
    "wave.k",
    "wave.omega_deg",
    "trace.samples",
    "trace.kinds",
    "trace.kirchhoff_shadow",
    "sweep.k_list",
    "ansatz.convention",
    "fock.tau_switch",
    "region.epsilon",
];

/// Smallest admissible trace sample count.
pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Circle,
    Ellipse,
}

/// Parsed configuration with defaults for absent keys.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub geometry_kind: GeometryKind,
    pub radius: f64,
    pub semi_axes: (f64, f64),
    pub k: f64,
    pub omega_deg: f64,
    pub samples: usize,
    pub kinds: Vec<CurrentKind>,
    pub kirchhoff_shadow: ShadowMode,
    pub k_list: Vec<f64>,
    pub convention: Convention,
    pub tau_switch: f64,
    pub region_epsilon: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            geometry_kind: GeometryKind::Circle,
            radius: 1.0,
            semi_axes: (2.0, 1.0),
            k: 150.0,
            omega_deg: 0.0,
            samples: 2048,
            kinds: vec![CurrentKind::Exact, CurrentKind::Kirchhoff, CurrentKind::Bt1],
            kirchhoff_shadow: ShadowMode::Zero,
            k_list: vec![100.0, 200.0, 400.0, 800.0],
            convention: Convention::Calibrated,
            tau_switch: crate::fock::DEFAULT_TAU_SWITCH,
            region_epsilon: DEFAULT_REGION_EPSILON,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::config(format!("{key}: '{value}' is not a finite number")))
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

/// Parse a comma-separated list of current kinds.
pub fn parse_kinds(value: &str) -> Result<Vec<CurrentKind>> {
    let kinds = parse_list(value, |s| s.parse::<CurrentKind>())?;
    if kinds.is_empty() {
        return Err(Error::config("trace.kinds: empty list"));
    }
    Ok(kinds)
}

impl HarnessConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = HarnessConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let key = *KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| Error::config(format!("line {}: unknown key '{key}'", lineno + 1)))?;
            if seen.contains(&key) {
                return Err(Error::config(format!("line {}: repeated key '{key}'", lineno + 1)));
            }
            seen.push(key);
            cfg.set(key, value)?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "geometry.kind" => {
                self.geometry_kind = match value {
                    "circle" => GeometryKind::Circle,
                    "ellipse" => GeometryKind::Ellipse,
                    other => return Err(Error::config(format!("geometry.kind: unknown '{other}'"))),
                }
            }
            "geometry.radius" => self.radius = parse_f64(key, value)?,
            "geometry.a" => self.semi_axes.0 = parse_f64(key, value)?,
            "geometry.b" => self.semi_axes.1 = parse_f64(key, value)?,
            "wave.k" => self.k = parse_f64(key, value)?,
            "wave.omega_deg" => self.omega_deg = parse_f64(key, value)?,
            "trace.samples" => {
                self.samples = value
                    .parse()
                    .map_err(|_| Error::config(format!("trace.samples: '{value}' is not a count")))?
            }
            "trace.kinds" => self.kinds = parse_kinds(value)?,
            "trace.kirchhoff_shadow" => {
                self.kirchhoff_shadow = match value {
                    "zero" => ShadowMode::Zero,
                    "extended" => ShadowMode::Extended,
                    other => return Err(Error::config(format!("trace.kirchhoff_shadow: unknown '{other}'"))),
                }
            }
            "sweep.k_list" => self.k_list = parse_list(value, |s| parse_f64(key, s))?,
            "ansatz.convention" => self.convention = value.parse()?,
            "fock.tau_switch" => self.tau_switch = parse_f64(key, value)?,
            "region.epsilon" => self.region_epsilon = parse_f64(key, value)?,
            _ => unreachable!("key list and setter out of sync: {key}"),
        }
        Ok(())
    }

    /// Range checks that do not depend on which command runs.
    pub fn check(&self) -> Result<()> {
        self.geometry()?;
        self.wave()?;
        if !(self.region_epsilon > 0.0 && self.region_epsilon < 0.5) {
            return Err(Error::config(format!("region.epsilon must lie in (0, 0.5), got {}", self.region_epsilon)));
        }
        if !(self.tau_switch > 0.0) {
            return Err(Error::config(format!("fock.tau_switch must be positive, got {}", self.tau_switch)));
        }
        if let Some(k) = self.k_list.iter().find(|k| !(**k > 0.0)) {
            return Err(Error::config(format!("sweep.k_list: wavenumber {k} is not positive")));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<CurveGeometry> {
        let g = match self.geometry_kind {
            GeometryKind::Circle => CurveGeometry::circle(self.radius),
            GeometryKind::Ellipse => CurveGeometry::ellipse(self.semi_axes.0, self.semi_axes.1),
        };
        g.map_err(|e| Error::config(e.to_string()))
    }

    pub fn wave(&self) -> Result<WaveConfig> {
        self.wave_with_k(self.k)
    }

    pub fn wave_with_k(&self, k: f64) -> Result<WaveConfig> {
        WaveConfig::from_degrees(k, self.omega_deg).map_err(|e| Error::config(e.to_string()))
    }

    pub fn expansion(&self) -> ExpansionConfig {
        ExpansionConfig::new(self.convention).with_fock(FockEvaluator::with_tau_switch(self.tau_switch))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = HarnessConfig::parse("# comment\n\nwave.k = 75\ntrace.kinds = bt1, exact\n").unwrap();
        assert_eq!(cfg.k, 75.0);
        assert_eq!(cfg.kinds, vec![CurrentKind::Bt1, CurrentKind::Exact]);
        assert_eq!(cfg.samples, 2048);
        assert_eq!(HarnessConfig::parse("").unwrap(), HarnessConfig::default());
    }

    #[test]
    fn every_key_parses() {
        let text = "geometry.kind = ellipse\ngeometry.radius = 2\ngeometry.a = 3\ngeometry.b = 1.5\n\
                    wave.k = 10\nwave.omega_deg = 30\ntrace.samples = 128\ntrace.kinds = bt2_2d\n\
                    trace.kirchhoff_shadow = extended\nsweep.k_list = 50, 100\nansatz.convention = unit_over_z\n\
                    fock.tau_switch = 9\nregion.epsilon = 0.1\n";
        let cfg = HarnessConfig::parse(text).unwrap();
        assert_eq!(cfg.geometry_kind, GeometryKind::Ellipse);
        assert_eq!(cfg.semi_axes, (3.0, 1.5));
        assert_eq!(cfg.kirchhoff_shadow, ShadowMode::Extended);
        assert_eq!(cfg.k_list, vec![50.0, 100.0]);
        assert_eq!(cfg.convention, Convention::UnitOverZ);
        assert_eq!(cfg.tau_switch, 9.0);
        assert_eq!(cfg.region_epsilon, 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "wave.k",
            "wave.kk = 3",
            "wave.k = 3\nwave.k = 4",
            "wave.k = -1",
            "wave.k = nan",
            "trace.kinds = kirchhoff, nonsense",
            "trace.kinds = ,",
            "region.epsilon = 0.7",
            "geometry.kind = square",
            "geometry.radius = 0",
            "ansatz.convention = other",
            "sweep.k_list = 100, -5",
        ] {
            assert!(matches!(HarnessConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }
}
