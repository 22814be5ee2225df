//! Flat `key = value` run configuration.
//!
//! Keys mirror the long command-line flags. Lines starting with `#` are
//! comments. Parameters bound into polynomial expressions are written
//! `param.<name> = <complex>`.
//!
//! | key              | default     |
//! |------------------|-------------|
//! | `out-dir`        | `.`         |
//! | `deterministic`  | `true` (cannot be turned off) |
//! | `tolerance`      | `0.001`     |
//! | `residual`       | `0.000000001` |
//! | `grid`           | `400,64`    |
//! | `modulus-range`  | `0.01,100`  |
//! | `fiber-epsilon`  | `0.000001`  |
//! | `hv-grid`        | `8`         |
//! | `steps`          | `1024`      |
//! | `collection`     | `ec`        |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::CliError;

/// Environment variable that overrides `out-dir` (flags still win).
pub const OUT_DIR_ENV: &str = "DIMER_COAMOEBA_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub deterministic: bool,
    /// Cell-membership tolerance in torus distance.
    pub tolerance: f64,
    /// Residual bound on polished coamoeba samples.
    pub residual: f64,
    pub radial: usize,
    pub angular: usize,
    pub modulus_range: (f64, f64),
    pub fiber_epsilon: f64,
    pub hv_grid: usize,
    pub steps: usize,
    pub collection: String,
    pub params: BTreeMap<String, Complex64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            out_dir: PathBuf::from("."),
            deterministic: true,
            tolerance: 1e-3,
            residual: 1e-9,
            radial: 400,
            angular: 64,
            modulus_range: (1e-2, 1e2),
            fiber_epsilon: 1e-6,
            hv_grid: 8,
            steps: 1024,
            collection: "ec".into(),
            params: BTreeMap::new(),
        }
    }
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Usage(format!("bad value for {key}: {value:?}"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| bad(key, value))
}

pub fn parse_pair<T: FromStr>(key: &str, value: &str) -> Result<(T, T), CliError> {
    let (a, b) = value.split_once(',').ok_or_else(|| bad(key, value))?;
    Ok((num(key, a)?, num(key, b)?))
}

/// `name=value` with a complex value such as `0.5`, `-1+2i` or `3i`.
pub fn parse_binding(text: &str) -> Result<(String, Complex64), CliError> {
    let (name, value) = text.split_once('=').ok_or_else(|| bad("param", text))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name == "x" || name == "y" {
        return Err(bad("param", text));
    }
    let z = Complex64::from_str(&value.replace(' ', "")).map_err(|_| bad("param", text))?;
    Ok((name.to_string(), z))
}

impl RunConfig {
    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "out-dir" => self.out_dir = PathBuf::from(v),
            "deterministic" => {
                if v != "true" {
                    return Err(CliError::Usage("determinism cannot be disabled".into()));
                }
            }
            "tolerance" => self.tolerance = num(key, v)?,
            "residual" => self.residual = num(key, v)?,
            "grid" => (self.radial, self.angular) = parse_pair(key, v)?,
            "modulus-range" => self.modulus_range = parse_pair(key, v)?,
            "fiber-epsilon" => self.fiber_epsilon = num(key, v)?,
            "hv-grid" => self.hv_grid = num(key, v)?,
            "steps" => self.steps = num(key, v)?,
            "collection" => self.collection = v.to_string(),
            _ => match key.strip_prefix("param.") {
                Some(name) => {
                    let (n, z) = parse_binding(&format!("{name}={v}"))?;
                    self.params.insert(n, z);
                }
                None => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            },
        }
        self.check()
    }

    fn check(&self) -> Result<(), CliError> {
        let (lo, hi) = self.modulus_range;
        if !(lo > 0.0 && hi > lo) {
            return Err(CliError::Usage(format!("modulus range must satisfy 0 < lo < hi, got {lo},{hi}")));
        }
        if !(self.tolerance > 0.0 && self.residual > 0.0 && self.fiber_epsilon > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            cfg.set(k.trim(), v)?;
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "out-dir = {}", self.out_dir.display());
        let _ = writeln!(s, "deterministic = {}", self.deterministic);
        let _ = writeln!(s, "tolerance = {:?}", self.tolerance);
        let _ = writeln!(s, "residual = {:?}", self.residual);
        let _ = writeln!(s, "grid = {},{}", self.radial, self.angular);
        let _ = writeln!(s, "modulus-range = {:?},{:?}", self.modulus_range.0, self.modulus_range.1);
        let _ = writeln!(s, "fiber-epsilon = {:?}", self.fiber_epsilon);
        let _ = writeln!(s, "hv-grid = {}", self.hv_grid);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "collection = {}", self.collection);
        for (k, z) in &self.params {
            let _ = writeln!(s, "param.{k} = {:?}{:+?}i", z.re, z.im);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn keys_and_comments() {
        let c = RunConfig::parse("# run\ngrid = 40,8\nmodulus-range = 0.1,10\nparam.t = 0.25\n").unwrap();
        assert_eq!((c.radial, c.angular), (40, 8));
        assert_eq!(c.modulus_range, (0.1, 10.0));
        assert_eq!(c.params["t"], Complex64::new(0.25, 0.0));
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects() {
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("deterministic = false").is_err());
        assert!(RunConfig::parse("modulus-range = 5,1").is_err());
        assert!(RunConfig::parse("grid 4").is_err());
        assert!(parse_binding("x=1").is_err());
        assert_eq!(parse_binding("t=-1+2i").unwrap().1, Complex64::new(-1.0, 2.0));
    }
}
