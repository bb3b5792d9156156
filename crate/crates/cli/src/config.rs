//! Run configuration: defaults, then a `key = value` file, then flags.
//!
//! ```text
//! # comments run to end of line
//! n = 2
//! seed = 42
//! box = 3            # every suite
//! box.gvm = 8        # one suite
//! spec = mu1=2/3, a=1/2
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};
use solvir::{Rational, Var};

/// Suites with a configurable radius, and their defaults.
pub const SUITE_RADII: [(&str, i64); 6] = [("jacobi", 3), ("cocycle", 3), ("density", 2), ("density_sub", 3), ("verma", 6), ("gvm", 8)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub radii: BTreeMap<String, i64>,
    /// Explicit list of radii for the table commands.
    pub boxes: Option<Vec<i64>>,
    pub seed: u64,
    pub spec: BTreeMap<Var, Rational>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub input: Option<PathBuf>,
    pub shift: Option<Vec<i64>>,
    pub kappa: Option<Vec<i64>>,
    pub level: Option<i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            radii: SUITE_RADII.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            boxes: None,
            seed: 0,
            spec: BTreeMap::new(),
            out: None,
            threads: None,
            input: None,
            shift: None,
            kappa: None,
            level: None,
        }
    }
}

impl RunConfig {
    pub fn radius(&self, suite: &str) -> i64 {
        self.radii[suite]
    }

    /// Sets one key; shared by the file reader and the flag layer.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "n" => self.n = parse_int(key, value)?,
            "box" => {
                let r = parse_radius(value)?;
                for v in self.radii.values_mut() {
                    *v = r;
                }
            }
            "boxes" => self.boxes = Some(parse_boxes(value)?),
            "seed" => self.seed = parse_int(key, value)?,
            "spec" => {
                for (var, q) in parse_spec(value)? {
                    self.spec.insert(var, q);
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_int(key, value)?),
            "input" => self.input = Some(PathBuf::from(value)),
            "shift" => self.shift = Some(parse_point(value)?),
            "kappa" => self.kappa = Some(parse_point(value)?),
            "level" => self.level = Some(parse_int(key, value)?),
            _ => match key.strip_prefix("box.") {
                Some(suite) if self.radii.contains_key(suite) => {
                    let r = parse_radius(value)?;
                    self.radii.insert(suite.to_string(), r);
                }
                _ => return err(format!("unknown config key `{key}`")),
            },
        }
        Ok(())
    }

    /// Applies every `key = value` line of a config file.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("config line {}: expected `key = value`", i + 1));
            };
            self.set(k.trim(), v).map_err(|e| ConfigError(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 1 || self.n > solvir::scalars::MAX_MU {
            return err(format!("n must be in 1..={}", solvir::scalars::MAX_MU));
        }
        if self.threads == Some(0) {
            return err("threads must be at least 1");
        }
        Ok(())
    }

    /// The configuration as embedded in reports. Output path and thread
    /// count are left out: they do not affect results.
    pub fn to_json(&self) -> Value {
        let spec: serde_json::Map<String, Value> = self.spec.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
        let mut m = serde_json::Map::new();
        m.insert("n".into(), json!(self.n));
        m.insert("radii".into(), json!(self.radii));
        m.insert("seed".into(), json!(self.seed));
        m.insert("spec".into(), Value::Object(spec));
        if let Some(b) = &self.boxes {
            m.insert("boxes".into(), json!(b));
        }
        if let Some(p) = &self.input {
            m.insert("input".into(), json!(p.display().to_string()));
        }
        for (k, v) in [("shift", &self.shift), ("kappa", &self.kappa)] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        if let Some(l) = self.level {
            m.insert("level".into(), json!(l));
        }
        Value::Object(m)
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().or_else(|_| err(format!("`{key}` expects an integer, got `{v}`")))
}

fn parse_radius(v: &str) -> Result<i64, ConfigError> {
    let r: i64 = parse_int("box", v)?;
    if r < 1 {
        return err(format!("box radius must be at least 1, got {r}"));
    }
    Ok(r)
}

/// `a..b` (inclusive) or a comma list.
pub fn parse_boxes(v: &str) -> Result<Vec<i64>, ConfigError> {
    let out: Vec<i64> = if let Some((lo, hi)) = v.split_once("..") {
        let (lo, hi) = (parse_radius(lo.trim())?, parse_radius(hi.trim())?);
        if lo > hi {
            return err(format!("empty box range `{v}`"));
        }
        (lo..=hi).collect()
    } else {
        v.split(',').map(|x| parse_radius(x.trim())).collect::<Result<_, _>>()?
    };
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return err(format!("boxes must be increasing: `{v}`"));
    }
    Ok(out)
}

pub fn parse_point(v: &str) -> Result<Vec<i64>, ConfigError> {
    v.parse::<solvir::LatticePoint>().map(|p| p.coords().to_vec()).or_else(|_| err(format!("not a lattice point: `{v}`")))
}

/// `mu1=2/3,a=1/2`.
pub fn parse_spec(v: &str) -> Result<Vec<(Var, Rational)>, ConfigError> {
    let mut out = Vec::new();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((name, q)) = item.split_once('=') else {
            return err(format!("specialization `{item}` is not `name=value`"));
        };
        let Some(var) = Var::parse(name.trim()) else {
            return err(format!("unknown indeterminate `{name}`"));
        };
        let q: Rational = q.trim().parse().or_else(|_| err(format!("not a rational: `{q}`")))?;
        out.push((var, q));
    }
    Ok(out)
}
