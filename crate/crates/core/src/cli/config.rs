//! Flat `key=value` experiment configuration with command-line overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::CliError;
use crate::group::GeneratorSequence;
use crate::hardy::{Phi, DEFAULT_THRESHOLD_BASE};

/// Keys accepted in a config file and as flag overrides.
pub const CONFIG_KEYS: [&str; 8] = [
    "generator",
    "depth",
    "phi",
    "alphas",
    "nmax",
    "outdir",
    "seed",
    "tol",
];

/// Largest grid the experiments may allocate.
pub const MAX_ORDER: usize = 1 << 22;

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Unvalidated `key=value` pairs; later assignments replace earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses lines of `key = value`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = Self::default();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected key=value, got {line:?}",
                    number + 1
                )));
            };
            let key = key.trim();
            if raw.entries.contains_key(key) {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key {key:?}",
                    number + 1
                )));
            }
            raw.set(key, value.trim())?;
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Config(format!(
                "unknown key {key:?} (expected one of {})",
                CONFIG_KEYS.join(", ")
            )));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// How the counterexample ranks are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Explicit(Vec<usize>),
    /// `4..=N-1`, or `1..=N-1` below depth 5.
    Auto,
    Greedy {
        count: usize,
        base: f64,
    },
}

impl AlphaSpec {
    /// Parses `4,5,6`, `4..11` (inclusive), `auto`, `greedy:K` or `greedy:K:base`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        let bad = || CliError::Config(format!("cannot parse alphas {text:?}"));
        if text == "auto" {
            return Ok(AlphaSpec::Auto);
        }
        if let Some(rest) = text.strip_prefix("greedy:") {
            let mut parts = rest.split(':');
            let count = parts
                .next()
                .and_then(|c| c.trim().parse::<usize>().ok())
                .filter(|&c| c > 0)
                .ok_or_else(bad)?;
            let base = match parts.next() {
                Some(b) => b.trim().parse::<f64>().map_err(|_| bad())?,
                None => DEFAULT_THRESHOLD_BASE,
            };
            if parts.next().is_some() || !(base > 1.0 && base.is_finite()) {
                return Err(bad());
            }
            return Ok(AlphaSpec::Greedy { count, base });
        }
        if let Some((lo, hi)) = text.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if hi < lo {
                return Err(bad());
            }
            return Ok(AlphaSpec::Explicit((lo..=hi).collect()));
        }
        let list = text
            .split(',')
            .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlphaSpec::Explicit(list))
    }
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub generator: GeneratorSequence,
    pub phi: Phi,
    pub alphas: AlphaSpec,
    pub nmax: Option<usize>,
    pub outdir: PathBuf,
    pub seed: u64,
    pub tol: f64,
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let depth = match raw.get("depth") {
            Some(d) => Some(
                d.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("cannot parse depth {d:?}")))?,
            ),
            None => None,
        };
        let generator = parse_generator(raw.get("generator").unwrap_or("walsh"), depth)?;
        let phi = raw
            .get("phi")
            .unwrap_or("const:1")
            .parse::<Phi>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let alphas = AlphaSpec::parse(raw.get("alphas").unwrap_or("auto"))?;
        let nmax = match raw.get("nmax") {
            Some(n) => Some(
                n.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("cannot parse nmax {n:?}")))?,
            ),
            None => None,
        };
        if let Some(n) = nmax {
            if n > generator.order() {
                return Err(CliError::Config(format!(
                    "nmax = {n} exceeds the group order {}",
                    generator.order()
                )));
            }
        }
        let seed = match raw.get("seed") {
            Some(s) => s
                .parse::<u64>()
                .map_err(|_| CliError::Config(format!("cannot parse seed {s:?}")))?,
            None => 0,
        };
        let tol = match raw.get("tol") {
            Some(t) => t
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && t.is_finite())
                .ok_or_else(|| {
                    CliError::Config(format!("tol must be a positive number, got {t:?}"))
                })?,
            None => DEFAULT_TOLERANCE,
        };
        Ok(Self {
            generator,
            phi,
            alphas,
            nmax,
            outdir: PathBuf::from(raw.get("outdir").unwrap_or("out")),
            seed,
            tol,
        })
    }

    pub fn depth(&self) -> usize {
        self.generator.depth()
    }
}

/// Parses `walsh`, `const:b`, `cycle:a,b,..` (these take `depth`, default 8) or an
/// explicit radix list `a,b,c` (its length is the depth).
pub fn parse_generator(text: &str, depth: Option<usize>) -> Result<GeneratorSequence, CliError> {
    let text = text.trim();
    let radix = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("cannot parse generator {text:?}")))
    };
    let radices: Vec<usize> = if text == "walsh" {
        vec![2; depth.unwrap_or(DEFAULT_DEPTH)]
    } else if let Some(b) = text
        .strip_prefix("const:")
        .or_else(|| text.strip_prefix("constant:"))
    {
        vec![radix(b)?; depth.unwrap_or(DEFAULT_DEPTH)]
    } else if let Some(pattern) = text.strip_prefix("cycle:") {
        let pattern = pattern
            .split(',')
            .map(radix)
            .collect::<Result<Vec<_>, _>>()?;
        let depth = depth.unwrap_or(DEFAULT_DEPTH);
        (0..depth).map(|k| pattern[k % pattern.len()]).collect()
    } else {
        let list = text.split(',').map(radix).collect::<Result<Vec<_>, _>>()?;
        if let Some(d) = depth {
            if d != list.len() {
                return Err(CliError::Config(format!(
                    "depth {d} disagrees with the {} radices of {text:?}",
                    list.len()
                )));
            }
        }
        list
    };
    if let Some(position) = radices.iter().position(|&m| m < 2) {
        return Err(CliError::Config(format!(
            "generator m_{position} = {} is smaller than 2",
            radices[position]
        )));
    }
    let mut order: u128 = 1;
    for &m in &radices {
        order = order.saturating_mul(m as u128);
        if order > MAX_ORDER as u128 {
            return Err(CliError::Config(format!(
                "group order exceeds the budget M_N <= 2^22 at depth {}",
                radices.len()
            )));
        }
    }
    GeneratorSequence::new(radices).map_err(|e| CliError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_files_with_comments() {
        let raw = RawConfig::parse("# run\ngenerator = cycle:2,3\n\ndepth=5\nseed = 7\n").unwrap();
        let cfg = ExperimentConfig::from_raw(&raw).unwrap();
        assert_eq!(cfg.generator.radices(), &[2, 3, 2, 3, 2]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.tol, DEFAULT_TOLERANCE);
        assert_eq!(cfg.alphas, AlphaSpec::Auto);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(RawConfig::parse("generator").is_err());
        assert!(RawConfig::parse("colour=red").is_err());
        assert!(RawConfig::parse("seed=1\nseed=2").is_err());
    }

    #[test]
    fn generator_specs() {
        assert_eq!(
            parse_generator("2,3,4", None).unwrap().radices(),
            &[2, 3, 4]
        );
        assert_eq!(parse_generator("const:3", Some(4)).unwrap().order(), 81);
        assert_eq!(
            parse_generator("walsh", None).unwrap().depth(),
            DEFAULT_DEPTH
        );
        assert!(parse_generator("1,2", None).is_err());
        assert!(parse_generator("2,3", Some(3)).is_err());
        assert!(parse_generator("const:2", Some(23)).is_err());
        assert!(parse_generator("const:2", Some(22)).is_ok());
        assert!(parse_generator("cycle:x", Some(3)).is_err());
    }

    #[test]
    fn alpha_specs() {
        assert_eq!(
            AlphaSpec::parse("4..6").unwrap(),
            AlphaSpec::Explicit(vec![4, 5, 6])
        );
        assert_eq!(
            AlphaSpec::parse("2, 5").unwrap(),
            AlphaSpec::Explicit(vec![2, 5])
        );
        assert_eq!(
            AlphaSpec::parse("greedy:3").unwrap(),
            AlphaSpec::Greedy {
                count: 3,
                base: DEFAULT_THRESHOLD_BASE
            }
        );
        assert_eq!(
            AlphaSpec::parse("greedy:2:2.5").unwrap(),
            AlphaSpec::Greedy {
                count: 2,
                base: 2.5
            }
        );
        for bad in ["6..4", "greedy:0", "greedy:2:1", "a,b", ""] {
            assert!(AlphaSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn validates_ranges() {
        let mut raw = RawConfig::default();
        raw.set("depth", "3").unwrap();
        raw.set("nmax", "9").unwrap();
        assert!(ExperimentConfig::from_raw(&raw).is_err());
        raw.set("nmax", "8").unwrap();
        assert!(ExperimentConfig::from_raw(&raw).is_ok());
        raw.set("tol", "-1").unwrap();
        assert!(ExperimentConfig::from_raw(&raw).is_err());
        raw.set("tol", "1e-8").unwrap();
        raw.set("phi", "const:0.5").unwrap();
        assert!(ExperimentConfig::from_raw(&raw).is_err());
    }
}
