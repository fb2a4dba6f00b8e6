use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A nondecreasing weight `φ: N_+ -> [1, ∞)`. Logarithms are natural.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    /// `φ_n = c` with `c >= 1`.
    Constant(f64),
    /// `φ_n = max(1, (log n)^θ)` with `θ > 0`.
    LogPower(f64),
    /// `φ_n = max(1, log log n)`.
    IteratedLog,
    /// `φ_n = table[n - 1]`, extended by its last entry.
    Table(Vec<f64>),
}

impl Phi {
    pub fn one() -> Self {
        Phi::Constant(1.0)
    }

    pub fn log() -> Self {
        Phi::LogPower(1.0)
    }

    /// Checks `φ >= 1`, monotonicity and finite parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            Phi::Constant(c) if !(c.is_finite() && *c >= 1.0) => Err(Error::InvalidPhi(format!(
                "constant {c} must be finite and >= 1"
            ))),
            Phi::LogPower(theta) if !(theta.is_finite() && *theta > 0.0) => Err(Error::InvalidPhi(
                format!("log exponent {theta} must be positive"),
            )),
            Phi::Table(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidPhi("empty table".into()));
                }
                if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 1.0)) {
                    return Err(Error::InvalidPhi(format!(
                        "table value {v} must be finite and >= 1"
                    )));
                }
                if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
                    return Err(Error::InvalidPhi(format!(
                        "table decreases at n = {}",
                        i + 2
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `φ_n` for `n >= 1`; `n = 0` is read as `n = 1`.
    pub fn eval(&self, n: usize) -> f64 {
        match self {
            Phi::Table(values) => values[n.max(1).min(values.len()) - 1],
            _ => self.eval_ln((n.max(1) as f64).ln()),
        }
    }

    /// `φ_n` given `log n`, usable when `n` itself overflows.
    pub fn eval_ln(&self, ln_n: f64) -> f64 {
        match self {
            Phi::Constant(c) => *c,
            Phi::LogPower(theta) => {
                if ln_n <= 1.0 {
                    1.0
                } else {
                    ln_n.powf(*theta)
                }
            }
            Phi::IteratedLog => {
                if ln_n <= 1.0 {
                    1.0
                } else {
                    ln_n.ln().max(1.0)
                }
            }
            Phi::Table(values) => {
                let len = values.len();
                if ln_n >= (len as f64).ln() + 1e-9 {
                    values[len - 1]
                } else {
                    self.eval(ln_n.exp().round() as usize)
                }
            }
        }
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phi::Constant(c) => write!(f, "const:{c}"),
            Phi::LogPower(theta) if *theta == 1.0 => f.write_str("log"),
            Phi::LogPower(theta) => write!(f, "logpow:{theta}"),
            Phi::IteratedLog => f.write_str("loglog"),
            Phi::Table(values) => {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Phi {
    type Err = Error;

    /// Parses `const:c`, `log`, `logpow:θ`, `loglog` or `table:v1,v2,..`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |text: &str| -> Result<f64> {
            text.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidPhi(format!("cannot parse number {text:?}")))
        };
        let phi = match s.split_once(':') {
            None => match s {
                "log" => Phi::log(),
                "loglog" => Phi::IteratedLog,
                "one" => Phi::one(),
                _ => return Err(Error::InvalidPhi(format!("unknown weight {s:?}"))),
            },
            Some(("const", c)) => Phi::Constant(number(c)?),
            Some(("logpow", theta)) => Phi::LogPower(number(theta)?),
            Some(("table", values)) => Phi::Table(
                values
                    .split(',')
                    .map(number)
                    .collect::<Result<Vec<f64>>>()?,
            ),
            Some(_) => return Err(Error::InvalidPhi(format!("unknown weight {s:?}"))),
        };
        phi.validate()?;
        Ok(phi)
    }
}
