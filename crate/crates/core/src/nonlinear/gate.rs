//! Parameter gates from the well-posedness theory.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SobolevIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    HalfLine,
    Interval,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::HalfLine => "half-line",
            Domain::Interval => "interval",
        })
    }
}

/// Which local theory covers the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalRegime {
    /// `1/2 < s < 5/2`, any `p >= 3`.
    HighRegularity,
    /// `0 <= s < 1/2`, `p` bounded in terms of `s`.
    LowRegularity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub domain: Domain,
    pub s: f64,
    pub p: f64,
    pub lambda: f64,
    /// Regime, or the violated inequality.
    pub local: std::result::Result<LocalRegime, String>,
    /// `Ok` when the global theory also applies, otherwise the reason.
    pub global: std::result::Result<(), String>,
}

impl GateReport {
    pub fn local_ok(&self) -> bool {
        self.local.is_ok()
    }

    pub fn global_ok(&self) -> bool {
        self.local.is_ok() && self.global.is_ok()
    }

    /// The local verdict as a `Result`, refusing with [`Error::Gate`].
    pub fn require_local(&self) -> Result<LocalRegime> {
        self.local.clone().map_err(Error::Gate)
    }

    pub fn require_global(&self) -> Result<()> {
        self.require_local()?;
        self.global.clone().map_err(Error::Gate)
    }
}

fn is_integer(p: f64) -> bool {
    (p - p.round()).abs() < 1e-12
}

/// Largest integer strictly less than `s`.
fn floor_strict(s: f64) -> f64 {
    s.ceil() - 1.0
}

fn smoothness(s: f64, p: f64) -> std::result::Result<(), String> {
    if is_integer(p) {
        let pi = p.round() as i64;
        if pi % 2 != 0 && s > p - 1.0 + 1e-12 {
            return Err(format!("odd p needs s <= p - 1 = {}, got s = {s}", p - 1.0));
        }
    } else if floor_strict(s) >= p - 2.0 {
        return Err(format!(
            "non-integer p needs floor(s) < p - 2 (floor(s) = {}, p - 2 = {}), got s = {s}",
            floor_strict(s),
            p - 2.0
        ));
    }
    Ok(())
}

fn local(domain: Domain, s: f64, p: f64, lambda: f64) -> std::result::Result<LocalRegime, String> {
    if !(lambda != 0.0 && lambda.is_finite()) {
        return Err(format!("lambda must be a non-zero real number, got {lambda}"));
    }
    if !(p >= 3.0 && p.is_finite()) {
        return Err(format!("p must satisfy p >= 3, got p = {p}"));
    }
    let idx = SobolevIndex::new(s).map_err(|e| e.to_string())?;
    if let Err(Error::Gate(m)) = idx.check_spatial() {
        return Err(m);
    }
    if s >= 2.5 {
        return Err(format!("s must satisfy s < 5/2, got s = {s}"));
    }
    smoothness(s, p)?;
    if s > 0.5 {
        return Ok(LocalRegime::HighRegularity);
    }
    match domain {
        Domain::HalfLine => {
            let bound = (6.0 - 4.0 * s) / (1.0 - 2.0 * s);
            if p < bound {
                Ok(LocalRegime::LowRegularity)
            } else {
                Err(format!(
                    "half-line with 0 <= s < 1/2 needs 3 <= p < (6-4s)/(1-2s), i.e. p < {bound} at s = {s}; got p = {p}"
                ))
            }
        }
        Domain::Interval => {
            if p <= 4.0 {
                Ok(LocalRegime::LowRegularity)
            } else {
                Err(format!("interval with 0 <= s < 1/2 needs 3 <= p <= 4; got p = {p}"))
            }
        }
    }
}

fn global(domain: Domain, s: f64, p: f64, lambda: f64) -> std::result::Result<(), String> {
    if !(1.0..2.5).contains(&s) {
        return Err(format!("global theory needs 1 <= s < 5/2, got s = {s}"));
    }
    if lambda < 0.0 {
        return Ok(());
    }
    match domain {
        Domain::HalfLine if p > 4.0 => {
            Err(format!("focusing (lambda > 0) half-line global theory needs 3 <= p <= 4; got p = {p}"))
        }
        Domain::Interval if p > 10.0 / 3.0 + 1e-12 => {
            Err(format!("focusing (lambda > 0) interval global theory needs 3 <= p <= 10/3; got p = {p}"))
        }
        _ => Ok(()),
    }
}

/// Evaluates the local and global well-posedness conditions.
pub fn gate(domain: Domain, s: f64, p: f64, lambda: f64) -> GateReport {
    GateReport { domain, s, p, lambda, local: local(domain, s, p, lambda), global: global(domain, s, p, lambda) }
}
