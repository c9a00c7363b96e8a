use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Sobolev regularity index `s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return invalid(format!("Sobolev index must be finite and >= 0, got {s}"));
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `s = n + 1/2` for some integer `n >= 0`.
    pub fn is_half_integer(self) -> bool {
        let f = self.0 - 0.5;
        f >= -1e-12 && (f - f.round()).abs() < 1e-12
    }

    /// Rejects the excluded half-integer indices.
    pub fn check_spatial(self) -> Result<Self> {
        if self.is_half_integer() {
            let n = (self.0 - 0.5).round();
            return Err(Error::Gate(format!(
                "s must satisfy s != n + 1/2; s = {} is excluded (n = {n})",
                self.0
            )));
        }
        Ok(self)
    }
}

impl TryFrom<f64> for SobolevIndex {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SobolevIndex> for f64 {
    fn from(s: SobolevIndex) -> f64 {
        s.0
    }
}

/// Strichartz-admissible exponents, `1/q + 1/(2r) = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    q: f64,
    r: f64,
}

impl AdmissiblePair {
    pub fn new(q: f64, r: f64) -> Result<Self> {
        if !(q >= 2.0 && r >= 2.0) {
            return invalid(format!("admissible pair needs q, r >= 2, got ({q}, {r})"));
        }
        let lhs = recip(q) + 0.5 * recip(r);
        if (lhs - 0.25).abs() > 1e-12 {
            return invalid(format!("(q, r) = ({q}, {r}) violates 1/q + 1/(2r) = 1/4"));
        }
        Ok(Self { q, r })
    }

    /// The pair with the given spatial exponent.
    pub fn from_r(r: f64) -> Result<Self> {
        let q_inv = 0.25 - 0.5 * recip(r);
        if q_inv < -1e-15 {
            return invalid(format!("no admissible q for r = {r}"));
        }
        let q = if q_inv.abs() <= 1e-15 { f64::INFINITY } else { 1.0 / q_inv };
        Self::new(q, r)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}
