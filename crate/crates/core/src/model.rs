//! The deformed algebra [X_i, P_j] = i hbar (delta_ij - tau lambda X_i X_j),
//! its uncertainty floor, and the radial coordinate map used by the solvers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Sign of the deformation: de Sitter (tau = +1) or anti-de Sitter (tau = -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "ds")]
    DeSitter,
    #[serde(rename = "ads")]
    AntiDeSitter,
}

impl Space {
    pub const BOTH: [Space; 2] = [Space::DeSitter, Space::AntiDeSitter];

    pub fn tau(self) -> f64 {
        match self {
            Space::DeSitter => 1.0,
            Space::AntiDeSitter => -1.0,
        }
    }

    pub fn tau_sign(self) -> i32 {
        match self {
            Space::DeSitter => 1,
            Space::AntiDeSitter => -1,
        }
    }

    pub fn from_tau(tau: i32) -> Result<Self> {
        match tau {
            1 => Ok(Space::DeSitter),
            -1 => Ok(Space::AntiDeSitter),
            other => Err(Error::InvalidParameter(format!("tau must be +1 or -1, got {other}"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Space::DeSitter => "ds",
            Space::AntiDeSitter => "ads",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds" | "desitter" | "+1" | "1" => Ok(Space::DeSitter),
            "ads" | "antidesitter" | "anti-desitter" | "-1" => Ok(Space::AntiDeSitter),
            _ => Err(Error::InvalidParameter(format!(
                "unknown model '{s}', expected 'ds' or 'ads'"
            ))),
        }
    }
}

/// A deformed-algebra model. `lambda` is strictly positive; the undeformed
/// limit is only reached through sequences of models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationModel {
    space: Space,
    lambda: f64,
    units: UnitSystem,
}

impl DeformationModel {
    pub fn new(space: Space, lambda: f64) -> Result<Self> {
        Self::with_units(space, lambda, UnitSystem::HARTREE)
    }

    pub fn with_units(space: Space, lambda: f64, units: UnitSystem) -> Result<Self> {
        units.validate()?;
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "deformation lambda must be positive and finite, got {lambda} \
                 (the lambda = 0 Bohr limit is only available as a limit)"
            )));
        }
        Ok(DeformationModel { space, lambda, units })
    }

    pub fn de_sitter(lambda: f64) -> Result<Self> {
        Self::new(Space::DeSitter, lambda)
    }

    pub fn anti_de_sitter(lambda: f64) -> Result<Self> {
        Self::new(Space::AntiDeSitter, lambda)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn tau(&self) -> f64 {
        self.space.tau()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    /// de Sitter radius a = 1 / sqrt(lambda).
    pub fn ds_radius(&self) -> f64 {
        1.0 / self.lambda.sqrt()
    }

    /// Gamma = 3 tau lambda.
    pub fn cosmological_constant(&self) -> f64 {
        3.0 * self.tau() * self.lambda
    }

    /// Upper end of the radial domain: 1/sqrt(lambda) for AdS, none for dS.
    pub fn wall(&self) -> Option<f64> {
        match self.space {
            Space::DeSitter => None,
            Space::AntiDeSitter => Some(self.ds_radius()),
        }
    }

    /// chi(r) = sqrt(1 + tau lambda r^2).
    pub fn chi(&self, r: f64) -> f64 {
        (1.0 + self.tau() * self.lambda * r * r).sqrt()
    }

    pub fn contains_radius(&self, r: f64) -> bool {
        r > 0.0 && r.is_finite() && self.wall().is_none_or(|w| r < w)
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if self.contains_radius(r) {
            Ok(())
        } else {
            Err(Error::Domain(match self.wall() {
                Some(w) => format!("radius {r} outside (0, {w})"),
                None => format!("radius {r} must be positive"),
            }))
        }
    }

    /// s = sqrt(1 + tau lambda r^2) / (sqrt(lambda) r).
    pub fn s_of_r(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(self.chi(r) / (self.lambda.sqrt() * r))
    }

    /// Inverse of [`s_of_r`](Self::s_of_r): r = 1 / sqrt(lambda (s^2 - tau)).
    pub fn r_of_s(&self, s: f64) -> Result<f64> {
        let ok = match self.space {
            Space::DeSitter => s > 1.0,
            Space::AntiDeSitter => s > 0.0,
        };
        if !ok || s.is_nan() {
            return Err(Error::Domain(format!(
                "s = {s} outside the {} range",
                match self.space {
                    Space::DeSitter => "(1, inf)",
                    Space::AntiDeSitter => "(0, inf)",
                }
            )));
        }
        if s.is_infinite() {
            return Ok(0.0);
        }
        // s^2 - 1 = (s - 1)(s + 1) keeps precision close to s = 1
        let gap = match self.space {
            Space::DeSitter => (s - 1.0) * (s + 1.0),
            Space::AntiDeSitter => s * s + 1.0,
        };
        Ok(1.0 / (self.lambda * gap).sqrt())
    }

    /// Minimal admissible momentum spread at position spread `dx`:
    /// (hbar/2) (1/dx - tau lambda dx).
    pub fn uncertainty_floor(&self, dx: f64) -> Result<f64> {
        if dx.is_nan() || dx <= 0.0 {
            return Err(Error::Domain(format!("position spread {dx} must be positive")));
        }
        Ok(0.5 * self.units.hbar * (1.0 / dx - self.tau() * self.lambda * dx))
    }

    /// hbar sqrt(lambda); only the AdS algebra has a nonzero floor.
    pub fn min_momentum_uncertainty(&self) -> Result<f64> {
        match self.space {
            Space::AntiDeSitter => Ok(self.units.hbar * self.lambda.sqrt()),
            Space::DeSitter => Err(Error::UnsupportedModel(
                "the de Sitter algebra has no nonzero minimal momentum uncertainty".into(),
            )),
        }
    }
}

/// Hydrogen quantum numbers with n = n_r + l + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("principal number n must be >= 1".into()));
        }
        if l >= n {
            return Err(Error::InvalidParameter(format!(
                "azimuthal number l = {l} must be below n = {n}"
            )));
        }
        if m.unsigned_abs() > l {
            return Err(Error::InvalidParameter(format!(
                "magnetic number m = {m} must satisfy |m| <= l = {l}"
            )));
        }
        Ok(QuantumNumbers { n, l, m })
    }

    /// (n, l) with m = 0.
    pub fn nl(n: u32, l: u32) -> Result<Self> {
        Self::new(n, l, 0)
    }

    pub fn from_radial(n_r: u32, l: u32, m: i32) -> Result<Self> {
        Self::new(n_r + l + 1, l, m)
    }

    pub fn n_r(&self) -> u32 {
        self.n - self.l - 1
    }

    /// n^2 - l(l+1) - 1, the coefficient of the deformation correction.
    pub fn correction_factor(&self) -> f64 {
        let n = self.n as f64;
        let l = self.l as f64;
        n * n - l * (l + 1.0) - 1.0
    }
}
