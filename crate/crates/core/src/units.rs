use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants entering the Coulomb problem.
///
/// `e2` is the squared charge and `k_coulomb` the Coulomb constant, so the
/// coupling of the potential is `k_coulomb * e2` (energy times length).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mass: f64,
    pub hbar: f64,
    pub e2: f64,
    pub k_coulomb: f64,
}

impl UnitSystem {
    /// Hartree atomic units: m = hbar = e = 4 pi eps0 = 1.
    pub const HARTREE: UnitSystem = UnitSystem {
        mass: 1.0,
        hbar: 1.0,
        e2: 1.0,
        k_coulomb: 1.0,
    };

    /// SI values (CODATA 2018): electron mass, reduced Planck constant,
    /// elementary charge squared and 1/(4 pi eps0).
    pub const SI: UnitSystem = UnitSystem {
        mass: 9.109_383_701_5e-31,
        hbar: 1.054_571_817e-34,
        e2: 1.602_176_634e-19 * 1.602_176_634e-19,
        k_coulomb: 8.987_551_792_3e9,
    };

    pub fn new(mass: f64, hbar: f64, e2: f64, k_coulomb: f64) -> Result<Self> {
        let units = UnitSystem {
            mass,
            hbar,
            e2,
            k_coulomb,
        };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("e2", self.e2),
            ("k_coulomb", self.k_coulomb),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "unit constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Coulomb coupling k e^2.
    pub fn coupling(&self) -> f64 {
        self.k_coulomb * self.e2
    }

    /// Bohr radius hbar^2 / (m k e^2).
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.coupling())
    }

    /// Hartree energy m (k e^2)^2 / hbar^2.
    pub fn hartree_energy(&self) -> f64 {
        let g = self.coupling();
        self.mass * g * g / (self.hbar * self.hbar)
    }

    /// hbar^2 / (2 m), the kinetic prefactor.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::HARTREE
    }
}
