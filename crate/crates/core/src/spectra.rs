//! Closed-form deformed hydrogen energies and the quantities derived from them.
//!
//! Energies follow one signed formula for both spaces:
//!
//! ```text
//!   E(n, l) = -m (k e^2)^2 / (2 hbar^2 n^2) - tau (lambda hbar^2 / 2m) (n^2 - l(l+1) - 1)
//! ```
//!
//! The scaled spectral parameter is `eps = E / (lambda hbar^2 / 2m) - tau/2`
//! and the scaled coupling `eta = 2 m k e^2 / (hbar^2 sqrt(lambda))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DeformationModel, QuantumNumbers, Space};
use crate::nu::{solve_level, BranchRule, HypergeometricOde, Sign};
use crate::poly::Poly;
use crate::units::UnitSystem;

/// Dimensionless parameters of the radial equation in the s variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledParameters {
    pub eta: f64,
    pub epsilon: f64,
    /// delta of the larger k root.
    pub delta: f64,
    /// delta of the smaller k root (dS); the imaginary-free partner is absent for AdS.
    pub delta_other: Option<f64>,
    pub discriminant: f64,
}

/// c = 1/4 + (l + 1/2)^2.
fn centrifugal(l: u32) -> f64 {
    let lh = l as f64 + 0.5;
    0.25 + lh * lh
}

impl ScaledParameters {
    pub fn new(model: &DeformationModel, l: u32, epsilon: f64) -> Result<Self> {
        let eta = eta(model);
        let c = centrifugal(l);
        match model.space() {
            Space::DeSitter => {
                let gap = c - epsilon;
                let disc = (gap - eta) * (gap + eta);
                if disc < 0.0 || gap < 0.0 {
                    return Err(Error::ComplexDelta(disc));
                }
                let root = disc.sqrt();
                let big = 0.5 * (gap + root);
                let small = 0.25 * eta * eta / big;
                Ok(ScaledParameters {
                    eta,
                    epsilon,
                    delta: small.sqrt(),
                    delta_other: Some(big.sqrt()),
                    discriminant: disc,
                })
            }
            Space::AntiDeSitter => {
                let shift = c + epsilon;
                let disc = shift * shift + eta * eta;
                let root = disc.sqrt();
                let sq = if shift >= 0.0 {
                    0.5 * (shift + root)
                } else {
                    0.5 * eta * eta / (root - shift)
                };
                Ok(ScaledParameters {
                    eta,
                    epsilon,
                    delta: sq.sqrt(),
                    delta_other: None,
                    discriminant: disc,
                })
            }
        }
    }

    /// The larger k root: c - delta^2 (dS) or delta^2 - c (AdS).
    pub fn k1(&self, space: Space, l: u32) -> f64 {
        let c = centrifugal(l);
        match space {
            Space::DeSitter => c - self.delta * self.delta,
            Space::AntiDeSitter => self.delta * self.delta - c,
        }
    }
}

pub fn eta(model: &DeformationModel) -> f64 {
    let u = model.units();
    2.0 * u.mass * u.coupling() / (u.hbar * u.hbar * model.lambda().sqrt())
}

/// lambda hbar^2 / 2m.
fn level_unit(model: &DeformationModel) -> f64 {
    model.lambda() * model.units().kinetic_scale()
}

pub fn epsilon_of_energy(model: &DeformationModel, energy: f64) -> f64 {
    energy / level_unit(model) - 0.5 * model.tau()
}

pub fn energy_of_epsilon(model: &DeformationModel, epsilon: f64) -> f64 {
    level_unit(model) * (epsilon + 0.5 * model.tau())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub qn: QuantumNumbers,
    pub model: DeformationModel,
    pub energy: f64,
    pub bohr_term: f64,
    /// The lambda-proportional part of the energy.
    pub correction: f64,
}

fn bohr_term(units: &UnitSystem, n: u32) -> f64 {
    let n = n as f64;
    -units.hartree_energy() / (2.0 * n * n)
}

pub fn energy(model: &DeformationModel, qn: QuantumNumbers) -> EnergyLevel {
    let bohr = bohr_term(model.units(), qn.n);
    let correction = -model.tau() * level_unit(model) * qn.correction_factor();
    EnergyLevel {
        qn,
        model: *model,
        energy: bohr + correction,
        bohr_term: bohr,
        correction,
    }
}

/// Energy for lambda >= 0, including the undeformed point lambda = 0.
pub fn energy_at(space: Space, lambda: f64, units: &UnitSystem, qn: QuantumNumbers) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    let corr = -space.tau() * lambda * units.kinetic_scale() * qn.correction_factor();
    Ok(bohr_term(units, qn.n) + corr)
}

/// Quantized scaled spectral parameter of a level.
pub fn quantized_epsilon(model: &DeformationModel, qn: QuantumNumbers) -> f64 {
    epsilon_of_energy(model, energy(model, qn).energy)
}

/// Deformation at which the AdS level (n, l) reaches zero energy (Hartree units).
pub fn lambda_critical(qn: QuantumNumbers) -> Result<f64> {
    let f = qn.correction_factor();
    if f <= 0.0 {
        return Err(Error::UndefinedCritical { n: qn.n, l: qn.l });
    }
    let n2 = (qn.n as f64).powi(2);
    Ok(1.0 / (n2 * f))
}

/// Deformation at which the dS level (n, l) crosses the ground level (Hartree units).
pub fn lambda_inversion(qn: QuantumNumbers) -> Result<f64> {
    let f = qn.correction_factor();
    if qn.n < 2 || f <= 0.0 {
        return Err(Error::UndefinedInversion { n: qn.n, l: qn.l });
    }
    let n2 = (qn.n as f64).powi(2);
    Ok((n2 - 1.0) / (n2 * f))
}

/// Rows n = 2..=n_max, columns l = 0..n-1 (absent entries are `None`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub n_max: u32,
    pub critical: Vec<Vec<Option<f64>>>,
    pub inversion: Vec<Vec<Option<f64>>>,
}

impl Tables {
    pub fn critical_at(&self, n: u32, l: u32) -> Option<f64> {
        cell(&self.critical, n, l)
    }

    pub fn inversion_at(&self, n: u32, l: u32) -> Option<f64> {
        cell(&self.inversion, n, l)
    }
}

fn cell(rows: &[Vec<Option<f64>>], n: u32, l: u32) -> Option<f64> {
    let row = rows.get(n.checked_sub(2)? as usize)?;
    row.get(l as usize).copied().flatten()
}

pub const CRITICAL_DECIMALS: usize = 4;
pub const INVERSION_DECIMALS: usize = 3;

pub fn make_tables(n_max: u32) -> Result<Tables> {
    if !(2..=20).contains(&n_max) {
        return Err(Error::InvalidParameter(format!("n_max must be in 2..=20, got {n_max}")));
    }
    let mut critical = Vec::new();
    let mut inversion = Vec::new();
    for n in 2..=n_max {
        let qns: Vec<QuantumNumbers> = (0..n).map(|l| QuantumNumbers::nl(n, l)).collect::<Result<_>>()?;
        critical.push(qns.iter().map(|&q| lambda_critical(q).ok()).collect());
        inversion.push(qns.iter().map(|&q| lambda_inversion(q).ok()).collect());
    }
    Ok(Tables {
        n_max,
        critical,
        inversion,
    })
}

/// Round half away from zero to `decimals` places.
pub fn round_display(x: f64, decimals: usize) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

pub fn format_display(x: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, round_display(x, decimals))
}

/// (E_2s - E_1s)/E_1s together with its two closed-form expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRatio {
    pub ratio: f64,
    /// -3/4 - 3 (hbar^2 / m^2 k^2 e^4) dP_min^2.
    pub closed_form: f64,
    /// Same with coefficient 3/2.
    pub closed_form_half: f64,
}

pub fn transition_ratio(model: &DeformationModel) -> Result<TransitionRatio> {
    if model.space() != Space::AntiDeSitter {
        return Err(Error::UnsupportedModel(
            "the 2s-1s ratio bound needs the anti-de Sitter model".into(),
        ));
    }
    let e1 = energy(model, QuantumNumbers::nl(1, 0)?).energy;
    let e2 = energy(model, QuantumNumbers::nl(2, 0)?).energy;
    let u = model.units();
    let dp = model.min_momentum_uncertainty()?;
    let g = u.hbar * u.hbar / (u.mass * u.mass * u.coupling() * u.coupling()) * dp * dp;
    Ok(TransitionRatio {
        ratio: (e2 - e1) / e1,
        closed_form: -0.75 - 3.0 * g,
        closed_form_half: -0.75 - 1.5 * g,
    })
}

/// Upper bound on the AdS deformation implied by a relative spectroscopic precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectroscopicBound {
    pub precision: f64,
    /// dP_min with coefficient 3/2 in the ratio.
    pub dp_min_half: f64,
    /// dP_min with coefficient 3.
    pub dp_min: f64,
    pub lambda_half: f64,
    pub lambda: f64,
}

pub fn spectroscopic_bound(precision: f64, units: &UnitSystem) -> Result<SpectroscopicBound> {
    if !(precision >= 0.0 && precision.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "precision must be >= 0, got {precision}"
        )));
    }
    units.validate()?;
    let p0 = units.mass * units.coupling() / units.hbar;
    let dp_min_half = (2.0 * precision / 3.0).sqrt() * p0;
    let dp_min = (precision / 3.0).sqrt() * p0;
    let inv = |dp: f64| (dp / units.hbar).powi(2);
    Ok(SpectroscopicBound {
        precision,
        dp_min_half,
        dp_min,
        lambda_half: inv(dp_min_half),
        lambda: inv(dp_min),
    })
}

/// The radial equation in s as a hypergeometric-type ODE with spectral parameter eps.
pub fn radial_ode(space: Space, l: u32, eta: f64, epsilon: f64) -> Result<HypergeometricOde> {
    let lh = l as f64 + 0.5;
    let (sigma, tau_tilde) = match space {
        Space::DeSitter => (Poly::quadratic(-1.0, 0.0, 1.0), Poly::linear(-1.0, 0.0)),
        Space::AntiDeSitter => (Poly::quadratic(1.0, 0.0, 1.0), Poly::linear(1.0, 0.0)),
    };
    HypergeometricOde::new(sigma, tau_tilde, Poly::quadratic(-lh * lh, eta, epsilon))
}

/// Sign of the physical pi branch for each space.
pub fn branch_sign(space: Space) -> Sign {
    match space {
        Space::DeSitter => Sign::Plus,
        Space::AntiDeSitter => Sign::Minus,
    }
}

/// Energy obtained by quantizing the radial ODE family with the NU engine.
///
/// The bracket starts at +-50% of the closed-form eps and is halved while it
/// encloses no sign change or more than one candidate branch: the level
/// residual also vanishes at delta = n_r - l, which a wide bracket can enclose.
pub fn energy_via_nu(model: &DeformationModel, qn: QuantumNumbers) -> Result<f64> {
    let eta = eta(model);
    let eps0 = quantized_epsilon(model, qn);
    let space = model.space();
    let l = qn.l;
    let ceiling = match space {
        // keep the k equation real on the whole bracket
        Space::DeSitter => centrifugal(qn.l) - eta,
        Space::AntiDeSitter => f64::INFINITY,
    };
    let mut width = 0.5 * eps0.abs().max(1e-3);
    let mut last = Error::NoSignChange { lo: eps0, hi: eps0 };
    for _ in 0..BRACKET_HALVINGS {
        let hi = (eps0 + width).min(ceiling);
        let lo = (eps0 - width).min(hi);
        match solve_level(
            |eps| radial_ode(space, l, eta, eps),
            qn.n_r(),
            (lo, hi),
            BranchRule::Sign(branch_sign(space)),
        ) {
            Ok(sol) => return Ok(energy_of_epsilon(model, sol.epsilon)),
            Err(e @ (Error::NoSignChange { .. } | Error::AmbiguousBranch(_))) => last = e,
            Err(e) => return Err(e),
        }
        width *= 0.5;
    }
    Err(last)
}

const BRACKET_HALVINGS: usize = 30;
