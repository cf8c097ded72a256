//! Closed-form radial eigenfunctions.
//!
//! In the s variable the radial function is `R(s) = C phi(s) y(s)` with
//!
//! ```text
//!   dS:  phi = |s - 1|^e1 (s + 1)^e2,   e1,2 = (1 - 2 delta +- eta/delta) / 4,   y = Jacobi
//!   AdS: phi = (1 + s^2)^((1/2 - delta)/2) exp(eta/(2 delta) atan s),           y = Romanovski
//! ```
//!
//! and the full wavefunction is `psi = r^(-1/2) R Y_l^m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DeformationModel, QuantumNumbers, Space};
use crate::nu::{reduce_with, BranchId, BranchRule, KRoot};
use crate::poly::Poly;
use crate::polynomials::PolynomialFamily;
use crate::quadrature::{integrate_pieces, QuadOptions};
use crate::spectra::{self, branch_sign, radial_ode, EnergyLevel, ScaledParameters};

/// Radial measure used for normalization and overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// int |R|^2 r dr over the physical domain, i.e. int |psi|^2 d^3r.
    #[default]
    Flat,
    /// int |R|^2 r / chi dr; for AdS the s line is continued through the wall (s < 0).
    Natural,
}

impl Measure {
    /// Density with respect to ds.
    fn density_s(self, model: &DeformationModel, s: f64) -> f64 {
        let q = s * s - model.tau();
        match self {
            Measure::Flat => s / (model.lambda() * q * q),
            Measure::Natural => 1.0 / (model.lambda() * q * q.sqrt()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenstate {
    pub model: DeformationModel,
    pub qn: QuantumNumbers,
    pub energy: EnergyLevel,
    pub params: ScaledParameters,
    pub family: PolynomialFamily,
    pub polynomial: Poly,
    /// delta recovered from the NU reduction at the quantized eps.
    pub nu_delta: f64,
    pub measure: Measure,
    /// ln C, with C the normalization constant.
    pub log_norm: f64,
    /// Global sign applied after normalization.
    pub phase: f64,
    /// Radial domain (0, inf) for dS, (0, 1/sqrt(lambda)) for AdS.
    pub domain: (f64, f64),
}

/// Quadrature tolerance for the normalization integral.
const NORM_TOL: f64 = 1e-12;

pub fn build_state(model: &DeformationModel, qn: QuantumNumbers) -> Result<RadialEigenstate> {
    build_state_with(model, qn, Measure::Flat)
}

pub fn build_state_with(model: &DeformationModel, qn: QuantumNumbers, measure: Measure) -> Result<RadialEigenstate> {
    let level = spectra::energy(model, qn);
    let eps = spectra::epsilon_of_energy(model, level.energy);
    let params = ScaledParameters::new(model, qn.l, eps)?;
    let (delta, eta) = (params.delta, params.eta);
    let n = qn.n as f64;

    let family = match model.space() {
        Space::DeSitter => {
            if (delta - n).abs() > 1e-6 * n {
                return Err(Error::NonNormalizable(format!(
                    "quantized delta = {n} lies on the second k root (delta_1 = {delta})"
                )));
            }
            let e1 = (1.0 - 2.0 * delta + eta / delta) / 4.0;
            if measure == Measure::Flat && e1 <= 0.5 {
                return Err(Error::NonNormalizable(format!(
                    "large-r exponent {e1} does not exceed 1/2"
                )));
            }
            if e1 <= 0.0 {
                return Err(Error::NonNormalizable(format!("large-r exponent {e1} is not positive")));
            }
            PolynomialFamily::jacobi(-delta + eta / (2.0 * delta), -delta - eta / (2.0 * delta))?
        }
        Space::AntiDeSitter => PolynomialFamily::romanovski(-delta, eta / delta)?,
    };
    let polynomial = family.coefficients(qn.n_r() as usize)?;

    let ode = radial_ode(model.space(), qn.l, eta, eps)?;
    let red = reduce_with(
        &ode,
        BranchRule::Fixed(BranchId {
            root: KRoot::Larger,
            sign: branch_sign(model.space()),
        }),
    )?;
    let c = 0.25 + (qn.l as f64 + 0.5).powi(2);
    let nu_delta = match model.space() {
        Space::DeSitter => (c - red.k).sqrt(),
        Space::AntiDeSitter => (c + red.k).sqrt(),
    };

    let domain = (0.0, model.wall().unwrap_or(f64::INFINITY));
    let mut state = RadialEigenstate {
        model: *model,
        qn,
        energy: level,
        params,
        family,
        polynomial,
        nu_delta,
        measure,
        log_norm: 0.0,
        phase: 1.0,
        domain,
    };

    // scale by the envelope at a typical radius first to keep exponents in range
    let r_typ = state.typical_radius();
    state.log_norm = -state.ln_envelope(model.s_of_r(r_typ)?);
    let norm = state.norm(NORM_TOL)?;
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonNormalizable(format!("normalization integral = {norm}")));
    }
    state.log_norm -= 0.5 * norm.ln();

    let s_ref = match model.space() {
        Space::DeSitter => 1.0,
        Space::AntiDeSitter => 0.0,
    };
    let mut y_ref = state.polynomial.eval(s_ref);
    if y_ref == 0.0 {
        y_ref = state.polynomial.eval(s_ref + 1e-6);
    }
    state.phase = if y_ref < 0.0 { -1.0 } else { 1.0 };
    Ok(state)
}

impl RadialEigenstate {
    pub fn norm_constant(&self) -> f64 {
        self.phase * self.log_norm.exp()
    }

    pub fn delta(&self) -> f64 {
        self.params.delta
    }

    /// Exponents (e1, e2) of |s - 1| and (s + 1) for dS states.
    pub fn ds_exponents(&self) -> Option<(f64, f64)> {
        let (d, eta) = (self.params.delta, self.params.eta);
        match self.model.space() {
            Space::DeSitter => Some(((1.0 - 2.0 * d + eta / d) / 4.0, (1.0 - 2.0 * d - eta / d) / 4.0)),
            Space::AntiDeSitter => None,
        }
    }

    /// ln phi(s).
    pub fn ln_envelope(&self, s: f64) -> f64 {
        let (d, eta) = (self.params.delta, self.params.eta);
        match self.model.space() {
            Space::DeSitter => {
                let (e1, e2) = self.ds_exponents().unwrap();
                e1 * (s - 1.0).abs().ln() + e2 * (s + 1.0).ln()
            }
            Space::AntiDeSitter => 0.25 * (1.0 - 2.0 * d) * (1.0 + s * s).ln() + eta / (2.0 * d) * s.atan(),
        }
    }

    /// R as a function of s (valid on the continued AdS line s < 0 too).
    pub fn radial_at_s(&self, s: f64) -> f64 {
        let y = self.polynomial.eval(s);
        if y == 0.0 {
            return 0.0;
        }
        let ln = self.log_norm + self.ln_envelope(s) + y.abs().ln();
        self.phase * y.signum() * ln.exp()
    }

    /// The paper's R(r).
    pub fn radial_function(&self, r: f64) -> Result<f64> {
        let s = self.model.s_of_r(r)?;
        Ok(self.radial_at_s(s))
    }

    fn typical_radius(&self) -> f64 {
        let n = self.qn.n as f64;
        let r = n * n * self.model.units().bohr_radius();
        match self.model.wall() {
            Some(w) => r.min(0.5 * w),
            None => r,
        }
    }

    /// Upper radius used for sampling the dS half line.
    pub fn sampling_extent(&self) -> f64 {
        let n = self.qn.n as f64;
        match self.model.wall() {
            Some(w) => w,
            None => 60.0 * n * n * self.model.units().bohr_radius(),
        }
    }

    /// Breakpoints in s covering the bulk of the state.
    fn s_points(&self, measure: Measure) -> Vec<f64> {
        let a = self.typical_radius();
        let model = &self.model;
        let mut pts: Vec<f64> = [64.0, 16.0, 4.0, 1.0, 0.25, 0.0625]
            .iter()
            .filter_map(|k| model.s_of_r(a * k).ok())
            .collect();
        match model.space() {
            Space::DeSitter => pts.insert(0, 1.0),
            Space::AntiDeSitter => {
                pts.insert(0, 0.0);
                if measure == Measure::Natural {
                    pts.insert(0, -1.0);
                    pts.insert(0, f64::NEG_INFINITY);
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.push(f64::INFINITY);
        pts
    }

    fn s_integral<F: Fn(f64) -> f64>(&self, f: F, measure: Measure, rel_tol: f64) -> Result<f64> {
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol,
            max_intervals: 20_000,
        };
        let model = self.model;
        let lo = match model.space() {
            Space::DeSitter => 1.0,
            Space::AntiDeSitter if measure == Measure::Flat => 0.0,
            Space::AntiDeSitter => f64::NEG_INFINITY,
        };
        let integrand = |s: f64| {
            if s <= lo || !s.is_finite() {
                return 0.0;
            }
            f(s) * measure.density_s(&model, s)
        };
        let out = integrate_pieces(integrand, &self.s_points(measure), opts);
        if !out.converged && out.abs_error > 1e3 * rel_tol * out.value.abs() {
            return Err(Error::Quadrature(out.abs_error));
        }
        Ok(out.value)
    }

    /// int R^2 with the state's measure.
    pub fn norm(&self, rel_tol: f64) -> Result<f64> {
        self.s_integral(|s| self.radial_at_s(s).powi(2), self.measure, rel_tol)
    }
}

/// r^(-1/2) R(r), the radial factor of psi.
pub fn radial_eval(state: &RadialEigenstate, r: f64) -> Result<f64> {
    if !state.model.contains_radius(r) {
        return Err(Error::Domain(format!("r = {r} outside the radial domain")));
    }
    Ok(state.radial_function(r)? / r.sqrt())
}

/// Strict sign changes of radial_eval on a uniform grid over the interior 99.9% of the domain.
pub fn count_nodes(state: &RadialEigenstate, samples: usize) -> Result<usize> {
    if samples < 1000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    let extent = state.sampling_extent();
    let (lo, hi) = (0.0005 * extent, 0.9995 * extent);
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for i in 0..samples {
        let r = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let v = radial_eval(state, r)?;
        if v != 0.0 {
            if prev != 0.0 && v.signum() != prev.signum() {
                nodes += 1;
            }
            prev = v;
        }
    }
    Ok(nodes)
}

/// Orthonormal spherical harmonic with the Condon-Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    if am > l {
        return Complex64::new(0.0, 0.0);
    }
    let x = theta.cos();
    let sx = theta.sin().abs();
    // normalized P_m^m, then upward recurrence in l
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=am {
        let k = k as f64;
        pmm *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt() * sx;
    }
    let mut plm = pmm;
    if l > am {
        let mf = am as f64;
        let mut p_prev = pmm;
        let mut p_cur = x * (2.0 * mf + 3.0).sqrt() * pmm;
        for ll in (am + 2)..=l {
            let lf = ll as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            let next = a * (x * p_cur - b * p_prev);
            p_prev = p_cur;
            p_cur = next;
        }
        plm = p_cur;
    }
    let y = Complex64::from_polar(plm, am as f64 * phi);
    if m < 0 {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    }
}

pub fn psi_eval(state: &RadialEigenstate, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(Error::Domain("angles must be finite".into()));
    }
    let radial = radial_eval(state, r)?;
    Ok(spherical_harmonic(state.qn.l, state.qn.m, theta, phi) * radial)
}

/// int R_a R_b with the given measure.
pub fn overlap(a: &RadialEigenstate, b: &RadialEigenstate, measure: Measure) -> Result<f64> {
    if a.model != b.model {
        return Err(Error::InvalidParameter("states belong to different models".into()));
    }
    a.s_integral(|s| a.radial_at_s(s) * b.radial_at_s(s), measure, 1e-12)
}
