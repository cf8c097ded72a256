//! Jacobi and Romanovski polynomials with arbitrary real parameters,
//! generated through the Rodrigues recurrence of [`crate::nu`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nu::rodrigues_from_tau;
use crate::poly::Poly;
use crate::quadrature::{integrate, Integral, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolynomialFamily {
    /// Weight (1 - s)^a (1 + s)^b.
    Jacobi { a: f64, b: f64 },
    /// Weight (1 + s^2)^alpha exp(beta atan s).
    Romanovski { alpha: f64, beta: f64 },
}

impl PolynomialFamily {
    pub fn jacobi(a: f64, b: f64) -> Result<Self> {
        check_finite(&[a, b])?;
        Ok(PolynomialFamily::Jacobi { a, b })
    }

    pub fn romanovski(alpha: f64, beta: f64) -> Result<Self> {
        check_finite(&[alpha, beta])?;
        Ok(PolynomialFamily::Romanovski { alpha, beta })
    }

    pub fn sigma(&self) -> Poly {
        match self {
            PolynomialFamily::Jacobi { .. } => Poly::quadratic(-1.0, 0.0, 1.0),
            PolynomialFamily::Romanovski { .. } => Poly::quadratic(1.0, 0.0, 1.0),
        }
    }

    /// tau of the Pearson equation (sigma rho)' = tau rho for the canonical weight.
    pub fn tau(&self) -> Poly {
        match *self {
            PolynomialFamily::Jacobi { a, b } => Poly::linear(-(a + b + 2.0), b - a),
            PolynomialFamily::Romanovski { alpha, beta } => Poly::linear(2.0 * (alpha + 1.0), beta),
        }
    }

    pub fn weight(&self, s: f64) -> f64 {
        match *self {
            PolynomialFamily::Jacobi { a, b } => (1.0 - s).abs().powf(a) * (1.0 + s).abs().powf(b),
            PolynomialFamily::Romanovski { alpha, beta } => (1.0 + s * s).powf(alpha) * (beta * s.atan()).exp(),
        }
    }

    /// Coefficients of the degree-n member.
    pub fn coefficients(&self, n: usize) -> Result<Poly> {
        let y = rodrigues_from_tau(&self.sigma(), &self.tau(), n)?;
        Ok(match self {
            PolynomialFamily::Jacobi { .. } => {
                let factorial: f64 = (1..=n).map(|k| k as f64).product();
                y.scale(1.0 / ((-2f64).powi(n as i32) * factorial))
            }
            PolynomialFamily::Romanovski { .. } => y,
        })
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("family parameters must be finite".into()))
    }
}

pub fn eval_poly(family: &PolynomialFamily, n: usize, s: f64) -> Result<f64> {
    Ok(family.coefficients(n)?.eval(s))
}

/// Integral of y_n y_m rho over `interval` (endpoints may be infinite).
pub fn weighted_inner_product(family: &PolynomialFamily, n: usize, m: usize, interval: (f64, f64)) -> Result<f64> {
    let (lo, hi) = if interval.0 <= interval.1 {
        interval
    } else {
        (interval.1, interval.0)
    };
    check_integrable(family, n + m, lo, hi)?;
    let yn = family.coefficients(n)?;
    let ym = family.coefficients(m)?;

    // split at the finite singular points of the weight
    let mut points = vec![lo];
    if let PolynomialFamily::Jacobi { .. } = family {
        for p in [-1.0, 1.0] {
            if p > lo && p < hi {
                points.push(p);
            }
        }
    }
    if lo < 0.0 && hi > 0.0 && points.len() == 1 {
        points.push(0.0);
    }
    points.push(hi);

    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-13,
        max_intervals: 20_000,
    };
    // the weight is evaluated from the exact offset to the nearest singular point
    let f = |anchor: f64, off: f64| {
        let s = anchor + off;
        let w = match *family {
            PolynomialFamily::Jacobi { a, b } if anchor == 1.0 => (-off).abs().powf(a) * (2.0 + off).abs().powf(b),
            PolynomialFamily::Jacobi { a, b } if anchor == -1.0 => (2.0 - off).abs().powf(a) * off.abs().powf(b),
            _ => family.weight(s),
        };
        yn.eval(s) * ym.eval(s) * w
    };
    let singular = |p: f64| match *family {
        PolynomialFamily::Jacobi { a, .. } if p == 1.0 => a.min(0.0),
        PolynomialFamily::Jacobi { b, .. } if p == -1.0 => b.min(0.0),
        _ => 0.0,
    };
    let (mut value, mut error, mut converged) = (0.0, 0.0, true);
    for w in points.windows(2) {
        let r = integrate_piece(&f, w[0], w[1], singular(w[0]), singular(w[1]), opts);
        value += r.value;
        error += r.abs_error;
        converged &= r.converged;
    }
    if !converged && error > 1e-10 {
        return Err(Error::Quadrature(error));
    }
    Ok(value)
}

/// Integral over [a, b] of f(anchor, s - anchor), where the integrand behaves like
/// |s - a|^ea and |s - b|^eb. Negative exponents are removed with
/// s - a = t^(1/(1+ea)) and likewise at b.
fn integrate_piece<F: Fn(f64, f64) -> f64>(f: &F, a: f64, b: f64, ea: f64, eb: f64, opts: QuadOptions) -> Integral {
    if ea < 0.0 && eb < 0.0 {
        let mid = 0.5 * (a + b);
        let left = integrate_piece(f, a, mid, ea, 0.0, opts);
        let right = integrate_piece(f, mid, b, 0.0, eb, opts);
        return combine(left, right);
    }
    if ea < 0.0 || eb < 0.0 {
        let (anchor, other, e) = if ea < 0.0 { (a, b, ea) } else { (b, a, eb) };
        // a unit-length stretch next to the singular end, the rest plainly
        let near = if other.is_infinite() {
            anchor + (other - anchor).signum()
        } else {
            other
        };
        let len = near - anchor;
        let p = 1.0 / (1.0 + e);
        let g = |t: f64| f(anchor, len * t.powf(p)) * len.abs() * p * t.powf(p - 1.0);
        let head = integrate(g, 0.0, 1.0, opts);
        if near == other {
            return head;
        }
        let tail = integrate(|s| f(anchor, s - anchor), near.min(other), near.max(other), opts);
        return combine(head, tail);
    }
    integrate(|s| f(0.0, s), a, b, opts)
}

fn combine(x: Integral, y: Integral) -> Integral {
    Integral {
        value: x.value + y.value,
        abs_error: x.abs_error + y.abs_error,
        converged: x.converged && y.converged,
    }
}

fn check_integrable(family: &PolynomialFamily, degree: usize, lo: f64, hi: f64) -> Result<()> {
    let deg = degree as f64;
    let at_infinity = match *family {
        PolynomialFamily::Jacobi { a, b } => deg + a + b,
        PolynomialFamily::Romanovski { alpha, .. } => deg + 2.0 * alpha,
    };
    if (lo.is_infinite() || hi.is_infinite()) && at_infinity >= -1.0 {
        return Err(Error::NonIntegrable(format!(
            "integrand grows like |s|^{at_infinity} at infinity"
        )));
    }
    if let PolynomialFamily::Jacobi { a, b } = *family {
        for (p, e) in [(1.0, a), (-1.0, b)] {
            if lo <= p && p <= hi && e <= -1.0 {
                return Err(Error::NonIntegrable(format!("weight exponent {e} at s = {p}")));
            }
        }
    }
    Ok(())
}
