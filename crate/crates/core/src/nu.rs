//! Nikiforov-Uvarov reduction of hypergeometric-type equations
//!
//! ```text
//!   psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0
//! ```
//!
//! with deg sigma <= 2, deg tau~ <= 1, deg sigma~ <= 2. Writing psi = phi y
//! with pi = sigma (ln phi)' turns the equation into
//! `sigma y'' + tau y' + Lambda y = 0`, where `tau = tau~ + 2 pi`,
//! `Lambda = k + pi'` and
//!
//! ```text
//!   pi = (sigma' - tau~)/2 +- sqrt(((sigma' - tau~)/2)^2 - sigma~ + k sigma).
//! ```
//!
//! `k` is fixed by requiring the radicand to be the square of a polynomial.
//! Polynomial solutions exist when `Lambda = Lambda_n = -n tau' - n(n-1) sigma''/2`,
//! and are generated by the Rodrigues formula `y_n = (1/rho) d^n/ds^n [sigma^n rho]`
//! with the Pearson weight `(sigma rho)' = tau rho`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest polynomial degree the Rodrigues generator accepts.
pub const MAX_DEGREE: usize = 64;

const SQUARE_TOL: f64 = 1e-8;

/// The (sigma, tau~, sigma~) triple of a hypergeometric-type equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricOde {
    sigma: Poly,
    tau_tilde: Poly,
    sigma_tilde: Poly,
}

impl HypergeometricOde {
    pub fn new(sigma: Poly, tau_tilde: Poly, sigma_tilde: Poly) -> Result<Self> {
        let deg = |p: &Poly| p.degree().unwrap_or(0);
        if sigma.is_zero() {
            return Err(Error::InvalidParameter("sigma must not vanish identically".into()));
        }
        if deg(&sigma) > 2 || deg(&tau_tilde) > 1 || deg(&sigma_tilde) > 2 {
            return Err(Error::InvalidParameter(format!(
                "degree bounds violated: sigma {}, tau~ {}, sigma~ {}",
                deg(&sigma),
                deg(&tau_tilde),
                deg(&sigma_tilde)
            )));
        }
        let all = sigma
            .coeffs()
            .iter()
            .chain(tau_tilde.coeffs())
            .chain(sigma_tilde.coeffs());
        if all.clone().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(HypergeometricOde {
            sigma: sigma.trimmed(),
            tau_tilde: tau_tilde.trimmed(),
            sigma_tilde: sigma_tilde.trimmed(),
        })
    }

    pub fn sigma(&self) -> &Poly {
        &self.sigma
    }

    pub fn tau_tilde(&self) -> &Poly {
        &self.tau_tilde
    }

    pub fn sigma_tilde(&self) -> &Poly {
        &self.sigma_tilde
    }

    /// (sigma' - tau~) / 2.
    pub fn half_gap(&self) -> Poly {
        (&self.sigma.derivative() - &self.tau_tilde).scale(0.5)
    }

    /// Coefficients (A, B, C) of the radicand A s^2 + B s + C at a given k.
    pub fn radicand(&self, k: f64) -> (f64, f64, f64) {
        let (a0, a1, b0, b1, c0, c1) = self.radicand_parts();
        (a0 + a1 * k, b0 + b1 * k, c0 + c1 * k)
    }

    // A = a0 + a1 k, B = b0 + b1 k, C = c0 + c1 k
    fn radicand_parts(&self) -> (f64, f64, f64, f64, f64, f64) {
        let h = self.half_gap();
        let (h0, h1) = (h.c(0), h.c(1));
        let st = &self.sigma_tilde;
        let sg = &self.sigma;
        (
            h1 * h1 - st.c(2),
            sg.c(2),
            2.0 * h1 * h0 - st.c(1),
            sg.c(1),
            h0 * h0 - st.c(0),
            sg.c(0),
        )
    }

    /// sigma'' (a constant).
    pub fn sigma_second(&self) -> f64 {
        2.0 * self.sigma.c(2)
    }
}

/// Which root of the k equation a branch uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KRoot {
    Larger,
    Smaller,
}

/// Sign in front of the polynomial square root in pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Identifies one of the up to four (k, +-) combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchId {
    pub root: KRoot,
    pub sign: Sign,
}

impl BranchId {
    pub fn index(self) -> usize {
        let r = match self.root {
            KRoot::Larger => 0,
            KRoot::Smaller => 2,
        };
        r + match self.sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.root {
            KRoot::Larger => "k1",
            KRoot::Smaller => "k2",
        };
        let s = match self.sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        write!(f, "{r}{s}")
    }
}

/// Roots of the k equation, `larger >= smaller`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KCandidates {
    pub larger: f64,
    pub smaller: f64,
    /// Discriminant of the quadratic in k (zero for a linear k equation).
    pub discriminant: f64,
}

impl KCandidates {
    pub fn get(&self, root: KRoot) -> f64 {
        match root {
            KRoot::Larger => self.larger,
            KRoot::Smaller => self.smaller,
        }
    }
}

/// Roots of the equation in k that makes the radicand a perfect square,
/// sorted in descending order.
pub fn k_candidates(ode: &HypergeometricOde) -> Result<KCandidates> {
    let (a0, a1, b0, b1, c0, c1) = ode.radicand_parts();
    // B(k)^2 - 4 A(k) C(k) = q2 k^2 + q1 k + q0
    let q2 = b1 * b1 - 4.0 * a1 * c1;
    let q1 = 2.0 * b0 * b1 - 4.0 * (a0 * c1 + a1 * c0);
    let q0 = b0 * b0 - 4.0 * a0 * c0;

    if a0 == 0.0 && a1 == 0.0 {
        // linear radicand: square only if B(k) = 0
        if b1 == 0.0 {
            return Err(Error::InvalidParameter("k does not enter the linear radicand".into()));
        }
        let k = -b0 / b1;
        return Ok(KCandidates {
            larger: k,
            smaller: k,
            discriminant: 0.0,
        });
    }

    let scale = q2.abs().max(q1.abs()).max(q0.abs());
    if q2.abs() <= 1e-14 * scale {
        if q1 == 0.0 {
            return Err(Error::InvalidParameter("degenerate k equation".into()));
        }
        let k = -q0 / q1;
        return Ok(KCandidates {
            larger: k,
            smaller: k,
            discriminant: 0.0,
        });
    }

    let disc = q1 * q1 - 4.0 * q2 * q0;
    if disc < 0.0 && disc.abs() > 1e-14 * q1 * q1 {
        return Err(Error::ComplexRoots(disc));
    }
    let root = disc.max(0.0).sqrt();
    // stable pair: big root from the non-cancelling sum, small from Vieta
    let q = -0.5 * (q1 + q1.signum() * root);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / q2, q0 / q) };
    Ok(KCandidates {
        larger: r1.max(r2),
        smaller: r1.min(r2),
        discriminant: disc,
    })
}

/// The polynomial square root p(s) of the radicand at `k`, taken with a
/// nonnegative leading coefficient.
pub fn radicand_sqrt(ode: &HypergeometricOde, k: f64) -> Result<Poly> {
    let (a, b, c) = ode.radicand(k);
    let residual = b * b - 4.0 * a * c;
    let scale = (b * b).max((4.0 * a * c).abs());
    if residual.abs() > SQUARE_TOL * scale && residual.abs() > 1e-300 {
        return Err(Error::NotPerfectSquare(residual / scale.max(f64::MIN_POSITIVE)));
    }
    let (a0, a1, ..) = ode.radicand_parts();
    let a_scale = a0.abs().max((a1 * k).abs()).max(1e-300);
    if a.abs() <= 1e-13 * a_scale {
        if c < 0.0 {
            return Err(Error::ComplexSquareRoot(c));
        }
        return Ok(Poly::constant(c.sqrt()));
    }
    if a < 0.0 {
        return Err(Error::ComplexSquareRoot(a));
    }
    let sa = a.sqrt();
    Ok(Poly::linear(sa, b / (2.0 * sa)))
}

/// pi_+ and pi_- for a given k.
pub fn pi_branches(ode: &HypergeometricOde, k: f64) -> Result<[Poly; 2]> {
    let p = radicand_sqrt(ode, k)?;
    let h = ode.half_gap();
    Ok([&h + &p, &h - &p])
}

/// One fully specified (k, pi, tau) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub id: BranchId,
    pub k: f64,
    pub pi: Poly,
    pub tau: Poly,
}

impl Branch {
    fn build(ode: &HypergeometricOde, id: BranchId, k: f64) -> Result<Self> {
        let [plus, minus] = pi_branches(ode, k)?;
        let pi = match id.sign {
            Sign::Plus => plus,
            Sign::Minus => minus,
        };
        let tau = ode.tau_tilde() + &pi.scale(2.0);
        Ok(Branch { id, k, pi, tau })
    }

    /// Lambda = k + pi'.
    pub fn level_lambda(&self) -> f64 {
        self.k + self.pi.c(1)
    }

    pub fn tau_slope(&self) -> f64 {
        self.tau.c(1)
    }
}

/// All real branches (up to four) of an equation.
pub fn branches(ode: &HypergeometricOde) -> Result<Vec<Branch>> {
    let ks = k_candidates(ode)?;
    let roots: &[KRoot] = if ks.larger == ks.smaller {
        &[KRoot::Larger]
    } else {
        &[KRoot::Larger, KRoot::Smaller]
    };
    let mut out = Vec::with_capacity(4);
    for &root in roots {
        for sign in [Sign::Plus, Sign::Minus] {
            match Branch::build(ode, BranchId { root, sign }, ks.get(root)) {
                Ok(b) => out.push(b),
                Err(Error::ComplexSquareRoot(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Rule used to pick the physical branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchRule {
    /// The unique branch with tau' < 0.
    NegativeSlope,
    /// A specific (root, sign) combination.
    Fixed(BranchId),
    /// Either root with the given sign. `solve_level` keeps whichever root
    /// brackets the quantization condition; `reduce_with` requires exactly
    /// one real root.
    Sign(Sign),
}

fn select(ode: &HypergeometricOde, rule: BranchRule) -> Result<Branch> {
    match rule {
        BranchRule::Fixed(id) => {
            let ks = k_candidates(ode)?;
            Branch::build(ode, id, ks.get(id.root))
        }
        BranchRule::NegativeSlope | BranchRule::Sign(_) => {
            let keep: Vec<Branch> = branches(ode)?
                .into_iter()
                .filter(|b| match rule {
                    BranchRule::Sign(s) => b.id.sign == s,
                    _ => b.tau_slope() < 0.0,
                })
                .collect();
            match keep.len() {
                0 => Err(Error::NoBoundBranch),
                1 => Ok(keep.into_iter().next().unwrap()),
                n => Err(Error::AmbiguousBranch(n)),
            }
        }
    }
}

/// A completed reduction: the chosen branch and its Pearson weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuReduction {
    pub k: f64,
    pub pi: Poly,
    pub tau: Poly,
    pub level_lambda: f64,
    pub weight: WeightDescriptor,
    pub branch: BranchId,
}

impl NuReduction {
    pub fn branch_id(&self) -> usize {
        self.branch.index()
    }
}

/// Reduce with the standard tau' < 0 rule.
pub fn reduce(ode: &HypergeometricOde) -> Result<NuReduction> {
    reduce_with(ode, BranchRule::NegativeSlope)
}

pub fn reduce_with(ode: &HypergeometricOde, rule: BranchRule) -> Result<NuReduction> {
    let b = select(ode, rule)?;
    let weight = WeightDescriptor::from_pearson(ode.sigma(), &b.tau)?;
    Ok(NuReduction {
        k: b.k,
        level_lambda: b.level_lambda(),
        pi: b.pi,
        tau: b.tau,
        weight,
        branch: b.id,
    })
}

/// Lambda_n = -n tau' - n(n-1) sigma''/2.
pub fn level_constant(reduction: &NuReduction, ode: &HypergeometricOde, n: u32) -> f64 {
    level_constant_for(reduction.tau.c(1), ode.sigma_second(), n)
}

fn level_constant_for(tau_slope: f64, sigma_second: f64, n: u32) -> f64 {
    let n = n as f64;
    -n * tau_slope - 0.5 * n * (n - 1.0) * sigma_second
}

/// Result of a quantization search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSolution {
    pub epsilon: f64,
    pub branch: BranchId,
    pub iterations: usize,
}

pub const LEVEL_TOL: f64 = 1e-12;
pub const LEVEL_MAX_ITER: usize = 200;

/// Find the spectral parameter at which Lambda = Lambda_n by bisection on
/// g(eps) = [k + pi'] - Lambda_n.
pub fn solve_level<F>(family: F, n: u32, bracket: (f64, f64), rule: BranchRule) -> Result<LevelSolution>
where
    F: Fn(f64) -> Result<HypergeometricOde>,
{
    let (lo, hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter("bracket must be finite".into()));
    }

    let residual = |eps: f64, rule: BranchRule| -> Result<(f64, BranchId)> {
        let ode = family(eps)?;
        let b = select(&ode, rule)?;
        let g = b.level_lambda() - level_constant_for(b.tau_slope(), ode.sigma_second(), n);
        Ok((g, b.id))
    };

    let rules: Vec<BranchRule> = match rule {
        BranchRule::Sign(sign) => [KRoot::Larger, KRoot::Smaller]
            .into_iter()
            .map(|root| BranchRule::Fixed(BranchId { root, sign }))
            .collect(),
        other => vec![other],
    };

    let mut bracketing = Vec::new();
    for r in rules {
        let (Ok((glo, _)), Ok((ghi, _))) = (residual(lo, r), residual(hi, r)) else {
            continue;
        };
        if glo == 0.0 || ghi == 0.0 || glo.signum() != ghi.signum() {
            bracketing.push((r, glo));
        }
    }
    let (rule, mut glo) = match bracketing.len() {
        0 => return Err(Error::NoSignChange { lo, hi }),
        1 => bracketing[0],
        n => return Err(Error::AmbiguousBranch(n)),
    };

    let (mut a, mut b) = (lo, hi);
    let mut branch = residual(a, rule)?.1;
    if glo == 0.0 {
        return Ok(LevelSolution {
            epsilon: a,
            branch,
            iterations: 0,
        });
    }
    for it in 1..=LEVEL_MAX_ITER {
        let mid = 0.5 * (a + b);
        if b - a <= LEVEL_TOL || mid <= a || mid >= b {
            return Ok(LevelSolution {
                epsilon: mid,
                branch,
                iterations: it,
            });
        }
        let (gm, id) = residual(mid, rule)?;
        branch = id;
        if gm == 0.0 {
            return Ok(LevelSolution {
                epsilon: mid,
                branch,
                iterations: it,
            });
        }
        if gm.signum() == glo.signum() {
            a = mid;
            glo = gm;
        } else {
            b = mid;
        }
    }
    Err(Error::MaxIterations(LEVEL_MAX_ITER))
}

/// Rodrigues polynomial y_n (with C_n = 1) of a reduction.
pub fn rodrigues_coefficients(reduction: &NuReduction, ode: &HypergeometricOde, n: usize) -> Result<Poly> {
    rodrigues_from_tau(ode.sigma(), &reduction.tau, n)
}

/// y_n = (1/rho) d^n/ds^n [sigma^n rho] for the weight with (sigma rho)' = tau rho,
/// built from (sigma^m rho Q)' = sigma^(m-1) rho [m sigma' Q + (tau - sigma') Q + sigma Q'].
pub fn rodrigues_from_tau(sigma: &Poly, tau: &Poly, n: usize) -> Result<Poly> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeOverflow(n));
    }
    let dsigma = sigma.derivative();
    let drift = tau - &dsigma;
    let mut q = Poly::constant(1.0);
    for m in (1..=n).rev() {
        let next = &(&dsigma.scale(m as f64) + &drift) * &q;
        q = (&next + &(sigma * &q.derivative())).trimmed();
    }
    Ok(q)
}

/// One |base(s)|^exponent factor of a weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFactor {
    pub base: Poly,
    pub exponent: f64,
}

/// exp(coeff * atan((s - shift) / scale)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArctanFactor {
    pub coeff: f64,
    pub shift: f64,
    pub scale: f64,
}

/// Closed-form Pearson weight
/// `rho(s) = exp(offset + poly(s)) * prod |base_i(s)|^e_i * exp(q atan((s - p)/w))`,
/// normalized so that rho(s0) = 1 at the reference point `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDescriptor {
    pub factors: Vec<WeightFactor>,
    pub arctan: Option<ArctanFactor>,
    pub exp_poly: Poly,
    pub reference_point: f64,
    log_offset: f64,
}

impl WeightDescriptor {
    /// Integrate rho'/rho = (tau - sigma')/sigma in closed form.
    pub fn from_pearson(sigma: &Poly, tau: &Poly) -> Result<Self> {
        let drift = tau - &sigma.derivative();
        let (a, b) = (drift.c(1), drift.c(0));
        let mut w = WeightDescriptor {
            factors: Vec::new(),
            arctan: None,
            exp_poly: Poly::zero(),
            reference_point: 0.0,
            log_offset: 0.0,
        };
        match sigma.degree() {
            None => return Err(Error::InvalidParameter("sigma vanishes".into())),
            Some(0) => {
                let c0 = sigma.c(0);
                w.exp_poly = Poly::quadratic(a / (2.0 * c0), b / c0, 0.0);
            }
            Some(1) => {
                let (c1, c0) = (sigma.c(1), sigma.c(0));
                let r = c0 / c1;
                w.exp_poly = Poly::linear(a / c1, 0.0);
                w.factors.push(WeightFactor {
                    base: Poly::linear(1.0, r),
                    exponent: (b - a * r) / c1,
                });
                w.reference_point = 1.0 - r;
            }
            Some(_) => {
                let (c2, c1, c0) = (sigma.c(2), sigma.c(1), sigma.c(0));
                let disc = c1 * c1 - 4.0 * c2 * c0;
                let vertex = -c1 / (2.0 * c2);
                w.reference_point = vertex;
                let scale = (c1 * c1).max((4.0 * c2 * c0).abs());
                if disc.abs() <= 1e-14 * scale {
                    return Err(Error::UnsupportedWeight("sigma has a double root".into()));
                }
                if disc > 0.0 {
                    let sq = disc.sqrt();
                    let q = -0.5 * (c1 + c1.signum() * sq);
                    let (x1, x2) = if c1 == 0.0 {
                        let h = (-c0 / c2).sqrt();
                        (h, -h)
                    } else {
                        (q / c2, c0 / q)
                    };
                    let (r1, r2) = (x1.max(x2), x1.min(x2));
                    w.factors.push(WeightFactor {
                        base: Poly::linear(1.0, -r1),
                        exponent: (a * r1 + b) / (c2 * (r1 - r2)),
                    });
                    w.factors.push(WeightFactor {
                        base: Poly::linear(1.0, -r2),
                        exponent: (a * r2 + b) / (c2 * (r2 - r1)),
                    });
                } else {
                    let p = vertex;
                    let width = (-disc).sqrt() / (2.0 * c2.abs());
                    w.factors.push(WeightFactor {
                        base: Poly::quadratic(1.0, c1 / c2, c0 / c2),
                        exponent: a / (2.0 * c2),
                    });
                    let coeff = (a * p + b) / (c2 * width);
                    if coeff != 0.0 {
                        w.arctan = Some(ArctanFactor {
                            coeff,
                            shift: p,
                            scale: width,
                        });
                    }
                }
            }
        }
        w.log_offset = -w.ln_abs(w.reference_point);
        if !w.log_offset.is_finite() {
            w.log_offset = 0.0;
        }
        Ok(w)
    }

    /// Coefficient q of the exp(q atan(.)) factor (zero when absent).
    pub fn arctan_coeff(&self) -> f64 {
        self.arctan.map_or(0.0, |a| a.coeff)
    }

    pub fn ln_abs(&self, s: f64) -> f64 {
        let mut v = self.log_offset + self.exp_poly.eval(s);
        for f in &self.factors {
            v += f.exponent * f.base.eval(s).abs().ln();
        }
        if let Some(at) = self.arctan {
            v += at.coeff * ((s - at.shift) / at.scale).atan();
        }
        v
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.ln_abs(s).exp()
    }

    /// rho'/rho from the descriptor.
    pub fn log_derivative(&self, s: f64) -> f64 {
        let mut v = self.exp_poly.derivative().eval(s);
        for f in &self.factors {
            v += f.exponent * f.base.derivative().eval(s) / f.base.eval(s);
        }
        if let Some(at) = self.arctan {
            let x = (s - at.shift) / at.scale;
            v += at.coeff / (at.scale * (1.0 + x * x));
        }
        v
    }

    /// max |(sigma rho)' - tau rho| / max(1, |tau rho|) over 32 interior samples.
    pub fn pearson_residual(&self, sigma: &Poly, tau: &Poly, interval: (f64, f64)) -> f64 {
        let (lo, hi) = interval;
        let dsigma = sigma.derivative();
        (0..32)
            .map(|j| {
                let s = lo + (hi - lo) * (j as f64 + 0.5) / 32.0;
                let rho = self.eval(s);
                let t = tau.eval(s) * rho;
                let lhs = rho * (dsigma.eval(s) + sigma.eval(s) * self.log_derivative(s));
                (lhs - t).abs() / t.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ds_ode(l: f64, eta: f64, eps: f64) -> HypergeometricOde {
        let lh = l + 0.5;
        HypergeometricOde::new(
            Poly::quadratic(-1.0, 0.0, 1.0),
            Poly::linear(-1.0, 0.0),
            Poly::quadratic(-lh * lh, eta, eps),
        )
        .unwrap()
    }

    fn ads_ode(l: f64, eta: f64, eps: f64) -> HypergeometricOde {
        let lh = l + 0.5;
        HypergeometricOde::new(
            Poly::quadratic(1.0, 0.0, 1.0),
            Poly::linear(1.0, 0.0),
            Poly::quadratic(-lh * lh, eta, eps),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_degrees() {
        assert!(HypergeometricOde::new(Poly::zero(), Poly::zero(), Poly::zero()).is_err());
        assert!(HypergeometricOde::new(Poly::new(vec![1.0, 0.0, 0.0, 1.0]), Poly::zero(), Poly::zero()).is_err());
        assert!(HypergeometricOde::new(Poly::constant(1.0), Poly::quadratic(1.0, 0.0, 0.0), Poly::zero()).is_err());
    }

    #[test]
    fn k_candidates_eta_zero() {
        for eps in [-3.0, 0.2, 0.5, 4.0] {
            let ks = k_candidates(&ds_ode(0.0, 0.0, eps)).unwrap();
            assert_relative_eq!(ks.larger, eps.max(0.5), epsilon = 1e-14);
            assert_relative_eq!(ks.smaller, eps.min(0.5), epsilon = 1e-14);
        }
    }

    #[test]
    fn k_candidates_hand_example() {
        let ks = k_candidates(&ds_ode(0.0, 2.0, -2.5)).unwrap();
        let r5 = 5f64.sqrt();
        assert_relative_eq!(ks.larger, 0.5 * (-2.0 + r5), max_relative = 1e-14);
        assert_relative_eq!(ks.smaller, 0.5 * (-2.0 - r5), max_relative = 1e-14);
        assert_relative_eq!(ks.larger, 0.118_034, epsilon = 1e-6);
    }

    #[test]
    fn complex_roots_flagged() {
        // dS with eps inside (c - eta, c + eta): Delta < 0
        let err = k_candidates(&ds_ode(0.0, 4.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::ComplexRoots(d) if d < 0.0));
    }

    #[test]
    fn degenerate_square_branches() {
        // sigma~ = k sigma with k = 2: radicand = ((sigma' - tau~)/2)^2
        let ode = HypergeometricOde::new(
            Poly::quadratic(-1.0, 0.0, 1.0),
            Poly::linear(-1.0, 0.0),
            Poly::quadratic(-2.0, 0.0, 2.0),
        )
        .unwrap();
        let [p, m] = pi_branches(&ode, 2.0).unwrap();
        let h = ode.half_gap();
        assert_eq!(h.c(1), -0.5);
        assert_relative_eq!(p.c(1), h.c(1) + h.c(1).abs());
        assert_relative_eq!(m.c(1), h.c(1) - h.c(1).abs());
        assert!(matches!(pi_branches(&ode, 3.0), Err(Error::NotPerfectSquare(_))));
    }

    #[test]
    fn no_bound_branch() {
        // sigma = 1 + s^2, tau~ = s, sigma~ = -s^2 - s - 2: every real branch has tau' > 0
        let ode = HypergeometricOde::new(
            Poly::quadratic(1.0, 0.0, 1.0),
            Poly::linear(1.0, 0.0),
            Poly::quadratic(-1.0, -1.0, -2.0),
        )
        .unwrap();
        assert_eq!(reduce(&ode).unwrap_err(), Error::NoBoundBranch);
        // sigma = s, tau~ = 1, sigma~ = s^2: pi' = +-1 -> tau' = +-2, unique
        let ode = HypergeometricOde::new(
            Poly::linear(1.0, 0.0),
            Poly::constant(1.0),
            Poly::quadratic(-1.0, 0.0, 0.0),
        )
        .unwrap();
        let red = reduce(&ode).unwrap();
        assert!(red.tau.c(1) < 0.0);
        // flipping the sign of sigma~'s leading term yields a complex root: no branch
        let ode = HypergeometricOde::new(
            Poly::linear(1.0, 0.0),
            Poly::constant(1.0),
            Poly::quadratic(1.0, 0.0, 0.0),
        )
        .unwrap();
        assert_eq!(reduce(&ode).unwrap_err(), Error::NoBoundBranch);
    }

    #[test]
    fn ds_hydrogen_reduction_shape() {
        let (l, eta) = (1.0, 20.0);
        // quantized eps for n_r = 1 (delta = n = 3)
        let n = 3.0;
        let c = 0.25 + (l + 0.5) * (l + 0.5);
        let eps = c - n * n - eta * eta / (4.0 * n * n);
        let ode = ds_ode(l, eta, eps);
        let red = reduce_with(
            &ode,
            BranchRule::Fixed(BranchId {
                root: KRoot::Larger,
                sign: Sign::Plus,
            }),
        )
        .unwrap();
        let delta = (c - red.k).sqrt();
        assert_relative_eq!(delta, n, max_relative = 1e-10);
        assert_relative_eq!(red.tau.c(1), 2.0 * (delta - 1.0), max_relative = 1e-12);
        assert_relative_eq!(red.tau.c(0), -eta / delta, max_relative = 1e-12);
        assert_relative_eq!(
            level_constant(&red, &ode, 1),
            1.0 * (2.0 - 2.0 * delta),
            max_relative = 1e-12
        );
        assert_relative_eq!(red.level_lambda, level_constant(&red, &ode, 1), max_relative = 1e-10);
        // the standard tau' < 0 rule is ambiguous for this equation
        assert!(matches!(reduce(&ode), Err(Error::AmbiguousBranch(_))));
    }

    #[test]
    fn ads_hydrogen_reduction_shape() {
        let (l, eta) = (0.0, 20.0);
        let n = 2.0;
        let c = 0.25 + (l + 0.5) * (l + 0.5);
        let eps = n * n - c - eta * eta / (4.0 * n * n);
        let ode = ads_ode(l, eta, eps);
        let red = reduce(&ode).unwrap();
        let delta = (c + red.k).sqrt();
        assert_relative_eq!(delta, n, max_relative = 1e-10);
        assert_eq!(
            red.branch,
            BranchId {
                root: KRoot::Larger,
                sign: Sign::Minus
            }
        );
        assert_relative_eq!(red.tau.c(1), 2.0 * (1.0 - delta), max_relative = 1e-12);
        assert_relative_eq!(red.tau.c(0), eta / delta, max_relative = 1e-12);
        assert_relative_eq!(
            level_constant(&red, &ode, 1),
            -(2.0 - 2.0 * delta),
            max_relative = 1e-12
        );
        assert_eq!(level_constant(&red, &ode, 0), 0.0);
        // weight: (1 + s^2)^(-delta) exp(eta/delta atan s)
        assert_relative_eq!(red.weight.factors[0].exponent, -delta, max_relative = 1e-12);
        assert_relative_eq!(red.weight.arctan_coeff(), eta / delta, max_relative = 1e-12);
        assert_relative_eq!(red.weight.eval(0.0), 1.0);
    }

    #[test]
    fn rodrigues_low_orders() {
        let sigma = Poly::quadratic(1.0, 0.0, 1.0);
        let (g, b) = (-2.3, 0.7);
        let tau = Poly::linear(2.0 * (g + 1.0), b);
        assert_eq!(rodrigues_from_tau(&sigma, &tau, 0).unwrap().coeffs(), &[1.0]);
        let y1 = rodrigues_from_tau(&sigma, &tau, 1).unwrap();
        assert_relative_eq!(y1.c(1), 2.0 * (g + 1.0));
        assert_relative_eq!(y1.c(0), b);
        assert!(matches!(
            rodrigues_from_tau(&sigma, &tau, 65),
            Err(Error::DegreeOverflow(65))
        ));
    }

    #[test]
    fn weight_linear_and_constant_sigma() {
        // Laguerre: sigma = s, tau = 1 + a - s  -> rho = s^a e^-s
        let a = 1.5;
        let w = WeightDescriptor::from_pearson(&Poly::linear(1.0, 0.0), &Poly::linear(-1.0, 1.0 + a)).unwrap();
        assert!(w.pearson_residual(&Poly::linear(1.0, 0.0), &Poly::linear(-1.0, 1.0 + a), (0.1, 10.0)) < 1e-12);
        assert_relative_eq!(
            w.eval(2.0) / w.eval(1.0),
            2f64.powf(a) * (-1f64).exp(),
            max_relative = 1e-12
        );
        // Hermite: sigma = 1, tau = -2s -> rho = e^{-s^2}
        let w = WeightDescriptor::from_pearson(&Poly::constant(1.0), &Poly::linear(-2.0, 0.0)).unwrap();
        assert_relative_eq!(w.eval(1.0), (-1f64).exp(), max_relative = 1e-14);
        // double root is rejected
        assert!(WeightDescriptor::from_pearson(&Poly::quadratic(1.0, 0.0, 0.0), &Poly::linear(-1.0, 0.0)).is_err());
    }

    #[test]
    fn solve_level_errors() {
        let fam = |eps: f64| Ok(ads_ode(0.0, 20.0, eps));
        let rule = BranchRule::Fixed(BranchId {
            root: KRoot::Larger,
            sign: Sign::Minus,
        });
        assert!(matches!(
            solve_level(fam, 1, (-50.0, -40.0), rule),
            Err(Error::NoSignChange { .. })
        ));
    }
}
