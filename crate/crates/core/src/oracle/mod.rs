//! Finite-difference checks that do not depend on the NU machinery.
//!
//! The radial equation is solved in the geodesic coordinate x, with
//! `sqrt(lambda) r = sinh x` (dS) or `sqrt(lambda) r = sin x` (AdS), so that
//! `s = coth x` or `s = cot x`. Writing `R = u / sqrt(sinh x)` (resp. `sin x`)
//! removes the first derivative and leaves the Liouville form
//!
//! ```text
//!   -u'' + [l(l+1) s^2 - eta s + tau/2] u = eps u.
//! ```
//!
//! For AdS the coordinate runs over (0, pi): past x = pi/2 the radius folds
//! back from the wall while s turns negative, and the solution is continued
//! there instead of being clamped at the wall.

pub mod tridiag;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DeformationModel, QuantumNumbers, Space};
use crate::spectra::{self, energy_of_epsilon};
use crate::wavefunctions::{build_state, count_nodes};
use tridiag::{sign_changes, SymTridiagonal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Uniform,
    /// Geometric spacing away from the origin, starting at r_min.
    LogUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_points: usize,
    pub r_min: f64,
    /// Truncation radius (dS) or half-width of the commutator window.
    /// The AdS spectrum always uses the full continued coordinate range.
    pub r_max: f64,
    pub scheme: Scheme,
}

pub const DEFAULT_POINTS: usize = 4000;
pub const MAX_LEVELS: usize = 10;

impl GridSpec {
    pub fn new(n_points: usize, r_min: f64, r_max: f64, scheme: Scheme) -> Result<Self> {
        if n_points < 200 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 200 points, got {n_points}"
            )));
        }
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid radii must satisfy 0 < r_min < r_max, got {r_min}, {r_max}"
            )));
        }
        Ok(GridSpec {
            n_points,
            r_min,
            r_max,
            scheme,
        })
    }

    /// Uniform 4000-point grid; dS truncation at max(60 n^2 a0, 10/sqrt(lambda)).
    pub fn default_for(model: &DeformationModel, n_max: u32) -> Self {
        let a0 = model.units().bohr_radius();
        let n = n_max.max(1) as f64;
        let r_max = match model.wall() {
            Some(w) => w,
            None => (60.0 * n * n * a0).max(10.0 / model.lambda().sqrt()),
        };
        GridSpec {
            n_points: DEFAULT_POINTS,
            r_min: 1e-9 * a0,
            r_max,
            scheme: Scheme::Uniform,
        }
    }

    /// Window (-5, 5) with 4000 points for the commutator check.
    pub fn commutator_default() -> Self {
        GridSpec {
            n_points: DEFAULT_POINTS,
            r_min: 1e-9,
            r_max: 5.0,
            scheme: Scheme::Uniform,
        }
    }

    pub fn with_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }

    fn validate(&self) -> Result<()> {
        GridSpec::new(self.n_points, self.r_min, self.r_max, self.scheme).map(|_| ())
    }

    /// Nodes x_0 = 0 < x_1 < ... < x_{N+1}; the end nodes carry Dirichlet conditions.
    fn nodes(&self, model: &DeformationModel) -> Result<Vec<f64>> {
        let sl = model.lambda().sqrt();
        let (x_min, x_end) = match model.space() {
            Space::DeSitter => ((sl * self.r_min).asinh(), (sl * self.r_max).asinh()),
            Space::AntiDeSitter => {
                let arg = sl * self.r_min;
                if arg >= 1.0 {
                    return Err(Error::InvalidParameter("r_min lies beyond the AdS wall".into()));
                }
                (arg.asin(), PI)
            }
        };
        let n = self.n_points;
        let mut x = Vec::with_capacity(n + 2);
        x.push(0.0);
        match self.scheme {
            Scheme::Uniform => {
                let h = x_end / (n + 1) as f64;
                x.extend((1..=n).map(|i| i as f64 * h));
            }
            Scheme::LogUniform => {
                if x_min >= x_end {
                    return Err(Error::InvalidParameter("r_min must lie below r_max".into()));
                }
                let ratio = (x_end / x_min).ln();
                x.extend((0..n).map(|i| x_min * (ratio * i as f64 / n as f64).exp()));
            }
        }
        x.push(x_end);
        Ok(x)
    }
}

/// The Liouville potential l(l+1) s^2 - eta s + tau/2 at coordinate x.
fn potential(space: Space, l: u32, eta: f64, x: f64) -> f64 {
    let s = match space {
        Space::DeSitter => 1.0 / x.tanh(),
        Space::AntiDeSitter => 1.0 / x.tan(),
    };
    let ll = (l * (l + 1)) as f64;
    ll * s * s - eta * s + 0.5 * space.tau()
}

/// Finite-volume discretization of -u'' + V u = eps u, symmetrized by W^{-1/2}.
struct Discretization {
    matrix: SymTridiagonal,
    /// Interior nodes.
    x: Vec<f64>,
    /// Control-volume widths W_i.
    w: Vec<f64>,
}

fn discretize(model: &DeformationModel, l: u32, grid: &GridSpec) -> Result<Discretization> {
    let nodes = grid.nodes(model)?;
    let eta = spectra::eta(model);
    let n = nodes.len() - 2;
    let mut diag = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 1..=n {
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        let wi = 0.5 * (hm + hp);
        assert!(wi > 0.0 && hm > 0.0 && hp > 0.0, "grid nodes must increase");
        let v = potential(model.space(), l, eta, nodes[i]);
        diag.push((1.0 / hm + 1.0 / hp) / wi + v);
        w.push(wi);
    }
    // A_{i,i+1} = A_{i+1,i} = -1/h_{i+1/2}: symmetric by construction
    let off = (1..n)
        .map(|i| -1.0 / ((nodes[i + 1] - nodes[i]) * (w[i - 1] * w[i]).sqrt()))
        .collect();
    Ok(Discretization {
        matrix: SymTridiagonal::new(diag, off),
        x: nodes[1..=n].to_vec(),
        w,
    })
}

/// Eigenvalues eps, eigenvectors u, and the interior node coordinates.
pub type FdLevels = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>);

/// Lowest `count` scaled eigenvalues eps on a single grid, with eigenvectors u.
pub fn fd_levels(model: &DeformationModel, l: u32, count: usize, grid: &GridSpec) -> Result<FdLevels> {
    grid.validate()?;
    let d = discretize(model, l, grid)?;
    let mut eps = Vec::with_capacity(count);
    let mut vecs = Vec::with_capacity(count);
    for k in 0..count {
        let e = d.matrix.eigenvalue(k);
        let v = d.matrix.eigenvector(e);
        // back to u = W^{-1/2} v
        vecs.push(v.iter().zip(&d.w).map(|(a, w)| a / w.sqrt()).collect());
        eps.push(e);
    }
    Ok((eps, vecs, d.x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub model: DeformationModel,
    pub l: u32,
    pub grid: GridSpec,
    /// Ascending energies.
    pub eigenvalues: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// Liouville functions u on the interior nodes.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Geodesic coordinate of each interior node.
    pub coordinates: Vec<f64>,
    /// (E_N - E_2N)/(E_2N - E_4N) per level; `None` below the round-off floor.
    pub convergence_estimate: Vec<Option<f64>>,
    /// False for dS levels at or above -k e^2 sqrt(lambda).
    pub trusted: Vec<bool>,
}

impl OracleSpectrum {
    pub fn node_count(&self, k: usize) -> usize {
        sign_changes(&self.eigenvectors[k], 1e-9)
    }

    /// Radius of each node (folded back from the wall on the continued AdS range).
    pub fn radii(&self) -> Vec<f64> {
        let sl = self.model.lambda().sqrt();
        self.coordinates
            .iter()
            .map(|&x| match self.model.space() {
                Space::DeSitter => x.sinh() / sl,
                Space::AntiDeSitter => x.sin() / sl,
            })
            .collect()
    }
}

/// The dS continuum edge -k e^2 sqrt(lambda) used to flag trusted levels.
pub fn ds_threshold(model: &DeformationModel) -> Option<f64> {
    match model.space() {
        Space::DeSitter => Some(-model.units().coupling() * model.lambda().sqrt()),
        Space::AntiDeSitter => None,
    }
}

pub const RATIO_RANGE: (f64, f64) = (2.0, 6.0);
const NOISE_FLOOR: f64 = 1e-11;

pub fn fd_spectrum(model: &DeformationModel, l: u32, count: usize, grid: GridSpec) -> Result<OracleSpectrum> {
    if count == 0 || count > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "count must be in 1..={MAX_LEVELS}, got {count}"
        )));
    }
    let (eps, vecs, x) = fd_levels(model, l, count, &grid)?;
    let (eps2, ..) = fd_levels(model, l, count, &grid.with_points(2 * grid.n_points + 1))?;
    let (eps4, ..) = fd_levels(model, l, count, &grid.with_points(4 * grid.n_points + 3))?;

    let threshold = ds_threshold(model);
    let eigenvalues: Vec<f64> = eps.iter().map(|&e| energy_of_epsilon(model, e)).collect();
    let trusted: Vec<bool> = eigenvalues.iter().map(|&e| threshold.is_none_or(|t| e < t)).collect();
    let mut convergence_estimate = Vec::with_capacity(count);
    for k in 0..count {
        let (d1, d2) = (eps[k] - eps2[k], eps2[k] - eps4[k]);
        let floor = NOISE_FLOOR * eps4[k].abs().max(1.0);
        let ratio = if d2.abs() <= floor || d1.abs() <= floor {
            None
        } else {
            Some(d1 / d2)
        };
        if let (Some(q), true) = (ratio, trusted[k]) {
            if !(RATIO_RANGE.0..=RATIO_RANGE.1).contains(&q) {
                return Err(Error::Convergence { ratio: q });
            }
        }
        convergence_estimate.push(ratio);
    }
    Ok(OracleSpectrum {
        model: *model,
        l,
        grid,
        eigenvalues,
        epsilons: eps,
        eigenvectors: vecs,
        coordinates: x,
        convergence_estimate,
        trusted,
    })
}

/// Smooth decaying test functions for the commutator check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    Gaussian,
    GaussianX,
    GaussianX2,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [
        TestFunction::Gaussian,
        TestFunction::GaussianX,
        TestFunction::GaussianX2,
    ];

    pub fn eval(self, x: f64) -> f64 {
        let g = (-0.5 * x * x).exp();
        match self {
            TestFunction::Gaussian => g,
            TestFunction::GaussianX => x * g,
            TestFunction::GaussianX2 => x * x * g,
        }
    }
}

/// max |([X, P] - i hbar (1 - tau lambda X^2)) f| / max |f| with
/// X = x/chi, P = -i hbar chi d/dx and fourth-order central differences.
/// The window is (-r_max, r_max), clipped to 90% of the AdS wall.
pub fn commutator_residual(model: &DeformationModel, f: TestFunction, grid: GridSpec) -> Result<f64> {
    grid.validate()?;
    let half = match model.wall() {
        Some(w) => grid.r_max.min(0.9 * w),
        None => grid.r_max,
    };
    let n = grid.n_points;
    let h = 2.0 * half / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let chi: Vec<f64> = xs.iter().map(|&x| model.chi(x)).collect();
    let big_x: Vec<f64> = xs.iter().zip(&chi).map(|(x, c)| x / c).collect();
    let fv: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let xf: Vec<f64> = big_x.iter().zip(&fv).map(|(a, b)| a * b).collect();
    let d = |v: &[f64], i: usize| (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);

    let tl = model.tau() * model.lambda();
    let mut worst = 0.0f64;
    for i in 2..n - 2 {
        let lhs = chi[i] * d(&xf, i) - big_x[i] * chi[i] * d(&fv, i);
        let rhs = (1.0 - tl * big_x[i] * big_x[i]) * fv[i];
        worst = worst.max((lhs - rhs).abs());
    }
    let peak = fv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(model.units().hbar * worst / peak)
}

/// One (model, lambda, n, l) comparison between closed form and oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckCell {
    pub space: Space,
    pub lambda: f64,
    pub n: u32,
    pub l: u32,
    pub e_closed: f64,
    pub e_oracle: Option<f64>,
    pub rel_dev: Option<f64>,
    pub nodes_closed: Option<usize>,
    pub nodes_oracle: Option<usize>,
    pub convergence: Option<f64>,
    pub trusted: bool,
    pub error: Option<String>,
}

impl CrosscheckCell {
    pub fn nodes_match(&self) -> Option<bool> {
        Some(self.nodes_closed? == self.nodes_oracle?)
    }
}

/// All cells n = l+1..=n_max of one (space, lambda, l) block; one oracle solve.
pub fn crosscheck_block(space: Space, lambda: f64, l: u32, n_max: u32) -> Vec<CrosscheckCell> {
    let count = n_max.saturating_sub(l) as usize;
    let qns: Vec<QuantumNumbers> = (l + 1..=n_max).filter_map(|n| QuantumNumbers::nl(n, l).ok()).collect();
    let model = match DeformationModel::new(space, lambda) {
        Ok(m) => m,
        Err(e) => {
            return qns
                .iter()
                .map(|q| failed_cell(space, lambda, *q, f64::NAN, &e))
                .collect()
        }
    };
    let oracle = fd_spectrum(&model, l, count, GridSpec::default_for(&model, n_max));
    qns.iter()
        .enumerate()
        .map(|(k, &qn)| {
            let e_closed = spectra::energy(&model, qn).energy;
            match &oracle {
                Err(e) => failed_cell(space, lambda, qn, e_closed, e),
                Ok(o) => {
                    let e_oracle = o.eigenvalues[k];
                    let nodes_closed = build_state(&model, qn).ok().and_then(|s| count_nodes(&s, 4000).ok());
                    CrosscheckCell {
                        space,
                        lambda,
                        n: qn.n,
                        l,
                        e_closed,
                        e_oracle: Some(e_oracle),
                        rel_dev: Some(((e_oracle - e_closed) / e_closed).abs()),
                        nodes_closed,
                        nodes_oracle: Some(o.node_count(k)),
                        convergence: o.convergence_estimate[k],
                        trusted: o.trusted[k],
                        error: None,
                    }
                }
            }
        })
        .collect()
}

fn failed_cell(space: Space, lambda: f64, qn: QuantumNumbers, e_closed: f64, e: &Error) -> CrosscheckCell {
    CrosscheckCell {
        space,
        lambda,
        n: qn.n,
        l: qn.l,
        e_closed,
        e_oracle: None,
        rel_dev: None,
        nodes_closed: None,
        nodes_oracle: None,
        convergence: None,
        trusted: false,
        error: Some(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    /// Maximum relative deviation over trusted cells, per space and overall.
    pub max_dev_ds: Option<f64>,
    pub max_dev_ads: Option<f64>,
    pub max_dev: Option<f64>,
    /// Every trusted cell with both node counts available agrees.
    pub nodes_all_match: bool,
    pub failed_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub cells: Vec<CrosscheckCell>,
    pub summary: CrosscheckSummary,
}

pub fn summarize(cells: Vec<CrosscheckCell>) -> CrosscheckReport {
    let max_over = |pred: &dyn Fn(&CrosscheckCell) -> bool| {
        cells
            .iter()
            .filter(|c| c.trusted && pred(c))
            .filter_map(|c| c.rel_dev)
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))))
    };
    let summary = CrosscheckSummary {
        max_dev_ds: max_over(&|c| c.space == Space::DeSitter),
        max_dev_ads: max_over(&|c| c.space == Space::AntiDeSitter),
        max_dev: max_over(&|_| true),
        nodes_all_match: cells
            .iter()
            .filter(|c| c.trusted)
            .all(|c| c.nodes_match() != Some(false)),
        failed_cells: cells.iter().filter(|c| c.error.is_some()).count(),
    };
    CrosscheckReport { cells, summary }
}

/// Blocks in deterministic order: space, lambda, l.
pub fn crosscheck_blocks(lambdas: &[f64], n_max: u32) -> Result<Vec<(Space, f64, u32)>> {
    if !(1..=4).contains(&n_max) {
        return Err(Error::InvalidParameter(format!("n_max must be in 1..=4, got {n_max}")));
    }
    let mut out = Vec::new();
    for space in Space::BOTH {
        for &lambda in lambdas {
            for l in 0..n_max {
                out.push((space, lambda, l));
            }
        }
    }
    Ok(out)
}

pub fn crosscheck_report(lambdas: &[f64], n_max: u32) -> Result<CrosscheckReport> {
    let cells = crosscheck_blocks(lambdas, n_max)?
        .into_iter()
        .flat_map(|(space, lambda, l)| crosscheck_block(space, lambda, l, n_max))
        .collect();
    Ok(summarize(cells))
}
