//! Property tests for the invariants of the model, the NU engine, the
//! polynomial families, the spectra, the wavefunctions and the oracle.

use std::f64::consts::{PI, TAU};

use euph_core::nu::k_candidates;
use euph_core::oracle::tridiag::{sign_changes, SymTridiagonal};
use euph_core::oracle::{fd_levels, GridSpec, Scheme};
use euph_core::polynomials::{weighted_inner_product, PolynomialFamily};
use euph_core::quadrature::{integrate, QuadOptions};
use euph_core::spectra::{
    self, energy_at, lambda_critical, lambda_inversion, quantized_epsilon, radial_ode, ScaledParameters,
};
use euph_core::wavefunctions::{build_state, psi_eval, spherical_harmonic, RadialEigenstate};
use euph_core::{DeformationModel, KRoot, QuantumNumbers, Space, UnitSystem};
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;

fn space() -> impl Strategy<Value = Space> {
    prop_oneof![Just(Space::DeSitter), Just(Space::AntiDeSitter)]
}

fn qn_strategy(n_max: u32) -> impl Strategy<Value = QuantumNumbers> {
    (1..=n_max).prop_flat_map(|n| (0..n).prop_map(move |l| QuantumNumbers::nl(n, l).unwrap()))
}

/// Residual of sigma y'' + tau y' + lambda_n y relative to the size of its terms.
fn hypergeometric_residual(family: &PolynomialFamily, n: usize, points: &[f64]) -> f64 {
    let y = family.coefficients(n).unwrap();
    let (dy, d2y) = (y.derivative(), y.derivative().derivative());
    let (sigma, tau) = (family.sigma(), family.tau());
    let nf = n as f64;
    let lambda_n = -nf * tau.c(1) - 0.5 * nf * (nf - 1.0) * 2.0 * sigma.c(2);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for &s in points {
        let t = [
            sigma.eval(s) * d2y.eval(s),
            tau.eval(s) * dy.eval(s),
            lambda_n * y.eval(s),
        ];
        num = num.max(t.iter().sum::<f64>().abs());
        den = den.max(t.iter().map(|v| v.abs()).sum::<f64>());
    }
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn s_of_r_is_monotone_and_invertible(sp in space(), lambda in 1e-4f64..0.5, a in 0.01f64..0.98, b in 0.01f64..0.98) {
        let m = DeformationModel::new(sp, lambda).unwrap();
        let scale = m.wall().unwrap_or(20.0 / lambda.sqrt());
        let (r1, r2) = (a.min(b) * scale, a.max(b) * scale);
        prop_assume!(r2 - r1 > 1e-6 * scale);
        let (s1, s2) = (m.s_of_r(r1).unwrap(), m.s_of_r(r2).unwrap());
        prop_assert!(s1 > s2);
        for (r, s) in [(r1, s1), (r2, s2)] {
            let back = m.r_of_s(s).unwrap();
            prop_assert!(((back - r) / r).abs() < 1e-10, "r = {}, back = {}", r, back);
        }
    }

    #[test]
    fn ads_uncertainty_floor_minimum(lambda in 1e-4f64..1.0, f in 0.05f64..20.0) {
        let m = DeformationModel::anti_de_sitter(lambda).unwrap();
        let floor = m.min_momentum_uncertainty().unwrap();
        let dx_star = 1.0 / lambda.sqrt();
        prop_assert!((m.uncertainty_floor(dx_star).unwrap() - floor).abs() <= 1e-12 * floor);
        prop_assert!(m.uncertainty_floor(f * dx_star).unwrap() >= floor * (1.0 - 1e-12));
    }

    #[test]
    fn k_roots_match_scaled_parameters(sp in space(), l in 0u32..6, lambda in 1e-3f64..0.2, x in 0.0f64..1.0) {
        let m = DeformationModel::new(sp, lambda).unwrap();
        let eta = spectra::eta(&m);
        let c = 0.25 + (l as f64 + 0.5).powi(2);
        // dS needs c - eps >= eta for a real delta
        let eps = match sp {
            Space::DeSitter => c - eta - 1.0 - 50.0 * x,
            Space::AntiDeSitter => -c - 50.0 + 100.0 * x,
        };
        let ode = radial_ode(sp, l, eta, eps).unwrap();
        let k = k_candidates(&ode).unwrap();
        let p = ScaledParameters::new(&m, l, eps).unwrap();
        let k1 = p.k1(sp, l);
        prop_assert!((k.get(KRoot::Larger) - k1).abs() <= 1e-9 * k1.abs().max(1.0), "{} vs {}", k.larger, k1);
        if let Some(d2) = p.delta_other {
            let k2 = c - d2 * d2;
            prop_assert!((k.get(KRoot::Smaller) - k2).abs() <= 1e-9 * k2.abs().max(1.0));
        }
    }

    #[test]
    fn jacobi_rodrigues_solves_its_ode(a in -3.0f64..3.0, b in -3.0f64..3.0, n in 0usize..=8) {
        let fam = PolynomialFamily::jacobi(a, b).unwrap();
        prop_assert_eq!(fam.coefficients(n).unwrap().degree(), Some(n));
        prop_assert!(hypergeometric_residual(&fam, n, &grid(-3.0, 3.0, 61)) <= 1e-10);
    }

    #[test]
    fn romanovski_rodrigues_solves_its_ode(alpha in -8.0f64..1.0, beta in -5.0f64..5.0, n in 0usize..=8) {
        let fam = PolynomialFamily::romanovski(alpha, beta).unwrap();
        let y = fam.coefficients(n).unwrap();
        // the leading coefficient vanishes when 2 alpha + n + 1 hits a non-positive integer
        prop_assume!(y.degree() == Some(n));
        prop_assert!(hypergeometric_residual(&fam, n, &grid(-5.0, 5.0, 61)) <= 1e-10);
    }

    #[test]
    fn jacobi_parity(a in -0.9f64..3.0, b in -0.9f64..3.0, n in 0usize..=6, s in -1.0f64..1.0) {
        let p = PolynomialFamily::jacobi(a, b).unwrap().coefficients(n).unwrap();
        let q = PolynomialFamily::jacobi(b, a).unwrap().coefficients(n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let scale = p.max_abs_coeff().max(1.0);
        prop_assert!((p.eval(-s) - sign * q.eval(s)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn bohr_limit(n in 1u32..8, l_frac in 0.0f64..1.0, sp in space()) {
        let l = ((n as f64) * l_frac).floor().min((n - 1) as f64) as u32;
        let q = QuantumNumbers::nl(n, l).unwrap();
        let e0 = energy_at(sp, 0.0, &UnitSystem::HARTREE, q).unwrap();
        prop_assert_eq!(e0, -0.5 / (n * n) as f64);
        let e = energy_at(sp, 1e-9, &UnitSystem::HARTREE, q).unwrap();
        prop_assert!((e - e0).abs() <= 1e-9 * q.correction_factor().abs() + 1e-15);
    }

    #[test]
    fn l_ordering(lambda in 1e-4f64..0.5, q in qn_strategy(8)) {
        prop_assume!(q.l + 1 < q.n);
        let next = QuantumNumbers::nl(q.n, q.l + 1).unwrap();
        let ds = DeformationModel::de_sitter(lambda).unwrap();
        let ads = DeformationModel::anti_de_sitter(lambda).unwrap();
        prop_assert!(spectra::energy(&ds, next).energy > spectra::energy(&ds, q).energy);
        prop_assert!(spectra::energy(&ads, next).energy < spectra::energy(&ads, q).energy);
    }

    #[test]
    fn critical_and_inversion_points(q in qn_strategy(12)) {
        prop_assume!(q.n >= 2);
        let lc = lambda_critical(q).unwrap();
        let ads = DeformationModel::anti_de_sitter(lc).unwrap();
        prop_assert!(spectra::energy(&ads, q).energy.abs() <= 1e-14);
        let lf = lambda_inversion(q).unwrap();
        let ds = DeformationModel::de_sitter(lf).unwrap();
        prop_assert!((spectra::energy(&ds, q).energy + 0.5).abs() <= 1e-14);
    }

    #[test]
    fn epsilon_round_trip(sp in space(), lambda in 1e-4f64..0.5, q in qn_strategy(6)) {
        let m = DeformationModel::new(sp, lambda).unwrap();
        let e = spectra::energy(&m, q).energy;
        let back = spectra::energy_of_epsilon(&m, quantized_epsilon(&m, q));
        prop_assert!((back - e).abs() <= 1e-12 * e.abs().max(1e-3));
    }

    #[test]
    fn spherical_harmonic_modulus_ignores_phi(l in 0u32..6, m_frac in 0.0f64..1.0, theta in 0.0f64..PI, p1 in 0.0f64..TAU, p2 in 0.0f64..TAU) {
        let m = ((2 * l + 1) as f64 * m_frac).floor() as i32 - l as i32;
        let m = m.clamp(-(l as i32), l as i32);
        let a = spherical_harmonic(l, m, theta, p1).norm();
        let b = spherical_harmonic(l, m, theta, p2).norm();
        prop_assert!((a - b).abs() <= 1e-13);
    }

    #[test]
    fn symmetric_tridiagonal_eigenpairs(
        diag in prop::collection::vec(-5.0f64..5.0, 20),
        off in prop::collection::vec(0.1f64..2.0, 19),
        k in 0usize..20,
    ) {
        let t = SymTridiagonal::new(diag, off);
        let lam = t.eigenvalue(k);
        prop_assert!(t.count_below(lam - 1e-9) <= k);
        prop_assert!(t.count_below(lam + 1e-9) > k);
        let v = t.eigenvector(lam);
        let n = t.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut tv = t.diag[i] * v[i];
            if i > 0 { tv += t.off[i - 1] * v[i - 1]; }
            if i + 1 < n { tv += t.off[i] * v[i + 1]; }
            worst = worst.max((tv - lam * v[i]).abs());
        }
        prop_assert!(worst < 1e-8, "residual {}", worst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_orthogonality_and_norm(a in -0.5f64..2.5, b in -0.5f64..2.5, n in 0usize..=4, m in 0usize..=4) {
        let fam = PolynomialFamily::jacobi(a, b).unwrap();
        let ip = weighted_inner_product(&fam, n, m, (-1.0, 1.0)).unwrap();
        if n != m {
            prop_assert!(ip.abs() <= 1e-8, "<{},{}> = {}", n, m, ip);
        } else {
            let nf = n as f64;
            let ln_h = (a + b + 1.0) * 2f64.ln() - (2.0 * nf + a + b + 1.0).ln()
                + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
                - ln_gamma(nf + a + b + 1.0) - ln_gamma(nf + 1.0);
            let h = ln_h.exp();
            prop_assert!((ip - h).abs() <= 1e-8 * h, "{} vs {}", ip, h);
        }
        let swapped = weighted_inner_product(&fam, m, n, (-1.0, 1.0)).unwrap();
        prop_assert!((ip - swapped).abs() <= 1e-12 * ip.abs().max(1.0));
    }

    #[test]
    fn ads_normalization_is_converged(lambda in 1e-3f64..0.05, q in qn_strategy(3)) {
        let m = DeformationModel::anti_de_sitter(lambda).unwrap();
        let st = build_state(&m, q).unwrap();
        let coarse = st.norm(1e-10).unwrap();
        let fine = st.norm(1e-13).unwrap();
        prop_assert!((fine - 1.0).abs() <= 1e-8);
        prop_assert!((coarse - fine).abs() <= 1e-9);
    }

    #[test]
    fn radial_function_solves_the_radial_equation(sp in space(), lambda in 1e-3f64..0.01, q in qn_strategy(3)) {
        let m = DeformationModel::new(sp, lambda).unwrap();
        // flat-normalizable dS states only
        let st = match build_state(&m, q) {
            Ok(st) => st,
            Err(_) => { prop_assume!(false); unreachable!() }
        };
        let res = liouville_residual(&st);
        prop_assert!(res <= 1e-6, "relative residual {}", res);
    }

    #[test]
    fn psi_ground_angular_factor(lambda in 1e-3f64..0.05, r in 0.1f64..5.0, theta in 0.0f64..PI, phi in 0.0f64..TAU) {
        let m = DeformationModel::anti_de_sitter(lambda).unwrap();
        let st = build_state(&m, QuantumNumbers::nl(1, 0).unwrap()).unwrap();
        let r = r.min(0.9 * m.wall().unwrap());
        let psi = psi_eval(&st, r, theta, phi).unwrap();
        let expected = euph_core::wavefunctions::radial_eval(&st, r).unwrap() / (4.0 * PI).sqrt();
        prop_assert!((psi.re - expected).abs() <= 1e-14 * expected.abs().max(1.0));
        prop_assert!(psi.im.abs() <= 1e-14 * expected.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_grid_invariants(sp in space(), lambda in 0.01f64..0.1, l in 0u32..3) {
        let m = DeformationModel::new(sp, lambda).unwrap();
        let g = GridSpec::new(400, 1e-3, 40.0, Scheme::Uniform).unwrap();
        let (eps, vecs, _) = fd_levels(&m, l, 3, &g).unwrap();
        prop_assert!(eps.windows(2).all(|w| w[0] < w[1]));
        // the uniform grid is anchored at the pole, so r_min does not enter
        let halved = GridSpec { r_min: 0.5 * g.r_min, ..g };
        let (eps_h, ..) = fd_levels(&m, l, 3, &halved).unwrap();
        for (a, b) in eps.iter().zip(&eps_h) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        for (k, v) in vecs.iter().enumerate() {
            prop_assert_eq!(sign_changes(v, 1e-9), k);
        }
    }
}

/// Max over 50 interior points of |-u'' + (V - eps) u| / max |u''|, with
/// u = R sqrt(sinh x) (dS) or R sqrt(sin x) (AdS) in the geodesic coordinate x.
fn liouville_residual(st: &RadialEigenstate) -> f64 {
    let m = &st.model;
    let sl = m.lambda().sqrt();
    let l = st.qn.l as f64;
    let eta = st.params.eta;
    let eps = st.params.epsilon;
    let tau = m.tau();
    type Map = fn(f64) -> f64;
    let (geo, r_of_x): (Map, Map) = match m.space() {
        Space::DeSitter => (f64::asinh, f64::sinh),
        Space::AntiDeSitter => (f64::asin, f64::sin),
    };
    let u = |x: f64| {
        let w = r_of_x(x);
        st.radial_function(w / sl).unwrap() * w.sqrt()
    };
    let coth = |x: f64| match m.space() {
        Space::DeSitter => 1.0 / x.tanh(),
        Space::AntiDeSitter => 1.0 / x.tan(),
    };
    let n = st.qn.n as f64;
    let r_hi = (12.0 * n * n).min(m.wall().map_or(f64::INFINITY, |w| 0.9 * w));
    let (x_lo, x_hi) = (geo(sl * 0.2), geo(sl * r_hi));
    let h = 2e-3 * (x_hi - x_lo).min(1.0);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..50 {
        let x = x_lo + (x_hi - x_lo) * (i as f64 + 0.5) / 50.0;
        let f = |j: i32| u(x + j as f64 * h);
        let d2 =
            (2.0 * (f(-3) + f(3)) - 27.0 * (f(-2) + f(2)) + 270.0 * (f(-1) + f(1)) - 490.0 * f(0)) / (180.0 * h * h);
        let s = coth(x);
        let v = l * (l + 1.0) * s * s - eta * s + 0.5 * tau;
        worst = worst.max((-d2 + (v - eps) * f(0)).abs());
        scale = scale.max(d2.abs());
    }
    worst / scale
}

#[test]
fn y10_is_normalized() {
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_intervals: 2000,
    };
    let theta = integrate(|t| spherical_harmonic(1, 0, t, 0.0).norm_sqr() * t.sin(), 0.0, PI, opts);
    let total = 2.0 * PI * theta.value;
    assert!((total - 1.0).abs() <= 1e-10, "{total}");
}
