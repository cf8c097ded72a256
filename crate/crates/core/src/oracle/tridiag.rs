//! Symmetric tridiagonal eigenvalues by Sturm bisection and eigenvectors by
//! inverse iteration.

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling i and i+1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length mismatch");
        SymTridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (k from 0).
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue estimate, unit 2-norm, largest entry positive.
    pub fn eigenvector(&self, value: f64) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.bounds();
        let shift = value + 1e-13 * (hi - lo).max(value.abs());
        let mut x = vec![1.0; n];
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let big = x
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if big < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }

    /// Solve (T - mu I) x = b by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, mu: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // rows of U: u0 (diagonal), u1, u2 (fill from row swaps)
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let tiny = f64::EPSILON * self.bounds().1.abs().max(1.0);

        // the active row only ever has entries in columns i and i+1
        let mut d = self.diag[0] - mu;
        let mut e = if n > 1 { self.off[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if d == 0.0 { tiny } else { d };
                break;
            }
            let sub = self.off[i];
            let d_next = self.diag[i + 1] - mu;
            let e_next = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if d.abs() >= sub.abs() {
                let piv = if d == 0.0 { tiny } else { d };
                let m = sub / piv;
                u0[i] = piv;
                u1[i] = e;
                rhs[i + 1] -= m * rhs[i];
                d = d_next - m * e;
                e = e_next;
            } else {
                let m = d / sub;
                u0[i] = sub;
                u1[i] = d_next;
                u2[i] = e_next;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
                d = e - m * d_next;
                e = -m * e_next;
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= u2[i] * x[i + 2];
            }
            x[i] = acc / u0[i];
        }
        x
    }
}

/// Strict sign changes, ignoring entries below `rel_floor * max|v|`.
pub fn sign_changes(v: &[f64], rel_floor: f64) -> usize {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = rel_floor * peak;
    let mut prev = 0.0f64;
    let mut count = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if prev != 0.0 && x.signum() != prev.signum() {
            count += 1;
        }
        prev = x;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in 0..n {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn eigenvectors_and_nodes() {
        let n = 200;
        let t = laplacian(n);
        for k in 0..5 {
            let lam = t.eigenvalue(k);
            let v = t.eigenvector(lam);
            let exact: Vec<f64> = (1..=n)
                .map(|j| (PI * ((k + 1) * j) as f64 / (n + 1) as f64).sin())
                .collect();
            let norm = exact.iter().map(|x| x * x).sum::<f64>().sqrt();
            let dot: f64 = v.iter().zip(&exact).map(|(a, b)| a * b / norm).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-10, "k = {k}, dot = {dot}");
            assert_eq!(sign_changes(&v, 1e-10), k);
        }
    }

    #[test]
    fn pivoting_solve() {
        // zero leading pivot forces a row swap
        let t = SymTridiagonal::new(vec![0.0, 1.0, 3.0], vec![2.0, 1.0]);
        let b = [1.0, 2.0, 3.0];
        let x = t.solve_shifted(0.0, &b);
        let ax = [
            t.diag[0] * x[0] + t.off[0] * x[1],
            t.off[0] * x[0] + t.diag[1] * x[1] + t.off[1] * x[2],
            t.off[1] * x[1] + t.diag[2] * x[2],
        ];
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-12);
        }
    }
}
