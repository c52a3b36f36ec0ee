//! One-dimensional spectral building blocks: LGL quadrature, SBP operators,
//! modal Legendre transforms, stabilized means and limiters.

use crate::error::NumericsError;
use nalgebra::DMatrix;

/// Spectral operators for polynomial degree N on Legendre-Gauss-Lobatto nodes.
///
/// `Q = diag(w) * D` satisfies the SBP property `Q + Q^T = B` with
/// `B = diag(-1, 0, ..., 0, 1)`.
#[derive(Debug, Clone)]
pub struct SpectralOps {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Differentiation matrix D[i][j] = l_j'(xi_i), row-major (N+1)^2.
    pub d: Vec<f64>,
    /// SBP matrix Q[i][j] = w_i D[i][j].
    pub q: Vec<f64>,
    /// Nodal -> modal transform (inverse Vandermonde of the orthonormal
    /// Legendre basis), row-major.
    vinv: Vec<f64>,
    /// Vandermonde V[i][j] = Ltilde_j(xi_i).
    vand: Vec<f64>,
    /// Reference-space subcell boundaries: xi_hat[0] = -1,
    /// xi_hat[j+1] = xi_hat[j] + w_j, xi_hat[N+1] = 1.
    pub subcell_bounds: Vec<f64>,
}

impl SpectralOps {
    #[inline]
    pub fn nn(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn d_at(&self, i: usize, j: usize) -> f64 {
        self.d[i * (self.n + 1) + j]
    }

    #[inline]
    pub fn q_at(&self, i: usize, j: usize) -> f64 {
        self.q[i * (self.n + 1) + j]
    }
}

/// Legendre polynomial P_n and its derivative at x, by recurrence.
fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from the standard identity (guard the endpoints).
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        let nf = n as f64;
        x.powi(n as i32 - 1) * nf * (nf + 1.0) / 2.0
    } else {
        (n as f64) * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

/// LGL nodes: the endpoints plus the roots of P_N', by Newton iteration from
/// Chebyshev-Gauss-Lobatto initial guesses.
fn lgl_nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nn = n + 1;
    let mut nodes = vec![0.0; nn];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    for i in 1..n {
        // Interior initial guess; Newton on (1-x^2) P_N'(x).
        let mut x = -(std::f64::consts::PI * i as f64 / n as f64).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre_and_deriv(n, x);
            // g = (1-x^2) P_N'; g' = -2x P_N' + (1-x^2) P_N''.
            // With Legendre's ODE: (1-x^2) P_N'' = 2x P_N' - N(N+1) P_N,
            // so g' = -N(N+1) P_N.
            let g = (1.0 - x * x) * dpn;
            let gp = -(n as f64) * (n as f64 + 1.0) * pn;
            let dx = g / gp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
    }
    // Enforce exact symmetry about zero.
    for i in 0..nn / 2 {
        let s = 0.5 * (nodes[i] - nodes[n - i]);
        nodes[i] = s;
        nodes[n - i] = -s;
    }
    if nn % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let mut weights = vec![0.0; nn];
    for i in 0..nn {
        let (pn, _) = legendre_and_deriv(n, nodes[i]);
        weights[i] = 2.0 / (n as f64 * (n as f64 + 1.0) * pn * pn);
    }
    (nodes, weights)
}

/// Builds the spectral operator set for degree N.
pub fn build_ops(n: usize) -> Result<SpectralOps, NumericsError> {
    if !(1..=15).contains(&n) {
        return Err(NumericsError::UnsupportedDegree(n));
    }
    let nn = n + 1;
    let (nodes, weights) = lgl_nodes_weights(n);

    // Barycentric weights for the differentiation matrix.
    let mut bary = vec![1.0; nn];
    for i in 0..nn {
        for j in 0..nn {
            if i != j {
                bary[i] *= nodes[i] - nodes[j];
            }
        }
        bary[i] = 1.0 / bary[i];
    }
    let mut d = vec![0.0; nn * nn];
    for i in 0..nn {
        let mut row_sum = 0.0;
        for j in 0..nn {
            if i != j {
                let val = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                d[i * nn + j] = val;
                row_sum += val;
            }
        }
        d[i * nn + i] = -row_sum;
    }
    let mut q = vec![0.0; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            q[i * nn + j] = weights[i] * d[i * nn + j];
        }
    }

    // Orthonormal Legendre Vandermonde and its inverse.
    let mut vand = vec![0.0; nn * nn];
    for (i, &x) in nodes.iter().enumerate() {
        for j in 0..nn {
            let (pj, _) = legendre_and_deriv(j, x);
            vand[i * nn + j] = pj * ((2.0 * j as f64 + 1.0) / 2.0).sqrt();
        }
    }
    let vm = DMatrix::from_row_slice(nn, nn, &vand);
    let vinv_m = vm
        .clone()
        .try_inverse()
        .expect("LGL Vandermonde is invertible");
    let mut vinv = vec![0.0; nn * nn];
    for i in 0..nn {
        for j in 0..nn {
            vinv[i * nn + j] = vinv_m[(i, j)];
        }
    }

    let mut subcell_bounds = vec![-1.0; nn + 1];
    for j in 0..nn {
        subcell_bounds[j + 1] = subcell_bounds[j] + weights[j];
    }
    subcell_bounds[nn] = 1.0;

    Ok(SpectralOps { n, nodes, weights, d, q, vinv, vand, subcell_bounds })
}

impl SpectralOps {
    /// Modal coefficients of the interpolant through `values` in the
    /// orthonormal Legendre basis.
    pub fn nodal_to_modal(&self, values: &[f64], out: &mut [f64]) {
        let nn = self.nn();
        debug_assert_eq!(values.len(), nn);
        debug_assert_eq!(out.len(), nn);
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, &v) in values.iter().enumerate() {
                acc += self.vinv[j * nn + i] * v;
            }
            *o = acc;
        }
    }

    /// Nodal values from modal coefficients.
    pub fn modal_to_nodal(&self, coeffs: &[f64], out: &mut [f64]) {
        let nn = self.nn();
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &c) in coeffs.iter().enumerate() {
                acc += self.vand[i * nn + j] * c;
            }
            *o = acc;
        }
    }

    /// Interpolation matrix from this operator's nodes to another node set
    /// (row-major, len targets.len() * (N+1)).
    pub fn interpolation_to(&self, targets: &[f64]) -> Vec<f64> {
        let nn = self.nn();
        let mut bary = vec![1.0; nn];
        for i in 0..nn {
            for j in 0..nn {
                if i != j {
                    bary[i] *= self.nodes[i] - self.nodes[j];
                }
            }
            bary[i] = 1.0 / bary[i];
        }
        let mut m = vec![0.0; targets.len() * nn];
        for (r, &x) in targets.iter().enumerate() {
            // Exact hit on a source node.
            if let Some(j) = self.nodes.iter().position(|&xn| (xn - x).abs() < 1e-14) {
                m[r * nn + j] = 1.0;
                continue;
            }
            let mut denom = 0.0;
            for j in 0..nn {
                denom += bary[j] / (x - self.nodes[j]);
            }
            for j in 0..nn {
                m[r * nn + j] = (bary[j] / (x - self.nodes[j])) / denom;
            }
        }
        m
    }
}

/// Numerically stable logarithmic mean `(b - a) / (ln b - ln a)`.
///
/// Near-equal arguments use a series in zeta^2, zeta = (a-b)/(a+b), switched
/// at zeta^2 < 1e-4 where both branches agree to ~1e-13.
pub fn log_mean(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0, "log_mean needs positive arguments");
    // Canonical argument order makes the mean bitwise symmetric.
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let zeta = (lo - hi) / (lo + hi);
    let u = zeta * zeta;
    let f = if u < 1e-4 {
        1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0
    } else {
        (lo / hi).ln() / (2.0 * zeta)
    };
    (lo + hi) / (2.0 * f)
}

/// minmod(a, b): sign(a) min(|a|, |b|) when signs agree, else zero.
#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}
