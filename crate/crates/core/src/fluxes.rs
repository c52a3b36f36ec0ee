//! Two-point numerical fluxes (entropy conservative, ES-Rusanov and TVD-ES),
//! numerical non-conservative terms, and entropy diagnostics.
//!
//! All interface kernels are written for an ordered pair (left, right): the
//! dissipation jump is always `v(right) - v(left)`. One evaluation per
//! interface serves both adjacent cells, which is what the ordered-jump
//! convention requires.

use crate::numerics::log_mean;
use crate::physics::{
    advective_flux_dir, entropy_flux_potential, entropy_jacobian_prim, entropy_vars_prim,
    max_wavespeed, phi_mhd, swap_xy, EntropyVars, PhysParams, Primitive, StateVec, NVARS,
};

/// Selectable two-point flux kinds. `TvdEs` is only meaningful where
/// reconstructed jumps are available (the FV-interior role); on element faces
/// it degenerates to `EsRusanov` because LGL boundary nodes sit on the faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointFluxKind {
    Ec,
    EsRusanov,
    TvdEs,
}

#[inline]
fn avg(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

/// Entropy-conservative flux of Derigs et al. in the x direction.
pub fn ec_flux_x(l: &Primitive, r: &Primitive, params: &PhysParams) -> StateVec {
    let ch = params.c_h;
    let rho_ln = log_mean(l.rho, r.rho);
    let beta_l = l.beta();
    let beta_r = r.beta();
    let beta_ln = log_mean(beta_l, beta_r);
    let beta_avg = avg(beta_l, beta_r);
    let p_bar = avg(l.rho, r.rho) / (2.0 * beta_avg);

    let v1 = avg(l.v[0], r.v[0]);
    let v2 = avg(l.v[1], r.v[1]);
    let v3 = avg(l.v[2], r.v[2]);
    let b1 = avg(l.b[0], r.b[0]);
    let b2 = avg(l.b[1], r.b[1]);
    let b3 = avg(l.b[2], r.b[2]);
    let psi = avg(l.psi, r.psi);

    let b1b1 = avg(l.b[0] * l.b[0], r.b[0] * r.b[0]);
    let b2b2 = avg(l.b[1] * l.b[1], r.b[1] * r.b[1]);
    let b3b3 = avg(l.b[2] * l.b[2], r.b[2] * r.b[2]);

    let f1 = rho_ln * v1;
    let f2 = f1 * v1 - b1 * b1 + p_bar + 0.5 * (b1b1 + b2b2 + b3b3);
    let f3 = f1 * v2 - b1 * b2;
    let f4 = f1 * v3 - b1 * b3;
    let f6 = ch * psi;
    let f7 = v1 * b2 - v2 * b1;
    let f8 = v1 * b3 - v3 * b1;
    let f9 = ch * b1;

    let v1sq = avg(l.v[0] * l.v[0], r.v[0] * r.v[0]);
    let v2sq = avg(l.v[1] * l.v[1], r.v[1] * r.v[1]);
    let v3sq = avg(l.v[2] * l.v[2], r.v[2] * r.v[2]);
    let v1b1sq = avg(l.v[0] * l.b[0] * l.b[0], r.v[0] * r.b[0] * r.b[0]);
    let v1b2sq = avg(l.v[0] * l.b[1] * l.b[1], r.v[0] * r.b[1] * r.b[1]);
    let v1b3sq = avg(l.v[0] * l.b[2] * l.b[2], r.v[0] * r.b[2] * r.b[2]);
    let v1b1 = avg(l.v[0] * l.b[0], r.v[0] * r.b[0]);
    let v2b2 = avg(l.v[1] * l.b[1], r.v[1] * r.b[1]);
    let v3b3 = avg(l.v[2] * l.b[2], r.v[2] * r.b[2]);
    let b1psi = avg(l.b[0] * l.psi, r.b[0] * r.psi);

    let f5 = f1 * (0.5 / ((params.gamma - 1.0) * beta_ln) - 0.5 * (v1sq + v2sq + v3sq))
        + f2 * v1
        + f3 * v2
        + f4 * v3
        + f6 * b1
        + f7 * b2
        + f8 * b3
        + f9 * psi
        - 0.5 * (v1b1sq + v1b2sq + v1b3sq)
        + b1 * (v1b1 + v2b2 + v3b3)
        - ch * b1psi;

    [f1, f2, f3, f4, f5, f6, f7, f8, f9]
}

#[inline]
fn swap_prim(q: &Primitive) -> Primitive {
    Primitive {
        rho: q.rho,
        v: [q.v[1], q.v[0], q.v[2]],
        p: q.p,
        b: [q.b[1], q.b[0], q.b[2]],
        psi: q.psi,
    }
}

/// EC flux in direction `dir` (0 = x, 1 = y).
pub fn ec_flux_dir(l: &Primitive, r: &Primitive, params: &PhysParams, dir: usize) -> StateVec {
    match dir {
        0 => ec_flux_x(l, r, params),
        1 => swap_xy(&ec_flux_x(&swap_prim(l), &swap_prim(r), params)),
        _ => unreachable!("direction out of range"),
    }
}

/// Block EC flux contracted with a scaled normal/metric vector:
/// `n_x f^ec_x + n_y f^ec_y`.
pub fn ec_flux_metric(l: &Primitive, r: &Primitive, n: [f64; 2], params: &PhysParams) -> StateVec {
    let mut out = [0.0; NVARS];
    if n[0] != 0.0 {
        let fx = ec_flux_x(l, r, params);
        for k in 0..NVARS {
            out[k] += n[0] * fx[k];
        }
    }
    if n[1] != 0.0 {
        let fy = ec_flux_dir(l, r, params, 1);
        for k in 0..NVARS {
            out[k] += n[1] * fy[k];
        }
    }
    out
}

/// Advective block flux contracted with a metric vector.
pub fn advective_flux_metric(q: &Primitive, n: [f64; 2], params: &PhysParams) -> StateVec {
    let mut out = [0.0; NVARS];
    if n[0] != 0.0 {
        let fx = advective_flux_dir(q, params, 0);
        for k in 0..NVARS {
            out[k] += n[0] * fx[k];
        }
    }
    if n[1] != 0.0 {
        let fy = advective_flux_dir(q, params, 1);
        for k in 0..NVARS {
            out[k] += n[1] * fy[k];
        }
    }
    out
}

/// Surface numerical non-conservative term ("diamond" term) for the ordered
/// pair (j, k) with curvilinear metrics:
/// `Phi = 1/2 [ (B.Ja)_j + B_k . <Ja> ] phi^MHD_j + (phi^GLM_j . Ja_j) <psi>`.
///
/// `metric_j` is the scaled contravariant vector at the j side, `metric_avg`
/// the interface average (they coincide on element faces and FV subcell
/// interfaces). The 1D Cartesian form is recovered with metrics (1, 0).
pub fn diamond_noncons(
    qj: &Primitive,
    qk: &Primitive,
    metric_j: [f64; 2],
    metric_avg: [f64; 2],
    params: &PhysParams,
) -> StateVec {
    let b_dot_j = qj.b[0] * metric_j[0] + qj.b[1] * metric_j[1];
    let b_dot_k = qk.b[0] * metric_avg[0] + qk.b[1] * metric_avg[1];
    let coeff_mhd = 0.5 * (b_dot_j + b_dot_k);
    let psi_avg = avg(qj.psi, qk.psi);
    let v_dot_j = qj.v[0] * metric_j[0] + qj.v[1] * metric_j[1];

    let phi = phi_mhd(qj, params);
    let mut out = [0.0; NVARS];
    for k in 0..NVARS {
        out[k] = coeff_mhd * phi[k];
    }
    // phi^GLM block dotted with the local metric.
    out[4] += v_dot_j * qj.psi / params.mu0 * psi_avg;
    out[8] += v_dot_j / params.mu0 * psi_avg;
    out
}

/// Volume numerical non-conservative term for the ordered pair (j, k):
/// `Phi* = phi^MHD_j (B_k . <Ja>) + (phi^GLM_j . Ja_j) psi_k`.
/// Satisfies `Phi* = 2 Phi_diamond - Phi_j . Ja_j` identically.
pub fn volume_noncons(
    qj: &Primitive,
    b_k: [f64; 3],
    psi_k: f64,
    metric_j: [f64; 2],
    metric_avg: [f64; 2],
    params: &PhysParams,
) -> StateVec {
    let b_dot_k = b_k[0] * metric_avg[0] + b_k[1] * metric_avg[1];
    let v_dot_j = qj.v[0] * metric_j[0] + qj.v[1] * metric_j[1];
    let phi = phi_mhd(qj, params);
    let mut out = [0.0; NVARS];
    for k in 0..NVARS {
        out[k] = b_dot_k * phi[k];
    }
    out[4] += v_dot_j * qj.psi / params.mu0 * psi_k;
    out[8] += v_dot_j / params.mu0 * psi_k;
    out
}

/// Pointwise non-conservative vector contracted with a metric:
/// `Phi . Ja = phi^MHD (B.Ja) + (phi^GLM . Ja) psi`.
pub fn phi_total_metric(q: &Primitive, metric: [f64; 2], params: &PhysParams) -> StateVec {
    let b_dot = q.b[0] * metric[0] + q.b[1] * metric[1];
    let v_dot = q.v[0] * metric[0] + q.v[1] * metric[1];
    let phi = phi_mhd(q, params);
    let mut out = [0.0; NVARS];
    for k in 0..NVARS {
        out[k] = b_dot * phi[k];
    }
    out[4] += v_dot * q.psi / params.mu0 * q.psi;
    out[8] += v_dot / params.mu0 * q.psi;
    out
}

/// Mean-state dissipation operator for an interface: the entropy Jacobian
/// H evaluated at the arithmetic mean of the primitive states, its lower
/// Cholesky factor L (H = L L^T), and the interface wave speed.
#[derive(Debug, Clone)]
pub struct DissipationContext {
    pub hbar: [[f64; 9]; 9],
    pub chol_l: [[f64; 9]; 9],
    pub lambda_max: f64,
}

/// Lower Cholesky factor of a symmetric positive definite 9x9 matrix.
fn cholesky9(a: &[[f64; 9]; 9]) -> [[f64; 9]; 9] {
    let mut l = [[0.0; 9]; 9];
    for i in 0..9 {
        for j in 0..=i {
            let mut sum = a[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                debug_assert!(sum > 0.0, "Cholesky pivot {sum} <= 0 (H not SPD?)");
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    l
}

#[inline]
fn matvec9(m: &[[f64; 9]; 9], x: &[f64; 9]) -> [f64; 9] {
    let mut y = [0.0; 9];
    for i in 0..9 {
        let mut acc = 0.0;
        for j in 0..9 {
            acc += m[i][j] * x[j];
        }
        y[i] = acc;
    }
    y
}

/// y = L x for a lower-triangular L.
#[inline]
pub fn lower_times(l: &[[f64; 9]; 9], x: &[f64; 9]) -> [f64; 9] {
    let mut y = [0.0; 9];
    for i in 0..9 {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += l[i][j] * x[j];
        }
        y[i] = acc;
    }
    y
}

/// y = L^T x for a lower-triangular L.
#[inline]
pub fn lower_transpose_times(l: &[[f64; 9]; 9], x: &[f64; 9]) -> [f64; 9] {
    let mut y = [0.0; 9];
    for j in 0..9 {
        let xj = x[j];
        for i in j..9 {
            y[j] += l[i][j] * x[i];
        }
        let _ = xj;
    }
    y
}

impl DissipationContext {
    /// Builds the context for an interface with unit normal `nhat`.
    pub fn new(l: &Primitive, r: &Primitive, nhat: [f64; 3], params: &PhysParams) -> Self {
        let mean = Primitive {
            rho: avg(l.rho, r.rho),
            v: [avg(l.v[0], r.v[0]), avg(l.v[1], r.v[1]), avg(l.v[2], r.v[2])],
            p: avg(l.p, r.p),
            b: [avg(l.b[0], r.b[0]), avg(l.b[1], r.b[1]), avg(l.b[2], r.b[2])],
            psi: avg(l.psi, r.psi),
        };
        let hbar = entropy_jacobian_prim(&mean, params);
        let chol_l = cholesky9(&hbar);
        let lambda_max = max_wavespeed(l, nhat, params).max(max_wavespeed(r, nhat, params));
        Self { hbar, chol_l, lambda_max }
    }

    /// w = L^T v, the scaled entropy variables of this interface.
    pub fn scale(&self, v: &EntropyVars) -> [f64; 9] {
        lower_transpose_times(&self.chol_l, &v.0)
    }
}

/// ES-Rusanov flux for the ordered pair (left, right) in the x direction:
/// `f^es = f^ec - 1/2 lambda_max H [[v]]` with `[[v]] = v_R - v_L`.
pub fn es_rusanov_flux(l: &Primitive, r: &Primitive, params: &PhysParams) -> StateVec {
    let jump = jump_entropy_vars(l, r, params);
    es_rusanov_flux_with_jump(l, r, &jump, params)
}

/// ES-Rusanov flux with the ordered jump supplied explicitly. Symmetric in
/// (l, r) for a fixed jump, which realizes the ordered-jump convention.
pub fn es_rusanov_flux_with_jump(
    l: &Primitive,
    r: &Primitive,
    jump_v: &[f64; 9],
    params: &PhysParams,
) -> StateVec {
    let ctx = DissipationContext::new(l, r, [1.0, 0.0, 0.0], params);
    let mut f = ec_flux_x(l, r, params);
    let hdv = matvec9(&ctx.hbar, jump_v);
    for k in 0..NVARS {
        f[k] -= 0.5 * ctx.lambda_max * hdv[k];
    }
    f
}

pub fn jump_entropy_vars(l: &Primitive, r: &Primitive, params: &PhysParams) -> [f64; 9] {
    let vl = entropy_vars_prim(l, params);
    let vr = entropy_vars_prim(r, params);
    let mut jump = [0.0; NVARS];
    for k in 0..NVARS {
        jump[k] = vr.0[k] - vl.0[k];
    }
    jump
}

/// TVD-ES flux (x direction) for the ordered pair: the EC flux of the cell
/// means plus dissipation on the reconstructed jump of the scaled entropy
/// variables, `f = f^ec - 1/2 lambda_max L [[w]]^R`.
pub fn tvd_es_flux(
    l: &Primitive,
    r: &Primitive,
    ctx: &DissipationContext,
    recon_jump_w: &[f64; 9],
    params: &PhysParams,
) -> StateVec {
    let mut f = ec_flux_x(l, r, params);
    let ldw = lower_times(&ctx.chol_l, recon_jump_w);
    for k in 0..NVARS {
        f[k] -= 0.5 * ctx.lambda_max * ldw[k];
    }
    f
}

/// Generic dissipative surface flux contracted with a scaled normal:
/// EC block part `ntilde . f^ec` plus, for the ES kind,
/// `-1/2 |ntilde| lambda H [[v]]`.
pub fn surface_flux_metric(
    kind: TwoPointFluxKind,
    l: &Primitive,
    r: &Primitive,
    ntilde: [f64; 2],
    params: &PhysParams,
) -> StateVec {
    let mut f = ec_flux_metric(l, r, ntilde, params);
    match kind {
        TwoPointFluxKind::Ec => f,
        // On faces the TVD-ES reconstruction offsets vanish (the LGL boundary
        // nodes lie on the face), so TvdEs coincides with EsRusanov here.
        TwoPointFluxKind::EsRusanov | TwoPointFluxKind::TvdEs => {
            let norm = (ntilde[0] * ntilde[0] + ntilde[1] * ntilde[1]).sqrt();
            let nhat = [ntilde[0] / norm, ntilde[1] / norm, 0.0];
            let ctx = DissipationContext::new(l, r, nhat, params);
            let jump = jump_entropy_vars(l, r, params);
            let hdv = matvec9(&ctx.hbar, &jump);
            for k in 0..NVARS {
                f[k] -= 0.5 * norm * ctx.lambda_max * hdv[k];
            }
            f
        }
    }
}

/// Per-direction entropy flux potential pair (Psi_1, Psi_2).
fn potential_pair(q: &Primitive, params: &PhysParams, dim: usize) -> [f64; 2] {
    let mut psi = [0.0; 2];
    for d in 0..dim {
        psi[d] = entropy_flux_potential(q, params, d);
    }
    psi
}

/// Numerical entropy flux from degree of freedom j to k:
/// `<v>^T fhat + 1/2 v_j^T Phi_(j,k) + 1/2 v_k^T Phi_(k,j) - n . <Psi>`.
#[allow(clippy::too_many_arguments)]
pub fn numerical_entropy_flux(
    qj: &Primitive,
    qk: &Primitive,
    fhat: &StateVec,
    diamond_jk: &StateVec,
    diamond_kj: &StateVec,
    n_psi: [f64; 2],
    params: &PhysParams,
) -> f64 {
    let vj = entropy_vars_prim(qj, params);
    let vk = entropy_vars_prim(qk, params);
    let mut acc = 0.0;
    for i in 0..NVARS {
        acc += avg(vj.0[i], vk.0[i]) * fhat[i]
            + 0.5 * vj.0[i] * diamond_jk[i]
            + 0.5 * vk.0[i] * diamond_kj[i];
    }
    let dim = if n_psi[1] == 0.0 { 1 } else { 2 };
    let psi_j = potential_pair(qj, params, dim.max(1));
    let psi_k = potential_pair(qk, params, dim.max(1));
    acc - n_psi[0] * avg(psi_j[0], psi_k[0]) - n_psi[1] * avg(psi_j[1], psi_k[1])
}

/// Entropy production on the interface between the ordered pair (j, k):
/// `[[v]]^T fhat + v_k^T Phi_(k,j) - v_j^T Phi_(j,k) - n . [[Psi]]`.
/// Zero for an entropy-conservative flux, non-positive for ES fluxes.
#[allow(clippy::too_many_arguments)]
pub fn entropy_production(
    qj: &Primitive,
    qk: &Primitive,
    fhat: &StateVec,
    diamond_jk: &StateVec,
    diamond_kj: &StateVec,
    n_psi: [f64; 2],
    params: &PhysParams,
) -> f64 {
    let vj = entropy_vars_prim(qj, params);
    let vk = entropy_vars_prim(qk, params);
    let mut acc = 0.0;
    for i in 0..NVARS {
        acc += (vk.0[i] - vj.0[i]) * fhat[i] + vk.0[i] * diamond_kj[i] - vj.0[i] * diamond_jk[i];
    }
    let dim = if n_psi[1] == 0.0 { 1 } else { 2 };
    let psi_j = potential_pair(qj, params, dim);
    let psi_k = potential_pair(qk, params, dim);
    acc - n_psi[0] * (psi_k[0] - psi_j[0]) - n_psi[1] * (psi_k[1] - psi_j[1])
}

/// Convenience: 1D Cartesian entropy production of a flux between (j, k).
pub fn entropy_production_1d(
    qj: &Primitive,
    qk: &Primitive,
    fhat: &StateVec,
    params: &PhysParams,
) -> f64 {
    let djk = diamond_noncons(qj, qk, [1.0, 0.0], [1.0, 0.0], params);
    let dkj = diamond_noncons(qk, qj, [1.0, 0.0], [1.0, 0.0], params);
    entropy_production(qj, qk, fhat, &djk, &dkj, [1.0, 0.0], params)
}
