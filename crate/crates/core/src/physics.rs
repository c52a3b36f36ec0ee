//! Pointwise GLM-MHD physics: state conversions, advective/viscous fluxes,
//! non-conservative vectors, entropy machinery and wave speeds.
//!
//! The state vector is `u = (rho, rho v, rho E, B, psi)` with nine components.
//! All kernels are pure functions of their inputs.

use crate::error::PhysicsError;

/// Number of state components.
pub const NVARS: usize = 9;

/// Raw nine-component state/flux vector.
pub type StateVec = [f64; NVARS];

/// Density floor below which a state is treated as a scheme failure, not
/// something to mask by flooring.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-13;

/// Conservative state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub rho: f64,
    pub mom: [f64; 3],
    pub rho_e: f64,
    pub b: [f64; 3],
    pub psi: f64,
}

/// Primitive state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub v: [f64; 3],
    pub p: f64,
    pub b: [f64; 3],
    pub psi: f64,
}

/// Entropy variables v = dS/du.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyVars(pub StateVec);

/// Flux vectors for every spatial direction in use (1 in 1D, 2 in 2D).
#[derive(Debug, Clone, Copy)]
pub struct BlockFlux {
    pub f: [StateVec; 2],
    pub dim: usize,
}

/// Physical parameters. `c_h` is the GLM cleaning speed, updated per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub gamma: f64,
    pub mu0: f64,
    pub mu_ns: f64,
    pub eta: f64,
    pub pr: f64,
    pub r_gas: f64,
    pub c_h: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            gamma: 5.0 / 3.0,
            mu0: 1.0,
            mu_ns: 0.0,
            eta: 0.0,
            pr: 0.72,
            r_gas: 1.0,
            c_h: 0.0,
        }
    }
}

impl PhysParams {
    /// Thermal conductivity kappa = gamma mu_NS R / ((gamma-1) Pr).
    pub fn kappa(&self) -> f64 {
        self.gamma * self.mu_ns * self.r_gas / ((self.gamma - 1.0) * self.pr)
    }

    /// kappa / R, the coefficient multiplying grad(p/rho) in the heat flux.
    pub fn kappa_over_r(&self) -> f64 {
        self.gamma * self.mu_ns / ((self.gamma - 1.0) * self.pr)
    }

    pub fn is_inviscid(&self) -> bool {
        self.mu_ns == 0.0 && self.eta == 0.0
    }
}

#[inline]
pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm2(a: [f64; 3]) -> f64 {
    dot3(a, a)
}

impl State {
    #[inline]
    pub fn from_vec(u: &StateVec) -> Self {
        Self {
            rho: u[0],
            mom: [u[1], u[2], u[3]],
            rho_e: u[4],
            b: [u[5], u[6], u[7]],
            psi: u[8],
        }
    }

    #[inline]
    pub fn to_vec(&self) -> StateVec {
        [
            self.rho, self.mom[0], self.mom[1], self.mom[2], self.rho_e, self.b[0], self.b[1],
            self.b[2], self.psi,
        ]
    }
}

impl Primitive {
    #[inline]
    pub fn beta(&self) -> f64 {
        self.rho / (2.0 * self.p)
    }
}

/// Conservative -> primitive conversion via the calorically perfect gas law
/// `p = (gamma-1)(rhoE - rho|v|^2/2 - |B|^2/(2 mu0) - psi^2/(2 mu0))`.
pub fn cons_to_prim(u: &State, params: &PhysParams) -> Result<Primitive, PhysicsError> {
    if !(u.rho > ADMISSIBILITY_FLOOR) {
        return Err(PhysicsError::Inadmissible {
            rho: u.rho,
            p: f64::NAN,
            context: "cons_to_prim: non-positive density",
        });
    }
    let v = [u.mom[0] / u.rho, u.mom[1] / u.rho, u.mom[2] / u.rho];
    let p = (params.gamma - 1.0)
        * (u.rho_e
            - 0.5 * u.rho * norm2(v)
            - 0.5 * norm2(u.b) / params.mu0
            - 0.5 * u.psi * u.psi / params.mu0);
    if !(p > ADMISSIBILITY_FLOOR) {
        return Err(PhysicsError::Inadmissible {
            rho: u.rho,
            p,
            context: "cons_to_prim: non-positive pressure",
        });
    }
    Ok(Primitive { rho: u.rho, v, p, b: u.b, psi: u.psi })
}

pub fn prim_to_cons(q: &Primitive, params: &PhysParams) -> State {
    let rho_e = q.p / (params.gamma - 1.0)
        + 0.5 * q.rho * norm2(q.v)
        + 0.5 * norm2(q.b) / params.mu0
        + 0.5 * q.psi * q.psi / params.mu0;
    State {
        rho: q.rho,
        mom: [q.rho * q.v[0], q.rho * q.v[1], q.rho * q.v[2]],
        rho_e,
        b: q.b,
        psi: q.psi,
    }
}

/// Mathematical entropy S = -rho s / (gamma - 1), s = ln(p rho^-gamma).
pub fn entropy(u: &State, params: &PhysParams) -> Result<f64, PhysicsError> {
    let q = cons_to_prim(u, params)?;
    Ok(entropy_prim(&q, params))
}

#[inline]
pub fn entropy_prim(q: &Primitive, params: &PhysParams) -> f64 {
    let s = q.p.ln() - params.gamma * q.rho.ln();
    -q.rho * s / (params.gamma - 1.0)
}

/// Entropy variables v = dS/du.
pub fn entropy_vars(u: &State, params: &PhysParams) -> Result<EntropyVars, PhysicsError> {
    let q = cons_to_prim(u, params)?;
    Ok(entropy_vars_prim(&q, params))
}

pub fn entropy_vars_prim(q: &Primitive, params: &PhysParams) -> EntropyVars {
    let g = params.gamma;
    let s = q.p.ln() - g * q.rho.ln();
    let beta = q.beta();
    EntropyVars([
        (g - s) / (g - 1.0) - beta * norm2(q.v),
        2.0 * beta * q.v[0],
        2.0 * beta * q.v[1],
        2.0 * beta * q.v[2],
        -2.0 * beta,
        2.0 * beta * q.b[0],
        2.0 * beta * q.b[1],
        2.0 * beta * q.b[2],
        2.0 * beta * q.psi,
    ])
}

/// Entropy Jacobian H = du/dv, symmetric positive definite for admissible
/// states. Closed form obtained by inverting dv/du through the primitive
/// variables.
pub fn entropy_jacobian(u: &State, params: &PhysParams) -> Result<[[f64; 9]; 9], PhysicsError> {
    let q = cons_to_prim(u, params)?;
    Ok(entropy_jacobian_prim(&q, params))
}

pub fn entropy_jacobian_prim(q: &Primitive, params: &PhysParams) -> [[f64; 9]; 9] {
    let g = params.gamma;
    let (rho, p) = (q.rho, q.p);
    let v = q.v;
    let vsq = norm2(v);
    let bsq = norm2(q.b);
    // Hydrodynamic energy (no magnetic / psi part) and total enthalpy flux.
    let e_h = p / (g - 1.0) + 0.5 * rho * vsq;
    let h_flux = e_h + p;
    let mut h = [[0.0; 9]; 9];
    h[0][0] = rho;
    for i in 0..3 {
        h[0][1 + i] = rho * v[i];
        h[1 + i][0] = rho * v[i];
    }
    h[0][4] = e_h;
    h[4][0] = e_h;
    for i in 0..3 {
        for j in 0..3 {
            h[1 + i][1 + j] = rho * v[i] * v[j];
        }
        h[1 + i][1 + i] += p;
        h[1 + i][4] = v[i] * h_flux;
        h[4][1 + i] = v[i] * h_flux;
    }
    h[4][4] = p * vsq + p * (bsq + q.psi * q.psi) / rho
        + g * p * p / (rho * (g - 1.0) * (g - 1.0))
        + p * vsq / (g - 1.0)
        + 0.25 * rho * vsq * vsq;
    let p_rho = p / rho;
    for i in 0..3 {
        h[4][5 + i] = q.b[i] * p_rho;
        h[5 + i][4] = q.b[i] * p_rho;
        h[5 + i][5 + i] = p_rho;
    }
    h[4][8] = q.psi * p_rho;
    h[8][4] = q.psi * p_rho;
    h[8][8] = p_rho;
    h
}

/// Advective flux in the x direction, `f^a = f^Euler + f^MHD + f^GLM`.
pub fn advective_flux_x(q: &Primitive, params: &PhysParams) -> StateVec {
    let (mu0, ch) = (params.mu0, params.c_h);
    let bsq = norm2(q.b);
    let vdb = dot3(q.v, q.b);
    let e_flux = 0.5 * q.rho * norm2(q.v) + params.gamma * q.p / (params.gamma - 1.0);
    [
        q.rho * q.v[0],
        q.rho * q.v[0] * q.v[0] + q.p + (0.5 * bsq - q.b[0] * q.b[0]) / mu0,
        q.rho * q.v[0] * q.v[1] - q.b[0] * q.b[1] / mu0,
        q.rho * q.v[0] * q.v[2] - q.b[0] * q.b[2] / mu0,
        q.v[0] * e_flux + (q.v[0] * bsq - q.b[0] * vdb) / mu0 + ch * q.psi * q.b[0] / mu0,
        ch * q.psi,
        q.v[0] * q.b[1] - q.v[1] * q.b[0],
        q.v[0] * q.b[2] - q.v[2] * q.b[0],
        ch * q.b[0],
    ]
}

/// Swaps the x and y roles of a state-shaped vector (components 1<->2, 5<->6).
#[inline]
pub fn swap_xy(u: &StateVec) -> StateVec {
    [u[0], u[2], u[1], u[3], u[4], u[6], u[5], u[7], u[8]]
}

#[inline]
fn swap_prim_xy(q: &Primitive) -> Primitive {
    Primitive {
        rho: q.rho,
        v: [q.v[1], q.v[0], q.v[2]],
        p: q.p,
        b: [q.b[1], q.b[0], q.b[2]],
        psi: q.psi,
    }
}

/// Advective flux in direction `dir` (0 = x, 1 = y), by the x<->y symmetry of
/// the system.
pub fn advective_flux_dir(q: &Primitive, params: &PhysParams, dir: usize) -> StateVec {
    match dir {
        0 => advective_flux_x(q, params),
        1 => swap_xy(&advective_flux_x(&swap_prim_xy(q), params)),
        _ => unreachable!("direction out of range"),
    }
}

/// Advective block flux with one component per direction in use.
pub fn advective_block_flux(q: &Primitive, params: &PhysParams, dim: usize) -> BlockFlux {
    let mut f = [[0.0; NVARS]; 2];
    for d in 0..dim {
        f[d] = advective_flux_dir(q, params, d);
    }
    BlockFlux { f, dim }
}

/// Physical-space gradients of the quantities entering the viscous flux,
/// for one spatial direction: velocity, magnetic field, and p/rho.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrimGrad {
    pub dv: [f64; 3],
    pub db: [f64; 3],
    /// d(p/rho)/dx_d; the heat flux is kappa/R times this.
    pub d_pod: f64,
}

impl PrimGrad {
    /// Converts a gradient of the entropy variables into the primitive-space
    /// gradients needed by the viscous flux: with beta = -v5/2,
    /// dv_i = (g_{1+i} + v_i g_5)/(2 beta), dB_i = (g_{5+i} + B_i g_5)/(2 beta),
    /// d(p/rho) = g_5 / (4 beta^2).
    pub fn from_entropy_grad(q: &Primitive, g: &StateVec) -> Self {
        let beta = q.beta();
        let inv2b = 1.0 / (2.0 * beta);
        let g5 = g[4];
        Self {
            dv: [
                (g[1] + q.v[0] * g5) * inv2b,
                (g[2] + q.v[1] * g5) * inv2b,
                (g[3] + q.v[2] * g5) * inv2b,
            ],
            db: [
                (g[5] + q.b[0] * g5) * inv2b,
                (g[6] + q.b[1] * g5) * inv2b,
                (g[7] + q.b[2] * g5) * inv2b,
            ],
            d_pod: g5 / (4.0 * beta * beta),
        }
    }
}

/// Visco-resistive block flux. `grads[d]` holds the physical gradients in
/// direction d; directions beyond `dim` are treated as zero (the 1D flux is
/// the 2D flux with cross-direction gradients dropped).
pub fn viscous_block_flux(q: &Primitive, grads: &[PrimGrad], params: &PhysParams) -> BlockFlux {
    let dim = grads.len();
    debug_assert!((1..=2).contains(&dim));
    let mu = params.mu_ns;
    let eta_mu0 = params.eta / params.mu0;
    let kappa_r = params.kappa_over_r();
    let zero = PrimGrad::default();
    let gx = &grads[0];
    let gy = if dim > 1 { &grads[1] } else { &zero };

    // Stress tensor tau = mu (grad v + grad v^T) - (2/3) mu (div v) I,
    // with all z-derivatives zero.
    let div_v = gx.dv[0] + gy.dv[1];
    let tau_xx = 2.0 * mu * gx.dv[0] - (2.0 / 3.0) * mu * div_v;
    let tau_yy = 2.0 * mu * gy.dv[1] - (2.0 / 3.0) * mu * div_v;
    let tau_xy = mu * (gx.dv[1] + gy.dv[0]);
    let tau_xz = mu * gx.dv[2];
    let tau_yz = mu * gy.dv[2];

    // Resistive flux of B_l in direction d: eta/mu0 (dB_l/dx_d - dB_d/dx_l).
    let fb_x = [
        0.0,
        eta_mu0 * (gx.db[1] - gy.db[0]),
        eta_mu0 * gx.db[2],
    ];
    let fb_y = [
        eta_mu0 * (gy.db[0] - gx.db[1]),
        0.0,
        eta_mu0 * gy.db[2],
    ];

    let mut f = [[0.0; NVARS]; 2];
    f[0] = [
        0.0,
        tau_xx,
        tau_xy,
        tau_xz,
        tau_xx * q.v[0] + tau_xy * q.v[1] + tau_xz * q.v[2]
            + kappa_r * gx.d_pod
            + dot3(q.b, fb_x) / params.mu0,
        fb_x[0],
        fb_x[1],
        fb_x[2],
        0.0,
    ];
    if dim > 1 {
        f[1] = [
            0.0,
            tau_xy,
            tau_yy,
            tau_yz,
            tau_xy * q.v[0] + tau_yy * q.v[1] + tau_yz * q.v[2]
                + kappa_r * gy.d_pod
                + dot3(q.b, fb_y) / params.mu0,
            fb_y[0],
            fb_y[1],
            fb_y[2],
            0.0,
        ];
    }
    BlockFlux { f, dim }
}

/// Powell non-conservative vector `phi^MHD = (0, B/mu0, (v.B)/mu0, v, 0)`.
pub fn phi_mhd(q: &Primitive, params: &PhysParams) -> StateVec {
    let mu0 = params.mu0;
    [
        0.0,
        q.b[0] / mu0,
        q.b[1] / mu0,
        q.b[2] / mu0,
        dot3(q.v, q.b) / mu0,
        q.v[0],
        q.v[1],
        q.v[2],
        0.0,
    ]
}

/// GLM non-conservative vector for direction l:
/// `phi^GLM_l = mu0^-1 (0,0,0,0, v_l psi, 0,0,0, v_l)`.
pub fn phi_glm_dir(q: &Primitive, params: &PhysParams, dir: usize) -> StateVec {
    let vl = q.v[dir];
    let mut out = [0.0; NVARS];
    out[4] = vl * q.psi / params.mu0;
    out[8] = vl / params.mu0;
    out
}

/// GLM non-conservative block vector.
pub fn phi_glm(q: &Primitive, params: &PhysParams, dim: usize) -> BlockFlux {
    let mut f = [[0.0; NVARS]; 2];
    for d in 0..dim {
        f[d] = phi_glm_dir(q, params, d);
    }
    BlockFlux { f, dim }
}

/// theta = v^T phi^MHD = 2 beta (v.B).
pub fn theta(q: &Primitive) -> f64 {
    2.0 * q.beta() * dot3(q.v, q.b)
}

/// Entropy flux potential in direction d: Psi_d = v^T f_d^a - v_d S + theta B_d.
pub fn entropy_flux_potential(q: &Primitive, params: &PhysParams, dir: usize) -> f64 {
    let v = entropy_vars_prim(q, params);
    let f = advective_flux_dir(q, params, dir);
    let s = entropy_prim(q, params);
    let mut vf = 0.0;
    for k in 0..NVARS {
        vf += v.0[k] * f[k];
    }
    vf - q.v[dir] * s + theta(q) * q.b[dir]
}

/// Fast magnetosonic speed in unit direction `n`.
pub fn fast_magnetosonic_speed(q: &Primitive, n: [f64; 3], params: &PhysParams) -> f64 {
    let a2 = params.gamma * q.p / q.rho;
    let b2 = norm2(q.b) / (params.mu0 * q.rho);
    let bn = dot3(q.b, n);
    let bn2 = bn * bn / (params.mu0 * q.rho);
    let disc = ((a2 + b2) * (a2 + b2) - 4.0 * a2 * bn2).max(0.0);
    (0.5 * (a2 + b2 + disc.sqrt())).sqrt()
}

/// Largest advective wave speed `|v.n| + c_f(n)` for a unit direction `n`.
pub fn max_wavespeed(q: &Primitive, n: [f64; 3], params: &PhysParams) -> f64 {
    dot3(q.v, n).abs() + fast_magnetosonic_speed(q, n, params)
}
