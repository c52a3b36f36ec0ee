//! Element-local split-form DGSEM residual for the advective and
//! non-conservative terms, and the BR1 discretization of the visco-resistive
//! terms.
//!
//! Residuals are assembled in the form `J w_ij du/dt = F_ij`: every kernel
//! returns the bracket F including the cross-direction quadrature weights.

use crate::field::{face_nodes, FaceData, NodeCache};
use crate::fluxes::{
    advective_flux_metric, ec_flux_metric, phi_total_metric, volume_noncons, DissipationContext,
    TwoPointFluxKind,
};
use crate::mesh::Mesh;
use crate::physics::{viscous_block_flux, PhysParams, PrimGrad, StateVec, NVARS};

pub const MAX_NODES: usize = 16;

#[inline]
fn axpy(acc: &mut StateVec, c: f64, v: &StateVec) {
    for k in 0..NVARS {
        acc[k] += c * v[k];
    }
}

/// Volume two-point flux contracted with the averaged metric. The ES variant
/// uses the ordered jump v(m) - v(i) of the pair as passed.
fn volume_flux(
    kind: TwoPointFluxKind,
    cache: &NodeCache,
    gi: usize,
    gm: usize,
    navg: [f64; 2],
    params: &PhysParams,
) -> StateVec {
    let (pi, pm) = (&cache.prim[gi], &cache.prim[gm]);
    match kind {
        TwoPointFluxKind::Ec => ec_flux_metric(pi, pm, navg, params),
        _ => {
            let norm = (navg[0] * navg[0] + navg[1] * navg[1]).sqrt();
            if norm == 0.0 {
                return [0.0; NVARS];
            }
            let mut jump = [0.0; NVARS];
            for k in 0..NVARS {
                jump[k] = cache.entro[gm].0[k] - cache.entro[gi].0[k];
            }
            let mut f = ec_flux_metric(pi, pm, navg, params);
            let nhat = [navg[0] / norm, navg[1] / norm, 0.0];
            let ctx = DissipationContext::new(pi, pm, nhat, params);
            let mut hdv = [0.0; NVARS];
            for r in 0..NVARS {
                let mut acc = 0.0;
                for c in 0..NVARS {
                    acc += ctx.hbar[r][c] * jump[c];
                }
                hdv[r] = acc;
            }
            for k in 0..NVARS {
                f[k] -= 0.5 * norm * ctx.lambda_max * hdv[k];
            }
            f
        }
    }
}

/// Split-form DGSEM residual of the advective + non-conservative terms for
/// one element. `out` receives F (length nn), with J w u_t = F.
#[allow(clippy::too_many_arguments)]
pub fn dg_advective_rhs(
    mesh: &Mesh,
    ops: &crate::numerics::SpectralOps,
    e: usize,
    cache: &NodeCache,
    params: &PhysParams,
    volume_kind: TwoPointFluxKind,
    faces: &FaceData,
    out: &mut [StateVec],
) {
    let nn1 = ops.nn();
    let geom = &mesh.elements[e];
    let base = e * mesh.nn();
    let nfn = face_nodes(mesh);
    for o in out.iter_mut() {
        *o = [0.0; NVARS];
    }

    for dir in 0..mesh.dim {
        let nlines = if mesh.dim == 1 { 1 } else { nn1 };
        for line in 0..nlines {
            // Node index along the line.
            let node_at = |i: usize| -> usize {
                if mesh.dim == 1 {
                    i
                } else if dir == 0 {
                    i + nn1 * line
                } else {
                    line + nn1 * i
                }
            };
            let w_other = if mesh.dim == 1 { 1.0 } else { ops.weights[line] };

            let mut acc = [[0.0; NVARS]; MAX_NODES];

            for i in 0..nn1 {
                let ni = node_at(i);
                let gi = base + ni;
                let ja_i = geom.ja[dir][ni];
                for m in i..nn1 {
                    let nm = node_at(m);
                    let gm = base + nm;
                    let ja_m = geom.ja[dir][nm];
                    let navg = [0.5 * (ja_i[0] + ja_m[0]), 0.5 * (ja_i[1] + ja_m[1])];
                    let fstar = volume_flux(volume_kind, cache, gi, gm, navg, params);
                    let qim = ops.q_at(i, m);
                    if m == i {
                        let vol = volume_noncons(
                            &cache.prim[gi],
                            cache.prim[gi].b,
                            cache.prim[gi].psi,
                            ja_i,
                            navg,
                            params,
                        );
                        axpy(&mut acc[i], -2.0 * qim, &fstar);
                        axpy(&mut acc[i], -qim, &vol);
                    } else {
                        let qmi = ops.q_at(m, i);
                        axpy(&mut acc[i], -2.0 * qim, &fstar);
                        axpy(&mut acc[m], -2.0 * qmi, &fstar);
                        let vol_im = volume_noncons(
                            &cache.prim[gi],
                            cache.prim[gm].b,
                            cache.prim[gm].psi,
                            ja_i,
                            navg,
                            params,
                        );
                        let vol_mi = volume_noncons(
                            &cache.prim[gm],
                            cache.prim[gi].b,
                            cache.prim[gi].psi,
                            ja_m,
                            navg,
                            params,
                        );
                        axpy(&mut acc[i], -qim, &vol_im);
                        axpy(&mut acc[m], -qmi, &vol_mi);
                    }
                }
            }

            // Strong-form boundary correction: -(f + Phi).Ja at node 0,
            // +(f + Phi).Ja at node N.
            for (i, sign) in [(0usize, -1.0), (ops.n, 1.0)] {
                let ni = node_at(i);
                let gi = base + ni;
                let ja = geom.ja[dir][ni];
                let f = advective_flux_metric(&cache.prim[gi], ja, params);
                let phi = phi_total_metric(&cache.prim[gi], ja, params);
                axpy(&mut acc[i], sign, &f);
                axpy(&mut acc[i], sign, &phi);
            }

            // Shared surface fluxes and diamond terms.
            let (fw, fe_) = if dir == 0 {
                (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
            } else {
                (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
            };
            let k = if mesh.dim == 1 { 0 } else { line };
            let off_w = fw * nfn + k;
            let off_e = fe_ * nfn + k;
            axpy(&mut acc[0], 1.0, &faces.flux[off_w]);
            axpy(&mut acc[0], 1.0, &faces.dia_right[off_w]);
            axpy(&mut acc[ops.n], -1.0, &faces.flux[off_e]);
            axpy(&mut acc[ops.n], -1.0, &faces.dia_left[off_e]);

            for i in 0..nn1 {
                axpy(&mut out[node_at(i)], w_other, &acc[i]);
            }
        }
    }
}

/// BR1 discrete gradients of the entropy variables, in physical coordinates.
/// Writes the element's span of the global per-direction buffers.
#[allow(clippy::too_many_arguments)]
pub fn br1_gradients(
    mesh: &Mesh,
    ops: &crate::numerics::SpectralOps,
    e: usize,
    cache: &NodeCache,
    faces: &FaceData,
    grads: &mut [Vec<StateVec>; 2],
) {
    let nn1 = ops.nn();
    let geom = &mesh.elements[e];
    let base = e * mesh.nn();
    let nfn = face_nodes(mesh);

    for d in 0..mesh.dim {
        for g in grads[d][base..base + mesh.nn()].iter_mut() {
            *g = [0.0; NVARS];
        }
    }

    for dir in 0..mesh.dim {
        let nlines = if mesh.dim == 1 { 1 } else { nn1 };
        for line in 0..nlines {
            let node_at = |i: usize| -> usize {
                if mesh.dim == 1 {
                    i
                } else if dir == 0 {
                    i + nn1 * line
                } else {
                    line + nn1 * i
                }
            };
            let w_other = if mesh.dim == 1 { 1.0 } else { ops.weights[line] };
            let (fw, fe_) = if dir == 0 {
                (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
            } else {
                (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
            };
            let k = if mesh.dim == 1 { 0 } else { line };

            for d in 0..mesh.dim {
                // Volume part: sum_m Q_im (Ja^dir_d v)_m.
                for i in 0..nn1 {
                    let ni = node_at(i);
                    let mut acc = [0.0; NVARS];
                    for m in 0..nn1 {
                        let nm = node_at(m);
                        let jam = geom.ja[dir][nm][d];
                        let q = ops.q_at(i, m);
                        for c in 0..NVARS {
                            acc[c] += q * jam * cache.entro[base + nm].0[c];
                        }
                    }
                    axpy(&mut grads[d][base + ni], w_other, &acc);
                }
                // Surface corrections with the BR1 central average.
                let n0 = node_at(0);
                let nn_ = node_at(ops.n);
                let ja0 = geom.ja[dir][n0][d];
                let jan = geom.ja[dir][nn_][d];
                let vavg_w = &faces.v_avg[fw * nfn + k];
                let vavg_e = &faces.v_avg[fe_ * nfn + k];
                for c in 0..NVARS {
                    grads[d][base + n0][c] -=
                        w_other * ja0 * (vavg_w[c] - cache.entro[base + n0].0[c]);
                    grads[d][base + nn_][c] +=
                        w_other * jan * (vavg_e[c] - cache.entro[base + nn_].0[c]);
                }
            }
        }
    }

    // Divide by J w_i w_j.
    for j in 0..(if mesh.dim == 1 { 1 } else { nn1 }) {
        for i in 0..nn1 {
            let node = if mesh.dim == 1 { i } else { i + nn1 * j };
            let wq = if mesh.dim == 1 {
                ops.weights[i]
            } else {
                ops.weights[i] * ops.weights[j]
            };
            let scale = 1.0 / (geom.jac[node] * wq);
            for d in 0..mesh.dim {
                for c in 0..NVARS {
                    grads[d][base + node][c] *= scale;
                }
            }
        }
    }
}

/// Nodal visco-resistive block fluxes from the entropy-variable gradients.
pub fn nodal_viscous_fluxes(
    mesh: &Mesh,
    e: usize,
    cache: &NodeCache,
    grads: &[Vec<StateVec>; 2],
    params: &PhysParams,
    out: &mut [[StateVec; 2]],
) {
    let base = e * mesh.nn();
    for node in 0..mesh.nn() {
        let q = &cache.prim[base + node];
        let mut pg = [PrimGrad::default(); 2];
        for (d, pgd) in pg.iter_mut().enumerate().take(mesh.dim) {
            *pgd = PrimGrad::from_entropy_grad(q, &grads[d][base + node]);
        }
        let bf = viscous_block_flux(q, &pg[..mesh.dim], params);
        out[base + node] = bf.f;
    }
}

/// Standard weak-form DGSEM divergence of the viscous fluxes with BR1 surface
/// averages; adds `+div(f_nu)` terms into `out` (full weight, independent of
/// the blending coefficient).
#[allow(clippy::too_many_arguments)]
pub fn dg_viscous_rhs(
    mesh: &Mesh,
    ops: &crate::numerics::SpectralOps,
    e: usize,
    visc_block: &[[StateVec; 2]],
    faces: &FaceData,
    out: &mut [StateVec],
) {
    let nn1 = ops.nn();
    let geom = &mesh.elements[e];
    let base = e * mesh.nn();
    let nfn = face_nodes(mesh);

    for dir in 0..mesh.dim {
        let nlines = if mesh.dim == 1 { 1 } else { nn1 };
        for line in 0..nlines {
            let node_at = |i: usize| -> usize {
                if mesh.dim == 1 {
                    i
                } else if dir == 0 {
                    i + nn1 * line
                } else {
                    line + nn1 * i
                }
            };
            let w_other = if mesh.dim == 1 { 1.0 } else { ops.weights[line] };
            let contravariant = |i: usize| -> StateVec {
                let ni = node_at(i);
                let ja = geom.ja[dir][ni];
                let bf = &visc_block[base + ni];
                let mut f = [0.0; NVARS];
                for c in 0..NVARS {
                    f[c] = ja[0] * bf[0][c] + ja[1] * bf[1][c];
                }
                f
            };

            let mut acc = [[0.0; NVARS]; MAX_NODES];
            for i in 0..nn1 {
                for m in 0..nn1 {
                    let fm = contravariant(m);
                    axpy(&mut acc[i], ops.q_at(i, m), &fm);
                }
            }
            let (fw, fe_) = if dir == 0 {
                (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
            } else {
                (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
            };
            let k = if mesh.dim == 1 { 0 } else { line };
            let f0 = contravariant(0);
            let fn_ = contravariant(ops.n);
            let fhat_w = &faces.visc[fw * nfn + k];
            let fhat_e = &faces.visc[fe_ * nfn + k];
            for c in 0..NVARS {
                acc[ops.n][c] += fhat_e[c] - fn_[c];
                acc[0][c] -= fhat_w[c] - f0[c];
            }
            for i in 0..nn1 {
                axpy(&mut out[node_at(i)], w_other, &acc[i]);
            }
        }
    }
}
