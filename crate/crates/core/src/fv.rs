//! Native LGL subcell finite-volume residual (first-order and TVD-ES
//! reconstructed) and the convex blend with the DG residual.
//!
//! The FV operator shares the element-boundary flux and diamond terms with
//! the DG operator, so both are of the blendable form: boundary rows receive
//! exactly the face data, interior rows the subcell flux differences.

use crate::field::{face_node_index, face_nodes, FaceData, NodeCache};
use crate::fluxes::{
    diamond_noncons, ec_flux_metric, lower_times, lower_transpose_times, DissipationContext,
    TwoPointFluxKind,
};
use crate::mesh::Mesh;
use crate::numerics::{minmod, SpectralOps};
use crate::physics::{EntropyVars, PhysParams, Primitive, StateVec, NVARS};

/// Boundary-subcell slope treatment of the TVD reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReconstructionKind {
    /// Piece-wise constant subcells (first-order dissipation).
    None,
    /// No reconstruction on the element-boundary subcells.
    #[default]
    TvdNoBoundary,
    /// Central slope on the boundary subcells.
    TvdCentralBoundary,
    /// minmod slope using the neighbor element's face value.
    /// The second slope argument spans two subcells over one node gap, as
    /// printed in the source formulation; an unusual but harmless stencil
    /// since minmod caps the magnitude by the interior slope.
    TvdNeighborBoundary,
}

#[inline]
fn axpy(acc: &mut StateVec, c: f64, v: &StateVec) {
    for k in 0..NVARS {
        acc[k] += c * v[k];
    }
}

/// Reconstructed jumps of the scaled entropy variables for the interior
/// subcell interfaces of one line of nodes.
///
/// For interface (j, j+1) the scaled variables are w = L^T v with that
/// interface's Cholesky factor, the subcell slopes come from the two-point
/// symmetric minmod limiter in reference space, and
/// `[[w]]^R = (w_{j+1} + (xi_b - xi_{j+1}) Th_{j+1}) - (w_j + (xi_b - xi_j) Th_j)`.
/// The result keeps the componentwise sign of the unreconstructed jump.
#[allow(clippy::too_many_arguments)]
pub fn reconstruct_scaled_jumps(
    line_v: &[&EntropyVars],
    nbr_left_v: Option<&EntropyVars>,
    nbr_right_v: Option<&EntropyVars>,
    contexts: &[DissipationContext],
    ops: &SpectralOps,
    kind: ReconstructionKind,
    out: &mut [[f64; NVARS]],
) {
    let n = ops.n;
    let xi = &ops.nodes;
    for ifc in 0..n {
        let ctx = &contexts[ifc];
        let scale = |v: &EntropyVars| lower_transpose_times(&ctx.chol_l, &v.0);
        let w_j = scale(line_v[ifc]);
        let w_jp = scale(line_v[ifc + 1]);

        if kind == ReconstructionKind::None {
            for c in 0..NVARS {
                out[ifc][c] = w_jp[c] - w_j[c];
            }
            continue;
        }

        // Slope of subcell m in this interface's w space.
        let slope = |m: usize, w_m: &[f64; NVARS]| -> [f64; NVARS] {
            let mut th = [0.0; NVARS];
            if m == 0 {
                match kind {
                    ReconstructionKind::TvdNoBoundary | ReconstructionKind::None => {}
                    ReconstructionKind::TvdCentralBoundary => {
                        let w1 = scale(line_v[1]);
                        let dx = xi[1] - xi[0];
                        for c in 0..NVARS {
                            th[c] = (w1[c] - w_m[c]) / dx;
                        }
                    }
                    ReconstructionKind::TvdNeighborBoundary => {
                        let w1 = scale(line_v[1]);
                        let dx = xi[1] - xi[0];
                        if let Some(nbr) = nbr_left_v {
                            let wn = scale(nbr);
                            for c in 0..NVARS {
                                th[c] =
                                    minmod((w1[c] - w_m[c]) / dx, (w1[c] - wn[c]) / dx);
                            }
                        }
                    }
                }
            } else if m == n {
                match kind {
                    ReconstructionKind::TvdNoBoundary | ReconstructionKind::None => {}
                    ReconstructionKind::TvdCentralBoundary => {
                        let wm1 = scale(line_v[n - 1]);
                        let dx = xi[n] - xi[n - 1];
                        for c in 0..NVARS {
                            th[c] = (w_m[c] - wm1[c]) / dx;
                        }
                    }
                    ReconstructionKind::TvdNeighborBoundary => {
                        let wm1 = scale(line_v[n - 1]);
                        let dx = xi[n] - xi[n - 1];
                        if let Some(nbr) = nbr_right_v {
                            let w0 = scale(nbr);
                            for c in 0..NVARS {
                                th[c] =
                                    minmod((w_m[c] - wm1[c]) / dx, (w0[c] - wm1[c]) / dx);
                            }
                        }
                    }
                }
            } else {
                let wp = scale(line_v[m + 1]);
                let wm = scale(line_v[m - 1]);
                let dxp = xi[m + 1] - xi[m];
                let dxm = xi[m] - xi[m - 1];
                for c in 0..NVARS {
                    th[c] = minmod((wp[c] - w_m[c]) / dxp, (w_m[c] - wm[c]) / dxm);
                }
            }
            th
        };

        let th_j = slope(ifc, &w_j);
        let th_jp = slope(ifc + 1, &w_jp);
        let xi_b = ops.subcell_bounds[ifc + 1];
        for c in 0..NVARS {
            let left = w_j[c] + (xi_b - xi[ifc]) * th_j[c];
            let right = w_jp[c] + (xi_b - xi[ifc + 1]) * th_jp[c];
            out[ifc][c] = right - left;
            debug_assert!(
                out[ifc][c] * (w_jp[c] - w_j[c]) >= -1e-14 * (w_jp[c] - w_j[c]).powi(2).max(1e-30),
                "sign property violated at component {c}"
            );
        }
    }
}

/// Native LGL subcell FV residual of the advective + non-conservative terms
/// for one element (same output convention as the DG operator).
#[allow(clippy::too_many_arguments)]
pub fn fv_advective_rhs(
    mesh: &Mesh,
    ops: &SpectralOps,
    e: usize,
    cache: &NodeCache,
    params: &PhysParams,
    fv_kind: TwoPointFluxKind,
    recon: ReconstructionKind,
    faces: &FaceData,
    exterior: &[Vec<(Primitive, EntropyVars)>],
    out: &mut [StateVec],
) {
    let nn1 = ops.nn();
    let geom = &mesh.elements[e];
    let base = e * mesh.nn();
    let nfn = face_nodes(mesh);
    for o in out.iter_mut() {
        *o = [0.0; NVARS];
    }

    let mut contexts: Vec<DissipationContext> = Vec::with_capacity(nn1 - 1);
    let mut jumps = vec![[0.0; NVARS]; nn1.max(2) - 1];
    let mut line_v: Vec<&EntropyVars> = Vec::with_capacity(nn1);
    let mut line_prim: Vec<&Primitive> = Vec::with_capacity(nn1);

    for dir in 0..mesh.dim {
        let nlines = if mesh.dim == 1 { 1 } else { nn1 };
        let (fw, fe_) = if dir == 0 {
            (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
        } else {
            (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
        };
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
            let k = if mesh.dim == 1 { 0 } else { line };

            line_v.clear();
            line_prim.clear();
            for i in 0..nn1 {
                line_v.push(&cache.entro[base + node_at(i)]);
                line_prim.push(&cache.prim[base + node_at(i)]);
            }

            // Interior subcell interfaces.
            let needs_ctx = fv_kind != TwoPointFluxKind::Ec;
            contexts.clear();
            if needs_ctx {
                for ifc in 0..ops.n {
                    let ntilde = geom.subcell_n[dir][ifc + 1 + (nn1 + 1) * line];
                    let norm = (ntilde[0] * ntilde[0] + ntilde[1] * ntilde[1]).sqrt();
                    let nhat = [ntilde[0] / norm, ntilde[1] / norm, 0.0];
                    contexts.push(DissipationContext::new(
                        line_prim[ifc],
                        line_prim[ifc + 1],
                        nhat,
                        params,
                    ));
                }
            }
            if fv_kind == TwoPointFluxKind::TvdEs {
                // Neighbor boundary values, scaled per interface inside the
                // reconstruction; exterior states supply them on physical
                // boundaries.
                let nbr_of = |fid: usize, side: usize| -> Option<&EntropyVars> {
                    let face = mesh.faces[fid];
                    let other = if side == 0 { face.left } else { face.right };
                    match other {
                        Some(oe) => {
                            Some(&cache.entro[oe * mesh.nn() + face_node_index(mesh, dir, side ^ 1, k)])
                        }
                        None => exterior[fid].get(k).map(|(_, v)| v),
                    }
                };
                let nbr_l = nbr_of(fw, 0);
                let nbr_r = nbr_of(fe_, 1);
                reconstruct_scaled_jumps(
                    &line_v, nbr_l, nbr_r, &contexts, ops, recon, &mut jumps,
                );
            }

            for ifc in 0..ops.n {
                let ntilde = geom.subcell_n[dir][ifc + 1 + (nn1 + 1) * line];
                let (pl, pr) = (line_prim[ifc], line_prim[ifc + 1]);
                let mut flux = ec_flux_metric(pl, pr, ntilde, params);
                match fv_kind {
                    TwoPointFluxKind::Ec => {}
                    TwoPointFluxKind::EsRusanov => {
                        let ctx = &contexts[ifc];
                        let norm =
                            (ntilde[0] * ntilde[0] + ntilde[1] * ntilde[1]).sqrt();
                        let mut jump = [0.0; NVARS];
                        for c in 0..NVARS {
                            jump[c] = line_v[ifc + 1].0[c] - line_v[ifc].0[c];
                        }
                        for r in 0..NVARS {
                            let mut acc = 0.0;
                            for c in 0..NVARS {
                                acc += ctx.hbar[r][c] * jump[c];
                            }
                            flux[r] -= 0.5 * norm * ctx.lambda_max * acc;
                        }
                    }
                    TwoPointFluxKind::TvdEs => {
                        let ctx = &contexts[ifc];
                        let norm =
                            (ntilde[0] * ntilde[0] + ntilde[1] * ntilde[1]).sqrt();
                        let ldw = lower_times(&ctx.chol_l, &jumps[ifc]);
                        for c in 0..NVARS {
                            flux[c] -= 0.5 * norm * ctx.lambda_max * ldw[c];
                        }
                    }
                }
                let dia_lr = diamond_noncons(pl, pr, ntilde, ntilde, params);
                let dia_rl = diamond_noncons(pr, pl, ntilde, ntilde, params);
                let nl = node_at(ifc);
                let nr = node_at(ifc + 1);
                axpy(&mut out[nl], -w_other, &flux);
                axpy(&mut out[nl], -w_other, &dia_lr);
                axpy(&mut out[nr], w_other, &flux);
                axpy(&mut out[nr], w_other, &dia_rl);
            }

            // Element-boundary rows: exactly the shared face terms.
            let off_w = fw * nfn + k;
            let off_e = fe_ * nfn + k;
            let n0 = node_at(0);
            let nn_ = node_at(ops.n);
            axpy(&mut out[n0], w_other, &faces.flux[off_w]);
            axpy(&mut out[n0], w_other, &faces.dia_right[off_w]);
            axpy(&mut out[nn_], -w_other, &faces.flux[off_e]);
            axpy(&mut out[nn_], -w_other, &faces.dia_left[off_e]);
        }
    }
}

/// Convex blend of the advective residuals plus the viscous residual at full
/// weight: `F = (1 - alpha) F_dg + alpha F_fv + F_visc`.
pub fn blend_rhs(
    f_dg: &[StateVec],
    f_fv: &[StateVec],
    f_visc: Option<&[StateVec]>,
    alpha: f64,
    out: &mut [StateVec],
) {
    debug_assert!((0.0..=1.0).contains(&alpha));
    for (i, o) in out.iter_mut().enumerate() {
        for k in 0..NVARS {
            o[k] = (1.0 - alpha) * f_dg[i][k] + alpha * f_fv[i][k];
        }
        if let Some(v) = f_visc {
            for k in 0..NVARS {
                o[k] += v[i][k];
            }
        }
    }
}
