//! Full right-hand-side assembly: shared face sweep, per-element DG and FV
//! residuals, viscous terms, and element-local blending.
//!
//! Interface fluxes are computed once per face and scattered to both sides.
//! All loops write disjoint, index-addressed storage, so the evaluation order
//! never affects the result.

use crate::error::PhysicsError;
use crate::field::{face_node_index, face_nodes, FaceData, NodeCache, Solution};
use crate::fluxes::{diamond_noncons, surface_flux_metric, TwoPointFluxKind};
use crate::fv::{blend_rhs, fv_advective_rhs, ReconstructionKind};
use crate::mesh::Mesh;
use crate::numerics::SpectralOps;
use crate::physics::{
    entropy_vars_prim, EntropyVars, PhysParams, Primitive, StateVec, NVARS,
};

/// Selected two-point flux functions for the three roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FluxSet {
    pub volume: TwoPointFluxKind,
    pub surface: TwoPointFluxKind,
    pub fv_interior: TwoPointFluxKind,
    pub recon: ReconstructionKind,
}

impl Default for FluxSet {
    fn default() -> Self {
        Self {
            volume: TwoPointFluxKind::Ec,
            surface: TwoPointFluxKind::EsRusanov,
            fv_interior: TwoPointFluxKind::TvdEs,
            recon: ReconstructionKind::TvdNoBoundary,
        }
    }
}

pub struct RhsAssembler {
    pub mesh: Mesh,
    pub ops: SpectralOps,
    pub fluxset: FluxSet,
    pub viscous: bool,
    cache: NodeCache,
    faces: FaceData,
    grads: [Vec<StateVec>; 2],
    visc_block: Vec<[StateVec; 2]>,
    /// Exterior (Dirichlet) data per face node; empty vec for interior faces.
    pub exterior: Vec<Vec<(Primitive, EntropyVars)>>,
    buf_dg: Vec<StateVec>,
    buf_fv: Vec<StateVec>,
    buf_visc: Vec<StateVec>,
}

impl RhsAssembler {
    pub fn new(mesh: Mesh, ops: SpectralOps, fluxset: FluxSet, viscous: bool) -> Self {
        let n_nodes = mesh.nelem() * mesh.nn();
        let nn = mesh.nn();
        let cache = NodeCache::new(&mesh);
        let faces = FaceData::new(&mesh, viscous);
        let nfaces = mesh.faces.len();
        Self {
            cache,
            faces,
            grads: [vec![[0.0; NVARS]; n_nodes], vec![[0.0; NVARS]; n_nodes]],
            visc_block: if viscous { vec![[[0.0; NVARS]; 2]; n_nodes] } else { Vec::new() },
            exterior: vec![Vec::new(); nfaces],
            buf_dg: vec![[0.0; NVARS]; nn],
            buf_fv: vec![[0.0; NVARS]; nn],
            buf_visc: vec![[0.0; NVARS]; nn],
            mesh,
            ops,
            fluxset,
            viscous,
        }
    }

    /// Prescribes exterior states on all physical-boundary faces from a
    /// function of the physical coordinates (weak Dirichlet data).
    pub fn set_dirichlet<F>(&mut self, params: &PhysParams, exterior_state: F)
    where
        F: Fn([f64; 2]) -> Primitive,
    {
        let nfn = face_nodes(&self.mesh);
        for (fid, face) in self.mesh.faces.iter().enumerate() {
            if face.left.is_some() && face.right.is_some() {
                continue;
            }
            let (e, side) = match (face.left, face.right) {
                (Some(e), None) => (e, 0),
                (None, Some(e)) => (e, 1),
                _ => continue,
            };
            let mut data = Vec::with_capacity(nfn);
            for k in 0..nfn {
                let node = face_node_index(&self.mesh, face.dir, side, k);
                let xy = self.mesh.elements[e].coords[node];
                let prim = exterior_state(xy);
                let v = entropy_vars_prim(&prim, params);
                data.push((prim, v));
            }
            self.exterior[fid] = data;
        }
    }

    /// Primitive cache of the most recent evaluation (for diagnostics).
    pub fn cache(&self) -> &NodeCache {
        &self.cache
    }

    /// Face data of the most recent evaluation.
    pub fn faces(&self) -> &FaceData {
        &self.faces
    }

    /// BR1 entropy-variable gradients of the most recent viscous evaluation.
    pub fn gradients(&self) -> &[Vec<StateVec>; 2] {
        &self.grads
    }

    /// Refreshes the cache and the advective face data without assembling
    /// residuals (used by verification suites to inspect the operators).
    pub fn prepare(
        &mut self,
        sol: &Solution,
        params: &PhysParams,
    ) -> Result<(), (usize, PhysicsError)> {
        self.cache.update(sol, params)?;
        self.advective_face_sweep(params);
        Ok(())
    }

    /// Assembles the raw DG advective residual F of one element (J w u_t = F).
    /// Requires `prepare` (or `evaluate`) to have run on the same solution.
    pub fn dg_residual(&self, e: usize, params: &PhysParams, out: &mut [StateVec]) {
        crate::dg::dg_advective_rhs(
            &self.mesh,
            &self.ops,
            e,
            &self.cache,
            params,
            self.fluxset.volume,
            &self.faces,
            out,
        );
    }

    /// Assembles the raw FV advective residual F of one element.
    pub fn fv_residual(&self, e: usize, params: &PhysParams, out: &mut [StateVec]) {
        fv_advective_rhs(
            &self.mesh,
            &self.ops,
            e,
            &self.cache,
            params,
            self.fluxset.fv_interior,
            self.fluxset.recon,
            &self.faces,
            &self.exterior,
            out,
        );
    }

    fn face_metric(&self, fid: usize, k: usize) -> [f64; 2] {
        let face = self.mesh.faces[fid];
        match face.left {
            Some(e) => {
                let node = face_node_index(&self.mesh, face.dir, 0, k);
                self.mesh.elements[e].ja[face.dir][node]
            }
            None => {
                let e = face.right.expect("face with no element");
                let node = face_node_index(&self.mesh, face.dir, 1, k);
                self.mesh.elements[e].ja[face.dir][node]
            }
        }
    }

    /// Resolves the primitives of both sides of a face node.
    fn face_states(&self, fid: usize, k: usize) -> (Primitive, Primitive) {
        let face = self.mesh.faces[fid];
        let nn = self.mesh.nn();
        let left = match face.left {
            Some(e) => self.cache.prim[e * nn + face_node_index(&self.mesh, face.dir, 0, k)],
            None => self.exterior[fid][k].0,
        };
        let right = match face.right {
            Some(e) => self.cache.prim[e * nn + face_node_index(&self.mesh, face.dir, 1, k)],
            None => self.exterior[fid][k].0,
        };
        (left, right)
    }

    fn advective_face_sweep(&mut self, params: &PhysParams) {
        let nfn = face_nodes(&self.mesh);
        for fid in 0..self.mesh.faces.len() {
            for k in 0..nfn {
                let ntilde = self.face_metric(fid, k);
                let (pl, pr) = self.face_states(fid, k);
                let off = fid * nfn + k;
                self.faces.flux[off] =
                    surface_flux_metric(self.fluxset.surface, &pl, &pr, ntilde, params);
                self.faces.dia_left[off] = diamond_noncons(&pl, &pr, ntilde, ntilde, params);
                self.faces.dia_right[off] = diamond_noncons(&pr, &pl, ntilde, ntilde, params);
            }
        }
    }

    fn viscous_face_averages(&mut self) {
        let nfn = face_nodes(&self.mesh);
        let nn = self.mesh.nn();
        for fid in 0..self.mesh.faces.len() {
            let face = self.mesh.faces[fid];
            for k in 0..nfn {
                let off = fid * nfn + k;
                let vl = match face.left {
                    Some(e) => {
                        self.cache.entro[e * nn + face_node_index(&self.mesh, face.dir, 0, k)].0
                    }
                    None => self.exterior[fid][k].1 .0,
                };
                let vr = match face.right {
                    Some(e) => {
                        self.cache.entro[e * nn + face_node_index(&self.mesh, face.dir, 1, k)].0
                    }
                    None => self.exterior[fid][k].1 .0,
                };
                for c in 0..NVARS {
                    self.faces.v_avg[off][c] = 0.5 * (vl[c] + vr[c]);
                }
            }
        }
    }

    fn viscous_face_fluxes(&mut self) {
        let nfn = face_nodes(&self.mesh);
        let nn = self.mesh.nn();
        for fid in 0..self.mesh.faces.len() {
            let face = self.mesh.faces[fid];
            for k in 0..nfn {
                let off = fid * nfn + k;
                let ntilde = self.face_metric(fid, k);
                let side_flux = |e: usize, side: usize| -> StateVec {
                    let node = face_node_index(&self.mesh, face.dir, side, k);
                    let bf = &self.visc_block[e * nn + node];
                    let mut f = [0.0; NVARS];
                    for c in 0..NVARS {
                        f[c] = ntilde[0] * bf[0][c] + ntilde[1] * bf[1][c];
                    }
                    f
                };
                // BR1 average; one-sided on physical boundaries.
                let f = match (face.left, face.right) {
                    (Some(l), Some(r)) => {
                        let fl = side_flux(l, 0);
                        let fr = side_flux(r, 1);
                        let mut f = [0.0; NVARS];
                        for c in 0..NVARS {
                            f[c] = 0.5 * (fl[c] + fr[c]);
                        }
                        f
                    }
                    (Some(l), None) => side_flux(l, 0),
                    (None, Some(r)) => side_flux(r, 1),
                    (None, None) => [0.0; NVARS],
                };
                self.faces.visc[off] = f;
            }
        }
    }

    /// Evaluates du/dt for the current solution and per-element blending
    /// coefficients. On an inadmissible state, reports the element.
    pub fn evaluate(
        &mut self,
        sol: &Solution,
        params: &PhysParams,
        alphas: &[f64],
        out: &mut [StateVec],
    ) -> Result<(), (usize, PhysicsError)> {
        self.cache.update(sol, params)?;
        let run_viscous = self.viscous && !params.is_inviscid();

        if run_viscous {
            self.viscous_face_averages();
            for e in 0..self.mesh.nelem() {
                crate::dg::br1_gradients(
                    &self.mesh,
                    &self.ops,
                    e,
                    &self.cache,
                    &self.faces,
                    &mut self.grads,
                );
            }
            for e in 0..self.mesh.nelem() {
                crate::dg::nodal_viscous_fluxes(
                    &self.mesh,
                    e,
                    &self.cache,
                    &self.grads,
                    params,
                    &mut self.visc_block,
                );
            }
            self.viscous_face_fluxes();
        }

        self.advective_face_sweep(params);

        let nn = self.mesh.nn();
        let nn1 = self.ops.nn();
        for e in 0..self.mesh.nelem() {
            let alpha = alphas[e];
            crate::dg::dg_advective_rhs(
                &self.mesh,
                &self.ops,
                e,
                &self.cache,
                params,
                self.fluxset.volume,
                &self.faces,
                &mut self.buf_dg,
            );
            if alpha > 0.0 {
                fv_advective_rhs(
                    &self.mesh,
                    &self.ops,
                    e,
                    &self.cache,
                    params,
                    self.fluxset.fv_interior,
                    self.fluxset.recon,
                    &self.faces,
                    &self.exterior,
                    &mut self.buf_fv,
                );
            } else {
                for b in self.buf_fv.iter_mut() {
                    *b = [0.0; NVARS];
                }
            }
            let visc = if run_viscous {
                for b in self.buf_visc.iter_mut() {
                    *b = [0.0; NVARS];
                }
                crate::dg::dg_viscous_rhs(
                    &self.mesh,
                    &self.ops,
                    e,
                    &self.visc_block,
                    &self.faces,
                    &mut self.buf_visc,
                );
                Some(self.buf_visc.as_slice())
            } else {
                None
            };
            blend_rhs(&self.buf_dg, &self.buf_fv, visc, alpha, &mut out[e * nn..(e + 1) * nn]);

            // Convert F to du/dt.
            let geom = &self.mesh.elements[e];
            if self.mesh.dim == 1 {
                for i in 0..nn1 {
                    let scale = 1.0 / (geom.jac[i] * self.ops.weights[i]);
                    for c in 0..NVARS {
                        out[e * nn + i][c] *= scale;
                    }
                }
            } else {
                for j in 0..nn1 {
                    for i in 0..nn1 {
                        let node = i + nn1 * j;
                        let scale = 1.0
                            / (geom.jac[node] * self.ops.weights[i] * self.ops.weights[j]);
                        for c in 0..NVARS {
                            out[e * nn + node][c] *= scale;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Total-entropy time derivative `sum w J v^T du/dt` for a solution and its
/// RHS (diagnostic; recomputes the entropy variables independently).
pub fn entropy_rate(
    mesh: &Mesh,
    ops: &SpectralOps,
    params: &PhysParams,
    sol: &Solution,
    rhs: &[StateVec],
) -> f64 {
    let nn1 = ops.nn();
    let mut total = 0.0;
    for (e, geom) in mesh.elements.iter().enumerate() {
        let mut acc = 0.0;
        for node in 0..mesh.nn() {
            let u = crate::physics::State::from_vec(sol.at(e, node));
            let q = crate::physics::cons_to_prim(&u, params).expect("admissible state");
            let v = entropy_vars_prim(&q, params);
            let mut vu = 0.0;
            for c in 0..NVARS {
                vu += v.0[c] * rhs[e * mesh.nn() + node][c];
            }
            let w = if mesh.dim == 1 {
                ops.weights[node]
            } else {
                ops.weights[node % nn1] * ops.weights[node / nn1]
            };
            acc += w * geom.jac[node] * vu;
        }
        total += acc;
    }
    total
}

/// Total mathematical entropy `S_Omega` of a solution.
pub fn total_entropy(
    mesh: &Mesh,
    ops: &SpectralOps,
    params: &PhysParams,
    sol: &Solution,
) -> f64 {
    let field: Vec<f64> = sol
        .data
        .iter()
        .map(|u| {
            crate::physics::entropy(&crate::physics::State::from_vec(u), params)
                .expect("admissible state")
        })
        .collect();
    crate::mesh::integrate(&field, mesh, ops)
}

/// Nodal discrete divergence of B (conservative curvilinear form), for
/// diagnostics.
pub fn div_b(mesh: &Mesh, ops: &SpectralOps, sol: &Solution) -> Vec<f64> {
    let nn1 = ops.nn();
    let nn = mesh.nn();
    let mut out = vec![0.0; mesh.nelem() * nn];
    for (e, geom) in mesh.elements.iter().enumerate() {
        if mesh.dim == 1 {
            for i in 0..nn1 {
                let mut acc = 0.0;
                for m in 0..nn1 {
                    let u = sol.at(e, m);
                    acc += ops.d_at(i, m) * geom.ja[0][m][0] * u[5];
                }
                out[e * nn + i] = acc / geom.jac[i];
            }
        } else {
            for j in 0..nn1 {
                for i in 0..nn1 {
                    let mut acc = 0.0;
                    for m in 0..nn1 {
                        let um = sol.at(e, m + nn1 * j);
                        let ja = geom.ja[0][m + nn1 * j];
                        acc += ops.d_at(i, m) * (ja[0] * um[5] + ja[1] * um[6]);
                        let un = sol.at(e, i + nn1 * m);
                        let ja2 = geom.ja[1][i + nn1 * m];
                        acc += ops.d_at(j, m) * (ja2[0] * un[5] + ja2[1] * un[6]);
                    }
                    out[e * nn + i + nn1 * j] = acc / geom.jac[i + nn1 * j];
                }
            }
        }
    }
    out
}
