//! Solution storage and per-stage node/face scratch data.

use crate::error::PhysicsError;
use crate::mesh::Mesh;
use crate::physics::{
    cons_to_prim, entropy_vars_prim, EntropyVars, PhysParams, Primitive, State, StateVec, NVARS,
};

/// Nodal conservative solution on a mesh: `data[elem * nn + node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub data: Vec<StateVec>,
    pub nelem: usize,
    pub nn: usize,
}

impl Solution {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self {
            data: vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()],
            nelem: mesh.nelem(),
            nn: mesh.nn(),
        }
    }

    /// Fills from an initial-condition function of the physical coordinates.
    pub fn from_ic<F>(mesh: &Mesh, params: &PhysParams, ic: F) -> Self
    where
        F: Fn([f64; 2]) -> Primitive,
    {
        let mut sol = Self::zeros(mesh);
        for (e, geom) in mesh.elements.iter().enumerate() {
            for (node, &xy) in geom.coords.iter().enumerate() {
                let prim = ic(xy);
                sol.data[e * sol.nn + node] = crate::physics::prim_to_cons(&prim, params).to_vec();
            }
        }
        sol
    }

    #[inline]
    pub fn at(&self, elem: usize, node: usize) -> &StateVec {
        &self.data[elem * self.nn + node]
    }

    /// self = a*x + b*y (used by the SSP stages).
    pub fn linear_combination(&mut self, a: f64, x: &Solution, b: f64, y: &Solution) {
        for (s, (xv, yv)) in self.data.iter_mut().zip(x.data.iter().zip(&y.data)) {
            for k in 0..NVARS {
                s[k] = a * xv[k] + b * yv[k];
            }
        }
    }

    /// self += c * r.
    pub fn add_scaled(&mut self, c: f64, r: &[StateVec]) {
        for (s, rv) in self.data.iter_mut().zip(r) {
            for k in 0..NVARS {
                s[k] += c * rv[k];
            }
        }
    }
}

/// Per-node primitive and entropy-variable cache, refreshed once per stage.
pub struct NodeCache {
    pub prim: Vec<Primitive>,
    pub entro: Vec<EntropyVars>,
}

impl NodeCache {
    pub fn new(mesh: &Mesh) -> Self {
        let n = mesh.nelem() * mesh.nn();
        let dummy = Primitive { rho: 1.0, v: [0.0; 3], p: 1.0, b: [0.0; 3], psi: 0.0 };
        Self {
            prim: vec![dummy; n],
            entro: vec![EntropyVars([0.0; NVARS]); n],
        }
    }

    /// Recomputes primitives and entropy variables; on failure reports the
    /// offending element.
    pub fn update(&mut self, sol: &Solution, params: &PhysParams) -> Result<(), (usize, PhysicsError)> {
        for (idx, u) in sol.data.iter().enumerate() {
            let state = State::from_vec(u);
            match cons_to_prim(&state, params) {
                Ok(prim) => {
                    self.entro[idx] = entropy_vars_prim(&prim, params);
                    self.prim[idx] = prim;
                }
                Err(err) => return Err((idx / sol.nn, err)),
            }
        }
        Ok(())
    }
}

/// Number of nodes on one face.
pub fn face_nodes(mesh: &Mesh) -> usize {
    if mesh.dim == 1 {
        1
    } else {
        mesh.n + 1
    }
}

/// Resolves the element-local node index of face node `k` as seen from the
/// given side of a face with direction `dir` (side 0 = left of the face).
#[inline]
pub fn face_node_index(mesh: &Mesh, dir: usize, side: usize, k: usize) -> usize {
    let n = mesh.n;
    let nn = n + 1;
    if mesh.dim == 1 {
        return if side == 0 { n } else { 0 };
    }
    match (dir, side) {
        (0, 0) => n + nn * k,
        (0, 1) => nn * k,
        (1, 0) => k + nn * n,
        (1, 1) => k,
        _ => unreachable!(),
    }
}

/// Per-face precomputed interface data, laid out `face_id * face_nodes + k`.
pub struct FaceData {
    /// Shared advective numerical flux (metric-scaled).
    pub flux: Vec<StateVec>,
    /// Diamond term seen from the left element (its own state first).
    pub dia_left: Vec<StateVec>,
    /// Diamond term seen from the right element.
    pub dia_right: Vec<StateVec>,
    /// BR1 central average of the entropy variables (viscous runs only).
    pub v_avg: Vec<StateVec>,
    /// Shared viscous numerical flux (metric-scaled; viscous runs only).
    pub visc: Vec<StateVec>,
}

impl FaceData {
    pub fn new(mesh: &Mesh, viscous: bool) -> Self {
        let total = mesh.faces.len() * face_nodes(mesh);
        Self {
            flux: vec![[0.0; NVARS]; total],
            dia_left: vec![[0.0; NVARS]; total],
            dia_right: vec![[0.0; NVARS]; total],
            v_avg: if viscous { vec![[0.0; NVARS]; total] } else { Vec::new() },
            visc: if viscous { vec![[0.0; NVARS]; total] } else { Vec::new() },
        }
    }
}
