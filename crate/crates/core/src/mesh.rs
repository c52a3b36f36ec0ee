//! 1D interval meshes and 2D curvilinear quadrilateral meshes: mapping,
//! metric terms, watertight subcell normals, connectivity and quadrature.
//!
//! 2D metric terms use the cross-derivative form `Ja^1 = (y_eta, -x_eta)`,
//! `Ja^2 = (-y_xi, x_xi)`, with mapping derivatives taken by applying D to
//! the degree-N interpolant of the mapping. Discrete mixed partials commute,
//! so the discrete metric identities hold to round-off.

use crate::error::MeshError;
use crate::numerics::{build_ops, SpectralOps};

/// Geometry of a single element, nodal quantities on the (N+1)^dim LGL grid.
#[derive(Debug, Clone)]
pub struct ElementGeometry {
    /// Physical node coordinates.
    pub coords: Vec<[f64; 2]>,
    /// Mapping Jacobian at each node, J > 0.
    pub jac: Vec<f64>,
    /// Scaled contravariant vectors (Ja^1, Ja^2) at each node.
    pub ja: [Vec<[f64; 2]>; 2],
    /// Subcell interface normals. For direction 0, entry `ifc + (N+2)*j`
    /// with ifc in 0..=N+1 is the normal of the interface left of node ifc
    /// on line j; ifc = 0 and N+1 coincide with the face metrics.
    /// For direction 1, entry `jfc + (N+2)*i`.
    pub subcell_n: [Vec<[f64; 2]>; 2],
    /// Shortest element edge, in physical space.
    pub min_edge: f64,
}

/// A conforming face between two elements (or one element and the domain
/// boundary). `left` is the element on the negative side in direction `dir`.
#[derive(Debug, Clone, Copy)]
pub struct Face {
    pub dir: usize,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub dim: usize,
    pub n: usize,
    pub n_geo: usize,
    pub nx: usize,
    pub ny: usize,
    pub periodic: [bool; 2],
    pub elements: Vec<ElementGeometry>,
    pub faces: Vec<Face>,
    /// Face ids per element: [west, east, south, north] (unused = usize::MAX).
    pub elem_faces: Vec<[usize; 4]>,
}

impl Mesh {
    #[inline]
    pub fn nelem(&self) -> usize {
        self.elements.len()
    }

    /// Nodes per element.
    #[inline]
    pub fn nn(&self) -> usize {
        (self.n + 1).pow(self.dim as u32)
    }

    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        i + (self.n + 1) * j
    }

    pub fn elem_id(&self, ex: usize, ey: usize) -> usize {
        ex + self.nx * ey
    }

    /// Face-neighbor element ids (for indicator propagation).
    pub fn neighbors(&self, e: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(4);
        for &f in &self.elem_faces[e] {
            if f == usize::MAX {
                continue;
            }
            let face = self.faces[f];
            for side in [face.left, face.right].into_iter().flatten() {
                if side != e {
                    out.push(side);
                }
            }
        }
        out
    }
}

/// Tensor mapping evaluation helper: applies a 1D interpolation matrix in
/// both directions of a nodal field on an (n_src+1)^2 grid.
fn interp_2d(src: &[f64], m: &[f64], n_src: usize, n_dst: usize) -> Vec<f64> {
    let (ns, nd) = (n_src + 1, n_dst + 1);
    // First direction (i).
    let mut tmp = vec![0.0; nd * ns];
    for j in 0..ns {
        for r in 0..nd {
            let mut acc = 0.0;
            for i in 0..ns {
                acc += m[r * ns + i] * src[i + ns * j];
            }
            tmp[r + nd * j] = acc;
        }
    }
    // Second direction (j).
    let mut out = vec![0.0; nd * nd];
    for r in 0..nd {
        for s in 0..nd {
            let mut acc = 0.0;
            for j in 0..ns {
                acc += m[s * ns + j] * tmp[r + nd * j];
            }
            out[r + nd * s] = acc;
        }
    }
    out
}

fn derivative_xi(f: &[f64], ops: &SpectralOps) -> Vec<f64> {
    let nn = ops.nn();
    let mut out = vec![0.0; nn * nn];
    for j in 0..nn {
        for i in 0..nn {
            let mut acc = 0.0;
            for m in 0..nn {
                acc += ops.d_at(i, m) * f[m + nn * j];
            }
            out[i + nn * j] = acc;
        }
    }
    out
}

fn derivative_eta(f: &[f64], ops: &SpectralOps) -> Vec<f64> {
    let nn = ops.nn();
    let mut out = vec![0.0; nn * nn];
    for j in 0..nn {
        for i in 0..nn {
            let mut acc = 0.0;
            for m in 0..nn {
                acc += ops.d_at(j, m) * f[i + nn * m];
            }
            out[i + nn * j] = acc;
        }
    }
    out
}

/// Builds one 2D element's geometry from a mapping closure over the element's
/// reference square [-1,1]^2, interpolated at degree `n_geo` first.
fn build_element_2d<F>(
    mapping: F,
    ops: &SpectralOps,
    ops_geo: &SpectralOps,
    interp: &[f64],
    elem: usize,
) -> Result<ElementGeometry, MeshError>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    let n = ops.n;
    let nn = n + 1;
    let ng = ops_geo.n + 1;

    let mut xg = vec![0.0; ng * ng];
    let mut yg = vec![0.0; ng * ng];
    for j in 0..ng {
        for i in 0..ng {
            let p = mapping(ops_geo.nodes[i], ops_geo.nodes[j]);
            xg[i + ng * j] = p[0];
            yg[i + ng * j] = p[1];
        }
    }
    let x = interp_2d(&xg, interp, ops_geo.n, n);
    let y = interp_2d(&yg, interp, ops_geo.n, n);

    let x_xi = derivative_xi(&x, ops);
    let x_eta = derivative_eta(&x, ops);
    let y_xi = derivative_xi(&y, ops);
    let y_eta = derivative_eta(&y, ops);

    let mut coords = vec![[0.0; 2]; nn * nn];
    let mut jac = vec![0.0; nn * nn];
    let mut ja1 = vec![[0.0; 2]; nn * nn];
    let mut ja2 = vec![[0.0; 2]; nn * nn];
    for idx in 0..nn * nn {
        coords[idx] = [x[idx], y[idx]];
        let j_val = x_xi[idx] * y_eta[idx] - x_eta[idx] * y_xi[idx];
        if j_val <= 0.0 {
            return Err(MeshError::FoldOver { elem, node: idx, j: j_val });
        }
        jac[idx] = j_val;
        ja1[idx] = [y_eta[idx], -x_eta[idx]];
        ja2[idx] = [-y_xi[idx], x_xi[idx]];
    }

    let ja = [ja1, ja2];
    let subcell_n = compute_subcell_normals_2d(&ja, ops);

    let corner = |i: usize, j: usize| coords[i + nn * j];
    let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let min_edge = [
        dist(corner(0, 0), corner(n, 0)),
        dist(corner(0, n), corner(n, n)),
        dist(corner(0, 0), corner(0, n)),
        dist(corner(n, 0), corner(n, n)),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);

    Ok(ElementGeometry { coords, jac, ja, subcell_n, min_edge })
}

/// Subcell interface normals from the telescoping sums of the SBP matrix:
/// `n_(i,i+1)j = Ja^1_0j + sum_{l<=i} sum_m Q_lm Ja^1_mj`, and the analog in
/// the second direction. Endpoints reduce to the face metric terms.
pub fn compute_subcell_normals_2d(
    ja: &[Vec<[f64; 2]>; 2],
    ops: &SpectralOps,
) -> [Vec<[f64; 2]>; 2] {
    let nn = ops.nn();
    let nifc = nn + 1;
    let mut out0 = vec![[0.0; 2]; nifc * nn];
    let mut out1 = vec![[0.0; 2]; nifc * nn];
    for line in 0..nn {
        // Direction 0: line = j, running index i.
        let mut acc = ja[0][nn * line];
        out0[nifc * line] = acc;
        for i in 0..nn {
            for m in 0..nn {
                let q = ops.q_at(i, m);
                let v = ja[0][m + nn * line];
                acc[0] += q * v[0];
                acc[1] += q * v[1];
            }
            out0[i + 1 + nifc * line] = acc;
        }
        // Direction 1: line = i, running index j.
        let mut acc = ja[1][line];
        out1[nifc * line] = acc;
        for j in 0..nn {
            for m in 0..nn {
                let q = ops.q_at(j, m);
                let v = ja[1][line + nn * m];
                acc[0] += q * v[0];
                acc[1] += q * v[1];
            }
            out1[j + 1 + nifc * line] = acc;
        }
    }
    [out0, out1]
}

fn build_faces(nx: usize, ny: usize, dim: usize, periodic: [bool; 2]) -> (Vec<Face>, Vec<[usize; 4]>) {
    let nelem = nx * ny;
    let mut faces = Vec::new();
    let mut elem_faces = vec![[usize::MAX; 4]; nelem];
    let eid = |ex: usize, ey: usize| ex + nx * ey;

    for ey in 0..ny {
        if periodic[0] {
            for fx in 0..nx {
                let id = faces.len();
                let left = eid((fx + nx - 1) % nx, ey);
                let right = eid(fx, ey);
                faces.push(Face { dir: 0, left: Some(left), right: Some(right) });
                elem_faces[left][1] = id;
                elem_faces[right][0] = id;
            }
        } else {
            for fx in 0..=nx {
                let id = faces.len();
                let left = (fx > 0).then(|| eid(fx - 1, ey));
                let right = (fx < nx).then(|| eid(fx, ey));
                faces.push(Face { dir: 0, left, right });
                if let Some(l) = left {
                    elem_faces[l][1] = id;
                }
                if let Some(r) = right {
                    elem_faces[r][0] = id;
                }
            }
        }
    }
    if dim > 1 {
        for ex in 0..nx {
            if periodic[1] {
                for fy in 0..ny {
                    let id = faces.len();
                    let left = eid(ex, (fy + ny - 1) % ny);
                    let right = eid(ex, fy);
                    faces.push(Face { dir: 1, left: Some(left), right: Some(right) });
                    elem_faces[left][3] = id;
                    elem_faces[right][2] = id;
                }
            } else {
                for fy in 0..=ny {
                    let id = faces.len();
                    let left = (fy > 0).then(|| eid(ex, fy - 1));
                    let right = (fy < ny).then(|| eid(ex, fy));
                    faces.push(Face { dir: 1, left, right });
                    if let Some(l) = left {
                        elem_faces[l][3] = id;
                    }
                    if let Some(r) = right {
                        elem_faces[r][2] = id;
                    }
                }
            }
        }
    }
    (faces, elem_faces)
}

/// 2D domain extents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain2 {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

/// Builds a Cartesian tensor-product mesh (1D when ny == 0).
pub fn build_cartesian(
    nx: usize,
    ny: usize,
    domain: Domain2,
    periodic: [bool; 2],
    n: usize,
    n_geo: usize,
) -> Result<Mesh, MeshError> {
    build_mapped(nx, ny, periodic, n, n_geo, |xi, eta| {
        [
            domain.x[0] + (domain.x[1] - domain.x[0]) * xi,
            domain.y[0] + (domain.y[1] - domain.y[0]) * eta,
        ]
    })
    .and_then(|m| {
        if domain.x[1] <= domain.x[0] || (ny >= 1 && domain.y[1] <= domain.y[0]) {
            Err(MeshError::DegenerateDomain(format!("{domain:?}")))
        } else {
            Ok(m)
        }
    })
}

/// Builds the heavily warped periodic mesh on [0, L]^2: the y stage applies a
/// cosine perturbation of amplitude `amplitude`, and the x stage composes with
/// the already-transformed y.
pub fn build_warped(
    n_elems: usize,
    l: f64,
    amplitude: f64,
    n: usize,
    n_geo: usize,
) -> Result<Mesh, MeshError> {
    use std::f64::consts::PI;
    if n_elems < 2 {
        return Err(MeshError::Invalid(format!("warped mesh needs n >= 2, got {n_elems}")));
    }
    build_mapped(n_elems, n_elems, [true, true], n, n_geo, move |u, v| {
        let xi = l * u;
        let eta = l * v;
        let y = eta
            + amplitude
                * (1.5 * PI * (2.0 * xi - l) / l).cos()
                * (0.5 * PI * (2.0 * eta - l) / l).cos();
        let x = xi
            + amplitude
                * (0.5 * PI * (2.0 * xi - l) / l).cos()
                * (2.0 * PI * (2.0 * y - l) / l).cos();
        [x, y]
    })
}

/// Builds a structured mesh from a global mapping over the unit parameter
/// square [0,1]^2 (or [0,1] interval when ny == 0 for a 1D mesh).
pub fn build_mapped<F>(
    nx: usize,
    ny: usize,
    periodic: [bool; 2],
    n: usize,
    n_geo: usize,
    mapping: F,
) -> Result<Mesh, MeshError>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    if n_geo > n {
        return Err(MeshError::GeometryDegree { n_geo, n });
    }
    if nx < 1 {
        return Err(MeshError::Invalid("nx must be >= 1".into()));
    }
    let dim = if ny == 0 { 1 } else { 2 };
    let ops = build_ops(n).map_err(|e| MeshError::Invalid(e.to_string()))?;
    let ops_geo = build_ops(n_geo).map_err(|e| MeshError::Invalid(e.to_string()))?;
    let interp = ops_geo.interpolation_to(&ops.nodes);

    let mut elements = Vec::with_capacity(nx * ny.max(1));
    if dim == 1 {
        let nn = n + 1;
        for ex in 0..nx {
            let u0 = ex as f64 / nx as f64;
            let u1 = (ex + 1) as f64 / nx as f64;
            let x0 = mapping(u0, 0.0)[0];
            let x1 = mapping(u1, 0.0)[0];
            let h = x1 - x0;
            if h <= 0.0 {
                return Err(MeshError::FoldOver { elem: ex, node: 0, j: h / 2.0 });
            }
            let coords: Vec<[f64; 2]> =
                ops.nodes.iter().map(|&r| [x0 + 0.5 * h * (r + 1.0), 0.0]).collect();
            // In 1D the scaled contravariant metric J a^1 = x_xi / x_xi = 1;
            // only the Jacobian carries the element size.
            let jac = vec![0.5 * h; nn];
            let ja1 = vec![[1.0, 0.0]; nn];
            let subcell = vec![[1.0, 0.0]; nn + 1];
            elements.push(ElementGeometry {
                coords,
                jac,
                ja: [ja1, Vec::new()],
                subcell_n: [subcell, Vec::new()],
                min_edge: h,
            });
        }
    } else {
        for ey in 0..ny {
            for ex in 0..nx {
                let elem = ex + nx * ey;
                let local = |r: f64, s: f64| {
                    let u = (ex as f64 + 0.5 * (r + 1.0)) / nx as f64;
                    let v = (ey as f64 + 0.5 * (s + 1.0)) / ny as f64;
                    mapping(u, v)
                };
                elements.push(build_element_2d(local, &ops, &ops_geo, &interp, elem)?);
            }
        }
    }

    let (faces, elem_faces) = build_faces(nx, ny.max(1), dim, periodic);
    Ok(Mesh {
        dim,
        n,
        n_geo,
        nx,
        ny: ny.max(1),
        periodic,
        elements,
        faces,
        elem_faces,
    })
}

/// Quadrature of a nodal field over the whole mesh: sum of w_i w_j J_ij f_ij.
pub fn integrate(field: &[f64], mesh: &Mesh, ops: &SpectralOps) -> f64 {
    let nn1 = ops.nn();
    let mut total = 0.0;
    for (e, geom) in mesh.elements.iter().enumerate() {
        let base = e * mesh.nn();
        let mut acc = 0.0;
        if mesh.dim == 1 {
            for i in 0..nn1 {
                acc += ops.weights[i] * geom.jac[i] * field[base + i];
            }
        } else {
            for j in 0..nn1 {
                for i in 0..nn1 {
                    let idx = i + nn1 * j;
                    acc += ops.weights[i] * ops.weights[j] * geom.jac[idx] * field[base + idx];
                }
            }
        }
        total += acc;
    }
    total
}

/// Domain measure (integral of 1).
pub fn measure(mesh: &Mesh, ops: &SpectralOps) -> f64 {
    let ones = vec![1.0; mesh.nelem() * mesh.nn()];
    integrate(&ones, mesh, ops)
}

/// Discrete L2 norm, normalized by the domain measure.
pub fn l2_norm(field: &[f64], mesh: &Mesh, ops: &SpectralOps) -> f64 {
    let sq: Vec<f64> = field.iter().map(|f| f * f).collect();
    (integrate(&sq, mesh, ops) / measure(mesh, ops)).sqrt()
}

/// Max residual of the discrete metric identities over an element.
pub fn metric_identity_residual(geom: &ElementGeometry, ops: &SpectralOps) -> f64 {
    let nn = ops.nn();
    let mut max_res = 0.0f64;
    for j in 0..nn {
        for i in 0..nn {
            for d in 0..2 {
                let mut acc = 0.0;
                for m in 0..nn {
                    acc += ops.d_at(i, m) * geom.ja[0][m + nn * j][d];
                    acc += ops.d_at(j, m) * geom.ja[1][i + nn * m][d];
                }
                max_res = max_res.max(acc.abs());
            }
        }
    }
    max_res
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_square_single_element_jacobian() {
        let mesh = build_cartesian(
            1,
            1,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [true, true],
            2,
            1,
        )
        .unwrap();
        for &j in &mesh.elements[0].jac {
            assert_relative_eq!(j, 0.25, max_relative = 1e-13);
        }
    }

    #[test]
    fn periodic_faces_all_paired() {
        let mesh = build_cartesian(
            3,
            2,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [true, true],
            3,
            1,
        )
        .unwrap();
        assert_eq!(mesh.faces.len(), 3 * 2 + 3 * 2);
        for f in &mesh.faces {
            assert!(f.left.is_some() && f.right.is_some());
        }
        for ef in &mesh.elem_faces {
            for &f in ef {
                assert!(f != usize::MAX);
            }
        }
    }

    #[test]
    fn non_periodic_boundary_faces() {
        let mesh = build_cartesian(
            2,
            2,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [false, false],
            2,
            1,
        )
        .unwrap();
        let boundary = mesh
            .faces
            .iter()
            .filter(|f| f.left.is_none() || f.right.is_none())
            .count();
        assert_eq!(boundary, 8);
    }

    #[test]
    fn cartesian_measure_matches_area() {
        let ops = build_ops(3).unwrap();
        let mesh = build_cartesian(
            4,
            5,
            Domain2 { x: [0.0, 2.0], y: [-1.0, 1.0] },
            [true, true],
            3,
            1,
        )
        .unwrap();
        assert_relative_eq!(measure(&mesh, &ops), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn warped_mesh_positive_jacobian_and_identities() {
        let n_geo = 4;
        let n = 4;
        let l = 3.0;
        let mesh = build_warped(10, l, l / 8.0, n, n_geo).unwrap();
        let ops = build_ops(n).unwrap();
        for geom in &mesh.elements {
            for &j in &geom.jac {
                assert!(j > 0.0);
            }
            let res = metric_identity_residual(geom, &ops);
            assert!(res < 1e-12, "metric identity residual {res:.3e}");
        }
    }

    #[test]
    fn warped_zero_amplitude_is_cartesian() {
        let mesh_w = build_warped(4, 3.0, 0.0, 3, 2).unwrap();
        let mesh_c = build_cartesian(
            4,
            4,
            Domain2 { x: [0.0, 3.0], y: [0.0, 3.0] },
            [true, true],
            3,
            2,
        )
        .unwrap();
        for (ew, ec) in mesh_w.elements.iter().zip(&mesh_c.elements) {
            for (cw, cc) in ew.coords.iter().zip(&ec.coords) {
                assert_relative_eq!(cw[0], cc[0], epsilon = 1e-12);
                assert_relative_eq!(cw[1], cc[1], epsilon = 1e-12);
            }
            for (jw, jc) in ew.jac.iter().zip(&ec.jac) {
                assert_relative_eq!(jw, jc, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn warped_measure_preserved() {
        let ops = build_ops(4).unwrap();
        let l = 3.0;
        let mesh = build_warped(8, l, l / 8.0, 4, 4).unwrap();
        assert_relative_eq!(measure(&mesh, &ops), l * l, max_relative = 1e-10);
    }

    #[test]
    fn watertight_face_metrics() {
        let n = 4;
        let nn = n + 1;
        let mesh = build_warped(6, 3.0, 3.0 / 8.0, n, 3).unwrap();
        for face in &mesh.faces {
            let (l, r) = (face.left.unwrap(), face.right.unwrap());
            let (gl, gr) = (&mesh.elements[l], &mesh.elements[r]);
            for k in 0..nn {
                let (il, ir) = if face.dir == 0 {
                    (n + nn * k, nn * k)
                } else {
                    (k + nn * n, k)
                };
                for d in 0..2 {
                    let a = gl.ja[face.dir][il][d];
                    let b = gr.ja[face.dir][ir][d];
                    assert!(
                        (a - b).abs() < 1e-12 * a.abs().max(1.0),
                        "metric mismatch across face: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn subcell_normals_telescope_to_face_metrics() {
        let n = 5;
        let nn = n + 1;
        let ops = build_ops(n).unwrap();
        let mesh = build_warped(5, 3.0, 3.0 / 8.0, n, 3).unwrap();
        for geom in &mesh.elements {
            for j in 0..nn {
                let left = geom.subcell_n[0][(nn + 1) * j];
                let right = geom.subcell_n[0][nn + (nn + 1) * j];
                for d in 0..2 {
                    assert_relative_eq!(left[d], geom.ja[0][nn * j][d], epsilon = 1e-13);
                    assert_relative_eq!(
                        right[d],
                        geom.ja[0][n + nn * j][d],
                        epsilon = 1e-12,
                        max_relative = 1e-12
                    );
                }
            }
            // Closure: the four surrounding normals of every subcell cancel.
            for j in 0..nn {
                for i in 0..nn {
                    for d in 0..2 {
                        let res = ops.weights[j]
                            * (geom.subcell_n[0][i + 1 + (nn + 1) * j][d]
                                - geom.subcell_n[0][i + (nn + 1) * j][d])
                            + ops.weights[i]
                                * (geom.subcell_n[1][j + 1 + (nn + 1) * i][d]
                                    - geom.subcell_n[1][j + (nn + 1) * i][d]);
                        assert!(res.abs() < 1e-12, "subcell closure residual {res:.3e}");
                    }
                }
            }
        }
    }

    #[test]
    fn cartesian_subcell_normals_constant() {
        let n = 3;
        let nn = n + 1;
        let mesh = build_cartesian(
            2,
            2,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [true, true],
            n,
            1,
        )
        .unwrap();
        let geom = &mesh.elements[0];
        let expect = geom.ja[0][0];
        for j in 0..nn {
            for ifc in 0..=nn {
                let v = geom.subcell_n[0][ifc + (nn + 1) * j];
                assert_relative_eq!(v[0], expect[0], epsilon = 1e-13);
                assert_relative_eq!(v[1], expect[1], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn integrate_constant_and_uniform_entropy() {
        let ops = build_ops(3).unwrap();
        let mesh = build_cartesian(
            3,
            3,
            Domain2 { x: [0.0, 3.0], y: [0.0, 3.0] },
            [true, true],
            3,
            1,
        )
        .unwrap();
        let field = vec![2.5; mesh.nelem() * mesh.nn()];
        assert_relative_eq!(integrate(&field, &mesh, &ops), 2.5 * 9.0, max_relative = 1e-12);
        assert_relative_eq!(l2_norm(&field, &mesh, &ops), 2.5, max_relative = 1e-12);
    }

    #[test]
    fn one_dimensional_mesh_geometry() {
        let mesh = build_mapped(4, 0, [true, false], 3, 1, |u, _| [2.0 * u, 0.0]).unwrap();
        assert_eq!(mesh.dim, 1);
        assert_eq!(mesh.nelem(), 4);
        let ops = build_ops(3).unwrap();
        assert_relative_eq!(measure(&mesh, &ops), 2.0, max_relative = 1e-13);
        for geom in &mesh.elements {
            assert_relative_eq!(geom.jac[0], 0.25, max_relative = 1e-13);
        }
        assert_eq!(mesh.faces.len(), 4);
    }

    #[test]
    fn mesh_rejects_bad_inputs() {
        assert!(build_warped(1, 3.0, 0.1, 3, 2).is_err());
        assert!(build_mapped(2, 2, [true, true], 2, 3, |u, v| [u, v]).is_err());
        // Fold-over: amplitude far beyond L/8 folds the mapping.
        assert!(build_warped(4, 3.0, 3.0, 4, 4).is_err());
    }
}
