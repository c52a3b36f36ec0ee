//! Operator-level verification: element entropy-balance identities, total
//! entropy rates, free-stream preservation, conservation, and BR1 exactness.
//!
//! The balance identities are assembled independently on both sides from the
//! numerical entropy flux and entropy production definitions, so they check
//! every sign and weight of the DG and FV assemblies.

use esdg::field::{face_node_index, face_nodes, Solution};
use esdg::fluxes::{
    diamond_noncons, ec_flux_metric, entropy_production, numerical_entropy_flux,
    surface_flux_metric, DissipationContext, TwoPointFluxKind,
};
use esdg::fv::ReconstructionKind;
use esdg::mesh::{build_cartesian, build_warped, Domain2, Mesh};
use esdg::numerics::build_ops;
use esdg::physics::{
    cons_to_prim, entropy_vars_prim, prim_to_cons, PhysParams, Primitive, State, StateVec, NVARS,
};
use esdg::rhs::{entropy_rate, FluxSet, RhsAssembler};
use esdg::sampling::StateSampler;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> PhysParams {
    PhysParams { c_h: 0.9, ..Default::default() }
}

fn fluxset(surface: TwoPointFluxKind, fv: TwoPointFluxKind) -> FluxSet {
    FluxSet {
        volume: TwoPointFluxKind::Ec,
        surface,
        fv_interior: fv,
        recon: ReconstructionKind::TvdNoBoundary,
    }
}

/// Random admissible nodal data with moderate magnitudes.
fn random_solution(mesh: &Mesh, params: &PhysParams, seed: u64) -> Solution {
    let mut sampler = StateSampler::new(seed);
    sampler.log_rho = (-0.2, 0.2);
    sampler.log_p = (-0.2, 0.2);
    sampler.mach = (0.0, 0.8);
    let mut sol = Solution::zeros(mesh);
    for u in sol.data.iter_mut() {
        *u = prim_to_cons(&sampler.primitive(), params).to_vec();
    }
    sol
}

fn warped_mesh(n: usize) -> Mesh {
    build_warped(6, 3.0, 3.0 / 8.0, n, 3).unwrap()
}

#[test]
fn free_stream_preserved_on_warped_mesh_random_alpha() {
    let p = params();
    let n = 4;
    let mesh = build_warped(6, 3.0, 3.0 / 8.0, n, 4).unwrap();
    let ops = build_ops(n).unwrap();
    let uniform = Primitive {
        rho: 1.0,
        v: [0.1, -0.2, 0.3],
        p: 1.0,
        b: [1.0, 1.0, 1.0],
        psi: 0.0,
    };
    let sol = Solution::from_ic(&mesh, &p, |_| uniform);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    for (surface, fv) in [
        (TwoPointFluxKind::Ec, TwoPointFluxKind::Ec),
        (TwoPointFluxKind::EsRusanov, TwoPointFluxKind::EsRusanov),
        (TwoPointFluxKind::EsRusanov, TwoPointFluxKind::TvdEs),
    ] {
        let mut asm = RhsAssembler::new(mesh.clone(), ops.clone(), fluxset(surface, fv), false);
        let alphas: Vec<f64> = (0..mesh.nelem()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
        asm.evaluate(&sol, &p, &alphas, &mut rhs).unwrap();
        let mut max_rate = 0.0f64;
        for r in &rhs {
            for c in 0..NVARS {
                max_rate = max_rate.max(r[c].abs());
            }
        }
        assert!(
            max_rate < 1e-11,
            "free stream violated: max |du/dt| = {max_rate:.3e} for {surface:?}/{fv:?}"
        );
    }
}

/// Element entropy balance of the DG operator (2D curvilinear form): the
/// contraction of the residual equals boundary entropy fluxes plus half
/// boundary productions plus the Q-weighted volume productions.
#[test]
fn dg_element_entropy_balance() {
    let p = params();
    let n = 3;
    let nn1 = n + 1;
    let mesh = warped_mesh(n);
    let ops = build_ops(n).unwrap();
    let nfn = face_nodes(&mesh);

    for surface in [TwoPointFluxKind::Ec, TwoPointFluxKind::EsRusanov] {
        let mut asm =
            RhsAssembler::new(mesh.clone(), ops.clone(), fluxset(surface, surface), false);
        let sol = random_solution(&mesh, &p, 555);
        asm.prepare(&sol, &p).unwrap();

        let prim_at = |e: usize, node: usize| -> Primitive {
            cons_to_prim(&State::from_vec(sol.at(e, node)), &p).unwrap()
        };

        for e in 0..mesh.nelem() {
            let mut f_dg = vec![[0.0; NVARS]; mesh.nn()];
            asm.dg_residual(e, &p, &mut f_dg);

            // LHS: contraction with the entropy variables.
            let mut lhs = 0.0;
            for node in 0..mesh.nn() {
                let q = prim_at(e, node);
                let v = entropy_vars_prim(&q, &p);
                for c in 0..NVARS {
                    lhs += v.0[c] * f_dg[node][c];
                }
            }

            // RHS: face terms.
            let mut rhs_total = 0.0;
            let geom = &mesh.elements[e];
            for dir in 0..2 {
                let (fw, fe_) = if dir == 0 {
                    (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
                } else {
                    (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
                };
                for line in 0..nn1 {
                    let w_line = ops.weights[line];
                    for (fid, sign) in [(fw, 1.0), (fe_, -1.0)] {
                        let off = fid * nfn + line;
                        let face = mesh.faces[fid];
                        let (el, er) = (face.left.unwrap(), face.right.unwrap());
                        let ql = prim_at(el, face_node_index(&mesh, dir, 0, line));
                        let qr = prim_at(er, face_node_index(&mesh, dir, 1, line));
                        let ntilde = mesh.elements[el].ja[dir]
                            [face_node_index(&mesh, dir, 0, line)];
                        let flux = &asm.faces().flux[off];
                        let dlr = &asm.faces().dia_left[off];
                        let drl = &asm.faces().dia_right[off];
                        let fs = numerical_entropy_flux(&ql, &qr, flux, dlr, drl, ntilde, &p);
                        let r = entropy_production(&ql, &qr, flux, dlr, drl, ntilde, &p);
                        rhs_total += w_line * (sign * fs + 0.5 * r);
                    }
                }
            }

            // RHS: volume productions sum_(i,m) w_line w_i D_im r_(i,m).
            for dir in 0..2 {
                for line in 0..nn1 {
                    let node_at = |i: usize| -> usize {
                        if dir == 0 {
                            i + nn1 * line
                        } else {
                            line + nn1 * i
                        }
                    };
                    for i in 0..nn1 {
                        for m in 0..nn1 {
                            if m == i {
                                continue;
                            }
                            let (lo, hi) = (i.min(m), i.max(m));
                            let (nlo, nhi) = (node_at(lo), node_at(hi));
                            let qlo = prim_at(e, nlo);
                            let qhi = prim_at(e, nhi);
                            let ja_lo = geom.ja[dir][nlo];
                            let ja_hi = geom.ja[dir][nhi];
                            let navg =
                                [0.5 * (ja_lo[0] + ja_hi[0]), 0.5 * (ja_lo[1] + ja_hi[1])];
                            let fstar = ec_flux_metric(&qlo, &qhi, navg, &p);
                            let (qj, qk, jaj, jak) = if i < m {
                                (&qlo, &qhi, ja_lo, ja_hi)
                            } else {
                                (&qhi, &qlo, ja_hi, ja_lo)
                            };
                            let djk = diamond_noncons(qj, qk, jaj, navg, &p);
                            let dkj = diamond_noncons(qk, qj, jak, navg, &p);
                            let r = entropy_production(qj, qk, &fstar, &djk, &dkj, navg, &p);
                            rhs_total +=
                                ops.weights[line] * ops.weights[i] * ops.d_at(i, m) * r;
                        }
                    }
                }
            }

            let scale = lhs.abs().max(1.0);
            assert!(
                (lhs - rhs_total).abs() < 1e-10 * scale,
                "DG balance residual {:.3e} (element {e}, surface {surface:?})",
                (lhs - rhs_total).abs()
            );
        }
    }
}

/// Element entropy balance of the FV operator (subcell telescoping form).
#[test]
fn fv_element_entropy_balance() {
    let p = params();
    let n = 4;
    let nn1 = n + 1;
    let mesh = warped_mesh(n);
    let ops = build_ops(n).unwrap();
    let nfn = face_nodes(&mesh);

    for fv_kind in [TwoPointFluxKind::Ec, TwoPointFluxKind::EsRusanov] {
        let mut asm = RhsAssembler::new(
            mesh.clone(),
            ops.clone(),
            fluxset(fv_kind, fv_kind),
            false,
        );
        let sol = random_solution(&mesh, &p, 777);
        asm.prepare(&sol, &p).unwrap();

        let prim_at = |e: usize, node: usize| -> Primitive {
            cons_to_prim(&State::from_vec(sol.at(e, node)), &p).unwrap()
        };

        for e in 0..mesh.nelem() {
            let mut f_fv = vec![[0.0; NVARS]; mesh.nn()];
            asm.fv_residual(e, &p, &mut f_fv);

            let mut lhs = 0.0;
            for node in 0..mesh.nn() {
                let q = prim_at(e, node);
                let v = entropy_vars_prim(&q, &p);
                for c in 0..NVARS {
                    lhs += v.0[c] * f_fv[node][c];
                }
            }

            let geom = &mesh.elements[e];
            let mut rhs_total = 0.0;
            for dir in 0..2 {
                let (fw, fe_) = if dir == 0 {
                    (mesh.elem_faces[e][0], mesh.elem_faces[e][1])
                } else {
                    (mesh.elem_faces[e][2], mesh.elem_faces[e][3])
                };
                for line in 0..nn1 {
                    let w_line = ops.weights[line];
                    let node_at = |i: usize| -> usize {
                        if dir == 0 {
                            i + nn1 * line
                        } else {
                            line + nn1 * i
                        }
                    };
                    // Face terms as in the DG case.
                    for (fid, sign) in [(fw, 1.0), (fe_, -1.0)] {
                        let off = fid * nfn + line;
                        let face = mesh.faces[fid];
                        let (el, er) = (face.left.unwrap(), face.right.unwrap());
                        let ql = prim_at(el, face_node_index(&mesh, dir, 0, line));
                        let qr = prim_at(er, face_node_index(&mesh, dir, 1, line));
                        let ntilde =
                            mesh.elements[el].ja[dir][face_node_index(&mesh, dir, 0, line)];
                        let flux = &asm.faces().flux[off];
                        let dlr = &asm.faces().dia_left[off];
                        let drl = &asm.faces().dia_right[off];
                        let fs = numerical_entropy_flux(&ql, &qr, flux, dlr, drl, ntilde, &p);
                        let r = entropy_production(&ql, &qr, flux, dlr, drl, ntilde, &p);
                        rhs_total += w_line * (sign * fs + 0.5 * r);
                    }
                    // Interior subcell interfaces.
                    for ifc in 0..n {
                        let ntilde = geom.subcell_n[dir][ifc + 1 + (nn1 + 1) * line];
                        let ql = prim_at(e, node_at(ifc));
                        let qr = prim_at(e, node_at(ifc + 1));
                        let mut flux = ec_flux_metric(&ql, &qr, ntilde, &p);
                        if fv_kind == TwoPointFluxKind::EsRusanov {
                            let norm =
                                (ntilde[0] * ntilde[0] + ntilde[1] * ntilde[1]).sqrt();
                            let nhat = [ntilde[0] / norm, ntilde[1] / norm, 0.0];
                            let ctx = DissipationContext::new(&ql, &qr, nhat, &p);
                            let vl = entropy_vars_prim(&ql, &p);
                            let vr = entropy_vars_prim(&qr, &p);
                            for r_ in 0..NVARS {
                                let mut acc = 0.0;
                                for c in 0..NVARS {
                                    acc += ctx.hbar[r_][c] * (vr.0[c] - vl.0[c]);
                                }
                                flux[r_] -= 0.5 * norm * ctx.lambda_max * acc;
                            }
                        }
                        let djk = diamond_noncons(&ql, &qr, ntilde, ntilde, &p);
                        let dkj = diamond_noncons(&qr, &ql, ntilde, ntilde, &p);
                        let r = entropy_production(&ql, &qr, &flux, &djk, &dkj, ntilde, &p);
                        rhs_total += w_line * r;
                    }
                }
            }

            let scale = lhs.abs().max(1.0);
            assert!(
                (lhs - rhs_total).abs() < 1e-10 * scale,
                "FV balance residual {:.3e} (element {e}, kind {fv_kind:?})",
                (lhs - rhs_total).abs()
            );
        }
    }
}

#[test]
fn ec_total_entropy_rate_vanishes_for_any_blend() {
    let p = params();
    let n = 3;
    let mesh = warped_mesh(n);
    let ops = build_ops(n).unwrap();
    let sol = random_solution(&mesh, &p, 901);
    let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];

    let mut rates = Vec::new();
    for alpha in [0.0, 0.37, 1.0] {
        let mut asm = RhsAssembler::new(
            mesh.clone(),
            ops.clone(),
            fluxset(TwoPointFluxKind::Ec, TwoPointFluxKind::Ec),
            false,
        );
        let alphas = vec![alpha; mesh.nelem()];
        asm.evaluate(&sol, &p, &alphas, &mut rhs).unwrap();
        let rate = entropy_rate(&mesh, &ops, &p, &sol, &rhs);
        assert!(
            rate.abs() < 1e-10 * mesh.faces.len() as f64,
            "EC entropy rate {rate:.3e} at alpha = {alpha}"
        );
        rates.push(rate);
    }
    // Lemma: the balance is independent of alpha when both schemes are EC.
    for r in &rates {
        assert!((r - rates[0]).abs() < 1e-10);
    }
}

#[test]
fn es_total_entropy_rate_nonpositive() {
    let p = params();
    let n = 3;
    let mesh = warped_mesh(n);
    let ops = build_ops(n).unwrap();
    let sol = random_solution(&mesh, &p, 903);
    let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    for fv in [TwoPointFluxKind::EsRusanov, TwoPointFluxKind::TvdEs] {
        let mut asm = RhsAssembler::new(
            mesh.clone(),
            ops.clone(),
            fluxset(TwoPointFluxKind::EsRusanov, fv),
            false,
        );
        let alphas: Vec<f64> = (0..mesh.nelem()).map(|_| rng.gen_range(0.0..1.0)).collect();
        asm.evaluate(&sol, &p, &alphas, &mut rhs).unwrap();
        let rate = entropy_rate(&mesh, &ops, &p, &sol, &rhs);
        assert!(rate <= 1e-10, "ES entropy rate {rate:.3e} > 0 for {fv:?}");
    }
}

#[test]
fn conservation_on_periodic_mesh_without_magnetic_field() {
    let p = params();
    let n = 3;
    let mesh = build_cartesian(
        4,
        3,
        Domain2 { x: [0.0, 2.0], y: [0.0, 1.5] },
        [true, true],
        n,
        1,
    )
    .unwrap();
    let ops = build_ops(n).unwrap();
    let mut sampler = StateSampler::new(31415);
    sampler.log_rho = (-0.2, 0.2);
    sampler.log_p = (-0.2, 0.2);
    let mut sol = Solution::zeros(&mesh);
    for u in sol.data.iter_mut() {
        let mut q = sampler.primitive();
        q.b = [0.0; 3];
        q.psi = 0.0;
        *u = prim_to_cons(&q, &p).to_vec();
    }
    let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    let mut asm = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::EsRusanov, TwoPointFluxKind::EsRusanov),
        false,
    );
    let alphas = vec![0.4; mesh.nelem()];
    asm.evaluate(&sol, &p, &alphas, &mut rhs).unwrap();

    let nn1 = n + 1;
    for c in 0..NVARS {
        let mut total = 0.0;
        let mut scale = 0.0f64;
        for (e, geom) in mesh.elements.iter().enumerate() {
            for node in 0..mesh.nn() {
                let w = ops.weights[node % nn1] * ops.weights[node / nn1];
                total += w * geom.jac[node] * rhs[e * mesh.nn() + node][c];
                scale = scale.max((w * geom.jac[node] * rhs[e * mesh.nn() + node][c]).abs());
            }
        }
        assert!(
            total.abs() < 1e-11 * scale.max(1.0) * mesh.nelem() as f64,
            "variable {c} not conserved: d/dt integral = {total:.3e}"
        );
    }
}

/// With per-element-constant data on a Cartesian mesh, the interior terms of
/// both operators vanish and the residuals must agree node-by-node (the
/// blendable form shares the face contributions).
#[test]
fn dg_and_fv_boundary_rows_share_face_terms() {
    let p = params();
    let n = 3;
    let mesh = build_cartesian(
        3,
        3,
        Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
        [true, true],
        n,
        1,
    )
    .unwrap();
    let ops = build_ops(n).unwrap();
    let mut sampler = StateSampler::new(161);
    sampler.log_rho = (-0.2, 0.2);
    sampler.log_p = (-0.2, 0.2);
    let mut sol = Solution::zeros(&mesh);
    for e in 0..mesh.nelem() {
        let q = sampler.primitive();
        let u = prim_to_cons(&q, &p).to_vec();
        for node in 0..mesh.nn() {
            sol.data[e * mesh.nn() + node] = u;
        }
    }
    let mut asm = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::EsRusanov, TwoPointFluxKind::EsRusanov),
        false,
    );
    asm.prepare(&sol, &p).unwrap();
    let mut f_dg = vec![[0.0; NVARS]; mesh.nn()];
    let mut f_fv = vec![[0.0; NVARS]; mesh.nn()];
    for e in 0..mesh.nelem() {
        asm.dg_residual(e, &p, &mut f_dg);
        asm.fv_residual(e, &p, &mut f_fv);
        for node in 0..mesh.nn() {
            for c in 0..NVARS {
                let d = (f_dg[node][c] - f_fv[node][c]).abs();
                assert!(
                    d < 1e-12 * f_dg[node][c].abs().max(1.0),
                    "element {e} node {node} var {c}: DG {} vs FV {}",
                    f_dg[node][c],
                    f_fv[node][c]
                );
            }
        }
    }
}

/// Inverse of the entropy-variable map (test oracle).
fn primitive_from_entropy_vars(v: &[f64; NVARS], gamma: f64) -> Primitive {
    let beta = -0.5 * v[4];
    let vel = [v[1] / (2.0 * beta), v[2] / (2.0 * beta), v[3] / (2.0 * beta)];
    let b = [v[5] / (2.0 * beta), v[6] / (2.0 * beta), v[7] / (2.0 * beta)];
    let psi = v[8] / (2.0 * beta);
    let vsq = vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2];
    let s = gamma - (gamma - 1.0) * (v[0] + beta * vsq);
    let rho = ((s + (2.0 * beta).ln()) / (1.0 - gamma)).exp();
    let p = rho / (2.0 * beta);
    Primitive { rho, v: vel, p, b, psi }
}

#[test]
fn br1_gradients_exact_for_linear_entropy_variables() {
    let p = params();
    let n = 4;
    let mesh = build_cartesian(
        4,
        2,
        Domain2 { x: [0.0, 2.0], y: [0.0, 1.0] },
        [false, true],
        n,
        1,
    )
    .unwrap();
    let ops = build_ops(n).unwrap();
    // Entropy variables linear in x: v(x) = v0 + x dv.
    let v0 = [2.3, 0.2, -0.1, 0.05, -1.1, 0.2, -0.15, 0.1, 0.04];
    let dv = [0.11, -0.03, 0.02, 0.01, 0.08, -0.02, 0.03, -0.01, 0.02];
    let v_at = |x: f64| -> [f64; NVARS] {
        let mut v = [0.0; NVARS];
        for c in 0..NVARS {
            v[c] = v0[c] + x * dv[c];
        }
        v
    };
    let ic = |xy: [f64; 2]| primitive_from_entropy_vars(&v_at(xy[0]), p.gamma);
    let sol = Solution::from_ic(&mesh, &p, ic);

    let mut pv = p;
    pv.mu_ns = 1.0;
    pv.eta = 1.0;
    let mut asm = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::EsRusanov, TwoPointFluxKind::EsRusanov),
        true,
    );
    asm.set_dirichlet(&pv, ic);
    let alphas = vec![0.0; mesh.nelem()];
    let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    asm.evaluate(&sol, &pv, &alphas, &mut rhs).unwrap();
    let grads = asm.gradients();
    for e in 0..mesh.nelem() {
        for node in 0..mesh.nn() {
            for c in 0..NVARS {
                let gx = grads[0][e * mesh.nn() + node][c];
                let gy = grads[1][e * mesh.nn() + node][c];
                assert!(
                    (gx - dv[c]).abs() < 1e-12,
                    "d v[{c}]/dx = {gx}, expected {}",
                    dv[c]
                );
                assert!(gy.abs() < 1e-12, "d v[{c}]/dy = {gy}, expected 0");
            }
        }
    }
}

#[test]
fn br1_face_jump_enters_through_central_average() {
    let p = params();
    let n = 2;
    let mesh = build_cartesian(
        2,
        1,
        Domain2 { x: [0.0, 2.0], y: [0.0, 1.0] },
        [true, true],
        n,
        1,
    )
    .unwrap();
    let ops = build_ops(n).unwrap();
    // Two constant states with a jump across the face.
    let qa = Primitive { rho: 1.0, v: [0.0; 3], p: 1.0, b: [0.0; 3], psi: 0.0 };
    let qb = Primitive { rho: 1.3, v: [0.1, 0.0, 0.0], p: 0.8, b: [0.1, 0.0, 0.0], psi: 0.0 };
    let mut sol = Solution::zeros(&mesh);
    for node in 0..mesh.nn() {
        sol.data[node] = prim_to_cons(&qa, &p).to_vec();
        sol.data[mesh.nn() + node] = prim_to_cons(&qb, &p).to_vec();
    }
    let mut pv = p;
    pv.mu_ns = 0.5;
    let mut asm = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::EsRusanov, TwoPointFluxKind::EsRusanov),
        true,
    );
    let alphas = vec![0.0; mesh.nelem()];
    let mut rhs = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    asm.evaluate(&sol, &pv, &alphas, &mut rhs).unwrap();
    let grads = asm.gradients();

    let va = entropy_vars_prim(&qa, &pv).0;
    let vb = entropy_vars_prim(&qb, &pv).0;
    let nn1 = n + 1;
    let geom = &mesh.elements[0];
    // Element 0, boundary node (N, j): J w_i g = ja * (vavg - v_own),
    // so g = ja (vb - va)/2 / (J w_N).
    for j in 0..nn1 {
        let node = n + nn1 * j;
        let ja = geom.ja[0][node][0];
        let jw = geom.jac[node] * ops.weights[n];
        for c in 0..NVARS {
            let expect = ja * 0.5 * (vb[c] - va[c]) / jw;
            let got = grads[0][node][c];
            assert!(
                (got - expect).abs() < 1e-12 * expect.abs().max(1.0),
                "boundary gradient {got} vs {expect}"
            );
        }
        // Interior nodes: zero gradient.
        for i in 1..n {
            let node = i + nn1 * j;
            for c in 0..NVARS {
                assert!(grads[0][node][c].abs() < 1e-13);
            }
        }
    }
}

#[test]
fn viscous_rhs_conservative_and_entropy_dissipative() {
    let mut p = params();
    p.mu_ns = 0.3;
    p.eta = 0.2;
    let n = 3;
    let mesh = build_cartesian(
        3,
        3,
        Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
        [true, true],
        n,
        1,
    )
    .unwrap();
    let ops = build_ops(n).unwrap();
    // Smooth data: perturbed uniform state.
    let ic = |xy: [f64; 2]| Primitive {
        rho: 1.0 + 0.2 * (2.0 * std::f64::consts::PI * xy[0]).sin() * (xy[1] * 4.0).cos(),
        v: [
            0.3 * (2.0 * std::f64::consts::PI * xy[1]).sin(),
            -0.1 * (2.0 * std::f64::consts::PI * xy[0]).cos(),
            0.05,
        ],
        p: 1.0 + 0.1 * (2.0 * std::f64::consts::PI * (xy[0] + xy[1])).cos(),
        b: [0.2, -0.1, 0.15],
        psi: 0.02,
    };
    let sol = Solution::from_ic(&mesh, &p, ic);
    let mut asm = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::Ec, TwoPointFluxKind::Ec),
        true,
    );
    let alphas = vec![0.0; mesh.nelem()];
    let mut rhs_visc = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    asm.evaluate(&sol, &p, &alphas, &mut rhs_visc).unwrap();

    // Subtract the inviscid part to isolate the viscous contribution.
    let mut p_inv = p;
    p_inv.mu_ns = 0.0;
    p_inv.eta = 0.0;
    let mut asm_inv = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::Ec, TwoPointFluxKind::Ec),
        false,
    );
    let mut rhs_inv = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    asm_inv.evaluate(&sol, &p_inv, &alphas, &mut rhs_inv).unwrap();

    let nn1 = n + 1;
    let mut visc_only = rhs_visc.clone();
    for (v, i) in visc_only.iter_mut().zip(&rhs_inv) {
        for c in 0..NVARS {
            v[c] -= i[c];
        }
    }
    // Conservation of every variable under the viscous terms alone.
    for c in 0..NVARS {
        let mut total = 0.0;
        for (e, geom) in mesh.elements.iter().enumerate() {
            for node in 0..mesh.nn() {
                let w = ops.weights[node % nn1] * ops.weights[node / nn1];
                total += w * geom.jac[node] * visc_only[e * mesh.nn() + node][c];
            }
        }
        assert!(total.abs() < 1e-12, "viscous terms not conservative in var {c}: {total:.3e}");
    }
    // Entropy contraction of the viscous terms is non-positive.
    let rate = entropy_rate(&mesh, &ops, &p, &sol, &visc_only);
    assert!(rate <= 1e-10, "viscous entropy rate {rate:.3e} > 0");

    // And identically zero viscous residual when mu = eta = 0.
    let mut asm0 = RhsAssembler::new(
        mesh.clone(),
        ops.clone(),
        fluxset(TwoPointFluxKind::Ec, TwoPointFluxKind::Ec),
        true,
    );
    let mut rhs0 = vec![[0.0; NVARS]; mesh.nelem() * mesh.nn()];
    asm0.evaluate(&sol, &p_inv, &alphas, &mut rhs0).unwrap();
    for (a, b) in rhs0.iter().zip(&rhs_inv) {
        for c in 0..NVARS {
            assert_eq!(a[c], b[c]);
        }
    }
}

/// The shared surface flux used by both operators is the metric-contracted
/// flux; sanity-check the EC/ES surface kinds against the kernel directly.
#[test]
fn surface_flux_kinds_consistent() {
    let p = params();
    let mut sampler = StateSampler::new(404);
    let (a, b) = sampler.pair(0.4);
    let n = [0.8, 0.3];
    let fec = surface_flux_metric(TwoPointFluxKind::Ec, &a, &b, n, &p);
    let expect = ec_flux_metric(&a, &b, n, &p);
    assert_eq!(fec, expect);
    // ES adds dissipation proportional to the jump.
    let fes = surface_flux_metric(TwoPointFluxKind::EsRusanov, &a, &b, n, &p);
    let diff: f64 = (0..NVARS).map(|c| (fes[c] - fec[c]).abs()).sum();
    assert!(diff > 0.0);
    // TVD-ES on faces equals ES (boundary nodes sit on the face).
    let ftvd = surface_flux_metric(TwoPointFluxKind::TvdEs, &a, &b, n, &p);
    assert_eq!(fes, ftvd);
}
