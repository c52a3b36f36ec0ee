//! Modal shock indicator producing per-element blending coefficients, with
//! time relaxation and spatial propagation.

use crate::field::NodeCache;
use crate::mesh::Mesh;
use crate::numerics::SpectralOps;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Nodal quantity fed to the modal analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndicatorQuantity {
    #[default]
    Pressure,
    /// rho * p.
    RhoPressure,
}

/// How the per-stage blending coefficients are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndicatorMode {
    /// Modal indicator (the production path).
    Modal,
    /// Uniform random per element per stage, relaxation/propagation off
    /// (free-stream verification).
    Random,
    /// Fixed value everywhere (verification).
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorConfig {
    pub quantity: IndicatorQuantity,
    pub mode: IndicatorMode,
    /// Logistic sharpness.
    pub sharpness: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub relaxation: f64,
    pub propagation_sweeps: usize,
    pub relaxation_enabled: bool,
    pub propagation_enabled: bool,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        Self {
            quantity: IndicatorQuantity::Pressure,
            mode: IndicatorMode::Modal,
            sharpness: 9.21024,
            alpha_min: 0.01,
            alpha_max: 1.0,
            relaxation: 0.7,
            propagation_sweeps: 2,
            relaxation_enabled: true,
            propagation_enabled: true,
        }
    }
}

/// Threshold T(N) = 0.5 * 10^(-1.8 (N+1)^(1/4)).
pub fn threshold(n: usize) -> f64 {
    0.5 * 10f64.powf(-1.8 * (n as f64 + 1.0).powf(0.25))
}

/// Relative energy of the highest modes of a nodal element field.
///
/// In 2D the tensor modal coefficients are pooled by max(i, j) = N for the
/// first ratio and max(i, j) = N - 1 over the sub-block i, j <= N - 1 for the
/// second; this reduces to the 1D two-ratio formula on 1D-varying data.
pub fn modal_energy(field: &[f64], ops: &SpectralOps, dim: usize) -> f64 {
    let n = ops.n;
    let nn = n + 1;
    if dim == 1 {
        let mut coeffs = vec![0.0; nn];
        ops.nodal_to_modal(field, &mut coeffs);
        let sq: Vec<f64> = coeffs.iter().map(|c| c * c).collect();
        let total: f64 = sq.iter().sum();
        let top = if total > 0.0 { sq[n] / total } else { 0.0 };
        let second = if n >= 2 {
            let sub: f64 = sq[..n].iter().sum();
            if sub > 0.0 {
                sq[n - 1] / sub
            } else {
                0.0
            }
        } else {
            0.0
        };
        top.max(second)
    } else {
        // Tensor modal transform: rows then columns.
        let mut tmp = vec![0.0; nn * nn];
        let mut row_in = vec![0.0; nn];
        let mut row_out = vec![0.0; nn];
        for j in 0..nn {
            for i in 0..nn {
                row_in[i] = field[i + nn * j];
            }
            ops.nodal_to_modal(&row_in, &mut row_out);
            for i in 0..nn {
                tmp[i + nn * j] = row_out[i];
            }
        }
        let mut modal = vec![0.0; nn * nn];
        for i in 0..nn {
            for j in 0..nn {
                row_in[j] = tmp[i + nn * j];
            }
            ops.nodal_to_modal(&row_in, &mut row_out);
            for j in 0..nn {
                modal[i + nn * j] = row_out[j];
            }
        }
        let sq = |i: usize, j: usize| modal[i + nn * j] * modal[i + nn * j];
        let mut total = 0.0;
        let mut ring_n = 0.0;
        let mut sub = 0.0;
        let mut ring_nm1 = 0.0;
        for j in 0..nn {
            for i in 0..nn {
                let s = sq(i, j);
                total += s;
                if i.max(j) == n {
                    ring_n += s;
                }
                if i <= n - 1 && j <= n - 1 {
                    sub += s;
                    if n >= 2 && i.max(j) == n - 1 {
                        ring_nm1 += s;
                    }
                }
            }
        }
        let top = if total > 0.0 { ring_n / total } else { 0.0 };
        let second = if n >= 2 && sub > 0.0 { ring_nm1 / sub } else { 0.0 };
        top.max(second)
    }
}

/// Logistic blending coefficient from the modal energy, with the clipping to
/// {0} union [alpha_min, alpha_max].
pub fn alpha_from_energy(energy: f64, n: usize, config: &IndicatorConfig) -> f64 {
    let t = threshold(n);
    let alpha_tilde = 1.0 / (1.0 + (-config.sharpness / t * (energy - t)).exp());
    if alpha_tilde < config.alpha_min {
        0.0
    } else if alpha_tilde > config.alpha_max {
        config.alpha_max
    } else {
        alpha_tilde
    }
}

/// Time relaxation against the previous coefficients, then the configured
/// number of face-neighbor max-propagation sweeps (double-buffered), then the
/// final clip to {0} union [alpha_min, alpha_max].
pub fn relax_and_propagate(
    alphas: &mut [f64],
    mesh: &Mesh,
    previous: &[f64],
    config: &IndicatorConfig,
) {
    if config.relaxation_enabled {
        for (a, &prev) in alphas.iter_mut().zip(previous) {
            *a = a.max(config.relaxation * prev);
        }
    }
    if config.propagation_enabled {
        let mut buf = alphas.to_vec();
        for _ in 0..config.propagation_sweeps {
            for e in 0..mesh.nelem() {
                let mut a = alphas[e];
                for nb in mesh.neighbors(e) {
                    a = a.max(config.relaxation * alphas[nb]);
                }
                buf[e] = a;
            }
            alphas.copy_from_slice(&buf);
        }
    }
    for a in alphas.iter_mut() {
        if *a > config.alpha_max {
            *a = config.alpha_max;
        } else if *a < config.alpha_min {
            *a = 0.0;
        }
    }
}

/// Full indicator evaluation for one stage: nodal quantity, modal energy,
/// logistic map, relaxation and propagation.
pub fn evaluate_alphas(
    mesh: &Mesh,
    ops: &SpectralOps,
    cache: &NodeCache,
    previous: &[f64],
    config: &IndicatorConfig,
    rng: &mut ChaCha8Rng,
    out: &mut [f64],
) {
    match config.mode {
        IndicatorMode::Fixed(a) => {
            for o in out.iter_mut() {
                *o = a;
            }
        }
        IndicatorMode::Random => {
            for o in out.iter_mut() {
                *o = rng.gen_range(0.0..1.0);
            }
        }
        IndicatorMode::Modal => {
            let nn = mesh.nn();
            let mut field = vec![0.0; nn];
            for e in 0..mesh.nelem() {
                for (node, f) in field.iter_mut().enumerate() {
                    let q = &cache.prim[e * nn + node];
                    *f = match config.quantity {
                        IndicatorQuantity::Pressure => q.p,
                        IndicatorQuantity::RhoPressure => q.rho * q.p,
                    };
                }
                let energy = modal_energy(&field, ops, mesh.dim);
                out[e] = alpha_from_energy(energy, ops.n, config);
            }
            relax_and_propagate(out, mesh, previous, config);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cartesian, Domain2};
    use crate::numerics::build_ops;
    use approx::assert_relative_eq;

    #[test]
    fn threshold_value_at_n4() {
        assert_relative_eq!(threshold(4), 1.0172e-3, max_relative = 1e-4);
    }

    #[test]
    fn modal_energy_constant_and_top_mode() {
        let ops = build_ops(4).unwrap();
        assert_eq!(modal_energy(&[3.0; 5], &ops, 1), 0.0);
        // Pure top Legendre mode.
        let mut modal = vec![0.0; 5];
        modal[4] = 1.0;
        let mut nodal = vec![0.0; 5];
        ops.modal_to_nodal(&modal, &mut nodal);
        assert_relative_eq!(modal_energy(&nodal, &ops, 1), 1.0, max_relative = 1e-12);
        // L0 + 0.1 L_N: ratio 0.01/1.01.
        let mut modal = vec![0.0; 5];
        modal[0] = 1.0;
        modal[4] = 0.1;
        ops.modal_to_nodal(&modal, &mut nodal);
        assert_relative_eq!(
            modal_energy(&nodal, &ops, 1),
            0.01 / 1.01,
            max_relative = 1e-10
        );
    }

    #[test]
    fn modal_energy_2d_reduces_to_1d_for_x_varying_data() {
        let ops = build_ops(3).unwrap();
        let nn = 4;
        let line: Vec<f64> = ops.nodes.iter().map(|&x| 0.3 + x + 0.2 * x * x * x).collect();
        let mut field = vec![0.0; nn * nn];
        for j in 0..nn {
            for i in 0..nn {
                field[i + nn * j] = line[i];
            }
        }
        let e2 = modal_energy(&field, &ops, 2);
        let e1 = modal_energy(&line, &ops, 1);
        assert_relative_eq!(e2, e1, max_relative = 1e-12);
    }

    #[test]
    fn alpha_clipping_cases() {
        let cfg = IndicatorConfig::default();
        // E = 0 gives alpha_tilde about 1e-4, clipped to zero.
        let a0 = alpha_from_energy(0.0, 4, &cfg);
        assert_eq!(a0, 0.0);
        let t = threshold(4);
        let tilde = 1.0 / (1.0 + (cfg.sharpness).exp());
        assert_relative_eq!(tilde, 1e-4, max_relative = 2e-2);
        // E = T is the logistic midpoint.
        assert_relative_eq!(alpha_from_energy(t, 4, &cfg), 0.5, max_relative = 1e-12);
        // Large energy saturates at alpha_max.
        assert_eq!(alpha_from_energy(1.0, 4, &cfg), 1.0);
    }

    #[test]
    fn alpha_monotone_in_energy() {
        let cfg = IndicatorConfig::default();
        let mut prev = 0.0;
        for k in 0..200 {
            let e = k as f64 / 200.0;
            let a = alpha_from_energy(e, 5, &cfg);
            assert!(a + 1e-15 >= prev, "alpha not monotone at E = {e}");
            prev = a;
        }
    }

    #[test]
    fn relaxation_floor_and_two_sweep_propagation() {
        let mesh = build_cartesian(
            5,
            5,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [true, true],
            2,
            1,
        )
        .unwrap();
        let cfg = IndicatorConfig::default();

        // Relaxation: previous 1, new 0 -> 0.7.
        let mut alphas = vec![0.0; 25];
        let previous = vec![1.0; 25];
        relax_and_propagate(&mut alphas, &mesh, &previous, &cfg);
        for &a in &alphas {
            assert_relative_eq!(a, 0.7, max_relative = 1e-14);
        }

        // Isolated spike: ring 1 gets 0.7, ring 2 gets 0.49.
        let mut alphas = vec![0.0; 25];
        let center = mesh.elem_id(2, 2);
        alphas[center] = 1.0;
        let previous = vec![0.0; 25];
        relax_and_propagate(&mut alphas, &mesh, &previous, &cfg);
        assert_relative_eq!(alphas[center], 1.0);
        assert_relative_eq!(alphas[mesh.elem_id(3, 2)], 0.7);
        assert_relative_eq!(alphas[mesh.elem_id(1, 2)], 0.7);
        assert_relative_eq!(alphas[mesh.elem_id(2, 3)], 0.7);
        assert_relative_eq!(alphas[mesh.elem_id(4, 2)], 0.49);
        assert_relative_eq!(alphas[mesh.elem_id(2, 0)], 0.49);
        // Diagonal neighbors are two face-hops away.
        assert_relative_eq!(alphas[mesh.elem_id(3, 3)], 0.49);

        // Propagation disabled: output equals relaxed input.
        let mut cfg2 = cfg;
        cfg2.propagation_enabled = false;
        let mut alphas = vec![0.0; 25];
        alphas[center] = 1.0;
        relax_and_propagate(&mut alphas, &mesh, &previous, &cfg2);
        assert_relative_eq!(alphas[center], 1.0);
        assert_eq!(alphas[mesh.elem_id(3, 2)], 0.0);
    }

    #[test]
    fn propagation_never_decreases_and_invariant_holds() {
        let mesh = build_cartesian(
            4,
            4,
            Domain2 { x: [0.0, 1.0], y: [0.0, 1.0] },
            [true, true],
            2,
            1,
        )
        .unwrap();
        let cfg = IndicatorConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::SeedableRng;
        for _ in 0..50 {
            let alphas0: Vec<f64> = (0..16)
                .map(|_| {
                    let a: f64 = rng.gen_range(0.0..1.0);
                    if a < cfg.alpha_min {
                        0.0
                    } else {
                        a
                    }
                })
                .collect();
            let previous: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..1.0)).collect();
            let mut alphas = alphas0.clone();
            relax_and_propagate(&mut alphas, &mesh, &previous, &cfg);
            for (e, (&a, &a0)) in alphas.iter().zip(&alphas0).enumerate() {
                assert!(
                    a >= a0 - 1e-15 || a == 0.0,
                    "element {e} decreased from {a0} to {a}"
                );
                assert!(a == 0.0 || (cfg.alpha_min..=cfg.alpha_max).contains(&a));
            }
        }
    }
}
