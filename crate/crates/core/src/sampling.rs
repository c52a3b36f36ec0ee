//! Seeded random admissible states for verification suites and tests.
//!
//! States are drawn with physically consistent scalings: velocities scale with
//! the sound speed and magnetic fields with the gas pressure, so that entropy
//! identities can be checked near round-off even when density and pressure
//! span several orders of magnitude.

use crate::physics::{prim_to_cons, PhysParams, Primitive, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct StateSampler {
    rng: ChaCha8Rng,
    /// log10 range of density and pressure.
    pub log_rho: (f64, f64),
    pub log_p: (f64, f64),
    /// Mach-number range for the velocity magnitude.
    pub mach: (f64, f64),
    /// Plasma-beta range (gas pressure over magnetic pressure).
    pub plasma_beta: (f64, f64),
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            log_rho: (-0.7, 0.7),
            log_p: (-0.7, 0.7),
            mach: (0.0, 1.5),
            plasma_beta: (0.5, 20.0),
        }
    }

    /// Sampler whose density and pressure each span six orders of magnitude.
    pub fn wide(seed: u64) -> Self {
        let mut s = Self::new(seed);
        s.log_rho = (-3.0, 3.0);
        s.log_p = (-3.0, 3.0);
        s
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn unit_vector(&mut self) -> [f64; 3] {
        loop {
            let v = [
                self.rng.gen_range(-1.0..1.0),
                self.rng.gen_range(-1.0..1.0),
                self.rng.gen_range(-1.0..1.0),
            ];
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                let n = n2.sqrt();
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    pub fn primitive(&mut self) -> Primitive {
        let gamma = 5.0 / 3.0;
        let rho = 10f64.powf(self.uniform(self.log_rho.0, self.log_rho.1));
        let p = 10f64.powf(self.uniform(self.log_p.0, self.log_p.1));
        let a = (gamma * p / rho).sqrt();
        let mach = self.uniform(self.mach.0, self.mach.1);
        let vdir = self.unit_vector();
        let bdir = self.unit_vector();
        let beta_pl = self.uniform(self.plasma_beta.0, self.plasma_beta.1);
        let bmag = (2.0 * p / beta_pl).sqrt();
        let psi = self.uniform(-0.5, 0.5) * bmag;
        Primitive {
            rho,
            v: [mach * a * vdir[0], mach * a * vdir[1], mach * a * vdir[2]],
            p,
            b: [bmag * bdir[0], bmag * bdir[1], bmag * bdir[2]],
            psi,
        }
    }

    pub fn state(&mut self, params: &PhysParams) -> State {
        prim_to_cons(&self.primitive(), params)
    }

    /// A pair of states at a shared magnitude scale: the second is a bounded
    /// relative perturbation of the first. `spread` around 1 gives O(1) jumps;
    /// tiny values exercise the near-equal branches of the stable means.
    pub fn pair(&mut self, spread: f64) -> (Primitive, Primitive) {
        let a = self.primitive();
        let mut b = a;
        let f = 1.0 + self.uniform(-spread, spread);
        b.rho *= f.abs().max(0.1);
        b.p *= (1.0 + self.uniform(-spread, spread)).abs().max(0.1);
        for k in 0..3 {
            b.v[k] += self.uniform(-spread, spread) * (a.p / a.rho).sqrt();
            b.b[k] += self.uniform(-spread, spread) * a.b[k].abs().max(0.3 * (a.p).sqrt());
        }
        b.psi += self.uniform(-spread, spread) * a.psi.abs().max(0.3 * (a.p).sqrt());
        (a, b)
    }
}
