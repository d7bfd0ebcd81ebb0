//! Counter-based random streams keyed by `(seed, path, step)`.
//!
//! Every draw is a strong 64-bit mix of a per-(seed, path, step) key with a
//! local counter, so streams are splittable and order-independent: the same
//! key always reproduces the same draws no matter how paths are partitioned
//! across threads.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream of draws for one `(seed, path, step)` triple.
#[derive(Clone, Debug)]
pub struct StepRng {
    key: u64,
    ctr: u64,
    cached_normal: Option<f64>,
}

impl StepRng {
    pub fn new(seed: u64, path: u64, step: u64) -> Self {
        let k = mix64(seed.wrapping_add(GAMMA))
            ^ mix64(path.wrapping_mul(0xC2B2_AE3D_27D4_EB4F).wrapping_add(GAMMA))
            ^ mix64(step.wrapping_mul(0x1656_67B1_9E37_79F9).wrapping_add(GAMMA));
        StepRng {
            key: mix64(k),
            ctr: 0,
            cached_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.ctr = self.ctr.wrapping_add(1);
        mix64(self.key.wrapping_add(self.ctr.wrapping_mul(GAMMA)))
    }

    /// Uniform in the open interval (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via Box-Muller; pairs are cached.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(v) = self.cached_normal.take() {
            return v;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(r * th.sin());
        r * th.cos()
    }

    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -self.uniform().ln() / rate
    }

    /// Poisson count by sequential inversion; intended for small means
    /// (per-step jump counts).
    pub fn poisson(&mut self, mean: f64) -> u32 {
        if mean <= 0.0 {
            return 0;
        }
        let l = (-mean).exp();
        let mut k = 0u32;
        let mut p = 1.0;
        loop {
            p *= self.uniform();
            if p <= l || k > 10_000 {
                return k;
            }
            k += 1;
        }
    }

    /// Uniform direction on the unit sphere.
    pub fn unit_vector(&mut self, out: &mut [f64]) {
        match out.len() {
            1 => out[0] = if self.next_u64() & 1 == 0 { 1.0 } else { -1.0 },
            2 => {
                let th = 2.0 * std::f64::consts::PI * self.uniform();
                out[0] = th.cos();
                out[1] = th.sin();
            }
            _ => loop {
                let mut n2 = 0.0;
                for v in out.iter_mut() {
                    *v = self.standard_normal();
                    n2 += *v * *v;
                }
                if n2 > 1e-24 {
                    let inv = 1.0 / n2.sqrt();
                    for v in out.iter_mut() {
                        *v *= inv;
                    }
                    return;
                }
            },
        }
    }
}
