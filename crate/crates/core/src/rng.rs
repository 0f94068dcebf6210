//! Seeded counter-based random streams.
//!
//! A [`StreamRng`] is a ChaCha8 keystream selected by `(seed, stream)`;
//! Monte Carlo trial `t` of a run with seed `s` always draws from stream `t`,
//! so trials can be evaluated in any order or in parallel and still pool to
//! the same bits.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math;

#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        StreamRng {
            inner,
            spare_normal: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Standard normal deviate by the Box–Muller transform.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let angle = core::f64::consts::TAU * u2;
        self.spare_normal = Some(radius * math::sin(angle));
        radius * math::cos(angle)
    }

    #[inline]
    pub fn gaussian(&mut self, sd: f64) -> f64 {
        sd * self.normal()
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
