//! Seeded randomness.
//!
//! Every random construction draws from [`SeededRng`], a PCG XSL-RR 128/64
//! generator (`rand_pcg::Pcg64`, O'Neill's LCG128 with XSL-RR output)
//! initialised by `SeedableRng::seed_from_u64`. Derived quantities use only
//! `next_u64` and the documented reductions below, so a stream is
//! reproducible from its seed by any implementation of the same generator:
//!
//! * `below(n)`: rejection sampling. Draw `x = next_u64()`; accept when
//!   `x < 2^64 - (2^64 mod n)` and return `x mod n`.
//! * `unit_f64()`: `(next_u64() >> 11) · 2^-53`.
//! * `choose(n, k)`: partial Fisher-Yates on `0..n`; step `i` swaps slot `i`
//!   with slot `i + below(n - i)`; the first `k` slots are the sample, in
//!   draw order.

use rand_core::{RngCore, SeedableRng};
use rand_pcg::Pcg64;

#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: Pcg64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: Pcg64::seed_from_u64(seed),
        }
    }

    /// Independent stream for worker `stream` of a run seeded with `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut mixer = SeededRng::new(seed ^ 0x9E37_79B9_7F4A_7C15);
        for _ in 0..=stream % 7 {
            mixer.next_u64();
        }
        SeededRng::new(mixer.next_u64().wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return (x % n) as usize;
            }
        }
    }

    pub fn bit(&mut self) -> usize {
        self.below(2)
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `k` distinct values from `0..n`, in draw order.
    pub fn choose(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
