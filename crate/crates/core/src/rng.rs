//! `ctr-splitmix64/1`: a counter-based, splittable generator defined by its
//! algorithm so seeded runs reproduce across implementations.
//!
//! A stream is a 64-bit key. Output `i` of a stream is
//! `mix(key + (i + 1)·γ)` where `γ = 0x9E3779B97F4A7C15` and `mix` is the
//! SplitMix64 finalizer. The key of child stream `id` under parent key `k` is
//! `mix(k ^ mix(id + γ))`; the root key for a seed `s` is `mix(s)`.
//!
//! Derived draws:
//! - `below(n)`: rejection sampling, accept `v < 2^64 − (2^64 mod n)`, return `v mod n`.
//! - `unit()`: `(v >> 11) · 2^-53`.
//! - `sample_distinct(n, k)`: the first `k` positions of a Fisher–Yates shuffle of
//!   `0..n`, position `i` swapping with `i + below(n − i)`.

pub const ALGORITHM: &str = "ctr-splitmix64/1";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            key: mix(seed),
            counter: 0,
        }
    }

    /// Independent child stream; does not advance `self`.
    pub fn stream(&self, id: u64) -> Self {
        Self {
            key: mix(self.key ^ mix(id.wrapping_add(GAMMA))),
            counter: 0,
        }
    }

    /// Shorthand for `from_seed(seed).stream(id)`, the per-trial stream.
    pub fn for_trial(seed: u64, id: u64) -> Self {
        Self::from_seed(seed).stream(id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, n)`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % n;
            }
        }
    }

    pub fn below_usize(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        match (hi - lo).checked_add(1) {
            Some(span) => lo + self.below(span),
            None => self.next_u64(),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// `k` distinct values from `0..n`, in draw order.
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct values from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below_usize(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values_are_stable() {
        // Frozen outputs: changing these breaks seeded reproducibility.
        let mut r = CounterRng::from_seed(0);
        let first: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        let mut again = CounterRng::from_seed(0);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_eq!(mix(0), 0);
        assert_eq!(mix(GAMMA), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn streams_differ() {
        let root = CounterRng::from_seed(7);
        let mut a = root.stream(0);
        let mut b = root.stream(1);
        assert_ne!(a.next_u64(), b.next_u64());
        let mut c = CounterRng::for_trial(7, 1);
        let mut d = root.stream(1);
        assert_eq!(c.next_u64(), d.next_u64());
    }

    #[test]
    fn bounded_draws_in_range() {
        let mut r = CounterRng::from_seed(42);
        let mut hist = [0u32; 7];
        for _ in 0..7000 {
            hist[r.below_usize(7)] += 1;
        }
        assert!(hist.iter().all(|&h| (800..1200).contains(&h)), "{hist:?}");
        for _ in 0..1000 {
            let u = r.unit();
            assert!((0.0..1.0).contains(&u));
            let v = r.range_inclusive(3, 5);
            assert!((3..=5).contains(&v));
        }
    }

    #[test]
    fn distinct_sampling() {
        let mut r = CounterRng::from_seed(1);
        let mut s = r.sample_distinct(50, 20);
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|&x| x < 50));
        assert_eq!(r.sample_distinct(5, 5).len(), 5);
    }
}
