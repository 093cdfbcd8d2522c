//! Seeded splitmix-style generator.
//!
//! All randomness in the toolkit flows through this generator so that
//! every run is reproducible from the recorded seed. Ensemble members get
//! decorrelated streams via [`SplitMix64::stream`].

/// The standard splitmix64 state-update/mix constants.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Deterministic per-member stream for embarrassingly parallel ensembles.
    pub fn stream(seed: u64, member: u64) -> Self {
        let mut g = SplitMix64::new(seed ^ member.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        g.next_u64(); // decouple from the raw xor
        g
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by rejection (bound > 0).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform signed integer in `[-bound, bound]`.
    pub fn next_signed(&mut self, bound: i64) -> i64 {
        let span = (2 * bound + 1) as u64;
        self.next_below(span) as i64 - bound
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
