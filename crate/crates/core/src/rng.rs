//! Deterministic, platform-independent pseudo-random generator.
//!
//! All simulation randomness flows through [`Rng`], a xoshiro256** generator
//! (Blackman & Vigna, 2018). The recurrence, on four 64-bit words of state
//! `s[0..4]`, is:
//!
//! ```text
//! result = rotl(s[1] * 5, 7) * 9
//! t      = s[1] << 17
//! s[2] ^= s[0];  s[3] ^= s[1];  s[1] ^= s[2];  s[0] ^= s[3]
//! s[2] ^= t
//! s[3]  = rotl(s[3], 45)
//! ```
//!
//! State is expanded from a 64-bit seed with SplitMix64 (Steele, Lea &
//! Flood, 2014), whose n-th output is obtained by finalizing
//! `seed + n * 0x9E3779B97F4A7C15` with:
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z = z ^ (z >> 31)
//! ```
//!
//! The same finalizer serves as the per-replication seed mix ([`mix_seed`]).
//! Everything here is plain wrapping 64-bit integer arithmetic, so identical
//! seeds produce identical streams on every platform.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for replication `run_index` from the base seed.
///
/// This is the (run_index + 1)-th output of a SplitMix64 sequence started at
/// `seed`, which decorrelates per-run streams far better than sequential
/// seeding.
pub fn mix_seed(seed: u64, run_index: u64) -> u64 {
    splitmix64_finalize(seed.wrapping_add(run_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Seedable xoshiro256** generator. One instance is owned by each
/// [`MarketState`](crate::state::MarketState); simulation code never draws
/// from anywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    /// Expand a 64-bit seed into the four state words via SplitMix64.
    pub fn from_seed(seed: u64) -> Self {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_add(GOLDEN_GAMMA);
            splitmix64_finalize(state)
        };
        Rng {
            s: [next(), next(), next(), next()],
        }
    }

    /// Next 64-bit output; advances the state by exactly one step.
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// One uniform bit (one draw).
    pub fn next_bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }

    /// Uniform index in `0..n` using the multiply-shift reduction
    /// `(x * n) >> 64`; consumes exactly one draw.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle; consumes `xs.len() - 1` draws.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }
}
