//! Fixed-length bit-string characteristics and the overlap similarity.
//!
//! Every agent carries ten binary characteristics. The overlap between two
//! strings is the fraction of positions where they agree, so it always lies
//! on the grid {0, 0.1, ..., 1.0}. Matching compares overlaps through the
//! integer position count ([`matching_bits`]) and only converts to a float at
//! the edges, which keeps comparisons exact.

use std::fmt;
use std::str::FromStr;

use crate::rng::Rng;

/// Number of characteristics per agent.
pub const BITS: usize = 10;

const MASK: u16 = (1 << BITS) - 1;

/// Ten ordered bits, index 0 through 9, packed into a `u16`.
/// Index 0 is the least significant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString(u16);

impl BitString {
    pub fn zeros() -> Self {
        BitString(0)
    }

    pub fn from_array(bits: [u8; BITS]) -> Self {
        let mut v = 0u16;
        for (i, &b) in bits.iter().enumerate() {
            debug_assert!(b <= 1);
            v |= u16::from(b & 1) << i;
        }
        BitString(v)
    }

    /// Draw all ten bits i.i.d. uniform; consumes exactly ten rng draws,
    /// one per bit in index order.
    pub fn random(rng: &mut Rng) -> Self {
        let mut v = 0u16;
        for i in 0..BITS {
            v |= u16::from(rng.next_bit()) << i;
        }
        BitString(v)
    }

    pub fn get(&self, i: usize) -> u8 {
        assert!(i < BITS);
        ((self.0 >> i) & 1) as u8
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(i < BITS);
        debug_assert!(bit <= 1);
        self.0 = (self.0 & !(1 << i)) | (u16::from(bit & 1) << i);
    }

    pub fn flipped(&self, i: usize) -> Self {
        assert!(i < BITS);
        BitString(self.0 ^ (1 << i))
    }

    pub fn complement(&self) -> Self {
        BitString(!self.0 & MASK)
    }

    pub fn to_array(self) -> [u8; BITS] {
        let mut out = [0u8; BITS];
        for (i, b) in out.iter_mut().enumerate() {
            *b = ((self.0 >> i) & 1) as u8;
        }
        out
    }
}

/// Number of positions where the two strings agree.
pub fn matching_bits(a: BitString, b: BitString) -> u32 {
    BITS as u32 - (a.0 ^ b.0).count_ones()
}

/// Overlap q: fraction of equal positions, in [0, 1] on the 1/10 grid.
/// Symmetric in its arguments.
pub fn overlap(a: BitString, b: BitString) -> f64 {
    f64::from(matching_bits(a, b)) / BITS as f64
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..BITS {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Parse from a ten-character string of '0'/'1'; character 0 is bit 0.
impl FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != BITS {
            return Err(format!("expected {BITS} bits, got {}", s.len()));
        }
        let mut v = 0u16;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << i,
                _ => return Err(format!("invalid bit character '{c}'")),
            }
        }
        Ok(BitString(v))
    }
}
