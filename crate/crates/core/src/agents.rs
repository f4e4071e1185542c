//! Workers, firms, and the two occupations.
//!
//! Two bit positions carry concrete meaning; the rest are abstract traits or
//! requirements:
//!
//! - bit 0 (`GENDER_BIT`): worker gender / firm gender preference
//!   (0 = woman / prefers women, 1 = man / prefers men)
//! - bit 1 (`OCC_BIT`): worker preferred-occupation gender label / firm's
//!   occupation over-representation label
//!
//! Putting worker gender and firm gender preference at the same index makes
//! plain overlap implement gendered matching with no special-case code.

use crate::bits::BitString;

/// Bit index of gender (workers) and gender preference (firms).
pub const GENDER_BIT: usize = 0;
/// Bit index of the occupation gender label (firms) and the preferred
/// occupation label (workers).
pub const OCC_BIT: usize = 1;

/// Gender encoding of bit 0.
pub const WOMAN: u8 = 0;
pub const MAN: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorkerId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FirmId(pub u32);

/// The two occupations of the market. A is anchored to "dental assistant"
/// (initially over-represented by women), B to "civil engineer" (initially
/// over-represented by men).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Occupation {
    A,
    B,
}

impl Occupation {
    pub const ALL: [Occupation; 2] = [Occupation::A, Occupation::B];

    pub fn index(self) -> usize {
        match self {
            Occupation::A => 0,
            Occupation::B => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Occupation::A => "dental_assistant",
            Occupation::B => "civil_engineer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Worker {
    pub id: WorkerId,
    pub bits: BitString,
    /// Cumulative payoff H; the worker is replaced once it falls below zero.
    pub happiness: f64,
    /// True for workers whose occupation preference (bit 1) tracks their own
    /// gender and follows label flips.
    pub has_gendered_preference: bool,
}

impl Worker {
    pub fn gender(&self) -> u8 {
        self.bits.get(GENDER_BIT)
    }

    pub fn is_man(&self) -> bool {
        self.gender() == MAN
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Firm {
    pub id: FirmId,
    pub bits: BitString,
    /// Cumulative payoff C; the firm exits the market once it falls below
    /// zero and is never replaced.
    pub capital: f64,
    pub occupation: Occupation,
    pub alive: bool,
}

impl Firm {
    pub fn gender_preference(&self) -> u8 {
        self.bits.get(GENDER_BIT)
    }
}
