//! Fibonacci LFSR driving the per-symbol cyclic-shift randomization.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Linear feedback shift register. On each clock the output bit is the
/// XOR of the tapped register bits; the register shifts left and the output
/// re-enters at bit 0.
///
/// The default is the 802.11 scrambler generator `x^7 + x^4 + 1` with an
/// all-ones seed, which is maximal-length (period 127).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfsrState {
    register: u32,
    taps: u32,
    width: u32,
}

impl LfsrState {
    /// `taps` is a bitmask over register bits `0..width`; tap exponent `t`
    /// of the generator polynomial corresponds to bit `t - 1`.
    pub fn new(width: u32, taps: u32, seed: u32) -> Result<Self> {
        if width == 0 || width > 31 {
            return Err(Error::Config("LFSR width must be in 1..=31".into()));
        }
        let mask = (1u32 << width) - 1;
        if seed & mask == 0 {
            return Err(Error::Config("LFSR seed must be nonzero".into()));
        }
        if taps & mask == 0 {
            return Err(Error::Config("LFSR taps must be nonzero".into()));
        }
        Ok(Self {
            register: seed & mask,
            taps: taps & mask,
            width,
        })
    }

    /// `x^7 + x^4 + 1` with the given nonzero 7-bit seed.
    pub fn scrambler_80211(seed: u32) -> Result<Self> {
        Self::new(7, (1 << 6) | (1 << 3), seed)
    }

    pub fn register(&self) -> u32 {
        self.register
    }

    pub fn next_bit(&mut self) -> bool {
        let out = (self.register & self.taps).count_ones() & 1;
        let mask = (1u32 << self.width) - 1;
        self.register = ((self.register << 1) | out) & mask;
        out == 1
    }
}

impl Default for LfsrState {
    fn default() -> Self {
        Self::scrambler_80211(0x7f).expect("all-ones seed is nonzero")
    }
}

/// Clock the register three times and return the emitted bits as an integer
/// in `0..8` (first bit is the MSB).
pub fn lfsr_next3(state: &mut LfsrState) -> u8 {
    let mut shift = 0u8;
    for _ in 0..3 {
        shift = (shift << 1) | state.next_bit() as u8;
    }
    shift
}
