//! Per-pattern sequence assignment for the four 20 MHz channels.
//!
//! Given which channels are ON during one OFDM symbol, [`table1_select`]
//! returns the frequency-domain sequence for each channel, built from the
//! base pair `a = (+,i,+)`, `b = (+,+,-)` via `f1 = (a,0,b)` and
//! `g1 = (a,0,-b)`:
//!
//! - one active channel: `f1` (channel 3 alone uses `g1`);
//! - two active channels: `(f1, g1)` in channel order;
//! - three contiguous channels: `(a,0,b)`, `(i a,0,b)`, `(a,0,-b)`;
//! - three non-contiguous channels (`1101`, `1011`): no complementary
//!   assignment exists on the QPSK alphabet; the middle channel carries a
//!   fixed published phase choice and the set is flagged `is_cs = false`
//!   (see [`crate::seq::qpsk_phase_search`] for the argmin);
//! - four channels: `(f1, g1, -f1, g1)`, the four-channel member of the
//!   doubly-recursed pair.
//!
//! Every non-zero entry keeps a zero at its middle element, which lands on
//! the per-channel DC tone after mapping.

use super::{ComplexSeq, GaussInt, GolayPair, I, NEG_I, NEG_ONE, ONE, ZERO};
use crate::error::{Error, Result};

/// The per-channel sequences for one symbol, plus whether the composite is
/// a certified complementary sequence (false exactly for the two starred
/// three-active patterns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSequenceSet {
    per_channel: [Option<ComplexSeq>; 4],
    is_cs: bool,
}

impl ChannelSequenceSet {
    pub fn new(per_channel: [Option<ComplexSeq>; 4], is_cs: bool) -> Result<Self> {
        let mut len = None;
        for entry in per_channel.iter().flatten() {
            if entry.len() % 2 == 0 {
                return Err(Error::InvalidSequence(
                    "channel sequences must have odd length".into(),
                ));
            }
            match len {
                None => len = Some(entry.len()),
                Some(l) if l != entry.len() => {
                    return Err(Error::LengthMismatch {
                        a: l,
                        b: entry.len(),
                    })
                }
                _ => {}
            }
            let mid = entry.len() / 2;
            for (idx, e) in entry.elements().iter().enumerate() {
                if idx == mid {
                    if !e.is_zero() {
                        return Err(Error::InvalidSequence(
                            "channel sequence must have a zero DC element".into(),
                        ));
                    }
                } else if !e.is_unit() {
                    return Err(Error::InvalidSequence(
                        "non-DC channel elements must be unimodular".into(),
                    ));
                }
            }
        }
        Ok(Self { per_channel, is_cs })
    }

    pub fn per_channel(&self) -> &[Option<ComplexSeq>; 4] {
        &self.per_channel
    }

    pub fn channel(&self, idx: usize) -> Option<&ComplexSeq> {
        self.per_channel[idx].as_ref()
    }

    pub fn is_cs(&self) -> bool {
        self.is_cs
    }

    pub fn active_channels(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.per_channel[i].is_some()).collect()
    }

    /// Length of the non-zero entries (all equal), if any.
    pub fn entry_len(&self) -> Option<usize> {
        self.per_channel.iter().flatten().next().map(|s| s.len())
    }

    /// Total energy over all channels.
    pub fn energy(&self) -> i64 {
        self.per_channel
            .iter()
            .flatten()
            .map(|s| s.energy())
            .sum()
    }
}

/// The two patterns with no QPSK complementary assignment.
pub const STARRED_PATTERNS: [[bool; 4]; 2] = [
    [true, true, false, true],
    [true, false, true, true],
];

pub fn is_starred(bits: [bool; 4]) -> bool {
    STARRED_PATTERNS.contains(&bits)
}

/// Sequence-assignment table parameterized by the base pair.
#[derive(Debug, Clone)]
pub struct Table1 {
    base: GolayPair,
}

impl Table1 {
    /// Build from a length-3 base pair. The pair itself is not re-verified
    /// here; run [`crate::seq::is_gcp`] (or construct a [`GolayPair`])
    /// upstream when the pair comes from configuration.
    pub fn new(base: GolayPair) -> Result<Self> {
        if base.len() != 3 {
            return Err(Error::Config(format!(
                "base pair must have length 3, got {}",
                base.len()
            )));
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &GolayPair {
        &self.base
    }

    /// `(theta_a * a, 0, theta_b * b)` as a single channel entry.
    fn entry(&self, theta_a: GaussInt, theta_b: GaussInt) -> ComplexSeq {
        let mut v = Vec::with_capacity(2 * self.base.len() + 1);
        v.extend(self.base.a().scaled(theta_a).elements());
        v.push(ZERO);
        v.extend(self.base.b().scaled(theta_b).elements());
        ComplexSeq::new(v).expect("non-empty")
    }

    fn f1(&self) -> ComplexSeq {
        self.entry(ONE, ONE)
    }

    fn g1(&self) -> ComplexSeq {
        self.entry(ONE, NEG_ONE)
    }

    /// The starred-row entry `(theta1 * a, 0, -theta2 * b)`.
    pub fn starred_entry(&self, theta1: GaussInt, theta2: GaussInt) -> ComplexSeq {
        self.entry(theta1, -theta2)
    }

    pub fn select(&self, bits: [bool; 4]) -> ChannelSequenceSet {
        let active: Vec<usize> = (0..4).filter(|&i| bits[i]).collect();
        let mut chans: [Option<ComplexSeq>; 4] = [None, None, None, None];
        let mut is_cs = true;

        match active.len() {
            0 => {}
            1 => {
                // channel 3 alone carries g1, the others f1
                chans[active[0]] = Some(if active[0] == 2 { self.g1() } else { self.f1() });
            }
            2 => {
                chans[active[0]] = Some(self.f1());
                chans[active[1]] = Some(self.g1());
            }
            3 => {
                let contiguous = active[2] - active[0] == 2;
                if contiguous {
                    // scaled copies (a_u * a, 0, b_u * b) per channel
                    for (u, &ch) in active.iter().enumerate() {
                        chans[ch] = Some(self.entry(self.base.a().get(u), self.base.b().get(u)));
                    }
                } else {
                    // published phase choices for the two starred patterns
                    is_cs = false;
                    let (theta1, theta2) = if bits == [true, true, false, true] {
                        (I, NEG_ONE)
                    } else {
                        (NEG_I, ONE)
                    };
                    chans[active[0]] = Some(self.f1());
                    chans[active[1]] = Some(self.starred_entry(theta1, theta2));
                    chans[active[2]] = Some(self.g1());
                }
            }
            _ => {
                chans[0] = Some(self.f1());
                chans[1] = Some(self.g1());
                chans[2] = Some(self.f1().negated());
                chans[3] = Some(self.g1());
            }
        }

        ChannelSequenceSet::new(chans, is_cs).expect("table entries satisfy the set invariants")
    }
}

impl Default for Table1 {
    fn default() -> Self {
        Self::new(GolayPair::base_pair()).expect("base pair has length 3")
    }
}

/// Table lookup with the default base pair.
pub fn table1_select(bits: [bool; 4]) -> ChannelSequenceSet {
    Table1::default().select(bits)
}
