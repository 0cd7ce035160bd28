//! Multi-channel OOK/OFDM transmitter.
//!
//! The data path: payload bits are slot-coded ([`wur_encode`]), each 2 us
//! slot's active-channel pattern selects the per-channel sequences
//! ([`crate::seq::table1_select`]), the sequences are mapped onto one
//! common subcarrier grid ([`map_to_grid`]), and one IDFT per slot produces
//! the composite symbol ([`ofdm_symbol`]) with an LFSR-driven cyclic shift.
//! [`build_packet`] assembles legacy stub, SYNC, and data into a packet;
//! [`baseline_packet`] generates the per-channel reference waveforms for
//! comparison.

mod baseline;
mod grid;
mod lfsr;
mod ofdm;
mod packet;
mod wur;

pub use baseline::{baseline_packet, BaselineWaveform};
pub use grid::{map_to_grid, map_to_grid_with_os};
pub use lfsr::{lfsr_next3, LfsrState};
pub use ofdm::{ofdm_symbol, oversampled_body, OfdmSynthesizer};
pub use packet::{
    build_packet, build_packet_with_table, channel_slot_stream, LegacySpec, DEFAULT_SYNC_BITS,
};
pub use wur::{hypothesis_slots, wur_encode};

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// OFDM synthesis parameters.
///
/// Defaults: 128-point IDFT at 80 MHz base rate with a 32-sample (0.4 us)
/// cyclic prefix, 4x oversampled synthesis (320 MHz), and the four channel
/// centers at +/-10 and +/-30 MHz. One symbol then spans exactly one 2 us
/// ON/OFF slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformParams {
    pub idft_size: usize,
    pub cp_len: usize,
    pub base_rate: f64,
    pub oversample: usize,
    pub channel_center_bins: [i32; 4],
}

impl Default for WaveformParams {
    fn default() -> Self {
        Self {
            idft_size: 128,
            cp_len: 32,
            base_rate: 80e6,
            oversample: 4,
            channel_center_bins: [-48, -16, 16, 48],
        }
    }
}

impl WaveformParams {
    pub fn validate(&self) -> Result<()> {
        if !self.idft_size.is_power_of_two() || self.idft_size < 16 {
            return Err(Error::Config(
                "idft_size must be a power of two >= 16".into(),
            ));
        }
        if self.cp_len >= self.idft_size {
            return Err(Error::Config("cp_len must be smaller than idft_size".into()));
        }
        if self.oversample == 0 {
            return Err(Error::Config("oversample must be >= 1".into()));
        }
        if !(self.base_rate > 0.0) {
            return Err(Error::Config("base_rate must be positive".into()));
        }
        let half = self.idft_size as i32 / 2;
        let mut prev_hi = i32::MIN;
        for &c in &self.channel_center_bins {
            let (lo, hi) = (c - 3, c + 3);
            if lo <= -half || hi >= half {
                return Err(Error::Config(format!(
                    "channel footprint {lo}..{hi} exceeds the IDFT bandwidth"
                )));
            }
            if lo <= prev_hi {
                return Err(Error::Config(
                    "channel footprints overlap or are out of order".into(),
                ));
            }
            prev_hi = hi;
        }
        Ok(())
    }

    /// Synthesis sample rate in Hz.
    pub fn synth_rate(&self) -> f64 {
        self.base_rate * self.oversample as f64
    }

    /// IDFT body length in synthesis samples.
    pub fn body_samples(&self) -> usize {
        self.idft_size * self.oversample
    }

    pub fn cp_samples(&self) -> usize {
        self.cp_len * self.oversample
    }

    /// One OFDM symbol (CP + body); also the ON/OFF slot length.
    pub fn symbol_samples(&self) -> usize {
        self.body_samples() + self.cp_samples()
    }

    pub fn slot_samples(&self) -> usize {
        self.symbol_samples()
    }

    pub fn slot_duration(&self) -> f64 {
        self.slot_samples() as f64 / self.synth_rate()
    }

    /// Subcarrier spacing of the base-rate grid in Hz.
    pub fn bin_spacing(&self) -> f64 {
        self.base_rate / self.idft_size as f64
    }

    /// Channel center frequency in Hz.
    pub fn channel_center_hz(&self, channel: usize) -> f64 {
        self.channel_center_bins[channel] as f64 * self.bin_spacing()
    }
}

/// WUS data rate of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Rate {
    Hdr,
    Ldr,
}

impl Rate {
    /// Encoded slots per payload bit.
    pub fn slots_per_bit(self) -> usize {
        match self {
            Rate::Hdr => 2,
            Rate::Ldr => 8,
        }
    }

    /// SYNC field length in slots (the LDR SYNC repeats the sequence
    /// followed by its bit-inverse).
    pub fn sync_slots(self) -> usize {
        match self {
            Rate::Hdr => 32,
            Rate::Ldr => 64,
        }
    }
}

/// Whether the second OFDM symbol of an LDR ON pair repeats the first or
/// gets its own cyclic shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LdrSecondSymbol {
    #[default]
    Repeat,
    Independent,
}

/// One channel of a transmission plan.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelAssignment {
    pub rate: Option<Rate>,
    pub payload: Vec<bool>,
}

impl ChannelAssignment {
    pub fn inactive() -> Self {
        Self::default()
    }

    pub fn new(rate: Rate, payload: Vec<bool>) -> Self {
        Self {
            rate: Some(rate),
            payload,
        }
    }
}

/// Per-channel rates and payloads for one packet.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelPlan {
    pub channels: [ChannelAssignment; 4],
    pub ldr_second_symbol: LdrSecondSymbol,
}

impl ChannelPlan {
    pub fn validate(&self) -> Result<()> {
        for (i, ch) in self.channels.iter().enumerate() {
            if ch.rate.is_none() && !ch.payload.is_empty() {
                return Err(Error::Config(format!(
                    "channel {} is inactive but has payload bits",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn active_channels(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.channels[i].rate.is_some()).collect()
    }

    pub fn is_all_inactive(&self) -> bool {
        self.active_channels().is_empty()
    }
}

/// Complex baseband sample stream with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct IqSignal {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
}

impl IqSignal {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    pub fn validate_finite(&self) -> Result<()> {
        if self
            .samples
            .iter()
            .any(|s| !s.re.is_finite() || !s.im.is_finite())
        {
            return Err(Error::Signal("signal contains non-finite samples".into()));
        }
        Ok(())
    }
}

/// How one synthesized slot got its cyclic shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftSource {
    Lfsr(u8),
    RepeatPrevious,
    /// Baseline per-channel draw (shift value, channel index).
    PerChannel(u8, u8),
}

/// Shift-log entry for one synthesized ON slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotShift {
    pub slot: usize,
    pub shift: ShiftSource,
}

/// Slot layout of one channel inside a packet. Slot indices count 2 us
/// slots from the end of the legacy segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelLayout {
    pub rate: Rate,
    pub sync_slots: usize,
    pub data_slots: usize,
    pub payload_bits: usize,
}

impl ChannelLayout {
    pub fn data_start_slot(&self) -> usize {
        self.sync_slots
    }

    pub fn total_slots(&self) -> usize {
        self.sync_slots + self.data_slots
    }
}

/// Sample-accurate packet description: segment boundaries, per-channel slot
/// ranges, and the per-symbol cyclic-shift log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketLayout {
    pub sample_rate: f64,
    pub legacy_samples: usize,
    pub slot_samples: usize,
    pub total_slots: usize,
    pub total_samples: usize,
    pub channels: [Option<ChannelLayout>; 4],
    pub shift_log: Vec<SlotShift>,
}

impl PacketLayout {
    /// Start sample of a slot.
    pub fn slot_start(&self, slot: usize) -> usize {
        self.legacy_samples + slot * self.slot_samples
    }

    /// First slot index at which every active channel has finished SYNC.
    pub fn data_start_slot(&self) -> usize {
        self.channels
            .iter()
            .flatten()
            .map(|c| c.sync_slots)
            .max()
            .unwrap_or(0)
    }

    /// Sample range of the WUS portion (everything after the legacy stub).
    pub fn wus_range(&self) -> std::ops::Range<usize> {
        self.legacy_samples..self.total_samples
    }

    /// Sample range of the slots from [`Self::data_start_slot`] on.
    pub fn data_range(&self) -> std::ops::Range<usize> {
        self.slot_start(self.data_start_slot())..self.total_samples
    }
}
