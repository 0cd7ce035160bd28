//! Non-coherent envelope accumulation and WUR decoding.

use crate::error::{Error, Result};
use crate::waveform::{hypothesis_slots, IqSignal, PacketLayout};
use serde::Serialize;

/// Per-slot envelope accumulations and the decoded bits.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeDecision {
    /// `sum(|I| + |Q|)` per data slot of the decoded channel.
    pub slot_energy: Vec<f64>,
    pub bits: Vec<bool>,
    /// Winning minus losing accumulation per bit (non-negative).
    pub margins: Vec<f64>,
}

/// Decode one channel's payload from a channelized signal.
///
/// Slot timing comes straight from the transmit layout (ideal
/// synchronization); `offset_samples` shifts every slot window to absorb
/// the receive filter's group delay. The per-slot statistic is the sum of
/// absolute I and Q values; each bit decides for the hypothesis whose ON
/// slots accumulated more.
pub fn envelope_decode(
    signal: &IqSignal,
    layout: &PacketLayout,
    channel: usize,
    offset_samples: isize,
) -> Result<EnvelopeDecision> {
    let ch = layout.channels[channel]
        .as_ref()
        .ok_or_else(|| Error::Config(format!("channel {} is inactive", channel + 1)))?;

    // the channelized signal may run at a decimated rate
    let ratio = signal.sample_rate / layout.sample_rate;
    let scale = |samples: usize| -> usize { (samples as f64 * ratio).round() as usize };
    let slot_len = scale(layout.slot_samples);

    let mut slot_energy = Vec::with_capacity(ch.data_slots);
    for s in 0..ch.data_slots {
        let slot_index = ch.data_start_slot() + s;
        let start = scale(layout.slot_start(slot_index)) as isize
            + (offset_samples as f64 * ratio).round() as isize;
        let end = start + slot_len as isize;
        if start < 0 || end as usize > signal.len() {
            return Err(Error::Signal(format!(
                "slot {slot_index} window [{start}, {end}) outside the received signal"
            )));
        }
        let acc: f64 = signal.samples[start as usize..end as usize]
            .iter()
            .map(|c| c.re.abs() + c.im.abs())
            .sum();
        slot_energy.push(acc);
    }

    let (on0, on1) = hypothesis_slots(ch.rate);
    let group = ch.rate.slots_per_bit();
    let mut bits = Vec::with_capacity(ch.payload_bits);
    let mut margins = Vec::with_capacity(ch.payload_bits);
    for bit in 0..ch.payload_bits {
        let base = bit * group;
        let e0: f64 = on0.iter().map(|&o| slot_energy[base + o]).sum();
        let e1: f64 = on1.iter().map(|&o| slot_energy[base + o]).sum();
        bits.push(e1 > e0);
        margins.push((e1 - e0).abs());
    }

    Ok(EnvelopeDecision {
        slot_energy,
        bits,
        margins,
    })
}
