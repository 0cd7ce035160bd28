//! Packet assembly: legacy stub, per-channel SYNC, WUR-encoded data.

use super::{
    lfsr_next3, map_to_grid, wur_encode, ChannelLayout, ChannelPlan, IqSignal, LdrSecondSymbol,
    LfsrState, OfdmSynthesizer, PacketLayout, Rate, ShiftSource, SlotShift, WaveformParams,
};
use crate::error::{Error, Result};
use crate::seq::Table1;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default SYNC field: the first 32 output bits of the default LFSR
/// (`x^7 + x^4 + 1`, all-ones seed). An arbitrary but fixed constant;
/// override it from configuration when a specific sequence is required.
pub const DEFAULT_SYNC_BITS: [bool; 32] = [
    false, false, false, false, true, true, true, false, true, true, true, true, false, false,
    true, false, true, true, false, false, true, false, false, true, false, false, false, false,
    false, false, true, false,
];

/// The legacy preamble is opaque to everything measured here; only its
/// duration and average power matter. It can be synthesized as a 20 us
/// in-band placeholder or supplied as raw IQ.
#[derive(Debug, Clone)]
pub enum LegacySpec {
    /// OFDM-like filler on the four channel footprints, power-matched to
    /// the packet's ON signal.
    Placeholder { seed: u64 },
    /// Caller-provided IQ at the synthesis rate, used as-is.
    Provided(Vec<Complex64>),
}

impl Default for LegacySpec {
    fn default() -> Self {
        LegacySpec::Placeholder { seed: 0 }
    }
}

const LEGACY_DURATION: f64 = 20e-6;

/// Per-channel slot stream: SYNC (HDR: the 32-bit sequence as-is; LDR: the
/// sequence followed by its bit-inverse, still on 2 us slots) followed by
/// the WUR-encoded payload.
pub fn channel_slot_stream(assignment_rate: Rate, payload: &[bool], sync: &[bool]) -> Vec<bool> {
    let mut slots = Vec::new();
    match assignment_rate {
        Rate::Hdr => slots.extend_from_slice(sync),
        Rate::Ldr => {
            slots.extend_from_slice(sync);
            slots.extend(sync.iter().map(|b| !b));
        }
    }
    slots.extend(wur_encode(payload, assignment_rate));
    slots
}

/// True when slot `t` of an LDR channel is the second half of a data ON
/// pair (so the symbol may simply repeat).
fn is_ldr_second_half(rate: Rate, sync_slots: usize, t: usize, stream: &[bool]) -> bool {
    if rate != Rate::Ldr || t < sync_slots + 1 {
        return false;
    }
    (t - sync_slots) % 2 == 1 && stream[t] && stream[t - 1]
}

/// Assemble one Golay-based packet.
///
/// Every ON slot is one composite OFDM symbol: the slot's active-channel
/// pattern selects the per-channel sequences, the channels are summed on a
/// common grid, and the IDFT output is cyclically shifted by the next
/// 3-bit LFSR word. OFF slots are exact silence. With
/// [`LdrSecondSymbol::Repeat`] the second symbol of a pure-LDR ON pair is a
/// sample-exact copy of the first (no LFSR clock); any slot that mixes in
/// an HDR channel is synthesized fresh.
pub fn build_packet(
    plan: &ChannelPlan,
    sync_seq: &[bool],
    lfsr: LfsrState,
    legacy: &LegacySpec,
    params: &WaveformParams,
) -> Result<(IqSignal, PacketLayout)> {
    build_packet_with_table(&Table1::default(), plan, sync_seq, lfsr, legacy, params)
}

pub fn build_packet_with_table(
    table: &Table1,
    plan: &ChannelPlan,
    sync_seq: &[bool],
    mut lfsr: LfsrState,
    legacy: &LegacySpec,
    params: &WaveformParams,
) -> Result<(IqSignal, PacketLayout)> {
    params.validate()?;
    plan.validate()?;
    if sync_seq.len() != 32 {
        return Err(Error::Config(format!(
            "SYNC sequence must have 32 bits, got {}",
            sync_seq.len()
        )));
    }

    let rate = params.synth_rate();
    let slot_samples = params.slot_samples();
    let synth = OfdmSynthesizer::new(params.clone())?;

    let mut streams: [Vec<bool>; 4] = [vec![], vec![], vec![], vec![]];
    let mut layouts: [Option<ChannelLayout>; 4] = [None, None, None, None];
    for ch in 0..4 {
        if let Some(r) = plan.channels[ch].rate {
            let payload = &plan.channels[ch].payload;
            streams[ch] = channel_slot_stream(r, payload, sync_seq);
            layouts[ch] = Some(ChannelLayout {
                rate: r,
                sync_slots: r.sync_slots(),
                data_slots: payload.len() * r.slots_per_bit(),
                payload_bits: payload.len(),
            });
        }
    }
    let total_slots = streams.iter().map(|s| s.len()).max().unwrap_or(0);

    let legacy_samples = match legacy {
        LegacySpec::Placeholder { .. } => (LEGACY_DURATION * rate).round() as usize,
        LegacySpec::Provided(iq) => iq.len(),
    };
    let total_samples = legacy_samples + total_slots * slot_samples;
    let mut samples = vec![Complex64::new(0.0, 0.0); total_samples];

    let mut shift_log = Vec::new();
    let mut prev_pattern = [false; 4];
    let mut prev_symbol: Vec<Complex64> = Vec::new();
    let mut on_slots = 0usize;
    let mut on_energy = 0.0f64;

    for t in 0..total_slots {
        let mut pattern = [false; 4];
        for ch in 0..4 {
            pattern[ch] = streams[ch].get(t).copied().unwrap_or(false);
        }
        if pattern.iter().all(|&p| !p) {
            prev_pattern = pattern;
            continue;
        }

        let repeat = plan.ldr_second_symbol == LdrSecondSymbol::Repeat
            && pattern == prev_pattern
            && !prev_symbol.is_empty()
            && (0..4).all(|ch| {
                !pattern[ch]
                    || is_ldr_second_half(
                        layouts[ch].as_ref().expect("active channel").rate,
                        layouts[ch].as_ref().expect("active channel").sync_slots,
                        t,
                        &streams[ch],
                    )
            });

        let symbol = if repeat {
            shift_log.push(SlotShift {
                slot: t,
                shift: ShiftSource::RepeatPrevious,
            });
            prev_symbol.clone()
        } else {
            let set = table.select(pattern);
            let grid = map_to_grid(&set, params)?;
            let shift = lfsr_next3(&mut lfsr);
            shift_log.push(SlotShift {
                slot: t,
                shift: ShiftSource::Lfsr(shift),
            });
            synth.symbol(&grid, shift)?
        };

        let start = legacy_samples + t * slot_samples;
        on_energy += symbol.iter().map(|s| s.norm_sqr()).sum::<f64>();
        on_slots += 1;
        samples[start..start + symbol.len()].copy_from_slice(&symbol);
        prev_symbol = symbol;
        prev_pattern = pattern;
    }

    let on_power = if on_slots > 0 {
        on_energy / (on_slots * slot_samples) as f64
    } else {
        1.0
    };
    match legacy {
        LegacySpec::Provided(iq) => samples[..legacy_samples].copy_from_slice(iq),
        LegacySpec::Placeholder { seed } => {
            let stub = legacy_placeholder(&synth, params, *seed, legacy_samples, on_power)?;
            samples[..legacy_samples].copy_from_slice(&stub);
        }
    }

    let layout = PacketLayout {
        sample_rate: rate,
        legacy_samples,
        slot_samples,
        total_slots,
        total_samples,
        channels: layouts,
        shift_log,
    };
    Ok((IqSignal::new(samples, rate), layout))
}

/// In-band OFDM-like filler: random QPSK on every channel's six tones,
/// tiled symbol by symbol and scaled to the requested average power.
pub(crate) fn legacy_placeholder(
    synth: &OfdmSynthesizer,
    params: &WaveformParams,
    seed: u64,
    len: usize,
    target_power: f64,
) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = params.body_samples();
    let half = params.idft_size as i64 / 2;
    let qpsk = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];

    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let mut grid = vec![Complex64::new(0.0, 0.0); total];
        for &center in &params.channel_center_bins {
            for off in [-3i64, -2, -1, 1, 2, 3] {
                let bin = center as i64 + off;
                debug_assert!(bin >= -half && bin < half);
                grid[bin.rem_euclid(total as i64) as usize] = qpsk[rng.gen_range(0..4)];
            }
        }
        let sym = synth.symbol(&grid, 0)?;
        let take = sym.len().min(len - out.len());
        out.extend_from_slice(&sym[..take]);
    }

    let power = out.iter().map(|s| s.norm_sqr()).sum::<f64>() / out.len() as f64;
    if power > 0.0 {
        let scale = (target_power / power).sqrt();
        for s in &mut out {
            *s *= scale;
        }
    }
    Ok(out)
}
