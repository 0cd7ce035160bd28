//! Frequency-domain-sequence baseline waveforms.
//!
//! Unlike the Golay path, each channel here is generated independently and
//! the channels are summed in the time domain: HDR ON signals come from a
//! 1.6 us IDFT with a 0.4 us cyclic prefix, LDR ON signals from a 3.2 us
//! IDFT with a 0.8 us prefix, each cyclically shifted by one of 8 uniform
//! offsets drawn per channel, with a fixed per-channel phase rotation
//! applied before summing.
//!
//! The draft's example sequences are not public, so the frequency-domain
//! sequences are configuration inputs; [`BaselineWaveform::placeholder`]
//! supplies seeded random unimodular stand-ins with a zero center tone.

use super::{
    wur_encode, ChannelLayout, ChannelPlan, IqSignal, PacketLayout, Rate, ShiftSource, SlotShift,
    WaveformParams,
};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

/// Per-example baseline description: the HDR and LDR frequency-domain
/// sequences plus the per-channel phase rotations.
#[derive(Debug, Clone)]
pub struct BaselineWaveform {
    pub hdr_seq: Vec<Complex64>,
    pub ldr_seq: Vec<Complex64>,
    /// Default: the 80 MHz per-20MHz-subblock rotations `(+1, -1, -1, -1)`.
    pub phase_rotations: [Complex64; 4],
}

pub const DEFAULT_PHASE_ROTATIONS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(-1.0, 0.0),
];

impl BaselineWaveform {
    pub fn new(hdr_seq: Vec<Complex64>, ldr_seq: Vec<Complex64>) -> Result<Self> {
        for (name, seq) in [("hdr", &hdr_seq), ("ldr", &ldr_seq)] {
            if seq.len() < 3 || seq.len() % 2 == 0 {
                return Err(Error::Config(format!(
                    "{name} baseline sequence must have odd length >= 3"
                )));
            }
            if seq[seq.len() / 2].norm_sqr() != 0.0 {
                return Err(Error::Config(format!(
                    "{name} baseline sequence must have a zero center tone"
                )));
            }
            if seq.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} baseline sequence has non-finite elements"
                )));
            }
        }
        Ok(Self {
            hdr_seq,
            ldr_seq,
            phase_rotations: DEFAULT_PHASE_ROTATIONS,
        })
    }

    /// Seeded random unimodular sequences standing in for the draft's
    /// example sequences: example 2 uses the short (7-tone) HDR sequence,
    /// examples 1 and 3 the wide (13-tone) one; LDR is always 13 tones.
    pub fn placeholder(example_id: u8, seed: u64) -> Result<Self> {
        let hdr_len = match example_id {
            1 | 3 => 13,
            2 => 7,
            other => {
                return Err(Error::Config(format!(
                    "baseline example id must be 1, 2 or 3, got {other}"
                )))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (example_id as u64) << 56);
        Ok(Self {
            hdr_seq: random_unimodular(hdr_len, &mut rng),
            ldr_seq: random_unimodular(13, &mut rng),
            phase_rotations: DEFAULT_PHASE_ROTATIONS,
        })
    }
}

fn random_unimodular(len: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut seq: Vec<Complex64> = (0..len)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    seq[len / 2] = Complex64::new(0.0, 0.0);
    seq
}

struct OnSymbolGen {
    body: usize,
    cp: usize,
    ifft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    scale: f64,
    center_bin_factor: i64,
}

impl OnSymbolGen {
    fn new(params: &WaveformParams, rate: Rate) -> Self {
        // HDR: the base IDFT duration; LDR: twice it (half the spacing)
        let mult = match rate {
            Rate::Hdr => 1,
            Rate::Ldr => 2,
        };
        let body = params.body_samples() * mult;
        Self {
            body,
            cp: params.cp_samples() * mult,
            ifft: FftPlanner::new().plan_fft_inverse(body),
            scale: 1.0 / (body as f64).sqrt(),
            center_bin_factor: mult as i64,
        }
    }

    fn on_symbol(
        &self,
        seq: &[Complex64],
        center_bin: i32,
        shift8: u8,
        rotation: Complex64,
    ) -> Result<Vec<Complex64>> {
        let center = center_bin as i64 * self.center_bin_factor;
        let offset = seq.len() as i64 / 2;
        let mut grid = vec![Complex64::new(0.0, 0.0); self.body];
        for (idx, &v) in seq.iter().enumerate() {
            let bin = center - offset + idx as i64;
            if bin.unsigned_abs() as usize >= self.body / 2 {
                return Err(Error::Config(
                    "baseline sequence footprint exceeds the IDFT bandwidth".into(),
                ));
            }
            grid[bin.rem_euclid(self.body as i64) as usize] = v;
        }
        self.ifft.process(&mut grid);
        for s in &mut grid {
            *s *= self.scale * rotation;
        }
        grid.rotate_right(shift8 as usize * (self.body / 8));
        let mut out = Vec::with_capacity(self.cp + self.body);
        out.extend_from_slice(&grid[self.body - self.cp..]);
        out.extend_from_slice(&grid);
        Ok(out)
    }
}

/// Assemble one baseline packet. Structure (legacy, SYNC, WUR-coded data)
/// mirrors [`super::build_packet`]; only the ON-signal generation differs.
/// The SYNC field uses the HDR ON waveform on every channel; LDR data bits
/// occupy 4 us ON/OFF units, i.e. pairs of 2 us slots.
pub fn baseline_packet(
    plan: &ChannelPlan,
    waveform: &BaselineWaveform,
    sync_seq: &[bool],
    shift_seed: u64,
    legacy: &super::LegacySpec,
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

    let rate_hz = params.synth_rate();
    let slot_samples = params.slot_samples();
    let hdr_gen = OnSymbolGen::new(params, Rate::Hdr);
    let ldr_gen = OnSymbolGen::new(params, Rate::Ldr);

    let mut layouts: [Option<ChannelLayout>; 4] = [None, None, None, None];
    let mut streams: [Vec<bool>; 4] = [vec![], vec![], vec![], vec![]];
    for ch in 0..4 {
        if let Some(r) = plan.channels[ch].rate {
            let payload = &plan.channels[ch].payload;
            let mut slots: Vec<bool> = Vec::new();
            match r {
                Rate::Hdr => slots.extend_from_slice(sync_seq),
                Rate::Ldr => {
                    slots.extend_from_slice(sync_seq);
                    slots.extend(sync_seq.iter().map(|b| !b));
                }
            }
            slots.extend(wur_encode(payload, r));
            streams[ch] = slots;
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
        super::LegacySpec::Placeholder { .. } => (20e-6 * rate_hz).round() as usize,
        super::LegacySpec::Provided(iq) => iq.len(),
    };
    let total_samples = legacy_samples + total_slots * slot_samples;
    let mut samples = vec![Complex64::new(0.0, 0.0); total_samples];
    let mut shift_log = Vec::new();

    for ch in 0..4 {
        let Some(layout) = layouts[ch].as_ref() else {
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(shift_seed.wrapping_add(ch as u64));
        let rotation = waveform.phase_rotations[ch];
        let center = params.channel_center_bins[ch];
        let stream = &streams[ch];

        let mut t = 0usize;
        while t < stream.len() {
            if !stream[t] {
                t += 1;
                continue;
            }
            let in_data = t >= layout.sync_slots;
            let ldr_unit = in_data && layout.rate == Rate::Ldr;
            let shift = rng.gen_range(0u8..8);
            let sym = if ldr_unit {
                // 4 us ON unit spanning two slots
                ldr_gen.on_symbol(&waveform.ldr_seq, center, shift, rotation)?
            } else {
                hdr_gen.on_symbol(&waveform.hdr_seq, center, shift, rotation)?
            };
            let start = legacy_samples + t * slot_samples;
            for (i, v) in sym.iter().enumerate() {
                samples[start + i] += v;
            }
            shift_log.push(SlotShift {
                slot: t,
                shift: ShiftSource::PerChannel(shift, ch as u8),
            });
            t += if ldr_unit { 2 } else { 1 };
        }
    }

    // legacy stub power-matched to the WUS ON average
    let wus = &samples[legacy_samples..];
    let on_power = {
        let mut energy = 0.0;
        let mut n = 0usize;
        for slot in wus.chunks(slot_samples) {
            let e: f64 = slot.iter().map(|s| s.norm_sqr()).sum();
            if e > 0.0 {
                energy += e;
                n += slot.len();
            }
        }
        if n > 0 {
            energy / n as f64
        } else {
            1.0
        }
    };
    match legacy {
        super::LegacySpec::Provided(iq) => samples[..legacy_samples].copy_from_slice(iq),
        super::LegacySpec::Placeholder { seed } => {
            let synth = super::OfdmSynthesizer::new(params.clone())?;
            let stub =
                super::packet::legacy_placeholder(&synth, params, *seed, legacy_samples, on_power)?;
            samples[..legacy_samples].copy_from_slice(&stub);
        }
    }

    let layout = PacketLayout {
        sample_rate: rate_hz,
        legacy_samples,
        slot_samples,
        total_slots,
        total_samples,
        channels: layouts,
        shift_log,
    };
    Ok((IqSignal::new(samples, rate_hz), layout))
}
