//! Monte Carlo bit-error-rate sweeps over the full TX -> PA -> channel ->
//! RX chain.

use super::papr::Method;
use crate::error::{Error, Result};
use crate::impairments::{awgn_apply, fading_apply, rapp_apply, FadingProfile, RappPa};
use crate::receiver::WurReceiver;
use crate::seeding::derive_seed;
use crate::seq::Table1;
use crate::waveform::{
    baseline_packet, build_packet_with_table, channel_slot_stream, ChannelAssignment, ChannelPlan,
    IqSignal, LdrSecondSymbol, LegacySpec, LfsrState, PacketLayout, Rate, WaveformParams,
    DEFAULT_SYNC_BITS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Propagation model between PA and receiver.
#[derive(Debug, Clone)]
pub enum ChannelModel {
    Awgn,
    /// Static-per-packet tapped-delay-line fading followed by AWGN.
    Fading(FadingProfile),
}

/// Per-SNR-point termination rule.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 200,
            max_bits: 2_000_000,
        }
    }
}

/// Everything fixed across a sweep.
#[derive(Debug, Clone)]
pub struct BerScenario {
    pub method: Method,
    pub rates: [Option<Rate>; 4],
    /// Payload bits per packet for each HDR / LDR channel.
    pub hdr_bits_per_packet: usize,
    pub ldr_bits_per_packet: usize,
    pub pa: Option<RappPa>,
    pub channel: ChannelModel,
    pub params: WaveformParams,
}

impl BerScenario {
    pub fn new(method: Method, rates: [Option<Rate>; 4], channel: ChannelModel) -> Self {
        Self {
            method,
            rates,
            hdr_bits_per_packet: 64,
            ldr_bits_per_packet: 16,
            pa: None,
            channel,
            params: WaveformParams::default(),
        }
    }

    fn plan_from(&self, rng: &mut ChaCha8Rng) -> ChannelPlan {
        let mut plan = ChannelPlan {
            channels: Default::default(),
            ldr_second_symbol: LdrSecondSymbol::Repeat,
        };
        for ch in 0..4 {
            if let Some(r) = self.rates[ch] {
                let bits = match r {
                    Rate::Hdr => self.hdr_bits_per_packet,
                    Rate::Ldr => self.ldr_bits_per_packet,
                };
                plan.channels[ch] = ChannelAssignment::new(r, (0..bits).map(|_| rng.gen()).collect());
            }
        }
        plan
    }

    fn transmit(&self, plan: &ChannelPlan, rng: &mut ChaCha8Rng) -> Result<(IqSignal, PacketLayout)> {
        let legacy = LegacySpec::Placeholder { seed: rng.gen() };
        match &self.method {
            Method::Golay => {
                let lfsr = LfsrState::scrambler_80211(rng.gen_range(1u32..128))?;
                build_packet_with_table(
                    &Table1::default(),
                    plan,
                    &DEFAULT_SYNC_BITS,
                    lfsr,
                    &legacy,
                    &self.params,
                )
            }
            Method::Baseline(wf) => baseline_packet(
                plan,
                wf,
                &DEFAULT_SYNC_BITS,
                rng.gen(),
                &legacy,
                &self.params,
            ),
        }
    }
}

/// One sweep point of one rate's curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bit_errors: u64,
    pub bits_simulated: u64,
    pub ber: f64,
}

/// SNR-vs-error-rate table for one data rate.
#[derive(Debug, Clone, Serialize)]
pub struct BerCurve {
    pub rate: Rate,
    pub points: Vec<BerPoint>,
    pub fingerprint: String,
}

/// Mean ON-signal power of the active channels after the receive filter:
/// the SNR reference. Measured on one clean (pre-noise, post-PA) packet
/// over the data-region ON slots, averaged across active channels.
pub fn measure_channel_ref_power(
    signal: &IqSignal,
    layout: &PacketLayout,
    plan: &ChannelPlan,
    receiver: &WurReceiver,
    params: &WaveformParams,
) -> Result<f64> {
    let mut acc = 0.0;
    let mut channels = 0usize;
    for ch in 0..4 {
        let Some(rate) = plan.channels[ch].rate else {
            continue;
        };
        let y = crate::receiver::channelize(
            signal,
            params.channel_center_hz(ch),
            &receiver.filter,
            1,
        )?;
        let stream = channel_slot_stream(rate, &plan.channels[ch].payload, &DEFAULT_SYNC_BITS);
        let sync = rate.sync_slots();
        let mut power = 0.0;
        let mut n = 0usize;
        for (t, &on) in stream.iter().enumerate().skip(sync) {
            if !on {
                continue;
            }
            let start = (layout.slot_start(t) as isize + receiver.offset_samples) as usize;
            let end = start + layout.slot_samples;
            if end > y.len() {
                break;
            }
            power += y.samples[start..end].iter().map(|s| s.norm_sqr()).sum::<f64>();
            n += layout.slot_samples;
        }
        if n == 0 {
            return Err(Error::Signal(format!(
                "channel {} has no ON data slots to calibrate against",
                ch + 1
            )));
        }
        acc += power / n as f64;
        channels += 1;
    }
    if channels == 0 {
        return Err(Error::Signal("no active channels to calibrate".into()));
    }
    Ok(acc / channels as f64)
}

fn run_trial(
    scenario: &BerScenario,
    receiver: &WurReceiver,
    ref_power: f64,
    snr_db: f64,
    trial_seed: u64,
) -> Result<[(u64, u64); 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let plan = scenario.plan_from(&mut rng);
    let (mut sig, layout) = scenario.transmit(&plan, &mut rng)?;
    if let Some(pa) = &scenario.pa {
        sig = rapp_apply(&sig, pa)?;
    }
    if let ChannelModel::Fading(profile) = &scenario.channel {
        sig = fading_apply(&sig, profile, rng.gen())?;
    }
    let sig = awgn_apply(&sig, snr_db, ref_power, rng.gen());

    // [(errors, bits)] indexed by rate: HDR = 0, LDR = 1
    let mut tally = [(0u64, 0u64); 2];
    for ch in 0..4 {
        let Some(rate) = plan.channels[ch].rate else {
            continue;
        };
        let decision = receiver.decode(&sig, &layout, ch)?;
        let sent = &plan.channels[ch].payload;
        let errors = decision
            .bits
            .iter()
            .zip(sent)
            .filter(|(rx, tx)| rx != tx)
            .count() as u64;
        let idx = match rate {
            Rate::Hdr => 0,
            Rate::Ldr => 1,
        };
        tally[idx].0 += errors;
        tally[idx].1 += sent.len() as u64;
    }
    Ok(tally)
}

const TRIAL_BATCH: usize = 64;

/// Sweep the SNR grid, simulating packets per point until the stop rule is
/// met for every rate in the plan. Trials run in fixed-size parallel
/// batches with per-trial derived seeds, so results are bit-identical for
/// any thread count.
pub fn ber_sweep(
    scenario: &BerScenario,
    snr_grid_db: &[f64],
    stop: &StopRule,
    master_seed: u64,
    fingerprint: &str,
) -> Result<Vec<BerCurve>> {
    if snr_grid_db.is_empty() {
        return Err(Error::Config("SNR grid must be non-empty".into()));
    }
    scenario.params.validate()?;
    let receiver = WurReceiver::new(&scenario.params)?;

    // calibration packet defines the SNR reference for the whole sweep
    let ref_power = {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, "ber-calibration"));
        let plan = scenario.plan_from(&mut rng);
        let (mut sig, layout) = scenario.transmit(&plan, &mut rng)?;
        if let Some(pa) = &scenario.pa {
            sig = rapp_apply(&sig, pa)?;
        }
        measure_channel_ref_power(&sig, &layout, &plan, &receiver, &scenario.params)?
    };

    let has_rate = |r: Rate| scenario.rates.iter().any(|&x| x == Some(r));
    let mut curves: Vec<(Rate, Vec<BerPoint>)> = Vec::new();
    if has_rate(Rate::Hdr) {
        curves.push((Rate::Hdr, Vec::new()));
    }
    if has_rate(Rate::Ldr) {
        curves.push((Rate::Ldr, Vec::new()));
    }
    if curves.is_empty() {
        return Err(Error::Config("plan has no active channels".into()));
    }

    for (pi, &snr_db) in snr_grid_db.iter().enumerate() {
        let mut tally = [(0u64, 0u64); 2];
        let mut trial = 0usize;
        loop {
            // stop on aggregate counts; per-rate curves are reported from
            // whatever accumulated
            let pending = |t: &[(u64, u64); 2]| -> bool {
                let errors = t[0].0 + t[1].0;
                let bits = t[0].1 + t[1].1;
                errors < stop.min_errors && bits < stop.max_bits
            };
            if !pending(&tally) {
                break;
            }
            let batch: Vec<[(u64, u64); 2]> = (trial..trial + TRIAL_BATCH)
                .into_par_iter()
                .map(|ti| {
                    let seed = derive_seed(master_seed, &format!("ber-p{pi}-t{ti}"));
                    run_trial(scenario, &receiver, ref_power, snr_db, seed)
                })
                .collect::<Result<Vec<_>>>()?;
            for t in batch {
                for i in 0..2 {
                    tally[i].0 += t[i].0;
                    tally[i].1 += t[i].1;
                }
            }
            trial += TRIAL_BATCH;
        }
        for (rate, points) in curves.iter_mut() {
            let idx = match rate {
                Rate::Hdr => 0,
                Rate::Ldr => 1,
            };
            let (errors, bits) = tally[idx];
            points.push(BerPoint {
                snr_db,
                bit_errors: errors,
                bits_simulated: bits,
                ber: if bits > 0 { errors as f64 / bits as f64 } else { 0.0 },
            });
        }
    }

    Ok(curves
        .into_iter()
        .map(|(rate, points)| BerCurve {
            rate,
            points,
            fingerprint: fingerprint.to_string(),
        })
        .collect())
}

/// Wilson score interval for an error proportion.
pub fn wilson_interval(errors: u64, bits: u64, z: f64) -> (f64, f64) {
    if bits == 0 {
        return (0.0, 1.0);
    }
    let n = bits as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * ((p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt());
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// SNR at which the curve crosses `target_ber`, by log-linear
/// interpolation between bracketing grid points. Zero-error points are
/// floored at half an error for the interpolation.
pub fn snr_at_ber(points: &[BerPoint], target_ber: f64) -> Option<f64> {
    let floor = |p: &BerPoint| -> f64 {
        if p.bit_errors == 0 {
            0.5 / p.bits_simulated.max(1) as f64
        } else {
            p.ber
        }
    };
    for pair in points.windows(2) {
        let (b0, b1) = (floor(&pair[0]), floor(&pair[1]));
        if b0 >= target_ber && b1 <= target_ber && b0 > b1 {
            let t = (b0.ln() - target_ber.ln()) / (b0.ln() - b1.ln());
            return Some(pair[0].snr_db + t * (pair[1].snr_db - pair[0].snr_db));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_scenario() -> BerScenario {
        let mut s = BerScenario::new(
            Method::Golay,
            [Some(Rate::Hdr), None, None, Some(Rate::Ldr)],
            ChannelModel::Awgn,
        );
        s.hdr_bits_per_packet = 16;
        s.ldr_bits_per_packet = 4;
        s
    }

    #[test]
    fn noise_free_sweep_has_zero_errors() {
        let scenario = tiny_scenario();
        let stop = StopRule {
            min_errors: 1,
            max_bits: 64,
        };
        let curves = ber_sweep(&scenario, &[f64::INFINITY], &stop, 7, "test").unwrap();
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert_eq!(c.points[0].bit_errors, 0);
            assert!(c.points[0].bits_simulated >= 64);
        }
    }

    #[test]
    fn three_point_smoke_run_emits_three_rows() {
        let scenario = tiny_scenario();
        let stop = StopRule {
            min_errors: 5,
            max_bits: 200,
        };
        let curves = ber_sweep(&scenario, &[0.0, 6.0, 12.0], &stop, 3, "smoke").unwrap();
        for c in &curves {
            assert_eq!(c.points.len(), 3);
        }
    }

    #[test]
    fn deterministic_given_master_seed() {
        let scenario = tiny_scenario();
        let stop = StopRule {
            min_errors: 3,
            max_bits: 100,
        };
        let a = ber_sweep(&scenario, &[4.0], &stop, 11, "x").unwrap();
        let b = ber_sweep(&scenario, &[4.0], &stop, 11, "x").unwrap();
        assert_eq!(a[0].points[0].bit_errors, b[0].points[0].bit_errors);
        assert_eq!(a[0].points[0].bits_simulated, b[0].points[0].bits_simulated);
    }

    #[test]
    fn wilson_interval_contains_point_estimate() {
        let (lo, hi) = wilson_interval(20, 1000, 1.96);
        assert!(lo < 0.02 && 0.02 < hi);
        assert!(lo > 0.0 && hi < 1.0);
    }

    #[test]
    fn snr_at_ber_interpolates() {
        let points = vec![
            BerPoint { snr_db: 0.0, bit_errors: 100, bits_simulated: 1000, ber: 0.1 },
            BerPoint { snr_db: 2.0, bit_errors: 10, bits_simulated: 1000, ber: 0.01 },
            BerPoint { snr_db: 4.0, bit_errors: 1, bits_simulated: 1000, ber: 0.001 },
        ];
        let s = snr_at_ber(&points, 0.01).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        let s = snr_at_ber(&points, 0.0316227766).unwrap();
        assert!((s - 1.0).abs() < 1e-9);
        assert!(snr_at_ber(&points, 1e-9).is_none());
    }
}
