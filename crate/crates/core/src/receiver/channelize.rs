//! Channel selection front end: complex mix, receive filter, optional
//! decimation.

use super::IirFilter;
use crate::error::{Error, Result};
use crate::waveform::IqSignal;
use num_complex::Complex64;

/// Mix the channel at `center_hz` down to DC and run the receive filter
/// (causal forward pass, like a real front end — group delay is not
/// compensated here; the decision stage absorbs it with a slot-timing
/// offset). `decimate = 1` keeps the full rate.
pub fn channelize(
    signal: &IqSignal,
    center_hz: f64,
    filter: &IirFilter,
    decimate: usize,
) -> Result<IqSignal> {
    if center_hz.abs() >= signal.sample_rate / 2.0 {
        return Err(Error::Config(format!(
            "channel center {center_hz} Hz outside the sampled band"
        )));
    }
    if decimate == 0 {
        return Err(Error::Config("decimation factor must be >= 1".into()));
    }
    let step = -std::f64::consts::TAU * center_hz / signal.sample_rate;
    let rotor = Complex64::from_polar(1.0, step);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut mixed = Vec::with_capacity(signal.len());
    for (n, &x) in signal.samples.iter().enumerate() {
        mixed.push(x * phase);
        phase *= rotor;
        // keep the oscillator on the unit circle over long signals
        if n % 4096 == 4095 {
            phase /= phase.norm();
        }
    }
    let filtered = filter.filter(&mixed);
    let samples = if decimate == 1 {
        filtered
    } else {
        filtered.into_iter().step_by(decimate).collect()
    };
    Ok(IqSignal::new(samples, signal.sample_rate / decimate as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::receiver::butterworth_design;

    fn tone(freq: f64, rate: f64, n: usize) -> IqSignal {
        let samples = (0..n)
            .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * freq * i as f64 / rate))
            .collect();
        IqSignal::new(samples, rate)
    }

    #[test]
    fn zero_center_allpass_is_identity() {
        let sig = tone(3e6, 320e6, 1024);
        let out = channelize(&sig, 0.0, &IirFilter::identity(320e6), 1).unwrap();
        for (y, x) in out.samples.iter().zip(&sig.samples) {
            assert!((y - x).norm() < 1e-9);
        }
    }

    #[test]
    fn tone_at_center_lands_at_dc_with_unit_gain() {
        let rate = 320e6;
        let filt = butterworth_design(5, 5e6, rate).unwrap();
        let sig = tone(10e6, rate, 40_000);
        let out = channelize(&sig, 10e6, &filt, 1).unwrap();
        // steady state after the transient: constant complex value of magnitude 1
        let tail = &out.samples[20_000..];
        for s in tail.iter().step_by(997) {
            assert!((s.norm() - 1.0).abs() < 1e-3, "|y| = {}", s.norm());
        }
    }

    #[test]
    fn adjacent_channel_tone_attenuated_30_db() {
        let rate = 320e6;
        let filt = butterworth_design(5, 5e6, rate).unwrap();
        let sig = tone(30e6, rate, 40_000);
        let out = channelize(&sig, 10e6, &filt, 1).unwrap();
        let tail_power: f64 = out.samples[20_000..]
            .iter()
            .map(|s| s.norm_sqr())
            .sum::<f64>()
            / 20_000.0;
        assert!(10.0 * tail_power.log10() <= -30.0);
    }

    #[test]
    fn decimation_keeps_every_nth_sample() {
        let sig = tone(0.0, 320e6, 64);
        let full = channelize(&sig, 0.0, &IirFilter::identity(320e6), 1).unwrap();
        let dec = channelize(&sig, 0.0, &IirFilter::identity(320e6), 4).unwrap();
        assert_eq!(dec.len(), 16);
        assert!((dec.sample_rate - 80e6).abs() < 1e-6);
        for (i, s) in dec.samples.iter().enumerate() {
            assert_eq!(*s, full.samples[4 * i]);
        }
    }

    #[test]
    fn center_outside_band_rejected() {
        let sig = tone(0.0, 320e6, 16);
        assert!(channelize(&sig, 200e6, &IirFilter::identity(320e6), 1).is_err());
    }
}
