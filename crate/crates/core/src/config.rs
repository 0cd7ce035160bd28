//! Experiment configuration document.
//!
//! One schema-validated document (unknown keys rejected) drives every
//! subcommand; a single master seed fans out to all stochastic components
//! through [`crate::seeding::derive_seed`].

use crate::analysis::{Method, StopRule, WindowFn};
use crate::error::{Error, Result};
use crate::impairments::{FadingProfile, RappPa};
use crate::seeding::derive_seed;
use crate::seq::{GolayPair, Table1};
use crate::waveform::{
    BaselineWaveform, ChannelAssignment, ChannelPlan, LdrSecondSymbol, Rate, WaveformParams,
    DEFAULT_SYNC_BITS,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodConfig {
    #[default]
    Golay,
    Example1,
    Example2,
    Example3,
}

impl MethodConfig {
    pub fn example_id(&self) -> Option<u8> {
        match self {
            MethodConfig::Golay => None,
            MethodConfig::Example1 => Some(1),
            MethodConfig::Example2 => Some(2),
            MethodConfig::Example3 => Some(3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RateConfig {
    Hdr,
    Ldr,
    X,
}

impl RateConfig {
    fn to_rate(self) -> Option<Rate> {
        match self {
            RateConfig::Hdr => Some(Rate::Hdr),
            RateConfig::Ldr => Some(Rate::Ldr),
            RateConfig::X => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    pub channels: [RateConfig; 4],
    pub payload_bits: [usize; 4],
    pub ldr_second_symbol: LdrSecondSymbol,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            channels: [
                RateConfig::Hdr,
                RateConfig::Hdr,
                RateConfig::Ldr,
                RateConfig::Ldr,
            ],
            payload_bits: [64, 64, 16, 16],
            ldr_second_symbol: LdrSecondSymbol::Repeat,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequencesConfig {
    pub base_a: String,
    pub base_b: String,
    /// 32-character 0/1 string for the SYNC field.
    pub sync: String,
}

impl Default for SequencesConfig {
    fn default() -> Self {
        Self {
            base_a: "+i+".into(),
            base_b: "++-".into(),
            sync: DEFAULT_SYNC_BITS
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    /// Explicit `(re, im)` tone lists; placeholders are derived from the
    /// master seed when omitted.
    pub hdr_seq: Option<Vec<[f64; 2]>>,
    pub ldr_seq: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaConfig {
    pub enabled: bool,
    pub smoothness: f64,
    pub sat_amplitude: f64,
    pub obo_db: f64,
}

impl Default for PaConfig {
    fn default() -> Self {
        let pa = RappPa::default();
        Self {
            enabled: false,
            smoothness: pa.smoothness,
            sat_amplitude: pa.sat_amplitude,
            obo_db: pa.obo_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModelConfig {
    #[default]
    Awgn,
    Fading,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub model: ChannelModelConfig,
    /// CSV `(delay_ns, power_db)` path; bundled 18-tap profile when unset.
    pub fading_profile: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Patterns to certify as `b1b2b3b4` bit strings; all 16 when unset.
    /// An explicitly empty list is a no-op.
    pub patterns: Option<Vec<String>>,
}

impl VerifyConfig {
    pub fn pattern_bits(&self) -> Result<Vec<[bool; 4]>> {
        let Some(list) = &self.patterns else {
            return Ok((0u8..16)
                .map(|n| [n & 8 != 0, n & 4 != 0, n & 2 != 0, n & 1 != 0])
                .collect());
        };
        list.iter()
            .map(|s| {
                let chars: Vec<char> = s.chars().collect();
                if chars.len() != 4 || chars.iter().any(|&c| c != '0' && c != '1') {
                    return Err(Error::Config(format!(
                        "pattern '{s}' must be four 0/1 characters"
                    )));
                }
                Ok([chars[0] == '1', chars[1] == '1', chars[2] == '1', chars[3] == '1'])
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaprConfig {
    pub n_packets: usize,
}

impl Default for PaprConfig {
    fn default() -> Self {
        Self { n_packets: 500 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsdConfig {
    pub segment_len: usize,
    pub overlap: usize,
    pub window: WindowFn,
    /// Include the opaque legacy stub in the analyzed span.
    pub include_legacy: bool,
    pub in_band_mhz: f64,
    /// Breakpoints `(offset_mhz, dbr)`.
    pub mask: Vec<[f64; 2]>,
}

impl Default for PsdConfig {
    fn default() -> Self {
        Self {
            segment_len: 4096,
            overlap: 2048,
            window: WindowFn::Hann,
            include_legacy: false,
            in_band_mhz: 40.0,
            mask: crate::analysis::DEFAULT_SEM_80MHZ
                .iter()
                .map(|&(f, v)| [f / 1e6, v])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerConfig {
    pub snr_grid_db: Vec<f64>,
    pub min_errors: u64,
    pub max_bits: u64,
}

impl Default for BerConfig {
    fn default() -> Self {
        let stop = StopRule::default();
        Self {
            snr_grid_db: (0..=16).step_by(2).map(|s| s as f64).collect(),
            min_errors: stop.min_errors,
            max_bits: stop.max_bits,
        }
    }
}

/// The document every subcommand consumes.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub method: MethodConfig,
    pub output_dir: Option<String>,
    pub plan: PlanConfig,
    pub waveform: WaveformParams,
    pub sequences: SequencesConfig,
    pub baseline: BaselineConfig,
    pub pa: PaConfig,
    pub channel: ChannelConfig,
    pub verify: VerifyConfig,
    pub papr: PaprConfig,
    pub psd: PsdConfig,
    pub ber: BerConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.waveform.validate()?;
        for ch in 0..4 {
            if self.plan.channels[ch] == RateConfig::X && self.plan.payload_bits[ch] != 0 {
                return Err(Error::Config(format!(
                    "channel {} is inactive but has payload bits configured",
                    ch + 1
                )));
            }
        }
        self.sync_bits()?;
        if self.pa.enabled {
            self.rapp_pa().validate()?;
        }
        Ok(())
    }

    /// Eight hex digits identifying this exact configuration; embedded in
    /// output filenames.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest[..4].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn rates(&self) -> [Option<Rate>; 4] {
        let mut out = [None; 4];
        for ch in 0..4 {
            out[ch] = self.plan.channels[ch].to_rate();
        }
        out
    }

    /// Transmission plan with payload bits drawn from the master seed.
    pub fn plan(&self) -> ChannelPlan {
        let mut plan = ChannelPlan {
            channels: Default::default(),
            ldr_second_symbol: self.plan.ldr_second_symbol,
        };
        for ch in 0..4 {
            if let Some(rate) = self.plan.channels[ch].to_rate() {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &format!("payload-ch{ch}")));
                let bits = (0..self.plan.payload_bits[ch]).map(|_| rng.gen()).collect();
                plan.channels[ch] = ChannelAssignment::new(rate, bits);
            }
        }
        plan
    }

    /// The sequence table from the configured base pair; fails with the
    /// first violating lag if the pair is not complementary.
    pub fn table(&self) -> Result<Table1> {
        let pair = GolayPair::parse(&self.sequences.base_a, &self.sequences.base_b)?;
        Table1::new(pair)
    }

    pub fn sync_bits(&self) -> Result<Vec<bool>> {
        let bits: Result<Vec<bool>> = self
            .sequences
            .sync
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Config(format!("invalid SYNC character '{other}'"))),
            })
            .collect();
        let bits = bits?;
        if bits.len() != 32 {
            return Err(Error::Config(format!(
                "SYNC must have 32 bits, got {}",
                bits.len()
            )));
        }
        Ok(bits)
    }

    pub fn rapp_pa(&self) -> RappPa {
        RappPa {
            smoothness: self.pa.smoothness,
            sat_amplitude: self.pa.sat_amplitude,
            obo_db: self.pa.obo_db,
        }
    }

    pub fn pa_if_enabled(&self) -> Option<RappPa> {
        self.pa.enabled.then(|| self.rapp_pa())
    }

    pub fn fading_profile(&self) -> Result<FadingProfile> {
        match &self.channel.fading_profile {
            None => Ok(FadingProfile::hyperlan_a()),
            Some(path) => FadingProfile::from_csv(&std::fs::read_to_string(path)?),
        }
    }

    /// Resolve the transmit method, deriving placeholder baseline
    /// sequences from the master seed when none are configured.
    pub fn method(&self) -> Result<Method> {
        let Some(example) = self.method.example_id() else {
            return Ok(Method::Golay);
        };
        let to_tones = |v: &Vec<[f64; 2]>| -> Vec<Complex64> {
            v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
        };
        let wf = match (&self.baseline.hdr_seq, &self.baseline.ldr_seq) {
            (Some(h), Some(l)) => BaselineWaveform::new(to_tones(h), to_tones(l))?,
            (None, None) => BaselineWaveform::placeholder(
                example,
                derive_seed(self.seed, "baseline-sequences"),
            )?,
            _ => {
                return Err(Error::Config(
                    "baseline hdr_seq and ldr_seq must be configured together".into(),
                ))
            }
        };
        Ok(Method::Baseline(wf))
    }

    pub fn stop_rule(&self) -> StopRule {
        StopRule {
            min_errors: self.ber.min_errors,
            max_bits: self.ber.max_bits,
        }
    }

    pub fn sem_mask_hz(&self) -> Vec<(f64, f64)> {
        self.psd.mask.iter().map(|&[f, v]| (f * 1e6, v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_validates() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.sync_bits().unwrap().len(), 32);
        cfg.table().unwrap();
        assert!(matches!(cfg.method().unwrap(), Method::Golay));
    }

    #[test]
    fn fingerprint_changes_with_config() {
        let a = ExperimentConfig::default();
        let mut b = ExperimentConfig::default();
        b.seed = 1234;
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 8);
        assert_eq!(a.fingerprint(), ExperimentConfig::default().fingerprint());
    }

    #[test]
    fn corrupted_base_pair_names_failing_lag() {
        let mut cfg = ExperimentConfig::default();
        cfg.sequences.base_b = "++i".into();
        match cfg.table() {
            Err(Error::NotAGcp { lag }) => assert_eq!(lag, 1),
            other => panic!("expected NotAGcp, got {other:?}"),
        }
    }

    #[test]
    fn inactive_channel_with_payload_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.plan.channels[0] = RateConfig::X;
        assert!(cfg.validate().is_err());
        cfg.plan.payload_bits[0] = 0;
        cfg.validate().unwrap();
    }

    #[test]
    fn plan_payloads_are_seed_deterministic() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.plan().channels[0].payload, cfg.plan().channels[0].payload);
        let mut other = ExperimentConfig::default();
        other.seed = 99;
        assert_ne!(cfg.plan().channels[0].payload, other.plan().channels[0].payload);
    }
}
