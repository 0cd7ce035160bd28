//! Exhaustive QPSK phase search for the two starred patterns.
//!
//! For the three-active non-contiguous patterns no complementary assignment
//! exists on the QPSK alphabet, so the middle channel's entry
//! `(theta1 * a, 0, -theta2 * b)` is chosen by evaluating all 16
//! `(theta1, theta2)` pairs and keeping the one whose oversampled composite
//! symbol has the lowest PAPR. Ties resolve to the earliest pair in the
//! fixed enumeration order `1, -1, i, -i` (theta1 outer, theta2 inner), so
//! results are reproducible across runs and platforms.

use super::table::{is_starred, ChannelSequenceSet, Table1};
use super::GaussInt;
use crate::analysis::peak_to_mean_db;
use crate::error::{Error, Result};
use crate::waveform::{oversampled_body, WaveformParams};
use serde::Serialize;

/// The fixed enumeration order of the QPSK alphabet.
pub const QPSK_ORDER: [GaussInt; 4] = [super::ONE, super::NEG_ONE, super::I, super::NEG_I];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QpskCandidate {
    #[serde(serialize_with = "ser_gauss")]
    pub theta1: GaussInt,
    #[serde(serialize_with = "ser_gauss")]
    pub theta2: GaussInt,
    pub papr_db: f64,
}

fn ser_gauss<S: serde::Serializer>(g: &GaussInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct QpskSearchResult {
    #[serde(serialize_with = "ser_gauss")]
    pub theta1: GaussInt,
    #[serde(serialize_with = "ser_gauss")]
    pub theta2: GaussInt,
    pub papr_db: f64,
    /// All 16 evaluated candidates in enumeration order.
    pub candidates: Vec<QpskCandidate>,
}

/// The candidate channel-sequence set for one `(theta1, theta2)` pair: the
/// first and last active channels keep `(a,0,b)` and `(a,0,-b)`, the middle
/// one carries `(theta1 * a, 0, -theta2 * b)`.
pub fn starred_candidate_set(
    table: &Table1,
    pattern: [bool; 4],
    theta1: GaussInt,
    theta2: GaussInt,
) -> Result<ChannelSequenceSet> {
    if !is_starred(pattern) {
        return Err(Error::Config(format!(
            "pattern {pattern:?} is not one of the starred three-active patterns"
        )));
    }
    let active: Vec<usize> = (0..4).filter(|&i| pattern[i]).collect();
    let mut chans: [Option<super::ComplexSeq>; 4] = [None, None, None, None];
    chans[active[0]] = Some(table.select([true, false, false, false]).channel(0).unwrap().clone());
    chans[active[1]] = Some(table.starred_entry(theta1, theta2));
    chans[active[2]] = Some(table.select([false, false, true, false]).channel(2).unwrap().clone());
    ChannelSequenceSet::new(chans, false)
}

/// Evaluate all 16 QPSK pairs on the designated (middle active) channel and
/// return the argmin with its PAPR, along with every candidate's value.
pub fn qpsk_phase_search(
    table: &Table1,
    pattern: [bool; 4],
    params: &WaveformParams,
    oversample: usize,
) -> Result<QpskSearchResult> {
    let mut candidates = Vec::with_capacity(16);
    let mut best: Option<QpskCandidate> = None;
    for theta1 in QPSK_ORDER {
        for theta2 in QPSK_ORDER {
            let set = starred_candidate_set(table, pattern, theta1, theta2)?;
            let body = oversampled_body(&set, params, oversample)?;
            let cand = QpskCandidate {
                theta1,
                theta2,
                papr_db: peak_to_mean_db(&body),
            };
            candidates.push(cand);
            if best.map_or(true, |b| cand.papr_db < b.papr_db) {
                best = Some(cand);
            }
        }
    }
    let best = best.expect("16 candidates evaluated");
    Ok(QpskSearchResult {
        theta1: best.theta1,
        theta2: best.theta2,
        papr_db: best.papr_db,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{I, NEG_I, NEG_ONE, ONE};
    use num_complex::Complex64;

    const STARRED_1101: [bool; 4] = [true, true, false, true];
    const STARRED_1011: [bool; 4] = [true, false, true, true];

    fn published(pattern: [bool; 4]) -> (GaussInt, GaussInt) {
        if pattern == STARRED_1101 {
            (I, NEG_ONE)
        } else {
            (NEG_I, ONE)
        }
    }

    #[test]
    fn rejects_non_starred_patterns() {
        let table = Table1::default();
        let params = WaveformParams::default();
        assert!(qpsk_phase_search(&table, [true, true, true, false], &params, 16).is_err());
        assert!(qpsk_phase_search(&table, [true; 4], &params, 16).is_err());
    }

    #[test]
    fn argmin_dominates_published_assignment() {
        let table = Table1::default();
        let params = WaveformParams::default();
        for pattern in [STARRED_1101, STARRED_1011] {
            let res = qpsk_phase_search(&table, pattern, &params, 16).unwrap();
            let (t1, t2) = published(pattern);
            let pub_papr = res
                .candidates
                .iter()
                .find(|c| c.theta1 == t1 && c.theta2 == t2)
                .unwrap()
                .papr_db;
            assert!(res.papr_db <= pub_papr + 1e-12);
            // and trivially dominates the identity pair
            let id = res
                .candidates
                .iter()
                .find(|c| c.theta1 == ONE && c.theta2 == ONE)
                .unwrap()
                .papr_db;
            assert!(res.papr_db <= id + 1e-12);
        }
    }

    /// Independent oracle: evaluate each candidate's symbol by direct DFT
    /// summation over the occupied bins and compare PAPRs to 1e-9 dB.
    #[test]
    fn candidates_match_direct_time_domain_evaluation() {
        let table = Table1::default();
        let params = WaveformParams::default();
        let os = 16usize;
        let total = params.idft_size * os;
        for pattern in [STARRED_1101, STARRED_1011] {
            let res = qpsk_phase_search(&table, pattern, &params, os).unwrap();
            for cand in &res.candidates {
                let set =
                    starred_candidate_set(&table, pattern, cand.theta1, cand.theta2).unwrap();
                // gather (signed bin, value) pairs
                let mut tones: Vec<(i64, Complex64)> = Vec::new();
                for ch in 0..4 {
                    if let Some(seq) = set.channel(ch) {
                        let center = params.channel_center_bins[ch] as i64;
                        for (idx, e) in seq.elements().iter().enumerate() {
                            if !e.is_zero() {
                                tones.push((center - 3 + idx as i64, e.to_complex()));
                            }
                        }
                    }
                }
                let scale = 1.0 / (total as f64).sqrt();
                let mut peak: f64 = 0.0;
                let mut mean = 0.0;
                for n in 0..total {
                    let mut x = Complex64::new(0.0, 0.0);
                    for &(bin, v) in &tones {
                        let phase = std::f64::consts::TAU * bin as f64 * n as f64 / total as f64;
                        x += v * Complex64::from_polar(1.0, phase);
                    }
                    let p = (x * scale).norm_sqr();
                    peak = peak.max(p);
                    mean += p;
                }
                mean /= total as f64;
                let oracle_db = 10.0 * (peak / mean).log10();
                assert!(
                    (oracle_db - cand.papr_db).abs() < 1e-9,
                    "pattern {pattern:?} theta ({}, {}): {} vs {}",
                    cand.theta1,
                    cand.theta2,
                    oracle_db,
                    cand.papr_db
                );
            }
        }
    }

    #[test]
    fn search_is_deterministic() {
        let table = Table1::default();
        let params = WaveformParams::default();
        let a = qpsk_phase_search(&table, STARRED_1011, &params, 16).unwrap();
        let b = qpsk_phase_search(&table, STARRED_1011, &params, 16).unwrap();
        assert_eq!(a.theta1, b.theta1);
        assert_eq!(a.theta2, b.theta2);
        assert_eq!(a.papr_db, b.papr_db);
    }
}
