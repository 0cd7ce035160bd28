//! Complementary-structure certification of the table patterns.
//!
//! For every non-starred pattern the composite frequency-domain vector
//! (all channels on one grid, gaps included) must be one member of a Golay
//! pair. Certification exhibits the partner the recursion predicts for the
//! pattern's geometry and verifies the pair exactly; the composite's
//! oversampled symbol PAPR is measured alongside.

use super::qpsk::{qpsk_phase_search, QpskSearchResult};
use super::table::{is_starred, ChannelSequenceSet, Table1};
use super::{ComplexSeq, GaussInt, GolayPair, ZERO};
use crate::analysis::peak_to_mean_db;
use crate::error::{Error, Result};
use crate::waveform::{oversampled_body, WaveformParams};

/// Certification outcome for one pattern.
#[derive(Debug, Clone)]
pub struct PatternReport {
    pub bits: [bool; 4],
    pub starred: bool,
    /// True when the composite was paired with its partner and verified.
    /// Starred patterns are never complementary; the all-OFF pattern is
    /// trivially so.
    pub certified_cs: bool,
    /// Composite over the occupied span (None for the all-OFF pattern).
    pub composite: Option<ComplexSeq>,
    /// The exhibited partner sequence for certified patterns.
    pub partner: Option<ComplexSeq>,
    /// 16x-oversampled composite symbol PAPR (None for all-OFF).
    pub papr_db: Option<f64>,
    /// Phase-search result for the starred patterns.
    pub qpsk: Option<QpskSearchResult>,
    /// Human-readable reason when certification failed.
    pub failure: Option<String>,
}

/// The composite sequence over the signed-bin span covered by the set's
/// active channels, exact in Gaussian integers. Returns None when no
/// channel is active.
pub fn composite_sequence(
    set: &ChannelSequenceSet,
    params: &WaveformParams,
) -> Option<ComplexSeq> {
    place_channels(set.per_channel(), params)
}

fn place_channels(
    channels: &[Option<ComplexSeq>; 4],
    params: &WaveformParams,
) -> Option<ComplexSeq> {
    let active: Vec<usize> = (0..4).filter(|&i| channels[i].is_some()).collect();
    if active.is_empty() {
        return None;
    }
    let entry_len = channels[active[0]].as_ref().unwrap().len() as i64;
    let offset = entry_len / 2;
    let lo = params.channel_center_bins[active[0]] as i64 - offset;
    let hi = params.channel_center_bins[*active.last().unwrap()] as i64 + offset;
    let mut out = vec![ZERO; (hi - lo + 1) as usize];
    for &ch in &active {
        let seq = channels[ch].as_ref().unwrap();
        let start = params.channel_center_bins[ch] as i64 - offset - lo;
        for (idx, &e) in seq.elements().iter().enumerate() {
            out[start as usize + idx] = e;
        }
    }
    Some(ComplexSeq::new(out).expect("non-empty span"))
}

/// Flip the sign of the `b` half of a `(a, 0, +/-b)` entry, turning `f1`
/// into `g1` and back.
fn mate_entry(entry: &ComplexSeq) -> ComplexSeq {
    let half = entry.len() / 2;
    let mut v: Vec<GaussInt> = entry.elements().to_vec();
    for e in v[half + 1..].iter_mut() {
        *e = -*e;
    }
    ComplexSeq::new(v).expect("non-empty")
}

/// The partner channel set the recursion predicts for a non-starred
/// pattern.
fn partner_channels(
    table: &Table1,
    set: &ChannelSequenceSet,
) -> Result<Option<[Option<ComplexSeq>; 4]>> {
    let active = set.active_channels();
    let mut out: [Option<ComplexSeq>; 4] = [None, None, None, None];
    match active.len() {
        0 => return Ok(None),
        // the single entry pairs with its own mate
        1 => out[active[0]] = Some(mate_entry(set.channel(active[0]).unwrap())),
        // (f1, g1) pairs with (f1, -g1)
        2 => {
            out[active[0]] = Some(set.channel(active[0]).unwrap().clone());
            out[active[1]] = Some(set.channel(active[1]).unwrap().negated());
        }
        3 => {
            // contiguous case: f = A(z^K)A(z) + B(z^K)B(z) z^m pairs with
            // g = A(z^K)Br(z) - B(z^K)Ar(z) z^m, i.e. per channel u the
            // entry (a_u * br, 0, -b_u * ar)
            let a = table.base().a();
            let b = table.base().b();
            let ar = a.reverse_conjugate();
            let br = b.reverse_conjugate();
            for (u, &ch) in active.iter().enumerate() {
                let mut v = Vec::with_capacity(2 * a.len() + 1);
                v.extend(br.scaled(a.get(u)).elements());
                v.push(ZERO);
                v.extend(ar.scaled(-b.get(u)).elements());
                out[ch] = Some(ComplexSeq::new(v).expect("non-empty"));
            }
        }
        // (f1, g1, -f1, g1) pairs with (f1, g1, f1, -g1)
        _ => {
            out[0] = Some(set.channel(0).unwrap().clone());
            out[1] = Some(set.channel(1).unwrap().clone());
            out[2] = Some(set.channel(2).unwrap().negated());
            out[3] = Some(set.channel(3).unwrap().negated());
        }
    }
    Ok(Some(out))
}

/// Certify one pattern against the given allocation geometry. Non-starred
/// patterns get a composite/partner pair verified through [`GolayPair`];
/// starred patterns get the QPSK phase search instead.
pub fn certify_pattern(
    table: &Table1,
    bits: [bool; 4],
    params: &WaveformParams,
    oversample: usize,
) -> Result<PatternReport> {
    let set = table.select(bits);
    let starred = is_starred(bits);
    let composite = composite_sequence(&set, params);
    let papr_db = if composite.is_some() {
        Some(peak_to_mean_db(&oversampled_body(&set, params, oversample)?))
    } else {
        None
    };

    if starred {
        let qpsk = qpsk_phase_search(table, bits, params, oversample)?;
        return Ok(PatternReport {
            bits,
            starred,
            certified_cs: false,
            composite,
            partner: None,
            papr_db,
            qpsk: Some(qpsk),
            failure: None,
        });
    }

    let partner_set = partner_channels(table, &set)?;
    let (certified, partner, failure) = match (&composite, partner_set) {
        (Some(comp), Some(chans)) => {
            let partner = place_channels(&chans, params)
                .ok_or_else(|| Error::InvalidSequence("empty partner".into()))?;
            match GolayPair::new(comp.clone(), partner.clone()) {
                Ok(pair) => (true, Some(pair.b().clone()), None),
                Err(Error::NotAGcp { lag }) => (
                    false,
                    Some(partner),
                    Some(format!("autocorrelation sum nonzero at lag {lag}")),
                ),
                Err(other) => return Err(other),
            }
        }
        // all-OFF: trivially complementary
        _ => (true, None, None),
    };

    Ok(PatternReport {
        bits,
        starred,
        certified_cs: certified,
        composite,
        partner,
        papr_db,
        qpsk: None,
        failure,
    })
}

/// Certify all 16 patterns.
pub fn certify_all_patterns(
    table: &Table1,
    params: &WaveformParams,
    oversample: usize,
) -> Result<Vec<PatternReport>> {
    (0u8..16)
        .map(|n| {
            let bits = [n & 8 != 0, n & 4 != 0, n & 2 != 0, n & 1 != 0];
            certify_pattern(table, bits, params, oversample)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_non_starred_pattern_certifies() {
        let table = Table1::default();
        let params = WaveformParams::default();
        for rep in certify_all_patterns(&table, &params, 16).unwrap() {
            if rep.starred {
                assert!(!rep.certified_cs);
                assert!(rep.qpsk.is_some());
            } else {
                assert!(rep.certified_cs, "pattern {:?}", rep.bits);
                if let Some(p) = rep.papr_db {
                    assert!(p <= 3.02, "pattern {:?}: {p} dB", rep.bits);
                }
            }
        }
    }

    #[test]
    fn composite_matches_hand_layout_for_two_active() {
        let table = Table1::default();
        let params = WaveformParams::default();
        let set = table.select([true, true, false, false]);
        let comp = composite_sequence(&set, &params).unwrap();
        // channels at bins -48 and -16: spacing 32, so 25 zeros between blocks
        let expected = format!("+i+0++-{}+i+0--+", "0".repeat(25));
        assert_eq!(comp.to_string(), expected);
    }

    #[test]
    fn corrupted_base_pair_fails_with_named_lag() {
        // a deliberately broken pair: verification pinpoints the lag
        let a = ComplexSeq::parse("+i+").unwrap();
        let bad_b = ComplexSeq::parse("++i").unwrap();
        let err = GolayPair::new(a, bad_b).unwrap_err();
        assert!(matches!(err, Error::NotAGcp { lag: 1 }));
    }

    #[test]
    fn all_off_pattern_is_trivially_certified() {
        let rep = certify_pattern(
            &Table1::default(),
            [false; 4],
            &WaveformParams::default(),
            16,
        )
        .unwrap();
        assert!(rep.certified_cs);
        assert!(rep.papr_db.is_none());
    }
}
