//! File formats: interleaved float32 IQ with a JSON sidecar, and CSV
//! emitters for signals and reports.

use crate::error::{Error, Result};
use crate::waveform::IqSignal;
use num_complex::Complex64;
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Write interleaved little-endian float32 I/Q samples.
pub fn write_iq_f32le(path: &Path, signal: &IqSignal) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for s in &signal.samples {
        w.write_all(&(s.re as f32).to_le_bytes())?;
        w.write_all(&(s.im as f32).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read a file produced by [`write_iq_f32le`].
pub fn read_iq_f32le(path: &Path, sample_rate: f64) -> Result<IqSignal> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Signal(format!(
            "IQ file length {} is not a multiple of 8 bytes",
            bytes.len()
        )));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| {
            Complex64::new(
                f32::from_le_bytes(c[0..4].try_into().unwrap()) as f64,
                f32::from_le_bytes(c[4..8].try_into().unwrap()) as f64,
            )
        })
        .collect();
    Ok(IqSignal::new(samples, sample_rate))
}

/// Small-signal CSV form: `index,i,q`.
pub fn write_iq_csv(path: &Path, signal: &IqSignal) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "index,i,q")?;
    for (n, s) in signal.samples.iter().enumerate() {
        writeln!(w, "{n},{},{}", s.re, s.im)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed JSON for any serializable report.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Config(format!("JSON serialization failed: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Generic CSV writer: a header line plus rows of stringified fields.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iq_round_trip_is_f32_exact() {
        let dir = std::env::temp_dir().join("wakewave-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.iq");
        let sig = IqSignal::new(
            (0..100)
                .map(|i| Complex64::new(i as f64 * 0.125, -(i as f64) * 0.25))
                .collect(),
            320e6,
        );
        write_iq_f32le(&path, &sig).unwrap();
        let back = read_iq_f32le(&path, 320e6).unwrap();
        assert_eq!(back.len(), sig.len());
        for (a, b) in back.samples.iter().zip(&sig.samples) {
            assert_eq!(a.re as f32, b.re as f32);
            assert_eq!(a.im as f32, b.im as f32);
        }
        std::fs::remove_file(&path).unwrap();
    }
}
