//! Command-line front end: `verify`, `generate`, `papr`, `psd`, `ber`.
//!
//! Every subcommand consumes one TOML configuration document (defaults
//! apply when `--config` is omitted) and a master seed that reproduces all
//! stochastic components. Output filenames embed the configuration
//! fingerprint. Exit codes: 0 success, 2 configuration error, 3 invariant
//! violation, 4 I/O error.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use wakewave::analysis::{
    ber_sweep, papr_experiment, psd_welch, sem_check, BerScenario, ChannelModel, Method,
};
use wakewave::config::ExperimentConfig;
use wakewave::error::Error;
use wakewave::io;
use wakewave::seeding::derive_seed;
use wakewave::seq::certify_pattern;
use wakewave::waveform::{
    baseline_packet, build_packet_with_table, IqSignal, LegacySpec, LfsrState, PacketLayout,
    Rate,
};

#[derive(Debug, Parser)]
#[command(name = "wakewave", version, about = "Multi-channel OOK wake-up signal toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (TOML); built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker thread cap
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify the sequence table: pair verification, CS structure, PAPR
    Verify,
    /// Synthesize one packet to an IQ file with a layout sidecar
    Generate,
    /// Packet-level windowed PAPR percentiles
    Papr,
    /// Welch PSD and spectral-mask check of one packet
    Psd,
    /// Monte Carlo BER sweep over the SNR grid
    Ber,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_IO: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Io(_) => EXIT_IO,
                Error::NotAGcp { .. } => EXIT_INVARIANT,
                _ => EXIT_CONFIG,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let mut config = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = Some(out.display().to_string());
    }
    config.validate()?;

    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }

    let out_dir = PathBuf::from(config.output_dir.clone().unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&out_dir)?;

    match cli.command {
        Command::Verify => cmd_verify(&config),
        Command::Generate => cmd_generate(&config, &out_dir).map(|_| ExitCode::SUCCESS),
        Command::Papr => cmd_papr(&config, &out_dir).map(|_| ExitCode::SUCCESS),
        Command::Psd => cmd_psd(&config, &out_dir).map(|_| ExitCode::SUCCESS),
        Command::Ber => cmd_ber(&config, &out_dir).map(|_| ExitCode::SUCCESS),
    }
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, Error> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn bits_label(bits: [bool; 4]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn cmd_verify(config: &ExperimentConfig) -> Result<ExitCode, Error> {
    let patterns = config.verify.pattern_bits()?;
    if patterns.is_empty() {
        println!("verify: no patterns requested, nothing to do");
        return Ok(ExitCode::SUCCESS);
    }

    // the base pair itself must verify before any pattern can
    let table = config.table()?;
    println!(
        "base pair a={} b={}: complementary",
        config.sequences.base_a, config.sequences.base_b
    );

    let mut violations = 0usize;
    for bits in patterns {
        let report = certify_pattern(&table, bits, &config.waveform, 16)?;
        let label = bits_label(bits);
        if report.starred {
            let q = report.qpsk.as_ref().expect("starred patterns searched");
            println!(
                "{label}* not CS by construction; searched theta1={} theta2={} papr {:.3} dB \
                 (published entry {:.3} dB)",
                q.theta1,
                q.theta2,
                q.papr_db,
                report.papr_db.unwrap_or(f64::NAN),
            );
            continue;
        }
        match (report.certified_cs, report.papr_db) {
            (true, None) => println!("{label}  all channels OFF: trivially complementary"),
            (true, Some(papr)) if papr <= 3.02 => {
                println!("{label}  certified CS, symbol papr {papr:.3} dB");
            }
            (true, Some(papr)) => {
                println!("{label}  FAIL: certified CS but papr {papr:.3} dB exceeds 3.02 dB");
                violations += 1;
            }
            (false, _) => {
                println!(
                    "{label}  FAIL: {}",
                    report.failure.unwrap_or_else(|| "not complementary".into())
                );
                violations += 1;
            }
        }
    }

    if violations > 0 {
        eprintln!("verify: {violations} pattern(s) violated the certification invariants");
        return Ok(ExitCode::from(EXIT_INVARIANT));
    }
    println!("verify: all requested patterns certified");
    Ok(ExitCode::SUCCESS)
}

/// Build the configured packet (Golay or baseline method).
fn synthesize_packet(config: &ExperimentConfig) -> Result<(IqSignal, PacketLayout), Error> {
    let plan = config.plan();
    let sync = config.sync_bits()?;
    let legacy = LegacySpec::Placeholder {
        seed: derive_seed(config.seed, "legacy"),
    };
    match config.method()? {
        Method::Golay => {
            let table = config.table()?;
            let lfsr_seed = (derive_seed(config.seed, "lfsr") % 127 + 1) as u32;
            let lfsr = LfsrState::scrambler_80211(lfsr_seed)?;
            build_packet_with_table(&table, &plan, &sync, lfsr, &legacy, &config.waveform)
        }
        Method::Baseline(wf) => baseline_packet(
            &plan,
            &wf,
            &sync,
            derive_seed(config.seed, "baseline-shifts"),
            &legacy,
            &config.waveform,
        ),
    }
}

fn cmd_generate(config: &ExperimentConfig, out_dir: &Path) -> Result<(), Error> {
    let (signal, layout) = synthesize_packet(config)?;
    let fp = config.fingerprint();

    let iq_path = out_dir.join(format!("packet_{fp}.iq"));
    io::write_iq_f32le(&iq_path, &signal)?;

    #[derive(serde::Serialize)]
    struct Sidecar<'a> {
        sample_rate: f64,
        samples: usize,
        duration_us: f64,
        layout: &'a PacketLayout,
        config_fingerprint: &'a str,
    }
    let sidecar_path = out_dir.join(format!("packet_{fp}.json"));
    io::write_json(
        &sidecar_path,
        &Sidecar {
            sample_rate: signal.sample_rate,
            samples: signal.len(),
            duration_us: signal.duration() * 1e6,
            layout: &layout,
            config_fingerprint: &fp,
        },
    )?;

    // small signals additionally get a human-readable CSV
    if signal.len() <= 65_536 {
        io::write_iq_csv(&out_dir.join(format!("packet_{fp}.csv")), &signal)?;
    }

    println!(
        "wrote {} ({} samples, {:.1} us at {:.0} MHz) and {}",
        iq_path.display(),
        signal.len(),
        signal.duration() * 1e6,
        signal.sample_rate / 1e6,
        sidecar_path.display()
    );
    Ok(())
}

fn cmd_papr(config: &ExperimentConfig, out_dir: &Path) -> Result<(), Error> {
    let report = papr_experiment(
        &config.method()?,
        config.rates(),
        config.papr.n_packets,
        derive_seed(config.seed, "papr-experiment"),
        &config.waveform,
    )?;
    let fp = config.fingerprint();
    io::write_json(&out_dir.join(format!("papr_{fp}.json")), &report)?;
    let rows: Vec<Vec<String>> = report
        .window_paprs_db
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), format!("{v:.6}")])
        .collect();
    io::write_csv(&out_dir.join(format!("papr_{fp}.csv")), "window,papr_db", &rows)?;
    println!(
        "papr over {} windows of {:.1} us: p50 {:.2} dB, p80 {:.2} dB, p99 {:.2} dB",
        report.window_paprs_db.len(),
        report.window_us,
        report.p50_db,
        report.p80_db,
        report.p99_db
    );
    Ok(())
}

fn cmd_psd(config: &ExperimentConfig, out_dir: &Path) -> Result<(), Error> {
    let (signal, layout) = synthesize_packet(config)?;
    let signal = match config.pa_if_enabled() {
        Some(pa) => wakewave::impairments::rapp_apply(&signal, &pa)?,
        None => signal,
    };
    let range = if config.psd.include_legacy {
        0..signal.len()
    } else {
        layout.wus_range()
    };
    let analyzed = IqSignal::new(signal.samples[range].to_vec(), signal.sample_rate);
    let psd = psd_welch(
        &analyzed,
        config.psd.segment_len,
        config.psd.overlap,
        config.psd.window,
    )?;
    let in_band = config.psd.in_band_mhz * 1e6;
    let sem = sem_check(&psd, &config.sem_mask_hz(), in_band)?;

    let fp = config.fingerprint();
    #[derive(serde::Serialize)]
    struct PsdOut<'a> {
        freq_hz: &'a [f64],
        psd_dbr: Vec<f64>,
        sem: &'a wakewave::analysis::SemResult,
    }
    let dbr = psd.to_dbr(in_band);
    io::write_json(
        &out_dir.join(format!("psd_{fp}.json")),
        &PsdOut {
            freq_hz: &psd.freq_hz,
            psd_dbr: dbr.clone(),
            sem: &sem,
        },
    )?;
    let rows: Vec<Vec<String>> = psd
        .freq_hz
        .iter()
        .zip(dbr.iter().zip(&sem.mask_dbr))
        .map(|(f, (p, m))| vec![format!("{f:.1}"), format!("{p:.3}"), format!("{m:.3}")])
        .collect();
    io::write_csv(
        &out_dir.join(format!("psd_{fp}.csv")),
        "freq_hz,psd_dbr,mask_dbr",
        &rows,
    )?;
    println!(
        "psd over {} segments: mask {} with worst margin {:.2} dB at {:.1} MHz",
        psd.segments_averaged,
        if sem.pass { "PASS" } else { "FAIL" },
        sem.worst_margin_db,
        sem.worst_freq_hz / 1e6
    );
    Ok(())
}

fn cmd_ber(config: &ExperimentConfig, out_dir: &Path) -> Result<(), Error> {
    let channel = match config.channel.model {
        wakewave::config::ChannelModelConfig::Awgn => ChannelModel::Awgn,
        wakewave::config::ChannelModelConfig::Fading => {
            ChannelModel::Fading(config.fading_profile()?)
        }
    };
    let mut scenario = BerScenario::new(config.method()?, config.rates(), channel);
    scenario.params = config.waveform.clone();
    scenario.pa = config.pa_if_enabled();
    for ch in 0..4 {
        match config.rates()[ch] {
            Some(Rate::Hdr) => scenario.hdr_bits_per_packet = config.plan.payload_bits[ch],
            Some(Rate::Ldr) => scenario.ldr_bits_per_packet = config.plan.payload_bits[ch],
            None => {}
        }
    }

    let fp = config.fingerprint();
    let curves = ber_sweep(
        &scenario,
        &config.ber.snr_grid_db,
        &config.stop_rule(),
        derive_seed(config.seed, "ber-sweep"),
        &fp,
    )?;

    io::write_json(&out_dir.join(format!("ber_{fp}.json")), &curves)?;
    let mut rows = Vec::new();
    for curve in &curves {
        for p in &curve.points {
            rows.push(vec![
                format!("{:?}", curve.rate),
                format!("{:.2}", p.snr_db),
                p.bit_errors.to_string(),
                p.bits_simulated.to_string(),
                format!("{:.6e}", p.ber),
            ]);
        }
    }
    io::write_csv(
        &out_dir.join(format!("ber_{fp}.csv")),
        "rate,snr_db,errors,bits,ber",
        &rows,
    )?;

    for curve in &curves {
        println!("{:?} rate:", curve.rate);
        println!("  snr_db   errors      bits        ber");
        for p in &curve.points {
            println!(
                "  {:6.2}   {:8}  {:9}   {:.3e}",
                p.snr_db, p.bit_errors, p.bits_simulated, p.ber
            );
        }
    }
    Ok(())
}
