//! `gvx`: exact GW/BPS transforms as reproducible shell pipelines.
//!
//! Exit codes: 0 success, 2 parse/config error, 3 validity-budget error,
//! 4 strict-integrality failure.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gvx_core::io::{self, GvFile};
use gvx_core::{
    fano, gv, localcurves, structure, BPSTable, ETable, Error, GSeriesCache, KernelCache,
    LatticeConfig, QSeries, Rat,
};

#[derive(Parser)]
#[command(name = "gvx", version, about = "Exact Gromov-Witten / BPS series transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input path, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct ConfigFlags {
    /// Expected lattice rank; errors if the input header disagrees.
    #[arg(long)]
    rank: Option<usize>,
    /// Expected mass vector (rationals `p/q`); errors on header mismatch.
    #[arg(long, value_delimiter = ',')]
    mass: Option<Vec<String>>,
    /// Expected mass cap; errors on header mismatch.
    #[arg(long)]
    mass_cap: Option<String>,
    /// Expected t-order; errors on header mismatch.
    #[arg(long)]
    t_order: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the local-curve series G_h as a rank-1 GW table.
    GhSeries {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        dmax: u32,
        #[arg(long)]
        t_order: i64,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Invert a GW series file into a BPS table.
    BpsFromGw {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        config: ConfigFlags,
        /// Non-integral recovered entries become exit-code-4 errors.
        #[arg(long)]
        strict: bool,
        /// Append observed genus cutoffs as comment lines.
        #[arg(long)]
        report: bool,
    },
    /// Synthesize the GW series of a BPS table file.
    GwFromBps {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        config: ConfigFlags,
    },
    /// Extract structure coefficients e_{A,g} from a GW series file.
    ExtractE {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        config: ConfigFlags,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        report: bool,
    },
    /// Synthesize the GW series of an e-table file.
    SeriesFromE {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        config: ConfigFlags,
    },
    /// Fano transform: BPS coefficients from a FANO GW coefficient file.
    FanoBps {
        #[command(flatten)]
        io: IoArgs,
        /// c1 of the class; must match the file rows.
        #[arg(long)]
        c1: u32,
        #[arg(long)]
        strict: bool,
    },
    /// Integrality/finiteness report for the local BPS table of G_h.
    Audit {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        dmax: u32,
        /// t-window; defaults to twice the degree budget.
        #[arg(long)]
        t_order: Option<i64>,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Generate random tables, run every roundtrip, exit nonzero on any
    /// mismatch.
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 4)]
        genus_max: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::DimensionMismatch { .. } | Error::Config(_) => 2,
        Error::StrictIntegrality { .. } => 4,
        _ => 3,
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut buf = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Config(format!("cannot read stdin: {e}")))?;
    } else {
        buf = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
    }
    Ok(buf)
}

/// Writes atomically when the target is a file: temp file in the same
/// directory, then rename.
fn write_output(path: &str, text: &str) -> Result<(), Error> {
    if path == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write stdout: {e}")))?;
        return Ok(());
    }
    let target = PathBuf::from(path);
    let tmp = target.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::Config(format!("cannot write {path}: {e}")))?;
    std::fs::rename(&tmp, &target)
        .map_err(|e| Error::Config(format!("cannot finalize {path}: {e}")))?;
    Ok(())
}

fn parse_rat_flag(s: &str) -> Result<Rat, Error> {
    let bad = || Error::Config(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
            if d == 0.into() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A file parsed under mismatched flags errors rather than silently
/// reinterpreting.
fn check_config(flags: &ConfigFlags, config: &LatticeConfig) -> Result<(), Error> {
    if let Some(rank) = flags.rank {
        if rank != config.rank() {
            return Err(Error::Config(format!(
                "--rank {rank} does not match file rank {}",
                config.rank()
            )));
        }
    }
    if let Some(mass) = &flags.mass {
        let given: Vec<Rat> = mass
            .iter()
            .map(|m| parse_rat_flag(m))
            .collect::<Result<_, _>>()?;
        if given != config.mass_vector() {
            return Err(Error::Config("--mass does not match file header".into()));
        }
    }
    if let Some(cap) = &flags.mass_cap {
        if &parse_rat_flag(cap)? != config.mass_cap() {
            return Err(Error::Config("--mass-cap does not match file header".into()));
        }
    }
    if let Some(t) = flags.t_order {
        if t != config.t_order() {
            return Err(Error::Config(format!(
                "--t-order {t} does not match file tmax {}",
                config.t_order()
            )));
        }
    }
    Ok(())
}

fn expect_gw(file: GvFile) -> Result<QSeries, Error> {
    match file {
        GvFile::Gw(s) => Ok(s),
        _ => Err(Error::Config("input is not a GW series file".into())),
    }
}

fn expect_bps(file: GvFile) -> Result<BPSTable, Error> {
    match file {
        GvFile::Bps(t) => Ok(t),
        // empty body parses as an empty GW series; accept it as an empty table
        GvFile::Gw(s) if s.is_zero() => Ok(BPSTable::new(s.config().clone())),
        _ => Err(Error::Config("input is not a BPS table file".into())),
    }
}

fn expect_e(file: GvFile) -> Result<ETable, Error> {
    match file {
        GvFile::E(t) => Ok(t),
        GvFile::Gw(s) if s.is_zero() => Ok(ETable::new(s.config().clone())),
        _ => Err(Error::Config("input is not an e-table file".into())),
    }
}

fn cutoff_report<'a>(
    cutoffs: impl Iterator<Item = (&'a gvx_core::LatticeClass, &'a u32)>,
) -> String {
    let mut out = String::new();
    for (class, cutoff) in cutoffs {
        out.push_str(&format!("# cutoff {class} g>={cutoff} vanishes in-window\n"));
    }
    out
}

fn run(command: Command) -> Result<ExitCode, Error> {
    let kernels = KernelCache::new();
    match command {
        Command::GhSeries {
            h,
            dmax,
            t_order,
            output,
        } => {
            let series = localcurves::g_series(&kernels, h, dmax, t_order)?;
            write_output(&output, &io::print_gw(&series))?;
        }
        Command::BpsFromGw {
            io: ioargs,
            config,
            strict,
            report,
        } => {
            let series = expect_gw(io::parse(&read_input(&ioargs.input)?)?)?;
            check_config(&config, series.config())?;
            let table = if strict {
                gv::bps_from_gw_strict(&kernels, &series)?
            } else {
                gv::bps_from_gw(&kernels, &series)?
            };
            let mut text = io::print_bps(&table);
            if report {
                text.push_str(&cutoff_report(table.observed_genus_cutoffs.iter()));
            }
            write_output(&ioargs.output, &text)?;
        }
        Command::GwFromBps { io: ioargs, config } => {
            let table = expect_bps(io::parse(&read_input(&ioargs.input)?)?)?;
            check_config(&config, &table.config)?;
            let series = gv::gw_from_bps(&kernels, &table)?;
            write_output(&ioargs.output, &io::print_gw(&series))?;
        }
        Command::ExtractE {
            io: ioargs,
            config,
            strict,
            report,
        } => {
            let series = expect_gw(io::parse(&read_input(&ioargs.input)?)?)?;
            check_config(&config, series.config())?;
            let cache = GSeriesCache::new();
            let table = structure::extract_e(&kernels, &cache, &series)?;
            if strict && !table.integrality_ok {
                let ((class, genus), value) = table
                    .entries
                    .iter()
                    .find(|(_, v)| !v.is_integer())
                    .expect("integrality_ok is false");
                return Err(Error::StrictIntegrality {
                    class: class.to_string(),
                    genus: *genus,
                    value: value.to_string(),
                });
            }
            let mut text = io::print_e(&table);
            if report {
                text.push_str(&cutoff_report(table.observed_genus_cutoffs.iter()));
            }
            write_output(&ioargs.output, &text)?;
        }
        Command::SeriesFromE { io: ioargs, config } => {
            let table = expect_e(io::parse(&read_input(&ioargs.input)?)?)?;
            check_config(&config, &table.config)?;
            let cache = GSeriesCache::new();
            let series = structure::series_from_e(&kernels, &cache, &table)?;
            write_output(&ioargs.output, &io::print_gw(&series))?;
        }
        Command::FanoBps {
            io: ioargs,
            c1,
            strict,
        } => {
            let file = io::parse(&read_input(&ioargs.input)?)?;
            let f = match file {
                GvFile::Fano(f) => f,
                _ => return Err(Error::Config("input is not a FANO coefficient file".into())),
            };
            if f.c1 != c1 {
                return Err(Error::Config(format!(
                    "--c1 {c1} does not match file c1={}",
                    f.c1
                )));
            }
            let bps = fano::fano_bps_from_gw(&kernels, &f)?;
            if strict {
                if let Some((g, v)) = bps.iter().find(|(_, v)| !v.is_integer()) {
                    return Err(Error::StrictIntegrality {
                        class: "(1)".into(),
                        genus: *g,
                        value: v.to_string(),
                    });
                }
            }
            let out = gvx_core::FanoSeries::new(c1, bps, f.window)?;
            write_output(&ioargs.output, &io::print_fano(&out))?;
        }
        Command::Audit {
            h,
            dmax,
            t_order,
            strict,
            output,
        } => {
            let t_order = t_order.unwrap_or(2 * dmax as i64);
            let local = localcurves::local_bps(&kernels, h, dmax, t_order)?;
            let mut text = String::new();
            text.push_str(&format!(
                "# audit h={h} dmax={dmax} t-window={t_order} (genus window {})\n",
                (t_order + 2) / 2
            ));
            text.push_str(&io::print_bps(&local.table));
            text.push_str(&format!(
                "# integrality: {}\n",
                if local.table.integrality_ok { "ok" } else { "FAILED" }
            ));
            text.push_str(&cutoff_report(local.table.observed_genus_cutoffs.iter()));
            write_output(&output, &text)?;
            if strict && !local.table.integrality_ok {
                let ((class, genus), value) = local
                    .table
                    .entries
                    .iter()
                    .find(|(_, v)| !v.is_integer())
                    .expect("integrality_ok is false");
                return Err(Error::StrictIntegrality {
                    class: class.to_string(),
                    genus: *genus,
                    value: value.to_string(),
                });
            }
        }
        Command::Verify {
            seed,
            density,
            genus_max,
        } => {
            return verify(&kernels, seed, density, genus_max);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(
    kernels: &KernelCache,
    seed: u64,
    density: f64,
    genus_max: u32,
) -> Result<ExitCode, Error> {
    let t_order = 2 * genus_max as i64 + 2;
    let mut failures = 0u32;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {name}", if ok { "ok" } else { "MISMATCH" });
        if !ok {
            failures += 1;
        }
    };

    let configs = [
        LatticeConfig::new(vec![gvx_core::int(1)], gvx_core::int(5), t_order)?,
        LatticeConfig::new(
            vec![gvx_core::int(1), gvx_core::rat(3, 2)],
            gvx_core::int(4),
            t_order,
        )?,
    ];

    for (i, config) in configs.iter().enumerate() {
        let table = io::gen_bps_table(seed.wrapping_add(i as u64), config, density, genus_max)?;
        let series = gv::gw_from_bps(kernels, &table)?;
        let back = gv::bps_from_gw(kernels, &series)?;
        check(&format!("gv roundtrip (config {i})"), back.entries == table.entries);

        let reparsed = io::parse(&io::print_bps(&table))?;
        check(
            &format!("bps serialization roundtrip (config {i})"),
            matches!(&reparsed, GvFile::Bps(t) if t.entries == table.entries),
        );
        let gw_text = io::print_gw(&series);
        check(
            &format!("gw serialization roundtrip (config {i})"),
            io::print(&io::parse(&gw_text)?) == gw_text,
        );

        let etable = io::gen_e_table(seed.wrapping_add(i as u64), config, density, genus_max)?;
        let cache = GSeriesCache::new();
        let synth = structure::series_from_e(kernels, &cache, &etable)?;
        let eback = structure::extract_e(kernels, &cache, &synth)?;
        check(
            &format!("structure roundtrip (config {i})"),
            eback.entries == etable.entries,
        );
    }

    // fano roundtrip with a seeded coefficient vector
    for c1 in 0..=2u32 {
        let mut bps = BTreeMap::new();
        let mut x = seed | 1;
        for g in 0..=genus_max {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = ((x >> 33) % 19) as i64 - 9;
            if v != 0 {
                bps.insert(g, gvx_core::int(v));
            }
        }
        let order = 2 * (genus_max + c1) as i64 + 4;
        let gw = fano::fano_gw_from_bps(kernels, c1, &bps, order)?;
        let f = gvx_core::FanoSeries::new(c1, gw, ((order + 2) / 2) as u32)?;
        let back = fano::fano_bps_from_gw(kernels, &f)?;
        check(&format!("fano roundtrip (c1={c1})"), back == bps);
    }

    if failures > 0 {
        eprintln!("{failures} roundtrip(s) failed");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}
