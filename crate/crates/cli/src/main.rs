use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bec_optomech::experiment::{
    check_config, emit, load_config, load_preset, presets::preset_source, run_sweep, to_csv,
    to_json, CheckReport, Format, SweepConfig, PRESET_IDS,
};
use bec_optomech::ExecMode;
use clap::{Parser, Subcommand};

/// Noise spectra, gains and squeezing of a modulated cavity-mirror-BEC system.
#[derive(Parser)]
#[command(name = "bec-optomech", version)]
struct Cli {
    /// Evaluate on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a TOML sweep config.
    Sweep {
        config: PathBuf,
        /// Output file, `-` for stdout.
        #[arg(long, short)]
        out: PathBuf,
        /// csv or json; defaults to the output extension, else csv.
        #[arg(long, short)]
        format: Option<Format>,
    },
    /// Run a built-in figure preset.
    Preset {
        /// One of fig2a..fig5b; `list` prints the ids.
        id: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, short)]
        format: Option<Format>,
        /// Print the preset's TOML instead of running it.
        #[arg(long)]
        show: bool,
    },
    /// Consistency checks on a config, or on every preset when none is given.
    Check { config: Option<PathBuf> },
}

fn pick_format(explicit: Option<Format>, out: &Path) -> Format {
    explicit.unwrap_or_else(|| match out.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn write_result(cfg: &SweepConfig, mode: ExecMode, out: &Path, format: Option<Format>) -> Result<()> {
    let result = run_sweep(cfg, mode).with_context(|| format!("sweep `{}` failed", cfg.name))?;
    let format = pick_format(format, out);
    if out == Path::new("-") {
        let text = match format {
            Format::Csv => to_csv(&result)?,
            Format::Json => to_json(&result)?,
        };
        print!("{text}");
    } else {
        emit(&result, format, out)?;
        log::info!("wrote {} rows to {}", result.rows.len(), out.display());
    }
    Ok(())
}

fn print_report(label: &str, r: &CheckReport) {
    println!(
        "{label}: {} ({} points, {} unstable)",
        if r.passed() { "ok" } else { "FAILED" },
        r.points,
        r.unstable
    );
    for c in &r.checks {
        println!(
            "  {:<30} checked {:>6}  failures {:>4}  worst {:.3e}",
            c.name, c.points_checked, c.failures, c.worst
        );
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    match cli.cmd {
        Cmd::Sweep { config, out, format } => {
            let cfg = load_config(&config)?;
            write_result(&cfg, mode, &out, format)?;
        }
        Cmd::Preset { id, out, format, show } => {
            if id == "list" {
                println!("{}", PRESET_IDS.join("\n"));
                return Ok(true);
            }
            let cfg = load_preset(&id)?;
            if show {
                print!("{}", preset_source(&id).unwrap_or_default());
            } else if let Some(out) = out {
                write_result(&cfg, mode, &out, format)?;
            } else {
                bail!("--out is required");
            }
        }
        Cmd::Check { config } => {
            let mut ok = true;
            match config {
                Some(path) => {
                    let r = check_config(&load_config(&path)?, mode)?;
                    print_report(&path.display().to_string(), &r);
                    ok = r.passed();
                }
                None => {
                    for id in PRESET_IDS {
                        let r = check_config(&load_preset(id)?, mode)?;
                        print_report(id, &r);
                        ok &= r.passed();
                    }
                }
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
