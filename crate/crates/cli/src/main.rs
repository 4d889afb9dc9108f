//! Command-line front end for the link models.
//!
//! Four subcommands: `compute` evaluates one scenario file under one model,
//! `sweep` runs a bundled preset or a custom single-parameter grid, `validate`
//! runs the built-in cross-check suite, and `presets` lists the bundled sweeps.
//!
//! Exit codes: 0 on success, 1 on I/O failures, 2 on usage errors, 3 on invalid
//! scenarios or sweep descriptions, 4 when a validation check breaches its
//! tolerance.

mod scenario_file;
mod validate;

use clap::{Parser, Subcommand};
use rispl_core::pathloss::near_field_boundary_m;
use rispl_core::sweep::{
    channel_scenario, evaluate_model, format_significant, preset, preset_description,
    preset_names, run_sweep, write_csv, write_json, Channel, SweepModel, SweepRow, SweepSpec,
    SweepVariant, SweptParameter, ALL_CHANNELS,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Command failure carrying the process exit code.
#[derive(Debug)]
pub enum AppError {
    /// Unreadable input or unwritable output; exits 1.
    Io(String),
    /// Bad command-line arguments; exits 2.
    Usage(String),
    /// Malformed or physically invalid scenario or sweep; exits 3.
    Validation(String),
    /// A cross-check breached its tolerance; exits 4.
    Tolerance(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Io(_) => 1,
            AppError::Usage(_) => 2,
            AppError::Validation(_) => 3,
            AppError::Tolerance(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Io(msg)
            | AppError::Usage(msg)
            | AppError::Validation(msg)
            | AppError::Tolerance(msg) => msg,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rispl",
    version,
    about = "Received power and path loss for links assisted by a reflecting panel",
    after_help = "Exit codes: 0 success, 1 I/O error, 2 usage error, 3 invalid \
                  scenario, 4 validation tolerance breached."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario under one model and print the link budget.
    Compute {
        /// Scenario description (JSON).
        #[arg(long)]
        scenario: PathBuf,
        /// Model: general, far-field, far-field-max, near-field, or two-ray.
        #[arg(long, default_value = "general")]
        model: String,
        /// Field combination: combined, direct, or ris.
        #[arg(long, default_value = "combined")]
        channel: String,
    },
    /// Sweep one parameter over a value grid and write a row per evaluation.
    Sweep {
        /// Bundled preset name; see `rispl presets`.
        #[arg(
            long,
            conflicts_with_all = ["scenario", "model", "param", "from", "to", "step"]
        )]
        preset: Option<String>,
        /// Scenario description (JSON) for a custom sweep.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Model for a custom sweep.
        #[arg(long)]
        model: Option<String>,
        /// Swept parameter: d1_m, d2_m, h_m, or h_t_m.
        #[arg(long)]
        param: Option<String>,
        /// First swept value.
        #[arg(long)]
        from: Option<f64>,
        /// Last swept value (inclusive up to rounding).
        #[arg(long)]
        to: Option<f64>,
        /// Grid step, strictly positive.
        #[arg(long)]
        step: Option<f64>,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output path, or "-" for stdout.
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run the built-in cross-check suite and print its report.
    Validate {
        /// Square panel dimension used by the randomized checks; even, 2 to 16.
        #[arg(long, default_value_t = 8, value_parser = parse_panel_size)]
        panel_size: u32,
        /// Seed of the random draws; a fixed seed fixes the report bytes.
        #[arg(long, default_value_t = 20260814)]
        seed: u64,
    },
    /// List the bundled sweep presets.
    Presets,
}

fn parse_panel_size(s: &str) -> Result<u32, String> {
    let value: u32 = s
        .parse()
        .map_err(|_| format!("'{s}' is not an unsigned integer"))?;
    if value < 2 || value > 16 || value % 2 != 0 {
        return Err(format!("panel size must be even and within 2..=16, got {value}"));
    }
    Ok(value)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Compute {
            scenario,
            model,
            channel,
        } => cmd_compute(&scenario, &model, &channel),
        Command::Sweep {
            preset,
            scenario,
            model,
            param,
            from,
            to,
            step,
            format,
            out,
        } => cmd_sweep(SweepArgs {
            preset,
            scenario,
            model,
            param,
            from,
            to,
            step,
            format,
            out,
        }),
        Command::Validate { panel_size, seed } => cmd_validate(panel_size, seed),
        Command::Presets => {
            cmd_presets();
            Ok(())
        }
    }
}

fn fs6(x: f64) -> String {
    format_significant(x, 6)
}

fn cmd_compute(path: &std::path::Path, model: &str, channel: &str) -> Result<(), AppError> {
    let model: SweepModel = model
        .parse()
        .map_err(|err: rispl_core::Error| AppError::Usage(err.to_string()))?;
    let channel: Channel = channel
        .parse()
        .map_err(|err: rispl_core::Error| AppError::Usage(err.to_string()))?;
    let scenario = scenario_file::load(path)?;
    let restricted = channel_scenario(&scenario, channel);
    let power = evaluate_model(model, &restricted)
        .map_err(|err| AppError::Validation(err.to_string()))?;

    let lambda = scenario.wavelength_m();
    let panel_height = scenario.panel.h_m();
    let boundary = near_field_boundary_m(&scenario.panel, lambda);
    let min_range = scenario
        .tx_placement
        .range_m()
        .min(scenario.rx_placement.range_m());
    let delta_phi = scenario.geometry.phase_difference_rad(panel_height, lambda);

    println!("model: {model}");
    println!("channel: {channel}");
    println!("pr_watts: {:.5e}", power.pr_watts);
    println!("pr_dbm: {}", fs6(power.pr_dbm));
    println!("pl_db: {}", fs6(power.pl_db));
    println!(
        "direct_distance_m: {}",
        fs6(scenario.geometry.direct_link_distance_m())
    );
    match delta_phi {
        Ok(phi) => println!("delta_phi_rad: {}", fs6(phi)),
        Err(_) => println!("delta_phi_rad: undefined (d = 0)"),
    }
    println!(
        "elevation_product_m2: {}",
        fs6(scenario.geometry.elevation_product_m2(panel_height))
    );
    println!("near_field_boundary_m: {}", fs6(boundary));

    let mut notes = vec![if min_range < boundary {
        format!(
            "near field (minimum placement range {} m is inside the {} m boundary)",
            fs6(min_range),
            fs6(boundary)
        )
    } else {
        format!(
            "far field (minimum placement range {} m is beyond the {} m boundary)",
            fs6(min_range),
            fs6(boundary)
        )
    }];
    if let Ok(phi) = delta_phi {
        if phi.abs() > 2.0 * std::f64::consts::PI {
            notes.push(format!(
                "two-path phase difference {} rad exceeds 2 pi, small-phase expansions do not apply",
                fs6(phi)
            ));
        }
    }
    println!("regime: {}", notes.join("; "));
    Ok(())
}

struct SweepArgs {
    preset: Option<String>,
    scenario: Option<PathBuf>,
    model: Option<String>,
    param: Option<String>,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
    format: String,
    out: String,
}

fn value_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, AppError> {
    if !from.is_finite() || !to.is_finite() || !step.is_finite() {
        return Err(AppError::Usage(
            "sweep bounds and step must be finite".into(),
        ));
    }
    if step <= 0.0 {
        return Err(AppError::Usage(format!(
            "sweep step must be positive, got {step}"
        )));
    }
    if to < from {
        return Err(AppError::Usage(format!(
            "sweep end {to} lies before start {from}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(AppError::Usage(format!(
            "sweep grid holds {count} values; the limit is 100000"
        )));
    }
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), AppError> {
    let spec = if let Some(name) = &args.preset {
        preset(name).map_err(|err| AppError::Usage(err.to_string()))?
    } else {
        let (scenario, model, param, from, to, step) = match (
            &args.scenario,
            &args.model,
            &args.param,
            args.from,
            args.to,
            args.step,
        ) {
            (Some(scenario), Some(model), Some(param), Some(from), Some(to), Some(step)) => {
                (scenario, model, param, from, to, step)
            }
            _ => {
                return Err(AppError::Usage(
                    "custom sweeps need --scenario, --model, --param, --from, --to, and \
                     --step; or pick a bundled sweep with --preset"
                        .into(),
                ))
            }
        };
        let model: SweepModel = model
            .parse()
            .map_err(|err: rispl_core::Error| AppError::Usage(err.to_string()))?;
        let swept: SweptParameter = param
            .parse()
            .map_err(|err: rispl_core::Error| AppError::Usage(err.to_string()))?;
        let scenario = scenario_file::load(scenario)?;
        SweepSpec {
            model,
            variants: vec![SweepVariant {
                name: "custom".into(),
                scenario,
            }],
            swept,
            values: value_grid(from, to, step)?,
            channels: ALL_CHANNELS.to_vec(),
        }
    };
    let rows = run_sweep(&spec).map_err(|err| AppError::Validation(err.to_string()))?;

    let mut payload = Vec::new();
    match args.format.as_str() {
        "csv" => write_csv(&rows, &mut payload)
            .map_err(|err| AppError::Io(format!("cannot render CSV: {err}")))?,
        "json" => {
            write_json(&rows, &mut payload)
                .map_err(|err| AppError::Io(format!("cannot render JSON: {err}")))?;
            payload.push(b'\n');
        }
        other => {
            return Err(AppError::Usage(format!(
                "unknown format '{other}'; expected csv or json"
            )))
        }
    }

    let summary = sweep_summary(&rows);
    if args.out == "-" {
        std::io::stdout()
            .write_all(&payload)
            .map_err(|err| AppError::Io(format!("cannot write to stdout: {err}")))?;
        eprint!("{summary}");
    } else {
        std::fs::write(&args.out, &payload)
            .map_err(|err| AppError::Io(format!("cannot write {}: {err}", args.out)))?;
        print!("wrote: {}\n{summary}", args.out);
    }
    Ok(())
}

/// Row count plus the received-power range of each variant, one line per variant
/// in first-appearance order.
fn sweep_summary(rows: &[SweepRow]) -> String {
    let mut summary = format!("rows: {}\n", rows.len());
    let mut seen: Vec<&str> = Vec::new();
    for row in rows {
        if !seen.contains(&row.variant.as_str()) {
            seen.push(&row.variant);
        }
    }
    for variant in seen {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in rows.iter().filter(|row| row.variant == variant) {
            min = min.min(row.pr_dbm);
            max = max.max(row.pr_dbm);
        }
        summary.push_str(&format!(
            "variant {variant}: pr_dbm {} to {}\n",
            fs6(min),
            fs6(max)
        ));
    }
    summary
}

fn cmd_validate(panel_size: u32, seed: u64) -> Result<(), AppError> {
    let (report, ok) = validate::run(panel_size, seed);
    print!("{report}");
    if ok {
        Ok(())
    } else {
        Err(AppError::Tolerance(
            "one or more cross-checks breached their tolerance".into(),
        ))
    }
}

fn cmd_presets() {
    for name in preset_names() {
        let description = preset_description(name).expect("bundled preset");
        println!("{name}: {description}");
    }
}
