//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::ConfigLayer;
use crate::error::{Error, Result};
use crate::indices::Rope;
use crate::io::{read_two_group_file, write_two_group_csv};
use crate::replicate::{read_expectations, reference_expectations, replicate, ToleranceProfile};
use crate::report::{analyze, plot_data, to_json, to_text, write_plot_data};
use crate::ttest::{cohen_d, simulate_two_sample, Alternative, PriorPreset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "posterior-indices",
    version,
    about = "Bayesian two-sample t-test with posterior indices"
)]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Overrides {
    #[arg(long, conflicts_with = "prior_preset")]
    pub prior_scale: Option<f64>,
    #[arg(long, value_enum)]
    pub prior_preset: Option<PresetArg>,
    #[arg(long, requires = "rope_upper", allow_hyphen_values = true)]
    pub rope_lower: Option<f64>,
    #[arg(long, requires = "rope_lower", allow_hyphen_values = true)]
    pub rope_upper: Option<f64>,
    #[arg(long)]
    pub hpd_mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub null_value: Option<f64>,
    #[arg(long, value_enum)]
    pub alternative: Option<AlternativeArg>,
    #[arg(long)]
    pub grid_size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Medium,
    Wide,
    Ultrawide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlternativeArg {
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a `group,value` CSV file.
    Analyze {
        data: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Record the generation time in the report.
        #[arg(long)]
        timestamp: bool,
    },
    /// Recompute the running example's reported numbers.
    ReplicatePaper {
        #[arg(long, value_enum, default_value = "strict")]
        profile: ProfileArg,
        /// JSON list of {name, expected, tolerance} replacing the built-in table.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Write a seeded two-group normal sample as CSV.
    Simulate {
        #[arg(long, default_value_t = 2.51, allow_hyphen_values = true)]
        mean1: f64,
        #[arg(long, default_value_t = 1.81)]
        sd1: f64,
        #[arg(long, default_value_t = 1.72, allow_hyphen_values = true)]
        mean2: f64,
        #[arg(long, default_value_t = 1.51)]
        sd2: f64,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
    /// Write density and annotation CSVs for plotting.
    Plotdata {
        data: PathBuf,
        #[arg(long, default_value = "plotdata")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Strict,
    Loose,
}

/// Seed used by `simulate` when none is given.
pub const DEFAULT_SIMULATION_SEED: u64 = 2019;

impl Overrides {
    fn layer(&self, seed: Option<u64>) -> Result<ConfigLayer> {
        let rope = match (self.rope_lower, self.rope_upper) {
            (Some(lo), Some(hi)) => {
                Some(Rope::new(lo, hi).map_err(|e| Error::Config(e.to_string()))?)
            }
            _ => None,
        };
        Ok(ConfigLayer {
            prior_scale: self.prior_scale,
            prior_preset: self.prior_preset.map(|p| match p {
                PresetArg::Medium => PriorPreset::Medium,
                PresetArg::Wide => PriorPreset::Wide,
                PresetArg::Ultrawide => PriorPreset::Ultrawide,
            }),
            rope,
            hpd_mass: self.hpd_mass,
            null_value: self.null_value,
            alternative: self.alternative.map(|a| match a {
                AlternativeArg::TwoSided => Alternative::TwoSided,
                AlternativeArg::Greater => Alternative::Greater,
                AlternativeArg::Less => Alternative::Less,
            }),
            grid_size: self.grid_size,
            thresholds: None,
            seed,
        })
    }
}

fn resolve_config(
    cli_config: Option<&Path>,
    overrides: &Overrides,
    seed: Option<u64>,
) -> Result<crate::config::AnalysisConfig> {
    let file = match cli_config {
        Some(p) => ConfigLayer::from_path(p)?,
        None => ConfigLayer::default(),
    };
    file.merge(overrides.layer(seed)?)?.resolve()
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Analyze {
            data,
            overrides,
            timestamp,
        } => {
            let config = resolve_config(cli.config.as_deref(), overrides, cli.seed)?;
            let data = read_two_group_file(data)?;
            let mut report = analyze(&data, &config)?;
            if *timestamp {
                report.generated_at_unix = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .ok()
                    .map(|d| d.as_secs());
            }
            let body = match cli.format {
                Format::Json => to_json(&report)?,
                Format::Text => to_text(&report),
            };
            emit(out, body.as_bytes())?;
            Ok(0)
        }
        Command::ReplicatePaper { profile, expected } => {
            let profile = match profile {
                ProfileArg::Strict => ToleranceProfile::Strict,
                ProfileArg::Loose => ToleranceProfile::Loose,
            };
            let table = match expected {
                Some(p) => read_expectations(p)?,
                None => reference_expectations(),
            };
            let rep = replicate(profile, &table)?;
            let body = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&rep).map_err(|e| Error::Io(e.to_string()))?;
                    s.push('\n');
                    s
                }
                Format::Text => crate::replicate::to_text(&rep),
            };
            emit(out, body.as_bytes())?;
            Ok(if rep.all_pass { 0 } else { 1 })
        }
        Command::Simulate {
            mean1,
            sd1,
            mean2,
            sd2,
            n,
        } => {
            let seed = cli.seed.unwrap_or(DEFAULT_SIMULATION_SEED);
            let data = simulate_two_sample(*mean1, *sd1, *mean2, *sd2, *n, seed)?;
            let mut buf = Vec::new();
            write_two_group_csv(&data, &mut buf)?;
            let d = cohen_d(&data)?;
            match out {
                Some(_) => {
                    emit(out, &buf)?;
                    println!("cohen_d {d}");
                }
                None => {
                    emit(None, &buf)?;
                    eprintln!("cohen_d {d}");
                }
            }
            Ok(0)
        }
        Command::Plotdata {
            data,
            out_dir,
            overrides,
        } => {
            let config = resolve_config(cli.config.as_deref(), overrides, cli.seed)?;
            let data = read_two_group_file(data)?;
            let plot = plot_data(&data, &config)?;
            write_plot_data(&plot, out_dir)?;
            Ok(0)
        }
    }
}

/// Parses arguments, runs and maps errors to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "posterior-indices",
            "analyze",
            "data.csv",
            "--format",
            "text",
            "--seed",
            "7",
            "--rope-lower",
            "-0.2",
            "--rope-upper",
            "0.2",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Text);
        assert_eq!(cli.seed, Some(7));
        match cli.command {
            Command::Analyze { overrides, .. } => assert_eq!(overrides.rope_lower, Some(-0.2)),
            _ => panic!(),
        }
    }

    #[test]
    fn preset_and_scale_conflict() {
        assert!(Cli::try_parse_from([
            "posterior-indices",
            "analyze",
            "d.csv",
            "--prior-scale",
            "1",
            "--prior-preset",
            "wide"
        ])
        .is_err());
    }

    #[test]
    fn help_exits_zero_and_bad_flag_two() {
        assert_eq!(run(["posterior-indices", "--help"]), 0);
        assert_eq!(run(["posterior-indices", "analyze", "--bogus"]), 2);
    }
}
