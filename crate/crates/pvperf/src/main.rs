//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 config error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pvperf::config::{self, Config};
use pvperf::error::{ConfigError, IngestError};
use pvperf::report::{self, AnalyzeOptions};
use pvperf::{impact, ingest, metrics, solar, synth, weather};

#[derive(Parser)]
#[command(name = "pvperf", version, about = "Rooftop grid-tied PV performance toolkit")]
struct Cli {
    /// Config JSON file; built-in reference system when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for report-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Ignore unknown keys in the config file.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the config file and report violations.
    Validate,
    /// Fill missing gpoa_w_m2 in a weather CSV via isotropic transposition.
    Transpose {
        /// Input weather.csv.
        weather: PathBuf,
    },
    /// Full pipeline: ingest, metrics, correlations, impact, benchmark.
    Analyze {
        generation: PathBuf,
        weather: PathBuf,
        /// Annual grid export in kWh (default: estimated share of generation).
        #[arg(long)]
        export_kwh: Option<f64>,
        /// Annual degradation rate applied to revenue energy.
        #[arg(long, default_value_t = 0.0)]
        degradation: f64,
    },
    /// Weather-class correlation statistics and plot data.
    Correlate {
        generation: PathBuf,
        weather: PathBuf,
        /// Where to write the plot-data CSV.
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },
    /// Economic and environmental impact from annual figures.
    Impact {
        /// Annual PV generation, kWh.
        #[arg(long)]
        annual_energy_kwh: f64,
        /// Annual grid export, kWh (default: estimated share of generation).
        #[arg(long)]
        export_kwh: Option<f64>,
        /// Override the configured discount rate.
        #[arg(long)]
        rate: Option<f64>,
        /// Override the configured tariff.
        #[arg(long)]
        tariff: Option<f64>,
        /// Annual degradation rate applied to revenue energy.
        #[arg(long, default_value_t = 0.0)]
        degradation: f64,
    },
    /// Generate a synthetic generation/weather CSV pair.
    Synth {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 365)]
        days: u32,
        /// Start date, YYYY-MM-DD.
        #[arg(long, default_value = "2021-01-01")]
        start: String,
        /// Output path for generation.csv.
        #[arg(long, default_value = "generation.csv")]
        gen_out: PathBuf,
        /// Output path for weather.csv.
        #[arg(long, default_value = "weather.csv")]
        weather_out: PathBuf,
    },
    /// Rank annual metrics within the embedded cross-study table.
    Benchmark {
        #[arg(long)]
        pr_pct: f64,
        #[arg(long)]
        cuf_pct: f64,
        #[arg(long)]
        eta_sys_pct: f64,
    },
}

enum CliError {
    Usage(String),
    Data(String),
    Config(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Config(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Config(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    match &cli.config {
        None => Ok(Config::default()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Ok(config::parse_config(&text, cli.lenient)?)
        }
    }
}

/// Writes atomically: temp file in the target directory, then rename.
fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => write_file_atomic(path, content.as_bytes()),
    }
}

fn write_file_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| CliError::Data(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Validate => {
            let report = config::validate_all(&cfg);
            write_output(&cli.out, &report::to_rounded_json(&report))?;
            if !report.is_valid() {
                return Err(CliError::Config(format!(
                    "{} invariant violation(s)",
                    report.violations.len()
                )));
            }
            Ok(())
        }
        Command::Transpose { weather } => {
            let parsed = ingest::parse_weather_csv(read_file(weather)?)?;
            let records: Vec<_> = parsed
                .records
                .into_iter()
                .map(|mut r| {
                    if r.gpoa_w_m2.is_none() {
                        let mid = r.timestamp.with_timezone(&chrono::Utc)
                            - chrono::Duration::minutes(30);
                        let sun = solar::sun_position(&cfg.system, mid);
                        r.gpoa_w_m2 = Some(solar::transpose_poa(
                            r.ghi_w_m2,
                            r.dni_w_m2,
                            r.dhi_w_m2,
                            &sun,
                            &cfg.system,
                        ));
                    }
                    r
                })
                .collect();
            let mut buf = Vec::new();
            ingest::write_weather_csv(&records, &mut buf)
                .map_err(|e| CliError::Data(e.to_string()))?;
            write_output(&cli.out, &String::from_utf8(buf).expect("utf8 csv"))
        }
        Command::Analyze {
            generation,
            weather,
            export_kwh,
            degradation,
        } => {
            let violations = config::validate_all(&cfg);
            if !violations.is_valid() {
                return Err(CliError::Config(format!(
                    "invalid config: {:?}",
                    violations.violations
                )));
            }
            let opts = AnalyzeOptions {
                annual_export_kwh: *export_kwh,
                degradation_rate: *degradation,
                ..AnalyzeOptions::default()
            };
            let (rep, _plot) =
                report::analyze(&cfg, read_file(generation)?, read_file(weather)?, &opts)
                    .map_err(|e| CliError::Data(e.to_string()))?;
            let content = match cli.format {
                Format::Json => report::to_json(&rep),
                Format::Csv => report::monthly_csv(&rep),
                Format::Md => report::to_markdown(&rep),
            };
            write_output(&cli.out, &content)
        }
        Command::Correlate {
            generation,
            weather,
            plot_out,
        } => {
            let gen = ingest::parse_generation_csv(read_file(generation)?)?;
            let wx = ingest::parse_weather_csv(read_file(weather)?)?;
            let mut gaps = gen.gaps;
            gaps.extend(wx.gaps);
            let series = ingest::align(
                &gen.records,
                &wx.records,
                &cfg.system,
                ingest::ValidityPolicy::default(),
                gaps,
            )?;
            let (stats, plot) = weather::correlation_report(
                &series,
                &cfg.system,
                &weather::ClassifyThresholds::default(),
            );
            write_output(&cli.out, &report::to_rounded_json(&stats))?;
            if let Some(path) = plot_out {
                write_file_atomic(path, report::plot_csv(&plot).as_bytes())?;
            }
            Ok(())
        }
        Command::Impact {
            annual_energy_kwh,
            export_kwh,
            rate,
            tariff,
            degradation,
        } => {
            let mut fin = cfg.finance.clone();
            if let Some(r) = rate {
                fin.discount_rate = *r;
            }
            if let Some(t) = tariff {
                fin.tariff_per_kwh = *t;
            }
            let export = export_kwh.unwrap_or(annual_energy_kwh * report::DEFAULT_EXPORT_SHARE);
            let result = impact::evaluate(
                &fin,
                &cfg.emissions,
                *annual_energy_kwh,
                export,
                cfg.system.p_rated_kwp,
                *degradation,
            )
            .map_err(|e| CliError::Data(e.to_string()))?;
            write_output(&cli.out, &report::to_rounded_json(&result))
        }
        Command::Synth {
            seed,
            days,
            start,
            gen_out,
            weather_out,
        } => {
            let start_date = start
                .parse::<chrono::NaiveDate>()
                .map_err(|e| CliError::Usage(format!("bad --start date `{start}`: {e}")))?;
            let scfg = synth::SynthConfig {
                seed: *seed,
                n_days: *days,
                start_date,
                ..synth::SynthConfig::default()
            };
            let out = synth::generate(&cfg.system, &scfg)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            write_file_atomic(gen_out, &out.generation_csv)?;
            write_file_atomic(weather_out, &out.weather_csv)?;
            eprintln!(
                "wrote {} and {}",
                gen_out.display(),
                weather_out.display()
            );
            Ok(())
        }
        Command::Benchmark {
            pr_pct,
            cuf_pct,
            eta_sys_pct,
        } => {
            let annual = metrics::AnnualMetrics {
                n_months: 12,
                n_valid_months: 12,
                e_ac_total_kwh: 0.0,
                e_dc_total_kwh: 0.0,
                h_poa_total_kwh_m2: 0.0,
                cuf_pct: *cuf_pct,
                cuf_hours_basis: 8760.0,
                mean_y_a: 0.0,
                mean_y_r: 0.0,
                mean_y_f: 0.0,
                mean_l_c: 0.0,
                mean_l_s: 0.0,
                mean_pr_pct: *pr_pct,
                mean_eta_array_pct: 0.0,
                mean_eta_inv_pct: 0.0,
                mean_eta_sys_pct: *eta_sys_pct,
            };
            let block = report::benchmark_compare(&annual);
            write_output(&cli.out, &report::to_rounded_json(&block))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version output is a success path.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
