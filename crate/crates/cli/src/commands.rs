use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use taols::estimator::{k_grid, k_sweep_with, validate_grid, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_LEVEL, MIN_K};
use taols::forcing::co2_series_forcing;
use taols::io::{load_dataset, load_series, load_two_files, write_dataset, write_series, FORCING_COLUMN};
use taols::report::{lambda_ecs_svg, phi_share_svg, text_report, write_sweep_csv, ReportContext, SweepTable};
use taols::synthetic::{simulate, DgpSpec, Noise};
use taols::CovarianceKind;

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::{EstimateArgs, ForcingArgs, Format, NoiseKind, SimulateArgs};

const DEFAULT_OUT_DIR: &str = "taols-output";

enum Input {
    Combined(PathBuf),
    Split { forcing: PathBuf, temperature: PathBuf },
}

/// Fully resolved `estimate` settings.
struct RunConfig {
    input: Input,
    k_min: usize,
    k_max: usize,
    k_step: usize,
    level: f64,
    out_dir: PathBuf,
    formats: Vec<Format>,
    covariance: CovarianceKind,
    timestamp: bool,
}

impl RunConfig {
    fn resolve(args: EstimateArgs) -> Result<Self, CliError> {
        let cfg = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let input = match (args.input, args.forcing, args.temperature) {
            (Some(p), _, _) => Input::Combined(p),
            (None, Some(f), Some(s)) => Input::Split {
                forcing: f,
                temperature: s,
            },
            _ => match (cfg.path("input"), cfg.path("forcing"), cfg.path("temperature")) {
                (Some(p), _, _) => Input::Combined(p),
                (None, Some(f), Some(s)) => Input::Split {
                    forcing: f,
                    temperature: s,
                },
                _ => {
                    return Err(CliError::Usage(
                        "no input: give --input or both --forcing and --temperature".into(),
                    ))
                }
            },
        };
        let config = Self {
            input,
            k_min: pick(args.k_min, cfg.get("k_min")?, DEFAULT_K_MIN),
            k_max: pick(args.k_max, cfg.get("k_max")?, DEFAULT_K_MAX),
            k_step: pick(args.k_step, cfg.get("k_step")?, 1),
            level: pick(args.level, cfg.get("level")?, DEFAULT_LEVEL),
            out_dir: pick(args.out_dir, cfg.path("out_dir"), PathBuf::from(DEFAULT_OUT_DIR)),
            formats: pick(
                args.format,
                cfg.formats()?,
                vec![Format::Csv, Format::Svg, Format::Text],
            ),
            covariance: if args.robust_se || cfg.get("robust_se")?.unwrap_or(false) {
                CovarianceKind::Robust
            } else {
                CovarianceKind::Homoskedastic
            },
            timestamp: !(args.no_timestamp || cfg.get("no_timestamp")?.unwrap_or(false)),
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks that do not need the data; K against T is checked after loading.
    fn validate(&self) -> Result<(), CliError> {
        if self.k_min < MIN_K {
            return Err(CliError::Usage(format!(
                "invalid K: k_min = {} is below {MIN_K}",
                self.k_min
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(CliError::Usage(format!("level must lie in (0, 1), got {}", self.level)));
        }
        if self.formats.is_empty() {
            return Err(CliError::Usage("no output format selected".into()));
        }
        Ok(())
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub fn run_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve(args)?;
    let loaded = match &config.input {
        Input::Combined(p) => load_dataset(p)?,
        Input::Split { forcing, temperature } => load_two_files(forcing, temperature)?,
    };
    let data = &loaded.dataset;
    let grid = k_grid(config.k_min, config.k_max, config.k_step)?;
    validate_grid(&grid, data.len())?;

    let sweep = k_sweep_with(data, &grid, config.covariance)?;
    let table = SweepTable::new(&sweep, config.level)?;
    let ctx = ReportContext {
        label: data.label().to_string(),
        start_year: data.start_year(),
        end_year: data.end_year(),
        covariance: config.covariance.name().to_string(),
        timestamp: config
            .timestamp
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    };
    let report = text_report(&sweep, &table, &ctx);

    fs::create_dir_all(&config.out_dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", config.out_dir.display())))?;
    let out = |name: &str| config.out_dir.join(name);
    for format in &config.formats {
        match format {
            Format::Csv => {
                let mut buf = Vec::new();
                write_sweep_csv(&table, &mut buf).expect("writing to memory");
                write_file(&out("sweep.csv"), &buf)?;
            }
            Format::Svg => {
                write_file(&out("lambda_ecs.svg"), lambda_ecs_svg(&table).as_bytes())?;
                write_file(&out("phi_share.svg"), phi_share_svg(&table).as_bytes())?;
            }
            Format::Text => write_file(&out("summary.txt"), report.as_bytes())?,
        }
    }
    print!("{report}");
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Data(format!("cannot write to stdout: {e}"))),
    }
}

pub fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let noise = match args.noise {
        NoiseKind::None => Noise::None,
        NoiseKind::Iid => Noise::IidNormal { sigma: args.sigma },
        NoiseKind::Ar1 => Noise::Ar1 {
            rho: args.rho,
            sigma: args.sigma,
        },
        NoiseKind::Spiked => Noise::Spiked {
            sigma: args.sigma,
            probability: args.spike_prob,
            scale: args.spike_scale,
        },
    };
    let spec = DgpSpec {
        t: args.t,
        lambda: args.lambda,
        phi: args.phi,
        gamma: args.gamma,
        mu: args.mu,
        noise,
        sigma_s: args.sigma_s,
        seed: args.seed,
        start_year: args.start_year,
    };
    let data = simulate(&spec)?;
    let mut buf = Vec::new();
    write_dataset(&data, &mut buf).expect("writing to memory");
    emit(args.output.as_deref(), &buf)
}

pub fn run_forcing(args: ForcingArgs) -> Result<(), CliError> {
    let co2 = load_series(&args.input, Some("co2_ppm"))?;
    let forcing = co2_series_forcing(&co2, args.baseline)?;
    let mut buf = Vec::new();
    write_series(&forcing, FORCING_COLUMN, &mut buf).expect("writing to memory");
    emit(args.output.as_deref(), &buf)
}
