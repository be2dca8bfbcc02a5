/// `println!` that keeps going when stdout is closed early.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

mod instance;
mod manifest;
mod plot;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dimerlab_core::experiments::{run_experiment, write_outputs, ExperimentConfig, Mode};
use dimerlab_core::groundstate::{max_weight, zero_temperature_ladder};
use dimerlab_core::jacobi::{det_check, resolvent_u, JacobiMatrix};
use dimerlab_core::leeyang::{localization_check, LeeYangSpectrum, SpectrumDump};
use dimerlab_core::polynomial::PolynomialDump;
use dimerlab_core::sampler::{dyadic_grid, matchings_to_json, GibbsSampler, Observables};
use dimerlab_core::transfer::Problem;
use dimerlab_core::{CountingMask, Domain, RngSeed};
use instance::{resolve, InstanceArgs};
use manifest::Manifest;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "dimerlab", version, about = "Exact and replica computations for disordered monomer-dimer models")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Computation mode; overrides the configuration.
    #[arg(long, global = true)]
    mode: Option<ModeArg>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Poly,
    Scalar,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Poly => Mode::Poly,
            ModeArg::Scalar => Mode::Scalar,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition function and coefficients of one instance.
    Exact {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Tilt at which the counted-monomer moments are reported.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x: f64,
        /// Count only monomers in layers START:END (0-based, half open).
        #[arg(long, value_name = "START:END")]
        count_layers: Option<String>,
    },
    /// Lee-Yang zeroes of one instance.
    Spectrum {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Exact Gibbs samples and height functions.
    Sample {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// The height grid has 2^k intervals.
        #[arg(long, default_value_t = 3)]
        grid_log2: u32,
    },
    /// Ground state and the zero-temperature ladder.
    Ground {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Inverse temperatures for the ladder.
        #[arg(long, value_delimiter = ',')]
        betas: Vec<f64>,
    },
    /// Determinant, eigenvalue and resolvent identities for h = 1.
    Jacobi {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Tilts at which the resolvent formula is checked.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-1,0,1")]
        x: Vec<f64>,
    },
    /// Replica campaign with the checks enabled in the configuration.
    Experiment,
    /// SVG chart from a CSV file.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "line")]
        kind: plot::Kind,
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long, default_value = "log_z")]
        y: String,
        #[arg(long, default_value_t = 30)]
        bins: usize,
        /// File name inside the output directory.
        #[arg(long, default_value = "plot.svg")]
        name: String,
    },
}

/// Failure classes that map to exit codes.
enum Failure {
    Checks,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<dimerlab_core::Error> for Failure {
    fn from(e: dimerlab_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn load_config(common: &Common) -> Result<Option<ExperimentConfig>> {
    match &common.config {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
            Ok(Some(
                ExperimentConfig::from_toml(&text).with_context(|| format!("invalid config {}", p.display()))?,
            ))
        }
    }
}

fn seed_of(common: &Common, config: Option<&ExperimentConfig>) -> u64 {
    common.seed.or(config.map(|c| c.run.seed)).unwrap_or(0)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    std::fs::write(dir.join(name), text).with_context(|| format!("cannot write {name}"))?;
    Ok(())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once(':').context("expected START:END")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let common = &cli.common;
    let config = load_config(common)?;
    let seed = seed_of(common, config.as_ref());
    let mut manifest = Manifest::new(seed, config.as_ref());
    let out = common.out.clone();
    if let Some(t) = common.threads {
        manifest.threads = Some(t);
    }
    match cli.command {
        Command::Exact {
            instance,
            x,
            count_layers,
        } => {
            let (g, w, prov) = resolve(&instance, config.as_ref(), seed)?;
            manifest.instance = Some(prov);
            let mask = match count_layers {
                Some(r) => {
                    let (a, b) = parse_range(&r)?;
                    CountingMask::layers(a, b)
                }
                None => CountingMask::All,
            };
            let mode = common.mode.map(Mode::from).unwrap_or(Mode::Poly);
            manifest.mode = Some(mode);
            let p = Problem::new(&g, &w).mask(&mask).tilt(x);
            let body = match mode {
                Mode::Poly => {
                    let poly = p.polynomial()?;
                    let c = poly.cumulants(x, 2)?;
                    out!("log Z = {}", poly.log_z(0.0));
                    out!("mean U = {}  var U = {}  (x = {x})", c[0], c[1]);
                    let dump = serde_json::to_string(&PolynomialDump::from(&poly)).map_err(anyhow::Error::from)?;
                    out!("{dump}");
                    dump
                }
                Mode::Scalar => {
                    let m = p.moments()?;
                    let lz0 = Problem::new(&g, &w).log_z()?;
                    out!("log Z = {lz0}");
                    out!("mean U = {}  var U = {}  (x = {x})", m.mean, m.var);
                    json!({"log_z": lz0, "log_z_x": m.log_mass, "x": x, "mean_u": m.mean, "var_u": m.var}).to_string()
                }
            };
            if let Some(dir) = &out {
                write(dir, "exact.json", &body)?;
                manifest.write(dir)?;
            }
        }
        Command::Spectrum { instance } => {
            let (g, w, prov) = resolve(&instance, config.as_ref(), seed)?;
            manifest.instance = Some(prov);
            let spec = LeeYangSpectrum::compute(&g, &w, None)?;
            let loc = localization_check(&g, &w, &spec)?;
            let body = json!({
                "spectrum": SpectrumDump::from(&spec),
                "reconstruction_residual": spec.residual(),
                "localization": loc,
            });
            let text = serde_json::to_string_pretty(&body).map_err(anyhow::Error::from)?;
            out!("{text}");
            if let Some(dir) = &out {
                write(dir, "spectrum.json", &text)?;
                manifest.write(dir)?;
            }
        }
        Command::Sample {
            instance,
            count,
            grid_log2,
        } => {
            let (g, w, prov) = resolve(&instance, config.as_ref(), seed)?;
            manifest.instance = Some(prov);
            let sampler = GibbsSampler::new(&g, &w)?;
            let u = Problem::new(&g, &w).moments()?.mean / g.n() as f64;
            let grid = dyadic_grid(grid_log2);
            let mut stream = RngSeed::new(seed, instance.stream).uniforms(Domain::Gibbs);
            let draws: Vec<_> = (0..count).map(|_| sampler.draw(&mut stream)).collect();
            let mut csv = csv::Writer::from_writer(Vec::new());
            csv.write_record(["sample", "t", "theta", "theta_hat"]).map_err(anyhow::Error::from)?;
            for (k, m) in draws.iter().enumerate() {
                let h = Observables::of(&g, m).height(&grid, u);
                for i in 0..grid.len() {
                    csv.write_record([
                        k.to_string(),
                        h.t[i].to_string(),
                        h.theta[i].to_string(),
                        h.theta_hat[i].to_string(),
                    ])
                    .map_err(anyhow::Error::from)?;
                }
            }
            let heights = String::from_utf8(csv.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
                .map_err(anyhow::Error::from)?;
            let matchings = matchings_to_json(&draws)?;
            match &out {
                Some(dir) => {
                    write(dir, "matchings.json", &matchings)?;
                    write(dir, "heights.csv", &heights)?;
                    manifest.write(dir)?;
                    out!("{count} samples written to {}", dir.display());
                }
                None => out!("{matchings}"),
            }
        }
        Command::Ground { instance, betas } => {
            let (g, w, prov) = resolve(&instance, config.as_ref(), seed)?;
            manifest.instance = Some(prov);
            let gs = max_weight(&g, &w)?;
            let ladder = if betas.is_empty() {
                Vec::new()
            } else {
                zero_temperature_ladder(&g, &w, &betas)?.1
            };
            let body = json!({"m_n": gs.value, "argmax": gs.argmax.edges(), "ladder": ladder});
            let text = serde_json::to_string_pretty(&body).map_err(anyhow::Error::from)?;
            out!("{text}");
            if let Some(dir) = &out {
                write(dir, "ground.json", &text)?;
                manifest.write(dir)?;
            }
        }
        Command::Jacobi { instance, x } => {
            let (g, w, prov) = resolve(&instance, config.as_ref(), seed)?;
            manifest.instance = Some(prov);
            if g.h() != 1 {
                return Err(anyhow::anyhow!("the Jacobi identities need h = 1").into());
            }
            let det = det_check(&g, &w)?;
            let eigs = JacobiMatrix::from_weights(&g, &w)?.gauge()?.real_part_eigenvalues();
            let spec = LeeYangSpectrum::compute(&g, &w, None)?;
            let eig_residual = eigs.iter().zip(spec.signed()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let poly = Problem::new(&g, &w).polynomial().ok();
            let mut resolvent = Vec::new();
            for &t in &x {
                let want = match &poly {
                    Some(p) => p.cumulants(t, 1)?[0],
                    None => Problem::new(&g, &w).tilt(t).moments()?.mean,
                };
                let got = resolvent_u(&eigs, t);
                resolvent.push(json!({"x": t, "resolvent": got, "transfer": want, "residual": (got - want).abs()}));
            }
            let res_max = resolvent
                .iter()
                .map(|r| r["residual"].as_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            let ok = det.residual <= 1e-9 && det.gauge_residual <= 1e-9 && det.phase_ok && eig_residual <= 1e-8 && res_max <= 1e-8;
            let body = json!({"determinant": det, "eigenvalue_residual": eig_residual, "resolvent": resolvent, "passed": ok});
            let text = serde_json::to_string_pretty(&body).map_err(anyhow::Error::from)?;
            out!("{text}");
            if let Some(dir) = &out {
                write(dir, "jacobi.json", &text)?;
                manifest.write(dir)?;
            }
            if !ok {
                return Err(Failure::Checks);
            }
        }
        Command::Experiment => {
            let Some(mut cfg) = config else {
                return Err(anyhow::anyhow!("experiment needs --config").into());
            };
            if let Some(s) = common.seed {
                cfg.run.seed = s;
            }
            if let Some(m) = common.mode {
                cfg.run.mode = m.into();
            }
            if let Some(t) = common.threads {
                cfg.run.threads = t;
            }
            if let Some(o) = &common.out {
                cfg.output.dir = o.clone();
            }
            cfg.validate()?;
            manifest = Manifest::new(cfg.run.seed, Some(&cfg));
            manifest.mode = Some(cfg.run.mode);
            manifest.threads = Some(cfg.run.threads);
            let result = run_experiment(&cfg)?;
            write_outputs(&result, &cfg.output.dir)?;
            manifest.write(&cfg.output.dir)?;
            for c in &result.report.checks {
                out!("{:<20} {:?}", c.name, c.status);
            }
            out!("outputs in {}", cfg.output.dir.display());
            if !result.report.all_passed() {
                return Err(Failure::Checks);
            }
        }
        Command::Plot {
            input,
            kind,
            x,
            y,
            bins,
            name,
        } => {
            let svg = plot::render(&input, kind, &x, &y, bins)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            write(&dir, &name, &svg)?;
            out!("{}", dir.join(&name).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
