use anyhow::{bail, Context, Result};
use clap::Args;
use dimerlab_core::experiments::{ExperimentConfig, FiberConfig};
use dimerlab_core::weights::{sample_weights, WeightDump};
use dimerlab_core::{CylinderGraph, DisorderSpec, RngSeed, Weights};
use std::path::PathBuf;

/// How a single instance is chosen.
#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Number of layers.
    #[arg(long)]
    pub n: Option<usize>,
    /// Fiber size.
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Fiber graph: path, cycle, complete or empty.
    #[arg(long, default_value = "path")]
    pub fiber: String,
    /// Same weight on every vertex and edge.
    #[arg(long = "const", conflicts_with_all = ["nu", "omega", "weights"])]
    pub constant: Option<f64>,
    /// Constant vertex weight.
    #[arg(long, conflicts_with = "weights")]
    pub nu: Option<f64>,
    /// Constant edge weight.
    #[arg(long, conflicts_with = "weights")]
    pub omega: Option<f64>,
    /// Graph and weights from a JSON dump.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Replica stream used when the weights are sampled.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

/// Where the instance came from, for the manifest.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Provenance {
    pub seed: Option<RngSeed>,
    pub disorder: Option<DisorderSpec>,
    pub weights_file: Option<PathBuf>,
}

/// Resolves the instance: a weight dump, constant weights, or weights
/// sampled from the configuration's disorder (standard normal without one).
pub fn resolve(
    args: &InstanceArgs,
    config: Option<&ExperimentConfig>,
    seed: u64,
) -> Result<(CylinderGraph, Weights, Provenance)> {
    if let Some(path) = &args.weights {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let (g, w) = WeightDump::from_json(&text)?.into_parts()?;
        return Ok((
            g,
            w,
            Provenance {
                seed: None,
                disorder: None,
                weights_file: Some(path.clone()),
            },
        ));
    }
    let fiber = match config {
        Some(c) => c.fiber.clone(),
        None => FiberConfig {
            kind: args.fiber.clone(),
            h: args.h,
            edges: None,
        },
    };
    let n = match (args.n, config) {
        (Some(n), _) => n,
        (None, Some(c)) => c.top_n(),
        (None, None) => bail!("--n is required unless --weights or --config is given"),
    };
    let g = fiber.cylinder(n)?;
    if args.constant.is_some() || args.nu.is_some() || args.omega.is_some() {
        let nu = args.constant.or(args.nu).unwrap_or(0.0);
        let omega = args.constant.or(args.omega).unwrap_or(0.0);
        let spec = DisorderSpec::constant(nu, omega);
        let w = Weights::constant(&g, nu, omega)?;
        return Ok((
            g,
            w,
            Provenance {
                seed: None,
                disorder: Some(spec),
                weights_file: None,
            },
        ));
    }
    let spec = config.map_or_else(DisorderSpec::standard_normal, |c| c.disorder.clone());
    let rng = RngSeed::new(seed, args.stream);
    let w = sample_weights(&g, &spec, rng)?;
    Ok((
        g,
        w,
        Provenance {
            seed: Some(rng),
            disorder: Some(spec),
            weights_file: None,
        },
    ))
}
