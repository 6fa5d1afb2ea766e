use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diqss_core::channel::ChannelParams;
use diqss_core::rates::{Strategy, Variant, DEFAULT_BLOCK_LENGTH};
use diqss_core::sweep::{Axis, AxisName};

/// Flip probability used by the noise pre-processing variants when `--q` is
/// not given.
pub const DEFAULT_Q: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(
    name = "diqss",
    version,
    about = "Device-independent quantum secret sharing calculator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Secret-sharing rate at one operating point
    Rate(PointArgs),
    /// QBER before and after distillation at one operating point
    Qber(PointArgs),
    /// Smallest detection efficiency with a positive rate
    Threshold(ThresholdArgs),
    /// Channel efficiency at a distance, or the distance for an efficiency
    Distance(DistanceArgs),
    /// Rate grid over one or two parameters
    Sweep(SweepArgs),
    /// The eight-variant performance table.
    ///
    /// Rates are evaluated at (--fidelity, --eta); thresholds at --fidelity;
    /// maximum distances at --distance-fidelity, which defaults to 1 as in the
    /// published table.
    Table1(Table1Args),
    /// Monte Carlo run of the full protocol pipeline
    Simulate(SimulateArgs),
    /// Built-in consistency and regression checks
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantName {
    Basic,
    Np,
    Ps,
    Nps,
}

impl VariantName {
    pub fn strategy(self) -> Strategy {
        match self {
            VariantName::Basic => Strategy::Basic,
            VariantName::Np => Strategy::NoisePreprocessing,
            VariantName::Ps => Strategy::PostSelection,
            VariantName::Nps => Strategy::Combined,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VariantArgs {
    #[arg(long, value_enum, default_value = "basic")]
    pub variant: VariantName,

    /// Apply advantage distillation
    #[arg(long)]
    pub ad: bool,

    #[arg(long = "block-len", default_value_t = DEFAULT_BLOCK_LENGTH)]
    pub block_len: u32,

    /// Flip probability [default: 0.05 for np/nps, 0 otherwise]
    #[arg(long)]
    pub q: Option<f64>,
}

impl VariantArgs {
    pub fn variant(&self) -> Variant {
        let strategy = self.variant.strategy();
        let q = self.q.unwrap_or(if strategy.noise_preprocessing() {
            DEFAULT_Q
        } else {
            0.0
        });
        let v = Variant::new(strategy).with_flip_probability(q);
        if self.ad {
            v.with_advantage_distillation(self.block_len)
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Fiber loss in dB/km
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,

    /// Detector efficiency
    #[arg(long = "eta-d", default_value_t = 0.98)]
    pub eta_d: f64,

    /// Coupling efficiency
    #[arg(long = "eta-c", default_value_t = 0.99)]
    pub eta_c: f64,
}

impl ChannelArgs {
    pub fn params(&self) -> diqss_core::Result<ChannelParams> {
        ChannelParams::new(self.alpha, self.eta_d, self.eta_c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EtaOrDistance {
    /// Global detection efficiency [default: 1]
    #[arg(long, conflicts_with = "distance")]
    pub eta: Option<f64>,

    /// Source-to-user distance in km; sets the efficiency from the channel model
    #[arg(long)]
    pub distance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(short = 'F', long, default_value_t = 1.0)]
    pub fidelity: f64,

    #[command(flatten)]
    pub point: EtaOrDistance,

    #[command(flatten)]
    pub variant: VariantArgs,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(short = 'F', long, default_value_t = 1.0)]
    pub fidelity: f64,

    #[command(flatten)]
    pub variant: VariantArgs,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
#[group(id = "distance_input", required = true, multiple = false, args = ["eta", "distance"])]
pub struct DistanceArgs {
    /// Efficiency to convert into a distance
    #[arg(long)]
    pub eta: Option<f64>,

    /// Source-to-user distance in km
    #[arg(long)]
    pub distance: Option<f64>,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Axis as NAME:MIN:MAX:POINTS with NAME one of eta, F, q, d; give once
    /// or twice
    #[arg(long = "axis", required = true, value_parser = parse_axis)]
    pub axes: Vec<Axis>,

    /// Fidelity when F is not an axis
    #[arg(short = 'F', long, default_value_t = 1.0)]
    pub fidelity: f64,

    /// Efficiency when neither eta nor d is an axis
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,

    /// Variants to evaluate, e.g. `basic` or `ad+nps`; repeatable [default:
    /// all eight]
    #[arg(long = "variant", value_parser = parse_variant_id)]
    pub variants: Vec<(Strategy, bool)>,

    /// Flip probability for np/nps when q is not an axis
    #[arg(long, default_value_t = DEFAULT_Q)]
    pub q: f64,

    #[arg(long = "block-len", default_value_t = DEFAULT_BLOCK_LENGTH)]
    pub block_len: u32,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

impl SweepArgs {
    pub fn variants(&self) -> Vec<Variant> {
        if self.variants.is_empty() {
            let mut all = Variant::table_order(self.q);
            for v in all.iter_mut().filter(|v| v.advantage_distillation) {
                v.block_length = self.block_len;
            }
            return all.to_vec();
        }
        self.variants
            .iter()
            .map(|&(strategy, ad)| {
                let mut v = Variant::new(strategy);
                if strategy.noise_preprocessing() {
                    v.q = self.q;
                }
                if ad {
                    v = v.with_advantage_distillation(self.block_len);
                }
                v
            })
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(short = 'F', long, default_value_t = 0.98)]
    pub fidelity: f64,

    #[arg(long, default_value_t = 0.98)]
    pub eta: f64,

    #[arg(long, default_value_t = DEFAULT_Q)]
    pub q: f64,

    /// Fidelity used for the maximum-distance column
    #[arg(long = "distance-fidelity", default_value_t = 1.0)]
    pub distance_fidelity: f64,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short = 'F', long, default_value_t = 1.0)]
    pub fidelity: f64,

    #[command(flatten)]
    pub point: EtaOrDistance,

    #[command(flatten)]
    pub variant: VariantArgs,

    #[command(flatten)]
    pub channel: ChannelArgs,

    #[arg(long, default_value_t = 1_000_000)]
    pub rounds: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Mc,
    Table1,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,

    /// Rounds per Monte Carlo check
    #[arg(long, default_value_t = 1_000_000)]
    pub rounds: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, min, max, points] = parts.as_slice() else {
        return Err(format!("expected NAME:MIN:MAX:POINTS, got `{s}`"));
    };
    let name = AxisName::parse(name).ok_or_else(|| format!("unknown axis `{name}`"))?;
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    let points = points
        .parse::<usize>()
        .map_err(|e| format!("`{points}`: {e}"))?;
    Ok(Axis::new(name, num(min)?, num(max)?, points))
}

pub fn parse_variant_id(s: &str) -> Result<(Strategy, bool), String> {
    let (ad, name) = match s.strip_prefix("ad+") {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let strategy = Strategy::from_short_name(name).ok_or_else(|| {
        format!(
            "unknown variant `{s}` (expected basic, np, ps or nps, optionally prefixed with ad+)"
        )
    })?;
    Ok((strategy, ad))
}
