use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudoharmonic::{Family, GridSpec, ModelParams, SpacingLaw};

#[derive(Debug, Parser)]
#[command(name = "pho", version, about = "Pseudoharmonic oscillator coherent-state toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table `n,energy`
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Eigenfunction samples `x,psi`
    Wavefn {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Uniform grid `min:max:count`; defaults to a grid sized for the level
        #[arg(long)]
        grid: Option<GridArg>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fock coefficients `n,re,im,abs2` of a coherent state
    State {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = FamilyArg::Gp)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        z: f64,
        #[arg(long = "z-im", default_value_t = 0.0, allow_hyphen_values = true)]
        z_im: f64,
        /// Truncation dimension; sized from the tail bound when omitted
        #[arg(long)]
        trunc: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Squeezing and Mandel parameters on a real-z grid
    MetricsScan {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = FamilyArg::Gp)]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true)]
        zmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        zmax: Option<f64>,
        #[arg(long, default_value_t = 191)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moment form of the resolution of identity
    IdentityCheck {
        #[command(flatten)]
        model: ModelArgs,
        /// Both families when omitted
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Commutator and differential-realization residuals
    AlgebraCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 256)]
        trunc: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Full invariant suite
    VerifyAll {
        #[arg(long, default_value_t = 256)]
        trunc: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
#[group(multiple = false)]
pub struct ModelArgs {
    /// Barrier exponent s (default 1)
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Coupling g = s(s+1)
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
}

impl ModelArgs {
    pub fn params(&self) -> pseudoharmonic::Result<ModelParams> {
        match (self.s, self.g) {
            (_, Some(g)) => ModelParams::from_g(g),
            (Some(s), None) => ModelParams::from_s(s),
            (None, None) => Ok(ModelParams::default()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Bg,
    Gp,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Bg => Family::BarutGirardello,
            FamilyArg::Gp => Family::GilmorePerelomov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg(pub GridSpec);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts.as_slice() else {
            return Err(format!("expected min:max:count, got '{s}'"));
        };
        let min: f64 = min.parse().map_err(|e| format!("grid min: {e}"))?;
        let max: f64 = max.parse().map_err(|e| format!("grid max: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("grid count: {e}"))?;
        GridSpec::new(min, max, count, SpacingLaw::Uniform)
            .map(GridArg)
            .map_err(|e| e.to_string())
    }
}
