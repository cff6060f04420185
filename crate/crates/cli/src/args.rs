use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "charkit", version, about = "Exact Fourier analysis on Z_p^d and Z_{p^l}^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Prime modulus (overrides suite defaults; required when no input file)
    #[arg(long, global = true)]
    pub p: Option<u64>,

    /// Dimension
    #[arg(long, global = true)]
    pub d: Option<usize>,

    /// Modulus exponent for Z_{p^l}
    #[arg(long, global = true)]
    pub l: Option<u32>,

    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Wavelet form for `decompose`
    #[arg(long, global = true, value_enum, default_value_t = FormArg::Reduced)]
    pub form: FormArg,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Enumerate every case where the grid is small enough
    #[arg(long, global = true)]
    pub exhaustive: bool,

    /// Number of random cases per suite check
    #[arg(long = "suite-size", global = true)]
    pub suite_size: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Plain,
    Reduced,
    Massless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarietyArg {
    Paraboloid,
    Sphere,
    Cone,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transform a function file into a spectrum file
    Transform {
        /// Treat the input as a spectrum and invert it
        #[arg(long)]
        inverse: bool,
        /// Cross-check the axis passes against the direct sum
        #[arg(long)]
        oracle: bool,
    },
    /// Bandwidth report of a function file
    Bandwidth,
    /// Wavelet decomposition of a function file
    Decompose,
    /// Hyperplane masses and reconstruction
    Tomography {
        #[command(subcommand)]
        action: TomographyAction,
    },
    /// Eigenfunctions of the transform
    Eigen {
        #[command(subcommand)]
        action: EigenAction,
    },
    /// Quadrics and the theorems about transforms vanishing on them
    Variety {
        #[command(subcommand)]
        action: VarietyAction,
    },
    /// Structure over Z_{p^l}^d
    Zpl {
        #[command(subcommand)]
        action: ZplAction,
    },
    /// Run a verification suite
    Verify {
        /// galois, wavelet, tomography, equidist, uncertainty, dichotomy,
        /// paraboloid, spheres, selfdual, eigen, zpl or all
        suite: String,
    },
    /// Emit a seeded random function file
    Random {
        /// Indicator of a random subset instead of random rationals
        #[arg(long)]
        indicator: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TomographyAction {
    /// Function file to sinogram
    Project { file: Option<PathBuf> },
    /// Sinogram to function file
    Reconstruct { file: Option<PathBuf> },
}

#[derive(Debug, Subcommand)]
pub enum EigenAction {
    /// The pair built from V (spanned by the --span vectors) and a shift x
    Pair {
        /// Spanning vector such as 1,1; repeatable
        #[arg(long)]
        span: Vec<String>,
        /// Shift x such as 1,0; gives conjugate-transform eigenfunctions
        #[arg(long)]
        shift: Option<String>,
    },
    /// Expand a function file into eigenfunctions
    Expand,
}

#[derive(Debug, Subcommand)]
pub enum VarietyAction {
    /// List the points of a quadric
    Points {
        #[arg(long, value_enum)]
        kind: VarietyArg,
        #[arg(long, default_value_t = 1)]
        radius: u64,
    },
    /// Slice differences of a function whose transform avoids the paraboloid
    Paraboloid,
    /// Sphere masses around a center
    Spheres {
        #[arg(long)]
        center: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZplAction {
    /// Transform with conductor p^l
    Transform {
        #[arg(long)]
        inverse: bool,
    },
    /// Level-l wavelet test
    Wavelet,
    /// Multiscale wavelet decomposition
    Decompose,
    /// The hyperplane x.v = 0
    Hyperplane {
        #[arg(long)]
        v: String,
    },
    /// The line generated by v
    Line {
        #[arg(long)]
        v: String,
    },
}
