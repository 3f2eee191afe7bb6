use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 0xA11CE;

#[derive(Debug, Parser)]
#[command(name = "vfwalk", version, about = "Vertex-face walks, Grover walks and graph zeta functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check identities on a graph and write a JSON report.
    Check(CheckArgs),
    /// Evaluate a reciprocal zeta function by every available route.
    Zeta(ZetaArgs),
    /// Eigenvalues of an operator as CSV.
    Spectra(SpectraArgs),
    /// Doubling-convergence trace of a limit integral as CSV.
    Limit(LimitArgs),
    /// Faces, genus and Euler characteristic of an embedding as JSON.
    Faces(FacesArgs),
    /// Export an operator matrix.
    Matrix(MatrixArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cycle,
    Complete,
    Torus,
    TorusEmbedded,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Builtin graph family.
    #[arg(long, value_enum, conflicts_with = "graph")]
    pub family: Option<Family>,
    /// Vertex count for cycle and complete graphs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Side length of the torus.
    #[arg(long = "N")]
    pub side: Option<usize>,
    /// Torus dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// JSON graph file: {"n", "edges", "rotation"?}.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoinKind {
    Grover,
    Identity,
    RandomUnitary,
    FlipFlop,
    File,
}

#[derive(Debug, Clone, Args)]
pub struct CoinArgs {
    /// Coin for walk computations.
    #[arg(long, value_enum)]
    pub coin: Option<CoinKind>,
    /// JSON coin matrix for `--coin file`: rows of numbers or [re, im] pairs.
    #[arg(long)]
    pub coin_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub coin: CoinArgs,
    /// Comma-separated claim ids (default: every claim that applies).
    #[arg(long, value_delimiter = ',')]
    pub claims: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance for the log-identity claims.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quadrature grid for limit claims.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaModel {
    Ihara,
    PositiveSupport,
    Grover,
    Walk,
    VertexFace,
}

#[derive(Debug, Clone, Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, value_enum)]
    pub model: ZetaModel,
    /// Comma-separated points, e.g. `0.3,0.1+0.2i` (default: 0.1, 0.2, 0.3 and
    /// 20 seeded complex points).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Quadrature grid for the walk limit-integral route.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Adjacency,
    Laplacian,
    Grover,
    PositiveSupport,
    VertexFace,
    FaceOverlap,
    Walk,
}

#[derive(Debug, Clone, Args)]
pub struct SpectraArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub coin: CoinArgs,
    /// Operator (default: vertex-face for embeddings, Grover otherwise).
    #[arg(long, value_enum)]
    pub operator: Option<Operator>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitChoice {
    Grover,
    Ihara,
    VertexFace,
    #[value(name = "grover-2d")]
    Grover2d,
    #[value(name = "ihara-2d")]
    Ihara2d,
    Walk,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, value_enum)]
    pub kind: LimitChoice,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Comma-separated real points in (-1, 1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.1,0.2,0.3")]
    pub u: Vec<f64>,
    /// Largest grid of the doubling sequence 8, 16, ...
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FacesArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, value_enum)]
    pub operator: Operator,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: MatrixFormat,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
