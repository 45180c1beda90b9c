use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dpkit", version, about = "Differentially private statistics and models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Release a private descriptive statistic.
    Stat {
        #[arg(value_enum)]
        kind: StatKind,
        #[command(flatten)]
        args: StatArgs,
    },
    /// Train a private model.
    Fit {
        #[arg(value_enum)]
        kind: ModelArg,
        #[command(flatten)]
        args: FitArgs,
    },
    /// Apply a saved model; spends no budget.
    Predict(PredictArgs),
    /// Choose a regularization constant privately.
    Tune {
        #[arg(value_enum)]
        kind: ModelArg,
        /// Comma-separated candidate values of gamma.
        #[arg(long, value_delimiter = ',', required = true)]
        gamma_grid: Vec<f64>,
        #[command(flatten)]
        args: FitArgs,
    },
    /// Run a mechanism directly on numbers given as flags.
    Mech {
        #[command(subcommand)]
        mechanism: MechCommand,
    },
    /// Inspect a budget ledger.
    Budget {
        #[arg(value_enum)]
        action: BudgetAction,
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long)]
        cap_eps: Option<f64>,
        #[arg(long)]
        cap_delta: Option<f64>,
        /// Prospective expenditure to test against the cap.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatKind {
    Mean,
    Var,
    Sd,
    Cov,
    PooledVar,
    PooledCov,
    Quantile,
    Median,
    Histogram,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Logit,
    Svm,
    Linreg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismArg {
    Laplace,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TypeDp {
    Adp,
    Pdp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NeighborArg {
    Bounded,
    Unbounded,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Output,
    Objective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Linear,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BudgetAction {
    Report,
    Check,
}

#[derive(Debug, Clone, Args)]
pub struct LedgerArgs {
    /// Append-only JSON-lines ledger charged by this run.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// Refuse the run if the ledger's total epsilon would exceed this.
    #[arg(long)]
    pub cap_eps: Option<f64>,
    #[arg(long)]
    pub cap_delta: Option<f64>,
    /// Partition tag stored with the ledger entry.
    #[arg(long)]
    pub tag: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct StatArgs {
    /// CSV file with a header row; '-' reads stdin.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub column: Option<String>,
    /// Comma-separated column names (cov, pooled-cov, table).
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<String>,
    #[arg(long)]
    pub group_column: Option<String>,
    #[arg(long)]
    pub bounds_file: Option<PathBuf>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "laplace")]
    pub mechanism: MechanismArg,
    #[arg(long, value_enum, default_value = "adp")]
    pub type_dp: TypeDp,
    #[arg(long, value_enum, default_value = "bounded")]
    pub neighbor: NeighborArg,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Quantile level in [0, 1].
    #[arg(long)]
    pub q: Option<f64>,
    /// A bin count (range from the bounds file) or comma-separated edges.
    #[arg(long, allow_hyphen_values = true)]
    pub breaks: Option<String>,
    #[arg(long)]
    pub normalize: bool,
    #[arg(long)]
    pub allow_negative: bool,
    #[arg(long)]
    pub uniform_sampling: bool,
    #[arg(long)]
    pub approx_n_max: bool,
    #[command(flatten)]
    pub ledger: LedgerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: String,
    /// Comma-separated feature columns; defaults to every column except the
    /// label and weights.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    #[arg(long)]
    pub label: String,
    #[arg(long)]
    pub bounds_file: Option<PathBuf>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "objective")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "linear")]
    pub kernel: KernelArg,
    /// Number of random features for the Gaussian kernel.
    #[arg(long = "D", default_value_t = 20)]
    pub d: usize,
    #[arg(long)]
    pub kernel_param: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub huber_h: f64,
    #[arg(long)]
    pub weights_column: Option<String>,
    #[arg(long)]
    pub weight_bound: Option<f64>,
    #[arg(long)]
    pub add_bias: bool,
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub ledger: LedgerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: String,
    /// Feature columns; defaults to the names stored in the model.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    /// Probabilities (logistic), margins (SVM) instead of labels.
    #[arg(long)]
    pub raw: bool,
    /// Asserts the model was trained with an intercept.
    #[arg(long)]
    pub add_bias: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum MechCommand {
    Laplace {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        /// Per-coordinate l1 sensitivities.
        #[arg(long, value_delimiter = ',', required = true)]
        sensitivity: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        alloc: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        ledger: LedgerArgs,
    },
    Gaussian {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        /// Per-coordinate l2 sensitivities.
        #[arg(long, value_delimiter = ',', required = true)]
        sensitivity: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value = "adp")]
        type_dp: TypeDp,
        #[arg(long, value_delimiter = ',')]
        alloc: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        ledger: LedgerArgs,
    },
    Exponential {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        utility: Vec<f64>,
        #[arg(long)]
        sensitivity: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        measure: Vec<f64>,
        /// Optional labels for the candidates, reported with the choice.
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        ledger: LedgerArgs,
    },
}
