use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "idm", version, about = "Exact engine for finite information dependency models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Report,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    /// JSON model file.
    #[arg(long, conflicts_with = "builtin")]
    pub model: Option<PathBuf>,
    /// Built-in model name (see `idm export --help`).
    #[arg(long)]
    pub builtin: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct ContextArgs {
    /// Pinned coordinates, e.g. `s=0,omega_a=1`; bare names pin decisions.
    #[arg(long, default_value = "")]
    pub context: String,
    /// JSON list of full configurations forming H.
    #[arg(long, conflicts_with = "context")]
    pub context_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Table1,
    Fig2,
    Fig3,
    Fig4,
    Equivalence,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every information field is a product-space field.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        /// Do not require fields to see only their own noise coordinate.
        #[arg(long)]
        no_local_noise: bool,
    },
    /// Topological separation of Y and Z given (W, H).
    Separate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value = "")]
        w: String,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Topological closure of a set of agents given (W, H).
    Closure {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "")]
        w: String,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Conditional precedence relation given (W, H).
    Precedence {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "")]
        w: String,
        #[command(flatten)]
        ctx: ContextArgs,
        /// Use the exhaustive definition instead of the fast rule.
        #[arg(long)]
        oracle: bool,
    },
    /// d-separation on the model's graph.
    Dsep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value = "")]
        w: String,
    },
    /// Solve the closed-loop system of the attached profile, or decide
    /// solvability over all profiles.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        all_profiles: bool,
        /// Largest profile count enumerated exhaustively.
        #[arg(long, default_value_t = 1 << 16)]
        budget: u128,
        /// Profiles sampled beyond the budget.
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Exact conditional distribution of decisions.
    Dist {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "")]
        given: String,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Exact conditional independence of decision sets.
    Ci {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "")]
        given: String,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Check the independence and dropping equalities implied by separation
    /// on sampled profiles and priors.
    Docalc {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value = "")]
        w: String,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, default_value_t = 50)]
        policy_trials: usize,
        #[arg(long, default_value_t = 5)]
        prior_trials: usize,
    },
    /// Context-specific insertion/deletion of observations with W = X.
    Rule1 {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value = "")]
        x: String,
        /// Pinned coordinates defining the context.
        #[arg(long, default_value = "")]
        pin: String,
        #[arg(long, default_value_t = 50)]
        policy_trials: usize,
        #[arg(long, default_value_t = 5)]
        prior_trials: usize,
    },
    /// Add a switch agent that replaces the targets' fields by their own
    /// noise; writes the intervened model.
    Intervene {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        targets: String,
        /// Probability that the switch turns on, as `p/q`.
        #[arg(long, default_value = "1/2")]
        switch_prob: String,
    },
    /// Search for a causal configuration-ordering, or check a constant one.
    Causality {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated constant ordering to check.
        #[arg(long)]
        order: Option<String>,
    },
    /// Rerun a golden scenario and compare with its expected values.
    Reproduce {
        #[arg(value_enum)]
        name: Scenario,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write a model as a JSON model file.
    Export {
        #[command(flatten)]
        model: ModelArgs,
    },
}
