use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::syntax::SyntaxFlavor;

#[derive(Debug, Parser)]
#[command(
    name = "isopoly",
    version,
    about = "Decide formula isomorphism through exponential polynomials",
    long_about = "Decide formula isomorphism through exponential polynomials.\n\n\
        Exit status: 0 proved/ok, 1 disproved, 2 inconclusive, 3 usage or input error.\n\
        Formulas are given inline or as @FILE. Environment: ISOPOLY_CAP sets the node cap \
        when --cap is absent."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Concrete syntax of inputs and printed formulas.
    #[arg(long, global = true, value_enum, default_value_t = Flavor::Logical)]
    pub flavor: Flavor,

    /// Counterexample search budget: B = largest atom value, D = largest
    /// quantifier domain, N = assignments evaluated.
    #[arg(long, global = true, default_value = "B=4,D=3,N=10000")]
    pub budget: String,

    /// Seed for the random phase of the counterexample search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print one JSON result envelope per line.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the derivation (iso-prove, iso-check, enf) to FILE as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    pub trace: Option<PathBuf>,

    /// Atom and domain sizes for witness-verify models.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1,2")]
    pub sizes: Vec<u64>,

    /// Node cap for normalization [default: ISOPOLY_CAP or 100000].
    #[arg(long, global = true, value_name = "NODES")]
    pub cap: Option<usize>,

    /// Read newline-delimited inputs from FILE (`-` for stdin). Two-formula
    /// commands take `F ; G` per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Flavor {
    Logical,
    Algebraic,
}

impl From<Flavor> for SyntaxFlavor {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::Logical => SyntaxFlavor::Logical,
            Flavor::Algebraic => SyntaxFlavor::Algebraic,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it in both syntaxes.
    Parse { formula: Option<String> },
    /// Evaluate a formula as a number.
    Eval {
        formula: Option<String>,
        /// Atom values, e.g. `a=2,b=3` or `P(0)=2`.
        #[arg(long, default_value = "")]
        at: String,
        /// Quantifier domain size (`3`) or per-variable sizes (`x=2,y=3`).
        #[arg(long)]
        domain: Option<String>,
    },
    /// Search for a counterexample, then for a derivation.
    IsoCheck { lhs: Option<String>, rhs: Option<String> },
    /// Derive the equality with the high-school identities.
    IsoProve { lhs: Option<String>, rhs: Option<String> },
    /// Search for an assignment where the two sides differ.
    IsoDisprove { lhs: Option<String>, rhs: Option<String> },
    /// Exp-log normal form.
    Enf { formula: Option<String> },
    /// Level in the intuitionistic hierarchy.
    Level { formula: Option<String> },
    /// Membership in the Gurevič–Levitz class.
    Glclass { formula: Option<String> },
    /// Classical level of a prenex formula, compared with its level.
    PrenexLevel { formula: Option<String> },
    /// Check a witness pair on finite models. With one formula the witness
    /// comes from its normal form, with two from a derivation.
    WitnessVerify { lhs: Option<String>, rhs: Option<String> },
    /// Run the built-in checks.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Eval { .. } => "eval",
            Command::IsoCheck { .. } => "iso-check",
            Command::IsoProve { .. } => "iso-prove",
            Command::IsoDisprove { .. } => "iso-disprove",
            Command::Enf { .. } => "enf",
            Command::Level { .. } => "level",
            Command::Glclass { .. } => "glclass",
            Command::PrenexLevel { .. } => "prenex-level",
            Command::WitnessVerify { .. } => "witness-verify",
            Command::Selftest => "selftest",
        }
    }

    /// Positional formula arguments as given.
    pub fn inputs(&self) -> Vec<String> {
        let own = |xs: &[&Option<String>]| xs.iter().filter_map(|x| (*x).clone()).collect();
        match self {
            Command::Parse { formula }
            | Command::Eval { formula, .. }
            | Command::Enf { formula }
            | Command::Level { formula }
            | Command::Glclass { formula }
            | Command::PrenexLevel { formula } => own(&[formula]),
            Command::IsoCheck { lhs, rhs }
            | Command::IsoProve { lhs, rhs }
            | Command::IsoDisprove { lhs, rhs }
            | Command::WitnessVerify { lhs, rhs } => own(&[lhs, rhs]),
            Command::Selftest => Vec::new(),
        }
    }

    /// Whether the command reads the explog batch record format.
    pub fn is_explog(&self) -> bool {
        matches!(
            self,
            Command::Enf { .. } | Command::Level { .. } | Command::Glclass { .. } | Command::PrenexLevel { .. }
        )
    }
}
