//! `ipskit`: generators, verifiers, analyzers, oracles and the CNF bridge
//! behind one binary. Exit status 0 means the verdict passed, 1 that it
//! failed, 2 a usage or configuration error.

mod report;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{ConfigError, render_text};

#[derive(Debug, Parser)]
#[command(name = "ipskit", version, about = "Exact workbench for IPS lower-bound instances")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Field: a prime `p`, a prime power `p^k`, or `Q`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest `n` in oracle sweeps.
    #[arg(long = "cap-n", global = true, default_value_t = 10)]
    pub cap_n: u32,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: u32,
    /// Extension degree of the random sample field.
    #[arg(long, global = true, default_value_t = 4)]
    pub ext: u32,
    /// Primary output file. Commands without an artifact write the report here.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<String>,
    /// Where to write the report when `-o` names an artifact.
    #[arg(long, global = true)]
    pub report: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance, its circuit form and a Fermat certificate.
    Gen(GenArgs),
    /// Check a certificate against an instance.
    Verify(VerifyArgs),
    /// Coefficient, evaluation and relative-rank dimensions.
    Dims {
        #[command(subcommand)]
        cmd: DimsCmd,
    },
    /// Read-once ABP construction, widths and closures.
    Roabp {
        #[command(subcommand)]
        cmd: RoabpCmd,
    },
    /// Exact oracles for the counting and degree facts.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Circuit to CNF translation.
    Translate(TranslateArgs),
    /// Parameter schedule for a size `n` and depth `Δ`.
    Params(ParamsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    KsModp,
    KsSymE2,
    SubsetSum,
    Partition,
    E2,
    RoabpHard,
    RoabpHardLifted,
    Anyorder,
    Multiples,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Word literal such as `2,-3,2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Shorthand for `--field p`.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Skip the certificate.
    #[arg(long)]
    pub no_cert: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: String,
    #[arg(long)]
    pub instance: String,
    /// Term cap above which exact mode is refused.
    #[arg(long)]
    pub term_cap: Option<usize>,
}

/// A polynomial given inline or as one axiom of an instance file.
#[derive(Debug, Clone, Args)]
pub struct PolySource {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub instance: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub axiom: usize,
}

#[derive(Debug, Subcommand)]
pub enum DimsCmd {
    /// `dim coeff_{X|Y}(f)`.
    Coeff {
        #[command(flatten)]
        src: PolySource,
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<String>,
    },
    /// `dim eval_{X|Y,S}(f)`; `S` defaults to `{0,1}`.
    Eval {
        #[command(flatten)]
        src: PolySource,
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Relative rank of `M_w(Π_w f)`.
    Relrank {
        #[command(flatten)]
        src: PolySource,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RoabpCmd {
    /// Minimal program in a variable order.
    Build {
        #[command(flatten)]
        src: PolySource,
        /// Defaults to the sorted variables of `f`.
        #[arg(long, value_delimiter = ',')]
        order: Vec<String>,
    },
    /// Built width against the coefficient-dimension lower bound.
    Width {
        #[command(flatten)]
        src: PolySource,
        #[arg(long, value_delimiter = ',')]
        order: Vec<String>,
    },
    Sum {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Prod {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Multilinearized program.
    Ml {
        #[arg(long)]
        a: String,
    },
    /// Fix variables: `--assign x_1=0,x_2=1`.
    Subst {
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// `ml(f^{p−2})` as a program, checked on the cube.
    Fermat {
        #[arg(long)]
        a: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// One oracle: `--lemma NAME --param k=v --param k=v`.
    Run {
        #[arg(long)]
        lemma: String,
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// The whole suite up to `--cap-n`.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Dimacs,
    Ecnf,
    Semi,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(long)]
    pub circuit: String,
    /// Reinterpret the circuit over `F_q`.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_enum, default_value_t = Emit::Dimacs)]
    pub emit: Emit,
    /// Enumerate `F_q^n` and compare circuit, CNF and extended encoding.
    #[arg(long)]
    pub check: bool,
    /// External solver output to ingest against the emitted CNF.
    #[arg(long)]
    pub solver_output: Option<String>,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Decimal `n`.
    #[arg(long, conflicts_with = "log_n")]
    pub n: Option<String>,
    /// `n = 2^e`.
    #[arg(long)]
    pub log_n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = ConfigError::usage(e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run::dispatch(&cli) {
        Ok((pass, report)) => {
            let text = match cli.global.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
                Format::Text => render_text(&report),
            };
            if let Err(e) = run::emit_report(&cli, &text) {
                eprintln!("{}", e.to_json());
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
