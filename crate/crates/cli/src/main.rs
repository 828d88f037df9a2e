//! `dirspaces`: norms, weights, kernels, composition operators and isometry
//! diagnostics for Dirichlet series, as JSON or CSV.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirspaces::{DirichletSeries, Error, MeasureConfig, Symbol};

use run::{Command, Format, RunConfig, Space};

#[derive(Parser)]
#[command(name = "dirspaces", version, about = "Dirichlet series spaces and composition operators")]
struct Cli {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// A^p_mu (default) or H^p norm of a Dirichlet polynomial.
    Norm {
        #[command(flatten)]
        common: Common,
        /// Use the Hardy space H^p instead of A^p_mu.
        #[arg(long)]
        hardy: bool,
    },
    /// Weights w(1..=N) of a measure.
    Weights(Common),
    /// Reproducing kernel K_N(s, w) of A^2_mu.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// First point as `re,im`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        s: Option<[f64; 2]>,
        /// Second point as `re,im`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        w: Option<[f64; 2]>,
    },
    /// Finite section of C_Phi on the weighted basis of A^2_mu.
    Compose(Common),
    /// Admissibility certificate for a symbol.
    CheckSymbol(Common),
    /// Isometry classification with all diagnostics.
    Classify(Common),
    /// Point-evaluation bound S(sigma) along a list of abscissas.
    Lemma2(Common),
    /// Norm profile of 2^{-Phi(sigma + s)} against 2^{-sigma}.
    Profile(Common),
    /// Run a JSON configuration file as-is.
    Run {
        file: PathBuf,
    },
}

#[derive(Args, Default)]
struct Common {
    /// Dilation coefficient of the symbol.
    #[arg(long)]
    c0: Option<u32>,
    /// phi as series JSON, e.g. '{"terms":[[1,0,2]]}'.
    #[arg(long)]
    phi: Option<String>,
    /// Whole symbol as JSON, e.g. '{"c0":1,"phi":{"terms":[[1,0,2]]}}'.
    #[arg(long, conflicts_with_all = ["c0", "phi"])]
    symbol: Option<String>,
    /// Dirichlet series JSON.
    #[arg(long)]
    series: Option<String>,
    /// Use mu_alpha.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Measure JSON, e.g. '{"type":"alpha","alpha":1}'.
    #[arg(long, conflicts_with = "alpha")]
    measure: Option<String>,
    /// Truncation.
    #[arg(long = "N", visible_alias = "n")]
    truncation: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Seed for quasi-Monte Carlo estimates.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated abscissas.
    #[arg(long, value_delimiter = ',')]
    sigmas: Option<Vec<f64>>,
    #[arg(long)]
    eta: Option<f64>,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts[..] {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl Common {
    fn into_config(self, command: Command) -> Result<RunConfig, Error> {
        let symbol = match (self.symbol, self.c0, self.phi) {
            (Some(text), _, _) => Some(parse_json::<Symbol>("--symbol", &text)?),
            (None, None, None) => None,
            (None, c0, phi) => {
                let phi = match phi {
                    Some(text) => parse_json::<DirichletSeries>("--phi", &text)?,
                    None => DirichletSeries::zero(1).with_exact(true),
                };
                Some(Symbol::new(c0.unwrap_or(1), phi)?)
            }
        };
        let measure = match (self.alpha, self.measure) {
            (Some(alpha), _) => Some(MeasureConfig::Alpha { alpha, nodes: None }),
            (None, Some(text)) => Some(parse_json::<MeasureConfig>("--measure", &text)?),
            (None, None) => None,
        };
        let series = self
            .series
            .map(|t| parse_json::<DirichletSeries>("--series", &t))
            .transpose()?;
        Ok(RunConfig {
            command: Some(command),
            measure,
            symbol,
            series,
            truncation: self.truncation,
            p: self.p,
            seed: self.seed,
            sigmas: self.sigmas,
            eta: self.eta,
            ..RunConfig::default()
        })
    }
}

fn load(path: &PathBuf) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json("config", &text)
}

fn build_config(cli: Cli) -> Result<RunConfig, Error> {
    let base = match &cli.config {
        Some(path) => load(path)?,
        None => RunConfig::default(),
    };
    let from_flags = match cli.command {
        None => RunConfig::default(),
        Some(Cmd::Run { file }) => load(&file)?,
        Some(Cmd::Norm { common, hardy }) => {
            let mut c = common.into_config(Command::Norm)?;
            if hardy {
                c.space = Some(Space::Hardy);
            }
            c
        }
        Some(Cmd::Weights(c)) => c.into_config(Command::Weights)?,
        Some(Cmd::Kernel { common, s, w }) => RunConfig {
            s,
            w,
            ..common.into_config(Command::Kernel)?
        },
        Some(Cmd::Compose(c)) => c.into_config(Command::Compose)?,
        Some(Cmd::CheckSymbol(c)) => c.into_config(Command::CheckSymbol)?,
        Some(Cmd::Classify(c)) => c.into_config(Command::Classify)?,
        Some(Cmd::Lemma2(c)) => c.into_config(Command::Lemma2)?,
        Some(Cmd::Profile(c)) => c.into_config(Command::Profile)?,
    };
    let mut cfg = base.merge(from_flags);
    if cli.csv {
        cfg.format = Some(Format::Csv);
    }
    Ok(cfg)
}

fn init_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("DIRSPACES_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("DIRSPACES_THREADS: not a count: {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Parse(format!("DIRSPACES_THREADS: {e}")))?;
    }
    Ok(())
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_numeric() { 3 } else { 2 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.command.is_none() && cli.config.is_none() {
        use clap::CommandFactory;
        let _ = Cli::command().print_help();
        return ExitCode::from(2);
    }
    if let Err(e) = init_threads() {
        return exit_for(&e);
    }
    let result = build_config(cli).and_then(|cfg| run::run(&cfg));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => exit_for(&e),
    }
}
