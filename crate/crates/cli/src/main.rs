mod cmd;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use ramseylab::{Config, Error};

#[derive(Parser, Debug)]
#[command(name = "ramseylab", version, about = "Ramsey bounds, colouring checks and exact small-case search")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, env = "RAMSEYLAB_PRECISION_BITS")]
    precision_bits: Option<u32>,
    /// Constant in the r^(c r^2) factor.
    #[arg(long = "c", global = true)]
    c: Option<f64>,
    /// Constant in the choice of r.
    #[arg(long = "d", global = true)]
    d: Option<f64>,
    /// Constant in the sqrt(log k) correction.
    #[arg(long = "A", id = "big_a", global = true)]
    a: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "RAMSEYLAB_THREADS")]
    threads: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log-space upper bounds on r(k+1, l+1).
    Bounds {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 5)]
        r: u32,
    },
    /// Integer table of r(a, b) upper bounds from the two-term recurrence.
    BoundTable {
        #[arg(long)]
        k_max: u32,
        #[arg(long)]
        l_max: u32,
        /// Known value, `a,b=v`. Repeatable.
        #[arg(long = "known", value_parser = parse_known)]
        known: Vec<((u32, u32), u128)>,
    },
    /// Row, path and walk checks on a colouring file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        /// Comma-separated subset of goodman,expansion,stats,lemma31,lemma32,lemma33.
        #[arg(long, value_delimiter = ',', default_value = "goodman,expansion,stats,lemma31,lemma32,lemma33")]
        checks: Vec<String>,
        /// Clique size for the stats block.
        #[arg(long, default_value_t = 4)]
        r: u32,
        /// Rate bound for red rows, `a/b`.
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        gamma: BigRational,
        /// Rate bound for blue rows, `a/b`.
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        delta: BigRational,
        /// Row-sum parameter; measured from the colouring when absent.
        #[arg(long, value_parser = parse_rational)]
        mu: Option<BigRational>,
        /// Path-sum parameter; measured from the colouring when absent.
        #[arg(long, value_parser = parse_rational)]
        nu: Option<BigRational>,
    },
    /// Pattern sum g_H of a colouring.
    Gh {
        file: PathBuf,
        /// `path:N`, `cycle:N`, `complete:N`, `empty:N` or `edges:N:0-1,1-2`.
        #[arg(long)]
        pattern: String,
        /// Reference density `a/b`; defaults to k/(k+l).
        #[arg(long, value_parser = parse_rational)]
        p: Option<BigRational>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        /// Also evaluate by direct enumeration and compare.
        #[arg(long)]
        naive: bool,
    },
    /// Term-by-term clique-count audit and clique-extension caps.
    Audit {
        file: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        gamma: BigRational,
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        delta: BigRational,
        /// Known Ramsey value for the extension caps, `a,b=v`. Repeatable.
        #[arg(long = "known", value_parser = parse_known)]
        known: Vec<((u32, u32), u128)>,
        /// Also evaluate the rate hypotheses for (k, l, r, gamma, delta).
        #[arg(long)]
        admissibility: bool,
    },
    /// Backtracking search for a colouring of K_n with no red K_a and no blue K_b.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value_t = Mode::First)]
        mode: Mode,
        /// Stream one status line per subproblem to standard error.
        #[arg(long)]
        progress: bool,
        /// Write the witness, if any, as K2C.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Smallest n with no avoiding colouring, scanning n = 1..=nmax.
    Ramsey {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        progress: bool,
        /// Write the colouring of K_(r-1) as K2C.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Paley colouring of K_q as K2C.
    Paley {
        #[arg(long)]
        q: u64,
    },
    /// Value and derivative bounds of the exponent profile alpha_r.
    #[command(name = "verify-lemma51")]
    VerifyLemma51 {
        /// Comma-separated orders.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// One-step growth of exp(phi_r) in k and in l.
    #[command(name = "verify-lemma52")]
    VerifyLemma52 {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        /// Comma-separated steps, each 1, 2 or r-1.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        m: Vec<u64>,
        /// Also check the ratio steps of the truncated f_r.
        #[arg(long)]
        f_ratio: bool,
    },
    /// Gap between kappa_r and alpha_r near x = 1.
    KappaMargin {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Choice of r on the diagonal and the exponents it gives.
    OptimalR {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 5)]
        r_min: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    First,
    Exhaust,
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|e| format!("`{s}` is not a rational `a/b`: {e}"))
}

fn parse_known(s: &str) -> Result<((u32, u32), u128), String> {
    let bad = || format!("`{s}` is not of the form a,b=v");
    let (ab, v) = s.split_once('=').ok_or_else(bad)?;
    let (a, b) = ab.split_once(',').ok_or_else(bad)?;
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    Ok(((num(a)?, num(b)?), v.trim().parse().map_err(|_| bad())?))
}

impl Global {
    fn config(&self) -> ramseylab::Result<Config> {
        let mut cfg = Config::default();
        if let Some(p) = self.precision_bits {
            cfg.precision_bits = p;
        }
        if let Some(c) = self.c {
            cfg.c = c;
        }
        if let Some(d) = self.d {
            cfg.d = d;
        }
        if let Some(a) = self.a {
            cfg.a = a;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Exit status for a library error.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::HypothesisRange(_) => 3,
        Error::Validation(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.global.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ramseylab: {e}");
            return ExitCode::from(2);
        }
    };
    // only fails if a pool already exists
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global();
    match cmd::run(cli.command, &cfg, &cli.global) {
        Ok(code) => ExitCode::from(code),
        Err(cmd::Failure::Lib(e)) => {
            eprintln!("ramseylab: {e}");
            ExitCode::from(error_code(&e))
        }
        Err(cmd::Failure::Io(msg)) => {
            eprintln!("ramseylab: {msg}");
            ExitCode::from(2)
        }
    }
}
