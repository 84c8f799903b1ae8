use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ellsum::corpus::{self, IdentityRecord, Status};
use ellsum::elliptic::{build_context, EllipticContext, Modulus};
use ellsum::hypersum::{self, IndexFamily, Kernel, Scale, SignPattern, SumSpec};
use ellsum::singular::{gamma_quarter, singular_modulus};

#[derive(Parser)]
#[command(
    name = "ellsum",
    about = "Elliptic integrals, Jacobi functions, and verified hyperbolic sum identities",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Modulus selection shared by `ctx` and `eval`: a singular index r
/// (K'/K = sqrt(r)) or a literal modulus k in (0,1).
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModulusArgs {
    /// Singular value index (k such that K'/K = sqrt(r))
    #[arg(long)]
    r: Option<u32>,
    /// Elliptic modulus in (0,1)
    #[arg(long)]
    k: Option<f64>,
}

impl ModulusArgs {
    fn context(&self) -> ellsum::Result<EllipticContext> {
        match (self.r, self.k) {
            (Some(r), _) => Ok(build_context(&Modulus::new(singular_modulus(r)?.k_r)?)),
            (_, Some(k)) => Ok(build_context(&Modulus::new(k)?)),
            _ => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print k, K, E, K', E', and the nome q for a modulus
    Ctx {
        #[command(flatten)]
        modulus: ModulusArgs,
    },
    /// Evaluate one hyperbolic sum with a rigorous truncation bound
    Eval {
        /// Index family: odd (m = 2n+1) or all (m = n >= 1)
        #[arg(long)]
        index: IndexFamily,
        /// Power s in the weight m^s
        #[arg(long)]
        s: u32,
        /// Sign pattern: none, alt, or alt2
        #[arg(long)]
        sign: SignPattern,
        /// Kernel: sech, csch, sech2, csch2, inv_expm1, inv_expp1
        #[arg(long)]
        kernel: Kernel,
        /// Argument scale a (rational, e.g. 1/2) in a*m*pi*K'/K
        #[arg(long, default_value = "1")]
        scale: Scale,
        /// Truncation tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        modulus: ModulusArgs,
    },
    /// Verify every identity in the corpus
    Verify {
        /// Corpus file (defaults to the built-in corpus)
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Override every record's tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List corpus record ids and anchors
    List {
        /// Corpus file (defaults to the built-in corpus)
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Print special constants
    Special {
        /// Print Gamma(1/4)
        #[arg(long)]
        gamma4: bool,
    },
}

/// 15 significant digits, the text-mode convention.
fn sig15(v: f64) -> String {
    format!("{v:.14e}")
}

fn load(path: &Option<PathBuf>) -> ellsum::Result<Vec<IdentityRecord>> {
    match path {
        Some(p) => corpus::load_corpus(p),
        None => Ok(corpus::builtin_corpus()),
    }
}

fn run(cli: Cli) -> ellsum::Result<ExitCode> {
    match cli.command {
        Command::Ctx { modulus } => {
            let ctx = modulus.context()?;
            println!("k  = {}", sig15(ctx.modulus.k()));
            println!("k' = {}", sig15(ctx.modulus.k_prime()));
            println!("K  = {}", sig15(ctx.K));
            println!("E  = {}", sig15(ctx.E));
            println!("K' = {}", sig15(ctx.K_prime));
            println!("E' = {}", sig15(ctx.E_prime));
            println!("q  = {}", sig15(ctx.q));
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            index,
            s,
            sign,
            kernel,
            scale,
            tol,
            modulus,
        } => {
            let ctx = modulus.context()?;
            let spec = SumSpec {
                index,
                power: s,
                sign,
                kernel,
                scale,
            };
            let result = hypersum::evaluate(&spec, &ctx, tol)?;
            println!("value      = {}", sig15(result.value));
            println!("terms      = {}", result.terms_used);
            println!("tail_bound = {}", sig15(result.tail_bound));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            corpus: path,
            tol,
            format,
        } => {
            let records = load(&path)?;
            let reports = corpus::verify_all(&records, tol);
            if format == Format::Csv {
                println!("id,lhs,rhs,abs_err,rel_err,terms,status");
            }
            let mut all_pass = true;
            for r in &reports {
                all_pass &= r.status == Status::Pass;
                match format {
                    Format::Csv => println!(
                        "{},{},{},{},{},{},{}",
                        r.id, r.lhs_value, r.rhs_value, r.abs_err, r.rel_err, r.terms_used, r.status
                    ),
                    Format::Text => {
                        let detail = match &r.message {
                            Some(m) => format!("  ({m})"),
                            None => format!(
                                "  abs_err={}  rel_err={}  terms={}",
                                sig15(r.abs_err),
                                sig15(r.rel_err),
                                r.terms_used
                            ),
                        };
                        println!("{:5} {}{}", r.status.to_string(), r.id, detail);
                    }
                }
            }
            if format == Format::Text {
                let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
                println!("{passed}/{} records pass", reports.len());
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::List { corpus: path } => {
            for r in load(&path)? {
                println!("{}\t{}", r.id, r.anchor);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Special { gamma4 } => {
            if !gamma4 {
                eprintln!("error: nothing to print; pass --gamma4");
                return Ok(ExitCode::from(2));
            }
            println!("gamma(1/4) = {}", sig15(gamma_quarter()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
