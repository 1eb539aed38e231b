use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use semiheap_core::dsl::{self, parse_var_specs, verify_identity};
use semiheap_core::env::Env;
use semiheap_core::hilbert::{Ket, Tolerance};
use semiheap_core::kerner::{evaluate, expand, OrthonormalBasis, BASIS_TOL};
use semiheap_core::report::CheckParams;
use semiheap_core::suite::{run_law, LawOutcome};
use semiheap_core::symmetry::{cocycle_check, GroupFile};
use semiheap_core::Error;

#[derive(Parser)]
#[command(name = "semiheap", version, about = "Check semiheap and ternary-product laws on finite-dimensional Hilbert spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    #[arg(long, default_value_t = 1e-9)]
    rtol: f64,
}

impl TolArgs {
    fn tolerance(&self) -> Result<Tolerance, Error> {
        Tolerance::new(self.atol, self.rtol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized law check.
    Check {
        #[arg(long)]
        law: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Sample the repeated argument of the Mal'cev laws normalized.
        #[arg(long)]
        normalized: bool,
        /// Group or representation file for `cocycle` and `projective-rep`.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Evaluate an expression against an environment file.
    Eval {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Check an identity on sampled variables.
    Verify {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Comma list of `name:kind[dim]{constraint}`.
        #[arg(long)]
        vars: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run an identity corpus (the shipped one when no file is given).
    Corpus {
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Expand `A|psi>` into ternary products of basis kets.
    Decompose {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        ket: String,
        /// Operator in the environment whose columns form the basis.
        #[arg(long, conflicts_with = "basis_file")]
        basis: Option<String>,
        /// JSON list of basis kets, each a list of `[re, im]`.
        #[arg(long)]
        basis_file: Option<PathBuf>,
        /// Coefficients at or below this are dropped.
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(value: &Value, json: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    match json {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Check {
            law,
            dim,
            trials,
            seed,
            tol,
            json,
            normalized,
            group,
        } => {
            let params = CheckParams::new(dim, trials, seed)
                .with_tol(tol.tolerance()?)
                .normalized(normalized);
            let file = group.as_ref().map(GroupFile::load).transpose()?;
            let outcome = match (&file, law.as_str()) {
                (Some(f), "cocycle") => LawOutcome::Cocycle(cocycle_check(&f.cocycle()?, &params.tol)),
                (Some(f), _) => run_law(&law, &params, Some(&f.representation(&params.tol)?))?,
                (None, _) => run_law(&law, &params, None)?,
            };
            emit(&outcome.to_json_value(), json.as_deref())?;
            eprintln!("{}", outcome.summary());
            Ok(verdict(outcome.pass()))
        }
        Command::Eval { env, expr } => {
            let env = Env::load(&env)?;
            let value = dsl::eval_str(&expr, &env)?;
            emit(&value.to_json(), None)?;
            Ok(Outcome::Pass)
        }
        Command::Verify {
            lhs,
            rhs,
            vars,
            trials,
            seed,
            tol,
            json,
        } => {
            let specs = parse_var_specs(&vars)?;
            let params = CheckParams::new(1, trials, seed).with_tol(tol.tolerance()?);
            let report = verify_identity(&lhs, &rhs, &specs, &params)?;
            emit(&report.to_json_value(), json.as_deref())?;
            eprintln!("{}", report.summary());
            Ok(verdict(report.pass))
        }
        Command::Corpus { file, tol } => {
            let entries = match file {
                Some(path) => dsl::load_corpus(path)?,
                None => dsl::parse_corpus(dsl::verify::SHIPPED_CORPUS)?,
            };
            let outcomes = dsl::run_corpus(&entries, tol.tolerance()?);
            for o in &outcomes {
                println!("{}", o.summary());
            }
            let matched = outcomes.iter().filter(|o| o.matched()).count();
            println!("{matched}/{} entries matched their expectation", outcomes.len());
            Ok(verdict(matched == outcomes.len()))
        }
        Command::Decompose {
            env,
            op,
            ket,
            basis,
            basis_file,
            atol,
        } => {
            let env = Env::load(&env)?;
            let unbound = |name: &str| Error::EnvObject {
                name: name.to_string(),
                detail: "not bound".into(),
            };
            let a = env.op(&op).ok_or_else(|| unbound(&op))?;
            let psi = env.ket(&ket).ok_or_else(|| unbound(&ket))?;
            let basis = match (basis, basis_file) {
                (Some(name), _) => {
                    let u = env.op(&name).ok_or_else(|| unbound(&name))?;
                    OrthonormalBasis::from_unitary(u)?.named(&name)
                }
                (None, Some(path)) => load_basis(&path)?,
                (None, None) => OrthonormalBasis::standard(env.dim())?,
            };
            let ts = expand(a, psi, &basis, atol)?;
            let direct = a.apply(psi)?;
            let residual = evaluate(&ts)?.distance(&direct)?;
            let scale = direct.norm().max(ts.mass());
            // each dropped term moves the sum by at most atol
            let tol = Tolerance::new(atol * ts.pruned_small as f64, 1e-11)?;
            let pass = tol.accepts(residual, scale);
            let out = json!({
                "decomposition": ts.to_json_value(),
                "residual": residual,
                "scale": scale,
                "tolerance": tol,
                "pass": pass,
            });
            emit(&out, None)?;
            Ok(verdict(pass))
        }
    }
}

fn load_basis(path: &Path) -> Result<OrthonormalBasis, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let vectors: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)?;
    let kets = vectors
        .into_iter()
        .map(|v| Ket::new(v.into_iter().map(|[re, im]| semiheap_core::hilbert::Complex::new(re, im)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    OrthonormalBasis::new(kets, BASIS_TOL)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            let pos = e.position().map(|(l, c)| format!(" at {l}:{c}")).unwrap_or_default();
            eprintln!("error[{}]{pos}: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
