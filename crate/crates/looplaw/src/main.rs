//! Command-line front end: formula evaluation, verification suites, looptree
//! sampling, raw first-passage runs and the conformal-radius gap table.
//! Data goes to stdout (or --out); a reproducibility manifest goes to stderr.

use clap::{Parser, Subcommand};
use looplaw::formulas::{self, ConstantId};
use looplaw::params::{self, AlphaParams};
use looplaw::report::{self, RunManifest, SuiteParams};
use looplaw::specfun::{InversionConfig, QuadratureConfig};
use looplaw::{crrenewal, levy, looptree, Error};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "looplaw", version, about = "Closed-form loop-measure laws and their Monte-Carlo checks")]
struct Cli {
    /// Master seed; replica i uses an independent stream derived from (seed, i).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte-Carlo replica count.
    #[arg(long, global = true, default_value_t = 10_000)]
    replicas: usize,
    /// Small-jump truncation for the Lévy simulators.
    #[arg(long, global = true, default_value_t = 1e-3)]
    eps: f64,
    /// Write the data to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json (looptree also accepts dot).
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one closed-form law or constant; prints a JSON record.
    Eval {
        formula: String,
        #[arg(long)]
        kappa: Option<f64>,
        /// γ² (alternative to --kappa).
        #[arg(long)]
        gamma2: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Run a check suite: identities, levy, cascade, looptree, renewal, all.
    Verify { suite: String },
    /// Sample one stable looptree (formats: json, dot).
    Looptree {
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 1_000)]
        steps: usize,
    },
    /// Raw first-passage runs: one row per replica (tau, jump count, level).
    LevySim {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Tabulate the CDF of −log CR as CSV rows (b, F).
    CrLaw {
        #[arg(long)]
        kappa: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    let mut parameters = BTreeMap::new();
    let code = match run(&cli, &mut parameters) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Pole(_) => 3,
                Error::Convergence(_)
                | Error::Instability(_)
                | Error::Timeout(_)
                | Error::RejectionBudget(_)
                | Error::MalformedExcursion(_) => 3,
            }
        }
    };
    let manifest = RunManifest {
        command_line,
        seed: cli.seed,
        replicas: cli.replicas,
        parameters,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    eprintln!("{}", serde_json::to_string(&manifest).expect("manifest serializes"));
    std::process::exit(code);
}

fn emit(cli: &Cli, data: &str) -> looplaw::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout();
            stdout
                .write_all(data.as_bytes())
                .map_err(|e| Error::Domain(format!("stdout write failed: {e}")))
        }
    }
}

fn run(cli: &Cli, parameters: &mut BTreeMap<String, String>) -> looplaw::Result<i32> {
    match &cli.cmd {
        Cmd::Eval {
            formula,
            kappa,
            gamma2,
            lambda,
            alpha,
            a,
            b,
            ell,
            mu,
            theta,
            x,
            beta,
        } => {
            let args = EvalArgs {
                kappa: kappa.or(*gamma2),
                lambda: *lambda,
                alpha: *alpha,
                a: *a,
                b: *b,
                ell: *ell,
                mu: *mu,
                theta: *theta,
                x: *x,
                beta: *beta,
            };
            for (k, v) in [
                ("kappa", args.kappa),
                ("lambda", args.lambda),
                ("alpha", args.alpha),
                ("a", args.a),
                ("b", args.b),
                ("ell", args.ell),
                ("mu", args.mu),
                ("theta", args.theta),
                ("x", args.x),
                ("beta", args.beta),
            ] {
                if let Some(v) = v {
                    parameters.insert(k.to_string(), v.to_string());
                }
            }
            let (value, anchor) = match eval_formula(formula, &args) {
                Ok(pair) => pair,
                Err(Error::Domain(msg)) if msg.starts_with("unknown formula") => {
                    eprintln!("error: {msg}");
                    return Ok(2);
                }
                Err(e) => return Err(e),
            };
            let record = serde_json::json!({
                "formula": formula,
                "params": parameters,
                "value": value,
                "anchor": anchor,
            });
            emit(cli, &format!("{record}\n"))?;
            Ok(0)
        }
        Cmd::Verify { suite } => {
            let sp = SuiteParams { seed: cli.seed, replicas: cli.replicas, eps: cli.eps };
            parameters.insert("suite".into(), suite.clone());
            let rows = match report::run_suite(suite, sp) {
                Ok(rows) => rows,
                Err(Error::Domain(msg)) if msg.starts_with("unknown suite") => {
                    eprintln!("error: {msg}");
                    return Ok(2);
                }
                Err(e) => return Err(e),
            };
            let data = match cli.format.as_str() {
                "json" => report::rows_to_json(&rows),
                "csv" => report::rows_to_csv(&rows),
                other => {
                    eprintln!("error: unknown format '{other}'");
                    return Ok(2);
                }
            };
            emit(cli, &data)?;
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Cmd::Looptree { nu, steps } => {
            parameters.insert("nu".into(), nu.to_string());
            parameters.insert("steps".into(), steps.to_string());
            let mut rng = looplaw::replica_rng(cli.seed, 0);
            let e = looptree::sample_excursion(*nu, *steps, &mut rng)?;
            let tree = looptree::build_looptree(&e)?;
            let data = match cli.format.as_str() {
                "dot" => looptree::to_dot(&tree),
                "json" | "csv" => looptree::to_json(&tree) + "\n",
                other => {
                    eprintln!("error: unknown format '{other}'");
                    return Ok(2);
                }
            };
            emit(cli, &data)?;
            Ok(0)
        }
        Cmd::LevySim { beta, a } => {
            parameters.insert("beta".into(), beta.to_string());
            parameters.insert("a".into(), a.to_string());
            let cfg = levy::LevySimConfig::new(*beta, cli.eps, cli.seed)?;
            let mut rows = Vec::with_capacity(cli.replicas);
            for i in 0..cli.replicas {
                let mut rng = looplaw::replica_rng(cli.seed, i as u64);
                let path = levy::simulate_to_hitting(*a, &cfg, &mut rng)?;
                rows.push((i, path.tau_a, path.jumps.len(), path.terminal_level));
            }
            let data = match cli.format.as_str() {
                "json" => rows
                    .iter()
                    .map(|(i, tau, nj, lvl)| {
                        serde_json::json!({"replica": i, "tau": tau, "jumps": nj, "terminal_level": lvl})
                            .to_string()
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
                    + "\n",
                "csv" => {
                    let mut s = String::from("replica,tau,jumps,terminal_level\n");
                    for (i, tau, nj, lvl) in &rows {
                        s.push_str(&format!("{i},{tau},{nj},{lvl}\n"));
                    }
                    s
                }
                other => {
                    eprintln!("error: unknown format '{other}'");
                    return Ok(2);
                }
            };
            emit(cli, &data)?;
            Ok(0)
        }
        Cmd::CrLaw { kappa } => {
            parameters.insert("kappa".into(), kappa.to_string());
            let p = params::from_kappa(*kappa)?;
            let law = crrenewal::build_cr_gap_law(p, &InversionConfig::default())?;
            let data = match cli.format.as_str() {
                "json" => {
                    serde_json::json!({
                        "kappa": law.kappa,
                        "tail_rate": law.tail_rate,
                        "b": law.tabulated_cdf.abscissae,
                        "F": law.tabulated_cdf.values,
                    })
                    .to_string()
                        + "\n"
                }
                "csv" => crrenewal::to_csv(&law),
                other => {
                    eprintln!("error: unknown format '{other}'");
                    return Ok(2);
                }
            };
            emit(cli, &data)?;
            Ok(0)
        }
    }
}

struct EvalArgs {
    kappa: Option<f64>,
    lambda: Option<f64>,
    alpha: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    ell: Option<f64>,
    mu: Option<f64>,
    theta: Option<f64>,
    x: Option<f64>,
    beta: Option<f64>,
}

fn need(v: Option<f64>, name: &str) -> looplaw::Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("missing required parameter --{name}")))
}

fn eval_formula(formula: &str, args: &EvalArgs) -> looplaw::Result<(f64, &'static str)> {
    let base = || -> looplaw::Result<params::LQGParams> {
        params::from_kappa(need(args.kappa, "kappa (or --gamma2)")?)
    };
    let with_alpha = || -> looplaw::Result<AlphaParams> {
        Ok(AlphaParams::new(base()?, need(args.alpha, "alpha")?))
    };
    let quad = QuadratureConfig::default();
    let v = match formula {
        "thickness-mgf" => (
            formulas::thickness_mgf(base()?, need(args.lambda, "lambda")?),
            "law:thickness-mgf",
        ),
        "kw-mgf" => (
            formulas::kw_conjectured_mgf(base()?, need(args.lambda, "lambda")?),
            "law:kw-flip",
        ),
        "loop-mass-ratio" => (formulas::loop_mass_ratio(with_alpha()?)?, "law:loop-mass-ratio"),
        "reflection" => (
            formulas::reflection_coefficient(with_alpha()?)?,
            "law:reflection-coefficient",
        ),
        "sphere-area-density" => (
            formulas::sphere_area_density(with_alpha()?, need(args.a, "a")?)?,
            "law:sphere-area-density",
        ),
        "disk-length-constant" | "r-gamma" => {
            (formulas::disk_length_constant(base()?)?, "law:disk-length-constant")
        }
        "u-bar" => (formulas::u_bar(with_alpha()?)?, "law:disk-one-point"),
        "disk-mass" => (
            formulas::disk_mass(with_alpha()?, need(args.ell, "ell")?)?,
            "law:disk-mass",
        ),
        "fzz-area-density" => (
            formulas::fzz_area_density(with_alpha()?, need(args.x, "x")?)?,
            "law:fzz-area",
        ),
        "fzz-laplace" => (
            formulas::fzz_laplace(with_alpha()?, need(args.ell, "ell")?, need(args.mu, "mu")?)?,
            "law:fzz-laplace",
        ),
        "gqd-laplace" => (
            formulas::gqd_laplace(base()?, need(args.ell, "ell")?, need(args.mu, "mu")?)?,
            "law:gqd-laplace",
        ),
        "gqd-area-weighted" => (
            formulas::gqd_area_weighted_laplace(
                base()?,
                need(args.ell, "ell")?,
                need(args.mu, "mu")?,
            )?,
            "law:gqd-area-weighted",
        ),
        "gqd-mean-area" => (
            formulas::gqd_mean_area(base()?, need(args.ell, "ell")?)?,
            "law:gqd-mean-area",
        ),
        "gqd-length-density" => (
            formulas::gqd_length_density(base()?, need(args.ell, "ell")?)?,
            "law:gqd-length-density",
        ),
        "gqd1-length-density" => (
            formulas::gqd1_length_density(base()?, need(args.ell, "ell")?)?,
            "law:gqd1-length-density",
        ),
        "annulus-mass" => (
            formulas::annulus_mass(need(args.a, "a")?, need(args.b, "b")?, base()?)?,
            "law:annulus-mass",
        ),
        "jump-density" => {
            let beta = match args.beta {
                Some(b) => b,
                None => params::stable_index(base()?)?.beta,
            };
            (
                formulas::levy_jump_density(beta, need(args.a, "a")?, need(args.b, "b")?)?,
                "law:jump-density",
            )
        }
        "frak-c" => {
            let beta = match args.beta {
                Some(b) => b,
                None => params::stable_index(base()?)?.beta,
            };
            (formulas::frak_c(beta)?, "law:frak-c")
        }
        "dilation" => (formulas::dilation_constant(base()?)?, "law:dilation-constant"),
        "cr-moment" => (
            formulas::ssw_cr_moment(base()?, need(args.lambda, "lambda")?)?,
            "law:cr-moment",
        ),
        "psi-theta" => (
            formulas::psi_theta(need(args.theta, "theta")?, need(args.lambda, "lambda")?, &quad)?,
            "law:psi-theta",
        ),
        "nu-theta" => (
            formulas::nu_theta_density(need(args.theta, "theta")?, need(args.x, "x")?)?,
            "law:nu-theta",
        ),
        "gqd-tail-coefficient" => (formulas::gqd_tail_coefficient(base()?)?.0, "law:gqd-tail"),
        "fd-alpha-tail-coefficient" => {
            (formulas::fd_alpha_tail_coefficient(with_alpha()?)?.0, "law:fd-alpha-tail")
        }
        "m-prime" => {
            let id = ConstantId::MPrime;
            (
                formulas::eval_constant(id, AlphaParams::new(base()?, 0.0), args.mu)?,
                report::constant_anchor(id),
            )
        }
        "d-alpha" | "jump-moment" | "c-gamma" | "ktilde-gamma" | "k-gamma"
        | "cprime-over-rprime2" | "kprime-over-rprime2" | "delta-alpha" => {
            let id = match formula {
                "d-alpha" => ConstantId::DAlpha,
                "jump-moment" => ConstantId::JumpMoment,
                "c-gamma" => ConstantId::CGamma,
                "ktilde-gamma" => ConstantId::KtildeGamma,
                "k-gamma" => ConstantId::KGamma,
                "cprime-over-rprime2" => ConstantId::CprimeOverRprime2,
                "kprime-over-rprime2" => ConstantId::KprimeOverRprime2,
                _ => ConstantId::DeltaAlpha,
            };
            let p = base()?;
            let alpha = args.alpha.unwrap_or(p.gamma);
            (
                formulas::eval_constant(id, AlphaParams::new(p, alpha), args.mu)?,
                report::constant_anchor(id),
            )
        }
        other => return Err(Error::Domain(format!("unknown formula '{other}'"))),
    };
    Ok(v)
}
