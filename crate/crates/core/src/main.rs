use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use rankin_cohen::batch::{run_verify, VerifyOutput, VerifySuite};
use rankin_cohen::config::{ConfigOverrides, OutputFormat, RunConfig};
use rankin_cohen::numerics::{fmt_rational, parse_rational, Rational};
use rankin_cohen::racah::{u_coefficient, ParamTriple, RacahQuery};
use rankin_cohen::report::VerificationReport;
use rankin_cohen::rewrite::{
    check_identity, check_identity_by_evaluation, identity_slots, parse_bracket, parse_identity,
    to_standard, unit_weights, WeightAssignment,
};
use rankin_cohen::specfun::racah_value;
use rankin_cohen::star::{star, StarSeries};
use rankin_cohen::verma::{act, Generator, ModuleModel};
use rankin_cohen::{rc_bracket, Poly, VarSet, WeightedForm};

#[derive(Parser)]
#[command(
    name = "rankin-cohen",
    version,
    about = "Exact Rankin-Cohen bracket calculus and identity checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalFlags {
    /// `key = value` file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of seeded random samples added to the fixed grid
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long = "max-n", global = true)]
    max_n: Option<usize>,
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[arg(long, global = true)]
    hbar_order: Option<usize>,
    /// json, csv or text
    #[arg(long, global = true)]
    output: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print their reports
    Verify {
        /// Comma-separated suite names, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        /// Same as --max-n
        #[arg(long = "n")]
        n: Option<usize>,
    },
    /// Transition coefficients U_{k,p} as CSV
    UTable {
        #[command(flatten)]
        lam: Triple,
        #[arg(long = "n")]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Racah values R_{p,k} as CSV
    Racah {
        #[command(flatten)]
        lam: Triple,
        #[arg(long = "n")]
        order: usize,
    },
    /// A single bracket [f, g]_n
    Bracket {
        #[arg(long, value_parser = parse_rational_arg)]
        l1: Rational,
        #[arg(long, value_parser = parse_rational_arg)]
        l2: Rational,
        #[arg(long = "n")]
        order: usize,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Truncated star product of two weighted forms
    Star {
        #[arg(long = "N")]
        truncation: usize,
        /// `weight:poly`
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Reduce a bracket expression to the standard basis
    Rewrite {
        #[arg(long)]
        expr: String,
        /// Weights of f1, f2, ... in slot order
        #[arg(long)]
        weights: Option<String>,
    },
    /// Certify an identity read from a file of `coeff | expr` lines
    Check {
        #[arg(long)]
        identity_file: PathBuf,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Apply an sl2 generator in one of the polynomial models
    Verma {
        /// highest, lowest, tensor or tensor-tv
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = parse_rational_arg)]
        l1: Rational,
        #[arg(long, value_parser = parse_rational_arg)]
        l2: Option<Rational>,
        /// H, E, F or C
        #[arg(long)]
        gen: String,
        #[arg(long)]
        poly: String,
    },
}

#[derive(Args)]
struct Triple {
    #[arg(long, value_parser = parse_rational_arg)]
    l1: Rational,
    #[arg(long, value_parser = parse_rational_arg)]
    l2: Rational,
    #[arg(long, value_parser = parse_rational_arg)]
    l3: Rational,
}

impl Triple {
    fn params(&self) -> ParamTriple {
        ParamTriple::new(self.l1.clone(), self.l2.clone(), self.l3.clone())
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Bad input: exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(g: &GlobalFlags) -> Result<RunConfig, InputError> {
    let file = match &g.config {
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Some(ConfigOverrides::parse(&src)?)
        }
        None => None,
    };
    let flags = ConfigOverrides {
        seed: g.seed,
        sample_count: g.samples,
        max_n: g.max_n,
        max_degree: g.max_degree,
        hbar_order: g.hbar_order,
        output: g.output,
    };
    Ok(RunConfig::layered(file.as_ref(), &flags))
}

fn run(cli: Cli) -> CmdResult {
    let mut cfg = load_config(&cli.global)?;
    match cli.command {
        Command::Verify { suite, n } => {
            if let Some(n) = n {
                cfg.max_n = n;
            }
            let suites = VerifySuite::parse_list(&suite)?;
            let out = run_verify(&suites, &suite, &cfg)?;
            print_verify(&out, cfg.output)?;
            Ok(out.passed())
        }
        Command::UTable { lam, order, json } => u_table(&lam.params(), order, json),
        Command::Racah { lam, order } => racah_table(&lam.params(), order),
        Command::Bracket {
            l1,
            l2,
            order,
            f,
            g,
        } => {
            let f = WeightedForm::new(l1, Poly::parse(&f, &VarSet::z())?);
            let g = WeightedForm::new(l2, Poly::parse(&g, &VarSet::z())?);
            println!("{}", rc_bracket(&f, &g, order));
            Ok(true)
        }
        Command::Star { truncation, f, g } => {
            let a = StarSeries::inject(&parse_weighted(&f)?, truncation);
            let b = StarSeries::inject(&parse_weighted(&g)?, truncation);
            print!("{}", star(&a, &b)?);
            Ok(true)
        }
        Command::Rewrite { expr, weights } => {
            let e = parse_bracket(&expr)?;
            let w = weights_for(&e.leaves(), weights.as_deref())?;
            print!("{}", to_standard(&e, &w)?);
            Ok(true)
        }
        Command::Check {
            identity_file,
            weights,
        } => {
            let src = fs::read_to_string(&identity_file)
                .map_err(|e| InputError(format!("{}: {e}", identity_file.display())))?;
            let terms = parse_identity(&src)?;
            let w = weights_for(&identity_slots(&terms), weights.as_deref())?;
            let reports = vec![
                check_identity(&terms, &w)?,
                check_identity_by_evaluation(&terms, &w, cfg.max_degree)?,
            ];
            let out = VerifyOutput {
                suite: "check".into(),
                config: cfg.clone(),
                reports,
            };
            print_verify(&out, cfg.output)?;
            Ok(out.passed())
        }
        Command::Verma {
            model,
            l1,
            l2,
            gen,
            poly,
        } => {
            let model = parse_model(&model, l1, l2)?;
            let g = Generator::parse(&gen)
                .ok_or_else(|| InputError(format!("unknown generator `{gen}`")))?;
            let p = Poly::parse(&poly, &model.vars())?;
            println!("{}", act(&model, g, &p)?);
            Ok(true)
        }
    }
}

fn parse_weighted(src: &str) -> Result<WeightedForm, InputError> {
    let (w, p) = src
        .split_once(':')
        .ok_or_else(|| InputError(format!("expected `weight:poly`, got `{src}`")))?;
    Ok(WeightedForm::new(
        parse_rational(w.trim())?,
        Poly::parse(p, &VarSet::z())?,
    ))
}

fn weights_for(slots: &[usize], src: Option<&str>) -> Result<WeightAssignment, InputError> {
    let mut slots = slots.to_vec();
    slots.sort_unstable();
    slots.dedup();
    let Some(src) = src else {
        return Ok(unit_weights(&slots));
    };
    let values = src
        .split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != slots.len() {
        return Err(InputError(format!(
            "{} weights given for {} slots",
            values.len(),
            slots.len()
        )));
    }
    Ok(slots.into_iter().zip(values).collect())
}

fn parse_model(name: &str, l1: Rational, l2: Option<Rational>) -> Result<ModuleModel, InputError> {
    let second = || {
        l2.clone()
            .ok_or_else(|| InputError(format!("model `{name}` needs --l2")))
    };
    Ok(match name {
        "highest" => ModuleModel::Highest(l1),
        "lowest" => ModuleModel::Lowest(l1),
        "tensor" => ModuleModel::TensorLowest(l1, second()?),
        "tensor-tv" => ModuleModel::TensorLowestTV(l1, second()?),
        _ => return Err(InputError(format!("unknown model `{name}`"))),
    })
}

#[derive(Serialize)]
struct UEntry {
    k: usize,
    p: usize,
    value: String,
}

#[derive(Serialize)]
struct UTableJson {
    params: Vec<String>,
    n: usize,
    entries: Vec<UEntry>,
}

fn u_table(params: &ParamTriple, n: usize, json: bool) -> CmdResult {
    let mut entries = Vec::new();
    for k in 0..=n {
        for p in 0..=n {
            let value = u_coefficient(params, RacahQuery::new(n, k, p))?;
            entries.push(UEntry {
                k,
                p,
                value: fmt_rational(&value),
            });
        }
    }
    if json {
        let doc = UTableJson {
            params: params.to_vec().iter().map(fmt_rational).collect(),
            n,
            entries,
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("k,p,U");
        for e in entries {
            println!("{},{},{}", e.k, e.p, e.value);
        }
    }
    Ok(true)
}

fn racah_table(params: &ParamTriple, n: usize) -> CmdResult {
    params.check_admissible()?;
    let header: Vec<String> = (0..=n).map(|k| format!("k={k}")).collect();
    println!("p,{}", header.join(","));
    for p in 0..=n {
        let row = (0..=n)
            .map(|k| racah_value(p, k, n, params.as_tuple()).map(|r| fmt_rational(&r)))
            .collect::<Result<Vec<_>, _>>()?;
        println!("{p},{}", row.join(","));
    }
    Ok(true)
}

fn print_verify(out: &VerifyOutput, format: OutputFormat) -> Result<(), InputError> {
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(out)?),
        OutputFormat::Csv => {
            println!("identity_id,status,instances_checked,failure_count");
            for r in &out.reports {
                println!(
                    "{},{},{},{}",
                    r.identity_id,
                    status_name(r),
                    r.instances_checked,
                    r.failure_count
                );
            }
        }
        OutputFormat::Text => {
            for r in &out.reports {
                println!(
                    "{:<30} {:<12} {:>8} checked {:>6} failed",
                    r.identity_id,
                    status_name(r),
                    r.instances_checked,
                    r.failure_count
                );
                for n in &r.notes {
                    println!("    {n}");
                }
            }
        }
    }
    Ok(())
}

fn status_name(r: &VerificationReport) -> String {
    serde_json::to_value(r.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
