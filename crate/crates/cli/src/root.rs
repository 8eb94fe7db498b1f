use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use graphcon::rootfind::{compare_methods, CompareConfig, Method, ScalarFunction};
use serde::Deserialize;

use crate::{write_output, Globals, Outcome};

#[derive(Subcommand, Debug)]
pub enum RootCommand {
    /// Run one or all methods; prints a table and writes roots.csv.
    Find(FindArgs),
}

/// `root find` settings; the same fields may come from the config file.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindArgs {
    /// `all`, `fixed_point`, `bisection`, `secant` or `newton`; repeat or
    /// separate with commas for several.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    method: Vec<String>,
    /// Built-in function: `tanx` (x cos x - sin x, zero where tan x = x) or `quadratic2` (x² - 2).
    #[arg(long)]
    function: Option<String>,
    /// Bracket start (default 4 for tanx, 1 for quadratic2).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Bracket end (default 5 for tanx, 2 for quadratic2).
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Start of Newton and fixed-point iteration, first secant point
    /// (defaults: bracket midpoint; secant uses a).
    #[arg(long, allow_negative_numbers = true)]
    p0: Option<f64>,
    /// Second secant point (default b).
    #[arg(long, allow_negative_numbers = true)]
    p1: Option<f64>,
    /// Tolerance (default 1e-6).
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap (default 100).
    #[arg(long)]
    max_iters: Option<usize>,
}

fn methods(names: &[String]) -> Result<Vec<Method>> {
    if names.is_empty() || names.iter().any(|m| m == "all") {
        return Ok(Method::ALL.to_vec());
    }
    names
        .iter()
        .map(|m| m.parse::<Method>().map_err(anyhow::Error::from))
        .collect()
}

fn find(args: FindArgs, globals: &Globals) -> Outcome {
    let config: FindArgs = globals.config_or_default()?;
    let function_id = args
        .function
        .or(config.function)
        .unwrap_or_else(|| "tanx".to_string());
    let f = ScalarFunction::builtin(&function_id)
        .with_context(|| format!("unknown function {function_id:?} (tanx, quadratic2)"))?;
    let (da, db) = if function_id == "quadratic2" { (1.0, 2.0) } else { (4.0, 5.0) };
    let a = args.a.or(config.a).unwrap_or(da);
    let b = args.b.or(config.b).unwrap_or(db);
    let tol = args.tol.or(config.tol).unwrap_or(1e-6);
    let max_iters = args.max_iters.or(config.max_iters).unwrap_or(100);
    let mut settings = CompareConfig::for_bracket(a, b, tol, max_iters);
    let p0 = args.p0.or(config.p0);
    let p1 = args.p1.or(config.p1);
    if let Some(p0) = p0 {
        settings.newton_start = p0;
        settings.fixed_point_start = p0;
    }
    settings.secant_start = (p0.unwrap_or(a), p1.unwrap_or(b));
    let names = if args.method.is_empty() { config.method } else { args.method };
    let methods = methods(&names)?;

    let cmp = compare_methods(&f, &methods, &settings);
    print!("{}", cmp.to_table());
    let out = globals.out_dir()?;
    write_output(out, "roots.csv", |buf| Ok(cmp.write_csv(buf)?))?;

    let mut ok = true;
    for row in &cmp.rows {
        if let Err(e) = &row.outcome {
            eprintln!("error: {}: {e}", row.method);
            ok = false;
        }
    }
    Ok(ok)
}

pub fn run(command: RootCommand, globals: &Globals) -> Outcome {
    match command {
        RootCommand::Find(args) => find(args, globals),
    }
}
