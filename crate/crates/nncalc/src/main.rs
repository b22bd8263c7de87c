use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nncalc::gadgets::SawtoothVariant;
use nncalc::harness::{build_gadget, census, census_csv, census_row_holds, parse_range, CensusFamily, GadgetParams};
use nncalc::json::{from_json, to_json};
use nncalc::rat;
use nncalc::verify::{run, suites_from_name};

#[derive(Parser)]
#[command(name = "nncalc", version, about = "Exact calculus for ReLU-power networks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Weights,
    Neurons,
}

impl From<Variant> for SawtoothVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Weights => SawtoothVariant::Weights,
            Variant::Neurons => SawtoothVariant::Neurons,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a gadget network, write it as JSON and check its budget.
    Gadget {
        /// sawtooth, bspline, squash, mult, tensor-bspline, indicator, localize or poly
        kind: String,
        #[arg(long, default_value_t = 3)]
        j: u32,
        #[arg(long = "L", default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// B-spline degree
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// vector length for the scalar-vector product
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Variant::Weights)]
        variant: Variant,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// ascending polynomial coefficients, comma separated
        #[arg(long, default_value = "0,0,1")]
        coeffs: String,
        /// network JSON to localize
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run invariant suites: calculus, gadgets, pieces, crossing, inapprox, besov or all.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Piece-count census of random networks or sawtooth networks.
    Census {
        #[arg(long, default_value = "random-net")]
        family: String,
        /// budget values: `a`, `a..b` or `a..=b`
        #[arg(long, default_value = "10..=30")]
        budget_range: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long = "L", default_value_t = 3)]
        l: usize,
        #[arg(long, value_enum, default_value_t = Variant::Weights)]
        variant: Variant,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum Fail {
    Usage(String),
    Io(String),
}

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail::Usage(e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
            println!("report: {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<bool, Fail> {
    match cmd {
        Cmd::Gadget { kind, j, l, r, d, n, k, variant, eps, radius, delta, coeffs, input, seed, out, format } => {
            let parse = |s: &str| rat::parse(s).ok_or_else(|| usage(format!("bad rational {s:?}")));
            let coeffs = coeffs.split(',').map(|c| parse(c.trim())).collect::<Result<Vec<_>, _>>()?;
            let input = match input {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    Some(from_json(&text).map_err(usage)?)
                }
                None => None,
            };
            let params = GadgetParams {
                j,
                l,
                r,
                d,
                n,
                k,
                variant: variant.into(),
                eps: parse(&eps)?,
                radius: parse(&radius)?,
                delta: parse(&delta)?,
                coeffs,
                input,
                seed,
            };
            let rep = build_gadget(&kind, &params).map_err(usage)?;
            let path = out.unwrap_or_else(|| PathBuf::from(format!("{kind}.json")));
            std::fs::write(&path, to_json(&rep.network)).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&rep).expect("serializable")),
                Some(Format::Csv) => {
                    println!("claim,pass");
                    for b in &rep.budgets {
                        println!("\"{}\",{}", b.claim, b.pass);
                    }
                }
                None => {
                    let c = &rep.complexity;
                    println!("network: {}", path.display());
                    println!("W = {}, L = {}, N = {}, W0 = {}", c.w, c.l, c.n, c.w0);
                    for b in &rep.budgets {
                        println!("{}: {}", b.claim, if b.pass { "PASS" } else { "FAIL" });
                    }
                }
            }
            Ok(rep.pass())
        }
        Cmd::Verify { suite, trials, seed, out, format } => {
            let suites = suites_from_name(&suite).map_err(usage)?;
            let report = run(&suites, trials, seed);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => {
                    let mut s = String::from("suite,assertion,status,checked,failed\n");
                    for r in &report.suites {
                        for a in &r.assertions {
                            s += &format!("{},{},{},{},{}\n", r.suite, a.name, a.status, a.checked, a.failed);
                        }
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(report.pass)
        }
        Cmd::Census { family, budget_range, r, l, variant, trials, seed, out, format } => {
            let fam = CensusFamily::parse(&family)
                .ok_or_else(|| usage(format!("unknown family {family:?}; use random-net or sawtooth")))?;
            let budgets = parse_range(&budget_range).map_err(usage)?;
            let rows = census(fam, &budgets, r, l, trials, variant.into(), seed).map_err(usage)?;
            let text = match format {
                Format::Csv => census_csv(&rows),
                Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
            };
            emit(&out, &text)?;
            Ok(rows.iter().all(census_row_holds))
        }
    }
}
