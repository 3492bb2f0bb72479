//! `linset`: command-line front end for linear sets on PG(1, q^n).

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use linset_core::autgrp::{predicted_aut_binomial, predicted_aut_cmmz, stabilizer};
use linset_core::equiv::{gammal_search, pgl_search, DEFAULT_BUDGET};
use linset_core::families::{
    binomial_inverse, cmmz_equivalence_witness, cmmz_inverse, cmmz_poly, cmpz_poly, equivalence_witness_binomial,
    reduce_to_s1,
};
use linset_core::invariants::{d6_invariant, d8_invariants, default_power_indices, lem26_failures, power_sum_profile};
use linset_core::linset::{linset_of, weight_spectrum};
use linset_core::parse::{parse_elem, parse_field_spec, parse_modulus, parse_qpoly};
use linset_core::verify::{run_suite, VerifyParams};
use linset_core::{Elem, Error, FieldCtx, QPoly};

#[derive(Parser)]
#[command(name = "linset", version, about = "Exact computations with linearized polynomials and linear sets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Characteristic.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// q = p^e.
    #[arg(long, global = true)]
    e: Option<u32>,
    /// Extension degree over F_q.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Shorthand for --p, --e, --n as "p^e^n".
    #[arg(long, global = true)]
    field: Option<String>,
    /// Defining polynomial coefficients, constant term first, comma-separated.
    #[arg(long, global = true)]
    modulus: Option<String>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of search candidates.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Print JSON instead of key/value lines.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters, modulus and generator.
    Field,
    /// Evaluate a q-polynomial at an element.
    Eval {
        poly: String,
        /// Element expression, e.g. "g^5+1".
        x: String,
    },
    /// Decide scatteredness and report point weights.
    Scattered { poly: String },
    /// The linear set L_f.
    Linset { poly: String },
    /// Power sums and coefficient invariants; with --other, compare two polynomials.
    Invariants {
        poly: String,
        #[arg(long)]
        other: Option<String>,
    },
    /// ΓL equivalence of U_f, U_g or PΓL equivalence of L_f, L_g.
    Equiv {
        f: String,
        g: String,
        #[arg(long, value_enum, default_value_t = Mode::Pgl)]
        mode: Mode,
    },
    /// Stabilizer of L_f in PΓL(2, q^n).
    Autgroup {
        poly: String,
        /// Compare against the predicted group of a family.
        #[arg(long, value_enum)]
        predicted: Option<Family>,
        /// Family parameter θ for --predicted.
        #[arg(long)]
        theta: Option<String>,
    },
    /// Family constructions, inverses and witnesses.
    Family {
        #[command(subcommand)]
        action: FamilyCmd,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pgl,
    Gammal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cmmz,
    Binomial,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// X^q + X^(q^3) + θX^(q^5), or X^(q^s) + δX^(q^(s+m)).
    Construct {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Closed-form compositional inverse.
    Invert {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        theta: String,
    },
    /// A map carrying L_θ onto L_δ (or between the two trinomial members).
    Witness {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
}

enum Failure {
    Assertion(Value),
    Usage(String),
    Budget(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::SearchSpaceTooLarge { candidates, budget } => Failure::Budget(json!({
                "error": "search space too large",
                "candidates": candidates,
                "budget": budget,
            })),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<Value, Failure>;

fn ctx(g: &Global) -> Result<Arc<FieldCtx>, Failure> {
    let (p, e, n) = match &g.field {
        Some(spec) => parse_field_spec(spec)?,
        None => match (g.p, g.n) {
            (Some(p), Some(n)) => (p, g.e.unwrap_or(1), n),
            _ => return Err(Failure::Usage("give --field p^e^n or --p and --n".into())),
        },
    };
    let modulus = g.modulus.as_deref().map(parse_modulus).transpose()?;
    Ok(Arc::new(FieldCtx::new(p, e, n, modulus.as_deref())?))
}

fn elem_json(x: Elem) -> Value {
    json!(x.dlog_or_neg())
}

fn cmd_field(k: &FieldCtx) -> CmdResult {
    Ok(json!({
        "p": k.p(),
        "e": k.e(),
        "n": k.n(),
        "q": k.q(),
        "size": k.size(),
        "modulus": k.modulus(),
        "generator": k.generator_residue(),
    }))
}

fn poly(text: &str, k: &Arc<FieldCtx>) -> Result<QPoly, Failure> {
    Ok(parse_qpoly(text, k)?)
}

fn cmd_invariants(k: &Arc<FieldCtx>, f: &QPoly, other: Option<&str>) -> CmdResult {
    let ds = default_power_indices(k);
    let profile = |p: &QPoly| -> Value {
        power_sum_profile(p, &ds).into_iter().map(|(d, v)| (d.to_string(), elem_json(v))).collect()
    };
    let mut out = json!({ "poly": f, "power_sums": profile(f) });
    if let Ok(v) = d6_invariant(f) {
        out["d6"] = elem_json(v);
    }
    if let Ok((a, b)) = d8_invariants(f) {
        out["d8"] = json!([elem_json(a), elem_json(b)]);
    }
    if let Some(text) = other {
        let g = poly(text, k)?;
        let failures = lem26_failures(f, &g)?;
        out["other"] = json!({ "poly": g, "power_sums": profile(&g) });
        out["power_sums_equal"] = json!(out["power_sums"] == out["other"]["power_sums"]);
        out["identity_failures"] = json!(failures);
    }
    Ok(out)
}

fn cmd_equiv(k: &Arc<FieldCtx>, f: &str, g: &str, mode: Mode, budget: u128) -> CmdResult {
    let (f, g) = (poly(f, k)?, poly(g, k)?);
    let res = match mode {
        Mode::Pgl => pgl_search(&linset_of(&f), &linset_of(&g), budget),
        Mode::Gammal => gammal_search(&f, &g, budget),
    };
    match res {
        Ok(out) => Ok(json!({
            "equivalent": out.witness.is_some(),
            "witness": out.witness,
            "candidates_scanned": out.candidates_scanned,
        })),
        Err(Error::SearchSpaceTooLarge { candidates, budget }) => Err(Failure::Budget(json!({
            "equivalent": "unknown",
            "witness": null,
            "candidates_scanned": 0,
            "candidates": candidates,
            "budget": budget,
        }))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_autgroup(
    k: &Arc<FieldCtx>,
    text: &str,
    predicted: Option<Family>,
    theta: Option<&str>,
    budget: u128,
) -> CmdResult {
    let f = poly(text, k)?;
    let l = linset_of(&f);
    let g = stabilizer(&l, budget)?;
    let mut out = json!({ "order": g.order, "closed": g.closed, "elements": g.elements });
    if let Some(fam) = predicted {
        let t = parse_elem(theta.ok_or_else(|| Failure::Usage("--predicted needs --theta".into()))?, k)?;
        let pred = match fam {
            Family::Cmmz => predicted_aut_cmmz(k, t)?,
            Family::Binomial => predicted_aut_binomial(k, t)?,
        };
        let equal = pred.elements == g.elements;
        out["predicted_order"] = json!(pred.order);
        out["matches_prediction"] = json!(equal);
        if !equal {
            return Err(Failure::Assertion(out));
        }
    }
    Ok(out)
}

fn half(k: &FieldCtx) -> Result<u32, Failure> {
    if !k.n().is_multiple_of(2) {
        return Err(Failure::Usage("binomial families need even n".into()));
    }
    Ok(k.n() / 2)
}

fn cmd_family(k: &Arc<FieldCtx>, action: &FamilyCmd) -> CmdResult {
    let el = |s: &str| parse_elem(s, k).map_err(Failure::from);
    match action {
        FamilyCmd::Construct { family: Family::Cmmz, theta, .. } => {
            let thetas = match theta {
                Some(t) => vec![el(t)?],
                None => k.roots_x2_plus_x_minus_1(),
            };
            let polys: Vec<QPoly> = thetas.iter().map(|&t| cmmz_poly(k, t)).collect::<Result<_, _>>()?;
            Ok(json!({ "theta": thetas.iter().map(|&t| elem_json(t)).collect::<Vec<_>>(), "polys": polys }))
        }
        FamilyCmd::Construct { family: Family::Binomial, theta, s } => {
            let m = half(k)?;
            let t = el(theta.as_deref().ok_or_else(|| Failure::Usage("--theta is required".into()))?)?;
            let f = cmpz_poly(k, m, *s, t)?;
            let mut out = json!({ "poly": f, "scattered": f.is_scattered() });
            if *s != 1 {
                let (g, w) = reduce_to_s1(k, m, *s, t)?;
                out["s1_form"] = json!({ "poly": g, "witness": w });
            }
            Ok(out)
        }
        FamilyCmd::Invert { family: Family::Cmmz, theta } => Ok(json!({ "inverse": cmmz_inverse(k, el(theta)?)? })),
        FamilyCmd::Invert { family: Family::Binomial, theta } => {
            let inv = binomial_inverse(k, half(k)?, el(theta)?)?;
            Ok(json!({ "inverse": inv, "invertible": inv.is_some() }))
        }
        FamilyCmd::Witness { family: Family::Cmmz, theta, delta, .. } => {
            let w = cmmz_equivalence_witness(k, el(theta)?, el(delta)?)?;
            Ok(json!({ "witness": w }))
        }
        FamilyCmd::Witness { family: Family::Binomial, theta, delta, s } => {
            let m = half(k)?;
            if *s != 1 {
                return Err(Failure::Usage("binomial witnesses are for s = 1".into()));
            }
            let (t, d) = (el(theta)?, el(delta)?);
            let Some(rho) = linset_core::equiv::norm_condition(k, d, t, m)? else {
                return Err(Failure::Assertion(json!({ "witness": null, "norm_condition": false })));
            };
            let w = equivalence_witness_binomial(k, m, d, t, rho)?;
            Ok(json!({ "witness": w, "norm_condition": true }))
        }
    }
}

fn cmd_verify(g: &Global, suite: &str, samples: Option<u64>, seed: u64) -> CmdResult {
    let (p, e, n) = match &g.field {
        Some(spec) => {
            let (p, e, n) = parse_field_spec(spec)?;
            (p, e, Some(n))
        }
        None => (
            g.p.ok_or_else(|| Failure::Usage("verify needs --p".into()))?,
            g.e.unwrap_or(1),
            g.n,
        ),
    };
    let mut params = VerifyParams::new(p, e);
    params.n = n;
    params.samples = samples;
    params.seed = seed;
    params.budget = g.budget.unwrap_or(DEFAULT_BUDGET);
    params.timings = true;
    params.modulus = g.modulus.as_deref().map(parse_modulus).transpose()?;
    let report = run_suite(suite, &params)?;
    let v = serde_json::to_value(&report).expect("serializable");
    if report.ok() {
        Ok(v)
    } else {
        Err(Failure::Assertion(v))
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    let budget = g.budget.unwrap_or(DEFAULT_BUDGET);
    match &cli.cmd {
        Cmd::Verify { suite, samples, seed } => cmd_verify(g, suite, *samples, *seed),
        cmd => {
            let k = ctx(g)?;
            match cmd {
                Cmd::Field => cmd_field(&k),
                Cmd::Eval { poly: f, x } => {
                    let f = poly(f, &k)?;
                    let x = parse_elem(x, &k)?;
                    Ok(json!({ "x": elem_json(x), "value": elem_json(f.eval(x)) }))
                }
                Cmd::Scattered { poly: f } => {
                    let f = poly(f, &k)?;
                    let l = linset_of(&f);
                    Ok(json!({
                        "scattered": f.is_scattered(),
                        "card": l.card(),
                        "weights": weight_spectrum(&f),
                    }))
                }
                Cmd::Linset { poly: f } => {
                    let f = poly(f, &k)?;
                    Ok(json!({ "linset": linset_of(&f), "weights": weight_spectrum(&f) }))
                }
                Cmd::Invariants { poly: f, other } => cmd_invariants(&k, &poly(f, &k)?, other.as_deref()),
                Cmd::Equiv { f, g: gp, mode } => cmd_equiv(&k, f, gp, *mode, budget),
                Cmd::Autgroup { poly: f, predicted, theta } => {
                    cmd_autgroup(&k, f, *predicted, theta.as_deref(), budget)
                }
                Cmd::Family { action } => cmd_family(&k, action),
                Cmd::Verify { .. } => unreachable!(),
            }
        }
    }
}

/// Flattens a JSON value into `path: value` lines.
fn render(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                let path = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                render(&path, val, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, val) in items.iter().enumerate() {
                render(&format!("{prefix}[{i}]"), val, out);
            }
        }
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn emit(v: &Value, as_json: bool) {
    let mut text = if as_json {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        let mut lines = Vec::new();
        render("", v, &mut lines);
        lines.join("\n")
    };
    text.push('\n');
    // A closed pipe is not an error for a report printer.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(v) => {
            emit(&v, cli.global.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(v)) => {
            emit(&v, cli.global.json);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(v)) => {
            emit(&v, cli.global.json);
            ExitCode::from(3)
        }
    }
}
