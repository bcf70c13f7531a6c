use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use symfermat::curvedb::{verify, CurveDatabase, CurveRecord, VerifyStatus};
use symfermat::freypipe::{parse_triple, run_equation, PipeError, ScenarioFile};
use symfermat::localobs::{
    obstruction_report, solvable_mod_q_fast, solvable_over_ql, sweep, LocalSolvability,
    SearchOptions, DEFAULT_K_MAX,
};
use symfermat::nt::{is_prime, Int};
use symfermat::qrsolver::{parse, to_classes};

/// Upper end of the exponent range claimed for the obstruction sweep.
const FULL_RANGE_MAX: u64 = 99_999;

/// Symplectic method and local obstructions for a·x^p + b·y^p + c·z^p = 0.
#[derive(Parser, Debug)]
#[command(name = "symfermat", version, about, long_about = None)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Extra curve records, merged over the embedded database.
    #[arg(long, global = true, env = "SYMFERMAT_CURVES", value_name = "FILE")]
    curves: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Equation {
    /// Coefficients a,b,c.
    #[arg(long = "eq", value_name = "A,B,C")]
    eq: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponents p for which the symplectic criteria rule out every solution.
    Analyze {
        #[command(flatten)]
        eq: Equation,
        /// Extra scenario blocks, merged over the embedded ones.
        #[arg(long, value_name = "FILE")]
        scenarios: Option<PathBuf>,
    },
    /// Solvability over Q_ℓ for one prime ℓ.
    Local {
        #[command(flatten)]
        eq: Equation,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Search for a prime with no local solutions.
    Obstruct {
        #[command(flatten)]
        eq: Equation,
        #[arg(long)]
        p: u64,
        /// Largest even k tried in q = kp + 1.
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: u64,
        /// List every obstruction prime instead of stopping at the first.
        #[arg(long)]
        all: bool,
    },
    /// Obstruction search over a range of exponents.
    Sweep {
        #[command(flatten)]
        eq: Equation,
        #[arg(long, default_value_t = 11)]
        pmin: u64,
        #[arg(long, default_value_t = 1000)]
        pmax: u64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: u64,
        /// Sweep 11 ≤ p < 10^5. Takes a long time.
        #[arg(long, conflicts_with_all = ["pmin", "pmax"])]
        full_range: bool,
    },
    /// Prime classes and density of a Legendre-symbol condition.
    Density {
        /// For example "(-2)=-1 & (2)=-1".
        expr: String,
    },
    /// Show and verify an elliptic curve record.
    Curve { label: String },
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Output {
    text: String,
    json: serde_json::Value,
    undecided: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn equation(eq: &Equation) -> Result<[Int; 3], Failure> {
    let t = parse_triple(&eq.eq, 0)
        .map_err(|_| Failure(format!("bad --eq {:?}: expected A,B,C", eq.eq)))?;
    if t.iter().any(|c| c == &Int::from(0)) {
        return Err(Failure("coefficients must be nonzero".into()));
    }
    Ok(t)
}

fn database(cli: &Cli) -> Result<CurveDatabase, Failure> {
    let mut db = CurveDatabase::embedded();
    if let Some(path) = &cli.curves {
        db.load(&read(path)?)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(db)
}

fn to_json(v: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn analyze(cli: &Cli, eq: &Equation, scenarios: &Option<PathBuf>) -> Result<Output, Failure> {
    let coeffs = equation(eq)?;
    let db = database(cli)?;
    let mut file = ScenarioFile::embedded();
    if let Some(path) = scenarios {
        file.merge(
            ScenarioFile::parse(&read(path)?)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        );
    }
    let report = run_equation(&file, &db, &coeffs).map_err(|e| match e {
        PipeError::UnknownEquation(t) => Failure(format!(
            "no embedded scenario for {t}; supply one with --scenarios FILE"
        )),
        e => Failure(e.to_string()),
    })?;
    Ok(Output {
        text: report.summary(),
        json: to_json(&report),
        undecided: false,
    })
}

fn local(eq: &Equation, p: u64, ell: u64) -> Result<Output, Failure> {
    let coeffs = equation(eq)?;
    let good =
        is_prime(ell) && ell % p == 1 && coeffs.iter().all(|c| c % ell != Int::from(0)) && ell != p;
    let (verdict, witness, method, note) = if good {
        let ok = solvable_mod_q_fast(&coeffs, p, ell)?;
        (Some(ok), None, "fast_subgroup", None)
    } else {
        match solvable_over_ql(&coeffs, p, ell)? {
            LocalSolvability::Solvable(w) => (Some(true), Some(w), "hensel_descent", None),
            LocalSolvability::Unsolvable => (Some(false), None, "hensel_descent", None),
            LocalSolvability::Undecided(why) => (None, None, "hensel_descent", Some(why)),
        }
    };
    let text = match (verdict, &witness, &note) {
        (Some(true), Some(w), _) => format!("solvable, witness {w}"),
        (Some(true), None, _) => "solvable".to_string(),
        (Some(false), _, _) => "unsolvable".to_string(),
        (None, _, why) => format!("undecided: {}", why.as_deref().unwrap_or("")),
    };
    let json = json!({
        "equation": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "p": p,
        "ell": ell,
        "solvable": verdict,
        "method": method,
        "witness": witness.as_ref().map(to_json),
        "note": note,
    });
    Ok(Output {
        text,
        json,
        undecided: verdict.is_none(),
    })
}

fn obstruct(eq: &Equation, p: u64, kmax: u64, all: bool) -> Result<Output, Failure> {
    let coeffs = equation(eq)?;
    let opts = SearchOptions {
        k_max: kmax,
        certify: true,
        exhaustive: all,
    };
    let report = obstruction_report(&coeffs, p, opts)?;
    let mut text = String::new();
    for c in &report.checks {
        if c.solvable != Some(true) {
            let verdict = if c.solvable.is_some() {
                "unsolvable"
            } else {
                "undecided"
            };
            writeln!(text, "  ℓ = {}: {verdict} ({})", c.prime, c.method).unwrap();
        }
    }
    let cert = match report.certified_cutoff {
        Some(q0) => format!("certified, cutoff {q0}"),
        None => format!("not certified, k ≤ {kmax}"),
    };
    match (&report.obstruction, all) {
        (Some(q), false) => write!(text, "obstruction at {q}").unwrap(),
        (Some(_), true) => {
            let qs: Vec<String> = report
                .obstruction_primes
                .iter()
                .map(u64::to_string)
                .collect();
            write!(text, "obstructions at {} ({cert})", qs.join(", ")).unwrap()
        }
        (None, _) => write!(text, "none ({cert})").unwrap(),
    }
    let mut json = to_json(&report);
    json["method"] = to_json(&report.method());
    Ok(Output {
        text,
        json,
        undecided: report.undecided,
    })
}

fn run_sweep(eq: &Equation, pmin: u64, pmax: u64, kmax: u64) -> Result<Output, Failure> {
    let coeffs = equation(eq)?;
    let rows = sweep(&coeffs, pmin, pmax, kmax)?;
    let dash = |x: Option<u64>| x.map_or("-".to_string(), |q| q.to_string());
    let mut text = format!(
        "{:>7}  {:>11}  {:>14}  {:>9}  {:>8}\n",
        "p", "obstruction", "method", "kp+1", "ms"
    );
    for r in &rows {
        let method = r.method.map_or("-".to_string(), |m| m.to_string());
        writeln!(
            text,
            "{:>7}  {:>11}  {:>14}  {:>9}  {:>8}",
            r.p,
            dash(r.obstruction),
            method,
            dash(r.kp1),
            r.elapsed_ms
        )
        .unwrap();
    }
    let missing = rows.iter().filter(|r| r.obstruction.is_none()).count();
    write!(
        text,
        "{} exponents, {missing} without an obstruction up to k = {kmax}",
        rows.len()
    )
    .unwrap();
    let undecided = rows.iter().any(|r| r.undecided);
    Ok(Output {
        text,
        json: to_json(&rows),
        undecided,
    })
}

fn density(expr: &str) -> Result<Output, Failure> {
    let e = parse(expr).map_err(|e| Failure(format!("{expr:?}: {e}")))?;
    let set = to_classes(&e)?;
    let d = set.density();
    let text = format!("{set}; density {d}");
    let json = json!({
        "expression": e.to_string(),
        "classes": to_json(&set),
        "classes_text": set.to_string(),
        "density": d.to_string(),
    });
    Ok(Output {
        text,
        json,
        undecided: false,
    })
}

fn record_json(r: &CurveRecord) -> serde_json::Value {
    let report = verify(r);
    let status = match &report.status {
        VerifyStatus::Verified => "verified",
        VerifyStatus::Unverifiable => "unverifiable",
        VerifyStatus::Mismatched(_) => "mismatched",
    };
    json!({
        "label": r.label,
        "conductor": r.conductor,
        "discriminant": r.discriminant_string(),
        "disc_sign": r.disc_sign,
        "disc_valuations": r.disc_valuations.iter().map(|(l, v)| (l.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "reduction": r.reduction_at.iter().map(|(l, t)| (l.to_string(), json!(t.to_string()))).collect::<serde_json::Map<_, _>>(),
        "sl2f3_at_2": r.inertia_sl2f3_at_2,
        "model": r.model.as_ref().map(ToString::to_string),
        "verification": status,
        "mismatched_primes": report.mismatched_primes(),
    })
}

fn curve(cli: &Cli, label: &str) -> Result<Output, Failure> {
    let db = database(cli)?;
    let r = db.get(label)?;
    let json = record_json(r);
    let text = format!(
        "{r}\nverification: {}",
        json["verification"].as_str().unwrap_or("")
    );
    Ok(Output {
        text,
        json,
        undecided: false,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Analyze { eq, scenarios } => analyze(cli, eq, scenarios),
        Command::Local { eq, p, ell } => local(eq, *p, *ell),
        Command::Obstruct { eq, p, kmax, all } => obstruct(eq, *p, *kmax, *all),
        Command::Sweep {
            eq,
            pmin,
            pmax,
            kmax,
            full_range,
        } => {
            let (lo, hi) = if *full_range {
                (11, FULL_RANGE_MAX)
            } else {
                (*pmin, *pmax)
            };
            run_sweep(eq, lo, hi, *kmax)
        }
        Command::Density { expr } => density(expr),
        Command::Curve { label } => curve(cli, label),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else {
                out.text
            };
            let mut stdout = std::io::stdout().lock();
            // A closed reader is not an error.
            let _ = writeln!(stdout, "{body}").and_then(|_| stdout.flush());
            ExitCode::from(if out.undecided { 1 } else { 0 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
