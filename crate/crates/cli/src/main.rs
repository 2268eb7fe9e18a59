//! `mocktheta`: evaluate functions, run exact q-series identities and numerical verification suites.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error, 3 unknown id.

use std::f64::consts::PI;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mocktheta_core::numerics::parse_complex;
use mocktheta_core::qidentities::{catalog, find};
use mocktheta_core::registry::{all_checks, evaluators, find_evaluator, parse_real_list, CheckContext, EvalArgs, Suite};
use mocktheta_core::report::verify;
use mocktheta_core::{MockError, C64};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mocktheta", version, about = "Mock theta functions: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at a point and print {value, certified_tol, flags}.
    Eval(EvalCmd),
    /// Check an exact q-series identity through a given order.
    Qcheck {
        id: String,
        #[arg(long, default_value_t = 50)]
        order: i64,
    },
    /// Run numerical verification suites and write a JSON report.
    Verify(VerifyCmd),
    /// List evaluators, identities and suites.
    List {
        /// One of evaluators, identities, checks, suites, all.
        #[arg(default_value = "all")]
        what: String,
    },
}

#[derive(Args)]
struct EvalCmd {
    id: String,
    /// Complex number such as "0.1+1.2i".
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Nome q = e^{2 pi i tau} with 0 < |q| < 1; alternative to --tau.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    /// Real or comma separated list; entries may be "p/q".
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    /// 1-based component of a vector valued family.
    #[arg(long)]
    component: Option<usize>,
    /// Indefinite theta data as inline JSON or @path.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyCmd {
    /// qseries, ch1, ch2, ch3, ch4 or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Replaces every check's tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 50)]
    order: i64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Only "default" is supported: the fixed grids and seeded samples built into each check.
    #[arg(long, default_value = "default")]
    tau_grid: String,
}

fn fail(e: &MockError) -> ExitCode {
    let code = match e {
        MockError::UnknownId(_) => 3,
        e if e.is_input_error() => 2,
        _ => 1,
    };
    eprintln!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
    ExitCode::from(code)
}

fn opt<T>(s: &Option<String>, f: impl Fn(&str) -> mocktheta_core::Result<T>) -> mocktheta_core::Result<Option<T>> {
    s.as_deref().map(f).transpose()
}

fn tau_from_q(q: C64) -> mocktheta_core::Result<C64> {
    let r = q.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(MockError::InvalidInput(format!("need 0 < |q| < 1, got {r}")));
    }
    Ok(q.ln() / (2.0 * PI * C64::new(0.0, 1.0)))
}

fn eval_args(c: &EvalCmd) -> mocktheta_core::Result<EvalArgs> {
    let tau = match (&c.tau, &c.q) {
        (Some(_), Some(_)) => return Err(MockError::InvalidInput("give --tau or --q, not both".into())),
        (Some(t), None) => Some(parse_complex(t)?),
        (None, Some(q)) => Some(tau_from_q(parse_complex(q)?)?),
        (None, None) => None,
    };
    if let Some(t) = tau {
        if !(t.im > 0.0) {
            return Err(MockError::NotInUpperHalfPlane(t.im));
        }
    }
    let spec = match &c.spec {
        Some(s) if s.starts_with('@') => Some(
            fs::read_to_string(&s[1..]).map_err(|e| MockError::InvalidInput(format!("reading {}: {e}", &s[1..])))?,
        ),
        other => other.clone(),
    };
    Ok(EvalArgs {
        tau,
        z: opt(&c.z, parse_complex)?,
        u: opt(&c.u, parse_complex)?,
        v: opt(&c.v, parse_complex)?,
        a: opt(&c.a, parse_real_list)?.unwrap_or_default(),
        b: opt(&c.b, parse_real_list)?.unwrap_or_default(),
        m: c.m,
        l: c.l,
        component: c.component,
        spec,
        tol: c.tol,
    })
}

fn cmd_eval(c: &EvalCmd) -> ExitCode {
    let run = || -> mocktheta_core::Result<String> {
        let ev = find_evaluator(&c.id)?;
        let out = ev.evaluate(&eval_args(c)?)?;
        Ok(serde_json::to_string(&out).expect("evaluation serializes"))
    };
    match run() {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn cmd_qcheck(id: &str, order: i64) -> ExitCode {
    let r = match find(id).and_then(|q| q.run(order)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    println!("{}", serde_json::to_string_pretty(&r).expect("result serializes"));
    if r.comparison.equal {
        ExitCode::SUCCESS
    } else {
        let c = &r.comparison;
        eprintln!(
            "first mismatch at exponent {} (lhs {}, rhs {})",
            c.first_mismatch.as_deref().unwrap_or("?"),
            c.lhs_coeff.as_deref().unwrap_or("?"),
            c.rhs_coeff.as_deref().unwrap_or("?")
        );
        ExitCode::from(1)
    }
}

fn cmd_verify(c: &VerifyCmd) -> ExitCode {
    let suites = match Suite::parse(&c.suite) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if c.tau_grid != "default" {
        return fail(&MockError::InvalidInput(format!("unsupported tau grid '{}'", c.tau_grid)));
    }
    if c.order < 1 {
        return fail(&MockError::InvalidInput(format!("order must be positive, got {}", c.order)));
    }
    if let Some(t) = c.tol {
        if !(t >= 0.0) {
            return fail(&MockError::InvalidInput(format!("tolerance must be non-negative, got {t}")));
        }
    }
    let ctx = CheckContext { seed: c.seed, tol: c.tol, order: c.order };
    let report = verify(&suites, &ctx);
    let text = match report.to_json() {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    match &c.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text + "\n") {
                eprintln!("{}", json!({ "error": { "kind": "io_error", "message": format!("writing {p}: {e}") } }));
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    for e in report.entries.iter().filter(|e| !e.pass) {
        let dev = e.max_deviation.map_or("n/a".to_string(), |d| format!("{d:.3e}"));
        eprintln!("FAIL {} deviation {} tolerance {:.1e} {}", e.id, dev, e.tolerance, e.error.as_deref().unwrap_or(""));
    }
    eprintln!("{} of {} checks passed", report.summary.passed, report.summary.total);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_list(what: &str) -> ExitCode {
    let evs = || {
        evaluators()
            .iter()
            .map(|e| json!({ "id": e.id(), "params": e.params(), "description": e.describe() }))
            .collect::<Vec<_>>()
    };
    let ids = || catalog().iter().map(|q| json!({ "id": q.id, "anchor": q.anchor })).collect::<Vec<_>>();
    let checks = || {
        all_checks()
            .iter()
            .map(|c| json!({ "id": c.id(), "suite": c.suite(), "anchor": c.anchor(), "tolerance": c.tolerance() }))
            .collect::<Vec<_>>()
    };
    let suites = || Suite::ALL.iter().map(|s| s.name()).collect::<Vec<_>>();
    let v = match what {
        "evaluators" => json!(evs()),
        "identities" => json!(ids()),
        "checks" => json!(checks()),
        "suites" => json!(suites()),
        "all" => json!({ "evaluators": evs(), "identities": ids(), "checks": checks(), "suites": suites() }),
        other => return fail(&MockError::UnknownId(format!("list category '{other}'"))),
    };
    println!("{}", serde_json::to_string_pretty(&v).expect("listing serializes"));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match &cli.cmd {
        Command::Eval(c) => cmd_eval(c),
        Command::Qcheck { id, order } => cmd_qcheck(id, *order),
        Command::Verify(c) => cmd_verify(c),
        Command::List { what } => cmd_list(what),
    }
}

