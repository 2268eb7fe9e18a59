//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Each suite must pass in full, finish inside its time budget, and contain the
//! listed checks with deviations below the pinned tolerances.

mod common;

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mocktheta_core::registry::{CheckContext, CheckOutcome, Suite};
use mocktheta_core::report::verify;

/// `(id, pinned tolerance, minimum sample count)`
type Pin = (&'static str, f64, usize);

struct Criterion {
    name: &'static str,
    suite: Suite,
    budget: Duration,
    pins: &'static [Pin],
    /// Every check of the suite needs at least this many samples.
    min_samples: usize,
    /// Upper bound on every check tolerance in the suite, with per-id exceptions in `pins`.
    max_tolerance: Option<f64>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        name: "qseries: exact identities through exponent 50",
        suite: Suite::Qseries,
        budget: Duration::from_secs(10),
        pins: &[
            ("in5", 0.0, 1),
            ("example2_1", 0.0, 1),
            ("example2_2", 0.0, 1),
            ("seventh_f0_integral", 0.0, 1),
            ("seventh_f1_integral", 0.0, 1),
            ("seventh_f2_integral", 0.0, 1),
        ],
        min_samples: 1,
        max_tolerance: Some(0.0),
    },
    Criterion {
        name: "ch1: Mordell integral, Lerch sums, completions and period integrals",
        suite: Suite::Ch1,
        budget: Duration::from_secs(60),
        pins: &[
            ("mordell.shift_one", 1e-8, 20),
            ("mordell.shift_tau", 1e-8, 20),
            ("mordell.modular_s", 1e-8, 20),
            ("mordell.modular_t", 1e-8, 20),
            ("lerch.mu_symmetric", 1e-8, 20),
            ("lerch.mu_modular_s", 1e-8, 20),
            ("correction.modular_s", 1e-8, 20),
            ("completed_mu.elliptic", 1e-8, 20),
            ("completed_mu.modular", 1e-8, 20),
            ("period.upper", 1e-6, 20),
            ("period.full", 1e-6, 20),
        ],
        min_samples: 20,
        max_tolerance: Some(1e-8),
    },
    Criterion {
        name: "ch2: indefinite theta functions on the two examples",
        suite: Suite::Ch2,
        budget: Duration::from_secs(120),
        pins: &[
            ("indefinite.cocycle", 1e-8, 1),
            ("indefinite.elliptic", 1e-8, 1),
            ("indefinite.odd", 1e-8, 1),
            ("indefinite.modular_t", 1e-8, 1),
            ("indefinite.modular_s", 1e-8, 1),
            ("indefinite.char_shift_a", 1e-8, 1),
            ("indefinite.char_shift_b", 1e-8, 1),
            ("indefinite.char_negate", 1e-8, 1),
            ("indefinite.char_modular_t", 1e-8, 1),
            ("indefinite.char_modular_s", 1e-8, 1),
            ("indefinite.example_one_eta", 1e-9, 10),
            ("indefinite.example_two_eta", 1e-9, 10),
            ("indefinite.cusp_continuity", 1e-6, 1),
        ],
        min_samples: 1,
        max_tolerance: None,
    },
    Criterion {
        name: "ch3: Fourier coefficients of meromorphic Jacobi forms",
        suite: Suite::Ch3,
        budget: Duration::from_secs(180),
        pins: &[
            ("fourier.example_reconstruction", 1e-6, 30),
            ("fourier.h_modular_t", 1e-8, 1),
            ("fourier.h_modular_s", 1e-6, 1),
            ("fourier.h_shadow", 1e-4, 1),
            ("fourier.h_casimir", 1e-3, 1),
            ("fourier.block_indefinite_theta", 1e-8, 1),
        ],
        min_samples: 1,
        max_tolerance: None,
    },
    Criterion {
        name: "ch4: fifth and seventh order vectors",
        suite: Suite::Ch4,
        budget: Duration::from_secs(300),
        pins: &[
            ("families.F7_completion", 1e-6, 4),
            ("families.F5_1_completion", 1e-6, 4),
            ("families.F5_2_completion", 1e-6, 4),
            ("families.G5_2_negates_G5_1", 1e-10, 1),
            ("families.F5_modular_s", 1e-6, 1),
            ("families.shadow_integral", 1e-6, 2),
            ("families.involutions", 1e-12, 1),
            ("families.split_cross_check", 1e-8, 1),
        ],
        min_samples: 1,
        max_tolerance: None,
    },
];

fn problems(c: &Criterion, entries: &[CheckOutcome], elapsed: Duration) -> Vec<String> {
    let mut out = Vec::new();
    if elapsed > c.budget {
        out.push(format!("took {:.1?}, budget {:?}", elapsed, c.budget));
    }
    for e in entries {
        if !e.pass {
            out.push(format!("{} failed ({})", e.id, e.error.as_deref().unwrap_or("deviation above tolerance")));
        }
        if e.samples < c.min_samples {
            out.push(format!("{} has {} samples, need {}", e.id, e.samples, c.min_samples));
        }
        let pinned = c.pins.iter().find(|p| p.0 == e.id).map(|p| p.1).or(c.max_tolerance);
        if let Some(t) = pinned {
            if e.tolerance > t {
                out.push(format!("{} tolerance {:e} exceeds {:e}", e.id, e.tolerance, t));
            }
        }
    }
    for (id, tol, n) in c.pins {
        match entries.iter().find(|e| e.id == *id) {
            None => out.push(format!("{id} missing")),
            Some(e) => {
                if e.samples < *n {
                    out.push(format!("{id} has {} samples, need {n}", e.samples));
                }
                match e.max_deviation {
                    Some(d) if d <= *tol => {}
                    d => out.push(format!("{id} deviation {d:?} above {tol:e}")),
                }
            }
        }
    }
    out
}

fn report(name: &str, detail: String, issues: &[String]) -> bool {
    if issues.is_empty() {
        println!("PASS {name} ({detail})");
    } else {
        println!("FAIL {name} ({detail}): {}", issues.join("; "));
    }
    issues.is_empty()
}

fn main() -> ExitCode {
    let ctx = CheckContext { seed: 42, tol: None, order: 50 };
    let mut ok = true;
    for (k, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let r = verify(&[c.suite], &ctx);
        let elapsed = start.elapsed();
        let issues = problems(c, &r.entries, elapsed);
        let detail = format!("{}/{} checks, {:.2?}", r.summary.passed, r.summary.total, elapsed);
        ok &= report(&format!("criterion {}: {}", k + 1, c.name), detail, &issues);
    }

    let start = Instant::now();
    let mut issues = Vec::new();
    for (name, f) in common::oracle_suite::ORACLES {
        if panic::catch_unwind(f).is_err() {
            issues.push(format!("{name} disagrees"));
        }
    }
    let detail = format!("{} oracles, {:.2?}", common::oracle_suite::ORACLES.len(), start.elapsed());
    ok &= report("criterion 6: independent oracles agree with production paths", detail, &issues);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
