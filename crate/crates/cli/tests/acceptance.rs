//! The acceptance gate: one PASS/FAIL line per criterion, then a single assertion.
//!
//! The lines go straight to stdout, so they show even under the test harness's capture.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use moncom_core::check::{run_law, CheckConfig, LawOutcome, Suite};

struct Criterion {
    id: u32,
    title: &'static str,
    /// Suite, law, fuel override.
    laws: &'static [(Suite, &'static str, Option<u64>)],
    /// Minimum case count per law, in order.
    min_cases: &'static [usize],
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "comonoid laws on 200 values each",
        laws: &[
            (Suite::Category, "coassociativity", None),
            (Suite::Category, "counit", None),
            (Suite::Category, "commutativity", None),
            (Suite::Category, "interchange", None),
        ],
        min_cases: &[200, 200, 200, 200],
        limit: Some(Duration::from_secs(5)),
    },
    Criterion {
        id: 2,
        title: "s-m-n on 200 programs at fuel 10000, offset within 2",
        laws: &[(Suite::Kleene, "s-m-n", Some(10_000))],
        min_cases: &[200],
        limit: None,
    },
    Criterion {
        id: 3,
        title: "Kleene fixed programs on 100 cases; the quine prints its own code",
        laws: &[(Suite::Kleene, "fixed-point", None), (Suite::Kleene, "quine", None)],
        min_cases: &[100, 100],
        limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        id: 4,
        title: "decode after encode is the identity for every tag; 100 foreign codes rejected",
        // 7 tags × 100
        laws: &[(Suite::Kleene, "retract", None), (Suite::Kleene, "retract-rejects", None)],
        min_cases: &[700, 100],
        limit: None,
    },
    Criterion {
        id: 5,
        title: "universal process: state line, output line, evaluator both ways on 50 × 10",
        laws: &[
            (Suite::Process, "state-line", None),
            (Suite::Process, "output-line", None),
            (Suite::Process, "evaluator-from-process", None),
        ],
        min_cases: &[500, 500, 500],
        limit: None,
    },
    Criterion {
        id: 6,
        title: "native and program runs agree on 200 machines; unary successor and addition on 0..20",
        laws: &[
            (Suite::Turing, "native-vs-program", Some(1_000)),
            (Suite::Turing, "unary-successor", None),
            (Suite::Turing, "unary-addition", None),
        ],
        min_cases: &[200, 21, 441],
        limit: Some(Duration::from_secs(30)),
    },
    Criterion {
        id: 7,
        title: "meters: time = trace length, space = span <= time, program = native, halting machine on a two-letter word",
        laws: &[
            (Suite::Complexity, "time-equals-trace", None),
            (Suite::Complexity, "space-equals-span", None),
            (Suite::Complexity, "space-within-time", None),
            (Suite::Complexity, "program-meters", None),
            (Suite::Complexity, "halting-on-input-word", None),
        ],
        min_cases: &[200, 200, 200, 200, 1],
        limit: None,
    },
    Criterion {
        id: 8,
        title: "coalgebra: square up to 3 states and depth 5, idempotent, split, eval-curry",
        laws: &[
            (Suite::Coalgebra, "homomorphism-square", None),
            (Suite::Coalgebra, "pi0-xi1-idempotent", None),
            (Suite::Coalgebra, "split-retraction", None),
            (Suite::Coalgebra, "eval-curry", None),
        ],
        // 2·5·2·(1·16 + 2·256 + 3·46656) squares; 2¹⁴ tries; 16 functions
        min_cases: &[1_404_840, 16_384, 36, 16],
        limit: Some(Duration::from_secs(30)),
    },
];

fn evaluate(c: &Criterion) -> Result<Duration, String> {
    let start = Instant::now();
    let outcomes: Vec<LawOutcome> = c
        .laws
        .iter()
        .map(|&(suite, law, fuel)| {
            let mut config = CheckConfig {
                seed: 0,
                ..CheckConfig::default()
            };
            if let Some(f) = fuel {
                config.fuel = f;
            }
            run_law(suite, law, &config).unwrap_or_else(|| panic!("no law {suite}/{law}"))
        })
        .collect();
    let elapsed = start.elapsed();
    for (o, &min) in outcomes.iter().zip(c.min_cases) {
        if let Some(ce) = &o.counterexample {
            return Err(format!("{}/{}: {ce}", o.suite, o.law));
        }
        if o.cases < min {
            return Err(format!(
                "{}/{}: {} cases, need {min}",
                o.suite, o.law, o.cases
            ));
        }
    }
    match c.limit {
        Some(limit) if elapsed >= limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        _ => Ok(elapsed),
    }
}

fn determinism() -> Result<Duration, String> {
    let start = Instant::now();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_moncom"))
            .args(["check", "--suite", "all", "--seed", "0"])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "exit {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stdout)
            ));
        }
        Ok(out.stdout)
    };
    let (a, b) = (run()?, run()?);
    if a != b {
        return Err("the two reports differ".into());
    }
    Ok(start.elapsed())
}

#[test]
fn acceptance() {
    let mut failed = 0;
    let mut report = |id: u32, title: &str, r: Result<Duration, String>| {
        let line = match r {
            Ok(t) => format!("PASS {id}: {title} ({t:.2?})"),
            Err(e) => {
                failed += 1;
                format!("FAIL {id}: {title}: {e}")
            }
        };
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
    };
    for c in CRITERIA {
        report(c.id, c.title, evaluate(c));
    }
    report(
        9,
        "two runs of `check --suite all --seed 0` are byte-identical",
        determinism(),
    );
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
