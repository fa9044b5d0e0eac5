//! Property suites for every law the library claims, with a deterministic report.
//!
//! Each law draws from its own generator, seeded from the master seed and the law's
//! name, so a law's samples do not depend on which other laws run.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{self, equivalent_on, par, seq, Computation, Outcome};
use crate::coalgebra::{self, BehaviorTrie, MealyMachine, SplitExponent};
use crate::complexity::{self, Convention, SpaceCounters};
use crate::encode::{decode, encode};
use crate::eval::{
    eval_in, eval_with_cost, partial_eval, universal_eval, universal_eval_computation,
};
use crate::gen;
use crate::kleene::{code_of, kleene_fix, quine};
use crate::process::{
    adaptive_program, evaluator_from_process, is_process_hom, universal_process,
    universal_process_as_process, Process,
};
use crate::prog::Prog;
use crate::registry::Registry;
use crate::turing::{self, library, Halting, MachineState, Tape, HALT};
use crate::value::{Shape, Value};

pub const DEFAULT_SEED: u64 = 0xC0A1_5EED;
pub const DEFAULT_FUEL: u64 = 1_000;

/// Fuel slack allowed between the two sides of the S-m-n equation.
pub const FUEL_TOLERANCE: u64 = 2;

/// The partial evaluator under test.
pub type Specializer = fn(&Prog, Value) -> Prog;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub fuel: u64,
    /// Overrides every sampled law's case count.
    pub samples: Option<usize>,
    pub specializer: Specializer,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: DEFAULT_SEED,
            fuel: DEFAULT_FUEL,
            samples: None,
            specializer: partial_eval,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Category,
    Kleene,
    Process,
    Turing,
    Complexity,
    Coalgebra,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Category,
        Suite::Kleene,
        Suite::Process,
        Suite::Turing,
        Suite::Complexity,
        Suite::Coalgebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Category => "category",
            Suite::Kleene => "kleene",
            Suite::Process => "process",
            Suite::Turing => "turing",
            Suite::Complexity => "complexity",
            Suite::Coalgebra => "coalgebra",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Result of one law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawOutcome {
    pub suite: &'static str,
    pub law: &'static str,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub laws: Vec<LawOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawOutcome> {
        self.laws.iter().filter(|l| !l.passed())
    }

    pub fn get(&self, suite: &str, law: &str) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| l.suite == suite && l.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.laws {
            let tag = if l.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}/{} ({} cases)", l.suite, l.law, l.cases)?;
            if let Some(c) = &l.counterexample {
                writeln!(f, "  counterexample: {c}")?;
            }
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "{} laws, {} passed, {} failed",
            self.laws.len(),
            self.laws.len() - failed,
            failed
        )
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    fuel: u64,
    cases: usize,
    specializer: Specializer,
}

type LawFn = fn(&mut Ctx) -> Result<usize, String>;

struct Law {
    suite: Suite,
    name: &'static str,
    cases: usize,
    run: LawFn,
}

const fn law(suite: Suite, name: &'static str, cases: usize, run: LawFn) -> Law {
    Law {
        suite,
        name,
        cases,
        run,
    }
}

/// 64-bit FNV-1a.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn laws() -> Vec<Law> {
    use Suite::*;
    vec![
        law(Category, "coassociativity", 200, coassociativity),
        law(Category, "counit", 200, counit),
        law(Category, "commutativity", 200, commutativity),
        law(Category, "interchange", 200, interchange),
        law(
            Category,
            "seq-associative-unital",
            200,
            seq_associative_unital,
        ),
        law(Category, "fuel-monotone", 200, fuel_monotone),
        law(Kleene, "s-m-n", 200, smn),
        law(Kleene, "fixed-point", 100, fixed_point),
        law(Kleene, "quine", 100, quine_law),
        law(Kleene, "retract", 100, retract),
        law(Kleene, "retract-rejects", 100, retract_rejects),
        law(Kleene, "surjectivity", 20, surjectivity),
        law(Process, "state-line", 50, state_line),
        law(Process, "output-line", 50, output_line),
        law(Process, "evaluator-from-process", 50, evaluator_round_trip),
        law(Process, "adaptive-homomorphism", 50, adaptive_homomorphism),
        law(Turing, "native-vs-program", 200, native_vs_program),
        law(Turing, "unary-successor", 21, unary_successor),
        law(Turing, "unary-addition", 441, unary_addition),
        law(Turing, "halting-absorption", 200, halting_absorption),
        law(Turing, "shift-correctness", 200, shift_correctness),
        law(Turing, "global-step", 100, global_step_law),
        law(Turing, "single-step-program", 50, single_step_program),
        law(Complexity, "time-equals-trace", 200, time_equals_trace),
        law(Complexity, "space-equals-span", 200, space_equals_span),
        law(Complexity, "space-within-time", 200, space_within_time),
        law(
            Complexity,
            "input-dominates-visited",
            200,
            input_dominates_visited,
        ),
        law(
            Complexity,
            "time-halts-iff-run-halts",
            200,
            time_halts_iff_run_halts,
        ),
        law(Complexity, "counter-soundness", 200, counter_soundness),
        law(Complexity, "program-meters", 200, program_meters),
        law(
            Complexity,
            "halting-on-input-word",
            1,
            halting_on_input_word,
        ),
        law(Coalgebra, "homomorphism-square", 0, homomorphism_square),
        law(Coalgebra, "unique-homomorphism", 0, unique_homomorphism),
        law(Coalgebra, "bisimulation", 200, bisimulation),
        law(Coalgebra, "behavior-trace", 200, behavior_trace),
        law(Coalgebra, "truncation", 200, truncation),
        law(Coalgebra, "pi0-xi1-idempotent", 0, pi0_xi1_idempotent),
        law(Coalgebra, "split-retraction", 100, split_retraction),
        law(Coalgebra, "eval-curry", 0, eval_curry),
    ]
}

/// Names of the laws in `suite`, in report order.
pub fn law_names(suite: Suite) -> Vec<&'static str> {
    laws()
        .into_iter()
        .filter(|l| suite == Suite::All || l.suite == suite)
        .map(|l| l.name)
        .collect()
}

fn run_one(l: &Law, config: &CheckConfig) -> LawOutcome {
    let key = format!("{}/{}", l.suite, l.name);
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a(&key)),
        fuel: config.fuel,
        cases: config.samples.unwrap_or(l.cases),
        specializer: config.specializer,
    };
    let (cases, counterexample) = match (l.run)(&mut ctx) {
        Ok(n) => (n, None),
        Err(c) => (ctx.cases, Some(c)),
    };
    LawOutcome {
        suite: l.suite.name(),
        law: l.name,
        cases,
        counterexample,
    }
}

pub fn run_suite(suite: Suite, config: &CheckConfig) -> Report {
    let laws = laws()
        .into_iter()
        .filter(|l| suite == Suite::All || l.suite == suite);
    Report {
        laws: laws.map(|l| run_one(&l, config)).collect(),
    }
}

/// Runs a single law; `None` if there is no such law.
pub fn run_law(suite: Suite, name: &str, config: &CheckConfig) -> Option<LawOutcome> {
    laws()
        .into_iter()
        .find(|l| l.suite == suite && l.name == name)
        .map(|l| run_one(&l, config))
}

fn registry() -> Registry {
    Registry::standard()
}

fn values(ctx: &mut Ctx, depth: u32) -> Vec<Value> {
    (0..ctx.cases)
        .map(|_| gen::value(&mut ctx.rng, depth))
        .collect()
}

fn same(f: &Computation, g: &Computation, samples: &[Value], fuel: u64) -> Result<usize, String> {
    equivalent_on(f, g, samples, fuel)
        .map(|()| samples.len())
        .map_err(|d| format!("{} vs {}: {d}", f.name(), g.name()))
}

fn composite(steps: &[Computation]) -> Computation {
    category::chain(steps).expect("well-shaped by construction")
}

// ---------------------------------------------------------------- category

fn coassociativity(ctx: &mut Ctx) -> Result<usize, String> {
    let vs = values(ctx, 3);
    let left = composite(&[
        category::copy(),
        par(&category::copy(), &category::id()),
        category::assoc(),
    ]);
    let right = composite(&[category::copy(), par(&category::id(), &category::copy())]);
    same(&left, &right, &vs, ctx.fuel)
}

fn counit(ctx: &mut Ctx) -> Result<usize, String> {
    let vs = values(ctx, 3);
    let left = composite(&[
        category::copy(),
        par(&category::delete(), &category::id()),
        category::unit_left(),
    ]);
    let right = composite(&[
        category::copy(),
        par(&category::id(), &category::delete()),
        category::unit_right(),
    ]);
    same(&left, &category::id(), &vs, ctx.fuel)?;
    same(&right, &category::id(), &vs, ctx.fuel)
}

fn commutativity(ctx: &mut Ctx) -> Result<usize, String> {
    let vs = values(ctx, 3);
    same(
        &composite(&[category::copy(), category::swap()]),
        &category::copy(),
        &vs,
        ctx.fuel,
    )
}

/// Computations on arbitrary values used to instantiate the structural laws.
fn pool(reg: &Registry) -> Vec<Computation> {
    let mut out = vec![
        category::id(),
        category::copy(),
        category::delete(),
        category::swap(),
    ];
    for name in [
        "succ", "pred", "iszero", "eq", "fst-proj", "snd-proj", "int-inc",
    ] {
        out.push(reg.get(name).expect("standard primitive").clone());
    }
    out
}

fn pick(ctx: &mut Ctx, pool: &[Computation]) -> Computation {
    pool.choose(&mut ctx.rng).expect("nonempty").clone()
}

fn interchange(ctx: &mut Ctx) -> Result<usize, String> {
    let pool = pool(&registry());
    let mut done = 0;
    while done < ctx.cases {
        let (f, g, h, k) = (
            pick(ctx, &pool),
            pick(ctx, &pool),
            pick(ctx, &pool),
            pick(ctx, &pool),
        );
        let (Ok(fh), Ok(gk)) = (seq(&f, &h), seq(&g, &k)) else {
            continue;
        };
        let left = seq(&par(&f, &g), &par(&h, &k)).expect("componentwise shapes match");
        let right = par(&fh, &gk);
        let v = Value::pair(gen::value(&mut ctx.rng, 2), gen::value(&mut ctx.rng, 2));
        same(&left, &right, &[v], ctx.fuel)?;
        done += 1;
    }
    Ok(done)
}

fn seq_associative_unital(ctx: &mut Ctx) -> Result<usize, String> {
    let pool = pool(&registry());
    let mut done = 0;
    while done < ctx.cases {
        let (f, g, h) = (pick(ctx, &pool), pick(ctx, &pool), pick(ctx, &pool));
        let (Ok(fg), Ok(gh)) = (seq(&f, &g), seq(&g, &h)) else {
            continue;
        };
        let (Ok(left), Ok(right)) = (seq(&fg, &h), seq(&f, &gh)) else {
            continue;
        };
        let v = gen::value(&mut ctx.rng, 3);
        same(&left, &right, std::slice::from_ref(&v), ctx.fuel)?;
        same(
            &seq(&category::id(), &f).expect("id"),
            &f,
            std::slice::from_ref(&v),
            ctx.fuel,
        )?;
        same(
            &seq(&f, &category::id()).expect("id"),
            &f,
            std::slice::from_ref(&v),
            ctx.fuel,
        )?;
        done += 1;
    }
    Ok(done)
}

fn fuel_monotone(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = registry();
    let eval = universal_eval_computation(&reg);
    let mut pool = pool(&reg);
    pool.push(eval.clone());
    pool.push(category::diverge());
    for _ in 0..ctx.cases {
        let c = pick(ctx, &pool);
        let v = if c.name() == "eval" {
            Value::pair(
                Value::quote(gen::program(&mut ctx.rng, 3)),
                gen::value(&mut ctx.rng, 2),
            )
        } else {
            gen::value(&mut ctx.rng, 3)
        };
        let f1 = ctx.rng.gen_range(0..50);
        let f2 = ctx.rng.gen_range(f1 + 1..=100);
        let (o1, o2) = (c.apply(v.clone(), f1), c.apply(v.clone(), f2));
        if !o1.refined_by(&o2) {
            return Err(format!(
                "{} on {v}: fuel {f1} gives {o1}, fuel {f2} gives {o2}",
                c.name()
            ));
        }
        if let Outcome::Diverged(n) = o1 {
            if n != f1 {
                return Err(format!(
                    "{} on {v}: diverged after {n}, budget {f1}",
                    c.name()
                ));
            }
        }
    }
    Ok(ctx.cases)
}

// ---------------------------------------------------------------- kleene

/// Whether two fuel-bounded runs of the same computation, one of which has a fixed
/// overhead of at most `slack`, are consistent at budget `fuel`.
fn consistent(a: &(Outcome, u64), b: &(Outcome, u64), fuel: u64, slack: u64) -> bool {
    match (&a.0, &b.0) {
        (Outcome::Diverged(_), Outcome::Diverged(_)) => true,
        (Outcome::Diverged(_), _) => b.1 + slack > fuel,
        (_, Outcome::Diverged(_)) => a.1 + slack > fuel,
        (x, y) => x == y && a.1.abs_diff(b.1) <= slack,
    }
}

fn smn(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = registry();
    for _ in 0..ctx.cases {
        let p = gen::program(&mut ctx.rng, 3);
        let (a, b) = (gen::value(&mut ctx.rng, 2), gen::value(&mut ctx.rng, 2));
        let spec = (ctx.specializer)(&p, a.clone());
        let left = eval_with_cost(&reg, &spec, b.clone(), ctx.fuel);
        let right = eval_with_cost(&reg, &p, Value::pair(a.clone(), b.clone()), ctx.fuel);
        if !consistent(&left, &right, ctx.fuel, FUEL_TOLERANCE) {
            return Err(format!(
                "p = {p}, a = {a}, b = {b}: {{[p,a]}}(b) = {} (cost {}), {{p}}(a,b) = {} (cost {})",
                left.0, left.1, right.0, right.1
            ));
        }
    }
    Ok(ctx.cases)
}

/// Clauses spent by `Γ` before it hands over to `g`.
fn kleene_overhead(reg: &Registry) -> u64 {
    let (_, with) = eval_with_cost(reg, &kleene_fix(&Prog::Id), Value::Unit, 1_000);
    let (_, without) = eval_with_cost(reg, &Prog::Id, Value::pair(Value::Unit, Value::Unit), 1_000);
    with - without
}

fn fixed_point(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = registry();
    let overhead = kleene_overhead(&reg);
    for _ in 0..ctx.cases {
        let g = gen::kleene_body(&mut ctx.rng);
        let a = gen::kleene_argument(&mut ctx.rng);
        let gamma = kleene_fix(&g);
        let left = eval_with_cost(&reg, &gamma, a.clone(), ctx.fuel);
        let right = eval_with_cost(&reg, &g, Value::pair(code_of(&gamma), a.clone()), ctx.fuel);
        let ok = match (&left.0, &right.0) {
            (Outcome::Done(_), Outcome::Done(_)) | (Outcome::Stuck(_), Outcome::Stuck(_)) => {
                left.0 == right.0 && left.1 == right.1 + overhead
            }
            _ => consistent(&left, &right, ctx.fuel, overhead),
        };
        if !ok {
            return Err(format!(
                "g = {g}, a = {a}: {{Γ}}(a) = {}, {{g}}(Γ, a) = {}",
                left.0, right.0
            ));
        }
    }
    Ok(ctx.cases)
}

fn quine_law(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = registry();
    let q = quine();
    for _ in 0..ctx.cases {
        let a = gen::value(&mut ctx.rng, 3);
        let out = universal_eval(&reg, &q, a.clone(), ctx.fuel);
        if out != Outcome::Done(code_of(&q)) {
            return Err(format!("on {a}: {out}"));
        }
    }
    // the printed form reads back as the same program
    let text = code_of(&q).to_string();
    match crate::syntax::parse_value(&text) {
        Ok(v) if v == code_of(&q) => Ok(ctx.cases),
        other => Err(format!("quine text {text} reads back as {other:?}")),
    }
}

fn retract(ctx: &mut Ctx) -> Result<usize, String> {
    let mut n = 0;
    for tag in gen::tags() {
        for _ in 0..ctx.cases {
            let v = gen::element(&mut ctx.rng, &tag);
            let code = encode(&tag, &v).map_err(|e| e.to_string())?;
            let back = decode(&tag, &code, ctx.fuel);
            if back != Outcome::Done(v.clone()) {
                return Err(format!("{tag}: decode(encode({v})) = {back}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn retract_rejects(ctx: &mut Ctx) -> Result<usize, String> {
    let tags = gen::tags();
    for _ in 0..ctx.cases {
        let tag = tags.choose(&mut ctx.rng).expect("nonempty").clone();
        let code = gen::out_of_image_code(&mut ctx.rng, &tag);
        let out = decode(&tag, &code, ctx.fuel);
        if !out.is_stuck() {
            return Err(format!("{tag}: decode({code}) = {out}"));
        }
    }
    Ok(ctx.cases)
}

fn surjectivity(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = registry();
    let mut n = 0;
    for c in reg.computations() {
        let p = Prog::prim(c.name());
        let via = Computation::new("program", Shape::Any, Shape::Any, {
            let reg = reg.clone();
            move |v, fuel| eval_in(&reg, &p, v, fuel)
        });
        let samples: Vec<Value> = (0..ctx.cases)
            .map(|_| match ctx.rng.gen_range(0..3) {
                0 => gen::value(&mut ctx.rng, 3),
                1 => Value::pair(gen::nat(&mut ctx.rng), gen::nat(&mut ctx.rng)),
                _ => gen::nat(&mut ctx.rng),
            })
            .collect();
        // the program spends one extra clause, so compare at generous fuel
        for v in &samples {
            let (direct, by_prog) = (
                c.apply(v.clone(), ctx.fuel),
                via.apply(v.clone(), ctx.fuel + 1),
            );
            if !direct.agrees(&by_prog) {
                return Err(format!("{}: on {v}: {direct} vs {by_prog}", c.name()));
            }
        }
        n += samples.len();
    }
    Ok(n)
}

// ---------------------------------------------------------------- process

struct GenProcess {
    registry: Registry,
    process: Process,
    /// `x' = e1(x, a)`, `b = e2(x, a)`
    next: Prog,
    out: Prog,
}

fn nat_step(name: &str, next: &Prog, out: &Prog) -> Computation {
    let step = Prog::pairing(next.clone(), out.clone());
    let base = registry();
    Computation::new(
        name,
        Shape::pair(Shape::Nat, Shape::Any),
        Shape::pair(Shape::Nat, Shape::Nat),
        move |v, fuel| eval_in(&base, &step, v, fuel),
    )
}

fn gen_process(ctx: &mut Ctx, k: usize) -> GenProcess {
    let (next, out) = gen::process_step(&mut ctx.rng);
    let step = nat_step(&format!("gen-process-{k}"), &next, &out);
    let registry = registry().with(step.clone());
    GenProcess {
        registry,
        process: Process::new(step, Shape::Nat),
        next,
        out,
    }
}

fn nat_samples(ctx: &mut Ctx) -> Vec<(Value, Value)> {
    (0..10)
        .map(|_| (gen::nat(&mut ctx.rng), gen::nat(&mut ctx.rng)))
        .collect()
}

/// Runs `check` on every sample of every generated process.
fn for_processes(
    ctx: &mut Ctx,
    mut check: impl FnMut(&GenProcess, &Value, &Value, u64) -> Result<(), String>,
) -> Result<usize, String> {
    let mut n = 0;
    for k in 0..ctx.cases {
        let p = gen_process(ctx, k);
        for (x, a) in nat_samples(ctx) {
            check(&p, &x, &a, ctx.fuel)
                .map_err(|e| format!("step ({}, {}) at x = {x}, a = {a}: {e}", p.next, p.out))?;
            n += 1;
        }
    }
    Ok(n)
}

fn expect_done(o: Outcome) -> Result<Value, String> {
    match o {
        Outcome::Done(v) => Ok(v),
        other => Err(format!("expected a value, got {other}")),
    }
}

/// `(emitted code, output)`, expected then observed.
type StepPair = (Value, Value);

fn process_run(
    p: &GenProcess,
    x: &Value,
    a: &Value,
    fuel: u64,
) -> Result<(StepPair, StepPair), String> {
    let ap = adaptive_program(&p.registry, &p.process).map_err(|e| e.to_string())?;
    let direct = expect_done(p.process.apply(x.clone(), a.clone(), fuel))?;
    let (x2, b) = direct.as_pair().ok_or("step did not return a pair")?;
    let via = expect_done(universal_process(
        &p.registry,
        a.clone(),
        &ap.program(x),
        fuel,
    ))?;
    let (code, b2) = via
        .as_pair()
        .ok_or("universal process did not return a pair")?;
    Ok(((ap.code(x2), b.clone()), (code.clone(), b2.clone())))
}

fn state_line(ctx: &mut Ctx) -> Result<usize, String> {
    for_processes(ctx, |p, x, a, fuel| {
        let ((want, _), (got, _)) = process_run(p, x, a, fuel)?;
        (want == got)
            .then_some(())
            .ok_or_else(|| format!("emitted {got}, expected {want}"))
    })
}

fn output_line(ctx: &mut Ctx) -> Result<usize, String> {
    for_processes(ctx, |p, x, a, fuel| {
        let ((_, want), (_, got)) = process_run(p, x, a, fuel)?;
        (want == got)
            .then_some(())
            .ok_or_else(|| format!("output {got}, expected {want}"))
    })
}

fn evaluator_round_trip(ctx: &mut Ctx) -> Result<usize, String> {
    for_processes(ctx, |p, x, a, fuel| {
        let input = Value::pair(x.clone(), a.clone());
        // processes to computations: {P(x)} with the state dropped is the output line
        let ap = adaptive_program(&p.registry, &p.process).map_err(|e| e.to_string())?;
        let ev = evaluator_from_process(&p.registry);
        let via = ev.apply(Value::pair(ap.code(x), a.clone()), fuel);
        let want = universal_eval(&p.registry, &p.out, input.clone(), fuel);
        if via != want {
            return Err(format!(
                "evaluator_from_process gives {via}, universal_eval gives {want}"
            ));
        }
        // computations to processes: h is recovered from its hat process
        let h = Computation::new("h", Shape::Any, Shape::Any, {
            let (reg, out) = (registry(), p.out.clone());
            move |v, fuel| eval_in(&reg, &out, v, fuel)
        });
        let hat = Process::from_computation("h-hat", &h, Shape::Nat);
        let reg = p.registry.clone().with(hat.step().clone());
        let ap = adaptive_program(&reg, &hat).map_err(|e| e.to_string())?;
        let via = evaluator_from_process(&reg).apply(Value::pair(ap.code(x), a.clone()), fuel);
        if via != want {
            return Err(format!(
                "hat process gives {via}, universal_eval gives {want}"
            ));
        }
        Ok(())
    })
}

fn adaptive_homomorphism(ctx: &mut Ctx) -> Result<usize, String> {
    let mut n = 0;
    for k in 0..ctx.cases {
        let p = gen_process(ctx, k);
        let ap = adaptive_program(&p.registry, &p.process).map_err(|e| e.to_string())?;
        let up = universal_process_as_process(&p.registry);
        let samples = nat_samples(ctx);
        if !is_process_hom(&ap.as_computation(), &p.process, &up, &samples, ctx.fuel) {
            return Err(format!(
                "adaptive program of ({}, {}) is not a process homomorphism",
                p.next, p.out
            ));
        }
        let states: Vec<Value> = samples.iter().map(|(x, _)| x.clone()).collect();
        if !category::is_map(&ap.as_computation(), &states, ctx.fuel) {
            return Err(format!(
                "adaptive program of ({}, {}) is not a map",
                p.next, p.out
            ));
        }
        n += samples.len();
    }
    Ok(n)
}

// ---------------------------------------------------------------- turing

fn machines(ctx: &mut Ctx) -> Vec<(turing::TuringProcess, Tape)> {
    (0..ctx.cases)
        .map(|_| {
            let tm = gen::machine(&mut ctx.rng, 4, 3);
            let w = gen::tape(&mut ctx.rng, &tm, 6);
            (tm, w)
        })
        .collect()
}

fn describe(tm: &turing::TuringProcess, w: &Tape) -> String {
    format!(
        "machine [{}] on {w}",
        turing::format::print_machine(tm)
            .trim_end()
            .replace('\n', "; ")
    )
}

fn native_vs_program(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let native = turing::run(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let program =
            turing::run_via_program(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        if native != program {
            return Err(format!(
                "{}: native {native:?}, program {program:?}",
                describe(&tm, &w)
            ));
        }
    }
    Ok(ctx.cases)
}

/// `Some(n)` when the tape holds exactly the block `1ⁿ` and nothing else.
fn unary_value(w: &Tape) -> Option<usize> {
    let cells: Vec<(i64, char)> = w.cells().collect();
    let contiguous = cells.windows(2).all(|p| p[1].0 == p[0].0 + 1);
    (contiguous && cells.iter().all(|&(_, c)| c == '1')).then_some(cells.len())
}

fn unary_successor(_: &mut Ctx) -> Result<usize, String> {
    let tm = library::append_one();
    for a in 0..=20 {
        let w = Tape::from_literal(&"1".repeat(a));
        let out = turing::run(&tm, "q0", &w, 1_000).map_err(|e| e.to_string())?;
        match out.halted().and_then(unary_value) {
            Some(n) if n == a + 1 => {}
            _ => return Err(format!("successor of {a}: {out:?}")),
        }
    }
    Ok(21)
}

fn unary_addition(_: &mut Ctx) -> Result<usize, String> {
    let tm = library::unary_add();
    for a in 0..=20 {
        for b in 0..=20 {
            let w = Tape::from_literal(&format!("{}0{}", "1".repeat(a), "1".repeat(b)));
            let out = turing::run(&tm, "scan", &w, 1_000).map_err(|e| e.to_string())?;
            match out.halted().and_then(unary_value) {
                Some(n) if n == a + b => {}
                _ => return Err(format!("{a} + {b}: {out:?}")),
            }
        }
    }
    Ok(441)
}

fn halting_absorption(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let (q, w2) = tm.step(HALT, &w).map_err(|e| e.to_string())?;
        if q != HALT || w2 != w {
            return Err(format!(
                "{}: step at HALT moved to ({q}, {w2})",
                describe(&tm, &w)
            ));
        }
        let ms = MachineState::new(Arc::new(tm.clone()), HALT).map_err(|e| e.to_string())?;
        let (mut cur, mut tape) = (ms.clone(), w.clone());
        for _ in 0..5 {
            (cur, tape) = turing::global_step(&cur, &tape).map_err(|e| e.to_string())?;
        }
        if cur != ms || tape != w {
            return Err(format!(
                "{}: iterating at HALT changed the configuration",
                describe(&tm, &w)
            ));
        }
    }
    Ok(ctx.cases)
}

fn shift_correctness(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let q = tm.start().to_string();
        let (_, written, mv) = tm.delta(&q, w.read()).map_err(|e| e.to_string())?;
        let (_, w2) = tm.step(&q, &w).map_err(|e| e.to_string())?;
        let d = mv.delta();
        // w̃: cell 0 overwritten, before re-indexing
        let tilde = |z: i64| if z == 0 { written } else { w.get(z) };
        let mut allowed: Vec<i64> = w.support();
        allowed.push(0);
        for z in w2.support() {
            if !allowed.contains(&(z + d)) {
                return Err(format!(
                    "{}: cell {z} of the result comes from outside the support",
                    describe(&tm, &w)
                ));
            }
        }
        for z in -8..=16 {
            if w2.get(z) != tilde(z + d) {
                return Err(format!(
                    "{}: result cell {z} is {}, expected {}",
                    describe(&tm, &w),
                    w2.get(z),
                    tilde(z + d)
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn global_step_law(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let tm = Arc::new(tm);
        let (mut ms, mut tape) = (MachineState::initial(tm.clone()), w.clone());
        for _ in 0..100 {
            let (q, expect) = tm.step(ms.state(), &tape).map_err(|e| e.to_string())?;
            let (next, t2) = turing::global_step(&ms, &tape).map_err(|e| e.to_string())?;
            if !Arc::ptr_eq(next.process(), &tm) || next.state() != q || t2 != expect {
                return Err(format!(
                    "{}: global step disagrees with step",
                    describe(&tm, &w)
                ));
            }
            (ms, tape) = (next, t2);
        }
    }
    Ok(ctx.cases)
}

fn single_step_program(ctx: &mut Ctx) -> Result<usize, String> {
    let reg = turing::registry();
    for (tm, w) in machines(ctx) {
        let names: Vec<String> = tm.states().map(str::to_string).collect();
        let q = names.choose(&mut ctx.rng).expect("nonempty");
        let p = turing::adaptive_tm_program(&tm, q).map_err(|e| e.to_string())?;
        let (q2, w2) = tm.step(q, &w).map_err(|e| e.to_string())?;
        let out = expect_done(universal_process(
            reg,
            turing::tape_to_value(&w),
            &p,
            10_000,
        ))?;
        let (code, tape) = out.as_pair().ok_or("not a pair")?;
        let want = Value::quote(turing::adaptive_tm_program(&tm, &q2).map_err(|e| e.to_string())?);
        if code != &want || turing::tape_from_value(tape).as_ref() != Some(&w2) {
            return Err(format!(
                "{} at {q}: got ({code} . {tape})",
                describe(&tm, &w)
            ));
        }
        let back = decode(
            &crate::encode::Tag::Prog,
            &encode(&crate::encode::Tag::Prog, code).map_err(|e| e.to_string())?,
            1_000,
        );
        if back.done() != Some(code) {
            return Err(format!(
                "{} at {q}: emitted program does not survive the retract",
                describe(&tm, &w)
            ));
        }
    }
    Ok(ctx.cases)
}

// ---------------------------------------------------------------- complexity

fn halted_time(h: &Halting<u64>) -> Option<u64> {
    h.halted().copied()
}

fn time_equals_trace(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let t = complexity::time(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let trace =
            complexity::meter_trace(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let ok = match t {
            Halting::Halted(n) => trace.halted && trace.entries.len() as u64 == n,
            Halting::Diverged(_) => !trace.halted && trace.entries.len() as u64 == ctx.fuel,
        };
        if !ok {
            return Err(format!(
                "{}: time {t:?}, trace of {} entries",
                describe(&tm, &w),
                trace.entries.len()
            ));
        }
    }
    Ok(ctx.cases)
}

fn space_equals_span(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let s = complexity::space(&tm, tm.start(), &w, ctx.fuel, Convention::Visited)
            .map_err(|e| e.to_string())?;
        let trace =
            complexity::meter_trace(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        if let Halting::Halted(n) = &s {
            if *n != BigInt::from(trace.span()) {
                return Err(format!(
                    "{}: space {n}, trace span {}",
                    describe(&tm, &w),
                    trace.span()
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn space_within_time(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let t = complexity::time(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let s = complexity::space(&tm, tm.start(), &w, ctx.fuel, Convention::Visited)
            .map_err(|e| e.to_string())?;
        if let (Some(t), Some(s)) = (halted_time(&t), s.halted()) {
            if *s > BigInt::from(t) {
                return Err(format!("{}: space {s} exceeds time {t}", describe(&tm, &w)));
            }
        }
    }
    Ok(ctx.cases)
}

fn input_dominates_visited(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let v = complexity::space(&tm, tm.start(), &w, ctx.fuel, Convention::Visited)
            .map_err(|e| e.to_string())?;
        let i = complexity::space(&tm, tm.start(), &w, ctx.fuel, Convention::Input)
            .map_err(|e| e.to_string())?;
        match (v.halted(), i.halted()) {
            (Some(v), Some(i)) if i >= v => {}
            (None, None) => {}
            _ => return Err(format!("{}: visited {v:?}, input {i:?}", describe(&tm, &w))),
        }
    }
    Ok(ctx.cases)
}

fn time_halts_iff_run_halts(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let r = turing::run(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let t = complexity::time(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        if r.is_halted() != t.is_halted() {
            return Err(format!("{}: run {r:?}, time {t:?}", describe(&tm, &w)));
        }
        // the threshold is the same: one transition less never suffices
        if let Halting::Halted(n) = t {
            if n > 0
                && turing::run(&tm, tm.start(), &w, n - 1)
                    .map_err(|e| e.to_string())?
                    .is_halted()
            {
                return Err(format!(
                    "{}: halts with fewer than {n} transitions",
                    describe(&tm, &w)
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn counter_soundness(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let trace =
            complexity::meter_trace(&tm, tm.start(), &w, ctx.fuel).map_err(|e| e.to_string())?;
        let mut c = SpaceCounters::<i64>::origin();
        let (mut lo, mut hi) = (0i64, 0i64);
        let offsets = trace
            .entries
            .iter()
            .skip(1)
            .map(|e| e.offset)
            .chain([trace.final_offset]);
        for (e, next) in trace.entries.iter().zip(offsets) {
            c.update(e.dir);
            lo = lo.min(next);
            hi = hi.max(next);
            if c.m != next || c.ell != lo || c.r != hi {
                return Err(format!(
                    "{}: counters {c:?} after offset {next}",
                    describe(&tm, &w)
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn program_meters(ctx: &mut Ctx) -> Result<usize, String> {
    for (tm, w) in machines(ctx) {
        let q = tm.start();
        let t = complexity::time(&tm, q, &w, ctx.fuel).map_err(|e| e.to_string())?;
        let tp = complexity::time_via_program(&tm, q, &w, ctx.fuel).map_err(|e| e.to_string())?;
        if t != tp {
            return Err(format!(
                "{}: time native {t:?}, program {tp:?}",
                describe(&tm, &w)
            ));
        }
        for conv in [Convention::Visited, Convention::Input] {
            let s = complexity::space(&tm, q, &w, ctx.fuel, conv).map_err(|e| e.to_string())?;
            let sp = complexity::space_via_program(&tm, q, &w, ctx.fuel, conv)
                .map_err(|e| e.to_string())?;
            if s != sp {
                return Err(format!(
                    "{}: space ({conv}) native {s:?}, program {sp:?}",
                    describe(&tm, &w)
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn halting_on_input_word(ctx: &mut Ctx) -> Result<usize, String> {
    let tm = library::halt_immediately();
    let w = Tape::from_literal("11");
    for (conv, want) in [(Convention::Input, 1), (Convention::Visited, 0)] {
        for s in [
            complexity::space(&tm, HALT, &w, ctx.fuel, conv),
            complexity::space_via_program(&tm, HALT, &w, ctx.fuel, conv),
        ] {
            let s = s.map_err(|e| e.to_string())?;
            if s != Halting::Halted(BigInt::from(want)) {
                return Err(format!(
                    "halting machine on 11, convention {conv}: {s:?}, expected {want}"
                ));
            }
        }
    }
    Ok(1)
}

// ---------------------------------------------------------------- coalgebra

fn homomorphism_square(_: &mut Ctx) -> Result<usize, String> {
    let mut n = 0;
    for states in 1..=3 {
        for code in 0..MealyMachine::count(states, 2, 2) {
            let m = MealyMachine::from_index(states, 2, 2, code);
            for x in 0..states {
                let deep = m.unfold(x, 5);
                for depth in 1..=5 {
                    let t = deep.truncate(depth);
                    for a in 0..2 {
                        let (y, b) = m.step(x, a);
                        if t.output(a) != b || t.child(a) != m.unfold(y, depth - 1) {
                            return Err(format!("{m}: square fails at ({x}, {a}), depth {depth}"));
                        }
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

fn unique_homomorphism(ctx: &mut Ctx) -> Result<usize, String> {
    let mut n = 0;
    let mut check = |m: &MealyMachine, depth: usize| -> Result<(), String> {
        let count = coalgebra::count_trie_homomorphisms(m, depth);
        let h: Vec<BehaviorTrie> = (0..m.states().len()).map(|x| m.unfold(x, depth)).collect();
        if count != 1 || !coalgebra::is_trie_homomorphism(m, &h) {
            return Err(format!(
                "{m}: {count} homomorphisms into depth-{depth} tries"
            ));
        }
        n += 1;
        Ok(())
    };
    for code in 0..MealyMachine::count(1, 2, 2) {
        check(&MealyMachine::from_index(1, 2, 2, code), 3)?;
    }
    for code in 0..MealyMachine::count(2, 2, 2) {
        check(&MealyMachine::from_index(2, 2, 2, code), 2)?;
    }
    for states in 3..=4 {
        for _ in 0..25 {
            let code = ctx.rng.gen_range(0..MealyMachine::count(states, 2, 2));
            check(&MealyMachine::from_index(states, 2, 2, code), 1)?;
        }
    }
    Ok(n)
}

fn random_mealy(ctx: &mut Ctx) -> MealyMachine {
    let states = ctx.rng.gen_range(1..=4);
    let (a, b) = (ctx.rng.gen_range(1..=3), ctx.rng.gen_range(1..=3));
    let code = ctx.rng.gen_range(0..MealyMachine::count(states, a, b));
    MealyMachine::from_index(states, a, b, code)
}

fn bisimulation(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..ctx.cases {
        let m = random_mealy(ctx);
        let n = m.states().len();
        let (x, y) = (ctx.rng.gen_range(0..n), ctx.rng.gen_range(0..n));
        let bisim = m.bisimilar(x, y, 6);
        for d in 1..=6 {
            let equal = m.unfold(x, d) == m.unfold(y, d);
            if bisim && !equal || d == 6 && !bisim && equal {
                return Err(format!(
                    "{m}: states {x}, {y} bisimilar {bisim}, tries equal {equal} at depth {d}"
                ));
            }
        }
    }
    Ok(ctx.cases)
}

fn random_word(ctx: &mut Ctx, arity: usize, max: usize) -> Vec<usize> {
    let len = ctx.rng.gen_range(1..=max);
    (0..len).map(|_| ctx.rng.gen_range(0..arity)).collect()
}

fn behavior_trace(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..ctx.cases {
        let m = random_mealy(ctx);
        let x = ctx.rng.gen_range(0..m.states().len());
        let word = random_word(ctx, m.inputs().len(), 8);
        let b = m.behavior(x, &word).map_err(|e| e.to_string())?;
        let trie = m.unfold(x, word.len());
        if Some(&b) != m.output_trace(x, &word).last() || trie.value(&word) != Some(b) {
            return Err(format!("{m}: behaviour of {word:?} from {x}"));
        }
    }
    Ok(ctx.cases)
}

fn truncation(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..ctx.cases {
        let m = random_mealy(ctx);
        let x = ctx.rng.gen_range(0..m.states().len());
        let d = ctx.rng.gen_range(2..=6);
        if m.unfold(x, d).truncate(d - 1) != m.unfold(x, d - 1) {
            return Err(format!("{m}: truncating depth {d} at state {x}"));
        }
    }
    Ok(ctx.cases)
}

fn pi0_xi1_idempotent(ctx: &mut Ctx) -> Result<usize, String> {
    // 2^14 tries, below the exhaustive limit
    if !coalgebra::ana_pi0xi1_idempotent(2, 2, 3, &mut ctx.rng, 0) {
        return Err("A = B = {0,1}, depth 3".into());
    }
    Ok(1 << coalgebra::word_count(2, 3))
}

/// Every trie at depths 1 and 2 (at most 3¹² of them), sampled tries at depths 3 and 4.
fn split_retraction(ctx: &mut Ctx) -> Result<usize, String> {
    let mut n = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            for d in 1..=4 {
                let split = SplitExponent::new(a, b, d, &mut ctx.rng, ctx.cases)
                    .map_err(|e| e.to_string())?;
                let checked = if d <= 2 {
                    n += b.pow(coalgebra::word_count(a, d) as u32);
                    split.check_retraction_exhaustive()
                } else {
                    n += ctx.cases;
                    split.check_retraction(&mut ctx.rng, ctx.cases)
                };
                checked.map_err(|e| format!("|A| = {a}, |B| = {b}, depth {d}: {e}"))?;
            }
        }
    }
    Ok(n)
}

fn eval_curry(ctx: &mut Ctx) -> Result<usize, String> {
    let split = SplitExponent::new(2, 2, 3, &mut ctx.rng, 0).map_err(|e| e.to_string())?;
    for code in 0..16u32 {
        let f = |x: usize, a: usize| ((code >> (2 * x + a)) & 1) as usize;
        let lam = split.curry(2, f);
        for (x, g) in lam.iter().enumerate() {
            for a in 0..2 {
                if split.eval(g, a) != f(x, a) {
                    return Err(format!("function #{code} at ({x}, {a})"));
                }
            }
        }
    }
    Ok(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_list_laws() {
        assert_eq!("kleene".parse::<Suite>(), Ok(Suite::Kleene));
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(law_names(Suite::All).len(), laws().len());
        assert!(law_names(Suite::Kleene).contains(&"s-m-n"));
    }

    #[test]
    fn seeds_are_per_law() {
        assert_ne!(fnv1a("kleene/s-m-n"), fnv1a("kleene/quine"));
    }

    #[test]
    fn a_broken_specializer_is_caught() {
        fn forgetful(p: &Prog, _: Value) -> Prog {
            partial_eval(p, Value::Unit)
        }
        let config = CheckConfig {
            specializer: forgetful,
            ..CheckConfig::default()
        };
        let out = run_law(Suite::Kleene, "s-m-n", &config).unwrap();
        assert!(!out.passed());
        assert!(out.counterexample.unwrap().contains("[p,a]"));
    }

    #[test]
    fn report_format() {
        let r = Report {
            laws: vec![
                LawOutcome {
                    suite: "x",
                    law: "a",
                    cases: 3,
                    counterexample: None,
                },
                LawOutcome {
                    suite: "x",
                    law: "b",
                    cases: 1,
                    counterexample: Some("here".into()),
                },
            ],
        };
        assert_eq!(r.to_string(), "PASS x/a (3 cases)\nFAIL x/b (1 cases)\n  counterexample: here\n2 laws, 1 passed, 1 failed\n");
        assert!(!r.passed());
    }
}
