//! Turing processes evaluated inside the program calculus.
//!
//! `P̃(ρ, q)` is the adaptive program of the global step; `P̄(ρ, q)` is the closure of a
//! Kleene fixed program that loops `tm-step` until the machine state is `HALT`.
//!
//! Fuel of the two routes is measured in different units (machine transitions versus
//! evaluator clauses). Every loop body used here costs the same number of evaluator
//! clauses per iteration regardless of the data, so the evaluator cost of an `n`-step
//! run is exactly `head + n · per_step`; [`LoopCost`] measures these two constants and
//! translates a transition budget into an evaluator budget.

use std::sync::{Arc, OnceLock};

use crate::category::Outcome;
use crate::eval::{eval_with_cost, partial_eval, universal_eval};
use crate::kleene::kleene_fix;
use crate::process::{adaptive_program, Process};
use crate::prog::Prog;
use crate::registry::Registry;
use crate::value::{Shape, Value};

use super::library::{append_one, halt_immediately};
use super::{
    machine_state_to_value, tape_from_value, tape_to_value, Halting, MachineError, MachineState,
    Tape, TuringProcess, HALT,
};

pub(crate) fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(Registry::standard)
}

/// The global step as a process: state `(machine . q)`, input and output a tape.
pub fn tm_process() -> Process {
    let step = registry()
        .get("tm-step")
        .expect("standard primitive")
        .clone();
    Process::new(step, Shape::Any)
}

pub(crate) fn machine_state(tm: &TuringProcess, q: &str) -> Result<Value, MachineError> {
    Ok(machine_state_to_value(&MachineState::new(
        Arc::new(tm.clone()),
        q,
    )?))
}

/// `P̃(ρ, q)`: one transition per run, re-emitting `P̃(ρ, q')` with the new tape.
pub fn adaptive_tm_program(tm: &TuringProcess, q: &str) -> Result<Prog, MachineError> {
    let ap = adaptive_program(registry(), &tm_process()).expect("tm-step is registered");
    Ok(ap.program(&machine_state(tm, q)?))
}

/// `g(self, (ms . w)) = if halted then w else {self}(tm-step(ms . w))`
fn run_body() -> Prog {
    Prog::if_then_else(
        Prog::seq(Prog::Snd, Prog::prim("tm-halted")),
        Prog::path(&[1, 1]),
        Prog::call(Prog::Fst, Prog::seq(Prog::Snd, Prog::prim("tm-step"))),
    )
}

/// `P̄(ρ, q)` as a program on tape values.
pub fn run_program(tm: &TuringProcess, q: &str) -> Result<Prog, MachineError> {
    Ok(partial_eval(
        &kleene_fix(&run_body()),
        machine_state(tm, q)?,
    ))
}

/// Evaluator cost `head + n · per_step` of a loop program making `n` transitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopCost {
    pub head: u64,
    pub per_step: u64,
}

impl LoopCost {
    /// Measures the constants on runs of 0, 1 and 2 transitions; panics if the
    /// per-iteration cost is not uniform.
    pub fn calibrate(build: &dyn Fn(&TuringProcess, &str, &Tape) -> (Prog, Value)) -> LoopCost {
        let cases = [
            (halt_immediately(), HALT, Tape::blank()),
            (append_one(), "q0", Tape::blank()),
            (append_one(), "q0", Tape::from_literal("1")),
        ];
        let costs: Vec<u64> = cases
            .iter()
            .map(|(tm, q, w)| {
                let (p, input) = build(tm, q, w);
                let (out, cost) = eval_with_cost(registry(), &p, input, 1_000_000);
                assert!(out.is_done(), "calibration run did not finish: {out}");
                cost
            })
            .collect();
        let per_step = costs[1] - costs[0];
        assert_eq!(
            costs[2] - costs[1],
            per_step,
            "loop iteration cost is not uniform"
        );
        LoopCost {
            head: costs[0],
            per_step,
        }
    }

    /// Evaluator fuel allowing exactly `steps` transitions.
    pub fn budget(&self, steps: u64) -> u64 {
        self.head
            .saturating_add(steps.saturating_mul(self.per_step))
    }

    /// Transitions performed by a run that consumed `cost` evaluator fuel.
    pub fn steps(&self, cost: u64) -> u64 {
        (cost - self.head) / self.per_step
    }
}

/// Runs a loop program under the evaluator budget for `steps` transitions.
pub(crate) fn run_metered(
    p: &Prog,
    input: Value,
    steps: u64,
    cost: LoopCost,
) -> Result<Halting<Value>, MachineError> {
    match universal_eval(registry(), p, input, cost.budget(steps)) {
        Outcome::Done(v) => Ok(Halting::Halted(v)),
        Outcome::Diverged(_) => Ok(Halting::Diverged(steps)),
        Outcome::Stuck(r) => Err(MachineError::Stuck(r)),
    }
}

fn run_cost() -> LoopCost {
    static COST: OnceLock<LoopCost> = OnceLock::new();
    *COST.get_or_init(|| {
        LoopCost::calibrate(&|tm, q, w| {
            (
                run_program(tm, q).expect("calibration machine"),
                tape_to_value(w),
            )
        })
    })
}

/// `ō(q, w)` computed as `{P̄(ρ, q)}(w)`, with `fuel` counted in transitions.
pub fn run_via_program(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
) -> Result<Halting<Tape>, MachineError> {
    let p = run_program(tm, q)?;
    let out = run_metered(&p, tape_to_value(w), fuel, run_cost())?;
    Ok(out.map(|v| tape_from_value(&v).expect("tm-step keeps tapes canonical")))
}
