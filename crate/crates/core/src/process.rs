//! AB-processes `X ⊗ A → X ⊗ B`, the universal process over the program type, and
//! adaptive programs.
//!
//! The universal process is the universal evaluator read at output type `ℙ ⊗ B`:
//! a program consumes an input and emits its successor program together with an output.
//! Every process `p` with a registered step gets an adaptive program
//! `P(x) = [P̂, x]`, where `P̂` is Kleene's fixed program of
//! `p̂(P, x, a) = ([P, x'], b)` with `(x', b) = p(x, a)`.

use thiserror::Error;

use crate::category::{self, equivalent_on, reason, seq, Computation, Fault, Outcome};
use crate::eval::{eval_in, partial_eval, universal_eval};
use crate::kleene::kleene_fix;
use crate::prog::Prog;
use crate::registry::Registry;
use crate::value::{Shape, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcessError {
    #[error("process step '{0}' is not registered as a primitive")]
    NotRegistered(String),
}

/// A process given by its step computation `(x . a) ↦ (x' . b)`.
#[derive(Clone, Debug)]
pub struct Process {
    step: Computation,
    state_shape: Shape,
}

impl Process {
    pub fn new(step: Computation, state_shape: Shape) -> Self {
        Process { step, state_shape }
    }

    pub fn name(&self) -> &str {
        self.step.name()
    }

    pub fn step(&self) -> &Computation {
        &self.step
    }

    pub fn state_shape(&self) -> &Shape {
        &self.state_shape
    }

    pub fn apply(&self, state: Value, input: Value, fuel: u64) -> Outcome {
        self.step.apply(Value::pair(state, input), fuel)
    }

    /// `counter(n, _) = (n + 1, n)`
    pub fn counter() -> Self {
        let step = Computation::primitive(
            "counter",
            Shape::pair(Shape::Nat, Shape::Any),
            Shape::pair(Shape::Nat, Shape::Nat),
            |v| {
                let n = v
                    .as_pair()
                    .and_then(|(n, _)| n.as_nat())
                    .expect("shape checked");
                Ok(Value::pair(Value::Nat(n + 1u32), Value::Nat(n.clone())))
            },
        );
        Process::new(step, Shape::Nat)
    }

    /// `echo(x, a) = (x, a)`
    pub fn echo() -> Self {
        let step = Computation::primitive(
            "echo",
            Shape::pair(Shape::Any, Shape::Any),
            Shape::pair(Shape::Any, Shape::Any),
            |v| Ok(v.clone()),
        );
        Process::new(step, Shape::Any)
    }

    /// `ĥ = (Δ ⊗ A) ; (X ⊗ h)`: the process that keeps its state and outputs `h(x, a)`.
    pub fn from_computation(name: &str, h: &Computation, state_shape: Shape) -> Self {
        let h = h.clone();
        let step = Computation::new(
            name,
            Shape::pair(state_shape.clone(), Shape::Any),
            Shape::pair(state_shape.clone(), Shape::Any),
            move |v, fuel| {
                let x = v
                    .as_pair()
                    .ok_or_else(|| Fault::stuck(reason::SHAPE))?
                    .0
                    .clone();
                let b = h.run(v, fuel)?;
                Ok(Value::pair(x, b))
            },
        );
        Process::new(step, state_shape)
    }
}

/// `p̂ = (ℙ ⊗ p) ; ([ ] ⊗ B)` on inputs `(#p<P> . (x . a))`.
pub fn lifted_step_program(step_name: &str) -> Prog {
    let run_step = Prog::pairing(Prog::Fst, Prog::seq(Prog::Snd, Prog::prim(step_name)));
    let respecialize = Prog::seq(
        Prog::pairing(Prog::Fst, Prog::path(&[1, 0])),
        Prog::prim("pe"),
    );
    Prog::seq(run_step, Prog::pairing(respecialize, Prog::path(&[1, 1])))
}

/// An X-adaptive program: a total map from states to programs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptiveProgram {
    fixed: Prog,
}

impl AdaptiveProgram {
    /// `P(x) = [P̂, x]`
    pub fn program(&self, state: &Value) -> Prog {
        partial_eval(&self.fixed, state.clone())
    }

    pub fn code(&self, state: &Value) -> Value {
        Value::quote(self.program(state))
    }

    /// `P̂`, the Kleene fixed program behind this family.
    pub fn fixed_program(&self) -> &Prog {
        &self.fixed
    }

    /// `x ↦ #p<P(x)>` as a computation.
    pub fn as_computation(&self) -> Computation {
        let this = self.clone();
        Computation::primitive("adaptive", Shape::Any, Shape::Quote, move |x| {
            Ok(this.code(x))
        })
    }
}

pub fn adaptive_program(registry: &Registry, p: &Process) -> Result<AdaptiveProgram, ProcessError> {
    if !registry.contains(p.name()) {
        return Err(ProcessError::NotRegistered(p.name().to_string()));
    }
    Ok(AdaptiveProgram {
        fixed: kleene_fix(&lifted_step_program(p.name())),
    })
}

/// `{|s|}(a)`: runs `s` and requires a `(#p<next> . output)` result.
pub fn universal_process(registry: &Registry, input: Value, s: &Prog, fuel: u64) -> Outcome {
    match universal_eval(registry, s, input, fuel) {
        Outcome::Done(v) if is_process_result(&v) => Outcome::Done(v),
        Outcome::Done(_) => Outcome::Stuck(reason::NOT_A_PROCESS_PROGRAM.into()),
        other => other,
    }
}

fn is_process_result(v: &Value) -> bool {
    v.as_pair().is_some_and(|(p, _)| p.as_quote().is_some())
}

/// The universal process as a [`Process`] with state space the program type.
pub fn universal_process_as_process(registry: &Registry) -> Process {
    let reg = registry.clone();
    let step = Computation::new(
        "universal-process",
        Shape::pair(Shape::Quote, Shape::Any),
        Shape::pair(Shape::Quote, Shape::Any),
        move |v, fuel| {
            fuel.tick()?;
            let (s, a) = v.as_pair().expect("shape checked");
            let s = s.as_quote().expect("shape checked");
            let out = eval_in(&reg, s, a.clone(), fuel)?;
            if is_process_result(&out) {
                Ok(out)
            } else {
                Err(Fault::stuck(reason::NOT_A_PROCESS_PROGRAM))
            }
        },
    );
    Process::new(step, Shape::Quote)
}

/// `{ } = {| |} ; (⊤ ⊗ B)` on inputs `(#p<s> . a)`.
pub fn evaluator_from_process(registry: &Registry) -> Computation {
    let up = universal_process_as_process(registry);
    let drop_state = category::par(&category::delete(), &category::id());
    seq(up.step(), &drop_state)
        .and_then(|c| seq(&c, &category::unit_left()))
        .expect("shapes line up")
        .renamed("evaluator-from-process")
}

/// Sampled check that `f : X → Y` commutes `(f ⊗ A) ; r = p ; (f ⊗ B)`.
/// Both sides must be `Done` on every `(x . a)` sample.
pub fn is_process_hom(
    f: &Computation,
    p: &Process,
    r: &Process,
    samples: &[(Value, Value)],
    fuel: u64,
) -> bool {
    let on_state = category::par(f, &category::id());
    let (Ok(lhs), Ok(rhs)) = (seq(&on_state, r.step()), seq(p.step(), &on_state)) else {
        return false;
    };
    let inputs: Vec<Value> = samples
        .iter()
        .map(|(x, a)| Value::pair(x.clone(), a.clone()))
        .collect();
    inputs.iter().all(|v| lhs.apply(v.clone(), fuel).is_done())
        && equivalent_on(&lhs, &rhs, &inputs, fuel).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> Value {
        Value::nat(k)
    }

    #[test]
    fn constant_process_is_a_fixed_point() {
        let r = Registry::standard();
        let s = kleene_fix(&Prog::pairing(Prog::Fst, Prog::lit(n(0))));
        let out = universal_process(&r, Value::Unit, &s, 100);
        assert_eq!(out, Outcome::Done(Value::pair(Value::quote(s), n(0))));
    }

    #[test]
    fn counter_adaptive_program_steps() {
        let r = Registry::standard();
        let ap = adaptive_program(&r, &Process::counter()).unwrap();
        let out = universal_process(&r, Value::Unit, &ap.program(&n(5)), 1000);
        assert_eq!(out, Outcome::Done(Value::pair(ap.code(&n(6)), n(5))));
        assert_eq!(
            universal_process(&r, Value::Unit, &ap.program(&n(5)), 0),
            Outcome::Diverged(0)
        );
    }

    #[test]
    fn three_chained_steps_emit_zero_one_two() {
        let r = Registry::standard();
        let ap = adaptive_program(&r, &Process::counter()).unwrap();
        let mut prog = ap.program(&n(0));
        let mut outputs = Vec::new();
        for _ in 0..3 {
            let v = universal_process(&r, Value::Unit, &prog, 1000)
                .into_done()
                .unwrap();
            let (next, b) = v.as_pair().unwrap();
            outputs.push(b.clone());
            prog = next.as_quote().unwrap().clone();
        }
        assert_eq!(outputs, vec![n(0), n(1), n(2)]);
    }

    #[test]
    fn echo_and_evaluator_from_process() {
        let r = Registry::standard();
        let ap = adaptive_program(&r, &Process::echo()).unwrap();
        let ev = evaluator_from_process(&r);
        for a in [n(3), Value::sym("z"), Value::Unit] {
            let out = universal_process(&r, a.clone(), &ap.program(&Value::Unit), 1000);
            assert_eq!(out.done().unwrap().as_pair().unwrap().1, &a);
            assert_eq!(
                ev.apply(Value::pair(ap.code(&Value::Unit), a.clone()), 1000),
                Outcome::Done(a)
            );
        }
        let counter = adaptive_program(&r, &Process::counter()).unwrap();
        assert_eq!(
            ev.apply(Value::pair(counter.code(&n(5)), Value::Unit), 1000),
            Outcome::Done(n(5))
        );
        let looping = Value::quote(kleene_fix(&Prog::Apply));
        assert!(ev
            .apply(Value::pair(looping, Value::Unit), 1000)
            .is_diverged());
    }

    #[test]
    fn universal_process_rejects_non_process_programs() {
        let r = Registry::standard();
        assert_eq!(
            universal_process(&r, n(1), &Prog::prim("succ"), 10),
            Outcome::Stuck("not-a-process-program".into())
        );
    }

    #[test]
    fn unregistered_processes_have_no_adaptive_program() {
        let p = Process::new(
            Computation::primitive("ghost", Shape::Any, Shape::Any, |v| Ok(v.clone())),
            Shape::Any,
        );
        assert_eq!(
            adaptive_program(&Registry::standard(), &p),
            Err(ProcessError::NotRegistered("ghost".into()))
        );
    }

    #[test]
    fn homomorphism_examples() {
        let r = Registry::standard();
        let counter = Process::counter();
        let samples: Vec<(Value, Value)> = (0..10).map(|k| (n(k), Value::Unit)).collect();
        assert!(is_process_hom(
            &category::id(),
            &counter,
            &counter,
            &samples,
            100
        ));

        let ap = adaptive_program(&r, &counter).unwrap();
        let up = universal_process_as_process(&r);
        assert!(is_process_hom(
            &ap.as_computation(),
            &counter,
            &up,
            &samples,
            1000
        ));

        let zero = Computation::primitive("zero", Shape::Any, Shape::Nat, |_| Ok(n(0)));
        // (zero ⊗ A) ; counter emits 0, counter ; (zero ⊗ B) emits 1 at x = 1
        assert!(!is_process_hom(
            &zero,
            &counter,
            &counter,
            &[(n(1), Value::Unit)],
            100
        ));
    }

    #[test]
    fn hat_process_recovers_the_computation() {
        let r = Registry::standard();
        let add = r.get("add").unwrap().clone();
        let hat = Process::from_computation("add-hat", &add, Shape::Nat);
        let r = r.with(hat.step().clone());
        let ap = adaptive_program(&r, &hat).unwrap();
        let ev = evaluator_from_process(&r);
        let out = ev.apply(Value::pair(ap.code(&n(2)), n(3)), 1000);
        assert_eq!(out, Outcome::Done(n(5)));
        assert_eq!(
            out,
            universal_eval(&r, &Prog::prim("add"), Value::pair(n(2), n(3)), 1000)
        );
    }
}
