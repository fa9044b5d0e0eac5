//! The universal evaluator `{ }`, the partial evaluator `[ ]`, program evaluation and
//! branching.
//!
//! The evaluator is a small-step machine with an explicit continuation stack, so
//! evaluation depth is bounded by fuel and not by the native call stack. Calls in tail
//! position (the second half of `seq`, `closure`, `apply`) do not grow the stack.

use std::sync::Arc;

use crate::category::{reason, Computation, Fault, Fuel, Outcome};
use crate::prog::Prog;
use crate::registry::Registry;
use crate::value::{Shape, Value};

enum Frame {
    /// Continue with `q` on the returned value.
    Then(Arc<Prog>),
    /// Left half of a pairing is running; `right` still has to run on `input`.
    PairRight { right: Arc<Prog>, input: Value },
    /// Right half of a pairing is running.
    PairDone { left: Value },
}

enum Control {
    Eval(Arc<Prog>, Value),
    Return(Value),
}

/// Runs `{p}(a)` against a shared budget.
pub fn eval_in(registry: &Registry, p: &Prog, a: Value, fuel: &mut Fuel) -> Result<Value, Fault> {
    let mut stack: Vec<Frame> = Vec::new();
    let mut control = Control::Eval(Arc::new(p.clone()), a);
    loop {
        control = match control {
            Control::Return(v) => match stack.pop() {
                None => return Ok(v),
                Some(Frame::Then(q)) => Control::Eval(q, v),
                Some(Frame::PairRight { right, input }) => {
                    stack.push(Frame::PairDone { left: v });
                    Control::Eval(right, input)
                }
                Some(Frame::PairDone { left }) => Control::Return(Value::pair(left, v)),
            },
            Control::Eval(p, a) => {
                fuel.tick()?;
                match &*p {
                    Prog::Id => Control::Return(a),
                    Prog::Lit(v) => Control::Return(v.clone()),
                    Prog::Fst => match a {
                        Value::Pair(x, _) => Control::Return((*x).clone()),
                        _ => return Err(Fault::stuck(reason::SHAPE)),
                    },
                    Prog::Snd => match a {
                        Value::Pair(_, y) => Control::Return((*y).clone()),
                        _ => return Err(Fault::stuck(reason::SHAPE)),
                    },
                    Prog::Seq(first, second) => {
                        stack.push(Frame::Then(second.clone()));
                        Control::Eval(first.clone(), a)
                    }
                    Prog::Pairing(left, right) => {
                        stack.push(Frame::PairRight {
                            right: right.clone(),
                            input: a.clone(),
                        });
                        Control::Eval(left.clone(), a)
                    }
                    Prog::Closure(body, frozen) => {
                        Control::Eval(body.clone(), Value::pair(frozen.clone(), a))
                    }
                    Prog::Apply => match a {
                        Value::Pair(head, arg) => match &*head {
                            Value::Quote(q) => Control::Eval(q.clone(), (*arg).clone()),
                            _ => return Err(Fault::stuck(reason::NOT_A_PROGRAM)),
                        },
                        _ => return Err(Fault::stuck(reason::SHAPE)),
                    },
                    Prog::Prim(name) => {
                        let c = registry.get(name).ok_or_else(|| {
                            Fault::Stuck(format!("{}:{name}", reason::UNKNOWN_PRIM))
                        })?;
                        Control::Return(c.run(a, fuel)?)
                    }
                }
            }
        }
    }
}

/// `{p}(a)` under a fresh budget.
pub fn universal_eval(registry: &Registry, p: &Prog, a: Value, fuel: u64) -> Outcome {
    eval_with_cost(registry, p, a, fuel).0
}

/// Like [`universal_eval`], also reporting the fuel consumed.
pub fn eval_with_cost(registry: &Registry, p: &Prog, a: Value, fuel: u64) -> (Outcome, u64) {
    let mut budget = Fuel::new(fuel);
    let r = eval_in(registry, p, a, &mut budget);
    (Outcome::from_result(r, &budget), budget.spent())
}

/// `[p, a]`: syntactic closure formation. Never evaluates anything.
pub fn partial_eval(p: &Prog, a: Value) -> Prog {
    Prog::closure(p.clone(), a)
}

/// The partial evaluator as a computation `ℙ ⊗ A → ℙ`.
pub fn partial_eval_computation() -> Computation {
    Computation::primitive(
        "pe",
        Shape::pair(Shape::Quote, Shape::Any),
        Shape::Quote,
        |v| {
            let (p, a) = v.as_pair().expect("shape checked");
            let p = p.as_quote().expect("shape checked");
            Ok(Value::quote(partial_eval(p, a.clone())))
        },
    )
}

/// The universal evaluator as a computation `ℙ ⊗ A → B`.
pub fn universal_eval_computation(registry: &Registry) -> Computation {
    let reg = registry.clone();
    Computation::new("eval", Shape::Any, Shape::Any, move |v, fuel| {
        fuel.tick()?;
        let (head, arg) = v.as_pair().ok_or_else(|| Fault::stuck(reason::SHAPE))?;
        let p = head
            .as_quote()
            .ok_or_else(|| Fault::stuck(reason::NOT_A_PROGRAM))?;
        eval_in(&reg, p, arg.clone(), fuel)
    })
}

/// `{F} = (F ⊗ A) ; { }`: the computation `(x . a) ↦ {F(x)}(a)` for an indexed family of
/// programs `F : X → ℙ`.
pub fn program_evaluation(registry: &Registry, family: &Computation) -> Computation {
    let reg = registry.clone();
    let f = family.clone();
    Computation::new(
        &format!("{{{}}}", family.name()),
        Shape::pair(family.input().clone(), Shape::Any),
        Shape::Any,
        move |v, fuel| {
            let (x, a) = v.as_pair().ok_or_else(|| Fault::stuck(reason::SHAPE))?;
            let a = a.clone();
            let code = f.run(x.clone(), fuel)?;
            let p = code
                .as_quote()
                .ok_or_else(|| Fault::stuck(reason::NOT_A_PROGRAM))?;
            eval_in(&reg, p, a, fuel)
        },
    )
}

/// The truth value `t`: the first projection.
pub fn tt() -> Prog {
    Prog::Fst
}

/// The truth value `f`: the second projection.
pub fn ff() -> Prog {
    Prog::Snd
}

/// `if b then x else y` through the universal evaluator: `{b}(x . y)`.
///
/// For guards other than `tt`/`ff` the result is whatever `{b}` does on the pair.
pub fn branch(registry: &Registry, b: &Prog, pair: Value, fuel: u64) -> Outcome {
    if pair.as_pair().is_none() {
        return Outcome::Stuck(reason::SHAPE.into());
    }
    universal_eval(registry, b, pair, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Registry {
        Registry::standard()
    }

    fn n(k: u64) -> Value {
        Value::nat(k)
    }

    #[test]
    fn universal_eval_examples() {
        let r = reg();
        let succ = Prog::prim("succ");
        assert_eq!(universal_eval(&r, &succ, n(4), 100), Outcome::Done(n(5)));
        let via_apply = universal_eval(
            &r,
            &Prog::Apply,
            Value::pair(Value::quote(succ.clone()), n(4)),
            100,
        );
        assert_eq!(via_apply, universal_eval(&r, &succ, n(4), 100));
        assert_eq!(universal_eval(&r, &succ, n(4), 0), Outcome::Diverged(0));
    }

    #[test]
    fn every_clause_costs_fuel() {
        let r = reg();
        for p in [Prog::Id, Prog::Fst, Prog::Snd, Prog::lit(n(1)), Prog::Apply] {
            assert_eq!(
                universal_eval(&r, &p, Value::pair(Value::quote(Prog::Id), n(0)), 0),
                Outcome::Diverged(0)
            );
        }
        let (out, cost) = eval_with_cost(&r, &Prog::seq(Prog::Id, Prog::Id), n(1), 100);
        assert_eq!(out, Outcome::Done(n(1)));
        assert_eq!(cost, 3);
        // primitive clause plus the primitive's own unit
        let (_, cost) = eval_with_cost(&r, &Prog::prim("succ"), n(1), 100);
        assert_eq!(cost, 2);
    }

    #[test]
    fn malformed_shapes_are_stuck() {
        let r = reg();
        assert_eq!(
            universal_eval(&r, &Prog::Fst, n(1), 10),
            Outcome::Stuck("shape".into())
        );
        assert_eq!(
            universal_eval(&r, &Prog::Apply, Value::pair(n(1), n(2)), 10),
            Outcome::Stuck("not-a-program".into())
        );
        assert!(universal_eval(&r, &Prog::prim("nope"), n(1), 10).is_stuck());
    }

    #[test]
    fn partial_eval_examples() {
        let r = reg();
        let add2 = partial_eval(&Prog::prim("add"), n(2));
        assert_eq!(universal_eval(&r, &add2, n(3), 100), Outcome::Done(n(5)));
        let q = Prog::closure(Prog::Fst, Value::Unit);
        let w = Value::sym("w");
        assert_eq!(partial_eval(&q, w.clone()), Prog::closure(q.clone(), w));
    }

    #[test]
    fn smn_offset_is_one_step() {
        let r = reg();
        let p = Prog::prim("add");
        let direct = eval_with_cost(&r, &p, Value::pair(n(2), n(3)), 100);
        let special = eval_with_cost(&r, &partial_eval(&p, n(2)), n(3), 100);
        assert_eq!(direct.0, special.0);
        assert_eq!(special.1, direct.1 + 1);
    }

    #[test]
    fn program_evaluation_examples() {
        let r = reg();
        let constant = Computation::primitive("const-succ", Shape::Any, Shape::Quote, |_| {
            Ok(Value::quote(Prog::prim("succ")))
        });
        let g = program_evaluation(&r, &constant);
        assert_eq!(
            g.apply(Value::pair(Value::Unit, n(1)), 100),
            Outcome::Done(n(2))
        );

        let ident = crate::category::id();
        let g = program_evaluation(&r, &ident);
        let out = g.apply(Value::pair(Value::quote(Prog::prim("iszero")), n(0)), 100);
        assert_eq!(out, Outcome::Done(Value::tt()));

        let g = program_evaluation(&r, &crate::category::diverge());
        assert!(g.apply(Value::pair(Value::Unit, n(0)), 100).is_diverged());

        let g = program_evaluation(&r, &crate::category::delete());
        assert_eq!(
            g.apply(Value::pair(n(1), n(0)), 100),
            Outcome::Stuck("not-a-program".into())
        );
    }

    #[test]
    fn branch_examples() {
        let r = reg();
        let pair = Value::pair(n(3), n(7));
        assert_eq!(branch(&r, &tt(), pair.clone(), 10), Outcome::Done(n(3)));
        assert_eq!(branch(&r, &ff(), pair, 10), Outcome::Done(n(7)));
        // off-contract guard: succ on a pair is stuck
        assert!(branch(&r, &Prog::prim("succ"), Value::pair(n(0), n(1)), 10).is_stuck());
        assert!(branch(&r, &tt(), n(1), 10).is_stuck());
    }

    #[test]
    fn lazy_branching_skips_the_other_arm() {
        let r = reg();
        let looping = Prog::seq(Prog::Id, Prog::prim("no-such-prim"));
        let p = Prog::if_then_else(Prog::prim("iszero"), Prog::prim("succ"), looping);
        assert_eq!(universal_eval(&r, &p, n(0), 100), Outcome::Done(n(1)));
        assert!(universal_eval(&r, &p, n(1), 100).is_stuck());
    }

    #[test]
    fn deep_tail_recursion_does_not_grow_the_native_stack() {
        let r = reg();
        // a chain of 200k identities
        let mut p = Prog::Id;
        for _ in 0..200_000 {
            p = Prog::seq(Prog::Id, p);
        }
        assert_eq!(universal_eval(&r, &p, n(1), 1_000_000), Outcome::Done(n(1)));
        std::mem::forget(p);
    }
}
