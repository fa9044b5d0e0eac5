//! The concrete symmetric monoidal category: fuel-bounded computations on [`Value`]s,
//! their sequential and parallel composition, and the data services (copy, delete).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::value::{Shape, Value};

/// Stuck reasons used across the crate.
pub mod reason {
    pub const SHAPE: &str = "shape";
    pub const NOT_A_PROGRAM: &str = "not-a-program";
    pub const UNKNOWN_PRIM: &str = "unknown-prim";
    pub const BAD_CODE: &str = "bad-code";
    pub const NOT_A_PROCESS_PROGRAM: &str = "not-a-process-program";
}

/// A step budget. One unit is charged per primitive application and per evaluator step.
#[derive(Debug, Clone)]
pub struct Fuel {
    budget: u64,
    spent: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Fuel { budget, spent: 0 }
    }

    pub fn tick(&mut self) -> Result<(), Fault> {
        if self.spent >= self.budget {
            return Err(Fault::Exhausted);
        }
        self.spent += 1;
        Ok(())
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.spent
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// Why an evaluation stopped without a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    Exhausted,
    Stuck(String),
}

impl Fault {
    pub fn stuck(reason: &str) -> Self {
        Fault::Stuck(reason.to_string())
    }
}

/// Result of running anything under a fuel budget.
///
/// `Done` and `Stuck` are stable under more fuel. `Diverged` may turn into either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Done(Value),
    Diverged(u64),
    Stuck(String),
}

impl Outcome {
    pub fn from_result(r: Result<Value, Fault>, fuel: &Fuel) -> Self {
        match r {
            Ok(v) => Outcome::Done(v),
            Err(Fault::Exhausted) => Outcome::Diverged(fuel.spent()),
            Err(Fault::Stuck(s)) => Outcome::Stuck(s),
        }
    }

    pub fn done(&self) -> Option<&Value> {
        match self {
            Outcome::Done(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_done(self) -> Option<Value> {
        match self {
            Outcome::Done(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self, Outcome::Done(_))
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, Outcome::Diverged(_))
    }

    pub fn is_stuck(&self) -> bool {
        matches!(self, Outcome::Stuck(_))
    }

    /// Same status class, and the same value when both are `Done`.
    /// Fuel spent and stuck reasons are not compared.
    pub fn agrees(&self, other: &Outcome) -> bool {
        match (self, other) {
            (Outcome::Done(a), Outcome::Done(b)) => a == b,
            (Outcome::Diverged(_), Outcome::Diverged(_)) => true,
            (Outcome::Stuck(_), Outcome::Stuck(_)) => true,
            _ => false,
        }
    }

    /// Whether `later` is a legal outcome at a larger fuel given `self` at a smaller one.
    pub fn refined_by(&self, later: &Outcome) -> bool {
        match self {
            Outcome::Diverged(_) => true,
            _ => self == later,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Done(v) => write!(f, "done {v}"),
            Outcome::Diverged(n) => write!(f, "diverged after {n}"),
            Outcome::Stuck(r) => write!(f, "stuck: {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("cannot compose {first} then {second}: output {output} does not fit input {input}")]
    ShapeMismatch {
        first: String,
        second: String,
        output: Shape,
        input: Shape,
    },
}

type Body = dyn Fn(Value, &mut Fuel) -> Result<Value, Fault> + Send + Sync;

/// A named, deterministic, fuel-bounded partial transformation of values.
#[derive(Clone)]
pub struct Computation {
    name: Arc<str>,
    input: Shape,
    output: Shape,
    body: Arc<Body>,
}

impl fmt::Debug for Computation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Computation({}: {} -> {})",
            self.name, self.input, self.output
        )
    }
}

impl Computation {
    /// A computation with full control over fuel charging.
    pub fn new<F>(name: &str, input: Shape, output: Shape, body: F) -> Self
    where
        F: Fn(Value, &mut Fuel) -> Result<Value, Fault> + Send + Sync + 'static,
    {
        Computation {
            name: Arc::from(name),
            input,
            output,
            body: Arc::new(body),
        }
    }

    /// A primitive: charges one unit, then applies `f`.
    pub fn primitive<F>(name: &str, input: Shape, output: Shape, f: F) -> Self
    where
        F: Fn(&Value) -> Result<Value, Fault> + Send + Sync + 'static,
    {
        Computation::new(name, input, output, move |v, fuel| {
            fuel.tick()?;
            f(&v)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input(&self) -> &Shape {
        &self.input
    }

    pub fn output(&self) -> &Shape {
        &self.output
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = Arc::from(name);
        self
    }

    /// Runs against a shared budget. Inputs outside the declared shape are stuck.
    pub fn run(&self, v: Value, fuel: &mut Fuel) -> Result<Value, Fault> {
        if !self.input.admits(&v) {
            return Err(Fault::stuck(reason::SHAPE));
        }
        (self.body)(v, fuel)
    }

    pub fn apply(&self, v: Value, fuel: u64) -> Outcome {
        let mut budget = Fuel::new(fuel);
        let r = self.run(v, &mut budget);
        Outcome::from_result(r, &budget)
    }
}

pub fn id() -> Computation {
    Computation::primitive("id", Shape::Any, Shape::Any, |v| Ok(v.clone()))
}

/// Δ
pub fn copy() -> Computation {
    Computation::primitive(
        "copy",
        Shape::Any,
        Shape::pair(Shape::Any, Shape::Any),
        |v| Ok(Value::pair(v.clone(), v.clone())),
    )
}

/// ⊤
pub fn delete() -> Computation {
    Computation::primitive("delete", Shape::Any, Shape::Unit, |_| Ok(Value::Unit))
}

/// ς
pub fn swap() -> Computation {
    Computation::primitive(
        "swap",
        Shape::pair(Shape::Any, Shape::Any),
        Shape::pair(Shape::Any, Shape::Any),
        |v| {
            let (a, b) = v.as_pair().ok_or_else(|| Fault::stuck(reason::SHAPE))?;
            Ok(Value::pair(b.clone(), a.clone()))
        },
    )
}

/// Left unitor `I ⊗ A → A`.
pub fn unit_left() -> Computation {
    Computation::primitive(
        "unit-left",
        Shape::pair(Shape::Unit, Shape::Any),
        Shape::Any,
        |v| Ok(v.as_pair().expect("shape checked").1.clone()),
    )
}

/// Right unitor `A ⊗ I → A`.
pub fn unit_right() -> Computation {
    Computation::primitive(
        "unit-right",
        Shape::pair(Shape::Any, Shape::Unit),
        Shape::Any,
        |v| Ok(v.as_pair().expect("shape checked").0.clone()),
    )
}

/// Associator `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`.
pub fn assoc() -> Computation {
    Computation::primitive(
        "assoc",
        Shape::pair(Shape::pair(Shape::Any, Shape::Any), Shape::Any),
        Shape::pair(Shape::Any, Shape::pair(Shape::Any, Shape::Any)),
        |v| {
            let (ab, c) = v.as_pair().expect("shape checked");
            let (a, b) = ab.as_pair().expect("shape checked");
            Ok(Value::pair(a.clone(), Value::pair(b.clone(), c.clone())))
        },
    )
}

/// Burns all remaining fuel; never returns a value.
pub fn diverge() -> Computation {
    Computation::new("diverge", Shape::Any, Shape::Any, |_, fuel| loop {
        fuel.tick()?;
    })
}

/// `f ; g`
pub fn seq(f: &Computation, g: &Computation) -> Result<Computation, CategoryError> {
    if !f.output.compatible(&g.input) {
        return Err(CategoryError::ShapeMismatch {
            first: f.name.to_string(),
            second: g.name.to_string(),
            output: f.output.clone(),
            input: g.input.clone(),
        });
    }
    let (f2, g2) = (f.clone(), g.clone());
    Ok(Computation::new(
        &format!("({} ; {})", f.name, g.name),
        f.input.clone(),
        g.output.clone(),
        move |v, fuel| {
            let mid = f2.run(v, fuel)?;
            g2.run(mid, fuel)
        },
    ))
}

/// `f ⊗ g`, acting componentwise on pairs.
pub fn par(f: &Computation, g: &Computation) -> Computation {
    let (f2, g2) = (f.clone(), g.clone());
    Computation::new(
        &format!("({} ⊗ {})", f.name, g.name),
        Shape::pair(f.input.clone(), g.input.clone()),
        Shape::pair(f.output.clone(), g.output.clone()),
        move |v, fuel| {
            let (a, b) = v.as_pair().ok_or_else(|| Fault::stuck(reason::SHAPE))?;
            let (a, b) = (a.clone(), b.clone());
            let x = f2.run(a, fuel)?;
            let y = g2.run(b, fuel)?;
            Ok(Value::pair(x, y))
        },
    )
}

/// Left-to-right composition of a chain that is known to be well-shaped.
pub fn chain(steps: &[Computation]) -> Result<Computation, CategoryError> {
    let mut iter = steps.iter();
    let mut acc = iter.next().cloned().unwrap_or_else(id);
    for c in iter {
        acc = seq(&acc, c)?;
    }
    Ok(acc)
}

/// A sample on which two computations disagree.
#[derive(Debug, Clone)]
pub struct Disagreement {
    pub input: Value,
    pub left: Outcome,
    pub right: Outcome,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "on {}: {} vs {}", self.input, self.left, self.right)
    }
}

/// Sampled, fuel-bounded extensional equality.
pub fn equivalent_on(
    f: &Computation,
    g: &Computation,
    samples: &[Value],
    fuel: u64,
) -> Result<(), Disagreement> {
    for v in samples {
        let left = f.apply(v.clone(), fuel);
        let right = g.apply(v.clone(), fuel);
        if !left.agrees(&right) {
            return Err(Disagreement {
                input: v.clone(),
                left,
                right,
            });
        }
    }
    Ok(())
}

/// Sampled check that `f` is a map: total on the samples and a comonoid homomorphism,
/// `f;Δ ≡ Δ;(f⊗f)` and `f;⊤ ≡ ⊤`.
pub fn is_map(f: &Computation, samples: &[Value], fuel: u64) -> bool {
    let copy_after = seq(f, &copy()).expect("copy accepts anything");
    let copy_before = seq(&copy(), &par(f, f)).expect("copy feeds any pair");
    let delete_after = seq(f, &delete()).expect("delete accepts anything");
    let delete_only = delete();
    samples.iter().all(|v| {
        let a = copy_after.apply(v.clone(), fuel);
        let b = copy_before.apply(v.clone(), fuel);
        let c = delete_after.apply(v.clone(), fuel);
        let d = delete_only.apply(v.clone(), fuel);
        a.is_done() && a == b && c.is_done() && c == d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ() -> Computation {
        Computation::primitive("succ", Shape::Nat, Shape::Nat, |v| {
            Ok(Value::Nat(v.as_nat().unwrap() + 1u32))
        })
    }

    fn n(k: u64) -> Value {
        Value::nat(k)
    }

    #[test]
    fn seq_examples() {
        assert_eq!(
            seq(&id(), &id()).unwrap().apply(n(7), 10),
            Outcome::Done(n(7))
        );
        let counit = chain(&[copy(), par(&delete(), &id()), unit_left()]).unwrap();
        assert_eq!(counit.apply(n(3), 10), Outcome::Done(n(3)));
        // without the unitor the counit law holds only up to I ⊗ A ≅ A
        let raw = seq(&copy(), &par(&delete(), &id())).unwrap();
        assert_eq!(
            raw.apply(n(3), 10),
            Outcome::Done(Value::pair(Value::Unit, n(3)))
        );
        assert_eq!(
            seq(&succ(), &succ()).unwrap().apply(n(0), 10),
            Outcome::Done(n(2))
        );
    }

    #[test]
    fn seq_rejects_mismatched_shapes() {
        let err = seq(&delete(), &succ()).unwrap_err();
        assert!(matches!(err, CategoryError::ShapeMismatch { .. }));
        assert!(err.to_string().contains("delete"));
    }

    #[test]
    fn par_examples() {
        let p = par(&succ(), &succ());
        assert_eq!(
            p.apply(Value::pair(n(1), n(4)), 10),
            Outcome::Done(Value::pair(n(2), n(5)))
        );
        let v = Value::pair(Value::sym("a"), Value::Unit);
        assert_eq!(par(&id(), &id()).apply(v.clone(), 10), Outcome::Done(v));
        assert_eq!(
            par(&succ(), &id()).apply(n(3), 10),
            Outcome::Stuck("shape".into())
        );
        let d = par(&diverge(), &id());
        assert!(d.apply(Value::pair(n(1), n(1)), 10).is_diverged());
    }

    #[test]
    fn data_services() {
        assert_eq!(
            copy().apply(n(9), 1),
            Outcome::Done(Value::pair(n(9), n(9)))
        );
        assert_eq!(
            delete().apply(Value::pair(n(1), Value::Unit), 1),
            Outcome::Done(Value::Unit)
        );
        assert_eq!(
            swap().apply(Value::pair(Value::sym("a"), n(2)), 1),
            Outcome::Done(Value::pair(n(2), Value::sym("a")))
        );
        assert_eq!(swap().apply(n(2), 1), Outcome::Stuck("shape".into()));
        assert_eq!(copy().apply(n(9), 0), Outcome::Diverged(0));
    }

    #[test]
    fn is_map_examples() {
        let samples: Vec<Value> = (0..100).map(n).collect();
        assert!(is_map(&succ(), &samples, 100));
        assert!(!is_map(&diverge(), &[n(0)], 100));
        assert!(is_map(&copy(), &[n(5)], 10));
    }

    #[test]
    fn fuel_exhaustion_reports_spent_budget() {
        assert_eq!(diverge().apply(n(0), 50), Outcome::Diverged(50));
        let mut f = Fuel::new(2);
        f.tick().unwrap();
        assert_eq!(f.remaining(), 1);
    }
}
