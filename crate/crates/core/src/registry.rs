//! Primitive resolution for `(prim name)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::category::{reason, Computation, Fault};
use crate::eval::partial_eval_computation;
use crate::value::{Shape, Value};

/// Name → computation table. Cheap to clone; frozen once shared with an evaluation.
#[derive(Clone, Default, Debug)]
pub struct Registry {
    prims: Arc<BTreeMap<Arc<str>, Computation>>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Arithmetic, projections, equality, the partial evaluator, integer counters, the
    /// Turing step primitives and the demo processes (`counter`, `echo`).
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        for c in arithmetic() {
            r.register(c);
        }
        for c in int_counters() {
            r.register(c);
        }
        r.register(partial_eval_computation());
        for c in crate::turing::primitives() {
            r.register(c);
        }
        r.register(crate::process::Process::counter().step().clone());
        r.register(crate::process::Process::echo().step().clone());
        r
    }

    /// Adds or replaces a primitive under its own name.
    pub fn register(&mut self, c: Computation) -> &mut Self {
        Arc::make_mut(&mut self.prims).insert(Arc::from(c.name()), c);
        self
    }

    pub fn with(mut self, c: Computation) -> Self {
        self.register(c);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Computation> {
        self.prims.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.prims.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.prims.keys().map(|k| &**k)
    }

    pub fn computations(&self) -> impl Iterator<Item = &Computation> {
        self.prims.values()
    }
}

fn shape_err() -> Fault {
    Fault::stuck(reason::SHAPE)
}

fn nat_pair(v: &Value) -> Result<(&num_bigint::BigUint, &num_bigint::BigUint), Fault> {
    let (a, b) = v.as_pair().ok_or_else(shape_err)?;
    Ok((
        a.as_nat().ok_or_else(shape_err)?,
        b.as_nat().ok_or_else(shape_err)?,
    ))
}

fn arithmetic() -> Vec<Computation> {
    let nn = Shape::pair(Shape::Nat, Shape::Nat);
    let any2 = Shape::pair(Shape::Any, Shape::Any);
    vec![
        Computation::primitive("succ", Shape::Nat, Shape::Nat, |v| {
            Ok(Value::Nat(v.as_nat().ok_or_else(shape_err)? + 1u32))
        }),
        Computation::primitive("pred", Shape::Nat, Shape::Nat, |v| {
            let n = v.as_nat().ok_or_else(shape_err)?;
            Ok(if n == &0u32.into() {
                v.clone()
            } else {
                Value::Nat(n - 1u32)
            })
        }),
        Computation::primitive("iszero", Shape::Nat, Shape::Quote, |v| {
            let n = v.as_nat().ok_or_else(shape_err)?;
            Ok(Value::bool(n == &0u32.into()))
        }),
        Computation::primitive("add", nn.clone(), Shape::Nat, |v| {
            let (a, b) = nat_pair(v)?;
            Ok(Value::Nat(a + b))
        }),
        Computation::primitive("fst-proj", any2.clone(), Shape::Any, |v| {
            Ok(v.as_pair().ok_or_else(shape_err)?.0.clone())
        }),
        Computation::primitive("snd-proj", any2.clone(), Shape::Any, |v| {
            Ok(v.as_pair().ok_or_else(shape_err)?.1.clone())
        }),
        Computation::primitive("eq", any2, Shape::Quote, |v| {
            let (a, b) = v.as_pair().ok_or_else(shape_err)?;
            Ok(Value::bool(a == b))
        }),
    ]
}

fn int_arg(v: &Value) -> Result<BigInt, Fault> {
    v.as_int().ok_or_else(shape_err)
}

fn int_pair(v: &Value) -> Result<(BigInt, BigInt), Fault> {
    let (a, b) = v.as_pair().ok_or_else(shape_err)?;
    Ok((int_arg(a)?, int_arg(b)?))
}

/// Signed counters used by the space meter.
fn int_counters() -> Vec<Computation> {
    vec![
        Computation::primitive("int-inc", Shape::Any, Shape::Any, |v| {
            Ok(Value::int(&(int_arg(v)? + 1)))
        }),
        Computation::primitive("int-dec", Shape::Any, Shape::Any, |v| {
            Ok(Value::int(&(int_arg(v)? - 1)))
        }),
        Computation::primitive(
            "int-add",
            Shape::pair(Shape::Any, Shape::Any),
            Shape::Any,
            |v| {
                let (a, b) = int_pair(v)?;
                Ok(Value::int(&(a + b)))
            },
        ),
        Computation::primitive(
            "int-sub",
            Shape::pair(Shape::Any, Shape::Any),
            Shape::Any,
            |v| {
                let (a, b) = int_pair(v)?;
                Ok(Value::int(&(a - b)))
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(r: &Registry, name: &str, v: Value) -> Value {
        r.get(name).unwrap().apply(v, 10).into_done().unwrap()
    }

    #[test]
    fn standard_primitives_behave() {
        let r = Registry::standard();
        let n = |k: u64| Value::nat(k);
        assert_eq!(ap(&r, "succ", n(4)), n(5));
        assert_eq!(ap(&r, "pred", n(0)), n(0));
        assert_eq!(ap(&r, "pred", n(4)), n(3));
        assert_eq!(ap(&r, "iszero", n(0)), Value::tt());
        assert_eq!(ap(&r, "iszero", n(2)), Value::ff());
        assert_eq!(ap(&r, "add", Value::pair(n(2), n(3))), n(5));
        assert_eq!(ap(&r, "eq", Value::pair(n(2), n(2))), Value::tt());
        assert_eq!(ap(&r, "int-dec", n(0)), Value::small_int(-1));
        assert_eq!(ap(&r, "int-inc", Value::small_int(-1)), n(0));
        assert_eq!(
            ap(&r, "int-sub", Value::pair(n(2), Value::small_int(-3))),
            n(5)
        );
        assert!(r.get("succ").unwrap().apply(Value::Unit, 10).is_stuck());
        for name in [
            "fst-proj",
            "snd-proj",
            "pe",
            "tm-step",
            "tm-halted",
            "counter",
            "echo",
        ] {
            assert!(r.contains(name), "{name} missing");
        }
    }

    #[test]
    fn registration_does_not_affect_clones() {
        let base = Registry::standard();
        let extended = base.clone().with(crate::category::id().renamed("extra"));
        assert!(extended.contains("extra"));
        assert!(!base.contains("extra"));
    }
}
