//! Values flowing on wires: unit, naturals, symbols, pairs and quoted programs.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::prog::Prog;

/// An immutable value tree. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    Unit,
    Nat(BigUint),
    Sym(Arc<str>),
    Pair(Arc<Value>, Arc<Value>),
    Quote(Arc<Prog>),
}

pub const NEG_SIGN: &str = "-";

impl Value {
    pub fn nat(n: impl Into<BigUint>) -> Self {
        Value::Nat(n.into())
    }

    pub fn sym(s: &str) -> Self {
        Value::Sym(Arc::from(s))
    }

    pub fn pair(left: Value, right: Value) -> Self {
        Value::Pair(Arc::new(left), Arc::new(right))
    }

    pub fn quote(p: Prog) -> Self {
        Value::Quote(Arc::new(p))
    }

    /// The truth value `t`, the program of the first projection.
    pub fn tt() -> Self {
        Value::quote(Prog::Fst)
    }

    /// The truth value `f`, the program of the second projection.
    pub fn ff() -> Self {
        Value::quote(Prog::Snd)
    }

    pub fn bool(b: bool) -> Self {
        if b {
            Value::tt()
        } else {
            Value::ff()
        }
    }

    /// Reads a truth value back; `None` for anything but the two projection programs.
    pub fn as_bool(&self) -> Option<bool> {
        match self.as_quote()? {
            Prog::Fst => Some(true),
            Prog::Snd => Some(false),
            _ => None,
        }
    }

    /// Signed integers: nonnegative ones are plain naturals, negative ones are `('- . n)`.
    pub fn int(i: &BigInt) -> Self {
        match i.sign() {
            Sign::Minus => Value::pair(Value::sym(NEG_SIGN), Value::Nat(i.magnitude().clone())),
            _ => Value::Nat(i.magnitude().clone()),
        }
    }

    pub fn small_int(i: i64) -> Self {
        Value::int(&BigInt::from(i))
    }

    pub fn as_int(&self) -> Option<BigInt> {
        match self {
            Value::Nat(n) => Some(BigInt::from(n.clone())),
            Value::Pair(s, n) if s.as_sym() == Some(NEG_SIGN) => match &**n {
                Value::Nat(n) if !n.is_zero() => Some(-BigInt::from(n.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    /// Builds a right-nested list terminated by unit.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Value>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Value::Unit, |tail, head| Value::pair(head, tail))
    }

    /// `(x0 . (x1 . (… . tail)))`
    pub fn list_tail<I>(items: I, tail: Value) -> Self
    where
        I: IntoIterator<Item = Value>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(tail, |tail, head| Value::pair(head, tail))
    }

    /// Iterates a unit-terminated list; `None` if the spine is malformed.
    pub fn list_items(&self) -> Option<Vec<&Value>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Value::Unit => return Some(out),
                Value::Pair(h, t) => {
                    out.push(&**h);
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            Value::Nat(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_nat()?.to_u64()
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Value::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_quote(&self) -> Option<&Prog> {
        match self {
            Value::Quote(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Value::Unit)
    }

    /// Number of constructor nodes, quoted programs included.
    pub fn size(&self) -> usize {
        match self {
            Value::Unit | Value::Nat(_) | Value::Sym(_) => 1,
            Value::Pair(a, b) => 1 + a.size() + b.size(),
            Value::Quote(p) => 1 + p.size(),
        }
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::nat(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::bool(b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Sym(s) => write!(f, "'{s}"),
            Value::Pair(a, b) => write!(f, "({a} . {b})"),
            Value::Quote(p) => write!(f, "#p<{p}>"),
        }
    }
}

/// Dynamic wire descriptor. `Any` admits every value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Shape {
    Any,
    Unit,
    Nat,
    Sym,
    Quote,
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn pair(a: Shape, b: Shape) -> Self {
        Shape::Pair(Box::new(a), Box::new(b))
    }

    pub fn admits(&self, v: &Value) -> bool {
        match (self, v) {
            (Shape::Any, _) => true,
            (Shape::Unit, Value::Unit) => true,
            (Shape::Nat, Value::Nat(_)) => true,
            (Shape::Sym, Value::Sym(_)) => true,
            (Shape::Quote, Value::Quote(_)) => true,
            (Shape::Pair(sa, sb), Value::Pair(a, b)) => sa.admits(a) && sb.admits(b),
            _ => false,
        }
    }

    /// Whether an output of shape `self` may be fed into an input of shape `other`.
    pub fn compatible(&self, other: &Shape) -> bool {
        match (self, other) {
            (Shape::Any, _) | (_, Shape::Any) => true,
            (Shape::Pair(a, b), Shape::Pair(c, d)) => a.compatible(c) && b.compatible(d),
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Any => f.write_str("*"),
            Shape::Unit => f.write_str("unit"),
            Shape::Nat => f.write_str("nat"),
            Shape::Sym => f.write_str("sym"),
            Shape::Quote => f.write_str("prog"),
            Shape::Pair(a, b) => write!(f, "({a} x {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ints_are_canonical() {
        for i in -5i64..=5 {
            let v = Value::small_int(i);
            assert_eq!(v.as_int(), Some(BigInt::from(i)));
        }
        assert_eq!(Value::small_int(0), Value::nat(0u64));
        let minus_zero = Value::pair(Value::sym("-"), Value::nat(0u64));
        assert_eq!(minus_zero.as_int(), None);
    }

    #[test]
    fn lists_round_trip() {
        let v = Value::list(vec![Value::nat(1u64), Value::sym("a")]);
        assert_eq!(v.to_string(), "(1 . ('a . ()))");
        assert_eq!(v.list_items().unwrap().len(), 2);
        assert!(Value::nat(3u64).list_items().is_none());
    }

    #[test]
    fn shapes_admit_structurally() {
        let s = Shape::pair(Shape::Nat, Shape::Any);
        assert!(s.admits(&Value::pair(Value::nat(1u64), Value::Unit)));
        assert!(!s.admits(&Value::nat(1u64)));
        assert!(Shape::Any.compatible(&Shape::Nat));
        assert!(!Shape::Nat.compatible(&Shape::Sym));
    }

    #[test]
    fn booleans_are_projection_programs() {
        assert_eq!(Value::tt().as_bool(), Some(true));
        assert_eq!(Value::ff().as_bool(), Some(false));
        assert_eq!(Value::nat(0u64).as_bool(), None);
    }
}
