//! Terms of the reflective program calculus and combinators for building them.

use std::fmt;
use std::sync::Arc;

use crate::value::Value;

/// A program. Programs are also data: `Value::Quote` carries them on wires.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Prog {
    /// A registered primitive computation, looked up by name.
    Prim(Arc<str>),
    Id,
    /// `x ↦ ({p}x . {q}x)`
    Pairing(Arc<Prog>, Arc<Prog>),
    /// `x ↦ {q}({p}x)`
    Seq(Arc<Prog>, Arc<Prog>),
    Fst,
    Snd,
    /// Constant program.
    Lit(Value),
    /// `b ↦ {p}(v . b)`: the partial evaluation `[p, v]`.
    Closure(Arc<Prog>, Value),
    /// `(#p<q> . a) ↦ {q}a`
    Apply,
}

impl Prog {
    pub fn prim(name: &str) -> Self {
        Prog::Prim(Arc::from(name))
    }

    pub fn seq(p: Prog, q: Prog) -> Self {
        Prog::Seq(Arc::new(p), Arc::new(q))
    }

    pub fn pairing(p: Prog, q: Prog) -> Self {
        Prog::Pairing(Arc::new(p), Arc::new(q))
    }

    pub fn lit(v: Value) -> Self {
        Prog::Lit(v)
    }

    pub fn closure(p: Prog, v: Value) -> Self {
        Prog::Closure(Arc::new(p), v)
    }

    /// Sequential composition of a whole chain, left to right. The empty chain is `id`.
    pub fn chain<I: IntoIterator<Item = Prog>>(steps: I) -> Self {
        let mut steps: Vec<Prog> = steps.into_iter().collect();
        let Some(mut acc) = steps.pop() else {
            return Prog::Id;
        };
        while let Some(p) = steps.pop() {
            acc = Prog::seq(p, acc);
        }
        acc
    }

    /// Calls the quoted program produced by `head` on the value produced by `arg`.
    pub fn call(head: Prog, arg: Prog) -> Self {
        Prog::seq(Prog::pairing(head, arg), Prog::Apply)
    }

    /// Eager selection: both branches are evaluated, `cond` (a truth value) picks one.
    /// The cost does not depend on which branch is taken.
    pub fn select(cond: Prog, then: Prog, otherwise: Prog) -> Self {
        Prog::call(cond, Prog::pairing(then, otherwise))
    }

    /// Lazy branching through the universal evaluator: `cond` picks one of the two quoted
    /// programs, which is then run on the original input.
    pub fn if_then_else(cond: Prog, then: Prog, otherwise: Prog) -> Self {
        let pick = Prog::call(
            cond,
            Prog::lit(Value::pair(Value::quote(then), Value::quote(otherwise))),
        );
        Prog::call(pick, Prog::Id)
    }

    /// Conjunction of two truth-valued programs.
    pub fn and(a: Prog, b: Prog) -> Self {
        Prog::call(a, Prog::pairing(b, Prog::lit(Value::ff())))
    }

    /// Projection path: `0` selects `fst`, `1` selects `snd`, applied left to right.
    pub fn path(steps: &[u8]) -> Self {
        Prog::chain(
            steps
                .iter()
                .map(|s| if *s == 0 { Prog::Fst } else { Prog::Snd }),
        )
    }

    pub fn size(&self) -> usize {
        match self {
            Prog::Prim(_) | Prog::Id | Prog::Fst | Prog::Snd | Prog::Apply => 1,
            Prog::Pairing(p, q) | Prog::Seq(p, q) => 1 + p.size() + q.size(),
            Prog::Lit(v) => 1 + v.size(),
            Prog::Closure(p, v) => 1 + p.size() + v.size(),
        }
    }
}

impl fmt::Display for Prog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prog::Prim(n) => write!(f, "(prim {n})"),
            Prog::Id => f.write_str("id"),
            Prog::Pairing(p, q) => write!(f, "(pairing {p} {q})"),
            Prog::Seq(p, q) => write!(f, "(seq {p} {q})"),
            Prog::Fst => f.write_str("fst"),
            Prog::Snd => f.write_str("snd"),
            Prog::Lit(v) => write!(f, "(lit {v})"),
            Prog::Closure(p, v) => write!(f, "(closure {p} {v})"),
            Prog::Apply => f.write_str("apply"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_nests_to_the_right() {
        let p = Prog::chain([Prog::Fst, Prog::Snd, Prog::Id]);
        assert_eq!(p.to_string(), "(seq fst (seq snd id))");
        assert_eq!(Prog::chain([]), Prog::Id);
        assert_eq!(Prog::path(&[1, 0]), Prog::seq(Prog::Snd, Prog::Fst));
    }

    #[test]
    fn printer_covers_every_form() {
        let p = Prog::closure(
            Prog::pairing(Prog::prim("succ"), Prog::lit(Value::Unit)),
            Value::quote(Prog::Apply),
        );
        assert_eq!(
            p.to_string(),
            "(closure (pairing (prim succ) (lit ())) #p<apply>)"
        );
    }
}
