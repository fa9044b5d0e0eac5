//! Kleene's fixed program: for every `g` taking `(code . a)`, a program `Γ` with
//! `{Γ}(a) = {g}(#p<Γ> . a)`.
//!
//! `Γ = [G, G]` where `{G}(#p<p> . a) = {g}(#p<[p, p]> . a)`.

use crate::prog::Prog;
use crate::value::Value;

/// `(#p<p> . a) ↦ #p<[p, #p<p>]>`, using the registered partial evaluator `pe`.
pub fn freeze_self() -> Prog {
    Prog::chain([
        Prog::Fst,
        Prog::pairing(Prog::Id, Prog::Id),
        Prog::prim("pe"),
    ])
}

/// The program `G` of the construction.
pub fn self_applicator(g: &Prog) -> Prog {
    Prog::seq(Prog::pairing(freeze_self(), Prog::Snd), g.clone())
}

pub fn kleene_fix(g: &Prog) -> Prog {
    let big_g = self_applicator(g);
    Prog::closure(big_g.clone(), Value::quote(big_g))
}

/// The value a fixed program passes to `g` as its own code.
pub fn code_of(p: &Prog) -> Value {
    Value::quote(p.clone())
}

/// `kleene_fix(fst)`: a program that outputs its own code on every input.
pub fn quine() -> Prog {
    kleene_fix(&Prog::Fst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Outcome;
    use crate::encode::{decode, encode, Tag};
    use crate::eval::universal_eval;
    use crate::registry::Registry;

    #[test]
    fn quine_outputs_its_own_code() {
        let r = Registry::standard();
        let gamma = quine();
        let out = universal_eval(&r, &gamma, Value::nat(0u64), 1000);
        assert_eq!(out, Outcome::Done(code_of(&gamma)));
        // and the code survives the Gödel retract
        let code = encode(&Tag::Prog, out.done().unwrap()).unwrap();
        assert_eq!(decode(&Tag::Prog, &code, 1000), out);
    }

    #[test]
    fn fixed_program_of_a_code_ignoring_g() {
        let r = Registry::standard();
        let gamma = kleene_fix(&Prog::seq(Prog::Snd, Prog::prim("succ")));
        assert_eq!(
            universal_eval(&r, &gamma, Value::nat(4u64), 1000),
            Outcome::Done(Value::nat(5u64))
        );
    }

    #[test]
    fn fixed_point_equation_on_a_pairing() {
        let r = Registry::standard();
        let g = Prog::pairing(Prog::Snd, Prog::Fst);
        let gamma = kleene_fix(&g);
        let a = Value::sym("a");
        let lhs = universal_eval(&r, &gamma, a.clone(), 1000);
        let rhs = universal_eval(&r, &g, Value::pair(code_of(&gamma), a), 1000);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn self_call_recursion_counts_down() {
        // g(self, n) = if n = 0 then 0 else {self}(n - 1); terminates for every n
        let r = Registry::standard();
        let recurse = Prog::call(Prog::Fst, Prog::seq(Prog::Snd, Prog::prim("pred")));
        let g = Prog::if_then_else(
            Prog::seq(Prog::Snd, Prog::prim("iszero")),
            Prog::Snd,
            recurse,
        );
        let gamma = kleene_fix(&g);
        assert_eq!(
            universal_eval(&r, &gamma, Value::nat(25u64), 10_000),
            Outcome::Done(Value::nat(0u64))
        );
        assert!(universal_eval(&r, &gamma, Value::nat(25u64), 50).is_diverged());
    }
}
