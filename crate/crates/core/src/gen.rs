//! Random generators for the law suites: values, programs, processes, Turing machines
//! and tapes, all driven by a caller-supplied RNG.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::encode::{program_of_godel_number, Tag};
use crate::prog::Prog;
use crate::turing::{Move, Rule, Tape, TuringProcess, BLANK, HALT};
use crate::value::Value;

const SYMBOLS: [&str; 5] = ["a", "b", "x", "y", "nil"];

pub fn nat(rng: &mut impl Rng) -> Value {
    Value::nat(rng.gen_range(0..20u64))
}

pub fn value(rng: &mut impl Rng, depth: u32) -> Value {
    let top = if depth == 0 { 3 } else { 5 };
    match rng.gen_range(0..top) {
        0 => Value::Unit,
        1 => nat(rng),
        2 => Value::sym(SYMBOLS.choose(rng).expect("nonempty")),
        3 => Value::pair(value(rng, depth - 1), value(rng, depth - 1)),
        _ => Value::quote(program(rng, depth - 1)),
    }
}

/// An arbitrary program over the standard primitives. Many of them get stuck on many
/// inputs, which is fine for laws that compare outcomes.
pub fn program(rng: &mut impl Rng, depth: u32) -> Prog {
    let top = if depth == 0 { 6 } else { 10 };
    match rng.gen_range(0..top) {
        0 => Prog::Id,
        1 => Prog::Fst,
        2 => Prog::Snd,
        3 => Prog::lit(value(rng, 1)),
        4 => Prog::prim(
            ["succ", "pred", "iszero", "add", "eq", "fst-proj"]
                .choose(rng)
                .expect("nonempty"),
        ),
        5 => Prog::Apply,
        6 => Prog::seq(program(rng, depth - 1), program(rng, depth - 1)),
        7 => Prog::pairing(program(rng, depth - 1), program(rng, depth - 1)),
        8 => Prog::closure(program(rng, depth - 1), value(rng, 1)),
        _ => Prog::call(
            Prog::lit(Value::quote(program(rng, depth - 1))),
            program(rng, depth - 1),
        ),
    }
}

/// A program that is total on `(x . a)` with `x`, `a` natural numbers and returns a
/// natural number: `x`, `a`, constants, `succ`, `pred` and `add`.
pub fn nat_expression(rng: &mut impl Rng, depth: u32) -> Prog {
    let top = if depth == 0 { 3 } else { 6 };
    match rng.gen_range(0..top) {
        0 => Prog::Fst,
        1 => Prog::Snd,
        2 => Prog::lit(nat(rng)),
        3 => Prog::seq(nat_expression(rng, depth - 1), Prog::prim("succ")),
        4 => Prog::seq(nat_expression(rng, depth - 1), Prog::prim("pred")),
        _ => Prog::seq(
            Prog::pairing(
                nat_expression(rng, depth - 1),
                nat_expression(rng, depth - 1),
            ),
            Prog::prim("add"),
        ),
    }
}

/// A process step on `(x . a)`: `(e₁ . e₂)` for two total nat expressions.
pub fn process_step(rng: &mut impl Rng) -> (Prog, Prog) {
    (nat_expression(rng, 3), nat_expression(rng, 3))
}

/// A program `g` for Kleene's construction, taking `(code . a)`. It may inspect its own
/// code, call itself once on a smaller argument, or ignore the code.
pub fn kleene_body(rng: &mut impl Rng) -> Prog {
    match rng.gen_range(0..5) {
        0 => Prog::Fst,
        1 => Prog::seq(Prog::Snd, program(rng, 2)),
        2 => Prog::pairing(Prog::Snd, Prog::Fst),
        3 => Prog::pairing(program(rng, 1), Prog::Snd),
        // countdown recursion through the own code
        _ => Prog::if_then_else(
            Prog::seq(Prog::Snd, Prog::prim("iszero")),
            Prog::Snd,
            Prog::call(Prog::Fst, Prog::seq(Prog::Snd, Prog::prim("pred"))),
        ),
    }
}

/// Arguments for [`kleene_body`]: mostly small naturals.
pub fn kleene_argument(rng: &mut impl Rng) -> Value {
    if rng.gen_bool(0.8) {
        Value::nat(rng.gen_range(0..12u64))
    } else {
        value(rng, 2)
    }
}

/// A random machine with at most `max_states` non-halting states and at most
/// `max_symbols` symbols (the blank included).
pub fn machine(rng: &mut impl Rng, max_states: usize, max_symbols: usize) -> TuringProcess {
    let n_states = rng.gen_range(1..=max_states);
    let n_syms = rng.gen_range(1..=max_symbols);
    let states: Vec<String> = (0..n_states).map(|i| format!("q{i}")).collect();
    let alphabet: Vec<char> = std::iter::once(BLANK)
        .chain(['0', '1', '2', '3'].into_iter().take(n_syms - 1))
        .collect();
    let mut rules = Vec::new();
    for q in &states {
        for &c in &alphabet {
            let to = if rng.gen_bool(0.25) {
                HALT
            } else {
                states.choose(rng).expect("nonempty")
            };
            rules.push(Rule::new(
                q,
                c,
                to,
                *alphabet.choose(rng).expect("nonempty"),
                *Move::ALL.choose(rng).expect("nonempty"),
            ));
        }
    }
    TuringProcess::new(&states[0], &alphabet, &rules).expect("generated machines are total")
}

/// A tape over the machine's alphabet with at most `max_support` non-blank cells at
/// offsets in `-3..=3 + max_support`.
pub fn tape(rng: &mut impl Rng, tm: &TuringProcess, max_support: usize) -> Tape {
    let syms: Vec<char> = tm
        .alphabet()
        .iter()
        .copied()
        .filter(|&c| c != BLANK)
        .collect();
    if syms.is_empty() {
        return Tape::blank();
    }
    let k = rng.gen_range(0..=max_support);
    let cells: Vec<(i64, char)> = (0..k)
        .map(|_| {
            (
                rng.gen_range(-3..=(3 + max_support as i64)),
                *syms.choose(rng).expect("nonempty"),
            )
        })
        .collect();
    let t = Tape::from_cells(cells);
    debug_assert!(t.cells().count() <= max_support);
    t
}

/// A random element of the type named by `tag`.
pub fn element(rng: &mut impl Rng, tag: &Tag) -> Value {
    match tag {
        Tag::Nat => Value::nat(rng.gen_range(0..1_000_000u64)),
        Tag::Bool => Value::bool(rng.gen()),
        Tag::Prog => Value::quote(program(rng, 3)),
        Tag::Tape => {
            let tm = machine(rng, 2, 3);
            crate::turing::tape_to_value(&tape(rng, &tm, 6))
        }
        Tag::TmState => {
            let tm = std::sync::Arc::new(machine(rng, 4, 3));
            let names: Vec<String> = tm.states().map(str::to_string).collect();
            let q = names.choose(rng).expect("nonempty");
            crate::turing::machine_state_to_value(
                &crate::turing::MachineState::new(tm, q).expect("own state"),
            )
        }
        Tag::Pair(a, b) => Value::pair(element(rng, a), element(rng, b)),
    }
}

/// The tags exercised by the retract laws.
pub fn tags() -> Vec<Tag> {
    vec![
        Tag::Nat,
        Tag::Bool,
        Tag::Prog,
        Tag::Tape,
        Tag::TmState,
        Tag::pair(Tag::Nat, Tag::Bool),
        Tag::pair(Tag::Prog, Tag::pair(Tag::Tape, Tag::Nat)),
    ]
}

/// A quoted code that is not `encode(tag, v)` for any `v`.
pub fn out_of_image_code(rng: &mut impl Rng, tag: &Tag) -> Value {
    loop {
        let code = match rng.gen_range(0..4) {
            // not a program at all
            0 => value(rng, 2),
            // a constant whose payload is not of the type
            1 => Value::quote(Prog::lit(value(rng, 2))),
            // a program that gets stuck on ()
            2 => Value::quote(Prog::seq(Prog::Fst, program(rng, 1))),
            // a number that is not a Gödel number
            _ => Value::quote(Prog::lit(Value::nat(rng.gen_range(0..1u64 << 24)))),
        };
        if !could_be_in_image(tag, &code) {
            return code;
        }
    }
}

/// Conservative membership test: `false` only for codes that `encode` never produces
/// and that `decode` must reject.
fn could_be_in_image(tag: &Tag, code: &Value) -> bool {
    let Some(p) = code.as_quote() else {
        return false;
    };
    match (tag, p) {
        (Tag::Prog, Prog::Lit(Value::Nat(n))) => program_of_godel_number(n).is_some(),
        (Tag::Prog, Prog::Lit(_)) => false,
        (Tag::Pair(..), Prog::Lit(_)) => false,
        (_, Prog::Lit(v)) => tag.admits(v),
        (_, Prog::Seq(first, _)) if **first == Prog::Fst => false,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Outcome;
    use crate::encode::decode;
    use crate::eval::universal_eval;
    use crate::registry::Registry;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<String> = (0..20)
            .map(|_| ())
            .scan(ChaCha8Rng::seed_from_u64(5), |r, _| {
                Some(value(r, 3).to_string())
            })
            .collect();
        let b: Vec<String> = (0..20)
            .map(|_| ())
            .scan(ChaCha8Rng::seed_from_u64(5), |r, _| {
                Some(value(r, 3).to_string())
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn nat_expressions_are_total() {
        let r = Registry::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let e = nat_expression(&mut rng, 3);
            let out = universal_eval(&r, &e, Value::pair(nat(&mut rng), nat(&mut rng)), 10_000);
            assert!(out.done().and_then(Value::as_nat).is_some(), "{e}: {out}");
        }
    }

    #[test]
    fn machines_and_tapes_respect_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let tm = machine(&mut rng, 4, 3);
            assert!(tm.state_count() <= 5 && tm.alphabet().len() <= 3);
            let w = tape(&mut rng, &tm, 6);
            assert!(w.cells().count() <= 6 && tm.accepts_tape(&w));
        }
    }

    #[test]
    fn out_of_image_codes_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for tag in tags() {
            for _ in 0..50 {
                let code = out_of_image_code(&mut rng, &tag);
                assert!(
                    matches!(decode(&tag, &code, 1000), Outcome::Stuck(_)),
                    "{tag}: {code}"
                );
            }
        }
    }
}
