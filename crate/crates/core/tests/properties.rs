//! Property tests over the public API. Domain generators are driven from proptest seeds
//! so shrinking reports a reproducible seed.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use moncom_core::check::{self, CheckConfig, Suite};
use moncom_core::coalgebra::MealyMachine;
use moncom_core::complexity::{self, Convention, SpaceCounters};
use moncom_core::encode::{decode, encode, Tag};
use moncom_core::eval::{eval_with_cost, partial_eval, universal_eval};
use moncom_core::gen;
use moncom_core::syntax::{parse_prog, parse_value};
use moncom_core::turing::{self, format, Halting, MachineState, Move, Tape, HALT};
use moncom_core::{Outcome, Registry, Value};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn machine_and_tape(seed: u64) -> (turing::TuringProcess, Tape) {
    let mut r = rng(seed);
    let tm = gen::machine(&mut r, 4, 3);
    let w = gen::tape(&mut r, &tm, 6);
    (tm, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn values_and_programs_print_and_parse_back(seed: u64) {
        let mut r = rng(seed);
        let v = gen::value(&mut r, 4);
        prop_assert_eq!(parse_value(&v.to_string()).unwrap(), v);
        let p = gen::program(&mut r, 4);
        prop_assert_eq!(parse_prog(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn specialization_costs_one_more_clause(seed: u64) {
        let reg = Registry::standard();
        let mut r = rng(seed);
        let p = gen::program(&mut r, 3);
        let (a, b) = (gen::value(&mut r, 2), gen::value(&mut r, 2));
        let (left, c1) = eval_with_cost(&reg, &partial_eval(&p, a.clone()), b.clone(), 100_000);
        let (right, c2) = eval_with_cost(&reg, &p, Value::pair(a, b), 100_000);
        if !left.is_diverged() && !right.is_diverged() {
            prop_assert_eq!(left, right);
            prop_assert_eq!(c1, c2 + 1);
        }
    }

    #[test]
    fn more_fuel_refines_the_outcome(seed: u64, f1 in 0u64..200, extra in 1u64..200) {
        let reg = Registry::standard();
        let mut r = rng(seed);
        let p = gen::program(&mut r, 4);
        let a = gen::value(&mut r, 3);
        let small = universal_eval(&reg, &p, a.clone(), f1);
        let large = universal_eval(&reg, &p, a, f1 + extra);
        prop_assert!(small.refined_by(&large), "{} then {}", small, large);
    }

    #[test]
    fn nat_codes_round_trip(n: u64) {
        let v = Value::nat(n);
        let code = encode(&Tag::Nat, &v).unwrap();
        prop_assert_eq!(decode(&Tag::Nat, &code, 100), Outcome::Done(v));
    }

    #[test]
    fn tapes_round_trip_through_values(seed: u64) {
        let (_, w) = machine_and_tape(seed);
        prop_assert_eq!(turing::tape_from_value(&turing::tape_to_value(&w)), Some(w));
    }

    #[test]
    fn shifting_reindexes_the_tape(cells in prop::collection::vec((-10i64..10, prop::sample::select(vec!['0', '1'])), 0..8)) {
        let w = Tape::from_cells(cells);
        for m in Move::ALL {
            let mut s = w.clone();
            s.shift(m);
            for z in -12..12 {
                prop_assert_eq!(s.get(z), w.get(z + m.delta()));
            }
        }
    }

    #[test]
    fn machines_round_trip_through_text_and_values(seed: u64) {
        let (tm, _) = machine_and_tape(seed);
        prop_assert_eq!(&format::parse_machine(&format::print_machine(&tm)).unwrap(), &tm);
        let back = turing::machine_from_value(&turing::machine_to_value(&tm)).unwrap();
        prop_assert_eq!(turing::machine_to_value(&back), turing::machine_to_value(&tm));
    }

    #[test]
    fn halting_state_absorbs(seed: u64) {
        let (tm, w) = machine_and_tape(seed);
        let ms = MachineState::new(Arc::new(tm), HALT).unwrap();
        let (next, w2) = turing::global_step(&ms, &w).unwrap();
        prop_assert!(next.is_halted());
        prop_assert_eq!(w2, w);
    }

    #[test]
    fn meters_agree_with_the_trace(seed: u64) {
        let (tm, w) = machine_and_tape(seed);
        let q = tm.start().to_string();
        let trace = complexity::meter_trace(&tm, &q, &w, 500).unwrap();
        let t = complexity::time(&tm, &q, &w, 500).unwrap();
        let s = complexity::space(&tm, &q, &w, 500, Convention::Visited).unwrap();
        prop_assert_eq!(t.is_halted(), trace.halted);
        if let (Halting::Halted(t), Halting::Halted(s)) = (t, s) {
            prop_assert_eq!(t as usize, trace.entries.len());
            prop_assert_eq!(s.clone(), BigInt::from(trace.span()));
            prop_assert!(s <= BigInt::from(t));
        }
    }

    #[test]
    fn traces_extend_their_prefixes(seed: u64, k in 0u64..60) {
        let (tm, w) = machine_and_tape(seed);
        let short = complexity::meter_trace(&tm, tm.start(), &w, k).unwrap();
        let long = complexity::meter_trace(&tm, tm.start(), &w, k + 40).unwrap();
        prop_assert!(long.entries.starts_with(&short.entries));
    }

    #[test]
    fn counters_keep_their_order_and_agree_across_precisions(
        moves in prop::collection::vec(prop::sample::select(Move::ALL.to_vec()), 0..60),
        cells in prop::collection::vec((-6i64..6, Just('1')), 0..5),
    ) {
        let w = Tape::from_cells(cells);
        for conv in [Convention::Visited, Convention::Input] {
            let mut big: SpaceCounters = SpaceCounters::initial(&w, conv);
            let mut small = SpaceCounters::<i64>::initial(&w, conv);
            for &m in &moves {
                big.update(m);
                small.update(m);
                prop_assert!(big.ell <= big.m && big.m <= big.r);
            }
            prop_assert_eq!(big.span(), BigInt::from(small.span()));
        }
    }

    #[test]
    fn mealy_text_round_trips(states in 1usize..4, inputs in 1usize..3, outputs in 1usize..3, code: u64) {
        let m = MealyMachine::from_index(states, inputs, outputs, code % MealyMachine::count(states, inputs, outputs));
        prop_assert_eq!(m.to_string().parse::<MealyMachine>().unwrap(), m);
    }
}

#[test]
fn reports_are_deterministic() {
    let config = |seed| CheckConfig {
        seed,
        samples: Some(20),
        ..CheckConfig::default()
    };
    let a = check::run_suite(Suite::Kleene, &config(7)).to_string();
    let b = check::run_suite(Suite::Kleene, &config(7)).to_string();
    assert_eq!(a, b);
    assert!(check::run_suite(Suite::Kleene, &config(7)).passed());
}
