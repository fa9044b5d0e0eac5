//! Turing processes, machine states and tapes as values, and the primitives that step
//! them inside the program calculus.
//!
//! A tape is a zipper `(left . (head . right))`: `left` lists `w(-1), w(-2), …`, `right`
//! lists `w(1), w(2), …`, both without trailing blanks, and `head` is the symbol `w(0)`.
//! A machine is `(states . (alphabet . (start . rules)))` with rules
//! `(q . (σ . (q' . (σ' . d))))`; a machine state is `(machine . q)`.

use std::sync::Arc;

use crate::category::{Computation, Fault};
use crate::value::{Shape, Value};

use super::{MachineState, Move, Rule, Tape, TuringProcess, BLANK, HALT};

/// Reason reported when a machine value has no rule for the scanned symbol.
pub const NO_RULE: &str = "no-rule";

fn sym_char(c: char) -> Value {
    Value::sym(c.encode_utf8(&mut [0; 4]))
}

fn char_of(v: &Value) -> Option<char> {
    let s = v.as_sym()?;
    let mut it = s.chars();
    let c = it.next()?;
    (it.next().is_none() && super::valid_symbol(c)).then_some(c)
}

fn list_of_cells(cells: impl Iterator<Item = char>) -> Value {
    let mut cells: Vec<char> = cells.collect();
    while cells.last() == Some(&BLANK) {
        cells.pop();
    }
    Value::list(cells.into_iter().map(sym_char))
}

/// Reads a canonical cell list: symbols only, no trailing blank.
fn cells_of_list(v: &Value) -> Option<Vec<char>> {
    let items = v.list_items()?;
    let cells: Option<Vec<char>> = items.into_iter().map(char_of).collect();
    let cells = cells?;
    (cells.last() != Some(&BLANK)).then_some(cells)
}

pub fn tape_to_value(w: &Tape) -> Value {
    let (lo, hi) = w.extent().unwrap_or((0, 0));
    let left = list_of_cells((lo.min(-1)..0).rev().map(|z| w.get(z)));
    let right = list_of_cells((1..=hi.max(1)).map(|z| w.get(z)));
    Value::pair(left, Value::pair(sym_char(w.read()), right))
}

/// Inverse of [`tape_to_value`]; `None` on anything that is not a canonical zipper.
pub fn tape_from_value(v: &Value) -> Option<Tape> {
    let (left, rest) = v.as_pair()?;
    let (head, right) = rest.as_pair()?;
    let left = cells_of_list(left)?;
    let right = cells_of_list(right)?;
    let head = char_of(head)?;
    let cells = left
        .into_iter()
        .enumerate()
        .map(|(i, c)| (-(i as i64) - 1, c))
        .chain(std::iter::once((0, head)))
        .chain(
            right
                .into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + 1, c)),
        );
    Some(Tape::from_cells(cells))
}

fn move_value(m: Move) -> Value {
    Value::sym(&m.letter().to_string())
}

fn rule_value(r: &Rule) -> Value {
    Value::list_tail(
        [
            Value::sym(&r.from),
            sym_char(r.read),
            Value::sym(&r.to),
            sym_char(r.write),
        ],
        move_value(r.dir),
    )
}

pub fn machine_to_value(tm: &TuringProcess) -> Value {
    let states = Value::list(tm.states().map(Value::sym));
    let alphabet = Value::list(tm.alphabet().iter().map(|&c| sym_char(c)));
    let rules = Value::list(tm.rules().iter().map(rule_value));
    Value::list_tail([states, alphabet, Value::sym(tm.start())], rules)
}

struct RuleView<'a> {
    from: &'a str,
    read: &'a Value,
    to: &'a Value,
    write: &'a Value,
    dir: Move,
}

fn rule_view(v: &Value) -> Option<RuleView<'_>> {
    let (from, rest) = v.as_pair()?;
    let (read, rest) = rest.as_pair()?;
    let (to, rest) = rest.as_pair()?;
    let (write, dir) = rest.as_pair()?;
    Some(RuleView {
        from: from.as_sym()?,
        read,
        to,
        write,
        dir: Move::from_letter(dir.as_sym()?)?,
    })
}

pub fn machine_from_value(v: &Value) -> Option<TuringProcess> {
    let (states, rest) = v.as_pair()?;
    let (alphabet, rest) = rest.as_pair()?;
    let (start, rules) = rest.as_pair()?;
    let alphabet: Option<Vec<char>> = alphabet.list_items()?.into_iter().map(char_of).collect();
    let rules: Option<Vec<Rule>> = rules
        .list_items()?
        .into_iter()
        .map(|r| {
            let r = rule_view(r)?;
            Some(Rule::new(
                r.from,
                char_of(r.read)?,
                r.to.as_sym()?,
                char_of(r.write)?,
                r.dir,
            ))
        })
        .collect();
    let tm = TuringProcess::new(start.as_sym()?, &alphabet?, &rules?).ok()?;
    // the state list must be exactly the one the printer produces
    let names: Option<Vec<&str>> = states
        .list_items()?
        .into_iter()
        .map(Value::as_sym)
        .collect();
    (names? == tm.states().collect::<Vec<_>>()).then_some(tm)
}

pub fn machine_state_to_value(ms: &MachineState) -> Value {
    Value::pair(machine_to_value(ms.process()), Value::sym(ms.state()))
}

pub fn machine_state_from_value(v: &Value) -> Option<MachineState> {
    let (m, q) = v.as_pair()?;
    MachineState::new(Arc::new(machine_from_value(m)?), q.as_sym()?).ok()
}

fn shape() -> Fault {
    Fault::stuck(crate::category::reason::SHAPE)
}

/// `((machine . q) . (left . (head . right)))` split into its parts.
struct Config<'a> {
    machine: &'a Value,
    state: &'a Value,
    left: &'a Value,
    head: &'a Value,
    right: &'a Value,
}

fn config(v: &Value) -> Result<Config<'_>, Fault> {
    let (ms, tape) = v.as_pair().ok_or_else(shape)?;
    let (machine, state) = ms.as_pair().ok_or_else(shape)?;
    let (left, rest) = tape.as_pair().ok_or_else(shape)?;
    let (head, right) = rest.as_pair().ok_or_else(shape)?;
    Ok(Config {
        machine,
        state,
        left,
        head,
        right,
    })
}

fn is_halt(state: &Value) -> Result<bool, Fault> {
    Ok(state.as_sym().ok_or_else(shape)? == HALT)
}

/// Finds the rule for `(q, σ)` by scanning the machine's rule list.
fn lookup<'a>(c: &Config<'a>) -> Result<RuleView<'a>, Fault> {
    let q = c.state.as_sym().ok_or_else(shape)?;
    let (_, rest) = c.machine.as_pair().ok_or_else(shape)?;
    let (_, rest) = rest.as_pair().ok_or_else(shape)?;
    let (_, mut rules) = rest.as_pair().ok_or_else(shape)?;
    while let Some((r, tail)) = rules.as_pair() {
        let r = rule_view(r).ok_or_else(shape)?;
        if r.from == q && r.read == c.head {
            return Ok(r);
        }
        rules = tail;
    }
    Err(Fault::stuck(NO_RULE))
}

fn push(cell: &Value, list: &Value) -> Value {
    if list.is_unit() && cell.as_sym() == Some("_") {
        Value::Unit
    } else {
        Value::pair(cell.clone(), list.clone())
    }
}

fn pop(list: &Value) -> (Value, Value) {
    match list.as_pair() {
        Some((x, rest)) => (x.clone(), rest.clone()),
        None => (sym_char(BLANK), Value::Unit),
    }
}

fn tm_step(v: &Value) -> Result<Value, Fault> {
    let c = config(v)?;
    if is_halt(c.state)? {
        return Ok(v.clone());
    }
    let r = lookup(&c)?;
    let tape = match r.dir {
        Move::Stay => Value::pair(
            c.left.clone(),
            Value::pair(r.write.clone(), c.right.clone()),
        ),
        Move::Left => {
            let (head, left) = pop(c.left);
            Value::pair(left, Value::pair(head, push(r.write, c.right)))
        }
        Move::Right => {
            let (head, right) = pop(c.right);
            Value::pair(push(r.write, c.left), Value::pair(head, right))
        }
    };
    Ok(Value::pair(
        Value::pair(c.machine.clone(), r.to.clone()),
        tape,
    ))
}

fn tm_move_delta(v: &Value) -> Result<Value, Fault> {
    let c = config(v)?;
    if is_halt(c.state)? {
        return Ok(Value::small_int(0));
    }
    Ok(Value::small_int(lookup(&c)?.dir.delta()))
}

/// `tm-step`, `tm-halted` and `tm-move-delta`, all on `(machine-state . tape)`.
pub fn primitives() -> Vec<Computation> {
    let cfg = || {
        Shape::pair(
            Shape::pair(Shape::pair(Shape::Any, Shape::Any), Shape::Sym),
            Shape::Any,
        )
    };
    vec![
        Computation::primitive("tm-step", cfg(), cfg(), tm_step),
        Computation::primitive("tm-halted", cfg(), Shape::Quote, |v| {
            Ok(Value::bool(is_halt(config(v)?.state)?))
        }),
        Computation::primitive("tm-move-delta", cfg(), Shape::Any, tm_move_delta),
    ]
}

#[cfg(test)]
mod tests {
    use super::super::library::*;
    use super::*;

    #[test]
    fn tape_values_round_trip() {
        for w in [
            Tape::blank(),
            Tape::from_literal("1"),
            Tape::from_literal("_1_1"),
            Tape::from_cells([(-3, '1'), (2, '0')]),
        ] {
            let v = tape_to_value(&w);
            assert_eq!(tape_from_value(&v), Some(w.clone()), "{v}");
        }
        assert_eq!(
            tape_to_value(&Tape::blank()).to_string(),
            "(() . ('_ . ()))"
        );
        // trailing blanks are not canonical
        let bad = Value::pair(
            Value::list([Value::sym("_")]),
            Value::pair(Value::sym("_"), Value::Unit),
        );
        assert_eq!(tape_from_value(&bad), None);
    }

    #[test]
    fn machine_values_round_trip() {
        for tm in [append_one(), halt_immediately(), spin(), unary_add()] {
            let v = machine_to_value(&tm);
            assert_eq!(machine_from_value(&v), Some(tm));
        }
    }

    #[test]
    fn step_primitive_matches_the_native_step() {
        let tm = Arc::new(unary_add());
        let step = primitives()
            .into_iter()
            .find(|c| c.name() == "tm-step")
            .unwrap();
        let mut ms = MachineState::initial(tm.clone());
        let mut w = Tape::from_literal("11011");
        let mut v = Value::pair(machine_state_to_value(&ms), tape_to_value(&w));
        for _ in 0..12 {
            (ms, w) = super::super::global_step(&ms, &w).unwrap();
            v = step.apply(v, 10).into_done().unwrap();
            assert_eq!(
                machine_state_from_value(v.as_pair().unwrap().0).unwrap(),
                ms
            );
            assert_eq!(tape_from_value(v.as_pair().unwrap().1), Some(w.clone()));
        }
        assert!(ms.is_halted());
    }

    #[test]
    fn missing_symbols_get_stuck() {
        let ms = MachineState::initial(Arc::new(append_one()));
        let v = Value::pair(
            machine_state_to_value(&ms),
            tape_to_value(&Tape::from_literal("z")),
        );
        let step = primitives().into_iter().next().unwrap();
        assert_eq!(
            step.apply(v, 10),
            crate::category::Outcome::Stuck(NO_RULE.into())
        );
    }
}
