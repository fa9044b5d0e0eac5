//! Turing processes `Q × Σ → Q × Σ × Θ`, their lift to tape configurations, the global
//! step over all machine states, and full evaluation (natively and through the program
//! calculus).
//!
//! Halting convention: a run stops when the *current* state is `HALT`. The transition
//! that enters `HALT` is applied in full, including its write and its move.

mod encoding;
pub mod format;
mod programs;
mod tape;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use encoding::{
    machine_from_value, machine_state_from_value, machine_state_to_value, machine_to_value,
    primitives, tape_from_value, tape_to_value, NO_RULE,
};
pub use programs::{adaptive_tm_program, run_program, run_via_program, tm_process, LoopCost};
pub(crate) use programs::{machine_state, registry, run_metered};
pub use tape::Tape;

/// The halting state `✓`.
pub const HALT: &str = "HALT";
/// The blank symbol `⊔`.
pub const BLANK: char = '_';

/// Head directions `◁ □ ▷`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }

    pub fn from_letter(c: &str) -> Option<Self> {
        match c {
            "L" => Some(Move::Left),
            "S" => Some(Move::Stay),
            "R" => Some(Move::Right),
            _ => None,
        }
    }

    pub const ALL: [Move; 3] = [Move::Left, Move::Stay, Move::Right];
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("no rule for state '{state}' reading {symbol:?}")]
    MissingRule { state: String, symbol: char },
    #[error("duplicate rule for state '{state}' reading {symbol:?}")]
    DuplicateRule { state: String, symbol: char },
    #[error("rules out of the halting state are fixed")]
    RuleFromHalt,
    #[error("state names must be nonempty symbols, got '{0}'")]
    BadStateName(String),
    #[error("tape symbols must be single letters, digits or one of _-+*/!?=:@$%&~^, got {0:?}")]
    BadSymbol(char),
    #[error("evaluation got stuck: {0}")]
    Stuck(String),
}

/// One line of a transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub from: String,
    pub read: char,
    pub to: String,
    pub write: char,
    pub dir: Move,
}

impl Rule {
    pub fn new(from: &str, read: char, to: &str, write: char, dir: Move) -> Self {
        Rule {
            from: from.into(),
            read,
            to: to.into(),
            write,
            dir,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Transition {
    pub next: usize,
    pub write: char,
    pub dir: Move,
}

/// A Turing process with a total transition function. State `0` is always `HALT`.
///
/// Equality is by name: same start state, same state and symbol sets, same table.
#[derive(Clone, Debug)]
pub struct TuringProcess {
    states: Vec<Arc<str>>,
    alphabet: Vec<char>,
    start: usize,
    delta: Vec<Transition>,
}

/// Tape symbols are single symbol characters, so they survive the value encoding.
pub(crate) fn valid_symbol(c: char) -> bool {
    crate::syntax::is_symbol_char(c)
}

impl TuringProcess {
    /// Builds a machine from its rules. States are collected from `start` and the rules;
    /// the blank is always part of the alphabet; every non-halting state needs a rule
    /// for every symbol.
    pub fn new(start: &str, alphabet: &[char], rules: &[Rule]) -> Result<Self, MachineError> {
        let mut syms: Vec<char> = Vec::new();
        for &c in alphabet.iter().chain(std::iter::once(&BLANK)) {
            if !valid_symbol(c) {
                return Err(MachineError::BadSymbol(c));
            }
            if !syms.contains(&c) {
                syms.push(c);
            }
        }
        let mut states: Vec<Arc<str>> = vec![Arc::from(HALT)];
        let mut intern = |name: &str| -> Result<usize, MachineError> {
            if !crate::syntax::is_symbol(name) {
                return Err(MachineError::BadStateName(name.into()));
            }
            Ok(match states.iter().position(|s| &**s == name) {
                Some(i) => i,
                None => {
                    states.push(Arc::from(name));
                    states.len() - 1
                }
            })
        };
        // sources first: every live state owns rows, so printing rules in table order
        // and reading them back reproduces the numbering
        let start = intern(start)?;
        for r in rules {
            intern(&r.from)?;
        }
        let mut resolved = Vec::with_capacity(rules.len());
        for r in rules {
            let from = intern(&r.from)?;
            let to = intern(&r.to)?;
            resolved.push((from, r, to));
        }
        let width = syms.len();
        let mut table: Vec<Option<Transition>> = vec![None; states.len() * width];
        for (from, r, to) in resolved {
            if from == 0 {
                return Err(MachineError::RuleFromHalt);
            }
            let si = syms
                .iter()
                .position(|&c| c == r.read)
                .ok_or(MachineError::UnknownSymbol(r.read))?;
            if !syms.contains(&r.write) {
                return Err(MachineError::UnknownSymbol(r.write));
            }
            let slot = &mut table[from * width + si];
            if slot.is_some() {
                return Err(MachineError::DuplicateRule {
                    state: r.from.clone(),
                    symbol: r.read,
                });
            }
            *slot = Some(Transition {
                next: to,
                write: r.write,
                dir: r.dir,
            });
        }
        let mut delta = Vec::with_capacity(table.len());
        for (i, t) in table.into_iter().enumerate() {
            let (q, si) = (i / width, i % width);
            delta.push(match (q, t) {
                (0, _) => Transition {
                    next: 0,
                    write: syms[si],
                    dir: Move::Stay,
                },
                (_, Some(t)) => t,
                (_, None) => {
                    return Err(MachineError::MissingRule {
                        state: states[q].to_string(),
                        symbol: syms[si],
                    })
                }
            });
        }
        Ok(TuringProcess {
            states,
            alphabet: syms,
            start,
            delta,
        })
    }

    /// State names, `HALT` first.
    pub fn states(&self) -> impl DoubleEndedIterator<Item = &str> + '_ {
        self.states.iter().map(|s| &**s)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn start(&self) -> &str {
        &self.states[self.start]
    }

    pub fn state_index(&self, q: &str) -> Option<usize> {
        self.states.iter().position(|s| &**s == q)
    }

    pub fn state_name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub(crate) fn start_index(&self) -> usize {
        self.start
    }

    pub(crate) fn transition(&self, q: usize, sym: char) -> Result<Transition, MachineError> {
        let si = self
            .alphabet
            .iter()
            .position(|&c| c == sym)
            .ok_or(MachineError::UnknownSymbol(sym))?;
        Ok(self.delta[q * self.alphabet.len() + si])
    }

    /// `⟨ρ_Q, ρ_Σ, ρ_Θ⟩(q, σ)`
    pub fn delta(&self, q: &str, sym: char) -> Result<(&str, char, Move), MachineError> {
        let qi = self
            .state_index(q)
            .ok_or_else(|| MachineError::UnknownState(q.into()))?;
        let t = self.transition(qi, sym)?;
        Ok((self.state_name(t.next), t.write, t.dir))
    }

    /// The explicit rules (everything except the fixed halting rules), table order.
    pub fn rules(&self) -> Vec<Rule> {
        let width = self.alphabet.len();
        self.delta
            .iter()
            .enumerate()
            .skip(width)
            .map(|(i, t)| Rule {
                from: self.states[i / width].to_string(),
                read: self.alphabet[i % width],
                to: self.states[t.next].to_string(),
                write: t.write,
                dir: t.dir,
            })
            .collect()
    }

    /// Every symbol of `tape` is in the alphabet.
    pub fn accepts_tape(&self, tape: &Tape) -> bool {
        tape.cells().all(|(_, c)| self.alphabet.contains(&c))
    }

    /// Index-level `ρ̃`: overwrite, re-index, return the next state.
    pub(crate) fn step_in_place(
        &self,
        q: usize,
        tape: &mut Tape,
    ) -> Result<(usize, Move), MachineError> {
        let t = self.transition(q, tape.read())?;
        tape.write(t.write);
        tape.shift(t.dir);
        Ok((t.next, t.dir))
    }

    /// `ρ̃(q, w) = (ρ_Q(q, w(0)), w')`.
    pub fn step(&self, q: &str, tape: &Tape) -> Result<(String, Tape), MachineError> {
        let qi = self
            .state_index(q)
            .ok_or_else(|| MachineError::UnknownState(q.into()))?;
        let mut w = tape.clone();
        let (next, _) = self.step_in_place(qi, &mut w)?;
        Ok((self.state_name(next).to_string(), w))
    }
}

impl PartialEq for TuringProcess {
    fn eq(&self, other: &Self) -> bool {
        let names = |t: &TuringProcess| {
            t.states
                .iter()
                .cloned()
                .collect::<std::collections::BTreeSet<_>>()
        };
        let syms = |t: &TuringProcess| {
            t.alphabet
                .iter()
                .copied()
                .collect::<std::collections::BTreeSet<_>>()
        };
        let table = |t: &TuringProcess| {
            t.rules()
                .into_iter()
                .map(|r| ((r.from, r.read), (r.to, r.write, r.dir)))
                .collect::<std::collections::BTreeMap<_, _>>()
        };
        self.start() == other.start()
            && names(self) == names(other)
            && syms(self) == syms(other)
            && table(self) == table(other)
    }
}

impl Eq for TuringProcess {}

/// An element `⟨ρ, q⟩` of the aggregated state space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    process: Arc<TuringProcess>,
    state: usize,
}

impl MachineState {
    pub fn new(process: Arc<TuringProcess>, q: &str) -> Result<Self, MachineError> {
        let state = process
            .state_index(q)
            .ok_or_else(|| MachineError::UnknownState(q.into()))?;
        Ok(MachineState { process, state })
    }

    pub fn initial(process: Arc<TuringProcess>) -> Self {
        let state = process.start_index();
        MachineState { process, state }
    }

    pub fn process(&self) -> &Arc<TuringProcess> {
        &self.process
    }

    pub fn state(&self) -> &str {
        self.process.state_name(self.state)
    }

    pub fn is_halted(&self) -> bool {
        self.state == 0
    }
}

/// `p(⟨ρ, q⟩, w) = (⟨ρ, q'⟩, w')`. The process component never changes.
pub fn global_step(ms: &MachineState, tape: &Tape) -> Result<(MachineState, Tape), MachineError> {
    let mut w = tape.clone();
    let (next, _) = ms.process.step_in_place(ms.state, &mut w)?;
    Ok((
        MachineState {
            process: ms.process.clone(),
            state: next,
        },
        w,
    ))
}

/// Result of a fuel-bounded run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Halting<T> {
    Halted(T),
    Diverged(u64),
}

impl<T> Halting<T> {
    pub fn halted(&self) -> Option<&T> {
        match self {
            Halting::Halted(t) => Some(t),
            Halting::Diverged(_) => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, Halting::Halted(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Halting<U> {
        match self {
            Halting::Halted(t) => Halting::Halted(f(t)),
            Halting::Diverged(n) => Halting::Diverged(n),
        }
    }
}

/// `ō(q, w)`: steps until the current state is `HALT`, at most `fuel` transitions.
pub fn run(
    tm: &TuringProcess,
    q: &str,
    tape: &Tape,
    fuel: u64,
) -> Result<Halting<Tape>, MachineError> {
    let mut state = tm
        .state_index(q)
        .ok_or_else(|| MachineError::UnknownState(q.into()))?;
    let mut w = tape.clone();
    let mut spent = 0;
    while state != 0 {
        if spent == fuel {
            return Ok(Halting::Diverged(fuel));
        }
        state = tm.step_in_place(state, &mut w)?.0;
        spent += 1;
    }
    Ok(Halting::Halted(w))
}

/// Small machines used by tests, the CLI and the check suites.
pub mod library {
    use super::{Move, Rule, TuringProcess};

    /// Walks right over `1`s and writes a `1` on the first blank: unary successor.
    pub fn append_one() -> TuringProcess {
        TuringProcess::new(
            "q0",
            &['1'],
            &[
                Rule::new("q0", '1', "q0", '1', Move::Right),
                Rule::new("q0", '_', "HALT", '1', Move::Stay),
            ],
        )
        .expect("well-formed")
    }

    /// Starts in `HALT`.
    pub fn halt_immediately() -> TuringProcess {
        TuringProcess::new("HALT", &['0', '1'], &[]).expect("well-formed")
    }

    /// Loops forever without moving.
    pub fn spin() -> TuringProcess {
        TuringProcess::new("q0", &[], &[Rule::new("q0", '_', "q0", '_', Move::Stay)])
            .expect("well-formed")
    }

    /// Unary addition on `1^a 0 1^b`: turns the separator into `1`, walks to the end and
    /// erases the last `1`.
    pub fn unary_add() -> TuringProcess {
        TuringProcess::new(
            "scan",
            &['0', '1'],
            &[
                Rule::new("scan", '1', "scan", '1', Move::Right),
                Rule::new("scan", '0', "tail", '1', Move::Right),
                Rule::new("scan", '_', "HALT", '_', Move::Stay),
                Rule::new("tail", '1', "tail", '1', Move::Right),
                Rule::new("tail", '0', "HALT", '0', Move::Stay),
                Rule::new("tail", '_', "erase", '_', Move::Left),
                Rule::new("erase", '1', "HALT", '_', Move::Stay),
                Rule::new("erase", '0', "HALT", '0', Move::Stay),
                Rule::new("erase", '_', "HALT", '_', Move::Stay),
            ],
        )
        .expect("well-formed")
    }
}
