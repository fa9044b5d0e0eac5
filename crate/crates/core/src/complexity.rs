//! Time and space meters for Turing processes.
//!
//! Both meters follow the run's halting convention (stop when the current state is
//! `HALT`) and exist twice: as native counters, and as Kleene fixed programs that carry
//! their counters through the program calculus.
//!
//! Space is reported as `r − ℓ`, the spread between the lowest and highest head offset,
//! which is one less than the number of distinct cells visited.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed};

use crate::kleene::kleene_fix;
use crate::prog::Prog;
use crate::turing::{
    machine_state, run_metered, tape_to_value, Halting, LoopCost, MachineError, Move, Tape,
    TuringProcess,
};
use crate::value::Value;

/// Integer types usable as head-offset counters.
pub trait Counter: Clone + Ord + Signed + FromPrimitive + fmt::Debug + fmt::Display {}

impl<T: Clone + Ord + Signed + FromPrimitive + fmt::Debug + fmt::Display> Counter for T {}

fn lift<I: Counter>(k: i64) -> I {
    I::from_i64(k).expect("small constants fit every counter type")
}

/// How the space meter treats the input word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Counters start at 0; only cells the head reaches count.
    Visited,
    /// Counters start at the extent of the input word.
    Input,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Visited => "visited",
            Convention::Input => "input",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "visited" => Ok(Convention::Visited),
            "input" => Ok(Convention::Input),
            _ => Err(format!(
                "unknown convention '{s}' (expected visited or input)"
            )),
        }
    }
}

/// `(ℓ, m, r)`: lowest, current and highest head offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceCounters<I = BigInt> {
    pub ell: I,
    pub m: I,
    pub r: I,
}

impl<I: Counter> SpaceCounters<I> {
    pub fn origin() -> Self {
        SpaceCounters {
            ell: I::zero(),
            m: I::zero(),
            r: I::zero(),
        }
    }

    /// Initial counters. Under [`Convention::Input`] they start at `(w_ℓ, 0, w_r)`, widened
    /// to include the head cell so that `ℓ ≤ m ≤ r` holds; the blank tape gives `(0, 0, 0)`.
    pub fn initial(w: &Tape, convention: Convention) -> Self {
        match (convention, w.extent()) {
            (Convention::Input, Some((lo, hi))) => SpaceCounters {
                ell: lift(lo.min(0)),
                m: I::zero(),
                r: lift(hi.max(0)),
            },
            _ => Self::origin(),
        }
    }

    /// The `s̃` update for one head move.
    pub fn update(&mut self, mv: Move) {
        match mv {
            Move::Left if self.m == self.ell => self.ell = self.ell.clone() - I::one(),
            Move::Right if self.m == self.r => self.r = self.r.clone() + I::one(),
            _ => {}
        }
        self.m = self.m.clone() + lift(mv.delta());
    }

    /// `r − ℓ`
    pub fn span(&self) -> I {
        self.r.clone() - self.ell.clone()
    }
}

impl SpaceCounters<BigInt> {
    fn to_value(&self) -> Value {
        Value::list_tail(
            [Value::int(&self.ell), Value::int(&self.m)],
            Value::int(&self.r),
        )
    }
}

/// `t̄(q, w)`: transitions applied before the current state is `HALT`.
pub fn time(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
) -> Result<Halting<u64>, MachineError> {
    let mut state = tm
        .state_index(q)
        .ok_or_else(|| MachineError::UnknownState(q.into()))?;
    let mut tape = w.clone();
    let mut i = 0;
    while state != 0 {
        if i == fuel {
            return Ok(Halting::Diverged(fuel));
        }
        state = tm.step_in_place(state, &mut tape)?.0;
        i += 1;
    }
    Ok(Halting::Halted(i))
}

/// `s̄(q, w)` with arbitrary-precision counters.
pub fn space(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
    convention: Convention,
) -> Result<Halting<BigInt>, MachineError> {
    space_with(tm, q, w, fuel, convention)
}

/// `s̄(q, w)` over any counter type.
pub fn space_with<I: Counter>(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
    convention: Convention,
) -> Result<Halting<I>, MachineError> {
    let mut state = tm
        .state_index(q)
        .ok_or_else(|| MachineError::UnknownState(q.into()))?;
    let mut tape = w.clone();
    let mut counters = SpaceCounters::<I>::initial(w, convention);
    let mut spent = 0;
    while state != 0 {
        if spent == fuel {
            return Ok(Halting::Diverged(fuel));
        }
        let (next, mv) = tm.step_in_place(state, &mut tape)?;
        counters.update(mv);
        state = next;
        spent += 1;
    }
    Ok(Halting::Halted(counters.span()))
}

/// One applied transition: the state and head offset it started from, the symbol it read
/// and the move it made. Offsets are relative to the starting head position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub state: String,
    pub offset: i64,
    pub read: char,
    pub dir: Move,
}

/// Transition log of a run, truncated at the fuel bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    /// Head offset after the last entry.
    pub final_offset: i64,
    pub halted: bool,
}

impl Trace {
    /// Highest minus lowest head offset over the whole run.
    pub fn span(&self) -> i64 {
        let offsets = self
            .entries
            .iter()
            .map(|e| e.offset)
            .chain([0, self.final_offset]);
        let (lo, hi) = offsets.fold((i64::MAX, i64::MIN), |(lo, hi), z| (lo.min(z), hi.max(z)));
        hi - lo
    }

    /// Tab-separated, one header line then one line per transition.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("step\tstate\toffset\tread\tmove\n");
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{i}\t{}\t{}\t{}\t{}\n",
                e.state, e.offset, e.read, e.dir
            ));
        }
        out
    }
}

pub fn meter_trace(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
) -> Result<Trace, MachineError> {
    let mut state = tm
        .state_index(q)
        .ok_or_else(|| MachineError::UnknownState(q.into()))?;
    let mut tape = w.clone();
    let mut entries = Vec::new();
    let mut offset = 0;
    while state != 0 && (entries.len() as u64) < fuel {
        let read = tape.read();
        let (next, dir) = tm.step_in_place(state, &mut tape)?;
        entries.push(TraceEntry {
            state: tm.state_name(state).to_string(),
            offset,
            read,
            dir,
        });
        offset += dir.delta();
        state = next;
    }
    Ok(Trace {
        entries,
        final_offset: offset,
        halted: state == 0,
    })
}

fn eq(a: Prog, b: Prog) -> Prog {
    Prog::seq(Prog::pairing(a, b), Prog::prim("eq"))
}

fn apply_prim(name: &str, arg: Prog) -> Prog {
    Prog::seq(arg, Prog::prim(name))
}

/// `g(self, ((ms . w) . i)) = if halted then i else {self}(tm-step(ms . w) . i + 1)`
fn time_body() -> Prog {
    let cfg = Prog::path(&[1, 0]);
    let i = Prog::path(&[1, 1]);
    Prog::if_then_else(
        apply_prim("tm-halted", cfg.clone()),
        i.clone(),
        Prog::call(
            Prog::Fst,
            Prog::pairing(apply_prim("tm-step", cfg), apply_prim("succ", i)),
        ),
    )
}

/// `g(self, ((ms . w) . (ℓ . (m . r))))`: the `s̃` update on every transition, `r − ℓ`
/// on halting. Both arms of every counter update are computed and one is selected, so
/// an iteration costs the same whatever the data.
fn space_body() -> Prog {
    let cfg = Prog::path(&[1, 0]);
    let ell = Prog::path(&[1, 1, 0]);
    let m = Prog::path(&[1, 1, 1, 0]);
    let r = Prog::path(&[1, 1, 1, 1]);
    let delta = apply_prim("tm-move-delta", cfg.clone());
    let ell_next = Prog::select(
        Prog::and(
            eq(m.clone(), ell.clone()),
            eq(delta.clone(), Prog::lit(Value::small_int(-1))),
        ),
        apply_prim("int-dec", ell.clone()),
        ell.clone(),
    );
    let m_next = apply_prim("int-add", Prog::pairing(m.clone(), delta.clone()));
    let r_next = Prog::select(
        Prog::and(eq(m, r.clone()), eq(delta, Prog::lit(Value::small_int(1)))),
        apply_prim("int-inc", r.clone()),
        r.clone(),
    );
    Prog::if_then_else(
        apply_prim("tm-halted", cfg.clone()),
        apply_prim("int-sub", Prog::pairing(r, ell)),
        Prog::call(
            Prog::Fst,
            Prog::pairing(
                apply_prim("tm-step", cfg),
                Prog::pairing(ell_next, Prog::pairing(m_next, r_next)),
            ),
        ),
    )
}

/// `w ↦ {T̃}((⟨ρ, q⟩ . w) . 0)`
pub fn time_program(tm: &TuringProcess, q: &str) -> Result<Prog, MachineError> {
    let start = Prog::pairing(
        Prog::pairing(Prog::lit(machine_state(tm, q)?), Prog::Id),
        Prog::lit(Value::nat(0u32)),
    );
    Ok(Prog::seq(start, kleene_fix(&time_body())))
}

/// `w ↦ {S̃}((⟨ρ, q⟩ . w) . (ℓ . (m . r)))` with the given initial counters.
pub fn space_program(
    tm: &TuringProcess,
    q: &str,
    counters: &SpaceCounters,
) -> Result<Prog, MachineError> {
    let start = Prog::pairing(
        Prog::pairing(Prog::lit(machine_state(tm, q)?), Prog::Id),
        Prog::lit(counters.to_value()),
    );
    Ok(Prog::seq(start, kleene_fix(&space_body())))
}

fn time_cost() -> LoopCost {
    static COST: OnceLock<LoopCost> = OnceLock::new();
    *COST.get_or_init(|| {
        LoopCost::calibrate(&|tm, q, w| {
            (time_program(tm, q).expect("calibration"), tape_to_value(w))
        })
    })
}

fn space_cost() -> LoopCost {
    static COST: OnceLock<LoopCost> = OnceLock::new();
    *COST.get_or_init(|| {
        LoopCost::calibrate(&|tm, q, w| {
            (
                space_program(tm, q, &SpaceCounters::origin()).expect("calibration"),
                tape_to_value(w),
            )
        })
    })
}

fn not_a_count(v: &Value) -> MachineError {
    MachineError::Stuck(format!("meter returned {v}"))
}

/// [`time`] computed by the Kleene fixed program, `fuel` counted in transitions.
pub fn time_via_program(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
) -> Result<Halting<u64>, MachineError> {
    let out = run_metered(&time_program(tm, q)?, tape_to_value(w), fuel, time_cost())?;
    match out {
        Halting::Halted(v) => v
            .as_u64()
            .map(Halting::Halted)
            .ok_or_else(|| not_a_count(&v)),
        Halting::Diverged(n) => Ok(Halting::Diverged(n)),
    }
}

/// [`space`] computed by the Kleene fixed program, `fuel` counted in transitions.
pub fn space_via_program(
    tm: &TuringProcess,
    q: &str,
    w: &Tape,
    fuel: u64,
    convention: Convention,
) -> Result<Halting<BigInt>, MachineError> {
    let p = space_program(tm, q, &SpaceCounters::initial(w, convention))?;
    match run_metered(&p, tape_to_value(w), fuel, space_cost())? {
        Halting::Halted(v) => v
            .as_int()
            .filter(|n| !n.is_negative())
            .map(Halting::Halted)
            .ok_or_else(|| not_a_count(&v)),
        Halting::Diverged(n) => Ok(Halting::Diverged(n)),
    }
}
