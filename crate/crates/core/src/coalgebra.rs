//! Mealy machines `X × A → X × B`, their behaviours in the final machine, and exponents
//! carved out of the final machine by splitting an idempotent.
//!
//! The final machine's carrier `[A⁺, B]` is infinite; here it is truncated to depth `d`:
//! a [`BehaviorTrie`] records the output for every nonempty word of length at most `d`.
//! Every statement about anamorphisms is checked as a depth-indexed one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MealyError {
    #[error("behaviours are defined on nonempty words only")]
    EmptyWord,
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("no rule for state '{state}' on input '{input}'")]
    MissingRule { state: String, input: String },
    #[error("duplicate rule for state '{state}' on input '{input}'")]
    DuplicateRule { state: String, input: String },
    #[error("{0} must be nonempty")]
    Empty(&'static str),
    #[error("malformed machine text: {0}")]
    Syntax(String),
    #[error("the idempotent does not hold at depth {0}")]
    NotIdempotent(usize),
    #[error("line {line}: {source}")]
    At {
        line: usize,
        source: Box<MealyError>,
    },
}

/// A finite, total Mealy machine over named states and symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    /// `table[x * |A| + a] = (x', b)`
    table: Vec<(usize, usize)>,
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn index_of(names: &[String], kind: &'static str, name: &str) -> Result<usize, MealyError> {
    names
        .iter()
        .position(|s| s == name)
        .ok_or_else(|| MealyError::Unknown {
            kind,
            name: name.into(),
        })
}

impl MealyMachine {
    pub fn new(
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        rules: &[(&str, &str, &str, &str)],
    ) -> Result<Self, MealyError> {
        for (set, what) in [
            (&states, "states"),
            (&inputs, "inputs"),
            (&outputs, "outputs"),
        ] {
            if set.is_empty() {
                return Err(MealyError::Empty(what));
            }
        }
        let mut table = vec![None; states.len() * inputs.len()];
        for (x, a, y, b) in rules {
            let (xi, ai) = (
                index_of(&states, "state", x)?,
                index_of(&inputs, "input", a)?,
            );
            let entry = (
                index_of(&states, "state", y)?,
                index_of(&outputs, "output", b)?,
            );
            let slot = &mut table[xi * inputs.len() + ai];
            if slot.is_some() {
                return Err(MealyError::DuplicateRule {
                    state: x.to_string(),
                    input: a.to_string(),
                });
            }
            *slot = Some(entry);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| MealyError::MissingRule {
                    state: states[i / inputs.len()].clone(),
                    input: inputs[i % inputs.len()].clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(MealyMachine {
            states,
            inputs,
            outputs,
            table,
        })
    }

    /// States `x0 …`, symbols `0 …`, step given on indices.
    pub fn from_fn(
        states: usize,
        inputs: usize,
        outputs: usize,
        f: impl Fn(usize, usize) -> (usize, usize),
    ) -> Self {
        assert!(
            states > 0 && inputs > 0 && outputs > 0,
            "machines need nonempty sets"
        );
        let table = (0..states * inputs)
            .map(|i| {
                let (y, b) = f(i / inputs, i % inputs);
                assert!(y < states && b < outputs, "step out of range");
                (y, b)
            })
            .collect();
        MealyMachine {
            states: numbered("x", states),
            inputs: numbered("", inputs),
            outputs: numbered("", outputs),
            table,
        }
    }

    /// The machine whose table is the base-`|X|·|B|` digits of `code`.
    pub fn from_index(states: usize, inputs: usize, outputs: usize, mut code: u64) -> Self {
        let radix = (states * outputs) as u64;
        let digits: Vec<u64> = (0..states * inputs)
            .map(|_| {
                let d = code % radix;
                code /= radix;
                d
            })
            .collect();
        Self::from_fn(states, inputs, outputs, |x, a| {
            let d = digits[x * inputs + a] as usize;
            (d / outputs, d % outputs)
        })
    }

    /// Number of distinct machines [`from_index`](Self::from_index) enumerates.
    pub fn count(states: usize, inputs: usize, outputs: usize) -> u64 {
        ((states * outputs) as u64).pow((states * inputs) as u32)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn state_index(&self, name: &str) -> Result<usize, MealyError> {
        index_of(&self.states, "state", name)
    }

    pub fn input_index(&self, name: &str) -> Result<usize, MealyError> {
        index_of(&self.inputs, "input", name)
    }

    /// `⟨ξ₀, ξ₁⟩(x, a)`
    pub fn step(&self, x: usize, a: usize) -> (usize, usize) {
        self.table[x * self.inputs.len() + a]
    }

    /// Outputs emitted while consuming `word` from `x`.
    pub fn output_trace(&self, x: usize, word: &[usize]) -> Vec<usize> {
        let mut state = x;
        word.iter()
            .map(|&a| {
                let (y, b) = self.step(state, a);
                state = y;
                b
            })
            .collect()
    }

    /// `⟨⟨m⟩⟩(x)(word)`: the output at the last letter, a left fold over the word.
    pub fn behavior(&self, x: usize, word: &[usize]) -> Result<usize, MealyError> {
        let (&last, init) = word.split_last().ok_or(MealyError::EmptyWord)?;
        let state = init.iter().fold(x, |s, &a| self.step(s, a).0);
        Ok(self.step(state, last).1)
    }

    /// [`behavior`](Self::behavior) on names.
    pub fn behavior_of(&self, x: &str, word: &[&str]) -> Result<&str, MealyError> {
        let x = self.state_index(x)?;
        let word: Vec<usize> = word
            .iter()
            .map(|a| self.input_index(a))
            .collect::<Result<_, _>>()?;
        Ok(&self.outputs[self.behavior(x, &word)?])
    }

    pub fn unfold(&self, x: usize, depth: usize) -> BehaviorTrie {
        BehaviorTrie::unfold(self.inputs.len(), depth, x, |s, a| self.step(*s, a))
    }

    /// Bounded bisimilarity by partition refinement: `x` and `y` cannot be told apart by
    /// any word of length at most `depth`.
    pub fn bisimilar(&self, x: usize, y: usize, depth: usize) -> bool {
        let n = self.states.len();
        let mut class = vec![0usize; n];
        for _ in 0..depth {
            let mut signatures: BTreeMap<Vec<(usize, usize)>, usize> = BTreeMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let sig: Vec<(usize, usize)> = (0..self.inputs.len())
                        .map(|a| {
                            let (t, b) = self.step(s, a);
                            (b, class[t])
                        })
                        .collect();
                    let k = signatures.len();
                    *signatures.entry(sig).or_insert(k)
                })
                .collect();
            class = next;
        }
        class[x] == class[y]
    }
}

/// `mealy states: … / inputs: … / outputs: … / rule: x a -> x' b / …`
impl fmt::Display for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mealy states: {} / inputs: {} / outputs: {}",
            self.states.join(" "),
            self.inputs.join(" "),
            self.outputs.join(" ")
        )?;
        for (i, &(y, b)) in self.table.iter().enumerate() {
            let (x, a) = (i / self.inputs.len(), i % self.inputs.len());
            write!(
                f,
                " / rule: {} {} -> {} {}",
                self.states[x], self.inputs[a], self.states[y], self.outputs[b]
            )?;
        }
        Ok(())
    }
}

/// Segments may be separated by `/` or by newlines; `#` starts a comment.
impl FromStr for MealyMachine {
    type Err = MealyError;

    /// Errors come wrapped in [`MealyError::At`] with the offending line.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let at = |line: usize, e: MealyError| MealyError::At {
            line,
            source: Box::new(e),
        };
        let syntax = |line: usize, msg: String| at(line, MealyError::Syntax(msg));
        let mut seen_header = false;
        let mut sets: BTreeMap<&str, (usize, Vec<String>)> = BTreeMap::new();
        let mut rules: Vec<(usize, [String; 4])> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let mut content = raw.split('#').next().unwrap_or("").trim();
            if !seen_header && !content.is_empty() {
                content = content
                    .strip_prefix("mealy")
                    .ok_or_else(|| syntax(line, "expected leading 'mealy'".into()))?;
                seen_header = true;
            }
            for seg in content.split('/').map(str::trim).filter(|s| !s.is_empty()) {
                let (key, rest) = seg
                    .split_once(':')
                    .ok_or_else(|| syntax(line, format!("segment '{seg}' has no ':'")))?;
                let toks: Vec<&str> = rest.split_whitespace().collect();
                match key.trim() {
                    k @ ("states" | "inputs" | "outputs") => {
                        let names = toks.iter().map(|s| s.to_string()).collect();
                        if sets.insert(k, (line, names)).is_some() {
                            return Err(syntax(line, format!("'{k}' declared twice")));
                        }
                    }
                    "rule" => match toks[..] {
                        [x, a, "->", y, b] => {
                            rules.push((line, [x.into(), a.into(), y.into(), b.into()]))
                        }
                        _ => {
                            return Err(syntax(
                                line,
                                format!("rule '{}' is not 'x a -> y b'", rest.trim()),
                            ))
                        }
                    },
                    other => return Err(syntax(line, format!("unknown key '{other}'"))),
                }
            }
        }
        let last = text.lines().count().max(1);
        if !seen_header {
            return Err(syntax(last, "expected leading 'mealy'".into()));
        }
        let mut take = |k: &'static str| {
            sets.remove(k)
                .ok_or_else(|| syntax(last, format!("missing '{k}:'")))
        };
        let ((state_line, states), (_, inputs), (_, outputs)) =
            (take("states")?, take("inputs")?, take("outputs")?);
        let refs: Vec<(&str, &str, &str, &str)> = rules
            .iter()
            .map(|(_, [x, a, y, b])| (x.as_str(), a.as_str(), y.as_str(), b.as_str()))
            .collect();
        MealyMachine::new(states, inputs, outputs, &refs).map_err(|e| {
            let line = match &e {
                MealyError::Unknown { name, .. } => rules
                    .iter()
                    .find(|(_, r)| r.contains(name))
                    .map(|(l, _)| *l),
                MealyError::DuplicateRule { state, input } => rules
                    .iter()
                    .filter(|(_, r)| &r[0] == state && &r[1] == input)
                    .nth(1)
                    .map(|(l, _)| *l),
                _ => None,
            };
            at(line.unwrap_or(state_line), e)
        })
    }
}

/// A behaviour `A⁺ → B` truncated to words of length at most `depth`.
///
/// Words are numbered as nodes of the complete `|A|`-ary tree: the empty word is node 0
/// and `w·a` is node `n·idx(w) + a + 1`. `outputs[i - 1]` is the value at node `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BehaviorTrie {
    arity: usize,
    depth: usize,
    outputs: Vec<usize>,
}

/// Number of nonempty words of length at most `depth` over `arity` letters.
pub fn word_count(arity: usize, depth: usize) -> usize {
    (1..=depth).map(|k| arity.pow(k as u32)).sum()
}

impl BehaviorTrie {
    /// The anamorphism of any coalgebra `step` at `x`, truncated to `depth`.
    pub fn unfold<S: Clone>(
        arity: usize,
        depth: usize,
        x: S,
        step: impl Fn(&S, usize) -> (S, usize),
    ) -> Self {
        let mut outputs = Vec::with_capacity(word_count(arity, depth));
        let mut layer = vec![x];
        for k in 0..depth {
            let mut next = Vec::with_capacity(layer.len() * arity);
            for s in &layer {
                for a in 0..arity {
                    let (t, b) = step(s, a);
                    outputs.push(b);
                    if k + 1 < depth {
                        next.push(t);
                    }
                }
            }
            layer = next;
        }
        BehaviorTrie {
            arity,
            depth,
            outputs,
        }
    }

    /// The trie with the given outputs, listed by increasing word length then
    /// lexicographically.
    pub fn from_outputs(arity: usize, depth: usize, outputs: Vec<usize>) -> Self {
        assert_eq!(
            outputs.len(),
            word_count(arity, depth),
            "wrong number of outputs"
        );
        BehaviorTrie {
            arity,
            depth,
            outputs,
        }
    }

    /// Every trie over `arity` inputs and `codomain` outputs, in a fixed order.
    pub fn enumerate(
        arity: usize,
        codomain: usize,
        depth: usize,
    ) -> impl Iterator<Item = BehaviorTrie> {
        let len = word_count(arity, depth);
        let total = (codomain as u64)
            .checked_pow(len as u32)
            .expect("trie space too large to enumerate");
        (0..total).map(move |mut code| {
            let outputs = (0..len)
                .map(|_| {
                    let d = (code % codomain as u64) as usize;
                    code /= codomain as u64;
                    d
                })
                .collect();
            BehaviorTrie {
                arity,
                depth,
                outputs,
            }
        })
    }

    pub fn random(arity: usize, codomain: usize, depth: usize, rng: &mut impl Rng) -> Self {
        let outputs = (0..word_count(arity, depth))
            .map(|_| rng.gen_range(0..codomain))
            .collect();
        BehaviorTrie {
            arity,
            depth,
            outputs,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn node(&self, word: &[usize]) -> Option<usize> {
        if word.is_empty() || word.len() > self.depth || word.iter().any(|&a| a >= self.arity) {
            return None;
        }
        Some(word.iter().fold(0, |i, &a| i * self.arity + a + 1))
    }

    /// The value at a nonempty word of length at most `depth`.
    pub fn value(&self, word: &[usize]) -> Option<usize> {
        self.node(word).map(|i| self.outputs[i - 1])
    }

    /// The first-step response to `a`.
    pub fn output(&self, a: usize) -> usize {
        self.value(&[a]).expect("depth is positive")
    }

    /// The behaviour after consuming `a`, one level shallower.
    pub fn child(&self, a: usize) -> BehaviorTrie {
        assert!(self.depth > 0 && a < self.arity);
        let mut outputs = Vec::with_capacity(word_count(self.arity, self.depth - 1));
        // nodes below a·… sit in contiguous runs, one run per level
        let mut lo = a + 1;
        let mut width = 1;
        for _ in 1..self.depth {
            lo = lo * self.arity + 1;
            width *= self.arity;
            outputs.extend_from_slice(&self.outputs[lo - 1..lo - 1 + width]);
        }
        BehaviorTrie {
            arity: self.arity,
            depth: self.depth - 1,
            outputs,
        }
    }

    pub fn truncate(&self, depth: usize) -> BehaviorTrie {
        let depth = depth.min(self.depth);
        BehaviorTrie {
            arity: self.arity,
            depth,
            outputs: self.outputs[..word_count(self.arity, depth)].to_vec(),
        }
    }

    /// Nested rendering `{a↦(b, {…}), …}`.
    pub fn render(&self) -> String {
        if self.depth == 0 {
            return "{}".into();
        }
        let parts: Vec<String> = (0..self.arity)
            .map(|a| {
                let child = self.child(a);
                if child.depth == 0 {
                    format!("{a}:{}", self.output(a))
                } else {
                    format!("{a}:({} {})", self.output(a), child.render())
                }
            })
            .collect();
        format!("{{{}}}", parts.join(" "))
    }

    /// Values at every word, one `word<TAB>output` line each.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..self.depth {
            words = words
                .iter()
                .flat_map(|w| (0..self.arity).map(move |a| [w.clone(), vec![a]].concat()))
                .collect();
            for w in &words {
                let text: Vec<String> = w.iter().map(|a| a.to_string()).collect();
                out.push_str(&format!(
                    "{}\t{}\n",
                    text.join(""),
                    self.value(w).expect("in range")
                ));
            }
        }
        out
    }
}

/// The homomorphism square at `(x, a)`: consuming `a` from `⟨⟨m⟩⟩(x)` gives `m`'s output
/// and the unfolding of `m`'s next state.
pub fn square_holds(m: &MealyMachine, x: usize, a: usize, depth: usize) -> bool {
    let t = m.unfold(x, depth);
    let (y, b) = m.step(x, a);
    t.output(a) == b && t.child(a) == m.unfold(y, depth - 1)
}

/// Whether `h : X → depth-d tries` satisfies the square for every `(x, a)`.
pub fn is_trie_homomorphism(m: &MealyMachine, h: &[BehaviorTrie]) -> bool {
    (0..m.states().len()).all(|x| {
        (0..m.inputs().len()).all(|a| {
            let (y, b) = m.step(x, a);
            h[x].output(a) == b && h[x].child(a) == h[y].truncate(h[y].depth() - 1)
        })
    })
}

/// Brute force: every `h : X → depth-d tries` satisfying the square equals the unfolding.
/// Returns the number of solutions found, which should be exactly one.
pub fn count_trie_homomorphisms(m: &MealyMachine, depth: usize) -> usize {
    let tries: Vec<BehaviorTrie> =
        BehaviorTrie::enumerate(m.inputs().len(), m.outputs().len(), depth).collect();
    let n = m.states().len();
    let total = (tries.len() as u64).pow(n as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let h: Vec<BehaviorTrie> = (0..n)
                .map(|_| {
                    let t = tries[(c % tries.len() as u64) as usize].clone();
                    c /= tries.len() as u64;
                    t
                })
                .collect();
            is_trie_homomorphism(m, &h)
        })
        .count()
}

/// `⟨⟨π₀, ξ₁⟩⟩(t)`: the anamorphism of the machine that keeps `t` and answers with
/// its first-step responses.
pub fn ana_pi0_xi1(t: &BehaviorTrie) -> BehaviorTrie {
    BehaviorTrie::unfold(t.arity(), t.depth(), t.clone(), |s, a| {
        (s.clone(), s.output(a))
    })
}

/// Tries to check: all of them when there are at most this many, otherwise a sample.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 15;

fn trie_sample(
    arity: usize,
    codomain: usize,
    depth: usize,
    rng: &mut impl Rng,
    samples: usize,
) -> Vec<BehaviorTrie> {
    let len = word_count(arity, depth) as u32;
    match (codomain as u64).checked_pow(len) {
        Some(total) if total <= EXHAUSTIVE_LIMIT => {
            BehaviorTrie::enumerate(arity, codomain, depth).collect()
        }
        _ => (0..samples)
            .map(|_| BehaviorTrie::random(arity, codomain, depth, rng))
            .collect(),
    }
}

/// `⟨⟨π₀, ξ₁⟩⟩ ∘ ⟨⟨π₀, ξ₁⟩⟩ = ⟨⟨π₀, ξ₁⟩⟩` on depth-`d` tries over `|A|` inputs and `|B|`
/// outputs: exhaustive when the space is small, on `samples` random tries otherwise.
pub fn ana_pi0xi1_idempotent(
    a: usize,
    b: usize,
    depth: usize,
    rng: &mut impl Rng,
    samples: usize,
) -> bool {
    trie_sample(a, b, depth, rng, samples).iter().all(|t| {
        let once = ana_pi0_xi1(t);
        ana_pi0_xi1(&once) == once
    })
}

/// A function `A → B` as its table of values.
pub type Function = Vec<usize>;

/// The exponent `[A → B]` split off the truncated final machine: `q ∘ m = id` and
/// `m ∘ q = ⟨⟨π₀, ξ₁⟩⟩`.
#[derive(Clone, Debug)]
pub struct SplitExponent {
    inputs: usize,
    outputs: usize,
    depth: usize,
}

impl SplitExponent {
    pub fn new(
        a: usize,
        b: usize,
        depth: usize,
        rng: &mut impl Rng,
        samples: usize,
    ) -> Result<Self, MealyError> {
        if depth == 0 || !ana_pi0xi1_idempotent(a, b, depth, rng, samples) {
            return Err(MealyError::NotIdempotent(depth));
        }
        Ok(SplitExponent {
            inputs: a,
            outputs: b,
            depth,
        })
    }

    /// The retraction: first-step responses.
    pub fn q(&self, t: &BehaviorTrie) -> Function {
        (0..self.inputs).map(|a| t.output(a)).collect()
    }

    /// The section: the behaviour that answers `f` to the last letter of every word.
    pub fn m(&self, f: &[usize]) -> BehaviorTrie {
        BehaviorTrie::unfold(self.inputs, self.depth, (), |_, a| ((), f[a]))
    }

    /// `ε(f, a) = f(a)`
    pub fn eval(&self, f: &[usize], a: usize) -> usize {
        f[a]
    }

    /// `λf = q ∘ ⟨⟨π₀, f⟩⟩` for `f : X × A → B` with `|X| = states`.
    pub fn curry(&self, states: usize, f: impl Fn(usize, usize) -> usize) -> Vec<Function> {
        (0..states)
            .map(|x| {
                self.q(&BehaviorTrie::unfold(self.inputs, self.depth, x, |s, a| {
                    (*s, f(*s, a))
                }))
            })
            .collect()
    }

    /// Every function `A → B`.
    pub fn functions(&self) -> impl Iterator<Item = Function> + '_ {
        let (a, b) = (self.inputs, self.outputs);
        (0..(b as u64).pow(a as u32)).map(move |mut code| {
            (0..a)
                .map(|_| {
                    let d = (code % b as u64) as usize;
                    code /= b as u64;
                    d
                })
                .collect()
        })
    }

    /// `q ∘ m = id` on every function and `m ∘ q = ⟨⟨π₀, ξ₁⟩⟩` on the trie sample.
    /// Returns a description of the first violation.
    pub fn check_retraction(&self, rng: &mut impl Rng, samples: usize) -> Result<(), String> {
        self.check_section()?;
        trie_sample(self.inputs, self.outputs, self.depth, rng, samples)
            .iter()
            .try_for_each(|t| self.check_split(t))
    }

    /// [`check_retraction`](Self::check_retraction) over every trie, however many.
    pub fn check_retraction_exhaustive(&self) -> Result<(), String> {
        self.check_section()?;
        BehaviorTrie::enumerate(self.inputs, self.outputs, self.depth)
            .try_for_each(|t| self.check_split(&t))
    }

    fn check_section(&self) -> Result<(), String> {
        for f in self.functions() {
            let back = self.q(&self.m(&f));
            if back != f {
                return Err(format!("q(m({f:?})) = {back:?}"));
            }
        }
        Ok(())
    }

    fn check_split(&self, t: &BehaviorTrie) -> Result<(), String> {
        if self.m(&self.q(t)) != ana_pi0_xi1(t) {
            return Err(format!(
                "m(q(t)) differs from the idempotent at {}",
                t.render()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xor() -> MealyMachine {
        MealyMachine::from_fn(2, 2, 2, |x, a| (a, x ^ a))
    }

    #[test]
    fn xor_behaviour_by_hand() {
        let m = xor();
        assert_eq!(m.output_trace(0, &[1, 0, 1]), vec![1, 1, 1]);
        assert_eq!(m.behavior(0, &[1, 0, 1]), Ok(1));
        assert_eq!(m.behavior(0, &[]), Err(MealyError::EmptyWord));
        assert_eq!(m.behavior_of("x0", &["1", "0", "1"]), Ok("1"));
    }

    #[test]
    fn constant_machine_behaviour() {
        let m = MealyMachine::from_fn(3, 2, 3, |x, _| (x, 2));
        for word in [vec![0], vec![1, 1, 0], vec![0, 0, 0, 1]] {
            assert_eq!(m.behavior(1, &word), Ok(2));
        }
    }

    #[test]
    fn depth_one_trie_of_xor() {
        let t = xor().unfold(0, 1);
        assert_eq!(t.output(0), 0);
        assert_eq!(t.output(1), 1);
        assert_eq!(t.render(), "{0:0 1:1}");
    }

    #[test]
    fn trie_values_match_behaviour() {
        let m = MealyMachine::from_fn(3, 2, 2, |x, a| ((x + a + 1) % 3, (x * a) % 2));
        let t = m.unfold(2, 4);
        for w in [vec![0], vec![1, 0], vec![1, 1, 0, 1], vec![0, 1, 1]] {
            assert_eq!(t.value(&w), m.behavior(2, &w).ok());
        }
        assert_eq!(t.value(&[0, 0, 0, 0, 0]), None);
        assert_eq!(m.unfold(2, 4).truncate(3), m.unfold(2, 3));
        assert!((0..2).all(|a| square_holds(&m, 1, a, 4)));
    }

    #[test]
    fn text_format_round_trips() {
        let text = "mealy states: x0 x1 / inputs: 0 1 / outputs: 0 1 / rule: x0 0 -> x0 0 / rule: x0 1 -> x1 1 / rule: x1 0 -> x0 1 / rule: x1 1 -> x1 0";
        let m: MealyMachine = text.parse().unwrap();
        assert_eq!(m, xor());
        assert_eq!(m.to_string(), text);
        let e = "mealy states: a / inputs: 0 / outputs: 0"
            .parse::<MealyMachine>()
            .unwrap_err();
        assert!(
            matches!(&e, MealyError::At { line: 1, source } if matches!(**source, MealyError::MissingRule { .. })),
            "{e}"
        );
        let multi = "# xor\nmealy\nstates: x0 x1\ninputs: 0 1\noutputs: 0 1\nrule: x0 0 -> x0 0\nrule: x0 1 -> x1 1\nrule: x1 0 -> x0 1\nrule: x1 1 -> x1 0\n";
        assert_eq!(multi.parse::<MealyMachine>().unwrap(), xor());
        let e = multi
            .replace("x1 1 -> x1 0", "x1 1 -> x9 0")
            .parse::<MealyMachine>()
            .unwrap_err();
        assert_eq!(e.to_string(), "line 9: unknown state 'x9'");
    }

    #[test]
    fn bisimilar_states_unfold_equally() {
        // x0 and x1 behave identically, x2 differs
        let m = MealyMachine::from_fn(3, 2, 2, |x, a| match x {
            0 => (1, a),
            1 => (0, a),
            _ => (2, 1 - a),
        });
        assert!(m.bisimilar(0, 1, 6));
        assert!(!m.bisimilar(0, 2, 6));
        for d in 1..=6 {
            assert_eq!(m.unfold(0, d), m.unfold(1, d));
        }
    }

    #[test]
    fn unfolding_is_the_unique_homomorphism() {
        for code in 0..MealyMachine::count(2, 2, 2) {
            let m = MealyMachine::from_index(2, 2, 2, code);
            assert_eq!(count_trie_homomorphisms(&m, 2), 1);
            let h: Vec<_> = (0..2).map(|x| m.unfold(x, 2)).collect();
            assert!(is_trie_homomorphism(&m, &h));
        }
    }

    #[test]
    fn pi0_xi1_is_idempotent_and_fixes_constant_tries() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(ana_pi0xi1_idempotent(2, 2, 3, &mut rng, 100));
        let split = SplitExponent::new(2, 2, 3, &mut rng, 100).unwrap();
        for f in split.functions() {
            let t = split.m(&f);
            assert_eq!(ana_pi0_xi1(&t), t);
        }
        // the image has exactly |B|^|A| elements
        let image: std::collections::BTreeSet<_> = BehaviorTrie::enumerate(2, 2, 3)
            .map(|t| ana_pi0_xi1(&t))
            .collect();
        assert_eq!(image.len(), 4);
    }

    #[test]
    fn retraction_and_evaluation_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for a in 1..=3 {
            for b in 1..=3 {
                for d in 1..=4 {
                    let split = SplitExponent::new(a, b, d, &mut rng, 50).unwrap();
                    assert_eq!(split.functions().count(), b.pow(a as u32));
                    split.check_retraction(&mut rng, 50).unwrap();
                }
            }
        }
        let split = SplitExponent::new(2, 2, 3, &mut rng, 50).unwrap();
        let xor = |x: usize, a: usize| x ^ a;
        let lam = split.curry(2, xor);
        for (x, g) in lam.iter().enumerate() {
            for a in 0..2 {
                assert_eq!(split.eval(g, a), xor(x, a));
            }
        }
        // with a trivial state space, λ of the projection is a single constant family
        let lam = split.curry(1, |_, a| a);
        assert_eq!(lam, vec![vec![0, 1]]);
    }
}
