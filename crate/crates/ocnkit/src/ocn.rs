//! One-counter net data model, text format, and exact membership semantics.
//!
//! A net is a finite automaton over a labelled, integer-weighted transition
//! relation together with a single non-negative counter and no zero tests.
//! Configurations are `(state, counter)` pairs; a transition with effect `e`
//! is enabled exactly when `counter + e >= 0`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub type StateId = usize;
pub type LetterId = usize;

/// A single weighted, labelled transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub letter: LetterId,
    pub effect: i64,
    pub dst: StateId,
}

/// Effect, height and depth of a path (all prefixes included, empty prefix
/// counts, so height and depth are always non-negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measures {
    pub effect: i128,
    pub height: i128,
    pub depth: i128,
}

/// A run: initial counter plus the full counter trajectory (length = path
/// length + 1, starting with `c0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub c0: u64,
    pub trajectory: Vec<i128>,
}

impl Run {
    pub fn final_counter(&self) -> i128 {
        *self.trajectory.last().expect("trajectory is never empty")
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("path not executable from counter {c0}: drops below zero after {prefix_len} transitions")]
pub struct NotExecutable {
    pub c0: u64,
    pub prefix_len: usize,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undeclared state `{name}`")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: undeclared letter `{name}`")]
    UndeclaredLetter { line: usize, name: String },
    #[error("line {line}: duplicate state `{name}`")]
    DuplicateState { line: usize, name: String },
    #[error("line {line}: duplicate initial state declaration")]
    DuplicateInitial { line: usize },
    #[error("missing initial state declaration")]
    MissingInitial,
    #[error("missing `net` header line")]
    MissingHeader,
}

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("state `{0}` is not declared")]
    UnknownState(String),
    #[error("initial counter {c0} exceeds bound {b}")]
    CounterAboveBound { c0: u64, b: u64 },
}

/// One-counter net. Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ocn {
    pub name: String,
    state_names: Vec<String>,
    letter_names: Vec<String>,
    initial: StateId,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
    /// Outgoing transitions indexed by source state (derived from
    /// `transitions`, kept for fast stepping).
    out: Vec<Vec<Transition>>,
}

impl Ocn {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letter_names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&s| self.accepting[s])
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s]
    }

    pub fn letter_name(&self, l: LetterId) -> &str {
        &self.letter_names[l]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letter_names.iter().position(|n| n == name)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, s: StateId) -> &[Transition] {
        &self.out[s]
    }

    /// Maximum absolute transition effect (0 for nets without transitions).
    pub fn max_norm(&self) -> i64 {
        self.transitions
            .iter()
            .map(|t| t.effect.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_singleton_alphabet(&self) -> bool {
        self.letter_names.len() == 1
    }

    /// At most one transition per (state, letter) pair.
    pub fn is_deterministic(&self) -> bool {
        self.nondeterministic_pair().is_none()
    }

    /// Some (state, letter) pair with two or more transitions, if any.
    pub fn nondeterministic_pair(&self) -> Option<(StateId, LetterId)> {
        let mut seen = HashSet::new();
        for t in &self.transitions {
            if !seen.insert((t.src, t.letter)) {
                return Some((t.src, t.letter));
            }
        }
        None
    }

    /// True when some (state, letter, dst) triple carries two different
    /// effects; such nets cannot always have their unambiguity verified by
    /// the saturating product check.
    pub fn has_effect_parallel_transitions(&self) -> bool {
        let mut seen: HashMap<(StateId, LetterId, StateId), i64> = HashMap::new();
        for t in &self.transitions {
            if let Some(&e) = seen.get(&(t.src, t.letter, t.dst)) {
                if e != t.effect {
                    return true;
                }
            } else {
                seen.insert((t.src, t.letter, t.dst), t.effect);
            }
        }
        false
    }

    /// Same net with every effect set to 0 (a plain NFA in net clothing).
    pub fn underlying_nfa(&self) -> Ocn {
        let mut nfa = self.clone();
        let mut trans: BTreeSet<Transition> = BTreeSet::new();
        for t in &self.transitions {
            trans.insert(Transition { effect: 0, ..*t });
        }
        nfa.transitions = trans.into_iter().collect();
        nfa.out = build_out(nfa.state_names.len(), &nfa.transitions);
        nfa
    }

    /// States reachable from `s0` ignoring counter values (an
    /// over-approximation of configuration reachability that is exact for
    /// the underlying automaton).
    pub fn reachable_states(&self, s0: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![s0];
        seen[s0] = true;
        while let Some(s) = stack.pop() {
            for t in self.outgoing(s) {
                if !seen[t.dst] {
                    seen[t.dst] = true;
                    stack.push(t.dst);
                }
            }
        }
        seen
    }

    /// Restriction to the states reachable from `s0`. Returns the sub-net,
    /// the image of `s0`, and the names of removed states.
    pub fn restrict_to_reachable(&self, s0: StateId) -> (Ocn, StateId, Vec<String>) {
        let seen = self.reachable_states(s0);
        if seen.iter().all(|&b| b) {
            return (self.clone(), s0, Vec::new());
        }
        let mut builder = OcnBuilder::new(&self.name);
        for l in &self.letter_names {
            builder.letter(l);
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut removed = Vec::new();
        for s in 0..self.num_states() {
            if seen[s] {
                map[s] = builder.state(&self.state_names[s], s == s0, self.accepting[s]);
            } else {
                removed.push(self.state_names[s].clone());
            }
        }
        for t in &self.transitions {
            if seen[t.src] && seen[t.dst] {
                builder.trans(map[t.src], t.letter, t.effect, map[t.dst]);
            }
        }
        let sub = builder.build().expect("restriction preserves validity");
        let new_s0 = map[s0];
        (sub, new_s0, removed)
    }

    /// Parses a space-separated word of letter names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<LetterId>, SemanticsError> {
        text.split_whitespace()
            .map(|tok| {
                self.letter_id(tok)
                    .ok_or_else(|| SemanticsError::UnknownLetter(tok.to_string()))
            })
            .collect()
    }

    pub fn render_word(&self, word: &[LetterId]) -> String {
        word.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Word membership: `w ∈ L(s0, c0)`.
    ///
    /// Per-letter dynamic program keeping, for every state, the maximum
    /// counter value reachable after the prefix read so far. Sound and
    /// complete by monotonicity: a run from a higher counter can mimic any
    /// run from a lower one.
    pub fn accepts(&self, s0: StateId, c0: u64, word: &[LetterId]) -> bool {
        let mut dp = MaxCounterDp::new(self, s0, c0);
        for &l in word {
            dp.step(l);
        }
        dp.accepting()
    }

    /// Bounded membership: `w ∈ bLang(s0, c0, b)` — some accepting run keeps
    /// the counter within `[0, b]` throughout.
    ///
    /// Uses an explicit frontier of (state, counter) pairs: the max-counter
    /// trick is unsound under a ceiling because a higher counter may
    /// overflow where a lower one survives.
    pub fn accepts_bounded(
        &self,
        s0: StateId,
        c0: u64,
        b: u64,
        word: &[LetterId],
    ) -> Result<bool, SemanticsError> {
        if c0 > b {
            return Err(SemanticsError::CounterAboveBound { c0, b });
        }
        let mut frontier: HashSet<(StateId, u64)> = HashSet::new();
        frontier.insert((s0, c0));
        for &l in word {
            let mut next = HashSet::new();
            for &(s, c) in &frontier {
                for t in self.outgoing(s) {
                    if t.letter != l {
                        continue;
                    }
                    let c2 = c as i128 + t.effect as i128;
                    if c2 >= 0 && c2 <= b as i128 {
                        next.insert((t.dst, c2 as u64));
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(false);
            }
        }
        Ok(frontier.iter().any(|&(s, _)| self.accepting[s]))
    }

    /// Membership via a designated state: true iff some accepting run on
    /// `word` visits `r` (at any point, including as the first or last
    /// configuration). Two-copy variant of the max-counter DP where the
    /// flag flips upon entering `r`.
    pub fn accepts_via(&self, s0: StateId, c0: u64, r: StateId, word: &[LetterId]) -> bool {
        let mut dp = ViaDp::new(self, s0, c0, r);
        for &l in word {
            dp.step(l);
        }
        dp.accepting()
    }
}

/// Incremental max-counter membership DP, exposed so the unary deciders can
/// sweep word lengths without restarting per length.
pub struct MaxCounterDp<'a> {
    ocn: &'a Ocn,
    /// Maximum reachable counter per state; `None` means unreachable.
    vals: Vec<Option<i128>>,
    scratch: Vec<Option<i128>>,
}

impl<'a> MaxCounterDp<'a> {
    pub fn new(ocn: &'a Ocn, s0: StateId, c0: u64) -> Self {
        let mut vals = vec![None; ocn.num_states()];
        vals[s0] = Some(c0 as i128);
        let scratch = vec![None; ocn.num_states()];
        MaxCounterDp { ocn, vals, scratch }
    }

    pub fn step(&mut self, letter: LetterId) {
        self.scratch.fill(None);
        for (s, v) in self.vals.iter().enumerate() {
            let Some(c) = *v else { continue };
            for t in self.ocn.outgoing(s) {
                if t.letter != letter {
                    continue;
                }
                let c2 = c + t.effect as i128;
                if c2 >= 0 && self.scratch[t.dst].map_or(true, |old| c2 > old) {
                    self.scratch[t.dst] = Some(c2);
                }
            }
        }
        std::mem::swap(&mut self.vals, &mut self.scratch);
    }

    pub fn accepting(&self) -> bool {
        self.vals
            .iter()
            .enumerate()
            .any(|(s, v)| v.is_some() && self.ocn.is_accepting(s))
    }
}

/// Incremental two-copy DP for `accepts_via`.
pub struct ViaDp<'a> {
    ocn: &'a Ocn,
    r: StateId,
    /// Max counter per state, runs that have not yet visited `r`.
    before: Vec<Option<i128>>,
    /// Max counter per state, runs that have visited `r`.
    after: Vec<Option<i128>>,
    scratch_before: Vec<Option<i128>>,
    scratch_after: Vec<Option<i128>>,
}

impl<'a> ViaDp<'a> {
    pub fn new(ocn: &'a Ocn, s0: StateId, c0: u64, r: StateId) -> Self {
        let mut before = vec![None; ocn.num_states()];
        let mut after = vec![None; ocn.num_states()];
        if s0 == r {
            after[s0] = Some(c0 as i128);
        } else {
            before[s0] = Some(c0 as i128);
        }
        let scratch_before = vec![None; ocn.num_states()];
        let scratch_after = vec![None; ocn.num_states()];
        ViaDp { ocn, r, before, after, scratch_before, scratch_after }
    }

    pub fn step(&mut self, letter: LetterId) {
        self.scratch_before.fill(None);
        self.scratch_after.fill(None);
        let nb = &mut self.scratch_before;
        let na = &mut self.scratch_after;
        let push = |slot: &mut Option<i128>, c: i128| {
            if slot.map_or(true, |old| c > old) {
                *slot = Some(c);
            }
        };
        for (s, v) in self.before.iter().enumerate() {
            let Some(c) = *v else { continue };
            for t in self.ocn.outgoing(s) {
                if t.letter != letter {
                    continue;
                }
                let c2 = c + t.effect as i128;
                if c2 >= 0 {
                    if t.dst == self.r {
                        push(&mut na[t.dst], c2);
                    } else {
                        push(&mut nb[t.dst], c2);
                    }
                }
            }
        }
        for (s, v) in self.after.iter().enumerate() {
            let Some(c) = *v else { continue };
            for t in self.ocn.outgoing(s) {
                if t.letter != letter {
                    continue;
                }
                let c2 = c + t.effect as i128;
                if c2 >= 0 {
                    push(&mut na[t.dst], c2);
                }
            }
        }
        std::mem::swap(&mut self.before, &mut self.scratch_before);
        std::mem::swap(&mut self.after, &mut self.scratch_after);
    }

    pub fn accepting(&self) -> bool {
        self.after
            .iter()
            .enumerate()
            .any(|(s, v)| v.is_some() && self.ocn.is_accepting(s))
    }
}

/// True when consecutive transitions chain (`dst_i == src_{i+1}`).
pub fn is_chained(path: &[Transition]) -> bool {
    path.windows(2).all(|w| w[0].dst == w[1].src)
}

/// Effect, height, and depth of a well-chained path.
pub fn path_measures(path: &[Transition]) -> Measures {
    debug_assert!(is_chained(path));
    let mut sum: i128 = 0;
    let mut min: i128 = 0;
    let mut max: i128 = 0;
    for t in path {
        sum += t.effect as i128;
        min = min.min(sum);
        max = max.max(sum);
    }
    Measures { effect: sum, height: max, depth: -min }
}

/// The unique run of a path from counter `c0`, if executable.
pub fn run_of_path(path: &[Transition], c0: u64) -> Result<Run, NotExecutable> {
    debug_assert!(is_chained(path));
    let mut trajectory = Vec::with_capacity(path.len() + 1);
    let mut c = c0 as i128;
    trajectory.push(c);
    for (i, t) in path.iter().enumerate() {
        c += t.effect as i128;
        if c < 0 {
            return Err(NotExecutable { c0, prefix_len: i + 1 });
        }
        trajectory.push(c);
    }
    Ok(Run { c0, trajectory })
}

fn build_out(num_states: usize, transitions: &[Transition]) -> Vec<Vec<Transition>> {
    let mut out = vec![Vec::new(); num_states];
    for t in transitions {
        out[t.src].push(*t);
    }
    out
}

/// Incremental construction of a net; used by the parser, the reduction
/// builders, and the counter expansion.
#[derive(Debug, Clone, Default)]
pub struct OcnBuilder {
    name: String,
    letter_names: Vec<String>,
    letter_ids: HashMap<String, LetterId>,
    state_names: Vec<String>,
    state_ids: HashMap<String, StateId>,
    initial: Option<StateId>,
    accepting: Vec<bool>,
    transitions: BTreeSet<Transition>,
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("no initial state declared")]
    NoInitial,
    #[error("more than one initial state declared")]
    MultipleInitial,
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
}

impl OcnBuilder {
    pub fn new(name: &str) -> Self {
        OcnBuilder { name: name.to_string(), ..Default::default() }
    }

    /// Declares (or looks up) a letter, returning its id.
    pub fn letter(&mut self, name: &str) -> LetterId {
        if let Some(&id) = self.letter_ids.get(name) {
            return id;
        }
        let id = self.letter_names.len();
        self.letter_names.push(name.to_string());
        self.letter_ids.insert(name.to_string(), id);
        id
    }

    pub fn state(&mut self, name: &str, initial: bool, accepting: bool) -> StateId {
        let id = self.state_names.len();
        self.state_names.push(name.to_string());
        self.state_ids.insert(name.to_string(), id);
        self.accepting.push(accepting);
        if initial {
            // Recorded even if already set; build() rejects duplicates.
            if self.initial.is_some() {
                self.initial = Some(usize::MAX);
            } else {
                self.initial = Some(id);
            }
        }
        id
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.state_ids.contains_key(name)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_ids.get(name).copied()
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letter_ids.get(name).copied()
    }

    /// Adds a transition; duplicate identical transitions collapse.
    pub fn trans(&mut self, src: StateId, letter: LetterId, effect: i64, dst: StateId) {
        self.transitions.insert(Transition { src, letter, effect, dst });
    }

    pub fn build(self) -> Result<Ocn, BuildError> {
        let initial = match self.initial {
            None => return Err(BuildError::NoInitial),
            Some(usize::MAX) => return Err(BuildError::MultipleInitial),
            Some(s) => s,
        };
        let transitions: Vec<Transition> = self.transitions.into_iter().collect();
        let out = build_out(self.state_names.len(), &transitions);
        Ok(Ocn {
            name: self.name,
            state_names: self.state_names,
            letter_names: self.letter_names,
            initial,
            accepting: self.accepting,
            transitions,
            out,
        })
    }
}

/// Parses the line-oriented net file format (see `Display` for the inverse).
pub fn parse_ocn(text: &str) -> Result<Ocn, ParseError> {
    let mut builder: Option<OcnBuilder> = None;
    let mut saw_initial = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let kw = toks.next().unwrap();
        match kw {
            "net" => {
                let name = toks.next().ok_or_else(|| ParseError::Syntax {
                    line,
                    msg: "expected `net <name>`".into(),
                })?;
                if toks.next().is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "trailing tokens after net name".into(),
                    });
                }
                if builder.is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "duplicate `net` line".into(),
                    });
                }
                builder = Some(OcnBuilder::new(name));
            }
            "alphabet" => {
                let b = builder.as_mut().ok_or(ParseError::MissingHeader)?;
                for l in toks {
                    b.letter(l);
                }
            }
            "state" => {
                let b = builder.as_mut().ok_or(ParseError::MissingHeader)?;
                let name = toks.next().ok_or_else(|| ParseError::Syntax {
                    line,
                    msg: "expected `state <id> [initial] [accepting]`".into(),
                })?;
                if b.has_state(name) {
                    return Err(ParseError::DuplicateState { line, name: name.to_string() });
                }
                let mut initial = false;
                let mut accepting = false;
                for flag in toks {
                    match flag {
                        "initial" => initial = true,
                        "accepting" => accepting = true,
                        other => {
                            return Err(ParseError::Syntax {
                                line,
                                msg: format!("unknown state flag `{other}`"),
                            })
                        }
                    }
                }
                if initial {
                    if saw_initial {
                        return Err(ParseError::DuplicateInitial { line });
                    }
                    saw_initial = true;
                }
                b.state(name, initial, accepting);
            }
            "trans" => {
                let b = builder.as_mut().ok_or(ParseError::MissingHeader)?;
                let (src, letter, effect, dst) = match (
                    toks.next(),
                    toks.next(),
                    toks.next(),
                    toks.next(),
                    toks.next(),
                ) {
                    (Some(s), Some(l), Some(e), Some(d), None) => (s, l, e, d),
                    _ => {
                        return Err(ParseError::Syntax {
                            line,
                            msg: "expected `trans <src> <letter> <effect> <dst>`".into(),
                        })
                    }
                };
                let src_id = b.state_id(src).ok_or_else(|| ParseError::UndeclaredState {
                    line,
                    name: src.to_string(),
                })?;
                let dst_id = b.state_id(dst).ok_or_else(|| ParseError::UndeclaredState {
                    line,
                    name: dst.to_string(),
                })?;
                let letter_id = b.letter_id(letter).ok_or_else(|| {
                    ParseError::UndeclaredLetter { line, name: letter.to_string() }
                })?;
                let effect: i64 = effect.parse().map_err(|_| ParseError::Syntax {
                    line,
                    msg: format!("invalid effect `{effect}`"),
                })?;
                b.trans(src_id, letter_id, effect, dst_id);
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }
    let builder = builder.ok_or(ParseError::MissingHeader)?;
    builder.build().map_err(|e| match e {
        BuildError::NoInitial => ParseError::MissingInitial,
        BuildError::MultipleInitial => ParseError::DuplicateInitial { line: 0 },
        BuildError::DuplicateState(name) => ParseError::DuplicateState { line: 0, name },
    })
}

impl fmt::Display for Ocn {
    /// Prints the exact file format accepted by `parse_ocn`; printing and
    /// re-parsing yields an equal net.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "net {}", self.name)?;
        write!(f, "alphabet")?;
        for l in &self.letter_names {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for (s, name) in self.state_names.iter().enumerate() {
            write!(f, "state {name}")?;
            if s == self.initial {
                write!(f, " initial")?;
            }
            if self.accepting[s] {
                write!(f, " accepting")?;
            }
            writeln!(f)?;
        }
        for t in &self.transitions {
            writeln!(
                f,
                "trans {} {} {} {}",
                self.state_names[t.src],
                self.letter_names[t.letter],
                t.effect,
                self.state_names[t.dst]
            )?;
        }
        Ok(())
    }
}
