//! Conditions C1-C5 and the deterministic-net deciders.
//!
//! The structural core is the cycle spectrum: min-plus / max-plus matrix
//! powers giving, per walk length `k <= |Q|`, the extreme walk effects
//! between every state pair. A negative (positive) simple cycle exists iff
//! some diagonal entry of some power is negative (positive), because any
//! negative closed walk of length <= |Q| decomposes into simple cycles, one
//! of which must be negative.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ocn::{LetterId, Ocn, StateId, Transition};
use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum DetError {
    #[error("net is non-deterministic: state `{state}` has several transitions on `{letter}`")]
    NonDeterministic { state: String, letter: String },
}

#[derive(Clone)]
struct Matrix {
    val: Vec<Vec<Option<i64>>>,
    /// Back-pointer for walk reconstruction: the last transition of the
    /// extreme walk realizing `val[i][j]`.
    back: Vec<Vec<Option<Transition>>>,
}

impl Matrix {
    fn empty(n: usize) -> Self {
        Matrix { val: vec![vec![None; n]; n], back: vec![vec![None; n]; n] }
    }
}

/// Extreme walk effects per exact length `k` in `1..=|Q|`.
pub struct CycleSpectrum {
    mins: Vec<Matrix>,
    maxs: Vec<Matrix>,
}

/// A detected extreme cycle: length, state on the diagonal, and effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagCycle {
    pub len: usize,
    pub state: StateId,
    pub effect: i64,
}

pub fn cycle_spectrum(ocn: &Ocn) -> CycleSpectrum {
    let n = ocn.num_states();
    let mut base_min = Matrix::empty(n);
    let mut base_max = Matrix::empty(n);
    for t in ocn.transitions() {
        let vmin = &mut base_min.val[t.src][t.dst];
        if vmin.map_or(true, |v| t.effect < v) {
            *vmin = Some(t.effect);
            base_min.back[t.src][t.dst] = Some(*t);
        }
        let vmax = &mut base_max.val[t.src][t.dst];
        if vmax.map_or(true, |v| t.effect > v) {
            *vmax = Some(t.effect);
            base_max.back[t.src][t.dst] = Some(*t);
        }
    }
    let mut mins = vec![base_min.clone()];
    let mut maxs = vec![base_max.clone()];
    for _ in 1..n.max(1) {
        mins.push(extend(mins.last().unwrap(), &base_min, n, false));
        maxs.push(extend(maxs.last().unwrap(), &base_max, n, true));
    }
    CycleSpectrum { mins, maxs }
}

fn extend(prev: &Matrix, base: &Matrix, n: usize, maximize: bool) -> Matrix {
    let mut out = Matrix::empty(n);
    for i in 0..n {
        for s in 0..n {
            let Some(p) = prev.val[i][s] else { continue };
            for j in 0..n {
                let Some(b) = base.val[s][j] else { continue };
                let cand = p + b;
                let better = out.val[i][j]
                    .map_or(true, |v| if maximize { cand > v } else { cand < v });
                if better {
                    out.val[i][j] = Some(cand);
                    out.back[i][j] = base.back[s][j];
                }
            }
        }
    }
    out
}

impl CycleSpectrum {
    pub fn min_effect(&self, k: usize, i: StateId, j: StateId) -> Option<i64> {
        self.mins[k - 1].val[i][j]
    }

    pub fn max_effect(&self, k: usize, i: StateId, j: StateId) -> Option<i64> {
        self.maxs[k - 1].val[i][j]
    }

    pub fn num_lengths(&self) -> usize {
        self.mins.len()
    }

    /// Some diagonal entry with negative minimal effect, if any.
    pub fn negative_cycle(&self) -> Option<DiagCycle> {
        self.diag_search(|e| e < 0, false)
    }

    /// Some diagonal entry with positive maximal effect, if any.
    pub fn positive_cycle(&self) -> Option<DiagCycle> {
        self.diag_search(|e| e > 0, true)
    }

    fn diag_search(&self, pred: impl Fn(i64) -> bool, maxs: bool) -> Option<DiagCycle> {
        let mats = if maxs { &self.maxs } else { &self.mins };
        for (ki, m) in mats.iter().enumerate() {
            for (i, row) in m.val.iter().enumerate() {
                if let Some(e) = row[i] {
                    if pred(e) {
                        return Some(DiagCycle { len: ki + 1, state: i, effect: e });
                    }
                }
            }
        }
        None
    }

    /// Reconstructs a walk of exact length `k` from `i` to `j` realizing the
    /// extreme effect.
    pub fn walk(&self, k: usize, i: StateId, j: StateId, maxs: bool) -> Option<Vec<Transition>> {
        let mats = if maxs { &self.maxs } else { &self.mins };
        mats[k - 1].val[i][j]?;
        let mut walk = Vec::with_capacity(k);
        let mut cur_j = j;
        for kk in (1..=k).rev() {
            let t = mats[kk - 1].back[i][cur_j].expect("back-pointer for realized value");
            walk.push(t);
            cur_j = t.src;
        }
        walk.reverse();
        Some(walk)
    }
}

/// Evaluation of the five structural conditions, with witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    /// Word whose underlying-automaton run fails (missing transition or
    /// non-accepting state).
    pub c1_witness: Option<Vec<String>>,
    /// Word of length <= |Q| outside L(s0, c0).
    pub c2_witness: Option<Vec<String>>,
    /// Word of length <= |Q| outside bLang(s0, c0, b).
    pub c3_witness: Option<Vec<String>>,
    /// Description of a negative simple cycle.
    pub c4_witness: Option<String>,
    /// Description of a non-zero simple cycle.
    pub c5_witness: Option<String>,
    /// States unreachable from the initial state, dropped before analysis.
    pub removed_states: Vec<String>,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tf = |b: bool| if b { "t" } else { "f" };
        write!(
            f,
            "C1={} C2={} C3={} C4={} C5={}",
            tf(self.c1),
            tf(self.c2),
            tf(self.c3),
            tf(self.c4),
            tf(self.c5)
        )?;
        if let Some(w) = &self.c1_witness {
            write!(f, "\nC1 witness: {}", w.join(" "))?;
        }
        if let Some(w) = &self.c2_witness {
            write!(f, "\nC2 witness: {}", w.join(" "))?;
        }
        if let Some(w) = &self.c3_witness {
            write!(f, "\nC3 witness: {}", w.join(" "))?;
        }
        if let Some(w) = &self.c4_witness {
            write!(f, "\nC4 witness: {w}")?;
        }
        if let Some(w) = &self.c5_witness {
            write!(f, "\nC5 witness: {w}")?;
        }
        if !self.removed_states.is_empty() {
            write!(f, "\nremoved unreachable states: {}", self.removed_states.join(" "))?;
        }
        Ok(())
    }
}

fn require_deterministic(ocn: &Ocn) -> Result<(), DetError> {
    if let Some((s, l)) = ocn.nondeterministic_pair() {
        return Err(DetError::NonDeterministic {
            state: ocn.state_name(s).to_string(),
            letter: ocn.letter_name(l).to_string(),
        });
    }
    Ok(())
}

fn describe_cycle(ocn: &Ocn, walk: &[Transition]) -> String {
    let steps: Vec<String> = walk
        .iter()
        .map(|t| {
            format!(
                "{} --{},{}--> {}",
                ocn.state_name(t.src),
                ocn.letter_name(t.letter),
                t.effect,
                ocn.state_name(t.dst)
            )
        })
        .collect();
    steps.join("; ")
}

/// Underlying-DFA universality: total transition function and every state
/// accepting, over the reachable part. Returns a witness word otherwise.
/// For singleton alphabets this degenerates to the all-states-accepting
/// check plus per-state totality.
fn check_c1(ocn: &Ocn, s0: StateId) -> (bool, Option<Vec<String>>) {
    // BFS with words over the underlying automaton (deterministic input, so
    // state reachability is word reachability).
    let mut word_to: Vec<Option<Vec<LetterId>>> = vec![None; ocn.num_states()];
    word_to[s0] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([s0]);
    while let Some(s) = queue.pop_front() {
        let w = word_to[s].clone().unwrap();
        if !ocn.is_accepting(s) {
            return (false, Some(render(ocn, &w)));
        }
        for l in 0..ocn.num_letters() {
            match ocn.outgoing(s).iter().find(|t| t.letter == l) {
                None => {
                    let mut bad = w.clone();
                    bad.push(l);
                    return (false, Some(render(ocn, &bad)));
                }
                Some(t) => {
                    if word_to[t.dst].is_none() {
                        let mut w2 = w.clone();
                        w2.push(l);
                        word_to[t.dst] = Some(w2);
                        queue.push_back(t.dst);
                    }
                }
            }
        }
    }
    (true, None)
}

fn render(ocn: &Ocn, word: &[LetterId]) -> Vec<String> {
    word.iter().map(|&l| ocn.letter_name(l).to_string()).collect()
}

/// Short-word membership check shared by C2 (no ceiling) and C3 (ceiling b):
/// explores all (state, counter) configurations reached by words of length
/// <= |Q|, deduplicated, and fails on the first dying or non-accepted word.
fn check_short_words(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    ceiling: Option<u64>,
) -> (bool, Option<Vec<String>>) {
    if ceiling.map_or(false, |b| c0 > b) {
        return (false, Some(Vec::new()));
    }
    let steps = ocn.num_states();
    let mut frontier: HashMap<(StateId, i128), Vec<LetterId>> = HashMap::new();
    frontier.insert((s0, c0 as i128), Vec::new());
    for k in 0..=steps {
        for ((s, _), w) in &frontier {
            if !ocn.is_accepting(*s) {
                return (false, Some(render(ocn, w)));
            }
        }
        if k == steps {
            break;
        }
        let mut next: HashMap<(StateId, i128), Vec<LetterId>> = HashMap::new();
        for ((s, c), w) in &frontier {
            for l in 0..ocn.num_letters() {
                let bad = || {
                    let mut word = w.clone();
                    word.push(l);
                    render(ocn, &word)
                };
                let Some(t) = ocn.outgoing(*s).iter().find(|t| t.letter == l) else {
                    return (false, Some(bad()));
                };
                let c2 = c + t.effect as i128;
                if c2 < 0 || ceiling.map_or(false, |b| c2 > b as i128) {
                    return (false, Some(bad()));
                }
                next.entry((t.dst, c2)).or_insert_with(|| {
                    let mut word = w.clone();
                    word.push(l);
                    word
                });
            }
        }
        frontier = next;
    }
    (true, None)
}

/// Evaluates C1-C5 on the part of the net reachable from its initial state;
/// C3 uses counter ceiling `b`.
pub fn eval_conditions(ocn: &Ocn, c0: u64, b: u64) -> Result<ConditionReport, DetError> {
    require_deterministic(ocn)?;
    let (sub, s0, removed) = ocn.restrict_to_reachable(ocn.initial());
    let (c1, c1_witness) = check_c1(&sub, s0);
    let (c2, c2_witness) = check_short_words(&sub, s0, c0, None);
    let (c3, c3_witness) = check_short_words(&sub, s0, c0, Some(b));
    let spectrum = cycle_spectrum(&sub);
    let neg = spectrum.negative_cycle();
    let pos = spectrum.positive_cycle();
    let c4_witness = neg.map(|d| {
        describe_cycle(&sub, &spectrum.walk(d.len, d.state, d.state, false).unwrap())
    });
    let c5_witness = c4_witness.clone().or_else(|| {
        pos.map(|d| describe_cycle(&sub, &spectrum.walk(d.len, d.state, d.state, true).unwrap()))
    });
    Ok(ConditionReport {
        c1,
        c2,
        c3,
        c4: neg.is_none(),
        c5: neg.is_none() && pos.is_none(),
        c1_witness,
        c2_witness,
        c3_witness,
        c4_witness,
        c5_witness,
        removed_states: removed,
    })
}

/// Word over the original alphabet whose unique run enters the extreme
/// cycle `diag` after a shortest connecting path and iterates it enough to
/// die (negative cycles, against `c0`) or to exceed a ceiling (positive
/// cycles, against `ceiling`).
fn cycle_witness_word(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    spectrum: &CycleSpectrum,
    diag: DiagCycle,
    ceiling: Option<u64>,
) -> Vec<String> {
    let maxs = ceiling.is_some();
    let cycle = spectrum
        .walk(diag.len, diag.state, diag.state, maxs)
        .expect("diagonal value is realized");
    // Shortest connecting path (deterministic net: states <-> words).
    let mut parent: Vec<Option<Transition>> = vec![None; ocn.num_states()];
    let mut seen = vec![false; ocn.num_states()];
    seen[s0] = true;
    let mut queue = std::collections::VecDeque::from([s0]);
    while let Some(s) = queue.pop_front() {
        if s == diag.state {
            break;
        }
        for t in ocn.outgoing(s) {
            if !seen[t.dst] {
                seen[t.dst] = true;
                parent[t.dst] = Some(*t);
                queue.push_back(t.dst);
            }
        }
    }
    let mut tau = Vec::new();
    let mut cur = diag.state;
    while cur != s0 {
        let t = parent[cur].expect("cycle state is reachable");
        tau.push(t);
        cur = t.src;
    }
    tau.reverse();

    // Simulate tau to find the counter entering the cycle; if tau already
    // dies, one cycle iteration suffices for a rejected word.
    let mut c = c0 as i128;
    let mut died = false;
    for t in &tau {
        c += t.effect as i128;
        if c < 0 {
            died = true;
            break;
        }
    }
    let cyc_measures = crate::ocn::path_measures(&cycle);
    let k: u64 = if died {
        1
    } else if let Some(b) = ceiling {
        // Positive cycle: iterate until the peak must exceed b.
        let eff = cyc_measures.effect.max(1);
        (((b as i128 - c).max(0) / eff) + 2) as u64
    } else if c < cyc_measures.depth {
        1
    } else {
        // Negative cycle: iteration i starts at c + (i-1)*effect; the run
        // dies at the first i with that start below the cycle depth.
        let drop = -cyc_measures.effect;
        (((c - cyc_measures.depth) / drop) + 2) as u64
    };
    let mut word = Vec::new();
    for t in &tau {
        word.push(ocn.letter_name(t.letter).to_string());
    }
    for _ in 0..k {
        for t in &cycle {
            word.push(ocn.letter_name(t.letter).to_string());
        }
    }
    word
}

/// Universality of a deterministic net: holds iff no negative simple cycle
/// (C4) and every word of length <= |Q| accepted (C2).
pub fn decide_det_universality(ocn: &Ocn, s0: StateId, c0: u64) -> Result<Verdict, DetError> {
    require_deterministic(ocn)?;
    let (sub, s0, _) = ocn.restrict_to_reachable(s0);
    let lemma = "det:C4&C2";
    let (c2, c2_witness) = check_short_words(&sub, s0, c0, None);
    if !c2 {
        return Ok(Verdict::not_universal_word(lemma, c2_witness.unwrap()));
    }
    let spectrum = cycle_spectrum(&sub);
    if let Some(diag) = spectrum.negative_cycle() {
        let word = cycle_witness_word(&sub, s0, c0, &spectrum, diag, None);
        debug_assert!(!accepts_named(&sub, s0, c0, &word));
        return Ok(Verdict::not_universal_word(lemma, word));
    }
    Ok(Verdict::universal(lemma))
}

/// Initial-value universality of a deterministic net: some c0 works iff no
/// negative simple cycle (C4) and the underlying automaton is universal
/// (C1); then c0 = |Q| * max-norm suffices.
pub fn decide_det_iv_universality(ocn: &Ocn, s0: StateId) -> Result<Verdict, DetError> {
    require_deterministic(ocn)?;
    let (sub, s0, _) = ocn.restrict_to_reachable(s0);
    let lemma = "det:C4&C1";
    let nominal_c0 = sub.num_states() as u64 * sub.max_norm() as u64;
    let (c1, c1_witness) = check_c1(&sub, s0);
    if !c1 {
        return Ok(Verdict::not_universal_word(lemma, c1_witness.unwrap()));
    }
    let spectrum = cycle_spectrum(&sub);
    if let Some(diag) = spectrum.negative_cycle() {
        let word = cycle_witness_word(&sub, s0, nominal_c0, &spectrum, diag, None);
        return Ok(Verdict::not_universal_word(lemma, word));
    }
    Ok(Verdict::universal_with(lemma, nominal_c0))
}

/// Bounded universality of a deterministic net: some bound works iff all
/// simple cycles have effect 0 (C5) and every short word stays within the
/// ceiling c0 + |Q| * max-norm and is accepted (C3 at that ceiling).
pub fn decide_det_bounded_universality(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
) -> Result<Verdict, DetError> {
    require_deterministic(ocn)?;
    let (sub, s0, _) = ocn.restrict_to_reachable(s0);
    let lemma = "det:C5&C3";
    let b = c0 + sub.num_states() as u64 * sub.max_norm() as u64;
    let (c3, c3_witness) = check_short_words(&sub, s0, c0, Some(b));
    if !c3 {
        return Ok(Verdict::not_universal_word(lemma, c3_witness.unwrap()));
    }
    let spectrum = cycle_spectrum(&sub);
    if let Some(diag) = spectrum.negative_cycle() {
        let word = cycle_witness_word(&sub, s0, c0, &spectrum, diag, None);
        return Ok(Verdict::not_universal_word(lemma, word));
    }
    if let Some(diag) = spectrum.positive_cycle() {
        let word = cycle_witness_word(&sub, s0, c0, &spectrum, diag, Some(b));
        return Ok(Verdict::not_universal_word(lemma, word));
    }
    Ok(Verdict::universal_with(lemma, b))
}

fn accepts_named(ocn: &Ocn, s0: StateId, c0: u64, word: &[String]) -> bool {
    let ids: Vec<_> = word
        .iter()
        .map(|l| ocn.letter_id(l).expect("witness letters are in the alphabet"))
        .collect();
    ocn.accepts(s0, c0, &ids)
}
