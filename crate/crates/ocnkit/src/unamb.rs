//! Deciders for unambiguous nets: ambiguity testing by self-product,
//! counting-based universality of unambiguous automata, counter expansion,
//! and the three unambiguous-net universality deciders.
//!
//! An automaton is unambiguous when every word in its language has exactly
//! one accepting run. For such automata the number of accepting runs of
//! each length equals the number of accepted words of that length, which
//! makes universality a counting question answerable with |Q|+2 matrix
//! powers.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::det::cycle_spectrum;
use crate::ocn::{LetterId, Ocn, OcnBuilder, StateId, Transition};
use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum UnambError {
    #[error("operation requires zero effects, found effect {0}")]
    NonZeroEffects(i64),
    #[error("operation requires a singleton alphabet, net has {0} letters")]
    NotSingleton(usize),
    #[error("initial counter {c0} exceeds expansion cap {cap}")]
    CapBelowInitial { c0: u64, cap: u64 },
    #[error("input is ambiguous: word `{0}` has two accepting runs")]
    Ambiguous(String, AmbiguityReport),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
}

/// Two distinct accepting runs over the same word, each rendered as a
/// sequence of transitions in source format (`src letter effect dst`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityWitness {
    pub word: Vec<String>,
    pub run_a: Vec<String>,
    pub run_b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityReport {
    pub ambiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<AmbiguityWitness>,
}

impl AmbiguityReport {
    fn unambiguous() -> Self {
        AmbiguityReport { ambiguous: false, witness: None }
    }
}

fn render_run(ocn: &Ocn, run: &[Transition]) -> Vec<String> {
    run.iter()
        .map(|t| {
            format!(
                "{} {} {} {}",
                ocn.state_name(t.src),
                ocn.letter_name(t.letter),
                t.effect,
                ocn.state_name(t.dst)
            )
        })
        .collect()
}

/// Ambiguity test for a zero-effect net by breadth-first search on the
/// self-product: a node is a state pair plus a flag recording whether the
/// two synchronized runs have already used different transitions. The
/// automaton is ambiguous iff a flagged accepting pair is reachable.
pub fn is_unambiguous_nfa(nfa: &Ocn, s0: StateId) -> Result<AmbiguityReport, UnambError> {
    if let Some(t) = nfa.transitions().iter().find(|t| t.effect != 0) {
        return Err(UnambError::NonZeroEffects(t.effect));
    }
    let q = nfa.num_states();
    if 2 * q * q > 8_000_000 {
        return Err(UnambError::ScaleLimit(format!(
            "self-product with {} nodes",
            2 * q * q
        )));
    }
    let idx = |p: StateId, r: StateId, d: bool| (p * q + r) * 2 + d as usize;
    // Parent edge plus the divergence flag of the predecessor node (the
    // edge alone does not determine it when the transitions differ).
    let mut parent: Vec<Option<(Transition, Transition, bool)>> = vec![None; 2 * q * q];
    let mut seen = vec![false; 2 * q * q];
    seen[idx(s0, s0, false)] = true;
    let mut queue = VecDeque::from([(s0, s0, false)]);
    let mut goal = None;
    'bfs: while let Some((p, r, d)) = queue.pop_front() {
        if d && nfa.is_accepting(p) && nfa.is_accepting(r) {
            goal = Some((p, r, d));
            break 'bfs;
        }
        for t1 in nfa.outgoing(p) {
            for t2 in nfa.outgoing(r) {
                if t1.letter != t2.letter {
                    continue;
                }
                let d2 = d || t1 != t2;
                let node = idx(t1.dst, t2.dst, d2);
                if !seen[node] {
                    seen[node] = true;
                    parent[node] = Some((*t1, *t2, d));
                    queue.push_back((t1.dst, t2.dst, d2));
                }
            }
        }
    }
    let Some((mut p, mut r, mut d)) = goal else {
        return Ok(AmbiguityReport::unambiguous());
    };
    let mut run_a = Vec::new();
    let mut run_b = Vec::new();
    while !(p == s0 && r == s0 && !d) {
        let (t1, t2, d_prev) = parent[idx(p, r, d)].expect("reached node has a parent");
        run_a.push(t1);
        run_b.push(t2);
        p = t1.src;
        r = t2.src;
        d = d_prev;
    }
    run_a.reverse();
    run_b.reverse();
    let word = run_a.iter().map(|t| nfa.letter_name(t.letter).to_string()).collect();
    Ok(AmbiguityReport {
        ambiguous: true,
        witness: Some(AmbiguityWitness {
            word,
            run_a: render_run(nfa, &run_a),
            run_b: render_run(nfa, &run_b),
        }),
    })
}

fn ambiguous_err(report: AmbiguityReport) -> UnambError {
    let word = report
        .witness
        .as_ref()
        .map(|w| w.word.join(" "))
        .unwrap_or_default();
    UnambError::Ambiguous(word, report)
}

/// Universality of an unambiguous zero-effect automaton.
///
/// Singleton alphabet: an unambiguous automaton rejecting some length
/// rejects one at most |Q|, so a layered sweep suffices. General alphabet:
/// the number of accepting runs of length n (transition-count matrix
/// powers) equals the number of accepted words, and the deficiency
/// |alphabet|^n minus that count obeys a linear recurrence of order at
/// most |Q|+1, so |Q|+2 leading zeros force all-zero deficiencies.
pub fn ufa_universal_counting(ufa: &Ocn, s0: StateId) -> Result<Verdict, UnambError> {
    let report = is_unambiguous_nfa(ufa, s0)?;
    if report.ambiguous {
        return Err(ambiguous_err(report));
    }
    let lemma = "unamb:ufa-counting";
    let q = ufa.num_states();
    if ufa.num_letters() == 1 {
        let mut frontier = vec![false; q];
        frontier[s0] = true;
        for n in 0..=q as u64 {
            if !(0..q).any(|s| frontier[s] && ufa.is_accepting(s)) {
                return Ok(Verdict::not_universal_length(lemma, n));
            }
            let mut next = vec![false; q];
            for s in 0..q {
                if frontier[s] {
                    for t in ufa.outgoing(s) {
                        next[t.dst] = true;
                    }
                }
            }
            frontier = next;
        }
        return Ok(Verdict::universal(lemma));
    }
    let sigma = ufa.num_letters() as u128;
    let mut counts = vec![vec![0u128; q]; q];
    for t in ufa.transitions() {
        counts[t.src][t.dst] += 1;
    }
    // row[j] = number of runs s0 -> j of the current length.
    let mut row = vec![0u128; q];
    row[s0] = 1;
    let mut pow = 1u128;
    for n in 0..=(q as u64 + 1) {
        let a_n: u128 = (0..q).filter(|&s| ufa.is_accepting(s)).map(|s| row[s]).sum();
        debug_assert!(a_n <= pow, "more accepting runs than words: input was ambiguous");
        if a_n < pow {
            return witness_of_deficient_length(ufa, s0, n as usize, lemma);
        }
        let mut next = vec![0u128; q];
        for i in 0..q {
            if row[i] == 0 {
                continue;
            }
            for j in 0..q {
                if counts[i][j] != 0 {
                    let add = row[i]
                        .checked_mul(counts[i][j])
                        .ok_or_else(|| UnambError::ScaleLimit("run count overflow".into()))?;
                    next[j] = next[j]
                        .checked_add(add)
                        .ok_or_else(|| UnambError::ScaleLimit("run count overflow".into()))?;
                }
            }
        }
        row = next;
        pow = pow
            .checked_mul(sigma)
            .ok_or_else(|| UnambError::ScaleLimit("word count overflow".into()))?;
    }
    Ok(Verdict::universal(lemma))
}

/// Enumerates words of the deficient length and returns the first rejected
/// one. Exponential in the length; the callers keep it at |Q|+1 or below.
fn witness_of_deficient_length(
    ufa: &Ocn,
    s0: StateId,
    n: usize,
    lemma: &str,
) -> Result<Verdict, UnambError> {
    let sigma = ufa.num_letters();
    if (sigma as f64).powi(n as i32) > 4_000_000.0 {
        return Err(UnambError::ScaleLimit(format!(
            "witness enumeration over {sigma}^{n} words"
        )));
    }
    let mut word: Vec<LetterId> = vec![0; n];
    loop {
        if !ufa.accepts(s0, 0, &word) {
            let rendered = word.iter().map(|&l| ufa.letter_name(l).to_string()).collect();
            return Ok(Verdict::not_universal_word(lemma, rendered));
        }
        // Next word in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                unreachable!("a deficient length has a rejected word");
            }
            i -= 1;
            word[i] += 1;
            if word[i] < sigma {
                break;
            }
            word[i] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandMode {
    /// Counter overflow above the cap switches to a copy of the underlying
    /// automaton where the counter is forgotten.
    OverflowCopy,
    /// Counter overflow above the cap disables the transition.
    RejectOverCap,
}

/// Zero-effect expansion of a net that stores the counter in the state:
/// states `q@c` for c in 0..=cap, plus overflow states `q@inf` in
/// overflow-copy mode. Runs of the expansion correspond to runs of the net
/// (those bounded by the cap, in reject-over-cap mode).
pub fn counter_expand(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    cap: u64,
    mode: ExpandMode,
) -> Result<(Ocn, StateId), UnambError> {
    if c0 > cap {
        return Err(UnambError::CapBelowInitial { c0, cap });
    }
    let layers = cap as usize + 1;
    if ocn.num_states().saturating_mul(layers) > 400_000 {
        return Err(UnambError::ScaleLimit(format!(
            "counter expansion with {} states",
            ocn.num_states() * layers
        )));
    }
    let mut b = OcnBuilder::new("expansion");
    for l in 0..ocn.num_letters() {
        b.letter(ocn.letter_name(l));
    }
    let mut layered = vec![vec![0usize; layers]; ocn.num_states()];
    for s in 0..ocn.num_states() {
        for c in 0..layers {
            let name = format!("{}@{}", ocn.state_name(s), c);
            layered[s][c] = b.state(&name, s == s0 && c == c0 as usize, ocn.is_accepting(s));
        }
    }
    let mut overflow = vec![0usize; ocn.num_states()];
    if mode == ExpandMode::OverflowCopy {
        for s in 0..ocn.num_states() {
            let name = format!("{}@inf", ocn.state_name(s));
            overflow[s] = b.state(&name, false, ocn.is_accepting(s));
        }
        for t in ocn.transitions() {
            b.trans(overflow[t.src], t.letter, 0, overflow[t.dst]);
        }
    }
    for t in ocn.transitions() {
        for c in 0..layers {
            let c2 = c as i64 + t.effect;
            if c2 < 0 {
                continue;
            }
            if c2 as usize >= layers {
                if mode == ExpandMode::OverflowCopy {
                    b.trans(layered[t.src][c], t.letter, 0, overflow[t.dst]);
                }
                continue;
            }
            b.trans(layered[t.src][c], t.letter, 0, layered[t.dst][c2 as usize]);
        }
    }
    let exp = b.build().expect("expansion has a unique initial state");
    let e0 = exp
        .state_id(&format!("{}@{}", ocn.state_name(s0), c0))
        .expect("initial layer state exists");
    Ok((exp, e0))
}

/// Outcome of the best-effort semantic unambiguity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnambStatus {
    Unambiguous,
    Ambiguous(AmbiguityReport),
    /// Unambiguity could be neither confirmed nor refuted: the net has
    /// parallel transitions differing only in effect, and the bounded
    /// expansion kept collapsing them above its cap.
    Unverified(String),
}

fn base_cap(ocn: &Ocn, c0: u64) -> u64 {
    let q = ocn.num_states() as u64;
    let norm = ocn.max_norm() as u64;
    c0.saturating_add(
        2u64.saturating_mul(q)
            .saturating_mul(q.saturating_mul(norm).saturating_add(1))
            .saturating_mul(norm.max(1)),
    )
}

/// Searches for two distinct accepting runs of `word` from (s0, c0),
/// verifying a candidate ambiguity witness against the real semantics.
fn two_accepting_runs(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    word: &[LetterId],
) -> Option<(Vec<Transition>, Vec<Transition>)> {
    let mut found: Vec<Vec<Transition>> = Vec::new();
    let mut stack: Vec<Transition> = Vec::with_capacity(word.len());
    fn dfs(
        ocn: &Ocn,
        s: StateId,
        c: i128,
        word: &[LetterId],
        i: usize,
        stack: &mut Vec<Transition>,
        found: &mut Vec<Vec<Transition>>,
    ) {
        if found.len() >= 2 {
            return;
        }
        if i == word.len() {
            if ocn.is_accepting(s) {
                found.push(stack.clone());
            }
            return;
        }
        for t in ocn.outgoing(s) {
            if t.letter == word[i] && c + t.effect as i128 >= 0 {
                stack.push(*t);
                dfs(ocn, t.dst, c + t.effect as i128, word, i + 1, stack, found);
                stack.pop();
                if found.len() >= 2 {
                    return;
                }
            }
        }
    }
    dfs(ocn, s0, c0 as i128, word, 0, &mut stack, &mut found);
    if found.len() >= 2 {
        let b = found.pop().unwrap();
        let a = found.pop().unwrap();
        Some((a, b))
    } else {
        None
    }
}

/// Best-effort semantic unambiguity check of (net, s0, c0): structural
/// fast path, then ambiguity analysis of a counter expansion whose cap is
/// doubled while candidate witnesses fail to verify against the real
/// semantics. The expansion's overflow copy forgets effects, so parallel
/// transitions differing only in effect can collapse there; when that is
/// the only remaining possibility, the result is Unverified.
pub fn check_unambiguous(ocn: &Ocn, s0: StateId, c0: u64) -> Result<UnambStatus, UnambError> {
    let structural = is_unambiguous_nfa(&ocn.underlying_nfa(), s0)?;
    if !structural.ambiguous && !ocn.has_effect_parallel_transitions() {
        return Ok(UnambStatus::Unambiguous);
    }
    let mut cap = base_cap(ocn, c0);
    let mut last_scale_error = None;
    for _attempt in 0..4 {
        let (exp, e0) = match counter_expand(ocn, s0, c0, cap, ExpandMode::OverflowCopy) {
            Ok(pair) => pair,
            Err(e @ UnambError::ScaleLimit(_)) => {
                last_scale_error = Some(e);
                break;
            }
            Err(e) => return Err(e),
        };
        let report = is_unambiguous_nfa(&exp, e0)?;
        let Some(witness) = report.witness else {
            // No ambiguity in the expansion. This is conclusive unless
            // effect-parallel transitions were collapsed in a reachable
            // overflow state.
            let reach = exp.reachable_states(e0);
            let overflow_reached = (0..exp.num_states())
                .any(|s| reach[s] && exp.state_name(s).ends_with("@inf"));
            if !(overflow_reached && ocn.has_effect_parallel_transitions()) {
                return Ok(UnambStatus::Unambiguous);
            }
            return Ok(UnambStatus::Unverified(
                "unverified unambiguity: parallel transitions differing only in effect \
                 may collapse above the expansion cap"
                    .to_string(),
            ));
        };
        let word: Vec<LetterId> = witness
            .word
            .iter()
            .map(|l| ocn.letter_id(l).expect("expansion preserves letters"))
            .collect();
        if let Some((a, b)) = two_accepting_runs(ocn, s0, c0, &word) {
            return Ok(UnambStatus::Ambiguous(AmbiguityReport {
                ambiguous: true,
                witness: Some(AmbiguityWitness {
                    word: witness.word,
                    run_a: render_run(ocn, &a),
                    run_b: render_run(ocn, &b),
                }),
            }));
        }
        // Spurious witness from the overflow copy: enlarge the cap.
        cap = cap.saturating_mul(2);
    }
    if let Some(e) = last_scale_error {
        return Err(e);
    }
    Ok(UnambStatus::Unverified(
        "unverified unambiguity: expansion witnesses kept failing to verify".to_string(),
    ))
}

fn apply_status(status: UnambStatus) -> Result<Option<String>, UnambError> {
    match status {
        UnambStatus::Unambiguous => Ok(None),
        UnambStatus::Unverified(warning) => Ok(Some(warning)),
        UnambStatus::Ambiguous(report) => Err(ambiguous_err(report)),
    }
}

/// Universality of an unambiguous net over a singleton alphabet: counters
/// above |Q| norm can never block a continuation, so the expansion capped
/// there (with an overflow copy) has the same language, and a rejected
/// length, if any, appears within the expansion's state count.
pub fn decide_uocn_universality_unary(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
) -> Result<Verdict, UnambError> {
    if ocn.num_letters() != 1 {
        return Err(UnambError::NotSingleton(ocn.num_letters()));
    }
    let warning = apply_status(check_unambiguous(ocn, s0, c0)?)?;
    let q = ocn.num_states() as u64;
    let cap = c0.max(q.saturating_mul(ocn.max_norm() as u64));
    let (exp, e0) = counter_expand(ocn, s0, c0, cap, ExpandMode::OverflowCopy)?;
    let mut verdict = ufa_universal_counting(&exp, e0)?;
    verdict.lemma = "unamb:unary-expansion".to_string();
    if let Some(w) = warning {
        verdict = verdict.with_warning(w);
    }
    Ok(verdict)
}

/// Initial-value universality of a structurally unambiguous net: some
/// initial counter works iff the underlying automaton is universal and the
/// net has no negative simple cycle; |Q| norm then suffices.
pub fn decide_suocn_iv_universality(ocn: &Ocn, s0: StateId) -> Result<Verdict, UnambError> {
    let nfa = ocn.underlying_nfa();
    let structural = is_unambiguous_nfa(&nfa, s0)?;
    if structural.ambiguous {
        return Err(ambiguous_err(structural));
    }
    let lemma = "unamb:structure";
    let mut verdict = ufa_universal_counting(&nfa, s0)?;
    if !verdict.is_universal() {
        verdict.lemma = lemma.to_string();
        return Ok(verdict);
    }
    let (sub, _, _) = ocn.restrict_to_reachable(s0);
    if cycle_spectrum(&sub).negative_cycle().is_some() {
        return Ok(Verdict {
            answer: crate::verdict::Answer::NotUniversal,
            witness: None,
            parameter: None,
            lemma: lemma.to_string(),
            warnings: vec![
                "a reachable negative cycle outruns every initial counter".to_string(),
            ],
        });
    }
    let c0 = (ocn.num_states() as u64).saturating_mul(ocn.max_norm() as u64);
    Ok(Verdict::universal_with(lemma, c0))
}

/// Bounded universality of an unambiguous net: with the counter capped at
/// b = c0 + |Q| norm, the bounded language equals the language of the
/// reject-over-cap expansion, whose universality the counting check
/// decides; no larger bound can help an unambiguous net.
pub fn decide_uocn_bounded_universality(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
) -> Result<Verdict, UnambError> {
    let warning = apply_status(check_unambiguous(ocn, s0, c0)?)?;
    let q = ocn.num_states() as u64;
    let b = c0.saturating_add(q.saturating_mul(ocn.max_norm() as u64));
    let (exp, e0) = counter_expand(ocn, s0, c0, b, ExpandMode::RejectOverCap)?;
    let mut verdict = ufa_universal_counting(&exp, e0)?;
    verdict.lemma = "unamb:bounded-expansion".to_string();
    if verdict.is_universal() {
        verdict.parameter = Some(b);
    }
    if let Some(w) = warning {
        verdict = verdict.with_warning(w);
    }
    Ok(verdict)
}
