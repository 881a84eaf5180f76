//! Cycle analysis and linear-form path canonicalization.
//!
//! A linear form rewrites a path into `tau0 g1^e1 tau1 ... gk^ek tauk` where
//! the `gi` are cycles with binary exponents and the underlying path
//! `tau0 g1 tau1 ... gk tauk` is short. Executability of such a form is
//! decidable without unrolling the exponents, which is what makes the unary
//! deciders polynomial in the bit length of word lengths.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::ocn::{
    is_chained, path_measures, run_of_path, NotExecutable, Ocn, StateId, Transition,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("cycle must be non-empty")]
    EmptyCycle,
    #[error("path is not a well-chained cycle")]
    NotACycle,
    #[error("segments of the linear form do not chain")]
    BadChaining,
    #[error("linear form canonicalization requires a singleton alphabet")]
    NotSingleton,
    #[error(transparent)]
    NotExecutable(#[from] NotExecutable),
    #[error("unrolling would produce {0} transitions, above the supported limit")]
    UnrollTooLarge(u128),
}

/// A non-empty, well-chained path that starts and ends at the same state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    path: Vec<Transition>,
}

impl Cycle {
    pub fn new(path: Vec<Transition>) -> Result<Cycle, FormError> {
        if path.is_empty() {
            return Err(FormError::EmptyCycle);
        }
        if !is_chained(&path) || path[0].src != path[path.len() - 1].dst {
            return Err(FormError::NotACycle);
        }
        Ok(Cycle { path })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> StateId {
        self.path[0].src
    }

    pub fn effect(&self) -> i128 {
        path_measures(&self.path).effect
    }

    pub fn depth(&self) -> i128 {
        path_measures(&self.path).depth
    }

    /// No proper cycle infix: the visited states (excluding the closing
    /// repetition of the start) are pairwise distinct.
    pub fn is_simple(&self) -> bool {
        let mut seen = Vec::with_capacity(self.path.len());
        for t in &self.path {
            if seen.contains(&t.src) {
                return false;
            }
            seen.push(t.src);
        }
        true
    }
}

/// The smallest prefix length `d >= 1` whose cumulative effect equals
/// `-depth(cycle)`. Convention: cycles of depth 0 return `d = len` (the full
/// cycle), so shifting such cycles is the identity.
pub fn nadir_of(cycle: &Cycle) -> usize {
    let depth = cycle.depth();
    if depth == 0 {
        return cycle.len();
    }
    let mut sum: i128 = 0;
    for (i, t) in cycle.transitions().iter().enumerate() {
        sum += t.effect as i128;
        if sum == -depth {
            return i + 1;
        }
    }
    unreachable!("depth is attained by some prefix");
}

/// Rotates the cycle to start right after its nadir. For cycles with
/// effect >= 0 the result has depth 0; for negative cycles the result
/// satisfies effect = -depth.
pub fn shift_to_nadir(cycle: &Cycle) -> Cycle {
    let d = nadir_of(cycle);
    if d == cycle.len() {
        return cycle.clone();
    }
    let mut path = cycle.transitions()[d..].to_vec();
    path.extend_from_slice(&cycle.transitions()[..d]);
    Cycle::new(path).expect("rotation of a cycle is a cycle")
}

/// The lexicographically smallest (start state, transitions) among the
/// nadir rotations of the cycle, i.e. rotations with depth 0 when the
/// effect is non-negative and with effect = -depth otherwise. At least one
/// exists by `shift_to_nadir`.
fn canonical_rotation(cycle: &Cycle) -> Cycle {
    let k = cycle.len();
    let mut best: Option<Cycle> = None;
    for d in 0..k {
        let mut path = cycle.transitions()[d..].to_vec();
        path.extend_from_slice(&cycle.transitions()[..d]);
        let rot = Cycle::new(path).expect("rotation of a cycle is a cycle");
        let valid = if rot.effect() >= 0 {
            rot.depth() == 0
        } else {
            rot.effect() == -rot.depth()
        };
        if valid
            && best.as_ref().is_none_or(|b| {
                (rot.start(), rot.transitions()) < (b.start(), b.transitions())
            })
        {
            best = Some(rot);
        }
    }
    best.expect("every cycle has a nadir rotation")
}

/// Exchanges iterations of a cycle group for extra iterations of good
/// cycle groups with the same total length, whenever the added effect
/// covers the removed effect. Removing a cycle with effect <= 0 never
/// lowers a counter after it, and good cycles iterate from any counter and
/// only raise the counters after their anchor, so such an exchange keeps
/// the decomposition executable with the same total length and a final
/// counter at least as large. A positive-effect cycle is only exchanged
/// into anchors that come earlier, so the counters in between grow too.
fn dissolve_groups(taus: &mut Vec<Vec<Transition>>, cycles: &mut Vec<(Cycle, u64)>) {
    let mut i = 0;
    while i < cycles.len() {
        let eff = cycles[i].0.effect();
        let len = cycles[i].0.len();
        let e = cycles[i].1;
        let items: Vec<(usize, usize, i128)> = cycles
            .iter()
            .enumerate()
            .filter(|(j, (c, _))| *j != i && c.effect() >= 0 && (eff <= 0 || *j < i))
            .map(|(j, (c, _))| (j, c.len(), c.effect()))
            .collect();
        if items.is_empty() {
            i += 1;
            continue;
        }
        // Unbounded knapsack over the receiving groups: the best total
        // effect achievable at each exact total length, with the last item
        // used, for reconstruction.
        let cap = e as usize * len;
        let mut dp: Vec<Option<(i128, usize)>> = vec![None; cap + 1];
        dp[0] = Some((0, usize::MAX));
        for pos in 1..=cap {
            for (idx, &(_, l, v)) in items.iter().enumerate() {
                if l <= pos {
                    if let Some((pv, _)) = dp[pos - l] {
                        if dp[pos].is_none_or(|(cur, _)| pv + v > cur) {
                            dp[pos] = Some((pv + v, idx));
                        }
                    }
                }
            }
        }
        // Largest iteration count exchangeable without losing effect.
        let k = (1..=e)
            .rev()
            .find(|&k| dp[k as usize * len].is_some_and(|(v, _)| v >= k as i128 * eff));
        let Some(k) = k else {
            i += 1;
            continue;
        };
        let mut pos = k as usize * len;
        while pos > 0 {
            let (_, idx) = dp[pos].expect("reconstruction follows reachable entries");
            let (j, l, _) = items[idx];
            cycles[j].1 += 1;
            pos -= l;
        }
        cycles[i].1 -= k;
        if cycles[i].1 == 0 {
            let tail = taus.remove(i + 1);
            taus[i].extend(tail);
            cycles.remove(i);
            // Indices shifted and the absorbers grew; rescan from the start.
            // Each rescan follows a removal, so the loop terminates.
            i = 0;
        } else {
            i += 1;
        }
    }
}

/// Simple, non-negative effect, and depth 0 — iterable from any counter.
pub fn is_good_cycle(cycle: &Cycle) -> bool {
    cycle.is_simple() && cycle.effect() >= 0 && cycle.depth() == 0
}

/// Canonical decomposition `tau0 g1^e1 tau1 ... gk^ek tauk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    /// `taus.len() == cycles.len() + 1`; segments chain end to end.
    taus: Vec<Vec<Transition>>,
    cycles: Vec<(Cycle, u64)>,
}

impl LinearForm {
    pub fn new(taus: Vec<Vec<Transition>>, cycles: Vec<(Cycle, u64)>) -> Result<Self, FormError> {
        if taus.len() != cycles.len() + 1 {
            return Err(FormError::BadChaining);
        }
        let lf = LinearForm { taus, cycles };
        let mut current: Option<StateId> = None;
        for (i, tau) in lf.taus.iter().enumerate() {
            if !is_chained(tau) {
                return Err(FormError::BadChaining);
            }
            if let (Some(s), Some(first)) = (current, tau.first()) {
                if first.src != s {
                    return Err(FormError::BadChaining);
                }
            }
            if let Some(last) = tau.last() {
                current = Some(last.dst);
            }
            if i < lf.cycles.len() {
                let start = lf.cycles[i].0.start();
                if current.map_or(false, |s| s != start) {
                    return Err(FormError::BadChaining);
                }
                current = Some(start);
            }
        }
        Ok(lf)
    }

    pub fn taus(&self) -> &[Vec<Transition>] {
        &self.taus
    }

    pub fn cycles(&self) -> &[(Cycle, u64)] {
        &self.cycles
    }

    /// Total length with exponents applied.
    pub fn unrolled_len(&self) -> u128 {
        let taus: u128 = self.taus.iter().map(|t| t.len() as u128).sum();
        let cycles: u128 = self
            .cycles
            .iter()
            .map(|(c, e)| c.len() as u128 * *e as u128)
            .sum();
        taus + cycles
    }

    /// Length of the underlying path `tau0 g1 tau1 ... gk tauk`.
    pub fn underlying_len(&self) -> usize {
        self.taus.iter().map(Vec::len).sum::<usize>()
            + self.cycles.iter().map(|(c, _)| c.len()).sum::<usize>()
    }

    /// Materializes the full path; only valid at small unrolled lengths.
    pub fn unroll(&self) -> Result<Vec<Transition>, FormError> {
        let len = self.unrolled_len();
        if len > 1_000_000 {
            return Err(FormError::UnrollTooLarge(len));
        }
        let mut path = Vec::with_capacity(len as usize);
        for (i, tau) in self.taus.iter().enumerate() {
            path.extend_from_slice(tau);
            if i < self.cycles.len() {
                let (c, e) = &self.cycles[i];
                for _ in 0..*e {
                    path.extend_from_slice(c.transitions());
                }
            }
        }
        Ok(path)
    }

    /// Human-readable shape summary, e.g. `tau 2 | cyc 1 ^ 5 | tau 0`.
    pub fn explain(&self) -> String {
        let mut parts = Vec::new();
        for (i, tau) in self.taus.iter().enumerate() {
            parts.push(format!("tau {}", tau.len()));
            if i < self.cycles.len() {
                let (c, e) = &self.cycles[i];
                parts.push(format!("cyc {} ^ {}", c.len(), e));
            }
        }
        parts.join(" | ")
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.explain())
    }
}

/// Decides executability of the form from counter `c` without unrolling;
/// returns the final counter when executable.
///
/// Non-negative cycles need the counter to clear their depth once (later
/// iterations start no lower); for negative cycles the last iteration is the
/// hardest, so executability reduces to `c + (e-1)*effect >= depth`.
pub fn linear_form_executable(lf: &LinearForm, c: u64) -> Option<i128> {
    let mut counter = c as i128;
    for (i, tau) in lf.taus.iter().enumerate() {
        for t in tau {
            counter += t.effect as i128;
            if counter < 0 {
                return None;
            }
        }
        if i < lf.cycles.len() {
            let (cyc, e) = &lf.cycles[i];
            if *e == 0 {
                continue;
            }
            let eff = cyc.effect();
            let dep = cyc.depth();
            let e = *e as i128;
            let needed = if eff >= 0 { dep } else { dep - (e - 1) * eff };
            if counter < needed {
                return None;
            }
            counter += e * eff;
        }
    }
    Some(counter)
}

/// Canonicalizes an executable path of a singleton-alphabet net into a
/// linear form of the same unrolled length, executable from the same
/// counter, with final counter at least as high and a short underlying path.
///
/// Excision strategy: occurrence marks (first and last position of every
/// state along the path) are computed once. As long as some state repeats
/// along the residual path with only mark-free positions after the first,
/// the simple cycle it closes is excised, shifted to its nadir, and
/// re-anchored at the first occurrence of its start state (effect >= 0) or
/// the last occurrence (effect < 0). Finally, per (state, length) the
/// dangling cycles are replaced by the maximum-effect representative among
/// them and equal cycles at an anchor are bunched into one exponent.
pub fn to_linear_form(ocn: &Ocn, path: &[Transition], c0: u64) -> Result<LinearForm, FormError> {
    if !ocn.is_singleton_alphabet() {
        return Err(FormError::NotSingleton);
    }
    run_of_path(path, c0)?;
    let n = path.len();
    if n == 0 {
        return Ok(LinearForm { taus: vec![Vec::new()], cycles: Vec::new() });
    }

    // states[p] is the state at position p, 0 <= p <= n.
    let mut states = Vec::with_capacity(n + 1);
    states.push(path[0].src);
    for t in path {
        states.push(t.dst);
    }
    let mut first: HashMap<StateId, usize> = HashMap::new();
    let mut last: HashMap<StateId, usize> = HashMap::new();
    for (p, &s) in states.iter().enumerate() {
        first.entry(s).or_insert(p);
        last.insert(s, p);
    }
    let marked: Vec<bool> = states
        .iter()
        .enumerate()
        .map(|(p, s)| first[s] == p || last[s] == p)
        .collect();

    let mut alive = vec![true; n];
    let mut dangling: Vec<Cycle> = Vec::new();

    // Excise a repeat pair (a, k) of residual positions with the same state
    // whenever every position of the closed block except the first is
    // unmarked. The earliest unblocked closure has no interior repeat (an
    // interior repeat over unmarked positions would close earlier), so the
    // block is a simple cycle; its nadir lands on an unmarked position, so
    // the nadir state has a strictly earlier first and strictly later last
    // occurrence to reattach at, and no marked position is ever consumed.
    loop {
        // Residual state positions: 0 plus the targets of alive transitions.
        let rs: Vec<usize> = std::iter::once(0)
            .chain((0..n).filter(|&i| alive[i]).map(|i| i + 1))
            .collect();
        let mut seen: HashMap<StateId, usize> = HashMap::new();
        let mut found = None;
        for k in 0..rs.len() {
            let s = states[rs[k]];
            if let Some(&a) = seen.get(&s) {
                if (a + 1..=k).all(|m| !marked[rs[m]]) {
                    found = Some((a, k));
                    break;
                }
            }
            seen.insert(s, k);
        }
        let Some((a, k)) = found else {
            break;
        };
        let cyc_path: Vec<Transition> = (a..k).map(|m| path[rs[m + 1] - 1]).collect();
        for m in a..k {
            alive[rs[m + 1] - 1] = false;
        }
        let cycle = Cycle::new(cyc_path).expect("excised block is a cycle");
        // Any rotation starting inside the block is anchorable (those
        // positions are unmarked), so pick the canonical nadir rotation to
        // merge rotation-equivalent cycles across start states.
        dangling.push(canonical_rotation(&cycle));
    }

    // Maximum-effect representative per (start state, length); ties broken
    // by lexicographically smallest transition sequence.
    let mut reps: HashMap<(StateId, usize), Cycle> = HashMap::new();
    for cyc in &dangling {
        let key = (cyc.start(), cyc.len());
        match reps.get(&key) {
            Some(best)
                if (best.effect(), std::cmp::Reverse(best.transitions()))
                    >= (cyc.effect(), std::cmp::Reverse(cyc.transitions())) => {}
            _ => {
                reps.insert(key, cyc.clone());
            }
        }
    }
    // One group per representative, anchored by the representative's sign:
    // a non-negative cycle is good and can move to the first occurrence of
    // its start state, a negative one waits at the last occurrence. Within
    // an anchor: non-negative effects first, shorter first per sign class.
    let mut counts: HashMap<(StateId, usize), u64> = HashMap::new();
    for cyc in &dangling {
        *counts.entry((cyc.start(), cyc.len())).or_insert(0) += 1;
    }
    let mut anchored: HashMap<usize, Vec<(Cycle, u64)>> = HashMap::new();
    for (key, count) in counts {
        let rep = reps[&key].clone();
        let anchor =
            if rep.effect() >= 0 { first[&key.0] } else { last[&key.0] };
        anchored.entry(anchor).or_default().push((rep, count));
    }
    for groups in anchored.values_mut() {
        groups.sort_by_key(|(c, _)| (c.effect() < 0, c.len()));
    }

    // Assemble: walk the residual path, flushing the current tau at every
    // anchor that carries cycles.
    let rs: Vec<usize> = std::iter::once(0)
        .chain((0..n).filter(|&i| alive[i]).map(|i| i + 1))
        .collect();
    let mut taus: Vec<Vec<Transition>> = Vec::new();
    let mut cycles: Vec<(Cycle, u64)> = Vec::new();
    let mut cur: Vec<Transition> = Vec::new();
    for (m, &p) in rs.iter().enumerate() {
        if let Some(groups) = anchored.get(&p) {
            for (cyc, e) in groups {
                taus.push(std::mem::take(&mut cur));
                cycles.push((cyc.clone(), *e));
            }
        }
        if m + 1 < rs.len() {
            cur.push(path[rs[m + 1] - 1]);
        }
    }
    taus.push(cur);

    // Dissolve groups into extra iterations of good cycle groups of the
    // same total length. Good cycles (depth 0 here by construction) are
    // executable anywhere and raise every counter after their anchor, so an
    // exchange is safe whenever the removed effect does not exceed the
    // added effect and no counter in between can drop: always for groups
    // with effect <= 0, and for positive groups when the receiving anchors
    // all come earlier.
    dissolve_groups(&mut taus, &mut cycles);

    // Opportunistic compaction: absorb literal occurrences of a cycle from
    // taus into its exponent. A non-negative cycle may absorb copies from
    // any later tau (moving them earlier only raises counters in between),
    // a negative cycle from any earlier tau (moving them later does the
    // same), and either kind the copies immediately adjacent to its group.
    // Afterwards merge equal adjacent cycles separated by an empty tau.
    for i in 0..cycles.len() {
        let c = cycles[i].0.transitions().to_vec();
        let nonneg = cycles[i].0.effect() >= 0;
        let js: Vec<usize> =
            if nonneg { (i + 1..taus.len()).collect() } else { (0..=i).collect() };
        for j in js {
            loop {
                let tau = &mut taus[j];
                let starts = (tau.len() + 1).saturating_sub(c.len());
                let Some(pos) = (0..starts).find(|&p| tau[p..p + c.len()] == c[..]) else {
                    break;
                };
                tau.drain(pos..pos + c.len());
                cycles[i].1 += 1;
            }
        }
        // Adjacent copy right after a negative group: same path, reordered
        // copies of the same cycle, always safe.
        if !nonneg {
            loop {
                let tau = &mut taus[i + 1];
                if tau.len() >= c.len() && tau[..c.len()] == c[..] {
                    tau.drain(..c.len());
                    cycles[i].1 += 1;
                } else {
                    break;
                }
            }
        }
    }
    let mut i = 0;
    while i + 1 < cycles.len() {
        if taus[i + 1].is_empty() && cycles[i].0 == cycles[i + 1].0 {
            cycles[i].1 += cycles[i + 1].1;
            cycles.remove(i + 1);
            taus.remove(i + 1);
        } else {
            i += 1;
        }
    }

    let lf = LinearForm::new(taus, cycles)?;
    debug_assert_eq!(lf.unrolled_len(), n as u128);
    debug_assert!(linear_form_executable(&lf, c0).is_some());
    Ok(lf)
}
