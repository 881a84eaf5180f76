//! Deciders for singleton-alphabet nets: universality, initial-value
//! universality, and bounded universality.
//!
//! Over a one-letter alphabet the language is a set of lengths, and every
//! "language via a designated state" is eventually periodic. The deciders
//! build explicit lasso representations of those sets for pump states
//! (states admitting good cycles) or stable states (states admitting zero
//! cycles), sweep an exact membership DP below the lasso thresholds, and
//! finish with residue-class analysis beyond them.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::det::cycle_spectrum;
use crate::forms::Cycle;
use crate::ocn::{path_measures, MaxCounterDp, Ocn, StateId, Transition, ViaDp};
use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum UnaryError {
    #[error("operation requires a singleton alphabet, net has {0} letters")]
    NotSingleton(usize),
    #[error("operation requires zero effects, found effect {0}")]
    NonZeroEffects(i64),
    #[error("state `{0}` is not a pump state")]
    NotPumpState(String),
    #[error("state `{0}` is not a stable state")]
    NotStableState(String),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
}

/// Explicit instantiations of the polynomial bounds used by the lassos.
/// Over-approximation is sound here: larger bounds only enlarge tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Segment-length bound of canonical runs `eta1 gamma^t eta2` around a
    /// pump cycle: 16 (|Q|+1)^3 (norm+1).
    pub b1: u64,
    /// Pump-state lasso size bound (threshold plus period).
    pub b2: u64,
    /// Witness bound for unary universality (alias of b2 at our scale).
    pub b3: u64,
    /// Lasso size bound on the underlying automaton (norm plays no role).
    pub b4: u64,
    /// Depth (and nominal length) bound for synthesized zero cycles:
    /// |Q| (|Q| norm) + (3 |Q| norm) |Q|.
    pub b5: u64,
    /// Counter headroom bound for bounded universality; chosen so that
    /// 2 b6 covers norm times the stable lasso threshold.
    pub b6: u64,
    /// Stable-state lasso size bound.
    pub b7: u64,
    /// Segment-length bound of canonical runs around a zero cycle.
    pub b6_len: u64,
}

impl Bounds {
    /// `max_zero_period` is the largest synthesized zero-cycle length of
    /// the net (0 when unused); it feeds b6 so that the returned bound
    /// covers every counter reachable within the stable lasso threshold.
    pub fn for_net(ocn: &Ocn, max_zero_period: u64) -> Bounds {
        let q = ocn.num_states() as u64;
        let norm = ocn.max_norm() as u64;
        let p = max_zero_period;
        let b1 = 16u64
            .saturating_mul((q + 1).saturating_pow(3))
            .saturating_mul(norm + 1);
        let b1_nfa = 16u64.saturating_mul((q + 1).saturating_pow(3));
        let b5 = 4u64.saturating_mul(q).saturating_mul(q).saturating_mul(norm);
        let b6_len = b1.saturating_add(b5.saturating_mul(q + 1));
        let b6 = b6_len
            .saturating_add(b5)
            .saturating_add(p)
            .saturating_mul(norm + 1);
        let b2 = 2u64
            .saturating_mul(b1)
            .saturating_add(2u64.saturating_mul(b1).saturating_mul(norm).saturating_mul(q))
            .saturating_add(2 * q);
        let b4 = 2u64.saturating_mul(b1_nfa).saturating_add(2 * q);
        let b7 = 2u64.saturating_mul(b6_len).saturating_add(2 * p.max(1));
        Bounds { b1, b2, b3: b2, b4, b5, b6, b7, b6_len }
    }

    fn pump_threshold(&self, norm: u64, period: u64) -> u64 {
        2u64.saturating_mul(self.b1)
            .saturating_add(
                2u64.saturating_mul(self.b1).saturating_mul(norm).saturating_mul(period),
            )
            .saturating_add(period)
    }

    fn stable_threshold(&self, period: u64) -> u64 {
        2u64.saturating_mul(self.b6_len).saturating_add(2 * period)
    }

    fn nfa_threshold(ocn: &Ocn, period: u64) -> u64 {
        let q = ocn.num_states() as u64;
        2u64.saturating_mul(16 * (q + 1).saturating_pow(3)).saturating_add(period)
    }
}

/// Eventually periodic subset of the naturals: `n` is accepted iff
/// `n < T` and `table[n]`, or `n >= T` and `table[T + ((n - T) mod p)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryLasso {
    pub threshold: u64,
    pub period: u64,
    pub table: Vec<bool>,
}

impl UnaryLasso {
    pub fn accepts(&self, n: u128) -> bool {
        lasso_accepts(self, n)
    }

    /// Serialization used by the CLI: `lasso T=<int> p=<int> table=<bits>`.
    pub fn explain(&self) -> String {
        let bits: String = self.table.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("lasso T={} p={} table={}", self.threshold, self.period, bits)
    }
}

/// Lasso membership for binary-encoded `n`: one mod operation.
pub fn lasso_accepts(lasso: &UnaryLasso, n: u128) -> bool {
    let t = lasso.threshold as u128;
    let p = lasso.period as u128;
    let idx = if n < t { n } else { t + (n - t) % p };
    lasso.table[idx as usize]
}

fn require_singleton(ocn: &Ocn) -> Result<(), UnaryError> {
    if ocn.num_letters() == 1 {
        Ok(())
    } else {
        Err(UnaryError::NotSingleton(ocn.num_letters()))
    }
}

/// Shortest cycle through `r` of length <= |Q| whose prefixes all have
/// non-negative effect (depth 0) and whose total effect satisfies `pred`.
/// Layered BFS over (state, running effect); effects along such cycles
/// stay within [0, |Q| * norm], so the table is exact.
fn nadir_cycle(ocn: &Ocn, r: StateId, pred: impl Fn(i64) -> bool) -> Option<Cycle> {
    let q = ocn.num_states();
    let cap = q as i64 * ocn.max_norm();
    let width = cap as usize + 1;
    // parents[layer][state][effect]: transition entering this node.
    let mut parents: Vec<Vec<Vec<Option<Transition>>>> = Vec::with_capacity(q + 1);
    parents.push(vec![vec![None; width]; q]);
    let mut frontier: Vec<(StateId, i64)> = vec![(r, 0)];
    for _layer in 1..=q {
        let mut layer_parents = vec![vec![None; width]; q];
        let mut next = Vec::new();
        for &(s, e) in &frontier {
            for t in ocn.outgoing(s) {
                let e2 = e + t.effect;
                if (0..=cap).contains(&e2) && layer_parents[t.dst][e2 as usize].is_none() {
                    layer_parents[t.dst][e2 as usize] = Some(*t);
                    next.push((t.dst, e2));
                }
            }
        }
        parents.push(layer_parents);
        frontier = next;
        let layer = parents.len() - 1;
        if let Some(e) = (0..=cap).find(|&e| pred(e) && parents[layer][r][e as usize].is_some())
        {
            let mut path = Vec::with_capacity(layer);
            let mut state = r;
            let mut eff = e;
            for l in (1..=layer).rev() {
                let t = parents[l][state][eff as usize].expect("node was reached");
                path.push(t);
                state = t.src;
                eff -= t.effect;
            }
            path.reverse();
            return Some(Cycle::new(path).expect("reconstruction closes at r"));
        }
    }
    None
}

/// All states admitting a good cycle (length <= |Q|, depth 0, effect >= 0),
/// each with a shortest such cycle.
///
/// Simplicity is deliberately not enforced: any simple good cycle
/// qualifies, and conversely any run containing a non-negative simple cycle
/// visits the nadir state of its shift, which this detection finds.
pub fn pump_states(ocn: &Ocn) -> Result<BTreeMap<StateId, Cycle>, UnaryError> {
    require_singleton(ocn)?;
    let mut out = BTreeMap::new();
    for r in 0..ocn.num_states() {
        if let Some(c) = nadir_cycle(ocn, r, |e| e >= 0) {
            out.insert(r, c);
        }
    }
    Ok(out)
}

fn backward_reachable(ocn: &Ocn, target: StateId) -> Vec<bool> {
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); ocn.num_states()];
    for t in ocn.transitions() {
        rev[t.dst].push(t.src);
    }
    let mut seen = vec![false; ocn.num_states()];
    seen[target] = true;
    let mut stack = vec![target];
    while let Some(s) = stack.pop() {
        for &p in &rev[s] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// States with a negative simple cycle through them (via the cycle
/// spectrum diagonal).
fn negative_cycle_states(ocn: &Ocn) -> Vec<bool> {
    let sp = cycle_spectrum(ocn);
    (0..ocn.num_states())
        .map(|x| {
            (1..=sp.num_lengths()).any(|k| sp.min_effect(k, x, x).map_or(false, |e| e < 0))
        })
        .collect()
}

/// States that are (1) at the nadir of a positive cycle and mutually
/// reachable with a negative-simple-cycle state, or (2) at the nadir of a
/// zero cycle.
pub fn stable_states(ocn: &Ocn) -> Result<BTreeSet<StateId>, UnaryError> {
    require_singleton(ocn)?;
    let neg = negative_cycle_states(ocn);
    let mut out = BTreeSet::new();
    for q in 0..ocn.num_states() {
        if nadir_cycle(ocn, q, |e| e == 0).is_some() {
            out.insert(q);
            continue;
        }
        if nadir_cycle(ocn, q, |e| e > 0).is_some() {
            let fwd = ocn.reachable_states(q);
            let bwd = backward_reachable(ocn, q);
            if (0..ocn.num_states()).any(|x| fwd[x] && bwd[x] && neg[x]) {
                out.insert(q);
            }
        }
    }
    Ok(out)
}

/// Shortest zero-effect cycle at `q` whose counter excursion stays within
/// `[-depth_cap, height_cap]` relative to the start, found by BFS over
/// (state, relative effect) nodes. Neighbors are expanded in decreasing
/// effect order so the result tends to climb before it falls.
fn bounded_zero_cycle(
    ocn: &Ocn,
    q: StateId,
    depth_cap: i64,
    height_cap: i64,
) -> Option<Cycle> {
    let width = (depth_cap + height_cap + 1) as usize;
    if width.saturating_mul(ocn.num_states()) > 2_000_000 {
        return None;
    }
    let idx = |e: i64| (e + depth_cap) as usize;
    let mut parent: Vec<Vec<Option<Transition>>> = vec![vec![None; width]; ocn.num_states()];
    let mut seen = vec![vec![false; width]; ocn.num_states()];
    seen[q][idx(0)] = true;
    let mut queue = VecDeque::from([(q, 0i64)]);
    let mut sorted_out: Vec<Vec<Transition>> = (0..ocn.num_states())
        .map(|s| ocn.outgoing(s).to_vec())
        .collect();
    for outs in &mut sorted_out {
        outs.sort_by_key(|t| std::cmp::Reverse(t.effect));
    }
    let mut closing: Option<Transition> = None;
    'bfs: while let Some((s, e)) = queue.pop_front() {
        for t in &sorted_out[s] {
            let e2 = e + t.effect;
            if e2 < -depth_cap || e2 > height_cap {
                continue;
            }
            if t.dst == q && e2 == 0 {
                closing = Some(*t);
                break 'bfs;
            }
            if !seen[t.dst][idx(e2)] {
                seen[t.dst][idx(e2)] = true;
                parent[t.dst][idx(e2)] = Some(*t);
                queue.push_back((t.dst, e2));
            }
        }
    }
    let closing = closing?;
    let mut path = vec![closing];
    let mut state = closing.src;
    let mut eff = -closing.effect;
    while !(state == q && eff == 0) {
        let t = parent[state][idx(eff)].expect("BFS node has a parent");
        path.push(t);
        state = t.src;
        eff -= t.effect;
    }
    path.reverse();
    Some(Cycle::new(path).expect("closed by construction"))
}

/// The composed zero cycle `eta^(-effect(chi)) chi^(effect(eta))`, where
/// `eta` is a positive cycle taken at the nadir of `q` and `chi` routes
/// through a mutually reachable negative-cycle state.
pub fn composed_zero_cycle(ocn: &Ocn, q: StateId) -> Option<Cycle> {
    if let Some(z) = nadir_cycle(ocn, q, |e| e == 0) {
        return Some(z);
    }
    let eta = nadir_cycle(ocn, q, |e| e > 0)?;
    let sp = cycle_spectrum(ocn);
    let fwd = ocn.reachable_states(q);
    let bwd = backward_reachable(ocn, q);
    let neg = negative_cycle_states(ocn);
    let x = (0..ocn.num_states()).find(|&x| fwd[x] && bwd[x] && neg[x])?;
    let k = (1..=sp.num_lengths())
        .find(|&k| sp.min_effect(k, x, x).map_or(false, |e| e < 0))
        .expect("x has a negative diagonal");
    let gamma = sp.walk(k, x, x, false).expect("diagonal realized");
    let tau1 = shortest_path(ocn, q, x)?;
    let tau2 = shortest_path(ocn, x, q)?;
    let taus_effect =
        path_measures(&tau1).effect + path_measures(&tau2).effect;
    let s = taus_effect.max(0) + 1;
    let mut chi = tau1;
    for _ in 0..s {
        chi.extend_from_slice(&gamma);
    }
    chi.extend_from_slice(&tau2);
    let chi_effect = path_measures(&chi).effect;
    debug_assert!(chi_effect < 0);
    let eta_effect = path_measures(eta.transitions()).effect;
    let mut path = Vec::new();
    for _ in 0..(-chi_effect) {
        path.extend_from_slice(eta.transitions());
    }
    for _ in 0..eta_effect {
        path.extend_from_slice(&chi);
    }
    Some(Cycle::new(path).expect("composition closes at q"))
}

fn shortest_path(ocn: &Ocn, from: StateId, to: StateId) -> Option<Vec<Transition>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut parent: Vec<Option<Transition>> = vec![None; ocn.num_states()];
    let mut seen = vec![false; ocn.num_states()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for t in ocn.outgoing(s) {
            if !seen[t.dst] {
                seen[t.dst] = true;
                parent[t.dst] = Some(*t);
                queue.push_back(t.dst);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let t = parent[cur].expect("reached");
        path.push(t);
        cur = t.src;
    }
    path.reverse();
    Some(path)
}

/// A zero-effect cycle at a stable state with depth at most b5. Prefers a
/// direct nadir zero cycle, then the shortest bounded zero cycle (keeping
/// lasso periods small), with the composed cycle as a final fallback.
pub fn zero_cycle_for(ocn: &Ocn, q: StateId) -> Result<Cycle, UnaryError> {
    let stable = stable_states(ocn)?;
    if !stable.contains(&q) {
        return Err(UnaryError::NotStableState(ocn.state_name(q).to_string()));
    }
    if let Some(z) = nadir_cycle(ocn, q, |e| e == 0) {
        return Ok(z);
    }
    let b5 = Bounds::for_net(ocn, 0).b5 as i64;
    let height_cap = b5.saturating_mul(ocn.max_norm().max(1));
    if let Some(z) = bounded_zero_cycle(ocn, q, b5, height_cap) {
        return Ok(z);
    }
    composed_zero_cycle(ocn, q)
        .ok_or_else(|| UnaryError::ScaleLimit("zero-cycle synthesis failed".to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LassoMode {
    Pump,
    Stable,
    Nfa,
}

/// Exact lasso for the language via `r`: words accepted by a run visiting
/// `r`. The table below `T + p` is filled by the exact via-membership DP;
/// eventual periodicity beyond the threshold follows because a pump cycle
/// (depth 0, effect >= 0) or a zero cycle can always be inserted at an
/// `r`-visit of a canonical run.
pub fn langvia_lasso(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    r: StateId,
    mode: LassoMode,
) -> Result<UnaryLasso, UnaryError> {
    require_singleton(ocn)?;
    let norm = ocn.max_norm() as u64;
    let nfa_store;
    let (net, c0, period, threshold) = match mode {
        LassoMode::Pump => {
            let cyc = pump_states(ocn)?
                .remove(&r)
                .ok_or_else(|| UnaryError::NotPumpState(ocn.state_name(r).to_string()))?;
            let p = cyc.len() as u64;
            let bounds = Bounds::for_net(ocn, 0);
            (ocn, c0, p, bounds.pump_threshold(norm, p))
        }
        LassoMode::Stable => {
            let zeta = zero_cycle_for(ocn, r)?;
            let p = zeta.len() as u64;
            let bounds = Bounds::for_net(ocn, p);
            (ocn, c0, p, bounds.stable_threshold(p))
        }
        LassoMode::Nfa => {
            nfa_store = ocn.underlying_nfa();
            let cyc = pump_states(&nfa_store)?
                .remove(&r)
                .ok_or_else(|| UnaryError::NotPumpState(ocn.state_name(r).to_string()))?;
            let p = cyc.len() as u64;
            let t = Bounds::nfa_threshold(ocn, p);
            (&nfa_store, 0, p, t)
        }
    };
    let size = threshold.saturating_add(period);
    if size > 10_000_000 {
        return Err(UnaryError::ScaleLimit(format!("lasso table of size {size}")));
    }
    let mut table = Vec::with_capacity(size as usize);
    let mut dp = ViaDp::new(net, s0, c0, r);
    for _ in 0..size {
        table.push(dp.accepting());
        dp.step(0);
    }
    Ok(UnaryLasso { threshold, period, table })
}

/// Universality of a unary NFA (zero-effect net) by subset construction;
/// the subset sequence is a lasso, so the check terminates at the first
/// repeated subset.
pub fn unary_nfa_universal(nfa: &Ocn, s0: StateId) -> Result<Verdict, UnaryError> {
    require_singleton(nfa)?;
    if let Some(t) = nfa.transitions().iter().find(|t| t.effect != 0) {
        return Err(UnaryError::NonZeroEffects(t.effect));
    }
    if nfa.num_states() > 20 {
        return Err(UnaryError::ScaleLimit(format!(
            "subset construction limited to 20 states, net has {}",
            nfa.num_states()
        )));
    }
    let lemma = "unary:nfa-subset";
    let mut seen: HashMap<u32, u64> = HashMap::new();
    let mut subset: u32 = 1 << s0;
    let mut n: u64 = 0;
    loop {
        let accepting = (0..nfa.num_states())
            .any(|s| subset & (1 << s) != 0 && nfa.is_accepting(s));
        if !accepting {
            return Ok(Verdict::not_universal_length(lemma, n));
        }
        if seen.insert(subset, n).is_some() {
            return Ok(Verdict::universal(lemma));
        }
        let mut next: u32 = 0;
        for s in 0..nfa.num_states() {
            if subset & (1 << s) != 0 {
                for t in nfa.outgoing(s) {
                    next |= 1 << t.dst;
                }
            }
        }
        subset = next;
        n += 1;
    }
}

fn lcm_of_periods(periods: impl Iterator<Item = u64>) -> Result<u64, UnaryError> {
    let mut acc: u64 = 1;
    for p in periods {
        let g = gcd(acc, p);
        acc = acc
            .checked_mul(p / g)
            .filter(|&l| l <= 1_000_000)
            .ok_or_else(|| UnaryError::ScaleLimit("lcm of lasso periods above 10^6".into()))?;
    }
    Ok(acc)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Universality of `L(s0, c0)` for a singleton alphabet.
///
/// Every length below the lasso thresholds is checked by the exact DP;
/// beyond them the union P of the pump-state lassos is complete up to a
/// finite remainder (the language minus P is finite), so a residue class
/// avoiding P yields a rejected witness after at most finitely many
/// candidates, and full coverage proves universality.
pub fn decide_universality_unary(ocn: &Ocn, s0: StateId, c0: u64) -> Result<Verdict, UnaryError> {
    require_singleton(ocn)?;
    let lemma = "unary:pump-lassos";
    let q = ocn.num_states() as u64;
    let pump = pump_states(ocn)?;
    let lassos: Vec<UnaryLasso> = pump
        .keys()
        .map(|&r| langvia_lasso(ocn, s0, c0, r, LassoMode::Pump))
        .collect::<Result<_, _>>()?;
    // With no pump states every accepting run consists of negative cycles
    // only, so the language is finite and a witness exists shortly beyond
    // the longest such run.
    let scan_end = lassos
        .iter()
        .map(|l| l.threshold)
        .max()
        .unwrap_or(q.saturating_mul(c0.saturating_add(1)).saturating_add(2));
    let mut dp = MaxCounterDp::new(ocn, s0, c0);
    for n in 0..scan_end {
        if !dp.accepting() {
            return Ok(Verdict::not_universal_length(lemma, n));
        }
        dp.step(0);
    }
    if lassos.is_empty() {
        unreachable!("a net without pump states rejects some length below the scan bound");
    }
    let lam = lcm_of_periods(lassos.iter().map(|l| l.period))?;
    let uncovered: Vec<u64> = (0..lam)
        .filter(|&o| !lassos.iter().any(|l| l.accepts((scan_end + o) as u128)))
        .collect();
    if uncovered.is_empty() {
        return Ok(Verdict::universal(lemma));
    }
    // Some candidate in an uncovered class is genuinely rejected: lengths
    // outside P are accepted, if at all, only by runs made of negative
    // cycles, and those cannot be longer than |Q| (c0 + 1).
    let limit = scan_end
        .saturating_add(q.saturating_mul(c0.saturating_add(1)))
        .saturating_add(2 * lam)
        .saturating_add(2);
    for m in scan_end..=limit {
        if uncovered.contains(&((m - scan_end) % lam)) && !dp.accepting() {
            return Ok(Verdict::not_universal_length(lemma, m));
        }
        dp.step(0);
    }
    unreachable!("an uncovered residue class must reject below the scan limit");
}

/// Initial-value universality for a singleton alphabet: some c0 works iff
/// the underlying automaton is universal and all but finitely many lengths
/// are accepted via a pump state on the underlying automaton. When
/// universal, `(2 T + 1) norm` is a sufficient initial counter: canonical
/// automaton runs of threshold length need at most `T norm` depth and one
/// extra pump round trip.
pub fn decide_iv_universality_unary(ocn: &Ocn, s0: StateId) -> Result<Verdict, UnaryError> {
    require_singleton(ocn)?;
    let lemma = "unary-iv:nfa+pump-cofinite";
    let nfa = ocn.underlying_nfa();
    let nfa_verdict = unary_nfa_universal(&nfa, s0)?;
    if !nfa_verdict.is_universal() {
        return Ok(Verdict {
            lemma: lemma.to_string(),
            ..nfa_verdict
        });
    }
    let pump = pump_states(ocn)?;
    let bounds = Bounds::for_net(ocn, 0);
    if pump.is_empty() {
        // P is empty, so all of the naturals beyond the finite language
        // core are rejected for every initial counter.
        return Ok(Verdict::not_universal_length(lemma, bounds.b4));
    }
    let lassos: Vec<UnaryLasso> = pump
        .keys()
        .map(|&r| langvia_lasso(ocn, s0, 0, r, LassoMode::Nfa))
        .collect::<Result<_, _>>()?;
    let t_max = lassos.iter().map(|l| l.threshold).max().unwrap();
    let lam = lcm_of_periods(lassos.iter().map(|l| l.period))?;
    for o in 0..lam {
        if !lassos.iter().any(|l| l.accepts((t_max + o) as u128)) {
            return Ok(Verdict::not_universal_length(lemma, t_max + o));
        }
    }
    let norm = ocn.max_norm() as u64;
    let c0 = (2u64.saturating_mul(t_max).saturating_add(1)).saturating_mul(norm);
    Ok(Verdict::universal_with(lemma, c0))
}

/// Bounded universality for a singleton alphabet: some bound b works iff
/// the underlying automaton is universal and all but finitely many lengths
/// are accepted via a stable state. The finite remainder is re-checked by
/// the exact DP; the returned bound 2 b6 + c0 dominates the counter of any
/// run of threshold length, so remainder acceptance is automatically
/// bounded acceptance.
pub fn decide_bounded_universality_unary(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
) -> Result<Verdict, UnaryError> {
    require_singleton(ocn)?;
    let lemma = "unary-bounded:nfa+stable-cofinite";
    let nfa = ocn.underlying_nfa();
    let nfa_verdict = unary_nfa_universal(&nfa, s0)?;
    if !nfa_verdict.is_universal() {
        // A length outside the automaton language is outside every bLang.
        return Ok(Verdict {
            lemma: lemma.to_string(),
            ..nfa_verdict
        });
    }
    let stable = stable_states(ocn)?;
    if stable.is_empty() {
        let bounds = Bounds::for_net(ocn, 0);
        return Ok(Verdict::not_universal_length(lemma, bounds.b7));
    }
    let zetas: BTreeMap<StateId, Cycle> = stable
        .iter()
        .map(|&r| zero_cycle_for(ocn, r).map(|z| (r, z)))
        .collect::<Result<_, _>>()?;
    let p_max = zetas.values().map(|z| z.len() as u64).max().unwrap();
    let bounds = Bounds::for_net(ocn, p_max);
    let lassos: Vec<UnaryLasso> = stable
        .iter()
        .map(|&r| langvia_lasso(ocn, s0, c0, r, LassoMode::Stable))
        .collect::<Result<_, _>>()?;
    let t_max = lassos.iter().map(|l| l.threshold).max().unwrap();
    let lam = lcm_of_periods(lassos.iter().map(|l| l.period))?;
    for o in 0..lam {
        if !lassos.iter().any(|l| l.accepts((t_max + o) as u128)) {
            return Ok(Verdict::not_universal_length(lemma, t_max + o));
        }
    }
    // Finite remainder below the thresholds: lengths outside S must still
    // be in the language; runs of length n never exceed c0 + n * norm,
    // which 2 b6 + c0 dominates for n below the threshold, so plain
    // acceptance suffices.
    let mut dp = MaxCounterDp::new(ocn, s0, c0);
    for n in 0..t_max {
        let in_s = lassos.iter().any(|l| l.accepts(n as u128));
        if !in_s && !dp.accepting() {
            return Ok(Verdict::not_universal_length(lemma, n));
        }
        dp.step(0);
    }
    let b = 2u64.saturating_mul(bounds.b6).saturating_add(c0);
    Ok(Verdict::universal_with(lemma, b))
}
