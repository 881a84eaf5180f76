//! Brute-force reference implementations used by the test suites.
//!
//! Everything here favours obviousness over speed and enforces hard scale
//! limits so exponential cases cannot slip into CI unnoticed.

use crate::forms::Cycle;
use crate::ocn::{LetterId, MaxCounterDp, Ocn, StateId, Transition};

/// Exhaustive-run membership: enumerates every run on `word` with exact
/// counters, full branching.
pub fn oracle_accepts(ocn: &Ocn, s0: StateId, c0: u64, word: &[LetterId]) -> bool {
    assert!(word.len() <= 12, "oracle_accepts limited to |w| <= 12");
    let mut frontier: Vec<(StateId, i128)> = vec![(s0, c0 as i128)];
    for &l in word {
        let mut next = Vec::new();
        for &(s, c) in &frontier {
            for t in ocn.outgoing(s) {
                if t.letter == l && c + t.effect as i128 >= 0 {
                    next.push((t.dst, c + t.effect as i128));
                }
            }
        }
        frontier = next;
    }
    frontier.iter().any(|&(s, _)| ocn.is_accepting(s))
}

/// Exhaustive-run bounded membership (counter confined to `[0, b]`).
pub fn oracle_accepts_bounded(ocn: &Ocn, s0: StateId, c0: u64, b: u64, word: &[LetterId]) -> bool {
    assert!(word.len() <= 12, "oracle_accepts_bounded limited to |w| <= 12");
    if c0 > b {
        return false;
    }
    let mut frontier: Vec<(StateId, i128)> = vec![(s0, c0 as i128)];
    for &l in word {
        let mut next = Vec::new();
        for &(s, c) in &frontier {
            for t in ocn.outgoing(s) {
                let c2 = c + t.effect as i128;
                if t.letter == l && c2 >= 0 && c2 <= b as i128 {
                    next.push((t.dst, c2));
                }
            }
        }
        frontier = next;
    }
    frontier.iter().any(|&(s, _)| ocn.is_accepting(s))
}

/// Exact number of accepting runs on `word`, runs distinct as transition
/// sequences.
pub fn oracle_count_runs(ocn: &Ocn, s0: StateId, c0: u64, word: &[LetterId]) -> u64 {
    assert!(word.len() <= 10, "oracle_count_runs limited to |w| <= 10");
    fn go(ocn: &Ocn, s: StateId, c: i128, rest: &[LetterId]) -> u64 {
        match rest.split_first() {
            None => u64::from(ocn.is_accepting(s)),
            Some((&l, tail)) => {
                let mut total = 0;
                for t in ocn.outgoing(s) {
                    if t.letter == l && c + t.effect as i128 >= 0 {
                        total += go(ocn, t.dst, c + t.effect as i128, tail);
                    }
                }
                total
            }
        }
    }
    go(ocn, s0, c0 as i128, word)
}

/// Exact unary language table: entry `n` is membership of the length-`n`
/// word. Exact by monotonicity of the max-counter DP.
pub fn oracle_unary_table(ocn: &Ocn, s0: StateId, c0: u64, n_max: usize) -> Vec<bool> {
    assert!(ocn.is_singleton_alphabet(), "oracle_unary_table needs |Sigma| = 1");
    let mut table = Vec::with_capacity(n_max + 1);
    let mut dp = MaxCounterDp::new(ocn, s0, c0);
    table.push(dp.accepting());
    for _ in 0..n_max {
        dp.step(0);
        table.push(dp.accepting());
    }
    table
}

/// All simple cycles (no proper cycle infix), each rotation counted as its
/// own cycle, parallel transitions distinguished.
pub fn oracle_enumerate_simple_cycles(ocn: &Ocn) -> Vec<Cycle> {
    assert!(ocn.num_states() <= 6, "oracle_enumerate_simple_cycles limited to |Q| <= 6");
    let mut cycles = Vec::new();
    for start in 0..ocn.num_states() {
        let mut visited = vec![false; ocn.num_states()];
        let mut path: Vec<Transition> = Vec::new();
        dfs(ocn, start, start, &mut visited, &mut path, &mut cycles);
    }
    cycles
}

fn dfs(
    ocn: &Ocn,
    start: StateId,
    current: StateId,
    visited: &mut Vec<bool>,
    path: &mut Vec<Transition>,
    cycles: &mut Vec<Cycle>,
) {
    for t in ocn.outgoing(current) {
        if t.dst == start {
            path.push(*t);
            cycles.push(Cycle::new(path.clone()).expect("closed chained path"));
            path.pop();
        } else if !visited[t.dst] {
            visited[t.dst] = true;
            path.push(*t);
            dfs(ocn, start, t.dst, visited, path, cycles);
            path.pop();
            visited[t.dst] = false;
        }
    }
}
