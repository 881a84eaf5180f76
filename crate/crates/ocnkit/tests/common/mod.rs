//! Shared helpers for the acceptance suite: seeded random generators and
//! independent brute-force checks that deliberately avoid the code paths
//! they are used to validate.

use ocnkit::ocn::{LetterId, Ocn, OcnBuilder, StateId, Transition};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet, VecDeque};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Knobs for the random net generators.
pub struct NetParams {
    pub max_states: usize,
    pub min_letters: usize,
    pub max_letters: usize,
    pub max_norm: i64,
    /// Probability that each candidate transition is present.
    pub density: f64,
    pub accept_prob: f64,
}

/// Random net: every (state, letter, state) triple becomes a transition
/// with probability `density`, with a uniform effect in [-norm, norm].
/// State 0 is always the initial state.
pub fn random_net(r: &mut ChaCha8Rng, p: &NetParams) -> Ocn {
    let q = r.gen_range(1..=p.max_states);
    let k = r.gen_range(p.min_letters..=p.max_letters);
    let mut b = OcnBuilder::new("rand");
    let letters: Vec<LetterId> =
        (0..k).map(|i| b.letter(&((b'a' + i as u8) as char).to_string())).collect();
    let states: Vec<StateId> = (0..q)
        .map(|i| b.state(&format!("q{i}"), i == 0, r.gen_bool(p.accept_prob)))
        .collect();
    for &s in &states {
        for &l in &letters {
            for &d in &states {
                if r.gen_bool(p.density) {
                    b.trans(s, l, r.gen_range(-p.max_norm..=p.max_norm), d);
                }
            }
        }
    }
    b.build().expect("generated net is well-formed")
}

/// Random deterministic net: each (state, letter) pair gets at most one
/// transition (present with probability `density`).
pub fn random_det_net(r: &mut ChaCha8Rng, p: &NetParams) -> Ocn {
    let q = r.gen_range(1..=p.max_states);
    let k = r.gen_range(p.min_letters..=p.max_letters);
    let mut b = OcnBuilder::new("det");
    let letters: Vec<LetterId> =
        (0..k).map(|i| b.letter(&((b'a' + i as u8) as char).to_string())).collect();
    let states: Vec<StateId> = (0..q)
        .map(|i| b.state(&format!("q{i}"), i == 0, r.gen_bool(p.accept_prob)))
        .collect();
    for &s in &states {
        for &l in &letters {
            if r.gen_bool(p.density) {
                let d = states[r.gen_range(0..q)];
                b.trans(s, l, r.gen_range(-p.max_norm..=p.max_norm), d);
            }
        }
    }
    b.build().expect("generated net is well-formed")
}

pub fn random_word(r: &mut ChaCha8Rng, num_letters: usize, max_len: usize) -> Vec<LetterId> {
    let len = r.gen_range(0..=max_len);
    (0..len).map(|_| r.gen_range(0..num_letters)).collect()
}

/// Random executable path from a random start state: a guided walk that
/// only takes counter-safe transitions. May come back shorter than
/// requested (or empty) when the walk gets stuck.
pub fn random_executable_path(
    r: &mut ChaCha8Rng,
    ocn: &Ocn,
    c0: u64,
    max_len: usize,
) -> Vec<Transition> {
    let mut s = r.gen_range(0..ocn.num_states());
    let mut c = c0 as i128;
    let target = r.gen_range(1..=max_len);
    let mut path = Vec::new();
    for _ in 0..target {
        let options: Vec<Transition> = ocn
            .outgoing(s)
            .iter()
            .filter(|t| c + t.effect as i128 >= 0)
            .copied()
            .collect();
        if options.is_empty() {
            break;
        }
        let t = options[r.gen_range(0..options.len())];
        c += t.effect as i128;
        s = t.dst;
        path.push(t);
    }
    path
}

/// All words over `num_letters` letters up to `max_len`, shortest first.
pub fn all_words(num_letters: usize, max_len: usize) -> Vec<Vec<LetterId>> {
    let mut out: Vec<Vec<LetterId>> = vec![Vec::new()];
    let mut layer: Vec<Vec<LetterId>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..num_letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Universality of the underlying automaton (effects ignored) by subset
/// construction. Returns a rejected word, or None when universal.
pub fn subset_universal(nfa: &Ocn, s0: StateId) -> Option<Vec<LetterId>> {
    assert!(nfa.num_states() <= 60, "subset_universal limited to |Q| <= 60");
    let accepting: u64 = nfa.accepting_states().fold(0, |m, s| m | 1 << s);
    let start = 1u64 << s0;
    if start & accepting == 0 {
        return Some(Vec::new());
    }
    let mut parent: HashMap<u64, (u64, LetterId)> = HashMap::new();
    let mut seen: HashSet<u64> = HashSet::from([start]);
    let mut queue: VecDeque<u64> = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for l in 0..nfa.num_letters() {
            let mut next = 0u64;
            for s in 0..nfa.num_states() {
                if m >> s & 1 == 1 {
                    for t in nfa.outgoing(s) {
                        if t.letter == l {
                            next |= 1 << t.dst;
                        }
                    }
                }
            }
            if seen.insert(next) {
                parent.insert(next, (m, l));
                if next & accepting == 0 {
                    let mut word = Vec::new();
                    let mut cur = next;
                    while cur != start {
                        let (pm, pl) = parent[&cur];
                        word.push(pl);
                        cur = pm;
                    }
                    word.reverse();
                    return Some(word);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

/// Number of accepting runs on `word`, capped at `cap` (no length limit).
pub fn count_runs_capped(ocn: &Ocn, s0: StateId, c0: u64, word: &[LetterId], cap: u64) -> u64 {
    fn go(ocn: &Ocn, s: StateId, c: i128, rest: &[LetterId], cap: u64) -> u64 {
        match rest.split_first() {
            None => u64::from(ocn.is_accepting(s)),
            Some((&l, tail)) => {
                let mut total = 0;
                for t in ocn.outgoing(s) {
                    if t.letter == l && c + t.effect as i128 >= 0 {
                        total += go(ocn, t.dst, c + t.effect as i128, tail, cap);
                        if total >= cap {
                            return total;
                        }
                    }
                }
                total
            }
        }
    }
    go(ocn, s0, c0 as i128, word, cap)
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

/// `out` = `src` with every set bit position moved by `effect`, positions
/// outside [0, width) dropped.
fn shift_into(src: &[u64], effect: i64, width: usize, out: &mut [u64]) {
    for w in out.iter_mut() {
        *w = 0;
    }
    if effect >= 0 {
        let e = effect as usize;
        let (wsh, bsh) = (e / 64, e % 64);
        for i in 0..src.len() {
            let j = i + wsh;
            if j < out.len() {
                out[j] |= src[i] << bsh;
                if bsh > 0 && j + 1 < out.len() {
                    out[j + 1] |= src[i] >> (64 - bsh);
                }
            }
        }
        let top = width % 64;
        if top != 0 {
            *out.last_mut().unwrap() &= (1u64 << top) - 1;
        }
    } else {
        let e = (-effect) as usize;
        let (wsh, bsh) = (e / 64, e % 64);
        for i in wsh..src.len() {
            let j = i - wsh;
            out[j] |= src[i] >> bsh;
            if bsh > 0 && i + 1 < src.len() {
                out[j] |= src[i + 1] << (64 - bsh);
            }
        }
    }
}

/// Exact bounded unary language table (counter confined to [0, b]) via
/// per-state reachable-counter bitsets; entry n is membership of the
/// length-n word.
pub fn bounded_unary_table(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    b: u64,
    n_max: usize,
) -> Vec<bool> {
    assert!(ocn.is_singleton_alphabet(), "bounded_unary_table needs |Sigma| = 1");
    if c0 > b {
        return vec![false; n_max + 1];
    }
    let width = (b + 1) as usize;
    let words = width.div_ceil(64);
    let mut cur = vec![vec![0u64; words]; ocn.num_states()];
    set_bit(&mut cur[s0], c0 as usize);
    let accepting_now = |cfg: &[Vec<u64>]| -> bool {
        ocn.accepting_states().any(|s| cfg[s].iter().any(|&w| w != 0))
    };
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(accepting_now(&cur));
    let mut scratch = vec![0u64; words];
    for _ in 0..n_max {
        let mut next = vec![vec![0u64; words]; ocn.num_states()];
        for t in ocn.transitions() {
            shift_into(&cur[t.src], t.effect, width, &mut scratch);
            for (d, s) in next[t.dst].iter_mut().zip(&scratch) {
                *d |= s;
            }
        }
        cur = next;
        table.push(accepting_now(&cur));
    }
    table
}

/// For a deterministic net: some word of length <= `max_len` whose unique
/// run dies, leaves [0, ceiling], or ends non-accepting. None when every
/// such word is accepted.
pub fn det_short_reject(
    ocn: &Ocn,
    s0: StateId,
    c0: u64,
    ceiling: Option<u64>,
    max_len: usize,
) -> Option<Vec<LetterId>> {
    assert!(ocn.is_deterministic(), "det_short_reject needs a deterministic net");
    if let Some(b) = ceiling {
        if c0 > b {
            return Some(Vec::new());
        }
    }
    let mut seen: HashSet<(StateId, i128)> = HashSet::from([(s0, c0 as i128)]);
    let mut queue: VecDeque<(StateId, i128, Vec<LetterId>)> =
        VecDeque::from([(s0, c0 as i128, Vec::new())]);
    while let Some((s, c, word)) = queue.pop_front() {
        if !ocn.is_accepting(s) {
            return Some(word);
        }
        if word.len() == max_len {
            continue;
        }
        for l in 0..ocn.num_letters() {
            let mut w2 = word.clone();
            w2.push(l);
            match ocn.outgoing(s).iter().find(|t| t.letter == l) {
                None => return Some(w2),
                Some(t) => {
                    let c2 = c + t.effect as i128;
                    if c2 < 0 || ceiling.is_some_and(|b| c2 > b as i128) {
                        return Some(w2);
                    }
                    if seen.insert((t.dst, c2)) {
                        queue.push_back((t.dst, c2, w2));
                    }
                }
            }
        }
    }
    None
}
