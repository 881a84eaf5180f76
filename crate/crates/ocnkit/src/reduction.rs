//! Two-counter machines and the reduction nets built from them.
//!
//! A two-counter machine halts iff the net A built from it is universal
//! for some initial counter, and iff the net A' is universal under some
//! counter bound. The constructions and the witness words for the
//! non-halting direction are test generators for the deciders, not
//! deciders themselves.

use thiserror::Error;

use crate::ocn::{Ocn, OcnBuilder};

#[derive(Debug, Error)]
pub enum TcmError {
    #[error("line {line}: cannot parse `{text}`")]
    Parse { line: usize, text: String },
    #[error("line {line}: jump target {target} out of range 1..={lines}")]
    TargetOutOfRange { line: usize, target: usize, lines: usize },
    #[error("line {line}: decrement of counter {counter} at value 0")]
    DecOnZero { line: usize, counter: char },
    #[error("control fell off the end of the program after line {line}")]
    FellOffEnd { line: usize },
    #[error("machine halted after {produced} trace letters, {requested} requested")]
    HaltedEarly { produced: usize, requested: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counter {
    X,
    Y,
}

impl Counter {
    fn letter(self) -> char {
        match self {
            Counter::X => 'x',
            Counter::Y => 'y',
        }
    }
}

/// One command; jump targets are 1-indexed line numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmd {
    Inc(Counter),
    Dec(Counter),
    Goto(usize),
    Halt,
    /// `Ifz(c, i, j)`: if c = 0 go to line i, else go to line j.
    Ifz(Counter, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCounterMachine {
    lines: Vec<Cmd>,
    warnings: Vec<String>,
}

impl TwoCounterMachine {
    /// Validates jump targets. Decrements not reachable as the nonzero
    /// branch of a conditional on the same counter are accepted with a
    /// warning; simulation errors if they ever fire at zero.
    pub fn new(lines: Vec<Cmd>) -> Result<TwoCounterMachine, TcmError> {
        let n = lines.len();
        let check = |line: usize, target: usize| {
            if (1..=n).contains(&target) {
                Ok(())
            } else {
                Err(TcmError::TargetOutOfRange { line, target, lines: n })
            }
        };
        for (i, cmd) in lines.iter().enumerate() {
            match *cmd {
                Cmd::Goto(t) => check(i + 1, t)?,
                Cmd::Ifz(_, t1, t2) => {
                    check(i + 1, t1)?;
                    check(i + 1, t2)?;
                }
                _ => {}
            }
        }
        let mut warnings = Vec::new();
        for (i, cmd) in lines.iter().enumerate() {
            if let Cmd::Dec(c) = *cmd {
                let guarded = lines
                    .iter()
                    .any(|other| matches!(*other, Cmd::Ifz(c2, _, j) if c2 == c && j == i + 1));
                if !guarded {
                    warnings.push(format!(
                        "line {}: dec {} is not guarded by a zero test",
                        i + 1,
                        c.letter()
                    ));
                }
            }
        }
        Ok(TwoCounterMachine { lines, warnings })
    }

    pub fn lines(&self) -> &[Cmd] {
        &self.lines
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// File format: one command per line (1-indexed implicitly), from
/// `inc x | inc y | dec x | dec y | goto <i> | halt | ifz x <i> <j> | ifz y <i> <j>`.
/// Blank lines and lines starting with `//` are ignored.
pub fn parse_2cm(text: &str) -> Result<TwoCounterMachine, TcmError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let err = || TcmError::Parse { line: idx + 1, text: line.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let counter = |tok: &str| match tok {
            "x" => Ok(Counter::X),
            "y" => Ok(Counter::Y),
            _ => Err(err()),
        };
        let num = |tok: &str| tok.parse::<usize>().map_err(|_| err());
        let cmd = match toks.as_slice() {
            ["inc", c] => Cmd::Inc(counter(c)?),
            ["dec", c] => Cmd::Dec(counter(c)?),
            ["goto", t] => Cmd::Goto(num(t)?),
            ["halt"] => Cmd::Halt,
            ["ifz", c, t1, t2] => Cmd::Ifz(counter(c)?, num(t1)?, num(t2)?),
            _ => return Err(err()),
        };
        lines.push(cmd);
    }
    TwoCounterMachine::new(lines)
}

fn goto_letter(i: usize) -> String {
    format!("goto_{i}")
}

fn cond_letter(c: Counter, zero: bool, i: usize) -> String {
    format!("{}{}_{i}", c.letter(), if zero { 'z' } else { 'p' })
}

fn step_letter(inc: bool, c: Counter) -> String {
    format!("{}_{}", if inc { "inc" } else { "dec" }, c.letter())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// `steps` counts every executed command including the final halt.
    Halted { steps: u64, trace: Vec<String> },
    Running { trace: Vec<String> },
}

/// Simulates up to `budget` steps from line 1 with both counters 0,
/// emitting one trace letter per executed command. Conditionals emit the
/// zero letter of their zero target or the positive letter of their
/// nonzero target, matching the alphabet of the reduction nets.
pub fn run_2cm(m: &TwoCounterMachine, budget: u64) -> Result<RunOutcome, TcmError> {
    let mut trace = Vec::new();
    let mut pc: usize = 1;
    let (mut x, mut y) = (0u64, 0u64);
    for _ in 0..budget {
        if pc > m.lines.len() {
            return Err(TcmError::FellOffEnd { line: pc - 1 });
        }
        match m.lines[pc - 1] {
            Cmd::Inc(c) => {
                trace.push(step_letter(true, c));
                match c {
                    Counter::X => x += 1,
                    Counter::Y => y += 1,
                }
                pc += 1;
            }
            Cmd::Dec(c) => {
                trace.push(step_letter(false, c));
                let v = match c {
                    Counter::X => &mut x,
                    Counter::Y => &mut y,
                };
                if *v == 0 {
                    return Err(TcmError::DecOnZero { line: pc, counter: c.letter() });
                }
                *v -= 1;
                pc += 1;
            }
            Cmd::Goto(t) => {
                trace.push(goto_letter(t));
                pc = t;
            }
            Cmd::Halt => {
                trace.push("halt".to_string());
                return Ok(RunOutcome::Halted { steps: trace.len() as u64, trace });
            }
            Cmd::Ifz(c, t1, t2) => {
                let v = match c {
                    Counter::X => x,
                    Counter::Y => y,
                };
                if v == 0 {
                    trace.push(cond_letter(c, true, t1));
                    pc = t1;
                } else {
                    trace.push(cond_letter(c, false, t2));
                    pc = t2;
                }
            }
        }
    }
    Ok(RunOutcome::Running { trace })
}

/// First `k` letters of the legal trace; errors if the machine halts with
/// fewer than `k` trace letters.
pub fn trace_prefix(m: &TwoCounterMachine, k: u64) -> Result<Vec<String>, TcmError> {
    let trace = match run_2cm(m, k)? {
        RunOutcome::Halted { trace, .. } if (trace.len() as u64) < k => {
            return Err(TcmError::HaltedEarly {
                produced: trace.len(),
                requested: k as usize,
            });
        }
        RunOutcome::Halted { trace, .. } | RunOutcome::Running { trace } => trace,
    };
    Ok(trace.into_iter().take(k as usize).collect())
}

/// The reduction net: universal for some initial counter iff the machine
/// halts. See `build` for the state-by-state construction.
pub fn build_net_a(m: &TwoCounterMachine) -> Ocn {
    build(m, false)
}

/// The bounded-universality variant: universal under some counter bound
/// iff the machine halts. Adds a new initial state `q0p` that can pump the
/// counter before handing over to `q0`, and a drain state `q7`.
pub fn build_net_aprime(m: &TwoCounterMachine) -> Ocn {
    build(m, true)
}

fn build(m: &TwoCounterMachine, prime: bool) -> Ocn {
    let n = m.lines.len();
    let mut b = OcnBuilder::new(if prime { "reduction-a-prime" } else { "reduction-a" });
    let hash = b.letter("#");
    let mut letters = Vec::new();
    for name in ["inc_x", "inc_y", "dec_x", "dec_y", "halt"] {
        letters.push(b.letter(name));
    }
    for i in 1..=n {
        letters.push(b.letter(&goto_letter(i)));
        letters.push(b.letter(&cond_letter(Counter::X, true, i)));
        letters.push(b.letter(&cond_letter(Counter::X, false, i)));
        letters.push(b.letter(&cond_letter(Counter::Y, true, i)));
        letters.push(b.letter(&cond_letter(Counter::Y, false, i)));
    }
    let non_hash = letters.clone();

    let q0 = b.state("q0", !prime, true);
    let heaven = b.state("heaven", false, true);
    let q1 = b.state("q1", false, true);
    let gadget: Vec<_> = (1..=n).map(|i| b.state(&format!("q2_{i}"), false, false)).collect();
    let halted = b.state("halted", false, false);
    let q3 = b.state("q3", false, false);
    let q4 = b.state("q4", false, false);
    let q5 = b.state("q5", false, false);
    let q6 = b.state("q6", false, false);

    // q0: consume any non-# letter in place; on # branch to the checkers.
    for &a in &non_hash {
        b.trans(q0, a, 0, q0);
    }
    for target in [q1, gadget[0], q3, q4, q5, q6] {
        b.trans(q0, hash, 0, target);
    }
    // heaven: accept everything.
    for a in std::iter::once(hash).chain(non_hash.iter().copied()) {
        b.trans(heaven, a, 0, heaven);
    }
    // q1: pays one counter unit per letter; accepts short segments.
    for &a in &non_hash {
        b.trans(q1, a, -1, q1);
    }
    b.trans(q1, hash, -1, heaven);
    // Command checker: follow the control flow at weight 0; any letter
    // inconsistent with the current line is a violation leading to heaven;
    // # cannot be consumed mid-check.
    for (idx, cmd) in m.lines.iter().enumerate() {
        let here = gadget[idx];
        let mut allowed = Vec::new();
        match *cmd {
            Cmd::Inc(c) | Cmd::Dec(c) => {
                let letter = b
                    .letter_id(&step_letter(matches!(cmd, Cmd::Inc(_)), c))
                    .expect("declared");
                allowed.push(letter);
                // A correct step off the last line has no continuation.
                if idx + 1 < n {
                    b.trans(here, letter, 0, gadget[idx + 1]);
                }
            }
            Cmd::Goto(t) => {
                let letter = b.letter_id(&goto_letter(t)).expect("declared");
                allowed.push(letter);
                b.trans(here, letter, 0, gadget[t - 1]);
            }
            Cmd::Halt => {
                let letter = b.letter_id("halt").expect("declared");
                allowed.push(letter);
                b.trans(here, letter, 0, halted);
            }
            Cmd::Ifz(c, t1, t2) => {
                let lz = b.letter_id(&cond_letter(c, true, t1)).expect("declared");
                let lp = b.letter_id(&cond_letter(c, false, t2)).expect("declared");
                allowed.push(lz);
                allowed.push(lp);
                b.trans(here, lz, 0, gadget[t1 - 1]);
                b.trans(here, lp, 0, gadget[t2 - 1]);
            }
        }
        for &a in &non_hash {
            if !allowed.contains(&a) {
                b.trans(here, a, 0, heaven);
            }
        }
    }
    // Anything but # after a correct halt is a violation.
    for &a in &non_hash {
        b.trans(halted, a, 0, heaven);
    }
    // Cheat checkers: q3/q5 track a counter positively and return on a
    // zero claim at -1; q4/q6 track it negatively and return on a positive
    // claim at 0. All other non-{halt,#} letters are skipped in place.
    let halt_letter = b.letter_id("halt").expect("declared");
    for (state, c, zero_claim, return_weight, track) in [
        (q3, Counter::X, true, -1i64, 1i64),
        (q4, Counter::X, false, 0, -1),
        (q5, Counter::Y, true, -1, 1),
        (q6, Counter::Y, false, 0, -1),
    ] {
        let inc = b.letter_id(&step_letter(true, c)).expect("declared");
        let dec = b.letter_id(&step_letter(false, c)).expect("declared");
        b.trans(state, inc, track, state);
        b.trans(state, dec, -track, state);
        for &a in &non_hash {
            if a != inc && a != dec && a != halt_letter {
                b.trans(state, a, 0, state);
            }
        }
        for i in 1..=n {
            let l = b.letter_id(&cond_letter(c, zero_claim, i)).expect("declared");
            b.trans(state, l, return_weight, q0);
        }
    }
    if prime {
        let q0p = b.state("q0p", true, true);
        let q7 = b.state("q7", false, true);
        for a in std::iter::once(hash).chain(non_hash.iter().copied()) {
            b.trans(q0p, a, 1, q0p);
            b.trans(q0p, a, 0, q0);
            b.trans(q7, a, -1, q7);
            b.trans(q7, a, -1, q0);
        }
        b.trans(q0, hash, 0, q7);
    }
    b.build().expect("reduction net has a unique initial state")
}

/// Witness for the non-halting direction of initial-value universality:
/// n+1 copies of the legal trace prefix of length n+1, separated by #.
/// Rejected by net A from any initial counter n.
pub fn witness_word(m: &TwoCounterMachine, n: u64) -> Result<Vec<String>, TcmError> {
    let prefix = trace_prefix(m, n + 1)?;
    Ok(join_segments(&prefix, n + 1))
}

/// Witness for the non-halting direction of bounded universality: n+3
/// copies of the legal trace prefix of length n, separated by #. Rejected
/// by net A' under counter bound n.
///
/// Why n+3 and not n+2: the new initial state can hand over to q0 while
/// consuming a # at weight 0, absorbing one separator for free, and each
/// later segment can be drained through q7 at a cost of exactly 1. With
/// n+2 segments that adds up to exactly the budget n and the word is
/// accepted; the extra segment pushes the unavoidable cost to n+1.
pub fn witness_word_bounded(m: &TwoCounterMachine, n: u64) -> Result<Vec<String>, TcmError> {
    let prefix = trace_prefix(m, n)?;
    Ok(join_segments(&prefix, n + 3))
}

fn join_segments(prefix: &[String], segments: u64) -> Vec<String> {
    let mut word = Vec::new();
    for k in 0..segments {
        if k > 0 {
            word.push("#".to_string());
        }
        word.extend_from_slice(prefix);
    }
    word
}
