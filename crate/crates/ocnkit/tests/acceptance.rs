//! Acceptance suite: one test per release criterion, each validating a
//! component against an independent brute-force reference on seeded random
//! instances and printing a summary line on success.

mod common;

use common::*;
use ocnkit::det::{
    cycle_spectrum, decide_det_bounded_universality, decide_det_iv_universality,
    decide_det_universality,
};
use ocnkit::forms::{linear_form_executable, to_linear_form, Cycle, LinearForm};
use ocnkit::ocn::{is_chained, parse_ocn, run_of_path, Ocn, OcnBuilder};
use ocnkit::oracle::{
    oracle_accepts, oracle_accepts_bounded, oracle_count_runs, oracle_enumerate_simple_cycles,
    oracle_unary_table,
};
use ocnkit::reduction::{
    build_net_a, build_net_aprime, parse_2cm, witness_word, witness_word_bounded,
};
use ocnkit::unamb::{
    decide_uocn_bounded_universality, decide_uocn_universality_unary, is_unambiguous_nfa,
    ufa_universal_counting,
};
use ocnkit::unary::{
    decide_bounded_universality_unary, decide_iv_universality_unary, decide_universality_unary,
    stable_states, zero_cycle_for, Bounds,
};
use ocnkit::verdict::{Verdict, Witness};
use rand::Rng;
use std::io::Write as _;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

fn witness_ids(net: &Ocn, v: &Verdict) -> Vec<usize> {
    match &v.witness {
        Some(Witness::Word(names)) => names
            .iter()
            .map(|n| net.letter_id(n).expect("witness letters are in the alphabet"))
            .collect(),
        other => panic!("expected a word witness, got {other:?}"),
    }
}

#[test]
fn c01_membership_matches_oracles() {
    let mut r = rng(0xAC01);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 2,
        max_norm: 2,
        density: 0.3,
        accept_prob: 0.5,
    };
    for _ in 0..1000 {
        let net = random_net(&mut r, &p);
        let s0 = net.initial();
        let c0 = r.gen_range(0..=3u64);
        let b = r.gen_range(c0..=6);
        let word = random_word(&mut r, net.num_letters(), 8);
        assert_eq!(
            net.accepts(s0, c0, &word),
            oracle_accepts(&net, s0, c0, &word),
            "membership mismatch on {net} c0={c0} word={word:?}"
        );
        assert_eq!(
            net.accepts_bounded(s0, c0, b, &word).unwrap(),
            oracle_accepts_bounded(&net, s0, c0, b, &word),
            "bounded membership mismatch on {net} c0={c0} b={b} word={word:?}"
        );
    }
    println!("criterion 1: membership and bounded membership vs oracles on 1000 random nets: pass");
}

#[test]
fn c02_linear_form_preserves_run_shape() {
    let mut r = rng(0xAC02);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.5,
        accept_prob: 0.5,
    };
    let mut done = 0;
    let mut attempts = 0;
    while done < 500 {
        attempts += 1;
        assert!(attempts < 50_000, "path sampling failed to produce 500 paths");
        let net = random_net(&mut r, &p);
        let c0 = r.gen_range(0..=3u64);
        let path = random_executable_path(&mut r, &net, c0, 40);
        if path.is_empty() {
            continue;
        }
        let orig = run_of_path(&path, c0).expect("generated path is executable");
        let lf = to_linear_form(&net, &path, c0).expect("linear form of an executable path");
        assert_eq!(lf.unrolled_len(), path.len() as u128, "length not preserved on {net}");
        let q = net.num_states();
        assert!(
            lf.underlying_len() <= 2 * q * q,
            "underlying length {} exceeds 2|Q|^2 = {} on {net}",
            lf.underlying_len(),
            2 * q * q
        );
        let lf_final =
            linear_form_executable(&lf, c0).expect("canonical path stays executable");
        assert!(
            lf_final >= orig.final_counter(),
            "final counter dropped from {} to {lf_final} on {net}",
            orig.final_counter()
        );
        let unrolled = lf.unroll().expect("exponents are small here");
        assert!(is_chained(&unrolled));
        let rerun = run_of_path(&unrolled, c0).expect("unrolled canonical path executable");
        assert_eq!(rerun.final_counter(), lf_final);
        done += 1;
    }
    println!("criterion 2: linear forms preserve length/executability on 500 random paths: pass");
}

#[test]
fn c03_closed_form_executability() {
    let mut r = rng(0xAC03);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.5,
        accept_prob: 0.5,
    };
    let mut done = 0;
    let mut attempts = 0;
    while done < 500 {
        attempts += 1;
        assert!(attempts < 50_000, "form sampling failed to produce 500 forms");
        let net = random_net(&mut r, &p);
        let c0 = r.gen_range(0..=3u64);
        let path = random_executable_path(&mut r, &net, c0, 30);
        if path.is_empty() {
            continue;
        }
        let lf = to_linear_form(&net, &path, c0).expect("linear form of an executable path");
        for c in [0, c0, c0 + 1, c0 + 5] {
            let closed = linear_form_executable(&lf, c);
            let brute = run_of_path(&lf.unroll().unwrap(), c).ok().map(|run| run.final_counter());
            assert_eq!(closed, brute, "closed form disagrees with unrolling at c={c} on {net}");
        }
        done += 1;
    }

    // Speed at an astronomically large exponent: a single cycle repeated
    // 2^40 times must evaluate well under a millisecond.
    let mut b = OcnBuilder::new("pump");
    let a = b.letter("a");
    let q = b.state("q", true, true);
    b.trans(q, a, 1, q);
    let net = b.build().unwrap();
    let cyc = Cycle::new(vec![net.transitions()[0]]).unwrap();
    let lf = LinearForm::new(vec![Vec::new(), Vec::new()], vec![(cyc, 1u64 << 40)]).unwrap();
    assert_eq!(linear_form_executable(&lf, 0), Some(1i128 << 40));
    let start = Instant::now();
    for _ in 0..1000 {
        assert!(std::hint::black_box(linear_form_executable(std::hint::black_box(&lf), 0))
            .is_some());
    }
    let per_call = start.elapsed() / 1000;
    assert!(
        per_call < Duration::from_millis(1),
        "closed-form evaluation took {per_call:?} at exponent 2^40"
    );
    println!(
        "criterion 3: closed-form executability vs unrolling on 500 forms, {per_call:?} at 2^40: pass"
    );
}

#[test]
fn c04_unary_universality_matches_oracle() {
    let mut r = rng(0xAC04);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.4,
        accept_prob: 0.5,
    };
    let mut universal = 0;
    for _ in 0..500 {
        let net = random_net(&mut r, &p);
        let s0 = net.initial();
        let c0 = r.gen_range(0..=3u64);
        let v = decide_universality_unary(&net, s0, c0).expect("decider within scale limits");
        if v.is_universal() {
            universal += 1;
            let table = oracle_unary_table(&net, s0, c0, 10_000);
            assert!(
                table.iter().all(|&x| x),
                "declared universal but oracle rejects length {} on {net} c0={c0}",
                table.iter().position(|&x| !x).unwrap()
            );
        } else {
            let n = v.witness_length().expect("unary witness length") as usize;
            assert!(n <= 2_000_000, "witness length {n} out of scale on {net}");
            let table = oracle_unary_table(&net, s0, c0, n);
            assert!(!table[n], "witness length {n} is accepted on {net} c0={c0}");
        }
    }
    println!(
        "criterion 4: unary universality vs oracle tables on 500 nets ({universal} universal): pass"
    );
}

#[test]
fn c05_unary_iv_and_bounded_match_oracle() {
    let mut r = rng(0xAC05);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.4,
        accept_prob: 0.5,
    };
    for i in 0..500 {
        let net = random_net(&mut r, &p);
        let s0 = net.initial();

        let v = decide_iv_universality_unary(&net, s0).expect("decider within scale limits");
        if v.is_universal() {
            let c0 = v.parameter.expect("sufficient initial counter");
            let table = oracle_unary_table(&net, s0, c0, 10_000);
            assert!(table.iter().all(|&x| x), "c0={c0} does not make {net} universal");
        } else {
            for c0 in 0..=20 {
                let table = oracle_unary_table(&net, s0, c0, 1000);
                assert!(
                    table.iter().any(|x| !x),
                    "declared never universal but c0={c0} accepts all short lengths on {net}"
                );
            }
        }

        let c0 = r.gen_range(0..=3u64);
        let v =
            decide_bounded_universality_unary(&net, s0, c0).expect("decider within scale limits");
        if v.is_universal() {
            let b = v.parameter.expect("sufficient ceiling");
            let norm = net.max_norm() as u64;
            if b >= c0.saturating_add(10_000 * norm) {
                // The ceiling can never bind within 10^4 steps, so the
                // plain table is the bounded table on this range.
                let table = oracle_unary_table(&net, s0, c0, 10_000);
                assert!(table.iter().all(|&x| x), "ceiling {b} does not work on {net} c0={c0}");
            } else {
                let table = bounded_unary_table(&net, s0, c0, b, 10_000);
                if i < 25 {
                    // Spot-check the bitset table against frontier semantics.
                    for n in 0..=8 {
                        assert_eq!(
                            table[n],
                            net.accepts_bounded(s0, c0, b, &vec![0; n]).unwrap()
                        );
                    }
                }
                assert!(table.iter().all(|&x| x), "ceiling {b} does not work on {net} c0={c0}");
            }
        } else {
            for delta in 0..=50u64 {
                let b = c0 + delta;
                let table = bounded_unary_table(&net, s0, c0, b, 1000);
                assert!(
                    table.iter().any(|x| !x),
                    "declared never bounded-universal but b={b} accepts all short lengths on {net}"
                );
            }
        }
    }
    println!(
        "criterion 5: unary initial-value and bounded universality vs oracle sweeps on 500 nets: pass"
    );
}

#[test]
fn c06_det_deciders_and_spectrum() {
    let mut r = rng(0xAC06);
    let p = NetParams {
        max_states: 5,
        min_letters: 1,
        max_letters: 3,
        max_norm: 2,
        density: 0.8,
        accept_prob: 0.6,
    };
    for _ in 0..500 {
        let net = random_det_net(&mut r, &p);
        let s0 = net.initial();
        let c0 = r.gen_range(0..=3u64);
        let horizon = 2 * net.num_states() + 2;
        let (sub, _, _) = net.restrict_to_reachable(s0);
        let nominal = sub.num_states() as u64 * sub.max_norm() as u64;

        let v = decide_det_universality(&net, s0, c0).unwrap();
        let short = det_short_reject(&net, s0, c0, None, horizon);
        if v.is_universal() {
            assert!(short.is_none(), "universal verdict but {short:?} rejected on {net} c0={c0}");
        } else {
            let w = witness_ids(&net, &v);
            assert!(!net.accepts(s0, c0, &w), "witness accepted on {net} c0={c0}");
        }

        let v = decide_det_iv_universality(&net, s0).unwrap();
        if v.is_universal() {
            let c0v = v.parameter.expect("sufficient initial counter");
            assert!(
                det_short_reject(&net, s0, c0v, None, horizon).is_none(),
                "c0={c0v} still rejects a short word on {net}"
            );
        } else {
            let w = witness_ids(&net, &v);
            assert!(!net.accepts(s0, nominal, &w), "witness accepted at c0={nominal} on {net}");
        }

        let v = decide_det_bounded_universality(&net, s0, c0).unwrap();
        if v.is_universal() {
            let b = v.parameter.expect("sufficient ceiling");
            assert!(
                det_short_reject(&net, s0, c0, Some(b), horizon).is_none(),
                "ceiling {b} still rejects a short word on {net} c0={c0}"
            );
        } else {
            let w = witness_ids(&net, &v);
            assert!(
                !net.accepts_bounded(s0, c0, c0 + nominal, &w).unwrap(),
                "witness accepted under the nominal ceiling on {net} c0={c0}"
            );
        }
    }

    let p = NetParams {
        max_states: 6,
        min_letters: 1,
        max_letters: 2,
        max_norm: 2,
        density: 0.3,
        accept_prob: 0.5,
    };
    for _ in 0..200 {
        let net = random_net(&mut r, &p);
        let sp = cycle_spectrum(&net);
        let simple = oracle_enumerate_simple_cycles(&net);
        let has_neg = simple.iter().any(|c| c.effect() < 0);
        let has_pos = simple.iter().any(|c| c.effect() > 0);
        assert_eq!(sp.negative_cycle().is_some(), has_neg, "negative-cycle mismatch on {net}");
        assert_eq!(sp.positive_cycle().is_some(), has_pos, "positive-cycle mismatch on {net}");
        if let Some(d) = sp.negative_cycle() {
            assert!(d.effect < 0);
            let walk = sp.walk(d.len, d.state, d.state, false).expect("spectrum walk exists");
            assert_eq!(walk.len(), d.len);
            assert_eq!(walk.iter().map(|t| t.effect).sum::<i64>(), d.effect);
        }
        if let Some(d) = sp.positive_cycle() {
            assert!(d.effect > 0);
            let walk = sp.walk(d.len, d.state, d.state, true).expect("spectrum walk exists");
            assert_eq!(walk.len(), d.len);
            assert_eq!(walk.iter().map(|t| t.effect).sum::<i64>(), d.effect);
        }
    }
    println!(
        "criterion 6: deterministic deciders on 500 nets and cycle spectrum on 200 nets: pass"
    );
}

#[test]
fn c07_ambiguity_and_ufa_universality() {
    let mut r = rng(0xAC07);
    let p = NetParams {
        max_states: 5,
        min_letters: 1,
        max_letters: 2,
        max_norm: 0,
        density: 0.3,
        accept_prob: 0.5,
    };
    let mut ambiguous = 0;
    for _ in 0..300 {
        let nfa = random_net(&mut r, &p).underlying_nfa();
        let s0 = nfa.initial();
        let rep = is_unambiguous_nfa(&nfa, s0).unwrap();
        let oracle_amb = all_words(nfa.num_letters(), 6)
            .iter()
            .any(|w| oracle_count_runs(&nfa, s0, 0, w) >= 2);
        if oracle_amb {
            assert!(rep.ambiguous, "oracle found a doubly-run word but check says unambiguous");
        }
        if rep.ambiguous {
            ambiguous += 1;
            let wit = rep.witness.expect("ambiguity witness");
            let ids: Vec<usize> = wit
                .word
                .iter()
                .map(|n| nfa.letter_id(n).expect("witness letters are in the alphabet"))
                .collect();
            assert!(
                count_runs_capped(&nfa, s0, 0, &ids, 2) >= 2,
                "ambiguity witness {:?} does not have two runs",
                wit.word
            );
        }
    }

    let p = NetParams {
        max_states: 6,
        min_letters: 2,
        max_letters: 2,
        max_norm: 0,
        density: 0.25,
        accept_prob: 0.5,
    };
    let mut found = 0;
    let mut attempts = 0;
    while found < 300 {
        attempts += 1;
        assert!(attempts < 100_000, "UFA sampling failed to produce 300 instances");
        let nfa = random_net(&mut r, &p).underlying_nfa();
        let s0 = nfa.initial();
        if is_unambiguous_nfa(&nfa, s0).unwrap().ambiguous {
            continue;
        }
        found += 1;
        let v = ufa_universal_counting(&nfa, s0).unwrap();
        let subset = subset_universal(&nfa, s0);
        assert_eq!(
            v.is_universal(),
            subset.is_none(),
            "counting vs subset construction mismatch on {nfa}"
        );
        if !v.is_universal() {
            let w = witness_ids(&nfa, &v);
            assert!(!nfa.accepts(s0, 0, &w), "universality witness accepted on {nfa}");
        }
    }
    println!(
        "criterion 7: ambiguity check on 300 automata ({ambiguous} ambiguous) and counting-based \
         universality on 300 unambiguous automata: pass"
    );
}

#[test]
fn c08_unambiguous_deciders_agree_with_unary() {
    let mut r = rng(0xAC08);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.3,
        accept_prob: 0.5,
    };
    let mut found = 0;
    let mut attempts = 0;
    while found < 200 {
        attempts += 1;
        assert!(attempts < 100_000, "sampling failed to produce 200 unambiguous nets");
        let net = random_net(&mut r, &p);
        if net.has_effect_parallel_transitions() {
            continue;
        }
        let s0 = net.initial();
        if is_unambiguous_nfa(&net.underlying_nfa(), s0).unwrap().ambiguous {
            continue;
        }
        found += 1;
        let c0 = r.gen_range(0..=3u64);
        let a = decide_uocn_universality_unary(&net, s0, c0).unwrap();
        let b = decide_universality_unary(&net, s0, c0).unwrap();
        assert_eq!(
            a.is_universal(),
            b.is_universal(),
            "universality disagreement on {net} c0={c0}"
        );
        let a = decide_uocn_bounded_universality(&net, s0, c0).unwrap();
        let b = decide_bounded_universality_unary(&net, s0, c0).unwrap();
        assert_eq!(
            a.is_universal(),
            b.is_universal(),
            "bounded-universality disagreement on {net} c0={c0}"
        );
    }
    println!(
        "criterion 8: unambiguous-net deciders agree with unary deciders on 200 instances: pass"
    );
}

#[test]
fn c09_reduction_nets() {
    let mut r = rng(0xAC09);
    let m_halt = parse_2cm("inc x\nhalt\n").unwrap();
    let a = build_net_a(&m_halt);
    let ap = build_net_aprime(&m_halt);
    for _ in 0..200 {
        let w = random_word(&mut r, a.num_letters(), 12);
        assert!(a.accepts(a.initial(), 3, &w), "random word rejected by the plain net");
        let wp: Vec<usize> = w
            .iter()
            .map(|&l| ap.letter_id(a.letter_name(l)).expect("shared alphabet"))
            .collect();
        assert!(
            ap.accepts_bounded(ap.initial(), 0, 6, &wp).unwrap(),
            "random word rejected by the bounded net"
        );
    }

    let m_loop = parse_2cm("goto 1\n").unwrap();
    let a = build_net_a(&m_loop);
    let ap = build_net_aprime(&m_loop);
    for n in 1..=4u64 {
        let w = witness_word(&m_loop, n).unwrap();
        let ids: Vec<usize> =
            w.iter().map(|x| a.letter_id(x).expect("witness letters exist")).collect();
        assert!(!a.accepts(a.initial(), n, &ids), "witness accepted from c0={n}");

        let wb = witness_word_bounded(&m_loop, n).unwrap();
        let ids: Vec<usize> =
            wb.iter().map(|x| ap.letter_id(x).expect("witness letters exist")).collect();
        assert!(
            !ap.accepts_bounded(ap.initial(), 0, n, &ids).unwrap(),
            "bounded witness accepted under b={n}"
        );
    }
    println!(
        "criterion 9: reduction nets accept random words for a halting machine and reject \
         witnesses for a looping one: pass"
    );
}

#[test]
fn c10_stable_zero_cycles() {
    let mut r = rng(0xAC10);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 1,
        max_norm: 2,
        density: 0.4,
        accept_prob: 0.5,
    };
    let mut checked = 0;
    for _ in 0..300 {
        let net = random_net(&mut r, &p);
        let stable = stable_states(&net).unwrap();
        let b5 = Bounds::for_net(&net, 0).b5 as i128;
        for &q in &stable {
            let z = zero_cycle_for(&net, q).expect("stable states have a zero cycle");
            assert_eq!(z.start(), q);
            assert_eq!(z.effect(), 0, "zero cycle at {} has nonzero effect on {net}", q);
            assert!(
                z.depth() <= b5,
                "zero cycle at {} has depth {} > {b5} on {net}",
                q,
                z.depth()
            );
            checked += 1;
        }
    }
    println!(
        "criterion 10: {checked} stable-state zero cycles across 300 nets have effect 0 and \
         bounded depth: pass"
    );
}

fn run_cli(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ocnkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("cli starts");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().expect("cli finishes");
    (out.status.code().expect("cli exits normally"), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn c11_cli_round_trip_and_exit_codes() {
    // Printed nets reparse to the same printout.
    let mut r = rng(0xAC11);
    let p = NetParams {
        max_states: 4,
        min_letters: 1,
        max_letters: 2,
        max_norm: 2,
        density: 0.3,
        accept_prob: 0.5,
    };
    for _ in 0..50 {
        let net = random_net(&mut r, &p);
        let text = net.to_string();
        let reparsed = parse_ocn(&text).expect("printed net parses");
        assert_eq!(reparsed.to_string(), text);
    }

    // Verdicts survive a JSON round trip.
    let universal_net =
        parse_ocn("net u\nalphabet a\nstate q initial accepting\ntrans q a 1 q\n").unwrap();
    let losing_net = parse_ocn("net v\nalphabet a\nstate q initial\ntrans q a 1 q\n").unwrap();
    for net in [&universal_net, &losing_net] {
        let v = decide_universality_unary(net, net.initial(), 0).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    // Exit codes: 0 holds, 1 fails, 2 bad input, 3 out-of-scope class.
    let (code, out) = run_cli(&["universal", "--net", "-"], &universal_net.to_string());
    assert_eq!(code, 0, "expected exit 0, output: {out}");
    let (code, _) = run_cli(&["universal", "--net", "-"], &losing_net.to_string());
    assert_eq!(code, 1);
    let (code, _) = run_cli(&["universal", "--net", "-"], "this is not a net\n");
    assert_eq!(code, 2);
    let two_letter_det = "net d\nalphabet a b\nstate q initial accepting\n\
                          trans q a 0 q\ntrans q b 0 q\n";
    let (code, _) = run_cli(&["universal", "--net", "-", "--class", "unamb"], two_letter_det);
    assert_eq!(code, 3);

    // Membership exit codes and JSON output shape.
    let (code, out) = run_cli(
        &["member", "--net", "-", "--c0", "0", "--word", "a a", "--format", "json"],
        &universal_net.to_string(),
    );
    assert_eq!(code, 0, "accepted word should exit 0, output: {out}");
    let parsed: serde_json::Value = serde_json::from_str(&out).expect("json output parses");
    assert!(parsed.get("timings").is_some());
    let (code, _) = run_cli(
        &["member", "--net", "-", "--c0", "0", "--word", "a a"],
        &losing_net.to_string(),
    );
    assert_eq!(code, 1);

    println!("criterion 11: net/verdict round trips and CLI exit codes: pass");
}
