//! Command-line front end: membership checks, universality deciders
//! selected by net class, condition reports, ambiguity reports, reduction
//! net generation, and witness word generation.
//!
//! Exit codes: 0 = property holds / word accepted; 1 = property fails
//! (witness printed); 2 = usage or input error; 3 = net class out of
//! scope for the requested decision.

use std::io::Read;
use std::process::exit;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ocnkit::det::{eval_conditions, decide_det_bounded_universality, decide_det_iv_universality, decide_det_universality};
use ocnkit::ocn::{parse_ocn, Ocn};
use ocnkit::reduction::{build_net_a, build_net_aprime, parse_2cm, witness_word, witness_word_bounded, TwoCounterMachine};
use ocnkit::unamb::{check_unambiguous, decide_suocn_iv_universality, decide_uocn_bounded_universality, decide_uocn_universality_unary, is_unambiguous_nfa, AmbiguityReport, UnambStatus};
use ocnkit::unary::{decide_bounded_universality_unary, decide_iv_universality_unary, decide_universality_unary, langvia_lasso, pump_states, stable_states, LassoMode};
use ocnkit::verdict::{Verdict, Witness};

#[derive(Parser)]
#[command(name = "ocnkit", about = "One-counter net toolkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Include supporting detail (lassos, condition reports) in reports.
    #[arg(long, global = true)]
    explain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Class {
    Auto,
    Unary,
    Det,
    Unamb,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does the net accept the word from its initial state and --c0?
    Member {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
        #[arg(long)]
        word: String,
    },
    /// Like member, with the counter also bounded above by --bound.
    MemberBounded {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        word: String,
    },
    /// Is the language from --c0 all words?
    Universal {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
        #[arg(long, value_enum, default_value_t = Class::Auto)]
        class: Class,
    },
    /// Is there an initial counter making the language all words?
    IvUniversal {
        #[arg(long)]
        net: String,
        #[arg(long, value_enum, default_value_t = Class::Auto)]
        class: Class,
    },
    /// Is there a counter ceiling under which the language is all words?
    BoundedUniversal {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
        #[arg(long, value_enum, default_value_t = Class::Auto)]
        class: Class,
    },
    /// Print the C1-C5 condition report for a deterministic net.
    Conditions {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Is the net unambiguous (semantically, from --c0)?
    Ambiguity {
        #[arg(long)]
        net: String,
        #[arg(long, default_value_t = 0)]
        c0: u64,
    },
    /// Emit the reduction net of a two-counter machine (A, or A' with --prime).
    Reduce {
        #[arg(long = "2cm")]
        tcm: String,
        #[arg(long)]
        prime: bool,
    },
    /// Emit the non-halting witness word of a two-counter machine.
    Witness {
        #[arg(long = "2cm")]
        tcm: String,
        #[arg(long)]
        n: u64,
        /// Emit the bounded-universality witness instead.
        #[arg(long)]
        bounded: bool,
    },
}

type Failure = (i32, String);

fn input_err(e: impl std::fmt::Display) -> Failure {
    (2, format!("error: {e}"))
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| input_err(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| input_err(format!("reading {path}: {e}")))
    }
}

fn load_net(path: &str) -> Result<Ocn, Failure> {
    parse_ocn(&read_input(path)?).map_err(input_err)
}

fn load_machine(path: &str) -> Result<TwoCounterMachine, Failure> {
    let m = parse_2cm(&read_input(path)?).map_err(input_err)?;
    for w in m.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(m)
}

/// Renders a witness for text output; unary witnesses become concrete
/// words over the net's letter when short enough.
fn witness_text(net: &Ocn, w: &Witness) -> String {
    match w {
        Witness::Word(letters) => letters.join(" "),
        Witness::UnaryLength(n) => {
            if *n <= 1000 && net.num_letters() == 1 {
                std::iter::repeat(net.letter_name(0))
                    .take(*n as usize)
                    .collect::<Vec<_>>()
                    .join(" ")
            } else {
                format!("(unary word of length {n})")
            }
        }
    }
}

fn print_verdict(
    net: &Ocn,
    verdict: &Verdict,
    format: Format,
    explain: Vec<String>,
    elapsed_ms: f64,
) -> i32 {
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(verdict).expect("verdict serializes");
            let obj = value.as_object_mut().expect("verdict is an object");
            if !explain.is_empty() {
                obj.insert("explain".into(), serde_json::json!(explain));
            }
            obj.insert("timings".into(), serde_json::json!({ "total_ms": elapsed_ms }));
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
        Format::Text => {
            println!(
                "answer: {}",
                if verdict.is_universal() { "universal" } else { "not-universal" }
            );
            if let Some(w) = &verdict.witness {
                println!("witness: {}", witness_text(net, w));
            }
            if let Some(p) = verdict.parameter {
                println!("parameter: {p}");
            }
            println!("lemma: {}", verdict.lemma);
            for w in &verdict.warnings {
                println!("warning: {w}");
            }
            for line in &explain {
                println!("explain: {line}");
            }
            println!("time: {elapsed_ms:.1} ms");
        }
    }
    if verdict.is_universal() {
        0
    } else {
        1
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Problem {
    Universality,
    InitialValue,
    Bounded,
}

fn resolve_class(net: &Ocn, class: Class, problem: Problem) -> Result<Class, Failure> {
    let resolved = match class {
        Class::Auto => {
            if net.is_singleton_alphabet() {
                Class::Unary
            } else if net.is_deterministic() {
                Class::Det
            } else {
                let structural =
                    is_unambiguous_nfa(&net.underlying_nfa(), net.initial()).map_err(input_err)?;
                if !structural.ambiguous {
                    Class::Unamb
                } else {
                    return Err((
                        3,
                        "error: universality for general nondeterministic nets is out of scope \
                         (no class applies)"
                            .to_string(),
                    ));
                }
            }
        }
        c => c,
    };
    if resolved == Class::Unary && !net.is_singleton_alphabet() {
        return Err(input_err("class unary requires a singleton alphabet"));
    }
    if resolved == Class::Unamb && problem == Problem::Universality && !net.is_singleton_alphabet()
    {
        return Err((
            3,
            "error: plain universality for unambiguous nets is only decided over a \
             singleton alphabet"
                .to_string(),
        ));
    }
    Ok(resolved)
}

fn unary_explain(net: &Ocn, c0: u64, problem: Problem) -> Vec<String> {
    let s0 = net.initial();
    let (mode, states) = match problem {
        Problem::Universality => (LassoMode::Pump, pump_states(net).map(|m| m.into_keys().collect::<Vec<_>>())),
        Problem::InitialValue => (LassoMode::Nfa, pump_states(net).map(|m| m.into_keys().collect())),
        Problem::Bounded => (LassoMode::Stable, stable_states(net).map(|s| s.into_iter().collect())),
    };
    let states = match states {
        Ok(s) => s,
        Err(e) => return vec![format!("(no lassos: {e})")],
    };
    states
        .into_iter()
        .map(|r| match langvia_lasso(net, s0, c0, r, mode) {
            Ok(l) => format!("via {}: {}", net.state_name(r), l.explain()),
            Err(e) => format!("via {}: (no lasso: {e})", net.state_name(r)),
        })
        .collect()
}

fn decide(
    net: &Ocn,
    class: Class,
    problem: Problem,
    c0: u64,
    explain: bool,
) -> Result<(Verdict, Vec<String>), Failure> {
    let s0 = net.initial();
    let class = resolve_class(net, class, problem)?;
    let verdict = match (class, problem) {
        (Class::Unary, Problem::Universality) => {
            decide_universality_unary(net, s0, c0).map_err(input_err)?
        }
        (Class::Unary, Problem::InitialValue) => {
            decide_iv_universality_unary(net, s0).map_err(input_err)?
        }
        (Class::Unary, Problem::Bounded) => {
            decide_bounded_universality_unary(net, s0, c0).map_err(input_err)?
        }
        (Class::Det, Problem::Universality) => {
            decide_det_universality(net, s0, c0).map_err(input_err)?
        }
        (Class::Det, Problem::InitialValue) => {
            decide_det_iv_universality(net, s0).map_err(input_err)?
        }
        (Class::Det, Problem::Bounded) => {
            decide_det_bounded_universality(net, s0, c0).map_err(input_err)?
        }
        (Class::Unamb, Problem::Universality) => {
            decide_uocn_universality_unary(net, s0, c0).map_err(input_err)?
        }
        (Class::Unamb, Problem::InitialValue) => {
            decide_suocn_iv_universality(net, s0).map_err(input_err)?
        }
        (Class::Unamb, Problem::Bounded) => {
            decide_uocn_bounded_universality(net, s0, c0).map_err(input_err)?
        }
        (Class::Auto, _) => unreachable!("auto was resolved"),
    };
    let extra = if explain {
        match class {
            Class::Unary => unary_explain(net, c0, problem),
            Class::Det => {
                let b = c0.saturating_add(
                    (net.num_states() as u64).saturating_mul(net.max_norm() as u64),
                );
                match eval_conditions(net, c0, b) {
                    Ok(report) => report.to_string().lines().map(str::to_string).collect(),
                    Err(e) => vec![format!("(no condition report: {e})")],
                }
            }
            Class::Unamb => match check_unambiguous(net, s0, c0) {
                Ok(UnambStatus::Unambiguous) => vec!["unambiguity: verified".to_string()],
                Ok(UnambStatus::Unverified(w)) => vec![format!("unambiguity: {w}")],
                Ok(UnambStatus::Ambiguous(_)) => vec!["unambiguity: refuted".to_string()],
                Err(e) => vec![format!("(no ambiguity status: {e})")],
            },
            Class::Auto => unreachable!(),
        }
    } else {
        Vec::new()
    };
    Ok((verdict, extra))
}

fn print_membership(accepted: bool, format: Format, elapsed_ms: f64) -> i32 {
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "answer": if accepted { "accepted" } else { "rejected" },
                "lemma": "core:dp-membership",
                "timings": { "total_ms": elapsed_ms },
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
        Format::Text => {
            println!("answer: {}", if accepted { "accepted" } else { "rejected" });
            println!("time: {elapsed_ms:.1} ms");
        }
    }
    if accepted {
        0
    } else {
        1
    }
}

fn print_ambiguity(report: &AmbiguityReport, format: Format, elapsed_ms: f64) -> i32 {
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(report).expect("report serializes");
            let obj = value.as_object_mut().expect("report is an object");
            obj.insert("timings".into(), serde_json::json!({ "total_ms": elapsed_ms }));
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
        Format::Text => {
            println!("ambiguous: {}", report.ambiguous);
            if let Some(w) = &report.witness {
                println!("word: {}", w.word.join(" "));
                println!("run a: {}", w.run_a.join(" ; "));
                println!("run b: {}", w.run_b.join(" ; "));
            }
            println!("time: {elapsed_ms:.1} ms");
        }
    }
    if report.ambiguous {
        1
    } else {
        0
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let format = cli.format;
    let explain = cli.explain;
    match cli.cmd {
        Cmd::Member { net, c0, word } => {
            let net = load_net(&net)?;
            let w = net.parse_word(&word).map_err(input_err)?;
            let start = Instant::now();
            let accepted = net.accepts(net.initial(), c0, &w);
            Ok(print_membership(accepted, format, ms(start)))
        }
        Cmd::MemberBounded { net, c0, bound, word } => {
            let net = load_net(&net)?;
            let w = net.parse_word(&word).map_err(input_err)?;
            let start = Instant::now();
            let accepted = net
                .accepts_bounded(net.initial(), c0, bound, &w)
                .map_err(input_err)?;
            Ok(print_membership(accepted, format, ms(start)))
        }
        Cmd::Universal { net, c0, class } => {
            let net = load_net(&net)?;
            let start = Instant::now();
            let (verdict, extra) = decide(&net, class, Problem::Universality, c0, explain)?;
            Ok(print_verdict(&net, &verdict, format, extra, ms(start)))
        }
        Cmd::IvUniversal { net, class } => {
            let net = load_net(&net)?;
            let start = Instant::now();
            let (verdict, extra) = decide(&net, class, Problem::InitialValue, 0, explain)?;
            Ok(print_verdict(&net, &verdict, format, extra, ms(start)))
        }
        Cmd::BoundedUniversal { net, c0, class } => {
            let net = load_net(&net)?;
            let start = Instant::now();
            let (verdict, extra) = decide(&net, class, Problem::Bounded, c0, explain)?;
            Ok(print_verdict(&net, &verdict, format, extra, ms(start)))
        }
        Cmd::Conditions { net, c0, bound } => {
            let net = load_net(&net)?;
            let report = eval_conditions(&net, c0, bound).map_err(input_err)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => println!("{report}"),
            }
            Ok(0)
        }
        Cmd::Ambiguity { net, c0 } => {
            let net = load_net(&net)?;
            let start = Instant::now();
            let all_zero = net.transitions().iter().all(|t| t.effect == 0);
            let report = if all_zero {
                is_unambiguous_nfa(&net, net.initial()).map_err(input_err)?
            } else {
                match check_unambiguous(&net, net.initial(), c0).map_err(input_err)? {
                    UnambStatus::Ambiguous(report) => report,
                    UnambStatus::Unambiguous => AmbiguityReport { ambiguous: false, witness: None },
                    UnambStatus::Unverified(warning) => {
                        eprintln!("warning: {warning}");
                        AmbiguityReport { ambiguous: false, witness: None }
                    }
                }
            };
            Ok(print_ambiguity(&report, format, ms(start)))
        }
        Cmd::Reduce { tcm, prime } => {
            let m = load_machine(&tcm)?;
            let net = if prime { build_net_aprime(&m) } else { build_net_a(&m) };
            print!("{net}");
            Ok(0)
        }
        Cmd::Witness { tcm, n, bounded } => {
            let m = load_machine(&tcm)?;
            let word = if bounded {
                witness_word_bounded(&m, n).map_err(input_err)?
            } else {
                witness_word(&m, n).map_err(input_err)?
            };
            println!("{}", word.join(" "));
            Ok(0)
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err((code, message)) => {
            eprintln!("{message}");
            exit(code);
        }
    }
}
