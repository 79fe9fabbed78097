use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use duality::automata::{Alphabet, Machine};
use duality::constructions::{
    addition_dpda, addition_dpda_gap_push, chi_transducer, npda_for_a, npda_unequal_blocks, psi_transducer,
    register_languages, regular_components, NamedLanguage,
};
use duality::logic::{eval, parse_formula, relation_of, Assignment, Registry, WordStructure, DEFAULT_WINDOW};
use duality::semilinear::is_stratified;
use duality::structures::{gamma_alphabet, parse_word, render_word, VnStructure, MAX_VARS};
use duality::verify::{self, SUITES};

#[derive(Parser)]
#[command(name = "duality", version, about = "Logic over words, numerical predicates and pushdown constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a word.
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "")]
        word: String,
        /// Single characters ("ab"), comma-separated names, or gammaN for Γ_N.
        #[arg(long)]
        alphabet: String,
        /// Values for free variables: x=3,y=4
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long)]
        json: bool,
    },
    /// Membership in a named language.
    Member {
        #[arg(long)]
        lang: String,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Tuples of a numerical relation up to a bound.
    Relation(RelationArgs),
    /// Whether a set of period vectors (JSON list of lists) is stratified.
    Stratified {
        #[arg(long)]
        periods: String,
        #[arg(long)]
        json: bool,
    },
    /// Run an equivalence suite.
    Verify(VerifyArgs),
    /// Tuple of positions to its unary structure.
    Encode {
        /// Comma-separated positions, 1-based.
        #[arg(long)]
        tuple: String,
        /// Word length; defaults to the largest position.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Unary structure to its tuple.
    Decode {
        #[arg(long)]
        word: String,
        /// Number of variables; defaults to the largest index mentioned.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print one of the built-in machines in the text format.
    Machine {
        /// addition-dpda, addition-dpda-gap-push, npda-A, npda-unequal, regular, psiM or chiM.
        #[arg(long)]
        name: String,
    },
}

#[derive(Args)]
struct RelationArgs {
    #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
    lang: Option<String>,
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    arity: usize,
    #[arg(long)]
    bound: u32,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: u32,
    /// Variable order for --formula; defaults to the free variables sorted.
    #[arg(long)]
    vars: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all".
    #[arg(long)]
    suite: String,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    max_len: Option<u64>,
    #[arg(long)]
    max_c: Option<u64>,
    #[arg(long)]
    window: Option<u64>,
    #[arg(long)]
    sets: Option<u64>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_arity: Option<u64>,
    #[arg(long)]
    json: bool,
}

/// Failure that is the caller's fault: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn registry() -> Registry {
    let mut r = Registry::standard();
    register_languages(&mut r);
    r
}

fn alphabet_of(spec: &str) -> Result<Alphabet> {
    if let Some(n) = spec.strip_prefix("gamma") {
        let n: usize = n.parse().map_err(|_| Usage(format!("bad alphabet {spec:?}")))?;
        return Ok(gamma_alphabet(n).map_err(|e| Usage(e.to_string()))?);
    }
    let a = if spec.contains(',') { Alphabet::new(spec.split(',').map(str::trim)) } else { Alphabet::from_chars(spec) };
    a.map_err(|e| Usage(e.to_string()).into())
}

fn parse_assign(text: &str) -> Result<Assignment> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Usage(format!("expected var=value, got {kv:?}")))?;
            let v: u32 = v.trim().parse().map_err(|_| Usage(format!("bad value in {kv:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn print_bool(value: bool, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::json!({ "result": value }));
    } else {
        println!("{value}");
    }
    if value {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { formula, word, alphabet, assign, json } => {
            let r = registry();
            let alphabet = alphabet_of(&alphabet)?;
            let f = parse_formula(&formula, &r).map_err(|e| Usage(e.to_string()))?;
            let s = WordStructure::parse(&alphabet, &word).map_err(|e| Usage(e.to_string()))?;
            let alpha = parse_assign(&assign)?;
            let value = eval(&f, &s, &alpha, &r).map_err(|e| Usage(e.to_string()))?;
            Ok(print_bool(value, json))
        }
        Command::Member { lang, word, json } => {
            let l = NamedLanguage::from_name(&lang).map_err(|e| Usage(e.to_string()))?;
            let value = l.contains_str(&word).map_err(|e| Usage(e.to_string()))?;
            Ok(print_bool(value, json))
        }
        Command::Relation(args) => relation(args),
        Command::Stratified { periods, json } => {
            let periods: Vec<Vec<u64>> =
                serde_json::from_str(&periods).map_err(|e| Usage(format!("periods: {e}")))?;
            if periods.windows(2).any(|p| p[0].len() != p[1].len()) {
                return usage("periods must share one arity");
            }
            Ok(print_bool(is_stratified(&periods), json))
        }
        Command::Verify(args) => run_verify(args),
        Command::Encode { tuple, length } => {
            let t: Vec<u32> = tuple
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Usage(format!("bad position {x:?}"))))
                .collect::<Result<_, _>>()?;
            let m = length.unwrap_or_else(|| t.iter().copied().max().unwrap_or(0) as usize);
            let s = VnStructure::encode(&t, m).map_err(|e| Usage(e.to_string()))?;
            println!("{}", render_word(s.word()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode { word, n } => {
            let n = match n {
                Some(n) => n,
                None => {
                    let masks = parse_word(&word, MAX_VARS).map_err(|e| Usage(e.to_string()))?;
                    let all = masks.iter().fold(0, |acc, &m| acc | m);
                    (u32::BITS - all.leading_zeros()) as usize
                }
            };
            let s = VnStructure::parse(&word, n).map_err(|e| Usage(e.to_string()))?;
            let t: Vec<String> = s.tuple().iter().map(u32::to_string).collect();
            println!("{}", t.join(","));
            Ok(ExitCode::SUCCESS)
        }
        Command::Machine { name } => {
            let m = match name.as_str() {
                "addition-dpda" => Machine::Dpda(addition_dpda()),
                "addition-dpda-gap-push" => Machine::Dpda(addition_dpda_gap_push()),
                "npda-A" => Machine::Npda(npda_for_a()),
                "npda-unequal" => Machine::Npda(npda_unequal_blocks()),
                "regular" => Machine::Dfa(regular_components()),
                other => match (other.get(..3), other.get(3..).and_then(|k| k.parse::<usize>().ok())) {
                    (Some("psi"), Some(k)) if (1..=MAX_VARS).contains(&k) => Machine::Transducer(psi_transducer(k)),
                    (Some("chi"), Some(k)) if (1..=MAX_VARS).contains(&k) => Machine::Transducer(chi_transducer(k)),
                    _ => return usage(format!("unknown machine {other:?}")),
                },
            };
            print!("{}", m.to_text());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn relation(args: RelationArgs) -> Result<ExitCode> {
    if args.arity == 0 || args.bound == 0 {
        return usage("arity and bound must be positive");
    }
    let tuples: Vec<Vec<u32>> = match (&args.lang, &args.formula) {
        (Some(lang), _) => {
            let l = NamedLanguage::from_name(lang).map_err(|e| Usage(e.to_string()))?;
            if gamma_alphabet(args.arity).ok().as_ref() != Some(&l.alphabet()) {
                return usage(format!("{lang} is not a language over Γ_{}", args.arity));
            }
            let mut out = Vec::new();
            let mut t = vec![1u32; args.arity];
            loop {
                let c = *t.iter().max().unwrap() as usize;
                let holds = (c..=c + args.window as usize).all(|m| {
                    let s = VnStructure::encode(&t, m).expect("positions within length");
                    l.contains(&s.word().iter().map(|&x| x as usize).collect::<Vec<_>>())
                });
                if holds {
                    out.push(t.clone());
                }
                match (0..args.arity).rev().find(|&i| t[i] < args.bound) {
                    Some(i) => {
                        t[i] += 1;
                        t[i + 1..].iter_mut().for_each(|x| *x = 1);
                    }
                    None => break out,
                }
            }
        }
        (None, Some(text)) => {
            let r = registry();
            let f = parse_formula(text, &r).map_err(|e| Usage(e.to_string()))?;
            let vars: Vec<String> = match &args.vars {
                Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
                None => f.free_vars().into_iter().collect(),
            };
            if vars.len() != args.arity {
                return usage(format!("formula has variables {vars:?}, expected arity {}", args.arity));
            }
            let rel = relation_of(&f, &vars, args.bound, args.window, &r).map_err(|e| Usage(e.to_string()))?;
            rel.tuples.into_iter().collect()
        }
        (None, None) => return usage("one of --lang or --formula is required"),
    };
    if args.json {
        println!("{}", serde_json::to_string(&tuples)?);
    } else {
        for t in &tuples {
            let t: Vec<String> = t.iter().map(u32::to_string).collect();
            println!("({})", t.join(","));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    let given: BTreeMap<String, u64> = [
        ("max_n", args.max_n),
        ("max_len", args.max_len),
        ("max_c", args.max_c),
        ("window", args.window),
        ("sets", args.sets),
        ("bound", args.bound),
        ("seed", args.seed),
        ("max_arity", args.max_arity),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
    .collect();
    let names: Vec<&str> = if args.suite == "all" {
        SUITES.iter().map(|s| s.name).collect()
    } else {
        vec![args.suite.as_str()]
    };
    let mut all_pass = true;
    for name in names {
        let spec = verify::suite(name).map_err(|e| Usage(e.to_string()))?;
        // with "all", flags a suite does not take are ignored
        let params: BTreeMap<String, u64> = if args.suite == "all" {
            given.iter().filter(|(k, _)| spec.params.iter().any(|p| p.name == k.as_str())).map(|(k, v)| (k.clone(), *v)).collect()
        } else {
            given.clone()
        };
        let report = verify::run_suite(name, &params).map_err(|e| Usage(e.to_string()))?;
        all_pass &= report.pass;
        if args.json {
            println!("{}", report.to_json());
        } else {
            println!(
                "{} {}: {} cases, {} failures, {} ms",
                if report.pass { "PASS" } else { "FAIL" },
                report.suite,
                report.cases,
                report.total_failures,
                report.millis
            );
            for f in &report.failures {
                println!("  {} expected {} got {}", f.input, f.expected, f.actual);
            }
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

