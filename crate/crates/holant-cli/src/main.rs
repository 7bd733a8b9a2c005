//! `holant` — classify, evaluate, transform, and inspect Holant signature
//! grids from the command line.
//!
//! Reports are line-oriented `key: value` text with exact values in the
//! cyclotomic literal grammar, so runs diff cleanly.
//!
//! Exit codes: 0 success (including a tractable verdict), 1 usage or parse
//! error, 2 hard verdict or selfcheck failure, 3 evaluation refused (edge
//! bound exceeded, or the requested method does not apply to the grid).
//! The brute-force edge bound can be overridden with the HOLANT_BRUTE_BOUND
//! environment variable or `--bound`.

mod formats;
mod selfcheck;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use holant_core::classify::{classify_set, verify_verdict, TractableCase, Verdict};
use holant_core::cyclo::{parse_cyclo, Cyclo};
use holant_core::grid::{
    approx_sequence, chain_grid, compressed, long_edge_grid, tetrahedron_closed_form,
    tetrahedron_grid, SigGrid, DEFAULT_BRUTE_BOUND,
};
use holant_core::sigalg::{Sign, SymSig};
use holant_core::tracteval::{
    eval_affine, eval_arity2, eval_auto, eval_product, eval_vanishing, TractError,
};
use holant_core::xform::{apply_co, apply_contra};

use formats::{parse_grid_file, parse_mat, parse_sig_file, print_mat, print_sig, print_sig_file};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_HARD: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "holant", version, about = "Holant signature-grid toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a set of signatures as tractable or hard.
    Classify {
        /// Signature file: `sig <name> [f0, f1, ...]` lines.
        sigfile: PathBuf,
    },
    /// Evaluate the Holant value of a closed grid.
    Eval {
        /// Grid file: `sig`/`vertex`/`edge` lines.
        gridfile: PathBuf,
        /// auto | brute | arity2 | product | affine | vanishing
        #[arg(long, default_value = "auto")]
        method: String,
        /// Brute-force edge bound (also settable via HOLANT_BRUTE_BOUND).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Apply a 2×2 holographic transformation to every signature in a file.
    Transform {
        sigfile: PathBuf,
        /// Matrix: a stock name (identity, x, d, h2, z, zinv, alpha, omega)
        /// or a `[[a, b], [c, d]]` literal.
        matrix: String,
        /// contra (signatures transform as T^⊗n f) or co (f transforms as f T^⊗n).
        #[arg(long, default_value = "contra")]
        side: String,
    },
    /// Build a named gadget and compare it with its closed form.
    Gadget {
        /// tetrahedron | chain | long-edge | approx
        name: String,
        /// Parameters as key=value (e.g. `t=1`, `x=1 s=3`, `k=2`).
        params: Vec<String>,
    },
    /// Run the deterministic invariant suite.
    Selfcheck {
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::from(EXIT_OK);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let code = match cli.cmd {
        Cmd::Classify { sigfile } => cmd_classify(&sigfile),
        Cmd::Eval { gridfile, method, bound } => cmd_eval(&gridfile, &method, bound),
        Cmd::Transform { sigfile, matrix, side } => cmd_transform(&sigfile, &matrix, &side),
        Cmd::Gadget { name, params } => cmd_gadget(&name, &params),
        Cmd::Selfcheck { seed } => {
            if selfcheck::run(seed) == 0 {
                EXIT_OK
            } else {
                EXIT_HARD
            }
        }
    };
    ExitCode::from(code)
}

fn usage_err(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn read_file(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| usage_err(format!("{}: {e}", path.display())))
}

fn case_name(case: &TractableCase) -> &'static str {
    match case {
        TractableCase::ArityLe2 => "all-arity-at-most-2",
        TractableCase::ATransformable => "affine-transformable",
        TractableCase::PTransformable => "product-transformable",
        TractableCase::VanishingPlusBinary => "vanishing-plus-binary",
        TractableCase::R2Fibonacci => "vanishing-r2",
        TractableCase::Vanishing => "vanishing",
        TractableCase::Degenerate => "degenerate",
    }
}

fn cmd_classify(sigfile: &PathBuf) -> u8 {
    let text = match read_file(sigfile) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let named = match parse_sig_file(&text) {
        Ok(s) => s,
        Err(e) => return usage_err(e),
    };
    if named.is_empty() {
        return usage_err("the signature file defines no signatures");
    }
    let sigs: Vec<SymSig> = named.iter().map(|(_, f)| f.clone()).collect();
    println!("signatures: {}", sigs.len());
    let verdict = classify_set(&sigs);
    match &verdict {
        Verdict::Tractable { case, sigma, transform, tags, confidence } => {
            println!("verdict: tractable");
            println!("case: {}", case_name(case));
            if let Some(s) = sigma {
                println!("sigma: {}", if *s == Sign::Plus { "+" } else { "-" });
            }
            if let Some(t) = transform {
                println!("transform: {}", print_mat(t));
            }
            for tag in tags {
                println!("tag: {tag}");
            }
            println!("confidence: {}", confidence_name(confidence));
            let ok = verify_verdict(&sigs, &verdict);
            println!("verified: {ok}");
            if ok {
                EXIT_OK
            } else {
                EXIT_HARD
            }
        }
        Verdict::Hard { rules, confidence } => {
            println!("verdict: hard");
            for step in rules {
                match step.sig {
                    Some(i) => println!("rule: {} sig={}", step.rule, named[i].0),
                    None => println!("rule: {}", step.rule),
                }
            }
            println!("confidence: {}", confidence_name(confidence));
            let eo = SymSig::from_ints(&[3, 0, 1, 0, 3]);
            if sigs.iter().any(|f| *f == eo) {
                println!(
                    "note: Holant([3,0,1,0,3]) counts Eulerian orientations of 4-regular graphs \
                     (up to 2^n), so this instance is as hard as that problem"
                );
            }
            EXIT_HARD
        }
    }
}

fn confidence_name(c: &holant_core::classify::Confidence) -> &'static str {
    match c {
        holant_core::classify::Confidence::Exact => "exact",
        holant_core::classify::Confidence::ProofFollowing => "proof-following",
    }
}

fn brute_bound(flag: Option<usize>) -> Result<usize, u8> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("HOLANT_BRUTE_BOUND") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| usage_err(format!("HOLANT_BRUTE_BOUND is not a number: `{v}`"))),
        Err(_) => Ok(DEFAULT_BRUTE_BOUND),
    }
}

fn cmd_eval(gridfile: &PathBuf, method: &str, bound: Option<usize>) -> u8 {
    let text = match read_file(gridfile) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let named = match parse_grid_file(&text) {
        Ok(g) => g,
        Err(e) => return usage_err(e),
    };
    let bound = match brute_bound(bound) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let g = &named.grid;
    println!("vertices: {}", g.num_vertices());
    println!("edges: {}", g.edges().len());
    let result: Result<(Cyclo, String), TractError> = match method {
        "auto" => eval_auto(g, bound),
        "brute" => g
            .holant_brute_bounded(bound)
            .map(|v| (v, String::from("brute")))
            .map_err(TractError::from),
        "arity2" => eval_arity2(g).map(|v| (v, String::from("arity2"))),
        "product" => eval_product(g).map(|v| (v, String::from("product"))),
        "affine" => eval_affine(g).map(|v| (v, String::from("affine"))),
        "vanishing" => eval_vanishing(g, Sign::Plus)
            .or_else(|_| eval_vanishing(g, Sign::Minus))
            .map(|(v, cert)| {
                (v, format!("vanishing(cap={}, edges={})", cert.weight_cap, cert.edges))
            }),
        other => return usage_err(format!("unknown method `{other}`")),
    };
    match result {
        Ok((value, how)) => {
            println!("method: {how}");
            println!("value: {value}");
            let (re, im) = value.to_float();
            println!("float: {re} {im}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("refused: {e}");
            EXIT_REFUSED
        }
    }
}

fn cmd_transform(sigfile: &PathBuf, matrix: &str, side: &str) -> u8 {
    let text = match read_file(sigfile) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let named = match parse_sig_file(&text) {
        Ok(s) => s,
        Err(e) => return usage_err(e),
    };
    let t = match parse_mat(matrix) {
        Ok(t) => t,
        Err(e) => return usage_err(e),
    };
    let transformed: Vec<(String, SymSig)> = named
        .into_iter()
        .map(|(name, f)| {
            let g = match side {
                "co" => apply_co(&f, &t),
                _ => apply_contra(&t, &f),
            };
            (name, g)
        })
        .collect();
    if !matches!(side, "co" | "contra") {
        return usage_err(format!("unknown side `{side}` (use contra or co)"));
    }
    print!("{}", print_sig_file(&transformed));
    EXIT_OK
}

/// Parse trailing `key=value` gadget parameters.
fn param_map(params: &[String]) -> Result<HashMap<String, String>, u8> {
    let mut out = HashMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| usage_err(format!("expected key=value, got `{p}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn cyclo_param(map: &HashMap<String, String>, key: &str, default: Cyclo) -> Result<Cyclo, u8> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => parse_cyclo(v).map_err(|e| usage_err(format!("parameter {key}: {e}"))),
    }
}

fn usize_param(map: &HashMap<String, String>, key: &str, default: usize) -> Result<usize, u8> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| usage_err(format!("parameter {key} is not a number: `{v}`"))),
    }
}

fn gate_signature(grid: &SigGrid) -> Result<SymSig, u8> {
    let (_, sig) = grid
        .fgate_signature(DEFAULT_BRUTE_BOUND)
        .map_err(|e| usage_err(e))?;
    sig.ok_or_else(|| usage_err("gadget signature is not symmetric"))
}

fn report_gate(computed: &SymSig, closed: &SymSig) {
    println!("signature: {}", print_sig(computed));
    println!("closed-form: {}", print_sig(closed));
    println!("match: {}", computed == closed);
}

fn cmd_gadget(name: &str, params: &[String]) -> u8 {
    let map = match param_map(params) {
        Ok(m) => m,
        Err(code) => return code,
    };
    match name {
        "tetrahedron" => {
            let t = match cyclo_param(&map, "t", Cyclo::one()) {
                Ok(v) => v,
                Err(code) => return code,
            };
            println!("gadget: tetrahedron");
            println!("t: {t}");
            let computed = match gate_signature(&tetrahedron_grid(&t)) {
                Ok(s) => s,
                Err(code) => return code,
            };
            report_gate(&computed, &tetrahedron_closed_form(&t));
            match compressed(&computed) {
                Ok(m) => println!("det-compressed: {}", m.det()),
                Err(e) => return usage_err(e),
            }
            EXIT_OK
        }
        "chain" => {
            let x = match cyclo_param(&map, "x", Cyclo::one()) {
                Ok(v) => v,
                Err(code) => return code,
            };
            let s = match usize_param(&map, "s", 1) {
                Ok(v) if v >= 1 => v,
                Ok(_) => return usage_err("chain length s must be at least 1"),
                Err(code) => return code,
            };
            println!("gadget: chain");
            println!("x: {x}");
            println!("s: {s}");
            let computed = match gate_signature(&chain_grid(&x, s)) {
                Ok(sig) => sig,
                Err(code) => return code,
            };
            let closed = SymSig::new(vec![
                &Cyclo::from_int(s as i64) * &x,
                Cyclo::one(),
                Cyclo::zero(),
            ]);
            report_gate(&computed, &closed);
            EXIT_OK
        }
        "long-edge" => {
            let v = match cyclo_param(&map, "v", Cyclo::one()) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let a = match cyclo_param(&map, "a", Cyclo::one()) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let b = match cyclo_param(&map, "b", Cyclo::one()) {
                Ok(c) => c,
                Err(code) => return code,
            };
            println!("gadget: long-edge");
            println!("v: {v}");
            println!("a: {a}");
            println!("b: {b}");
            let computed = match gate_signature(&long_edge_grid(&v, &a, &b)) {
                Ok(sig) => sig,
                Err(code) => return code,
            };
            let closed = SymSig::new(vec![
                &(&a + &(&(&Cyclo::from_int(2) * &b) * &v)) + &(&v * &v),
                &b + &v,
                Cyclo::one(),
            ]);
            report_gate(&computed, &closed);
            EXIT_OK
        }
        "approx" => {
            let k = match usize_param(&map, "k", 1) {
                Ok(v) => v as u32,
                Err(code) => return code,
            };
            println!("gadget: approx");
            println!("k: {k}");
            let (_, ak) = approx_sequence(k);
            let third = holant_core::cyclo::rat(1, 3);
            let closed = &third - &(&third * &holant_core::cyclo::rat(-1, 2).pow(k as i32));
            println!("a: {}", Cyclo::from_rat(ak.clone()));
            println!("closed-form: {}", Cyclo::from_rat(closed.clone()));
            println!("match: {}", ak == closed);
            EXIT_OK
        }
        other => usage_err(format!(
            "unknown gadget `{other}` (tetrahedron, chain, long-edge, approx)"
        )),
    }
}
