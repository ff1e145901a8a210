//! `arbordyn`: command-line front end.
//!
//! Without `--json` the bare result payload is printed (for `orbit`, just the
//! list of `c_n`); with `--json` the full versioned envelope. Exit codes:
//! 0 success, 1 usage or parse error, 2 precondition violation, 3 the
//! computation finished but could not certify everything.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use arbordyn::fields::FieldDesc;
use arbordyn::galois::{
    jones_verify, mason_random_batch, mason_stothers_check, stoll_rank, JonesOptions,
    MasonReport, StollMode,
};
use arbordyn::insep::insep_degree;
use arbordyn::orbit::{AnyMap, OrbitCache, QuadMap};
use arbordyn::polyalg::{IntPoly, Poly};
use arbordyn::report::{envelope, schema_validate};
use arbordyn::zsig::{
    effective_bound, effective_bound_char0, global_bound, soundness_scan, zsigmondy_set,
    EffectiveBound,
};
use arbordyn::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arbordyn", version, about = "Iterated quadratic maps over F_p(t) and Z[t]")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print the full versioned JSON envelope.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Geometric,
    Arithmetic,
}

#[derive(Subcommand)]
enum Verb {
    /// The adjusted orbit c_1..c_n and the critical orbit phi^(n)(0).
    Orbit {
        map: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Dynamical inseparability degree (needs --mod).
    Insep {
        map: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Squarefree Zsigmondy set up to --depth.
    Zsig {
        map: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Bound constants A, B and the exclusion solver.
    Bound {
        map: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Uniform bound over Q with exceptional primes.
    GlobalBound {
        map: String,
        #[arg(long, default_value_t = 20_000)]
        factor_effort: u64,
        /// Also scan reductions at odd primes up to this bound.
        #[arg(long)]
        prime_cap: Option<u64>,
        /// Depth of the scan (default: the bound plus 3).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Stoll's square-class rank.
    Stoll {
        map: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Mode::Geometric)]
        mode: Mode,
    },
    /// Discriminant-prime verification for x^2+t.
    Jones {
        #[arg(long, default_value_t = 7)]
        depth: usize,
        #[arg(long, default_value_t = 20_000)]
        factor_effort: u64,
        /// Complementary Stoll scan over odd primes up to this bound.
        #[arg(long, default_value_t = 0)]
        prime_cap: u64,
        /// Directory for resumable intermediate results.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Polynomial abc inequality for a + b + c = 0, or a random batch.
    MsCheck {
        a: Option<String>,
        b: Option<String>,
        #[arg(long = "mod")]
        modulus: u64,
        /// Random triples to check when a and b are omitted.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Validate a JSON report against the shipped schema.
    Validate { file: PathBuf },
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// Output already written; exit with this code.
    Done(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io(_) => Failure::Usage(e.to_string()),
            other => Failure::Lib(other),
        }
    }
}

struct Output {
    command: &'static str,
    input: Value,
    result: Value,
    /// Printed without --json; defaults to `result`.
    text: Option<Value>,
    /// Exit code once the output is written.
    code: u8,
}

impl Output {
    fn new(command: &'static str, input: Value, result: Value) -> Self {
        Output {
            command,
            input,
            result,
            text: None,
            code: 0,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn bound_json(eb: &EffectiveBound) -> Value {
    let mut v = to_value(eb.constants.as_ref().expect("map bounds carry constants"));
    let obj = v.as_object_mut().expect("object");
    obj.insert("n_bound".into(), json!(eb.n_bound));
    obj.insert("ledger".into(), to_value(&eb.ledger));
    obj.insert("inequality".into(), json!(eb.inequality));
    v
}

fn need_field(map: &AnyMap, verb: &str) -> Result<QuadMap<Poly>, Failure> {
    match map {
        AnyMap::Field(m) => Ok(m.clone()),
        AnyMap::Int(_) => Err(Failure::Usage(format!("{verb} needs --mod p"))),
    }
}

fn run(verb: Verb, seed: u64) -> Result<Output, Failure> {
    Ok(match verb {
        Verb::Orbit { map, modulus, depth } => {
            let m = AnyMap::parse(&map, modulus)?;
            let orbit = match &m {
                AnyMap::Int(q) => OrbitCache::new(q.clone()).to_json(depth),
                AnyMap::Field(q) => OrbitCache::new(q.clone()).to_json(depth),
            };
            let mut result = json!({ "map": m.to_string(), "ring": m.ring_label(), "depth": depth });
            result["c"] = orbit["c"].clone();
            result["crit0"] = orbit["crit0"].clone();
            let mut out = Output::new(
                "orbit",
                json!({ "map": map, "modulus": modulus, "depth": depth }),
                result,
            );
            out.text = Some(orbit["c"].clone());
            out
        }
        Verb::Insep { map, modulus } => {
            let m = need_field(&AnyMap::parse(&map, modulus)?, "insep")?;
            Output::new(
                "insep",
                json!({ "map": map, "modulus": modulus }),
                to_value(&insep_degree(&m)?),
            )
        }
        Verb::Zsig { map, modulus, depth } => {
            let m = AnyMap::parse(&map, modulus)?;
            let r = match &m {
                AnyMap::Int(q) => zsigmondy_set(q, depth)?,
                AnyMap::Field(q) => zsigmondy_set(q, depth)?,
            };
            Output::new(
                "zsig",
                json!({ "map": map, "modulus": modulus, "depth": depth }),
                to_value(&r),
            )
        }
        Verb::Bound { map, modulus } => {
            let eb = match AnyMap::parse(&map, modulus)? {
                AnyMap::Int(q) => effective_bound_char0(&q)?,
                AnyMap::Field(q) => effective_bound(&q)?,
            };
            Output::new("bound", json!({ "map": map, "modulus": modulus }), bound_json(&eb))
        }
        Verb::GlobalBound {
            map,
            factor_effort,
            prime_cap,
            depth,
        } => {
            let m = QuadMap::<IntPoly>::parse(&map)?;
            let g = global_bound(&m, factor_effort)?;
            let mut result = to_value(&g);
            let mut complete = g.complete;
            if let Some(cap) = prime_cap {
                let d = depth.unwrap_or(g.n_phi as usize + 3);
                let scan = soundness_scan(&m, g.n_phi, cap, d)?;
                complete &= scan.violations.is_empty();
                result["soundness"] = to_value(&scan);
            }
            let mut out = Output::new(
                "global-bound",
                json!({
                    "map": map,
                    "factor_effort": factor_effort,
                    "prime_cap": prime_cap,
                    "depth": depth,
                }),
                result,
            );
            out.code = if complete { 0 } else { 3 };
            out
        }
        Verb::Stoll {
            map,
            modulus,
            depth,
            mode,
        } => {
            let mode = match mode {
                Mode::Geometric => StollMode::Geometric,
                Mode::Arithmetic => StollMode::Arithmetic,
            };
            let r = match AnyMap::parse(&map, modulus)? {
                AnyMap::Int(q) => stoll_rank(&q, depth, mode)?,
                AnyMap::Field(q) => stoll_rank(&q, depth, mode)?,
            };
            Output::new(
                "stoll",
                json!({ "map": map, "modulus": modulus, "depth": depth, "mode": mode }),
                to_value(&r),
            )
        }
        Verb::Jones {
            depth,
            factor_effort,
            prime_cap,
            checkpoint,
        } => {
            let opts = JonesOptions {
                depth,
                factor_effort,
                scan_cap: prime_cap,
                checkpoint,
            };
            let r = jones_verify(&opts)?;
            let mut out = Output::new(
                "jones",
                json!({ "depth": depth, "factor_effort": factor_effort, "prime_cap": prime_cap }),
                to_value(&r),
            );
            let certified = r.complete && r.bad_primes_found.is_empty() && r.scan.deficient.is_empty();
            out.code = if certified { 0 } else { 3 };
            out
        }
        Verb::MsCheck {
            a,
            b,
            modulus,
            samples,
        } => {
            let f = FieldDesc::prime(modulus)?;
            let (checks, input): (Vec<MasonReport>, Value) = match (a, b) {
                (Some(a), Some(b)) => {
                    let r = mason_stothers_check(&Poly::parse(f, &a)?, &Poly::parse(f, &b)?)?;
                    (vec![r], json!({ "a": a, "b": b, "modulus": modulus }))
                }
                (None, None) => (
                    mason_random_batch(modulus, samples, seed)?,
                    json!({ "modulus": modulus, "samples": samples, "seed": seed }),
                ),
                _ => return Err(Failure::Usage("give both a and b, or neither".into())),
            };
            let violated = checks.iter().any(|c| c.precondition.is_some());
            let all_hold = checks.iter().all(|c| c.holds);
            let mut out = Output::new(
                "ms-check",
                input,
                json!({ "checks": to_value(&checks), "all_hold": all_hold }),
            );
            out.code = if violated {
                2
            } else if all_hold {
                0
            } else {
                3
            };
            out
        }
        Verb::Validate { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let check = schema_validate(&v);
            let result = json!({ "valid": check.valid, "reasons": check.reasons });
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                serde_json::to_string_pretty(&result).expect("json")
            );
            return Err(Failure::Done(if check.valid { 0 } else { 2 }));
        }
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::DomainMismatch => "domain_mismatch",
        Error::NotASquare => "not_a_square",
        Error::NotAPthPower => "not_a_pth_power",
        Error::Undefined(_) => "undefined",
        Error::NotAnOddPrime(_) => "not_an_odd_prime",
        Error::FieldTooLarge(_) => "field_too_large",
        Error::Parse { .. } => "parse",
        Error::IllDefined(_) => "ill_defined",
        Error::DegenerateSquare => "degenerate_square",
        Error::IteratesInseparable(_) => "iterates_inseparable",
        Error::CapExceeded(_) => "cap_exceeded",
        Error::Precondition(_) => "precondition",
        Error::Io(_) => "io",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let common = cli.common;
    let seed = common.seed;
    let verb = cli.verb;
    let outcome = match common.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(verb, seed)),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => run(verb, seed),
    };
    let out = match outcome {
        Ok(o) => o,
        Err(Failure::Done(code)) => return ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Lib(e)) => {
            eprintln!(
                "{}",
                json!({ "error": error_kind(&e), "message": e.to_string() })
            );
            return ExitCode::from(2);
        }
    };
    let text = if common.json {
        let env = envelope(out.command, out.input, out.result);
        serde_json::to_string_pretty(&env).expect("json")
    } else {
        serde_json::to_string(out.text.as_ref().unwrap_or(&out.result)).expect("json")
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    ExitCode::from(out.code)
}
