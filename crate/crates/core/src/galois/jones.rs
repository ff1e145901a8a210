//! Finite verification that `x^2 + t` is geometrically surjective at every
//! odd prime.
//!
//! If `rho_p` fails to be surjective at level `D`, some subset product
//! `P_I = prod_{i in I} c_i` becomes a square over `F_p-bar(t)`. Over `Q` the
//! squarefree part `d_I` of `P_I` is nonconstant, so its reduction can only
//! become a square when two roots collide, that is when `p | disc(d_I)`.
//! Writing the Yun blocks of `c_1..c_D` in a coprime base `b_j`,
//! `disc(d_I) = prod disc(b_j) * prod Res(b_j, b_k)^2` over the `b_j` of odd
//! exponent, so each component is computed and factored once.
//!
//! Components whose factorization stalls leave a cofactor `N`; instead of
//! guessing, the primes of `N` making `P_I` a square are exactly those
//! dividing `gcd(N, obstruction(P_I))`, computed modulo `N`. A trivial gcd
//! certifies the whole cofactor at once.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stoll::{stoll_rank_cached, StollMode};
use crate::arith::odd_primes_up_to;
use crate::error::{Error, Result};
use crate::fields::FieldDesc;
use crate::intfactor::factor_integer;
use crate::orbit::{OrbitCache, QuadMap};
use crate::polyalg::{coprime_base, crt_resultant, IntPoly, Poly};

/// Primes below this are reduced and tested directly.
const WORD_PRIME: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonesOptions {
    pub depth: usize,
    /// Pollard rho iteration budget per integer.
    pub factor_effort: u64,
    /// Odd primes up to this get the complementary Stoll scan.
    pub scan_cap: u64,
    /// Directory for resumable per-component and per-subset results.
    pub checkpoint: Option<PathBuf>,
}

impl JonesOptions {
    pub fn new(depth: usize) -> Self {
        JonesOptions {
            depth,
            factor_effort: 20_000,
            scan_cap: 0,
            checkpoint: None,
        }
    }
}

/// `disc(b_j)` or `Res(b_j, b_k)` with its odd prime divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub bits: u64,
    pub odd_primes: Vec<String>,
    /// Parts the factoring budget could not split (decimal).
    pub unfactored: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotASquare,
    IsASquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub prime: String,
    pub verdict: Verdict,
    /// `square test mod p`, `odd degree`, or `obstruction gcd`.
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofactorCheck {
    pub component: String,
    pub digits: usize,
    /// No prime divisor of the cofactor makes `P_I` a square.
    pub certified: bool,
    /// Nontrivial divisors exposed by the gcd, if any.
    pub exposed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiscStatus {
    Computed { odd_primes: Vec<String> },
    PartialFactorization { odd_primes: Vec<String>, unfactored: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub subset: Vec<usize>,
    pub deg_p: usize,
    pub deg_d: usize,
    /// Components whose product (with squares) is `disc(d_I)`.
    pub components: Vec<String>,
    pub disc_status: DiscStatus,
    pub verdicts: Vec<PrimeVerdict>,
    pub cofactors: Vec<CofactorCheck>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficientPrime {
    pub prime: u64,
    pub surjective_up_to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StollScan {
    pub cap: u64,
    pub primes_scanned: usize,
    pub deficient: Vec<DeficientPrime>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JonesReport {
    pub map: String,
    pub depth: usize,
    pub factor_effort: u64,
    /// Coprime base of the Yun blocks of `c_1..c_depth` (text or degree).
    pub base: Vec<String>,
    pub components: Vec<Component>,
    pub subsets: Vec<SubsetReport>,
    pub candidate_primes: Vec<String>,
    pub bad_primes_found: Vec<String>,
    pub scan: StollScan,
    pub complete: bool,
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Option<T> {
    serde_json::from_slice(&fs::read(path).ok()?).ok()
}

fn store<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(v).map_err(|e| Error::Io(e.to_string()))?).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Cached computation keyed by a checkpoint file name.
fn checkpointed<T, F>(dir: Option<&Path>, name: &str, f: F) -> Result<T>
where
    T: Serialize + for<'de> Deserialize<'de>,
    F: FnOnce() -> Result<T>,
{
    let Some(dir) = dir else { return f() };
    let path = dir.join(name);
    if let Some(v) = load(&path) {
        return Ok(v);
    }
    let v = f()?;
    store(&path, &v)?;
    Ok(v)
}

fn discriminant(b: &IntPoly) -> BigInt {
    let d = b.height();
    if d <= 1 {
        return BigInt::one();
    }
    let r = crt_resultant(b, &b.derivative()) / b.lc();
    if (d * (d - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

fn component(id: String, v: BigInt, effort: u64) -> Component {
    let f = factor_integer(v.magnitude(), effort);
    Component {
        id,
        bits: v.bits(),
        odd_primes: f
            .primes
            .iter()
            .filter(|(p, _)| *p != BigUint::from(2u8))
            .map(|(p, _)| p.to_string())
            .collect(),
        unfactored: f.cofactors.iter().map(|c| c.to_string()).collect(),
    }
}

/// Tries to settle every prime divisor of `n` at once.
fn certify_cofactor(p_i: &IntPoly, n: &BigInt, component: &str) -> CofactorCheck {
    let digits = n.to_string().len();
    let fail = |exposed| CofactorCheck {
        component: component.to_string(),
        digits,
        certified: false,
        exposed,
    };
    if p_i.height() % 2 == 1 && (p_i.lc() * BigInt::from(2)).gcd(n).is_one() {
        return CofactorCheck {
            component: component.to_string(),
            digits,
            certified: true,
            exposed: Vec::new(),
        };
    }
    match p_i.square_obstruction_mod(n) {
        Some(g) if g.is_one() => CofactorCheck {
            component: component.to_string(),
            digits,
            certified: true,
            exposed: Vec::new(),
        },
        Some(g) => fail(vec![g.to_string()]),
        None => fail(Vec::new()),
    }
}

fn verdict_for(p_i: &IntPoly, reduced: impl Fn(u64) -> Poly, p: &BigUint) -> Option<PrimeVerdict> {
    let pint = BigInt::from(p.clone());
    if let Some(small) = p.to_u64().filter(|&q| q < WORD_PRIME) {
        let sq = reduced(small).is_square_in_closure().ok()?;
        return Some(PrimeVerdict {
            prime: p.to_string(),
            verdict: if sq { Verdict::IsASquare } else { Verdict::NotASquare },
            method: "square test mod p".into(),
        });
    }
    if p_i.height() % 2 == 1 && !(p_i.lc() % &pint).is_zero() {
        return Some(PrimeVerdict {
            prime: p.to_string(),
            verdict: Verdict::NotASquare,
            method: "odd degree".into(),
        });
    }
    let g = p_i.square_obstruction_mod(&pint)?;
    Some(PrimeVerdict {
        prime: p.to_string(),
        verdict: if g.is_one() { Verdict::NotASquare } else { Verdict::IsASquare },
        method: "obstruction gcd".into(),
    })
}

/// Runs the verification for `x^2 + t` over `Z[t]` at the given depth.
pub fn jones_verify(opts: &JonesOptions) -> Result<JonesReport> {
    let depth = opts.depth;
    if depth == 0 || depth > 20 {
        return Err(Error::Precondition("depth must be between 1 and 20".into()));
    }
    let dir = opts.checkpoint.as_deref();
    if let Some(d) = dir {
        fs::create_dir_all(d).map_err(io)?;
    }
    let map = QuadMap::<IntPoly>::parse("x^2+t")?;
    let cache = OrbitCache::new(map.clone());
    let cs: Vec<IntPoly> = (1..=depth).map(|i| cache.c(i).as_ref().clone()).collect();

    let mut blocks = Vec::new();
    let mut owner = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        for (g, m) in c.squarefree_decomposition()?.factors {
            blocks.push(g);
            owner.push((i, m));
        }
    }
    let (base, exps) = coprime_base(&blocks);
    // exponent of base element j in c_i
    let mut e = vec![vec![0u32; base.len()]; depth];
    for (k, row) in exps.iter().enumerate() {
        let (i, m) = owner[k];
        for (j, x) in row.iter().enumerate() {
            e[i][j] += x * m;
        }
    }

    let mut jobs: Vec<(String, Box<dyn Fn() -> BigInt + Send + Sync>)> = Vec::new();
    for (j, b) in base.iter().enumerate() {
        let b = b.clone();
        jobs.push((format!("disc-{j}"), Box::new(move || discriminant(&b))));
    }
    for j in 0..base.len() {
        for k in j + 1..base.len() {
            let (a, b) = (base[j].clone(), base[k].clone());
            jobs.push((format!("res-{j}-{k}"), Box::new(move || crt_resultant(&a, &b))));
        }
    }
    let components: Vec<Component> = jobs
        .par_iter()
        .map(|(id, f)| {
            checkpointed(dir, &format!("d{depth}-{id}.json"), || {
                Ok(component(id.clone(), f(), opts.factor_effort))
            })
        })
        .collect::<Result<_>>()?;
    let by_id: BTreeMap<&str, &Component> =
        components.iter().map(|c| (c.id.as_str(), c)).collect();

    let masks: Vec<u64> = (1..1u64 << depth).collect();
    let subsets: Vec<SubsetReport> = masks
        .par_iter()
        .map(|&mask| {
            checkpointed(dir, &format!("d{depth}-subset-{mask:x}.json"), || {
                run_subset(mask, &cs, &base, &e, &by_id)
            })
        })
        .collect::<Result<_>>()?;

    let mut candidates = BTreeSet::new();
    let mut bad = BTreeSet::new();
    for s in &subsets {
        for v in &s.verdicts {
            candidates.insert(v.prime.parse::<BigUint>().expect("decimal"));
            if v.verdict == Verdict::IsASquare {
                bad.insert(v.prime.parse::<BigUint>().expect("decimal"));
            }
        }
    }
    let scan = stoll_scan(depth, opts.scan_cap)?;
    Ok(JonesReport {
        map: map.to_string(),
        depth,
        factor_effort: opts.factor_effort,
        base: base
            .iter()
            .map(|b| {
                if b.height() <= 64 {
                    b.to_string()
                } else {
                    format!("[degree {}]", b.height())
                }
            })
            .collect(),
        complete: subsets.iter().all(|s| s.complete),
        components,
        subsets,
        candidate_primes: candidates.iter().map(|p| p.to_string()).collect(),
        bad_primes_found: bad.iter().map(|p| p.to_string()).collect(),
        scan,
    })
}

fn run_subset(
    mask: u64,
    cs: &[IntPoly],
    base: &[IntPoly],
    e: &[Vec<u32>],
    by_id: &BTreeMap<&str, &Component>,
) -> Result<SubsetReport> {
    let subset: Vec<usize> = (0..cs.len()).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    let p_i = subset
        .iter()
        .fold(IntPoly::one(), |acc, &i| acc.mul(&cs[i - 1]));
    let odd: Vec<usize> = (0..base.len())
        .filter(|&j| subset.iter().map(|&i| e[i - 1][j]).sum::<u32>() % 2 == 1)
        .collect();
    let deg_d = odd.iter().map(|&j| base[j].height()).sum();
    let mut ids = Vec::new();
    for (x, &j) in odd.iter().enumerate() {
        ids.push(format!("disc-{j}"));
        for &k in &odd[x + 1..] {
            ids.push(format!("res-{j}-{k}"));
        }
    }
    let mut primes = BTreeSet::new();
    let mut unfactored = Vec::new();
    for id in &ids {
        let c = by_id[id.as_str()];
        for p in &c.odd_primes {
            primes.insert(p.parse::<BigUint>().expect("decimal"));
        }
        for (k, _) in c.unfactored.iter().enumerate() {
            unfactored.push(format!("{id}#{k}"));
        }
    }
    let reduced = |p: u64| {
        let f = FieldDesc::prime(p).expect("odd prime");
        subset
            .iter()
            .fold(Poly::one(f), |acc, &i| acc.mul(&cs[i - 1].reduce(f)))
    };
    let mut verdicts = Vec::new();
    let mut complete = true;
    for p in &primes {
        match verdict_for(&p_i, reduced, p) {
            Some(v) => verdicts.push(v),
            None => complete = false,
        }
    }
    let mut cofactors = Vec::new();
    for id in &ids {
        let c = by_id[id.as_str()];
        for n in &c.unfactored {
            let n: BigInt = n.parse().expect("decimal");
            let check = certify_cofactor(&p_i, &n, id);
            complete &= check.certified;
            cofactors.push(check);
        }
    }
    let odd_primes: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
    Ok(SubsetReport {
        subset,
        deg_p: p_i.height(),
        deg_d,
        components: ids,
        disc_status: if unfactored.is_empty() {
            DiscStatus::Computed { odd_primes }
        } else {
            DiscStatus::PartialFactorization {
                odd_primes,
                unfactored,
            }
        },
        verdicts,
        cofactors,
        complete,
    })
}

/// Geometric Stoll rank of `x^2 + t mod p` for every odd `p <= cap`.
pub fn stoll_scan(depth: usize, cap: u64) -> Result<StollScan> {
    let primes = odd_primes_up_to(cap);
    let results: Vec<(u64, usize)> = primes
        .par_iter()
        .map(|&p| {
            let map = QuadMap::<Poly>::parse(FieldDesc::prime(p)?, "x^2+t")?;
            let r = stoll_rank_cached(&OrbitCache::new(map), depth, StollMode::Geometric)?;
            Ok((p, r.surjective_up_to))
        })
        .collect::<Result<_>>()?;
    Ok(StollScan {
        cap,
        primes_scanned: primes.len(),
        deficient: results
            .into_iter()
            .filter(|&(_, s)| s < depth)
            .map(|(prime, surjective_up_to)| DeficientPrime {
                prime,
                surjective_up_to,
            })
            .collect(),
    })
}
