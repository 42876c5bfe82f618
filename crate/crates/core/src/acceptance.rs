//! End-to-end checks shared by `iia selftest` and the `acceptance` test
//! target. Each criterion recomputes its evidence from scratch and reports
//! pass or fail with a short detail line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::axioms::{
    check_cs, check_iia, check_wpp, compute_cleric, extract_deferred, find_dictator, is_null, Direction, Witness,
};
use crate::cli::write_enumeration;
use crate::construct::{
    build_named, enumerate_descriptions, EnumerationFilter, NamedKind, DEFAULT_DESCRIPTION_BUDGET,
};
use crate::count::{p, q, r};
use crate::decompose::{build_chain, decompose, reconstruct};
use crate::error::{Error, Result};
use crate::oracle::{brute_force_iia, compare_with_construct, reconstruct_all, SearchMode};
use crate::swf::{decode_profile, encode_profile, ExplicitSwf};
use crate::weak_orders::{enumerate_weak_orders, ordered_bell, pair_count, pairs, AltSet, PairRel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!("{} [{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "ordered Bell counts"),
    (2, "oracle equals construction at (3,1)"),
    (3, "decompose/reconstruct round trips"),
    (4, "reconstructions satisfy IIA"),
    (5, "stream lengths match formulas"),
    (6, "Pareto and sovereignty shapes at (3,2)"),
    (7, "dictatorial non-IIA fixture"),
    (8, "intransitive pairwise fixture"),
    (9, "recursion invariants"),
    (10, "deterministic enumeration output"),
];

fn outcome(id: usize, result: Result<String, String>) -> Outcome {
    let name = CRITERIA[id - 1].1;
    match result {
        Ok(detail) => Outcome { id, name, passed: true, detail },
        Err(detail) => Outcome { id, name, passed: false, detail },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn std_alts(s: usize) -> AltSet {
    AltSet::standard(s).expect("supported size")
}

/// `6 + 6·(q_2 − 2) + (1 + 2v·q_3(v−1))`, written out independently of the
/// general count.
fn q3_closed(v: usize) -> BigUint {
    let q2 = BigUint::from(3u32).pow(3u32.pow(v as u32));
    let tail = if v == 0 { BigUint::from(1u32) } else { BigUint::from(1u32) + BigUint::from(2 * v) * q3_closed(v - 1) };
    BigUint::from(6u32) + BigUint::from(6u32) * (q2 - 2u32) + tail
}

pub fn criterion_1() -> Outcome {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let expected = [1u64, 3, 13, 75, 541, 4683];
        for (s, &want) in (1..=6).zip(&expected) {
            let got = enumerate_weak_orders(&std_alts(s)).map_err(err)?.len() as u64;
            ensure(got == want, || format!("s={s}: enumerated {got}, expected {want}"))?;
            ensure(ordered_bell(s) == BigUint::from(want), || format!("s={s}: ordered_bell disagrees"))?;
        }
        within(start.elapsed(), Duration::from_secs(1), "enumeration")?;
        Ok(format!("1, 3, 13, 75, 541, 4683 in {:?}", start.elapsed()))
    };
    outcome(1, run())
}

pub fn criterion_2() -> Outcome {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let c = compare_with_construct(&std_alts(3), 1).map_err(err)?;
        let formula = q3_closed(1);
        ensure(c.equal(), || format!("sets differ: {c:?}"))?;
        ensure(BigUint::from(c.oracle_count) == formula, || format!("oracle {} vs formula {formula}", c.oracle_count))?;
        ensure(q(3, 1) == formula, || "general count disagrees with the closed form".into())?;
        within(start.elapsed(), Duration::from_secs(10), "comparison")?;
        Ok(format!("{} == {} == q(3,1) in {:?}", c.oracle_count, c.construct_count, start.elapsed()))
    };
    outcome(2, run())
}

const SWEEP: [(usize, usize); 5] = [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1)];

pub fn criterion_3() -> Outcome {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let alts = std_alts(3);
        let oracle = brute_force_iia(&alts, 1, SearchMode::Pruned).map_err(err)?;
        for f in oracle.swfs() {
            let back = decompose(&f).and_then(|d| reconstruct(&d, &alts, 1)).map_err(err)?;
            ensure(back == f, || format!("reconstruct(decompose(f)) != f for {}", f.to_json_string()))?;
        }
        let mut total = 0;
        for (s, v) in SWEEP {
            let alts = std_alts(s);
            let ds: Vec<_> = enumerate_descriptions(s, v, EnumerationFilter::All, DEFAULT_DESCRIPTION_BUDGET)
                .map_err(err)?
                .collect();
            let bad = ds.par_iter().find_any(|d| {
                reconstruct(d, &alts, v).and_then(|f| decompose(&f)).map_or(true, |back| &back != *d)
            });
            ensure(bad.is_none(), || format!("({s},{v}): decompose(reconstruct(d)) != d for {bad:?}"))?;
            total += ds.len();
        }
        within(start.elapsed(), Duration::from_secs(300), "round trips")?;
        Ok(format!("{} functions and {total} descriptions in {:?}", oracle.count(), start.elapsed()))
    };
    outcome(3, run())
}

pub fn criterion_4() -> Outcome {
    let run = || -> Result<String, String> {
        let mut total = 0;
        for (s, v) in SWEEP {
            let fs = reconstruct_all(&std_alts(s), v, EnumerationFilter::All).map_err(err)?;
            let failures = fs.par_iter().filter(|f| !check_iia(f).holds).count();
            ensure(failures == 0, || format!("({s},{v}): {failures} reconstructions fail IIA"))?;
            total += fs.len();
        }
        Ok(format!("{total} reconstructions, 0 failures"))
    };
    outcome(4, run())
}

pub fn criterion_5() -> Outcome {
    let run = || -> Result<String, String> {
        use EnumerationFilter::*;
        let cases: [(&str, usize, usize, EnumerationFilter, BigUint); 6] = [
            ("q(3,2)", 3, 2, All, q(3, 2)),
            ("q(4,1)", 4, 1, All, q(4, 1)),
            ("r(3,2)", 3, 2, WppShape, r(3, 2).map_err(err)?),
            ("p(3,2)", 3, 2, CsShape, p(3, 2).map_err(err)?),
            ("p(3,1)", 3, 1, CsShape, p(3, 1).map_err(err)?),
            ("r(3,1)", 3, 1, WppShape, r(3, 1).map_err(err)?),
        ];
        let mut parts = Vec::new();
        for (name, s, v, filter, formula) in cases {
            let len = enumerate_descriptions(s, v, filter, DEFAULT_DESCRIPTION_BUDGET).map_err(err)?.count();
            ensure(BigUint::from(len) == formula, || format!("{name}: stream {len}, formula {formula}"))?;
            parts.push(format!("{name}={len}"));
        }
        ensure(q(3, 2) == q3_closed(2), || "q(3,2) disagrees with the closed form".into())?;
        Ok(parts.join(" "))
    };
    outcome(5, run())
}

pub fn criterion_6() -> Outcome {
    let run = || -> Result<String, String> {
        let alts = std_alts(3);
        let all = reconstruct_all(&alts, 2, EnumerationFilter::All).map_err(err)?;
        let table_set = |fs: Vec<ExplicitSwf>| fs.into_iter().map(|f| f.table().to_vec()).collect::<BTreeSet<_>>();
        let wpp_semantic = table_set(all.par_iter().filter(|f| check_wpp(f).holds).cloned().collect());
        let cs_semantic = table_set(all.par_iter().filter(|f| check_cs(f).holds).cloned().collect());
        let wpp_shape = table_set(reconstruct_all(&alts, 2, EnumerationFilter::WppShape).map_err(err)?);
        let cs_shape = table_set(reconstruct_all(&alts, 2, EnumerationFilter::CsShape).map_err(err)?);
        ensure(wpp_semantic == wpp_shape, || {
            format!("Pareto sets differ: {} semantic vs {} shaped", wpp_semantic.len(), wpp_shape.len())
        })?;
        ensure(cs_semantic == cs_shape, || {
            format!("sovereignty sets differ: {} semantic vs {} shaped", cs_semantic.len(), cs_shape.len())
        })?;
        ensure(wpp_shape.len() == 366 && cs_shape.len() == 733, || {
            format!("counts {} and {}, expected 366 and 733", wpp_shape.len(), cs_shape.len())
        })?;
        Ok(format!("wpp {} == 366, cs {} == 733", wpp_shape.len(), cs_shape.len()))
    };
    outcome(6, run())
}

pub fn criterion_7() -> Outcome {
    let run = || -> Result<String, String> {
        let f = build_named(&NamedKind::Example1).and_then(|n| n.explicit()).map_err(err)?;
        let dictator = find_dictator(&f).dictator;
        ensure(dictator == Some((0, Direction::Verbatim)), || format!("dictator {dictator:?}"))?;
        ensure(check_wpp(&f).holds, || "Pareto check failed".into())?;
        let verdict = check_iia(&f);
        let Some(witness @ Witness::Iia(v)) = &verdict.witness else {
            return Err("IIA check did not produce a witness".into());
        };
        ensure(!verdict.holds && witness.recheck(&f), || "witness does not re-verify".into())?;
        Ok(format!(
            "dictator 0 verbatim, Pareto holds, IIA fails on ({}, {}) between {:?} and {:?}",
            f.alts().label(v.pair.0),
            f.alts().label(v.pair.1),
            v.first.format(f.alts()),
            v.second.format(f.alts())
        ))
    };
    outcome(7, run())
}

pub fn criterion_8() -> Outcome {
    let run = || -> Result<String, String> {
        let pw = match build_named(&NamedKind::Example2Pairwise).map_err(err)? {
            crate::construct::NamedFixture::Pairwise(pw) => pw,
            _ => return Err("expected a pairwise fixture".into()),
        };
        ensure(crate::axioms::check_wpp_pairwise(&pw), || "unanimity check failed".into())?;
        let Err(Error::NotTransitive(v)) = pw.to_explicit() else {
            return Err("to_explicit did not report intransitivity".into());
        };
        let alts = pw.alts();
        let profile = v.profile.format(alts);
        ensure(profile == ["x=y=z", "x<y<z"], || format!("witness profile {profile:?}"))?;
        let rel = |a: &str, b: &str| v.relation.get(alts.index_of(a).unwrap(), alts.index_of(b).unwrap());
        ensure(
            rel("x", "y") == PairRel::Less && rel("y", "z") == PairRel::Less && rel("z", "x") == PairRel::Less,
            || format!("relation {} is not the cycle x<y, y<z, z<x", v.relation.format(alts)),
        )?;
        // The witness must re-verify against the tables themselves.
        let combined = pw.combine(&v.profile).map_err(err)?;
        ensure(combined == v.relation && !combined.is_transitive(), || "witness does not re-verify".into())?;
        Ok(format!("profile {profile:?} yields {}", v.relation.format(alts)))
    };
    outcome(8, run())
}

/// The unique function `f` defers to over `voter`, rebuilt from scratch:
/// for each profile of the others and each pair, every output `f` gives
/// while the voter ties that pair must agree.
fn independent_deferral(f: &ExplicitSwf, voter: usize) -> Option<Vec<Vec<PairRel>>> {
    let space = f.space();
    let n = space.len();
    let np = pair_count(f.states());
    let rest_count = n.pow(f.voters() as u32 - 1);
    let mut forced = vec![vec![None; np]; rest_count];
    let mut digits = vec![0; f.voters()];
    for pi in 0..f.num_profiles() {
        decode_profile(pi, n, &mut digits);
        let mut rest = digits.clone();
        let mine = rest.remove(voter);
        let ri = encode_profile(&rest, n);
        for (p, slot) in forced[ri].iter_mut().enumerate() {
            if space.pair_rel(mine, p) == PairRel::Equal {
                let out = space.pair_rel(f.output_index(pi), p);
                match *slot {
                    None => *slot = Some(out),
                    Some(prev) if prev != out => return None,
                    Some(_) => {}
                }
            }
        }
    }
    forced.into_iter().map(|row| row.into_iter().collect()).collect()
}

fn check_recursion(f: &ExplicitSwf) -> Result<(), String> {
    let tag = || f.to_json_string();
    let cleric = compute_cleric(f);
    ensure(cleric.transitive, || format!("cleric intransitive for {}", tag()))?;
    let cleric = cleric.order().expect("transitive");
    let mut chains = Vec::new();
    for x in 0..f.states() {
        let chain = build_chain(f, x).map_err(err)?;
        ensure(chain.len() <= f.voters() + 1, || format!("chain of length {} for {}", chain.len(), tag()))?;
        let terminal = chain.terminal();
        ensure(is_null(terminal) || terminal.states() <= 2, || format!("terminal neither null nor small: {}", tag()))?;
        for pair in chain.steps.windows(2) {
            let (step, next) = (&pair[0], &pair[1]);
            let (voter, _) = step.dictator.ok_or("non-final step without dictator")?;
            let pos = step.voters.iter().position(|&v| v == voter).ok_or("dictator outside voter set")?;
            let g = extract_deferred(&step.restricted, pos).map_err(err)?;
            ensure(g == next.swf, || format!("deferred function differs from next chain element for {}", tag()))?;
            let unique = independent_deferral(&step.restricted, pos).ok_or("deferral not uniquely determined")?;
            let all_pairs = pairs(g.states());
            let matches = (0..g.num_profiles())
                .all(|gi| all_pairs.iter().enumerate().all(|(p, &(a, b))| g.rel(gi, a, b) == unique[gi][p]));
            ensure(matches, || format!("deferral disagrees with the forced outputs for {}", tag()))?;
        }
        chains.push(chain);
    }
    for x in 0..f.states() {
        for y in x + 1..f.states() {
            if cleric.rel(x, y) == PairRel::Equal {
                let (a, b) = (&chains[x].steps, &chains[y].steps);
                let same = a.len() == b.len()
                    && a.iter().zip(b).skip(1).all(|(s, t)| s.states == t.states && s.voters == t.voters && s.swf == t.swf);
                ensure(same, || format!("seeds {x} and {y} diverge for {}", tag()))?;
            }
        }
    }
    Ok(())
}

pub fn criterion_9() -> Outcome {
    let run = || -> Result<String, String> {
        let alts = std_alts(3);
        let full: Vec<ExplicitSwf> = brute_force_iia(&alts, 1, SearchMode::Pruned).map_err(err)?.swfs().collect();
        let ds: Vec<_> = enumerate_descriptions(3, 2, EnumerationFilter::All, DEFAULT_DESCRIPTION_BUDGET)
            .map_err(err)?
            .collect();
        let stride = ds.len() / 1000;
        let sample: Vec<ExplicitSwf> =
            ds.iter().step_by(stride).take(1000).map(|d| reconstruct(d, &alts, 2)).collect::<Result<_>>().map_err(err)?;
        full.par_iter().chain(sample.par_iter()).try_for_each(check_recursion)?;
        Ok(format!("{} functions at (3,1) and {} sampled at (3,2)", full.len(), sample.len()))
    };
    outcome(9, run())
}

fn enumeration_bytes(threads: usize) -> Result<Vec<u8>, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        let mut out = Vec::new();
        write_enumeration(3, 2, EnumerationFilter::All, &mut out).map_err(err)?;
        Ok(out)
    })
}

pub fn criterion_10() -> Outcome {
    let run = || -> Result<String, String> {
        let a = enumeration_bytes(1)?;
        let b = enumeration_bytes(1)?;
        let c = enumeration_bytes(8)?;
        ensure(a == b, || "repeated single-thread runs differ".into())?;
        ensure(a == c, || "1-thread and 8-thread runs differ".into())?;
        let lines = a.iter().filter(|&&b| b == b'\n').count();
        ensure(lines == 118825, || format!("{lines} lines, expected 118825"))?;
        Ok(format!("{} bytes, {lines} lines, identical across runs and thread counts", a.len()))
    };
    outcome(10, run())
}

pub fn run_criterion(id: usize) -> Option<Outcome> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<Outcome> {
    (1..=CRITERIA.len()).filter_map(run_criterion).collect()
}
