//! Axiom checkers. Every failing verdict carries a witness that can be
//! re-verified against the function with [`Witness::recheck`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::swf::{
    decode_profile, encode_profile, to_pairwise, ExplicitSwf, IiaViolation, PairwiseSwf, Profile,
    TransitivityViolation,
};
use crate::weak_orders::{pair_count, pairs, AltSet, CompleteRelation, PairRel, WeakOrder};

/// How a dictator's strict preferences are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Verbatim,
    Inverse,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Verbatim, Direction::Inverse];

    #[inline]
    pub fn apply(self, rel: PairRel) -> PairRel {
        match self {
            Direction::Verbatim => rel,
            Direction::Inverse => rel.reverse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Verbatim => "verbatim",
            Direction::Inverse => "inverse",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Iia,
    Wpp,
    Cs,
    Null,
    Dictatorial,
    Transitive,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Iia => "iia",
            Axiom::Wpp => "wpp",
            Axiom::Cs => "cs",
            Axiom::Null => "null",
            Axiom::Dictatorial => "dictatorial",
            Axiom::Transitive => "transitive",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "iia" => Axiom::Iia,
            "wpp" => Axiom::Wpp,
            "cs" => Axiom::Cs,
            "null" => Axiom::Null,
            "dictatorial" => Axiom::Dictatorial,
            "transitive" => Axiom::Transitive,
            other => return Err(Error::Parse(format!("unknown axiom {other:?}"))),
        })
    }
}

/// A `(voter, direction)` candidate together with the profile and pair
/// where its strict preference is not followed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub voter: usize,
    pub direction: Direction,
    pub profile: Profile,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Iia(IiaViolation),
    /// Every voter ranks `pair.0` strictly below `pair.1`; the output does not.
    Pareto { pair: (usize, usize), profile: Profile },
    /// `pair.0` is strictly below `pair.1` in every output.
    FixedStrict { pair: (usize, usize) },
    /// The output for `profile` is strict on `pair`.
    StrictOutput { pair: (usize, usize), profile: Profile },
    Intransitive(TransitivityViolation),
    /// One refutation per candidate `(voter, direction)`.
    NoDictator(Vec<Refutation>),
}

impl Witness {
    /// Re-verifies the violation against `f` without reusing the checker.
    pub fn recheck(&self, f: &ExplicitSwf) -> bool {
        match self {
            Witness::Iia(v) => v.recheck(f),
            Witness::Pareto { pair: (x, y), profile } => {
                profile.voters() > 0
                    && profile.prefs.iter().all(|o| o.rel(*x, *y) == PairRel::Less)
                    && f.eval(profile).is_ok_and(|o| o.rel(*x, *y) != PairRel::Less)
            }
            Witness::FixedStrict { pair: (x, y) } => {
                (0..f.num_profiles()).all(|p| f.output(p).rel(*x, *y) == PairRel::Less)
            }
            Witness::StrictOutput { pair: (x, y), profile } => {
                f.eval(profile).is_ok_and(|o| o.rel(*x, *y).is_strict())
            }
            // explicit functions are transitive by construction
            Witness::Intransitive(_) => false,
            Witness::NoDictator(refs) => {
                refs.len() == 2 * f.voters()
                    && refs.iter().all(|r| {
                        let (x, y) = r.pair;
                        let Some(pref) = r.profile.prefs.get(r.voter) else { return false };
                        let want = pref.rel(x, y);
                        want.is_strict()
                            && f.eval(&r.profile).is_ok_and(|o| o.rel(x, y) != r.direction.apply(want))
                    })
            }
        }
    }

    pub fn to_json(&self, alts: &AltSet) -> Value {
        let pair = |(x, y): (usize, usize)| json!([alts.label(x), alts.label(y)]);
        match self {
            Witness::Iia(v) => json!({
                "kind": "iia",
                "pair": pair(v.pair),
                "profiles": [v.first.format(alts), v.second.format(alts)],
            }),
            Witness::Pareto { pair: p, profile } => json!({
                "kind": "pareto",
                "pair": pair(*p),
                "profile": profile.format(alts),
            }),
            Witness::FixedStrict { pair: p } => json!({ "kind": "fixed_strict", "pair": pair(*p) }),
            Witness::StrictOutput { pair: p, profile } => json!({
                "kind": "strict_output",
                "pair": pair(*p),
                "profile": profile.format(alts),
            }),
            Witness::Intransitive(v) => json!({
                "kind": "intransitive",
                "profile": v.profile.format(alts),
                "triple": [alts.label(v.triple.0), alts.label(v.triple.1), alts.label(v.triple.2)],
                "relation": v.relation.format(alts),
            }),
            Witness::NoDictator(refs) => json!({
                "kind": "no_dictator",
                "refutations": refs.iter().map(|r| json!({
                    "voter": r.voter,
                    "direction": r.direction.name(),
                    "profile": r.profile.format(alts),
                    "pair": pair(r.pair),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn from_witness(witness: Option<Witness>) -> Self {
        AxiomVerdict { holds: witness.is_none(), witness }
    }

    pub fn to_json(&self, axiom: Axiom, alts: &AltSet) -> Value {
        json!({
            "axiom": axiom.name(),
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| w.to_json(alts)),
        })
    }
}

pub fn check(axiom: Axiom, f: &ExplicitSwf) -> AxiomVerdict {
    match axiom {
        Axiom::Iia => check_iia(f),
        Axiom::Wpp => check_wpp(f),
        Axiom::Cs => check_cs(f),
        Axiom::Null => check_null(f),
        Axiom::Dictatorial => check_dictatorial(f),
        Axiom::Transitive => AxiomVerdict::from_witness(None),
    }
}

pub fn check_iia(f: &ExplicitSwf) -> AxiomVerdict {
    match to_pairwise(f) {
        Ok(_) => AxiomVerdict::from_witness(None),
        Err(Error::NotIia(v)) => AxiomVerdict::from_witness(Some(Witness::Iia(*v))),
        Err(e) => unreachable!("to_pairwise on a valid table: {e}"),
    }
}

/// With no voters there is no unanimity to respect, so WPP holds vacuously.
pub fn check_wpp(f: &ExplicitSwf) -> AxiomVerdict {
    if f.voters() == 0 {
        return AxiomVerdict::from_witness(None);
    }
    let space = f.space();
    let mut digits = vec![0; f.voters()];
    for pi in 0..f.num_profiles() {
        decode_profile(pi, space.len(), &mut digits);
        let out = f.output_index(pi);
        for (p, (x, y)) in pairs(f.states()).into_iter().enumerate() {
            let first = space.pair_rel(digits[0], p);
            if !first.is_strict() || digits.iter().any(|&d| space.pair_rel(d, p) != first) {
                continue;
            }
            if space.pair_rel(out, p) != first {
                let pair = if first == PairRel::Less { (x, y) } else { (y, x) };
                return AxiomVerdict::from_witness(Some(Witness::Pareto { pair, profile: f.profile(pi) }));
            }
        }
    }
    AxiomVerdict::from_witness(None)
}

/// Pairwise analogue of [`check_wpp`]: each pair table maps unanimous
/// strict input to the same strict output.
pub fn check_wpp_pairwise(pw: &PairwiseSwf) -> bool {
    if pw.voters() == 0 {
        return true;
    }
    let all_less = crate::swf::pair_input_index(std::iter::repeat_n(PairRel::Less, pw.voters()));
    let all_greater = crate::swf::pair_input_index(std::iter::repeat_n(PairRel::Greater, pw.voters()));
    pw.tables()
        .iter()
        .all(|t| t.get_index(all_less) == PairRel::Less && t.get_index(all_greater) == PairRel::Greater)
}

pub fn check_cs(f: &ExplicitSwf) -> AxiomVerdict {
    let cleric = compute_cleric(f);
    for (x, y) in pairs(f.states()) {
        match cleric.relation.get(x, y) {
            PairRel::Less => return AxiomVerdict::from_witness(Some(Witness::FixedStrict { pair: (x, y) })),
            PairRel::Greater => return AxiomVerdict::from_witness(Some(Witness::FixedStrict { pair: (y, x) })),
            PairRel::Equal => {}
        }
    }
    AxiomVerdict::from_witness(None)
}

pub fn is_null(f: &ExplicitSwf) -> bool {
    let all_equal = f.space().all_equal_index() as u16;
    f.table().iter().all(|&t| t == all_equal)
}

pub fn check_null(f: &ExplicitSwf) -> AxiomVerdict {
    let all_equal = f.space().all_equal_index();
    let witness = (0..f.num_profiles()).find(|&p| f.output_index(p) != all_equal).map(|p| {
        let out = f.output(p);
        let pair = pairs(f.states()).into_iter().find(|&(x, y)| out.rel(x, y).is_strict()).unwrap();
        Witness::StrictOutput { pair, profile: f.profile(p) }
    });
    AxiomVerdict::from_witness(witness)
}

/// `C(f)`: `x <= y` iff some output has `x <= y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClericReport {
    pub relation: CompleteRelation,
    pub transitive: bool,
}

impl ClericReport {
    pub fn order(&self) -> Option<WeakOrder> {
        self.relation.to_weak_order()
    }
}

pub fn compute_cleric(f: &ExplicitSwf) -> ClericReport {
    let space = f.space();
    let np = pair_count(f.states());
    // bit 0: some output has x <= y; bit 1: some output has y <= x
    let mut seen = vec![0u8; np];
    let mut distinct = vec![false; space.len()];
    for &t in f.table() {
        distinct[t as usize] = true;
    }
    for (o, _) in distinct.iter().enumerate().filter(|(_, &d)| d) {
        for (p, mask) in seen.iter_mut().enumerate() {
            match space.pair_rel(o, p) {
                PairRel::Less => *mask |= 1,
                PairRel::Equal => *mask |= 3,
                PairRel::Greater => *mask |= 2,
            }
        }
    }
    let rels = seen
        .into_iter()
        .map(|m| match m {
            1 => PairRel::Less,
            2 => PairRel::Greater,
            _ => PairRel::Equal,
        })
        .collect();
    let relation = CompleteRelation::from_pair_rels(f.states(), rels).expect("one relation per pair");
    let transitive = relation.is_transitive();
    ClericReport { relation, transitive }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DictatorFinding {
    pub dictator: Option<(usize, Direction)>,
}

impl DictatorFinding {
    pub fn voter(&self) -> Option<usize> {
        self.dictator.map(|d| d.0)
    }

    pub fn direction(&self) -> Option<Direction> {
        self.dictator.map(|d| d.1)
    }
}

/// First profile (index) and pair where voter `voter` fails to be a
/// dictator in `direction`.
fn dictator_refutation(f: &ExplicitSwf, voter: usize, direction: Direction) -> Option<(usize, (usize, usize))> {
    let space = f.space();
    let n = space.len();
    let all_pairs = pairs(f.states());
    let mut digits = vec![0; f.voters()];
    for pi in 0..f.num_profiles() {
        decode_profile(pi, n, &mut digits);
        let out = f.output_index(pi);
        for (p, &pair) in all_pairs.iter().enumerate() {
            let r = space.pair_rel(digits[voter], p);
            if r.is_strict() && space.pair_rel(out, p) != direction.apply(r) {
                return Some((pi, pair));
            }
        }
    }
    None
}

/// Lowest voter index first, [`Direction::Verbatim`] before
/// [`Direction::Inverse`].
pub fn find_dictator(f: &ExplicitSwf) -> DictatorFinding {
    for voter in 0..f.voters() {
        for direction in Direction::ALL {
            if dictator_refutation(f, voter, direction).is_none() {
                return DictatorFinding { dictator: Some((voter, direction)) };
            }
        }
    }
    DictatorFinding { dictator: None }
}

pub fn check_dictatorial(f: &ExplicitSwf) -> AxiomVerdict {
    let mut refutations = Vec::new();
    for voter in 0..f.voters() {
        for direction in Direction::ALL {
            match dictator_refutation(f, voter, direction) {
                None => return AxiomVerdict::from_witness(None),
                Some((pi, pair)) => {
                    refutations.push(Refutation { voter, direction, profile: f.profile(pi), pair })
                }
            }
        }
    }
    AxiomVerdict::from_witness(Some(Witness::NoDictator(refutations)))
}

/// The function `f` defers to over dictator `voter`: the dictator's
/// preference is replaced by total indifference. The defers-to condition is
/// then verified over every profile and tied pair.
pub fn extract_deferred(f: &ExplicitSwf, voter: usize) -> Result<ExplicitSwf> {
    if voter >= f.voters() {
        return Err(Error::ShapeMismatch(format!("no voter {voter} among {}", f.voters())));
    }
    to_pairwise(f)?;
    if Direction::ALL.iter().all(|&d| dictator_refutation(f, voter, d).is_some()) {
        return Err(Error::NotDictator(voter));
    }
    let space = f.space();
    let n = space.len();
    let all_equal = space.all_equal_index();
    let g = ExplicitSwf::from_fn(f.alts().clone(), f.voters() - 1, |rest| {
        let mut full = rest.to_vec();
        full.insert(voter, all_equal);
        Ok(f.output_index(encode_profile(&full, n)))
    })?;

    let np = pair_count(f.states());
    let mut digits = vec![0; f.voters()];
    let mut rest = Vec::with_capacity(f.voters() - 1);
    for pi in 0..f.num_profiles() {
        decode_profile(pi, n, &mut digits);
        rest.clear();
        rest.extend(digits.iter().enumerate().filter(|&(v, _)| v != voter).map(|(_, &d)| d));
        let g_out = g.output_index(encode_profile(&rest, n));
        let f_out = f.output_index(pi);
        for p in 0..np {
            if space.pair_rel(digits[voter], p) == PairRel::Equal && space.pair_rel(f_out, p) != space.pair_rel(g_out, p)
            {
                let (x, y) = pairs(f.states())[p];
                return Err(Error::DeferralInconsistent(format!(
                    "profile {:?} on pair ({}, {})",
                    f.profile(pi).format(f.alts()),
                    f.alts().label(x),
                    f.alts().label(y)
                )));
            }
        }
    }
    Ok(g)
}
