//! Clerical-dictatorial certificates.
//!
//! [`decompose`] turns any IIA function into its canonical
//! [`CdDescription`]: the cleric is `C(f)`, each class of size at least three
//! is ruled by nobody (null) or by a dictator who defers to a nested
//! description over the remaining voters, and each class of size two
//! carries an arbitrary non-constant-strict pair table. [`reconstruct`] is
//! the inverse map.
//!
//! Dictator voters are always the original (global) voter indices. Pair
//! tables inside a nested description are indexed over the voters still
//! present at that depth, in increasing global order.

use serde::{Deserialize, Serialize};

use crate::axioms::{compute_cleric, extract_deferred, find_dictator, is_null, Direction};
use crate::error::{Error, Result};
use crate::swf::{restrict_swf, to_pairwise, ExplicitSwf, PairTable, Profile, TransitivityViolation};
use crate::weak_orders::{pairs, AltSet, CompleteRelation, OrderSpace, PairRel, WeakOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CdDescription {
    /// A single alternative.
    Unit,
    /// Two alternatives: any pair table for `(alt 0, alt 1)`.
    Leaf(PairTable),
    /// Three or more alternatives: a cleric and one ruling per cleric class,
    /// listed least class first.
    Layered { cleric: WeakOrder, rulings: Vec<ClassRuling> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassRuling {
    Singleton,
    /// Table for the class's two members in index order.
    PairFn(PairTable),
    Null,
    Dictator { voter: usize, direction: Direction, defer: Box<CdDescription> },
}

impl ClassRuling {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassRuling::Singleton => "singleton",
            ClassRuling::PairFn(_) => "pairfn",
            ClassRuling::Null => "null",
            ClassRuling::Dictator { .. } => "dictator",
        }
    }
}

/// Canonical certificate of an IIA function.
pub fn decompose(f: &ExplicitSwf) -> Result<CdDescription> {
    let voters: Vec<usize> = (0..f.voters()).collect();
    decompose_with_voters(f, &voters)
}

/// As [`decompose`], with `voters[i]` the global index of `f`'s voter `i`.
pub fn decompose_with_voters(f: &ExplicitSwf, voters: &[usize]) -> Result<CdDescription> {
    if voters.len() != f.voters() {
        return Err(Error::ShapeMismatch("voter labels do not match the function".into()));
    }
    let pairwise = to_pairwise(f)?;
    match f.states() {
        1 => return Ok(CdDescription::Unit),
        2 => return Ok(CdDescription::Leaf(pairwise.table(0, 1).clone())),
        _ => {}
    }
    let report = compute_cleric(f);
    let cleric = report
        .order()
        .ok_or_else(|| Error::InternalContradiction("C(f) of an IIA function is intransitive".into()))?;
    let mut rulings = Vec::new();
    for class in cleric.blocks() {
        let ruling = match class.len() {
            1 => ClassRuling::Singleton,
            2 => ClassRuling::PairFn(pairwise.table(class[0], class[1]).clone()),
            _ => {
                let g = restrict_swf(f, &class)?;
                if is_null(&g) {
                    ClassRuling::Null
                } else {
                    let (pos, direction) = find_dictator(&g).dictator.ok_or_else(|| {
                        Error::InternalContradiction(format!(
                            "class {:?} is neither null nor dictatorial",
                            g.alts().names()
                        ))
                    })?;
                    let deferred = extract_deferred(&g, pos)?;
                    let rest: Vec<usize> =
                        voters.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &v)| v).collect();
                    ClassRuling::Dictator {
                        voter: voters[pos],
                        direction,
                        defer: Box::new(decompose_with_voters(&deferred, &rest)?),
                    }
                }
            }
        };
        rulings.push(ruling);
    }
    Ok(CdDescription::Layered { cleric, rulings })
}

/// Checks that `d` fits `states` alternatives and the voter set `voters`.
pub fn check_shape(d: &CdDescription, states: usize, voters: &[usize]) -> Result<()> {
    let mismatch = |msg: String| Err(Error::ShapeMismatch(msg));
    match d {
        CdDescription::Unit if states == 1 => Ok(()),
        CdDescription::Leaf(t) if states == 2 => {
            if t.voters() != voters.len() {
                return mismatch(format!("leaf table over {} voters, expected {}", t.voters(), voters.len()));
            }
            Ok(())
        }
        CdDescription::Layered { cleric, rulings } if states >= 3 => {
            if cleric.len() != states {
                return mismatch(format!("cleric over {} alternatives, expected {states}", cleric.len()));
            }
            let blocks = cleric.blocks();
            if blocks.len() != rulings.len() {
                return mismatch(format!("{} classes but {} rulings", blocks.len(), rulings.len()));
            }
            for (class, ruling) in blocks.iter().zip(rulings) {
                match (class.len(), ruling) {
                    (1, ClassRuling::Singleton) => {}
                    (2, ClassRuling::PairFn(t)) => {
                        if t.voters() != voters.len() {
                            return mismatch("pair table voter count mismatch".into());
                        }
                    }
                    (k, ClassRuling::Null) if k >= 3 => {}
                    (k, ClassRuling::Dictator { voter, defer, .. }) if k >= 3 => {
                        if !voters.contains(voter) {
                            return mismatch(format!("dictator {voter} is not among voters {voters:?}"));
                        }
                        let rest: Vec<usize> = voters.iter().copied().filter(|v| v != voter).collect();
                        check_shape(defer, k, &rest)?;
                    }
                    (k, r) => return mismatch(format!("class of size {k} cannot carry a {} ruling", r.kind())),
                }
            }
            Ok(())
        }
        CdDescription::Unit => mismatch(format!("unit description over {states} alternatives")),
        CdDescription::Leaf(_) => mismatch(format!("leaf description over {states} alternatives")),
        CdDescription::Layered { .. } => mismatch(format!("layered description over {states} alternatives")),
    }
}

fn table_input(voters: &[usize], rel: &impl Fn(usize, usize, usize) -> PairRel, a: usize, b: usize) -> usize {
    crate::swf::pair_input_index(voters.iter().map(|&v| rel(v, a, b)))
}

/// Decides the pair `(x, y)` (local indices) by walking the certificate.
/// `members` maps local indices to the alternatives seen by `rel`, and
/// `rel(voter, a, b)` reports a voter's relation on `(a, b)`.
fn decide(
    d: &CdDescription,
    members: &[usize],
    voters: &[usize],
    rel: &impl Fn(usize, usize, usize) -> PairRel,
    x: usize,
    y: usize,
) -> PairRel {
    if x == y {
        return PairRel::Equal;
    }
    match d {
        CdDescription::Unit => PairRel::Equal,
        CdDescription::Leaf(t) => {
            let r = t.get_index(table_input(voters, rel, members[0], members[1]));
            if x < y { r } else { r.reverse() }
        }
        CdDescription::Layered { cleric, rulings } => {
            let c = cleric.rel(x, y);
            if c.is_strict() {
                return c;
            }
            let class_rank = cleric.rank(x);
            match &rulings[class_rank] {
                ClassRuling::Singleton | ClassRuling::Null => PairRel::Equal,
                ClassRuling::PairFn(t) => {
                    let (a, b) = (x.min(y), x.max(y));
                    let r = t.get_index(table_input(voters, rel, members[a], members[b]));
                    if x < y { r } else { r.reverse() }
                }
                ClassRuling::Dictator { voter, direction, defer } => {
                    let r = rel(*voter, members[x], members[y]);
                    if r.is_strict() {
                        return direction.apply(r);
                    }
                    let class: Vec<usize> = (0..cleric.len()).filter(|&m| cleric.rank(m) == class_rank).collect();
                    let sub_members: Vec<usize> = class.iter().map(|&m| members[m]).collect();
                    let rest: Vec<usize> = voters.iter().copied().filter(|v| v != voter).collect();
                    let lx = class.iter().position(|&m| m == x).unwrap();
                    let ly = class.iter().position(|&m| m == y).unwrap();
                    decide(defer, &sub_members, &rest, rel, lx, ly)
                }
            }
        }
    }
}

/// The relation the described function assigns to `(x, y)` on profile `p`.
pub fn evaluate_description(d: &CdDescription, alts: &AltSet, p: &Profile, x: usize, y: usize) -> Result<PairRel> {
    let s = alts.len();
    if x >= s || y >= s {
        return Err(Error::UnknownAlternative(x.max(y).to_string()));
    }
    let voters: Vec<usize> = (0..p.voters()).collect();
    check_shape(d, s, &voters)?;
    if p.prefs.iter().any(|o| o.len() != s) {
        return Err(Error::ShapeMismatch("profile over the wrong alternatives".into()));
    }
    let members: Vec<usize> = (0..s).collect();
    let rel = |v: usize, a: usize, b: usize| p.prefs[v].rel(a, b);
    Ok(decide(d, &members, &voters, &rel, x, y))
}

/// Tabulates the described function over every profile.
pub fn reconstruct(d: &CdDescription, alts: &AltSet, voters: usize) -> Result<ExplicitSwf> {
    let s = alts.len();
    let voter_ids: Vec<usize> = (0..voters).collect();
    check_shape(d, s, &voter_ids)?;
    let space = OrderSpace::get(s)?;
    let members: Vec<usize> = (0..s).collect();
    let all_pairs = pairs(s);
    ExplicitSwf::from_fn(alts.clone(), voters, |digits| {
        let rel = |v: usize, a: usize, b: usize| space.rel(digits[v], a, b);
        let rels = all_pairs.iter().map(|&(x, y)| decide(d, &members, &voter_ids, &rel, x, y)).collect();
        let relation = CompleteRelation::from_pair_rels(s, rels)?;
        match relation.to_weak_order() {
            Some(o) => Ok(space.index_of(&o)),
            None => Err(Error::NotTransitive(Box::new(TransitivityViolation {
                profile: Profile::new(digits.iter().map(|&i| space.order(i).clone()).collect()),
                triple: relation.transitivity_violation().expect("intransitive"),
                relation,
            }))),
        }
    })
}

/// One step of the recursion for a seed alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    /// Alternatives of this step's function (original indices).
    pub states: Vec<usize>,
    /// Voters of this step's function (original indices).
    pub voters: Vec<usize>,
    pub swf: ExplicitSwf,
    /// The seed's cleric class at this step (original indices).
    pub class: Vec<usize>,
    /// `swf` restricted to `class`.
    pub restricted: ExplicitSwf,
    /// Dictator of `restricted` (original voter index); `None` for the null voter.
    pub dictator: Option<(usize, Direction)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionChain {
    pub seed: usize,
    pub steps: Vec<ChainStep>,
}

impl DecompositionChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The final step's class restriction: null or over at most two states.
    pub fn terminal(&self) -> &ExplicitSwf {
        &self.steps.last().expect("chains are nonempty").restricted
    }
}

/// Materializes the recursion seeded at alternative `seed`. Each dictator
/// step removes one voter; the chain stops at the first step whose seed
/// class is ruled by the null voter.
pub fn build_chain(f: &ExplicitSwf, seed: usize) -> Result<DecompositionChain> {
    if seed >= f.states() {
        return Err(Error::UnknownAlternative(seed.to_string()));
    }
    to_pairwise(f)?;
    let mut states: Vec<usize> = (0..f.states()).collect();
    let mut voters: Vec<usize> = (0..f.voters()).collect();
    let mut current = f.clone();
    let mut steps = Vec::new();
    loop {
        let local_seed = states.iter().position(|&a| a == seed).expect("seed stays in its class");
        let cleric = compute_cleric(&current)
            .order()
            .ok_or_else(|| Error::InternalContradiction("C(f) of an IIA function is intransitive".into()))?;
        let local_class: Vec<usize> =
            (0..states.len()).filter(|&m| cleric.rank(m) == cleric.rank(local_seed)).collect();
        let class: Vec<usize> = local_class.iter().map(|&m| states[m]).collect();
        let restricted = restrict_swf(&current, &local_class)?;

        let dictator = if is_null(&current) || states.len() <= 2 || class.len() <= 2 || is_null(&restricted) {
            None
        } else {
            let found = find_dictator(&restricted).dictator.ok_or_else(|| {
                Error::InternalContradiction("class of size > 2 is neither null nor dictatorial".into())
            })?;
            Some(found)
        };

        let next = match dictator {
            Some((pos, _)) => Some((extract_deferred(&restricted, pos)?, pos)),
            None => None,
        };
        steps.push(ChainStep {
            states: states.clone(),
            voters: voters.clone(),
            swf: current,
            class: class.clone(),
            restricted,
            dictator: dictator.map(|(pos, dir)| (voters[pos], dir)),
        });
        match next {
            Some((deferred, pos)) => {
                voters.remove(pos);
                states = class;
                current = deferred;
            }
            None => break,
        }
    }
    Ok(DecompositionChain { seed, steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DescriptionJson {
    Unit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alts: Option<Vec<String>>,
    },
    Leaf {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alts: Option<Vec<String>>,
        pair: [String; 2],
        table: Vec<String>,
    },
    Layered {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alts: Option<Vec<String>>,
        cleric: String,
        classes: Vec<ClassJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub members: Vec<String>,
    pub ruling: RulingJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RulingJson {
    Singleton,
    Pairfn { table: Vec<String> },
    Null,
    Dictator { voter: usize, direction: Direction, defer: Box<DescriptionJson> },
}

fn voters_from_table_len(len: usize) -> Result<usize> {
    let mut n = 0;
    let mut size = 1;
    while size < len {
        size *= 3;
        n += 1;
    }
    if size != len {
        return Err(Error::Parse(format!("pair table length {len} is not a power of 3")));
    }
    Ok(n)
}

impl CdDescription {
    /// Root JSON; labels other than the defaults are recorded in `alts`.
    pub fn to_json(&self, alts: &AltSet) -> DescriptionJson {
        let root_alts = (!alts.is_standard()).then(|| alts.names().to_vec());
        self.to_json_inner(alts, root_alts)
    }

    fn to_json_inner(&self, alts: &AltSet, root_alts: Option<Vec<String>>) -> DescriptionJson {
        match self {
            CdDescription::Unit => DescriptionJson::Unit { alts: root_alts },
            CdDescription::Leaf(t) => DescriptionJson::Leaf {
                alts: root_alts,
                pair: [alts.label(0).to_string(), alts.label(1).to_string()],
                table: t.symbols(),
            },
            CdDescription::Layered { cleric, rulings } => DescriptionJson::Layered {
                alts: root_alts,
                cleric: cleric.format(alts),
                classes: cleric
                    .blocks()
                    .iter()
                    .zip(rulings)
                    .map(|(class, ruling)| ClassJson {
                        members: class.iter().map(|&m| alts.label(m).to_string()).collect(),
                        ruling: match ruling {
                            ClassRuling::Singleton => RulingJson::Singleton,
                            ClassRuling::PairFn(t) => RulingJson::Pairfn { table: t.symbols() },
                            ClassRuling::Null => RulingJson::Null,
                            ClassRuling::Dictator { voter, direction, defer } => {
                                let sub = alts.subset(class).expect("cleric blocks are valid subsets");
                                RulingJson::Dictator {
                                    voter: *voter,
                                    direction: *direction,
                                    defer: Box::new(defer.to_json_inner(&sub, None)),
                                }
                            }
                        },
                    })
                    .collect(),
            },
        }
    }

    pub fn to_json_string(&self, alts: &AltSet) -> String {
        serde_json::to_string(&self.to_json(alts)).expect("plain data serializes")
    }

    /// Parses a root description over `states` alternatives; returns the
    /// alternative set recorded in the document, or the default labels.
    pub fn from_json(json: &DescriptionJson, states: usize) -> Result<(CdDescription, AltSet)> {
        let recorded = match json {
            DescriptionJson::Unit { alts } | DescriptionJson::Leaf { alts, .. } | DescriptionJson::Layered { alts, .. } => {
                alts.clone()
            }
        };
        let alts = match recorded {
            Some(names) => AltSet::new(names)?,
            None => AltSet::standard(states)?,
        };
        if alts.len() != states {
            return Err(Error::ShapeMismatch(format!(
                "description names {} alternatives, expected {states}",
                alts.len()
            )));
        }
        Ok((Self::from_json_inner(json, &alts)?, alts))
    }

    pub fn from_json_str(text: &str, states: usize) -> Result<(CdDescription, AltSet)> {
        Self::from_json(&serde_json::from_str(text)?, states)
    }

    fn from_json_inner(json: &DescriptionJson, alts: &AltSet) -> Result<CdDescription> {
        match json {
            DescriptionJson::Unit { .. } => {
                if alts.len() != 1 {
                    return Err(Error::ShapeMismatch("unit description needs one alternative".into()));
                }
                Ok(CdDescription::Unit)
            }
            DescriptionJson::Leaf { pair, table, .. } => {
                if alts.len() != 2 {
                    return Err(Error::ShapeMismatch("leaf description needs two alternatives".into()));
                }
                let t = PairTable::from_symbols(voters_from_table_len(table.len())?, table)?;
                if pair[0] == alts.label(0) && pair[1] == alts.label(1) {
                    Ok(CdDescription::Leaf(t))
                } else if pair[0] == alts.label(1) && pair[1] == alts.label(0) {
                    Ok(CdDescription::Leaf(t.reversed()))
                } else {
                    Err(Error::UnknownAlternative(format!("{pair:?}")))
                }
            }
            DescriptionJson::Layered { cleric, classes, .. } => {
                let cleric = WeakOrder::parse(cleric, alts)?;
                let blocks = cleric.blocks();
                if blocks.len() != classes.len() {
                    return Err(Error::ShapeMismatch("class list does not match the cleric".into()));
                }
                let mut rulings = Vec::new();
                for (block, class) in blocks.iter().zip(classes) {
                    let labels: Vec<&str> = block.iter().map(|&m| alts.label(m)).collect();
                    if class.members != labels {
                        return Err(Error::ShapeMismatch(format!(
                            "class members {:?} do not match cleric block {labels:?}",
                            class.members
                        )));
                    }
                    rulings.push(match &class.ruling {
                        RulingJson::Singleton => ClassRuling::Singleton,
                        RulingJson::Null => ClassRuling::Null,
                        RulingJson::Pairfn { table } => {
                            ClassRuling::PairFn(PairTable::from_symbols(voters_from_table_len(table.len())?, table)?)
                        }
                        RulingJson::Dictator { voter, direction, defer } => ClassRuling::Dictator {
                            voter: *voter,
                            direction: *direction,
                            defer: Box::new(Self::from_json_inner(defer, &alts.subset(block)?)?),
                        },
                    });
                }
                Ok(CdDescription::Layered { cleric, rulings })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_iia;

    fn xyz() -> AltSet {
        AltSet::new(["x", "y", "z"]).unwrap()
    }

    fn order(text: &str) -> WeakOrder {
        WeakOrder::parse(text, &xyz()).unwrap()
    }

    fn null_layered() -> CdDescription {
        CdDescription::Layered { cleric: WeakOrder::all_equal(3).unwrap(), rulings: vec![ClassRuling::Null] }
    }

    fn dictate(voter: usize, direction: Direction, defer: CdDescription) -> CdDescription {
        CdDescription::Layered {
            cleric: WeakOrder::all_equal(3).unwrap(),
            rulings: vec![ClassRuling::Dictator { voter, direction, defer: Box::new(defer) }],
        }
    }

    #[test]
    fn null_function_decomposes_to_null_class() {
        let f = ExplicitSwf::null(xyz(), 2).unwrap();
        assert_eq!(decompose(&f).unwrap(), null_layered());
        assert_eq!(reconstruct(&null_layered(), &xyz(), 2).unwrap(), f);
    }

    #[test]
    fn verbatim_dictator_over_null() {
        let f = ExplicitSwf::from_fn(xyz(), 2, |d| Ok(d[0])).unwrap();
        let expected = dictate(0, Direction::Verbatim, null_layered());
        assert_eq!(decompose(&f).unwrap(), expected);
        assert_eq!(reconstruct(&expected, &xyz(), 2).unwrap(), f);
    }

    #[test]
    fn non_iia_input_is_rejected() {
        let space = OrderSpace::get(3).unwrap();
        let target = space.index_of(&order("x<y<z"));
        let f = ExplicitSwf::from_fn(xyz(), 1, |d| Ok(if d[0] == 0 { target } else { space.all_equal_index() })).unwrap();
        assert!(!check_iia(&f).holds);
        assert!(matches!(decompose(&f), Err(Error::NotIia(_))));
        assert!(matches!(build_chain(&f, 0), Err(Error::NotIia(_))));
    }

    #[test]
    fn evaluate_examples() {
        let alts = xyz();
        let d = CdDescription::Layered {
            cleric: order("x<y=z"),
            rulings: vec![ClassRuling::Singleton, ClassRuling::PairFn(PairTable::constant(1, PairRel::Equal).unwrap())],
        };
        let p = Profile::new(vec![order("z<y<x")]);
        assert_eq!(evaluate_description(&d, &alts, &p, 0, 1).unwrap(), PairRel::Less);

        let inv = dictate(0, Direction::Inverse, null_layered());
        let p = Profile::new(vec![order("x<y<z")]);
        assert_eq!(evaluate_description(&inv, &alts, &p, 0, 1).unwrap(), PairRel::Greater);

        let nested = dictate(0, Direction::Verbatim, dictate(1, Direction::Verbatim, null_layered()));
        let p = Profile::new(vec![order("x=y=z"), order("x<y<z")]);
        assert_eq!(evaluate_description(&nested, &alts, &p, 0, 2).unwrap(), PairRel::Less);
        assert_eq!(evaluate_description(&nested, &alts, &p, 2, 0).unwrap(), PairRel::Greater);
    }

    #[test]
    fn unit_and_leaf_reconstruct() {
        let one = AltSet::new(["x"]).unwrap();
        let f = reconstruct(&CdDescription::Unit, &one, 2).unwrap();
        assert_eq!(f.num_profiles(), 1);

        let two = AltSet::new(["x", "y"]).unwrap();
        let t = PairTable::nth(1, 5).unwrap();
        let f = reconstruct(&CdDescription::Leaf(t.clone()), &two, 1).unwrap();
        assert_eq!(to_pairwise(&f).unwrap().table(0, 1), &t);
        assert_eq!(decompose(&f).unwrap(), CdDescription::Leaf(t));
    }

    #[test]
    fn shape_errors() {
        let alts = xyz();
        assert!(matches!(reconstruct(&CdDescription::Unit, &alts, 1), Err(Error::ShapeMismatch(_))));
        let bad_voter = dictate(3, Direction::Verbatim, null_layered());
        assert!(matches!(reconstruct(&bad_voter, &alts, 2), Err(Error::ShapeMismatch(_))));
        let wrong_kind = CdDescription::Layered {
            cleric: WeakOrder::all_equal(3).unwrap(),
            rulings: vec![ClassRuling::Singleton],
        };
        assert!(matches!(reconstruct(&wrong_kind, &alts, 1), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn null_chain_has_one_step() {
        let f = ExplicitSwf::null(xyz(), 2).unwrap();
        let chain = build_chain(&f, 0).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.steps[0].dictator, None);
        assert!(is_null(chain.terminal()));
    }

    #[test]
    fn nested_dictator_chain() {
        let d = dictate(0, Direction::Verbatim, dictate(1, Direction::Verbatim, null_layered()));
        let f = reconstruct(&d, &xyz(), 2).unwrap();
        let chain = build_chain(&f, 1).unwrap();
        assert_eq!(chain.len(), 3);
        let states: Vec<_> = chain.steps.iter().map(|s| s.states.clone()).collect();
        assert_eq!(states, vec![vec![0, 1, 2]; 3]);
        let voters: Vec<_> = chain.steps.iter().map(|s| s.voters.clone()).collect();
        assert_eq!(voters, vec![vec![0, 1], vec![1], vec![]]);
        let dictators: Vec<_> = chain.steps.iter().map(|s| s.dictator).collect();
        assert_eq!(dictators, vec![Some((0, Direction::Verbatim)), Some((1, Direction::Verbatim)), None]);
    }

    #[test]
    fn json_round_trip_with_custom_labels() {
        let d = CdDescription::Layered {
            cleric: order("y<x=z"),
            rulings: vec![ClassRuling::Singleton, ClassRuling::PairFn(PairTable::nth(1, 7).unwrap())],
        };
        let text = d.to_json_string(&xyz());
        assert_eq!(
            text,
            r#"{"kind":"layered","alts":["x","y","z"],"cleric":"y<x=z","classes":[{"members":["y"],"ruling":{"kind":"singleton"}},{"members":["x","z"],"ruling":{"kind":"pairfn","table":["<",">","="]}}]}"#
        );
        let (back, alts) = CdDescription::from_json_str(&text, 3).unwrap();
        assert_eq!(back, d);
        assert_eq!(alts, xyz());
    }

    #[test]
    fn json_default_labels_are_implicit() {
        let alts = AltSet::standard(3).unwrap();
        let d = dictate(1, Direction::Inverse, null_layered());
        let text = d.to_json_string(&alts);
        assert_eq!(
            text,
            r#"{"kind":"layered","cleric":"a0=a1=a2","classes":[{"members":["a0","a1","a2"],"ruling":{"kind":"dictator","voter":1,"direction":"inverse","defer":{"kind":"layered","cleric":"a0=a1=a2","classes":[{"members":["a0","a1","a2"],"ruling":{"kind":"null"}}]}}}]}"#
        );
        assert_eq!(CdDescription::from_json_str(&text, 3).unwrap().0, d);
        assert!(CdDescription::from_json_str(&text, 4).is_err());
    }
}
