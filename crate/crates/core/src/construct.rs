//! Enumeration of canonical clerical-dictatorial descriptions, plus the
//! named fixtures used throughout the tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::axioms::{compute_cleric, Direction};
use crate::count;
use crate::decompose::{check_shape, reconstruct, CdDescription, ClassRuling};
use crate::error::{Error, Result};
use crate::swf::{ExplicitSwf, PairTable, PairwiseSwf, DEFAULT_PROFILE_BUDGET};
use crate::weak_orders::{AltSet, OrderSpace, PairRel, WeakOrder, MAX_STATES};

pub const DEFAULT_DESCRIPTION_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EnumerationFilter {
    #[default]
    All,
    /// Functions satisfying the weak Pareto principle: a single cleric
    /// class ruled by a verbatim dictator (any function when there are no
    /// voters, since the principle is then vacuous).
    WppShape,
    /// Functions satisfying citizens' sovereignty: a single cleric class,
    /// null or ruled by a dictator in either direction.
    CsShape,
}

impl FromStr for EnumerationFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(EnumerationFilter::All),
            "wpp" => Ok(EnumerationFilter::WppShape),
            "cs" => Ok(EnumerationFilter::CsShape),
            other => Err(Error::Parse(format!("unknown filter {other:?}"))),
        }
    }
}

impl fmt::Display for EnumerationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumerationFilter::All => "all",
            EnumerationFilter::WppShape => "wpp",
            EnumerationFilter::CsShape => "cs",
        })
    }
}

/// Number of descriptions the stream for `(states, voters, filter)` yields.
pub fn expected_count(states: usize, voters: usize, filter: EnumerationFilter) -> Result<BigUint> {
    if states == 0 || states > MAX_STATES {
        return Err(Error::StatesOutOfRange(states));
    }
    if states == 1 {
        return Ok(BigUint::from(1u32));
    }
    match filter {
        EnumerationFilter::All => Ok(count::q(states, voters)),
        EnumerationFilter::WppShape => count::r(states, voters),
        EnumerationFilter::CsShape => count::p(states, voters),
    }
}

fn check_budget(states: usize, voters: usize, filter: EnumerationFilter, budget: u64) -> Result<u64> {
    let needed = expected_count(states, voters, filter)?;
    match needed.to_u64() {
        Some(n) if n <= budget => Ok(n),
        _ => Err(Error::BudgetExceeded { needed: needed.to_string(), budget }),
    }
}

/// Non-constant-strict pair tables in ordinal order.
fn pair_rulings(voters: usize) -> Vec<PairTable> {
    let size = PairTable::space_size(voters).expect("budget-checked");
    (0..size)
        .map(|n| PairTable::nth(voters, n).expect("ordinal in range"))
        .filter(|t| !t.is_constant_strict())
        .collect()
}

/// Rulings for a class of size `k` over the voter set `voters` (global
/// indices, increasing), in enumeration order.
fn class_options(k: usize, voters: &[usize]) -> Vec<ClassRuling> {
    match k {
        1 => vec![ClassRuling::Singleton],
        2 => pair_rulings(voters.len()).into_iter().map(ClassRuling::PairFn).collect(),
        _ => {
            let mut out = vec![ClassRuling::Null];
            for &v in voters {
                let rest: Vec<usize> = voters.iter().copied().filter(|&w| w != v).collect();
                let defers = all_descriptions(k, &rest);
                for direction in Direction::ALL {
                    for d in &defers {
                        out.push(ClassRuling::Dictator { voter: v, direction, defer: Box::new(d.clone()) });
                    }
                }
            }
            out
        }
    }
}

/// Every canonical description over `states` alternatives and the given
/// voters, materialized. Callers are responsible for the size.
pub fn all_descriptions(states: usize, voters: &[usize]) -> Vec<CdDescription> {
    DescriptionStream::over(states, voters.to_vec(), EnumerationFilter::All).collect()
}

/// Deterministic stream of canonical descriptions: clerics in weak-order
/// enumeration order, then rulings as a lexicographic product with the
/// least class varying slowest.
pub struct DescriptionStream {
    clerics: Vec<WeakOrder>,
    voters: Vec<usize>,
    filter: EnumerationFilter,
    states: usize,
    next_cleric: usize,
    current: Option<(WeakOrder, Vec<Vec<ClassRuling>>, Vec<usize>)>,
    leaf: Option<std::vec::IntoIter<PairTable>>,
    unit_done: bool,
}

impl DescriptionStream {
    fn over(states: usize, voters: Vec<usize>, filter: EnumerationFilter) -> Self {
        let no_voters_wpp = voters.is_empty() && filter == EnumerationFilter::WppShape;
        let filter = if no_voters_wpp { EnumerationFilter::All } else { filter };
        let clerics = match (states, filter) {
            (0..=2, _) => Vec::new(),
            (_, EnumerationFilter::All) => OrderSpace::get(states).expect("checked").orders().to_vec(),
            _ => vec![WeakOrder::all_equal(states).expect("checked")],
        };
        let leaf = (states == 2).then(|| {
            let tables = (0..PairTable::space_size(voters.len()).expect("budget-checked"))
                .map(|n| PairTable::nth(voters.len(), n).expect("in range"))
                .filter(|t| leaf_admitted(t, filter))
                .collect::<Vec<_>>();
            tables.into_iter()
        });
        DescriptionStream {
            clerics,
            voters,
            filter,
            states,
            next_cleric: 0,
            current: None,
            leaf,
            unit_done: false,
        }
    }

    fn load_cleric(&mut self) -> bool {
        while self.next_cleric < self.clerics.len() {
            let cleric = self.clerics[self.next_cleric].clone();
            self.next_cleric += 1;
            let mut options: Vec<Vec<ClassRuling>> = Vec::new();
            for class in cleric.blocks() {
                let mut opts = class_options(class.len(), &self.voters);
                match self.filter {
                    EnumerationFilter::All => {}
                    EnumerationFilter::WppShape => opts.retain(|r| {
                        matches!(r, ClassRuling::Dictator { direction: Direction::Verbatim, .. })
                    }),
                    EnumerationFilter::CsShape => {
                        opts.retain(|r| matches!(r, ClassRuling::Null | ClassRuling::Dictator { .. }))
                    }
                }
                options.push(opts);
            }
            if options.iter().all(|o| !o.is_empty()) {
                let cursor = vec![0; options.len()];
                self.current = Some((cleric, options, cursor));
                return true;
            }
        }
        false
    }
}

fn leaf_admitted(t: &PairTable, filter: EnumerationFilter) -> bool {
    let v = t.voters();
    match filter {
        EnumerationFilter::All => true,
        EnumerationFilter::WppShape => {
            // Unanimous Less is input 0, unanimous Greater the last input.
            let last = t.entries().len() - 1;
            v == 0 || (t.get_index(0) == PairRel::Less && t.get_index(last) == PairRel::Greater)
        }
        EnumerationFilter::CsShape => !t.is_constant_strict(),
    }
}

impl Iterator for DescriptionStream {
    type Item = CdDescription;

    fn next(&mut self) -> Option<CdDescription> {
        match self.states {
            1 => {
                if self.unit_done {
                    return None;
                }
                self.unit_done = true;
                return Some(CdDescription::Unit);
            }
            2 => return self.leaf.as_mut().and_then(|it| it.next()).map(CdDescription::Leaf),
            _ => {}
        }
        if self.current.is_none() && !self.load_cleric() {
            return None;
        }
        let (cleric, options, cursor) = self.current.as_mut().expect("loaded");
        let item = CdDescription::Layered {
            cleric: cleric.clone(),
            rulings: cursor.iter().zip(options.iter()).map(|(&i, o)| o[i].clone()).collect(),
        };
        // Odometer: the last class varies fastest.
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < options[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(item)
    }
}

/// Canonical descriptions over `states` alternatives and voters
/// `0..voters`, after checking the stream length against `budget`.
pub fn enumerate_descriptions(
    states: usize,
    voters: usize,
    filter: EnumerationFilter,
    budget: u64,
) -> Result<DescriptionStream> {
    check_budget(states, voters, filter, budget)?;
    Ok(DescriptionStream::over(states, (0..voters).collect(), filter))
}

/// Class sizes of the function's cleric, least class first, e.g. `"2+1"`.
pub fn cleric_signature(d: &CdDescription) -> String {
    match d {
        CdDescription::Unit => "1".into(),
        CdDescription::Leaf(t) if t.is_constant_strict() => "1+1".into(),
        CdDescription::Leaf(_) => "2".into(),
        CdDescription::Layered { cleric, .. } => {
            cleric.blocks().iter().map(|b| b.len().to_string()).collect::<Vec<_>>().join("+")
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub total: u64,
    pub by_cleric: BTreeMap<String, u64>,
}

impl EnumerationStats {
    pub fn collect(stream: impl IntoIterator<Item = CdDescription>) -> Self {
        let mut stats = EnumerationStats::default();
        for d in stream {
            stats.total += 1;
            *stats.by_cleric.entry(cleric_signature(&d)).or_default() += 1;
        }
        stats
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalReport {
    pub valid: bool,
    pub violations: Vec<String>,
    /// False when reconstruction was too large to confirm cleric exactness.
    pub cleric_checked: bool,
}

fn structural_violations(d: &CdDescription, path: &str, out: &mut Vec<String>) {
    if let CdDescription::Layered { rulings, .. } = d {
        for (i, ruling) in rulings.iter().enumerate() {
            match ruling {
                ClassRuling::PairFn(t) if t.is_constant_strict() => {
                    out.push(format!("{path}class {i}: pair table is constant {}", t.entries()[0].symbol()))
                }
                ClassRuling::Dictator { defer, .. } => {
                    structural_violations(defer, &format!("{path}class {i}/defer: "), out)
                }
                _ => {}
            }
        }
    }
}

/// Checks every canonicality rule on `d` over `states` alternatives and
/// voters `0..voters`: shape, no constant-strict pair rulings, and that the
/// cleric is exactly the cleric of the reconstructed function.
pub fn validate_canonical(d: &CdDescription, states: usize, voters: usize) -> CanonicalReport {
    let voter_ids: Vec<usize> = (0..voters).collect();
    let mut violations = Vec::new();
    if let Err(e) = check_shape(d, states, &voter_ids) {
        violations.push(e.to_string());
        return CanonicalReport { valid: false, violations, cleric_checked: false };
    }
    structural_violations(d, "", &mut violations);
    let mut cleric_checked = false;
    let small = crate::swf::profile_count(states, voters, DEFAULT_PROFILE_BUDGET).is_ok();
    if let (CdDescription::Layered { cleric, .. }, true) = (d, small) {
        let alts = AltSet::standard(states).expect("shape-checked");
        match reconstruct(d, &alts, voters) {
            Ok(f) => {
                cleric_checked = true;
                if compute_cleric(&f).order().as_ref() != Some(cleric) {
                    violations.push(format!(
                        "cleric {} differs from the function's cleric {}",
                        cleric.canonical_string(),
                        compute_cleric(&f).relation.format(&alts)
                    ));
                }
            }
            Err(e) => violations.push(format!("reconstruction failed: {e}")),
        }
    }
    CanonicalReport { valid: violations.is_empty(), violations, cleric_checked }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedKind {
    /// Three alternatives, two voters: voter 0 dictates verbatim; when
    /// voter 0 is totally indifferent the output is `x=y=z` if voter 1 is
    /// too, else `x=y<z`. Dictatorial and Pareto but not IIA.
    Example1,
    /// Pairwise fixture on three alternatives, two voters: voter 0 decides
    /// strictly; a tie by voter 0 stays a tie when voter 1 also ties, and
    /// otherwise becomes `x<y`, `y<z` or `z<x` depending on the pair.
    Example2Pairwise,
    /// Voter 0 dictates, ties go to voter 1, and so on; all-tied is null.
    VerbatimDictatorChain { states: usize, voters: usize },
    NullSwf { states: usize, voters: usize },
    ConstantOrder { order: String, voters: usize },
}

impl NamedKind {
    pub fn parse(name: &str, states: usize, voters: usize) -> Result<NamedKind> {
        match name {
            "example1" => Ok(NamedKind::Example1),
            "example2" => Ok(NamedKind::Example2Pairwise),
            "dictator-chain" => Ok(NamedKind::VerbatimDictatorChain { states, voters }),
            "null" => Ok(NamedKind::NullSwf { states, voters }),
            other => match other.strip_prefix("constant:") {
                Some(order) => Ok(NamedKind::ConstantOrder { order: order.to_string(), voters }),
                None => Err(Error::Parse(format!("unknown named construction {other:?}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedFixture {
    Explicit(ExplicitSwf),
    Pairwise(PairwiseSwf),
}

impl NamedFixture {
    pub fn explicit(self) -> Result<ExplicitSwf> {
        match self {
            NamedFixture::Explicit(f) => Ok(f),
            NamedFixture::Pairwise(pw) => pw.to_explicit(),
        }
    }
}

fn xyz() -> AltSet {
    AltSet::new(["x", "y", "z"]).expect("valid labels")
}

pub fn build_named(kind: &NamedKind) -> Result<NamedFixture> {
    match kind {
        NamedKind::Example1 => {
            let alts = xyz();
            let space = OrderSpace::get(3)?;
            let all_equal = space.all_equal_index();
            let fallback = space.index_of(&WeakOrder::parse("x=y<z", &alts)?);
            let f = ExplicitSwf::from_fn(alts, 2, |d| {
                Ok(match (d[0] == all_equal, d[1] == all_equal) {
                    (false, _) => d[0],
                    (true, true) => all_equal,
                    (true, false) => fallback,
                })
            })?;
            Ok(NamedFixture::Explicit(f))
        }
        NamedKind::Example2Pairwise => {
            // Per pair (x,y), (x,z), (y,z): the output when voter 0 ties and
            // voter 1 does not.
            let disagreement = [PairRel::Less, PairRel::Greater, PairRel::Less];
            let tables = disagreement
                .iter()
                .map(|&when_split| {
                    let entries = (0..9)
                        .map(|i| {
                            let (r0, r1) = (PairRel::from_digit(i % 3), PairRel::from_digit(i / 3));
                            match (r0, r1) {
                                (PairRel::Equal, PairRel::Equal) => PairRel::Equal,
                                (PairRel::Equal, _) => when_split,
                                (strict, _) => strict,
                            }
                        })
                        .collect();
                    PairTable::new(2, entries)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(NamedFixture::Pairwise(PairwiseSwf::new(xyz(), 2, tables)?))
        }
        NamedKind::VerbatimDictatorChain { states, voters } => {
            let alts = AltSet::standard(*states)?;
            let space = OrderSpace::get(*states)?;
            let f = ExplicitSwf::from_fn(alts, *voters, |d| {
                // Lexicographic refinement: rank vectors compared voter by voter.
                let keys: Vec<Vec<usize>> =
                    (0..*states).map(|x| d.iter().map(|&o| space.order(o).rank(x)).collect()).collect();
                let mut sorted = keys.clone();
                sorted.sort();
                sorted.dedup();
                let ranks: Vec<usize> = keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect();
                Ok(space.index_of(&WeakOrder::from_ranks(&ranks)?))
            })?;
            Ok(NamedFixture::Explicit(f))
        }
        NamedKind::NullSwf { states, voters } => {
            Ok(NamedFixture::Explicit(ExplicitSwf::null(AltSet::standard(*states)?, *voters)?))
        }
        NamedKind::ConstantOrder { order, voters } => {
            let states = order.split(['<', '=']).count();
            let alts = AltSet::standard(states)?;
            let o = WeakOrder::parse(order, &alts)?;
            Ok(NamedFixture::Explicit(ExplicitSwf::constant(alts, *voters, &o)?))
        }
    }
}
