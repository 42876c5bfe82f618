//! Profiles and the two representations of a social welfare function.
//!
//! An [`ExplicitSwf`] is a dense table indexed by profile: the profile index
//! is the mixed-radix number of the voters' canonical order indices with
//! voter 0 most significant (so profiles enumerate lexicographically).
//! A [`PairwiseSwf`] holds one [`PairTable`] per unordered pair; a pair
//! table is indexed radix 3 over the voters' pair relations with voter 0
//! least significant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weak_orders::{
    pair_count, pair_index, pairs, AltSet, CompleteRelation, OrderSpace, PairRel, WeakOrder,
};

/// Default cap on the number of table entries (profiles) materialized.
pub const DEFAULT_PROFILE_BUDGET: u64 = 10_000_000;

/// One weak order per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    pub prefs: Vec<WeakOrder>,
}

impl Profile {
    pub fn new(prefs: Vec<WeakOrder>) -> Self {
        Profile { prefs }
    }

    pub fn voters(&self) -> usize {
        self.prefs.len()
    }

    pub fn format(&self, alts: &AltSet) -> Vec<String> {
        self.prefs.iter().map(|o| o.format(alts)).collect()
    }

    pub fn parse<S: AsRef<str>>(texts: &[S], alts: &AltSet) -> Result<Profile> {
        let prefs = texts.iter().map(|t| WeakOrder::parse(t.as_ref(), alts)).collect::<Result<_>>()?;
        Ok(Profile { prefs })
    }

    pub(crate) fn from_digits(space: &OrderSpace, digits: &[usize]) -> Profile {
        Profile { prefs: digits.iter().map(|&d| space.order(d).clone()).collect() }
    }
}

/// Number of profiles `|orders|^voters`, rejected when above `budget`.
pub fn profile_count(states: usize, voters: usize, budget: u64) -> Result<usize> {
    let base = OrderSpace::get(states)?.len() as u64;
    let mut total: u64 = 1;
    for _ in 0..voters {
        total = total.saturating_mul(base);
        if total > budget {
            return Err(Error::BudgetExceeded {
                needed: format!("{base}^{voters}"),
                budget,
            });
        }
    }
    Ok(total as usize)
}

#[inline]
pub(crate) fn decode_profile(mut index: usize, base: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
}

#[inline]
pub(crate) fn encode_profile(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Radix-3 index of a per-voter pair relation vector, voter 0 least significant.
#[inline]
pub fn pair_input_index(rels: impl DoubleEndedIterator<Item = PairRel>) -> usize {
    rels.rev().fold(0, |acc, r| acc * 3 + r.digit())
}

#[inline]
pub(crate) fn digits_pair_input(space: &OrderSpace, digits: &[usize], pair: usize) -> usize {
    pair_input_index(digits.iter().map(|&d| space.pair_rel(d, pair)))
}

/// Every profile over `alts` with `voters` voters, in index order.
pub fn enumerate_profiles(alts: &AltSet, voters: usize) -> Result<Vec<Profile>> {
    enumerate_profiles_with_budget(alts, voters, DEFAULT_PROFILE_BUDGET)
}

pub fn enumerate_profiles_with_budget(alts: &AltSet, voters: usize, budget: u64) -> Result<Vec<Profile>> {
    let space = OrderSpace::get(alts.len())?;
    let n = profile_count(alts.len(), voters, budget)?;
    let mut digits = vec![0; voters];
    Ok((0..n)
        .map(|i| {
            decode_profile(i, space.len(), &mut digits);
            Profile::from_digits(space, &digits)
        })
        .collect())
}

/// Total table from profiles to weak orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExplicitSwf {
    alts: AltSet,
    voters: usize,
    table: Vec<u16>,
}

impl ExplicitSwf {
    pub fn new(alts: AltSet, voters: usize, outputs: &[WeakOrder]) -> Result<Self> {
        let space = OrderSpace::get(alts.len())?;
        let n = profile_count(alts.len(), voters, DEFAULT_PROFILE_BUDGET)?;
        if outputs.len() != n {
            return Err(Error::ShapeMismatch(format!("expected {n} table entries, got {}", outputs.len())));
        }
        let mut table = Vec::with_capacity(n);
        for o in outputs {
            if o.len() != alts.len() {
                return Err(Error::ShapeMismatch("output order over the wrong alternatives".into()));
            }
            table.push(space.index_of(o) as u16);
        }
        Ok(ExplicitSwf { alts, voters, table })
    }

    /// Table of canonical order indices.
    pub fn from_indices(alts: AltSet, voters: usize, table: Vec<u16>) -> Result<Self> {
        let space = OrderSpace::get(alts.len())?;
        let n = profile_count(alts.len(), voters, DEFAULT_PROFILE_BUDGET)?;
        if table.len() != n {
            return Err(Error::ShapeMismatch(format!("expected {n} table entries, got {}", table.len())));
        }
        if table.iter().any(|&t| t as usize >= space.len()) {
            return Err(Error::ShapeMismatch("order index out of range".into()));
        }
        Ok(ExplicitSwf { alts, voters, table })
    }

    /// Tabulates `f(digits)`, which returns an order index.
    pub fn from_fn(alts: AltSet, voters: usize, mut f: impl FnMut(&[usize]) -> Result<usize>) -> Result<Self> {
        let space = OrderSpace::get(alts.len())?;
        let n = profile_count(alts.len(), voters, DEFAULT_PROFILE_BUDGET)?;
        let mut digits = vec![0; voters];
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            decode_profile(i, space.len(), &mut digits);
            table.push(f(&digits)? as u16);
        }
        Ok(ExplicitSwf { alts, voters, table })
    }

    pub fn constant(alts: AltSet, voters: usize, order: &WeakOrder) -> Result<Self> {
        if order.len() != alts.len() {
            return Err(Error::ShapeMismatch("constant order over the wrong alternatives".into()));
        }
        let idx = OrderSpace::get(alts.len())?.index_of(order);
        Self::from_fn(alts, voters, |_| Ok(idx))
    }

    pub fn null(alts: AltSet, voters: usize) -> Result<Self> {
        let order = WeakOrder::all_equal(alts.len())?;
        Self::constant(alts, voters, &order)
    }

    pub fn alts(&self) -> &AltSet {
        &self.alts
    }

    pub fn states(&self) -> usize {
        self.alts.len()
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn space(&self) -> &'static OrderSpace {
        OrderSpace::get(self.alts.len()).expect("validated at construction")
    }

    pub fn num_profiles(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    #[inline]
    pub fn output_index(&self, profile: usize) -> usize {
        self.table[profile] as usize
    }

    pub fn output(&self, profile: usize) -> &'static WeakOrder {
        self.space().order(self.output_index(profile))
    }

    /// Relation of `x` to `y` in the output for profile `profile`.
    #[inline]
    pub fn rel(&self, profile: usize, x: usize, y: usize) -> PairRel {
        self.space().rel(self.output_index(profile), x, y)
    }

    pub fn profile(&self, index: usize) -> Profile {
        let space = self.space();
        let mut digits = vec![0; self.voters];
        decode_profile(index, space.len(), &mut digits);
        Profile::from_digits(space, &digits)
    }

    pub fn profile_index(&self, p: &Profile) -> Result<usize> {
        if p.voters() != self.voters {
            return Err(Error::ShapeMismatch(format!(
                "profile has {} voters, function has {}",
                p.voters(),
                self.voters
            )));
        }
        let space = self.space();
        let mut digits = Vec::with_capacity(self.voters);
        for o in &p.prefs {
            if o.len() != self.states() {
                return Err(Error::ShapeMismatch("profile over the wrong alternatives".into()));
            }
            digits.push(space.index_of(o));
        }
        Ok(encode_profile(&digits, space.len()))
    }

    pub fn eval(&self, p: &Profile) -> Result<WeakOrder> {
        Ok(self.output(self.profile_index(p)?).clone())
    }

    pub fn to_json(&self) -> ExplicitSwfJson {
        let space = self.space();
        ExplicitSwfJson {
            alts: self.alts.names().to_vec(),
            voters: self.voters,
            table: self.table.iter().map(|&t| space.order(t as usize).format(&self.alts)).collect(),
        }
    }

    /// Canonical compact JSON; also the fingerprint of the table.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json(json: &ExplicitSwfJson) -> Result<Self> {
        let alts = AltSet::new(json.alts.iter().cloned())?;
        let space = OrderSpace::get(alts.len())?;
        let n = profile_count(alts.len(), json.voters, DEFAULT_PROFILE_BUDGET)?;
        if json.table.len() != n {
            return Err(Error::ShapeMismatch(format!("expected {n} table entries, got {}", json.table.len())));
        }
        let table = json
            .table
            .iter()
            .map(|t| WeakOrder::parse(t, &alts).map(|o| space.index_of(&o) as u16))
            .collect::<Result<_>>()?;
        Ok(ExplicitSwf { alts, voters: json.voters, table })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSwfJson {
    pub alts: Vec<String>,
    pub voters: usize,
    pub table: Vec<String>,
}

/// A single pair's function from the voters' relations on `(x, y)` to the
/// output relation on `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairTable {
    voters: usize,
    entries: Vec<PairRel>,
}

impl PairTable {
    pub fn new(voters: usize, entries: Vec<PairRel>) -> Result<Self> {
        let expected = 3usize
            .checked_pow(voters as u32)
            .ok_or_else(|| Error::Infeasible(format!("pair table over {voters} voters")))?;
        if entries.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "pair table over {voters} voters needs {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(PairTable { voters, entries })
    }

    pub fn constant(voters: usize, rel: PairRel) -> Result<Self> {
        Self::new(voters, vec![rel; 3usize.pow(voters as u32)])
    }

    /// Number of distinct tables over `voters` voters, `3^(3^voters)`, if it fits.
    pub fn space_size(voters: usize) -> Option<u64> {
        let entries = 3u32.checked_pow(voters as u32)?;
        3u64.checked_pow(entries)
    }

    /// The `n`-th table in lexicographic order of entry sequences
    /// (entry 0 most significant, `<` before `=` before `>`).
    pub fn nth(voters: usize, mut n: u64) -> Result<Self> {
        let len = 3usize.pow(voters as u32);
        let mut entries = vec![PairRel::Less; len];
        for e in entries.iter_mut().rev() {
            *e = PairRel::from_digit((n % 3) as usize);
            n /= 3;
        }
        if n != 0 {
            return Err(Error::ShapeMismatch("table number out of range".into()));
        }
        Self::new(voters, entries)
    }

    /// Inverse of [`PairTable::nth`].
    pub fn ordinal(&self) -> u64 {
        self.entries.iter().fold(0, |acc, r| acc * 3 + r.digit() as u64)
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn entries(&self) -> &[PairRel] {
        &self.entries
    }

    #[inline]
    pub fn get_index(&self, index: usize) -> PairRel {
        self.entries[index]
    }

    pub fn get(&self, rels: &[PairRel]) -> Result<PairRel> {
        if rels.len() != self.voters {
            return Err(Error::ShapeMismatch("wrong number of voter relations".into()));
        }
        Ok(self.entries[pair_input_index(rels.iter().copied())])
    }

    /// Per-voter relations encoded by input `index`.
    pub fn input(&self, mut index: usize) -> Vec<PairRel> {
        (0..self.voters)
            .map(|_| {
                let r = PairRel::from_digit(index % 3);
                index /= 3;
                r
            })
            .collect()
    }

    pub fn constant_value(&self) -> Option<PairRel> {
        let first = self.entries[0];
        self.entries.iter().all(|&e| e == first).then_some(first)
    }

    pub fn is_constant_strict(&self) -> bool {
        matches!(self.constant_value(), Some(PairRel::Less | PairRel::Greater))
    }

    /// The table for the reversed pair `(y, x)`.
    pub fn reversed(&self) -> PairTable {
        // reversing the pair reverses every voter's relation too
        let entries = (0..self.entries.len())
            .map(|i| {
                let rels = self.input(i);
                self.entries[pair_input_index(rels.into_iter().map(PairRel::reverse))].reverse()
            })
            .collect();
        PairTable { voters: self.voters, entries }
    }

    pub fn symbols(&self) -> Vec<String> {
        self.entries.iter().map(|r| r.symbol().to_string()).collect()
    }

    pub fn from_symbols<S: AsRef<str>>(voters: usize, symbols: &[S]) -> Result<Self> {
        let entries = symbols.iter().map(|s| PairRel::from_symbol(s.as_ref())).collect::<Result<_>>()?;
        Self::new(voters, entries)
    }
}

/// One [`PairTable`] per unordered pair `(x, y)`, `x < y`, in pair order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairwiseSwf {
    alts: AltSet,
    voters: usize,
    tables: Vec<PairTable>,
}

impl PairwiseSwf {
    pub fn new(alts: AltSet, voters: usize, tables: Vec<PairTable>) -> Result<Self> {
        if tables.len() != pair_count(alts.len()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} pair tables, got {}",
                pair_count(alts.len()),
                tables.len()
            )));
        }
        if tables.iter().any(|t| t.voters() != voters) {
            return Err(Error::ShapeMismatch("pair table voter count mismatch".into()));
        }
        Ok(PairwiseSwf { alts, voters, tables })
    }

    pub fn alts(&self) -> &AltSet {
        &self.alts
    }

    pub fn states(&self) -> usize {
        self.alts.len()
    }

    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn tables(&self) -> &[PairTable] {
        &self.tables
    }

    /// Table for `(x, y)` with `x < y`.
    pub fn table(&self, x: usize, y: usize) -> &PairTable {
        &self.tables[pair_index(x, y, self.states())]
    }

    pub(crate) fn combine_digits(&self, space: &OrderSpace, digits: &[usize]) -> CompleteRelation {
        let rels = (0..self.tables.len())
            .map(|p| self.tables[p].get_index(digits_pair_input(space, digits, p)))
            .collect();
        CompleteRelation::from_pair_rels(self.states(), rels).expect("one relation per pair")
    }

    /// Evaluates every pair table on `p`; the result need not be transitive.
    pub fn combine(&self, p: &Profile) -> Result<CompleteRelation> {
        if p.voters() != self.voters || p.prefs.iter().any(|o| o.len() != self.states()) {
            return Err(Error::ShapeMismatch("profile does not match the function".into()));
        }
        let rels = pairs(self.states())
            .into_iter()
            .zip(&self.tables)
            .map(|((x, y), t)| t.get_index(pair_input_index(p.prefs.iter().map(|o| o.rel(x, y)))))
            .collect();
        CompleteRelation::from_pair_rels(self.states(), rels)
    }

    /// Tabulates the function; fails on the first profile whose combined
    /// relation is intransitive.
    pub fn to_explicit(&self) -> Result<ExplicitSwf> {
        let space = OrderSpace::get(self.states())?;
        ExplicitSwf::from_fn(self.alts.clone(), self.voters, |digits| {
            let rel = self.combine_digits(space, digits);
            match rel.to_weak_order() {
                Some(o) => Ok(space.index_of(&o)),
                None => Err(Error::NotTransitive(Box::new(TransitivityViolation {
                    profile: Profile::from_digits(space, digits),
                    triple: rel.transitivity_violation().expect("intransitive"),
                    relation: rel,
                }))),
            }
        })
    }

    pub fn to_json(&self) -> PairwiseSwfJson {
        PairwiseSwfJson {
            alts: self.alts.names().to_vec(),
            voters: self.voters,
            pairs: pairs(self.states())
                .into_iter()
                .zip(&self.tables)
                .map(|((x, y), t)| PairEntryJson {
                    pair: [self.alts.label(x).to_string(), self.alts.label(y).to_string()],
                    table: t.symbols(),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    /// Pairs may be listed in any order and orientation; a table written
    /// for `(y, x)` is reversed into `(x, y)` form.
    pub fn from_json(json: &PairwiseSwfJson) -> Result<Self> {
        let alts = AltSet::new(json.alts.iter().cloned())?;
        let s = alts.len();
        let mut tables: Vec<Option<PairTable>> = vec![None; pair_count(s)];
        for entry in &json.pairs {
            let lookup = |l: &str| alts.index_of(l).ok_or_else(|| Error::UnknownAlternative(l.to_string()));
            let (a, b) = (lookup(&entry.pair[0])?, lookup(&entry.pair[1])?);
            if a == b {
                return Err(Error::Parse(format!("degenerate pair {:?}", entry.pair)));
            }
            let table = PairTable::from_symbols(json.voters, &entry.table)?;
            let (idx, table) = if a < b {
                (pair_index(a, b, s), table)
            } else {
                (pair_index(b, a, s), table.reversed())
            };
            if tables[idx].replace(table).is_some() {
                return Err(Error::Parse(format!("pair {:?} listed twice", entry.pair)));
            }
        }
        let tables = tables
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("missing pair tables".into()))?;
        Self::new(alts, json.voters, tables)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairwiseSwfJson {
    pub alts: Vec<String>,
    pub voters: usize,
    pub pairs: Vec<PairEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntryJson {
    pub pair: [String; 2],
    pub table: Vec<String>,
}

/// Two profiles that agree on `pair` but whose outputs do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IiaViolation {
    pub pair: (usize, usize),
    pub first: Profile,
    pub second: Profile,
}

impl IiaViolation {
    /// Re-derives the violation from `f` directly.
    pub fn recheck(&self, f: &ExplicitSwf) -> bool {
        let (x, y) = self.pair;
        let agree = self.first.voters() == self.second.voters()
            && self.first.prefs.iter().zip(&self.second.prefs).all(|(a, b)| a.rel(x, y) == b.rel(x, y));
        match (f.eval(&self.first), f.eval(&self.second)) {
            (Ok(a), Ok(b)) => agree && a.rel(x, y) != b.rel(x, y),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityViolation {
    pub profile: Profile,
    pub triple: (usize, usize, usize),
    pub relation: CompleteRelation,
}

/// Two extensions of the same restricted profile with different outputs
/// on the restricted alternatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionConflict {
    pub members: Vec<usize>,
    pub restricted: Profile,
    pub first: Profile,
    pub second: Profile,
}

/// Induced pairwise form; fails with a concrete violation if `f` is not IIA.
pub fn to_pairwise(f: &ExplicitSwf) -> Result<PairwiseSwf> {
    let space = f.space();
    let s = f.states();
    let np = pair_count(s);
    let inputs = 3usize.pow(f.voters() as u32);
    // (output relation, first profile that produced it)
    let mut seen: Vec<Option<(PairRel, usize)>> = vec![None; np * inputs];
    let mut digits = vec![0; f.voters()];
    for pi in 0..f.num_profiles() {
        decode_profile(pi, space.len(), &mut digits);
        let out = f.output_index(pi);
        for p in 0..np {
            let input = digits_pair_input(space, &digits, p);
            let rel = space.pair_rel(out, p);
            match seen[p * inputs + input] {
                None => seen[p * inputs + input] = Some((rel, pi)),
                Some((prev, _)) if prev == rel => {}
                Some((_, first)) => {
                    return Err(Error::NotIia(Box::new(IiaViolation {
                        pair: pairs(s)[p],
                        first: f.profile(first),
                        second: f.profile(pi),
                    })))
                }
            }
        }
    }
    let tables = (0..np)
        .map(|p| {
            let entries = seen[p * inputs..(p + 1) * inputs]
                .iter()
                .map(|e| e.expect("every pair input is realized by some profile").0)
                .collect();
            PairTable::new(f.voters(), entries)
        })
        .collect::<Result<_>>()?;
    PairwiseSwf::new(f.alts().clone(), f.voters(), tables)
}

/// `f|_A` for sorted, distinct `members`; fails if the restriction depends
/// on how a restricted profile is extended.
pub fn restrict_swf(f: &ExplicitSwf, members: &[usize]) -> Result<ExplicitSwf> {
    let sub_alts = f.alts().subset(members)?;
    if members.len() == f.states() {
        return Ok(f.clone());
    }
    let space = f.space();
    let sub_space = OrderSpace::get(members.len())?;
    let order_map: Vec<usize> = space
        .orders()
        .iter()
        .map(|o| sub_space.index_of(&o.restrict(members).expect("validated subset")))
        .collect();
    let n_sub = profile_count(members.len(), f.voters(), DEFAULT_PROFILE_BUDGET)?;
    let mut seen: Vec<Option<(u16, usize)>> = vec![None; n_sub];
    let mut digits = vec![0; f.voters()];
    for pi in 0..f.num_profiles() {
        decode_profile(pi, space.len(), &mut digits);
        for d in digits.iter_mut() {
            *d = order_map[*d];
        }
        let sub_index = encode_profile(&digits, sub_space.len());
        let out = order_map[f.output_index(pi)] as u16;
        match seen[sub_index] {
            None => seen[sub_index] = Some((out, pi)),
            Some((prev, _)) if prev == out => {}
            Some((_, first)) => {
                return Err(Error::NotWellDefined(Box::new(RestrictionConflict {
                    members: members.to_vec(),
                    restricted: Profile::from_digits(sub_space, &digits),
                    first: f.profile(first),
                    second: f.profile(pi),
                })))
            }
        }
    }
    let table = seen.into_iter().map(|e| e.expect("every restricted profile extends").0).collect();
    ExplicitSwf::from_indices(sub_alts, f.voters(), table)
}
