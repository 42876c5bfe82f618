//! Weak orders (ordered partitions) over a small, fixed set of alternatives.
//!
//! An order is written least-to-greatest: `a0=a2<a1` places `a0` and `a2`
//! together strictly below `a1`. Members of a block are listed by
//! alternative index.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported number of alternatives. `ordered_bell(6) = 4683`.
pub const MAX_STATES: usize = 6;

/// The alternatives of a computation, indexed `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AltSet {
    names: Vec<String>,
}

impl AltSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_STATES {
            return Err(Error::StatesOutOfRange(names.len()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.contains(['<', '=']) || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLabel(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(AltSet { names })
    }

    /// Default labels `a0..a{s-1}`.
    pub fn standard(s: usize) -> Result<Self> {
        Self::new((0..s).map(|i| format!("a{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label)
    }

    pub fn is_standard(&self) -> bool {
        self.names.iter().enumerate().all(|(i, n)| *n == format!("a{i}"))
    }

    /// The sub-alternative set for `members` (sorted, distinct indices).
    pub fn subset(&self, members: &[usize]) -> Result<AltSet> {
        validate_subset(members, self.len())?;
        Ok(AltSet { names: members.iter().map(|&m| self.names[m].clone()).collect() })
    }
}

pub(crate) fn validate_subset(members: &[usize], s: usize) -> Result<()> {
    if members.is_empty() {
        return Err(Error::EmptySubset);
    }
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse(format!("subset {members:?} must be sorted and distinct")));
    }
    if let Some(&bad) = members.iter().find(|&&m| m >= s) {
        return Err(Error::UnknownAlternative(bad.to_string()));
    }
    Ok(())
}

/// Relation of `x` to `y` for an ordered pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairRel {
    Less,
    Equal,
    Greater,
}

impl PairRel {
    pub const ALL: [PairRel; 3] = [PairRel::Less, PairRel::Equal, PairRel::Greater];

    pub fn reverse(self) -> PairRel {
        match self {
            PairRel::Less => PairRel::Greater,
            PairRel::Equal => PairRel::Equal,
            PairRel::Greater => PairRel::Less,
        }
    }

    /// Radix-3 digit: `<` = 0, `=` = 1, `>` = 2.
    pub fn digit(self) -> usize {
        self as usize
    }

    pub fn from_digit(d: usize) -> PairRel {
        Self::ALL[d]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PairRel::Less => "<",
            PairRel::Equal => "=",
            PairRel::Greater => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Result<PairRel> {
        match s {
            "<" => Ok(PairRel::Less),
            "=" => Ok(PairRel::Equal),
            ">" => Ok(PairRel::Greater),
            other => Err(Error::Parse(format!("bad pair relation symbol {other:?}"))),
        }
    }

    /// `x <= y` holds.
    pub fn is_le(self) -> bool {
        self != PairRel::Greater
    }

    pub fn is_strict(self) -> bool {
        self != PairRel::Equal
    }
}

impl fmt::Display for PairRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Number of unordered pairs over `s` alternatives.
pub fn pair_count(s: usize) -> usize {
    s * s.saturating_sub(1) / 2
}

/// Index of the pair `{x, y}` (`x < y`) in lexicographic pair order.
pub fn pair_index(x: usize, y: usize, s: usize) -> usize {
    debug_assert!(x < y && y < s);
    x * (2 * s - x - 1) / 2 + (y - x - 1)
}

/// All pairs `(x, y)` with `x < y`, in lexicographic order.
pub fn pairs(s: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(s));
    for x in 0..s {
        for y in x + 1..s {
            out.push((x, y));
        }
    }
    out
}

/// A complete transitive relation, stored as a block rank per alternative.
/// Ranks are contiguous from 0 (the least block).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakOrder {
    ranks: Vec<u8>,
}

impl WeakOrder {
    /// Builds an order from arbitrary rank values; ranks are compressed so
    /// equal values share a block and smaller values come first.
    pub fn from_ranks(ranks: &[usize]) -> Result<WeakOrder> {
        if ranks.is_empty() || ranks.len() > MAX_STATES {
            return Err(Error::StatesOutOfRange(ranks.len()));
        }
        let mut distinct: Vec<usize> = ranks.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = ranks
            .iter()
            .map(|r| distinct.binary_search(r).unwrap() as u8)
            .collect();
        Ok(WeakOrder { ranks })
    }

    /// Blocks are listed least to greatest and must partition `0..s`.
    pub fn from_blocks(blocks: &[Vec<usize>], s: usize) -> Result<WeakOrder> {
        if s == 0 || s > MAX_STATES {
            return Err(Error::StatesOutOfRange(s));
        }
        let mut ranks = vec![usize::MAX; s];
        for (r, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &m in block {
                if m >= s {
                    return Err(Error::UnknownAlternative(m.to_string()));
                }
                if ranks[m] != usize::MAX {
                    return Err(Error::Parse(format!("alternative {m} appears twice")));
                }
                ranks[m] = r;
            }
        }
        if ranks.contains(&usize::MAX) {
            return Err(Error::Parse("blocks do not cover every alternative".into()));
        }
        Self::from_ranks(&ranks)
    }

    pub fn all_equal(s: usize) -> Result<WeakOrder> {
        Self::from_ranks(&vec![0; s])
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[u8] {
        &self.ranks
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x] as usize
    }

    pub fn num_blocks(&self) -> usize {
        self.ranks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &r) in self.ranks.iter().enumerate() {
            blocks[r as usize].push(x);
        }
        blocks
    }

    pub fn is_all_equal(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn is_strict(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn pair_relation(&self, x: usize, y: usize) -> Result<PairRel> {
        let s = self.len();
        if x >= s {
            return Err(Error::UnknownAlternative(x.to_string()));
        }
        if y >= s {
            return Err(Error::UnknownAlternative(y.to_string()));
        }
        Ok(self.rel(x, y))
    }

    /// Unchecked [`WeakOrder::pair_relation`].
    #[inline]
    pub fn rel(&self, x: usize, y: usize) -> PairRel {
        self.ranks[x].cmp(&self.ranks[y]).into()
    }

    /// The order induced on `members` (sorted, distinct), indexed by position
    /// within `members`.
    pub fn restrict(&self, members: &[usize]) -> Result<WeakOrder> {
        validate_subset(members, self.len())?;
        let ranks: Vec<usize> = members.iter().map(|&m| self.rank(m)).collect();
        Self::from_ranks(&ranks)
    }

    pub fn reversed(&self) -> WeakOrder {
        let top = self.num_blocks() - 1;
        WeakOrder { ranks: self.ranks.iter().map(|&r| top as u8 - r).collect() }
    }

    pub fn to_relation(&self) -> CompleteRelation {
        CompleteRelation::from_fn(self.len(), |x, y| self.rel(x, y))
    }

    pub fn format(&self, alts: &AltSet) -> String {
        assert_eq!(alts.len(), self.len(), "order and alternative set differ in size");
        self.blocks()
            .iter()
            .map(|b| b.iter().map(|&m| alts.label(m)).collect::<Vec<_>>().join("="))
            .collect::<Vec<_>>()
            .join("<")
    }

    /// Canonical string under the default labels.
    pub fn canonical_string(&self) -> String {
        self.format(&AltSet::standard(self.len()).expect("size already validated"))
    }

    pub fn parse(text: &str, alts: &AltSet) -> Result<WeakOrder> {
        let mut blocks = Vec::new();
        for block in text.split('<') {
            let mut members = Vec::new();
            for label in block.split('=') {
                let idx = alts
                    .index_of(label)
                    .ok_or_else(|| Error::UnknownAlternative(label.to_string()))?;
                members.push(idx);
            }
            blocks.push(members);
        }
        Self::from_blocks(&blocks, alts.len())
            .map_err(|e| Error::Parse(format!("weak order {text:?}: {e}")))
    }
}

impl From<std::cmp::Ordering> for PairRel {
    fn from(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => PairRel::Less,
            std::cmp::Ordering::Equal => PairRel::Equal,
            std::cmp::Ordering::Greater => PairRel::Greater,
        }
    }
}

/// A complete (not necessarily transitive) relation, one [`PairRel`] per
/// unordered pair stored for `(x, y)` with `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteRelation {
    s: usize,
    rels: Vec<PairRel>,
}

impl CompleteRelation {
    pub fn from_fn(s: usize, mut f: impl FnMut(usize, usize) -> PairRel) -> Self {
        let rels = pairs(s).into_iter().map(|(x, y)| f(x, y)).collect();
        CompleteRelation { s, rels }
    }

    /// From relations listed in [`pairs`] order.
    pub fn from_pair_rels(s: usize, rels: Vec<PairRel>) -> Result<Self> {
        if rels.len() != pair_count(s) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} pair relations, got {}",
                pair_count(s),
                rels.len()
            )));
        }
        Ok(CompleteRelation { s, rels })
    }

    pub fn len(&self) -> usize {
        self.s
    }

    pub fn is_empty(&self) -> bool {
        self.s == 0
    }

    pub fn pair_rels(&self) -> &[PairRel] {
        &self.rels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> PairRel {
        use std::cmp::Ordering::*;
        match x.cmp(&y) {
            Equal => PairRel::Equal,
            Less => self.rels[pair_index(x, y, self.s)],
            Greater => self.rels[pair_index(y, x, self.s)].reverse(),
        }
    }

    /// First triple `(x, y, z)` (lexicographically) with `x <= y`, `y <= z`
    /// but not `x <= z`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let s = self.s;
        for x in 0..s {
            for y in 0..s {
                if !self.get(x, y).is_le() {
                    continue;
                }
                for z in 0..s {
                    if self.get(y, z).is_le() && !self.get(x, z).is_le() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    pub fn to_weak_order(&self) -> Option<WeakOrder> {
        if !self.is_transitive() {
            return None;
        }
        let ranks: Vec<usize> = (0..self.s)
            .map(|x| (0..self.s).filter(|&y| self.get(y, x) == PairRel::Less).count())
            .collect();
        WeakOrder::from_ranks(&ranks).ok()
    }

    pub fn format(&self, alts: &AltSet) -> String {
        pairs(self.s)
            .into_iter()
            .zip(&self.rels)
            .map(|((x, y), r)| format!("{}{}{}", alts.label(x), r, alts.label(y)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// All weak orders over `s` alternatives in canonical order, with dense
/// lookup tables for the hot loops.
#[derive(Debug)]
pub struct OrderSpace {
    s: usize,
    orders: Vec<WeakOrder>,
    lookup: Vec<u16>,
    rel_table: Vec<PairRel>,
}

impl OrderSpace {
    pub fn get(s: usize) -> Result<&'static OrderSpace> {
        static SPACES: [OnceLock<OrderSpace>; MAX_STATES] =
            [const { OnceLock::new() }; MAX_STATES];
        if s == 0 || s > MAX_STATES {
            return Err(Error::StatesOutOfRange(s));
        }
        Ok(SPACES[s - 1].get_or_init(|| OrderSpace::build(s)))
    }

    fn build(s: usize) -> OrderSpace {
        let mut orders = Vec::new();
        let mut ranks = vec![0usize; s];
        loop {
            let mut used = vec![false; s];
            for &r in &ranks {
                used[r] = true;
            }
            let k = used.iter().filter(|&&u| u).count();
            if used[..k].iter().all(|&u| u) {
                orders.push(WeakOrder::from_ranks(&ranks).unwrap());
            }
            // odometer over {0..s-1}^s
            let mut i = 0;
            loop {
                if i == s {
                    break;
                }
                ranks[i] += 1;
                if ranks[i] < s {
                    break;
                }
                ranks[i] = 0;
                i += 1;
            }
            if i == s {
                break;
            }
        }
        orders.sort_by_cached_key(|o| o.canonical_string());

        let mut lookup = vec![u16::MAX; s.pow(s as u32)];
        for (idx, o) in orders.iter().enumerate() {
            lookup[Self::code(o.ranks(), s)] = idx as u16;
        }
        let np = pair_count(s);
        let mut rel_table = Vec::with_capacity(orders.len() * np);
        for o in &orders {
            for (x, y) in pairs(s) {
                rel_table.push(o.rel(x, y));
            }
        }
        OrderSpace { s, orders, lookup, rel_table }
    }

    fn code(ranks: &[u8], s: usize) -> usize {
        ranks.iter().rev().fold(0, |acc, &r| acc * s + r as usize)
    }

    pub fn states(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn order(&self, index: usize) -> &WeakOrder {
        &self.orders[index]
    }

    pub fn index_of(&self, order: &WeakOrder) -> usize {
        debug_assert_eq!(order.len(), self.s);
        self.lookup[Self::code(order.ranks(), self.s)] as usize
    }

    /// Relation of `x` to `y` in order `index`.
    #[inline]
    pub fn rel(&self, index: usize, x: usize, y: usize) -> PairRel {
        use std::cmp::Ordering::*;
        match x.cmp(&y) {
            Equal => PairRel::Equal,
            Less => self.rel_table[index * pair_count(self.s) + pair_index(x, y, self.s)],
            Greater => {
                self.rel_table[index * pair_count(self.s) + pair_index(y, x, self.s)].reverse()
            }
        }
    }

    /// Relation for the pair with index `pair` (see [`pairs`]).
    #[inline]
    pub fn pair_rel(&self, index: usize, pair: usize) -> PairRel {
        self.rel_table[index * pair_count(self.s) + pair]
    }

    pub fn all_equal_index(&self) -> usize {
        self.index_of(&WeakOrder::all_equal(self.s).unwrap())
    }
}

/// Every weak order over `alts`, in canonical order.
pub fn enumerate_weak_orders(alts: &AltSet) -> Result<Vec<WeakOrder>> {
    Ok(OrderSpace::get(alts.len())?.orders().to_vec())
}

/// Ordered Bell (Fubini) number: `a(n) = sum_{k=1..n} C(n,k) a(n-k)`, `a(0) = 1`.
pub fn ordered_bell(n: usize) -> BigUint {
    let mut a: Vec<BigUint> = vec![BigUint::one()];
    // row of Pascal's triangle, updated in place
    let mut binom: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        binom.push(BigUint::zero());
        for k in (1..=m).rev() {
            let prev = binom[k - 1].clone();
            binom[k] += prev;
        }
        let mut total = BigUint::zero();
        for k in 1..=m {
            total += &binom[k] * &a[m - k];
        }
        a.push(total);
    }
    a.swap_remove(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> AltSet {
        AltSet::new(["x", "y", "z"]).unwrap()
    }

    #[test]
    fn ordered_bell_values() {
        let expected = [1u32, 1, 3, 13, 75, 541, 4683, 47293];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(ordered_bell(n), BigUint::from(e), "n = {n}");
        }
    }

    #[test]
    fn enumeration_sizes_match_ordered_bell() {
        for s in 1..=MAX_STATES {
            let orders = enumerate_weak_orders(&AltSet::standard(s).unwrap()).unwrap();
            assert_eq!(BigUint::from(orders.len()), ordered_bell(s));
            let distinct: HashSet<_> = orders.iter().collect();
            assert_eq!(distinct.len(), orders.len());
            for o in &orders {
                assert!(o.to_relation().is_transitive());
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_by_canonical_string() {
        let orders = OrderSpace::get(3).unwrap().orders();
        let strings: Vec<String> = orders.iter().map(WeakOrder::canonical_string).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
        assert_eq!(strings[0], "a0<a1<a2");
        assert_eq!(strings.last().unwrap(), "a2<a1<a0");
    }

    #[test]
    fn size_out_of_range() {
        assert!(matches!(AltSet::standard(0), Err(Error::StatesOutOfRange(0))));
        assert!(matches!(AltSet::standard(7), Err(Error::StatesOutOfRange(7))));
        assert!(OrderSpace::get(7).is_err());
    }

    #[test]
    fn labels_are_validated() {
        assert!(matches!(AltSet::new(["x", "x"]), Err(Error::DuplicateLabel(_))));
        assert!(matches!(AltSet::new(["x<", "y"]), Err(Error::InvalidLabel(_))));
        assert!(matches!(AltSet::new(["x", "y=z"]), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn pair_relation_examples() {
        let alts = xyz();
        let o = WeakOrder::parse("x=y<z", &alts).unwrap();
        assert_eq!(o.pair_relation(0, 1).unwrap(), PairRel::Equal);
        assert_eq!(o.pair_relation(0, 2).unwrap(), PairRel::Less);
        assert_eq!(o.pair_relation(2, 0).unwrap(), PairRel::Greater);
        assert!(matches!(o.pair_relation(0, 3), Err(Error::UnknownAlternative(_))));
    }

    #[test]
    fn restrict_examples() {
        let alts = xyz();
        let cases = [("x<y=z", vec![1, 2], "y=z"), ("x<y<z", vec![0, 2], "x<z"), ("x=y=z", vec![0, 1], "x=y")];
        for (text, subset, expected) in cases {
            let o = WeakOrder::parse(text, &alts).unwrap();
            let sub = alts.subset(&subset).unwrap();
            assert_eq!(o.restrict(&subset).unwrap().format(&sub), expected);
        }
        let o = WeakOrder::parse("x<y<z", &alts).unwrap();
        assert!(matches!(o.restrict(&[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn intransitive_relations() {
        use PairRel::*;
        // pairs order: (x,y), (x,z), (y,z)
        let cycle = CompleteRelation::from_pair_rels(3, vec![Less, Greater, Less]).unwrap();
        assert_eq!(cycle.transitivity_violation(), Some((0, 1, 2)));
        assert!(cycle.to_weak_order().is_none());

        let broken = CompleteRelation::from_pair_rels(3, vec![Equal, Less, Equal]).unwrap();
        assert!(!broken.is_transitive());
        let (x, y, z) = broken.transitivity_violation().unwrap();
        assert!(broken.get(x, y).is_le() && broken.get(y, z).is_le() && !broken.get(x, z).is_le());
    }

    #[test]
    fn parse_rejects_bad_input() {
        let alts = xyz();
        for bad in ["x<y", "x<y<z<x", "x<w<z", "x<<y=z", ""] {
            assert!(WeakOrder::parse(bad, &alts).is_err(), "{bad:?}");
        }
        // non-canonical member order is accepted and normalized
        let o = WeakOrder::parse("z=x<y", &alts).unwrap();
        assert_eq!(o.format(&alts), "x=z<y");
    }

    #[test]
    fn space_lookup_is_inverse() {
        for s in 1..=MAX_STATES {
            let space = OrderSpace::get(s).unwrap();
            for (i, o) in space.orders().iter().enumerate() {
                assert_eq!(space.index_of(o), i);
            }
        }
    }

    fn arb_order(s: usize) -> impl Strategy<Value = WeakOrder> {
        let n = OrderSpace::get(s).unwrap().len();
        (0..n).prop_map(move |i| OrderSpace::get(s).unwrap().order(i).clone())
    }

    fn arb_order_and_subset() -> impl Strategy<Value = (WeakOrder, Vec<usize>)> {
        (1..=MAX_STATES).prop_flat_map(|s| {
            (arb_order(s), proptest::collection::btree_set(0..s, 1..=s))
                .prop_map(|(o, set)| (o, set.into_iter().collect()))
        })
    }

    proptest! {
        #[test]
        fn restrict_commutes_with_pair_relation((order, subset) in arb_order_and_subset()) {
            let r = order.restrict(&subset).unwrap();
            for (i, &x) in subset.iter().enumerate() {
                for (j, &y) in subset.iter().enumerate() {
                    prop_assert_eq!(r.rel(i, j), order.rel(x, y));
                }
            }
        }

        #[test]
        fn canonical_string_round_trips(order in (1..=MAX_STATES).prop_flat_map(arb_order)) {
            let alts = AltSet::standard(order.len()).unwrap();
            let text = order.format(&alts);
            let back = WeakOrder::parse(&text, &alts).unwrap();
            prop_assert_eq!(back.format(&alts), text);
            prop_assert_eq!(back, order);
        }

        #[test]
        fn relation_reversal(order in (1..=MAX_STATES).prop_flat_map(arb_order)) {
            for x in 0..order.len() {
                for y in 0..order.len() {
                    prop_assert_eq!(order.rel(x, y), order.rel(y, x).reverse());
                }
            }
            prop_assert_eq!(order.to_relation().to_weak_order(), Some(order));
        }
    }
}
