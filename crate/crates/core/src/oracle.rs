//! Ground truth by exhaustive search.
//!
//! An IIA function is determined by one pair table per pair of
//! alternatives, and any assignment of tables whose combination is
//! transitive on every profile is an IIA function. The oracle walks that
//! space pair by pair and abandons a branch as soon as some triple whose
//! three pairs are all assigned is intransitive on some profile.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::construct::{enumerate_descriptions, EnumerationFilter, DEFAULT_DESCRIPTION_BUDGET};
use crate::decompose::reconstruct;
use crate::error::{Error, Result};
use crate::swf::{decode_profile, profile_count, ExplicitSwf, PairTable, DEFAULT_PROFILE_BUDGET};
use crate::weak_orders::{pair_count, pair_index, AltSet, CompleteRelation, OrderSpace, PairRel};

/// Upper bound on the number of raw table assignments the oracle accepts.
pub const ORACLE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    #[default]
    Pruned,
    /// Full assignments only, checked at the end. Slow; used to confirm
    /// that pruning loses nothing.
    Unpruned,
}

/// All IIA functions found, as explicit output-index tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub alts: AltSet,
    pub voters: usize,
    pub tables: BTreeSet<Vec<u16>>,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.tables.len()
    }

    pub fn swfs(&self) -> impl Iterator<Item = ExplicitSwf> + '_ {
        self.tables
            .iter()
            .map(|t| ExplicitSwf::from_indices(self.alts.clone(), self.voters, t.clone()).expect("oracle tables are valid"))
    }
}

/// Raw search-space size `(3^(3^voters))^(pairs)`, if it fits in a u64.
pub fn search_space(states: usize, voters: usize) -> Option<u64> {
    let per_pair = PairTable::space_size(voters)?;
    per_pair.checked_pow(pair_count(states) as u32)
}

struct Search {
    states: usize,
    space: &'static OrderSpace,
    num_profiles: usize,
    table_space: u64,
    voters: usize,
    /// `inputs[pair][profile]`: index of the voters' relations on the pair.
    inputs: Vec<Vec<usize>>,
    /// Triples `(xy, xz, yz)` whose last pair (in pair order) is the key.
    closing: Vec<Vec<[usize; 3]>>,
    transitive: [bool; 27],
}

impl Search {
    fn new(states: usize, voters: usize) -> Result<Search> {
        let space = OrderSpace::get(states)?;
        let num_profiles = profile_count(states, voters, DEFAULT_PROFILE_BUDGET)?;
        let np = pair_count(states);
        let mut inputs = vec![Vec::with_capacity(num_profiles); np];
        let mut digits = vec![0; voters];
        for pi in 0..num_profiles {
            decode_profile(pi, space.len(), &mut digits);
            for (p, row) in inputs.iter_mut().enumerate() {
                row.push(crate::swf::pair_input_index(digits.iter().map(|&d| space.pair_rel(d, p))));
            }
        }
        let mut closing = vec![Vec::new(); np];
        for x in 0..states {
            for y in x + 1..states {
                for z in y + 1..states {
                    let t = [pair_index(x, y, states), pair_index(x, z, states), pair_index(y, z, states)];
                    closing[t[2]].push(t);
                }
            }
        }
        let mut transitive = [false; 27];
        for (code, slot) in transitive.iter_mut().enumerate() {
            let rels = vec![PairRel::from_digit(code % 3), PairRel::from_digit(code / 3 % 3), PairRel::from_digit(code / 9)];
            *slot = CompleteRelation::from_pair_rels(3, rels).expect("three pairs").is_transitive();
        }
        Ok(Search {
            states,
            space,
            num_profiles,
            table_space: PairTable::space_size(voters).expect("feasibility-checked"),
            voters,
            inputs,
            closing,
            transitive,
        })
    }

    fn triple_ok(&self, tables: &[PairTable], triple: &[usize; 3]) -> bool {
        (0..self.num_profiles).all(|pi| {
            let code: usize = triple
                .iter()
                .rev()
                .fold(0, |acc, &p| acc * 3 + tables[p].get_index(self.inputs[p][pi]).digit());
            self.transitive[code]
        })
    }

    fn to_table(&self, tables: &[PairTable]) -> Vec<u16> {
        (0..self.num_profiles)
            .map(|pi| {
                let rels = (0..tables.len()).map(|p| tables[p].get_index(self.inputs[p][pi])).collect();
                let order = CompleteRelation::from_pair_rels(self.states, rels)
                    .expect("pair count")
                    .to_weak_order()
                    .expect("transitive by search");
                self.space.index_of(&order) as u16
            })
            .collect()
    }

    fn descend(&self, tables: &mut Vec<PairTable>, mode: SearchMode, out: &mut Vec<Vec<u16>>) {
        let np = pair_count(self.states);
        let p = tables.len();
        if p == np {
            if mode == SearchMode::Unpruned && !self.closing.iter().flatten().all(|t| self.triple_ok(tables, t)) {
                return;
            }
            out.push(self.to_table(tables));
            return;
        }
        for n in 0..self.table_space {
            tables.push(PairTable::nth(self.voters, n).expect("in range"));
            if mode == SearchMode::Unpruned || self.closing[p].iter().all(|t| self.triple_ok(tables, t)) {
                self.descend(tables, mode, out);
            }
            tables.pop();
        }
    }
}

/// Every IIA function on `alts` with `voters` voters.
pub fn brute_force_iia(alts: &AltSet, voters: usize, mode: SearchMode) -> Result<OracleResult> {
    let states = alts.len();
    match search_space(states, voters) {
        Some(n) if n <= ORACLE_BUDGET => {}
        _ => {
            return Err(Error::Infeasible(format!(
                "oracle search over {states} alternatives and {voters} voters exceeds {ORACLE_BUDGET} assignments"
            )))
        }
    }
    let search = Search::new(states, voters)?;
    let tables: BTreeSet<Vec<u16>> = if pair_count(states) == 0 {
        std::iter::once(vec![0u16; search.num_profiles]).collect()
    } else {
        (0..search.table_space)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                let mut tables = vec![PairTable::nth(voters, first).expect("in range")];
                search.descend(&mut tables, mode, &mut out);
                out
            })
            .collect()
    };
    Ok(OracleResult { alts: alts.clone(), voters, tables })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub oracle_count: usize,
    /// Length of the description stream.
    pub construct_count: usize,
    /// Distinct functions among the reconstructed descriptions.
    pub construct_distinct: usize,
    pub only_in_oracle: Option<ExplicitSwf>,
    pub only_in_construct: Option<ExplicitSwf>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.only_in_oracle.is_none()
            && self.only_in_construct.is_none()
            && self.construct_distinct == self.construct_count
    }
}

/// Reconstructs every canonical description, in stream order.
pub fn reconstruct_all(alts: &AltSet, voters: usize, filter: EnumerationFilter) -> Result<Vec<ExplicitSwf>> {
    let descriptions: Vec<_> = enumerate_descriptions(alts.len(), voters, filter, DEFAULT_DESCRIPTION_BUDGET)?.collect();
    descriptions.par_iter().map(|d| reconstruct(d, alts, voters)).collect()
}

/// Checks that the oracle's set equals the set of reconstructed canonical
/// descriptions, reporting one witness from each side of any difference.
pub fn compare_with_construct(alts: &AltSet, voters: usize) -> Result<Comparison> {
    let oracle = brute_force_iia(alts, voters, SearchMode::Pruned)?;
    let built = reconstruct_all(alts, voters, EnumerationFilter::All)?;
    let construct_count = built.len();
    let built: BTreeSet<Vec<u16>> = built.into_iter().map(|f| f.table().to_vec()).collect();
    let to_swf = |t: &Vec<u16>| ExplicitSwf::from_indices(alts.clone(), voters, t.clone()).expect("valid table");
    Ok(Comparison {
        oracle_count: oracle.count(),
        construct_count,
        construct_distinct: built.len(),
        only_in_oracle: oracle.tables.difference(&built).next().map(to_swf),
        only_in_construct: built.difference(&oracle.tables).next().map(to_swf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_iia;

    #[test]
    fn small_counts() {
        let two = AltSet::standard(2).unwrap();
        assert_eq!(brute_force_iia(&two, 0, SearchMode::Pruned).unwrap().count(), 3);
        assert_eq!(brute_force_iia(&two, 1, SearchMode::Pruned).unwrap().count(), 27);
        let three = AltSet::standard(3).unwrap();
        assert_eq!(brute_force_iia(&three, 0, SearchMode::Pruned).unwrap().count(), 13);
        let one = AltSet::standard(1).unwrap();
        assert_eq!(brute_force_iia(&one, 2, SearchMode::Pruned).unwrap().count(), 1);
    }

    #[test]
    fn pruning_is_sound() {
        for (s, v) in [(2, 1), (3, 0), (4, 0)] {
            let alts = AltSet::standard(s).unwrap();
            assert_eq!(
                brute_force_iia(&alts, v, SearchMode::Pruned).unwrap(),
                brute_force_iia(&alts, v, SearchMode::Unpruned).unwrap()
            );
        }
    }

    #[test]
    fn members_are_iia() {
        let alts = AltSet::standard(3).unwrap();
        let result = brute_force_iia(&alts, 1, SearchMode::Pruned).unwrap();
        assert_eq!(result.count(), 183);
        assert!(result.swfs().all(|f| check_iia(&f).holds));
    }

    #[test]
    fn infeasible_sizes_rejected() {
        let alts = AltSet::standard(3).unwrap();
        assert!(matches!(brute_force_iia(&alts, 2, SearchMode::Pruned), Err(Error::Infeasible(_))));
        let alts = AltSet::standard(2).unwrap();
        assert!(matches!(brute_force_iia(&alts, 3, SearchMode::Pruned), Err(Error::Infeasible(_))));
    }

    #[test]
    fn comparison_on_two_alternatives() {
        let alts = AltSet::standard(2).unwrap();
        let c = compare_with_construct(&alts, 0).unwrap();
        assert!(c.equal());
        assert_eq!((c.oracle_count, c.construct_count), (3, 3));
    }
}
