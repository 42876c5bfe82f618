//! Invariants checked on random inputs, and counts checked against
//! independent formulas written out here.

use std::sync::OnceLock;

use iia_core::axioms::{check_cs, check_iia, check_wpp, compute_cleric, find_dictator, is_null, Direction};
use iia_core::construct::{
    build_named, enumerate_descriptions, validate_canonical, EnumerationFilter, NamedKind, DEFAULT_DESCRIPTION_BUDGET,
};
use iia_core::count::{p, q, r};
use iia_core::decompose::{build_chain, decompose, evaluate_description, reconstruct, CdDescription, ClassRuling};
use iia_core::swf::{restrict_swf, to_pairwise, ExplicitSwf, PairTable, PairwiseSwf, Profile};
use iia_core::weak_orders::{ordered_bell, AltSet, OrderSpace, PairRel};
use iia_core::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn q2(v: usize) -> BigUint {
    big(3).pow(3u32.pow(v as u32))
}

fn q3_closed(v: usize) -> BigUint {
    let tail = if v == 0 { big(1) } else { big(1) + big(2 * v as u64) * q3_closed(v - 1) };
    big(6) + big(6) * (q2(v) - 2u32) + tail
}

fn q4_closed(v: usize) -> BigUint {
    let h2 = q2(v) - 2u32;
    let (h3, h4) = if v == 0 {
        (big(1), big(1))
    } else {
        (big(1) + big(2 * v as u64) * q3_closed(v - 1), big(2 * v as u64) * q4_closed(v - 1) + 1u32)
    };
    big(24) + big(36) * &h2 + big(6) * &h2 * &h2 + big(8) * h3 + h4
}

/// Sum over every ordered partition, listed explicitly as compositions.
fn q_by_compositions(s: usize, v: usize) -> BigUint {
    fn h(k: usize, v: usize) -> BigUint {
        match k {
            1 => big(1),
            2 => q2(v) - 2u32,
            _ if v == 0 => big(1),
            _ => big(1) + big(2 * v as u64) * q_by_compositions(k, v - 1),
        }
    }
    fn factorial(n: usize) -> BigUint {
        (1..=n as u64).map(BigUint::from).product()
    }
    fn go(rest: usize, s: usize, v: usize, parts: &mut Vec<usize>, acc: &mut BigUint) {
        if rest == 0 {
            let mut term = factorial(s);
            for &k in parts.iter() {
                term = term / factorial(k) * h(k, v);
            }
            *acc += term;
            return;
        }
        for k in 1..=rest {
            parts.push(k);
            go(rest - k, s, v, parts, acc);
            parts.pop();
        }
    }
    if s <= 2 {
        return if s == 2 { q2(v) } else { big(1) };
    }
    let mut acc = BigUint::default();
    go(s, s, v, &mut Vec::new(), &mut acc);
    acc
}

#[test]
fn general_count_matches_closed_forms() {
    for v in 0..=4 {
        assert_eq!(q(3, v), q3_closed(v), "q3 v={v}");
        assert_eq!(q(4, v), q4_closed(v), "q4 v={v}");
    }
    for s in 1..=7 {
        for v in 0..=3 {
            assert_eq!(q(s, v), q_by_compositions(s, v), "s={s} v={v}");
        }
    }
}

#[test]
fn known_small_values() {
    assert_eq!(q(3, 0), big(13));
    assert_eq!(q(2, 0), big(3));
    assert_eq!(q(2, 1), big(27));
    assert_eq!(q(4, 1), big(5041));
    assert_eq!(q(3, 2), big(118825));
    assert_eq!(r(3, 0).unwrap(), big(13));
    assert_eq!(p(3, 0).unwrap(), big(1));
    assert_eq!(p(2, 1).unwrap(), big(25));
    for s in 1..=6 {
        assert_eq!(q(s, 0), ordered_bell(s));
    }
    assert_eq!(ordered_bell(3), big(13));
    assert_eq!(ordered_bell(5), big(541));
}

#[test]
fn dominant_addends() {
    // Ratios of the dominant addend to the total increase toward 1.
    let ratio = |num: BigUint, den: BigUint| {
        let scale = den.bits().saturating_sub(60);
        (num >> scale).to_string().parse::<f64>().unwrap() / (den >> scale).to_string().parse::<f64>().unwrap()
    };
    let q3: Vec<f64> = (1..=4).map(|v| ratio(big(6) * (q2(v) - 2u32), q(3, v))).collect();
    let q4: Vec<f64> = (1..=4).map(|v| ratio(big(6) * (q2(v) - 2u32).pow(2), q(4, v))).collect();
    for w in [q3, q4] {
        assert!(w.windows(2).all(|p| p[0] < p[1]), "{w:?}");
        assert!(1.0 - w[3] < 1e-6, "{w:?}");
    }
}

#[test]
fn two_alternative_pareto_counts_by_brute_force() {
    for v in 0..=2 {
        let size = PairTable::space_size(v).unwrap();
        let wpp = (0..size)
            .map(|n| PairTable::nth(v, n).unwrap())
            .filter(|t| {
                v == 0
                    || (t.get(&vec![PairRel::Less; v]).unwrap() == PairRel::Less
                        && t.get(&vec![PairRel::Greater; v]).unwrap() == PairRel::Greater)
            })
            .count();
        assert_eq!(BigUint::from(wpp), r(2, v).unwrap(), "v={v}");
    }
}

fn descriptions_32() -> &'static Vec<CdDescription> {
    static D: OnceLock<Vec<CdDescription>> = OnceLock::new();
    D.get_or_init(|| {
        enumerate_descriptions(3, 2, EnumerationFilter::All, DEFAULT_DESCRIPTION_BUDGET).unwrap().collect()
    })
}

fn xyz() -> AltSet {
    AltSet::new(["x", "y", "z"]).unwrap()
}

#[test]
fn example_one_restrictions() {
    let f = build_named(&NamedKind::Example1).unwrap().explicit().unwrap();
    // Voter 0 indifferent always puts x and y together, so {x, y} is fine.
    let xy = restrict_swf(&f, &[0, 1]).unwrap();
    assert_eq!(find_dictator(&xy).dictator, Some((0, Direction::Verbatim)));
    assert!(matches!(restrict_swf(&f, &[0, 2]), Err(Error::NotWellDefined(_))));
    match restrict_swf(&f, &[1, 2]) {
        Err(Error::NotWellDefined(c)) => assert_ne!(c.first, c.second),
        other => panic!("{other:?}"),
    }
}

#[test]
fn example_two_shapes() {
    let pw = match build_named(&NamedKind::Example2Pairwise).unwrap() {
        iia_core::construct::NamedFixture::Pairwise(pw) => pw,
        _ => unreachable!(),
    };
    assert!(iia_core::axioms::check_wpp_pairwise(&pw));
    let text = pw.to_json_string();
    assert_eq!(PairwiseSwf::from_json_str(&text).unwrap(), pw);
}

#[test]
fn verbatim_chain_decomposes_to_nested_dictators() {
    let f = build_named(&NamedKind::VerbatimDictatorChain { states: 3, voters: 2 }).unwrap().explicit().unwrap();
    let null = CdDescription::Layered {
        cleric: iia_core::weak_orders::WeakOrder::all_equal(3).unwrap(),
        rulings: vec![ClassRuling::Null],
    };
    let inner = CdDescription::Layered {
        cleric: iia_core::weak_orders::WeakOrder::all_equal(3).unwrap(),
        rulings: vec![ClassRuling::Dictator { voter: 1, direction: Direction::Verbatim, defer: Box::new(null) }],
    };
    let expected = CdDescription::Layered {
        cleric: iia_core::weak_orders::WeakOrder::all_equal(3).unwrap(),
        rulings: vec![ClassRuling::Dictator { voter: 0, direction: Direction::Verbatim, defer: Box::new(inner) }],
    };
    assert_eq!(decompose(&f).unwrap(), expected);
    let chain = build_chain(&f, 0).unwrap();
    let voters: Vec<_> = chain.steps.iter().map(|s| s.voters.clone()).collect();
    assert_eq!(voters, vec![vec![0, 1], vec![1], vec![]]);
}

#[test]
fn semantic_filters_at_one_voter() {
    let alts = AltSet::standard(3).unwrap();
    let all: Vec<ExplicitSwf> = enumerate_descriptions(3, 1, EnumerationFilter::All, DEFAULT_DESCRIPTION_BUDGET)
        .unwrap()
        .map(|d| reconstruct(&d, &alts, 1).unwrap())
        .collect();
    assert_eq!(all.iter().filter(|f| check_wpp(f).holds).count(), 13);
    assert_eq!(all.iter().filter(|f| check_cs(f).holds).count(), 27);
}

#[test]
fn every_class_is_null_or_dictatorial() {
    // Any class of size at least three in C(f) restricts to a null or
    // dictatorial function.
    let alts = AltSet::standard(4).unwrap();
    for d in enumerate_descriptions(4, 1, EnumerationFilter::All, DEFAULT_DESCRIPTION_BUDGET).unwrap() {
        let f = reconstruct(&d, &alts, 1).unwrap();
        let cleric = compute_cleric(&f).order().unwrap();
        for class in cleric.blocks().into_iter().filter(|c| c.len() >= 3) {
            let g = restrict_swf(&f, &class).unwrap();
            assert!(is_null(&g) || find_dictator(&g).dictator.is_some());
        }
    }
}

fn arb_profile(voters: usize) -> impl Strategy<Value = Profile> {
    let n = OrderSpace::get(3).unwrap().len();
    prop::collection::vec(0..n, voters).prop_map(|ix| {
        let space = OrderSpace::get(3).unwrap();
        Profile::new(ix.into_iter().map(|i| space.order(i).clone()).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn description_round_trip(i in 0usize..118825) {
        let d = &descriptions_32()[i];
        let alts = AltSet::standard(3).unwrap();
        let f = reconstruct(d, &alts, 2).unwrap();
        prop_assert!(check_iia(&f).holds);
        prop_assert_eq!(&decompose(&f).unwrap(), d);
        let report = validate_canonical(d, 3, 2);
        prop_assert!(report.valid, "{:?}", report);
    }

    #[test]
    fn evaluation_matches_table(i in 0usize..118825, p in arb_profile(2), x in 0usize..3, y in 0usize..3) {
        let d = &descriptions_32()[i];
        let alts = xyz();
        let f = reconstruct(d, &alts, 2).unwrap();
        let rel = evaluate_description(d, &alts, &p, x, y).unwrap();
        prop_assert_eq!(rel, f.eval(&p).unwrap().rel(x, y));
        prop_assert_eq!(evaluate_description(d, &alts, &p, y, x).unwrap(), rel.reverse());
    }

    #[test]
    fn description_json_round_trip(i in 0usize..118825) {
        let d = &descriptions_32()[i];
        let alts = xyz();
        let (back, back_alts) = CdDescription::from_json_str(&d.to_json_string(&alts), 3).unwrap();
        prop_assert_eq!(&back, d);
        prop_assert_eq!(back_alts, alts);
    }

    #[test]
    fn iia_functions_restrict_consistently(i in 0usize..118825, a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let f = reconstruct(&descriptions_32()[i], &AltSet::standard(3).unwrap(), 2).unwrap();
        let members = if a < b { vec![a, b] } else { vec![b, a] };
        let g = restrict_swf(&f, &members).unwrap();
        let pw = to_pairwise(&f).unwrap();
        let gw = to_pairwise(&g).unwrap();
        prop_assert_eq!(gw.table(0, 1), pw.table(members[0], members[1]));
    }

    #[test]
    fn random_pair_tables_transitive_iff_enumerated(a in 0u64..27, b in 0u64..27, c in 0u64..27) {
        let tables = vec![PairTable::nth(1, a).unwrap(), PairTable::nth(1, b).unwrap(), PairTable::nth(1, c).unwrap()];
        let pw = PairwiseSwf::new(AltSet::standard(3).unwrap(), 1, tables).unwrap();
        match pw.to_explicit() {
            Ok(f) => {
                prop_assert!(check_iia(&f).holds);
                let d = decompose(&f).unwrap();
                prop_assert_eq!(reconstruct(&d, &AltSet::standard(3).unwrap(), 1).unwrap(), f);
            }
            Err(Error::NotTransitive(v)) => {
                prop_assert!(!v.relation.is_transitive());
                prop_assert_eq!(pw.combine(&v.profile).unwrap(), v.relation);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn random_tables_are_checked_with_rechecking_witnesses(table in prop::collection::vec(0u16..13, 13)) {
        let f = ExplicitSwf::from_indices(AltSet::standard(3).unwrap(), 1, table).unwrap();
        let verdict = check_iia(&f);
        match &verdict.witness {
            Some(w) => prop_assert!(w.recheck(&f)),
            None => prop_assert!(decompose(&f).is_ok()),
        }
    }

    #[test]
    fn chains_stay_within_bounds(i in 0usize..118825, seed in 0usize..3) {
        let f = reconstruct(&descriptions_32()[i], &AltSet::standard(3).unwrap(), 2).unwrap();
        let chain = build_chain(&f, seed).unwrap();
        prop_assert!(chain.len() <= 3);
        for w in chain.steps.windows(2) {
            prop_assert!(w[1].states.iter().all(|s| w[0].states.contains(s)));
            prop_assert_eq!(w[1].voters.len() + 1, w[0].voters.len());
        }
        let t = chain.terminal();
        prop_assert!(is_null(t) || t.states() <= 2);
    }
}
