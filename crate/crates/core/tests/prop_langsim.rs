use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::subsequence;

use xlstr::langsim::{cosine, matrix_from_vectors, nearest_sources, FamilyTable, LanguageVector, TASK_LANGUAGES};
use xlstr::{FeatureKind, LanguageCode, SimilarityMatrix};

fn langs() -> Vec<LanguageCode> {
    TASK_LANGUAGES.to_vec()
}

fn arb_matrix() -> impl Strategy<Value = SimilarityMatrix> {
    let n = TASK_LANGUAGES.len();
    // Coarse values so that ties actually occur.
    let cell = prop_oneof![
        1 => Just(None),
        4 => (-8i32..=8).prop_map(|v| Some(v as f64 / 8.0)),
        2 => (-1.0f64..=1.0).prop_map(Some),
    ];
    proptest::collection::vec(cell, n * n)
        .prop_map(|values| SimilarityMatrix::new(FeatureKind::CellState, langs(), langs(), values).unwrap())
}

fn arb_lang() -> impl Strategy<Value = LanguageCode> {
    proptest::sample::select(langs())
}

fn arb_vector(lang: LanguageCode, dim: usize) -> impl Strategy<Value = LanguageVector> {
    proptest::collection::vec((-3.0f64..3.0, proptest::bool::weighted(0.8)), dim).prop_filter_map(
        "needs a component",
        move |parts| {
            let (values, mask): (Vec<f64>, Vec<bool>) = parts.into_iter().unzip();
            LanguageVector::new(lang, FeatureKind::L2vSyn, values, mask).ok()
        },
    )
}

proptest! {
    #[test]
    fn selection_is_short_sorted_and_excludes_target(
        m in arb_matrix(),
        target in arb_lang(),
        k in 1usize..16,
        candidates in subsequence(langs(), 0..=TASK_LANGUAGES.len()),
    ) {
        let sel = nearest_sources(target, k, &m, candidates.iter().copied()).unwrap();
        prop_assert!(sel.languages.len() <= k);
        prop_assert!(!sel.languages.contains(&target));
        prop_assert!(sel.similarities.windows(2).all(|w| w[0] >= w[1]));
        for l in &sel.languages {
            prop_assert!(candidates.contains(l));
        }
        for l in &sel.uncovered {
            prop_assert_eq!(m.get(target, *l), None);
        }
    }

    #[test]
    fn selection_ignores_candidate_order(
        m in arb_matrix(),
        target in arb_lang(),
        k in 1usize..16,
        candidates in subsequence(langs(), 0..=TASK_LANGUAGES.len()).prop_shuffle(),
    ) {
        let mut sorted = candidates.clone();
        sorted.sort();
        let a = nearest_sources(target, k, &m, candidates).unwrap();
        let b = nearest_sources(target, k, &m, sorted).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cosine_symmetric_and_bounded(u in arb_vector(LanguageCode::ENG, 12), v in arb_vector(LanguageCode::KIN, 12)) {
        match (cosine(&u, &v), cosine(&v, &u)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a, b);
                prop_assert!(a.abs() <= 1.0 + 1e-12);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric outcome {:?} {:?}", a, b),
        }
        if u.values().iter().zip(u.mask()).any(|(x, &m)| m && *x != 0.0) {
            prop_assert!((cosine(&u, &u).unwrap() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn positive_scaling_keeps_cosine(
        u in arb_vector(LanguageCode::ENG, 10),
        v in arb_vector(LanguageCode::KIN, 10),
        factor in 1e-3f64..1e3,
    ) {
        if let Ok(a) = cosine(&u, &v) {
            let b = cosine(&u.scaled(factor), &v).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    // Power-of-two factors scale exactly, so even tied similarities keep
    // their order.
    #[test]
    fn positive_scaling_keeps_ranking(
        parts in proptest::collection::vec(proptest::collection::vec(0u8..2, 8), TASK_LANGUAGES.len()),
        exponents in proptest::collection::vec(-6i32..6, TASK_LANGUAGES.len()),
        target in arb_lang(),
        k in 1usize..6,
    ) {
        let build = |scale: bool| -> Vec<LanguageVector> {
            TASK_LANGUAGES
                .iter()
                .zip(&parts)
                .zip(&exponents)
                .map(|((&l, p), &e)| {
                    let v = LanguageVector::dense(l, FeatureKind::L2vSyn, p.iter().map(|&x| x as f64).collect()).unwrap();
                    if scale { v.scaled(2f64.powi(e)) } else { v }
                })
                .collect()
        };
        let a = matrix_from_vectors(FeatureKind::L2vSyn, &build(false), &langs(), &langs()).unwrap();
        let b = matrix_from_vectors(FeatureKind::L2vSyn, &build(true), &langs(), &langs()).unwrap();
        let sa = nearest_sources(target, k, &a, langs()).unwrap();
        let sb = nearest_sources(target, k, &b, langs()).unwrap();
        prop_assert_eq!(sa.languages, sb.languages);
    }

    #[test]
    fn family_membership_is_symmetric(
        a in arb_lang(),
        b in arb_lang(),
        pool in subsequence(langs(), 0..=TASK_LANGUAGES.len()),
    ) {
        prop_assume!(a != b);
        let t = FamilyTable::operational();
        let mut s: BTreeSet<LanguageCode> = pool.into_iter().collect();
        s.insert(b);
        let mut swapped = s.clone();
        swapped.insert(a);
        swapped.remove(&b);
        prop_assert_eq!(
            t.family_sources(a, s.iter().copied()).contains(&b),
            t.family_sources(b, swapped.iter().copied()).contains(&a)
        );
    }
}
