use fgcount::census::{
    burnside_class_table, cyclic_word_total, dp_count_by_homology, dp_table, enumerate_cyclically_reduced,
    fourier_count_by_homology, oracle_count_by_homology, slice_from_json, slice_to_json, Guard,
    DEFAULT_FOURIER_TOLERANCE,
};
use fgcount::spectral::{char_count_closed_form, character_sum, CharacterPoint};
use fgcount::{Letter, Word};
use proptest::prelude::*;

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank, any::<bool>()), 1..=max_len).prop_map(move |raw| {
        let letters = raw
            .into_iter()
            .map(|(g, pos)| if pos { Letter::positive(g) } else { Letter::negative(g) })
            .collect();
        Word::new(rank, letters).unwrap().cyclically_reduce()
    })
}

#[test]
fn three_engines_agree_on_middle_ranks() {
    for (k, depth) in [(4usize, 4usize), (5, 3)] {
        for m in 1..=depth {
            let oracle = oracle_count_by_homology(k, m, Guard::default_for(k)).unwrap();
            let dp = dp_count_by_homology(k, m, None).unwrap();
            let fourier = fourier_count_by_homology(k, m, DEFAULT_FOURIER_TOLERANCE).unwrap();
            assert_eq!(oracle, dp, "k={k} m={m}");
            assert_eq!(oracle, fourier.row, "k={k} m={m}");
        }
    }
}

#[test]
fn enumeration_matches_the_length_formula_beyond_acceptance_depth() {
    assert_eq!(
        enumerate_cyclically_reduced(2, 14, Guard::default_for(2)).unwrap().count() as u128,
        cyclic_word_total(2, 14).unwrap()
    );
}

#[test]
fn slices_survive_json() {
    let table = dp_table::<u128>(3, 12, None).unwrap();
    for row in table.rows() {
        let m = row.half_width();
        let text = slice_to_json(row, m);
        let back = slice_from_json(&text).unwrap();
        assert!(back.same_entries(row));
        assert_eq!(slice_to_json(&back, m), text);
    }
}

#[test]
fn class_counts_never_exceed_words() {
    let words = dp_table::<u128>(2, 30, None).unwrap();
    let classes = burnside_class_table(&words).unwrap();
    for m in 1..=30 {
        let c = classes.length_count(m).unwrap();
        let w = words.row_total(m).unwrap();
        assert!(c * m as u128 >= w && c <= w, "m={m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_preserves_abelianization_and_class(w in word_strategy(3, 12), shift in 0usize..12) {
        prop_assume!(!w.is_empty());
        let r = w.rotated(shift % w.len());
        prop_assert_eq!(r.abelianize(), w.abelianize());
        prop_assert_eq!(r.class_canonical(), w.class_canonical());
        prop_assert_eq!(w.class_canonical().class_canonical(), w.class_canonical());
    }

    #[test]
    fn inverse_negates_abelianization(w in word_strategy(2, 16)) {
        let neg: Vec<i64> = w.abelianize().coords().iter().map(|x| -x).collect();
        prop_assert_eq!(w.inverse().abelianize().coords().to_vec(), neg);
        prop_assert!(w.inverse().is_cyclically_reduced());
    }

    #[test]
    fn closed_form_matches_dp_character_sums(
        e1 in 0.0f64..1.0,
        e2 in 0.0f64..1.0,
        m in 1usize..18,
    ) {
        let eps = CharacterPoint::new(vec![e1, e2]);
        let row = dp_count_by_homology(2, m, None).unwrap();
        let direct = character_sum(&row, &eps);
        let closed = char_count_closed_form(&eps, 2, m).unwrap();
        let scale = 3f64.powi(m as i32);
        prop_assert!((direct - closed).norm() / scale < 1e-10);
    }

    #[test]
    fn radius_truncation_agrees_with_full_rows(m in 1usize..20, r in 0usize..6) {
        let full = dp_count_by_homology(2, m, None).unwrap();
        let cut = dp_count_by_homology(2, m, Some(r)).unwrap();
        let r = r as i64;
        for a in -r..=r {
            for b in -r..=r {
                prop_assert_eq!(cut.get(&[a, b]), full.get(&[a, b]));
            }
        }
    }
}
