use frankl_core::{
    height_decomposition, intersection_number, is_tent, longest_chain_height, separation_quotient,
    tent_of, union_closure, verify_height_properties, find_witness, SetFamily, SetWord,
};
use proptest::prelude::*;

fn arbitrary_family() -> impl Strategy<Value = SetFamily> {
    (1usize..=10)
        .prop_flat_map(|n| {
            let full = (1u64 << n) - 1;
            (Just(n), proptest::collection::vec(1..=full, 1..=6))
        })
        .prop_map(|(n, masks)| {
            let generators: Vec<SetWord> = masks.into_iter().map(SetWord::from_mask).collect();
            union_closure(&generators, n).expect("nonempty masks close fine")
        })
}

proptest! {
    #[test]
    fn closure_is_union_closed_and_idempotent(f in arbitrary_family()) {
        prop_assert!(f.is_union_closed());
        prop_assert_eq!(&f.union_closure(), &f);
    }

    #[test]
    fn peel_height_equals_longest_chain(f in arbitrary_family()) {
        let d = height_decomposition(&f).unwrap();
        prop_assert_eq!(d.h(), longest_chain_height(&f));
    }

    #[test]
    fn decomposition_properties_all_hold(f in arbitrary_family()) {
        let d = height_decomposition(&f).unwrap();
        let report = verify_height_properties(&f, &d).unwrap();
        let failures: Vec<_> = report.failures().collect();
        prop_assert!(failures.is_empty(), "failures: {failures:?}");
    }

    #[test]
    fn same_layer_tents_share_at_most_one_base_set(f in arbitrary_family()) {
        let d = height_decomposition(&f).unwrap();
        for p in 2..=d.h() {
            let layer = d.layer(p);
            for (i, &a) in layer.iter().enumerate() {
                for &b in &layer[i + 1..] {
                    prop_assert!(intersection_number(&f, &d, a, b).unwrap() <= 1);
                }
            }
        }
    }

    #[test]
    fn induced_tents_are_height_two_union_closed(f in arbitrary_family()) {
        let d = height_decomposition(&f).unwrap();
        for apex in 0..f.member_count() {
            let tent = tent_of(&f, &d, apex).unwrap();
            if !tent.base.is_empty() {
                let sub = f.subfamily(&tent.member_indices()).unwrap();
                prop_assert!(is_tent(&sub));
            }
        }
    }

    #[test]
    fn document_roundtrip_is_identity(f in arbitrary_family()) {
        let reparsed: SetFamily = f.to_string().parse().unwrap();
        prop_assert_eq!(&reparsed, &f);
    }

    #[test]
    fn witness_frequency_is_honest(f in arbitrary_family()) {
        let report = find_witness(&f).unwrap();
        let freq = f.frequency_vector();
        let e = f
            .labels()
            .iter()
            .position(|&l| l == report.element)
            .expect("witness element is a label");
        prop_assert_eq!(report.frequency, freq.counts[e]);
        prop_assert_eq!(report.m, f.member_count());
        if report.guaranteed {
            prop_assert!(2 * report.frequency > report.m);
        }
    }

    #[test]
    fn quotient_preserves_counts_layers_and_frequencies(f in arbitrary_family()) {
        let (q, map) = separation_quotient(&f);
        prop_assert_eq!(q.member_count(), f.member_count());

        let df = height_decomposition(&f).unwrap();
        let dq = height_decomposition(&q).unwrap();
        prop_assert_eq!(df.h(), dq.h());
        for p in 1..=df.h() {
            prop_assert_eq!(df.layer(p).len(), dq.layer(p).len());
        }

        let freq_f = f.frequency_vector();
        let freq_q = q.frequency_vector();
        for (e, &label) in f.labels().iter().enumerate() {
            let new_label = map.new_label_of(label).expect("every element maps");
            let e_q = q
                .labels()
                .iter()
                .position(|&l| l == new_label)
                .expect("mapped label exists in the quotient");
            prop_assert_eq!(freq_f.counts[e], freq_q.counts[e_q]);
        }
    }
}
