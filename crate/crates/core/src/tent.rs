use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::height::{peel_layers, HeightDecomposition};

/// One apex member together with its base: every member of the peel layer
/// directly below the apex that is contained in it.
///
/// For an apex with a nonempty base the induced subfamily `{apex} ∪ base`
/// is itself union-closed of height 2, and tightly constrained: the base is
/// an antichain, any two distinct base sets union to the apex, and every
/// element of the apex is missing from at most one base set. An apex in the
/// first peel layer has nothing below it and induces the degenerate
/// one-set tent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tent {
    pub apex: usize,
    pub base: Vec<usize>,
}

impl Tent {
    /// Number of sets in the tent: the apex plus its base.
    pub fn size(&self) -> usize {
        1 + self.base.len()
    }

    /// All member indices of the tent, apex first.
    pub fn member_indices(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.size());
        v.push(self.apex);
        v.extend_from_slice(&self.base);
        v
    }
}

/// The tent induced by the given apex: base = members of the peel layer
/// directly below that are subsets of the apex (empty when the apex sits in
/// the first layer).
pub fn tent_of(f: &SetFamily, d: &HeightDecomposition, apex: usize) -> Result<Tent> {
    d.check_describes(f)?;
    if apex >= f.member_count() {
        return Err(Error::IndexOutOfRange {
            index: apex,
            len: f.member_count(),
        });
    }
    let p = d.peel_index_of(apex);
    let base: Vec<usize> = if p == 1 {
        Vec::new()
    } else {
        d.layer(p - 1)
            .iter()
            .copied()
            .filter(|&b| f.members()[b].is_subset_of(f.members()[apex]))
            .collect()
    };
    debug_assert!(base
        .iter()
        .all(|&b| f.members()[b].is_proper_subset_of(f.members()[apex])));
    Ok(Tent { apex, base })
}

/// Number of base sets shared by the tents of two distinct apexes of the
/// same peel layer. Only defined where both tents have a layer below; the
/// union-closed structure forces the result to be at most 1.
pub fn intersection_number(
    f: &SetFamily,
    d: &HeightDecomposition,
    a: usize,
    b: usize,
) -> Result<usize> {
    d.check_describes(f)?;
    for index in [a, b] {
        if index >= f.member_count() {
            return Err(Error::IndexOutOfRange {
                index,
                len: f.member_count(),
            });
        }
    }
    if a == b {
        return Err(Error::SameApex);
    }
    if d.peel_index_of(a) != d.peel_index_of(b) {
        return Err(Error::DifferentLayers {
            a: f.member_display(a),
            b: f.member_display(b),
        });
    }
    if d.peel_index_of(a) == 1 {
        return Err(Error::NoLayerBelow);
    }
    let ta = tent_of(f, d, a)?;
    let tb = tent_of(f, d, b)?;
    Ok(ta.base.iter().filter(|i| tb.base.contains(i)).count())
}

/// True iff the family is union-closed with exactly two peel layers — the
/// abstract shape every nondegenerate induced tent has.
pub fn is_tent(f: &SetFamily) -> bool {
    f.is_union_closed() && peel_layers(f.members()).len() == 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SetWord;
    use crate::height::height_decomposition;

    fn family(text: &str) -> SetFamily {
        text.parse().expect("test family parses")
    }

    fn power_set_3() -> SetFamily {
        family("1\n2\n3\n1 2\n1 3\n2 3\n1 2 3\n")
    }

    fn index_of(f: &SetFamily, mask: u64) -> usize {
        f.member_index(SetWord::from_mask(mask)).expect("member")
    }

    #[test]
    fn tent_of_a_pair_apex_in_the_power_set() {
        let f = power_set_3();
        let d = height_decomposition(&f).unwrap();
        let apex = index_of(&f, 0b011); // {1,2}
        let tent = tent_of(&f, &d, apex).unwrap();
        assert_eq!(tent.size(), 3);
        let base: Vec<String> = tent.base.iter().map(|&i| f.member_display(i)).collect();
        assert_eq!(base, vec!["{1}", "{2}"]);
    }

    #[test]
    fn tent_base_stops_at_the_next_layer_down() {
        let f = family("1\n2\n1 2\n1 2 3\n");
        let d = height_decomposition(&f).unwrap();
        let apex = index_of(&f, 0b111);
        let tent = tent_of(&f, &d, apex).unwrap();
        // {1} and {2} are two layers down; only {1,2} is in the base.
        assert_eq!(tent.size(), 2);
        assert_eq!(f.member_display(tent.base[0]), "{1,2}");
    }

    #[test]
    fn minimal_apex_gives_degenerate_tent() {
        let f = power_set_3();
        let d = height_decomposition(&f).unwrap();
        let apex = index_of(&f, 0b001);
        let tent = tent_of(&f, &d, apex).unwrap();
        assert!(tent.base.is_empty());
        assert_eq!(tent.size(), 1);
        assert!(matches!(
            tent_of(&f, &d, 42),
            Err(Error::IndexOutOfRange { index: 42, len: 7 })
        ));
    }

    #[test]
    fn intersection_number_counts_shared_base_sets() {
        let f = power_set_3();
        let d = height_decomposition(&f).unwrap();
        let ab = index_of(&f, 0b011); // {1,2}
        let ac = index_of(&f, 0b101); // {1,3}
        assert_eq!(intersection_number(&f, &d, ab, ac).unwrap(), 1);
    }

    #[test]
    fn disjoint_apexes_share_nothing() {
        // Power set of {1,2,3,4} minus the empty set.
        let mut lines = String::new();
        for mask in 1u64..16 {
            let labels: Vec<String> = (0..4)
                .filter(|&e| mask >> e & 1 == 1)
                .map(|e| (e + 1).to_string())
                .collect();
            lines.push_str(&labels.join(" "));
            lines.push('\n');
        }
        let f = family(&lines);
        let d = height_decomposition(&f).unwrap();
        let ab = index_of(&f, 0b0011); // {1,2}
        let cd = index_of(&f, 0b1100); // {3,4}
        assert_eq!(intersection_number(&f, &d, ab, cd).unwrap(), 0);
    }

    #[test]
    fn intersection_number_preconditions() {
        let f = power_set_3();
        let d = height_decomposition(&f).unwrap();
        let single = index_of(&f, 0b001);
        let other = index_of(&f, 0b010);
        let pair = index_of(&f, 0b011);
        assert!(matches!(
            intersection_number(&f, &d, pair, pair),
            Err(Error::SameApex)
        ));
        assert!(matches!(
            intersection_number(&f, &d, single, pair),
            Err(Error::DifferentLayers { .. })
        ));
        assert!(matches!(
            intersection_number(&f, &d, single, other),
            Err(Error::NoLayerBelow)
        ));
    }

    #[test]
    fn tent_shape_recognition() {
        assert!(is_tent(&family("1\n2\n1 2\n")));
        assert!(!is_tent(&family("1 2 3\n")));
        assert!(!is_tent(&power_set_3()));
        assert!(!is_tent(&family("1\n2\n"))); // not union-closed
    }

    #[test]
    fn induced_tents_are_height_two_families() {
        let f = power_set_3();
        let d = height_decomposition(&f).unwrap();
        for apex in 0..f.member_count() {
            let tent = tent_of(&f, &d, apex).unwrap();
            if tent.base.is_empty() {
                continue;
            }
            let sub = f.subfamily(&tent.member_indices()).unwrap();
            assert!(is_tent(&sub), "apex {}", f.member_display(apex));
            // Any two distinct base sets union to the apex.
            for (i, &x) in tent.base.iter().enumerate() {
                for &y in &tent.base[i + 1..] {
                    assert_eq!(f.members()[x] | f.members()[y], f.members()[tent.apex]);
                }
            }
        }
    }
}
