use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::height::{height_decomposition, HeightDecomposition};
use crate::tent::tent_of;

/// Which construction produced a witness. `H1`, `H2`, the two `H3` routes
/// and the two high-height routes come with a structural guarantee; the
/// fallback is an unconditional frequency scan for families outside the
/// guaranteed regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Branch {
    #[serde(rename = "H1")]
    H1,
    #[serde(rename = "H2")]
    H2,
    #[serde(rename = "H3-LargeM")]
    H3LargeM,
    #[serde(rename = "H3-Separating")]
    H3Separating,
    #[serde(rename = "HighH-Singleton")]
    HighHSingleton,
    #[serde(rename = "HighH-Pair")]
    HighHPair,
    #[serde(rename = "Fallback")]
    Fallback,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::H1 => "H1",
            Branch::H2 => "H2",
            Branch::H3LargeM => "H3-LargeM",
            Branch::H3Separating => "H3-Separating",
            Branch::HighHSingleton => "HighH-Singleton",
            Branch::HighHPair => "HighH-Pair",
            Branch::Fallback => "Fallback",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(self.as_str())
    }
}

/// How elements were merged: one `(old label, new label)` pair per element
/// of the original family, ascending by old label. Elements sharing a new
/// label had identical incidence across all members; each new-label class is
/// represented by its smallest old label, and classes are renumbered 1..n'
/// in order of their representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QuotientMap {
    pairs: Vec<(u64, u64)>,
}

impl QuotientMap {
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// New label of an original element.
    pub fn new_label_of(&self, old: u64) -> Option<u64> {
        self.pairs
            .iter()
            .find(|(o, _)| *o == old)
            .map(|(_, n)| *n)
    }

    /// Smallest original label mapping to the given new label.
    pub fn representative_of(&self, new: u64) -> Option<u64> {
        self.pairs
            .iter()
            .find(|(_, n)| *n == new)
            .map(|(o, _)| *o)
    }

    /// True iff at least two elements were merged into one.
    pub fn merges_anything(&self) -> bool {
        let classes = self
            .pairs
            .iter()
            .map(|(_, n)| *n)
            .max()
            .unwrap_or(0);
        (classes as usize) < self.pairs.len()
    }
}

/// Branch-specific evidence attached to a report, sufficient to re-derive
/// the frequency claim without trusting the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessTrace {
    /// The sole member is the universe; every element works.
    Universe,
    /// The element is absent from at most one member set.
    MissesAtMostOne { missing: usize },
    /// The members not containing the element are exactly one second-layer
    /// apex plus the base of its tent. When `quotient` is present, the apex
    /// and member lists are written with the merged family's labels.
    TentComplement {
        apex: Vec<u64>,
        tent_size: usize,
        missing_members: Vec<Vec<u64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        quotient: Option<QuotientMap>,
    },
    /// Full frequency scan over the family merged by incidence (the family
    /// itself when nothing merges and `quotient` is absent).
    FrequencyScan {
        #[serde(skip_serializing_if = "Option::is_none")]
        quotient: Option<QuotientMap>,
    },
    /// The smallest member of the family, of cardinality one or two.
    MinimalMember { member: Vec<u64> },
    /// Plain frequency scan with no structural backing.
    ExhaustiveScan,
}

/// A constructively chosen element together with everything needed to check
/// the choice: its true membership count, the member count, the branch that
/// produced it, whether that branch carries a guarantee, and the branch's
/// evidence. `guaranteed` implies `2 * frequency > m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub element: u64,
    pub frequency: usize,
    pub m: usize,
    pub branch: Branch,
    pub guaranteed: bool,
    pub trace: WitnessTrace,
}

/// Builds a report for the element with internal index `e`, recomputing the
/// frequency from the family so no construction can misstate it.
fn report_for(
    f: &SetFamily,
    e: usize,
    branch: Branch,
    guaranteed: bool,
    trace: WitnessTrace,
) -> WitnessReport {
    let frequency = f.members().iter().filter(|s| s.contains(e)).count();
    debug_assert!(!guaranteed || 2 * frequency > f.member_count());
    WitnessReport {
        element: f.label(e),
        frequency,
        m: f.member_count(),
        branch,
        guaranteed,
        trace,
    }
}

/// Computes the height decomposition and dispatches to the branch it
/// selects: one layer, two layers, three layers, high height (`H >= n - 1`,
/// with the three-layer routes preferred when both apply), or the
/// unguaranteed fallback scan for everything in between.
pub fn find_witness(f: &SetFamily) -> Result<WitnessReport> {
    let d = height_decomposition(f)?;
    find_witness_with(f, &d)
}

/// Same dispatch with a precomputed decomposition.
pub fn find_witness_with(f: &SetFamily, d: &HeightDecomposition) -> Result<WitnessReport> {
    d.check_describes(f)?;
    match d.h() {
        1 => witness_h1(f),
        2 => witness_h2(f),
        3 => witness_h3(f, d),
        h if h + 1 >= f.universe_size() => witness_high(f, d),
        _ => Ok(fallback_scan(f)),
    }
}

/// Height 1: the family is the single set `{universe}`, so its smallest
/// element (like every other) lies in the one and only member.
pub fn witness_h1(f: &SetFamily) -> Result<WitnessReport> {
    if f.member_count() != 1 {
        return Err(Error::Precondition {
            op: "witness_h1",
            expected: "a family of height 1 (a single member set)".into(),
        });
    }
    Ok(report_for(f, 0, Branch::H1, true, WitnessTrace::Universe))
}

/// Height 2: every element is missing from at most one member, so any
/// element with frequency at least `m - 1` works, and for `m = 2` any
/// element of the non-universe member lies in both sets.
pub fn witness_h2(f: &SetFamily) -> Result<WitnessReport> {
    let d = height_decomposition(f)?;
    if d.h() != 2 {
        return Err(Error::Precondition {
            op: "witness_h2",
            expected: "a family of height 2".into(),
        });
    }
    let m = f.member_count();
    let e = if m == 2 {
        // Members are sorted ascending and the universe mask is the largest,
        // so the non-universe member comes first.
        f.members()[0]
            .elements()
            .next()
            .expect("members are nonempty")
    } else {
        let freq = f.frequency_vector();
        (0..f.universe_size())
            .find(|&e| freq.counts[e] + 1 >= m)
            .ok_or_else(|| Error::InternalInvariant {
                op: "witness_h2",
                detail: format!("no element lies in at least {} of the {m} member sets", m - 1),
            })?
    };
    let missing = m - f.members().iter().filter(|s| s.contains(e)).count();
    Ok(report_for(
        f,
        e,
        Branch::H2,
        true,
        WitnessTrace::MissesAtMostOne { missing },
    ))
}

/// Height 3 with `m > 2n`: the tent-complement construction.
///
/// In the second peel layer some element `x` lies in all but exactly one
/// member `M`; the members not containing `x` then turn out to be exactly
/// `M` plus the base of its tent — at most `n` sets in total — so `x` lies
/// in at least `m - n > m/2` members. Every step is checked; a failure is
/// reported loudly as an internal-invariant error, because it would falsify
/// the structural argument rather than this implementation.
pub fn witness_h3_large(f: &SetFamily, d: &HeightDecomposition) -> Result<WitnessReport> {
    d.check_describes(f)?;
    let n = f.universe_size();
    let m = f.member_count();
    if d.h() != 3 || m <= 2 * n {
        return Err(Error::Precondition {
            op: "witness_h3_large",
            expected: "a family of height 3 with more than 2n member sets".into(),
        });
    }

    let second = d.layer(2);
    let members = f.members();
    let count_in_second =
        |e: usize| second.iter().filter(|&&i| members[i].contains(e)).count();
    let x = (0..n)
        .find(|&e| count_in_second(e) == second.len() - 1)
        .ok_or_else(|| Error::InternalInvariant {
            op: "witness_h3_large",
            detail: "no element is missing from exactly one set of the second peel layer".into(),
        })?;

    let apex = *second
        .iter()
        .find(|&&i| !members[i].contains(x))
        .expect("x misses exactly one second-layer set");
    let tent = tent_of(f, d, apex)?;

    // The complement of x must be exactly the tent of the apex, and the
    // tent must fit inside the universe size.
    let missing: Vec<usize> = (0..m).filter(|&i| !members[i].contains(x)).collect();
    let mut expected = tent.member_indices();
    expected.sort_unstable();
    if missing != expected {
        return Err(Error::InternalInvariant {
            op: "witness_h3_large",
            detail: format!(
                "members not containing {} are not exactly the tent of {}",
                f.label(x),
                f.member_display(apex)
            ),
        });
    }
    if tent.size() > n {
        return Err(Error::InternalInvariant {
            op: "witness_h3_large",
            detail: format!("tent of {} has {} > n sets", f.member_display(apex), tent.size()),
        });
    }
    let frequency = f.frequency_vector().counts[x];
    if frequency != m - tent.size() {
        return Err(Error::InternalInvariant {
            op: "witness_h3_large",
            detail: format!(
                "frequency of {} is {frequency}, not m - |tent| = {}",
                f.label(x),
                m - tent.size()
            ),
        });
    }

    let trace = WitnessTrace::TentComplement {
        apex: f.member_labels(apex),
        tent_size: tent.size(),
        missing_members: missing.iter().map(|&i| f.member_labels(i)).collect(),
        quotient: None,
    };
    Ok(report_for(f, x, Branch::H3LargeM, true, trace))
}

/// True iff no two distinct elements lie in exactly the same members.
pub fn is_separating(f: &SetFamily) -> bool {
    let sigs = incidence_signatures(f);
    for i in 0..sigs.len() {
        for j in (i + 1)..sigs.len() {
            if sigs[i] == sigs[j] {
                return false;
            }
        }
    }
    true
}

/// Merges elements with identical incidence into single elements.
///
/// The result is separating, keeps the member count (merged columns cannot
/// distinguish members that were distinct), and — because the merge is an
/// isomorphism of the containment order — keeps the entire layer structure.
/// Each element's frequency carries over to its image. Classes are labeled
/// 1..n' in order of their smallest original label; a separating family
/// with labels 1..n comes back unchanged under the identity map.
pub fn separation_quotient(f: &SetFamily) -> (SetFamily, QuotientMap) {
    let n = f.universe_size();
    let sigs = incidence_signatures(f);
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for e in 0..n {
        match reps.iter().position(|&r| sigs[r] == sigs[e]) {
            Some(c) => class_of[e] = c,
            None => {
                class_of[e] = reps.len();
                reps.push(e);
            }
        }
    }

    let mut masks: Vec<u64> = f
        .members()
        .iter()
        .map(|s| {
            reps.iter()
                .enumerate()
                .filter(|&(_, &r)| s.contains(r))
                .fold(0u64, |acc, (c, _)| acc | 1 << c)
        })
        .collect();
    masks.sort_unstable();
    masks.dedup();
    debug_assert_eq!(masks.len(), f.member_count(), "merging must stay injective");

    let labels: Vec<u64> = (1..=reps.len() as u64).collect();
    let quotient = SetFamily::from_parts(
        reps.len(),
        masks.into_iter().map(crate::family::SetWord::from_mask).collect(),
        labels,
    );
    let pairs = (0..n)
        .map(|e| (f.label(e), class_of[e] as u64 + 1))
        .collect();
    (quotient, QuotientMap { pairs })
}

/// Height 3 dispatcher: with more than `2n` members the tent-complement
/// construction applies directly. Otherwise the family is merged by
/// incidence; if the merged family has more than `2n'` members the same
/// construction runs there and the element is mapped back, and if not, an
/// abundant element must exist among the at most `2n'` members of a
/// separating family — found by a plain frequency scan, whose failure would
/// be a disproof and is reported as such.
pub fn witness_h3(f: &SetFamily, d: &HeightDecomposition) -> Result<WitnessReport> {
    d.check_describes(f)?;
    if d.h() != 3 {
        return Err(Error::Precondition {
            op: "witness_h3",
            expected: "a family of height 3".into(),
        });
    }
    let m = f.member_count();
    if m > 2 * f.universe_size() {
        return witness_h3_large(f, d);
    }

    let (q, map) = separation_quotient(f);
    if m > 2 * q.universe_size() {
        let dq = height_decomposition(&q)?;
        let inner = witness_h3_large(&q, &dq)?;
        let back = map
            .representative_of(inner.element)
            .expect("witness element exists in the merged family");
        let e = f
            .labels()
            .iter()
            .position(|&l| l == back)
            .expect("representative is an original label");
        let trace = match inner.trace {
            WitnessTrace::TentComplement {
                apex,
                tent_size,
                missing_members,
                ..
            } => WitnessTrace::TentComplement {
                apex,
                tent_size,
                missing_members,
                quotient: Some(map),
            },
            other => other,
        };
        let report = report_for(f, e, Branch::H3LargeM, true, trace);
        if report.frequency != inner.frequency {
            return Err(Error::InternalInvariant {
                op: "witness_h3",
                detail: format!(
                    "element {} has frequency {} but its merged image has {}",
                    report.element, report.frequency, inner.frequency
                ),
            });
        }
        return Ok(report);
    }

    let freq = q.frequency_vector();
    let chosen = (0..q.universe_size()).find(|&e| freq.is_abundant(e)).ok_or_else(|| {
        Error::ConjectureViolation {
            op: "witness_h3",
            detail: format!(
                "no element lies in more than {m}/2 of the member sets of a separating \
                 height-3 family with m <= 2n"
            ),
        }
    })?;
    let back = map
        .representative_of(q.label(chosen))
        .expect("witness element exists in the merged family");
    let e = f
        .labels()
        .iter()
        .position(|&l| l == back)
        .expect("representative is an original label");
    let trace = WitnessTrace::FrequencyScan {
        quotient: map.merges_anything().then_some(map),
    };
    Ok(report_for(f, e, Branch::H3Separating, true, trace))
}

/// Height at least `n - 1`: the family contains a member of cardinality 1
/// or 2. A singleton `{x}` forces abundance of `x` outright (unioning with
/// `{x}` injects the members missing `x` into those containing it, and
/// `{x}` itself is hit by no such union). For a pair, the more frequent of
/// its two elements is taken and the abundance claim is checked at runtime.
pub fn witness_high(f: &SetFamily, d: &HeightDecomposition) -> Result<WitnessReport> {
    d.check_describes(f)?;
    if d.h() + 1 < f.universe_size() {
        return Err(Error::Precondition {
            op: "witness_high",
            expected: "a family of height at least n - 1".into(),
        });
    }
    let members = f.members();
    let smallest = (0..members.len())
        .min_by_key(|&i| (members[i].card(), i))
        .expect("families are nonempty");
    let card = members[smallest].card();
    if card > 2 {
        return Err(Error::InternalInvariant {
            op: "witness_high",
            detail: format!(
                "smallest member {} has {card} elements; height {} of {} forces at most 2",
                f.member_display(smallest),
                d.h(),
                f.universe_size()
            ),
        });
    }
    let trace = WitnessTrace::MinimalMember {
        member: f.member_labels(smallest),
    };
    let m = f.member_count();
    let freq = f.frequency_vector();

    if card == 1 {
        let x = members[smallest].elements().next().expect("cardinality 1");
        if 2 * freq.counts[x] <= m {
            return Err(Error::InternalInvariant {
                op: "witness_high",
                detail: format!(
                    "element {} of singleton member is in only {} of {m} sets",
                    f.label(x),
                    freq.counts[x]
                ),
            });
        }
        return Ok(report_for(f, x, Branch::HighHSingleton, true, trace));
    }

    let mut pair = members[smallest].elements();
    let x = pair.next().expect("cardinality 2");
    let y = pair.next().expect("cardinality 2");
    let best = if freq.counts[y] > freq.counts[x] { y } else { x };
    if 2 * freq.counts[best] <= m {
        return Err(Error::ConjectureViolation {
            op: "witness_high",
            detail: format!(
                "neither element of the minimal pair {} lies in more than {m}/2 member sets",
                f.member_display(smallest)
            ),
        });
    }
    Ok(report_for(f, best, Branch::HighHPair, true, trace))
}

/// Unconditional argmax frequency scan; `guaranteed` only when the scan
/// itself clears the bar. A failed scan still returns the best element — as
/// a report with `guaranteed = false`, which at this point would describe a
/// counterexample to the conjecture.
fn fallback_scan(f: &SetFamily) -> WitnessReport {
    let freq = f.frequency_vector();
    let best = (0..f.universe_size())
        .max_by_key(|&e| (freq.counts[e], std::cmp::Reverse(e)))
        .expect("universe is nonempty");
    let guaranteed = freq.is_abundant(best);
    report_for(f, best, Branch::Fallback, guaranteed, WitnessTrace::ExhaustiveScan)
}

/// Per-element membership bitmaps over the member list, for incidence
/// comparison. `sig[e]` has bit `i` set iff member `i` contains `e`.
fn incidence_signatures(f: &SetFamily) -> Vec<Vec<u64>> {
    let m = f.member_count();
    let words = m.div_ceil(64);
    let mut sigs = vec![vec![0u64; words]; f.universe_size()];
    for (i, s) in f.members().iter().enumerate() {
        for e in s.elements() {
            sigs[e][i / 64] |= 1 << (i % 64);
        }
    }
    sigs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(text: &str) -> SetFamily {
        text.parse().expect("test family parses")
    }

    fn power_set(n: usize) -> SetFamily {
        let mut lines = String::new();
        for mask in 1u64..(1 << n) {
            let labels: Vec<String> = (0..n)
                .filter(|&e| mask >> e & 1 == 1)
                .map(|e| (e + 1).to_string())
                .collect();
            lines.push_str(&labels.join(" "));
            lines.push('\n');
        }
        family(&lines)
    }

    fn decompose(f: &SetFamily) -> HeightDecomposition {
        height_decomposition(f).expect("test families are union-closed")
    }

    #[test]
    fn single_member_families() {
        let r = find_witness(&family("1 2 3\n")).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch, r.guaranteed),
            (1, 1, 1, Branch::H1, true)
        );
        assert_eq!(r.trace, WitnessTrace::Universe);

        assert_eq!(witness_h1(&family("5\n")).unwrap().element, 5);
        assert_eq!(witness_h1(&family("2 7\n")).unwrap().element, 2);
        assert!(matches!(
            witness_h1(&family("1\n1 2\n")),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn two_layer_families() {
        let r = witness_h2(&family("1\n1 2 3\n")).unwrap();
        assert_eq!((r.element, r.frequency, r.m), (1, 2, 2));
        assert_eq!(r.trace, WitnessTrace::MissesAtMostOne { missing: 0 });

        // Both elements qualify with frequency 2 = m - 1; the smaller label
        // wins.
        let r = witness_h2(&family("1\n2\n1 2\n")).unwrap();
        assert_eq!((r.element, r.frequency, r.m), (1, 2, 3));

        let r = witness_h2(&family("1 2\n1 3\n2 3\n1 2 3\n")).unwrap();
        assert_eq!((r.element, r.frequency, r.m), (1, 3, 4));
        assert!(r.guaranteed);

        assert!(matches!(
            witness_h2(&family("1 2 3\n")),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn tent_complement_on_the_power_set_of_three() {
        let f = power_set(3);
        let d = decompose(&f);
        let r = witness_h3_large(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch, r.guaranteed),
            (1, 4, 7, Branch::H3LargeM, true)
        );
        assert_eq!(
            r.trace,
            WitnessTrace::TentComplement {
                apex: vec![2, 3],
                tent_size: 3,
                missing_members: vec![vec![2], vec![3], vec![2, 3]],
                quotient: None,
            }
        );
        // The dispatcher lands on the same construction.
        assert_eq!(find_witness(&f).unwrap(), r);
    }

    #[test]
    fn tent_complement_requires_height_three() {
        // The power set on four elements has height 4, so the tent
        // construction refuses it and the dispatcher routes it through the
        // minimal-member branch instead.
        let f = power_set(4);
        let d = decompose(&f);
        assert!(matches!(
            witness_h3_large(&f, &d),
            Err(Error::Precondition { .. })
        ));
        let r = find_witness(&f).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch),
            (1, 8, 15, Branch::HighHSingleton)
        );
    }

    #[test]
    fn separating_scan_on_a_small_height_three_family() {
        let f = family("1\n2\n1 2\n1 3\n2 3\n1 2 3\n");
        let d = decompose(&f);
        assert!(is_separating(&f));
        let r = witness_h3(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch, r.guaranteed),
            (1, 4, 6, Branch::H3Separating, true)
        );
        assert_eq!(r.trace, WitnessTrace::FrequencyScan { quotient: None });
        assert_eq!(find_witness(&f).unwrap(), r);
    }

    #[test]
    fn separation_detection() {
        assert!(!is_separating(&family("1 2\n")));
        assert!(is_separating(&family("1\n1 2\n")));
        assert!(is_separating(&power_set(3)));
    }

    #[test]
    fn quotient_merges_identical_incidence() {
        let (q, map) = separation_quotient(&family("1 2\n"));
        assert_eq!(q.to_string(), "1\n");
        assert_eq!(map.pairs(), &[(1, 1), (2, 1)]);
        assert!(map.merges_anything());

        let (q, map) = separation_quotient(&family("1 2\n1 2 3\n"));
        assert_eq!(q.to_string(), "1\n1 2\n");
        assert_eq!(map.pairs(), &[(1, 1), (2, 1), (3, 2)]);

        let f = power_set(3);
        let (q, map) = separation_quotient(&f);
        assert_eq!(q, f);
        assert_eq!(map.pairs(), &[(1, 1), (2, 2), (3, 3)]);
        assert!(!map.merges_anything());
    }

    #[test]
    fn quotient_preserves_member_count_and_frequencies() {
        let f = family("1 2\n3\n1 2 3\n1 2 4\n1 2 3 4\n");
        let (q, map) = separation_quotient(&f);
        assert_eq!(q.member_count(), f.member_count());
        assert!(is_separating(&q));
        let ff = f.frequency_vector();
        let qf = q.frequency_vector();
        for e in 0..f.universe_size() {
            let new = map.new_label_of(f.label(e)).unwrap();
            let qe = q.labels().iter().position(|&l| l == new).unwrap();
            assert_eq!(ff.counts[e], qf.counts[qe]);
        }
    }

    #[test]
    fn merged_family_reenters_the_tent_construction() {
        // Height 3 on six elements with m = 12 <= 2n, but elements 5 and 6
        // share their incidence; merging leaves five elements and
        // 12 > 10 = 2n', so the tent-complement construction runs on the
        // merged family and the chosen element maps back.
        let f = family(
            "1 2 3\n1 4 5 6\n2 4 5 6\n3 4 5 6\n1 2 4\n1 3 5 6\n1 2 3 4\n1 2 3 5 6\n\
             1 2 4 5 6\n1 3 4 5 6\n2 3 4 5 6\n1 2 3 4 5 6\n",
        );
        assert_eq!(f.member_count(), 12);
        assert_eq!(f.universe_size(), 6);
        let d = decompose(&f);
        assert_eq!(d.h(), 3);
        assert!(!is_separating(&f));

        let r = witness_h3(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch, r.guaranteed),
            (1, 9, 12, Branch::H3LargeM, true)
        );
        match &r.trace {
            WitnessTrace::TentComplement {
                apex,
                tent_size,
                missing_members,
                quotient: Some(map),
            } => {
                assert_eq!(apex, &[2, 3, 4, 5]);
                assert_eq!(*tent_size, 3);
                assert_eq!(
                    missing_members,
                    &[vec![2, 4, 5], vec![3, 4, 5], vec![2, 3, 4, 5]]
                );
                assert_eq!(
                    map.pairs(),
                    &[(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 5)]
                );
            }
            other => panic!("unexpected trace {other:?}"),
        }
        assert_eq!(find_witness(&f).unwrap(), r);
    }

    #[test]
    fn minimal_member_branches() {
        let f = family("1\n1 2\n1 2 3\n");
        let d = decompose(&f);
        let r = witness_high(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch),
            (1, 3, 3, Branch::HighHSingleton)
        );
        assert_eq!(r.trace, WitnessTrace::MinimalMember { member: vec![1] });

        let f = family("1 2\n1 2 3\n");
        let d = decompose(&f);
        let r = witness_high(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch),
            (1, 2, 2, Branch::HighHPair)
        );
        assert_eq!(r.trace, WitnessTrace::MinimalMember { member: vec![1, 2] });

        let f = family("2\n1 2\n2 3\n1 2 3\n");
        let d = decompose(&f);
        let r = witness_high(&f, &d).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch),
            (2, 4, 4, Branch::HighHSingleton)
        );

        let d3 = decompose(&power_set(3));
        let err = witness_high(&family("1\n1 2\n"), &d3);
        assert!(matches!(err, Err(Error::DecompositionMismatch)));
    }

    #[test]
    fn high_branch_rejects_low_heights() {
        // n = 5, height 3: 3 < 4 = n - 1.
        let f = family("1\n1 2\n1 2 3 4 5\n");
        let d = decompose(&f);
        assert_eq!(d.h(), 3);
        assert!(matches!(
            witness_high(&f, &d),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn fallback_for_intermediate_heights() {
        // n = 6, height 4: outside both guaranteed regimes.
        let f = family("1\n1 2\n1 2 3\n1 2 3 4 5 6\n");
        let d = decompose(&f);
        assert_eq!(d.h(), 4);
        let r = find_witness(&f).unwrap();
        assert_eq!(
            (r.element, r.frequency, r.m, r.branch, r.guaranteed),
            (1, 4, 4, Branch::Fallback, true)
        );
        assert_eq!(r.trace, WitnessTrace::ExhaustiveScan);
    }

    #[test]
    fn dispatcher_prefers_low_height_branches() {
        // Height 2 = n - 1: both regimes apply, the height-2 construction
        // wins.
        let r = find_witness(&family("1\n1 2 3\n")).unwrap();
        assert_eq!(r.branch, Branch::H2);
        assert_eq!((r.element, r.frequency, r.m), (1, 2, 2));
    }

    #[test]
    fn reports_are_deterministic() {
        let f = power_set(3);
        assert_eq!(find_witness(&f).unwrap(), find_witness(&f).unwrap());
    }

    #[test]
    fn rejects_non_closed_input() {
        assert!(matches!(
            find_witness(&family("1\n2\n")),
            Err(Error::NotUnionClosed { .. })
        ));
    }

    #[test]
    fn branch_names_serialize_as_their_display_form() {
        for branch in [
            Branch::H1,
            Branch::H2,
            Branch::H3LargeM,
            Branch::H3Separating,
            Branch::HighHSingleton,
            Branch::HighHPair,
            Branch::Fallback,
        ] {
            let json = serde_json::to_string(&branch).unwrap();
            assert_eq!(json, format!("\"{branch}\""));
        }
    }
}
