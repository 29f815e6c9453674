use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{union_closure, SetFamily, SetWord};
use crate::height::{
    height_decomposition, longest_chain_height, verify_height_properties, HeightDecomposition,
};
use crate::tent::{intersection_number, is_tent, tent_of};
use crate::witness::{find_witness_with, separation_quotient, witness_high, Branch, WitnessTrace};

/// Exhaustive sweep results for one universe size: every union-closed
/// family covering `{1..n}` is generated and put through the full battery
/// of structural checks. An empty `violations` list is the point — each
/// entry would be a counterexample to one of the facts the constructions
/// rest on, recorded with the offending family in document form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCensus {
    pub n: usize,
    /// Number of candidate subsets of the power set examined.
    pub candidates: u64,
    /// How many candidates are union-closed and cover the universe.
    pub families: u64,
    /// Family counts grouped by (member count, height).
    pub buckets: Vec<CensusBucket>,
    /// How often each witness construction ran: the dispatcher's pick for
    /// every family, plus a direct run of the minimal-member construction on
    /// each family of height at least `n - 1` that the dispatcher routed to
    /// a low-height branch (the dispatcher prefers those, so without the
    /// direct runs the high-height construction would go untested exactly
    /// where its precondition overlaps them).
    pub branches: BTreeMap<Branch, u64>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusBucket {
    pub m: usize,
    pub h: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which check failed (a stable kebab-case identifier).
    pub check: String,
    pub detail: String,
    /// The offending family in the plain document format.
    pub family: String,
}

impl FamilyCensus {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Streams every union-closed family of nonempty sets covering `{1..n}`,
/// in ascending order of the characteristic word over the `2^n - 1`
/// candidate member masks. Labeled enumeration, no isomorphism dedup: the
/// claims under test are label-independent, so the labeled population is
/// simply a larger test set.
pub fn enumerate_all_families(n: usize) -> Result<FamilyEnumeration> {
    if !(1..=4).contains(&n) {
        return Err(Error::ParameterOutOfRange {
            what: "universe size for exhaustive enumeration",
            got: n as u64,
            min: 1,
            max: 4,
        });
    }
    Ok(FamilyEnumeration {
        n,
        next: 0,
        total: candidate_count(n),
    })
}

/// Total number of candidate characteristic words for universe size `n`.
pub fn candidate_count(n: usize) -> u64 {
    1u64 << ((1usize << n) - 1)
}

pub struct FamilyEnumeration {
    n: usize,
    next: u64,
    total: u64,
}

impl Iterator for FamilyEnumeration {
    type Item = SetFamily;

    fn next(&mut self) -> Option<SetFamily> {
        while self.next < self.total {
            let word = self.next;
            self.next += 1;
            if let Some(f) = family_from_word(self.n, word) {
                return Some(f);
            }
        }
        None
    }
}

/// Decodes a characteristic word (bit `s - 1` set iff mask `s` is a member)
/// into a family, provided the member set is union-closed and covers the
/// universe.
fn family_from_word(n: usize, word: u64) -> Option<SetFamily> {
    let full = (1u64 << n) - 1;
    let mut union = 0u64;
    for s in 1..=full {
        if word >> (s - 1) & 1 == 1 {
            union |= s;
        }
    }
    if union != full {
        return None;
    }
    for a in 1..=full {
        if word >> (a - 1) & 1 == 0 {
            continue;
        }
        for b in (a + 1)..=full {
            if word >> (b - 1) & 1 == 1 && word >> ((a | b) - 1) & 1 == 0 {
                return None;
            }
        }
    }
    let members: Vec<SetWord> = (1..=full)
        .filter(|s| word >> (s - 1) & 1 == 1)
        .map(SetWord::from_mask)
        .collect();
    let labels = (1..=n as u64).collect();
    Some(SetFamily::from_parts(n, members, labels))
}

/// Deterministic pseudorandom union-closed family: `generator_count`
/// nonempty subsets of `{1..n}` are drawn from a stream seeded with `seed`,
/// the full universe set is added (so the family always covers), and the
/// result is closed under unions. Identical parameters give the identical
/// family.
pub fn random_family(n: usize, generator_count: usize, seed: u64) -> Result<SetFamily> {
    if !(1..=64).contains(&n) {
        return Err(Error::ParameterOutOfRange {
            what: "universe size",
            got: n as u64,
            min: 1,
            max: 64,
        });
    }
    if generator_count == 0 {
        return Err(Error::NoGenerators);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generators = Vec::with_capacity(generator_count + 1);
    for _ in 0..generator_count {
        let mask = loop {
            let candidate = rng.next_u64() & full;
            if candidate != 0 {
                break candidate;
            }
        };
        generators.push(SetWord::from_mask(mask));
    }
    generators.push(SetWord::from_mask(full));
    union_closure(&generators, n)
}

/// Exact frequency scan: the most frequent element (smallest label on
/// ties), its count, and whether it clears the more-than-half bar.
pub fn brute_force_conjecture(f: &SetFamily) -> (u64, usize, bool) {
    let freq = f.frequency_vector();
    let best = (0..f.universe_size())
        .max_by_key(|&e| (freq.counts[e], std::cmp::Reverse(e)))
        .expect("universe is nonempty");
    (f.label(best), freq.counts[best], freq.is_abundant(best))
}

/// Runs the full battery over every enumerated family on `n` elements:
/// closure, the peel/longest-chain agreement, all six decomposition
/// properties, the height-2 miss bound, tent structure and the pairwise
/// intersection bound, witness soundness (with an independent re-derivation
/// of every tent-complement trace), and the brute-force abundance scan.
pub fn verify_all(n: usize) -> Result<FamilyCensus> {
    let mut census = FamilyCensus {
        n,
        candidates: 0,
        families: 0,
        buckets: Vec::new(),
        branches: BTreeMap::new(),
        violations: Vec::new(),
    };
    if !(1..=4).contains(&n) {
        return Err(Error::ParameterOutOfRange {
            what: "universe size for exhaustive verification",
            got: n as u64,
            min: 1,
            max: 4,
        });
    }
    census.candidates = candidate_count(n);
    let mut buckets: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for f in enumerate_all_families(n)? {
        census.families += 1;
        check_family(&f, &mut census, &mut buckets);
    }

    census.buckets = buckets
        .into_iter()
        .map(|((m, h), count)| CensusBucket { m, h, count })
        .collect();
    Ok(census)
}

fn check_family(
    f: &SetFamily,
    census: &mut FamilyCensus,
    buckets: &mut BTreeMap<(usize, usize), u64>,
) {
    let mut fail = |check: &str, detail: String| {
        census.violations.push(Violation {
            check: check.to_string(),
            detail,
            family: f.to_string(),
        });
    };

    if !f.is_union_closed() {
        fail("union-closed", "enumerated family is not union-closed".into());
        return;
    }
    let d = match height_decomposition(f) {
        Ok(d) => d,
        Err(e) => {
            fail("union-closed", format!("decomposition refused the family: {e}"));
            return;
        }
    };
    let h = d.h();
    *buckets.entry((f.member_count(), h)).or_insert(0) += 1;

    let chain = longest_chain_height(f);
    if h != chain {
        fail(
            "height-equivalence",
            format!("peel gives H = {h}, longest chain gives {chain}"),
        );
    }

    match verify_height_properties(f, &d) {
        Ok(report) => {
            for failed in report.failures() {
                fail(
                    "height-property",
                    format!(
                        "{:?}: {}",
                        failed.id,
                        failed.counterexample.as_deref().unwrap_or("failed")
                    ),
                );
            }
        }
        Err(e) => fail("height-property", format!("checker refused: {e}")),
    }

    if h == 2 {
        check_height_two(f, &d, &mut fail);
    }
    check_tents(f, &d, &mut fail);
    check_witness(f, &d, census, buckets);

    let (element, count, holds) = brute_force_conjecture(f);
    if !holds {
        census.violations.push(Violation {
            check: "abundance".into(),
            detail: format!(
                "most frequent element {element} lies in only {count} of {} member sets",
                f.member_count()
            ),
            family: f.to_string(),
        });
    }
}

/// For a two-layer family: every element is missing from at most one set of
/// the bottom layer, and that layer has between 1 and n sets.
fn check_height_two(
    f: &SetFamily,
    d: &HeightDecomposition,
    fail: &mut impl FnMut(&str, String),
) {
    let bottom = d.layer(1);
    let n = f.universe_size();
    if !(1..=n).contains(&bottom.len()) {
        fail(
            "height-two-layer-size",
            format!("bottom layer has {} sets, expected 1..={n}", bottom.len()),
        );
    }
    for e in 0..n {
        let missing = bottom
            .iter()
            .filter(|&&i| !f.members()[i].contains(e))
            .count();
        if missing > 1 {
            fail(
                "height-two-miss-bound",
                format!(
                    "element {} is missing from {missing} bottom-layer sets",
                    f.label(e)
                ),
            );
        }
    }
}

/// Structural facts about every tent with an apex above the first layer:
/// nonempty base of strict subsets forming an antichain, all distinct base
/// pairs unioning to the apex, the induced subfamily union-closed of height
/// 2, every apex element missing from at most one base set (equivalently in
/// at least |T| - 1 tent sets), and the pairwise intersection bound.
fn check_tents(f: &SetFamily, d: &HeightDecomposition, fail: &mut impl FnMut(&str, String)) {
    let members = f.members();
    for p in 2..=d.h() {
        for &apex in d.layer(p) {
            let tent = match tent_of(f, d, apex) {
                Ok(t) => t,
                Err(e) => {
                    fail("tent-structure", format!("tent extraction refused: {e}"));
                    continue;
                }
            };
            let name = f.member_display(apex);
            if tent.base.is_empty() {
                fail(
                    "tent-structure",
                    format!("apex {name} above the first layer has an empty base"),
                );
                continue;
            }
            for &b in &tent.base {
                if !members[b].is_proper_subset_of(members[apex]) {
                    fail(
                        "tent-structure",
                        format!("base set {} is not strictly inside {name}", f.member_display(b)),
                    );
                }
            }
            for (i, &x) in tent.base.iter().enumerate() {
                for &y in &tent.base[i + 1..] {
                    if members[x].is_subset_of(members[y]) || members[y].is_subset_of(members[x]) {
                        fail("tent-structure", format!("base of {name} is not an antichain"));
                    }
                    if members[x] | members[y] != members[apex] {
                        fail(
                            "tent-structure",
                            format!(
                                "base sets {} and {} of {name} do not union to the apex",
                                f.member_display(x),
                                f.member_display(y)
                            ),
                        );
                    }
                }
            }
            for e in members[apex].elements() {
                let inside = tent
                    .member_indices()
                    .into_iter()
                    .filter(|&i| members[i].contains(e))
                    .count();
                if inside + 1 < tent.size() {
                    fail(
                        "tent-structure",
                        format!(
                            "element {} lies in only {inside} of the {} sets of the tent of {name}",
                            f.label(e),
                            tent.size()
                        ),
                    );
                }
            }
            match f.subfamily(&tent.member_indices()) {
                Ok(sub) if is_tent(&sub) => {}
                Ok(_) => fail(
                    "tent-structure",
                    format!("induced subfamily of {name} is not union-closed of height 2"),
                ),
                Err(e) => fail("tent-structure", format!("subfamily extraction refused: {e}")),
            }
        }
        let layer = d.layer(p);
        for (i, &a) in layer.iter().enumerate() {
            for &b in &layer[i + 1..] {
                match intersection_number(f, d, a, b) {
                    Ok(v) if v <= 1 => {}
                    Ok(v) => fail(
                        "intersection-bound",
                        format!(
                            "tents of {} and {} share {v} base sets",
                            f.member_display(a),
                            f.member_display(b)
                        ),
                    ),
                    Err(e) => fail("intersection-bound", format!("refused: {e}")),
                }
            }
        }
    }
}

fn check_witness(
    f: &SetFamily,
    d: &HeightDecomposition,
    census: &mut FamilyCensus,
    _buckets: &mut BTreeMap<(usize, usize), u64>,
) {
    let mut violations: Vec<(String, String)> = Vec::new();
    match find_witness_with(f, d) {
        Err(e) => violations.push(("witness-soundness".into(), format!("dispatcher failed: {e}"))),
        Ok(report) => {
            *census.branches.entry(report.branch).or_insert(0) += 1;
            let e = f
                .labels()
                .iter()
                .position(|&l| l == report.element)
                .expect("reported element is a label");
            let true_freq = f.members().iter().filter(|s| s.contains(e)).count();
            if report.frequency != true_freq {
                violations.push((
                    "witness-soundness".into(),
                    format!(
                        "reported frequency {} but element {} lies in {true_freq} sets",
                        report.frequency, report.element
                    ),
                ));
            }
            if !report.guaranteed {
                violations.push((
                    "witness-soundness".into(),
                    format!("branch {} returned without a guarantee", report.branch),
                ));
            }
            if 2 * true_freq <= report.m {
                violations.push((
                    "witness-soundness".into(),
                    format!(
                        "element {} lies in only {true_freq} of {} sets",
                        report.element, report.m
                    ),
                ));
            }
            if report.branch == Branch::H3LargeM {
                if let Err(detail) = recheck_tent_complement(f, &report) {
                    violations.push(("witness-trace".into(), detail));
                }
            }
        }
    }

    // The dispatcher prefers low-height branches, so run the high-height
    // construction directly wherever its precondition holds but was
    // shadowed.
    if d.h() + 1 >= f.universe_size() && d.h() <= 3 {
        match witness_high(f, d) {
            Err(e) => violations.push((
                "witness-soundness".into(),
                format!("direct minimal-member run failed: {e}"),
            )),
            Ok(report) => {
                *census.branches.entry(report.branch).or_insert(0) += 1;
                if !report.guaranteed || 2 * report.frequency <= report.m {
                    violations.push((
                        "witness-soundness".into(),
                        format!(
                            "direct minimal-member run: element {} in {} of {} sets",
                            report.element, report.frequency, report.m
                        ),
                    ));
                }
            }
        }
    }

    for (check, detail) in violations {
        census.violations.push(Violation {
            check,
            detail,
            family: f.to_string(),
        });
    }
}

/// Re-derives a tent-complement claim from scratch: the members not
/// containing the element must be exactly the listed sets, their number the
/// tent size, the tent no larger than the universe, and the frequency
/// exactly `m` minus the tent size. Runs on the merged family when the
/// trace says the construction did.
fn recheck_tent_complement(
    f: &SetFamily,
    report: &crate::witness::WitnessReport,
) -> std::result::Result<(), String> {
    let WitnessTrace::TentComplement {
        apex,
        tent_size,
        missing_members,
        quotient,
    } = &report.trace
    else {
        return Err(format!("branch {} carries no tent evidence", report.branch));
    };

    let (target, element) = match quotient {
        None => (f.clone(), report.element),
        Some(map) => {
            let (q, fresh) = separation_quotient(f);
            if fresh != *map {
                return Err("attached element map disagrees with a fresh merge".into());
            }
            let mapped = map
                .new_label_of(report.element)
                .ok_or("reported element is missing from the element map")?;
            (q, mapped)
        }
    };

    let e = target
        .labels()
        .iter()
        .position(|&l| l == element)
        .ok_or("element is not in the family the construction ran on")?;
    let missing: Vec<Vec<u64>> = (0..target.member_count())
        .filter(|&i| !target.members()[i].contains(e))
        .map(|i| target.member_labels(i))
        .collect();
    if missing != *missing_members {
        return Err(format!(
            "members missing {element} are {missing:?}, trace claims {missing_members:?}"
        ));
    }
    if missing.len() != *tent_size {
        return Err(format!(
            "{} members missing {element}, trace claims a tent of {tent_size}",
            missing.len()
        ));
    }
    if *tent_size > target.universe_size() {
        return Err(format!(
            "tent of {apex:?} has {tent_size} sets over a universe of {}",
            target.universe_size()
        ));
    }
    if report.frequency != report.m - tent_size {
        return Err(format!(
            "frequency {} is not m - |tent| = {}",
            report.frequency,
            report.m - tent_size
        ));
    }
    Ok(())
}
