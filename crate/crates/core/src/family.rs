use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One member set, stored as a membership mask over the internal element
/// indices `0..n`. Bit `i` is set iff the element with internal index `i`
/// belongs to the set. A single machine word caps the universe at 64
/// elements, which is all the desk-scale analysis here ever needs, and makes
/// subset tests and unions single instructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetWord(u64);

impl SetWord {
    pub fn from_mask(mask: u64) -> Self {
        SetWord(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Number of elements in the set.
    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 >> index & 1 == 1
    }

    pub fn is_subset_of(self, other: SetWord) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn is_proper_subset_of(self, other: SetWord) -> bool {
        self.0 != other.0 && self.is_subset_of(other)
    }

    pub fn union(self, other: SetWord) -> SetWord {
        SetWord(self.0 | other.0)
    }

    /// Internal element indices present in the set, ascending.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |i| mask >> i & 1 == 1)
    }
}

impl std::ops::BitOr for SetWord {
    type Output = SetWord;
    fn bitor(self, rhs: SetWord) -> SetWord {
        self.union(rhs)
    }
}

/// A finite family of nonempty sets over a universe of at most 64 elements.
///
/// The universe is always exactly the union of the members: elements carry
/// arbitrary positive integer labels externally, but internally they are
/// compacted to indices `0..n` in ascending label order. Members are stored
/// deduplicated and sorted ascending by mask value, which fixes a canonical
/// order for every operation that reports "the first" or "the smallest"
/// anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    members: Vec<SetWord>,
    labels: Vec<u64>,
}

/// What parsing had to clean up. Families are sets of sets, so duplicate
/// lines collapse; the count is reported rather than silently discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseReport {
    pub duplicates_removed: usize,
}

impl SetFamily {
    /// Builds a family from already-compacted parts. Callers must hand over
    /// members sorted ascending, deduplicated, nonempty, covering exactly the
    /// low `n` bits, with ascending labels — everything is debug-asserted.
    pub(crate) fn from_parts(n: usize, members: Vec<SetWord>, labels: Vec<u64>) -> Self {
        debug_assert!((1..=64).contains(&n));
        debug_assert_eq!(labels.len(), n);
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!members.is_empty());
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|s| !s.is_empty()));
        debug_assert_eq!(
            members.iter().fold(0u64, |acc, s| acc | s.mask()),
            universe_mask_for(n)
        );
        SetFamily { n, members, labels }
    }

    /// Parses the plain text format (one set per line, labels separated by
    /// spaces or commas, `#` comment lines and blank lines ignored) and
    /// reports how many duplicate sets were dropped.
    pub fn parse_with_report(text: &str) -> Result<(SetFamily, ParseReport)> {
        let mut raw_sets: Vec<Vec<u64>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut set = Vec::new();
            for token in line.split([' ', '\t', ',']).filter(|t| !t.is_empty()) {
                match token.parse::<u64>() {
                    Ok(label) if label >= 1 => set.push(label),
                    _ => {
                        return Err(Error::MalformedToken {
                            line: line_no,
                            token: token.to_string(),
                        })
                    }
                }
            }
            if set.is_empty() {
                // A non-blank line that produced no labels (e.g. just commas)
                // is an explicitly empty set, which the analysis excludes.
                return Err(Error::EmptySetLine { line: line_no });
            }
            set.sort_unstable();
            set.dedup();
            raw_sets.push(set);
        }
        if raw_sets.is_empty() {
            return Err(Error::EmptyFamily);
        }

        let mut labels: Vec<u64> = raw_sets.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > 64 {
            return Err(Error::TooManyElements {
                count: labels.len(),
            });
        }

        let index_of = |label: u64| labels.binary_search(&label).expect("label was collected");
        let mut members: Vec<SetWord> = raw_sets
            .iter()
            .map(|set| {
                SetWord::from_mask(
                    set.iter()
                        .fold(0u64, |mask, &label| mask | 1 << index_of(label)),
                )
            })
            .collect();
        let parsed = members.len();
        members.sort_unstable();
        members.dedup();
        let report = ParseReport {
            duplicates_removed: parsed - members.len(),
        };
        Ok((SetFamily::from_parts(labels.len(), members, labels), report))
    }

    /// Universe size `n` — the number of distinct elements.
    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// Member count `m`.
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Members in canonical (ascending mask) order.
    pub fn members(&self) -> &[SetWord] {
        &self.members
    }

    /// External labels in ascending order; `labels()[i]` is the label of
    /// internal index `i`.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> u64 {
        self.labels[index]
    }

    /// Mask with one bit per universe element.
    pub fn universe_mask(&self) -> SetWord {
        SetWord::from_mask(universe_mask_for(self.n))
    }

    /// True iff the mask is one of the members (members are sorted, so this
    /// is a binary search).
    pub fn contains_member(&self, set: SetWord) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    /// Index of a member by mask, if present.
    pub fn member_index(&self, set: SetWord) -> Option<usize> {
        self.members.binary_search(&set).ok()
    }

    /// External labels of member `index`, ascending.
    pub fn member_labels(&self, index: usize) -> Vec<u64> {
        self.members[index]
            .elements()
            .map(|e| self.labels[e])
            .collect()
    }

    /// Renders one member as `{1,2,3}` for diagnostics and diagrams.
    pub fn member_display(&self, index: usize) -> String {
        display_set(&self.member_labels(index))
    }

    /// True iff the union of every pair of members is again a member.
    pub fn is_union_closed(&self) -> bool {
        self.closure_defect().is_none()
    }

    /// First pair of members (by canonical order) whose union is missing,
    /// if any.
    pub fn closure_defect(&self) -> Option<(usize, usize)> {
        for i in 0..self.members.len() {
            for j in (i + 1)..self.members.len() {
                let u = self.members[i] | self.members[j];
                if !self.contains_member(u) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `Ok(())` or the `NotUnionClosed` error naming the offending pair.
    pub fn require_union_closed(&self) -> Result<()> {
        match self.closure_defect() {
            None => Ok(()),
            Some((i, j)) => {
                let u = self.members[i] | self.members[j];
                let union_labels: Vec<u64> = u.elements().map(|e| self.labels[e]).collect();
                Err(Error::NotUnionClosed {
                    a: self.member_display(i),
                    b: self.member_display(j),
                    union: display_set(&union_labels),
                })
            }
        }
    }

    /// The smallest union-closed family containing this one, over the same
    /// universe and labels. (Closure only adds unions of existing members,
    /// so the universe cannot change.)
    pub fn union_closure(&self) -> SetFamily {
        let closed = close_masks(self.members.iter().map(|s| s.mask()).collect());
        SetFamily::from_parts(
            self.n,
            closed.into_iter().map(SetWord::from_mask).collect(),
            self.labels.clone(),
        )
    }

    /// Per-element membership counts.
    pub fn frequency_vector(&self) -> FrequencyVector {
        let counts = (0..self.n)
            .map(|e| self.members.iter().filter(|s| s.contains(e)).count())
            .collect();
        FrequencyVector {
            counts,
            m: self.members.len(),
        }
    }

    /// External labels of every element in strictly more than half of the
    /// members, ascending.
    pub fn abundant_elements(&self) -> Vec<u64> {
        let freq = self.frequency_vector();
        (0..self.n)
            .filter(|&e| 2 * freq.counts[e] > freq.m)
            .map(|e| self.labels[e])
            .collect()
    }

    /// The family formed by the given member indices, compacted to its own
    /// universe (labels of the surviving elements are kept).
    pub fn subfamily(&self, indices: &[usize]) -> Result<SetFamily> {
        for &i in indices {
            if i >= self.members.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.members.len(),
                });
            }
        }
        if indices.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let union = indices
            .iter()
            .fold(0u64, |acc, &i| acc | self.members[i].mask());
        let kept: Vec<usize> = (0..self.n).filter(|&e| union >> e & 1 == 1).collect();
        let new_index: Vec<Option<usize>> = {
            let mut v = vec![None; self.n];
            for (new, &old) in kept.iter().enumerate() {
                v[old] = Some(new);
            }
            v
        };
        let mut members: Vec<SetWord> = indices
            .iter()
            .map(|&i| {
                SetWord::from_mask(self.members[i].elements().fold(0u64, |mask, e| {
                    mask | 1 << new_index[e].expect("element is covered by the union")
                }))
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        let labels = kept.iter().map(|&e| self.labels[e]).collect();
        Ok(SetFamily::from_parts(kept.len(), members, labels))
    }
}

impl FromStr for SetFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<SetFamily> {
        SetFamily::parse_with_report(s).map(|(f, _)| f)
    }
}

/// The canonical document form: one member per line, labels ascending,
/// members in canonical order. Parsing the output reproduces the family.
impl fmt::Display for SetFamily {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for index in 0..self.members.len() {
            let labels: Vec<String> = self
                .member_labels(index)
                .iter()
                .map(u64::to_string)
                .collect();
            writeln!(out, "{}", labels.join(" "))?;
        }
        Ok(())
    }
}

/// Per-element membership counts for one family. `counts[e]` is the number
/// of members containing internal index `e`; every count is at least 1
/// because the universe is the union of the members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    pub counts: Vec<usize>,
    pub m: usize,
}

impl FrequencyVector {
    pub fn count(&self, index: usize) -> usize {
        self.counts[index]
    }

    /// True iff element `index` lies in strictly more than half the members.
    pub fn is_abundant(&self, index: usize) -> bool {
        2 * self.counts[index] > self.m
    }
}

/// Smallest union-closed family containing the generators, over the universe
/// spanned by them. Generators are masks over `0..n`; bit `i` gets the
/// external label `i + 1`, then unused positions are compacted away.
pub fn union_closure(generators: &[SetWord], n: usize) -> Result<SetFamily> {
    if generators.is_empty() {
        return Err(Error::NoGenerators);
    }
    if !(1..=64).contains(&n) {
        return Err(Error::ParameterOutOfRange {
            what: "universe size",
            got: n as u64,
            min: 1,
            max: 64,
        });
    }
    let limit = universe_mask_for(n);
    for (index, g) in generators.iter().enumerate() {
        if g.is_empty() {
            return Err(Error::EmptyGenerator { index });
        }
        if g.mask() & !limit != 0 {
            return Err(Error::ParameterOutOfRange {
                what: "generator element index",
                got: 63 - g.mask().leading_zeros() as u64,
                min: 0,
                max: n as u64 - 1,
            });
        }
    }

    let closed = close_masks(generators.iter().map(|s| s.mask()).collect());
    let union = closed.iter().fold(0u64, |acc, &m| acc | m);
    let kept: Vec<usize> = (0..n).filter(|&e| union >> e & 1 == 1).collect();
    let mut new_index = vec![usize::MAX; n];
    for (new, &old) in kept.iter().enumerate() {
        new_index[old] = new;
    }
    let members: Vec<SetWord> = closed
        .into_iter()
        .map(|mask| {
            SetWord::from_mask(
                (0..n)
                    .filter(|&e| mask >> e & 1 == 1)
                    .fold(0u64, |acc, e| acc | 1 << new_index[e]),
            )
        })
        .collect();
    // Compaction is monotone on masks, so the sorted order survives it.
    let labels = kept.iter().map(|&e| e as u64 + 1).collect();
    Ok(SetFamily::from_parts(kept.len(), members, labels))
}

/// Union-closure fixpoint on raw masks; returns the closed set sorted
/// ascending. Worklist style: every new set is unioned against everything
/// already present, so each pair is considered once.
fn close_masks(generators: Vec<u64>) -> Vec<u64> {
    let mut present = std::collections::HashSet::new();
    let mut result: Vec<u64> = Vec::new();
    let mut queue: Vec<u64> = Vec::new();
    for g in generators {
        if present.insert(g) {
            queue.push(g);
        }
    }
    while let Some(next) = queue.pop() {
        for &existing in &result {
            let u = existing | next;
            if present.insert(u) {
                queue.push(u);
            }
        }
        result.push(next);
    }
    result.sort_unstable();
    result
}

pub(crate) fn universe_mask_for(n: usize) -> u64 {
    debug_assert!((1..=64).contains(&n));
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn display_set(labels: &[u64]) -> String {
    let inner: Vec<String> = labels.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}
