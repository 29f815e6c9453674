use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{SetFamily, SetWord};

/// The layered structure of a union-closed family obtained by repeatedly
/// peeling off the subset-minimal members.
///
/// Two coordinate systems coexist and both are exposed:
///
/// * the **peel index** counts bottom-up — layer 1 holds the members minimal
///   in the whole family, layer 2 the members minimal after those are
///   removed, and so on;
/// * the **height number** of a set counts top-down — the universe set has
///   height number 1, and a set with peel index `p` has height number
///   `H + 1 - p`.
///
/// `H`, the number of layers, is the height number of the family itself.
/// The top layer always consists of exactly the universe set, because the
/// union of all members is a member of every union-closed family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightDecomposition {
    layers: Vec<Vec<usize>>,
    peel_index: Vec<usize>,
}

impl HeightDecomposition {
    /// The height number `H` of the family: the number of peel layers.
    pub fn h(&self) -> usize {
        self.layers.len()
    }

    /// Layers bottom-up; `layers()[i]` holds the member indices with peel
    /// index `i + 1`, ascending.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Member indices of the layer with 1-based peel index `p`.
    pub fn layer(&self, p: usize) -> &[usize] {
        &self.layers[p - 1]
    }

    /// 1-based peel index of member `index`.
    pub fn peel_index_of(&self, index: usize) -> usize {
        self.peel_index[index]
    }

    fn check_member(&self, index: usize) -> Result<()> {
        if index < self.peel_index.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.peel_index.len(),
            })
        }
    }

    /// Guards operations taking a `(family, decomposition)` pair against
    /// accidentally mixed-up arguments.
    pub(crate) fn check_describes(&self, f: &SetFamily) -> Result<()> {
        if self.peel_index.len() == f.member_count() {
            Ok(())
        } else {
            Err(Error::DecompositionMismatch)
        }
    }
}

/// Peels a union-closed family into its minimal-antichain layers.
///
/// Non-union-closed input is rejected: every structural claim made about the
/// decomposition presupposes closure.
pub fn height_decomposition(f: &SetFamily) -> Result<HeightDecomposition> {
    f.require_union_closed()?;
    let layers = peel_layers(f.members());
    let mut peel_index = vec![0usize; f.member_count()];
    for (i, layer) in layers.iter().enumerate() {
        for &member in layer {
            peel_index[member] = i + 1;
        }
    }
    Ok(HeightDecomposition { layers, peel_index })
}

/// The peel kernel, usable on any member list: repeatedly extract the
/// indices of subset-minimal sets. Quadratic per layer, which is plenty at
/// the family sizes a 64-element universe allows.
pub(crate) fn peel_layers(members: &[SetWord]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..members.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let minimal: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&a| {
                !remaining
                    .iter()
                    .any(|&b| members[b].is_proper_subset_of(members[a]))
            })
            .collect();
        debug_assert!(!minimal.is_empty(), "a finite nonempty poset has minima");
        remaining.retain(|i| !minimal.contains(i));
        layers.push(minimal);
    }
    layers
}

/// Height number of one member: `H + 1 - peel_index`, so the universe set
/// maps to 1 and the minimal sets map to the largest values.
pub fn height_number_of_set(d: &HeightDecomposition, index: usize) -> Result<usize> {
    d.check_member(index)?;
    Ok(d.h() + 1 - d.peel_index_of(index))
}

/// Length (in sets) of the longest chain under strict containment,
/// computed by longest-path dynamic programming over members in ascending
/// cardinality order. Agrees with the peel count on every union-closed
/// family; serves as the independent route for checking it.
pub fn longest_chain_height(f: &SetFamily) -> usize {
    let members = f.members();
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&i| (members[i].card(), members[i].mask()));
    let mut best = vec![1usize; members.len()];
    let mut overall = 0;
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[..pos] {
            if members[j].is_proper_subset_of(members[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
        overall = overall.max(best[i]);
    }
    overall
}

/// Which structural fact about the decomposition a check covers. The six
/// facts together pin down the shape of the layering of any union-closed
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeightProperty {
    /// Every k-th height (top-down) contains a set of at most `n + 1 - k`
    /// elements.
    SmallSetPerHeight,
    /// `1 <= H <= n`.
    HeightInRange,
    /// Some single element appears in at least one set of every layer.
    SpanningElement,
    /// No layer contains two members where one includes the other.
    LayersAreAntichains,
    /// A strict superset always sits in a strictly later peel layer.
    ContainmentLowersHeight,
    /// When `H >= 2`, every set of height number 2 has at most `n - 1`
    /// elements.
    SecondHeightProper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub id: HeightProperty,
    pub passed: bool,
    /// Human-readable witness of a failure, absent on success.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks the six structural facts of the decomposition against the family
/// and reports each with a counterexample on failure. The decomposition must
/// be the one computed from `f` (cheap structural agreement is verified; a
/// mismatched pair is an error, not a report full of failures).
pub fn verify_height_properties(f: &SetFamily, d: &HeightDecomposition) -> Result<PropertyReport> {
    let m = f.member_count();
    if d.peel_index.len() != m
        || d.layers.iter().map(Vec::len).sum::<usize>() != m
        || d.layers.iter().flatten().any(|&i| i >= m)
    {
        return Err(Error::DecompositionMismatch);
    }

    let n = f.universe_size();
    let h = d.h();
    let members = f.members();
    let mut checks = Vec::with_capacity(6);

    // Each k-th height holds a set of cardinality <= n + 1 - k; in peel
    // coordinates layer p must hold a set of cardinality <= n - h + p.
    let small_set = d.layers.iter().enumerate().find_map(|(i, layer)| {
        let p = i + 1;
        let bound = n as i64 - h as i64 + p as i64;
        let min = layer.iter().map(|&j| members[j].card() as i64).min();
        match min {
            Some(min) if min > bound => Some(format!(
                "peel layer {p} has no set with at most {bound} elements (smallest has {min})"
            )),
            _ => None,
        }
    });
    checks.push(check(HeightProperty::SmallSetPerHeight, small_set));

    let in_range = if (1..=n).contains(&h) {
        None
    } else {
        Some(format!("H = {h} outside 1..={n}"))
    };
    checks.push(check(HeightProperty::HeightInRange, in_range));

    let common = d.layers.iter().fold(f.universe_mask().mask(), |acc, layer| {
        acc & layer.iter().fold(0u64, |u, &j| u | members[j].mask())
    });
    let spanning = if common != 0 {
        None
    } else {
        Some("no element meets every layer".to_string())
    };
    checks.push(check(HeightProperty::SpanningElement, spanning));

    let antichain = d.layers.iter().enumerate().find_map(|(i, layer)| {
        layer.iter().find_map(|&a| {
            layer
                .iter()
                .find(|&&b| members[a].is_proper_subset_of(members[b]))
                .map(|&b| {
                    format!(
                        "peel layer {} contains {} inside {}",
                        i + 1,
                        f.member_display(a),
                        f.member_display(b)
                    )
                })
        })
    });
    checks.push(check(HeightProperty::LayersAreAntichains, antichain));

    let monotone = (0..m).find_map(|a| {
        (0..m)
            .find(|&b| {
                members[a].is_proper_subset_of(members[b])
                    && d.peel_index_of(a) >= d.peel_index_of(b)
            })
            .map(|b| {
                format!(
                    "{} is inside {} but peels at {} >= {}",
                    f.member_display(a),
                    f.member_display(b),
                    d.peel_index_of(a),
                    d.peel_index_of(b)
                )
            })
    });
    checks.push(check(HeightProperty::ContainmentLowersHeight, monotone));

    // Height number 2 is peel layer h - 1.
    let second = if h >= 2 {
        d.layer(h - 1).iter().find_map(|&j| {
            (members[j].card() as usize > n - 1).then(|| {
                format!(
                    "{} sits directly below the universe but has {} elements",
                    f.member_display(j),
                    members[j].card()
                )
            })
        })
    } else {
        None
    };
    checks.push(check(HeightProperty::SecondHeightProper, second));

    Ok(PropertyReport { checks })
}

fn check(id: HeightProperty, counterexample: Option<String>) -> PropertyCheck {
    PropertyCheck {
        passed: counterexample.is_none(),
        id,
        counterexample,
    }
}
