//! Analysis of finite union-closed set families: height decompositions by
//! iterated antichain peeling, tent substructures around each member, and
//! constructive witnesses for elements that lie in more than half of the
//! member sets. A brute-force oracle enumerates every small family and
//! replays each claim against ground truth.
//!
//! Families live on a universe of at most 64 labeled elements and each
//! member is a single machine word, so subset tests, unions, and frequency
//! counts are bit operations throughout.

mod dot;
mod error;
mod family;
mod height;
mod oracle;
mod tent;
mod witness;

pub use dot::{covering_pairs, render_dot};
pub use error::{Error, Result};
pub use family::{union_closure, FrequencyVector, ParseReport, SetFamily, SetWord};
pub use height::{
    height_decomposition, height_number_of_set, longest_chain_height, verify_height_properties,
    HeightDecomposition, HeightProperty, PropertyCheck, PropertyReport,
};
pub use oracle::{
    brute_force_conjecture, candidate_count, enumerate_all_families, random_family, verify_all,
    CensusBucket, FamilyCensus, FamilyEnumeration, Violation,
};
pub use tent::{intersection_number, is_tent, tent_of, Tent};
pub use witness::{
    find_witness, find_witness_with, is_separating, separation_quotient, witness_h1, witness_h2,
    witness_h3, witness_h3_large, witness_high, Branch, QuotientMap, WitnessReport, WitnessTrace,
};
