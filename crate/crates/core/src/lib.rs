//! Constant-weight codes over `{0, .., q-1}`: exact Johnson-type bounds, an
//! exact clique oracle for tiny instances, and a randomized construction
//! that imposes modular sum constraints on every `t`-subset of a word's
//! support and then extracts a greedy matching from the resulting conflict
//! hypergraph.

pub mod bounds;
pub mod cli;
pub mod code;
pub mod combinatorics;
pub mod constraints;
pub mod degrees;
pub mod error;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod params;

pub use bounds::{johnson_bound, johnson_t, main_term, BoundValue};
pub use code::{hamming_distance, min_distance, support, verify_code, weight, Code, CodeWord, VerificationReport, Violation};
pub use constraints::{
    check_constraints, enumerate_x, realizable_patterns, residue, sample_b, words_on_support, BAssignment,
    CandidateFamily,
};
pub use degrees::{
    degree_census, degree_concentration_mc, exact_mean_degree_over_b, expected_degree, tuple_degree, DegreeMode,
    DegreeReport,
};
pub use error::{Error, Result};
pub use matching::{
    construct, construct_code, construct_code_odd, greedy_matching, v1_keys, v2_keys, BuildReport, ConflictIndex,
    V1Key, V2Key,
};
pub use oracle::{enumerate_all_words, max_code_exact, OracleResult};
pub use params::CodeParams;
