//! Groups with solvable word problem and their rational group algebras.

mod element;
mod enumerate;
mod moments;
mod spec;

use thiserror::Error;

pub use element::GroupAlgebraElement;
pub use enumerate::{enumerate_group_algebra, group_algebra_index_of, GroupAlgebraEnumerator};
pub use moments::{
    free_cumulants, lambda_norm_lower, lambda_norm_lower_sweep, moments, moments_direct,
    moments_free, moments_from_cumulants, moments_via, preferred_route, MomentRoute,
};
pub use spec::{
    formal_inverse, free_reduce, generator_of, letter, parse_group_config, Backend, GroupSpec, Letter, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewriting did not terminate within {0} steps")]
    RewritingDiverged(usize),
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("bad multiplication table: {0}")]
    BadTable(String),
    #[error("group config line {line}: {message}")]
    BadConfig { line: usize, message: String },
    #[error("bad group algebra element: {0}")]
    BadElement(String),
    #[error("moment route does not apply to this element")]
    RouteNotApplicable,
    #[error("the group has fewer than {0} elements in reach")]
    EnumerationExhausted(usize),
}
