//! Kauffman bracket, linking numbers and crossing-number bounds.

mod bounds;
mod bracket;
mod poly;

pub use bounds::{
    cr_at_least_two, cr_at_least_two_with, crossing_lower_bound, crossing_number_exact, linked_groups,
    span_bound, span_lower_bound, span_lower_bound_split, CrTwoCertificate, CrTwoOptions, Sublink,
};
pub use bracket::{
    kauffman_bracket, kauffman_bracket_with_limit, linking_matrix, linking_number, writhe, DEFAULT_BRACKET_LIMIT,
};
pub use poly::LaurentPoly;
