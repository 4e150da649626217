//! Special functions and determinant identities behind the capacity bounds.

mod minors;
mod special;
mod spectrum;
mod wishart;

pub use special::{digamma, digamma_sum, ln_gamma};
pub use minors::{index_subsets, principal_minor_sum, MAX_SUBSET_ORDER};
pub use spectrum::{generalized_nonzero_eigs, logdet_sandwich, separate_degenerate, EigenList, MomentParams};
pub use wishart::{expected_det, expected_logdet, h_vector, ln_expected_det, wishart_f, wishart_j};

pub(crate) use minors::check_order;
