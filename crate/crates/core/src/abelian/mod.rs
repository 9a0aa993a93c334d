//! Finite abelian groups, their subgroups, and integer matrix presentations.

mod echelon;
mod group;
mod snf;
mod subgroup;

pub use echelon::{echelonize, EchelonForm, EchelonProfile};
pub use group::{CyclicFactor, Elements, FiniteAbelianGroup, GroupElement, PrimaryPart};
pub use snf::{determinant, has_integer_solution, identity, mat_mul, smith_normal_form, to_int_matrix, IntMatrix, SmithForm};
pub use subgroup::{
    echelon_generators, enumerate_subgroups_of_order, quotient_group, quotient_invariants, Subgroup,
};

