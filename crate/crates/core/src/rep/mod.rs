//! Loop `ax+b` group, its central extension, and the representation
//! operators acting on path functionals.

pub mod checks;
pub mod group;
pub mod lie;
pub mod operator;

pub use group::{cocycle, inverse, multiply, GroupElement, GroupRecord};
pub use lie::{lie_d, lie_t, LieD, LieT};
pub use operator::{apply_rep, semigroup_guard, RepContext, Represented};
