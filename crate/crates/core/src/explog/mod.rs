//! Exp-log normal forms, the Π/Σ grammar, hierarchy levels and the
//! Gurevič–Levitz class.

mod enf;
mod gl;
mod hierarchy;

pub use enf::{enf, enf_capped, replay_iso, EnfResult};
pub use gl::{gl_member, ClassMembership};
pub use hierarchy::{
    check_pi_sigma, compare_levels, level, level_of_normal, prenex_level, HierarchyLevel, LevelComparison, PiSigma,
    Side,
};
