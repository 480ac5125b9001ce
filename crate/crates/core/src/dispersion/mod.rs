//! Group velocities, the resonance function and transversality scans.

mod resonance;
mod transversality;
mod velocity;

pub use resonance::{resonance, resonance_exact, resonance_partials, zk_resonance_expanded};
pub use transversality::{
    min_transversality, min_transversality_with, Constraint, Enumeration, FrequencyTriple, TransversalityOptions,
    TransversalityReport,
};
pub use velocity::{group_speed, group_velocity, group_velocity_exact};
