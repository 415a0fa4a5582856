//! Decision procedures: window polytopes, periodic extension, the `H(M)` bound,
//! SFT emptiness and the non-extendibility semi-decider.

mod bound;
mod refute;
mod sft;
mod torus;
mod window;

pub use bound::{compute_h, epsilon_bound, h_bounds};
pub use refute::{refute_nonextendible, Method, RefutationReport, Verdict, WindowSchedule};
pub use sft::{
    admissible_pattern, admissible_patterns, enumerate_periodic_configs, periodic_config_search, sft_emptiness,
    torus_admissible, PeriodicSearch, SftVerdict, WordSet,
};
pub use torus::{
    periodic_extension, periodic_extension_with, pullback_periodic, PeriodicOutcome, PeriodicVerdict, TorusForm,
    TorusMeasure, TorusPolytope,
};
pub use window::{build_window_polytope, ExtensionPolytope};
