//! Monochromatic copies of a pattern graph under uniform random vertex
//! colorings: exact counts and moments, Poisson-mixture limit laws,
//! Erdős–Rényi regime classification, Monte Carlo estimation and
//! generalized birthday-problem calculators.

pub mod birthday;
pub mod canon;
pub mod counting;
pub mod error;
pub mod graph;
pub mod limit;
pub mod moments;
pub mod num;
pub mod simulation;

pub use canon::{automorphism_count, canonical_form, CanonicalForm};
pub use error::{ChromaError, Result};
pub use graph::{parse_edge_list, Graph, GraphSpec};
pub use limit::{PoissonMixture, Regime, RegimeReport};
pub use moments::{MomentReport, Pmf};
pub use num::Rational;
pub use simulation::EmpiricalDistribution;
