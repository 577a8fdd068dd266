//! Pattern counts in host graphs: injective homomorphisms, copies, induced
//! copies, copy lists, `D_k` classes, overlap pairs and join catalogs.

mod copies;
mod joins;
mod search;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::canon::{automorphism_count, symmetry_breaking_constraints};
use crate::error::{ChromaError, Result};
use crate::graph::Graph;

pub use copies::{count_dk, count_overlap_pairs, enumerate_copies, overlap_profile, CopyList, DEFAULT_COPY_CAP};
pub use joins::{enumerate_supergraph_classes, enumerate_t_joins, t_join, GraphSummary, JoinCatalog, SupergraphClasses};

pub(crate) use search::RankedHost;
use search::{count_embeddings, Mode};

/// `|hom_inj(h, g)|`.
pub fn count_injective_homs(h: &Graph, g: &Graph) -> BigUint {
    let host = RankedHost::new(g);
    BigUint::from(count_embeddings(h, &host, Mode::default(), &[]))
}

/// `N(h, g)`: injective homomorphisms divided by `|Aut(h)|`.
pub fn count_copies(h: &Graph, g: &Graph) -> Result<BigUint> {
    let homs = count_injective_homs(h, g);
    let aut = automorphism_count(h);
    let (q, r) = homs.div_rem(&aut);
    if !r.is_zero() {
        return Err(ChromaError::Internal(format!(
            "{homs} injective homomorphisms are not divisible by |Aut| = {aut}"
        )));
    }
    Ok(q)
}

/// Copies counted directly, one symmetry-broken embedding per copy. An
/// independent route to [`count_copies`].
pub fn count_copies_symmetry_broken(h: &Graph, g: &Graph) -> BigUint {
    let host = RankedHost::new(g);
    let constraints = symmetry_breaking_constraints(h);
    let mode = Mode {
        induced: false,
        one_per_copy: true,
    };
    BigUint::from(count_embeddings(h, &host, mode, &constraints))
}

/// `N_ind(f, g)`: vertex subsets of `g` inducing a graph isomorphic to `f`.
pub fn count_induced_copies(f: &Graph, g: &Graph) -> BigUint {
    let host = RankedHost::new(g);
    count_induced_in(f, &host)
}

pub(crate) fn count_induced_in(f: &Graph, host: &RankedHost) -> BigUint {
    let constraints = symmetry_breaking_constraints(f);
    let mode = Mode {
        induced: true,
        one_per_copy: true,
    };
    BigUint::from(count_embeddings(f, host, mode, &constraints))
}

/// Copy counter for one pattern, reused across many hosts.
#[derive(Clone, Debug)]
pub struct CopyCounter {
    pattern: Graph,
    constraints: Vec<(usize, usize)>,
}

impl CopyCounter {
    pub fn new(h: &Graph) -> Self {
        CopyCounter {
            pattern: h.clone(),
            constraints: symmetry_breaking_constraints(h),
        }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn count(&self, g: &Graph) -> u128 {
        if g.edge_count() < self.pattern.edge_count() || g.vertex_count() < self.pattern.vertex_count() {
            return 0;
        }
        let host = RankedHost::new(g);
        let mode = Mode {
            induced: false,
            one_per_copy: true,
        };
        count_embeddings(&self.pattern, &host, mode, &self.constraints)
    }
}

#[cfg(test)]
mod tests;
