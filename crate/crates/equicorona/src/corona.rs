//! Corona products G∘H and iterated products G∘^l H with a fixed vertex
//! layout so a depth l-1 coloring embeds verbatim into depth l.
//!
//! Layout rule: in G∘H the first n_G vertices are G; the copy linked to
//! center vertex v occupies n_G + v*n_H .. n_G + v*n_H + n_H - 1, preserving
//! H's vertex order. G∘^l H iterates this rule, so the first
//! n_G*(n_H+1)^(l-1) vertices of depth l induce the depth l-1 graph.

use thiserror::Error;

use crate::graph::Graph;

/// Refusing to build products beyond this many vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 200_000;

#[derive(Debug, Error)]
pub enum CoronaError {
    #[error("product would have {required} vertices, over the budget of {budget}")]
    VertexBudgetExceeded { required: u128, budget: usize },
    #[error("flat index {flat} out of range for a product on {total} vertices")]
    IndexOutOfRange { flat: usize, total: u128 },
    #[error("center and outer graphs must be nonempty")]
    EmptyFactor,
}

/// An l-corona product specification: center G, outer H, depth l >= 0.
#[derive(Clone, Debug)]
pub struct CoronaSpec {
    pub center: Graph,
    pub outer: Graph,
    pub depth: u32,
}

impl CoronaSpec {
    pub fn new(center: Graph, outer: Graph, depth: u32) -> Result<Self, CoronaError> {
        if center.n() == 0 || outer.n() == 0 {
            return Err(CoronaError::EmptyFactor);
        }
        Ok(CoronaSpec { center, outer, depth })
    }

    /// n_G * (n_H + 1)^l, computed without overflow.
    pub fn vertex_count(&self) -> u128 {
        let base = (self.outer.n() + 1) as u128;
        (self.center.n() as u128) * base.pow(self.depth)
    }
}

/// Provenance of a flat vertex index in G∘^l H: level 0 vertices are the
/// original G; a level-j vertex belongs to a copy of H attached to `parent`
/// at step j and sits at position `within` of H's vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoronaAddress {
    pub flat: usize,
    pub level: u32,
    pub parent: Option<usize>,
    pub within: Option<usize>,
}

pub fn corona_product(g: &Graph, h: &Graph) -> Graph {
    let ng = g.n();
    let nh = h.n();
    let total = ng * (nh + 1);
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for v in 0..ng {
        let base = ng + v * nh;
        for &(a, b) in h.edges() {
            edges.push((base + a, base + b));
        }
        for w in 0..nh {
            edges.push((v, base + w));
        }
    }
    Graph::from_edges(total, edges).expect("corona product of valid graphs is valid")
}

pub fn l_corona(spec: &CoronaSpec) -> Result<Graph, CoronaError> {
    l_corona_with_budget(spec, DEFAULT_VERTEX_BUDGET)
}

pub fn l_corona_with_budget(spec: &CoronaSpec, budget: usize) -> Result<Graph, CoronaError> {
    let required = spec.vertex_count();
    if required > budget as u128 {
        return Err(CoronaError::VertexBudgetExceeded { required, budget });
    }
    let mut g = spec.center.clone();
    for _ in 0..spec.depth {
        g = corona_product(&g, &spec.outer);
    }
    Ok(g)
}

pub fn decode_address(spec: &CoronaSpec, flat: usize) -> Result<CoronaAddress, CoronaError> {
    let total = spec.vertex_count();
    if (flat as u128) >= total {
        return Err(CoronaError::IndexOutOfRange { flat, total });
    }
    let ng = spec.center.n();
    let nh = spec.outer.n();
    if flat < ng {
        return Ok(CoronaAddress {
            flat,
            level: 0,
            parent: None,
            within: None,
        });
    }
    // Find the step j at which this vertex was added: the smallest j with
    // flat < n_G (n_H+1)^j.
    let mut prev = ng;
    for level in 1..=spec.depth {
        let next = prev * (nh + 1);
        if flat < next {
            return Ok(CoronaAddress {
                flat,
                level,
                parent: Some((flat - prev) / nh),
                within: Some((flat - prev) % nh),
            });
        }
        prev = next;
    }
    unreachable!("flat index below vertex_count is always decoded");
}

pub fn encode_address(spec: &CoronaSpec, addr: &CoronaAddress) -> Result<usize, CoronaError> {
    let ng = spec.center.n();
    let nh = spec.outer.n();
    match (addr.level, addr.parent, addr.within) {
        (0, None, None) => {
            if addr.flat < ng {
                Ok(addr.flat)
            } else {
                Err(CoronaError::IndexOutOfRange {
                    flat: addr.flat,
                    total: ng as u128,
                })
            }
        }
        (level, Some(parent), Some(within)) if level >= 1 => {
            let prev = ng * (nh + 1).pow(level - 1);
            Ok(prev + parent * nh + within)
        }
        _ => Err(CoronaError::IndexOutOfRange {
            flat: addr.flat,
            total: spec.vertex_count(),
        }),
    }
}
