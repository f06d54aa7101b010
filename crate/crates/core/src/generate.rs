//! Seeded random k-flow instances.
//!
//! Graphs are layered DAGs: intermediate nodes are dealt round-robin onto
//! `width` chains from `s` to `t`, which gives at least `width` edge-disjoint
//! s-t paths, and the remaining edge budget is spent on random forward edges.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Edge, KFlowGraph};
use crate::scalar::int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub nodes: usize,
    pub edges: usize,
    /// Number of backbone chains.
    pub width: usize,
    /// Costs are drawn uniformly from `0..=cost_bound`.
    pub cost_bound: u32,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            nodes: 6,
            edges: 10,
            width: 2,
            cost_bound: 10,
            seed: 0,
        }
    }
}

impl RandomSpec {
    /// Edges consumed by the backbone chains.
    pub fn backbone_edges(&self) -> usize {
        self.nodes.saturating_sub(2) + self.width
    }
}

pub fn random_kflow(spec: &RandomSpec) -> Result<KFlowGraph> {
    if spec.nodes < 2 {
        return Err(Error::Spec("need at least 2 nodes".into()));
    }
    if spec.edges == 0 {
        return Err(Error::Spec("need at least 1 edge".into()));
    }
    if spec.width == 0 {
        return Err(Error::Spec("width must be positive".into()));
    }
    if spec.edges < spec.backbone_edges() {
        return Err(Error::Spec(format!(
            "{} nodes with width {} need at least {} edges",
            spec.nodes,
            spec.width,
            spec.backbone_edges()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.nodes;
    let (s, t) = (0, n - 1);
    let cost = |rng: &mut ChaCha8Rng| int(rng.gen_range(0..=spec.cost_bound as i64));

    let mut edges = Vec::with_capacity(spec.edges);
    for chain in 0..spec.width {
        let mut prev = s;
        for v in (1..n - 1).skip(chain).step_by(spec.width) {
            edges.push(Edge { tail: prev, head: v, cost: cost(&mut rng) });
            prev = v;
        }
        edges.push(Edge { tail: prev, head: t, cost: cost(&mut rng) });
    }
    while edges.len() < spec.edges {
        let tail = rng.gen_range(0..n - 1);
        let head = rng.gen_range(tail + 1..n);
        edges.push(Edge { tail, head, cost: cost(&mut rng) });
    }
    edges.shuffle(&mut rng);

    let mut names = vec!["s".to_string()];
    names.extend((1..n - 1).map(|v| format!("v{v}")));
    names.push("t".to_string());
    KFlowGraph::new(names, s, t, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::kflow_instance;
    use crate::parametric::max_feasible_level;

    #[test]
    fn deterministic_for_a_seed() {
        let spec = RandomSpec {
            nodes: 5,
            edges: 9,
            seed: 7,
            ..RandomSpec::default()
        };
        assert_eq!(random_kflow(&spec).unwrap(), random_kflow(&spec).unwrap());
        let other = RandomSpec { seed: 8, ..spec.clone() };
        assert_ne!(random_kflow(&spec).unwrap(), random_kflow(&other).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let zero = RandomSpec { edges: 0, ..RandomSpec::default() };
        assert!(random_kflow(&zero).is_err());
        let short = RandomSpec { nodes: 8, edges: 5, width: 2, ..RandomSpec::default() };
        assert!(random_kflow(&short).is_err());
        assert!(random_kflow(&RandomSpec { nodes: 1, ..RandomSpec::default() }).is_err());
    }

    #[test]
    fn width_gives_disjoint_paths() {
        for seed in 0..20 {
            for width in 1..=3 {
                let spec = RandomSpec { nodes: 7, edges: 12, width, seed, ..RandomSpec::default() };
                let g = random_kflow(&spec).unwrap();
                assert_eq!(g.edges().len(), 12);
                assert!(g.edges().iter().all(|e| e.tail < e.head));
                let top = max_feasible_level(&kflow_instance(&g)).unwrap();
                assert!(top >= width as i64);
            }
        }
    }
}
