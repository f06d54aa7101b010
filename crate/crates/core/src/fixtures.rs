//! Small hand-checked k-flow instances.
//!
//! - `d1`: two parallel s→t edges, costs 1 and 2.
//! - `d2`: paths s→a→t (1, 1) and s→b→t (3, 3) plus a direct s→t edge of cost 10.
//! - `d3`: a single s→t edge of cost 1.
//! - `d4`: three parallel s→t edges, all of cost 1.

use crate::instance::{kflow_instance, Edge, Instance, KFlowGraph};
use crate::scalar::int;

fn edge(tail: usize, head: usize, cost: i64) -> Edge {
    Edge {
        tail,
        head,
        cost: int(cost),
    }
}

fn named(names: &[&str], edges: Vec<Edge>) -> KFlowGraph {
    let names = names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let sink = names.len() - 1;
    KFlowGraph::new(names, 0, sink, edges).expect("fixture graphs are valid")
}

pub fn d1_graph() -> KFlowGraph {
    named(&["s", "t"], vec![edge(0, 1, 1), edge(0, 1, 2)])
}

pub fn d2_graph() -> KFlowGraph {
    named(
        &["s", "a", "b", "t"],
        vec![edge(0, 1, 1), edge(1, 3, 1), edge(0, 2, 3), edge(2, 3, 3), edge(0, 3, 10)],
    )
}

pub fn d3_graph() -> KFlowGraph {
    named(&["s", "t"], vec![edge(0, 1, 1)])
}

pub fn d4_graph() -> KFlowGraph {
    named(&["s", "t"], vec![edge(0, 1, 1), edge(0, 1, 1), edge(0, 1, 1)])
}

pub fn d1() -> Instance {
    kflow_instance(&d1_graph())
}

pub fn d2() -> Instance {
    kflow_instance(&d2_graph())
}

pub fn d3() -> Instance {
    kflow_instance(&d3_graph())
}

pub fn d4() -> Instance {
    kflow_instance(&d4_graph())
}

/// Looks up a preset graph by name.
pub fn preset(name: &str) -> Option<KFlowGraph> {
    match name {
        "d1" => Some(d1_graph()),
        "d2" => Some(d2_graph()),
        "d3" => Some(d3_graph()),
        "d4" => Some(d4_graph()),
        _ => None,
    }
}
