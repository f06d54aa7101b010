//! Auction instances `(A, b, c)` and the k-flow construction.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, int, Scalar};
use crate::solution::SolutionVector;
use crate::solver::{solve_fixed, solve_primal, Fixing, SolveResult};

/// The TU system defining `min c·x  s.t.  A x = lambda b, 0 <= x <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    c: Vec<Scalar>,
    labels: Vec<String>,
}

impl Instance {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<i64>, c: Vec<Scalar>, labels: Vec<String>) -> Result<Self> {
        let m = b.len();
        let n = c.len();
        if m == 0 || n == 0 {
            return Err(Error::Invalid("instance needs at least one row and one column".into()));
        }
        if a.len() != m {
            return Err(Error::Invalid(format!("A has {} rows, b has {m}", a.len())));
        }
        if let Some(i) = a.iter().position(|row| row.len() != n) {
            return Err(Error::Invalid(format!("row {} of A has {} entries, expected {n}", i + 1, a[i].len())));
        }
        if labels.len() != n {
            return Err(Error::Invalid(format!("{} names for {n} columns", labels.len())));
        }
        if b.iter().all(|&v| v == 0) {
            return Err(Error::Invalid("b must be nonzero".into()));
        }
        if let Some(j) = c.iter().position(|v| v.is_negative()) {
            return Err(Error::Invalid(format!(
                "c must be nonnegative (column {} has cost {})",
                j + 1,
                format_scalar(&c[j])
            )));
        }
        if let Some(l) = labels.iter().find(|l| l.is_empty() || l.chars().any(char::is_whitespace)) {
            return Err(Error::Invalid(format!("column name {l:?} must be a nonempty whitespace-free token")));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("duplicate column name {}", w[0])));
        }
        Ok(Instance { a, b, c, labels })
    }

    /// Default names `x1..xn`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (1..=n).map(|j| format!("x{j}")).collect()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn c(&self) -> &[Scalar] {
        &self.c
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    /// Same `A`, `b` with another cost vector.
    pub fn with_costs(&self, c: Vec<Scalar>) -> Result<Instance> {
        Instance::new(self.a.clone(), self.b.clone(), c, self.labels.clone())
    }

    /// Keeps the listed columns (in the given order) and every row.
    pub fn restrict(&self, columns: &[usize]) -> Result<Instance> {
        let a = self
            .a
            .iter()
            .map(|row| columns.iter().map(|&j| row[j]).collect())
            .collect();
        let c = columns.iter().map(|&j| self.c[j].clone()).collect();
        let labels = columns.iter().map(|&j| self.labels[j].clone()).collect();
        Instance::new(a, self.b.clone(), c, labels)
    }

    /// `y · A_j`
    pub fn dual_column_product(&self, y: &[Scalar], j: usize) -> Scalar {
        let mut s = Scalar::zero();
        for (i, yi) in y.iter().enumerate() {
            let a = self.a[i][j];
            if a != 0 && !yi.is_zero() {
                s += yi * int(a);
            }
        }
        s
    }

    /// `A x`
    pub fn lhs(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.a
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, v)| **a != 0 && !v.is_zero())
                    .map(|(a, v)| v * int(*a))
                    .sum()
            })
            .collect()
    }

    pub fn cost_of(&self, x: &SolutionVector) -> Scalar {
        x.dot(&self.c)
    }

    /// `A x = lambda b` and `0 <= x <= 1`.
    pub fn is_feasible(&self, x: &SolutionVector, lambda: &Scalar) -> bool {
        x.len() == self.n()
            && self
                .lhs(x.values())
                .iter()
                .zip(&self.b)
                .all(|(l, b)| *l == lambda * int(*b))
    }
}

/// Unit-capacity directed graph with a source and a sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFlowGraph {
    node_names: Vec<String>,
    source: usize,
    sink: usize,
    edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub cost: Scalar,
}

impl KFlowGraph {
    pub fn new(node_names: Vec<String>, source: usize, sink: usize, edges: Vec<Edge>) -> Result<Self> {
        let nodes = node_names.len();
        if source >= nodes || sink >= nodes {
            return Err(Error::Graph("source or sink out of range".into()));
        }
        if source == sink {
            return Err(Error::Graph("source and sink must differ".into()));
        }
        if edges.is_empty() {
            return Err(Error::Graph("graph has no edges".into()));
        }
        for (k, e) in edges.iter().enumerate() {
            if e.tail >= nodes || e.head >= nodes {
                return Err(Error::Graph(format!("edge e{} has an endpoint out of range", k + 1)));
            }
            if e.tail == e.head {
                return Err(Error::Graph(format!("edge e{} is a self-loop", k + 1)));
            }
            if e.cost.is_negative() {
                return Err(Error::Graph(format!("edge e{} has a negative cost", k + 1)));
            }
        }
        Ok(KFlowGraph {
            node_names,
            source,
            sink,
            edges,
        })
    }

    /// Nodes named by their index.
    pub fn with_numbered_nodes(nodes: usize, source: usize, sink: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new((0..nodes).map(|v| v.to_string()).collect(), source, sink, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Node-edge incidence matrix (+1 at the tail, -1 at the head) with `b = e_s - e_t`.
/// Columns are labelled `e1..en` in edge order.
pub fn kflow_instance(g: &KFlowGraph) -> Instance {
    let m = g.node_count();
    let n = g.edges.len();
    let mut a = vec![vec![0i64; n]; m];
    for (j, e) in g.edges.iter().enumerate() {
        a[e.tail][j] = 1;
        a[e.head][j] = -1;
    }
    let mut b = vec![0i64; m];
    b[g.source] = 1;
    b[g.sink] = -1;
    let c = g.edges.iter().map(|e| e.cost.clone()).collect();
    let labels = (1..=n).map(|j| format!("e{j}")).collect();
    Instance::new(a, b, c, labels).expect("incidence construction is always valid")
}

#[derive(Clone, Debug)]
pub enum MonopolyVerdict {
    /// One feasible solution avoiding each column, in column order.
    Free(Vec<SolutionVector>),
    /// First column contained in every feasible solution.
    Monopoly(usize),
}

impl MonopolyVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, MonopolyVerdict::Free(_))
    }
}

/// For each column `j`, looks for a feasible point of `P(k)` with `x_j = 0`.
pub fn check_monopoly_free(inst: &Instance, k: i64) -> Result<MonopolyVerdict> {
    let level = int(k);
    if let SolveResult::Infeasible = solve_primal(inst, &level)? {
        return Err(Error::Infeasible(format!("P({k}) has no feasible solution")));
    }
    let mut witnesses = Vec::with_capacity(inst.n());
    let mut fixings = vec![Fixing::Free; inst.n()];
    for j in 0..inst.n() {
        fixings[j] = Fixing::Zero;
        match solve_fixed(inst, &level, &fixings)? {
            Some((x, _)) => witnesses.push(x),
            None => return Ok(MonopolyVerdict::Monopoly(j)),
        }
        fixings[j] = Fixing::Free;
    }
    Ok(MonopolyVerdict::Free(witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::ratio;

    #[test]
    fn validation_errors() {
        let err = Instance::new(vec![vec![1]], vec![0], vec![int(1)], vec!["a".into()]).unwrap_err();
        assert!(err.to_string().contains("b must be nonzero"));
        let err = Instance::new(vec![vec![1]], vec![1], vec![int(-1)], vec!["a".into()]).unwrap_err();
        assert!(err.to_string().contains("c must be nonnegative"));
        let err = Instance::new(vec![vec![1, 1]], vec![1], vec![int(1), int(1)], vec!["a".into(), "a".into()])
            .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        assert!(Instance::new(vec![vec![1]], vec![1], vec![int(1)], vec!["a b".into()]).is_err());
    }

    #[test]
    fn incidence_of_parallel_edges() {
        let d1 = fixtures::d1();
        assert_eq!(d1.a(), &[vec![1, 1], vec![-1, -1]]);
        assert_eq!(d1.b(), &[1, -1]);
        assert_eq!(d1.c(), &[int(1), int(2)]);
        assert_eq!(d1.labels(), &["e1".to_string(), "e2".to_string()]);

        let d4 = fixtures::d4();
        assert_eq!((d4.m(), d4.n()), (2, 3));
        assert_eq!(d4.b(), &[1, -1]);
    }

    #[test]
    fn graph_invariants() {
        let edge = |t, h| Edge { tail: t, head: h, cost: int(1) };
        assert!(KFlowGraph::with_numbered_nodes(2, 0, 0, vec![edge(0, 1)]).is_err());
        assert!(KFlowGraph::with_numbered_nodes(2, 0, 1, vec![edge(1, 1)]).is_err());
        assert!(KFlowGraph::with_numbered_nodes(2, 0, 1, vec![]).is_err());
        assert!(KFlowGraph::with_numbered_nodes(2, 0, 1, vec![edge(0, 2)]).is_err());
        let neg = Edge { tail: 0, head: 1, cost: ratio(-1, 2) };
        assert!(KFlowGraph::with_numbered_nodes(2, 0, 1, vec![neg]).is_err());
    }

    #[test]
    fn monopoly_checks() {
        match check_monopoly_free(&fixtures::d1(), 1).unwrap() {
            MonopolyVerdict::Free(w) => {
                assert_eq!(w[0].support(), vec![1]);
                assert_eq!(w[1].support(), vec![0]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            check_monopoly_free(&fixtures::d3(), 1).unwrap(),
            MonopolyVerdict::Monopoly(0)
        ));
        assert!(check_monopoly_free(&fixtures::d2(), 1).unwrap().is_free());
        // D1 at k = 2 uses both edges
        assert!(matches!(
            check_monopoly_free(&fixtures::d1(), 2).unwrap(),
            MonopolyVerdict::Monopoly(0)
        ));
        assert!(matches!(check_monopoly_free(&fixtures::d1(), 3), Err(Error::Infeasible(_))));
    }

    #[test]
    fn restrict_keeps_rows() {
        let d2 = fixtures::d2();
        let r = d2.restrict(&[0, 1]).unwrap();
        assert_eq!(r.m(), d2.m());
        assert_eq!(r.labels(), &["e1".to_string(), "e2".to_string()]);
    }
}
