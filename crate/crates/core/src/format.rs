//! Text formats: `TU-AUCTION v1` for raw instances and `KFLOW v1` for graphs.
//!
//! Both are line oriented; `#` starts a comment and blank lines are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{kflow_instance, Edge, Instance, KFlowGraph};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

pub const INSTANCE_HEADER: &str = "TU-AUCTION v1";
pub const KFLOW_HEADER: &str = "KFLOW v1";

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(parse_err(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| *l)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_ints(line: usize, text: &str, expected: usize, what: &str) -> Result<Vec<i64>> {
    let vals = text
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| parse_err(line, format!("{what}: {t:?} is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != expected {
        return Err(parse_err(line, format!("{what}: expected {expected} values, found {}", vals.len())));
    }
    Ok(vals)
}

fn expect_keyword(lines: &mut Lines<'_>, keyword: &str) -> Result<()> {
    let (n, l) = lines.next(keyword)?;
    if l != keyword {
        return Err(parse_err(n, format!("expected {keyword:?}, found {l:?}")));
    }
    Ok(())
}

fn parse_count(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| parse_err(line, format!("expected a nonnegative integer for {what}")))
}

/// Parses a `TU-AUCTION v1` document.
pub fn load_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (n0, header) = lines.next("header")?;
    if header != INSTANCE_HEADER {
        return Err(parse_err(n0, format!("expected header {INSTANCE_HEADER:?}")));
    }
    let (ln, dims) = lines.next("dimensions")?;
    let toks: Vec<&str> = dims.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "m" || toks[2] != "n" {
        return Err(parse_err(ln, "expected `m <int> n <int>`"));
    }
    let m = parse_count(ln, Some(toks[1]), "m")?;
    let n = parse_count(ln, Some(toks[3]), "n")?;

    expect_keyword(&mut lines, "A")?;
    let mut a = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, row) = lines.next("a row of A")?;
        a.push(parse_ints(ln, row, n, &format!("row {} of A", i + 1))?);
    }
    expect_keyword(&mut lines, "b")?;
    let (ln, row) = lines.next("b")?;
    let b = parse_ints(ln, row, m, "b")?;
    expect_keyword(&mut lines, "c")?;
    let (ln, row) = lines.next("c")?;
    let c = row
        .split_whitespace()
        .map(|t| parse_scalar(t).ok_or_else(|| parse_err(ln, format!("c: {t:?} is not a rational"))))
        .collect::<Result<Vec<Scalar>>>()?;
    if c.len() != n {
        return Err(parse_err(ln, format!("c: expected {n} values, found {}", c.len())));
    }
    let labels = if lines.peek() == Some("names") {
        lines.next("names")?;
        let (ln, row) = lines.next("column names")?;
        let labels: Vec<String> = row.split_whitespace().map(str::to_string).collect();
        if labels.len() != n {
            return Err(parse_err(ln, format!("names: expected {n} tokens, found {}", labels.len())));
        }
        labels
    } else {
        Instance::default_labels(n)
    };
    if let Some(extra) = lines.peek() {
        let (ln, _) = lines.next("")?;
        return Err(parse_err(ln, format!("unexpected trailing content {extra:?}")));
    }
    Instance::new(a, b, c, labels)
}

/// Renders an instance so that [`load_instance`] reproduces it exactly.
pub fn save_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    writeln!(out, "m {} n {}", inst.m(), inst.n()).unwrap();
    writeln!(out, "A").unwrap();
    for row in inst.a() {
        writeln!(out, "{}", join(row)).unwrap();
    }
    writeln!(out, "b").unwrap();
    writeln!(out, "{}", join(inst.b())).unwrap();
    writeln!(out, "c").unwrap();
    writeln!(
        out,
        "{}",
        inst.c().iter().map(format_scalar).collect::<Vec<_>>().join(" ")
    )
    .unwrap();
    writeln!(out, "names").unwrap();
    writeln!(out, "{}", inst.labels().join(" ")).unwrap();
    out
}

/// Parses a `KFLOW v1` document.
///
/// An optional `names` line right after the node line fixes the node order.
/// Without it, node tokens are numbered in order of first appearance (source,
/// sink, then edge endpoints); `nodes` bounds how many distinct tokens may
/// appear and the remaining nodes are isolated.
pub fn load_kflow(text: &str) -> Result<KFlowGraph> {
    let mut lines = Lines::new(text);
    let (n0, header) = lines.next("header")?;
    if header != KFLOW_HEADER {
        return Err(parse_err(n0, format!("expected header {KFLOW_HEADER:?}")));
    }
    let (ln, spec) = lines.next("node line")?;
    let toks: Vec<&str> = spec.split_whitespace().collect();
    if toks.len() != 6 || toks[0] != "nodes" || toks[2] != "source" || toks[4] != "sink" {
        return Err(parse_err(ln, "expected `nodes <int> source <token> sink <token>`"));
    }
    let nodes = parse_count(ln, Some(toks[1]), "nodes")?;
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    if lines.peek().is_some_and(|l| l.split_whitespace().next() == Some("names")) {
        let (ln, l) = lines.next("names")?;
        for tok in l.split_whitespace().skip(1) {
            if ids.insert(tok.to_string(), names.len()).is_some() {
                return Err(parse_err(ln, format!("names: {tok:?} listed twice")));
            }
            names.push(tok.to_string());
        }
        if names.len() != nodes {
            return Err(parse_err(ln, format!("names: expected {nodes} node names, found {}", names.len())));
        }
    }
    let mut intern = |tok: &str, line: usize| -> Result<usize> {
        if let Some(&id) = ids.get(tok) {
            return Ok(id);
        }
        if names.len() == nodes {
            return Err(parse_err(line, format!("more than {nodes} distinct node names")));
        }
        ids.insert(tok.to_string(), names.len());
        names.push(tok.to_string());
        Ok(names.len() - 1)
    };
    let source = intern(toks[3], ln)?;
    let sink = intern(toks[5], ln)?;

    let mut edges = Vec::new();
    while lines.peek().is_some() {
        let (ln, l) = lines.next("edge")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "edge" {
            return Err(parse_err(ln, "expected `edge <tail> <head> <cost>`"));
        }
        let tail = intern(toks[1], ln)?;
        let head = intern(toks[2], ln)?;
        let cost = parse_scalar(toks[3]).ok_or_else(|| parse_err(ln, format!("{:?} is not a rational", toks[3])))?;
        edges.push(Edge { tail, head, cost });
    }
    let mut filler = 0usize;
    while names.len() < nodes {
        let name = format!("_{filler}");
        filler += 1;
        if !ids.contains_key(&name) {
            ids.insert(name.clone(), names.len());
            names.push(name);
        }
    }
    KFlowGraph::new(names, source, sink, edges)
}

pub fn save_kflow(g: &KFlowGraph) -> String {
    let mut out = String::new();
    let names = g.node_names();
    writeln!(out, "{KFLOW_HEADER}").unwrap();
    writeln!(
        out,
        "nodes {} source {} sink {}",
        g.node_count(),
        names[g.source()],
        names[g.sink()]
    )
    .unwrap();
    writeln!(out, "names {}", names.join(" ")).unwrap();
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", names[e.tail], names[e.head], format_scalar(&e.cost)).unwrap();
    }
    out
}

/// Loads either format, dispatching on the header line.
pub fn load_any(text: &str) -> Result<Instance> {
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match header {
        Some(KFLOW_HEADER) => load_kflow(text).map(|g| kflow_instance(&g)),
        _ => load_instance(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{int, ratio};

    const D1_TEXT: &str = "\
# two parallel s-t edges
TU-AUCTION v1
m 2 n 2
A
1 1
-1 -1   # head row
b
1 -1
c
1 2
names
e1 e2
";

    #[test]
    fn loads_d1_fixture() {
        let inst = load_instance(D1_TEXT).unwrap();
        assert_eq!((inst.m(), inst.n()), (2, 2));
        assert_eq!(inst, fixtures::d1());
        assert_eq!(load_instance(&save_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn validation_messages() {
        let zero_b = D1_TEXT.replace("1 -1\nc", "0 0\nc");
        assert!(load_instance(&zero_b).unwrap_err().to_string().contains("b must be nonzero"));
        let neg_c = D1_TEXT.replace("1 2\nnames", "-1 2\nnames");
        assert!(load_instance(&neg_c).unwrap_err().to_string().contains("c must be nonnegative"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = D1_TEXT.replace("-1 -1", "-1 x");
        match load_instance(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let short = D1_TEXT.replace("1 2\nnames", "1\nnames");
        assert!(matches!(load_instance(&short), Err(Error::Parse { line: 10, .. })));
        assert!(matches!(load_instance("TU-AUCTION v2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_instance("TU-AUCTION v1\nm 1 n 1\nA\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn names_are_optional() {
        let text = "TU-AUCTION v1\nm 1 n 2\nA\n1 1\nb\n1\nc\n0 1/2\n";
        let inst = load_instance(text).unwrap();
        assert_eq!(inst.labels(), &["x1".to_string(), "x2".to_string()]);
        assert_eq!(inst.c()[1], ratio(1, 2));
    }

    #[test]
    fn rational_costs_survive() {
        let inst = fixtures::d1().with_costs(vec![ratio(7, 3), int(2)]).unwrap();
        let text = save_instance(&inst);
        assert!(text.contains("7/3"));
        assert_eq!(load_instance(&text).unwrap(), inst);
    }

    #[test]
    fn round_trips_presets() {
        for inst in [fixtures::d1(), fixtures::d2(), fixtures::d3(), fixtures::d4()] {
            assert_eq!(load_instance(&save_instance(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn kflow_text() {
        let text = "KFLOW v1\nnodes 4 source s sink t\nedge s a 1\nedge a t 1\nedge s b 3\nedge b t 3\nedge s t 10\n";
        let g = load_kflow(text).unwrap();
        assert_eq!(g.node_names(), &["s", "t", "a", "b"]);
        let inst = kflow_instance(&g);
        assert_eq!(inst.n(), 5);
        assert_eq!(inst.b(), &[1, -1, 0, 0]);
        assert_eq!(load_kflow(&save_kflow(&g)).unwrap(), g);
        assert_eq!(load_any(text).unwrap(), inst);

        assert!(load_kflow("KFLOW v1\nnodes 2 source s sink s\nedge s s 1\n").is_err());
        assert!(load_kflow("KFLOW v1\nnodes 2 source s sink t\nnames s s\nedge s t 1\n").is_err());
        assert!(load_kflow("KFLOW v1\nnodes 3 source s sink t\nnames s t\nedge s t 1\n").is_err());
        assert!(matches!(
            load_kflow("KFLOW v1\nnodes 2 source s sink t\nedge s u 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
