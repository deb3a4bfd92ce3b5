//! PACE `.gr` / `.td` and DIMACS `.col` formats.
//!
//! Files are 1-indexed; graphs in memory are 0-indexed with the same order.

use std::fmt::Write as _;

use rustc_hash::FxHashSet;

use crate::graph::Graph;
use crate::td::TreeDecomposition;
use crate::vertex_set::VertexSet;
use crate::{Error, Result};

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn int(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    match tok {
        None => err(line, format!("missing {what}")),
        Some(t) => t
            .parse::<usize>()
            .or_else(|_| err(line, format!("{what}: expected a non-negative integer, found {t:?}"))),
    }
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => err(line, format!("unexpected token {t:?}")),
        None => Ok(()),
    }
}

fn vertex(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let v = int(tok, line, "vertex")?;
    if v == 0 || v > n {
        return err(line, format!("vertex {v} out of range 1..={n}"));
    }
    Ok(v - 1)
}

/// Collects edges, dropping self-loops and repeats with a warning.
struct EdgeSink {
    n: usize,
    edges: Vec<(usize, usize)>,
    seen: FxHashSet<(usize, usize)>,
}

impl EdgeSink {
    fn new(n: usize) -> Self {
        EdgeSink {
            n,
            edges: Vec::new(),
            seen: FxHashSet::default(),
        }
    }

    fn push(&mut self, u: usize, v: usize, line: usize) {
        if u == v {
            log::warn!("line {line}: dropping self-loop at vertex {}", u + 1);
            return;
        }
        if !self.seen.insert((u.min(v), u.max(v))) {
            log::warn!("line {line}: dropping duplicate edge {} {}", u + 1, v + 1);
            return;
        }
        self.edges.push((u, v));
    }

    fn finish(self) -> Graph {
        Graph::from_edges(self.n, self.edges).expect("edges were range-checked")
    }
}

/// Parses a PACE `.gr` graph.
pub fn read_gr(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut sink = EdgeSink::new(0);
    let mut count = 0;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return err(line, "duplicate header");
                }
                if toks.next() != Some("tw") {
                    return err(line, "expected header \"p tw <n> <m>\"");
                }
                let n = int(toks.next(), line, "vertex count")?;
                let m = int(toks.next(), line, "edge count")?;
                no_more(toks, line)?;
                header = Some((n, m));
                sink = EdgeSink::new(n);
            }
            _ => {
                let Some((n, m)) = header else {
                    return err(line, "edge line before header");
                };
                count += 1;
                if count > m {
                    return err(line, format!("more edge lines than the {m} declared"));
                }
                let u = vertex(Some(first), n, line)?;
                let v = vertex(toks.next(), n, line)?;
                no_more(toks, line)?;
                sink.push(u, v, line);
            }
        }
    }
    let Some((_, m)) = header else {
        return err(last.max(1), "missing header \"p tw <n> <m>\"");
    };
    if count < m {
        return err(last.max(1), format!("expected {m} edge lines, found {count}"));
    }
    Ok(sink.finish())
}

/// Parses a DIMACS `.col` graph. An edge count that disagrees with the
/// header only produces a warning, since many published files count each
/// edge twice.
pub fn read_col(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut sink = EdgeSink::new(0);
    let mut count = 0;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return err(line, "duplicate header");
                }
                match toks.next() {
                    Some("edge") | Some("edges") | Some("col") => {}
                    _ => return err(line, "expected header \"p edge <n> <m>\""),
                }
                let n = int(toks.next(), line, "vertex count")?;
                let m = int(toks.next(), line, "edge count")?;
                no_more(toks, line)?;
                header = Some((n, m));
                sink = EdgeSink::new(n);
            }
            "e" => {
                let Some((n, _)) = header else {
                    return err(line, "edge line before header");
                };
                let u = vertex(toks.next(), n, line)?;
                let v = vertex(toks.next(), n, line)?;
                no_more(toks, line)?;
                count += 1;
                sink.push(u, v, line);
            }
            t => return err(line, format!("unknown line type {t:?}")),
        }
    }
    let Some((_, m)) = header else {
        return err(last.max(1), "missing header \"p edge <n> <m>\"");
    };
    if count != m {
        log::warn!("header declares {m} edges, found {count} edge lines");
    }
    Ok(sink.finish())
}

pub fn write_gr(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

/// Formats a decomposition of a graph on `n` vertices.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = format!("s td {} {} {}\n", td.bags.len(), td.max_bag(), n);
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in b {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

/// Parses a `.td` file; returns the decomposition and the declared vertex
/// count.
pub fn read_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first {
            "c" => continue,
            "s" => {
                if header.is_some() {
                    return err(line, "duplicate header");
                }
                if toks.next() != Some("td") {
                    return err(line, "expected header \"s td <bags> <width+1> <n>\"");
                }
                let nb = int(toks.next(), line, "bag count")?;
                let mb = int(toks.next(), line, "maximum bag size")?;
                let n = int(toks.next(), line, "vertex count")?;
                no_more(toks, line)?;
                header = Some((nb, mb, n));
                bags = vec![None; nb];
            }
            "b" => {
                let Some((nb, mb, n)) = header else {
                    return err(line, "bag line before header");
                };
                let id = int(toks.next(), line, "bag id")?;
                if id == 0 || id > nb {
                    return err(line, format!("bag id {id} out of range 1..={nb}"));
                }
                if bags[id - 1].is_some() {
                    return err(line, format!("bag {id} defined twice"));
                }
                let mut bag = VertexSet::new(n);
                for t in toks {
                    bag.insert(vertex(Some(t), n, line)?);
                }
                if bag.len() > mb {
                    return err(line, format!("bag {id} has {} vertices, header allows {mb}", bag.len()));
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let Some((nb, _, _)) = header else {
                    return err(line, "edge line before header");
                };
                let a = int(Some(first), line, "bag id")?;
                let b = int(toks.next(), line, "bag id")?;
                no_more(toks, line)?;
                for x in [a, b] {
                    if x == 0 || x > nb {
                        return err(line, format!("bag id {x} out of range 1..={nb}"));
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let Some((_, mb, n)) = header else {
        return err(last.max(1), "missing header \"s td <bags> <width+1> <n>\"");
    };
    let mut out = Vec::with_capacity(bags.len());
    for (i, b) in bags.into_iter().enumerate() {
        match b {
            Some(b) => out.push(b),
            None => return err(last.max(1), format!("bag {} is never defined", i + 1)),
        }
    }
    let td = TreeDecomposition { bags: out, edges };
    if td.max_bag() != mb && !td.bags.is_empty() {
        log::warn!("header declares maximum bag size {mb}, actual {}", td.max_bag());
    }
    Ok((td, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn gr_path() {
        let g = read_gr("p tw 3 2\n1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn gr_too_many_edges() {
        let e = read_gr("p tw 3 2\n1 2\n2 3\n1 3\n").unwrap_err();
        assert_eq!(line_of(e), 4);
    }

    #[test]
    fn gr_comment_and_single_vertex() {
        let g = read_gr("c note\np tw 1 0").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
    }

    #[test]
    fn gr_tolerates_crlf_blank_and_trailing_space() {
        let g = read_gr("c x\r\np tw 3 2  \r\n\r\n1 2 \r\n2 3\r\n\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn gr_errors_are_located() {
        assert_eq!(line_of(read_gr("p tw 3 1\n1 x\n").unwrap_err()), 2);
        assert_eq!(line_of(read_gr("p tw 3 1\n1 4\n").unwrap_err()), 2);
        assert_eq!(line_of(read_gr("p tw 3 1\np tw 3 1\n").unwrap_err()), 2);
        assert_eq!(line_of(read_gr("1 2\np tw 3 1\n").unwrap_err()), 1);
        assert_eq!(line_of(read_gr("c only\n").unwrap_err()), 1);
        assert_eq!(line_of(read_gr("p tw 3 2\n1 2\n").unwrap_err()), 2);
        assert_eq!(line_of(read_gr("p tw 3 1\n1 2 3\n").unwrap_err()), 2);
    }

    #[test]
    fn gr_drops_loops_and_duplicates() {
        let g = read_gr("p tw 3 3\n1 2\n2 1\n3 3\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn col_basic() {
        let g = read_col("c test\np edge 3 4\ne 1 2\ne 2 1\ne 2 3\ne 3 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(line_of(read_col("p edge 3 1\nx 1 2\n").unwrap_err()), 2);
        assert_eq!(line_of(read_col("p edge 3 1\ne 1 9\n").unwrap_err()), 2);
    }

    #[test]
    fn td_single_bag() {
        let td = TreeDecomposition::single(VertexSet::from_vertices(3, [0, 1, 2]));
        assert_eq!(write_td(&td, 3), "s td 1 3 3\nb 1 1 2 3\n");
    }

    #[test]
    fn td_errors() {
        assert_eq!(line_of(read_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n").unwrap_err()), 4);
        assert_eq!(line_of(read_td("s td 1 2 3\nb 1 1 4\n").unwrap_err()), 2);
        assert_eq!(line_of(read_td("s td 1 1 3\nb 1 1 2\n").unwrap_err()), 2);
        assert!(read_td("s td 2 2 3\nb 1 1 2\n").is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..20).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..40).prop_map(move |es| {
                Graph::from_edges(n, es.into_iter().filter(|(a, b)| a != b)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn gr_round_trip(g in arb_graph()) {
            let h = read_gr(&write_gr(&g)).unwrap();
            prop_assert_eq!(h.n(), g.n());
            prop_assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        }

        #[test]
        fn td_round_trip(n in 1usize..30, bags in proptest::collection::vec(proptest::collection::vec(0usize..30, 0..6), 1..10), seed in any::<u64>()) {
            let bags: Vec<VertexSet> = bags
                .into_iter()
                .map(|b| VertexSet::from_vertices(n, b.into_iter().filter(|&v| v < n)))
                .collect();
            let edges = (1..bags.len()).map(|i| ((seed as usize).wrapping_add(i * 7) % i, i)).collect();
            let td = TreeDecomposition { bags, edges };
            let (back, m) = read_td(&write_td(&td, n)).unwrap();
            prop_assert_eq!(m, n);
            prop_assert_eq!(back, td);
        }

        #[test]
        fn parsers_are_total(text in "[cpetdsb0-9 \\n\\r-]{0,80}") {
            let _ = read_gr(&text);
            let _ = read_col(&text);
            let _ = read_td(&text);
        }
    }
}
