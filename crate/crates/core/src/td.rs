//! Tree decompositions: construction from solver witnesses and validation.

use std::fmt;

use crate::graph::Graph;
use crate::solver::Witness;
use crate::vertex_set::VertexSet;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn single(bag: VertexSet) -> Self {
        TreeDecomposition {
            bags: vec![bag],
            edges: Vec::new(),
        }
    }

    /// Max bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Merges every bag into an adjacent bag that contains it.
    pub fn contract_subsumed(&mut self) {
        let m = self.bags.len();
        if m <= 1 {
            return;
        }
        let mut rep: Vec<usize> = (0..m).collect();
        fn find(rep: &mut [usize], mut x: usize) -> usize {
            while rep[x] != x {
                rep[x] = rep[rep[x]];
                x = rep[x];
            }
            x
        }
        loop {
            let mut changed = false;
            for &(a, b) in &self.edges {
                let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
                if ra == rb {
                    continue;
                }
                if self.bags[ra].is_subset(&self.bags[rb]) {
                    rep[ra] = rb;
                    changed = true;
                } else if self.bags[rb].is_subset(&self.bags[ra]) {
                    rep[rb] = ra;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut index = vec![usize::MAX; m];
        let mut bags = Vec::new();
        for (i, slot) in index.iter_mut().enumerate() {
            if find(&mut rep, i) == i {
                *slot = bags.len();
                bags.push(std::mem::replace(&mut self.bags[i], VertexSet::new(0)));
            }
        }
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            if ra != rb {
                edges.push((index[ra], index[rb]));
            }
        }
        self.bags = bags;
        self.edges = edges;
    }

    /// Appends `other` with its bags mapped through `map` (local vertex to
    /// vertex of a graph on `n` vertices); returns the offset of its bags.
    pub fn append_mapped(&mut self, other: &TreeDecomposition, map: &[usize], n: usize) -> usize {
        let off = self.bags.len();
        for b in &other.bags {
            self.bags.push(VertexSet::from_vertices(n, b.iter().map(|v| map[v])));
        }
        self.edges.extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        off
    }
}

/// Builds a decomposition from an accepting witness: one bag per PMC, each
/// attached to the PMC whose support component it was built for.
pub fn extract(g: &Graph, w: &Witness) -> Result<TreeDecomposition> {
    if w.root >= w.pmcs.len() {
        return Err(Error::Witness("root index out of range".into()));
    }
    let mut td = TreeDecomposition::default();
    let mut stack = vec![(w.root, usize::MAX, 0usize)];
    while let Some((p, parent, depth)) = stack.pop() {
        if depth > w.pmcs.len() {
            return Err(Error::Witness("cyclic witness".into()));
        }
        let (bag, children) = &w.pmcs[p];
        if bag.word_capacity() < g.n() {
            return Err(Error::Witness("bag capacity does not match graph".into()));
        }
        let id = td.bags.len();
        td.bags.push(bag.clone());
        if parent != usize::MAX {
            td.edges.push((parent, id));
        }
        for &c in children {
            if c >= w.pmcs.len() {
                return Err(Error::Witness(format!("child index {c} out of range")));
            }
            stack.push((c, id, depth + 1));
        }
    }
    td.contract_subsumed();
    Ok(td)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoBags,
    VertexOutOfRange { bag: usize, vertex: usize },
    EdgeOutOfRange { a: usize, b: usize },
    NotATree { bags: usize, edges: usize },
    Disconnected,
    VertexNotCovered(usize),
    EdgeNotCovered(usize, usize),
    VertexSubtreeDisconnected(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // vertices and bags are printed 1-indexed as in the file formats
        match self {
            Violation::NoBags => write!(f, "decomposition has no bags"),
            Violation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {} contains unknown vertex {}", bag + 1, vertex + 1)
            }
            Violation::EdgeOutOfRange { a, b } => write!(f, "tree edge {} {} names a missing bag", a + 1, b + 1),
            Violation::NotATree { bags, edges } => write!(f, "{bags} bags and {edges} edges cannot form a tree"),
            Violation::Disconnected => write!(f, "tree edges do not connect all bags"),
            Violation::VertexNotCovered(v) => write!(f, "vertex {} is in no bag", v + 1),
            Violation::EdgeNotCovered(u, v) => write!(f, "edge {} {} is in no bag", u + 1, v + 1),
            Violation::VertexSubtreeDisconnected(v) => {
                write!(f, "bags containing vertex {} are not connected", v + 1)
            }
        }
    }
}

/// Checks that `td` is a tree decomposition of `g`, returning every
/// violation found.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), Vec<Violation>> {
    let n = g.n();
    let m = td.bags.len();
    let mut out = Vec::new();
    if m == 0 {
        if n > 0 {
            out.push(Violation::NoBags);
        }
        return if out.is_empty() { Ok(()) } else { Err(out) };
    }
    for (i, b) in td.bags.iter().enumerate() {
        if let Some(v) = b.iter().find(|&v| v >= n) {
            out.push(Violation::VertexOutOfRange { bag: i, vertex: v });
        }
    }
    let mut tree_ok = true;
    for &(a, b) in &td.edges {
        if a >= m || b >= m {
            out.push(Violation::EdgeOutOfRange { a, b });
            tree_ok = false;
        }
    }
    if tree_ok && td.edges.len() + 1 != m {
        out.push(Violation::NotATree {
            bags: m,
            edges: td.edges.len(),
        });
        tree_ok = false;
    }
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &td.edges {
        if a < m && b < m {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    if tree_ok {
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            out.push(Violation::Disconnected);
            tree_ok = false;
        }
    }

    let mut nodes_with = vec![0usize; n];
    for b in &td.bags {
        for v in b.iter().filter(|&v| v < n) {
            nodes_with[v] += 1;
        }
    }
    for (v, &c) in nodes_with.iter().enumerate() {
        if c == 0 {
            out.push(Violation::VertexNotCovered(v));
        }
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            out.push(Violation::EdgeNotCovered(u, v));
        }
    }
    if tree_ok {
        // in a tree, the bags holding v are connected iff they span
        // exactly (count - 1) tree edges
        let mut edges_with = vec![0usize; n];
        for &(a, b) in &td.edges {
            for v in td.bags[a].intersection(&td.bags[b]).iter().filter(|&v| v < n) {
                edges_with[v] += 1;
            }
        }
        for v in 0..n {
            if nodes_with[v] > 0 && edges_with[v] + 1 != nodes_with[v] {
                out.push(Violation::VertexSubtreeDisconnected(v));
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
