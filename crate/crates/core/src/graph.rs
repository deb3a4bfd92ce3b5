//! Immutable simple graphs and the neighborhood / component primitives.

use crate::vertex_set::VertexSet;
use crate::Error;

/// A simple undirected graph on vertices `0..n`.
///
/// Vertex indices double as the total order used to orient separators: a
/// vertex set precedes another when its minimum index is smaller.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    adj_list: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops are rejected; repeated
    /// edges are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Builds a graph from symmetric, loop-free adjacency sets.
    pub fn from_adjacency(adj: Vec<VertexSet>) -> Self {
        let n = adj.len();
        debug_assert!((0..n).all(|v| !adj[v].contains(v)));
        debug_assert!((0..n).all(|v| adj[v].iter().all(|u| adj[u].contains(v))));
        let adj_list: Vec<Vec<u32>> = adj
            .iter()
            .map(|s| s.iter().map(|u| u as u32).collect())
            .collect();
        let edge_count = adj_list.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            n,
            adj,
            adj_list,
            edge_count,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `N(v)` as a set.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// `N(v)` as an ascending slice.
    #[inline]
    pub fn neighbor_list(&self, v: usize) -> &[u32] {
        &self.adj_list[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj_list[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj_list[u]
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    /// `N(U) = (⋃_{v∈U} N(v)) \ U`.
    pub fn open_neighborhood(&self, u: &VertexSet) -> VertexSet {
        let mut r = self.empty_set();
        for v in u {
            r.union_with(&self.adj[v]);
        }
        r.difference_with(u);
        r
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| {
            let mut rest = s.clone();
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        })
    }

    /// The vertex set reachable from `start` inside `within`, together with
    /// the union of the neighborhoods of its members (which includes the
    /// component itself).
    fn grow(&self, start: usize, within: &VertexSet) -> (VertexSet, VertexSet) {
        let mut comp = self.empty_set();
        comp.insert(start);
        let mut reach = self.adj[start].clone();
        reach.insert(start);
        loop {
            let mut next = reach.intersection(within);
            next.difference_with(&comp);
            if next.is_empty() {
                break;
            }
            for v in &next {
                reach.union_with(&self.adj[v]);
            }
            comp.union_with(&next);
        }
        (comp, reach)
    }

    /// The connected component of `G[within]` containing `start`.
    pub fn component_of(&self, start: usize, within: &VertexSet) -> VertexSet {
        debug_assert!(within.contains(start));
        self.grow(start, within).0
    }

    /// Like [`Graph::component_of`], also returning the component's open
    /// neighborhood.
    pub fn component_and_neighborhood(&self, start: usize, within: &VertexSet) -> (VertexSet, VertexSet) {
        let (comp, mut nb) = self.grow(start, within);
        nb.difference_with(&comp);
        (comp, nb)
    }

    /// Components of `G[V \ s]`, ordered by minimum vertex.
    pub fn components(&self, s: &VertexSet) -> Vec<VertexSet> {
        self.components_with_neighborhoods(s)
            .into_iter()
            .map(|(c, _)| c)
            .collect()
    }

    /// Components of `G[V \ s]` paired with their open neighborhoods, ordered
    /// by minimum vertex. Each neighborhood is a subset of `s`.
    pub fn components_with_neighborhoods(&self, s: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
        let mut rest = self.all_vertices();
        rest.difference_with(s);
        self.components_within(&rest)
    }

    /// Components of `G[within]` paired with their open neighborhoods in `G`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
        let mut rest = within.clone();
        let mut out = Vec::new();
        while let Some(v) = rest.min_vertex() {
            let (comp, mut nb) = self.grow(v, &rest);
            nb.difference_with(&comp);
            rest.difference_with(&comp);
            out.push((comp, nb));
        }
        out
    }

    /// Whether `G[u]` is connected. Panics on the empty set.
    pub fn is_connected_set(&self, u: &VertexSet) -> bool {
        let v = u.min_vertex().expect("is_connected_set: empty set");
        self.component_of(v, u).len() == u.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.is_connected_set(&self.all_vertices())
    }

    /// The subgraph induced by `vertices`, relabelled to `0..|vertices|` in
    /// ascending order, with the mapping back to the original indices.
    pub fn induced_subgraph(&self, vertices: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = vertices.to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let m = map.len();
        let adj = map
            .iter()
            .map(|&v| {
                VertexSet::from_vertices(
                    m,
                    self.adj_list[v]
                        .iter()
                        .map(|&u| local[u as usize])
                        .filter(|&u| u != usize::MAX),
                )
            })
            .collect();
        (Graph::from_adjacency(adj), map)
    }

    /// `G⟨C⟩`: the graph on `N[C]` with `N(C)` completed into a clique,
    /// relabelled as in [`Graph::induced_subgraph`].
    pub fn completed_part(&self, component: &VertexSet) -> (Graph, Vec<usize>) {
        let sep = self.open_neighborhood(component);
        self.completed_subgraph(&component.union(&sep), &sep)
    }

    /// The subgraph induced by `vertices` with `clique` (a subset of
    /// `vertices`) turned into a clique.
    pub fn completed_subgraph(&self, vertices: &VertexSet, clique: &VertexSet) -> (Graph, Vec<usize>) {
        let (h, map) = self.induced_subgraph(vertices);
        let m = h.n();
        let local_clique: Vec<usize> = (0..m).filter(|&i| clique.contains(map[i])).collect();
        let mut adj = h.adj;
        for &a in &local_clique {
            for &b in &local_clique {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        (Graph::from_adjacency(adj), map)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn open_neighborhood_examples() {
        let p = path(3);
        assert_eq!(p.open_neighborhood(&set(3, &[1])), set(3, &[0, 2]));
        let c = cycle(4);
        assert_eq!(c.open_neighborhood(&set(4, &[0, 2])), set(4, &[1, 3]));
        assert!(c.open_neighborhood(&c.all_vertices()).is_empty());
    }

    #[test]
    fn components_examples() {
        let c = cycle(4);
        assert_eq!(c.components(&set(4, &[0, 2])), vec![set(4, &[1]), set(4, &[3])]);
        let p = path(3);
        assert_eq!(p.components(&set(3, &[])), vec![set(3, &[0, 1, 2])]);
        let k = complete(4);
        assert!(k.components(&k.all_vertices()).is_empty());
    }

    #[test]
    fn is_connected_examples() {
        let p = path(3);
        assert!(!p.is_connected_set(&set(3, &[0, 2])));
        assert!(p.is_connected_set(&set(3, &[0, 1])));
        assert!(p.is_connected_set(&set(3, &[2])));
    }

    #[test]
    #[should_panic]
    fn is_connected_rejects_empty() {
        path(3).is_connected_set(&VertexSet::new(3));
    }

    #[test]
    fn rejects_self_loops_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn completed_part_adds_clique() {
        // path 0-1-2-3-4, C = {2}: N[C] = {1,2,3}, N(C) = {1,3} completed
        let p = path(5);
        let (h, map) = p.completed_part(&set(5, &[2]));
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.edge_count(), 3);
        assert!(h.has_edge(0, 2));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..20).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |es| {
                Graph::from_edges(n, es.into_iter().filter(|(a, b)| a != b)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn neighborhood_disjoint_and_components_partition(g in arb_graph(), bits in any::<u32>()) {
            let n = g.n();
            let s = VertexSet::from_vertices(n, (0..n).filter(|i| bits >> i & 1 == 1));
            prop_assert!(!g.open_neighborhood(&s).intersects(&s));
            let comps = g.components_with_neighborhoods(&s);
            let mut seen = VertexSet::new(n);
            for (c, nb) in &comps {
                prop_assert!(!c.intersects(&seen));
                seen.union_with(c);
                prop_assert!(g.is_connected_set(c));
                prop_assert_eq!(nb, &g.open_neighborhood(c));
                prop_assert!(nb.is_subset(&s));
            }
            prop_assert_eq!(seen, g.all_vertices().difference(&s));
            for w in comps.windows(2) {
                prop_assert!(w[0].0.precedes(&w[1].0));
            }
        }
    }
}
