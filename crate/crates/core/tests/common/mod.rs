#![allow(dead_code)]

use pidtw::{Graph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random spanning tree plus uniformly chosen
/// extra edges up to `m` (capped at the complete graph).
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e) && !edges.contains(&(e.1, e.0)))
        .collect();
    rest.shuffle(rng);
    let want = m.min(n * (n - 1) / 2).saturating_sub(edges.len());
    edges.extend(rest.into_iter().take(want));
    Graph::from_edges(n, edges).unwrap()
}

pub fn densities(n: usize) -> [usize; 3] {
    [(3 * n).div_ceil(2), 2 * n, 3 * n]
}

/// Grows a connected set of about `size` vertices from a random seed.
pub fn random_connected_set<R: Rng>(rng: &mut R, g: &Graph, size: usize) -> VertexSet {
    let mut s = VertexSet::singleton(g.n(), rng.gen_range(0..g.n()));
    while s.len() < size {
        let frontier = g.open_neighborhood(&s).to_vec();
        let Some(&v) = frontier.choose(rng) else { break };
        s.insert(v);
    }
    s
}
