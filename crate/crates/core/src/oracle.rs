//! Brute-force references for small graphs. Independent of the solver: they
//! work on `u32` adjacency masks and only share [`Graph`] for input.

use std::collections::BTreeSet;

use rustc_hash::FxHashSet;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;
use crate::{Error, Result};

pub const TREEWIDTH_LIMIT: usize = 20;
pub const ENUMERATION_LIMIT: usize = 16;
pub const TRIANGULATION_LIMIT: usize = 10;
const MASK_LIMIT: usize = 32;

fn masks(g: &Graph, limit: usize) -> Result<Vec<u32>> {
    if g.n() > limit {
        return Err(Error::TooLarge { n: g.n(), limit });
    }
    Ok((0..g.n())
        .map(|v| g.neighbor_list(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect())
}

fn to_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
}

fn nbhd(adj: &[u32], set: u32) -> u32 {
    let mut r = 0;
    let mut s = set;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        s &= s - 1;
        r |= adj[v];
    }
    r & !set
}

/// Component of `G[within]` containing the lowest bit of `seed`.
fn flood(adj: &[u32], seed: u32, within: u32) -> u32 {
    let mut comp = seed & seed.wrapping_neg();
    loop {
        let next = (comp | nbhd(adj, comp)) & within;
        if next == comp {
            return comp;
        }
        comp = next;
    }
}

fn components(adj: &[u32], within: u32) -> Vec<u32> {
    let mut rest = within;
    let mut out = Vec::new();
    while rest != 0 {
        let c = flood(adj, rest, rest);
        rest &= !c;
        out.push(c);
    }
    out
}

/// Exact treewidth by dynamic programming over elimination prefixes:
/// `TW(S) = min_{v ∈ S} max(TW(S \ v), |Q(S \ v, v)|)`, where `Q(S, v)` is
/// the set of vertices outside `S ∪ {v}` reachable from `v` through `S`.
pub fn bf_treewidth(g: &Graph) -> Result<usize> {
    let adj = masks(g, TREEWIDTH_LIMIT)?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    let mut tw = vec![u8::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let sub = tw[prev as usize];
            if sub >= best {
                continue;
            }
            let comp = flood(&adj, 1 << v, prev | 1 << v);
            let q = (nbhd(&adj, comp) & !prev).count_ones() as u8;
            best = best.min(sub.max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

fn is_min_sep_mask(adj: &[u32], full: u32, s: u32) -> bool {
    components(adj, full & !s)
        .into_iter()
        .filter(|&c| nbhd(adj, c) == s)
        .nth(1)
        .is_some()
}

/// All minimal separators, by testing every vertex subset.
pub fn enumerate_minimal_separators(g: &Graph) -> Result<Vec<VertexSet>> {
    let adj = masks(g, ENUMERATION_LIMIT)?;
    let n = g.n();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut out: Vec<u32> = (1..full).filter(|&s| is_min_sep_mask(&adj, full, s)).collect();
    out.sort_unstable();
    Ok(out.into_iter().map(|m| to_set(n, m)).collect())
}

/// All minimal separators by closure: start from `N(C)` for the components
/// `C` of `G - N[v]`, then repeatedly add `N(C)` for the components of
/// `G - (S ∪ N(x))`, `x ∈ S`.
pub fn minimal_separators_by_closure(g: &Graph) -> Result<Vec<VertexSet>> {
    let adj = masks(g, MASK_LIMIT)?;
    let n = g.n();
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    let mut seen: FxHashSet<u32> = FxHashSet::default();
    let mut todo = Vec::new();
    let add = |s: u32, seen: &mut FxHashSet<u32>, todo: &mut Vec<u32>| {
        if s != 0 && seen.insert(s) {
            todo.push(s);
        }
    };
    for v in 0..n {
        let closed = adj[v] | 1 << v;
        for c in components(&adj, full & !closed) {
            add(nbhd(&adj, c), &mut seen, &mut todo);
        }
    }
    while let Some(s) = todo.pop() {
        let mut xs = s;
        while xs != 0 {
            let x = xs.trailing_zeros() as usize;
            xs &= xs - 1;
            for c in components(&adj, full & !(s | adj[x])) {
                add(nbhd(&adj, c), &mut seen, &mut todo);
            }
        }
    }
    let mut out: Vec<u32> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out.into_iter().map(|m| to_set(n, m)).collect())
}

fn is_pmc_mask(adj: &[u32], full: u32, k: u32) -> bool {
    let comps = components(adj, full & !k);
    let nbs: Vec<u32> = comps.iter().map(|&c| nbhd(adj, c)).collect();
    if nbs.contains(&k) {
        return false;
    }
    let mut xs = k;
    while xs != 0 {
        let x = xs.trailing_zeros() as usize;
        xs &= xs - 1;
        let mut cover = adj[x] | 1 << x;
        for &nb in &nbs {
            if nb >> x & 1 == 1 {
                cover |= nb;
            }
        }
        if k & !cover != 0 {
            return false;
        }
    }
    true
}

/// All potential maximal cliques, by testing every non-empty vertex subset.
pub fn enumerate_pmcs(g: &Graph) -> Result<Vec<VertexSet>> {
    let adj = masks(g, ENUMERATION_LIMIT)?;
    let n = g.n();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    Ok((1..=full)
        .filter(|&k| is_pmc_mask(&adj, full, k))
        .map(|m| to_set(n, m))
        .collect())
}

// Second route to PMCs and minimal separators: the maximal cliques and the
// minimal separators of all minimal triangulations. Triangulations are fill
// graphs of elimination orderings, kept as edge masks.

fn edge_bit(n: usize, u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    1 << (a * n + b - (a + 1) * (a + 2) / 2)
}

fn edge_adjacency(n: usize, h: u64) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for u in 0..n {
        for v in u + 1..n {
            if h & edge_bit(n, u, v) != 0 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    adj
}

fn is_clique_mask(adj: &[u32], s: u32) -> bool {
    (0..adj.len())
        .filter(|&v| s >> v & 1 == 1)
        .all(|v| s & !(1 << v) & !adj[v] == 0)
}

/// Repeatedly removes a simplicial vertex; on a chordal graph returns the
/// sets `{v} ∪ (neighbours still present)`, otherwise `None`.
fn simplicial_cliques(adj: &[u32]) -> Option<Vec<u32>> {
    let n = adj.len();
    let mut left: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    let mut out = Vec::with_capacity(n);
    while left != 0 {
        let v = (0..n).find(|&v| left >> v & 1 == 1 && is_clique_mask(adj, adj[v] & left))?;
        out.push(adj[v] & left | 1 << v);
        left &= !(1 << v);
    }
    Some(out)
}

fn minimal_triangulations(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let base = g.edges().fold(0u64, |h, (u, v)| h | edge_bit(n, u, v));
    let mut seen = FxHashSet::default();
    let mut fills = FxHashSet::default();
    let mut stack = vec![(0u32, base)];
    while let Some((gone, h)) = stack.pop() {
        if !seen.insert((gone, h)) {
            continue;
        }
        if gone.count_ones() as usize == n {
            fills.insert(h);
            continue;
        }
        let adj = edge_adjacency(n, h);
        for v in (0..n).filter(|&v| gone >> v & 1 == 0) {
            let nb: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1 && gone >> u & 1 == 0).collect();
            let mut next = h;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    next |= edge_bit(n, a, b);
                }
            }
            stack.push((gone | 1 << v, next));
        }
    }
    // minimal iff dropping any single fill edge breaks chordality
    fills
        .into_iter()
        .filter(|&h| {
            let fill = h & !base;
            (0..64)
                .filter(|i| fill >> i & 1 == 1)
                .all(|i| simplicial_cliques(&edge_adjacency(n, h & !(1 << i))).is_none())
        })
        .collect()
}

/// PMCs and minimal separators of `g`, collected from every minimal
/// triangulation. Walks elimination orderings; for cross-checks only.
pub fn triangulation_census(g: &Graph) -> Result<(BTreeSet<VertexSet>, BTreeSet<VertexSet>)> {
    if g.n() > TRIANGULATION_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: TRIANGULATION_LIMIT,
        });
    }
    let n = g.n();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut pmcs = BTreeSet::new();
    let mut seps = BTreeSet::new();
    for h in minimal_triangulations(g) {
        let adj = edge_adjacency(n, h);
        let cl = simplicial_cliques(&adj).expect("triangulations are chordal");
        for &c in &cl {
            if !cl.iter().any(|&d| d != c && c & d == c) {
                pmcs.insert(to_set(n, c));
            }
        }
        seps.extend((1..full).filter(|&s| is_min_sep_mask(&adj, full, s)).map(|s| to_set(n, s)));
    }
    Ok((pmcs, seps))
}

/// Treewidth of `G⟨C⟩` (the closed neighborhood of `c` with `N(c)`
/// completed), via [`bf_treewidth`].
pub fn completed_part_treewidth(g: &Graph, c: &VertexSet) -> Result<usize> {
    let (h, _) = g.completed_part(c);
    bf_treewidth(&h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{complete, cycle, path, set};

    fn grid(r: usize, c: usize) -> Graph {
        let mut es = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    es.push((v, v + 1));
                }
                if i + 1 < r {
                    es.push((v, v + c));
                }
            }
        }
        Graph::from_edges(r * c, es).unwrap()
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(bf_treewidth(&complete(5)).unwrap(), 4);
        assert_eq!(bf_treewidth(&cycle(6)).unwrap(), 2);
        assert_eq!(bf_treewidth(&grid(3, 3)).unwrap(), 3);
        assert_eq!(bf_treewidth(&path(5)).unwrap(), 1);
        assert_eq!(bf_treewidth(&complete(1)).unwrap(), 0);
        assert!(matches!(bf_treewidth(&path(21)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn grid_width_three_by_hand() {
        use crate::td::{validate, TreeDecomposition};
        // path decomposition sweeping the 3x3 grid column by column
        let bags = vec![
            set(9, &[0, 1, 2, 3]),
            set(9, &[1, 2, 3, 4]),
            set(9, &[2, 3, 4, 5]),
            set(9, &[3, 4, 5, 6]),
            set(9, &[4, 5, 6, 7]),
            set(9, &[5, 6, 7, 8]),
        ];
        let td = TreeDecomposition {
            edges: (1..bags.len()).map(|i| (i - 1, i)).collect(),
            bags,
        };
        assert!(validate(&grid(3, 3), &td).is_ok());
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn separator_examples() {
        let c4 = cycle(4);
        let want = vec![set(4, &[0, 2]), set(4, &[1, 3])];
        let mut a = enumerate_minimal_separators(&c4).unwrap();
        let mut b = minimal_separators_by_closure(&c4).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, want);
        assert_eq!(b, want);
        assert!(enumerate_minimal_separators(&complete(4)).unwrap().is_empty());
        assert!(minimal_separators_by_closure(&complete(4)).unwrap().is_empty());
    }

    #[test]
    fn pmc_examples() {
        assert_eq!(enumerate_pmcs(&complete(4)).unwrap(), vec![set(4, &[0, 1, 2, 3])]);
        let mut p = enumerate_pmcs(&path(3)).unwrap();
        p.sort();
        assert_eq!(p, vec![set(3, &[0, 1]), set(3, &[1, 2])]);
        assert_eq!(enumerate_pmcs(&cycle(4)).unwrap().len(), 4);
    }

    #[test]
    fn triangulation_census_of_c4() {
        let (pmcs, seps) = triangulation_census(&cycle(4)).unwrap();
        assert_eq!(pmcs.len(), 4);
        assert_eq!(seps.into_iter().collect::<Vec<_>>(), vec![set(4, &[0, 2]), set(4, &[1, 3])]);
        let (pmcs, seps) = triangulation_census(&complete(4)).unwrap();
        assert_eq!(pmcs.len(), 1);
        assert!(seps.is_empty());
    }
}
