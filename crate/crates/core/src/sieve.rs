//! Superset index for outbound blocks.
//!
//! A [`SieveTrie`] answers: given a connected set `U` with `N(U)`, list every
//! stored `W ⊇ U` with `|N(U) ∪ N(W)| ≤ k + 1`. Internal nodes own a window of
//! consecutive vertex indices and branch on the bits of `W` inside it; leaves
//! are small buckets scanned directly. A [`SieveBank`] splits entries by
//! margin `k + 1 - |N(W)|` so that each trie can prune with a tight bound.

use crate::vertex_set::VertexSet;

const BUCKET_LIMIT: usize = 64;
const WIDTHS: [usize; 4] = [8, 16, 32, 64];

#[derive(Clone, Debug)]
struct Entry {
    set: VertexSet,
    nb_size: usize,
    id: usize,
}

#[derive(Clone, Debug)]
enum Node {
    /// Branches on bits `start..start + width` of the stored set.
    Inner {
        start: usize,
        width: usize,
        children: Vec<(u64, usize)>,
    },
    /// Entries agreeing on all bits below `start`; covers `start..n`.
    Bucket { start: usize, entries: Vec<Entry> },
}

/// One trie of the bank; every entry has margin at most `margin_bound`.
#[derive(Clone, Debug)]
pub struct SieveTrie {
    n: usize,
    k: usize,
    margin_bound: usize,
    nodes: Vec<Node>,
    len: usize,
}

impl SieveTrie {
    pub fn new(n: usize, k: usize, margin_bound: usize) -> Self {
        SieveTrie {
            n,
            k,
            margin_bound,
            nodes: vec![Node::Bucket {
                start: 0,
                entries: Vec::new(),
            }],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn margin_bound(&self) -> usize {
        self.margin_bound
    }

    /// Inserts `set` unless already present; returns whether it was new.
    fn insert(&mut self, set: &VertexSet, nb_size: usize, id: usize) -> bool {
        debug_assert!(self.k + 1 - nb_size <= self.margin_bound);
        let mut at = 0;
        loop {
            match &mut self.nodes[at] {
                Node::Inner {
                    start,
                    width,
                    children,
                } => {
                    let label = set.bits_at(*start, *width);
                    let child_start = *start + *width;
                    if let Some(&(_, c)) = children.iter().find(|(l, _)| *l == label) {
                        at = c;
                    } else {
                        let c = self.nodes.len();
                        if let Node::Inner { children, .. } = &mut self.nodes[at] {
                            children.push((label, c));
                        }
                        self.nodes.push(Node::Bucket {
                            start: child_start,
                            entries: Vec::new(),
                        });
                        at = c;
                    }
                }
                Node::Bucket { entries, .. } => {
                    if entries.iter().any(|e| e.set == *set) {
                        return false;
                    }
                    entries.push(Entry {
                        set: set.clone(),
                        nb_size,
                        id,
                    });
                    self.len += 1;
                    if entries.len() > BUCKET_LIMIT {
                        self.split(at);
                    }
                    return true;
                }
            }
        }
    }

    fn split(&mut self, at: usize) {
        let (start, entries) = match &mut self.nodes[at] {
            Node::Bucket { start, entries } => (*start, std::mem::take(entries)),
            Node::Inner { .. } => unreachable!(),
        };
        if start >= self.n {
            // only identical sets could share this bucket; dedup prevents it
            self.nodes[at] = Node::Bucket { start, entries };
            return;
        }
        let span = self.n - start;
        let width = WIDTHS
            .iter()
            .map(|&w| w.min(span))
            .find(|&w| {
                let first = entries[0].set.bits_at(start, w);
                entries.iter().any(|e| e.set.bits_at(start, w) != first)
            })
            .unwrap_or(64.min(span));
        let mut children: Vec<(u64, usize)> = Vec::new();
        let mut buckets: Vec<Vec<Entry>> = Vec::new();
        for e in entries {
            let label = e.set.bits_at(start, width);
            match children.iter().position(|(l, _)| *l == label) {
                Some(i) => buckets[i].push(e),
                None => {
                    children.push((label, buckets.len()));
                    buckets.push(vec![e]);
                }
            }
        }
        let base = self.nodes.len();
        for (_, idx) in children.iter_mut() {
            *idx += base;
        }
        let oversized: Vec<usize> = buckets
            .iter()
            .enumerate()
            .filter(|(_, b)| b.len() > BUCKET_LIMIT)
            .map(|(i, _)| base + i)
            .collect();
        for b in buckets {
            self.nodes.push(Node::Bucket {
                start: start + width,
                entries: b,
            });
        }
        self.nodes[at] = Node::Inner {
            start,
            width,
            children,
        };
        for c in oversized {
            self.split(c);
        }
    }

    fn query<F: FnMut(usize, &VertexSet)>(&self, u: &VertexSet, n_u: &VertexSet, prune: bool, f: &mut F) {
        let mut stack = vec![(0usize, 0usize)];
        while let Some((at, hits)) = stack.pop() {
            match &self.nodes[at] {
                Node::Inner {
                    start,
                    width,
                    children,
                } => {
                    let ub = u.bits_at(*start, *width);
                    let nb = n_u.bits_at(*start, *width);
                    for &(label, c) in children {
                        if ub & !label != 0 {
                            continue;
                        }
                        let h = hits + (nb & label).count_ones() as usize;
                        if prune && h > self.margin_bound {
                            continue;
                        }
                        stack.push((c, h));
                    }
                }
                Node::Bucket { entries, .. } => {
                    for e in entries {
                        if u.is_subset(&e.set) && e.nb_size + n_u.intersection_len(&e.set) <= self.k + 1 {
                            f(e.id, &e.set);
                        }
                    }
                }
            }
        }
    }
}

/// Tries stratified by margin, thresholds `2, 4, .., 2^(t-1), k`.
#[derive(Clone, Debug)]
pub struct SieveBank {
    k: usize,
    sieves: Vec<SieveTrie>,
    next_id: usize,
}

/// Margin thresholds for width bound `k`: `m_i = 2^i` for `i < t` and
/// `m_t = k` where `t = max(1, ceil(log2 k))`.
pub fn thresholds(k: usize) -> Vec<usize> {
    assert!(k >= 1, "sieve thresholds need k >= 1");
    let t = (usize::BITS - (k - 1).leading_zeros()).max(1) as usize;
    let mut m: Vec<usize> = (1..t).map(|i| 1usize << i).collect();
    m.push(k);
    m
}

impl SieveBank {
    pub fn new(n: usize, k: usize) -> Self {
        let sieves = thresholds(k).into_iter().map(|m| SieveTrie::new(n, k, m)).collect();
        SieveBank {
            k,
            sieves,
            next_id: 0,
        }
    }

    pub fn thresholds(&self) -> Vec<usize> {
        self.sieves.iter().map(|s| s.margin_bound).collect()
    }

    /// Index of the trie holding sets of the given margin.
    pub fn sieve_for_margin(&self, margin: usize) -> usize {
        assert!(margin >= 1 && margin <= self.k, "margin {margin} outside 1..={}", self.k);
        self.sieves.iter().position(|s| margin <= s.margin_bound).unwrap()
    }

    /// Stores `u` (with `n_u = N(u)`, `|n_u| ≤ k`). Returns the id assigned
    /// to a new entry, or `None` when `u` was already stored. Ids count up
    /// from zero in insertion order.
    pub fn store(&mut self, u: &VertexSet, n_u: &VertexSet) -> Option<usize> {
        let nb = n_u.len();
        assert!(nb <= self.k, "store: margin must be positive (|N(u)| = {nb}, k = {})", self.k);
        let i = self.sieve_for_margin(self.k + 1 - nb);
        let id = self.next_id;
        if self.sieves[i].insert(u, nb, id) {
            self.next_id += 1;
            Some(id)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.next_id
    }

    pub fn is_empty(&self) -> bool {
        self.next_id == 0
    }

    pub fn sieve_sizes(&self) -> Vec<usize> {
        self.sieves.iter().map(SieveTrie::len).collect()
    }

    /// Calls `f(id, w)` for each stored `w ⊇ u` with `|n_u ∪ N(w)| ≤ k + 1`.
    pub fn for_each_superset<F: FnMut(usize, &VertexSet)>(&self, u: &VertexSet, n_u: &VertexSet, mut f: F) {
        for s in &self.sieves {
            s.query(u, n_u, true, &mut f);
        }
    }

    pub fn supersets(&self, u: &VertexSet, n_u: &VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.for_each_superset(u, n_u, |_, w| out.push(w.clone()));
        out
    }

    /// Same as [`SieveBank::supersets`] but visiting every branch, for
    /// checking that pruning never discards an answer.
    pub fn supersets_unpruned(&self, u: &VertexSet, n_u: &VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        for s in &self.sieves {
            s.query(u, n_u, false, &mut |_, w: &VertexSet| out.push(w.clone()));
        }
        out
    }
}

/// Reference implementation by exhaustive scan over `(W, N(W))` pairs.
pub fn linear_scan_supersets(
    entries: &[(VertexSet, VertexSet)],
    u: &VertexSet,
    n_u: &VertexSet,
    k: usize,
) -> Vec<VertexSet> {
    entries
        .iter()
        .filter(|(w, nw)| u.is_subset(w) && n_u.union_len(nw) <= k + 1)
        .map(|(w, _)| w.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{cycle, set};
    use crate::graph::Graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_schedule() {
        assert_eq!(thresholds(1), vec![1]);
        assert_eq!(thresholds(2), vec![2]);
        assert_eq!(thresholds(3), vec![2, 3]);
        assert_eq!(thresholds(8), vec![2, 4, 8]);
        assert_eq!(thresholds(9), vec![2, 4, 8, 9]);
        assert_eq!(thresholds(31), vec![2, 4, 8, 16, 31]);
        for k in 1..200 {
            let t = thresholds(k);
            assert!(t.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(*t.last().unwrap(), k);
        }
    }

    #[test]
    fn store_lands_by_margin() {
        let mut bank = SieveBank::new(4, 2);
        // margin 2 + 1 - 2 = 1
        bank.store(&set(4, &[3]), &set(4, &[0, 2]));
        assert_eq!(bank.thresholds(), vec![2]);
        assert_eq!(bank.sieve_sizes(), vec![1]);
        let mut bank = SieveBank::new(10, 8);
        bank.store(&set(10, &[9]), &set(10, &[0, 1, 2, 3, 4, 5, 6]));
        bank.store(&set(10, &[8]), &set(10, &[0, 1, 2, 3, 4]));
        bank.store(&set(10, &[7]), &set(10, &[0]));
        assert_eq!(bank.sieve_sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn store_is_idempotent() {
        let mut bank = SieveBank::new(4, 2);
        assert_eq!(bank.store(&set(4, &[1, 2, 3]), &set(4, &[0])), Some(0));
        assert_eq!(bank.store(&set(4, &[1, 2, 3]), &set(4, &[0])), None);
        assert_eq!(bank.len(), 1);
        assert_eq!(bank.supersets(&set(4, &[2]), &set(4, &[1, 3])).len(), 1);
    }

    #[test]
    #[should_panic]
    fn store_rejects_zero_margin() {
        let mut bank = SieveBank::new(4, 1);
        bank.store(&set(4, &[2]), &set(4, &[1, 3]));
    }

    #[test]
    fn cycle_query() {
        let g = cycle(4);
        let mut bank = SieveBank::new(4, 2);
        let w = set(4, &[1, 2, 3]);
        bank.store(&w, &g.open_neighborhood(&w));
        let u = set(4, &[2]);
        let nu = g.open_neighborhood(&u);
        assert_eq!(bank.supersets(&u, &nu), vec![w.clone()]);
        assert_eq!(bank.supersets(&w, &set(4, &[0])), vec![w.clone()]);
        assert!(bank.supersets(&set(4, &[0]), &set(4, &[1, 3])).is_empty());
        assert!(SieveBank::new(4, 2).supersets(&u, &nu).is_empty());
        let entries = vec![(w.clone(), set(4, &[0]))];
        assert_eq!(linear_scan_supersets(&entries, &u, &nu, 2), vec![w]);
        assert!(linear_scan_supersets(&[], &u, &nu, 2).is_empty());
    }

    fn random_connected_set(g: &Graph, rng: &mut ChaCha8Rng, size: usize) -> VertexSet {
        let n = g.n();
        let mut s = VertexSet::singleton(n, rng.gen_range(0..n));
        while s.len() < size {
            let frontier = g.open_neighborhood(&s);
            let f = frontier.to_vec();
            if f.is_empty() {
                break;
            }
            s.insert(f[rng.gen_range(0..f.len())]);
        }
        s
    }

    fn sorted(mut v: Vec<VertexSet>) -> Vec<VertexSet> {
        v.sort();
        v
    }

    #[test]
    fn differential_against_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 30;
        let k = 12;
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        for _ in 0..30 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                edges.push((a, b));
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let mut bank = SieveBank::new(n, k);
        let mut entries = Vec::new();
        while entries.len() < 200 {
            let size = rng.gen_range(1..n);
            let w = random_connected_set(&g, &mut rng, size);
            let nw = g.open_neighborhood(&w);
            if nw.len() > k || entries.iter().any(|(e, _)| *e == w) {
                continue;
            }
            bank.store(&w, &nw);
            entries.push((w, nw));
        }
        for _ in 0..50 {
            let size = rng.gen_range(1..8);
            let u = random_connected_set(&g, &mut rng, size);
            let nu = g.open_neighborhood(&u);
            let want = sorted(linear_scan_supersets(&entries, &u, &nu, k));
            assert_eq!(sorted(bank.supersets(&u, &nu)), want);
            assert_eq!(sorted(bank.supersets_unpruned(&u, &nu)), want);
        }
    }

    #[test]
    fn splitting_keeps_every_entry() {
        // many sets sharing their low bits force chains of wide nodes
        let n = 300;
        let k = 40;
        let mut bank = SieveBank::new(n, k);
        let mut entries = Vec::new();
        for i in 0..500 {
            let mut w = VertexSet::from_vertices(n, 0..10);
            w.insert(200 + i % 100);
            w.insert(100 + i / 5);
            let nw = VertexSet::from_vertices(n, [299 - (i % 7)]);
            if bank.store(&w, &nw).is_some() {
                entries.push((w, nw));
            }
        }
        assert_eq!(bank.len(), entries.len());
        let u = VertexSet::from_vertices(n, [0, 3]);
        let nu = VertexSet::from_vertices(n, [12]);
        assert_eq!(
            sorted(bank.supersets(&u, &nu)),
            sorted(linear_scan_supersets(&entries, &u, &nu, k))
        );
    }
}
