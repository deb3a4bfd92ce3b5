//! Positive-instance driven decision procedure for `tw(G) ≤ k`.
//!
//! Feasible inbound components (I-blocks) are discovered one at a time and
//! processed in FIFO order. Processing an I-block combines it with stored
//! outbound components (O-blocks) to build candidate potential maximal
//! cliques; a candidate becomes feasible once every component of its support
//! has been processed, and a feasible PMC with a non-empty outlet emits a new
//! I-block. The answer is yes as soon as a feasible PMC with empty outlet
//! exists.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::blocks::{is_outbound, Analysis};
use crate::graph::Graph;
use crate::sieve::SieveBank;
use crate::vertex_set::VertexSet;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverOptions<'a> {
    /// Keep going after a root PMC is found, so that the counters describe
    /// the complete set of feasible objects.
    pub exhaustive: bool,
    /// Check orientation of every I-block and O-block (costly).
    pub check_invariants: bool,
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub k: usize,
    pub iblocks: usize,
    pub oblocks: usize,
    pub pmcs_buildable: usize,
    pub pmcs_feasible: usize,
}

/// The part of a successful run needed to build a tree decomposition: the
/// root PMC and, for every PMC reachable from it, the PMCs that created the
/// components of its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Vertices of each PMC and indices (into `pmcs`) of its children.
    pub pmcs: Vec<(VertexSet, Vec<usize>)>,
    pub root: usize,
}

impl Witness {
    /// Witness for a graph that is itself a single bag.
    pub fn single_bag(vertices: VertexSet) -> Self {
        Witness {
            pmcs: vec![(vertices, Vec::new())],
            root: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub yes: bool,
    pub witness: Option<Witness>,
    pub stats: SolverStats,
}

#[derive(Debug)]
struct Pmc {
    vertices: VertexSet,
    /// `crib(outlet, K)`, or `None` when the outlet is empty.
    crib: Option<VertexSet>,
    support: Vec<VertexSet>,
    missing: usize,
    feasible: bool,
}

#[derive(Debug)]
struct IBlock {
    component: VertexSet,
    separator: VertexSet,
    source: usize,
    processed: bool,
}

enum Candidate {
    Pmc,
    Other { full: Option<VertexSet> },
}

struct Solver<'g, 'o> {
    g: &'g Graph,
    k: usize,
    opts: SolverOptions<'o>,
    iblocks: Vec<IBlock>,
    iblock_index: FxHashMap<VertexSet, usize>,
    queue: VecDeque<usize>,
    oblocks: Vec<(VertexSet, VertexSet)>,
    bank: SieveBank,
    pmcs: Vec<Pmc>,
    /// Every candidate examined so far.
    seen: FxHashMap<VertexSet, Candidate>,
    waiting: FxHashMap<VertexSet, Vec<usize>>,
    feasible: usize,
    root: Option<usize>,
    ticks: usize,
}

/// Decides `tw(g) ≤ k` for a connected graph.
pub fn decide(g: &Graph, k: usize) -> Result<Decision> {
    decide_with(g, k, SolverOptions::default())
}

pub fn decide_with(g: &Graph, k: usize, opts: SolverOptions<'_>) -> Result<Decision> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if k == 0 || k + 1 >= g.n() {
        let yes = g.n() <= k + 1;
        return Ok(Decision {
            yes,
            witness: yes.then(|| Witness::single_bag(g.all_vertices())),
            stats: SolverStats {
                k,
                ..Default::default()
            },
        });
    }
    let mut s = Solver::new(g, k, opts);
    s.run()?;
    let yes = s.root.is_some();
    let witness = s.root.map(|r| s.witness(r)).transpose()?;
    let stats = SolverStats {
        k,
        iblocks: s.iblocks.len(),
        oblocks: s.oblocks.len(),
        pmcs_buildable: s.pmcs.len(),
        pmcs_feasible: s.feasible,
    };
    log::debug!("k={k}: {stats:?} yes={yes}");
    Ok(Decision { yes, witness, stats })
}

impl<'g, 'o> Solver<'g, 'o> {
    fn new(g: &'g Graph, k: usize, opts: SolverOptions<'o>) -> Self {
        Solver {
            g,
            k,
            opts,
            iblocks: Vec::new(),
            iblock_index: FxHashMap::default(),
            queue: VecDeque::new(),
            oblocks: Vec::new(),
            bank: SieveBank::new(g.n(), k),
            pmcs: Vec::new(),
            seen: FxHashMap::default(),
            waiting: FxHashMap::default(),
            feasible: 0,
            root: None,
            ticks: 0,
        }
    }

    fn done(&self) -> bool {
        self.root.is_some() && !self.opts.exhaustive
    }

    fn check_budget(&mut self) -> Result<()> {
        self.ticks += 1;
        if self.ticks % 64 != 1 {
            return Ok(());
        }
        if let Some(c) = self.opts.cancel {
            if c.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
        }
        if let Some(d) = self.opts.deadline {
            if Instant::now() >= d {
                return Err(Error::Cancelled);
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        for v in 0..self.g.n() {
            let k = self.g.closed_neighborhood(v);
            if k.len() <= self.k + 1 {
                self.consider(k);
            }
            if self.done() {
                return Ok(());
            }
        }
        while let Some(i) = self.queue.pop_front() {
            self.check_budget()?;
            self.process(i);
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn process(&mut self, i: usize) {
        self.iblocks[i].processed = true;
        let comp = self.iblocks[i].component.clone();
        let sep = self.iblocks[i].separator.clone();
        if let Some(ws) = self.waiting.remove(&comp) {
            for p in ws {
                self.pmcs[p].missing -= 1;
                if self.pmcs[p].missing == 0 {
                    self.make_feasible(p);
                }
            }
        }

        let mut hits = Vec::new();
        self.bank.for_each_superset(&comp, &sep, |id, _| hits.push(id));
        let mut fresh = Vec::new();
        for id in hits {
            let k = sep.union(&self.oblocks[id].1);
            debug_assert!(k.len() <= self.k + 1);
            if let Some(a) = self.consider(k.clone()) {
                if k.len() <= self.k {
                    fresh.push((a, k));
                }
            }
        }

        // the outbound full component of N(C_i)
        let mut rest = self.g.all_vertices();
        rest.difference_with(&sep);
        rest.difference_with(&comp);
        let outbound = self
            .g
            .components_within(&rest)
            .into_iter()
            .find(|(_, nb)| *nb == sep)
            .map(|(c, _)| c)
            .expect("an inbound component has a preceding full component");
        fresh.push((outbound, sep));

        for (a, nb) in fresh {
            self.store_oblock(a, nb);
        }
    }

    fn store_oblock(&mut self, a: VertexSet, nb: VertexSet) {
        if self.bank.store(&a, &nb).is_none() {
            return;
        }
        if self.opts.check_invariants {
            assert!(is_outbound(self.g, &a), "stored O-block {a:?} is inbound");
        }
        self.oblocks.push((a.clone(), nb.clone()));
        for v in &nb {
            let mut k = self.g.neighbors(v).intersection(&a);
            k.union_with(&nb);
            if k.len() <= self.k + 1 {
                self.consider(k);
            }
        }
    }

    /// Registers `k` as buildable if it is a PMC. Otherwise returns its first
    /// full component, if any.
    fn consider(&mut self, k: VertexSet) -> Option<VertexSet> {
        if let Some(c) = self.seen.get(&k) {
            return match c {
                Candidate::Pmc => None,
                Candidate::Other { full } => full.clone(),
            };
        }
        let a = Analysis::new(self.g, k.clone());
        if let Some(f) = a.first_full_component() {
            let full = Some(a.components[f].0.clone());
            self.seen.insert(k, Candidate::Other { full: full.clone() });
            return full;
        }
        if !a.is_cliquish(self.g) {
            self.seen.insert(k, Candidate::Other { full: None });
            return None;
        }
        self.seen.insert(k.clone(), Candidate::Pmc);
        self.register(a);
        None
    }

    fn register(&mut self, a: Analysis) {
        let outlet = a.outlet();
        let support: Vec<VertexSet> = a
            .support_indices(&outlet)
            .map(|i| a.components[i].0.clone())
            .collect();
        let crib = (!outlet.is_empty()).then(|| a.crib(&outlet));
        let id = self.pmcs.len();
        let mut missing = 0;
        for c in &support {
            let ready = self
                .iblock_index
                .get(c)
                .is_some_and(|&i| self.iblocks[i].processed);
            if !ready {
                missing += 1;
                self.waiting.entry(c.clone()).or_default().push(id);
            }
        }
        self.pmcs.push(Pmc {
            vertices: a.set,
            crib,
            support,
            missing,
            feasible: false,
        });
        if missing == 0 {
            self.make_feasible(id);
        }
    }

    fn make_feasible(&mut self, p: usize) {
        debug_assert!(!self.pmcs[p].feasible);
        self.pmcs[p].feasible = true;
        self.feasible += 1;
        let Some(c) = self.pmcs[p].crib.clone() else {
            if self.root.is_none() {
                self.root = Some(p);
            }
            return;
        };
        if self.iblock_index.contains_key(&c) {
            return;
        }
        if self.opts.check_invariants {
            assert!(!is_outbound(self.g, &c), "emitted I-block {c:?} is outbound");
        }
        let separator = self.g.open_neighborhood(&c);
        debug_assert!(separator.len() <= self.k);
        let i = self.iblocks.len();
        self.iblock_index.insert(c.clone(), i);
        self.iblocks.push(IBlock {
            component: c,
            separator,
            source: p,
            processed: false,
        });
        self.queue.push_back(i);
    }

    fn witness(&self, root: usize) -> Result<Witness> {
        let mut local: FxHashMap<usize, usize> = FxHashMap::default();
        let mut order = vec![root];
        local.insert(root, 0);
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for c in &self.pmcs[p].support {
                let src = self
                    .iblock_index
                    .get(c)
                    .map(|&i| self.iblocks[i].source)
                    .ok_or_else(|| Error::Witness(format!("support component {c:?} was never created")))?;
                if !self.pmcs[src].feasible {
                    return Err(Error::Witness(format!("source of {c:?} is not feasible")));
                }
                if let std::collections::hash_map::Entry::Vacant(e) = local.entry(src) {
                    e.insert(order.len());
                    order.push(src);
                }
            }
        }
        let pmcs = order
            .iter()
            .map(|&p| {
                let children = self.pmcs[p]
                    .support
                    .iter()
                    .map(|c| local[&self.iblocks[self.iblock_index[c]].source])
                    .collect();
                (self.pmcs[p].vertices.clone(), children)
            })
            .collect();
        Ok(Witness { pmcs, root: 0 })
    }
}

/// Exact treewidth by iterative deepening from the minimum degree.
pub fn treewidth(g: &Graph) -> Result<(usize, Witness)> {
    treewidth_from(g, 0)
}

/// Like [`treewidth`], starting the search at `max(start, min degree)`.
pub fn treewidth_from(g: &Graph, start: usize) -> Result<(usize, Witness)> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut k = start.max(g.min_degree());
    loop {
        let d = decide(g, k)?;
        if d.yes {
            return Ok((k, d.witness.expect("yes carries a witness")));
        }
        k += 1;
    }
}

/// Largest certified lower bound reachable before `deadline`: one more than
/// the highest `k` for which a complete run answered no, and never below the
/// minimum degree.
pub fn lower_bound(g: &Graph, deadline: Option<Instant>, cancel: Option<&AtomicBool>) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut lb = g.min_degree();
    loop {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(lb);
        }
        let opts = SolverOptions {
            deadline,
            cancel,
            ..Default::default()
        };
        match decide_with(g, lb, opts) {
            Ok(d) if d.yes => return Ok(lb),
            Ok(_) => lb += 1,
            Err(Error::Cancelled) => return Ok(lb),
            Err(e) => return Err(e),
        }
    }
}

/// PMCs registered as buildable and those found feasible, from an
/// exhaustive run. Exposed for census and consistency checks.
pub fn feasible_objects(g: &Graph, k: usize) -> Result<FeasibleObjects> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    assert!(k >= 1, "feasible_objects needs k >= 1");
    let opts = SolverOptions {
        exhaustive: true,
        ..Default::default()
    };
    let mut s = Solver::new(g, k, opts);
    s.run()?;
    Ok(FeasibleObjects {
        iblocks: s.iblocks.iter().map(|b| b.component.clone()).collect(),
        oblocks: s.oblocks.iter().map(|(a, _)| a.clone()).collect(),
        buildable: s.pmcs.iter().map(|p| p.vertices.clone()).collect(),
        feasible: s
            .pmcs
            .iter()
            .filter(|p| p.feasible)
            .map(|p| p.vertices.clone())
            .collect(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct FeasibleObjects {
    pub iblocks: FxHashSet<VertexSet>,
    pub oblocks: FxHashSet<VertexSet>,
    pub buildable: FxHashSet<VertexSet>,
    pub feasible: FxHashSet<VertexSet>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{complete, cycle, path};

    #[test]
    fn complete_graph() {
        assert!(!decide(&complete(4), 2).unwrap().yes);
        assert!(decide(&complete(4), 3).unwrap().yes);
    }

    #[test]
    fn four_cycle() {
        assert!(!decide(&cycle(4), 1).unwrap().yes);
        assert!(decide(&cycle(4), 2).unwrap().yes);
    }

    #[test]
    fn k_zero() {
        assert!(decide(&complete(1), 0).unwrap().yes);
        assert!(!decide(&path(2), 0).unwrap().yes);
    }

    #[test]
    fn trees_have_width_one() {
        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(treewidth(&star).unwrap().0, 1);
        assert_eq!(treewidth(&path(7)).unwrap().0, 1);
        assert_eq!(treewidth(&path(2)).unwrap().0, 1);
        assert_eq!(treewidth(&complete(1)).unwrap().0, 0);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(decide(&g, 1).unwrap_err(), Error::Disconnected);
        assert_eq!(treewidth(&Graph::from_edges(0, []).unwrap()).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(&cycle(6), None, None).unwrap(), 2);
        assert!(lower_bound(&complete(5), None, None).unwrap() >= 4);
        let past = Instant::now();
        assert_eq!(lower_bound(&complete(6), Some(past), None).unwrap(), 5);
    }

    #[test]
    fn cancel_flag_stops_run() {
        let flag = AtomicBool::new(true);
        let g = cycle(200);
        let opts = SolverOptions {
            cancel: Some(&flag),
            ..Default::default()
        };
        assert_eq!(decide_with(&g, 2, opts).unwrap_err(), Error::Cancelled);
    }

    #[test]
    fn witness_links_resolve() {
        let g = cycle(6);
        let d = decide(&g, 2).unwrap();
        let w = d.witness.unwrap();
        for (_, children) in &w.pmcs {
            assert!(children.iter().all(|&c| c < w.pmcs.len()));
        }
    }
}
