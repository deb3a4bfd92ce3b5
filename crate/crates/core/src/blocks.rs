//! Full components, minimal separators, potential maximal cliques and the
//! orientation machinery (inbound / outbound components, outlet, support).
//!
//! A connected set `C` is *inbound* when some full component of `N(C)` other
//! than `C` has a smaller minimum vertex, and *outbound* otherwise. Every
//! minimal separator therefore has exactly one outbound full component: the
//! one holding the smallest vertex among all of its full components.

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Inbound,
    Outbound,
}

/// A connected set together with its (cached) open neighborhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub component: VertexSet,
    pub separator: VertexSet,
    pub orientation: Orientation,
}

impl Block {
    pub fn new(g: &Graph, component: VertexSet) -> Self {
        debug_assert!(g.is_connected_set(&component));
        let separator = g.open_neighborhood(&component);
        let orientation = if is_outbound(g, &component) {
            Orientation::Outbound
        } else {
            Orientation::Inbound
        };
        Block {
            component,
            separator,
            orientation,
        }
    }

    pub fn is_inbound(&self) -> bool {
        self.orientation == Orientation::Inbound
    }
}

/// A potential maximal clique with its outlet and support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmcRecord {
    pub vertices: VertexSet,
    pub outlet: VertexSet,
    /// Components of `vertices` unconfined to the outlet, by minimum vertex.
    pub support: Vec<Block>,
}

impl PmcRecord {
    /// Returns `None` when `vertices` is not a potential maximal clique.
    pub fn new(g: &Graph, vertices: VertexSet) -> Option<Self> {
        let a = Analysis::new(g, vertices);
        if !a.is_pmc(g) {
            return None;
        }
        let outlet = a.outlet();
        let support = a
            .support_indices(&outlet)
            .map(|i| {
                let (c, nb) = &a.components[i];
                Block {
                    component: c.clone(),
                    separator: nb.clone(),
                    orientation: Orientation::Inbound,
                }
            })
            .collect();
        Some(PmcRecord {
            vertices: a.set,
            outlet,
            support,
        })
    }
}

/// A vertex set together with the components of `G - set` and their
/// neighborhoods, so that the predicates below share one traversal.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub set: VertexSet,
    /// `(C, N(C))` for every component of `G - set`, by minimum vertex.
    pub components: Vec<(VertexSet, VertexSet)>,
}

impl Analysis {
    pub fn new(g: &Graph, set: VertexSet) -> Self {
        let components = g.components_with_neighborhoods(&set);
        Analysis { set, components }
    }

    pub fn has_full_component(&self) -> bool {
        self.components.iter().any(|(_, nb)| *nb == self.set)
    }

    /// Index of the first (smallest-minimum) full component, which is the
    /// outbound one when it exists.
    pub fn first_full_component(&self) -> Option<usize> {
        self.components.iter().position(|(_, nb)| *nb == self.set)
    }

    pub fn full_components(&self) -> impl Iterator<Item = &VertexSet> + '_ {
        self.components
            .iter()
            .filter(|(_, nb)| *nb == self.set)
            .map(|(c, _)| c)
    }

    pub fn is_cliquish(&self, g: &Graph) -> bool {
        for u in &self.set {
            let mut cover = g.neighbors(u).clone();
            cover.insert(u);
            if self.set.is_subset(&cover) {
                continue;
            }
            for (_, nb) in &self.components {
                if nb.contains(u) {
                    cover.union_with(nb);
                }
            }
            if !self.set.is_subset(&cover) {
                return false;
            }
        }
        true
    }

    pub fn is_pmc(&self, g: &Graph) -> bool {
        !self.has_full_component() && self.is_cliquish(g)
    }

    /// Minimum vertex of `crib(s, set)`, computed without materialising it.
    fn crib_min(&self, s: &VertexSet) -> Option<usize> {
        let mut m = self.set.difference(s).min_vertex();
        for (c, nb) in &self.components {
            if !nb.is_subset(s) {
                let cm = c.min_vertex();
                m = match (m, cm) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
        }
        m
    }

    /// Whether the non-full component at `index` is outbound.
    ///
    /// Relies on `set` being cliquish: the full components of `N(A)` are then
    /// `crib(N(A), set)` plus the components of `set` whose neighborhood is
    /// exactly `N(A)`.
    pub fn is_component_outbound(&self, index: usize) -> bool {
        let (a, s) = &self.components[index];
        let amin = a.min_vertex().expect("components are non-empty");
        if let Some(cm) = self.crib_min(s) {
            if cm < amin {
                return false;
            }
        }
        // components are sorted by minimum vertex
        !self.components[..index].iter().any(|(_, nb)| nb == s)
    }

    /// `outlet(set)`: the largest neighborhood among outbound non-full
    /// components, or the empty set if there is none.
    pub fn outlet(&self) -> VertexSet {
        let mut best: Option<&VertexSet> = None;
        for i in 0..self.components.len() {
            let nb = &self.components[i].1;
            if *nb == self.set || !self.is_component_outbound(i) {
                continue;
            }
            match best {
                None => best = Some(nb),
                Some(b) => {
                    debug_assert!(
                        b.is_subset(nb) || nb.is_subset(b),
                        "outbound neighborhoods of a cliquish set must be nested"
                    );
                    if b.len() < nb.len() {
                        best = Some(nb);
                    }
                }
            }
        }
        match best {
            Some(b) => b.clone(),
            None => {
                let mut e = self.set.clone();
                e.clear();
                e
            }
        }
    }

    /// Indices of the components unconfined to `s`.
    pub fn unconf_indices<'a>(&'a self, s: &'a VertexSet) -> impl Iterator<Item = usize> + 'a {
        self.components
            .iter()
            .enumerate()
            .filter(move |(_, (_, nb))| !nb.is_subset(s))
            .map(|(i, _)| i)
    }

    /// Indices of `support(set)` given its outlet.
    pub fn support_indices<'a>(&'a self, outlet: &'a VertexSet) -> impl Iterator<Item = usize> + 'a {
        self.unconf_indices(outlet)
    }

    /// `crib(s, set) = (set \ s) ∪ ⋃ unconf(s, set)`.
    pub fn crib(&self, s: &VertexSet) -> VertexSet {
        let mut r = self.set.difference(s);
        for i in self.unconf_indices(s) {
            r.union_with(&self.components[i].0);
        }
        r
    }
}

/// Components `C` of `G - s` with `N(C) = s`, by minimum vertex.
pub fn full_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    Analysis::new(g, s.clone()).full_components().cloned().collect()
}

pub fn is_minimal_separator(g: &Graph, s: &VertexSet) -> bool {
    Analysis::new(g, s.clone()).full_components().nth(1).is_some()
}

pub fn is_cliquish(g: &Graph, k: &VertexSet) -> bool {
    Analysis::new(g, k.clone()).is_cliquish(g)
}

/// No full component and cliquish.
pub fn is_pmc(g: &Graph, k: &VertexSet) -> bool {
    Analysis::new(g, k.clone()).is_pmc(g)
}

/// Components of `G - k` whose neighborhood is not contained in `s`.
pub fn unconf(g: &Graph, s: &VertexSet, k: &VertexSet) -> Vec<VertexSet> {
    let a = Analysis::new(g, k.clone());
    a.unconf_indices(s).map(|i| a.components[i].0.clone()).collect()
}

/// `crib(s, k)`; a full component of `s` whenever `k` is cliquish and `s ⊊ k`.
pub fn crib(g: &Graph, s: &VertexSet, k: &VertexSet) -> VertexSet {
    debug_assert!(s.is_subset(k) && s != k, "crib: s must be a proper subset of k");
    let a = Analysis::new(g, k.clone());
    debug_assert!(a.is_cliquish(g), "crib: k must be cliquish");
    a.crib(s)
}

/// True iff no full component of `N(c)` other than `c` precedes `c`.
pub fn is_outbound(g: &Graph, c: &VertexSet) -> bool {
    let cmin = c.min_vertex().expect("is_outbound: empty set");
    let s = g.open_neighborhood(c);
    let mut outside = g.all_vertices();
    outside.difference_with(&s);
    outside.difference_with(c);
    for v in 0..cmin {
        if !outside.contains(v) {
            continue;
        }
        let (d, nb) = g.component_and_neighborhood(v, &outside);
        if nb == s {
            return false;
        }
        outside.difference_with(&d);
    }
    true
}

pub fn outlet(g: &Graph, k: &VertexSet) -> VertexSet {
    let a = Analysis::new(g, k.clone());
    // without components the outlet is empty whatever k looks like
    debug_assert!(a.components.is_empty() || a.is_cliquish(g), "outlet: k must be cliquish");
    a.outlet()
}

/// `support(k) = unconf(outlet(k), k)`.
pub fn support(g: &Graph, k: &VertexSet) -> Vec<VertexSet> {
    let a = Analysis::new(g, k.clone());
    debug_assert!(a.components.is_empty() || a.is_cliquish(g), "support: k must be cliquish");
    let o = a.outlet();
    a.support_indices(&o).map(|i| a.components[i].0.clone()).collect()
}
