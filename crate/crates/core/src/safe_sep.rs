//! Minor-safe separators: candidates from greedy elimination, a contraction
//! heuristic that looks for the separator as a labelled clique minor on the
//! far side of each component, and the resulting split of the instance.
//!
//! A separator `S` is minor-safe when, for every component `C` of `G - S`,
//! the graph `G - C` contains the clique on `S` as a minor in which each
//! `s ∈ S` lies in its own branch set. Completing `S` into a clique then
//! leaves the treewidth unchanged, and the problem splits into the parts
//! `G⟨C⟩`.

use std::fmt;

use rustc_hash::FxHashSet;

use crate::blocks::is_minimal_separator;
use crate::graph::Graph;
use crate::td::TreeDecomposition;
use crate::vertex_set::VertexSet;

pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    DontKnow,
    Aborted,
}

/// Branch sets of a labelled clique minor of `S` in `G - component`. Labels
/// that do not appear have the singleton branch set `{label}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorEvidence {
    pub component: VertexSet,
    pub bags: Vec<(usize, VertexSet)>,
}

#[derive(Clone, Debug)]
pub struct SafeSeparatorReport {
    pub separator: VertexSet,
    pub verdict: Verdict,
    /// One entry per component when the verdict is `Yes`.
    pub evidence: Vec<MinorEvidence>,
}

/// Elimination ordering by repeatedly picking the vertex with the fewest
/// fill edges (or the smallest degree); ties go to the lowest index.
/// Returns, for each eliminated vertex, its neighbors eliminated later.
fn greedy_elimination(g: &Graph, min_fill: bool) -> Vec<VertexSet> {
    let n = g.n();
    let mut adj: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive = g.all_vertices();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let score = |v: usize| -> usize {
            if !min_fill {
                return adj[v].len();
            }
            let nb = adj[v].to_vec();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                missing += nb.len() - 1 - i - adj[a].intersection_len(&VertexSet::from_vertices(n, nb[i + 1..].iter().copied()));
            }
            missing
        };
        let v = alive.iter().min_by_key(|&v| (score(v), v)).expect("vertices remain");
        let nb = adj[v].clone();
        for u in &nb {
            adj[u].union_with(&nb);
            adj[u].remove(u);
            adj[u].remove(v);
        }
        alive.remove(v);
        out.push(nb);
    }
    out
}

/// Separators of min-fill and min-degree elimination decompositions that
/// are minimal separators of `g`, without repeats, smallest first.
pub fn candidate_separators(g: &Graph) -> Vec<VertexSet> {
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    for min_fill in [true, false] {
        for s in greedy_elimination(g, min_fill) {
            if !s.is_empty() && !seen.contains(&s) {
                seen.insert(s.clone());
                if is_minimal_separator(g, &s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// A vertex whose removal leaves `s` a clique, if any.
pub fn is_almost_clique(g: &Graph, s: &VertexSet) -> Option<usize> {
    s.iter().find(|&v| {
        let mut rest = s.clone();
        rest.remove(v);
        g.is_clique(&rest)
    })
}

/// Contraction state for one component: branch sets for the separator
/// vertices and connected groups of the remaining vertices.
struct MinorSearch<'g> {
    g: &'g Graph,
    labels: Vec<usize>,
    bags: Vec<VertexSet>,
    bag_nb: Vec<VertexSet>,
    groups: Vec<VertexSet>,
    group_nb: Vec<VertexSet>,
    alive: Vec<bool>,
    steps: usize,
    budget: usize,
}

enum Outcome {
    Found,
    Stuck,
    OutOfSteps,
}

impl<'g> MinorSearch<'g> {
    fn new(g: &'g Graph, s: &VertexSet, component: &VertexSet, budget: usize) -> Self {
        let labels = s.to_vec();
        let bags: Vec<VertexSet> = labels.iter().map(|&v| VertexSet::singleton(g.n(), v)).collect();
        let bag_nb = labels.iter().map(|&v| g.neighbors(v).clone()).collect();
        let mut rest = g.all_vertices();
        rest.difference_with(s);
        rest.difference_with(component);
        let groups: Vec<VertexSet> = rest.iter().map(|v| VertexSet::singleton(g.n(), v)).collect();
        let group_nb = rest.iter().map(|v| g.neighbors(v).clone()).collect();
        let alive = vec![true; groups.len()];
        MinorSearch {
            g,
            labels,
            bags,
            bag_nb,
            groups,
            group_nb,
            alive,
            steps: 0,
            budget,
        }
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.budget
    }

    fn missing_pairs(&self) -> Vec<(usize, usize)> {
        let t = self.labels.len();
        let mut out = Vec::new();
        for i in 0..t {
            for j in i + 1..t {
                if !self.bag_nb[i].intersects(&self.bags[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn touches(&self, grp: usize, bag: usize) -> bool {
        self.group_nb[grp].intersects(&self.bags[bag])
    }

    fn live_groups(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.groups.len()).filter(|&w| self.alive[w])
    }

    fn common(&self, (i, j): (usize, usize)) -> Vec<usize> {
        self.live_groups()
            .filter(|&w| self.touches(w, i) && self.touches(w, j))
            .collect()
    }

    fn groups_adjacent(&self, a: usize, b: usize) -> bool {
        self.group_nb[a].intersects(&self.groups[b])
    }

    fn merge_groups(&mut self, into: usize, from: usize) {
        self.alive[from] = false;
        let g = std::mem::replace(&mut self.groups[from], VertexSet::new(0));
        let nb = std::mem::replace(&mut self.group_nb[from], VertexSet::new(0));
        self.groups[into].union_with(&g);
        self.group_nb[into].union_with(&nb);
        let whole = self.groups[into].clone();
        self.group_nb[into].difference_with(&whole);
    }

    fn absorb(&mut self, bag: usize, grp: usize) {
        self.alive[grp] = false;
        let g = std::mem::replace(&mut self.groups[grp], VertexSet::new(0));
        let nb = std::mem::replace(&mut self.group_nb[grp], VertexSet::new(0));
        self.bags[bag].union_with(&g);
        self.bag_nb[bag].union_with(&nb);
        let whole = self.bags[bag].clone();
        self.bag_nb[bag].difference_with(&whole);
    }

    fn bag_count(&self, grp: usize) -> usize {
        (0..self.labels.len()).filter(|&b| self.touches(grp, b)).count()
    }

    /// Folds groups that touch no branch set into an adjacent group. Such
    /// a merge changes no common-neighbor count, so it never costs options.
    /// Groups touching one branch set stay separate: merging them eagerly can
    /// leave a single group shared by every pair, which only one endpoint can
    /// absorb.
    fn phase_one(&mut self) -> Option<Outcome> {
        loop {
            let idle = self.live_groups().find(|&w| {
                self.bag_count(w) == 0 && self.live_groups().any(|x| x != w && self.groups_adjacent(w, x))
            });
            let w = idle?;
            let into = self
                .live_groups()
                .filter(|&x| x != w && self.groups_adjacent(w, x))
                .max_by_key(|&x| (self.bag_count(x), std::cmp::Reverse(x)))
                .expect("an adjacent group exists");
            if !self.tick() {
                return Some(Outcome::OutOfSteps);
            }
            self.merge_groups(into, w);
        }
    }

    /// Shortest chain of live groups from one touching bag `i` to one
    /// touching bag `j`.
    fn group_path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let m = self.groups.len();
        let mut prev = vec![usize::MAX; m];
        let mut queue = std::collections::VecDeque::new();
        for w in self.live_groups().filter(|&w| self.touches(w, i)) {
            prev[w] = w;
            queue.push_back(w);
        }
        while let Some(w) = queue.pop_front() {
            if self.touches(w, j) {
                let mut path = vec![w];
                let mut at = w;
                while prev[at] != at {
                    at = prev[at];
                    path.push(at);
                }
                path.reverse();
                return Some(path);
            }
            for x in self.live_groups() {
                if prev[x] == usize::MAX && self.groups_adjacent(w, x) {
                    prev[x] = w;
                    queue.push_back(x);
                }
            }
        }
        None
    }

    fn phase_two(&mut self) -> Outcome {
        loop {
            let pairs = self.missing_pairs();
            if pairs.is_empty() {
                return Outcome::Found;
            }
            let commons: Vec<Vec<usize>> = pairs.iter().map(|&p| self.common(p)).collect();
            let (pi, _) = commons
                .iter()
                .enumerate()
                .min_by_key(|(i, c)| (c.len(), *i))
                .expect("pairs is non-empty");
            if commons[pi].is_empty() {
                // no single group joins the pair: split a chain between them
                let (u, v) = pairs[pi];
                let Some(path) = self.group_path(u, v) else {
                    return Outcome::Stuck;
                };
                let half = path.len().div_ceil(2);
                for (n, &w) in path.iter().enumerate() {
                    if !self.tick() {
                        return Outcome::OutOfSteps;
                    }
                    self.absorb(if n < half { u } else { v }, w);
                }
                continue;
            }
            let w = *commons[pi]
                .iter()
                .max_by_key(|&&w| {
                    let worst = commons
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != pi)
                        .map(|(_, c)| c.len() - c.contains(&w) as usize)
                        .min()
                        .unwrap_or(usize::MAX);
                    (worst, std::cmp::Reverse(w))
                })
                .expect("common neighbors are non-empty");
            let (u, v) = pairs[pi];
            let gain = |end: usize| {
                pairs
                    .iter()
                    .filter(|&&(a, b)| (a, b) != (u, v) && (a == end || b == end))
                    .filter(|&&(a, b)| self.touches(w, if a == end { b } else { a }))
                    .count()
            };
            let target = if gain(v) > gain(u) { v } else { u };
            if !self.tick() {
                return Outcome::OutOfSteps;
            }
            self.absorb(target, w);
        }
    }

    fn run(&mut self) -> Outcome {
        if let Some(o) = self.phase_one() {
            return o;
        }
        self.phase_two()
    }

    fn evidence(&self, component: &VertexSet) -> MinorEvidence {
        let bags = self
            .labels
            .iter()
            .zip(&self.bags)
            .filter(|(_, b)| b.len() > 1)
            .map(|(&l, b)| (l, b.clone()))
            .collect();
        let _ = self.g;
        MinorEvidence {
            component: component.clone(),
            bags,
        }
    }
}

/// Tries to certify `s` minor-safe, with evidence for every component.
pub fn heuristic_minor_safe(g: &Graph, s: &VertexSet, step_budget: usize) -> SafeSeparatorReport {
    let comps = g.components_with_neighborhoods(s);
    let report = |verdict, evidence| SafeSeparatorReport {
        separator: s.clone(),
        verdict,
        evidence,
    };
    if g.is_clique(s) {
        let ev = comps
            .iter()
            .map(|(c, _)| MinorEvidence {
                component: c.clone(),
                bags: Vec::new(),
            })
            .collect();
        return report(Verdict::Yes, ev);
    }
    if let Some(apex) = is_almost_clique(g, s) {
        let fulls: Vec<usize> = (0..comps.len()).filter(|&i| comps[i].1 == *s).collect();
        if fulls.len() >= 2 {
            let ev = comps
                .iter()
                .enumerate()
                .map(|(i, (c, _))| {
                    let d = *fulls.iter().find(|&&f| f != i).unwrap();
                    let mut bag = comps[d].0.clone();
                    bag.insert(apex);
                    MinorEvidence {
                        component: c.clone(),
                        bags: vec![(apex, bag)],
                    }
                })
                .collect();
            return report(Verdict::Yes, ev);
        }
    }
    let mut evidence = Vec::with_capacity(comps.len());
    for (c, _) in &comps {
        let mut search = MinorSearch::new(g, s, c, step_budget);
        match search.run() {
            Outcome::Found => evidence.push(search.evidence(c)),
            Outcome::Stuck => return report(Verdict::DontKnow, Vec::new()),
            Outcome::OutOfSteps => return report(Verdict::Aborted, Vec::new()),
        }
    }
    report(Verdict::Yes, evidence)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceError(pub String);

impl fmt::Display for EvidenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks that `ev` describes `s` as a labelled clique minor of
/// `G - component`.
pub fn verify_minor_evidence(
    g: &Graph,
    s: &VertexSet,
    component: &VertexSet,
    ev: &MinorEvidence,
) -> std::result::Result<(), EvidenceError> {
    let fail = |m: String| Err(EvidenceError(m));
    if ev.component != *component {
        return fail("evidence is for a different component".into());
    }
    if s.intersects(component) {
        return fail("separator meets the component".into());
    }
    let labels = s.to_vec();
    let mut bags: Vec<VertexSet> = labels.iter().map(|&v| VertexSet::singleton(g.n(), v)).collect();
    let mut given = FxHashSet::default();
    for (label, bag) in &ev.bags {
        let Some(i) = labels.iter().position(|l| l == label) else {
            return fail(format!("label {label} is not a separator vertex"));
        };
        if !given.insert(*label) {
            return fail(format!("label {label} has two branch sets"));
        }
        if !bag.contains(*label) {
            return fail(format!("branch set of {label} does not contain it"));
        }
        if bag.intersects(component) {
            return fail(format!("branch set of {label} meets the component"));
        }
        if bag.intersection_len(s) != 1 {
            return fail(format!("branch set of {label} contains another separator vertex"));
        }
        if !g.is_connected_set(bag) {
            return fail(format!("branch set of {label} is not connected"));
        }
        bags[i] = bag.clone();
    }
    for i in 0..bags.len() {
        for j in i + 1..bags.len() {
            if bags[i].intersects(&bags[j]) {
                return fail(format!("branch sets of {} and {} overlap", labels[i], labels[j]));
            }
            let nb = g.open_neighborhood(&bags[i]);
            if !nb.intersects(&bags[j]) {
                return fail(format!("branch sets of {} and {} are not adjacent", labels[i], labels[j]));
            }
        }
    }
    Ok(())
}

/// A subproblem: `graph` on local vertices, `map[local] = vertex of G`.
#[derive(Clone, Debug)]
pub struct Part {
    pub graph: Graph,
    pub map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Part(usize),
    Split(usize),
}

/// An applied separator (in vertices of `G`) and the pieces it produced.
#[derive(Clone, Debug)]
pub struct Split {
    pub separator: VertexSet,
    pub children: Vec<Node>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<Part>,
    pub splits: Vec<Split>,
    pub root: Node,
}

impl Decomposition {
    pub fn applied(&self) -> usize {
        self.splits.len()
    }

    pub fn max_part(&self) -> usize {
        self.parts.iter().map(|p| p.graph.n()).max().unwrap_or(0)
    }

    /// Combines decompositions of the parts (in local indices) into one of
    /// `G`: each split contributes a bag holding its separator, linked to a
    /// bag of every piece that contains the piece's share of the separator.
    pub fn glue(&self, n: usize, part_tds: &[TreeDecomposition]) -> TreeDecomposition {
        let identity: Vec<usize> = (0..n).collect();
        let part_td = |i: usize| {
            let mut td = TreeDecomposition::default();
            td.append_mapped(&part_tds[i], &self.parts[i].map, n);
            td
        };
        // a split's children always have larger ids, so build from the back
        let mut built: Vec<Option<TreeDecomposition>> = vec![None; self.splits.len()];
        for i in (0..self.splits.len()).rev() {
            let sep = &self.splits[i].separator;
            let mut td = TreeDecomposition::single(sep.clone());
            for &c in &self.splits[i].children {
                let sub = match c {
                    Node::Part(j) => part_td(j),
                    Node::Split(j) => built[j].take().expect("child split built"),
                };
                let off = td.append_mapped(&sub, &identity, n);
                let mut shared = VertexSet::new(n);
                for b in &sub.bags {
                    shared.union_with(&b.intersection(sep));
                }
                let at = (off..td.bags.len())
                    .find(|&b| shared.is_subset(&td.bags[b]))
                    .expect("a clique lies in some bag");
                td.edges.push((0, at));
            }
            built[i] = Some(td);
        }
        let mut td = match self.root {
            Node::Part(j) => part_td(j),
            Node::Split(j) => built[j].take().expect("root split built"),
        };
        td.contract_subsumed();
        td
    }
}

// (graph, map, slot to fill with the resulting node)
type Pending = (Graph, Vec<usize>, Option<(usize, usize)>);

/// Splits `g` along verified minor-safe separators until none of the
/// candidates of any part verifies.
pub fn decompose(g: &Graph, step_budget: usize) -> Decomposition {
    let mut parts = Vec::new();
    let mut splits = Vec::new();
    let mut work: Vec<Pending> = vec![(g.clone(), (0..g.n()).collect(), None)];
    let mut root = None;
    while let Some((h, map, slot)) = work.pop() {
        let node = match find_safe_separator(&h, step_budget) {
            None => {
                parts.push(Part { graph: h, map });
                Node::Part(parts.len() - 1)
            }
            Some(s) => {
                let id = splits.len();
                let comps = h.components(&s);
                splits.push(Split {
                    separator: VertexSet::from_vertices(g.n(), s.iter().map(|v| map[v])),
                    children: vec![Node::Part(usize::MAX); comps.len()],
                });
                for (k, c) in comps.iter().enumerate() {
                    let (sub, local) = h.completed_part(c);
                    let sub_map = local.iter().map(|&v| map[v]).collect();
                    work.push((sub, sub_map, Some((id, k))));
                }
                Node::Split(id)
            }
        };
        match slot {
            None => root = Some(node),
            Some((sp, k)) => splits[sp].children[k] = node,
        }
    }
    let d = Decomposition {
        parts,
        splits,
        root: root.expect("the whole graph is processed"),
    };
    log::debug!("safe separators applied: {}, max part {}", d.applied(), d.max_part());
    d
}

/// The first verified separator of `h`, trying those whose largest piece is
/// smallest first.
fn find_safe_separator(h: &Graph, step_budget: usize) -> Option<VertexSet> {
    if h.n() <= 2 {
        return None;
    }
    let mut cands: Vec<(usize, usize, VertexSet)> = candidate_separators(h)
        .into_iter()
        .map(|s| {
            let biggest = h
                .components_with_neighborhoods(&s)
                .iter()
                .map(|(c, nb)| c.len() + nb.len())
                .max()
                .unwrap_or(0);
            (biggest, s.len(), s)
        })
        .collect();
    cands.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then_with(|| a.2.cmp(&b.2)));
    for (_, _, s) in cands {
        let r = heuristic_minor_safe(h, &s, step_budget);
        if r.verdict == Verdict::Yes {
            debug_assert!(r
                .evidence
                .iter()
                .all(|e| verify_minor_evidence(h, &s, &e.component, e).is_ok()));
            return Some(s);
        }
    }
    None
}
