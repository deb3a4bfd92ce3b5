//! Solver pipeline, census and bound calculators behind the `tw` binary.

use std::path::Path;
use std::sync::atomic::AtomicBool;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use pidtw::oracle;
use pidtw::safe_sep::{decompose, Decomposition, Part, DEFAULT_STEP_BUDGET};
use pidtw::solver::{self, SolverStats};
use pidtw::td::{extract, validate, Violation};
use pidtw::{Graph, TreeDecomposition};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: pidtw::Error },
    #[error("{0}")]
    Solver(#[from] pidtw::Error),
    #[error("decomposition failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Invalid(_) => 3,
            CliError::Solver(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Gr,
    Col,
}

impl Format {
    /// `.col` files are DIMACS, everything else PACE.
    pub fn guess(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("col") => Format::Col,
            _ => Format::Gr,
        }
    }
}

pub fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parsed = match format.unwrap_or_else(|| Format::guess(path)) {
        Format::Gr => pidtw::io::read_gr(&text),
        Format::Col => pidtw::io::read_col(&text),
    };
    parsed.map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub safe_separators: bool,
    pub jobs: usize,
    pub step_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            safe_separators: true,
            jobs: 1,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub iblocks: usize,
    pub oblocks: usize,
    pub pmcs_buildable: usize,
    pub pmcs_feasible: usize,
}

impl Counters {
    fn add(&mut self, s: &SolverStats) {
        self.iblocks += s.iblocks;
        self.oblocks += s.oblocks;
        self.pmcs_buildable += s.pmcs_buildable;
        self.pmcs_feasible += s.pmcs_feasible;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SafeSeparatorStats {
    pub found: usize,
    pub max_part: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub tw: usize,
    pub td: TreeDecomposition,
    /// Counters of the accepting run of every part, summed.
    pub counters: Counters,
    pub safe_separators: SafeSeparatorStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub tw: usize,
    pub time_ms: u128,
    pub counters: Counters,
    pub safe_separators: SafeSeparatorStats,
}

struct PartResult {
    tw: usize,
    td: TreeDecomposition,
    stats: SolverStats,
}

fn solve_part(part: &Part, start: usize) -> Result<PartResult, CliError> {
    let h = &part.graph;
    if h.n() == 1 {
        return Ok(PartResult {
            tw: 0,
            td: TreeDecomposition::single(h.all_vertices()),
            stats: SolverStats::default(),
        });
    }
    let mut k = start.max(h.min_degree());
    loop {
        let d = solver::decide(h, k)?;
        if d.yes {
            let td = extract(h, d.witness.as_ref().expect("yes carries a witness"))?;
            return Ok(PartResult {
                tw: k,
                td,
                stats: d.stats,
            });
        }
        k += 1;
    }
}

fn trivial_decomposition(h: &Graph) -> Decomposition {
    Decomposition {
        parts: vec![Part {
            graph: h.clone(),
            map: (0..h.n()).collect(),
        }],
        splits: Vec::new(),
        root: pidtw::safe_sep::Node::Part(0),
    }
}

/// Exact treewidth and a validated decomposition of `g`.
///
/// Connected components are solved separately; each is split along
/// minor-safe separators unless disabled. With one job, parts are solved
/// largest first and each search starts at the width found so far, which
/// cannot change the maximum.
pub fn solve(g: &Graph, opts: SolveOptions) -> Result<Solution, CliError> {
    let n = g.n();
    let mut td = TreeDecomposition::default();
    let mut tw = 0;
    let mut counters = Counters::default();
    let mut sep_stats = SafeSeparatorStats::default();
    for (comp, _) in g.components_within(&g.all_vertices()) {
        let (h, map) = g.induced_subgraph(&comp);
        let dec = if opts.safe_separators && h.n() > 2 {
            decompose(&h, opts.step_budget)
        } else {
            trivial_decomposition(&h)
        };
        sep_stats.found += dec.applied();
        sep_stats.max_part = sep_stats.max_part.max(dec.max_part());
        let mut order: Vec<usize> = (0..dec.parts.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(dec.parts[i].graph.n()));
        let results: Vec<(usize, PartResult)> = if opts.jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .expect("thread pool");
            pool.install(|| {
                order
                    .par_iter()
                    .map(|&i| solve_part(&dec.parts[i], 0).map(|r| (i, r)))
                    .collect::<Result<Vec<_>, _>>()
            })?
        } else {
            let mut out = Vec::with_capacity(order.len());
            let mut best = tw;
            for &i in &order {
                let r = solve_part(&dec.parts[i], best)?;
                best = best.max(r.tw);
                out.push((i, r));
            }
            out
        };
        let mut part_tds = vec![TreeDecomposition::default(); dec.parts.len()];
        for (i, r) in results {
            tw = tw.max(r.tw);
            counters.add(&r.stats);
            part_tds[i] = r.td;
        }
        let local = dec.glue(h.n(), &part_tds);
        let first_of_previous = if td.bags.is_empty() { None } else { Some(0) };
        let off = td.append_mapped(&local, &map, n);
        if let Some(p) = first_of_previous {
            td.edges.push((p, off));
        }
    }
    validate(g, &td).map_err(CliError::Invalid)?;
    if td.width() != tw {
        return Err(CliError::Solver(pidtw::Error::Witness(format!(
            "glued decomposition has width {}, parts have {tw}",
            td.width()
        ))));
    }
    Ok(Solution {
        tw,
        td,
        counters,
        safe_separators: sep_stats,
    })
}

/// Best lower bound on every component within the time limit.
pub fn lower_bound(g: &Graph, limit: Duration) -> Result<usize, CliError> {
    let deadline = Instant::now() + limit;
    let cancel = AtomicBool::new(false);
    let mut best = 0;
    let mut comps = g.components_within(&g.all_vertices());
    // densest components first: they usually hold the answer
    comps.sort_by_key(|(c, _)| std::cmp::Reverse(c.len()));
    for (comp, _) in comps {
        let (h, _) = g.induced_subgraph(&comp);
        let lb = solver::lower_bound(&h, Some(deadline), Some(&cancel))?;
        best = best.max(lb);
    }
    Ok(best)
}

/// `C(n, k + 1)`: the trivial bound on the number of vertex sets of size
/// `k + 1`.
pub fn binomial_bound(n: u64, k: u64) -> BigUint {
    binomial(n, k + 1)
}

/// `n · (C(⌈(2n + k + 7) / 3⌉, k + 2) + C(⌈(n + k + 4) / 2⌉, k + 1))`.
pub fn composite_bound(n: u64, k: u64) -> BigUint {
    let a = (2 * n + k + 7).div_ceil(3);
    let b = (n + k + 4).div_ceil(2);
    BigUint::from(n) * (binomial(a, k + 2) + binomial(b, k + 1))
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let r = r.min(n - r);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub m: usize,
    pub tw: usize,
    /// Enumeration columns; `None` when `n` exceeds the limit.
    pub minimal_separators: Option<(usize, usize)>,
    pub pmcs: Option<(usize, usize)>,
    pub feasible_iblocks: usize,
    pub feasible_oblocks: usize,
    pub feasible_pmcs: usize,
    pub binomial_bound: BigUint,
    pub composite_bound: BigUint,
}

impl CensusRow {
    pub const HEADER: &'static str = "n,m,tw,minseps_all,minseps_le_tw,pmcs_all,pmcs_le_tw1,feasible_iblocks,feasible_oblocks,feasible_pmcs,bound_binomial,bound_composite";

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<usize>| x.map_or_else(|| "NA".to_string(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.tw,
            opt(self.minimal_separators.map(|p| p.0)),
            opt(self.minimal_separators.map(|p| p.1)),
            opt(self.pmcs.map(|p| p.0)),
            opt(self.pmcs.map(|p| p.1)),
            self.feasible_iblocks,
            self.feasible_oblocks,
            self.feasible_pmcs,
            self.binomial_bound,
            self.composite_bound
        )
    }
}

/// Object counts of a connected graph at `k = tw(g)`.
pub fn census(g: &Graph, max_n: usize) -> Result<CensusRow, CliError> {
    let (tw, _) = solver::treewidth(g)?;
    let feasible = if tw >= 1 {
        solver::feasible_objects(g, tw)?
    } else {
        Default::default()
    };
    let n = g.n();
    let (minimal_separators, pmcs) = if n <= max_n.min(oracle::ENUMERATION_LIMIT) {
        let seps = oracle::enumerate_minimal_separators(g)?;
        let pm = oracle::enumerate_pmcs(g)?;
        (
            Some((seps.len(), seps.iter().filter(|s| s.len() <= tw).count())),
            Some((pm.len(), pm.iter().filter(|p| p.len() <= tw + 1).count())),
        )
    } else {
        (None, None)
    };
    Ok(CensusRow {
        n,
        m: g.edge_count(),
        tw,
        minimal_separators,
        pmcs,
        feasible_iblocks: feasible.iblocks.len(),
        feasible_oblocks: feasible.oblocks.len(),
        feasible_pmcs: feasible.feasible.len(),
        binomial_bound: binomial_bound(n as u64, tw as u64),
        composite_bound: composite_bound(n as u64, tw as u64),
    })
}

/// Width of `td` if it decomposes `g`.
pub fn check(g: &Graph, td: &TreeDecomposition) -> Result<usize, Vec<Violation>> {
    validate(g, td).map(|_| td.width())
}
