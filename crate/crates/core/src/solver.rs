//! Maximum peaceful sets.
//!
//! Three searches share one report type:
//!
//! * [`solve_oracle`] enumerates subsets in row-major order and checks every new
//!   point against all chosen pairs with [`angle_equals`]. It is slow and
//!   deliberately shares no machinery with the other two.
//! * [`solve_exact`] is branch and bound over the 3-uniform hypergraph of
//!   forbidden triples. A cell is dead once two chosen cells complete a triple
//!   through it; a branch is cut when `chosen + live <= best`.
//! * [`solve_greedy`] runs randomized greedy restarts with swap-based local search.
//!
//! The published bounds are never used for pruning; they are only reported, and a
//! result above the upper bound is flagged.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::analysis::bounds;
use crate::angle::{angle_equals, completions, forbidden_triples_iter, verify, AngleSpec};
use crate::constructions::two_rows;
use crate::error::{Error, Result};
use crate::grid::{Construction, GridDim, Point, Symmetry};

pub const DEFAULT_ORACLE_CAP: u32 = 4;
/// Hard ceiling for the oracle even with an explicit override.
pub const MAX_ORACLE_N: u32 = 5;
/// Grids with at most this many cells get an eagerly built completion table.
const EAGER_TABLE_CELLS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Oracle,
    BranchAndBound,
    Greedy,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(SearchMode::Oracle),
            "branch_and_bound" | "branch-and-bound" | "exact" | "bnb" => {
                Ok(SearchMode::BranchAndBound)
            }
            "greedy" => Ok(SearchMode::Greedy),
            _ => Err(Error::Parse(format!(
                "unknown mode {s:?} (oracle, branch-and-bound, greedy)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub symmetry_breaking: bool,
    pub rng_seed: u64,
    /// Largest `n` the oracle accepts; at most [`MAX_ORACLE_N`].
    pub oracle_cap: u32,
    /// Greedy restarts, counting the two-row warm start.
    pub restarts: u32,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::BranchAndBound,
            node_budget: None,
            time_budget: None,
            symmetry_breaking: true,
            rng_seed: 0,
            oracle_cap: DEFAULT_ORACLE_CAP,
            restarts: 16,
            cancel: None,
        }
    }
}

impl SearchConfig {
    pub fn with_mode(mode: SearchMode) -> Self {
        SearchConfig {
            mode,
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundContext {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub mode: SearchMode,
    pub theta: AngleSpec,
    pub best: Construction,
    pub size: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
    pub bound_context: BoundContext,
    /// Set when `size` exceeds the reported upper bound.
    pub exceeds_upper_bound: bool,
    pub seed: Option<u64>,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl SolveReport {
    fn new(
        mode: SearchMode,
        theta: AngleSpec,
        best: Construction,
        optimal: bool,
        nodes_explored: u64,
        started: Instant,
        seed: Option<u64>,
    ) -> Self {
        let b = bounds(theta, best.dim());
        let size = best.len();
        debug_assert!(verify(&best, theta).is_peaceful());
        SolveReport {
            mode,
            theta,
            size,
            optimal,
            nodes_explored,
            elapsed: started.elapsed(),
            bound_context: BoundContext {
                lower: b.lower,
                upper: b.upper,
            },
            exceeds_upper_bound: b.upper.is_some_and(|u| size as u64 > u),
            seed,
            best,
        }
    }
}

/// Runs the search selected by `cfg.mode`.
pub fn solve(dim: GridDim, theta: AngleSpec, cfg: &SearchConfig) -> Result<SolveReport> {
    match cfg.mode {
        SearchMode::Oracle => solve_oracle_with(dim, theta, cfg),
        SearchMode::BranchAndBound => Ok(solve_exact(dim, theta, cfg)),
        SearchMode::Greedy => Ok(solve_greedy(dim, theta, cfg)),
    }
}

/// Budget and cancellation bookkeeping shared by the searches.
struct Budget<'a> {
    cfg: &'a SearchConfig,
    started: Instant,
    nodes: u64,
    exhausted: bool,
}

impl<'a> Budget<'a> {
    fn new(cfg: &'a SearchConfig, started: Instant) -> Self {
        Budget {
            cfg,
            started,
            nodes: 0,
            exhausted: false,
        }
    }

    /// Counts a node; false once any budget is spent or the search was cancelled.
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        let over_nodes = self.cfg.node_budget.is_some_and(|b| self.nodes > b);
        let cancelled = self
            .cfg
            .cancel
            .as_ref()
            .is_some_and(|c| c.load(Ordering::Relaxed));
        // Clock reads are comparatively slow; sample them.
        let over_time = self.nodes.is_multiple_of(1024)
            && self
                .cfg
                .time_budget
                .is_some_and(|t| self.started.elapsed() >= t);
        if over_nodes || cancelled || over_time {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

// ---------------------------------------------------------------------------
// Oracle

fn oracle_cap_check(dim: GridDim, cfg: &SearchConfig) -> Result<()> {
    let cap = cfg.oracle_cap.min(MAX_ORACLE_N);
    if dim.n() > cap {
        let hint = if dim.n() <= MAX_ORACLE_N {
            format!(
                "raise the oracle cap to {} explicitly, or use branch-and-bound",
                dim.n()
            )
        } else {
            "use branch-and-bound or greedy".to_string()
        };
        return Err(Error::TooLarge {
            n: dim.n(),
            cap,
            hint,
        });
    }
    Ok(())
}

/// Whether `z` can join `chosen` without forming the angle at any vertex.
fn oracle_compatible(chosen: &[Point], z: Point, theta: AngleSpec) -> bool {
    for (i, &p) in chosen.iter().enumerate() {
        for &q in &chosen[i + 1..] {
            if angle_equals(p, z, q, theta)
                || angle_equals(z, p, q, theta)
                || angle_equals(p, q, z, theta)
            {
                return false;
            }
        }
    }
    true
}

pub fn solve_oracle(dim: GridDim, theta: AngleSpec) -> Result<SolveReport> {
    solve_oracle_with(dim, theta, &SearchConfig::with_mode(SearchMode::Oracle))
}

/// Exhaustive search over subsets in row-major include-first order, so the
/// first maximum found is the lexicographically least one.
pub fn solve_oracle_with(
    dim: GridDim,
    theta: AngleSpec,
    cfg: &SearchConfig,
) -> Result<SolveReport> {
    oracle_cap_check(dim, cfg)?;
    let started = Instant::now();
    let cells: Vec<Point> = dim.points().collect();
    let mut budget = Budget::new(cfg, started);
    let mut best: Vec<Point> = Vec::new();
    let mut chosen = Vec::new();

    fn dfs(
        i: usize,
        cells: &[Point],
        theta: AngleSpec,
        chosen: &mut Vec<Point>,
        best: &mut Vec<Point>,
        budget: &mut Budget,
    ) {
        if !budget.tick() {
            return;
        }
        if chosen.len() > best.len() {
            best.clone_from(chosen);
        }
        if i == cells.len() || chosen.len() + (cells.len() - i) <= best.len() {
            return;
        }
        let z = cells[i];
        if oracle_compatible(chosen, z, theta) {
            chosen.push(z);
            dfs(i + 1, cells, theta, chosen, best, budget);
            chosen.pop();
        }
        dfs(i + 1, cells, theta, chosen, best, budget);
    }

    dfs(0, &cells, theta, &mut chosen, &mut best, &mut budget);
    let best = Construction::new(dim, best)?;
    Ok(SolveReport::new(
        SearchMode::Oracle,
        theta,
        best,
        !budget.exhausted,
        budget.nodes,
        started,
        None,
    ))
}

/// Calls `visit` on every peaceful construction with exactly `size` points,
/// in row-major lexicographic order. Same machinery and cap as the oracle.
pub fn enumerate_peaceful(
    dim: GridDim,
    theta: AngleSpec,
    size: usize,
    cfg: &SearchConfig,
    mut visit: impl FnMut(&Construction),
) -> Result<()> {
    oracle_cap_check(dim, cfg)?;
    let cells: Vec<Point> = dim.points().collect();
    let mut chosen = Vec::new();

    fn dfs(
        i: usize,
        cells: &[Point],
        theta: AngleSpec,
        size: usize,
        chosen: &mut Vec<Point>,
        visit: &mut dyn FnMut(&[Point]),
    ) {
        if chosen.len() == size {
            visit(chosen);
            return;
        }
        if chosen.len() + (cells.len() - i) < size {
            return;
        }
        let z = cells[i];
        if oracle_compatible(chosen, z, theta) {
            chosen.push(z);
            dfs(i + 1, cells, theta, size, chosen, visit);
            chosen.pop();
        }
        dfs(i + 1, cells, theta, size, chosen, visit);
    }

    let mut emit = |pts: &[Point]| {
        let c = Construction::new(dim, pts.iter().copied()).expect("grid points");
        visit(&c);
    };
    dfs(0, &cells, theta, size, &mut chosen, &mut emit);
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared machinery for branch and bound and greedy

/// Fixed-size bitset over cell indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct CellSet {
    words: Vec<u64>,
}

impl CellSet {
    fn new(cells: usize) -> Self {
        CellSet {
            words: vec![0; cells.div_ceil(64)],
        }
    }

    fn full(cells: usize) -> Self {
        let mut s = CellSet::new(cells);
        for i in 0..cells {
            s.insert(i);
        }
        s
    }

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}
/// Completion lists computed on demand, keyed by cell-index pair.
type LazyTable = HashMap<(u16, u16), Arc<[u16]>>;

/// For each pair of cells, the cells that complete a forbidden triple with them
/// (in any vertex role).
struct CompletionTable {
    dim: GridDim,
    theta: AngleSpec,
    cells: usize,
    eager: Option<Vec<Vec<u16>>>,
    lazy: Mutex<LazyTable>,
}

impl CompletionTable {
    fn new(dim: GridDim, theta: AngleSpec) -> Self {
        let cells = dim.cell_count();
        assert!(cells <= u16::MAX as usize, "grid too large for the solver");
        let eager = (cells <= EAGER_TABLE_CELLS).then(|| {
            let mut table = vec![Vec::new(); cells * cells];
            for t in forbidden_triples_iter(dim, theta) {
                let [a, v, c] = t.points().map(|p| dim.index_of(p));
                for (x, y, z) in [(a, v, c), (a, c, v), (v, c, a)] {
                    table[x * cells + y].push(z as u16);
                    table[y * cells + x].push(z as u16);
                }
            }
            for list in &mut table {
                list.sort_unstable();
                list.dedup();
            }
            table
        });
        CompletionTable {
            dim,
            theta,
            cells,
            eager,
            lazy: Mutex::new(HashMap::new()),
        }
    }

    fn compute(&self, i: usize, j: usize) -> Vec<u16> {
        let (dim, theta) = (self.dim, self.theta);
        let (p, q) = (dim.point_at(i), dim.point_at(j));
        let mut out: Vec<u16> = completions(dim, q, p, theta)
            .chain(completions(dim, p, q, theta))
            .map(|z| dim.index_of(z) as u16)
            .collect();
        out.extend(
            dim.points()
                .filter(|&z| angle_equals(p, z, q, theta))
                .map(|z| dim.index_of(z) as u16),
        );
        out.sort_unstable();
        out.dedup();
        out
    }

    fn with<R>(&self, i: usize, j: usize, f: impl FnOnce(&[u16]) -> R) -> R {
        if let Some(table) = &self.eager {
            return f(&table[i * self.cells + j]);
        }
        let key = (i.min(j) as u16, i.max(j) as u16);
        let list = {
            let mut memo = self.lazy.lock().expect("completion memo poisoned");
            memo.entry(key)
                .or_insert_with(|| self.compute(i, j).into())
                .clone()
        };
        f(&list)
    }

    /// Number of forbidden triples through each cell.
    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.cells];
        for i in 0..self.cells {
            for j in i + 1..self.cells {
                self.with(i, j, |ks| {
                    for &k in ks {
                        if (k as usize) > j {
                            deg[i] += 1;
                            deg[j] += 1;
                            deg[k as usize] += 1;
                        }
                    }
                });
            }
        }
        deg
    }
}

// ---------------------------------------------------------------------------
// Branch and bound

enum Goal {
    /// Find something strictly larger than the incumbent.
    Improve,
    /// Stop at the first set of exactly this size.
    Reach(usize),
}

struct BranchSearch<'a> {
    table: &'a CompletionTable,
    order: Vec<usize>,
    /// Cells that may still be chosen: undecided and not dead.
    avail: CellSet,
    avail_count: usize,
    undo: Vec<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    goal: Goal,
    done: bool,
    /// Cells that are not the first of their symmetry orbit in `order`.
    non_leaders: Option<CellSet>,
}

impl<'a> BranchSearch<'a> {
    fn new(table: &'a CompletionTable, order: Vec<usize>, goal: Goal) -> Self {
        let cells = table.cells;
        BranchSearch {
            table,
            order,
            avail: CellSet::full(cells),
            avail_count: cells,
            undo: Vec::new(),
            chosen: Vec::new(),
            best: Vec::new(),
            goal,
            done: false,
            non_leaders: None,
        }
    }

    fn take(&mut self, cell: usize) {
        if self.avail.contains(cell) {
            self.avail.remove(cell);
            self.avail_count -= 1;
            self.undo.push(cell);
        }
    }

    fn rollback(&mut self, mark: usize) {
        while self.undo.len() > mark {
            let cell = self.undo.pop().expect("undo entry");
            self.avail.insert(cell);
            self.avail_count += 1;
        }
    }

    fn choose(&mut self, cell: usize) {
        self.take(cell);
        for si in 0..self.chosen.len() {
            let s = self.chosen[si];
            let table = self.table;
            table.with(cell, s, |ks| {
                for &k in ks {
                    self.take(k as usize);
                }
            });
        }
        self.chosen.push(cell);
    }

    fn run(&mut self, pos: usize, budget: &mut Budget) {
        if self.done || !budget.tick() {
            return;
        }
        match self.goal {
            Goal::Improve => {
                if self.chosen.len() > self.best.len() {
                    self.best.clone_from(&self.chosen);
                }
                if self.chosen.len() + self.avail_count <= self.best.len() {
                    return;
                }
            }
            Goal::Reach(target) => {
                if self.chosen.len() == target {
                    self.best.clone_from(&self.chosen);
                    self.done = true;
                    return;
                }
                if self.chosen.len() + self.avail_count < target {
                    return;
                }
            }
        }
        let Some(next) = (pos..self.order.len()).find(|&i| self.avail.contains(self.order[i]))
        else {
            return;
        };
        let cell = self.order[next];
        let mark = self.undo.len();

        let skip_include = self.chosen.is_empty()
            && self
                .non_leaders
                .as_ref()
                .is_some_and(|nl| nl.contains(cell));
        if !skip_include {
            self.choose(cell);
            self.run(next + 1, budget);
            self.chosen.pop();
            self.rollback(mark);
        }

        self.take(cell);
        self.run(next + 1, budget);
        self.rollback(mark);
    }
}

/// Marks every cell that has an earlier member of its orbit in `order`.
fn orbit_non_leaders(dim: GridDim, order: &[usize]) -> CellSet {
    let mut rank = vec![0usize; order.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let mut out = CellSet::new(order.len());
    for &c in order {
        let p = dim.point_at(c);
        let earlier = Symmetry::all()
            .iter()
            .any(|s| rank[dim.index_of(s.apply(p, dim))] < rank[c]);
        if earlier {
            out.insert(c);
        }
    }
    out
}

fn to_construction(dim: GridDim, cells: &[usize]) -> Construction {
    Construction::new(dim, cells.iter().map(|&c| dim.point_at(c))).expect("cells are in grid")
}

/// Exact maximum by branch and bound.
///
/// Cells are branched in descending hypergraph degree (ties row-major). Once the
/// optimum size is proven, a second pass in row-major include-first order picks
/// the lexicographically least optimum, so the witness matches [`solve_oracle`].
pub fn solve_exact(dim: GridDim, theta: AngleSpec, cfg: &SearchConfig) -> SolveReport {
    let started = Instant::now();
    let table = CompletionTable::new(dim, theta);
    let cells = table.cells;

    let warm = warm_start(dim, theta, cfg);
    let degree = table.degrees();
    let mut order: Vec<usize> = (0..cells).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(degree[c]), c));

    let mut budget = Budget::new(cfg, started);
    let mut search = BranchSearch::new(&table, order.clone(), Goal::Improve);
    search.best = warm.points().map(|p| dim.index_of(p)).collect();
    if cfg.symmetry_breaking {
        search.non_leaders = Some(orbit_non_leaders(dim, &order));
    }
    search.run(0, &mut budget);
    let mut best = search.best;
    let optimal = !budget.exhausted;

    if optimal {
        let target = best.len();
        let mut lex = BranchSearch::new(&table, (0..cells).collect(), Goal::Reach(target));
        lex.run(0, &mut budget);
        if lex.done {
            best = lex.best;
        }
    }
    SolveReport::new(
        SearchMode::BranchAndBound,
        theta,
        to_construction(dim, &best),
        optimal,
        budget.nodes,
        started,
        None,
    )
}

fn warm_start(dim: GridDim, theta: AngleSpec, cfg: &SearchConfig) -> Construction {
    let rows = two_rows(dim)
        .ok()
        .filter(|c| verify(c, theta).is_peaceful());
    let quick = SearchConfig {
        restarts: 2,
        node_budget: Some(50_000),
        time_budget: None,
        cancel: cfg.cancel.clone(),
        ..cfg.clone()
    };
    let greedy = solve_greedy(dim, theta, &quick).best;
    match rows {
        Some(r) if r.len() >= greedy.len() => r,
        _ => greedy,
    }
}

// ---------------------------------------------------------------------------
// Greedy

struct GreedyState<'a> {
    table: &'a CompletionTable,
    chosen: Vec<usize>,
    in_set: CellSet,
    dead: CellSet,
}

impl<'a> GreedyState<'a> {
    fn new(table: &'a CompletionTable) -> Self {
        GreedyState {
            table,
            chosen: Vec::new(),
            in_set: CellSet::new(table.cells),
            dead: CellSet::new(table.cells),
        }
    }

    fn from_cells(table: &'a CompletionTable, cells: &[usize]) -> Self {
        let mut s = GreedyState::new(table);
        for &c in cells {
            s.add(c);
        }
        s
    }

    fn live(&self) -> Vec<usize> {
        (0..self.table.cells)
            .filter(|&c| !self.in_set.contains(c) && !self.dead.contains(c))
            .collect()
    }

    fn add(&mut self, cell: usize) {
        debug_assert!(!self.dead.contains(cell));
        for &s in &self.chosen {
            self.table.with(cell, s, |ks| {
                for &k in ks {
                    self.dead.insert(k as usize);
                }
            });
        }
        self.chosen.push(cell);
        self.in_set.insert(cell);
    }

    fn remove(&mut self, cell: usize) {
        let rest: Vec<usize> = self.chosen.iter().copied().filter(|&c| c != cell).collect();
        *self = GreedyState::from_cells(self.table, &rest);
    }

    /// Cells `cell` would newly kill among currently live ones.
    fn newly_dead(&self, cell: usize) -> CellSet {
        let mut out = CellSet::new(self.table.cells);
        for &s in &self.chosen {
            self.table.with(cell, s, |ks| {
                for &k in ks {
                    let k = k as usize;
                    if !self.dead.contains(k) && !self.in_set.contains(k) {
                        out.insert(k);
                    }
                }
            });
        }
        out
    }

    /// Adds live cells one by one, each time taking one that kills the fewest.
    fn fill(&mut self, rng: &mut ChaCha8Rng, budget: &mut Budget) {
        loop {
            if !budget.tick() {
                return;
            }
            let live = self.live();
            if live.is_empty() {
                return;
            }
            let scored: Vec<(usize, usize)> = live
                .iter()
                .map(|&c| (self.newly_dead(c).len(), c))
                .collect();
            let least = scored.iter().map(|s| s.0).min().expect("nonempty");
            let ties: Vec<usize> = scored
                .iter()
                .filter(|s| s.0 == least)
                .map(|s| s.1)
                .collect();
            let pick = ties[rng.random_range(0..ties.len())];
            self.add(pick);
        }
    }

    /// Tries to replace one chosen cell by two live ones.
    fn improve_once(&mut self, rng: &mut ChaCha8Rng, budget: &mut Budget) -> bool {
        let mut order = self.chosen.clone();
        order.sort_unstable();
        order.shuffle(rng);
        for out in order {
            if !budget.tick() {
                return false;
            }
            let mut trial = GreedyState::from_cells(
                self.table,
                &self
                    .chosen
                    .iter()
                    .copied()
                    .filter(|&c| c != out)
                    .collect::<Vec<_>>(),
            );
            let live: Vec<usize> = trial.live().into_iter().filter(|&c| c != out).collect();
            for (i, &u) in live.iter().enumerate() {
                let killed = trial.newly_dead(u);
                if let Some(&v) = live[i + 1..].iter().find(|&&v| !killed.contains(v)) {
                    trial.add(u);
                    trial.add(v);
                    *self = trial;
                    return true;
                }
            }
        }
        false
    }
}

/// Randomized greedy with local search. Never claims optimality.
pub fn solve_greedy(dim: GridDim, theta: AngleSpec, cfg: &SearchConfig) -> SolveReport {
    let started = Instant::now();
    let table = CompletionTable::new(dim, theta);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut budget = Budget::new(cfg, started);
    let plateau_moves = 2 * table.cells;

    let seeded = two_rows(dim)
        .ok()
        .filter(|c| verify(c, theta).is_peaceful())
        .map(|c| c.points().map(|p| dim.index_of(p)).collect::<Vec<_>>());

    let mut best: Vec<usize> = Vec::new();
    for restart in 0..cfg.restarts.max(1) {
        if budget.exhausted {
            break;
        }
        let mut state = match (&seeded, restart) {
            (Some(cells), 0) => GreedyState::from_cells(&table, cells),
            _ => GreedyState::new(&table),
        };
        state.fill(&mut rng, &mut budget);
        let mut local_best = state.chosen.clone();
        let mut stale = 0;
        while stale < plateau_moves && !budget.exhausted {
            if state.improve_once(&mut rng, &mut budget) {
                state.fill(&mut rng, &mut budget);
            } else if !state.chosen.is_empty() {
                // Plateau move: swap a chosen cell for a live one.
                let out = state.chosen[rng.random_range(0..state.chosen.len())];
                state.remove(out);
                let live: Vec<usize> = state.live().into_iter().filter(|&c| c != out).collect();
                if live.is_empty() {
                    state.add(out);
                } else {
                    state.add(live[rng.random_range(0..live.len())]);
                    state.fill(&mut rng, &mut budget);
                }
            }
            if state.chosen.len() > local_best.len() {
                local_best = state.chosen.clone();
                stale = 0;
            } else {
                stale += 1;
            }
            if !budget.tick() {
                break;
            }
        }
        if local_best.len() > best.len() {
            best = local_best;
        }
    }

    let best = to_construction(dim, &best);
    debug_assert!(verify(&best, theta).is_peaceful());
    SolveReport::new(
        SearchMode::Greedy,
        theta,
        best,
        false,
        budget.nodes,
        started,
        Some(cfg.rng_seed),
    )
}
