//! Data-flow simulation of the sliced count running in a bounded
//! in-memory compute array.
//!
//! The array holds one row-slice buffer plus a budget of resident column
//! slices. The access trace walks the set bits of the oriented matrix row
//! by row; every valid row/column slice pair becomes one task:
//!
//! * the row slice is written only when it differs from what the row
//!   buffer already holds (consecutive tasks of one row share it);
//! * the column slice is looked up among the residents — a hit reuses it,
//!   a miss writes it, evicting a victim first when the array is full;
//! * the AND + BitCount of the pair is accumulated, so the simulated run
//!   also produces the exact triangle count.
//!
//! Two eviction policies are modeled: least-recently-used, and a
//! farthest-next-use policy that looks the trace ahead (Belady's optimal
//! replacement, usable here because the trace is fully known up front).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::slicing::{CompressedGraph, SliceConfig};

/// Traversal order of the set bits within each row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowOrder {
    /// Ascending column order in every row.
    #[default]
    Sequential,
    /// Ascending in even rows, descending in odd rows, so consecutive
    /// rows turn around instead of jumping back to the left edge.
    Zigzag,
}

/// Column-slice eviction policy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplacementPolicy {
    /// Evict the least recently accessed slice.
    #[default]
    Lru,
    /// Evict the slice whose next use lies farthest in the trace,
    /// preferring slices never used again (Belady's policy).
    Priority,
}

/// Column-slice budget of the array. The row buffer is accounted
/// separately unless [`SimOptions::row_buffer_in_capacity`] is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArrayCapacity {
    /// At most this many resident column slices (must be >= 1).
    Bounded(u64),
    Unbounded,
}

/// One compute task: the AND + BitCount of row slice (row, ordinal) with
/// column slice (col, ordinal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceTask {
    pub row: u32,
    pub col: u32,
    pub ordinal: u32,
}

/// Simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub policy: ReplacementPolicy,
    pub capacity: ArrayCapacity,
    pub order: RowOrder,
    /// Charge the row buffer against the column-slice budget.
    pub row_buffer_in_capacity: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            policy: ReplacementPolicy::default(),
            capacity: ArrayCapacity::Unbounded,
            order: RowOrder::default(),
            row_buffer_in_capacity: false,
        }
    }
}

/// Per-operation costs. Latencies and energies are in whatever units the
/// cost file declares (conventionally ns and pJ). The default is an
/// all-zero placeholder: real device numbers must be supplied, e.g. via
/// [`CostConfig::from_file`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostConfig {
    /// Per slice written (row or column).
    pub write_latency: f64,
    pub write_energy: f64,
    /// Per AND + BitCount task.
    pub compute_latency: f64,
    pub compute_energy: f64,
    /// Per residency check, added to both totals.
    pub buffer_lookup_cost: f64,
}

impl CostConfig {
    /// write = 1, compute = 1, lookup = 0: handy for counting-style tests
    /// where the latency total should equal writes + tasks.
    pub fn unit() -> Self {
        CostConfig {
            write_latency: 1.0,
            write_energy: 1.0,
            compute_latency: 1.0,
            compute_energy: 1.0,
            buffer_lookup_cost: 0.0,
        }
    }

    /// Parses a `key = value` cost file. Lines starting with `#` and blank
    /// lines are ignored; the conventional header comment declares the
    /// units (ns, pJ). Keys: write_latency, write_energy, compute_latency,
    /// compute_energy, buffer_lookup_cost. Unset keys stay 0.
    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<CostConfig> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<CostConfig> {
        let mut cfg = CostConfig::default();
        let mut seen = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid number {:?}", value.trim())))?;
            if !value.is_finite() || value < 0.0 {
                return Err(err(format!("cost {value} must be finite and non-negative")));
            }
            if seen.contains(&key.to_owned()) {
                return Err(err(format!("duplicate key {key:?}")));
            }
            seen.push(key.to_owned());
            match key {
                "write_latency" => cfg.write_latency = value,
                "write_energy" => cfg.write_energy = value,
                "compute_latency" => cfg.compute_latency = value,
                "compute_energy" => cfg.compute_energy = value,
                "buffer_lookup_cost" => cfg.buffer_lookup_cost = value,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

/// Latency and energy totals for a counter set:
/// `(row_writes + column_writes) * write + compute_ops * compute +
/// lookups * buffer_lookup_cost`, evaluated per dimension.
pub fn cost_totals(
    row_writes: u64,
    column_writes: u64,
    compute_ops: u64,
    lookups: u64,
    cost: &CostConfig,
) -> (f64, f64) {
    let writes = (row_writes + column_writes) as f64;
    let ops = compute_ops as f64;
    let checks = lookups as f64;
    (
        writes * cost.write_latency + ops * cost.compute_latency + checks * cost.buffer_lookup_cost,
        writes * cost.write_energy + ops * cost.compute_energy + checks * cost.buffer_lookup_cost,
    )
}

/// Converts a memory budget in MiB to a column-slice budget:
/// floor(mb * 2^20 * 8 / |S|) slices.
pub fn capacity_for_megabytes(mb: f64, config: SliceConfig) -> Result<ArrayCapacity> {
    if !mb.is_finite() || mb <= 0.0 {
        return Err(Error::Config(format!("capacity {mb} MiB is not positive")));
    }
    let slices = (mb * 1048576.0 * 8.0 / f64::from(config.slice_length)).floor();
    if slices < 1.0 {
        return Err(Error::Config(format!(
            "{mb} MiB holds no {}-bit slice",
            config.slice_length
        )));
    }
    Ok(ArrayCapacity::Bounded(slices as u64))
}

/// Counters and totals of one simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Exact triangle count accumulated by the simulated tasks.
    pub triangles: u64,
    /// Tasks processed; every task is one AND + BitCount.
    pub tasks: u64,
    /// Column-slice residency checks (one per task).
    pub column_loads_requested: u64,
    pub hits: u64,
    pub misses: u64,
    /// Evictions, i.e. misses that displaced a resident slice.
    pub replacements: u64,
    pub row_writes: u64,
    /// Column slices written into the array; every miss writes exactly one.
    pub column_writes: u64,
    /// hits / column_loads_requested (0 on an empty trace).
    pub hit_ratio: f64,
    /// Writes saved against the no-reuse baseline in which every task
    /// writes both its slices: 1 - (row_writes + column_writes) / (2 * tasks).
    pub write_ops_saved_ratio: f64,
    pub total_latency: f64,
    pub total_energy: f64,
}

/// Expands a compressed graph into its task trace: rows ascending, set
/// bits per row in the given order, and each edge's valid slice pairs in
/// ascending ordinal order.
pub fn build_access_trace(cg: &CompressedGraph, order: RowOrder) -> Vec<SliceTask> {
    let mut trace = Vec::new();
    for i in 0..cg.vertex_count() {
        let mut js: Vec<u32> = cg.row_neighbors(i).collect();
        if order == RowOrder::Zigzag && i % 2 == 1 {
            js.reverse();
        }
        for j in js {
            for (k, _, _) in cg.valid_slice_pairs(i as u32, j) {
                trace.push(SliceTask {
                    row: i as u32,
                    col: j,
                    ordinal: k,
                });
            }
        }
    }
    trace
}

/// (column, ordinal): the array-level identity of a column slice.
pub type SliceId = (u32, u32);

/// Next-use distance for slices never referenced again.
pub const NEVER: u64 = u64::MAX;

/// Recency bookkeeping for LRU eviction.
///
/// Accesses stamp a monotonically increasing clock; the victim is the
/// resident with the oldest stamp. Stamps are unique, so eviction is
/// deterministic.
#[derive(Debug, Default)]
pub struct LruQueue {
    clock: u64,
    by_age: BTreeSet<(u64, SliceId)>,
    stamp: HashMap<SliceId, u64>,
}

impl LruQueue {
    pub fn touch(&mut self, id: SliceId) {
        if let Some(&old) = self.stamp.get(&id) {
            self.by_age.remove(&(old, id));
        }
        self.stamp.insert(id, self.clock);
        self.by_age.insert((self.clock, id));
        self.clock += 1;
    }

    pub fn contains(&self, id: SliceId) -> bool {
        self.stamp.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.stamp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stamp.is_empty()
    }

    /// Removes and returns the least recently used resident.
    pub fn evict(&mut self) -> SliceId {
        let (stamp, id) = self.by_age.pop_first().expect("evicting from an empty array");
        self.stamp.remove(&id);
        debug_assert!(!self.by_age.iter().any(|&(s, _)| s < stamp));
        id
    }
}

/// Next-use bookkeeping for the farthest-next-use (Belady) policy.
///
/// Residents are ordered by the trace position of their next access;
/// slices never used again sort farthest. Among equals (only possible at
/// [`NEVER`]) the smaller (column, ordinal) id is evicted.
#[derive(Debug, Default)]
pub struct FarthestUse {
    by_distance: BTreeSet<(u64, std::cmp::Reverse<SliceId>)>,
    next_use: HashMap<SliceId, u64>,
}

impl FarthestUse {
    /// Inserts `id` or updates its next-use position.
    pub fn set(&mut self, id: SliceId, next_use: u64) {
        if let Some(&old) = self.next_use.get(&id) {
            self.by_distance.remove(&(old, std::cmp::Reverse(id)));
        }
        self.next_use.insert(id, next_use);
        self.by_distance.insert((next_use, std::cmp::Reverse(id)));
    }

    pub fn contains(&self, id: SliceId) -> bool {
        self.next_use.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.next_use.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next_use.is_empty()
    }

    /// Removes and returns the resident with the farthest next use.
    pub fn evict(&mut self) -> SliceId {
        let (_, std::cmp::Reverse(id)) =
            self.by_distance.pop_last().expect("evicting from an empty array");
        self.next_use.remove(&id);
        id
    }
}

enum PolicyState {
    Lru(LruQueue),
    Priority(FarthestUse),
}

impl PolicyState {
    fn contains(&self, id: SliceId) -> bool {
        match self {
            PolicyState::Lru(q) => q.contains(id),
            PolicyState::Priority(q) => q.contains(id),
        }
    }

    fn len(&self) -> u64 {
        match self {
            PolicyState::Lru(q) => q.len() as u64,
            PolicyState::Priority(q) => q.len() as u64,
        }
    }

    /// Records an access (hit or fresh insert) at trace position `t`.
    fn on_access(&mut self, id: SliceId, next_use: u64) {
        match self {
            PolicyState::Lru(q) => q.touch(id),
            PolicyState::Priority(q) => q.set(id, next_use),
        }
    }

    fn evict(&mut self) -> SliceId {
        match self {
            PolicyState::Lru(q) => q.evict(),
            PolicyState::Priority(q) => q.evict(),
        }
    }
}

/// Runs the task trace of `cg` through the array model and returns the
/// counters. The returned `triangles` always equals the exact count; the
/// policy and capacity only move traffic, never results.
pub fn simulate(cg: &CompressedGraph, opts: SimOptions, cost: &CostConfig) -> Result<SimReport> {
    let capacity = match opts.capacity {
        ArrayCapacity::Unbounded => None,
        ArrayCapacity::Bounded(0) => {
            return Err(Error::Config("capacity must be at least one slice".into()))
        }
        ArrayCapacity::Bounded(c) => {
            let c = if opts.row_buffer_in_capacity { c - 1 } else { c };
            if c == 0 {
                return Err(Error::Config(
                    "a 1-slice array cannot hold the row buffer and any column slice".into(),
                ));
            }
            Some(c)
        }
    };

    let trace = build_access_trace(cg, opts.order);

    // Belady looks ahead: next_use_at[t] is the next trace position that
    // touches the same column slice as position t, or NEVER.
    let next_use_at: Vec<u64> = {
        let mut v = vec![NEVER; trace.len()];
        let mut upcoming: HashMap<SliceId, u64> = HashMap::new();
        for (t, task) in trace.iter().enumerate().rev() {
            let id = (task.col, task.ordinal);
            if let Some(&n) = upcoming.get(&id) {
                v[t] = n;
            }
            upcoming.insert(id, t as u64);
        }
        v
    };

    let mut policy = match opts.policy {
        ReplacementPolicy::Lru => PolicyState::Lru(LruQueue::default()),
        ReplacementPolicy::Priority => PolicyState::Priority(FarthestUse::default()),
    };

    let mut report = SimReport {
        triangles: 0,
        tasks: 0,
        column_loads_requested: 0,
        hits: 0,
        misses: 0,
        replacements: 0,
        row_writes: 0,
        column_writes: 0,
        hit_ratio: 0.0,
        write_ops_saved_ratio: 0.0,
        total_latency: 0.0,
        total_energy: 0.0,
    };
    let mut row_buffer: Option<SliceId> = None;

    for (t, task) in trace.iter().enumerate() {
        let row_id = (task.row, task.ordinal);
        if row_buffer != Some(row_id) {
            report.row_writes += 1;
            row_buffer = Some(row_id);
        }

        let col_id = (task.col, task.ordinal);
        report.column_loads_requested += 1;
        if policy.contains(col_id) {
            report.hits += 1;
        } else {
            report.misses += 1;
            if Some(policy.len()) == capacity {
                policy.evict();
                report.replacements += 1;
            }
            report.column_writes += 1;
        }
        policy.on_access(col_id, next_use_at[t]);

        let row_list = cg.row(task.row as usize);
        let col_list = cg.col(task.col as usize);
        let rp = row_list.payload(row_list.find(task.ordinal).expect("trace lists valid pairs"));
        let cp = col_list.payload(col_list.find(task.ordinal).expect("trace lists valid pairs"));
        report.triangles += bits::and_popcount(rp, cp);
        report.tasks += 1;

        // conservation invariants, checked at every step
        assert_eq!(report.hits + report.misses, report.column_loads_requested);
        assert_eq!(report.column_writes, report.misses);
        assert!(report.replacements <= report.misses);
        if let Some(cap) = capacity {
            assert!(policy.len() <= cap, "array over capacity");
        } else {
            assert_eq!(report.replacements, 0);
        }
    }

    if report.column_loads_requested > 0 {
        report.hit_ratio = report.hits as f64 / report.column_loads_requested as f64;
        report.write_ops_saved_ratio = 1.0
            - (report.row_writes + report.column_writes) as f64 / (2.0 * report.tasks as f64);
    }
    let (latency, energy) = cost_totals(
        report.row_writes,
        report.column_writes,
        report.tasks,
        report.column_loads_requested,
        cost,
    );
    report.total_latency = latency;
    report.total_energy = energy;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjacency::orient;
    use crate::graph::Graph;
    use crate::kernel::count_triangles_bitwise;
    use crate::slicing::CompressedGraph;
    use crate::testutil::toy_graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn compressed(g: &Graph, s: u32) -> CompressedGraph {
        CompressedGraph::from_graph(g, SliceConfig::new(s, 32).unwrap()).unwrap()
    }

    fn run(cg: &CompressedGraph, policy: ReplacementPolicy, capacity: ArrayCapacity) -> SimReport {
        let opts = SimOptions {
            policy,
            capacity,
            ..SimOptions::default()
        };
        simulate(cg, opts, &CostConfig::unit()).unwrap()
    }

    #[test]
    fn toy_trace_sequential_and_zigzag() {
        let cg = compressed(&toy_graph(), 4);
        let t = |r, c| SliceTask {
            row: r,
            col: c,
            ordinal: 0,
        };
        assert_eq!(
            build_access_trace(&cg, RowOrder::Sequential),
            [t(0, 1), t(0, 2), t(1, 2), t(1, 3), t(2, 3)]
        );
        // odd rows run right-to-left
        assert_eq!(
            build_access_trace(&cg, RowOrder::Zigzag),
            [t(0, 1), t(0, 2), t(1, 3), t(1, 2), t(2, 3)]
        );
    }

    #[test]
    fn toy_run_counts_reuse_like_the_worked_example() {
        // Columns are requested as C1, C2, C2, C3, C3: the second touches
        // of C2 and C3 are hits, everything fits, and each of the three
        // non-empty rows is written once.
        let cg = compressed(&toy_graph(), 4);
        for capacity in [ArrayCapacity::Bounded(3), ArrayCapacity::Unbounded] {
            for policy in [ReplacementPolicy::Lru, ReplacementPolicy::Priority] {
                let r = run(&cg, policy, capacity);
                assert_eq!(r.triangles, 2);
                assert_eq!(r.tasks, 5);
                assert_eq!(r.column_loads_requested, 5);
                assert_eq!(r.hits, 2);
                assert_eq!(r.misses, 3);
                assert_eq!(r.replacements, 0);
                assert_eq!(r.row_writes, 3);
                assert_eq!(r.column_writes, 3);
                assert_eq!(r.hit_ratio, 0.4);
                // unit costs: 6 writes + 5 computes
                assert_eq!(r.total_latency, 11.0);
                assert_eq!(r.total_energy, 11.0);
                assert_eq!(r.write_ops_saved_ratio, 1.0 - 6.0 / 10.0);
            }
        }
    }

    #[test]
    fn toy_run_at_tight_capacities() {
        let cg = compressed(&toy_graph(), 4);
        // capacity 1: consecutive same-column touches still hit, every
        // cross-column access misses
        let r = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Bounded(1));
        assert_eq!((r.hits, r.misses, r.replacements), (2, 3, 2));
        assert_eq!(r.triangles, 2);
        // capacity 2 under LRU: loading C3 evicts C1 (older than C2)
        let r = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Bounded(2));
        assert_eq!((r.hits, r.misses, r.replacements), (2, 3, 1));
    }

    #[test]
    fn farthest_next_use_beats_lru_on_a_crafted_trace() {
        // Column requests: 5 6 7 5 6 5 7 with capacity 2. LRU evicts
        // whatever it is about to need; Belady keeps it.
        let g = Graph::from_edges(
            8,
            [(0, 5), (0, 6), (0, 7), (1, 5), (1, 6), (2, 5), (2, 7)],
        )
        .unwrap();
        let cg = compressed(&g, 8);
        let lru = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Bounded(2));
        let opt = run(&cg, ReplacementPolicy::Priority, ArrayCapacity::Bounded(2));
        assert_eq!((lru.hits, lru.misses, lru.replacements), (1, 6, 4));
        assert_eq!((opt.hits, opt.misses, opt.replacements), (2, 5, 3));
    }

    #[test]
    fn multi_ordinal_rows_rewrite_the_row_buffer() {
        // Row 0 needs slices 0 and 1; switching ordinals rewrites the
        // buffer even though the row stays the same.
        let g = Graph::from_edges(130, [(0, 1), (0, 64), (0, 100), (1, 100), (64, 100)]).unwrap();
        let cg = compressed(&g, 64);
        let trace = build_access_trace(&cg, RowOrder::Sequential);
        let ids: Vec<(u32, u32, u32)> = trace.iter().map(|t| (t.row, t.col, t.ordinal)).collect();
        assert_eq!(
            ids,
            [
                (0, 1, 0),
                (0, 64, 0),
                (0, 100, 0),
                (0, 100, 1),
                (1, 100, 1),
                (64, 100, 1)
            ]
        );
        let r = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Unbounded);
        assert_eq!(r.triangles, 2);
        assert_eq!(r.row_writes, 4);
        // column slices: (1,0) (64,0) (100,0) (100,1) (100,1) (100,1)
        assert_eq!((r.hits, r.misses), (2, 4));
        assert_eq!(r.replacements, 0);
    }

    #[test]
    fn unbounded_misses_are_distinct_slice_ids() {
        let mut rng = ChaCha8Rng::seed_from_u64(601);
        for _ in 0..15 {
            let n = rng.gen_range(2..60);
            let g = Graph::random_gnp(n, rng.gen_range(0.1..0.6), rng.gen()).unwrap();
            let cg = compressed(&g, 8);
            let trace = build_access_trace(&cg, RowOrder::Sequential);
            let distinct: std::collections::HashSet<SliceId> =
                trace.iter().map(|t| (t.col, t.ordinal)).collect();
            let r = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Unbounded);
            assert_eq!(r.misses, distinct.len() as u64);
            assert_eq!(r.replacements, 0);
        }
    }

    #[test]
    fn simulated_triangles_match_the_kernel_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(602);
        for round in 0..25 {
            let n = rng.gen_range(1..64);
            let g = Graph::random_gnp(n, rng.gen_range(0.0..0.7), rng.gen()).unwrap();
            let expect = count_triangles_bitwise(&orient(&g));
            let s = [4u32, 8, 64][round % 3];
            let cg = compressed(&g, s);
            for policy in [ReplacementPolicy::Lru, ReplacementPolicy::Priority] {
                for capacity in [
                    ArrayCapacity::Bounded(1),
                    ArrayCapacity::Bounded(3),
                    ArrayCapacity::Unbounded,
                ] {
                    for order in [RowOrder::Sequential, RowOrder::Zigzag] {
                        let opts = SimOptions {
                            policy,
                            capacity,
                            order,
                            row_buffer_in_capacity: false,
                        };
                        let r = simulate(&cg, opts, &CostConfig::default()).unwrap();
                        assert_eq!(r.triangles, expect, "n={n} s={s} {policy:?} {capacity:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn farthest_next_use_never_misses_more_than_lru() {
        let mut rng = ChaCha8Rng::seed_from_u64(603);
        for _ in 0..30 {
            let n = rng.gen_range(4..64);
            let g = Graph::random_gnp(n, rng.gen_range(0.1..0.7), rng.gen()).unwrap();
            let cg = compressed(&g, 8);
            for cap in [1u64, 2, 4, 16] {
                let lru = run(&cg, ReplacementPolicy::Lru, ArrayCapacity::Bounded(cap));
                let opt = run(&cg, ReplacementPolicy::Priority, ArrayCapacity::Bounded(cap));
                assert!(
                    opt.misses <= lru.misses,
                    "n={n} cap={cap}: {} > {}",
                    opt.misses,
                    lru.misses
                );
                assert!(opt.replacements <= lru.replacements);
            }
        }
    }

    #[test]
    fn zigzag_only_reorders_traffic() {
        let mut rng = ChaCha8Rng::seed_from_u64(604);
        for _ in 0..10 {
            let n = rng.gen_range(2..50);
            let g = Graph::random_gnp(n, 0.4, rng.gen()).unwrap();
            let cg = compressed(&g, 8);
            let seq = build_access_trace(&cg, RowOrder::Sequential);
            let mut zig = build_access_trace(&cg, RowOrder::Zigzag);
            assert_eq!(seq.len(), zig.len());
            // same multiset of tasks
            let mut seq = seq;
            seq.sort_unstable_by_key(|t| (t.row, t.col, t.ordinal));
            zig.sort_unstable_by_key(|t| (t.row, t.col, t.ordinal));
            assert_eq!(seq, zig);
        }
    }

    #[test]
    fn capacity_validation() {
        let cg = compressed(&toy_graph(), 4);
        assert!(matches!(
            simulate(
                &cg,
                SimOptions {
                    capacity: ArrayCapacity::Bounded(0),
                    ..SimOptions::default()
                },
                &CostConfig::default()
            ),
            Err(Error::Config(_))
        ));
        // a 1-slice budget that must also hold the row buffer is empty
        assert!(matches!(
            simulate(
                &cg,
                SimOptions {
                    capacity: ArrayCapacity::Bounded(1),
                    row_buffer_in_capacity: true,
                    ..SimOptions::default()
                },
                &CostConfig::default()
            ),
            Err(Error::Config(_))
        ));
        // with 2 slices one column slot remains: tightest legal setup
        let r = simulate(
            &cg,
            SimOptions {
                capacity: ArrayCapacity::Bounded(2),
                row_buffer_in_capacity: true,
                ..SimOptions::default()
            },
            &CostConfig::default(),
        )
        .unwrap();
        assert_eq!(r.triangles, 2);
        assert_eq!((r.hits, r.misses, r.replacements), (2, 3, 2));
    }

    #[test]
    fn empty_graph_simulates_to_zero() {
        let g = Graph::from_edges(10, []).unwrap();
        let r = run(&compressed(&g, 8), ReplacementPolicy::Lru, ArrayCapacity::Bounded(1));
        assert_eq!(r.tasks, 0);
        assert_eq!(r.triangles, 0);
        assert_eq!(r.hit_ratio, 0.0);
        assert_eq!(r.write_ops_saved_ratio, 0.0);
        assert_eq!(r.total_latency, 0.0);
    }

    // ---- eviction bookkeeping in isolation ----

    #[test]
    fn lru_queue_evicts_oldest_access() {
        let (a, b, c) = ((1, 0), (2, 0), (3, 0));
        let mut q = LruQueue::default();
        q.touch(a);
        q.touch(b);
        q.touch(c);
        assert_eq!(q.evict(), a);
        q.touch(a);
        q.touch(b); // b is now the newest
        assert_eq!(q.evict(), c);
        assert_eq!(q.evict(), a);
        assert_eq!(q.evict(), b);
        assert!(q.is_empty());
    }

    #[test]
    fn farthest_use_evicts_latest_next_use() {
        let (a, b) = ((1, 0), (2, 0));
        let mut q = FarthestUse::default();
        q.set(a, 9);
        q.set(b, 4);
        assert_eq!(q.evict(), a);

        // a slice never used again outranks any finite distance
        let mut q = FarthestUse::default();
        q.set(a, 9);
        q.set(b, NEVER);
        assert_eq!(q.evict(), b);

        // ties at NEVER break toward the smaller id
        let mut q = FarthestUse::default();
        q.set(b, NEVER);
        q.set(a, NEVER);
        assert_eq!(q.evict(), a);
        assert_eq!(q.len(), 1);
    }

    // ---- cost model ----

    #[test]
    fn cost_totals_match_hand_computation() {
        let cost = CostConfig {
            write_latency: 2.0,
            compute_latency: 1.0,
            ..CostConfig::default()
        };
        let (latency, energy) = cost_totals(3, 3, 5, 5, &cost);
        assert_eq!(latency, 17.0);
        assert_eq!(energy, 0.0);

        let with_lookup = CostConfig {
            buffer_lookup_cost: 0.5,
            ..cost
        };
        assert_eq!(cost_totals(3, 3, 5, 5, &with_lookup).0, 19.5);
    }

    #[test]
    fn cost_file_parses_keys_and_units_header() {
        let text = "\
# units: latency=ns energy=pJ
write_latency = 2.0
write_energy = 15.5

compute_latency = 1.25
compute_energy = 3.5
buffer_lookup_cost = 0.5
";
        let cfg = CostConfig::parse(text).unwrap();
        assert_eq!(cfg.write_latency, 2.0);
        assert_eq!(cfg.write_energy, 15.5);
        assert_eq!(cfg.compute_latency, 1.25);
        assert_eq!(cfg.compute_energy, 3.5);
        assert_eq!(cfg.buffer_lookup_cost, 0.5);
    }

    #[test]
    fn cost_file_rejects_bad_lines() {
        for (text, bad_line) in [
            ("write_latency = fast\n", 1),
            ("# ok\nwrite_speed = 1\n", 2),
            ("write_latency 2\n", 1),
            ("write_latency = 1\nwrite_latency = 2\n", 2),
            ("write_latency = -1\n", 1),
            ("write_latency = inf\n", 1),
        ] {
            match CostConfig::parse(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, bad_line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn capacity_from_megabytes() {
        let cfg = SliceConfig::default();
        // 8 MiB of 64-bit slices = 1 Mi slices
        assert_eq!(
            capacity_for_megabytes(8.0, cfg).unwrap(),
            ArrayCapacity::Bounded(8 * 1024 * 1024 / 8)
        );
        assert!(capacity_for_megabytes(0.0, cfg).is_err());
        assert!(capacity_for_megabytes(-1.0, cfg).is_err());
        assert!(capacity_for_megabytes(f64::NAN, cfg).is_err());
        // 128-bit slices are 16 bytes
        let wide = SliceConfig::new(128, 32).unwrap();
        assert_eq!(
            capacity_for_megabytes(1.0, wide).unwrap(),
            ArrayCapacity::Bounded(65536)
        );
        assert!(capacity_for_megabytes(1e-6, wide).is_err());
    }
}
