//! Exact largest `G`-free family by branch-and-bound over upward-closed
//! families.
//!
//! Any free family can be pushed upward (replace a member by a missing
//! superset) without creating a copy, so the maximum is attained by an
//! upward-closed family. Sets are decided largest first, in decreasing
//! (cardinality, mask) order. A set may join only if all its one-larger
//! supersets are members; excluding a set excludes all of its subsets.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::freeness::Matcher;
use crate::monotone::descending_masks;
use crate::pattern::PatternGraph;
use crate::sets::{check_cube_n, Family};

/// Search is exact up to this ground set size; larger `n` is accepted but
/// will usually hit the timeout.
pub const VEX_GUARANTEED_N: usize = 7;

#[derive(Debug, Clone)]
pub struct VexOptions {
    pub timeout: Option<Duration>,
    /// Worker threads; `1` keeps the witness family deterministic.
    pub threads: usize,
}

impl Default for VexOptions {
    fn default() -> Self {
        VexOptions {
            timeout: Some(Duration::from_secs(60)),
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VexOutcome {
    Optimal,
    /// `max_size` is only a lower bound; `upper_bound` bounds the optimum.
    TimedOut,
}

#[derive(Debug, Clone, Serialize)]
pub struct VexResult {
    pub n: usize,
    #[serde(serialize_with = "crate::ser_display")]
    pub pattern: PatternGraph,
    pub outcome: VexOutcome,
    #[serde(serialize_with = "crate::ser_display")]
    pub max_size: BigUint,
    #[serde(serialize_with = "crate::ser_display")]
    pub upper_bound: BigUint,
    pub extremal: Family,
    pub nodes_explored: u64,
}

impl VexResult {
    pub fn is_optimal(&self) -> bool {
        self.outcome == VexOutcome::Optimal
    }
}

pub fn solve_vex(n: usize, pattern: &PatternGraph) -> Result<VexResult> {
    solve_vex_with(n, pattern, &VexOptions::default())
}

struct Shared {
    best: AtomicUsize,
    incumbent: Mutex<Vec<u32>>,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
    open_bound: AtomicUsize,
    nodes: std::sync::atomic::AtomicU64,
}

#[derive(Clone)]
struct State {
    /// 0 undecided, 1 member, 2 excluded.
    status: Vec<u8>,
    /// Members in canonical ascending order.
    members: Vec<u32>,
    undecided: usize,
    trail: Vec<u32>,
}

struct Search<'a> {
    order: &'a [u32],
    matcher: &'a Matcher,
    shared: &'a Shared,
    nodes: u64,
}

impl Search<'_> {
    fn record(&self, state: &State) {
        let size = state.members.len();
        if size > self.shared.best.load(Ordering::SeqCst) {
            let mut inc = self.shared.incumbent.lock().expect("incumbent lock");
            // re-check under the lock so concurrent improvements stay monotone
            if size > self.shared.best.load(Ordering::SeqCst) {
                *inc = state.members.clone();
                self.shared.best.store(size, Ordering::SeqCst);
            }
        }
    }

    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.shared.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.shared.deadline {
                if Instant::now() >= d {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn note_open(&self, bound: usize) {
        self.shared.open_bound.fetch_max(bound, Ordering::SeqCst);
    }

    /// Excludes `x` and all of its undecided subsets; returns how many were
    /// newly excluded.
    fn exclude(state: &mut State, x: u32) -> usize {
        let mut count = 0;
        let mut sub = x;
        loop {
            if state.status[sub as usize] == 0 {
                state.status[sub as usize] = 2;
                state.trail.push(sub);
                count += 1;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & x;
        }
        count
    }

    fn undo_exclude(state: &mut State, mark: usize) {
        while state.trail.len() > mark {
            let b = state.trail.pop().expect("trail entry");
            state.status[b as usize] = 0;
        }
    }

    /// Skips excluded sets; returns the next undecided index.
    fn next_open(&self, state: &State, mut idx: usize) -> usize {
        while idx < self.order.len() && state.status[self.order[idx] as usize] != 0 {
            idx += 1;
        }
        idx
    }

    fn dfs(&mut self, state: &mut State, idx: usize, split: Option<(usize, &mut Vec<(State, usize)>)>) {
        let bound = state.members.len() + state.undecided;
        if self.out_of_time() {
            self.note_open(bound);
            return;
        }
        let idx = self.next_open(state, idx);
        if idx == self.order.len() {
            self.record(state);
            return;
        }
        if bound <= self.shared.best.load(Ordering::SeqCst) {
            return;
        }
        let (depth_left, frontier) = match split {
            Some((0, frontier)) => {
                frontier.push((state.clone(), idx));
                return;
            }
            Some((d, f)) => (Some(d - 1), Some(f)),
            None => (None, None),
        };
        let mut frontier = frontier;
        let x = self.order[idx];

        // join: x is the smallest member so far, so it goes first
        state.members.insert(0, x);
        if self.matcher.find_through(&state.members, x).is_none() {
            state.status[x as usize] = 1;
            state.undecided -= 1;
            let sub = match (depth_left, frontier.as_deref_mut()) {
                (Some(d), Some(f)) => Some((d, f)),
                _ => None,
            };
            self.dfs(state, idx + 1, sub);
            state.undecided += 1;
            state.status[x as usize] = 0;
        }
        state.members.remove(0);

        let mark = state.trail.len();
        let removed = Self::exclude(state, x);
        if self.shared.timed_out.load(Ordering::Relaxed) {
            self.note_open(state.members.len() + state.undecided - removed);
            Self::undo_exclude(state, mark);
            return;
        }
        state.undecided -= removed;
        let sub = match (depth_left, frontier) {
            (Some(d), Some(f)) => Some((d, f)),
            _ => None,
        };
        self.dfs(state, idx + 1, sub);
        state.undecided += removed;
        Self::undo_exclude(state, mark);
    }
}

/// Largest `pattern`-free family in `2^[n]`, with an extremal witness.
///
/// Pruning: a partial family that already contains the pattern is dropped,
/// as is any node whose size plus undecided count cannot beat the
/// incumbent. On timeout the incumbent is returned as a lower bound together
/// with an upper bound from the open nodes.
pub fn solve_vex_with(n: usize, pattern: &PatternGraph, opts: &VexOptions) -> Result<VexResult> {
    check_cube_n(n)?;
    let order = descending_masks(n);
    let matcher = Matcher::new(pattern, n);
    let shared = Shared {
        best: AtomicUsize::new(0),
        incumbent: Mutex::new(Vec::new()),
        deadline: opts.timeout.map(|t| Instant::now() + t),
        timed_out: AtomicBool::new(false),
        open_bound: AtomicUsize::new(0),
        nodes: std::sync::atomic::AtomicU64::new(0),
    };
    let mut root = State {
        status: vec![0; order.len()],
        members: Vec::new(),
        undecided: order.len(),
        trail: Vec::new(),
    };

    if opts.threads <= 1 {
        let mut search = Search {
            order: &order,
            matcher: &matcher,
            shared: &shared,
            nodes: 0,
        };
        search.dfs(&mut root, 0, None);
        shared.nodes.fetch_add(search.nodes, Ordering::SeqCst);
    } else {
        let mut frontier = Vec::new();
        let mut search = Search {
            order: &order,
            matcher: &matcher,
            shared: &shared,
            nodes: 0,
        };
        let split_depth = 10.min(order.len());
        search.dfs(&mut root, 0, Some((split_depth, &mut frontier)));
        shared.nodes.fetch_add(search.nodes, Ordering::SeqCst);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            frontier.into_par_iter().for_each(|(mut state, idx)| {
                let mut worker = Search {
                    order: &order,
                    matcher: &matcher,
                    shared: &shared,
                    nodes: 0,
                };
                worker.dfs(&mut state, idx, None);
                shared.nodes.fetch_add(worker.nodes, Ordering::SeqCst);
            });
        });
    }

    let best = shared.best.load(Ordering::SeqCst);
    let members = shared.incumbent.into_inner().expect("incumbent lock");
    let timed_out = shared.timed_out.load(Ordering::SeqCst);
    let upper = if timed_out {
        shared.open_bound.load(Ordering::SeqCst).max(best)
    } else {
        best
    };
    Ok(VexResult {
        n,
        pattern: pattern.clone(),
        outcome: if timed_out {
            VexOutcome::TimedOut
        } else {
            VexOutcome::Optimal
        },
        max_size: BigUint::from(best),
        upper_bound: BigUint::from(upper),
        extremal: Family::from_raw_bits(n, members),
        nodes_explored: shared.nodes.load(Ordering::SeqCst),
    })
}
