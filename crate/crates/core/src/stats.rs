//! Solver outcomes, statistics and cooperative resource limits.

use std::fmt;
use std::time::{Duration, Instant};

use crate::instance::Plan;
use crate::ordering::PriorityOrdering;

/// How often the low-level searches look at the wall clock.
pub const DEADLINE_CHECK_INTERVAL: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveResult {
    Solved,
    NoSolution,
    /// Wall-clock timeout or an exhausted expansion budget.
    Timeout,
}

impl SolveResult {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveResult::Solved => "solved",
            SolveResult::NoSolution => "no_solution",
            SolveResult::Timeout => "timeout",
        }
    }
}

impl fmt::Display for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverStats {
    pub result: SolveResult,
    pub runtime: Duration,
    pub high_level_expansions: u64,
    pub low_level_expansions: u64,
    /// Longest root-to-node chain of ordering pairs added by the high level.
    pub max_branch_pairs: usize,
    /// Pairs added on a branch that the ordering already implied. Always zero
    /// for a correct priority search.
    pub repeated_pairs: usize,
}

impl SolverStats {
    pub(crate) fn new() -> Self {
        SolverStats {
            result: SolveResult::NoSolution,
            runtime: Duration::ZERO,
            high_level_expansions: 0,
            low_level_expansions: 0,
            max_branch_pairs: 0,
            repeated_pairs: 0,
        }
    }
}

/// A solver's answer: the plan and final ordering when solved.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub stats: SolverStats,
    pub plan: Option<Plan>,
    pub ordering: Option<PriorityOrdering>,
}

impl SolveOutcome {
    pub fn result(&self) -> SolveResult {
        self.stats.result
    }

    pub fn is_solved(&self) -> bool {
        self.stats.result == SolveResult::Solved
    }
}

/// Per-call limits of a low-level search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_expansion_limit: u64,
    /// Latest timestep a constraint-based search may reach.
    pub time_horizon: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_expansion_limit: 50_000_000,
            time_horizon: 1 << 20,
        }
    }
}

/// Limits for one solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub timeout: Option<Duration>,
    pub budget: SearchBudget,
    /// Cap on high-level node expansions; reaching it reports a timeout.
    pub high_level_limit: Option<u64>,
}

impl Limits {
    pub fn with_timeout(timeout: Duration) -> Self {
        Limits {
            timeout: Some(timeout),
            ..Limits::default()
        }
    }
}

/// A search was stopped by the deadline or by its expansion budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interrupted;

/// Counts low-level expansions and enforces the deadline and per-call budget.
#[derive(Debug, Clone)]
pub struct SearchMeter {
    deadline: Option<Instant>,
    budget: SearchBudget,
    expansions: u64,
    call_start: u64,
}

impl SearchMeter {
    pub fn new(deadline: Option<Instant>, budget: SearchBudget) -> Self {
        SearchMeter {
            deadline,
            budget,
            expansions: 0,
            call_start: 0,
        }
    }

    pub fn unlimited() -> Self {
        SearchMeter::new(None, SearchBudget::default())
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub(crate) fn begin_call(&mut self) {
        self.call_start = self.expansions;
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), Interrupted> {
        self.expansions += 1;
        if self.expansions - self.call_start > self.budget.node_expansion_limit {
            return Err(Interrupted);
        }
        if self.expansions.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
            self.check_deadline()?;
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self) -> Result<(), Interrupted> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Interrupted),
            _ => Ok(()),
        }
    }
}
