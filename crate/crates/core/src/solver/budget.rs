use std::cell::Cell;
use std::time::{Duration, Instant};

/// Work counter shared by all layers of one solver run.
#[derive(Debug)]
pub(crate) struct Budget {
    nodes: Cell<u64>,
    limit: u64,
    deadline: Option<Instant>,
}

/// Raised when the node limit or the time budget is used up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Exhausted {
    Nodes,
    Time,
}

impl Exhausted {
    pub(crate) fn reason(self) -> &'static str {
        match self {
            Exhausted::Nodes => "node limit reached",
            Exhausted::Time => "time budget exceeded",
        }
    }
}

impl Budget {
    pub(crate) fn new(limit: u64, time_budget_ms: Option<u64>) -> Self {
        Budget {
            nodes: Cell::new(0),
            limit,
            deadline: time_budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
        }
    }

    pub(crate) fn tick(&self) -> Result<(), Exhausted> {
        self.charge(1)
    }

    pub(crate) fn charge(&self, n: u64) -> Result<(), Exhausted> {
        let used = self.nodes.get().saturating_add(n);
        self.nodes.set(used);
        if used > self.limit {
            return Err(Exhausted::Nodes);
        }
        // Checking the clock on every node is needlessly slow.
        if used % 4096 < n {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Exhausted::Time);
                }
            }
        }
        Ok(())
    }

    pub(crate) fn used(&self) -> u64 {
        self.nodes.get()
    }

    /// Remaining node allowance.
    pub(crate) fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.nodes.get())
    }
}
