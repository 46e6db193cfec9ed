//! Operation counters behind the manipulation counts reported by the batch
//! generators.
//!
//! A *manipulation* is one interning-registry insertion or one assembly step.
//! Assembly steps are smart-constructor calls that build a sum, product or
//! power, plus every candidate partial product formed while enumerating a
//! set product (including candidates rejected by a bound). Counters are
//! thread-local, so a [`Meter`] only observes work done on its own thread.

use std::cell::Cell;

thread_local! {
    static INSERTIONS: Cell<u64> = const { Cell::new(0) };
    static ASSEMBLIES: Cell<u64> = const { Cell::new(0) };
}

pub(crate) fn record_insertion() {
    INSERTIONS.with(|c| c.set(c.get() + 1));
}

pub(crate) fn record_assembly() {
    record_assemblies(1);
}

pub(crate) fn record_assemblies(n: u64) {
    ASSEMBLIES.with(|c| c.set(c.get() + n));
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub insertions: u64,
    pub assemblies: u64,
}

impl Tally {
    pub fn manipulations(&self) -> u64 {
        self.insertions + self.assemblies
    }
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, rhs: Tally) -> Tally {
        Tally {
            insertions: self.insertions + rhs.insertions,
            assemblies: self.assemblies + rhs.assemblies,
        }
    }
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, rhs: Tally) {
        *self = *self + rhs;
    }
}

/// Counters for one iteration of a set recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationStats {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Largest value covered contiguously after the iteration.
    pub coverage: u64,
    /// Number of expressions produced by the iteration.
    pub produced: u64,
    pub tally: Tally,
}

fn snapshot() -> Tally {
    Tally {
        insertions: INSERTIONS.with(Cell::get),
        assemblies: ASSEMBLIES.with(Cell::get),
    }
}

/// Measures the counters accumulated on the current thread since `start`.
#[derive(Debug, Clone, Copy)]
pub struct Meter {
    origin: Tally,
}

impl Meter {
    pub fn start() -> Self {
        Meter { origin: snapshot() }
    }

    pub fn read(&self) -> Tally {
        let now = snapshot();
        Tally {
            insertions: now.insertions - self.origin.insertions,
            assemblies: now.assemblies - self.origin.assemblies,
        }
    }
}
