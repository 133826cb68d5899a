//! Character-parallel drivers. Work is split across a rayon pool, results
//! are collected in character-index order and reduced sequentially, so every
//! float matches the single-threaded core routines bit for bit.

use ffl_core::chargroup::UnitGroup;
use ffl_core::lfunc::{self, RootNumber, Scratch};
use ffl_core::moments;
use ffl_core::Budget;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Pool with `workers` threads, or rayon's default when `None`.
pub fn pool(workers: Option<usize>) -> ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n.max(1));
    }
    b.build().expect("thread pool")
}

/// Default budget, with `max_table` replaced when given.
pub fn budget(max_table: Option<u64>) -> Budget {
    let mut b = Budget::default();
    if let Some(t) = max_table {
        b.max_table = t;
    }
    b
}

/// |L(1/2, χ)|² for every character index; `None` off the primitive ones.
pub fn half_abs2(g: &UnitGroup, pool: &ThreadPool) -> Vec<Option<f64>> {
    pool.install(|| {
        (0..g.char_count())
            .into_par_iter()
            .map_init(Scratch::default, |s, i| moments::primitive_half_abs2(&g.character(i), s))
            .collect()
    })
}

pub fn moment2_chars(g: &UnitGroup, pool: &ThreadPool) -> f64 {
    half_abs2(g, pool).into_iter().flatten().sum()
}

pub fn moment4_chars(g: &UnitGroup, pool: &ThreadPool) -> f64 {
    half_abs2(g, pool).into_iter().flatten().map(|v| v * v).sum()
}

/// Root numbers of the primitive characters, by index.
pub fn root_numbers(g: &UnitGroup, pool: &ThreadPool) -> Vec<(u64, RootNumber)> {
    pool.install(|| {
        (0..g.char_count())
            .into_par_iter()
            .filter_map(|i| {
                let chi = g.character(i);
                if chi.is_trivial() || !chi.is_primitive() {
                    return None;
                }
                lfunc::root_number(&chi).ok().map(|w| (i, w))
            })
            .collect()
    })
}
