//! Truncated bound-state basis |nlm) and its dense enumeration.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A bound-state label (n, l, m): 1 <= n, 0 <= l <= n-1, |m| <= l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n: i64,
    pub l: i64,
    pub m: i64,
}

impl BasisIndex {
    pub fn new(n: i64, l: i64, m: i64) -> Result<Self> {
        if n < 1 || l < 0 || l > n - 1 || m.abs() > l {
            return Err(Error::InvalidParameter(format!(
                "invalid quantum numbers (n, l, m) = ({n}, {l}, {m})"
            )));
        }
        Ok(Self { n, l, m })
    }

    pub fn is_valid(&self) -> bool {
        self.n >= 1 && self.l >= 0 && self.l < self.n && self.m.abs() <= self.l
    }
}

/// Bijection between basis labels and dense offsets 0..D-1, ordered by
/// ascending n, then l, then m. D = n_max (n_max + 1)(2 n_max + 1)/6.
#[derive(Debug, Clone)]
pub struct BasisMap {
    n_max: i64,
    states: Vec<BasisIndex>,
    lookup: HashMap<BasisIndex, usize>,
}

impl BasisMap {
    /// Enumerate all (n, l, m) with n <= n_max in canonical order.
    pub fn new(n_max: i64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter(format!(
                "basis truncation bound must be >= 1, got {n_max}"
            )));
        }
        let mut states = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for m in -l..=l {
                    states.push(BasisIndex { n, l, m });
                }
            }
        }
        let lookup = states
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect::<HashMap<_, _>>();
        Ok(Self {
            n_max,
            states,
            lookup,
        })
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    /// Total dimension D = n_max(n_max+1)(2 n_max+1)/6.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Dimension of the subspace with n <= n_bound. Because states are ordered
    /// by ascending n, this subspace occupies the first `interior_dim` offsets.
    pub fn interior_dim(&self, n_bound: i64) -> usize {
        let nb = n_bound.clamp(0, self.n_max);
        (nb * (nb + 1) * (2 * nb + 1) / 6) as usize
    }

    pub fn offset(&self, state: BasisIndex) -> Option<usize> {
        self.lookup.get(&state).copied()
    }

    pub fn state(&self, offset: usize) -> BasisIndex {
        self.states[offset]
    }

    pub fn states(&self) -> &[BasisIndex] {
        &self.states
    }

    /// Offsets of the (l, m) tower: states (n, l, m) for n = l+1..=n_max,
    /// in ascending n. Towers are the invariant blocks of every operator that
    /// commutes with L^2 and L3 (Gamma_0, Gamma_4, S, j_pm).
    pub fn tower(&self, l: i64, m: i64) -> Vec<usize> {
        (l + 1..=self.n_max)
            .map(|n| self.lookup[&BasisIndex { n, l, m }])
            .collect()
    }
}
