//! Character tables of `(Z/2Z)^N`, the sign patterns of simple separable
//! product states.
//!
//! Row `u` and column `g` are both subsets of the parties; the entry is
//! `(-1)^{|u ∩ g|}`. Party `k` (0-based) is bit `N-1-k` of the row number,
//! so row 1 flips the last party. Columns are ordered by subset size, then
//! lexicographically.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

pub const MAX_LEVEL: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    level: usize,
    table: Vec<Vec<i8>>,
    column_labels: Vec<Vec<usize>>,
}

fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << n);
    fn combos(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            combos(k + 1, n, size, cur, out);
            cur.pop();
        }
    }
    for size in 0..=n {
        combos(0, n, size, &mut Vec::new(), &mut out);
    }
    out
}

impl CharacterTable {
    fn build(level: usize) -> Self {
        let column_labels = subsets_by_size(level);
        let masks: Vec<usize> = column_labels
            .iter()
            .map(|g| g.iter().map(|&k| 1usize << (level - 1 - k)).sum())
            .collect();
        let table = (0..1usize << level)
            .map(|u| {
                masks
                    .iter()
                    .map(|&g| if (u & g).count_ones() % 2 == 0 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        Self {
            level,
            table,
            column_labels,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.table
    }

    pub fn column_labels(&self) -> &[Vec<usize>] {
        &self.column_labels
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.table[row][col]
    }

    /// Column of the group element given as a set of 0-based parties.
    pub fn column_of(&self, parties: &[usize]) -> Result<usize> {
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.column_labels
            .iter()
            .position(|g| *g == sorted)
            .ok_or_else(|| Error::IndexOutOfRange(format!("group element {parties:?} at level {}", self.level)))
    }

    /// Local signs `x^(k)` of the simple separable state behind a row.
    pub fn local_signs(&self, row: usize) -> Vec<i8> {
        (0..self.level).map(|k| self.table[row][1 + k]).collect()
    }

    /// The row whose local signs are `x`.
    pub fn row_of_signs(&self, x: &[i8]) -> Result<usize> {
        if x.len() != self.level || x.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Usage(format!("need {} signs of +-1, got {x:?}", self.level)));
        }
        Ok(x.iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .map(|(k, _)| 1usize << (self.level - 1 - k))
            .sum())
    }

    /// Rows `u` with `s_u(g) = sign`, in increasing order.
    pub fn rows_with(&self, col: usize, sign: i8) -> Vec<usize> {
        (0..self.size()).filter(|&u| self.table[u][col] == sign).collect()
    }

    /// `sum_u s_u / 2^(N-1)` over rows with `s_u(g) = sign`: equals `sign`
    /// at column `g`, 1 at the identity when `g` is the identity, else 0.
    pub fn character_average(&self, col: usize, sign: i8) -> Vec<f64> {
        let rows = self.rows_with(col, sign);
        let norm = (self.size() / 2) as f64;
        (0..self.size())
            .map(|c| rows.iter().map(|&u| self.table[u][c] as f64).sum::<f64>() / norm)
            .collect()
    }

    /// `(s_r + s_{2^N-1-r}) / 2`: the sign pattern shared by a product state
    /// and its global negation, nonzero exactly on even-size group elements.
    pub fn reduced_expression(&self, row: usize) -> Vec<i8> {
        let other = self.size() - 1 - row;
        self.table[row]
            .iter()
            .zip(&self.table[other])
            .map(|(&a, &b)| (a + b) / 2)
            .collect()
    }
}

type TableCache = RwLock<HashMap<usize, Arc<CharacterTable>>>;

/// Character table of level `n`, memoized.
pub fn character_table(n: usize) -> Result<Arc<CharacterTable>> {
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::ParameterRange {
            name: "N".into(),
            value: n as f64,
            range: format!("1..={MAX_LEVEL}"),
        });
    }
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("character cache poisoned").get(&n) {
        return Ok(Arc::clone(t));
    }
    let mut guard = cache.write().expect("character cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert_with(|| Arc::new(CharacterTable::build(n)))))
}
