//! Sparse-table range minimum/maximum queries over static arrays.

use std::cmp::Reverse;

/// O(n log n) build, O(1) query. Returns the index of the leftmost minimum.
#[derive(Debug, Clone)]
pub(crate) struct MinSparseTable<T> {
    data: Vec<T>,
    // table[k][i] = index of min over data[i..i+2^k]
    table: Vec<Vec<u32>>,
}

impl<T: Ord + Copy> MinSparseTable<T> {
    pub fn new(data: Vec<T>) -> Self {
        let n = data.len();
        let levels = if n <= 1 { 1 } else { n.ilog2() as usize + 1 };
        let mut table = Vec::with_capacity(levels);
        table.push((0..n as u32).collect::<Vec<_>>());
        for k in 1..levels {
            let half = 1usize << (k - 1);
            let prev = &table[k - 1];
            let mut row = Vec::with_capacity(n.saturating_sub((1 << k) - 1));
            for i in 0..=n - (1 << k) {
                let a = prev[i];
                let b = prev[i + half];
                row.push(if data[a as usize] <= data[b as usize] { a } else { b });
            }
            table.push(row);
        }
        Self { data, table }
    }

    #[inline]
    pub fn value(&self, i: usize) -> T {
        self.data[i]
    }

    /// Index of the minimum over the inclusive range `[l..=r]`.
    #[inline]
    pub fn argmin(&self, l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < self.data.len());
        let k = (r - l + 1).ilog2() as usize;
        let a = self.table[k][l];
        let b = self.table[k][r + 1 - (1 << k)];
        if self.data[a as usize] <= self.data[b as usize] {
            a as usize
        } else {
            b as usize
        }
    }

    #[inline]
    pub fn min(&self, l: usize, r: usize) -> T {
        self.data[self.argmin(l, r)]
    }
}

/// Max variant built on top of `MinSparseTable` with reversed keys.
#[derive(Debug, Clone)]
pub(crate) struct MaxSparseTable<T> {
    inner: MinSparseTable<Reverse<T>>,
}

impl<T: Ord + Copy> MaxSparseTable<T> {
    pub fn new(data: Vec<T>) -> Self {
        Self {
            inner: MinSparseTable::new(data.into_iter().map(Reverse).collect()),
        }
    }

    #[inline]
    pub fn argmax(&self, l: usize, r: usize) -> usize {
        self.inner.argmin(l, r)
    }

    #[inline]
    pub fn value(&self, i: usize) -> T {
        self.inner.value(i).0
    }

    #[cfg(test)]
    pub fn max(&self, l: usize, r: usize) -> T {
        self.inner.value(self.argmax(l, r)).0
    }

}
