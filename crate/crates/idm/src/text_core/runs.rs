//! Maximal repetitions (runs) and the dominance-min lookup that backs
//! periodicity queries.

use super::suffix::{suffix_array, StIndex};
use super::Run;

/// Lyndon-root candidate enumeration: for each position and each of the two
/// alphabet orders, the next-smaller-value position under the suffix ranks
/// bounds a candidate root; extending it with LCEs in both directions and
/// keeping candidates of exponent >= 2 yields every run with its minimal
/// period (plus duplicates, removed afterwards).
pub(super) fn compute_runs(fwd: &StIndex, rev: &StIndex) -> Vec<Run> {
    let n = fwd.n - 1; // letters only
    if n < 2 {
        return Vec::new();
    }

    // Rank arrays for the two orders: the plain one and the one with the
    // letter order inverted (the sentinel stays smallest in both).
    let isa0 = &fwd.isa;
    let max_letter = *fwd.sym.iter().max().unwrap();
    let inv_sym: Vec<u32> = fwd
        .sym
        .iter()
        .map(|&c| if c == 0 { 0 } else { max_letter + 1 - c })
        .collect();
    let sa1 = suffix_array(&inv_sym);
    let mut isa1 = vec![0u32; n + 1];
    for (r, &a) in sa1.iter().enumerate() {
        isa1[a as usize] = r as u32;
    }

    // Longest common suffix of the prefixes ending at x and y (0-based).
    let lcs = |x: usize, y: usize| -> usize { rev.lce(n - 1 - x, n - 1 - y) };

    let mut found: Vec<(usize, usize, usize)> = Vec::new();
    for isa in [isa0, &isa1] {
        // Next smaller value to the right of each position.
        let mut stack: Vec<usize> = vec![n]; // sentinel suffix: smallest rank
        for i in (0..n).rev() {
            while isa[*stack.last().unwrap()] > isa[i] {
                stack.pop();
            }
            let j = *stack.last().unwrap();
            stack.push(i);
            let p = j - i;
            let r = fwd.lce(i, j);
            let l = if i == 0 { 0 } else { lcs(i - 1, j - 1) };
            if l + r >= p {
                found.push((i - l, j + r - 1, p));
            }
        }
    }

    found.sort_unstable();
    let mut runs: Vec<Run> = Vec::new();
    for (a, b, p) in found {
        match runs.last_mut() {
            Some(last) if last.start == a + 1 && last.end == b + 1 => {
                last.period = last.period.min(p);
            }
            _ => runs.push(Run { start: a + 1, end: b + 1, period: p }),
        }
    }
    runs
}

/// Static structure answering: among runs with `start <= i` and `end >= j`,
/// which one has the smallest period? Built as a merge tree over the start
/// coordinate whose nodes keep runs sorted by end with suffix-minima of the
/// period.
#[derive(Debug)]
pub(super) struct RunLookup {
    runs: Vec<Run>,
    /// Segment-tree nodes over run indices (runs sorted by start). Each node
    /// stores (end, run index) sorted by end, plus the index of the
    /// minimum-period run among the entries from that point on.
    size: usize,
    nodes: Vec<Vec<(usize, u32)>>,
    sufmin: Vec<Vec<u32>>,
}

impl RunLookup {
    pub fn new(mut runs: Vec<Run>) -> Self {
        runs.sort_unstable_by_key(|r| r.start);
        let size = runs.len();
        let mut nodes = vec![Vec::new(); 2 * size.max(1)];
        let mut sufmin = vec![Vec::new(); 2 * size.max(1)];
        for (idx, r) in runs.iter().enumerate() {
            nodes[size + idx].push((r.end, idx as u32));
        }
        for v in (1..size).rev() {
            let (left, right) = (nodes[2 * v].clone(), nodes[2 * v + 1].clone());
            let mut merged = Vec::with_capacity(left.len() + right.len());
            let (mut a, mut b) = (0, 0);
            while a < left.len() || b < right.len() {
                if b == right.len() || (a < left.len() && left[a].0 <= right[b].0) {
                    merged.push(left[a]);
                    a += 1;
                } else {
                    merged.push(right[b]);
                    b += 1;
                }
            }
            nodes[v] = merged;
        }
        for v in 1..2 * size.max(1) {
            let list = &nodes[v];
            let mut suf = vec![0u32; list.len()];
            let mut best = u32::MAX;
            for (k, &(_, idx)) in list.iter().enumerate().rev() {
                if best == u32::MAX
                    || runs[idx as usize].period < runs[best as usize].period
                {
                    best = idx;
                }
                suf[k] = best;
            }
            sufmin[v] = suf;
        }
        Self { runs, size, nodes, sufmin }
    }

    /// Minimum-period run with `start <= i` and `end >= j`, if any.
    pub fn query(&self, i: usize, j: usize) -> Option<Run> {
        if self.size == 0 {
            return None;
        }
        // Runs with start <= i form a prefix of the sorted order.
        let cnt = self.runs.partition_point(|r| r.start <= i);
        if cnt == 0 {
            return None;
        }
        let mut best: Option<u32> = None;
        let mut consider = |node: usize| {
            let list = &self.nodes[node];
            let k = list.partition_point(|&(end, _)| end < j);
            if k < list.len() {
                let idx = self.sufmin[node][k];
                if best.is_none()
                    || self.runs[idx as usize].period
                        < self.runs[best.unwrap() as usize].period
                {
                    best = Some(idx);
                }
            }
        };
        let (mut lo, mut hi) = (self.size, self.size + cnt); // half-open
        while lo < hi {
            if lo & 1 == 1 {
                consider(lo);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                consider(hi);
            }
            lo /= 2;
            hi /= 2;
        }
        best.map(|idx| self.runs[idx as usize])
    }
}
