//! Dictionary representation and the pattern-aware suffix tree: per-position
//! pattern chains, shortest-pattern-end array B, and the Exists/Report
//! query engines.

use std::collections::HashMap;

use crate::error::Result;
use crate::rmq::MinSparseTable;
use crate::text_core::{Fragment, TextIndex};

pub(crate) const NONE: u32 = u32::MAX;

/// A dictionary of text fragments, deduplicated by content. Entry `k` of the
/// input maps to the canonical pattern id `canon(k)`; ids are dense in
/// `0..count()` and stable under the input order.
#[derive(Debug, Clone)]
pub struct InternalDictionary {
    entries: Vec<Fragment>,
    canon: Vec<u32>,
    patterns: Vec<Fragment>,
}

/// Deduplicates fragments by string content (via suffix-tree loci) and
/// assigns dense pattern ids.
pub fn build_dictionary(index: &TextIndex, fragments: &[Fragment]) -> Result<InternalDictionary> {
    let mut canon = Vec::with_capacity(fragments.len());
    let mut patterns = Vec::new();
    let mut by_key: HashMap<u64, u32> = HashMap::new();
    for &f in fragments {
        index.check_fragment(f)?;
        let key = index.fwd.rank_lo(index.locus(f));
        let id = *by_key.entry(key).or_insert_with(|| {
            patterns.push(f);
            (patterns.len() - 1) as u32
        });
        canon.push(id);
    }
    Ok(InternalDictionary { entries: fragments.to_vec(), canon, patterns })
}

impl InternalDictionary {
    /// Number of distinct patterns.
    pub fn count(&self) -> usize {
        self.patterns.len()
    }

    /// Canonical id of input entry `k`.
    pub fn canon(&self, k: usize) -> u32 {
        self.canon[k]
    }

    pub fn entries(&self) -> &[Fragment] {
        &self.entries
    }

    /// Representative fragment of a pattern id.
    pub fn pattern(&self, id: u32) -> Fragment {
        self.patterns[id as usize]
    }

    pub fn patterns(&self) -> &[Fragment] {
        &self.patterns
    }

    pub(crate) fn id_fragments(&self) -> Vec<(u32, Fragment)> {
        self.patterns
            .iter()
            .enumerate()
            .map(|(id, &f)| (id as u32, f))
            .collect()
    }
}

/// The pattern skeleton of the suffix tree for one pattern set: every
/// pattern's parent is its longest proper prefix in the set, every text
/// position knows the longest pattern starting there, and the array
/// `B[a] = a + |shortest pattern at a| - 1` supports Exists/Report.
///
/// Immutable after build; queries may run concurrently.
#[derive(Debug)]
pub struct Dmst {
    /// Global pattern id per local node.
    ids: Vec<u32>,
    lens: Vec<u32>,
    parent: Vec<u32>,
    /// Binary lifting over `parent` (levels × nodes).
    up: Vec<Vec<u32>>,
    /// Longest pattern starting at each position (local node), or `NONE`.
    deepest_at: Vec<u32>,
    /// B[a-1] = end of the shortest pattern starting at `a`, or `u32::MAX`.
    b: MinSparseTable<u32>,
}

/// Builds the skeleton for the patterns `(global id, fragment)`; fragments
/// must have pairwise-distinct content.
pub(crate) fn build_dmst(index: &TextIndex, pats: &[(u32, Fragment)]) -> Dmst {
    let n = index.len();
    let local_count = pats.len();
    let mut lens: Vec<u32> = Vec::with_capacity(local_count);
    let mut ids: Vec<u32> = Vec::with_capacity(local_count);

    // Sweep patterns and suffix leaves in Euler entry order: the pattern
    // intervals [rank_lo, rank_hi] nest exactly along prefix chains, so a
    // stack of open intervals tracks the longest proper pattern prefix.
    #[derive(Clone, Copy)]
    enum Item {
        Pat(u32),
        Suffix(u32),
    }
    let mut items: Vec<(u64, u64, Item)> = Vec::with_capacity(local_count + n);
    for (local, &(id, f)) in pats.iter().enumerate() {
        ids.push(id);
        lens.push(f.len() as u32);
        let locus = index.locus(f);
        items.push((index.fwd.rank_lo(locus), index.fwd.rank_hi(locus), Item::Pat(local as u32)));
    }
    for a in 1..=n {
        let leaf = index.fwd.tree.leaf_of[a - 1];
        let lo = index.fwd.tree.node(leaf).rank_lo;
        items.push((lo, lo, Item::Suffix(a as u32)));
    }
    items.sort_unstable_by_key(|&(lo, _, _)| lo);

    let mut parent = vec![NONE; local_count];
    let mut deepest_at = vec![NONE; n];
    let mut stack: Vec<(u64, u32)> = Vec::new(); // (rank_hi, local idx)
    for (lo, hi, item) in items {
        while matches!(stack.last(), Some(&(top_hi, _)) if top_hi < lo) {
            stack.pop();
        }
        match item {
            Item::Pat(local) => {
                if let Some(&(_, top)) = stack.last() {
                    parent[local as usize] = top;
                }
                stack.push((hi, local));
            }
            Item::Suffix(a) => {
                if let Some(&(_, top)) = stack.last() {
                    deepest_at[a as usize - 1] = top;
                }
            }
        }
    }

    let levels = local_count.max(2).ilog2() as usize + 1;
    let mut up = Vec::with_capacity(levels);
    up.push(parent.clone());
    for k in 1..levels {
        let prev: &Vec<u32> = &up[k - 1];
        up.push(
            prev.iter()
                .map(|&p| if p == NONE { NONE } else { prev[p as usize] })
                .collect(),
        );
    }

    // Shortest pattern at a position = topmost ancestor of the deepest one.
    let mut top_of: Vec<u32> = (0..local_count as u32).collect();
    // Process in stack-discipline order: parents were pushed before children
    // in the sweep, so a simple fixpoint over sorted-by-length works; use
    // lifting instead for clarity.
    for v in 0..local_count {
        let mut cur = v as u32;
        for k in (0..levels).rev() {
            let cand = up[k][cur as usize];
            if cand != NONE {
                cur = cand;
            }
        }
        top_of[v] = cur;
    }
    let b: Vec<u32> = (0..n)
        .map(|a0| {
            let d = deepest_at[a0];
            if d == NONE {
                u32::MAX
            } else {
                a0 as u32 + lens[top_of[d as usize] as usize]
            }
        })
        .collect();

    Dmst { ids, lens, parent, up, deepest_at, b: MinSparseTable::new(b) }
}

impl Dmst {
    /// All patterns of this skeleton occurring at position `a` with end
    /// position at most `max_end`, as global ids in increasing length.
    pub fn patterns_at(&self, a: usize, max_end: usize) -> Vec<u32> {
        let mut out = Vec::new();
        self.patterns_at_with(a, max_end, &mut |id| out.push(id));
        out.reverse();
        out
    }

    /// Visits the same patterns as [`Self::patterns_at`] in decreasing
    /// length order.
    pub(crate) fn patterns_at_with(&self, a: usize, max_end: usize, emit: &mut dyn FnMut(u32)) {
        debug_assert!(a >= 1 && a <= max_end);
        let Some(mut v) = self.deepest_fitting_local(a, (max_end + 1 - a) as u32) else {
            return;
        };
        loop {
            emit(self.ids[v as usize]);
            match self.parent_local(v) {
                Some(p) => v = p,
                None => return,
            }
        }
    }

    /// Longest pattern at `a` of length at most `max_len`, as a local node.
    pub(crate) fn deepest_fitting_local(&self, a: usize, max_len: u32) -> Option<u32> {
        let mut v = self.deepest_at[a - 1];
        if v == NONE {
            return None;
        }
        if self.lens[v as usize] > max_len {
            // Jump to the deepest ancestor still too long, then step once.
            for k in (0..self.up.len()).rev() {
                let cand = self.up[k][v as usize];
                if cand != NONE && self.lens[cand as usize] > max_len {
                    v = cand;
                }
            }
            v = self.parent[v as usize];
            if v == NONE {
                return None;
            }
            debug_assert!(self.lens[v as usize] <= max_len);
        }
        Some(v)
    }

    /// True iff some pattern occurs inside `T[i..j]`. Positions are 1-based
    /// and must satisfy `1 <= i <= j <= n` (checked by the caller).
    pub fn exists(&self, i: usize, j: usize) -> bool {
        self.b.min(i - 1, j - 1) as usize <= j
    }

    /// All occurrences `(global id, start)` inside `T[i..j]`, in no
    /// particular order, without duplicates.
    pub fn report(&self, i: usize, j: usize) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        self.report_with(i, j, j, &mut |id, s| out.push((id, s)));
        out
    }

    /// Emits `(global id, start)` for every occurrence with start in
    /// `[lo..hi]` and end at most `end_bound`, via recursive splitting
    /// around the minimum of B.
    pub(crate) fn report_with(
        &self,
        lo: usize,
        hi: usize,
        end_bound: usize,
        emit: &mut dyn FnMut(u32, usize),
    ) {
        let mut stack = vec![(lo, hi)];
        while let Some((lo, hi)) = stack.pop() {
            if lo > hi {
                continue;
            }
            let p = self.b.argmin(lo - 1, hi - 1) + 1;
            if self.b.value(p - 1) as usize > end_bound {
                continue;
            }
            self.patterns_at_with(p, end_bound, &mut |id| emit(id, p));
            if p > lo {
                stack.push((lo, p - 1));
            }
            if p < hi {
                stack.push((p + 1, hi));
            }
        }
    }

    /// Longest pattern starting at `a` (global id), if any.
    pub(crate) fn deepest_at(&self, a: usize) -> Option<u32> {
        self.deepest_local_at(a).map(|v| self.ids[v as usize])
    }

    /// Longest pattern starting at `a`, as a local node index.
    pub(crate) fn deepest_local_at(&self, a: usize) -> Option<u32> {
        let v = self.deepest_at[a - 1];
        (v != NONE).then_some(v)
    }

    pub(crate) fn parent_local(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != NONE).then_some(p)
    }

    pub(crate) fn global_id(&self, v: u32) -> u32 {
        self.ids[v as usize]
    }

    pub(crate) fn len_local(&self, v: u32) -> u32 {
        self.lens[v as usize]
    }

    /// End of the shortest pattern starting at `a`, if any.
    #[cfg(test)]
    pub(crate) fn shortest_end_at(&self, a: usize) -> Option<usize> {
        let v = self.b.value(a - 1);
        (v != u32::MAX).then(|| v as usize)
    }
}
