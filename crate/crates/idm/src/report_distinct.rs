//! Distinct-pattern reporting in time close to the output size: patterns
//! are layered by length class, long-range starts are covered by colored
//! range reporting over longest-pattern ids, and the short tail window is
//! split into an aperiodic part (sparse occurrences) and a periodic part
//! (walked through runs).

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::geometry2d::ColorArray;
use crate::internal_dictionary::{build_dmst, Dmst, InternalDictionary};
use crate::rmq::MaxSparseTable;
use crate::text_core::{Fragment, Run, TextIndex};

/// One length class: patterns with `floor(log2 |P|) = k`, split into a
/// periodic part (smallest period at most `2^k / 3`) and the aperiodic
/// rest.
struct Layer {
    k: u32,
    /// Skeleton of the whole class.
    all: Dmst,
    /// Aperiodic part.
    apd: Dmst,
    /// Periodic part; its B array doubles as the shortest-pattern-end
    /// array scanned inside runs.
    per: Dmst,
    /// Per position, the longest class pattern starting there (id+1), or 0.
    colors: ColorArray,
    /// Runs with period at most `2^k / 3` and length at least `2^k`.
    runs: RunRetrieval,
}

/// Start-sorted run list answering "all runs with start <= a and end >= b"
/// by recursive splitting around the maximum end.
struct RunRetrieval {
    runs: Vec<Run>,
    ends: MaxSparseTable<u32>,
}

impl RunRetrieval {
    fn new(mut runs: Vec<Run>) -> Self {
        runs.sort_unstable_by_key(|r| r.start);
        let ends = MaxSparseTable::new(runs.iter().map(|r| r.end as u32).collect());
        Self { runs, ends }
    }

    fn for_each(&self, max_start: usize, min_end: usize, emit: &mut dyn FnMut(Run)) {
        let cnt = self.runs.partition_point(|r| r.start <= max_start);
        if cnt == 0 {
            return;
        }
        let mut stack = vec![(0usize, cnt - 1)];
        while let Some((lo, hi)) = stack.pop() {
            if lo > hi {
                continue;
            }
            let p = self.ends.argmax(lo, hi);
            if (self.ends.value(p) as usize) < min_end {
                continue;
            }
            emit(self.runs[p]);
            if p > lo {
                stack.push((lo, p - 1));
            }
            if p < hi {
                stack.push((p + 1, hi));
            }
        }
    }
}

/// Per-query scratch: stamped arrays sized by the number of patterns, so
/// queries never pay for clearing. Queries serialize on this lock; the
/// rest of the structure is immutable and shared freely.
struct Stamps {
    seq: u64,
    emitted: Vec<u64>,
    walked: Vec<u64>,
}

/// The ReportDistinct engine.
pub struct ReportDistinctIndex {
    n: usize,
    layers: Vec<Layer>,
    stamps: Mutex<Stamps>,
}

/// Builds the layered structure for a dictionary.
pub fn build_layers(index: &TextIndex, dict: &InternalDictionary) -> ReportDistinctIndex {
    let n = index.len();
    let d = dict.count();
    let max_k = n.ilog2();
    let mut classes: Vec<Vec<(u32, Fragment)>> = vec![Vec::new(); max_k as usize + 1];
    for (id, &f) in dict.patterns().iter().enumerate() {
        classes[f.len().ilog2() as usize].push((id as u32, f));
    }
    let mut layers = Vec::new();
    for (k, class) in classes.into_iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let k = k as u32;
        let half = 1usize << k;
        let (per_pats, apd_pats): (Vec<_>, Vec<_>) = class.iter().partition(|&&(_, f)| {
            index
                .two_period(f)
                .expect("pattern fragment is valid")
                .map_or(false, |p| 3 * p <= half)
        });
        let all = build_dmst(index, &class);
        let colors = ColorArray::new(
            (1..=n)
                .map(|a| all.deepest_at(a).map_or(0, |id| id + 1))
                .collect(),
        );
        let runs: Vec<Run> = index
            .runs()
            .iter()
            .filter(|r| 3 * r.period <= half && r.end + 1 - r.start >= half)
            .copied()
            .collect();
        layers.push(Layer {
            k,
            apd: build_dmst(index, &apd_pats),
            per: build_dmst(index, &per_pats),
            all,
            colors,
            runs: RunRetrieval::new(runs),
        });
    }
    ReportDistinctIndex {
        n,
        layers,
        stamps: Mutex::new(Stamps { seq: 0, emitted: vec![0; d], walked: vec![0; d] }),
    }
}

impl ReportDistinctIndex {
    /// Distinct pattern ids occurring inside `T[i..j]`, in no particular
    /// order.
    pub fn report_distinct(&self, i: usize, j: usize) -> Result<Vec<u32>> {
        self.query_inner(i, j, &mut |_| {})
    }

    /// Exposes raw emission attempts (before dedup) for invariant tests.
    #[cfg(test)]
    pub(crate) fn query_counted(&self, i: usize, j: usize) -> Result<(Vec<u32>, Vec<u32>)> {
        let mut attempts = Vec::new();
        let out = self.query_inner(i, j, &mut |id| attempts.push(id))?;
        Ok((out, attempts))
    }

    fn query_inner(
        &self,
        i: usize,
        j: usize,
        attempt: &mut dyn FnMut(u32),
    ) -> Result<Vec<u32>> {
        if !(1 <= i && i <= j && j <= self.n) {
            return Err(Error::InvalidRange { i, j, n: self.n });
        }
        let mut st = self.stamps.lock().unwrap();
        st.seq += 1;
        let seq = st.seq;
        let mut out = Vec::new();
        for layer in &self.layers {
            let len_lo = 1usize << layer.k;
            if len_lo > j + 1 - i {
                continue; // no pattern of this class fits in the range
            }
            let double = 2 * len_lo;
            // Starts far from j: every class pattern there ends inside the
            // range, so distinct longest-pattern colors plus their prefix
            // chains cover these starts exactly.
            if j >= double && j - double >= i {
                let hi = j - double;
                let layer_all = &layer.all;
                let colors = &layer.colors;
                let st = &mut *st;
                colors.report_positions(i, hi, &mut |p| {
                    let mut v = layer_all.deepest_local_at(p);
                    while let Some(lv) = v {
                        let id = layer_all.global_id(lv);
                        if st.walked[id as usize] == seq {
                            break; // chain above is already walked
                        }
                        st.walked[id as usize] = seq;
                        attempt(id);
                        if st.emitted[id as usize] != seq {
                            st.emitted[id as usize] = seq;
                            out.push(id);
                        }
                        v = layer_all.parent_local(lv);
                    }
                });
            }
            let t = if j >= double { (j - double + 1).max(i) } else { i };
            let st = &mut *st;
            let mut emit = |id: u32| {
                attempt(id);
                if st.emitted[id as usize] != seq {
                    st.emitted[id as usize] = seq;
                    out.push(id);
                }
            };
            // Aperiodic tail: occurrences are sparse, plain reporting is
            // already output-sensitive.
            layer.apd.report_with(t, j, j, &mut |id, _| emit(id));
            // Periodic tail: each pattern occurrence lies in a stored run
            // overlapping the window by at least 2^k, and shows up within
            // the first per(R) positions of the overlap.
            layer.runs.for_each(j + 1 - len_lo, t + len_lo - 1, &mut |r| {
                let seg_start = r.start.max(t);
                let seg_end = r.end.min(j);
                let cap = r.period.min(seg_end + 1 - seg_start);
                layer
                    .per
                    .report_with(seg_start, seg_start + cap - 1, seg_end, &mut |id, _| emit(id));
            });
        }
        Ok(out)
    }
}
