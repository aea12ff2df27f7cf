//! High-level facade: builds every index over one text + dictionary and
//! answers the full query set, in static or dynamic mode.

use crate::count_distinct_approx::{build_distinct_counts, ApproxCount, DistinctCountIndex};
use crate::count_queries::{build_bai, build_count_index, build_warmup, CountIndex, WarmupIndex};
use crate::dynamic_dictionary::{leftmost_occurrence, DynamicDictionary};
use crate::error::Result;
use crate::internal_dictionary::{build_dictionary, build_dmst, Dmst, InternalDictionary};
use crate::recompression::{build_rslp, Rslp};
use crate::report_distinct::{build_layers, ReportDistinctIndex};
use crate::text_core::{Fragment, Text, TextIndex};

/// Build-time options.
#[derive(Debug, Clone, Default)]
pub struct EngineOptions {
    /// Dynamic mode: the dictionary accepts insert/delete.
    pub dynamic: bool,
    /// Epoch length for dynamic mode; default ⌈√(n+d)⌉.
    pub epoch: Option<usize>,
    /// Also build the balanced-binary-tree counting cross-check (its
    /// space is acceptable only at test scale).
    pub with_warmup: bool,
}

struct StaticIndexes {
    dict: InternalDictionary,
    dmst: Dmst,
    rd: ReportDistinctIndex,
    count: CountIndex,
    distinct_approx: DistinctCountIndex,
    warmup: Option<WarmupIndex>,
}

enum Mode {
    Static(StaticIndexes),
    Dynamic(DynamicDictionary),
}

/// One text with all query structures over its internal dictionary.
pub struct QueryEngine {
    index: TextIndex,
    rslp: Rslp,
    mode: Mode,
}

impl QueryEngine {
    pub fn new(text: &Text, fragments: &[Fragment], opts: &EngineOptions) -> Result<Self> {
        let index = TextIndex::new(text)?;
        let rslp = build_rslp(text);
        let mode = if opts.dynamic {
            let n = index.len();
            let m = opts
                .epoch
                .unwrap_or_else(|| ((n + fragments.len()) as f64).sqrt().ceil() as usize)
                .max(1);
            Mode::Dynamic(DynamicDictionary::new(&index, &rslp, fragments, m)?)
        } else {
            let dict = build_dictionary(&index, fragments)?;
            let dmst = build_dmst(&index, &dict.id_fragments());
            let rd = build_layers(&index, &dict);
            let bai = build_bai(&index, &rslp, &dict);
            let count = build_count_index(&index, &rslp, &dict, bai);
            let distinct_approx = build_distinct_counts(&index, &rslp, &dict);
            let warmup = opts.with_warmup.then(|| build_warmup(&index, &dict));
            Mode::Static(StaticIndexes { dict, dmst, rd, count, distinct_approx, warmup })
        };
        Ok(Self { index, rslp, mode })
    }

    pub fn index(&self) -> &TextIndex {
        &self.index
    }

    pub fn text_len(&self) -> usize {
        self.index.len()
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self.mode, Mode::Dynamic(_))
    }

    /// Canonical form of a pattern: the fragment at its leftmost
    /// occurrence, so equal strings compare equal.
    fn canonical(&self, pat: Fragment) -> Result<Fragment> {
        let p = leftmost_occurrence(&self.index, pat)?;
        Ok(Fragment::new(p, p + pat.len() - 1))
    }

    pub fn exists(&self, i: usize, j: usize) -> Result<bool> {
        self.index.check_fragment(Fragment::new(i, j))?;
        match &self.mode {
            Mode::Static(s) => Ok(s.dmst.exists(i, j)),
            Mode::Dynamic(d) => d.exists(&self.index, &self.rslp, i, j),
        }
    }

    /// All occurrences `(start, canonical pattern)` inside T[i..j], sorted
    /// by (start, pattern length).
    pub fn report(&self, i: usize, j: usize) -> Result<Vec<(usize, Fragment)>> {
        self.index.check_fragment(Fragment::new(i, j))?;
        let mut out: Vec<(usize, Fragment)> = match &self.mode {
            Mode::Static(s) => s
                .dmst
                .report(i, j)
                .into_iter()
                .map(|(id, start)| Ok((start, self.canonical(s.dict.pattern(id))?)))
                .collect::<Result<_>>()?,
            Mode::Dynamic(d) => d
                .report(&self.index, i, j)?
                .into_iter()
                .map(|((p, len), start)| (start, Fragment::new(p, p + len - 1)))
                .collect(),
        };
        out.sort_unstable_by_key(|&(start, pat)| (start, pat.len()));
        Ok(out)
    }

    /// Distinct patterns occurring inside T[i..j], as canonical fragments
    /// sorted by (leftmost occurrence, length).
    pub fn report_distinct(&self, i: usize, j: usize) -> Result<Vec<Fragment>> {
        self.index.check_fragment(Fragment::new(i, j))?;
        let mut out: Vec<Fragment> = match &self.mode {
            Mode::Static(s) => s
                .rd
                .report_distinct(i, j)?
                .into_iter()
                .map(|id| self.canonical(s.dict.pattern(id)))
                .collect::<Result<_>>()?,
            Mode::Dynamic(d) => d
                .report_distinct(&self.index, i, j)?
                .into_iter()
                .map(|(p, len)| Fragment::new(p, p + len - 1))
                .collect(),
        };
        out.sort_unstable_by_key(|pat| (pat.start, pat.len()));
        Ok(out)
    }

    pub fn count(&self, i: usize, j: usize) -> Result<u64> {
        match &self.mode {
            Mode::Static(s) => s.count.count(&self.index, &self.rslp, i, j),
            Mode::Dynamic(d) => {
                self.index.check_fragment(Fragment::new(i, j))?;
                d.count(&self.index, &self.rslp, i, j)
            }
        }
    }

    /// Counting cross-check; requires `with_warmup` and static mode.
    pub fn count_warmup(&self, i: usize, j: usize) -> Result<u64> {
        match &self.mode {
            Mode::Static(s) => s
                .warmup
                .as_ref()
                .expect("engine built without the warmup index")
                .count(&self.index, i, j),
            Mode::Dynamic(_) => panic!("warmup counting is static-only"),
        }
    }

    /// Approximate distinct count with instrumentation (static-only).
    pub fn count_distinct_approx(&self, i: usize, j: usize) -> Result<ApproxCount> {
        match &self.mode {
            Mode::Static(s) => s.distinct_approx.count_distinct_approx(&self.index, &self.rslp, i, j),
            Mode::Dynamic(_) => panic!("approximate distinct counting is static-only"),
        }
    }

    pub fn insert(&mut self, pat: Fragment) -> Result<()> {
        let (index, rslp) = (&self.index, &self.rslp);
        match &mut self.mode {
            Mode::Dynamic(d) => d.insert(index, rslp, pat),
            Mode::Static(_) => panic!("updates require dynamic mode"),
        }
    }

    pub fn delete(&mut self, pat: Fragment) -> Result<()> {
        let (index, rslp) = (&self.index, &self.rslp);
        match &mut self.mode {
            Mode::Dynamic(d) => d.delete(index, rslp, pat),
            Mode::Static(_) => panic!("updates require dynamic mode"),
        }
    }

    pub fn rebuild(&mut self) -> Result<()> {
        let (index, rslp) = (&self.index, &self.rslp);
        match &mut self.mode {
            Mode::Dynamic(d) => d.rebuild(index, rslp),
            Mode::Static(_) => panic!("updates require dynamic mode"),
        }
    }

    /// The string held by a fragment, for display.
    pub fn fragment_letters(&self, pat: Fragment) -> Vec<u64> {
        (pat.start..=pat.end).map(|p| self.index.text().letter(p)).collect()
    }
}
