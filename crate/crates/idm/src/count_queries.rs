//! Exact occurrence counting inside a window.
//!
//! The anchored counting primitive reduces "occurrences crossing a fixed
//! inter-position with an aligned breakpoint" to rectangle stabbing in the
//! rank space of the two suffix trees. On top of it sit two counting
//! indexes: the grammar-based one, whose parse-tree descent touches
//! O(log n) nodes and issues at most two anchored queries per node, and a
//! balanced-binary-tree variant with full breakpoint sets that is kept as
//! an independent cross-check at test scale.

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry2d::{Rect, RectangleSet};
use crate::internal_dictionary::InternalDictionary;
use crate::recompression::{NodeRef, Production, Rslp};
use crate::text_core::{Fragment, TextIndex};

/// Rectangle-stabbing structure answering anchored breakpoint counting:
/// how many pattern occurrences lie inside a window and cross a given
/// anchor so that the split at the anchor is one of the pattern's
/// breakpoints.
#[derive(Debug)]
pub struct BaiIndex {
    rects: RectangleSet,
}

/// One rectangle per (pattern, breakpoint `b`): the x-interval is the rank
/// interval of the suffix part P[b+1..m] in the suffix tree of the text,
/// the y-interval that of the reversed prefix part in the suffix tree of
/// the reversed text. An occurrence in the window crossing the anchor with
/// split length `b` stabs exactly this rectangle.
pub(crate) fn breakpoint_rects(
    index: &TextIndex,
    dict: &InternalDictionary,
    mut breakpoints: impl FnMut(Fragment) -> Vec<u64>,
) -> Vec<(Rect, u32)> {
    let n = index.len();
    let mut out = Vec::new();
    for (id, frag) in dict.id_fragments() {
        for b in breakpoints(frag) {
            let b = b as usize;
            debug_assert!(b >= 1 && b < frag.len());
            // Suffix part P[b+1..m], as a fragment of the text.
            let lu = index.fwd.locus(frag.start - 1 + b, frag.len() - b);
            // Prefix part P[1..b] reversed, as a fragment of the reverse.
            let lv = index.rev.locus(n + 1 - frag.start - b, b);
            out.push((
                Rect {
                    x1: index.fwd.rank_lo(lu),
                    x2: index.fwd.rank_hi(lu),
                    y1: index.rev.rank_lo(lv),
                    y2: index.rev.rank_hi(lv),
                },
                id,
            ));
        }
    }
    out
}

/// Builds the anchored counting structure with grammar-derived breakpoint
/// sets (O(log n) breakpoints per pattern).
pub fn build_bai(index: &TextIndex, rslp: &Rslp, dict: &InternalDictionary) -> BaiIndex {
    let rects: Vec<Rect> = breakpoint_rects(index, dict, |frag| {
        rslp.landmarks(frag).interior_breakpoints()
    })
    .into_iter()
    .map(|(r, _)| r)
    .collect();
    BaiIndex { rects: RectangleSet::new(&rects) }
}

/// Same structure with the full breakpoint set {1..|P|-1} per pattern;
/// quadratic-ish size, acceptable only for the cross-check index.
pub fn build_bai_full(index: &TextIndex, dict: &InternalDictionary) -> BaiIndex {
    let rects: Vec<Rect> = breakpoint_rects(index, dict, |frag| {
        (1..frag.len() as u64).collect()
    })
    .into_iter()
    .map(|(r, _)| r)
    .collect();
    BaiIndex { rects: RectangleSet::new(&rects) }
}

impl BaiIndex {
    /// Number of pattern occurrences inside T[i..j] that cross the anchor
    /// between positions `beta` and `beta + 1` with an aligned breakpoint.
    /// Degenerate anchors (no room for a crossing) count 0.
    pub fn bai_count(&self, index: &TextIndex, beta: usize, i: usize, j: usize) -> u64 {
        if beta < i || beta >= j {
            return 0;
        }
        let n = index.len();
        // A crossing occurrence's suffix part is a prefix of T[beta+1..j]
        // and its reversed prefix part a prefix of reverse(T[i..beta]), so
        // the pair of rank_lo values stabs exactly the breakpoint
        // rectangles of the crossing occurrences.
        let x = index.fwd.rank_lo(index.fwd.locus(beta, j - beta));
        let y = index.rev.rank_lo(index.rev.locus(n - beta, beta - i + 1));
        self.rects.stab_count(x, y)
    }
}

/// How the instrumented descent attributes occurrences: either to a parse
/// node fully contained in the window (its precomputed count) or to one
/// anchored query. Windows and spans are 1-based inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TraceEvent {
    Contained { lo: usize, hi: usize },
    Anchor { beta: usize, i: usize, j: usize },
}

/// Grammar-based counting index: per-symbol occurrence counts plus, for
/// each power symbol A -> B^k, the counts inside the prefix powers g(B^i).
#[derive(Debug)]
pub struct CountIndex {
    bai: BaiIndex,
    counts: Vec<u64>,
    pow_prefix: HashMap<u32, Vec<u64>>,
}

/// Bottom-up preprocessing: terminals count the length-1 patterns with
/// that letter; a concatenation adds the crossings at its representative
/// node's split point; a power fills its prefix counts left to right,
/// each step adding one anchored query after the first copy.
pub fn build_count_index(
    index: &TextIndex,
    rslp: &Rslp,
    dict: &InternalDictionary,
    bai: BaiIndex,
) -> CountIndex {
    // Patterns whose popped sequence is a single symbol occurrence have no
    // interior landmarks, so the anchored rectangles never see them. By
    // local consistency their occurrences are exactly the parse nodes of
    // that symbol: credit them to the symbol count directly. Single-letter
    // patterns are the terminal case of the same rule.
    let mut node_equal = vec![0u64; rslp.symbol_count()];
    for (_, frag) in dict.id_fragments() {
        if let [(s, 1)] = rslp.popped_sequence(frag).runs[..] {
            node_equal[s as usize] += 1;
        }
    }

    let mut counts = vec![0u64; rslp.symbol_count()];
    let mut pow_prefix: HashMap<u32, Vec<u64>> = HashMap::new();
    for sym in 0..rslp.symbol_count() as u32 {
        match *rslp.production(sym) {
            Production::Terminal(_) => {
                counts[sym as usize] = node_equal[sym as usize];
            }
            Production::Concat(b, c) => {
                let p = rslp.repr_off(sym) as usize;
                let mid = p + rslp.expansion_len(b) as usize;
                let end = p + rslp.expansion_len(sym) as usize;
                counts[sym as usize] = counts[b as usize]
                    + counts[c as usize]
                    + bai.bai_count(index, mid, p + 1, end)
                    + node_equal[sym as usize];
            }
            Production::Power(b, k) => {
                let w = rslp.expansion_len(b) as usize;
                let p = rslp.repr_off(sym) as usize;
                let mut pref = Vec::with_capacity(k as usize);
                pref.push(counts[b as usize]);
                for i in 2..=k as usize {
                    // g(B^i) = first copy + g(B^(i-1)) + crossings of the
                    // anchor after the first copy.
                    let v = counts[b as usize]
                        + pref[i - 2]
                        + bai.bai_count(index, p + w, p + 1, p + i * w);
                    pref.push(v);
                }
                // A fragment equal to a whole power pops as (base, k)
                // before this symbol is formed, so it always has interior
                // landmarks and is never credited here.
                debug_assert_eq!(node_equal[sym as usize], 0);
                counts[sym as usize] = *pref.last().unwrap();
                pow_prefix.insert(sym, pref);
            }
        }
    }
    CountIndex { bai, counts, pow_prefix }
}

impl CountIndex {
    /// Exact number of pattern occurrences inside T[i..j].
    pub fn count(&self, index: &TextIndex, rslp: &Rslp, i: usize, j: usize) -> Result<u64> {
        index.check_fragment(Fragment::new(i, j))?;
        Ok(self.descend(index, rslp, rslp.top_node(), i as u64 - 1, j as u64, &mut |_| {}))
    }

    /// Same, also recording how every summand attributes occurrences; the
    /// tests check each true occurrence is claimed exactly once.
    #[cfg(test)]
    pub(crate) fn count_with_trace(
        &self,
        index: &TextIndex,
        rslp: &Rslp,
        i: usize,
        j: usize,
    ) -> (u64, Vec<TraceEvent>) {
        let mut trace = Vec::new();
        let v = self.descend(index, rslp, rslp.top_node(), i as u64 - 1, j as u64, &mut |e| {
            trace.push(e)
        });
        (v, trace)
    }

    /// Window is 0-based half-open [l, r). Fully contained nodes use their
    /// precomputed count; a straddling node recurses into its leftmost and
    /// rightmost intersected children and accounts for everything else
    /// with the middle prefix-power count and at most two anchored
    /// queries, one after the first intersected child and one before the
    /// last (the latter restricted to start past the first child, which
    /// keeps the two queries disjoint).
    fn descend(
        &self,
        index: &TextIndex,
        rslp: &Rslp,
        v: NodeRef,
        l: u64,
        r: u64,
        trace: &mut dyn FnMut(TraceEvent),
    ) -> u64 {
        let (lo, hi) = rslp.node_span(v);
        let il = l.max(lo);
        let ir = r.min(hi);
        if il >= ir {
            return 0;
        }
        let sym = rslp.node_sym(v);
        if l <= lo && hi <= r {
            trace(TraceEvent::Contained { lo: lo as usize + 1, hi: hi as usize });
            return self.counts[sym as usize];
        }
        let t = rslp.node_child_count(v);
        debug_assert!(t > 0, "a straddled node cannot be a leaf");
        if t == 1 {
            // Pass-through element: same symbol one round down.
            return self.descend(index, rslp, rslp.node_child(v, 0), l, r, trace);
        }
        // Locate the leftmost/rightmost children intersecting the window
        // without scanning: two children are a concatenation split, more
        // are uniform-width copies of a power.
        let (cl, cr) = if t == 2 {
            let mid = rslp.node_span(rslp.node_child(v, 0)).1;
            (u32::from(il >= mid), u32::from(ir > mid))
        } else {
            let w = (hi - lo) / t as u64;
            (((il - lo) / w) as u32, ((ir - 1 - lo) / w) as u32)
        };
        if cl == cr {
            return self.descend(index, rslp, rslp.node_child(v, cl), l, r, trace);
        }
        let mut total = self.descend(index, rslp, rslp.node_child(v, cl), l, r, trace)
            + self.descend(index, rslp, rslp.node_child(v, cr), l, r, trace);
        // Crossings of the anchor after the first intersected child.
        let a1 = rslp.node_span(rslp.node_child(v, cl)).1 as usize;
        let (wi, wj) = (il as usize + 1, ir as usize);
        total += self.bai.bai_count(index, a1, wi, wj);
        trace(TraceEvent::Anchor { beta: a1, i: wi, j: wj });
        if cr > cl + 1 {
            // Middle children are fully inside the window: their combined
            // count is the precomputed prefix-power count, and occurrences
            // spilling from them into the last child cross the anchor
            // before it (but start after the first child, so they were not
            // counted above).
            total += self.pow_prefix[&sym][(cr - cl - 2) as usize];
            let m_lo = rslp.node_span(rslp.node_child(v, cl + 1)).0 as usize;
            trace(TraceEvent::Contained {
                lo: m_lo + 1,
                hi: rslp.node_span(rslp.node_child(v, cr - 1)).1 as usize,
            });
            let a2 = rslp.node_span(rslp.node_child(v, cr)).0 as usize;
            total += self.bai.bai_count(index, a2, m_lo + 1, wj);
            trace(TraceEvent::Anchor { beta: a2, i: m_lo + 1, j: wj });
        }
        total
    }
}

/// Balanced-binary-tree counting index over the text with full breakpoint
/// sets: an independent implementation used to cross-check `CountIndex`.
#[derive(Debug)]
pub struct WarmupIndex {
    bai: BaiIndex,
    nodes: Vec<BtNode>,
    root: u32,
}

#[derive(Debug)]
struct BtNode {
    /// 0-based half-open text span.
    lo: u64,
    hi: u64,
    count: u64,
    left: u32,
    right: u32,
}

const BT_NONE: u32 = u32::MAX;

pub fn build_warmup(index: &TextIndex, dict: &InternalDictionary) -> WarmupIndex {
    let bai = build_bai_full(index, dict);
    let n = index.len();
    let mut len1_at = vec![0u64; n];
    for (_, frag) in dict.id_fragments() {
        if frag.len() == 1 {
            for p in 0..n {
                if index.text().letter(p + 1) == index.text().letter(frag.start) {
                    len1_at[p] += 1;
                }
            }
        }
    }
    let mut nodes = Vec::new();
    let root = build_bt(index, &bai, &len1_at, 0, n as u64, &mut nodes);
    WarmupIndex { bai, nodes, root }
}

fn build_bt(
    index: &TextIndex,
    bai: &BaiIndex,
    len1_at: &[u64],
    lo: u64,
    hi: u64,
    nodes: &mut Vec<BtNode>,
) -> u32 {
    if hi - lo == 1 {
        nodes.push(BtNode { lo, hi, count: len1_at[lo as usize], left: BT_NONE, right: BT_NONE });
        return (nodes.len() - 1) as u32;
    }
    let mid = lo + (hi - lo) / 2;
    let left = build_bt(index, bai, len1_at, lo, mid, nodes);
    let right = build_bt(index, bai, len1_at, mid, hi, nodes);
    let count = nodes[left as usize].count
        + nodes[right as usize].count
        + bai.bai_count(index, mid as usize, lo as usize + 1, hi as usize);
    nodes.push(BtNode { lo, hi, count, left, right });
    (nodes.len() - 1) as u32
}

impl WarmupIndex {
    /// Exact number of pattern occurrences inside T[i..j].
    pub fn count(&self, index: &TextIndex, i: usize, j: usize) -> Result<u64> {
        index.check_fragment(Fragment::new(i, j))?;
        Ok(self.descend(index, self.root, i as u64 - 1, j as u64))
    }

    fn descend(&self, index: &TextIndex, v: u32, l: u64, r: u64) -> u64 {
        let node = &self.nodes[v as usize];
        let il = l.max(node.lo);
        let ir = r.min(node.hi);
        if il >= ir {
            return 0;
        }
        if l <= node.lo && node.hi <= r {
            return node.count;
        }
        let mid = self.nodes[node.left as usize].hi;
        let mut total = self.descend(index, node.left, l, r)
            + self.descend(index, node.right, l, r);
        if il < mid && mid < ir {
            total += self.bai.bai_count(index, mid as usize, il as usize + 1, ir as usize);
        }
        total
    }
}
