//! Computational-geometry substructures: distinct-color range reporting
//! over an array, weighted dominance counting over planar points, and
//! rectangle stabbing (plain and colored). Coordinates are rank-space
//! integers supplied by the caller.

use crate::rmq::MinSparseTable;

/// A color array with the classic "previous equal position" index: for each
/// position `i` (1-based), `J[i]` is the largest `j < i` with `A[j] = A[i]`,
/// or 0 if there is none. Distinct colors of `A[l..r]` are exactly the
/// positions in the range whose `J` value is below `l`.
#[derive(Debug)]
pub struct ColorArray {
    colors: Vec<u32>,
    j_rmq: MinSparseTable<u32>,
}

impl ColorArray {
    pub fn new(colors: Vec<u32>) -> Self {
        let mut last = std::collections::HashMap::new();
        let j: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let prev = last.insert(c, (k + 1) as u32).unwrap_or(0);
                prev
            })
            .collect();
        Self { colors, j_rmq: MinSparseTable::new(j) }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color at a 1-based position.
    pub fn color(&self, pos: usize) -> u32 {
        self.colors[pos - 1]
    }

    /// Distinct colors of `A[l..r]` (1-based inclusive); empty when `l > r`.
    /// Runs in time proportional to the output size.
    pub fn colored_range_report(&self, l: usize, r: usize) -> Vec<u32> {
        let mut out = Vec::new();
        self.report_positions(l, r, &mut |pos| out.push(self.colors[pos - 1]));
        out
    }

    /// Calls `emit` with the 1-based position of the first occurrence in
    /// `[l..r]` of every distinct color of the range.
    pub fn report_positions(&self, l: usize, r: usize, emit: &mut dyn FnMut(usize)) {
        if l > r || l < 1 || r > self.colors.len() {
            return;
        }
        let mut stack = vec![(l, r)];
        while let Some((lo, hi)) = stack.pop() {
            if lo > hi {
                continue;
            }
            let p = self.j_rmq.argmin(lo - 1, hi - 1) + 1;
            if self.j_rmq.value(p - 1) >= l as u32 {
                continue; // every color in [lo..hi] already occurs in [l..lo)
            }
            emit(p);
            if p > lo {
                stack.push((lo, p - 1));
            }
            if p < hi {
                stack.push((p + 1, hi));
            }
        }
    }
}

/// Static weighted point set supporting dominance counting
/// (sum of weights over `x <= a`, `y <= b`). Merge tree over the
/// x-sorted points; each node keeps its y values sorted with prefix sums.
#[derive(Debug)]
pub struct PointSet2D {
    xs: Vec<u64>,
    size: usize,
    ys: Vec<Vec<u64>>,
    sums: Vec<Vec<i64>>,
}

impl PointSet2D {
    pub fn new(mut points: Vec<(u64, u64, i64)>) -> Self {
        points.sort_unstable();
        let size = points.len();
        let xs = points.iter().map(|p| p.0).collect();
        let mut ys = vec![Vec::new(); 2 * size.max(1)];
        let mut sums = vec![Vec::new(); 2 * size.max(1)];
        let mut ws = vec![Vec::new(); 2 * size.max(1)];
        for (k, &(_, y, w)) in points.iter().enumerate() {
            ys[size + k].push(y);
            ws[size + k].push(w);
        }
        for v in (1..size).rev() {
            let (mut a, mut b) = (0, 0);
            let (left, right) = (2 * v, 2 * v + 1);
            let mut my = Vec::with_capacity(ys[left].len() + ys[right].len());
            let mut mw = Vec::with_capacity(my.capacity());
            while a < ys[left].len() || b < ys[right].len() {
                let take_left = b == ys[right].len()
                    || (a < ys[left].len() && ys[left][a] <= ys[right][b]);
                if take_left {
                    my.push(ys[left][a]);
                    mw.push(ws[left][a]);
                    a += 1;
                } else {
                    my.push(ys[right][b]);
                    mw.push(ws[right][b]);
                    b += 1;
                }
            }
            ys[v] = my;
            ws[v] = mw;
        }
        for v in 1..2 * size.max(1) {
            let mut acc = 0i64;
            sums[v] = ws[v]
                .iter()
                .map(|&w| {
                    acc += w;
                    acc
                })
                .collect();
        }
        Self { xs, size, ys, sums }
    }

    /// Sum of weights over points with `x <= a` and `y <= b`.
    pub fn dominance_count(&self, a: u64, b: u64) -> i64 {
        if self.size == 0 {
            return 0;
        }
        let cnt = self.xs.partition_point(|&x| x <= a);
        let mut total = 0i64;
        let mut add = |node: usize| {
            let k = self.ys[node].partition_point(|&y| y <= b);
            if k > 0 {
                total += self.sums[node][k - 1];
            }
        };
        let (mut lo, mut hi) = (self.size, self.size + cnt);
        while lo < hi {
            if lo & 1 == 1 {
                add(lo);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                add(hi);
            }
            lo /= 2;
            hi /= 2;
        }
        total
    }
}

/// An axis-parallel rectangle `[x1..x2] × [y1..y2]`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x1: u64,
    pub x2: u64,
    pub y1: u64,
    pub y2: u64,
}

impl Rect {
    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.x1 <= x && x <= self.x2 && self.y1 <= y && y <= self.y2
    }
}

/// Static rectangle set answering stabbing-count queries via the signed
/// inclusion–exclusion reduction to dominance counting: each rectangle
/// contributes points (x1,y1,+1), (x2+1,y1,−1), (x1,y2+1,−1), (x2+1,y2+1,+1).
#[derive(Debug)]
pub struct RectangleSet {
    points: PointSet2D,
}

impl RectangleSet {
    pub fn new(rects: &[Rect]) -> Self {
        let mut points = Vec::with_capacity(4 * rects.len());
        for r in rects {
            debug_assert!(r.x1 <= r.x2 && r.y1 <= r.y2);
            points.push((r.x1, r.y1, 1));
            points.push((r.x2 + 1, r.y1, -1));
            points.push((r.x1, r.y2 + 1, -1));
            points.push((r.x2 + 1, r.y2 + 1, 1));
        }
        Self { points: PointSet2D::new(points) }
    }

    /// Builds a set whose stabbing count equals the number of distinct
    /// colors whose rectangles contain the query point: each color class is
    /// decomposed into disjoint rectangles with the same union first.
    pub fn new_colored(rects: &[(Rect, u32)]) -> Self {
        let mut by_color: std::collections::HashMap<u32, Vec<Rect>> =
            std::collections::HashMap::new();
        for &(r, c) in rects {
            by_color.entry(c).or_default().push(r);
        }
        let mut disjoint = Vec::new();
        let mut classes: Vec<_> = by_color.into_iter().collect();
        classes.sort_unstable_by_key(|(c, _)| *c);
        for (_, class) in classes {
            disjoint.extend(decompose_color_class(&class));
        }
        Self::new(&disjoint)
    }

    /// Number of rectangles containing `(x, y)`.
    pub fn stab_count(&self, x: u64, y: u64) -> u64 {
        let v = self.points.dominance_count(x, y);
        debug_assert!(v >= 0);
        v as u64
    }
}

/// Rewrites a set of rectangles (one color class) into pairwise-disjoint
/// rectangles with the same union, by sweeping x-strips and emitting the
/// maximal covered y-slabs of each strip. Output size is O(c²) for c input
/// rectangles.
pub fn decompose_color_class(rects: &[Rect]) -> Vec<Rect> {
    let mut xs: Vec<u64> = Vec::with_capacity(2 * rects.len());
    for r in rects {
        xs.push(r.x1);
        xs.push(r.x2 + 1);
    }
    xs.sort_unstable();
    xs.dedup();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (x1, x2) = (w[0], w[1] - 1);
        // y-intervals of rectangles covering this whole strip.
        let mut ivs: Vec<(u64, u64)> = rects
            .iter()
            .filter(|r| r.x1 <= x1 && x2 <= r.x2)
            .map(|r| (r.y1, r.y2))
            .collect();
        ivs.sort_unstable();
        let mut k = 0;
        while k < ivs.len() {
            let (y1, mut y2) = ivs[k];
            k += 1;
            while k < ivs.len() && ivs[k].0 <= y2 + 1 {
                y2 = y2.max(ivs[k].1);
                k += 1;
            }
            out.push(Rect { x1, x2, y1, y2 });
        }
    }
    out
}
