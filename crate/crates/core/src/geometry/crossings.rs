//! Edge-crossing counters.
//!
//! An all-pairs scan, a scan over pairs with overlapping x-extents, and a
//! Bentley-Ottmann plane sweep. All apply the same crossing predicate
//! ([`classify`]) so their counts agree exactly; they differ only in how
//! candidate pairs are found.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::segment::{classify, crosses, crossing_point, Segment, SegmentRelation};
use crate::model::{BoldDrawing, NodeId, Point};

/// A segment tagged with the graph nodes it belongs to. Two segments whose
/// tags share a node are adjacent and never counted as crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedSegment {
    pub seg: Segment,
    pub ends: (NodeId, NodeId),
}

impl TaggedSegment {
    pub fn adjacent(&self, other: &TaggedSegment) -> bool {
        let (a, b) = self.ends;
        let (c, d) = other.ends;
        a == c || a == d || b == c || b == d
    }
}

pub fn drawing_segments(d: &BoldDrawing) -> Vec<TaggedSegment> {
    (0..d.edge_count())
        .map(|i| {
            let (p, q) = d.edge_points(i);
            TaggedSegment {
                seg: Segment::new(p, q),
                ends: d.graph().edges()[i],
            }
        })
        .collect()
}

/// Whether two tagged segments count as a crossing.
pub fn pair_crosses(a: &TaggedSegment, b: &TaggedSegment) -> bool {
    !a.adjacent(b) && crosses(&a.seg, &b.seg)
}

/// Result of the all-pairs scan.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BruteForceCount {
    pub crossings: u64,
    /// Index pairs `(i, j)`, `i < j`, of non-adjacent collinear overlapping segments.
    pub collinear_overlaps: Vec<(usize, usize)>,
}

pub fn count_crossings_bruteforce(d: &BoldDrawing) -> BruteForceCount {
    bruteforce_segments(&drawing_segments(d))
}

pub fn count_crossings_sweep(d: &BoldDrawing) -> u64 {
    sweep_segments(&drawing_segments(d))
}

/// O(m^2) pairwise scan. Parallel over the first index; the result does not
/// depend on scheduling.
pub fn bruteforce_segments(segs: &[TaggedSegment]) -> BruteForceCount {
    let per_row: Vec<(u64, Vec<(usize, usize)>)> = (0..segs.len())
        .into_par_iter()
        .map(|i| {
            let a = &segs[i];
            let mut count = 0u64;
            let mut overlaps = Vec::new();
            for (j, b) in segs.iter().enumerate().skip(i + 1) {
                if a.adjacent(b) {
                    continue;
                }
                match classify(&a.seg, &b.seg) {
                    SegmentRelation::Crossing(_) => count += 1,
                    SegmentRelation::CollinearOverlap => overlaps.push((i, j)),
                    _ => {}
                }
            }
            (count, overlaps)
        })
        .collect();
    let mut out = BruteForceCount::default();
    for (c, o) in per_row {
        out.crossings += c;
        out.collinear_overlaps.extend(o);
    }
    out
}

/// Every crossing pair `(i, j, point)` with `i < j`, found by pruning on the
/// x-extent of the segments. Used where crossing positions are needed.
pub fn crossing_points(segs: &[TaggedSegment]) -> Vec<(usize, usize, Point)> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    let min_x = |i: usize| segs[i].seg.p.x.min(segs[i].seg.q.x);
    let max_x = |i: usize| segs[i].seg.p.x.max(segs[i].seg.q.x);
    order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let right = max_x(i);
        for &j in &order[k + 1..] {
            if min_x(j) > right {
                break;
            }
            if segs[i].adjacent(&segs[j]) {
                continue;
            }
            if let SegmentRelation::Crossing(p) = classify(&segs[i].seg, &segs[j].seg) {
                out.push((i.min(j), i.max(j), p));
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    out
}

/// Segment indices sorted by left x, with each segment's x-extent.
fn x_order(segs: &[TaggedSegment]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let lo: Vec<f64> = segs.iter().map(|s| s.seg.p.x.min(s.seg.q.x)).collect();
    let hi: Vec<f64> = segs.iter().map(|s| s.seg.p.x.max(s.seg.q.x)).collect();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&a, &b| lo[a].total_cmp(&lo[b]).then(a.cmp(&b)));
    (order, lo, hi)
}

/// Number of pairs whose x-extents overlap, i.e. the work done by
/// [`pruned_count`]. O(m log m).
pub fn x_overlap_pairs(segs: &[TaggedSegment]) -> u64 {
    let (order, lo, hi) = x_order(segs);
    let starts: Vec<f64> = order.iter().map(|&i| lo[i]).collect();
    order
        .iter()
        .enumerate()
        .map(|(k, &i)| (starts.partition_point(|&x| x <= hi[i]) - k - 1) as u64)
        .sum()
}

/// Crossing count by scanning only pairs with overlapping x-extents. Same
/// predicate as the other counters, so the count is identical.
pub fn pruned_count(segs: &[TaggedSegment]) -> u64 {
    let (order, lo, hi) = x_order(segs);
    let sorted: Vec<(TaggedSegment, f64, f64)> = order
        .iter()
        .map(|&i| {
            let s = segs[i];
            (s, s.seg.p.y.min(s.seg.q.y), s.seg.p.y.max(s.seg.q.y))
        })
        .collect();
    let right: Vec<f64> = order.iter().map(|&i| hi[i]).collect();
    let left: Vec<f64> = order.iter().map(|&i| lo[i]).collect();
    (0..sorted.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|k| {
            let (a, aylo, ayhi) = &sorted[k];
            let mut count = 0u64;
            for l in k + 1..sorted.len() {
                if left[l] > right[k] {
                    break;
                }
                let (b, bylo, byhi) = &sorted[l];
                if bylo > ayhi || byhi < aylo || a.adjacent(b) {
                    continue;
                }
                if crosses(&a.seg, &b.seg) {
                    count += 1;
                }
            }
            count
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Plane sweep
// ---------------------------------------------------------------------------

/// A segment oriented left to right in (x, y) lexicographic order.
#[derive(Debug, Clone, Copy)]
struct SweepSeg {
    a: Point,
    b: Point,
    slope: f64,
}

impl SweepSeg {
    fn new(s: &Segment) -> Self {
        let (a, b) = if lex_cmp(s.p, s.q) == Ordering::Greater {
            (s.q, s.p)
        } else {
            (s.p, s.q)
        };
        let slope = if a.x == b.x {
            f64::INFINITY
        } else {
            (b.y - a.y) / (b.x - a.x)
        };
        SweepSeg { a, b, slope }
    }

    /// Height where the sweep line through `p` meets this segment. A vertical
    /// segment sits at `p.y` while the sweep point moves along it.
    fn y_at(&self, p: Point) -> f64 {
        if self.slope.is_infinite() {
            p.y.clamp(self.a.y, self.b.y)
        } else if p.x <= self.a.x {
            self.a.y
        } else if p.x >= self.b.x {
            self.b.y
        } else if p.x - self.a.x <= self.b.x - p.x {
            self.a.y + (p.x - self.a.x) * self.slope
        } else {
            self.b.y - (self.b.x - p.x) * self.slope
        }
    }
}

fn lex_cmp(p: Point, q: Point) -> Ordering {
    p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    Cross = 0,
    End = 1,
    Start = 2,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    at: Point,
    kind: EventKind,
    a: u32,
    b: u32,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self.at, other.at)
            .then(self.kind.cmp(&other.kind))
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

struct Sweep<'a> {
    tagged: &'a [TaggedSegment],
    segs: Vec<SweepSeg>,
    status: Vec<u32>,
    pos: Vec<usize>,
    queue: BinaryHeap<Reverse<Event>>,
    here: Point,
    crossings: i64,
}

const NOT_ACTIVE: usize = usize::MAX;

impl Sweep<'_> {
    /// `s` sits below `t` just to the right of the sweep point.
    fn below(&self, s: u32, t: u32) -> bool {
        let (ss, ts) = (&self.segs[s as usize], &self.segs[t as usize]);
        let (ys, yt) = (ss.y_at(self.here), ts.y_at(self.here));
        let tol = 1e-10 * ys.abs().max(yt.abs()).max(1.0);
        if (ys - yt).abs() > tol {
            return ys < yt;
        }
        match ss.slope.total_cmp(&ts.slope) {
            Ordering::Equal => s < t,
            o => o == Ordering::Less,
        }
    }

    fn crosses(&self, s: u32, t: u32) -> bool {
        pair_crosses(&self.tagged[s as usize], &self.tagged[t as usize])
    }

    /// Crossing pairs swap order exactly once: the lower one has the larger
    /// slope before the crossing and the smaller slope after.
    fn pre_crossing(&self, lower: u32, upper: u32) -> bool {
        self.segs[lower as usize].slope > self.segs[upper as usize].slope
    }

    /// Queue the crossing of the neighbours at `i` and `i + 1` if it lies ahead.
    fn check(&mut self, i: usize) {
        if i + 1 >= self.status.len() {
            return;
        }
        let (lo, hi) = (self.status[i], self.status[i + 1]);
        if !self.pre_crossing(lo, hi) || !self.crosses(lo, hi) {
            return;
        }
        let (s, t) = (lo.min(hi), lo.max(hi));
        let mut at = crossing_point(&self.tagged[s as usize].seg, &self.tagged[t as usize].seg);
        // keep rounding inside both boxes; pins x exactly for a vertical segment
        let (ss, ts) = (&self.segs[s as usize], &self.segs[t as usize]);
        at.x = at.x.clamp(ss.a.x.max(ts.a.x), ss.b.x.min(ts.b.x));
        let (ylo, yhi) = (
            ss.a.y.min(ss.b.y).max(ts.a.y.min(ts.b.y)),
            ss.a.y.max(ss.b.y).min(ts.a.y.max(ts.b.y)),
        );
        if ylo <= yhi {
            at.y = at.y.clamp(ylo, yhi);
        }
        if lex_cmp(at, self.here) == Ordering::Less {
            at = self.here;
        }
        for end in [self.segs[s as usize].b, self.segs[t as usize].b] {
            if lex_cmp(at, end) == Ordering::Greater {
                at = end;
            }
        }
        self.queue.push(Reverse(Event {
            at,
            kind: EventKind::Cross,
            a: s,
            b: t,
        }));
    }

    fn reindex(&mut self, from: usize) {
        for k in from..self.status.len() {
            self.pos[self.status[k] as usize] = k;
        }
    }

    /// Sort the run of active segments passing through the sweep point.
    /// Crossings there may not have been processed yet, and an endpoint event
    /// needs the run in its post-crossing order.
    fn bundle(&self) -> (usize, usize) {
        let p = self.here;
        let tol = 1e-9 * p.y.abs().max(p.x.abs()).max(1.0);
        let lo = self
            .status
            .partition_point(|&t| self.segs[t as usize].y_at(p) < p.y - tol);
        let hi = self
            .status
            .partition_point(|&t| self.segs[t as usize].y_at(p) <= p.y + tol);
        (lo, hi)
    }

    fn settle(&mut self) {
        let (lo, hi) = self.bundle();
        if hi > lo + 1 {
            self.repair(lo, hi - 1);
        }
    }

    fn insert(&mut self, s: u32) {
        self.settle();
        let i = self.status.partition_point(|&t| self.below(t, s));
        self.status.insert(i, s);
        self.reindex(i);
        // a crossing within rounding of the start point is already passed
        let (lo, hi) = self.bundle();
        for k in lo..hi {
            let t = self.status[k];
            if t != s && self.crosses(s, t) {
                let (lower, upper) = if k < i { (t, s) } else { (s, t) };
                if !self.pre_crossing(lower, upper) {
                    self.crossings += 1;
                }
            }
        }
        if i > 0 {
            self.check(i - 1);
        }
        self.check(i);
    }

    fn remove(&mut self, s: u32) {
        self.settle();
        let i = self.pos[s as usize];
        debug_assert_eq!(self.status[i], s);
        self.status.remove(i);
        self.pos[s as usize] = NOT_ACTIVE;
        self.reindex(i);
        if i > 0 {
            self.check(i - 1);
        }
    }

    fn cross(&mut self, s: u32, t: u32) {
        let (ps, pt) = (self.pos[s as usize], self.pos[t as usize]);
        if ps == NOT_ACTIVE || pt == NOT_ACTIVE {
            return;
        }
        let (i, j) = (ps.min(pt), ps.max(pt));
        let (lower, upper) = (self.status[i], self.status[j]);
        if !self.pre_crossing(lower, upper) {
            return;
        }
        if j == i + 1 {
            self.status.swap(i, j);
            self.pos[lower as usize] = j;
            self.pos[upper as usize] = i;
            self.crossings += 1;
            if i > 0 {
                self.check(i - 1);
            }
            self.check(j);
        } else {
            self.repair(i, j);
        }
    }

    /// Restore the status order on `lo..=hi` after several segments met near
    /// the sweep point. Each swap of a crossing pair is recorded with the
    /// sign of the order change.
    fn repair(&mut self, lo: usize, hi: usize) {
        for k in lo + 1..=hi {
            let mut j = k;
            while j > lo && self.below(self.status[j], self.status[j - 1]) {
                let (lower, upper) = (self.status[j - 1], self.status[j]);
                if self.crosses(lower, upper) {
                    self.crossings += if self.pre_crossing(lower, upper) { 1 } else { -1 };
                }
                self.status.swap(j - 1, j);
                j -= 1;
            }
        }
        self.reindex(lo);
        for k in lo.saturating_sub(1)..=hi {
            self.check(k);
        }
    }
}

/// Bentley-Ottmann sweep over the lexicographic (x, then y) order, which acts
/// as a symbolic rotation for vertical segments and shared x-coordinates.
/// Returns the same count as [`bruteforce_segments`].
pub fn sweep_segments(tagged: &[TaggedSegment]) -> u64 {
    let segs: Vec<SweepSeg> = tagged.iter().map(|t| SweepSeg::new(&t.seg)).collect();
    let mut endpoints: Vec<Event> = Vec::with_capacity(2 * segs.len());
    for (i, s) in segs.iter().enumerate() {
        if lex_cmp(s.a, s.b) == Ordering::Equal {
            continue;
        }
        let id = i as u32;
        endpoints.push(Event {
            at: s.a,
            kind: EventKind::Start,
            a: id,
            b: id,
        });
        endpoints.push(Event {
            at: s.b,
            kind: EventKind::End,
            a: id,
            b: id,
        });
    }
    endpoints.sort_unstable();

    let mut sweep = Sweep {
        tagged,
        segs,
        status: Vec::new(),
        pos: vec![NOT_ACTIVE; tagged.len()],
        queue: BinaryHeap::new(),
        here: Point::default(),
        crossings: 0,
    };
    let mut next = 0;
    let mut last_cross: Option<(u32, u32)> = None;
    loop {
        let take_queue = match (sweep.queue.peek(), endpoints.get(next)) {
            (Some(Reverse(q)), Some(e)) => q < e,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let ev = if take_queue {
            sweep.queue.pop().unwrap().0
        } else {
            next += 1;
            endpoints[next - 1]
        };
        sweep.here = ev.at;
        match ev.kind {
            EventKind::Cross => {
                // duplicates of one detection pop back to back
                if last_cross == Some((ev.a, ev.b)) {
                    continue;
                }
                last_cross = Some((ev.a, ev.b));
                sweep.cross(ev.a, ev.b);
            }
            EventKind::End => {
                last_cross = None;
                sweep.remove(ev.a);
            }
            EventKind::Start => {
                last_cross = None;
                sweep.insert(ev.a);
            }
        }
    }
    debug_assert!(sweep.crossings >= 0);
    sweep.crossings.max(0) as u64
}
