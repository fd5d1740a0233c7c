use serde::{Deserialize, Serialize};

use crate::model::Point;

/// Relative tolerance for orientation tests.
pub const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentRelation {
    Disjoint,
    /// The open segments cross transversally at this point.
    Crossing(Point),
    /// They share a single point that is an endpoint of at least one of them.
    Touching,
    /// Collinear with an overlap of positive length.
    CollinearOverlap,
}

impl Segment {
    pub const fn new(p: Point, q: Point) -> Self {
        Segment { p, q }
    }

    pub fn length(&self) -> f64 {
        self.p.distance(self.q)
    }

    pub fn direction(&self) -> Point {
        self.q - self.p
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.p + self.direction() * t
    }

    /// Axis-aligned bounds as `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        (
            Point::new(self.p.x.min(self.q.x), self.p.y.min(self.q.y)),
            Point::new(self.p.x.max(self.q.x), self.p.y.max(self.q.y)),
        )
    }
}

/// Sign of the turn `a -> b -> c`: 1 left, -1 right, 0 collinear within [`EPS`].
pub fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let ab = b - a;
    let ac = c - a;
    let det = ab.cross(ac);
    // |det| <= EPS |ab| |ac|, squared to skip the roots
    if det * det <= EPS * EPS * ab.dot(ab) * ac.dot(ac) {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    }
}

pub fn classify(s1: &Segment, s2: &Segment) -> SegmentRelation {
    let (lo1, hi1) = s1.bounds();
    let (lo2, hi2) = s2.bounds();
    if hi1.x < lo2.x || hi2.x < lo1.x || hi1.y < lo2.y || hi2.y < lo1.y {
        return SegmentRelation::Disjoint;
    }
    let o1 = orientation(s1.p, s1.q, s2.p);
    let o2 = orientation(s1.p, s1.q, s2.q);
    let o3 = orientation(s2.p, s2.q, s1.p);
    let o4 = orientation(s2.p, s2.q, s1.q);

    if o1 * o2 < 0 && o3 * o4 < 0 {
        return SegmentRelation::Crossing(crossing_point(s1, s2));
    }
    if o1 == 0 && o2 == 0 {
        return collinear_relation(s1, s2);
    }
    // Some endpoint is collinear with the other segment: touching iff it lies on it.
    let on = |o: i8, pt: Point, s: &Segment| o == 0 && within_bounds(pt, s);
    if on(o1, s2.p, s1) || on(o2, s2.q, s1) || on(o3, s1.p, s2) || on(o4, s1.q, s2) {
        return SegmentRelation::Touching;
    }
    SegmentRelation::Disjoint
}

/// `classify(s1, s2)` is a `Crossing`, without computing the point.
pub fn crosses(s1: &Segment, s2: &Segment) -> bool {
    let (lo1, hi1) = s1.bounds();
    let (lo2, hi2) = s2.bounds();
    if hi1.x < lo2.x || hi2.x < lo1.x || hi1.y < lo2.y || hi2.y < lo1.y {
        return false;
    }
    orientation(s1.p, s1.q, s2.p) * orientation(s1.p, s1.q, s2.q) < 0
        && orientation(s2.p, s2.q, s1.p) * orientation(s2.p, s2.q, s1.q) < 0
}

/// The transversal crossing point of the open segments, if any. Segments that
/// only touch (shared endpoint, T-junction) or overlap collinearly give `None`.
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> Option<Point> {
    match classify(s1, s2) {
        SegmentRelation::Crossing(p) => Some(p),
        _ => None,
    }
}

pub fn collinear_overlap(s1: &Segment, s2: &Segment) -> bool {
    classify(s1, s2) == SegmentRelation::CollinearOverlap
}

/// Intersection of the supporting lines, evaluated along `s1`.
pub(crate) fn crossing_point(s1: &Segment, s2: &Segment) -> Point {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let denom = d1.cross(d2);
    let t = (s2.p - s1.p).cross(d2) / denom;
    s1.point_at(t.clamp(0.0, 1.0))
}

fn within_bounds(pt: Point, s: &Segment) -> bool {
    let (lo, hi) = s.bounds();
    pt.x >= lo.x && pt.x <= hi.x && pt.y >= lo.y && pt.y <= hi.y
}

fn collinear_relation(s1: &Segment, s2: &Segment) -> SegmentRelation {
    let d = s1.direction();
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return if within_bounds(s1.p, s2) {
            SegmentRelation::Touching
        } else {
            SegmentRelation::Disjoint
        };
    }
    let t = |pt: Point| (pt - s1.p).dot(d) / len2;
    let (a, b) = {
        let (ta, tb) = (t(s2.p), t(s2.q));
        (ta.min(tb), ta.max(tb))
    };
    let lo = a.max(0.0);
    let hi = b.min(1.0);
    let overlap = (hi - lo) * len2.sqrt();
    let tol = EPS * len2.sqrt().max(s2.length());
    if overlap > tol {
        SegmentRelation::CollinearOverlap
    } else if overlap >= -tol {
        SegmentRelation::Touching
    } else {
        SegmentRelation::Disjoint
    }
}
