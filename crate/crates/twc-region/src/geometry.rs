//! Down-closed convex regions in the rate plane.

use serde::{Deserialize, Serialize};

/// Points closer than this are merged.
const MERGE_TOL: f64 = 1e-9;

type Point = (f64, f64);

/// Convex region closed toward the axes, stored as its upper-right boundary.
///
/// Vertices run from the `R2` axis to the `R1` axis with increasing `R1`.
/// The region with only the origin is `[(0, 0)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion2D {
    pub vertices: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() <= MERGE_TOL && (a.1 - b.1).abs() <= MERGE_TOL);
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Drop near-duplicate and collinear interior points of a monotone chain.
fn simplify(chain: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(chain.len());
    for p in chain {
        if let Some(&last) = out.last() {
            if (p.0 - last.0).abs() <= MERGE_TOL && (p.1 - last.1).abs() <= MERGE_TOL {
                continue;
            }
        }
        while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p).abs() <= 1e-12 {
            out.pop();
        }
        out.push(p);
    }
    out
}

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (cx, cy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (cx * cx + cy * cy).sqrt()
}

/// Euclidean distance from `p` to a counter-clockwise convex polygon.
fn polygon_dist(p: Point, poly: &[Point]) -> f64 {
    let n = poly.len();
    if n >= 3 && (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) >= -1e-15) {
        return 0.0;
    }
    if n == 1 {
        return seg_dist(p, poly[0], poly[0]);
    }
    (0..n).map(|i| seg_dist(p, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

impl RateRegion2D {
    /// Smallest down-closed convex region containing `points`; negative
    /// coordinates are clamped to zero.
    pub fn from_points(points: &[Point]) -> Self {
        let mut all = vec![(0.0, 0.0)];
        for &(a, b) in points {
            let (a, b) = (a.max(0.0), b.max(0.0));
            all.extend([(a, b), (a, 0.0), (0.0, b)]);
        }
        let mut chain: Vec<Point> =
            convex_hull(&all).into_iter().filter(|&(a, b)| a > MERGE_TOL || b > MERGE_TOL).collect();
        chain.sort_by(|p, q| p.0.total_cmp(&q.0).then(q.1.total_cmp(&p.1)));
        let chain = simplify(chain);
        if chain.is_empty() {
            return Self { vertices: vec![(0.0, 0.0)] };
        }
        Self { vertices: chain }
    }

    /// `[0, r1] × [0, r2]`.
    pub fn rectangle(r1: f64, r2: f64) -> Self {
        Self::from_points(&[(r1, r2)])
    }

    /// Intersection of the positive quadrant with `λR1 + (1−λ)R2 ≤ h` for
    /// every `(λ, h)`.
    pub fn from_halfplanes(planes: &[(f64, f64)]) -> Self {
        let big = planes.iter().map(|&(l, h)| h.max(0.0) / l.min(1.0 - l).max(1e-6)).fold(1.0, f64::max) * 2.0;
        let mut poly = vec![(0.0, 0.0), (big, 0.0), (big, big), (0.0, big)];
        for &(l, h) in planes {
            let h = h.max(0.0);
            let f = |p: Point| l * p.0 + (1.0 - l) * p.1 - h;
            let mut next = Vec::with_capacity(poly.len() + 1);
            for i in 0..poly.len() {
                let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
                let (fp, fq) = (f(p), f(q));
                if fp <= 0.0 {
                    next.push(p);
                }
                if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                    let t = fp / (fp - fq);
                    next.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                }
            }
            poly = next;
            if poly.is_empty() {
                break;
            }
        }
        Self::from_points(&poly)
    }

    /// `max λR1 + (1−λ)R2` over the region.
    pub fn support(&self, lambda: f64) -> f64 {
        self.vertices.iter().map(|&(a, b)| lambda * a + (1.0 - lambda) * b).fold(0.0, f64::max)
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.0).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.1).fold(0.0, f64::max)
    }

    /// The whole region as a counter-clockwise convex polygon.
    pub fn polygon(&self) -> Vec<Point> {
        let mut all = vec![(0.0, 0.0)];
        for &(a, b) in &self.vertices {
            all.extend([(a, b), (a, 0.0), (0.0, b)]);
        }
        convex_hull(&all)
    }

    /// True iff every point of `other` is within `slack` of `self`.
    pub fn contains(&self, other: &Self, slack: f64) -> bool {
        let mine = self.polygon();
        other.polygon().into_iter().all(|p| polygon_dist(p, &mine) <= slack)
    }

    /// Hausdorff distance between the two regions.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        let (a, b) = (self.polygon(), other.polygon());
        let ab = a.iter().map(|&p| polygon_dist(p, &b)).fold(0.0, f64::max);
        let ba = b.iter().map(|&p| polygon_dist(p, &a)).fold(0.0, f64::max);
        ab.max(ba)
    }

    /// CSV with header `R1,R2` and nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("R1,R2\n");
        for &(a, b) in &self.vertices {
            s.push_str(&format!("{},{}\n", sig9(a), sig9(b)));
        }
        s
    }
}

/// `x` rounded to nine significant digits, without trailing zeros.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let s = format!("{:.8e}", x);
    let v: f64 = s.parse().expect("formatted float");
    let digits = (8 - v.abs().log10().floor() as i32).max(0) as usize;
    let t = format!("{:.*}", digits, v);
    if t.contains('.') {
        t.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        t
    }
}

/// True iff `region` is within `slack` of containing `other`.
pub fn region_contains(region: &RateRegion2D, other: &RateRegion2D, slack: f64) -> bool {
    region.contains(other, slack)
}

/// Hausdorff distance between two regions, in bits.
pub fn region_hausdorff(a: &RateRegion2D, b: &RateRegion2D) -> f64 {
    a.hausdorff(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let r = RateRegion2D::rectangle(1.0, 1.0);
        assert_eq!(r.vertices, vec![(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        assert!(r.contains(&r, 0.0));
        assert_eq!(r.hausdorff(&r), 0.0);
    }

    #[test]
    fn rectangles_differ_by_their_width_gap() {
        let a = RateRegion2D::rectangle(1.0, 1.0);
        let b = RateRegion2D::rectangle(0.9, 1.0);
        assert!((a.hausdorff(&b) - 0.1).abs() < 1e-12);
        assert!(a.contains(&b, 0.0));
        assert!(!b.contains(&a, 0.05));
    }

    #[test]
    fn origin_only() {
        assert_eq!(RateRegion2D::from_points(&[(0.0, 0.0)]).vertices, vec![(0.0, 0.0)]);
        assert_eq!(RateRegion2D::from_halfplanes(&[(0.0, 0.0), (1.0, 0.0)]).vertices, vec![(0.0, 0.0)]);
    }

    #[test]
    fn segment_on_an_axis() {
        let r = RateRegion2D::from_points(&[(0.0, 0.7), (0.0, 0.3)]);
        assert_eq!(r.vertices, vec![(0.0, 0.7)]);
        assert_eq!(r.max_r1(), 0.0);
    }

    #[test]
    fn halfplanes_cut_a_corner() {
        let r = RateRegion2D::from_halfplanes(&[(0.0, 1.0), (0.5, 0.75), (1.0, 1.0)]);
        assert_eq!(r.vertices.len(), 4);
        assert!((r.support(0.5) - 0.75).abs() < 1e-12);
        assert!((r.vertices[1].0 - 0.5).abs() < 1e-12 && (r.vertices[1].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_nine_digits() {
        assert_eq!(sig9(0.3651390159812), "0.365139016");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(12.3456789012), "12.3456789");
        let r = RateRegion2D::rectangle(1.0, 0.5);
        assert_eq!(r.to_csv(), "R1,R2\n0,0.5\n1,0.5\n1,0\n");
    }
}
