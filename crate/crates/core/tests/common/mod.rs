//! Independent reference implementations shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use qcc_core::instances::{GenSpec, Kind};
use qcc_core::Point;
use rand::Rng;

fn cross(o: Point, a: Point, b: Point) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// O(n^2) maxima: keep every point nobody dominates.
pub fn brute_maxima(points: &[Point]) -> Vec<Point> {
    points
        .iter()
        .copied()
        .filter(|p| !points.iter().any(|q| q.x > p.x && q.y > p.y))
        .collect()
}

/// Upper hull of lexicographically sorted points, strict right turns only.
pub fn upper_hull(points: &[Point]) -> Vec<Point> {
    let mut h: Vec<Point> = Vec::new();
    for &p in points {
        while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) >= 0 {
            h.pop();
        }
        h.push(p);
    }
    h
}

/// O(n^3) upper hull: p is a vertex iff it is not on or below any segment
/// between points strictly to either side of it, and it is the top of its x.
pub fn brute_upper_hull(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = points
        .iter()
        .copied()
        .filter(|&p| {
            !points.iter().any(|q| q.x == p.x && q.y > p.y)
                && !points
                    .iter()
                    .any(|&a| a.x < p.x && points.iter().any(|&b| b.x > p.x && cross(a, b, p) <= 0))
        })
        .collect();
    out.sort();
    out
}

pub fn is_upper_hull_edge(hull: &[Point], a: Point, b: Point) -> bool {
    hull.windows(2).any(|w| w[0] == a && w[1] == b)
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Brute-force bridge LP over the dual lines `y <= a_k x - b_k` with
/// `a_k = p.x - xl`, `b_k = p.y`: try every pair of lines, keep the feasible
/// intersection of greatest y, and report its tight points of least and
/// greatest x.
pub fn brute_bridge(points: &[Point], xl_num: i64, xl_den: i64) -> (Point, Point) {
    let xl = BigRational::new(BigInt::from(xl_num), BigInt::from(xl_den));
    let lines: Vec<(BigRational, BigRational)> = points.iter().map(|p| (big(p.x) - &xl, big(p.y))).collect();
    let value = |k: usize, x: &BigRational| &lines[k].0 * x - &lines[k].1;
    let mut best: Option<(BigRational, BigRational)> = None;
    let mut order: Vec<usize> = (0..lines.len()).collect();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].0 == lines[j].0 {
                continue;
            }
            let x = (&lines[i].1 - &lines[j].1) / (&lines[i].0 - &lines[j].0);
            let y = value(i, &x);
            if best.as_ref().is_some_and(|(_, by)| *by >= y) {
                continue;
            }
            if let Some(pos) = order.iter().position(|&k| value(k, &x) < y) {
                // check the violated line first next time
                let k = order.remove(pos);
                order.insert(0, k);
            } else {
                best = Some((x, y));
            }
        }
    }
    let (x, y) = best.expect("separated input has a bounded optimum");
    let tight: Vec<Point> = (0..lines.len())
        .filter(|&k| value(k, &x) == y)
        .map(|k| points[k])
        .collect();
    (*tight.iter().min().unwrap(), *tight.iter().max().unwrap())
}

/// Harmonic cost sum of the threshold search over m distinct keys.
pub fn harmonic_cost(m: usize) -> f64 {
    (1..=m).map(|t| (m as f64 / t as f64).sqrt() / t as f64).sum()
}

/// Exact expected charge of the threshold trace over m distinct keys: the
/// key of rank r (1 = best) becomes the threshold with probability 1/r and
/// then pays ceil(sqrt(m / (r - 1))) to move on.
pub fn threshold_expectation(m: usize) -> f64 {
    let ceil_sqrt = |v: usize| (1..).find(|&s: &usize| s * s >= v).unwrap() as f64;
    1.0 + (2..=m).map(|r| ceil_sqrt(m.div_ceil(r - 1)) / r as f64).sum::<f64>()
}

/// Random instance from any generator with n in [lo, hi].
pub fn random_spec<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> GenSpec {
    let kind = Kind::ALL[rng.gen_range(0..Kind::ALL.len())];
    // log-uniform n so small cases are well covered
    let n = (rng.gen_range((lo as f64).ln()..=(hi as f64).ln()).exp().round() as usize).clamp(lo, hi);
    let mut spec = GenSpec::new(kind, n).with_seed(rng.gen());
    match kind {
        Kind::LowerBound => {
            let n = n.max(3);
            spec = GenSpec::new(kind, n)
                .with_seed(spec.seed)
                .with_h(rng.gen_range(1..=(n - 1) / 2));
        }
        Kind::Polygon => spec = spec.with_k(rng.gen_range(3..=12)),
        Kind::Circle => spec = GenSpec::new(kind, n.max(3)).with_seed(spec.seed),
        _ => {}
    }
    spec
}
