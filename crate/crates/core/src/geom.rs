//! Exact planar primitives.
//!
//! Every branch decision here is made in integer arithmetic. Coordinates are
//! bounded by [`COORD_LIMIT`], so any 2x2 determinant of coordinate
//! differences fits comfortably in an `i128`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible absolute coordinate value.
pub const COORD_LIMIT: i64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("candidate {0} coincides with the march pivot")]
    CandidateIsPivot(Point),
    #[error("pivot coincides with the anchor point {0}")]
    DegenerateAnchor(Point),
}

/// A planar point with exact integer coordinates.
///
/// The derived ordering is lexicographic: first by `x`, then by `y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn in_bounds(&self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    /// Mirror image across the x-axis.
    pub fn reflect_y(self) -> Self {
        Point::new(self.x, -self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    Left,
    Right,
    Collinear,
}

impl Turn {
    fn from_sign(v: i128) -> Self {
        match v.cmp(&0) {
            Ordering::Greater => Turn::Left,
            Ordering::Less => Turn::Right,
            Ordering::Equal => Turn::Collinear,
        }
    }
}

#[inline]
fn cross(ax: i128, ay: i128, bx: i128, by: i128) -> i128 {
    ax * by - ay * bx
}

#[inline]
fn delta(from: Point, to: Point) -> (i128, i128) {
    (to.x as i128 - from.x as i128, to.y as i128 - from.y as i128)
}

/// Sign of the cross product `(q - p) x (r - p)`.
pub fn orientation(p: Point, q: Point, r: Point) -> Turn {
    let (ux, uy) = delta(p, q);
    let (vx, vy) = delta(p, r);
    Turn::from_sign(cross(ux, uy, vx, vy))
}

/// Turn made by the direction `c -> d` relative to the direction `a -> b`.
///
/// When `b == c` this is the ordinary orientation of `a, b, d`.
pub fn direction_turn(a: Point, b: Point, c: Point, d: Point) -> Turn {
    let (ux, uy) = delta(a, b);
    let (vx, vy) = delta(c, d);
    Turn::from_sign(cross(ux, uy, vx, vy))
}

/// `p` dominates `q` when it is strictly larger in both coordinates.
pub fn dominates(p: Point, q: Point) -> bool {
    p.x > q.x && p.y > q.y
}

pub fn lex_less(p: Point, q: Point) -> bool {
    (p.x, p.y) < (q.x, q.y)
}

fn squared_len(x: i128, y: i128) -> i128 {
    x * x + y * y
}

/// Orders two march candidates `u` and `v` by the angle `ps, pc, ·`, swept
/// counterclockwise from the ray `pc -> ps`.
///
/// `Ordering::Greater` means `u` ranks higher. When every point lies on or
/// right of the line `ps -> pc`, that is exactly when the edge `pc -> u` keeps
/// `v` strictly below it. Among candidates in the same direction the farther
/// one ranks higher, so interior collinear points never win.
pub fn angle_compare(ps: Point, pc: Point, u: Point, v: Point) -> Result<Ordering, GeomError> {
    if ps == pc {
        return Err(GeomError::DegenerateAnchor(pc));
    }
    for cand in [u, v] {
        if cand == pc {
            return Err(GeomError::CandidateIsPivot(cand));
        }
    }
    let (dx, dy) = delta(ps, pc);
    let (ux, uy) = delta(pc, u);
    let (vx, vy) = delta(pc, v);

    // angle swept counterclockwise from the reversed edge (pc, ps):
    // 1 for [pi, 2pi), 0 for [0, pi)
    let half = |wx: i128, wy: i128| -> u8 {
        let c = cross(dx, dy, wx, wy);
        if c < 0 || (c == 0 && dx * wx + dy * wy < 0) {
            0
        } else {
            1
        }
    };
    let (hu, hv) = (half(ux, uy), half(vx, vy));
    if hu != hv {
        return Ok(hu.cmp(&hv));
    }
    let c = cross(ux, uy, vx, vy);
    if c != 0 {
        // v lies clockwise of u: u sweeps further
        return Ok(if c < 0 { Ordering::Greater } else { Ordering::Less });
    }
    Ok(squared_len(ux, uy).cmp(&squared_len(vx, vy)))
}

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Rational { num, den }
    }

    pub const fn from_int(v: i64) -> Self {
        Rational { num: v as i128, den: 1 }
    }

    /// Midpoint of two integers.
    pub fn midpoint(a: i64, b: i64) -> Self {
        Rational::new(a as i128 + b as i128, 2)
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn signum(&self) -> i128 {
        self.num.signum()
    }

    pub fn mul_int(self, k: i64) -> Self {
        Rational::new(self.num * k as i128, self.den)
    }

    /// Compare against an integer without building a new rational.
    pub fn cmp_int(&self, v: i64) -> Ordering {
        self.num.cmp(&(v as i128 * self.den))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        Rational::new(self.num * (l / self.den) + rhs.num * (l / rhs.den), l)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Self {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The dual of a point: the line `y = slope * x - offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualLine {
    slope: Rational,
    offset: i64,
}

impl DualLine {
    pub fn slope(&self) -> Rational {
        self.slope
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn eval(&self, x: Rational) -> Rational {
        let prod = Rational::new(self.slope.numer() * x.numer(), self.slope.denom() * x.denom());
        prod - Rational::from_int(self.offset)
    }
}

/// Dual line of `p` after shifting the plane so that `x = xl` becomes the
/// y-axis.
pub fn dualize(p: Point, xl: Rational) -> DualLine {
    DualLine {
        slope: Rational::from_int(p.x) - xl,
        offset: p.y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(p(0, 0), p(1, 0), p(2, 0)), Turn::Collinear);
        assert_eq!(orientation(p(0, 0), p(1, 0), p(1, 1)), Turn::Left);
        assert_eq!(orientation(p(0, 0), p(1, 1), p(2, 0)), Turn::Right);
    }

    #[test]
    fn orientation_at_coordinate_limit() {
        let l = COORD_LIMIT;
        assert_eq!(orientation(p(-l, -l), p(l, l), p(-l, l)), Turn::Left);
        assert_eq!(orientation(p(-l, -l), p(l, l), p(l, l - 1)), Turn::Right);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(p(2, 2), p(1, 1)));
        assert!(!dominates(p(2, 1), p(1, 1)));
        assert!(!dominates(p(1, 1), p(1, 1)));
    }

    #[test]
    fn lex_examples() {
        assert!(lex_less(p(1, 5), p(2, 0)));
        assert!(lex_less(p(1, 1), p(1, 2)));
        assert!(!lex_less(p(3, 3), p(3, 3)));
        assert_eq!(p(1, 5).cmp(&p(2, 0)), Ordering::Less);
    }

    #[test]
    fn angle_examples() {
        let ord = angle_compare(p(0, 0), p(1, 1), p(2, 2), p(2, 0)).unwrap();
        assert_eq!(ord, Ordering::Greater);
        let ord = angle_compare(p(0, 0), p(1, 0), p(2, 1), p(2, -1)).unwrap();
        assert_eq!(ord, Ordering::Greater);
        let ord = angle_compare(p(0, 1), p(1, 1), p(2, 1), p(3, 1)).unwrap();
        assert_eq!(ord, Ordering::Less);
    }

    #[test]
    fn angle_rejects_pivot() {
        assert!(angle_compare(p(0, 0), p(1, 1), p(1, 1), p(2, 0)).is_err());
        assert!(angle_compare(p(0, 0), p(1, 1), p(2, 0), p(1, 1)).is_err());
        assert!(angle_compare(p(1, 1), p(1, 1), p(2, 2), p(2, 0)).is_err());
    }

    #[test]
    fn angle_collinear_tiebreak_matches_hull() {
        // The winner from (1,1) must be the next vertex of the upper hull of
        // {(0,1),(1,1),(2,1),(3,1)}, which keeps only the endpoints.
        let pts = [p(0, 1), p(1, 1), p(2, 1), p(3, 1)];
        let best = pts[2..]
            .iter()
            .copied()
            .max_by(|&u, &v| angle_compare(pts[0], pts[1], u, v).unwrap())
            .unwrap();
        assert_eq!(best, p(3, 1));
    }

    #[test]
    fn dualize_examples() {
        let l = dualize(p(0, 0), Rational::from_int(0));
        assert_eq!((l.slope(), l.offset()), (Rational::from_int(0), 0));
        let l = dualize(p(3, 5), Rational::from_int(0));
        assert_eq!((l.slope(), l.offset()), (Rational::from_int(3), 5));
        let l = dualize(p(3, 5), Rational::from_int(2));
        assert_eq!((l.slope(), l.offset()), (Rational::from_int(1), 5));
        assert_eq!(l.eval(Rational::from_int(5)), Rational::from_int(0));
    }

    #[test]
    fn rational_is_reduced() {
        let r = Rational::new(6, -4);
        assert_eq!((r.numer(), r.denom()), (-3, 2));
        assert_eq!(Rational::midpoint(1, 2), Rational::new(3, 2));
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert_eq!(Rational::new(1, 3) + Rational::new(1, 6), Rational::new(1, 2));
        assert_eq!(Rational::new(3, 2).cmp_int(1), Ordering::Greater);
    }

    /// Independent ranking of a direction by the angle it sweeps from the
    /// reversed incoming edge, via the exact cotangent of its clockwise turn
    /// from `d` within each open half.
    fn turn_key(d: (i128, i128), w: (i128, i128)) -> (u8, Option<Rational>, i128) {
        let c = d.0 * w.1 - d.1 * w.0;
        let dot = d.0 * w.0 + d.1 * w.1;
        let len = w.0 * w.0 + w.1 * w.1;
        if c > 0 {
            (0, Some(-Rational::new(dot, -c)), -len)
        } else if c == 0 && dot > 0 {
            (1, None, -len)
        } else if c < 0 {
            (2, Some(-Rational::new(dot, -c)), -len)
        } else {
            (3, None, -len)
        }
    }

    fn oracle_cmp(ps: Point, pc: Point, u: Point, v: Point) -> Ordering {
        let d = delta(ps, pc);
        // lower key ranks higher
        turn_key(d, delta(pc, v)).cmp(&turn_key(d, delta(pc, u)))
    }

    fn small_point() -> impl Strategy<Value = Point> {
        (-50i64..50, -50i64..50).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric(a in small_point(), b in small_point(), c in small_point()) {
            let o1 = orientation(a, b, c);
            let o2 = orientation(a, c, b);
            let flipped = match o1 {
                Turn::Left => Turn::Right,
                Turn::Right => Turn::Left,
                Turn::Collinear => Turn::Collinear,
            };
            prop_assert_eq!(o2, flipped);
        }

        #[test]
        fn orientation_translation_invariant(
            a in small_point(), b in small_point(), c in small_point(),
            tx in -1_000_000i64..1_000_000, ty in -1_000_000i64..1_000_000,
        ) {
            let t = |q: Point| Point::new(q.x + tx, q.y + ty);
            prop_assert_eq!(orientation(a, b, c), orientation(t(a), t(b), t(c)));
        }

        #[test]
        fn dominance_is_strict_partial_order(a in small_point(), b in small_point(), c in small_point()) {
            prop_assert!(!dominates(a, a));
            if dominates(a, b) && dominates(b, c) {
                prop_assert!(dominates(a, c));
            }
            if dominates(a, b) {
                prop_assert!(!dominates(b, a));
            }
        }

        #[test]
        fn dual_slopes_straddle_separator(a in small_point(), b in small_point()) {
            prop_assume!(a.x != b.x);
            let (l, r) = if a.x < b.x { (a, b) } else { (b, a) };
            let xl = Rational::midpoint(l.x, r.x);
            prop_assert!(dualize(l, xl).slope().signum() < 0);
            prop_assert!(dualize(r, xl).slope().signum() > 0);
        }

        #[test]
        fn angle_order_is_total_and_matches_oracle(
            ps in small_point(), pc in small_point(),
            cands in proptest::collection::vec(small_point(), 5),
        ) {
            prop_assume!(ps != pc);
            let mut cands = cands;
            cands.sort();
            cands.dedup();
            cands.retain(|&q| q != pc);
            for &u in &cands {
                for &v in &cands {
                    let got = angle_compare(ps, pc, u, v).unwrap();
                    prop_assert_eq!(got, oracle_cmp(ps, pc, u, v));
                    prop_assert_eq!(got.reverse(), angle_compare(ps, pc, v, u).unwrap());
                    if u != v {
                        prop_assert_ne!(got, Ordering::Equal);
                    }
                    for &w in &cands {
                        let vw = angle_compare(ps, pc, v, w).unwrap();
                        if got == Ordering::Greater && vw == Ordering::Greater {
                            prop_assert_eq!(angle_compare(ps, pc, u, w).unwrap(), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }
}
