//! Simulated quantum subroutines.
//!
//! Each subroutine computes its answer classically over the oracle and
//! charges the query cost its quantum counterpart would incur to a
//! [`CostLedger`].

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, Rational};
use crate::oracle::{BlockView, OracleError, SortedPointSet};

const DEFAULT_LP_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QsimError {
    #[error("linear program needs points on both sides of the separator")]
    EmptySide,
    #[error("point {0} lies on the wrong side of the separator")]
    NotSeparated(Point),
    #[error("separator {0} has a denominator too large for exact evaluation")]
    Precision(Rational),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimMode {
    #[default]
    Analytic,
    /// Also trace the threshold search of every max-finding call.
    MonteCarlo(u64),
}

/// Summary of one guess of an output-size doubling loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassRecord {
    pub guess: usize,
    pub blocks: usize,
    pub qmax_calls: u64,
    pub qlp_calls: u64,
    pub found: usize,
    pub overflowed: bool,
}

/// Charged quantum cost of one run, kept apart from actual classical reads.
#[derive(Debug, Clone)]
pub struct CostLedger {
    pub qmax_calls: u64,
    pub qlp_calls: u64,
    pub qprep_calls: u64,
    pub sqrt_units: u64,
    pub polylog_units: u64,
    pub mc_units: u64,
    pub classical_queries: u64,
    pub passes: Vec<PassRecord>,
    c: f64,
    mode: SimMode,
    mc_rng: Option<ChaCha8Rng>,
    lp_seed: u64,
}

/// The serialized form of a ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub qmax_calls: u64,
    pub qlp_calls: u64,
    pub qprep_calls: u64,
    pub sqrt_units: u64,
    pub polylog_units: u64,
    pub mc_units: u64,
    pub classical_queries: u64,
}

impl Default for CostLedger {
    fn default() -> Self {
        CostLedger::new(SimMode::Analytic)
    }
}

impl CostLedger {
    pub fn new(mode: SimMode) -> Self {
        CostLedger {
            qmax_calls: 0,
            qlp_calls: 0,
            qprep_calls: 0,
            sqrt_units: 0,
            polylog_units: 0,
            mc_units: 0,
            classical_queries: 0,
            passes: Vec::new(),
            c: 1.0,
            mode,
            mc_rng: match mode {
                SimMode::Analytic => None,
                SimMode::MonteCarlo(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
            lp_seed: DEFAULT_LP_SEED,
        }
    }

    /// Panics unless `c` is finite and positive.
    pub fn with_multiplier(mut self, c: f64) -> Self {
        assert!(c.is_finite() && c > 0.0, "multiplier must be positive");
        self.c = c;
        self
    }

    pub fn with_lp_seed(mut self, seed: u64) -> Self {
        self.lp_seed = seed;
        self
    }

    pub fn mode(&self) -> SimMode {
        self.mode
    }

    pub fn multiplier(&self) -> f64 {
        self.c
    }

    pub fn charge_prep(&mut self) {
        self.qprep_calls += 1;
    }

    /// Grover units for one max-finding call over `m` elements: `ceil(c * sqrt(m))`.
    pub fn grover_units(&self, m: usize) -> u64 {
        if self.c == 1.0 {
            ceil_sqrt(m as u64)
        } else {
            (self.c * (m as f64).sqrt()).ceil() as u64
        }
    }

    /// Headline cost: Grover units plus LP units.
    pub fn total_units(&self) -> u64 {
        self.sqrt_units + self.polylog_units
    }

    /// Guess of the last doubling pass, if any ran.
    pub fn final_guess(&self) -> Option<usize> {
        self.passes.last().map(|p| p.guess)
    }

    pub fn summary(&self) -> LedgerSummary {
        LedgerSummary {
            qmax_calls: self.qmax_calls,
            qlp_calls: self.qlp_calls,
            qprep_calls: self.qprep_calls,
            sqrt_units: self.sqrt_units,
            polylog_units: self.polylog_units,
            mc_units: self.mc_units,
            classical_queries: self.classical_queries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("ledger summary serializes")
    }

    /// Adds the counters of `other` into `self`; passes are appended.
    pub fn absorb(&mut self, other: &CostLedger) {
        self.qmax_calls += other.qmax_calls;
        self.qlp_calls += other.qlp_calls;
        self.qprep_calls += other.qprep_calls;
        self.sqrt_units += other.sqrt_units;
        self.polylog_units += other.polylog_units;
        self.mc_units += other.mc_units;
        self.classical_queries += other.classical_queries;
        self.passes.extend_from_slice(&other.passes);
    }

    fn next_lp_seed(&self) -> u64 {
        self.lp_seed.wrapping_add(self.qlp_calls)
    }
}

/// Smallest `r` with `r * r >= x`.
pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// `ceil(sqrt(m / t))` in exact integer arithmetic.
fn ceil_sqrt_ratio(m: u64, t: u64) -> u64 {
    ceil_sqrt(m.div_ceil(t))
}

/// LP units for one bridge program over `m` points: `ceil(sqrt(m) * log2(max(m, 2))^2)`.
pub fn lp_units(m: usize) -> u64 {
    let mf = m as f64;
    let lg = mf.max(2.0).log2();
    (mf.sqrt() * lg * lg).ceil() as u64
}

fn scan_best<F, C>(points: &[Point], marked: &F, ord: &C) -> Option<Point>
where
    F: Fn(Point) -> bool,
    C: Fn(Point, Point) -> Ordering,
{
    let mut best: Option<Point> = None;
    for &p in points {
        if !marked(p) {
            continue;
        }
        match best {
            Some(b) if ord(p, b) != Ordering::Greater => {}
            _ => best = Some(p),
        }
    }
    best
}

/// Maximum of the marked points of a block under `ord`.
///
/// Charges one call of `ceil(c * sqrt(m))` units; the simulation itself reads
/// all `m` points through the oracle. In Monte-Carlo mode the threshold search
/// is also traced and its cost added to `mc_units`.
pub fn qmax<F, C>(
    o: &SortedPointSet,
    view: &BlockView,
    marked: F,
    ord: C,
    ledger: &mut CostLedger,
) -> Result<Option<Point>, QsimError>
where
    F: Fn(Point) -> bool,
    C: Fn(Point, Point) -> Ordering,
{
    let block = o.query_range(view.lo, view.hi)?;
    ledger.qmax_calls += 1;
    ledger.sqrt_units += ledger.grover_units(block.len());
    let best = scan_best(&block, &marked, &ord);
    if let Some(rng) = ledger.mc_rng.as_mut() {
        let (traced, units) = threshold_trace(&block, &marked, &ord, rng);
        debug_assert_eq!(traced, best);
        ledger.mc_units += units;
    }
    Ok(best)
}

/// Minimum of the marked points of a block under `ord`; charged like [`qmax`].
pub fn qmin<F, C>(
    o: &SortedPointSet,
    view: &BlockView,
    marked: F,
    ord: C,
    ledger: &mut CostLedger,
) -> Result<Option<Point>, QsimError>
where
    F: Fn(Point) -> bool,
    C: Fn(Point, Point) -> Ordering,
{
    qmax(o, view, marked, |a, b| ord(a, b).reverse(), ledger)
}

/// Traces the threshold search for the maximum over one block.
///
/// The search first samples a uniformly random marked element, which costs
/// `ceil(sqrt(m / k))` for `k` marked elements. While `t > 0` marked elements
/// beat the current threshold it pays `ceil(sqrt(m / t))` and jumps to a
/// uniformly random one of them. Returns the optimum and the total charge.
pub fn qmax_montecarlo<F, C, R>(
    o: &SortedPointSet,
    view: &BlockView,
    marked: F,
    ord: C,
    rng: &mut R,
) -> Result<(Option<Point>, u64), QsimError>
where
    F: Fn(Point) -> bool,
    C: Fn(Point, Point) -> Ordering,
    R: Rng + ?Sized,
{
    let block = o.query_range(view.lo, view.hi)?;
    Ok(threshold_trace(&block, &marked, &ord, rng))
}

fn threshold_trace<F, C, R>(block: &[Point], marked: &F, ord: &C, rng: &mut R) -> (Option<Point>, u64)
where
    F: Fn(Point) -> bool,
    C: Fn(Point, Point) -> Ordering,
    R: Rng + ?Sized,
{
    let m = block.len() as u64;
    let mut ranked: Vec<Point> = block.iter().copied().filter(|&p| marked(p)).collect();
    if ranked.is_empty() {
        return (None, 0);
    }
    ranked.sort_by(|&a, &b| ord(b, a));
    // better[i]: how many marked elements strictly beat ranked[i]
    let mut better = vec![0usize; ranked.len()];
    for i in 1..ranked.len() {
        better[i] = if ord(ranked[i - 1], ranked[i]) == Ordering::Equal {
            better[i - 1]
        } else {
            i
        };
    }
    let mut units = ceil_sqrt_ratio(m, ranked.len() as u64);
    let mut cur = rng.gen_range(0..ranked.len());
    while better[cur] > 0 {
        let t = better[cur];
        units += ceil_sqrt_ratio(m, t as u64);
        cur = rng.gen_range(0..t);
    }
    // better[cur] is also the index of the first of cur's ties
    (Some(ranked[better[cur]]), units)
}

/// Constraint `y <= a * u - b` in the dual plane, with `u` a positive
/// rescaling of the dual x-axis so that `a` is an integer.
#[derive(Debug, Clone, Copy)]
struct DualConstraint {
    a: i128,
    b: i128,
    point: Point,
}

/// Fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        if den < 0 {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    fn cmp(&self, other: &Frac) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Vertex of the feasible region, as the intersection of two constraints.
#[derive(Debug, Clone, Copy)]
struct Vertex {
    first: DualConstraint,
    u: Frac,
}

impl Vertex {
    fn new(c1: DualConstraint, c2: DualConstraint) -> Self {
        Vertex {
            first: c1,
            u: Frac::new(c1.b - c2.b, c1.a - c2.a),
        }
    }

    /// How the vertex height compares with constraint `c` at the vertex:
    /// `Greater` means the vertex violates `c`.
    fn against(&self, c: &DualConstraint) -> Ordering {
        let lhs = (self.first.a - c.a) * self.u.num;
        let rhs = (self.first.b - c.b) * self.u.den;
        lhs.cmp(&rhs)
    }
}

/// Highest point of `{y <= a_k u - b_k}` restricted to the line of `k`,
/// against the constraints in `prior`.
fn optimum_on_line(k: DualConstraint, prior: &[DualConstraint]) -> Vertex {
    let mut best: Option<(Frac, DualConstraint)> = None;
    for &j in prior {
        let bound = match (k.a > 0, j.a.cmp(&k.a)) {
            (true, Ordering::Less) | (false, Ordering::Greater) => Frac::new(k.b - j.b, k.a - j.a),
            _ => continue,
        };
        let tighter = match &best {
            None => true,
            // maximizing u when a_k > 0: keep the smallest upper bound
            Some((cur, _)) if k.a > 0 => bound.cmp(cur) == Ordering::Less,
            Some((cur, _)) => bound.cmp(cur) == Ordering::Greater,
        };
        if tighter {
            best = Some((bound, j));
        }
    }
    let (_, j) = best.expect("both slope signs are present among prior constraints");
    Vertex::new(k, j)
}

/// Upper-hull edge of `left ∪ right` crossing the vertical line `x = xl`.
///
/// Solves the dual program `max y s.t. y <= (p.x - xl) x - p.y` exactly by
/// seeded randomized incremental insertion. Returns the leftmost and
/// rightmost points whose constraints are tight at the optimum.
pub fn bridge_lp(left: &[Point], right: &[Point], xl: Rational, seed: u64) -> Result<(Point, Point), QsimError> {
    if left.is_empty() || right.is_empty() {
        return Err(QsimError::EmptySide);
    }
    if xl.denom() > 1 << 20 {
        return Err(QsimError::Precision(xl));
    }
    for &p in left {
        if xl.cmp_int(p.x) != Ordering::Greater {
            return Err(QsimError::NotSeparated(p));
        }
    }
    for &p in right {
        if xl.cmp_int(p.x) != Ordering::Less {
            return Err(QsimError::NotSeparated(p));
        }
    }
    let (num, den) = (xl.numer(), xl.denom());
    let mut cons: Vec<DualConstraint> = left
        .iter()
        .chain(right)
        .map(|&p| DualConstraint {
            a: den * p.x as i128 - num,
            b: p.y as i128,
            point: p,
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cons.shuffle(&mut rng);
    let neg = cons.iter().position(|c| c.a < 0).expect("left side is non-empty");
    cons.swap(0, neg);
    let pos = cons.iter().position(|c| c.a > 0).expect("right side is non-empty");
    cons.swap(1, pos);

    let mut v = Vertex::new(cons[0], cons[1]);
    for k in 2..cons.len() {
        if v.against(&cons[k]) == Ordering::Greater {
            v = optimum_on_line(cons[k], &cons[..k]);
        }
    }

    let mut tight = cons.iter().filter(|c| v.against(c) == Ordering::Equal).map(|c| c.point);
    let first = tight.next().expect("the defining constraints are tight");
    let (lo, hi) = tight.fold((first, first), |(lo, hi), p| (lo.min(p), hi.max(p)));
    Ok((lo, hi))
}

/// Simulated quantum LP: the upper-hull edge of two blocks crossing `x = xl`.
///
/// Charges `ceil(sqrt(m) * log2(m)^2)` LP units plus two Grover calls' worth of
/// units for recovering the edge endpoints.
pub fn qlp(
    xl: Rational,
    left: &BlockView,
    right: &BlockView,
    o: &SortedPointSet,
    ledger: &mut CostLedger,
) -> Result<(Point, Point), QsimError> {
    if left.is_empty() || right.is_empty() {
        return Err(QsimError::EmptySide);
    }
    let lp = o.query_range(left.lo, left.hi)?;
    let rp = o.query_range(right.lo, right.hi)?;
    let m = lp.len() + rp.len();
    let seed = ledger.next_lp_seed();
    let edge = bridge_lp(&lp, &rp, xl, seed)?;
    ledger.qlp_calls += 1;
    ledger.polylog_units += lp_units(m);
    ledger.sqrt_units += 2 * ledger.grover_units(m);
    Ok(edge)
}
