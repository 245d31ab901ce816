//! Upper and full convex hulls of x-sorted points.
//!
//! The combine-and-conquer hull finds the upper-hull edges that cross block
//! boundaries first (bridges, via a Graham-style scan over blocks), then
//! marches inside each block between the bridges that enter and leave it.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::geom::{angle_compare, direction_turn, orientation, Point, Rational, Turn};
use crate::oracle::{nonempty_blocks, BlockView, OracleError, SortedPointSet};
use crate::qsim::{bridge_lp, qlp, qmax, CostLedger, PassRecord, QsimError, SimMode};

pub const INITIAL_GUESS: usize = 4;

/// Seed for the LPs of the classical divide-and-conquer hull.
const CLASSICAL_LP_SEED: u64 = 0x00c1_a551_ca1d;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("hull algorithms need distinct x-coordinates")]
    NeedsDistinctX,
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("bridge needs blocks i < j, got {0} and {1}")]
    BadBlockPair(usize, usize),
    #[error("output budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

impl From<OracleError> for HullError {
    fn from(e: OracleError) -> Self {
        HullError::Qsim(e.into())
    }
}

/// Upper-hull edge whose endpoints lie in two different blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bridge {
    pub p_s: Point,
    pub p_f: Point,
    pub left_block: usize,
    pub right_block: usize,
}

impl Bridge {
    /// Turn from this bridge's direction to `next`'s direction.
    pub fn turn_to(&self, next: &Bridge) -> Turn {
        direction_turn(self.p_s, self.p_f, next.p_s, next.p_f)
    }

    /// True if no point of `points` lies strictly above the bridge's line.
    pub fn nothing_above(&self, points: &[Point]) -> bool {
        points.iter().all(|&q| orientation(self.p_s, self.p_f, q) != Turn::Left)
    }
}

/// Vertices of an upper hull, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HullChain(pub Vec<Point>);

impl HullChain {
    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Strictly increasing x and a strict right turn at every interior vertex.
    pub fn is_strictly_convex(&self) -> bool {
        self.0.windows(2).all(|w| w[0].x < w[1].x)
            && self.0.windows(3).all(|w| orientation(w[0], w[1], w[2]) == Turn::Right)
    }
}

/// Stack of bridges built by [`find_bridge_edges`], bottom first.
#[derive(Debug, Clone, Default)]
pub struct BridgeStack(Vec<Bridge>);

impl BridgeStack {
    pub fn push(&mut self, b: Bridge) {
        self.0.push(b);
    }

    pub fn pop(&mut self) -> Option<Bridge> {
        self.0.pop()
    }

    pub fn top(&self) -> Option<&Bridge> {
        self.0.last()
    }

    pub fn into_vec(self) -> Vec<Bridge> {
        self.0
    }
}

/// Andrew's monotone chain, upper half, over points sorted by x.
pub fn monotone_chain_upper(points: &[Point]) -> HullChain {
    let mut chain: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        while chain.len() >= 2 && orientation(chain[chain.len() - 2], chain[chain.len() - 1], p) != Turn::Right {
            chain.pop();
        }
        chain.push(p);
    }
    HullChain(chain)
}

/// Full hull from the upper chains of the points and of their reflection,
/// listed clockwise starting from the leftmost point.
pub fn join_chains(upper: &[Point], lower_reflected: &[Point]) -> Vec<Point> {
    let mut poly = upper.to_vec();
    if lower_reflected.len() > 2 {
        poly.extend(
            lower_reflected[1..lower_reflected.len() - 1]
                .iter()
                .rev()
                .map(|p| p.reflect_y()),
        );
    }
    poly
}

fn reflect_all(points: &[Point]) -> Vec<Point> {
    points.iter().map(|p| p.reflect_y()).collect()
}

/// Full hull of x-sorted points by monotone chain, clockwise.
pub fn monotone_chain_full(points: &[Point]) -> Vec<Point> {
    let upper = monotone_chain_upper(points);
    let lower = monotone_chain_upper(&reflect_all(points));
    join_chains(&upper.0, &lower.0)
}

fn require_distinct_x(o: &SortedPointSet) -> Result<(), HullError> {
    if o.distinct_x() {
        Ok(())
    } else {
        Err(HullError::NeedsDistinctX)
    }
}

/// Divide-and-conquer upper hull whose merge step solves the bridge LP.
pub fn classical_upper_hull(o: &SortedPointSet) -> Result<HullChain, HullError> {
    require_distinct_x(o)?;
    let pts = o.query_all();
    Ok(HullChain(dc_upper(&pts)?))
}

fn dc_upper(points: &[Point]) -> Result<Vec<Point>, HullError> {
    if points.len() <= 1 {
        return Ok(points.to_vec());
    }
    let (s1, s2) = points.split_at(points.len().div_ceil(2));
    let u1 = dc_upper(s1)?;
    let u2 = dc_upper(s2)?;
    let xl = Rational::midpoint(s1[s1.len() - 1].x, s2[0].x);
    let (v, w) = bridge_lp(&u1, &u2, xl, CLASSICAL_LP_SEED)?;
    let mut merged: Vec<Point> = u1.into_iter().take_while(|p| p.x <= v.x).collect();
    merged.extend(u2.into_iter().skip_while(|p| p.x < w.x));
    Ok(merged)
}

/// Bridge between blocks `i < j` of `h`: the upper-hull edge of their union
/// crossing the vertical line midway between them.
pub fn bridge(o: &SortedPointSet, i: usize, j: usize, h: usize, ledger: &mut CostLedger) -> Result<Bridge, HullError> {
    if i >= j {
        return Err(HullError::BadBlockPair(i, j));
    }
    let left = o.qprep(i, h, ledger)?;
    let right = o.qprep(j, h, ledger)?;
    if left.is_empty() || right.is_empty() {
        return Err(QsimError::EmptySide.into());
    }
    let last = o.query(left.hi - 1)?;
    let first = o.query(right.lo)?;
    let xl = Rational::midpoint(last.x, first.x);
    let (p_s, p_f) = qlp(xl, &left, &right, o, ledger)?;
    Ok(Bridge {
        p_s,
        p_f,
        left_block: i,
        right_block: j,
    })
}

/// Bridges of the partition into `h` blocks, left to right.
///
/// Collinear consecutive bridges are treated like a left turn, so the
/// returned bridges meet at strict right turns.
pub fn find_bridge_edges(o: &SortedPointSet, h: usize, ledger: &mut CostLedger) -> Result<Vec<Bridge>, HullError> {
    require_distinct_x(o)?;
    let blocks = nonempty_blocks(o.len(), h);
    if blocks < 2 {
        return Ok(Vec::new());
    }
    let mut stack = BridgeStack::default();
    stack.push(bridge(o, 0, 1, h, ledger)?);
    for i in 2..blocks {
        let mut cur = bridge(o, i - 1, i, h, ledger)?;
        while let Some(top) = stack.top() {
            if top.turn_to(&cur) == Turn::Right {
                break;
            }
            let popped = stack.pop().expect("top exists");
            cur = bridge(o, popped.left_block, i, h, ledger)?;
        }
        stack.push(cur);
    }
    Ok(stack.into_vec())
}

/// Where a block march starts and stops. `tail` is the start of the
/// incoming bridge, if there is one.
struct Anchors {
    tail: Option<Point>,
    entry: Point,
    exit: Point,
}

/// Anchors of block `j`, or `None` if it hosts no bridge endpoint.
fn block_anchors(
    o: &SortedPointSet,
    j: usize,
    blocks: usize,
    bridges: &[Bridge],
) -> Result<Option<Anchors>, HullError> {
    let incoming = bridges.iter().find(|b| b.right_block == j);
    let outgoing = bridges.iter().find(|b| b.left_block == j);
    let entry = match incoming {
        Some(b) => Some((Some(b.p_s), b.p_f)),
        None if j == 0 => Some((None, o.query(0)?)),
        None => None,
    };
    let exit = match outgoing {
        Some(b) => Some(b.p_s),
        None if j + 1 == blocks => Some(o.query(o.len() - 1)?),
        None => None,
    };
    Ok(entry
        .zip(exit)
        .map(|((tail, entry), exit)| Anchors { tail, entry, exit }))
}

/// Upper-hull vertices strictly between the entry and exit anchors of block
/// `j`, found by a block-restricted Jarvis march.
///
/// Every vertex found must fit in `budget`; the march fails with
/// [`HullError::BudgetExceeded`] on the first one that does not.
pub fn block_jarvis(
    o: &SortedPointSet,
    j: usize,
    h: usize,
    bridges: &[Bridge],
    budget: &mut usize,
    ledger: &mut CostLedger,
) -> Result<Vec<Point>, HullError> {
    let blocks = nonempty_blocks(o.len(), h);
    let Some(Anchors {
        tail,
        entry: mut pc,
        exit: pf,
    }) = block_anchors(o, j, blocks, bridges)?
    else {
        return Ok(Vec::new());
    };
    let view = o.qprep(j, h, ledger)?;
    // with no incoming edge, pretend to arrive travelling straight up
    let mut ps = tail.unwrap_or(Point::new(pc.x, pc.y - 1));
    let mut found = Vec::new();
    while pc != pf {
        let (from, at) = (ps, pc);
        let next = qmax(
            o,
            &view,
            |p| p.x > at.x && p.x <= pf.x,
            |u, v| angle_compare(from, at, u, v).unwrap_or(Ordering::Equal),
            ledger,
        )?
        .expect("the exit anchor is always a candidate");
        if next != pf {
            if *budget == 0 {
                return Err(HullError::BudgetExceeded);
            }
            *budget -= 1;
            found.push(next);
        }
        ps = pc;
        pc = next;
    }
    Ok(found)
}

/// Result of a hull algorithm run together with its cost ledger.
#[derive(Debug, Clone)]
pub struct HullRun {
    pub chain: HullChain,
    pub ledger: CostLedger,
}

pub fn quantum_upper_hull(o: &SortedPointSet) -> Result<HullRun, HullError> {
    quantum_upper_hull_with(o, CostLedger::new(SimMode::Analytic))
}

/// Combine-and-conquer upper hull with output-size doubling.
pub fn quantum_upper_hull_with(o: &SortedPointSet, mut ledger: CostLedger) -> Result<HullRun, HullError> {
    require_distinct_x(o)?;
    let n = o.len();
    if n == 0 {
        return Err(HullError::TooFewPoints { need: 1, got: 0 });
    }
    let queries_before = o.queries();
    if n <= INITIAL_GUESS {
        let chain = monotone_chain_upper(&o.query_all());
        ledger.passes.push(PassRecord {
            guess: INITIAL_GUESS,
            blocks: 1,
            qmax_calls: 0,
            qlp_calls: 0,
            found: chain.len(),
            overflowed: false,
        });
        ledger.classical_queries += o.queries() - queries_before;
        return Ok(HullRun { chain, ledger });
    }

    let mut guess = INITIAL_GUESS;
    let chain = loop {
        let (qmax_before, qlp_before) = (ledger.qmax_calls, ledger.qlp_calls);
        let h = guess.min(n);
        let (vertices, overflowed) = hull_pass(o, h, guess, &mut ledger)?;
        ledger.passes.push(PassRecord {
            guess,
            blocks: nonempty_blocks(n, h),
            qmax_calls: ledger.qmax_calls - qmax_before,
            qlp_calls: ledger.qlp_calls - qlp_before,
            found: vertices.len(),
            overflowed,
        });
        if !overflowed {
            break HullChain(vertices);
        }
        guess *= 2;
    };
    ledger.classical_queries += o.queries() - queries_before;
    Ok(HullRun { chain, ledger })
}

/// One guess. Returns the vertices found and whether the budget overflowed.
fn hull_pass(
    o: &SortedPointSet,
    h: usize,
    guess: usize,
    ledger: &mut CostLedger,
) -> Result<(Vec<Point>, bool), HullError> {
    let bridges = find_bridge_edges(o, h, ledger)?;
    let mut vertices: BTreeSet<Point> = bridges.iter().flat_map(|b| [b.p_s, b.p_f]).collect();
    vertices.insert(o.query(0)?);
    vertices.insert(o.query(o.len() - 1)?);
    if vertices.len() > guess {
        return Ok((vertices.into_iter().collect(), true));
    }
    let mut budget = guess - vertices.len();
    for j in 0..nonempty_blocks(o.len(), h) {
        match block_jarvis(o, j, h, &bridges, &mut budget, ledger) {
            Ok(found) => vertices.extend(found),
            Err(HullError::BudgetExceeded) => {
                return Ok((vertices.into_iter().collect(), true));
            }
            Err(e) => return Err(e),
        }
    }
    // distinct x, so lexicographic order is left to right
    Ok((vertices.into_iter().collect(), false))
}

/// Full hull run: clockwise polygon starting at the leftmost point.
#[derive(Debug, Clone)]
pub struct PolygonRun {
    pub polygon: Vec<Point>,
    pub ledger: CostLedger,
}

/// Upper chain from the combine-and-conquer hull, lower chain from the same
/// algorithm run on the reflected input.
pub fn quantum_full_hull(o: &SortedPointSet) -> Result<PolygonRun, HullError> {
    quantum_full_hull_with(o, SimMode::Analytic)
}

pub fn quantum_full_hull_with(o: &SortedPointSet, mode: SimMode) -> Result<PolygonRun, HullError> {
    let upper = quantum_upper_hull_with(o, CostLedger::new(mode))?;
    let reflected = SortedPointSet::load(reflect_all(o.points_uncounted()), true)?;
    let lower_mode = match mode {
        SimMode::Analytic => SimMode::Analytic,
        SimMode::MonteCarlo(seed) => SimMode::MonteCarlo(seed.wrapping_add(1)),
    };
    let lower = quantum_upper_hull_with(&reflected, CostLedger::new(lower_mode))?;
    let mut ledger = upper.ledger;
    ledger.absorb(&lower.ledger);
    Ok(PolygonRun {
        polygon: join_chains(&upper.chain.0, &lower.chain.0),
        ledger,
    })
}

/// Classical divide-and-conquer for both chains, clockwise.
pub fn classical_full_hull(o: &SortedPointSet) -> Result<Vec<Point>, HullError> {
    let upper = classical_upper_hull(o)?;
    let reflected = SortedPointSet::load(reflect_all(o.points_uncounted()), true)?;
    let lower = classical_upper_hull(&reflected)?;
    Ok(join_chains(&upper.0, &lower.0))
}

/// Jarvis march over the whole set, one max-finding call per hull vertex.
pub fn quantum_jarvis_full(o: &SortedPointSet) -> Result<PolygonRun, HullError> {
    quantum_jarvis_full_with(o, CostLedger::new(SimMode::Analytic))
}

pub fn quantum_jarvis_full_with(o: &SortedPointSet, mut ledger: CostLedger) -> Result<PolygonRun, HullError> {
    let n = o.len();
    if n < 3 {
        return Err(HullError::TooFewPoints { need: 3, got: n });
    }
    let queries_before = o.queries();
    let view = BlockView::whole(n);
    let start = o.query(0)?;
    let mut polygon = vec![start];
    let mut ps = Point::new(start.x, start.y - 1);
    let mut pc = start;
    loop {
        let (from, at) = (ps, pc);
        let next = qmax(
            o,
            &view,
            |p| p != at,
            |u, v| angle_compare(from, at, u, v).unwrap_or(Ordering::Equal),
            &mut ledger,
        )?
        .expect("at least two distinct points");
        if next == start {
            break;
        }
        polygon.push(next);
        ps = pc;
        pc = next;
    }
    ledger.classical_queries += o.queries() - queries_before;
    Ok(PolygonRun { polygon, ledger })
}
