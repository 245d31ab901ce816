//! Maxima sets: the classical divide-and-conquer baseline and the
//! combine-and-conquer algorithm with output-size doubling.

use std::cmp::Ordering;

use thiserror::Error;

use crate::geom::{dominates, Point};
use crate::oracle::{nonempty_blocks, OracleError, SortedPointSet};
use crate::qsim::{qmax, CostLedger, PassRecord, QsimError, SimMode};

/// First output-size guess of the doubling loop.
pub const INITIAL_GUESS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaximaError {
    #[error("maxima algorithms need distinct x-coordinates")]
    NeedsDistinctX,
    #[error("output budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

impl From<OracleError> for MaximaError {
    fn from(e: OracleError) -> Self {
        MaximaError::Qsim(e.into())
    }
}

/// Points not dominated by any other input point, in increasing x.
///
/// With distinct x-coordinates the list is a staircase: x strictly increases
/// and y never increases.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MaximaList(pub Vec<Point>);

impl MaximaList {
    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_staircase(&self) -> bool {
        self.0.windows(2).all(|w| w[0].x < w[1].x && w[0].y >= w[1].y)
            && self.0.iter().all(|&p| self.0.iter().all(|&q| !dominates(q, p)))
    }
}

/// Divide-and-conquer maxima of points sorted by x with distinct x.
pub fn maxima_of_sorted(points: &[Point]) -> Vec<Point> {
    if points.len() <= 1 {
        return points.to_vec();
    }
    let (s1, s2) = points.split_at(points.len().div_ceil(2));
    let m1 = maxima_of_sorted(s1);
    let mut m2 = maxima_of_sorted(s2);
    // the first maximum of the right half is its tallest point
    let top = m2[0].y;
    let mut merged: Vec<Point> = m1.into_iter().filter(|p| p.y >= top).collect();
    merged.append(&mut m2);
    merged
}

pub fn classical_maxima(o: &SortedPointSet) -> Result<MaximaList, MaximaError> {
    if !o.distinct_x() {
        return Err(MaximaError::NeedsDistinctX);
    }
    let pts = o.query_all();
    Ok(MaximaList(maxima_of_sorted(&pts)))
}

/// Tallest-point order: by y, then x.
fn by_height(a: Point, b: Point) -> Ordering {
    (a.y, a.x).cmp(&(b.y, b.x))
}

/// Finds the maxima of block `j` that survive the block's tallest point
/// `tallest` and the right witness `right`.
///
/// Each found point must fit in `budget`; the call that would overrun it
/// fails with [`MaximaError::BudgetExceeded`]. Points are returned in
/// discovery order (right to left).
#[allow(clippy::too_many_arguments)]
pub fn complete_maxima_block(
    o: &SortedPointSet,
    j: usize,
    h: usize,
    tallest: Point,
    right: Option<Point>,
    budget: &mut usize,
    ledger: &mut CostLedger,
) -> Result<Vec<Point>, MaximaError> {
    let view = o.qprep(j, h, ledger)?;
    let mut found = Vec::new();
    let mut witness = right;
    loop {
        let marked = |p: Point| {
            !dominates(tallest, p)
                && match witness {
                    Some(w) => p < w && !dominates(w, p),
                    None => true,
                }
        };
        let Some(q) = qmax(o, &view, marked, |a: Point, b: Point| a.cmp(&b), ledger)? else {
            break;
        };
        if *budget == 0 {
            return Err(MaximaError::BudgetExceeded);
        }
        *budget -= 1;
        found.push(q);
        witness = Some(q);
    }
    Ok(found)
}

/// Result of one run of [`quantum_maxima`].
#[derive(Debug, Clone)]
pub struct MaximaRun {
    pub maxima: MaximaList,
    pub ledger: CostLedger,
}

pub fn quantum_maxima(o: &SortedPointSet) -> Result<MaximaRun, MaximaError> {
    quantum_maxima_with(o, CostLedger::new(SimMode::Analytic))
}

/// Combine-and-conquer maxima, charging into the supplied ledger.
pub fn quantum_maxima_with(o: &SortedPointSet, mut ledger: CostLedger) -> Result<MaximaRun, MaximaError> {
    if !o.distinct_x() {
        return Err(MaximaError::NeedsDistinctX);
    }
    let queries_before = o.queries();
    let n = o.len();
    let mut guess = INITIAL_GUESS;
    let maxima = loop {
        let qmax_before = ledger.qmax_calls;
        let h = guess.min(n.max(1));
        let blocks = nonempty_blocks(n, h);
        let (pts, overflowed) = maxima_pass(o, h, blocks, guess, &mut ledger)?;
        ledger.passes.push(PassRecord {
            guess,
            blocks,
            qmax_calls: ledger.qmax_calls - qmax_before,
            qlp_calls: 0,
            found: pts.len() + usize::from(overflowed),
            overflowed,
        });
        if !overflowed {
            break MaximaList(pts);
        }
        guess *= 2;
    };
    ledger.classical_queries += o.queries() - queries_before;
    Ok(MaximaRun { maxima, ledger })
}

/// One guess. The flag is set if more than `guess` maxima turned up, in
/// which case the points are only those found before the overrun.
fn maxima_pass(
    o: &SortedPointSet,
    h: usize,
    blocks: usize,
    guess: usize,
    ledger: &mut CostLedger,
) -> Result<(Vec<Point>, bool), MaximaError> {
    if blocks == 0 {
        return Ok((Vec::new(), false));
    }
    // combine: tallest point of every block, then the maxima of those
    let mut tallest = Vec::with_capacity(blocks);
    for j in 0..blocks {
        let view = o.qprep(j, h, ledger)?;
        let t = qmax(o, &view, |_| true, by_height, ledger)?.expect("non-empty block has a tallest point");
        tallest.push(t);
    }
    let tall_maxima = maxima_of_sorted(&tallest);

    // conquer
    let mut budget = guess;
    let mut out = Vec::new();
    for (j, &t) in tallest.iter().enumerate() {
        // every maximum of T right of T_j belongs to a later block
        let right = tall_maxima.iter().copied().find(|m| m.x > t.x);
        match complete_maxima_block(o, j, h, t, right, &mut budget, ledger) {
            Ok(mut found) => {
                found.reverse();
                out.append(&mut found);
            }
            Err(MaximaError::BudgetExceeded) => return Ok((out, true)),
            Err(e) => return Err(e),
        }
    }
    Ok((out, false))
}
