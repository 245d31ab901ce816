//! The input oracle: a lexicographically sorted point array that counts every
//! read, plus the block addressing used by the combine-and-conquer algorithms.

use std::cell::Cell;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::geom::{Point, COORD_LIMIT};
use crate::qsim::CostLedger;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("points not sorted lexicographically at index {0}")]
    NotSorted(usize),
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("duplicate x-coordinate at index {0}")]
    DuplicateX(usize),
    #[error("coordinate out of range at index {0} (limit {COORD_LIMIT})")]
    OutOfRange(usize),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("block {j} invalid for {h} blocks over {n} points")]
    BadBlockIndex { j: usize, h: usize, n: usize },
}

/// Sorted input behind a counting accessor.
///
/// The counter lives in a `Cell`, so a set is usable through shared
/// references but is not `Sync`: each concurrent run owns its own instance.
#[derive(Debug)]
pub struct SortedPointSet {
    points: Vec<Point>,
    queries: Cell<u64>,
    distinct_x: bool,
}

impl SortedPointSet {
    pub fn load(points: Vec<Point>, require_distinct_x: bool) -> Result<Self, OracleError> {
        let mut distinct_x = true;
        for (i, p) in points.iter().enumerate() {
            if !p.in_bounds() {
                return Err(OracleError::OutOfRange(i));
            }
            if i == 0 {
                continue;
            }
            let prev = points[i - 1];
            if prev == *p {
                return Err(OracleError::DuplicatePoint(i));
            }
            if prev > *p {
                return Err(OracleError::NotSorted(i));
            }
            if prev.x == p.x {
                if require_distinct_x {
                    return Err(OracleError::DuplicateX(i));
                }
                distinct_x = false;
            }
        }
        Ok(SortedPointSet {
            points,
            queries: Cell::new(0),
            distinct_x,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether x-coordinates are strictly increasing.
    pub fn distinct_x(&self) -> bool {
        self.distinct_x
    }

    pub fn query(&self, i: usize) -> Result<Point, OracleError> {
        let p = self.points.get(i).copied().ok_or(OracleError::IndexOutOfRange {
            index: i,
            n: self.points.len(),
        })?;
        self.queries.set(self.queries.get() + 1);
        Ok(p)
    }

    /// Reads a half-open index range, one counted query per element.
    pub fn query_range(&self, lo: usize, hi: usize) -> Result<Vec<Point>, OracleError> {
        (lo..hi).map(|i| self.query(i)).collect()
    }

    /// Reads every point, one counted query per element.
    pub fn query_all(&self) -> Vec<Point> {
        self.queries.set(self.queries.get() + self.points.len() as u64);
        self.points.clone()
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn reset_queries(&self) {
        self.queries.set(0);
    }

    /// The underlying points, without charging any queries. Meant for
    /// oracles and reporting, never for the algorithms under measurement.
    pub fn points_uncounted(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Addresses block `j` of `h` and charges one preparation to `ledger`.
    pub fn qprep(&self, j: usize, h: usize, ledger: &mut CostLedger) -> Result<BlockView, OracleError> {
        let view = BlockView::new(self.len(), j, h)?;
        ledger.charge_prep();
        Ok(view)
    }
}

/// One block of a partition of `[0, n)` into `h` contiguous runs of
/// `ceil(n / h)` indices; trailing blocks may be short or empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockView {
    pub j: usize,
    pub h: usize,
    pub lo: usize,
    pub hi: usize,
}

impl BlockView {
    pub fn new(n: usize, j: usize, h: usize) -> Result<Self, OracleError> {
        if h == 0 || h > n.max(1) || j >= h {
            return Err(OracleError::BadBlockIndex { j, h, n });
        }
        let width = n.div_ceil(h);
        Ok(BlockView {
            j,
            h,
            lo: (j * width).min(n),
            hi: ((j + 1) * width).min(n),
        })
    }

    /// The whole index range as a single block.
    pub fn whole(n: usize) -> Self {
        BlockView {
            j: 0,
            h: 1,
            lo: 0,
            hi: n,
        }
    }

    pub fn m(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.lo..self.hi).contains(&i)
    }
}

/// Number of non-empty blocks when `n` points are split into `h` blocks.
pub fn nonempty_blocks(n: usize, h: usize) -> usize {
    if n == 0 {
        return 0;
    }
    n.div_ceil(n.div_ceil(h))
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing point count")]
    MissingCount,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected {expected} points, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

/// Parses the point file format: `#` comment lines, a count line, then one
/// `x y` line per point.
pub fn read_points<R: BufRead>(reader: R) -> Result<Vec<Point>, FormatError> {
    let mut expected: Option<usize> = None;
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: &str| FormatError::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        match expected {
            None => {
                let n = line.trim().parse::<usize>().map_err(|_| parse_err("bad point count"))?;
                expected = Some(n);
                points.reserve(n);
            }
            Some(n) => {
                if line.is_empty() {
                    continue;
                }
                if points.len() == n {
                    return Err(parse_err("more points than the stated count"));
                }
                let mut parts = line.split(' ');
                let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(parse_err("expected \"x y\""));
                };
                let x = xs.parse::<i64>().map_err(|_| parse_err("bad x"))?;
                let y = ys.parse::<i64>().map_err(|_| parse_err("bad y"))?;
                points.push(Point::new(x, y));
            }
        }
    }
    let n = expected.ok_or(FormatError::MissingCount)?;
    if points.len() != n {
        return Err(FormatError::CountMismatch {
            expected: n,
            found: points.len(),
        });
    }
    Ok(points)
}

/// Writes the point file format; each entry of `comments` becomes one
/// `# ...` line ahead of the data.
pub fn write_points<W: Write>(mut w: W, points: &[Point], comments: &[String]) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "{}", points.len())?;
    for p in points {
        writeln!(w, "{} {}", p.x, p.y)?;
    }
    w.flush()
}
