//! Seeded instance generators. Every generator returns points sorted
//! lexicographically with distinct x-coordinates.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{orientation, Point, Turn, COORD_LIMIT};
use crate::hull::monotone_chain_upper;
use crate::oracle::{write_points, OracleError, SortedPointSet};

/// Half-width of the sampling lattice for the region families.
pub const LATTICE_SCALE: i64 = 1 << 20;

/// Radius of the circle family.
const CIRCLE_RADIUS: f64 = (1u64 << 36) as f64;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    LowerBound,
    Circle,
    Parabola,
    Disk,
    Polygon,
    RandomSorted,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::LowerBound,
        Kind::Circle,
        Kind::Parabola,
        Kind::Disk,
        Kind::Polygon,
        Kind::RandomSorted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::LowerBound => "lowerbound",
            Kind::Circle => "circle",
            Kind::Parabola => "parabola",
            Kind::Disk => "disk",
            Kind::Polygon => "polygon",
            Kind::RandomSorted => "random_sorted",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GenError::InvalidSpec(format!("unknown kind {s:?}")))
    }
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: Kind,
    pub n: usize,
    /// Number of blocks; used by the lower-bound family only.
    pub h: usize,
    /// Side count; used by the polygon family only.
    pub k: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: Kind, n: usize) -> Self {
        GenSpec {
            kind,
            n,
            h: 1,
            k: 3,
            seed: 0,
        }
    }

    pub fn with_h(mut self, h: usize) -> Self {
        self.h = h;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::InvalidSpec("n must be at least 1".into()));
        }
        match self.kind {
            Kind::LowerBound if self.h == 0 => Err(GenError::InvalidSpec("lowerbound needs h >= 1".into())),
            Kind::LowerBound if self.n < 2 * self.h + 1 => Err(GenError::InvalidSpec(format!(
                "lowerbound needs n >= 2h+1 (n={}, h={})",
                self.n, self.h
            ))),
            Kind::Polygon if self.k < 3 => Err(GenError::InvalidSpec("polygon needs k >= 3".into())),
            Kind::Circle if self.n < 3 => Err(GenError::InvalidSpec("circle needs n >= 3".into())),
            _ => Ok(()),
        }
    }

    /// The metadata comment written ahead of generated data.
    pub fn header(&self) -> String {
        format!(
            "gen kind={} n={} h={} k={} seed={}",
            self.kind, self.n, self.h, self.k, self.seed
        )
    }
}

pub fn generate(spec: &GenSpec) -> Result<Vec<Point>, GenError> {
    spec.validate()?;
    match spec.kind {
        Kind::LowerBound => gen_lowerbound(spec.n, spec.h, spec.seed),
        Kind::Circle => gen_circle(spec.n),
        Kind::Parabola => gen_parabola(spec.n),
        Kind::Disk => gen_disk(spec.n, spec.seed),
        Kind::Polygon => gen_polygon(spec.n, spec.k, spec.seed),
        Kind::RandomSorted => gen_random_sorted(spec.n, spec.seed),
    }
}

pub fn generate_set(spec: &GenSpec) -> Result<SortedPointSet, GenError> {
    Ok(SortedPointSet::load(generate(spec)?, true)?)
}

/// Generates and writes an instance file with its metadata header.
pub fn write_instance(spec: &GenSpec, path: &Path) -> Result<Vec<Point>, GenError> {
    let points = generate(spec)?;
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_points(file, &points, &[spec.header()])?;
    Ok(points)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_bounds(points: &[Point]) -> Result<(), GenError> {
    match points.iter().find(|p| !p.in_bounds()) {
        Some(p) => Err(GenError::Infeasible(format!(
            "point {p} exceeds the coordinate limit {COORD_LIMIT}"
        ))),
        None => Ok(()),
    }
}

/// Lower-bound family: `h + 1` partition points on `y = -x^2`, one hidden
/// hull vertex strictly between each chord and the arc, and decoys strictly
/// below the chords. The upper hull has exactly `2h + 1` vertices.
pub fn gen_lowerbound(n: usize, h: usize, seed: u64) -> Result<Vec<Point>, GenError> {
    GenSpec::new(Kind::LowerBound, n).with_h(h).validate()?;
    let mut rng = rng_for(seed);
    let interior = n - (h + 1);
    // points per gap, hidden point included; every gap gets at least one
    let counts: Vec<usize> = (0..h).map(|g| interior / h + usize::from(g < interior % h)).collect();
    // one spare slot per gap leaves room for a hidden point even when alone
    let width: i64 = counts.iter().map(|&c| c as i64 + 2).sum();
    let mut a = -(width / 2);
    let mut points = Vec::with_capacity(n);
    points.push(Point::new(a, -a * a));
    for &count in &counts {
        let b = a + count as i64 + 2;
        let chord = |x: i64| -(a + b) * x + a * b;
        let slots = sample(&mut rng, count + 1, count);
        let mut xs: Vec<i64> = slots.iter().map(|s| a + 1 + s as i64).collect();
        xs.sort_unstable();
        let hidden = xs[rng.gen_range(0..count)];
        for x in xs {
            let y = if x == hidden {
                let gap = (x - a) * (b - x);
                if gap < 2 {
                    return Err(GenError::Infeasible(format!("no room above chord at x={x}")));
                }
                chord(x) + rng.gen_range(1..gap)
            } else {
                chord(x) - rng.gen_range(1..=(b - a))
            };
            points.push(Point::new(x, y));
        }
        points.push(Point::new(b, -b * b));
        a = b;
    }
    check_bounds(&points)?;
    Ok(points)
}

/// `n` points on a large upper semicircle, all of them upper-hull vertices.
pub fn gen_circle(n: usize) -> Result<Vec<Point>, GenError> {
    GenSpec::new(Kind::Circle, n).validate()?;
    let points: Vec<Point> = (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * (1.0 - (i as f64 + 0.5) / n as f64);
            Point::new(
                (CIRCLE_RADIUS * theta.cos()).round() as i64,
                (CIRCLE_RADIUS * theta.sin()).round() as i64,
            )
        })
        .collect();
    let strictly_sorted = points.windows(2).all(|w| w[0].x < w[1].x);
    if !strictly_sorted || monotone_chain_upper(&points).len() != n {
        return Err(GenError::Infeasible(format!(
            "circle with n={n} is not in convex position after rounding"
        )));
    }
    Ok(points)
}

/// `n` consecutive integer points of `y = -x^2`, centred on the y-axis.
pub fn gen_parabola(n: usize) -> Result<Vec<Point>, GenError> {
    let start = -(n as i64 / 2);
    let points: Vec<Point> = (start..start + n as i64).map(|x| Point::new(x, -x * x)).collect();
    check_bounds(&points)?;
    Ok(points)
}

/// Rejection-samples `n` lattice points with distinct x satisfying `inside`.
fn sample_region<F>(n: usize, seed: u64, inside: F) -> Result<Vec<Point>, GenError>
where
    F: Fn(Point) -> bool,
{
    let s = LATTICE_SCALE;
    if n as i64 > 2 * s + 1 {
        return Err(GenError::Infeasible(format!(
            "{n} distinct x values exceed the lattice"
        )));
    }
    let mut rng = rng_for(seed);
    let mut used = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.gen_range(-s..=s), rng.gen_range(-s..=s));
        if inside(p) && used.insert(p.x) {
            points.push(p);
        }
    }
    points.sort_unstable();
    Ok(points)
}

pub fn gen_disk(n: usize, seed: u64) -> Result<Vec<Point>, GenError> {
    let r2 = (LATTICE_SCALE as i128).pow(2);
    sample_region(n, seed, |p| (p.x as i128).pow(2) + (p.y as i128).pow(2) <= r2)
}

/// Uniform points in a regular `k`-gon with integer vertices.
pub fn gen_polygon(n: usize, k: usize, seed: u64) -> Result<Vec<Point>, GenError> {
    if k < 3 {
        return Err(GenError::InvalidSpec("polygon needs k >= 3".into()));
    }
    let r = LATTICE_SCALE as f64;
    let verts: Vec<Point> = (0..k)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            Point::new((r * t.cos()).round() as i64, (r * t.sin()).round() as i64)
        })
        .collect();
    let inside = |p: Point| (0..k).all(|i| orientation(verts[i], verts[(i + 1) % k], p) != Turn::Right);
    sample_region(n, seed, inside)
}

pub fn gen_random_sorted(n: usize, seed: u64) -> Result<Vec<Point>, GenError> {
    sample_region(n, seed, |_| true)
}
