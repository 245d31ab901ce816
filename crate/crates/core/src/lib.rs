//! Combine-and-conquer maxima sets and upper hulls over lexicographically
//! sorted points.
//!
//! The quantum subroutines (max finding over a block, the bridge linear
//! program) run classically over a query-counting oracle while their quantum
//! query cost is charged to a [`CostLedger`]. Results are exact; costs are
//! what scale.

pub mod bench;
pub mod geom;
pub mod hull;
pub mod instances;
pub mod maxima;
pub mod oracle;
pub mod qsim;

pub use geom::{angle_compare, dominates, dualize, lex_less, orientation, DualLine, Point, Rational, Turn};
pub use hull::{
    block_jarvis, bridge, classical_upper_hull, find_bridge_edges, monotone_chain_upper, quantum_full_hull,
    quantum_jarvis_full, quantum_upper_hull, Bridge, HullChain, HullError,
};
pub use instances::{generate, GenError, GenSpec, Kind};
pub use maxima::{classical_maxima, complete_maxima_block, quantum_maxima, MaximaError, MaximaList};
pub use oracle::{BlockView, OracleError, SortedPointSet};
pub use qsim::{qlp, qmax, qmax_montecarlo, qmin, CostLedger, QsimError, SimMode};
