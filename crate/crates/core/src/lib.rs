//! Equilibrium engine for land enclosure under open access.
//!
//! A two-sector economy splits land and labor between an enclosed sector,
//! where enclosure unlocks a productivity gain at a per-unit cost, and a
//! customary sector where labor earns its average product. The crate
//! solves the planner problems, the decentralized enclosure game, a
//! monopolist encloser and a three-sector extension, and sweeps them over
//! parameter grids.

pub mod decentralized;
pub mod economy;
pub mod error;
pub mod monopoly;
pub mod numeric;
pub mod oracle;
pub mod planner;
pub mod regions;
pub mod structural;
pub mod verify;

pub use decentralized::{classify_equilibria, EquilibriumReport, Selection, StrategicNature};
pub use economy::{CompositeParams, Environment, DEFAULT_LABOR_SHARE};
pub use error::{ModelError, Result};
pub use monopoly::{monopoly_solve, MonopolySolution};
pub use planner::{first_best_solve, second_best_solve, PlannerSolution, Regime, RegimeKind};
pub use regions::{run_sweep, Solver, SweepGrid, SweepSpec};
pub use structural::ManufacturingParams;
