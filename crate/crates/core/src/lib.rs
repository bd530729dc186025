//! Plastic junctions between martensite plates in cubic-to-orthorhombic
//! transformations.
//!
//! The crate covers the small dense linear algebra the theory needs, rank-one
//! compatibility and twinning, the crystal data (variants, habit plates, BCC
//! slip systems), the two-well quasiconvex hull checks, and the junction
//! engine: shear-amount solvers, exhaustive junction search, rigidity
//! certificates, separation margins and wedge geometry.

pub mod compat;
pub mod crystal;
pub mod error;
pub mod junction;
pub mod linalg;
pub mod twowell;

pub use compat::{
    connections, find_twin_axis, incompatibility_angle, rank_one_connections, twin_solutions, Connections,
    IncompatibilityAngle, RankOneSolution, TwinBranch, TwinSolution,
};
pub use crystal::{
    bcc_slip_systems, cubic_point_group, habit_plate, habit_plates, variants, HabitPlate, PlateId, Sign, SlipFamily,
    SlipSystem, Variant,
};
pub use error::{Error, Result};
pub use junction::{
    find_plastic_junctions, local_rigidity, separation_margin, stability_check, PlasticJunction, RigidityReport,
    SeparationReport, ThmCase, WedgeGeometry,
};
pub use linalg::{Mat3, Tolerances, Vec3};
pub use twowell::{kqc_membership, twin_params, two_well_bc_feasible, Feasibility, TwinParams};
