//! Exact verification of lower bounds on bichromatic lines.
//!
//! Every set of `n` red and `n` or `n - 1` blue points in the plane that is
//! neither collinear nor a near-pencil determines at least `|P| - 1` lines
//! containing points of both colours. This crate re-runs the
//! computer-assisted part of that argument in exact arithmetic:
//!
//! * [`geometry`] computes incidence statistics of concrete point sets and
//!   checks the classical incidence inequalities on them;
//! * [`bounds`] evaluates the closed-form counting bounds;
//! * [`model`] builds the integer feasibility system describing a minimal
//!   counterexample for each case `(n, blue)`;
//! * [`solver`] decides those systems with an exact rational simplex and
//!   branch-and-bound;
//! * [`cases`] refutes the two cases the scan leaves open;
//! * [`cli`] wires everything into a command-line tool with JSON reports.

pub mod bounds;
pub mod cases;
pub mod cli;
pub mod exactmath;
pub mod geometry;
pub mod model;
pub mod solver;
