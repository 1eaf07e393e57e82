//! Wi-Fi channel assignment modeled as spectrum graph coloring.
//!
//! A [`Scenario`](domain::Scenario) places access points (APs) and wireless
//! devices (WDs) on a floor. [`graph::build_graph`] turns it into a two-layer
//! proximity graph: association edges join every WD to its nearest AP, and
//! interference edges join nodes whose transmissions disturb each other.
//! Colorings of the APs (one channel each, WDs inherit theirs) are scored by
//! the SINR-based [detailed utility](radio::detailed_utility) or, on the
//! AP-only [contracted graph](contraction::contract), by the much cheaper
//! [simplified utility](radio::simplified_utility).
//!
//! The [`optimizers`] module holds simulated annealing, a coordinated Least
//! Congested Channel Search, random colorings and an exhaustive oracle.
//! [`experiments`] runs the correlation study and the four-strategy
//! benchmark over corpora produced by [`scenario_gen`].
//!
//! With the default `parallel` feature, experiment cells, correlation
//! colorings and corpus generation run on rayon's thread pool. Without it,
//! every code path runs sequentially and produces identical results.

pub mod contraction;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod optimizers;
pub mod par;
pub mod radio;
pub mod rng;
pub mod scenario_gen;
pub mod timing;

pub use error::{Error, Result};
