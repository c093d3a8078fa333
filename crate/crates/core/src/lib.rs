#![forbid(unsafe_code)]

//! Core selection and shared-tree multicast simulation for networks that
//! run distance-vector routing.
//!
//! The pipeline, bottom to top:
//!
//! - [`topology`] holds the validated network graph, its file format, and
//!   the network diameter.
//! - [`dvr`] converges per-router routing tables by synchronous
//!   distance-vector exchange and provides an independent all-pairs oracle.
//! - [`pseudo`] computes pseudo-diameters (the largest cost in a router's
//!   table) and the broadcast that budgets its flood by them.
//! - [`cores`] runs the pseudo-diameter exchange and builds the candidate
//!   core table every router derives identically.
//! - [`locality`] scores candidate cores with the end-to-end delay estimate
//!   a sender uses to pick its core.
//! - [`tree`] builds core-rooted shared trees whose branches are unicast
//!   shortest paths, and models delivery delay over them.
//!
//! ```
//! use corecast::{cores, dvr, fixture, locality};
//!
//! let state = dvr::compute_dvr(&fixture::topology());
//! let table = cores::build_core_table(&cores::broadcast_pds(&state).unwrap());
//! let candidates = cores::select_candidates(&table, 3).unwrap();
//! let (core, estimate) = locality::select_core(&state, &table, &candidates, fixture::A).unwrap();
//! assert_eq!(core, fixture::C);
//! assert_eq!(estimate.ed, 110);
//! ```

pub mod cores;
pub mod dvr;
pub mod error;
pub mod fixture;
pub mod locality;
pub mod pseudo;
pub mod topology;
pub mod tree;

pub use error::{Error, Result};
pub use topology::{Cost, Link, RouterId, Topology};
