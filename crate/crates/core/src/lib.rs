//! Random simplicial graphs, induced cycles, the Morse property and the
//! square graph, with analytic expectations and a Monte Carlo harness.

pub mod analytic;
pub mod cycles;
pub mod error;
pub mod experiment;
pub mod gnp;
pub mod graph;
pub mod io;
pub mod morse;
pub mod square;

pub use cycles::{
    enumerate_induced_cycles, enumerate_induced_squares, morse_pruned_cycle_search,
    morse_pruned_cycle_search_with_budget, CycleWitness, DEFAULT_SEARCH_BUDGET,
};
pub use error::{Error, Result};
pub use gnp::{density_from_coefficient, sample_gnp, DensityPoint, Seed};
pub use graph::{Graph, VertexSet};
pub use morse::{count_morse_cycles, is_morse_cycle, is_morse_subgraph, morse_oracle, MorseOracle};
pub use square::{build_square_graph, cfs_report, is_cfs, CfsReport, Component, Connectivity, SquareGraph};
