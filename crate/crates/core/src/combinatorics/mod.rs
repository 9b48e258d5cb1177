//! Line graphs, plane configurations, fiber tallies of quasi-elliptic
//! fibrations and the lattice ranks that rule tallies out.

pub mod bounds;
pub mod config;
pub mod graph;
pub mod lattice;
pub mod tally;

pub use bounds::{bound_calculators, valency_bound, BoundCheck, BoundReport, ParabolicSummary};
pub use config::{classify_plane_config, plane_config, ConfigLabel, PlaneConfig};
pub use graph::{build_line_graph, find_cycles, summarize, GraphSummary, LineGraph};
pub use lattice::{
    build_config_lattice, gram_rank, integer_determinant, integer_rank, rank_filter, row_ranks, section_lattice,
    GramMatrix, LatticeError, RowRanks,
};
pub use tally::{
    degree3_menu, euler_tally_enumerate, refined_menu, FiberKind, FiberTallyRow, Menu, ValencyFilter, EULER_BUDGET,
    TABLE3_FILTER, TABLE4_FILTER,
};
