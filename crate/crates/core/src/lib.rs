//! Community detection by modularity maximization with equilibrium
//! refinement.
//!
//! The usual flow is
//!
//! 1. load a graph ([`graph::load_edge_list`]; bipartite inputs become a
//!    single graph over both parts),
//! 2. find an initial partition with [`louvain::louvain`],
//! 3. move single vertices with [`nash::stabilize`] until no vertex can raise
//!    modularity by changing community,
//! 4. inspect fuzzy memberships with [`overlap::legitimacy_matrix`] and
//!    [`overlap::alpha_cut`].
//!
//! [`pipeline::run_pipeline`] chains all four and produces a JSON-ready
//! [`pipeline::RunReport`].
//!
//! ```
//! use comdet::{datasets, louvain, nash};
//!
//! let g = datasets::karate();
//! let p = louvain::louvain(&g, &louvain::LouvainConfig::with_seed(5)).unwrap();
//! let (stable, trace) = nash::stabilize(&g, &p, &Default::default()).unwrap();
//! assert!(nash::is_nash_equilibrium(&g, &stable, 1e-9));
//! assert!(trace.final_q >= comdet::modularity::modularity(&g, &p).unwrap());
//! ```

pub mod datasets;
pub mod dot;
pub mod error;
pub mod generate;
pub mod graph;
pub mod louvain;
pub mod modularity;
pub mod nash;
pub mod overlap;
pub mod partition;
pub mod pipeline;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Format, Graph, Part, VertexId};
pub use partition::{CommunityId, CommunityStats, Partition};
