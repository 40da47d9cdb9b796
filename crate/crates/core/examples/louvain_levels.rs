//! The hierarchy Louvain builds on the karate club, level by level.
//!
//! ```bash
//! cargo run -p comdet --example louvain_levels -- 0
//! ```

use comdet::datasets;
use comdet::louvain::{louvain_levels, LouvainConfig};
use comdet::modularity::modularity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let g = datasets::karate();
    for (level, p) in louvain_levels(&g, &LouvainConfig::with_seed(seed))?.iter().enumerate() {
        let sizes: Vec<usize> = p.groups().iter().map(Vec::len).collect();
        println!(
            "level {level}: {} communities, Q = {:.4}, sizes {sizes:?}",
            p.num_communities(),
            modularity(&g, p)?
        );
    }
    Ok(())
}
