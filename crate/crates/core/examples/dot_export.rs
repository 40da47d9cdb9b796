//! Writes Graphviz files for the Southern Women partition before and after
//! stabilization, highlighting the vertices that moved.
//!
//! ```bash
//! cargo run -p comdet --example dot_export -- /tmp/sw
//! dot -Tsvg /tmp/sw.after.dot > sw.svg
//! ```

use comdet::datasets;
use comdet::dot::to_dot;
use comdet::louvain::{louvain, LouvainConfig};
use comdet::nash::{stabilize, StabilizeConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stem = std::env::args().nth(1).unwrap_or_else(|| "southern_women".into());
    let g = datasets::southern_women();
    let p = louvain(&g, &LouvainConfig::with_seed(17))?;
    let (out, trace) = stabilize(&g, &p, &StabilizeConfig::default())?;
    let moved = trace.moved_vertices();

    let before = format!("{stem}.before.dot");
    let after = format!("{stem}.after.dot");
    std::fs::write(&before, to_dot(&g, &p, &moved))?;
    std::fs::write(&after, to_dot(&g, &out, &moved))?;
    let names: Vec<&str> = moved.iter().map(|&v| g.label(v)).collect();
    println!("wrote {before} and {after}; moved {names:?}");
    Ok(())
}
