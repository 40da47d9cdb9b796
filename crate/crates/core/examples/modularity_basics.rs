//! Modularity and single-vertex move gains on a small hand-built graph.
//!
//! ```bash
//! cargo run -p comdet --example modularity_basics
//! ```

use comdet::graph::{load_edge_list_str, Format};
use comdet::modularity::{community_stats, exact_delta_q, modularity};
use comdet::nash::{rm, rm_to_empty};
use comdet::Partition;

const EDGES: &str = "\
# two triangles joined by a bridge
a b
b c
a c
c d
d e
e f
d f
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = load_edge_list_str(EDGES, Format::Unipartite)?;
    let split = Partition::from_groups(&g, &[vec![0, 1, 2], vec![3, 4, 5]])?;
    let whole = Partition::all_in_one(&g);

    println!("n = {}, m = {}", g.n(), g.m());
    println!("Q(all in one) = {:.4}", modularity(&g, &whole)?);
    println!("Q(two triangles) = {:.4}", modularity(&g, &split)?);
    for (c, s) in community_stats(&g, &split) {
        println!("  c{c}: {} members, {} internal edges, degree sum {}", s.members, s.internal_edges, s.degree_sum);
    }

    println!("gains for moving each vertex out of its triangle:");
    for w in 0..g.n() {
        let other = 1 - split.community_of(w);
        let fast = rm(&g, &split, w, other)?;
        let exact = exact_delta_q(&g, &split, w, other)?;
        println!(
            "  {} -> c{other}: {fast:+.5} (recomputed {exact:+.5}), alone: {:+.5}",
            g.label(w),
            rm_to_empty(&g, &split, w)?
        );
    }
    Ok(())
}
