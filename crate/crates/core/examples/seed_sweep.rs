//! Louvain then stabilization for a range of seeds on a bundled graph.
//!
//! ```bash
//! cargo run -p comdet --example seed_sweep -- southern-women 0 64
//! ```

use comdet::louvain::{louvain, LouvainConfig};
use comdet::modularity::modularity;
use comdet::nash::{stabilize, StabilizeConfig};
use comdet::{datasets, Graph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "karate".into());
    let from: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let to: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(32);
    let g: Graph = match name.as_str() {
        "karate" => datasets::karate(),
        "southern-women" => datasets::southern_women(),
        "dolphins" => datasets::dolphins().ok_or("no dolphins.tsv available")??,
        other => return Err(format!("unknown graph `{other}`").into()),
    };

    println!("seed  k  Q_louvain  moves  Q_stable  moved");
    for seed in from..to {
        let p = louvain(&g, &LouvainConfig::with_seed(seed))?;
        let q0 = modularity(&g, &p)?;
        let (s, trace) = stabilize(&g, &p, &StabilizeConfig::default())?;
        let moved: Vec<&str> = trace.moved_vertices().iter().map(|&v| g.label(v)).collect();
        println!(
            "{seed:>4} {:>2}  {q0:.4}     {:>3}    {:.4}   {}",
            p.num_communities(),
            trace.len(),
            modularity(&g, &s)?,
            moved.join(",")
        );
    }
    Ok(())
}
