//! Louvain on Zachary's karate club followed by the equilibrium check.
//!
//! ```bash
//! cargo run -p comdet --example karate_stability -- 2
//! ```

use comdet::datasets;
use comdet::louvain::{louvain, LouvainConfig};
use comdet::modularity::modularity;
use comdet::nash::{is_nash_equilibrium, rm_all, stabilize, StabilizeConfig};
use comdet::overlap::{alpha_cut, legitimacy_matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let g = datasets::karate();
    let p = louvain(&g, &LouvainConfig::with_seed(seed))?;
    println!("seed {seed}: {} communities, Q = {:.4}", p.num_communities(), modularity(&g, &p)?);
    for (c, members) in p.groups().iter().enumerate() {
        let labels: Vec<&str> = members.iter().map(|&v| g.label(v)).collect();
        println!("  c{c}: {}", labels.join(" "));
    }

    let best = rm_all(&g, &p)?
        .into_iter()
        .max_by(|a, b| a.gain.total_cmp(&b.gain))
        .expect("more than one community");
    println!(
        "largest reassignment gain: vertex {} -> c{} : {:+.5}",
        g.label(best.vertex),
        best.to,
        best.gain
    );
    println!("equilibrium: {}", is_nash_equilibrium(&g, &p, 1e-9));

    let (stable, trace) = stabilize(&g, &p, &StabilizeConfig::default())?;
    for e in &trace.entries {
        println!(
            "  move {} c{} -> c{}  Q {:.4} -> {:.4}",
            g.label(e.evaluation.vertex),
            e.evaluation.from,
            e.evaluation.to,
            e.q_before,
            e.q_after
        );
    }
    println!("after {} moves: Q = {:.4}", trace.len(), trace.final_q);

    let cut = alpha_cut(&legitimacy_matrix(&g, &stable), 0.2)?;
    let deviants: Vec<&str> = cut.deviants.iter().map(|&v| g.label(v)).collect();
    println!("deviant vertices by legitimacy: {deviants:?}");
    Ok(())
}
