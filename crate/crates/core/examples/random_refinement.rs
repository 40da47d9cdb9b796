//! Stabilizes random partitions of random graphs and cross-checks the
//! incremental gains against full recomputation.
//!
//! ```bash
//! cargo run -p comdet --example random_refinement -- 40 0.1 7
//! ```

use comdet::generate::{gnp_nonempty, random_partition};
use comdet::modularity::modularity;
use comdet::nash::{is_nash_equilibrium, stabilize, StabilizeConfig};
use comdet::verify::{check_potential, verify, VerifyConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40);
    let prob: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gnp_nonempty(n, prob, &mut rng);
    let p = random_partition(&g, 6, &mut rng);
    match check_potential(&g, &p)? {
        Ok((worst, count)) => println!("{count} gains checked, max error {worst:.1e}"),
        Err((w, c, expected, got)) => println!("mismatch at vertex {w} -> c{c}: {expected} vs {got}"),
    }

    let cfg = StabilizeConfig { debug_recompute: true, ..Default::default() };
    let (out, trace) = stabilize(&g, &p, &cfg)?;
    println!(
        "n = {}, m = {}: Q {:.4} -> {:.4} in {} moves, {} -> {} communities",
        g.n(),
        g.m(),
        modularity(&g, &p)?,
        trace.final_q,
        trace.len(),
        p.num_communities(),
        out.num_communities()
    );
    println!("equilibrium: {}", is_nash_equilibrium(&g, &out, cfg.epsilon));

    let summary = verify(&VerifyConfig { trials: 50, seed, ..Default::default() })?;
    println!(
        "randomized verification: {} trials, passed = {}, max potential error {:.1e}",
        summary.trials,
        summary.passed(),
        summary.max_potential_error
    );
    Ok(())
}
