//! Legitimacy matrix, α-cut and deviant vertices for a Louvain partition of
//! Southern Women.
//!
//! ```bash
//! cargo run -p comdet --example overlap_report -- 17 0.2
//! ```

use comdet::datasets;
use comdet::louvain::{louvain, LouvainConfig};
use comdet::nash::unstable_vertices;
use comdet::overlap::{alpha_cut, legitimacy_matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(17);
    let alpha: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.2);

    let g = datasets::southern_women();
    let p = louvain(&g, &LouvainConfig::with_seed(seed))?;
    let l = legitimacy_matrix(&g, &p);
    let cut = alpha_cut(&l, alpha)?;

    print!("{:>6}", "");
    for c in &l.communities {
        print!("{:>8}", format!("c{c}"));
    }
    println!("   kept at alpha {alpha}");
    for m in &cut.memberships {
        let u = m.vertex;
        let mark = if cut.deviants.contains(&u) { "*" } else { " " };
        print!("{:>5}{mark}", g.label(u));
        for (j, v) in l.values[u].iter().enumerate() {
            let own = if j == l.assigned[u] { "'" } else { " " };
            print!("{:>7.3}{own}", v);
        }
        println!("   {:?}", m.communities);
    }
    let names = |vs: &[usize]| vs.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(", ");
    println!("\n' marks the assigned community, * a deviant vertex");
    println!("deviants (max legitimacy elsewhere): {}", names(&cut.deviants));
    println!("unstable (positive reassignment gain): {}", names(&unstable_vertices(&g, &p, 1e-9)?));
    println!("overlapping at alpha {alpha}: {}", names(&cut.overlapping()));
    Ok(())
}
