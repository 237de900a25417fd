//! Jets of a map along the Segre chains, propagated from the fundamental
//! system and compared with the jets read off directly.

use segrekit::classify::{classify_map, Bounds};
use segrekit::corpus;
use segrekit::propagate::table::{direct_table, propagate_jets};
use segrekit::propagate::{default_fundamental_system, verify_on_chain};

fn main() -> segrekit::Result<()> {
    let h = corpus::id_quadric(20)?;
    let rep = classify_map(&h, Bounds::default())?;
    let sys = default_fundamental_system(&h, &rep)?;
    println!("kappa0 = {}", sys.kappa0);
    for k in 1..=3 {
        println!("chain {k} residual zero: {}", verify_on_chain(&sys, &h, k)?.is_zero());
    }
    for t in propagate_jets(&sys, &h, 3, 2)? {
        let oracle = direct_table(&h, t.k, t.kappa)?;
        println!("chain {}: {} entries, agree = {}", t.k, t.h.len() + t.h_bar.len(), t.agrees_with(&oracle));
    }
    Ok(())
}
