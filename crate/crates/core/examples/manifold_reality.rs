//! Defining functions of a manifold in normal coordinates, the reality
//! check, and a map that sends one manifold into another.

use segrekit::corpus;
use segrekit::manifold::{verify_maps_into, verify_reality};

fn main() -> segrekit::Result<()> {
    let mf = corpus::quartic(8)?;
    println!("{}: m = {}, d = {}", mf.name, mf.m, mf.d);
    for (j, tb) in mf.theta_bar.iter().enumerate() {
        println!("  theta_bar_{} = {}", j + 1, tb);
    }
    let (r1, r2) = verify_reality(&mf)?;
    let terms: usize = r1.iter().chain(&r2).map(|r| r.len()).sum();
    println!("  reality residual terms: {terms}");

    let h = corpus::quartic_embedding(8)?;
    let res = verify_maps_into(&h)?;
    println!("{} maps into {}: {}", h.name, h.target.name, res.iter().all(|r| r.is_zero()));
    Ok(())
}
