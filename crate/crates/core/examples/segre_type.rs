//! Generic ranks of the Segre chains, the Segre number and a minimality
//! witness.

use segrekit::corpus;
use segrekit::segre::{minimality_witness, segre_multitype};

fn main() -> segrekit::Result<()> {
    for mf in [corpus::quadric(8)?, corpus::bidegree(8)?, corpus::levi_flat(8)] {
        let rep = segre_multitype(&mf, 5, 0)?;
        println!("{}: ranks {:?}, mu = {}, minimal = {}", mf.name, rep.ranks, rep.mu, rep.minimal);
        if rep.minimal {
            println!("  multitype {:?}", rep.multitype(mf.m));
            let w = minimality_witness(&mf, 0, 8)?;
            println!("  witness returns to the origin: {}, rank {}", w.returns, w.rank_t);
        }
    }
    Ok(())
}
