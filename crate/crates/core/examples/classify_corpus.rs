//! Classification reports for the built-in maps and manifolds.

use segrekit::classify::{classify_map, manifold_classify, Bounds};
use segrekit::cli::builtin;

fn main() -> segrekit::Result<()> {
    let doc = builtin(8)?;
    let bounds = Bounds::default();
    for h in doc.maps.values() {
        let r = classify_map(h, bounds)?;
        println!(
            "{:<22} solvable={:<16} finite={:<16} nondeg={:<16} audit={}",
            h.name, r.solvable.verdict, r.finite.verdict, r.nondeg.verdict, r.audit_ok
        );
    }
    let r = manifold_classify(doc.manifold("rational_graph").unwrap(), bounds)?;
    println!("{:<22} nondeg={}", "rational_graph", r.nondeg.verdict);
    Ok(())
}
