//! Writes the built-in corpus in the input file format, one file per map
//! with the manifolds it needs, plus one file per manifold without a map.

use std::collections::BTreeSet;
use std::path::PathBuf;

use segrekit::cli::{builtin, serialize_manifold, serialize_map, DEFAULT_ORDER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    let doc = builtin(DEFAULT_ORDER)?;
    let mut used = BTreeSet::new();
    for (name, h) in &doc.maps {
        let mut text = serialize_manifold(&h.source);
        if h.target.name != h.source.name {
            text.push('\n');
            text.push_str(&serialize_manifold(&h.target));
        }
        text.push('\n');
        text.push_str(&serialize_map(h));
        used.insert(h.source.name.clone());
        used.insert(h.target.name.clone());
        std::fs::write(dir.join(format!("{name}.sgk")), text)?;
        println!("{name}.sgk");
    }
    for (name, mf) in &doc.manifolds {
        if !used.contains(name) {
            std::fs::write(dir.join(format!("{name}.sgk")), serialize_manifold(mf))?;
            println!("{name}.sgk");
        }
    }
    Ok(())
}
