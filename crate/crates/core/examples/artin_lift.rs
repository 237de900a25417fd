//! Lifting an approximate root of a monic polynomial, the Artin-type
//! hypothesis, and a determination experiment.

use segrekit::fps::{parse_series, vars};
use segrekit::propagate::artin::{artin_hypothesis_check, determination_experiment, monic_lift, DeterminationContext, PolyX};

fn main() -> segrekit::Result<()> {
    let w = vars(&["w"]);
    let p = PolyX::parse("X^2 - 1 - w", &["w"], 16)?;
    let jet = parse_series("1 + 1/2*w", &w, 2)?;
    println!("sqrt(1 + w) = {}", monic_lift(&p, &jet, 2, 8)?);

    let wy = vars(&["w", "y"]);
    let g = parse_series("w", &w, 8)?;
    for eq in ["y^2 - w^2", "y^2 - 2*w*y + w^2"] {
        let out = artin_hypothesis_check(&[parse_series(eq, &wy, 8)?], &[g.clone()], 8)?;
        println!("{eq}: {out:?}");
    }

    let q = PolyX::parse("X^2 - w^2", &["w"], 16)?;
    let roots = vec![parse_series("w", &w, 8)?, parse_series("-w", &w, 8)?];
    let b = determination_experiment(&DeterminationContext::Polynomial { p: q, solutions: roots }, &[0, 1, 2])?;
    match b.nu {
        Some(nu) => println!("roots of X^2 - w^2 are determined by their {nu}-jets"),
        None => println!("no determination order up to 2"),
    }
    Ok(())
}
