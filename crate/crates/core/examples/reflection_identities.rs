//! Reflection identities of a map: the recursion against the direct
//! formula, and the conjugation residuals.

use segrekit::corpus;
use segrekit::reflection::{conjugate_reflection_check, multi_indices_upto, theta_beta_direct, theta_beta_recursive};

fn main() -> segrekit::Result<()> {
    let h = corpus::id_bidegree(6)?;
    for beta in multi_indices_upto(h.target.m, 2).into_iter().skip(1) {
        let direct = theta_beta_direct(&h, &beta)?;
        let rec = theta_beta_recursive(&h, &beta)?;
        let conj = conjugate_reflection_check(&h, &beta)?;
        println!(
            "beta {:?}: recursion agrees = {}, conjugation residual terms = {}",
            beta,
            direct == rec,
            conj.iter().map(|r| r.len()).sum::<usize>()
        );
        println!("  {}", direct[0]);
    }
    Ok(())
}
