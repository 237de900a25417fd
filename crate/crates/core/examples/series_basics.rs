//! Truncated series over ℚ(i): arithmetic, composition and an implicit
//! solve.

use segrekit::fps::{implicit_solve, parse_series, vars, Series};

fn main() -> segrekit::Result<()> {
    let xy = vars(&["x", "y"]);
    let a = parse_series("1 + x + i*y^2", &xy, 6)?;
    let b = parse_series("x*y - 1/2*x^3", &xy, 6)?;
    println!("a*b     = {}", &a * &b);
    println!("1/a     = {}", a.invert_unit()?);
    println!("conj(a) = {}", a.conj());

    let x = Series::var_idx(&vars(&["x"]), 0, 6);
    let subs = [x.clone(), x.pow(2)];
    println!("b(x, x^2) = {}", b.compose(&subs)?);

    let f = parse_series("y - x - x*y^2", &xy, 8)?;
    let y = implicit_solve(&[f], &["y"])?;
    println!("y(x) with y = x + x*y^2: {}", y[0]);
    Ok(())
}
