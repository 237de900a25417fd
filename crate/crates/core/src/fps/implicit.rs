use super::linalg::inverse;
use super::{Gq, Series, Vars};
use crate::error::{Error, Result};

/// Solves `F(x, y) = 0` for `y(x)` with `y(0) = 0`.
///
/// `F` lives over variables `x ∪ y`; `y_names` selects the unknowns. The
/// result is expressed over the remaining variables in their original
/// order, computed degree by degree with the constant Jacobian `∂F/∂y(0)`.
pub fn implicit_solve(f: &[Series], y_names: &[&str]) -> Result<Vec<Series>> {
    let Some(first) = f.first() else { return Ok(Vec::new()) };
    if f.len() != y_names.len() {
        return Err(Error::Dimension(format!("{} equations for {} unknowns", f.len(), y_names.len())));
    }
    let all = first.vars().clone();
    let order = f.iter().map(|s| s.order()).min().unwrap_or(0);
    let y_idx: Vec<usize> = y_names.iter().map(|n| first.index_of(n)).collect::<Result<_>>()?;
    let x_names: Vec<String> = all.iter().enumerate().filter(|(i, _)| !y_idx.contains(i)).map(|(_, v)| v.clone()).collect();
    let x_vars: Vars = x_names.clone().into();
    for s in f {
        if s.vars() != &all {
            return Err(Error::VarMismatch("implicit system over different variables".into()));
        }
        if !s.constant_term().is_zero() {
            return Err(Error::Inconsistent("F(0, 0) != 0".into()));
        }
    }
    let n = y_idx.len();
    let jac: Vec<Vec<Gq>> = f
        .iter()
        .map(|s| {
            y_idx
                .iter()
                .map(|&j| {
                    let mut m = vec![0u8; all.len()];
                    m[j] = 1;
                    s.coeff(&m)
                })
                .collect()
        })
        .collect();
    let jinv = inverse(&jac).ok_or(Error::SingularJacobian)?;
    let mut y: Vec<Series> = vec![Series::zero(&x_vars, order); n];
    let subs_for = |y: &[Series]| -> Result<Vec<Series>> {
        all.iter()
            .enumerate()
            .map(|(i, name)| match y_idx.iter().position(|&j| j == i) {
                Some(k) => Ok(y[k].clone()),
                None => Series::var(&x_vars, name, order),
            })
            .collect()
    };
    for d in 1..order {
        let subs = subs_for(&y)?;
        let res: Vec<Series> = f.iter().map(|s| s.compose(&subs).map(|r| r.homogeneous_part(d))).collect::<Result<_>>()?;
        if res.iter().all(|r| r.is_zero()) {
            continue;
        }
        for (k, yk) in y.iter_mut().enumerate() {
            let mut delta = Series::zero(&x_vars, order);
            for (i, r) in res.iter().enumerate() {
                let c = &jinv[k][i];
                if !c.is_zero() {
                    delta = &delta - &r.scale(c);
                }
            }
            *yk = &*yk + &delta;
        }
    }
    let subs = subs_for(&y)?;
    for s in f {
        let r = s.compose(&subs)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent(format!("residual {r}")));
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::vars;

    #[test]
    fn quadratic_graph() {
        let vs = vars(&["x", "y"]);
        let x = Series::var(&vs, "x", 5).unwrap();
        let y = Series::var(&vs, "y", 5).unwrap();
        let sol = implicit_solve(&[&y - &(&x * &x)], &["y"]).unwrap();
        assert_eq!(sol[0].to_string(), "x^2");
    }

    #[test]
    fn geometric_solution() {
        let vs = vars(&["x", "y"]);
        let x = Series::var(&vs, "x", 4).unwrap();
        let y = Series::var(&vs, "y", 4).unwrap();
        let f = &(&y - &x) - &(&x * &y);
        let sol = implicit_solve(&[f], &["y"]).unwrap();
        assert_eq!(sol[0].to_string(), "x + x^2 + x^3");
    }

    #[test]
    fn singular_jacobian() {
        let vs = vars(&["x", "y"]);
        let x = Series::var(&vs, "x", 4).unwrap();
        let y = Series::var(&vs, "y", 4).unwrap();
        assert_eq!(implicit_solve(&[&(&y * &y) - &x], &["y"]), Err(Error::SingularJacobian));
    }
}
