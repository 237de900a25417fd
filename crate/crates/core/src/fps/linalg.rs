//! Exact linear algebra over ℚ(i) and determinants of series matrices.

use std::collections::HashMap;

use super::{Gq, Series, Vars};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Gq>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Gq>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &[Vec<Gq>]) -> Option<Vec<Vec<Gq>>> {
    let n = m.len();
    let mut a: Vec<Vec<Gq>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Gq::one() } else { Gq::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Finds `c` with `Σ c_i rows[i] = target`, if one exists.
pub fn solve_combination(rows: &[Vec<Gq>], target: &[Gq]) -> Option<Vec<Gq>> {
    let k = rows.len();
    let n = target.len();
    // Columns are the given rows; augmented with target.
    let mut a: Vec<Vec<Gq>> = (0..n)
        .map(|j| {
            let mut r: Vec<Gq> = rows.iter().map(|row| row[j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.contains(&k) {
        return None;
    }
    let mut c = vec![Gq::zero(); k];
    for (r, &p) in piv.iter().enumerate() {
        c[p] = a[r][k].clone();
    }
    Some(c)
}

pub fn mat_vec(m: &[Vec<Gq>], v: &[Gq]) -> Vec<Gq> {
    m.iter()
        .map(|row| {
            let mut s = Gq::zero();
            for (a, b) in row.iter().zip(v) {
                s += &(a * b);
            }
            s
        })
        .collect()
}

/// Determinant of a square matrix of series by Laplace expansion along
/// rows, memoised on the set of used columns. No division is performed.
pub fn series_det(m: &[Vec<Series>], vars: &Vars, order: u32) -> Series {
    let n = m.len();
    if n == 0 {
        return Series::one(vars, order);
    }
    let mut memo: HashMap<u64, Series> = HashMap::new();
    det_rec(m, 0, 0, &mut memo, vars, order)
}

fn det_rec(m: &[Vec<Series>], row: usize, used: u64, memo: &mut HashMap<u64, Series>, vars: &Vars, order: u32) -> Series {
    let n = m.len();
    if row == n {
        return Series::one(vars, order);
    }
    if let Some(s) = memo.get(&used) {
        return s.clone();
    }
    let mut acc = Series::zero(vars, order);
    let mut sign_neg = false;
    for c in 0..n {
        if used & (1 << c) != 0 {
            continue;
        }
        let e = &m[row][c];
        if !e.is_zero() {
            let minor = det_rec(m, row + 1, used | (1 << c), memo, vars, order);
            if !minor.is_zero() {
                let t = e * &minor;
                acc = if sign_neg { &acc - &t } else { &acc + &t };
            }
        }
        sign_neg = !sign_neg;
    }
    memo.insert(used, acc.clone());
    acc
}

/// Adjugate matrix (transpose of the cofactor matrix).
pub fn series_adjugate(m: &[Vec<Series>], vars: &Vars, order: u32) -> Vec<Vec<Series>> {
    let n = m.len();
    let mut adj = vec![vec![Series::zero(vars, order); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Series>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = series_det(&minor, vars, order);
            adj[j][i] = if (i + j) % 2 == 1 { -d } else { d };
        }
    }
    adj
}

/// Picks `k` elements out of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::vars;

    #[test]
    fn rank_and_inverse() {
        let m = vec![vec![Gq::int(1), Gq::int(2)], vec![Gq::int(2), Gq::int(4)]];
        assert_eq!(rank(&m), 1);
        assert!(inverse(&m).is_none());
        let m = vec![vec![Gq::int(0), Gq::i()], vec![Gq::int(-1), Gq::int(0)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_vec(&inv, &mat_vec(&m, &[Gq::int(3), Gq::int(5)])), vec![Gq::int(3), Gq::int(5)]);
    }

    #[test]
    fn combination_solve() {
        let rows = vec![vec![Gq::int(1), Gq::int(0), Gq::int(1)], vec![Gq::int(0), Gq::int(1), Gq::int(1)]];
        let c = solve_combination(&rows, &[Gq::int(2), Gq::int(3), Gq::int(5)]).unwrap();
        assert_eq!(c, vec![Gq::int(2), Gq::int(3)]);
        assert!(solve_combination(&rows, &[Gq::int(1), Gq::int(1), Gq::int(0)]).is_none());
    }

    #[test]
    fn series_det_and_adjugate() {
        let vs = vars(&["w1"]);
        let w = Series::var(&vs, "w1", 6).unwrap();
        let one = Series::one(&vs, 6);
        let m = vec![vec![one.clone(), w.clone()], vec![w.clone(), one.clone()]];
        let d = series_det(&m, &vs, 6);
        assert_eq!(d, &one - &(&w * &w));
        let adj = series_adjugate(&m, &vs, 6);
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Series::zero(&vs, 6);
                for k in 0..2 {
                    s = &s + &(&m[i][k] * &adj[k][j]);
                }
                let expect = if i == j { d.clone() } else { Series::zero(&vs, 6) };
                assert_eq!(s, expect);
            }
        }
    }
}
