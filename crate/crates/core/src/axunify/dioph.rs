//! Minimal non-negative solutions of homogeneous linear Diophantine
//! equations: one equation `a·x = b·y`, or a system `A·x = 0`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Enumerates the minimal non-zero solutions `(x, y)` of `a·x = b·y` with
/// each component additionally bounded by `upper` (`None` for no extra bound).
/// Returned vectors are `x` followed by `y`.
///
/// Minimal solutions satisfy `x_i <= max(b)` and `y_j <= max(a)`, which
/// bounds the search space.
pub fn minimal_solutions(
    a: &[u32],
    b: &[u32],
    upper: &[Option<u32>],
    cap: usize,
) -> Result<Vec<Vec<u32>>> {
    assert_eq!(upper.len(), a.len() + b.len());
    let max_a = a.iter().copied().max().unwrap_or(0);
    let max_b = b.iter().copied().max().unwrap_or(0);
    if max_a == 0 || max_b == 0 {
        return Ok(Vec::new());
    }
    let bound = |i: usize, natural: u32| upper[i].map_or(natural, |u| u.min(natural));
    let left_bounds: Vec<u32> = (0..a.len()).map(|i| bound(i, max_b)).collect();
    let right_bounds: Vec<u32> = (0..b.len()).map(|j| bound(a.len() + j, max_a)).collect();

    let mut budget = cap;
    let left = enumerate(a, &left_bounds, &mut budget)?;
    let right = enumerate(b, &right_bounds, &mut budget)?;

    let mut by_sum: HashMap<u64, Vec<&Vec<u32>>> = HashMap::new();
    for (v, s) in &right {
        if *s > 0 {
            by_sum.entry(*s).or_default().push(v);
        }
    }
    let mut sols: Vec<Vec<u32>> = Vec::new();
    for (x, s) in &left {
        if *s == 0 {
            continue;
        }
        if let Some(ys) = by_sum.get(s) {
            for y in ys {
                if sols.len() >= cap {
                    return Err(Error::DiophantineExplosion(cap));
                }
                let mut v = x.clone();
                v.extend_from_slice(y);
                sols.push(v);
            }
        }
    }
    // keep the componentwise-minimal ones
    let minimal: Vec<Vec<u32>> = sols
        .iter()
        .filter(|s| {
            !sols
                .iter()
                .any(|t| t != *s && t.iter().zip(s.iter()).all(|(p, q)| p <= q))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Minimal non-zero solutions of `A·x = 0` over the naturals, `A` given by
/// rows, each component bounded by `upper`. Contejean-Devie completion: a
/// candidate `v` grows along `e_j` only when `A·e_j` points back towards
/// zero, and never past a solution already found.
pub fn minimal_system_solutions(rows: &[Vec<i64>], upper: &[Option<u32>], cap: usize) -> Result<Vec<Vec<u32>>> {
    let n = upper.len();
    let col = |j: usize| -> Vec<i64> { rows.iter().map(|r| r[j]).collect() };
    let cols: Vec<Vec<i64>> = (0..n).map(col).collect();
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let fits = |v: &[u32], j: usize| upper[j].is_none_or(|u| v[j] < u);
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut level: Vec<(Vec<u32>, Vec<i64>)> = (0..n)
        .filter(|&j| upper[j] != Some(0))
        .map(|j| {
            let mut v = vec![0u32; n];
            v[j] = 1;
            (v, cols[j].clone())
        })
        .collect();
    let mut budget = cap;
    while !level.is_empty() {
        let (sols, open): (Vec<_>, Vec<_>) = level.into_iter().partition(|(_, av)| av.iter().all(|&x| x == 0));
        basis.extend(sols.into_iter().map(|(v, _)| v));
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (v, av) in open {
            for j in 0..n {
                if dot(&av, &cols[j]) >= 0 || !fits(&v, j) {
                    continue;
                }
                let mut w = v.clone();
                w[j] += 1;
                if basis.iter().any(|b| b.iter().zip(&w).all(|(p, q)| p <= q)) || !seen.insert(w.clone()) {
                    continue;
                }
                if budget == 0 {
                    return Err(Error::DiophantineExplosion(cap));
                }
                budget -= 1;
                let aw: Vec<i64> = av.iter().zip(&cols[j]).map(|(x, y)| x + y).collect();
                next.push((w, aw));
            }
        }
        level = next;
    }
    Ok(basis)
}

fn enumerate(coef: &[u32], bounds: &[u32], budget: &mut usize) -> Result<Vec<(Vec<u32>, u64)>> {
    let mut out = vec![(Vec::with_capacity(coef.len()), 0u64)];
    for (i, &c) in coef.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (bounds[i] as usize + 1));
        for (v, s) in &out {
            for k in 0..=bounds[i] {
                if *budget == 0 {
                    return Err(Error::DiophantineExplosion(usize::MAX));
                }
                *budget -= 1;
                let mut w = v.clone();
                w.push(k);
                next.push((w, s + u64::from(k) * u64::from(c)));
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over a generous box; minimality by direct comparison.
    fn oracle(a: &[u32], b: &[u32], boxsize: u32) -> Vec<Vec<u32>> {
        let n = a.len() + b.len();
        let mut all = Vec::new();
        let mut v = vec![0u32; n];
        loop {
            let l: u32 = a.iter().zip(&v).map(|(c, x)| c * x).sum();
            let r: u32 = b.iter().zip(&v[a.len()..]).map(|(c, y)| c * y).sum();
            if l == r && l > 0 {
                all.push(v.clone());
            }
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] <= boxsize {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        let mut min: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t != *s && t.iter().zip(s.iter()).all(|(p, q)| p <= q)))
            .cloned()
            .collect();
        min.sort();
        min
    }

    #[test]
    fn x_plus_y_equals_z_plus_w() {
        let mut s = minimal_solutions(&[1, 1], &[1, 1], &[None; 4], 1000).unwrap();
        s.sort();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn matches_brute_force() {
        for (a, b) in [
            (vec![1, 1], vec![2]),
            (vec![2, 1], vec![1, 1, 1]),
            (vec![3, 1], vec![2, 2]),
            (vec![1, 2, 1], vec![3]),
        ] {
            let n = a.len() + b.len();
            let mut got = minimal_solutions(&a, &b, &vec![None; n], 100_000).unwrap();
            got.sort();
            assert_eq!(got, oracle(&a, &b, 4), "{a:?} = {b:?}");
        }
    }

    #[test]
    fn upper_bounds_restrict_components() {
        // 2x = y1 + y2 with y's bounded by 1: only (1,1,1)
        let s = minimal_solutions(&[2], &[1, 1], &[None, Some(1), Some(1)], 1000).unwrap();
        assert_eq!(s, vec![vec![1, 1, 1]]);
    }

    fn system_oracle(rows: &[Vec<i64>], boxsize: u32) -> Vec<Vec<u32>> {
        let n = rows[0].len();
        let mut all = Vec::new();
        let mut v = vec![0u32; n];
        loop {
            if v.iter().any(|&x| x > 0) && rows.iter().all(|r| r.iter().zip(&v).map(|(c, &x)| c * x as i64).sum::<i64>() == 0) {
                all.push(v.clone());
            }
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] <= boxsize {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        let mut min: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t != *s && t.iter().zip(s.iter()).all(|(p, q)| p <= q)))
            .cloned()
            .collect();
        min.sort();
        min
    }

    #[test]
    fn single_row_system_agrees_with_equation_solver() {
        for (a, b) in [(vec![1u32, 1], vec![2u32]), (vec![2, 1], vec![1, 1, 1]), (vec![3, 1], vec![2, 2])] {
            let n = a.len() + b.len();
            let row: Vec<i64> = a.iter().map(|&x| x as i64).chain(b.iter().map(|&y| -(y as i64))).collect();
            let mut got = minimal_system_solutions(&[row], &vec![None; n], 100_000).unwrap();
            got.sort();
            let mut want = minimal_solutions(&a, &b, &vec![None; n], 100_000).unwrap();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn systems_match_brute_force() {
        let systems = [
            vec![vec![1, 1, -1, 0], vec![0, 1, -1, -1]],
            vec![vec![1, 1, 1, -1, -1, 0], vec![1, 0, 0, 0, -1, -1]],
            vec![vec![2, -1, -1, 0], vec![0, 1, 1, -2]],
        ];
        for rows in systems {
            let n = rows[0].len();
            let mut got = minimal_system_solutions(&rows, &vec![None; n], 100_000).unwrap();
            got.sort();
            assert_eq!(got, system_oracle(&rows, 3), "{rows:?}");
        }
    }

    #[test]
    fn system_bounds_restrict_components() {
        // x1 + x2 = y, x1 = z, with z bounded by 0
        let rows = vec![vec![1, 1, -1, 0], vec![1, 0, 0, -1]];
        let got = minimal_system_solutions(&rows, &[None, None, None, Some(0)], 1000).unwrap();
        assert_eq!(got, vec![vec![0, 1, 1, 0]]);
    }

    #[test]
    fn explosion_is_reported() {
        let a = vec![1; 12];
        let b = vec![1; 12];
        let r = minimal_solutions(&a, &b, &vec![None; 24], 1000);
        assert!(matches!(r, Err(Error::DiophantineExplosion(_))));
    }
}
