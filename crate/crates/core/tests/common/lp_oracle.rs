//! Dense tableau simplex over exact rationals with Bland's rule, used as an
//! independent oracle for difference-constraint programs.

use gasket::Rational;
use num_traits::{One, Zero};

/// `max c·z` subject to `A z ≤ b`, `z ≥ 0`, with `b ≥ 0` so the slack basis
/// is feasible. `None` when the program is unbounded.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<Rational> {
    let rows = a.len();
    let vars = c.len();
    let cols = vars + rows;
    assert!(b.iter().all(|x| *x >= Rational::zero()), "slack basis must be feasible");
    // Row r: [A_r | e_r | b_r]; objective row holds reduced costs −c.
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row = a[r].clone();
            row.resize(cols + 1, Rational::zero());
            row[vars + r] = Rational::one();
            row[cols] = b[r];
            row
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|x| -*x).collect();
    obj.resize(cols + 1, Rational::zero());
    let mut basis: Vec<usize> = (vars..cols).collect();

    loop {
        // Bland: lowest-index entering column with negative reduced cost.
        let Some(enter) = (0..cols).find(|&j| obj[j] < Rational::zero()) else {
            return Some(obj[cols]);
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if t[r][enter] > Rational::zero() {
                let ratio = t[r][cols] / t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (pr, _) = leave?;
        let p = t[pr][enter];
        for x in t[pr].iter_mut() {
            *x /= p;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
        let f = obj[enter];
        for (x, y) in obj.iter_mut().zip(&pivot_row) {
            *x -= f * *y;
        }
        basis[pr] = enter;
    }
}

/// `sup{Σ c_v f(v) : |f(u) − f(v)| ≤ w(u,v) on every edge}` for an objective
/// with `Σ c_v = 0`. Written with `z = f + M`, `0 ≤ z ≤ 2M`, where `M` is the
/// total edge weight, which bounds every reachable difference.
pub fn lipschitz_program(n: usize, edges: &[(usize, usize, Rational)], objective: &[Rational]) -> Option<Rational> {
    assert_eq!(objective.iter().fold(Rational::zero(), |a, c| a + c), Rational::zero());
    let big: Rational = edges.iter().fold(Rational::zero(), |acc, e| acc + e.2);
    let two_big = big + big;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &(u, v, w) in edges {
        for (p, q) in [(u, v), (v, u)] {
            let mut row = vec![Rational::zero(); n];
            row[p] += Rational::one();
            row[q] -= Rational::one();
            a.push(row);
            b.push(w);
        }
    }
    for v in 0..n {
        let mut row = vec![Rational::zero(); n];
        row[v] = Rational::one();
        a.push(row);
        b.push(two_big);
    }
    maximize(&a, &b, objective)
}

/// `sup{f(s) − f(t)}` over edge-wise 1-Lipschitz functions.
pub fn difference_program(n: usize, edges: &[(usize, usize, Rational)], s: usize, t: usize) -> Option<Rational> {
    let mut c = vec![Rational::zero(); n];
    c[s] += Rational::one();
    c[t] -= Rational::one();
    lipschitz_program(n, edges, &c)
}
