//! Vertex enumeration by basis enumeration.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::lp::{LinearSystem, Relation};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest polytope dimension (after eliminating equalities and fixed
/// variables) that `enumerate_vertices` accepts.
pub const MAX_VERTEX_DIMENSION: usize = 10;

const MAX_BASES: u128 = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Dense reduced row echelon form of `[a | b]`; returns pivot columns or
/// `None` when inconsistent.
fn rref(a: &mut Vec<Vec<Rational>>, b: &mut Vec<Rational>, cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&k| !a[k][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for k in 0..a.len() {
            if k != r && !a[k][c].is_zero() {
                let f = a[k][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[k][j] -= d;
                }
                let d = &f * &b[r];
                b[k] -= d;
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    a.truncate(r);
    b.truncate(r);
    Some(pivots)
}

fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = m.len();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c][c..].iter_mut() {
            *x *= &inv;
        }
        rhs[c] *= &inv;
        for r in 0..k {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..k {
                    let d = &f * &m[c][j];
                    m[r][j] -= d;
                }
                let d = &f * &rhs[c];
                rhs[r] -= d;
            }
        }
    }
    Some(rhs)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All vertices of `{x : system}`; every variable must be sign-restricted.
/// The objective, if any, is ignored. Vertices are returned sorted.
pub fn enumerate_vertices(system: &LinearSystem) -> Result<Vec<Vec<Rational>>> {
    let n = system.num_vars();
    if (0..n).any(|v| system.is_free(v)) {
        return Err(Error::Input("vertex enumeration needs nonnegative variables".into()));
    }
    let cons = system.constraints();
    let slack_count = cons.iter().filter(|c| c.relation != Relation::Eq).count();
    let cols = n + slack_count;
    let mut a = Vec::with_capacity(cons.len());
    let mut b = Vec::with_capacity(cons.len());
    let mut s = n;
    for c in cons {
        let mut row = vec![Rational::zero(); cols];
        for (v, coef) in &c.terms {
            row[*v] += coef;
        }
        match c.relation {
            Relation::Le => {
                row[s] = Rational::one();
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
            }
            Relation::Eq => {}
        }
        a.push(row);
        b.push(c.rhs.clone());
    }
    let Some(pivots) = rref(&mut a, &mut b, cols) else { return Ok(Vec::new()) };
    // fixed columns: pivot rows without any other nonzero
    let mut fixed: Vec<Option<Rational>> = vec![None; cols];
    let mut live_rows = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        let others = (0..cols).any(|j| j != p && !a[r][j].is_zero());
        if others {
            live_rows.push(r);
        } else {
            if b[r].is_negative() {
                return Ok(Vec::new());
            }
            fixed[p] = Some(b[r].clone());
        }
    }
    let live_cols: Vec<usize> = (0..cols).filter(|&j| fixed[j].is_none()).collect();
    let rank = live_rows.len();
    let dim = live_cols.len() - rank;
    if dim > MAX_VERTEX_DIMENSION {
        return Err(Error::Capacity(format!(
            "polytope dimension {dim} exceeds the vertex enumeration cap {MAX_VERTEX_DIMENSION}"
        )));
    }
    if binomial(live_cols.len(), rank) > MAX_BASES {
        return Err(Error::Capacity(format!("{} candidate bases are too many to enumerate", binomial(live_cols.len(), rank))));
    }
    let mut out = BTreeSet::new();
    let base_point = |values: &[(usize, Rational)]| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); cols];
        for (j, v) in fixed.iter().enumerate() {
            if let Some(v) = v {
                full[j] = v.clone();
            }
        }
        for (j, v) in values {
            full[*j] = v.clone();
        }
        full.truncate(n);
        full
    };
    if rank == 0 {
        out.insert(base_point(&[]));
    } else {
        let mut idx: Vec<usize> = (0..rank).collect();
        loop {
            let basis: Vec<usize> = idx.iter().map(|&i| live_cols[i]).collect();
            let m: Vec<Vec<Rational>> =
                live_rows.iter().map(|&r| basis.iter().map(|&j| a[r][j].clone()).collect()).collect();
            let rhs: Vec<Rational> = live_rows.iter().map(|&r| b[r].clone()).collect();
            if let Some(x) = solve_square(m, rhs) {
                if x.iter().all(|v| !v.is_negative()) {
                    let values: Vec<(usize, Rational)> = basis.iter().copied().zip(x).collect();
                    out.insert(base_point(&values));
                }
            }
            if !next_combination(&mut idx, live_cols.len()) {
                break;
            }
        }
    }
    Ok(out.into_iter().collect())
}
