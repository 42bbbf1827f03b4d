//! Birkhoff-von Neumann decomposition.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BvnComponent {
    #[serde(with = "crate::rational::serde_str")]
    pub weight: Rational,
    /// `permutation[agent]` is the object the agent receives.
    pub permutation: Vec<usize>,
}

impl BvnComponent {
    pub fn matrix(&self) -> Assignment {
        Assignment::permutation(&self.permutation).expect("component holds a permutation")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BvnDecomposition {
    pub components: Vec<BvnComponent>,
}

impl BvnDecomposition {
    pub fn reconstruct(&self, n: usize) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); n]; n];
        for c in &self.components {
            for (i, &j) in c.permutation.iter().enumerate() {
                m[i][j] += &c.weight;
            }
        }
        m
    }

    pub fn total_weight(&self) -> Rational {
        self.components.iter().map(|c| c.weight.clone()).sum()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Perfect matching inside the positive support by augmenting paths.
fn support_matching(m: &[Vec<Rational>]) -> Option<Vec<usize>> {
    let n = m.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(i: usize, m: &[Vec<Rational>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..m.len() {
            if m[i][j].is_positive() && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, m, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, m, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        perm[o.expect("perfect matching")] = j;
    }
    Some(perm)
}

/// Gaussian elimination kernel vector of the columns (weights) if dependent.
fn dependency(vectors: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    let dim = vectors[0].len();
    // matrix with columns = vectors
    let mut a: Vec<Vec<Rational>> = (0..dim).map(|r| vectors.iter().map(|v| v[r].clone()).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for c in 0..k {
        let Some(p) = (row..dim).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..dim {
            if r != row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..k {
                    let d = &f * &a[row][j];
                    a[r][j] -= d;
                }
            }
        }
        pivot_cols.push(c);
        row += 1;
    }
    let free = (0..k).find(|c| !pivot_cols.contains(c))?;
    let mut z = vec![Rational::zero(); k];
    z[free] = Rational::from_integer(1.into());
    for (r, &p) in pivot_cols.iter().enumerate() {
        z[p] = -a[r][free].clone();
    }
    Some(z)
}

/// Carathéodory reduction: drop components while their matrices are affinely
/// dependent.
fn reduce(n: usize, mut comps: Vec<BvnComponent>) -> Vec<BvnComponent> {
    let bound = (n - 1) * (n - 1) + 1;
    while comps.len() > bound {
        let vectors: Vec<Vec<Rational>> = comps
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); n * n];
                for (i, &j) in c.permutation.iter().enumerate() {
                    v[i * n + j] = Rational::from_integer(1.into());
                }
                v
            })
            .collect();
        let mut z = dependency(&vectors).expect("more than (n-1)^2+1 permutation matrices are dependent");
        if !z.iter().any(|x| x.is_positive()) {
            for x in z.iter_mut() {
                *x = -x.clone();
            }
        }
        // every permutation matrix has entry sum n, so sum z = 0 and weights stay normalised
        let t = comps
            .iter()
            .zip(&z)
            .filter(|(_, zi)| zi.is_positive())
            .map(|(c, zi)| &c.weight / zi)
            .min()
            .expect("positive coefficient");
        for (c, zi) in comps.iter_mut().zip(&z) {
            c.weight -= &t * zi;
        }
        comps.retain(|c| c.weight.is_positive());
    }
    comps
}

/// Writes `x` as a convex combination of at most `(n-1)^2 + 1` permutation matrices.
pub fn bvn_decompose(x: &Assignment) -> Result<BvnDecomposition> {
    let n = x.n();
    let mut residual: Vec<Vec<Rational>> = x.rows().to_vec();
    let mut comps = Vec::new();
    while residual.iter().flatten().any(|v| v.is_positive()) {
        let perm = support_matching(&residual)
            .ok_or_else(|| Error::Certification("residual support has no perfect matching".into()))?;
        let w = perm.iter().enumerate().map(|(i, &j)| residual[i][j].clone()).min().expect("n >= 1");
        for (i, &j) in perm.iter().enumerate() {
            residual[i][j] -= &w;
        }
        comps.push(BvnComponent { weight: w, permutation: perm });
    }
    let d = BvnDecomposition { components: reduce(n, comps) };
    if d.reconstruct(n) != x.rows() {
        return Err(Error::Certification("decomposition does not reconstruct the input".into()));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;

    #[test]
    fn permutation_is_its_own_decomposition() {
        let p = Assignment::permutation(&[2, 0, 1]).unwrap();
        let d = bvn_decompose(&p).unwrap();
        assert_eq!(d.components, vec![BvnComponent { weight: one(), permutation: vec![2, 0, 1] }]);
    }

    #[test]
    fn uniform_four() {
        let d = bvn_decompose(&Assignment::uniform(4)).unwrap();
        assert!(d.len() <= 10);
        assert_eq!(d.total_weight(), one());
    }

    #[test]
    fn reduction_respects_bound() {
        // a dense 3x3 with 6 permutations equally weighted reduces to at most 5
        let comps: Vec<BvnComponent> = crate::profile::permutations(3)
            .into_iter()
            .map(|p| BvnComponent { weight: crate::rational::rat(1, 6), permutation: p })
            .collect();
        let reduced = reduce(3, comps);
        assert!(reduced.len() <= 5);
        let d = BvnDecomposition { components: reduced };
        assert_eq!(d.reconstruct(3), Assignment::uniform(3).rows());
    }
}
