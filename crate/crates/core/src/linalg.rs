//! Row reduction over a prime field `Z/p`.

use crate::polyfp::inv_mod;
use crate::tower::{mulmod, submod};

/// Incremental echelon basis of a subspace of `F_p^n`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub p: u64,
    /// Rows normalised so that the pivot entry is 1; sorted by pivot column.
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64) -> Self {
        Echelon {
            p,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows; returns the residual vector.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = v.iter().map(|&x| x % self.p).collect();
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = submod(*x, mulmod(c, r, self.p), self.p);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(r[piv], self.p);
        r.iter_mut().for_each(|x| *x = mulmod(*x, inv, self.p));
        // keep rows fully reduced
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = submod(*x, mulmod(c, y, self.p), self.p);
                }
            }
        }
        let pos = self.rows.partition_point(|(q, _)| *q < piv);
        self.rows.insert(pos, (piv, r));
        true
    }
}

/// Solve `A x = b` over `Z/p` where `cols[j]` is column `j` of `A`.
/// Returns one solution (free variables set to zero) or `None`.
pub(crate) fn solve(p: u64, cols: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let m = b.len();
    let n = cols.len();
    // augmented row-major matrix
    let mut a: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[i] % p).collect();
            row.push(b[i] % p);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..m).find(|&k| a[k][c] != 0) else {
            continue;
        };
        a.swap(r, k);
        let inv = inv_mod(a[r][c], p);
        a[r].iter_mut().for_each(|x| *x = mulmod(*x, inv, p));
        for k in 0..m {
            if k != r && a[k][c] != 0 {
                let f = a[k][c];
                for j in 0..=n {
                    let t = mulmod(f, a[r][j], p);
                    a[k][j] = submod(a[k][j], t, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if a[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 0, 1]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[2, 1, 0]));
    }

    #[test]
    fn solve_small_system() {
        // x + y = 1, x - y = 0 over F_5 -> x = y = 3
        let cols = vec![vec![1, 1], vec![1, 4]];
        assert_eq!(solve(5, &cols, &[1, 0]), Some(vec![3, 3]));
        // inconsistent
        let cols = vec![vec![1, 1]];
        assert_eq!(solve(5, &cols, &[1, 0]), None);
    }
}
