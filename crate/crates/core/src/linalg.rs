//! Gaussian elimination over the constant field.

use crate::field::AlgNum;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<AlgNum>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, row);
        let inv = m[row][col].inv();
        if !inv.is_one() {
            for c in col..ncols {
                m[row][c] = &m[row][c] * &inv;
            }
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                if m[row][c].is_zero() {
                    continue;
                }
                let t = &f * &m[row][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of {x : m·x = 0}.
pub fn nullspace(m: &[Vec<AlgNum>], ncols: usize) -> Vec<Vec<AlgNum>> {
    let mut a: Vec<Vec<AlgNum>> = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = rref(&mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![AlgNum::zero(); ncols];
        v[free] = AlgNum::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

pub fn rank(m: &[Vec<AlgNum>], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, ncols).len()
}
