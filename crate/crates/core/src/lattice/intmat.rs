//! Small integer matrices: Hermite normal form, kernels, elementary divisors.

pub type IntRow = Vec<i64>;

pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    // (g, x, y) with a·x + b·y = g ≥ 0
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot reduced into [0, pivot).
pub fn hnf(rows: &[IntRow]) -> Vec<IntRow> {
    let Some(ncols) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut m: Vec<IntRow> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut prow = 0;
    for col in 0..ncols {
        if prow >= m.len() {
            break;
        }
        for r in prow + 1..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[prow][col], m[r][col]);
            if a == 0 {
                m.swap(prow, r);
                continue;
            }
            let (g, x, y) = ext_gcd(a, b);
            let (pa, pb) = (a / g, b / g);
            let top: IntRow = (0..ncols).map(|c| x * m[prow][c] + y * m[r][c]).collect();
            let bot: IntRow = (0..ncols).map(|c| -pb * m[prow][c] + pa * m[r][c]).collect();
            m[prow] = top;
            m[r] = bot;
        }
        if m[prow][col] == 0 {
            continue;
        }
        if m[prow][col] < 0 {
            for x in m[prow].iter_mut() {
                *x = -*x;
            }
        }
        let p = m[prow][col];
        for r in 0..prow {
            let f = m[r][col].div_euclid(p);
            if f != 0 {
                for c in 0..ncols {
                    m[r][c] -= f * m[prow][c];
                }
            }
        }
        prow += 1;
    }
    m.truncate(prow);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Basis (in Hermite normal form) of {x ∈ Zⁿ : A·x = 0}.
pub fn kernel(a: &[IntRow], n: usize) -> Vec<IntRow> {
    let r = a.len();
    // rows of [Aᵗ | I]
    let mut m: Vec<IntRow> = (0..n)
        .map(|i| {
            let mut row: IntRow = (0..r).map(|j| a[j][i]).collect();
            row.extend((0..n).map(|k| i64::from(k == i)));
            row
        })
        .collect();
    let mut prow = 0;
    for col in 0..r {
        if prow >= n {
            break;
        }
        for rr in prow + 1..n {
            if m[rr][col] == 0 {
                continue;
            }
            let (x0, y0) = (m[prow][col], m[rr][col]);
            if x0 == 0 {
                m.swap(prow, rr);
                continue;
            }
            let (g, x, y) = ext_gcd(x0, y0);
            let (pa, pb) = (x0 / g, y0 / g);
            let w = m[0].len();
            let top: IntRow = (0..w).map(|c| x * m[prow][c] + y * m[rr][c]).collect();
            let bot: IntRow = (0..w).map(|c| -pb * m[prow][c] + pa * m[rr][c]).collect();
            m[prow] = top;
            m[rr] = bot;
        }
        if m[prow][col] != 0 {
            prow += 1;
        }
    }
    let basis: Vec<IntRow> = m
        .iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect();
    hnf(&basis)
}

/// Elementary divisors (Smith normal form diagonal, nonzero entries only).
pub fn elementary_divisors(rows: &[IntRow]) -> Vec<i64> {
    let mut m: Vec<IntRow> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nr {
            let f = m[i][t] / m[t][t];
            for j in t..nc {
                m[i][j] -= f * m[t][j];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..nc {
            let f = m[t][j] / m[t][t];
            for i in t..nr {
                m[i][j] -= f * m[i][t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let p = m[t][t];
        if let Some(i) = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| m[i][j] % p != 0)) {
            for j in t..nc {
                m[t][j] += m[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer combination Σ t_j·rows_j.
pub fn combine(t: &[i64], rows: &[IntRow], n: usize) -> IntRow {
    let mut out = vec![0; n];
    for (tj, r) in t.iter().zip(rows) {
        for k in 0..n {
            out[k] += tj * r[k];
        }
    }
    out
}

/// An integer x with m·x = c for every row (m, c), if one exists.
pub fn solve_integer(rows: &[IntRow], c: &[i64], n: usize) -> Option<IntRow> {
    if rows.is_empty() {
        return Some(vec![0; n]);
    }
    let aug: Vec<IntRow> = rows
        .iter()
        .zip(c)
        .map(|(r, ci)| {
            let mut v = r.clone();
            v.push(-ci);
            v
        })
        .collect();
    let k = kernel(&aug, n + 1);
    let mut v = vec![0i64; n + 1];
    for b in &k {
        let (g, x, y) = ext_gcd(v[n], b[n]);
        if g == 0 {
            continue;
        }
        v = v.iter().zip(b).map(|(p, q)| x * p + y * q).collect();
    }
    match v[n] {
        1 => Some(v[..n].to_vec()),
        -1 => Some(v[..n].iter().map(|x| -x).collect()),
        _ => None,
    }
}

/// Membership of v in the row lattice of an HNF basis.
pub fn in_lattice(h: &[IntRow], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for row in h {
        let Some(p) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        if v[p] % row[p] != 0 {
            return false;
        }
        let f = v[p] / row[p];
        for k in 0..v.len() {
            v[k] -= f * row[k];
        }
    }
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_canonical() {
        let a = hnf(&[vec![2, 4], vec![3, 5]]);
        assert_eq!(a, vec![vec![1, 1], vec![0, 2]]);
        let b = hnf(&[vec![3, 5], vec![2, 4], vec![5, 9]]);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_basis() {
        let k = kernel(&[vec![1, 1, 0]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + v[1], 0);
        }
        assert!(in_lattice(&k, &[1, -1, 0]));
        assert!(in_lattice(&k, &[0, 0, 1]));
        assert_eq!(kernel(&[vec![2, 0], vec![0, 3]], 2).len(), 0);
    }

    #[test]
    fn integer_systems() {
        let x = solve_integer(&[vec![2, 1], vec![0, 3]], &[5, 3], 2).unwrap();
        assert_eq!(x, vec![2, 1]);
        assert!(solve_integer(&[vec![2, 0]], &[1], 2).is_none());
        assert_eq!(solve_integer(&[], &[], 2), Some(vec![0, 0]));
    }

    #[test]
    fn smith() {
        assert_eq!(elementary_divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(elementary_divisors(&[vec![2, 4], vec![4, 2]]), vec![2, 6]);
    }
}
