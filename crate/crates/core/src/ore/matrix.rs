use std::fmt;

use crate::field::{DiffFieldSpec, RatFunc};

use super::OreError;

/// Dense matrix over k = C(z), tagged with its difference field.
#[derive(Clone, PartialEq, Eq)]
pub struct MatK {
    spec: DiffFieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl MatK {
    pub fn zero(spec: &DiffFieldSpec, rows: usize, cols: usize) -> Self {
        MatK {
            spec: spec.clone(),
            rows,
            cols,
            data: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(spec: &DiffFieldSpec, n: usize) -> Self {
        let mut m = Self::zero(spec, n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn diag(spec: &DiffFieldSpec, d: &[RatFunc]) -> Self {
        let mut m = Self::zero(spec, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(spec: &DiffFieldSpec, rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        MatK {
            spec: spec.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// E_n(α_1..α_n) = Diag(α)·E with ones at (i, i+1) and (n, 1).
    pub fn cyclic(spec: &DiffFieldSpec, alphas: &[RatFunc]) -> Self {
        let n = alphas.len();
        let mut m = Self::zero(spec, n, n);
        for (i, a) in alphas.iter().enumerate() {
            m.set(i, (i + 1) % n, a.clone());
        }
        m
    }

    /// Constant permutation matrix with ones at (i, perm[i]).
    pub fn permutation(spec: &DiffFieldSpec, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(spec, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, RatFunc::one());
        }
        m
    }

    pub fn spec(&self) -> &DiffFieldSpec {
        &self.spec
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> Vec<RatFunc> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn entries(&self) -> &[RatFunc] {
        &self.data
    }
    pub fn to_rows(&self) -> Vec<Vec<RatFunc>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn with_spec(&self, spec: &DiffFieldSpec) -> Self {
        MatK {
            spec: spec.clone(),
            ..self.clone()
        }
    }

    fn check(&self, o: &MatK) -> Result<(), OreError> {
        if self.spec != o.spec {
            Err(OreError::SpecMismatch)
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, o: &MatK) -> Result<MatK, OreError> {
        self.check(o)?;
        if self.cols != o.rows {
            return Err(OreError::Shape);
        }
        let mut m = MatK::zero(&self.spec, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = RatFunc::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn add(&self, o: &MatK) -> Result<MatK, OreError> {
        self.check(o)?;
        if self.rows != o.rows || self.cols != o.cols {
            return Err(OreError::Shape);
        }
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(o.data.iter()) {
            *x = &*x + y;
        }
        Ok(m)
    }

    pub fn sub(&self, o: &MatK) -> Result<MatK, OreError> {
        self.add(&o.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, f: &RatFunc) -> MatK {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = f * &*x;
        }
        m
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> MatK {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = f(x);
        }
        m
    }

    pub fn transpose(&self) -> MatK {
        let mut m = MatK::zero(&self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    /// Entrywise φ^power.
    pub fn phi(&self, power: i64) -> MatK {
        let spec = self.spec.clone();
        self.map(|x| spec.phi(x, power))
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> MatK {
        let mut m = MatK::zero(&self.spec, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn block_diag(a: &MatK, b: &MatK) -> MatK {
        let n = a.rows + b.rows;
        let m_ = a.cols + b.cols;
        let mut m = MatK::zero(&a.spec, n, m_);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<RatFunc> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Row echelon elimination; returns (rank, determinant for square input).
    fn eliminate(&self) -> (usize, RatFunc) {
        let mut a = self.to_rows();
        let mut det = RatFunc::one();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                det = RatFunc::zero();
                continue;
            };
            if piv != rank {
                a.swap(piv, rank);
                det = -det;
            }
            det = &det * &a[rank][col];
            let inv = a[rank][col].inv();
            for r in rank + 1..self.rows {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..self.cols {
                    let t = &f * &a[rank][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> RatFunc {
        assert!(self.is_square());
        match self.rows {
            0 => RatFunc::one(),
            1 => self.get(0, 0).clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            _ => self.eliminate().1,
        }
    }

    pub fn inverse(&self) -> Result<MatK, OreError> {
        if !self.is_square() {
            return Err(OreError::Shape);
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv: Vec<Vec<RatFunc>> = MatK::identity(&self.spec, n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(OreError::Singular)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = a[col][col].inv();
            for c in 0..n {
                a[col][c] = &a[col][c] * &p;
                inv[col][c] = &inv[col][c] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                    let t = &f * &inv[col][c];
                    inv[r][c] = &inv[r][c] - &t;
                }
            }
        }
        Ok(MatK::from_rows(&self.spec, inv))
    }

    /// Solves self·x = b for square invertible self.
    pub fn solve(&self, b: &[RatFunc]) -> Result<Vec<RatFunc>, OreError> {
        let inv = self.inverse()?;
        let col = MatK::from_rows(&self.spec, b.iter().map(|x| vec![x.clone()]).collect());
        Ok(inv.mul(&col)?.col(0))
    }

    /// Text form re-readable by the CLI parser: [[a, b], [c, d]].
    pub fn to_expr(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for MatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for MatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// φ(T)·A·T⁻¹.
pub fn gauge(a: &MatK, t: &MatK) -> Result<MatK, OreError> {
    if a.spec() != t.spec() {
        return Err(OreError::SpecMismatch);
    }
    let ti = t.inverse()?;
    t.phi(1).mul(a)?.mul(&ti)
}

/// A_[ℓ] = φ^{ℓ-1}(A)···φ(A)·A.
pub fn iterate(a: &MatK, ell: usize) -> Result<MatK, OreError> {
    let mut acc = MatK::identity(a.spec(), a.rows());
    for i in 0..ell {
        acc = a.phi(i as i64).mul(&acc)?;
    }
    Ok(acc)
}

/// True when B = φ(T)·A·T⁻¹ holds exactly.
pub fn check_gauge(a: &MatK, t: &MatK, b: &MatK) -> bool {
    match (t.phi(1).mul(a), b.mul(t)) {
        (Ok(lhs), Ok(rhs)) => lhs == rhs,
        _ => false,
    }
}
