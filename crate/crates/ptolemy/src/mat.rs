//! Small dense complex matrices.
//!
//! All sizes here are tiny (n at most ~20 for Newton systems, n <= 5 for the
//! cocycle formulas), so plain Gaussian elimination with partial pivoting is
//! used throughout.



use crate::{Scalar, C};

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> std::fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![C::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.concat() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)] + a * other[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Submatrix by row/column index lists (0-based, need not be contiguous).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    /// Minor: determinant of the submatrix on `rows` x `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> C<T> {
        assert_eq!(rows.len(), cols.len());
        self.submatrix(rows, cols).det()
    }

    pub fn det(&self) -> C<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return C::new(T::one(), T::zero());
        }
        let mut a = self.clone();
        let mut det = C::new(T::one(), T::zero());
        for k in 0..n {
            let mut piv = k;
            let mut best = a[(k, k)].norm_sqr();
            for i in k + 1..n {
                let v = a[(i, k)].norm_sqr();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == T::zero() {
                return C::new(T::zero(), T::zero());
            }
            if piv != k {
                a.swap_rows(k, piv);
                det = -det;
            }
            det = det * a[(k, k)];
            let inv = a[(k, k)].inv();
            for i in k + 1..n {
                let factor = a[(i, k)] * inv;
                if factor.norm_sqr() == T::zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[(i, j)] - factor * a[(k, j)];
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Solve `self * x = b` for square `self`; returns None when singular to
    /// working precision.
    pub fn solve(&self, b: &[C<T>]) -> Option<Vec<C<T>>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        for k in 0..n {
            let mut piv = k;
            let mut best = a[(k, k)].norm_sqr();
            for i in k + 1..n {
                let v = a[(i, k)].norm_sqr();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return None;
            }
            if piv != k {
                a.swap_rows(k, piv);
                rhs.swap(k, piv);
            }
            let inv = a[(k, k)].inv();
            for i in k + 1..n {
                let factor = a[(i, k)] * inv;
                if factor.norm_sqr() == T::zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[(i, j)] - factor * a[(k, j)];
                    a[(i, j)] = v;
                }
                let v = rhs[i] - factor * rhs[k];
                rhs[i] = v;
            }
        }
        for k in (0..n).rev() {
            let mut acc = rhs[k];
            for j in k + 1..n {
                acc = acc - a[(k, j)] * rhs[j];
            }
            rhs[k] = acc * a[(k, k)].inv();
        }
        Some(rhs)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![C::new(T::zero(), T::zero()); n];
            e[j] = C::new(T::one(), T::zero());
            let col = self.solve(&e)?;
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        Some(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a - *b;
        }
        out
    }

    /// Entrywise max modulus.
    pub fn max_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn trace(&self) -> C<T> {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).fold(C::new(T::zero(), T::zero()), |a, b| a + b)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_unit_upper_triangular(&self, tol: T) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if i == j {
                    if (z - C::new(T::one(), T::zero())).norm() > tol {
                        return false;
                    }
                } else if i > j && z.norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Nonzero entries only on the lower-left to upper-right diagonal.
    pub fn is_counter_diagonal(&self, tol: T) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                if j != n - 1 - i && self[(i, j)].norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Counter-diagonal matrix `q(a_1, ..., a_n)`: entries from the lower left
/// corner up to the upper right.
pub fn counter_diagonal<T: Scalar>(entries: &[C<T>]) -> Mat<T> {
    let n = entries.len();
    let mut m = Mat::zeros(n, n);
    for (k, &a) in entries.iter().enumerate() {
        m[(n - 1 - k, k)] = a;
    }
    m
}

/// Elementary matrix `x_k(v)`: identity plus `v` at position (k, k+1),
/// 1-based `k`.
pub fn elementary_x<T: Scalar>(n: usize, k: usize, v: C<T>) -> Mat<T> {
    assert!(k >= 1 && k < n);
    let mut m = Mat::identity(n);
    m[(k - 1, k)] = v;
    m
}

/// `pi_k(b_1, ..., b_k) = x_1(b_1) x_2(b_2) ... x_k(b_k)`.
pub fn pi_product<T: Scalar>(n: usize, vals: &[C<T>]) -> Mat<T> {
    let mut m = Mat::identity(n);
    for (idx, &b) in vals.iter().enumerate() {
        m = m.mul(&elementary_x(n, idx + 1, b));
    }
    m
}
