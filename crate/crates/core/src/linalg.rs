//! Dense matrices over any [`Ring`], with elimination over a [`Field`].

use std::fmt;

use crate::field::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows.iter().take(self.rows)).finish()
    }
}

impl<T: Clone> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Mat::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Mat::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Monic characteristic polynomial `det(λI − A)`, coefficients from `λⁿ` down to `λ⁰`.
    ///
    /// Faddeev–LeVerrier; only ring operations and division by small integers are used.
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![T::one()];
        let mut m = Mat::<T>::zeros(n, n);
        for k in 1..=n {
            let prev = coeffs.last().cloned().unwrap_or_else(T::one);
            m = self.mul(&m);
            for i in 0..n {
                let d = m.get(i, i).add(&prev);
                m.set(i, i, d);
            }
            let c = self.mul(&m).trace().neg().div_int(k as i64);
            coeffs.push(c);
        }
        coeffs
    }

    /// Determinant via the characteristic polynomial.
    pub fn det_ring(&self) -> T {
        let n = self.rows;
        let c = self.charpoly().pop().unwrap_or_else(T::one);
        if n % 2 == 1 {
            c.neg()
        } else {
            c
        }
    }
}

/// Zero test used by elimination: exact for exact types, relative for floats.
pub trait Pivot: Field {
    fn negligible(&self, scale: f64) -> bool;
}

const FLOAT_ZERO: f64 = 1e-11;

impl Pivot for num_complex::Complex64 {
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_ZERO * scale.max(1.0)
    }
}

impl Pivot for crate::field::Value {
    fn negligible(&self, scale: f64) -> bool {
        match self {
            crate::field::Value::Exact(c) => c.is_zero(),
            crate::field::Value::Float(z) => z.negligible(scale),
        }
    }
}

impl Pivot for crate::field::Cyclo {
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Pivot for crate::field::Scalar {
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<T: Pivot>(m: &mut Mat<T>) -> Vec<usize> {
    let scale = m.entries().map(Field::magnitude).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let best = (r..m.rows())
            .filter(|&i| !m.get(i, c).negligible(scale))
            .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
        let Some(p) = best else {
            for i in r..m.rows() {
                m.set(i, c, T::zero());
            }
            continue;
        };
        if p != r {
            for j in 0..m.cols() {
                let a = m.get(p, j).clone();
                let b = m.get(r, j).clone();
                m.set(p, j, b);
                m.set(r, j, a);
            }
        }
        let inv = m.get(r, c).inv().expect("pivot is nonzero");
        for j in 0..m.cols() {
            let v = m.get(r, j).mul(&inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows() {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..m.cols() {
                let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                m.set(i, j, v);
            }
            m.set(i, c, T::zero());
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl<T: Pivot> Mat<T> {
    pub fn rank(&self) -> usize {
        rref(&mut self.clone()).len()
    }

    /// Inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let scale = m.entries().map(Field::magnitude).fold(0.0, f64::max);
        let mut det = T::one();
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !m.get(i, c).negligible(scale))
                .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
            let Some(p) = best else {
                return T::zero();
            };
            if p != c {
                for j in 0..n {
                    let a = m.get(p, j).clone();
                    let b = m.get(c, j).clone();
                    m.set(p, j, b);
                    m.set(c, j, a);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// A basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = rref(&mut m);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Solve `A x = b`. Returns `None` when inconsistent; free variables are set to zero.
    pub fn solve(&self, b: &[T]) -> Option<SolveResult<T>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let mut aug = Mat::from_fn(self.rows, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = rref(&mut aug);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![T::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, n).clone();
        }
        Some(SolveResult {
            x,
            rank: pivots.len(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult<T> {
    pub x: Vec<T>,
    pub rank: usize,
}

/// Evaluate a polynomial given high-to-low at `x`.
pub fn horner<T: Ring>(coeffs: &[T], x: &T) -> T {
    coeffs.iter().fold(T::zero(), |acc, c| acc.mul(x).add(c))
}

/// Coefficients, high to low, of `∏ (λ − r)`.
pub fn poly_from_roots<T: Ring>(roots: &[T]) -> Vec<T> {
    let mut p = vec![T::one()];
    for r in roots {
        let mut next = p.clone();
        next.push(T::zero());
        for (k, c) in p.iter().enumerate() {
            next[k + 1] = next[k + 1].sub(&c.mul(r));
        }
        p = next;
    }
    p
}
