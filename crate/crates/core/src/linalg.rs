//! Dense linear algebra over MPFR floats.
//!
//! Systems here are small (rarely above 16×16) and ill-conditioned, so every
//! routine is a plain textbook algorithm run at working precision.

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<Float>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:.6e}", self.get(i, j).to_f64())).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Self { rows, cols, prec, data: vec![Float::new(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.set(i, i, Float::with_val(prec, 1));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, prec: u32, mut f: impl FnMut(usize, usize) -> Float) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(Float::with_val(prec, f(i, j)));
            }
        }
        Self { rows, cols, prec, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Float {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Float) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Float] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.prec, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, self.prec, |i, j| {
            let mut acc = Float::new(self.prec);
            for k in 0..self.cols {
                acc += Float::with_val(self.prec, self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Float]) -> Vec<Float> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Float::new(self.prec);
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += Float::with_val(self.prec, a * b);
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self, tol: &Float) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..i).all(|j| Float::with_val(self.prec, self.get(i, j) - self.get(j, i)).abs() <= *tol)
            })
    }

    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for v in &self.data {
            let a = Float::with_val(self.prec, v.abs_ref());
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
///
/// Fails with [`Error::LossOfPositivity`] when a squared pivot relative to its
/// diagonal entry drops below `2^(-bits/2)`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Internal("cholesky of a non-square matrix".into()));
    }
    let prec = a.prec();
    let floor = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let mut l = Matrix::zeros(n, n, prec);
    for j in 0..n {
        let mut d = a.get(j, j).clone();
        for k in 0..j {
            d -= Float::with_val(prec, l.get(j, k).square_ref());
        }
        let rel = Float::with_val(prec, &d / a.get(j, j));
        if !(d > 0) || rel < floor {
            return Err(Error::LossOfPositivity { index: j, value: format!("{:.6e}", d.to_f64()) });
        }
        let ljj = d.sqrt();
        for i in (j + 1)..n {
            let mut s = a.get(i, j).clone();
            for k in 0..j {
                s -= Float::with_val(prec, l.get(i, k) * l.get(j, k));
            }
            l.set(i, j, s / &ljj);
        }
        l.set(j, j, ljj);
    }
    Ok(l)
}

/// Inverse of a nonsingular lower-triangular matrix by forward substitution.
pub fn lower_triangular_inverse(l: &Matrix) -> Result<Matrix> {
    let n = l.rows();
    let prec = l.prec();
    let mut inv = Matrix::zeros(n, n, prec);
    for col in 0..n {
        for i in col..n {
            let mut s = Float::with_val(prec, if i == col { 1 } else { 0 });
            for k in col..i {
                s -= Float::with_val(prec, l.get(i, k) * inv.get(k, col));
            }
            if l.get(i, i).is_zero() {
                return Err(Error::Singular(format!("zero diagonal at {i}")));
            }
            inv.set(i, col, s / l.get(i, i));
        }
    }
    Ok(inv)
}

struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: i32,
}

fn lu_decompose(a: &Matrix) -> Result<Lu> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Internal("LU of a non-square matrix".into()));
    }
    let prec = a.prec();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1;
    for k in 0..n {
        let mut p = k;
        let mut best = Float::with_val(prec, lu.get(k, k).abs_ref());
        for i in (k + 1)..n {
            let v = Float::with_val(prec, lu.get(i, k).abs_ref());
            if v > best {
                best = v;
                p = i;
            }
        }
        if best.is_zero() {
            return Err(Error::Singular(format!("zero pivot in column {k}")));
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu.get(k, k).clone();
        for i in (k + 1)..n {
            let factor = Float::with_val(prec, lu.get(i, k) / &pivot);
            for j in (k + 1)..n {
                let t = Float::with_val(prec, &factor * lu.get(k, j));
                *lu.get_mut(i, j) -= t;
            }
            lu.set(i, k, factor);
        }
    }
    Ok(Lu { lu, perm, sign })
}

/// Determinant by partial-pivot LU. Returns exactly zero for a singular matrix.
pub fn det(a: &Matrix) -> Float {
    let prec = a.prec();
    if a.rows() == 0 {
        return Float::with_val(prec, 1);
    }
    match lu_decompose(a) {
        Ok(Lu { lu, sign, .. }) => {
            let mut d = Float::with_val(prec, sign);
            for i in 0..a.rows() {
                d *= lu.get(i, i);
            }
            d
        }
        Err(_) => Float::new(prec),
    }
}

/// Solves A x = b by partial-pivot LU.
pub fn solve(a: &Matrix, b: &[Float]) -> Result<Vec<Float>> {
    let n = a.rows();
    if b.len() != n {
        return Err(Error::Internal("right-hand side length mismatch".into()));
    }
    let prec = a.prec();
    let Lu { lu, perm, .. } = lu_decompose(a)?;
    let mut y: Vec<Float> = perm.iter().map(|&p| b[p].clone()).collect();
    for i in 0..n {
        for k in 0..i {
            let t = Float::with_val(prec, lu.get(i, k) * &y[k]);
            y[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = Float::with_val(prec, lu.get(i, k) * &y[k]);
            y[i] -= t;
        }
        let d = lu.get(i, i).clone();
        y[i] /= d;
    }
    Ok(y)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<Float> {
    let n = a.rows();
    let prec = a.prec();
    let mut m = a.clone();
    let scale = m.max_abs();
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 4)) * &scale;
    for _sweep in 0..100 {
        let mut off = Float::new(prec);
        for i in 0..n {
            for j in (i + 1)..n {
                off += Float::with_val(prec, m.get(i, j).square_ref());
            }
        }
        if off.sqrt() <= tiny {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m.get(p, q).is_zero() {
                    continue;
                }
                let apq = m.get(p, q).clone();
                let theta = Float::with_val(prec, m.get(q, q) - m.get(p, p)) / (Float::with_val(prec, &apq * 2u32));
                let sign = if theta < 0 { -1 } else { 1 };
                let denom = Float::with_val(prec, theta.abs_ref()) + (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let t = Float::with_val(prec, sign) / denom;
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                for k in 0..n {
                    let mkp = m.get(k, p).clone();
                    let mkq = m.get(k, q).clone();
                    m.set(k, p, Float::with_val(prec, &c * &mkp) - Float::with_val(prec, &s * &mkq));
                    m.set(k, q, Float::with_val(prec, &s * &mkp) + Float::with_val(prec, &c * &mkq));
                }
                for k in 0..n {
                    let mpk = m.get(p, k).clone();
                    let mqk = m.get(q, k).clone();
                    m.set(p, k, Float::with_val(prec, &c * &mpk) - Float::with_val(prec, &s * &mqk));
                    m.set(q, k, Float::with_val(prec, &s * &mpk) + Float::with_val(prec, &c * &mqk));
                }
            }
        }
    }
    let mut ev: Vec<Float> = (0..n).map(|i| m.get(i, i).clone()).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// Singular values of A (ascending), from the eigenvalues of A·Aᵀ.
pub fn singular_values(a: &Matrix) -> Vec<Float> {
    let aat = a.mul(&a.transpose());
    symmetric_eigenvalues(&aat)
        .into_iter()
        .map(|v| if v < 0 { Float::new(a.prec()) } else { v.sqrt() })
        .collect()
}

/// Result of a one-dimensional nullspace extraction.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub vector: Vec<Float>,
    /// Two smallest singular values of the row/column-equilibrated matrix.
    pub smallest_singular: (Float, Float),
}

/// Spans the nullspace of an (n-1)×n matrix that is expected to have full row
/// rank.
///
/// Rows and columns are equilibrated first; the smallest singular value of the
/// equilibrated matrix must exceed `gate`, otherwise the nullspace is not
/// one-dimensional at working precision. The vector is found by full-pivot
/// elimination.
pub fn nullspace_1d(a: &Matrix, gate: &Float) -> Result<Nullspace> {
    let (m, n) = (a.rows(), a.cols());
    let prec = a.prec();
    if m + 1 != n {
        return Err(Error::Internal(format!("nullspace_1d expects (n-1)×n, got {m}×{n}")));
    }
    let mut w = a.clone();
    let mut col_scale = vec![Float::with_val(prec, 1); n];
    for (j, cs) in col_scale.iter_mut().enumerate() {
        let mut mx = Float::new(prec);
        for i in 0..m {
            mx = mx.max(&Float::with_val(prec, w.get(i, j).abs_ref()));
        }
        if !mx.is_zero() {
            *cs = mx.recip();
            for i in 0..m {
                *w.get_mut(i, j) *= &*cs;
            }
        }
    }
    for i in 0..m {
        let mut mx = Float::new(prec);
        for j in 0..n {
            mx = mx.max(&Float::with_val(prec, w.get(i, j).abs_ref()));
        }
        if !mx.is_zero() {
            for j in 0..n {
                *w.get_mut(i, j) /= &mx;
            }
        }
    }

    let sv = singular_values(&w);
    let zero = Float::new(prec);
    let smallest = (
        sv.first().cloned().unwrap_or_else(|| zero.clone()),
        sv.get(1).cloned().unwrap_or_else(|| zero.clone()),
    );
    if m > 0 && smallest.0 <= *gate {
        return Err(Error::NullspaceDimension(
            format!("{:.3e}", smallest.0.to_f64()),
            format!("{:.3e}", smallest.1.to_f64()),
        ));
    }

    // Full-pivot elimination to upper-triangular form.
    let mut col_perm: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let (mut pi, mut pj) = (k, k);
        let mut best = Float::new(prec);
        for i in k..m {
            for j in k..n {
                let v = Float::with_val(prec, w.get(i, j).abs_ref());
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if best.is_zero() {
            return Err(Error::NullspaceDimension("0".into(), format!("{:.3e}", smallest.1.to_f64())));
        }
        if pi != k {
            for j in 0..n {
                w.data.swap(k * n + j, pi * n + j);
            }
        }
        if pj != k {
            for i in 0..m {
                w.data.swap(i * n + k, i * n + pj);
            }
            col_perm.swap(k, pj);
        }
        let pivot = w.get(k, k).clone();
        for i in (k + 1)..m {
            let factor = Float::with_val(prec, w.get(i, k) / &pivot);
            for j in k..n {
                let t = Float::with_val(prec, &factor * w.get(k, j));
                *w.get_mut(i, j) -= t;
            }
        }
    }
    // Free variable is the last permuted column.
    let mut y = vec![Float::new(prec); n];
    y[n - 1] = Float::with_val(prec, 1);
    for i in (0..m).rev() {
        let mut s = Float::new(prec);
        for j in (i + 1)..n {
            s += Float::with_val(prec, w.get(i, j) * &y[j]);
        }
        y[i] = -s / w.get(i, i);
    }
    let mut v = vec![Float::new(prec); n];
    for (k, &orig) in col_perm.iter().enumerate() {
        v[orig] = Float::with_val(prec, &y[k] * &col_scale[orig]);
    }
    Ok(Nullspace { vector: v, smallest_singular: smallest })
}
