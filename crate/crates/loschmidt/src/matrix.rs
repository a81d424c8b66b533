//! Dense complex linear algebra for small matrices.
//!
//! Everything in this crate works with system dimensions of 2-4 and purified
//! (doubled) dimensions up to 16, so the kernels favor robustness over
//! asymptotics: Hermitian eigendecomposition is a cyclic complex Jacobi
//! sweep, and every matrix function (unitary exponential, positive square
//! root) is evaluated through the eigenbasis. That route keeps exponentials
//! exactly unitary and square roots exactly Hermitian up to roundoff.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{real, Real};

/// Max entrywise deviation from `A = A^dag` accepted by Hermitian kernels.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Max entrywise deviation from `U^dag U = 1` accepted for gauges.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Eigenvalues of a nominally PSD matrix below this are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-12;
/// Eigenvalues below this are treated as genuinely indefinite input.
pub const PSD_FLOOR: f64 = -1e-9;

/// Square complex matrix in row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

/// Sign of the exponent in `exp(sign * i H t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from a row-major entry list.
    pub fn from_vec(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex::zero() {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] = out.entries[i * d + j] + a * other.entries[k * d + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "mul_vec dimension mismatch");
        let d = self.dim;
        let mut out = vec![Complex::zero(); d];
        for i in 0..d {
            let mut acc = Complex::zero();
            for j in 0..d {
                acc = acc + self.entries[i * d + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Self { dim: self.dim, entries }
    }

    pub fn scale_re(&self, c: T) -> Self {
        self.scale(Complex::new(c, T::zero()))
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.entries[j * d + i].conj())
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.entries[j * d + i])
    }

    pub fn trace(&self) -> Complex<T> {
        let d = self.dim;
        (0..d).fold(Complex::zero(), |acc, i| acc + self.entries[i * d + i])
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `A - A^dag`.
    pub fn hermiticity_deviation(&self) -> T {
        let d = self.dim;
        let mut dev = T::zero();
        for i in 0..d {
            for j in i..d {
                let delta = (self.entries[i * d + j] - self.entries[j * d + i].conj()).norm();
                dev = dev.max(delta);
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Largest entrywise modulus of `U^dag U - 1`.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Determinant by LU with partial pivoting; exact enough for the small
    /// dimensions used here.
    pub fn det(&self) -> Complex<T> {
        let d = self.dim;
        let mut lu = self.entries.clone();
        let mut det = Complex::one();
        for col in 0..d {
            let mut pivot = col;
            let mut best = lu[col * d + col].norm();
            for row in col + 1..d {
                let mag = lu[row * d + col].norm();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == T::zero() {
                return Complex::zero();
            }
            if pivot != col {
                for j in 0..d {
                    lu.swap(col * d + j, pivot * d + j);
                }
                det = -det;
            }
            let diag = lu[col * d + col];
            det = det * diag;
            for row in col + 1..d {
                let factor = lu[row * d + col] / diag;
                for j in col..d {
                    let sub = factor * lu[col * d + j];
                    lu[row * d + j] = lu[row * d + j] - sub;
                }
            }
        }
        det
    }

    /// Hermitian part `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = real::<T>(0.5);
        self.add(&self.adjoint()).scale_re(half)
    }

    /// Anti-Hermitian part `(A - A^dag) / 2`.
    pub fn anti_hermitian_part(&self) -> Self {
        let half = real::<T>(0.5);
        self.sub(&self.adjoint()).scale_re(half)
    }
}

impl<T> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i * self.dim + j]
    }
}

/// Pauli matrix `sigma_x`.
pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = Complex::one();
    m[(1, 0)] = Complex::one();
    m
}

/// Pauli matrix `sigma_y`.
pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = Complex::new(T::zero(), -T::one());
    m[(1, 0)] = Complex::new(T::zero(), T::one());
    m
}

/// Pauli matrix `sigma_z`.
pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex::one();
    m[(1, 1)] = -Complex::<T>::one();
    m
}

/// `r . sigma` for a real 3-vector `r`.
pub fn pauli_dot<T: Real>(r: [T; 3]) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex::new(r[2], T::zero());
    m[(1, 1)] = Complex::new(-r[2], T::zero());
    m[(0, 1)] = Complex::new(r[0], -r[1]);
    m[(1, 0)] = Complex::new(r[0], r[1]);
    m
}

/// Eigendecomposition of a Hermitian matrix: real ascending eigenvalues and
/// an orthonormal eigenvector matrix (columns).
#[derive(Clone, Debug)]
pub struct EigenSystem<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    /// `V diag(f(lambda)) V^dag` for a complex-valued function of the spectrum.
    pub fn apply(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let d = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(d);
        for k in 0..d {
            let fk = f(self.values[k]);
            if fk == Complex::zero() {
                continue;
            }
            for i in 0..d {
                let vik = v[(i, k)] * fk;
                for j in 0..d {
                    out[(i, j)] = out[(i, j)] + vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `V diag(lambda) V^dag`, for reconstruction checks.
    pub fn reconstruction(&self) -> ComplexMatrix<T> {
        self.apply(|l| Complex::new(l, T::zero()))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Rejects inputs whose entrywise deviation from Hermiticity exceeds
/// `HERMITICITY_TOL`. Eigenvalues come back ascending; eigenvector columns
/// are phase-fixed so their first significant component is real positive,
/// which makes the decomposition deterministic.
pub fn eig_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    let dev = a.hermiticity_deviation();
    if dev > real(HERMITICITY_TOL) {
        return Err(Error::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
    }
    let d = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(d);
    // diagonal forced real; Jacobi preserves this
    for i in 0..d {
        m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
    }

    let scale = m.frobenius_norm().max(T::one());
    let stop = T::epsilon() * scale;
    let max_sweeps = 100;

    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for p in 0..d {
            for q in p + 1..d {
                off = off + m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let b = m[(p, q)];
                let r = b.norm();
                if r <= stop * real(1e-2) {
                    continue;
                }
                // phase u = b/|b| makes the pivot real; then a real rotation
                let u = b / Complex::new(r, T::zero());
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (r + r);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= T::zero() {
                    -T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let cs = Complex::new(c, T::zero());
                let su = Complex::new(s, T::zero()) * u;
                let su_conj = Complex::new(s, T::zero()) * u.conj();

                // rows p, q of m: left-multiply by the rotation adjoint
                for j in 0..d {
                    let mp = m[(p, j)];
                    let mq = m[(q, j)];
                    m[(p, j)] = cs * mp + su * mq;
                    m[(q, j)] = cs * mq - su_conj * mp;
                }
                // columns p, q of m and v: right-multiply by the rotation
                for i in 0..d {
                    let mp = m[(i, p)];
                    let mq = m[(i, q)];
                    m[(i, p)] = cs * mp + su_conj * mq;
                    m[(i, q)] = cs * mq - su * mp;

                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = cs * vp + su_conj * vq;
                    v[(i, q)] = cs * vq - su * vp;
                }
                // the 2x2 block is now diagonal up to roundoff
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues")
    });
    let values: Vec<T> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::<T>::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..d {
            vectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    canonicalize_column_phases(&mut vectors);
    Ok(EigenSystem { values, vectors })
}

/// Rotates each column so its first component of significant modulus is real
/// positive. Determinism of downstream purifications relies on this.
fn canonicalize_column_phases<T: Real>(v: &mut ComplexMatrix<T>) {
    let d = v.dim();
    for col in 0..d {
        let mut max_mag = T::zero();
        for i in 0..d {
            max_mag = max_mag.max(v[(i, col)].norm());
        }
        if max_mag == T::zero() {
            continue;
        }
        let threshold = max_mag * real(1e-6);
        let lead = (0..d).find(|&i| v[(i, col)].norm() > threshold).unwrap_or(0);
        let mag = v[(lead, col)].norm();
        if mag == T::zero() {
            continue;
        }
        let phase = v[(lead, col)] / Complex::new(mag, T::zero());
        let rot = phase.conj();
        for i in 0..d {
            v[(i, col)] = v[(i, col)] * rot;
        }
    }
}

/// `exp(sign * i H t)` for Hermitian `H`, evaluated in the eigenbasis so the
/// result is unitary to roundoff.
pub fn expm_i<T: Real>(h: &ComplexMatrix<T>, t: T, sign: Sign) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(h)?;
    let f = sign.factor::<T>();
    Ok(eig.apply(|l| Complex::from_polar(T::one(), f * l * t)))
}

/// Hermitian PSD square root. Eigenvalues in `[PSD_FLOOR, PSD_CLAMP)` are
/// clamped to zero; anything below `PSD_FLOOR` is genuinely indefinite input.
pub fn sqrtm_psd<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(rho)?;
    let min = eig.values[0];
    if min < real(PSD_FLOOR) {
        return Err(Error::NotPositive { min_eigenvalue: min.to_f64().unwrap_or(f64::NAN) });
    }
    let clamp = real::<T>(PSD_CLAMP);
    let root = eig.apply(|l| {
        if l < clamp {
            Complex::zero()
        } else {
            Complex::new(l.sqrt(), T::zero())
        }
    });
    Ok(root.hermitian_part())
}

/// Kronecker product; the first factor's index is the major one, matching the
/// `(system, ancilla)` composite index `a*d + c` used for purified vectors.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == Complex::zero() {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial trace over the second (ancilla) factor of a `d^2`-dimensional
/// operator with composite index `a*d + c`.
pub fn partial_trace_second<T: Real>(m: &ComplexMatrix<T>, d: usize) -> Result<ComplexMatrix<T>> {
    if m.dim() != d * d {
        return Err(Error::DimMismatch { expected: d * d, got: m.dim() });
    }
    let mut out = ComplexMatrix::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Complex::zero();
            for c in 0..d {
                acc = acc + m[(a * d + c, b * d + c)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::ComplexMatrix;
    use crate::{C64, Real};
    use num_complex::Complex;
    use num_traits::Zero;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .hermitian_part()
    }

    /// Random unitary by Gram-Schmidt on a random complex matrix; kept
    /// independent of the eigendecomposition it is used to test.
    pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let raw = ComplexMatrix::from_fn(d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let mut cols: Vec<Vec<C64>> = (0..d).map(|j| (0..d).map(|i| raw[(i, j)]).collect()).collect();
        for j in 0..d {
            for k in 0..j {
                let proj: C64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..d {
                    let sub = proj * cols[k][i];
                    cols[j][i] -= sub;
                }
            }
            let norm: f64 = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for i in 0..d {
                cols[j][i] /= norm;
            }
        }
        ComplexMatrix::from_fn(d, |i, j| cols[j][i])
    }

    /// Random full-rank density matrix: `(M M^dag + eps 1) / tr`.
    pub fn random_full_rank_density(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let m = ComplexMatrix::from_fn(d, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let psd = m.matmul(&m.adjoint());
        let shifted = psd.add(&ComplexMatrix::identity(d).scale_re(0.1));
        let tr = shifted.trace().re;
        shifted.scale_re(1.0 / tr)
    }

    /// Plain truncated Taylor series for `exp(sign i H t)`; the independent
    /// oracle for the eigenbasis exponential.
    pub fn expm_taylor<T: Real>(
        h: &ComplexMatrix<T>,
        t: T,
        sign: super::Sign,
        terms: usize,
    ) -> ComplexMatrix<T> {
        let d = h.dim();
        let f = match sign {
            super::Sign::Plus => T::one(),
            super::Sign::Minus => -T::one(),
        };
        let x = h.scale(Complex::new(T::zero(), f * t));
        let mut acc = ComplexMatrix::identity(d);
        let mut term = ComplexMatrix::identity(d);
        for k in 1..=terms {
            term = term.matmul(&x).scale(Complex::new(T::one() / crate::real(k as f64), T::zero()));
            acc = acc.add(&term);
        }
        let _ = Complex::<T>::zero();
        acc
    }
}
