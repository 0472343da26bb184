use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense 4x4 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4c<T>(pub [[Complex<T>; 4]; 4]);

impl<T: Real> Matrix4c<T> {
    pub fn zeros() -> Self {
        Matrix4c([[Complex::new(T::zero(), T::zero()); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_real_diagonal(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m[(i, i)] = Complex::new(d[i], T::zero());
        }
        m
    }

    /// `|v><v|` for an unnormalized vector.
    pub fn outer(v: &[Complex<T>; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = *z * s);
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = m[(i, j)] + other[(i, j)];
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - self^†`.
    pub fn hermiticity_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        d
    }

    fn off_diagonal_norm_sq(&self) -> T {
        let mut s = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    s = s + self[(i, j)].norm_sqr();
                }
            }
        }
        s
    }
}

impl<T> Index<(usize, usize)> for Matrix4c<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix4c<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real> Mul for Matrix4c<T> {
    type Output = Matrix4c<T>;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..4 {
                    acc = acc + self[(i, k)] * rhs[(k, j)];
                }
                m[(i, j)] = acc;
            }
        }
        m
    }
}

/// Eigen-decomposition of a Hermitian 4x4 matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues ascending and the unitary whose columns are
/// the matching eigenvectors.
pub fn hermitian_eigen<T: Real>(m: &Matrix4c<T>) -> ([T; 4], Matrix4c<T>) {
    let mut a = *m;
    // symmetrize; the strict lower triangle is ignored otherwise
    for i in 0..4 {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in (i + 1)..4 {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5);
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = Matrix4c::identity();
    let scale = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .fold(T::zero(), |s, ij| s + a[ij].norm_sqr());
    let stop = scale * T::epsilon() * T::epsilon();

    for _sweep in 0..64 {
        if a.off_diagonal_norm_sq() <= stop {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (T::lit(2.0) * r);
                let t = if tau >= T::zero() {
                    (tau + (T::one() + tau * tau).sqrt()).recip()
                } else {
                    -(-tau + (T::one() + tau * tau).sqrt()).recip()
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                // U = P J with P = diag(.., conj(phase) at q, ..) making a_pq real
                let mut u = Matrix4c::identity();
                u[(p, p)] = Complex::new(c, T::zero());
                u[(p, q)] = Complex::new(s, T::zero());
                u[(q, p)] = -phase.conj() * s;
                u[(q, q)] = phase.conj() * c;
                a = u.adjoint() * a * u;
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                v = v * u;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let mut vals = [T::zero(); 4];
    let mut vecs = Matrix4c::zeros();
    for (col, &k) in order.iter().enumerate() {
        vals[col] = a[(k, k)].re;
        for row in 0..4 {
            vecs[(row, col)] = v[(row, k)];
        }
    }
    (vals, vecs)
}

/// Spin-flipped state `(σy⊗σy) ρ* (σy⊗σy)` in the basis `{gg, ge, eg, ee}`.
pub fn spin_flip<T: Real>(rho: &Matrix4c<T>) -> Matrix4c<T> {
    // σy⊗σy is real, antidiagonal with signs (-1, +1, +1, -1)
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let mut m = Matrix4c::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = rho[(3 - i, 3 - j)].conj() * T::lit(SIGN[i] * SIGN[j]);
        }
    }
    m
}

/// Square roots of the eigenvalues of `ρ ρ̃`, sorted descending.
///
/// With `ρ = A A†` from the eigen-decomposition of `ρ`, the spectrum of
/// `ρ ρ̃` equals that of the Hermitian `A† ρ̃ A`, so both steps stay in
/// Hermitian arithmetic even when `ρ` is rank deficient. Eigenvalues in
/// `[-1e-10, 0)` are clamped to zero; anything more negative is an error.
pub fn concurrence_spectrum<T: Real>(rho: &Matrix4c<T>) -> Result<[T; 4]> {
    let neg_tol = T::lit(1e-10).max(T::lit(100.0) * T::epsilon());
    if rho.hermiticity_defect() > neg_tol {
        return Err(Error::Numerical("density matrix is not Hermitian".into()));
    }
    let (vals, vecs) = hermitian_eigen(rho);
    if vals[0] < -neg_tol {
        return Err(Error::Numerical(format!(
            "density matrix has negative eigenvalue {:?}",
            vals[0]
        )));
    }
    let mut factor = vecs;
    for (col, &lam) in vals.iter().enumerate() {
        let root = lam.max(T::zero()).sqrt();
        for row in 0..4 {
            factor[(row, col)] = factor[(row, col)] * root;
        }
    }
    let h = factor.adjoint() * spin_flip(rho) * factor;
    let (mu, _) = hermitian_eigen(&h);
    if mu[0] < -neg_tol {
        return Err(Error::Numerical(format!(
            "spin-flip product has negative eigenvalue {:?}",
            mu[0]
        )));
    }
    Ok([
        mu[3].max(T::zero()).sqrt(),
        mu[2].max(T::zero()).sqrt(),
        mu[1].max(T::zero()).sqrt(),
        mu[0].max(T::zero()).sqrt(),
    ])
}
