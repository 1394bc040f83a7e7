//! Exact matrix and vector algebra over `F_q` for the small fixed shapes used
//! by the classifier.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf::{Field, Fq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("polynomial is not a monic cubic")]
    NotMonicCubic,
    #[error("characteristic polynomial is reducible")]
    ReducibleCharpoly,
    #[error("matrix is singular")]
    Singular,
}

/// Largest ambient dimension a [`Subspace`] can hold (3x3 matrices as 9-vectors).
pub const MAX_AMBIENT: usize = 9;

/// Reduces `rows` to reduced row echelon form in place, choosing pivots among
/// the first `ncols` columns; row operations act on all `N` columns. Nonzero
/// rows end up first, pivots are 1 and pivot columns are cleared above and
/// below. Returns the rank.
pub fn rref<const N: usize>(field: &Field, rows: &mut [[Fq; N]], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv_nonzero(rows[rank][col]);
        if inv != Fq::ONE {
            for x in rows[rank][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = field.neg(row[col]);
            for c in col..N {
                row[c] = field.mul_add(factor, pivot_row[c], row[c]);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank only; cheaper than [`rref`] since it skips back-substitution.
pub fn rank_of_rows<const N: usize>(field: &Field, rows: &mut [[Fq; N]], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv_nonzero(rows[rank][col]);
        let pivot_row = rows[rank];
        for row in rows[rank + 1..].iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = field.neg(field.mul(row[col], inv));
            for c in col..N {
                row[c] = field.mul_add(factor, pivot_row[c], row[c]);
            }
        }
        rank += 1;
    }
    rank
}

/// A dense `R x C` matrix over `F_q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<const R: usize, const C: usize> {
    pub entries: [[Fq; C]; R],
}

pub type Mat2 = Matrix<2, 2>;
pub type Mat2x3 = Matrix<2, 3>;
pub type Mat3 = Matrix<3, 3>;

impl<const R: usize, const C: usize> fmt::Debug for Matrix<R, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u8>> = self.entries.iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
        write!(f, "{rows:?}")
    }
}

impl<const R: usize, const C: usize> Default for Matrix<R, C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const R: usize, const C: usize> Matrix<R, C> {
    pub const fn zero() -> Self {
        Matrix { entries: [[Fq::ZERO; C]; R] }
    }

    pub const fn new(entries: [[Fq; C]; R]) -> Self {
        Matrix { entries }
    }

    /// Builds a matrix from raw element encodings.
    pub fn from_values(values: [[u8; C]; R]) -> Self {
        Matrix { entries: values.map(|r| r.map(Fq)) }
    }

    /// The matrix unit `E_{rc}` (0-based indices).
    pub fn unit(r: usize, c: usize) -> Self {
        let mut m = Self::zero();
        m.entries[r][c] = Fq::ONE;
        m
    }

    pub fn rows(&self) -> usize {
        R
    }

    pub fn cols(&self) -> usize {
        C
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.entries[r][c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix<C, R> {
        let mut t = Matrix::<C, R>::zero();
        for r in 0..R {
            for c in 0..C {
                t.entries[c][r] = self.entries[r][c];
            }
        }
        t
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        let mut m = *self;
        for r in 0..R {
            for c in 0..C {
                m.entries[r][c] = field.add(m.entries[r][c], other.entries[r][c]);
            }
        }
        m
    }

    pub fn scale(&self, field: &Field, s: Fq) -> Self {
        let mut m = *self;
        for x in m.entries.iter_mut().flatten() {
            *x = field.mul(*x, s);
        }
        m
    }

    /// `self + s * other`
    pub fn add_scaled(&self, field: &Field, s: Fq, other: &Self) -> Self {
        let mut m = *self;
        for r in 0..R {
            for c in 0..C {
                m.entries[r][c] = field.mul_add(s, other.entries[r][c], m.entries[r][c]);
            }
        }
        m
    }

    pub fn mul<const K: usize>(&self, field: &Field, other: &Matrix<C, K>) -> Matrix<R, K> {
        let mut out = Matrix::<R, K>::zero();
        for r in 0..R {
            for k in 0..K {
                let mut acc = Fq::ZERO;
                for c in 0..C {
                    acc = field.mul_add(self.entries[r][c], other.entries[c][k], acc);
                }
                out.entries[r][k] = acc;
            }
        }
        out
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut rows = self.entries;
        rank_of_rows(field, &mut rows, C)
    }

    /// Row-major flattening; `R * C` entries.
    pub fn to_vec(&self) -> Vec<Fq> {
        self.entries.iter().flatten().copied().collect()
    }

    /// Row-major flattening into a fixed buffer of length [`MAX_AMBIENT`].
    pub fn to_padded(&self) -> [Fq; MAX_AMBIENT] {
        let mut v = [Fq::ZERO; MAX_AMBIENT];
        for (dst, src) in v.iter_mut().zip(self.entries.iter().flatten()) {
            *dst = *src;
        }
        v
    }

    /// Inverse of [`Matrix::to_padded`].
    pub fn from_padded(v: &[Fq]) -> Self {
        let mut m = Self::zero();
        for r in 0..R {
            for c in 0..C {
                m.entries[r][c] = v[r * C + c];
            }
        }
        m
    }

    /// Span of the rows, as a subspace of `F_q^C`.
    pub fn row_space(&self, field: &Field) -> Subspace {
        Subspace::span(field, C, self.entries.iter().map(|r| &r[..]))
    }

    /// Span of the columns, as a subspace of `F_q^R`.
    pub fn col_space(&self, field: &Field) -> Subspace {
        self.transpose().row_space(field)
    }

    pub fn random<G: Rng + ?Sized>(field: &Field, rng: &mut G) -> Self {
        let mut m = Self::zero();
        for x in m.entries.iter_mut().flatten() {
            *x = Fq(rng.gen_range(0..field.q()) as u8);
        }
        m
    }
}

impl<const N: usize> Matrix<N, N> {
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = Fq::ONE;
        }
        m
    }

    pub fn scalar(s: Fq) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = s;
        }
        m
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.rank(field) == N
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, field: &Field) -> Result<Self, LinalgError> {
        // augmented [A | I]
        assert!(N <= 4, "inverse supports N <= 4");
        let mut rows = [[Fq::ZERO; 8]; N];
        for r in 0..N {
            rows[r][..N].copy_from_slice(&self.entries[r]);
            rows[r][N + r] = Fq::ONE;
        }
        let rank = rref(field, &mut rows, N);
        if rank < N {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zero();
        for r in 0..N {
            inv.entries[r].copy_from_slice(&rows[r][N..2 * N]);
        }
        Ok(inv)
    }

    pub fn trace(&self, field: &Field) -> Fq {
        (0..N).fold(Fq::ZERO, |acc, i| field.add(acc, self.entries[i][i]))
    }

    pub fn random_invertible<G: Rng + ?Sized>(field: &Field, rng: &mut G) -> Self {
        loop {
            let m = Self::random(field, rng);
            if m.is_invertible(field) {
                return m;
            }
        }
    }
}

impl Mat3 {
    pub fn det(&self, field: &Field) -> Fq {
        let m = &self.entries;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            field.sub(field.mul(m[1][a], m[2][b]), field.mul(m[1][c], m[2][d]))
        };
        let t0 = field.mul(m[0][0], minor(1, 2, 2, 1));
        let t1 = field.mul(m[0][1], minor(0, 2, 2, 0));
        let t2 = field.mul(m[0][2], minor(0, 1, 1, 0));
        field.add(field.sub(t0, t1), t2)
    }

    /// `det(tI - M)`, monic of degree 3.
    pub fn charpoly(&self, field: &Field) -> Poly {
        let m = &self.entries;
        let tr = self.trace(field);
        let minor = |i: usize, j: usize| {
            field.sub(field.mul(m[i][i], m[j][j]), field.mul(m[i][j], m[j][i]))
        };
        let e2 = field.add(field.add(minor(0, 1), minor(0, 2)), minor(1, 2));
        let det = self.det(field);
        Poly::new(vec![field.neg(det), e2, field.neg(tr), Fq::ONE])
    }

    /// Companion matrix of a monic cubic `t^3 + f2 t^2 + f1 t + f0`: ones on
    /// the subdiagonal and last column `(-f0, -f1, -f2)^T`.
    pub fn companion(field: &Field, f: &Poly) -> Result<Mat3, LinalgError> {
        if f.degree() != Some(3) || f.leading() != Fq::ONE {
            return Err(LinalgError::NotMonicCubic);
        }
        let c = f.coeffs();
        let mut m = Mat3::zero();
        m.entries[1][0] = Fq::ONE;
        m.entries[2][1] = Fq::ONE;
        for r in 0..3 {
            m.entries[r][2] = field.neg(c[r]);
        }
        Ok(m)
    }
}

/// Similarity test for 3x3 matrices whose characteristic polynomials are
/// irreducible: then the rational canonical form is the companion matrix, so
/// equal characteristic polynomials suffice.
pub fn similar_irreducible(field: &Field, m: &Mat3, n: &Mat3) -> Result<bool, LinalgError> {
    let f = m.charpoly(field);
    let g = n.charpoly(field);
    if !f.is_irreducible_cubic(field) || !g.is_irreducible_cubic(field) {
        return Err(LinalgError::ReducibleCharpoly);
    }
    Ok(f == g)
}

/// A linear subspace of `F_q^n`, `n <= 9`, stored by its reduced echelon basis.
///
/// The representation is canonical: equal subspaces compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: u8,
    dim: u8,
    basis: [[Fq; MAX_AMBIENT]; MAX_AMBIENT],
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u8>> = self.basis().map(|r| r.iter().map(|x| x.0).collect()).collect();
        write!(f, "Subspace(F^{}, {rows:?})", self.ambient)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        assert!(ambient <= MAX_AMBIENT);
        Subspace { ambient: ambient as u8, dim: 0, basis: [[Fq::ZERO; MAX_AMBIENT]; MAX_AMBIENT] }
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span<'a, I>(field: &Field, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a [Fq]>,
    {
        let mut s = Self::zero(ambient);
        let mut buf = [[Fq::ZERO; MAX_AMBIENT]; MAX_AMBIENT + 1];
        for v in vectors {
            debug_assert_eq!(v.len(), ambient);
            let d = s.dim as usize;
            buf[..d].copy_from_slice(&s.basis[..d]);
            buf[d] = [Fq::ZERO; MAX_AMBIENT];
            buf[d][..ambient].copy_from_slice(v);
            let rank = rref(field, &mut buf[..d + 1], ambient);
            s.basis[..rank].copy_from_slice(&buf[..rank]);
            s.dim = rank as u8;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn ambient(&self) -> usize {
        self.ambient as usize
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Fq]> + '_ {
        let n = self.ambient as usize;
        self.basis[..self.dim as usize].iter().map(move |r| &r[..n])
    }

    /// The `i`-th reduced basis vector, zero-padded to [`MAX_AMBIENT`].
    pub fn basis_vector(&self, i: usize) -> [Fq; MAX_AMBIENT] {
        self.basis[i]
    }

    pub fn sum(&self, field: &Field, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(field, self.ambient(), self.basis().chain(other.basis()))
    }

    pub fn contains_vector(&self, field: &Field, v: &[Fq]) -> bool {
        Subspace::span(field, self.ambient(), self.basis().chain(std::iter::once(v))).dim == self.dim
    }

    pub fn contains(&self, field: &Field, other: &Subspace) -> bool {
        self.sum(field, other).dim == self.dim
    }

    /// Image under `v -> g v` for a square matrix `g` acting on column vectors.
    pub fn image<const N: usize>(&self, field: &Field, g: &Matrix<N, N>) -> Subspace {
        assert_eq!(self.ambient(), N);
        let images: Vec<Vec<Fq>> = self
            .basis()
            .map(|v| {
                (0..N)
                    .map(|r| (0..N).fold(Fq::ZERO, |acc, c| field.mul_add(g.entries[r][c], v[c], acc)))
                    .collect()
            })
            .collect();
        Subspace::span(field, N, images.iter().map(|v| &v[..]))
    }
}

/// A polynomial over `F_q`, coefficients low-degree-first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.0 == 1 && i > 0 { String::new() } else { c.0.to_string() };
            match i {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}t")?,
                _ => write!(f, "{coeff}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_values(values: &[u8]) -> Self {
        Poly::new(values.iter().map(|&v| Fq(v)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fq) -> Self {
        Poly::new(vec![c])
    }

    /// `a t + b`
    pub fn linear(a: Fq, b: Fq) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn eval(&self, field: &Field, x: Fq) -> Fq {
        self.coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| field.mul_add(acc, x, c))
    }

    pub fn add(&self, field: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| field.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, field: &Field, s: Fq) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| field.mul(c, s)).collect())
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.mul_add(a, b, out[i + j]);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, field: &Field, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Fq::ONE), |acc, _| acc.mul(field, self))
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self, field: &Field) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(field, field.inv_nonzero(self.leading()))
    }

    pub fn roots(&self, field: &Field) -> Vec<Fq> {
        field.elements().filter(|&x| self.eval(field, x).is_zero()).collect()
    }

    /// A cubic is irreducible iff it has no root in `F_q`.
    pub fn is_irreducible_cubic(&self, field: &Field) -> bool {
        self.degree() == Some(3) && self.roots(field).is_empty()
    }
}
