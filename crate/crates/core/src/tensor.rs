//! Tensors in `F_q^2 (x) F_q^3 (x) F_q^3` (and `F_q^2 (x) F_q^2 (x) F_q^3`),
//! their contraction spaces, rank distributions and the group actions of
//! `H = GL2 x GL3 x GL3` and of the factor swap `T`.
//!
//! Matrix convention: a slice `M^(i)` of the first contraction has rows
//! indexed by the second factor (`j`) and columns by the third (`k`).

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf::{Field, Fq};
use crate::linalg::{rank_of_rows, rref, Mat2, Mat2x3, Mat3, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("expected a rank-{expected} matrix, got rank {actual}")]
    WrongRank { expected: usize, actual: usize },
    #[error("group element has a singular factor")]
    SingularFactor,
}

/// Which factor a contraction is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    First,
    Second,
    Third,
}

/// A tensor `sum a_{ijk} e_i (x) e_j (x) e_k` with `i < 2`, `j, k < 3` (0-based).
///
/// Entries are stored in lexicographic `(i, j, k)` order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tensor233 {
    pub a: [Fq; 18],
}

impl fmt::Debug for Tensor233 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u8> = self.a.iter().map(|x| x.0).collect();
        write!(f, "Tensor233({v:?})")
    }
}

/// Counts `[a, b, c]` of rank 1, 2, 3 points on `PG(A_1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RankDistribution(pub [u32; 3]);

impl fmt::Display for RankDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "[{a},{b},{c}]")
    }
}

/// Spanning matrices of a contraction space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contractions {
    /// `M^(i)_{jk} = a_{ijk}`
    First([Mat3; 2]),
    /// `N^(j)_{ik} = a_{ijk}`
    Second([Mat2x3; 3]),
    /// `P^(k)_{ij} = a_{ijk}`
    Third([Mat2x3; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionSpace {
    pub generators: Contractions,
    pub space: Subspace,
}

impl ContractionSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// The first contraction space with its canonical echelon basis.
///
/// Projective points are enumerated as `<B1 + lambda B2>` for `lambda` in
/// canonical element order, followed by `<B2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstContraction {
    pub dim: usize,
    pub basis: [Mat3; 2],
}

impl FirstContraction {
    /// The projective points of `PG(A_1)`: `q + 1` of them on a line, one on a point.
    pub fn points<'a>(&'a self, field: &'a Field) -> impl Iterator<Item = Mat3> + 'a {
        let [b1, b2] = self.basis;
        let (line, point) = match self.dim {
            2 => (true, false),
            1 => (false, true),
            _ => (false, false),
        };
        let affine = field
            .elements()
            .filter(move |_| line)
            .map(move |l| b1.add_scaled(field, l, &b2));
        affine
            .chain(line.then_some(b2))
            .chain(point.then_some(b1))
    }

    pub fn rank_distribution(&self, field: &Field) -> RankDistribution {
        let mut counts = [0u32; 3];
        for m in self.points(field) {
            counts[m.rank(field) - 1] += 1;
        }
        RankDistribution(counts)
    }
}

#[inline]
const fn idx(i: usize, j: usize, k: usize) -> usize {
    9 * i + 3 * j + k
}

impl Tensor233 {
    pub const LEN: usize = 18;

    pub const fn zero() -> Self {
        Tensor233 { a: [Fq::ZERO; 18] }
    }

    pub fn from_values(values: [u8; 18]) -> Self {
        Tensor233 { a: values.map(Fq) }
    }

    /// `e_i (x) e_j (x) e_k`, 0-based.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        let mut t = Self::zero();
        t.a[idx(i, j, k)] = Fq::ONE;
        t
    }

    /// `e_1 (x) m1 + e_2 (x) m2`
    pub fn from_slices(m1: &Mat3, m2: &Mat3) -> Self {
        let mut t = Self::zero();
        for j in 0..3 {
            for k in 0..3 {
                t.a[idx(0, j, k)] = m1.entries[j][k];
                t.a[idx(1, j, k)] = m2.entries[j][k];
            }
        }
        t
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Fq {
        self.a[idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Fq) {
        self.a[idx(i, j, k)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        let mut t = *self;
        for (x, y) in t.a.iter_mut().zip(other.a.iter()) {
            *x = field.add(*x, *y);
        }
        t
    }

    /// The slice `M^(i)`.
    pub fn slice(&self, i: usize) -> Mat3 {
        let mut m = Mat3::zero();
        for j in 0..3 {
            m.entries[j].copy_from_slice(&self.a[idx(i, j, 0)..idx(i, j, 0) + 3]);
        }
        m
    }

    pub fn contraction(&self, field: &Field, axis: Axis) -> ContractionSpace {
        match axis {
            Axis::First => {
                let ms = [self.slice(0), self.slice(1)];
                let vs = ms.map(|m| m.to_vec());
                let space = Subspace::span(field, 9, vs.iter().map(|v| &v[..]));
                ContractionSpace { generators: Contractions::First(ms), space }
            }
            Axis::Second => {
                let ms: [Mat2x3; 3] = std::array::from_fn(|j| {
                    let mut n = Mat2x3::zero();
                    for i in 0..2 {
                        for k in 0..3 {
                            n.entries[i][k] = self.get(i, j, k);
                        }
                    }
                    n
                });
                let vs = ms.map(|m| m.to_vec());
                let space = Subspace::span(field, 6, vs.iter().map(|v| &v[..]));
                ContractionSpace { generators: Contractions::Second(ms), space }
            }
            Axis::Third => {
                let ms: [Mat2x3; 3] = std::array::from_fn(|k| {
                    let mut p = Mat2x3::zero();
                    for i in 0..2 {
                        for j in 0..3 {
                            p.entries[i][j] = self.get(i, j, k);
                        }
                    }
                    p
                });
                let vs = ms.map(|m| m.to_vec());
                let space = Subspace::span(field, 6, vs.iter().map(|v| &v[..]));
                ContractionSpace { generators: Contractions::Third(ms), space }
            }
        }
    }

    /// `(dim A_1, dim A_2, dim A_3)` without building the subspaces.
    pub fn contraction_dims(&self, field: &Field) -> [usize; 3] {
        let mut first = [[Fq::ZERO; 9]; 2];
        first[0].copy_from_slice(&self.a[..9]);
        first[1].copy_from_slice(&self.a[9..]);
        let mut second = [[Fq::ZERO; 6]; 3];
        let mut third = [[Fq::ZERO; 6]; 3];
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = self.get(i, j, k);
                    second[j][3 * i + k] = v;
                    third[k][3 * i + j] = v;
                }
            }
        }
        [
            rank_of_rows(field, &mut first, 9),
            rank_of_rows(field, &mut second, 6),
            rank_of_rows(field, &mut third, 6),
        ]
    }

    /// Canonical echelon basis of `A_1`; unused basis slots are zero.
    pub fn first_contraction(&self, field: &Field) -> FirstContraction {
        let mut rows = [[Fq::ZERO; 9]; 2];
        rows[0].copy_from_slice(&self.a[..9]);
        rows[1].copy_from_slice(&self.a[9..]);
        let dim = rref(field, &mut rows, 9);
        FirstContraction { dim, basis: rows.map(|r| Mat3::from_padded(&r)) }
    }

    pub fn rank_distribution(&self, field: &Field) -> RankDistribution {
        self.first_contraction(field).rank_distribution(field)
    }

    /// The factor swap `T: v1 (x) v2 (x) v3 -> v1 (x) v3 (x) v2`.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    t.a[idx(i, k, j)] = self.a[idx(i, j, k)];
                }
            }
        }
        t
    }

    /// `e_i -> g e_i` on the first factor.
    pub fn transform_first(&self, field: &Field, g: &Mat2) -> Self {
        let mut t = Self::zero();
        for jk in 0..9 {
            for i2 in 0..2 {
                let mut acc = Fq::ZERO;
                for i in 0..2 {
                    acc = field.mul_add(g.entries[i2][i], self.a[9 * i + jk], acc);
                }
                t.a[9 * i2 + jk] = acc;
            }
        }
        t
    }

    /// `e_j -> g e_j` on the second factor.
    pub fn transform_second(&self, field: &Field, g: &Mat3) -> Self {
        let mut t = Self::zero();
        for i in 0..2 {
            for k in 0..3 {
                for j2 in 0..3 {
                    let mut acc = Fq::ZERO;
                    for j in 0..3 {
                        acc = field.mul_add(g.entries[j2][j], self.a[idx(i, j, k)], acc);
                    }
                    t.a[idx(i, j2, k)] = acc;
                }
            }
        }
        t
    }

    /// `e_k -> g e_k` on the third factor.
    pub fn transform_third(&self, field: &Field, g: &Mat3) -> Self {
        let mut t = Self::zero();
        for i in 0..2 {
            for j in 0..3 {
                for k2 in 0..3 {
                    let mut acc = Fq::ZERO;
                    for k in 0..3 {
                        acc = field.mul_add(g.entries[k2][k], self.a[idx(i, j, k)], acc);
                    }
                    t.a[idx(i, j, k2)] = acc;
                }
            }
        }
        t
    }

    /// Applies `h`: first `T` if `h.transpose`, then `(g1, g2, g3)`.
    pub fn act(&self, field: &Field, h: &GroupElement) -> Self {
        let base = if h.transpose { self.transpose() } else { *self };
        base.transform_first(field, &h.g1)
            .transform_second(field, &h.g2)
            .transform_third(field, &h.g3)
    }

    /// Packed base-`q` encoding; entry `n` (lexicographic) is digit `n`.
    #[inline]
    pub fn encode(&self, q: u32) -> u64 {
        self.a.iter().rev().fold(0u64, |acc, x| acc * q as u64 + x.0 as u64)
    }

    #[inline]
    pub fn decode(mut code: u64, q: u32) -> Self {
        let mut t = Self::zero();
        for x in t.a.iter_mut() {
            *x = Fq((code % q as u64) as u8);
            code /= q as u64;
        }
        t
    }

    pub fn random<G: Rng + ?Sized>(field: &Field, rng: &mut G) -> Self {
        let mut t = Self::zero();
        for x in t.a.iter_mut() {
            *x = Fq(rng.gen_range(0..field.q()) as u8);
        }
        t
    }
}

/// A tensor in `F_q^2 (x) F_q^2 (x) F_q^3`, entries in lexicographic `(i, j, k)` order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tensor223 {
    pub a: [Fq; 12],
}

impl fmt::Debug for Tensor223 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u8> = self.a.iter().map(|x| x.0).collect();
        write!(f, "Tensor223({v:?})")
    }
}

impl Tensor223 {
    pub const LEN: usize = 12;

    pub const fn zero() -> Self {
        Tensor223 { a: [Fq::ZERO; 12] }
    }

    pub fn from_values(values: [u8; 12]) -> Self {
        Tensor223 { a: values.map(Fq) }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Fq {
        self.a[6 * i + 3 * j + k]
    }

    /// Inclusion into `F^2 (x) F^3 (x) F^3` with `a_{i,2,k} = 0` (0-based).
    pub fn embed(&self) -> Tensor233 {
        let mut t = Tensor233::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    t.set(i, j, k, self.get(i, j, k));
                }
            }
        }
        t
    }

    pub fn encode(&self, q: u32) -> u64 {
        self.a.iter().rev().fold(0u64, |acc, x| acc * q as u64 + x.0 as u64)
    }

    pub fn decode(mut code: u64, q: u32) -> Self {
        let mut t = Self::zero();
        for x in t.a.iter_mut() {
            *x = Fq((code % q as u64) as u8);
            code /= q as u64;
        }
        t
    }
}

/// Free-function form of [`Tensor223::embed`].
pub fn embed_223(b: &Tensor223) -> Tensor233 {
    b.embed()
}

/// An element of `H`, optionally composed with `T` (making it an element of `G`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub g1: Mat2,
    pub g2: Mat3,
    pub g3: Mat3,
    pub transpose: bool,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { g1: Mat2::identity(), g2: Mat3::identity(), g3: Mat3::identity(), transpose: false }
    }

    pub fn new(field: &Field, g1: Mat2, g2: Mat3, g3: Mat3, transpose: bool) -> Result<Self, TensorError> {
        if !(g1.is_invertible(field) && g2.is_invertible(field) && g3.is_invertible(field)) {
            return Err(TensorError::SingularFactor);
        }
        Ok(GroupElement { g1, g2, g3, transpose })
    }

    /// Just the swap `T`.
    pub fn swap() -> Self {
        GroupElement { transpose: true, ..Self::identity() }
    }

    /// Uniformly random element of `H` (with `T` if `transpose`).
    pub fn random<G: Rng + ?Sized>(field: &Field, rng: &mut G, transpose: bool) -> Self {
        GroupElement {
            g1: Mat2::random_invertible(field, rng),
            g2: Mat3::random_invertible(field, rng),
            g3: Mat3::random_invertible(field, rng),
            transpose,
        }
    }

    pub fn inverse(&self, field: &Field) -> Self {
        let g1 = self.g1.inverse(field).expect("invertible by construction");
        let g2 = self.g2.inverse(field).expect("invertible by construction");
        let g3 = self.g3.inverse(field).expect("invertible by construction");
        if self.transpose {
            // (g o T)^-1 = T o g^-1 = (g1^-1, g3^-1, g2^-1) o T
            GroupElement { g1, g2: g3, g3: g2, transpose: true }
        } else {
            GroupElement { g1, g2, g3, transpose: false }
        }
    }
}

/// The pair `(col_space(M), row_space(M))` of a rank-2 matrix; the Segre
/// product of their projective lines is the quadric `Q(M)`.
pub fn q_of(field: &Field, m: &Mat3) -> Result<(Subspace, Subspace), TensorError> {
    let r = m.rank(field);
    if r != 2 {
        return Err(TensorError::WrongRank { expected: 2, actual: r });
    }
    Ok((m.col_space(field), m.row_space(field)))
}

/// Position of a rank-1 point relative to `Q(x)` of a rank-2 point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QMembership {
    /// On the quadric itself.
    Inside,
    /// Only the row space is contained.
    RowOnly,
    /// Only the column space is contained.
    ColOnly,
    Outside,
}

impl fmt::Display for QMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QMembership::Inside => "inside",
            QMembership::RowOnly => "row_only",
            QMembership::ColOnly => "col_only",
            QMembership::Outside => "outside",
        })
    }
}

pub fn in_q(field: &Field, n: &Mat3, m: &Mat3) -> Result<QMembership, TensorError> {
    let rn = n.rank(field);
    if rn != 1 {
        return Err(TensorError::WrongRank { expected: 1, actual: rn });
    }
    let (col, row) = q_of(field, m)?;
    let col_in = col.contains(field, &n.col_space(field));
    let row_in = row.contains(field, &n.row_space(field));
    Ok(match (col_in, row_in) {
        (true, true) => QMembership::Inside,
        (true, false) => QMembership::ColOnly,
        (false, true) => QMembership::RowOnly,
        (false, false) => QMembership::Outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    fn e(r: usize, c: usize) -> Mat3 {
        Mat3::unit(r, c)
    }

    fn sum(field: &Field, ms: &[Mat3]) -> Mat3 {
        ms.iter().fold(Mat3::zero(), |acc, m| acc.add(field, m))
    }

    #[test]
    fn contraction_examples() {
        let f2 = f(2);
        let t = Tensor233::basis(0, 0, 0);
        let c = t.contraction(&f2, Axis::First);
        assert_eq!(c.dim(), 1);
        let expected = Subspace::span(&f2, 9, [&e(0, 0).to_vec()[..]]);
        assert_eq!(c.space, expected);

        // e1 (x) (E11 + E22) + e2 (x) (E12 + E23)
        let m1 = sum(&f2, &[e(0, 0), e(1, 1)]);
        let m2 = sum(&f2, &[e(0, 1), e(1, 2)]);
        let t = Tensor233::from_slices(&m1, &m2);
        assert_eq!(t.contraction(&f2, Axis::Second).dim(), 2);
        assert_eq!(t.contraction(&f2, Axis::Third).dim(), 3);
        if let Contractions::Second(ns) = t.contraction(&f2, Axis::Second).generators {
            assert!(ns[2].is_zero());
        } else {
            panic!("wrong generator kind");
        }
        assert_eq!(t.contraction_dims(&f2), [2, 2, 3]);

        let z = Tensor233::zero();
        for axis in [Axis::First, Axis::Second, Axis::Third] {
            assert_eq!(z.contraction(&f2, axis).dim(), 0);
        }
        assert_eq!(z.rank_distribution(&f2), RankDistribution([0, 0, 0]));
    }

    #[test]
    fn rank_distribution_examples() {
        let f2 = f(2);
        let o5 = Tensor233::from_slices(&e(0, 0), &e(1, 1));
        assert_eq!(o5.rank_distribution(&f2), RankDistribution([2, 1, 0]));
        let f3 = f(3);
        let o14 = Tensor233::from_slices(&sum(&f3, &[e(0, 0), e(1, 1)]), &sum(&f3, &[e(1, 1), e(2, 2)]));
        assert_eq!(o14.rank_distribution(&f3), RankDistribution([0, 3, 1]));
        let o9 = Tensor233::from_slices(&e(2, 0), &Mat3::identity());
        assert_eq!(o9.rank_distribution(&f2), RankDistribution([1, 0, 2]));
        let point = Tensor233::basis(1, 2, 2);
        assert_eq!(point.rank_distribution(&f2), RankDistribution([1, 0, 0]));
    }

    #[test]
    fn transpose_swaps_axes() {
        let t = Tensor233::basis(1, 0, 2);
        assert_eq!(t.transpose(), Tensor233::basis(1, 2, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f3 = f(3);
        let x = Tensor233::random(&f3, &mut rng);
        assert_eq!(x.transpose().transpose(), x);
        assert_eq!(x.transpose().slice(0), x.slice(0).transpose());
    }

    #[test]
    fn action_matches_matrix_formula() {
        // slices transform as M'_i = sum_l g1[i][l] g2 M_l g3^T
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in [2, 3, 4, 5] {
            let fl = f(q);
            for _ in 0..50 {
                let t = Tensor233::random(&fl, &mut rng);
                let h = GroupElement::random(&fl, &mut rng, false);
                let out = t.act(&fl, &h);
                for i in 0..2 {
                    let mut expected = Mat3::zero();
                    for l in 0..2 {
                        let m = h.g2.mul(&fl, &t.slice(l)).mul(&fl, &h.g3.transpose());
                        expected = expected.add_scaled(&fl, h.g1.entries[i][l], &m);
                    }
                    assert_eq!(out.slice(i), expected);
                }
            }
        }
    }

    #[test]
    fn action_identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2, 3, 4, 7] {
            let fl = f(q);
            for _ in 0..50 {
                let t = Tensor233::random(&fl, &mut rng);
                assert_eq!(t.act(&fl, &GroupElement::identity()), t);
                for transpose in [false, true] {
                    let h = GroupElement::random(&fl, &mut rng, transpose);
                    assert_eq!(t.act(&fl, &h).act(&fl, &h.inverse(&fl)), t);
                }
            }
        }
    }

    #[test]
    fn encoding_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [2, 3, 4, 9] {
            let fl = f(q);
            for _ in 0..100 {
                let t = Tensor233::random(&fl, &mut rng);
                assert_eq!(Tensor233::decode(t.encode(q), q), t);
            }
        }
        assert_eq!(Tensor233::basis(0, 0, 0).encode(3), 1);
        assert_eq!(Tensor233::basis(1, 2, 2).encode(2), 1 << 17);
    }

    #[test]
    fn q_of_examples() {
        let f3 = f(3);
        let m = sum(&f3, &[e(0, 0), e(1, 1)]);
        let (col, row) = q_of(&f3, &m).unwrap();
        let e12 = Subspace::span(&f3, 3, [&[Fq(1), Fq(0), Fq(0)][..], &[Fq(0), Fq(1), Fq(0)][..]]);
        assert_eq!((col, row), (e12, e12));

        let m = sum(&f3, &[e(0, 1), e(1, 2)]);
        let (col, row) = q_of(&f3, &m).unwrap();
        let e23 = Subspace::span(&f3, 3, [&[Fq(0), Fq(1), Fq(0)][..], &[Fq(0), Fq(0), Fq(1)][..]]);
        assert_eq!(col, e12);
        assert_eq!(row, e23);

        assert_eq!(
            q_of(&f3, &Mat3::identity()),
            Err(TensorError::WrongRank { expected: 2, actual: 3 })
        );
    }

    #[test]
    fn q_of_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let fl = f(q);
            let m = sum(&fl, &[e(0, 0), e(1, 1)]);
            for _ in 0..30 {
                let g = Mat3::random_invertible(&fl, &mut rng);
                let h = Mat3::random_invertible(&fl, &mut rng);
                let (col, row) = q_of(&fl, &m).unwrap();
                let (col2, row2) = q_of(&fl, &g.mul(&fl, &m).mul(&fl, &h)).unwrap();
                assert_eq!(col2, col.image(&fl, &g));
                assert_eq!(row2, row.image(&fl, &h.transpose()));
            }
        }
    }

    #[test]
    fn in_q_examples() {
        let f2 = f(2);
        let m = sum(&f2, &[e(0, 0), e(1, 1)]);
        assert_eq!(in_q(&f2, &e(0, 0), &m).unwrap(), QMembership::Inside);
        assert_eq!(in_q(&f2, &e(0, 2), &m).unwrap(), QMembership::ColOnly);
        assert_eq!(in_q(&f2, &e(2, 0), &m).unwrap(), QMembership::RowOnly);
        let m8 = sum(&f2, &[e(1, 1), e(2, 2)]);
        assert_eq!(in_q(&f2, &e(0, 0), &m8).unwrap(), QMembership::Outside);
        assert!(in_q(&f2, &m, &m).is_err());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(Tensor223::zero().embed(), Tensor233::zero());
        let mut b = Tensor223::zero();
        b.a[2] = Fq::ONE; // e1 (x) e1 (x) e3
        assert_eq!(embed_223(&b), Tensor233::basis(0, 0, 2));
        // the o11 representative lives in j <= 2 and round-trips
        let f2 = f(2);
        let o11 = Tensor233::from_slices(&sum(&f2, &[e(0, 0), e(1, 1)]), &sum(&f2, &[e(0, 1), e(1, 2)]));
        let mut b = Tensor223::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    b.a[6 * i + 3 * j + k] = o11.get(i, j, k);
                }
            }
        }
        assert_eq!(b.embed(), o11);
    }
}
