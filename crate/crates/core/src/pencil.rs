//! Determinant forms of pencils of 3x3 matrices, their factorization type
//! over `F_q`, and the action of `PGL(2, q)` on cubics by Möbius
//! transformation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::gf::{Field, Fq};
use crate::linalg::{Mat2, Mat3, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("Möbius matrix has zero determinant")]
    Degenerate,
    #[error("polynomial must have degree 3")]
    NotCubic,
    #[error("polynomial must be a monic cubic")]
    NotMonicCubic,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("cubic is reducible over F_q")]
    Reducible,
}

/// The binary cubic `det(s M1 + t M2) = sum c[i] s^(3-i) t^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryCubic {
    pub c: [Fq; 4],
}

/// Factorization pattern of a binary cubic over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorType {
    Zero,
    TripleLinear,
    DoubleLinear,
    ThreeDistinctLinear,
    LinearTimesIrreducibleQuadratic,
    IrreducibleCubic,
}

impl FactorType {
    pub fn name(self) -> &'static str {
        match self {
            FactorType::Zero => "zero",
            FactorType::TripleLinear => "triple-linear",
            FactorType::DoubleLinear => "double-linear",
            FactorType::ThreeDistinctLinear => "three-distinct-linear",
            FactorType::LinearTimesIrreducibleQuadratic => "linear-times-irreducible-quadratic",
            FactorType::IrreducibleCubic => "irreducible-cubic",
        }
    }
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Binary forms as coefficient vectors indexed by the power of `t`.
fn mul_forms(field: &Field, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.mul_add(x, y, out[i + j]);
        }
    }
    out
}

/// `det(s M1 + t M2)` by cofactor expansion over the six permutations.
pub fn det_form(field: &Field, m1: &Mat3, m2: &Mat3) -> BinaryCubic {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], false),
        ([1, 2, 0], false),
        ([2, 0, 1], false),
        ([0, 2, 1], true),
        ([1, 0, 2], true),
        ([2, 1, 0], true),
    ];
    let mut c = [Fq::ZERO; 4];
    for (perm, odd) in PERMS {
        let lin = |r: usize| [m1.entries[r][perm[r]], m2.entries[r][perm[r]]];
        let prod = mul_forms(field, &mul_forms(field, &lin(0), &lin(1)), &lin(2));
        for i in 0..4 {
            let term = if odd { field.neg(prod[i]) } else { prod[i] };
            c[i] = field.add(c[i], term);
        }
    }
    BinaryCubic { c }
}

impl BinaryCubic {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn eval(&self, field: &Field, s: Fq, t: Fq) -> Fq {
        let mut acc = Fq::ZERO;
        for i in 0..4 {
            let term = field.mul(field.pow(s, 3 - i as u64), field.pow(t, i as u64));
            acc = field.mul_add(self.c[i], term, acc);
        }
        acc
    }

    /// Projective roots over `F_q` with multiplicities; the point `(0:1)` is
    /// reported as `None`, `(1:lambda)` as `Some(lambda)`.
    pub fn roots(&self, field: &Field) -> Vec<(Option<Fq>, usize)> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = Vec::new();
        // s^m divides the form iff the top m coefficients in t vanish
        let at_infinity = self.c.iter().rev().take_while(|x| x.is_zero()).count();
        if at_infinity > 0 {
            out.push((None, at_infinity));
        }
        let mut affine = Poly::new(self.c.to_vec());
        for lambda in field.elements() {
            let mut mult = 0;
            while !affine.is_zero() && affine.eval(field, lambda).is_zero() {
                affine = divide_by_root(field, &affine, lambda);
                mult += 1;
            }
            if mult > 0 {
                out.push((Some(lambda), mult));
            }
        }
        out
    }

    pub fn factor_type(&self, field: &Field) -> FactorType {
        if self.is_zero() {
            return FactorType::Zero;
        }
        let roots = self.roots(field);
        let max_mult = roots.iter().map(|r| r.1).max().unwrap_or(0);
        match (roots.len(), max_mult) {
            (0, _) => FactorType::IrreducibleCubic,
            (1, 3) => FactorType::TripleLinear,
            (1, _) => FactorType::LinearTimesIrreducibleQuadratic,
            (2, _) => FactorType::DoubleLinear,
            _ => FactorType::ThreeDistinctLinear,
        }
    }
}

/// Synthetic division by `(t - root)`; `root` must be a root.
fn divide_by_root(field: &Field, f: &Poly, root: Fq) -> Poly {
    let c = f.coeffs();
    let n = c.len();
    let mut out = vec![Fq::ZERO; n - 1];
    let mut carry = Fq::ZERO;
    for i in (1..n).rev() {
        carry = field.mul_add(carry, root, c[i]);
        out[i - 1] = carry;
    }
    Poly::new(out)
}

/// Factorization type of `det(s M1 + t M2)`.
pub fn factor_type(field: &Field, form: &BinaryCubic) -> FactorType {
    form.factor_type(field)
}

/// An element `[[a, b], [c, d]]` of `PGL(2, q)`, scaled so that the first
/// nonzero of `(a, b, c, d)` is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mobius {
    pub a: Fq,
    pub b: Fq,
    pub c: Fq,
    pub d: Fq,
}

impl Mobius {
    pub fn new(field: &Field, a: Fq, b: Fq, c: Fq, d: Fq) -> Result<Self, PencilError> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det.is_zero() {
            return Err(PencilError::Degenerate);
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).unwrap();
        let s = field.inv_nonzero(lead);
        Ok(Mobius { a: field.mul(a, s), b: field.mul(b, s), c: field.mul(c, s), d: field.mul(d, s) })
    }

    pub fn identity() -> Self {
        Mobius { a: Fq::ONE, b: Fq::ZERO, c: Fq::ZERO, d: Fq::ONE }
    }

    pub fn from_matrix(field: &Field, m: &Mat2) -> Result<Self, PencilError> {
        let e = m.entries;
        Mobius::new(field, e[0][0], e[0][1], e[1][0], e[1][1])
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new([[self.a, self.b], [self.c, self.d]])
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, field: &Field, other: &Mobius) -> Mobius {
        Mobius::from_matrix(field, &self.matrix().mul(field, &other.matrix()))
            .expect("product of invertible matrices")
    }

    /// `rho = [[0, -1], [1, 0]]`
    pub fn rho(field: &Field) -> Mobius {
        Mobius::new(field, Fq::ZERO, field.neg(Fq::ONE), Fq::ONE, Fq::ZERO).unwrap()
    }

    /// `[[1, -alpha], [0, beta]]`, the substitution `t -> (t - alpha) / beta`.
    pub fn shift_scale(field: &Field, alpha: Fq, beta: Fq) -> Result<Mobius, PencilError> {
        if beta.is_zero() {
            return Err(PencilError::ZeroScale);
        }
        Mobius::new(field, Fq::ONE, field.neg(alpha), Fq::ZERO, beta)
    }

    /// Every element of `PGL(2, q)`, `q^3 - q` of them.
    pub fn all(field: &Field) -> Vec<Mobius> {
        let mut out = Vec::with_capacity((field.q().pow(3) - field.q()) as usize);
        for a in field.elements() {
            for b in field.elements() {
                for c in field.elements() {
                    for d in field.elements() {
                        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero());
                        if lead != Some(Fq::ONE) {
                            continue;
                        }
                        if let Ok(m) = Mobius::new(field, a, b, c, d) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }
}

/// `f^phi(t) = sum f_i (a t + b)^i (c t + d)^(3 - i)` for a cubic `f`.
///
/// This is a right action: `f^(phi psi)` and `(f^phi)^psi` agree up to a
/// scalar. The result is scaled monic when its leading coefficient is nonzero.
pub fn mobius_transform(field: &Field, f: &Poly, phi: &Mobius) -> Result<Poly, PencilError> {
    if f.degree() != Some(3) {
        return Err(PencilError::NotCubic);
    }
    let num = Poly::linear(phi.a, phi.b);
    let den = Poly::linear(phi.c, phi.d);
    let mut out = Poly::zero();
    for i in 0..=3 {
        let term = num.pow(field, i as u32).mul(field, &den.pow(field, 3 - i as u32));
        out = out.add(field, &term.scale(field, f.coeff(i)));
    }
    Ok(if out.degree() == Some(3) { out.monic(field) } else { out })
}

/// `det(tI - (alpha I + beta C(f))) = beta^3 f((t - alpha) / beta)`, computed
/// by substitution rather than from the matrix.
pub fn shift_scale_charpoly(field: &Field, f: &Poly, alpha: Fq, beta: Fq) -> Result<Poly, PencilError> {
    if f.degree() != Some(3) || f.leading() != Fq::ONE {
        return Err(PencilError::NotMonicCubic);
    }
    let phi = Mobius::shift_scale(field, alpha, beta)?;
    mobius_transform(field, f, &phi)
}

/// All monic irreducible cubics over `F_q` in canonical coefficient order.
pub fn irreducible_monic_cubics(field: &Field) -> Vec<Poly> {
    let mut out = Vec::new();
    for c2 in field.elements() {
        for c1 in field.elements() {
            for c0 in field.elements() {
                let f = Poly::new(vec![c0, c1, c2, Fq::ONE]);
                if f.is_irreducible_cubic(field) {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn require_irreducible(field: &Field, f: &Poly) -> Result<(), PencilError> {
    if f.degree() != Some(3) || f.leading() != Fq::ONE {
        return Err(PencilError::NotMonicCubic);
    }
    if !f.is_irreducible_cubic(field) {
        return Err(PencilError::Reducible);
    }
    Ok(())
}

/// Orbit of a monic irreducible cubic under `PGL(2, q)`, monic-normalized.
pub fn pgl_orbit_of_cubic(field: &Field, f: &Poly) -> Result<BTreeSet<Poly>, PencilError> {
    require_irreducible(field, f)?;
    Mobius::all(field).iter().map(|phi| mobius_transform(field, f, phi)).collect()
}

/// Elements of `PGL(2, q)` fixing `f` (up to scalar).
pub fn stabilizer(field: &Field, f: &Poly) -> Result<Vec<Mobius>, PencilError> {
    require_irreducible(field, f)?;
    let mut out = Vec::new();
    for phi in Mobius::all(field) {
        if mobius_transform(field, f, &phi)? == *f {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Whether the constant-rank-3 lines `<I, C(f)>` and `<I, C(g)>` are
/// equivalent, i.e. whether `g = f^phi` for some `phi` in `PGL(2, q)`.
pub fn lines_equivalent_rank3(field: &Field, f: &Poly, g: &Poly) -> Result<bool, PencilError> {
    require_irreducible(field, g)?;
    Ok(pgl_orbit_of_cubic(field, f)?.contains(g))
}

/// Summary of the `PGL(2, q)` action on monic irreducible cubics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilOrbitSummary {
    pub q: u32,
    pub cubic_count: usize,
    pub orbit_sizes: Vec<usize>,
    /// Stabilizer order of each orbit's first member.
    pub stabilizer_orders: Vec<usize>,
}

impl PencilOrbitSummary {
    pub fn orbit_count(&self) -> usize {
        self.orbit_sizes.len()
    }
}

pub fn pencil_orbit_summary(field: &Field) -> PencilOrbitSummary {
    let cubics = irreducible_monic_cubics(field);
    let mut seen: BTreeSet<Poly> = BTreeSet::new();
    let mut orbit_sizes = Vec::new();
    let mut stabilizer_orders = Vec::new();
    for f in &cubics {
        if seen.contains(f) {
            continue;
        }
        let orbit = pgl_orbit_of_cubic(field, f).expect("irreducible by construction");
        orbit_sizes.push(orbit.len());
        stabilizer_orders.push(stabilizer(field, f).expect("irreducible by construction").len());
        seen.extend(orbit);
    }
    PencilOrbitSummary { q: field.q(), cubic_count: cubics.len(), orbit_sizes, stabilizer_orders }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    fn sum(field: &Field, ms: &[Mat3]) -> Mat3 {
        ms.iter().fold(Mat3::zero(), |acc, m| acc.add(field, m))
    }

    fn e(r: usize, c: usize) -> Mat3 {
        Mat3::unit(r, c)
    }

    #[test]
    fn det_form_examples() {
        let f5 = f(5);
        let nil = sum(&f5, &[e(0, 1), e(1, 2)]);
        let form = det_form(&f5, &Mat3::identity(), &nil);
        assert_eq!(form.c, [Fq(1), Fq(0), Fq(0), Fq(0)]); // s^3
        assert_eq!(form.factor_type(&f5), FactorType::TripleLinear);

        let m1 = sum(&f5, &[e(0, 0), e(1, 1)]);
        let m2 = sum(&f5, &[e(0, 2), e(2, 1)]);
        assert!(det_form(&f5, &m1, &m2).is_zero());

        // diag(s, s + t, t) = s^2 t + s t^2
        let m2 = sum(&f5, &[e(1, 1), e(2, 2)]);
        let form = det_form(&f5, &m1, &m2);
        assert_eq!(form.c, [Fq(0), Fq(1), Fq(1), Fq(0)]);
        assert_eq!(form.factor_type(&f5), FactorType::ThreeDistinctLinear);
    }

    #[test]
    fn det_form_matches_pointwise_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let fl = f(q);
            for _ in 0..40 {
                let m1 = Mat3::random(&fl, &mut rng);
                let m2 = Mat3::random(&fl, &mut rng);
                let form = det_form(&fl, &m1, &m2);
                for s in fl.elements() {
                    for t in fl.elements() {
                        let m = m1.scale(&fl, s).add_scaled(&fl, t, &m2);
                        assert_eq!(form.eval(&fl, s, t), m.det(&fl));
                    }
                }
            }
        }
    }

    #[test]
    fn factor_type_examples() {
        let f3 = f(3);
        let cubic = |c: [u8; 4]| BinaryCubic { c: c.map(Fq) };
        assert_eq!(cubic([1, 0, 0, 0]).factor_type(&f3), FactorType::TripleLinear);
        assert_eq!(cubic([0, 0, 0, 1]).factor_type(&f3), FactorType::TripleLinear);
        assert_eq!(cubic([0, 1, 0, 0]).factor_type(&f3), FactorType::DoubleLinear);
        assert_eq!(cubic([0, 0, 0, 0]).factor_type(&f3), FactorType::Zero);
        // s (s^2 - u v s t - v t^2) with (u, v) = (0, 2) over F_3: s^2 + t^2 irreducible
        let (u, v) = (Fq(0), Fq(2));
        let c = [Fq(1), f3.neg(f3.mul(u, v)), f3.neg(v), Fq(0)];
        assert_eq!(BinaryCubic { c }.factor_type(&f3), FactorType::LinearTimesIrreducibleQuadratic);
        // t^3 - t + 1 has no root over F_3
        assert_eq!(cubic([1, 0, 2, 1]).factor_type(&f3), FactorType::IrreducibleCubic);
    }

    #[test]
    fn factor_type_is_substitution_invariant() {
        // compare against the form after a random GL(2) substitution and scaling
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for q in [2, 3, 4, 5, 7] {
            let fl = f(q);
            for _ in 0..200 {
                let m1 = Mat3::random(&fl, &mut rng);
                let m2 = Mat3::random(&fl, &mut rng);
                let g = Mat2::random_invertible(&fl, &mut rng);
                let n1 = m1.scale(&fl, g.get(0, 0)).add_scaled(&fl, g.get(0, 1), &m2);
                let n2 = m1.scale(&fl, g.get(1, 0)).add_scaled(&fl, g.get(1, 1), &m2);
                let a = Mat3::random_invertible(&fl, &mut rng);
                let b = Mat3::random_invertible(&fl, &mut rng);
                let n1 = a.mul(&fl, &n1).mul(&fl, &b);
                let n2 = a.mul(&fl, &n2).mul(&fl, &b);
                assert_eq!(
                    det_form(&fl, &m1, &m2).factor_type(&fl),
                    det_form(&fl, &n1, &n2).factor_type(&fl)
                );
            }
        }
    }

    #[test]
    fn mobius_examples() {
        let f2 = f(2);
        let g = Poly::from_values(&[1, 1, 0, 1]);
        assert_eq!(mobius_transform(&f2, &g, &Mobius::identity()).unwrap(), g);
        let phi = Mobius::new(&f2, Fq(1), Fq(1), Fq(0), Fq(1)).unwrap();
        assert_eq!(mobius_transform(&f2, &g, &phi).unwrap(), Poly::from_values(&[1, 0, 1, 1]));
        assert_eq!(
            Mobius::new(&f2, Fq(1), Fq(1), Fq(1), Fq(1)),
            Err(PencilError::Degenerate)
        );
        assert_eq!(
            mobius_transform(&f2, &Poly::from_values(&[1, 1]), &phi),
            Err(PencilError::NotCubic)
        );
    }

    #[test]
    fn rho_gives_charpoly_of_negated_inverse() {
        // roots of f^rho are -1/r, those of charpoly(C(f)^-1) are 1/r
        for q in [3, 5, 7, 4] {
            let fl = f(q);
            for c0 in fl.elements().skip(1) {
                for c1 in fl.elements() {
                    for c2 in fl.elements() {
                        let p = Poly::new(vec![c0, c1, c2, Fq::ONE]);
                        let c = Mat3::companion(&fl, &p).unwrap();
                        let inv = c.inverse(&fl).unwrap();
                        let neg_inv = inv.scale(&fl, fl.neg(Fq::ONE));
                        let rho = mobius_transform(&fl, &p, &Mobius::rho(&fl)).unwrap();
                        assert_eq!(rho, neg_inv.charpoly(&fl));
                        let swap = Mobius::new(&fl, Fq::ZERO, Fq::ONE, Fq::ONE, Fq::ZERO).unwrap();
                        assert_eq!(mobius_transform(&fl, &p, &swap).unwrap(), inv.charpoly(&fl));
                    }
                }
            }
        }
    }

    #[test]
    fn shift_scale_matches_matrix_charpoly() {
        let f2 = f(2);
        let g = Poly::from_values(&[1, 1, 0, 1]);
        let c = Mat3::companion(&f2, &g).unwrap();
        let direct = Mat3::identity().add(&f2, &c).charpoly(&f2);
        assert_eq!(shift_scale_charpoly(&f2, &g, Fq(1), Fq(1)).unwrap(), direct);
        assert_eq!(shift_scale_charpoly(&f2, &g, Fq(0), Fq(1)).unwrap(), g);
        assert_eq!(shift_scale_charpoly(&f2, &g, Fq(0), Fq(0)), Err(PencilError::ZeroScale));

        for q in [3, 4, 5] {
            let fl = f(q);
            for p in irreducible_monic_cubics(&fl).into_iter().take(6) {
                let c = Mat3::companion(&fl, &p).unwrap();
                for alpha in fl.elements() {
                    for beta in fl.elements().skip(1) {
                        let m = Mat3::scalar(alpha).add_scaled(&fl, beta, &c);
                        assert_eq!(shift_scale_charpoly(&fl, &p, alpha, beta).unwrap(), m.charpoly(&fl));
                    }
                }
            }
        }
    }

    #[test]
    fn irreducible_cubic_counts() {
        let f2 = f(2);
        assert_eq!(
            irreducible_monic_cubics(&f2),
            vec![Poly::from_values(&[1, 1, 0, 1]), Poly::from_values(&[1, 0, 1, 1])]
        );
        for q in [2u32, 3, 4, 5, 7] {
            let fl = f(q);
            let list = irreducible_monic_cubics(&fl);
            assert_eq!(list.len() as u32, (q * q * q - q) / 3);
            // independent count: monic cubics minus those with a root
            let total = q * q * q;
            let mut with_root = 0;
            for c0 in fl.elements() {
                for c1 in fl.elements() {
                    for c2 in fl.elements() {
                        let p = Poly::new(vec![c0, c1, c2, Fq::ONE]);
                        if fl.elements().any(|x| p.eval(&fl, x).is_zero()) {
                            with_root += 1;
                        }
                    }
                }
            }
            assert_eq!(list.len() as u32, total - with_root);
        }
    }

    #[test]
    fn action_composition_order() {
        for q in [2, 3] {
            let fl = f(q);
            let all = Mobius::all(&fl);
            assert_eq!(all.len() as u32, q * q * q - q);
            for p in irreducible_monic_cubics(&fl) {
                for phi in &all {
                    for psi in &all {
                        let lhs = mobius_transform(&fl, &p, &phi.compose(&fl, psi)).unwrap();
                        let rhs = mobius_transform(&fl, &mobius_transform(&fl, &p, phi).unwrap(), psi).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_and_stabilizers() {
        let f2 = f(2);
        let g = Poly::from_values(&[1, 1, 0, 1]);
        let orbit = pgl_orbit_of_cubic(&f2, &g).unwrap();
        assert_eq!(orbit.len(), 2);
        assert!(lines_equivalent_rank3(&f2, &g, &Poly::from_values(&[1, 0, 1, 1])).unwrap());
        assert!(lines_equivalent_rank3(&f2, &g, &g).unwrap());
        assert_eq!(pgl_orbit_of_cubic(&f2, &Poly::from_values(&[0, 0, 0, 1])), Err(PencilError::Reducible));

        for q in [2u32, 3, 5, 7] {
            let fl = f(q);
            let s = pencil_orbit_summary(&fl);
            assert_eq!(s.cubic_count as u32, (q * q * q - q) / 3);
            assert_eq!(s.orbit_count(), 1);
            assert_eq!(s.stabilizer_orders, vec![3]);
            for p in irreducible_monic_cubics(&fl) {
                assert_eq!(stabilizer(&fl, &p).unwrap().len(), 3);
            }
        }
    }
}
