//! Orbit classification of tensors in `F_q^2 (x) F_q^3 (x) F_q^3`.
//!
//! A tensor is reduced to its first contraction space `A_1`, a point or line
//! of 3x3 matrices, and labelled by a decision tree over invariants of that
//! line: rank distribution, position of the rank-1 point relative to `Q(x)`,
//! the factorization type of the determinant form and the dimensions of the
//! other two contraction spaces.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf::{Field, Fq};
use crate::linalg::{Mat3, Subspace};
use crate::pencil::{det_form, FactorType};
use crate::tensor::{in_q, QMembership, RankDistribution, Tensor223, Tensor233};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("unknown orbit label {0:?}")]
    UnknownLabel(String),
    #[error("embedded 2x2x3 tensor classified as {0}, which does not occur in that space")]
    OutsideShape223(OrbitLabel),
}

/// The 21 `H`-orbits. `O4T`, `O7T` and `O11T` are the images of `O4`, `O7`
/// and `O11` under the factor swap `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    O0,
    O1,
    O2,
    O3,
    O4,
    O4T,
    O5,
    O6,
    O7,
    O7T,
    O8,
    O9,
    O10,
    O11,
    O11T,
    O12,
    O13,
    O14,
    O15,
    O16,
    O17,
}

impl OrbitLabel {
    pub const ALL: [OrbitLabel; 21] = [
        OrbitLabel::O0,
        OrbitLabel::O1,
        OrbitLabel::O2,
        OrbitLabel::O3,
        OrbitLabel::O4,
        OrbitLabel::O4T,
        OrbitLabel::O5,
        OrbitLabel::O6,
        OrbitLabel::O7,
        OrbitLabel::O7T,
        OrbitLabel::O8,
        OrbitLabel::O9,
        OrbitLabel::O10,
        OrbitLabel::O11,
        OrbitLabel::O11T,
        OrbitLabel::O12,
        OrbitLabel::O13,
        OrbitLabel::O14,
        OrbitLabel::O15,
        OrbitLabel::O16,
        OrbitLabel::O17,
    ];

    /// Labels surviving the `G`-projection.
    pub fn g_labels() -> impl Iterator<Item = OrbitLabel> {
        Self::ALL.into_iter().filter(|l| l.g_projection() == *l)
    }

    /// Position in [`OrbitLabel::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        use OrbitLabel::*;
        match self {
            O0 => "o0",
            O1 => "o1",
            O2 => "o2",
            O3 => "o3",
            O4 => "o4",
            O4T => "o4T",
            O5 => "o5",
            O6 => "o6",
            O7 => "o7",
            O7T => "o7T",
            O8 => "o8",
            O9 => "o9",
            O10 => "o10",
            O11 => "o11",
            O11T => "o11T",
            O12 => "o12",
            O13 => "o13",
            O14 => "o14",
            O15 => "o15",
            O16 => "o16",
            O17 => "o17",
        }
    }

    /// Merges each transpose pair into its untransposed member.
    pub fn g_projection(self) -> OrbitLabel {
        match self {
            OrbitLabel::O4T => OrbitLabel::O4,
            OrbitLabel::O7T => OrbitLabel::O7,
            OrbitLabel::O11T => OrbitLabel::O11,
            l => l,
        }
    }

    /// Label of the transposed orbit.
    pub fn transposed(self) -> OrbitLabel {
        use OrbitLabel::*;
        match self {
            O4 => O4T,
            O4T => O4,
            O7 => O7T,
            O7T => O7,
            O11 => O11T,
            O11T => O11,
            l => l,
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrbitLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['_', '^'], "");
        OrbitLabel::ALL
            .into_iter()
            .find(|l| l.name().to_ascii_lowercase() == norm)
            .ok_or_else(|| ClassifyError::UnknownLabel(s.to_string()))
    }
}

/// Which factor the rank-1 points of a line inside the Segre variety share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommonSpace {
    /// All points have the same 1-dimensional column space.
    Column,
    /// All points have the same 1-dimensional row space.
    Row,
}

/// The invariants the decision tree reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InvariantSignature {
    /// `(dim A_1, dim A_2, dim A_3)`
    pub dims: [usize; 3],
    pub rd: RankDistribution,
    /// Present when `dim A_1 = 2`.
    pub det_type: Option<FactorType>,
    /// Present when the line has exactly one rank-1 point and some rank-2 point.
    pub q_case: Option<QMembership>,
    /// Present when every point of the line has rank 1.
    pub side: Option<CommonSpace>,
}

impl InvariantSignature {
    /// Applies the decision tree. `None` only for signatures no tensor has.
    pub fn label(&self, q: u32) -> Option<OrbitLabel> {
        use OrbitLabel::*;
        let [a, b, _] = self.rd.0;
        let label = match self.dims[0] {
            0 => O0,
            1 => match self.rd.0 {
                [1, 0, 0] => O1,
                [0, 1, 0] => O2,
                [0, 0, 1] => O3,
                _ => return None,
            },
            2 if a == q + 1 => match self.side? {
                CommonSpace::Column => O4,
                CommonSpace::Row => O4T,
            },
            2 if a == 2 => O5,
            2 if a == 1 && b >= 1 => match self.q_case? {
                QMembership::Inside => O6,
                QMembership::ColOnly => O7,
                QMembership::RowOnly => O7T,
                QMembership::Outside => O8,
            },
            2 if a == 1 => O9,
            2 if a == 0 => match self.det_type? {
                FactorType::Zero => match (self.dims[1], self.dims[2]) {
                    (2, 2) => O10,
                    (2, 3) => O11,
                    (3, 2) => O11T,
                    (3, 3) => O12,
                    _ => return None,
                },
                FactorType::DoubleLinear => O13,
                FactorType::ThreeDistinctLinear => O14,
                FactorType::LinearTimesIrreducibleQuadratic => O15,
                FactorType::TripleLinear => O16,
                FactorType::IrreducibleCubic => O17,
            },
            _ => return None,
        };
        Some(label)
    }
}

/// Computes every invariant used by [`classify_h`].
pub fn signature(field: &Field, t: &Tensor233) -> InvariantSignature {
    let dims = t.contraction_dims(field);
    let fc = t.first_contraction(field);
    let mut counts = [0u32; 3];
    let mut rank1 = None;
    let mut rank2 = None;
    for m in fc.points(field) {
        let r = m.rank(field);
        counts[r - 1] += 1;
        match r {
            1 if rank1.is_none() => rank1 = Some(m),
            2 if rank2.is_none() => rank2 = Some(m),
            _ => {}
        }
    }
    let rd = RankDistribution(counts);
    let mut sig = InvariantSignature { dims, rd, det_type: None, q_case: None, side: None };
    if fc.dim != 2 {
        return sig;
    }
    let [b1, b2] = fc.basis;
    sig.det_type = Some(det_form(field, &b1, &b2).factor_type(field));
    let [a, b, _] = counts;
    if a == field.q() + 1 {
        sig.side = common_space(field, &b1, &b2);
    }
    if a == 1 && b >= 1 {
        let (x1, x2) = (rank1.unwrap(), rank2.unwrap());
        sig.q_case = Some(in_q(field, &x1, &x2).expect("ranks checked above"));
    }
    sig
}

fn common_space(field: &Field, b1: &Mat3, b2: &Mat3) -> Option<CommonSpace> {
    let cols: Subspace = b1.col_space(field).sum(field, &b2.col_space(field));
    let rows: Subspace = b1.row_space(field).sum(field, &b2.row_space(field));
    match (cols.dim(), rows.dim()) {
        (1, _) => Some(CommonSpace::Column),
        (_, 1) => Some(CommonSpace::Row),
        _ => None,
    }
}

/// The `H`-orbit of `t`.
pub fn classify_h(field: &Field, t: &Tensor233) -> OrbitLabel {
    let sig = signature(field, t);
    sig.label(field.q())
        .unwrap_or_else(|| panic!("no orbit matches signature {sig:?} of {t:?}"))
}

/// The `G`-orbit of `t`, named by its untransposed `H`-orbit.
pub fn classify_g(field: &Field, t: &Tensor233) -> OrbitLabel {
    classify_h(field, t).g_projection()
}

/// `H`-labels that occur in `F^2 (x) F^2 (x) F^3`.
pub const LABELS_223: [OrbitLabel; 10] = [
    OrbitLabel::O0,
    OrbitLabel::O1,
    OrbitLabel::O2,
    OrbitLabel::O4,
    OrbitLabel::O4T,
    OrbitLabel::O5,
    OrbitLabel::O6,
    OrbitLabel::O7,
    OrbitLabel::O10,
    OrbitLabel::O11,
];

/// `(H-label, G-label)` of a tensor in `F^2 (x) F^2 (x) F^3`.
///
/// There the two 2-dimensional factors may be swapped, which fuses `o2`
/// with `o4`; the fused class is reported as `o4`. `o4T` stays separate.
pub fn classify_223(field: &Field, b: &Tensor223) -> Result<(OrbitLabel, OrbitLabel), ClassifyError> {
    let h = classify_h(field, &b.embed());
    if !LABELS_223.contains(&h) {
        return Err(ClassifyError::OutsideShape223(h));
    }
    let g = if h == OrbitLabel::O2 { OrbitLabel::O4 } else { h };
    Ok((h, g))
}

/// Orbit number in Nurmiev's table of `C^3 (x) C^3 (x) C^3`; `None` for the
/// orbits that are empty over the complex numbers.
pub fn nurmiev_label(label: OrbitLabel) -> Option<u32> {
    use OrbitLabel::*;
    Some(match label.g_projection() {
        O0 => 25,
        O1 => 24,
        O2 => 23,
        O3 => 22,
        O4 => 23,
        O5 => 20,
        O6 => 21,
        O7 => 19,
        O8 => 15,
        O9 => 16,
        O11 => 18,
        O12 => 17,
        O13 => 12,
        O14 => 9,
        O16 => 13,
        O10 | O15 | O17 => return None,
        O4T | O7T | O11T => unreachable!("projected above"),
    })
}

/// First `(u, v)`, `v != 0`, in lexicographic order with
/// `v l^2 + u v l - 1 != 0` for every `l`; then `s^2 - u v s t - v t^2` is
/// irreducible.
pub fn quadratic_parameters(field: &Field) -> (Fq, Fq) {
    for u in field.elements() {
        for v in field.elements().skip(1) {
            let uv = field.mul(u, v);
            let ok = field.elements().all(|l| {
                let val = field.mul_add(field.mul_add(v, l, uv), l, field.neg(Fq::ONE));
                !val.is_zero()
            });
            if ok {
                return (u, v);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// First `(alpha, beta, gamma)` in lexicographic order with
/// `l^3 + gamma l^2 - beta l + alpha != 0` for every `l`.
pub fn cubic_parameters(field: &Field) -> (Fq, Fq, Fq) {
    for alpha in field.elements() {
        for beta in field.elements() {
            for gamma in field.elements() {
                let ok = field.elements().all(|l| {
                    let l2 = field.mul(l, l);
                    let l3 = field.mul(l2, l);
                    let v = field.add(field.add(l3, field.mul(gamma, l2)), field.sub(alpha, field.mul(beta, l)));
                    !v.is_zero()
                });
                if ok {
                    return (alpha, beta, gamma);
                }
            }
        }
    }
    unreachable!("every finite field has an irreducible cubic")
}

/// Representative of the orbit `label` over `field`.
pub fn canonical_form(field: &Field, label: OrbitLabel) -> Tensor233 {
    use OrbitLabel::*;
    let e = Mat3::unit;
    let s = |ms: &[Mat3]| ms.iter().fold(Mat3::zero(), |acc, m| acc.add(field, m));
    let id = Mat3::identity();
    let zero = Mat3::zero();
    let (m1, m2) = match label {
        O0 => (zero, zero),
        O1 => (e(0, 0), zero),
        O2 => (s(&[e(0, 0), e(1, 1)]), zero),
        O3 => (id, zero),
        O4 => (e(0, 0), e(0, 1)),
        O5 => (e(0, 0), e(1, 1)),
        O6 => (e(0, 0), s(&[e(0, 1), e(1, 0)])),
        O7 => (e(0, 2), s(&[e(0, 0), e(1, 1)])),
        O8 => (e(0, 0), s(&[e(1, 1), e(2, 2)])),
        O9 => (e(2, 0), id),
        O10 => {
            let (u, v) = quadratic_parameters(field);
            (
                s(&[e(0, 0), e(1, 1), e(0, 1).scale(field, u)]),
                s(&[e(0, 1), e(1, 0).scale(field, v)]),
            )
        }
        O11 => (s(&[e(0, 0), e(1, 1)]), s(&[e(0, 1), e(1, 2)])),
        O12 => (s(&[e(0, 0), e(1, 1)]), s(&[e(0, 2), e(2, 1)])),
        O13 => (s(&[e(0, 0), e(1, 1)]), s(&[e(0, 1), e(2, 2)])),
        O14 => (s(&[e(0, 0), e(1, 1)]), s(&[e(1, 1), e(2, 2)])),
        O15 => {
            let (u, v) = quadratic_parameters(field);
            (s(&[id, e(0, 1).scale(field, u)]), s(&[e(0, 1), e(1, 0).scale(field, v)]))
        }
        O16 => (id, s(&[e(0, 1), e(1, 2)])),
        O17 => {
            let (alpha, beta, gamma) = cubic_parameters(field);
            let mut m2 = s(&[e(0, 1), e(1, 2)]);
            m2.entries[2] = [alpha, beta, gamma];
            (id, m2)
        }
        O4T | O7T | O11T => return canonical_form(field, label.transposed()).transpose(),
    };
    Tensor233::from_slices(&m1, &m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::GroupElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn label_names_round_trip() {
        for l in OrbitLabel::ALL {
            assert_eq!(l.name().parse::<OrbitLabel>().unwrap(), l);
            assert_eq!(OrbitLabel::ALL[l.index()], l);
        }
        assert_eq!("o4^T".parse::<OrbitLabel>().unwrap(), OrbitLabel::O4T);
        assert!("o18".parse::<OrbitLabel>().is_err());
        assert_eq!(OrbitLabel::g_labels().count(), 18);
    }

    #[test]
    fn zero_tensor() {
        assert_eq!(classify_h(&f(2), &Tensor233::zero()), OrbitLabel::O0);
    }

    #[test]
    fn canonical_forms_classify_to_themselves() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let fl = f(q);
            for l in OrbitLabel::ALL {
                assert_eq!(classify_h(&fl, &canonical_form(&fl, l)), l, "q={q}");
            }
        }
    }

    #[test]
    fn parameter_searches() {
        let f2 = f(2);
        assert_eq!(quadratic_parameters(&f2), (Fq(1), Fq(1)));
        let (a, b, g) = cubic_parameters(&f2);
        assert_eq!((a, b, g), (Fq(1), Fq(0), Fq(1)));
        for q in [3, 4, 5, 7, 8, 9, 11, 16, 25] {
            let fl = f(q);
            let (u, v) = quadratic_parameters(&fl);
            assert!(!v.is_zero());
            // s^2 - uv s - v has no root
            for x in fl.elements() {
                let val = field_eval(&fl, &[fl.neg(v), fl.neg(fl.mul(u, v)), Fq::ONE], x);
                assert!(!val.is_zero());
            }
        }
    }

    fn field_eval(fl: &Field, c: &[Fq], x: Fq) -> Fq {
        c.iter().rev().fold(Fq::ZERO, |acc, &k| fl.mul_add(acc, x, k))
    }

    #[test]
    fn transposes_pair_exactly() {
        for q in [2, 3, 4] {
            let fl = f(q);
            for l in OrbitLabel::ALL {
                let t = canonical_form(&fl, l).transpose();
                assert_eq!(classify_h(&fl, &t), l.transposed());
                assert_eq!(classify_g(&fl, &t), l.g_projection());
            }
        }
    }

    #[test]
    fn g_projection_examples() {
        let f3 = f(3);
        let o4t = canonical_form(&f3, OrbitLabel::O4).transpose();
        assert_eq!(classify_g(&f3, &o4t), OrbitLabel::O4);
        let o7 = canonical_form(&f3, OrbitLabel::O7);
        assert_eq!(classify_g(&f3, &o7), classify_g(&f3, &o7.transpose()));
        assert_ne!(classify_h(&f3, &o7), classify_h(&f3, &o7.transpose()));
        assert_eq!(classify_g(&f3, &canonical_form(&f3, OrbitLabel::O13)), OrbitLabel::O13);
    }

    #[test]
    fn nurmiev_examples() {
        assert_eq!(nurmiev_label(OrbitLabel::O14), Some(9));
        assert_eq!(nurmiev_label(OrbitLabel::O2), Some(23));
        assert_eq!(nurmiev_label(OrbitLabel::O4), Some(23));
        assert_eq!(nurmiev_label(OrbitLabel::O17), None);
        assert_eq!(nurmiev_label(OrbitLabel::O10), None);
        assert_eq!(nurmiev_label(OrbitLabel::O15), None);
        assert_eq!(nurmiev_label(OrbitLabel::O7T), Some(19));
    }

    #[test]
    fn classify_223_examples() {
        let f2 = f(2);
        assert_eq!(classify_223(&f2, &Tensor223::zero()).unwrap(), (OrbitLabel::O0, OrbitLabel::O0));
        let mut o5 = Tensor223::zero();
        o5.a[0] = Fq::ONE; // e1 e1 e1
        o5.a[6 + 3 + 1] = Fq::ONE; // e2 e2 e2
        assert_eq!(classify_223(&f2, &o5).unwrap(), (OrbitLabel::O5, OrbitLabel::O5));
    }

    #[test]
    fn random_tensors_keep_their_label() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for q in [2, 3, 5] {
            let fl = f(q);
            for _ in 0..300 {
                let t = Tensor233::random(&fl, &mut rng);
                let l = classify_h(&fl, &t);
                let h = GroupElement::random(&fl, &mut rng, false);
                assert_eq!(classify_h(&fl, &t.act(&fl, &h)), l);
            }
        }
    }

    #[test]
    fn rank_two_choice_does_not_matter() {
        // in the one-rank-1-point branch, every rank-2 point gives the same case
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for q in [2, 3, 4, 5] {
            let fl = f(q);
            for l in [OrbitLabel::O6, OrbitLabel::O7, OrbitLabel::O7T, OrbitLabel::O8] {
                for _ in 0..20 {
                    let h = GroupElement::random(&fl, &mut rng, false);
                    let t = canonical_form(&fl, l).act(&fl, &h);
                    let fc = t.first_contraction(&fl);
                    let pts: Vec<Mat3> = fc.points(&fl).collect();
                    let x1 = pts.iter().find(|m| m.rank(&fl) == 1).unwrap();
                    let cases: std::collections::HashSet<_> = pts
                        .iter()
                        .filter(|m| m.rank(&fl) == 2)
                        .map(|m| in_q(&fl, x1, m).unwrap())
                        .collect();
                    assert_eq!(cases.len(), 1, "{l} over F_{q}");
                }
            }
        }
    }
}
