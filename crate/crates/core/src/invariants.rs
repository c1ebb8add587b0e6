//! The evaluation functor on (singular) framed tangles, Vassiliev coefficient
//! extraction, type-bound verification, and the disjoint-union constraints.
//!
//! A slice at offset `o` in ambient width `w` acts as
//! `Id^{(x) o} (x) slice (x) Id^{(x) rest}`; rather than materializing that
//! Kronecker product, evaluation contracts each slice matrix into the running
//! state at its tensor positions, bottom to top. A closed diagram ends as a
//! 1x1 matrix read as a truncated scalar.

use thiserror::Error;

use crate::field::{FieldElem, ScalarError};
use crate::matrix::{LinalgError, Matrix, MatrixR};
use crate::parallel;
use crate::ribbon::TortileObjectData;
use crate::series::TruncatedScalar;
use crate::tangles::{MorseDiagram, SliceKind, TangleError, unknot_diagram};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("diagram is not closed")]
    NotClosed,
    #[error("coefficient index {k} exceeds ring order {order}")]
    CoeffOutOfRange { k: usize, order: usize },
    #[error("unknot value {0} is not a unit; no normalization available")]
    UnknotNotAUnit(TruncatedScalar),
    #[error("structure data fails infinitesimal symmetry; type bound withheld")]
    NotInfinitesimallySymmetric,
    #[error("diagram has {have} singular slices; the order-{order} bound needs at least {need}")]
    TooFewSingularities { have: usize, need: usize, order: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Result of evaluating a diagram: the matrix of the induced linear map,
/// `dim^{target} x dim^{source}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationResult {
    pub matrix: MatrixR,
}

impl EvaluationResult {
    /// The scalar value of a closed diagram.
    pub fn scalar(&self) -> Option<&TruncatedScalar> {
        self.matrix.as_scalar()
    }

    pub fn order(&self) -> usize {
        self.matrix.ctx().order
    }
}

fn slice_matrix<'t>(t: &'t TortileObjectData, kind: SliceKind, sing_cr: &'t MatrixR, sing_tw: &'t MatrixR) -> &'t MatrixR {
    match kind {
        SliceKind::IdUp | SliceKind::IdDown => unreachable!("identities are skipped"),
        SliceKind::CupR => t.coev_r(),
        SliceKind::CupL => t.coev_l(),
        SliceKind::CapR => t.ev_r(),
        SliceKind::CapL => t.ev_l(),
        SliceKind::CrPos => t.c_plus(),
        SliceKind::CrNeg => t.c_minus(),
        SliceKind::CrSing => sing_cr,
        SliceKind::TwPos => t.theta(),
        SliceKind::TwNeg => t.theta_inv(),
        SliceKind::TwSing => sing_tw,
    }
}

/// Evaluates a validated diagram against tortile data at one object.
pub fn evaluate(
    diagram: &MorseDiagram,
    data: &TortileObjectData,
) -> Result<EvaluationResult, InvariantError> {
    let (src_sig, tgt_sig) = diagram.validate()?;
    let d = data.dim();
    let ring = data.ring();
    let src_dim = d.pow(src_sig.len() as u32);
    let sing_cr = data.braiding_difference();
    let sing_tw = data.twist_difference();

    // state: (d^width x src_dim) matrix, row-major, columns innermost.
    let mut width = src_sig.len();
    let mut state: Vec<TruncatedScalar> = {
        let mut s = vec![TruncatedScalar::zero(ring); src_dim * src_dim];
        for i in 0..src_dim {
            s[i * src_dim + i] = TruncatedScalar::one(ring);
        }
        s
    };

    for slice in diagram.slices() {
        if matches!(slice.kind, SliceKind::IdUp | SliceKind::IdDown) {
            continue;
        }
        let m = slice_matrix(data, slice.kind, &sing_cr, &sing_tw);
        let r_in = slice.kind.inputs().len();
        let r_out = slice.kind.outputs().len();
        let o = slice.offset;
        let din = d.pow(r_in as u32);
        let dout = d.pow(r_out as u32);
        let pre = d.pow(o as u32);
        let suf = d.pow((width - o - r_in) as u32);
        let new_width = width - r_in + r_out;
        let mut next =
            vec![TruncatedScalar::zero(ring); d.pow(new_width as u32) * src_dim];
        for p in 0..pre {
            for b in 0..dout {
                for a in 0..din {
                    let coeff = m.at(b, a);
                    if coeff.is_zero() {
                        continue;
                    }
                    for s in 0..suf {
                        let old_row = (p * din + a) * suf + s;
                        let new_row = (p * dout + b) * suf + s;
                        for j in 0..src_dim {
                            let old = &state[old_row * src_dim + j];
                            if old.is_zero() {
                                continue;
                            }
                            next[new_row * src_dim + j].mul_acc(coeff, old);
                        }
                    }
                }
            }
        }
        state = next;
        width = new_width;
    }
    debug_assert_eq!(width, tgt_sig.len());
    let matrix = Matrix::from_entries(d.pow(width as u32), src_dim, state)?;
    Ok(EvaluationResult { matrix })
}

/// Evaluates many diagrams against shared data, in parallel when enabled.
pub fn evaluate_batch(
    diagrams: &[MorseDiagram],
    data: &TortileObjectData,
) -> Result<Vec<EvaluationResult>, InvariantError> {
    parallel::map_slice(diagrams, |d| evaluate(d, data))
        .into_iter()
        .collect()
}

/// The `K`-valued invariant assigning the coefficient of `eps^k`.
pub fn vassiliev_coeff(
    diagram: &MorseDiagram,
    data: &TortileObjectData,
    k: usize,
) -> Result<FieldElem, InvariantError> {
    if k > data.order() {
        return Err(InvariantError::CoeffOutOfRange { k, order: data.order() });
    }
    let value = evaluate(diagram, data)?;
    let scalar = value.scalar().ok_or(InvariantError::NotClosed)?;
    Ok(scalar.coeff(k).clone())
}

/// Resolution sign of one choice of desingularization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, v: &TruncatedScalar) -> TruncatedScalar {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => v.neg(),
        }
    }
}

/// All `2^s` signed resolutions of the singular slices: positive resolutions
/// count +, negative ones -.
pub fn resolve_singular(
    diagram: &MorseDiagram,
) -> Result<Vec<(Sign, MorseDiagram)>, InvariantError> {
    let positions = diagram.singular_positions();
    let mut out = Vec::with_capacity(1 << positions.len());
    for mask in 0u64..(1 << positions.len()) {
        let mut resolved = diagram.clone();
        let mut negatives = 0;
        for (bit, &p) in positions.iter().enumerate() {
            let positive = mask & (1 << bit) == 0;
            if !positive {
                negatives += 1;
            }
            resolved = resolved.resolve_at(p, positive)?;
        }
        let sign = if negatives % 2 == 0 { Sign::Plus } else { Sign::Minus };
        out.push((sign, resolved));
    }
    Ok(out)
}

/// Outcome of a type-bound check on one singular diagram.
#[derive(Clone, Debug)]
pub struct TypeBoundReport {
    pub singular_count: usize,
    pub value: TruncatedScalar,
    pub passed: bool,
}

/// Asserts that a closed diagram with at least `order + 1` singular slices
/// evaluates to exactly zero. Preconditions are reported as distinct errors
/// so flagged data cannot silently claim the guarantee.
pub fn verify_type_bound(
    diagram: &MorseDiagram,
    data: &TortileObjectData,
) -> Result<TypeBoundReport, InvariantError> {
    if !data.is_infinitesimally_symmetric() {
        return Err(InvariantError::NotInfinitesimallySymmetric);
    }
    let have = diagram.singular_count();
    let need = data.order() + 1;
    if have < need {
        return Err(InvariantError::TooFewSingularities { have, need, order: data.order() });
    }
    let value = evaluate(diagram, data)?;
    let scalar = value.scalar().ok_or(InvariantError::NotClosed)?.clone();
    Ok(TypeBoundReport {
        singular_count: have,
        passed: scalar.is_zero(),
        value: scalar,
    })
}

/// `evaluate(d) * (unknot value)^{-#components}`; requires the unknot value
/// to be a unit of `R_n`.
pub fn normalized_value(
    diagram: &MorseDiagram,
    data: &TortileObjectData,
) -> Result<TruncatedScalar, InvariantError> {
    let value = evaluate(diagram, data)?;
    let scalar = value.scalar().ok_or(InvariantError::NotClosed)?;
    let unknot = evaluate(&unknot_diagram(), data)?;
    let u = unknot.scalar().expect("circle is closed");
    if !u.is_unit() {
        return Err(InvariantError::UnknotNotAUnit(u.clone()));
    }
    let components = diagram.component_count()?;
    let inv = u.inverse()?;
    let mut acc = scalar.clone();
    for _ in 0..components {
        acc = &acc * &inv;
    }
    Ok(acc)
}

/// One row of the coefficient convolution table.
#[derive(Clone, Debug)]
pub struct ConvolutionRow {
    pub k: usize,
    pub union_coeff: FieldElem,
    pub convolved: FieldElem,
    pub ok: bool,
}

/// Multiplicativity under separated union, with the coefficient-convolution
/// identity `v_k(a u b) = sum_i v_i(a) v_{k-i}(b)` spelled out per degree.
#[derive(Clone, Debug)]
pub struct DisjointReport {
    pub union_value: TruncatedScalar,
    pub product_value: TruncatedScalar,
    pub multiplicative: bool,
    pub convolution: Vec<ConvolutionRow>,
}

impl DisjointReport {
    pub fn passed(&self) -> bool {
        self.multiplicative && self.convolution.iter().all(|r| r.ok)
    }
}

pub fn check_disjoint_union(
    a: &MorseDiagram,
    b: &MorseDiagram,
    data: &TortileObjectData,
) -> Result<DisjointReport, InvariantError> {
    let union = a.disjoint_union(b)?;
    let va = evaluate(a, data)?;
    let vb = evaluate(b, data)?;
    let vu = evaluate(&union, data)?;
    let sa = va.scalar().ok_or(InvariantError::NotClosed)?;
    let sb = vb.scalar().ok_or(InvariantError::NotClosed)?;
    let su = vu.scalar().ok_or(InvariantError::NotClosed)?;
    let product = sa * sb;
    let field = data.ring().field;
    let convolution = (0..=data.order())
        .map(|k| {
            let mut conv = FieldElem::zero(field);
            for i in 0..=k {
                conv = &conv + &(sa.coeff(i) * sb.coeff(k - i));
            }
            ConvolutionRow {
                k,
                union_coeff: su.coeff(k).clone(),
                ok: conv == *su.coeff(k),
                convolved: conv,
            }
        })
        .collect();
    Ok(DisjointReport {
        multiplicative: *su == product,
        union_value: su.clone(),
        product_value: product,
        convolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldElem};
    use crate::series::SeriesRing;
    use crate::tangles::BraidWord;

    fn kauffman(order: usize) -> TortileObjectData {
        TortileObjectData::kauffman(order).unwrap()
    }

    fn qs(coeffs: &[(i64, i64)]) -> TruncatedScalar {
        TruncatedScalar::from_coeffs(
            coeffs
                .iter()
                .map(|&(n, d)| FieldElem::from_ratio(n, d, Field::Q).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn circle_evaluates_to_dimension_for_symmetric_data() {
        for d in [1, 2, 3] {
            let data =
                TortileObjectData::symmetric(d, SeriesRing::new(Field::Q, 1)).unwrap();
            let v = evaluate(&unknot_diagram(), &data).unwrap();
            assert_eq!(
                v.scalar().unwrap(),
                &TruncatedScalar::constant(
                    FieldElem::from_int(d as i64, Field::Q),
                    1
                )
            );
        }
    }

    #[test]
    fn unknot_value_is_minus_a2_minus_a_inv2() {
        // -A^2 - A^{-2} = -2 - 4 eps^2 + O(eps^3) at order 2.
        let v = evaluate(&unknot_diagram(), &kauffman(2)).unwrap();
        assert_eq!(v.scalar().unwrap(), &qs(&[(-2, 1), (0, 1), (-4, 1)]));
        // Same through the one-strand empty braid closure.
        let braid = BraidWord::new(1, vec![], vec![0]).trace_closure().unwrap();
        let v2 = evaluate(&braid, &kauffman(2)).unwrap();
        assert_eq!(v2.scalar().unwrap(), &qs(&[(-2, 1), (0, 1), (-4, 1)]));
    }

    #[test]
    fn vassiliev_coefficients_of_the_unknot() {
        let data = kauffman(2);
        let d = unknot_diagram();
        assert_eq!(
            vassiliev_coeff(&d, &data, 0).unwrap(),
            FieldElem::from_int(-2, Field::Q)
        );
        assert_eq!(
            vassiliev_coeff(&d, &data, 1).unwrap(),
            FieldElem::zero(Field::Q)
        );
        assert!(matches!(
            vassiliev_coeff(&d, &data, 3),
            Err(InvariantError::CoeffOutOfRange { k: 3, order: 2 })
        ));
    }

    #[test]
    fn functoriality_stack_and_beside() {
        use crate::tangles::{MorseDiagram, Orientation::Up, Slice};
        let data = kauffman(2);
        // d1: one positive crossing on [Up, Up]; d2: one twist then a crossing.
        let d1 = MorseDiagram::new(
            vec![Up, Up],
            vec![Slice::new(SliceKind::CrPos, 0)],
        )
        .unwrap();
        let d2 = MorseDiagram::new(
            vec![Up, Up],
            vec![Slice::new(SliceKind::TwPos, 1), Slice::new(SliceKind::CrNeg, 0)],
        )
        .unwrap();
        let stacked = d1.stack(&d2).unwrap();
        let lhs = evaluate(&stacked, &data).unwrap().matrix;
        let rhs = evaluate(&d2, &data)
            .unwrap()
            .matrix
            .mul(&evaluate(&d1, &data).unwrap().matrix)
            .unwrap();
        assert_eq!(lhs, rhs);
        let side = d1.beside(&d2).unwrap();
        let lhs = evaluate(&side, &data).unwrap().matrix;
        let rhs = evaluate(&d1, &data)
            .unwrap()
            .matrix
            .kron(&evaluate(&d2, &data).unwrap().matrix)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn singular_evaluation_matches_signed_resolutions() {
        let data = kauffman(2);
        let braid = BraidWord::new(2, vec![1, 1, 1], vec![1, 0])
            .trace_closure()
            .unwrap();
        for positions in [vec![2], vec![2, 4], vec![2, 3, 5]] {
            let singular = braid.singularize(&positions).unwrap();
            let direct = evaluate(&singular, &data).unwrap();
            let mut acc = TruncatedScalar::zero(data.ring());
            for (sign, resolved) in resolve_singular(&singular).unwrap() {
                let v = evaluate(&resolved, &data).unwrap();
                acc = &acc + &sign.apply(v.scalar().unwrap());
            }
            assert_eq!(direct.scalar().unwrap(), &acc);
        }
        // A nonsingular diagram resolves to itself with sign +.
        let r = resolve_singular(&braid).unwrap();
        assert_eq!(r.len(), 1);
        assert!(matches!(r[0].0, Sign::Plus));
    }

    #[test]
    fn order_zero_coefficient_ignores_crossing_switches() {
        let data = kauffman(2);
        let a = BraidWord::new(2, vec![1, 1, 1], vec![0, 0]).trace_closure().unwrap();
        let b = BraidWord::new(2, vec![1, 1, -1], vec![0, 0]).trace_closure().unwrap();
        assert_eq!(
            vassiliev_coeff(&a, &data, 0).unwrap(),
            vassiliev_coeff(&b, &data, 0).unwrap()
        );
        // And swapping a positive twist for a negative one.
        let c = BraidWord::new(2, vec![1, 1, 1], vec![1, 0]).trace_closure().unwrap();
        let d = BraidWord::new(2, vec![1, 1, 1], vec![-1, 0]).trace_closure().unwrap();
        assert_eq!(
            vassiliev_coeff(&c, &data, 0).unwrap(),
            vassiliev_coeff(&d, &data, 0).unwrap()
        );
    }

    #[test]
    fn type_bound_on_fully_singular_diagrams() {
        // Order 0: one singular crossing suffices.
        let data0 = kauffman(0);
        let trefoil = BraidWord::new(2, vec![1, 1, 1], vec![0, 0])
            .trace_closure()
            .unwrap();
        let singular = trefoil.singularize(&[2]).unwrap();
        let report = verify_type_bound(&singular, &data0).unwrap();
        assert!(report.passed, "value {}", report.value);
        // Too few singular points is a distinct error, not a failure.
        assert!(matches!(
            verify_type_bound(&trefoil, &data0),
            Err(InvariantError::TooFewSingularities { have: 0, need: 1, .. })
        ));
    }

    #[test]
    fn type_bound_is_sharp_at_order_one() {
        // theta - theta^{-1} = -6 eps + O(eps^2) is nonzero at order 1, so a
        // single singular twist on the unknot is a sharpness witness.
        let data = kauffman(1);
        let mut braid = BraidWord::new(1, vec![], vec![0]);
        braid.singular_twists = vec![(1, 1)];
        let d = braid.trace_closure().unwrap();
        let v = evaluate(&d, &data).unwrap();
        assert!(!v.scalar().unwrap().is_zero());
    }

    #[test]
    fn normalized_values() {
        let data = kauffman(2);
        assert_eq!(
            normalized_value(&unknot_diagram(), &data).unwrap(),
            TruncatedScalar::one(data.ring())
        );
        // Two-component unlink normalizes to 1 as well.
        let unlink = unknot_diagram().disjoint_union(&unknot_diagram()).unwrap();
        assert_eq!(
            normalized_value(&unlink, &data).unwrap(),
            TruncatedScalar::one(data.ring())
        );
        // Blackboard-framed trefoil: -A^5 - A^{-3} + A^{-7} = [-1, -9, 15/2].
        let trefoil = BraidWord::new(2, vec![1, 1, 1], vec![0, 0])
            .trace_closure()
            .unwrap();
        assert_eq!(
            normalized_value(&trefoil, &data).unwrap(),
            qs(&[(-1, 1), (-9, 1), (15, 2)])
        );
    }

    #[test]
    fn disjoint_union_is_multiplicative() {
        let data = kauffman(2);
        let unknot = unknot_diagram();
        let report = check_disjoint_union(&unknot, &unknot, &data).unwrap();
        assert!(report.passed());
        // (-2 - 4 eps^2)^2 truncates to 4 + 16 eps^2.
        assert_eq!(report.union_value, qs(&[(4, 1), (0, 1), (16, 1)]));
        let trefoil = BraidWord::new(2, vec![1, 1, 1], vec![0, 0])
            .trace_closure()
            .unwrap();
        let report = check_disjoint_union(&trefoil, &unknot, &data).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn reduction_compatibility_of_evaluation() {
        let four = kauffman(4);
        let two = kauffman(2);
        let trefoil = BraidWord::new(2, vec![1, 1, 1], vec![1, -1])
            .trace_closure()
            .unwrap();
        let v4 = evaluate(&trefoil, &four).unwrap();
        let v2 = evaluate(&trefoil, &two).unwrap();
        assert_eq!(v4.matrix.reduce_order(2).unwrap(), v2.matrix);
    }
}
