//! The deformation complex of a monoidal functor presentation and its proper
//! subcomplex: coboundary, cup and insertion products, cohomology dimensions,
//! obstructions, and order-by-order extension of deformations.
//!
//! In the pointed skeletal model a degree-n cochain is a scalar family indexed
//! by n-tuples of source objects. The coboundary is the bar formula with the
//! tensor monoid as multiplication, every term padded by the coherence scalar
//! aligning its parenthesizations.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElem, ScalarError};
use crate::matrix::{LinalgError, Matrix, MatrixK, Solve};
use crate::parallel;
use crate::series::{SeriesRing, TruncatedScalar};
use crate::skeletal::{FunctorPresentation, ObjId, ParenTree, SkelError};

#[derive(Debug, Error)]
pub enum DeformError {
    #[error("cochains belong to different functors")]
    FunctorMismatch,
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("insertion index {index} out of range for degree {degree}")]
    BadInsertion { index: usize, degree: usize },
    #[error("tuple arity {0} does not match degree {1}")]
    BadTuple(usize, usize),
    #[error("term {term} of the series is not a degree-2 cochain")]
    BadSeriesTerm { term: usize },
    #[error("series flagged proper but term {term} has a unit-index component")]
    NotProper { term: usize },
    #[error("deformed hexagon fails at {witness}: residual {residual}")]
    HexagonFailure { witness: String, residual: TruncatedScalar },
    #[error("functor is not multiplication-shaped: {0}")]
    NotMultiplication(String),
    #[error("series has order {0}, expected {1}")]
    WrongOrder(usize, usize),
    #[error(transparent)]
    Skel(#[from] SkelError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Element of `X^n(F)`: a scalar for every n-tuple of source objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    functor: Arc<FunctorPresentation>,
    degree: usize,
    comps: Vec<FieldElem>,
}

fn pow(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

impl Cochain {
    pub fn zero(functor: Arc<FunctorPresentation>, degree: usize) -> Result<Cochain, DeformError> {
        if degree == 0 {
            return Err(DeformError::DegreeZero);
        }
        let n = functor.source().size();
        let field = functor.field();
        Ok(Cochain {
            functor,
            degree,
            comps: vec![FieldElem::zero(field); pow(n, degree)],
        })
    }

    pub fn functor(&self) -> &Arc<FunctorPresentation> {
        &self.functor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[FieldElem] {
        &self.comps
    }

    pub fn tuple_index(&self, tuple: &[ObjId]) -> Result<usize, DeformError> {
        if tuple.len() != self.degree {
            return Err(DeformError::BadTuple(tuple.len(), self.degree));
        }
        let n = self.functor.source().size();
        Ok(tuple.iter().fold(0, |acc, o| acc * n + o.0))
    }

    pub fn index_tuple(&self, index: usize) -> Vec<ObjId> {
        index_tuple(self.functor.source().size(), index, self.degree)
    }

    pub fn get(&self, tuple: &[ObjId]) -> Result<&FieldElem, DeformError> {
        Ok(&self.comps[self.tuple_index(tuple)?])
    }

    pub fn set(&mut self, tuple: &[ObjId], v: FieldElem) -> Result<(), DeformError> {
        let i = self.tuple_index(tuple)?;
        self.comps[i] = v;
        Ok(())
    }

    pub fn from_components(
        functor: Arc<FunctorPresentation>,
        degree: usize,
        comps: Vec<FieldElem>,
    ) -> Result<Cochain, DeformError> {
        let mut c = Cochain::zero(functor, degree)?;
        if comps.len() != c.comps.len() {
            return Err(DeformError::BadTuple(comps.len(), c.comps.len()));
        }
        c.comps = comps;
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FieldElem::is_zero)
    }

    /// Proper: the component vanishes whenever any index is the unit object.
    pub fn is_proper(&self) -> bool {
        let unit = self.functor.source().unit();
        self.comps.iter().enumerate().all(|(i, v)| {
            v.is_zero() || !self.index_tuple(i).contains(&unit)
        })
    }

    fn same_functor(&self, rhs: &Cochain) -> Result<(), DeformError> {
        if Arc::ptr_eq(&self.functor, &rhs.functor) || self.functor == rhs.functor {
            Ok(())
        } else {
            Err(DeformError::FunctorMismatch)
        }
    }

    pub fn add(&self, rhs: &Cochain) -> Result<Cochain, DeformError> {
        self.same_functor(rhs)?;
        if self.degree != rhs.degree {
            return Err(DeformError::BadTuple(rhs.degree, self.degree));
        }
        let comps = self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect();
        Ok(Cochain { functor: self.functor.clone(), degree: self.degree, comps })
    }

    pub fn sub(&self, rhs: &Cochain) -> Result<Cochain, DeformError> {
        self.same_functor(rhs)?;
        if self.degree != rhs.degree {
            return Err(DeformError::BadTuple(rhs.degree, self.degree));
        }
        let comps = self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect();
        Ok(Cochain { functor: self.functor.clone(), degree: self.degree, comps })
    }

    pub fn scale(&self, s: &FieldElem) -> Cochain {
        Cochain {
            functor: self.functor.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|v| v * s).collect(),
        }
    }

    /// Bar coboundary with coherence padding on every term.
    pub fn delta(&self) -> Cochain {
        let functor = &self.functor;
        let degree = self.degree;
        let src = functor.source();
        let total = pow(src.size(), degree + 1);
        let field = functor.field();
        let comps = parallel::map_indices(total, |row| {
            let tuple = index_tuple(src.size(), row, degree + 1);
            let mut acc = FieldElem::zero(field);
            for (col_tuple, coeff) in delta_terms(functor, &tuple) {
                let v = &self.comps[col_tuple
                    .iter()
                    .fold(0, |a, o| a * src.size() + o.0)];
                if !v.is_zero() {
                    acc = &acc + &(&coeff * v);
                }
            }
            acc
        });
        Cochain { functor: functor.clone(), degree: degree + 1, comps }
    }

    /// Cup product: `(g u h)(a..) = padding * g(front) * h(back)`.
    pub fn cup(&self, rhs: &Cochain) -> Result<Cochain, DeformError> {
        self.same_functor(rhs)?;
        let (n, m) = (self.degree, rhs.degree);
        let src = self.functor.source();
        let f = &self.functor;
        let mut out = Cochain::zero(f.clone(), n + m)?;
        for idx in 0..out.comps.len() {
            let tuple = index_tuple(src.size(), idx, n + m);
            let (front, back) = tuple.split_at(n);
            let g = self.get(front)?;
            let h = rhs.get(back)?;
            if g.is_zero() || h.is_zero() {
                continue;
            }
            let pre = f.coherence_scalar(
                &ParenTree::func(ParenTree::left_comb(&tuple)),
                &ParenTree::node(
                    ParenTree::func(ParenTree::left_comb(front)),
                    ParenTree::func(ParenTree::left_comb(back)),
                ),
            )?;
            let post = f.coherence_scalar(
                &ParenTree::node(rc_images(front), rc_images(back)),
                &rc_images(&tuple),
            )?;
            out.comps[idx] = &(&pre * &post) * &(g * h);
        }
        Ok(out)
    }

    /// Insertion product `<g, h>^(i)`: `h` spans `deg h` consecutive indices
    /// starting after position `i`, and `g` sees their tensor product.
    pub fn brace_i(&self, rhs: &Cochain, i: usize) -> Result<Cochain, DeformError> {
        self.same_functor(rhs)?;
        let (m, n) = (self.degree, rhs.degree);
        if i >= m {
            return Err(DeformError::BadInsertion { index: i, degree: m });
        }
        let src = self.functor.source();
        let f = &self.functor;
        let mut out = Cochain::zero(f.clone(), m + n - 1)?;
        for idx in 0..out.comps.len() {
            let tuple = index_tuple(src.size(), idx, m + n - 1);
            let inner = &tuple[i..i + n];
            let mut outer: Vec<ObjId> = Vec::with_capacity(m);
            outer.extend_from_slice(&tuple[..i]);
            outer.push(src.mul_all(inner));
            outer.extend_from_slice(&tuple[i + n..]);
            let g = self.get(&outer)?;
            let h = rhs.get(inner)?;
            if g.is_zero() || h.is_zero() {
                continue;
            }
            // G's source, with the inner block as a nested left comb.
            let mut src_items: Vec<ParenTree> =
                tuple[..i].iter().map(|&o| ParenTree::leaf(o)).collect();
            src_items.push(ParenTree::left_comb(inner));
            src_items.extend(tuple[i + n..].iter().map(|&o| ParenTree::leaf(o)));
            let pre = f.coherence_scalar(
                &ParenTree::func(ParenTree::left_comb(&tuple)),
                &ParenTree::func(ParenTree::left_comb_of(src_items)),
            )?;
            // After H: the inner block is a right comb of images inside the
            // outer right comb.
            let mut tgt_items: Vec<ParenTree> = tuple[..i]
                .iter()
                .map(|&o| ParenTree::func(ParenTree::leaf(o)))
                .collect();
            tgt_items.push(rc_images(inner));
            tgt_items.extend(
                tuple[i + n..]
                    .iter()
                    .map(|&o| ParenTree::func(ParenTree::leaf(o))),
            );
            let post = f.coherence_scalar(
                &ParenTree::right_comb_of(tgt_items),
                &rc_images(&tuple),
            )?;
            out.comps[idx] = &(&pre * &post) * &(g * h);
        }
        Ok(out)
    }

    /// Signed sum of insertions, `sum_i (-1)^{(deg h - 1) i} <g,h>^(i)`.
    pub fn brace(&self, rhs: &Cochain) -> Result<Cochain, DeformError> {
        self.same_functor(rhs)?;
        let mut acc = Cochain::zero(self.functor.clone(), self.degree + rhs.degree - 1)?;
        for i in 0..self.degree {
            let term = self.brace_i(rhs, i)?;
            if (rhs.degree - 1) * i % 2 == 0 {
                acc = acc.add(&term)?;
            } else {
                acc = acc.sub(&term)?;
            }
        }
        Ok(acc)
    }
}

fn index_tuple(size: usize, mut index: usize, len: usize) -> Vec<ObjId> {
    let mut t = vec![ObjId(0); len];
    for k in (0..len).rev() {
        t[k] = ObjId(index % size);
        index /= size;
    }
    t
}

/// Right comb of functor images of a tuple.
fn rc_images(tuple: &[ObjId]) -> ParenTree {
    ParenTree::right_comb_of(
        tuple
            .iter()
            .map(|&o| ParenTree::func(ParenTree::leaf(o)))
            .collect(),
    )
}

/// The bar-formula terms of the coboundary on one output tuple: pairs of an
/// input tuple and the signed padding scalar multiplying the cochain there.
fn delta_terms(f: &FunctorPresentation, tuple: &[ObjId]) -> Vec<(Vec<ObjId>, FieldElem)> {
    let n = tuple.len() - 1;
    let full_src = ParenTree::func(ParenTree::left_comb(tuple));
    let full_tgt = rc_images(tuple);
    let mut terms = Vec::with_capacity(n + 2);
    // Whiskered term F(a0) (x) c(a1..an).
    {
        let pre = f
            .coherence_scalar(
                &full_src,
                &ParenTree::node(
                    ParenTree::func(ParenTree::leaf(tuple[0])),
                    ParenTree::func(ParenTree::left_comb(&tuple[1..])),
                ),
            )
            .expect("validated functor");
        let post = f
            .coherence_scalar(
                &ParenTree::node(ParenTree::func(ParenTree::leaf(tuple[0])), rc_images(&tuple[1..])),
                &full_tgt,
            )
            .expect("validated functor");
        terms.push((tuple[1..].to_vec(), &pre * &post));
    }
    // Inner terms c(a0, ..., a_{i-1} a_i, ..., an), sign (-1)^i.
    for i in 1..=n {
        let src = f.source();
        let merged = src.mul(tuple[i - 1], tuple[i]);
        let mut col: Vec<ObjId> = Vec::with_capacity(n);
        col.extend_from_slice(&tuple[..i - 1]);
        col.push(merged);
        col.extend_from_slice(&tuple[i + 1..]);
        let mut src_items: Vec<ParenTree> =
            tuple[..i - 1].iter().map(|&o| ParenTree::leaf(o)).collect();
        src_items.push(ParenTree::node(
            ParenTree::leaf(tuple[i - 1]),
            ParenTree::leaf(tuple[i]),
        ));
        src_items.extend(tuple[i + 1..].iter().map(|&o| ParenTree::leaf(o)));
        let pre = f
            .coherence_scalar(
                &full_src,
                &ParenTree::func(ParenTree::left_comb_of(src_items)),
            )
            .expect("validated functor");
        let mut tgt_items: Vec<ParenTree> = tuple[..i - 1]
            .iter()
            .map(|&o| ParenTree::func(ParenTree::leaf(o)))
            .collect();
        tgt_items.push(ParenTree::func(ParenTree::node(
            ParenTree::leaf(tuple[i - 1]),
            ParenTree::leaf(tuple[i]),
        )));
        tgt_items.extend(
            tuple[i + 1..]
                .iter()
                .map(|&o| ParenTree::func(ParenTree::leaf(o))),
        );
        let post = f
            .coherence_scalar(&ParenTree::right_comb_of(tgt_items), &full_tgt)
            .expect("validated functor");
        let mut coeff = &pre * &post;
        if i % 2 == 1 {
            coeff = -&coeff;
        }
        terms.push((col, coeff));
    }
    // Whiskered term c(a0..a_{n-1}) (x) F(an), sign (-1)^{n+1}.
    {
        let pre = f
            .coherence_scalar(
                &full_src,
                &ParenTree::node(
                    ParenTree::func(ParenTree::left_comb(&tuple[..n])),
                    ParenTree::func(ParenTree::leaf(tuple[n])),
                ),
            )
            .expect("validated functor");
        let post = f
            .coherence_scalar(
                &ParenTree::node(rc_images(&tuple[..n]), ParenTree::func(ParenTree::leaf(tuple[n]))),
                &full_tgt,
            )
            .expect("validated functor");
        let mut coeff = &pre * &post;
        if (n + 1) % 2 == 1 {
            coeff = -&coeff;
        }
        terms.push((tuple[..n].to_vec(), coeff));
    }
    terms
}

/// Basis tuples of degree `n`, restricted to unit-free tuples when `proper`.
fn basis_tuples(f: &FunctorPresentation, degree: usize, proper: bool) -> Vec<Vec<ObjId>> {
    let src = f.source();
    let unit = src.unit();
    (0..pow(src.size(), degree))
        .map(|i| index_tuple(src.size(), i, degree))
        .filter(|t| !proper || !t.contains(&unit))
        .collect()
}

/// Matrix of the coboundary from degree `n` to `n + 1` in the tuple bases.
/// Columns range over the (proper) degree-n basis; rows over all
/// `(n+1)`-tuples, so improper leakage would be visible.
pub fn delta_matrix(
    f: &Arc<FunctorPresentation>,
    degree: usize,
    proper: bool,
) -> Result<MatrixK, DeformError> {
    if degree == 0 {
        return Err(DeformError::DegreeZero);
    }
    let src = f.source();
    let field = f.field();
    let cols = basis_tuples(f, degree, proper);
    let mut col_of = vec![usize::MAX; pow(src.size(), degree)];
    for (j, t) in cols.iter().enumerate() {
        col_of[t.iter().fold(0, |a, o| a * src.size() + o.0)] = j;
    }
    let rows = pow(src.size(), degree + 1);
    let row_entries = parallel::map_indices(rows, |r| {
        let tuple = index_tuple(src.size(), r, degree + 1);
        let mut entries: Vec<(usize, FieldElem)> = Vec::new();
        for (col_tuple, coeff) in delta_terms(f, &tuple) {
            let raw = col_tuple.iter().fold(0, |a, o| a * src.size() + o.0);
            let j = col_of[raw];
            if j != usize::MAX {
                entries.push((j, coeff));
            }
        }
        entries
    });
    let mut m = Matrix::zeros(rows, cols.len(), field);
    for (r, entries) in row_entries.into_iter().enumerate() {
        for (j, coeff) in entries {
            let v = m.at(r, j) + &coeff;
            m.set(r, j, v);
        }
    }
    Ok(m)
}

/// Kernel, previous-image, and cohomology dimensions at one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    pub cochain_dim: usize,
    pub kernel: usize,
    pub image_prev: usize,
    pub h_dim: usize,
}

/// `dim H^n(F)` via exact ranks. For `n = 1` the image of the (absent)
/// degree-0 coboundary is taken to be zero.
pub fn cohomology_dims(
    f: &Arc<FunctorPresentation>,
    degree: usize,
    proper: bool,
) -> Result<CohomologyDims, DeformError> {
    if degree == 0 {
        return Err(DeformError::DegreeZero);
    }
    let cochain_dim = basis_tuples(f, degree, proper).len();
    let d_n = delta_matrix(f, degree, proper)?;
    let kernel = cochain_dim - d_n.rank();
    let image_prev = if degree == 1 {
        0
    } else {
        delta_matrix(f, degree - 1, proper)?.rank()
    };
    Ok(CohomologyDims {
        cochain_dim,
        kernel,
        image_prev,
        h_dim: kernel - image_prev,
    })
}

/// Closure of the proper subcomplex under the products: checks that the
/// coboundaries, cup, and every insertion of two proper cochains are proper.
pub fn proper_closure_check(g: &Cochain, h: &Cochain) -> Result<bool, DeformError> {
    if !g.is_proper() || !h.is_proper() {
        return Ok(false);
    }
    if !g.delta().is_proper() || !h.delta().is_proper() {
        return Ok(false);
    }
    if !g.cup(h)?.is_proper() {
        return Ok(false);
    }
    for i in 0..g.degree() {
        if !g.brace_i(h, i)?.is_proper() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An n-th order deformation of the functor's coherence data:
/// `F' = F + F^(1) eps + ... + F^(n) eps^n` with degree-2 cochain terms.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationSeries {
    functor: Arc<FunctorPresentation>,
    terms: Vec<Cochain>,
    proper: bool,
}

/// Outcome of extending a deformation by one or more orders.
#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Extended(DeformationSeries),
    Obstructed(ObstructionClass),
}

/// A nonzero obstruction class, reported as a representative plus the
/// degree-3 rank data of the complex it lives in.
#[derive(Clone, Debug)]
pub struct ObstructionClass {
    pub at_order: usize,
    pub representative: Cochain,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub h3_dim: usize,
}

impl DeformationSeries {
    pub fn new(
        functor: Arc<FunctorPresentation>,
        terms: Vec<Cochain>,
        proper: bool,
    ) -> Result<DeformationSeries, DeformError> {
        for (k, t) in terms.iter().enumerate() {
            if t.degree() != 2 || !(Arc::ptr_eq(&t.functor, &functor) || t.functor == functor) {
                return Err(DeformError::BadSeriesTerm { term: k + 1 });
            }
            if proper && !t.is_proper() {
                return Err(DeformError::NotProper { term: k + 1 });
            }
        }
        Ok(DeformationSeries { functor, terms, proper })
    }

    pub fn zero(
        functor: Arc<FunctorPresentation>,
        order: usize,
        proper: bool,
    ) -> Result<DeformationSeries, DeformError> {
        let terms = (0..order)
            .map(|_| Cochain::zero(functor.clone(), 2))
            .collect::<Result<Vec<_>, _>>()?;
        DeformationSeries::new(functor, terms, proper)
    }

    pub fn functor(&self) -> &Arc<FunctorPresentation> {
        &self.functor
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn terms(&self) -> &[Cochain] {
        &self.terms
    }

    pub fn ring(&self) -> SeriesRing {
        SeriesRing::new(self.functor.field(), self.order())
    }

    /// The deformed coherence component at `(a, b)` as a truncated scalar.
    pub fn deformed_coherence(&self, a: ObjId, b: ObjId) -> TruncatedScalar {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(self.functor.coherence_at(a, b).clone());
        for t in &self.terms {
            coeffs.push(t.get(&[a, b]).expect("degree 2").clone());
        }
        TruncatedScalar::from_coeffs(coeffs).expect("uniform field")
    }

    /// Verifies the deformed functor hexagon as an identity of truncated
    /// scalars at every source triple.
    pub fn check(&self) -> Result<(), DeformError> {
        let f = &self.functor;
        let src = f.source();
        let tgt = f.target();
        let n = src.size();
        let order = self.order();
        let violations = parallel::filter_map_indices(n * n * n, |i| {
            let t = index_tuple(n, i, 3);
            let (a, b, c) = (t[0], t[1], t[2]);
            let alpha = TruncatedScalar::constant(src.assoc(a, b, c).clone(), order);
            let alpha_t = TruncatedScalar::constant(
                tgt.assoc(f.apply(a), f.apply(b), f.apply(c)).clone(),
                order,
            );
            let lhs = &(&alpha * &self.deformed_coherence(a, src.mul(b, c)))
                * &self.deformed_coherence(b, c);
            let rhs = &(&alpha_t * &self.deformed_coherence(src.mul(a, b), c))
                * &self.deformed_coherence(a, b);
            let residual = &rhs - &lhs;
            (!residual.is_zero()).then_some(((a, b, c), residual))
        });
        match violations.into_iter().next() {
            None => Ok(()),
            Some(((a, b, c), residual)) => Err(DeformError::HexagonFailure {
                witness: format!(
                    "({}, {}, {})",
                    src.name(a),
                    src.name(b),
                    src.name(c)
                ),
                residual,
            }),
        }
    }

    /// The obstruction to extending by one order:
    /// `sum_{i=1}^{n} <F^(i), F^(n-i+1)>`, a closed degree-3 cochain.
    pub fn obstruction(&self) -> Result<Cochain, DeformError> {
        self.check()?;
        let n = self.order();
        let mut acc = Cochain::zero(self.functor.clone(), 3)?;
        for i in 1..=n {
            acc = acc.add(&self.terms[i - 1].brace(&self.terms[n - i])?)?;
        }
        Ok(acc)
    }

    /// Extends order by order until `target_order`, solving
    /// `delta(F^(k+1)) = obstruction` exactly at each step; a failed solve
    /// reports the obstruction's cohomology class data instead.
    pub fn extend_to(&self, target_order: usize) -> Result<ExtendOutcome, DeformError> {
        let mut current = self.clone();
        current.check()?;
        while current.order() < target_order {
            let obs = current.obstruction()?;
            let d2 = delta_matrix(&self.functor, 2, self.proper)?;
            match d2.solve(obs.components())? {
                Solve::Solution(x) => {
                    let next = cochain_from_basis(&self.functor, 2, self.proper, &x)?;
                    current = DeformationSeries::new(
                        self.functor.clone(),
                        current
                            .terms
                            .iter()
                            .cloned()
                            .chain(std::iter::once(next))
                            .collect(),
                        self.proper,
                    )?;
                    debug_assert!(current.check().is_ok());
                }
                Solve::NoSolution { .. } => {
                    let d3 = delta_matrix(&self.functor, 3, self.proper)?;
                    let dim3 = basis_tuples(&self.functor, 3, self.proper).len();
                    let kernel_dim = dim3 - d3.rank();
                    let image_dim = d2.rank();
                    return Ok(ExtendOutcome::Obstructed(ObstructionClass {
                        at_order: current.order() + 1,
                        representative: obs,
                        kernel_dim,
                        image_dim,
                        h3_dim: kernel_dim - image_dim,
                    }));
                }
            }
        }
        Ok(ExtendOutcome::Extended(current))
    }

    /// For an order-1 deformation of a multiplication: whether the induced
    /// deformations of `Phi(-, I)` and `Phi(I, -)` are trivial, i.e. cobound.
    /// Returned as `(left, right)`.
    pub fn unit_triviality(&self) -> Result<(bool, bool), DeformError> {
        if self.order() != 1 {
            return Err(DeformError::WrongOrder(self.order(), 1));
        }
        let phi = &self.functor;
        let cat = phi.target().clone();
        let n = cat.size();
        if phi.source().size() != n * n {
            return Err(DeformError::NotMultiplication(format!(
                "source has {} objects, expected {}",
                phi.source().size(),
                n * n
            )));
        }
        // Validates the multiplication shape as a side effect.
        phi.braiding_from_mult().map_err(|e| match e {
            SkelError::FunctorShape(m) => DeformError::NotMultiplication(m),
            other => DeformError::Skel(other),
        })?;
        let e = cat.unit();
        let pair = |a: ObjId, b: ObjId| ObjId(a.0 * n + b.0);
        let mut flags = [false, false];
        for (slot, left) in [(0usize, true), (1usize, false)] {
            let at = |a: ObjId, b: ObjId| {
                if left {
                    (pair(e, a), pair(e, b))
                } else {
                    (pair(a, e), pair(b, e))
                }
            };
            // Induced endofunctor and the restricted first-order term.
            let coherence: Vec<FieldElem> = (0..n * n)
                .map(|i| {
                    let (a, b) = at(ObjId(i / n), ObjId(i % n));
                    phi.coherence_at(a, b).clone()
                })
                .collect();
            let unit_scalar = if left {
                phi.unit_scalar() * &cat.runit(e).inv()?
            } else {
                phi.unit_scalar() * &cat.lunit(e).inv()?
            };
            let endo = Arc::new(FunctorPresentation::new(
                cat.clone(),
                cat.clone(),
                (0..n).map(ObjId).collect(),
                coherence,
                unit_scalar,
            )?);
            let restricted: Vec<FieldElem> = (0..n * n)
                .map(|i| {
                    let (a, b) = at(ObjId(i / n), ObjId(i % n));
                    self.terms[0].get(&[a, b]).expect("degree 2").clone()
                })
                .collect();
            let d1 = delta_matrix(&endo, 1, false)?;
            flags[slot] = matches!(d1.solve(&restricted)?, Solve::Solution(_));
        }
        Ok((flags[0], flags[1]))
    }
}

/// Rebuilds a cochain from coordinates in the (proper) tuple basis.
pub fn cochain_from_basis(
    f: &Arc<FunctorPresentation>,
    degree: usize,
    proper: bool,
    coords: &[FieldElem],
) -> Result<Cochain, DeformError> {
    let basis = basis_tuples(f, degree, proper);
    if coords.len() != basis.len() {
        return Err(DeformError::BadTuple(coords.len(), basis.len()));
    }
    let mut c = Cochain::zero(f.clone(), degree)?;
    for (tuple, v) in basis.iter().zip(coords) {
        c.set(tuple, v.clone())?;
    }
    Ok(c)
}

/// Parses the sparse cochain file format: a `degree n` header, then one
/// `name name ... -> scalar` line per supported tuple.
pub fn parse_cochain(
    text: &str,
    functor: &Arc<FunctorPresentation>,
) -> Result<Cochain, DeformError> {
    let mut degree: Option<usize> = None;
    let mut entries: Vec<(Vec<ObjId>, FieldElem)> = Vec::new();
    let field = functor.field();
    let src = functor.source();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SkelError::Parse { line: ln + 1, msg };
        if let Some(d) = line.strip_prefix("degree") {
            degree = Some(
                d.trim()
                    .parse()
                    .map_err(|_| err("bad degree".into()))?,
            );
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let arrow = words
            .iter()
            .position(|w| *w == "->")
            .ok_or_else(|| err("expected `->`".into()))?;
        let tuple = words[..arrow]
            .iter()
            .map(|w| src.obj(w))
            .collect::<Result<Vec<_>, _>>()?;
        let value = FieldElem::parse(&words[arrow + 1..].join(" "), field)?;
        entries.push((tuple, value));
    }
    let degree = degree.ok_or(SkelError::Parse { line: 0, msg: "missing degree header".into() })?;
    let mut c = Cochain::zero(functor.clone(), degree)?;
    for (tuple, value) in entries {
        c.set(&tuple, value)?;
    }
    Ok(c)
}

/// Parses a deformation file: `order n`, then `term k` sections of sparse
/// degree-2 lines.
pub fn parse_deformation(
    text: &str,
    functor: &Arc<FunctorPresentation>,
    proper: bool,
) -> Result<DeformationSeries, DeformError> {
    let mut order: Option<usize> = None;
    let mut terms: Vec<Cochain> = Vec::new();
    let src = functor.source();
    let field = functor.field();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SkelError::Parse { line: ln + 1, msg };
        if let Some(d) = line.strip_prefix("order") {
            let n: usize = d.trim().parse().map_err(|_| err("bad order".into()))?;
            order = Some(n);
            continue;
        }
        if let Some(k) = line.strip_prefix("term") {
            let k: usize = k.trim().parse().map_err(|_| err("bad term index".into()))?;
            while terms.len() < k {
                terms.push(Cochain::zero(functor.clone(), 2)?);
            }
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let arrow = words
            .iter()
            .position(|w| *w == "->")
            .ok_or_else(|| err("expected `->`".into()))?;
        if arrow != 2 {
            return Err(err("expected a pair of objects".into()).into());
        }
        let a = src.obj(words[0])?;
        let b = src.obj(words[1])?;
        let value = FieldElem::parse(&words[arrow + 1..].join(" "), field)?;
        let term = terms
            .last_mut()
            .ok_or_else(|| err("component before any `term k` header".into()))?;
        term.set(&[a, b], value)?;
    }
    if let Some(n) = order {
        while terms.len() < n {
            terms.push(Cochain::zero(functor.clone(), 2)?);
        }
    }
    DeformationSeries::new(functor.clone(), terms, proper)
}

/// Writes a deformation in the same format `parse_deformation` reads.
pub fn format_deformation(d: &DeformationSeries) -> String {
    let src = d.functor.source();
    let mut out = format!("order {}\n", d.order());
    for (k, term) in d.terms().iter().enumerate() {
        out.push_str(&format!("term {}\n", k + 1));
        for (i, v) in term.components().iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let tuple = term.index_tuple(i);
            let names: Vec<&str> = tuple.iter().map(|&o| src.name(o)).collect();
            out.push_str(&format!("{} -> {}\n", names.join(" "), v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::skeletal::SkeletalPresentation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fe(n: i64, field: Field) -> FieldElem {
        FieldElem::from_int(n, field)
    }

    fn identity_functor(p: &SkeletalPresentation) -> Arc<FunctorPresentation> {
        Arc::new(FunctorPresentation::identity(p).unwrap())
    }

    fn z2(field: Field) -> Arc<FunctorPresentation> {
        identity_functor(&SkeletalPresentation::cyclic(2, field))
    }

    fn indicator_gg(f: &Arc<FunctorPresentation>) -> Cochain {
        let mut c = Cochain::zero(f.clone(), 2).unwrap();
        c.set(&[ObjId(1), ObjId(1)], FieldElem::one(f.field())).unwrap();
        c
    }

    pub(crate) fn random_cochain(
        f: &Arc<FunctorPresentation>,
        degree: usize,
        rng: &mut impl Rng,
    ) -> Cochain {
        let field = f.field();
        let len = pow(f.source().size(), degree);
        let comps = (0..len).map(|_| fe(rng.gen_range(-5..=5), field)).collect();
        Cochain::from_components(f.clone(), degree, comps).unwrap()
    }

    /// Test corpus: small cyclic presentations over several fields, with
    /// trivial and nontrivial coherence data.
    pub(crate) fn corpus() -> Vec<Arc<FunctorPresentation>> {
        let mut out = Vec::new();
        for field in [Field::Q, Field::Fp(2), Field::Fp(3)] {
            out.push(z2(field));
            out.push(identity_functor(&SkeletalPresentation::cyclic(3, field)));
        }
        // Nontrivial associator on Z/2 (collapses over F_2).
        for field in [Field::Q, Field::Fp(3)] {
            let mut p = SkeletalPresentation::cyclic(2, field);
            p.set_assoc(ObjId(1), ObjId(1), ObjId(1), fe(-1, field));
            out.push(identity_functor(&p));
        }
        // Nontrivial coherence: coboundary twist on Z/2 over Q.
        {
            let field = Field::Q;
            let p = SkeletalPresentation::cyclic(2, field);
            let phi = [fe(1, field), fe(2, field)];
            let coherence = (0..4)
                .map(|i| {
                    let (a, b) = (i / 2, i % 2);
                    let ab = p.mul(ObjId(a), ObjId(b));
                    &(&phi[a] * &phi[b]) * &phi[ab.0].inv().unwrap()
                })
                .collect();
            out.push(Arc::new(
                FunctorPresentation::new(
                    p.clone(),
                    p,
                    vec![ObjId(0), ObjId(1)],
                    coherence,
                    fe(1, field),
                )
                .unwrap(),
            ));
        }
        // Multiplication functors from sign braidings (source != target).
        for field in [Field::Q, Field::Fp(3)] {
            let mut p = SkeletalPresentation::cyclic(2, field);
            p.set_trivial_braiding();
            p.set_braid(ObjId(1), ObjId(1), fe(-1, field));
            out.push(Arc::new(FunctorPresentation::mult_functor(&p).unwrap()));
        }
        out
    }

    #[test]
    fn delta_of_indicator_is_zero_on_z2() {
        for field in [Field::Fp(2), Field::Q] {
            let f = z2(field);
            let c = indicator_gg(&f);
            assert!(c.delta().is_zero(), "field {field}");
        }
    }

    #[test]
    fn indicator_cobounds_over_q() {
        // c = delta(psi) with psi(e) = 0, psi(g) = 1/2.
        let f = z2(Field::Q);
        let mut psi = Cochain::zero(f.clone(), 1).unwrap();
        psi.set(&[ObjId(1)], FieldElem::from_ratio(1, 2, Field::Q).unwrap())
            .unwrap();
        assert_eq!(psi.delta(), indicator_gg(&f));
    }

    #[test]
    fn delta_squared_vanishes_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in corpus() {
            for degree in 1..=3 {
                for _ in 0..10 {
                    let c = random_cochain(&f, degree, &mut rng);
                    assert!(
                        c.delta().delta().is_zero(),
                        "delta^2 != 0 at degree {degree} over {}",
                        f.field()
                    );
                }
            }
        }
    }

    #[test]
    fn cup_examples() {
        let f = z2(Field::Q);
        let mut g = Cochain::zero(f.clone(), 1).unwrap();
        g.set(&[ObjId(1)], fe(2, Field::Q)).unwrap();
        let mut h = Cochain::zero(f.clone(), 1).unwrap();
        h.set(&[ObjId(1)], fe(3, Field::Q)).unwrap();
        let gh = g.cup(&h).unwrap();
        assert_eq!(gh.get(&[ObjId(1), ObjId(1)]).unwrap(), &fe(6, Field::Q));
        assert_eq!(gh.get(&[ObjId(1), ObjId(0)]).unwrap(), &fe(0, Field::Q));
        let zero = Cochain::zero(f.clone(), 1).unwrap();
        assert!(zero.cup(&h).unwrap().is_zero());
    }

    #[test]
    fn cup_satisfies_leibniz() {
        // delta(g u h) = delta(g) u h + (-1)^deg(g) g u delta(h)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in corpus() {
            for (dg, dh) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let g = random_cochain(&f, dg, &mut rng);
                let h = random_cochain(&f, dh, &mut rng);
                let lhs = g.cup(&h).unwrap().delta();
                let mut rhs = g.delta().cup(&h).unwrap();
                let second = g.cup(&h.delta()).unwrap();
                rhs = if dg % 2 == 0 {
                    rhs.add(&second).unwrap()
                } else {
                    rhs.sub(&second).unwrap()
                };
                assert_eq!(lhs, rhs, "Leibniz fails at ({dg},{dh}) over {}", f.field());
            }
        }
    }

    #[test]
    fn brace_examples() {
        let f = z2(Field::Q);
        let mut g = Cochain::zero(f.clone(), 1).unwrap();
        g.set(&[ObjId(1)], fe(2, Field::Q)).unwrap();
        let mut h = Cochain::zero(f.clone(), 1).unwrap();
        h.set(&[ObjId(1)], fe(3, Field::Q)).unwrap();
        // Degree-1 insertion: <g,h>^(0)(a) = h(a) g(a).
        let b0 = g.brace_i(&h, 0).unwrap();
        assert_eq!(b0.get(&[ObjId(1)]).unwrap(), &fe(6, Field::Q));
        assert_eq!(g.brace(&h).unwrap(), b0);
        let zero = Cochain::zero(f.clone(), 2).unwrap();
        assert!(g.brace(&zero).unwrap().is_zero());
        assert!(matches!(
            g.brace_i(&h, 1),
            Err(DeformError::BadInsertion { index: 1, degree: 1 })
        ));
    }

    #[test]
    fn pre_lie_two_case_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for f in corpus() {
            for _ in 0..6 {
                let (m, n, p) = (
                    rng.gen_range(1..=3),
                    rng.gen_range(1..=2),
                    rng.gen_range(1..=2),
                );
                let g = random_cochain(&f, m, &mut rng);
                let h = random_cochain(&f, n, &mut rng);
                let k = random_cochain(&f, p, &mut rng);
                for i in 0..m {
                    for j in 0..m + n - 1 {
                        let lhs = g.brace_i(&h, i).unwrap().brace_i(&k, j).unwrap();
                        if j < i {
                            let rhs = g
                                .brace_i(&k, j)
                                .unwrap()
                                .brace_i(&h, i + p - 1)
                                .unwrap();
                            assert_eq!(lhs, rhs, "case 1 at i={i} j={j}");
                        } else if j < i + n {
                            let rhs = g.brace_i(&h.brace_i(&k, j - i).unwrap(), i).unwrap();
                            assert_eq!(lhs, rhs, "case 2 at i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn first_order_deformations_are_cocycles() {
        // A degree-2 cochain passes the order-1 hexagon iff delta c = 0,
        // exhaustively on Z/2 over F_2.
        let f = z2(Field::Fp(2));
        for bits in 0..16u32 {
            let comps: Vec<FieldElem> = (0..4)
                .map(|i| fe(((bits >> i) & 1) as i64, Field::Fp(2)))
                .collect();
            let c = Cochain::from_components(f.clone(), 2, comps).unwrap();
            let series = DeformationSeries::new(f.clone(), vec![c.clone()], false).unwrap();
            assert_eq!(series.check().is_ok(), c.delta().is_zero());
        }
    }

    #[test]
    fn deformed_hexagon_respects_nontrivial_assoc() {
        // Same equivalence where the associator is a sign.
        let mut p = SkeletalPresentation::cyclic(2, Field::Q);
        p.set_assoc(ObjId(1), ObjId(1), ObjId(1), fe(-1, Field::Q));
        let f = identity_functor(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let c = random_cochain(&f, 2, &mut rng);
            let series = DeformationSeries::new(f.clone(), vec![c.clone()], false).unwrap();
            assert_eq!(series.check().is_ok(), c.delta().is_zero());
        }
    }

    #[test]
    fn obstruction_is_closed_and_matches_bracket() {
        let f = z2(Field::Fp(2));
        let c = indicator_gg(&f);
        let series = DeformationSeries::new(f.clone(), vec![c.clone()], false).unwrap();
        let obs = series.obstruction().unwrap();
        assert_eq!(obs, c.brace(&c).unwrap());
        assert!(obs.delta().is_zero());
    }

    #[test]
    fn zero_deformation_extends_to_zero() {
        let f = z2(Field::Q);
        let series = DeformationSeries::zero(f.clone(), 1, true).unwrap();
        match series.extend_to(4).unwrap() {
            ExtendOutcome::Extended(d) => {
                assert_eq!(d.order(), 4);
                assert!(d.terms().iter().all(Cochain::is_zero));
            }
            ExtendOutcome::Obstructed(_) => panic!("zero deformation obstructed"),
        }
    }

    #[test]
    fn h3_zero_first_orders_extend_over_q() {
        // On Z/2 over Q the complex is exact in degrees 2 and 3, so any
        // first-order deformation extends; verify by running the solver.
        let f = z2(Field::Q);
        assert_eq!(cohomology_dims(&f, 3, false).unwrap().h_dim, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let mut c = random_cochain(&f, 2, &mut rng);
            // Project to a cocycle by solving the first-order condition:
            // subtract nothing, just test only when it already is one.
            if !c.delta().is_zero() {
                // Make it a coboundary, which is always a cocycle.
                c = random_cochain(&f, 1, &mut rng).delta();
            }
            let series = DeformationSeries::new(f.clone(), vec![c], false).unwrap();
            match series.extend_to(4).unwrap() {
                ExtendOutcome::Extended(d) => d.check().unwrap(),
                ExtendOutcome::Obstructed(_) => panic!("extension blocked with H^3 = 0"),
            }
        }
    }

    #[test]
    fn cohomology_of_z2() {
        // Classical group cohomology of Z/2: dim H^n = 1 over F_2, 0 over Q.
        let f2 = z2(Field::Fp(2));
        assert_eq!(cohomology_dims(&f2, 2, false).unwrap().h_dim, 1);
        assert_eq!(cohomology_dims(&f2, 3, false).unwrap().h_dim, 1);
        let fq = z2(Field::Q);
        assert_eq!(cohomology_dims(&fq, 2, false).unwrap().h_dim, 0);
        assert_eq!(cohomology_dims(&fq, 3, false).unwrap().h_dim, 0);
        // Z/3 over F_3 in degree 2.
        let f3 = identity_functor(&SkeletalPresentation::cyclic(3, Field::Fp(3)));
        assert_eq!(cohomology_dims(&f3, 2, false).unwrap().h_dim, 1);
        // H^1 uses im(delta_0) = 0.
        assert_eq!(cohomology_dims(&f2, 1, false).unwrap().image_prev, 0);
    }

    #[test]
    fn properness_examples() {
        let f = z2(Field::Q);
        assert!(Cochain::zero(f.clone(), 2).unwrap().is_proper());
        assert!(indicator_gg(&f).is_proper());
        let mut c = Cochain::zero(f.clone(), 2).unwrap();
        c.set(&[ObjId(0), ObjId(1)], fe(1, Field::Q)).unwrap();
        assert!(!c.is_proper());
    }

    #[test]
    fn proper_closure_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for f in corpus() {
            let unit = f.source().unit();
            for _ in 0..5 {
                let mut g = random_cochain(&f, 2, &mut rng);
                let mut h = random_cochain(&f, 2, &mut rng);
                // Zero out unit-indexed components to make them proper.
                for c in [&mut g, &mut h] {
                    for i in 0..c.comps.len() {
                        if c.index_tuple(i).contains(&unit) {
                            c.comps[i] = FieldElem::zero(f.field());
                        }
                    }
                }
                assert!(proper_closure_check(&g, &h).unwrap());
            }
        }
    }

    #[test]
    fn unit_triviality_of_proper_and_supported_deformations() {
        let mut p = SkeletalPresentation::cyclic(2, Field::Q);
        p.set_trivial_braiding();
        p.set_braid(ObjId(1), ObjId(1), fe(-1, Field::Q));
        let phi = Arc::new(FunctorPresentation::mult_functor(&p).unwrap());
        // Proper deformation: both induced deformations restrict to zero.
        let pair = |a: usize, b: usize| ObjId(a * 2 + b);
        let mut proper_term = Cochain::zero(phi.clone(), 2).unwrap();
        proper_term
            .set(&[pair(1, 1), pair(1, 1)], fe(1, Field::Q))
            .unwrap();
        let d = DeformationSeries::new(phi.clone(), vec![proper_term], true).unwrap();
        assert_eq!(d.unit_triviality().unwrap(), (true, true));
        // Supported on ((g,e),(g,e)): restricts to the indicator of (g,g) on
        // the induced endofunctor, which cobounds over Q.
        let mut t = Cochain::zero(phi.clone(), 2).unwrap();
        t.set(&[pair(1, 0), pair(1, 0)], fe(1, Field::Q)).unwrap();
        let d = DeformationSeries::new(phi.clone(), vec![t], false).unwrap();
        let (left, right) = d.unit_triviality().unwrap();
        assert!(left, "left restriction is zero");
        assert!(right, "indicator(g,g) cobounds over Q");
        // Cross-check the solve by a small exhaustive search over psi.
        let cands = [-2i64, -1, 0, 1, 2];
        let mut found = false;
        let endo = z2(Field::Q);
        'outer: for pe in cands {
            for pg in cands {
                let mut psi = Cochain::zero(endo.clone(), 1).unwrap();
                psi.set(&[ObjId(0)], FieldElem::from_ratio(pe, 2, Field::Q).unwrap())
                    .unwrap();
                psi.set(&[ObjId(1)], FieldElem::from_ratio(pg, 2, Field::Q).unwrap())
                    .unwrap();
                if psi.delta() == indicator_gg(&endo) {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found);
        // The zero deformation is trivially trivial.
        let z = DeformationSeries::zero(phi, 1, false).unwrap();
        assert_eq!(z.unit_triviality().unwrap(), (true, true));
    }

    #[test]
    fn first_order_equivalence_is_a_coboundary_condition() {
        // Two order-1 deformations are equivalent (a semigroupal natural iso
        // reducing to the identity mod eps exists) iff their difference
        // cobounds; the trivializing 1-cochain is found by the exact solve
        // and cross-checked by enumerating all four 1-cochains.
        let f = z2(Field::Fp(2));
        let field = Field::Fp(2);
        let cocycles: Vec<Cochain> = (0..16u32)
            .map(|bits| {
                let comps = (0..4).map(|i| fe(((bits >> i) & 1) as i64, field)).collect();
                Cochain::from_components(f.clone(), 2, comps).unwrap()
            })
            .filter(|c| c.delta().is_zero())
            .collect();
        let d1 = delta_matrix(&f, 1, false).unwrap();
        let all_psi: Vec<Cochain> = (0..4u32)
            .map(|bits| {
                let mut psi = Cochain::zero(f.clone(), 1).unwrap();
                psi.set(&[ObjId(0)], fe((bits & 1) as i64, field)).unwrap();
                psi.set(&[ObjId(1)], fe(((bits >> 1) & 1) as i64, field)).unwrap();
                psi
            })
            .collect();
        for a in &cocycles {
            for b in &cocycles {
                let diff = a.sub(b).unwrap();
                let solver = matches!(
                    d1.solve(diff.components()).unwrap(),
                    crate::matrix::Solve::Solution(_)
                );
                let enumerated = all_psi.iter().any(|psi| psi.delta() == diff);
                assert_eq!(solver, enumerated);
            }
        }
    }

    #[test]
    fn cochain_file_round_trip() {
        let f = z2(Field::Q);
        let text = "degree 2\ng g -> 3/2\ne g -> -1\n";
        let c = parse_cochain(text, &f).unwrap();
        assert_eq!(
            c.get(&[ObjId(1), ObjId(1)]).unwrap(),
            &FieldElem::from_ratio(3, 2, Field::Q).unwrap()
        );
        assert_eq!(c.get(&[ObjId(0), ObjId(1)]).unwrap(), &fe(-1, Field::Q));
        assert_eq!(c.get(&[ObjId(0), ObjId(0)]).unwrap(), &fe(0, Field::Q));
        assert!(!c.is_proper());
    }

    #[test]
    fn deformation_file_round_trip() {
        let f = z2(Field::Q);
        let series =
            DeformationSeries::new(f.clone(), vec![indicator_gg(&f)], true).unwrap();
        let text = format_deformation(&series);
        let back = parse_deformation(&text, &f, true).unwrap();
        assert_eq!(series, back);
    }
}
