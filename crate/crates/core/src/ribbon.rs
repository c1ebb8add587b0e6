//! Matrix-valued tortile structure data at a single object X over `R_n`:
//! braiding, twist, and both duality pairs, with exhaustive exact axiom
//! checks, reduction maps, and the Kauffman-bracket builtin family.
//!
//! Link evaluation needs exactly this data; both duality sides are stored
//! explicitly and the checker arbitrates their mutual compatibility instead
//! of deriving one side from convention-sensitive formulas.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElem, ScalarError};
use crate::matrix::{LinalgError, Matrix, MatrixR};
use crate::series::{SeriesRing, TruncatedScalar};

#[derive(Debug, Error)]
pub enum RibbonError {
    #[error("matrix {name} has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    Shape {
        name: &'static str,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("structure matrices use different ring contexts")]
    Ctx,
    #[error("{name} is not invertible: {source}")]
    NotInvertible {
        name: &'static str,
        source: LinalgError,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Names of the individual axiom checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    YangBaxter,
    ZigzagRight1,
    ZigzagRight2,
    ZigzagLeft1,
    ZigzagLeft2,
    TwistNaturality,
    TwistCurl,
    TwistSquare,
    DualTwist,
    InfinitesimalBraiding,
    InfinitesimalTwist,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::YangBaxter => "yang-baxter",
            Axiom::ZigzagRight1 => "zigzag-right-1",
            Axiom::ZigzagRight2 => "zigzag-right-2",
            Axiom::ZigzagLeft1 => "zigzag-left-1",
            Axiom::ZigzagLeft2 => "zigzag-left-2",
            Axiom::TwistNaturality => "twist-naturality",
            Axiom::TwistCurl => "twist-curl",
            Axiom::TwistSquare => "twist-square",
            Axiom::DualTwist => "dual-twist",
            Axiom::InfinitesimalBraiding => "infinitesimal-braiding",
            Axiom::InfinitesimalTwist => "infinitesimal-twist",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub pass: bool,
    /// First differing entry position when the check fails.
    pub counterexample: Option<(usize, usize)>,
}

/// Result of `check_axioms`: one entry per axiom, with witnesses.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Tortile structure data at one object X of dimension `dim` (its dual has
/// the same dimension), over `R_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TortileObjectData {
    dim: usize,
    ring: SeriesRing,
    c_plus: MatrixR,
    theta: MatrixR,
    ev_r: MatrixR,
    coev_r: MatrixR,
    ev_l: MatrixR,
    coev_l: MatrixR,
    // Derived at construction; existence is a precondition for evaluation.
    c_minus: MatrixR,
    theta_inv: MatrixR,
}

impl TortileObjectData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dim: usize,
        c_plus: MatrixR,
        theta: MatrixR,
        ev_r: MatrixR,
        coev_r: MatrixR,
        ev_l: MatrixR,
        coev_l: MatrixR,
    ) -> Result<TortileObjectData, RibbonError> {
        let d2 = dim * dim;
        let shapes: [(&'static str, &MatrixR, usize, usize); 6] = [
            ("c_plus", &c_plus, d2, d2),
            ("theta", &theta, dim, dim),
            ("ev_r", &ev_r, 1, d2),
            ("coev_r", &coev_r, d2, 1),
            ("ev_l", &ev_l, 1, d2),
            ("coev_l", &coev_l, d2, 1),
        ];
        for (name, m, rows, cols) in shapes {
            if m.rows() != rows || m.cols() != cols {
                return Err(RibbonError::Shape {
                    name,
                    rows,
                    cols,
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                });
            }
        }
        let ring = c_plus.ctx();
        if [&theta, &ev_r, &coev_r, &ev_l, &coev_l]
            .iter()
            .any(|m| m.ctx() != ring)
        {
            return Err(RibbonError::Ctx);
        }
        let c_minus = c_plus
            .invert()
            .map_err(|source| RibbonError::NotInvertible { name: "c_plus", source })?;
        let theta_inv = theta
            .invert()
            .map_err(|source| RibbonError::NotInvertible { name: "theta", source })?;
        Ok(TortileObjectData {
            dim,
            ring,
            c_plus,
            theta,
            ev_r,
            coev_r,
            ev_l,
            coev_l,
            c_minus,
            theta_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> SeriesRing {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.order
    }

    pub fn c_plus(&self) -> &MatrixR {
        &self.c_plus
    }

    pub fn c_minus(&self) -> &MatrixR {
        &self.c_minus
    }

    pub fn theta(&self) -> &MatrixR {
        &self.theta
    }

    pub fn theta_inv(&self) -> &MatrixR {
        &self.theta_inv
    }

    pub fn ev_r(&self) -> &MatrixR {
        &self.ev_r
    }

    pub fn coev_r(&self) -> &MatrixR {
        &self.coev_r
    }

    pub fn ev_l(&self) -> &MatrixR {
        &self.ev_l
    }

    pub fn coev_l(&self) -> &MatrixR {
        &self.coev_l
    }

    /// `c - c^{-1}`, the singular-crossing matrix.
    pub fn braiding_difference(&self) -> MatrixR {
        self.c_plus.sub(&self.c_minus).expect("same shape")
    }

    /// `theta - theta^{-1}`, the singular-twist matrix.
    pub fn twist_difference(&self) -> MatrixR {
        self.theta.sub(&self.theta_inv).expect("same shape")
    }

    /// Both structure differences vanish mod eps, the exact hypotheses behind
    /// the type bound. Data failing this still evaluates, but the bound
    /// guarantee is withheld.
    pub fn is_infinitesimally_symmetric(&self) -> bool {
        self.braiding_difference().coeff_matrix(0).is_zero()
            && self.twist_difference().coeff_matrix(0).is_zero()
    }

    fn id(&self, n: usize) -> MatrixR {
        Matrix::identity(n, self.ring)
    }

    fn check(axiom: Axiom, lhs: &MatrixR, rhs: &MatrixR) -> AxiomCheck {
        let mut counterexample = None;
        'outer: for r in 0..lhs.rows() {
            for c in 0..lhs.cols() {
                if lhs.at(r, c) != rhs.at(r, c) {
                    counterexample = Some((r, c));
                    break 'outer;
                }
            }
        }
        AxiomCheck { axiom, pass: counterexample.is_none(), counterexample }
    }

    /// Exact verification of every structural axiom; violations are reported
    /// as data, never as errors.
    pub fn check_axioms(&self) -> AxiomReport {
        let d = self.dim;
        let idd = self.id(d);
        let mut checks = Vec::new();

        // Yang-Baxter on X^3.
        let c1 = self.c_plus.kron(&idd).expect("ctx");
        let c2 = idd.kron(&self.c_plus).expect("ctx");
        let lhs = c1.mul(&c2).and_then(|m| m.mul(&c1)).expect("shapes");
        let rhs = c2.mul(&c1).and_then(|m| m.mul(&c2)).expect("shapes");
        checks.push(Self::check(Axiom::YangBaxter, &lhs, &rhs));

        // Right duality zigzags.
        let z1 = self
            .ev_r
            .kron(&idd)
            .and_then(|a| idd.kron(&self.coev_r).and_then(|b| a.mul(&b)))
            .expect("shapes");
        checks.push(Self::check(Axiom::ZigzagRight1, &z1, &idd));
        let z2 = idd
            .kron(&self.ev_r)
            .and_then(|a| self.coev_r.kron(&idd).and_then(|b| a.mul(&b)))
            .expect("shapes");
        checks.push(Self::check(Axiom::ZigzagRight2, &z2, &idd));

        // Left duality zigzags.
        let l1 = idd
            .kron(&self.ev_l)
            .and_then(|a| self.coev_l.kron(&idd).and_then(|b| a.mul(&b)))
            .expect("shapes");
        checks.push(Self::check(Axiom::ZigzagLeft1, &l1, &idd));
        let l2 = self
            .ev_l
            .kron(&idd)
            .and_then(|a| idd.kron(&self.coev_l).and_then(|b| a.mul(&b)))
            .expect("shapes");
        checks.push(Self::check(Axiom::ZigzagLeft2, &l2, &idd));

        // theta_{X (x) X} defined through the double braiding.
        let theta2 = self
            .c_plus
            .mul(&self.c_plus)
            .and_then(|m| m.mul(&self.theta.kron(&self.theta).expect("ctx")))
            .expect("shapes");
        // Naturality of the twist at the braiding.
        let nat_l = theta2.mul(&self.c_plus).expect("shapes");
        let nat_r = self.c_plus.mul(&theta2).expect("shapes");
        checks.push(Self::check(Axiom::TwistNaturality, &nat_l, &nat_r));

        // Positive curl on a single strand evaluates to the twist.
        let curl = self.positive_curl(&self.c_plus, &self.ev_r, &self.coev_l, d);
        checks.push(Self::check(Axiom::TwistCurl, &curl, &self.theta));

        // Full twist on X (x) X via the induced duality equals theta2.
        let curl2 = self.double_strand_curl();
        checks.push(Self::check(Axiom::TwistSquare, &curl2, &theta2));

        // Dual twist: conjugating theta through either duality pair agrees.
        let idd_ = &idd;
        let mid = idd_
            .kron(&self.theta)
            .and_then(|m| m.kron(idd_))
            .expect("ctx");
        let dual_r = idd_
            .kron(&self.ev_r)
            .and_then(|a| a.mul(&mid))
            .and_then(|a| a.mul(&self.coev_r.kron(idd_).expect("ctx")))
            .expect("shapes");
        let dual_l = self
            .ev_l
            .kron(idd_)
            .and_then(|a| a.mul(&mid))
            .and_then(|a| a.mul(&idd_.kron(&self.coev_l).expect("ctx")))
            .expect("shapes");
        checks.push(Self::check(Axiom::DualTwist, &dual_r, &dual_l));

        // Infinitesimal symmetry mod eps.
        let zero_d2 = Matrix::zeros(d * d, d * d, self.ring.field);
        checks.push(Self::check_k(
            Axiom::InfinitesimalBraiding,
            &self.braiding_difference().coeff_matrix(0),
            &zero_d2,
        ));
        let zero_d = Matrix::zeros(d, d, self.ring.field);
        checks.push(Self::check_k(
            Axiom::InfinitesimalTwist,
            &self.twist_difference().coeff_matrix(0),
            &zero_d,
        ));

        AxiomReport { checks }
    }

    fn check_k(
        axiom: Axiom,
        lhs: &Matrix<FieldElem>,
        rhs: &Matrix<FieldElem>,
    ) -> AxiomCheck {
        let mut counterexample = None;
        'outer: for r in 0..lhs.rows() {
            for c in 0..lhs.cols() {
                if lhs.at(r, c) != rhs.at(r, c) {
                    counterexample = Some((r, c));
                    break 'outer;
                }
            }
        }
        AxiomCheck { axiom, pass: counterexample.is_none(), counterexample }
    }

    /// `(1 (x) ev_r) (braid (x) 1) (1 (x) coev_l)` at an object of dimension
    /// `n`: the positive Reidemeister-I kink.
    fn positive_curl(&self, braid: &MatrixR, ev: &MatrixR, coev: &MatrixR, n: usize) -> MatrixR {
        let idn = self.id(n);
        idn.kron(ev)
            .and_then(|a| a.mul(&braid.kron(&idn).expect("ctx")))
            .and_then(|a| a.mul(&idn.kron(coev).expect("ctx")))
            .expect("shapes")
    }

    /// The same kink at Y = X (x) X, with braiding, evaluation, and
    /// coevaluation all induced from the single-object data.
    fn double_strand_curl(&self) -> MatrixR {
        let d = self.dim;
        let idd = self.id(d);
        // c_{X^2, X} = (c (x) 1)(1 (x) c); c_Y = (1 (x) c_{X^2,X})(c_{X^2,X} (x) 1).
        let c_x2_x = self
            .c_plus
            .kron(&idd)
            .and_then(|a| idd.kron(&self.c_plus).and_then(|b| a.mul(&b)))
            .expect("shapes");
        let c_y = idd
            .kron(&c_x2_x)
            .and_then(|a| c_x2_x.kron(&idd).and_then(|b| a.mul(&b)))
            .expect("shapes");
        // ev_r at Y: ev_r (1 (x) ev_r (x) 1); coev_l at Y: (1 (x) coev_l (x) 1) coev_l.
        let ev_y = self
            .ev_r
            .mul(
                &idd.kron(&self.ev_r)
                    .and_then(|m| m.kron(&idd))
                    .expect("ctx"),
            )
            .expect("shapes");
        let coev_y = idd
            .kron(&self.coev_l)
            .and_then(|m| m.kron(&idd))
            .and_then(|m| m.mul(&self.coev_l))
            .expect("shapes");
        self.positive_curl(&c_y, &ev_y, &coev_y, d * d)
    }

    /// Entrywise reduction mod `<eps^{k+1}>`; every axiom holding before
    /// reduction holds after.
    pub fn reduce(&self, k: usize) -> Result<TortileObjectData, RibbonError> {
        TortileObjectData::new(
            self.dim,
            self.c_plus.reduce_order(k)?,
            self.theta.reduce_order(k)?,
            self.ev_r.reduce_order(k)?,
            self.coev_r.reduce_order(k)?,
            self.ev_l.reduce_order(k)?,
            self.coev_l.reduce_order(k)?,
        )
    }

    /// The Kauffman-bracket data at `A = exp(eps)`: a 2-dimensional object
    /// with `c = A Id + A^{-1} U` for the rank-one loop projector `U`,
    /// `theta = -A^3 Id`, and duality from the pairing `{0, A; -A^{-1}, 0}`.
    pub fn kauffman(order: usize) -> Result<TortileObjectData, RibbonError> {
        let field = Field::Q;
        let ring = SeriesRing::new(field, order);
        let a = TruncatedScalar::truncated_exp(&FieldElem::one(field), order)?;
        let a_inv = TruncatedScalar::truncated_exp(&FieldElem::from_int(-1, field), order)?;
        let zero = TruncatedScalar::zero(ring);
        // Pairing m = [[0, A], [-A^{-1}, 0]] and its inverse n = [[0, -A], [A^{-1}, 0]].
        let m = [
            [zero.clone(), a.clone()],
            [a_inv.neg(), zero.clone()],
        ];
        let n = [
            [zero.clone(), a.neg()],
            [a_inv.clone(), zero.clone()],
        ];
        let flat = |t: &[[TruncatedScalar; 2]; 2]| -> Vec<TruncatedScalar> {
            t.iter().flatten().cloned().collect()
        };
        let ev_r = Matrix::from_entries(1, 4, flat(&m))?;
        let coev_r = Matrix::from_entries(4, 1, flat(&n))?;
        let ev_l = Matrix::from_entries(1, 4, flat(&m))?;
        let coev_l = Matrix::from_entries(4, 1, flat(&n))?;
        // U[(k,l),(i,j)] = n[k][l] m[i][j]; c = A Id + A^{-1} U.
        let mut c_plus: MatrixR = Matrix::identity(4, ring).scale(&a);
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let u = &n[k][l] * &m[i][j];
                        let v = c_plus.at(k * 2 + l, i * 2 + j) + &(&a_inv * &u);
                        c_plus.set(k * 2 + l, i * 2 + j, v);
                    }
                }
            }
        }
        let theta = Matrix::identity(2, ring)
            .scale(&a.pow(3)?)
            .map(|e| e.neg());
        TortileObjectData::new(2, c_plus, theta, ev_r, coev_r, ev_l, coev_l)
    }

    /// Symmetric vector-space data at dimension `d`: the flip braiding,
    /// identity twist, and the standard pairings.
    pub fn symmetric(d: usize, ring: SeriesRing) -> Result<TortileObjectData, RibbonError> {
        let one = TruncatedScalar::one(ring);
        let mut c: MatrixR = Matrix::zeros(d * d, d * d, ring);
        for i in 0..d {
            for j in 0..d {
                c.set(j * d + i, i * d + j, one.clone());
            }
        }
        let mut pair: MatrixR = Matrix::zeros(1, d * d, ring);
        for i in 0..d {
            pair.set(0, i * d + i, one.clone());
        }
        let copair = pair.transpose();
        TortileObjectData::new(
            d,
            c,
            Matrix::identity(d, ring),
            pair.clone(),
            copair.clone(),
            pair,
            copair,
        )
    }

    /// Parses the data file format: `field`, `order`, `dim` headers then six
    /// labeled matrices in row-major truncated-scalar literals.
    pub fn parse(text: &str) -> Result<TortileObjectData, RibbonError> {
        let mut field: Option<Field> = None;
        let mut order: Option<usize> = None;
        let mut dim: Option<usize> = None;
        let mut mats: Vec<(String, usize, usize, Vec<TruncatedScalar>)> = Vec::new();
        let mut pending: Option<(String, usize, usize)> = None;
        let mut entries: Vec<TruncatedScalar> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| RibbonError::Parse { line: ln + 1, msg: msg.to_string() };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "field" => field = Some(Field::parse(words.get(1).ok_or_else(|| err("missing field"))?)?),
                "order" => {
                    order = Some(words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| err("bad order"))?)
                }
                "dim" => {
                    dim = Some(words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| err("bad dim"))?)
                }
                "matrix" => {
                    if let Some((name, rows, cols)) = pending.take() {
                        mats.push((name, rows, cols, std::mem::take(&mut entries)));
                    }
                    let name = words.get(1).ok_or_else(|| err("missing matrix name"))?.to_string();
                    let rows = words.get(2).and_then(|w| w.parse().ok()).ok_or_else(|| err("bad rows"))?;
                    let cols = words.get(3).and_then(|w| w.parse().ok()).ok_or_else(|| err("bad cols"))?;
                    pending = Some((name, rows, cols));
                }
                _ => {
                    let f = field.ok_or_else(|| err("entries before field header"))?;
                    let n = order.ok_or_else(|| err("entries before order header"))?;
                    for tok in split_scalar_tokens(line) {
                        entries.push(TruncatedScalar::parse(&tok, f, Some(n))?);
                    }
                }
            }
        }
        if let Some((name, rows, cols)) = pending.take() {
            mats.push((name, rows, cols, entries));
        }
        let dim = dim.ok_or(RibbonError::Parse { line: 0, msg: "missing dim header".into() })?;
        let find = |name: &str| -> Result<MatrixR, RibbonError> {
            let (_, rows, cols, data) = mats
                .iter()
                .find(|(n, ..)| n == name)
                .cloned()
                .ok_or(RibbonError::Parse { line: 0, msg: format!("missing matrix {name}") })?;
            Ok(Matrix::from_entries(rows, cols, data)?)
        };
        TortileObjectData::new(
            dim,
            find("c_plus")?,
            find("theta")?,
            find("ev_r")?,
            find("coev_r")?,
            find("ev_l")?,
            find("coev_l")?,
        )
    }

    /// Writes the same format `parse` reads.
    pub fn format(&self) -> String {
        let mut out = format!("field {}\norder {}\ndim {}\n", self.ring.field, self.ring.order, self.dim);
        for (name, m) in [
            ("c_plus", &self.c_plus),
            ("theta", &self.theta),
            ("ev_r", &self.ev_r),
            ("coev_r", &self.coev_r),
            ("ev_l", &self.ev_l),
            ("coev_l", &self.coev_l),
        ] {
            out.push_str(&format!("matrix {} {} {}\n", name, m.rows(), m.cols()));
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Splits a line into scalar literals, keeping bracketed coefficient lists
/// (which contain spaces and commas) intact.
fn split_scalar_tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
                if depth == 0 {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_data_passes_all_axioms() {
        for d in [1, 2, 3] {
            let data =
                TortileObjectData::symmetric(d, SeriesRing::new(Field::Q, 1)).unwrap();
            let report = data.check_axioms();
            assert!(report.all_pass(), "dim {d}: {:?}", report.failures().collect::<Vec<_>>());
            assert!(data.is_infinitesimally_symmetric());
        }
    }

    #[test]
    fn kauffman_passes_all_axioms() {
        for order in [0, 1, 2, 4] {
            let data = TortileObjectData::kauffman(order).unwrap();
            let report = data.check_axioms();
            assert!(
                report.all_pass(),
                "order {order}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
            assert!(data.is_infinitesimally_symmetric());
        }
    }

    #[test]
    fn kauffman_order_zero_braiding_is_an_involution() {
        let data = TortileObjectData::kauffman(0).unwrap();
        let sq = data.c_plus().mul(data.c_plus()).unwrap();
        assert_eq!(sq, Matrix::identity(4, data.ring()));
    }

    #[test]
    fn kauffman_twist_is_minus_a_cubed() {
        let data = TortileObjectData::kauffman(2).unwrap();
        // -A^3 = -exp(3 eps) = [-1, -3, -9/2].
        let expect = TruncatedScalar::truncated_exp(&FieldElem::from_int(3, Field::Q), 2)
            .unwrap()
            .neg();
        assert_eq!(data.theta().at(0, 0), &expect);
        assert_eq!(data.theta().at(0, 1), &TruncatedScalar::zero(data.ring()));
    }

    #[test]
    fn perturbed_flip_fails_yang_baxter_with_witness() {
        // At ring order 1 the eps^2 cross terms truncate away and a single
        // eps-perturbation still satisfies the braid relation; order 2 sees
        // the failure.
        let ring = SeriesRing::new(Field::Q, 2);
        let data = TortileObjectData::symmetric(2, ring).unwrap();
        let mut c = data.c_plus().clone();
        let eps = TruncatedScalar::from_coeffs(vec![
            FieldElem::zero(Field::Q),
            FieldElem::one(Field::Q),
            FieldElem::zero(Field::Q),
        ])
        .unwrap();
        let v = c.at(0, 1) + &eps;
        c.set(0, 1, v);
        let bad = TortileObjectData::new(
            2,
            c,
            data.theta().clone(),
            data.ev_r().clone(),
            data.coev_r().clone(),
            data.ev_l().clone(),
            data.coev_l().clone(),
        )
        .unwrap();
        let report = bad.check_axioms();
        let ybe = report
            .checks
            .iter()
            .find(|c| c.axiom == Axiom::YangBaxter)
            .unwrap();
        assert!(!ybe.pass);
        assert!(ybe.counterexample.is_some());
    }

    #[test]
    fn reduction_commutes_with_construction() {
        let four = TortileObjectData::kauffman(4).unwrap();
        let two = TortileObjectData::kauffman(2).unwrap();
        assert_eq!(four.reduce(2).unwrap(), two);
        assert_eq!(four.reduce(4).unwrap(), four);
    }

    #[test]
    fn reduction_preserves_every_axiom() {
        // Property run over the validated data corpus.
        let mut corpus = vec![
            TortileObjectData::kauffman(4).unwrap(),
            TortileObjectData::symmetric(2, SeriesRing::new(Field::Q, 3)).unwrap(),
            TortileObjectData::symmetric(3, SeriesRing::new(Field::Fp(5), 2)).unwrap(),
        ];
        for data in corpus.drain(..) {
            assert!(data.check_axioms().all_pass());
            for k in 0..=data.order() {
                assert!(
                    data.reduce(k).unwrap().check_axioms().all_pass(),
                    "reduction to order {k} broke an axiom"
                );
            }
        }
    }

    #[test]
    fn data_file_round_trip() {
        let data = TortileObjectData::kauffman(2).unwrap();
        let text = data.format();
        let back = TortileObjectData::parse(&text).unwrap();
        assert_eq!(data, back);
    }

    #[test]
    fn singular_matrices_vanish_mod_eps() {
        let data = TortileObjectData::kauffman(3).unwrap();
        assert!(data.braiding_difference().coeff_matrix(0).is_zero());
        assert!(data.twist_difference().coeff_matrix(0).is_zero());
        // And are nonzero at order eps.
        assert!(!data.twist_difference().coeff_matrix(1).is_zero());
    }
}
