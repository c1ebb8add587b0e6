//! Finite skeletal presentations of K-linear (braided) monoidal categories
//! with one-dimensional hom spaces, functor presentations between them, and
//! the evaluation of coherence "padding" scalars between parenthesizations.
//!
//! The model: objects form a finite monoid, hom spaces are K on the diagonal
//! and 0 elsewhere, and all structure maps are nonzero scalars. Pentagon,
//! triangle, bigon and hexagon conditions become exact scalar identities
//! checked exhaustively at load.
//!
//! Coherence scalars between two parenthesization trees with the same leaf
//! tuple are computed by normalizing each tree to the fully right
//! parenthesized form and taking the quotient of the accumulated scalars;
//! coherence of the presentation makes the result independent of the chosen
//! normalization route.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElem, ScalarError};
use crate::parallel;

/// Index of an object in a presentation's object list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ObjId(pub usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkelError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("presentation is malformed: {0}")]
    Malformed(String),
    #[error("tensor table is not an associative monoid: {0}")]
    NotAMonoid(String),
    #[error("{law} fails at {count} tuples, first witness {witness}")]
    Coherence {
        law: &'static str,
        count: usize,
        witness: String,
    },
    #[error("structure scalar {0} must be nonzero")]
    ZeroScalar(String),
    #[error("braiding requires a commutative tensor monoid: {0}*{1} != {1}*{0}")]
    NoncommutativeBraiding(String, String),
    #[error("presentation has no braiding")]
    NoBraiding,
    #[error("coherence endpoints have different leaf tuples")]
    LeafMismatch,
    #[error("functor markers cannot nest")]
    NestedFunctor,
    #[error("functor marker in a plain category coherence")]
    UnexpectedFunctor,
    #[error("functor shape: {0}")]
    FunctorShape(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Finite pointed skeletal monoidal category data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkeletalPresentation {
    field: Field,
    names: Vec<String>,
    unit: ObjId,
    table: Vec<ObjId>,
    assoc: Vec<FieldElem>,
    braiding: Option<Vec<FieldElem>>,
    runit: Vec<FieldElem>,
    lunit: Vec<FieldElem>,
}

impl SkeletalPresentation {
    /// Presentation of the cyclic group Z/n with trivial coherence data.
    pub fn cyclic(n: usize, field: Field) -> SkeletalPresentation {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g{k}"),
            })
            .collect();
        let table = (0..n * n)
            .map(|i| ObjId((i / n + i % n) % n))
            .collect();
        SkeletalPresentation::from_monoid(field, names, 0, table)
    }

    /// Builds from an explicit multiplication table with trivial scalars.
    pub fn from_monoid(
        field: Field,
        names: Vec<String>,
        unit: usize,
        table: Vec<ObjId>,
    ) -> SkeletalPresentation {
        let n = names.len();
        assert_eq!(table.len(), n * n);
        let one = FieldElem::one(field);
        SkeletalPresentation {
            field,
            names,
            unit: ObjId(unit),
            table,
            assoc: vec![one.clone(); n * n * n],
            braiding: None,
            runit: vec![one.clone(); n],
            lunit: vec![one; n],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> ObjId {
        self.unit
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.size()).map(ObjId)
    }

    pub fn name(&self, o: ObjId) -> &str {
        &self.names[o.0]
    }

    pub fn obj(&self, name: &str) -> Result<ObjId, SkelError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(ObjId)
            .ok_or_else(|| SkelError::UnknownObject(name.to_string()))
    }

    pub fn mul(&self, a: ObjId, b: ObjId) -> ObjId {
        self.table[a.0 * self.size() + b.0]
    }

    pub fn mul_all(&self, objs: &[ObjId]) -> ObjId {
        objs.iter().fold(self.unit, |acc, &o| self.mul(acc, o))
    }

    fn idx3(&self, a: ObjId, b: ObjId, c: ObjId) -> usize {
        (a.0 * self.size() + b.0) * self.size() + c.0
    }

    pub fn assoc(&self, a: ObjId, b: ObjId, c: ObjId) -> &FieldElem {
        &self.assoc[self.idx3(a, b, c)]
    }

    pub fn set_assoc(&mut self, a: ObjId, b: ObjId, c: ObjId, v: FieldElem) {
        let i = self.idx3(a, b, c);
        self.assoc[i] = v;
    }

    pub fn has_braiding(&self) -> bool {
        self.braiding.is_some()
    }

    pub fn braid(&self, a: ObjId, b: ObjId) -> Result<&FieldElem, SkelError> {
        self.braiding
            .as_ref()
            .map(|t| &t[a.0 * self.size() + b.0])
            .ok_or(SkelError::NoBraiding)
    }

    /// Installs a braiding table (defaulting to 1 where not set afterwards).
    pub fn set_trivial_braiding(&mut self) {
        self.braiding = Some(vec![FieldElem::one(self.field); self.size() * self.size()]);
    }

    pub fn set_braid(&mut self, a: ObjId, b: ObjId, v: FieldElem) {
        let n = self.size();
        self.braiding
            .get_or_insert_with(|| vec![FieldElem::one(self.field); n * n])[a.0 * n + b.0] = v;
    }

    pub fn set_braiding_table(&mut self, table: Vec<FieldElem>) {
        assert_eq!(table.len(), self.size() * self.size());
        self.braiding = Some(table);
    }

    pub fn braiding_table(&self) -> Option<&[FieldElem]> {
        self.braiding.as_deref()
    }

    pub fn runit(&self, a: ObjId) -> &FieldElem {
        &self.runit[a.0]
    }

    pub fn lunit(&self, a: ObjId) -> &FieldElem {
        &self.lunit[a.0]
    }

    pub fn set_units(&mut self, a: ObjId, runit: FieldElem, lunit: FieldElem) {
        self.runit[a.0] = runit;
        self.lunit[a.0] = lunit;
    }

    fn tuple(&self, mut i: usize, len: usize) -> Vec<ObjId> {
        let mut t = vec![ObjId(0); len];
        for k in (0..len).rev() {
            t[k] = ObjId(i % self.size());
            i /= self.size();
        }
        t
    }

    fn names_of(&self, t: &[ObjId]) -> String {
        let parts: Vec<&str> = t.iter().map(|&o| self.name(o)).collect();
        format!("({})", parts.join(", "))
    }

    /// Pentagon violations: `a(ab,c,d) a(a,b,cd) = a(a,b,c) a(a,bc,d) a(b,c,d)`.
    pub fn check_pentagon(&self) -> Vec<[ObjId; 4]> {
        let n = self.size();
        parallel::filter_map_indices(n * n * n * n, |i| {
            let t = self.tuple(i, 4);
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            let lhs = self.assoc(self.mul(a, b), c, d) * self.assoc(a, b, self.mul(c, d));
            let rhs = &(self.assoc(a, b, c) * self.assoc(a, self.mul(b, c), d))
                * self.assoc(b, c, d);
            (lhs != rhs).then_some([a, b, c, d])
        })
    }

    /// Triangle violations: `l(b) a(a,e,b) = r(a)`.
    pub fn check_triangle(&self) -> Vec<[ObjId; 2]> {
        let n = self.size();
        parallel::filter_map_indices(n * n, |i| {
            let (a, b) = (ObjId(i / n), ObjId(i % n));
            let lhs = self.lunit(b) * self.assoc(a, self.unit, b);
            (lhs != *self.runit(a)).then_some([a, b])
        })
    }

    /// Both hexagons for the braiding, as exact scalar identities.
    pub fn check_hexagons(&self) -> Result<Vec<[ObjId; 3]>, SkelError> {
        if self.braiding.is_none() {
            return Err(SkelError::NoBraiding);
        }
        let n = self.size();
        Ok(parallel::filter_map_indices(n * n * n, |i| {
            let t = self.tuple(i, 3);
            let (a, b, c) = (t[0], t[1], t[2]);
            let bc = self.mul(b, c);
            let s = |x, y| self.braid(x, y).expect("braiding present");
            // a(b,c,a) s(a,bc) a(a,b,c) = s(a,c) a(b,a,c) s(a,b)
            let h1_lhs = &(self.assoc(b, c, a) * s(a, bc)) * self.assoc(a, b, c);
            let h1_rhs = &(s(a, c) * self.assoc(b, a, c)) * s(a, b);
            // inverse-braiding hexagon:
            // a(b,c,a) s(bc,a)^{-1} a(a,b,c) = s(c,a)^{-1} a(b,a,c) s(b,a)^{-1}
            let h2_ok = match (s(bc, a).inv(), s(c, a).inv(), s(b, a).inv()) {
                (Ok(i1), Ok(i2), Ok(i3)) => {
                    let lhs = &(self.assoc(b, c, a) * &i1) * self.assoc(a, b, c);
                    let rhs = &(&i2 * self.assoc(b, a, c)) * &i3;
                    lhs == rhs
                }
                _ => false,
            };
            (h1_lhs != h1_rhs || !h2_ok).then_some([a, b, c])
        }))
    }

    /// Full validation: monoid axioms, nonzero scalars, pentagon, triangle,
    /// bigon, and (when present) both hexagons over a commutative monoid.
    pub fn validate(&self) -> Result<(), SkelError> {
        let n = self.size();
        if n == 0 {
            return Err(SkelError::Malformed("no objects".into()));
        }
        if self.table.len() != n * n || self.assoc.len() != n * n * n {
            return Err(SkelError::Malformed("table sizes".into()));
        }
        for &o in &self.table {
            if o.0 >= n {
                return Err(SkelError::Malformed("table entry out of range".into()));
            }
        }
        for a in self.objects() {
            if self.mul(self.unit, a) != a || self.mul(a, self.unit) != a {
                return Err(SkelError::NotAMonoid(format!(
                    "`{}` is not a two-sided unit at `{}`",
                    self.name(self.unit),
                    self.name(a)
                )));
            }
            for b in self.objects() {
                for c in self.objects() {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(SkelError::NotAMonoid(format!(
                            "associativity fails at {}",
                            self.names_of(&[a, b, c])
                        )));
                    }
                }
            }
        }
        for (what, vals) in [("assoc", &self.assoc), ("runit", &self.runit), ("lunit", &self.lunit)] {
            if let Some(v) = vals.iter().find(|v| v.is_zero()) {
                let _ = v;
                return Err(SkelError::ZeroScalar(what.to_string()));
            }
        }
        let mismatch = self
            .assoc
            .iter()
            .chain(&self.runit)
            .chain(&self.lunit)
            .chain(self.braiding.iter().flatten())
            .find(|v| v.field() != self.field);
        if let Some(v) = mismatch {
            return Err(ScalarError::FieldMismatch(self.field, v.field()).into());
        }
        let pentagon = self.check_pentagon();
        if let Some(first) = pentagon.first() {
            return Err(SkelError::Coherence {
                law: "pentagon",
                count: pentagon.len(),
                witness: self.names_of(first),
            });
        }
        let triangle = self.check_triangle();
        if let Some(first) = triangle.first() {
            return Err(SkelError::Coherence {
                law: "triangle",
                count: triangle.len(),
                witness: self.names_of(first),
            });
        }
        if self.runit(self.unit) != self.lunit(self.unit) {
            return Err(SkelError::Coherence {
                law: "bigon",
                count: 1,
                witness: self.names_of(&[self.unit]),
            });
        }
        if let Some(braiding) = &self.braiding {
            if let Some(v) = braiding.iter().find(|v| v.is_zero()) {
                let _ = v;
                return Err(SkelError::ZeroScalar("braiding".into()));
            }
            for a in self.objects() {
                for b in self.objects() {
                    if self.mul(a, b) != self.mul(b, a) {
                        return Err(SkelError::NoncommutativeBraiding(
                            self.name(a).to_string(),
                            self.name(b).to_string(),
                        ));
                    }
                }
            }
            let hex = self.check_hexagons()?;
            if let Some(first) = hex.first() {
                return Err(SkelError::Coherence {
                    law: "hexagon",
                    count: hex.len(),
                    witness: self.names_of(first),
                });
            }
        }
        Ok(())
    }

    /// The product presentation `C x D`: objects are pairs, data componentwise.
    pub fn product(&self, other: &SkeletalPresentation) -> SkeletalPresentation {
        assert_eq!(self.field, other.field);
        let (n, m) = (self.size(), other.size());
        let pair = |a: ObjId, b: ObjId| ObjId(a.0 * m + b.0);
        let names = (0..n * m)
            .map(|i| format!("({},{})", self.names[i / m], other.names[i % m]))
            .collect();
        let mut table = Vec::with_capacity(n * m * n * m);
        for i in 0..n * m {
            let (a1, a2) = (ObjId(i / m), ObjId(i % m));
            for j in 0..n * m {
                let (b1, b2) = (ObjId(j / m), ObjId(j % m));
                table.push(pair(self.mul(a1, b1), other.mul(a2, b2)));
            }
        }
        let nm = n * m;
        let mut assoc = Vec::with_capacity(nm * nm * nm);
        for i in 0..nm {
            for j in 0..nm {
                for k in 0..nm {
                    assoc.push(
                        self.assoc(ObjId(i / m), ObjId(j / m), ObjId(k / m))
                            * other.assoc(ObjId(i % m), ObjId(j % m), ObjId(k % m)),
                    );
                }
            }
        }
        let braiding = match (&self.braiding, &other.braiding) {
            (Some(b1), Some(b2)) => Some(
                (0..nm * nm)
                    .map(|x| {
                        let (i, j) = (x / nm, x % nm);
                        &b1[(i / m) * n + j / m] * &b2[(i % m) * m + j % m]
                    })
                    .collect(),
            ),
            _ => None,
        };
        let runit = (0..nm)
            .map(|i| self.runit(ObjId(i / m)) * other.runit(ObjId(i % m)))
            .collect();
        let lunit = (0..nm)
            .map(|i| self.lunit(ObjId(i / m)) * other.lunit(ObjId(i % m)))
            .collect();
        SkeletalPresentation {
            field: self.field,
            names,
            unit: pair(self.unit, other.unit),
            table,
            assoc,
            braiding,
            runit,
            lunit,
        }
    }

    /// Whether the monoidal data (everything but names and braiding) agrees.
    fn same_monoidal_data(&self, other: &SkeletalPresentation) -> bool {
        self.field == other.field
            && self.unit == other.unit
            && self.table == other.table
            && self.assoc == other.assoc
            && self.runit == other.runit
            && self.lunit == other.lunit
    }

    fn norm_cat(&self, t: &ParenTree) -> Result<(Vec<ObjId>, FieldElem), SkelError> {
        match t {
            ParenTree::Leaf(x) => Ok((vec![*x], FieldElem::one(self.field))),
            ParenTree::Func(_) => Err(SkelError::UnexpectedFunctor),
            ParenTree::Node(l, r) => {
                let (ll, sl) = self.norm_cat(l)?;
                let (lr, sr) = self.norm_cat(r)?;
                let m = self.merge_scalar(&ll, &lr);
                let s = &(&sl * &sr) * &m;
                let mut leaves = ll;
                leaves.extend(lr);
                Ok((leaves, s))
            }
        }
    }

    /// Scalar of the coherence `rc(a) (x) rc(b) -> rc(a ++ b)` between right
    /// combs, an accumulation of associator components.
    fn merge_scalar(&self, a: &[ObjId], b: &[ObjId]) -> FieldElem {
        let prod_b = self.mul_all(b);
        let mut acc = FieldElem::one(self.field);
        for i in 0..a.len().saturating_sub(1) {
            let rest = self.mul_all(&a[i + 1..]);
            acc = &acc * self.assoc(a[i], rest, prod_b);
        }
        acc
    }

    /// The scalar of the unique coherence isomorphism `src -> dst` between two
    /// parenthesizations of the same object tuple.
    pub fn coherence_scalar(
        &self,
        src: &ParenTree,
        dst: &ParenTree,
    ) -> Result<FieldElem, SkelError> {
        let (l1, s1) = self.norm_cat(src)?;
        let (l2, s2) = self.norm_cat(dst)?;
        if l1 != l2 {
            return Err(SkelError::LeafMismatch);
        }
        Ok(&s1 * &s2.inv()?)
    }

    /// Backtracking enumeration of all braidings with values drawn from
    /// `candidates` (over `F_p` pass every nonzero residue for an exhaustive
    /// sweep). Partial assignments are pruned against every hexagon instance
    /// they already determine.
    pub fn enumerate_braidings(&self, candidates: &[FieldElem]) -> Vec<Vec<FieldElem>> {
        let n = self.size();
        let commutative = self
            .objects()
            .all(|a| self.objects().all(|b| self.mul(a, b) == self.mul(b, a)));
        if !commutative {
            return Vec::new();
        }
        let slot = |a: ObjId, b: ObjId| a.0 * n + b.0;
        // Hexagon instances, each listing the slots it reads.
        let mut instances: Vec<(ObjId, ObjId, ObjId, Vec<usize>)> = Vec::new();
        for a in self.objects() {
            for b in self.objects() {
                for c in self.objects() {
                    let slots = vec![
                        slot(a, self.mul(b, c)),
                        slot(a, c),
                        slot(a, b),
                        slot(self.mul(b, c), a),
                        slot(c, a),
                        slot(b, a),
                    ];
                    instances.push((a, b, c, slots));
                }
            }
        }
        let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); n * n];
        for (i, (_, _, _, slots)) in instances.iter().enumerate() {
            let last = *slots.iter().max().expect("nonempty");
            by_last[last].push(i);
        }
        let mut results = Vec::new();
        let mut partial: Vec<Option<FieldElem>> = vec![None; n * n];
        self.braiding_search(0, candidates, &instances, &by_last, &mut partial, &mut results);
        results
    }

    fn hexagons_hold_at(
        &self,
        (a, b, c): (ObjId, ObjId, ObjId),
        partial: &[Option<FieldElem>],
    ) -> bool {
        let n = self.size();
        let s = |x: ObjId, y: ObjId| partial[x.0 * n + y.0].as_ref().expect("assigned");
        let bc = self.mul(b, c);
        let h1_lhs = &(self.assoc(b, c, a) * s(a, bc)) * self.assoc(a, b, c);
        let h1_rhs = &(s(a, c) * self.assoc(b, a, c)) * s(a, b);
        if h1_lhs != h1_rhs {
            return false;
        }
        let (i1, i2, i3) = (
            s(bc, a).inv().expect("nonzero candidate"),
            s(c, a).inv().expect("nonzero candidate"),
            s(b, a).inv().expect("nonzero candidate"),
        );
        let h2_lhs = &(self.assoc(b, c, a) * &i1) * self.assoc(a, b, c);
        let h2_rhs = &(&i2 * self.assoc(b, a, c)) * &i3;
        h2_lhs == h2_rhs
    }

    #[allow(clippy::too_many_arguments)]
    fn braiding_search(
        &self,
        k: usize,
        candidates: &[FieldElem],
        instances: &[(ObjId, ObjId, ObjId, Vec<usize>)],
        by_last: &[Vec<usize>],
        partial: &mut Vec<Option<FieldElem>>,
        results: &mut Vec<Vec<FieldElem>>,
    ) {
        let n = self.size();
        if k == n * n {
            results.push(partial.iter().map(|v| v.clone().expect("complete")).collect());
            return;
        }
        for cand in candidates {
            if cand.is_zero() {
                continue;
            }
            partial[k] = Some(cand.clone());
            let ok = by_last[k].iter().all(|&i| {
                let (a, b, c, _) = &instances[i];
                self.hexagons_hold_at((*a, *b, *c), partial)
            });
            if ok {
                self.braiding_search(k + 1, candidates, instances, by_last, partial, results);
            }
        }
        partial[k] = None;
    }

    /// Parses the presentation file format.
    pub fn parse(text: &str) -> Result<SkeletalPresentation, SkelError> {
        let mut field = None;
        let mut names: Vec<String> = Vec::new();
        let mut unit_name: Option<String> = None;
        let mut table_rows: Vec<Vec<String>> = Vec::new();
        let mut assoc_entries = Vec::new();
        let mut braid_entries = Vec::new();
        let mut braided = false;
        let mut unit_entries = Vec::new();
        let mut in_table = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let err = |msg: &str| SkelError::Parse { line: ln + 1, msg: msg.to_string() };
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().expect("nonempty");
            if in_table && table_rows.len() < names.len() {
                table_rows.push(line.split_whitespace().map(String::from).collect());
                continue;
            }
            in_table = false;
            match head {
                "field" => {
                    field = Some(Field::parse(words.next().ok_or_else(|| err("missing field"))?)?)
                }
                "objects" => names = words.map(String::from).collect(),
                "unit" => unit_name = Some(words.next().ok_or_else(|| err("missing unit"))?.into()),
                "table" => in_table = true,
                "braided" => braided = true,
                "assoc" | "braiding" | "runit" | "lunit" => {
                    let rest: Vec<&str> = words.collect();
                    let arrow = rest
                        .iter()
                        .position(|w| *w == "->")
                        .ok_or_else(|| err("expected `->`"))?;
                    let args: Vec<String> = rest[..arrow].iter().map(|s| s.to_string()).collect();
                    let value = rest[arrow + 1..].join(" ");
                    let expect = match head {
                        "assoc" => 3,
                        "braiding" => 2,
                        _ => 1,
                    };
                    if args.len() != expect {
                        return Err(err(&format!("expected {expect} object names")));
                    }
                    match head {
                        "assoc" => assoc_entries.push((args, value)),
                        "braiding" => {
                            braided = true;
                            braid_entries.push((args, value));
                        }
                        "runit" => unit_entries.push((true, args, value)),
                        _ => unit_entries.push((false, args, value)),
                    }
                }
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        let field = field.ok_or(SkelError::Parse { line: 0, msg: "missing field header".into() })?;
        if names.is_empty() {
            return Err(SkelError::Parse { line: 0, msg: "missing objects".into() });
        }
        if table_rows.len() != names.len() {
            return Err(SkelError::Parse { line: 0, msg: "tensor table has wrong row count".into() });
        }
        let find = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .map(ObjId)
                .ok_or_else(|| SkelError::UnknownObject(name.to_string()))
        };
        let unit = match unit_name {
            Some(u) => find(&u)?.0,
            None => 0,
        };
        let mut table = Vec::with_capacity(names.len() * names.len());
        for row in &table_rows {
            if row.len() != names.len() {
                return Err(SkelError::Parse { line: 0, msg: "tensor table has wrong column count".into() });
            }
            for cell in row {
                table.push(find(cell)?);
            }
        }
        let mut p = SkeletalPresentation::from_monoid(field, names, unit, table);
        for (args, value) in assoc_entries {
            let (a, b, c) = (p.obj(&args[0])?, p.obj(&args[1])?, p.obj(&args[2])?);
            p.set_assoc(a, b, c, FieldElem::parse(&value, field)?);
        }
        if braided {
            p.set_trivial_braiding();
            for (args, value) in braid_entries {
                let (a, b) = (p.obj(&args[0])?, p.obj(&args[1])?);
                p.set_braid(a, b, FieldElem::parse(&value, field)?);
            }
        }
        for (is_r, args, value) in unit_entries {
            let a = p.obj(&args[0])?;
            let v = FieldElem::parse(&value, field)?;
            if is_r {
                p.runit[a.0] = v;
            } else {
                p.lunit[a.0] = v;
            }
        }
        Ok(p)
    }
}

/// Binary parenthesization tree over a presentation's objects, with optional
/// functor-application markers.
///
/// Inside a `Func` subtree the nodes read as the source category's tensor;
/// outside, as the target's. A bare `Leaf` outside any marker stands for the
/// functor image of that object, so the normal form of every tree is the
/// fully right parenthesized product of images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParenTree {
    Leaf(ObjId),
    Node(Box<ParenTree>, Box<ParenTree>),
    Func(Box<ParenTree>),
}

impl ParenTree {
    pub fn leaf(o: ObjId) -> ParenTree {
        ParenTree::Leaf(o)
    }

    pub fn node(l: ParenTree, r: ParenTree) -> ParenTree {
        ParenTree::Node(Box::new(l), Box::new(r))
    }

    pub fn func(t: ParenTree) -> ParenTree {
        ParenTree::Func(Box::new(t))
    }

    /// `((a0 (x) a1) (x) a2) ...` — the iterated product written `^n (x)`.
    pub fn left_comb(objs: &[ObjId]) -> ParenTree {
        Self::left_comb_of(objs.iter().map(|&o| ParenTree::Leaf(o)).collect())
    }

    /// `a0 (x) (a1 (x) (a2 ...))` — the iterated product written `(x)^n`.
    pub fn right_comb(objs: &[ObjId]) -> ParenTree {
        Self::right_comb_of(objs.iter().map(|&o| ParenTree::Leaf(o)).collect())
    }

    pub fn left_comb_of(trees: Vec<ParenTree>) -> ParenTree {
        let mut it = trees.into_iter();
        let first = it.next().expect("nonempty tuple");
        it.fold(first, ParenTree::node)
    }

    pub fn right_comb_of(trees: Vec<ParenTree>) -> ParenTree {
        let mut it = trees.into_iter().rev();
        let last = it.next().expect("nonempty tuple");
        it.fold(last, |acc, t| ParenTree::node(t, acc))
    }

    pub fn leaves(&self) -> Vec<ObjId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ObjId>) {
        match self {
            ParenTree::Leaf(o) => out.push(*o),
            ParenTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
            ParenTree::Func(t) => t.collect_leaves(out),
        }
    }
}

/// A monoidal functor presentation: strict on objects (a monoid morphism),
/// with scalar coherence components.
///
/// `coherence[(a, b)]` is the scalar of `F(a (x) b) -> F(a) (x) F(b)` and
/// `unit_scalar` the scalar of `F(I) -> I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FunctorPresentation {
    source: SkeletalPresentation,
    target: SkeletalPresentation,
    object_map: Vec<ObjId>,
    coherence: Vec<FieldElem>,
    unit_scalar: FieldElem,
}

impl FunctorPresentation {
    pub fn new(
        source: SkeletalPresentation,
        target: SkeletalPresentation,
        object_map: Vec<ObjId>,
        coherence: Vec<FieldElem>,
        unit_scalar: FieldElem,
    ) -> Result<FunctorPresentation, SkelError> {
        let f = FunctorPresentation { source, target, object_map, coherence, unit_scalar };
        f.validate()?;
        Ok(f)
    }

    /// The identity functor on a validated presentation.
    pub fn identity(cat: &SkeletalPresentation) -> Result<FunctorPresentation, SkelError> {
        let one = FieldElem::one(cat.field());
        FunctorPresentation::new(
            cat.clone(),
            cat.clone(),
            (0..cat.size()).map(ObjId).collect(),
            vec![one.clone(); cat.size() * cat.size()],
            one,
        )
    }

    pub fn source(&self) -> &SkeletalPresentation {
        &self.source
    }

    pub fn target(&self) -> &SkeletalPresentation {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn apply(&self, a: ObjId) -> ObjId {
        self.object_map[a.0]
    }

    pub fn coherence_at(&self, a: ObjId, b: ObjId) -> &FieldElem {
        &self.coherence[a.0 * self.source.size() + b.0]
    }

    pub fn unit_scalar(&self) -> &FieldElem {
        &self.unit_scalar
    }

    pub fn validate(&self) -> Result<(), SkelError> {
        self.source.validate()?;
        self.target.validate()?;
        let n = self.source.size();
        if self.source.field() != self.target.field() {
            return Err(ScalarError::FieldMismatch(self.source.field(), self.target.field()).into());
        }
        if self.object_map.len() != n || self.coherence.len() != n * n {
            return Err(SkelError::Malformed("functor data sizes".into()));
        }
        if self.apply(self.source.unit()) != self.target.unit() {
            return Err(SkelError::FunctorShape("object map does not preserve the unit".into()));
        }
        for a in self.source.objects() {
            for b in self.source.objects() {
                if self.apply(self.source.mul(a, b))
                    != self.target.mul(self.apply(a), self.apply(b))
                {
                    return Err(SkelError::FunctorShape(format!(
                        "object map is not a monoid morphism at {}",
                        self.source.names_of(&[a, b])
                    )));
                }
            }
        }
        if self.unit_scalar.is_zero() {
            return Err(SkelError::ZeroScalar("unit_scalar".into()));
        }
        if self.coherence.iter().any(|v| v.is_zero()) {
            return Err(SkelError::ZeroScalar("coherence".into()));
        }
        let hex = self.check_functor_hexagon();
        if let Some(first) = hex.first() {
            return Err(SkelError::Coherence {
                law: "functor hexagon",
                count: hex.len(),
                witness: self.source.names_of(first),
            });
        }
        let squares = self.check_unit_squares();
        if let Some((side, a)) = squares.first() {
            return Err(SkelError::Coherence {
                law: "functor unit square",
                count: squares.len(),
                witness: format!("{} at {}", side, self.source.name(*a)),
            });
        }
        Ok(())
    }

    /// Hexagon of the coherence data:
    /// `a(a,b,c) F(a,bc) F(b,c) = a'(Fa,Fb,Fc) F(ab,c) F(a,b)`.
    pub fn check_functor_hexagon(&self) -> Vec<[ObjId; 3]> {
        let n = self.source.size();
        parallel::filter_map_indices(n * n * n, |i| {
            let t = self.source.tuple(i, 3);
            let (a, b, c) = (t[0], t[1], t[2]);
            let lhs = &(self.source.assoc(a, b, c)
                * self.coherence_at(a, self.source.mul(b, c)))
                * self.coherence_at(b, c);
            let rhs = &(self.target.assoc(self.apply(a), self.apply(b), self.apply(c))
                * self.coherence_at(self.source.mul(a, b), c))
                * self.coherence_at(a, b);
            (lhs != rhs).then_some([a, b, c])
        })
    }

    /// Both unit squares: `l(a) = l'(Fa) F0 F(e,a)` and `r(a) = r'(Fa) F0 F(a,e)`.
    pub fn check_unit_squares(&self) -> Vec<(&'static str, ObjId)> {
        let mut out = Vec::new();
        let e = self.source.unit();
        for a in self.source.objects() {
            let left = &(self.target.lunit(self.apply(a)) * &self.unit_scalar)
                * self.coherence_at(e, a);
            if &left != self.source.lunit(a) {
                out.push(("left", a));
            }
            let right = &(self.target.runit(self.apply(a)) * &self.unit_scalar)
                * self.coherence_at(a, e);
            if &right != self.source.runit(a) {
                out.push(("right", a));
            }
        }
        out
    }

    fn norm_fun(&self, t: &ParenTree) -> Result<(Vec<ObjId>, FieldElem), SkelError> {
        match t {
            ParenTree::Leaf(x) => Ok((vec![*x], FieldElem::one(self.field()))),
            ParenTree::Func(inner) => self.norm_apply(inner),
            ParenTree::Node(l, r) => {
                let (ll, sl) = self.norm_fun(l)?;
                let (lr, sr) = self.norm_fun(r)?;
                let s = self.merged(&ll, &lr, &sl, &sr);
                let mut leaves = ll;
                leaves.extend(lr);
                Ok((leaves, s))
            }
        }
    }

    /// Normalizes `F(tree)` to the right comb of images, peeling one
    /// coherence component per internal node.
    fn norm_apply(&self, t: &ParenTree) -> Result<(Vec<ObjId>, FieldElem), SkelError> {
        match t {
            ParenTree::Leaf(x) => Ok((vec![*x], FieldElem::one(self.field()))),
            ParenTree::Func(_) => Err(SkelError::NestedFunctor),
            ParenTree::Node(l, r) => {
                let (ll, sl) = self.norm_apply(l)?;
                let (lr, sr) = self.norm_apply(r)?;
                let f_step = self.coherence_at(self.source.mul_all(&ll), self.source.mul_all(&lr));
                let s = &self.merged(&ll, &lr, &sl, &sr) * f_step;
                let mut leaves = ll;
                leaves.extend(lr);
                Ok((leaves, s))
            }
        }
    }

    fn merged(&self, ll: &[ObjId], lr: &[ObjId], sl: &FieldElem, sr: &FieldElem) -> FieldElem {
        let fl: Vec<ObjId> = ll.iter().map(|&o| self.apply(o)).collect();
        let fr: Vec<ObjId> = lr.iter().map(|&o| self.apply(o)).collect();
        &(sl * sr) * &self.target.merge_scalar(&fl, &fr)
    }

    /// Coherence scalar between decorated trees; components of the functor
    /// coherence and both categories' associators may all contribute.
    pub fn coherence_scalar(
        &self,
        src: &ParenTree,
        dst: &ParenTree,
    ) -> Result<FieldElem, SkelError> {
        let (l1, s1) = self.norm_fun(src)?;
        let (l2, s2) = self.norm_fun(dst)?;
        if l1 != l2 {
            return Err(SkelError::LeafMismatch);
        }
        Ok(&s1 * &s2.inv()?)
    }

    /// The multiplication `(x): C x C -> C` induced by a braiding, with
    /// coherence component carrying `s(a', b)` padded by associators.
    pub fn mult_functor(cat: &SkeletalPresentation) -> Result<FunctorPresentation, SkelError> {
        cat.validate()?;
        if !cat.has_braiding() {
            return Err(SkelError::NoBraiding);
        }
        let n = cat.size();
        let src = cat.product(cat);
        let object_map: Vec<ObjId> = (0..n * n)
            .map(|i| cat.mul(ObjId(i / n), ObjId(i % n)))
            .collect();
        let mut coherence = Vec::with_capacity(n * n * n * n);
        for x in 0..n * n {
            let (a, a2) = (ObjId(x / n), ObjId(x % n));
            for y in 0..n * n {
                let (b, b2) = (ObjId(y / n), ObjId(y % n));
                // Displayed map [(1 (x) s) (x) 1]: ((a a')(b b')) -> ((a b)(a' b')).
                let src_tree = ParenTree::node(
                    ParenTree::node(ParenTree::leaf(a), ParenTree::leaf(a2)),
                    ParenTree::node(ParenTree::leaf(b), ParenTree::leaf(b2)),
                );
                let mid1 = ParenTree::node(
                    ParenTree::node(
                        ParenTree::leaf(a),
                        ParenTree::node(ParenTree::leaf(a2), ParenTree::leaf(b)),
                    ),
                    ParenTree::leaf(b2),
                );
                let mid2 = ParenTree::node(
                    ParenTree::node(
                        ParenTree::leaf(a),
                        ParenTree::node(ParenTree::leaf(b), ParenTree::leaf(a2)),
                    ),
                    ParenTree::leaf(b2),
                );
                let tgt_tree = ParenTree::node(
                    ParenTree::node(ParenTree::leaf(a), ParenTree::leaf(b)),
                    ParenTree::node(ParenTree::leaf(a2), ParenTree::leaf(b2)),
                );
                let displayed = &(&cat.coherence_scalar(&src_tree, &mid1)? * cat.braid(a2, b)?)
                    * &cat.coherence_scalar(&mid2, &tgt_tree)?;
                // Stored in the F(- (x) -) -> F(-) (x) F(-) direction.
                coherence.push(displayed.inv()?);
            }
        }
        let unit_scalar = cat.runit(cat.unit()).clone();
        FunctorPresentation::new(src, cat.clone(), object_map, coherence, unit_scalar)
    }

    /// Recovers the braiding from a multiplication-shaped functor by scalar
    /// evaluation of the unit-insertion composite.
    pub fn braiding_from_mult(&self) -> Result<Vec<FieldElem>, SkelError> {
        let cat = &self.target;
        let n = cat.size();
        if self.source.size() != n * n {
            return Err(SkelError::FunctorShape(format!(
                "source has {} objects, expected {}",
                self.source.size(),
                n * n
            )));
        }
        if !self.source.same_monoidal_data(&cat.product(cat)) {
            return Err(SkelError::FunctorShape(
                "source is not the product presentation of the target".into(),
            ));
        }
        let pair = |a: ObjId, b: ObjId| ObjId(a.0 * n + b.0);
        for a in cat.objects() {
            for b in cat.objects() {
                if self.apply(pair(a, b)) != cat.mul(a, b) {
                    return Err(SkelError::FunctorShape(
                        "object map is not the tensor product".into(),
                    ));
                }
            }
        }
        let e = cat.unit();
        let mut table = Vec::with_capacity(n * n);
        for a in cat.objects() {
            for b in cat.objects() {
                // l^{-1} (x) r^{-1}, then through the multiplication coherence
                // at ((e,a),(b,e)), unit maps, back through ((b,e),(e,a)),
                // then r (x) l.
                let s1 = &cat.lunit(a).inv()? * &cat.runit(b).inv()?;
                let s2 = self.coherence_at(pair(e, a), pair(b, e)).inv()?;
                let s3 = cat.lunit(b) * cat.runit(a);
                let s4 = &cat.runit(b).inv()? * &cat.lunit(a).inv()?;
                let s5 = self.coherence_at(pair(b, e), pair(e, a)).clone();
                let s6 = cat.runit(b) * cat.lunit(a);
                table.push(&(&(&(&s1 * &s2) * &s3) * &s4) * &(&s5 * &s6));
            }
        }
        Ok(table)
    }

    /// Parses the functor file format against given source and target.
    pub fn parse(
        text: &str,
        source: SkeletalPresentation,
        target: SkeletalPresentation,
    ) -> Result<FunctorPresentation, SkelError> {
        let field = source.field();
        let n = source.size();
        let mut object_map: Vec<Option<ObjId>> = vec![None; n];
        let mut coherence = vec![FieldElem::one(field); n * n];
        let mut unit_scalar = FieldElem::one(field);
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let err = |msg: &str| SkelError::Parse { line: ln + 1, msg: msg.to_string() };
            if line.is_empty() || line == "functor" {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let arrow = words
                .iter()
                .position(|w| *w == "->")
                .ok_or_else(|| err("expected `->`"))?;
            let value = words[arrow + 1..].join(" ");
            match words[0] {
                "map" if arrow == 2 => {
                    let a = source.obj(words[1])?;
                    object_map[a.0] = Some(target.obj(&value)?);
                }
                "coherence" if arrow == 3 => {
                    let a = source.obj(words[1])?;
                    let b = source.obj(words[2])?;
                    coherence[a.0 * n + b.0] = FieldElem::parse(&value, field)?;
                }
                "unit" if arrow == 1 => unit_scalar = FieldElem::parse(&value, field)?,
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        let object_map = object_map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| SkelError::FunctorShape(format!(
                "object `{}` has no image",
                source.name(ObjId(i))
            ))))
            .collect::<Result<Vec<_>, _>>()?;
        FunctorPresentation::new(source, target, object_map, coherence, unit_scalar)
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
