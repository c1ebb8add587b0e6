//! Shared oracles for the acceptance suite.
//!
//! Everything here recomputes expected values by an independent route:
//! a separately coded elimination for ranks, the bar resolution built
//! straight from a group table, and a combinatorial skein recursion for
//! bracket values. None of it calls the production code paths it checks.

use tortile::series::{SeriesRing, TruncatedScalar};
use tortile::tangles::BraidWord;
use tortile::{Field, FieldElem};

/// Rank by plain cross-multiplication elimination (no pivot normalization,
/// no inverses), deliberately different from the library's reduced echelon.
pub fn rank_oracle(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> FieldElem) -> usize {
    let mut m: Vec<Vec<FieldElem>> = (0..rows)
        .map(|r| (0..cols).map(|c| entry(r, c)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let scaled = &m[r][c] * &pivot;
                let correction = &m[rank][c] * &factor;
                m[r][c] = &scaled - &correction;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The bar-resolution coboundary of a finite group with trivial coefficients,
/// built directly from the multiplication table:
/// `df(g1..g_{n+1}) = f(g2..) + sum (-1)^i f(.. g_i g_{i+1} ..) + (-1)^{n+1} f(g1..g_n)`.
pub struct BarComplex {
    pub size: usize,
    pub field: Field,
    table: Vec<usize>,
}

impl BarComplex {
    pub fn cyclic(n: usize, field: Field) -> BarComplex {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        BarComplex { size: n, field, table }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    fn tuple(&self, mut idx: usize, len: usize) -> Vec<usize> {
        let mut t = vec![0; len];
        for k in (0..len).rev() {
            t[k] = idx % self.size;
            idx /= self.size;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &g| acc * self.size + g)
    }

    /// Rank of the degree-n coboundary matrix.
    pub fn delta_rank(&self, degree: usize) -> usize {
        let rows = self.size.pow(degree as u32 + 1);
        let cols = self.size.pow(degree as u32);
        rank_oracle(rows, cols, |r, c| {
            let t = self.tuple(r, degree + 1);
            let mut acc = 0i64;
            if self.index(&t[1..]) == c {
                acc += 1;
            }
            for i in 1..=degree {
                let mut merged: Vec<usize> = Vec::with_capacity(degree);
                merged.extend_from_slice(&t[..i - 1]);
                merged.push(self.mul(t[i - 1], t[i]));
                merged.extend_from_slice(&t[i + 1..]);
                if self.index(&merged) == c {
                    acc += if i % 2 == 0 { 1 } else { -1 };
                }
            }
            if self.index(&t[..degree]) == c {
                acc += if (degree + 1) % 2 == 0 { 1 } else { -1 };
            }
            FieldElem::from_int(acc, self.field)
        })
    }

    /// `dim H^n` with the convention that the image below degree 1 is zero.
    pub fn h_dim(&self, degree: usize) -> usize {
        let dim_n = self.size.pow(degree as u32);
        let kernel = dim_n - self.delta_rank(degree);
        let image = if degree == 1 { 0 } else { self.delta_rank(degree - 1) };
        kernel - image
    }
}

/// Kauffman-bracket skein oracle on trace closures: resolve every crossing
/// both ways, count loops combinatorially, weight loops by
/// `delta = -A^2 - A^{-2}` and framing twists by `(-A^3)^{+-1}`, with
/// `A = exp(eps)` truncated at `order`.
pub fn skein_bracket(braid: &BraidWord, order: usize) -> TruncatedScalar {
    let ring = SeriesRing::new(Field::Q, order);
    let a = TruncatedScalar::truncated_exp(&FieldElem::one(Field::Q), order).unwrap();
    let a_inv = TruncatedScalar::truncated_exp(&FieldElem::from_int(-1, Field::Q), order).unwrap();
    let delta = (&a.pow(2).unwrap() + &a_inv.pow(2).unwrap()).neg();
    let crossings = braid.letters.len();
    // delta^j for every possible loop count.
    let max_loops = braid.strands + crossings + 1;
    let mut delta_pow = vec![TruncatedScalar::one(ring)];
    for j in 1..=max_loops {
        delta_pow.push(&delta_pow[j - 1] * &delta);
    }
    let mut acc = TruncatedScalar::zero(ring);
    for state in 0u64..(1 << crossings) {
        // weight: A per vertical smoothing of a positive letter, A^{-1} per
        // horizontal, and the reverse for negative letters.
        let mut exponent = 0i64;
        for (i, &l) in braid.letters.iter().enumerate() {
            let horizontal = state & (1 << i) != 0;
            let positive = l > 0;
            exponent += if horizontal == positive { -1 } else { 1 };
        }
        let weight = if exponent >= 0 {
            a.pow(exponent).unwrap()
        } else {
            a_inv.pow(-exponent).unwrap()
        };
        // Loop count by threading segment ids.
        let mut parent: Vec<usize> = (0..braid.strands).collect();
        let mut seg: Vec<usize> = (0..braid.strands).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, &l) in braid.letters.iter().enumerate() {
            let pos = l.unsigned_abs() as usize - 1;
            if state & (1 << i) != 0 {
                // horizontal: cap joins the incoming segments, cup starts one arc.
                let (ra, rb) = (find(&mut parent, seg[pos]), find(&mut parent, seg[pos + 1]));
                parent[ra] = rb;
                let fresh = parent.len();
                parent.push(fresh);
                seg[pos] = fresh;
                seg[pos + 1] = fresh;
            }
            // vertical: strands continue straight; nothing to do.
        }
        for s in 0..braid.strands {
            let (ra, rb) = (find(&mut parent, seg[s]), find(&mut parent, s));
            parent[ra] = rb;
        }
        let total = parent.len();
        let loops = (0..total).filter(|&i| find(&mut parent, i) == i).count();
        acc = &acc + &(&weight * &delta_pow[loops]);
    }
    // Framing twists scale by (-A^3) per positive kink, (-A^{-3}) per negative.
    let mut kink = TruncatedScalar::one(ring);
    let writhe: i64 = braid.framings.iter().sum();
    let base = if writhe >= 0 {
        a.pow(3).unwrap()
    } else {
        a_inv.pow(3).unwrap()
    };
    for _ in 0..writhe.unsigned_abs() {
        kink = &kink * &base.neg();
    }
    &acc * &kink
}
