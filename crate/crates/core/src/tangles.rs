//! Combinatorial framed (singular) tangles: validated words of horizontal
//! slices, braid words with trace closure and framing insertion, singular
//! slices, and diagram surgery.
//!
//! Strands are oriented: `Up` is the chosen object X, `Down` its dual.
//! Crossings and twists act on `Up` strands only; trace closures route the
//! return strands crossing-free, so evaluation never needs mixed-orientation
//! crossing matrices.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangleError {
    #[error("slice {index} ({slice}) does not fit the ambient signature: {detail}")]
    Validation {
        index: usize,
        slice: String,
        detail: String,
    },
    #[error("diagram is not closed ({src} source strands, {tgt} target strands)")]
    NotClosed { src: usize, tgt: usize },
    #[error("position {0} does not name a crossing or twist slice")]
    NotSingularizable(usize),
    #[error("braid letter {letter} out of range for {strands} strands")]
    BadLetter { letter: i64, strands: usize },
    #[error("singular marker {0} exceeds the braid word length")]
    BadSingularMarker(usize),
    #[error("boundaries do not match when stacking")]
    StackMismatch,
    #[error("parse error at `{0}`")]
    Parse(String),
}

/// Strand orientation in a horizontal signature.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Up,
    Down,
}

use Orientation::{Down, Up};

/// A single elementary slice; `offset` positions it in the ambient signature.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SliceKind {
    IdUp,
    IdDown,
    /// Coevaluation of the right dual: nothing to [Down, Up].
    CupR,
    /// Coevaluation of the left dual: nothing to [Up, Down].
    CupL,
    /// Evaluation of the right dual: [Up, Down] to nothing.
    CapR,
    /// Evaluation of the left dual: [Down, Up] to nothing.
    CapL,
    CrPos,
    CrNeg,
    /// Singular (double-point) crossing.
    CrSing,
    TwPos,
    TwNeg,
    /// Singular framing point.
    TwSing,
}

impl SliceKind {
    pub fn inputs(self) -> &'static [Orientation] {
        match self {
            SliceKind::IdUp => &[Up],
            SliceKind::IdDown => &[Down],
            SliceKind::CupR | SliceKind::CupL => &[],
            SliceKind::CapR => &[Up, Down],
            SliceKind::CapL => &[Down, Up],
            SliceKind::CrPos | SliceKind::CrNeg | SliceKind::CrSing => &[Up, Up],
            SliceKind::TwPos | SliceKind::TwNeg | SliceKind::TwSing => &[Up],
        }
    }

    pub fn outputs(self) -> &'static [Orientation] {
        match self {
            SliceKind::IdUp => &[Up],
            SliceKind::IdDown => &[Down],
            SliceKind::CupR => &[Down, Up],
            SliceKind::CupL => &[Up, Down],
            SliceKind::CapR | SliceKind::CapL => &[],
            SliceKind::CrPos | SliceKind::CrNeg | SliceKind::CrSing => &[Up, Up],
            SliceKind::TwPos | SliceKind::TwNeg | SliceKind::TwSing => &[Up],
        }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, SliceKind::CrSing | SliceKind::TwSing)
    }

    /// The two resolutions of a singular slice, positive first.
    pub fn resolutions(self) -> Option<(SliceKind, SliceKind)> {
        match self {
            SliceKind::CrSing => Some((SliceKind::CrPos, SliceKind::CrNeg)),
            SliceKind::TwSing => Some((SliceKind::TwPos, SliceKind::TwNeg)),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<SliceKind, TangleError> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "IDUP" => SliceKind::IdUp,
            "IDDOWN" => SliceKind::IdDown,
            "CUPR" => SliceKind::CupR,
            "CUPL" => SliceKind::CupL,
            "CAPR" => SliceKind::CapR,
            "CAPL" => SliceKind::CapL,
            "CRPOS" => SliceKind::CrPos,
            "CRNEG" => SliceKind::CrNeg,
            "CRSING" => SliceKind::CrSing,
            "TWPOS" => SliceKind::TwPos,
            "TWNEG" => SliceKind::TwNeg,
            "TWSING" => SliceKind::TwSing,
            _ => return Err(TangleError::Parse(s.to_string())),
        })
    }
}

impl fmt::Display for SliceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SliceKind::IdUp => "IDUP",
            SliceKind::IdDown => "IDDOWN",
            SliceKind::CupR => "CUPR",
            SliceKind::CupL => "CUPL",
            SliceKind::CapR => "CAPR",
            SliceKind::CapL => "CAPL",
            SliceKind::CrPos => "CRPOS",
            SliceKind::CrNeg => "CRNEG",
            SliceKind::CrSing => "CRSING",
            SliceKind::TwPos => "TWPOS",
            SliceKind::TwNeg => "TWNEG",
            SliceKind::TwSing => "TWSING",
        };
        f.write_str(s)
    }
}

/// A slice placed at a horizontal offset.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Slice {
    pub kind: SliceKind,
    pub offset: usize,
}

impl Slice {
    pub fn new(kind: SliceKind, offset: usize) -> Slice {
        Slice { kind, offset }
    }
}

/// A validated word of slices read bottom to top.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MorseDiagram {
    source: Vec<Orientation>,
    slices: Vec<Slice>,
}

impl MorseDiagram {
    /// Builds and validates; the target signature is implied by the slices.
    pub fn new(source: Vec<Orientation>, slices: Vec<Slice>) -> Result<MorseDiagram, TangleError> {
        let d = MorseDiagram { source, slices };
        d.validate()?;
        Ok(d)
    }

    /// A closed diagram has empty source (and, once validated, empty target).
    pub fn closed(slices: Vec<Slice>) -> Result<MorseDiagram, TangleError> {
        MorseDiagram::new(Vec::new(), slices)
    }

    pub fn source(&self) -> &[Orientation] {
        &self.source
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Checks slice-to-slice signature matching; returns the boundary
    /// signatures, with violations tagged by slice position.
    pub fn validate(&self) -> Result<(Vec<Orientation>, Vec<Orientation>), TangleError> {
        let mut sig = self.source.clone();
        for (index, slice) in self.slices.iter().enumerate() {
            let ins = slice.kind.inputs();
            let err = |detail: String| TangleError::Validation {
                index,
                slice: format!("{} {}", slice.kind, slice.offset),
                detail,
            };
            if slice.offset + ins.len() > sig.len() {
                return Err(err(format!(
                    "offset {} + arity {} exceeds width {}",
                    slice.offset,
                    ins.len(),
                    sig.len()
                )));
            }
            let window = &sig[slice.offset..slice.offset + ins.len()];
            if window != ins {
                return Err(err(format!("expected {ins:?}, found {window:?}")));
            }
            sig.splice(
                slice.offset..slice.offset + ins.len(),
                slice.kind.outputs().iter().copied(),
            );
        }
        Ok((self.source.clone(), sig))
    }

    pub fn target(&self) -> Vec<Orientation> {
        self.validate().expect("validated at construction").1
    }

    pub fn is_closed(&self) -> bool {
        self.source.is_empty() && self.target().is_empty()
    }

    /// Positions of singular slices.
    pub fn singular_positions(&self) -> Vec<usize> {
        self.slices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind.is_singular())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn singular_count(&self) -> usize {
        self.singular_positions().len()
    }

    /// Marks the given crossing/twist slices singular.
    pub fn singularize(&self, positions: &[usize]) -> Result<MorseDiagram, TangleError> {
        let mut slices = self.slices.clone();
        for &p in positions {
            let kind = slices
                .get(p)
                .ok_or(TangleError::NotSingularizable(p))?
                .kind;
            let new_kind = match kind {
                SliceKind::CrPos | SliceKind::CrNeg => SliceKind::CrSing,
                SliceKind::TwPos | SliceKind::TwNeg => SliceKind::TwSing,
                _ => return Err(TangleError::NotSingularizable(p)),
            };
            slices[p].kind = new_kind;
        }
        MorseDiagram::new(self.source.clone(), slices)
    }

    /// Replaces the slice at `position` (must be singular) by a resolution.
    pub fn resolve_at(&self, position: usize, positive: bool) -> Result<MorseDiagram, TangleError> {
        let mut slices = self.slices.clone();
        let kind = slices
            .get(position)
            .ok_or(TangleError::NotSingularizable(position))?
            .kind;
        let (pos, neg) = kind
            .resolutions()
            .ok_or(TangleError::NotSingularizable(position))?;
        slices[position].kind = if positive { pos } else { neg };
        MorseDiagram::new(self.source.clone(), slices)
    }

    /// Stacks `self` then `above`; boundaries must match.
    pub fn stack(&self, above: &MorseDiagram) -> Result<MorseDiagram, TangleError> {
        if self.target() != above.source {
            return Err(TangleError::StackMismatch);
        }
        let slices = self.slices.iter().chain(&above.slices).copied().collect();
        MorseDiagram::new(self.source.clone(), slices)
    }

    /// Side-by-side placement: `self`'s slices run first (the right block is
    /// untouched), then `other`'s with offsets shifted past `self`'s target.
    pub fn beside(&self, other: &MorseDiagram) -> Result<MorseDiagram, TangleError> {
        let shift = self.target().len();
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let slices = self
            .slices
            .iter()
            .copied()
            .chain(other.slices.iter().map(|s| Slice::new(s.kind, s.offset + shift)))
            .collect();
        MorseDiagram::new(source, slices)
    }

    /// Separated union of closed diagrams.
    pub fn disjoint_union(&self, other: &MorseDiagram) -> Result<MorseDiagram, TangleError> {
        for d in [self, other] {
            if !d.is_closed() {
                return Err(TangleError::NotClosed {
                    src: d.source.len(),
                    tgt: d.target().len(),
                });
            }
        }
        self.beside(other)
    }

    /// Number of link components of a closed diagram, by threading segment
    /// identities through the slices.
    pub fn component_count(&self) -> Result<usize, TangleError> {
        if !self.is_closed() {
            return Err(TangleError::NotClosed {
                src: self.source.len(),
                tgt: self.target().len(),
            });
        }
        let mut uf = UnionFind::new();
        let mut current: Vec<usize> = Vec::new();
        for slice in &self.slices {
            let o = slice.offset;
            match slice.kind {
                SliceKind::IdUp | SliceKind::IdDown | SliceKind::TwPos | SliceKind::TwNeg
                | SliceKind::TwSing => {}
                SliceKind::CupR | SliceKind::CupL => {
                    let id = uf.fresh();
                    current.insert(o, id);
                    current.insert(o + 1, id);
                }
                SliceKind::CapR | SliceKind::CapL => {
                    let a = current.remove(o);
                    let b = current.remove(o);
                    uf.union(a, b);
                }
                SliceKind::CrPos | SliceKind::CrNeg | SliceKind::CrSing => {
                    current.swap(o, o + 1);
                }
            }
        }
        debug_assert!(current.is_empty());
        Ok(uf.roots())
    }

    /// Parses the Morse file format: an optional `source U D ...` header,
    /// then one `SLICE offset` line per slice.
    pub fn parse(text: &str) -> Result<MorseDiagram, TangleError> {
        let mut source = Vec::new();
        let mut slices = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words[0] == "source" {
                for w in &words[1..] {
                    source.push(match w.to_ascii_uppercase().as_str() {
                        "U" | "UP" => Up,
                        "D" | "DOWN" => Down,
                        other => return Err(TangleError::Parse(other.to_string())),
                    });
                }
                continue;
            }
            if words.len() != 2 {
                return Err(TangleError::Parse(line.to_string()));
            }
            let kind = SliceKind::parse(words[0])?;
            let offset = words[1]
                .parse()
                .map_err(|_| TangleError::Parse(line.to_string()))?;
            slices.push(Slice::new(kind, offset));
        }
        MorseDiagram::new(source, slices)
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        if !self.source.is_empty() {
            out.push_str("source");
            for o in &self.source {
                out.push_str(match o {
                    Up => " U",
                    Down => " D",
                });
            }
            out.push('\n');
        }
        for s in &self.slices {
            out.push_str(&format!("{} {}\n", s.kind, s.offset));
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> UnionFind {
        UnionFind { parent: Vec::new() }
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn roots(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// A braid word on `strands` strands with per-strand framings and singular
/// markers; letter `i` (1-based) crosses strands `i` and `i+1` positively,
/// `-i` negatively.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i64>,
    pub framings: Vec<i64>,
    /// 1-based positions into `letters` evaluated as singular crossings.
    pub singular_letters: Vec<usize>,
    /// Per-strand counts of singular framing points.
    pub singular_twists: Vec<(usize, usize)>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>, framings: Vec<i64>) -> BraidWord {
        BraidWord {
            strands,
            letters,
            framings,
            singular_letters: Vec::new(),
            singular_twists: Vec::new(),
        }
    }

    fn check(&self) -> Result<(), TangleError> {
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            if l == 0 || i >= self.strands {
                return Err(TangleError::BadLetter { letter: l, strands: self.strands });
            }
        }
        for &p in &self.singular_letters {
            if p == 0 || p > self.letters.len() {
                return Err(TangleError::BadSingularMarker(p));
            }
        }
        for &(s, _) in &self.singular_twists {
            if s == 0 || s > self.strands {
                return Err(TangleError::BadSingularMarker(s));
            }
        }
        if self.framings.len() != self.strands {
            return Err(TangleError::Parse(format!(
                "{} framings for {} strands",
                self.framings.len(),
                self.strands
            )));
        }
        Ok(())
    }

    /// The permutation carried by the braid (singular letters still cross).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        perm
    }

    /// Link components of the closure: cycles of the permutation.
    pub fn component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for mut i in 0..self.strands {
            if seen[i] {
                continue;
            }
            cycles += 1;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
        cycles
    }

    /// The trace closure as a Morse diagram: nested cups on the left, the
    /// braid (with framing twists and singular markers inserted) on the `Up`
    /// strands, then nested caps. Crossings never touch a `Down` strand.
    pub fn trace_closure(&self) -> Result<MorseDiagram, TangleError> {
        self.check()?;
        let k = self.strands;
        let mut slices = Vec::new();
        for i in 0..k {
            slices.push(Slice::new(SliceKind::CupR, i));
        }
        // Braid strand s (1-based) lives at ambient position k + s - 1.
        for (idx, &l) in self.letters.iter().enumerate() {
            let i = l.unsigned_abs() as usize;
            let kind = if self.singular_letters.contains(&(idx + 1)) {
                SliceKind::CrSing
            } else if l > 0 {
                SliceKind::CrPos
            } else {
                SliceKind::CrNeg
            };
            slices.push(Slice::new(kind, k + i - 1));
        }
        for (s, &f) in self.framings.iter().enumerate() {
            let kind = if f > 0 { SliceKind::TwPos } else { SliceKind::TwNeg };
            for _ in 0..f.unsigned_abs() {
                slices.push(Slice::new(kind, k + s));
            }
        }
        for &(s, count) in &self.singular_twists {
            for _ in 0..count {
                slices.push(Slice::new(SliceKind::TwSing, k + s - 1));
            }
        }
        for i in (0..k).rev() {
            slices.push(Slice::new(SliceKind::CapL, i));
        }
        MorseDiagram::closed(slices)
    }

    /// Parses the braid text format:
    /// `strands=k; word=s1 s1 -s2; framings=f1,...; singular=i,j; singular_twists=(s,c),...`.
    pub fn parse(text: &str) -> Result<BraidWord, TangleError> {
        let mut strands: Option<usize> = None;
        let mut letters = Vec::new();
        let mut framings: Option<Vec<i64>> = None;
        let mut singular_letters = Vec::new();
        let mut singular_twists = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| TangleError::Parse(part.to_string()))?;
            let value = value.trim();
            match key.trim() {
                "strands" => {
                    strands =
                        Some(value.parse().map_err(|_| TangleError::Parse(value.into()))?)
                }
                "word" => {
                    for w in value.split_whitespace() {
                        let w = w.trim_start_matches('s').replace("-s", "-");
                        let w = if let Some(stripped) = w.strip_prefix("-s") {
                            format!("-{stripped}")
                        } else {
                            w
                        };
                        letters.push(w.parse().map_err(|_| TangleError::Parse(w.clone()))?);
                    }
                }
                "framings" => {
                    framings = Some(
                        value
                            .split(',')
                            .filter(|s| !s.trim().is_empty())
                            .map(|s| s.trim().parse().map_err(|_| TangleError::Parse(s.into())))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "singular" => {
                    for s in value.split(',').filter(|s| !s.trim().is_empty()) {
                        singular_letters
                            .push(s.trim().parse().map_err(|_| TangleError::Parse(s.into()))?);
                    }
                }
                "singular_twists" => {
                    for chunk in value.split(')').filter(|c| c.contains('(')) {
                        let inner = chunk
                            .trim_start_matches([',', ' '])
                            .trim_start_matches('(');
                        let (a, b) = inner
                            .split_once(',')
                            .ok_or_else(|| TangleError::Parse(chunk.into()))?;
                        singular_twists.push((
                            a.trim().parse().map_err(|_| TangleError::Parse(a.into()))?,
                            b.trim().parse().map_err(|_| TangleError::Parse(b.into()))?,
                        ));
                    }
                }
                other => return Err(TangleError::Parse(other.to_string())),
            }
        }
        let strands = strands.ok_or_else(|| TangleError::Parse("missing strands".into()))?;
        let mut braid = BraidWord::new(
            strands,
            letters,
            framings.unwrap_or_else(|| vec![0; strands]),
        );
        braid.singular_letters = singular_letters;
        braid.singular_twists = singular_twists;
        braid.check()?;
        Ok(braid)
    }
}

/// The two-slice circle, the smallest closed diagram.
pub fn unknot_diagram() -> MorseDiagram {
    MorseDiagram::closed(vec![
        Slice::new(SliceKind::CupR, 0),
        Slice::new(SliceKind::CapL, 0),
    ])
    .expect("circle validates")
}
