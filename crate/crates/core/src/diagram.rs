//! Combinatorial arrow diagrams of links in Seifert fibered spaces.
//!
//! A diagram lives on the fundamental polygon of the base surface. Overpasses
//! are numbered `x1..xr` following the slot conventions: generators `1..t`
//! sit on boundary points `+1..+t`, `t+1..2t` on `-1..-t`, `2t+1..2t+n`
//! before the arrows, `2t+n+1..2t+2n` after them, and the remaining indices
//! are free. A single arc that occupies two slots carries both indices and is
//! declared with an `IDENT` record.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

/// Which polygon edge a boundary point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRef {
    pub kind: EdgeKind,
    /// 1-based edge index.
    pub index: u32,
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EdgeKind::A => write!(f, "a{}", self.index),
            EdgeKind::B => write!(f, "b{}", self.index),
        }
    }
}

/// Base surface and surgery data of the ambient Seifert fibered space.
///
/// Fiber pairs are stored normalized with `0 <= beta < alpha`. With this
/// ordering the surgery relation reads `l^beta = y^-1 h` and the polygon
/// relation acquires the factor `l^-alpha`; a fiber `(p, 1)` over the sphere
/// gives a space with first homology `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub base_orientable: bool,
    pub genus: u32,
    /// Edge signs for `a1..ag`.
    pub gamma: Vec<i8>,
    /// Edge signs for `b1..bg`; empty for a non-orientable base.
    pub delta: Vec<i8>,
    /// Surgery coefficients `(alpha_j, beta_j)`.
    pub fibers: Vec<(u64, u64)>,
}

impl SeifertData {
    pub fn k(&self) -> usize {
        self.fibers.len()
    }
}

/// An unreduced word over overpass generators, letters `(index, ±1)`.
pub type RawWord = Vec<(u32, i8)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub edge: EdgeRef,
    /// Ordinal along the edge, positive and distinct per edge.
    pub pos: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowRecord {
    /// Path word from the base point to the arrow.
    pub z: RawWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    /// Generator of the overpass.
    pub over: u32,
    /// Incoming under-strand.
    pub inc: u32,
    /// Outgoing under-strand.
    pub out: u32,
    /// +1 selects `x_in x_k x_out^-1 x_k^-1`, -1 the mirror variant.
    pub sign: i8,
}

/// A complete combinatorial arrow diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDiagram {
    pub seifert: SeifertData,
    /// Number of overpass generators.
    pub r: u32,
    pub boundary: Vec<BoundaryPoint>,
    pub arrows: Vec<ArrowRecord>,
    /// Path words from the base point to each exceptional point.
    pub fiber_words: Vec<RawWord>,
    /// Signs for slots `1..2t+2n` (index 0 is slot 1).
    pub eps: Vec<i8>,
    pub crossings: Vec<Crossing>,
    /// Same-arc double labels `(i, j)` with `i < j`.
    pub idents: Vec<(u32, u32)>,
}

/// Partition of the generators into link components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub nu: u32,
    /// 1-based component index per generator `1..r` (entry 0 is generator 1).
    pub assignment: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ArrowDiagram {
    pub fn t(&self) -> usize {
        self.boundary.len()
    }

    pub fn n(&self) -> usize {
        self.arrows.len()
    }

    pub fn k(&self) -> usize {
        self.seifert.fibers.len()
    }

    /// Sign of slot `i` (1-based, `1..=2t+2n`).
    pub fn eps_of(&self, slot: usize) -> i8 {
        self.eps[slot - 1]
    }

    /// Generator index of the overpass ending on boundary point `+j`.
    pub fn gen_plus(&self, j: usize) -> u32 {
        j as u32
    }

    pub fn gen_minus(&self, j: usize) -> u32 {
        (self.t() + j) as u32
    }

    pub fn gen_pre_arrow(&self, j: usize) -> u32 {
        (2 * self.t() + j) as u32
    }

    pub fn gen_post_arrow(&self, j: usize) -> u32 {
        (2 * self.t() + self.n() + j) as u32
    }

    /// Union-find components over strand connectivity.
    pub fn components(&self) -> ComponentPartition {
        let r = self.r as usize;
        let mut parent: Vec<usize> = (0..r).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        let union = |parent: &mut Vec<usize>, a: u32, b: u32| {
            let (a, b) = ((a - 1) as usize, (b - 1) as usize);
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        };
        for c in &self.crossings {
            union(&mut parent, c.inc, c.out);
        }
        for j in 1..=self.t() {
            union(&mut parent, self.gen_plus(j), self.gen_minus(j));
        }
        for j in 1..=self.n() {
            union(&mut parent, self.gen_pre_arrow(j), self.gen_post_arrow(j));
        }
        for &(i, j) in &self.idents {
            union(&mut parent, i, j);
        }
        let mut label: BTreeMap<usize, u32> = BTreeMap::new();
        let mut assignment = vec![0u32; r];
        for i in 0..r {
            let root = find(&mut parent, i);
            let next = label.len() as u32 + 1;
            let c = *label.entry(root).or_insert(next);
            assignment[i] = c;
        }
        ComponentPartition { nu: label.len() as u32, assignment }
    }

    /// Checks every structural invariant; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let s = &self.seifert;
        let g = s.genus as usize;
        let push = |v: &mut Vec<Violation>, inv: &str, detail: String| {
            v.push(Violation { invariant: inv.to_string(), detail });
        };

        for (j, &(alpha, beta)) in s.fibers.iter().enumerate() {
            if alpha == 0 {
                push(&mut v, "fiber coefficients", format!("fiber {}: alpha must be >= 1", j + 1));
            } else {
                if beta >= alpha && !(alpha == 1 && beta == 0) {
                    push(
                        &mut v,
                        "fiber coefficients",
                        format!("fiber {}: require beta < alpha, got ({alpha}, {beta})", j + 1),
                    );
                }
                if alpha.gcd(&beta) != 1 {
                    push(
                        &mut v,
                        "fiber coefficients",
                        format!("fiber {}: gcd({alpha}, {beta}) != 1", j + 1),
                    );
                }
            }
        }
        if s.gamma.len() != g {
            push(&mut v, "edge signs", format!("expected {} gamma signs, got {}", g, s.gamma.len()));
        }
        if s.base_orientable {
            if s.delta.len() != g {
                push(&mut v, "edge signs", format!("expected {} delta signs, got {}", g, s.delta.len()));
            }
        } else if !s.delta.is_empty() {
            push(&mut v, "edge signs", "non-orientable base has no delta signs".to_string());
        }
        if !s.base_orientable && g == 0 {
            push(&mut v, "edge signs", "non-orientable base needs genus >= 1".to_string());
        }

        let (t, n) = (self.t(), self.n());
        if s.base_orientable && g == 0 && t > 0 {
            push(&mut v, "sphere boundary", "sphere base admits no boundary points".to_string());
        }
        if self.fiber_words.len() != s.fibers.len() {
            push(
                &mut v,
                "fiber words",
                format!("{} fiber words for {} fibers", self.fiber_words.len(), s.fibers.len()),
            );
        }
        if self.eps.len() != 2 * t + 2 * n {
            push(
                &mut v,
                "epsilon table",
                format!("expected {} signs, got {}", 2 * t + 2 * n, self.eps.len()),
            );
            return v;
        }
        for (i, &e) in self.eps.iter().enumerate() {
            if e != 1 && e != -1 {
                push(&mut v, "epsilon table", format!("slot {}: sign must be +1 or -1", i + 1));
            }
        }
        for i in 1..=t {
            if self.eps_of(t + i) != -self.eps_of(i) {
                push(
                    &mut v,
                    "epsilon pairing",
                    format!("eps_{} must equal -eps_{}", t + i, i),
                );
            }
        }
        for i in 1..=n {
            if self.eps_of(2 * t + n + i) != -self.eps_of(2 * t + i) {
                push(
                    &mut v,
                    "epsilon pairing",
                    format!("eps_{} must equal -eps_{}", 2 * t + n + i, 2 * t + i),
                );
            }
        }

        // Boundary points: edge indices, position ordinals, walk order.
        let mut per_edge: BTreeMap<(u32, u8), Vec<u32>> = BTreeMap::new();
        for (j, b) in self.boundary.iter().enumerate() {
            if b.edge.index == 0 || b.edge.index as usize > g {
                push(&mut v, "boundary points", format!("point +{}: edge {} out of range", j + 1, b.edge));
            }
            if b.edge.kind == EdgeKind::B && !s.base_orientable {
                push(&mut v, "boundary points", format!("point +{}: non-orientable base has no b edges", j + 1));
            }
            if b.pos == 0 {
                push(&mut v, "boundary points", format!("point +{}: position must be >= 1", j + 1));
            }
            let key = (b.edge.index, if b.edge.kind == EdgeKind::A { 0 } else { 1 });
            per_edge.entry(key).or_default().push(b.pos);
        }
        for ((e, k), poss) in &per_edge {
            let mut sorted = poss.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != poss.len() {
                let name = if *k == 0 { "a" } else { "b" };
                push(&mut v, "boundary points", format!("edge {name}{e}: duplicate positions"));
            }
        }
        // Walk order: +indices follow (edge occurrence order, position).
        let walk_key = |b: &BoundaryPoint| -> (u32, u8, u32) {
            // Orientable walk: a1 b1 a2 b2 ...; non-orientable: a1 a2 ...
            (b.edge.index, if b.edge.kind == EdgeKind::A { 0 } else { 1 }, b.pos)
        };
        for j in 1..self.boundary.len() {
            if walk_key(&self.boundary[j - 1]) > walk_key(&self.boundary[j]) {
                push(
                    &mut v,
                    "boundary indexing",
                    format!("points +{} and +{} are not in boundary walk order", j, j + 1),
                );
            }
        }

        // Generator index ranges.
        let r = self.r;
        let check_idx = |v: &mut Vec<Violation>, what: String, i: u32| {
            if i == 0 || i > r {
                push(v, "index out of range", format!("{what}: x{i} with r={r}"));
            }
        };
        if (2 * t + 2 * n) as u32 > r {
            push(
                &mut v,
                "index out of range",
                format!("r={} is smaller than the {} slot generators", r, 2 * t + 2 * n),
            );
            return v;
        }
        for (ci, c) in self.crossings.iter().enumerate() {
            check_idx(&mut v, format!("crossing {}", ci + 1), c.over);
            check_idx(&mut v, format!("crossing {}", ci + 1), c.inc);
            check_idx(&mut v, format!("crossing {}", ci + 1), c.out);
            if c.sign != 1 && c.sign != -1 {
                push(&mut v, "crossing sign", format!("crossing {}: sign must be +1 or -1", ci + 1));
            }
        }
        for (ai, a) in self.arrows.iter().enumerate() {
            for &(i, e) in &a.z {
                check_idx(&mut v, format!("arrow {} z-word", ai + 1), i);
                if e != 1 && e != -1 {
                    push(&mut v, "word exponents", format!("arrow {} z-word: exponents must be +-1", ai + 1));
                }
            }
        }
        for (fi, y) in self.fiber_words.iter().enumerate() {
            for &(i, e) in y {
                check_idx(&mut v, format!("fiber {} y-word", fi + 1), i);
                if e != 1 && e != -1 {
                    push(&mut v, "word exponents", format!("fiber {} y-word: exponents must be +-1", fi + 1));
                }
            }
        }
        let mut in_ident: BTreeMap<u32, usize> = BTreeMap::new();
        for (ii, &(a, b)) in self.idents.iter().enumerate() {
            check_idx(&mut v, format!("ident {}", ii + 1), a);
            check_idx(&mut v, format!("ident {}", ii + 1), b);
            if a == b {
                push(&mut v, "ident records", format!("ident {}: indices coincide", ii + 1));
            }
            for &x in &[a, b] {
                if let Some(prev) = in_ident.insert(x, ii) {
                    push(
                        &mut v,
                        "ident records",
                        format!("x{} appears in idents {} and {}", x, prev + 1, ii + 1),
                    );
                }
            }
        }
        if !v.is_empty() {
            return v;
        }

        // Arc coherence: every generator needs at most one start and one end;
        // ident pairs merge two half-anchored labels into one arc.
        #[derive(Default, Clone)]
        struct Ends {
            starts: Vec<String>,
            ends: Vec<String>,
        }
        let mut ends: Vec<Ends> = vec![Ends::default(); r as usize];
        let mut slot_object: Vec<Option<(u8, usize)>> = vec![None; r as usize];
        for j in 1..=t {
            let (p, m) = (self.gen_plus(j), self.gen_minus(j));
            for (idx, slot) in [(p, j), (m, t + j)] {
                let rec = &mut ends[(idx - 1) as usize];
                let name = format!("boundary slot {slot}");
                if self.eps_of(slot) == 1 {
                    rec.starts.push(name);
                } else {
                    rec.ends.push(name);
                }
                slot_object[(idx - 1) as usize] = Some((0, j));
            }
        }
        for j in 1..=n {
            let (p, q) = (self.gen_pre_arrow(j), self.gen_post_arrow(j));
            for (idx, slot) in [(p, 2 * t + j), (q, 2 * t + n + j)] {
                let rec = &mut ends[(idx - 1) as usize];
                let name = format!("arrow slot {slot}");
                if self.eps_of(slot) == 1 {
                    rec.starts.push(name);
                } else {
                    rec.ends.push(name);
                }
                slot_object[(idx - 1) as usize] = Some((1, j));
            }
        }
        for (ci, c) in self.crossings.iter().enumerate() {
            ends[(c.inc - 1) as usize].ends.push(format!("crossing {} in", ci + 1));
            ends[(c.out - 1) as usize].starts.push(format!("crossing {} out", ci + 1));
        }
        for i in 0..r as usize {
            if ends[i].starts.len() > 1 || ends[i].ends.len() > 1 {
                push(
                    &mut v,
                    "overconstrained generator",
                    format!(
                        "x{}: anchored at {:?} / {:?}",
                        i + 1,
                        ends[i].starts,
                        ends[i].ends
                    ),
                );
            }
        }
        if !v.is_empty() {
            return v;
        }
        let mut merged: BTreeSet<u32> = BTreeSet::new();
        for &(a, b) in &self.idents {
            merged.insert(a);
            merged.insert(b);
            let (ea, eb) = (&ends[(a - 1) as usize], &ends[(b - 1) as usize]);
            let count = |e: &Ends| e.starts.len() + e.ends.len();
            if count(ea) != 1 || count(eb) != 1 {
                push(
                    &mut v,
                    "ident records",
                    format!("ident (x{a}, x{b}): both labels must have exactly one anchor"),
                );
                continue;
            }
            let a_starts = ea.starts.len() == 1;
            let b_starts = eb.starts.len() == 1;
            if a_starts == b_starts {
                push(
                    &mut v,
                    "ident records",
                    format!("ident (x{a}, x{b}): anchors must be one start and one end"),
                );
            }
            if let (Some(oa), Some(ob)) = (slot_object[(a - 1) as usize], slot_object[(b - 1) as usize]) {
                if oa == ob {
                    push(
                        &mut v,
                        "apply \u{3a9}1 first",
                        format!("ident (x{a}, x{b}): overpass both starts and ends on the same object"),
                    );
                }
            }
        }
        for i in 0..r as usize {
            if merged.contains(&(i as u32 + 1)) {
                continue;
            }
            let (st, en) = (ends[i].starts.len(), ends[i].ends.len());
            if st + en == 1 {
                push(
                    &mut v,
                    "dangling overpass",
                    format!("x{}: a single anchor; declare an IDENT or re-encode", i + 1),
                );
            }
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

fn parse_word(tokens: &[&str], line: usize) -> Result<RawWord, ParseError> {
    if tokens.len() == 1 && tokens[0] == "1" {
        return Ok(Vec::new());
    }
    let mut w = Vec::new();
    for tok in tokens {
        let (core, exp) = match tok.split_once('^') {
            Some((c, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| ParseError { line, msg: format!("bad exponent in token '{tok}'") })?;
                (c, exp)
            }
            None => (*tok, 1),
        };
        if exp != 1 && exp != -1 {
            return Err(ParseError { line, msg: format!("word exponents must be +-1, got '{tok}'") });
        }
        let idx = core
            .strip_prefix('x')
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| ParseError { line, msg: format!("expected x<i> token, got '{tok}'") })?;
        w.push((idx, exp as i8));
    }
    Ok(w)
}

fn word_to_string(w: &RawWord) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter()
        .map(|&(i, e)| if e == 1 { format!("x{i}") } else { format!("x{i}^-1") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_sign(tok: &str, line: usize) -> Result<i8, ParseError> {
    match tok {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(ParseError { line, msg: format!("expected a sign, got '{tok}'") }),
    }
}

/// Parses the line-oriented diagram format. `#` starts a comment.
pub fn parse_diagram(text: &str) -> Result<ArrowDiagram, ParseError> {
    let mut surface: Option<(bool, u32)> = None;
    let mut gamma: Vec<i8> = Vec::new();
    let mut delta: Vec<i8> = Vec::new();
    let mut signs_seen = false;
    let mut fibers: Vec<(u64, u64)> = Vec::new();
    let mut fiber_words: Vec<RawWord> = Vec::new();
    let mut counts: Option<(u32, usize, usize)> = None;
    let mut boundary: BTreeMap<usize, (BoundaryPoint, i8)> = BTreeMap::new();
    let mut arrows: BTreeMap<usize, (ArrowRecord, i8)> = BTreeMap::new();
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut idents: Vec<(u32, u32)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| ParseError { line, msg };
        match toks[0] {
            "SURFACE" => {
                if toks.len() != 3 {
                    return Err(err("SURFACE takes <O|N> <genus>".into()));
                }
                if surface.is_some() {
                    return Err(err("duplicate SURFACE".into()));
                }
                let orient = match toks[1] {
                    "O" => true,
                    "N" => false,
                    other => return Err(err(format!("expected O or N, got '{other}'"))),
                };
                let genus: u32 = toks[2].parse().map_err(|_| err(format!("bad genus '{}'", toks[2])))?;
                surface = Some((orient, genus));
            }
            "SIGNS" => {
                if signs_seen {
                    return Err(err("duplicate SIGNS".into()));
                }
                signs_seen = true;
                let mut i = 1;
                if i >= toks.len() || toks[i] != "gamma" {
                    return Err(err("SIGNS starts with 'gamma'".into()));
                }
                i += 1;
                while i < toks.len() && toks[i] != "delta" {
                    gamma.push(parse_sign(toks[i], line)?);
                    i += 1;
                }
                if i < toks.len() {
                    i += 1; // past 'delta'
                    while i < toks.len() {
                        delta.push(parse_sign(toks[i], line)?);
                        i += 1;
                    }
                }
            }
            "FIBER" => {
                if toks.len() < 4 || toks[3] != "Y" {
                    return Err(err("FIBER takes <alpha> <beta> Y <word>".into()));
                }
                let alpha: u64 = toks[1].parse().map_err(|_| err(format!("bad alpha '{}'", toks[1])))?;
                let beta: u64 = toks[2].parse().map_err(|_| err(format!("bad beta '{}'", toks[2])))?;
                let w = parse_word(&toks[4..], line)?;
                fibers.push((alpha, beta));
                fiber_words.push(w);
            }
            "COUNTS" => {
                if toks.len() != 7 || toks[1] != "r" || toks[3] != "t" || toks[5] != "n" {
                    return Err(err("COUNTS takes r <r> t <t> n <n>".into()));
                }
                if counts.is_some() {
                    return Err(err("duplicate COUNTS".into()));
                }
                let r: u32 = toks[2].parse().map_err(|_| err(format!("bad r '{}'", toks[2])))?;
                let t: usize = toks[4].parse().map_err(|_| err(format!("bad t '{}'", toks[4])))?;
                let n: usize = toks[6].parse().map_err(|_| err(format!("bad n '{}'", toks[6])))?;
                counts = Some((r, t, n));
            }
            "BOUNDARY" => {
                if toks.len() != 8 || toks[2] != "EDGE" || toks[4] != "POS" || toks[6] != "EPS" {
                    return Err(err("BOUNDARY takes <j> EDGE <a|b><i> POS <ordinal> EPS <sign>".into()));
                }
                let j: usize = toks[1].parse().map_err(|_| err(format!("bad index '{}'", toks[1])))?;
                let edge_tok = toks[3];
                let (kind, idx_str) = match edge_tok.split_at(1) {
                    ("a", rest) => (EdgeKind::A, rest),
                    ("b", rest) => (EdgeKind::B, rest),
                    _ => return Err(err(format!("expected a<i> or b<i>, got '{edge_tok}'"))),
                };
                let index: u32 =
                    idx_str.parse().map_err(|_| err(format!("bad edge index '{edge_tok}'")))?;
                let pos: u32 = toks[5].parse().map_err(|_| err(format!("bad position '{}'", toks[5])))?;
                let eps = parse_sign(toks[7], line)?;
                if boundary.insert(j, (BoundaryPoint { edge: EdgeRef { kind, index }, pos }, eps)).is_some() {
                    return Err(err(format!("duplicate BOUNDARY {j}")));
                }
            }
            "ARROW" => {
                if toks.len() < 5 || toks[2] != "EPS" || toks[4] != "Z" {
                    return Err(err("ARROW takes <j> EPS <sign> Z <word>".into()));
                }
                let j: usize = toks[1].parse().map_err(|_| err(format!("bad index '{}'", toks[1])))?;
                let eps = parse_sign(toks[3], line)?;
                let z = parse_word(&toks[5..], line)?;
                if arrows.insert(j, (ArrowRecord { z }, eps)).is_some() {
                    return Err(err(format!("duplicate ARROW {j}")));
                }
            }
            "CROSSING" => {
                if toks.len() != 9
                    || toks[1] != "OVER"
                    || toks[3] != "IN"
                    || toks[5] != "OUT"
                    || toks[7] != "SIGN"
                {
                    return Err(err("CROSSING takes OVER x<k> IN x<i> OUT x<j> SIGN <+|->".into()));
                }
                let gen = |tok: &str| -> Result<u32, ParseError> {
                    tok.strip_prefix('x')
                        .and_then(|s| s.parse::<u32>().ok())
                        .ok_or_else(|| ParseError { line, msg: format!("expected x<i>, got '{tok}'") })
                };
                crossings.push(Crossing {
                    over: gen(toks[2])?,
                    inc: gen(toks[4])?,
                    out: gen(toks[6])?,
                    sign: parse_sign(toks[8], line)?,
                });
            }
            "IDENT" => {
                if toks.len() != 3 {
                    return Err(err("IDENT takes x<i> x<j>".into()));
                }
                let gen = |tok: &str| -> Result<u32, ParseError> {
                    tok.strip_prefix('x')
                        .and_then(|s| s.parse::<u32>().ok())
                        .ok_or_else(|| ParseError { line, msg: format!("expected x<i>, got '{tok}'") })
                };
                let (a, b) = (gen(toks[1])?, gen(toks[2])?);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                idents.push((a, b));
            }
            other => return Err(err(format!("unknown keyword '{other}'"))),
        }
    }

    let (orient, genus) = surface.ok_or(ParseError { line: 0, msg: "missing SURFACE".into() })?;
    let (r, t, n) = counts.ok_or(ParseError { line: 0, msg: "missing COUNTS".into() })?;
    if boundary.len() != t {
        return Err(ParseError { line: 0, msg: format!("expected {} BOUNDARY records, got {}", t, boundary.len()) });
    }
    if arrows.len() != n {
        return Err(ParseError { line: 0, msg: format!("expected {} ARROW records, got {}", n, arrows.len()) });
    }
    for j in 1..=t {
        if !boundary.contains_key(&j) {
            return Err(ParseError { line: 0, msg: format!("missing BOUNDARY {j}") });
        }
    }
    for j in 1..=n {
        if !arrows.contains_key(&j) {
            return Err(ParseError { line: 0, msg: format!("missing ARROW {j}") });
        }
    }
    let mut eps = vec![0i8; 2 * t + 2 * n];
    let mut bpoints = Vec::with_capacity(t);
    for j in 1..=t {
        let (bp, e) = boundary.remove(&j).unwrap();
        eps[j - 1] = e;
        eps[t + j - 1] = -e;
        bpoints.push(bp);
    }
    let mut arecs = Vec::with_capacity(n);
    for j in 1..=n {
        let (ar, e) = arrows.remove(&j).unwrap();
        eps[2 * t + j - 1] = e;
        eps[2 * t + n + j - 1] = -e;
        arecs.push(ar);
    }

    let d = ArrowDiagram {
        seifert: SeifertData { base_orientable: orient, genus, gamma, delta, fibers },
        r,
        boundary: bpoints,
        arrows: arecs,
        fiber_words,
        eps,
        crossings,
        idents,
    };
    // Index-range errors are parse errors when coming from a file.
    for viol in d.validate() {
        if viol.invariant == "index out of range" {
            return Err(ParseError { line: 0, msg: viol.to_string() });
        }
    }
    Ok(d)
}

/// Serializes back into the text format accepted by [`parse_diagram`].
pub fn serialize_diagram(d: &ArrowDiagram) -> String {
    let mut out = String::new();
    let s = &d.seifert;
    out.push_str(&format!("SURFACE {} {}\n", if s.base_orientable { "O" } else { "N" }, s.genus));
    if s.genus > 0 {
        let fmt_sign = |x: i8| if x >= 0 { "+1" } else { "-1" };
        let mut line = String::from("SIGNS gamma");
        for &gmm in &s.gamma {
            line.push(' ');
            line.push_str(fmt_sign(gmm));
        }
        if !s.delta.is_empty() {
            line.push_str(" delta");
            for &dl in &s.delta {
                line.push(' ');
                line.push_str(fmt_sign(dl));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    for (j, &(alpha, beta)) in s.fibers.iter().enumerate() {
        out.push_str(&format!("FIBER {alpha} {beta} Y {}\n", word_to_string(&d.fiber_words[j])));
    }
    out.push_str(&format!("COUNTS r {} t {} n {}\n", d.r, d.t(), d.n()));
    for (j, b) in d.boundary.iter().enumerate() {
        out.push_str(&format!(
            "BOUNDARY {} EDGE {} POS {} EPS {}\n",
            j + 1,
            b.edge,
            b.pos,
            if d.eps_of(j + 1) == 1 { "+1" } else { "-1" }
        ));
    }
    for (j, a) in d.arrows.iter().enumerate() {
        out.push_str(&format!(
            "ARROW {} EPS {} Z {}\n",
            j + 1,
            if d.eps_of(2 * d.t() + j + 1) == 1 { "+1" } else { "-1" },
            word_to_string(&a.z)
        ));
    }
    for c in &d.crossings {
        out.push_str(&format!(
            "CROSSING OVER x{} IN x{} OUT x{} SIGN {}\n",
            c.over,
            c.inc,
            c.out,
            if c.sign == 1 { "+" } else { "-" }
        ));
    }
    for &(a, b) in &d.idents {
        out.push_str(&format!("IDENT x{a} x{b}\n"));
    }
    out
}
