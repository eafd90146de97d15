//! Local generalized Reidemeister rewrites on arrow diagrams, canonical
//! renumbering, and the before/after fixture corpus for the global moves.
//!
//! Rewrites run on an arc model in which every physical arc is a single node
//! with a start and an end anchor; emitting a diagram reassigns generator
//! indices by the slot conventions and recreates IDENT records for arcs
//! carrying two slots.

use std::collections::BTreeMap;
use std::path::Path;

use crate::diagram::{
    parse_diagram, ArrowDiagram, BoundaryPoint, Crossing, EdgeRef, RawWord, SeifertData,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    R1Plus,
    R1Minus,
    R2,
    R3,
    R4,
    R5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

/// Where a move applies. Generator indices refer to the diagram the move is
/// applied to; crossing and arrow indices are 0-based record positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Site {
    /// An arc, named by any of its generator indices.
    Arc { gen: u32 },
    /// An arc plus the path word for inserted arrows.
    ArcWithPath { gen: u32, z: RawWord },
    /// Over/under strands for R2 forward.
    Strands { over: u32, under: u32, sign: i8 },
    /// One crossing record (R1 backward).
    Crossing { index: usize },
    /// Two crossing records (R2 backward).
    CrossingPair { first: usize, second: usize },
    /// Three crossing records (R3): the u-over-w, v-over-w (or mirrored) and
    /// u-over-v crossings.
    CrossingTriple { uw: usize, vw: usize, uv: usize },
    /// Two arrow records (R4/R5 backward).
    ArrowPair { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSpec {
    pub kind: MoveKind,
    pub dir: Dir,
    pub site: Site,
}

#[derive(Debug, thiserror::Error)]
pub enum MoveError {
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("diagram invalid before move: {0}")]
    InvalidInput(String),
    #[error("move produced an invalid diagram: {0}")]
    InvalidResult(String),
}

// ---------------------------------------------------------------------------
// Arc model
// ---------------------------------------------------------------------------

type ArcId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    None,
    BoundaryPlus(usize),
    BoundaryMinus(usize),
    ArrowPre(usize),
    ArrowPost(usize),
    CrossIn(usize),
    CrossOut(usize),
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    start: Anchor,
    end: Anchor,
    alive: bool,
}

#[derive(Debug, Clone)]
struct CrossingM {
    over: ArcId,
    inc: ArcId,
    out: ArcId,
    sign: i8,
}

#[derive(Debug, Clone)]
struct ArcModel {
    seifert: SeifertData,
    boundary: Vec<(EdgeRef, u32, i8)>, // edge, pos, eps of the +slot
    arrows: Vec<Vec<(ArcId, i8)>>,     // z words
    fiber_words: Vec<Vec<(ArcId, i8)>>,
    crossings: Vec<CrossingM>,
    arcs: Vec<Arc>,
}

impl ArcModel {
    /// Builds the model plus the map from 1-based generator indices of `d`
    /// to arcs.
    fn from_diagram_with_map(d: &ArrowDiagram) -> Result<(ArcModel, Vec<ArcId>), MoveError> {
        let model = ArcModel::from_diagram(d)?;
        // Reconstruct the same union the constructor used.
        let r = d.r as usize;
        let mut rep: Vec<usize> = (0..r).collect();
        for &(a, b) in &d.idents {
            let (a, b) = ((a - 1) as usize, (b - 1) as usize);
            let (oa, ob) = (rep[a], rep[b]);
            let ra = oa.min(ob);
            for x in rep.iter_mut() {
                if *x == oa || *x == ob {
                    *x = ra;
                }
            }
        }
        let mut arc_of: Vec<Option<ArcId>> = vec![None; r];
        let mut count = 0;
        for i in 0..r {
            let root = rep[i];
            if arc_of[root].is_none() {
                arc_of[root] = Some(count);
                count += 1;
            }
            arc_of[i] = arc_of[root];
        }
        Ok((model, arc_of.into_iter().map(|x| x.unwrap()).collect()))
    }

    fn from_diagram(d: &ArrowDiagram) -> Result<ArcModel, MoveError> {
        let violations = d.validate();
        let only_degenerate = violations.iter().all(|v| v.invariant.contains('\u{3a9}'));
        if !violations.is_empty() && !only_degenerate {
            return Err(MoveError::InvalidInput(
                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            ));
        }
        let r = d.r as usize;
        // Union generators along IDENT records.
        let mut rep: Vec<usize> = (0..r).collect();
        for &(a, b) in &d.idents {
            let (a, b) = ((a - 1) as usize, (b - 1) as usize);
            let ra = rep[a].min(rep[b]);
            let (oa, ob) = (rep[a], rep[b]);
            for x in rep.iter_mut() {
                if *x == oa || *x == ob {
                    *x = ra;
                }
            }
        }
        let mut arc_of: Vec<Option<ArcId>> = vec![None; r];
        let mut arcs: Vec<Arc> = Vec::new();
        for i in 0..r {
            let root = rep[i];
            if arc_of[root].is_none() {
                arc_of[root] = Some(arcs.len());
                arcs.push(Arc { start: Anchor::None, end: Anchor::None, alive: true });
            }
            arc_of[i] = arc_of[root];
        }
        let arc_of = |i: u32| arc_of[(i - 1) as usize].unwrap();

        let (t, n) = (d.t(), d.n());
        let mut model = ArcModel {
            seifert: d.seifert.clone(),
            boundary: d
                .boundary
                .iter()
                .enumerate()
                .map(|(j, b)| (b.edge, b.pos, d.eps_of(j + 1)))
                .collect(),
            arrows: d
                .arrows
                .iter()
                .map(|a| a.z.iter().map(|&(i, e)| (arc_of(i), e)).collect())
                .collect(),
            fiber_words: d
                .fiber_words
                .iter()
                .map(|y| y.iter().map(|&(i, e)| (arc_of(i), e)).collect())
                .collect(),
            crossings: d
                .crossings
                .iter()
                .map(|c| CrossingM {
                    over: arc_of(c.over),
                    inc: arc_of(c.inc),
                    out: arc_of(c.out),
                    sign: c.sign,
                })
                .collect(),
            arcs,
        };
        let set = |arc: ArcId, anchor: Anchor, model: &mut ArcModel, starts: bool| -> Result<(), MoveError> {
            let slot = if starts { &mut model.arcs[arc].start } else { &mut model.arcs[arc].end };
            if *slot != Anchor::None {
                return Err(MoveError::InvalidInput(format!(
                    "arc has two {} anchors",
                    if starts { "start" } else { "end" }
                )));
            }
            *slot = anchor;
            Ok(())
        };
        for j in 1..=t {
            let eps = d.eps_of(j);
            set(arc_of(d.gen_plus(j)), Anchor::BoundaryPlus(j - 1), &mut model, eps == 1)?;
            let eps = d.eps_of(t + j);
            set(arc_of(d.gen_minus(j)), Anchor::BoundaryMinus(j - 1), &mut model, eps == 1)?;
        }
        for j in 1..=n {
            let eps = d.eps_of(2 * t + j);
            set(arc_of(d.gen_pre_arrow(j)), Anchor::ArrowPre(j - 1), &mut model, eps == 1)?;
            let eps = d.eps_of(2 * t + n + j);
            set(arc_of(d.gen_post_arrow(j)), Anchor::ArrowPost(j - 1), &mut model, eps == 1)?;
        }
        for (ci, c) in model.crossings.clone().iter().enumerate() {
            set(c.inc, Anchor::CrossIn(ci), &mut model, false)?;
            set(c.out, Anchor::CrossOut(ci), &mut model, true)?;
        }
        Ok(model)
    }

    fn live_arcs(&self) -> Vec<ArcId> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].alive).collect()
    }

    fn arc_with_anchor(&self, anchor: Anchor) -> Option<ArcId> {
        self.live_arcs()
            .into_iter()
            .find(|&a| self.arcs[a].start == anchor || self.arcs[a].end == anchor)
    }

    fn new_arc(&mut self, start: Anchor, end: Anchor) -> ArcId {
        self.arcs.push(Arc { start, end, alive: true });
        self.arcs.len() - 1
    }

    /// Moves every reference from `from` to `to` (crossings and words).
    fn replace_refs(&mut self, from: ArcId, to: ArcId) {
        for c in &mut self.crossings {
            if c.over == from {
                c.over = to;
            }
            if c.inc == from {
                c.inc = to;
            }
            if c.out == from {
                c.out = to;
            }
        }
        for w in self.arrows.iter_mut().chain(self.fiber_words.iter_mut()) {
            for l in w.iter_mut() {
                if l.0 == from {
                    l.0 = to;
                }
            }
        }
    }

    fn ref_count(&self, arc: ArcId) -> usize {
        let mut count = 0;
        for c in &self.crossings {
            count += usize::from(c.over == arc);
            count += usize::from(c.inc == arc);
            count += usize::from(c.out == arc);
        }
        for w in self.arrows.iter().chain(self.fiber_words.iter()) {
            count += w.iter().filter(|l| l.0 == arc).count();
        }
        count
    }

    /// Removes a crossing record, renumbering crossing anchors above it.
    fn remove_crossing(&mut self, ci: usize) {
        self.crossings.remove(ci);
        for arc in &mut self.arcs {
            for anchor in [&mut arc.start, &mut arc.end] {
                match anchor {
                    Anchor::CrossIn(x) | Anchor::CrossOut(x) if *x > ci => *x -= 1,
                    Anchor::CrossIn(x) | Anchor::CrossOut(x) if *x == ci => {
                        *anchor = Anchor::None;
                    }
                    _ => {}
                }
            }
        }
    }

    /// Removes an arrow record, renumbering arrow anchors above it.
    fn remove_arrow(&mut self, ai: usize) {
        self.arrows.remove(ai);
        for arc in &mut self.arcs {
            for anchor in [&mut arc.start, &mut arc.end] {
                match anchor {
                    Anchor::ArrowPre(x) | Anchor::ArrowPost(x) if *x > ai => *x -= 1,
                    Anchor::ArrowPre(x) | Anchor::ArrowPost(x) if *x == ai => {
                        *anchor = Anchor::None;
                    }
                    _ => {}
                }
            }
        }
    }

    /// Emits a diagram with canonical generator numbering.
    fn to_diagram(&self) -> ArrowDiagram {
        let t = self.boundary.len();
        let n = self.arrows.len();
        // Slot index (1-based) owned by each arc.
        let mut slots_of: BTreeMap<ArcId, Vec<usize>> = BTreeMap::new();
        let mut eps = vec![0i8; 2 * t + 2 * n];
        let record = |this: &ArcModel,
                          anchor: Anchor,
                          slot: usize,
                          slots_of: &mut BTreeMap<ArcId, Vec<usize>>,
                          eps: &mut Vec<i8>| {
            let arc = this.arc_with_anchor(anchor).expect("slot anchor must be attached");
            slots_of.entry(arc).or_default().push(slot);
            eps[slot - 1] = if this.arcs[arc].start == anchor { 1 } else { -1 };
        };
        for j in 1..=t {
            record(self, Anchor::BoundaryPlus(j - 1), j, &mut slots_of, &mut eps);
            record(self, Anchor::BoundaryMinus(j - 1), t + j, &mut slots_of, &mut eps);
        }
        for j in 1..=n {
            record(self, Anchor::ArrowPre(j - 1), 2 * t + j, &mut slots_of, &mut eps);
            record(self, Anchor::ArrowPost(j - 1), 2 * t + n + j, &mut slots_of, &mut eps);
        }
        // Primary index per arc; extra indices for slotless arcs follow
        // first occurrence over crossings, then fiber words, then z words.
        let mut primary: BTreeMap<ArcId, u32> = BTreeMap::new();
        let mut idents: Vec<(u32, u32)> = Vec::new();
        for (&arc, slots) in &slots_of {
            let mut s = slots.clone();
            s.sort_unstable();
            primary.insert(arc, s[0] as u32);
            if s.len() == 2 {
                idents.push((s[0] as u32, s[1] as u32));
            }
        }
        let mut next = (2 * t + 2 * n) as u32;
        let assign = |arc: ArcId, primary: &mut BTreeMap<ArcId, u32>, next: &mut u32| {
            if self.arcs[arc].alive && !primary.contains_key(&arc) {
                *next += 1;
                primary.insert(arc, *next);
            }
        };
        for c in &self.crossings {
            assign(c.over, &mut primary, &mut next);
            assign(c.inc, &mut primary, &mut next);
            assign(c.out, &mut primary, &mut next);
        }
        for w in self.fiber_words.iter().chain(self.arrows.iter()) {
            for &(a, _) in w {
                assign(a, &mut primary, &mut next);
            }
        }
        for arc in self.live_arcs() {
            assign(arc, &mut primary, &mut next);
        }
        idents.sort_unstable();

        ArrowDiagram {
            seifert: self.seifert.clone(),
            r: next,
            boundary: self
                .boundary
                .iter()
                .map(|&(edge, pos, _)| BoundaryPoint { edge, pos })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|z| crate::diagram::ArrowRecord {
                    z: z.iter().map(|&(a, e)| (primary[&a], e)).collect(),
                })
                .collect(),
            fiber_words: self
                .fiber_words
                .iter()
                .map(|y| y.iter().map(|&(a, e)| (primary[&a], e)).collect())
                .collect(),
            eps,
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    over: primary[&c.over],
                    inc: primary[&c.inc],
                    out: primary[&c.out],
                    sign: c.sign,
                })
                .collect(),
            idents,
        }
    }
}

/// Renumbers generators canonically: boundary slots, arrow slots, then the
/// remaining arcs in first-occurrence order over the crossing list.
pub fn canonical_renumber(d: &ArrowDiagram) -> Result<ArrowDiagram, MoveError> {
    Ok(ArcModel::from_diagram(d)?.to_diagram())
}

/// Structural equality after canonical renumbering.
pub fn diagrams_equivalent(a: &ArrowDiagram, b: &ArrowDiagram) -> Result<bool, MoveError> {
    Ok(canonical_renumber(a)? == canonical_renumber(b)?)
}

/// Applies one local move and renumbers canonically.
pub fn apply_local_move(d: &ArrowDiagram, m: &MoveSpec) -> Result<ArrowDiagram, MoveError> {
    let (mut model, gen_map) = ArcModel::from_diagram_with_map(d)?;
    let arc_for = |_model: &ArcModel, gen: u32| -> Result<ArcId, MoveError> {
        gen_map
            .get((gen - 1) as usize)
            .copied()
            .ok_or_else(|| MoveError::PatternMismatch(format!("x{gen} out of range")))
    };

    match (m.kind, m.dir, &m.site) {
        (MoveKind::R1Plus | MoveKind::R1Minus, Dir::Forward, Site::Arc { gen }) => {
            let sign = if m.kind == MoveKind::R1Plus { 1 } else { -1 };
            let a = arc_for(&model, *gen)?;
            let ci = model.crossings.len();
            if model.arcs[a].start == Anchor::None && model.arcs[a].end == Anchor::None {
                // A kinked free loop is cut exactly once.
                model.crossings.push(CrossingM { over: a, inc: a, out: a, sign });
                model.arcs[a].start = Anchor::CrossOut(ci);
                model.arcs[a].end = Anchor::CrossIn(ci);
            } else {
                let old_end = model.arcs[a].end;
                let b = model.new_arc(Anchor::CrossOut(ci), old_end);
                model.arcs[a].end = Anchor::CrossIn(ci);
                // The piece after the kink inherits the old terminal
                // crossing reference.
                if let Anchor::CrossIn(c2) = old_end {
                    model.crossings[c2].inc = b;
                }
                model.crossings.push(CrossingM { over: a, inc: a, out: b, sign });
            }
        }
        (MoveKind::R1Plus | MoveKind::R1Minus, Dir::Backward, Site::Crossing { index }) => {
            let ci = *index;
            let want = if m.kind == MoveKind::R1Plus { 1 } else { -1 };
            let c = model
                .crossings
                .get(ci)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            if c.sign != want {
                return Err(MoveError::PatternMismatch("kink sign mismatch".into()));
            }
            if c.over == c.inc && c.inc == c.out {
                model.remove_crossing(ci);
            } else if c.over == c.inc {
                let (keep, drop) = (c.inc, c.out);
                let drop_end = model.arcs[drop].end;
                model.remove_crossing(ci);
                model.arcs[keep].end = drop_end;
                if let Anchor::CrossIn(c2) = drop_end {
                    model.crossings[c2].inc = keep;
                }
                model.replace_refs(drop, keep);
                model.arcs[drop].alive = false;
            } else if c.over == c.out {
                let (keep, drop) = (c.inc, c.out);
                let drop_end = model.arcs[drop].end;
                model.remove_crossing(ci);
                model.arcs[keep].end = drop_end;
                if let Anchor::CrossIn(c2) = drop_end {
                    model.crossings[c2].inc = keep;
                }
                model.replace_refs(drop, keep);
                model.arcs[drop].alive = false;
            } else {
                return Err(MoveError::PatternMismatch("crossing is not a kink".into()));
            }
        }
        (MoveKind::R2, Dir::Forward, Site::Strands { over, under, sign }) => {
            let o = arc_for(&model, *over)?;
            let v = arc_for(&model, *under)?;
            let c1 = model.crossings.len();
            let c2 = c1 + 1;
            if model.arcs[v].start == Anchor::None && model.arcs[v].end == Anchor::None {
                let v1 = model.new_arc(Anchor::CrossOut(c1), Anchor::CrossIn(c2));
                model.arcs[v].start = Anchor::CrossOut(c2);
                model.arcs[v].end = Anchor::CrossIn(c1);
                model.crossings.push(CrossingM { over: o, inc: v, out: v1, sign: *sign });
                model.crossings.push(CrossingM { over: o, inc: v1, out: v, sign: -sign });
            } else {
                let old_end = model.arcs[v].end;
                let v1 = model.new_arc(Anchor::CrossOut(c1), Anchor::CrossIn(c2));
                let v2 = model.new_arc(Anchor::CrossOut(c2), old_end);
                model.arcs[v].end = Anchor::CrossIn(c1);
                if let Anchor::CrossIn(cx) = old_end {
                    model.crossings[cx].inc = v2;
                }
                model.crossings.push(CrossingM { over: o, inc: v, out: v1, sign: *sign });
                model.crossings.push(CrossingM { over: o, inc: v1, out: v2, sign: -sign });
            }
        }
        (MoveKind::R2, Dir::Backward, Site::CrossingPair { first, second }) => {
            let (i1, i2) = (*first, *second);
            let c1 = model
                .crossings
                .get(i1)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            let c2 = model
                .crossings
                .get(i2)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            if c1.over != c2.over || c1.sign != -c2.sign || c1.out != c2.inc {
                return Err(MoveError::PatternMismatch("not a cancelling pair".into()));
            }
            let mid = c1.out;
            if model.ref_count(mid) != 2 || mid == c1.inc || mid == c2.out {
                return Err(MoveError::PatternMismatch("middle arc is not clean".into()));
            }
            let head = c1.inc;
            let tail = c2.out;
            let (hi, lo) = (i1.max(i2), i1.min(i2));
            model.remove_crossing(hi);
            model.remove_crossing(lo);
            model.arcs[mid].alive = false;
            if head == tail {
                model.arcs[head].start = Anchor::None;
                model.arcs[head].end = Anchor::None;
            } else {
                let tail_end = model.arcs[tail].end;
                model.arcs[head].end = tail_end;
                if let Anchor::CrossIn(cx) = tail_end {
                    model.crossings[cx].inc = head;
                }
                // Slot anchors move with the merge.
                match tail_end {
                    Anchor::None | Anchor::CrossIn(_) | Anchor::CrossOut(_) => {}
                    _ => {}
                }
                model.replace_refs(tail, head);
                model.arcs[tail].alive = false;
            }
        }
        (MoveKind::R3, dir, Site::CrossingTriple { uw, vw, uv }) => {
            let cuw = model
                .crossings
                .get(*uw)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            let cvw = model
                .crossings
                .get(*vw)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            let cuv = model
                .crossings
                .get(*uv)
                .cloned()
                .ok_or_else(|| MoveError::PatternMismatch("no such crossing".into()))?;
            if cuw.sign != cuv.sign {
                return Err(MoveError::PatternMismatch("R3 needs equal u-over signs".into()));
            }
            match dir {
                Dir::Forward => {
                    // u over w, then v2 over w, with u over v (v1 -> v2).
                    if cuw.over != cuv.over
                        || cvw.over != cuv.out
                        || cuw.out != cvw.inc
                    {
                        return Err(MoveError::PatternMismatch("R3 forward pattern".into()));
                    }
                    let w2 = cuw.out;
                    if model.ref_count(w2) != 2 {
                        return Err(MoveError::PatternMismatch("sliding arc is not clean".into()));
                    }
                    let (w1, w3) = (cuw.inc, cvw.out);
                    let (xu, v1) = (cuw.over, cuv.inc);
                    let (s1, s2) = (cuw.sign, cvw.sign);
                    model.crossings[*uw] = CrossingM { over: v1, inc: w1, out: w2, sign: s2 };
                    model.crossings[*vw] = CrossingM { over: xu, inc: w2, out: w3, sign: s1 };
                    let _ = (w1, w3);
                }
                Dir::Backward => {
                    // v1 over w, then u over w, with u over v (v1 -> v2).
                    if cuw.over != cuv.over
                        || cvw.over != cuv.inc
                        || cvw.out != cuw.inc
                    {
                        return Err(MoveError::PatternMismatch("R3 backward pattern".into()));
                    }
                    let w2 = cvw.out;
                    if model.ref_count(w2) != 2 {
                        return Err(MoveError::PatternMismatch("sliding arc is not clean".into()));
                    }
                    let (w1, w3) = (cvw.inc, cuw.out);
                    let (xu, v2) = (cuw.over, cuv.out);
                    let (s1, s2) = (cuw.sign, cvw.sign);
                    model.crossings[*vw] = CrossingM { over: xu, inc: w1, out: w2, sign: s1 };
                    model.crossings[*uw] = CrossingM { over: v2, inc: w2, out: w3, sign: s2 };
                    let _ = (w1, w3);
                }
            }
        }
        (MoveKind::R4 | MoveKind::R5, Dir::Forward, Site::ArcWithPath { gen, z }) => {
            let u = arc_for(&model, *gen)?;
            let zw: Vec<(ArcId, i8)> = z
                .iter()
                .map(|&(i, e)| arc_for(&model, i).map(|a| (a, e)))
                .collect::<Result<_, _>>()?;
            let a1 = model.arrows.len();
            let a2 = a1 + 1;
            model.arrows.push(zw.clone());
            model.arrows.push(zw);
            // R4 joins the new arrows at their post slots, R5 at their pre
            // slots; either pair cancels.
            let (slot1, slot2, into1, from2) = if m.kind == MoveKind::R4 {
                (Anchor::ArrowPost(a1), Anchor::ArrowPost(a2), Anchor::ArrowPre(a1), Anchor::ArrowPre(a2))
            } else {
                (Anchor::ArrowPre(a1), Anchor::ArrowPre(a2), Anchor::ArrowPost(a1), Anchor::ArrowPost(a2))
            };
            if model.arcs[u].start == Anchor::None && model.arcs[u].end == Anchor::None {
                // Closed loop: two arcs after insertion.
                let _v = model.new_arc(slot1, slot2);
                model.arcs[u].end = into1;
                model.arcs[u].start = from2;
            } else {
                let old_end = model.arcs[u].end;
                let _v = model.new_arc(slot1, slot2);
                let w = model.new_arc(from2, old_end);
                model.arcs[u].end = into1;
                if let Anchor::CrossIn(cx) = old_end {
                    model.crossings[cx].inc = w;
                }
            }
        }
        (MoveKind::R4 | MoveKind::R5, Dir::Backward, Site::ArrowPair { first, second }) => {
            let (j1, j2) = (*first, *second);
            if j1 == j2 || j1.max(j2) >= model.arrows.len() {
                return Err(MoveError::PatternMismatch("bad arrow pair".into()));
            }
            if model.arrows[j1] != model.arrows[j2] {
                return Err(MoveError::PatternMismatch("arrow paths differ".into()));
            }
            let (shared1, shared2, outer1, outer2) = if m.kind == MoveKind::R4 {
                (Anchor::ArrowPost(j1), Anchor::ArrowPost(j2), Anchor::ArrowPre(j1), Anchor::ArrowPre(j2))
            } else {
                (Anchor::ArrowPre(j1), Anchor::ArrowPre(j2), Anchor::ArrowPost(j1), Anchor::ArrowPost(j2))
            };
            let v1 = model
                .arc_with_anchor(shared1)
                .ok_or_else(|| MoveError::PatternMismatch("missing interior arc".into()))?;
            let v2 = model
                .arc_with_anchor(shared2)
                .ok_or_else(|| MoveError::PatternMismatch("missing interior arc".into()))?;
            if v1 != v2 {
                return Err(MoveError::PatternMismatch("arrows are not adjacent".into()));
            }
            if model.ref_count(v1) != 0 {
                return Err(MoveError::PatternMismatch("interior arc is not clean".into()));
            }
            let u = model
                .arc_with_anchor(outer1)
                .ok_or_else(|| MoveError::PatternMismatch("missing outer arc".into()))?;
            let w = model
                .arc_with_anchor(outer2)
                .ok_or_else(|| MoveError::PatternMismatch("missing outer arc".into()))?;
            let (hi, lo) = (j1.max(j2), j1.min(j2));
            model.remove_arrow(hi);
            model.remove_arrow(lo);
            model.arcs[v1].alive = false;
            if u == w {
                model.arcs[u].start = Anchor::None;
                model.arcs[u].end = Anchor::None;
            } else {
                // u lost its end anchor (now None), w its start anchor: fuse.
                let w_end = model.arcs[w].end;
                model.arcs[u].end = w_end;
                if let Anchor::CrossIn(cx) = w_end {
                    model.crossings[cx].inc = u;
                }
                model.replace_refs(w, u);
                // A slot anchor on w's end must be re-owned by u; anchors are
                // matched by value, so nothing else to update.
                model.arcs[w].alive = false;
            }
        }
        _ => {
            return Err(MoveError::PatternMismatch(format!(
                "site {:?} does not fit {:?} {:?}",
                m.site, m.kind, m.dir
            )));
        }
    }

    let out = model.to_diagram();
    let violations = out.validate();
    if !violations.is_empty() {
        return Err(MoveError::InvalidResult(
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        ));
    }
    Ok(out)
}

/// Splits every overpass that starts and ends on the same boundary pair or
/// arrow with a kink, so the result validates cleanly.
pub fn normalize_degenerate(d: &ArrowDiagram) -> Result<ArrowDiagram, MoveError> {
    let violations = d.validate();
    if violations.iter().any(|v| !v.invariant.contains('\u{3a9}')) {
        return Err(MoveError::InvalidInput(
            "diagram has non-degeneracy violations".to_string(),
        ));
    }
    let mut current = d.clone();
    loop {
        // Objects: boundary pair or arrow owning each slot generator.
        let slot_object = |d: &ArrowDiagram, g: u32| -> Option<(u8, usize)> {
            let (t, n) = (d.t(), d.n());
            let g = g as usize;
            if g == 0 {
                None
            } else if g <= t {
                Some((0, g))
            } else if g <= 2 * t {
                Some((0, g - t))
            } else if g <= 2 * t + n {
                Some((1, g - 2 * t))
            } else if g <= 2 * t + 2 * n {
                Some((1, g - 2 * t - n))
            } else {
                None
            }
        };
        let degenerate = current.idents.iter().copied().find(|&(a, b)| {
            match (slot_object(&current, a), slot_object(&current, b)) {
                (Some(oa), Some(ob)) => oa == ob,
                _ => false,
            }
        });
        let Some((gen, _)) = degenerate else {
            return canonical_renumber(&current);
        };
        // Split with a kink; the ident pair then sits on distinct objects.
        let mut model = ArcModel::from_diagram(&current)?;
        let t = model.boundary.len();
        let n = model.arrows.len();
        let g = gen as usize;
        let anchor = if g <= t {
            Anchor::BoundaryPlus(g - 1)
        } else if g <= 2 * t {
            Anchor::BoundaryMinus(g - t - 1)
        } else if g <= 2 * t + n {
            Anchor::ArrowPre(g - 2 * t - 1)
        } else {
            Anchor::ArrowPost(g - 2 * t - n - 1)
        };
        let a = model
            .arc_with_anchor(anchor)
            .ok_or_else(|| MoveError::PatternMismatch("degenerate arc not found".into()))?;
        let ci = model.crossings.len();
        let old_end = model.arcs[a].end;
        let b = model.new_arc(Anchor::CrossOut(ci), old_end);
        model.arcs[a].end = Anchor::CrossIn(ci);
        if let Anchor::CrossIn(c2) = old_end {
            model.crossings[c2].inc = b;
        }
        model.crossings.push(CrossingM { over: a, inc: a, out: b, sign: 1 });
        current = model.to_diagram();
    }
}

/// A before/after pair for one of the global moves.
#[derive(Debug, Clone)]
pub struct FixturePair {
    pub name: String,
    pub before: ArrowDiagram,
    pub after: ArrowDiagram,
}

/// Loads `<name>.before` / `<name>.after` pairs from a directory.
pub fn load_fixture_pairs(dir: &Path) -> std::io::Result<Vec<FixturePair>> {
    let mut names: Vec<String> = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let file = entry.file_name().to_string_lossy().to_string();
        if let Some(stem) = file.strip_suffix(".before") {
            names.push(stem.to_string());
        }
    }
    names.sort();
    let mut out = Vec::new();
    for name in names {
        let before = std::fs::read_to_string(dir.join(format!("{name}.before")))?;
        let after = std::fs::read_to_string(dir.join(format!("{name}.after")))?;
        let parse = |text: &str, what: &str| {
            parse_diagram(text).map_err(|e| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{name}.{what}: {e}"))
            })
        };
        out.push(FixturePair { name: name.clone(), before: parse(&before, "before")?, after: parse(&after, "after")? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::homology::{group_of_matrix, abelianize_full};
    use crate::presentation::build_presentation;

    fn example61() -> ArrowDiagram {
        parse_diagram(include_str!("../fixtures/example61.diag")).unwrap()
    }

    fn h1_pair(d: &ArrowDiagram) -> (usize, Vec<num_bigint::BigInt>) {
        let p = build_presentation(d).unwrap();
        group_of_matrix(&abelianize_full(&p))
    }

    #[test]
    fn r1_forward_adds_kink() {
        let text = "SURFACE O 1\nSIGNS gamma +1 delta +1\nCOUNTS r 1 t 0 n 0\n";
        let d = parse_diagram(text).unwrap();
        let m = MoveSpec { kind: MoveKind::R1Plus, dir: Dir::Forward, site: Site::Arc { gen: 1 } };
        let e = apply_local_move(&d, &m).unwrap();
        assert_eq!(e.crossings.len(), 1);
        assert_eq!(e.components().nu, 1);
        assert_eq!(h1_pair(&d), h1_pair(&e));
        // Backward restores the original.
        let back = MoveSpec { kind: MoveKind::R1Plus, dir: Dir::Backward, site: Site::Crossing { index: 0 } };
        let f = apply_local_move(&e, &back).unwrap();
        assert!(diagrams_equivalent(&d, &f).unwrap());
    }

    #[test]
    fn r1_on_anchored_arc_of_example() {
        let d = example61();
        let m = MoveSpec { kind: MoveKind::R1Minus, dir: Dir::Forward, site: Site::Arc { gen: 9 } };
        let e = apply_local_move(&d, &m).unwrap();
        assert_eq!(e.r, 10);
        assert_eq!(e.crossings.len(), 4);
        assert_eq!(h1_pair(&d), h1_pair(&e));
        let back = MoveSpec {
            kind: MoveKind::R1Minus,
            dir: Dir::Backward,
            site: Site::Crossing { index: e.crossings.len() - 1 },
        };
        let f = apply_local_move(&e, &back).unwrap();
        assert!(diagrams_equivalent(&d, &f).unwrap());
    }

    #[test]
    fn r2_round_trip() {
        let d = example61();
        let m = MoveSpec {
            kind: MoveKind::R2,
            dir: Dir::Forward,
            site: Site::Strands { over: 7, under: 9, sign: 1 },
        };
        let e = apply_local_move(&d, &m).unwrap();
        assert_eq!(e.crossings.len(), 5);
        assert_eq!(e.components().nu, 1);
        assert_eq!(h1_pair(&d), h1_pair(&e));
        let back = MoveSpec {
            kind: MoveKind::R2,
            dir: Dir::Backward,
            site: Site::CrossingPair { first: 3, second: 4 },
        };
        let f = apply_local_move(&e, &back).unwrap();
        assert!(diagrams_equivalent(&d, &f).unwrap());
    }

    #[test]
    fn r4_insert_cancel_arrows() {
        let d = example61();
        let m = MoveSpec {
            kind: MoveKind::R4,
            dir: Dir::Forward,
            site: Site::ArcWithPath { gen: 9, z: vec![(1, 1)] },
        };
        let e = apply_local_move(&d, &m).unwrap();
        assert_eq!(e.n(), 4);
        assert_eq!(e.components().nu, 1);
        assert_eq!(h1_pair(&d), h1_pair(&e));
        let back = MoveSpec {
            kind: MoveKind::R4,
            dir: Dir::Backward,
            site: Site::ArrowPair { first: 2, second: 3 },
        };
        let f = apply_local_move(&e, &back).unwrap();
        assert!(diagrams_equivalent(&d, &f).unwrap());
    }

    #[test]
    fn r5_insert_cancel_arrows() {
        let d = example61();
        let m = MoveSpec {
            kind: MoveKind::R5,
            dir: Dir::Forward,
            site: Site::ArcWithPath { gen: 9, z: vec![] },
        };
        let e = apply_local_move(&d, &m).unwrap();
        assert_eq!(e.n(), 4);
        assert_eq!(h1_pair(&d), h1_pair(&e));
        let back = MoveSpec {
            kind: MoveKind::R5,
            dir: Dir::Backward,
            site: Site::ArrowPair { first: 2, second: 3 },
        };
        let f = apply_local_move(&e, &back).unwrap();
        assert!(diagrams_equivalent(&d, &f).unwrap());
    }

    #[test]
    fn normalize_degenerate_fixes_arrow_loop() {
        let text = concat!(
            "SURFACE O 1\n",
            "SIGNS gamma +1 delta +1\n",
            "COUNTS r 2 t 0 n 1\n",
            "ARROW 1 EPS -1 Z 1\n",
            "IDENT x1 x2\n",
        );
        let d = parse_diagram(text).unwrap();
        assert!(!d.validate().is_empty());
        let e = normalize_degenerate(&d).unwrap();
        assert!(e.validate().is_empty(), "{:?}", e.validate());
        // The kink resolves the double label: two slot arcs, one crossing.
        assert_eq!(e.r, 2);
        assert_eq!(e.crossings.len(), 1);
        assert!(e.idents.is_empty());
        assert_eq!(e.components().nu, 1);
        // Idempotent on valid diagrams.
        let f = normalize_degenerate(&e).unwrap();
        assert!(diagrams_equivalent(&e, &f).unwrap());
    }

    #[test]
    fn normalize_degenerate_boundary_to_boundary() {
        // One overpass running from a boundary pair straight back to it.
        let text = concat!(
            "SURFACE O 1\n",
            "SIGNS gamma +1 delta +1\n",
            "COUNTS r 2 t 1 n 0\n",
            "BOUNDARY 1 EDGE a1 POS 1 EPS +1\n",
            "IDENT x1 x2\n",
        );
        let d = parse_diagram(text).unwrap();
        assert!(d.validate().iter().any(|v| v.invariant.contains('\u{3a9}')));
        let e = normalize_degenerate(&d).unwrap();
        assert!(e.validate().is_empty(), "{:?}", e.validate());
        assert_eq!(e.crossings.len(), 1);
        // Twice-degenerate input: two kinks.
        let text2 = concat!(
            "SURFACE O 1\n",
            "SIGNS gamma +1 delta +1\n",
            "COUNTS r 4 t 2 n 0\n",
            "BOUNDARY 1 EDGE a1 POS 1 EPS +1\n",
            "BOUNDARY 2 EDGE a1 POS 2 EPS +1\n",
            "IDENT x1 x3\n",
            "IDENT x2 x4\n",
        );
        let d2 = parse_diagram(text2).unwrap();
        let e2 = normalize_degenerate(&d2).unwrap();
        assert!(e2.validate().is_empty(), "{:?}", e2.validate());
        assert_eq!(e2.crossings.len(), 2);
    }
}
