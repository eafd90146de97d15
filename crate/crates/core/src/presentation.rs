//! Link group presentations built from arrow diagrams, and the ambient
//! manifold group presentations.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagram::{ArrowDiagram, EdgeKind, RawWord, SeifertData, Violation};
use crate::word::{commutator, conjugate, Gen, Word};

/// Relator family tags. `W..L` follow the link presentation; manifold
/// presentations reuse `F`, `A`, `B`, `Cf` (fiber commutation) and `L`
/// (surgery).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    W,
    F,
    A,
    B,
    Cf,
    Cv,
    Cx,
    L,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::W => "W",
            Family::F => "F",
            Family::A => "A",
            Family::B => "B",
            Family::Cf => "CF",
            Family::Cv => "CV",
            Family::Cx => "CX",
            Family::L => "L",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub family: Family,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<Gen>,
    pub relators: Vec<Relator>,
}

impl GroupPresentation {
    pub fn family_count(&self, f: Family) -> usize {
        self.relators.iter().filter(|r| r.family == f).count()
    }

    /// Every relator must use declared generators only.
    pub fn check_closed(&self) -> bool {
        let gens: BTreeSet<Gen> = self.generators.iter().copied().collect();
        self.relators.iter().all(|r| r.word.generators().is_subset(&gens))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PresentationError {
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidDiagram(Vec<Violation>),
}

fn raw_to_word(w: &RawWord) -> Word {
    Word::from_runs(w.iter().map(|&(i, e)| (Gen::X(i), e as i64)))
}

/// Product of commutators `[a_1,b_1]..[a_j,b_j]`.
fn commutator_prefix(j: usize) -> Word {
    let mut w = Word::one();
    for i in 1..=j {
        w.extend_word(&commutator(
            &Word::letter(Gen::A(i as u32), 1),
            &Word::letter(Gen::B(i as u32), 1),
        ));
    }
    w
}

/// Product `a_1^2 .. a_j^2` for the non-orientable polygon.
fn squares_prefix(j: usize) -> Word {
    let mut w = Word::one();
    for i in 1..=j {
        w.push(Gen::A(i as u32), 2);
    }
    w
}

/// Wirtinger relator of one crossing.
///
/// Sign `+` yields `x_in x_k x_out^-1 x_k^-1` and sign `-` its mirror
/// written as `x_k x_in x_k^-1 x_out^-1`; both say the incoming under-strand
/// is the over-conjugate of the outgoing one.
pub fn wirtinger_relator(over: u32, inc: u32, out: u32, sign: i8) -> Word {
    let (k, i, j) = (Gen::X(over), Gen::X(inc), Gen::X(out));
    if sign >= 0 {
        Word::from_runs([(i, 1), (k, 1), (j, -1), (k, -1)])
    } else {
        Word::from_runs([(k, 1), (i, 1), (k, -1), (j, -1)])
    }
}

/// One relator per crossing, in record order.
pub fn wirtinger_relations(d: &ArrowDiagram) -> Result<Vec<Word>, PresentationError> {
    let v = d.validate();
    if !v.is_empty() {
        return Err(PresentationError::InvalidDiagram(v));
    }
    Ok(d.crossings
        .iter()
        .map(|c| wirtinger_relator(c.over, c.inc, c.out, c.sign))
        .collect())
}

/// Equation `lhs = rhs` stored as the relator `lhs rhs^-1`.
fn equation(lhs: Word, rhs: Word) -> Word {
    lhs.concat(&rhs.inverse())
}

/// Boundary indices `+i` lying on the given edge, in index order.
fn points_on_edge(d: &ArrowDiagram, kind: EdgeKind, index: u32) -> Vec<usize> {
    (1..=d.t())
        .filter(|&i| {
            let b = &d.boundary[i - 1];
            b.edge.kind == kind && b.edge.index == index
        })
        .collect()
}

/// The full link group presentation of a validated diagram.
pub fn build_presentation(d: &ArrowDiagram) -> Result<GroupPresentation, PresentationError> {
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(PresentationError::InvalidDiagram(violations));
    }
    let s = &d.seifert;
    let g = s.genus as usize;
    let (t, n, k) = (d.t(), d.n(), d.k());

    let mut generators: Vec<Gen> = (1..=d.r).map(Gen::X).collect();
    if s.base_orientable {
        for i in 1..=g as u32 {
            generators.push(Gen::A(i));
            generators.push(Gen::B(i));
        }
    } else {
        for i in 1..=g as u32 {
            generators.push(Gen::A(i));
        }
    }
    generators.push(Gen::H);
    for j in 1..=k as u32 {
        generators.push(Gen::L(j));
    }

    let mut relators: Vec<Relator> = Vec::new();
    let mut push = |f: Family, w: Word| relators.push(Relator { family: f, word: w });

    // W: same-arc identifications first, then crossing relators.
    for &(i, j) in &d.idents {
        push(Family::W, Word::from_runs([(Gen::X(i), 1), (Gen::X(j), -1)]));
    }
    for c in &d.crossings {
        push(Family::W, wirtinger_relator(c.over, c.inc, c.out, c.sign));
    }

    // F: polygon relation.
    let mut f_word = if s.base_orientable { commutator_prefix(g) } else { squares_prefix(g) };
    for (j, &(alpha, _)) in s.fibers.iter().enumerate() {
        f_word.push(Gen::L(j as u32 + 1), -(alpha as i64));
    }
    for j in 1..=n {
        let slot = 2 * t + j;
        f_word.push(Gen::X(d.gen_pre_arrow(j)), -(d.eps_of(slot) as i64));
    }
    push(Family::F, f_word);

    // A_j (and B_j for an orientable base): edge relations.
    for j in 1..=g {
        let prefix =
            if s.base_orientable { commutator_prefix(j - 1) } else { squares_prefix(j - 1) };
        let a = Gen::A(j as u32);
        let mut pts = Word::one();
        for i in points_on_edge(d, EdgeKind::A, j as u32) {
            pts.push(Gen::X(d.gen_plus(i)), d.eps_of(i) as i64);
        }
        let mut w = conjugate(&prefix.inverse(), &pts);
        w.push(a, 1);
        w.push(Gen::H, 1);
        w.push(a, -1);
        w.push(Gen::H, -(s.gamma[j - 1] as i64));
        push(Family::A, w);

        if s.base_orientable {
            let b = Gen::B(j as u32);
            let mut pts = Word::one();
            for i in points_on_edge(d, EdgeKind::B, j as u32) {
                pts.push(Gen::X(d.gen_plus(i)), d.eps_of(i) as i64);
            }
            let conj = Word::letter(a, -1).concat(&prefix.inverse());
            let mut w = conjugate(&conj, &pts);
            w.push(b, 1);
            w.push(Gen::H, 1);
            w.push(b, -1);
            w.push(Gen::H, -(s.delta[j - 1] as i64));
            push(Family::B, w);
        }
    }

    // CF_j: the fiber loop word commutes with the surgery filling.
    for j in 1..=k {
        let alpha = s.fibers[j - 1].0 as i64;
        let l = Word::letter(Gen::L(j as u32), -alpha);
        let conj = Word::letter(Gen::H, -1).concat(&raw_to_word(&d.fiber_words[j - 1]));
        push(Family::Cf, equation(l.clone(), conjugate(&conj, &l)));
    }

    // CV_j: arrow relations.
    for j in 1..=n {
        let pre_slot = 2 * t + j;
        let post_slot = 2 * t + n + j;
        let lhs = Word::letter(Gen::X(d.gen_post_arrow(j)), d.eps_of(post_slot) as i64);
        let conj = Word::letter(Gen::H, -1).concat(&raw_to_word(&d.arrows[j - 1].z));
        let arg = Word::letter(Gen::X(d.gen_pre_arrow(j)), -(d.eps_of(pre_slot) as i64));
        push(Family::Cv, equation(lhs, conjugate(&conj, &arg)));
    }

    // CX_j: boundary identifications, four orientable / two non-orientable forms.
    for j in 1..=t {
        let b = &d.boundary[j - 1];
        let i = b.edge.index as usize;
        let lhs = Word::letter(Gen::X(d.gen_minus(j)), d.eps_of(t + j) as i64);
        let xj = Gen::X(d.gen_plus(j));
        let eps_j = d.eps_of(j) as i64;
        let earlier_on_edge = |w: &mut Word| {
            for i2 in points_on_edge(d, b.edge.kind, b.edge.index) {
                if i2 < j {
                    w.push(Gen::X(d.gen_plus(i2)), d.eps_of(i2) as i64);
                }
            }
        };
        let word = if s.base_orientable {
            let sign = match b.edge.kind {
                EdgeKind::A => s.gamma[i - 1],
                EdgeKind::B => s.delta[i - 1],
            };
            match (b.edge.kind, sign) {
                (EdgeKind::A, 1) => {
                    let mut conj = commutator_prefix(i);
                    conj.push(Gen::B(i as u32), 1);
                    conj.extend_word(&commutator_prefix(i - 1).inverse());
                    equation(lhs, conjugate(&conj, &Word::letter(xj, -eps_j)))
                }
                (EdgeKind::B, 1) => {
                    let mut conj = commutator_prefix(i);
                    conj.push(Gen::A(i as u32), -1);
                    conj.extend_word(&commutator_prefix(i - 1).inverse());
                    equation(lhs, conjugate(&conj, &Word::letter(xj, -eps_j)))
                }
                (EdgeKind::A, _) => {
                    let mut conj = commutator_prefix(i);
                    conj.push(Gen::B(i as u32), 1);
                    conj.push(Gen::H, 1);
                    conj.extend_word(&commutator_prefix(i - 1).inverse());
                    earlier_on_edge(&mut conj);
                    equation(lhs, conjugate(&conj, &Word::letter(xj, eps_j)))
                }
                (EdgeKind::B, _) => {
                    let mut conj = commutator_prefix(i);
                    conj.push(Gen::H, 1);
                    conj.push(Gen::A(i as u32), -1);
                    conj.extend_word(&commutator_prefix(i - 1).inverse());
                    earlier_on_edge(&mut conj);
                    equation(lhs, conjugate(&conj, &Word::letter(xj, eps_j)))
                }
            }
        } else {
            // Non-orientable base: the gamma = +1 variant keeps the trailing
            // squares product uninverted, as displayed.
            if s.gamma[i - 1] == 1 {
                let mut conj = squares_prefix(i - 1);
                conj.push(Gen::A(i as u32), 1);
                conj.extend_word(&squares_prefix(i - 1));
                equation(lhs, conjugate(&conj, &Word::letter(xj, eps_j)))
            } else {
                let mut conj = squares_prefix(i - 1);
                conj.push(Gen::A(i as u32), 1);
                conj.push(Gen::H, 1);
                conj.extend_word(&squares_prefix(i - 1).inverse());
                earlier_on_edge(&mut conj);
                equation(lhs, conjugate(&conj, &Word::letter(xj, -eps_j)))
            }
        };
        push(Family::Cx, word);
    }

    // L_j: surgery relations.
    for j in 1..=k {
        let beta = s.fibers[j - 1].1 as i64;
        let lhs = Word::letter(Gen::L(j as u32), beta);
        let rhs = raw_to_word(&d.fiber_words[j - 1]).inverse().concat(&Word::letter(Gen::H, 1));
        push(Family::L, equation(lhs, rhs));
    }

    Ok(GroupPresentation { generators, relators })
}

/// The ambient manifold group on generators `a_i, (b_i,) q_j, h`.
pub fn seifert_group(s: &SeifertData) -> GroupPresentation {
    let g = s.genus as usize;
    let k = s.k();
    let mut generators: Vec<Gen> = Vec::new();
    for i in 1..=g as u32 {
        generators.push(Gen::A(i));
        if s.base_orientable {
            generators.push(Gen::B(i));
        }
    }
    for j in 1..=k as u32 {
        generators.push(Gen::Q(j));
    }
    generators.push(Gen::H);

    let mut relators = Vec::new();
    let mut surface = if s.base_orientable { commutator_prefix(g) } else { squares_prefix(g) };
    for j in 1..=k as u32 {
        surface.push(Gen::Q(j), 1);
    }
    relators.push(Relator { family: Family::F, word: surface });
    for i in 1..=g {
        let a = Gen::A(i as u32);
        let mut w = Word::from_runs([(a, 1), (Gen::H, 1), (a, -1)]);
        w.push(Gen::H, -(s.gamma[i - 1] as i64));
        relators.push(Relator { family: Family::A, word: w });
        if s.base_orientable {
            let b = Gen::B(i as u32);
            let mut w = Word::from_runs([(b, 1), (Gen::H, 1), (b, -1)]);
            w.push(Gen::H, -(s.delta[i - 1] as i64));
            relators.push(Relator { family: Family::B, word: w });
        }
    }
    for (j, &(alpha, beta)) in s.fibers.iter().enumerate() {
        let q = Gen::Q(j as u32 + 1);
        relators.push(Relator {
            family: Family::Cf,
            word: commutator(&Word::letter(q, 1), &Word::letter(Gen::H, 1)),
        });
        relators.push(Relator {
            family: Family::L,
            word: Word::from_runs([(q, beta as i64), (Gen::H, alpha as i64)]),
        });
    }
    GroupPresentation { generators, relators }
}

/// Eliminates generators defined by a relator in which they occur exactly
/// once with exponent ±1. Presents the same group.
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> GroupPresentation {
    let mut gens = p.generators.clone();
    let mut rels: Vec<Relator> = p.relators.clone();
    let mut steps = 0;
    'outer: while steps < budget {
        for ri in 0..rels.len() {
            let word = &rels[ri].word;
            let candidate = word.runs().iter().enumerate().find_map(|(pos, &(g, e))| {
                if e.abs() == 1 && word.occurrences(g) == 1 {
                    Some((pos, g, e))
                } else {
                    None
                }
            });
            if let Some((pos, g, e)) = candidate {
                // Rotate so the solitary letter leads: g^e v = 1, so g = v^-e.
                let rotated = word.rotate(pos);
                let mut v = Word::one();
                for &(h, f) in &rotated.runs()[1..] {
                    v.push(h, f);
                }
                let replacement = v.inverse().pow(e);
                rels.remove(ri);
                for rel in &mut rels {
                    rel.word = rel.word.substitute(g, &replacement);
                }
                rels.retain(|rel| !rel.word.is_empty());
                gens.retain(|&h| h != g);
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    GroupPresentation { generators: gens, relators: rels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    pub(crate) fn example61() -> ArrowDiagram {
        parse_diagram(include_str!("../fixtures/example61.diag")).unwrap()
    }

    fn find_words(p: &GroupPresentation, fam: Family) -> Vec<String> {
        p.relators.iter().filter(|r| r.family == fam).map(|r| r.word.to_string()).collect()
    }

    #[test]
    fn wirtinger_words_match_worked_example() {
        let d = example61();
        let w = wirtinger_relations(&d).unwrap();
        let strs: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, vec!["x9 x7 x3^-1 x7^-1", "x7 x3 x8^-1 x3^-1", "x3 x4 x3^-1 x9^-1"]);
    }

    #[test]
    fn example61_presentation_relators() {
        let d = example61();
        let p = build_presentation(&d).unwrap();
        assert!(p.check_closed());
        assert_eq!(p.generators.len(), 13); // x1..x9, a1, b1, h, l1

        // Family counts: s = crossings + idents.
        assert_eq!(p.family_count(Family::W), 5);
        assert_eq!(p.family_count(Family::F), 1);
        assert_eq!(p.family_count(Family::A), 1);
        assert_eq!(p.family_count(Family::B), 1);
        assert_eq!(p.family_count(Family::Cf), 1);
        assert_eq!(p.family_count(Family::Cv), 2);
        assert_eq!(p.family_count(Family::Cx), 2);
        assert_eq!(p.family_count(Family::L), 1);

        assert_eq!(
            find_words(&p, Family::W),
            vec![
                "x1 x5^-1",
                "x2 x6^-1",
                "x9 x7 x3^-1 x7^-1",
                "x7 x3 x8^-1 x3^-1",
                "x3 x4 x3^-1 x9^-1"
            ]
        );
        // F: a b a^-1 b^-1 l^-2 x5 x6^-1
        assert_eq!(
            find_words(&p, Family::F),
            vec!["a1 b1 a1^-1 b1^-1 l1^-2 x5 x6^-1"]
        );
        // A1: x1 x2^-1 a h a^-1 h^-1 ; B1: b h b^-1 h
        assert_eq!(find_words(&p, Family::A), vec!["x1 x2^-1 a1 h a1^-1 h^-1"]);
        assert_eq!(find_words(&p, Family::B), vec!["b1 h b1^-1 h"]);
        // CF1: l^-2 (h^-1 y l^-2 y^-1 h)^-1
        assert_eq!(
            find_words(&p, Family::Cf),
            vec!["l1^-2 h^-1 x7 x3^-1 l1^2 x3 x7^-1 h"]
        );
        // CV1: x7 = h^-1 x5 h ; CV2: x8^-1 = h^-1 x1 x6^-1 x1^-1 h
        assert_eq!(
            find_words(&p, Family::Cv),
            vec!["x7 h^-1 x5^-1 h", "x8^-1 h^-1 x1 x6 x1^-1 h"]
        );
        // CX1: x3^-1 = a b a^-1 x1^-1 a b^-1 a^-1 ; CX2: x4 = a b a^-1 x2 a b^-1 a^-1
        assert_eq!(
            find_words(&p, Family::Cx),
            vec![
                "x3^-1 a1 b1 a1^-1 x1 a1 b1^-1 a1^-1",
                "x4 a1 b1 a1^-1 x2^-1 a1 b1^-1 a1^-1"
            ]
        );
        // L1: l = x3 x7^-1 h, stored as l h^-1 x7 x3^-1.
        assert_eq!(find_words(&p, Family::L), vec!["l1 h^-1 x7 x3^-1"]);
    }

    #[test]
    fn seifert_group_example61_manifold() {
        let d = example61();
        let p = seifert_group(&d.seifert);
        let words: Vec<String> = p.relators.iter().map(|r| r.word.to_string()).collect();
        assert_eq!(
            words,
            vec![
                "a1 b1 a1^-1 b1^-1 q1",
                "a1 h a1^-1 h^-1",
                "b1 h b1^-1 h",
                "q1 h q1^-1 h^-1",
                "q1 h^2"
            ]
        );
    }

    #[test]
    fn seifert_group_degenerate_and_nonorientable() {
        let s = SeifertData {
            base_orientable: true,
            genus: 0,
            gamma: vec![],
            delta: vec![],
            fibers: vec![],
        };
        let p = seifert_group(&s);
        assert_eq!(p.generators, vec![Gen::H]);
        assert_eq!(p.relators.len(), 1);
        assert!(p.relators[0].word.is_empty());

        let s = SeifertData {
            base_orientable: false,
            genus: 2,
            gamma: vec![1, 1],
            delta: vec![],
            fibers: vec![(1, 0)],
        };
        let p = seifert_group(&s);
        assert_eq!(
            p.relators[0].word.to_string(),
            "a1^2 a2^2 q1"
        );
    }

    #[test]
    fn tietze_eliminates_chains() {
        // x1 = x2, x2 = x3 both eliminated within budget 2.
        let p = GroupPresentation {
            generators: vec![Gen::X(1), Gen::X(2), Gen::X(3)],
            relators: vec![
                Relator { family: Family::W, word: Word::from_runs([(Gen::X(1), 1), (Gen::X(2), -1)]) },
                Relator { family: Family::W, word: Word::from_runs([(Gen::X(2), 1), (Gen::X(3), -1)]) },
            ],
        };
        let q = tietze_simplify(&p, 2);
        assert_eq!(q.generators.len(), 1);
        assert!(q.relators.is_empty());
    }

    #[test]
    fn tietze_fixed_point() {
        let p = GroupPresentation {
            generators: vec![Gen::X(1)],
            relators: vec![Relator { family: Family::W, word: Word::letter(Gen::X(1), 2) }],
        };
        let q = tietze_simplify(&p, 10);
        assert_eq!(q, p);
    }

    #[test]
    fn conjugation_example() {
        // Wirtinger relation rewritten via the inner automorphism.
        let w = wirtinger_relator(7, 9, 3, 1);
        let direct = equation(
            Word::letter(Gen::X(9), 1),
            conjugate(&Word::letter(Gen::X(7), 1), &Word::letter(Gen::X(3), 1)),
        );
        assert_eq!(w, direct);
    }
}
