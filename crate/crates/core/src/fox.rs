//! Fox differential calculus on free-group words and the Alexander matrix
//! over the abelianized group ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::homology::{AbelianGroup, HImage};
use crate::presentation::GroupPresentation;
use crate::ring::{Cyclo, LaurentPoly};
use crate::twisted::{Character, Splitting};
use crate::word::{Gen, Word};

/// Formal Z-linear combination of free-group words.
pub type GroupRing = BTreeMap<Word, BigInt>;

fn add_term(e: &mut GroupRing, w: Word, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let entry = e.entry(w.clone()).or_insert_with(BigInt::zero);
    *entry += c;
    if entry.is_zero() {
        e.remove(&w);
    }
}

/// The Fox derivative with the sign convention d(x^-1)/dx = -x^-1, which is
/// forced by the product rule applied to x x^-1 = 1.
pub fn fox_derivative(w: &Word, g: Gen) -> GroupRing {
    let mut result = GroupRing::new();
    let mut prefix = Word::one();
    for (h, s) in w.letters() {
        if h == g {
            if s > 0 {
                add_term(&mut result, prefix.clone(), BigInt::from(1));
            } else {
                let mut term = prefix.clone();
                term.push(h, -1);
                add_term(&mut result, term, BigInt::from(-1));
            }
        }
        prefix.push(h, s as i64);
    }
    result
}

/// Image of a word in H as (torsion coordinates, free coordinates).
pub fn project_word(
    w: &Word,
    h: &AbelianGroup,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut img = HImage::zero(h.torsion.len(), h.rank);
    for &(g, e) in w.runs() {
        let gi = h.images.get(&g).expect("generator without image");
        img.add_scaled(gi, &BigInt::from(e), &h.torsion);
    }
    (img.torsion, img.free)
}

/// Projection Z[F] -> Z[H] with H split as TorsH x G: a map from
/// (torsion element, free exponent vector) to the integer coefficient.
pub fn project_to_zh(
    e: &GroupRing,
    h: &AbelianGroup,
) -> BTreeMap<(Vec<BigInt>, Vec<BigInt>), BigInt> {
    let mut out: BTreeMap<(Vec<BigInt>, Vec<BigInt>), BigInt> = BTreeMap::new();
    for (w, c) in e {
        let key = project_word(w, h);
        let entry = out.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// sigma-twisted evaluation of a group ring element into C[G], as a Laurent
/// polynomial in rank(H) variables.
pub fn sigma_tilde(
    e: &GroupRing,
    h: &AbelianGroup,
    splitting: &Splitting,
    sigma: &Character,
) -> LaurentPoly {
    let m = sigma.conductor();
    let rank = h.rank;
    let mut out = LaurentPoly::zero(rank, m);
    for ((tors, free), c) in project_to_zh(e, h) {
        let tors = splitting.twist_torsion(&tors, &free);
        let root = sigma.eval(&tors);
        let coeff = root.scale(&num_rational::BigRational::from(c));
        let exps: Vec<i64> = free
            .iter()
            .map(|x| i64::try_from(x).expect("free exponent fits in i64"))
            .collect();
        out = out.add(&LaurentPoly::monomial(exps, coeff));
    }
    out
}

/// The Alexander matrix: Fox derivatives of every relator, projected through
/// sigma-tilde. Rows are padded with zero rows so rows >= columns.
pub fn alexander_matrix(
    p: &GroupPresentation,
    h: &AbelianGroup,
    splitting: &Splitting,
    sigma: &Character,
) -> Vec<Vec<LaurentPoly>> {
    let cols = p.generators.len();
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::new();
    for rel in &p.relators {
        let row: Vec<LaurentPoly> = p
            .generators
            .iter()
            .map(|&g| sigma_tilde(&fox_derivative(&rel.word, g), h, splitting, sigma))
            .collect();
        rows.push(row);
    }
    let m = sigma.conductor();
    while rows.len() < cols {
        rows.push(vec![LaurentPoly::zero(h.rank, m); cols]);
    }
    rows
}

/// Evaluates sigma on a torsion tuple directly (helper for tests and the
/// E_0 structural value).
pub fn sigma_value(sigma: &Character, tors: &[BigInt]) -> Cyclo {
    sigma.eval(tors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::conjugate;

    fn x(i: u32) -> Gen {
        Gen::X(i)
    }

    fn w(runs: &[(Gen, i64)]) -> Word {
        Word::from_runs(runs.iter().copied())
    }

    #[test]
    fn base_rules() {
        // d(xy)/dx = 1, d(xy)/dy = x
        let xy = w(&[(x(1), 1), (x(2), 1)]);
        let dx = fox_derivative(&xy, x(1));
        assert_eq!(dx, GroupRing::from([(Word::one(), BigInt::from(1))]));
        let dy = fox_derivative(&xy, x(2));
        assert_eq!(dy, GroupRing::from([(Word::letter(x(1), 1), BigInt::from(1))]));
    }

    #[test]
    fn inverse_rule_sign() {
        // d(x^-1)/dx = -x^-1
        let xinv = w(&[(x(1), -1)]);
        let d = fox_derivative(&xinv, x(1));
        assert_eq!(d, GroupRing::from([(Word::letter(x(1), -1), BigInt::from(-1))]));
    }

    #[test]
    fn wirtinger_derivative() {
        // d(x_i x_k x_j^-1 x_k^-1)/dx_k = x_i - x_i x_k x_j^-1 x_k^-1
        let r = w(&[(x(1), 1), (x(2), 1), (x(3), -1), (x(2), -1)]);
        let d = fox_derivative(&r, x(2));
        let expect = GroupRing::from([
            (Word::letter(x(1), 1), BigInt::from(1)),
            (r.clone(), BigInt::from(-1)),
        ]);
        assert_eq!(d, expect);
    }

    /// Fundamental identity: sum_j d(r)/dx_j (x_j - 1) = r - 1 in Z[F].
    pub(crate) fn check_fundamental_identity(r: &Word) -> bool {
        let mut acc = GroupRing::new();
        for g in r.generators() {
            for (wrd, c) in fox_derivative(r, g) {
                // (x_j - 1) on the right.
                add_term(&mut acc, wrd.concat(&Word::letter(g, 1)), c.clone());
                add_term(&mut acc, wrd, -c);
            }
        }
        let mut expect = GroupRing::new();
        add_term(&mut expect, r.clone(), BigInt::from(1));
        add_term(&mut expect, Word::one(), BigInt::from(-1));
        acc == expect
    }

    #[test]
    fn fundamental_identity_examples() {
        let words = [
            w(&[(x(1), 1), (x(2), 1), (x(3), -1), (x(2), -1)]),
            w(&[(x(1), -2), (x(2), 3), (x(1), 1)]),
            conjugate(&w(&[(x(1), 1), (x(2), 1)]), &w(&[(x(3), -1)])),
            Word::one(),
        ];
        for r in &words {
            assert!(check_fundamental_identity(r), "identity failed for {r}");
        }
    }

    #[test]
    fn zh_projection_collapses_words() {
        use crate::diagram::parse_diagram;
        use crate::homology::h1;
        use crate::presentation::build_presentation;

        let d = parse_diagram(include_str!("../fixtures/example61.diag")).unwrap();
        let p = build_presentation(&d).unwrap();
        let h = h1(&p, &d.components());

        // x1 x2 x1^-1 collapses to a single free term with coefficient 1.
        let mut e = GroupRing::new();
        add_term(&mut e, w(&[(x(1), 1), (x(2), 1), (x(1), -1)]), BigInt::from(1));
        let img = project_to_zh(&e, &h);
        assert_eq!(img.len(), 1);
        let ((tors, free), coeff) = img.iter().next().unwrap();
        assert!(tors.iter().all(|t| t == &BigInt::from(0)));
        assert_eq!(free.iter().map(|f| f.clone()).sum::<BigInt>(), BigInt::from(1));
        assert_eq!(coeff, &BigInt::from(1));

        // h lands on the torsion generator with zero free part.
        let mut e = GroupRing::new();
        add_term(&mut e, Word::letter(Gen::H, 1), BigInt::from(1));
        let img = project_to_zh(&e, &h);
        let ((tors, free), _) = img.iter().next().unwrap();
        assert_eq!(tors, &vec![BigInt::from(1)]);
        assert!(free.iter().all(|f| f == &BigInt::from(0)));

        // l and h agree in H: their difference projects to zero.
        let mut e = GroupRing::new();
        add_term(&mut e, Word::letter(Gen::L(1), 1), BigInt::from(1));
        add_term(&mut e, Word::letter(Gen::H, 1), BigInt::from(-1));
        assert!(project_to_zh(&e, &h).is_empty());
    }

    #[test]
    fn product_rule() {
        // d(uv)/dx = du/dx + u dv/dx
        let u = w(&[(x(1), 1), (x(2), -1)]);
        let v = w(&[(x(2), 1), (x(1), 1)]);
        let uv = u.concat(&v);
        for g in [x(1), x(2)] {
            let mut rhs = fox_derivative(&u, g);
            for (wrd, c) in fox_derivative(&v, g) {
                add_term(&mut rhs, u.concat(&wrd), c);
            }
            assert_eq!(fox_derivative(&uv, g), rhs);
        }
    }
}
