//! Property tests for the spec-level invariants: serialization round trips,
//! ring laws, normalization, splitting covariance, simplification and the
//! structural homology statements.

use std::path::Path;

use num_bigint::BigInt;
use proptest::prelude::*;

use seiflink::diagram::{
    parse_diagram, serialize_diagram, ArrowDiagram, ArrowRecord, BoundaryPoint, Crossing,
    EdgeKind, EdgeRef, SeifertData,
};
use seiflink::homology::{abelianize, abelianize_full, group_of_matrix, h1, manifold_h1, AbCol};
use seiflink::moves::{apply_local_move, Dir, MoveKind, MoveSpec, Site};
use seiflink::presentation::{build_presentation, tietze_simplify, Family};
use seiflink::ring::{gcd_univariate, Convention, Cyclo, LaurentPoly};
use seiflink::twisted::{
    characters, make_splitting, twisted_alexander, twisted_alexander_of_presentation,
    SigmaSelector,
};
use seiflink::word::Gen;

fn fixture(name: &str) -> ArrowDiagram {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    parse_diagram(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn corpus() -> Vec<(String, ArrowDiagram)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut out = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "diag") {
            let d = parse_diagram(&std::fs::read_to_string(&path).unwrap()).unwrap();
            out.push((path.file_name().unwrap().to_string_lossy().to_string(), d));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

// --- Diagram round trip -----------------------------------------------------

fn arb_seifert() -> impl Strategy<Value = SeifertData> {
    (any::<bool>(), 0u32..3, proptest::collection::vec(0usize..3, 0..3)).prop_flat_map(
        |(orient, genus, fiber_picks)| {
            let genus = if orient { genus } else { genus.max(1) };
            let signs = proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], genus as usize);
            let fiber_table = [(1u64, 0u64), (2, 1), (3, 2), (5, 3)];
            let fibers: Vec<(u64, u64)> =
                fiber_picks.iter().map(|&i| fiber_table[i % 4]).collect();
            (signs.clone(), signs).prop_map(move |(gamma, delta)| SeifertData {
                base_orientable: orient,
                genus,
                gamma,
                delta: if orient { delta } else { Vec::new() },
                fibers: fibers.clone(),
            })
        },
    )
}

fn arb_diagram() -> impl Strategy<Value = ArrowDiagram> {
    (arb_seifert(), 0usize..3, 0usize..3, 0usize..4, proptest::collection::vec(any::<u64>(), 24))
        .prop_map(|(seifert, t, n, s, entropy)| {
            let mut rng = entropy.into_iter().cycle();
            let mut next = move || rng.next().unwrap();
            let t = if seifert.genus == 0 { 0 } else { t };
            let r = (2 * t + 2 * n + s).max(1) as u32;
            let boundary = (0..t)
                .map(|j| {
                    let kind = if seifert.base_orientable && next() % 2 == 0 {
                        EdgeKind::B
                    } else {
                        EdgeKind::A
                    };
                    BoundaryPoint {
                        edge: EdgeRef { kind, index: (next() % seifert.genus as u64 + 1) as u32 },
                        pos: j as u32 + 1,
                    }
                })
                .collect::<Vec<_>>();
            let mut words: Vec<Vec<(u32, i8)>> = Vec::new();
            for _ in 0..n + seifert.fibers.len() {
                let len = next() % 3;
                let mut w = Vec::new();
                for _ in 0..len {
                    w.push(((next() % r as u64 + 1) as u32, if next() % 2 == 0 { 1 } else { -1 }));
                }
                words.push(w);
            }
            let fiber_words = words.split_off(n);
            let arrows = words.into_iter().map(|z| ArrowRecord { z }).collect::<Vec<_>>();
            let mut eps = vec![0i8; 2 * t + 2 * n];
            for j in 0..t {
                let e = if next() % 2 == 0 { 1 } else { -1 };
                eps[j] = e;
                eps[t + j] = -e;
            }
            for j in 0..n {
                let e = if next() % 2 == 0 { 1 } else { -1 };
                eps[2 * t + j] = e;
                eps[2 * t + n + j] = -e;
            }
            let crossings = (0..s)
                .map(|_| Crossing {
                    over: (next() % r as u64 + 1) as u32,
                    inc: (next() % r as u64 + 1) as u32,
                    out: (next() % r as u64 + 1) as u32,
                    sign: if next() % 2 == 0 { 1 } else { -1 },
                })
                .collect();
            ArrowDiagram {
                seifert,
                r,
                boundary,
                arrows,
                fiber_words,
                eps,
                crossings,
                idents: Vec::new(),
            }
        })
}

proptest! {
    #[test]
    fn parse_serialize_roundtrip(d in arb_diagram()) {
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(d, back);
    }
}

#[test]
fn shipped_fixtures_validate_and_roundtrip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "diag") {
            files.push(p);
        }
    }
    for entry in std::fs::read_dir(dir.join("moves")).unwrap() {
        files.push(entry.unwrap().path());
    }
    assert!(files.len() >= 13);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let d = parse_diagram(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(d.validate().is_empty(), "{}: {:?}", path.display(), d.validate());
        let d2 = parse_diagram(&serialize_diagram(&d)).unwrap();
        assert_eq!(d, d2, "{} does not round trip", path.display());
    }
}

#[test]
fn relator_family_counts_match_diagram_data() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut all: Vec<(String, ArrowDiagram)> = corpus();
    for pair in seiflink::moves::load_fixture_pairs(&dir.join("moves")).unwrap() {
        all.push((format!("{}.before", pair.name), pair.before));
        all.push((format!("{}.after", pair.name), pair.after));
    }
    for (name, d) in all {
        let p = build_presentation(&d).unwrap();
        let g = d.seifert.genus as usize;
        assert_eq!(p.family_count(Family::W), d.crossings.len() + d.idents.len(), "{name}");
        assert_eq!(p.family_count(Family::F), 1, "{name}");
        assert_eq!(p.family_count(Family::A), g, "{name}");
        assert_eq!(
            p.family_count(Family::B),
            if d.seifert.base_orientable { g } else { 0 },
            "{name}"
        );
        assert_eq!(p.family_count(Family::Cf), d.k(), "{name}");
        assert_eq!(p.family_count(Family::Cv), d.n(), "{name}");
        assert_eq!(p.family_count(Family::Cx), d.t(), "{name}");
        assert_eq!(p.family_count(Family::L), d.k(), "{name}");
        assert!(p.check_closed(), "{name}");
    }
}

#[test]
fn crossingless_loop_presentation_is_wirtinger_free() {
    let d = parse_diagram("SURFACE O 1\nSIGNS gamma +1 delta +1\nCOUNTS r 1 t 0 n 0\n").unwrap();
    let p = build_presentation(&d).unwrap();
    assert_eq!(p.family_count(Family::W), 0);
    // The loop generator appears in no relator: a free factor.
    assert!(p.relators.iter().all(|r| !r.word.generators().contains(&Gen::X(1))));
    let h = h1(&p, &d.components());
    assert_eq!(h.rank, 4); // Z^3 from the bundle plus one free link generator
}

#[test]
fn components_independent_of_record_order() {
    let d = fixture("example61.diag");
    let base = d.components();
    let mut shuffled = d.clone();
    shuffled.crossings.reverse();
    shuffled.idents.reverse();
    assert_eq!(shuffled.components(), base);
    assert_eq!(base, d.components());
}

// --- Ring laws ---------------------------------------------------------------

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec(((-3i64..4), (-4i64..5), 0u8..3), 0..5).prop_map(|terms| {
        terms.into_iter().fold(LaurentPoly::zero(1, 12), |acc, (e, c, zeta_pow)| {
            let coeff = Cyclo::zeta_pow(12, zeta_pow as i64).scale(&num_rational::BigRational::from(
                BigInt::from(c),
            ));
            acc.add(&LaurentPoly::monomial(vec![e], coeff))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
    }

    #[test]
    fn normalize_idempotent_and_unit_invariant(p in arb_poly(), shift in -3i64..4, zeta_pow in 0u8..4) {
        let n = p.normalize(Convention::Monic);
        prop_assert_eq!(n.normalize(Convention::Monic), n.clone());
        // Multiplying by a unit c z^e does not change the normal form.
        let scalar = Cyclo::from_rational(
            12,
            num_rational::BigRational::new(BigInt::from(3), BigInt::from(2)),
        );
        let unit = LaurentPoly::monomial(vec![shift], Cyclo::zeta_pow(12, zeta_pow as i64))
            .scale(&scalar);
        prop_assert_eq!(p.mul(&unit).normalize(Convention::Monic), n);
    }

    #[test]
    fn gcd_divides_both(p in arb_poly(), q in arb_poly()) {
        let g = gcd_univariate(&p, &q, Convention::Monic);
        if !g.is_zero() {
            prop_assert!(p.exact_div_univariate(&g).is_some());
            prop_assert!(q.exact_div_univariate(&g).is_some());
        } else {
            prop_assert!(p.is_zero() && q.is_zero());
        }
    }
}

#[test]
fn integer_content_normalize_keeps_sign_rule() {
    // p and -p normalize to the same representative.
    let z = LaurentPoly::variable(1, 0, 1);
    let p = z.mul(&z).sub(&LaurentPoly::one(1, 1)).scale(&Cyclo::from_int(1, -2));
    let n = p.normalize(Convention::IntegerContent);
    assert_eq!(n, p.neg().normalize(Convention::IntegerContent));
    assert_eq!(n.to_string(), "2*z^2 - 2");
}

// --- Homology structure ------------------------------------------------------

#[test]
fn collapsed_and_full_abelianizations_agree_on_corpus() {
    for (name, d) in corpus() {
        let p = build_presentation(&d).unwrap();
        let comp = d.components();
        let ab = abelianize(&p, &comp);
        let collapsed = group_of_matrix(&ab.matrix);
        let full = group_of_matrix(&abelianize_full(&p));
        assert_eq!(collapsed, full, "{name}");
    }
}

#[test]
fn local_links_split_off_free_summands() {
    // Corollary: a link inside a ball adds free factors to H1(M).
    for name in [
        "local_unknot_torus.diag",
        "local_trefoil_torus.diag",
        "local_unknot_s21.diag",
        "local_unknot_rp3.diag",
        "local_trefoil_l31.diag",
        "local_fig8_l51.diag",
    ] {
        let d = fixture(name);
        let comp = d.components();
        let p = build_presentation(&d).unwrap();
        let h = h1(&p, &comp);
        let m = manifold_h1(&d.seifert);
        assert_eq!(h.rank, m.rank + comp.nu as usize, "{name}");
        assert_eq!(h.torsion, m.torsion, "{name}");
    }
}

#[test]
fn null_homologous_link_in_circle_bundle_splits() {
    // No surgeries, orientable bundle over the torus: insert an opposite
    // arrow pair so the loop stays null-homologous but is not drawn local.
    let base = parse_diagram("SURFACE O 1\nSIGNS gamma +1 delta +1\nCOUNTS r 1 t 0 n 0\n").unwrap();
    let m = MoveSpec {
        kind: MoveKind::R4,
        dir: Dir::Forward,
        site: Site::ArcWithPath { gen: 1, z: vec![] },
    };
    let d = apply_local_move(&base, &m).unwrap();
    assert_eq!(d.n(), 2);
    let cls = seiflink::homology::homology_class(&d, 1).unwrap();
    assert!(cls.is_zero());
    let p = build_presentation(&d).unwrap();
    let h = h1(&p, &d.components());
    let m1 = manifold_h1(&d.seifert);
    assert_eq!(h.rank, m1.rank + 1);
    assert_eq!(h.torsion, m1.torsion);
}

#[test]
fn class_coefficients_match_abelianized_rows_for_orientable_spaces() {
    // For an orientable space over an orientable base every edge sign is +1
    // and the collapsed rows of the F/A/B/L relators read off the class
    // coefficients directly.
    for (name, d) in corpus() {
        let s = &d.seifert;
        let orientable_m = s.base_orientable
            && s.gamma.iter().all(|&x| x == 1)
            && s.delta.iter().all(|&x| x == 1);
        if !orientable_m {
            continue;
        }
        let comp = d.components();
        if comp.nu == 0 {
            continue;
        }
        let p = build_presentation(&d).unwrap();
        let ab = abelianize(&p, &comp);
        let classes: Vec<_> = (1..=comp.nu)
            .map(|c| seiflink::homology::homology_class(&d, c).unwrap())
            .collect();
        let col_of_comp = |c: u32| {
            ab.columns
                .iter()
                .position(|col| matches!(col, AbCol::Component(x) if *x == c))
                .unwrap()
        };
        // Indices of A- and L-family relators in presentation order.
        let mut a_index = 0;
        let mut l_index = 0;
        for (ri, rel) in p.relators.iter().enumerate() {
            match rel.family {
                Family::A => {
                    a_index += 1;
                    for (ci, cls) in classes.iter().enumerate() {
                        let coeff = &ab.matrix[(ri, col_of_comp(ci as u32 + 1))];
                        assert_eq!(
                            coeff,
                            &BigInt::from(cls.eta_a[a_index - 1]),
                            "{name}: A_{a_index} row vs eta_a"
                        );
                    }
                }
                Family::F => {
                    for (ci, cls) in classes.iter().enumerate() {
                        let coeff = &ab.matrix[(ri, col_of_comp(ci as u32 + 1))];
                        assert_eq!(
                            coeff,
                            &BigInt::from(-cls.eta_h),
                            "{name}: F row vs eta_h"
                        );
                    }
                }
                Family::L => {
                    l_index += 1;
                    for (ci, cls) in classes.iter().enumerate() {
                        let coeff = &ab.matrix[(ri, col_of_comp(ci as u32 + 1))];
                        assert_eq!(
                            coeff,
                            &BigInt::from(cls.eta_l[l_index - 1]),
                            "{name}: L_{l_index} row vs eta_l"
                        );
                    }
                }
                _ => {}
            }
        }
    }
}

// --- Twisted pipeline properties ----------------------------------------------

#[test]
fn polynomial_count_equals_torsion_order() {
    for name in ["example61.diag", "example48.diag", "local_trefoil_l31.diag", "local_fig8_l51.diag"] {
        let d = fixture(name);
        let res = twisted_alexander(&d, SigmaSelector::All).unwrap();
        let torsion_order: BigInt = res.h1.torsion_order();
        assert_eq!(BigInt::from(res.polynomials.len()), torsion_order, "{name}");
        assert!(res.polynomials[0].character.is_trivial());
    }
}

#[test]
fn trivial_character_is_splitting_independent() {
    let d = fixture("example61.diag");
    let comp = d.components();
    let p = build_presentation(&d).unwrap();
    let h = h1(&p, &comp);
    let base = make_splitting(&h);
    // A twisted splitting: the section adds psi(free part) to the torsion
    // coordinate.
    let psi = vec![vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]];
    let twisted_split = base.with_twist(psi);
    let a = twisted_alexander_of_presentation(&p, &h, &base, SigmaSelector::Index(0)).unwrap();
    let b = twisted_alexander_of_presentation(&p, &h, &twisted_split, SigmaSelector::Index(0)).unwrap();
    assert_eq!(a[0].value, b[0].value);
    // The nontrivial character transforms term by term with sigma(psi(g)),
    // which survives the one-variable projection only up to term merging;
    // non-vanishing is preserved.
    let a1 = twisted_alexander_of_presentation(&p, &h, &base, SigmaSelector::Index(1)).unwrap();
    let b1 = twisted_alexander_of_presentation(&p, &h, &twisted_split, SigmaSelector::Index(1)).unwrap();
    assert!(!a1[0].value.is_zero());
    assert!(!b1[0].value.is_zero());
}

#[test]
fn tietze_preserves_h1_and_polynomials() {
    let d = fixture("example61.diag");
    let comp = d.components();
    let p = build_presentation(&d).unwrap();
    let q = tietze_simplify(&p, 64);
    assert!(q.generators.len() < p.generators.len());
    let hp = h1(&p, &comp);
    // The simplified presentation has fewer overpass generators; compare on
    // the full matrices, which do not need the component partition.
    let (r1, t1) = group_of_matrix(&abelianize_full(&p));
    let (r2, t2) = group_of_matrix(&abelianize_full(&q));
    assert_eq!((r1, t1), (r2, t2));
    assert_eq!((hp.rank, hp.torsion.clone()), (r2, group_of_matrix(&abelianize_full(&q)).1));

    let hq = {
        // Rebuild images for the simplified presentation via a fresh h1 on a
        // partition that treats every surviving overpass as its own block.
        let survivors: Vec<u32> = q
            .generators
            .iter()
            .filter_map(|g| match g {
                Gen::X(i) => Some(*i),
                _ => None,
            })
            .collect();
        let mut assignment = vec![0u32; d.r as usize];
        for (k, &i) in survivors.iter().enumerate() {
            assignment[(i - 1) as usize] = k as u32 + 1;
        }
        // Unreferenced overpasses keep a harmless component number.
        for a in assignment.iter_mut() {
            if *a == 0 {
                *a = 1;
            }
        }
        let comp_q = seiflink::diagram::ComponentPartition {
            nu: survivors.len().max(1) as u32,
            assignment,
        };
        h1(&q, &comp_q)
    };
    let sp = make_splitting(&hp);
    let sq = make_splitting(&hq);
    let before = twisted_alexander_of_presentation(&p, &hp, &sp, SigmaSelector::All).unwrap();
    let after = twisted_alexander_of_presentation(&q, &hq, &sq, SigmaSelector::All).unwrap();
    assert_eq!(before.len(), after.len());
    for (x, y) in before.iter().zip(&after) {
        assert_eq!(x.value, y.value, "character {:?}", x.character);
    }
}

#[test]
fn characters_enumeration_shapes() {
    let d = fixture("example48.diag");
    let p = build_presentation(&d).unwrap();
    let h = h1(&p, &d.components());
    assert_eq!(h.torsion, vec![BigInt::from(2), BigInt::from(2)]);
    let s = make_splitting(&h);
    let cs = characters(&s);
    assert_eq!(cs.len(), 4);
    assert!(cs[0].is_trivial());
    let conductors: Vec<u32> = cs.iter().map(|c| c.conductor()).collect();
    assert_eq!(conductors, vec![1, 2, 2, 2]);
}
