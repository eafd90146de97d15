//! Characters of the torsion subgroup, elementary ideals and the
//! one-dimensional twisted Alexander polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::diagram::ArrowDiagram;
use crate::fox::alexander_matrix;
use crate::homology::{h1, AbelianGroup};
use crate::presentation::{build_presentation, GroupPresentation, PresentationError};
use crate::ring::{determinant, gcd_univariate, Convention, Cyclo, LaurentPoly};
use crate::word::Gen;

/// Fixed splitting H = TorsH x G. Coordinates come straight from the Smith
/// normal form; `psi` twists the section by a homomorphism G -> TorsH, which
/// exercises the splitting-change covariance.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub torsion_orders: Vec<BigInt>,
    pub rank: usize,
    /// Optional twist: entry `[i][j]` adds `psi_ij * free_j` to torsion
    /// coordinate `i`.
    pub psi: Option<Vec<Vec<BigInt>>>,
}

impl Splitting {
    pub fn twist_torsion(&self, tors: &[BigInt], free: &[BigInt]) -> Vec<BigInt> {
        match &self.psi {
            None => tors.to_vec(),
            Some(psi) => tors
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let mut v = t.clone();
                    for (j, f) in free.iter().enumerate() {
                        v += &psi[i][j] * f;
                    }
                    v.mod_floor(&self.torsion_orders[i])
                })
                .collect(),
        }
    }

    pub fn with_twist(&self, psi: Vec<Vec<BigInt>>) -> Splitting {
        Splitting { psi: Some(psi), ..self.clone() }
    }
}

/// Deterministic splitting derived from the SNF coordinates.
pub fn make_splitting(h: &AbelianGroup) -> Splitting {
    Splitting { torsion_orders: h.torsion.clone(), rank: h.rank, psi: None }
}

/// A character sigma of TorsH: the i-th torsion generator maps to
/// zeta_{d_i}^{e_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub exps: Vec<u64>,
    pub orders: Vec<u64>,
}

impl Character {
    pub fn trivial(orders: &[BigInt]) -> Character {
        let orders: Vec<u64> = orders.iter().map(|d| d.to_u64().expect("small order")).collect();
        Character { exps: vec![0; orders.len()], orders }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Least common multiple of the orders of the image roots of unity.
    pub fn conductor(&self) -> u32 {
        let mut m = 1u64;
        for (&e, &d) in self.exps.iter().zip(&self.orders) {
            if e == 0 {
                continue;
            }
            let ord = d / e.gcd(&d);
            m = m.lcm(&ord);
        }
        m as u32
    }

    /// Value on a torsion tuple.
    pub fn eval(&self, tors: &[BigInt]) -> Cyclo {
        let m = self.conductor() as i64;
        let mut total = 0i64;
        for ((t, &e), &d) in tors.iter().zip(&self.exps).zip(&self.orders) {
            if e == 0 {
                continue;
            }
            let t = t.mod_floor(&BigInt::from(d)).to_i64().expect("small torsion coordinate");
            // zeta_d^{e t} = zeta_m^{(m/d) e t}
            total = (total + (m / d as i64) * (e as i64 % d as i64) * t).rem_euclid(m);
        }
        Cyclo::zeta_pow(self.conductor(), total)
    }

    pub fn describe(&self) -> String {
        if self.orders.is_empty() {
            return "trivial (no torsion)".to_string();
        }
        self.exps
            .iter()
            .zip(&self.orders)
            .enumerate()
            .map(|(i, (&e, &d))| {
                if e == 0 {
                    format!("tau{} -> 1", i + 1)
                } else if 2 * e == d {
                    format!("tau{} -> -1", i + 1)
                } else {
                    format!("tau{} -> zeta{}^{}", i + 1, d, e)
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// All characters of the torsion subgroup, trivial first, in lexicographic
/// order of exponent tuples.
pub fn characters(s: &Splitting) -> Vec<Character> {
    let orders: Vec<u64> =
        s.torsion_orders.iter().map(|d| d.to_u64().expect("small order")).collect();
    let mut out = vec![Character { exps: vec![0; orders.len()], orders: orders.clone() }];
    let total: u64 = orders.iter().product();
    let mut current = vec![0u64; orders.len()];
    for _ in 1..total {
        // Increment the mixed-radix counter, most significant last.
        for i in (0..orders.len()).rev() {
            current[i] += 1;
            if current[i] < orders[i] {
                break;
            }
            current[i] = 0;
        }
        out.push(Character { exps: current.clone(), orders: orders.clone() });
    }
    out
}

/// Generators of the elementary ideal E_d: all (m-d)-minors of the matrix.
/// Zero minors are dropped; an empty result means the zero ideal.
pub fn elementary_ideal(matrix: &[Vec<LaurentPoly>], d: usize) -> Vec<LaurentPoly> {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let (vars, conductor) = matrix
        .iter()
        .flatten()
        .next()
        .map(|p| (p.vars(), p.conductor()))
        .unwrap_or((1, 1));
    if d >= cols {
        return vec![LaurentPoly::one(vars, conductor)];
    }
    let k = cols - d;
    if k > rows {
        return Vec::new();
    }
    if k == 0 {
        return vec![LaurentPoly::one(vars, conductor)];
    }
    let mut out = Vec::new();
    for row_set in combinations(rows, k) {
        for col_set in combinations(cols, k) {
            let sub: Vec<Vec<LaurentPoly>> = row_set
                .iter()
                .map(|&i| col_set.iter().map(|&j| matrix[i][j].clone()).collect())
                .collect();
            let det = determinant(&sub);
            if !det.is_zero() {
                out.push(det);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // Advance.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Structural value of E_0: zero for infinite H, `sum_{f in TorsH} sigma(f)`
/// otherwise (|H| at the trivial character, 0 at any other).
pub fn e0_value(h: &AbelianGroup, sigma: &Character) -> Cyclo {
    let m = sigma.conductor();
    if !h.is_finite() {
        return Cyclo::zero(m);
    }
    let mut total = Cyclo::zero(m);
    let orders: Vec<i64> = h.torsion.iter().map(|d| d.to_i64().unwrap()).collect();
    let mut tuple = vec![0i64; orders.len()];
    loop {
        let tors: Vec<BigInt> = tuple.iter().map(|&t| BigInt::from(t)).collect();
        total = total.add(&sigma.eval(&tors));
        let mut i = 0;
        loop {
            if i == orders.len() {
                return total;
            }
            tuple[i] += 1;
            if tuple[i] < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// Removes unit-pivot rows and columns. In `IntegerContent` mode only
/// coefficient ±1 monomials pivot (row operations stay in Z[z^{±1}]); in
/// `Monic` mode any monomial entry pivots. Each removal lowers the relevant
/// minor order by one and leaves every d_k gcd unchanged up to units.
fn unit_reduce(
    mut mat: Vec<Vec<LaurentPoly>>,
    mode: Convention,
) -> (Vec<Vec<LaurentPoly>>, usize) {
    let mut removed = 0;
    loop {
        let rows = mat.len();
        let cols = if rows == 0 { 0 } else { mat[0].len() };
        if rows == 0 || cols == 0 {
            return (mat, removed);
        }
        let mut pivot: Option<(usize, usize)> = None;
        'search: for i in 0..rows {
            for j in 0..cols {
                if let Some((_, c)) = mat[i][j].as_monomial() {
                    let ok = match mode {
                        Convention::IntegerContent => c
                            .as_rational()
                            .map(|q| q.numer().abs().is_one() && q.denom().is_one())
                            .unwrap_or(false),
                        Convention::Monic => true,
                    };
                    if ok {
                        pivot = Some((i, j));
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { return (mat, removed) };
        let pivot_poly = mat[pi][pj].clone();
        let (pexp, pcoeff) = pivot_poly.as_monomial().unwrap();
        let inv_shift: Vec<i64> = pexp.iter().map(|&e| -e).collect();
        let inv_coeff = pcoeff.inv();
        for i in 0..rows {
            if i == pi || mat[i][pj].is_zero() {
                continue;
            }
            // q = entry / pivot (an exact unit division)
            let q = mat[i][pj].shift(&inv_shift).scale(&inv_coeff);
            for j in 0..cols {
                let sub = q.mul(&mat[pi][j]);
                mat[i][j] = mat[i][j].sub(&sub);
            }
        }
        mat.remove(pi);
        for row in &mut mat {
            row.remove(pj);
        }
        removed += 1;
    }
}

/// A computed twisted polynomial with its character and convention tag.
#[derive(Debug, Clone)]
pub struct TwistedPolynomial {
    pub character: Character,
    pub value: LaurentPoly,
    pub convention: Convention,
}

#[derive(Debug, thiserror::Error)]
pub enum TwistedError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("empty link: no free variable to project onto")]
    EmptyLink,
    #[error("character index {0} out of range ({1} characters)")]
    BadSigma(usize, usize),
}

/// Selects which characters to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaSelector {
    All,
    Index(usize),
}

/// Twisted Alexander polynomials of a presented link group, one per
/// character, from the gcd of the projected E_1 generators.
pub fn twisted_alexander_of_presentation(
    p: &GroupPresentation,
    h: &AbelianGroup,
    splitting: &Splitting,
    selector: SigmaSelector,
) -> Result<Vec<TwistedPolynomial>, TwistedError> {
    let chars = characters(splitting);
    let selected: Vec<Character> = match selector {
        SigmaSelector::All => chars,
        SigmaSelector::Index(i) => {
            if i >= chars.len() {
                return Err(TwistedError::BadSigma(i, chars.len()));
            }
            vec![chars[i].clone()]
        }
    };
    let mut out = Vec::new();
    for sigma in selected {
        let convention =
            if sigma.is_trivial() { Convention::IntegerContent } else { Convention::Monic };
        let matrix = alexander_matrix(p, h, splitting, &sigma);
        let projected: Vec<Vec<LaurentPoly>> =
            matrix.iter().map(|row| row.iter().map(|e| e.project_one_variable()).collect()).collect();
        let cols = p.generators.len();
        let (reduced, removed) = unit_reduce(projected, convention);
        let value = gcd_of_minors(&reduced, (cols - 1).saturating_sub(removed), convention);
        out.push(TwistedPolynomial { character: sigma, value, convention });
    }
    Ok(out)
}

/// gcd of all k-minors under the given convention.
fn gcd_of_minors(mat: &[Vec<LaurentPoly>], k: usize, convention: Convention) -> LaurentPoly {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    if k == 0 {
        let one = LaurentPoly::one(1, 1);
        return one.normalize(convention);
    }
    if k > rows || k > cols {
        return LaurentPoly::zero(1, 1);
    }
    let mut acc = LaurentPoly::zero(1, 1);
    for row_set in combinations(rows, k) {
        for col_set in combinations(cols, k) {
            let sub: Vec<Vec<LaurentPoly>> = row_set
                .iter()
                .map(|&i| col_set.iter().map(|&j| mat[i][j].clone()).collect())
                .collect();
            let det = determinant(&sub);
            if det.is_zero() {
                continue;
            }
            acc = gcd_univariate(&acc, &det, convention);
            if is_unit_result(&acc, convention) {
                return acc;
            }
        }
    }
    acc.normalize(convention)
}

fn is_unit_result(p: &LaurentPoly, convention: Convention) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    match convention {
        Convention::Monic => true,
        Convention::IntegerContent => p
            .as_monomial()
            .and_then(|(_, c)| c.as_rational())
            .map(|q| q.abs() == BigRational::one())
            .unwrap_or(false),
    }
}

/// Full pipeline on a diagram.
pub struct TwistedResult {
    pub h1: AbelianGroup,
    pub splitting: Splitting,
    pub polynomials: Vec<TwistedPolynomial>,
}

pub fn twisted_alexander(
    d: &ArrowDiagram,
    selector: SigmaSelector,
) -> Result<TwistedResult, TwistedError> {
    let comp = d.components();
    if comp.nu == 0 {
        return Err(TwistedError::EmptyLink);
    }
    let p = build_presentation(d)?;
    let h = h1(&p, &comp);
    debug_assert!(h.rank >= 1, "nonempty links have positive rank");
    let splitting = make_splitting(&h);
    let polynomials = twisted_alexander_of_presentation(&p, &h, &splitting, selector)?;
    Ok(TwistedResult { h1: h, splitting, polynomials })
}

/// Checks the connected-sum product law. `map1`/`map2` send the factor
/// presentations' generators to the sum's generators; characters restrict
/// through the induced maps on H1.
pub fn connected_sum_check(
    sum: &ArrowDiagram,
    part1: &ArrowDiagram,
    part2: &ArrowDiagram,
    map1: &dyn Fn(Gen) -> Gen,
    map2: &dyn Fn(Gen) -> Gen,
) -> Result<bool, TwistedError> {
    let sum_res = twisted_alexander(sum, SigmaSelector::All)?;

    let run_part = |d: &ArrowDiagram| -> Result<(GroupPresentation, AbelianGroup, Splitting), TwistedError> {
        let comp = d.components();
        let p = build_presentation(d)?;
        let h = h1(&p, &comp);
        let s = make_splitting(&h);
        Ok((p, h, s))
    };
    let (p1, h1_1, s1) = run_part(part1)?;
    let (p2, h1_2, s2) = run_part(part2)?;

    // Restrict a character of the sum through a generator map.
    let restrict = |sigma: &Character,
                    part_h: &AbelianGroup,
                    map: &dyn Fn(Gen) -> Gen|
     -> Character {
        let orders: Vec<u64> =
            part_h.torsion.iter().map(|d| d.to_u64().expect("small order")).collect();
        let mut exps = Vec::new();
        for (i, comb) in part_h.torsion_combinations.iter().enumerate() {
            // Image of the i-th torsion generator in the sum's homology.
            let mapped: Vec<(Gen, i64)> = comb
                .iter()
                .map(|(g, c)| (map(*g), c.to_i64().expect("small coefficient")))
                .collect();
            let img = sum_res.h1.image_of_combination(&mapped);
            let val = sigma.eval(&img.torsion);
            // Find e with zeta_{d_i}^e = val.
            let d = orders[i];
            let mut found = None;
            for e in 0..d {
                let cand = Character { exps: vec![e], orders: vec![d] };
                let cv = cand.eval(&[BigInt::one()]);
                let lc = num_integer::lcm(cv.conductor(), val.conductor());
                if cv.lift(lc) == val.lift(lc) {
                    found = Some(e);
                    break;
                }
            }
            exps.push(found.expect("restricted character value is a root of unity of the right order"));
        }
        Character { exps, orders }
    };

    for tp in &sum_res.polynomials {
        let sigma1 = restrict(&tp.character, &h1_1, map1);
        let sigma2 = restrict(&tp.character, &h1_2, map2);
        let d1 = eval_character(&p1, &h1_1, &s1, &sigma1)?;
        let d2 = eval_character(&p2, &h1_2, &s2, &sigma2)?;
        let product = d1.value.mul(&d2.value).normalize(tp.convention);
        let lhs = tp.value.normalize(tp.convention);
        if product != lhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn eval_character(
    p: &GroupPresentation,
    h: &AbelianGroup,
    s: &Splitting,
    sigma: &Character,
) -> Result<TwistedPolynomial, TwistedError> {
    let chars = characters(s);
    let idx = chars
        .iter()
        .position(|c| c == sigma)
        .expect("restricted character is listed");
    let mut polys = twisted_alexander_of_presentation(p, h, s, SigmaSelector::Index(idx))?;
    Ok(polys.remove(0))
}
