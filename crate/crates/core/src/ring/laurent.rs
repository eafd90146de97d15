//! Multivariate Laurent polynomials over cyclotomic rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cyclo::Cyclo;

/// Scalar normalization convention for results defined up to units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Keep the integer content; make the lexicographically leading
    /// coefficient positive. Used for the trivial character.
    IntegerContent,
    /// Divide by the lexicographically leading coefficient.
    Monic,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::IntegerContent => write!(f, "integer-content"),
            Convention::Monic => write!(f, "monic"),
        }
    }
}

/// A Laurent polynomial in `vars` variables; all coefficients share one
/// conductor. Equality compares values across conductors.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    vars: usize,
    conductor: u32,
    terms: BTreeMap<Vec<i64>, Cyclo>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((ea, ca), (eb, cb))| ea == eb && ca == cb)
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(vars: usize, conductor: u32) -> Self {
        LaurentPoly { vars, conductor, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize, conductor: u32) -> Self {
        Self::monomial(vec![0; vars], Cyclo::one(conductor))
    }

    pub fn constant(vars: usize, c: Cyclo) -> Self {
        let exps = vec![0; vars];
        Self::monomial(exps, c)
    }

    pub fn monomial(exps: Vec<i64>, c: Cyclo) -> Self {
        let vars = exps.len();
        let conductor = c.conductor();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars, conductor, terms }
    }

    /// The variable `z_i` (0-based).
    pub fn variable(vars: usize, i: usize, conductor: u32) -> Self {
        let mut exps = vec![0; vars];
        exps[i] = 1;
        Self::monomial(exps, Cyclo::one(conductor))
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Cyclo)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The single term `(exps, coeff)` when the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &Cyclo)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn lift(&self, conductor: u32) -> LaurentPoly {
        if self.conductor == conductor {
            return self.clone();
        }
        let mut out = LaurentPoly::zero(self.vars, conductor);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.lift(conductor));
        }
        out
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn unified(&self, other: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let m = num_integer::lcm(self.conductor, other.conductor);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let (mut a, b) = self.unified(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars,
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let (a, b) = self.unified(other);
        let mut out = LaurentPoly::zero(a.vars, a.conductor);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclo) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.vars, self.conductor);
        }
        let m = num_integer::lcm(self.conductor, c.conductor());
        let mut out = LaurentPoly::zero(self.vars, m);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.lift(m).mul(&c.lift(m)));
        }
        out
    }

    /// Sends every variable to `z`, summing exponent vectors.
    pub fn project_one_variable(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(1, self.conductor);
        for (e, c) in &self.terms {
            let s: i64 = e.iter().sum();
            out.add_term(vec![s], c.clone());
        }
        out
    }

    /// Largest exponent vector in lexicographic order.
    pub fn leading_exponent(&self) -> Option<&Vec<i64>> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Cyclo> {
        self.terms.values().next_back()
    }

    /// Per-variable minimum exponent.
    fn min_exponents(&self) -> Vec<i64> {
        let mut mins = vec![i64::MAX; self.vars];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                mins[i] = mins[i].min(x);
            }
        }
        mins
    }

    /// Multiplies by the monomial `z^shift`.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars, self.conductor);
        for (e, c) in &self.terms {
            let exps: Vec<i64> = e.iter().zip(shift).map(|(x, s)| x + s).collect();
            out.add_term(exps, c.clone());
        }
        out
    }

    /// Canonical representative up to units: minimum exponent zero in each
    /// variable, scalar fixed per convention.
    pub fn normalize(&self, convention: Convention) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mins = self.min_exponents();
        let shift: Vec<i64> = mins.iter().map(|&x| -x).collect();
        let shifted = self.shift(&shift);
        let lead = shifted.leading_coefficient().unwrap().clone();
        match convention {
            Convention::IntegerContent => {
                let flip = lead
                    .as_rational()
                    .map(|q| q.is_negative())
                    .unwrap_or(false);
                if flip {
                    shifted.neg()
                } else {
                    shifted
                }
            }
            Convention::Monic => shifted.scale(&lead.inv()),
        }
    }

    /// Rational content when all coefficients are rational.
    pub fn rational_content(&self) -> Option<BigRational> {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            let q = c.as_rational()?;
            num_gcd = num_gcd.gcd(q.numer());
            den_lcm = den_lcm.lcm(q.denom());
        }
        if num_gcd.is_zero() {
            return Some(BigRational::zero());
        }
        Some(BigRational::new(num_gcd, den_lcm))
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    /// Univariate only.
    pub fn exact_div_univariate(&self, den: &LaurentPoly) -> Option<LaurentPoly> {
        assert_eq!(self.vars, 1);
        assert_eq!(den.vars, 1);
        if self.is_zero() {
            return Some(self.clone());
        }
        if den.is_zero() {
            return None;
        }
        let m = num_integer::lcm(self.conductor, den.conductor);
        let (a, b) = (self.lift(m), den.lift(m));
        let (mut da, db) = (a.dense(), b.dense());
        let (qa, qb) = (da.1, db.1);
        let dense_b = db.0;
        let mut quotient = vec![Cyclo::zero(m); da.0.len().checked_sub(dense_b.len())? + 1];
        let lead_inv = dense_b.last().unwrap().inv();
        for i in (0..quotient.len()).rev() {
            let c = da.0[i + dense_b.len() - 1].mul(&lead_inv);
            quotient[i] = c.clone();
            if c.is_zero() {
                continue;
            }
            for (j, bc) in dense_b.iter().enumerate() {
                let sub = c.mul(bc);
                da.0[i + j] = da.0[i + j].sub(&sub);
            }
        }
        if da.0.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = LaurentPoly::zero(1, m);
        for (i, c) in quotient.into_iter().enumerate() {
            out.add_term(vec![i as i64 + qa - qb], c);
        }
        Some(out)
    }

    /// Dense ascending coefficients and the minimum exponent (univariate).
    fn dense(&self) -> (Vec<Cyclo>, i64) {
        assert_eq!(self.vars, 1);
        assert!(!self.is_zero());
        let min = self.terms.keys().next().unwrap()[0];
        let max = self.terms.keys().next_back().unwrap()[0];
        let mut coeffs = vec![Cyclo::zero(self.conductor); (max - min + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e[0] - min) as usize] = c.clone();
        }
        (coeffs, min)
    }
}

/// Exact determinant by Laplace expansion with column-subset memoization.
pub fn determinant(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = mat.len();
    if n == 0 {
        // Convention: the empty minor is 1.
        return LaurentPoly::one(1, 1);
    }
    let vars = mat[0][0].vars();
    let conductor = mat.iter().flatten().map(|p| p.conductor()).fold(1, num_integer::lcm);
    assert!(mat.iter().all(|row| row.len() == n), "matrix must be square");
    let mut memo: HashMap<u32, LaurentPoly> = HashMap::new();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    memo.insert(0, LaurentPoly::one(vars, conductor));

    fn expand(
        mat: &[Vec<LaurentPoly>],
        mask: u32,
        memo: &mut HashMap<u32, LaurentPoly>,
        vars: usize,
        conductor: u32,
    ) -> LaurentPoly {
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let row = mask.count_ones() as usize - 1; // expand along this row
        let row = mat.len() - 1 - row; // deepest rows first keeps memo keyed by columns
        let mut acc = LaurentPoly::zero(vars, conductor);
        let mut sign = false;
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let entry = &mat[row][j];
            if !entry.is_zero() {
                let sub = expand(mat, mask & !(1u32 << j), memo, vars, conductor);
                let term = entry.mul(&sub);
                acc = if sign { acc.sub(&term) } else { acc.add(&term) };
            }
            sign = !sign;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    expand(mat, full, &mut memo, vars, conductor)
}

/// Greatest common divisor of one-variable Laurent polynomials, canonical
/// per the convention. With `IntegerContent` (rational coefficients) the
/// integer content is preserved.
pub fn gcd_univariate(p: &LaurentPoly, q: &LaurentPoly, convention: Convention) -> LaurentPoly {
    assert_eq!(p.vars(), 1);
    assert_eq!(q.vars(), 1);
    if p.is_zero() {
        return q.normalize(convention);
    }
    if q.is_zero() {
        return p.normalize(convention);
    }
    match convention {
        Convention::Monic => {
            let g = euclid_monic(p, q);
            g.normalize(Convention::Monic)
        }
        Convention::IntegerContent => {
            let cp = p.rational_content().expect("integer-content gcd needs rational coefficients");
            let cq = q.rational_content().expect("integer-content gcd needs rational coefficients");
            let content = rational_gcd(&cp, &cq);
            let g = euclid_monic(p, q).normalize(Convention::Monic);
            // Rescale the monic gcd to a primitive integer polynomial.
            let denom_lcm = g
                .terms()
                .map(|(_, c)| c.as_rational().expect("rational").denom().clone())
                .fold(BigInt::one(), |a, b| a.lcm(&b));
            let primitive = g.scale(&Cyclo::from_rational(1, BigRational::from(denom_lcm)));
            let prim_content = primitive.rational_content().unwrap();
            let primitive = primitive
                .scale(&Cyclo::from_rational(1, prim_content.recip()))
                .normalize(Convention::IntegerContent);
            primitive.scale(&Cyclo::from_rational(1, content)).normalize(Convention::IntegerContent)
        }
    }
}

// gcd(a/b, c/d) = gcd(a*d, c*b) / (b*d)
fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let n = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    let d = a.denom() * b.denom();
    BigRational::new(n, d).abs()
}

fn euclid_monic(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    let m = num_integer::lcm(p.conductor(), q.conductor());
    let mut a = p.normalize(Convention::Monic).lift(m);
    let mut b = q.normalize(Convention::Monic).lift(m);
    loop {
        if b.is_zero() {
            return a;
        }
        let r = poly_rem(&a, &b);
        a = b;
        b = if r.is_zero() { r } else { r.normalize(Convention::Monic) };
    }
}

/// Remainder of dense polynomial division (univariate, min exponent 0).
fn poly_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let m = num_integer::lcm(a.conductor(), b.conductor());
    let (mut da, _) = a.lift(m).dense();
    let (db, _) = b.lift(m).dense();
    let lead_inv = db.last().unwrap().inv();
    while da.len() >= db.len() {
        let c = da.last().unwrap().mul(&lead_inv);
        let offset = da.len() - db.len();
        if !c.is_zero() {
            for (j, bc) in db.iter().enumerate() {
                let sub = c.mul(bc);
                da[offset + j] = da[offset + j].sub(&sub);
            }
        }
        da.pop();
        while da.last().is_some_and(|x| x.is_zero()) {
            da.pop();
        }
        if da.is_empty() {
            return LaurentPoly::zero(1, m);
        }
    }
    let mut out = LaurentPoly::zero(1, m);
    for (i, c) in da.into_iter().enumerate() {
        out.add_term(vec![i as i64], c);
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var_name = |i: usize| -> String {
            if self.vars == 1 {
                "z".to_string()
            } else {
                format!("z{}", i + 1)
            }
        };
        // Descending lexicographic order, matching the report format.
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { var_name(i) } else { format!("{}^{}", var_name(i), x) })
                .collect();
            let mono = mono.join("*");
            let (sign_str, coeff) = match c.as_rational() {
                Some(q) if q.is_negative() => ("-", c.neg()),
                _ => ("+", c.clone()),
            };
            if first {
                if sign_str == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign_str)?;
            }
            let coeff_is_one = coeff.is_one();
            let rational = coeff.as_rational().is_some();
            if mono.is_empty() {
                if rational {
                    write!(f, "{coeff}")?;
                } else {
                    write!(f, "({coeff})")?;
                }
            } else if coeff_is_one {
                write!(f, "{mono}")?;
            } else if rational {
                write!(f, "{coeff}*{mono}")?;
            } else {
                write!(f, "({coeff})*{mono}")?;
            }
        }
        Ok(())
    }
}
