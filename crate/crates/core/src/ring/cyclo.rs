//! Exact arithmetic in cyclotomic fields Q(zeta_m), represented as residues
//! modulo the m-th cyclotomic polynomial.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Monic integer coefficients of the m-th cyclotomic polynomial, ascending.
pub fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    thread_local! {
        static CACHE: RefCell<BTreeMap<u32, Vec<BigInt>>> = RefCell::new(BTreeMap::new());
    }
    CACHE.with(|c| {
        if let Some(p) = c.borrow().get(&m) {
            return p.clone();
        }
        // x^m - 1 divided by the product of Phi_d over proper divisors d.
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = -BigInt::one();
        num[m as usize] = BigInt::one();
        for d in 1..m {
            if m % d == 0 {
                let phi_d = cyclotomic_poly(d);
                num = poly_div_exact(&num, &phi_d);
            }
        }
        c.borrow_mut().insert(m, num.clone());
        num
    })
}

/// Exact division of integer polynomials (ascending coefficients).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = num.to_vec();
    while num.last().is_some_and(|x| x.is_zero()) {
        num.pop();
    }
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    if num.is_empty() {
        return vec![BigInt::zero()];
    }
    let qn = num.len() - 1 - dn;
    let mut q = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = num[i + dn].clone();
        q[i] = c.clone();
        for j in 0..=dn {
            let sub = &c * &den[j];
            num[i + j] -= sub;
        }
    }
    assert!(num.iter().all(|x| x.is_zero()), "inexact polynomial division");
    q
}

/// An element of Q(zeta_m) as a reduced residue of degree < phi(m).
///
/// Equality compares values, not representations: operands are lifted to a
/// common conductor first.
#[derive(Debug, Clone)]
pub struct Cyclo {
    m: u32,
    coeffs: Vec<BigRational>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.coeffs == other.coeffs;
        }
        let m = num_integer::lcm(self.m, other.m);
        self.lift(m).coeffs == other.lift(m).coeffs
    }
}

impl Eq for Cyclo {}

impl Cyclo {
    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn zero(m: u32) -> Self {
        Cyclo { m, coeffs: vec![BigRational::zero(); euler_phi(m)] }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_rational(m: u32, q: BigRational) -> Self {
        let mut c = Self::zero(m);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(m: u32, n: i64) -> Self {
        Self::from_rational(m, BigRational::from(BigInt::from(n)))
    }

    /// zeta_m^k.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        Self::reduce(m, raw)
    }

    pub fn zeta(m: u32) -> Self {
        Self::zeta_pow(m, 1)
    }

    fn reduce(m: u32, mut raw: Vec<BigRational>) -> Self {
        let phi = euler_phi(m);
        let modulus = cyclotomic_poly(m);
        let dn = modulus.len() - 1; // = phi
        while raw.len() > dn {
            let top = raw.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let deg = raw.len() - dn;
            for j in 0..dn {
                let sub = &top * BigRational::from(modulus[j].clone());
                raw[deg + j] -= sub;
            }
        }
        raw.resize(phi, BigRational::zero());
        Cyclo { m, coeffs: raw }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::unify(self, other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclo { m: a.m, coeffs }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::unify(self, other);
        let mut raw = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] += x * y;
            }
        }
        Cyclo::reduce(a.m, raw)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclo {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against the cyclotomic modulus.
    pub fn inv(&self) -> Cyclo {
        assert!(!self.is_zero(), "division by zero");
        if let Some(q) = self.as_rational() {
            return Cyclo::from_rational(self.m, q.recip());
        }
        let modulus: Vec<BigRational> =
            cyclotomic_poly(self.m).into_iter().map(BigRational::from).collect();
        // Extended Euclid, tracking r_i = t_i*modulus + s_i*self.
        let mut r0 = modulus;
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut s0 = vec![BigRational::zero()];
        let mut s1 = vec![BigRational::one()];
        while !r1.iter().all(|c| c.is_zero()) {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 = gcd(modulus, self); squarefree modulus makes it a constant.
        assert!(degree(&r0) == 0 && !r0[0].is_zero(), "inverse does not exist");
        let c = r0[0].clone();
        let inv_coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        Cyclo::reduce(self.m, inv_coeffs)
    }

    /// Reinterprets in a larger conductor m2 (with m | m2).
    pub fn lift(&self, m2: u32) -> Cyclo {
        if self.m == m2 {
            return self.clone();
        }
        assert!(m2 % self.m == 0, "conductor lift requires m | m2");
        let step = (m2 / self.m) as i64;
        let mut out = Cyclo::zero(m2);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Cyclo::zeta_pow(m2, step * i as i64).scale(c);
            out = out.add(&term);
        }
        out
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn unify(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        if a.m == b.m {
            (a.clone(), b.clone())
        } else {
            let m = num_integer::lcm(a.m, b.m);
            (a.lift(m), b.lift(m))
        }
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut num = num.to_vec();
    trim(&mut num);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = degree(&den);
    if degree(&num) < dd || (num.len() == 1 && num[0].is_zero()) {
        return (vec![BigRational::zero()], num);
    }
    let mut q = vec![BigRational::zero(); degree(&num) - dd + 1];
    let lead = den[dd].clone();
    for i in (0..q.len()).rev() {
        let c = &num[i + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        q[i] = c.clone();
        for j in 0..=dd {
            let sub = &c * &den[j];
            num[i + j] -= sub;
        }
    }
    trim(&mut num);
    (q, num)
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "zeta{}^{}", self.m, i)?;
            } else {
                write!(f, "{}*zeta{}^{}", c, self.m, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        let vals: Vec<usize> = [1u32, 2, 3, 4, 5, 6, 8, 12].iter().map(|&m| euler_phi(m)).collect();
        assert_eq!(vals, vec![1, 1, 2, 2, 4, 2, 4, 4]);
    }

    #[test]
    fn zeta_powers_and_modulus() {
        for &m in &[1u32, 2, 3, 4, 5, 6, 8, 12] {
            let z = Cyclo::zeta(m);
            // zeta^m = 1
            let mut p = Cyclo::one(m);
            for _ in 0..m {
                p = p.mul(&z);
            }
            assert!(p.is_one(), "zeta_{m}^{m} != 1");
            // Phi_m(zeta_m) = 0
            let phi = cyclotomic_poly(m);
            let mut acc = Cyclo::zero(m);
            for (i, c) in phi.iter().enumerate() {
                acc = acc.add(&Cyclo::zeta_pow(m, i as i64).scale(&BigRational::from(c.clone())));
            }
            assert!(acc.is_zero(), "Phi_{m}(zeta_{m}) != 0");
        }
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = Cyclo::zeta(4);
        let m1 = Cyclo::from_int(4, -1);
        assert_eq!(z.mul(&z), m1);
    }

    #[test]
    fn inverse_roundtrip() {
        for &m in &[3u32, 4, 5, 8, 12] {
            let x = Cyclo::zeta(m).add(&Cyclo::from_int(m, 2));
            let y = x.mul(&x.inv());
            assert!(y.is_one(), "inverse failed for m={m}");
        }
    }

    #[test]
    fn conductor_lift_consistent() {
        let z3 = Cyclo::zeta(3);
        let lifted = z3.lift(12);
        let direct = Cyclo::zeta_pow(12, 4);
        assert_eq!(lifted, direct);
        let sum = Cyclo::zeta(3).add(&Cyclo::zeta(4));
        assert_eq!(sum.conductor(), 12);
    }

    #[test]
    fn root_of_unity_sum_vanishes() {
        // 1 + zeta + zeta^2 = 0 in Q(zeta_3)
        let z = Cyclo::zeta(3);
        let s = Cyclo::one(3).add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
    }
}
