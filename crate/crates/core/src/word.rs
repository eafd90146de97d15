//! Freely reduced words over the generator alphabet of a link group.

use std::collections::BTreeSet;
use std::fmt;

/// A generator symbol of a link group or ambient manifold group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// Overpass generator `x<i>` (1-based).
    X(u32),
    /// Surface generator `a<i>`.
    A(u32),
    /// Surface generator `b<i>` (orientable base only).
    B(u32),
    /// The fiber generator `h`.
    H,
    /// Exceptional fiber generator `l<i>`.
    L(u32),
    /// Surgery hole generator `q<i>` (manifold presentations only).
    Q(u32),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::X(i) => write!(f, "x{i}"),
            Gen::A(i) => write!(f, "a{i}"),
            Gen::B(i) => write!(f, "b{i}"),
            Gen::H => write!(f, "h"),
            Gen::L(i) => write!(f, "l{i}"),
            Gen::Q(i) => write!(f, "q{i}"),
        }
    }
}

/// A freely reduced word in the free group on `Gen` symbols.
///
/// Stored as runs `(generator, exponent)` with nonzero exponents and no two
/// adjacent runs sharing a generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    runs: Vec<(Gen, i64)>,
}

impl Word {
    pub fn one() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn letter(g: Gen, e: i64) -> Self {
        let mut w = Word::one();
        w.push(g, e);
        w
    }

    pub fn from_runs<I: IntoIterator<Item = (Gen, i64)>>(it: I) -> Self {
        let mut w = Word::one();
        for (g, e) in it {
            w.push(g, e);
        }
        w
    }

    /// Appends `g^e`, maintaining free reduction.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn extend_word(&mut self, other: &Word) {
        for &(g, e) in &other.runs {
            self.push(g, e);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_word(other);
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::one();
        for &(g, e) in self.runs.iter().rev() {
            w.push(g, -e);
        }
        w
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::one();
        for _ in 0..n.unsigned_abs() {
            w.extend_word(&base);
        }
        w
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(Gen, i64)] {
        &self.runs
    }

    /// Expands into single letters `(g, ±1)`.
    pub fn letters(&self) -> Vec<(Gen, i8)> {
        let mut out = Vec::new();
        for &(g, e) in &self.runs {
            let s: i8 = if e < 0 { -1 } else { 1 };
            for _ in 0..e.unsigned_abs() {
                out.push((g, s));
            }
        }
        out
    }

    pub fn letter_len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.runs.iter().filter(|&&(h, _)| h == g).map(|&(_, e)| e).sum()
    }

    pub fn generators(&self) -> BTreeSet<Gen> {
        self.runs.iter().map(|&(g, _)| g).collect()
    }

    /// Number of runs mentioning `g`.
    pub fn occurrences(&self, g: Gen) -> usize {
        self.runs.iter().filter(|&&(h, _)| h == g).count()
    }

    /// Replaces every `g^e` by `replacement^e` and reduces.
    pub fn substitute(&self, g: Gen, replacement: &Word) -> Word {
        let mut w = Word::one();
        for &(h, e) in &self.runs {
            if h == g {
                w.extend_word(&replacement.pow(e));
            } else {
                w.push(h, e);
            }
        }
        w
    }

    /// Cyclically permutes so the run at `k` comes first.
    pub fn rotate(&self, k: usize) -> Word {
        let mut w = Word::one();
        for i in 0..self.runs.len() {
            let (g, e) = self.runs[(k + i) % self.runs.len()];
            w.push(g, e);
        }
        w
    }
}

/// The inner automorphism `C(g)(x) = g x g^{-1}`, freely reduced.
pub fn conjugate(g: &Word, x: &Word) -> Word {
    let mut w = g.clone();
    w.extend_word(x);
    w.extend_word(&g.inverse());
    w
}

/// The commutator `[u, v] = u v u^{-1} v^{-1}`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    let mut w = u.clone();
    w.extend_word(v);
    w.extend_word(&u.inverse());
    w.extend_word(&v.inverse());
    w
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(g, e) in &self.runs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}
