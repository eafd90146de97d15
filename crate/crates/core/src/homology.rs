//! First homology of link complements: abelianization, Smith normal form
//! and homology classes read off the diagram.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diagram::{ArrowDiagram, ComponentPartition, EdgeKind};
use crate::presentation::{build_presentation, seifert_group, GroupPresentation, PresentationError};
use crate::word::Gen;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self[(a, j)];
            self[(a, j)] = v;
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "\t")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `u * a * v = s` with `s` diagonal satisfying the divisibility chain and
/// `u`, `v` unimodular. `v_inv` is maintained so coordinates can be pulled
/// back to the original generators.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries (positive, divisibility chain).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n).map(|i| self.s[(i, i)].clone()).take_while(|d| !d.is_zero()).collect()
    }
}

/// Smith normal form with smallest-nonzero-pivot selection.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let mut v_inv = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    let mut pos = 0;
    while pos < n {
        // Smallest nonzero entry of the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in pos..s.rows {
            for j in pos..s.cols {
                if !s[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(pos, pi);
        u.swap_rows(pos, pi);
        s.swap_cols(pos, pj);
        v.swap_cols(pos, pj);
        v_inv.swap_rows(pos, pj);

        let mut clean = true;
        for i in pos + 1..s.rows {
            if s[(i, pos)].is_zero() {
                continue;
            }
            let q = -(&s[(i, pos)] / &s[(pos, pos)]);
            if !q.is_zero() {
                s.add_row(i, pos, &q);
                u.add_row(i, pos, &q);
            }
            if !s[(i, pos)].is_zero() {
                clean = false;
            }
        }
        for j in pos + 1..s.cols {
            if s[(pos, j)].is_zero() {
                continue;
            }
            let q = -(&s[(pos, j)] / &s[(pos, pos)]);
            if !q.is_zero() {
                s.add_col(j, pos, &q);
                v.add_col(j, pos, &q);
                v_inv.add_row(pos, j, &(-q));
            }
            if !s[(pos, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // smaller remainders now exist; re-pivot this position
        }
        // Divisibility sweep: pivot must divide every remaining entry.
        let mut fixed = true;
        'scan: for i in pos + 1..s.rows {
            for j in pos + 1..s.cols {
                if !(&s[(i, j)] % &s[(pos, pos)]).is_zero() {
                    let one = BigInt::one();
                    s.add_row(pos, i, &one);
                    u.add_row(pos, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            pos += 1;
        }
    }
    // Positive diagonal.
    for i in 0..n {
        if s[(i, i)].is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }
    SnfResult { s, u, v, v_inv }
}

/// Image of a generator in `Z^rank + sum Z_{d_i}` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HImage {
    /// One entry per torsion factor, reduced mod the factor.
    pub torsion: Vec<BigInt>,
    /// Free coordinates.
    pub free: Vec<BigInt>,
}

impl HImage {
    pub fn zero(torsion_count: usize, rank: usize) -> Self {
        HImage {
            torsion: vec![BigInt::zero(); torsion_count],
            free: vec![BigInt::zero(); rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(|x| x.is_zero()) && self.free.iter().all(|x| x.is_zero())
    }

    pub fn add_scaled(&mut self, other: &HImage, k: &BigInt, orders: &[BigInt]) {
        for (i, t) in self.torsion.iter_mut().enumerate() {
            *t = (&*t + k * &other.torsion[i]).mod_floor(&orders[i]);
        }
        for (i, f) in self.free.iter_mut().enumerate() {
            *f += k * &other.free[i];
        }
    }
}

/// A finitely generated abelian group together with generator images.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    pub rank: usize,
    /// Invariant factors `d_1 | d_2 | ...`, each >= 2.
    pub torsion: Vec<BigInt>,
    /// Image of every presentation generator.
    pub images: BTreeMap<Gen, HImage>,
    /// Image of the collapsed generator of each link component (1-based).
    pub component_images: Vec<HImage>,
    /// Signs used when collapsing overpass generators, per generator 1..r.
    pub x_signs: Vec<i8>,
    /// Each torsion coordinate expressed as a combination of presentation
    /// generators (rows of `V^{-1}`), used to restrict characters.
    pub torsion_combinations: Vec<Vec<(Gen, BigInt)>>,
}

impl AbelianGroup {
    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        let mut o = BigInt::one();
        for d in &self.torsion {
            o *= d;
        }
        Some(o)
    }

    pub fn torsion_order(&self) -> BigInt {
        let mut o = BigInt::one();
        for d in &self.torsion {
            o *= d;
        }
        o
    }

    /// Structure line like `Z^3 (+) Z_2`.
    pub fn structure_string(&self) -> String {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z_{d}"));
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        parts.join(" (+) ")
    }

    /// Image of a formal product of generators.
    pub fn image_of_combination(&self, comb: &[(Gen, i64)]) -> HImage {
        let mut img = HImage::zero(self.torsion.len(), self.rank);
        for &(g, e) in comb {
            let gi = self.images.get(&g).expect("unknown generator");
            img.add_scaled(gi, &BigInt::from(e), &self.torsion);
        }
        img
    }
}

/// Collapsed abelianization: one column per link component, one per surface
/// generator.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub matrix: IntMatrix,
    pub columns: Vec<AbCol>,
    /// Sign with which overpass generator `x_i` maps onto its component
    /// column (entry `i-1`).
    pub x_signs: Vec<i8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbCol {
    Component(u32),
    Generator(Gen),
}

impl fmt::Display for AbCol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbCol::Component(c) => write!(f, "g{c}"),
            AbCol::Generator(g) => write!(f, "{g}"),
        }
    }
}

/// Exponent-sum row of a relator over the given column layout.
fn exponent_row(
    word: &crate::word::Word,
    col_of: &BTreeMap<Gen, usize>,
    x_signs: &[i8],
    comp: &ComponentPartition,
    cols: usize,
) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); cols];
    for &(g, e) in word.runs() {
        match g {
            Gen::X(i) => {
                let c = comp.assignment[(i - 1) as usize];
                let sign = x_signs[(i - 1) as usize] as i64;
                let col = col_of[&Gen::X(0)] + (c - 1) as usize; // component block base
                row[col] += BigInt::from(e * sign);
            }
            _ => {
                let col = col_of[&g];
                row[col] += BigInt::from(e);
            }
        }
    }
    row
}

/// Determines the sign with which each overpass generator collapses onto its
/// component generator. Identification edges are extracted from relators
/// whose abelianized support consists of exactly two overpass letters with
/// unit coefficients.
fn component_signs(p: &GroupPresentation, comp: &ComponentPartition) -> Vec<i8> {
    let r = comp.assignment.len();
    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    for rel in &p.relators {
        let mut support: BTreeMap<u32, i64> = BTreeMap::new();
        for &(g, e) in rel.word.runs() {
            if let Gen::X(i) = g {
                *support.entry(i).or_insert(0) += e;
            }
        }
        support.retain(|_, v| *v != 0);
        if support.len() == 2 {
            let entries: Vec<(u32, i64)> = support.into_iter().collect();
            let ((i, ci), (j, cj)) = (entries[0], entries[1]);
            if ci.abs() == 1 && cj.abs() == 1 {
                // ci*xi + cj*xj = 0  =>  xi = xj^{-ci*cj}
                edges.push(((i - 1) as usize, (j - 1) as usize, (-(ci * cj)) as i8));
            }
        }
    }
    let mut signs: Vec<i8> = vec![0; r];
    // BFS per component from the smallest generator.
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); r];
    for &(i, j, s) in &edges {
        adj[i].push((j, s));
        adj[j].push((i, s));
    }
    for start in 0..r {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &(j, s) in &adj[i] {
                if signs[j] == 0 {
                    signs[j] = signs[i] * s;
                    queue.push_back(j);
                }
                // Conflicting edges stay as nonzero rows; nothing to fix here.
            }
        }
    }
    signs
}

/// Collapses overpass generators of each link component onto a single column
/// and takes exponent sums. Conjugations die in the quotient, so rows of
/// identification relators become zero unless the component carries a sign
/// frustration, which is exactly how 2-torsion relations appear.
pub fn abelianize(p: &GroupPresentation, comp: &ComponentPartition) -> Abelianization {
    let x_signs = component_signs(p, comp);
    let nu = comp.nu as usize;
    let mut columns: Vec<AbCol> = (1..=comp.nu).map(AbCol::Component).collect();
    for &g in &p.generators {
        if !matches!(g, Gen::X(_)) {
            columns.push(AbCol::Generator(g));
        }
    }
    let mut col_of: BTreeMap<Gen, usize> = BTreeMap::new();
    col_of.insert(Gen::X(0), 0); // component block base marker
    for (idx, col) in columns.iter().enumerate() {
        if let AbCol::Generator(g) = col {
            col_of.insert(*g, idx);
        }
    }
    let _ = nu;
    let mut matrix = IntMatrix::zero(p.relators.len(), columns.len());
    for (ri, rel) in p.relators.iter().enumerate() {
        let row = exponent_row(&rel.word, &col_of, &x_signs, comp, columns.len());
        for (j, v) in row.into_iter().enumerate() {
            matrix[(ri, j)] = v;
        }
    }
    Abelianization { matrix, columns, x_signs }
}

/// Full abelianization without component collapsing: one column per
/// presentation generator. Used as an independent cross-check.
pub fn abelianize_full(p: &GroupPresentation) -> IntMatrix {
    let mut col_of: BTreeMap<Gen, usize> = BTreeMap::new();
    for (i, &g) in p.generators.iter().enumerate() {
        col_of.insert(g, i);
    }
    let mut m = IntMatrix::zero(p.relators.len(), p.generators.len());
    for (ri, rel) in p.relators.iter().enumerate() {
        for &(g, e) in rel.word.runs() {
            let j = col_of[&g];
            m[(ri, j)] += BigInt::from(e);
        }
    }
    m
}

/// Rank and invariant factors of an integer matrix presentation.
pub fn group_of_matrix(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let rank = m.cols - diag.len();
    let torsion: Vec<BigInt> = diag.into_iter().filter(|d| *d > BigInt::one()).collect();
    (rank, torsion)
}

/// First homology of the presented group, with generator images.
pub fn h1(p: &GroupPresentation, comp: &ComponentPartition) -> AbelianGroup {
    let ab = abelianize(p, comp);
    let snf = smith_normal_form(&ab.matrix);
    let m = ab.matrix.cols;
    let diag = snf.diagonal();

    // Column j of S corresponds to coordinate j; keep torsion (d >= 2) and
    // free (beyond the diagonal support) positions.
    let mut torsion_pos: Vec<(usize, BigInt)> = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if *d > BigInt::one() {
            torsion_pos.push((i, d.clone()));
        }
    }
    let free_pos: Vec<usize> = (diag.len()..m).collect();
    let torsion: Vec<BigInt> = torsion_pos.iter().map(|(_, d)| d.clone()).collect();
    let rank = free_pos.len();

    let coord_image = |col: usize| -> HImage {
        let mut img = HImage::zero(torsion.len(), rank);
        for (ti, &(tp, ref d)) in torsion_pos.iter().enumerate() {
            img.torsion[ti] = snf.v[(col, tp)].mod_floor(d);
        }
        for (fi, &fp) in free_pos.iter().enumerate() {
            img.free[fi] = snf.v[(col, fp)].clone();
        }
        img
    };

    let mut component_images = Vec::new();
    let mut images: BTreeMap<Gen, HImage> = BTreeMap::new();
    for (j, col) in ab.columns.iter().enumerate() {
        match col {
            AbCol::Component(_) => component_images.push(coord_image(j)),
            AbCol::Generator(g) => {
                images.insert(*g, coord_image(j));
            }
        }
    }
    for &g in &p.generators {
        if let Gen::X(i) = g {
            let c = comp.assignment[(i - 1) as usize] as usize;
            let sign = ab.x_signs[(i - 1) as usize] as i64;
            let mut img = HImage::zero(torsion.len(), rank);
            img.add_scaled(&component_images[c - 1], &BigInt::from(sign), &torsion);
            images.insert(g, img);
        }
    }

    // Torsion coordinate i corresponds to row `torsion_pos[i].0` of V^{-1}.
    let mut torsion_combinations = Vec::new();
    for &(tp, _) in &torsion_pos {
        let mut comb: Vec<(Gen, BigInt)> = Vec::new();
        for (j, col) in ab.columns.iter().enumerate() {
            let c = snf.v_inv[(tp, j)].clone();
            if c.is_zero() {
                continue;
            }
            match col {
                AbCol::Component(ci) => {
                    // Use the smallest-index overpass generator of the
                    // component with its collapse sign.
                    let gi = ab
                        .x_signs
                        .iter()
                        .enumerate()
                        .find(|(idx, _)| comp.assignment[*idx] == *ci)
                        .map(|(idx, &s)| (idx as u32 + 1, s))
                        .expect("component without generators");
                    comb.push((Gen::X(gi.0), c * BigInt::from(gi.1 as i64)));
                }
                AbCol::Generator(g) => comb.push((*g, c)),
            }
        }
        torsion_combinations.push(comb);
    }

    AbelianGroup {
        rank,
        torsion,
        images,
        component_images,
        x_signs: ab.x_signs,
        torsion_combinations,
    }
}

/// Homology class coefficients of one component, read off the diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    pub eta_a: Vec<i64>,
    pub eta_b: Vec<i64>,
    pub eta_h: i64,
    pub eta_l: Vec<i64>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.eta_a.iter().all(|&x| x == 0)
            && self.eta_b.iter().all(|&x| x == 0)
            && self.eta_h == 0
            && self.eta_l.iter().all(|&x| x == 0)
    }

    /// The class as a word in the ambient manifold generators.
    pub fn combination(&self) -> Vec<(Gen, i64)> {
        let mut comb = Vec::new();
        for (i, &e) in self.eta_a.iter().enumerate() {
            comb.push((Gen::A(i as u32 + 1), e));
        }
        for (i, &e) in self.eta_b.iter().enumerate() {
            comb.push((Gen::B(i as u32 + 1), e));
        }
        comb.push((Gen::H, self.eta_h));
        for (i, &e) in self.eta_l.iter().enumerate() {
            comb.push((Gen::L(i as u32 + 1), e));
        }
        comb
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("component {0} does not exist")]
    UnknownComponent(u32),
}

/// Per-component class coefficients by the boundary/arrow/winding sums.
pub fn homology_class(d: &ArrowDiagram, component: u32) -> Result<HomologyClass, HomologyError> {
    let comp = d.components();
    if component == 0 || component > comp.nu {
        return Err(HomologyError::UnknownComponent(component));
    }
    let g = d.seifert.genus as usize;
    let t = d.t();
    let in_comp = |i: u32| comp.assignment[(i - 1) as usize] == component;

    let mut eta_a = vec![0i64; g];
    let mut eta_b = vec![0i64; if d.seifert.base_orientable { g } else { 0 }];
    for j in 1..=t {
        let b = &d.boundary[j - 1];
        if !in_comp(d.gen_plus(j)) {
            continue;
        }
        let e = d.eps_of(j) as i64;
        match b.edge.kind {
            EdgeKind::A => eta_a[(b.edge.index - 1) as usize] += e,
            EdgeKind::B => eta_b[(b.edge.index - 1) as usize] += e,
        }
    }
    let mut eta_h = 0i64;
    for j in 1..=d.n() {
        if in_comp(d.gen_pre_arrow(j)) {
            eta_h += d.eps_of(2 * t + j) as i64;
        }
    }
    let mut eta_l = vec![0i64; d.k()];
    for (f, y) in d.fiber_words.iter().enumerate() {
        for &(i, e) in y {
            if in_comp(i) {
                eta_l[f] += e as i64;
            }
        }
    }
    Ok(HomologyClass { eta_a, eta_b, eta_h, eta_l })
}

/// H1 of the ambient manifold, computed from the empty-link presentation.
pub fn manifold_h1(s: &crate::diagram::SeifertData) -> AbelianGroup {
    let empty = ArrowDiagram {
        seifert: s.clone(),
        r: 0,
        boundary: Vec::new(),
        arrows: Vec::new(),
        fiber_words: vec![Vec::new(); s.k()],
        eps: Vec::new(),
        crossings: Vec::new(),
        idents: Vec::new(),
    };
    let p = build_presentation(&empty).expect("empty diagram is valid");
    h1(&p, &empty.components())
}

/// H1 of the Seifert manifold from its own group presentation.
pub fn seifert_h1(s: &crate::diagram::SeifertData) -> AbelianGroup {
    let p = seifert_group(s);
    let comp = ComponentPartition { nu: 0, assignment: Vec::new() };
    h1(&p, &comp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    fn example61() -> ArrowDiagram {
        parse_diagram(include_str!("../fixtures/example61.diag")).unwrap()
    }

    #[test]
    fn snf_single_entry() {
        let m = IntMatrix::from_rows(vec![vec![2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_diag_1_2_0() {
        let m = IntMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]);
        let (rank, torsion) = group_of_matrix(&m);
        assert_eq!(rank, 1);
        assert_eq!(torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_transforms_are_unimodular() {
        let m = IntMatrix::from_rows(vec![
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
        ]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s);
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(3));
        // Known invariant factors of this classic example: 2, 6, 12.
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn example61_h1() {
        let d = example61();
        let p = build_presentation(&d).unwrap();
        let comp = d.components();
        let h = h1(&p, &comp);
        assert_eq!(h.rank, 3);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        // l and h land on the torsion generator, a and b are free.
        let hl = &h.images[&Gen::L(1)];
        let hh = &h.images[&Gen::H];
        assert_eq!(hl.torsion, hh.torsion);
        assert!(!hh.torsion[0].is_zero());
        assert!(hh.free.iter().all(|x| x.is_zero()));
        assert!(hl.free.iter().all(|x| x.is_zero()));
        let ha = &h.images[&Gen::A(1)];
        let hb = &h.images[&Gen::B(1)];
        assert!(ha.torsion[0].is_zero() && hb.torsion[0].is_zero());
        assert!(!ha.free.iter().all(|x| x.is_zero()));
        assert!(!hb.free.iter().all(|x| x.is_zero()));
        // Full-matrix cross-check.
        let (rank2, torsion2) = group_of_matrix(&abelianize_full(&p));
        assert_eq!((h.rank, h.torsion.clone()), (rank2, torsion2));
    }

    #[test]
    fn example61_manifold_h1() {
        let d = example61();
        let h = manifold_h1(&d.seifert);
        assert_eq!(h.rank, 2);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        let hs = seifert_h1(&d.seifert);
        assert_eq!((hs.rank, hs.torsion), (h.rank, h.torsion));
    }

    #[test]
    fn example61_class_trivial() {
        let d = example61();
        let c = homology_class(&d, 1).unwrap();
        assert!(c.is_zero());
        assert!(homology_class(&d, 2).is_err());
    }

    #[test]
    fn abelianize_collapsed_columns() {
        let d = example61();
        let p = build_presentation(&d).unwrap();
        let comp = d.components();
        let ab = abelianize(&p, &comp);
        assert_eq!(ab.columns.len(), 5); // g, a, b, h, l
        // Row space reduces to l^-2 = 1, h^2 = 1, l = h: check group equality
        // against that target presentation.
        let target = IntMatrix::from_rows(vec![
            vec![0, 0, 0, 0, -2],
            vec![0, 0, 0, 2, 0],
            vec![0, 0, 0, -1, 1],
        ]);
        assert_eq!(group_of_matrix(&ab.matrix), group_of_matrix(&target));
        assert!(ab.x_signs.iter().all(|&s| s == 1));
    }

    #[test]
    fn commutator_row_is_zero() {
        use crate::presentation::{Family, Relator};
        use crate::word::Word;
        let p = GroupPresentation {
            generators: vec![Gen::X(1), Gen::X(2)],
            relators: vec![Relator {
                family: Family::W,
                word: Word::from_runs([(Gen::X(1), 1), (Gen::X(2), 1), (Gen::X(1), -1), (Gen::X(2), -1)]),
            }],
        };
        let comp = ComponentPartition { nu: 2, assignment: vec![1, 2] };
        let ab = abelianize(&p, &comp);
        assert!( (0..2).all(|j| ab.matrix[(0, j)].is_zero()) );
    }

    #[test]
    fn single_arrow_loop_class() {
        // A loop through one +1 arrow and nothing else (a kink keeps the
        // overpass from starting and ending on the arrow): eta_h = 1.
        let text = concat!(
            "SURFACE O 1\n",
            "SIGNS gamma +1 delta +1\n",
            "COUNTS r 3 t 0 n 1\n",
            "ARROW 1 EPS +1 Z 1\n",
            "CROSSING OVER x1 IN x1 OUT x3 SIGN +\n",
            "IDENT x2 x3\n",
        );
        let d = parse_diagram(text).unwrap();
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        let c = homology_class(&d, 1).unwrap();
        assert_eq!(c.eta_h, 1);
        assert!(c.eta_a.iter().all(|&x| x == 0));
        assert!(c.eta_b.iter().all(|&x| x == 0));
        assert_eq!(d.components().nu, 1);
    }
}
