//! Exact integer linear algebra: Smith normal form, cokernels and finitely
//! generated abelian groups in invariant-factor form.
//!
//! Two conventions are used throughout. Relation matrices have one row per
//! relation and one column per generator, so a group is `Z^cols / rowspan`.
//! Homomorphism matrices (see [`induced_matrix`]) have one column per source
//! generator and one row per target generator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fpgroup::{GroupHom, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("torsion coefficients {0:?} do not form a divisor chain of integers >= 2")]
    NotDivisorChain(Vec<BigInt>),
    #[error("relations do not present the stated target group")]
    InconsistentTarget,
    #[error("matrix format error on line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("cannot parse group `{0}`")]
    GroupSyntax(String),
}

/// Dense integer matrix, row-major, arbitrary precision entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix with `cols` columns from row vectors.
    pub fn from_rows<T, R>(cols: usize, rows: R) -> Self
    where
        T: Into<BigInt>,
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            let before = data.len();
            data.extend(row.into_iter().map(Into::into));
            assert_eq!(data.len() - before, cols, "row {n} has the wrong length");
            n += 1;
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    /// Square diagonal matrix.
    pub fn diagonal<T: Into<BigInt>>(entries: impl IntoIterator<Item = T>) -> Self {
        let entries: Vec<BigInt> = entries.into_iter().map(Into::into).collect();
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> IntMatrix {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot stack {} columns over {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    /// Drops all-zero rows.
    pub fn without_zero_rows(&self) -> IntMatrix {
        let cols = self.cols;
        let rows: Vec<Vec<BigInt>> = self
            .row_vectors()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(<[BigInt]>::to_vec)
            .collect();
        IntMatrix::from_rows(cols, rows)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    /// Parses rows of whitespace-separated integers, one row per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<IntMatrix, LinalgError> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut cols = None;
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<BigInt>().map_err(|_| LinalgError::Format {
                        line: n + 1,
                        message: format!("`{t}` is not an integer"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(LinalgError::Format {
                        line: n + 1,
                        message: format!("expected {c} entries, found {}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Ok(IntMatrix::from_rows(cols.unwrap_or(0), rows))
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions")
    }
}

/// One row per line, entries separated by single spaces.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_vectors() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with a
/// nonnegative divisor chain, zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Position of the smallest nonzero |entry| among `cells`, earliest wins ties.
fn smallest_nonzero(
    m: &IntMatrix,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in cells {
        let x = &m[(i, j)];
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form with transforms.
///
/// Pivot: smallest nonzero absolute value in the remaining block, ties broken
/// by lowest (row, col).
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let cells = (t..m).flat_map(|i| (t..n).map(move |j| (i, j)));
        let Some((pi, pj)) = smallest_nonzero(&d, cells) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut leftover = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                leftover |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                leftover |= !d[(t, j)].is_zero();
            }
            if leftover {
                // A remainder smaller than the pivot survived; move it in.
                let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                let (pi, pj) = smallest_nonzero(&d, cells).expect("nonzero remainder");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let p = d[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { d, u, v }
}

/// A finitely generated abelian group `Z^r + Z/d1 + ... + Z/dk` with
/// `2 <= d1 | d2 | ... | dk`. Equality is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelian {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelian {
    /// Strict constructor; `torsion` must already be a divisor chain.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, LinalgError> {
        let two = BigInt::from(2);
        let ok = torsion.iter().all(|d| *d >= two)
            && torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if ok {
            Ok(Self { free_rank, torsion })
        } else {
            Err(LinalgError::NotDivisorChain(torsion))
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic(0, [n])
    }

    /// `Z^free_rank` plus arbitrary cyclic summands, renormalized into a
    /// divisor chain. An order of 0 contributes a free summand, 1 nothing.
    pub fn from_cyclic<T: Into<BigInt>>(free_rank: usize, orders: impl IntoIterator<Item = T>) -> Self {
        let mut free_rank = free_rank;
        let mut diag = Vec::new();
        for o in orders {
            let o: BigInt = o.into();
            let o = o.abs();
            if o.is_zero() {
                free_rank += 1;
            } else if !o.is_one() {
                diag.push(o);
            }
        }
        let torsion = cokernel(&IntMatrix::diagonal(diag)).torsion;
        Self { free_rank, torsion }
    }

    pub fn rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_part(&self) -> FgAbelian {
        Self {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of cyclic summands in invariant-factor form.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Orders of the cyclic summands, free ones reported as 0, free first.
    pub fn cyclic_orders(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    pub fn direct_sum(&self, other: &FgAbelian) -> FgAbelian {
        Self::from_cyclic(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// Torsion rewritten as prime powers: prime -> exponents, descending.
    pub fn primary_decomposition(&self) -> BTreeMap<BigInt, Vec<u32>> {
        let mut out: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for d in &self.torsion {
            for (p, e) in factorize(d) {
                out.entry(p).or_default().push(e);
            }
        }
        for exps in out.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    /// Inverse of [`primary_decomposition`](Self::primary_decomposition).
    pub fn from_primary(free_rank: usize, primary: &BTreeMap<BigInt, Vec<u32>>) -> FgAbelian {
        Self::from_cyclic(
            free_rank,
            primary
                .iter()
                .flat_map(|(p, es)| es.iter().map(move |&e| num_traits::pow(p.clone(), e as usize))),
        )
    }

    /// If `part` is isomorphic to a direct summand of `self`, the complement.
    pub fn complement_of_summand(&self, part: &FgAbelian) -> Option<FgAbelian> {
        if part.free_rank > self.free_rank {
            return None;
        }
        let mut mine = self.primary_decomposition();
        for (p, exps) in part.primary_decomposition() {
            let have = mine.get_mut(&p)?;
            for e in exps {
                let pos = have.iter().position(|&x| x == e)?;
                have.remove(pos);
            }
        }
        Some(Self::from_primary(self.free_rank - part.free_rank, &mine))
    }

    /// Relation matrix of the standard presentation: one column per cyclic
    /// summand, one row `d_i e_i` per torsion coefficient.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut m = IntMatrix::zeros(self.torsion.len(), n);
        for (k, d) in self.torsion.iter().enumerate() {
            m[(k, self.free_rank + k)] = d.clone();
        }
        m
    }
}

/// Trial-division factorization, primes ascending.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Renders as `Z^r + Z/d1 + ...`, `Z` for rank one, `0` when trivial.
impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Accepts sums of `0`, `Z`, `Z^r`, `Z/d` joined by `+`.
impl FromStr for FgAbelian {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LinalgError::GroupSyntax(s.to_string());
        let mut free = 0usize;
        let mut orders: Vec<BigInt> = Vec::new();
        if s.trim().is_empty() {
            return Err(bad());
        }
        for term in s.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if term == "0" {
                continue;
            }
            let Some(rest) = term.strip_prefix('Z') else {
                return Err(bad());
            };
            if rest.is_empty() {
                free += 1;
            } else if let Some(r) = rest.strip_prefix('^') {
                free += r.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = rest.strip_prefix('/') {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                orders.push(d);
            } else {
                return Err(bad());
            }
        }
        Ok(FgAbelian::from_cyclic(free, orders))
    }
}

/// `Z^cols / rowspan(a)` in invariant-factor form.
pub fn cokernel(a: &IntMatrix) -> FgAbelian {
    let snf = smith_normal_form(&a.without_zero_rows());
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion = diag.into_iter().filter(|x| *x > BigInt::one()).collect();
    FgAbelian {
        free_rank: a.cols - nonzero,
        torsion,
    }
}

/// Exponent-sum matrix of the relators, rows = relators.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let n = p.generator_count();
    IntMatrix::from_rows(n, p.relators().iter().map(|r| r.exponent_vector(n)))
}

pub fn abelianization(p: &Presentation) -> FgAbelian {
    cokernel(&relation_matrix(p))
}

pub fn rank(g: &FgAbelian) -> usize {
    g.rank()
}

pub fn primary_decomposition(g: &FgAbelian) -> BTreeMap<BigInt, Vec<u32>> {
    g.primary_decomposition()
}

/// Whether some surjective homomorphism `a -> b` exists.
///
/// `b` is a quotient of `a` iff `rank a >= rank b` and, for every prime `p`
/// and `k >= 1`, `rank a + #{a's p-exponents >= k} >= rank b + #{b's p-exponents >= k}`.
pub fn exists_epimorphism(a: &FgAbelian, b: &FgAbelian) -> bool {
    if a.rank() < b.rank() {
        return false;
    }
    let pa = a.primary_decomposition();
    let pb = b.primary_decomposition();
    let empty = Vec::new();
    pb.iter().all(|(p, eb)| {
        let ea = pa.get(p).unwrap_or(&empty);
        let top = eb.first().copied().unwrap_or(0);
        (1..=top).all(|k| {
            let ca = ea.iter().filter(|&&e| e >= k).count();
            let cb = eb.iter().filter(|&&e| e >= k).count();
            a.rank() + ca >= b.rank() + cb
        })
    })
}

/// Entry `(i, j)` is the exponent sum of target generator `i` in the image of
/// source generator `j`.
pub fn induced_matrix(f: &GroupHom) -> IntMatrix {
    let rows = f.target().generator_count();
    let cols = f.source().generator_count();
    let mut m = IntMatrix::zeros(rows, cols);
    for (j, w) in f.images().iter().enumerate() {
        for (i, e) in w.exponent_vector(rows).into_iter().enumerate() {
            m[(i, j)] = BigInt::from(e);
        }
    }
    m
}

/// Whether the abelian map with matrix `f_matrix` (target gens x source gens)
/// hits all of `Z^rows / rowspan(target_relations)`; `target` must be the
/// group those relations present.
pub fn is_surjective_onto(
    f_matrix: &IntMatrix,
    target: &FgAbelian,
    target_relations: &IntMatrix,
) -> Result<bool, LinalgError> {
    if f_matrix.rows() != target_relations.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "map has {} rows but the target has {} generators",
            f_matrix.rows(),
            target_relations.cols()
        )));
    }
    if cokernel(target_relations) != *target {
        return Err(LinalgError::InconsistentTarget);
    }
    let block = f_matrix.transpose().vstack(target_relations)?;
    Ok(cokernel(&block).is_trivial())
}

/// Row-style Hermite normal form: rows span the same lattice, pivots are
/// positive and entries above each pivot are reduced into `[0, pivot)`.
/// Zero rows are moved to the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid down column c among rows r.. until one nonzero entry is left.
        loop {
            let cells = (r..m).map(|i| (i, c));
            let Some((p, _)) = smallest_nonzero(&h, cells) else {
                break;
            };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                h.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    h
}

/// Basis (as rows) of `{x : x * a = 0}`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let rows: Vec<Vec<BigInt>> = (r..a.rows()).map(|i| snf.u.row(i).to_vec()).collect();
    IntMatrix::from_rows(a.rows(), rows)
}

/// Whether `v` lies in the integer row span of `a`.
pub fn row_span_contains(a: &IntMatrix, v: &[BigInt]) -> Result<bool, LinalgError> {
    if v.len() != a.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            v.len(),
            a.cols()
        )));
    }
    // rowspan(a) V = rowspan(D), so test v V against the diagonal.
    let snf = smith_normal_form(a);
    let w = &IntMatrix::from_rows(v.len(), [v.to_vec()]) * &snf.v;
    let diag = snf.diagonal();
    Ok((0..a.cols()).all(|j| {
        let x = &w[(0, j)];
        match diag.get(j) {
            Some(d) if !d.is_zero() => x.is_multiple_of(d),
            _ => x.is_zero(),
        }
    }))
}

/// Generators (rows, in source coordinates) of the kernel of the abelian map
/// `map: Z^n / source_relations -> Z^m / target_relations`, where `map` is
/// `m x n`. The result is a generating set modulo the source relations.
pub fn kernel_of_map(map: &IntMatrix, target_relations: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    if map.rows() != target_relations.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "map has {} rows but the target has {} generators",
            map.rows(),
            target_relations.cols()
        )));
    }
    let n = map.cols();
    let stacked = map.transpose().vstack(&target_relations.without_zero_rows())?;
    let k = left_kernel(&stacked);
    let rows: Vec<Vec<BigInt>> = k
        .row_vectors()
        .map(|r| r[..n].to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(IntMatrix::from_rows(n, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().copied()))
    }

    fn g(s: &str) -> FgAbelian {
        s.parse().unwrap()
    }

    fn check_snf(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(2)).d, IntMatrix::identity(2));
        assert_eq!(check_snf(&m(&[&[2, 4], &[6, 8]])).d, IntMatrix::diagonal([2, 4]));
        assert_eq!(check_snf(&m(&[&[0]])).d, m(&[&[0]]));
        let empty = IntMatrix::zeros(0, 3);
        assert_eq!(check_snf(&empty).d, empty);
        let s = check_snf(&m(&[&[0, 0, 6], &[0, 4, 0], &[-3, 0, 0]]));
        assert_eq!(s.diagonal(), vec![1.into(), 6.into(), 12.into()]);
    }

    #[test]
    fn snf_is_deterministic() {
        let a = m(&[&[3, -7, 2], &[9, 4, -5], &[0, 6, 1]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::zeros(1, 2)), FgAbelian::free(2));
        assert_eq!(cokernel(&m(&[&[2, 0], &[0, 3]])), g("Z/6"));
        assert_eq!(cokernel(&IntMatrix::zeros(1, 6)), FgAbelian::free(6));
        assert_eq!(cokernel(&IntMatrix::identity(3)), FgAbelian::trivial());
    }

    #[test]
    fn group_text_round_trip() {
        assert_eq!(g("Z^4+Z/2").to_string(), "Z^4 + Z/2");
        assert_eq!(g("Z/2 + Z/3").to_string(), "Z/6");
        assert_eq!(g("Z + Z").to_string(), "Z^2");
        assert_eq!(g("0").to_string(), "0");
        assert_eq!(g("Z/1").to_string(), "0");
        assert_eq!(g("Z/4+Z/2").torsion(), &[2.into(), 4.into()]);
        assert!("Q".parse::<FgAbelian>().is_err());
        assert!("Z/0".parse::<FgAbelian>().is_err());
        assert!("Z/".parse::<FgAbelian>().is_err());
        assert!("".parse::<FgAbelian>().is_err());
    }

    #[test]
    fn strict_constructor() {
        assert!(FgAbelian::new(1, vec![2.into(), 4.into()]).is_ok());
        assert!(FgAbelian::new(0, vec![2.into(), 3.into()]).is_err());
        assert!(FgAbelian::new(0, vec![1.into()]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&g("Z^4+Z/2")), 4);
        assert_eq!(rank(&g("Z/6")), 0);
        assert_eq!(rank(&g("Z^2")), 2);
    }

    #[test]
    fn primary_examples() {
        let p = primary_decomposition(&g("Z/6"));
        assert_eq!(p, BTreeMap::from([(2.into(), vec![1]), (3.into(), vec![1])]));
        let p = primary_decomposition(&g("Z/2+Z/4"));
        assert_eq!(p, BTreeMap::from([(2.into(), vec![2, 1])]));
        let x = g("Z^2 + Z/12 + Z/36");
        assert_eq!(FgAbelian::from_primary(2, &x.primary_decomposition()), x);
    }

    #[test]
    fn epimorphism_examples() {
        assert!(!exists_epimorphism(&g("Z^4"), &g("Z^4+Z/2")));
        assert!(exists_epimorphism(&g("Z^2"), &g("Z^2")));
        assert!(!exists_epimorphism(&g("Z/2+Z/2"), &g("Z/4")));
        assert!(exists_epimorphism(&g("Z"), &g("Z/4")));
        assert!(exists_epimorphism(&g("Z^5"), &g("Z^4+Z/2")));
        assert!(!exists_epimorphism(&g("Z/4"), &g("Z")));
    }

    #[test]
    fn surjectivity_examples() {
        let z3 = FgAbelian::free(3);
        let none = IntMatrix::zeros(0, 3);
        assert!(is_surjective_onto(&IntMatrix::identity(3), &z3, &none).unwrap());
        let z = FgAbelian::free(1);
        assert!(!is_surjective_onto(&m(&[&[2]]), &z, &IntMatrix::zeros(0, 1)).unwrap());
        // Z^2 -> Z/2, both generators to the class of 1.
        let z2 = g("Z/2");
        assert!(is_surjective_onto(&m(&[&[1, 1]]), &z2, &m(&[&[2]])).unwrap());
        assert!(!is_surjective_onto(&m(&[&[2, 0]]), &z2, &m(&[&[2]])).unwrap());
        assert!(matches!(
            is_surjective_onto(&m(&[&[1, 1]]), &z2, &IntMatrix::zeros(0, 2)),
            Err(LinalgError::DimensionMismatch(_))
        ));
        assert_eq!(
            is_surjective_onto(&m(&[&[1, 1]]), &z, &m(&[&[2]])),
            Err(LinalgError::InconsistentTarget)
        );
    }

    #[test]
    fn summand_complement() {
        let h = g("Z^4 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2");
        assert_eq!(h.complement_of_summand(&g("Z^4+Z/2")), Some(g("Z/2+Z/2+Z/2+Z/2+Z/2+Z/2")));
        assert_eq!(g("Z/4").complement_of_summand(&g("Z/2")), None);
        assert_eq!(g("Z").complement_of_summand(&g("Z^2")), None);
    }

    #[test]
    fn lattice_helpers() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert!(row_span_contains(&a, &[4.into(), (-3).into()]).unwrap());
        assert!(!row_span_contains(&a, &[1.into(), 0.into()]).unwrap());
        let k = left_kernel(&m(&[&[1, 2], &[2, 4], &[0, 1]]));
        assert_eq!(k.rows(), 1);
        assert!((&k * &m(&[&[1, 2], &[2, 4], &[0, 1]])).is_zero());
        // Z^2 -> Z/2, (x, y) -> x + y: kernel generated by (1,-1),(2,0) up to relations.
        let ker = kernel_of_map(&m(&[&[1, 1]]), &m(&[&[2]])).unwrap();
        assert_eq!(cokernel(&ker), g("Z/2"));
    }

    #[test]
    fn hermite_examples() {
        let h = hermite_normal_form(&m(&[&[2, 4], &[3, 1], &[0, 0], &[1, 1]]));
        assert_eq!(h, m(&[&[1, 1], &[0, 2], &[0, 0], &[0, 0]]));
        let h = hermite_normal_form(&m(&[&[-4, 6, 2], &[2, 0, 4]]));
        assert_eq!(cokernel(&h), cokernel(&m(&[&[-4, 6, 2], &[2, 0, 4]])));
        assert!(h[(0, 0)] > BigInt::zero());
        assert!(h[(1, 0)].is_zero());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).determinant().unwrap(), 1.into());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), (-1).into());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), 0.into());
        assert!(IntMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn matrix_text() {
        let a = IntMatrix::parse_text("1 2\n\n3 -4 # c\n").unwrap();
        assert_eq!(a, m(&[&[1, 2], &[3, -4]]));
        assert_eq!(a.to_string(), "1 2\n3 -4\n");
        assert!(IntMatrix::parse_text("1 2\n3").is_err());
        assert!(IntMatrix::parse_text("1 x").is_err());
        assert_eq!(IntMatrix::parse_text("").unwrap().rows(), 0);
    }
}
