//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use aspherical::zlinalg::{smith_normal_form, FgAbelian, IntMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Invariant-factor lists `d1 | d2 | ...` (each `>= 2`) with product `<= max_order`.
pub fn finite_abelian_up_to(max_order: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, product: u64, max_order: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while product * d <= max_order {
            if prefix.last().is_none_or(|&l| d.is_multiple_of(l)) {
                prefix.push(d);
                extend(prefix, product * d, max_order, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out
}

/// A finite abelian group `Z/n1 + ... + Z/nk` with elements encoded as
/// mixed-radix integers and a full addition table.
pub struct FiniteAbelian {
    orders: Vec<u64>,
    size: usize,
    add: Vec<u8>,
    element_order: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(orders: &[u64]) -> Self {
        let size: usize = orders.iter().product::<u64>() as usize;
        assert!(size <= 64, "bitset representation holds at most 64 elements");
        let decode = |mut x: usize| -> Vec<u64> {
            orders
                .iter()
                .map(|&n| {
                    let c = x as u64 % n;
                    x /= n as usize;
                    c
                })
                .collect()
        };
        let encode = |c: &[u64]| -> usize {
            c.iter()
                .zip(orders)
                .rev()
                .fold(0usize, |acc, (&ci, &n)| acc * n as usize + ci as usize)
        };
        let mut add = vec![0u8; size * size];
        for x in 0..size {
            let cx = decode(x);
            for y in 0..size {
                let cy = decode(y);
                let s: Vec<u64> = cx.iter().zip(&cy).zip(orders).map(|((a, b), n)| (a + b) % n).collect();
                add[x * size + y] = encode(&s) as u8;
            }
        }
        let mut element_order = vec![0u64; size];
        for (x, slot) in element_order.iter_mut().enumerate() {
            let mut k = 1u64;
            let mut acc = x;
            while acc != 0 {
                acc = add[acc * size + x] as usize;
                k += 1;
            }
            *slot = k;
        }
        Self {
            orders: orders.to_vec(),
            size,
            add,
            element_order,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }

    fn full(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    /// `H + <x>` for a subgroup `H` given as a bitset.
    fn join(&self, h: u64, x: usize) -> u64 {
        let mut multiples = vec![0usize];
        let mut acc = x;
        while acc != 0 {
            multiples.push(acc);
            acc = self.add[acc * self.size + x] as usize;
        }
        let mut out = 0u64;
        for y in 0..self.size {
            if h >> y & 1 == 1 {
                for &m in &multiples {
                    out |= 1 << self.add[y * self.size + m];
                }
            }
        }
        out
    }

    /// Whether some homomorphism from `Z/m1 + ... + Z/mk` is onto this group.
    /// A generator of order `m` may go to any element whose order divides `m`.
    pub fn is_image_of(&self, source_orders: &[u64]) -> bool {
        let mut seen = HashSet::new();
        self.search(source_orders, 0, 1, &mut seen)
    }

    fn search(&self, src: &[u64], i: usize, h: u64, seen: &mut HashSet<(usize, u64)>) -> bool {
        if h == self.full() {
            return true;
        }
        if i == src.len() || !seen.insert((i, h)) {
            return false;
        }
        (0..self.size)
            .filter(|&x| src[i].is_multiple_of(self.element_order[x]))
            .any(|x| self.search(src, i + 1, self.join(h, x), seen))
    }
}

/// Exhaustive answer to "is there an epimorphism `Z^ra + Z/a.. -> Z^rb + Z/b..`?".
///
/// The free part of the target must be hit by the free part of the source, and
/// a surplus `Z` summand can only matter through its image in the finite
/// target, where it behaves like `Z/exp(T_b)`.
pub fn brute_force_epimorphism(ra: usize, ta: &[u64], rb: usize, tb: &[u64]) -> bool {
    if ra < rb {
        return false;
    }
    let target = FiniteAbelian::new(tb);
    let e = target.exponent();
    let mut source: Vec<u64> = vec![e; ra - rb];
    source.extend_from_slice(ta);
    target.is_image_of(&source)
}

pub fn group(free: usize, torsion: &[u64]) -> FgAbelian {
    FgAbelian::from_cyclic(free, torsion.iter().copied())
}

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, m: &IntMatrix, total: &mut BigInt) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = BigInt::from(if inversions % 2 == 0 { 1 } else { -1 });
        for (i, &p) in perm.iter().enumerate() {
            term *= &m[(i, p)];
        }
        *total += term;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

/// Whether the diagonal entries form a nonnegative divisor chain with zeros last
/// and every off-diagonal entry vanishes.
pub fn is_smith_form(d: &IntMatrix) -> bool {
    let k = d.rows().min(d.cols());
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && !d[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let diag: Vec<&BigInt> = (0..k).map(|i| &d[(i, i)]).collect();
    if diag.iter().any(|x| x.sign() == num_bigint::Sign::Minus) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (w[1] % w[0]).is_zero()
        }
    })
}

/// Chain complex of a cyclic group with trivial coefficients after tensoring
/// its free resolution with `Z`: `Z <-0- Z <-n- Z <-0- Z <-n- ...`.
/// `n = 0` stands for `Z` (`Z <-0- Z`, nothing above degree 1).
#[derive(Clone, Copy)]
struct CyclicComplex {
    n: i64,
}

impl CyclicComplex {
    fn top(&self) -> Option<usize> {
        (self.n == 0).then_some(1)
    }

    fn differential(&self, degree: usize) -> i64 {
        if degree >= 2 && degree.is_multiple_of(2) {
            self.n
        } else {
            0
        }
    }
}

/// Multi-indices of total degree `k` in the tensor product of the pieces.
fn cells(pieces: &[CyclicComplex], k: usize) -> Vec<Vec<usize>> {
    fn go(pieces: &[CyclicComplex], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == pieces.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = pieces[i].top().map_or(left, |t| t.min(left));
        for d in 0..=cap {
            cur.push(d);
            go(pieces, i + 1, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pieces, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Matrix of the total differential `C_k -> C_{k-1}` (rows index `C_{k-1}`).
fn total_differential(pieces: &[CyclicComplex], k: usize) -> IntMatrix {
    let src = cells(pieces, k);
    let dst = if k == 0 { Vec::new() } else { cells(pieces, k - 1) };
    let mut m = IntMatrix::zeros(dst.len(), src.len());
    for (col, c) in src.iter().enumerate() {
        let mut before = 0usize;
        for (i, &deg) in c.iter().enumerate() {
            let coeff = if deg == 0 { 0 } else { pieces[i].differential(deg) };
            if coeff != 0 {
                let mut face = c.clone();
                face[i] -= 1;
                let row = dst.iter().position(|x| *x == face).expect("face is a cell");
                let sign = if before.is_multiple_of(2) { 1 } else { -1 };
                m[(row, col)] += BigInt::from(sign * coeff);
            }
            before += deg;
        }
    }
    m
}

/// `H_k` of a finitely generated abelian group from the tensor product of the
/// resolutions of its cyclic summands, reduced with Smith normal form.
pub fn resolution_homology(g: &FgAbelian, k: usize) -> FgAbelian {
    let pieces: Vec<CyclicComplex> = g
        .cyclic_orders()
        .iter()
        .map(|o| CyclicComplex { n: o.to_i64().expect("small order") })
        .collect();
    let dim = cells(&pieces, k).len();
    let rank_out = if k == 0 {
        0
    } else {
        smith_normal_form(&total_differential(&pieces, k)).rank()
    };
    let incoming = smith_normal_form(&total_differential(&pieces, k + 1));
    let diag = incoming.diagonal();
    let rank_in = diag.iter().filter(|x| !x.is_zero()).count();
    let torsion = diag.into_iter().filter(|x| !x.is_zero());
    FgAbelian::from_cyclic(dim - rank_out - rank_in, torsion)
}
