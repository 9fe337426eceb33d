//! Integral homology of finitely generated abelian groups, assembled from
//! cyclic pieces with the Künneth formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::zlinalg::FgAbelian;

/// Degree cap used when the caller does not supply one.
pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("invalid cyclic modulus {0}")]
    InvalidModulus(BigInt),
    #[error("graded group known through degree {have}, degree {need} requested")]
    InsufficientDegrees { have: usize, need: usize },
}

/// Groups indexed by degree `0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAbelian {
    groups: Vec<FgAbelian>,
}

impl GradedAbelian {
    pub fn new(groups: Vec<FgAbelian>) -> Self {
        Self { groups }
    }

    /// Homology of the trivial group: `Z` in degree 0.
    pub fn point(max_degree: usize) -> Self {
        let mut groups = vec![FgAbelian::trivial(); max_degree + 1];
        groups[0] = FgAbelian::free(1);
        Self { groups }
    }

    pub fn max_degree(&self) -> usize {
        self.groups.len().saturating_sub(1)
    }

    pub fn degree(&self, k: usize) -> Option<&FgAbelian> {
        self.groups.get(k)
    }

    pub fn groups(&self) -> &[FgAbelian] {
        &self.groups
    }
}

/// `H_k` of `Z` (`n = 0`), the trivial group (`n = 1`) or `Z/n`.
pub fn homology_cyclic(n: &BigInt, k: usize) -> Result<FgAbelian, HomologyError> {
    if n.is_negative() {
        return Err(HomologyError::InvalidModulus(n.clone()));
    }
    Ok(match k {
        0 => FgAbelian::free(1),
        _ if n.is_zero() => {
            if k == 1 {
                FgAbelian::free(1)
            } else {
                FgAbelian::trivial()
            }
        }
        _ if k % 2 == 1 => FgAbelian::from_cyclic(0, [n.clone()]),
        _ => FgAbelian::trivial(),
    })
}

pub fn cyclic_graded(n: &BigInt, max_degree: usize) -> Result<GradedAbelian, HomologyError> {
    (0..=max_degree)
        .map(|k| homology_cyclic(n, k))
        .collect::<Result<Vec<_>, _>>()
        .map(GradedAbelian::new)
}

/// `a ⊗ b`.
pub fn tensor(a: &FgAbelian, b: &FgAbelian) -> FgAbelian {
    let free = a.rank() * b.rank();
    let mut orders: Vec<BigInt> = Vec::new();
    // Z ⊗ Z/n = Z/n on both sides
    for _ in 0..a.rank() {
        orders.extend(b.torsion().iter().cloned());
    }
    for _ in 0..b.rank() {
        orders.extend(a.torsion().iter().cloned());
    }
    for m in a.torsion() {
        for n in b.torsion() {
            orders.push(m.gcd(n));
        }
    }
    FgAbelian::from_cyclic(free, orders)
}

/// `Tor(a, b)`; only torsion pairs contribute.
pub fn tor(a: &FgAbelian, b: &FgAbelian) -> FgAbelian {
    let orders = a
        .torsion()
        .iter()
        .flat_map(|m| b.torsion().iter().map(move |n| m.gcd(n)));
    FgAbelian::from_cyclic(0, orders)
}

/// Degree-`n` homology of a product from the homologies of the factors.
pub fn kunneth(ha: &GradedAbelian, hb: &GradedAbelian, n: usize) -> Result<FgAbelian, HomologyError> {
    for h in [ha, hb] {
        if h.groups.len() <= n {
            return Err(HomologyError::InsufficientDegrees {
                have: h.max_degree(),
                need: n,
            });
        }
    }
    let mut out = FgAbelian::trivial();
    for i in 0..=n {
        out = out.direct_sum(&tensor(&ha.groups[i], &hb.groups[n - i]));
    }
    for i in 0..n {
        out = out.direct_sum(&tor(&ha.groups[i], &hb.groups[n - 1 - i]));
    }
    Ok(out)
}

/// `H_0 .. H_max_degree` of `g`, folding Künneth over its cyclic summands.
pub fn group_homology_graded(g: &FgAbelian, max_degree: usize) -> GradedAbelian {
    let mut acc = GradedAbelian::point(max_degree);
    for order in g.cyclic_orders() {
        let piece = cyclic_graded(&order, max_degree).expect("orders are nonnegative");
        let groups = (0..=max_degree)
            .map(|k| kunneth(&acc, &piece, k).expect("both populated"))
            .collect();
        acc = GradedAbelian::new(groups);
    }
    acc
}

pub fn group_homology(g: &FgAbelian, k: usize) -> FgAbelian {
    group_homology_graded(g, k).groups.swap_remove(k)
}

/// `dim H^k(g; R) = binomial(rank g, k)`.
pub fn real_cohomology_rank(g: &FgAbelian, k: usize) -> u128 {
    binomial(g.rank() as u64, k as u64)
}

/// Largest `k` with `H^k(g; R) != 0`.
pub fn real_cohomological_dimension(g: &FgAbelian) -> usize {
    (0..=g.rank())
        .rev()
        .find(|&k| real_cohomology_rank(g, k) > 0)
        .unwrap_or(0)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}
