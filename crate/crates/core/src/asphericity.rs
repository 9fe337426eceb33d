//! Which finitely generated abelian groups are fundamental groups of closed
//! symplectically aspherical manifolds, in which dimensions, and when such a
//! 4-manifold is forced to have `π_2 ≠ 0`.

use std::collections::BTreeSet;
use std::fmt;

use crate::abhomology::{group_homology, real_cohomological_dimension};
use crate::zlinalg::{exists_epimorphism, FgAbelian};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    IsZ2,
    RankAtLeast4,
    RankZeroOrOne,
    RankTwoWithTorsion,
    RankThree,
}

impl Reason {
    pub fn is_aspherical(self) -> bool {
        matches!(self, Reason::IsZ2 | Reason::RankAtLeast4)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Reason::IsZ2 => "IsZ2",
            Reason::RankAtLeast4 => "RankAtLeast4",
            Reason::RankZeroOrOne => "RankZeroOrOne",
            Reason::RankTwoWithTorsion => "RankTwoWithTorsion",
            Reason::RankThree => "RankThree",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Membership in the class 𝒜 (realizable with `π_2 = 0`) versus ℬ
/// (realizable with `π_2 ≠ 0`), for the two groups where it is settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassNote {
    /// In 𝒜, not in ℬ.
    AOnly,
    /// In ℬ, not in 𝒜.
    BOnly,
}

impl ClassNote {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassNote::AOnly => "A\\B",
            ClassNote::BOnly => "B\\A",
        }
    }
}

impl fmt::Display for ClassNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const CITE_CLASSIFICATION: &str =
    "classification: a finitely generated abelian group is symplectically aspherical iff it is Z^2 or has rank >= 4";
pub const CITE_DIMENSION_THREE: &str =
    "real cohomological dimension 3: [w]^2 = 0 forces a surface, whose group has H^3 = 0";
pub const CITE_RANK_TWO_TORSION: &str =
    "H^i(Z^2 + T) = 0 for i > 2 forces a closed surface, hence the torus and T = 0";
pub const CITE_SMALL_RANK: &str =
    "trusted external result: finite groups and Z are not symplectically aspherical";
pub const CITE_DIMENSIONS: &str =
    "realizable dimensions: 4 <= 2n <= m via products with tori, never 2n > m";
pub const CITE_HOPF: &str =
    "Hopf sequence pi_3(N) -> H_3(N) -> H_3(pi_1 N) -> 0 when pi_2(N) = 0, with H_3(N) = Hom(pi_1 N, Z)";
pub const CITE_ONLY_DIM_FOUR: &str =
    "rank 4 pins every realization to dimension 4, so pi_2 != 0 for all of them";
pub const CITE_CLASS_A: &str = "Z^2 is realized by the torus (pi_2 = 0) and only by surfaces";
pub const CITE_CLASS_B: &str = "Z^4 + Z/2 lies in B but not in A";
pub const CITE_COVERING: &str =
    "a two-sheeted cover of a Z^4 + Z/2 example has pi_1 = Z^4 and pi_2 != 0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsphericityVerdict {
    pub group: FgAbelian,
    pub aspherical: bool,
    pub reason: Reason,
    pub realizable_dims: BTreeSet<usize>,
    pub pi2_forced_nonzero_in_dim4: bool,
    pub class_note: Option<ClassNote>,
    pub covering_note: Option<String>,
    pub citations: Vec<&'static str>,
}

fn is_z4_plus_z2(gamma: &FgAbelian) -> bool {
    *gamma == FgAbelian::from_cyclic(4, [2u32])
}

pub fn classify(gamma: &FgAbelian) -> AsphericityVerdict {
    let cd = real_cohomological_dimension(gamma);
    let reason = match cd {
        3 => Reason::RankThree,
        0 | 1 => Reason::RankZeroOrOne,
        2 if gamma.is_free() => Reason::IsZ2,
        2 => Reason::RankTwoWithTorsion,
        _ => Reason::RankAtLeast4,
    };
    let aspherical = reason.is_aspherical();
    let mut citations = vec![match reason {
        Reason::IsZ2 | Reason::RankAtLeast4 => CITE_CLASSIFICATION,
        Reason::RankThree => CITE_DIMENSION_THREE,
        Reason::RankTwoWithTorsion => CITE_RANK_TWO_TORSION,
        Reason::RankZeroOrOne => CITE_SMALL_RANK,
    }];
    let realizable_dims = realizable_dimensions(gamma);
    if reason == Reason::RankAtLeast4 {
        citations.push(CITE_DIMENSIONS);
    }
    let pi2_forced_nonzero_in_dim4 = aspherical && reason == Reason::RankAtLeast4 && hopf_obstruction_dim4(gamma);
    if pi2_forced_nonzero_in_dim4 {
        citations.push(CITE_HOPF);
        if realizable_dims.iter().eq([4].iter()) {
            citations.push(CITE_ONLY_DIM_FOUR);
        }
    }
    let class_note = if reason == Reason::IsZ2 {
        citations.push(CITE_CLASS_A);
        Some(ClassNote::AOnly)
    } else if is_z4_plus_z2(gamma) {
        citations.push(CITE_CLASS_B);
        Some(ClassNote::BOnly)
    } else {
        None
    };
    let covering_note = covering_note(gamma);
    if covering_note.is_some() {
        citations.push(CITE_COVERING);
    }
    AsphericityVerdict {
        group: gamma.clone(),
        aspherical,
        reason,
        realizable_dims,
        pi2_forced_nonzero_in_dim4,
        class_note,
        covering_note,
        citations,
    }
}

/// `{2}` for `Z^2`, `{4, 6, ..., 2⌊m/2⌋}` for rank `m >= 4`, otherwise empty.
pub fn realizable_dimensions(gamma: &FgAbelian) -> BTreeSet<usize> {
    let m = gamma.rank();
    if m == 2 && gamma.is_free() {
        return BTreeSet::from([2]);
    }
    if m < 4 {
        return BTreeSet::new();
    }
    (4..=m).step_by(2).collect()
}

/// Whether a closed 4-manifold with `π_1 = gamma` and `π_2 = 0` is ruled out:
/// no epimorphism `H_3(N) = Z^rank → H_3(gamma)`.
pub fn hopf_obstruction_dim4(gamma: &FgAbelian) -> bool {
    let h3_manifold = FgAbelian::free(gamma.rank());
    let h3_group = group_homology(gamma, 3);
    !exists_epimorphism(&h3_manifold, &h3_group)
}

/// Present only for `Z^4`.
pub fn covering_note(gamma: &FgAbelian) -> Option<String> {
    (*gamma == FgAbelian::free(4)).then(|| {
        "a two-sheeted cover of a closed 4-dimensional symplectically aspherical manifold \
         with pi_1 = Z^4 + Z/2 has pi_1 = Z^4 and pi_2 != 0"
            .to_string()
    })
}
