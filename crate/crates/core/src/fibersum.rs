//! Presentations of fiber sums with surface bundles, the abelian shadow of a
//! short surjectivity diagram, and the witness pipeline that builds a
//! presentation for every symplectically aspherical abelian group.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::asphericity::{self, Reason};
use crate::fpgroup::{
    self, abelian_presentation, compose, free_group, pinch_presentation_map, surface_group,
    GroupHom, Presentation, PresentationError,
};
use crate::lefschetz::TotalSpaceGroup;
use crate::word::{Alphabet, Word};
use crate::zlinalg::{self, FgAbelian, IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberSumError {
    #[error("invalid genus: {0}")]
    InvalidGenus(String),
    #[error("presentation is not surface-fibered: {0}")]
    NotSurfaceFibered(String),
    #[error("the map onto P is not surjective on abelianizations")]
    NotSurjective,
    #[error("rank {0} is too small: at least 2 is required")]
    RankTooSmall(usize),
    #[error("not symplectically aspherical ({0:?})")]
    NotAspherical(Reason),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `π_1(X) = <a1, b1, ..., af, bf | [a1,b1]...[af,bf], R>` for a fibration
/// with fiber `Σ_f`; the surface relator comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceFiberedPresentation {
    fiber_genus: usize,
    extra: Vec<Word>,
    presentation: Presentation,
}

impl SurfaceFiberedPresentation {
    pub fn new(fiber_genus: usize, extra: Vec<Word>) -> Result<Self, FiberSumError> {
        let base = surface_group(fiber_genus);
        let presentation = fpgroup::quotient_by_normal_closure(&base, &extra)?;
        let extra = presentation.relators()[base.relators().len()..].to_vec();
        Ok(Self {
            fiber_genus,
            extra,
            presentation,
        })
    }

    /// Checks that `p` has generators `a1 b1 ... af bf` and leads with the
    /// surface relator.
    pub fn from_presentation(p: &Presentation) -> Result<Self, FiberSumError> {
        if !p.generator_count().is_multiple_of(2) {
            return Err(FiberSumError::NotSurfaceFibered(
                "odd number of generators".into(),
            ));
        }
        let f = p.generator_count() / 2;
        let expected = fpgroup::surface_generator_names(f);
        if !p.alphabet().names().eq(expected.iter().map(String::as_str)) {
            return Err(FiberSumError::NotSurfaceFibered(format!(
                "generators must be {}",
                expected.join(" ")
            )));
        }
        let surface = fpgroup::surface_relator(f, 0);
        let skip = usize::from(f > 0);
        if f > 0 && p.relators().first() != Some(&surface) {
            return Err(FiberSumError::NotSurfaceFibered(
                "the first relator must be the surface relator".into(),
            ));
        }
        let mut x = Self::new(f, p.relators()[skip..].to_vec())?;
        if let Some(label) = p.label() {
            x.presentation = x.presentation.with_label(label);
        }
        Ok(x)
    }

    pub fn from_total_space(x: &TotalSpaceGroup) -> Result<Self, FiberSumError> {
        Self::from_presentation(&x.presentation)
    }

    pub fn fiber_genus(&self) -> usize {
        self.fiber_genus
    }

    pub fn extra_relators(&self) -> &[Word] {
        &self.extra
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }
}

/// How the base loops `x_j, y_j` conjugate the fiber generators in
/// `π_1(Y ∖ F)`: `images[k][i]` is `t_k a_i t_k^-1` for the k-th base
/// generator `t_k` in the order `x1 y1 x2 y2 ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberAction {
    images: Vec<Vec<Word>>,
}

impl FiberAction {
    pub fn trivial(fiber_genus: usize, base_genus: usize) -> Self {
        let row: Vec<Word> = (0..2 * fiber_genus).map(Word::generator).collect();
        Self {
            images: vec![row; 2 * base_genus],
        }
    }

    pub fn new(images: Vec<Vec<Word>>) -> Self {
        Self { images }
    }
}

/// Fiber sum with the trivial bundle `Σ_e × F`.
pub fn fiber_sum_with_trivial_bundle(
    x: &SurfaceFiberedPresentation,
    e: usize,
) -> Result<Presentation, FiberSumError> {
    fiber_sum_with_bundle(x, e, &FiberAction::trivial(x.fiber_genus, e))
}

/// `<a, b, x, y | Π[a_i,b_i], Π[x_j,y_j], t a_i t^-1 φ_t(a_i)^-1, R>`.
///
/// Only the trivial action is exercised by the classification pipeline.
pub fn fiber_sum_with_bundle(
    x: &SurfaceFiberedPresentation,
    e: usize,
    action: &FiberAction,
) -> Result<Presentation, FiberSumError> {
    if e == 0 {
        return Err(FiberSumError::InvalidGenus("base genus must be at least 1".into()));
    }
    let nf = 2 * x.fiber_genus;
    if action.images.len() != 2 * e || action.images.iter().any(|r| r.len() != nf) {
        return Err(FiberSumError::InvalidGenus(format!(
            "action table must be {} x {nf}",
            2 * e
        )));
    }
    if action.images.iter().flatten().any(|w| w.support_len() > nf) {
        return Err(FiberSumError::NotSurfaceFibered(
            "action images must be fiber words".into(),
        ));
    }
    let mut names = fpgroup::surface_generator_names(x.fiber_genus);
    names.extend((1..=e).flat_map(|j| [format!("x{j}"), format!("y{j}")]));
    let alphabet = Alphabet::new(names).map_err(PresentationError::from)?;

    let mut rels = vec![
        fpgroup::surface_relator(x.fiber_genus, 0),
        fpgroup::surface_relator(e, nf),
    ];
    for (k, row) in action.images.iter().enumerate() {
        let t = Word::generator(nf + k);
        for (i, img) in row.iter().enumerate() {
            rels.push(Word::generator(i).conjugate_by(&t).multiply(&img.inverse()));
        }
    }
    rels.extend(x.extra.iter().cloned());
    let label = x.presentation.label().map(|l| format!("{l} #_F (S_{e} x F)"));
    Ok(Presentation::new(alphabet, rels, label)?)
}

/// Abelianized data of a short surjectivity diagram: `j: A → B`, `φ: A ↠ P`
/// (matrices are target gens × source gens) and relation matrices of A, B, P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsdData {
    pub j_matrix: IntMatrix,
    pub phi_matrix: IntMatrix,
    pub a_relations: IntMatrix,
    pub b_relations: IntMatrix,
    pub p_relations: IntMatrix,
}

impl SsdData {
    /// The diagram `π_1(F) → π_1(Σ_e × F)`, `π_1(F) ↠ π_1(X)` underlying the
    /// trivial-bundle fiber sum.
    pub fn for_trivial_fiber_sum(x: &SurfaceFiberedPresentation, e: usize) -> Self {
        let nf = 2 * x.fiber_genus;
        let fiber = surface_group(x.fiber_genus);
        let y = fpgroup::direct_product(&fiber, &surface_group(e));
        let mut j = IntMatrix::zeros(nf + 2 * e, nf);
        for i in 0..nf {
            j[(i, i)] = BigInt::from(1);
        }
        Self {
            j_matrix: j,
            phi_matrix: IntMatrix::identity(nf),
            a_relations: fiber.relation_matrix(),
            b_relations: y.relation_matrix(),
            p_relations: x.presentation.relation_matrix(),
        }
    }
}

/// `B / j(Ker φ)` at the abelian level.
pub fn ssd_quotient(d: &SsdData) -> Result<FgAbelian, FiberSumError> {
    let na = d.a_relations.cols();
    if d.j_matrix.cols() != na || d.phi_matrix.cols() != na {
        return Err(LinalgError::DimensionMismatch("j and φ must both start at A".into()).into());
    }
    if d.j_matrix.rows() != d.b_relations.cols() {
        return Err(LinalgError::DimensionMismatch("j must land in B".into()).into());
    }
    let p = zlinalg::cokernel(&d.p_relations);
    if !zlinalg::is_surjective_onto(&d.phi_matrix, &p, &d.p_relations)? {
        return Err(FiberSumError::NotSurjective);
    }
    let kernel = zlinalg::kernel_of_map(&d.phi_matrix, &d.p_relations)?;
    let pushed = &kernel * &d.j_matrix.transpose();
    Ok(zlinalg::cokernel(&d.b_relations.vstack(&pushed)?))
}

/// A finite presentation `π_g → Γ` with nonzero pullback on `H^2(·; R)`.
#[derive(Debug, Clone)]
pub struct PresentationChain {
    pub hom: GroupHom,
    pub genus: usize,
}

/// Builds `π_{h+1} → π_h * π_1 → Z^{2h+2} → Γ` with `h = 2r`, `r` the number
/// of invariant-factor generators of Γ. `π_h` goes through the free group
/// `F_r` (`a_i ↦ x_{i mod r}`, `b_i ↦ 1`) and `π_1 = Z^2` onto the last two
/// free generators of Γ.
pub fn presentation_chain_for(gamma: &FgAbelian) -> Result<PresentationChain, FiberSumError> {
    if gamma.rank() < 2 {
        return Err(FiberSumError::RankTooSmall(gamma.rank()));
    }
    let r = gamma.generator_count();
    let h = 2 * r;
    let target = abelian_presentation(gamma)?;

    // π_h → F_r
    let to_free = GroupHom::new(
        surface_group(h),
        free_group(r),
        (0..2 * h)
            .map(|k| {
                if k % 2 == 0 {
                    Word::generator((k / 2) % r)
                } else {
                    Word::identity()
                }
            })
            .collect(),
    )?;
    // F_r → Γ
    let onto_gamma = GroupHom::new(free_group(r), target.clone(), (0..r).map(Word::generator).collect())?;
    let f = compose(&to_free, &onto_gamma)?;

    let u = pinch_presentation_map(h, 1)?;
    let ab = fpgroup::abelianization_map(u.target())?;
    // (π_h * π_1)_ab = Z^{2h+2}, free on the generators, so ab is the identity
    // on coordinates; read off f on the first 2h and send the torus pair to the
    // last two free generators of Γ.
    let ab_source_is_free = ab.target().generator_count() == 2 * h + 2
        && zlinalg::induced_matrix(&ab) == IntMatrix::identity(2 * h + 2);
    debug_assert!(ab_source_is_free);
    let mut images: Vec<Word> = f.images().to_vec();
    images.push(Word::generator(gamma.rank() - 2));
    images.push(Word::generator(gamma.rank() - 1));
    let psi = GroupHom::new(ab.target().clone(), target, images)?;

    let hom = compose(&compose(&u, &ab)?, &psi)?;
    Ok(PresentationChain { hom, genus: h + 1 })
}

/// The group-theoretic witness for Γ: `π_1(Σ_1)` for Γ = Z², otherwise the
/// fiber sum of a fibration with `π_1 = A` (Γ = A ⊕ Z²) with `Σ_1 × F`.
pub fn witness_presentation(gamma: &FgAbelian) -> Result<Presentation, FiberSumError> {
    let is_torus = gamma.rank() == 2 && gamma.is_free();
    if !(is_torus || gamma.rank() >= 4) {
        return Err(FiberSumError::NotAspherical(asphericity::classify(gamma).reason));
    }
    if is_torus {
        return Ok(surface_group(1).with_label(gamma.to_string()));
    }
    let a = FgAbelian::from_cyclic(gamma.rank() - 2, gamma.torsion().iter().cloned());
    let x = fibration_for(&a)?;
    let sum = fiber_sum_with_trivial_bundle(&x, 1)?;
    Ok(sum.with_label(gamma.to_string()))
}

/// `π_1(X) = A` presented on the fiber generators: commutators of all fiber
/// generators plus the kernel of `π_g → A` at the abelian level.
pub fn fibration_for(a: &FgAbelian) -> Result<SurfaceFiberedPresentation, FiberSumError> {
    let chain = presentation_chain_for(a)?;
    let n = 2 * chain.genus;
    let map = zlinalg::induced_matrix(&chain.hom);
    let kernel = zlinalg::kernel_of_map(&map, &chain.hom.target().relation_matrix())?;
    let mut extra = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            extra.push(Word::commutator(&Word::generator(i), &Word::generator(j)));
        }
    }
    for row in reduce_rows(&kernel).row_vectors() {
        let mut powers = Vec::new();
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let e = i64::try_from(c).map_err(|_| PresentationError::ExponentTooLarge(c.clone()))?;
                powers.push((i, e));
            }
        }
        extra.push(Word::from_powers(powers));
    }
    let x = SurfaceFiberedPresentation::new(chain.genus, extra)?;
    Ok(x)
}

/// Hermite-style row reduction of a lattice basis, keeping entries small.
fn reduce_rows(m: &IntMatrix) -> IntMatrix {
    let snf_rank = zlinalg::smith_normal_form(m).rank();
    let h = zlinalg::hermite_normal_form(m);
    let rows: Vec<Vec<BigInt>> = h.row_vectors().take(snf_rank).map(<[BigInt]>::to_vec).collect();
    IntMatrix::from_rows(m.cols(), rows)
}
