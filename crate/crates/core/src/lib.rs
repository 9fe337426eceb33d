//! Free-group words, finite presentations, integer Smith normal form and
//! homology of finitely generated abelian groups, Lefschetz fibration
//! monodromy, fiber sums, and the classification of abelian fundamental
//! groups of closed symplectically aspherical manifolds.

pub mod abhomology;
pub mod asphericity;
pub mod fibersum;
pub mod fpgroup;
pub mod lefschetz;
pub mod word;
pub mod zlinalg;

pub use abhomology::{group_homology, group_homology_graded, GradedAbelian};
pub use asphericity::{classify, AsphericityVerdict, ClassNote, Reason};
pub use fpgroup::{GroupHom, Presentation};
pub use lefschetz::{HomologyClass, MonodromyFactorization, TwistSign, VanishingCycle};
pub use word::{Alphabet, Generator, Letter, Word};
pub use zlinalg::{smith_normal_form, FgAbelian, IntMatrix, SmithDecomposition};
