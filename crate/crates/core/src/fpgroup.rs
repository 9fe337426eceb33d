//! Finitely presented groups and homomorphisms between them.
//!
//! Text format, one presentation per block:
//!
//! ```text
//! group <label>
//! gens a1 b1 a2 b2
//! rel [a1,b1][a2,b2]
//! ```
//!
//! `group` is optional, `rel` repeats, blank lines and `#` comments are skipped.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::word::{Alphabet, Generator, Word, WordError};
use crate::zlinalg::{self, FgAbelian, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("invalid genus: {0}")]
    InvalidGenus(String),
    #[error("homomorphism needs {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("relator {relator} of the source does not map into the target's relation lattice")]
    IncompatibleImages { relator: usize },
    #[error("target of the first map differs from the source of the second")]
    TargetSourceMismatch,
    #[error("exponent {0} is too large to write as a word")]
    ExponentTooLarge(BigInt),
}

/// `<generators | relators>`; relators are stored freely and cyclically
/// reduced, and identity relators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    label: Option<String>,
}

impl Presentation {
    pub fn new(
        alphabet: Alphabet,
        relators: impl IntoIterator<Item = Word>,
        label: Option<String>,
    ) -> Result<Self, PresentationError> {
        let mut rels = Vec::new();
        for r in relators {
            alphabet.check(&r)?;
            let r = r.cyclic_reduce();
            if !r.is_identity() {
                rels.push(r);
            }
        }
        Ok(Self {
            alphabet,
            relators: rels,
            label,
        })
    }

    /// Convenience constructor from generator names and relator text.
    pub fn from_text_parts(gens: &[&str], rels: &[&str]) -> Result<Self, PresentationError> {
        let alphabet = Alphabet::new(gens.iter().copied())?;
        let words = rels
            .iter()
            .map(|r| alphabet.parse(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, words, None)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Generator] {
        self.alphabet.generators()
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        self.alphabet.parse(text)
    }

    pub fn render_word(&self, w: &Word) -> String {
        self.alphabet.render(w)
    }

    /// Same generators and relators; labels are ignored.
    pub fn same_as(&self, other: &Presentation) -> bool {
        self.alphabet == other.alphabet && self.relators == other.relators
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        zlinalg::relation_matrix(self)
    }

    pub fn abelianization(&self) -> FgAbelian {
        zlinalg::abelianization(self)
    }

    /// Serializes in the text format, generators and relators in stored order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "group {label}")?;
        }
        let names: Vec<&str> = self.alphabet.names().collect();
        if names.is_empty() {
            writeln!(f, "gens")?;
        } else {
            writeln!(f, "gens {}", names.join(" "))?;
        }
        for r in &self.relators {
            writeln!(f, "rel {}", self.alphabet.render(r))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut label = None;
        let mut alphabet: Option<Alphabet> = None;
        let mut rels = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let format_err = |message: String| PresentationError::Format {
                line: line_no,
                message,
            };
            match key {
                "group" => {
                    if label.is_some() || alphabet.is_some() {
                        return Err(format_err("`group` must come first and only once".into()));
                    }
                    label = Some(rest.to_string());
                }
                "gens" => {
                    if alphabet.is_some() {
                        return Err(format_err("duplicate `gens` line".into()));
                    }
                    alphabet = Some(Alphabet::new(rest.split_whitespace())?);
                }
                "rel" => {
                    let al = alphabet
                        .as_ref()
                        .ok_or_else(|| format_err("`rel` before `gens`".into()))?;
                    rels.push(al.parse(rest)?);
                }
                other => return Err(format_err(format!("unknown keyword `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or(PresentationError::Format {
            line: 0,
            message: "missing `gens` line".into(),
        })?;
        Presentation::new(alphabet, rels, label)
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `<g1,...,gr | >`.
pub fn free_group(r: usize) -> Presentation {
    let alphabet = Alphabet::new(numbered("g", r)).expect("valid names");
    Presentation::new(alphabet, [], Some(format!("F_{r}"))).expect("no relators")
}

/// The product of commutators `[a1,b1]...[ag,bg]` over generators laid out as
/// `a1 b1 a2 b2 ...` starting at index `offset`.
pub fn surface_relator(genus: usize, offset: usize) -> Word {
    let mut w = Word::identity();
    for i in 0..genus {
        let a = Word::generator(offset + 2 * i);
        let b = Word::generator(offset + 2 * i + 1);
        w = w.multiply(&Word::commutator(&a, &b));
    }
    w
}

pub fn surface_generator_names(genus: usize) -> Vec<String> {
    (1..=genus)
        .flat_map(|i| [format!("a{i}"), format!("b{i}")])
        .collect()
}

/// `<a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>`; genus 0 is the trivial group.
pub fn surface_group(g: usize) -> Presentation {
    let alphabet = Alphabet::new(surface_generator_names(g)).expect("valid names");
    Presentation::new(alphabet, [surface_relator(g, 0)], Some(format!("pi_{g}")))
        .expect("relator over the alphabet")
}

/// Generators of `p` followed by those of `q`; a clashing name of `q` gets
/// the first free suffix `_1`, `_2`, ...
pub fn free_product(p: &Presentation, q: &Presentation) -> Presentation {
    let mut alphabet = p.alphabet.clone();
    for g in q.generators() {
        let name = if alphabet.contains(g.name()) {
            (1..)
                .map(|k| format!("{}_{k}", g.name()))
                .find(|c| !alphabet.contains(c) && !q.alphabet.contains(c))
                .expect("unbounded search")
        } else {
            g.name().to_string()
        };
        alphabet
            .push(Generator::new(name).expect("suffixed names stay valid"))
            .expect("fresh name");
    }
    let offset = p.generator_count();
    let rels = p
        .relators
        .iter()
        .cloned()
        .chain(q.relators.iter().map(|r| r.shifted(offset)));
    let label = match (p.label(), q.label()) {
        (Some(a), Some(b)) => Some(format!("{a} * {b}")),
        _ => None,
    };
    Presentation::new(alphabet, rels, label).expect("relators over the union")
}

/// Free product plus `[x, y]` for every generator `x` of `p` and `y` of `q`.
pub fn direct_product(p: &Presentation, q: &Presentation) -> Presentation {
    let fp = free_product(p, q);
    let offset = p.generator_count();
    let mut rels = fp.relators.clone();
    for i in 0..p.generator_count() {
        for j in 0..q.generator_count() {
            rels.push(Word::commutator(
                &Word::generator(i),
                &Word::generator(offset + j),
            ));
        }
    }
    let label = match (p.label(), q.label()) {
        (Some(a), Some(b)) => Some(format!("{a} x {b}")),
        _ => None,
    };
    Presentation::new(fp.alphabet, rels, label).expect("relators over the union")
}

/// `p / <<ws>>`.
pub fn quotient_by_normal_closure(
    p: &Presentation,
    ws: &[Word],
) -> Result<Presentation, PresentationError> {
    for w in ws {
        if let Some(l) = w.letters().iter().find(|l| l.generator >= p.generator_count()) {
            return Err(WordError::UnknownGenerator(format!("#{}", l.generator)).into());
        }
    }
    Presentation::new(
        p.alphabet.clone(),
        p.relators.iter().chain(ws).cloned(),
        p.label.clone(),
    )
}

/// Standard presentation of `g`: generators `g1..gr` for the free part and
/// `t1..tk` for the invariant factors; all pairwise commutators, then `ti^di`.
pub fn abelian_presentation(g: &FgAbelian) -> Result<Presentation, PresentationError> {
    let mut names = numbered("g", g.rank());
    names.extend(numbered("t", g.torsion().len()));
    let alphabet = Alphabet::new(names)?;
    let n = alphabet.len();
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(Word::commutator(&Word::generator(i), &Word::generator(j)));
        }
    }
    for (k, d) in g.torsion().iter().enumerate() {
        let e = small_exponent(d)?;
        rels.push(Word::from_powers([(g.rank() + k, e)]));
    }
    Presentation::new(alphabet, rels, Some(g.to_string()))
}

fn small_exponent(d: &BigInt) -> Result<i64, PresentationError> {
    match i64::try_from(d) {
        Ok(e) if e.abs() <= 1 << 20 => Ok(e),
        _ => Err(PresentationError::ExponentTooLarge(d.clone())),
    }
}

/// A homomorphism given by generator images. Construction certifies only the
/// abelianized compatibility: each source relator must map into the target's
/// relation lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

impl GroupHom {
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        if images.len() != source.generator_count() {
            return Err(PresentationError::ImageCount {
                expected: source.generator_count(),
                found: images.len(),
            });
        }
        for w in &images {
            target.alphabet.check(w)?;
        }
        let target_rel = target.relation_matrix();
        let n = target.generator_count();
        for (k, r) in source.relators.iter().enumerate() {
            let img: Vec<BigInt> = r
                .substitute(&images)
                .exponent_vector(n)
                .into_iter()
                .map(BigInt::from)
                .collect();
            if img.iter().all(Zero::is_zero) {
                continue;
            }
            if !zlinalg::row_span_contains(&target_rel, &img).expect("matching widths") {
                return Err(PresentationError::IncompatibleImages { relator: k });
            }
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &Presentation) -> Self {
        let images = (0..p.generator_count()).map(Word::generator).collect();
        Self {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn induced_matrix(&self) -> IntMatrix {
        zlinalg::induced_matrix(self)
    }

    /// Whether the induced map on abelianizations is onto.
    pub fn is_abelian_surjective(&self) -> bool {
        let target_rel = self.target.relation_matrix();
        let ab = zlinalg::cokernel(&target_rel);
        zlinalg::is_surjective_onto(&self.induced_matrix(), &ab, &target_rel)
            .expect("dimensions agree by construction")
    }
}

/// `g . f` (apply `f` first).
pub fn compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom, PresentationError> {
    if !f.target.same_as(&g.source) {
        return Err(PresentationError::TargetSourceMismatch);
    }
    let images = f.images.iter().map(|w| g.apply(w)).collect();
    Ok(GroupHom {
        source: f.source.clone(),
        target: g.target.clone(),
        images,
    })
}

/// The pinch map `pi_{g1+g2} -> pi_{g1} * pi_{g2}`, collapsing the separating
/// circle `[a1,b1]...[a_{g1},b_{g1}]`.
pub fn pinch_presentation_map(g1: usize, g2: usize) -> Result<GroupHom, PresentationError> {
    if g2 == 0 {
        return Err(PresentationError::InvalidGenus(
            "the second summand must have genus at least 1".into(),
        ));
    }
    let source = surface_group(g1 + g2);
    let target = free_product(&surface_group(g1), &surface_group(g2));
    let images = (0..source.generator_count()).map(Word::generator).collect();
    GroupHom::new(source, target, images)
}

/// The abelianization map `p -> abelian_presentation(p_ab)`, sending each
/// generator to its class in invariant-factor coordinates.
pub fn abelianization_map(p: &Presentation) -> Result<GroupHom, PresentationError> {
    let rel = p.relation_matrix().without_zero_rows();
    let snf = zlinalg::smith_normal_form(&rel);
    let diag = snf.diagonal();
    let ab = zlinalg::cokernel(&rel);
    let target = abelian_presentation(&ab)?;
    let n = p.generator_count();
    // Coordinate j of x V lives in Z/diag[j] (Z beyond the diagonal).
    let mut free_slots = Vec::new();
    let mut torsion_slots = Vec::new();
    for j in 0..n {
        match diag.get(j) {
            Some(d) if d.is_zero() => free_slots.push((j, None)),
            None => free_slots.push((j, None)),
            Some(d) if *d > BigInt::from(1) => torsion_slots.push((j, Some(d.clone()))),
            Some(_) => {}
        }
    }
    let slots: Vec<(usize, Option<BigInt>)> = free_slots.into_iter().chain(torsion_slots).collect();
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let mut powers = Vec::new();
        for (k, (j, modulus)) in slots.iter().enumerate() {
            let mut c = snf.v[(i, *j)].clone();
            if let Some(d) = modulus {
                c = ((c % d) + d) % d;
            }
            if !c.is_zero() {
                powers.push((k, small_exponent(&c)?));
            }
        }
        images.push(Word::from_powers(powers));
    }
    GroupHom::new(p.clone(), target, images)
}
