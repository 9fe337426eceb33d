//! Monodromy factorizations of Lefschetz fibrations over the sphere.
//!
//! Vanishing cycles are words in the surface generators `a1 b1 ... ah bh`
//! together with their classes in `H_1(Σ_h; Z)`. Dehn twists act on homology
//! by the transvection `x ↦ x + sign·⟨x, c⟩·c`; matrices act on column
//! vectors and the leftmost twist of a factorization acts first.
//!
//! File format:
//!
//! ```text
//! fibration <label>
//! fiber_genus <h>
//! cycle <+|-> <word>
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fpgroup::{self, Presentation, PresentationError};
use crate::word::{Alphabet, Word, WordError};
use crate::zlinalg::{IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

impl From<LinalgError> for LefschetzError {
    fn from(e: LinalgError) -> Self {
        LefschetzError::DimensionMismatch(e.to_string())
    }
}

/// Direction of a Dehn twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistSign {
    Positive,
    Negative,
}

impl TwistSign {
    pub fn value(self) -> i64 {
        match self {
            TwistSign::Positive => 1,
            TwistSign::Negative => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            TwistSign::Positive => '+',
            TwistSign::Negative => '-',
        }
    }
}

/// Coordinates in the basis `a1, b1, ..., ag, bg` of `H_1(Σ_g; Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass(Vec<i64>);

impl HomologyClass {
    pub fn new(coords: Vec<i64>) -> Result<Self, LefschetzError> {
        if !coords.len().is_multiple_of(2) {
            return Err(LefschetzError::DimensionMismatch(format!(
                "homology class of odd length {}",
                coords.len()
            )));
        }
        Ok(Self(coords))
    }

    pub fn basis(genus: usize, index: usize) -> Self {
        let mut v = vec![0; 2 * genus];
        v[index] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    /// Standard symplectic pairing: `⟨a_i, b_i⟩ = 1 = -⟨b_i, a_i⟩`.
    pub fn pairing(&self, other: &HomologyClass) -> i64 {
        self.0
            .chunks(2)
            .zip(other.0.chunks(2))
            .map(|(x, y)| x[0] * y[1] - x[1] * y[0])
            .sum()
    }
}

/// The Gram matrix of the symplectic pairing in genus `g`.
pub fn symplectic_form(genus: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j[(2 * i, 2 * i + 1)] = BigInt::from(1);
        j[(2 * i + 1, 2 * i)] = BigInt::from(-1);
    }
    j
}

/// A vanishing cycle: a cyclically reduced word and its homology class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCycle {
    word: Word,
    homology: HomologyClass,
}

impl VanishingCycle {
    pub fn new(word: &Word, genus: usize) -> Result<Self, LefschetzError> {
        let n = 2 * genus;
        if let Some(l) = word.letters().iter().find(|l| l.generator >= n) {
            return Err(WordError::AlphabetMismatch {
                index: l.generator,
                len: n,
            }
            .into());
        }
        let word = word.cyclic_reduce();
        let homology = HomologyClass(word.exponent_vector(n));
        Ok(Self { word, homology })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn homology(&self) -> &HomologyClass {
        &self.homology
    }
}

/// An ordered product of signed Dehn twists on a genus-`h` fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyFactorization {
    label: Option<String>,
    fiber_genus: usize,
    cycles: Vec<VanishingCycle>,
    signs: Vec<TwistSign>,
}

impl MonodromyFactorization {
    pub fn new(fiber_genus: usize) -> Self {
        Self {
            label: None,
            fiber_genus,
            cycles: Vec::new(),
            signs: Vec::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn push(&mut self, word: &Word, sign: TwistSign) -> Result<(), LefschetzError> {
        self.cycles.push(VanishingCycle::new(word, self.fiber_genus)?);
        self.signs.push(sign);
        Ok(())
    }

    /// Appends the twists of `other` after those of `self`.
    pub fn concat(&self, other: &MonodromyFactorization) -> Result<Self, LefschetzError> {
        if self.fiber_genus != other.fiber_genus {
            return Err(LefschetzError::DimensionMismatch(format!(
                "fiber genus {} vs {}",
                self.fiber_genus, other.fiber_genus
            )));
        }
        let mut out = self.clone();
        out.cycles.extend(other.cycles.iter().cloned());
        out.signs.extend(other.signs.iter().copied());
        Ok(out)
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn fiber_genus(&self) -> usize {
        self.fiber_genus
    }

    pub fn cycles(&self) -> &[VanishingCycle] {
        &self.cycles
    }

    pub fn signs(&self) -> &[TwistSign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn fiber_alphabet(&self) -> Alphabet {
        Alphabet::new(fpgroup::surface_generator_names(self.fiber_genus)).expect("valid names")
    }
}

impl fmt::Display for MonodromyFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "fibration {label}")?;
        }
        writeln!(f, "fiber_genus {}", self.fiber_genus)?;
        let al = self.fiber_alphabet();
        for (c, s) in self.cycles.iter().zip(&self.signs) {
            writeln!(f, "cycle {} {}", s.symbol(), al.render(&c.word))?;
        }
        Ok(())
    }
}

impl FromStr for MonodromyFactorization {
    type Err = LefschetzError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut label = None;
        let mut m: Option<MonodromyFactorization> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LefschetzError::Format {
                line: n + 1,
                message,
            };
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "fibration" if m.is_none() && label.is_none() => label = Some(rest.to_string()),
                "fiber_genus" if m.is_none() => {
                    let h = rest
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad genus `{rest}`")))?;
                    m = Some(MonodromyFactorization::new(h));
                }
                "cycle" => {
                    let fac = m
                        .as_mut()
                        .ok_or_else(|| err("`cycle` before `fiber_genus`".into()))?;
                    let (sign, word) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                    let sign = match sign {
                        "+" => TwistSign::Positive,
                        "-" => TwistSign::Negative,
                        other => return Err(err(format!("bad twist sign `{other}`"))),
                    };
                    let w = fac.fiber_alphabet().parse(word)?;
                    fac.push(&w, sign)?;
                }
                other => return Err(err(format!("unexpected `{other}`"))),
            }
        }
        let mut m = m.ok_or(LefschetzError::Format {
            line: 0,
            message: "missing `fiber_genus`".into(),
        })?;
        m.label = label;
        Ok(m)
    }
}

/// Matrix of `x ↦ x + sign·⟨x, c⟩·c` (columns are images of basis vectors).
pub fn twist_matrix(c: &HomologyClass, sign: TwistSign) -> IntMatrix {
    let n = c.0.len();
    let g = c.genus();
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        let k = sign.value() * HomologyClass::basis(g, j).pairing(c);
        if k == 0 {
            continue;
        }
        for i in 0..n {
            m[(i, j)] += BigInt::from(k * c.0[i]);
        }
    }
    m
}

/// Twist matrix with an explicit genus check.
pub fn twist_matrix_in_genus(
    c: &HomologyClass,
    sign: TwistSign,
    genus: usize,
) -> Result<IntMatrix, LefschetzError> {
    if c.genus() != genus {
        return Err(LefschetzError::DimensionMismatch(format!(
            "class of length {} in genus {genus}",
            c.0.len()
        )));
    }
    Ok(twist_matrix(c, sign))
}

/// `T_n ⋯ T_1`: the first twist is applied first.
pub fn monodromy_product(m: &MonodromyFactorization) -> IntMatrix {
    m.cycles
        .iter()
        .zip(&m.signs)
        .fold(IntMatrix::identity(2 * m.fiber_genus), |acc, (c, &s)| {
            &twist_matrix(c.homology(), s) * &acc
        })
}

/// Whether the monodromy acts trivially on `H_1` of the fiber. This is only a
/// necessary condition for the product of twists to be isotopic to the
/// identity.
pub fn homology_trivial(m: &MonodromyFactorization) -> bool {
    monodromy_product(m) == IntMatrix::identity(2 * m.fiber_genus)
}

/// `π_1` of the total space as `π_1(F) / <<C_1, ..., C_n>>`. The presentation
/// is only valid when the twist product is trivial in the pointed mapping
/// class group; `homologically_trivial` records the checkable part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalSpaceGroup {
    pub presentation: Presentation,
    pub homologically_trivial: bool,
}

impl TotalSpaceGroup {
    /// True when the presentation comes with a caveat.
    pub fn is_conditional(&self) -> bool {
        !self.homologically_trivial
    }
}

pub fn total_space_pi1(m: &MonodromyFactorization) -> TotalSpaceGroup {
    let words: Vec<Word> = m.cycles.iter().map(|c| c.word.clone()).collect();
    let mut presentation = fpgroup::quotient_by_normal_closure(&fpgroup::surface_group(m.fiber_genus), &words)
        .expect("cycle words use surface generators");
    if let Some(label) = &m.label {
        presentation = presentation.with_label(label.clone());
    }
    TotalSpaceGroup {
        presentation,
        homologically_trivial: homology_trivial(m),
    }
}

/// `χ(X) = 2·(2 − 2h) + n`.
pub fn euler_characteristic(m: &MonodromyFactorization) -> i64 {
    2 * (2 - 2 * m.fiber_genus as i64) + m.len() as i64
}

impl From<PresentationError> for LefschetzError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::Word(w) => LefschetzError::Word(w),
            other => LefschetzError::Format {
                line: 0,
                message: other.to_string(),
            },
        }
    }
}
