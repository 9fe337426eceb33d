//! Words in a free group on a finite alphabet of named generators.
//!
//! A [`Word`] is a freely reduced sequence of signed letters; it only stores
//! generator indices. Names live in an [`Alphabet`], which also owns the
//! text grammar used for relators and vanishing cycles:
//!
//! ```text
//! word    := "1" | factor+            (factors separated by whitespace or `*`)
//! factor  := ident power? | "[" word "," word "]" power? | "(" word ")" power?
//! power   := "^" signed-integer
//! ident   := [a-z][a-z0-9_]*
//! ```

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

/// Largest absolute exponent accepted by the parser.
const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("word uses generator index {index} but the alphabet has {len} generators")]
    AlphabetMismatch { index: usize, len: usize },
}

/// A generator name: `[a-z][a-z0-9_]*`, never the reserved token `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Result<Self, WordError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Self(name))
        } else {
            Err(WordError::InvalidName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_lowercase() => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

/// One signed occurrence of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self {
            letters: vec![Letter::new(index, false)],
        }
    }

    /// Freely reduces the given letters.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Self { letters: out }
    }

    /// Builds a word from `(generator, exponent)` pairs, e.g. `[(0, 2), (1, -1)]`.
    pub fn from_powers<I: IntoIterator<Item = (usize, i64)>>(powers: I) -> Self {
        Self::from_letters(powers.into_iter().flat_map(|(g, e)| {
            std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        // Only the seam between the two reduced words can cancel.
        let mut out = self.letters.clone();
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some(&first)) = (out.last(), rest.first()) {
            if !last.cancels(first) {
                break;
            }
            out.pop();
            rest = &rest[1..];
        }
        out.extend_from_slice(rest);
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.multiply(v).multiply(&u.inverse()).multiply(&v.inverse())
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.multiply(self).multiply(&c.inverse())
    }

    /// Strips mutually inverse first/last letters until none remain.
    pub fn cyclic_reduce(&self) -> Word {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i].cancels(l[j - 1]) {
            i += 1;
            j -= 1;
        }
        Word {
            letters: l[i..j].to_vec(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) if self.letters.len() >= 2 => !a.cancels(b),
            _ => true,
        }
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| l.sign())
            .sum()
    }

    /// Exponent sums of generators `0..n`.
    pub fn exponent_vector(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for l in &self.letters {
            if l.generator < n {
                v[l.generator] += l.sign();
            }
        }
        v
    }

    /// Largest generator index used plus one.
    pub fn support_len(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator + 1)
            .max()
            .unwrap_or(0)
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.letters {
            let img = &images[l.generator];
            if l.inverse {
                out = out.multiply(&img.inverse());
            } else {
                out = out.multiply(img);
            }
        }
        out
    }

    /// Shifts every generator index by `offset`.
    pub fn shifted(&self, offset: usize) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(l.generator + offset, l.inverse))
                .collect(),
        }
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

/// An ordered list of distinct generators, with name lookup and the word
/// parser/renderer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Self::default();
        for name in names {
            alphabet.push(Generator::new(name)?)?;
        }
        Ok(alphabet)
    }

    pub fn push(&mut self, g: Generator) -> Result<usize, WordError> {
        if self.index.contains_key(g.name()) {
            return Err(WordError::DuplicateGenerator(g.0));
        }
        let i = self.generators.len();
        self.index.insert(g.0.clone(), i);
        self.generators.push(g);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.iter().map(|g| g.name())
    }

    pub fn name(&self, i: usize) -> &str {
        self.generators[i].name()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Checks that every letter of `w` refers to a generator of this alphabet.
    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.letters.iter().find(|l| l.generator >= self.len()) {
            Some(l) => Err(WordError::AlphabetMismatch {
                index: l.generator,
                len: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Product of two words over this alphabet.
    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.multiply(v))
    }

    pub fn exponent_sum(&self, w: &Word, generator: &str) -> Result<i64, WordError> {
        let i = self
            .position(generator)
            .ok_or_else(|| WordError::UnknownGenerator(generator.to_string()))?;
        Ok(w.exponent_sum(i))
    }

    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            alphabet: self,
        };
        let w = p.word()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Renders letters separated by single spaces, inverses as `x^-1`, the
    /// identity as `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (k, l) in w.letters.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(self.name(l.generator));
            if l.inverse {
                out.push_str("^-1");
            }
        }
        out
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_word_end(&self) -> bool {
        matches!(self.peek(), None | Some(b',') | Some(b']') | Some(b')'))
    }

    fn word(&mut self) -> Result<Word, WordError> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            self.skip_ws();
            if !self.at_word_end() {
                return Err(self.error("the identity `1` must stand alone"));
            }
            return Ok(Word::identity());
        }
        let mut w = self.factor()?;
        loop {
            self.skip_ws();
            if self.at_word_end() {
                return Ok(w);
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
            }
            let f = self.factor()?;
            w = w.multiply(&f);
        }
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let base = match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Word::commutator(&u, &v)
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b')')?;
                u
            }
            Some(b) if b.is_ascii_lowercase() => {
                let start = self.pos;
                while matches!(self.peek(), Some(b) if b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.alphabet.position(name) {
                    Some(i) => Word::generator(i),
                    None => return Err(WordError::UnknownGenerator(name.to_string())),
                }
            }
            _ => return Err(self.error("expected a generator, `[` or `(`")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.signed_integer()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn signed_integer(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return Err(self.error("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits..self.pos]).expect("ascii");
        let n: i64 = match text.parse() {
            Ok(n) if n <= MAX_EXPONENT => n,
            _ => {
                self.pos = start;
                return Err(self.error("exponent out of range"));
            }
        };
        Ok(if negative { -n } else { n })
    }
}
