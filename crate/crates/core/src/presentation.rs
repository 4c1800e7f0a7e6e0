//! Letters, words and finite presentations.
//!
//! Generators are lowercase ASCII letters; the matching uppercase letter
//! spells the inverse. Letters order by generator (as declared) with each
//! inverse directly after its generator, so over `{a, b}` the order is
//! `a < A < b < B`. [`Word`] compares in ShortLex order built on that.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A generator or the inverse of one, packed as `2 * generator + inverse`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u16) << 1 | inverse as u16)
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u16)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// A finite sequence of letters. Equality is letter-by-letter (`≡`), not
/// equality in a group; see [`crate::GroupContext::are_equal`] for that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(alloc::vec![l])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    /// Concatenation without any cancellation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Freely reduced product of the given words, left to right.
    pub fn product(parts: &[&Word]) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(parts.iter().map(|w| w.len()).sum());
        for w in parts {
            for &l in w.letters() {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// `self * x`, freely reduced at the junction only.
    pub fn times_letter(&self, x: Letter) -> Word {
        let mut v = self.0.clone();
        push_reduced(&mut v, x);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..n.unsigned_abs() {
            for &l in base.letters() {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// Removes adjacent cancelling pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.first(), self.last()) {
                (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    /// Splits the free reduction of `self` as `conjugator · core · conjugator⁻¹`
    /// with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let r = self.free_reduce();
        let s = r.letters();
        let mut i = 0;
        let mut j = s.len();
        while j >= i + 2 && s[i] == s[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        (Word(s[i..j].to_vec()), Word(s[..i].to_vec()))
    }

    /// Cyclic shift: the word read starting at position `start`.
    pub fn rotate(&self, start: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::empty();
        }
        let start = start % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[start..]);
        v.extend_from_slice(&self.0[..start]);
        Word(v)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = alloc::vec![0i64; rank];
        for l in &self.0 {
            v[l.generator()] += l.sign() as i64;
        }
        v
    }
}

#[inline]
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// The ordered generator symbols of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: &[char]) -> Result<Self> {
        let mut seen = [false; 26];
        for &c in symbols {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidGenerator(c));
            }
            let i = (c as u8 - b'a') as usize;
            if seen[i] {
                return Err(Error::DuplicateGenerator(c));
            }
            seen[i] = true;
        }
        Ok(Alphabet {
            symbols: symbols.to_vec(),
        })
    }

    /// Generators from a compact string, e.g. `"abcd"`.
    pub fn from_symbols(symbols: &str) -> Result<Self> {
        let v: Vec<char> = symbols.chars().filter(|c| !c.is_whitespace()).collect();
        Alphabet::new(&v)
    }

    /// Number of generators `|X|`.
    pub fn rank(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// All letters in ShortLex letter order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank()).map(Letter::from_code)
    }

    pub fn letter_char(&self, l: Letter) -> char {
        let c = self.symbols[l.generator()];
        if l.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn parse_letter(&self, c: char) -> Result<Letter> {
        let lower = c.to_ascii_lowercase();
        match self.symbols.iter().position(|&s| s == lower) {
            Some(g) if c.is_ascii_alphabetic() => Ok(Letter::new(g, c.is_ascii_uppercase())),
            _ => Err(Error::UnknownLetter(c)),
        }
    }

    /// Reads a word spelled with generators (lowercase) and inverses
    /// (uppercase). No reduction is performed.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.chars()
            .map(|c| self.parse_letter(c))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, w: &Word) -> String {
        w.letters().iter().map(|&l| self.letter_char(l)).collect()
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord {
            alphabet: self,
            word: w,
        }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in self.word.letters() {
            write!(f, "{}", self.alphabet.letter_char(l))?;
        }
        Ok(())
    }
}

/// A finite presentation `⟨X | R⟩`. Relators are stored cyclically reduced;
/// relators that reduce to the empty word are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let mut rs = Vec::with_capacity(relators.len());
        for r in relators {
            if r.letters().iter().any(|l| l.generator() >= alphabet.rank()) {
                return Err(Error::InvalidArgument(
                    "relator uses an undeclared generator",
                ));
            }
            let (core, _) = r.cyclic_reduce();
            if !core.is_empty() {
                rs.push(core);
            }
        }
        Ok(Presentation {
            alphabet,
            relators: rs,
        })
    }

    /// Convenience constructor from compact strings, e.g.
    /// `Presentation::from_strs("abcd", &["abABcdCD"])`.
    pub fn from_strs(generators: &str, relators: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::from_symbols(generators)?;
        let rs = relators
            .iter()
            .map(|r| alphabet.parse_word(r))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, rs)
    }

    /// Free group on the given generators.
    pub fn free(generators: &str) -> Result<Self> {
        Presentation::from_strs(generators, &[])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }
}
