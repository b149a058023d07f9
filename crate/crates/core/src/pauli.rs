//! Phase-tracked Pauli strings.
//!
//! A [`PauliWord`] is a phase-free tensor product of `I`, `X`, `Y`, `Z` letters,
//! stored as a pair of bit masks (`x` set for `X`/`Y`, `z` set for `Y`/`Z`).
//! A [`PauliString`] is a word times a unit phase in `{+1, +i, -1, -i}`.
//!
//! Qubit 0 is the leftmost tensor factor, both in text and in matrix form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported chain length (one bit per qubit in a `u64` mask).
pub const MAX_QUBITS: usize = 64;

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount(n))
    } else {
        Ok(())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }
}

/// A unit phase `i^k`, `k` taken mod 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    /// Exponent `k` in `i^k`, in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        })
    }
}

/// Phase-free Pauli word on `n` qubits.
///
/// Ordering is lexicographic on the letters (`I < X < Y < Z`, qubit 0 first),
/// with shorter words ordered before longer ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliWord {
    n: u8,
    x: u64,
    z: u64,
}

impl PauliWord {
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(PauliWord {
            n: n as u8,
            x: 0,
            z: 0,
        })
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        check_qubits(letters.len())?;
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, letter) in letters.iter().enumerate() {
            let (bx, bz) = letter.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Ok(PauliWord {
            n: letters.len() as u8,
            x,
            z,
        })
    }

    /// Builds a word from raw masks; bit `q` refers to qubit `q`.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        check_qubits(n)?;
        let mask = full_mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Precondition(format!(
                "mask bits set beyond qubit count {n}"
            )));
        }
        Ok(PauliWord { n: n as u8, x, z })
    }

    /// Single non-identity letter at `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self> {
        check_qubits(n)?;
        if qubit >= n {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: qubit,
                limit: n,
            });
        }
        let (bx, bz) = letter.bits();
        Ok(PauliWord {
            n: n as u8,
            x: (bx as u64) << qubit,
            z: (bz as u64) << qubit,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of `Y` letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    fn check_same_n(&self, other: &PauliWord) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            })
        } else {
            Ok(())
        }
    }

    /// Number of positions holding two distinct non-identity letters, mod 2.
    fn anticommuting_parity(&self, other: &PauliWord) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 1
    }

    pub fn commutes_with(&self, other: &PauliWord) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(!self.anticommuting_parity(other))
    }

    /// Product of two words: `self * other = phase * word`.
    pub fn mul_word(&self, other: &PauliWord) -> Result<(Phase, PauliWord)> {
        self.check_same_n(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliWord) -> (Phase, PauliWord) {
        let (px, py, pz) = self.letter_masks();
        let (qx, qy, qz) = other.letter_masks();
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        let plus = (px & qy) | (py & qz) | (pz & qx);
        let minus = (py & qx) | (pz & qy) | (px & qz);
        let phase = Phase::from_exponent(plus.count_ones() + 3 * minus.count_ones());
        (
            phase,
            PauliWord {
                n: self.n,
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
        )
    }

    fn letter_masks(&self) -> (u64, u64, u64) {
        (self.x & !self.z, self.x & self.z, self.z & !self.x)
    }

    /// Sort key: two bits per letter, qubit 0 most significant.
    fn sort_key(&self) -> u128 {
        let n = self.n();
        let mut key = 0u128;
        for q in 0..n {
            let code = match self.letter(q) {
                Letter::I => 0u128,
                Letter::X => 1,
                Letter::Y => 2,
                Letter::Z => 3,
            };
            key |= code << (2 * (n - 1 - q));
        }
        key
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p: PauliString = s.parse()?;
        if p.phase() != Phase::ONE {
            return Err(Error::Parse {
                position: 0,
                message: "a Pauli word carries no phase".into(),
            });
        }
        Ok(p.word())
    }
}

impl Serialize for PauliWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Pauli word with a global unit phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PauliString {
    word: PauliWord,
    phase: Phase,
}

impl PauliString {
    pub fn new(phase: Phase, word: PauliWord) -> Self {
        PauliString { word, phase }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(PauliWord::identity(n)?.into())
    }

    pub fn from_letters(phase: Phase, letters: &[Letter]) -> Result<Self> {
        Ok(PauliString::new(phase, PauliWord::from_letters(letters)?))
    }

    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn word(&self) -> PauliWord {
        self.word
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.word.letters()
    }

    /// Hermitian iff the phase is real: every tensor product of `I, X, Y, Z` is.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn with_phase(self, phase: Phase) -> Self {
        PauliString { phase, ..self }
    }

    pub fn times_phase(self, phase: Phase) -> Self {
        PauliString {
            phase: self.phase * phase,
            ..self
        }
    }

    pub fn dagger(self) -> Self {
        self.with_phase(self.phase.conj())
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        let (phase, word) = self.word.mul_word(&other.word)?;
        Ok(PauliString {
            word,
            phase: self.phase * other.phase * phase,
        })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.word.commutes_with(&other.word)
    }

    /// `[p, q]` is either zero or `2 p q`; returns `p q` in the second case.
    pub fn commutator(&self, other: &PauliString) -> Result<Option<PauliString>> {
        if self.commutes(other)? {
            Ok(None)
        } else {
            self.mul(other).map(Some)
        }
    }
}

impl From<PauliWord> for PauliString {
    fn from(word: PauliWord) -> Self {
        PauliString::new(Phase::ONE, word)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase, self.word)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Grammar: `[+|-]? i? [IXYZ]+`, surrounding whitespace ignored.
    fn from_str(text: &str) -> Result<Self> {
        let lead = text.len() - text.trim_start().len();
        let body = text.trim();
        let mut chars = body.char_indices().peekable();
        let mut phase = Phase::ONE;
        if let Some(&(_, c)) = chars.peek() {
            if c == '+' || c == '-' {
                if c == '-' {
                    phase = Phase::MINUS_ONE;
                }
                chars.next();
            }
        }
        if let Some(&(_, 'i')) = chars.peek() {
            phase = phase * Phase::I;
            chars.next();
        }
        let mut letters = Vec::new();
        for (pos, c) in chars {
            match Letter::from_char(c) {
                Some(letter) => letters.push(letter),
                None => {
                    return Err(Error::Parse {
                        position: lead + pos,
                        message: format!("unexpected character {c:?}, expected one of IXYZ"),
                    })
                }
            }
        }
        if letters.is_empty() {
            return Err(Error::Parse {
                position: lead + body.len(),
                message: "expected at least one Pauli letter".into(),
            });
        }
        if letters.len() > MAX_QUBITS {
            return Err(Error::QubitCount(letters.len()));
        }
        PauliString::from_letters(phase, &letters)
    }
}

/// Parses `text` and checks that it has exactly `n` letters.
pub fn parse_pauli(text: &str, n: usize) -> Result<PauliString> {
    let p: PauliString = text.parse()?;
    if p.n() != n {
        return Err(Error::Parse {
            position: text.trim_end().len(),
            message: format!("expected {n} letters, found {}", p.n()),
        });
    }
    Ok(p)
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
