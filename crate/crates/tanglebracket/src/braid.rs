//! Braid words over the plat generator alphabets, with parsing, free
//! reduction, and the sign-pattern classification of alternating plats.
//!
//! Three alphabets are supported:
//!
//! * `B4Standard` — standard 4-plats. Word indices 1, 2 name the two usable
//!   generators of B_4 (the original sigma_2, sigma_3, reindexed); letter i
//!   twists strand positions (i+1, i+2).
//! * `B6` — 6-plats over sigma_1..sigma_5.
//! * `B6Extended` — 6-plats plus the wrap-around generator sigma_6 twisting
//!   boundary positions (6, 1).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("malformed braid token `{0}`")]
    MalformedToken(String),
    #[error("generator index {index} out of range for mode {mode}")]
    IndexOutOfRange { index: u32, mode: Mode },
    #[error("zero exponent in token `{0}`")]
    ZeroExponent(String),
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    B4Standard,
    B6,
    B6Extended,
}

impl Mode {
    /// Largest word-level generator index valid in this mode.
    pub fn generator_count(self) -> u8 {
        match self {
            Mode::B4Standard => 2,
            Mode::B6 => 5,
            Mode::B6Extended => 6,
        }
    }

    /// Number of plat strands (boundary points).
    pub fn strands(self) -> u8 {
        match self {
            Mode::B4Standard => 4,
            Mode::B6 | Mode::B6Extended => 6,
        }
    }

    /// Strand pairs n, so that diagrams have 2n boundary points.
    pub fn pairs(self) -> usize {
        self.strands() as usize / 2
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::B4Standard => write!(f, "b4"),
            Mode::B6 => write!(f, "b6"),
            Mode::B6Extended => write!(f, "b6x"),
        }
    }
}

/// One signed generator letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub index: u8,
    pub sign: i8,
}

impl BraidLetter {
    pub fn new(index: u8, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        BraidLetter { index, sign }
    }

    pub fn inverse(self) -> Self {
        BraidLetter {
            index: self.index,
            sign: -self.sign,
        }
    }
}

/// Word sign classes in the sense of alternating plats: a positive
/// alternating word uses only odd generators positively and even generators
/// negatively; a negative alternating word is the mirror. The empty word is
/// compatible with both and reports as positive with `also_negative` set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    PositiveAlternating { also_negative: bool },
    NegativeAlternating,
    Neither,
}

impl SignClass {
    pub fn is_alternating(self) -> bool {
        !matches!(self, SignClass::Neither)
    }
}

/// A braid word: ordered letters, applied top-to-bottom in the plat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub mode: Mode,
    pub letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn empty(mode: Mode) -> Self {
        BraidWord {
            mode,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(mode: Mode, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        for l in &letters {
            if l.index == 0 || l.index > mode.generator_count() {
                return Err(BraidError::IndexOutOfRange {
                    index: l.index as u32,
                    mode,
                });
            }
        }
        Ok(BraidWord { mode, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Geometric strand position pair twisted by `letter`: `(left, right)`
    /// in 1..=strands, cyclic. The B4-standard reindexing shifts by one.
    pub fn twist_positions(&self, letter: BraidLetter) -> (u8, u8) {
        let s = self.mode.strands();
        let geo = match self.mode {
            Mode::B4Standard => letter.index + 1,
            _ => letter.index,
        };
        (geo, geo % s + 1)
    }

    /// Parses the whitespace-separated word grammar:
    /// `WORD := "e" | (LETTER)*`, `LETTER := "s" INT ("^" SIGNED-INT)?`.
    /// `s2^-3` expands to three letters (2, -1).
    pub fn parse(text: &str, mode: Mode) -> Result<Self, BraidError> {
        let trimmed = text.trim();
        if trimmed == "e" || trimmed.is_empty() {
            return Ok(Self::empty(mode));
        }
        let mut letters = Vec::new();
        for tok in trimmed.split_whitespace() {
            let rest = tok
                .strip_prefix('s')
                .ok_or_else(|| BraidError::MalformedToken(tok.to_string()))?;
            let (idx_str, exp_str) = match rest.split_once('^') {
                Some((i, e)) => (i, Some(e)),
                None => (rest, None),
            };
            let index: u32 = idx_str
                .parse()
                .map_err(|_| BraidError::MalformedToken(tok.to_string()))?;
            if index == 0 || index > mode.generator_count() as u32 {
                return Err(BraidError::IndexOutOfRange { index, mode });
            }
            let exp: i64 = match exp_str {
                Some(e) => e
                    .parse()
                    .map_err(|_| BraidError::MalformedToken(tok.to_string()))?,
                None => 1,
            };
            if exp == 0 {
                return Err(BraidError::ZeroExponent(tok.to_string()));
            }
            let sign = if exp > 0 { 1 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(BraidLetter::new(index as u8, sign));
            }
        }
        Ok(BraidWord { mode, letters })
    }

    /// Removes all adjacent inverse pairs, repeatedly.
    pub fn free_reduce(&self) -> Self {
        let mut stack: Vec<BraidLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(&top) if top.index == l.index && top.sign == -l.sign => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        BraidWord {
            mode: self.mode,
            letters: stack,
        }
    }

    /// The inverse word: reversed letters with flipped signs.
    pub fn inverse(&self) -> Self {
        BraidWord {
            mode: self.mode,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self, BraidError> {
        if self.mode != other.mode {
            return Err(BraidError::ModeMismatch(self.mode, other.mode));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            mode: self.mode,
            letters,
        })
    }

    /// `w^-1 v`, used to reduce tangle comparison to comparison with the
    /// trivial tangle.
    pub fn invert_concat(&self, other: &Self) -> Result<Self, BraidError> {
        self.inverse().concat(other)
    }

    fn letter_class(l: BraidLetter) -> SignClass {
        let odd = l.index % 2 == 1;
        if (odd && l.sign == 1) || (!odd && l.sign == -1) {
            SignClass::PositiveAlternating {
                also_negative: false,
            }
        } else {
            SignClass::NegativeAlternating
        }
    }

    /// Classifies the word's crossing signs per the alternating-plat rule.
    pub fn sign_class(&self) -> SignClass {
        if self.letters.is_empty() {
            return SignClass::PositiveAlternating {
                also_negative: true,
            };
        }
        let mut pos = true;
        let mut neg = true;
        for &l in &self.letters {
            match Self::letter_class(l) {
                SignClass::PositiveAlternating { .. } => neg = false,
                SignClass::NegativeAlternating => pos = false,
                SignClass::Neither => unreachable!(),
            }
        }
        match (pos, neg) {
            (true, _) => SignClass::PositiveAlternating {
                also_negative: false,
            },
            (false, true) => SignClass::NegativeAlternating,
            (false, false) => SignClass::Neither,
        }
    }
}

impl fmt::Display for BraidWord {
    /// Canonical exponent-collapsed form, e.g. `s1 s2^-2`; `e` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let exp = (j - i) as i64 * l.sign as i64;
            if exp == 1 {
                write!(f, "s{}", l.index)?;
            } else {
                write!(f, "s{}^{}", l.index, exp)?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str, mode: Mode) -> BraidWord {
        BraidWord::parse(text, mode).unwrap()
    }

    #[test]
    fn parse_expands_exponents() {
        let word = w("s1 s2^-1 s1", Mode::B4Standard);
        assert_eq!(
            word.letters,
            vec![
                BraidLetter::new(1, 1),
                BraidLetter::new(2, -1),
                BraidLetter::new(1, 1)
            ]
        );
        let word = w("s2^-3", Mode::B6);
        assert_eq!(word.letters, vec![BraidLetter::new(2, -1); 3]);
        assert!(w("e", Mode::B6).is_empty());
    }

    #[test]
    fn parse_rejects_bad_tokens() {
        assert!(matches!(
            BraidWord::parse("s6^-1", Mode::B6),
            Err(BraidError::IndexOutOfRange { index: 6, .. })
        ));
        assert_eq!(
            BraidWord::parse("s6^-1", Mode::B6Extended).unwrap().letters,
            vec![BraidLetter::new(6, -1)]
        );
        assert!(matches!(
            BraidWord::parse("s1^0", Mode::B6),
            Err(BraidError::ZeroExponent(_))
        ));
        assert!(matches!(
            BraidWord::parse("x3", Mode::B6),
            Err(BraidError::MalformedToken(_))
        ));
        assert!(matches!(
            BraidWord::parse("s7", Mode::B4Standard),
            Err(BraidError::IndexOutOfRange { index: 7, .. })
        ));
    }

    #[test]
    fn free_reduce_examples() {
        assert!(w("s1 s1^-1", Mode::B6).free_reduce().is_empty());
        assert_eq!(
            w("s1 s2 s2^-1 s1", Mode::B6).free_reduce(),
            w("s1 s1", Mode::B6)
        );
        let reduced = w("s1 s2", Mode::B6);
        assert_eq!(reduced.free_reduce(), reduced);
    }

    #[test]
    fn invert_concat_examples() {
        let s1 = w("s1", Mode::B6);
        assert_eq!(s1.invert_concat(&s1).unwrap(), w("s1^-1 s1", Mode::B6));
        let e = BraidWord::empty(Mode::B6);
        assert_eq!(e.invert_concat(&w("s2", Mode::B6)).unwrap(), w("s2", Mode::B6));
        assert_eq!(
            w("s1 s2", Mode::B6).invert_concat(&e).unwrap(),
            w("s2^-1 s1^-1", Mode::B6)
        );
        assert!(w("s1", Mode::B6)
            .invert_concat(&w("s1", Mode::B4Standard))
            .is_err());
    }

    #[test]
    fn sign_class_examples() {
        assert_eq!(
            w("s1 s4^-1 s3", Mode::B6).sign_class(),
            SignClass::PositiveAlternating {
                also_negative: false
            }
        );
        assert_eq!(w("s1 s2", Mode::B6).sign_class(), SignClass::Neither);
        assert_eq!(
            w("s1^-1 s2 s6", Mode::B6Extended).sign_class(),
            SignClass::NegativeAlternating
        );
        assert_eq!(
            BraidWord::empty(Mode::B6).sign_class(),
            SignClass::PositiveAlternating {
                also_negative: true
            }
        );
    }

    #[test]
    fn display_collapses_runs() {
        assert_eq!(w("s1 s1 s2^-1 s2^-1 s2^-1", Mode::B6).to_string(), "s1^2 s2^-3");
        assert_eq!(BraidWord::empty(Mode::B6).to_string(), "e");
        assert_eq!(w("s1 s1^-1", Mode::B6).to_string(), "s1 s1^-1");
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = BraidWord> {
        prop::collection::vec((1u8..=5, prop::bool::ANY), 0..max_len).prop_map(|ls| {
            BraidWord {
                mode: Mode::B6,
                letters: ls
                    .into_iter()
                    .map(|(i, s)| BraidLetter::new(i, if s { 1 } else { -1 }))
                    .collect(),
            }
        })
    }

    proptest! {
        #[test]
        fn free_reduce_idempotent_and_shrinking(word in arb_word(12)) {
            let r = word.free_reduce();
            prop_assert!(r.len() <= word.len());
            prop_assert_eq!(r.free_reduce(), r);
        }

        #[test]
        fn inverse_concat_reduces_to_empty(word in arb_word(10)) {
            prop_assert!(word.invert_concat(&word).unwrap().free_reduce().is_empty());
        }

        #[test]
        fn roundtrip_display_parse(word in arb_word(10)) {
            let text = word.to_string();
            prop_assert_eq!(BraidWord::parse(&text, Mode::B6).unwrap(), word);
        }

        #[test]
        fn sign_class_concat_stable(a in arb_word(8), b in arb_word(8)) {
            let joined = a.concat(&b).unwrap();
            match (a.sign_class(), b.sign_class()) {
                (SignClass::PositiveAlternating { .. }, SignClass::PositiveAlternating { .. }) => {
                    let is_positive =
                        matches!(joined.sign_class(), SignClass::PositiveAlternating { .. });
                    prop_assert!(is_positive);
                }
                (SignClass::NegativeAlternating, SignClass::NegativeAlternating) => {
                    prop_assert_eq!(joined.sign_class(), SignClass::NegativeAlternating);
                }
                _ => {}
            }
        }
    }
}
