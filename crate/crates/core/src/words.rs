//! Finite words and ultimately periodic infinite words over finite alphabets.
//!
//! Infinite words are restricted to the ultimately periodic shape `u·v^ω`.
//! Every [`UPWord`] is kept canonical (primitive period, minimal preperiod),
//! so equality is plain field equality and the prefix metric is computed
//! exactly. Distances are exact dyadic values, never floats.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Errors from word construction and word-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("duplicate letter '{0}' in alphabet")]
    DuplicateLetter(char),
    #[error("letter '{0}' does not belong to the alphabet")]
    UnknownLetter(char),
    #[error("period of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("letter '{0}' is not binary")]
    NonBinaryLetter(char),
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

fn parse_err(what: &'static str, detail: impl Into<String>) -> WordError {
    WordError::Parse {
        what,
        detail: detail.into(),
    }
}

/// An ordered set of letters. Order is significant: it fixes iteration order
/// everywhere (machine tables, canonical keys, enumeration).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Arc<[char]>,
}

impl Alphabet {
    /// Builds an alphabet from distinct letters, preserving order.
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self, WordError> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        for (i, &c) in letters.iter().enumerate() {
            if letters[..i].contains(&c) {
                return Err(WordError::DuplicateLetter(c));
            }
        }
        Ok(Alphabet {
            letters: letters.into(),
        })
    }

    /// The binary alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet {
            letters: Arc::from(['0', '1']),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> char {
        self.letters[i]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&l| l == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }

    pub fn is_binary(&self) -> bool {
        *self.letters == ['0', '1']
    }
}

/// A finite word over a fixed alphabet. The empty word is written `-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    letters: Vec<char>,
    alphabet: Alphabet,
}

impl FiniteWord {
    /// Builds a word after checking every letter against the alphabet.
    pub fn new<I: IntoIterator<Item = char>>(
        letters: I,
        alphabet: &Alphabet,
    ) -> Result<Self, WordError> {
        let letters: Vec<char> = letters.into_iter().collect();
        for &c in &letters {
            if !alphabet.contains(c) {
                return Err(WordError::UnknownLetter(c));
            }
        }
        Ok(FiniteWord {
            letters,
            alphabet: alphabet.clone(),
        })
    }

    pub fn empty(alphabet: &Alphabet) -> Self {
        FiniteWord {
            letters: Vec::new(),
            alphabet: alphabet.clone(),
        }
    }

    /// Parses the external syntax: a string of letters, or `-` for the
    /// empty word.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Self, WordError> {
        if s.is_empty() {
            return Err(parse_err("finite word", "empty input (write '-' for the empty word)"));
        }
        if s == "-" {
            return Ok(FiniteWord::empty(alphabet));
        }
        FiniteWord::new(s.chars(), alphabet)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> char {
        self.letters[i]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains_letter(&self, c: char) -> bool {
        self.letters.contains(&c)
    }

    /// The word repeated `n` times.
    pub fn repeat(&self, n: usize) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.letters.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        FiniteWord {
            letters,
            alphabet: self.alphabet.clone(),
        }
    }

    /// Concatenation of two finite words over the same alphabet.
    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord, WordError> {
        if self.alphabet != other.alphabet {
            return Err(WordError::AlphabetMismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FiniteWord {
            letters,
            alphabet: self.alphabet.clone(),
        })
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        other.letters.starts_with(&self.letters)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("-");
        }
        for &c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An ultimately periodic infinite word `u·v^ω`, stored in canonical form:
/// `v` is primitive and, when `u` is non-empty, the last letter of `u`
/// differs from the last letter of `v`. Canonical form is unique, so the
/// derived equality decides equality of the denoted infinite words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPWord {
    preperiod: FiniteWord,
    period: FiniteWord,
}

/// Shortest repeating root of a non-empty letter sequence.
fn primitive_root(letters: &[char]) -> &[char] {
    let n = letters.len();
    for d in 1..=n / 2 {
        if n.is_multiple_of(d) && letters.chunks(d).all(|chunk| chunk == &letters[..d]) {
            return &letters[..d];
        }
    }
    letters
}

impl UPWord {
    /// Builds `preperiod · period^ω` and canonicalizes eagerly.
    pub fn new(preperiod: FiniteWord, period: FiniteWord) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        if preperiod.alphabet != period.alphabet {
            return Err(WordError::AlphabetMismatch);
        }
        let alphabet = period.alphabet.clone();
        let mut pre = preperiod.letters;
        let mut per = primitive_root(&period.letters).to_vec();
        // Absorb: u'c (v'c)^ω = u' (cv')^ω. Rotating a primitive word keeps
        // it primitive, so one pass suffices.
        while let Some(&last) = pre.last() {
            if last != *per.last().expect("period is non-empty") {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(UPWord {
            preperiod: FiniteWord {
                letters: pre,
                alphabet: alphabet.clone(),
            },
            period: FiniteWord {
                letters: per,
                alphabet,
            },
        })
    }

    /// The purely periodic word `v^ω`.
    pub fn periodic(period: FiniteWord) -> Result<Self, WordError> {
        let empty = FiniteWord::empty(period.alphabet());
        UPWord::new(empty, period)
    }

    /// Parses the external syntax `u(v)`, e.g. `(1)` for `1^ω` and `00(1)`
    /// for `001^ω`. Non-canonical input is accepted and canonicalized.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Self, WordError> {
        let open = s
            .find('(')
            .ok_or_else(|| parse_err("ultimately periodic word", "expected 'u(v)'"))?;
        if !s.ends_with(')') || s.len() < open + 2 {
            return Err(parse_err("ultimately periodic word", "expected 'u(v)'"));
        }
        let u = &s[..open];
        let v = &s[open + 1..s.len() - 1];
        if v.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        let pre = FiniteWord::new(u.chars(), alphabet)?;
        let per = FiniteWord::new(v.chars(), alphabet)?;
        UPWord::new(pre, per)
    }

    pub fn preperiod(&self) -> &FiniteWord {
        &self.preperiod
    }

    pub fn period(&self) -> &FiniteWord {
        &self.period
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.period.alphabet()
    }

    /// The letter at position `i` (0-based).
    pub fn letter_at(&self, i: usize) -> char {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod.letter(i)
        } else {
            self.period.letter((i - p) % self.period.len())
        }
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> FiniteWord {
        let letters: Vec<char> = (0..n).map(|i| self.letter_at(i)).collect();
        FiniteWord {
            letters,
            alphabet: self.alphabet().clone(),
        }
    }

    /// The tail `x[n, ∞)` obtained by dropping the first `n` letters.
    pub fn suffix(&self, n: usize) -> UPWord {
        let p = self.preperiod.len();
        if n <= p {
            let pre = FiniteWord {
                letters: self.preperiod.letters[n..].to_vec(),
                alphabet: self.alphabet().clone(),
            };
            UPWord::new(pre, self.period.clone()).expect("period stays non-empty")
        } else {
            let r = (n - p) % self.period.len();
            let mut per = self.period.letters.clone();
            per.rotate_left(r);
            UPWord::periodic(FiniteWord {
                letters: per,
                alphabet: self.alphabet().clone(),
            })
            .expect("period stays non-empty")
        }
    }
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in self.preperiod.letters() {
            write!(f, "{c}")?;
        }
        f.write_str("(")?;
        for &c in self.period.letters() {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Prepends a finite word: `concat(u, x) = u·x`.
pub fn concat(u: &FiniteWord, x: &UPWord) -> Result<UPWord, WordError> {
    let pre = u.concat(x.preperiod())?;
    UPWord::new(pre, x.period().clone())
}

/// Length of the longest common prefix of two ultimately periodic words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcpLength {
    Finite(usize),
    Infinite,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact longest-common-prefix length. Two distinct ultimately periodic
/// words must disagree within `max(|u_x|, |u_y|) + lcm(|v_x|, |v_y|)`
/// letters, so the scan is bounded.
pub fn longest_common_prefix_len(x: &UPWord, y: &UPWord) -> Result<LcpLength, WordError> {
    if x.alphabet() != y.alphabet() {
        return Err(WordError::AlphabetMismatch);
    }
    if x == y {
        return Ok(LcpLength::Infinite);
    }
    let (pv, qv) = (x.period().len(), y.period().len());
    let bound = x.preperiod().len().max(y.preperiod().len()) + pv / gcd(pv, qv) * qv;
    for i in 0..bound {
        if x.letter_at(i) != y.letter_at(i) {
            return Ok(LcpLength::Finite(i));
        }
    }
    unreachable!("distinct canonical words agree beyond the decision bound");
}

/// An exact dyadic distance: either `0` or `2^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Zero,
    /// The value `2^{-m}` for the stored `m`.
    Dyadic(usize),
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, Distance::Dyadic(_)) => Ordering::Less,
            (Distance::Dyadic(_), Distance::Zero) => Ordering::Greater,
            // Larger exponent means smaller value.
            (Distance::Dyadic(a), Distance::Dyadic(b)) => b.cmp(a),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => f.write_str("0"),
            Distance::Dyadic(m) => write!(f, "2^-{m}"),
        }
    }
}

/// The prefix metric `d(x, y) = 2^{-|lcp(x, y)|}`, with `d(x, x) = 0`.
pub fn prefix_metric(x: &UPWord, y: &UPWord) -> Result<Distance, WordError> {
    match longest_common_prefix_len(x, y)? {
        LcpLength::Infinite => Ok(Distance::Zero),
        LcpLength::Finite(m) => Ok(Distance::Dyadic(m)),
    }
}

/// Complement of a binary letter.
pub fn complement_letter(a: char) -> Result<char, WordError> {
    match a {
        '0' => Ok('1'),
        '1' => Ok('0'),
        other => Err(WordError::NonBinaryLetter(other)),
    }
}
