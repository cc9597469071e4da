//! Elements of the group generated by the state maps of B₄.
//!
//! A group element is presented as a word over the generators `p`, `q`,
//! `a` (α) and `e` (ε ≡ identity), applied to ω-words left to right. All
//! four generators are involutions, so inverses are reversals. Element
//! equality, order, and enumeration go through realized machines: realize,
//! minimize, compare.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::b4::{b4_initial, b4_ref, B4State, MorphWord};
use crate::mealy::{equivalent, minimize, serial_compose, InitialMachine, MealyError};
use crate::report::Report;
use crate::words::{Alphabet, FiniteWord, UPWord};

/// Errors from generator-word parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid generator '{0}' (expected one of p, q, a, e)")]
    BadGenerator(char),
}

/// A word over the generators, denoting the composite of their state maps
/// in left-to-right application order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    gens: Vec<B4State>,
}

impl GroupWord {
    pub fn new(gens: Vec<B4State>) -> Self {
        GroupWord { gens }
    }

    pub fn identity() -> Self {
        GroupWord { gens: Vec::new() }
    }

    /// Parses a string over `{p, q, a, e}`. The empty word (identity) is
    /// written `-` or the empty string.
    pub fn parse(s: &str) -> Result<Self, GroupError> {
        if s.is_empty() || s == "-" {
            return Ok(GroupWord::identity());
        }
        let mut gens = Vec::with_capacity(s.len());
        for c in s.chars() {
            gens.push(B4State::from_char(c).ok_or(GroupError::BadGenerator(c))?);
        }
        Ok(GroupWord { gens })
    }

    pub fn from_morph(w: &MorphWord) -> Self {
        GroupWord {
            gens: w.letters().iter().map(|l| l.state()).collect(),
        }
    }

    pub fn gens(&self) -> &[B4State] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        GroupWord { gens }
    }

    /// The inverse word. Every generator is an involution, so reversing
    /// the word inverts the element.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            gens: self.gens.iter().rev().copied().collect(),
        }
    }

    pub fn repeat(&self, n: usize) -> GroupWord {
        let mut gens = Vec::with_capacity(self.gens.len() * n);
        for _ in 0..n {
            gens.extend_from_slice(&self.gens);
        }
        GroupWord { gens }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("-");
        }
        for g in &self.gens {
            f.write_str(g.name())?;
        }
        Ok(())
    }
}

/// Applies the element to an ultimately periodic word: one transduction of
/// B₄ per generator, left to right.
pub fn apply(w: &GroupWord, x: &UPWord) -> Result<UPWord, MealyError> {
    let m = b4_ref();
    let mut cur = x.clone();
    for g in &w.gens {
        cur = m.transduce_up(g.index(), &cur)?;
    }
    Ok(cur)
}

/// Applies the element to a finite word (the induced length-preserving map).
pub fn apply_finite(w: &GroupWord, u: &FiniteWord) -> Result<FiniteWord, MealyError> {
    let m = b4_ref();
    let mut cur = u.clone();
    for g in &w.gens {
        cur = m.run_finite(g.index(), &cur)?.1;
    }
    Ok(cur)
}

/// Realizes the element as one initial machine: the left fold of serial
/// composition over the generators' machines. Each fold step minimizes, so
/// intermediate machines stay as small as the elements they denote.
pub fn realize(w: &GroupWord) -> InitialMachine {
    let mut acc = InitialMachine::identity(Alphabet::binary());
    for g in &w.gens {
        let step = serial_compose(&acc, &b4_initial(*g)).expect("binary alphabets agree");
        acc = minimize(&step);
    }
    acc
}

/// Decides equality of two elements via their minimized realizations.
pub fn element_equal(w1: &GroupWord, w2: &GroupWord) -> bool {
    equivalent(&realize(w1), &realize(w2)).expect("same input alphabet")
}

/// The order of an element, when it does not exceed the search cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    ExceedsCap,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::ExceedsCap => f.write_str("EXCEEDS_CAP"),
        }
    }
}

/// Smallest `n ≤ cap` with `w^n = identity`, or [`Order::ExceedsCap`].
///
/// A power that is the identity must fix `1^ω`, so the orbit of `1^ω` is
/// swept first; powers that move it are ruled out without building their
/// machines. Only the surviving candidates are checked by iterated
/// composition, minimizing after every step.
pub fn order(w: &GroupWord, cap: u64) -> Order {
    let one = UPWord::parse("(1)", &Alphabet::binary()).expect("valid word");
    let mut candidates = Vec::new();
    let mut y = one.clone();
    for n in 1..=cap {
        y = apply(w, &y).expect("binary word");
        if y == one {
            candidates.push(n);
        }
    }
    let Some(&last) = candidates.last() else {
        return Order::ExceedsCap;
    };
    let g = realize(w);
    let mut acc = g.clone();
    for n in 1..=last {
        if candidates.contains(&n) && acc.is_identity() {
            return Order::Finite(n);
        }
        if n < last {
            acc = minimize(&serial_compose(&acc, &g).expect("binary alphabets agree"));
        }
    }
    Order::ExceedsCap
}

/// The conjugate `h·w·h⁻¹` (as a word; not reduced).
pub fn conjugate(w: &GroupWord, h: &GroupWord) -> GroupWord {
    h.concat(w).concat(&h.inverse())
}

/// A generator of the Klein four-subgroup `{identity, α, q, β}` with
/// `β = αq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KleinGen {
    Q,
    Alpha,
    Beta,
}

impl KleinGen {
    fn bits(self) -> u8 {
        match self {
            KleinGen::Q => 0b01,
            KleinGen::Alpha => 0b10,
            KleinGen::Beta => 0b11,
        }
    }

    fn from_bits(b: u8) -> Option<KleinGen> {
        match b {
            0b01 => Some(KleinGen::Q),
            0b10 => Some(KleinGen::Alpha),
            0b11 => Some(KleinGen::Beta),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KleinGen::Q => "q",
            KleinGen::Alpha => "a",
            KleinGen::Beta => "b",
        }
    }

    /// Expansion back into generators (`β = α·q`).
    pub fn expand(self) -> Vec<B4State> {
        match self {
            KleinGen::Q => vec![B4State::Q],
            KleinGen::Alpha => vec![B4State::Alpha],
            KleinGen::Beta => vec![B4State::Alpha, B4State::Q],
        }
    }
}

/// Product in the Klein four-group; `None` is the identity. The Klein
/// elements commute and square to the identity, so the product is xor on
/// the two-bit encoding.
fn klein_mul(x: KleinGen, y: KleinGen) -> Option<KleinGen> {
    KleinGen::from_bits(x.bits() ^ y.bits())
}

/// The normal form `s a₁ p a₂ p … p aₙ σ`: Klein letters `aᵢ ∈ {q, α, β}`
/// separated by single `p`s, with optional leading and trailing `p`.
/// The identity is distinguished; a bare `p` is stored as leading only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    leading_p: bool,
    core: Vec<KleinGen>,
    trailing_p: bool,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        !self.leading_p && !self.trailing_p && self.core.is_empty()
    }

    pub fn leading_p(&self) -> bool {
        self.leading_p
    }

    pub fn core(&self) -> &[KleinGen] {
        &self.core
    }

    pub fn trailing_p(&self) -> bool {
        self.trailing_p
    }

    /// Expands the normal form back into a generator word.
    pub fn to_group_word(&self) -> GroupWord {
        let mut gens = Vec::new();
        if self.leading_p {
            gens.push(B4State::P);
        }
        for (i, k) in self.core.iter().enumerate() {
            if i > 0 {
                gens.push(B4State::P);
            }
            gens.extend(k.expand());
        }
        if self.trailing_p {
            gens.push(B4State::P);
        }
        GroupWord::new(gens)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        if self.leading_p {
            f.write_str("p")?;
        }
        for (i, k) in self.core.iter().enumerate() {
            if i > 0 {
                f.write_str("p")?;
            }
            f.write_str(k.name())?;
        }
        if self.trailing_p {
            f.write_str("p")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    P,
    K(KleinGen),
}

/// Rewrites a word to normal form: drop `e`, cancel `pp`, and merge
/// adjacent Klein letters through the four-group. Each rule shortens the
/// word, and a stack keeps the invariant that no rule applies inside the
/// processed prefix, so one pass reaches the fixpoint.
pub fn normal_form(w: &GroupWord) -> NormalForm {
    let mut stack: Vec<Sym> = Vec::with_capacity(w.len());
    for &g in w.gens() {
        match g {
            B4State::Epsilon => {}
            B4State::P => {
                if stack.last() == Some(&Sym::P) {
                    stack.pop();
                } else {
                    stack.push(Sym::P);
                }
            }
            B4State::Q | B4State::Alpha => {
                let k = if g == B4State::Q { KleinGen::Q } else { KleinGen::Alpha };
                match stack.last().copied() {
                    Some(Sym::K(t)) => {
                        stack.pop();
                        if let Some(r) = klein_mul(t, k) {
                            stack.push(Sym::K(r));
                        }
                    }
                    _ => stack.push(Sym::K(k)),
                }
            }
        }
    }
    let mut leading_p = false;
    let mut core = Vec::new();
    let mut trailing_p = false;
    for (i, s) in stack.iter().enumerate() {
        match s {
            Sym::P if i == 0 => leading_p = true,
            Sym::P => trailing_p = true, // alternation: only the last P can remain
            Sym::K(k) => {
                trailing_p = false;
                core.push(*k);
            }
        }
    }
    // A bare p is stored as leading.
    if core.is_empty() && trailing_p {
        leading_p = true;
        trailing_p = false;
    }
    NormalForm {
        leading_p,
        core,
        trailing_p,
    }
}

/// Verifies the Klein four-subgroup `{identity, α, q, αq}` and emits its
/// multiplication table. Under the index encoding `I=0, a=1, q=2, b=3` the
/// Klein law is xor of indices, which is what the table check asserts.
pub fn klein_table() -> Report {
    let mut report = Report::new();
    let elems: [GroupWord; 4] = [
        GroupWord::identity(),
        GroupWord::parse("a").expect("valid"),
        GroupWord::parse("q").expect("valid"),
        GroupWord::parse("aq").expect("valid"),
    ];
    let names = ["I", "a", "q", "b"];

    let mut distinct = true;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if element_equal(&elems[i], &elems[j]) {
                distinct = false;
            }
        }
    }
    report.record("klein:distinct", distinct, "4 pairwise distinct elements");

    for i in 1..4 {
        let sq = elems[i].concat(&elems[i]);
        report.record(
            format!("klein:involution:{}", names[i]),
            element_equal(&sq, &GroupWord::identity()),
            format!("({0})² = I", names[i]),
        );
    }
    report.record(
        "klein:commute",
        element_equal(
            &GroupWord::parse("aq").expect("valid"),
            &GroupWord::parse("qa").expect("valid"),
        ),
        "aq = qa",
    );

    let mut rows = Vec::new();
    let mut law_holds = true;
    for i in 0..4 {
        let mut row = Vec::new();
        for j in 0..4 {
            let prod = elems[i].concat(&elems[j]);
            let mut found = None;
            for (k, e) in elems.iter().enumerate() {
                if element_equal(&prod, e) {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => {
                    if k != i ^ j {
                        law_holds = false;
                    }
                    row.push(names[k]);
                }
                None => {
                    law_holds = false;
                    row.push("?");
                }
            }
        }
        rows.push(format!("{}: {}", names[i], row.join(" ")));
    }
    report.record("klein:table", law_holds, rows.join(" | "));
    report
}

/// Klein table checks plus the parity behavior behind them: on a word
/// `1^ℓ 0 x₁ x₂ …` the element α flips `x₁` exactly when ℓ is odd, q exactly
/// when ℓ is even, and αq always.
pub fn verify_lemma52(max_l: usize) -> Report {
    use crate::words::{complement_letter, concat};

    let mut report = klein_table();
    let bin = Alphabet::binary();
    let tails: Vec<UPWord> = ["0(1)", "1(0)", "(01)"]
        .iter()
        .map(|s| UPWord::parse(s, &bin).expect("valid word"))
        .collect();
    let gens = [
        ("alpha", GroupWord::parse("a").expect("valid")),
        ("q", GroupWord::parse("q").expect("valid")),
        ("alphaq", GroupWord::parse("aq").expect("valid")),
    ];
    for l in 0..=max_l {
        for (name, w) in &gens {
            let flip = match *name {
                "alpha" => l % 2 == 1,
                "q" => l % 2 == 0,
                _ => true,
            };
            let mut ok = true;
            for tail in &tails {
                let mut head: Vec<char> = std::iter::repeat_n('1', l).collect();
                head.push('0');
                let x1 = tail.letter_at(0);
                let input = concat(&FiniteWord::new(head.clone(), &bin).expect("binary"), tail)
                    .expect("same alphabet");
                head.push(if flip { complement_letter(x1).expect("binary") } else { x1 });
                let want = concat(
                    &FiniteWord::new(head, &bin).expect("binary"),
                    &tail.suffix(1),
                )
                .expect("same alphabet");
                if apply(w, &input).expect("binary word") != want {
                    ok = false;
                }
            }
            let verb = if flip { "flips" } else { "fixes" };
            report.record(
                format!("lemma52:l={l}:{name}"),
                ok,
                format!("{verb} x1 after 1^{l} 0"),
            );
        }
    }
    report
}

/// Computed orders of the short products of generators, plus conjugation
/// invariance spot checks.
pub fn verify_lemma55() -> Report {
    let mut report = Report::new();
    let cases: [(&str, u64); 8] = [
        ("p", 2),
        ("q", 2),
        ("a", 2),
        ("aq", 2),
        ("pq", 8),
        ("pa", 4),
        ("qp", 8),
        ("ap", 4),
    ];
    for (word, want) in cases {
        let w = GroupWord::parse(word).expect("valid");
        let got = order(&w, 32);
        report.record(
            format!("lemma55:order({word})={want}"),
            got == Order::Finite(want),
            format!("order({word}) = {got}"),
        );
    }
    // Conjugation preserves order.
    for (word, by, want) in [("pq", "p", 8), ("pa", "q", 4), ("qp", "aq", 8)] {
        let w = GroupWord::parse(word).expect("valid");
        let h = GroupWord::parse(by).expect("valid");
        let got = order(&conjugate(&w, &h), 32);
        report.record(
            format!("lemma55:conjugate({word},{by})"),
            got == Order::Finite(want),
            format!("order = {got}"),
        );
    }
    report
}

/// Counts distinct elements representable by generator words of length at
/// most `L`, for each `L ≤ max_len`. Deduplication is by canonical keys of
/// minimized realizations; the search extends only elements first seen at
/// the previous length, which covers all products by induction.
pub fn enumerate_elements(max_len: usize) -> Vec<(usize, u64)> {
    let gens: Vec<InitialMachine> = B4State::ALL.iter().map(|&s| minimize(&b4_initial(s))).collect();
    let id = InitialMachine::identity(Alphabet::binary());
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(minimize(&id).canonical_key());
    let mut counts = vec![(0usize, 1u64)];
    let mut frontier = vec![minimize(&id)];
    for l in 1..=max_len {
        let mut next_frontier = Vec::new();
        for m in &frontier {
            for g in &gens {
                let c = minimize(&serial_compose(m, g).expect("binary alphabets agree"));
                if seen.insert(c.canonical_key()) {
                    next_frontier.push(c);
                }
            }
        }
        counts.push((l, seen.len() as u64));
        frontier = next_frontier;
    }
    counts
}
