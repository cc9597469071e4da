//! The four-state Mealy machine B₄, the substitution η, and the word ξ.
//!
//! B₄ works on the binary alphabet with states `p`, `q`, `a` (α) and `e`
//! (ε, the identity sink):
//!
//! ```text
//! state   on 0         on 1
//! p       out 1 → e    out 0 → e      (flip one letter, then copy)
//! q       out 0 → p    out 1 → a
//! a       out 0 → e    out 1 → q
//! e       out 0 → e    out 1 → e      (copy forever)
//! ```
//!
//! The correctness certificate for this table is behavioural: the identity
//! suites in [`verify_cor32`] and [`verify_lemma41`] check the defining
//! identities of the state maps, e.g. `p*1^ω = 01^ω`, `q*01^ω = 001^ω`, and
//! the reset behaviour `q∘01 = p∘1 = e`.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::group::{apply, GroupWord};
use crate::mealy::{InitialMachine, MealyMachine};
use crate::report::Report;
use crate::words::{concat, Alphabet, FiniteWord, UPWord};

/// Errors specific to the substitution η.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum B4Error {
    #[error("the substitution is defined on non-empty words only")]
    EmptyMorphWord,
}

/// The states of B₄. `Alpha` renders as `a` and `Epsilon` as `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum B4State {
    P,
    Q,
    Alpha,
    Epsilon,
}

impl B4State {
    pub const ALL: [B4State; 4] = [B4State::P, B4State::Q, B4State::Alpha, B4State::Epsilon];

    /// Index of the state in [`b4_machine`]'s state list.
    pub fn index(self) -> usize {
        match self {
            B4State::P => 0,
            B4State::Q => 1,
            B4State::Alpha => 2,
            B4State::Epsilon => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            B4State::P => "p",
            B4State::Q => "q",
            B4State::Alpha => "a",
            B4State::Epsilon => "e",
        }
    }

    pub fn from_char(c: char) -> Option<B4State> {
        match c {
            'p' => Some(B4State::P),
            'q' => Some(B4State::Q),
            'a' => Some(B4State::Alpha),
            'e' => Some(B4State::Epsilon),
            _ => None,
        }
    }
}

impl fmt::Display for B4State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The machine description bundled with the crate. Loading it yields
/// exactly the machine built by [`b4_machine`].
pub const B4_MACHINE_FILE: &str = include_str!("../data/b4.machine");

fn b4_cached() -> &'static MealyMachine {
    static B4: OnceLock<MealyMachine> = OnceLock::new();
    B4.get_or_init(|| {
        MealyMachine::new(
            "b4",
            Alphabet::binary(),
            Alphabet::binary(),
            &["p", "q", "a", "e"],
            &[
                ("p", '0', '1', "e"),
                ("p", '1', '0', "e"),
                ("q", '0', '0', "p"),
                ("q", '1', '1', "a"),
                ("a", '0', '0', "e"),
                ("a", '1', '1', "q"),
                ("e", '0', '0', "e"),
                ("e", '1', '1', "e"),
            ],
        )
        .expect("the B4 table is total and well-formed")
    })
}

/// The machine B₄.
pub fn b4_machine() -> MealyMachine {
    b4_cached().clone()
}

/// Internal borrow used by hot transduction loops.
pub(crate) fn b4_ref() -> &'static MealyMachine {
    b4_cached()
}

/// B₄ started in the given state.
pub fn b4_initial(s: B4State) -> InitialMachine {
    InitialMachine::new(b4_machine(), s.name()).expect("state belongs to B4")
}

/// A letter in the domain of η: `p`, `q`, or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphLetter {
    P,
    Q,
    Alpha,
}

impl MorphLetter {
    pub fn state(self) -> B4State {
        match self {
            MorphLetter::P => B4State::P,
            MorphLetter::Q => B4State::Q,
            MorphLetter::Alpha => B4State::Alpha,
        }
    }
}

/// A finite word over `{p, q, α}`, the domain of the substitution η.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphWord(Vec<MorphLetter>);

impl MorphWord {
    pub fn new(letters: Vec<MorphLetter>) -> Self {
        MorphWord(letters)
    }

    pub fn letters(&self) -> &[MorphLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for MorphWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(l.state().name())?;
        }
        Ok(())
    }
}

/// The substitution `η: p ↦ pqp, q ↦ α, α ↦ q` applied to a non-empty word.
pub fn eta(w: &MorphWord) -> Result<MorphWord, B4Error> {
    if w.is_empty() {
        return Err(B4Error::EmptyMorphWord);
    }
    let mut out = Vec::with_capacity(w.len() * 3);
    for &l in w.letters() {
        match l {
            MorphLetter::P => out.extend([MorphLetter::P, MorphLetter::Q, MorphLetter::P]),
            MorphLetter::Q => out.push(MorphLetter::Alpha),
            MorphLetter::Alpha => out.push(MorphLetter::Q),
        }
    }
    Ok(MorphWord(out))
}

/// `η^ℓ(p)`, computed by iterating the substitution. Has length `2^{ℓ+1}-1`.
pub fn eta_power(l: u32) -> MorphWord {
    let mut w = MorphWord(vec![MorphLetter::P]);
    for _ in 0..l {
        w = eta(&w).expect("η preserves non-emptiness");
    }
    w
}

/// The word ξ = p·α·q (state maps applied left to right).
pub fn xi() -> GroupWord {
    GroupWord::new(vec![B4State::P, B4State::Alpha, B4State::Q])
}

fn bin() -> Alphabet {
    Alphabet::binary()
}

fn ones(l: usize) -> FiniteWord {
    FiniteWord::new(std::iter::repeat_n('1', l), &bin()).expect("binary letters")
}

fn ones_omega() -> UPWord {
    UPWord::periodic(ones(1)).expect("non-empty period")
}

/// `1^ℓ 0 1^ω`.
fn ones_zero_ones_omega(l: usize) -> UPWord {
    let mut pre = ones(l).letters().to_vec();
    pre.push('0');
    let pre = FiniteWord::new(pre, &bin()).expect("binary letters");
    concat(&pre, &ones_omega()).expect("same alphabet")
}

/// `1^ℓ 00 1^ω`.
fn ones_zerozero_ones_omega(l: usize) -> UPWord {
    let mut pre = ones(l).letters().to_vec();
    pre.extend(['0', '0']);
    let pre = FiniteWord::new(pre, &bin()).expect("binary letters");
    concat(&pre, &ones_omega()).expect("same alphabet")
}

/// The δ of the decomposition `η^ℓ(p) = η^{ℓ-1}(p) δ η^{ℓ-1}(p)`: `q` for
/// odd ℓ, `α` for even ℓ ≥ 2.
fn delta_for(l: u32) -> MorphLetter {
    if l % 2 == 1 {
        MorphLetter::Q
    } else {
        MorphLetter::Alpha
    }
}

/// Checks the recurrence `η^ℓ(p) = η^{ℓ-1}(p) δ η^{ℓ-1}(p)` and the length
/// formula `|η^ℓ(p)| = 2^{ℓ+1} - 1` for every `ℓ ≤ max_l`.
pub fn verify_lemma31(max_l: u32) -> Report {
    let mut report = Report::new();
    let mut prev = eta_power(0);
    report.record_eq("lemma31:l=0:length", prev.len(), 1);
    for l in 1..=max_l {
        let cur = eta(&prev).expect("non-empty");
        let mut expected = prev.letters().to_vec();
        expected.push(delta_for(l));
        expected.extend_from_slice(prev.letters());
        report.record(
            format!("lemma31:l={l}:recurrence"),
            cur.letters() == expected.as_slice(),
            format!("delta={}", delta_for(l).state()),
        );
        report.record_eq(
            format!("lemma31:l={l}:length"),
            cur.len(),
            (1usize << (l + 1)) - 1,
        );
        prev = cur;
    }
    report
}

/// Checks the interchange identities obtained from the decomposition of
/// `η^{ℓ+1}(p)`: with `δ = q` for even ℓ and `δ = α` for odd ℓ,
///
/// * `1^ℓ01^ω δ η^ℓ = 1^ℓ001^ω η^ℓ` and symmetrically,
/// * `δ ∘ 1^ℓ00 = δ ∘ 1^ℓ01 = e`.
pub fn verify_cor32(l: u32) -> Report {
    let mut report = Report::new();
    let delta = delta_for(l + 1);
    let eta_l = GroupWord::from_morph(&eta_power(l));
    let with_delta = GroupWord::new(vec![delta.state()]).concat(&eta_l);

    let x = ones_zero_ones_omega(l as usize);
    let y = ones_zerozero_ones_omega(l as usize);

    let lhs1 = apply(&with_delta, &x).expect("binary word");
    let rhs1 = apply(&eta_l, &y).expect("binary word");
    report.record(
        format!("cor32:l={l}:swap1"),
        lhs1 == rhs1,
        format!("delta={} value={lhs1}", delta.state()),
    );
    let lhs2 = apply(&with_delta, &y).expect("binary word");
    let rhs2 = apply(&eta_l, &x).expect("binary word");
    report.record(
        format!("cor32:l={l}:swap2"),
        lhs2 == rhs2,
        format!("delta={} value={lhs2}", delta.state()),
    );

    let m = b4_ref();
    for (tag, last) in [("00", '0'), ("01", '1')] {
        let mut letters = ones(l as usize).letters().to_vec();
        letters.extend(['0', last]);
        let u = FiniteWord::new(letters, &bin()).expect("binary letters");
        let (end, _) = m
            .run_finite(delta.state().index(), &u)
            .expect("binary word");
        report.record(
            format!("cor32:l={l}:reset{tag}"),
            end == B4State::Epsilon.index(),
            format!("{}∘1^{l}{tag} = {}", delta.state(), m.state_name(end)),
        );
    }
    report
}

/// Checks, for `w = η^ℓ(p) = p₁…p_m` with prefix maps `η_j`:
///
/// * (i)  `1^ω η^ℓ = 1^ℓ01^ω` and `1^ℓ01^ω η^ℓ = 1^ω`;
/// * (ii) each of `{1^{ℓ+1} η_j}` and `{1^ℓ0 η_j}` for `j = 0..m` exhausts
///   `{0,1}^{ℓ+1}`;
/// * (iii) `p_{j+1} ∘ (1^{ℓ+1} η_j) = p_{j+1} ∘ (1^ℓ0 η_j) = e` for `j < m`.
///
/// The prefix images are evaluated incrementally: one machine run per step
/// yields both the next image and the reset check.
pub fn verify_lemma41(l: u32) -> Report {
    let mut report = Report::new();
    let word = eta_power(l);
    let states: Vec<B4State> = word.letters().iter().map(|l| l.state()).collect();
    let m = states.len();
    let gw = GroupWord::from_morph(&word);

    let img = apply(&gw, &ones_omega()).expect("binary word");
    report.record_eq(
        format!("lemma41:l={l}:(i)ones"),
        img.to_string(),
        ones_zero_ones_omega(l as usize).to_string(),
    );
    let back = apply(&gw, &ones_zero_ones_omega(l as usize)).expect("binary word");
    report.record_eq(format!("lemma41:l={l}:(i)back"), back.to_string(), "(1)".to_string());

    let machine = b4_ref();
    let n = l as usize + 1;
    let mut zero_start = ones(l as usize).letters().to_vec();
    zero_start.push('0');
    let rows: [(&str, FiniteWord); 2] = [
        ("u", ones(n)),
        ("v", FiniteWord::new(zero_start, &bin()).expect("binary letters")),
    ];
    for (tag, start) in rows {
        let mut seen: HashSet<Vec<char>> = HashSet::new();
        let mut current = start;
        let mut resets_ok = true;
        let mut first_bad = None;
        seen.insert(current.letters().to_vec());
        for (j, s) in states.iter().enumerate() {
            let (end, next) = machine
                .run_finite(s.index(), &current)
                .expect("binary word");
            if end != B4State::Epsilon.index() && first_bad.is_none() {
                resets_ok = false;
                first_bad = Some(j);
            }
            current = next;
            seen.insert(current.letters().to_vec());
        }
        report.record(
            format!("lemma41:l={l}:(ii){tag}"),
            seen.len() == 1 << n,
            format!("{} of {} prefix images", seen.len(), 1usize << n),
        );
        report.record(
            format!("lemma41:l={l}:(iii){tag}"),
            resets_ok,
            match first_bad {
                None => format!("all {m} runs reset to e"),
                Some(j) => format!("run {j} does not reset to e"),
            },
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::parse_machine_file;

    fn up(s: &str) -> UPWord {
        UPWord::parse(s, &bin()).unwrap()
    }

    #[test]
    fn bundled_file_matches_builtin_machine() {
        let (parsed, start) = parse_machine_file(B4_MACHINE_FILE).unwrap();
        assert_eq!(parsed, b4_machine());
        assert_eq!(start, None);
        // The printer reproduces the bundled bytes exactly.
        assert_eq!(
            crate::mealy::format_machine_file(&b4_machine(), None),
            B4_MACHINE_FILE
        );
    }

    #[test]
    fn state_maps_match_defining_identities() {
        let m = b4_ref();
        // p*1^ω = 01^ω, p*01^ω = 1^ω
        assert_eq!(m.transduce_up(B4State::P.index(), &up("(1)")).unwrap(), up("0(1)"));
        assert_eq!(m.transduce_up(B4State::P.index(), &up("0(1)")).unwrap(), up("(1)"));
        // q*01^ω = 001^ω, q*001^ω = 01^ω
        assert_eq!(m.transduce_up(B4State::Q.index(), &up("0(1)")).unwrap(), up("00(1)"));
        assert_eq!(m.transduce_up(B4State::Q.index(), &up("00(1)")).unwrap(), up("0(1)"));
        // step(q, 0) = (p, 0)
        let (next, out) = m.step(B4State::Q.index(), '0').unwrap();
        assert_eq!((m.state_name(next), out), ("p", '0'));
    }

    #[test]
    fn resets_reach_the_identity_sink() {
        let m = b4_ref();
        let e = B4State::Epsilon.index();
        for (state, word) in [
            (B4State::P, "11"),
            (B4State::P, "00"),
            (B4State::P, "10"),
            (B4State::P, "01"),
            (B4State::Q, "01"),
            (B4State::Q, "00"),
        ] {
            let u = FiniteWord::parse(word, &bin()).unwrap();
            let (end, _) = m.run_finite(state.index(), &u).unwrap();
            assert_eq!(end, e, "{state}∘{word}");
        }
    }

    #[test]
    fn eta_expands_letters() {
        let p = MorphWord::new(vec![MorphLetter::P]);
        assert_eq!(eta(&p).unwrap().to_string(), "pqp");
        assert_eq!(eta_power(2).to_string(), "pqpapqp");
        assert_eq!(eta_power(3).len(), 15);
        assert_eq!(eta(&MorphWord::new(vec![])), Err(B4Error::EmptyMorphWord));
    }

    #[test]
    fn xi_is_p_alpha_q() {
        assert_eq!(xi().to_string(), "paq");
        assert_eq!(apply(&xi(), &up("(1)")).unwrap(), up("00(1)"));
    }

    #[test]
    fn eta_image_transduces_ones() {
        // 1^ω η¹ = 101^ω
        let g = GroupWord::from_morph(&eta_power(1));
        assert_eq!(apply(&g, &up("(1)")).unwrap(), up("10(1)"));
    }

    #[test]
    fn lemma31_report_passes() {
        let r = verify_lemma31(8);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn cor32_report_passes_for_small_l() {
        for l in 0..=6 {
            let r = verify_cor32(l);
            assert!(r.all_passed(), "l={l}\n{r}");
        }
    }

    #[test]
    fn lemma41_report_passes_for_small_l() {
        for l in 0..=6 {
            let r = verify_lemma41(l);
            assert!(r.all_passed(), "l={l}\n{r}");
        }
    }
}
