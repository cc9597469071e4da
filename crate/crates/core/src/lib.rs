//! Transducer algebra for the four-state Mealy machine B₄.
//!
//! The crate implements, with exact arithmetic throughout:
//!
//! * [`words`]: finite words and ultimately periodic ω-words `u·v^ω` in
//!   canonical form, plus the prefix metric as an exact dyadic value;
//! * [`mealy`]: total Mealy machines, transduction of finite and ultimately
//!   periodic words, serial composition, minimization, and equivalence;
//! * [`b4`]: the machine B₄ itself, the substitution η, and the word ξ;
//! * [`group`]: elements of the group generated by the state maps of B₄,
//!   with order computation, conjugation, and the `s a₁ p a₂ p … aₙ σ`
//!   normal form;
//! * [`orbit`]: iteration of ξ on binary ω-words, orbit records, density and
//!   transitivity witnesses, and the non-expansiveness check.
//!
//! Checks intended for mechanical verification return a [`report::Report`]
//! listing one named pass/fail line per claim.

pub mod b4;
pub mod group;
pub mod mealy;
pub mod orbit;
pub mod report;
pub mod words;

pub use b4::{B4State, MorphLetter, MorphWord};
pub use group::{GroupWord, KleinGen, NormalForm, Order};
pub use mealy::{InitialMachine, MealyMachine};
pub use orbit::{OrbitRecord, WitnessReport};
pub use report::{Check, Report};
pub use words::{Alphabet, Distance, FiniteWord, LcpLength, UPWord};
