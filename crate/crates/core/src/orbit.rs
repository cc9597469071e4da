//! Orbits of the map ξ on binary ω-words: iteration, the structure of the
//! orbit of `1^ω`, density and transitivity witnesses, and the
//! non-expansiveness of sequential functions in the prefix metric.

use std::collections::HashSet;

use crate::b4::xi;
use crate::group::{apply, GroupWord};
use crate::report::Report;
use crate::words::{
    concat, prefix_metric, Alphabet, Distance, FiniteWord, UPWord,
};

fn bin() -> Alphabet {
    Alphabet::binary()
}

fn ones_omega() -> UPWord {
    UPWord::parse("(1)", &bin()).expect("valid word")
}

fn zero_ones_omega() -> UPWord {
    UPWord::parse("0(1)", &bin()).expect("valid word")
}

/// `x ξ^k`, by k-fold application.
pub fn iterate(x: &UPWord, k: u64) -> UPWord {
    let w = xi();
    let mut cur = x.clone();
    for _ in 0..k {
        cur = apply(&w, &cur).expect("binary word");
    }
    cur
}

/// One row of an orbit listing: the iterate split as `u_k · x_k` with
/// `|u_k|` fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub k: u64,
    pub prefix: FiniteWord,
    pub tail: UPWord,
}

/// Records `k = 1..=steps` of the ξ-orbit of `start`, splitting each
/// iterate after `prefix_len` letters.
pub fn orbit_records(start: &UPWord, steps: u64, prefix_len: usize) -> Vec<OrbitRecord> {
    let w = xi();
    let mut records = Vec::with_capacity(steps as usize);
    let mut cur = start.clone();
    for k in 1..=steps {
        cur = apply(&w, &cur).expect("binary word");
        records.push(OrbitRecord {
            k,
            prefix: cur.prefix(prefix_len),
            tail: cur.suffix(prefix_len),
        });
    }
    records
}

/// Sweeps `1^ω ξ^k` for `k = 1..=2^n`, splitting after `n` letters, and
/// checks the five structural claims:
///
/// * (i)   `u_ℓ` contains a `0` for every `ℓ < 2^n`;
/// * (ii)  the prefixes `u_1, …, u_{2^n}` exhaust `{0,1}^n`;
/// * (iii) `x_ℓ = 1^ω` for `ℓ < 2^{n-1}`;
/// * (iv)  `x_ℓ = 01^ω` for `2^{n-1} ≤ ℓ < 2^n`;
/// * (v)   `1^ω ξ^{2^n} = 1^n 00 1^ω`.
///
/// For `n = 1` the range of (iii) is empty and (iv) covers `ℓ = 1`.
pub fn verify_lemma56(n: u32) -> Report {
    let mut report = Report::new();
    let total: u64 = 1 << n;
    let half: u64 = total / 2;
    let one = ones_omega();
    let zero_one = zero_ones_omega();

    let mut zero_factor_ok = true;
    let mut low_tail_bad = None;
    let mut high_tail_bad = None;
    let mut prefixes: HashSet<Vec<char>> = HashSet::new();
    let mut last = None;

    let w = xi();
    let mut cur = one.clone();
    for k in 1..=total {
        cur = apply(&w, &cur).expect("binary word");
        let u = cur.prefix(n as usize);
        let x = cur.suffix(n as usize);
        if k < total && !u.contains_letter('0') {
            zero_factor_ok = false;
        }
        if k < half && x != one && low_tail_bad.is_none() {
            low_tail_bad = Some(k);
        }
        if half <= k && k < total && x != zero_one && high_tail_bad.is_none() {
            high_tail_bad = Some(k);
        }
        prefixes.insert(u.letters().to_vec());
        if k == total {
            last = Some(cur.clone());
        }
    }

    report.record(
        format!("lemma56:n={n}:(i)"),
        zero_factor_ok,
        "every u_l with l < 2^n contains 0",
    );
    report.record(
        format!("lemma56:n={n}:(ii)"),
        prefixes.len() as u64 == total,
        format!("{} of {} prefixes", prefixes.len(), total),
    );
    report.record(
        format!("lemma56:n={n}:(iii)"),
        low_tail_bad.is_none(),
        match low_tail_bad {
            None if half <= 1 => "range l < 2^(n-1) is empty".to_string(),
            None => "x_l = 1^ω below 2^(n-1)".to_string(),
            Some(k) => format!("tail differs from 1^ω at k={k}"),
        },
    );
    report.record(
        format!("lemma56:n={n}:(iv)"),
        high_tail_bad.is_none(),
        match high_tail_bad {
            None => "x_l = 01^ω on [2^(n-1), 2^n)".to_string(),
            Some(k) => format!("tail differs from 01^ω at k={k}"),
        },
    );
    let want_last = {
        let mut letters = vec!['1'; n as usize];
        letters.extend(['0', '0']);
        let pre = FiniteWord::new(letters, &bin()).expect("binary letters");
        concat(&pre, &ones_omega()).expect("same alphabet")
    };
    let got_last = last.expect("loop ran at least once");
    report.record_eq(
        format!("lemma56:n={n}:(v)"),
        got_last.to_string(),
        want_last.to_string(),
    );
    report
}

/// Outcome of a witness search along an orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// Description of the search target.
    pub target: String,
    /// Iterate index that hit the target, if any.
    pub found: Option<u64>,
    /// Exact distance achieved at the witness.
    pub metric: Distance,
    /// Number of iterates examined.
    pub iterations: u64,
}

impl WitnessReport {
    pub fn succeeded(&self) -> bool {
        self.found.is_some()
    }
}

/// Searches `k = 1..=2^m` for an iterate of `start` that agrees with
/// `target` on the first `m` letters. Exhausting the sweep without a hit is
/// reported as a counterexample, not an error.
pub fn density_witness(start: &UPWord, target: &UPWord, m: u32) -> WitnessReport {
    let goal = target.prefix(m as usize);
    let w = xi();
    let mut cur = start.clone();
    let bound: u64 = 1 << m;
    for k in 1..=bound {
        cur = apply(&w, &cur).expect("binary word");
        if cur.prefix(m as usize) == goal {
            return WitnessReport {
                target: format!("prefix {goal} of {target}"),
                found: Some(k),
                metric: prefix_metric(&cur, target).expect("same alphabet"),
                iterations: k,
            };
        }
    }
    WitnessReport {
        target: format!("prefix {goal} of {target}"),
        found: None,
        metric: prefix_metric(&cur, target).expect("same alphabet"),
        iterations: bound,
    }
}

/// Witness for topological transitivity: starting at `x` exactly (distance
/// 0), finds an iterate within `2^{-eps_exp}` of `y`. Searching prefixes of
/// length `eps_exp + 1` makes the achieved distance strictly smaller than
/// the requested one.
pub fn transitivity_witness(x: &UPWord, y: &UPWord, eps_exp: u32) -> WitnessReport {
    density_witness(x, y, eps_exp + 1)
}

/// Checks non-expansiveness along an orbit pair: `d(x ξ̂^n, y ξ̂^n) ≤ d(x, y)`
/// for every `n ≤ n_max`, where `ξ̂` is the given element. Exact dyadic
/// comparisons throughout.
pub fn lipschitz_check(w: &GroupWord, x: &UPWord, y: &UPWord, n_max: u64) -> Report {
    let mut report = Report::new();
    let d0 = prefix_metric(x, y).expect("same alphabet");
    let mut cx = x.clone();
    let mut cy = y.clone();
    let mut ok = true;
    let mut first_bad = None;
    for n in 1..=n_max {
        cx = apply(w, &cx).expect("binary word");
        cy = apply(w, &cy).expect("binary word");
        let dn = prefix_metric(&cx, &cy).expect("same alphabet");
        if dn > d0 {
            ok = false;
            first_bad = Some((n, dn));
            break;
        }
    }
    report.record(
        format!("lipschitz:w={w}"),
        ok,
        match first_bad {
            None => format!("d0={d0} dominates {n_max} iterates"),
            Some((n, dn)) => format!("d0={d0} exceeded at n={n}: {dn}"),
        },
    );
    report
}
