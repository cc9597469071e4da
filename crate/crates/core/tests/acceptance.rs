//! End-to-end acceptance checks with pinned runtime budgets.
//!
//! Each check prints one verdict line; run with
//! `cargo test --test acceptance -- --nocapture` to see them on success.
//! Budgets are wall-clock and generous: blowing one means an algorithmic
//! regression, not a noisy neighbor.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use b4_core::b4::{
    b4_initial, b4_machine, eta_power, verify_cor32, verify_lemma31, verify_lemma41, xi, B4State,
};
use b4_core::group::{
    apply, klein_table, realize, verify_lemma52, verify_lemma55, GroupWord,
};
use b4_core::mealy::{
    agree_on_all_words, equivalent, is_sequential_consistent, minimize, serial_compose,
    InitialMachine, MealyMachine,
};
use b4_core::orbit::{
    density_witness, lipschitz_check, orbit_records, transitivity_witness, verify_lemma56,
};
use b4_core::report::Report;
use b4_core::words::{concat, Alphabet, Distance, FiniteWord, UPWord};

fn bin() -> Alphabet {
    Alphabet::binary()
}

fn up(s: &str) -> UPWord {
    UPWord::parse(s, &bin()).unwrap()
}

fn push_failures(fails: &mut Vec<String>, report: Report) {
    for c in report.failures() {
        fails.push(c.to_string());
    }
}

/// Prints the verdict line and enforces both correctness and the budget.
fn finish(idx: u32, name: &str, started: Instant, bound: Duration, fails: Vec<String>) {
    let elapsed = started.elapsed();
    let ok = fails.is_empty() && elapsed <= bound;
    println!(
        "ACCEPT {idx:02} {name}: {} ({} ms, bound {} ms)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_millis(),
        bound.as_millis(),
    );
    assert!(fails.is_empty(), "{name}:\n{}", fails.join("\n"));
    assert!(
        elapsed <= bound,
        "{name}: {elapsed:?} exceeds budget {bound:?}"
    );
}

fn random_up(rng: &mut ChaCha8Rng) -> UPWord {
    let plen = rng.gen_range(0..=6);
    let vlen = rng.gen_range(1..=4);
    let bit = |rng: &mut ChaCha8Rng| if rng.gen::<bool>() { '1' } else { '0' };
    let pre: Vec<char> = (0..plen).map(|_| bit(rng)).collect();
    let per: Vec<char> = (0..vlen).map(|_| bit(rng)).collect();
    UPWord::new(
        FiniteWord::new(pre, &bin()).unwrap(),
        FiniteWord::new(per, &bin()).unwrap(),
    )
    .unwrap()
}

fn random_group_word(rng: &mut ChaCha8Rng, max_len: usize) -> GroupWord {
    let gens = [B4State::P, B4State::Q, B4State::Alpha, B4State::Epsilon];
    let len = rng.gen_range(0..=max_len);
    GroupWord::new((0..len).map(|_| gens[rng.gen_range(0..4)]).collect())
}

/// Total random machine over the binary alphabet, `n` states, start `s0`.
fn random_binary_machine(rng: &mut ChaCha8Rng, n: usize) -> InitialMachine {
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut rows: Vec<(String, char, char, String)> = Vec::new();
    for s in &states {
        for a in ['0', '1'] {
            let out = if rng.gen::<bool>() { '1' } else { '0' };
            let next = states[rng.gen_range(0..n)].clone();
            rows.push((s.clone(), a, out, next));
        }
    }
    let borrowed: Vec<(&str, char, char, &str)> = rows
        .iter()
        .map(|(s, a, b, t)| (s.as_str(), *a, *b, t.as_str()))
        .collect();
    let state_refs: Vec<&str> = states.iter().map(|s| s.as_str()).collect();
    let m = MealyMachine::new("rnd", bin(), bin(), &state_refs, &borrowed).unwrap();
    InitialMachine::new(m, "s0").unwrap()
}

#[test]
fn c01_state_maps_resets_and_parity() {
    let t0 = Instant::now();
    let mut fails = Vec::new();

    for (state, input, want) in [
        (B4State::P, "(1)", "0(1)"),
        (B4State::P, "0(1)", "(1)"),
        (B4State::Q, "0(1)", "00(1)"),
        (B4State::Q, "00(1)", "0(1)"),
    ] {
        let got = b4_initial(state).transduce_up(&up(input)).unwrap();
        if got != up(want) {
            fails.push(format!("{state} on {input}: got {got}, want {want}"));
        }
    }

    let m = b4_machine();
    for (state, word) in [
        (B4State::P, "11"),
        (B4State::Q, "01"),
        (B4State::P, "00"),
        (B4State::P, "10"),
        (B4State::Q, "00"),
        (B4State::P, "01"),
    ] {
        let u = FiniteWord::parse(word, &bin()).unwrap();
        let (end, _) = m.run_finite(state.index(), &u).unwrap();
        if end != B4State::Epsilon.index() {
            fails.push(format!("{state} after {word} misses the identity sink"));
        }
    }

    push_failures(&mut fails, verify_lemma52(12));
    for l in 0..=12 {
        push_failures(&mut fails, verify_cor32(l));
    }

    finish(
        1,
        "state maps, resets, parity, swap identities",
        t0,
        Duration::from_secs(1),
        fails,
    );
}

#[test]
fn c02_morphism_recurrence_and_growth() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    push_failures(&mut fails, verify_lemma31(12));
    finish(
        2,
        "morphism recurrence and word growth",
        t0,
        Duration::from_secs(1),
        fails,
    );
}

#[test]
fn c03_swap_rows_exhaust_and_reset() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    for l in 0..=12 {
        push_failures(&mut fails, verify_lemma41(l));
    }
    finish(
        3,
        "swap identities, prefix exhaustion, row resets",
        t0,
        Duration::from_secs(10),
        fails,
    );
}

#[test]
fn c04_commuting_involution_table() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    push_failures(&mut fails, klein_table());
    finish(
        4,
        "four-element commuting involution table",
        t0,
        Duration::from_secs(1),
        fails,
    );
}

#[test]
fn c05_generator_product_orders() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    push_failures(&mut fails, verify_lemma55());
    finish(
        5,
        "generator product orders",
        t0,
        Duration::from_secs(5),
        fails,
    );
}

#[test]
fn c06_orbit_sweeps_and_basis_table() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    for n in 1..=14 {
        push_failures(&mut fails, verify_lemma56(n));
    }
    let frozen: [(u64, &str, &str); 8] = [
        (1, "001", "(1)"),
        (2, "100", "(1)"),
        (3, "010", "(1)"),
        (4, "110", "0(1)"),
        (5, "000", "0(1)"),
        (6, "101", "0(1)"),
        (7, "011", "0(1)"),
        (8, "111", "00(1)"),
    ];
    let records = orbit_records(&up("(1)"), 8, 3);
    for ((k, u, x), rec) in frozen.iter().zip(&records) {
        if rec.k != *k || rec.prefix.to_string() != *u || rec.tail.to_string() != *x {
            fails.push(format!(
                "record {k}: got ({}, {}), want ({u}, {x})",
                rec.prefix, rec.tail
            ));
        }
    }
    finish(
        6,
        "orbit sweeps n<=14 and the n=3 basis table",
        t0,
        Duration::from_secs(30),
        fails,
    );
}

#[test]
fn c07_power_separation() {
    let t0 = Instant::now();
    let mut fails = Vec::new();

    // The iterated-morphism images nest (each is a prefix of the next), so
    // one fold along the longest word yields every stage as a snapshot.
    let word = GroupWord::from_morph(&eta_power(10));
    let mut stages: Vec<InitialMachine> = Vec::new();
    let mut acc = InitialMachine::identity(bin());
    let mut next_len: usize = 1;
    for (i, &g) in word.gens().iter().enumerate() {
        acc = minimize(&serial_compose(&acc, &b4_initial(g)).unwrap());
        if i + 1 == next_len {
            stages.push(acc.clone());
            next_len = 2 * next_len + 1;
        }
    }
    assert_eq!(stages.len(), 11);
    for i in 0..stages.len() {
        for j in (i + 1)..stages.len() {
            if equivalent(&stages[i], &stages[j]).unwrap() {
                fails.push(format!("morphism images {i} and {j} coincide"));
            }
        }
    }

    let xi_m = realize(&xi());
    let mut powers: Vec<InitialMachine> = vec![xi_m.clone()];
    for _ in 1..64 {
        powers.push(minimize(
            &serial_compose(powers.last().unwrap(), &xi_m).unwrap(),
        ));
    }
    for i in 0..powers.len() {
        for j in (i + 1)..powers.len() {
            if equivalent(&powers[i], &powers[j]).unwrap() {
                fails.push(format!("xi^{} and xi^{} coincide", i + 1, j + 1));
            }
        }
    }

    // Separation of xi^(2^n) from the identity by the image of 1^ω alone.
    let mut cur = up("(1)");
    let mut k: u64 = 0;
    for n in 0..=14u32 {
        let goal: u64 = 1 << n;
        while k < goal {
            cur = apply(&xi(), &cur).unwrap();
            k += 1;
        }
        let mut head: Vec<char> = std::iter::repeat_n('1', n as usize).collect();
        head.extend(['0', '0']);
        let want = concat(&FiniteWord::new(head, &bin()).unwrap(), &up("(1)")).unwrap();
        if cur != want {
            fails.push(format!("1^ω after 2^{n} steps: got {cur}, want {want}"));
        }
    }

    finish(
        7,
        "pairwise separation of morphism images and xi powers",
        t0,
        Duration::from_secs(30),
        fails,
    );
}

#[test]
fn c08_dense_orbits_and_transitivity() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let one = up("(1)");

    // Exhaustive: every length-10 prefix is reached from 1^ω.
    for bits in 0u32..1024 {
        let letters: Vec<char> = (0..10)
            .rev()
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        let target = concat(&FiniteWord::new(letters, &bin()).unwrap(), &one).unwrap();
        let w = density_witness(&one, &target, 10);
        if w.found.is_none() {
            fails.push(format!("no witness for target {target}"));
        } else if !(w.metric < Distance::Dyadic(9)) {
            fails.push(format!("witness for {target} too far: {}", w.metric));
        }
    }

    // Random starts and targets at n = 8.
    let mut rng = ChaCha8Rng::seed_from_u64(0xB4);
    let mut starts = Vec::new();
    while starts.len() < 20 {
        let s = random_up(&mut rng);
        if s != one {
            starts.push(s);
        }
    }
    for i in 0..100 {
        let start = &starts[i % starts.len()];
        let letters: Vec<char> = (0..8)
            .map(|_| if rng.gen::<bool>() { '1' } else { '0' })
            .collect();
        let target = concat(&FiniteWord::new(letters, &bin()).unwrap(), &one).unwrap();
        let w = density_witness(start, &target, 8);
        if w.found.is_none() {
            fails.push(format!("no witness from {start} to {target}"));
        }
    }

    // Transitivity triples.
    for _ in 0..100 {
        let x = random_up(&mut rng);
        let y = random_up(&mut rng);
        let eps_exp = rng.gen_range(1..=8u32);
        let w = transitivity_witness(&x, &y, eps_exp);
        if w.found.is_none() {
            fails.push(format!("no witness from {x} to {y}"));
        } else if !(w.metric < Distance::Dyadic(eps_exp as usize)) {
            fails.push(format!(
                "witness from {x} to {y} too far: {} vs 2^-{eps_exp}",
                w.metric
            ));
        }
    }

    finish(
        8,
        "dense orbits and transitivity witnesses",
        t0,
        Duration::from_secs(60),
        fails,
    );
}

#[test]
fn c09_nonexpansive_and_prefix_preserving() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EC);

    for _ in 0..500 {
        let w = random_group_word(&mut rng, 6);
        let x = random_up(&mut rng);
        let y = random_up(&mut rng);
        push_failures(&mut fails, lipschitz_check(&w, &x, &y, 32));
    }

    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let m = random_binary_machine(&mut rng, n);
        let len = rng.gen_range(0..=32);
        let letters: Vec<char> = (0..len)
            .map(|_| if rng.gen::<bool>() { '1' } else { '0' })
            .collect();
        let word = FiniteWord::new(letters, &bin()).unwrap();
        if !is_sequential_consistent(&m, &word).unwrap() {
            fails.push(format!("prefix preservation fails on {word}"));
        }
    }

    finish(
        9,
        "non-expansiveness and prefix preservation",
        t0,
        Duration::from_secs(30),
        fails,
    );
}

#[test]
fn c10_equivalence_oracle_agreement() {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);

    for i in 0..200 {
        let n1 = rng.gen_range(1..=4);
        let n2 = rng.gen_range(1..=3);
        let m1 = random_binary_machine(&mut rng, n1);
        let m2 = random_binary_machine(&mut rng, n2);
        let fast = equivalent(&m1, &m2).unwrap();
        let slow = agree_on_all_words(&m1, &m2, n1 * n2).unwrap();
        if fast != slow {
            fails.push(format!(
                "pair {i}: refinement says {fast}, bounded words say {slow}"
            ));
        }
        for m in [&m1, &m2] {
            let mm = minimize(m);
            if !equivalent(m, &mm).unwrap() {
                fails.push(format!("pair {i}: minimization changed the map"));
            }
            let mmm = minimize(&mm);
            if mmm.machine().state_count() != mm.machine().state_count()
                || !equivalent(&mm, &mmm).unwrap()
            {
                fails.push(format!("pair {i}: minimization not idempotent"));
            }
        }
    }

    finish(
        10,
        "equivalence agrees with the bounded-word oracle",
        t0,
        Duration::from_secs(30),
        fails,
    );
}
