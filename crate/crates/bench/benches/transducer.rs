use criterion::{black_box, criterion_group, criterion_main, Criterion};

use b4_core::b4::xi;
use b4_core::group::{realize, GroupWord};
use b4_core::mealy::{equivalent, minimize, serial_compose};
use b4_core::orbit::{iterate, verify_lemma56};
use b4_core::words::{Alphabet, UPWord};

fn ones() -> UPWord {
    UPWord::parse("(1)", &Alphabet::binary()).expect("valid word")
}

fn orbit_sweep(c: &mut Criterion) {
    let one = ones();
    c.bench_function("iterate_xi_256", |b| {
        b.iter(|| iterate(black_box(&one), 256))
    });
    c.bench_function("lemma56_n10", |b| b.iter(|| verify_lemma56(black_box(10))));
}

fn machine_towers(c: &mut Criterion) {
    c.bench_function("realize_xi_pow16", |b| {
        b.iter(|| realize(black_box(&xi().repeat(16))))
    });

    let m8 = realize(&xi().repeat(8));
    let m9 = realize(&xi().repeat(9));
    c.bench_function("compose_minimize_step", |b| {
        b.iter(|| minimize(&serial_compose(black_box(&m8), black_box(&m9)).unwrap()))
    });
    c.bench_function("equivalent_xi_powers", |b| {
        b.iter(|| equivalent(black_box(&m8), black_box(&m9)).unwrap())
    });
}

fn group_words(c: &mut Criterion) {
    let w = GroupWord::parse("paqpaqpaqpaq").expect("valid generator word");
    let x = ones();
    c.bench_function("apply_len12_word", |b| {
        b.iter(|| b4_core::group::apply(black_box(&w), black_box(&x)).unwrap())
    });
}

criterion_group!(benches, orbit_sweep, machine_towers, group_words);
criterion_main!(benches);
