use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use roundelim::bits::BitString;
use roundelim::krawtchouk::{kraw_table, smallest_root, spectrum};
use roundelim::linopt::delsarte_theta_prime;
use roundelim::orthrep::{gk_poly_rep, padded_rep};
use roundelim::protocols::kremer::{eq_two_round_fixture, kremer_compile};
use roundelim::protocols::quantum::{eq_multiround, eq_two_round};
use roundelim::qsim::{exact_grover_params, run_exact_grover};

fn krawtchouk(c: &mut Criterion) {
    let mut g = c.benchmark_group("krawtchouk");
    for n in [16u64, 32, 64] {
        g.bench_with_input(BenchmarkId::new("table", n), &n, |b, &n| b.iter(|| kraw_table(black_box(n))));
        g.bench_with_input(BenchmarkId::new("spectrum", n), &n, |b, &n| b.iter(|| spectrum(black_box(n), n / 4)));
    }
    g.bench_function("smallest_root/1000", |b| b.iter(|| smallest_root(black_box(1000), 250)));
    g.finish();
}

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("delsarte");
    g.sample_size(20);
    for n in [8u64, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| delsarte_theta_prime(black_box(n))));
    }
    g.finish();
}

fn representations(c: &mut Criterion) {
    let mut g = c.benchmark_group("orthrep");
    g.sample_size(20);
    g.bench_function("padded/12/1", |b| b.iter(|| padded_rep(black_box(12), 1)));
    g.bench_function("gk_poly/8", |b| b.iter(|| gk_poly_rep(black_box(8))));
    g.finish();
}

fn quantum(c: &mut Criterion) {
    let mut g = c.benchmark_group("quantum");
    let p = exact_grover_params(32, 3).unwrap();
    let z = BitString::new(32, 0b111).unwrap();
    g.bench_function("grover/32/3", |b| b.iter(|| run_exact_grover(black_box(&z), &p)));

    let x = BitString::zeros(16);
    let y = BitString::from_hex(16, "f").unwrap();
    g.bench_function("eq2/16", |b| b.iter(|| eq_two_round(black_box(&x), &y)));
    let y = BitString::from_hex(16, "3").unwrap();
    g.bench_function("eq_multi/16/2", |b| b.iter(|| eq_multiround(black_box(&x), &y, 2)));

    let fixture = eq_two_round_fixture();
    g.sample_size(20);
    g.bench_function("kremer/eq2", |b| b.iter(|| kremer_compile(black_box(&fixture), None)));
    g.finish();
}

criterion_group!(benches, krawtchouk, lp, representations, quantum);
criterion_main!(benches);
