use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinchain::{
    build_bus, run_schedule, so_membership, BusId, GeneratorRef, PulseSchedule,
    DEFAULT_MEMBERSHIP_TOLERANCE,
};

fn schedule(n: usize, pulses: usize) -> PulseSchedule {
    let members: Vec<GeneratorRef> = [BusId::I, BusId::II]
        .iter()
        .flat_map(|id| build_bus(n, *id).unwrap().members)
        .collect();
    let mut s = PulseSchedule::new(n);
    for k in 0..pulses {
        // deterministic, irrational-looking angles
        s.push(
            members[k * 7 % members.len()],
            PI * ((k as f64) * 0.618_034).fract() - PI / 2.0,
        );
    }
    s
}

fn dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense");
    for n in [2, 3, 5] {
        let s = schedule(n, 20);
        group.bench_with_input(BenchmarkId::new("run_schedule 20 pulses", n), &s, |b, s| {
            b.iter(|| run_schedule(black_box(s)).unwrap())
        });
        let u = run_schedule(&s).unwrap();
        group.bench_with_input(BenchmarkId::new("so_membership", n), &u, |b, u| {
            b.iter(|| so_membership(black_box(u), DEFAULT_MEMBERSHIP_TOLERANCE).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dense);
criterion_main!(benches);
