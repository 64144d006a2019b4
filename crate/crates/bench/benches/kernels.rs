use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use momentflow::basis::project;
use momentflow::closure::es_expansion;
use momentflow::discretization::{assemble_residual, hll_flux, Neighbor};
use momentflow::nmg::restrict_field;
use momentflow::sgs::{local_newton, numerical_jacobian, sgs_sweep};
use momentflow_bench::couette_fixture;

const ORDERS: [usize; 3] = [3, 4, 6];

fn cell_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("cell");
    for order in ORDERS {
        let fx = couette_fixture(order, 32);
        let cells = fx.field.cells();
        let (a, b) = (&cells[4], &cells[20]);
        let dx = fx.field.grid().dx(10);
        g.bench_with_input(BenchmarkId::new("project", order), &order, |bn, _| {
            bn.iter(|| project(black_box(a), b.anchor()))
        });
        g.bench_with_input(BenchmarkId::new("es_expansion", order), &order, |bn, _| {
            bn.iter(|| es_expansion(black_box(a), 2.0 / 3.0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("hll_flux", order), &order, |bn, _| {
            bn.iter(|| hll_flux(black_box(&cells[9]), &cells[10], cells[10].anchor()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("jacobian", order), &order, |bn, _| {
            bn.iter(|| {
                numerical_jacobian(
                    Neighbor::Cell(&cells[9]),
                    black_box(&cells[10]),
                    Neighbor::Cell(&cells[11]),
                    dx,
                    &fx.spec,
                    &fx.newton,
                )
                .unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("local_newton", order), &order, |bn, _| {
            bn.iter(|| {
                local_newton(
                    black_box(&cells[10]),
                    Neighbor::Cell(&cells[9]),
                    Neighbor::Cell(&cells[11]),
                    dx,
                    None,
                    &fx.spec,
                    &fx.newton,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn field_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("field");
    g.sample_size(20);
    for order in ORDERS {
        let fx = couette_fixture(order, 128);
        g.bench_with_input(BenchmarkId::new("residual_n128", order), &order, |bn, _| {
            bn.iter(|| assemble_residual(black_box(&fx.field), &fx.spec, None).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sgs_sweep_n128", order), &order, |bn, _| {
            bn.iter(|| sgs_sweep(black_box(&fx.field), None, &fx.spec, &fx.newton).unwrap())
        });
        let coarse = fx.field.grid().coarsen().unwrap();
        g.bench_with_input(BenchmarkId::new("restrict_n128", order), &order, |bn, _| {
            bn.iter(|| restrict_field(black_box(&fx.field), &coarse).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, cell_kernels, field_kernels);
criterion_main!(benches);
