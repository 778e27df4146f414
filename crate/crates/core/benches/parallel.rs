//! Compares the rayon-backed and sequential lanes on the per-tridegree
//! homology workload that dominates a page step.
//!
//! Run with `cargo bench -p rsss-core` for the parallel lane and
//! `cargo bench -p rsss-core --no-default-features` for the sequential
//! baseline alone; both lanes are always measured side by side through the
//! explicit sequential entry point.

use criterion::{criterion_group, criterion_main, Criterion};

use rsss_core::coeff::{CoeffRing, RingElement};
use rsss_core::graded::{AlgebraElement, AlgebraPresentation, Generator, Monomial};
use rsss_core::linalg::{self, ModuleShape};
use rsss_core::par;
use rsss_core::ss::{init_page, Bounds};

type Block = (Vec<Vec<RingElement>>, Vec<Vec<RingElement>>);

/// Starting page of the rank-three full-torus computation over the
/// integers: many tridegrees, each with a small exact-arithmetic quotient.
fn workload() -> (CoeffRing, Vec<Block>) {
    let z = CoeffRing::Integers;
    let mut pres = AlgebraPresentation::free(
        z.clone(),
        vec![
            Generator::exterior("r2", 0, 3, 2),
            Generator::exterior("r3", 0, 5, 3),
            Generator::polynomial("t1", 1, 1, 1),
            Generator::polynomial("t2", 1, 1, 1),
            Generator::polynomial("t3", 1, 1, 1),
        ],
    );
    let sigma1 = (2..5).fold(AlgebraElement::zero(), |acc, i| {
        pres.add(&acc, &AlgebraElement::term(Monomial::generator(5, i), z.one()))
    });
    pres.relations.push(sigma1);
    let page = init_page(&pres, Bounds::for_rank(3)).unwrap();
    let blocks = page
        .entries
        .values()
        .map(|e| (e.cycles.clone(), e.boundaries.clone()))
        .collect();
    (z, blocks)
}

fn shapes_of(ring: &CoeffRing, blocks: Vec<Block>, parallel: bool) -> Vec<ModuleShape> {
    let f = |(cycles, boundaries): Block| {
        linalg::homology_shape(ring, &cycles, &boundaries).unwrap()
    };
    if parallel {
        par::map_indexed(blocks, f)
    } else {
        par::map_indexed_sequential(blocks, f)
    }
}

fn bench_homology(c: &mut Criterion) {
    let (ring, blocks) = workload();
    // both lanes must agree entry for entry before timing anything
    assert_eq!(
        shapes_of(&ring, blocks.clone(), true),
        shapes_of(&ring, blocks.clone(), false)
    );
    let mut group = c.benchmark_group("page_homology");
    group.bench_function("parallel", |b| {
        b.iter(|| shapes_of(&ring, blocks.clone(), true))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| shapes_of(&ring, blocks.clone(), false))
    });
    group.finish();
}

criterion_group!(benches, bench_homology);
criterion_main!(benches);
