use criterion::{black_box, criterion_group, criterion_main, Criterion};

use flagforge_core::epcore::EpSet;
use flagforge_core::exactnum::{jordan_chevalley, q, Matrix};
use flagforge_core::finitary::{in_nilradical, in_pminus, Ambient, FinitaryElement};
use flagforge_core::finoracle::{levi_component, linear_nilradical, FdLieAlgebra};
use flagforge_core::genflag::{flag_from_chain, make_taut_couple, TautCouple};
use flagforge_core::pairedspace::{Model, PairedSpaceModel, Side, Subspace};

fn mod3_couple(m: &Model) -> TautCouple {
    let a = Subspace::aligned(m, Side::V, EpSet::residue_class(3, 0));
    let b = a.sum(&Subspace::aligned(m, Side::V, EpSet::residue_class(3, 1))).unwrap();
    let g: Vec<Subspace> = [&a, &b].iter().map(|s| s.perp()).collect();
    let f = flag_from_chain(m, Side::V, vec![a, b]).unwrap();
    make_taut_couple(f, flag_from_chain(m, Side::VStar, g).unwrap()).unwrap()
}

fn element(m: &Model, entries: &[(usize, usize, i64)]) -> FinitaryElement {
    entries.iter().fold(FinitaryElement::zero(m), |x, &(i, j, c)| x.add(&FinitaryElement::elementary(m, i, j, q(c))).unwrap())
}

fn epsets(c: &mut Criterion) {
    let a = EpSet::new(5, 6, [1, 3], [0, 4]).unwrap();
    let b = EpSet::new(2, 4, [0], [1, 2]).unwrap();
    c.bench_function("epset union+intersection", |bn| {
        bn.iter(|| black_box(&a).union(black_box(&b)).intersection(&a.complement()))
    });
}

fn subspaces(c: &mut Criterion) {
    let m = PairedSpaceModel::dense_line();
    let s = Subspace::aligned(&m, Side::V, EpSet::new(0, 3, [], [0, 2]).unwrap());
    c.bench_function("dense_line perp", |bn| bn.iter(|| black_box(&s).perp()));
    c.bench_function("dense_line closure", |bn| bn.iter(|| black_box(&s).closure()));
    let p = s.perp();
    c.bench_function("dense_line truncate 60", |bn| bn.iter(|| black_box(&p).truncate(60)));
}

fn membership(c: &mut Criterion) {
    let m = PairedSpaceModel::plain();
    let t = mod3_couple(&m);
    let x = element(&m, &[(0, 1, 2), (3, 7, -1), (4, 2, 1), (1, 1, 3), (5, 5, -3)]);
    c.bench_function("nilradical membership", |bn| bn.iter(|| in_nilradical(black_box(&x), &t).unwrap()));
    c.bench_function("pminus membership", |bn| bn.iter(|| in_pminus(black_box(&x), &t, Ambient::Gl).unwrap()));
}

fn matrices(c: &mut Criterion) {
    let vals: Vec<i64> = (0..36).map(|i| (i * 7 % 5) - 2).collect();
    let x = Matrix::from_flat(6, &vals.into_iter().map(q).collect::<Vec<_>>());
    c.bench_function("jordan_chevalley 6x6", |bn| bn.iter(|| jordan_chevalley(black_box(&x)).unwrap()));
}

fn algebras(c: &mut Criterion) {
    let b = FdLieAlgebra::borel(5);
    let p = FdLieAlgebra::block_upper(&[2, 2]);
    c.bench_function("linear_nilradical borel5", |bn| bn.iter(|| linear_nilradical(black_box(&b))));
    c.bench_function("levi block_upper 2+2", |bn| bn.iter(|| levi_component(black_box(&p)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = epsets, subspaces, membership, matrices, algebras
}
criterion_main!(benches);
