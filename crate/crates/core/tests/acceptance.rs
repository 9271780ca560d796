//! Acceptance suite. Each criterion prints one PASS or FAIL line with its
//! counts and elapsed time. The process fails when any criterion fails or
//! runs past its time cap. Pass criterion numbers as arguments to run a
//! subset.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagforge_core::epcore::{join_window, EpSeq, EpSet};
use flagforge_core::exactnum::{in_span, intersect_spans, jordan_chevalley, q, span_basis, Matrix, Rational};
use flagforge_core::finitary::{
    in_joint_stabilizer, in_nilradical, in_pminus, in_stabilizer, in_stabilizer_formula, normalizer_test,
    perp_parabolic_member, pminus_battery, Ambient, Coord, FinitaryElement,
};
use flagforge_core::finoracle::{
    battery, cartan_queries, cartan_subalgebra, fitting_null_of, four_block_report, invariant_taut_couple,
    is_ideal, is_splittable, killing_invariants, levi_component, lie_close, linear_nilradical, preserving_subalgebra,
    semisimple_span, solvable_radical, tensor_span, trace_ratio_example, FdLieAlgebra, MatSpace,
};
use flagforge_core::genflag::{flag_from_chain, make_taut_couple, TautCouple};
use flagforge_core::pairedspace::{
    finite_perp, form_image, form_value, same_span_modulo, Model, PairedSpaceModel, Side, Subspace, TruncatedModel,
    Vector,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let all = [
        Criterion { id: 1, name: "stabilizer formula", limit: secs(60), run: c1 },
        Criterion { id: 2, name: "joint stabilizer decomposition", limit: secs(120), run: c2 },
        Criterion { id: 3, name: "sandwich and normalizer", limit: secs(120), run: c3 },
        Criterion { id: 4, name: "traceless parabolic", limit: secs(60), run: c4 },
        Criterion { id: 5, name: "Jordan-Chevalley", limit: secs(60), run: c5 },
        Criterion { id: 6, name: "Levi and radical battery", limit: secs(120), run: c6 },
        Criterion { id: 7, name: "invariant taut couples", limit: secs(180), run: c7 },
        Criterion { id: 8, name: "Cartan conditions", limit: secs(120), run: c8 },
        Criterion { id: 9, name: "truncation coherence", limit: secs(120), run: c9 },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in all.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > c.limit => Err(format!("{d}; over the {}s limit", c.limit.as_secs())),
            r => r,
        };
        match result {
            Ok(d) => println!("PASS criterion {}: {} ({d}; {:.2}s)", c.id, c.name, took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {} ({e}; {:.2}s)", c.id, c.name, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn rint(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    q(rng.gen_range(lo..=hi))
}

fn sparse_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| if rng.gen_bool(0.5) { q(0) } else { rint(rng, -2, 2) }).collect()
}

fn sparse_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Matrix {
    let mut x = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                x[(i, j)] = rint(rng, -3, 3);
            }
        }
    }
    x
}

fn coeffs(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    (0..k).map(|_| rint(rng, -3, 3)).collect()
}

/// Product of random integer row operations; determinant one.
fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut p = Matrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rint(rng, -2, 2);
        for col in 0..n {
            let v = &c * &p[(j, col)];
            p[(i, col)] += v;
        }
    }
    p
}

fn conjugate(p: &Matrix, x: &Matrix) -> Matrix {
    let pinv = p.inverse().expect("unimodular");
    &(p * x) * &pinv
}

fn to_element(m: &Model, x: &Matrix) -> FinitaryElement {
    let n = x.rows();
    FinitaryElement::from_entries(
        m,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !x[(i, j)].is_zero())
            .map(|(i, j)| ((Coord::Basis(i), Coord::Basis(j)), x[(i, j)].clone())),
    )
}

fn span_of(m: &Model, side: Side, n: usize, basis: &[Vec<Rational>]) -> Subspace {
    Subspace::span(m, side, basis.iter().map(|v| Vector::from_dense(side, n, v)).collect()).expect("same side")
}

/// Strictly increasing chain of nonzero proper subspaces of `Q^n`.
fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Vec<Rational>>> {
    let len = rng.gen_range(1..=3);
    let gens: Vec<Vec<Rational>> = (0..n).map(|_| sparse_vec(rng, n)).collect();
    let mut cuts: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=n)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut out: Vec<Vec<Vec<Rational>>> = Vec::new();
    for c in cuts {
        let b = span_basis(&gens[..c], n);
        if b.is_empty() || b.len() == n || out.last().is_some_and(|l| l.len() == b.len()) {
            continue;
        }
        out.push(b);
    }
    out
}

fn c1() -> Outcome {
    let m = PairedSpaceModel::plain();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut probes = 0;
    let mut dims = 0;
    for trial in 0..200 {
        let n = rng.gen_range(1..=8);
        let chain = random_chain(&mut rng, n);
        let subs = chain.iter().map(|b| span_of(&m, Side::V, n, b)).collect();
        let f = flag_from_chain(&m, Side::V, subs).map_err(err)?;
        let members: Vec<_> = f.chain().iter().map(|s| s.truncate(n)).collect();
        let brute = preserving_subalgebra(n, &members, &[]);
        let terms: Vec<_> = (0..f.n_pairs()).map(|a| (f.succ(a).truncate(n), f.pred(a).perp().truncate(n))).collect();
        let formula = tensor_span(n, &terms);
        ensure!(
            brute.space() == &formula,
            "flag {trial} in Q^{n}: brute force dim {} formula dim {}",
            brute.dim(),
            formula.dim()
        );
        dims += formula.dim();
        for k in 0..6 {
            let x = if k % 2 == 0 {
                let c = coeffs(&mut rng, brute.dim());
                brute.element(&c)
            } else {
                sparse_matrix(&mut rng, n, 0.3)
            };
            let inside = brute.contains(&x);
            let fx = to_element(&m, &x);
            ensure!(
                in_stabilizer(&fx, &f).map_err(err)? == inside && in_stabilizer_formula(&fx, &f).map_err(err)? == inside,
                "flag {trial}: membership of {x:?} disagrees with the finite stabilizer"
            );
            probes += 1;
        }
    }
    Ok(format!("200 flags, total stabilizer dim {dims}, {probes} membership probes"))
}

/// One summand for a random chain in the plain model: an aligned set or
/// the span of a finitely supported vector.
fn plain_piece(rng: &mut ChaCha8Rng, m: &Model, period3: bool) -> Subspace {
    let choices = if period3 { 7 } else { 6 };
    let set = match rng.gen_range(0..choices) {
        0 => EpSet::finite([rng.gen_range(0..5)]),
        1 => EpSet::finite([rng.gen_range(0..3), rng.gen_range(3..6)]),
        2 => EpSet::residue_class(2, rng.gen_range(0..2)),
        3 => EpSet::at_least(rng.gen_range(1..5)),
        4 => EpSet::below(rng.gen_range(1..4)),
        6 => EpSet::residue_class(3, rng.gen_range(0..3)),
        _ => {
            let mut v = sparse_vec(rng, 5);
            if v.iter().all(Zero::is_zero) {
                v[rng.gen_range(0..5)] = q(1);
            }
            return span_of(m, Side::V, 5, &[v]);
        }
    };
    Subspace::aligned(m, Side::V, set)
}

fn random_plain_chain(rng: &mut ChaCha8Rng, m: &Model, period3: bool) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    let mut cur = Subspace::zero(m, Side::V);
    for _ in 0..rng.gen_range(1..=3) {
        let next = cur.sum(&plain_piece(rng, m, period3)).expect("same model");
        if next.same_as(&cur).expect("same model") || next.is_full() {
            continue;
        }
        out.push(next.clone());
        cur = next;
    }
    out
}

/// Couple of a chain in `V` with the chain of annihilators, plus `extra`
/// members of `V*`.
fn perp_couple(m: &Model, chain: Vec<Subspace>, extra: Vec<Subspace>) -> Result<TautCouple, String> {
    let mut g: Vec<Subspace> = chain.iter().map(Subspace::perp).filter(|p| !p.is_zero() && !p.is_full()).collect();
    g.extend(extra);
    let f = flag_from_chain(m, Side::V, chain).map_err(err)?;
    let g = flag_from_chain(m, Side::VStar, g).map_err(err)?;
    make_taut_couple(f, g).map_err(err)
}

fn couple_window(t: &TautCouple) -> (usize, usize) {
    t.f().chain().iter().chain(t.g().chain()).fold(t.f().model().window(), |w, s| join_window(w, s.window()))
}

fn check_decomposition(t: &TautCouple, n: usize) -> Result<(), String> {
    let tr = |s: &Subspace| s.truncate(n);
    let (f, g) = (t.f(), t.g());
    let fm: Vec<_> = f.chain().iter().map(tr).collect();
    let gm: Vec<_> = g.chain().iter().map(tr).collect();
    let p = preserving_subalgebra(n, &fm, &gm);
    let joint = tensor_span(n, &t.joint_terms().iter().map(|(a, b)| (tr(a), tr(b))).collect::<Vec<_>>());
    ensure!(p.space() == &joint, "joint stabilizer dim {} but the formula gives {}", p.dim(), joint.dim());
    let formula = tensor_span(n, &t.nil_terms().iter().map(|(a, b)| (tr(a), tr(b))).collect::<Vec<_>>());
    let oracle = linear_nilradical(&p);
    ensure!(oracle.space() == &formula, "nilradical dim {} but the formula gives {}", oracle.dim(), formula.dim());
    let mut blocks = 0;
    for (k, &(a, b)) in t.c_pairs().iter().enumerate() {
        let df = f.succ(a).truncated_dim(n) - f.pred(a).truncated_dim(n);
        let dg = g.succ(b).truncated_dim(n) - g.pred(b).truncated_dim(n);
        if let (Some(x), Some(y)) = t.c_dims()[k] {
            ensure!(x == df && y == dg, "block {k} has dims ({x}, {y}) but truncates to ({df}, {dg})");
        }
        blocks += df * dg;
    }
    ensure!(
        p.dim() == oracle.dim() + blocks,
        "dim p = {} but dim n_p = {} and the blocks give {blocks}",
        p.dim(),
        oracle.dim()
    );
    Ok(())
}

fn c2() -> Outcome {
    let m = PairedSpaceModel::plain();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut done, mut attempts, mut levels) = (0, 0, 0);
    let mut infinite = 0;
    while done < 50 {
        attempts += 1;
        ensure!(attempts < 5000, "only {done} couples after {attempts} attempts");
        let chain = random_plain_chain(&mut rng, &m, false);
        let Ok(t) = perp_couple(&m, chain, vec![]) else { continue };
        let (w, p) = couple_window(&t);
        let ns: Vec<usize> = (1..=3).map(|k| w + k * p).filter(|&n| n <= 8).collect();
        if ns.is_empty() {
            continue;
        }
        for &n in &ns {
            check_decomposition(&t, n).map_err(|e| format!("couple {done} at level {n}: {e}"))?;
            levels += 1;
        }
        if (0..t.c_pairs().len()).any(|k| t.is_infinite_block(k)) {
            infinite += 1;
        }
        done += 1;
    }
    Ok(format!("50 couples ({infinite} with an infinite block), {levels} truncation levels"))
}

fn generators(s: &Subspace, bound: usize) -> Vec<Vector> {
    s.window_generators(bound).into_iter().filter(|v| v.support_bound() <= bound).collect()
}

fn rank_ones(m: &Model, a: &Subspace, b: &Subspace, bound: usize) -> Result<Vec<FinitaryElement>, String> {
    let ws = generators(b, bound);
    let mut out = Vec::new();
    for u in generators(a, bound) {
        for w in &ws {
            out.push(FinitaryElement::rank_one(m, &u, w).map_err(err)?);
        }
    }
    Ok(out)
}

fn combo(rng: &mut ChaCha8Rng, m: &Model, pool: &[FinitaryElement]) -> FinitaryElement {
    let mut x = FinitaryElement::zero(m);
    for _ in 0..rng.gen_range(1..=4) {
        if let Some(y) = pool.choose(rng) {
            x = x.axpy(&rint(rng, -3, 3), y).expect("same model");
        }
    }
    x
}

#[derive(Default)]
struct SandwichStats {
    elements: usize,
    nil: usize,
    pminus: usize,
    joint: usize,
    lower: usize,
}

fn sandwich(t: &TautCouple, rng: &mut ChaCha8Rng, count: usize, stats: &mut SandwichStats) -> Result<(), String> {
    let m = t.f().model().clone();
    let (w, p) = couple_window(t);
    let bound = (w + p).clamp(3, 8);
    let mut nil = Vec::new();
    for (a, b) in t.nil_terms() {
        nil.extend(rank_ones(&m, &a, &b, bound)?);
    }
    let mut joint = Vec::new();
    for (a, b) in t.joint_terms() {
        joint.extend(rank_ones(&m, &a, &b, bound)?);
    }
    let pminus = pminus_battery(t, bound, Ambient::Gl).map_err(err)?;
    let coords = |side: Side| {
        (0..m.n_augs(side)).map(Coord::Aug).chain((0..bound).map(Coord::Basis)).collect::<Vec<_>>()
    };
    let (cv, cw) = (coords(Side::V), coords(Side::VStar));
    let free: Vec<FinitaryElement> = cv
        .iter()
        .flat_map(|&a| cw.iter().map(move |&b| (a, b)))
        .map(|(a, b)| FinitaryElement::from_entries(&m, [((a, b), q(1))]))
        .collect();
    for i in 0..count {
        let x = match i % 4 {
            0 => combo(rng, &m, &nil),
            1 => combo(rng, &m, &pminus),
            2 => combo(rng, &m, &joint),
            _ => {
                let y = combo(rng, &m, &joint);
                if rng.gen_bool(0.5) {
                    y.add(&combo(rng, &m, &free)).map_err(err)?
                } else {
                    y
                }
            }
        };
        let n = in_nilradical(&x, t).map_err(err)?;
        let pm = in_pminus(&x, t, Ambient::Gl).map_err(err)?;
        let j = in_joint_stabilizer(&x, t).map_err(err)?;
        let pp = perp_parabolic_member(&x, t).map_err(err)?;
        ensure!(!n || pm, "{x:?} is in the nilradical but not in p_-");
        ensure!(!pm || j, "{x:?} is in p_- but not in p_+");
        ensure!(!j || pp, "{x:?} is in p_+ but not in p'");
        ensure!(
            match i % 4 {
                0 => n,
                1 => pm,
                2 => j,
                _ => true,
            },
            "generated element {x:?} misses its own class"
        );
        stats.elements += 1;
        stats.nil += n as usize;
        stats.pminus += pm as usize;
        stats.joint += j as usize;
    }
    let (f, g) = (t.f(), t.g());
    for a in 0..f.n_pairs() {
        for b in 0..g.n_pairs() {
            if t.le(a, b) {
                continue;
            }
            let us: Vec<Vector> =
                generators(f.succ(a), bound).into_iter().filter(|u| !f.pred(a).member(u).unwrap()).take(2).collect();
            let ws: Vec<Vector> =
                generators(g.succ(b), bound).into_iter().filter(|w| !g.pred(b).member(w).unwrap()).take(2).collect();
            for u in &us {
                for w in &ws {
                    let y = combo(rng, &m, &joint);
                    let x = y.add(&FinitaryElement::rank_one(&m, u, w).map_err(err)?).map_err(err)?;
                    ensure!(!normalizer_test(&x, t).map_err(err)?, "{x:?} has a term outside the order");
                    stats.lower += 1;
                }
            }
        }
    }
    Ok(())
}

/// Couple whose `G` adds the kernel of the coefficient sum on one infinite
/// member of the perp chain.
fn with_sum_kernel(m: &Model, chain: Vec<Subspace>, rng: &mut ChaCha8Rng) -> Option<TautCouple> {
    let perps: Vec<Subspace> = chain
        .iter()
        .map(Subspace::perp)
        .filter(|p| !p.aligned_set().is_finite() && p.corrections().is_empty() && p.is_unconditioned())
        .collect();
    let p = perps.choose(rng)?;
    let k = Subspace::new(m, Side::VStar, p.aligned_set().clone(), vec![EpSeq::indicator(p.aligned_set())], vec![])
        .ok()?;
    perp_couple(m, chain, vec![k]).ok()
}

fn c3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut stats = SandwichStats::default();

    let d = PairedSpaceModel::dense_line();
    let naturals = Subspace::aligned(&d, Side::V, EpSet::naturals());
    let head = Subspace::aligned(&d, Side::V, EpSet::below(2));
    let witness = perp_couple(&d, vec![naturals.clone()], vec![])?;
    let x = FinitaryElement::rank_one(&d, &Vector::aug_unit(Side::V, 0, 1), &Vector::basis_unit(Side::VStar, 0, 0))
        .map_err(err)?;
    ensure!(
        perp_parabolic_member(&x, &witness).map_err(err)? && !in_joint_stabilizer(&x, &witness).map_err(err)?,
        "the augmentation witness does not separate p_+ from p'"
    );
    for t in [witness, perp_couple(&d, vec![head, naturals], vec![])?] {
        sandwich(&t, &mut rng, 500, &mut stats)?;
    }

    let m = PairedSpaceModel::plain();
    let (mut plain, mut with_kernel, mut attempts) = (0, 0, 0);
    while plain < 20 {
        attempts += 1;
        ensure!(attempts < 5000, "only {plain} plain couples after {attempts} attempts");
        let chain = random_plain_chain(&mut rng, &m, true);
        let t = if plain % 3 == 2 {
            match with_sum_kernel(&m, chain, &mut rng) {
                Some(t) => {
                    with_kernel += 1;
                    t
                }
                None => continue,
            }
        } else {
            match perp_couple(&m, chain, vec![]) {
                Ok(t) => t,
                Err(_) => continue,
            }
        };
        if t.f().n_pairs() < 2 && t.g().n_pairs() < 2 {
            continue;
        }
        sandwich(&t, &mut rng, 500, &mut stats).map_err(|e| format!("plain couple {plain}: {e}"))?;
        plain += 1;
    }
    ensure!(stats.lower > 0, "no element with a term outside the order was generated");
    Ok(format!(
        "2 augmented + 20 plain couples ({with_kernel} with a non-closed member), {} elements: {} nil, {} p_-, {} p_+; {} out-of-order elements rejected; p_+ < p' witnessed",
        stats.elements, stats.nil, stats.pminus, stats.joint, stats.lower
    ))
}

fn c4() -> Outcome {
    let m = PairedSpaceModel::plain();
    let t = make_taut_couple(
        flag_from_chain(&m, Side::V, vec![]).map_err(err)?,
        flag_from_chain(&m, Side::VStar, vec![]).map_err(err)?,
    )
    .map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..1000 {
        let n = rng.gen_range(1..=6);
        let mut x = FinitaryElement::zero(&m);
        for _ in 0..rng.gen_range(1..=5) {
            let e = FinitaryElement::elementary(&m, rng.gen_range(0..n), rng.gen_range(0..n), rint(&mut rng, -3, 3));
            x = x.add(&e).map_err(err)?;
        }
        if i % 2 == 0 {
            let k = rng.gen_range(0..n);
            x = x.add(&FinitaryElement::elementary(&m, k, k, -x.trace())).map_err(err)?;
        }
        let traceless = x.trace().is_zero();
        ensure!(in_pminus(&x, &t, Ambient::Gl).map_err(err)? == traceless, "{x:?} with trace {}", x.trace());
        if traceless {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    ensure!(accepted > 0 && rejected > 0, "degenerate sample");
    Ok(format!("1000 elements: {accepted} traceless accepted, {rejected} with trace rejected"))
}

fn companion(p: &[i64]) -> Matrix {
    let n = p.len();
    let mut c = Matrix::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = q(1);
    }
    for (i, &a) in p.iter().enumerate() {
        c[(i, n - 1)] = q(-a);
    }
    c
}

fn jordan_block(n: usize, lambda: i64) -> Matrix {
    let mut j = Matrix::identity(n).scale(&q(lambda));
    for i in 0..n.saturating_sub(1) {
        j[(i, i + 1)] = q(1);
    }
    j
}

fn random_jc_input(rng: &mut ChaCha8Rng, kind: usize) -> Matrix {
    match kind {
        0 => {
            let n = rng.gen_range(1..=6);
            sparse_matrix(rng, n, 0.6)
        }
        1 => {
            let mut x = Matrix::zeros(0, 0);
            let total = rng.gen_range(1..=6);
            while x.rows() < total {
                let size = rng.gen_range(1..=total - x.rows());
                x = x.direct_sum(&jordan_block(size, rng.gen_range(-2..=2)));
            }
            let p = unimodular(rng, x.rows());
            conjugate(&p, &x)
        }
        _ => {
            // Irreducible quadratics squared: non-split and not semisimple.
            let quads: [&[i64]; 3] = [&[1, 0, 2, 0, 1], &[4, 0, -4, 0, 1], &[1, 2, 3, 2, 1]];
            let mut x = companion(quads[rng.gen_range(0..3)]);
            if rng.gen_bool(0.5) {
                x = x.direct_sum(&jordan_block(rng.gen_range(1..=2), rng.gen_range(-1..=1)));
            }
            let p = unimodular(rng, x.rows());
            conjugate(&p, &x)
        }
    }
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nontrivial = 0;
    for i in 0..500 {
        let x = random_jc_input(&mut rng, i % 3);
        let jc = jordan_chevalley(&x).map_err(err)?;
        ensure!(&jc.ss + &jc.nil == x, "parts do not add up for {x:?}");
        ensure!(&jc.ss * &jc.nil == &jc.nil * &jc.ss, "parts do not commute for {x:?}");
        ensure!(jc.nil.is_nilpotent(), "nilpotent part of {x:?} is not nilpotent");
        ensure!(jc.ss.minpoly().map_err(err)?.is_squarefree(), "semisimple part of {x:?} has a repeated factor");
        ensure!(jc.poly.eval_matrix(&x) == jc.ss, "semisimple part of {x:?} is not the stated polynomial in it");
        if !jc.nil.is_zero() {
            nontrivial += 1;
        }
    }
    Ok(format!("500 matrices, {nontrivial} with a nonzero nilpotent part"))
}

fn c6() -> Outcome {
    let algebras = battery();
    ensure!(algebras.len() == 30, "battery has {} algebras", algebras.len());
    for (name, g) in &algebras {
        let r = solvable_radical(g);
        let l = levi_component(g).map_err(|e| format!("{name}: {e}"))?;
        let d = g.derived();
        let rd = r.intersection(d.space());
        ensure!(r.is_solvable() && is_ideal(g, r.space()), "{name}: radical is not a solvable ideal");
        ensure!(d.contains_space(l.space()), "{name}: Levi component leaves [g,g]");
        ensure!(l.intersection(&r).is_zero(), "{name}: Levi component meets the radical");
        ensure!(rd.sum(l.space()).dim() == d.dim(), "{name}: Levi component does not complement r in [g,g]");
        ensure!(l.killing().rank() == l.dim(), "{name}: Levi component is not semisimple");
        let n = linear_nilradical(g);
        ensure!(r.contains_space(n.space()) && is_ideal(g, n.space()), "{name}: nilradical is not an ideal in r");
        ensure!(n.basis().iter().all(Matrix::is_nilpotent), "{name}: nilradical has a non-nilpotent element");
        ensure!(n.intersection(d.space()) == rd, "{name}: n and r meet [g,g] differently");
        ensure!((d == *g && r.is_zero()) == (l == *g), "{name}: semisimplicity and Levi disagree");
    }
    let tr = levi_component(&trace_ratio_example()).map_err(err)?;
    ensure!(killing_invariants(&tr) == (6, 6), "trace-ratio Levi component is {:?}", killing_invariants(&tr));
    let mut gaps = Vec::new();
    for k in [1, 2] {
        let rep = four_block_report(k);
        let p = rep.dim_summand_parabolic;
        ensure!(rep.gap() > 0, "four-block example for k = {k} splits: {rep:?}");
        ensure!(rep.dim_proj1 == p && rep.dim_proj2 == p && rep.dim_p == 2 * p - 1, "four-block k = {k}: {rep:?}");
        gaps.push(rep.gap());
    }
    Ok(format!("30 algebras; four-block example fails to split with gaps {gaps:?}"))
}

fn random_subalgebra(rng: &mut ChaCha8Rng) -> FdLieAlgebra {
    let n = rng.gen_range(2..=6);
    let mut block = Vec::with_capacity(n);
    let mut b = 0;
    for i in 0..n {
        if i > 0 && rng.gen_bool(0.5) {
            b += 1;
        }
        block.push(b);
    }
    let p = unimodular(rng, n);
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut x = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if block[i] <= block[j] && rng.gen_bool(0.35) {
                    x[(i, j)] = rint(rng, -2, 2);
                }
            }
        }
        gens.push(conjugate(&p, &x));
    }
    lie_close(n, &gens)
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut retries, mut total_len) = (0, 0);
    for i in 0..50 {
        let k = random_subalgebra(&mut rng);
        let mut found = None;
        for seed in 0..6u64 {
            match invariant_taut_couple(&k, 100 * i + seed) {
                Ok(c) => {
                    found = Some(c);
                    break;
                }
                Err(_) => retries += 1,
            }
        }
        let c = found.ok_or_else(|| format!("algebra {i} (dim {}): no couple after retries", k.dim()))?;
        ensure!(c.quotients_irreducible, "algebra {i}: a composition factor is reducible");
        ensure!(c.nilradical_match, "algebra {i}: n_k differs from n_p ∩ k");
        ensure!(c.flag.stabilizer().contains_space(k.space()), "algebra {i}: flag is not stable");
        total_len += c.flag.chain.len();
    }
    Ok(format!("50 subalgebras, {total_len} flag members in total, {retries} seed retries"))
}

fn splittable_suite() -> Vec<(String, FdLieAlgebra)> {
    let mut out: Vec<(String, FdLieAlgebra)> =
        battery().into_iter().filter(|(_, g)| g.dim() <= 12 && is_splittable(g)).collect();
    let ds = FdLieAlgebra::direct_sum;
    let so3 = battery().into_iter().find(|(n, _)| n == "so3").expect("so3").1;
    let d = |v: &[i64]| {
        let mut x = Matrix::zeros(v.len(), v.len());
        for (i, &c) in v.iter().enumerate() {
            x[(i, i)] = q(c);
        }
        x
    };
    let extras = [
        ("b2+gl1", ds(&FdLieAlgebra::borel(2), &FdLieAlgebra::gl(1))),
        ("so3+gl1", ds(&so3, &FdLieAlgebra::gl(1))),
        ("sl2+b2", ds(&FdLieAlgebra::sl(2), &FdLieAlgebra::borel(2))),
        ("diag4", FdLieAlgebra::diagonal(4)),
        ("toral_line", lie_close(3, &[d(&[1, 2, 3])])),
        ("toral_root", lie_close(3, &[d(&[1, 2, 3]), Matrix::unit(3, 0, 2)])),
        ("two_nil", lie_close(4, &[Matrix::unit(4, 0, 1), Matrix::unit(4, 2, 3)])),
        ("sl2+sl2", ds(&FdLieAlgebra::sl(2), &FdLieAlgebra::sl(2))),
        ("so3+so3", ds(&so3, &so3)),
        ("split_line", lie_close(2, &[Matrix::from_i64(&[&[1, 1], &[0, 2]])])),
    ];
    for (name, g) in extras {
        if out.len() == 30 {
            break;
        }
        out.push((name.to_string(), g));
    }
    out
}

fn c8() -> Outcome {
    let suite = splittable_suite();
    ensure!(suite.len() == 30, "only {} splittable algebras", suite.len());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut pos, mut neg) = (0, 0);
    for (name, k) in &suite {
        ensure!(is_splittable(k) && k.dim() <= 12, "{name} is outside the suite bounds");
        let h = cartan_subalgebra(k, 7).map_err(|e| format!("{name}: {e}"))?;
        let c = coeffs(&mut rng, k.dim());
        let mut candidates: Vec<(&str, MatSpace)> = vec![
            ("cartan", h.space().clone()),
            ("zero", MatSpace::zero(k.n())),
            ("whole", k.space().clone()),
            ("center", k.centralizer(&k.basis()).space().clone()),
            ("nilradical", linear_nilradical(k).space().clone()),
            ("toral part", semisimple_span(h.space())),
            ("fitting null", fitting_null_of(k, &k.element(&c)).space().clone()),
        ];
        if let Some(x) = h.basis().first() {
            candidates.push(("line", MatSpace::span(k.n(), std::slice::from_ref(x))));
        }
        for (label, s) in &candidates {
            let rep = cartan_queries(k, s).map_err(|e| format!("{name} {label}: {e}"))?;
            ensure!(rep.routes_agree(), "{name} {label}: {rep:?}");
            if rep.d {
                ensure!(rep.self_normalizing && rep.nilpotent, "{name} {label}: {rep:?}");
                pos += 1;
            } else {
                ensure!(*label != "cartan", "{name}: computed Cartan subalgebra rejected: {rep:?}");
                neg += 1;
            }
        }
    }
    Ok(format!("30 algebras, {pos} positive and {neg} negative candidates, all three routes agree"))
}

fn corpus(m: &Model, side: Side) -> Vec<Subspace> {
    let naug = m.n_augs(side);
    let al = |s: EpSet| Subspace::aligned(m, side, s);
    let vec = |b: &[(usize, i64)], a: i64| {
        Vector::from_parts(
            side,
            b.iter().map(|&(i, c)| (i, q(c))),
            (0..naug).map(|k| if k == 0 { q(a) } else { q(0) }).collect(),
        )
    };
    let with = |s: EpSet, vs: Vec<Vector>| Subspace::new(m, side, s, vec![], vs).expect("valid corrections");
    let mut out = vec![
        al(EpSet::naturals()),
        al(EpSet::residue_class(2, 0)),
        al(EpSet::residue_class(2, 1)),
        al(EpSet::at_least(2)),
        al(EpSet::below(3)),
        al(EpSet::finite([1, 4])),
        al(EpSet::residue_class(3, 1)),
        with(EpSet::residue_class(2, 0), vec![vec(&[(1, 1), (3, -1)], 0)]),
        with(EpSet::finite([0]), vec![vec(&[(2, 1), (5, 2)], 0)]),
    ];
    if naug > 0 {
        out.push(with(EpSet::residue_class(2, 1), vec![vec(&[(0, 1)], 1)]));
        out.push(with(EpSet::empty(), vec![vec(&[(1, 1)], 1)]));
    }
    out.push(Subspace::new(m, side, EpSet::naturals(), vec![EpSeq::indicator(&EpSet::naturals())], vec![]).unwrap());
    out.push(
        Subspace::new(m, side, EpSet::at_least(1), vec![EpSeq::indicator(&EpSet::residue_class(2, 0))], vec![])
            .unwrap(),
    );
    out
}

fn levels(m: &Model, subs: &[&Subspace]) -> Vec<usize> {
    let (n, p) = subs.iter().fold(m.window(), |w, s| join_window(w, s.window()));
    vec![n + p, n + 2 * p, n + 3 * p]
}

#[derive(Default)]
struct Coherence {
    sum: usize,
    intersection: usize,
    perp: usize,
    closure: usize,
    member: usize,
    form: usize,
}

fn coherence_model(m: &Model, rng: &mut ChaCha8Rng, stats: &mut Coherence) -> Result<(), String> {
    for side in [Side::V, Side::VStar] {
        let mut subs = corpus(m, side);
        subs.extend(corpus(m, side.dual()).iter().map(Subspace::perp));
        let naug = m.n_augs(side);
        for (i, a) in subs.iter().enumerate() {
            for b in &subs[i..] {
                let s = a.sum(b).map_err(err)?;
                let x = a.intersection(b).map_err(err)?;
                for n in levels(m, &[a, b, &s, &x]) {
                    let dim = n + naug;
                    let (ta, tb) = (a.truncate(n), b.truncate(n));
                    let mut both = ta.clone();
                    both.extend(tb.iter().cloned());
                    ensure!(same_span_modulo(&s.truncate(n), &both, &[], dim), "sum of {a:?} and {b:?} at {n}");
                    ensure!(
                        same_span_modulo(&x.truncate(n), &intersect_spans(&ta, &tb, dim), &[], dim),
                        "intersection of {a:?} and {b:?} at {n}"
                    );
                    stats.sum += 1;
                    stats.intersection += 1;
                }
            }
            let p = a.perp();
            let c = a.closure();
            for n in levels(m, &[a, &p, &c]) {
                let t = TruncatedModel::new(m, n);
                let dim = n + naug;
                let ta = a.truncate(n);
                for _ in 0..4 {
                    let v: Vec<Rational> = (0..dim).map(|_| rint(rng, -1, 1)).collect();
                    let w: Vec<Rational> = ta.iter().fold(vec![q(0); dim], |acc, b| {
                        let c = rint(rng, -2, 2);
                        acc.iter().zip(b).map(|(x, y)| x + &c * y).collect()
                    });
                    for u in [v, w] {
                        let inside = a.member(&Vector::from_dense(side, n, &u)).map_err(err)?;
                        ensure!(inside == in_span(&ta, &u), "membership of {u:?} in {a:?} at {n}");
                        stats.member += 1;
                    }
                }
                if !a.is_unconditioned() {
                    continue;
                }
                let fp = finite_perp(&t, side, &ta);
                let odim = t.dim(side.dual());
                let rad = t.radical(side.dual());
                ensure!(same_span_modulo(&p.truncate(n), &fp, rad, odim), "perp of {a:?} at {n}");
                stats.perp += 1;
                if p.is_unconditioned() {
                    let fc = finite_perp(&t, side.dual(), &fp);
                    ensure!(same_span_modulo(&c.truncate(n), &fc, t.radical(side), dim), "closure of {a:?} at {n}");
                    stats.closure += 1;
                }
            }
            if m.form().is_some() && side == Side::V {
                form_checks(m, a, stats)?;
            }
        }
    }
    Ok(())
}

/// `J(a)` and, for unconditioned `a`, its form annihilator against their
/// finite versions at even levels, where the pairing involution keeps
/// `[0, n)` fixed.
fn form_checks(m: &Model, a: &Subspace, stats: &mut Coherence) -> Result<(), String> {
    let img = a.form_image().map_err(err)?;
    let fperp = a.form_perp().map_err(err)?;
    for n in levels(m, &[a, &img, &fperp]) {
        let n = n + n % 2;
        let ta = a.truncate(n);
        let mapped: Vec<Vec<Rational>> = ta
            .iter()
            .map(|v| form_image(m, &Vector::from_dense(Side::V, n, v)).map(|w| w.to_dense(n)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        ensure!(same_span_modulo(&img.truncate(n), &mapped, &[], n), "form image of {a:?} at {n}");
        let units: Vec<Vector> = (0..n).map(|i| Vector::basis_unit(Side::V, i, 0)).collect();
        let gram = Matrix::from_rows(
            n,
            units
                .iter()
                .map(|x| units.iter().map(|y| form_value(m, x, y)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?,
        );
        stats.form += 1;
        if !a.is_unconditioned() {
            continue;
        }
        let fp = if ta.is_empty() {
            Matrix::identity(n).to_rows()
        } else {
            (&Matrix::from_rows(n, ta.clone()) * &gram).kernel()
        };
        ensure!(same_span_modulo(&fperp.truncate(n), &fp, &[], n), "form perp of {a:?} at {n}");
        stats.form += 1;
    }
    Ok(())
}

fn c9() -> Outcome {
    let w_sum = PairedSpaceModel::new(vec![], vec![EpSeq::constant(q(1))], vec![], None).map_err(err)?;
    let models: Vec<(&str, Model)> = vec![
        ("plain", PairedSpaceModel::plain()),
        ("dense_line", PairedSpaceModel::dense_line()),
        ("dual_line", std::sync::Arc::new(w_sum)),
        ("split_symmetric", PairedSpaceModel::split_symmetric()),
        ("split_symplectic", PairedSpaceModel::split_symplectic()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut stats = Coherence::default();
    for (name, m) in &models {
        coherence_model(m, &mut rng, &mut stats).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{} models; level checks: {} sums, {} intersections, {} perps, {} closures, {} memberships, {} form ops",
        models.len(),
        stats.sum,
        stats.intersection,
        stats.perp,
        stats.closure,
        stats.member,
        stats.form
    ))
}
