use std::sync::OnceLock;

use proptest::prelude::*;

use paleyvec::forms::Form;
use paleyvec::graph::{GraphGU, SolverOptions};
use paleyvec::{Elem, FieldCtx, FqMatrix, Subspace};

const FIELDS: [(u32, u32, u32); 7] = [
    (2, 1, 4),
    (3, 1, 3),
    (2, 2, 3),
    (5, 1, 2),
    (3, 2, 2),
    (7, 1, 2),
    (2, 1, 6),
];

fn fields() -> &'static [FieldCtx] {
    static F: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    F.get_or_init(|| {
        FIELDS
            .iter()
            .map(|&(p, m, n)| FieldCtx::new(p, m, n).unwrap())
            .collect()
    })
}

fn ctx_and_elems(k: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..FIELDS.len()).prop_flat_map(move |i| {
        let size = fields()[i].size();
        (Just(i), proptest::collection::vec(0..size, k))
    })
}

fn shuffle<T: Clone>(v: &[T], seed: u64) -> Vec<T> {
    let mut out = v.to_vec();
    let mut s = seed | 1;
    for i in (1..out.len()).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        out.swap(i, (s % (i as u64 + 1)) as usize);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((i, xs) in ctx_and_elems(3)) {
        let ctx = &fields()[i];
        let (a, b, c) = (Elem(xs[0]), Elem(xs[1]), Elem(xs[2]));
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        prop_assert_eq!(ctx.coords(a).len(), ctx.n() as usize);
        prop_assert_eq!(ctx.from_coords(&ctx.coords(a)), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(ctx.pow(a, ctx.size() as u64 - 1), Elem::ONE);
        }
        prop_assert_eq!(ctx.frobenius(a, ctx.n()), a);
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b), 1), ctx.mul(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b), 1), ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1)));
    }

    #[test]
    fn trace_is_linear((i, xs) in ctx_and_elems(3)) {
        let ctx = &fields()[i];
        let (a, b) = (Elem(xs[0]), Elem(xs[1]));
        let lambda = xs[2] % ctx.q();
        prop_assert_eq!(ctx.trace(ctx.add(a, b)), ctx.add(ctx.trace(a), ctx.trace(b)));
        prop_assert_eq!(ctx.trace(ctx.scale(lambda, a)), ctx.scale(lambda, ctx.trace(a)));
        prop_assert!(ctx.in_base_field(ctx.trace(a)));
        prop_assert_eq!(ctx.trace(a), ctx.trace_by_powers(a));
    }

    #[test]
    fn span_is_canonical((i, xs) in ctx_and_elems(4), seed in any::<u64>()) {
        let ctx = &fields()[i];
        let gens: Vec<Elem> = xs.iter().map(|&x| Elem(x)).collect();
        let u = Subspace::span(ctx, gens.clone());
        prop_assert_eq!(&Subspace::span(ctx, shuffle(&gens, seed)), &u);
        prop_assert_eq!(&Subspace::span(ctx, u.basis().to_vec()), &u);
        for &g in &gens {
            prop_assert!(u.contains(ctx, g));
        }
        prop_assert!(u.contains(ctx, ctx.add(gens[0], gens[1])));
        prop_assert_eq!(u.elements(ctx).unwrap().len() as u64, u.cardinality(ctx));
    }

    #[test]
    fn scaling_is_a_graph_isomorphism((i, xs) in ctx_and_elems(3)) {
        let ctx = &fields()[i];
        let a = Elem(xs[2].max(1));
        let u = Subspace::span(ctx, [Elem(xs[0].max(1)), Elem(xs[1])]);
        let v = u.scaled(ctx, ctx.square(a));
        let opts = SolverOptions::default();
        let g = GraphGU::build(ctx, u.clone()).unwrap();
        let h = GraphGU::build(ctx, v).unwrap();
        prop_assert_eq!(g.clique_number(&opts).unwrap().omega, h.clique_number(&opts).unwrap().omega);
        for x in ctx.elements().step_by(7) {
            for y in ctx.elements().step_by(5) {
                prop_assert_eq!(g.has_edge(x, y), h.has_edge(ctx.mul(a, x), ctx.mul(a, y)));
            }
        }
    }

    #[test]
    fn subgraph_monotonicity((i, xs) in ctx_and_elems(3)) {
        let ctx = &fields()[i];
        let small = Subspace::span(ctx, [Elem(xs[0].max(1))]);
        let big = small.sum(ctx, &Subspace::span(ctx, [Elem(xs[1]), Elem(xs[2])]));
        prop_assume!(big.dim() < ctx.n() as usize);
        let opts = SolverOptions::default();
        let ws = GraphGU::build(ctx, small).unwrap().clique_number(&opts).unwrap().omega;
        let wb = GraphGU::build(ctx, big).unwrap().clique_number(&opts).unwrap().omega;
        prop_assert!(ws <= wb);
    }

    #[test]
    fn chi_survives_congruence(fi in 0usize..3, lambda in 1u32..625, entries in proptest::collection::vec(0u32..5, 16)) {
        let ctx = [FieldCtx::new(3, 1, 4).unwrap(), FieldCtx::new(5, 1, 2).unwrap(), FieldCtx::new(5, 1, 4).unwrap()]
            .into_iter().nth(fi).unwrap();
        let n = ctx.n() as usize;
        let k = ctx.base();
        let lambda = Elem(lambda % (ctx.size() - 1) + 1);
        let f = Form::trace(&ctx, lambda).unwrap();
        let t = FqMatrix::from_rows((0..n).map(|i| (0..n).map(|j| entries[i * 4 + j] % ctx.q()).collect()).collect());
        prop_assume!(t.is_invertible(k));
        let g = f.pulled_back(&t).unwrap();
        let (diag, _) = g.diagonalize().unwrap();
        let prod: i8 = diag.iter().map(|&a| k.chi(a)).product();
        prop_assert_eq!(prod, f.chi().unwrap());
        prop_assert_eq!(g.chi().unwrap(), g.chi_by_determinant().unwrap());
    }

    #[test]
    fn double_complement((i, xs) in ctx_and_elems(4)) {
        let ctx = &fields()[i];
        let lambda = Elem(xs[3].max(1));
        let f = Form::trace(ctx, lambda).unwrap();
        let u = Subspace::span(ctx, [Elem(xs[0]), Elem(xs[1]), Elem(xs[2])]);
        let c = f.orthogonal_complement(&u);
        prop_assert_eq!(c.dim(), ctx.n() as usize - u.dim());
        prop_assert_eq!(f.orthogonal_complement(&c), u);
    }
}

#[test]
fn squares_match_table() {
    for ctx in fields() {
        let mut table = vec![false; ctx.size() as usize];
        for a in ctx.elements() {
            table[ctx.square(a).0 as usize] = true;
        }
        for a in ctx.elements() {
            assert_eq!(ctx.is_square_full(a), table[a.0 as usize]);
        }
        if !ctx.is_even() {
            let nonzero_squares = table.iter().skip(1).filter(|&&t| t).count();
            assert_eq!(nonzero_squares as u32, (ctx.size() - 1) / 2);
        }
        let kernel = ctx.elements().filter(|&a| ctx.trace(a).is_zero()).count() as u64;
        assert_eq!(kernel, (ctx.q() as u64).pow(ctx.n() - 1));
        let fixed: Vec<Elem> = ctx
            .elements()
            .filter(|&a| ctx.frobenius(a, 1) == a)
            .collect();
        assert_eq!(fixed.len() as u32, ctx.q());
        assert!(fixed.iter().all(|&a| ctx.in_base_field(a)));
    }
}
