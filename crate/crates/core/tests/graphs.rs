use std::collections::HashSet;

use paleyvec::forms::Form;
use paleyvec::graph::{BitGraph, GraphGU, SolverOptions};
use paleyvec::theorems::{predict_omega, q2_plane_clique_shape, sum_product_check};
use paleyvec::verify::{self, all_subspace_orbits, SuiteConfig};
use paleyvec::{Elem, Error, FieldCtx, Subspace};

fn omega(ctx: &FieldCtx, u: &Subspace) -> usize {
    GraphGU::build(ctx, u.clone())
        .unwrap()
        .clique_number(&SolverOptions::default())
        .unwrap()
        .omega
}

fn proper_subspaces(ctx: &FieldCtx) -> Vec<Subspace> {
    (1..ctx.n() as usize)
        .flat_map(|d| Subspace::all_of_dim(ctx, d))
        .collect()
}

/// Clique number by trying every vertex subset.
fn brute_omega(g: &BitGraph) -> usize {
    let n = g.vertex_count();
    let mut best = 0;
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((c, next)) = stack.pop() {
        best = best.max(c.len());
        for v in next..n {
            if c.iter().all(|&u| g.has_edge(u, v)) {
                let mut d = c.clone();
                d.push(v);
                stack.push((d, v + 1));
            }
        }
    }
    best
}

#[test]
fn solver_matches_subset_enumeration() {
    for (p, n) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
        let ctx = FieldCtx::new(p, 1, n).unwrap();
        for u in proper_subspaces(&ctx) {
            let g = GraphGU::build(&ctx, u.clone()).unwrap();
            assert_eq!(omega(&ctx, &u), brute_omega(g.graph()), "{u}");
        }
    }
}

#[test]
fn solver_matches_largest_maximal_clique() {
    for (q, n) in verify::fields_up_to(64) {
        let ctx = verify::field(q, n).unwrap();
        for orbit in all_subspace_orbits(&ctx) {
            let g = GraphGU::build(&ctx, orbit.rep.clone()).unwrap();
            let mut largest = 0;
            g.maximal_cliques(1_000_000, |c| largest = largest.max(c.len()))
                .unwrap();
            let res = g.clique_number(&SolverOptions::default()).unwrap();
            assert_eq!(res.omega, largest, "q={q} n={n} {}", orbit.rep);
            assert!(g.graph().is_clique(&res.witness));
        }
    }
}

#[test]
fn omega_is_constant_on_orbits() {
    for (q, n) in [(2, 4), (2, 5), (3, 3), (4, 2), (2, 6), (4, 3)] {
        let ctx = verify::field(q, n).unwrap();
        let reps: Vec<Subspace> = all_subspace_orbits(&ctx)
            .into_iter()
            .map(|o| o.rep)
            .collect();
        // recompute the orbit of each representative and compare ω on every member
        for rep in reps {
            let w = omega(&ctx, &rep);
            let orbit = verify::subspace_orbits(&ctx, std::slice::from_ref(&rep));
            assert_eq!(orbit.len(), 1);
            let mut members = HashSet::new();
            for k in 0..ctx.m() * ctx.n() {
                for a in ctx.nonzero() {
                    members.insert(rep.frobenius_image(&ctx, k).scaled(&ctx, ctx.square(a)));
                }
            }
            assert_eq!(members.len(), orbit[0].size);
            for v in members {
                assert_eq!(omega(&ctx, &v), w, "q={q} n={n} {rep} vs {v}");
            }
        }
    }
}

#[test]
fn full_enumeration_structure_and_bounds_small_fields() {
    let cfg = SuiteConfig::default();
    for (q, n) in verify::fields_up_to(32) {
        let ctx = verify::field(q, n).unwrap();
        for u in proper_subspaces(&ctx) {
            assert!(
                verify::check_structure(&ctx, &u, &cfg).unwrap().is_empty(),
                "{u}"
            );
            let (_, bad) = verify::check_subspace_bounds(&ctx, &u, &cfg).unwrap();
            assert!(bad.is_empty(), "q={q} n={n} {u}: {bad:?}");
        }
    }
}

#[test]
fn hyperplane_graph_is_an_orthogonality_graph() {
    for (p, m, n) in [
        (3, 1, 2),
        (3, 1, 3),
        (2, 1, 4),
        (5, 1, 2),
        (2, 2, 2),
        (3, 1, 4),
    ] {
        let ctx = FieldCtx::new(p, m, n).unwrap();
        for c in ctx.nonzero().step_by(3) {
            let u = Subspace::hyperplane_from_functional(&ctx, c).unwrap();
            let g = GraphGU::build(&ctx, u).unwrap();
            let f = Form::trace(&ctx, c).unwrap();
            assert_eq!(g.graph(), &f.orthogonality_graph().unwrap());
        }
    }
}

#[test]
fn worked_examples() {
    let f27 = FieldCtx::new(3, 1, 3).unwrap();
    assert_eq!(omega(&f27, &Subspace::trace_kernel(&f27)), 4);
    let f64_ = FieldCtx::new(2, 1, 6).unwrap();
    assert_eq!(omega(&f64_, &Subspace::trace_kernel(&f64_)), 8);
    let f4 = FieldCtx::new(2, 1, 2).unwrap();
    for u in Subspace::all_of_dim(&f4, 1) {
        assert_eq!(omega(&f4, &u), 3);
    }
    // every maximal clique contains 0
    let f9 = FieldCtx::new(3, 1, 2).unwrap();
    for (_, u) in Subspace::all_hyperplanes(&f9) {
        let g = GraphGU::build(&f9, u).unwrap();
        g.maximal_cliques(10_000, |c| assert!(c.contains(&Elem::ZERO)))
            .unwrap();
    }
}

#[test]
fn top_clique_number_cases() {
    let f8 = FieldCtx::new(2, 1, 3).unwrap();
    for u in Subspace::all_of_dim(&f8, 2) {
        assert_eq!(omega(&f8, &u), 4);
    }
    let f16 = FieldCtx::new(2, 1, 4).unwrap();
    let f4 = Subspace::span(&f16, f16.subfield_elements(2).unwrap());
    assert_eq!(omega(&f16, &f4), 4);
    for u in Subspace::all_of_dim(&f27(), 2) {
        assert!(omega(&f27(), &u) <= 4);
    }
}

fn f27() -> FieldCtx {
    FieldCtx::new(3, 1, 3).unwrap()
}

#[test]
fn plane_cliques_over_f2_have_the_product_shape() {
    for n in 3..=6 {
        let ctx = FieldCtx::new(2, 1, n).unwrap();
        for u in Subspace::all_of_dim(&ctx, 2) {
            let g = GraphGU::build(&ctx, u.clone()).unwrap();
            let mut fours = 0;
            g.maximal_cliques(1_000_000, |c| {
                if c.len() == 4 {
                    fours += 1;
                    assert!(q2_plane_clique_shape(&ctx, &u, c).unwrap(), "{u} {c:?}");
                }
            })
            .unwrap();
            assert!(fours > 0);
        }
    }
}

#[test]
fn no_square_means_omega_three() {
    for (p, m, n) in [
        (3, 1, 2),
        (3, 1, 4),
        (5, 1, 2),
        (7, 1, 2),
        (3, 2, 2),
        (5, 1, 3),
    ] {
        let ctx = FieldCtx::new(p, m, n).unwrap();
        for d in 1..n as usize {
            for u in Subspace::all_of_dim(&ctx, d).into_iter().take(400) {
                let w = omega(&ctx, &u);
                assert!(w >= 3);
                if !u.contains_nonzero_square(&ctx).unwrap() {
                    assert_eq!(w, 3, "{u}");
                }
            }
        }
    }
}

#[test]
fn d_invariant_detects_scaled_subfields() {
    for (q, n) in verify::fields_up_to(1024) {
        let ctx = verify::field(q, n).unwrap();
        for d in paleyvec::gf::divisors(n).into_iter().filter(|&d| d < n) {
            let sub = Subspace::span(&ctx, ctx.subfield_elements(d).unwrap());
            let scaled: HashSet<Subspace> = ctx
                .nonzero()
                .map(|a| sub.scaled(&ctx, ctx.square(a)))
                .collect();
            if paleyvec::linalg::gaussian_binomial(q, n, d) > 20_000 {
                continue;
            }
            for u in Subspace::all_of_dim(&ctx, d as usize) {
                let got = match u.d_invariant(&ctx) {
                    Ok(dd) => dd == d,
                    Err(Error::NoNonzeroSquare) => false,
                    Err(e) => panic!("{e}"),
                };
                assert_eq!(got, scaled.contains(&u), "q={q} n={n} {u}");
            }
        }
    }
}

#[test]
fn s_invariant_is_scaling_invariant() {
    for (p, n) in [(3, 2), (5, 2), (3, 4), (7, 2)] {
        let ctx = FieldCtx::new(p, 1, n).unwrap();
        for (delta, u) in Subspace::all_hyperplanes(&ctx).into_iter().step_by(3) {
            let s = u.s_invariant(&ctx).unwrap();
            assert_eq!(s == 1, ctx.is_square_full(delta));
            for a in ctx.nonzero().step_by(5) {
                assert_eq!(u.scaled(&ctx, ctx.square(a)).s_invariant(&ctx).unwrap(), s);
            }
        }
    }
}

#[test]
fn trace_forms_are_nondegenerate() {
    for (q, n) in verify::fields_up_to(1024) {
        let ctx = verify::field(q, n).unwrap();
        for lambda in ctx.nonzero().step_by(7) {
            let f = Form::trace(&ctx, lambda).unwrap();
            assert!(f.gram().is_symmetric());
            assert!(f.gram().is_invertible(ctx.base()));
        }
    }
}

#[test]
fn form_formulas_match_search_for_every_lambda() {
    for (p, n) in [(3, 2), (3, 3), (3, 4), (5, 2)] {
        let ctx = FieldCtx::new(p, 1, n).unwrap();
        for lambda in ctx.nonzero() {
            let f = Form::trace(&ctx, lambda).unwrap();
            let t = f.t_invariant().unwrap();
            assert_eq!(Some(t.value), t.closed_form);
            let m = f.m_invariant(&t, &SolverOptions::default()).unwrap();
            assert_eq!(Some(m.value), m.closed_form);
        }
    }
    let f16 = FieldCtx::new(2, 1, 4).unwrap();
    let f = Form::trace(&f16, Elem::ONE).unwrap();
    let t = f.t_invariant().unwrap();
    assert!(t.value <= 2 && f.is_totally_isotropic(&t.witness));
}

#[test]
fn sum_product_on_a_generic_four_set() {
    let ctx = FieldCtx::new(2, 1, 6).unwrap();
    let a: Vec<Elem> = [3u32, 17, 40, 61].map(Elem).to_vec();
    let r = sum_product_check(&ctx, &a, &a).unwrap();
    assert!(r.holds);
}

#[test]
fn predictions_cover_every_small_subspace() {
    for (q, n) in [(2, 5), (3, 4), (2, 6)] {
        let ctx = verify::field(q, n).unwrap();
        for orbit in all_subspace_orbits(&ctx) {
            let p = predict_omega(&ctx, &orbit.rep).unwrap();
            assert!(
                p.admits(omega(&ctx, &orbit.rep) as u64),
                "{} {p}",
                orbit.rep
            );
        }
    }
}

#[test]
fn parallel_search_agrees() {
    let ctx = FieldCtx::new(3, 1, 5).unwrap();
    let u = Subspace::trace_kernel(&ctx);
    let g = GraphGU::build(&ctx, u).unwrap();
    let base = g.clique_number(&SolverOptions::default()).unwrap();
    for (dom, w) in [(true, 1), (false, 4), (true, 4)] {
        let r = g
            .clique_number(&SolverOptions::default().with_dominance(dom).with_workers(w))
            .unwrap();
        assert_eq!((r.omega, &r.witness), (base.omega, &base.witness));
    }
    assert_eq!(base.omega, 10);
}
