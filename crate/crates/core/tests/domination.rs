mod common;

use homdom_core::certificates::{self, Certificate};
use homdom_core::domination::{build_dual, build_primal, decide, solve_dual_lazy, Mode, Relation};
use homdom_core::exactlp::{self, Status};
use homdom_core::falsifier::{densities, random_graph};
use homdom_core::hom::DEFAULT_HOM_CAP;
use homdom_core::tree_catalog::{catalog, catalog_up_to};
use homdom_core::{BigInt, Forest, Q};
use num_traits::Pow;

fn pow(q: &Q, e: usize) -> Q {
    Pow::pow(q.clone(), e as u32)
}

#[test]
fn explicit_primal_and_dual_have_equal_value() {
    // The explicit dual has a row per homomorphism; keep the instances small.
    let trees = catalog_up_to(5);
    for h in &trees {
        for t in &trees {
            let (p, _) = build_primal(h, t, DEFAULT_HOM_CAP).unwrap();
            let (d, _) = build_dual(h, t, DEFAULT_HOM_CAP).unwrap();
            let (sp, sd) = (exactlp::solve(&p), exactlp::solve(&d));
            assert_eq!(sp.status, Status::Optimal);
            assert_eq!(sd.status, Status::Optimal);
            assert_eq!(sp.value, sd.value, "{} vs {}", h.inline(), t.inline());
            let (lazy, _) = solve_dual_lazy(h, t).unwrap();
            assert_eq!(lazy.value, sp.value);
            assert!(sp.value <= Q::from_integer(t.edge_count().into()));
        }
    }
}

#[test]
fn every_verdict_carries_a_verifying_certificate() {
    let trees = catalog_up_to(7);
    for h in &trees {
        for t in trees.iter().filter(|t| t.vertex_count() <= h.vertex_count()) {
            let v = decide(h, t, Mode::Lazy).unwrap();
            let report = certificates::verify(&v.certificate);
            assert!(report.ok, "{} vs {}: {:?}", h.inline(), t.inline(), report.failures.first());
            match (&v.certificate, v.relation) {
                (Certificate::Primal(_), Relation::Dominates) => assert_eq!(report.objective, Q::from_integer(t.edge_count().into())),
                (Certificate::Dual(_), Relation::NotDominates) => assert!(report.objective < Q::from_integer(t.edge_count().into())),
                _ => panic!("certificate kind does not match verdict"),
            }
        }
    }
}

/// Every Dominates verdict must survive the defining inequality on concrete graphs.
#[test]
fn dominating_pairs_satisfy_the_inequality_on_random_graphs() {
    let trees = catalog_up_to(7);
    let graphs: Vec<_> = (0..6).map(|s| random_graph(9 + s as usize, 0.2 + 0.1 * s as f64, s)).collect();
    let mut checked = 0;
    for h in &trees {
        for t in trees.iter().filter(|t| t.vertex_count() < h.vertex_count()) {
            if !decide(h, t, Mode::Lazy).unwrap().dominates() {
                continue;
            }
            for g in graphs.iter().filter(|g| g.edge_count() > 0) {
                let (th, tt) = densities(h, t, g);
                assert!(pow(&th, t.edge_count()) >= pow(&tt, h.edge_count()), "{} vs {}", h.inline(), t.inline());
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn every_tree_dominates_k2() {
    let k2 = Forest::path(2);
    for h in catalog() {
        let v = decide(h, &k2, Mode::Auto).unwrap();
        assert!(v.dominates());
        assert_eq!(v.lp_value, Q::from_integer(BigInt::from(1)));
    }
}

#[test]
fn smaller_trees_never_dominate_larger_ones() {
    let cat = catalog();
    for h in cat.iter().filter(|h| h.vertex_count() <= 5) {
        for t in cat.iter().filter(|t| t.vertex_count() > h.vertex_count() && t.vertex_count() <= 7) {
            assert_eq!(decide(h, t, Mode::Lazy).unwrap().relation, Relation::NotDominates, "{} vs {}", h.inline(), t.inline());
        }
    }
}

#[test]
fn modes_agree_on_eight_vertex_pairs() {
    let cat = catalog();
    for (a, b) in [(46, 24), (39, 20), (29, 12), (47, 25), (36, 19)] {
        let (h, t) = (&cat[a - 1], &cat[b - 1]);
        let e = decide(h, t, Mode::Explicit).unwrap();
        let l = decide(h, t, Mode::Lazy).unwrap();
        assert_eq!(e.relation, l.relation);
        assert_eq!(e.lp_value, l.lp_value);
    }
}

#[test]
fn forest_inputs_are_accepted() {
    let f = Forest::from_edge_list(6, &[(1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
    let v = decide(&f, &Forest::path(3), Mode::Auto).unwrap();
    assert!(certificates::verify(&v.certificate).ok);
    // Two disjoint P3 dominate P3.
    assert!(v.dominates());
}
