mod common;

use std::sync::Arc;

use common::*;
use hace::dinat::enumerate_dinat;
use hace::ends::{
    arity_gap, check_mute_invariance, coend, coend_pq, dinat_as_end, dinat_from_point_vs_nat, end,
    end_pq, fubini_check, verify_coend_universal, verify_end_universal, Method, ProductBi,
};
use hace::fincat::{acyclic_graph, monoid, poset, FinCat, Sig};
use hace::gen::{random_category, rng, Profile};
use hace::setops::{colimit, limit};
use hace::twisted::hom_pi_is_end_weight;
use hace::{FinSet, Integrand, Limits, SetFunctor, SetFunctorPQ};

fn as_dyn(d: &SetFunctorPQ) -> Arc<dyn Integrand> {
    Arc::new(d.clone())
}

fn fixed_categories() -> Vec<Arc<FinCat>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let lim = Limits::default();
    vec![
        Arc::new(
            acyclic_graph(
                "arrow",
                &s(&["0", "1"]),
                &[("u".into(), "0".into(), "1".into())],
                &lim,
            )
            .unwrap(),
        ),
        Arc::new(
            poset(
                "chain3",
                &s(&["0", "1", "2"]),
                &[("0".into(), "1".into()), ("1".into(), "2".into())],
            )
            .unwrap(),
        ),
        Arc::new(
            poset(
                "V",
                &s(&["l", "t", "r"]),
                &[("l".into(), "t".into()), ("r".into(), "t".into())],
            )
            .unwrap(),
        ),
        Arc::new(poset("discrete2", &s(&["a", "b"]), &[]).unwrap()),
        Arc::new(monoid("Z2", &s(&["1", "a"]), 0, &[vec![0, 1], vec![1, 0]]).unwrap()),
    ]
}

#[test]
fn ends_and_coends_match_brute_force() {
    let lim = Limits::default();
    for seed in 0..100 {
        let inst = instance(seed, 3);
        let mut fams: Vec<Vec<usize>> = {
            let e = end_pq(&inst.d, Method::Equalizer, &lim).unwrap();
            (0..e.len()).map(|x| e.family(x)).collect()
        };
        fams.sort();
        assert_eq!(fams, brute_end(&inst.d), "seed {seed}");
        let c = coend_pq(&inst.d, Method::Restriction, &lim).unwrap();
        let p = brute_coend(&inst.d);
        assert_eq!(c.len(), p.classes, "seed {seed}");
        let mine: Vec<Vec<usize>> = c.cowedge.legs.iter().map(|l| l.table.clone()).collect();
        assert!(same_partition(&mine, &p.class_of), "seed {seed}");
        // Canonical labelling: classes are numbered by least member.
        assert_eq!(mine, p.class_of, "seed {seed}");
    }
}

#[test]
fn universal_property_on_seeded_instances() {
    let lim = Limits::default();
    for seed in 0..40 {
        let inst = instance(seed, 2);
        let d = as_dyn(&inst.d);
        let e = end(&inst.d, &lim).unwrap();
        let r = verify_end_universal(&e, &d, &[0, 1, 2, 3], &lim).unwrap();
        assert_eq!(r.wedges, r.factorizations, "seed {seed}");
        let c = coend(&inst.d, &lim).unwrap();
        let r = verify_coend_universal(&c, &d, &[0, 1, 2], &lim).unwrap();
        assert_eq!(r.wedges, r.factorizations, "seed {seed}");
    }
}

#[test]
fn dinaturals_match_brute_force_and_the_end() {
    let lim = Limits::default();
    let mut checked = 0;
    for seed in 0..200 {
        let mut r = rng(seed);
        let cat = Arc::new(random_category(&mut r, &Profile::default(), &lim).unwrap());
        let sigs = [
            Sig::new(1, 1),
            Sig::new(0, 1),
            Sig::new(1, 0),
            Sig::new(2, 1),
            Sig::new(1, 2),
            Sig::new(0, 2),
        ];
        let sig = sigs[seed as usize % sigs.len()];
        let f = functor_with(&mut r, &cat, sig);
        let g = functor_with(&mut r, &cat, sig.dual());
        let total: f64 = (0..cat.n_objects())
            .map(|a| {
                let x = f.fiber_at(&vec![a; sig.arity()]).len() as f64;
                let y = g.fiber_at(&vec![a; sig.arity()]).len() as f64;
                y.powf(x)
            })
            .product();
        if total > 50_000.0 {
            continue;
        }
        let (fd, gd) = (as_dyn(&f), as_dyn(&g));
        let n = enumerate_dinat(&fd, &gd, &lim).unwrap().len();
        assert_eq!(n, brute_dinat_count(&f, &g), "seed {seed} {sig}");
        let rep = dinat_as_end(&fd, &gd, &lim).unwrap();
        assert_eq!((rep.dinats, rep.end_size), (n, n), "seed {seed}");
        if gd.sig().arity() == 1 || hom_pi_is_end_weight(gd.sig()) {
            let (a, b) = dinat_from_point_vs_nat(&gd, &lim).unwrap();
            assert_eq!(a, b, "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 60, "only {checked} instances small enough");
}

#[test]
fn fubini_on_two_categories() {
    let lim = Limits::default();
    let small = Profile {
        max_objects: 3,
        max_morphisms: 6,
        max_fiber: 2,
        max_arity: 2,
    };
    for seed in 0..50 {
        let mut r = rng(1000 + seed);
        let a = Arc::new(random_category(&mut r, &small, &lim).unwrap());
        let b = Arc::new(random_category(&mut r, &small, &lim).unwrap());
        let sa = Sig::new(1, (seed % 2) as usize);
        let sb = Sig::new((seed % 3 == 0) as usize, 1);
        let f = as_dyn(&functor_with(&mut r, &a, sa));
        let g = as_dyn(&functor_with(&mut r, &b, sb));
        let rep = fubini_check(&ProductBi { f, g, mixed: None }, &lim).unwrap();
        assert_eq!(
            (rep.end_ab, rep.end_ba),
            (rep.end_joint, rep.end_joint),
            "seed {seed}"
        );
        assert_eq!(
            (rep.coend_ab, rep.coend_ba),
            (rep.coend_joint, rep.coend_joint),
            "seed {seed}"
        );
    }
}

#[test]
fn shared_variable_does_not_reduce_arity() {
    let lim = Limits::default();
    let c = &fixed_categories()[0];
    let hom = as_dyn(&SetFunctorPQ::hom(c, &lim).unwrap());
    let ((ej, es), (cj, cs)) = arity_gap(
        &ProductBi {
            f: hom.clone(),
            g: hom,
            mixed: None,
        },
        &lim,
    )
    .unwrap();
    assert!(
        ej != es || cj != cs,
        "expected a gap, got ends {ej}/{es} coends {cj}/{cs}"
    );
}

#[test]
fn degenerate_arities() {
    let lim = Limits::default();
    for c in fixed_categories() {
        let mut r = rng(c.n_morphisms() as u64);
        // (0,0): the end of a constant is X^{π0(C)}.
        let x = FinSet::range(3);
        let k = SetFunctorPQ::constant(&c, Sig::new(0, 0), &x, &lim).unwrap();
        let components = count_components(&c);
        assert_eq!(
            end(&k, &lim).unwrap().len(),
            3usize.pow(components as u32),
            "{}",
            c.name()
        );
        assert_eq!(
            coend(&k, &lim).unwrap().len(),
            3 * components,
            "{}",
            c.name()
        );
        // (1,0) and (0,1): limits and colimits.
        for sig in [Sig::new(1, 0), Sig::new(0, 1)] {
            let d = functor_with(&mut r, &c, sig);
            let l = limit(d.functor(), &lim).unwrap();
            let e = end(&d, &lim).unwrap();
            let mut a: Vec<Vec<usize>> = (0..e.len()).map(|i| e.family(i)).collect();
            let mut b: Vec<Vec<usize>> = (0..l.carrier.len())
                .map(|i| l.legs.iter().map(|g| g.apply(i)).collect())
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{} {sig}", c.name());
            let q = colimit(d.functor(), &lim).unwrap();
            let co = coend(&d, &lim).unwrap();
            let mine: Vec<Vec<usize>> = co.cowedge.legs.iter().map(|l| l.table.clone()).collect();
            let theirs: Vec<Vec<usize>> = q.legs.iter().map(|l| l.table.clone()).collect();
            assert!(same_partition(&mine, &theirs), "{} {sig}", c.name());
        }
        // (0,n): co/limits of the restriction to the diagonal.
        for n in [2, 3] {
            let sig = Sig::new(0, n);
            let d = functor_with(&mut r, &c, sig);
            let cc = c.clone();
            let dd = d.clone();
            let diag = SetFunctor::from_fn(
                c.clone(),
                (0..c.n_objects())
                    .map(|a| d.fiber_at(&vec![a; n]).clone())
                    .collect(),
                move |u, x| {
                    let _ = &cc;
                    dd.map_at(&vec![u; n]).apply(x)
                },
            );
            diag.validate().unwrap();
            assert_eq!(
                end(&d, &lim).unwrap().len(),
                limit(&diag, &lim).unwrap().carrier.len()
            );
            assert_eq!(
                coend(&d, &lim).unwrap().len(),
                colimit(&diag, &lim).unwrap().carrier.len()
            );
        }
        // (1,1): the ordinary end, checked against brute force above; mute slots change nothing.
        let d = functor_with(&mut r, &c, Sig::new(1, 1));
        let mut fams: Vec<Vec<usize>> = {
            let e = end(&d, &lim).unwrap();
            (0..e.len()).map(|i| e.family(i)).collect()
        };
        fams.sort();
        assert_eq!(fams, brute_end(&d));
        for (rr, ss) in [(1, 0), (0, 1), (1, 1)] {
            check_mute_invariance(&as_dyn(&d), rr, ss, &lim).unwrap();
        }
    }
}

fn count_components(c: &FinCat) -> usize {
    let n = c.n_objects();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for u in 0..c.n_morphisms() {
            let (a, b) = (c.src(u), c.dst(u));
            let m = comp[a].min(comp[b]);
            if comp[a] != m || comp[b] != m {
                comp[a] = m;
                comp[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    comp.sort_unstable();
    comp.dedup();
    comp.len()
}

#[test]
fn generated_categories_satisfy_laws() {
    let lim = Limits::default();
    for seed in 0..100 {
        let c = random_category(&mut rng(seed), &Profile::default(), &lim).unwrap();
        assert!(category_laws_hold(&c), "seed {seed}");
    }
}
