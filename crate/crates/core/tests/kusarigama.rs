mod common;

use std::sync::Arc;
use std::time::Instant;

use common::*;
use hace::fincat::{poset, FinCat, Sig};
use hace::gen::{random_category, rng, Profile};
use hace::kusarigama::{
    check_constant_on_lattice, check_kusarigama_laws, cokusarigama, cokusarigama_via_tw_j,
    kusarigama, kusarigama_via_tw_j, point_cokusarigama_vs_grid, Lattice,
};
use hace::setops::FinSet;
use hace::twisted::{check_tw_iso, hom_pi, tw_j, tw_j_embedding};
use hace::{Integrand, Limits};

fn small() -> Profile {
    Profile {
        max_objects: 3,
        max_morphisms: 6,
        max_fiber: 2,
        max_arity: 2,
    }
}

#[test]
fn laws_on_seeded_instances() {
    let lim = Limits::default();
    let sigs = [
        Sig::new(1, 1),
        Sig::new(0, 1),
        Sig::new(1, 0),
        Sig::new(2, 1),
        Sig::new(1, 2),
    ];
    let t0 = Instant::now();
    let mut done = 0;
    let mut skipped = 0;
    for seed in 0..200u64 {
        if done == 30 {
            break;
        }
        let mut r = rng(5000 + seed);
        let cat = Arc::new(random_category(&mut r, &small(), &lim).unwrap());
        let sig = sigs[seed as usize % sigs.len()];
        let f = functor_with(&mut r, &cat, sig);
        let g = functor_with(&mut r, &cat, sig.dual());
        let rep = match check_kusarigama_laws(&f, &g, &FinSet::range(2), &lim) {
            Ok(r) => r,
            Err(hace::Error::SizeCapExceeded { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => panic!("seed {seed} {} {sig}: {e}", cat.name()),
        };
        let c = rep.adjunction.counts;
        assert_eq!(
            (c.nat_from_j, c.nat_to_gamma),
            (c.dinat, c.dinat),
            "seed {seed}"
        );
        assert_eq!(
            (rep.limits.end, rep.limits.coend),
            (rep.limits.limit, rep.limits.colimit),
            "seed {seed}"
        );
        done += 1;
    }
    assert_eq!(done, 30);
    eprintln!(
        "kusarigama laws: {:?}, {skipped} over the cap",
        t0.elapsed()
    );
}

#[test]
fn point_gives_grid_and_point() {
    let lim = Limits::default();
    for seed in 0..30u64 {
        let cat = Arc::new(random_category(&mut rng(6000 + seed), &small(), &lim).unwrap());
        for sig in [Sig::new(1, 1), Sig::new(1, 2), Sig::new(2, 1)] {
            let pt: Arc<dyn Integrand> = Arc::new(hace::functor::ConstIntegrand::new(
                &cat,
                sig,
                FinSet::point(),
            ));
            let j = cokusarigama(&pt, &lim).unwrap();
            let grid = hom_pi(&cat, sig.dual(), &lim).unwrap();
            let sizes =
                |f: &hace::SetFunctor| f.fibers().iter().map(FinSet::len).collect::<Vec<_>>();
            assert_eq!(
                sizes(j.functor.functor()),
                sizes(grid.functor()),
                "seed {seed} {sig}"
            );
            let g = kusarigama(&pt, &lim).unwrap();
            assert!(
                g.functor.functor().fibers().iter().all(|s| s.len() == 1),
                "seed {seed} {sig}"
            );
        }
        if cat.is_thin() {
            assert!(
                point_cokusarigama_vs_grid(&cat, Sig::new(1, 1), &lim).unwrap(),
                "seed {seed}"
            );
        }
    }
}

fn posets() -> Vec<Arc<FinCat>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let p = |a: &str, b: &str| (a.to_string(), b.to_string());
    vec![
        Arc::new(poset("arrow", &s(&["0", "1"]), &[p("0", "1")]).unwrap()),
        Arc::new(poset("chain3", &s(&["0", "1", "2"]), &[p("0", "1"), p("1", "2")]).unwrap()),
        Arc::new(
            poset(
                "diamond",
                &s(&["b", "l", "r", "t"]),
                &[p("b", "l"), p("b", "r"), p("l", "t"), p("r", "t")],
            )
            .unwrap(),
        ),
        Arc::new(poset("V", &s(&["l", "t", "r"]), &[p("l", "t"), p("r", "t")]).unwrap()),
    ]
}

#[test]
fn constants_on_lattices() {
    let lim = Limits::default();
    for c in posets() {
        match Lattice::new(&c) {
            Ok(lat) => {
                for sig in [Sig::new(1, 1), Sig::new(2, 1), Sig::new(1, 2)] {
                    assert!(
                        check_constant_on_lattice(&lat, sig, &FinSet::range(2), &lim).unwrap() > 0
                    );
                }
            }
            Err(e) => assert_eq!(c.name(), "V", "{e}"),
        }
    }
}

#[test]
fn twisted_arrow_routes_on_posets() {
    let lim = Limits::default();
    for c in posets() {
        check_tw_iso(&c, &lim).unwrap();
        let mut r = rng(c.n_morphisms() as u64);
        let d = functor_with(&mut r, &c, Sig::new(1, 1));
        for a in 0..c.n_objects() {
            for b in 0..c.n_objects() {
                let rep = cokusarigama_via_tw_j(&d, a, b, &lim).unwrap();
                assert_eq!(rep.pointwise, rep.via_tw_j, "{} {a} {b}", c.name());
                let rep = kusarigama_via_tw_j(&d, a, b, &lim).unwrap();
                assert_eq!(rep.pointwise, rep.via_tw_j, "{} {a} {b}", c.name());
                let t = tw_j(&c, a, b, &lim).unwrap();
                match tw_j_embedding(&c, &t, &lim) {
                    Ok(k) => {
                        k.validate().unwrap();
                        assert!(k.is_injective_on_objects());
                    }
                    Err(hace::Error::NoEmbedding(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn twisted_arrow_iso_on_seeded_categories() {
    let lim = Limits::default();
    for seed in 0..30u64 {
        let cat = Arc::new(random_category(&mut rng(7000 + seed), &small(), &lim).unwrap());
        check_tw_iso(&cat, &lim).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}
