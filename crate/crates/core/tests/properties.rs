mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::*;
use hace::dinat::{check_dinatural, enumerate_wedges, is_wedge, wedge_as_dinat};
use hace::ends::{coend, copower_adjunction_counts, end, end_pq, Method};
use hace::fincat::{power_pq, validate_category, RawCategory, Sig, ValidateOpts};
use hace::functor::enumerate_nat;
use hace::setops::{coequalizer, colimit, limit, weighted_limit, FinFn};
use hace::{FinSet, Integrand, Limits, SetFunctor, SetFunctorPQ};
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A raw table that is often, but not always, a category.
fn raw_table(seed: u64) -> RawCategory {
    use hace::gen::rng;
    use rand::RngExt;
    let mut r = rng(seed);
    let n = r.random_range(1..=2usize);
    let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let mut morphisms: Vec<(String, String, String)> = (0..n)
        .map(|i| (format!("id{i}"), objects[i].clone(), objects[i].clone()))
        .collect();
    for k in 0..r.random_range(0..=3usize) {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        morphisms.push((format!("m{k}"), objects[a].clone(), objects[b].clone()));
    }
    let identities = (0..n)
        .map(|i| (objects[i].clone(), format!("id{i}")))
        .collect();
    let mut compositions = Vec::new();
    for (g, gs, _) in morphisms.iter().skip(n) {
        for (f, _, ft) in morphisms.iter().skip(n) {
            if ft != gs || r.random_bool(0.05) {
                continue;
            }
            let h = &morphisms[r.random_range(0..morphisms.len())].0;
            compositions.push((g.clone(), f.clone(), h.clone()));
        }
    }
    RawCategory {
        name: "raw".into(),
        objects,
        morphisms,
        identities,
        compositions,
    }
}

/// Category laws read straight off the raw lists.
fn raw_is_category(raw: &RawCategory) -> bool {
    let ends: HashMap<&str, (&str, &str)> = raw
        .morphisms
        .iter()
        .map(|(m, s, t)| (m.as_str(), (s.as_str(), t.as_str())))
        .collect();
    let id_of: HashMap<&str, &str> = raw
        .identities
        .iter()
        .map(|(o, m)| (o.as_str(), m.as_str()))
        .collect();
    let mut comp: HashMap<(&str, &str), &str> = HashMap::new();
    for (g, f, h) in &raw.compositions {
        if comp.insert((g.as_str(), f.as_str()), h.as_str()).is_some() {
            return false;
        }
    }
    let is_id = |m: &str| id_of.values().any(|&i| i == m);
    let compose = |g: &str, f: &str| -> Option<String> {
        if is_id(f) {
            return Some(g.to_string());
        }
        if is_id(g) {
            return Some(f.to_string());
        }
        comp.get(&(g, f)).map(|s| s.to_string())
    };
    for (m, s, t) in &raw.morphisms {
        if is_id(m) && s != t {
            return false;
        }
    }
    for (g, (gs, gt)) in &ends {
        for (f, (fs, ft)) in &ends {
            if ft != gs {
                continue;
            }
            match compose(g, f) {
                Some(h) => {
                    if ends[h.as_str()] != (*fs, *gt) {
                        return false;
                    }
                }
                None => return false,
            }
        }
    }
    for (h, (_, ht)) in &ends {
        for (g, (gs, _)) in &ends {
            if gs != ht {
                continue;
            }
            for (f, (_, ft)) in &ends {
                if ft != &ends[*h].0 {
                    continue;
                }
                let left = compose(g, &compose(h, f).unwrap()).unwrap();
                let right = compose(&compose(g, h).unwrap(), f).unwrap();
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn category_validator_agrees_with_raw_checker(seed in any::<u64>()) {
        let raw = raw_table(seed);
        let accepted = validate_category(&raw, ValidateOpts::default()).is_ok();
        prop_assert_eq!(accepted, raw_is_category(&raw));
    }
}

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn power_and_diagonal_laws(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 3);
        let c = &inst.cat;
        let sig = inst.d.sig();
        let pw = power_pq(c, sig, &lim).unwrap();
        prop_assert_eq!(pw.n_morphisms(), c.n_morphisms().pow(sig.arity() as u32));
        let base = inst.d.restrict_diagonal(&lim).unwrap();
        for (r, s) in [(1, 0), (0, 1)] {
            if sig.arity() + r + s > 4 {
                continue;
            }
            let muted = inst.d.mute_extend(r, s, &lim).unwrap();
            muted.validate().unwrap();
            prop_assert!(muted.restrict_diagonal(&lim).unwrap().functor().same_tables(base.functor()));
        }
    }

    #[test]
    fn limits_and_colimits_have_compatible_legs(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 1);
        let d = inst.d.functor();
        let cat = d.domain();
        let l = limit(d, &lim).unwrap();
        let q = colimit(d, &lim).unwrap();
        for u in 0..cat.n_morphisms() {
            let (s, t) = (cat.src(u), cat.dst(u));
            for x in 0..l.carrier.len() {
                prop_assert_eq!(d.map(u).apply(l.legs[s].apply(x)), l.legs[t].apply(x));
            }
            for x in 0..d.fiber(s).len() {
                prop_assert_eq!(q.legs[t].apply(d.map(u).apply(x)), q.legs[s].apply(x));
            }
        }
        // Yoneda: the limit weighted by a representable is the value there.
        for a in 0..cat.n_objects() {
            let cc = cat.clone();
            let rep = SetFunctor::from_fn(
                cat.clone(),
                (0..cat.n_objects()).map(|b| hace::functor::hom_fiber(cat, a, b)).collect(),
                move |u, h| cc.hom_pos(cc.compose(u, cc.hom(a, cc.src(u))[h])),
            );
            prop_assert_eq!(weighted_limit(&rep, d, &lim).unwrap().carrier.len(), d.fiber(a).len());
        }
    }

    #[test]
    fn coequalizer_is_a_canonical_partition(seed in any::<u64>()) {
        use hace::gen::rng;
        use rand::RngExt;
        let mut r = rng(seed);
        let (n, m) = (r.random_range(1..8usize), r.random_range(0..6usize));
        let dom = FinSet::range(m);
        let cod = FinSet::range(n);
        let f = FinFn::new(dom.clone(), cod.clone(), (0..m).map(|_| r.random_range(0..n)).collect()).unwrap();
        let g = FinFn::new(dom, cod, (0..m).map(|_| r.random_range(0..n)).collect()).unwrap();
        let q = coequalizer(&f, &g).unwrap();
        let leg = &q.legs[0];
        prop_assert!(leg.is_surjective());
        for x in 0..m {
            prop_assert_eq!(leg.apply(f.apply(x)), leg.apply(g.apply(x)));
        }
        for (k, &(_, rep)) in q.reps.iter().enumerate() {
            prop_assert_eq!(leg.apply(rep), k);
            prop_assert!((0..rep).all(|y| leg.apply(y) != k));
        }
        // Nothing coarser than needed: two elements share a class only if forced.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize { while p[x] != x { x = p[x]; } x }
        for x in 0..m {
            let (a, b) = (find(&mut parent, f.apply(x)), find(&mut parent, g.apply(x)));
            parent[a.max(b)] = a.min(b);
        }
        for y in 0..n {
            for z in 0..n {
                prop_assert_eq!(leg.apply(y) == leg.apply(z), find(&mut parent, y) == find(&mut parent, z));
            }
        }
    }

    #[test]
    fn ends_are_wedges_and_coends_are_saturated(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 3);
        let d: Arc<dyn Integrand> = Arc::new(inst.d.clone());
        let e = end(d.as_ref(), &lim).unwrap();
        prop_assert!(is_wedge(&e.wedge, &d).unwrap());
        prop_assert!(check_dinatural(&wedge_as_dinat(&e.wedge, &d)).unwrap().is_empty());
        let c = coend(d.as_ref(), &lim).unwrap();
        let p = brute_coend(&inst.d);
        let mine: Vec<Vec<usize>> = c.cowedge.legs.iter().map(|l| l.table.clone()).collect();
        prop_assert_eq!(mine, p.class_of);
    }

    #[test]
    fn wedge_precomposition_is_functorial(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 2);
        let d: Arc<dyn Integrand> = Arc::new(inst.d.clone());
        let (x, y, z) = (FinSet::range(2), FinSet::range(2), FinSet::range(1));
        let g = FinFn::new(y.clone(), x.clone(), vec![1, 0]).unwrap();
        let h = FinFn::new(z.clone(), y.clone(), vec![1]).unwrap();
        for w in enumerate_wedges(&x, &d, &lim).unwrap().iter().take(20) {
            let lhs = w.precompose(&g.after(&h));
            let rhs = w.precompose(&g).precompose(&h);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(is_wedge(&lhs, &d).unwrap());
        }
        // Postcomposition with a natural endomorphism keeps wedges wedges.
        let nats = enumerate_nat(inst.d.functor(), inst.d.functor(), &lim);
        if let Ok(nats) = nats {
            for a in nats.iter().take(4) {
                for w in enumerate_wedges(&x, &d, &lim).unwrap().iter().take(10) {
                    prop_assert!(is_wedge(&w.postcompose(a).unwrap(), &d).unwrap());
                }
            }
        }
    }

    #[test]
    fn copower_adjunction_by_counting(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 2);
        if !hace::twisted::hom_pi_is_end_weight(inst.d.sig()) {
            return Ok(());
        }
        for k in [1, 2] {
            match copower_adjunction_counts(&inst.d, &FinSet::range(k), &lim) {
                Ok((a, b)) => prop_assert_eq!(a as u128, b),
                Err(hace::Error::SizeCapExceeded { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn point_weighted_end_is_the_end(seed in 0u64..10_000) {
        let lim = Limits::default();
        let inst = instance(seed, 2);
        if inst.d.sig() != Sig::new(1, 1) {
            return Ok(());
        }
        let pt = SetFunctorPQ::point(&inst.cat, Sig::new(1, 1), &lim).unwrap();
        let we = hace::apps::weighted_end(&pt, &inst.d, &lim).unwrap();
        let e = end_pq(&inst.d, Method::Equalizer, &lim).unwrap();
        let fams = |x: &hace::ends::EndPQ| (0..x.len()).map(|i| x.family(i)).collect::<Vec<_>>();
        prop_assert_eq!(fams(&we), fams(&e));
    }
}
