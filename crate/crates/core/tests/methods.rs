use std::sync::Arc;

use hace::ends::{coend_pq, end_pq, Method};
use hace::gen::{random_category, random_functor, random_sig, rng, Profile};
use hace::Limits;

#[test]
fn all_methods_agree_on_generated_instances() {
    let lim = Limits::default();
    let profile = Profile::default();
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let c = Arc::new(random_category(&mut r, &profile, &lim).unwrap());
        let sig = random_sig(&mut r, profile.max_arity);
        let d = random_functor(&mut r, &c, sig, &profile, &lim).unwrap();
        let e0 = end_pq(&d, Method::Equalizer, &lim).unwrap();
        let c0 = coend_pq(&d, Method::Equalizer, &lim).unwrap();
        for m in &Method::ALL[1..] {
            let e = end_pq(&d, *m, &lim)
                .unwrap_or_else(|err| panic!("seed {seed} {} {sig} end {m}: {err}", c.name()));
            assert_eq!(
                e.labels(),
                e0.labels(),
                "seed {seed} {} {sig} end {m}",
                c.name()
            );
            let k = coend_pq(&d, *m, &lim)
                .unwrap_or_else(|err| panic!("seed {seed} {} {sig} coend {m}: {err}", c.name()));
            assert_eq!(
                k.labels(),
                c0.labels(),
                "seed {seed} {} {sig} coend {m}",
                c.name()
            );
        }
    }
}
