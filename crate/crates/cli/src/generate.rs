//! Seeded random specs: one category, a functor `F` and a functor `G` of the dual
//! signature, and a few jobs on them.

use std::sync::Arc;

use hace::fincat::FinCat;
use hace::gen::{random_category, random_functor, random_sig, rng, Profile};
use hace::{Limits, SetFunctorPQ, Sig};

use crate::spec::{
    Action, CatSpec, CategoryBody, CategoryDecl, FunctorBody, FunctorDecl, Item, Job,
};

/// Generator bounds; `sig` pins the signature of `F`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenProfile {
    pub base: Profile,
    pub sig: Option<Sig>,
}

pub fn generate(seed: u64, profile: &GenProfile, lim: &Limits) -> hace::Result<CatSpec> {
    let mut r = rng(seed);
    let cat = Arc::new(random_category(&mut r, &profile.base, lim)?);
    let sig = profile
        .sig
        .unwrap_or_else(|| random_sig(&mut r, profile.base.max_arity));
    let f = random_functor(&mut r, &cat, sig, &profile.base, lim)?;
    let g = random_functor(&mut r, &cat, sig.dual(), &profile.base, lim)?;
    let cname = format!("C{seed}");
    let fd = |name: &str, d: &SetFunctorPQ| FunctorDecl {
        name: name.into(),
        category: cname.clone(),
        body: table(d),
    };
    Ok(CatSpec {
        items: vec![
            Item::Category(CategoryDecl {
                name: cname.clone(),
                body: explicit(&cat),
            }),
            Item::Functor(fd("F", &f)),
            Item::Functor(fd("G", &g)),
            Item::Job(Job::End {
                functor: "F".into(),
                method: None,
            }),
            Item::Job(Job::Coend {
                functor: "F".into(),
                method: None,
            }),
            Item::Job(Job::Dinat {
                source: "F".into(),
                target: "G".into(),
            }),
            Item::Job(Job::CheckAll),
        ],
    })
}

/// Full tables of a finite category; composites with identities are left implicit.
pub fn explicit(c: &FinCat) -> CategoryBody {
    let obj = |o| c.object_name(o).to_string();
    let mut compositions = Vec::new();
    for (g, f) in c.composable_pairs() {
        if !c.is_identity(g) && !c.is_identity(f) {
            compositions.push((
                c.mor_name(g).to_string(),
                c.mor_name(f).to_string(),
                c.mor_name(c.compose(g, f)).to_string(),
            ));
        }
    }
    CategoryBody::Explicit {
        objects: (0..c.n_objects()).map(obj).collect(),
        morphisms: (0..c.n_morphisms())
            .map(|m| (c.mor_name(m).to_string(), obj(c.src(m)), obj(c.dst(m))))
            .collect(),
        identities: (0..c.n_objects())
            .map(|o| (obj(o), c.mor_name(c.identity(o)).to_string()))
            .collect(),
        compositions,
    }
}

/// Fibers with fresh element names `x0, x1, …` and the action of every non-identity
/// morphism in every slot.
pub fn table(d: &SetFunctorPQ) -> FunctorBody {
    let c = d.base();
    let sig = d.sig();
    let n = sig.arity();
    let power = d.power();
    let names = |k: usize| (0..k).map(|i| format!("x{i}")).collect::<Vec<_>>();
    let tuple = |t: &[usize]| {
        t.iter()
            .map(|&a| c.object_name(a).to_string())
            .collect::<Vec<_>>()
    };
    let fibers = (0..power.n_objects())
        .map(|o| {
            (
                tuple(&power.decode_obj(o)),
                names(d.functor().fiber(o).len()),
            )
        })
        .collect();
    let mut actions = Vec::new();
    for k in 0..n {
        for o in 0..power.n_objects() {
            let t = power.decode_obj(o);
            if t[k] != 0 {
                continue;
            }
            for m in 0..c.n_morphisms() {
                if c.is_identity(m) {
                    continue;
                }
                let mut mors: Vec<usize> = t.iter().map(|&a| c.identity(a)).collect();
                mors[k] = m;
                let tbl = &d.map_at(&mors).table;
                actions.push(Action {
                    slot: k,
                    mor: c.mor_name(m).to_string(),
                    context: tuple(&t)
                        .into_iter()
                        .enumerate()
                        .map(|(i, s)| (i != k).then_some(s))
                        .collect(),
                    images: tbl.iter().map(|&y| format!("x{y}")).collect(),
                });
            }
        }
    }
    FunctorBody::Table {
        sig,
        fibers,
        actions,
    }
}
