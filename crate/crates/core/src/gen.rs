//! Seeded random instances: small categories and Set-valued functors on their powers.
//!
//! Functors are quotients of sums of representables on `C^{(p,q)}` (every finitely generated
//! functor arises this way), cut down to the fiber bound by merging elements and closing
//! under the action. The one-slot actions of the result are then fed back through
//! [`functor_from_slots`], which re-derives and re-validates the whole table.

use std::sync::Arc;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fincat::{acyclic_graph, monoid, poset, power_pq, FinCat, Obj, Sig};
use crate::functor::{functor_from_slots, tuple_source, SetFunctorPQ, SlotAction};
use crate::setops::{FinSet, Label, UnionFind};
use crate::Limits;

pub use rand::SeedableRng;
pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds on generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_fiber: usize,
    pub max_arity: usize,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            max_objects: 4,
            max_morphisms: 12,
            max_fiber: 3,
            max_arity: 3,
        }
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Small monoids by multiplication table (`table[x][y] = x ∘ y`), unit first.
fn monoid_tables() -> Vec<(&'static str, Vec<&'static str>, Vec<Vec<usize>>)> {
    vec![
        ("Z2", vec!["1", "a"], vec![vec![0, 1], vec![1, 0]]),
        (
            "Z3",
            vec!["1", "a", "b"],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        ),
        ("idem", vec!["1", "e"], vec![vec![0, 1], vec![1, 1]]),
        // Two left zeros: x ∘ y = x for x, y ≠ 1.
        (
            "leftzero",
            vec!["1", "a", "b"],
            vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
        ),
    ]
}

/// A random poset, free category on a DAG, or small monoid within the profile.
pub fn random_category(rng: &mut Rng, profile: &Profile, lim: &Limits) -> Result<FinCat> {
    for _ in 0..64 {
        let kind = rng.random_range(0..10);
        let c = if kind < 5 {
            let n = rng.random_range(1..=profile.max_objects);
            let mut le = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.45) {
                        le.push((i.to_string(), j.to_string()));
                    }
                }
            }
            poset(&format!("P{n}"), &names(n), &le)?
        } else if kind < 8 {
            let n = rng.random_range(1..=profile.max_objects.min(3));
            let k = rng.random_range(1..=3);
            let mut edges = Vec::new();
            for e in 0..k {
                if n < 2 {
                    break;
                }
                let i = rng.random_range(0..n - 1);
                let j = rng.random_range(i + 1..n);
                edges.push((format!("e{e}"), i.to_string(), j.to_string()));
            }
            acyclic_graph(&format!("G{n}"), &names(n), &edges, lim)?
        } else {
            let tables = monoid_tables();
            let (name, els, table) = &tables[rng.random_range(0..tables.len())];
            let els: Vec<String> = els.iter().map(|s| s.to_string()).collect();
            monoid(name, &els, 0, table)?
        };
        if c.n_morphisms() <= profile.max_morphisms {
            return Ok(c);
        }
    }
    Err(Error::GenerationExhausted(
        "no category within the profile".into(),
    ))
}

/// A signature with `p + q ≤ max_arity`.
pub fn random_sig(rng: &mut Rng, max_arity: usize) -> Sig {
    let n = rng.random_range(0..=max_arity);
    let p = rng.random_range(0..=n);
    Sig::new(p, n - p)
}

/// A random functor on `C^{(p,q)}` with fibers of size at most `profile.max_fiber`.
pub fn random_functor(
    rng: &mut Rng,
    base: &Arc<FinCat>,
    sig: Sig,
    profile: &Profile,
    lim: &Limits,
) -> Result<SetFunctorPQ> {
    let power = power_pq(base, sig, lim)?;
    let np = power.n_objects();
    // Generators: 0 to 2 representables, occasionally a constant summand.
    let n_gen = rng.random_range(0..=2);
    let gens: Vec<Obj> = (0..n_gen).map(|_| rng.random_range(0..np)).collect();
    let konst = if n_gen == 0 || rng.random_bool(0.2) {
        rng.random_range(0..=profile.max_fiber.min(2))
    } else {
        0
    };
    // Elements: (object, summand, morphism of C^{(p,q)} or constant index).
    let mut elems: Vec<(Obj, usize, usize)> = Vec::new();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); np];
    for x in 0..np {
        for (g, &t) in gens.iter().enumerate() {
            for h in power.hom(t, x) {
                at[x].push(elems.len());
                elems.push((x, g, h));
            }
        }
        for k in 0..konst {
            at[x].push(elems.len());
            elems.push((x, n_gen, k));
        }
    }
    if elems.len() > lim.cap {
        return Err(Error::SizeCapExceeded {
            what: "generated functor".into(),
            size: elems.len() as u128,
            cap: lim.cap,
        });
    }
    let index: std::collections::HashMap<(Obj, usize, usize), usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let act = |m: usize, e: usize| -> usize {
        let (_, g, h) = elems[e];
        let h2 = if g == n_gen { h } else { power.compose(m, h) };
        index[&(power.dst(m), g, h2)]
    };
    let mut uf = UnionFind::new(elems.len());
    let mut work: Vec<(usize, usize)> = Vec::new();
    let close = |uf: &mut UnionFind, work: &mut Vec<(usize, usize)>| {
        while let Some((a, b)) = work.pop() {
            if uf.union(a, b) {
                for &m in power.out(elems[a].0) {
                    work.push((act(m, a), act(m, b)));
                }
            }
        }
    };
    // A few random merges, then merge until every fiber fits.
    for _ in 0..rng.random_range(0..=2) {
        let x = rng.random_range(0..np);
        if at[x].len() >= 2 {
            let i = at[x][rng.random_range(0..at[x].len())];
            let j = at[x][rng.random_range(0..at[x].len())];
            work.push((i, j));
            close(&mut uf, &mut work);
        }
    }
    loop {
        let mut worst = None;
        for x in 0..np {
            let mut reps: Vec<usize> = at[x].iter().map(|&e| uf.find(e)).collect();
            reps.sort_unstable();
            reps.dedup();
            if reps.len() > profile.max_fiber {
                worst = Some(reps);
                break;
            }
        }
        let Some(reps) = worst else { break };
        let i = rng.random_range(0..reps.len());
        let mut j = rng.random_range(0..reps.len() - 1);
        if j >= i {
            j += 1;
        }
        work.push((reps[i], reps[j]));
        close(&mut uf, &mut work);
    }
    // Fibers: classes in order of least member.
    let mut class_ix: Vec<Option<usize>> = vec![None; elems.len()];
    let mut fibers = Vec::with_capacity(np);
    let mut pos = vec![0; elems.len()];
    for x in 0..np {
        let mut k = 0;
        for &e in &at[x] {
            let r = uf.find(e);
            if class_ix[r].is_none() {
                class_ix[r] = Some(k);
                k += 1;
            }
            pos[e] = class_ix[r].unwrap();
        }
        fibers.push(FinSet::from_distinct(
            (0..k).map(|i| Label::atom(format!("x{i}"))).collect(),
        ));
    }
    let rep_of: Vec<Vec<usize>> = (0..np)
        .map(|x| {
            let mut v = vec![usize::MAX; fibers[x].len()];
            for &e in &at[x] {
                if v[pos[e]] == usize::MAX {
                    v[pos[e]] = e;
                }
            }
            v
        })
        .collect();
    // One-slot actions of every non-identity base morphism in every context.
    let c = base.as_ref();
    let n = sig.arity();
    let mut actions = Vec::new();
    for o in 0..np {
        let ctx = power.decode_obj(o);
        for k in 0..n {
            for m in 0..c.n_morphisms() {
                if c.is_identity(m) {
                    continue;
                }
                let src_obj = if sig.is_contra(k) { c.dst(m) } else { c.src(m) };
                if ctx[k] != src_obj {
                    continue;
                }
                let mut mors: Vec<usize> = ctx.iter().map(|&a| c.identity(a)).collect();
                mors[k] = m;
                debug_assert_eq!(tuple_source(c, sig, &mors), ctx);
                let pm = power.encode_mor(&mors);
                let table = rep_of[o].iter().map(|&e| pos[act(pm, e)]).collect();
                actions.push(SlotAction {
                    slot: k,
                    mor: m,
                    context: ctx.clone(),
                    table,
                });
            }
        }
    }
    functor_from_slots(base, sig, fibers, &actions, lim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_functors_are_valid_and_bounded() {
        let lim = Limits::default();
        let p = Profile::default();
        for seed in 0..40 {
            let mut r = rng(seed);
            let c = Arc::new(random_category(&mut r, &p, &lim).unwrap());
            assert!(c.check_laws(false).is_empty());
            let sig = random_sig(&mut r, 3);
            let f = random_functor(&mut r, &c, sig, &p, &lim).unwrap();
            f.validate().unwrap();
            assert!(f.functor().fibers().iter().all(|s| s.len() <= p.max_fiber));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let lim = Limits::default();
        let p = Profile::default();
        let mk = |s| {
            let mut r = rng(s);
            let c = Arc::new(random_category(&mut r, &p, &lim).unwrap());
            let sig = random_sig(&mut r, 3);
            random_functor(&mut r, &c, sig, &p, &lim).unwrap()
        };
        assert!(mk(7).functor().same_tables(mk(7).functor()));
    }
}
