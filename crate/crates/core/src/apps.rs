//! Weighted co/ends, weighted and diagonal Kan extensions, and n-ary Day convolution, all
//! computed as higher-arity co/ends of Set-valued functors.

use std::sync::Arc;

use crate::dinat::{enumerate_dinat, DinatPQ};
use crate::ends::{coend, end, CoendPQ, EndPQ};
use crate::error::{Error, Result};
use crate::fincat::{power_pq, Factor, FinCat, Functor, Mor, Obj, Sig};
use crate::functor::{
    enumerate_nat, hom_fiber, same_shape, tuple_source, tuple_target, FnIntegrand, Integrand,
    SetFunctor, SetFunctorPQ,
};
use crate::kusarigama::{hom_into, KanDirection};
use crate::setops::{decode_fn, encode_fn, fn_count, hom_set, product, FinFn, FinSet};
use crate::Limits;

/// A weight: a Set-valued functor of signature `(1,1)` (or `(2,2)` for weighted diagonal Kan
/// extensions).
pub type Weight = SetFunctorPQ;

fn arc<T: Integrand + 'static>(x: T) -> Arc<dyn Integrand> {
    Arc::new(x)
}

/// Pointwise product of integrands of one signature.
pub fn product_integrand(fs: &[Arc<dyn Integrand>], lim: &Limits) -> Result<FnIntegrand> {
    let first = fs
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty product".into()))?;
    let sig = first.sig();
    if fs
        .iter()
        .any(|f| f.sig() != sig || !same_shape(f.base(), first.base()))
    {
        return Err(Error::ShapeMismatch(
            "product of integrands of different shapes".into(),
        ));
    }
    let (f1, f2, lim) = (fs.to_vec(), fs.to_vec(), *lim);
    let c = first.base().clone();
    Ok(FnIntegrand::new(
        &c,
        sig,
        "product",
        move |t| {
            product(
                &f1.iter().map(|f| f.fiber(t)).collect::<Result<Vec<_>>>()?,
                &lim,
            )
        },
        move |m, e| {
            let c = f2[0].base();
            let (s, t) = (tuple_source(c, sig, m), tuple_target(c, sig, m));
            let rs = f2
                .iter()
                .map(|f| Ok(f.fiber(&s)?.len()))
                .collect::<Result<Vec<_>>>()?;
            let rt = f2
                .iter()
                .map(|f| Ok(f.fiber(&t)?.len()))
                .collect::<Result<Vec<_>>>()?;
            let d = crate::decode(e, &rs);
            let out = f2
                .iter()
                .zip(&d)
                .map(|(f, &x)| f.act(m, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(crate::encode(&out, &rt))
        },
    ))
}

/// `(∏ W_k) ⋔ D` of signature `(k+1, k+1)`: at `(A̲; B̲)` the functions
/// `∏ W_k(B_k; A_k) → D(A_{k+1}; B_{k+1})`.
pub fn weighted_end_integrand(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<FnIntegrand> {
    check_weights(ws, d)?;
    let k = ws.len();
    let sig = Sig::new(k + 1, k + 1);
    let (w1, w2, d1, d2, lim) = (ws.to_vec(), ws.to_vec(), d.clone(), d.clone(), *lim);
    let c = d.base().clone();
    let wfib = move |w: &[Arc<dyn Integrand>], t: &[Obj]| -> Result<Vec<FinSet>> {
        w.iter()
            .enumerate()
            .map(|(i, w)| w.fiber(&[t[k + 1 + i], t[i]]))
            .collect()
    };
    let wfib2 = wfib;
    Ok(FnIntegrand::new(
        &c,
        sig,
        "weighted end integrand",
        move |t| {
            hom_set(
                &product(&wfib(&w1, t)?, &lim)?,
                &d1.fiber(&[t[k], t[2 * k + 1]])?,
                &lim,
            )
        },
        move |m, phi| {
            let c = d2.base();
            let (s, t) = (tuple_source(c, sig, m), tuple_target(c, sig, m));
            let (ws_, wt) = (wfib2(&w2, &s)?, wfib2(&w2, &t)?);
            let rs: Vec<usize> = ws_.iter().map(FinSet::len).collect();
            let rt: Vec<usize> = wt.iter().map(FinSet::len).collect();
            let (ds, dt) = (
                d2.fiber(&[s[k], s[2 * k + 1]])?.len(),
                d2.fiber(&[t[k], t[2 * k + 1]])?.len(),
            );
            let table = decode_fn(phi, rs.iter().product(), ds);
            let mut out = Vec::with_capacity(rt.iter().product());
            for e in 0..rt.iter().product() {
                let d = crate::decode(e, &rt);
                let back = (0..k)
                    .map(|i| w2[i].act(&[m[k + 1 + i], m[i]], d[i]))
                    .collect::<Result<Vec<_>>>()?;
                out.push(d2.act(&[m[k], m[2 * k + 1]], table[crate::encode(&back, &rs)])?);
            }
            Ok(encode_fn(&out, dt))
        },
    ))
}

/// `(∏ W_k) ⊙ D` of signature `(k+1, k+1)`: at `(A̲; B̲)` the set
/// `∏ W_k(A_k; B_k) × D(A_{k+1}; B_{k+1})`.
pub fn weighted_coend_integrand(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<FnIntegrand> {
    check_weights(ws, d)?;
    let k = ws.len();
    let sig = Sig::new(k + 1, k + 1);
    let mut parts: Vec<(Arc<dyn Integrand>, [usize; 2])> = ws
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), [i, k + 1 + i]))
        .collect();
    parts.push((d.clone(), [k, 2 * k + 1]));
    Ok(sliced_product(
        d.base(),
        sig,
        parts,
        "weighted coend integrand",
        lim,
    ))
}

fn check_weights(ws: &[Arc<dyn Integrand>], d: &Arc<dyn Integrand>) -> Result<()> {
    let one = Sig::new(1, 1);
    if d.sig() != one
        || ws
            .iter()
            .any(|w| w.sig() != one || !same_shape(w.base(), d.base()))
    {
        return Err(Error::ShapeMismatch(
            "weights and integrand must be (1,1) on one category".into(),
        ));
    }
    Ok(())
}

/// A product of integrands, each reading the listed slots of a larger signature.
fn sliced_product(
    base: &Arc<FinCat>,
    sig: Sig,
    parts: Vec<(
        Arc<dyn Integrand>,
        impl AsRef<[usize]> + Clone + Send + Sync + 'static,
    )>,
    name: &str,
    lim: &Limits,
) -> FnIntegrand {
    let (p1, p2, lim) = (parts.clone(), parts, *lim);
    let pick =
        |t: &[usize], slots: &[usize]| -> Vec<usize> { slots.iter().map(|&i| t[i]).collect() };
    FnIntegrand::new(
        base,
        sig,
        name.to_string(),
        move |t| {
            product(
                &p1.iter()
                    .map(|(f, sl)| f.fiber(&pick(t, sl.as_ref())))
                    .collect::<Result<Vec<_>>>()?,
                &lim,
            )
        },
        move |m, e| {
            let c = p2[0].0.base();
            let (s, t) = (tuple_source(c, sig, m), tuple_target(c, sig, m));
            let rs = p2
                .iter()
                .map(|(f, sl)| Ok(f.fiber(&pick(&s, sl.as_ref()))?.len()))
                .collect::<Result<Vec<_>>>()?;
            let rt = p2
                .iter()
                .map(|(f, sl)| Ok(f.fiber(&pick(&t, sl.as_ref()))?.len()))
                .collect::<Result<Vec<_>>>()?;
            let d = crate::decode(e, &rs);
            let out = p2
                .iter()
                .zip(&d)
                .map(|((f, sl), &x)| f.act(&pick(m, sl.as_ref()), x))
                .collect::<Result<Vec<_>>>()?;
            Ok(crate::encode(&out, &rt))
        },
    )
}

/// The end of `D` weighted by `W`, as the `(2,2)`-end of `W ⋔ D`.
pub fn weighted_end(w: &Weight, d: &SetFunctorPQ, lim: &Limits) -> Result<EndPQ> {
    weighted_end_n(&[arc(w.clone())], &arc(d.clone()), lim)
}

/// The coend of `D` weighted by `W`, as the `(2,2)`-coend of `W ⊙ D`.
pub fn weighted_coend(w: &Weight, d: &SetFunctorPQ, lim: &Limits) -> Result<CoendPQ> {
    weighted_coend_n(&[arc(w.clone())], &arc(d.clone()), lim)
}

/// The end weighted by several weights, as a `(k+1, k+1)`-end.
pub fn weighted_end_n(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<EndPQ> {
    end(&weighted_end_integrand(ws, d, lim)?, lim)
}

pub fn weighted_coend_n(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<CoendPQ> {
    coend(&weighted_coend_integrand(ws, d, lim)?, lim)
}

/// Matches the weighted end against the dinaturals `∏ W_k ⇒̈ D`: every end element, read as a
/// family of functions, must be one of them and every one must occur once. Returns the count.
pub fn check_weighted_end(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<usize> {
    let e = weighted_end_n(ws, d, lim)?;
    let pw = arc(product_integrand(ws, lim)?);
    let mut direct: Vec<Vec<Vec<usize>>> = enumerate_dinat(&pw, d, lim)?
        .iter()
        .map(DinatPQ::tables)
        .collect();
    let n = d.base().n_objects();
    let mut from_end = Vec::with_capacity(e.len());
    for x in 0..e.len() {
        let fam = e.family(x);
        let tables = (0..n)
            .map(|a| {
                Ok(decode_fn(
                    fam[a],
                    pw.fiber(&[a, a])?.len(),
                    d.fiber(&[a, a])?.len(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        from_end.push(tables);
    }
    from_end.sort();
    direct.sort();
    if from_end != direct {
        return Err(Error::BijectionFailure(format!(
            "weighted end has {} elements, {} weighted dinaturals",
            from_end.len(),
            direct.len()
        )));
    }
    Ok(e.len())
}

/// `|Set(∫^{[W]} D, X)|` against `|DiNat(∏ W, Set(D, X))|` for a test set `X`.
pub fn weighted_coend_counts(
    ws: &[Arc<dyn Integrand>],
    d: &Arc<dyn Integrand>,
    x: &FinSet,
    lim: &Limits,
) -> Result<(u128, usize)> {
    let co = weighted_coend_n(ws, d, lim)?;
    let pw = arc(product_integrand(ws, lim)?);
    let hx = arc(hom_into(d, x, lim));
    Ok((
        fn_count(co.len(), x.len()),
        enumerate_dinat(&pw, &hx, lim)?.len(),
    ))
}

/// A Set-valued functor on `cat` whose value at each object is a coend, with the action of a
/// morphism given on representatives.
fn pointwise_coend(
    cat: &Arc<FinCat>,
    coends: Vec<CoendPQ>,
    push: impl Fn(Mor, Obj, usize) -> usize,
) -> Result<SetFunctor> {
    let fibers: Vec<FinSet> = coends.iter().map(|c| c.carrier.carrier.clone()).collect();
    let maps = (0..cat.n_morphisms())
        .map(|v| {
            let (b, b2) = (cat.src(v), cat.dst(v));
            let table = coends[b]
                .carrier
                .reps
                .iter()
                .map(|&(a, e)| coends[b2].class_of(a, push(v, a, e)))
                .collect();
            FinFn::new(fibers[b].clone(), fibers[b2].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    SetFunctor::new(cat.clone(), fibers, maps)
}

/// The dual: values are ends, and the action transforms each family component.
fn pointwise_end(
    cat: &Arc<FinCat>,
    ends: Vec<EndPQ>,
    pull: impl Fn(Mor, Obj, usize) -> usize,
) -> Result<SetFunctor> {
    let fibers: Vec<FinSet> = ends.iter().map(|c| c.carrier.carrier.clone()).collect();
    let maps = (0..cat.n_morphisms())
        .map(|v| {
            let (b, b2) = (cat.src(v), cat.dst(v));
            let table = (0..ends[b].len())
                .map(|e| {
                    let comps: Vec<usize> = ends[b]
                        .family(e)
                        .into_iter()
                        .enumerate()
                        .map(|(a, x)| pull(v, a, x))
                        .collect();
                    ends[b2].find_family(&comps).ok_or_else(|| {
                        Error::LawFailure("pointwise end action leaves the end".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            FinFn::new(fibers[b].clone(), fibers[b2].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    SetFunctor::new(cat.clone(), fibers, maps)
}

/// `hom_B(K t, b)` (contravariant in `t`, so of signature dual to `ksig` with `K`'s covariant
/// slots first) or `hom_B(b, K t)` (of signature `ksig`), for `K : C^{ksig} → B`.
fn hom_k_integrand(
    k: &Functor,
    kbase: &Arc<FinCat>,
    ksig: Sig,
    b: Obj,
    into_b: bool,
) -> impl Integrand + 'static {
    let (k1, k2) = (k.clone(), k.clone());
    let kp = k.source.clone();
    let kp2 = kp.clone();
    let sig = if into_b { ksig.dual() } else { ksig };
    let to_k = move |t: &[usize]| -> Vec<usize> {
        if into_b {
            t[ksig.q..].iter().chain(&t[..ksig.q]).copied().collect()
        } else {
            t.to_vec()
        }
    };
    FnIntegrand::new(
        kbase,
        sig,
        "hom through K",
        move |t| {
            let o = k1.obj[kp.encode_obj(&to_k(t))];
            Ok(if into_b {
                hom_fiber(&k1.target, o, b)
            } else {
                hom_fiber(&k1.target, b, o)
            })
        },
        move |m, h| {
            let km = k2.mor[kp2.encode_mor(&to_k(m))];
            let bc = &k2.target;
            Ok(if into_b {
                bc.hom_pos(bc.compose(bc.hom(bc.dst(km), b)[h], km))
            } else {
                bc.hom_pos(bc.compose(km, bc.hom(b, bc.src(km))[h]))
            })
        },
    )
}

/// Left (right) Kan extension of `F : C → Set` along `K : C → B` weighted by `W`: the
/// `(2,2)`-coend of `(W × hom(K−, b)) ⊙ F` (the `(2,2)`-end of `(W × hom(b, K−)) ⋔ F`).
pub fn weighted_kan(
    f: &SetFunctor,
    k: &Functor,
    w: &Weight,
    dir: KanDirection,
    lim: &Limits,
) -> Result<SetFunctor> {
    let c = w.base().clone();
    if !same_shape(f.domain(), &c) || !same_shape(&k.source, &c) {
        return Err(Error::ShapeMismatch(
            "weighted Kan extension: functor, direction and weight disagree".into(),
        ));
    }
    let fc = arc(SetFunctorPQ::new(
        c.clone(),
        Sig::new(0, 1),
        f.transport(Arc::new(power_pq(&c, Sig::new(0, 1), lim)?))?,
    )?);
    let kp = Functor {
        source: Arc::new(power_pq(&c, Sig::new(0, 1), lim)?),
        ..k.clone()
    };
    let bc = k.target.clone();
    let wa = arc(w.clone());
    let sig = Sig::new(2, 2);
    match dir {
        KanDirection::Left => {
            let ints: Vec<FnIntegrand> = (0..bc.n_objects())
                .map(|b| {
                    let hk = arc(hom_k_integrand(&kp, &c, Sig::new(0, 1), b, true));
                    sliced_product(
                        &c,
                        sig,
                        vec![
                            (wa.clone(), vec![0, 2]),
                            (hk, vec![1]),
                            (fc.clone(), vec![3]),
                        ],
                        "weighted Lan",
                        lim,
                    )
                })
                .collect();
            let coends = ints
                .iter()
                .map(|d| coend(d, lim))
                .collect::<Result<Vec<_>>>()?;
            pointwise_coend(&bc, coends, |v, a, e| {
                let (b, b2) = (bc.src(v), bc.dst(v));
                let ka = k.obj[a];
                let r = [
                    w.fiber_at(&[a, a]).len(),
                    bc.hom_len(ka, b),
                    f.fiber(a).len(),
                ];
                let mut d = crate::decode(e, &r);
                d[1] = bc.hom_pos(bc.compose(v, bc.hom(ka, b)[d[1]]));
                crate::encode(&d, &[r[0], bc.hom_len(ka, b2), r[2]])
            })
        }
        KanDirection::Right => {
            let ints: Vec<FnIntegrand> = (0..bc.n_objects())
                .map(|b| {
                    let hk = arc(hom_k_integrand(&kp, &c, Sig::new(0, 1), b, false));
                    ends_hom_integrand(
                        &c,
                        Sig::new(2, 2),
                        vec![(wa.clone(), vec![2, 0]), (hk, vec![1])],
                        fc.clone(),
                        vec![3],
                        lim,
                    )
                })
                .collect();
            let ends = ints
                .iter()
                .map(|d| end(d, lim))
                .collect::<Result<Vec<_>>>()?;
            pointwise_end(&bc, ends, |v, a, phi| {
                let (b, b2) = (bc.src(v), bc.dst(v));
                let ka = k.obj[a];
                let wl = w.fiber_at(&[a, a]).len();
                let fl = f.fiber(a).len();
                let t = decode_fn(phi, wl * bc.hom_len(b, ka), fl);
                let r2 = [wl, bc.hom_len(b2, ka)];
                let out: Vec<usize> = (0..r2[0] * r2[1])
                    .map(|e| {
                        let d = crate::decode(e, &r2);
                        let h = bc.compose(bc.hom(b2, ka)[d[1]], v);
                        t[crate::encode(&[d[0], bc.hom_pos(h)], &[wl, bc.hom_len(b, ka)])]
                    })
                    .collect();
                encode_fn(&out, fl)
            })
        }
    }
}

/// `Set(∏ dom_i(t|slots_i), cod(t|slots))`. Each domain part reads its slots with reversed
/// variance, so its action along `m` runs from the fiber at the target of `m` to the fiber at
/// the source.
fn ends_hom_integrand(
    base: &Arc<FinCat>,
    sig: Sig,
    dom: Vec<(Arc<dyn Integrand>, Vec<usize>)>,
    cod: Arc<dyn Integrand>,
    slots: Vec<usize>,
    lim: &Limits,
) -> FnIntegrand {
    let (d1, d2, c1, c2, s1, s2, lim) = (
        dom.clone(),
        dom,
        cod.clone(),
        cod,
        slots.clone(),
        slots,
        *lim,
    );
    let pick = |t: &[usize], sl: &[usize]| -> Vec<usize> { sl.iter().map(|&i| t[i]).collect() };
    let radices =
        move |d: &[(Arc<dyn Integrand>, Vec<usize>)], t: &[usize]| -> Result<Vec<usize>> {
            d.iter()
                .map(|(f, sl)| Ok(f.fiber(&pick(t, sl))?.len()))
                .collect()
        };
    FnIntegrand::new(
        base,
        sig,
        "hom integrand",
        move |t| {
            let parts = d1
                .iter()
                .map(|(f, sl)| f.fiber(&pick(t, sl)))
                .collect::<Result<Vec<_>>>()?;
            hom_set(&product(&parts, &lim)?, &c1.fiber(&pick(t, &s1))?, &lim)
        },
        move |m, phi| {
            let c = c2.base();
            let (s, t) = (tuple_source(c, sig, m), tuple_target(c, sig, m));
            let (rs, rt) = (radices(&d2, &s)?, radices(&d2, &t)?);
            let table = decode_fn(phi, rs.iter().product(), c2.fiber(&pick(&s, &s2))?.len());
            let mut out = Vec::new();
            for z in 0..rt.iter().product() {
                let dz = crate::decode(z, &rt);
                let back = d2
                    .iter()
                    .zip(&dz)
                    .map(|((f, sl), &x)| f.act(&pick(m, sl), x))
                    .collect::<Result<Vec<_>>>()?;
                out.push(c2.act(&pick(m, &s2), table[crate::encode(&back, &rs)])?);
            }
            Ok(encode_fn(&out, c2.fiber(&pick(&t, &s2))?.len()))
        },
    )
}

/// `|Nat(Lan^{[W]}_K F, G)|` against the weighted natural transformations `Nat^{[W]}(F, G∘K)`
/// (for right: `|Nat(G, Ran^{[W]}_K F)|` against `Nat^{[W]}(G∘K, F)`).
pub fn weighted_kan_counts(
    f: &SetFunctor,
    k: &Functor,
    w: &Weight,
    g: &SetFunctor,
    dir: KanDirection,
    lim: &Limits,
) -> Result<(usize, usize)> {
    let c = w.base().clone();
    let ext = weighted_kan(f, k, w, dir, lim)?;
    let gk = g.pullback(k)?;
    let (src, dst) = match dir {
        KanDirection::Left => (f.clone(), gk),
        KanDirection::Right => (gk, f.clone()),
    };
    let h = two_variable_hom(&c, &src, &dst, lim)?;
    let weighted = check_weighted_end(&[arc(w.clone())], &arc(h), lim)?;
    let nats = match dir {
        KanDirection::Left => enumerate_nat(&ext, g, lim)?.len(),
        KanDirection::Right => enumerate_nat(g, &ext, lim)?.len(),
    };
    Ok((nats, weighted))
}

/// `(A; B) ↦ Set(F A, G B)` for functors on `C`.
pub fn two_variable_hom(
    c: &Arc<FinCat>,
    f: &SetFunctor,
    g: &SetFunctor,
    lim: &Limits,
) -> Result<SetFunctorPQ> {
    let (f1, g1, f2, g2) = (f.clone(), g.clone(), f.clone(), g.clone());
    SetFunctorPQ::from_fn(
        c,
        Sig::new(1, 1),
        move |t| {
            hom_set(f1.fiber(t[0]), g1.fiber(t[1]), &Limits::default())
                .unwrap_or_else(|_| FinSet::empty())
        },
        move |m, phi| {
            let table = decode_fn(
                phi,
                f2.fiber(f2.domain().dst(m[0])).len(),
                g2.fiber(g2.domain().src(m[1])).len(),
            );
            let out: Vec<usize> = (0..f2.fiber(f2.domain().src(m[0])).len())
                .map(|x| g2.map(m[1]).apply(table[f2.map(m[0]).apply(x)]))
                .collect();
            encode_fn(&out, g2.fiber(g2.domain().dst(m[1])).len())
        },
        lim,
    )
}

/// How the two free pairs of the `(2,2)` diagonal Kan integrand are split between `K` and `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pairing {
    /// `K` reads `(B₁; A₁)` and `F` reads `(A₂; B₂)`.
    #[default]
    Literal,
    /// `K` reads `(B₂; A₂)` and `F` reads `(A₁; B₁)`. A relabeling of slots, kept for comparison.
    Toggled,
}

/// Diagonal Kan extension of `F : C^op × C → Set` along `K : C^op × C → D`, with its
/// universal dinatural (from `F` to `DiLan ∘ K`, or from `DiRan ∘ K` to `F`).
pub struct DiagonalKan {
    pub functor: SetFunctor,
    pub universal: Vec<FinFn>,
}

/// `DiLan_K F` as the `(2,2)`-coend of `hom(K(B; A), d) × F(A'; B')`, or `DiRan_K F` as the
/// `(2,2)`-end of `Set(hom(d, K(B; A)), F(A'; B'))`.
pub fn diagonal_kan(
    f: &SetFunctorPQ,
    k: &Functor,
    dir: KanDirection,
    pairing: Pairing,
    lim: &Limits,
) -> Result<DiagonalKan> {
    diagonal_kan_weighted(f, k, None, dir, pairing, lim)
}

/// With a weight `W` of signature `(2,2)`: the `(4,4)`-co/end of `(W × hom(K, −)) ⊙ F` and
/// its dual.
pub fn weighted_diagonal_kan(
    f: &SetFunctorPQ,
    k: &Functor,
    w: &Weight,
    dir: KanDirection,
    lim: &Limits,
) -> Result<DiagonalKan> {
    if w.sig() != Sig::new(2, 2) {
        return Err(Error::ShapeMismatch(
            "diagonal Kan weight must have signature (2,2)".into(),
        ));
    }
    diagonal_kan_weighted(f, k, Some(w), dir, Pairing::Literal, lim)
}

fn diagonal_kan_weighted(
    f: &SetFunctorPQ,
    k: &Functor,
    w: Option<&Weight>,
    dir: KanDirection,
    pairing: Pairing,
    lim: &Limits,
) -> Result<DiagonalKan> {
    let c = f.base().clone();
    if f.sig() != Sig::new(1, 1) || !same_shape(&k.source, f.power()) {
        return Err(Error::ShapeMismatch(
            "diagonal Kan extension needs F and K on C^op × C".into(),
        ));
    }
    let dc = k.target.clone();
    let nw = w.map_or(0, |w| w.sig().p);
    let n = nw + 2;
    let sig = Sig::new(n, n);
    // Slots: contra A_0..A_{n-1}, cov B_0..B_{n-1}; the weight takes the first `nw` pairs.
    let (kp, fp) = match pairing {
        Pairing::Literal => (nw, nw + 1),
        Pairing::Toggled => (nw + 1, nw),
    };
    let kslots = vec![kp, n + kp];
    let fslots = vec![fp, n + fp];
    let wslots: Vec<usize> = (0..nw).chain(n..n + nw).collect();
    let fa = arc(f.clone());
    let kk = Functor {
        source: f.power().clone(),
        ..k.clone()
    };
    let ksig = Sig::new(1, 1);
    let nd = dc.n_objects();
    let id_k = |a: Obj| dc.identity(kk.obj[f.diag(a)]);
    match dir {
        KanDirection::Left => {
            let ints: Vec<FnIntegrand> = (0..nd)
                .map(|d| {
                    let hk = arc(hom_k_integrand(&kk, &c, ksig, d, true));
                    let mut parts = Vec::new();
                    if let Some(w) = w {
                        parts.push((arc(w.clone()), wslots.clone()));
                    }
                    parts.push((hk, kslots.clone()));
                    parts.push((fa.clone(), fslots.clone()));
                    sliced_product(&c, sig, parts, "diagonal Lan", lim)
                })
                .collect();
            let coends = ints
                .iter()
                .map(|d| coend(d, lim))
                .collect::<Result<Vec<_>>>()?;
            let radices = |d: Obj, a: Obj| -> Vec<usize> {
                let mut r = Vec::new();
                if let Some(w) = w {
                    r.push(w.fiber_at(&[a; 4]).len());
                }
                r.push(dc.hom_len(kk.obj[f.diag(a)], d));
                r.push(f.fiber_at(&[a, a]).len());
                r
            };
            let kpos = usize::from(w.is_some());
            let universal = if w.is_some() {
                Vec::new()
            } else {
                (0..c.n_objects())
                    .map(|a| {
                        let d = kk.obj[f.diag(a)];
                        let dom = f.fiber_at(&[a, a]).clone();
                        let table = (0..dom.len())
                            .map(|x| {
                                let r = radices(d, a);
                                let mut digits = vec![0; r.len()];
                                digits[kpos] = dc.hom_pos(id_k(a));
                                digits[kpos + 1] = x;
                                coends[d].class_of(a, crate::encode(&digits, &r))
                            })
                            .collect();
                        FinFn::new(dom, coends[d].carrier.carrier.clone(), table)
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let cs = coends.clone();
            let functor = pointwise_coend(&dc, cs, |v, a, e| {
                let (d, d2) = (dc.src(v), dc.dst(v));
                let r = radices(d, a);
                let mut digits = crate::decode(e, &r);
                let ka = kk.obj[f.diag(a)];
                digits[kpos] = dc.hom_pos(dc.compose(v, dc.hom(ka, d)[digits[kpos]]));
                crate::encode(&digits, &radices(d2, a))
            })?;
            Ok(DiagonalKan { functor, universal })
        }
        KanDirection::Right => {
            let ints: Vec<FnIntegrand> = (0..nd)
                .map(|d| {
                    let hk = arc(hom_k_integrand(&kk, &c, ksig, d, false));
                    let mut parts: Vec<(Arc<dyn Integrand>, Vec<usize>)> = Vec::new();
                    if let Some(w) = w {
                        // Inside Set(−, ·) the weight is read with its slots exchanged.
                        let ws: Vec<usize> = (n..n + nw).chain(0..nw).collect();
                        parts.push((arc(w.clone()), ws));
                    }
                    parts.push((hk, vec![n + kp, kp]));
                    ends_hom_integrand(&c, sig, parts, fa.clone(), fslots.clone(), lim)
                })
                .collect();
            let ends = ints
                .iter()
                .map(|d| end(d, lim))
                .collect::<Result<Vec<_>>>()?;
            let wl = |a: Obj| w.map_or(1, |w| w.fiber_at(&[a; 4]).len());
            let universal = if w.is_some() {
                Vec::new()
            } else {
                (0..c.n_objects())
                    .map(|a| {
                        let d = kk.obj[f.diag(a)];
                        let fl = f.fiber_at(&[a, a]).len();
                        let table = (0..ends[d].len())
                            .map(|e| {
                                let t = decode_fn(ends[d].family(e)[a], dc.hom_len(d, d), fl);
                                t[dc.hom_pos(dc.identity(d))]
                            })
                            .collect();
                        FinFn::new(
                            ends[d].carrier.carrier.clone(),
                            f.fiber_at(&[a, a]).clone(),
                            table,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let functor = pointwise_end(&dc, ends, |v, a, phi| {
                let (d, d2) = (dc.src(v), dc.dst(v));
                let ka = kk.obj[f.diag(a)];
                let fl = f.fiber_at(&[a, a]).len();
                let t = decode_fn(phi, wl(a) * dc.hom_len(d, ka), fl);
                let r2 = [wl(a), dc.hom_len(d2, ka)];
                let out: Vec<usize> = (0..r2[0] * r2[1])
                    .map(|e| {
                        let dg = crate::decode(e, &r2);
                        let h = dc.compose(dc.hom(d2, ka)[dg[1]], v);
                        t[crate::encode(&[dg[0], dc.hom_pos(h)], &[wl(a), dc.hom_len(d, ka)])]
                    })
                    .collect();
                encode_fn(&out, fl)
            })?;
            Ok(DiagonalKan { functor, universal })
        }
    }
}

/// `|Nat(DiLan_K F, G)|` and `|DiNat(F, G∘K)|` (right: `|Nat(G, DiRan_K F)|`, `|DiNat(G∘K, F)|`),
/// with the bijection realized by composing with the universal family and checked.
pub fn diagonal_kan_counts(
    f: &SetFunctorPQ,
    k: &Functor,
    g: &SetFunctor,
    dir: KanDirection,
    lim: &Limits,
) -> Result<(usize, usize)> {
    let dk = diagonal_kan(f, k, dir, Pairing::Literal, lim)?;
    let c = f.base().clone();
    let kk = Functor {
        source: f.power().clone(),
        ..k.clone()
    };
    let gk = arc(SetFunctorPQ::new(
        c.clone(),
        Sig::new(1, 1),
        g.pullback(&kk)?,
    )?);
    let fa = arc(f.clone());
    let (nats, dinats) = match dir {
        KanDirection::Left => (
            enumerate_nat(&dk.functor, g, lim)?,
            enumerate_dinat(&fa, &gk, lim)?,
        ),
        KanDirection::Right => (
            enumerate_nat(g, &dk.functor, lim)?,
            enumerate_dinat(&gk, &fa, lim)?,
        ),
    };
    let mut direct: Vec<Vec<Vec<usize>>> = dinats.iter().map(DinatPQ::tables).collect();
    let mut composed: Vec<Vec<Vec<usize>>> = nats
        .iter()
        .map(|al| {
            (0..c.n_objects())
                .map(|a| {
                    let d = kk.obj[f.diag(a)];
                    match dir {
                        KanDirection::Left => al.components[d].after(&dk.universal[a]).table,
                        KanDirection::Right => dk.universal[a].after(&al.components[d]).table,
                    }
                })
                .collect()
        })
        .collect();
    composed.sort();
    if composed.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NonUnique(
            "two naturals give the same dinatural".into(),
        ));
    }
    direct.sort();
    if composed != direct {
        return Err(Error::BijectionFailure(format!(
            "{} naturals against {} dinaturals",
            nats.len(),
            dinats.len()
        )));
    }
    Ok((nats.len(), dinats.len()))
}

/// Fiber sizes of the hom-weighted left Kan extension of `F` along `K` next to those of the
/// diagonal left Kan extension of `F` along `K`, both read through the covariant slot. The two
/// are expected to agree; nothing here proves it, so callers record rather than assert.
pub fn hom_weighted_vs_diagonal(
    f: &SetFunctor,
    k: &Functor,
    lim: &Limits,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let c = f.domain().clone();
    let hom = SetFunctorPQ::hom(&c, lim)?;
    let weighted = weighted_kan(f, k, &hom, KanDirection::Left, lim)?;
    let f1 = f.clone();
    let fc = SetFunctorPQ::from_fn(
        &c,
        Sig::new(1, 1),
        |t| f.fiber(t[1]).clone(),
        move |m, x| f1.map(m[1]).apply(x),
        lim,
    )?;
    let power = fc.power().clone();
    let kc = Functor {
        source: power.clone(),
        target: k.target.clone(),
        obj: (0..power.n_objects())
            .map(|o| k.obj[power.decode_obj(o)[1]])
            .collect(),
        mor: (0..power.n_morphisms())
            .map(|m| k.mor[power.decode_mor(m)[1]])
            .collect(),
    };
    let diagonal = diagonal_kan(&fc, &kc, KanDirection::Left, Pairing::Literal, lim)?.functor;
    let sizes = |g: &SetFunctor| g.fibers().iter().map(FinSet::len).collect::<Vec<_>>();
    Ok((sizes(&weighted), sizes(&diagonal)))
}

/// A strict monoidal structure on a finite category.
#[derive(Clone, Debug)]
pub struct MonoidalFinCat {
    pub base: Arc<FinCat>,
    /// `base × base → base`.
    pub tensor: Functor,
    pub unit: Obj,
}

impl MonoidalFinCat {
    /// Validates the tensor as a functor and strict associativity and unit laws as table
    /// equalities on objects and morphisms.
    pub fn new(
        base: &Arc<FinCat>,
        tensor: Functor,
        unit: Obj,
        lim: &Limits,
    ) -> Result<MonoidalFinCat> {
        let sq = FinCat::product(
            vec![
                Factor {
                    cat: base.clone(),
                    op: false,
                },
                Factor {
                    cat: base.clone(),
                    op: false,
                },
            ],
            lim,
        )?;
        if !same_shape(&tensor.source, &sq) || !same_shape(&tensor.target, base) {
            return Err(Error::NotStrictMonoidal(
                "tensor is not a functor C × C → C".into(),
            ));
        }
        tensor
            .validate()
            .map_err(|e| Error::NotStrictMonoidal(e.to_string()))?;
        let m = MonoidalFinCat {
            base: base.clone(),
            tensor,
            unit,
        };
        let c = base.as_ref();
        for a in 0..c.n_objects() {
            if m.obj2(unit, a) != a || m.obj2(a, unit) != a {
                return Err(Error::NotStrictMonoidal(format!(
                    "unit law fails at {}",
                    c.object_name(a)
                )));
            }
            for b in 0..c.n_objects() {
                for d in 0..c.n_objects() {
                    if m.obj2(m.obj2(a, b), d) != m.obj2(a, m.obj2(b, d)) {
                        return Err(Error::NotStrictMonoidal(format!(
                            "associativity fails on objects at {}",
                            c.object_name(a)
                        )));
                    }
                }
            }
        }
        let idu = c.identity(unit);
        for f in 0..c.n_morphisms() {
            if m.mor2(idu, f) != f || m.mor2(f, idu) != f {
                return Err(Error::NotStrictMonoidal(format!(
                    "unit law fails at {}",
                    c.mor_name(f)
                )));
            }
            for g in 0..c.n_morphisms() {
                for h in 0..c.n_morphisms() {
                    if m.mor2(m.mor2(f, g), h) != m.mor2(f, m.mor2(g, h)) {
                        return Err(Error::NotStrictMonoidal(format!(
                            "associativity fails at {}",
                            c.mor_name(f)
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// The one-object category of a commutative monoid, tensored by multiplication.
    pub fn commutative_monoid(c: &Arc<FinCat>, lim: &Limits) -> Result<MonoidalFinCat> {
        if c.n_objects() != 1 {
            return Err(Error::NotStrictMonoidal("not a one-object category".into()));
        }
        let sq = Arc::new(FinCat::product(
            vec![
                Factor {
                    cat: c.clone(),
                    op: false,
                },
                Factor {
                    cat: c.clone(),
                    op: false,
                },
            ],
            lim,
        )?);
        let mor = (0..sq.n_morphisms())
            .map(|m| {
                let d = sq.decode_mor(m);
                c.compose(d[0], d[1])
            })
            .collect();
        MonoidalFinCat::new(
            c,
            Functor {
                source: sq,
                target: c.clone(),
                obj: vec![0],
                mor,
            },
            0,
            lim,
        )
    }

    pub fn obj2(&self, a: Obj, b: Obj) -> Obj {
        self.tensor.obj[self.tensor.source.encode_obj(&[a, b])]
    }

    pub fn mor2(&self, f: Mor, g: Mor) -> Mor {
        self.tensor.mor[self.tensor.source.encode_mor(&[f, g])]
    }

    /// `A_1 ⊗ … ⊗ A_n`, the unit for `n = 0`.
    pub fn obj_n(&self, xs: &[Obj]) -> Obj {
        xs.iter().fold(self.unit, |acc, &x| self.obj2(acc, x))
    }

    pub fn mor_n(&self, fs: &[Mor]) -> Mor {
        fs.iter()
            .fold(self.base.identity(self.unit), |acc, &f| self.mor2(acc, f))
    }
}

/// `⊗_n(F_1, …, F_n)(X)`: the `(n,n)`-coend of `∏ F_k(A_k) × C(X, B_1 ⊗ … ⊗ B_n)`. Presheaves
/// are functors of signature `(1,0)`.
pub fn day_convolution(
    m: &MonoidalFinCat,
    fs: &[SetFunctorPQ],
    lim: &Limits,
) -> Result<SetFunctorPQ> {
    let c = m.base.clone();
    let n = fs.len();
    if n == 0
        || fs
            .iter()
            .any(|f| f.sig() != Sig::new(1, 0) || !same_shape(f.base(), &c))
    {
        return Err(Error::ShapeMismatch(
            "Day convolution takes one or more presheaves on the base".into(),
        ));
    }
    let sig = Sig::new(n, n);
    let coends = (0..c.n_objects())
        .map(|x| {
            let (fs1, fs2, m1, m2, lim) = (fs.to_vec(), fs.to_vec(), m.clone(), m.clone(), *lim);
            let d = FnIntegrand::new(
                &c,
                sig,
                "Day integrand",
                move |t| {
                    let mut parts: Vec<FinSet> = fs1
                        .iter()
                        .enumerate()
                        .map(|(k, f)| f.fiber_at(&[t[k]]).clone())
                        .collect();
                    parts.push(hom_fiber(&m1.base, x, m1.obj_n(&t[n..])));
                    product(&parts, &lim)
                },
                move |mm, e| {
                    let c = &m2.base;
                    let (s, t) = (tuple_source(c, sig, mm), tuple_target(c, sig, mm));
                    let radices = |t: &[Obj]| -> Vec<usize> {
                        fs2.iter()
                            .enumerate()
                            .map(|(k, f)| f.fiber_at(&[t[k]]).len())
                            .chain([c.hom_len(x, m2.obj_n(&t[n..]))])
                            .collect()
                    };
                    let mut d = crate::decode(e, &radices(&s));
                    for (k, f) in fs2.iter().enumerate() {
                        d[k] = f.map_at(&[mm[k]]).apply(d[k]);
                    }
                    let h = c.hom(x, m2.obj_n(&s[n..]))[d[n]];
                    d[n] = c.hom_pos(c.compose(m2.mor_n(&mm[n..]), h));
                    Ok(crate::encode(&d, &radices(&t)))
                },
            );
            coend(&d, &lim)
        })
        .collect::<Result<Vec<_>>>()?;
    let radices = |x: Obj, a: Obj| -> Vec<usize> {
        fs.iter()
            .map(|f| f.fiber_at(&[a]).len())
            .chain([c.hom_len(x, m.obj_n(&vec![a; n]))])
            .collect()
    };
    SetFunctorPQ::from_fn(
        &c,
        Sig::new(1, 0),
        |t| coends[t[0]].carrier.carrier.clone(),
        |mm, k| {
            // u : X' → X acts F(X) → F(X') by precomposing the hom component.
            let u = mm[0];
            let (x, x2) = (c.dst(u), c.src(u));
            let (a, e) = coends[x].carrier.reps[k];
            let mut d = crate::decode(e, &radices(x, a));
            let h = c.hom(x, m.obj_n(&vec![a; n]))[d[n]];
            d[n] = c.hom_pos(c.compose(h, u));
            coends[x2].class_of(a, crate::encode(&d, &radices(x2, a)))
        },
        lim,
    )
}

/// Checks `⊗_1(F) ≅ F` by `[A, (x, h)] ↦ F(h)(x)`: well defined, bijective and natural.
pub fn check_day_unary(m: &MonoidalFinCat, f: &SetFunctorPQ, lim: &Limits) -> Result<()> {
    let c = m.base.clone();
    let day = day_convolution(m, std::slice::from_ref(f), lim)?;
    let mut maps = Vec::with_capacity(c.n_objects());
    for x in 0..c.n_objects() {
        let fib = day.fiber_at(&[x]);
        let table: Vec<usize> = (0..fib.len())
            .map(|k| {
                // Recompute from the class label's representative: (A, (x, h)).
                let rep = day_rep(m, f, x, k, lim)?;
                let (a, xa, h) = rep;
                let _ = a;
                Ok(f.map_at(&[h]).apply(xa))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; f.fiber_at(&[x]).len()];
        for &y in &table {
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::BijectionFailure(
                    "unary Day convolution is not injective".into(),
                ));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BijectionFailure(
                "unary Day convolution is not surjective".into(),
            ));
        }
        maps.push(FinFn::new(fib.clone(), f.fiber_at(&[x]).clone(), table)?);
    }
    let power = day.power().clone();
    for u in 0..power.n_morphisms() {
        let (s, t) = (power.src(u), power.dst(u));
        let (du, fu) = (day.functor().map(u), f.functor().map(u));
        for k in 0..day.functor().fiber(s).len() {
            if maps[t].apply(du.apply(k)) != fu.apply(maps[s].apply(k)) {
                return Err(Error::NotNatural("unary Day comparison".into()));
            }
        }
    }
    Ok(())
}

/// Representative `(A, x, h)` of class `k` of `⊗_1(F)(X)`, checking that every member of the
/// class gives the same `F(h)(x)`.
fn day_rep(
    m: &MonoidalFinCat,
    f: &SetFunctorPQ,
    x: Obj,
    k: usize,
    lim: &Limits,
) -> Result<(Obj, usize, Mor)> {
    let c = &m.base;
    let fa = arc(f.clone());
    let d = day_unary_integrand(m, &fa, x, lim);
    let co = coend(&d, lim)?;
    let mut found = None;
    for a in 0..c.n_objects() {
        let r = [f.fiber_at(&[a]).len(), c.hom_len(x, m.obj_n(&[a]))];
        for e in 0..r[0] * r[1] {
            if co.class_of(a, e) != k {
                continue;
            }
            let dg = crate::decode(e, &r);
            let h = c.hom(x, m.obj_n(&[a]))[dg[1]];
            let v = f.map_at(&[h]).apply(dg[0]);
            match found {
                None => found = Some((a, dg[0], h, v)),
                Some((_, _, _, w)) if w != v => {
                    return Err(Error::LawFailure(
                        "unary Day comparison is not well defined".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    let (a, xa, h, _) = found.ok_or_else(|| Error::LawFailure("empty class".into()))?;
    Ok((a, xa, h))
}

fn day_unary_integrand(
    m: &MonoidalFinCat,
    f: &Arc<dyn Integrand>,
    x: Obj,
    lim: &Limits,
) -> FnIntegrand {
    let c = m.base.clone();
    let hx = arc(HomFrom { m: m.clone(), x });
    sliced_product(
        &c,
        Sig::new(1, 1),
        vec![(f.clone(), vec![0]), (hx, vec![1])],
        "unary Day",
        lim,
    )
}

/// `B ↦ C(X, B)` as a `(0,1)` integrand.
struct HomFrom {
    m: MonoidalFinCat,
    x: Obj,
}

impl Integrand for HomFrom {
    fn base(&self) -> &Arc<FinCat> {
        &self.m.base
    }

    fn sig(&self) -> Sig {
        Sig::new(0, 1)
    }

    fn fiber(&self, t: &[Obj]) -> Result<FinSet> {
        Ok(hom_fiber(&self.m.base, self.x, self.m.obj_n(t)))
    }

    fn act(&self, m: &[Mor], h: usize) -> Result<usize> {
        let c = &self.m.base;
        let g = c.hom(self.x, self.m.obj_n(&[c.src(m[0])]))[h];
        Ok(c.hom_pos(c.compose(self.m.mor_n(m), g)))
    }
}

/// The classical binary Day convolution `∫^{A,B} F(A) × G(B) × C(−, A ⊗ B)`, a coend over
/// `C × C`. Kept for comparison with `⊗_2`.
pub fn classical_day(
    m: &MonoidalFinCat,
    f: &SetFunctorPQ,
    g: &SetFunctorPQ,
    lim: &Limits,
) -> Result<Vec<usize>> {
    let c = m.base.clone();
    let pc = m.tensor.source.clone();
    let sig = Sig::new(1, 1);
    (0..c.n_objects())
        .map(|x| {
            let (f1, g1, f2, g2, m1, m2, pc1, pc2, lim) = (
                f.clone(),
                g.clone(),
                f.clone(),
                g.clone(),
                m.clone(),
                m.clone(),
                pc.clone(),
                pc.clone(),
                *lim,
            );
            let d = FnIntegrand::new(
                &pc,
                sig,
                "classical Day integrand",
                move |t| {
                    let (ab, ab2) = (pc1.decode_obj(t[0]), t[1]);
                    product(
                        &[
                            f1.fiber_at(&[ab[0]]).clone(),
                            g1.fiber_at(&[ab[1]]).clone(),
                            hom_fiber(&m1.base, x, m1.tensor.obj[ab2]),
                        ],
                        &lim,
                    )
                },
                move |mm, e| {
                    let c = &m2.base;
                    let (s, t) = (tuple_source(&pc2, sig, mm), tuple_target(&pc2, sig, mm));
                    let r = |t: &[Obj]| {
                        let ab = pc2.decode_obj(t[0]);
                        [
                            f2.fiber_at(&[ab[0]]).len(),
                            g2.fiber_at(&[ab[1]]).len(),
                            c.hom_len(x, m2.tensor.obj[t[1]]),
                        ]
                    };
                    let mut d = crate::decode(e, &r(&s));
                    let uv = pc2.decode_mor(mm[0]);
                    d[0] = f2.map_at(&[uv[0]]).apply(d[0]);
                    d[1] = g2.map_at(&[uv[1]]).apply(d[1]);
                    let h = c.hom(x, m2.tensor.obj[s[1]])[d[2]];
                    d[2] = c.hom_pos(c.compose(m2.tensor.mor[mm[1]], h));
                    Ok(crate::encode(&d, &r(&t)))
                },
            );
            Ok(coend(&d, &lim)?.len())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::{end_pq, Method};
    use crate::fincat::{acyclic_graph, monoid, poset};
    use crate::kusarigama::kan_extension;
    use crate::setops::colimit;

    fn arrow() -> Arc<FinCat> {
        Arc::new(
            acyclic_graph(
                "arrow",
                &["0".into(), "1".into()],
                &[("u".into(), "0".into(), "1".into())],
                &Limits::default(),
            )
            .unwrap(),
        )
    }

    fn chain3() -> Arc<FinCat> {
        let names: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        Arc::new(
            poset(
                "chain",
                &names,
                &[("0".into(), "1".into()), ("1".into(), "2".into())],
            )
            .unwrap(),
        )
    }

    fn z2() -> Arc<FinCat> {
        Arc::new(
            monoid(
                "Z2",
                &["1".into(), "a".into()],
                0,
                &[vec![0, 1], vec![1, 0]],
            )
            .unwrap(),
        )
    }

    /// `0 ↦ {0,1}`, `1 ↦ {0}` on the arrow, a covariant functor.
    fn two_to_one(c: &Arc<FinCat>) -> SetFunctor {
        let cc = c.clone();
        SetFunctor::from_fn(
            c.clone(),
            vec![FinSet::range(2), FinSet::range(1)],
            move |m, x| {
                if cc.is_identity(m) {
                    x
                } else {
                    0
                }
            },
        )
    }

    #[test]
    fn weighted_end_matches_dinaturals() {
        let lim = Limits::default();
        for c in [arrow(), chain3(), z2()] {
            let hom = arc(SetFunctorPQ::hom(&c, &lim).unwrap());
            let pt = arc(SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap());
            check_weighted_end(std::slice::from_ref(&hom), &hom, &lim).unwrap();
            check_weighted_end(std::slice::from_ref(&pt), &hom, &lim).unwrap();
            check_weighted_end(&[hom.clone(), pt.clone()], &hom, &lim).unwrap();
        }
    }

    #[test]
    fn point_weight_recovers_plain_end() {
        let lim = Limits::default();
        for c in [arrow(), chain3(), z2()] {
            let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
            let pt = SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap();
            let we = weighted_end(&pt, &hom, &lim).unwrap();
            let e = end_pq(&hom, Method::Equalizer, &lim).unwrap();
            // A function out of a point is its value, and encodes as that value.
            let mut a: Vec<Vec<usize>> = (0..we.len()).map(|x| we.family(x)).collect();
            let mut b: Vec<Vec<usize>> = (0..e.len()).map(|x| e.family(x)).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            assert_eq!(
                weighted_coend(&pt, &hom, &lim).unwrap().len(),
                coend(&hom, &lim).unwrap().len()
            );
        }
    }

    #[test]
    fn weighted_coend_represents_weighted_dinaturals() {
        let lim = Limits::default();
        for c in [arrow(), chain3()] {
            let hom = arc(SetFunctorPQ::hom(&c, &lim).unwrap());
            for x in [FinSet::range(1), FinSet::range(2)] {
                let (a, b) = weighted_coend_counts(std::slice::from_ref(&hom), &hom, &x, &lim).unwrap();
                assert_eq!(a, b as u128);
            }
        }
    }

    #[test]
    fn weighted_kan_on_arrow() {
        let lim = Limits::default();
        let c = arrow();
        let f = two_to_one(&c);
        let pt = SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap();
        let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
        let id = Functor::identity(&c);
        for dir in [KanDirection::Left, KanDirection::Right] {
            let plain = kan_extension(&f, &id, dir, &lim).unwrap();
            let weighted = weighted_kan(&f, &id, &pt, dir, &lim).unwrap();
            assert_eq!(
                plain.fibers().iter().map(FinSet::len).collect::<Vec<_>>(),
                weighted
                    .fibers()
                    .iter()
                    .map(FinSet::len)
                    .collect::<Vec<_>>()
            );
            for w in [&pt, &hom] {
                let (a, b) = weighted_kan_counts(&f, &id, w, &f, dir, &lim).unwrap();
                assert_eq!(a, b);
            }
        }
        let bang = Functor::to_terminal(&c);
        let lan = weighted_kan(&f, &bang, &pt, KanDirection::Left, &lim).unwrap();
        assert_eq!(lan.fiber(0).len(), colimit(&f, &lim).unwrap().carrier.len());
    }

    #[test]
    fn diagonal_kan_counts_and_reductions() {
        let lim = Limits::default();
        for c in [arrow(), chain3()] {
            let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
            let pt = SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap();
            let bang = Functor::to_terminal(hom.power());
            let id = Functor::identity(hom.power());
            let g1 = SetFunctor::constant(bang.target.clone(), &FinSet::range(2));
            for f in [&hom, &pt] {
                let dl =
                    diagonal_kan(f, &bang, KanDirection::Left, Pairing::Literal, &lim).unwrap();
                assert_eq!(dl.functor.fiber(0).len(), coend(f, &lim).unwrap().len());
                let dr =
                    diagonal_kan(f, &bang, KanDirection::Right, Pairing::Literal, &lim).unwrap();
                assert_eq!(dr.functor.fiber(0).len(), end(f, &lim).unwrap().len());
                let toggled =
                    diagonal_kan(f, &bang, KanDirection::Left, Pairing::Toggled, &lim).unwrap();
                assert_eq!(toggled.functor.fiber(0).len(), dl.functor.fiber(0).len());
                for dir in [KanDirection::Left, KanDirection::Right] {
                    let (a, b) = diagonal_kan_counts(f, &bang, &g1, dir, &lim).unwrap();
                    assert_eq!(a, b);
                    let (a, b) = diagonal_kan_counts(f, &id, hom.functor(), dir, &lim).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn point_weight_collapses_weighted_diagonal_kan() {
        let lim = Limits::default();
        let c = arrow();
        let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
        let pt2 = SetFunctorPQ::point(&c, Sig::new(2, 2), &lim).unwrap();
        let id = Functor::identity(hom.power());
        for dir in [KanDirection::Left, KanDirection::Right] {
            let a = diagonal_kan(&hom, &id, dir, Pairing::Literal, &lim)
                .unwrap()
                .functor;
            let b = weighted_diagonal_kan(&hom, &id, &pt2, dir, &lim)
                .unwrap()
                .functor;
            assert_eq!(
                a.fibers().iter().map(FinSet::len).collect::<Vec<_>>(),
                b.fibers().iter().map(FinSet::len).collect::<Vec<_>>()
            );
        }
        assert!(weighted_diagonal_kan(&hom, &id, &hom, KanDirection::Left, &lim).is_err());
    }

    #[test]
    fn day_on_z2_and_trivial() {
        let lim = Limits::default();
        let z2 = z2();
        let m = MonoidalFinCat::commutative_monoid(&z2, &lim).unwrap();
        let flip = SetFunctorPQ::from_fn(
            &z2,
            Sig::new(1, 0),
            |_| FinSet::range(2),
            |mm, x| if mm[0] == 0 { x } else { 1 - x },
            &lim,
        )
        .unwrap();
        let triv = SetFunctorPQ::constant(&z2, Sig::new(1, 0), &FinSet::range(3), &lim).unwrap();
        for f in [&flip, &triv] {
            check_day_unary(&m, f, &lim).unwrap();
        }
        let d2 = day_convolution(&m, &[flip.clone(), flip.clone()], &lim).unwrap();
        d2.validate().unwrap();
        assert_eq!(classical_day(&m, &flip, &flip, &lim).unwrap().len(), 1);

        let t = Arc::new(FinCat::terminal());
        let mt = MonoidalFinCat::commutative_monoid(&t, &lim).unwrap();
        let f = SetFunctorPQ::constant(&t, Sig::new(1, 0), &FinSet::range(2), &lim).unwrap();
        let g = SetFunctorPQ::constant(&t, Sig::new(1, 0), &FinSet::range(3), &lim).unwrap();
        let d = day_convolution(&mt, &[f, g], &lim).unwrap();
        assert_eq!(d.fiber_at(&[0]).len(), 6);
    }

    #[test]
    fn noncommutative_monoid_is_rejected() {
        let lim = Limits::default();
        // Unit plus a left-zero pair: ab = a, ba = b.
        let c = Arc::new(
            monoid(
                "lz",
                &["1".into(), "a".into(), "b".into()],
                0,
                &[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            )
            .unwrap(),
        );
        assert!(matches!(
            MonoidalFinCat::commutative_monoid(&c, &lim),
            Err(Error::NotStrictMonoidal(_))
        ));
    }
}
