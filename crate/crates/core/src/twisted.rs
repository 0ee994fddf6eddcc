//! Grids of homs, categories of elements, higher-arity twisted arrow categories and the
//! square-shaped twisted arrow category used for (1,1)-cokusarigama.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    opposite, power_pq, reindex_functor, Factor, FinCat, Functor, Mor, MorData, Obj, Sig,
};
use crate::functor::{hom_fiber, ConstIntegrand, SetFunctor, SetFunctorPQ};
use crate::kusarigama;
use crate::search::EqSystem;
use crate::setops::{check_cap, product, FinSet};
use crate::Limits;

/// Cells of a `p × q` grid in row-major order: `(i, j)` is cell `i·q + j`.
fn grid_cells(sig: Sig) -> impl Iterator<Item = (usize, usize)> {
    (0..sig.p).flat_map(move |i| (0..sig.q).map(move |j| (i, j)))
}

/// `hom_Π(A̲; B̲) = ∏_{i,j} hom(A_i, B_j)`, elements labeled by row-major grids.
pub fn hom_pi(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<SetFunctorPQ> {
    let cc = c.clone();
    let ca = c.clone();
    let p = sig.p;
    SetFunctorPQ::from_fn_unchecked(
        c,
        sig,
        move |t| {
            let f: Vec<FinSet> = grid_cells(sig)
                .map(|(i, j)| hom_fiber(&cc, t[i], t[p + j]))
                .collect();
            product(&f, &Limits::default()).expect("grid fits the cap checked by the table")
        },
        move |m, x| {
            let src = crate::functor::tuple_source(&ca, sig, m);
            let radices: Vec<usize> = grid_cells(sig)
                .map(|(i, j)| ca.hom_len(src[i], src[p + j]))
                .collect();
            let grid = crate::decode(x, &radices);
            let mut out = Vec::with_capacity(grid.len());
            let mut tr = Vec::with_capacity(grid.len());
            for (k, (i, j)) in grid_cells(sig).enumerate() {
                let f = ca.hom(src[i], src[p + j])[grid[k]];
                let g = ca.compose(m[p + j], ca.compose(f, m[i]));
                out.push(ca.hom_pos(g));
                tr.push(ca.hom_len(ca.src(g), ca.dst(g)));
            }
            crate::encode(&out, &tr)
        },
        lim,
    )
}

/// Index of the all-identity grid in `hom_Π(ΔA)`.
pub fn identity_grid(c: &FinCat, sig: Sig, a: Obj) -> usize {
    let n = sig.p * sig.q;
    crate::encode(
        &vec![c.hom_pos(c.identity(a)); n],
        &vec![c.hom_len(a, a); n],
    )
}

/// The category of elements of a Set-valued functor, with its projection.
#[derive(Clone, Debug)]
pub struct ElementsCat {
    pub total: Arc<FinCat>,
    pub projection: Functor,
    /// `(base object, element)` for each object of `total`.
    pub elements: Vec<(Obj, usize)>,
    obj_off: Vec<usize>,
}

impl ElementsCat {
    /// The object `(j, x)`.
    pub fn object_of(&self, j: Obj, x: usize) -> Obj {
        self.obj_off[j] + x
    }

    pub fn n_objects(&self) -> usize {
        self.elements.len()
    }
}

/// Objects `(j, x ∈ W(j))`; morphisms `(u, x) : (j, x) → (k, W(u)x)`.
pub fn category_of_elements(w: &SetFunctor, lim: &Limits) -> Result<ElementsCat> {
    let base = w.domain();
    let n = base.n_objects();
    let mut obj_off = Vec::with_capacity(n + 1);
    let mut acc = 0usize;
    for j in 0..n {
        obj_off.push(acc);
        acc += w.fiber(j).len();
    }
    obj_off.push(acc);
    let mut mor_off = Vec::with_capacity(base.n_morphisms() + 1);
    let mut macc = 0usize;
    for u in 0..base.n_morphisms() {
        mor_off.push(macc);
        macc += w.fiber(base.src(u)).len();
    }
    mor_off.push(macc);
    check_cap("category of elements", macc.max(acc) as u128, lim)?;
    let mut objects = Vec::with_capacity(acc);
    let mut elements = Vec::with_capacity(acc);
    for j in 0..n {
        for (x, l) in w.fiber(j).labels().iter().enumerate() {
            objects.push(format!("({},{})", base.object_name(j), l));
            elements.push((j, x));
        }
    }
    let mut morphisms = Vec::with_capacity(macc);
    let mut mor_base = Vec::with_capacity(macc);
    let mut mor_elem = Vec::with_capacity(macc);
    for u in 0..base.n_morphisms() {
        let (j, k) = (base.src(u), base.dst(u));
        for (x, l) in w.fiber(j).labels().iter().enumerate() {
            morphisms.push(MorData {
                name: format!("({},{})", base.mor_name(u), l),
                src: obj_off[j] + x,
                dst: obj_off[k] + w.map(u).apply(x),
            });
            mor_base.push(u);
            mor_elem.push(x);
        }
    }
    let identities = elements
        .iter()
        .map(|&(j, x)| mor_off[base.identity(j)] + x)
        .collect();
    let (mb, me, mo, b) = (
        mor_base.clone(),
        mor_elem.clone(),
        mor_off.clone(),
        base.clone(),
    );
    let total = FinCat::from_fn(
        format!("el({})", base.name()),
        objects,
        morphisms,
        identities,
        move |g, f| mo[b.compose(mb[g], mb[f])] + me[f],
    );
    let total = Arc::new(total);
    let projection = Functor {
        source: total.clone(),
        target: base.clone(),
        obj: elements.iter().map(|e| e.0).collect(),
        mor: mor_base,
    };
    Ok(ElementsCat {
        total,
        projection,
        elements,
        obj_off,
    })
}

/// `Tw^{(p,q)}(C)`: elements of the grid-of-homs functor, projecting to `C^{(p,q)}`.
pub fn tw_pq(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<ElementsCat> {
    category_of_elements(hom_pi(c, sig, lim)?.functor(), lim)
}

/// `Σ_{p,q} : Tw(C) → C^{(p,q)}`, `[f : A → B] ↦ (A, …, A, B, …, B)`.
pub fn sigma_pq(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<(ElementsCat, Functor)> {
    let tw = tw_pq(c, Sig::new(1, 1), lim)?;
    let diag = crate::fincat::diagonal_functor(c, sig, lim)?;
    let proj = Functor {
        target: diag.source.clone(),
        ..tw.projection.clone()
    };
    let s = proj.then(&diag);
    Ok((tw, s))
}

/// The twisted arrow category built directly: objects are morphisms `f`, and a morphism
/// `f → f'` is a pair `(a, b)` with `f' = b ∘ f ∘ a`.
pub fn classical_tw(c: &FinCat) -> FinCat {
    classical_tw_pairs(c).0
}

/// Also returns `(f, a, b)` for each morphism.
fn classical_tw_pairs(c: &FinCat) -> (FinCat, Vec<(Mor, Mor, Mor)>) {
    let nm = c.n_morphisms();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    for f in 0..nm {
        let (a0, b0) = (c.src(f), c.dst(f));
        for &a in c.inc(a0) {
            for &b in c.out(b0) {
                let g = c.compose(b, c.compose(f, a));
                morphisms.push(MorData {
                    name: format!("<{},{}>@{}", c.mor_name(a), c.mor_name(b), c.mor_name(f)),
                    src: f,
                    dst: g,
                });
                pairs.push((f, a, b));
            }
        }
    }
    let index: std::collections::HashMap<(usize, usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let identities = (0..nm)
        .map(|f| index[&(f, c.identity(c.src(f)), c.identity(c.dst(f)))])
        .collect();
    let objects = (0..nm).map(|f| c.mor_name(f).to_string()).collect();
    let tw = FinCat::from_fn(
        format!("Tw({})", c.name()),
        objects,
        morphisms,
        identities,
        |g, f| {
            let (f0, a1, b1) = pairs[f];
            let (_, a2, b2) = pairs[g];
            index[&(f0, c.compose(a1, a2), c.compose(b2, b1))]
        },
    );
    (tw, pairs)
}

/// Builds the isomorphism from the directly built twisted arrow category to the elements
/// of the grid-of-homs functor in signature `(1,1)`, and checks it both ways.
pub fn check_tw_iso(c: &Arc<FinCat>, lim: &Limits) -> Result<Functor> {
    let (direct, pairs) = classical_tw_pairs(c);
    let direct = Arc::new(direct);
    let el = tw_pq(c, Sig::new(1, 1), lim)?;
    let power = el.projection.target.clone();
    let obj: Vec<Obj> = (0..c.n_morphisms())
        .map(|f| el.object_of(power.encode_obj(&[c.src(f), c.dst(f)]), c.hom_pos(f)))
        .collect();
    let mut mor = Vec::with_capacity(direct.n_morphisms());
    for m in 0..direct.n_morphisms() {
        let (_, a, b) = pairs[m];
        let (s, t) = (obj[direct.src(m)], obj[direct.dst(m)]);
        let name = direct.mor_name(m);
        let u = power.encode_mor(&[a, b]);
        let hit = el
            .total
            .hom(s, t)
            .into_iter()
            .find(|&k| el.projection.mor[k] == u);
        mor.push(hit.ok_or_else(|| Error::LawFailure(format!("no image for {name}")))?);
    }
    let iso = Functor {
        source: direct.clone(),
        target: el.total.clone(),
        obj,
        mor,
    };
    iso.validate()?;
    let mut o = iso.obj.clone();
    let mut m = iso.mor.clone();
    o.sort_unstable();
    m.sort_unstable();
    o.dedup();
    m.dedup();
    if o.len() != el.total.n_objects() || m.len() != el.total.n_morphisms() {
        return Err(Error::LawFailure(
            "comparison with the twisted arrow category is not bijective".into(),
        ));
    }
    Ok(iso)
}

/// Whether the grid-of-homs functor represents dinaturals out of the point in this signature
/// on every category. That holds when `min(p, q) = 1`; for `(0,0)` it needs `C` connected.
pub fn hom_pi_is_end_weight(sig: Sig) -> bool {
    sig.p >= 1 && sig.q >= 1 && sig.p.min(sig.q) == 1
}

/// A weight `W` on `C^{(p,q)}` with `Nat(W, D) ≅ ∫_{(p,q)} D`, and for each object `A` the
/// element of `W(ΔA)` that reads off the `A`-component.
///
/// Uses the grid of homs when it represents the end, otherwise the cokusarigama of the point.
pub fn end_weight(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<(SetFunctorPQ, Vec<usize>)> {
    if hom_pi_is_end_weight(sig) {
        let w = hom_pi(c, sig, lim)?;
        let units = (0..c.n_objects())
            .map(|a| identity_grid(c, sig, a))
            .collect();
        return Ok((w, units));
    }
    let pt: Arc<dyn crate::functor::Integrand> =
        Arc::new(ConstIntegrand::new(c, sig.dual(), FinSet::point()));
    let j = kusarigama::cokusarigama(&pt, lim)?;
    let units = j.unit.components.iter().map(|e| e.apply(0)).collect();
    Ok((j.functor, units))
}

/// `Tw_J^{A,B}(C)`: elements of `(Y, X) ↦ hom(A,B) × hom(A,Y) × hom(X,B) × hom(X,Y)` on
/// `C × C^op`. Element components are `(g, ψ, φ, f)`.
pub struct TwJ {
    pub el: ElementsCat,
    /// `C × C^op`, objects `(Y, X)`.
    pub base: Arc<FinCat>,
    pub a: Obj,
    pub b: Obj,
}

impl TwJ {
    /// `(Y, X, g, ψ, φ, f)` as morphisms of `C`.
    pub fn square(&self, c: &FinCat, o: Obj) -> (Obj, Obj, usize, usize, usize, usize) {
        let (j, x) = self.el.elements[o];
        let yx = self.base.decode_obj(j);
        let (y, xx) = (yx[0], yx[1]);
        let rad = [
            c.hom_len(self.a, self.b),
            c.hom_len(self.a, y),
            c.hom_len(xx, self.b),
            c.hom_len(xx, y),
        ];
        let d = crate::decode(x, &rad);
        (
            y,
            xx,
            c.hom(self.a, self.b)[d[0]],
            c.hom(self.a, y)[d[1]],
            c.hom(xx, self.b)[d[2]],
            c.hom(xx, y)[d[3]],
        )
    }

    /// The object with the given square, if it exists.
    pub fn find(
        &self,
        c: &FinCat,
        y: Obj,
        x: Obj,
        g: usize,
        psi: usize,
        phi: usize,
        f: usize,
    ) -> Obj {
        let rad = [
            c.hom_len(self.a, self.b),
            c.hom_len(self.a, y),
            c.hom_len(x, self.b),
            c.hom_len(x, y),
        ];
        let e = crate::encode(
            &[c.hom_pos(g), c.hom_pos(psi), c.hom_pos(phi), c.hom_pos(f)],
            &rad,
        );
        self.el.object_of(self.base.encode_obj(&[y, x]), e)
    }
}

pub fn tw_j(c: &Arc<FinCat>, a: Obj, b: Obj, lim: &Limits) -> Result<TwJ> {
    let base = Arc::new(FinCat::product(
        vec![
            Factor {
                cat: c.clone(),
                op: false,
            },
            Factor {
                cat: c.clone(),
                op: true,
            },
        ],
        lim,
    )?);
    let cc = c.clone();
    let fibers: Vec<FinSet> = (0..base.n_objects())
        .map(|o| {
            let d = base.decode_obj(o);
            let (y, x) = (d[0], d[1]);
            product(
                &[
                    hom_fiber(c, a, b),
                    hom_fiber(c, a, y),
                    hom_fiber(c, x, b),
                    hom_fiber(c, x, y),
                ],
                lim,
            )
        })
        .collect::<Result<_>>()?;
    let bb = base.clone();
    let v = SetFunctor::from_fn(base.clone(), fibers, move |m, e| {
        let d = bb.decode_mor(m);
        let (ym, xm) = (d[0], d[1]);
        let (y, x) = (cc.src(ym), cc.dst(xm));
        let rad = [
            cc.hom_len(a, b),
            cc.hom_len(a, y),
            cc.hom_len(x, b),
            cc.hom_len(x, y),
        ];
        let t = crate::decode(e, &rad);
        let (g, psi, phi, f) = (
            cc.hom(a, b)[t[0]],
            cc.hom(a, y)[t[1]],
            cc.hom(x, b)[t[2]],
            cc.hom(x, y)[t[3]],
        );
        let (y2, x2) = (cc.dst(ym), cc.src(xm));
        let rad2 = [
            cc.hom_len(a, b),
            cc.hom_len(a, y2),
            cc.hom_len(x2, b),
            cc.hom_len(x2, y2),
        ];
        let out = [
            cc.hom_pos(g),
            cc.hom_pos(cc.compose(ym, psi)),
            cc.hom_pos(cc.compose(phi, xm)),
            cc.hom_pos(cc.compose(ym, cc.compose(f, xm))),
        ];
        crate::encode(&out, &rad2)
    });
    v.validate()?;
    let el = category_of_elements(&v, lim)?;
    Ok(TwJ { el, base, a, b })
}

/// Projection `Tw_J^{A,B}(C) → C^op × C`, `(Y, X, …) ↦ (X, Y)`.
pub fn tw_j_projection(t: &TwJ, c: &Arc<FinCat>, lim: &Limits) -> Result<Functor> {
    let target = Arc::new(power_pq(c, Sig::new(1, 1), lim)?);
    let swap = reindex_functor(&t.base, &target, &[1, 0]);
    Ok(t.el.projection.then(&swap))
}

/// The opposite of `Tw_J^{A,B}(C)` with its projection `(Y, X, …) ↦ (Y, X)` to `C^op × C`.
/// Read this way the square is a presheaf weight, which is the variance a colimit needs.
pub fn tw_j_opposite(t: &TwJ, c: &Arc<FinCat>, lim: &Limits) -> Result<(Arc<FinCat>, Functor)> {
    let total = Arc::new(opposite(&t.el.total));
    let target = Arc::new(power_pq(c, Sig::new(1, 1), lim)?);
    let same = reindex_functor(&t.base, &target, &[0, 1]);
    let pr = t.el.projection.then(&same);
    let f = Functor {
        source: total.clone(),
        target,
        obj: pr.obj,
        mor: pr.mor,
    };
    f.validate()?;
    Ok((total, f))
}

/// A cone `a_X : A → X` (natural in `X`) from an object, if one exists.
pub fn find_cone(c: &FinCat, a: Obj, lim: &Limits) -> Result<Option<Vec<usize>>> {
    let n = c.n_objects();
    let mut sys = EqSystem::new((0..n).map(|x| c.hom_len(a, x)).collect());
    let ids: Vec<usize> = (0..n).map(|x| sys.identity_map(c.hom_len(a, x))).collect();
    for f in 0..c.n_morphisms() {
        if c.is_identity(f) {
            continue;
        }
        let (x, y) = (c.src(f), c.dst(f));
        let t = c
            .hom(a, x)
            .into_iter()
            .map(|h| c.hom_pos(c.compose(f, h)))
            .collect();
        let m = sys.add_map(t);
        sys.require(x, m, y, ids[y]);
    }
    let sols = sys.solve(lim, "cone")?;
    Ok(sols
        .first()
        .map(|s| (0..n).map(|x| c.hom(a, x)[s[x]]).collect()))
}

/// A cocone `b_X : X → B` (natural in `X`) to an object, if one exists.
pub fn find_cocone(c: &FinCat, b: Obj, lim: &Limits) -> Result<Option<Vec<usize>>> {
    let op = opposite(c);
    find_cone(&op, b, lim)
}

/// The embedding of the twisted arrow category into `Tw_J^{A,B}(C)`, built from a cone out
/// of `A` and a cocone into `B`.
pub fn tw_j_embedding(c: &Arc<FinCat>, t: &TwJ, lim: &Limits) -> Result<Functor> {
    let cone = find_cone(c, t.a, lim)?
        .ok_or_else(|| Error::NoEmbedding(format!("no cone out of {}", c.object_name(t.a))))?;
    let cocone = find_cocone(c, t.b, lim)?
        .ok_or_else(|| Error::NoEmbedding(format!("no cocone into {}", c.object_name(t.b))))?;
    let (direct, pairs) = classical_tw_pairs(c);
    let direct = Arc::new(direct);
    let g_of = |x: Obj| c.compose(cocone[x], cone[x]);
    let obj: Vec<Obj> = (0..c.n_morphisms())
        .map(|f| {
            let (x, y) = (c.src(f), c.dst(f));
            t.find(c, y, x, g_of(x), cone[y], cocone[x], f)
        })
        .collect();
    let mut mor = Vec::with_capacity(direct.n_morphisms());
    for m in 0..direct.n_morphisms() {
        let name = direct.mor_name(m);
        let (_, al, be) = pairs[m];
        let u = t.base.encode_mor(&[be, al]);
        let (s, d) = (obj[direct.src(m)], obj[direct.dst(m)]);
        let hit =
            t.el.total
                .hom(s, d)
                .into_iter()
                .find(|&k| t.el.projection.mor[k] == u);
        mor.push(hit.ok_or_else(|| Error::NoEmbedding(format!("no image for {name}")))?);
    }
    let e = Functor {
        source: direct,
        target: t.el.total.clone(),
        obj,
        mor,
    };
    e.validate()?;
    if !e.is_injective_on_objects() {
        return Err(Error::NoEmbedding(
            "embedding identifies two objects".into(),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{acyclic_graph, poset};

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

    #[test]
    fn hom_pi_one_one_is_hom() {
        let lim = Limits::default();
        let c = arrow();
        let h = hom_pi(&c, Sig::new(1, 1), &lim).unwrap();
        h.validate().unwrap();
        let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
        for o in 0..h.power().n_objects() {
            assert_eq!(h.functor().fiber(o).len(), hom.functor().fiber(o).len());
        }
        for m in 0..h.power().n_morphisms() {
            assert_eq!(h.functor().map(m).table, hom.functor().map(m).table);
        }
    }

    #[test]
    fn hom_pi_two_one_grid() {
        let lim = Limits::default();
        let c = arrow();
        let h = hom_pi(&c, Sig::new(2, 1), &lim).unwrap();
        h.validate().unwrap();
        assert_eq!(h.fiber_at(&[0, 0, 1]).len(), 1);
        assert_eq!(h.fiber_at(&[1, 0, 0]).len(), 0);
    }

    #[test]
    fn twisted_arrow_of_arrow() {
        let lim = Limits::default();
        let c = arrow();
        let tw = tw_pq(&c, Sig::new(1, 1), &lim).unwrap();
        assert_eq!(tw.n_objects(), 3);
        tw.projection.validate().unwrap();
        check_tw_iso(&c, &lim).unwrap();
        let (_, s) = sigma_pq(&c, Sig::new(2, 1), &lim).unwrap();
        s.validate().unwrap();
    }

    #[test]
    fn tw_j_on_chain_embeds() {
        let lim = Limits::default();
        let names: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let c = Arc::new(
            poset(
                "chain",
                &names,
                &[("0".into(), "1".into()), ("1".into(), "2".into())],
            )
            .unwrap(),
        );
        let t = tw_j(&c, 0, 2, &lim).unwrap();
        t.el.projection.validate().unwrap();
        let e = tw_j_embedding(&c, &t, &lim).unwrap();
        assert_eq!(e.obj.len(), 6);
        // Every pair of objects has one arrow between them in the chain, so every
        // (Y, X) contributes exactly |hom(X, Y)| squares.
        let expected: usize = (0..3)
            .flat_map(|y| (0..3).map(move |x| (x <= y) as usize))
            .sum();
        assert_eq!(t.el.n_objects(), expected);
    }
}
