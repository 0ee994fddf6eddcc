//! Cokusarigama `J^{p,q}` and kusarigama `Γ^{q,p}` of Set-valued functors, computed
//! pointwise: fix the free tuple, then take the co/end over the bound variables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::dinat::{check_types, compose_nat_with, compose_with_nat, enumerate_dinat, DinatPQ};
use crate::ends::{coend, end, CoendPQ, EndPQ};
use crate::error::{Error, Result};
use crate::fincat::{diagonal_functor, power_pq, FinCat, Functor, Mor, Obj, Sig};
use crate::functor::{
    enumerate_nat, hom_fiber, same_shape, tuple_source, tuple_target, ConstIntegrand, FnIntegrand,
    Integrand, NatTransf, SetFunctor, SetFunctorPQ,
};
use crate::setops::{
    check_cap, colimit, decode_fn, encode_fn, fn_count, hom_set, limit, product, FinFn, FinSet,
    Label,
};
use crate::twisted::{hom_pi, tw_j, tw_j_opposite, tw_j_projection};
use crate::Limits;

/// `J^{p,q}(F)` together with its universal dinatural `η : F ⇒̈ J(F)`.
#[derive(Clone, Debug)]
pub struct CokusarigamaResult {
    /// Signature `(q,p)`.
    pub functor: SetFunctorPQ,
    pub unit: DinatPQ,
    /// For each object of `C^{(q,p)}` and each fiber element, the bound object and element
    /// of the integrand its class is represented by.
    pub provenance: Vec<Vec<(Obj, Label)>>,
}

/// `Γ^{q,p}(G)` together with its universal dinatural `ε : Γ(G) ⇒̈ G`.
#[derive(Clone, Debug)]
pub struct KusarigamaResult {
    /// Signature `(p,q)`.
    pub functor: SetFunctorPQ,
    pub counit: DinatPQ,
}

type Cache<T> = Mutex<HashMap<Vec<Obj>, Arc<T>>>;

/// Mixed-radix sizes of the hom factors followed by one extra factor.
fn radices(c: &FinCat, pairs: &[(Obj, Obj)], last: usize) -> Vec<usize> {
    pairs
        .iter()
        .map(|&(x, y)| c.hom_len(x, y))
        .chain(std::iter::once(last))
        .collect()
}

/// `J^{p,q}(F)` as a lazy integrand of signature `(q,p)`. At `(X̲; Y̲)` the fiber is the coend
/// over `(A̲; B̲)` of `∏_j hom(X_j, B_j) × ∏_i hom(A_i, Y_i) × F(A̲; B̲)`; inner elements are
/// labeled `(g_1, …, g_q, f_1, …, f_p, x)`.
pub struct Cokusarigama {
    f: Arc<dyn Integrand>,
    lim: Limits,
    cache: Cache<CoendPQ>,
}

impl Cokusarigama {
    pub fn new(f: &Arc<dyn Integrand>, lim: &Limits) -> Self {
        Cokusarigama {
            f: f.clone(),
            lim: *lim,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// The integrand in the bound variables for a fixed free tuple.
    fn inner(&self, t: &[Obj]) -> FnIntegrand {
        let sig = self.f.sig();
        let (p, q) = (sig.p, sig.q);
        let (xs, ys) = (t[..q].to_vec(), t[q..].to_vec());
        let c = self.f.base().clone();
        let (f1, f2, c1, c2, xs1, ys1, xs2, ys2) = (
            self.f.clone(),
            self.f.clone(),
            c.clone(),
            c.clone(),
            xs.clone(),
            ys.clone(),
            xs,
            ys,
        );
        let lim = self.lim;
        let pairs = move |c: &FinCat, xs: &[Obj], ys: &[Obj], s: &[Obj]| -> Vec<(Obj, Obj)> {
            let _ = c;
            (0..q)
                .map(|j| (xs[j], s[p + j]))
                .chain((0..p).map(|i| (s[i], ys[i])))
                .collect()
        };
        FnIntegrand::new(
            &c,
            sig,
            "cokusarigama integrand",
            move |s| {
                let mut parts: Vec<FinSet> = pairs(&c1, &xs1, &ys1, s)
                    .into_iter()
                    .map(|(a, b)| hom_fiber(&c1, a, b))
                    .collect();
                parts.push(f1.fiber(s)?);
                product(&parts, &lim)
            },
            move |m, e| {
                let (src, tgt) = (tuple_source(&c2, sig, m), tuple_target(&c2, sig, m));
                let rs = radices(&c2, &pairs(&c2, &xs2, &ys2, &src), f2.fiber(&src)?.len());
                let rt = radices(&c2, &pairs(&c2, &xs2, &ys2, &tgt), f2.fiber(&tgt)?.len());
                let d = crate::decode(e, &rs);
                let mut out = Vec::with_capacity(d.len());
                for j in 0..q {
                    let g = c2.hom(xs2[j], src[p + j])[d[j]];
                    out.push(c2.hom_pos(c2.compose(m[p + j], g)));
                }
                for i in 0..p {
                    let f = c2.hom(src[i], ys2[i])[d[q + i]];
                    out.push(c2.hom_pos(c2.compose(f, m[i])));
                }
                out.push(f2.act(m, d[p + q])?);
                Ok(crate::encode(&out, &rt))
            },
        )
    }

    pub fn fiber_coend(&self, t: &[Obj]) -> Result<Arc<CoendPQ>> {
        if let Some(x) = self.cache.lock().unwrap().get(t) {
            return Ok(x.clone());
        }
        let v = Arc::new(coend(&self.inner(t), &self.lim)?);
        self.cache.lock().unwrap().insert(t.to_vec(), v.clone());
        Ok(v)
    }

    /// Inner radices at the bound diagonal `ΔA` for free tuple `t`.
    fn diag_radices(&self, t: &[Obj], a: Obj) -> Result<Vec<usize>> {
        let sig = self.f.sig();
        let c = self.f.base();
        let (p, q) = (sig.p, sig.q);
        let pairs: Vec<(Obj, Obj)> = (0..q)
            .map(|j| (t[j], a))
            .chain((0..p).map(|i| (a, t[q + i])))
            .collect();
        Ok(radices(c, &pairs, self.f.fiber(&vec![a; p + q])?.len()))
    }

    /// `η_A(x)`: the class of `(id, …, id, x)` at `ΔA`.
    pub fn unit_at(&self, a: Obj, x: usize) -> Result<usize> {
        let n = self.f.sig().arity();
        let c = self.f.base();
        let t = vec![a; n];
        let r = self.diag_radices(&t, a)?;
        let id = c.hom_pos(c.identity(a));
        let mut digits = vec![id; n];
        digits.push(x);
        Ok(self
            .fiber_coend(&t)?
            .class_of(a, crate::encode(&digits, &r)))
    }
}

impl Integrand for Cokusarigama {
    fn base(&self) -> &Arc<FinCat> {
        self.f.base()
    }

    fn sig(&self) -> Sig {
        self.f.sig().dual()
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        Ok(self.fiber_coend(objs)?.carrier.carrier.clone())
    }

    fn act(&self, mors: &[Mor], k: usize) -> Result<usize> {
        let c = self.f.base();
        let sig = self.sig();
        let (p, q) = (self.f.sig().p, self.f.sig().q);
        let (src, tgt) = (tuple_source(c, sig, mors), tuple_target(c, sig, mors));
        let from = self.fiber_coend(&src)?;
        let (a, e) = from.carrier.reps[k];
        let d = crate::decode(e, &self.diag_radices(&src, a)?);
        let mut out = Vec::with_capacity(d.len());
        for j in 0..q {
            let g = c.hom(src[j], a)[d[j]];
            out.push(c.hom_pos(c.compose(g, mors[j])));
        }
        for i in 0..p {
            let f = c.hom(a, src[q + i])[d[q + i]];
            out.push(c.hom_pos(c.compose(mors[q + i], f)));
        }
        out.push(d[p + q]);
        let e2 = crate::encode(&out, &self.diag_radices(&tgt, a)?);
        Ok(self.fiber_coend(&tgt)?.class_of(a, e2))
    }

    fn label(&self) -> String {
        format!("J({})", self.f.label())
    }
}

/// Computes `J^{p,q}(F)`, tabulated and validated, with its unit.
pub fn cokusarigama(f: &Arc<dyn Integrand>, lim: &Limits) -> Result<CokusarigamaResult> {
    Cokusarigama::new(f, lim).result()
}

impl Cokusarigama {
    pub fn result(&self) -> Result<CokusarigamaResult> {
        let f = &self.f;
        let functor = SetFunctorPQ::materialize(self, &self.lim)?;
        functor.validate()?;
        let power = functor.power().clone();
        let mut provenance = Vec::with_capacity(power.n_objects());
        for o in 0..power.n_objects() {
            let t = power.decode_obj(o);
            let co = self.fiber_coend(&t)?;
            let inner = self.inner(&t);
            let mut v = Vec::with_capacity(co.len());
            for &(a, e) in &co.carrier.reps {
                v.push((a, inner.fiber(&vec![a; t.len()])?.label(e).clone()));
            }
            provenance.push(v);
        }
        let n = f.base().n_objects();
        let mut components = Vec::with_capacity(n);
        for a in 0..n {
            let dom = f.fiber(&vec![a; f.sig().arity()])?;
            let table = (0..dom.len())
                .map(|x| self.unit_at(a, x))
                .collect::<Result<Vec<_>>>()?;
            components.push(FinFn::new(
                dom,
                functor.fiber_at(&vec![a; f.sig().arity()]).clone(),
                table,
            )?);
        }
        let unit = DinatPQ {
            f: f.clone(),
            g: Arc::new(functor.clone()),
            components,
        };
        Ok(CokusarigamaResult {
            functor,
            unit,
            provenance,
        })
    }
}

/// `Γ^{q,p}(G)` as a lazy integrand of signature `(p,q)`. At `(X̲; Y̲)` the fiber is the end
/// over `(A̲; B̲)` of `Set(∏_i hom(B_i, X_i) × ∏_j hom(Y_j, A_j), G(A̲; B̲))`.
pub struct Kusarigama {
    g: Arc<dyn Integrand>,
    lim: Limits,
    cache: Cache<EndPQ>,
}

impl Kusarigama {
    pub fn new(g: &Arc<dyn Integrand>, lim: &Limits) -> Self {
        Kusarigama {
            g: g.clone(),
            lim: *lim,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `G` has signature `(q,p)`; returns `(p, q)`.
    fn pq(&self) -> (usize, usize) {
        (self.g.sig().q, self.g.sig().p)
    }

    /// Domain factors `hom(B_i, X_i)` then `hom(Y_j, A_j)` for free `t` and bound `s`.
    fn dom_pairs(&self, t: &[Obj], s: &[Obj]) -> Vec<(Obj, Obj)> {
        let (p, q) = self.pq();
        (0..p)
            .map(|i| (s[q + i], t[i]))
            .chain((0..q).map(|j| (t[p + j], s[j])))
            .collect()
    }

    fn dom_radices(&self, t: &[Obj], s: &[Obj]) -> Vec<usize> {
        let c = self.g.base();
        self.dom_pairs(t, s)
            .into_iter()
            .map(|(x, y)| c.hom_len(x, y))
            .collect()
    }

    fn inner(&self, t: &[Obj]) -> FnIntegrand {
        let (p, q) = self.pq();
        let sig = self.g.sig();
        let c = self.g.base().clone();
        let t = t.to_vec();
        let pairs = move |s: &[Obj]| -> Vec<(Obj, Obj)> {
            (0..p)
                .map(|i| (s[q + i], t[i]))
                .chain((0..q).map(|j| (t[p + j], s[j])))
                .collect()
        };
        let pairs2 = pairs.clone();
        let (g1, g2, c1, c2) = (self.g.clone(), self.g.clone(), c.clone(), c.clone());
        let lim = self.lim;
        FnIntegrand::new(
            &c,
            sig,
            "kusarigama integrand",
            move |s| {
                let parts: Vec<FinSet> = pairs(s)
                    .into_iter()
                    .map(|(a, b)| hom_fiber(&c1, a, b))
                    .collect();
                hom_set(&product(&parts, &lim)?, &g1.fiber(s)?, &lim)
            },
            move |m, phi| {
                let (src, tgt) = (tuple_source(&c2, sig, m), tuple_target(&c2, sig, m));
                let ps: Vec<(Obj, Obj)> = pairs2(&src);
                let pt: Vec<(Obj, Obj)> = pairs2(&tgt);
                let rs: Vec<usize> = ps.iter().map(|&(a, b)| c2.hom_len(a, b)).collect();
                let rt: Vec<usize> = pt.iter().map(|&(a, b)| c2.hom_len(a, b)).collect();
                let ns: usize = rs.iter().product();
                let nt: usize = rt.iter().product();
                let table = decode_fn(phi, ns, g2.fiber(&src)?.len());
                let mut out = Vec::with_capacity(nt);
                for e in 0..nt {
                    let d = crate::decode(e, &rt);
                    let mut back = Vec::with_capacity(d.len());
                    // k_i : B'_i → X_i pulled back along b_i; l_j : Y_j → A_j pushed along a_j.
                    for i in 0..p {
                        let k = c2.hom(pt[i].0, pt[i].1)[d[i]];
                        back.push(c2.hom_pos(c2.compose(k, m[q + i])));
                    }
                    for j in 0..q {
                        let l = c2.hom(pt[p + j].0, pt[p + j].1)[d[p + j]];
                        back.push(c2.hom_pos(c2.compose(m[j], l)));
                    }
                    out.push(g2.act(m, table[crate::encode(&back, &rs)])?);
                }
                Ok(encode_fn(&out, g2.fiber(&tgt)?.len()))
            },
        )
    }

    pub fn fiber_end(&self, t: &[Obj]) -> Result<Arc<EndPQ>> {
        if let Some(x) = self.cache.lock().unwrap().get(t) {
            return Ok(x.clone());
        }
        let v = Arc::new(end(&self.inner(t), &self.lim)?);
        self.cache.lock().unwrap().insert(t.to_vec(), v.clone());
        Ok(v)
    }

    /// `ε_A(φ) = φ_A(id, …, id)`.
    pub fn counit_at(&self, a: Obj, e: usize) -> Result<usize> {
        let n = self.g.sig().arity();
        let c = self.g.base();
        let t = vec![a; n];
        let r = self.dom_radices(&t, &t);
        let ne: usize = r.iter().product();
        let gl = self.g.fiber(&t)?.len();
        let phi = decode_fn(self.fiber_end(&t)?.carrier.legs[a].apply(e), ne, gl);
        Ok(phi[crate::encode(&vec![c.hom_pos(c.identity(a)); n], &r)])
    }
}

impl Integrand for Kusarigama {
    fn base(&self) -> &Arc<FinCat> {
        self.g.base()
    }

    fn sig(&self) -> Sig {
        self.g.sig().dual()
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        Ok(self.fiber_end(objs)?.carrier.carrier.clone())
    }

    fn act(&self, mors: &[Mor], e: usize) -> Result<usize> {
        let c = self.g.base();
        let sig = self.sig();
        let (p, q) = self.pq();
        let n = p + q;
        let (src, tgt) = (tuple_source(c, sig, mors), tuple_target(c, sig, mors));
        let (from, to) = (self.fiber_end(&src)?, self.fiber_end(&tgt)?);
        let mut comps = Vec::with_capacity(c.n_objects());
        for a in 0..c.n_objects() {
            let s = vec![a; n];
            let gl = self.g.fiber(&s)?.len();
            let (rs, rt) = (self.dom_radices(&src, &s), self.dom_radices(&tgt, &s));
            let (ns, nt): (usize, usize) = (rs.iter().product(), rt.iter().product());
            let phi = decode_fn(from.carrier.legs[a].apply(e), ns, gl);
            let pt = self.dom_pairs(&tgt, &s);
            let mut out = Vec::with_capacity(nt);
            for x in 0..nt {
                let d = crate::decode(x, &rt);
                let mut back = Vec::with_capacity(n);
                for i in 0..p {
                    let k = c.hom(pt[i].0, pt[i].1)[d[i]];
                    back.push(c.hom_pos(c.compose(mors[i], k)));
                }
                for j in 0..q {
                    let l = c.hom(pt[p + j].0, pt[p + j].1)[d[p + j]];
                    back.push(c.hom_pos(c.compose(l, mors[p + j])));
                }
                out.push(phi[crate::encode(&back, &rs)]);
            }
            comps.push(encode_fn(&out, gl));
        }
        to.find_family(&comps)
            .ok_or_else(|| Error::LawFailure("kusarigama action leaves the end".into()))
    }

    fn label(&self) -> String {
        format!("Γ({})", self.g.label())
    }
}

/// Computes `Γ^{q,p}(G)`, tabulated and validated, with its counit.
pub fn kusarigama(g: &Arc<dyn Integrand>, lim: &Limits) -> Result<KusarigamaResult> {
    Kusarigama::new(g, lim).result()
}

impl Kusarigama {
    pub fn result(&self) -> Result<KusarigamaResult> {
        let g = &self.g;
        let functor = SetFunctorPQ::materialize(self, &self.lim)?;
        functor.validate()?;
        let n = g.base().n_objects();
        let ar = g.sig().arity();
        let mut components = Vec::with_capacity(n);
        for a in 0..n {
            let dom = functor.fiber_at(&vec![a; ar]).clone();
            let table = (0..dom.len())
                .map(|e| self.counit_at(a, e))
                .collect::<Result<Vec<_>>>()?;
            components.push(FinFn::new(dom, g.fiber(&vec![a; ar])?, table)?);
        }
        let counit = DinatPQ {
            f: Arc::new(functor.clone()),
            g: g.clone(),
            components,
        };
        Ok(KusarigamaResult { functor, counit })
    }
}

fn diag_component(n: &NatTransf, a: Obj, arity: usize) -> &FinFn {
    &n.components[n.source.domain().encode_obj(&vec![a; arity])]
}

/// Naturals out of `J(F)` and into `Γ(G)`, each matched against the dinaturals `F ⇒̈ G`.
struct Transposes {
    fm: SetFunctorPQ,
    gm: SetFunctorPQ,
    nat_j: Vec<NatTransf>,
    nat_g: Vec<NatTransf>,
    dinats: usize,
    /// `α ↦ α ∘ η` as an index into the dinaturals.
    left: Vec<usize>,
    /// `β ↦ ε ∘ β` as an index into the dinaturals.
    right: Vec<usize>,
}

/// Matches each produced dinatural against the enumeration; every dinatural must be hit once.
fn match_dinats(
    produced: impl Iterator<Item = Result<DinatPQ>>,
    index: &HashMap<Vec<Vec<usize>>, usize>,
    n: usize,
    side: &str,
) -> Result<Vec<usize>> {
    let mut hits = vec![0usize; n];
    let mut out = Vec::new();
    for th in produced {
        let th = th?;
        let k = *index
            .get(&th.tables())
            .ok_or_else(|| Error::LawFailure(format!("{side}: composite is not dinatural")))?;
        hits[k] += 1;
        out.push(k);
    }
    if let Some(k) = hits.iter().position(|&h| h > 1) {
        return Err(Error::NonUnique(format!(
            "{side}: dinatural {k} factors {} ways",
            hits[k]
        )));
    }
    if let Some(k) = hits.iter().position(|&h| h == 0) {
        return Err(Error::NoFactorization(format!(
            "{side}: dinatural {k} does not factor"
        )));
    }
    Ok(out)
}

fn transposes(j: &Cokusarigama, k: &Kusarigama, lim: &Limits) -> Result<Transposes> {
    let (f, g) = (&j.f, &k.g);
    let jr = j.result()?;
    let kr = k.result()?;
    let fm = SetFunctorPQ::materialize(f.as_ref(), lim)?;
    let gm = SetFunctorPQ::materialize(g.as_ref(), lim)?;
    let dinats = enumerate_dinat(f, g, lim)?;
    let index: HashMap<Vec<Vec<usize>>, usize> = dinats
        .iter()
        .enumerate()
        .map(|(i, d)| (d.tables(), i))
        .collect();
    let nat_j = enumerate_nat(jr.functor.functor(), gm.functor(), lim)?;
    let nat_g = enumerate_nat(fm.functor(), kr.functor.functor(), lim)?;
    let left = match_dinats(
        nat_j.iter().map(|a| compose_nat_with(a, &jr.unit, g)),
        &index,
        dinats.len(),
        "through the unit",
    )?;
    let right = match_dinats(
        nat_g.iter().map(|b| compose_with_nat(&kr.counit, b, f)),
        &index,
        dinats.len(),
        "through the counit",
    )?;
    Ok(Transposes {
        fm,
        gm,
        nat_j,
        nat_g,
        dinats: dinats.len(),
        left,
        right,
    })
}

/// The three counts `|Nat(J F, G)|`, `|DiNat(F, G)|`, `|Nat(F, Γ G)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub nat_from_j: usize,
    pub dinat: usize,
    pub nat_to_gamma: usize,
}

/// Checks that every dinatural `F ⇒̈ G` factors uniquely through `η` and through `ε`.
pub fn factorization_check(
    f: &Arc<dyn Integrand>,
    g: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<FactorizationReport> {
    check_types(f.as_ref(), g.as_ref())?;
    let t = transposes(&Cokusarigama::new(f, lim), &Kusarigama::new(g, lim), lim)?;
    Ok(FactorizationReport {
        nat_from_j: t.nat_j.len(),
        dinat: t.dinats,
        nat_to_gamma: t.nat_g.len(),
    })
}

/// `J(δ)` for a natural `δ : F ⇒ F'`, on representatives.
pub fn cokusarigama_on_nat(
    src: &Cokusarigama,
    dst: &Cokusarigama,
    delta: &NatTransf,
    lim: &Limits,
) -> Result<NatTransf> {
    let (js, jd) = (
        SetFunctorPQ::materialize(src, lim)?,
        SetFunctorPQ::materialize(dst, lim)?,
    );
    let n = src.f.sig().arity();
    let power = js.power().clone();
    let mut components = Vec::with_capacity(power.n_objects());
    for o in 0..power.n_objects() {
        let t = power.decode_obj(o);
        let (from, to) = (src.fiber_coend(&t)?, dst.fiber_coend(&t)?);
        let mut table = Vec::with_capacity(from.len());
        for &(a, e) in &from.carrier.reps {
            let mut d = crate::decode(e, &src.diag_radices(&t, a)?);
            d[n] = diag_component(delta, a, n).apply(d[n]);
            table.push(to.class_of(a, crate::encode(&d, &dst.diag_radices(&t, a)?)));
        }
        components.push(FinFn::new(
            js.functor().fiber(o).clone(),
            jd.functor().fiber(o).clone(),
            table,
        )?);
    }
    let nat = NatTransf {
        source: js.functor().clone(),
        target: jd.functor().clone(),
        components,
    };
    nat.validate()?;
    Ok(nat)
}

/// `Γ(γ)` for a natural `γ : G ⇒ G'`, by postcomposing every family member.
pub fn kusarigama_on_nat(
    src: &Kusarigama,
    dst: &Kusarigama,
    gamma: &NatTransf,
    lim: &Limits,
) -> Result<NatTransf> {
    let (gs, gd) = (
        SetFunctorPQ::materialize(src, lim)?,
        SetFunctorPQ::materialize(dst, lim)?,
    );
    let n = src.g.sig().arity();
    let power = gs.power().clone();
    let mut components = Vec::with_capacity(power.n_objects());
    for o in 0..power.n_objects() {
        let t = power.decode_obj(o);
        let (from, to) = (src.fiber_end(&t)?, dst.fiber_end(&t)?);
        let mut table = Vec::with_capacity(from.len());
        for e in 0..from.len() {
            let comps = from.family(e);
            let mut out = Vec::with_capacity(comps.len());
            for (a, &phi) in comps.iter().enumerate() {
                let s = vec![a; n];
                let ne: usize = src.dom_radices(&t, &s).iter().product();
                let (gl, gl2) = (src.g.fiber(&s)?.len(), dst.g.fiber(&s)?.len());
                let ga = diag_component(gamma, a, n);
                let mapped: Vec<usize> = decode_fn(phi, ne, gl)
                    .into_iter()
                    .map(|y| ga.apply(y))
                    .collect();
                out.push(encode_fn(&mapped, gl2));
            }
            table.push(to.find_family(&out).ok_or_else(|| {
                Error::LawFailure("postcomposed family is not in the end".into())
            })?);
        }
        components.push(FinFn::new(
            gs.functor().fiber(o).clone(),
            gd.functor().fiber(o).clone(),
            table,
        )?);
    }
    let nat = NatTransf {
        source: gs.functor().clone(),
        target: gd.functor().clone(),
        components,
    };
    nat.validate()?;
    Ok(nat)
}

/// Up to `k` elements spread over a list: first, last and evenly spaced between.
fn sample<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    let mut idx: Vec<usize> = (0..k).map(|i| i * (v.len() - 1) / (k - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| v[i].clone()).collect()
}

/// Outcome of the adjunction check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub counts: FactorizationReport,
    /// Number of naturality squares checked (in `F` and in `G`).
    pub squares: usize,
}

/// `Nat(J F, G) ≅ Nat(F, Γ G)`: the bijection through the dinaturals, and its naturality
/// against endomorphisms of `F` and of `G` (at most `samples` of each).
pub fn check_adjunction(
    f: &Arc<dyn Integrand>,
    g: &Arc<dyn Integrand>,
    samples: usize,
    lim: &Limits,
) -> Result<AdjunctionReport> {
    check_types(f.as_ref(), g.as_ref())?;
    let (j, k) = (Cokusarigama::new(f, lim), Kusarigama::new(g, lim));
    let t = transposes(&j, &k, lim)?;
    let mut by_dinat = vec![0; t.dinats];
    for (b, &d) in t.right.iter().enumerate() {
        by_dinat[d] = b;
    }
    let phi = |a: usize| by_dinat[t.left[a]];
    let find = |list: &[NatTransf], n: &NatTransf, what: &str| -> Result<usize> {
        let key: Vec<Vec<usize>> = n.components.iter().map(|c| c.table.clone()).collect();
        list.iter()
            .position(|m| {
                m.components
                    .iter()
                    .map(|c| c.table.clone())
                    .collect::<Vec<_>>()
                    == key
            })
            .ok_or_else(|| Error::LawFailure(format!("{what} is not natural")))
    };
    let mut squares = 0;
    // Naturality in G: Φ(γ ∘ α) = Γ(γ) ∘ Φ(α).
    for gamma in sample(
        &enumerate_nat(t.gm.functor(), t.gm.functor(), lim)?,
        samples,
    ) {
        let gam = kusarigama_on_nat(&k, &k, &gamma, lim)?;
        for (a, alpha) in t.nat_j.iter().enumerate() {
            let lhs = phi(find(&t.nat_j, &alpha.then(&gamma), "γ ∘ α")?);
            let rhs = find(&t.nat_g, &t.nat_g[phi(a)].then(&gam), "Γ(γ) ∘ Φ(α)")?;
            if lhs != rhs {
                return Err(Error::LawFailure(
                    "transpose is not natural in the target".into(),
                ));
            }
            squares += 1;
        }
    }
    // Naturality in F: Φ(α ∘ J(δ)) = Φ(α) ∘ δ.
    for delta in sample(
        &enumerate_nat(t.fm.functor(), t.fm.functor(), lim)?,
        samples,
    ) {
        let jd = cokusarigama_on_nat(&j, &j, &delta, lim)?;
        for (a, alpha) in t.nat_j.iter().enumerate() {
            let lhs = phi(find(&t.nat_j, &jd.then(alpha), "α ∘ J(δ)")?);
            let rhs = find(&t.nat_g, &delta.then(&t.nat_g[phi(a)]), "Φ(α) ∘ δ")?;
            if lhs != rhs {
                return Err(Error::LawFailure(
                    "transpose is not natural in the source".into(),
                ));
            }
            squares += 1;
        }
    }
    Ok(AdjunctionReport {
        counts: FactorizationReport {
            nat_from_j: t.nat_j.len(),
            dinat: t.dinats,
            nat_to_gamma: t.nat_g.len(),
        },
        squares,
    })
}

/// `Set(F(−), S)`, of the dual signature.
pub fn hom_into(f: &Arc<dyn Integrand>, s: &FinSet, lim: &Limits) -> FnIntegrand {
    let sig = f.sig();
    let q = sig.q;
    let swap = move |t: &[usize]| -> Vec<usize> { t[q..].iter().chain(&t[..q]).copied().collect() };
    let (f1, f2, s1, s2, lim) = (f.clone(), f.clone(), s.clone(), s.len(), *lim);
    let c = f.base().clone();
    let c2 = c.clone();
    FnIntegrand::new(
        &c,
        sig.dual(),
        format!("Set({}, {})", f.label(), s),
        move |t| hom_set(&f1.fiber(&swap(t))?, &s1, &lim),
        move |m, psi| {
            let m2 = swap(m);
            let (src, tgt) = (tuple_source(&c2, sig, &m2), tuple_target(&c2, sig, &m2));
            let (ns, nt) = (f2.fiber(&src)?.len(), f2.fiber(&tgt)?.len());
            let table = decode_fn(psi, nt, s2);
            let out = (0..ns)
                .map(|y| Ok(table[f2.act(&m2, y)?]))
                .collect::<Result<Vec<_>>>()?;
            Ok(encode_fn(&out, s2))
        },
    )
}

/// `Set(J F(−), S) ≅ Γ(Set(F(−), S))`: the comparison map is built at every tuple and checked
/// to be a bijection. Returns the number of tuples checked.
pub fn check_hom_commutation(f: &Arc<dyn Integrand>, s: &FinSet, lim: &Limits) -> Result<usize> {
    let sig = f.sig();
    let (p, q) = (sig.p, sig.q);
    let n = p + q;
    let c = f.base().clone();
    let j = Cokusarigama::new(f, lim);
    let h: Arc<dyn Integrand> = Arc::new(hom_into(f, s, lim));
    let k = Kusarigama::new(&h, lim);
    let power = power_pq(&c, sig, lim)?;
    for o in 0..power.n_objects() {
        // Γ(H) at (X̲[p]; Y̲[q]) against Set(J F(Y̲; X̲), S).
        let t = power.decode_obj(o);
        let tj: Vec<Obj> = t[p..].iter().chain(&t[..p]).copied().collect();
        let co = j.fiber_coend(&tj)?;
        let en = k.fiber_end(&t)?;
        let total = fn_count(co.len(), s.len());
        check_cap("hom commutation", total, lim)?;
        if total != en.len() as u128 {
            return Err(Error::BijectionFailure(format!(
                "{total} maps out of the cokusarigama, {} families",
                en.len()
            )));
        }
        let mut seen = vec![false; en.len()];
        for phi in 0..total as usize {
            let phi = decode_fn(phi, co.len(), s.len());
            let mut comps = Vec::with_capacity(c.n_objects());
            for a in 0..c.n_objects() {
                let sa = vec![a; n];
                let dr = k.dom_radices(&t, &sa);
                let jr = j.diag_radices(&tj, a)?;
                let fl = f.fiber(&sa)?.len();
                let ne: usize = dr.iter().product();
                let mut fam = Vec::with_capacity(ne);
                for e in 0..ne {
                    // (k_i : A → X_i, l_j : Y_j → A) ↦ (x ↦ φ[A, l, k, x]).
                    let d = crate::decode(e, &dr);
                    let mut digits: Vec<usize> = d[p..].to_vec();
                    digits.extend_from_slice(&d[..p]);
                    digits.push(0);
                    let tab: Vec<usize> = (0..fl)
                        .map(|x| {
                            digits[n] = x;
                            phi[co.class_of(a, crate::encode(&digits, &jr))]
                        })
                        .collect();
                    fam.push(encode_fn(&tab, s.len()));
                }
                comps.push(encode_fn(&fam, h.fiber(&sa)?.len()));
            }
            let e = en
                .find_family(&comps)
                .ok_or_else(|| Error::LawFailure("transposed map is not a wedge family".into()))?;
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::BijectionFailure(
                    "two maps give the same family".into(),
                ));
            }
        }
    }
    Ok(power.n_objects())
}

/// Sizes on both sides of the end/limit and coend/colimit comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitsReport {
    pub end: usize,
    pub limit: usize,
    pub coend: usize,
    pub colimit: usize,
}

/// `∫ F ≅ lim Γ(F)` and `∫^ F ≅ colim J(F)`, with explicit maps checked bijective and
/// compatible with the universal wedge and cowedge.
pub fn check_limits_of_kusarigama(f: &Arc<dyn Integrand>, lim: &Limits) -> Result<LimitsReport> {
    let c = f.base().clone();
    let n = f.sig().arity();
    let nobj = c.n_objects();
    // End side: x ↦ constant families.
    let e = end(f.as_ref(), lim)?;
    let k = Kusarigama::new(f, lim);
    let gf = SetFunctorPQ::materialize(&k, lim)?;
    let l = limit(gf.functor(), lim)?;
    let lindex: HashMap<Vec<usize>, usize> = (0..l.carrier.len())
        .map(|x| (l.legs.iter().map(|g| g.apply(x)).collect(), x))
        .collect();
    let power = gf.power().clone();
    let mut seen = vec![false; l.carrier.len()];
    for x in 0..e.len() {
        let fam = e.family(x);
        let mut cone = Vec::with_capacity(power.n_objects());
        for o in 0..power.n_objects() {
            let t = power.decode_obj(o);
            let mut comps = Vec::with_capacity(nobj);
            for a in 0..nobj {
                let s = vec![a; n];
                let ne: usize = k.dom_radices(&t, &s).iter().product();
                comps.push(encode_fn(&vec![fam[a]; ne], f.fiber(&s)?.len()));
            }
            cone.push(
                k.fiber_end(&t)?
                    .find_family(&comps)
                    .ok_or_else(|| Error::LawFailure("constant family is not in the end".into()))?,
            );
        }
        let y = *lindex
            .get(&cone)
            .ok_or_else(|| Error::LawFailure("constant families do not form a cone".into()))?;
        if std::mem::replace(&mut seen[y], true) {
            return Err(Error::BijectionFailure(
                "end to limit is not injective".into(),
            ));
        }
        for a in 0..nobj {
            if k.counit_at(a, cone[power.encode_obj(&vec![a; n])])? != fam[a] {
                return Err(Error::LawFailure(
                    "end to limit does not commute with the wedge".into(),
                ));
            }
        }
    }
    if e.len() != l.carrier.len() {
        return Err(Error::BijectionFailure(format!(
            "end has {} elements, limit {}",
            e.len(),
            l.carrier.len()
        )));
    }
    // Coend side: [A, x] ↦ colim leg at ΔA of η_A(x).
    let co = coend(f.as_ref(), lim)?;
    let j = Cokusarigama::new(f, lim);
    let jf = SetFunctorPQ::materialize(&j, lim)?;
    let cl = colimit(jf.functor(), lim)?;
    let mut img: Vec<Option<usize>> = vec![None; co.len()];
    for a in 0..nobj {
        let s = vec![a; n];
        for x in 0..f.fiber(&s)?.len() {
            let y = cl.legs[jf.power().encode_obj(&s)].apply(j.unit_at(a, x)?);
            let slot = &mut img[co.class_of(a, x)];
            if slot.is_some_and(|z| z != y) {
                return Err(Error::LawFailure(
                    "coend to colimit is not well defined".into(),
                ));
            }
            *slot = Some(y);
        }
    }
    let mut hit = vec![false; cl.carrier.len()];
    for y in img.into_iter().flatten() {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::BijectionFailure(
                "coend to colimit is not injective".into(),
            ));
        }
    }
    if co.len() != cl.carrier.len() {
        return Err(Error::BijectionFailure(format!(
            "coend has {} elements, colimit {}",
            co.len(),
            cl.carrier.len()
        )));
    }
    Ok(LimitsReport {
        end: e.len(),
        limit: l.carrier.len(),
        coend: co.len(),
        colimit: cl.carrier.len(),
    })
}

/// Direction of a Kan extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KanDirection {
    Left,
    Right,
}

/// A pointwise Kan extension with the co/end computed at each object of the target.
pub struct KanResult {
    pub functor: SetFunctor,
    pub coends: Vec<CoendPQ>,
    pub ends: Vec<EndPQ>,
}

fn kan_integrand(
    f: &SetFunctor,
    k: &Functor,
    b: Obj,
    dir: KanDirection,
    lim: &Limits,
) -> FnIntegrand {
    let (a, bc) = (k.source.clone(), k.target.clone());
    let (f1, f2, b1, b2, k1, k2, lim) = (
        f.clone(),
        f.clone(),
        bc.clone(),
        bc,
        k.clone(),
        k.clone(),
        *lim,
    );
    match dir {
        // hom(K a₁, b) × F(a₂)
        KanDirection::Left => FnIntegrand::new(
            &a,
            Sig::new(1, 1),
            "left Kan integrand",
            move |s| {
                product(
                    &[hom_fiber(&b1, k1.obj[s[0]], b), f1.fiber(s[1]).clone()],
                    &lim,
                )
            },
            move |m, e| {
                let (s0, s1, t0, t1) = (
                    k2.source.dst(m[0]),
                    k2.source.src(m[1]),
                    k2.source.src(m[0]),
                    k2.source.dst(m[1]),
                );
                let d = crate::decode(e, &[b2.hom_len(k2.obj[s0], b), f2.fiber(s1).len()]);
                let h = b2.compose(b2.hom(k2.obj[s0], b)[d[0]], k2.mor[m[0]]);
                let x = f2.map(m[1]).apply(d[1]);
                Ok(crate::encode(
                    &[b2.hom_pos(h), x],
                    &[b2.hom_len(k2.obj[t0], b), f2.fiber(t1).len()],
                ))
            },
        ),
        // Set(hom(b, K a₁), F(a₂))
        KanDirection::Right => FnIntegrand::new(
            &a,
            Sig::new(1, 1),
            "right Kan integrand",
            move |s| hom_set(&hom_fiber(&b1, b, k1.obj[s[0]]), f1.fiber(s[1]), &lim),
            move |m, phi| {
                let sc = &k2.source;
                let (s0, s1, t0) = (sc.dst(m[0]), sc.src(m[1]), sc.src(m[0]));
                let table = decode_fn(phi, b2.hom_len(b, k2.obj[s0]), f2.fiber(s1).len());
                let out: Vec<usize> = b2
                    .hom(b, k2.obj[t0])
                    .into_iter()
                    .map(|h| {
                        f2.map(m[1])
                            .apply(table[b2.hom_pos(b2.compose(k2.mor[m[0]], h))])
                    })
                    .collect();
                Ok(encode_fn(&out, f2.fiber(sc.dst(m[1])).len()))
            },
        ),
    }
}

/// `Lan_K F` or `Ran_K F` with the co/ends it was computed from.
pub fn kan_extension_full(
    f: &SetFunctor,
    k: &Functor,
    dir: KanDirection,
    lim: &Limits,
) -> Result<KanResult> {
    if !same_shape(f.domain(), &k.source) {
        return Err(Error::ShapeMismatch(
            "functor and Kan direction have different domains".into(),
        ));
    }
    let bc = k.target.clone();
    let nb = bc.n_objects();
    let ints: Vec<FnIntegrand> = (0..nb).map(|b| kan_integrand(f, k, b, dir, lim)).collect();
    let mut maps = Vec::with_capacity(bc.n_morphisms());
    match dir {
        KanDirection::Left => {
            let coends = ints
                .iter()
                .map(|d| coend(d, lim))
                .collect::<Result<Vec<_>>>()?;
            let fibers: Vec<FinSet> = coends.iter().map(|c| c.carrier.carrier.clone()).collect();
            for v in 0..bc.n_morphisms() {
                let (b, b2) = (bc.src(v), bc.dst(v));
                let table = coends[b]
                    .carrier
                    .reps
                    .iter()
                    .map(|&(a, e)| {
                        let ka = k.obj[a];
                        let d = crate::decode(e, &[bc.hom_len(ka, b), f.fiber(a).len()]);
                        let h = bc.compose(v, bc.hom(ka, b)[d[0]]);
                        coends[b2].class_of(
                            a,
                            crate::encode(
                                &[bc.hom_pos(h), d[1]],
                                &[bc.hom_len(ka, b2), f.fiber(a).len()],
                            ),
                        )
                    })
                    .collect();
                maps.push(FinFn::new(fibers[b].clone(), fibers[b2].clone(), table)?);
            }
            let functor = SetFunctor::new(bc, fibers, maps)?;
            Ok(KanResult {
                functor,
                coends,
                ends: Vec::new(),
            })
        }
        KanDirection::Right => {
            let ends = ints
                .iter()
                .map(|d| end(d, lim))
                .collect::<Result<Vec<_>>>()?;
            let fibers: Vec<FinSet> = ends.iter().map(|c| c.carrier.carrier.clone()).collect();
            for v in 0..bc.n_morphisms() {
                let (b, b2) = (bc.src(v), bc.dst(v));
                let mut table = Vec::with_capacity(ends[b].len());
                for e in 0..ends[b].len() {
                    let comps: Vec<usize> = ends[b]
                        .family(e)
                        .into_iter()
                        .enumerate()
                        .map(|(a, phi)| {
                            let ka = k.obj[a];
                            let fl = f.fiber(a).len();
                            let t = decode_fn(phi, bc.hom_len(b, ka), fl);
                            let out: Vec<usize> = bc
                                .hom(b2, ka)
                                .into_iter()
                                .map(|h| t[bc.hom_pos(bc.compose(h, v))])
                                .collect();
                            encode_fn(&out, fl)
                        })
                        .collect();
                    table.push(ends[b2].find_family(&comps).ok_or_else(|| {
                        Error::LawFailure("right Kan action leaves the end".into())
                    })?);
                }
                maps.push(FinFn::new(fibers[b].clone(), fibers[b2].clone(), table)?);
            }
            let functor = SetFunctor::new(bc, fibers, maps)?;
            Ok(KanResult {
                functor,
                coends: Vec::new(),
                ends,
            })
        }
    }
}

/// `Lan_K F` (coend of `hom(K−, b) × F`) or `Ran_K F` (end of `Set(hom(b, K−), F)`).
pub fn kan_extension(
    f: &SetFunctor,
    k: &Functor,
    dir: KanDirection,
    lim: &Limits,
) -> Result<SetFunctor> {
    Ok(kan_extension_full(f, k, dir, lim)?.functor)
}

/// Both sides of the Kan adjunction against `G` on the target: `(|Nat(Lan F, G)|, |Nat(F, G∘K)|)`
/// for left, `(|Nat(G, Ran F)|, |Nat(G∘K, F)|)` for right.
pub fn kan_adjunction_counts(
    f: &SetFunctor,
    k: &Functor,
    g: &SetFunctor,
    dir: KanDirection,
    lim: &Limits,
) -> Result<(usize, usize)> {
    let ext = kan_extension(f, k, dir, lim)?;
    let gk = g.pullback(k)?;
    Ok(match dir {
        KanDirection::Left => (
            enumerate_nat(&ext, g, lim)?.len(),
            enumerate_nat(f, &gk, lim)?.len(),
        ),
        KanDirection::Right => (
            enumerate_nat(g, &ext, lim)?.len(),
            enumerate_nat(&gk, f, lim)?.len(),
        ),
    })
}

/// `J^{p,q}(F) ≅ Lan_Δ J^{1,1}(Δ* F)` along `Δ : C^op × C → C^{(q,p)}`: the map
/// `(k, [C, g, f, x]) ↦ [C, g ∘ k_j, k_i ∘ f, x]` is checked well defined on every member and
/// bijective at every tuple. Returns the number of tuples.
pub fn check_from_diagonal(f: &SetFunctorPQ, lim: &Limits) -> Result<usize> {
    let c = f.base().clone();
    let sig = f.sig();
    let (p, q) = (sig.p, sig.q);
    let fa: Arc<dyn Integrand> = Arc::new(f.clone());
    let big = Cokusarigama::new(&fa, lim);
    let diag: Arc<dyn Integrand> = Arc::new(f.restrict_diagonal(lim)?);
    let small = Cokusarigama::new(&diag, lim);
    let j11 = SetFunctorPQ::materialize(&small, lim)?;
    let k = diagonal_functor(&c, sig.dual(), lim)?;
    let k = Functor {
        source: j11.power().clone(),
        ..k
    };
    let lan = kan_extension_full(j11.functor(), &k, KanDirection::Left, lim)?;
    let (pw, p11) = (k.target.clone(), k.source.clone());
    for o in 0..pw.n_objects() {
        let t = pw.decode_obj(o);
        let jb = big.fiber_coend(&t)?;
        let co = &lan.coends[o];
        let mut img: Vec<Option<usize>> = vec![None; co.len()];
        for u in 0..p11.n_objects() {
            let uv = p11.decode_obj(u);
            let js = small.fiber_coend(&uv)?;
            for cc in 0..c.n_objects() {
                let r11 = small.diag_radices(&uv, cc)?;
                let rb = big.diag_radices(&t, cc)?;
                let ne: usize = r11.iter().product();
                for e in 0..ne {
                    let d = crate::decode(e, &r11);
                    let (g, fm, x) = (c.hom(uv[0], cc)[d[0]], c.hom(cc, uv[1])[d[1]], d[2]);
                    let cls = js.class_of(cc, e);
                    for h in pw.hom(k.obj[u], o) {
                        let ks = pw.decode_mor(h);
                        let mut digits = Vec::with_capacity(p + q + 1);
                        for &kj in &ks[..q] {
                            digits.push(c.hom_pos(c.compose(g, kj)));
                        }
                        for &ki in &ks[q..] {
                            digits.push(c.hom_pos(c.compose(ki, fm)));
                        }
                        digits.push(x);
                        let y = jb.class_of(cc, crate::encode(&digits, &rb));
                        let hl = pw.hom_len(k.obj[u], o);
                        let lc = co.class_of(
                            u,
                            crate::encode(
                                &[pw.hom_pos(h), cls],
                                &[hl, j11.functor().fiber(u).len()],
                            ),
                        );
                        if img[lc].is_some_and(|z| z != y) {
                            return Err(Error::LawFailure(
                                "diagonal comparison is not well defined".into(),
                            ));
                        }
                        img[lc] = Some(y);
                    }
                }
            }
        }
        let mut hit = vec![false; jb.len()];
        for y in img.iter().flatten() {
            if std::mem::replace(&mut hit[*y], true) {
                return Err(Error::BijectionFailure(
                    "diagonal comparison is not injective".into(),
                ));
            }
        }
        if img.iter().any(Option::is_none) || hit.iter().any(|h| !h) {
            return Err(Error::BijectionFailure(format!(
                "diagonal comparison: {} against {}",
                co.len(),
                jb.len()
            )));
        }
    }
    Ok(pw.n_objects())
}

/// Outcome of the full law suite on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KusarigamaLawReport {
    pub adjunction: AdjunctionReport,
    pub hom_tuples: usize,
    pub limits: LimitsReport,
    pub diagonal_tuples: usize,
}

/// Adjunction, hom commutation, limits and the diagonal reduction for `F` (and `G` of the
/// dual signature), with `S` the test set for hom commutation.
pub fn check_kusarigama_laws(
    f: &SetFunctorPQ,
    g: &SetFunctorPQ,
    s: &FinSet,
    lim: &Limits,
) -> Result<KusarigamaLawReport> {
    let fa: Arc<dyn Integrand> = Arc::new(f.clone());
    let ga: Arc<dyn Integrand> = Arc::new(g.clone());
    Ok(KusarigamaLawReport {
        adjunction: check_adjunction(&fa, &ga, 3, lim)?,
        hom_tuples: check_hom_commutation(&fa, s, lim)?,
        limits: check_limits_of_kusarigama(&fa, lim)?,
        diagonal_tuples: check_from_diagonal(f, lim)?,
    })
}

/// Both computations of one cokusarigama or kusarigama fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwJReport {
    pub pointwise: usize,
    pub via_tw_j: usize,
}

/// `J(D)` at `(A; B)` as the colimit of `D` over the opposite of `Tw_J^{A,B}(C)`. The map sends `[C, g, f, x]`
/// to the square with `Y = X = C`, `ψ = g`, `φ = f` and identity middle; it is checked on
/// every member of every class and must be a bijection.
pub fn cokusarigama_via_tw_j(d: &SetFunctorPQ, a: Obj, b: Obj, lim: &Limits) -> Result<TwJReport> {
    if d.sig() != Sig::new(1, 1) {
        return Err(Error::ShapeMismatch(
            "twisted comparison needs signature (1,1)".into(),
        ));
    }
    let c = d.base().clone();
    let da: Arc<dyn Integrand> = Arc::new(d.clone());
    let j = Cokusarigama::new(&da, lim);
    let t = [a, b];
    let jf = j.fiber_coend(&t)?;
    let tw = tw_j(&c, a, b, lim)?;
    let (_, proj) = tw_j_opposite(&tw, &c, lim)?;
    let dv = d.functor().pullback(&Functor {
        target: d.power().clone(),
        ..proj
    })?;
    let cl = colimit(&dv, lim)?;
    let mut img: Vec<Option<usize>> = vec![None; jf.len()];
    for cc in 0..c.n_objects() {
        let r = j.diag_radices(&t, cc)?;
        let ne: usize = r.iter().product();
        for e in 0..ne {
            let dg = crate::decode(e, &r);
            let (g, f, x) = (c.hom(a, cc)[dg[0]], c.hom(cc, b)[dg[1]], dg[2]);
            let o = tw.find(&c, cc, cc, c.compose(f, g), g, f, c.identity(cc));
            let y = cl.legs[o].apply(x);
            let slot = &mut img[jf.class_of(cc, e)];
            if slot.is_some_and(|z| z != y) {
                return Err(Error::LawFailure(
                    "twisted comparison is not well defined".into(),
                ));
            }
            *slot = Some(y);
        }
    }
    check_bijective(&img, cl.carrier.len(), "twisted comparison")?;
    Ok(TwJReport {
        pointwise: jf.len(),
        via_tw_j: cl.carrier.len(),
    })
}

/// `Γ(D)` at `(X; Y)` as the limit of `D` over `Tw_J^{Y,X}(C)`. A cone is sent to the family
/// `φ_U(k, l)` read at the square with `Y' = X' = U`, `ψ = l`, `φ = k` and identity middle.
pub fn kusarigama_via_tw_j(d: &SetFunctorPQ, x: Obj, y: Obj, lim: &Limits) -> Result<TwJReport> {
    if d.sig() != Sig::new(1, 1) {
        return Err(Error::ShapeMismatch(
            "twisted comparison needs signature (1,1)".into(),
        ));
    }
    let c = d.base().clone();
    let da: Arc<dyn Integrand> = Arc::new(d.clone());
    let k = Kusarigama::new(&da, lim);
    let t = [x, y];
    let en = k.fiber_end(&t)?;
    let tw = tw_j(&c, y, x, lim)?;
    let proj = tw_j_projection(&tw, &c, lim)?;
    let dv = d.functor().pullback(&Functor {
        target: d.power().clone(),
        ..proj
    })?;
    let l = limit(&dv, lim)?;
    let mut img = Vec::with_capacity(l.carrier.len());
    for z in 0..l.carrier.len() {
        let mut comps = Vec::with_capacity(c.n_objects());
        for u in 0..c.n_objects() {
            let s = [u, u];
            let r = k.dom_radices(&t, &s);
            let ne: usize = r.iter().product();
            let fam: Vec<usize> = (0..ne)
                .map(|e| {
                    let dg = crate::decode(e, &r);
                    let (kk, ll) = (c.hom(u, x)[dg[0]], c.hom(y, u)[dg[1]]);
                    l.legs[tw.find(&c, u, u, c.compose(kk, ll), ll, kk, c.identity(u))].apply(z)
                })
                .collect();
            comps.push(encode_fn(&fam, d.fiber_at(&s).len()));
        }
        img.push(en.find_family(&comps));
    }
    if img.iter().any(Option::is_none) {
        return Err(Error::LawFailure(
            "cone restricts to a non-wedge family".into(),
        ));
    }
    check_bijective(&img, en.len(), "twisted limit comparison")?;
    Ok(TwJReport {
        pointwise: en.len(),
        via_tw_j: l.carrier.len(),
    })
}

fn check_bijective(img: &[Option<usize>], cod: usize, what: &str) -> Result<()> {
    let mut hit = vec![false; cod];
    for y in img.iter().flatten() {
        if std::mem::replace(&mut hit[*y], true) {
            return Err(Error::BijectionFailure(format!("{what} is not injective")));
        }
    }
    if img.iter().any(Option::is_none) || hit.iter().any(|h| !h) {
        return Err(Error::BijectionFailure(format!(
            "{what}: {} against {cod}",
            img.len()
        )));
    }
    Ok(())
}

/// `J^{p,q}(pt)` against `hom_Π` of signature `(q,p)`: the map sending `[A, g, f]` to the grid of
/// composites `f_i ∘ g_j` is always well defined; returns whether it is a bijection everywhere.
pub fn point_cokusarigama_vs_grid(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<bool> {
    let (p, q) = (sig.p, sig.q);
    let pt: Arc<dyn Integrand> = Arc::new(ConstIntegrand::new(c, sig, FinSet::point()));
    let j = Cokusarigama::new(&pt, lim);
    let grid = hom_pi(c, sig.dual(), lim)?;
    let pw = grid.power().clone();
    let mut bijective = true;
    for o in 0..pw.n_objects() {
        let t = pw.decode_obj(o);
        let co = j.fiber_coend(&t)?;
        let gr: Vec<usize> = (0..q)
            .flat_map(|jx| (0..p).map(move |i| (jx, i)))
            .map(|(jx, i)| c.hom_len(t[jx], t[q + i]))
            .collect();
        let mut img: Vec<Option<usize>> = vec![None; co.len()];
        for a in 0..c.n_objects() {
            let r = j.diag_radices(&t, a)?;
            for e in 0..r.iter().product() {
                let d = crate::decode(e, &r);
                let cells: Vec<usize> = (0..q)
                    .flat_map(|jx| (0..p).map(move |i| (jx, i)))
                    .map(|(jx, i)| {
                        let g = c.hom(t[jx], a)[d[jx]];
                        let f = c.hom(a, t[q + i])[d[q + i]];
                        c.hom_pos(c.compose(f, g))
                    })
                    .collect();
                let y = crate::encode(&cells, &gr);
                let slot = &mut img[co.class_of(a, e)];
                if slot.is_some_and(|z| z != y) {
                    return Err(Error::LawFailure("grid map is not well defined".into()));
                }
                *slot = Some(y);
            }
        }
        bijective &= check_bijective(&img, grid.functor().fiber(o).len(), "grid map").is_ok();
    }
    Ok(bijective)
}

/// A finite lattice structure on a thin category.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub cat: Arc<FinCat>,
    join: Vec<Vec<Obj>>,
    meet: Vec<Vec<Obj>>,
    pub bottom: Obj,
    pub top: Obj,
}

impl Lattice {
    pub fn new(c: &Arc<FinCat>) -> Result<Lattice> {
        if !c.is_thin() || c.n_objects() == 0 {
            return Err(Error::NotALattice(format!(
                "{} is not a nonempty poset",
                c.name()
            )));
        }
        let n = c.n_objects();
        let le = |a: Obj, b: Obj| c.hom_len(a, b) > 0;
        let bound = |ok: &dyn Fn(Obj) -> bool, least: bool| -> Option<Obj> {
            let cands: Vec<Obj> = (0..n).filter(|&z| ok(z)).collect();
            cands.iter().copied().find(|&z| {
                cands
                    .iter()
                    .all(|&w| if least { le(z, w) } else { le(w, z) })
            })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(&|z| le(a, z) && le(b, z), true).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "no join of {} and {}",
                        c.object_name(a),
                        c.object_name(b)
                    ))
                })?;
                meet[a][b] = bound(&|z| le(z, a) && le(z, b), false).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "no meet of {} and {}",
                        c.object_name(a),
                        c.object_name(b)
                    ))
                })?;
            }
        }
        let bottom =
            bound(&|_| true, true).ok_or_else(|| Error::NotALattice("no bottom".into()))?;
        let top = bound(&|_| true, false).ok_or_else(|| Error::NotALattice("no top".into()))?;
        Ok(Lattice {
            cat: c.clone(),
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn le(&self, a: Obj, b: Obj) -> bool {
        self.cat.hom_len(a, b) > 0
    }

    pub fn join_all(&self, xs: &[Obj]) -> Obj {
        xs.iter().fold(self.bottom, |acc, &x| self.join[acc][x])
    }

    pub fn meet_all(&self, xs: &[Obj]) -> Obj {
        xs.iter().fold(self.top, |acc, &x| self.meet[acc][x])
    }
}

/// Checks `J(E)(X̲; Y̲) ≅ hom(∨X̲, ∧Y̲) × E` and `Γ(E)(X̲; Y̲) ≅ Set(hom(∨Y̲, ∧X̲), E)` for the
/// constant functor at `E` of signature `sig`, with `[A, g, f, e] ↦ e` checked bijective
/// wherever the hom is inhabited. Returns the number of tuples checked.
pub fn check_constant_on_lattice(
    lat: &Lattice,
    sig: Sig,
    e: &FinSet,
    lim: &Limits,
) -> Result<usize> {
    let c = &lat.cat;
    let (p, q) = (sig.p, sig.q);
    let ea: Arc<dyn Integrand> = Arc::new(ConstIntegrand::new(c, sig, e.clone()));
    let j = Cokusarigama::new(&ea, lim);
    let pw = power_pq(c, sig.dual(), lim)?;
    for o in 0..pw.n_objects() {
        let t = pw.decode_obj(o);
        let inhabited = lat.le(lat.join_all(&t[..q]), lat.meet_all(&t[q..]));
        let co = j.fiber_coend(&t)?;
        if co.len() != if inhabited { e.len() } else { 0 } {
            return Err(Error::BijectionFailure(format!(
                "constant cokusarigama has {} elements at {t:?}",
                co.len()
            )));
        }
        let mut img: Vec<Option<usize>> = vec![None; co.len()];
        for a in 0..c.n_objects() {
            let r = j.diag_radices(&t, a)?;
            for x in 0..r.iter().product() {
                let y = crate::decode(x, &r)[p + q];
                let slot = &mut img[co.class_of(a, x)];
                if slot.is_some_and(|z| z != y) {
                    return Err(Error::LawFailure(
                        "constant cokusarigama map is not well defined".into(),
                    ));
                }
                *slot = Some(y);
            }
        }
        check_bijective(&img, co.len(), "constant cokusarigama map")?;
    }
    let sk = sig.dual();
    let ka: Arc<dyn Integrand> = Arc::new(ConstIntegrand::new(c, sk, e.clone()));
    let k = Kusarigama::new(&ka, lim);
    let pk = power_pq(c, sk.dual(), lim)?;
    for o in 0..pk.n_objects() {
        let t = pk.decode_obj(o);
        let (pp, _) = k.pq();
        let inhabited = lat.le(lat.join_all(&t[pp..]), lat.meet_all(&t[..pp]));
        let want = if inhabited { e.len() } else { 1 };
        if k.fiber_end(&t)?.len() != want {
            return Err(Error::BijectionFailure(format!(
                "constant kusarigama at {t:?} is not {want}"
            )));
        }
    }
    Ok(pw.n_objects() + pk.n_objects())
}

/// Object-valued co/kusarigama of the identity on a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub tuples: usize,
    /// Tuples at which `hom_Π(Y̲, X̲) ⊙ (Y̲, X̲)` read literally gives the computed object.
    pub literal_display_agrees: usize,
}

/// Least upper bound in `C^{(p,q)}` of a set of tuples, by search over all tuples (the initial
/// object for the empty set); `None` if there is none.
fn power_join(lat: &Lattice, sig: Sig, xs: &[Vec<Obj>], upper: bool) -> Option<Vec<Obj>> {
    let c = &lat.cat;
    let n = sig.arity();
    let le = |a: &[Obj], b: &[Obj]| {
        (0..n).all(|k| {
            if sig.is_contra(k) {
                lat.le(b[k], a[k])
            } else {
                lat.le(a[k], b[k])
            }
        })
    };
    let all: Vec<Vec<Obj>> = (0..c.n_objects().pow(n as u32))
        .map(|i| crate::decode(i, &vec![c.n_objects(); n]))
        .collect();
    let bounds: Vec<&Vec<Obj>> = all
        .iter()
        .filter(|z| xs.iter().all(|x| if upper { le(x, z) } else { le(z, x) }))
        .collect();
    bounds
        .iter()
        .find(|z| {
            bounds
                .iter()
                .all(|w| if upper { le(z, w) } else { le(w, z) })
        })
        .map(|z| z.to_vec())
}

/// `J^{p,q}(id)` and `Γ^{q,p}(id)` on a lattice, computed as a join (meet) in the power over the
/// bound objects with inhabited weight, against the closed forms `((∨X̲)^p; (∧Y̲)^q)` and
/// `((∧X̲)^q; (∨Y̲)^p)` (initial or terminal when the interval is empty).
pub fn kusarigama_of_identitylike(lat: &Lattice, sig: Sig) -> Result<IdentityReport> {
    let c = &lat.cat;
    let (p, q) = (sig.p, sig.q);
    let n = p + q;
    let no = c.n_objects();
    let tuples: Vec<Vec<Obj>> = (0..no.pow(n as u32))
        .map(|i| crate::decode(i, &vec![no; n]))
        .collect();
    let mut agrees = 0;
    for t in &tuples {
        // J: free (X̲[q]; Y̲[p]), value in C^{(p,q)}.
        let (xs, ys) = (&t[..q], &t[q..]);
        let diag: Vec<Vec<Obj>> = (0..no)
            .filter(|&a| xs.iter().all(|&x| lat.le(x, a)) && ys.iter().all(|&y| lat.le(a, y)))
            .map(|a| vec![a; n])
            .collect();
        let direct = power_join(lat, sig, &diag, true)
            .ok_or_else(|| Error::NotALattice("power has no join".into()))?;
        let (lo, hi) = (lat.join_all(xs), lat.meet_all(ys));
        let closed: Vec<Obj> = if lat.le(lo, hi) {
            std::iter::repeat_n(lo, p)
                .chain(std::iter::repeat_n(hi, q))
                .collect()
        } else {
            std::iter::repeat_n(lat.top, p)
                .chain(std::iter::repeat_n(lat.bottom, q))
                .collect()
        };
        if direct != closed {
            return Err(Error::LawFailure(format!(
                "identity cokusarigama at {t:?}: {direct:?} against {closed:?}"
            )));
        }
        let grid = ys.iter().all(|&y| xs.iter().all(|&x| lat.le(y, x)));
        let literal: Vec<Obj> = if grid {
            ys.iter().chain(xs).copied().collect()
        } else {
            std::iter::repeat_n(lat.top, p)
                .chain(std::iter::repeat_n(lat.bottom, q))
                .collect()
        };
        agrees += usize::from(literal == direct);
        // Γ of the identity on C^{(q,p)}: free (X̲[p]; Y̲[q]), value in C^{(q,p)}.
        let (xs, ys) = (&t[..p], &t[p..]);
        let diag: Vec<Vec<Obj>> = (0..no)
            .filter(|&a| xs.iter().all(|&x| lat.le(a, x)) && ys.iter().all(|&y| lat.le(y, a)))
            .map(|a| vec![a; n])
            .collect();
        let direct = power_join(lat, sig.dual(), &diag, false)
            .ok_or_else(|| Error::NotALattice("power has no meet".into()))?;
        let (lo, hi) = (lat.join_all(ys), lat.meet_all(xs));
        let closed: Vec<Obj> = if lat.le(lo, hi) {
            std::iter::repeat_n(hi, q)
                .chain(std::iter::repeat_n(lo, p))
                .collect()
        } else {
            std::iter::repeat_n(lat.bottom, q)
                .chain(std::iter::repeat_n(lat.top, p))
                .collect()
        };
        if direct != closed {
            return Err(Error::LawFailure(format!(
                "identity kusarigama at {t:?}: {direct:?} against {closed:?}"
            )));
        }
    }
    Ok(IdentityReport {
        tuples: tuples.len(),
        literal_display_agrees: agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dinat::is_dinatural;
    use crate::fincat::acyclic_graph;
    use crate::functor::ConstIntegrand;
    use crate::twisted::hom_pi;

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
    fn cokusarigama_of_point_is_hom_grid() {
        let lim = Limits::default();
        let c = arrow();
        for sig in [Sig::new(1, 1), Sig::new(2, 1), Sig::new(1, 2)] {
            let pt: Arc<dyn Integrand> =
                Arc::new(ConstIntegrand::new(&c, sig.dual(), FinSet::point()));
            let j = cokusarigama(&pt, &lim).unwrap();
            assert!(is_dinatural(&j.unit).unwrap());
            let h = hom_pi(&c, sig, &lim).unwrap();
            for o in 0..h.power().n_objects() {
                assert_eq!(
                    j.functor.functor().fiber(o).len(),
                    h.functor().fiber(o).len(),
                    "{sig}"
                );
            }
        }
    }

    #[test]
    fn kusarigama_of_point_is_point() {
        let lim = Limits::default();
        let c = arrow();
        let pt: Arc<dyn Integrand> =
            Arc::new(ConstIntegrand::new(&c, Sig::new(1, 1), FinSet::point()));
        let g = kusarigama(&pt, &lim).unwrap();
        assert!(g.functor.functor().fibers().iter().all(|f| f.len() == 1));
        assert!(is_dinatural(&g.counit).unwrap());
    }

    fn chain(n: usize) -> Arc<FinCat> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let le: Vec<(String, String)> = (1..n)
            .map(|i| ((i - 1).to_string(), i.to_string()))
            .collect();
        Arc::new(crate::fincat::poset("chain", &names, &le).unwrap())
    }

    fn as_dyn(f: &SetFunctorPQ) -> Arc<dyn Integrand> {
        Arc::new(f.clone())
    }

    #[test]
    fn factorization_counts_on_arrow() {
        let lim = Limits::default();
        let c = arrow();
        let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
        let r = factorization_check(&as_dyn(&hom), &as_dyn(&hom), &lim).unwrap();
        assert_eq!((r.nat_from_j, r.nat_to_gamma), (r.dinat, r.dinat));
        let pt = SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap();
        let r = factorization_check(&as_dyn(&hom), &as_dyn(&pt), &lim).unwrap();
        assert_eq!((r.nat_from_j, r.dinat, r.nat_to_gamma), (1, 1, 1));
    }

    #[test]
    fn kan_along_identity_and_terminal() {
        let lim = Limits::default();
        let c = arrow();
        let f = SetFunctor::from_fn(
            c.clone(),
            vec![FinSet::range(2), FinSet::range(1)],
            |_, _| 0,
        );
        let f = SetFunctor::from_fn(c.clone(), f.fibers().to_vec(), |m, x| {
            if c.is_identity(m) {
                x
            } else {
                0
            }
        });
        let id = Functor::identity(&c);
        for dir in [KanDirection::Left, KanDirection::Right] {
            let e = kan_extension(&f, &id, dir, &lim).unwrap();
            assert_eq!(
                e.fibers().iter().map(FinSet::len).collect::<Vec<_>>(),
                vec![2, 1]
            );
        }
        let bang = Functor::to_terminal(&c);
        let lan = kan_extension(&f, &bang, KanDirection::Left, &lim).unwrap();
        assert_eq!(lan.fiber(0).len(), colimit(&f, &lim).unwrap().carrier.len());
        let ran = kan_extension(&f, &bang, KanDirection::Right, &lim).unwrap();
        assert_eq!(ran.fiber(0).len(), limit(&f, &lim).unwrap().carrier.len());
        let g = SetFunctor::constant(bang.target.clone(), &FinSet::range(2));
        let (a, b) = kan_adjunction_counts(&f, &bang, &g, KanDirection::Left, &lim).unwrap();
        assert_eq!(a, b);
        let (a, b) = kan_adjunction_counts(&f, &bang, &g, KanDirection::Right, &lim).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn laws_on_hom() {
        let lim = Limits::default();
        let c = arrow();
        let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
        let r = check_kusarigama_laws(&hom, &hom, &FinSet::range(2), &lim).unwrap();
        assert_eq!(r.limits.end, r.limits.limit);
        assert_eq!(r.limits.coend, r.limits.colimit);
        assert!(r.adjunction.squares > 0);
    }

    #[test]
    fn twisted_route_on_arrow_and_chain() {
        let lim = Limits::default();
        for c in [arrow(), chain(3)] {
            let hom = SetFunctorPQ::hom(&c, &lim).unwrap();
            let pt = SetFunctorPQ::point(&c, Sig::new(1, 1), &lim).unwrap();
            for d in [&hom, &pt] {
                for a in 0..c.n_objects() {
                    for b in 0..c.n_objects() {
                        let r = cokusarigama_via_tw_j(d, a, b, &lim).unwrap();
                        assert_eq!(r.pointwise, r.via_tw_j);
                        let r = kusarigama_via_tw_j(d, a, b, &lim).unwrap();
                        assert_eq!(r.pointwise, r.via_tw_j);
                    }
                }
            }
        }
    }

    #[test]
    fn point_grid_map() {
        let lim = Limits::default();
        let c = chain(3);
        for sig in [Sig::new(1, 1), Sig::new(2, 1), Sig::new(1, 2)] {
            assert!(point_cokusarigama_vs_grid(&c, sig, &lim).unwrap(), "{sig}");
        }
    }

    #[test]
    fn lattice_checks() {
        let lim = Limits::default();
        let c = chain(2);
        let lat = Lattice::new(&c).unwrap();
        for sig in [Sig::new(1, 1), Sig::new(2, 1), Sig::new(1, 2)] {
            check_constant_on_lattice(&lat, sig, &FinSet::range(2), &lim).unwrap();
            let r = kusarigama_of_identitylike(&lat, sig).unwrap();
            assert_eq!(r.tuples, 2usize.pow(sig.arity() as u32));
        }
        assert!(Lattice::new(&arrow()).is_ok());
        let disc = Arc::new(crate::fincat::poset("d", &["a".into(), "b".into()], &[]).unwrap());
        assert!(matches!(Lattice::new(&disc), Err(Error::NotALattice(_))));
    }
}
