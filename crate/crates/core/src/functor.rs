//! Set-valued functors, mixed-variance functors on `C^{(p,q)}`, and natural transformations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fincat::{diagonal_functor, mute_projection, power_pq, FinCat, Functor, Mor, Obj, Sig};
use crate::search::EqSystem;
use crate::setops::{check_cap, FinFn, FinSet, Label};
use crate::Limits;

struct SfInner {
    domain: Arc<FinCat>,
    fibers: Vec<FinSet>,
    maps: Vec<FinFn>,
}

/// A functor from a finite category to finite sets, stored as full tables. Cheap to clone.
#[derive(Clone)]
pub struct SetFunctor(Arc<SfInner>);

impl std::fmt::Debug for SetFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SetFunctor on {:?} with fibers {:?}",
            self.0.domain, self.0.fibers
        )
    }
}

impl SetFunctor {
    /// Builds and validates.
    pub fn new(domain: Arc<FinCat>, fibers: Vec<FinSet>, maps: Vec<FinFn>) -> Result<SetFunctor> {
        let f = SetFunctor::new_unchecked(domain, fibers, maps);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(domain: Arc<FinCat>, fibers: Vec<FinSet>, maps: Vec<FinFn>) -> SetFunctor {
        SetFunctor(Arc::new(SfInner {
            domain,
            fibers,
            maps,
        }))
    }

    /// Tabulates `act(u, x)` for every morphism; not validated.
    pub fn from_fn(
        domain: Arc<FinCat>,
        fibers: Vec<FinSet>,
        act: impl Fn(Mor, usize) -> usize,
    ) -> SetFunctor {
        let maps = (0..domain.n_morphisms())
            .map(|u| {
                let (s, t) = (&fibers[domain.src(u)], &fibers[domain.dst(u)]);
                FinFn {
                    dom: s.clone(),
                    cod: t.clone(),
                    table: (0..s.len()).map(|x| act(u, x)).collect(),
                }
            })
            .collect();
        SetFunctor::new_unchecked(domain, fibers, maps)
    }

    pub fn constant(domain: Arc<FinCat>, x: &FinSet) -> SetFunctor {
        let fibers = vec![x.clone(); domain.n_objects()];
        SetFunctor::from_fn(domain, fibers, |_, x| x)
    }

    pub fn domain(&self) -> &Arc<FinCat> {
        &self.0.domain
    }

    pub fn fiber(&self, o: Obj) -> &FinSet {
        &self.0.fibers[o]
    }

    pub fn fibers(&self) -> &[FinSet] {
        &self.0.fibers
    }

    pub fn map(&self, u: Mor) -> &FinFn {
        &self.0.maps[u]
    }

    pub fn total_size(&self) -> usize {
        self.0.fibers.iter().map(|f| f.len()).sum()
    }

    /// Checks shapes, identities and composition exhaustively.
    pub fn validate(&self) -> Result<()> {
        let c = self.domain();
        if self.0.fibers.len() != c.n_objects() || self.0.maps.len() != c.n_morphisms() {
            return Err(Error::NotAFunctor("table sizes".into()));
        }
        for u in 0..c.n_morphisms() {
            let m = self.map(u);
            if m.dom != *self.fiber(c.src(u)) || m.cod != *self.fiber(c.dst(u)) {
                return Err(Error::NotAFunctor(format!(
                    "endpoints of {}",
                    c.mor_name(u)
                )));
            }
            if m.table.len() != m.dom.len() || m.table.iter().any(|&y| y >= m.cod.len()) {
                return Err(Error::NotAFunctor(format!("table of {}", c.mor_name(u))));
            }
        }
        for o in 0..c.n_objects() {
            if !self.map(c.identity(o)).is_identity() {
                return Err(Error::NotAFunctor(format!(
                    "identity of {}",
                    c.object_name(o)
                )));
            }
        }
        for (g, f) in c.composable_pairs() {
            let (mg, mf, mgf) = (self.map(g), self.map(f), self.map(c.compose(g, f)));
            if (0..mf.dom.len()).any(|x| mg.apply(mf.apply(x)) != mgf.apply(x)) {
                return Err(Error::NotAFunctor(format!(
                    "composite {} . {}",
                    c.mor_name(g),
                    c.mor_name(f)
                )));
            }
        }
        Ok(())
    }

    /// `self ∘ k` for `k` into this functor's domain.
    pub fn pullback(&self, k: &Functor) -> Result<SetFunctor> {
        if !same_shape(&k.target, self.domain()) {
            return Err(Error::ShapeMismatch(
                "pullback along a functor with another target".into(),
            ));
        }
        let fibers = k.obj.iter().map(|&o| self.fiber(o).clone()).collect();
        let maps = k.mor.iter().map(|&m| self.map(m).clone()).collect();
        Ok(SetFunctor::new_unchecked(k.source.clone(), fibers, maps))
    }

    /// The same tables over another category with identical indices and endpoints.
    pub fn transport(&self, domain: Arc<FinCat>) -> Result<SetFunctor> {
        if !same_shape(&domain, self.domain()) {
            return Err(Error::ShapeMismatch(format!(
                "cannot move a functor from {} to {}",
                self.domain().name(),
                domain.name()
            )));
        }
        Ok(SetFunctor::new_unchecked(
            domain,
            self.0.fibers.clone(),
            self.0.maps.clone(),
        ))
    }

    /// Same fibers and maps, compared by labels.
    pub fn same_tables(&self, other: &SetFunctor) -> bool {
        self.0.fibers == other.0.fibers && self.0.maps == other.0.maps
    }
}

/// Same object count and morphism endpoints, index for index.
pub fn same_shape(a: &FinCat, b: &FinCat) -> bool {
    std::ptr::eq(a, b)
        || (a.n_objects() == b.n_objects()
            && a.n_morphisms() == b.n_morphisms()
            && (0..a.n_morphisms()).all(|m| a.src(m) == b.src(m) && a.dst(m) == b.dst(m))
            && (0..a.n_objects()).all(|o| a.identity(o) == b.identity(o)))
}

/// A natural transformation between Set-valued functors on the same category.
#[derive(Clone, Debug)]
pub struct NatTransf {
    pub source: SetFunctor,
    pub target: SetFunctor,
    pub components: Vec<FinFn>,
}

impl NatTransf {
    pub fn identity(f: &SetFunctor) -> NatTransf {
        NatTransf {
            source: f.clone(),
            target: f.clone(),
            components: f.fibers().iter().map(FinFn::identity).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.source.domain();
        if self.components.len() != c.n_objects() {
            return Err(Error::ShapeMismatch("component count".into()));
        }
        for (o, a) in self.components.iter().enumerate() {
            if a.dom != *self.source.fiber(o) || a.cod != *self.target.fiber(o) {
                return Err(Error::ShapeMismatch(format!(
                    "component at {}",
                    c.object_name(o)
                )));
            }
        }
        for u in 0..c.n_morphisms() {
            let (i, j) = (c.src(u), c.dst(u));
            let (fu, gu) = (self.source.map(u), self.target.map(u));
            for x in 0..self.source.fiber(i).len() {
                if gu.apply(self.components[i].apply(x)) != self.components[j].apply(fu.apply(x)) {
                    return Err(Error::NotNatural(format!(
                        "square of {} at {}",
                        c.mor_name(u),
                        self.source.fiber(i).label(x)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTransf) -> NatTransf {
        NatTransf {
            source: self.source.clone(),
            target: other.target.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| b.after(a))
                .collect(),
        }
    }

    /// Tuple of component labels.
    pub fn label(&self) -> Label {
        Label::Tuple(self.components.iter().map(|c| c.as_label()).collect())
    }
}

/// All natural transformations `F ⇒ G`, components in lexicographic order.
pub fn enumerate_nat(f: &SetFunctor, g: &SetFunctor, lim: &Limits) -> Result<Vec<NatTransf>> {
    let c = f.domain();
    if !same_shape(c, g.domain()) {
        return Err(Error::ShapeMismatch(
            "natural transformations between functors on different categories".into(),
        ));
    }
    let n = c.n_objects();
    // One variable per (object j, element w of F(j)), valued in G(j).
    let mut off = vec![0; n + 1];
    for j in 0..n {
        off[j + 1] = off[j] + f.fiber(j).len();
    }
    let domains: Vec<usize> = (0..n)
        .flat_map(|j| std::iter::repeat_n(g.fiber(j).len(), f.fiber(j).len()))
        .collect();
    let mut sys = EqSystem::new(domains);
    let ids: Vec<usize> = (0..n).map(|j| sys.identity_map(g.fiber(j).len())).collect();
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let (j, k) = (c.src(u), c.dst(u));
        let gu = sys.add_map(g.map(u).table.clone());
        for w in 0..f.fiber(j).len() {
            sys.require(off[j] + w, gu, off[k] + f.map(u).apply(w), ids[k]);
        }
    }
    let sols = sys.solve(lim, "natural transformations")?;
    Ok(sols
        .into_iter()
        .map(|s| NatTransf {
            source: f.clone(),
            target: g.clone(),
            components: (0..n)
                .map(|j| FinFn {
                    dom: f.fiber(j).clone(),
                    cod: g.fiber(j).clone(),
                    table: s[off[j]..off[j + 1]].to_vec(),
                })
                .collect(),
        })
        .collect())
}

/// Source object tuple of a morphism tuple of `C^{(p,q)}`, given as base morphisms.
pub fn tuple_source(base: &FinCat, sig: Sig, mors: &[Mor]) -> Vec<Obj> {
    mors.iter()
        .enumerate()
        .map(|(k, &m)| {
            if sig.is_contra(k) {
                base.dst(m)
            } else {
                base.src(m)
            }
        })
        .collect()
}

pub fn tuple_target(base: &FinCat, sig: Sig, mors: &[Mor]) -> Vec<Obj> {
    mors.iter()
        .enumerate()
        .map(|(k, &m)| {
            if sig.is_contra(k) {
                base.src(m)
            } else {
                base.dst(m)
            }
        })
        .collect()
}

/// `(a, …, a, b, …, b)` with `p` copies of `a`.
pub fn split_tuple<T: Copy>(sig: Sig, a: T, b: T) -> Vec<T> {
    (0..sig.arity())
        .map(|k| if sig.is_contra(k) { a } else { b })
        .collect()
}

/// A functor `C^{(p,q)} → Set` whose fibers and actions are computed on demand.
///
/// The end and coend engine only ever evaluates these at tuples of the form
/// `(A, …, A, B, …, B)`, so large signatures stay cheap.
pub trait Integrand: Send + Sync {
    fn base(&self) -> &Arc<FinCat>;
    fn sig(&self) -> Sig;
    fn fiber(&self, objs: &[Obj]) -> Result<FinSet>;
    /// Image of element `x` of the fiber at the source of `mors`.
    fn act(&self, mors: &[Mor], x: usize) -> Result<usize>;

    fn label(&self) -> String {
        format!("integrand{}", self.sig())
    }
}

/// A Set-valued functor on `C^{(p,q)}`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct SetFunctorPQ {
    base: Arc<FinCat>,
    sig: Sig,
    f: SetFunctor,
}

impl SetFunctorPQ {
    /// Wraps a functor whose domain is `C^{(p,q)}`.
    pub fn new(base: Arc<FinCat>, sig: Sig, f: SetFunctor) -> Result<SetFunctorPQ> {
        let ok = f.domain().factors().is_some_and(|fs| {
            fs.len() == sig.arity()
                && fs
                    .iter()
                    .enumerate()
                    .all(|(k, fac)| fac.op == sig.is_contra(k) && same_shape(&fac.cat, &base))
        });
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "functor is not defined on {}^{}",
                base.name(),
                sig
            )));
        }
        Ok(SetFunctorPQ { base, sig, f })
    }

    /// Tabulates `fiber` and `act` on `C^{(p,q)}` and validates the result.
    pub fn from_fn(
        base: &Arc<FinCat>,
        sig: Sig,
        fiber: impl Fn(&[Obj]) -> FinSet,
        act: impl Fn(&[Mor], usize) -> usize,
        lim: &Limits,
    ) -> Result<SetFunctorPQ> {
        let d = SetFunctorPQ::from_fn_unchecked(base, sig, fiber, act, lim)?;
        d.validate()?;
        Ok(d)
    }

    pub fn from_fn_unchecked(
        base: &Arc<FinCat>,
        sig: Sig,
        fiber: impl Fn(&[Obj]) -> FinSet,
        act: impl Fn(&[Mor], usize) -> usize,
        lim: &Limits,
    ) -> Result<SetFunctorPQ> {
        let power = Arc::new(power_pq(base, sig, lim)?);
        let fibers: Vec<FinSet> = (0..power.n_objects())
            .map(|o| fiber(&power.decode_obj(o)))
            .collect();
        let cells: u128 = (0..power.n_morphisms())
            .map(|m| fibers[power.src(m)].len() as u128)
            .sum();
        check_cap("functor table", cells, lim)?;
        let pw = power.clone();
        let f = SetFunctor::from_fn(power, fibers, move |m, x| act(&pw.decode_mor(m), x));
        Ok(SetFunctorPQ {
            base: base.clone(),
            sig,
            f,
        })
    }

    /// Tabulates an integrand.
    pub fn materialize(d: &dyn Integrand, lim: &Limits) -> Result<SetFunctorPQ> {
        let base = d.base().clone();
        let sig = d.sig();
        let power = Arc::new(power_pq(&base, sig, lim)?);
        let mut fibers = Vec::with_capacity(power.n_objects());
        for o in 0..power.n_objects() {
            fibers.push(d.fiber(&power.decode_obj(o))?);
        }
        let cells: u128 = (0..power.n_morphisms())
            .map(|m| fibers[power.src(m)].len() as u128)
            .sum();
        check_cap("functor table", cells, lim)?;
        let mut maps = Vec::with_capacity(power.n_morphisms());
        for m in 0..power.n_morphisms() {
            let mors = power.decode_mor(m);
            let (s, t) = (&fibers[power.src(m)], &fibers[power.dst(m)]);
            let table = (0..s.len())
                .map(|x| d.act(&mors, x))
                .collect::<Result<Vec<_>>>()?;
            maps.push(FinFn {
                dom: s.clone(),
                cod: t.clone(),
                table,
            });
        }
        Ok(SetFunctorPQ {
            base,
            sig,
            f: SetFunctor::new_unchecked(power, fibers, maps),
        })
    }

    pub fn constant(
        base: &Arc<FinCat>,
        sig: Sig,
        x: &FinSet,
        lim: &Limits,
    ) -> Result<SetFunctorPQ> {
        let power = Arc::new(power_pq(base, sig, lim)?);
        Ok(SetFunctorPQ {
            base: base.clone(),
            sig,
            f: SetFunctor::constant(power, x),
        })
    }

    /// The constant functor at `{*}`.
    pub fn point(base: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<SetFunctorPQ> {
        SetFunctorPQ::constant(base, sig, &FinSet::point(), lim)
    }

    /// `hom: C^op × C → Set`.
    pub fn hom(base: &Arc<FinCat>, lim: &Limits) -> Result<SetFunctorPQ> {
        let c = base.clone();
        SetFunctorPQ::from_fn_unchecked(
            base,
            Sig::new(1, 1),
            |o| hom_fiber(&c, o[0], o[1]),
            |m, x| {
                let f = c.hom(c.dst(m[0]), c.src(m[1]))[x];
                c.hom_pos(c.compose(m[1], c.compose(f, m[0])))
            },
            lim,
        )
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn sig(&self) -> Sig {
        self.sig
    }

    /// `C^{(p,q)}`.
    pub fn power(&self) -> &Arc<FinCat> {
        self.f.domain()
    }

    pub fn functor(&self) -> &SetFunctor {
        &self.f
    }

    pub fn fiber_at(&self, objs: &[Obj]) -> &FinSet {
        self.f.fiber(self.power().encode_obj(objs))
    }

    pub fn map_at(&self, mors: &[Mor]) -> &FinFn {
        self.f.map(self.power().encode_mor(mors))
    }

    /// Index of `(A, …, A)` in `C^{(p,q)}`.
    pub fn diag(&self, a: Obj) -> Obj {
        self.power().encode_obj(&vec![a; self.sig.arity()])
    }

    pub fn validate(&self) -> Result<()> {
        self.f.validate()
    }

    /// `Δ*_{p,q} D`, of signature `(1,1)`.
    pub fn restrict_diagonal(&self, lim: &Limits) -> Result<SetFunctorPQ> {
        let d = diagonal_functor(&self.base, self.sig, lim)?;
        let f = self.f.pullback(&d)?;
        Ok(SetFunctorPQ {
            base: self.base.clone(),
            sig: Sig::new(1, 1),
            f,
        })
    }

    /// `δ^r_s D`: `r` extra contravariant and `s` extra covariant slots, all ignored.
    pub fn mute_extend(&self, r: usize, s: usize, lim: &Limits) -> Result<SetFunctorPQ> {
        let k = mute_projection(&self.base, self.sig, r, s, lim)?;
        let f = self.f.pullback(&k)?;
        Ok(SetFunctorPQ {
            base: self.base.clone(),
            sig: Sig::new(self.sig.p + r, self.sig.q + s),
            f,
        })
    }

    /// The same functor over a category with identical tables (e.g. a re-parsed copy).
    pub fn rebase(&self, base: &Arc<FinCat>, lim: &Limits) -> Result<SetFunctorPQ> {
        if !same_shape(base, &self.base) {
            return Err(Error::ShapeMismatch(
                "rebase onto a different category".into(),
            ));
        }
        let power = Arc::new(power_pq(base, self.sig, lim)?);
        Ok(SetFunctorPQ {
            base: base.clone(),
            sig: self.sig,
            f: self.f.transport(power)?,
        })
    }
}

impl Integrand for SetFunctorPQ {
    fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    fn sig(&self) -> Sig {
        self.sig
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        Ok(self.fiber_at(objs).clone())
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        Ok(self.map_at(mors).apply(x))
    }
}

/// `hom(a, b)` labeled by morphism names.
pub fn hom_fiber(c: &FinCat, a: Obj, b: Obj) -> FinSet {
    FinSet::from_distinct(
        c.hom(a, b)
            .into_iter()
            .map(|m| Label::atom(c.mor_name(m)))
            .collect(),
    )
}

type FiberFn = dyn Fn(&[Obj]) -> Result<FinSet> + Send + Sync;
type ActFn = dyn Fn(&[Mor], usize) -> Result<usize> + Send + Sync;

/// An integrand given by closures, with fibers memoized per tuple.
pub struct FnIntegrand {
    base: Arc<FinCat>,
    sig: Sig,
    name: String,
    fiber: Box<FiberFn>,
    act: Box<ActFn>,
    cache: Mutex<HashMap<Vec<Obj>, FinSet>>,
}

impl FnIntegrand {
    pub fn new(
        base: &Arc<FinCat>,
        sig: Sig,
        name: impl Into<String>,
        fiber: impl Fn(&[Obj]) -> Result<FinSet> + Send + Sync + 'static,
        act: impl Fn(&[Mor], usize) -> Result<usize> + Send + Sync + 'static,
    ) -> FnIntegrand {
        FnIntegrand {
            base: base.clone(),
            sig,
            name: name.into(),
            fiber: Box::new(fiber),
            act: Box::new(act),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl Integrand for FnIntegrand {
    fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    fn sig(&self) -> Sig {
        self.sig
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        if let Some(s) = self.cache.lock().unwrap().get(objs) {
            return Ok(s.clone());
        }
        let s = (self.fiber)(objs)?;
        self.cache.lock().unwrap().insert(objs.to_vec(), s.clone());
        Ok(s)
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        (self.act)(mors, x)
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// The constant functor at a set, without tabulating `C^{(p,q)}`.
#[derive(Clone, Debug)]
pub struct ConstIntegrand {
    base: Arc<FinCat>,
    sig: Sig,
    value: FinSet,
}

impl ConstIntegrand {
    pub fn new(base: &Arc<FinCat>, sig: Sig, value: FinSet) -> ConstIntegrand {
        ConstIntegrand {
            base: base.clone(),
            sig,
            value,
        }
    }
}

impl Integrand for ConstIntegrand {
    fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    fn sig(&self) -> Sig {
        self.sig
    }

    fn fiber(&self, _: &[Obj]) -> Result<FinSet> {
        Ok(self.value.clone())
    }

    fn act(&self, _: &[Mor], x: usize) -> Result<usize> {
        Ok(x)
    }

    fn label(&self) -> String {
        format!("const {}", self.value)
    }
}

/// Action of one base morphism in one slot, with the other slots fixed at `context`.
///
/// The entry of `context` at `slot` is ignored. `table` maps the fiber at the source tuple to
/// the fiber at the target tuple (for a contravariant slot the source uses `dst(mor)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotAction {
    pub slot: usize,
    pub mor: Mor,
    pub context: Vec<Obj>,
    pub table: Vec<usize>,
}

/// Assembles a functor on `C^{(p,q)}` from fibers (indexed by object of `C^{(p,q)}`) and
/// one-slot actions of generating morphisms.
///
/// Missing actions are derived by composition; identities act trivially unless stated.
pub fn functor_from_slots(
    base: &Arc<FinCat>,
    sig: Sig,
    fibers: Vec<FinSet>,
    actions: &[SlotAction],
    lim: &Limits,
) -> Result<SetFunctorPQ> {
    let power = Arc::new(power_pq(base, sig, lim)?);
    let n = sig.arity();
    if fibers.len() != power.n_objects() {
        return Err(Error::ShapeMismatch(
            "one fiber per object tuple expected".into(),
        ));
    }
    let c = base.as_ref();
    let nm = c.n_morphisms();
    let var_src = |k: usize, m: Mor| if sig.is_contra(k) { c.dst(m) } else { c.src(m) };
    let var_dst = |k: usize, m: Mor| if sig.is_contra(k) { c.src(m) } else { c.dst(m) };
    let with = |ctx: &[Obj], k: usize, o: Obj| -> Obj {
        let mut t = ctx.to_vec();
        t[k] = o;
        power.encode_obj(&t)
    };
    // acts[k][ctx][m], ctx = power object index with slot k set to 0.
    let mut acts: Vec<HashMap<Obj, Vec<Option<Vec<usize>>>>> = vec![HashMap::new(); n];
    for k in 0..n {
        for o in 0..power.n_objects() {
            let t = power.decode_obj(o);
            if t[k] != 0 {
                continue;
            }
            let mut v = vec![None; nm];
            for a in 0..c.n_objects() {
                v[c.identity(a)] = Some((0..fibers[with(&t, k, a)].len()).collect());
            }
            acts[k].insert(o, v);
        }
    }
    for a in actions {
        if a.slot >= n
            || a.mor >= nm
            || a.context.len() != n
            || a.context.iter().any(|&o| o >= c.n_objects())
        {
            return Err(Error::ShapeMismatch(format!(
                "slot action for slot {} out of range",
                a.slot
            )));
        }
        let ctx = with(&a.context, a.slot, 0);
        let (s, t) = (
            with(&a.context, a.slot, var_src(a.slot, a.mor)),
            with(&a.context, a.slot, var_dst(a.slot, a.mor)),
        );
        if a.table.len() != fibers[s].len() || a.table.iter().any(|&y| y >= fibers[t].len()) {
            return Err(Error::NonFunctorialSlot {
                slot: a.slot + 1,
                detail: format!("table of {} does not fit its fibers", c.mor_name(a.mor)),
            });
        }
        let entry = &mut acts[a.slot].get_mut(&ctx).unwrap()[a.mor];
        if c.is_identity(a.mor) && entry.as_ref() != Some(&a.table) {
            return Err(Error::NonFunctorialSlot {
                slot: a.slot + 1,
                detail: format!("{} does not act as the identity", c.mor_name(a.mor)),
            });
        }
        *entry = Some(a.table.clone());
    }
    // Close each slot's actions under composition.
    let pairs: Vec<(Mor, Mor)> = c.composable_pairs().collect();
    for k in 0..n {
        for (&ctx, v) in acts[k].iter_mut() {
            let mut changed = true;
            while changed {
                changed = false;
                for &(g, f) in &pairs {
                    let (Some(ag), Some(af)) = (&v[g], &v[f]) else {
                        continue;
                    };
                    let derived: Vec<usize> = if sig.is_contra(k) {
                        ag.iter().map(|&x| af[x]).collect()
                    } else {
                        af.iter().map(|&x| ag[x]).collect()
                    };
                    let h = c.compose(g, f);
                    match &v[h] {
                        None => {
                            v[h] = Some(derived);
                            changed = true;
                        }
                        Some(e) if *e != derived => {
                            return Err(Error::NonFunctorialSlot {
                                slot: k + 1,
                                detail: format!(
                                    "{} . {} acts differently from {} at {}",
                                    c.mor_name(g),
                                    c.mor_name(f),
                                    c.mor_name(h),
                                    power.object_name(ctx)
                                ),
                            });
                        }
                        _ => {}
                    }
                }
            }
            if let Some(m) = (0..nm).find(|&m| v[m].is_none()) {
                return Err(Error::NonFunctorialSlot {
                    slot: k + 1,
                    detail: format!(
                        "no action for {} at {}",
                        c.mor_name(m),
                        power.object_name(ctx)
                    ),
                });
            }
        }
    }
    let act_at = |k: usize, m: Mor, t: &[Obj]| -> &Vec<usize> {
        acts[k][&with(t, k, 0)][m].as_ref().unwrap()
    };
    // Interchange: moving in slot i then j equals moving in j then i.
    for i in 0..n {
        for j in i + 1..n {
            for o in 0..power.n_objects() {
                let t = power.decode_obj(o);
                if t[i] != 0 || t[j] != 0 {
                    continue;
                }
                for mi in (0..nm).filter(|&m| !c.is_identity(m)) {
                    for mj in (0..nm).filter(|&m| !c.is_identity(m)) {
                        let mut s = t.clone();
                        s[i] = var_src(i, mi);
                        s[j] = var_src(j, mj);
                        let mut after_i = s.clone();
                        after_i[i] = var_dst(i, mi);
                        let mut after_j = s.clone();
                        after_j[j] = var_dst(j, mj);
                        let (ai, aj2) = (act_at(i, mi, &s), act_at(j, mj, &after_i));
                        let (aj, ai2) = (act_at(j, mj, &s), act_at(i, mi, &after_j));
                        if (0..ai.len()).any(|x| aj2[ai[x]] != ai2[aj[x]]) {
                            let mut tuple: Vec<String> =
                                s.iter().map(|&o| c.object_name(o).to_string()).collect();
                            tuple[i] = c.mor_name(mi).into();
                            tuple[j] = c.mor_name(mj).into();
                            return Err(Error::InterchangeFailure {
                                slot_i: i + 1,
                                slot_j: j + 1,
                                tuple: format!("({})", tuple.join(",")),
                            });
                        }
                    }
                }
            }
        }
    }
    let cells: u128 = (0..power.n_morphisms())
        .map(|m| fibers[power.src(m)].len() as u128)
        .sum();
    check_cap("functor table", cells, lim)?;
    let pw = power.clone();
    let f = SetFunctor::from_fn(power.clone(), fibers, |m, x| {
        let mors = pw.decode_mor(m);
        let mut cur = tuple_source(c, sig, &mors);
        let mut y = x;
        for (k, &mk) in mors.iter().enumerate() {
            y = act_at(k, mk, &cur)[y];
            cur[k] = var_dst(k, mk);
        }
        y
    });
    let d = SetFunctorPQ {
        base: base.clone(),
        sig,
        f,
    };
    d.validate()?;
    Ok(d)
}
