//! Ends and coends of `(p,q)`-functors, computed four ways, with their universal property,
//! Fubini interchange, and the dinatural-transformations-as-ends correspondence.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::dinat::{
    self, enumerate_cowedges, enumerate_dinat, enumerate_wedges, CowedgePQ, DinatPQ, WedgePQ,
};
use crate::error::{Error, Result};
use crate::fincat::{opposite, Factor, FinCat, Functor, Mor, Obj, Sig};
use crate::functor::{enumerate_nat, split_tuple, FnIntegrand, Integrand, NatTransf, SetFunctorPQ};
use crate::setops::{
    self, check_cap, coequalizer, decode_fn, encode_fn, equalizer, families_to_sub, hom_set,
    offsets, quotient_of_sum, FinFn, FinSet, Label, QuotResult, SubResult, UnionFind,
};
use crate::twisted;
use crate::Limits;

/// How to compute an end or coend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Compatible families directly (pruned product plus equations, or union-find on the sum).
    Equalizer,
    /// Restrict along the diagonal, then a literal product and successive equalizers
    /// (or a literal coequalizer of two maps between sums).
    Restriction,
    /// Limit over the category of elements of the canonical weight (colimit over the opposite).
    Twisted,
    /// Natural transformations out of the canonical weight (weighted colimit for coends).
    Weighted,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Equalizer,
        Method::Restriction,
        Method::Twisted,
        Method::Weighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Equalizer => "equalizer",
            Method::Restriction => "restriction",
            Method::Twisted => "twisted",
            Method::Weighted => "weighted",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Method, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s}"))
    }
}

/// An end: the admitted families and the universal wedge (whose legs are the carrier legs).
#[derive(Clone, Debug)]
pub struct EndPQ {
    pub carrier: SubResult,
    pub wedge: WedgePQ,
}

/// A coend: canonical classes and the universal cowedge.
#[derive(Clone, Debug)]
pub struct CoendPQ {
    pub carrier: QuotResult,
    pub cowedge: CowedgePQ,
}

impl EndPQ {
    fn from_sub(carrier: SubResult) -> EndPQ {
        let wedge = WedgePQ {
            apex: carrier.carrier.clone(),
            legs: carrier.legs.clone(),
        };
        EndPQ { carrier, wedge }
    }

    pub fn len(&self) -> usize {
        self.carrier.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> &[Label] {
        self.carrier.carrier.labels()
    }

    /// Index of the family with the given components, if admitted.
    pub fn find_family(&self, comps: &[usize]) -> Option<usize> {
        let label = Label::Tuple(
            comps
                .iter()
                .zip(&self.carrier.legs)
                .map(|(&x, l)| l.cod.label(x).clone())
                .collect(),
        );
        self.carrier.carrier.find(&label)
    }

    /// Components of element `e`.
    pub fn family(&self, e: usize) -> Vec<usize> {
        self.carrier.legs.iter().map(|l| l.apply(e)).collect()
    }
}

impl CoendPQ {
    fn from_quot(carrier: QuotResult) -> CoendPQ {
        let cowedge = CowedgePQ {
            apex: carrier.carrier.clone(),
            legs: carrier.legs.clone(),
        };
        CoendPQ { carrier, cowedge }
    }

    pub fn len(&self) -> usize {
        self.carrier.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> &[Label] {
        self.carrier.carrier.labels()
    }

    /// Class of `x ∈ D(A,…,A)`.
    pub fn class_of(&self, a: Obj, x: usize) -> usize {
        self.carrier.legs[a].apply(x)
    }
}

pub(crate) fn diag_fibers(d: &dyn Integrand) -> Result<Vec<FinSet>> {
    let n = d.sig().arity();
    (0..d.base().n_objects())
        .map(|a| d.fiber(&vec![a; n]))
        .collect()
}

fn object_tags(c: &FinCat) -> Vec<Label> {
    (0..c.n_objects())
        .map(|o| Label::atom(c.object_name(o)))
        .collect()
}

/// The pair of maps `D(ΔA) → D(A,…;B,…) ← D(ΔB)` an end equalizes, for `u: A → B`.
fn end_pair(d: &dyn Integrand, u: Mor) -> Result<(Vec<usize>, Vec<usize>)> {
    let c = d.base();
    let (a, b) = (c.src(u), c.dst(u));
    let sig = d.sig();
    let n = sig.arity();
    let (fa, fb) = (d.fiber(&vec![a; n])?, d.fiber(&vec![b; n])?);
    let ml = split_tuple(sig, c.identity(a), u);
    let mr = split_tuple(sig, u, c.identity(b));
    let lam = (0..fa.len())
        .map(|x| d.act(&ml, x))
        .collect::<Result<Vec<_>>>()?;
    let rho = (0..fb.len())
        .map(|x| d.act(&mr, x))
        .collect::<Result<Vec<_>>>()?;
    Ok((lam, rho))
}

/// The pair of maps `D(ΔA) ← D(B,…;A,…) → D(ΔB)` a coend coequalizes, for `u: A → B`.
fn coend_pair(d: &dyn Integrand, u: Mor) -> Result<(FinSet, Vec<usize>, Vec<usize>)> {
    let c = d.base();
    let (a, b) = (c.src(u), c.dst(u));
    let sig = d.sig();
    let ys = d.fiber(&split_tuple(sig, b, a))?;
    let (ms, mt) = (
        split_tuple(sig, u, c.identity(a)),
        split_tuple(sig, c.identity(b), u),
    );
    let s = (0..ys.len())
        .map(|y| d.act(&ms, y))
        .collect::<Result<Vec<_>>>()?;
    let t = (0..ys.len())
        .map(|y| d.act(&mt, y))
        .collect::<Result<Vec<_>>>()?;
    Ok((ys, s, t))
}

/// The end of `D` by the chosen method.
pub fn end_pq(d: &dyn Integrand, method: Method, lim: &Limits) -> Result<EndPQ> {
    match method {
        Method::Equalizer => end_equalizer(d, lim),
        Method::Restriction => end_restriction(d, lim),
        Method::Twisted => end_twisted(d, lim),
        Method::Weighted => end_weighted(d, lim),
    }
}

/// The coend of `D` by the chosen method.
pub fn coend_pq(d: &dyn Integrand, method: Method, lim: &Limits) -> Result<CoendPQ> {
    match method {
        Method::Equalizer => coend_equalizer(d, lim),
        Method::Restriction => coend_restriction(d, lim),
        Method::Twisted => coend_twisted(d, lim),
        Method::Weighted => coend_weighted(d, lim),
    }
}

pub fn end(d: &dyn Integrand, lim: &Limits) -> Result<EndPQ> {
    end_equalizer(d, lim)
}

pub fn coend(d: &dyn Integrand, lim: &Limits) -> Result<CoendPQ> {
    coend_equalizer(d, lim)
}

fn end_equalizer(d: &dyn Integrand, lim: &Limits) -> Result<EndPQ> {
    let c = d.base();
    let fibers = diag_fibers(d)?;
    let mut sys = crate::search::EqSystem::new(fibers.iter().map(|f| f.len()).collect());
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let (lam, rho) = end_pair(d, u)?;
        let (ml, mr) = (sys.add_map(lam), sys.add_map(rho));
        sys.require(c.src(u), ml, c.dst(u), mr);
    }
    let sols = sys.solve(lim, "end")?;
    Ok(EndPQ::from_sub(families_to_sub(&sols, &fibers)))
}

fn coend_equalizer(d: &dyn Integrand, lim: &Limits) -> Result<CoendPQ> {
    let c = d.base();
    let fibers = diag_fibers(d)?;
    let off = offsets(&fibers);
    check_cap("coend", off[fibers.len()] as u128, lim)?;
    let mut uf = UnionFind::new(off[fibers.len()]);
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let (a, b) = (c.src(u), c.dst(u));
        let (_, s, t) = coend_pair(d, u)?;
        for (&x, &y) in s.iter().zip(&t) {
            uf.union(off[a] + x, off[b] + y);
        }
    }
    Ok(CoendPQ::from_quot(quotient_of_sum(
        &fibers,
        &object_tags(c),
        &mut uf,
    )))
}

/// `Δ*D` viewed lazily as a `(1,1)`-integrand.
struct DiagView<'a>(&'a dyn Integrand);

impl Integrand for DiagView<'_> {
    fn base(&self) -> &Arc<FinCat> {
        self.0.base()
    }

    fn sig(&self) -> Sig {
        Sig::new(1, 1)
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        self.0.fiber(&split_tuple(self.0.sig(), objs[0], objs[1]))
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        self.0.act(&split_tuple(self.0.sig(), mors[0], mors[1]), x)
    }
}

fn end_restriction(d: &dyn Integrand, lim: &Limits) -> Result<EndPQ> {
    let r = DiagView(d);
    let c = d.base();
    let n = c.n_objects();
    let fibers = diag_fibers(&r)?;
    let prod = setops::product(&fibers, lim)?;
    let radices: Vec<usize> = fibers.iter().map(|f| f.len()).collect();
    let proj: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..prod.len())
                .map(|i| crate::decode(i, &radices)[a])
                .collect()
        })
        .collect();
    // Successive equalizers; `incl` is the running inclusion into the product.
    let mut carrier = prod.clone();
    let mut incl: Vec<usize> = (0..prod.len()).collect();
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let (a, b) = (c.src(u), c.dst(u));
        let target = r.fiber(&[a, b])?;
        let (lam, rho) = end_pair(&r, u)?;
        let f1 = FinFn::new(
            carrier.clone(),
            target.clone(),
            incl.iter().map(|&i| lam[proj[a][i]]).collect(),
        )?;
        let f2 = FinFn::new(
            carrier.clone(),
            target,
            incl.iter().map(|&i| rho[proj[b][i]]).collect(),
        )?;
        let eq = equalizer(&f1, &f2)?;
        incl = eq.legs[0].table.iter().map(|&k| incl[k]).collect();
        carrier = eq.carrier;
    }
    let legs = (0..n)
        .map(|a| FinFn {
            dom: carrier.clone(),
            cod: fibers[a].clone(),
            table: incl.iter().map(|&i| proj[a][i]).collect(),
        })
        .collect();
    Ok(EndPQ::from_sub(SubResult { carrier, legs }))
}

fn coend_restriction(d: &dyn Integrand, lim: &Limits) -> Result<CoendPQ> {
    let r = DiagView(d);
    let c = d.base();
    let n = c.n_objects();
    let fibers = diag_fibers(&r)?;
    let off = offsets(&fibers);
    let tags = object_tags(c);
    let cod = FinSet::from_distinct(
        (0..n)
            .flat_map(|a| {
                fibers[a]
                    .labels()
                    .iter()
                    .map(|x| Label::pair(tags[a].clone(), x.clone()))
                    .collect::<Vec<_>>()
            })
            .collect(),
    );
    let (mut dom, mut f, mut g) = (Vec::new(), Vec::new(), Vec::new());
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let (a, b) = (c.src(u), c.dst(u));
        let (ys, s, t) = coend_pair(&r, u)?;
        for y in 0..ys.len() {
            dom.push(Label::pair(Label::atom(c.mor_name(u)), ys.label(y).clone()));
            f.push(off[a] + s[y]);
            g.push(off[b] + t[y]);
        }
    }
    check_cap("coend", dom.len().max(cod.len()) as u128, lim)?;
    let dom = FinSet::from_distinct(dom);
    let q = coequalizer(
        &FinFn::new(dom.clone(), cod.clone(), f)?,
        &FinFn::new(dom, cod, g)?,
    )?;
    let legs = (0..n)
        .map(|a| FinFn {
            dom: fibers[a].clone(),
            cod: q.carrier.clone(),
            table: (0..fibers[a].len())
                .map(|x| q.legs[0].apply(off[a] + x))
                .collect(),
        })
        .collect();
    let locate = |g: usize| {
        let k = off.partition_point(|&o| o <= g) - 1;
        (k, g - off[k])
    };
    let reps = q.reps.iter().map(|&(_, g)| locate(g)).collect();
    Ok(CoendPQ::from_quot(QuotResult {
        carrier: q.carrier,
        legs,
        reps,
    }))
}

/// Sorts read-off families into canonical order, rejecting repeats.
fn canonical_end(fibers: &[FinSet], mut families: Vec<Vec<usize>>, what: &str) -> Result<EndPQ> {
    families.sort();
    if families.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::LawFailure(format!(
            "{what}: two elements read off to the same family"
        )));
    }
    Ok(EndPQ::from_sub(families_to_sub(&families, fibers)))
}

/// Canonical classes on `∐ D(ΔA)` induced by `class_of`, which must hit all `n_classes`.
fn canonical_coend(
    c: &FinCat,
    fibers: &[FinSet],
    n_classes: usize,
    class_of: impl Fn(Obj, usize) -> usize,
    what: &str,
) -> Result<CoendPQ> {
    let off = offsets(fibers);
    let mut uf = UnionFind::new(off[fibers.len()]);
    let mut first: Vec<Option<usize>> = vec![None; n_classes];
    for a in 0..fibers.len() {
        for x in 0..fibers[a].len() {
            let k = class_of(a, x);
            match first[k] {
                None => first[k] = Some(off[a] + x),
                Some(g) => {
                    uf.union(g, off[a] + x);
                }
            }
        }
    }
    if first.iter().any(|f| f.is_none()) {
        return Err(Error::LawFailure(format!(
            "{what}: some class contains no diagonal element"
        )));
    }
    Ok(CoendPQ::from_quot(quotient_of_sum(
        fibers,
        &object_tags(c),
        &mut uf,
    )))
}

fn end_twisted(d: &dyn Integrand, lim: &Limits) -> Result<EndPQ> {
    let (w, units) = twisted::end_weight(d.base(), d.sig(), lim)?;
    let dm = SetFunctorPQ::materialize(d, lim)?;
    let el = twisted::category_of_elements(w.functor(), lim)?;
    let dd = dm
        .functor()
        .transport(w.power().clone())?
        .pullback(&el.projection)?;
    let l = setops::limit(&dd, lim)?;
    let fibers = diag_fibers(d)?;
    let at: Vec<usize> = (0..fibers.len())
        .map(|a| el.object_of(w.diag(a), units[a]))
        .collect();
    let families = (0..l.carrier.len())
        .map(|e| at.iter().map(|&o| l.legs[o].apply(e)).collect())
        .collect();
    canonical_end(&fibers, families, "twisted end")
}

fn end_weighted(d: &dyn Integrand, lim: &Limits) -> Result<EndPQ> {
    let (w, units) = twisted::end_weight(d.base(), d.sig(), lim)?;
    let dm = SetFunctorPQ::materialize(d, lim)?;
    let dd = dm.functor().transport(w.power().clone())?;
    let l = setops::weighted_limit(w.functor(), &dd, lim)?;
    let fibers = diag_fibers(d)?;
    let families = (0..l.carrier.len())
        .map(|e| {
            (0..fibers.len())
                .map(|a| {
                    let j = w.diag(a);
                    decode_fn(
                        l.legs[j].apply(e),
                        w.functor().fiber(j).len(),
                        fibers[a].len(),
                    )[units[a]]
                })
                .collect()
        })
        .collect();
    canonical_end(&fibers, families, "weighted end")
}

/// The coend weight, moved onto `(C^{(p,q)})^op`, with its units.
fn coend_weight_on_op(
    d: &dyn Integrand,
    dm: &SetFunctorPQ,
    lim: &Limits,
) -> Result<(crate::SetFunctor, Vec<usize>, SetFunctorPQ)> {
    let cop = Arc::new(opposite(d.base()));
    let (w, units) = twisted::end_weight(&cop, d.sig(), lim)?;
    let pop = Arc::new(opposite(dm.power()));
    Ok((w.functor().transport(pop)?, units, w))
}

fn coend_twisted(d: &dyn Integrand, lim: &Limits) -> Result<CoendPQ> {
    let dm = SetFunctorPQ::materialize(d, lim)?;
    let (w, units, wpq) = coend_weight_on_op(d, &dm, lim)?;
    let el = twisted::category_of_elements(&w, lim)?;
    // el(W)^op projects onto C^{(p,q)} with the same object and morphism maps.
    let elop = Arc::new(opposite(&el.total));
    let proj = Functor {
        source: elop,
        target: dm.power().clone(),
        obj: el.projection.obj.clone(),
        mor: el.projection.mor.clone(),
    };
    let dd = dm.functor().pullback(&proj)?;
    let q = setops::colimit(&dd, lim)?;
    let fibers = diag_fibers(d)?;
    let at: Vec<usize> = (0..fibers.len())
        .map(|a| el.object_of(wpq.diag(a), units[a]))
        .collect();
    canonical_coend(
        d.base(),
        &fibers,
        q.carrier.len(),
        |a, x| q.legs[at[a]].apply(x),
        "twisted coend",
    )
}

fn coend_weighted(d: &dyn Integrand, lim: &Limits) -> Result<CoendPQ> {
    let dm = SetFunctorPQ::materialize(d, lim)?;
    let (w, units, wpq) = coend_weight_on_op(d, &dm, lim)?;
    let q = setops::weighted_colimit(&w, dm.functor(), lim)?;
    let fibers = diag_fibers(d)?;
    canonical_coend(
        d.base(),
        &fibers,
        q.carrier.len(),
        |a, x| {
            let j = wpq.diag(a);
            q.legs[j].apply(units[a] * fibers[a].len() + x)
        },
        "weighted coend",
    )
}

/// Counts from checking the universal property against test apexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniversalReport {
    pub apex_sizes: Vec<usize>,
    pub wedges: Vec<usize>,
    pub factorizations: Vec<usize>,
}

/// Every wedge from every test apex factors through the end exactly once.
pub fn verify_end_universal(
    e: &EndPQ,
    d: &Arc<dyn Integrand>,
    apex_sizes: &[usize],
    lim: &Limits,
) -> Result<UniversalReport> {
    let mut rep = UniversalReport::default();
    let carrier = &e.carrier.carrier;
    for &k in apex_sizes {
        let x = FinSet::range(k);
        let wedges = enumerate_wedges(&x, d, lim)?;
        let mut factored = 0;
        for (wi, w) in wedges.iter().enumerate() {
            for xi in 0..k {
                let hits = (0..carrier.len())
                    .filter(|&c| {
                        e.wedge
                            .legs
                            .iter()
                            .zip(&w.legs)
                            .all(|(om, l)| om.apply(c) == l.apply(xi))
                    })
                    .count();
                match hits {
                    0 => {
                        return Err(Error::NoFactorization(format!(
                            "wedge {wi} from a {k}-element apex at element {xi}"
                        )))
                    }
                    1 => {}
                    _ => {
                        return Err(Error::NonUnique(format!(
                            "wedge {wi} from a {k}-element apex at element {xi}"
                        )))
                    }
                }
            }
            factored += 1;
        }
        let expected = setops::fn_count(k, carrier.len());
        if wedges.len() as u128 != expected {
            return Err(Error::BijectionFailure(format!(
                "{} wedges from a {k}-element apex but {expected} maps into the end",
                wedges.len()
            )));
        }
        rep.apex_sizes.push(k);
        rep.wedges.push(wedges.len());
        rep.factorizations.push(factored);
    }
    Ok(rep)
}

/// Every cowedge to every test apex factors through the coend exactly once.
pub fn verify_coend_universal(
    e: &CoendPQ,
    d: &Arc<dyn Integrand>,
    apex_sizes: &[usize],
    lim: &Limits,
) -> Result<UniversalReport> {
    let mut rep = UniversalReport::default();
    let n_classes = e.len();
    let mut members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_classes];
    for (a, leg) in e.cowedge.legs.iter().enumerate() {
        for x in 0..leg.dom.len() {
            members[leg.apply(x)].push((a, x));
        }
    }
    for &k in apex_sizes {
        let xset = FinSet::range(k);
        let cowedges = enumerate_cowedges(d, &xset, lim)?;
        let mut factored = 0;
        for (wi, w) in cowedges.iter().enumerate() {
            for (cls, mem) in members.iter().enumerate() {
                let hits = (0..k)
                    .filter(|&v| mem.iter().all(|&(a, x)| w.legs[a].apply(x) == v))
                    .count();
                match hits {
                    0 => {
                        return Err(Error::NoFactorization(format!(
                            "cowedge {wi} to a {k}-element apex at class {cls}"
                        )))
                    }
                    1 => {}
                    _ => {
                        return Err(Error::NonUnique(format!(
                            "cowedge {wi} to a {k}-element apex at class {cls}"
                        )))
                    }
                }
            }
            factored += 1;
        }
        let expected = setops::fn_count(n_classes, k);
        if cowedges.len() as u128 != expected {
            return Err(Error::BijectionFailure(format!(
                "{} cowedges to a {k}-element apex but {expected} maps out of the coend",
                cowedges.len()
            )));
        }
        rep.apex_sizes.push(k);
        rep.wedges.push(cowedges.len());
        rep.factorizations.push(factored);
    }
    Ok(rep)
}

/// `H(A̲; B̲) = Set(F(B̲; A̲), G(A̲; B̲))` for `F` of signature `(p,q)` and `G` of `(q,p)`;
/// its `(q,p)`-end is the set of dinatural transformations `F ⇒̈ G`.
pub fn dinat_integrand(
    f: &Arc<dyn Integrand>,
    g: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<FnIntegrand> {
    dinat::check_types(f.as_ref(), g.as_ref())?;
    let sig = g.sig();
    let (p, q) = (f.sig().p, f.sig().q);
    let swap = move |t: &[usize]| -> Vec<usize> { t[q..].iter().chain(&t[..q]).copied().collect() };
    let (f1, g1, f2, g2) = (f.clone(), g.clone(), f.clone(), g.clone());
    let lim1 = *lim;
    let _ = p;
    Ok(FnIntegrand::new(
        g.base(),
        sig,
        "dinat integrand",
        move |t| hom_set(&f1.fiber(&swap(t))?, &g1.fiber(t)?, &lim1),
        move |m, phi| {
            let c = g2.base();
            let src: Vec<Obj> = crate::functor::tuple_source(c, sig, m);
            let tgt: Vec<Obj> = crate::functor::tuple_target(c, sig, m);
            let (fs, gs) = (f2.fiber(&swap(&src))?, g2.fiber(&src)?);
            let (ft, gt) = (f2.fiber(&swap(&tgt))?, g2.fiber(&tgt)?);
            let table = decode_fn(phi, fs.len(), gs.len());
            let fm = swap(m);
            let mut out = Vec::with_capacity(ft.len());
            for z in 0..ft.len() {
                out.push(g2.act(m, table[f2.act(&fm, z)?])?);
            }
            Ok(encode_fn(&out, gt.len()))
        },
    ))
}

/// The end of [`dinat_integrand`] matched against direct enumeration of dinaturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DinatEndReport {
    pub dinats: usize,
    pub end_size: usize,
}

pub fn dinat_as_end(
    f: &Arc<dyn Integrand>,
    g: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<DinatEndReport> {
    let h = dinat_integrand(f, g, lim)?;
    let e = end(&h, lim)?;
    let direct = enumerate_dinat(f, g, lim)?;
    let n = f.base().n_objects();
    let (ff, gf) = (diag_fibers(f.as_ref())?, diag_fibers(g.as_ref())?);
    let mut from_end = Vec::with_capacity(e.len());
    for x in 0..e.len() {
        let comps: Vec<FinFn> = (0..n)
            .map(|a| FinFn {
                dom: ff[a].clone(),
                cod: gf[a].clone(),
                table: decode_fn(e.carrier.legs[a].apply(x), ff[a].len(), gf[a].len()),
            })
            .collect();
        let t = DinatPQ {
            f: f.clone(),
            g: g.clone(),
            components: comps,
        };
        if !dinat::is_dinatural(&t)? {
            return Err(Error::BijectionFailure(format!(
                "end element {} is not dinatural",
                e.labels()[x]
            )));
        }
        from_end.push(t.tables());
    }
    let direct_tables: Vec<Vec<Vec<usize>>> = direct.iter().map(|t| t.tables()).collect();
    if from_end != direct_tables {
        return Err(Error::BijectionFailure(format!(
            "end has {} elements, direct enumeration {} dinaturals",
            from_end.len(),
            direct_tables.len()
        )));
    }
    Ok(DinatEndReport {
        dinats: direct.len(),
        end_size: e.len(),
    })
}

/// Dinaturals out of the point versus natural transformations out of the grid-of-homs
/// functor, matched by evaluating at the identity grid.
pub fn dinat_from_point_vs_nat(g: &Arc<dyn Integrand>, lim: &Limits) -> Result<(usize, usize)> {
    let base = g.base().clone();
    let pt: Arc<dyn Integrand> = Arc::new(crate::functor::ConstIntegrand::new(
        &base,
        g.sig().dual(),
        FinSet::point(),
    ));
    let dinats = enumerate_dinat(&pt, g, lim)?;
    let hp = twisted::hom_pi(&base, g.sig(), lim)?;
    let gm = SetFunctorPQ::materialize(g.as_ref(), lim)?;
    let gg = gm.functor().transport(hp.power().clone())?;
    let nats = enumerate_nat(hp.functor(), &gg, lim)?;
    let n = base.n_objects();
    let unit = |a: Obj| twisted::identity_grid(&base, g.sig(), a);
    let mut image: Vec<Vec<usize>> = nats
        .iter()
        .map(|al| {
            (0..n)
                .map(|a| al.components[hp.diag(a)].apply(unit(a)))
                .collect()
        })
        .collect();
    let mut direct: Vec<Vec<usize>> = dinats
        .iter()
        .map(|t| t.components.iter().map(|c| c.apply(0)).collect())
        .collect();
    image.sort();
    direct.sort();
    if image.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BijectionFailure(
            "two natural transformations agree on identity grids".into(),
        ));
    }
    if image != direct {
        return Err(Error::BijectionFailure(format!(
            "{} natural transformations but {} dinaturals from the point",
            nats.len(),
            dinats.len()
        )));
    }
    Ok((dinats.len(), nats.len()))
}

/// `|Nat(hom_Π × S, D)|` and `|Set(S, ∫D)|`.
pub fn copower_adjunction_counts(
    d: &SetFunctorPQ,
    s: &FinSet,
    lim: &Limits,
) -> Result<(usize, u128)> {
    let hp = twisted::hom_pi(d.base(), d.sig(), lim)?;
    let w = SetFunctorPQ::from_fn_unchecked(
        d.base(),
        d.sig(),
        |t| {
            setops::product(&[hp.fiber_at(t).clone(), s.clone()], lim)
                .unwrap_or_else(|_| FinSet::empty())
        },
        |m, x| {
            let k = s.len();
            hp.map_at(m).apply(x / k) * k + x % k
        },
        lim,
    )?;
    let dd = d.functor().transport(w.power().clone())?;
    let nats = enumerate_nat(w.functor(), &dd, lim)?;
    let e = end(d, lim)?;
    Ok((nats.len(), setops::fn_count(s.len(), e.len())))
}

/// A functor on `A^{(p,q)} × B^{(r,s)}`.
pub trait BiIntegrand: Send + Sync {
    fn left(&self) -> (&Arc<FinCat>, Sig);
    fn right(&self) -> (&Arc<FinCat>, Sig);
    fn fiber(&self, a: &[Obj], b: &[Obj]) -> Result<FinSet>;
    fn act(&self, ma: &[Mor], mb: &[Mor], x: usize) -> Result<usize>;
}

/// Product of a functor on `A^{(p,q)}` and one on `B^{(r,s)}`, optionally times a functor
/// of both (when `A = B`) given on `A^{(p+r, q+s)}` with the slot order of the joint end.
pub struct ProductBi {
    pub f: Arc<dyn Integrand>,
    pub g: Arc<dyn Integrand>,
    pub mixed: Option<Arc<dyn Integrand>>,
}

impl ProductBi {
    fn mixed_tuple<T: Copy>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let (p, r) = (self.f.sig().p, self.g.sig().p);
        a[..p]
            .iter()
            .chain(&b[..r])
            .chain(&a[p..])
            .chain(&b[r..])
            .copied()
            .collect()
    }
}

impl BiIntegrand for ProductBi {
    fn left(&self) -> (&Arc<FinCat>, Sig) {
        (self.f.base(), self.f.sig())
    }

    fn right(&self) -> (&Arc<FinCat>, Sig) {
        (self.g.base(), self.g.sig())
    }

    fn fiber(&self, a: &[Obj], b: &[Obj]) -> Result<FinSet> {
        let mut parts = vec![self.f.fiber(a)?, self.g.fiber(b)?];
        if let Some(m) = &self.mixed {
            parts.push(m.fiber(&self.mixed_tuple(a, b))?);
        }
        setops::product(&parts, &Limits::default())
    }

    fn act(&self, ma: &[Mor], mb: &[Mor], x: usize) -> Result<usize> {
        let (sa, sb) = (self.f.base(), self.g.base());
        let src_a = crate::functor::tuple_source(sa, self.f.sig(), ma);
        let src_b = crate::functor::tuple_source(sb, self.g.sig(), mb);
        let tgt_a = crate::functor::tuple_target(sa, self.f.sig(), ma);
        let tgt_b = crate::functor::tuple_target(sb, self.g.sig(), mb);
        let mut src = vec![self.f.fiber(&src_a)?.len(), self.g.fiber(&src_b)?.len()];
        let mut tgt = vec![self.f.fiber(&tgt_a)?.len(), self.g.fiber(&tgt_b)?.len()];
        if let Some(m) = &self.mixed {
            src.push(m.fiber(&self.mixed_tuple(&src_a, &src_b))?.len());
            tgt.push(m.fiber(&self.mixed_tuple(&tgt_a, &tgt_b))?.len());
        }
        let d = crate::decode(x, &src);
        let mut y = vec![self.f.act(ma, d[0])?, self.g.act(mb, d[1])?];
        if let Some(m) = &self.mixed {
            y.push(m.act(&self.mixed_tuple(ma, mb), d[2])?);
        }
        Ok(crate::encode(&y, &tgt))
    }
}

/// Swaps the two variables of a bi-integrand.
struct Swapped<'a>(&'a dyn BiIntegrand);

impl BiIntegrand for Swapped<'_> {
    fn left(&self) -> (&Arc<FinCat>, Sig) {
        self.0.right()
    }

    fn right(&self) -> (&Arc<FinCat>, Sig) {
        self.0.left()
    }

    fn fiber(&self, a: &[Obj], b: &[Obj]) -> Result<FinSet> {
        self.0.fiber(b, a)
    }

    fn act(&self, ma: &[Mor], mb: &[Mor], x: usize) -> Result<usize> {
        self.0.act(mb, ma, x)
    }
}

/// `D(a̲, −)` on `B^{(r,s)}` for a fixed tuple `a̲`.
struct Slice<'a> {
    d: &'a dyn BiIntegrand,
    a: Vec<Obj>,
}

impl Integrand for Slice<'_> {
    fn base(&self) -> &Arc<FinCat> {
        self.d.right().0
    }

    fn sig(&self) -> Sig {
        self.d.right().1
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        self.d.fiber(&self.a, objs)
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        let ids: Vec<Mor> = self
            .a
            .iter()
            .map(|&o| self.d.left().0.identity(o))
            .collect();
        self.d.act(&ids, mors, x)
    }
}

enum Inner {
    End(EndPQ),
    Coend(CoendPQ),
}

/// `a̲ ↦ ∫_{(r,s)} D(a̲, −)` (or the coend) as a functor on `A^{(p,q)}`.
struct Iterated<'a> {
    d: &'a dyn BiIntegrand,
    coend: bool,
    lim: Limits,
    cache: Mutex<HashMap<Vec<Obj>, Arc<(FinSet, Inner)>>>,
}

impl<'a> Iterated<'a> {
    fn new(d: &'a dyn BiIntegrand, coend: bool, lim: &Limits) -> Self {
        Iterated {
            d,
            coend,
            lim: *lim,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn inner(&self, a: &[Obj]) -> Result<Arc<(FinSet, Inner)>> {
        if let Some(x) = self.cache.lock().unwrap().get(a) {
            return Ok(x.clone());
        }
        let s = Slice {
            d: self.d,
            a: a.to_vec(),
        };
        let v = if self.coend {
            let c = coend(&s, &self.lim)?;
            (c.carrier.carrier.clone(), Inner::Coend(c))
        } else {
            let e = end(&s, &self.lim)?;
            (e.carrier.carrier.clone(), Inner::End(e))
        };
        let v = Arc::new(v);
        self.cache.lock().unwrap().insert(a.to_vec(), v.clone());
        Ok(v)
    }
}

impl Integrand for Iterated<'_> {
    fn base(&self) -> &Arc<FinCat> {
        self.d.left().0
    }

    fn sig(&self) -> Sig {
        self.d.left().1
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        Ok(self.inner(objs)?.0.clone())
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        let (ca, sa) = self.d.left();
        let (cb, sb) = self.d.right();
        let src = crate::functor::tuple_source(ca, sa, mors);
        let tgt = crate::functor::tuple_target(ca, sa, mors);
        let (from, to) = (self.inner(&src)?, self.inner(&tgt)?);
        let n = sb.arity();
        match (&from.1, &to.1) {
            (Inner::End(e1), Inner::End(e2)) => {
                let comps = (0..cb.n_objects())
                    .map(|b| {
                        let ids = vec![cb.identity(b); n];
                        self.d.act(mors, &ids, e1.carrier.legs[b].apply(x))
                    })
                    .collect::<Result<Vec<_>>>()?;
                e2.find_family(&comps)
                    .ok_or_else(|| Error::LawFailure("iterated end action leaves the end".into()))
            }
            (Inner::Coend(c1), Inner::Coend(c2)) => {
                let (b, y) = c1.carrier.reps[x];
                let ids = vec![cb.identity(b); n];
                Ok(c2.class_of(b, self.d.act(mors, &ids, y)?))
            }
            _ => unreachable!(),
        }
    }
}

/// The joint `(p+r, q+s)`-integrand over `A × B`, slots ordered: contravariant `A`, then
/// contravariant `B`, then covariant `A`, then covariant `B`.
struct Joint<'a> {
    d: &'a dyn BiIntegrand,
    base: Arc<FinCat>,
}

impl<'a> Joint<'a> {
    fn new(d: &'a dyn BiIntegrand, lim: &Limits) -> Result<Self> {
        let (ca, _) = d.left();
        let (cb, _) = d.right();
        let base = FinCat::product(
            vec![
                Factor {
                    cat: ca.clone(),
                    op: false,
                },
                Factor {
                    cat: cb.clone(),
                    op: false,
                },
            ],
            lim,
        )?;
        Ok(Joint {
            d,
            base: Arc::new(base),
        })
    }

    fn split<T: Copy>(&self, t: &[T], dec: impl Fn(T) -> (T, T)) -> (Vec<T>, Vec<T>) {
        let (sa, sb) = (self.d.left().1, self.d.right().1);
        let (p, r) = (sa.p, sb.p);
        let parts: Vec<(T, T)> = t.iter().map(|&x| dec(x)).collect();
        let a = parts[..p]
            .iter()
            .chain(&parts[p + r..p + r + sa.q])
            .map(|x| x.0)
            .collect();
        let b = parts[p..p + r]
            .iter()
            .chain(&parts[p + r + sa.q..])
            .map(|x| x.1)
            .collect();
        (a, b)
    }
}

impl Integrand for Joint<'_> {
    fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    fn sig(&self) -> Sig {
        let (sa, sb) = (self.d.left().1, self.d.right().1);
        Sig::new(sa.p + sb.p, sa.q + sb.q)
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        let (a, b) = self.split(objs, |o| {
            let d = self.base.decode_obj(o);
            (d[0], d[1])
        });
        self.d.fiber(&a, &b)
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        let (a, b) = self.split(mors, |m| {
            let d = self.base.decode_mor(m);
            (d[0], d[1])
        });
        self.d.act(&a, &b, x)
    }
}

/// Sizes of the joint and both iterated co/ends, with the bijection verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FubiniReport {
    pub end_joint: usize,
    pub end_ab: usize,
    pub end_ba: usize,
    pub coend_joint: usize,
    pub coend_ab: usize,
    pub coend_ba: usize,
}

/// Computes the three ends and three coends and checks the canonical bijections between
/// them, including compatibility with the universal wedges and cowedges.
pub fn fubini_check(d: &dyn BiIntegrand, lim: &Limits) -> Result<FubiniReport> {
    let joint = Joint::new(d, lim)?;
    let (na, nb) = (d.left().0.n_objects(), d.right().0.n_objects());
    let je = end(&joint, lim)?;
    let jc = coend(&joint, lim)?;
    let mut sizes = Vec::new();
    for swapped in [false, true] {
        let sw = Swapped(d);
        let dd: &dyn BiIntegrand = if swapped { &sw } else { d };
        let it_e = Iterated::new(dd, false, lim);
        let ie = end(&it_e, lim)?;
        let it_c = Iterated::new(dd, true, lim);
        let ic = coend(&it_c, lim)?;
        // Joint object (α, β) has index α·nb + β; `pick` orders it as (outer, inner).
        let pick = |outer: Obj, inner: Obj| {
            if swapped {
                inner * nb + outer
            } else {
                outer * nb + inner
            }
        };
        let (n_out, n_in) = if swapped { (nb, na) } else { (na, nb) };
        let arity_in = dd.right().1.arity();
        let arity_out = dd.left().1.arity();
        // Ends: family x_{(α,β)} goes to α ↦ (β ↦ x_{(α,β)}).
        let mut seen = vec![false; ie.len()];
        for e in 0..je.len() {
            let mut outer = Vec::with_capacity(n_out);
            for o in 0..n_out {
                let inner = it_e.inner(&vec![o; arity_out])?;
                let Inner::End(ref ein) = inner.1 else {
                    unreachable!()
                };
                let comps: Vec<usize> = (0..n_in)
                    .map(|i| je.carrier.legs[pick(o, i)].apply(e))
                    .collect();
                let k = ein.find_family(&comps).ok_or_else(|| {
                    Error::BijectionFailure("joint end family is not an iterated family".into())
                })?;
                // Compatibility with the universal wedges.
                for i in 0..n_in {
                    if ein.carrier.legs[i].apply(k) != je.carrier.legs[pick(o, i)].apply(e) {
                        return Err(Error::BijectionFailure(
                            "end bijection does not respect wedges".into(),
                        ));
                    }
                }
                outer.push(k);
            }
            let t = ie
                .find_family(&outer)
                .ok_or_else(|| Error::BijectionFailure("outer family missing".into()))?;
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::BijectionFailure(
                    "two joint families give one iterated family".into(),
                ));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BijectionFailure(
                "iterated end has families not coming from the joint end".into(),
            ));
        }
        // Coends: ((α,β), x) goes to the outer class of the inner class of x.
        let mut image: Vec<Option<usize>> = vec![None; jc.len()];
        for o in 0..n_out {
            let inner = it_c.inner(&vec![o; arity_out])?;
            let Inner::Coend(ref cin) = inner.1 else {
                unreachable!()
            };
            for i in 0..n_in {
                let j = pick(o, i);
                for x in 0..jc.cowedge.legs[j].dom.len() {
                    let target = ic.class_of(o, cin.class_of(i, x));
                    let cls = jc.class_of(j, x);
                    match image[cls] {
                        None => image[cls] = Some(target),
                        Some(t) if t != target => {
                            return Err(Error::BijectionFailure(
                                "coend comparison map is not well defined".into(),
                            ));
                        }
                        _ => {}
                    }
                }
            }
        }
        let mut hit = vec![false; ic.len()];
        for t in image.iter().flatten() {
            if std::mem::replace(&mut hit[*t], true) {
                return Err(Error::BijectionFailure(
                    "two joint classes give one iterated class".into(),
                ));
            }
        }
        if image.iter().any(|t| t.is_none()) || hit.iter().any(|h| !h) {
            return Err(Error::BijectionFailure(
                "coend comparison map is not bijective".into(),
            ));
        }
        let _ = arity_in;
        sizes.push((ie.len(), ic.len()));
    }
    Ok(FubiniReport {
        end_joint: je.len(),
        end_ab: sizes[0].0,
        end_ba: sizes[1].0,
        coend_joint: jc.len(),
        coend_ab: sizes[0].1,
        coend_ba: sizes[1].1,
    })
}

/// The same data read as one `(p+r, q+s)`-functor of a single variable, when `A = B`.
struct SingleVariable<'a> {
    d: &'a dyn BiIntegrand,
}

impl SingleVariable<'_> {
    fn split<T: Copy>(&self, t: &[T]) -> (Vec<T>, Vec<T>) {
        let (sa, sb) = (self.d.left().1, self.d.right().1);
        let (p, r) = (sa.p, sb.p);
        let a = t[..p]
            .iter()
            .chain(&t[p + r..p + r + sa.q])
            .copied()
            .collect();
        let b = t[p..p + r]
            .iter()
            .chain(&t[p + r + sa.q..])
            .copied()
            .collect();
        (a, b)
    }
}

impl Integrand for SingleVariable<'_> {
    fn base(&self) -> &Arc<FinCat> {
        self.d.left().0
    }

    fn sig(&self) -> Sig {
        let (sa, sb) = (self.d.left().1, self.d.right().1);
        Sig::new(sa.p + sb.p, sa.q + sb.q)
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        let (a, b) = self.split(objs);
        self.d.fiber(&a, &b)
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        let (a, b) = self.split(mors);
        self.d.act(&a, &b, x)
    }
}

/// Joint co/end over pairs versus the co/end over a single shared variable, for `A = B`:
/// `((end over pairs, end over one variable), (coend over pairs, coend over one variable))`.
pub fn arity_gap(d: &dyn BiIntegrand, lim: &Limits) -> Result<((usize, usize), (usize, usize))> {
    if !crate::functor::same_shape(d.left().0, d.right().0) {
        return Err(Error::ShapeMismatch(
            "both variables must range over the same category".into(),
        ));
    }
    let joint = Joint::new(d, lim)?;
    let single = SingleVariable { d };
    Ok((
        (end(&joint, lim)?.len(), end(&single, lim)?.len()),
        (coend(&joint, lim)?.len(), coend(&single, lim)?.len()),
    ))
}

/// A natural `α : D ⇒ D'` induces a map of ends commuting with the universal wedges, and
/// that map is the factorization of the wedge `α ∘ ω`.
pub fn check_end_functoriality(
    d: &SetFunctorPQ,
    d2: &SetFunctorPQ,
    alpha: &NatTransf,
    lim: &Limits,
) -> Result<FinFn> {
    alpha.validate()?;
    let (e1, e2) = (end(d, lim)?, end(d2, lim)?);
    let n = d.base().n_objects();
    let mut table = Vec::with_capacity(e1.len());
    for x in 0..e1.len() {
        let comps: Vec<usize> = (0..n)
            .map(|a| alpha.components[d.diag(a)].apply(e1.carrier.legs[a].apply(x)))
            .collect();
        let y = e2
            .find_family(&comps)
            .ok_or_else(|| Error::LawFailure("induced family is not in the end".into()))?;
        let hits = (0..e2.len()).filter(|&z| e2.family(z) == comps).count();
        if hits != 1 {
            return Err(Error::NonUnique(
                "induced map is not the unique factorization".into(),
            ));
        }
        table.push(y);
    }
    FinFn::new(
        e1.carrier.carrier.clone(),
        e2.carrier.carrier.clone(),
        table,
    )
}

/// `D` with `r` and `s` mute slots appended, lazily.
pub struct MuteView {
    pub inner: Arc<dyn Integrand>,
    pub r: usize,
    pub s: usize,
}

impl MuteView {
    fn keep<T: Copy>(&self, t: &[T]) -> Vec<T> {
        let sig = self.inner.sig();
        t[..sig.p]
            .iter()
            .chain(&t[sig.p + self.r..sig.p + self.r + sig.q])
            .copied()
            .collect()
    }
}

impl Integrand for MuteView {
    fn base(&self) -> &Arc<FinCat> {
        self.inner.base()
    }

    fn sig(&self) -> Sig {
        let s = self.inner.sig();
        Sig::new(s.p + self.r, s.q + self.s)
    }

    fn fiber(&self, objs: &[Obj]) -> Result<FinSet> {
        self.inner.fiber(&self.keep(objs))
    }

    fn act(&self, mors: &[Mor], x: usize) -> Result<usize> {
        self.inner.act(&self.keep(mors), x)
    }
}

/// Adding mute slots changes neither the end nor the coend, label for label.
pub fn check_mute_invariance(
    d: &Arc<dyn Integrand>,
    r: usize,
    s: usize,
    lim: &Limits,
) -> Result<()> {
    let m = MuteView {
        inner: d.clone(),
        r,
        s,
    };
    if end(d.as_ref(), lim)?.labels() != end(&m, lim)?.labels() {
        return Err(Error::LawFailure(format!(
            "end changes after adding ({r},{s}) mute slots"
        )));
    }
    if coend(d.as_ref(), lim)?.labels() != coend(&m, lim)?.labels() {
        return Err(Error::LawFailure(format!(
            "coend changes after adding ({r},{s}) mute slots"
        )));
    }
    Ok(())
}

/// `Set(S, ∫D) ≅ ∫ Set(S, D)`, element by element.
pub fn check_end_hom_commutation(d: &Arc<dyn Integrand>, s: &FinSet, lim: &Limits) -> Result<()> {
    let (dd, s1, lim1) = (d.clone(), s.clone(), *lim);
    let d2 = d.clone();
    let k = s.len();
    let h = FnIntegrand::new(
        d.base(),
        d.sig(),
        "hom from a set",
        move |t| hom_set(&s1, &dd.fiber(t)?, &lim1),
        move |m, phi| {
            let c = d2.base();
            let src = crate::functor::tuple_source(c, d2.sig(), m);
            let tgt = crate::functor::tuple_target(c, d2.sig(), m);
            let (ns, nt) = (d2.fiber(&src)?.len(), d2.fiber(&tgt)?.len());
            let t = decode_fn(phi, k, ns)
                .into_iter()
                .map(|y| d2.act(m, y))
                .collect::<Result<Vec<_>>>()?;
            Ok(encode_fn(&t, nt))
        },
    );
    let inner = end(d.as_ref(), lim)?;
    let outer = end(&h, lim)?;
    let fibers = diag_fibers(d.as_ref())?;
    let n = fibers.len();
    let mut seen = vec![false; outer.len()];
    // A map S → ∫D is a family of maps S → D(ΔA).
    let total = setops::fn_count(k, inner.len());
    check_cap("hom into the end", total, lim)?;
    for idx in 0..total as usize {
        let f = decode_fn(idx, k, inner.len());
        let comps: Vec<usize> = (0..n)
            .map(|a| {
                encode_fn(
                    &f.iter()
                        .map(|&e| inner.carrier.legs[a].apply(e))
                        .collect::<Vec<_>>(),
                    fibers[a].len(),
                )
            })
            .collect();
        let t = outer
            .find_family(&comps)
            .ok_or_else(|| Error::LawFailure("map into the end gives no family of maps".into()))?;
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::LawFailure(
                "two maps into the end give the same family".into(),
            ));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::LawFailure(
            "a family of maps does not come from a map into the end".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::acyclic_graph;

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
    fn hom_end_and_coend_on_arrow() {
        let lim = Limits::default();
        let h = SetFunctorPQ::hom(&arrow(), &lim).unwrap();
        for m in Method::ALL {
            let e = end_pq(&h, m, &lim).unwrap();
            assert_eq!(
                e.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                vec!["(id_0,id_1)"],
                "{m}"
            );
            let c = coend_pq(&h, m, &lim).unwrap();
            assert_eq!(
                c.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                vec!["⟦(0,id_0)⟧", "⟦(1,id_1)⟧"],
                "{m}"
            );
        }
    }

    #[test]
    fn universal_property_on_hom() {
        let lim = Limits::default();
        let h = SetFunctorPQ::hom(&arrow(), &lim).unwrap();
        let d: Arc<dyn Integrand> = Arc::new(h.clone());
        let e = end(&h, &lim).unwrap();
        let r = verify_end_universal(&e, &d, &[0, 1, 2, 3], &lim).unwrap();
        assert_eq!(r.wedges, vec![1, 1, 1, 1]);
        let c = coend(&h, &lim).unwrap();
        let r = verify_coend_universal(&c, &d, &[0, 1, 2], &lim).unwrap();
        assert_eq!(r.wedges, vec![0, 1, 4]);
    }

    #[test]
    fn carrier_itself_factors_by_identity() {
        let lim = Limits::default();
        let h: Arc<dyn Integrand> = Arc::new(SetFunctorPQ::hom(&arrow(), &lim).unwrap());
        let e = end(h.as_ref(), &lim).unwrap();
        assert!(dinat::is_wedge(&e.wedge, &h).unwrap());
        let w = e.wedge.precompose(&FinFn::identity(&e.carrier.carrier));
        assert_eq!(w, e.wedge);
    }
}
