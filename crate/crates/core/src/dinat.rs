//! Dinatural transformations between a `(p,q)`-functor and a `(q,p)`-functor, and wedges.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{Mor, Obj};
use crate::functor::{same_shape, split_tuple, ConstIntegrand, Integrand, NatTransf};
use crate::search::EqSystem;
use crate::setops::{FinFn, FinSet};
use crate::Limits;

/// A family `α_A : F(A,…,A) → G(A,…,A)` with `F` of signature `(p,q)` and `G` of `(q,p)`.
#[derive(Clone)]
pub struct DinatPQ {
    pub f: Arc<dyn Integrand>,
    pub g: Arc<dyn Integrand>,
    pub components: Vec<FinFn>,
}

impl fmt::Debug for DinatPQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl DinatPQ {
    /// Component tables, for comparisons independent of the functors.
    pub fn tables(&self) -> Vec<Vec<usize>> {
        self.components.iter().map(|c| c.table.clone()).collect()
    }
}

/// One failed hexagon: the morphism and the element of `F(B,…,B,A,…,A)` it fails on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexViolation {
    pub mor: String,
    pub element: String,
}

/// The two paths of the hexagon for one morphism `u: A → B`.
pub(crate) struct Hexagon {
    pub a: Obj,
    pub b: Obj,
    /// `F(u, …; id_A, …)` on each `y ∈ F(B,…;A,…)`, landing in `F(ΔA)`.
    pub s: Vec<usize>,
    /// `F(id_B, …; u, …)(y) ∈ F(ΔB)`.
    pub t: Vec<usize>,
    /// `G(id_A, …; u, …) : G(ΔA) → G(A,…;B,…)`.
    pub lam: Vec<usize>,
    /// `G(u, …; id_B, …) : G(ΔB) → G(A,…;B,…)`.
    pub rho: Vec<usize>,
    pub y_labels: FinSet,
}

pub(crate) fn check_types(f: &dyn Integrand, g: &dyn Integrand) -> Result<()> {
    if !same_shape(f.base(), g.base()) {
        return Err(Error::ShapeMismatch(
            "dinatural between functors on different categories".into(),
        ));
    }
    if g.sig() != f.sig().dual() {
        return Err(Error::ShapeMismatch(format!(
            "dinatural from signature {} needs a target of signature {}, got {}",
            f.sig(),
            f.sig().dual(),
            g.sig()
        )));
    }
    Ok(())
}

pub(crate) fn hexagon(f: &dyn Integrand, g: &dyn Integrand, u: Mor) -> Result<Hexagon> {
    let c = f.base();
    let (a, b) = (c.src(u), c.dst(u));
    let (fs, gs) = (f.sig(), g.sig());
    let ys = f.fiber(&split_tuple(fs, b, a))?;
    let (ia, ib) = (c.identity(a), c.identity(b));
    let (m_s, m_t) = (split_tuple(fs, u, ia), split_tuple(fs, ib, u));
    let mut s = Vec::with_capacity(ys.len());
    let mut t = Vec::with_capacity(ys.len());
    for y in 0..ys.len() {
        s.push(f.act(&m_s, y)?);
        t.push(f.act(&m_t, y)?);
    }
    let (ga, gb) = (
        g.fiber(&vec![a; gs.arity()])?,
        g.fiber(&vec![b; gs.arity()])?,
    );
    let (m_l, m_r) = (split_tuple(gs, ia, u), split_tuple(gs, u, ib));
    let lam = (0..ga.len())
        .map(|x| g.act(&m_l, x))
        .collect::<Result<Vec<_>>>()?;
    let rho = (0..gb.len())
        .map(|x| g.act(&m_r, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(Hexagon {
        a,
        b,
        s,
        t,
        lam,
        rho,
        y_labels: ys,
    })
}

fn diag_fibers(d: &dyn Integrand) -> Result<Vec<FinSet>> {
    let n = d.sig().arity();
    (0..d.base().n_objects())
        .map(|a| d.fiber(&vec![a; n]))
        .collect()
}

/// Checks every hexagon; returns the violations (empty iff dinatural).
pub fn check_dinatural(d: &DinatPQ) -> Result<Vec<HexViolation>> {
    let (f, g) = (d.f.as_ref(), d.g.as_ref());
    check_types(f, g)?;
    let c = f.base();
    let (ff, gf) = (diag_fibers(f)?, diag_fibers(g)?);
    if d.components.len() != c.n_objects() {
        return Err(Error::ShapeMismatch(
            "one component per object expected".into(),
        ));
    }
    for (a, comp) in d.components.iter().enumerate() {
        if comp.dom != ff[a] || comp.cod != gf[a] {
            return Err(Error::ShapeMismatch(format!(
                "component at {} has the wrong type",
                c.object_name(a)
            )));
        }
    }
    let mut bad = Vec::new();
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let h = hexagon(f, g, u)?;
        for y in 0..h.s.len() {
            let left = h.lam[d.components[h.a].apply(h.s[y])];
            let right = h.rho[d.components[h.b].apply(h.t[y])];
            if left != right {
                bad.push(HexViolation {
                    mor: c.mor_name(u).into(),
                    element: h.y_labels.label(y).to_string(),
                });
            }
        }
    }
    Ok(bad)
}

pub fn is_dinatural(d: &DinatPQ) -> Result<bool> {
    Ok(check_dinatural(d)?.is_empty())
}

/// All dinatural transformations `F ⇒̈ G`, component tables in lexicographic order.
pub fn enumerate_dinat(
    f: &Arc<dyn Integrand>,
    g: &Arc<dyn Integrand>,
    lim: &Limits,
) -> Result<Vec<DinatPQ>> {
    check_types(f.as_ref(), g.as_ref())?;
    let c = f.base().clone();
    let n = c.n_objects();
    let (ff, gf) = (diag_fibers(f.as_ref())?, diag_fibers(g.as_ref())?);
    let mut off = vec![0; n + 1];
    for a in 0..n {
        off[a + 1] = off[a] + ff[a].len();
    }
    let domains = (0..n)
        .flat_map(|a| std::iter::repeat_n(gf[a].len(), ff[a].len()))
        .collect();
    let mut sys = EqSystem::new(domains);
    for u in 0..c.n_morphisms() {
        if c.is_identity(u) {
            continue;
        }
        let h = hexagon(f.as_ref(), g.as_ref(), u)?;
        let (ml, mr) = (sys.add_map(h.lam), sys.add_map(h.rho));
        for y in 0..h.s.len() {
            sys.require(off[h.a] + h.s[y], ml, off[h.b] + h.t[y], mr);
        }
    }
    let sols = sys.solve(lim, "dinatural transformations")?;
    Ok(sols
        .into_iter()
        .map(|s| DinatPQ {
            f: f.clone(),
            g: g.clone(),
            components: (0..n)
                .map(|a| FinFn {
                    dom: ff[a].clone(),
                    cod: gf[a].clone(),
                    table: s[off[a]..off[a + 1]].to_vec(),
                })
                .collect(),
        })
        .collect())
}

/// The identity `F ⇒̈ F`, defined only for signatures `(p,p)`.
pub fn identity_dinat(f: &Arc<dyn Integrand>) -> Result<DinatPQ> {
    let s = f.sig();
    if s.p != s.q {
        return Err(Error::NoIdentityDinat { p: s.p, q: s.q });
    }
    let components = diag_fibers(f.as_ref())?
        .iter()
        .map(FinFn::identity)
        .collect();
    Ok(DinatPQ {
        f: f.clone(),
        g: f.clone(),
        components,
    })
}

fn diag_index(nat: &NatTransf, a: Obj) -> Result<usize> {
    let p = nat.source.domain();
    let k = p.factors().map_or(0, |f| f.len());
    if p.factors().is_none() {
        return Err(Error::ShapeMismatch(
            "natural transformation is not on a power category".into(),
        ));
    }
    Ok(p.encode_obj(&vec![a; k]))
}

/// `θ ∘ α` for `α : F' ⇒ F` natural, given `F'` as `source`.
pub fn compose_with_nat(
    theta: &DinatPQ,
    alpha: &NatTransf,
    source: &Arc<dyn Integrand>,
) -> Result<DinatPQ> {
    check_types(source.as_ref(), theta.g.as_ref())?;
    let mut components = Vec::with_capacity(theta.components.len());
    for (a, th) in theta.components.iter().enumerate() {
        let al = &alpha.components[diag_index(alpha, a)?];
        if al.cod != th.dom {
            return Err(Error::ShapeMismatch(
                "natural transformation does not land in the source".into(),
            ));
        }
        components.push(th.after(al));
    }
    Ok(DinatPQ {
        f: source.clone(),
        g: theta.g.clone(),
        components,
    })
}

/// `β ∘ θ` for `β : G ⇒ G'` natural, given `G'` as `target`.
pub fn compose_nat_with(
    beta: &NatTransf,
    theta: &DinatPQ,
    target: &Arc<dyn Integrand>,
) -> Result<DinatPQ> {
    check_types(theta.f.as_ref(), target.as_ref())?;
    let mut components = Vec::with_capacity(theta.components.len());
    for (a, th) in theta.components.iter().enumerate() {
        let be = &beta.components[diag_index(beta, a)?];
        if be.dom != th.cod {
            return Err(Error::ShapeMismatch(
                "natural transformation does not start at the target".into(),
            ));
        }
        components.push(be.after(th));
    }
    Ok(DinatPQ {
        f: theta.f.clone(),
        g: target.clone(),
        components,
    })
}

/// A wedge `X ⇒̈ D`: legs `X → D(A,…,A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgePQ {
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

/// A cowedge `D ⇒̈ X`: legs `D(A,…,A) → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CowedgePQ {
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

fn constant_for(d: &Arc<dyn Integrand>, x: &FinSet) -> Arc<dyn Integrand> {
    Arc::new(ConstIntegrand::new(d.base(), d.sig().dual(), x.clone()))
}

pub fn wedge_as_dinat(w: &WedgePQ, d: &Arc<dyn Integrand>) -> DinatPQ {
    DinatPQ {
        f: constant_for(d, &w.apex),
        g: d.clone(),
        components: w.legs.clone(),
    }
}

pub fn cowedge_as_dinat(w: &CowedgePQ, d: &Arc<dyn Integrand>) -> DinatPQ {
    DinatPQ {
        f: d.clone(),
        g: constant_for(d, &w.apex),
        components: w.legs.clone(),
    }
}

pub fn is_wedge(w: &WedgePQ, d: &Arc<dyn Integrand>) -> Result<bool> {
    is_dinatural(&wedge_as_dinat(w, d))
}

pub fn is_cowedge(w: &CowedgePQ, d: &Arc<dyn Integrand>) -> Result<bool> {
    is_dinatural(&cowedge_as_dinat(w, d))
}

/// All wedges for `D` with apex `X`.
pub fn enumerate_wedges(x: &FinSet, d: &Arc<dyn Integrand>, lim: &Limits) -> Result<Vec<WedgePQ>> {
    Ok(enumerate_dinat(&constant_for(d, x), d, lim)?
        .into_iter()
        .map(|t| WedgePQ {
            apex: x.clone(),
            legs: t.components,
        })
        .collect())
}

/// All cowedges for `D` with apex `X`.
pub fn enumerate_cowedges(
    d: &Arc<dyn Integrand>,
    x: &FinSet,
    lim: &Limits,
) -> Result<Vec<CowedgePQ>> {
    Ok(enumerate_dinat(d, &constant_for(d, x), lim)?
        .into_iter()
        .map(|t| CowedgePQ {
            apex: x.clone(),
            legs: t.components,
        })
        .collect())
}

impl WedgePQ {
    /// `θ_*`: precomposition with `h : X' → X`.
    pub fn precompose(&self, h: &FinFn) -> WedgePQ {
        WedgePQ {
            apex: h.dom.clone(),
            legs: self.legs.iter().map(|l| l.after(h)).collect(),
        }
    }

    /// Postcomposition with a natural `α : D ⇒ D'` on `C^{(p,q)}`.
    pub fn postcompose(&self, alpha: &NatTransf) -> Result<WedgePQ> {
        let mut legs = Vec::with_capacity(self.legs.len());
        for (a, l) in self.legs.iter().enumerate() {
            legs.push(alpha.components[diag_index(alpha, a)?].after(l));
        }
        Ok(WedgePQ {
            apex: self.apex.clone(),
            legs,
        })
    }
}

impl CowedgePQ {
    /// Postcomposition with `h : X → X'`.
    pub fn postcompose(&self, h: &FinFn) -> CowedgePQ {
        CowedgePQ {
            apex: h.cod.clone(),
            legs: self.legs.iter().map(|l| h.after(l)).collect(),
        }
    }

    /// Precomposition with a natural `α : D' ⇒ D`.
    pub fn precompose(&self, alpha: &NatTransf) -> Result<CowedgePQ> {
        let mut legs = Vec::with_capacity(self.legs.len());
        for (a, l) in self.legs.iter().enumerate() {
            legs.push(l.after(&alpha.components[diag_index(alpha, a)?]));
        }
        Ok(CowedgePQ {
            apex: self.apex.clone(),
            legs,
        })
    }
}
