//! Cross-method and law checks on single instances. `check-all` runs them on every
//! declaration of a spec; the acceptance suite runs them on seeded instances.

use std::sync::Arc;

use hace::apps::{check_day_unary, MonoidalFinCat};
use hace::dinat::{is_cowedge, is_wedge};
use hace::ends::{
    arity_gap, check_mute_invariance, coend_pq, dinat_as_end, dinat_from_point_vs_nat, end_pq,
    fubini_check, verify_coend_universal, verify_end_universal, Method, ProductBi,
};
use hace::fincat::FinCat;
use hace::functor::ConstIntegrand;
use hace::kusarigama::{
    check_constant_on_lattice, check_kusarigama_laws, cokusarigama, cokusarigama_via_tw_j,
    factorization_check, kusarigama, kusarigama_of_identitylike, kusarigama_via_tw_j,
    point_cokusarigama_vs_grid, Lattice,
};
use hace::setops::{colimit, limit, UnionFind};
use hace::twisted::{check_tw_iso, hom_pi, hom_pi_is_end_weight, tw_j, tw_j_embedding};
use hace::{Error, FinSet, Integrand, Limits, SetFunctor, SetFunctorPQ, Sig};

use crate::report::{Check, Status};

fn dynd(d: &SetFunctorPQ) -> Arc<dyn Integrand> {
    Arc::new(d.clone())
}

/// Ends and coends under every method carry identical labels.
pub fn method_agreement(d: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("method-agreement", || {
        let e0 = end_pq(d, Method::Equalizer, lim)?;
        let c0 = coend_pq(d, Method::Equalizer, lim)?;
        let mut bad = Vec::new();
        for m in &Method::ALL[1..] {
            if end_pq(d, *m, lim)?.labels() != e0.labels() {
                bad.push(format!("end by {m}"));
            }
            if coend_pq(d, *m, lim)?.labels() != c0.labels() {
                bad.push(format!("coend by {m}"));
            }
        }
        let detail = if bad.is_empty() {
            format!("end {}, coend {}", e0.len(), c0.len())
        } else {
            format!("differs: {}", bad.join(", "))
        };
        Ok((bad.is_empty(), detail))
    })
}

/// Every wedge and cowedge out of or into a test apex factors exactly once.
pub fn universal_property(d: &SetFunctorPQ, apexes: &[usize], lim: &Limits) -> Check {
    Check::run("universal-property", || {
        let dd = dynd(d);
        let e = end_pq(d, Method::Equalizer, lim)?;
        let c = coend_pq(d, Method::Equalizer, lim)?;
        if !is_wedge(&e.wedge, &dd)? || !is_cowedge(&c.cowedge, &dd)? {
            return Ok((false, "universal legs are not a wedge".into()));
        }
        let re = verify_end_universal(&e, &dd, apexes, lim)?;
        let rc = verify_coend_universal(&c, &dd, apexes, lim)?;
        let ok = re.wedges == re.factorizations && rc.wedges == rc.factorizations;
        let total = |v: &[usize]| v.iter().sum::<usize>();
        Ok((
            ok,
            format!(
                "{} wedges, {} cowedges",
                total(&re.wedges),
                total(&rc.wedges)
            ),
        ))
    })
}

/// Dinaturals `F ⇒̈ G` against the end of the dinaturality integrand.
pub fn dinat_end(f: &SetFunctorPQ, g: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("dinat-as-end", || {
        let r = dinat_as_end(&dynd(f), &dynd(g), lim)?;
        Ok((
            r.dinats == r.end_size,
            format!("{} dinaturals, end of size {}", r.dinats, r.end_size),
        ))
    })
}

/// Whether `DiNat(pt, G) ≅ Nat(hom_Π, G)` is expected for this signature of `G`.
pub fn point_vs_nat_applies(sig: Sig) -> bool {
    sig.arity() == 1 || hom_pi_is_end_weight(sig)
}

/// `DiNat(pt, G)` against `Nat(hom_Π, G)`.
pub fn point_vs_nat(g: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("point-vs-hom-pi", || {
        let (a, b) = dinat_from_point_vs_nat(&dynd(g), lim)?;
        Ok((
            a == b,
            format!("{a} dinaturals from the point, {b} naturals"),
        ))
    })
}

/// Adding a mute slot on either side changes neither co/end.
pub fn mute_invariance(d: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("mute-invariance", || {
        let dd = dynd(d);
        let mut n = 0;
        for (r, s) in [(1, 0), (0, 1)] {
            if d.sig().arity() + r + s <= 4 {
                check_mute_invariance(&dd, r, s, lim)?;
                n += 1;
            }
        }
        Ok((true, format!("{n} extensions")))
    })
}

/// Number of connected components of a category.
pub fn components(c: &FinCat) -> usize {
    let mut uf = UnionFind::new(c.n_objects());
    for u in 0..c.n_morphisms() {
        uf.union(c.src(u), c.dst(u));
    }
    uf.canonical_classes().1.len()
}

/// The restriction of a `(0,n)` functor to the diagonal, as a functor on the base.
pub fn diagonal(d: &SetFunctorPQ) -> SetFunctor {
    let n = d.sig().arity();
    let c = d.base().clone();
    let dd = d.clone();
    SetFunctor::from_fn(
        c.clone(),
        (0..c.n_objects())
            .map(|a| d.fiber_at(&vec![a; n]).clone())
            .collect(),
        move |u, x| dd.map_at(&vec![u; n]).apply(x),
    )
}

fn sorted_families(e: &hace::ends::EndPQ) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = (0..e.len()).map(|i| e.family(i)).collect();
    v.sort();
    v
}

/// The closed forms for small signatures: `(0,0)` gives `X^{π0}` and `π0 · X`, `(1,0)` and
/// `(0,1)` give limits and colimits, `(0,n)` gives co/limits of the diagonal restriction.
pub fn degenerate(d: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("degenerate-arity", || {
        let sig = d.sig();
        let e = end_pq(d, Method::Equalizer, lim)?;
        let c = coend_pq(d, Method::Equalizer, lim)?;
        if sig.arity() == 0 {
            let k = components(d.base());
            let x = d.fiber_at(&[]).len();
            let ok = e.len() == x.pow(k as u32) && c.len() == k * x;
            return Ok((
                ok,
                format!("{k} components, end {}, coend {}", e.len(), c.len()),
            ));
        }
        if sig.p != 0 && sig.arity() != 1 {
            return Ok((true, "no closed form for this signature".into()));
        }
        let diag = if sig.p == 1 {
            d.functor().clone()
        } else {
            diagonal(d)
        };
        let l = limit(&diag, lim)?;
        let q = colimit(&diag, lim)?;
        let mut fams: Vec<Vec<usize>> = (0..l.carrier.len())
            .map(|i| l.legs.iter().map(|g| g.apply(i)).collect())
            .collect();
        fams.sort();
        let mine: Vec<Vec<usize>> = c.cowedge.legs.iter().map(|l| l.table.clone()).collect();
        let theirs: Vec<Vec<usize>> = q.legs.iter().map(|l| l.table.clone()).collect();
        let ok = sorted_families(&e) == fams && mine == theirs;
        Ok((
            ok,
            format!("limit {}, colimit {}", l.carrier.len(), q.carrier.len()),
        ))
    })
}

/// Adjunction counts, hom commutation, limits and the diagonal reduction for `J` and `Γ`,
/// plus unique factorization through the unit and counit.
pub fn kusarigama_laws(f: &SetFunctorPQ, g: &SetFunctorPQ, lim: &Limits) -> Vec<Check> {
    let laws = Check::run("kusarigama-laws", || {
        let r = check_kusarigama_laws(f, g, &FinSet::range(2), lim)?;
        let c = r.adjunction.counts;
        let ok = c.nat_from_j == c.dinat
            && c.nat_to_gamma == c.dinat
            && r.limits.end == r.limits.limit
            && r.limits.coend == r.limits.colimit;
        Ok((
            ok,
            format!(
                "Nat(JF,G) {}, DiNat {}, Nat(F,ΓG) {}",
                c.nat_from_j, c.dinat, c.nat_to_gamma
            ),
        ))
    });
    let fact = Check::run("unique-factorization", || {
        let r = factorization_check(&dynd(f), &dynd(g), lim)?;
        Ok((
            r.nat_from_j == r.dinat && r.nat_to_gamma == r.dinat,
            format!("{} dinaturals", r.dinat),
        ))
    });
    vec![laws, fact]
}

/// `tw_pq(C, (1,1)) ≅ Tw(C)` and, for a `(1,1)` functor on a thin category, both fiber
/// routes through `Tw_J` plus the embedding of `Tw_J`.
pub fn twisted(c: &Arc<FinCat>, d: Option<&SetFunctorPQ>, lim: &Limits) -> Vec<Check> {
    let mut out = vec![Check::run("twisted-arrow-iso", || {
        check_tw_iso(c, lim)?;
        Ok((
            true,
            format!("{} objects", hace::twisted::classical_tw(c).n_objects()),
        ))
    })];
    if let Some(d) = d.filter(|d| d.sig() == Sig::new(1, 1) && c.is_thin()) {
        out.push(Check::run("twisted-fiber-routes", || {
            let n = c.n_objects();
            let (mut embedded, mut none) = (0, 0);
            for a in 0..n {
                for b in 0..n {
                    let r = cokusarigama_via_tw_j(d, a, b, lim)?;
                    let s = kusarigama_via_tw_j(d, a, b, lim)?;
                    if r.pointwise != r.via_tw_j || s.pointwise != s.via_tw_j {
                        return Ok((false, format!("fiber at ({a},{b}) differs")));
                    }
                    let t = tw_j(c, a, b, lim)?;
                    match tw_j_embedding(c, &t, lim) {
                        Ok(k) => {
                            k.validate()?;
                            if !k.is_injective_on_objects() {
                                return Ok((
                                    false,
                                    format!("embedding at ({a},{b}) not injective"),
                                ));
                            }
                            embedded += 1;
                        }
                        Err(Error::NoEmbedding(_)) => none += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((
                true,
                format!("{} fibers, {embedded} embeddings, {none} without", n * n),
            ))
        }));
    }
    out
}

/// Joint and iterated co/ends of `F ⊠ G` agree; over a shared base the single-variable
/// co/end is reported alongside.
pub fn fubini(
    f: &SetFunctorPQ,
    g: &SetFunctorPQ,
    lim: &Limits,
) -> (Check, Option<((usize, usize), (usize, usize))>) {
    let bi = ProductBi {
        f: dynd(f),
        g: dynd(g),
        mixed: None,
    };
    let check = Check::run("fubini", || {
        let r = fubini_check(&bi, lim)?;
        let ok = r.end_ab == r.end_joint
            && r.end_ba == r.end_joint
            && r.coend_ab == r.coend_joint
            && r.coend_ba == r.coend_joint;
        Ok((
            ok,
            format!(
                "ends {} {} {}, coends {} {} {}",
                r.end_joint, r.end_ab, r.end_ba, r.coend_joint, r.coend_ab, r.coend_ba
            ),
        ))
    });
    let gap = if hace::functor::same_shape(f.base(), g.base()) {
        arity_gap(&bi, lim).ok()
    } else {
        None
    };
    (check, gap)
}

/// The unary Day convolution is the functor itself.
pub fn day_unary(m: &MonoidalFinCat, f: &SetFunctorPQ, lim: &Limits) -> Check {
    Check::run("day-unary", || {
        check_day_unary(m, f, lim)?;
        Ok((true, String::new()))
    })
}

pub fn skip(name: &str, why: &str) -> Check {
    Check::new(name, Status::Skip, why)
}

/// `J(pt)` has the fibers of `hom_Π`, and on thin categories the grid map is a bijection;
/// `Γ(pt)` is the point.
pub fn point_kusarigama(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Check {
    Check::run("point-kusarigama", || {
        let pt: Arc<dyn Integrand> = Arc::new(ConstIntegrand::new(c, sig, FinSet::point()));
        let j = cokusarigama(&pt, lim)?;
        let grid = hom_pi(c, sig.dual(), lim)?;
        let sizes = |f: &SetFunctor| f.fibers().iter().map(FinSet::len).collect::<Vec<_>>();
        let mut ok = sizes(j.functor.functor()) == sizes(grid.functor());
        if c.is_thin() {
            ok &= point_cokusarigama_vs_grid(c, sig, lim)?;
        }
        let g = kusarigama(&pt, lim)?;
        ok &= g.functor.functor().fibers().iter().all(|s| s.len() == 1);
        Ok((ok, format!("{} tuples", grid.power().n_objects())))
    })
}

/// The closed forms for the co/kusarigama of a constant functor on a lattice.
pub fn constant_on_lattice(lat: &Lattice, sig: Sig, e: &FinSet, lim: &Limits) -> Check {
    Check::run("constant-on-lattice", || {
        let n = check_constant_on_lattice(lat, sig, e, lim)?;
        Ok((true, format!("{n} tuples")))
    })
}

/// Co/kusarigama of the identity on a lattice against its closed form. How often the
/// literal meet-of-weights display agrees is reported, not asserted.
pub fn identity_on_lattice(lat: &Lattice, sig: Sig) -> Check {
    Check::run(&format!("identity-on-lattice {sig}"), || {
        let r = kusarigama_of_identitylike(lat, sig)?;
        Ok((
            true,
            format!(
                "{} tuples, literal display agrees on {}",
                r.tuples, r.literal_display_agrees
            ),
        ))
    })
}
