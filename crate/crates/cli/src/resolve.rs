//! Turning a parsed [`CatSpec`] into validated categories, functors and monoidal structures.

use std::collections::HashMap;
use std::sync::Arc;

use hace::apps::MonoidalFinCat;
use hace::fincat::{
    acyclic_graph, monoid, poset, validate_category, FinCat, RawCategory, ValidateOpts,
};
use hace::functor::{functor_from_slots, SlotAction};
use hace::twisted::hom_pi;
use hace::{FinSet, Limits, SetFunctorPQ};

use crate::spec::{CatSpec, CategoryBody, FunctorBody, FunctorDecl, Item, Job};
use crate::RunError;

pub struct NamedCategory {
    pub name: String,
    pub kind: &'static str,
    pub cat: Arc<FinCat>,
}

pub struct NamedFunctor {
    pub name: String,
    pub category: String,
    pub kind: &'static str,
    pub d: SetFunctorPQ,
}

pub struct NamedMonoidal {
    pub name: String,
    pub category: String,
    pub m: MonoidalFinCat,
}

pub struct Resolved {
    pub categories: Vec<NamedCategory>,
    pub functors: Vec<NamedFunctor>,
    pub monoidals: Vec<NamedMonoidal>,
    pub jobs: Vec<Job>,
}

impl Resolved {
    pub fn category(&self, name: &str) -> Option<&NamedCategory> {
        self.categories.iter().find(|c| c.name == name)
    }

    pub fn functor(&self, name: &str) -> Option<&NamedFunctor> {
        self.functors.iter().find(|f| f.name == name)
    }

    pub fn monoidal(&self, name: &str) -> Option<&NamedMonoidal> {
        self.monoidals.iter().find(|m| m.name == name)
    }

    pub fn describe(&self, f: &NamedFunctor) -> String {
        format!("{} on {}, signature {}", f.kind, f.category, f.d.sig())
    }
}

fn unresolved(ident: &str, what: &str) -> RunError {
    RunError::Resolve {
        ident: ident.to_string(),
        msg: format!("no {what} named `{ident}`"),
    }
}

fn bad(ident: &str, msg: impl Into<String>) -> RunError {
    RunError::Resolve {
        ident: ident.to_string(),
        msg: msg.into(),
    }
}

/// Validates every declaration and checks every job reference, in declaration order.
pub fn resolve(spec: &CatSpec, skip_assoc: bool, lim: &Limits) -> Result<Resolved, RunError> {
    let mut r = Resolved {
        categories: Vec::new(),
        functors: Vec::new(),
        monoidals: Vec::new(),
        jobs: Vec::new(),
    };
    let mut names: HashMap<String, &str> = HashMap::new();
    let mut claim = |name: &'static str, ident: &str| -> Result<(), RunError> {
        match names.insert(ident.to_string(), name) {
            Some(prev) => Err(bad(
                ident,
                format!("`{ident}` is already declared as a {prev}"),
            )),
            None => Ok(()),
        }
    };
    for item in &spec.items {
        match item {
            Item::Category(d) => {
                claim("category", &d.name)?;
                let (kind, cat) = category(&d.name, &d.body, skip_assoc, lim)?;
                r.categories.push(NamedCategory {
                    name: d.name.clone(),
                    kind,
                    cat: Arc::new(cat),
                });
            }
            Item::Functor(d) => {
                claim("functor", &d.name)?;
                let c = r
                    .category(&d.category)
                    .ok_or_else(|| unresolved(&d.category, "category"))?;
                let (kind, f) = functor(d, &c.cat, lim)?;
                r.functors.push(NamedFunctor {
                    name: d.name.clone(),
                    category: d.category.clone(),
                    kind,
                    d: f,
                });
            }
            Item::Monoidal(d) => {
                claim("monoidal structure", &d.name)?;
                let c = r
                    .category(&d.category)
                    .ok_or_else(|| unresolved(&d.category, "category"))?;
                let m = MonoidalFinCat::commutative_monoid(&c.cat, lim)?;
                r.monoidals.push(NamedMonoidal {
                    name: d.name.clone(),
                    category: d.category.clone(),
                    m,
                });
            }
            Item::Job(j) => {
                check_job(&r, j)?;
                r.jobs.push(j.clone());
            }
        }
    }
    Ok(r)
}

fn check_job(r: &Resolved, j: &Job) -> Result<(), RunError> {
    let f = |n: &str| {
        r.functor(n)
            .map(|_| ())
            .ok_or_else(|| unresolved(n, "functor"))
    };
    match j {
        Job::End { functor, .. } | Job::Coend { functor, .. } => f(functor),
        Job::Dinat { source, target } | Job::Kusarigama { source, target } => {
            f(source)?;
            f(target)
        }
        Job::Fubini { left, right } => {
            f(left)?;
            f(right)
        }
        Job::Day { monoidal, functors } => {
            r.monoidal(monoidal)
                .ok_or_else(|| unresolved(monoidal, "monoidal structure"))?;
            functors.iter().try_for_each(|n| f(n))
        }
        Job::CheckAll => Ok(()),
    }
}

fn category(
    name: &str,
    body: &CategoryBody,
    skip_assoc: bool,
    lim: &Limits,
) -> Result<(&'static str, FinCat), RunError> {
    Ok(match body {
        CategoryBody::Poset { elements, le } => ("poset", poset(name, elements, le)?),
        CategoryBody::Monoid {
            elements,
            unit,
            rows,
        } => {
            let ix = |x: &str| {
                elements
                    .iter()
                    .position(|e| e == x)
                    .ok_or_else(|| bad(x, format!("`{x}` is not an element of {name}")))
            };
            let mut table = vec![None; elements.len()];
            for (x, row) in rows {
                let i = ix(x)?;
                if table[i].is_some() {
                    return Err(bad(x, format!("two rows for `{x}` in {name}")));
                }
                table[i] = Some(row.iter().map(|y| ix(y)).collect::<Result<Vec<_>, _>>()?);
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    r.ok_or_else(|| {
                        bad(
                            &elements[i],
                            format!("no row for `{}` in {name}", elements[i]),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            ("monoid", monoid(name, elements, ix(unit)?, &table)?)
        }
        CategoryBody::Graph { objects, edges } => {
            ("graph", acyclic_graph(name, objects, edges, lim)?)
        }
        CategoryBody::Explicit {
            objects,
            morphisms,
            identities,
            compositions,
        } => {
            let mut raw = RawCategory {
                name: name.to_string(),
                objects: objects.clone(),
                morphisms: morphisms.clone(),
                identities: identities.clone(),
                compositions: compositions.clone(),
            };
            for o in objects {
                if !identities.iter().any(|(x, _)| x == o) {
                    let id = format!("id_{o}");
                    raw.morphisms.push((id.clone(), o.clone(), o.clone()));
                    raw.identities.push((o.clone(), id));
                }
            }
            let opts = ValidateOpts { skip_assoc };
            ("explicit", validate_category(&raw, opts)?)
        }
    })
}

fn functor(
    d: &FunctorDecl,
    c: &Arc<FinCat>,
    lim: &Limits,
) -> Result<(&'static str, SetFunctorPQ), RunError> {
    let atoms = |xs: &[String]| {
        FinSet::atoms(xs).map_err(|_| bad(&d.name, format!("repeated element label in {}", d.name)))
    };
    Ok(match &d.body {
        FunctorBody::Hom => ("hom", SetFunctorPQ::hom(c, lim)?),
        FunctorBody::Point(s) => ("point", SetFunctorPQ::point(c, *s, lim)?),
        FunctorBody::HomPi(s) => ("hompi", hom_pi(c, *s, lim)?),
        FunctorBody::ProductHom(s) => {
            if s.q != 1 {
                return Err(bad(&d.name, "producthom needs signature (p,1)"));
            }
            ("producthom", product_hom(c, s.p, lim)?)
        }
        FunctorBody::Constant(s, xs) => {
            ("constant", SetFunctorPQ::constant(c, *s, &atoms(xs)?, lim)?)
        }
        FunctorBody::Table {
            sig,
            fibers,
            actions,
        } => {
            let power = hace::fincat::power_pq(c, *sig, lim)?;
            let obj = |o: &str| {
                c.find_object(o)
                    .ok_or_else(|| unresolved(o, &format!("object of {}", c.name())))
            };
            let tuple = |t: &[String]| t.iter().map(|o| obj(o)).collect::<Result<Vec<_>, _>>();
            let mut sets: Vec<Option<FinSet>> = vec![None; power.n_objects()];
            for (t, xs) in fibers {
                let o = power.encode_obj(&tuple(t)?);
                if sets[o].is_some() {
                    return Err(bad(
                        &d.name,
                        format!("two fibers at ({}) in {}", t.join(" "), d.name),
                    ));
                }
                sets[o] = Some(atoms(xs)?);
            }
            let sets = sets
                .into_iter()
                .enumerate()
                .map(|(o, s)| {
                    s.ok_or_else(|| {
                        let t: Vec<&str> = power
                            .decode_obj(o)
                            .iter()
                            .map(|&a| c.object_name(a))
                            .collect();
                        bad(
                            &d.name,
                            format!("no fiber at ({}) in {}", t.join(" "), d.name),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut slot_actions = Vec::new();
            for a in actions {
                let m = c
                    .find_morphism(&a.mor)
                    .ok_or_else(|| unresolved(&a.mor, &format!("morphism of {}", c.name())))?;
                let mut ctx = Vec::with_capacity(a.context.len());
                for o in &a.context {
                    ctx.push(match o {
                        Some(o) => obj(o)?,
                        None => 0,
                    });
                }
                let contra = sig.is_contra(a.slot);
                let mut src = ctx.clone();
                src[a.slot] = if contra { c.dst(m) } else { c.src(m) };
                let mut tgt = ctx.clone();
                tgt[a.slot] = if contra { c.src(m) } else { c.dst(m) };
                let (s, t) = (&sets[power.encode_obj(&src)], &sets[power.encode_obj(&tgt)]);
                if a.images.len() != s.len() {
                    return Err(bad(
                        &a.mor,
                        format!(
                            "action of {} in slot {} lists {} images for {} elements",
                            a.mor,
                            a.slot,
                            a.images.len(),
                            s.len()
                        ),
                    ));
                }
                let table = a
                    .images
                    .iter()
                    .map(|y| {
                        t.find(&hace::Label::atom(y.as_str())).ok_or_else(|| {
                            bad(
                                y,
                                format!(
                                    "`{y}` is not in the target fiber of {} in slot {}",
                                    a.mor, a.slot
                                ),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                slot_actions.push(SlotAction {
                    slot: a.slot,
                    mor: m,
                    context: ctx,
                    table,
                });
            }
            (
                "table",
                functor_from_slots(c, *sig, sets, &slot_actions, lim)?,
            )
        }
    })
}

/// Greatest lower bound in a thin category (the top element for an empty list).
pub fn meet(c: &FinCat, xs: &[usize]) -> Option<usize> {
    let le = |a: usize, b: usize| c.hom_len(a, b) > 0;
    let lower: Vec<usize> = (0..c.n_objects())
        .filter(|&m| xs.iter().all(|&x| le(m, x)))
        .collect();
    lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&l| le(l, m)))
}

/// `hom(A_1 × … × A_p, B)` on a thin category with finite products, i.e. finite meets.
pub fn product_hom(c: &Arc<FinCat>, p: usize, lim: &Limits) -> hace::Result<SetFunctorPQ> {
    if !c.is_thin() {
        return Err(hace::Error::ShapeMismatch(format!(
            "{} is not thin",
            c.name()
        )));
    }
    let n = c.n_objects();
    let mut meets = Vec::new();
    for i in 0..n.pow(p as u32) {
        let xs = hace::decode(i, &vec![n; p]);
        meets.push(meet(c, &xs).ok_or_else(|| {
            hace::Error::ShapeMismatch(format!("{} lacks a meet of {xs:?}", c.name()))
        })?);
    }
    let cc = c.clone();
    SetFunctorPQ::from_fn(
        c,
        hace::Sig::new(p, 1),
        move |t| {
            let m = meets[hace::encode(&t[..p], &vec![n; p])];
            if cc.hom_len(m, t[p]) > 0 {
                FinSet::point()
            } else {
                FinSet::empty()
            }
        },
        |_, _| 0,
        lim,
    )
}
