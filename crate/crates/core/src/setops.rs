//! Finite sets and functions, union-find, and (co)limits of finite diagrams in Set.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::functor::{enumerate_nat, SetFunctor};
use crate::search;
use crate::Limits;

/// Element label: atoms, tuples of labels, or the class of a representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    Tuple(Vec<Label>),
    Class(Box<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Label {
        Label::Atom(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Tuple(vec![a, b])
    }

    pub fn class(rep: Label) -> Label {
        Label::Class(Box::new(rep))
    }

    pub fn components(&self) -> Option<&[Label]> {
        match self {
            Label::Tuple(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => f.write_str(s),
            Label::Tuple(v) => {
                f.write_str("(")?;
                for (i, l) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str(")")
            }
            Label::Class(r) => write!(f, "⟦{r}⟧"),
        }
    }
}

struct SetInner {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

/// A finite set with a fixed (canonical) element order. Cheap to clone.
#[derive(Clone)]
pub struct FinSet(Arc<SetInner>);

impl FinSet {
    /// Builds a set, rejecting duplicate labels.
    pub fn new(labels: Vec<Label>) -> Result<FinSet> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::ShapeMismatch(format!("duplicate element {l}")));
            }
        }
        Ok(FinSet(Arc::new(SetInner { labels, index })))
    }

    /// Builds a set from labels known to be distinct.
    pub fn from_distinct(labels: Vec<Label>) -> FinSet {
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        FinSet(Arc::new(SetInner { labels, index }))
    }

    pub fn empty() -> FinSet {
        FinSet::from_distinct(Vec::new())
    }

    /// The one-point set `{*}`.
    pub fn point() -> FinSet {
        FinSet::from_distinct(vec![Label::atom("*")])
    }

    pub fn atoms<S: AsRef<str>>(names: &[S]) -> Result<FinSet> {
        FinSet::new(names.iter().map(|s| Label::atom(s.as_ref())).collect())
    }

    /// `{0, 1, ..., n-1}` as atoms.
    pub fn range(n: usize) -> FinSet {
        FinSet::from_distinct((0..n).map(|i| Label::atom(i.to_string())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.0.labels
    }

    pub fn find(&self, l: &Label) -> Option<usize> {
        self.0.index.get(l).copied()
    }

    pub fn ptr_eq(&self, other: &FinSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &FinSet) -> bool {
        self.ptr_eq(other) || self.0.labels == other.0.labels
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.labels().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A total function between finite sets, stored as an index table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    pub dom: FinSet,
    pub cod: FinSet,
    pub table: Vec<usize>,
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", self.dom.label(i), self.cod.label(j))?;
        }
        f.write_str("]")
    }
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<FinFn> {
        if table.len() != dom.len() || table.iter().any(|&j| j >= cod.len()) {
            return Err(Error::ShapeMismatch(
                "function table does not fit dom/cod".into(),
            ));
        }
        Ok(FinFn { dom, cod, table })
    }

    pub fn identity(s: &FinSet) -> FinFn {
        FinFn {
            dom: s.clone(),
            cod: s.clone(),
            table: (0..s.len()).collect(),
        }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> FinFn {
        FinFn {
            dom: dom.clone(),
            cod: cod.clone(),
            table: vec![value; dom.len()],
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn after(&self, other: &FinFn) -> FinFn {
        FinFn {
            dom: other.dom.clone(),
            cod: self.cod.clone(),
            table: other.table.iter().map(|&x| self.table[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &j in &self.table {
            seen[j] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// The label of this function as an element of `hom_set(dom, cod)`.
    pub fn as_label(&self) -> Label {
        Label::Tuple(
            self.table
                .iter()
                .map(|&j| self.cod.label(j).clone())
                .collect(),
        )
    }
}

/// Union-find over `0..n` with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    /// Class index of every element, classes numbered by their least member.
    pub fn canonical_classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut class = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = reps.len();
                reps.push(x);
            }
            class[x] = class_of_root[r];
        }
        (class, reps)
    }
}

/// Carrier of an end or equalizer: admitted elements with their inclusion legs.
#[derive(Clone, Debug)]
pub struct SubResult {
    pub carrier: FinSet,
    pub legs: Vec<FinFn>,
}

/// Carrier of a coend or coequalizer: canonical classes with the projection legs.
#[derive(Clone, Debug)]
pub struct QuotResult {
    pub carrier: FinSet,
    pub legs: Vec<FinFn>,
    /// For each class, the least member as (leg index, element index).
    pub reps: Vec<(usize, usize)>,
}

pub(crate) fn check_cap(what: &str, size: u128, lim: &Limits) -> Result<()> {
    if size > lim.cap as u128 {
        return Err(Error::SizeCapExceeded {
            what: what.to_string(),
            size,
            cap: lim.cap,
        });
    }
    Ok(())
}

/// `{x : f(x) = g(x)}` with its inclusion into `dom`.
pub fn equalizer(f: &FinFn, g: &FinFn) -> Result<SubResult> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::ShapeMismatch(
            "equalizer of non-parallel maps".into(),
        ));
    }
    let keep: Vec<usize> = (0..f.dom.len())
        .filter(|&x| f.apply(x) == g.apply(x))
        .collect();
    let carrier = FinSet::from_distinct(keep.iter().map(|&x| f.dom.label(x).clone()).collect());
    let leg = FinFn {
        dom: carrier.clone(),
        cod: f.dom.clone(),
        table: keep,
    };
    Ok(SubResult {
        carrier,
        legs: vec![leg],
    })
}

/// `cod / (f(x) ~ g(x))` with its projection.
pub fn coequalizer(f: &FinFn, g: &FinFn) -> Result<QuotResult> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::ShapeMismatch(
            "coequalizer of non-parallel maps".into(),
        ));
    }
    let mut uf = UnionFind::new(f.cod.len());
    for x in 0..f.dom.len() {
        uf.union(f.apply(x), g.apply(x));
    }
    let (class, reps) = uf.canonical_classes();
    let carrier = FinSet::from_distinct(
        reps.iter()
            .map(|&r| Label::class(f.cod.label(r).clone()))
            .collect(),
    );
    let leg = FinFn {
        dom: f.cod.clone(),
        cod: carrier.clone(),
        table: class,
    };
    Ok(QuotResult {
        carrier,
        legs: vec![leg],
        reps: reps.into_iter().map(|r| (0, r)).collect(),
    })
}

/// Number of functions `a -> b`, saturating.
pub fn fn_count(a: usize, b: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..a {
        acc = acc.saturating_mul(b as u128);
        if acc == 0 {
            break;
        }
    }
    acc
}

/// Decodes the `idx`-th function `a -> b` (lexicographic, first argument most significant).
pub fn decode_fn(mut idx: usize, a: usize, b: usize) -> Vec<usize> {
    let mut t = vec![0; a];
    for slot in t.iter_mut().rev() {
        *slot = idx % b;
        idx /= b;
    }
    t
}

pub fn encode_fn(table: &[usize], b: usize) -> usize {
    table.iter().fold(0, |acc, &x| acc * b + x)
}

/// All functions `x -> y` in lexicographic order of their tables.
pub fn hom_set(x: &FinSet, y: &FinSet, lim: &Limits) -> Result<FinSet> {
    let n = fn_count(x.len(), y.len());
    check_cap("hom_set", n, lim)?;
    let labels = (0..n as usize)
        .map(|i| {
            Label::Tuple(
                decode_fn(i, x.len(), y.len())
                    .into_iter()
                    .map(|j| y.label(j).clone())
                    .collect(),
            )
        })
        .collect();
    Ok(FinSet::from_distinct(labels))
}

/// Cartesian product in lexicographic order.
pub fn product(factors: &[FinSet], lim: &Limits) -> Result<FinSet> {
    let size = factors
        .iter()
        .fold(1u128, |a, f| a.saturating_mul(f.len() as u128));
    check_cap("product", size, lim)?;
    let radices: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut labels = Vec::with_capacity(size as usize);
    let mut digits = vec![0; factors.len()];
    for i in 0..size as usize {
        crate::decode_into(i, &radices, &mut digits);
        labels.push(Label::Tuple(
            digits
                .iter()
                .zip(factors)
                .map(|(&d, f)| f.label(d).clone())
                .collect(),
        ));
    }
    Ok(FinSet::from_distinct(labels))
}

/// `S ⊙ X = S × X`.
pub fn copower(s: &FinSet, x: &FinSet, lim: &Limits) -> Result<FinSet> {
    product(&[s.clone(), x.clone()], lim)
}

/// `S ⋔ X = X^S`.
pub fn power(s: &FinSet, x: &FinSet, lim: &Limits) -> Result<FinSet> {
    hom_set(s, x, lim)
}

/// Limit of a Set-valued functor: the compatible families, labeled by object-indexed tuples.
pub fn limit(d: &SetFunctor, lim: &Limits) -> Result<SubResult> {
    let cat = d.domain();
    let n = cat.n_objects();
    let mut sys = search::EqSystem::new((0..n).map(|o| d.fiber(o).len()).collect());
    let ids: Vec<usize> = (0..n).map(|o| sys.identity_map(d.fiber(o).len())).collect();
    // Each non-identity u: i -> j says D(u)(x_i) = x_j.
    for u in 0..cat.n_morphisms() {
        if cat.is_identity(u) {
            continue;
        }
        let m = sys.add_map(d.map(u).table.clone());
        sys.require(cat.src(u), m, cat.dst(u), ids[cat.dst(u)]);
    }
    let sols = sys.solve(lim, "limit")?;
    Ok(families_to_sub(
        &sols,
        &(0..n).map(|o| d.fiber(o).clone()).collect::<Vec<_>>(),
    ))
}

pub(crate) fn families_to_sub(sols: &[Vec<usize>], fibers: &[FinSet]) -> SubResult {
    let carrier = FinSet::from_distinct(
        sols.iter()
            .map(|s| {
                Label::Tuple(
                    s.iter()
                        .zip(fibers)
                        .map(|(&x, f)| f.label(x).clone())
                        .collect(),
                )
            })
            .collect(),
    );
    let legs = fibers
        .iter()
        .enumerate()
        .map(|(o, f)| FinFn {
            dom: carrier.clone(),
            cod: f.clone(),
            table: sols.iter().map(|s| s[o]).collect(),
        })
        .collect();
    SubResult { carrier, legs }
}

/// Quotient of a disjoint union of `fibers` by the identifications in `uf`;
/// each element of summand `k` is labeled `(tag_k, x)`.
pub(crate) fn quotient_of_sum(fibers: &[FinSet], tags: &[Label], uf: &mut UnionFind) -> QuotResult {
    let offsets = offsets(fibers);
    let (class, reps) = uf.canonical_classes();
    let locate = |g: usize| -> (usize, usize) {
        let k = offsets.partition_point(|&o| o <= g) - 1;
        (k, g - offsets[k])
    };
    let reps: Vec<(usize, usize)> = reps.into_iter().map(locate).collect();
    let carrier = FinSet::from_distinct(
        reps.iter()
            .map(|&(k, x)| Label::class(Label::pair(tags[k].clone(), fibers[k].label(x).clone())))
            .collect(),
    );
    let legs = fibers
        .iter()
        .enumerate()
        .map(|(k, f)| FinFn {
            dom: f.clone(),
            cod: carrier.clone(),
            table: (0..f.len()).map(|x| class[offsets[k] + x]).collect(),
        })
        .collect();
    QuotResult {
        carrier,
        legs,
        reps,
    }
}

pub(crate) fn offsets(fibers: &[FinSet]) -> Vec<usize> {
    let mut off = Vec::with_capacity(fibers.len() + 1);
    let mut acc = 0;
    for f in fibers {
        off.push(acc);
        acc += f.len();
    }
    off.push(acc);
    off
}

fn object_tags(cat: &FinCat) -> Vec<Label> {
    (0..cat.n_objects())
        .map(|o| Label::atom(cat.object_name(o)))
        .collect()
}

/// Colimit of a Set-valued functor: classes of `(object, element)` pairs.
pub fn colimit(d: &SetFunctor, lim: &Limits) -> Result<QuotResult> {
    let cat = d.domain();
    let fibers: Vec<FinSet> = (0..cat.n_objects()).map(|o| d.fiber(o).clone()).collect();
    let off = offsets(&fibers);
    check_cap("colimit", off[fibers.len()] as u128, lim)?;
    let mut uf = UnionFind::new(off[fibers.len()]);
    for u in 0..cat.n_morphisms() {
        if cat.is_identity(u) {
            continue;
        }
        let (i, j) = (cat.src(u), cat.dst(u));
        for x in 0..fibers[i].len() {
            uf.union(off[i] + x, off[j] + d.map(u).apply(x));
        }
    }
    Ok(quotient_of_sum(&fibers, &object_tags(cat), &mut uf))
}

/// `lim^W D`, realized as the natural transformations `W ⇒ D`; leg `j` sends a
/// transformation to its component at `j`.
pub fn weighted_limit(w: &SetFunctor, d: &SetFunctor, lim: &Limits) -> Result<SubResult> {
    let nats = enumerate_nat(w, d, lim)?;
    let carrier = FinSet::from_distinct(
        nats.iter()
            .map(|a| Label::Tuple(a.components.iter().map(|c| c.as_label()).collect()))
            .collect(),
    );
    let mut legs = Vec::with_capacity(w.domain().n_objects());
    for j in 0..w.domain().n_objects() {
        let cod = hom_set(w.fiber(j), d.fiber(j), lim)?;
        let b = d.fiber(j).len();
        let table = nats
            .iter()
            .map(|a| encode_fn(&a.components[j].table, b))
            .collect();
        legs.push(FinFn {
            dom: carrier.clone(),
            cod,
            table,
        });
    }
    Ok(SubResult { carrier, legs })
}

/// `colim^W D = ∐_j W(j) × D(j) / ~` for `W` a functor on the opposite of `D`'s domain.
///
/// Each class is labeled by its least member `(j, (w, x))`.
pub fn weighted_colimit(w: &SetFunctor, d: &SetFunctor, lim: &Limits) -> Result<QuotResult> {
    let cat = d.domain();
    let wcat = w.domain();
    if wcat.n_objects() != cat.n_objects() || wcat.n_morphisms() != cat.n_morphisms() {
        return Err(Error::ShapeMismatch(
            "weight is not on the opposite category".into(),
        ));
    }
    let n = cat.n_objects();
    let mut fibers = Vec::with_capacity(n);
    for j in 0..n {
        fibers.push(product(&[w.fiber(j).clone(), d.fiber(j).clone()], lim)?);
    }
    let off = offsets(&fibers);
    check_cap("weighted colimit", off[n] as u128, lim)?;
    let mut uf = UnionFind::new(off[n]);
    for m in 0..cat.n_morphisms() {
        if cat.is_identity(m) {
            continue;
        }
        let (j, k) = (cat.src(m), cat.dst(m));
        if wcat.src(m) != k || wcat.dst(m) != j {
            return Err(Error::ShapeMismatch(
                "weight is not on the opposite category".into(),
            ));
        }
        // (j, W(m)w', x) ~ (k, w', D(m)x) for w' ∈ W(k), x ∈ D(j).
        let (wk, dj) = (w.fiber(k).len(), d.fiber(j).len());
        let dk = d.fiber(k).len();
        for wp in 0..wk {
            let wj = w.map(m).apply(wp);
            for x in 0..dj {
                let a = off[j] + wj * dj + x;
                let b = off[k] + wp * dk + d.map(m).apply(x);
                uf.union(a, b);
            }
        }
    }
    Ok(quotient_of_sum(&fibers, &object_tags(cat), &mut uf))
}
