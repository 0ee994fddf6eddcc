//! Finite categories given by explicit tables, their products and opposites, and functors
//! between them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::setops::check_cap;
use crate::Limits;

pub type Obj = usize;
pub type Mor = usize;

/// Variance signature: `p` contravariant slots followed by `q` covariant ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sig {
    pub p: usize,
    pub q: usize,
}

impl Sig {
    pub const fn new(p: usize, q: usize) -> Sig {
        Sig { p, q }
    }

    pub fn arity(self) -> usize {
        self.p + self.q
    }

    /// `(q, p)`.
    pub fn dual(self) -> Sig {
        Sig {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_contra(self, slot: usize) -> bool {
        slot < self.p
    }
}

impl fmt::Display for Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorData {
    pub name: String,
    pub src: Obj,
    pub dst: Obj,
}

/// One factor of a product category, possibly taken opposite.
#[derive(Clone)]
pub struct Factor {
    pub cat: Arc<FinCat>,
    pub op: bool,
}

#[derive(Clone)]
enum Law {
    /// `comp[f][out_pos[g]] = g ∘ f`.
    Table(Vec<Vec<Mor>>),
    /// Componentwise composition; indices are mixed-radix, first factor most significant.
    Product {
        factors: Vec<Factor>,
        obj_stride: Vec<usize>,
        mor_stride: Vec<usize>,
    },
}

/// A finite category.
#[derive(Clone)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<MorData>,
    identities: Vec<Mor>,
    out: Vec<Vec<Mor>>,
    inc: Vec<Vec<Mor>>,
    out_pos: Vec<usize>,
    hom_pos: Vec<usize>,
    is_id: Vec<bool>,
    law: Law,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} morphisms)",
            self.name,
            self.n_objects(),
            self.n_morphisms()
        )
    }
}

fn strides(radices: &[usize]) -> Vec<usize> {
    let mut s = vec![1; radices.len()];
    for k in (0..radices.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * radices[k + 1];
    }
    s
}

fn tuple_name<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    let v: Vec<&str> = parts.collect();
    format!("({})", v.join(","))
}

impl FinCat {
    fn assemble(
        name: String,
        objects: Vec<String>,
        morphisms: Vec<MorData>,
        identities: Vec<Mor>,
        law: Law,
    ) -> FinCat {
        let n = objects.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut out_pos = vec![0; morphisms.len()];
        let mut hom_pos = vec![0; morphisms.len()];
        let mut is_id = vec![false; morphisms.len()];
        for &i in &identities {
            is_id[i] = true;
        }
        for (m, d) in morphisms.iter().enumerate() {
            out_pos[m] = out[d.src].len();
            out[d.src].push(m);
            inc[d.dst].push(m);
        }
        let mut count: HashMap<Obj, usize> = HashMap::new();
        for list in &out {
            count.clear();
            for &m in list {
                let c = count.entry(morphisms[m].dst).or_insert(0);
                hom_pos[m] = *c;
                *c += 1;
            }
        }
        FinCat {
            name,
            objects,
            morphisms,
            identities,
            out,
            inc,
            out_pos,
            hom_pos,
            is_id,
            law,
        }
    }

    /// Builds a table-law category from a composition function, without checking laws.
    pub fn from_fn(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<MorData>,
        identities: Vec<Mor>,
        compose: impl Fn(Mor, Mor) -> Mor,
    ) -> FinCat {
        let mut c = FinCat::assemble(
            name.into(),
            objects,
            morphisms,
            identities,
            Law::Table(Vec::new()),
        );
        let comp = (0..c.morphisms.len())
            .map(|f| {
                c.out[c.morphisms[f].dst]
                    .iter()
                    .map(|&g| compose(g, f))
                    .collect()
            })
            .collect();
        c.law = Law::Table(comp);
        c
    }

    /// The one-object, one-morphism category.
    pub fn terminal() -> FinCat {
        FinCat::from_fn(
            "pt",
            vec!["*".into()],
            vec![MorData {
                name: "id_*".into(),
                src: 0,
                dst: 0,
            }],
            vec![0],
            |_, _| 0,
        )
    }

    /// Product of the given factors (each possibly opposite).
    pub fn product(factors: Vec<Factor>, lim: &Limits) -> Result<FinCat> {
        let obj_radix: Vec<usize> = factors.iter().map(|f| f.cat.n_objects()).collect();
        let mor_radix: Vec<usize> = factors.iter().map(|f| f.cat.n_morphisms()).collect();
        let n_obj = obj_radix
            .iter()
            .fold(1u128, |a, &r| a.saturating_mul(r as u128));
        let n_mor = mor_radix
            .iter()
            .fold(1u128, |a, &r| a.saturating_mul(r as u128));
        check_cap("product category", n_mor.max(n_obj), lim)?;
        let (n_obj, n_mor) = (n_obj as usize, n_mor as usize);
        let obj_stride = strides(&obj_radix);
        let mor_stride = strides(&mor_radix);
        let k = factors.len();
        let mut digits = vec![0; k];
        let mut objects = Vec::with_capacity(n_obj);
        for o in 0..n_obj {
            crate::decode_into(o, &obj_radix, &mut digits);
            objects.push(tuple_name(
                (0..k).map(|i| factors[i].cat.object_name(digits[i])),
            ));
        }
        let mut morphisms = Vec::with_capacity(n_mor);
        for m in 0..n_mor {
            crate::decode_into(m, &mor_radix, &mut digits);
            let (mut src, mut dst) = (0, 0);
            for i in 0..k {
                let c = &factors[i].cat;
                let (s, d) = (c.src(digits[i]), c.dst(digits[i]));
                let (s, d) = if factors[i].op { (d, s) } else { (s, d) };
                src += s * obj_stride[i];
                dst += d * obj_stride[i];
            }
            let name = tuple_name((0..k).map(|i| factors[i].cat.mor_name(digits[i])));
            morphisms.push(MorData { name, src, dst });
        }
        let identities = (0..n_obj)
            .map(|o| {
                crate::decode_into(o, &obj_radix, &mut digits);
                (0..k)
                    .map(|i| factors[i].cat.identity(digits[i]) * mor_stride[i])
                    .sum()
            })
            .collect();
        let name = tuple_name(factors.iter().map(|f| f.cat.name())).replace(",", " x ");
        let law = Law::Product {
            factors,
            obj_stride,
            mor_stride,
        };
        Ok(FinCat::assemble(name, objects, morphisms, identities, law))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FinCat {
        self.name = name.into();
        self
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.morphisms[m].name
    }

    pub fn morphisms(&self) -> &[MorData] {
        &self.morphisms
    }

    #[inline]
    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m].src
    }

    #[inline]
    pub fn dst(&self, m: Mor) -> Obj {
        self.morphisms[m].dst
    }

    #[inline]
    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o]
    }

    #[inline]
    pub fn is_identity(&self, m: Mor) -> bool {
        self.is_id[m]
    }

    /// Morphisms out of `o`, in morphism order.
    pub fn out(&self, o: Obj) -> &[Mor] {
        &self.out[o]
    }

    /// Morphisms into `o`, in morphism order.
    pub fn inc(&self, o: Obj) -> &[Mor] {
        &self.inc[o]
    }

    /// `hom(a, b)` in morphism order.
    pub fn hom(&self, a: Obj, b: Obj) -> Vec<Mor> {
        self.out[a]
            .iter()
            .copied()
            .filter(|&m| self.dst(m) == b)
            .collect()
    }

    pub fn hom_len(&self, a: Obj, b: Obj) -> usize {
        self.out[a].iter().filter(|&&m| self.dst(m) == b).count()
    }

    /// Position of `m` inside `hom(src m, dst m)`.
    #[inline]
    pub fn hom_pos(&self, m: Mor) -> usize {
        self.hom_pos[m]
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// `g ∘ f`; panics unless `dst f = src g`.
    #[inline]
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        debug_assert_eq!(
            self.src(g),
            self.dst(f),
            "non-composable pair in {}",
            self.name
        );
        match &self.law {
            Law::Table(comp) => comp[f][self.out_pos[g]],
            Law::Product {
                factors,
                mor_stride,
                ..
            } => {
                let mut idx = 0;
                for (i, fac) in factors.iter().enumerate() {
                    let r = fac.cat.n_morphisms();
                    let fi = (f / mor_stride[i]) % r;
                    let gi = (g / mor_stride[i]) % r;
                    let c = if fac.op {
                        fac.cat.compose(fi, gi)
                    } else {
                        fac.cat.compose(gi, fi)
                    };
                    idx += c * mor_stride[i];
                }
                idx
            }
        }
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.src(g) == self.dst(f)).then(|| self.compose(g, f))
    }

    /// Factors when this is a product category.
    pub fn factors(&self) -> Option<&[Factor]> {
        match &self.law {
            Law::Product { factors, .. } => Some(factors),
            Law::Table(_) => None,
        }
    }

    fn strides_or_panic(&self) -> (&[Factor], &[usize], &[usize]) {
        match &self.law {
            Law::Product {
                factors,
                obj_stride,
                mor_stride,
            } => (factors, obj_stride, mor_stride),
            Law::Table(_) => panic!("{} is not a product category", self.name),
        }
    }

    /// Object index of a tuple of factor objects.
    pub fn encode_obj(&self, parts: &[Obj]) -> Obj {
        let (_, s, _) = self.strides_or_panic();
        parts.iter().zip(s).map(|(&x, &st)| x * st).sum()
    }

    pub fn encode_mor(&self, parts: &[Mor]) -> Mor {
        let (_, _, s) = self.strides_or_panic();
        parts.iter().zip(s).map(|(&x, &st)| x * st).sum()
    }

    pub fn decode_obj(&self, o: Obj) -> Vec<Obj> {
        let (f, s, _) = self.strides_or_panic();
        f.iter()
            .zip(s)
            .map(|(fac, &st)| (o / st) % fac.cat.n_objects())
            .collect()
    }

    pub fn decode_mor(&self, m: Mor) -> Vec<Mor> {
        let (f, _, s) = self.strides_or_panic();
        f.iter()
            .zip(s)
            .map(|(fac, &st)| (m / st) % fac.cat.n_morphisms())
            .collect()
    }

    /// All composable pairs `(g, f)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Mor, Mor)> + '_ {
        (0..self.n_morphisms())
            .flat_map(move |f| self.out[self.dst(f)].iter().map(move |&g| (g, f)))
    }

    /// Checks the category laws; returns every violation found.
    pub fn check_laws(&self, skip_assoc: bool) -> Vec<Violation> {
        let mut v = Vec::new();
        for (m, d) in self.morphisms.iter().enumerate() {
            let (ia, ib) = (self.identity(d.src), self.identity(d.dst));
            if self.compose(ib, m) != m {
                v.push(Violation::MissingIdentity {
                    object: self.objects[d.dst].clone(),
                    morphism: Some(d.name.clone()),
                });
            } else if self.compose(m, ia) != m {
                v.push(Violation::MissingIdentity {
                    object: self.objects[d.src].clone(),
                    morphism: Some(d.name.clone()),
                });
            }
        }
        for (g, f) in self.composable_pairs() {
            let h = self.compose(g, f);
            if self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
                v.push(Violation::IllTypedComposite {
                    g: self.mor_name(g).into(),
                    f: self.mor_name(f).into(),
                });
            }
        }
        if !v.is_empty() || skip_assoc {
            return v;
        }
        for (g, f) in self.composable_pairs() {
            let gf = self.compose(g, f);
            for &h in &self.out[self.dst(g)] {
                if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                    v.push(Violation::NonAssociative {
                        h: self.mor_name(h).into(),
                        g: self.mor_name(g).into(),
                        f: self.mor_name(f).into(),
                    });
                }
            }
        }
        v
    }

    /// Same objects, morphisms, identities and composition.
    pub fn same_tables(&self, other: &FinCat) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self
                .composable_pairs()
                .all(|(g, f)| self.compose(g, f) == other.compose(g, f))
    }

    /// Whether `hom(a, b)` has at most one element for all `a, b`.
    pub fn is_thin(&self) -> bool {
        self.hom_pos.iter().all(|&p| p == 0)
    }
}

/// Raw tables as they come from a parser; validated by [`validate_category`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub name: String,
    pub objects: Vec<String>,
    /// `(name, source, target)`.
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, identity morphism)`.
    pub identities: Vec<(String, String)>,
    /// `(g, f, h)` meaning `g ∘ f = h`. Composites with identities may be omitted.
    pub compositions: Vec<(String, String, String)>,
}

/// Validation switches.
#[derive(Clone, Copy, Debug, Default)]
pub struct ValidateOpts {
    pub skip_assoc: bool,
}

/// Checks raw tables and builds the category, or lists every violated law.
pub fn validate_category(raw: &RawCategory, opts: ValidateOpts) -> Result<FinCat> {
    let mut v = Vec::new();
    let mut obj_ix: HashMap<&str, Obj> = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_ix.insert(o.as_str(), i).is_some() {
            v.push(Violation::Duplicate(o.clone()));
        }
    }
    let mut mor_ix: HashMap<&str, Mor> = HashMap::new();
    let mut morphisms = Vec::new();
    for (name, s, d) in &raw.morphisms {
        if mor_ix.insert(name.as_str(), morphisms.len()).is_some() {
            v.push(Violation::Duplicate(name.clone()));
        }
        match (obj_ix.get(s.as_str()), obj_ix.get(d.as_str())) {
            (Some(&src), Some(&dst)) => morphisms.push(MorData {
                name: name.clone(),
                src,
                dst,
            }),
            _ => {
                let bad = if obj_ix.contains_key(s.as_str()) {
                    d
                } else {
                    s
                };
                v.push(Violation::DanglingId(bad.clone()));
                morphisms.push(MorData {
                    name: name.clone(),
                    src: 0,
                    dst: 0,
                });
            }
        }
    }
    let mut identities = vec![usize::MAX; raw.objects.len()];
    for (o, m) in &raw.identities {
        match (obj_ix.get(o.as_str()), mor_ix.get(m.as_str())) {
            (Some(&o), Some(&m)) => {
                if morphisms[m].src != o || morphisms[m].dst != o {
                    v.push(Violation::MissingIdentity {
                        object: raw.objects[o].clone(),
                        morphism: Some(morphisms[m].name.clone()),
                    });
                }
                identities[o] = m;
            }
            (None, _) => v.push(Violation::DanglingId(o.clone())),
            (_, None) => v.push(Violation::DanglingId(m.clone())),
        }
    }
    for (o, &i) in identities.iter().enumerate() {
        if i == usize::MAX {
            v.push(Violation::MissingIdentity {
                object: raw.objects[o].clone(),
                morphism: None,
            });
        }
    }
    if !v.is_empty() {
        return Err(Error::InvalidCategory(v));
    }
    let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for (g, f, h) in &raw.compositions {
        let (Some(&gi), Some(&fi), Some(&hi)) = (
            mor_ix.get(g.as_str()),
            mor_ix.get(f.as_str()),
            mor_ix.get(h.as_str()),
        ) else {
            for n in [g, f, h] {
                if !mor_ix.contains_key(n.as_str()) {
                    v.push(Violation::DanglingId(n.clone()));
                }
            }
            continue;
        };
        let (mg, mf, mh) = (&morphisms[gi], &morphisms[fi], &morphisms[hi]);
        if mg.src != mf.dst || mh.src != mf.src || mh.dst != mg.dst {
            v.push(Violation::IllTypedComposite {
                g: g.clone(),
                f: f.clone(),
            });
            continue;
        }
        if let Some(prev) = table.insert((gi, fi), hi) {
            if prev != hi {
                v.push(Violation::Duplicate(format!("{g} . {f}")));
            }
        }
    }
    let is_id: Vec<bool> = {
        let mut b = vec![false; morphisms.len()];
        for &i in &identities {
            b[i] = true;
        }
        b
    };
    let n_mor = morphisms.len();
    let mut full = vec![Vec::new(); n_mor];
    for f in 0..n_mor {
        for g in 0..n_mor {
            if morphisms[g].src != morphisms[f].dst {
                continue;
            }
            let h = match table.get(&(g, f)) {
                Some(&h) => h,
                None if is_id[g] => f,
                None if is_id[f] => g,
                None => {
                    v.push(Violation::MissingComposite {
                        g: morphisms[g].name.clone(),
                        f: morphisms[f].name.clone(),
                    });
                    f
                }
            };
            full[f].push((g, h));
        }
    }
    if !v.is_empty() {
        return Err(Error::InvalidCategory(v));
    }
    let lookup: HashMap<(Mor, Mor), Mor> = full
        .iter()
        .enumerate()
        .flat_map(|(f, l)| l.iter().map(move |&(g, h)| ((g, f), h)))
        .collect();
    let cat = FinCat::from_fn(
        raw.name.clone(),
        raw.objects.clone(),
        morphisms,
        identities,
        |g, f| lookup[&(g, f)],
    );
    let v = cat.check_laws(opts.skip_assoc);
    if !v.is_empty() {
        return Err(Error::InvalidCategory(v));
    }
    Ok(cat)
}

/// The opposite category: same object and morphism indices, endpoints swapped.
pub fn opposite(c: &FinCat) -> FinCat {
    let name = match c.name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", c.name),
    };
    let morphisms = c
        .morphisms
        .iter()
        .map(|m| MorData {
            name: m.name.clone(),
            src: m.dst,
            dst: m.src,
        })
        .collect();
    match &c.law {
        Law::Table(_) => FinCat::from_fn(
            name,
            c.objects.clone(),
            morphisms,
            c.identities.clone(),
            |g, f| c.compose(f, g),
        ),
        Law::Product {
            factors,
            obj_stride,
            mor_stride,
        } => {
            let factors = factors
                .iter()
                .map(|f| Factor {
                    cat: f.cat.clone(),
                    op: !f.op,
                })
                .collect();
            let law = Law::Product {
                factors,
                obj_stride: obj_stride.clone(),
                mor_stride: mor_stride.clone(),
            };
            FinCat::assemble(
                name,
                c.objects.clone(),
                morphisms,
                c.identities.clone(),
                law,
            )
        }
    }
}

/// `C^{(p,q)} = (C^op)^p × C^q`, slots in that order.
pub fn power_pq(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<FinCat> {
    let factors = (0..sig.arity())
        .map(|i| Factor {
            cat: c.clone(),
            op: sig.is_contra(i),
        })
        .collect();
    Ok(FinCat::product(factors, lim)?.with_name(format!("{}^{}", c.name(), sig)))
}

/// Poset from generating relations `a ≤ b`, closed reflexively and transitively.
pub fn poset(name: &str, objects: &[String], le: &[(String, String)]) -> Result<FinCat> {
    let n = objects.len();
    let ix: HashMap<&str, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    if ix.len() != n {
        return Err(Error::NotAPoset("duplicate element".into()));
    }
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in le {
        let (Some(&a), Some(&b)) = (ix.get(a.as_str()), ix.get(b.as_str())) else {
            return Err(Error::NotAPoset(format!("unknown element in {a} <= {b}")));
        };
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if r[i][j] && r[j][i] {
                return Err(Error::NotAPoset(format!(
                    "{} and {} are distinct but equivalent",
                    objects[i], objects[j]
                )));
            }
        }
    }
    let mut morphisms: Vec<MorData> = (0..n)
        .map(|i| MorData {
            name: format!("id_{}", objects[i]),
            src: i,
            dst: i,
        })
        .collect();
    let mut rel_ix = vec![vec![usize::MAX; n]; n];
    for (i, row) in rel_ix.iter_mut().enumerate() {
        row[i] = i;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && r[i][j] {
                rel_ix[i][j] = morphisms.len();
                morphisms.push(MorData {
                    name: format!("{}<{}", objects[i], objects[j]),
                    src: i,
                    dst: j,
                });
            }
        }
    }
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src, m.dst)).collect();
    Ok(FinCat::from_fn(
        name,
        objects.to_vec(),
        morphisms,
        (0..n).collect(),
        |g, f| rel_ix[ends[f].0][ends[g].1],
    ))
}

/// One-object category from a monoid table; `table[x][y] = x ∘ y`.
pub fn monoid(
    name: &str,
    elements: &[String],
    unit: usize,
    table: &[Vec<usize>],
) -> Result<FinCat> {
    let n = elements.len();
    if unit >= n
        || table.len() != n
        || table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&z| z >= n))
    {
        return Err(Error::NotAMonoid("table shape".into()));
    }
    for x in 0..n {
        if table[unit][x] != x || table[x][unit] != x {
            return Err(Error::NotAMonoid(format!(
                "{} is not a unit for {}",
                elements[unit], elements[x]
            )));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(Error::NotAMonoid(format!(
                        "not associative on ({}, {}, {})",
                        elements[x], elements[y], elements[z]
                    )));
                }
            }
        }
    }
    let morphisms = elements
        .iter()
        .map(|e| MorData {
            name: e.clone(),
            src: 0,
            dst: 0,
        })
        .collect();
    Ok(FinCat::from_fn(
        name,
        vec!["*".into()],
        morphisms,
        vec![unit],
        |g, f| table[g][f],
    ))
}

/// Free category on an acyclic graph; edges are `(name, source, target)`.
pub fn acyclic_graph(
    name: &str,
    objects: &[String],
    edges: &[(String, String, String)],
    lim: &Limits,
) -> Result<FinCat> {
    let n = objects.len();
    let ix: HashMap<&str, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    let mut es = Vec::new();
    for (e, s, d) in edges {
        let (Some(&s), Some(&d)) = (ix.get(s.as_str()), ix.get(d.as_str())) else {
            return Err(Error::InvalidCategory(vec![Violation::DanglingId(
                format!("{s} or {d}"),
            )]));
        };
        es.push((e.clone(), s, d));
    }
    // Kahn's algorithm; leftover objects lie on a cycle.
    let mut indeg = vec![0; n];
    for &(_, _, d) in &es {
        indeg[d] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&o| indeg[o] == 0).collect();
    let mut seen = 0;
    while let Some(o) = ready.pop() {
        seen += 1;
        for &(_, s, d) in &es {
            if s == o {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    ready.push(d);
                }
            }
        }
    }
    if seen < n {
        let o = (0..n).find(|&o| indeg[o] > 0).unwrap_or(0);
        return Err(Error::CyclicGraph(objects[o].clone()));
    }
    let mut morphisms: Vec<MorData> = (0..n)
        .map(|i| MorData {
            name: format!("id_{}", objects[i]),
            src: i,
            dst: i,
        })
        .collect();
    let mut paths: Vec<Vec<usize>> = (0..n).map(|_| Vec::new()).collect();
    let mut by_path: HashMap<Vec<usize>, Mor> = HashMap::new();
    let mut layer: Vec<Vec<usize>> = (0..es.len()).map(|e| vec![e]).collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for p in layer {
            let (s, d) = (es[p[0]].1, es[*p.last().unwrap()].2);
            let label = p
                .iter()
                .rev()
                .map(|&e| es[e].0.as_str())
                .collect::<Vec<_>>()
                .join(".");
            by_path.insert(p.clone(), morphisms.len());
            morphisms.push(MorData {
                name: label,
                src: s,
                dst: d,
            });
            paths.push(p.clone());
            check_cap("free category", morphisms.len() as u128, lim)?;
            for (e, &(_, s2, _)) in es.iter().enumerate() {
                if s2 == d {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    Ok(FinCat::from_fn(
        name,
        objects.to_vec(),
        morphisms,
        (0..n).collect(),
        |g, f| {
            if g < n {
                return f;
            }
            if f < n {
                return g;
            }
            let mut p = paths[f].clone();
            p.extend_from_slice(&paths[g]);
            by_path[&p]
        },
    ))
}

/// A functor between finite categories.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub obj: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl Functor {
    /// Checks endpoints, identities and composition exhaustively.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.obj.len() != s.n_objects() || self.mor.len() != s.n_morphisms() {
            return Err(Error::NotAFunctor("table sizes".into()));
        }
        if self.obj.iter().any(|&o| o >= t.n_objects())
            || self.mor.iter().any(|&m| m >= t.n_morphisms())
        {
            return Err(Error::NotAFunctor("image out of range".into()));
        }
        for m in 0..s.n_morphisms() {
            let fm = self.mor[m];
            if t.src(fm) != self.obj[s.src(m)] || t.dst(fm) != self.obj[s.dst(m)] {
                return Err(Error::NotAFunctor(format!(
                    "endpoints of {}",
                    s.mor_name(m)
                )));
            }
        }
        for o in 0..s.n_objects() {
            if self.mor[s.identity(o)] != t.identity(self.obj[o]) {
                return Err(Error::NotAFunctor(format!(
                    "identity of {}",
                    s.object_name(o)
                )));
            }
        }
        for (g, f) in s.composable_pairs() {
            if self.mor[s.compose(g, f)] != t.compose(self.mor[g], self.mor[f]) {
                return Err(Error::NotAFunctor(format!(
                    "composite {} . {}",
                    s.mor_name(g),
                    s.mor_name(f)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(c: &Arc<FinCat>) -> Functor {
        Functor {
            source: c.clone(),
            target: c.clone(),
            obj: (0..c.n_objects()).collect(),
            mor: (0..c.n_morphisms()).collect(),
        }
    }

    /// The unique functor to the terminal category.
    pub fn to_terminal(c: &Arc<FinCat>) -> Functor {
        Functor {
            source: c.clone(),
            target: Arc::new(FinCat::terminal()),
            obj: vec![0; c.n_objects()],
            mor: vec![0; c.n_morphisms()],
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Functor {
        Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj: self.obj.iter().map(|&o| other.obj[o]).collect(),
            mor: self.mor.iter().map(|&m| other.mor[m]).collect(),
        }
    }

    /// Injective on objects.
    pub fn is_injective_on_objects(&self) -> bool {
        let mut v = self.obj.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// A functor between product categories given slotwise: slot `k` of the target reads slot
/// `pick[k]` of the source.
pub fn reindex_functor(source: &Arc<FinCat>, target: &Arc<FinCat>, pick: &[usize]) -> Functor {
    let obj = (0..source.n_objects())
        .map(|o| {
            let d = source.decode_obj(o);
            target.encode_obj(&pick.iter().map(|&k| d[k]).collect::<Vec<_>>())
        })
        .collect();
    let mor = (0..source.n_morphisms())
        .map(|m| {
            let d = source.decode_mor(m);
            target.encode_mor(&pick.iter().map(|&k| d[k]).collect::<Vec<_>>())
        })
        .collect();
    Functor {
        source: source.clone(),
        target: target.clone(),
        obj,
        mor,
    }
}

/// `Δ_{p,q}: C^op × C → C^{(p,q)}`, `(A, B) ↦ (A, …, A, B, …, B)`.
pub fn diagonal_functor(c: &Arc<FinCat>, sig: Sig, lim: &Limits) -> Result<Functor> {
    let source = Arc::new(power_pq(c, Sig::new(1, 1), lim)?);
    let target = Arc::new(power_pq(c, sig, lim)?);
    let pick: Vec<usize> = (0..sig.arity())
        .map(|k| if sig.is_contra(k) { 0 } else { 1 })
        .collect();
    Ok(reindex_functor(&source, &target, &pick))
}

/// `C^{(p+r,q+s)} → C^{(p,q)}` forgetting the last `r` contravariant and last `s` covariant slots.
pub fn mute_projection(
    c: &Arc<FinCat>,
    sig: Sig,
    r: usize,
    s: usize,
    lim: &Limits,
) -> Result<Functor> {
    let big = Sig::new(sig.p + r, sig.q + s);
    let source = Arc::new(power_pq(c, big, lim)?);
    let target = Arc::new(power_pq(c, sig, lim)?);
    let pick: Vec<usize> = (0..sig.p).chain(big.p..big.p + sig.q).collect();
    Ok(reindex_functor(&source, &target, &pick))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn walking_arrow() -> FinCat {
        acyclic_graph(
            "arrow",
            &["0".into(), "1".into()],
            &[("u".into(), "0".into(), "1".into())],
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn walking_arrow_has_three_morphisms() {
        let c = walking_arrow();
        assert_eq!(c.n_morphisms(), 3);
        assert!(c.check_laws(false).is_empty());
    }

    #[test]
    fn chain_poset_counts() {
        let objs: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let c = poset(
            "chain",
            &objs,
            &[("0".into(), "1".into()), ("1".into(), "2".into())],
        )
        .unwrap();
        assert_eq!(c.n_morphisms(), 6);
        assert!(c.check_laws(false).is_empty());
        assert!(c.is_thin());
    }

    #[test]
    fn poset_cycle_rejected() {
        let objs: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let e = poset(
            "p",
            &objs,
            &[("a".into(), "b".into()), ("b".into(), "a".into())],
        )
        .unwrap_err();
        assert!(matches!(e, Error::NotAPoset(_)));
    }

    #[test]
    fn z2_monoid() {
        let c = monoid(
            "z2",
            &["e".into(), "s".into()],
            0,
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert_eq!((c.n_objects(), c.n_morphisms()), (1, 2));
        assert_eq!(c.compose(1, 1), 0);
    }

    #[test]
    fn bad_monoid_rejected() {
        // x*y = y except unit: fails unit law for a non-unit table
        let e = monoid("m", &["e".into(), "a".into()], 0, &[vec![0, 1], vec![0, 1]]).unwrap_err();
        assert!(matches!(e, Error::NotAMonoid(_)));
    }

    #[test]
    fn two_cycle_rejected() {
        let e = acyclic_graph(
            "g",
            &["a".into(), "b".into()],
            &[
                ("f".into(), "a".into(), "b".into()),
                ("g".into(), "b".into(), "a".into()),
            ],
            &Limits::default(),
        )
        .unwrap_err();
        assert!(matches!(e, Error::CyclicGraph(_)));
    }

    #[test]
    fn raw_walking_arrow_validates() {
        let raw = RawCategory {
            name: "arrow".into(),
            objects: vec!["0".into(), "1".into()],
            morphisms: vec![
                ("id0".into(), "0".into(), "0".into()),
                ("id1".into(), "1".into(), "1".into()),
                ("u".into(), "0".into(), "1".into()),
            ],
            identities: vec![("0".into(), "id0".into()), ("1".into(), "id1".into())],
            compositions: vec![],
        };
        assert_eq!(
            validate_category(&raw, ValidateOpts::default())
                .unwrap()
                .n_morphisms(),
            3
        );
    }

    #[test]
    fn unit_failure_names_morphism() {
        // An extra endomorphism e on 0 that is declared as the identity, with u ∘ e ≠ u.
        let raw = RawCategory {
            name: "bad".into(),
            objects: vec!["0".into(), "1".into()],
            morphisms: vec![
                ("id0".into(), "0".into(), "0".into()),
                ("id1".into(), "1".into(), "1".into()),
                ("u".into(), "0".into(), "1".into()),
                ("v".into(), "0".into(), "1".into()),
            ],
            identities: vec![("0".into(), "id0".into()), ("1".into(), "id1".into())],
            compositions: vec![("u".into(), "id0".into(), "v".into())],
        };
        let Error::InvalidCategory(v) =
            validate_category(&raw, ValidateOpts::default()).unwrap_err()
        else {
            panic!()
        };
        assert!(v.contains(&Violation::MissingIdentity {
            object: "0".into(),
            morphism: Some("u".into())
        }));
    }

    #[test]
    fn power_counts() {
        let c = Arc::new(walking_arrow());
        let p = power_pq(&c, Sig::new(1, 1), &Limits::default()).unwrap();
        assert_eq!((p.n_objects(), p.n_morphisms()), (4, 9));
        assert!(p.check_laws(false).is_empty());
        let t = power_pq(&c, Sig::new(0, 0), &Limits::default()).unwrap();
        assert_eq!((t.n_objects(), t.n_morphisms()), (1, 1));
        let q = power_pq(&c, Sig::new(2, 1), &Limits::default()).unwrap();
        assert_eq!(q.n_objects(), 8);
    }

    #[test]
    fn opposite_involution() {
        let c = walking_arrow();
        let o = opposite(&c);
        assert_eq!(o.src(2), 1);
        assert!(opposite(&o).same_tables(&c));
        assert_eq!(opposite(&o).name(), c.name());
    }

    #[test]
    fn diagonal_21_on_arrow() {
        let c = Arc::new(walking_arrow());
        let d = diagonal_functor(&c, Sig::new(2, 1), &Limits::default()).unwrap();
        d.validate().unwrap();
        let src = d.source.encode_obj(&[0, 1]);
        assert_eq!(d.target.decode_obj(d.obj[src]), vec![0, 0, 1]);
    }
}
