//! Brute-force oracles shared by the integration tests. Nothing here goes through the
//! library's search or quotient code.
#![allow(dead_code)]

use std::sync::Arc;

use hace::fincat::{FinCat, Mor, Obj, Sig};
use hace::gen::{random_category, random_functor, random_sig, rng, Profile, Rng};
use hace::{Limits, SetFunctorPQ};

pub struct Instance {
    pub seed: u64,
    pub cat: Arc<FinCat>,
    pub d: SetFunctorPQ,
}

pub fn instance(seed: u64, max_arity: usize) -> Instance {
    let lim = Limits::default();
    let profile = Profile {
        max_arity,
        ..Profile::default()
    };
    let mut r = rng(seed);
    let cat = Arc::new(random_category(&mut r, &profile, &lim).unwrap());
    let sig = random_sig(&mut r, max_arity);
    let d = random_functor(&mut r, &cat, sig, &profile, &lim).unwrap();
    Instance { seed, cat, d }
}

pub fn functor_with(r: &mut Rng, cat: &Arc<FinCat>, sig: Sig) -> SetFunctorPQ {
    random_functor(r, cat, sig, &Profile::default(), &Limits::default()).unwrap()
}

/// `(id_A^p ; u^q)` style tuples: `p` copies of `a` then `q` copies of `b`.
pub fn split<T: Copy>(sig: Sig, a: T, b: T) -> Vec<T> {
    (0..sig.p).map(|_| a).chain((0..sig.q).map(|_| b)).collect()
}

pub fn all_morphisms(c: &FinCat) -> impl Iterator<Item = Mor> + '_ {
    0..c.n_morphisms()
}

/// Every family `x_A ∈ D(A,…,A)` satisfying the wedge condition, in lexicographic order.
pub fn brute_end(d: &SetFunctorPQ) -> Vec<Vec<usize>> {
    let c = d.base().clone();
    let sig = d.sig();
    let n = c.n_objects();
    let sizes: Vec<usize> = (0..n)
        .map(|a| d.fiber_at(&vec![a; sig.arity()]).len())
        .collect();
    let total: usize = sizes.iter().product();
    assert!(total <= 200_000, "brute end too large");
    let mut out = Vec::new();
    for i in 0..total {
        let fam = hace::decode(i, &sizes);
        let ok = all_morphisms(&c).all(|u| {
            let (a, b) = (c.src(u), c.dst(u));
            let left = d.map_at(&split(sig, c.identity(a), u)).apply(fam[a]);
            let right = d.map_at(&split(sig, u, c.identity(b))).apply(fam[b]);
            left == right
        });
        if ok {
            out.push(fam);
        }
    }
    out
}

pub struct Partition {
    pub classes: usize,
    /// Class of `(A, x)` in order of least member over `A` then `x`.
    pub class_of: Vec<Vec<usize>>,
}

/// The coequalizer of `∐_u D(B,…,B; A,…,A) ⇉ ∐_A D(A,…,A)` by a plain union-find.
pub fn brute_coend(d: &SetFunctorPQ) -> Partition {
    let c = d.base().clone();
    let sig = d.sig();
    let n = c.n_objects();
    let sizes: Vec<usize> = (0..n)
        .map(|a| d.fiber_at(&vec![a; sig.arity()]).len())
        .collect();
    let offset: Vec<usize> = sizes
        .iter()
        .scan(0, |s, &k| {
            let o = *s;
            *s += k;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for u in all_morphisms(&c) {
        let (a, b) = (c.src(u), c.dst(u));
        let y_set = d.fiber_at(&split(sig, b, a)).len();
        for y in 0..y_set {
            let l = d.map_at(&split(sig, u, c.identity(a))).apply(y);
            let r = d.map_at(&split(sig, c.identity(b), u)).apply(y);
            let (ra, rb) = (
                find(&mut parent, offset[a] + l),
                find(&mut parent, offset[b] + r),
            );
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
    }
    let mut label = vec![usize::MAX; total];
    let mut classes = 0;
    let mut class_of = Vec::with_capacity(n);
    for a in 0..n {
        let mut row = Vec::with_capacity(sizes[a]);
        for x in 0..sizes[a] {
            let r = find(&mut parent, offset[a] + x);
            if label[r] == usize::MAX {
                label[r] = classes;
                classes += 1;
            }
            row.push(label[r]);
        }
        class_of.push(row);
    }
    Partition { classes, class_of }
}

/// Two partitions agree up to renaming of classes.
pub fn same_partition(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let mut fwd = std::collections::HashMap::new();
    let mut bwd = std::collections::HashMap::new();
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(&x, &y)| *fwd.entry(x).or_insert(y) == y && *bwd.entry(y).or_insert(x) == x)
}

/// Number of dinatural families `F ⇒̈ G` by trying every family of component functions.
pub fn brute_dinat_count(f: &SetFunctorPQ, g: &SetFunctorPQ) -> usize {
    let c = f.base().clone();
    let (fs, gs) = (f.sig(), g.sig());
    assert_eq!(fs.dual(), gs);
    let n = c.n_objects();
    let comp_sizes: Vec<(usize, usize)> = (0..n)
        .map(|a| {
            (
                f.fiber_at(&vec![a; fs.arity()]).len(),
                g.fiber_at(&vec![a; gs.arity()]).len(),
            )
        })
        .collect();
    let counts: Vec<usize> = comp_sizes.iter().map(|&(x, y)| y.pow(x as u32)).collect();
    let total: usize = counts.iter().product();
    assert!(total <= 200_000, "brute dinat search too large");
    let mut ok_count = 0;
    for i in 0..total {
        let pick = hace::decode(i, &counts);
        let tables: Vec<Vec<usize>> = (0..n)
            .map(|a| hace::decode(pick[a], &vec![comp_sizes[a].1; comp_sizes[a].0]))
            .collect();
        let ok = all_morphisms(&c).all(|u| {
            let (a, b) = (c.src(u), c.dst(u));
            let (ia, ib) = (c.identity(a), c.identity(b));
            // F(B^p; A^q) → G(A^q; B^p) two ways round the hexagon.
            (0..f.fiber_at(&split(fs, b, a)).len()).all(|x| {
                let via_a = g
                    .map_at(&split(gs, ia, u))
                    .apply(tables[a][f.map_at(&split(fs, u, ia)).apply(x)]);
                let via_b = g
                    .map_at(&split(gs, u, ib))
                    .apply(tables[b][f.map_at(&split(fs, ib, u)).apply(x)]);
                via_a == via_b
            })
        });
        if ok {
            ok_count += 1;
        }
    }
    ok_count
}

/// Identity and associativity laws checked directly on the composition table.
pub fn category_laws_hold(c: &FinCat) -> bool {
    for f in 0..c.n_morphisms() {
        let (a, b) = (c.src(f), c.dst(f));
        if c.compose(f, c.identity(a)) != f || c.compose(c.identity(b), f) != f {
            return false;
        }
        for g in c.out(b).iter().copied() {
            let gf = c.compose(g, f);
            if c.src(gf) != a || c.dst(gf) != c.dst(g) {
                return false;
            }
            for &h in c.out(c.dst(g)) {
                if c.compose(h, gf) != c.compose(c.compose(h, g), f) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn objs(c: &FinCat) -> std::ops::Range<Obj> {
    0..c.n_objects()
}

/// Classes of `∏ F_k × M` under `(F(u)x̲, h) ~ (x̲, u^n h)` for `u ∈ M`, at the single object.
pub fn day_oracle(c: &FinCat, fs: &[SetFunctorPQ]) -> usize {
    let n = fs.len();
    let mut radices: Vec<usize> = fs.iter().map(|f| f.fiber_at(&[0]).len()).collect();
    radices.push(c.n_morphisms());
    let total: usize = radices.iter().product();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let power = |u: usize| (0..n).fold(c.identity(0), |acc, _| c.compose(acc, u));
    for y in 0..total {
        let d = hace::decode(y, &radices);
        for u in 0..c.n_morphisms() {
            let mut l = d.clone();
            for k in 0..n {
                l[k] = fs[k].map_at(&[u]).apply(d[k]);
            }
            let mut r = d.clone();
            r[n] = c.compose(power(u), d[n]);
            let (a, b) = (
                find(&mut parent, hace::encode(&l, &radices)),
                find(&mut parent, hace::encode(&r, &radices)),
            );
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..total).filter(|&x| find(&mut parent, x) == x).count()
}
