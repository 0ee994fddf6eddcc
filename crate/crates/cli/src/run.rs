//! Executing the jobs of a resolved spec.

use std::sync::Arc;
use std::time::Instant;

use hace::apps::{classical_day, day_convolution};
use hace::dinat::{enumerate_dinat, is_wedge};
use hace::ends::{coend_pq, end_pq, Method};
use hace::gen::{random_functor, rng, Profile};
use hace::kusarigama::{cokusarigama, kusarigama, Lattice};
use hace::{FinSet, Integrand, Limits, SetFunctorPQ, Sig};

use crate::report::{Check, Record, Report, Status};
use crate::resolve::{NamedFunctor, Resolved};
use crate::spec::{job_text, Job, MethodChoice};
use crate::{status_of, suites, Flags};

/// Runs every job in declaration order. Errors inside a job are recorded, not raised.
pub fn run_resolved(r: &Resolved, flags: &Flags) -> Report {
    let mut report = Report {
        seed: flags.seed,
        cap: flags.lim.cap,
        records: Vec::new(),
    };
    for job in &r.jobs {
        let t0 = Instant::now();
        let mut rec = Record::new(job_text(job));
        if let Err(e) = run_job(r, job, flags, &mut rec) {
            let code = match status_of(&e) {
                Status::Error(c) => c,
                s => s.exit_code(),
            };
            rec.error = Some((code, e.to_string()));
        }
        if flags.timing {
            rec.timing_ms = Some(t0.elapsed().as_millis());
        }
        report.records.push(rec);
    }
    report
}

fn dynd(d: &SetFunctorPQ) -> Arc<dyn Integrand> {
    Arc::new(d.clone())
}

fn fiber_sizes(d: &SetFunctorPQ) -> Vec<usize> {
    d.functor().fibers().iter().map(FinSet::len).collect()
}

fn run_job(r: &Resolved, job: &Job, flags: &Flags, rec: &mut Record) -> hace::Result<()> {
    let lim = &flags.lim;
    let get = |n: &str| r.functor(n).expect("references checked at resolution");
    match job {
        Job::End { functor, method } | Job::Coend { functor, method } => {
            let is_end = matches!(job, Job::End { .. });
            let f = get(functor);
            rec.input("functor", format!("{functor}: {}", r.describe(f)));
            let choice = method.unwrap_or(flags.method);
            rec.text("method", choice);
            let first = match choice {
                MethodChoice::One(m) => m,
                MethodChoice::All => Method::Equalizer,
            };
            let c = f.d.base();
            let diag = |a| f.d.fiber_at(&vec![a; f.d.sig().arity()]).clone();
            if is_end {
                let e = end_pq(&f.d, first, lim)?;
                rec.text("size", e.len());
                rec.list("carrier", e.labels());
                for a in 0..c.n_objects() {
                    let dom = diag(a);
                    rec.list(
                        format!("leg {}", c.object_name(a)),
                        (0..e.len()).map(|i| dom.label(e.carrier.legs[a].apply(i)).clone()),
                    );
                }
                rec.checks.push(Check::run("wedge", || {
                    Ok((is_wedge(&e.wedge, &dynd(&f.d))?, String::new()))
                }));
            } else {
                let q = coend_pq(&f.d, first, lim)?;
                rec.text("size", q.len());
                rec.list("carrier", q.labels());
                for a in 0..c.n_objects() {
                    rec.list(
                        format!("leg {}", c.object_name(a)),
                        (0..diag(a).len()).map(|x| q.labels()[q.class_of(a, x)].clone()),
                    );
                }
            }
            if choice == MethodChoice::All {
                rec.checks.push(suites::method_agreement(&f.d, lim));
            }
        }
        Job::Dinat { source, target } => {
            let (f, g) = (get(source), get(target));
            rec.input("source", format!("{source}: {}", r.describe(f)));
            rec.input("target", format!("{target}: {}", r.describe(g)));
            let ds = enumerate_dinat(&dynd(&f.d), &dynd(&g.d), lim)?;
            rec.text("count", ds.len());
            for (i, d) in ds.iter().enumerate() {
                rec.list(
                    format!("dinatural {i}"),
                    d.tables().iter().map(|t| {
                        format!(
                            "[{}]",
                            t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                        )
                    }),
                );
            }
            rec.checks.push(suites::dinat_end(&f.d, &g.d, lim));
        }
        Job::Kusarigama { source, target } => {
            let (f, g) = (get(source), get(target));
            rec.input("source", format!("{source}: {}", r.describe(f)));
            rec.input("target", format!("{target}: {}", r.describe(g)));
            rec.list(
                "cokusarigama sizes",
                fiber_sizes(&cokusarigama(&dynd(&f.d), lim)?.functor),
            );
            rec.list(
                "kusarigama sizes",
                fiber_sizes(&kusarigama(&dynd(&g.d), lim)?.functor),
            );
            rec.checks.extend(suites::kusarigama_laws(&f.d, &g.d, lim));
        }
        Job::Fubini { left, right } => {
            let (f, g) = (get(left), get(right));
            rec.input("left", format!("{left}: {}", r.describe(f)));
            rec.input("right", format!("{right}: {}", r.describe(g)));
            let (check, gap) = suites::fubini(&f.d, &g.d, lim);
            if let Some(((ej, es), (cj, cs))) = gap {
                rec.text("end over pairs", ej);
                rec.text("end over one variable", es);
                rec.text("coend over pairs", cj);
                rec.text("coend over one variable", cs);
            }
            rec.checks.push(check);
        }
        Job::Day { monoidal, functors } => {
            let m = r
                .monoidal(monoidal)
                .expect("references checked at resolution");
            rec.input("monoidal", format!("{monoidal}: tensor of {}", m.category));
            let fs: Vec<&NamedFunctor> = functors.iter().map(|n| get(n)).collect();
            for (i, f) in fs.iter().enumerate() {
                rec.input(
                    format!("factor {}", i + 1),
                    format!("{}: {}", f.name, r.describe(f)),
                );
            }
            let ds: Vec<SetFunctorPQ> = fs.iter().map(|f| f.d.clone()).collect();
            let day = day_convolution(&m.m, &ds, lim)?;
            rec.list("sizes", fiber_sizes(&day));
            match ds.as_slice() {
                [f] => rec.checks.push(suites::day_unary(&m.m, f, lim)),
                [f, g] => rec.list("classical sizes", classical_day(&m.m, f, g, lim)?),
                _ => {}
            }
        }
        Job::CheckAll => check_all(r, flags, rec),
    }
    Ok(())
}

/// A functor of the dual signature on the same category: the first declared one, else a
/// seeded random one.
fn partner(r: &Resolved, f: &NamedFunctor, flags: &Flags) -> hace::Result<(String, SetFunctorPQ)> {
    let want = f.d.sig().dual();
    if let Some(g) = r
        .functors
        .iter()
        .find(|g| g.category == f.category && g.d.sig() == want)
    {
        return Ok((g.name.clone(), g.d.clone()));
    }
    let profile = Profile {
        max_fiber: 2,
        ..Profile::default()
    };
    let g = random_functor(&mut rng(flags.seed), f.d.base(), want, &profile, &flags.lim)?;
    Ok((format!("seeded partner {want}"), g))
}

fn check_all(r: &Resolved, flags: &Flags, rec: &mut Record) {
    let lim = &flags.lim;
    let tag = |name: &str, mut cs: Vec<Check>| {
        for c in &mut cs {
            c.name = format!("{name}: {}", c.name);
        }
        cs
    };
    for c in &r.categories {
        let d = r
            .functors
            .iter()
            .find(|f| f.category == c.name && f.d.sig() == Sig::new(1, 1));
        let mut cs = suites::twisted(&c.cat, d.map(|f| &f.d), lim);
        if let Ok(lat) = Lattice::new(&c.cat) {
            for sig in [Sig::new(1, 1), Sig::new(2, 1), Sig::new(1, 2)] {
                cs.push(suites::identity_on_lattice(&lat, sig));
            }
        }
        rec.checks.extend(tag(&c.name, cs));
    }
    for f in &r.functors {
        let d = &f.d;
        let mut cs = vec![
            suites::method_agreement(d, lim),
            suites::universal_property(d, &[0, 1, 2], lim),
            suites::mute_invariance(d, lim),
            suites::degenerate(d, lim),
        ];
        if suites::point_vs_nat_applies(d.sig()) {
            cs.push(suites::point_vs_nat(d, lim));
        } else {
            cs.push(suites::skip(
                "point-vs-hom-pi",
                "signature without a single cross pair",
            ));
        }
        let cat = &r.category(&f.category).expect("resolved").cat;
        match f.kind {
            "point" => cs.push(suites::point_kusarigama(cat, d.sig(), lim)),
            "constant" => {
                if let Ok(lat) = Lattice::new(cat) {
                    let e = d.functor().fiber(0).clone();
                    cs.push(suites::constant_on_lattice(&lat, d.sig(), &e, lim));
                }
            }
            _ => {}
        }
        match partner(r, f, flags) {
            Ok((name, g)) => {
                let mut dn = suites::dinat_end(d, &g, lim);
                dn.detail = format!("with {name}: {}", dn.detail);
                cs.push(dn);
                cs.extend(suites::kusarigama_laws(d, &g, lim));
            }
            Err(e) => cs.push(Check::new("partner", status_of(&e), e.to_string())),
        }
        rec.checks.extend(tag(&f.name, cs));
    }
    for m in &r.monoidals {
        for f in r
            .functors
            .iter()
            .filter(|f| f.category == m.category && f.d.sig() == Sig::new(1, 0))
        {
            let c = suites::day_unary(&m.m, &f.d, lim);
            rec.checks
                .extend(tag(&format!("{} {}", m.name, f.name), vec![c]));
        }
    }
    let passed = rec
        .checks
        .iter()
        .filter(|c| c.status == Status::Pass)
        .count();
    rec.text("checks", rec.checks.len());
    rec.text("passed", passed);
}

/// Default limits with the cap from `HACE_CAP` unless `cap` is given.
pub fn limits(cap: Option<usize>) -> Limits {
    cap.map(Limits::new).unwrap_or_else(Limits::from_env)
}
