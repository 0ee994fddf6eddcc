//! The CatSpec text format: a line-oriented list of `category`, `functor`, `monoidal` and
//! `job` stanzas.
//!
//! ```text
//! category arrow poset
//!   elements 0 1
//!   le 0 1
//! end
//! functor D on arrow table sig 1 1
//!   fiber 0 0 = x
//!   fiber 0 1 = y z
//!   fiber 1 0 =
//!   fiber 1 1 = w
//!   act 1 0<1 0 _ = y
//!   act 0 0<1 _ 1 = w w
//! end
//! job end D method all
//! ```
//!
//! Blank lines and `#` comments are ignored; `=` is always a token of its own.

use std::fmt::{self, Write};

use hace::Sig;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatSpec {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Category(CategoryDecl),
    Functor(FunctorDecl),
    Monoidal(MonoidalDecl),
    Job(Job),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: String,
    pub body: CategoryBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryBody {
    Poset {
        elements: Vec<String>,
        le: Vec<(String, String)>,
    },
    /// `rows[i]` is `(x, [x∘y for y in elements])`.
    Monoid {
        elements: Vec<String>,
        unit: String,
        rows: Vec<(String, Vec<String>)>,
    },
    Graph {
        objects: Vec<String>,
        edges: Vec<(String, String, String)>,
    },
    /// Objects without an `identity` line get a fresh identity `id_<object>`.
    Explicit {
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
        compositions: Vec<(String, String, String)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: String,
    pub category: String,
    pub body: FunctorBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorBody {
    Hom,
    Point(Sig),
    HomPi(Sig),
    /// `hom(A_1 × … × A_p, B)` on a poset with finite meets; signature `(p, 1)`.
    ProductHom(Sig),
    Constant(Sig, Vec<String>),
    Table {
        sig: Sig,
        fibers: Vec<(Vec<String>, Vec<String>)>,
        actions: Vec<Action>,
    },
}

impl FunctorBody {
    pub fn sig(&self) -> Sig {
        match self {
            FunctorBody::Hom => Sig::new(1, 1),
            FunctorBody::Point(s)
            | FunctorBody::HomPi(s)
            | FunctorBody::ProductHom(s)
            | FunctorBody::Constant(s, _) => *s,
            FunctorBody::Table { sig, .. } => *sig,
        }
    }
}

/// Action of `mor` in `slot` with the other slots at `context`; `images` lists the image of
/// each source element, by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub slot: usize,
    pub mor: String,
    pub context: Vec<Option<String>>,
    pub images: Vec<String>,
}

/// A strict monoidal structure whose tensor is the multiplication of a commutative monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalDecl {
    pub name: String,
    pub category: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Job {
    End {
        functor: String,
        method: Option<MethodChoice>,
    },
    Coend {
        functor: String,
        method: Option<MethodChoice>,
    },
    Dinat {
        source: String,
        target: String,
    },
    Kusarigama {
        source: String,
        target: String,
    },
    Fubini {
        left: String,
        right: String,
    },
    Day {
        monoidal: String,
        functors: Vec<String>,
    },
    CheckAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    One(hace::ends::Method),
    All,
}

impl MethodChoice {
    pub fn parse(s: &str) -> Option<MethodChoice> {
        if s == "all" {
            Some(MethodChoice::All)
        } else {
            s.parse().ok().map(MethodChoice::One)
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodChoice::One(m) => write!(f, "{m}"),
            MethodChoice::All => f.write_str("all"),
        }
    }
}

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    col: usize,
}

struct Line {
    no: usize,
    toks: Vec<Tok>,
    end_col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let mut toks = Vec::new();
        let mut cur: Option<Tok> = None;
        let mut col = 0;
        for ch in raw.chars() {
            col += 1;
            if ch == '#' {
                break;
            }
            if ch.is_whitespace() || ch == '=' {
                toks.extend(cur.take());
                if ch == '=' {
                    toks.push(Tok {
                        text: "=".into(),
                        col,
                    });
                }
                continue;
            }
            if !ch.is_ascii_graphic() {
                return Err(ParseError {
                    line: no,
                    col,
                    expected: "an ASCII identifier".into(),
                });
            }
            cur.get_or_insert(Tok {
                text: String::new(),
                col,
            })
            .text
            .push(ch);
        }
        toks.extend(cur);
        if !toks.is_empty() {
            out.push(Line {
                no,
                toks,
                end_col: col + 1,
            });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: &'a Line,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a Line) -> Self {
        Cursor { line, pos: 0 }
    }

    fn err(&self, expected: &str) -> ParseError {
        let col = self
            .line
            .toks
            .get(self.pos)
            .map_or(self.line.end_col, |t| t.col);
        ParseError {
            line: self.line.no,
            col,
            expected: expected.into(),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.line.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if t != "=" => {
                self.pos += 1;
                Ok(t.to_string())
            }
            _ => Err(self.err(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek() == Some(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("`{kw}`")))
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek().and_then(|t| t.parse().ok()) {
            Some(n) => {
                self.pos += 1;
                Ok(n)
            }
            None => Err(self.err(what)),
        }
    }

    fn sig(&mut self) -> Result<Sig, ParseError> {
        self.keyword("sig")?;
        let p = self.number("contravariant arity")?;
        let q = self.number("covariant arity")?;
        if p + q > 8 {
            self.pos -= 1;
            return Err(self.err("a total arity of at most 8"));
        }
        Ok(Sig::new(p, q))
    }

    /// Identifiers up to `=` (not consumed) or the end of the line.
    fn idents_until_eq(&mut self) -> Vec<String> {
        let mut v = Vec::new();
        while let Some(t) = self.peek() {
            if t == "=" {
                break;
            }
            v.push(t.to_string());
            self.pos += 1;
        }
        v
    }

    fn rest(&mut self) -> Vec<String> {
        let v = self.line.toks[self.pos..]
            .iter()
            .map(|t| t.text.clone())
            .collect();
        self.pos = self.line.toks.len();
        v
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos == self.line.toks.len() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }
}

pub fn parse(text: &str) -> Result<CatSpec, ParseError> {
    let lines = tokenize(text)?;
    let mut items = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let mut c = Cursor::new(&lines[i]);
        i += 1;
        let head = c.ident("`category`, `functor`, `monoidal` or `job`")?;
        match head.as_str() {
            "category" => {
                let name = c.ident("a category name")?;
                let kind = c.ident("`poset`, `monoid`, `graph` or `explicit`")?;
                c.pos -= 1;
                if !["poset", "monoid", "graph", "explicit"].contains(&kind.as_str()) {
                    return Err(c.err("`poset`, `monoid`, `graph` or `explicit`"));
                }
                c.pos += 1;
                c.done()?;
                let (body, next) = block(&lines, i)?;
                i = next;
                items.push(Item::Category(CategoryDecl {
                    name,
                    body: category_body(&kind, body)?,
                }));
            }
            "functor" => {
                let name = c.ident("a functor name")?;
                c.keyword("on")?;
                let category = c.ident("a category name")?;
                let kind =
                    c.ident("`hom`, `point`, `hompi`, `producthom`, `constant` or `table`")?;
                let body = match kind.as_str() {
                    "hom" => FunctorBody::Hom,
                    "point" => FunctorBody::Point(c.sig()?),
                    "hompi" => FunctorBody::HomPi(c.sig()?),
                    "producthom" => FunctorBody::ProductHom(c.sig()?),
                    "constant" => {
                        let sig = c.sig()?;
                        c.keyword("=")?;
                        FunctorBody::Constant(sig, c.rest())
                    }
                    "table" => {
                        let sig = c.sig()?;
                        c.done()?;
                        let (body, next) = block(&lines, i)?;
                        i = next;
                        table_body(sig, body)?
                    }
                    _ => {
                        c.pos -= 1;
                        return Err(
                            c.err("`hom`, `point`, `hompi`, `producthom`, `constant` or `table`")
                        );
                    }
                };
                c.done()?;
                items.push(Item::Functor(FunctorDecl {
                    name,
                    category,
                    body,
                }));
            }
            "monoidal" => {
                let name = c.ident("a monoidal structure name")?;
                c.keyword("on")?;
                let category = c.ident("a category name")?;
                c.done()?;
                items.push(Item::Monoidal(MonoidalDecl { name, category }));
            }
            "job" => {
                items.push(Item::Job(job(&mut c)?));
                c.done()?;
            }
            _ => {
                c.pos -= 1;
                return Err(c.err("`category`, `functor`, `monoidal` or `job`"));
            }
        }
    }
    Ok(CatSpec { items })
}

/// Lines from `start` up to the matching `end`; returns the index after it.
fn block(lines: &[Line], start: usize) -> Result<(&[Line], usize), ParseError> {
    for (k, l) in lines[start..].iter().enumerate() {
        if l.toks[0].text == "end" {
            Cursor { line: l, pos: 1 }.done()?;
            return Ok((&lines[start..start + k], start + k + 1));
        }
    }
    let (line, col) = lines.last().map_or((1, 1), |l| (l.no + 1, 1));
    Err(ParseError {
        line,
        col,
        expected: "`end`".into(),
    })
}

fn category_body(kind: &str, body: &[Line]) -> Result<CategoryBody, ParseError> {
    let mut objects = Vec::new();
    let mut pairs = Vec::new();
    let mut triples = Vec::new();
    let mut identities = Vec::new();
    let mut compositions = Vec::new();
    let mut unit = None;
    let mut rows = Vec::new();
    for l in body {
        let mut c = Cursor::new(l);
        let kw = c.ident("a keyword")?;
        match (kind, kw.as_str()) {
            ("poset" | "monoid", "elements") | ("graph" | "explicit", "objects") => {
                objects.extend(c.rest())
            }
            ("poset", "le") => pairs.push((c.ident("an element")?, c.ident("an element")?)),
            ("monoid", "unit") => unit = Some(c.ident("an element")?),
            ("monoid", "row") => {
                let x = c.ident("an element")?;
                c.keyword("=")?;
                rows.push((x, c.rest()));
            }
            ("graph", "edge") | ("explicit", "morphism") => triples.push((
                c.ident("a morphism name")?,
                c.ident("a source object")?,
                c.ident("a target object")?,
            )),
            ("explicit", "identity") => {
                identities.push((c.ident("an object")?, c.ident("a morphism")?))
            }
            ("explicit", "compose") => {
                let g = c.ident("a morphism")?;
                let f = c.ident("a morphism")?;
                c.keyword("=")?;
                compositions.push((g, f, c.ident("a morphism")?));
            }
            _ => {
                c.pos = 0;
                let expected = match kind {
                    "poset" => "`elements` or `le`",
                    "monoid" => "`elements`, `unit` or `row`",
                    "graph" => "`objects` or `edge`",
                    _ => "`objects`, `morphism`, `identity` or `compose`",
                };
                return Err(c.err(expected));
            }
        }
        c.done()?;
    }
    Ok(match kind {
        "poset" => CategoryBody::Poset {
            elements: objects,
            le: pairs,
        },
        "monoid" => {
            let unit = unit.ok_or_else(|| ParseError {
                line: body.last().map_or(1, |l| l.no),
                col: 1,
                expected: "a `unit` line".into(),
            })?;
            CategoryBody::Monoid {
                elements: objects,
                unit,
                rows,
            }
        }
        "graph" => CategoryBody::Graph {
            objects,
            edges: triples,
        },
        _ => CategoryBody::Explicit {
            objects,
            morphisms: triples,
            identities,
            compositions,
        },
    })
}

fn table_body(sig: Sig, body: &[Line]) -> Result<FunctorBody, ParseError> {
    let n = sig.arity();
    let mut fibers = Vec::new();
    let mut actions = Vec::new();
    for l in body {
        let mut c = Cursor::new(l);
        match c.ident("`fiber` or `act`")?.as_str() {
            "fiber" => {
                let t = c.idents_until_eq();
                if t.len() != n {
                    return Err(c.err(&format!("{n} objects before `=`")));
                }
                c.keyword("=")?;
                fibers.push((t, c.rest()));
            }
            "act" => {
                let slot = c.number("a slot number")?;
                if slot >= n {
                    c.pos -= 1;
                    return Err(c.err(&format!("a slot below {n}")));
                }
                let mor = c.ident("a morphism")?;
                let ctx = c.idents_until_eq();
                if ctx.len() != n {
                    return Err(c.err(&format!("{n} context entries before `=`")));
                }
                let context: Vec<Option<String>> = ctx
                    .into_iter()
                    .map(|s| if s == "_" { None } else { Some(s) })
                    .collect();
                if context
                    .iter()
                    .enumerate()
                    .any(|(k, o)| o.is_none() != (k == slot))
                {
                    return Err(c.err(&format!("`_` exactly at slot {slot}")));
                }
                c.keyword("=")?;
                actions.push(Action {
                    slot,
                    mor,
                    context,
                    images: c.rest(),
                });
            }
            _ => {
                c.pos = 0;
                return Err(c.err("`fiber` or `act`"));
            }
        }
        c.done()?;
    }
    Ok(FunctorBody::Table {
        sig,
        fibers,
        actions,
    })
}

fn job(c: &mut Cursor) -> Result<Job, ParseError> {
    let kind = c.ident("a job kind")?;
    let method = |c: &mut Cursor| -> Result<Option<MethodChoice>, ParseError> {
        if c.peek() != Some("method") {
            return Ok(None);
        }
        c.pos += 1;
        let m = c.peek().and_then(MethodChoice::parse);
        if m.is_none() {
            return Err(c.err("`equalizer`, `restriction`, `twisted`, `weighted` or `all`"));
        }
        c.pos += 1;
        Ok(m)
    };
    Ok(match kind.as_str() {
        "end" => Job::End {
            functor: c.ident("a functor name")?,
            method: method(c)?,
        },
        "coend" => Job::Coend {
            functor: c.ident("a functor name")?,
            method: method(c)?,
        },
        "dinat" => Job::Dinat {
            source: c.ident("a functor name")?,
            target: c.ident("a functor name")?,
        },
        "kusarigama" => Job::Kusarigama {
            source: c.ident("a functor name")?,
            target: c.ident("a functor name")?,
        },
        "fubini" => Job::Fubini {
            left: c.ident("a functor name")?,
            right: c.ident("a functor name")?,
        },
        "day" => {
            let monoidal = c.ident("a monoidal structure name")?;
            let functors = c.rest();
            if functors.is_empty() {
                return Err(c.err("at least one functor name"));
            }
            Job::Day { monoidal, functors }
        }
        "check-all" => Job::CheckAll,
        _ => {
            c.pos -= 1;
            return Err(
                c.err("`end`, `coend`, `dinat`, `kusarigama`, `fubini`, `day` or `check-all`")
            );
        }
    })
}

fn line(out: &mut String, indent: bool, words: &[&str]) {
    if indent {
        out.push_str("  ");
    }
    out.push_str(&words.join(" "));
    out.push('\n');
}

fn sig_words(s: Sig) -> [String; 3] {
    ["sig".into(), s.p.to_string(), s.q.to_string()]
}

/// Canonical text: two-space indents, single spaces, one blank line between stanzas.
pub fn print(spec: &CatSpec) -> String {
    let mut out = String::new();
    for (k, item) in spec.items.iter().enumerate() {
        if k > 0 && !matches!((&spec.items[k - 1], item), (Item::Job(_), Item::Job(_))) {
            out.push('\n');
        }
        match item {
            Item::Category(d) => print_category(&mut out, d),
            Item::Functor(d) => print_functor(&mut out, d),
            Item::Monoidal(d) => {
                let _ = writeln!(out, "monoidal {} on {}", d.name, d.category);
            }
            Item::Job(j) => {
                let _ = writeln!(out, "job {}", job_text(j));
            }
        }
    }
    out
}

pub fn job_text(j: &Job) -> String {
    let with_method = |kind: &str, f: &str, m: &Option<MethodChoice>| match m {
        Some(m) => format!("{kind} {f} method {m}"),
        None => format!("{kind} {f}"),
    };
    match j {
        Job::End { functor, method } => with_method("end", functor, method),
        Job::Coend { functor, method } => with_method("coend", functor, method),
        Job::Dinat { source, target } => format!("dinat {source} {target}"),
        Job::Kusarigama { source, target } => format!("kusarigama {source} {target}"),
        Job::Fubini { left, right } => format!("fubini {left} {right}"),
        Job::Day { monoidal, functors } => format!("day {monoidal} {}", functors.join(" ")),
        Job::CheckAll => "check-all".into(),
    }
}

fn s(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn print_category(out: &mut String, d: &CategoryDecl) {
    let kind = match &d.body {
        CategoryBody::Poset { .. } => "poset",
        CategoryBody::Monoid { .. } => "monoid",
        CategoryBody::Graph { .. } => "graph",
        CategoryBody::Explicit { .. } => "explicit",
    };
    line(out, false, &["category", &d.name, kind]);
    match &d.body {
        CategoryBody::Poset { elements, le } => {
            line(out, true, &[&["elements"][..], &s(elements)].concat());
            for (a, b) in le {
                line(out, true, &["le", a, b]);
            }
        }
        CategoryBody::Monoid {
            elements,
            unit,
            rows,
        } => {
            line(out, true, &[&["elements"][..], &s(elements)].concat());
            line(out, true, &["unit", unit]);
            for (x, r) in rows {
                line(out, true, &[&["row", x.as_str(), "="][..], &s(r)].concat());
            }
        }
        CategoryBody::Graph { objects, edges } => {
            line(out, true, &[&["objects"][..], &s(objects)].concat());
            for (e, a, b) in edges {
                line(out, true, &["edge", e, a, b]);
            }
        }
        CategoryBody::Explicit {
            objects,
            morphisms,
            identities,
            compositions,
        } => {
            line(out, true, &[&["objects"][..], &s(objects)].concat());
            for (m, a, b) in morphisms {
                line(out, true, &["morphism", m, a, b]);
            }
            for (o, m) in identities {
                line(out, true, &["identity", o, m]);
            }
            for (g, f, h) in compositions {
                line(out, true, &["compose", g, f, "=", h]);
            }
        }
    }
    line(out, false, &["end"]);
}

fn print_functor(out: &mut String, d: &FunctorDecl) {
    let head = format!("functor {} on {}", d.name, d.category);
    let sw = |s: Sig| sig_words(s).join(" ");
    match &d.body {
        FunctorBody::Hom => {
            let _ = writeln!(out, "{head} hom");
        }
        FunctorBody::Point(s) => {
            let _ = writeln!(out, "{head} point {}", sw(*s));
        }
        FunctorBody::HomPi(s) => {
            let _ = writeln!(out, "{head} hompi {}", sw(*s));
        }
        FunctorBody::ProductHom(s) => {
            let _ = writeln!(out, "{head} producthom {}", sw(*s));
        }
        FunctorBody::Constant(s, xs) => {
            let mut l = format!("{head} constant {} =", sw(*s));
            for x in xs {
                l.push(' ');
                l.push_str(x);
            }
            let _ = writeln!(out, "{l}");
        }
        FunctorBody::Table {
            sig,
            fibers,
            actions,
        } => {
            let _ = writeln!(out, "{head} table {}", sw(*sig));
            for (t, xs) in fibers {
                let mut w = vec!["fiber"];
                w.extend(t.iter().map(String::as_str));
                w.push("=");
                w.extend(xs.iter().map(String::as_str));
                line(out, true, &w);
            }
            for a in actions {
                let slot = a.slot.to_string();
                let mut w = vec!["act", slot.as_str(), a.mor.as_str()];
                w.extend(a.context.iter().map(|o| o.as_deref().unwrap_or("_")));
                w.push("=");
                w.extend(a.images.iter().map(String::as_str));
                line(out, true, &w);
            }
            line(out, false, &["end"]);
        }
    }
}
