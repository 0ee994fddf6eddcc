//! Depth-first enumeration of assignments satisfying constraints checked incrementally.

use crate::error::{Error, Result};
use crate::Limits;

/// Enumerates all assignments `x_0..x_{n-1}` with `x_v < domains[v]` such that
/// `check(v, &x[..=v])` holds for every `v`, in lexicographic order.
///
/// `candidates(v, &x[..v])` may narrow the values tried for `v` to a sorted list; it must
/// never drop a value that `check` would accept.
pub fn solve<C, P>(
    domains: &[usize],
    check: C,
    candidates: P,
    lim: &Limits,
    what: &str,
) -> Result<Vec<Vec<usize>>>
where
    C: Fn(usize, &[usize]) -> bool,
    P: Fn(usize, &[usize]) -> Option<Vec<usize>>,
{
    let n = domains.len();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut out = Vec::new();
    let mut asg = vec![0usize; n];
    let mut next = vec![0usize; n];
    let mut lists: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut nodes: usize = 0;
    let mut v = 0;
    lists[0] = candidates(0, &asg[..0]);
    loop {
        let cand = match &lists[v] {
            Some(l) => l.get(next[v]).copied(),
            None => (next[v] < domains[v]).then_some(next[v]),
        };
        match cand {
            Some(c) => {
                next[v] += 1;
                nodes += 1;
                if nodes > lim.cap {
                    return Err(Error::SizeCapExceeded {
                        what: format!("{what} search"),
                        size: nodes as u128,
                        cap: lim.cap,
                    });
                }
                asg[v] = c;
                if check(v, &asg[..=v]) {
                    if v + 1 == n {
                        out.push(asg.clone());
                        if out.len() > lim.cap {
                            return Err(Error::SizeCapExceeded {
                                what: what.to_string(),
                                size: out.len() as u128,
                                cap: lim.cap,
                            });
                        }
                    } else {
                        v += 1;
                        next[v] = 0;
                        lists[v] = candidates(v, &asg[..v]);
                    }
                }
            }
            None => {
                if v == 0 {
                    break;
                }
                v -= 1;
            }
        }
    }
    Ok(out)
}

/// `maps[ma][x_a] == maps[mb][x_b]`.
#[derive(Clone, Copy, Debug)]
pub struct Eq {
    pub a: usize,
    pub ma: usize,
    pub b: usize,
    pub mb: usize,
}

/// A system of equations between images of variables under tabulated maps.
#[derive(Clone, Debug, Default)]
pub struct EqSystem {
    pub domains: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
    pub eqs: Vec<Eq>,
}

impl EqSystem {
    pub fn new(domains: Vec<usize>) -> Self {
        EqSystem {
            domains,
            maps: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn add_map(&mut self, table: Vec<usize>) -> usize {
        self.maps.push(table);
        self.maps.len() - 1
    }

    pub fn identity_map(&mut self, n: usize) -> usize {
        self.add_map((0..n).collect())
    }

    pub fn require(&mut self, a: usize, ma: usize, b: usize, mb: usize) {
        self.eqs.push(Eq { a, ma, b, mb });
    }

    /// All solutions in lexicographic order.
    pub fn solve(&self, lim: &Limits, what: &str) -> Result<Vec<Vec<usize>>> {
        let n = self.domains.len();
        // Equations on a single variable filter its domain up front.
        let mut unary: Vec<Option<Vec<usize>>> = vec![None; n];
        // For each variable, equations against earlier variables: (earlier var, its map, own map).
        let mut back: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for e in &self.eqs {
            if e.a == e.b {
                let keep = unary[e.a]
                    .take()
                    .unwrap_or_else(|| (0..self.domains[e.a]).collect());
                let (fa, fb) = (&self.maps[e.ma], &self.maps[e.mb]);
                unary[e.a] = Some(keep.into_iter().filter(|&x| fa[x] == fb[x]).collect());
            } else if e.a < e.b {
                back[e.b].push((e.a, e.ma, e.mb));
            } else {
                back[e.a].push((e.b, e.mb, e.ma));
            }
        }
        // preimage[m][y] = sorted x with maps[m][x] = y.
        let mut needed = vec![false; self.maps.len()];
        for l in &back {
            for &(_, _, own) in l {
                needed[own] = true;
            }
        }
        let preimage: Vec<Vec<Vec<usize>>> = self
            .maps
            .iter()
            .zip(&needed)
            .map(|(m, &need)| {
                if !need {
                    return Vec::new();
                }
                let top = m.iter().copied().max().map_or(0, |x| x + 1);
                let mut p = vec![Vec::new(); top];
                for (x, &y) in m.iter().enumerate() {
                    p[y].push(x);
                }
                p
            })
            .collect();
        solve(
            &self.domains,
            |_, _| true,
            |v, asg| {
                let mut cur: Option<Vec<usize>> = unary[v].clone();
                for &(w, mw, own) in &back[v] {
                    let y = self.maps[mw][asg[w]];
                    let pre: &[usize] = preimage[own].get(y).map_or(&[], |p| p.as_slice());
                    cur = Some(match cur {
                        None => pre.to_vec(),
                        Some(c) => intersect(&c, pre),
                    });
                    if cur.as_ref().is_some_and(|c| c.is_empty()) {
                        break;
                    }
                }
                cur
            },
            lim,
            what,
        )
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_product_in_lex_order() {
        let s = solve(&[2, 3], |_, _| true, |_, _| None, &Limits::default(), "t").unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s[1], vec![0, 1]);
        assert_eq!(s[3], vec![1, 0]);
    }

    #[test]
    fn empty_domain_gives_no_solutions() {
        let s = solve(&[2, 0], |_, _| true, |_, _| None, &Limits::default(), "t").unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn candidate_lists_respected() {
        // x1 = x0, x2 != x1
        let s = solve(
            &[2, 2, 2],
            |v, a| match v {
                1 => a[1] == a[0],
                2 => a[2] != a[1],
                _ => true,
            },
            |v, a| (v == 1).then(|| vec![a[0]]),
            &Limits::default(),
            "t",
        )
        .unwrap();
        assert_eq!(s, vec![vec![0, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn cap_is_enforced() {
        let lim = Limits { cap: 10 };
        let e = solve(&[3, 3, 3], |_, _| true, |_, _| None, &lim, "t").unwrap_err();
        assert!(matches!(e, Error::SizeCapExceeded { .. }));
    }

    #[test]
    fn eq_system_matches_brute_force() {
        // x0 mod 2 == x1 mod 2, x2 == x1 / 2, x0 != 3 via a unary map.
        let mut sys = EqSystem::new(vec![4, 4, 2]);
        let m2 = sys.add_map(vec![0, 1, 0, 1]);
        let half = sys.add_map(vec![0, 0, 1, 1]);
        let id2 = sys.identity_map(2);
        let not3 = sys.add_map(vec![0, 0, 0, 1]);
        let zero = sys.add_map(vec![0; 4]);
        sys.require(0, m2, 1, m2);
        sys.require(2, id2, 1, half);
        sys.require(0, not3, 0, zero);
        let got = sys.solve(&Limits::default(), "t").unwrap();
        let mut want = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..2 {
                    if a % 2 == b % 2 && c == b / 2 && a != 3 {
                        want.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(got, want);
    }
}
