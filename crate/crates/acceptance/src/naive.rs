//! Reference checker: every injective vertex sequence, reduced to the least
//! form under the pattern's symmetries, judged on its own edge list.

use std::collections::BTreeSet;

use gramsey::{Coloring, CopyKind, HostSpec, Vertex, UNCOLORED};

fn sequences(nv: u32, len: usize, f: &mut impl FnMut(&[Vertex])) {
    fn rec(nv: u32, len: usize, cur: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if cur.len() == len {
            f(cur);
            return;
        }
        for v in 0..nv {
            if !cur.contains(&v) {
                cur.push(v);
                rec(nv, len, cur, f);
                cur.pop();
            }
        }
    }
    rec(nv, len, &mut Vec::new(), f);
}

fn least_form(kind: CopyKind, seq: &[Vertex]) -> Vec<Vertex> {
    match kind {
        CopyKind::CliqueSet(_) => {
            let mut s = seq.to_vec();
            s.sort();
            s
        }
        CopyKind::Path(_) => {
            let r: Vec<_> = seq.iter().rev().copied().collect();
            seq.to_vec().min(r)
        }
        CopyKind::Cycle(_) | CopyKind::TightCycle(_) => {
            let m = seq.len();
            let mut best = seq.to_vec();
            for rev in [false, true] {
                let base: Vec<_> = if rev { seq.iter().rev().copied().collect() } else { seq.to_vec() };
                for r in 0..m {
                    best = best.min((0..m).map(|i| base[(i + r) % m]).collect());
                }
            }
            best
        }
    }
}

fn edges(host: &HostSpec, kind: CopyKind, seq: &[Vertex]) -> Option<Vec<Vec<Vertex>>> {
    let k = host.k() as usize;
    let m = seq.len();
    let mut out: Vec<Vec<Vertex>> = match kind {
        CopyKind::Path(_) => seq.windows(2).map(|w| w.to_vec()).collect(),
        CopyKind::Cycle(_) => (0..m).map(|i| vec![seq[i], seq[(i + 1) % m]]).collect(),
        CopyKind::TightCycle(_) => (0..m).map(|i| (0..k).map(|j| seq[(i + j) % m]).collect()).collect(),
        CopyKind::CliqueSet(_) => (0u32..1 << m)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| seq[i]).collect())
            .collect(),
    };
    for e in &mut out {
        e.sort();
        if !host.is_edge(e) {
            return None;
        }
    }
    Some(out)
}

pub struct Naive {
    pub copies: u128,
    pub violations: u128,
    pub violating: BTreeSet<Vec<Vertex>>,
}

pub fn check(c: &Coloring, kind: CopyKind, q: u32) -> Naive {
    let host = *c.host();
    let mut forms = BTreeSet::new();
    sequences(host.num_vertices(), kind.order(), &mut |seq| {
        if edges(&host, kind, seq).is_some() {
            forms.insert(least_form(kind, seq));
        }
    });
    let mut out = Naive { copies: forms.len() as u128, violations: 0, violating: BTreeSet::new() };
    for copy in forms {
        let colors: Vec<_> = edges(&host, kind, &copy)
            .expect("valid copy")
            .iter()
            .map(|e| c.get(host.rank_edge(e).expect("edge")))
            .collect();
        if colors.contains(&UNCOLORED) {
            continue;
        }
        let d: BTreeSet<_> = colors.into_iter().collect();
        if (d.len() as u32) < q {
            out.violations += 1;
            out.violating.insert(copy);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_small_copies() {
        let rainbow = |h| Coloring::rainbow(h);
        assert_eq!(check(&rainbow(HostSpec::complete(5)), CopyKind::Cycle(5), 1).copies, 12);
        assert_eq!(check(&rainbow(HostSpec::complete(5)), CopyKind::Path(3), 1).copies, 30);
        assert_eq!(check(&rainbow(HostSpec::bipartite(3)), CopyKind::Cycle(6), 1).copies, 6);
        let mono = Coloring::monochromatic(HostSpec::complete(5));
        assert_eq!(check(&mono, CopyKind::Cycle(4), 3).violations, 15);
    }
}
