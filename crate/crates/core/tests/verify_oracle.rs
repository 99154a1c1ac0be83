use std::collections::BTreeSet;

use gramsey::verify::{check, CheckSpec};
use gramsey::{count_copies, stream_copies, Coloring, CopyKind, HostMode, HostSpec, Vertex, UNCOLORED};
use proptest::prelude::*;

/// Every injective sequence of `len` vertices.
fn sequences(nv: u32, len: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(nv: u32, len: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..nv {
            if !cur.contains(&v) {
                cur.push(v);
                rec(nv, len, cur, out);
                cur.pop();
            }
        }
    }
    rec(nv, len, &mut cur, &mut out);
    out
}

/// Lexicographically least representative under the pattern's symmetries.
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
                    let cand: Vec<_> = (0..m).map(|i| base[(i + r) % m]).collect();
                    best = best.min(cand);
                }
            }
            best
        }
    }
}

fn naive_edges(host: &HostSpec, kind: CopyKind, seq: &[Vertex]) -> Option<Vec<Vec<Vertex>>> {
    let k = host.k() as usize;
    let mut edges = Vec::new();
    match kind {
        CopyKind::Path(_) => {
            for w in seq.windows(2) {
                edges.push(vec![w[0], w[1]]);
            }
        }
        CopyKind::Cycle(_) | CopyKind::TightCycle(_) => {
            let m = seq.len();
            let w = if matches!(kind, CopyKind::Cycle(_)) { 2 } else { k };
            for i in 0..m {
                edges.push((0..w).map(|j| seq[(i + j) % m]).collect());
            }
        }
        CopyKind::CliqueSet(_) => {
            let m = seq.len();
            for mask in 0u32..(1 << m) {
                if mask.count_ones() as usize == k {
                    edges.push((0..m).filter(|i| mask >> i & 1 == 1).map(|i| seq[i]).collect());
                }
            }
        }
    }
    for e in &mut edges {
        e.sort();
        if !host.is_edge(e) {
            return None;
        }
    }
    Some(edges)
}

struct Naive {
    copies: u128,
    violations: u128,
    first: Option<Vec<Vertex>>,
}

fn naive_check(c: &Coloring, kind: CopyKind, q: u32) -> Naive {
    let host = c.host();
    let mut seen = BTreeSet::new();
    for seq in sequences(host.num_vertices(), kind.order()) {
        if naive_edges(host, kind, &seq).is_some() {
            seen.insert(least_form(kind, &seq));
        }
    }
    let mut out = Naive { copies: seen.len() as u128, violations: 0, first: None };
    for copy in seen {
        let edges = naive_edges(host, kind, &copy).unwrap();
        let colors: Vec<_> = edges.iter().map(|e| c.get(host.rank_edge(e).unwrap())).collect();
        if colors.contains(&UNCOLORED) {
            continue;
        }
        let d: BTreeSet<_> = colors.into_iter().collect();
        if (d.len() as u32) < q {
            out.violations += 1;
            out.first.get_or_insert(copy);
        }
    }
    out
}

fn cases() -> Vec<(HostSpec, CopyKind)> {
    vec![
        (HostSpec::complete(6), CopyKind::Cycle(3)),
        (HostSpec::complete(6), CopyKind::Cycle(4)),
        (HostSpec::complete(6), CopyKind::Cycle(5)),
        (HostSpec::complete(6), CopyKind::Path(4)),
        (HostSpec::complete(6), CopyKind::Path(5)),
        (HostSpec::complete(6), CopyKind::CliqueSet(4)),
        (HostSpec::bipartite(3), CopyKind::Cycle(4)),
        (HostSpec::bipartite(3), CopyKind::Cycle(6)),
        (HostSpec::bipartite(3), CopyKind::Path(4)),
        (HostSpec::bipartite(3), CopyKind::Path(5)),
        (HostSpec::uniform(6, 3).unwrap(), CopyKind::CliqueSet(4)),
        (HostSpec::uniform(6, 3).unwrap(), CopyKind::TightCycle(4)),
        (HostSpec::uniform(6, 3).unwrap(), CopyKind::TightCycle(5)),
    ]
}

#[test]
fn copy_counts_match_brute_force() {
    let mut extra = cases();
    extra.push((HostSpec::complete(7), CopyKind::Cycle(6)));
    extra.push((HostSpec::bipartite(4), CopyKind::Path(6)));
    extra.push((HostSpec::uniform(7, 4).unwrap(), CopyKind::TightCycle(6)));
    for (host, kind) in extra {
        let naive = naive_check(&Coloring::rainbow(host), kind, 1);
        assert_eq!(count_copies(&host, kind).unwrap(), naive.copies, "{host} {kind:?}");
        let streamed: Vec<_> = stream_copies(&host, kind).unwrap().map(|c| c.0).collect();
        assert_eq!(streamed.len() as u128, naive.copies);
        for s in &streamed {
            assert_eq!(&least_form(kind, s), s, "{host} {kind:?} not least form");
        }
    }
}

fn random_coloring(host: HostSpec, palette: u32, colors: &[u32], holes: &[bool]) -> Coloring {
    let m = host.edge_count() as usize;
    let v = (0..m)
        .map(|i| if holes[i % holes.len()] { UNCOLORED } else { colors[i % colors.len()] % palette })
        .collect();
    Coloring::from_colors(host, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn check_agrees_with_naive(
        case in 0usize..13,
        palette in 1u32..6,
        colors in proptest::collection::vec(0u32..100, 40),
        holes in proptest::collection::vec(proptest::bool::weighted(0.1), 17),
        q in 1u32..6,
        threads in 1usize..4,
    ) {
        let (host, kind) = cases()[case];
        let c = random_coloring(host, palette, &colors, &holes);
        let q = q.min(kind.size(&host) as u32);
        let naive = naive_check(&c, kind, q);
        let r = check(&c, &CheckSpec::exhaustive(vec![(kind, q)]).with_threads(threads)).unwrap();
        let k = &r.kinds[0];
        prop_assert_eq!(k.copies_checked, naive.copies);
        prop_assert_eq!(k.violations, naive.violations);
        prop_assert_eq!(k.first_witness.as_ref().map(|w| w.copy.0.clone()), naive.first);
        prop_assert_eq!(r.ok, naive.violations == 0);
        if host.mode() != HostMode::UniformComplete {
            prop_assert!(r.improper_pair.is_none());
        }
    }
}
