use std::collections::BTreeSet;

use gramsey::finish::{enumerate_bad_events, finish, BadEvent, FinishConfig};
use gramsey::pack::{pack_bipartite, pack_complete, pack_hyper, Family, PackConfig, PackState};
use gramsey::verify::{check, CheckSpec};
use gramsey::{stream_copies, Color, Coloring, CopyKind, EdgeId, HostSpec, Vertex, UNCOLORED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stage one from a packer, then leftover edges colored from `c2` fresh ids.
fn instance(seed: u64) -> (PackState, Coloring, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stage = match seed % 4 {
        0 | 1 => {
            let k = rng.gen_range(3..6u32);
            let n = rng.gen_range((2 * (k - 1)).max(8)..15u32);
            let ell = rng.gen_range(k..k + 3);
            pack_complete(n, k, &PackConfig::new(seed).with_ell(ell)).unwrap()
        }
        2 => pack_bipartite(rng.gen_range(4..8u32), 3, &PackConfig::new(seed)).unwrap(),
        _ => pack_hyper(rng.gen_range(6..10u32), 3, &PackConfig::new(seed).with_delta(0.2)).unwrap(),
    };
    let c2 = rng.gen_range(2..7u32);
    let leftover: Vec<bool> = stage.coloring.colors().iter().map(|&c| c == UNCOLORED).collect();
    let mut total = stage.coloring.clone();
    for (i, &l) in leftover.iter().enumerate() {
        if l {
            total.set(EdgeId(i as u64), stage.palette + rng.gen_range(0..c2));
        }
    }
    (stage, total, leftover)
}

fn cycle_edges(host: &HostSpec, cycle: &[Vertex]) -> Vec<EdgeId> {
    (0..cycle.len()).map(|i| host.pair_rank(cycle[i], cycle[(i + 1) % cycle.len()])).collect()
}

/// Firing events by direct enumeration of every copy.
fn naive_events(c: &Coloring, leftover: &[bool], family: Family) -> BTreeSet<BadEvent> {
    let host = *c.host();
    let mut out = BTreeSet::new();
    let distinct = |es: &[EdgeId]| es.iter().map(|&e| c.get(e)).collect::<BTreeSet<Color>>().len();
    match family {
        Family::HyperCliques { k } => {
            let bad = (k as usize + 2) * (k as usize + 1) / 2 - 2;
            let mut s = stream_copies(&host, CopyKind::CliqueSet(k + 2)).unwrap();
            while let Some(x) = s.next_copy() {
                let x = x.to_vec();
                let es = gramsey::enumerate::SubgraphCopy(x.clone()).edges(&host, CopyKind::CliqueSet(k + 2));
                if es.iter().any(|e| leftover[e.index()]) && distinct(&es) <= bad {
                    out.insert(BadEvent::HK { set: x });
                }
            }
        }
        _ => {
            let lens: Vec<u32> = match family {
                Family::Cycles { k, ell } => (k..=ell).collect(),
                Family::BipartiteCycles { k } => vec![2 * k],
                _ => unreachable!(),
            };
            let left: Vec<EdgeId> = (0..leftover.len()).filter(|&i| leftover[i]).map(|i| EdgeId(i as u64)).collect();
            for (i, &e) in left.iter().enumerate() {
                let ev = host.unrank_edge(e).unwrap();
                for &f in &left[i + 1..] {
                    let fv = host.unrank_edge(f).unwrap();
                    if ev.iter().any(|v| fv.contains(v)) && c.get(e) == c.get(f) {
                        out.insert(BadEvent::A { e, f });
                    }
                }
            }
            for m in lens {
                if m > host.num_vertices() {
                    continue;
                }
                let mut s = stream_copies(&host, CopyKind::Cycle(m)).unwrap();
                while let Some(cyc) = s.next_copy() {
                    let cyc = cyc.to_vec();
                    let es = cycle_edges(&host, &cyc);
                    let t = es.iter().filter(|e| leftover[e.index()]).count();
                    if t == 0 || distinct(&es) > 2 {
                        continue;
                    }
                    if t == es.len() {
                        let proper = (0..es.len()).all(|i| c.get(es[i]) != c.get(es[(i + 1) % es.len()]));
                        if proper && distinct(&es) == 2 {
                            out.insert(BadEvent::B { cycle: cyc });
                        }
                    } else {
                        out.insert(BadEvent::C { cycle: cyc });
                    }
                }
            }
        }
    }
    out
}

fn leftover_proper(c: &Coloring, leftover: &[bool]) -> bool {
    let host = *c.host();
    if host.k() != 2 {
        return true;
    }
    let left: Vec<(EdgeId, Vec<Vertex>)> = host.edges().filter(|(e, _)| leftover[e.index()]).collect();
    left.iter().enumerate().all(|(i, (e, ev))| {
        left[i + 1..].iter().all(|(f, fv)| !ev.iter().any(|v| fv.contains(v)) || c.get(*e) != c.get(*f))
    })
}

#[test]
fn bad_events_match_brute_force_and_verify() {
    let mut empty = 0;
    for seed in 0..100 {
        let (stage, total, leftover) = instance(seed);
        let events = enumerate_bad_events(&total, &leftover, stage.family).unwrap();
        let naive: Vec<BadEvent> = naive_events(&total, &leftover, stage.family).into_iter().collect();
        let a: BTreeSet<_> = events.iter().cloned().collect();
        let b: BTreeSet<_> = naive.iter().cloned().collect();
        assert!(a == b, "seed {seed}: extra {:?} missing {:?}", a.difference(&b).take(4).collect::<Vec<_>>(), b.difference(&a).take(4).collect::<Vec<_>>());
        assert_eq!(events, naive);
        let kinds = stage.family.targets();
        let ok = check(&total, &CheckSpec::exhaustive(kinds)).unwrap().ok;
        assert_eq!(events.is_empty(), ok && leftover_proper(&total, &leftover), "seed {seed}");
        if events.is_empty() {
            empty += 1;
        }
    }
    // Both sides of the equivalence occur.
    assert!(empty > 0 && empty < 100, "{empty}");
}

#[test]
fn finish_outputs_verify() {
    for seed in 0..12 {
        let (stage, _, _) = instance(seed);
        let out = finish(&stage, &FinishConfig::new(seed)).unwrap();
        assert!(out.coloring.is_total());
        for (i, &c) in stage.coloring.colors().iter().enumerate() {
            if c != UNCOLORED {
                assert_eq!(out.coloring.colors()[i], c);
            } else {
                assert!((out.fresh_base..out.fresh_base + out.c2).contains(&out.coloring.colors()[i]));
            }
        }
        let r = check(&out.coloring, &CheckSpec::exhaustive(stage.family.targets())).unwrap();
        assert!(r.ok, "seed {seed}: {:?}", r.first_violation());
        assert_eq!(out, finish(&stage, &FinishConfig::new(seed)).unwrap());
    }
}
