//! End-to-end constructions: stage-1 packing plus finishing with retries, and
//! the explicit clique-block colorings.

use crate::coloring::Coloring;
use crate::enumerate::CopyKind;
use crate::error::{Error, Result};
use crate::finish::{finish, FinishConfig};
use crate::pack::{pack_bipartite, pack_complete, pack_hyper, Family, PackConfig, PackState, Sampling};
use crate::paths::{p6_from_packing, p8_from_packing, pack_cliques, CliquePacking};
use crate::verify::{leftover_stats, LeftoverStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Cycles { k: u32, ell: u32 },
    BipartiteCycles { k: u32 },
    HyperCliques { k: u32 },
    P6,
    P7,
    P8Proper,
}

impl Construction {
    /// Parses a family name as used on the command line.
    pub fn parse(name: &str, k: Option<u32>, ell: Option<u32>) -> Result<Self> {
        let need_k = || k.ok_or_else(|| Error::Config(format!("family {name} needs k")));
        Ok(match name {
            "cycles" => {
                let k = need_k()?;
                Construction::Cycles { k, ell: ell.unwrap_or(k) }
            }
            "bipartite-cycles" => Construction::BipartiteCycles { k: need_k()? },
            "hyper-cliques" => Construction::HyperCliques { k: need_k()? },
            "p6" => Construction::P6,
            "p7" => Construction::P7,
            "p8proper" => Construction::P8Proper,
            _ => return Err(Error::Config(format!("unknown family {name}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Construction::Cycles { .. } => "cycles",
            Construction::BipartiteCycles { .. } => "bipartite-cycles",
            Construction::HyperCliques { .. } => "hyper-cliques",
            Construction::P6 => "p6",
            Construction::P7 => "p7",
            Construction::P8Proper => "p8proper",
        }
    }

    /// Kinds and thresholds the output must satisfy, and whether it must be proper.
    pub fn targets(&self) -> (Vec<(CopyKind, u32)>, bool) {
        match *self {
            Construction::Cycles { k, ell } => (Family::Cycles { k, ell }.targets(), false),
            Construction::BipartiteCycles { k } => (Family::BipartiteCycles { k }.targets(), false),
            Construction::HyperCliques { k } => (Family::HyperCliques { k }.targets(), false),
            Construction::P6 => (vec![(CopyKind::Path(6), 4)], false),
            Construction::P7 => (vec![(CopyKind::Path(7), 5)], false),
            Construction::P8Proper => (vec![(CopyKind::Path(8), 5)], true),
        }
    }

    fn family(&self) -> Option<Family> {
        match *self {
            Construction::Cycles { k, ell } => Some(Family::Cycles { k, ell }),
            Construction::BipartiteCycles { k } => Some(Family::BipartiteCycles { k }),
            Construction::HyperCliques { k } => Some(Family::HyperCliques { k }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructConfig {
    pub seed: u64,
    pub delta: f64,
    pub sampling: Sampling,
    pub c2: Option<u32>,
    pub max_resamples: u64,
    /// Finishing attempts, each with twice the previous fresh palette.
    pub max_attempts: u32,
    pub stage1_only: bool,
    pub exact_when_possible: bool,
}

impl ConstructConfig {
    pub fn new(seed: u64) -> Self {
        ConstructConfig {
            seed,
            delta: 0.15,
            sampling: Sampling::Anchored,
            c2: None,
            max_resamples: 1_000_000,
            max_attempts: 6,
            stage1_only: false,
            exact_when_possible: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub seed: u64,
    pub c2: u32,
    pub resamples: u64,
    pub finished: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructReport {
    pub construction: Construction,
    pub n: u32,
    /// Normalized output; partial only with `stage1_only`.
    pub coloring: Coloring,
    pub stage1: Option<PackState>,
    pub leftover: Option<LeftoverStats>,
    pub attempts: Vec<Attempt>,
    pub packing: Option<CliquePacking>,
}

impl ConstructReport {
    /// Edges colored by stage one, and all edges.
    pub fn coverage(&self) -> Option<(u64, u64)> {
        self.stage1.as_ref().map(PackState::coverage)
    }
}

/// Seed for finishing attempt `i`.
pub fn attempt_seed(seed: u64, i: u32) -> u64 {
    seed ^ u64::from(i).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn construct(what: Construction, n: u32, cfg: &ConstructConfig) -> Result<ConstructReport> {
    let mut report = ConstructReport {
        construction: what,
        n,
        coloring: Coloring::uncolored(crate::host::HostSpec::complete(n.max(1))),
        stage1: None,
        leftover: None,
        attempts: Vec::new(),
        packing: None,
    };
    let Some(family) = what.family() else {
        let (mut coloring, packing) = match what {
            Construction::P6 => {
                let p = pack_cliques(n, 4, cfg.seed, cfg.exact_when_possible)?;
                (p6_from_packing(&p), Some(p))
            }
            Construction::P8Proper => {
                let p = pack_cliques(n, 6, cfg.seed, cfg.exact_when_possible)?;
                (p8_from_packing(&p), Some(p))
            }
            _ => (crate::paths::color_p7(n), None),
        };
        coloring.normalize();
        report.coloring = coloring;
        report.packing = packing;
        return Ok(report);
    };

    let pcfg = PackConfig::new(cfg.seed).with_delta(cfg.delta).with_sampling(cfg.sampling);
    let stage1 = match family {
        Family::Cycles { k, ell } => pack_complete(n, k, &pcfg.with_ell(ell))?,
        Family::BipartiteCycles { k } => pack_bipartite(n, k, &pcfg)?,
        Family::HyperCliques { k } => pack_hyper(n, k, &pcfg)?,
    };
    report.leftover = Some(leftover_stats(&stage1.coloring));
    if cfg.stage1_only {
        report.coloring = stage1.coloring.clone();
        report.stage1 = Some(stage1);
        return Ok(report);
    }

    if cfg.max_attempts == 0 {
        return Err(Error::Config("max_attempts must be at least 1".into()));
    }
    let first = FinishConfig { seed: cfg.seed, c2: cfg.c2, max_resamples: cfg.max_resamples, delta: cfg.delta };
    let mut c2 = first.fresh_palette(&stage1)?;
    let mut last_err = None;
    for i in 0..cfg.max_attempts {
        let seed = attempt_seed(cfg.seed, i);
        let fcfg = FinishConfig { seed, c2: Some(c2), ..first.clone() };
        match finish(&stage1, &fcfg) {
            Ok(out) => {
                report.attempts.push(Attempt { seed, c2, resamples: out.resamples, finished: true });
                let mut coloring = out.coloring;
                coloring.normalize();
                report.coloring = coloring;
                report.stage1 = Some(stage1);
                return Ok(report);
            }
            Err(e @ Error::NotFinished { resamples, .. }) => {
                report.attempts.push(Attempt { seed, c2, resamples, finished: false });
                c2 = c2.saturating_mul(2);
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check, CheckSpec};

    fn valid(r: &ConstructReport) -> bool {
        let (kinds, proper) = r.construction.targets();
        let mut spec = CheckSpec::exhaustive(kinds);
        if proper {
            spec = spec.proper();
        }
        check(&r.coloring, &spec).unwrap().ok
    }

    #[test]
    fn every_family_verifies() {
        let cases = [
            (Construction::Cycles { k: 4, ell: 5 }, 14),
            (Construction::BipartiteCycles { k: 3 }, 8),
            (Construction::HyperCliques { k: 3 }, 9),
            (Construction::P6, 13),
            (Construction::P7, 9),
            (Construction::P8Proper, 8),
        ];
        for (what, n) in cases {
            let r = construct(what, n, &ConstructConfig::new(3)).unwrap();
            assert!(r.coloring.is_total(), "{what:?}");
            assert!(valid(&r), "{what:?}");
            assert_eq!(r.coloring.palette_size(), r.coloring.distinct_colors());
            assert_eq!(r, construct(what, n, &ConstructConfig::new(3)).unwrap());
        }
    }

    #[test]
    fn retry_doubles_palette() {
        let mut cfg = ConstructConfig::new(5);
        cfg.c2 = Some(2);
        cfg.max_resamples = 1;
        cfg.max_attempts = 12;
        let r = construct(Construction::Cycles { k: 4, ell: 4 }, 16, &cfg).unwrap();
        assert!(r.attempts.len() > 1);
        for w in r.attempts.windows(2) {
            assert_eq!(w[1].c2, 2 * w[0].c2);
            assert!(!w[0].finished);
            assert_ne!(w[0].seed, w[1].seed);
        }
        assert!(r.attempts.last().unwrap().finished);
        assert!(valid(&r));
    }

    #[test]
    fn stage1_only_is_partial() {
        let mut cfg = ConstructConfig::new(1);
        cfg.stage1_only = true;
        let r = construct(Construction::Cycles { k: 4, ell: 4 }, 20, &cfg).unwrap();
        assert!(!r.coloring.is_total());
        assert!(r.attempts.is_empty());
        let (c, m) = r.coverage().unwrap();
        assert_eq!(c, r.coloring.colored_count());
        assert_eq!(m, 190);
    }

    #[test]
    fn parse_names() {
        assert_eq!(Construction::parse("cycles", Some(4), None).unwrap(), Construction::Cycles { k: 4, ell: 4 });
        assert_eq!(Construction::parse("p8proper", None, None).unwrap(), Construction::P8Proper);
        assert!(Construction::parse("cycles", None, None).is_err());
        assert!(Construction::parse("nope", Some(3), None).is_err());
    }
}
