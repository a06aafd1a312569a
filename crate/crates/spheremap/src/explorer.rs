//! Rank-spectrum search over tensoring steps.
//!
//! Breadth-first search from the canonical polynomial: each state expands by
//! tensoring at every support monomial with every allowed fraction, pruned by
//! a total-degree cap and deduplicated on the exact canonical polynomial
//! (two polynomials of equal rank have different futures, so rank is not a
//! valid dedup key). Expansion order is fixed — descending graded-lex over
//! targets, ascending fractions — so a given configuration always produces
//! the identical report.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::canonical::{canonical_polynomial, CanonicalError};
use crate::groups::{DiagonalCyclicGroup, GroupError};
use crate::poly::parse::parse_monomial;
use crate::poly::{MultiIndex, ParseError, PolyError, Polynomial};
use crate::tensor::{tensor_at, ConstructionTrace, TensorError, TensorStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("group is not admissible")]
    NotAdmissible,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("script step {step} refers to {target}, which is not in the running support")]
    MissingTarget { step: usize, target: MultiIndex },
    #[error("script line {line}: {message}")]
    Script { line: usize, message: String },
}

/// Search configuration. The degree cap defaults to
/// `deg(f) * (max_depth + 1)`, the most a chain of `max_depth` steps can
/// reach, and the fraction set defaults to `{1/2, 1}` — the split and the
/// full multiply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_degree: Option<u32>,
    pub allowed_fractions: Vec<BigRational>,
    pub rank_window: Option<(usize, usize)>,
}

impl SearchConfig {
    pub fn new(max_depth: usize) -> Self {
        SearchConfig {
            max_depth,
            max_degree: None,
            allowed_fractions: default_fractions(),
            rank_window: None,
        }
    }

    pub fn with_max_degree(mut self, cap: u32) -> Self {
        self.max_degree = Some(cap);
        self
    }

    pub fn with_fractions(mut self, fractions: Vec<BigRational>) -> Self {
        self.allowed_fractions = fractions;
        self
    }

    pub fn with_rank_window(mut self, lo: usize, hi: usize) -> Self {
        self.rank_window = Some((lo, hi));
        self
    }

    pub fn to_json(&self) -> Result<Value, PolyError> {
        let fracs = self
            .allowed_fractions
            .iter()
            .map(|f| {
                use num_traits::ToPrimitive;
                let num = f.numer().to_i64().ok_or(PolyError::CoefficientTooLarge)?;
                let den = f.denom().to_i64().ok_or(PolyError::CoefficientTooLarge)?;
                Ok(json!([num, den]))
            })
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(json!({
            "max_depth": self.max_depth,
            "max_degree": self.max_degree,
            "fractions": fracs,
            "rank_window": self.rank_window.map(|(lo, hi)| json!([lo, hi])),
        }))
    }
}

pub fn default_fractions() -> Vec<BigRational> {
    vec![
        BigRational::new(BigInt::one(), BigInt::from(2)),
        BigRational::one(),
    ]
}

/// Result of a spectrum search: for every achieved rank, the minimal-depth
/// witness trace, plus the number of new states discovered per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub group: DiagonalCyclicGroup,
    pub achieved: BTreeMap<usize, ConstructionTrace>,
    pub frontier_size_per_level: Vec<usize>,
    pub config: SearchConfig,
}

impl SpectrumReport {
    pub fn achieved_ranks(&self) -> Vec<usize> {
        self.achieved.keys().copied().collect()
    }

    pub fn to_json(&self) -> Result<Value, PolyError> {
        let achieved = self
            .achieved
            .iter()
            .map(|(rank, trace)| {
                let steps = trace
                    .steps
                    .iter()
                    .map(TensorStep::to_json)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(json!({ "rank": rank, "trace": steps }))
            })
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(json!({
            "group": self.group.to_json(),
            "achieved": achieved,
            "frontier_sizes": self.frontier_size_per_level,
            "config": self.config.to_json()?,
        }))
    }

    /// Rebuild a report from its JSON form by replaying every stored trace.
    pub fn from_json(v: &Value) -> Result<Self, ExplorerError> {
        let group = DiagonalCyclicGroup::from_json(
            v.get("group")
                .ok_or_else(|| PolyError::Json("report is missing \"group\"".into()))?,
        )?;
        let f = canonical_polynomial(&group)?.f_gamma;
        let config_v = v
            .get("config")
            .ok_or_else(|| PolyError::Json("report is missing \"config\"".into()))?;
        let config = config_from_json(config_v)?;
        let frontier = v
            .get("frontier_sizes")
            .and_then(Value::as_array)
            .map(|a| {
                a.iter()
                    .filter_map(Value::as_u64)
                    .map(|x| x as usize)
                    .collect()
            })
            .unwrap_or_default();
        let mut achieved = BTreeMap::new();
        for entry in v
            .get("achieved")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("report is missing \"achieved\"".into()))?
        {
            let rank = entry
                .get("rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| PolyError::Json("achieved entry is missing \"rank\"".into()))?
                as usize;
            let steps = entry
                .get("trace")
                .and_then(Value::as_array)
                .ok_or_else(|| PolyError::Json("achieved entry is missing \"trace\"".into()))?
                .iter()
                .map(TensorStep::from_json)
                .collect::<Result<Vec<_>, _>>()?;
            let mut g = f.clone();
            let mut ranks = Vec::with_capacity(steps.len());
            for step in &steps {
                g = tensor_at(&g, &step.target, &step.fraction, &f)?;
                ranks.push(g.rank());
            }
            if g.rank() != rank {
                return Err(PolyError::Json(format!(
                    "trace for rank {rank} replays to rank {}",
                    g.rank()
                ))
                .into());
            }
            achieved.insert(
                rank,
                ConstructionTrace {
                    group: group.clone(),
                    steps,
                    result: g,
                    rank_after_each_step: ranks,
                },
            );
        }
        Ok(SpectrumReport {
            group,
            achieved,
            frontier_size_per_level: frontier,
            config,
        })
    }
}

fn config_from_json(v: &Value) -> Result<SearchConfig, PolyError> {
    let max_depth = v
        .get("max_depth")
        .and_then(Value::as_u64)
        .ok_or_else(|| PolyError::Json("config is missing \"max_depth\"".into()))?
        as usize;
    let max_degree = v
        .get("max_degree")
        .and_then(Value::as_u64)
        .map(|x| x as u32);
    let fractions = v
        .get("fractions")
        .and_then(Value::as_array)
        .ok_or_else(|| PolyError::Json("config is missing \"fractions\"".into()))?
        .iter()
        .map(|f| {
            let pair = f.as_array().filter(|a| a.len() == 2)?;
            let num = pair[0].as_i64()?;
            let den = pair[1].as_i64()?;
            (den != 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| PolyError::Json("bad fractions".into()))?;
    let rank_window = v
        .get("rank_window")
        .and_then(Value::as_array)
        .and_then(|a| {
            let lo = a.first().and_then(Value::as_u64)? as usize;
            let hi = a.get(1).and_then(Value::as_u64)? as usize;
            Some((lo, hi))
        });
    Ok(SearchConfig {
        max_depth,
        max_degree,
        allowed_fractions: fractions,
        rank_window,
    })
}

/// Breadth-first search over tensoring steps from the canonical polynomial,
/// reporting the minimal-depth witness for every achieved rank.
pub fn explore_spectrum(
    group: &DiagonalCyclicGroup,
    config: &SearchConfig,
) -> Result<SpectrumReport, ExplorerError> {
    if !group.is_admissible() {
        return Err(ExplorerError::NotAdmissible);
    }
    let f = canonical_polynomial(group)?.f_gamma;
    let base_degree = f.total_degree();
    let cap = config
        .max_degree
        .unwrap_or(base_degree * (config.max_depth as u32 + 1));
    if cap < base_degree {
        return Err(ExplorerError::InvalidConfig(format!(
            "degree cap {cap} is below the canonical degree {base_degree}"
        )));
    }
    let mut fractions = config.allowed_fractions.clone();
    fractions.sort();
    fractions.dedup();
    if fractions.is_empty() {
        return Err(ExplorerError::InvalidConfig("no fractions allowed".into()));
    }
    if fractions
        .iter()
        .any(|s| !s.is_positive() || s > &BigRational::one())
    {
        return Err(ExplorerError::InvalidConfig(
            "fractions must lie in (0, 1]".into(),
        ));
    }

    let mut visited: HashSet<Polynomial> = HashSet::new();
    let mut achieved: BTreeMap<usize, ConstructionTrace> = BTreeMap::new();
    let mut frontier: Vec<(Polynomial, Vec<TensorStep>)> = Vec::new();
    let mut frontier_sizes = Vec::with_capacity(config.max_depth + 1);

    visited.insert(f.clone());
    achieved.insert(
        f.rank(),
        ConstructionTrace {
            group: group.clone(),
            steps: Vec::new(),
            result: f.clone(),
            rank_after_each_step: Vec::new(),
        },
    );
    frontier.push((f.clone(), Vec::new()));
    frontier_sizes.push(1);

    for _ in 0..config.max_depth {
        let mut next = Vec::new();
        for (state, steps) in &frontier {
            let targets: Vec<MultiIndex> = state.support_desc().cloned().collect();
            for alpha in targets {
                if alpha.degree() + base_degree > cap {
                    continue;
                }
                for s in &fractions {
                    let child = tensor_at(state, &alpha, s, &f)?;
                    if visited.contains(&child) {
                        continue;
                    }
                    let mut child_steps = steps.clone();
                    child_steps.push(TensorStep {
                        target: alpha.clone(),
                        fraction: s.clone(),
                    });
                    let rank = child.rank();
                    if let std::collections::btree_map::Entry::Vacant(e) = achieved.entry(rank) {
                        let mut ranks: Vec<usize> = Vec::with_capacity(child_steps.len());
                        let mut r = f.clone();
                        for step in &child_steps {
                            r = tensor_at(&r, &step.target, &step.fraction, &f)?;
                            ranks.push(r.rank());
                        }
                        e.insert(ConstructionTrace {
                            group: group.clone(),
                            steps: child_steps.clone(),
                            result: child.clone(),
                            rank_after_each_step: ranks,
                        });
                    }
                    visited.insert(child.clone());
                    next.push((child, child_steps));
                }
            }
        }
        frontier_sizes.push(next.len());
        frontier = next;
    }

    if let Some((lo, hi)) = config.rank_window {
        achieved.retain(|rank, _| (lo..=hi).contains(rank));
    }

    Ok(SpectrumReport {
        group: group.clone(),
        achieved,
        frontier_size_per_level: frontier_sizes,
        config: config.clone(),
    })
}

/// A parsed replay step: full multiply or split at a target monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStep {
    pub kind: StepKind,
    pub target: MultiIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Mul,
    Split,
}

impl ScriptStep {
    pub fn fraction(&self) -> BigRational {
        match self.kind {
            StepKind::Mul => BigRational::one(),
            StepKind::Split => BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }
}

/// Parse a replay script: one step per line, `mul x1^3` or `split x1^2 x2`.
/// Blank lines and `#` comments are skipped.
pub fn parse_script(text: &str, num_vars: usize) -> Result<Vec<ScriptStep>, ExplorerError> {
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, rest) = line
            .split_once(char::is_whitespace)
            .ok_or(ExplorerError::Script {
                line: idx + 1,
                message: "expected `mul <monomial>` or `split <monomial>`".into(),
            })?;
        let kind = match word {
            "mul" => StepKind::Mul,
            "split" => StepKind::Split,
            other => {
                return Err(ExplorerError::Script {
                    line: idx + 1,
                    message: format!("unknown operation `{other}`"),
                })
            }
        };
        let target = parse_monomial(rest.trim(), num_vars).map_err(|e: ParseError| {
            ExplorerError::Script {
                line: idx + 1,
                message: e.to_string(),
            }
        })?;
        steps.push(ScriptStep { kind, target });
    }
    Ok(steps)
}

/// Apply a script in order, starting from the canonical polynomial, and
/// report the rank after every state (including the start).
pub fn replay_script(
    group: &DiagonalCyclicGroup,
    steps: &[ScriptStep],
) -> Result<Vec<(usize, Polynomial)>, ExplorerError> {
    let f = canonical_polynomial(group)?.f_gamma;
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut g = f.clone();
    out.push((g.rank(), g.clone()));
    for (idx, step) in steps.iter().enumerate() {
        if g.coeff(&step.target).is_none() {
            return Err(ExplorerError::MissingTarget {
                step: idx + 1,
                target: step.target.clone(),
            });
        }
        g = tensor_at(&g, &step.target, &step.fraction(), &f)?;
        out.push((g.rank(), g.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(p: i64, w: &[i64]) -> DiagonalCyclicGroup {
        DiagonalCyclicGroup::new(p, w).unwrap()
    }

    #[test]
    fn trivial_group_depth_zero() {
        for n in 1..=3usize {
            let g = grp(1, &vec![0i64; n]);
            let report = explore_spectrum(&g, &SearchConfig::new(0)).unwrap();
            assert_eq!(report.achieved_ranks(), vec![n]);
            assert_eq!(report.frontier_size_per_level, vec![1]);
        }
    }

    #[test]
    fn order_three_tree_ranks_within_depth_three() {
        let g = grp(3, &[1, 1, 2]);
        let report = explore_spectrum(&g, &SearchConfig::new(3)).unwrap();
        let ranks = report.achieved_ranks();
        for want in [7, 13, 14, 15, 16, 17, 18] {
            assert!(ranks.contains(&want), "rank {want} missing from {ranks:?}");
        }
        // every stored witness replays and passes the validity checks
        for (rank, trace) in &report.achieved {
            trace.verify_replay().unwrap();
            assert_eq!(trace.final_rank(), *rank);
            assert!(g.is_invariant(&trace.result).unwrap());
            assert!(trace.result.satisfies_hyperplane_identity());
            assert!(trace.result.has_nonnegative_coefficients());
        }
    }

    #[test]
    fn order_five_tree_ranks_with_degree_cap() {
        let g = grp(5, &[1, 1, 2]);
        let cfg = SearchConfig::new(3).with_max_degree(10);
        let report = explore_spectrum(&g, &cfg).unwrap();
        let ranks = report.achieved_ranks();
        for want in [13, 25, 26, 28, 29, 30, 31, 32, 33, 34, 35, 36, 39] {
            assert!(ranks.contains(&want), "rank {want} missing from {ranks:?}");
        }
        assert!(!ranks.contains(&27), "rank 27 should not be reachable here");
    }

    #[test]
    fn deterministic_reports() {
        let g = grp(3, &[1, 2]);
        let cfg = SearchConfig::new(2);
        let a = explore_spectrum(&g, &cfg).unwrap();
        let b = explore_spectrum(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a.to_json().unwrap()).unwrap(),
            serde_json::to_string(&b.to_json().unwrap()).unwrap()
        );
    }

    #[test]
    fn rank_window_filters_report() {
        let g = grp(3, &[1, 2]);
        let cfg = SearchConfig::new(2).with_rank_window(5, 7);
        let report = explore_spectrum(&g, &cfg).unwrap();
        assert!(report.achieved_ranks().iter().all(|r| (5..=7).contains(r)));
    }

    #[test]
    fn degree_cap_validation() {
        let g = grp(3, &[1, 2]);
        let cfg = SearchConfig::new(2).with_max_degree(2);
        assert!(matches!(
            explore_spectrum(&g, &cfg),
            Err(ExplorerError::InvalidConfig(_))
        ));
    }

    #[test]
    fn rejects_non_admissible() {
        let g = grp(5, &[1, 4]);
        assert!(matches!(
            explore_spectrum(&g, &SearchConfig::new(1)),
            Err(ExplorerError::NotAdmissible)
        ));
    }

    #[test]
    fn script_parsing() {
        let steps = parse_script("mul x1^3\n# comment\n\nsplit x1^2 x2\n", 3).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].kind, StepKind::Mul);
        assert_eq!(steps[0].target, MultiIndex::new(vec![3, 0, 0]));
        assert_eq!(steps[1].kind, StepKind::Split);
        assert_eq!(steps[1].target, MultiIndex::new(vec![2, 1, 0]));

        assert!(parse_script("frobnicate x1", 2).is_err());
        assert!(parse_script("mul", 2).is_err());
        assert!(parse_script("mul x9", 2).is_err());
    }

    #[test]
    fn replay_order_three_tree_edges() {
        let g = grp(3, &[1, 1, 2]);
        let mul = parse_script("mul x1^3", 3).unwrap();
        let out = replay_script(&g, &mul).unwrap();
        assert_eq!(out[0].0, 7);
        assert_eq!(out[1].0, 13);

        let split = parse_script("split x1^3", 3).unwrap();
        let out = replay_script(&g, &split).unwrap();
        assert_eq!(out[1].0, 14);
    }

    #[test]
    fn replay_order_five_tree_edges() {
        let g = grp(5, &[1, 1, 2]);
        let steps = parse_script("mul x1^5\nmul x1^4 x2", 3).unwrap();
        let out = replay_script(&g, &steps).unwrap();
        let ranks: Vec<usize> = out.iter().map(|(r, _)| *r).collect();
        assert_eq!(ranks, vec![13, 25, 28]);
    }

    #[test]
    fn replay_empty_script() {
        let g = grp(3, &[1, 2]);
        let out = replay_script(&g, &[]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, 3);
    }

    #[test]
    fn replay_missing_target() {
        let g = grp(3, &[1, 2]);
        let steps = parse_script("mul x1^2", 2).unwrap();
        assert!(matches!(
            replay_script(&g, &steps),
            Err(ExplorerError::MissingTarget { step: 1, .. })
        ));
    }

    #[test]
    fn report_json_round_trip() {
        let g = grp(3, &[1, 2]);
        let report = explore_spectrum(&g, &SearchConfig::new(2)).unwrap();
        let v = report.to_json().unwrap();
        let back = SpectrumReport::from_json(&v).unwrap();
        assert_eq!(back, report);
    }
}
