//! JSON schemas for the machine-readable outputs. Every struct here
//! round-trips through serde, which the tests rely on.

use lllmt_core::criteria::{CriterionKind, CriterionReport, NeighborRelation};
use lllmt_core::parallel::{ParallelTrace, SubRoundRecord};
use lllmt_core::sequential::{ExecutionLog, RunStats};
use serde::{Deserialize, Serialize};

pub fn kind_name(kind: CriterionKind) -> &'static str {
    match kind {
        CriterionKind::SymmetricLll => "symmetric",
        CriterionKind::AsymmetricLll => "asymmetric",
        CriterionKind::Llll => "llll",
        CriterionKind::LlllVariable => "llll-variable",
        CriterionKind::PegdenGeneral(NeighborRelation::Lopsidependency) => "pegden-lopsided",
        CriterionKind::PegdenGeneral(NeighborRelation::FullDependency) => "pegden-full",
        CriterionKind::PegdenVariable => "pegden-variable",
        CriterionKind::BlendClosedForm => "blend",
        CriterionKind::OrderableExact => "orderable",
        CriterionKind::AssignableExact => "assignable",
    }
}

pub fn kind_from_name(name: &str) -> Option<CriterionKind> {
    Some(match name {
        "symmetric" => CriterionKind::SymmetricLll,
        "asymmetric" => CriterionKind::AsymmetricLll,
        "llll" => CriterionKind::Llll,
        "llll-variable" => CriterionKind::LlllVariable,
        "pegden-lopsided" => CriterionKind::PegdenGeneral(NeighborRelation::Lopsidependency),
        "pegden-full" => CriterionKind::PegdenGeneral(NeighborRelation::FullDependency),
        "pegden-variable" => CriterionKind::PegdenVariable,
        "blend" => CriterionKind::BlendClosedForm,
        "orderable" => CriterionKind::OrderableExact,
        "assignable" => CriterionKind::AssignableExact,
        _ => return None,
    })
}

pub const KIND_NAMES: &[&str] = &[
    "symmetric",
    "asymmetric",
    "llll",
    "llll-variable",
    "pegden-lopsided",
    "pegden-full",
    "pegden-variable",
    "blend",
    "orderable",
    "assignable",
];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EventCheckJson {
    pub id: usize,
    pub mu: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Criterion report: per-event records plus `{W, kind, epsilon, satisfied}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CriterionReportJson {
    pub kind: String,
    pub epsilon: f64,
    pub satisfied: bool,
    #[serde(rename = "W")]
    pub total_weight: f64,
    pub events: Vec<EventCheckJson>,
}

impl From<&CriterionReport> for CriterionReportJson {
    fn from(r: &CriterionReport) -> Self {
        CriterionReportJson {
            kind: kind_name(r.kind).to_string(),
            epsilon: r.epsilon,
            satisfied: r.satisfied,
            total_weight: r.total_weight,
            events: r
                .per_event
                .iter()
                .map(|e| EventCheckJson {
                    id: e.event,
                    mu: e.lhs,
                    rhs: e.rhs,
                    ok: e.ok,
                })
                .collect(),
        }
    }
}

/// One execution-log record: `{t, event, values}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LogEntryJson {
    pub t: u64,
    pub event: usize,
    pub values: Vec<(u32, u32)>,
}

/// Log as JSON lines, one record per step.
pub fn log_to_jsonl(log: &ExecutionLog) -> String {
    let mut out = String::new();
    for e in &log.entries {
        let rec = LogEntryJson {
            t: e.step,
            event: e.event,
            values: e.values.clone(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("serializable"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunStatsJson {
    pub steps: u64,
    pub terminated: bool,
    pub wall_seconds: f64,
    pub resamples: Vec<u64>,
}

impl From<&RunStats> for RunStatsJson {
    fn from(s: &RunStats) -> Self {
        RunStatsJson {
            steps: s.steps,
            terminated: s.terminated,
            wall_seconds: s.wall_seconds,
            resamples: s.resamples.clone(),
        }
    }
}

/// One sub-round trace record: `{t, s, v_size, i_size, i_prime_size,
/// switched, longest_path}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubRoundJson {
    pub t: u32,
    pub s: u32,
    pub v_size: usize,
    pub i_size: usize,
    pub i_prime_size: usize,
    pub switched: usize,
    pub longest_path: usize,
}

impl From<&SubRoundRecord> for SubRoundJson {
    fn from(r: &SubRoundRecord) -> Self {
        SubRoundJson {
            t: r.round,
            s: r.sub,
            v_size: r.v_size,
            i_size: r.i_size,
            i_prime_size: r.i_prime_size,
            switched: r.switched,
            longest_path: r.longest_path,
        }
    }
}

pub fn trace_to_jsonl(trace: &ParallelTrace) -> String {
    let mut out = String::new();
    for r in &trace.sub_rounds {
        out.push_str(&serde_json::to_string(&SubRoundJson::from(r)).expect("serializable"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KsatBoundsJson {
    pub k: u32,
    pub l_new: f64,
    pub l_gst: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HypergraphTableRowJson {
    pub k: u32,
    pub l_new: u32,
    pub l_original: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolveSummaryJson {
    pub solved: bool,
    pub steps: u64,
    pub wall_seconds: f64,
    pub assignment: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use lllmt_core::criteria::{check, Criterion, MuVector};
    use lllmt_core::model::{Instance, VariableSpace};

    #[test]
    fn kind_names_round_trip() {
        for &name in KIND_NAMES {
            let kind = kind_from_name(name).unwrap();
            assert_eq!(kind_name(kind), name);
        }
        assert!(kind_from_name("nope").is_none());
    }

    #[test]
    fn report_round_trips() {
        let inst = Instance::build(
            VariableSpace::uniform(3, 2),
            vec![vec![(0, 0), (1, 0)], vec![(1, 1), (2, 0)]],
        )
        .unwrap();
        let mu = MuVector::uniform(2, 0.5).unwrap();
        let report = check(&inst, &mu, &Criterion::new(CriterionKind::OrderableExact)).unwrap();
        let json = CriterionReportJson::from(&report);
        let text = serde_json::to_string(&json).unwrap();
        let back: CriterionReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        assert!(back.satisfied);
        assert_eq!(back.events.len(), 2);
    }

    #[test]
    fn log_lines_parse_back() {
        use lllmt_core::sequential::{run, LowestIdRule};
        let inst = Instance::build(
            VariableSpace::uniform(3, 2),
            vec![vec![(0, 0), (1, 0)], vec![(1, 1), (2, 0)]],
        )
        .unwrap();
        let res = run(&inst, &mut LowestIdRule, 12, 10_000).unwrap();
        let lines = log_to_jsonl(&res.log);
        let parsed: Vec<LogEntryJson> = lines
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(parsed.len(), res.log.entries.len());
        for (p, e) in parsed.iter().zip(&res.log.entries) {
            assert_eq!(p.t, e.step);
            assert_eq!(p.event, e.event);
            assert_eq!(p.values, e.values);
        }
    }
}
