//! Machine-readable reports. Every element is written in element syntax and
//! every map as a table, so a report can be checked against the network
//! document it was computed from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::document::MapDocument;
use super::syntax::{map_row, parse_element, space_expr};
use crate::error::{Error, Result};
use crate::finmap::FiniteMap;
use crate::immanence::{check, Status, Verdict, Witness};
use crate::network::{
    resolve_exogenous, CounterCascadedPair, Diagnostic, Network, ReductionReport, StepOutcome,
};
use crate::relation::{approximate, relation_of, single_valuedness, ApproxModel, Criterion};

/// A counter-cascaded pair together with the ancillary map on the
/// dependent's output.
#[derive(Debug, Clone)]
pub struct PairContext {
    pub pair: CounterCascadedPair,
    pub ancillary_name: Option<String>,
    pub ancillary: FiniteMap,
}

impl PairContext {
    /// Resolves `dependent` against `primary`. Without a named ancillary map
    /// the identity on the dependent's output is used.
    pub fn new(
        net: &Network,
        primary: &str,
        dependent: &str,
        ancillary: Option<&str>,
    ) -> Result<Self> {
        let pair = resolve_exogenous(net, primary, dependent)?;
        let v = pair.induced_t.codomain();
        let n = match ancillary {
            None => FiniteMap::identity(v),
            Some(name) => {
                let n = net
                    .maps
                    .get(name)
                    .ok_or_else(|| Error::UnknownSource(name.to_owned()))?;
                if n.domain() != v {
                    return Err(Error::SpaceMismatch {
                        context: "ancillary map",
                        expected: v.name().to_owned(),
                        found: n.domain().name().to_owned(),
                    });
                }
                n.clone()
            }
        };
        Ok(PairContext {
            pair,
            ancillary_name: ancillary.map(str::to_owned),
            ancillary: n,
        })
    }

    pub fn m(&self) -> &FiniteMap {
        &self.pair.induced_m
    }

    pub fn t(&self) -> &FiniteMap {
        &self.pair.induced_t
    }

    pub fn n(&self) -> &FiniteMap {
        &self.ancillary
    }

    pub fn record(&self) -> PairRecord {
        PairRecord {
            primary: self.pair.primary.clone(),
            dependent: self.pair.dependent.clone(),
            ancillary: self.ancillary_name.clone(),
            sources: self.pair.sources.iter().map(ToString::to_string).collect(),
            common_input: space_expr(&self.pair.common_input),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub primary: String,
    pub dependent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancillary: Option<String>,
    pub sources: Vec<String>,
    pub common_input: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub w: String,
    pub u: String,
    pub u_prime: String,
    pub x: String,
    pub x_prime: String,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            w: w.w.to_string(),
            u: w.u.to_string(),
            u_prime: w.u_prime.to_string(),
            x: w.x.to_string(),
            x_prime: w.x_prime.to_string(),
        }
    }
}

impl WitnessRecord {
    pub fn to_witness(&self) -> std::result::Result<Witness, String> {
        Ok(Witness {
            w: parse_element(&self.w)?,
            u: parse_element(&self.u)?,
            u_prime: parse_element(&self.u_prime)?,
            x: parse_element(&self.x)?,
            x_prime: parse_element(&self.x_prime)?,
        })
    }
}

pub fn map_document(map: &FiniteMap) -> MapDocument {
    MapDocument {
        domain: space_expr(map.domain()),
        codomain: space_expr(map.codomain()),
        table: map.pairs().map(|(u, x)| map_row(u, x)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub pair: PairRecord,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<MapDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

impl CheckReport {
    pub fn compute(ctx: &PairContext) -> Result<(Verdict, Self)> {
        let verdict = check(ctx.t(), ctx.m(), ctx.n())?;
        let report = CheckReport {
            pair: ctx.record(),
            status: verdict.status(),
            model: verdict.model().map(map_document),
            witness: verdict.witness().map(WitnessRecord::from),
        };
        Ok((verdict, report))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRow {
    pub w: String,
    pub x: String,
    pub multiplicity: usize,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub pair: PairRecord,
    pub pairs: Vec<RelationRow>,
    pub single_valued: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub unconstrained: Vec<String>,
}

impl RelationReport {
    pub fn compute(ctx: &PairContext) -> Result<Self> {
        let rel = relation_of(ctx.m(), ctx.t(), ctx.n())?;
        let verdict = single_valuedness(&rel);
        Ok(RelationReport {
            pair: ctx.record(),
            pairs: rel
                .pairs()
                .map(|p| RelationRow {
                    w: p.w.to_string(),
                    x: p.x.to_string(),
                    multiplicity: p.multiplicity(),
                    generators: p.generators.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            single_valued: verdict.single_valued,
            witness: verdict.witness.as_ref().map(WitnessRecord::from),
            unconstrained: rel
                .unconstrained()
                .iter()
                .map(ToString::to_string)
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub pair: PairRecord,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<Criterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<MapDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

impl ModelReport {
    /// The exact model when one exists; otherwise the approximation under
    /// `criterion`, if given.
    pub fn compute(ctx: &PairContext, criterion: Option<Criterion>) -> Result<Self> {
        let verdict = check(ctx.t(), ctx.m(), ctx.n())?;
        let mut report = ModelReport {
            pair: ctx.record(),
            status: verdict.status(),
            criterion: None,
            model: verdict.model().map(map_document),
            disagreement: verdict.is_immanent().then_some(0),
            witness: verdict.witness().map(WitnessRecord::from),
        };
        if let (Verdict::Transcendent(_), Some(c)) = (&verdict, criterion) {
            let rel = relation_of(ctx.m(), ctx.t(), ctx.n())?;
            let ApproxModel {
                model,
                disagreement,
                criterion,
            } = approximate(&rel, c)?;
            report.criterion = Some(criterion);
            report.model = Some(map_document(&model));
            report.disagreement = Some(disagreement);
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub primary: String,
    pub dependent: String,
    /// `merged`, `transcendent` or `skipped`.
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supernode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<MapDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalizeReport {
    pub node_count_before: usize,
    pub node_count_after: usize,
    pub steps: Vec<StepRecord>,
    /// Original node id to its source in the reduced network.
    pub correspondence: BTreeMap<String, String>,
    pub behavior_checked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behavior_equivalent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behavior_note: Option<String>,
}

impl From<&ReductionReport> for RationalizeReport {
    fn from(r: &ReductionReport) -> Self {
        let steps = r
            .steps
            .iter()
            .map(|s| {
                let mut rec = StepRecord {
                    primary: s.primary.clone(),
                    dependent: s.dependent.clone(),
                    outcome: String::new(),
                    supernode: None,
                    model: None,
                    witness: None,
                    reason: None,
                };
                match &s.outcome {
                    StepOutcome::Merged { supernode, model } => {
                        rec.outcome = "merged".into();
                        rec.supernode = Some(supernode.clone());
                        rec.model = Some(map_document(model));
                    }
                    StepOutcome::Transcendent { witness } => {
                        rec.outcome = "transcendent".into();
                        rec.witness = Some(witness.into());
                    }
                    StepOutcome::Skipped { reason } => {
                        rec.outcome = "skipped".into();
                        rec.reason = Some(reason.clone());
                    }
                }
                rec
            })
            .collect();
        RationalizeReport {
            node_count_before: r.node_count_before,
            node_count_after: r.node_count_after,
            steps,
            correspondence: r
                .correspondence
                .iter()
                .map(|(k, s)| (k.clone(), s.to_string()))
                .collect(),
            behavior_checked: r.behavior_checked,
            behavior_equivalent: r.behavior_equivalent,
            behavior_note: r.behavior_note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub diagnostics: Vec<DiagnosticRecord>,
}

impl From<&[Diagnostic]> for ValidateReport {
    fn from(diags: &[Diagnostic]) -> Self {
        ValidateReport {
            valid: diags.is_empty(),
            diagnostics: diags
                .iter()
                .map(|d| DiagnosticRecord {
                    location: d.location.clone(),
                    message: d.message.clone(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}
