//! Machine-readable analysis report: exact rationals as strings, decimal
//! renderings as additive `_dec` fields.

use denslab_core::io::config_hash;
use denslab_core::profile::{CounterexampleCheck, EndpointStats};
use denslab_core::rational::{format_rational, to_f64, Rational};
use denslab_core::{all_endpoint_stats, delta_star, is_counterexample, Configuration};
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub configuration: Configuration,
    pub delta_star: String,
    pub delta_star_dec: f64,
    pub endpoints: Vec<EndpointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    pub tool_version: String,
    pub input_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointReport {
    pub endpoint: String,
    pub kind: String,
    pub sup_density: String,
    pub sup_density_dec: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_radius: Option<String>,
    pub inf_density: String,
    pub inf_density_dec: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inf_radius: Option<String>,
    pub escape: String,
    pub escape_dec: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub delta: String,
    pub is_counterexample: bool,
    pub witnesses: Vec<WitnessReport>,
    pub non_escaping: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub endpoint: String,
    pub radius: String,
    pub density: String,
}

fn kind_name(kind: denslab_core::EndpointKind) -> &'static str {
    match kind {
        denslab_core::EndpointKind::Zero => "zero",
        denslab_core::EndpointKind::Left => "left",
        denslab_core::EndpointKind::Right => "right",
    }
}

impl EndpointReport {
    fn from_stats(st: &EndpointStats) -> Self {
        Self {
            endpoint: format_rational(&st.endpoint.value),
            kind: kind_name(st.endpoint.kind).to_string(),
            sup_density: format_rational(&st.sup_density),
            sup_density_dec: to_f64(&st.sup_density),
            sup_radius: st.sup_radius.as_ref().map(format_rational),
            inf_density: format_rational(&st.inf_density),
            inf_density_dec: to_f64(&st.inf_density),
            inf_radius: st.inf_radius.as_ref().map(format_rational),
            escape: format_rational(&st.escape),
            escape_dec: to_f64(&st.escape),
        }
    }
}

impl CounterexampleReport {
    fn from_check(delta: &Rational, check: &CounterexampleCheck) -> Self {
        Self {
            delta: format_rational(delta),
            is_counterexample: check.is_counterexample,
            witnesses: check
                .witnesses
                .iter()
                .map(|w| WitnessReport {
                    endpoint: format_rational(&w.endpoint.value),
                    radius: format_rational(&w.radius),
                    density: format_rational(&w.density),
                })
                .collect(),
            non_escaping: check
                .non_escaping
                .iter()
                .map(|e| format_rational(&e.value))
                .collect(),
        }
    }
}

pub fn analyze(
    config: &Configuration,
    delta: Option<&Rational>,
) -> denslab_core::Result<AnalysisReport> {
    let stats = all_endpoint_stats(config);
    let ds = delta_star(config);
    let min_escape = stats
        .iter()
        .map(|s| s.escape.clone())
        .min()
        .expect("endpoints exist");
    debug_assert_eq!(ds, Rational::one() - min_escape);
    let counterexample = match delta {
        Some(delta) => Some(CounterexampleReport::from_check(
            delta,
            &is_counterexample(config, delta)?,
        )),
        None => None,
    };
    Ok(AnalysisReport {
        configuration: config.clone(),
        delta_star: format_rational(&ds),
        delta_star_dec: to_f64(&ds),
        endpoints: stats.iter().map(EndpointReport::from_stats).collect(),
        counterexample,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_hash: config_hash(config),
    })
}

pub fn human_summary(report: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "configuration: {} intervals, hash {}\n",
        report.configuration.interval_count(),
        report.input_hash
    ));
    out.push_str(&format!(
        "delta_star = {} ({})\n",
        report.delta_star, report.delta_star_dec
    ));
    out.push_str("endpoint  kind   sup            inf            escape\n");
    for ep in &report.endpoints {
        let sup_at = ep
            .sup_radius
            .as_ref()
            .map(|r| format!("{} @ {}", ep.sup_density, r))
            .unwrap_or_else(|| format!("{} (limit)", ep.sup_density));
        let inf_at = ep
            .inf_radius
            .as_ref()
            .map(|r| format!("{} @ {}", ep.inf_density, r))
            .unwrap_or_else(|| format!("{} (limit)", ep.inf_density));
        out.push_str(&format!(
            "{:<9} {:<6} {:<14} {:<14} {}\n",
            ep.endpoint, ep.kind, sup_at, inf_at, ep.escape
        ));
    }
    if let Some(ce) = &report.counterexample {
        if ce.is_counterexample {
            out.push_str(&format!(
                "counterexample at delta = {}: every endpoint escapes ({} witnesses)\n",
                ce.delta,
                ce.witnesses.len()
            ));
        } else {
            out.push_str(&format!(
                "not a counterexample at delta = {}: {} endpoint(s) never escape: {}\n",
                ce.delta,
                ce.non_escaping.len(),
                ce.non_escaping.join(", ")
            ));
        }
    }
    out
}
