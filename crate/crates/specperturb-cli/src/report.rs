//! Report and manifest JSON assembly. Top-level report keys are fixed:
//! manifest, reports, embedding_summary, rho, comparison.

use serde_json::{json, Map, Value};
use specperturb::bounds::BoundReport;
use specperturb::embedding::{ClusterAssignment, SpectralEmbedding};
use specperturb::subspace::SubspaceComparison;

pub struct Manifest {
    map: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut map = Map::new();
        map.insert("command".to_string(), Value::String(command.to_string()));
        map.insert(
            "version".to_string(),
            Value::String(env!("CARGO_PKG_VERSION").to_string()),
        );
        map.insert("config".to_string(), Value::Object(Map::new()));
        Self { map }
    }

    pub fn set(mut self, key: &str, value: Value) -> Self {
        if let Some(Value::Object(cfg)) = self.map.get_mut("config") {
            cfg.insert(key.to_string(), value);
        }
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.map)
    }
}

pub struct Report {
    manifest: Value,
    reports: Vec<BoundReport>,
    embedding_summary: Value,
    rho: Value,
    comparison: Value,
}

impl Report {
    pub fn new(manifest: Manifest) -> Self {
        Self {
            manifest: manifest.into_value(),
            reports: Vec::new(),
            embedding_summary: Value::Null,
            rho: Value::Null,
            comparison: Value::Null,
        }
    }

    pub fn push_bound(&mut self, report: BoundReport) {
        self.reports.push(report);
    }

    pub fn bound_reports(&self) -> &[BoundReport] {
        &self.reports
    }

    pub fn set_embedding(&mut self, embedding: &SpectralEmbedding, sigma: f64, assignment: Option<&ClusterAssignment>) {
        let mut summary = json!({
            "k": embedding.k,
            "eigenvalues": embedding.eigenvalues,
            "alpha": embedding.alpha,
            "drop_first": embedding.drop_first,
            "sigma": sigma,
        });
        if let (Some(a), Value::Object(obj)) = (assignment, &mut summary) {
            obj.insert("wcss".to_string(), json!(a.wcss));
            obj.insert("restarts_used".to_string(), json!(a.restarts_used));
        }
        self.embedding_summary = summary;
    }

    pub fn set_rho(&mut self, rho: f64) {
        self.rho = json!(rho);
    }

    pub fn set_comparison(&mut self, comparison: &SubspaceComparison) {
        self.comparison = serde_json::to_value(comparison).expect("comparison serializes");
    }

    pub fn to_json(&self) -> String {
        let value = json!({
            "manifest": self.manifest,
            "reports": self.reports,
            "embedding_summary": self.embedding_summary,
            "rho": self.rho,
            "comparison": self.comparison,
        });
        let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
        text.push('\n');
        text
    }
}

pub fn manifest_json(manifest: Manifest) -> String {
    let mut text =
        serde_json::to_string_pretty(&manifest.into_value()).expect("manifest serializes");
    text.push('\n');
    text
}
