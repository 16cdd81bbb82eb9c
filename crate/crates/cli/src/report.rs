use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Reported => "reported",
        }
    }
}

#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub data: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, data: Value) -> Check {
        Check {
            name: name.into(),
            status,
            data,
        }
    }

    pub fn verdict(name: impl Into<String>, ok: bool, data: Value) -> Check {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, data)
    }
}

/// Fixed per-suite seed split: FNV-1a of the suite name, mixed with the
/// master seed through one splitmix64 round.
pub fn suite_seed(master: u64, suite: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut z = master ^ h;
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// The report as canonical JSON: serde_json maps are ordered by key, every
/// number is an integer, and the layout is stable, so equal inputs give
/// byte-identical output.
pub fn assemble(
    config: &ExperimentConfig,
    checks: &[Check],
    timings_us: Option<&[(String, u64)]>,
) -> Value {
    let check_values: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "data": c.data,
                "name": c.name,
                "status": c.status.as_str(),
            })
        })
        .collect();
    let mut summary = Map::new();
    for status in [Status::Pass, Status::Fail, Status::Reported] {
        let count = checks.iter().filter(|c| c.status == status).count();
        summary.insert(status.as_str().to_string(), json!(count));
    }
    let mut timing_map = Map::new();
    if let Some(timings) = timings_us {
        for (name, us) in timings {
            timing_map.insert(name.clone(), json!(us));
        }
    }
    json!({
        "checks": check_values,
        "config": {
            "char": config.characteristic,
            "dmax": config.dmax,
            "ext": config.ext,
            "n": config.n,
            "prime": config.prime,
            "second_prime": config.second_prime,
            "suite": config.suite.name(),
            "trunc": config.trunc,
            "vars": config.vars,
        },
        "seed": config.seed,
        "summary": summary,
        "timings_us": Value::Object(timing_map),
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
