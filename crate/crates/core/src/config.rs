use serde::{Deserialize, Serialize};

/// Numeric mode of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    High,
}

/// Tolerance hierarchy. Each level must be strictly looser than the one
/// before it: boundary < merge < vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Points with |z| >= 1 - boundary are rejected as ideal.
    pub boundary: f64,
    /// Two computed points closer than this are one point.
    pub merge: f64,
    /// A crossing this close to a vertex of the systole arrangement is incident to it.
    pub vertex: f64,
    /// Allowed |det - 1| before a composition is reported as degraded.
    pub det_drift: f64,
    /// Maximum residual for snapping a trace to Z[sqrt 2].
    pub snap: f64,
    /// Projective identity check for words expected to equal +-I.
    pub identity: f64,
}

impl Tolerances {
    pub fn for_precision(p: Precision) -> Self {
        match p {
            Precision::Double => Tolerances {
                boundary: 1e-12,
                merge: 1e-9,
                vertex: 1e-7,
                det_drift: 1e-9,
                snap: 1e-6,
                identity: 1e-10,
            },
            Precision::High => Tolerances {
                boundary: 1e-40,
                merge: 1e-30,
                vertex: 1e-20,
                det_drift: 1e-30,
                snap: 1e-25,
                identity: 1e-30,
            },
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.boundary < self.merge && self.merge < self.vertex
    }
}

/// Run-wide configuration shared by the library entry points and the CLI.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Config {
    pub precision: Precision,
    pub tol: Tolerances,
    /// Worker threads for the enumeration; 0 lets the pool decide.
    pub jobs: usize,
    pub seed: u64,
    /// Hard cap on greedy reduction steps.
    pub reduce_cap: usize,
}

impl Config {
    pub fn new(precision: Precision) -> Self {
        Config {
            precision,
            tol: Tolerances::for_precision(precision),
            jobs: 0,
            seed: 0x5eed_b017a,
            reduce_cap: 10_000,
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::new(Precision::Double)
    }
}
