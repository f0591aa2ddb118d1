//! Experiment configuration. Every command builds one of these from its
//! arguments and embeds it in the report, so a report is always enough to
//! rerun the experiment that produced it.

use std::str::FromStr;

use greedylab::greedy::Mode;
use greedylab::weights::WeightDist;

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn label(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Everything that determines a run. Fields irrelevant to a command stay
/// `None` and are omitted from the report header.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    pub command: String,
    pub which: Option<u8>,
    pub r: Option<usize>,
    pub g: Option<usize>,
    pub d: Option<usize>,
    pub d_max: Option<usize>,
    pub k_max: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub trials: Option<u64>,
    pub dist: Option<WeightDist>,
    pub master_seed: Option<u64>,
    pub graph: Option<String>,
    pub mode: Option<Mode>,
    pub variable: Option<String>,
    pub suite: Option<String>,
}

/// The command-line token for a greedy mode, as accepted by `Mode::parse`.
pub fn mode_token(mode: Mode) -> &'static str {
    match mode {
        Mode::IndependentSet => "is",
        Mode::Matching => "m",
    }
}

impl ExperimentConfig {
    pub fn new(command: &str) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            ..Self::default()
        }
    }

    /// Key/value pairs for the report header, in a fixed order.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("command", self.command.clone())];
        let mut push = |key, value: Option<String>| {
            if let Some(v) = value {
                out.push((key, v));
            }
        };
        push("which", self.which.map(|v| v.to_string()));
        push("r", self.r.map(|v| v.to_string()));
        push("g", self.g.map(|v| v.to_string()));
        push("d", self.d.map(|v| v.to_string()));
        push("dmax", self.d_max.map(|v| v.to_string()));
        push("K", self.k_max.map(|v| v.to_string()));
        push(
            "n",
            self.n_list.as_ref().map(|ns| {
                ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
            }),
        );
        push("trials", self.trials.map(|v| v.to_string()));
        push("dist", self.dist.map(|v| v.to_string()));
        push("seed", self.master_seed.map(|v| v.to_string()));
        push("graph", self.graph.clone());
        push("mode", self.mode.map(|m| mode_token(m).to_string()));
        push("var", self.variable.clone());
        push("suite", self.suite.clone());
        out
    }
}
