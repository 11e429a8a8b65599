use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;

pub const TRAJECTORY_COLUMNS: [&str; 7] =
    ["time_us", "concurrence", "pop_00", "pop_01", "pop_10", "pop_11", "purity"];

/// States on a time grid plus derived real-valued series.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    observables: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::arg("one state per time point required"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::arg("times must be strictly increasing"));
        }
        let mut observables = BTreeMap::new();
        observables.insert("purity".to_string(), states.iter().map(|s| s.purity()).collect());
        if let [_, nb] = states.first().map(|s| s.dims().to_vec()).unwrap_or_default()[..] {
            let conc = states
                .iter()
                .map(concurrence)
                .collect::<Result<Vec<_>>>()?;
            observables.insert("concurrence".to_string(), conc);
            for a in 0..2 {
                for b in 0..2 {
                    let idx = a * nb + b;
                    observables.insert(
                        format!("pop_{a}{b}"),
                        states.iter().map(|s| s.population(idx)).collect(),
                    );
                }
            }
        }
        Ok(Self { times, states, observables })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn observable(&self, name: &str) -> Option<&[f64]> {
        self.observables.get(name).map(|v| v.as_slice())
    }

    pub fn observables(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.observables
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory is nonempty")
    }

    /// CSV with the columns in [`TRAJECTORY_COLUMNS`].
    pub fn to_csv(&self) -> Result<String> {
        let cols: Vec<&[f64]> = TRAJECTORY_COLUMNS[1..]
            .iter()
            .map(|name| {
                self.observable(name)
                    .ok_or_else(|| Error::arg(format!("trajectory has no '{name}' series")))
            })
            .collect::<Result<_>>()?;
        let mut out = TRAJECTORY_COLUMNS.join(",");
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            write!(out, "{}", crate::output::fmt_num(*t)).unwrap();
            for col in &cols {
                write!(out, ",{}", crate::output::fmt_num(col[i])).unwrap();
            }
            out.push('\n');
        }
        Ok(out)
    }
}
