//! JSON documents for state sets, measurements, and group specs.
//!
//! Complex numbers are `[re, im]` pairs. State and measurement vectors are
//! listed column by column; generator matrices row by row.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::gu::GroupSpec;
use crate::linalg::{CMatrix, C64};
use crate::measurement::{Measurement, MeasurementKind, Metadata};
use crate::stateset::{StateSet, StateSetOptions};

/// Significant digits written for every number.
pub const OUTPUT_DIGITS: usize = 12;

type Pair = [f64; 2];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetDoc {
    pub dim: usize,
    pub states: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub dim: usize,
    #[serde(alias = "vectors")]
    pub states: Vec<Vec<Pair>>,
    pub kind: MeasurementKind,
    pub rank_used: usize,
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecDoc {
    pub factors: Vec<usize>,
    pub order: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Vec<Pair>>>>,
}

fn pair_to_c64(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn c64_to_pair(z: &C64) -> Pair {
    [
        round_sig(z.re, OUTPUT_DIGITS),
        round_sig(z.im, OUTPUT_DIGITS),
    ]
}

fn columns_to_matrix(dim: usize, columns: &[Vec<Pair>]) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::Empty("state dimension"));
    }
    if columns.is_empty() {
        return Err(Error::Empty("state set"));
    }
    for (column, c) in columns.iter().enumerate() {
        if c.len() != dim {
            return Err(Error::ColumnLength {
                column,
                expected: dim,
                found: c.len(),
            });
        }
    }
    Ok(CMatrix::from_fn(dim, columns.len(), |i, j| {
        pair_to_c64(&columns[j][i])
    }))
}

fn matrix_to_columns(a: &CMatrix) -> Vec<Vec<Pair>> {
    a.column_iter()
        .map(|c| c.iter().map(c64_to_pair).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<Pair>], what: usize) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidGroup(format!("generator {what} is empty")));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidGroup(format!(
            "generator {what} is not square"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| pair_to_c64(&rows[i][j])))
}

fn matrix_to_rows(a: &CMatrix) -> Vec<Vec<Pair>> {
    a.row_iter()
        .map(|r| r.iter().map(c64_to_pair).collect())
        .collect()
}

impl StateSetDoc {
    pub fn into_state_set(self) -> Result<StateSet> {
        let states = columns_to_matrix(self.dim, &self.states)?;
        let options = StateSetOptions {
            normalized: self.normalized.unwrap_or(true),
            ..Default::default()
        };
        StateSet::with_options(states, self.priors, options)
    }

    pub fn from_state_set(s: &StateSet) -> Self {
        Self {
            dim: s.dim(),
            states: matrix_to_columns(s.states()),
            priors: Some(
                s.priors()
                    .iter()
                    .map(|&p| round_sig(p, OUTPUT_DIGITS))
                    .collect(),
            ),
            normalized: if s.is_normalized() { None } else { Some(false) },
        }
    }
}

impl MeasurementDoc {
    pub fn into_measurement(self) -> Result<Measurement> {
        Ok(Measurement {
            matrix: columns_to_matrix(self.dim, &self.states)?,
            kind: self.kind,
            rank_used: self.rank_used,
            metadata: self.metadata,
        })
    }

    pub fn from_measurement(m: &Measurement) -> Self {
        let mut metadata = m.metadata.clone();
        if let Some(w) = metadata.weights.as_mut() {
            w.iter_mut().for_each(|x| *x = round_sig(*x, OUTPUT_DIGITS));
        }
        Self {
            dim: m.dim(),
            states: matrix_to_columns(&m.matrix),
            kind: m.kind,
            rank_used: m.rank_used,
            metadata,
        }
    }
}

impl GroupSpecDoc {
    pub fn into_group_spec(self) -> Result<GroupSpec> {
        let spec = GroupSpec::new(self.factors, self.order)?;
        match self.generators {
            Some(gens) => {
                let mats = gens
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| rows_to_matrix(rows, i))
                    .collect::<Result<Vec<_>>>()?;
                spec.with_generators(mats)
            }
            None => Ok(spec),
        }
    }

    pub fn from_group_spec(g: &GroupSpec) -> Self {
        Self {
            factors: g.factors().to_vec(),
            order: g.order().to_vec(),
            generators: g
                .generators()
                .map(|gs| gs.iter().map(matrix_to_rows).collect()),
        }
    }
}

/// Parses and validates a state-set document; priors default to uniform.
pub fn load_state_set(document: &str) -> Result<StateSet> {
    serde_json::from_str::<StateSetDoc>(document)?.into_state_set()
}

pub fn load_measurement(document: &str) -> Result<Measurement> {
    serde_json::from_str::<MeasurementDoc>(document)?.into_measurement()
}

pub fn load_group_spec(document: &str) -> Result<GroupSpec> {
    serde_json::from_str::<GroupSpecDoc>(document)?.into_group_spec()
}

pub fn state_set_to_json(s: &StateSet) -> String {
    serde_json::to_string(&StateSetDoc::from_state_set(s)).expect("serializable") + "\n"
}

pub fn measurement_to_json(m: &Measurement) -> String {
    serde_json::to_string(&MeasurementDoc::from_measurement(m)).expect("serializable") + "\n"
}

pub fn group_spec_to_json(g: &GroupSpec) -> String {
    serde_json::to_string(&GroupSpecDoc::from_group_spec(g)).expect("serializable") + "\n"
}
