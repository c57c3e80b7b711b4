use crate::domain::Universe;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Conditional output distribution `Pr[output = y | input = v]`, one row per
/// input. Rows are validated to be probability vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismDistribution<T = f64> {
    inputs: usize,
    outputs: usize,
    probs: Vec<T>,
    output_labels: Vec<String>,
}

impl<T: Scalar> MechanismDistribution<T> {
    pub fn new(rows: Vec<Vec<T>>, output_labels: Vec<String>) -> Result<Self> {
        let inputs = rows.len();
        if inputs == 0 {
            return Err(Error::InvalidDistribution("no rows".into()));
        }
        let outputs = output_labels.len();
        let mut probs = Vec::with_capacity(inputs * outputs);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::SizeMismatch {
                    expected: outputs,
                    actual: row.len(),
                });
            }
            check_probability_vector(&row)
                .map_err(|e| Error::InvalidDistribution(format!("row {i}: {e}")))?;
            probs.extend(row);
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
            output_labels,
        })
    }

    /// Square mechanism over a universe (outputs labelled by the items).
    pub fn over_universe(universe: &Universe, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.len() != universe.size() {
            return Err(Error::SizeMismatch {
                expected: universe.size(),
                actual: rows.len(),
            });
        }
        Self::new(rows, universe.items().to_vec())
    }

    /// Reports the true value unchanged.
    pub fn identity(universe: &Universe) -> Self {
        let n = universe.size();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::over_universe(universe, rows).expect("identity rows are normalized")
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> T {
        self.probs[input * self.outputs + output]
    }

    pub fn row(&self, input: usize) -> &[T] {
        &self.probs[input * self.outputs..(input + 1) * self.outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.probs.chunks(self.outputs)
    }
}

pub(crate) fn check_probability_vector<T: Scalar>(p: &[T]) -> std::result::Result<(), String> {
    if p.is_empty() {
        return Err("empty".into());
    }
    if let Some((i, x)) = p
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x >= T::zero()))
    {
        return Err(format!("entry {i} = {x} is negative or non-finite"));
    }
    let total: T = p.iter().copied().sum();
    let slack = T::tolerance() * T::from_usize(p.len().max(1)).unwrap().sqrt().max(T::one());
    if (total - T::one()).abs() > slack {
        return Err(format!("sums to {total}"));
    }
    Ok(())
}
