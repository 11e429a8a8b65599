use serde::{Deserialize, Serialize};

use super::{c, CMatrix, DensityMatrix, QOperator};
use crate::error::{Error, Result};

/// Row-major JSON form `{"dims": [...], "re": [[...]], "im": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DensityJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityJson {
    pub fn from_matrix(m: &CMatrix, dims: &[usize]) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|r| (0..n).map(|k| m[(r, k)].re).collect()).collect();
        let im = (0..n).map(|r| (0..n).map(|k| m[(r, k)].im).collect()).collect();
        Self {
            dims: dims.to_vec(),
            re,
            im,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        if self.im.len() != n
            || self.re.iter().chain(self.im.iter()).any(|row| row.len() != n)
        {
            return Err(Error::arg("density JSON: re/im must be square and equal-sized"));
        }
        Ok(CMatrix::from_fn(n, n, |r, k| c(self.re[r][k], self.im[r][k])))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(QOperator::new(self.to_matrix()?, self.dims.clone())?)
    }
}

impl From<&DensityMatrix> for DensityJson {
    fn from(rho: &DensityMatrix) -> Self {
        DensityJson::from_matrix(rho.data(), rho.dims())
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DensityJson::deserialize(d)?;
        j.to_density().map_err(serde::de::Error::custom)
    }
}
