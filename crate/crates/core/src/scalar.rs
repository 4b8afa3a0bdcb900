//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};

use nalgebra::{DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the simulator can run on: `f32` or `f64`.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Serialize
    + DeserializeOwned
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Converts a literal. Panics only for values not representable at all,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize fits a float")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn is_finite_value(self) -> bool {
        self.to_f64_lossy().is_finite()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Row-major nested-array (de)serialization for dense matrices.
pub(crate) mod matrix_rows {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(m: &DMatrix<T>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<T>> = (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<DMatrix<T>, D::Error> {
        let rows: Vec<Vec<T>> = Vec::deserialize(d)?;
        from_rows(&rows).map_err(serde::de::Error::custom)
    }

    pub fn from_rows<T: Real>(rows: &[Vec<T>]) -> Result<DMatrix<T>, String> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err("ragged matrix rows".into());
        }
        Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }
}

pub(crate) mod vector_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(v: &DVector<T>, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<DVector<T>, D::Error> {
        let v: Vec<T> = Vec::deserialize(d)?;
        Ok(DVector::from_vec(v))
    }
}
