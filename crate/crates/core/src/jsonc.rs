//! JSON encoding helpers for complex quantities.
//!
//! Complex numbers serialize as two-element `[re, im]` arrays everywhere in
//! this crate's external interfaces, never as strings.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Serde adapter for a single `Complex64` field: `#[serde(with = "jsonc")]`.
pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(d)?;
    Ok(Complex64::new(re, im))
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Serializes a complex matrix as a row-major list of rows of `[re, im]` pairs.
pub fn matrix_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

/// Wrapper giving `Vec<Complex64>` the `[re, im]` list encoding.
pub struct ComplexSeq<'a>(pub &'a [Complex64]);

impl Serialize for ComplexSeq<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0 {
            seq.serialize_element(&pair(*z))?;
        }
        seq.end()
    }
}
