//! Dense state-vector engine over an ordered list of subsystems ("slots").
//!
//! Slots carry individual dimensions, so a qubit control line can share a
//! register chain with qudit state registers. A SWAP between slots of unequal
//! dimension is the canonical exchange of the two tensor factors: the joint
//! state is re-indexed and the slot dimensions trade places. Slot 0 is the
//! most significant position in the flat amplitude index.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SlotState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl SlotState {
    /// Tensor product of the given factors, in slot order.
    pub fn product(factors: &[Vec<Complex64>]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("no subsystems".into()));
        }
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("zero-dimensional subsystem".into()));
        }
        let mut amps = vec![Complex64::ONE];
        for f in factors {
            let mut next = Vec::with_capacity(amps.len() * f.len());
            for a in &amps {
                for b in f {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    fn digit(&self, flat: usize, slot: usize, strides: &[usize]) -> usize {
        (flat / strides[slot]) % self.dims[slot]
    }

    /// Exchanges the subsystems at two slots (any dimensions).
    pub fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_slot(i)?;
        self.check_slot(j)?;
        if i == j {
            return Err(Error::InvalidArgument("swap needs two distinct slots".into()));
        }
        let old_strides = self.strides();
        let mut new_dims = self.dims.clone();
        new_dims.swap(i, j);
        let mut new = Self { dims: new_dims, amps: vec![Complex64::ZERO; self.amps.len()] };
        let new_strides = new.strides();
        for (flat, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut target = 0usize;
            for k in 0..self.dims.len() {
                let digit = self.digit(flat, k, &old_strides);
                let dest = if k == i { j } else if k == j { i } else { k };
                target += digit * new_strides[dest];
            }
            new.amps[target] = *amp;
        }
        *self = new;
        Ok(())
    }

    /// Controlled SWAP: control slot must currently hold a qubit; targets must
    /// share a dimension.
    pub fn fredkin(&mut self, control: usize, i: usize, j: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_slot(i)?;
        self.check_slot(j)?;
        if control == i || control == j || i == j {
            return Err(Error::InvalidArgument("fredkin needs three distinct slots".into()));
        }
        if self.dims[i] != self.dims[j] {
            return Err(Error::CircuitMismatch(format!(
                "fredkin targets have unequal dimensions {} and {}",
                self.dims[i], self.dims[j]
            )));
        }
        let s = self.strides();
        for flat in 0..self.amps.len() {
            if self.digit(flat, control, &s) != 1 {
                continue;
            }
            let a = self.digit(flat, i, &s);
            let b = self.digit(flat, j, &s);
            if a < b {
                let other = flat - a * s[i] - b * s[j] + b * s[i] + a * s[j];
                self.amps.swap(flat, other);
            }
        }
        Ok(())
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidArgument("cnot needs two distinct slots".into()));
        }
        let s = self.strides();
        for flat in 0..self.amps.len() {
            if self.digit(flat, control, &s) == 1 && self.digit(flat, target, &s) == 0 {
                self.amps.swap(flat, flat + s[target]);
            }
        }
        Ok(())
    }

    pub fn hadamard(&mut self, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let s = self.strides();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for flat in 0..self.amps.len() {
            if self.digit(flat, target, &s) == 0 {
                let other = flat + s[target];
                let a = self.amps[flat];
                let b = self.amps[other];
                self.amps[flat] = (a + b) * inv_sqrt2;
                self.amps[other] = (a - b) * inv_sqrt2;
            }
        }
        Ok(())
    }

    /// Multiplies the |1⟩ component of a qubit slot by `phase`
    /// (P = diag(1, i) for phase = i, P† for phase = -i).
    pub fn phase(&mut self, target: usize, phase: Complex64) -> Result<()> {
        self.check_qubit(target)?;
        let s = self.strides();
        for flat in 0..self.amps.len() {
            if self.digit(flat, target, &s) == 1 {
                self.amps[flat] *= phase;
            }
        }
        Ok(())
    }

    /// Probability that a measurement of the given slot yields digit 0.
    pub fn prob_digit_zero(&self, slot: usize) -> Result<f64> {
        self.check_slot(slot)?;
        let s = self.strides();
        let mut p = 0.0;
        for flat in 0..self.amps.len() {
            if self.digit(flat, slot, &s) == 0 {
                p += self.amps[flat].norm_sqr();
            }
        }
        Ok(p)
    }

    /// Total probability weight on configurations where any of the given
    /// slots holds a nonzero digit.
    pub fn weight_outside_zero(&self, slots: &[usize]) -> Result<f64> {
        for &slot in slots {
            self.check_slot(slot)?;
        }
        let s = self.strides();
        let mut w = 0.0;
        for flat in 0..self.amps.len() {
            if slots.iter().any(|&k| self.digit(flat, k, &s) != 0) {
                w += self.amps[flat].norm_sqr();
            }
        }
        Ok(w)
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.dims.len() {
            return Err(Error::IndexOutOfRange { index: slot, len: self.dims.len() });
        }
        Ok(())
    }

    fn check_qubit(&self, slot: usize) -> Result<()> {
        self.check_slot(slot)?;
        if self.dims[slot] != 2 {
            return Err(Error::CircuitMismatch(format!(
                "slot {slot} has dimension {}, expected a qubit",
                self.dims[slot]
            )));
        }
        Ok(())
    }
}
