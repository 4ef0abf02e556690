//! Dense exact tensors representing multilinear maps.
//!
//! Entries are indexed by all domain axes followed by all codomain axes,
//! row-major. A tensor without axes holds one scalar.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTensor {
    dom: Vec<usize>,
    cod: Vec<usize>,
    entries: Vec<Rational>,
}

fn volume(ext: &[usize]) -> usize {
    ext.iter().product()
}

/// Row-major strides for `ext`.
pub(crate) fn strides(ext: &[usize]) -> Vec<usize> {
    let mut s = vec![1; ext.len()];
    for k in (0..ext.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * ext[k + 1];
    }
    s
}

/// Decodes a flat row-major offset into a multi-index.
pub(crate) fn unflatten(mut flat: usize, ext: &[usize], out: &mut [usize]) {
    for k in (0..ext.len()).rev() {
        out[k] = flat % ext[k];
        flat /= ext[k];
    }
}

impl RationalTensor {
    pub fn new(dom: Vec<usize>, cod: Vec<usize>, entries: Vec<Rational>) -> Result<Self, TensorError> {
        let n = volume(&dom) * volume(&cod);
        if entries.len() != n {
            return Err(TensorError::ShapeMismatch(format!(
                "{} entries for shape {:?} -> {:?} (need {n})",
                entries.len(),
                dom,
                cod
            )));
        }
        Ok(RationalTensor { dom, cod, entries })
    }

    pub fn zeros(dom: Vec<usize>, cod: Vec<usize>) -> Self {
        let n = volume(&dom) * volume(&cod);
        RationalTensor { dom, cod, entries: vec![Rational::zero(); n] }
    }

    pub fn scalar(r: Rational) -> Self {
        RationalTensor { dom: vec![], cod: vec![], entries: vec![r] }
    }

    /// Kronecker delta on one axis of extent `n`.
    pub fn identity(n: usize) -> Self {
        Self::identity_on(&[n])
    }

    /// Identity on a tensor product of spaces with the given extents.
    pub fn identity_on(ext: &[usize]) -> Self {
        let n = volume(ext);
        let mut t = Self::zeros(ext.to_vec(), ext.to_vec());
        for i in 0..n {
            t.entries[i * n + i] = Rational::one();
        }
        t
    }

    /// The symmetry `V_m ⊗ V_n → V_n ⊗ V_m`.
    pub fn swap(m: usize, n: usize) -> Self {
        let mut t = Self::zeros(vec![m, n], vec![n, m]);
        for a in 0..m {
            for b in 0..n {
                let row = a * n + b;
                let col = b * m + a;
                t.entries[row * (m * n) + col] = Rational::one();
            }
        }
        t
    }

    /// Permutation of tensor factors: codomain axis `k` carries domain axis `perm[k]`.
    pub fn permutation(ext: &[usize], perm: &[usize]) -> Result<Self, TensorError> {
        let mut seen = vec![false; ext.len()];
        if perm.len() != ext.len() || perm.iter().any(|&p| p >= ext.len() || std::mem::replace(&mut seen[p], true)) {
            return Err(TensorError::ShapeMismatch(format!("{perm:?} is not a permutation of {} axes", ext.len())));
        }
        let cod: Vec<usize> = perm.iter().map(|&p| ext[p]).collect();
        let n = volume(ext);
        let cs = strides(&cod);
        let mut t = Self::zeros(ext.to_vec(), cod);
        let mut idx = vec![0; ext.len()];
        for row in 0..n {
            unflatten(row, ext, &mut idx);
            let col: usize = perm.iter().enumerate().map(|(k, &p)| idx[p] * cs[k]).sum();
            t.entries[row * n + col] = Rational::one();
        }
        Ok(t)
    }

    pub fn dom(&self) -> &[usize] {
        &self.dom
    }

    pub fn cod(&self) -> &[usize] {
        &self.cod
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.dom.len() + self.cod.len()
    }

    /// All extents, domain first.
    pub fn extents(&self) -> Vec<usize> {
        let mut e = self.dom.clone();
        e.extend_from_slice(&self.cod);
        e
    }

    fn offset(&self, idx: &[usize]) -> Option<usize> {
        let ext = self.extents();
        if idx.len() != ext.len() || idx.iter().zip(&ext).any(|(i, e)| i >= e) {
            return None;
        }
        Some(idx.iter().zip(strides(&ext)).map(|(i, s)| i * s).sum())
    }

    pub fn get(&self, idx: &[usize]) -> Option<&Rational> {
        self.offset(idx).map(|o| &self.entries[o])
    }

    pub fn set(&mut self, idx: &[usize], value: Rational) -> Result<(), TensorError> {
        let o = self
            .offset(idx)
            .ok_or_else(|| TensorError::ShapeMismatch(format!("index {idx:?} outside {:?}", self.extents())))?;
        self.entries[o] = value;
        Ok(())
    }

    /// The single entry of an axis-free tensor.
    pub fn as_scalar(&self) -> Option<&Rational> {
        if self.rank() == 0 {
            self.entries.first()
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Nonzero entries with their multi-indices, in row-major order.
    pub fn nonzeros(&self) -> Vec<(Vec<usize>, &Rational)> {
        let ext = self.extents();
        let mut idx = vec![0; ext.len()];
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(o, v)| {
                unflatten(o, &ext, &mut idx);
                (idx.clone(), v)
            })
            .collect()
    }

    /// Lexicographically first index where the tensors differ, with both values.
    pub fn first_difference(&self, other: &RationalTensor) -> Option<(Vec<usize>, Rational, Rational)> {
        let ext = self.extents();
        let o = self.entries.iter().zip(&other.entries).position(|(a, b)| a != b)?;
        let mut idx = vec![0; ext.len()];
        unflatten(o, &ext, &mut idx);
        Some((idx, self.entries[o].clone(), other.entries[o].clone()))
    }

    fn same_shape(&self, other: &RationalTensor, what: &str) -> Result<(), TensorError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(TensorError::ShapeMismatch(format!(
                "{what}: {:?} -> {:?} versus {:?} -> {:?}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(())
    }

    /// `after ∘ before`.
    pub fn compose(after: &RationalTensor, before: &RationalTensor) -> Result<Self, TensorError> {
        if after.dom != before.cod {
            return Err(TensorError::ShapeMismatch(format!(
                "compose: codomain {:?} against domain {:?}",
                before.cod, after.dom
            )));
        }
        let rows = volume(&before.dom);
        let mid = volume(&before.cod);
        let cols = volume(&after.cod);
        let mut out = Self::zeros(before.dom.clone(), after.cod.clone());
        for r in 0..rows {
            for k in 0..mid {
                let b = &before.entries[r * mid + k];
                if b.is_zero() {
                    continue;
                }
                for c in 0..cols {
                    let a = &after.entries[k * cols + c];
                    if !a.is_zero() {
                        out.entries[r * cols + c] += b * a;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Outer product with domain `a.dom ⧺ b.dom` and codomain `a.cod ⧺ b.cod`.
    pub fn tensor(a: &RationalTensor, b: &RationalTensor) -> Self {
        let (ad, ac) = (volume(&a.dom), volume(&a.cod));
        let (bd, bc) = (volume(&b.dom), volume(&b.cod));
        let dom = [a.dom.as_slice(), b.dom.as_slice()].concat();
        let cod = [a.cod.as_slice(), b.cod.as_slice()].concat();
        let mut out = Self::zeros(dom, cod);
        let cols = ac * bc;
        for i in 0..ad {
            for k in 0..ac {
                let x = &a.entries[i * ac + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..bd {
                    for l in 0..bc {
                        let y = &b.entries[j * bc + l];
                        if !y.is_zero() {
                            out.entries[(i * bd + j) * cols + k * bc + l] = x * y;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(a: &RationalTensor, b: &RationalTensor) -> Result<Self, TensorError> {
        a.same_shape(b, "add")?;
        let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
        Ok(RationalTensor { dom: a.dom.clone(), cod: a.cod.clone(), entries })
    }

    pub fn scale(c: &Rational, a: &RationalTensor) -> Self {
        let entries = a.entries.iter().map(|x| c * x).collect();
        RationalTensor { dom: a.dom.clone(), cod: a.cod.clone(), entries }
    }
}
