use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::Group;

pub(crate) fn check_same_group(a: &Group, b: &Group) -> Result<()> {
    if a != b {
        return Err(Error::GroupMismatch {
            left: a.to_string(),
            right: b.to_string(),
        });
    }
    Ok(())
}

/// A dense complex-valued function on a [`Group`], indexed by element index.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    group: Group,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: Group, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Precondition(format!(
                "function has {} values but |G| = {}",
                values.len(),
                group.order()
            )));
        }
        Ok(Self { group, values })
    }

    pub fn from_real(group: Group, values: Vec<f64>) -> Result<Self> {
        Self::new(group, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(group: &Group) -> Self {
        Self::constant(group, 0.0)
    }

    pub fn constant(group: &Group, value: f64) -> Self {
        Self {
            group: group.clone(),
            values: vec![Complex64::new(value, 0.0); group.order()],
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    /// Real parts, for functions known to be real-valued.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// `𝔼f = N⁻¹ Σ_x f(x)`.
    pub fn expectation(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True when every value is real and lies in `[0, 1]`.
    pub fn is_unit_interval_valued(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.im == 0.0 && (0.0..=1.0).contains(&v.re))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `x ↦ f(x − t)`, i.e. the translate supported on `supp(f) + t`.
    pub fn translated(&self, t: usize) -> Self {
        let g = &self.group;
        let mut values = vec![Complex64::new(0.0, 0.0); g.order()];
        for (x, v) in self.values.iter().enumerate() {
            values[g.add(x, t)] = *v;
        }
        Self {
            group: g.clone(),
            values,
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }
}

/// A bit-packed subset of a [`Group`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndicatorSet {
    group: Group,
    words: Vec<u64>,
}

impl IndicatorSet {
    pub fn empty(group: &Group) -> Self {
        Self {
            group: group.clone(),
            words: vec![0; group.order().div_ceil(64)],
        }
    }

    pub fn full(group: &Group) -> Self {
        Self::from_predicate(group, |_| true)
    }

    pub fn from_predicate(group: &Group, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(group);
        for x in 0..group.order() {
            if pred(x) {
                s.words[x / 64] |= 1 << (x % 64);
            }
        }
        s
    }

    pub fn from_indices(group: &Group, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(group);
        for x in indices {
            if x >= group.order() {
                return Err(Error::Precondition(format!(
                    "element index {x} outside group of order {}",
                    group.order()
                )));
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// The set with the given `u64` mask as its membership bits (groups with `N ≤ 64`).
    pub fn from_mask(group: &Group, mask: u64) -> Result<Self> {
        let n = group.order();
        if n > 64 || (n < 64 && mask >> n != 0) {
            return Err(Error::Precondition(format!("mask {mask:#x} does not fit a group of order {n}")));
        }
        Ok(Self {
            group: group.clone(),
            words: vec![mask],
        })
    }

    /// The indicator view of `f`, present only when every value is exactly 0 or 1.
    pub fn from_function(f: &GroupFunction) -> Option<Self> {
        let mut s = Self::empty(f.group());
        for (x, v) in f.values().iter().enumerate() {
            if v.im != 0.0 {
                return None;
            }
            if v.re == 1.0 {
                s.insert(x);
            } else if v.re != 0.0 {
                return None;
            }
        }
        Some(s)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.group.order() && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        self.words[x / 64] &= !(1 << (x % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|A| / N`.
    pub fn density(&self) -> f64 {
        self.len() as f64 / self.group.order() as f64
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_function(&self) -> GroupFunction {
        let mut values = vec![Complex64::new(0.0, 0.0); self.group.order()];
        for x in self.iter() {
            values[x] = Complex64::new(1.0, 0.0);
        }
        GroupFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// `A + t`.
    pub fn translate(&self, t: usize) -> Self {
        let g = &self.group;
        if g.is_cyclic() {
            return self.rotated(t % g.order());
        }
        let mut out = Self::empty(g);
        for x in self.iter() {
            out.insert(g.add(x, t));
        }
        out
    }

    /// `−A`.
    pub fn negate(&self) -> Self {
        let mut out = Self::empty(&self.group);
        for x in self.iter() {
            out.insert(self.group.neg(x));
        }
        out
    }

    /// `λ·A = {λa : a ∈ A}`.
    pub fn dilate(&self, lambda: i64) -> Self {
        let mut out = Self::empty(&self.group);
        for x in self.iter() {
            out.insert(self.group.scale(x, lambda));
        }
        out
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            group: self.group.clone(),
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.group == other.group && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// In-place `self |= other`.
    pub(crate) fn or_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Cyclic rotation of the bit vector: bit `x` moves to `(x + s) mod N`.
    fn rotated(&self, s: usize) -> Self {
        let n = self.group.order();
        if s == 0 {
            return self.clone();
        }
        // (bits << s) | (bits >> (n - s)), truncated to n bits.
        let mut out = shl_bits(&self.words, s, n);
        let low = shr_bits(&self.words, n - s);
        for (o, l) in out.iter_mut().zip(low) {
            *o |= l;
        }
        let mut r = Self {
            group: self.group.clone(),
            words: out,
        };
        r.clear_tail();
        r
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    fn clear_tail(&mut self) {
        let n = self.group.order();
        if n % 64 != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
    }
}

fn shl_bits(words: &[u64], s: usize, n: usize) -> Vec<u64> {
    let len = n.div_ceil(64);
    let (ws, bs) = (s / 64, s % 64);
    let mut out = vec![0u64; len];
    for i in (ws..len).rev() {
        let src = i - ws;
        let mut v = words[src] << bs;
        if bs > 0 && src > 0 {
            v |= words[src - 1] >> (64 - bs);
        }
        out[i] = v;
    }
    out
}

fn shr_bits(words: &[u64], s: usize) -> Vec<u64> {
    let len = words.len();
    let (ws, bs) = (s / 64, s % 64);
    let mut out = vec![0u64; len];
    for (i, o) in out.iter_mut().enumerate() {
        let src = i + ws;
        if src >= len {
            break;
        }
        let mut v = words[src] >> bs;
        if bs > 0 && src + 1 < len {
            v |= words[src + 1] << (64 - bs);
        }
        *o = v;
    }
    out
}
