//! Finite abelian groups `Z_{n_1} × … × Z_{n_m}`, their elements and characters.
//!
//! Elements and characters are both addressed by a mixed-radix index in
//! `[0, N)` with the last coordinate varying fastest, so a function on the
//! group is just a dense slice of length `N`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A finite abelian group given as a product of cyclic factors.
///
/// No canonicalization happens: `Z6` and `Z2xZ3` are distinct values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Group {
    orders: Arc<[usize]>,
    strides: Arc<[usize]>,
    order: usize,
}

impl Group {
    pub fn new(cyclic_orders: Vec<usize>) -> Result<Self> {
        if cyclic_orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(&bad) = cyclic_orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidGroup(format!("cyclic order {bad} < 1")));
        }
        let order = cyclic_orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        let mut strides = vec![1usize; cyclic_orders.len()];
        for j in (0..cyclic_orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * cyclic_orders[j + 1];
        }
        Ok(Self {
            orders: cyclic_orders.into(),
            strides: strides.into(),
            order,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `N = |G|`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cyclic_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.len() == 1
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn coords_of(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.order);
        self.orders
            .iter()
            .zip(self.strides.iter())
            .map(|(&n, &s)| (index / s) % n)
            .collect()
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement {
            coords: self.coords_of(index),
        }
    }

    /// Builds an element from arbitrary integer coordinates, reducing each mod `n_j`.
    pub fn element_from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_dim(coords.len())?;
        let coords = coords
            .iter()
            .zip(self.orders.iter())
            .map(|(&c, &n)| c.rem_euclid(n as i64) as usize)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.index_of_coords(&x.coords)
    }

    pub fn index_of_coords(&self, coords: &[usize]) -> Result<usize> {
        self.check_dim(coords.len())?;
        let mut idx = 0;
        for ((&c, &n), &s) in coords.iter().zip(self.orders.iter()).zip(self.strides.iter()) {
            if c >= n {
                return Err(Error::CoordinateOutOfRange {
                    value: c as i64,
                    modulus: n,
                });
            }
            idx += c * s;
        }
        Ok(idx)
    }

    /// All elements in mixed-radix lexicographic order, identity first.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.is_cyclic() {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let mut idx = 0;
        for (&n, &s) in self.orders.iter().zip(self.strides.iter()) {
            let c = ((a / s) % n + (b / s) % n) % n;
            idx += c * s;
        }
        idx
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.is_cyclic() {
            return if a == 0 { 0 } else { self.order - a };
        }
        let mut idx = 0;
        for (&n, &s) in self.orders.iter().zip(self.strides.iter()) {
            let c = (a / s) % n;
            idx += ((n - c) % n) * s;
        }
        idx
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` for an integer `k` (possibly negative).
    pub fn scale(&self, a: usize, k: i64) -> usize {
        let mut idx = 0;
        for (&n, &s) in self.orders.iter().zip(self.strides.iter()) {
            let c = (a / s) % n;
            let m = (c as i128 * k as i128).rem_euclid(n as i128) as usize;
            idx += m * s;
        }
        idx
    }

    pub fn add_elements(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.add(self.index_of(x)?, self.index_of(y)?)))
    }

    pub fn neg_element(&self, x: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.neg(self.index_of(x)?)))
    }

    pub fn sub_elements(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        Ok(self.element(self.sub(self.index_of(x)?, self.index_of(y)?)))
    }

    /// The character whose frequency vector has mixed-radix index `index`.
    pub fn character(&self, index: usize) -> Character {
        Character {
            freq: self.coords_of(index),
        }
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order).map(move |i| self.character(i))
    }

    pub fn character_from_freq(&self, freq: &[i64]) -> Result<Character> {
        Ok(Character {
            freq: self.element_from_coords(freq)?.coords,
        })
    }

    pub fn character_index(&self, c: &Character) -> Result<usize> {
        self.index_of_coords(&c.freq)
    }

    /// Phase `k ∈ [0, N)` with `χ_c(x) = exp(2πi k / N)`, both given by index.
    ///
    /// Exact integer arithmetic; everything downstream that needs an angle goes
    /// through here so rounding only happens once.
    pub fn phase(&self, char_index: usize, elem_index: usize) -> usize {
        if self.is_cyclic() {
            return ((char_index as u128 * elem_index as u128) % self.order as u128) as usize;
        }
        let n_total = self.order as u128;
        let mut acc: u128 = 0;
        for (&n, &s) in self.orders.iter().zip(self.strides.iter()) {
            let a = ((char_index / s) % n) as u128;
            let x = ((elem_index / s) % n) as u128;
            acc += (a * x % n as u128) * (n_total / n as u128);
        }
        (acc % n_total) as usize
    }

    pub fn char_eval_index(&self, char_index: usize, elem_index: usize) -> Complex64 {
        root_of_unity(self.phase(char_index, elem_index), self.order)
    }

    /// `χ(x) = exp(2πi Σ_j a_j x_j / n_j)`.
    pub fn char_eval(&self, c: &Character, x: &GroupElement) -> Result<Complex64> {
        let ci = self.character_index(c)?;
        let xi = self.index_of(x)?;
        Ok(self.char_eval_index(ci, xi))
    }

    /// `|1 − χ(x)|`, computed as `2|sin(πk/N)|` from the exact phase.
    pub fn char_distance(&self, char_index: usize, elem_index: usize) -> f64 {
        unit_distance(self.phase(char_index, elem_index), self.order)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.orders.len() {
            return Err(Error::DimensionMismatch {
                expected: self.orders.len(),
                got,
            });
        }
        Ok(())
    }
}

/// `exp(2πi k / n)` with `k` folded into `(-n/2, n/2]` first for accuracy.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let signed = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
    let theta = 2.0 * PI * signed / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// `|1 − exp(2πi k / n)|`.
pub fn unit_distance(k: usize, n: usize) -> f64 {
    let k = k % n;
    let folded = k.min(n - k) as f64;
    2.0 * (PI * folded / n as f64).sin()
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({self})")
    }
}

/// Serialized as its literal, e.g. `"Z3xZ5"`.
impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses `"Z7"` or `"Z3xZ3xZ5"` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower.is_empty() {
            return Err(Error::Parse("empty group literal".into()));
        }
        let orders = lower
            .split('x')
            .map(|part| {
                let digits = part
                    .trim()
                    .strip_prefix('z')
                    .ok_or_else(|| Error::Parse(format!("bad cyclic factor {part:?} in {s:?}")))?;
                digits
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad cyclic order {digits:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Group::new(orders)
    }
}

/// An element of a [`Group`], by reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<usize>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A character `x ↦ exp(2πi Σ a_j x_j / n_j)`, identified by its frequency vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Character {
    pub freq: Vec<usize>,
}

impl Character {
    pub fn principal(g: &Group) -> Self {
        Self {
            freq: vec![0; g.rank()],
        }
    }

    pub fn is_principal(&self) -> bool {
        self.freq.iter().all(|&a| a == 0)
    }

    pub fn inverse(&self, g: &Group) -> Self {
        Self {
            freq: self
                .freq
                .iter()
                .zip(g.cyclic_orders())
                .map(|(&a, &n)| (n - a % n) % n)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerates_in_lexicographic_order() {
        let z3 = Group::cyclic(3).unwrap();
        let v: Vec<_> = z3.elements().map(|e| e.coords).collect();
        assert_eq!(v, vec![vec![0], vec![1], vec![2]]);

        let z2z2: Group = "Z2xZ2".parse().unwrap();
        let v: Vec<_> = z2z2.elements().map(|e| e.coords).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let z1 = Group::cyclic(1).unwrap();
        assert_eq!(z1.elements().map(|e| e.coords).collect::<Vec<_>>(), vec![vec![0]]);
    }

    #[test]
    fn parses_literals() {
        let g: Group = "z3xZ3xz5".parse().unwrap();
        assert_eq!(g.cyclic_orders(), &[3, 3, 5]);
        assert_eq!(g.order(), 45);
        assert_eq!(g.to_string(), "Z3xZ3xZ5");
        assert!("".parse::<Group>().is_err());
        assert!("Z0".parse::<Group>().is_err());
        assert!("Y7".parse::<Group>().is_err());
        assert!("Z3x".parse::<Group>().is_err());
    }

    #[test]
    fn char_eval_examples() {
        let z7 = Group::cyclic(7).unwrap();
        let chi0 = Character::principal(&z7);
        for x in z7.elements() {
            assert_eq!(z7.char_eval(&chi0, &x).unwrap(), Complex64::new(1.0, 0.0));
        }
        let z5 = Group::cyclic(5).unwrap();
        let c = Character { freq: vec![1] };
        assert_eq!(z5.char_eval(&c, &z5.element(0)).unwrap(), Complex64::new(1.0, 0.0));
        let z4 = Group::cyclic(4).unwrap();
        let v = z4.char_eval(&c, &z4.element(2)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn char_eval_dimension_mismatch() {
        let g: Group = "Z3xZ5".parse().unwrap();
        let c = Character { freq: vec![1] };
        assert!(matches!(
            g.char_eval(&c, &g.element(3)),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn orthogonality_small_groups() {
        for lit in ["Z1", "Z7", "Z12", "Z2xZ2", "Z3xZ3xZ5", "Z4xZ8", "Z256", "Z2xZ2xZ2xZ2xZ2xZ2xZ2xZ2"] {
            let g: Group = lit.parse().unwrap();
            let n = g.order() as f64;
            for c in 0..g.order() {
                let s: Complex64 = (0..g.order()).map(|x| g.char_eval_index(c, x)).sum();
                if c == 0 {
                    assert!((s - n).norm() < 1e-9 * n);
                } else {
                    assert!(s.norm() <= 1e-9 * n, "{lit} char {c}: {s}");
                }
            }
        }
    }

    #[test]
    fn inverse_character_closes() {
        let g: Group = "Z3xZ4".parse().unwrap();
        for c in g.characters() {
            let inv = c.inverse(&g);
            let ci = g.character_index(&inv).unwrap();
            for x in 0..g.order() {
                let p = g.char_eval_index(g.character_index(&c).unwrap(), x) * g.char_eval_index(ci, x);
                assert!((p - 1.0).norm() < 1e-12);
            }
        }
        assert_eq!(g.characters().count(), 12);
    }

    fn arb_group() -> impl Strategy<Value = Group> {
        prop::collection::vec(1usize..9, 1..4).prop_map(|v| Group::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn abelian_group_laws(g in arb_group(), seeds in prop::collection::vec(any::<usize>(), 3)) {
            let n = g.order();
            let (a, b, c) = (seeds[0] % n, seeds[1] % n, seeds[2] % n);
            prop_assert_eq!(g.add(a, b), g.add(b, a));
            prop_assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
            prop_assert_eq!(g.add(a, g.neg(a)), 0);
            prop_assert_eq!(g.add(a, 0), a);
            prop_assert_eq!(g.sub(g.add(a, b), b), a);
            prop_assert_eq!(g.scale(a, 3), g.add(a, g.add(a, a)));
            prop_assert_eq!(g.scale(a, -1), g.neg(a));
            let e = g.element(a);
            prop_assert_eq!(g.index_of(&e).unwrap(), a);
            let twice: Vec<i64> = e.coords.iter().map(|&c| c as i64).collect();
            prop_assert_eq!(g.element_from_coords(&twice).unwrap(), e);
        }

        #[test]
        fn characters_are_homomorphisms(g in arb_group(), seeds in prop::collection::vec(any::<usize>(), 3)) {
            let n = g.order();
            let (c, x, y) = (seeds[0] % n, seeds[1] % n, seeds[2] % n);
            let lhs = g.char_eval_index(c, x) * g.char_eval_index(c, y);
            let rhs = g.char_eval_index(c, g.add(x, y));
            prop_assert!((lhs - rhs).norm() < 1e-12);
            prop_assert!((g.char_eval_index(c, x).norm() - 1.0).abs() < 1e-12);
            let d = g.char_distance(c, x);
            prop_assert!((d - (Complex64::new(1.0, 0.0) - g.char_eval_index(c, x)).norm()).abs() < 1e-12);
        }
    }
}
