//! Group and generalized (`T`-) convolutions, sumsets, level-sets and `κ(T)`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::spectral::{check_same_group, transform, GroupFunction, IndicatorSet};

/// Above this order, exact set convolutions come from the rounded fast transform
/// instead of pair enumeration.
pub const EXACT_DIRECT_LIMIT: usize = 4096;

/// A binary operation `T : G × G → G` as a dense `N × N` table of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTable {
    group: Group,
    table: Vec<u32>,
}

impl OperationTable {
    pub fn from_fn(group: &Group, mut op: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = op(a, b);
                if v >= n {
                    return Err(Error::Precondition(format!("T({a},{b}) = {v} is not an element index < {n}")));
                }
                table.push(v as u32);
            }
        }
        Ok(Self {
            group: group.clone(),
            table,
        })
    }

    /// Row-major table: `entries[a·N + b] = T(a, b)`.
    pub fn from_entries(group: &Group, entries: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if entries.len() != n * n {
            return Err(Error::Precondition(format!("table has {} entries, expected {}", entries.len(), n * n)));
        }
        Self::from_fn(group, |a, b| entries[a * n + b])
    }

    /// `T(a, b) = a + b`.
    pub fn addition(group: &Group) -> Self {
        Self::from_fn(group, |a, b| group.add(a, b)).expect("group addition is closed")
    }

    /// `T(a, b) = a`.
    pub fn left_projection(group: &Group) -> Self {
        Self::from_fn(group, |a, _| a).expect("projection is closed")
    }

    pub fn constant(group: &Group, value: usize) -> Result<Self> {
        Self::from_fn(group, |_, _| value)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.group.order() + b] as usize
    }

    pub(crate) fn row(&self, a: usize) -> &[u32] {
        let n = self.group.order();
        &self.table[a * n..(a + 1) * n]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Kappa {
    pub kappa1: usize,
    pub kappa2: usize,
    pub kappa: usize,
}

/// `κ1 = max_{x,a} #{b : T(a,b) = x}`, `κ2 = max_{x,a} #{b : T(b,a) = x}`, `κ = max(κ1, κ2)`.
pub fn kappa(t: &OperationTable) -> Kappa {
    let n = t.size();
    let row_max = |counts: &mut Vec<usize>, vals: &mut dyn Iterator<Item = usize>| {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut best = 0;
        for v in vals {
            counts[v] += 1;
            best = best.max(counts[v]);
        }
        best
    };
    let kappa1 = (0..n)
        .into_par_iter()
        .map_init(|| vec![0usize; n], |counts, a| row_max(counts, &mut (0..n).map(|b| t.apply(a, b))))
        .max()
        .unwrap_or(0);
    let kappa2 = (0..n)
        .into_par_iter()
        .map_init(|| vec![0usize; n], |counts, a| row_max(counts, &mut (0..n).map(|b| t.apply(b, a))))
        .max()
        .unwrap_or(0);
    Kappa {
        kappa1,
        kappa2,
        kappa: kappa1.max(kappa2),
    }
}

/// `f*g(x) = Σ_{a+b=x} f(a)g(b)` through the fast transform.
pub fn convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    check_same_group(f.group(), g.group())?;
    let group = f.group();
    let ff = transform::forward(group, f.values());
    let gg = transform::forward(group, g.values());
    let prod: Vec<Complex64> = ff.iter().zip(&gg).map(|(a, b)| a * b).collect();
    GroupFunction::new(group.clone(), transform::inverse(group, &prod))
}

/// Pair-enumeration oracle for [`convolve`].
pub fn convolve_direct(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    check_same_group(f.group(), g.group())?;
    let group = f.group();
    let n = group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (a, fa) in f.values().iter().enumerate() {
        if *fa == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (b, gb) in g.values().iter().enumerate() {
            out[group.add(a, b)] += fa * gb;
        }
    }
    GroupFunction::new(group.clone(), out)
}

/// `f *_T g(x) = Σ_{T(a,b)=x} f(a)g(b)` by direct enumeration.
pub fn t_convolve(f: &GroupFunction, g: &GroupFunction, t: &OperationTable) -> Result<GroupFunction> {
    let n = t.size();
    if f.len() != n || g.len() != n {
        return Err(Error::Precondition(format!(
            "T-convolution carrier has {n} elements but operands have {} and {}",
            f.len(),
            g.len()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (a, fa) in f.values().iter().enumerate() {
        if *fa == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (b, &x) in t.row(a).iter().enumerate() {
            out[x as usize] += fa * g.get(b);
        }
    }
    GroupFunction::new(f.group().clone(), out)
}

/// Exact `Σ_{T(a,b)=x} m(a)·w(b)` for nonnegative integer weights.
pub fn t_convolve_weights(m: &[u64], w: &[u64], t: &OperationTable) -> Vec<u64> {
    let n = t.size();
    debug_assert!(m.len() == n && w.len() == n);
    let mut out = vec![0u64; n];
    for (a, &ma) in m.iter().enumerate() {
        if ma == 0 {
            continue;
        }
        for (b, &x) in t.row(a).iter().enumerate() {
            out[x as usize] += ma * w[b];
        }
    }
    out
}

/// Exact `1_B *_T 1_C`.
pub fn t_convolve_sets(b: &IndicatorSet, c: &IndicatorSet, t: &OperationTable) -> Vec<u64> {
    let n = t.size();
    let mut out = vec![0u64; n];
    let cs: Vec<usize> = c.iter().collect();
    for a in b.iter() {
        let row = t.row(a);
        for &y in &cs {
            out[row[y] as usize] += 1;
        }
    }
    out
}

/// Exact `1_A * 1_B` by pair enumeration.
pub fn set_convolution_direct(a: &IndicatorSet, b: &IndicatorSet) -> Result<Vec<u64>> {
    check_same_group(a.group(), b.group())?;
    let g = a.group();
    let mut out = vec![0u64; g.order()];
    let bs: Vec<usize> = b.iter().collect();
    for x in a.iter() {
        for &y in &bs {
            out[g.add(x, y)] += 1;
        }
    }
    Ok(out)
}

/// Exact `1_A * 1_B` as integer counts.
///
/// Pair enumeration up to [`EXACT_DIRECT_LIMIT`]; above it the fast transform
/// is rounded to the nearest integer, with the rounding residual checked.
pub fn set_convolution(a: &IndicatorSet, b: &IndicatorSet) -> Result<Vec<u64>> {
    check_same_group(a.group(), b.group())?;
    let n = a.group().order();
    if n <= EXACT_DIRECT_LIMIT {
        return set_convolution_direct(a, b);
    }
    let conv = convolve(&a.to_function(), &b.to_function())?;
    conv.values()
        .iter()
        .map(|v| {
            let r = v.re.round();
            if (v.re - r).abs() > 0.25 || v.im.abs() > 0.25 || r < 0.0 {
                return Err(Error::Internal(format!("transform convolution value {v} is not near an integer")));
            }
            Ok(r as u64)
        })
        .collect()
}

/// `A + B = {a + b : a ∈ A, b ∈ B}`.
pub fn sumset(a: &IndicatorSet, b: &IndicatorSet) -> Result<IndicatorSet> {
    check_same_group(a.group(), b.group())?;
    let mut out = IndicatorSet::empty(a.group());
    if b.is_empty() {
        return Ok(out);
    }
    for x in a.iter() {
        out.or_assign(&b.translate(x));
    }
    Ok(out)
}

/// `supp(f)` for integer counts.
pub fn support(counts: &[u64], group: &Group) -> IndicatorSet {
    IndicatorSet::from_predicate(group, |x| counts[x] > 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    /// `value < threshold`
    Strict,
    /// `value ≤ threshold`
    Weak,
}

impl Strictness {
    #[inline]
    pub fn admits(self, value: f64, threshold: f64) -> bool {
        match self {
            Strictness::Strict => value < threshold,
            Strictness::Weak => value <= threshold,
        }
    }
}

/// `{x : conv(x) < threshold}` or `{x : conv(x) ≤ threshold}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSet {
    pub threshold: f64,
    pub strictness: Strictness,
    pub members: IndicatorSet,
}

/// Level-set of a real-valued function (imaginary parts must be negligible).
pub fn level_set(conv: &GroupFunction, threshold: f64, strictness: Strictness) -> Result<LevelSet> {
    let scale = conv.sup_norm().max(1.0);
    if conv.values().iter().any(|v| v.im.abs() > 1e-9 * scale) {
        return Err(Error::Precondition("level-set of a non-real function".into()));
    }
    let members = IndicatorSet::from_predicate(conv.group(), |x| strictness.admits(conv.get(x).re, threshold));
    Ok(LevelSet {
        threshold,
        strictness,
        members,
    })
}

/// Level-set of exact integer convolution counts.
pub fn level_set_counts(group: &Group, counts: &[u64], threshold: f64, strictness: Strictness) -> LevelSet {
    let members = IndicatorSet::from_predicate(group, |x| strictness.admits(counts[x] as f64, threshold));
    LevelSet {
        threshold,
        strictness,
        members,
    }
}

/// Parses a set file: one element per line as comma-separated coordinates,
/// `#` starts a comment, blank lines are ignored.
pub fn parse_set_file(group: &Group, text: &str) -> Result<IndicatorSet> {
    let mut set = IndicatorSet::empty(group);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let coords = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad coordinate {:?}", lineno + 1, c.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let idx = group
            .index_of_coords(&coords)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        set.insert(idx);
    }
    Ok(set)
}

pub fn format_set_file(set: &IndicatorSet) -> String {
    let g = set.group();
    let mut out = format!("# {} elements of {}\n", set.len(), g);
    for x in set.iter() {
        let coords: Vec<String> = g.coords_of(x).iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(","));
        out.push('\n');
    }
    out
}

/// Convolution dump: CSV with columns `x_index, coords, value`.
pub fn write_convolution_csv<W: Write>(group: &Group, values: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x_index", "coords", "value"])?;
    for (x, v) in values.iter().enumerate() {
        let coords: Vec<String> = group.coords_of(x).iter().map(|c| c.to_string()).collect();
        w.write_record([x.to_string(), coords.join(","), format!("{v}")])?;
    }
    w.flush()?;
    Ok(())
}
