//! The witness-function iteration.
//!
//! Given `A` and a family of sets close to `A` in some norm, build
//! `f : G → [0,1]` close to `1_A` such that every pair `B, C` of the family
//! satisfies `1_B *_T 1_C(x) ≤ δ₂⁻² f *_T f(x) + 2κδ₂N` at every `x`.
//!
//! `f_1 = 1_A`; while some pair `(B, C)` and point `x` violate
//! `1_B *_T 1_C(x) ≤ f_j *_T f_j(x) + 2κδ₂N`, add whichever of `1_B`, `1_C`
//! enlarges the support more (`B` on ties). Each step grows the support by at
//! least `δ₂N`, so the loop stops after `J ≤ δ₂⁻¹` steps and `f = f_J / J`.
//!
//! The universally quantified family of the statement is replaced by an explicit
//! [`CandidateFamily`]; pairs are scanned in family order, then `x` in element order.

use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::{kappa, t_convolve, t_convolve_sets, t_convolve_weights, Kappa, OperationTable};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::spectral::{check_same_group, uniformity, GroupFunction, IndicatorSet};

/// A norm on functions `G → ℂ`. Only the triangle inequality is relied on.
pub trait Norm: Sync {
    fn name(&self) -> &str;
    fn eval(&self, f: &GroupFunction) -> f64;
}

/// `‖g‖ = N⁻¹ max_χ |ĝ(χ)|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FourierSupNorm;

impl Norm for FourierSupNorm {
    fn name(&self) -> &str {
        "fourier-sup"
    }

    fn eval(&self, f: &GroupFunction) -> f64 {
        uniformity(f)
    }
}

/// `‖g‖ = max_x |g(x)|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SupNorm;

impl Norm for SupNorm {
    fn name(&self) -> &str {
        "sup"
    }

    fn eval(&self, f: &GroupFunction) -> f64 {
        f.sup_norm()
    }
}

/// Slack for floating-point norm comparisons against `δ₁`.
const NORM_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyMode {
    ExplicitList,
    Exhaustive,
    TranslatesOfA,
}

/// The explicit list of candidate sets standing in for "every `B` close to `A`".
#[derive(Clone, Debug)]
pub struct CandidateFamily {
    group: Group,
    sets: Vec<IndicatorSet>,
    mode: FamilyMode,
}

impl CandidateFamily {
    pub fn explicit(group: &Group, sets: Vec<IndicatorSet>) -> Result<Self> {
        for s in &sets {
            check_same_group(group, s.group())?;
        }
        Ok(Self {
            group: group.clone(),
            sets,
            mode: FamilyMode::ExplicitList,
        })
    }

    /// Every subset of `G`, in mask order. Limited to `N ≤ 22`.
    pub fn exhaustive(group: &Group) -> Result<Self> {
        let n = group.order();
        if n > 22 {
            return Err(Error::Precondition(format!("exhaustive family needs N ≤ 22, got {n}")));
        }
        let sets = (0u64..1 << n)
            .map(|mask| IndicatorSet::from_mask(group, mask))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            group: group.clone(),
            sets,
            mode: FamilyMode::Exhaustive,
        })
    }

    /// `{A + t : t ∈ shifts}` in the order given.
    pub fn translates(a: &IndicatorSet, shifts: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = a.group().order();
        let sets = shifts
            .into_iter()
            .map(|t| {
                if t >= n {
                    Err(Error::Precondition(format!("shift {t} outside group of order {n}")))
                } else {
                    Ok(a.translate(t))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            group: a.group().clone(),
            sets,
            mode: FamilyMode::TranslatesOfA,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn sets(&self) -> &[IndicatorSet] {
        &self.sets
    }

    pub fn mode(&self) -> FamilyMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Indices of the sets with `‖1_A − 1_B‖ ≤ δ₁`.
    pub fn admitted(&self, a: &IndicatorSet, norm: &dyn Norm, delta1: f64) -> Vec<usize> {
        let fa = a.to_function();
        let keep: Vec<bool> = self
            .sets
            .par_iter()
            .map(|b| {
                let diff = fa.checked_sub(&b.to_function()).expect("family shares the group of A");
                norm.eval(&diff) <= delta1 + NORM_SLACK
            })
            .collect();
        keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect()
    }
}

/// One pass through the violation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Family index of the set added to `f_j`.
    pub chosen_set_index: usize,
    pub violating_x: usize,
    /// `|supp f_{j+1}|`.
    pub support_size: usize,
    #[serde(skip)]
    pub pair: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    group: Group,
    /// `f_J` pointwise.
    pub multiplicity: Vec<u64>,
    /// The divisor `J`.
    pub j: u64,
    pub kappa: Kappa,
    /// Family indices that passed the `δ₁` filter.
    pub admitted: Vec<usize>,
    pub trace: Vec<IterationRecord>,
}

impl WitnessResult {
    /// `f = J⁻¹ f_J`.
    pub fn f(&self) -> GroupFunction {
        let j = self.j as f64;
        GroupFunction::from_real(self.group.clone(), self.multiplicity.iter().map(|&m| m as f64 / j).collect())
            .expect("multiplicity has one entry per element")
    }

    pub fn support_size(&self) -> usize {
        self.multiplicity.iter().filter(|&&m| m > 0).count()
    }

    /// The trace as the JSON array `[{iteration, chosen_set_index, violating_x, support_size}]`.
    pub fn trace_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.trace).expect("trace records serialize")
    }
}

/// `⌈δ₂⁻¹⌉`, the iteration cap.
pub fn iteration_cap(delta2: f64) -> u64 {
    (1.0 / delta2).ceil() as u64
}

fn check_inputs(a: &IndicatorSet, family: &CandidateFamily, t: &OperationTable, delta1: f64, delta2: f64) -> Result<()> {
    check_same_group(a.group(), family.group())?;
    check_same_group(a.group(), t.group())?;
    if !(delta1 > 0.0) || !(delta2 > 0.0) {
        return Err(Error::Precondition(format!("need δ₁, δ₂ > 0, got {delta1}, {delta2}")));
    }
    let n = a.group().order() as f64;
    if a.is_empty() || (a.len() as f64) < delta2 * n {
        return Err(Error::Precondition(format!(
            "need |A| ≥ δ₂N > 0, got |A| = {} and δ₂N = {}",
            a.len(),
            delta2 * n
        )));
    }
    Ok(())
}

/// Spot-checks the triangle inequality and symmetry on differences `1_B − 1_A`.
fn spot_check_norm(norm: &dyn Norm, a: &IndicatorSet, family: &CandidateFamily, admitted: &[usize]) -> Result<()> {
    let fa = a.to_function();
    let diffs: Vec<GroupFunction> = admitted
        .iter()
        .take(6)
        .map(|&i| family.sets()[i].to_function().checked_sub(&fa))
        .collect::<Result<_>>()?;
    for x in &diffs {
        let nx = norm.eval(x);
        if (norm.eval(&x.scaled(-1.0)) - nx).abs() > 1e-9 * nx.max(1.0) {
            return Err(Error::Precondition(format!("norm {} is not symmetric", norm.name())));
        }
        for y in &diffs {
            let s = x.checked_add(y)?;
            if norm.eval(&s) > nx + norm.eval(y) + 1e-9 {
                return Err(Error::Precondition(format!("norm {} violates the triangle inequality", norm.name())));
            }
        }
    }
    Ok(())
}

/// First `(pair, x)` in scan order where `1_B *_T 1_C(x) > F(x) + slack`.
fn first_violation(
    sets: &[&IndicatorSet],
    f_conv: &[u64],
    slack: f64,
    t: &OperationTable,
) -> Option<(usize, usize, usize)> {
    let m = sets.len();
    (0..m * m).into_par_iter().find_map_first(|p| {
        let (i, j) = (p / m, p % m);
        let conv = t_convolve_sets(sets[i], sets[j], t);
        conv.iter()
            .zip(f_conv)
            .position(|(&c, &f)| c as f64 > f as f64 + slack)
            .map(|x| (i, j, x))
    })
}

/// Runs the iteration. An empty filtered family returns `f = 1_A`, `J = 1`.
pub fn build_witness(
    a: &IndicatorSet,
    family: &CandidateFamily,
    norm: &dyn Norm,
    t: &OperationTable,
    delta1: f64,
    delta2: f64,
) -> Result<WitnessResult> {
    check_inputs(a, family, t, delta1, delta2)?;
    let group = a.group().clone();
    let n = group.order();
    let admitted = family.admitted(a, norm, delta1);
    spot_check_norm(norm, a, family, &admitted)?;
    let kappa = kappa(t);
    let slack = 2.0 * kappa.kappa as f64 * delta2 * n as f64;
    let sets: Vec<&IndicatorSet> = admitted.iter().map(|&i| &family.sets()[i]).collect();

    let mut multiplicity: Vec<u64> = (0..n).map(|x| a.contains(x) as u64).collect();
    let mut support = a.clone();
    let mut trace = Vec::new();
    let cap = iteration_cap(delta2);
    let mut j: u64 = 1;
    while let Some((bi, ci, x)) = first_violation(&sets, &t_convolve_weights(&multiplicity, &multiplicity, t), slack, t) {
        let grow_b = sets[bi].difference(&support)?.len();
        let grow_c = sets[ci].difference(&support)?.len();
        let (pick, growth) = if grow_b >= grow_c { (bi, grow_b) } else { (ci, grow_c) };
        if (growth as f64) < delta2 * n as f64 || j + 1 > cap {
            return Err(Error::Internal(format!(
                "iteration {j}: support grew by {growth} (< δ₂N = {}) or exceeded the cap {cap}",
                delta2 * n as f64
            )));
        }
        for y in sets[pick].iter() {
            multiplicity[y] += 1;
        }
        support.or_assign(sets[pick]);
        j += 1;
        trace.push(IterationRecord {
            iteration: j as usize - 1,
            chosen_set_index: admitted[pick],
            violating_x: x,
            support_size: support.len(),
            pair: (admitted[bi], admitted[ci]),
        });
    }
    Ok(WitnessResult {
        group,
        multiplicity,
        j,
        kappa,
        admitted,
        trace,
    })
}

/// Outcome of an independent recheck of the witness guarantees.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessVerification {
    pub norm_value: f64,
    pub norm_ok: bool,
    /// `min over pairs, x of (δ₂⁻² f*_T f(x) + 2κδ₂N) − 1_B*_T 1_C(x)`; `None` for an empty family.
    pub worst_margin: Option<f64>,
    pub domination_ok: bool,
}

impl WitnessVerification {
    pub fn passed(&self) -> bool {
        self.norm_ok && self.domination_ok
    }
}

/// Rechecks `‖f − 1_A‖ ≤ δ₁` and the domination inequality for an arbitrary `f`,
/// recomputing the filtered family, `κ` and `f *_T f` on the floating-point path.
pub fn verify_function(
    f: &GroupFunction,
    a: &IndicatorSet,
    family: &CandidateFamily,
    norm: &dyn Norm,
    t: &OperationTable,
    delta1: f64,
    delta2: f64,
) -> Result<WitnessVerification> {
    check_same_group(f.group(), a.group())?;
    check_same_group(a.group(), family.group())?;
    check_same_group(a.group(), t.group())?;
    let n = a.group().order() as f64;
    let fa = a.to_function();
    let norm_value = norm.eval(&f.checked_sub(&fa)?);
    let norm_ok = norm_value <= delta1 + NORM_SLACK;

    let members: Vec<&IndicatorSet> = family
        .sets()
        .iter()
        .filter(|b| norm.eval(&fa.checked_sub(&b.to_function()).expect("same group")) <= delta1 + NORM_SLACK)
        .collect();
    let k = kappa(t).kappa as f64;
    let ff = t_convolve(f, f, t)?;
    let rhs: Vec<f64> = ff.values().iter().map(|v| v.re / (delta2 * delta2) + 2.0 * k * delta2 * n).collect();
    let tol = 1e-9 * n * n;
    let m = members.len();
    let worst = (0..m * m)
        .into_par_iter()
        .map(|p| {
            let conv = t_convolve_sets(members[p / m], members[p % m], t);
            conv.iter().zip(&rhs).map(|(&c, r)| r - c as f64).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let worst_margin = (m > 0).then_some(worst);
    Ok(WitnessVerification {
        norm_value,
        norm_ok,
        worst_margin,
        domination_ok: worst_margin.map_or(true, |w| w >= -tol),
    })
}

/// True iff both guarantees of [`build_witness`] hold for `result`.
pub fn verify_witness(
    result: &WitnessResult,
    a: &IndicatorSet,
    family: &CandidateFamily,
    norm: &dyn Norm,
    t: &OperationTable,
    delta1: f64,
    delta2: f64,
) -> Result<bool> {
    Ok(verify_function(&result.f(), a, family, norm, t, delta1, delta2)?.passed())
}

/// `I = ⋂_B {x : 1_B*1_B(x) ≤ γθ²N}` over the family members `B` with
/// `1_A − 1_B` δ-uniform, `θ = |A|/N`. An empty intersection index gives `G`.
pub fn levelset_intersection(a: &IndicatorSet, family: &CandidateFamily, gamma: f64, delta: f64) -> Result<IndicatorSet> {
    check_same_group(a.group(), family.group())?;
    let g = a.group();
    let n = g.order() as f64;
    let theta = a.density();
    let threshold = gamma * theta * theta * n;
    let admitted = family.admitted(a, &FourierSupNorm, delta);
    let mut out = IndicatorSet::full(g);
    for i in admitted {
        let counts = crate::convolution::set_convolution(&family.sets()[i], &family.sets()[i])?;
        let level = IndicatorSet::from_predicate(g, |x| counts[x] as f64 <= threshold);
        out = out.intersection(&level)?;
    }
    Ok(out)
}

/// The lower bound for `|I|`: `|{x : 1_A*1_A(x) ≤ γ³θ⁶N/128}| − 2¹⁴γ⁻⁶θ⁻¹²δ²(4θ+δ)N`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntersectionBound {
    pub small_level_size: usize,
    pub penalty: f64,
    pub bound: f64,
}

pub fn intersection_lower_bound(a: &IndicatorSet, gamma: f64, delta: f64) -> Result<IntersectionBound> {
    let n = a.group().order() as f64;
    let theta = a.density();
    let counts = crate::convolution::set_convolution(a, a)?;
    let cut = gamma.powi(3) * theta.powi(6) * n / 128.0;
    let small_level_size = counts.iter().filter(|&&c| c as f64 <= cut).count();
    let penalty = 2f64.powi(14) * gamma.powi(-6) * theta.powi(-12) * delta * delta * (4.0 * theta + delta) * n;
    Ok(IntersectionBound {
        small_level_size,
        penalty,
        bound: small_level_size as f64 - penalty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::set_convolution;

    fn z(n: usize) -> Group {
        Group::cyclic(n).unwrap()
    }

    fn set(g: &Group, xs: &[usize]) -> IndicatorSet {
        IndicatorSet::from_indices(g, xs.iter().copied()).unwrap()
    }

    #[test]
    fn single_set_family_stops_immediately() {
        let g = z(11);
        let a = set(&g, &[0, 2, 3, 7]);
        let fam = CandidateFamily::explicit(&g, vec![a.clone()]).unwrap();
        let t = OperationTable::addition(&g);
        let r = build_witness(&a, &fam, &FourierSupNorm, &t, 0.1, 0.2).unwrap();
        assert_eq!(r.j, 1);
        assert!(r.trace.is_empty());
        assert_eq!(r.f(), a.to_function());
        assert!(verify_witness(&r, &a, &fam, &FourierSupNorm, &t, 0.1, 0.2).unwrap());
    }

    #[test]
    fn quadratic_residues_z7_fires() {
        let g = z(7);
        let a = set(&g, &[1, 2, 4]);
        assert_eq!(set_convolution(&a, &a).unwrap(), vec![0, 1, 1, 2, 1, 2, 2]);
        let fam = CandidateFamily::translates(&a, [0, 2]).unwrap();
        let t = OperationTable::addition(&g);
        let (d1, d2) = (1.0, 1.0 / 14.0);
        let r = build_witness(&a, &fam, &FourierSupNorm, &t, d1, d2).unwrap();
        assert!(!r.trace.is_empty());
        assert_eq!(r.trace[0].violating_x, 0);
        assert!(r.trace[0].support_size > 3);
        assert!(r.j <= iteration_cap(d2));
        assert!(verify_witness(&r, &a, &fam, &FourierSupNorm, &t, d1, d2).unwrap());
    }

    #[test]
    fn exhaustive_z5() {
        let g = z(5);
        let a = set(&g, &[0, 1]);
        let fam = CandidateFamily::exhaustive(&g).unwrap();
        assert_eq!(fam.len(), 32);
        let t = OperationTable::addition(&g);
        let r = build_witness(&a, &fam, &FourierSupNorm, &t, 2.0, 0.4).unwrap();
        assert_eq!(r.admitted.len(), 32);
        assert!(r.j <= 3);
        let v = verify_function(&r.f(), &a, &fam, &FourierSupNorm, &t, 2.0, 0.4).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn zero_function_fails_verification() {
        let g = z(10);
        let a = IndicatorSet::full(&g);
        let fam = CandidateFamily::explicit(&g, vec![IndicatorSet::full(&g)]).unwrap();
        let t = OperationTable::addition(&g);
        let v = verify_function(&GroupFunction::zeros(&g), &a, &fam, &FourierSupNorm, &t, 0.5, 0.1).unwrap();
        assert!(v.norm_ok == false || v.domination_ok == false);
        assert!(!v.domination_ok);
    }

    #[test]
    fn generous_delta2_accepts_indicator() {
        let g = z(9);
        let a = set(&g, &[0, 1, 5]);
        let fam = CandidateFamily::explicit(&g, vec![a.clone()]).unwrap();
        let t = OperationTable::addition(&g);
        let v = verify_function(&a.to_function(), &a, &fam, &SupNorm, &t, 0.5, 1.0 / 3.0).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = z(10);
        let a = set(&g, &[1]);
        let fam = CandidateFamily::explicit(&g, vec![]).unwrap();
        let t = OperationTable::addition(&g);
        assert!(build_witness(&a, &fam, &FourierSupNorm, &t, 0.1, 0.5).is_err());
        assert!(build_witness(&IndicatorSet::empty(&g), &fam, &FourierSupNorm, &t, 0.1, 0.05).is_err());
        assert!(build_witness(&a, &fam, &FourierSupNorm, &t, 0.0, 0.1).is_err());
        let other = OperationTable::addition(&z(11));
        assert!(build_witness(&a, &fam, &FourierSupNorm, &other, 0.1, 0.1).is_err());
        assert!(CandidateFamily::exhaustive(&z(23)).is_err());
        assert!(CandidateFamily::translates(&a, [10]).is_err());
    }

    #[test]
    fn empty_filtered_family_is_vacuous() {
        let g = z(10);
        let a = set(&g, &[1, 2, 3]);
        let far = set(&g, &[5, 6, 7, 8, 9]);
        let fam = CandidateFamily::explicit(&g, vec![far]).unwrap();
        let t = OperationTable::addition(&g);
        let r = build_witness(&a, &fam, &SupNorm, &t, 0.5, 0.1).unwrap();
        assert!(r.admitted.is_empty());
        assert_eq!(r.j, 1);
        assert_eq!(r.f(), a.to_function());
    }

    #[test]
    fn non_abelian_style_table() {
        // T(a, b) = 2a + b on Z_8: κ1 = 1, κ2 = 2.
        let g = z(8);
        let t = OperationTable::from_fn(&g, |a, b| (2 * a + b) % 8).unwrap();
        assert_eq!(kappa(&t).kappa, 2);
        let a = set(&g, &[0, 1, 2, 5]);
        let fam = CandidateFamily::translates(&a, 0..8).unwrap();
        let r = build_witness(&a, &fam, &SupNorm, &t, 2.0, 0.125).unwrap();
        assert!(verify_witness(&r, &a, &fam, &SupNorm, &t, 2.0, 0.125).unwrap());
        assert!(r.j <= iteration_cap(0.125));
    }

    #[test]
    fn trace_json_shape() {
        let g = z(7);
        let a = set(&g, &[1, 2, 4]);
        let fam = CandidateFamily::translates(&a, [0, 2]).unwrap();
        let r = build_witness(&a, &fam, &FourierSupNorm, &OperationTable::addition(&g), 1.0, 1.0 / 14.0).unwrap();
        let v = r.trace_json();
        let first = &v.as_array().unwrap()[0];
        let mut keys: Vec<&str> = first.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(keys, vec!["chosen_set_index", "iteration", "support_size", "violating_x"]);
        assert_eq!(first["iteration"], 1);
    }

    #[test]
    fn intersection_examples() {
        let g = z(40);
        let a = IndicatorSet::from_indices(&g, 0..12).unwrap();
        let fam = CandidateFamily::explicit(&g, vec![a.clone()]).unwrap();
        let theta = a.density();
        let own = set_convolution(&a, &a).unwrap();
        let expected = IndicatorSet::from_predicate(&g, |x| own[x] as f64 <= 0.5 * theta * theta * 40.0);
        assert_eq!(levelset_intersection(&a, &fam, 0.5, 0.01).unwrap(), expected);
    }
}
