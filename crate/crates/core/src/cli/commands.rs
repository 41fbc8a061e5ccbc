//! One function per subcommand, each producing an [`Outcome`].

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::*;
use crate::bohr::{best_simultaneous_step, dirichlet_simultaneous, residue_norm, BohrSet};
use crate::constructions::{
    gap_criterion_check, interval_dilate_batch, interval_dilate_construction, levelset_bohr_translate, max_probe_size,
    probing_set_search, pseudorandom_probe_check, qr_level_sets_disjoint, qr_uniformity_check, quadratic_residues,
    random_probe_set, ExperimentConfig, ProbingSearch,
};
use crate::convolution::{
    level_set_counts, parse_set_file, set_convolution, sumset, write_convolution_csv, OperationTable, Strictness,
};
use crate::error::{Error, Result};
use crate::lemmas::{bohr_check, run_lemma_suites};
use crate::rng::CounterRng;
use crate::spectral::{fourier_transform, uniformity, IndicatorSet};
use crate::witness::{
    build_witness, intersection_lower_bound, iteration_cap, levelset_intersection, verify_function, CandidateFamily,
    FourierSupNorm, Norm, SupNorm,
};

/// Largest `N` for which the QR level-set scan over all shifts runs.
const QR_SHIFT_SCAN_LIMIT: u64 = 1100;
/// Largest family the Bohr-translate witness path builds.
const TRANSLATE_FAMILY_LIMIT: usize = 64;
/// Largest element lists inlined in reports.
const LIST_LIMIT: usize = 4096;

pub(super) struct Outcome {
    pub params: Value,
    pub seed: Option<u64>,
    pub findings: Vec<String>,
    pub results: Value,
    pub out: Option<PathBuf>,
    pub csv: Option<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn new(params: &impl Serialize, io: &OutputArgs, results: Value) -> Self {
        Self {
            params: serde_json::to_value(params).expect("parameters serialize"),
            seed: None,
            findings: Vec::new(),
            results,
            out: io.out.clone(),
            csv: None,
        }
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn findings(mut self, findings: Vec<String>) -> Self {
        self.findings = findings;
        self
    }

    fn csv(mut self, path: &Option<PathBuf>, bytes: impl FnOnce() -> Result<Vec<u8>>) -> Result<Self> {
        if let Some(p) = path {
            self.csv = Some((p.clone(), bytes()?));
        }
        Ok(self)
    }
}

pub(super) fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Transform(a) => transform(a),
        Command::Convolve(a) => convolve(a),
        Command::Sumset(a) => sumset_cmd(a),
        Command::Levelset(a) => levelset(a),
        Command::Bohr(a) => bohr(a),
        Command::ApExtract(a) => ap_extract(a),
        Command::Dirichlet(a) => dirichlet(a),
        Command::Witness(a) => witness(a),
        Command::QrDemo(a) => qr_demo(a),
        Command::Thm2Construct(a) => thm2(a),
        Command::Thm1Probe(a) => thm1(a),
        Command::Thm3Check(a) => thm3(a),
        Command::Thm4BohrTranslate(a) => thm4(a),
        Command::Cor6Gaps(a) => cor6(a),
        Command::VerifyLemmas(a) => verify_lemmas(a),
    }
}

fn read_set(group: &Group, path: &Path) -> Result<IndicatorSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_set_file(group, &text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_pair(group: &Group, set: &Path, with: &Option<PathBuf>) -> Result<(IndicatorSet, IndicatorSet)> {
    let a = read_set(group, set)?;
    let b = match with {
        Some(p) => read_set(group, p)?,
        None => a.clone(),
    };
    Ok((a, b))
}

/// Characters separated by `;` with coordinates separated by `,`; in a cyclic
/// group `,` also separates characters.
fn parse_freqs(group: &Group, text: &str) -> Result<Vec<usize>> {
    let seps: &[char] = if group.rank() == 1 { &[';', ','] } else { &[';'] };
    text.split(seps)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|ch| {
            let coords = ch
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad frequency coordinate {c:?}"))))
                .collect::<Result<Vec<_>>>()?;
            group.character_index(&group.character_from_freq(&coords)?)
        })
        .collect()
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Parse(format!("bad {what} {s:?}"))))
        .collect()
}

fn parse_table(group: &Group, spec: &str) -> Result<OperationTable> {
    if spec == "add" {
        return Ok(OperationTable::addition(group));
    }
    let coeffs = spec
        .strip_prefix("lin:")
        .ok_or_else(|| Error::Parse(format!("table {spec:?}: expected `add` or `lin:a,b`")))?;
    let ab: Vec<i64> = parse_list(coeffs, "table coefficient")?;
    let [a, b] = ab[..] else {
        return Err(Error::Parse(format!("table {spec:?}: expected two coefficients")));
    };
    OperationTable::from_fn(group, |x, y| group.add(group.scale(x, a), group.scale(y, b)))
}

fn coords(group: &Group, x: usize) -> Vec<usize> {
    group.coords_of(x)
}

fn element_list(group: &Group, set: &IndicatorSet) -> Value {
    if set.len() > LIST_LIMIT {
        return Value::Null;
    }
    Value::Array(set.iter().map(|x| json!(coords(group, x))).collect())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("--{name} = {v} outside (0, 1]")))
    }
}

fn transform(a: TransformArgs) -> Result<Outcome> {
    let g = &a.group;
    let set = read_set(g, &a.set)?;
    let f = set.to_function();
    let spec = fourier_transform(&f);
    let n = g.order() as f64;
    let energy = spec.energy();
    let expected = n * f.l2_norm_sq();
    let mut findings = Vec::new();
    if (energy - expected).abs() > 1e-9 * expected.max(1.0) {
        findings.push(format!("Parseval: Σ|f̂|² = {energy} but N·Σ|f|² = {expected}"));
    }
    let top: Vec<Value> = spec
        .top(a.top)
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            let v = spec.coeff(c);
            json!({"rank": r + 1, "char_index": c, "freq": coords(g, c), "re": v.re, "im": v.im, "magnitude": v.norm()})
        })
        .collect();
    let results = json!({
        "size": set.len(),
        "uniformity": uniformity(&f),
        "max_nontrivial": spec.max_nontrivial(),
        "parseval": {"energy": energy, "n_times_l2": expected},
        "top": top,
    });
    Outcome::new(&a, &a.io, results).findings(findings).csv(&a.csv.csv, || {
        let mut buf = Vec::new();
        spec.write_csv(&mut buf)?;
        Ok(buf)
    })
}

fn convolve(a: PairArgs) -> Result<Outcome> {
    let g = &a.group;
    let (x, y) = read_pair(g, &a.set, &a.with)?;
    let counts = set_convolution(&x, &y)?;
    let total: u64 = counts.iter().sum();
    let mut findings = Vec::new();
    if total != (x.len() * y.len()) as u64 {
        findings.push(format!("total mass {total} ≠ |A||B| = {}", x.len() * y.len()));
    }
    let results = json!({
        "sizes": [x.len(), y.len()],
        "total": total,
        "support_size": counts.iter().filter(|&&c| c > 0).count(),
        "max": counts.iter().copied().max().unwrap_or(0),
        "values": counts,
    });
    Outcome::new(&a, &a.io, results).findings(findings).csv(&a.csv.csv, || {
        let mut buf = Vec::new();
        let vals: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        write_convolution_csv(g, &vals, &mut buf)?;
        Ok(buf)
    })
}

fn sumset_cmd(a: PairArgs) -> Result<Outcome> {
    let g = &a.group;
    let (x, y) = read_pair(g, &a.set, &a.with)?;
    let s = sumset(&x, &y)?;
    let results = json!({
        "sizes": [x.len(), y.len()],
        "size": s.len(),
        "density": s.density(),
        "elements": element_list(g, &s),
    });
    Outcome::new(&a, &a.io, results).csv(&a.csv.csv, || Ok(crate::convolution::format_set_file(&s).into_bytes()))
}

fn levelset(a: LevelsetArgs) -> Result<Outcome> {
    let g = &a.group;
    let (x, y) = read_pair(g, &a.set, &a.with)?;
    let counts = set_convolution(&x, &y)?;
    let threshold = match (a.threshold, a.gamma) {
        (Some(t), _) => t,
        (None, Some(gm)) => gm * g.order() as f64,
        (None, None) => return Err(Error::Precondition("need --threshold or --gamma".into())),
    };
    let strictness = if a.strict { Strictness::Strict } else { Strictness::Weak };
    let level = level_set_counts(g, &counts, threshold, strictness);
    let results = json!({
        "threshold": threshold,
        "strictness": strictness,
        "size": level.members.len(),
        "elements": element_list(g, &level.members),
    });
    Outcome::new(&a, &a.io, results).csv(&a.csv.csv, || {
        let mut buf = Vec::new();
        let vals: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        write_convolution_csv(g, &vals, &mut buf)?;
        Ok(buf)
    })
}

fn bohr(a: BohrArgs) -> Result<Outcome> {
    let g = &a.group;
    let b = BohrSet::from_char_indices(g, parse_freqs(g, &a.freqs)?, a.radius)?;
    let check = bohr_check(&b)?;
    let mut findings = Vec::new();
    if !check.holds() {
        findings.push(format!("Bohr check failed: {check:?}"));
    }
    let members = b.members().clone();
    let results = json!({
        "dimension": check.dimension,
        "radius": check.radius,
        "size": check.size,
        "size_bound": check.size_bound,
        "size_ok": check.size_ok,
        "elements": element_list(g, &members),
    });
    Outcome::new(&a, &a.io, results).findings(findings).csv(&a.csv.csv, || {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x_index", "coords"])?;
        for x in members.iter() {
            let c: Vec<String> = coords(g, x).iter().map(|v| v.to_string()).collect();
            w.write_record([x.to_string(), c.join(",")])?;
        }
        w.into_inner().map_err(|e| Error::Internal(e.to_string()))
    })
}

fn ap_extract(a: ApArgs) -> Result<Outcome> {
    let g = Group::cyclic(a.n as usize)?;
    if !crate::bohr::is_prime(a.n) {
        return Err(Error::NotPrime(a.n));
    }
    let b = BohrSet::from_char_indices(&g, parse_freqs(&g, &a.freqs)?, a.radius)?;
    if b.dimension() == 0 || a.radius <= 0.0 {
        return Err(Error::Precondition("need at least one frequency and a positive radius".into()));
    }
    let check = bohr_check(&b)?;
    let ap = check.ap.clone().ok_or_else(|| Error::Internal("no progression extracted".into()))?;
    let mut findings = Vec::new();
    if check.ap_inside != Some(true) {
        findings.push("progression leaves the Bohr set".into());
    }
    if check.ap_long_enough != Some(true) {
        findings.push(format!("progression length {} below the guaranteed {:?}", ap.length, check.ap_length_bound));
    }
    let elements = if ap.length <= 64 { json!(ap.element_indices(&g)?) } else { Value::Null };
    let results = json!({
        "start": ap.start,
        "step": ap.step,
        "length": ap.length,
        "length_bound": check.ap_length_bound,
        "inside": check.ap_inside,
        "bohr_size": check.size,
        "elements": elements,
    });
    Ok(Outcome::new(&a, &a.io, results).findings(findings))
}

fn dirichlet(a: DirichletArgs) -> Result<Outcome> {
    let raw: Vec<i64> = parse_list(&a.xs, "residue")?;
    if a.n < 2 {
        return Err(Error::Precondition(format!("need N ≥ 2, got {}", a.n)));
    }
    let xs: Vec<u64> = raw.iter().map(|&x| x.rem_euclid(a.n as i64) as u64).collect();
    let n = dirichlet_simultaneous(&xs, a.n)?;
    let norms: Vec<i64> = xs.iter().map(|&x| residue_norm((n as u128 * x as u128 % a.n as u128) as i64, a.n)).collect();
    let max_norm = norms.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let bound = (a.n as f64).powf(1.0 - 1.0 / (xs.len() as f64 + 1.0));
    let (best, best_norm) = best_simultaneous_step(&xs, a.n)?;
    let results = json!({
        "n": n,
        "norms": norms,
        "max_norm": max_norm,
        "bound": bound,
        "best_step": best,
        "best_max_norm": best_norm,
    });
    Ok(Outcome::new(&a, &a.io, results))
}

fn witness(a: WitnessArgs) -> Result<Outcome> {
    let g = &a.group;
    let set = read_set(g, &a.set)?;
    let family = match a.family {
        FamilyKind::Translates => CandidateFamily::translates(&set, parse_list::<usize>(&a.shifts, "shift")?)?,
        FamilyKind::Exhaustive => CandidateFamily::exhaustive(g)?,
        FamilyKind::Explicit => {
            CandidateFamily::explicit(g, a.member.iter().map(|p| read_set(g, p)).collect::<Result<Vec<_>>>()?)?
        }
    };
    let table = parse_table(g, &a.table)?;
    let norm: &dyn Norm = match a.norm {
        NormKind::FourierSup => &FourierSupNorm,
        NormKind::Sup => &SupNorm,
    };
    let r = build_witness(&set, &family, norm, &table, a.delta1, a.delta2)?;
    let v = verify_function(&r.f(), &set, &family, norm, &table, a.delta1, a.delta2)?;
    let cap = iteration_cap(a.delta2);
    let mut findings = Vec::new();
    if !v.passed() {
        findings.push(format!("verification failed: {v:?}"));
    }
    if r.j > cap {
        findings.push(format!("J = {} exceeds ⌈1/δ₂⌉ = {cap}", r.j));
    }
    let results = json!({
        "j": r.j,
        "iteration_cap": cap,
        "kappa": r.kappa,
        "family_size": family.len(),
        "admitted": r.admitted.len(),
        "support_size": r.support_size(),
        "multiplicity": r.multiplicity,
        "trace": r.trace_json(),
        "verification": v,
    });
    Ok(Outcome::new(&a, &a.io, results).findings(findings))
}

fn qr_demo(a: QrArgs) -> Result<Outcome> {
    let set = quadratic_residues(a.n)?;
    let counts = set_convolution(&set, &set)?;
    let mut findings = Vec::new();
    let three_mod_four = a.n % 4 == 3;
    let (max_coeff, disjoint) = if three_mod_four {
        let m = qr_uniformity_check(a.n)?;
        if counts[0] != 0 {
            findings.push(format!("1_A*1_A(0) = {} ≠ 0", counts[0]));
        }
        if m > (a.n as f64).sqrt() + 1.0 {
            findings.push(format!("max nontrivial |1̂_A| = {m} > √N + 1"));
        }
        let d = if a.n <= QR_SHIFT_SCAN_LIMIT { Some(qr_level_sets_disjoint(a.n)?) } else { None };
        if d == Some(false) {
            findings.push("level-sets below N/8 of A and A+t are not {0} and {2t}".into());
        }
        (Some(m), d)
    } else {
        (None, None)
    };
    let results = json!({
        "residues": set.to_vec(),
        "size": set.len(),
        "convolution": counts,
        "convolution_at_zero": counts[0],
        "max_nontrivial_coefficient": max_coeff,
        "coefficient_bound": three_mod_four.then(|| (a.n as f64).sqrt() + 1.0),
        "level_sets_disjoint": disjoint,
    });
    Ok(Outcome::new(&a, &a.io, results).findings(findings))
}

fn thm2(a: Thm2Args) -> Result<Outcome> {
    let g = Group::cyclic(a.n as usize)?;
    let checks = interval_dilate_batch(&g, a.trials, a.seed, a.k)?;
    let findings: Vec<String> = checks
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.findings.iter().map(move |f| format!("trial {i}: {f}")))
        .collect();
    let results = json!({
        "probe_size": a.k.unwrap_or_else(|| max_probe_size(a.n)),
        "trials_with_findings": checks.iter().filter(|c| !c.holds()).count(),
        "size_failures": checks.iter().filter(|c| !c.size_ok).count(),
        "sumset_failures": checks.iter().filter(|c| !c.sumset_ok).count(),
        "convolution_failures": checks.iter().filter(|c| !c.convolution_ok).count(),
        "trials": checks,
    });
    Ok(Outcome::new(&a, &a.io, results).seed(a.seed).findings(findings))
}

fn thm1(a: Thm1Args) -> Result<Outcome> {
    let cfg = ExperimentConfig {
        group: a.group.clone(),
        theta: a.theta,
        delta: a.delta,
        eps: a.eps,
        gamma: a.gamma,
        seed: a.seed,
        trials: a.trials,
    };
    let search = ProbingSearch {
        adversary_trials: a.trials,
        k_override: a.k,
        c: a.c,
        retry_budget: a.retries,
    };
    let report = probing_set_search(&cfg, &search)?;
    let findings = if report.passed {
        Vec::new()
    } else {
        vec![format!(
            "no probe set of size {} met every adversary within {} attempts",
            report.k, report.attempts
        )]
    };
    let results = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome::new(&a, &a.io, results).seed(a.seed).findings(findings))
}

fn thm3(a: Thm3Args) -> Result<Outcome> {
    for (n, v) in [("theta", a.theta), ("delta", a.delta), ("eps", a.eps)] {
        check_unit(n, v)?;
    }
    let g = &a.group;
    let s = read_set(g, &a.set)?;
    let r = pseudorandom_probe_check(&s, a.theta, a.delta, a.eps, &parse_freqs(g, &a.freqs)?, a.radius)?;
    let mut findings = r.findings.clone();
    if !r.translates_ok {
        findings.push(format!("translate {} of the Bohr set misses S", r.worst_translate));
    }
    let results = serde_json::to_value(&r).expect("report serializes");
    Ok(Outcome::new(&a, &a.io, results).findings(findings))
}

fn thm4(a: Thm4Args) -> Result<Outcome> {
    check_unit("delta", a.delta)?;
    check_unit("eps", a.eps)?;
    if let Some(gm) = a.gamma {
        check_unit("gamma", gm)?;
    }
    let g = &a.group;
    let (set, probe) = match (&a.set, a.seed) {
        (Some(p), _) => (read_set(g, p)?, None),
        (None, Some(seed)) => {
            let n = g.order() as u64;
            let size = a.k.unwrap_or_else(|| max_probe_size(n));
            let probe = random_probe_set(g, size, &mut CounterRng::for_trial(seed, 0))?;
            (interval_dilate_construction(&probe)?.set, Some(probe.to_vec()))
        }
        (None, None) => return Err(Error::Precondition("--seed is required when --set is absent".into())),
    };
    let t = levelset_bohr_translate(&set, a.delta, a.eps)?;
    let rep = &t.report;
    let mut findings = Vec::new();
    if !rep.verified {
        findings.push(format!("no verified translate among {} candidates", rep.candidates_tried));
    }
    let members = t.bohr.members().to_vec();
    let mut witness = Value::Null;
    let mut intersection = Value::Null;
    if members.len() <= TRANSLATE_FAMILY_LIMIT {
        let family = CandidateFamily::translates(&set, members.iter().copied())?;
        let fa = set.to_function();
        let worst = family
            .sets()
            .iter()
            .map(|b| uniformity(&b.to_function().checked_sub(&fa).expect("same group")))
            .fold(0.0, f64::max);
        if worst > rep.delta1 + 1e-12 {
            findings.push(format!("translate difference uniformity {worst} exceeds δ₁ = {}", rep.delta1));
        }
        let delta2 = a.delta * rep.theta * rep.theta / 4.0;
        let table = OperationTable::addition(g);
        let r = build_witness(&set, &family, &FourierSupNorm, &table, rep.delta1, delta2)?;
        let v = verify_function(&r.f(), &set, &family, &FourierSupNorm, &table, rep.delta1, delta2)?;
        if !v.passed() {
            findings.push(format!("witness verification failed: {v:?}"));
        }
        witness = json!({
            "family_size": family.len(),
            "max_translate_uniformity": worst,
            "delta2": delta2,
            "j": r.j,
            "verified": v.passed(),
        });
        if let Some(gamma) = a.gamma {
            let inter = levelset_intersection(&set, &family, gamma, rep.delta1)?;
            let bound = intersection_lower_bound(&set, gamma, rep.delta1)?;
            if bound.bound > 0.0 && (inter.len() as f64) < bound.bound {
                findings.push(format!("|I| = {} below the lower bound {}", inter.len(), bound.bound));
            }
            intersection = json!({"size": inter.len(), "bound": bound});
        }
    }
    let results = json!({
        "probe": probe,
        "set_size": set.len(),
        "report": rep,
        "witness": witness,
        "intersection": intersection,
    });
    let mut out = Outcome::new(&a, &a.io, results).findings(findings);
    if a.set.is_none() {
        out = out.seed(a.seed.expect("checked above"));
    }
    Ok(out)
}

fn cor6(a: Cor6Args) -> Result<Outcome> {
    let g = &a.group;
    let set = read_set(g, &a.set)?;
    let cap = match (a.cap, a.c) {
        (Some(l), _) => l,
        (None, Some(c)) => (g.order() as f64).powf(c).floor() as usize,
        (None, None) => return Err(Error::Precondition("need --cap or --c".into())),
    };
    let r = gap_criterion_check(&set, a.delta, a.eps, cap)?;
    let findings = r.findings.clone();
    let results = serde_json::to_value(&r).expect("report serializes");
    Ok(Outcome::new(&a, &a.io, results).findings(findings))
}

fn verify_lemmas(a: LemmaArgs) -> Result<Outcome> {
    let r = run_lemma_suites(&a.group, a.trials, a.seed)?;
    let mut findings = Vec::new();
    for (name, t) in [
        ("convolution proximity", &r.convolution_proximity),
        ("coefficient decay", &r.coefficient_decay),
        ("Bohr size and progression", &r.bohr_size_and_progression),
    ] {
        if t.violations > 0 {
            findings.push(format!("{name}: {} violations in trials {:?}", t.violations, t.failing_trials));
        }
    }
    let results = serde_json::to_value(&r).expect("report serializes");
    Ok(Outcome::new(&a, &a.io, results).seed(a.seed).findings(findings))
}
