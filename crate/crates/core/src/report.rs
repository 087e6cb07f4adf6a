//! Named reproduction cases, verification suites and their JSON/CSV output.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::braid::{
    apply_word, b3_assignment_search, braid_generators, default_orbit_limit, ds3_permutation_scan, orbit_states,
    verify_braid_relations, BraidRep, BraidWord,
};
use crate::error::{Error, Result};
use crate::gates::{
    best_violation_search, cp_diagonal, optimize_phases, su2_2_cp_sequence, su2_2_local_rotation_route,
    Ds3PhaseFamily, OptimizerOptions, SearchMode, SearchOptions, DS3_REFERENCE_ANGLES, FIB_VIOLATING_WORD,
};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::models::{AnyonModel, Charge, ModelId};
use crate::observables::{
    a_grid, a_plus_closed_form, build_i3, build_w, fig4_data, lhv_bound_oracle, r_state, sampled_argmax,
    su2_a_plus, su2k_max_violation, w_curve, Fig4Data, WitnessKind, WitnessOperator,
};
use crate::sector::{build_sector_basis, phi_power_multiplicities, sector_dimension};
use crate::spin::oracle_equivalence_report;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Levels checked against the closed form.
pub const CLOSED_FORM_LEVELS: [u32; 5] = [2, 3, 5, 10, 100];

/// Samples used to locate the argmax of `a ↦ ⟨r(a)|W|r(a)⟩`.
pub const ARGMAX_SAMPLES: usize = 20_001;

pub const FIG4_DEFAULT_SAMPLES: usize = 2001;

pub const OPTIMIZER_RESTARTS: usize = 50;

/// Rounds to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn ser_sig12<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig12(*x))
    } else {
        s.serialize_none()
    }
}

fn ser_opt_sig12<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_sig12(v, s),
        None => s.serialize_none(),
    }
}

/// How the computed number is judged.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Check {
    /// `computed` against a fixed value.
    Equals(f64),
    /// `computed` is the excess of the observed value above the bound.
    AtMost(f64),
    /// `computed` is the shortfall of the observed value below the bound.
    AtLeast(f64),
}

/// Static description of one case.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub id: String,
    pub model: String,
    pub description: String,
    check: Check,
    pub tolerance: f64,
    suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Anchor,
    Algebra,
    Braids,
    Lhv,
}

impl CaseSpec {
    fn new(id: impl Into<String>, model: &str, description: impl Into<String>, check: Check, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            model: model.into(),
            description: description.into(),
            check,
            tolerance,
            suite: Suite::Anchor,
        }
    }

    fn in_suite(mut self, suite: Suite) -> Self {
        self.suite = suite;
        self
    }

    pub fn reference(&self) -> f64 {
        match self.check {
            Check::Equals(r) => r,
            Check::AtMost(_) | Check::AtLeast(_) => 0.0,
        }
    }
}

fn sqrt7() -> f64 {
    7f64.sqrt()
}

fn fib_max() -> f64 {
    2.0 * (-7.0 + 4.0 * 5f64.sqrt()).sqrt()
}

/// The reference table. Every anchor value and tolerance lives here.
pub fn reference_table() -> Vec<CaseSpec> {
    use Check::*;
    let tsirelson = 2.0 * 2f64.sqrt();
    let mut t = vec![
        CaseSpec::new("su2-max-w", "su2", "largest eigenvalue of W", Equals(sqrt7()), 1e-9),
        CaseSpec::new("su2-min-w", "su2", "smallest eigenvalue of W", Equals(-sqrt7()), 1e-9),
        CaseSpec::new("su2-r-aplus", "su2", "<r(a+)|W|r(a+)>", Equals(sqrt7()), 1e-9),
        CaseSpec::new("su2-r-aminus", "su2", "<r(a-)|W|r(a-)>", Equals(-sqrt7()), 1e-9),
    ];
    for k in CLOSED_FORM_LEVELS {
        t.push(CaseSpec::new(
            format!("su2k-max-w-k{k}"),
            &format!("su2k:{k}"),
            "largest eigenvalue of W against the level-k closed form",
            Equals(su2k_max_violation(k as f64)),
            1e-9,
        ));
        t.push(CaseSpec::new(
            format!("su2k-aplus-k{k}"),
            &format!("su2k:{k}"),
            format!("argmax of the sampled r(a) curve ({ARGMAX_SAMPLES} samples) against closed-form a+"),
            Equals(a_plus_closed_form(k as f64)),
            1e-4,
        ));
    }
    t.extend([
        CaseSpec::new("fib-max-w", "fib", "largest eigenvalue of W", Equals(fib_max()), 1e-9),
        CaseSpec::new(
            "fib-k3-closed-form",
            "fib",
            "largest eigenvalue of W against the k = 3 closed form",
            Equals(su2k_max_violation(3.0)),
            1e-9,
        ),
        CaseSpec::new(
            "fib-word25",
            "fib",
            format!("<W> after {FIB_VIOLATING_WORD} on phi0"),
            Equals(2.5310),
            5e-4,
        ),
        CaseSpec::new("su2_2-cp-offdiagonal", "su2k:2", "largest off-diagonal entry of CP", Equals(0.0), 1e-10),
        CaseSpec::new("su2_2-cp-sequence", "su2k:2", "<W> after -CP B3B4 D B2B3 on phi0", Equals(-tsirelson), 1e-9),
        CaseSpec::new(
            "su2_2-phi0-prime-overlap",
            "su2k:2",
            "|<(0'0 + 1'1)/sqrt2 | braided phi0>|",
            Equals(1.0),
            1e-9,
        ),
        CaseSpec::new(
            "su2_2-local-route",
            "su2k:2",
            "<W> after the three-gate local rotation",
            Equals(tsirelson),
            1e-9,
        ),
        CaseSpec::new(
            "su2_2-orbit-excess",
            "su2k:2",
            "excess of max |<W>| over the finite braid orbit of phi0 above 2",
            AtMost(2.0),
            1e-9,
        ),
        CaseSpec::new("ds3-i3-min", "ds3", "smallest eigenvalue of I3", Equals(-2.5216), 5e-4),
        CaseSpec::new(
            "ds3-scan-excess",
            "ds3",
            "excess of max |<I3>| over the 720 permutation words above 2",
            AtMost(2.0),
            1e-9,
        ),
        CaseSpec::new(
            "ds3-scan-spread",
            "ds3",
            "shortfall of max - min <I3> over the permutation scan below 1e-6",
            AtLeast(1e-6),
            0.0,
        ),
        CaseSpec::new(
            "ds3-scan-consistency",
            "ds3",
            "1 if a random word differs from its permutation word",
            Equals(0.0),
            0.0,
        ),
        CaseSpec::new(
            "ds3-phase-family",
            "ds3",
            "<I3> of the phase-gate family at the reference angles",
            Equals(2.0512),
            5e-4,
        ),
        CaseSpec::new(
            "ds3-optimizer",
            "ds3",
            format!("shortfall of the best of {OPTIMIZER_RESTARTS} random restarts below 2.0502"),
            AtLeast(2.0512 - 1e-3),
            0.0,
        ),
        CaseSpec::new("spin-spectrum", "su2", "spectrum distance between spin and abstract W", Equals(0.0), 1e-8),
        CaseSpec::new("spin-entrywise", "su2", "max |V'W_spin V - W| after gauge fixing", Equals(0.0), 1e-8),
        CaseSpec::new("spin-sector-rank", "su2", "rank of the S_tot = 0 projector", Equals(5.0), 0.0),
        CaseSpec::new("spin-max-w", "su2", "largest eigenvalue of the spin W", Equals(sqrt7()), 1e-9),
        CaseSpec::new(
            "fig4-su2-max",
            "su2",
            format!("max of the sampled SU(2) curve ({FIG4_DEFAULT_SAMPLES} samples)"),
            Equals(sqrt7()),
            1e-3,
        ),
        CaseSpec::new(
            "fig4-su2_2-max",
            "su2k:2",
            format!("max of the sampled SU(2)_2 curve ({FIG4_DEFAULT_SAMPLES} samples)"),
            Equals(tsirelson),
            1e-3,
        ),
    ]);

    for (m, dim) in [("su2", 5.0), ("su2k:2", 4.0), ("fib", 5.0), ("ds3", 11.0)] {
        let short = short_name(m);
        t.push(
            CaseSpec::new(format!("f-involution-{short}"), m, "max |F^2 - 1|", Equals(0.0), 1e-12)
                .in_suite(Suite::Algebra),
        );
        t.push(
            CaseSpec::new(format!("sector-dim-{short}"), m, "dimension of the six-anyon vacuum sector", Equals(dim), 0.0)
                .in_suite(Suite::Algebra),
        );
        t.push(
            CaseSpec::new(format!("fusion-assoc-{short}"), m, "non-associative fusion triples", Equals(0.0), 0.0)
                .in_suite(Suite::Algebra),
        );
        t.push(
            CaseSpec::new(format!("qdim-{short}"), m, "max |d_a d_b - sum N d_c|", Equals(0.0), 1e-12)
                .in_suite(Suite::Algebra),
        );
    }
    t.push(
        CaseSpec::new(
            "ds3-phi-power",
            "ds3",
            "closed-form multiplicities in Phi^n differing from chain counting, n <= 12",
            Equals(0.0),
            0.0,
        )
        .in_suite(Suite::Algebra),
    );

    for m in ["su2k:2", "fib", "ds3"] {
        let short = short_name(m);
        t.push(
            CaseSpec::new(format!("braid-unitary-{short}"), m, "max |B B' - 1| over generators", Equals(0.0), 1e-10)
                .in_suite(Suite::Braids),
        );
        t.push(
            CaseSpec::new(format!("braid-yang-baxter-{short}"), m, "max Yang-Baxter residual", Equals(0.0), 1e-10)
                .in_suite(Suite::Braids),
        );
        t.push(
            CaseSpec::new(
                format!("braid-far-commutation-{short}"),
                m,
                "max far-commutation residual",
                Equals(0.0),
                1e-10,
            )
            .in_suite(Suite::Braids),
        );
    }
    t.push(
        CaseSpec::new("ds3-involution", "ds3", "max |B_j^2 - 1|", Equals(0.0), 1e-12).in_suite(Suite::Braids),
    );
    for m in ["fib", "ds3"] {
        t.push(
            CaseSpec::new(
                format!("b3-canonical-{}", short_name(m)),
                m,
                "1 if the canonical B3 block order satisfies the braid relations",
                Equals(1.0),
                0.0,
            )
            .in_suite(Suite::Braids),
        );
    }

    t.extend([
        CaseSpec::new("lhv-w-max", "-", "max of W over deterministic strategies", Equals(2.0), 1e-12)
            .in_suite(Suite::Lhv),
        CaseSpec::new("lhv-w-min", "-", "min of W over deterministic strategies", Equals(-2.0), 1e-12)
            .in_suite(Suite::Lhv),
        CaseSpec::new("lhv-w-strategies", "-", "deterministic strategies for W", Equals(16.0), 0.0)
            .in_suite(Suite::Lhv),
        CaseSpec::new("lhv-i3-max", "-", "max of I3 over deterministic strategies", Equals(2.0), 1e-12)
            .in_suite(Suite::Lhv),
        CaseSpec::new("lhv-i3-strategies", "-", "deterministic strategies for I3", Equals(81.0), 0.0)
            .in_suite(Suite::Lhv),
    ]);
    t
}

fn short_name(model: &str) -> &str {
    match model {
        "su2k:2" => "su2_2",
        m => m,
    }
}

/// Ids of the cases summarizing every witness value seen during a full run.
pub const CEILING_W: &str = "ceiling-w";
pub const CEILING_I3: &str = "ceiling-i3";

fn ceiling_specs() -> [CaseSpec; 2] {
    [
        CaseSpec::new(
            CEILING_W,
            "-",
            "excess of max |<W>| over every state of the run above 2 sqrt2",
            Check::AtMost(2.0 * 2f64.sqrt()),
            1e-9,
        ),
        CaseSpec::new(
            CEILING_I3,
            "-",
            "excess of max |<I3>| over every state of the run above 4",
            Check::AtMost(4.0),
            1e-9,
        ),
    ]
}

/// Ids accepted by `reproduce`, sorted.
pub fn case_ids() -> Vec<String> {
    let mut ids: Vec<String> = reference_table().into_iter().map(|c| c.id).collect();
    ids.extend(ceiling_specs().map(|c| c.id));
    ids.sort();
    ids
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproductionCase {
    pub id: String,
    pub model: String,
    pub description: String,
    #[serde(serialize_with = "ser_sig12")]
    pub computed: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub reference: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u64,
    /// The raw quantity when `computed` is an excess or shortfall against a bound.
    #[serde(serialize_with = "ser_opt_sig12", skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: String,
    pub seed: u64,
    pub cases: Vec<ReproductionCase>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    fn assemble(seed: u64, mut cases: Vec<ReproductionCase>, mut notes: Vec<String>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        notes.sort();
        notes.dedup();
        Self {
            version: VERSION.into(),
            seed,
            passed: cases.iter().all(|c| c.passed),
            cases,
            notes,
        }
    }

    pub fn case(&self, id: &str) -> Option<&ReproductionCase> {
        self.cases.iter().find(|c| c.id == id)
    }

    /// Sets every runtime to zero so equal seeds give byte-identical output.
    pub fn without_runtimes(mut self) -> Self {
        for c in &mut self.cases {
            c.runtime_ms = 0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The report without runtimes; the part that is stable across runs.
    pub fn body_json(&self) -> String {
        self.clone().without_runtimes().to_json()
    }
}

/// Witness values observed while running cases.
#[derive(Debug, Default)]
struct Observations {
    w: Vec<f64>,
    i3: Vec<f64>,
    notes: Vec<String>,
}

impl Observations {
    fn max_abs(v: &[f64]) -> f64 {
        v.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    fn record(&mut self, kind: WitnessKind, values: impl IntoIterator<Item = f64>) {
        match kind {
            WitnessKind::W => self.w.extend(values),
            WitnessKind::I3 => self.i3.extend(values),
        }
    }
}

struct Runner {
    seed: u64,
    obs: Observations,
}

fn model(id: &str) -> Result<AnyonModel> {
    AnyonModel::parse(id)
}

fn eigen_extremes(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let e = hermitian_eigenvalues(m)?;
    let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

fn count(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl Runner {
    fn w_extremes(&mut self, m: &str) -> Result<(f64, f64)> {
        let w = build_w(&build_sector_basis(&model(m)?)?)?;
        let (lo, hi) = eigen_extremes(&w.matrix)?;
        self.obs.record(WitnessKind::W, [lo, hi]);
        Ok((lo, hi))
    }

    fn fib_rep(&self) -> Result<BraidRep> {
        braid_generators(&AnyonModel::fibonacci())
    }

    fn record_w(&mut self, v: f64) -> f64 {
        self.obs.record(WitnessKind::W, [v]);
        v
    }

    fn record_i3(&mut self, v: f64) -> f64 {
        self.obs.record(WitnessKind::I3, [v]);
        v
    }

    fn relations(&self, m: &str) -> Result<crate::braid::RelationReport> {
        verify_braid_relations(&braid_generators(&model(m)?)?)
    }

    fn fig4(&mut self) -> Result<Fig4Data> {
        let d = fig4_data(FIG4_DEFAULT_SAMPLES)?;
        for c in [&d.su2, &d.so3_3, &d.su2_2] {
            self.obs.record(WitnessKind::W, c.iter().copied());
        }
        Ok(d)
    }

    /// Observed value for case `id`.
    fn compute(&mut self, id: &str) -> Result<f64> {
        if let Some(k) = id.strip_prefix("su2k-max-w-k") {
            return Ok(self.w_extremes(&format!("su2k:{k}"))?.1);
        }
        if let Some(k) = id.strip_prefix("su2k-aplus-k") {
            let basis = build_sector_basis(&model(&format!("su2k:{k}"))?)?;
            let grid = a_grid(ARGMAX_SAMPLES);
            let curve = w_curve(&basis, &grid)?;
            self.obs.record(WitnessKind::W, curve.iter().copied());
            let (a, _) = sampled_argmax(&grid, &curve).ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
            return Ok(a);
        }
        for suffix in ["su2", "su2_2", "fib", "ds3"] {
            let m = if suffix == "su2_2" { "su2k:2" } else { suffix };
            if let Some(rest) = id.strip_suffix(suffix).and_then(|r| r.strip_suffix('-')) {
                match rest {
                    "f-involution" => {
                        let f = model(m)?.recoupling_matrix();
                        let sq = f.matmul(&f)?;
                        return Ok(sq.max_diff(&ComplexMatrix::identity(f.rows())));
                    }
                    "sector-dim" => {
                        let am = model(m)?;
                        let a = am.generator();
                        return Ok(sector_dimension(&am, &[a; 6], Charge::VACUUM)? as f64);
                    }
                    "fusion-assoc" => return Ok(f64::from(model(m)?.associativity_defect()?)),
                    "qdim" => return model(m)?.quantum_dimension_defect(),
                    "braid-unitary" => return Ok(self.relations(m)?.unitarity),
                    "braid-yang-baxter" => {
                        return Ok(self.relations(m)?.yang_baxter.iter().copied().fold(0.0, f64::max))
                    }
                    "braid-far-commutation" => {
                        return Ok(self.relations(m)?.far_commutation.iter().map(|x| x.1).fold(0.0, f64::max))
                    }
                    "b3-canonical" => return Ok(count(b3_assignment_search(&model(m)?)?.canonical_passes)),
                    _ => {}
                }
            }
        }
        match id {
            "su2-max-w" => Ok(self.w_extremes("su2")?.1),
            "su2-min-w" => Ok(self.w_extremes("su2")?.0),
            "su2-r-aplus" | "su2-r-aminus" => {
                let basis = build_sector_basis(&AnyonModel::su2())?;
                let a = if id == "su2-r-aplus" {
                    su2_a_plus()
                } else {
                    ((7.0 - 2.0 * 7f64.sqrt()) / 14.0).sqrt()
                };
                let v = build_w(&basis)?.expectation(&r_state(&basis, a)?.vector)?;
                Ok(self.record_w(v))
            }
            "fib-max-w" | "fib-k3-closed-form" => Ok(self.w_extremes("fib")?.1),
            "fib-word25" => {
                let rep = self.fib_rep()?;
                let word: BraidWord = FIB_VIOLATING_WORD.parse()?;
                let v = build_w(rep.basis())?.expectation(&apply_word(&rep, &word, &rep.phi0())?)?;
                Ok(self.record_w(v))
            }
            "su2_2-cp-offdiagonal" => Ok(cp_diagonal()?.1),
            "su2_2-cp-sequence" => {
                let v = su2_2_cp_sequence()?.1;
                Ok(self.record_w(v))
            }
            "su2_2-phi0-prime-overlap" => Ok(su2_2_local_rotation_route()?.phi0_prime_overlap),
            "su2_2-local-route" => {
                let v = su2_2_local_rotation_route()?.value;
                Ok(self.record_w(v))
            }
            "su2_2-orbit-excess" => {
                let am = AnyonModel::su2k(2)?;
                let rep = braid_generators(&am)?;
                let w = build_w(rep.basis())?;
                let orbit = orbit_states(&rep, &rep.phi0(), default_orbit_limit(&am))?;
                let vals: Vec<f64> = orbit.iter().map(|s| w.expectation(s)).collect::<Result<_>>()?;
                self.obs
                    .notes
                    .push(format!("su2_2: the braid orbit of phi0 has {} rays", orbit.len()));
                self.obs.record(WitnessKind::W, vals.iter().copied());
                Ok(Observations::max_abs(&vals))
            }
            "ds3-i3-min" => {
                let i3 = build_i3(&build_sector_basis(&AnyonModel::ds3())?)?;
                let (lo, hi) = eigen_extremes(&i3.matrix)?;
                self.obs.record(WitnessKind::I3, [lo, hi]);
                Ok(lo)
            }
            "ds3-scan-excess" | "ds3-scan-spread" | "ds3-scan-consistency" => {
                let rep = braid_generators(&AnyonModel::ds3())?;
                let i3 = build_i3(rep.basis())?;
                let scan = ds3_permutation_scan(&rep, &i3, self.seed)?;
                self.obs.record(WitnessKind::I3, scan.values.iter().map(|v| v.value));
                Ok(match id {
                    "ds3-scan-excess" => scan.max_abs,
                    "ds3-scan-spread" => scan.max - scan.min,
                    _ => count(!scan.consistent),
                })
            }
            "ds3-phase-family" => {
                let v = Ds3PhaseFamily::new()?.value(&DS3_REFERENCE_ANGLES)?;
                Ok(self.record_i3(v))
            }
            "ds3-optimizer" => {
                let fam = Ds3PhaseFamily::new()?;
                let r = optimize_phases(
                    |x| fam.value(x).unwrap_or(f64::NAN),
                    6,
                    OPTIMIZER_RESTARTS,
                    self.seed,
                    &OptimizerOptions::default(),
                );
                self.obs.record(WitnessKind::I3, r.trace.iter().map(|t| t.value));
                Ok(r.value)
            }
            "spin-spectrum" | "spin-entrywise" | "spin-sector-rank" | "spin-max-w" => {
                let r = oracle_equivalence_report()?;
                self.obs.record(WitnessKind::W, r.spin_eigenvalues.iter().copied());
                Ok(match id {
                    "spin-spectrum" => r.spectrum_residual,
                    "spin-entrywise" => r.entrywise_residual,
                    "spin-sector-rank" => r.sector_rank as f64,
                    _ => r.max_eigenvalue,
                })
            }
            "fig4-su2-max" => Ok(self.fig4()?.su2.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            "fig4-su2_2-max" => Ok(self.fig4()?.su2_2.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            "ds3-involution" => {
                let rep = braid_generators(&AnyonModel::ds3())?;
                Ok(verify_braid_relations(&rep)?.involution)
            }
            "ds3-phi-power" => {
                let ds3 = AnyonModel::ds3();
                let mut bad = 0;
                for n in 1..=12u32 {
                    let (t, l, p) = phi_power_multiplicities(n)?;
                    let anyons = vec![Charge(2); n as usize];
                    for (c, want) in [(0, t), (1, l), (2, p)] {
                        if sector_dimension(&ds3, &anyons, Charge(c))? != want {
                            bad += 1;
                        }
                    }
                }
                Ok(f64::from(bad))
            }
            "lhv-w-max" => Ok(lhv_bound_oracle(WitnessKind::W).max),
            "lhv-w-min" => Ok(lhv_bound_oracle(WitnessKind::W).min),
            "lhv-w-strategies" => Ok(lhv_bound_oracle(WitnessKind::W).strategies as f64),
            "lhv-i3-max" => {
                let b = lhv_bound_oracle(WitnessKind::I3);
                self.obs.notes.push(format!(
                    "I3 over {} deterministic strategies ranges over [{}, {}]; the minimum differs from -2",
                    b.strategies, b.min, b.max
                ));
                Ok(b.max)
            }
            "lhv-i3-strategies" => Ok(lhv_bound_oracle(WitnessKind::I3).strategies as f64),
            _ => Err(Error::UnknownCase(id.into())),
        }
    }

    fn run(&mut self, spec: &CaseSpec) -> ReproductionCase {
        let start = Instant::now();
        let outcome = self.compute(&spec.id);
        let runtime_ms = start.elapsed().as_millis() as u64;
        finish(spec, outcome, runtime_ms)
    }
}

fn finish(spec: &CaseSpec, outcome: Result<f64>, runtime_ms: u64) -> ReproductionCase {
    let (computed, observed, error) = match outcome {
        Ok(v) => match spec.check {
            Check::Equals(_) => (v, None, None),
            Check::AtMost(b) => ((v - b).max(0.0), Some(v), None),
            Check::AtLeast(b) => ((b - v).max(0.0), Some(v), None),
        },
        Err(e) => (f64::NAN, None, Some(e.to_string())),
    };
    let reference = spec.reference();
    ReproductionCase {
        id: spec.id.clone(),
        model: spec.model.clone(),
        description: spec.description.clone(),
        computed,
        reference,
        tolerance: spec.tolerance,
        passed: (computed - reference).abs() <= spec.tolerance,
        runtime_ms,
        observed,
        error,
    }
}

fn run_specs(specs: &[CaseSpec], seed: u64, with_ceiling: bool) -> RunReport {
    let mut runner = Runner {
        seed,
        obs: Observations::default(),
    };
    let mut cases: Vec<ReproductionCase> = specs.iter().map(|s| runner.run(s)).collect();
    if with_ceiling {
        let [cw, ci] = ceiling_specs();
        cases.push(finish(&cw, Ok(Observations::max_abs(&runner.obs.w)), 0));
        cases.push(finish(&ci, Ok(Observations::max_abs(&runner.obs.i3)), 0));
        runner.obs.notes.push(format!(
            "ceiling: {} W and {} I3 expectations observed",
            runner.obs.w.len(),
            runner.obs.i3.len()
        ));
    }
    RunReport::assemble(seed, cases, runner.obs.notes)
}

/// Runs one case, or every case for `"all"` (adding the two ceiling cases).
pub fn reproduce(case: &str, seed: u64) -> Result<RunReport> {
    let table = reference_table();
    if case == "all" {
        return Ok(run_specs(&table, seed, true));
    }
    if case == CEILING_W || case == CEILING_I3 {
        let mut r = run_specs(&table, seed, true);
        r.cases.retain(|c| c.id == case);
        r.passed = r.cases.iter().all(|c| c.passed);
        return Ok(r);
    }
    let spec = table
        .into_iter()
        .find(|c| c.id == case)
        .ok_or_else(|| Error::UnknownCase(case.into()))?;
    Ok(run_specs(&[spec], seed, false))
}

/// Runs the invariant suite `algebra`, `braids`, `lhv` or `all`.
pub fn verify(suite: &str) -> Result<RunReport> {
    let wanted: &[Suite] = match suite {
        "algebra" => &[Suite::Algebra],
        "braids" => &[Suite::Braids],
        "lhv" => &[Suite::Lhv],
        "all" => &[Suite::Algebra, Suite::Braids, Suite::Lhv],
        other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
    };
    let specs: Vec<CaseSpec> = reference_table()
        .into_iter()
        .filter(|c| wanted.contains(&c.suite))
        .collect();
    Ok(run_specs(&specs, 0, false))
}

/// Outcome of `search`.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub version: String,
    pub model: String,
    pub witness: String,
    pub mode: String,
    pub seed: u64,
    pub max_length: usize,
    pub budget: usize,
    pub best_word: String,
    #[serde(serialize_with = "ser_sig12")]
    pub value: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub abs_value: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub lhv_bound: f64,
    pub exceeds_lhv: bool,
    pub evaluations: usize,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn witness_for(rep: &BraidRep, witness: &str) -> Result<WitnessOperator> {
    match witness.to_ascii_lowercase().as_str() {
        "w" => build_w(rep.basis()),
        "i3" => build_i3(rep.basis()),
        other => Err(Error::InvalidArgument(format!("unknown witness `{other}` (expected w or i3)"))),
    }
}

/// Searches braid words on `|φ₀⟩` for the largest `|⟨witness⟩|`.
pub fn search(
    model_id: &str,
    witness: &str,
    mode: SearchMode,
    max_length: usize,
    budget: usize,
    seed: u64,
    include_reference_word: bool,
) -> Result<SearchReport> {
    let am = model(model_id)?;
    let rep = braid_generators(&am)?;
    let op = witness_for(&rep, witness)?;
    let mut extra = Vec::new();
    if include_reference_word && am.id() == ModelId::Fibonacci {
        extra.push(FIB_VIOLATING_WORD.parse()?);
    }
    let opts = SearchOptions {
        mode,
        max_length,
        budget,
        seed,
        extra,
    };
    let r = best_violation_search(&rep, &op, &rep.phi0(), &opts)?;
    Ok(SearchReport {
        version: VERSION.into(),
        model: am.name(),
        witness: op.kind.to_string(),
        mode: match mode {
            SearchMode::Random => "random".into(),
            SearchMode::Permutations => "permutations".into(),
        },
        seed,
        max_length,
        budget,
        best_word: r.word.to_string(),
        value: r.value,
        abs_value: r.value.abs(),
        lhv_bound: op.lhv_bound,
        exceeds_lhv: r.value.abs() > op.lhv_bound + 1e-9,
        evaluations: r.evaluations,
    })
}

/// CSV with header `a,su2,so3_3,su2_2` and one row per sample.
pub fn fig4_csv(samples: usize) -> Result<String> {
    if samples < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 samples, got {samples}")));
    }
    let d = fig4_data(samples)?;
    let mut out = String::from("a,su2,so3_3,su2_2\n");
    for i in 0..d.a.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            round_sig12(d.a[i]),
            round_sig12(d.su2[i]),
            round_sig12(d.so3_3[i]),
            round_sig12(d.su2_2[i])
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_ids_unique() {
        let ids = case_ids();
        let mut d = ids.clone();
        d.dedup();
        assert_eq!(ids, d);
    }

    #[test]
    fn every_table_case_is_known() {
        let mut r = Runner {
            seed: 0,
            obs: Observations::default(),
        };
        for spec in reference_table() {
            if matches!(spec.id.as_str(), "ds3-optimizer") || spec.id.starts_with("su2k-aplus") {
                continue;
            }
            let c = r.run(&spec);
            assert!(c.error.is_none(), "{}: {:?}", c.id, c.error);
            assert!(c.passed, "{}: computed {} reference {}", c.id, c.computed, c.reference);
        }
    }

    #[test]
    fn unknown_case() {
        assert!(matches!(reproduce("no-such-case", 0), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn sig12_rounding() {
        assert_eq!(round_sig12(2.6457513110645907), 2.64575131106);
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(-1.23456789012345e-7), -1.23456789012e-7);
    }

    #[test]
    fn passed_matches_tolerance() {
        let r = reproduce("su2-max-w", 0).unwrap();
        let c = &r.cases[0];
        assert!(c.passed);
        assert_eq!(c.passed, (c.computed - c.reference).abs() <= c.tolerance);
        let json = r.body_json();
        assert!(json.contains("\"computed\": 2.64575131106"), "{json}");
    }

    #[test]
    fn fig4_small() {
        let csv = fig4_csv(3).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "a,su2,so3_3,su2_2");
        assert!(fig4_csv(2).is_err());
    }

    #[test]
    fn lhv_suite_notes_i3_minimum() {
        let r = verify("lhv").unwrap();
        assert!(r.passed);
        assert!(r.notes.iter().any(|n| n.contains("-4")), "{:?}", r.notes);
    }
}
