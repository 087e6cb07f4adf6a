//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::process::ExitCode;

use anyon_bell::braid::{
    apply_word, braid_generators, default_orbit_limit, ds3_permutation_scan, orbit_states, verify_braid_relations,
    BraidWord,
};
use anyon_bell::gates::{
    best_violation_search, cp_diagonal, optimize_phases, su2_2_cp_sequence, su2_2_local_rotation_route,
    Ds3PhaseFamily, OptimizerOptions, SearchOptions, DS3_REFERENCE_ANGLES, FIB_VIOLATING_WORD,
};
use anyon_bell::linalg::{hermitian_eigenvalues, ComplexMatrix};
use anyon_bell::observables::{
    a_grid, a_plus_closed_form, build_i3, build_w, lhv_bound_oracle, r_state, sampled_argmax, su2k_max_violation,
    w_curve, WitnessKind,
};
use anyon_bell::report::{self, CEILING_I3, CEILING_W};
use anyon_bell::sector::{build_sector_basis, phi_power_multiplicities, sector_dimension};
use anyon_bell::spin::oracle_equivalence_report;
use anyon_bell::{AnyonModel, Charge, Result};

#[derive(Default)]
struct Seen {
    w: Vec<f64>,
    i3: Vec<f64>,
}

impl Seen {
    fn w(&mut self, v: f64) -> f64 {
        self.w.push(v);
        v
    }

    fn i3(&mut self, v: f64) -> f64 {
        self.i3.push(v);
        v
    }
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        ok,
        detail: detail.into(),
    })
}

fn extremes(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let e = hermitian_eigenvalues(m)?;
    Ok((
        e.iter().copied().fold(f64::INFINITY, f64::min),
        e.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ))
}

fn max_w_eigen(model: &AnyonModel, seen: &mut Seen) -> Result<f64> {
    let (lo, hi) = extremes(&build_w(&build_sector_basis(model)?)?.matrix)?;
    seen.w(lo);
    Ok(seen.w(hi))
}

fn c1(seen: &mut Seen) -> Result<Verdict> {
    let hi = max_w_eigen(&AnyonModel::su2(), seen)?;
    let d = (hi - 7f64.sqrt()).abs();
    verdict(d <= 1e-9, format!("max eig W = {hi:.12}, |Δ| = {d:.1e}"))
}

fn c2(seen: &mut Seen) -> Result<Verdict> {
    let basis = build_sector_basis(&AnyonModel::su2())?;
    let w = build_w(&basis)?;
    let s7 = 7f64.sqrt();
    let a_plus = -((7.0 + 2.0 * s7) / 14.0).sqrt();
    let a_minus = ((7.0 - 2.0 * s7) / 14.0).sqrt();
    let vp = seen.w(w.expectation(&r_state(&basis, a_plus)?.vector)?);
    let vm = seen.w(w.expectation(&r_state(&basis, a_minus)?.vector)?);
    let ok = (vp - s7).abs() <= 1e-9 && (vm + s7).abs() <= 1e-9;
    verdict(ok, format!("<W>(a+) = {vp:.12}, <W>(a-) = {vm:.12}"))
}

fn c3(seen: &mut Seen) -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    let grid = a_grid(report::ARGMAX_SAMPLES);
    for k in [2u32, 3, 5, 10, 100] {
        let model = AnyonModel::su2k(k)?;
        let hi = max_w_eigen(&model, seen)?;
        let de = (hi - su2k_max_violation(k as f64)).abs();
        let curve = w_curve(&build_sector_basis(&model)?, &grid)?;
        seen.w.extend(curve.iter().copied());
        let (a, _) = sampled_argmax(&grid, &curve).expect("non-empty grid");
        let da = (a - a_plus_closed_form(k as f64)).abs();
        ok &= de <= 1e-9 && da <= 1e-4;
        parts.push(format!("k={k}: |Δλ|={de:.1e} |Δa|={da:.1e}"));
    }
    verdict(ok, parts.join("; "))
}

fn c4(seen: &mut Seen) -> Result<Verdict> {
    let hi = max_w_eigen(&AnyonModel::fibonacci(), seen)?;
    let target = 2.0 * (-7.0 + 4.0 * 5f64.sqrt()).sqrt();
    let d = (hi - target).abs();
    let dk = (hi - su2k_max_violation(3.0)).abs();
    verdict(d <= 1e-9 && dk <= 1e-9, format!("max eig W = {hi:.12}, |Δ| = {d:.1e}, |Δ k=3| = {dk:.1e}"))
}

fn c5(seen: &mut Seen) -> Result<Verdict> {
    let rep = braid_generators(&AnyonModel::fibonacci())?;
    let word: BraidWord = FIB_VIOLATING_WORD.parse()?;
    let v = seen.w(build_w(rep.basis())?.expectation(&apply_word(&rep, &word, &rep.phi0())?)?);
    verdict((v - 2.5310).abs() <= 5e-4, format!("<W> = {v:.6}"))
}

fn c6(seen: &mut Seen) -> Result<Verdict> {
    let (_, off) = cp_diagonal()?;
    let v = seen.w(su2_2_cp_sequence()?.1);
    let d = (v + 2.0 * 2f64.sqrt()).abs();
    verdict(d <= 1e-9 && off <= 1e-10, format!("<W> = {v:.12}, |Δ| = {d:.1e}, CP off-diagonal {off:.1e}"))
}

fn c7(seen: &mut Seen) -> Result<Verdict> {
    let r = su2_2_local_rotation_route()?;
    let v = seen.w(r.value);
    let d = (v - 2.0 * 2f64.sqrt()).abs();
    let ok = r.phi0_prime_overlap >= 1.0 - 1e-9 && d <= 1e-9;
    verdict(ok, format!("overlap = {:.12}, <W> = {v:.12}", r.phi0_prime_overlap))
}

fn c8(seen: &mut Seen) -> Result<Verdict> {
    let model = AnyonModel::su2k(2)?;
    let rep = braid_generators(&model)?;
    let w = build_w(rep.basis())?;
    let orbit = orbit_states(&rep, &rep.phi0(), default_orbit_limit(&model))?;
    let mut top: f64 = 0.0;
    for s in &orbit {
        top = top.max(seen.w(w.expectation(s)?).abs());
    }
    verdict(top <= 2.0 + 1e-9, format!("{} rays, max |<W>| = {top:.12}", orbit.len()))
}

fn c9(seen: &mut Seen) -> Result<Verdict> {
    let (lo, hi) = extremes(&build_i3(&build_sector_basis(&AnyonModel::ds3())?)?.matrix)?;
    seen.i3(hi);
    seen.i3(lo);
    verdict((lo + 2.5216).abs() <= 5e-4, format!("min eig I3 = {lo:.6}"))
}

fn c10(seen: &mut Seen) -> Result<Verdict> {
    let rep = braid_generators(&AnyonModel::ds3())?;
    let i3 = build_i3(rep.basis())?;
    let scan = ds3_permutation_scan(&rep, &i3, 0)?;
    seen.i3.extend(scan.values.iter().map(|v| v.value));
    let ok = scan.values.len() == 720 && scan.max_abs <= 2.0 + 1e-9 && scan.max - scan.min > 1e-6;
    verdict(
        ok,
        format!("{} words, <I3> in [{:.6}, {:.6}]", scan.values.len(), scan.min, scan.max),
    )
}

fn c11(seen: &mut Seen) -> Result<Verdict> {
    let fam = Ds3PhaseFamily::new()?;
    let v = seen.i3(fam.value(&DS3_REFERENCE_ANGLES)?);
    let r = optimize_phases(
        |x| fam.value(x).unwrap_or(f64::NAN),
        6,
        report::OPTIMIZER_RESTARTS,
        0,
        &OptimizerOptions::default(),
    );
    seen.i3.extend(r.trace.iter().map(|t| t.value));
    let ok = (v - 2.0512).abs() <= 5e-4 && r.value >= 2.0512 - 1e-3;
    verdict(
        ok,
        format!("<I3> at reference angles = {v:.6}, optimizer best = {:.6} ({} restarts)", r.value, r.trace.len()),
    )
}

fn c12(_: &mut Seen) -> Result<Verdict> {
    let w = lhv_bound_oracle(WitnessKind::W);
    let i3 = lhv_bound_oracle(WitnessKind::I3);
    let ok = w.max == 2.0 && w.strategies == 16 && i3.max == 2.0 && i3.strategies == 81;
    verdict(
        ok,
        format!(
            "W max {} over {}, I3 max {} over {} (I3 min {})",
            w.max, w.strategies, i3.max, i3.strategies, i3.min
        ),
    )
}

fn c13(seen: &mut Seen) -> Result<Verdict> {
    let r = oracle_equivalence_report()?;
    seen.w.extend(r.spin_eigenvalues.iter().copied());
    let ok = r.sector_rank == 5 && r.spectrum_residual <= 1e-8 && (r.max_eigenvalue - 7f64.sqrt()).abs() <= 1e-9;
    verdict(
        ok,
        format!(
            "rank {}, spectrum residual {:.1e}, max {:.12}",
            r.sector_rank, r.spectrum_residual, r.max_eigenvalue
        ),
    )
}

fn c14(_: &mut Seen) -> Result<Verdict> {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ["su2k:2", "fib", "ds3"] {
        let rep = braid_generators(&AnyonModel::parse(id)?)?;
        let r = verify_braid_relations(&rep)?;
        let yb = r.yang_baxter.iter().copied().fold(0.0, f64::max);
        let far = r.far_commutation.iter().map(|x| x.1).fold(0.0, f64::max);
        ok &= r.unitarity <= 1e-10 && yb <= 1e-10 && far <= 1e-10;
        if id == "ds3" {
            ok &= r.involution <= 1e-12;
            parts.push(format!("ds3 B^2 {:.1e}", r.involution));
        }
        parts.push(format!("{id} unitary {:.1e} YB {yb:.1e} far {far:.1e}", r.unitarity));
    }
    for (id, want) in [("su2", 5), ("su2k:2", 4), ("fib", 5), ("ds3", 11)] {
        let m = AnyonModel::parse(id)?;
        let f = m.recoupling_matrix();
        let inv = f.matmul(&f)?.max_diff(&ComplexMatrix::identity(f.rows()));
        let basis = build_sector_basis(&m)?;
        let dim = sector_dimension(&m, &[m.generator(); 6], Charge::VACUUM)?;
        ok &= inv <= 1e-12 && dim == want && basis.dim() as u64 == want;
        parts.push(format!("{id} F^2 {inv:.1e} dim {dim}"));
    }
    let ds3 = AnyonModel::ds3();
    let mut chains = true;
    for n in 1..=12u32 {
        let (t, l, p) = phi_power_multiplicities(n)?;
        let anyons = vec![Charge(2); n as usize];
        chains &= sector_dimension(&ds3, &anyons, Charge(0))? == t
            && sector_dimension(&ds3, &anyons, Charge(1))? == l
            && sector_dimension(&ds3, &anyons, Charge(2))? == p;
    }
    ok &= chains;
    parts.push(format!("Phi^n chains {}", if chains { "match" } else { "differ" }));
    verdict(ok, parts.join("; "))
}

fn c15(seen: &mut Seen) -> Result<Verdict> {
    // Random braid words on the three braided models add more states.
    for (id, kind) in [("fib", WitnessKind::W), ("su2k:2", WitnessKind::W), ("ds3", WitnessKind::I3)] {
        let rep = braid_generators(&AnyonModel::parse(id)?)?;
        let op = match kind {
            WitnessKind::W => build_w(rep.basis())?,
            WitnessKind::I3 => build_i3(rep.basis())?,
        };
        let opts = SearchOptions {
            budget: 500,
            seed: 1,
            ..SearchOptions::default()
        };
        let v = best_violation_search(&rep, &op, &rep.phi0(), &opts)?.value;
        match kind {
            WitnessKind::W => seen.w(v),
            WitnessKind::I3 => seen.i3(v),
        };
    }
    let run = report::reproduce("all", 0)?;
    let observed = |id: &str| run.case(id).and_then(|c| c.observed).unwrap_or(f64::INFINITY);
    let top_w = seen.w.iter().map(|v| v.abs()).fold(observed(CEILING_W), f64::max);
    let top_i3 = seen.i3.iter().map(|v| v.abs()).fold(observed(CEILING_I3), f64::max);
    let ok = top_w <= 2.0 * 2f64.sqrt() + 1e-9 && top_i3 <= 4.0 + 1e-9 && run.passed;
    verdict(
        ok,
        format!(
            "max |<W>| = {top_w:.12} over {} + run, max |<I3>| = {top_i3:.6} over {} + run; full report {}",
            seen.w.len(),
            seen.i3.len(),
            if run.passed { "passed" } else { "failed" }
        ),
    )
}

fn main() -> ExitCode {
    type Check = fn(&mut Seen) -> Result<Verdict>;
    let checks: [(&str, Check); 15] = [
        ("SU(2) max eigenvalue of W is sqrt7", c1),
        ("SU(2) r(a+-) reach +-sqrt7", c2),
        ("SU(2)_k closed form and a+ argmax", c3),
        ("Fibonacci max eigenvalue", c4),
        ("Fibonacci braid word", c5),
        ("SU(2)_2 CP sequence", c6),
        ("SU(2)_2 local rotation route", c7),
        ("SU(2)_2 orbit no-go", c8),
        ("D(S3) min eigenvalue of I3", c9),
        ("D(S3) permutation scan", c10),
        ("D(S3) phase family and optimizer", c11),
        ("LHV bounds", c12),
        ("spin oracle", c13),
        ("structure suite", c14),
        ("global ceiling", c15),
    ];
    let mut seen = Seen::default();
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let (ok, detail) = match f(&mut seen) {
            Ok(v) => (v.ok, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
