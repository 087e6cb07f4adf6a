//! Interaction phase gates, the SU(2)₂ constructions reaching the Tsirelson
//! bound, the D(S₃) six-angle family, and the search drivers.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid::{
    apply_word, braid_generators, canonical_b3_assignment, straddle_matrix, BraidRep, BraidWord, Letter,
};
use crate::error::{Error, Result};
use crate::linalg::{cis, direct_sum, states_equal_up_to_phase, ComplexMatrix, ComplexVector, ONE};
use crate::models::{AnyonModel, Charge, ModelId};
use crate::observables::{build_i3, build_w, lift_local, local_channel_operator, Pair, WitnessOperator};
use crate::sector::{phi_state, SectorBasis};

/// `(α₁, …, α₆)` at which the D(S₃) family reaches its largest `⟨I₃⟩`.
pub const DS3_REFERENCE_ANGLES: [f64; 6] = [0.7943, 0.3989, 3.5531, 0.9257, -0.8525, 0.1036];

/// Word preparing the D(S₃) family's braid state, in operator notation.
pub const DS3_FAMILY_WORD: &str = "b1 b5 b3 b2 b3 b4";

/// Word preparing `|φ₀'⟩` in SU(2)₂, in operator notation.
pub const ISING_PHI0_PRIME_WORD: &str = "b2' b3' b5 b4 b3 b2";

/// Fibonacci word of length 25 with a large `⟨W⟩`, in operator notation.
pub const FIB_VIOLATING_WORD: &str = "( b3 b4' b1' b3' b2' ) x5";

/// A diagonal interaction on one adjacent pair.
#[derive(Debug, Clone)]
pub struct PhaseGate {
    pub pair: Pair,
    /// Phase per fusion channel; channels not listed (and the vacuum) get 0.
    pub phases: Vec<(Charge, f64)>,
    pub matrix: ComplexMatrix,
}

/// `D_{i,i+1}`: each fusion channel `c` of the pair picks up `e^{iθ(c)}`.
pub fn phase_gate(basis: &SectorBasis, pair: Pair, phases: &[(Charge, f64)]) -> Result<PhaseGate> {
    let m = basis.model();
    let mut theta = vec![0.0; basis.n()];
    for &(c, t) in phases {
        let Some(i) = basis.channel_index(c) else {
            return Err(Error::InvalidArgument(format!(
                "{} is not a fusion channel of the pair",
                m.label_name(c)
            )));
        };
        if c.is_vacuum() && t != 0.0 {
            return Err(Error::InvalidArgument("vacuum-channel phase must be 0".into()));
        }
        theta[i] = t;
    }
    let d = ComplexMatrix::diagonal(&theta.iter().map(|&t| cis(t)).collect::<Vec<_>>());
    let matrix = match pair {
        Pair::P34 => {
            let mut assignment = canonical_b3_assignment(basis)?;
            for s in &mut assignment.scalars {
                let c = single_channel_at(basis, s.0)?;
                s.1 = cis(theta[basis.channel_index(c).expect("pair channel")]);
            }
            straddle_matrix(basis, &assignment, &d)?
        }
        _ => {
            let local = local_channel_operator(basis, pair, &d);
            direct_sum(&[
                lift_local(basis, pair, &local),
                ComplexMatrix::identity(basis.tail_dim()),
            ])?
        }
    };
    Ok(PhaseGate {
        pair,
        phases: phases.to_vec(),
        matrix,
    })
}

fn single_channel_at(basis: &SectorBasis, pos: usize) -> Result<Charge> {
    let n = basis.n();
    let ch = basis.channels();
    let out = basis.model().fusion_multiply(ch[pos / n], ch[pos % n])?;
    Ok(out[0])
}

/// D(S₃) gate `D(α, β)`: `Λ` channel gets `α`, `Φ` channel gets `β`.
pub fn ds3_gate(basis: &SectorBasis, pair: Pair, alpha: f64, beta: f64) -> Result<PhaseGate> {
    phase_gate(basis, pair, &[(Charge(1), alpha), (Charge(2), beta)])
}

fn ising() -> Result<BraidRep> {
    braid_generators(&AnyonModel::su2k(2)?)
}

fn prod(ms: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(ms[0].rows());
    for m in ms {
        out = out.matmul(m)?;
    }
    Ok(out)
}

/// `CP = e^{iπ/4} B₂B₁B₂B₃⁻¹B₂⁻¹B₁⁻¹B₅` on the SU(2)₂ sector.
pub fn su2_2_cp() -> Result<ComplexMatrix> {
    let r = ising()?;
    let b = |k| r.generator(k).clone();
    let bi = |k| r.generator(k).adjoint();
    Ok(prod(&[&b(2), &b(1), &b(2), &bi(3), &bi(2), &bi(1), &b(5)])?.scale(cis(FRAC_PI_4)))
}

/// `−CP·B₃B₄·D·B₂B₃|φ₀⟩` with `D` the (2,3) gate putting `π/4` on `ψ`,
/// and its `⟨W⟩`.
pub fn su2_2_cp_sequence() -> Result<(ComplexVector, f64)> {
    let r = ising()?;
    let basis = r.basis();
    let d = phase_gate(basis, Pair::P23, &[(Charge(2), FRAC_PI_4)])?.matrix;
    let cp = su2_2_cp()?;
    let mut v = r.phi0();
    for m in [r.generator(3), r.generator(2), &d, r.generator(4), r.generator(3), &cp] {
        v = m.apply(&v)?;
    }
    let v = v.scale(-ONE);
    let w = build_w(basis)?;
    let val = w.expectation(&v)?;
    Ok((v, val))
}

/// `e^{−iπ/4σᶻ} e^{−iπ/8σˣ} e^{iπ/4σᶻ}` minus `e^{−iπ/8σʸ}`, as a max-entry residual.
pub fn euler_identity_residual() -> f64 {
    let e = ComplexMatrix::exp_involution;
    let z = ComplexMatrix::pauli_z();
    let x = ComplexMatrix::pauli_x();
    let lhs = &(&e(FRAC_PI_4, &z) * &e(FRAC_PI_8, &x)) * &e(-FRAC_PI_4, &z);
    lhs.max_diff(&e(FRAC_PI_8, &ComplexMatrix::pauli_y()))
}

#[derive(Debug, Clone)]
pub struct LocalRotationRoute {
    pub phi0_prime: ComplexVector,
    /// `|⟨target|φ₀'⟩|` with target `(|0'0⟩ + |1'1⟩)/√2`.
    pub phi0_prime_overlap: f64,
    /// Distance of the three-gate product from `e^{−iπ/8σʸ} ⊗ 1`, modulo phase.
    pub decomposition_residual: f64,
    pub state: ComplexVector,
    pub value: f64,
}

/// Braids `|φ₀⟩` to `|φ₀'⟩`, then rotates A by `e^{−iπ/8σʸ}` built from
/// (2,3) and (1,2) phase gates.
pub fn su2_2_local_rotation_route() -> Result<LocalRotationRoute> {
    let r = ising()?;
    let basis = r.basis();
    let word: BraidWord = ISING_PHI0_PRIME_WORD.parse()?;
    let phi0_prime = apply_word(&r, &word, &r.phi0())?;
    let target = (&phi_state(basis, 0)? + &phi_state(basis, 3)?).scale(ONE * (1.0 / 2f64.sqrt()));
    let phi0_prime_overlap = target.inner(&phi0_prime)?.norm();

    let psi = Charge(2);
    let z_plus = phase_gate(basis, Pair::P23, &[(psi, FRAC_PI_2)])?.matrix;
    let x = phase_gate(basis, Pair::P12, &[(psi, FRAC_PI_4)])?.matrix;
    let z_minus = phase_gate(basis, Pair::P23, &[(psi, -FRAC_PI_2)])?.matrix;
    let g = prod(&[&z_plus, &x, &z_minus])?;
    let y = ComplexMatrix::exp_involution(FRAC_PI_8, &ComplexMatrix::pauli_y()).kron(&ComplexMatrix::identity(2));
    let decomposition_residual = g.phase_insensitive_diff(&y);

    let state = g.apply(&phi0_prime)?;
    let value = build_w(basis)?.expectation(&state)?;
    Ok(LocalRotationRoute {
        phi0_prime,
        phi0_prime_overlap,
        decomposition_residual,
        state,
        value,
    })
}

/// `D₃₄(α₁,α₂) D₁₂(α₃,α₄) D₂₃(α₅,α₆) B₁B₅B₃B₂B₃B₄|φ₀⟩` on D(S₃).
#[derive(Debug, Clone)]
pub struct Ds3PhaseFamily {
    basis: SectorBasis,
    braided: ComplexVector,
    witness: WitnessOperator,
}

impl Ds3PhaseFamily {
    pub fn new() -> Result<Self> {
        let rep = braid_generators(&AnyonModel::ds3())?;
        let word: BraidWord = DS3_FAMILY_WORD.parse()?;
        let braided = apply_word(&rep, &word, &rep.phi0())?;
        let witness = build_i3(rep.basis())?;
        Ok(Self {
            basis: rep.basis().clone(),
            braided,
            witness,
        })
    }

    /// The braided state before any phase gate.
    pub fn braided_state(&self) -> &ComplexVector {
        &self.braided
    }

    pub fn witness(&self) -> &WitnessOperator {
        &self.witness
    }

    pub fn state(&self, angles: &[f64]) -> Result<ComplexVector> {
        if angles.len() != 6 {
            return Err(Error::InvalidArgument(format!("expected 6 angles, got {}", angles.len())));
        }
        let b = &self.basis;
        let mut v = self.braided.clone();
        for (pair, k) in [(Pair::P23, 4), (Pair::P12, 2), (Pair::P34, 0)] {
            v = ds3_gate(b, pair, angles[k], angles[k + 1])?.matrix.apply(&v)?;
        }
        Ok(v)
    }

    /// `⟨I₃⟩` at the given angles.
    pub fn value(&self, angles: &[f64]) -> Result<f64> {
        self.witness.expectation(&self.state(angles)?)
    }
}

/// The D(S₃) family state at `angles`.
pub fn ds3_phase_family(angles: &[f64]) -> Result<ComplexVector> {
    Ds3PhaseFamily::new()?.state(angles)
}

/// Nelder–Mead settings. The search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerOptions {
    pub max_evaluations: usize,
    pub initial_step: f64,
    /// Stop when the simplex values span less than this.
    pub f_tol: f64,
    /// ...and every vertex lies within this of the best one.
    pub x_tol: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 20_000,
            initial_step: 0.5,
            f_tol: 1e-13,
            x_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub start: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub angles: Vec<f64>,
    pub value: f64,
    /// Total evaluations over all restarts.
    pub evaluations: usize,
    pub converged: bool,
    pub trace: Vec<RestartTrace>,
}

impl OptimizationResult {
    pub fn trace_json(&self) -> String {
        serde_json::to_string_pretty(&self.trace).expect("plain data serializes")
    }
}

/// One Nelder–Mead run maximizing `f` from `x0`.
/// Returns `(best point, best value, evaluations, converged)`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &OptimizerOptions) -> (Vec<f64>, f64, usize, bool) {
    let n = x0.len();
    let neg = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            -v
        }
    };
    let mut evals = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), neg(x0)));
    evals += 1;
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = neg(&x);
        evals += 1;
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then_with(|| lex(&a.0, &b.0)));
    };
    let mut converged = false;
    while evals < opts.max_evaluations {
        order(&mut simplex);
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = toward(-1.0);
        let fr = neg(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = toward(-2.0);
            let fe = neg(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let x = toward(-0.5);
                let v = neg(&x);
                (x, v)
            } else {
                let x = toward(0.5);
                let v = neg(&x);
                (x, v)
            };
            evals += 1;
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&x0) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = neg(x);
                    evals += 1;
                }
            }
        }
    }
    order(&mut simplex);
    let (x, v) = simplex.swap_remove(0);
    (x, -v, evals, converged)
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Is `(va, xa)` a better optimum than `(vb, xb)`? Higher value wins, then the
/// lexicographically smaller point.
fn better(va: f64, xa: &[f64], vb: f64, xb: &[f64]) -> bool {
    match va.partial_cmp(&vb) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => lex(xa, xb) == Ordering::Less,
    }
}

/// Maximizes `objective` from `restarts` random starts, uniform in `[−π, π]^dim`.
pub fn optimize_phases<F: Fn(&[f64]) -> f64>(
    objective: F,
    dim: usize,
    restarts: usize,
    seed: u64,
    opts: &OptimizerOptions,
) -> OptimizationResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|_| (0..dim).map(|_| rng.gen_range(-PI..=PI)).collect())
        .collect();
    optimize_from_starts(&objective, &starts, opts)
}

/// Maximizes `objective` from each given start.
pub fn optimize_from_starts<F: Fn(&[f64]) -> f64>(
    objective: F,
    starts: &[Vec<f64>],
    opts: &OptimizerOptions,
) -> OptimizationResult {
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    let mut total = 0;
    let mut trace = Vec::with_capacity(starts.len());
    for (i, x0) in starts.iter().enumerate() {
        let (x, v, evals, conv) = nelder_mead(&objective, x0, opts);
        total += evals;
        trace.push(RestartTrace {
            restart: i,
            start: x0.clone(),
            value: v,
            evaluations: evals,
            converged: conv,
        });
        let replace = match &best {
            None => true,
            Some((bx, bv, _)) => better(v, &x, *bv, bx),
        };
        if replace {
            best = Some((x, v, conv));
        }
    }
    let (angles, value, converged) = best.unwrap_or((Vec::new(), f64::NEG_INFINITY, false));
    OptimizationResult {
        angles,
        value,
        evaluations: total,
        converged,
        trace,
    }
}

/// How candidate words are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    /// Uniform random words of random length up to the bound.
    Random,
    /// One word per permutation of the six anyons (involutive generators only).
    Permutations,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub max_length: usize,
    /// Number of candidate words beyond the start state.
    pub budget: usize,
    pub seed: u64,
    /// Words tried before the random ones; they count toward the budget.
    pub extra: Vec<BraidWord>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Random,
            max_length: 25,
            budget: 10_000,
            seed: 0,
            extra: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub word: BraidWord,
    /// Signed `⟨witness⟩` of the best word (largest absolute value).
    pub value: f64,
    pub evaluations: usize,
}

/// Searches braid words applied to `start` for the largest `|⟨witness⟩|`.
pub fn best_violation_search(
    rep: &BraidRep,
    witness: &WitnessOperator,
    start: &ComplexVector,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let mut best = SearchResult {
        word: BraidWord::identity(),
        value: witness.expectation(start)?,
        evaluations: 1,
    };
    let consider = |word: BraidWord, best: &mut SearchResult| -> Result<()> {
        let v = witness.expectation(&apply_word(rep, &word, start)?)?;
        best.evaluations += 1;
        if v.abs() > best.value.abs() + 1e-12 {
            best.word = word;
            best.value = v;
        }
        Ok(())
    };
    let mut left = opts.budget;
    for w in opts.extra.iter().take(left) {
        consider(w.clone(), &mut best)?;
        left -= 1;
    }
    match opts.mode {
        SearchMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let letters = Letter::all();
            for _ in 0..left {
                if opts.max_length == 0 {
                    break;
                }
                let len = rng.gen_range(1..=opts.max_length);
                let word = BraidWord::from_action_order(
                    (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect(),
                );
                consider(word, &mut best)?;
            }
        }
        SearchMode::Permutations => {
            if rep.model().id() != ModelId::Ds3 {
                return Err(Error::Unsupported {
                    model: rep.model().name(),
                    what: "permutation search (generators are not involutions)".into(),
                });
            }
            for p in crate::braid::all_permutations().into_iter().take(left) {
                let word = crate::braid::permutation_word(&p);
                if word.len() <= opts.max_length {
                    consider(word, &mut best)?;
                }
            }
        }
    }
    Ok(best)
}

/// Diagonal of `CP` and its largest off-diagonal magnitude.
pub fn cp_diagonal() -> Result<(Vec<Complex64>, f64)> {
    let cp = su2_2_cp()?;
    Ok((cp.diag(), cp.off_diagonal_max()))
}

/// Does `|ψ⟩` coincide with `|φ⟩` up to a global phase?
pub fn same_ray(a: &ComplexVector, b: &ComplexVector) -> Result<bool> {
    states_equal_up_to_phase(a, b, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use crate::observables::upsilon;
    use crate::sector::build_sector_basis;

    fn basis(id: &str) -> SectorBasis {
        build_sector_basis(&AnyonModel::parse(id).unwrap()).unwrap()
    }

    #[test]
    fn zero_phases_give_identity() {
        for id in ["su2k:2", "fib", "ds3"] {
            let b = basis(id);
            for p in Pair::ALL {
                let g = phase_gate(&b, p, &[]).unwrap();
                assert!(g.matrix.max_diff(&ComplexMatrix::identity(b.dim())) < 1e-14, "{id} {p}");
            }
        }
    }

    #[test]
    fn phase_gate_rejects_bad_channels() {
        let b = basis("su2k:2");
        assert!(phase_gate(&b, Pair::P23, &[(Charge(1), 0.3)]).is_err());
        assert!(phase_gate(&b, Pair::P23, &[(Charge(0), 0.3)]).is_err());
        assert!(phase_gate(&b, Pair::P23, &[(Charge(0), 0.0)]).is_ok());
    }

    #[test]
    fn ising_gates_are_pauli_rotations() {
        let b = basis("su2k:2");
        let id = ComplexMatrix::identity(2);
        let d = phase_gate(&b, Pair::P23, &[(Charge(2), FRAC_PI_4)]).unwrap().matrix;
        let z = ComplexMatrix::exp_involution(FRAC_PI_8, &ComplexMatrix::pauli_z()).kron(&id);
        assert!(d.phase_insensitive_diff(&z) < 1e-12);
        let d = phase_gate(&b, Pair::P12, &[(Charge(2), FRAC_PI_4)]).unwrap().matrix;
        let x = ComplexMatrix::exp_involution(FRAC_PI_8, &ComplexMatrix::pauli_x()).kron(&id);
        assert!(d.phase_insensitive_diff(&x) < 1e-12);
    }

    #[test]
    fn gates_commute_with_their_measurement() {
        let b = basis("fib");
        for p in Pair::MEASURED {
            let g = phase_gate(&b, p, &[(Charge(1), 0.77)]).unwrap();
            assert!(g.matrix.is_unitary(1e-12));
            let c = g.matrix.commutator(&upsilon(&b, p).unwrap()).unwrap();
            assert!(c.max_abs() <= 1e-12, "{p}");
        }
        let b = basis("ds3");
        for p in Pair::MEASURED {
            let g = ds3_gate(&b, p, 0.4, -1.3).unwrap();
            for proj in crate::observables::pair_projectors(&b, p).unwrap() {
                assert!(g.matrix.commutator(&proj).unwrap().max_abs() <= 1e-12, "{p}");
            }
        }
    }

    #[test]
    fn straddling_gate_with_r_phases_is_b3() {
        let fib = AnyonModel::fibonacci();
        let b = basis("fib");
        let rep = braid_generators(&fib).unwrap();
        let r = fib.r_matrix().unwrap();
        let phases = vec![(Charge(1), (r[(1, 1)] / r[(0, 0)]).arg())];
        let g = phase_gate(&b, Pair::P34, &phases).unwrap().matrix;
        // B₃ and D₃₄ differ by the vacuum phase, which D fixes to 0
        let scaled = g.scale(r[(0, 0)]);
        assert!(scaled.max_diff(rep.generator(3)) < 1e-12);
    }

    #[test]
    fn cp_is_diagonal_unitary() {
        let cp = su2_2_cp().unwrap();
        assert!(cp.is_unitary(1e-12));
        let (d, off) = cp_diagonal().unwrap();
        assert!(off <= 1e-10);
        let want = [ONE, ONE, ONE, -ONE];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn tsirelson_routes() {
        let top = *hermitian_eigenvalues(&build_w(&basis("su2k:2")).unwrap().matrix)
            .unwrap()
            .last()
            .unwrap();
        assert!((top - 8f64.sqrt()).abs() < 1e-12);
        let (v, val) = su2_2_cp_sequence().unwrap();
        assert!(v.is_normalized(1e-12));
        assert!((val + 8f64.sqrt()).abs() < 1e-9, "{val}");
        let route = su2_2_local_rotation_route().unwrap();
        assert!((route.phi0_prime_overlap - 1.0).abs() < 1e-10);
        assert!(route.decomposition_residual < 1e-10);
        assert!((route.value - 8f64.sqrt()).abs() < 1e-9, "{}", route.value);
        assert!(euler_identity_residual() < 1e-12);
    }

    #[test]
    fn ds3_family_reference_value() {
        let fam = Ds3PhaseFamily::new().unwrap();
        let v = fam.value(&DS3_REFERENCE_ANGLES).unwrap();
        assert!((v - 2.0512).abs() < 1e-4, "{v}");
        assert!(fam.value(&[0.0; 6]).unwrap().abs() <= 2.0 + 1e-9);
        assert!(fam.state(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap().is_normalized(1e-12));
        assert!(fam.state(&[0.0; 5]).is_err());
    }

    #[test]
    fn ds3_family_is_periodic() {
        let fam = Ds3PhaseFamily::new().unwrap();
        let base = [0.3, -1.1, 2.0, 0.7, -0.4, 1.9];
        let v0 = fam.value(&base).unwrap();
        for i in 0..6 {
            let mut a = base;
            a[i] += 2.0 * PI;
            assert!((fam.value(&a).unwrap() - v0).abs() < 1e-10);
        }
    }

    #[test]
    fn optimizer_recovers_bowl_center() {
        let c = [0.3, -1.2, 2.5, 0.0, -0.7, 1.1];
        let f = |x: &[f64]| -x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let r = optimize_phases(f, 6, 3, 0, &OptimizerOptions::default());
        for (a, b) in r.angles.iter().zip(&c) {
            assert!((a - b).abs() < 1e-4);
        }
        assert!(r.converged);
    }

    #[test]
    fn optimizer_on_constant() {
        let r = optimize_phases(|_| 1.5, 6, 2, 7, &OptimizerOptions::default());
        assert!(r.converged);
        assert_eq!(r.value, 1.5);
        assert_eq!(r.trace.len(), 2);
        assert!(r.trace_json().contains("evaluations"));
    }

    #[test]
    fn optimizer_is_seed_deterministic() {
        let f = |x: &[f64]| (x[0]).sin() * (x[1]).cos();
        let a = optimize_phases(f, 2, 4, 11, &OptimizerOptions::default());
        let b = optimize_phases(f, 2, 4, 11, &OptimizerOptions::default());
        assert_eq!(a, b);
    }

    #[test]
    fn optimizing_from_reference_angles() {
        let fam = Ds3PhaseFamily::new().unwrap();
        let f = |x: &[f64]| fam.value(x).map(f64::abs).unwrap_or(f64::NAN);
        let r = optimize_from_starts(f, &[DS3_REFERENCE_ANGLES.to_vec()], &OptimizerOptions::default());
        assert!(r.value >= 2.0512, "{}", r.value);
        assert!((fam.value(&r.angles).unwrap().abs() - r.value).abs() <= 1e-9);
        assert!(r.value <= 4.0);
    }

    #[test]
    fn search_drivers() {
        let fib = braid_generators(&AnyonModel::fibonacci()).unwrap();
        let w = build_w(fib.basis()).unwrap();
        let start = fib.phi0();
        let none = best_violation_search(
            &fib,
            &w,
            &start,
            &SearchOptions {
                budget: 0,
                extra: vec![FIB_VIOLATING_WORD.parse().unwrap()],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(none.evaluations, 1);
        assert!(none.word.is_empty());

        let opts = SearchOptions {
            budget: 200,
            extra: vec![FIB_VIOLATING_WORD.parse().unwrap()],
            ..Default::default()
        };
        let r = best_violation_search(&fib, &w, &start, &opts).unwrap();
        assert!(r.value >= 2.5310 - 1e-4);
        let again = best_violation_search(&fib, &w, &start, &opts).unwrap();
        assert_eq!(r.word, again.word);

        let ising = braid_generators(&AnyonModel::su2k(2).unwrap()).unwrap();
        let w2 = build_w(ising.basis()).unwrap();
        let r = best_violation_search(
            &ising,
            &w2,
            &ising.phi0(),
            &SearchOptions {
                budget: 300,
                max_length: 12,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.value.abs() <= 2.0 + 1e-9);
    }
}
