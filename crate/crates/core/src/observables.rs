//! Pair-charge measurements, the Bell witnesses `W` and `I₃`, the `|r(a)⟩`
//! family, and local-hidden-variable bounds by strategy enumeration.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, ComplexMatrix, ComplexVector};
use crate::models::Charge;
use crate::sector::{phi_state, SectorBasis};

/// Adjacent anyon pair, numbered 1..6 left to right. A holds 1-3, B holds 4-6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    P12,
    P23,
    P34,
    P45,
    P56,
}

impl Pair {
    pub const ALL: [Pair; 5] = [Pair::P12, Pair::P23, Pair::P34, Pair::P45, Pair::P56];

    /// Pairs measured in the Bell setup.
    pub const MEASURED: [Pair; 4] = [Pair::P12, Pair::P23, Pair::P45, Pair::P56];

    pub fn parse(s: &str) -> Result<Pair> {
        let t: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
        match t.as_str() {
            "12" => Ok(Pair::P12),
            "23" => Ok(Pair::P23),
            "34" => Ok(Pair::P34),
            "45" => Ok(Pair::P45),
            "56" => Ok(Pair::P56),
            _ => Err(Error::InvalidArgument(format!("unknown pair {s:?}"))),
        }
    }

    /// Is the pair's channel diagonal in the primed basis of its side?
    fn primed(self) -> bool {
        matches!(self, Pair::P12 | Pair::P45)
    }

    fn on_a(self) -> bool {
        matches!(self, Pair::P12 | Pair::P23)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pair::P12 => "(1,2)",
            Pair::P23 => "(2,3)",
            Pair::P34 => "(3,4)",
            Pair::P45 => "(4,5)",
            Pair::P56 => "(5,6)",
        };
        f.write_str(s)
    }
}

/// Local `n × n` operator for a diagonal channel function in the basis
/// diagonalizing `pair`: `d` itself for inner pairs, `F d F` for outer ones.
pub(crate) fn local_channel_operator(basis: &SectorBasis, pair: Pair, d: &ComplexMatrix) -> ComplexMatrix {
    if pair.primed() {
        let f = basis.model().recoupling_matrix();
        &(&f * d) * &f
    } else {
        d.clone()
    }
}

/// Lifts a local operator on one side into the product block (`X ⊗ 1` or `1 ⊗ X`).
pub(crate) fn lift_local(basis: &SectorBasis, pair: Pair, local: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(basis.n());
    if pair.on_a() {
        local.kron(&id)
    } else {
        id.kron(local)
    }
}

fn check_measured(pair: Pair) -> Result<()> {
    if pair == Pair::P34 {
        return Err(Error::InvalidArgument(
            "pair (3,4) straddles A and B and is not measured".into(),
        ));
    }
    Ok(())
}

/// Projectors onto each fusion channel of `pair`, in channel order.
/// Paired singleton states are assigned their own (unique) channel.
pub fn pair_projectors(basis: &SectorBasis, pair: Pair) -> Result<Vec<ComplexMatrix>> {
    check_measured(pair)?;
    let n = basis.n();
    let mut out = Vec::with_capacity(n);
    for (yi, &y) in basis.channels().iter().enumerate() {
        let mut e = vec![0.0; n];
        e[yi] = 1.0;
        let local = local_channel_operator(basis, pair, &ComplexMatrix::real_diagonal(&e));
        let tail: Vec<f64> = basis.elements()[basis.block_dim()..]
            .iter()
            .map(|el| if el.a.x == y { 1.0 } else { 0.0 })
            .collect();
        out.push(direct_sum(&[
            lift_local(basis, pair, &local),
            ComplexMatrix::real_diagonal(&tail),
        ])?);
    }
    Ok(out)
}

/// Channel sign `diag(v, −v, …)` with `v` on the vacuum channel.
pub fn channel_sign(basis: &SectorBasis, vacuum_sign: f64) -> ComplexMatrix {
    let d: Vec<f64> = basis
        .channels()
        .iter()
        .map(|c| if c.is_vacuum() { vacuum_sign } else { -vacuum_sign })
        .collect();
    ComplexMatrix::real_diagonal(&d)
}

fn require_two_channel(basis: &SectorBasis) -> Result<()> {
    if basis.n() != 2 {
        return Err(Error::Unsupported {
            model: basis.model().name(),
            what: "two-outcome measurement (pair fusion has more than two channels)".into(),
        });
    }
    Ok(())
}

/// `Υ_{i,j}` with eigenvalue `vacuum_sign` on the vacuum channel and its
/// negative elsewhere (tail included); the physical choice is −1.
pub fn upsilon_with_convention(basis: &SectorBasis, pair: Pair, vacuum_sign: f64) -> Result<ComplexMatrix> {
    require_two_channel(basis)?;
    let mut out = ComplexMatrix::zeros(basis.dim(), basis.dim());
    for (p, c) in pair_projectors(basis, pair)?.iter().zip(basis.channels()) {
        let s = if c.is_vacuum() { vacuum_sign } else { -vacuum_sign };
        out = &out + &p.scale_real(s);
    }
    Ok(out)
}

/// `Υ_{i,j} = (s_i + s_j)² − 1`: −1 on the vacuum channel, +1 otherwise.
pub fn upsilon(basis: &SectorBasis, pair: Pair) -> Result<ComplexMatrix> {
    upsilon_with_convention(basis, pair, -1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    W,
    I3,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::W => "W",
            WitnessKind::I3 => "I3",
        })
    }
}

/// A Bell operator on the sector together with its classical and quantum bounds.
#[derive(Debug, Clone)]
pub struct WitnessOperator {
    pub kind: WitnessKind,
    pub matrix: ComplexMatrix,
    pub lhv_bound: f64,
    pub quantum_bound: f64,
}

impl WitnessOperator {
    pub fn expectation(&self, v: &ComplexVector) -> Result<f64> {
        v.expectation(&self.matrix)
    }
}

fn w_from_upsilons(basis: &SectorBasis, vacuum_sign: f64) -> Result<ComplexMatrix> {
    let u = |p| upsilon_with_convention(basis, p, vacuum_sign);
    let (a12, a23, b45, b56) = (u(Pair::P12)?, u(Pair::P23)?, u(Pair::P45)?, u(Pair::P56)?);
    let t1 = a12.matmul(&b45)?;
    let t2 = a12.matmul(&b56)?;
    let t3 = a23.matmul(&b56)?;
    let t4 = a23.matmul(&b45)?;
    Ok(&(&(&t1 + &t2) - &t3) + &t4)
}

/// `W = Υ₁₂Υ₄₅ + Υ₁₂Υ₅₆ − Υ₂₃Υ₅₆ + Υ₂₃Υ₄₅` on a two-channel sector.
pub fn build_w(basis: &SectorBasis) -> Result<WitnessOperator> {
    require_two_channel(basis)?;
    Ok(WitnessOperator {
        kind: WitnessKind::W,
        matrix: w_from_upsilons(basis, -1.0)?,
        lhv_bound: 2.0,
        quantum_bound: 8f64.sqrt(),
    })
}

/// `W` assembled with every sign flipped (vacuum `+1`, other channels `−1`).
pub fn build_w_flipped_convention(basis: &SectorBasis) -> Result<ComplexMatrix> {
    require_two_channel(basis)?;
    w_from_upsilons(basis, 1.0)
}

/// Block form `(FsF⊗FsF + FsF⊗s + s⊗FsF − s⊗s) ⊕ 2·1_tail`.
pub fn w_block_form(basis: &SectorBasis) -> Result<ComplexMatrix> {
    require_two_channel(basis)?;
    let f = basis.model().recoupling_matrix();
    let s = channel_sign(basis, -1.0);
    let fsf = &(&f * &s) * &f;
    let block = &(&(&fsf.kron(&fsf) + &fsf.kron(&s)) + &s.kron(&fsf)) - &s.kron(&s);
    let tail = ComplexMatrix::identity(basis.tail_dim()).scale_real(2.0);
    direct_sum(&[block, tail])
}

/// Outcome-dependent factor of one local measurement inside a correlator term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFactor {
    /// `−1` on the vacuum outcome, `+1` otherwise.
    Sign,
    /// 1 if the outcome is the channel with this index, else 0.
    Indicator(usize),
}

impl LocalFactor {
    fn value(self, outcome: usize) -> f64 {
        match self {
            LocalFactor::Sign => {
                if outcome == 0 {
                    -1.0
                } else {
                    1.0
                }
            }
            LocalFactor::Indicator(k) => f64::from(u8::from(outcome == k)),
        }
    }

    fn local_operator(self, basis: &SectorBasis, pair: Pair) -> ComplexMatrix {
        let d = match self {
            LocalFactor::Sign => channel_sign(basis, -1.0),
            LocalFactor::Indicator(k) => {
                let mut e = vec![0.0; basis.n()];
                e[k] = 1.0;
                ComplexMatrix::real_diagonal(&e)
            }
        };
        local_channel_operator(basis, pair, &d)
    }
}

/// `coefficient · f_A(outcome of a) · f_B(outcome of b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTerm {
    pub coefficient: f64,
    pub a: (Pair, LocalFactor),
    pub b: (Pair, LocalFactor),
}

/// A Bell expression as a polynomial in local outcome functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlator {
    pub outcomes: usize,
    pub terms: Vec<CorrelatorTerm>,
}

impl Correlator {
    /// The CHSH-type expression behind `W`.
    pub fn w() -> Self {
        let t = |c, a, b| CorrelatorTerm {
            coefficient: c,
            a: (a, LocalFactor::Sign),
            b: (b, LocalFactor::Sign),
        };
        Correlator {
            outcomes: 2,
            terms: vec![
                t(1.0, Pair::P12, Pair::P45),
                t(1.0, Pair::P12, Pair::P56),
                t(-1.0, Pair::P23, Pair::P56),
                t(1.0, Pair::P23, Pair::P45),
            ],
        }
    }

    /// The three-outcome expression behind `I₃`. Outer pairs carry the rotated
    /// projectors, inner pairs the plain ones; channel `k+1` wraps mod 3.
    pub fn i3() -> Self {
        use LocalFactor::Indicator as Ind;
        let mut terms = Vec::with_capacity(24);
        let mut t = |c: f64, a: Pair, ka: usize, b: Pair, kb: usize| {
            terms.push(CorrelatorTerm {
                coefficient: c,
                a: (a, Ind(ka % 3)),
                b: (b, Ind(kb % 3)),
            })
        };
        for y in 0..3 {
            t(1.0, Pair::P12, y, Pair::P45, y);
            t(1.0, Pair::P23, y, Pair::P45, y + 1);
            t(1.0, Pair::P23, y, Pair::P56, y);
            t(1.0, Pair::P12, y, Pair::P56, y);
            t(-1.0, Pair::P12, y, Pair::P45, y + 1);
            t(-1.0, Pair::P23, y, Pair::P45, y);
            t(-1.0, Pair::P23, y, Pair::P56, y + 1);
            t(-1.0, Pair::P12, y + 1, Pair::P56, y);
        }
        Correlator { outcomes: 3, terms }
    }

    /// A single product `A₁B₁` of two signs.
    pub fn single_sign_product() -> Self {
        Correlator {
            outcomes: 2,
            terms: vec![CorrelatorTerm {
                coefficient: 1.0,
                a: (Pair::P12, LocalFactor::Sign),
                b: (Pair::P45, LocalFactor::Sign),
            }],
        }
    }

    /// Value under a deterministic strategy giving outcomes for (1,2), (2,3), (4,5), (5,6).
    pub fn evaluate(&self, strategy: [usize; 4]) -> f64 {
        let slot = |p: Pair| match p {
            Pair::P12 => strategy[0],
            Pair::P23 => strategy[1],
            Pair::P45 => strategy[2],
            Pair::P56 => strategy[3],
            Pair::P34 => unreachable!("(3,4) is never measured"),
        };
        self.terms
            .iter()
            .map(|t| t.coefficient * t.a.1.value(slot(t.a.0)) * t.b.1.value(slot(t.b.0)))
            .sum()
    }

    /// Product-block operator `Σ c · X_A ⊗ Y_B`.
    pub fn block_operator(&self, basis: &SectorBasis) -> Result<ComplexMatrix> {
        if basis.n() != self.outcomes {
            return Err(Error::DimensionMismatch {
                op: "correlator outcomes vs pair channels",
                left: (self.outcomes, 1),
                right: (basis.n(), 1),
            });
        }
        let n = basis.n();
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for t in &self.terms {
            let a = t.a.1.local_operator(basis, t.a.0);
            let b = t.b.1.local_operator(basis, t.b.0);
            out = &out + &a.kron(&b).scale_real(t.coefficient);
        }
        Ok(out)
    }
}

/// `I₃` on the 11-dimensional D(S₃) sector: the 24-term projector sum on the
/// product block and `+2` on each paired singleton state.
pub fn build_i3(basis: &SectorBasis) -> Result<WitnessOperator> {
    if basis.n() != 3 || basis.tail_dim() != 2 {
        return Err(Error::Unsupported {
            model: basis.model().name(),
            what: "I3 witness (needs the D(S3) sector)".into(),
        });
    }
    let block = Correlator::i3().block_operator(basis)?;
    let tail = ComplexMatrix::identity(2).scale_real(2.0);
    Ok(WitnessOperator {
        kind: WitnessKind::I3,
        matrix: direct_sum(&[block, tail])?,
        lhv_bound: 2.0,
        quantum_bound: 4.0,
    })
}

/// Extremes of a correlator over all deterministic local strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhvBounds {
    pub max: f64,
    pub min: f64,
    pub strategies: usize,
}

pub fn lhv_bounds(c: &Correlator) -> LhvBounds {
    let d = c.outcomes;
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut count = 0;
    for code in 0..d.pow(4) {
        let s = [code % d, (code / d) % d, (code / d / d) % d, (code / d / d / d) % d];
        let v = c.evaluate(s);
        max = max.max(v);
        min = min.min(v);
        count += 1;
    }
    LhvBounds {
        max,
        min,
        strategies: count,
    }
}

/// LHV extrema of `W` (two outcomes) or `I₃` (three outcomes).
pub fn lhv_bound_oracle(kind: WitnessKind) -> LhvBounds {
    match kind {
        WitnessKind::W => lhv_bounds(&Correlator::w()),
        WitnessKind::I3 => lhv_bounds(&Correlator::i3()),
    }
}

/// A member of the one-parameter family `|r(a)⟩`.
#[derive(Debug, Clone)]
pub struct RFamilyState {
    pub a: f64,
    pub vector: ComplexVector,
}

/// `|φ₀⟩ + |φ₃⟩` and `|φ₁⟩ − |φ₂⟩`, cached for repeated `|r(a)⟩` evaluation.
#[derive(Debug, Clone)]
pub struct RFamily {
    even: ComplexVector,
    odd: ComplexVector,
}

impl RFamily {
    pub fn new(basis: &SectorBasis) -> Result<Self> {
        require_two_channel(basis)?;
        let p: Vec<ComplexVector> = (0..4).map(|j| phi_state(basis, j)).collect::<Result<_>>()?;
        Ok(Self {
            even: &p[0] + &p[3],
            odd: &p[1] - &p[2],
        })
    }

    /// `|r(a)⟩ = a/√2 (|φ₀⟩ + |φ₃⟩) + √(1−a²)/√2 (|φ₁⟩ − |φ₂⟩)`.
    pub fn state(&self, a: f64) -> Result<RFamilyState> {
        if a.is_nan() || a.abs() > 1.0 {
            return Err(Error::InvalidArgument(format!("a = {a} outside [-1, 1]")));
        }
        let c0 = a / 2f64.sqrt();
        let c1 = (1.0 - a * a).sqrt() / 2f64.sqrt();
        let data = (0..self.even.dim())
            .map(|i| self.even[i] * c0 + self.odd[i] * c1)
            .collect();
        Ok(RFamilyState {
            a,
            vector: ComplexVector::new(data),
        })
    }
}

/// `|r(a)⟩` on a two-channel sector.
pub fn r_state(basis: &SectorBasis, a: f64) -> Result<RFamilyState> {
    RFamily::new(basis)?.state(a)
}

/// Amplitude `a₊` of maximal `⟨W⟩` for unbounded SU(2).
pub fn su2_a_plus() -> f64 {
    -((7.0 + 2.0 * 7f64.sqrt()) / 14.0).sqrt()
}

/// Closed-form `a₊(k)` maximizing `⟨r(a)|W|r(a)⟩` at level `k`.
pub fn a_plus_closed_form(k: f64) -> f64 {
    let t = PI / (k + 2.0);
    let c1 = (2.0 * t).cos();
    let c2 = (4.0 * t).cos();
    let ch = t.cos();
    let d = 8.0 * c1 + c2 + 5.0;
    -(1.0 / d.sqrt()) * (c1 * c1 + 4.0 * c1 + (2.0 * ch.powi(4) * d).sqrt() + 2.0).sqrt()
}

/// `a₋ = √(1 − a₊²)`.
pub fn a_minus_closed_form(k: f64) -> f64 {
    let ap = a_plus_closed_form(k);
    (1.0 - ap * ap).max(0.0).sqrt()
}

/// `sec²(π/(k+2)) √(4cos(2π/(k+2)) + ½cos(4π/(k+2)) + 5/2)`.
pub fn su2k_max_violation(k: f64) -> f64 {
    let t = PI / (k + 2.0);
    let sec2 = 1.0 / t.cos().powi(2);
    sec2 * (4.0 * (2.0 * t).cos() + 0.5 * (4.0 * t).cos() + 2.5).sqrt()
}

/// `samples` evenly spaced points on `[−1, 1]`, endpoints included.
pub fn a_grid(samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![-1.0],
        _ => (0..samples)
            .map(|i| -1.0 + 2.0 * i as f64 / (samples - 1) as f64)
            .collect(),
    }
}

/// `a ↦ ⟨r(a)|W|r(a)⟩` on a grid.
pub fn w_curve(basis: &SectorBasis, grid: &[f64]) -> Result<Vec<f64>> {
    let w = build_w(basis)?;
    let fam = RFamily::new(basis)?;
    grid.iter()
        .map(|&a| w.expectation(&fam.state(a)?.vector))
        .collect()
}

/// `(a, value)` at the largest sample of `a ↦ ⟨r(a)|W|r(a)⟩`; first wins on ties.
pub fn sampled_argmax(grid: &[f64], curve: &[f64]) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for (&a, &v) in grid.iter().zip(curve) {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((a, v));
        }
    }
    best
}

/// The three curves exported for plotting: SU(2), Fibonacci (SO(3)₃), SU(2)₂.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Data {
    pub a: Vec<f64>,
    pub su2: Vec<f64>,
    pub so3_3: Vec<f64>,
    pub su2_2: Vec<f64>,
}

pub fn fig4_data(samples: usize) -> Result<Fig4Data> {
    use crate::models::AnyonModel;
    use crate::sector::build_sector_basis;
    let a = a_grid(samples);
    let curve = |m: AnyonModel| w_curve(&build_sector_basis(&m)?, &a);
    Ok(Fig4Data {
        su2: curve(AnyonModel::su2())?,
        so3_3: curve(AnyonModel::fibonacci())?,
        su2_2: curve(AnyonModel::su2k(2)?)?,
        a,
    })
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Indices of the sector states carrying `β`, as a diagonal projector.
pub fn beta_projector(basis: &SectorBasis, beta: Charge) -> ComplexMatrix {
    let d: Vec<f64> = basis
        .elements()
        .iter()
        .map(|e| if e.beta() == beta { 1.0 } else { 0.0 })
        .collect();
    ComplexMatrix::real_diagonal(&d)
}
