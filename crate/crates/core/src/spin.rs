//! Six distinguishable spin-½ particles as a brute-force model of the SU(2)
//! construction.
//!
//! Basis states are bit strings with site 1 as the most significant bit and
//! `|↑⟩` as bit 0.

use crate::error::{Error, Result};
use crate::linalg::{characteristic_polynomial, hermitian_eigenvalues, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::models::AnyonModel;
use crate::observables::{build_w, upsilon, Pair};
use crate::sector::{build_sector_basis, phi0_state};

const SITES: usize = 6;
const DIM: usize = 1 << SITES;

/// Spin operators of `n` spin-½ sites.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    n: usize,
    /// `[x, y, z]` components per site.
    ops: Vec<[ComplexMatrix; 3]>,
}

fn site_operator(n: usize, site: usize, local: &ComplexMatrix) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << site);
    let right = ComplexMatrix::identity(1 << (n - site - 1));
    left.kron(local).kron(&right)
}

impl SpinSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || (1usize << n) > crate::linalg::MAX_DIM {
            return Err(Error::TooLarge {
                dim: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
                max: crate::linalg::MAX_DIM,
            });
        }
        let half = |m: ComplexMatrix| m.scale_real(0.5);
        let paulis = [
            half(ComplexMatrix::pauli_x()),
            half(ComplexMatrix::pauli_y()),
            half(ComplexMatrix::pauli_z()),
        ];
        let ops = (0..n)
            .map(|s| {
                [
                    site_operator(n, s, &paulis[0]),
                    site_operator(n, s, &paulis[1]),
                    site_operator(n, s, &paulis[2]),
                ]
            })
            .collect();
        Ok(Self { n, ops })
    }

    pub fn six() -> Self {
        Self::new(SITES).expect("64 fits")
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `s_i^a` for site `i` (1-based) and component `a ∈ {0, 1, 2}` = x, y, z.
    pub fn component(&self, site: usize, a: usize) -> Result<&ComplexMatrix> {
        self.check_site(site)?;
        Ok(&self.ops[site - 1][a])
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n {
            return Err(Error::InvalidArgument(format!("site {site} outside 1..{}", self.n)));
        }
        Ok(())
    }

    /// `s_i · s_j`.
    pub fn dot(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        self.check_site(i)?;
        self.check_site(j)?;
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for a in 0..3 {
            out = &out + &self.ops[i - 1][a].matmul(&self.ops[j - 1][a])?;
        }
        Ok(out)
    }

    /// `(Σ_{i∈sites} s_i)²`.
    pub fn total_spin_squared(&self, sites: &[usize]) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for &i in sites {
            for &j in sites {
                out = &out + &self.dot(i, j)?;
            }
        }
        Ok(out)
    }

    /// `Υ_{i,j} = (s_i + s_j)² − 1`.
    pub fn upsilon(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        if i == j {
            return Err(Error::InvalidArgument("Υ needs two distinct sites".into()));
        }
        let s2 = self.total_spin_squared(&[i, j])?;
        Ok(&s2 - &ComplexMatrix::identity(self.dim()))
    }

    /// Projector onto total spin `twice_s / 2` of the given sites.
    pub fn spin_projector(&self, sites: &[usize], twice_s: u32) -> Result<ComplexMatrix> {
        let k = sites.len() as u32;
        if twice_s > k || (k - twice_s) % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "total spin {twice_s}/2 impossible for {k} spin-1/2 sites"
            )));
        }
        let s2 = self.total_spin_squared(sites)?;
        let casimir = |t: u32| f64::from(t) / 2.0 * (f64::from(t) / 2.0 + 1.0);
        let target = casimir(twice_s);
        let id = ComplexMatrix::identity(self.dim());
        let mut p = id.clone();
        let mut t = k % 2;
        while t <= k {
            if t != twice_s {
                let lam = casimir(t);
                let factor = (&s2 - &id.scale_real(lam)).scale_real(1.0 / (target - lam));
                p = p.matmul(&factor)?;
            }
            t += 2;
        }
        Ok(p)
    }
}

/// Projector onto `S_tot = s` of all six spins, `s ∈ {0, 1, 2, 3}`.
pub fn total_spin_projector(s: u32) -> Result<ComplexMatrix> {
    if s > 3 {
        return Err(Error::InvalidArgument(format!("no S_tot = {s} sector for six spins")));
    }
    SpinSystem::six().spin_projector(&[1, 2, 3, 4, 5, 6], 2 * s)
}

/// `Υ_{i,j}` on six spins.
pub fn spin_upsilon(i: usize, j: usize) -> Result<ComplexMatrix> {
    SpinSystem::six().upsilon(i, j)
}

/// Singlet on each of the pairs (1,2), (3,4), (5,6).
pub fn spin_phi0() -> ComplexVector {
    let r = 1.0 / 2f64.sqrt();
    let singlet = [ZERO, ONE * r, -ONE * r, ZERO];
    let mut data = vec![ZERO; DIM];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                data[(a << 4) | (b << 2) | c] = singlet[a] * singlet[b] * singlet[c];
            }
        }
    }
    ComplexVector::new(data)
}

/// `⟨j1 m1; ½ m2 | J M⟩` (Condon–Shortley), all spins doubled.
fn cg_half(j1: i32, m1: i32, m2: i32, j: i32, m: i32) -> f64 {
    if m1 + m2 != m || m1.abs() > j1 || m.abs() > j {
        return 0.0;
    }
    let den = f64::from(j1 + 1);
    if j == j1 + 1 {
        let num = if m2 == 1 { j1 + m + 1 } else { j1 - m + 1 };
        (f64::from(num) / 2.0 / den).sqrt()
    } else if j == j1 - 1 {
        if m2 == 1 {
            -(f64::from(j1 - m + 1) / 2.0 / den).sqrt()
        } else {
            (f64::from(j1 + m + 1) / 2.0 / den).sqrt()
        }
    } else {
        0.0
    }
}

/// Doubled `m` of one spin-½ bit (0 = up).
fn bit_m(b: usize) -> i32 {
    if b == 0 {
        1
    } else {
        -1
    }
}

/// Two spins `(p, q)` coupled to `(x, mx)`; index `p·2 + q`.
fn pair_state(x: i32, mx: i32) -> [f64; 4] {
    let mut v = [0.0; 4];
    for p in 0..2 {
        for q in 0..2 {
            v[p * 2 + q] = cg_half(1, bit_m(p), bit_m(q), x, mx);
        }
    }
    v
}

/// Three spins: inner pair (second, third) coupled to `x`, then with the outer
/// spin (first) to `(β, M)`. Index `outer·4 + inner pair`.
fn triple_state(x: i32, beta: i32, m: i32) -> [f64; 8] {
    let mut v = [0.0; 8];
    let mut mx = -x;
    while mx <= x {
        let ps = pair_state(x, mx);
        for o in 0..2 {
            let c = cg_half(x, mx, bit_m(o), beta, m);
            if c == 0.0 {
                continue;
            }
            for (k, &a) in ps.iter().enumerate() {
                v[o * 4 + k] += c * a;
            }
        }
        mx += 2;
    }
    v
}

/// B-side sites are ordered (4, 5, 6) with (5,6) inner, so the outer spin
/// is the first bit as for A.
fn sector_state(x: i32, y: i32, beta: i32) -> ComplexVector {
    let mut data = vec![ZERO; DIM];
    let mut m = -beta;
    while m <= beta {
        let sign = if ((beta - m) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign / f64::from(beta + 1).sqrt();
        let a = triple_state(x, beta, m);
        let b = triple_state(y, beta, -m);
        for (ia, &va) in a.iter().enumerate() {
            for (ib, &vb) in b.iter().enumerate() {
                data[(ia << 3) | ib] += ONE * (c * va * vb);
            }
        }
        m += 2;
    }
    ComplexVector::new(data)
}

/// Orthonormalizes vectors in order, dropping those already in the span.
fn gram_schmidt(vs: &[ComplexVector], tol: f64) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c = u.inner(&w).expect("same dimension");
            w = &w - &u.scale(c);
        }
        if w.norm() > tol {
            out.push(w.normalized());
        }
    }
    out
}

fn columns_to_matrix(cols: &[ComplexVector]) -> ComplexMatrix {
    let rows = cols[0].dim();
    let mut m = ComplexMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..rows {
            m[(i, j)] = c[i];
        }
    }
    m
}

/// Results of comparing the spin model with the abstract SU(2) sector.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub abstract_eigenvalues: Vec<f64>,
    pub spin_eigenvalues: Vec<f64>,
    pub spectrum_residual: f64,
    pub sector_rank: usize,
    /// `max |V†V − 1|` of the isometry.
    pub isometry_residual: f64,
    /// Basis states whose sign was flipped to match the abstract outer-pair measurements.
    pub sign_flips: usize,
    /// `max |V†W_spin V − W|`.
    pub entrywise_residual: f64,
    /// `max |V†Υ V − Υ|` over the four measured pairs.
    pub upsilon_residual: f64,
    pub charpoly_residual: f64,
    pub max_eigenvalue: f64,
    pub phi0_abstract: f64,
    pub phi0_spin: f64,
    /// `|⟨φ₀ spin | V φ₀⟩|`.
    pub phi0_overlap: f64,
    /// `max ‖[P₀, Υ]‖` over the four measured pairs.
    pub projector_commutation: f64,
    /// `⟨Υ⟩` for pairs (1,2), (2,3), (4,5), (5,6) on the both-triples-3/2 state.
    pub tail_upsilon: [f64; 4],
    /// `|⟨projector state | coupled state⟩|` for the 3/2 ⊗ 3/2 singlet.
    pub tail_overlap: f64,
}

impl OracleReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.spectrum_residual <= tol
            && self.entrywise_residual <= tol
            && self.isometry_residual <= tol
            && self.sector_rank == 5
            && (self.max_eigenvalue - 7f64.sqrt()).abs() <= tol
    }
}

const MEASURED_SITES: [(Pair, usize, usize); 4] = [
    (Pair::P12, 1, 2),
    (Pair::P23, 2, 3),
    (Pair::P45, 4, 5),
    (Pair::P56, 5, 6),
];

/// Builds `W` from spins, restricts it to `S_tot = 0`, and compares with the
/// abstract five-dimensional operator.
pub fn oracle_equivalence_report() -> Result<OracleReport> {
    let sys = SpinSystem::six();
    let ups: Vec<ComplexMatrix> = MEASURED_SITES
        .iter()
        .map(|&(_, i, j)| sys.upsilon(i, j))
        .collect::<Result<_>>()?;
    let (u12, u23, u45, u56) = (&ups[0], &ups[1], &ups[2], &ups[3]);
    let w_spin = &(&(&u12.matmul(u45)? + &u12.matmul(u56)?) - &u23.matmul(u56)?) + &u23.matmul(u45)?;

    let basis = build_sector_basis(&AnyonModel::su2())?;
    let w_abs = build_w(&basis)?.matrix;
    let abstract_eigenvalues = hermitian_eigenvalues(&w_abs)?;

    // independent sector basis from the projector
    let p0 = total_spin_projector(0)?;
    let cols: Vec<ComplexVector> = (0..DIM).map(|j| p0.column(j)).collect();
    let q = gram_schmidt(&cols, 1e-8);
    let sector_rank = q.len();
    let qm = columns_to_matrix(&q);
    let w_sector = qm.adjoint().matmul(&w_spin)?.matmul(&qm)?;
    let spin_eigenvalues = hermitian_eigenvalues(&w_sector)?;
    let spectrum_residual = if spin_eigenvalues.len() == abstract_eigenvalues.len() {
        spin_eigenvalues
            .iter()
            .zip(&abstract_eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let charpoly_residual = if w_sector.rows() == w_abs.rows() {
        characteristic_polynomial(&w_sector)
            .iter()
            .zip(characteristic_polynomial(&w_abs))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };

    // coupled spin images of the abstract basis, in its order
    let mut images = Vec::new();
    for e in basis.elements() {
        images.push(sector_state(e.a.x.0 as i32, e.b.x.0 as i32, e.a.beta.0 as i32));
    }
    let mut v_cols = gram_schmidt(&images, 1e-8);
    if v_cols.len() != basis.dim() {
        return Err(Error::InvalidArgument("coupled spin states are linearly dependent".into()));
    }
    // fix signs so the outer-pair measurements match the abstract ones
    let mut sign_flips = 0;
    let n = basis.n();
    let a12 = upsilon(&basis, Pair::P12)?;
    let a45 = upsilon(&basis, Pair::P45)?;
    for k in 1..basis.block_dim() {
        let (x, y) = (k / n, k % n);
        let (refi, op_spin, op_abs) = if y == 0 { ((x - 1) * n, u12, &a12) } else { (k - 1, u45, &a45) };
        let spin_el = v_cols[refi].inner(&op_spin.apply(&v_cols[k])?)?;
        let abs_el = op_abs[(refi, k)];
        if spin_el.re * abs_el.re < 0.0 {
            v_cols[k] = v_cols[k].scale(-ONE);
            sign_flips += 1;
        }
    }
    let v = columns_to_matrix(&v_cols);
    let vd = v.adjoint();
    let isometry_residual = vd.matmul(&v)?.max_diff(&ComplexMatrix::identity(basis.dim()));
    let entrywise_residual = vd.matmul(&w_spin)?.matmul(&v)?.max_diff(&w_abs);
    let mut upsilon_residual: f64 = 0.0;
    let mut projector_commutation: f64 = 0.0;
    for (&(pair, _, _), u) in MEASURED_SITES.iter().zip(&ups) {
        let restricted = vd.matmul(u)?.matmul(&v)?;
        upsilon_residual = upsilon_residual.max(restricted.max_diff(&upsilon(&basis, pair)?));
        projector_commutation = projector_commutation.max(p0.commutator(u)?.max_abs());
    }

    let phi0_abs_vec = phi0_state(&basis)?;
    let phi0_abstract = phi0_abs_vec.expectation(&w_abs)?;
    let sp = spin_phi0();
    let phi0_spin = sp.expectation(&w_spin)?;
    let phi0_overlap = sp.inner(&v.apply(&phi0_abs_vec)?)?.norm();

    // the both-triples-3/2 singlet straight from projectors
    let pa = sys.spin_projector(&[1, 2, 3], 3)?;
    let pb = sys.spin_projector(&[4, 5, 6], 3)?;
    let p = p0.matmul(&pa)?.matmul(&pb)?;
    let best = (0..DIM)
        .map(|j| p.column(j))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let tail = best.normalized();
    let mut tail_upsilon = [0.0; 4];
    for (k, u) in ups.iter().enumerate() {
        tail_upsilon[k] = tail.expectation(u)?;
    }
    let tail_overlap = tail.inner(&v_cols[basis.dim() - 1])?.norm();

    Ok(OracleReport {
        max_eigenvalue: *spin_eigenvalues.last().unwrap_or(&f64::NAN),
        abstract_eigenvalues,
        spin_eigenvalues,
        spectrum_residual,
        sector_rank,
        isometry_residual,
        sign_flips,
        entrywise_residual,
        upsilon_residual,
        charpoly_residual,
        phi0_abstract,
        phi0_spin,
        phi0_overlap,
        projector_commutation,
        tail_upsilon,
        tail_overlap,
    })
}

/// Rank of a projector, read off its trace.
pub fn projector_rank(p: &ComplexMatrix) -> usize {
    p.trace().re.round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn spin_algebra() {
        let s = SpinSystem::six();
        let id = ComplexMatrix::identity(64);
        for i in 1..=6 {
            let sx = s.component(i, 0).unwrap();
            let sy = s.component(i, 1).unwrap();
            let sz = s.component(i, 2).unwrap();
            let c = sx.commutator(sy).unwrap();
            assert!(c.max_diff(&sz.scale(I)) <= 1e-12);
            let sq = s.dot(i, i).unwrap();
            assert!(sq.max_diff(&id.scale_real(0.75)) <= 1e-12);
            for j in 1..=6 {
                if j != i {
                    let c = sx.commutator(s.component(j, 1).unwrap()).unwrap();
                    assert!(c.max_abs() <= 1e-12);
                }
            }
        }
        assert!(s.component(7, 0).is_err());
        assert!(SpinSystem::new(7).is_err());
    }

    #[test]
    fn projector_ranks_and_completeness() {
        let ranks: Vec<usize> = (0..=3).map(|s| projector_rank(&total_spin_projector(s).unwrap())).collect();
        assert_eq!(ranks, vec![5, 27, 25, 7]);
        let mut sum = ComplexMatrix::zeros(64, 64);
        for s in 0..=3 {
            let p = total_spin_projector(s).unwrap();
            assert!(p.matmul(&p).unwrap().max_diff(&p) < 1e-10);
            sum = &sum + &p;
        }
        assert!(sum.max_diff(&ComplexMatrix::identity(64)) < 1e-10);
        assert!(total_spin_projector(4).is_err());
    }

    #[test]
    fn upsilon_spectrum() {
        let u = spin_upsilon(1, 2).unwrap();
        let ev = hermitian_eigenvalues(&u).unwrap();
        assert_eq!(ev.iter().filter(|v| (**v + 1.0).abs() < 1e-9).count(), 16);
        assert_eq!(ev.iter().filter(|v| (**v - 1.0).abs() < 1e-9).count(), 48);
        assert!(u.matmul(&u).unwrap().max_diff(&ComplexMatrix::identity(64)) < 1e-12);
        let c = u.commutator(&spin_upsilon(4, 5).unwrap()).unwrap();
        assert!(c.max_abs() < 1e-12);
        assert!(spin_upsilon(3, 3).is_err());
    }

    #[test]
    fn three_singlets() {
        let v = spin_phi0();
        assert!(v.is_normalized(1e-14));
        let u12 = spin_upsilon(1, 2).unwrap();
        assert!(u12.apply(&v).unwrap().max_diff(&v.scale(-ONE)) < 1e-12);
        // sites 2 and 3 sit in different singlets, so ⟨s₂·s₃⟩ = 0 and ⟨Υ₂₃⟩ = ½
        assert!((v.expectation(&spin_upsilon(2, 3).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        let p0 = total_spin_projector(0).unwrap();
        assert!(p0.apply(&v).unwrap().max_diff(&v) < 1e-12);
    }

    #[test]
    fn coupled_states_are_eigenstates() {
        // |x⟩_A |y⟩_B: Υ₂₃ = sign(x), Υ₅₆ = sign(y), singlet overall
        let p0 = total_spin_projector(0).unwrap();
        let u23 = spin_upsilon(2, 3).unwrap();
        let u56 = spin_upsilon(5, 6).unwrap();
        for (x, y) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            let v = sector_state(x, y, 1);
            assert!(v.is_normalized(1e-12));
            assert!(p0.apply(&v).unwrap().max_diff(&v) < 1e-12);
            let sx = if x == 0 { -1.0 } else { 1.0 };
            let sy = if y == 0 { -1.0 } else { 1.0 };
            assert!(u23.apply(&v).unwrap().max_diff(&v.scale(ONE * sx)) < 1e-12);
            assert!(u56.apply(&v).unwrap().max_diff(&v.scale(ONE * sy)) < 1e-12);
        }
    }

    #[test]
    fn clebsch_gordan_values() {
        // ½ ⊗ ½ singlet is (|↑↓⟩ − |↓↑⟩)/√2
        let s = pair_state(0, 0);
        let r = 1.0 / 2f64.sqrt();
        assert!((s[1] - r).abs() < 1e-15 && (s[2] + r).abs() < 1e-15);
        // 1 ⊗ ½ → ½: |½,½⟩ = −√(1/3)|1,0⟩|↑⟩ + √(2/3)|1,1⟩|↓⟩
        assert!((cg_half(2, 0, 1, 1, 1) + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((cg_half(2, 2, -1, 1, 1) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        for m in [-3, -1, 1, 3] {
            let t = triple_state(2, 3, m);
            let norm: f64 = t.iter().map(|a| a * a).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn equivalence_with_abstract_sector() {
        let r = oracle_equivalence_report().unwrap();
        assert_eq!(r.sector_rank, 5);
        assert!(r.spectrum_residual <= 1e-9, "{r:?}");
        assert!(r.isometry_residual <= 1e-12);
        assert!(r.entrywise_residual <= 1e-9, "{r:?}");
        assert!(r.upsilon_residual <= 1e-9);
        assert!(r.charpoly_residual <= 1e-8);
        assert!((r.max_eigenvalue - 7f64.sqrt()).abs() <= 1e-9);
        assert!((r.phi0_abstract - r.phi0_spin).abs() < 1e-12);
        assert!((r.phi0_overlap - 1.0).abs() < 1e-12);
        assert!(r.projector_commutation <= 1e-10);
        for u in r.tail_upsilon {
            assert!((u - 1.0).abs() < 1e-10);
        }
        assert!((r.tail_overlap - 1.0).abs() < 1e-10);
        assert!(r.passed(1e-9));
    }
}
