//! Anyon theories as data: labels, fusion rules, quantum dimensions, and the
//! F- and R-symbols the six-anyon constructions consume.
//!
//! Labels are small integers scoped to a model. For the SU(2) family a label
//! is twice the spin, so `Charge(1)` is spin ½ and for level 2 the aliases
//! `1, σ, ψ` map to `0, 1, 2`. Fibonacci uses `1 = 0, τ = 1`; the D(S₃)
//! subtheory uses `1 = 0, Λ = 1, Φ = 2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cis, ComplexMatrix, I, ONE};

/// Label of a charge within one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Charge(pub u32);

impl Charge {
    pub const VACUUM: Charge = Charge(0);

    pub fn is_vacuum(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which theory a model is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    /// Ordinary SU(2) angular momentum (`k → ∞`).
    Su2,
    /// SU(2) at level `k`.
    Su2k(u32),
    /// Fibonacci, the integer-spin sector of SU(2)₃.
    Fibonacci,
    /// The `{1, Λ, Φ}` fusion subalgebra of D(S₃).
    Ds3,
}

impl ModelId {
    pub fn as_str(&self) -> String {
        match self {
            ModelId::Su2 => "su2".to_string(),
            ModelId::Su2k(k) => format!("su2k:{k}"),
            ModelId::Fibonacci => "fib".to_string(),
            ModelId::Ds3 => "ds3".to_string(),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "su2" => return Ok(ModelId::Su2),
            "fib" | "so3_3" => return Ok(ModelId::Fibonacci),
            "ds3" => return Ok(ModelId::Ds3),
            "su2_2" => return Ok(ModelId::Su2k(2)),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("su2k:") {
            let k: u32 = k.parse().map_err(|_| Error::UnknownModel(s.to_string()))?;
            if k == 0 {
                return Err(Error::UnknownModel(s.to_string()));
            }
            return Ok(ModelId::Su2k(k));
        }
        Err(Error::UnknownModel(s.to_string()))
    }
}

/// `[m]_q` at `q = e^{2πi/(k+2)}`, in its real form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumInteger {
    pub m: i64,
    pub k: u64,
    pub value: f64,
}

impl QuantumInteger {
    pub fn new(m: i64, k: u64) -> Self {
        Self {
            m,
            k,
            value: quantum_integer(m, k),
        }
    }
}

pub fn quantum_integer(m: i64, k: u64) -> f64 {
    let theta = PI / (k as f64 + 2.0);
    (m as f64 * theta).sin() / theta.sin()
}

/// Allowed spins of `j1 × j2` at level `k` (`None` for unbounded SU(2)).
/// Spins are given as twice their value.
pub fn su2k_fusion(k: Option<u32>, twice_j1: u32, twice_j2: u32) -> Result<Vec<u32>> {
    if let Some(k) = k {
        for j in [twice_j1, twice_j2] {
            if j > k {
                return Err(Error::Inadmissible(format!(
                    "spin {} exceeds k/2 at level {k}",
                    spin_name(j)
                )));
            }
        }
    }
    let lo = twice_j1.abs_diff(twice_j2);
    let hi = twice_j1 + twice_j2;
    Ok((lo..=hi)
        .step_by(2)
        .filter(|&j| match k {
            Some(k) => j <= k && twice_j1 + twice_j2 + j <= 2 * k,
            None => true,
        })
        .collect())
}

fn spin_name(twice_j: u32) -> String {
    if twice_j % 2 == 0 {
        format!("{}", twice_j / 2)
    } else {
        format!("{twice_j}/2")
    }
}

/// One entry of the D(S₃) irrep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ds3Irrep {
    pub name: &'static str,
    pub kind: &'static str,
    pub quantum_dimension: f64,
}

/// All eight D(S₃) irreps. Only the quantum dimensions are used.
pub const DS3_IRREPS: [Ds3Irrep; 8] = [
    Ds3Irrep { name: "Pi^[e]_{R1+}", kind: "vacuum", quantum_dimension: 1.0 },
    Ds3Irrep { name: "Pi^[c]_{beta0}", kind: "magnetic", quantum_dimension: 2.0 },
    Ds3Irrep { name: "Pi^[t]_{gamma0}", kind: "magnetic", quantum_dimension: 3.0 },
    Ds3Irrep { name: "Pi^[e]_{R1-}", kind: "electric", quantum_dimension: 1.0 },
    Ds3Irrep { name: "Pi^[e]_{R2}", kind: "electric", quantum_dimension: 2.0 },
    Ds3Irrep { name: "Pi^[c]_{beta1}", kind: "dyonic", quantum_dimension: 2.0 },
    Ds3Irrep { name: "Pi^[c]_{beta2}", kind: "dyonic", quantum_dimension: 2.0 },
    Ds3Irrep { name: "Pi^[t]_{gamma1}", kind: "dyonic", quantum_dimension: 3.0 },
];

/// `|S₃|²`, the value of `Σ d²` over the irrep table.
pub const DS3_GROUP_ORDER_SQUARED: f64 = 36.0;

/// Largest spin kept in the label set of unbounded SU(2) (twice the spin).
pub const SU2_LABEL_CAP: u32 = 12;

/// An anyon theory. Immutable; everything is computed from the id.
#[derive(Debug, Clone, PartialEq)]
pub struct AnyonModel {
    id: ModelId,
    labels: Vec<Charge>,
}

impl AnyonModel {
    pub fn new(id: ModelId) -> Result<Self> {
        let labels = match id {
            ModelId::Su2 => (0..=SU2_LABEL_CAP).map(Charge).collect(),
            ModelId::Su2k(0) => return Err(Error::UnknownModel(id.as_str())),
            ModelId::Su2k(k) => (0..=k).map(Charge).collect(),
            ModelId::Fibonacci => vec![Charge(0), Charge(1)],
            ModelId::Ds3 => vec![Charge(0), Charge(1), Charge(2)],
        };
        Ok(Self { id, labels })
    }

    pub fn parse(id: &str) -> Result<Self> {
        Self::new(id.parse()?)
    }

    pub fn su2() -> Self {
        Self::new(ModelId::Su2).expect("static model")
    }

    pub fn su2k(k: u32) -> Result<Self> {
        Self::new(ModelId::Su2k(k))
    }

    pub fn fibonacci() -> Self {
        Self::new(ModelId::Fibonacci).expect("static model")
    }

    pub fn ds3() -> Self {
        Self::new(ModelId::Ds3).expect("static model")
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn name(&self) -> String {
        self.id.as_str()
    }

    pub fn labels(&self) -> &[Charge] {
        &self.labels
    }

    /// Level for the SU(2) family (`None` for unbounded SU(2) and the other models).
    pub fn level(&self) -> Option<u32> {
        match self.id {
            ModelId::Su2k(k) => Some(k),
            _ => None,
        }
    }

    fn su2_family(&self) -> bool {
        matches!(self.id, ModelId::Su2 | ModelId::Su2k(_))
    }

    pub fn contains(&self, c: Charge) -> bool {
        match self.id {
            // SU(2) has infinitely many spins; the label list is a finite window
            ModelId::Su2 => true,
            _ => self.labels.contains(&c),
        }
    }

    fn check(&self, c: Charge) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::UnknownLabel {
                model: self.name(),
                label: c.0.to_string(),
            })
        }
    }

    /// The anyon type of which six copies make up the Bell setup.
    pub fn generator(&self) -> Charge {
        match self.id {
            ModelId::Su2 | ModelId::Su2k(_) => Charge(1),
            ModelId::Fibonacci => Charge(1),
            ModelId::Ds3 => Charge(2),
        }
    }

    pub fn label_name(&self, c: Charge) -> String {
        match self.id {
            ModelId::Su2k(2) => ["1", "sigma", "psi"]
                .get(c.index())
                .map_or_else(|| c.0.to_string(), |s| s.to_string()),
            ModelId::Su2 | ModelId::Su2k(_) => spin_name(c.0),
            ModelId::Fibonacci => ["1", "tau"]
                .get(c.index())
                .map_or_else(|| c.0.to_string(), |s| s.to_string()),
            ModelId::Ds3 => ["1", "Lambda", "Phi"]
                .get(c.index())
                .map_or_else(|| c.0.to_string(), |s| s.to_string()),
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<Charge> {
        let unknown = || Error::UnknownLabel {
            model: self.name(),
            label: s.to_string(),
        };
        let c = match (self.id, s) {
            (ModelId::Su2k(2), "1" | "vacuum") => Charge(0),
            (ModelId::Su2k(2), "sigma" | "σ") => Charge(1),
            (ModelId::Su2k(2), "psi" | "ψ") => Charge(2),
            (ModelId::Su2 | ModelId::Su2k(_), _) => {
                if let Some((n, d)) = s.split_once('/') {
                    if d != "2" {
                        return Err(unknown());
                    }
                    let n: u32 = n.parse().map_err(|_| unknown())?;
                    if n % 2 == 0 {
                        return Err(unknown());
                    }
                    Charge(n)
                } else {
                    Charge(2 * s.parse::<u32>().map_err(|_| unknown())?)
                }
            }
            (ModelId::Fibonacci, "1" | "vacuum") => Charge(0),
            (ModelId::Fibonacci, "tau" | "τ") => Charge(1),
            (ModelId::Ds3, "1" | "vacuum") => Charge(0),
            (ModelId::Ds3, "Lambda" | "Λ") => Charge(1),
            (ModelId::Ds3, "Phi" | "Φ") => Charge(2),
            _ => return Err(unknown()),
        };
        self.check(c).map_err(|_| unknown())?;
        Ok(c)
    }

    /// `{c : N_ab^c = 1}` in ascending label order.
    pub fn fusion_multiply(&self, a: Charge, b: Charge) -> Result<Vec<Charge>> {
        self.check(a)?;
        self.check(b)?;
        let out = match self.id {
            ModelId::Su2 => su2k_fusion(None, a.0, b.0)?.into_iter().map(Charge).collect(),
            ModelId::Su2k(k) => su2k_fusion(Some(k), a.0, b.0)?
                .into_iter()
                .map(Charge)
                .collect(),
            ModelId::Fibonacci => match (a.0, b.0) {
                (0, x) | (x, 0) => vec![Charge(x)],
                _ => vec![Charge(0), Charge(1)],
            },
            ModelId::Ds3 => match (a.0, b.0) {
                (0, x) | (x, 0) => vec![Charge(x)],
                (1, 1) => vec![Charge(0)],
                (1, 2) | (2, 1) => vec![Charge(2)],
                _ => vec![Charge(0), Charge(1), Charge(2)],
            },
        };
        Ok(out)
    }

    /// `N_ab^c ∈ {0, 1}`.
    pub fn n(&self, a: Charge, b: Charge, c: Charge) -> Result<u32> {
        self.check(c)?;
        Ok(u32::from(self.fusion_multiply(a, b)?.contains(&c)))
    }

    /// Every label here is self-dual.
    pub fn dual(&self, a: Charge) -> Result<Charge> {
        self.check(a)?;
        Ok(a)
    }

    pub fn quantum_dimension(&self, a: Charge) -> Result<f64> {
        self.check(a)?;
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        Ok(match self.id {
            ModelId::Su2 => f64::from(a.0 + 1),
            ModelId::Su2k(k) => quantum_integer(i64::from(a.0) + 1, u64::from(k)),
            ModelId::Fibonacci => [1.0, phi][a.index()],
            ModelId::Ds3 => [1.0, 1.0, 2.0][a.index()],
        })
    }

    /// Intermediate charges `x ∈ a×b` with `d ∈ x×c`, ascending.
    pub fn admissible_left(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> Result<Vec<Charge>> {
        let mut out = Vec::new();
        for x in self.fusion_multiply(a, b)? {
            if self.fusion_multiply(x, c)?.contains(&d) {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Intermediate charges `x' ∈ b×c` with `d ∈ a×x'`, ascending.
    pub fn admissible_right(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> Result<Vec<Charge>> {
        let mut out = Vec::new();
        for x in self.fusion_multiply(b, c)? {
            if self.fusion_multiply(a, x)?.contains(&d) {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// `(F^d_{abc})_x^{x'}`, rows indexed by the `(ab)` channel and columns by
    /// the `(bc)` channel, both ascending.
    pub fn f_matrix(&self, a: Charge, b: Charge, c: Charge, d: Charge) -> Result<ComplexMatrix> {
        self.check(d)?;
        let left = self.admissible_left(a, b, c, d)?;
        let right = self.admissible_right(a, b, c, d)?;
        if left.is_empty() || right.is_empty() {
            return Err(Error::Inadmissible(format!(
                "no fusion path for F^{}_{{{},{},{}}}",
                self.label_name(d),
                self.label_name(a),
                self.label_name(b),
                self.label_name(c)
            )));
        }
        let g = self.generator();
        let all_generator = [a, b, c, d].iter().all(|&x| x == g);
        if all_generator {
            return Ok(self.recoupling_matrix());
        }
        match self.id {
            ModelId::Fibonacci | ModelId::Ds3 if left.len() == 1 && right.len() == 1 => {
                Ok(ComplexMatrix::identity(1))
            }
            _ => Err(Error::Unsupported {
                model: self.name(),
                what: format!(
                    "F^{}_{{{},{},{}}}",
                    self.label_name(d),
                    self.label_name(a),
                    self.label_name(b),
                    self.label_name(c)
                ),
            }),
        }
    }

    /// `F^α_{ααα}` for the generating anyon `α`, in ascending channel order.
    pub fn recoupling_matrix(&self) -> ComplexMatrix {
        match self.id {
            ModelId::Su2 => {
                let s3 = 3f64.sqrt();
                ComplexMatrix::from_real_rows(&[&[0.5, 0.5 * s3], &[0.5 * s3, -0.5]])
            }
            ModelId::Su2k(k) => {
                let q2 = quantum_integer(2, u64::from(k));
                let q3 = quantum_integer(3, u64::from(k)).max(0.0);
                let r = q3.sqrt();
                if k == 1 {
                    // σ × σ has the single channel 1 at level one
                    return ComplexMatrix::identity(1);
                }
                ComplexMatrix::from_real_rows(&[&[1.0 / q2, r / q2], &[r / q2, -1.0 / q2]])
            }
            ModelId::Fibonacci => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                let a = 1.0 / phi;
                let b = phi.powf(-0.5);
                ComplexMatrix::from_real_rows(&[&[a, b], &[b, -a]])
            }
            ModelId::Ds3 => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from_real_rows(&[&[0.5, 0.5, -r], &[0.5, 0.5, r], &[-r, r, 0.0]])
            }
        }
    }

    /// Counterclockwise exchange phase of `a` and `b` in channel `c`.
    pub fn r_symbol(&self, a: Charge, b: Charge, c: Charge) -> Result<Complex64> {
        if !self.fusion_multiply(a, b)?.contains(&c) {
            return Err(Error::Inadmissible(format!(
                "{} is not a fusion channel of {} x {}",
                self.label_name(c),
                self.label_name(a),
                self.label_name(b)
            )));
        }
        if a.is_vacuum() || b.is_vacuum() {
            return Ok(ONE);
        }
        let g = self.generator();
        let unsupported = || Error::Unsupported {
            model: self.name(),
            what: format!(
                "R^{}_{{{},{}}}",
                self.label_name(c),
                self.label_name(a),
                self.label_name(b)
            ),
        };
        if a != g || b != g {
            return Err(unsupported());
        }
        match self.id {
            ModelId::Su2k(2) => Ok(if c.is_vacuum() { ONE } else { I }),
            ModelId::Fibonacci => Ok(if c.is_vacuum() {
                cis(4.0 * PI / 5.0)
            } else {
                cis(7.0 * PI / 5.0)
            }),
            ModelId::Ds3 => Ok(if c == Charge(1) { -ONE } else { ONE }),
            _ => Err(unsupported()),
        }
    }

    /// Fusion channels of two generating anyons, ascending.
    pub fn pair_channels(&self) -> Vec<Charge> {
        let g = self.generator();
        self.fusion_multiply(g, g).expect("generator is a label")
    }

    /// `R_{αα}` as a diagonal matrix over [`pair_channels`](Self::pair_channels).
    pub fn r_matrix(&self) -> Result<ComplexMatrix> {
        let g = self.generator();
        let phases = self
            .pair_channels()
            .into_iter()
            .map(|c| self.r_symbol(g, g, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexMatrix::diagonal(&phases))
    }

    /// `max |Σ_e N_ab^e N_ec^d − Σ_f N_bc^f N_af^d|` over label quadruples.
    pub fn associativity_defect(&self) -> Result<u32> {
        let mut worst = 0;
        let labels = self.labels.clone();
        for &a in &labels {
            for &b in &labels {
                for &c in &labels {
                    for &d in &labels {
                        let left = self.admissible_left(a, b, c, d)?.len() as i64;
                        let right = self.admissible_right(a, b, c, d)?.len() as i64;
                        worst = worst.max((left - right).unsigned_abs() as u32);
                    }
                }
            }
        }
        Ok(worst)
    }

    /// `max |d_a d_b − Σ_c N_ab^c d_c|` over label pairs.
    pub fn quantum_dimension_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &a in &self.labels {
            for &b in &self.labels {
                let lhs = self.quantum_dimension(a)? * self.quantum_dimension(b)?;
                let mut rhs = 0.0;
                for c in self.fusion_multiply(a, b)? {
                    // SU(2) products can leave the finite label window
                    rhs += match self.id {
                        ModelId::Su2 => f64::from(c.0 + 1),
                        _ => self.quantum_dimension(c)?,
                    };
                }
                worst = worst.max((lhs - rhs).abs());
            }
        }
        Ok(worst)
    }

    pub fn is_su2_family(&self) -> bool {
        self.su2_family()
    }
}
