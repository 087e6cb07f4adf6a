//! The vacuum sector of six identical anyons, written as pairs of local
//! three-anyon fusion states `|x(α,β)⟩_A |y(α,β)⟩_B`.
//!
//! Ordering: the `β = α` product block comes first with A slow, followed by
//! the paired singleton states (one per remaining `β`, descending label).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, ComplexMatrix, ComplexVector};
use crate::models::{AnyonModel, Charge};

/// Which three-anyon group a local state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// `|x(α,β)⟩` or its primed partner `|x'(α,β)⟩` on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalFusionState {
    pub side: Side,
    pub x: Charge,
    pub beta: Charge,
    pub primed: bool,
}

/// One basis element of the sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorElement {
    pub a: LocalFusionState,
    pub b: LocalFusionState,
}

impl SectorElement {
    pub fn beta(&self) -> Charge {
        self.a.beta
    }
}

/// Ordered basis of the six-anyon vacuum sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    model: AnyonModel,
    alpha: Charge,
    channels: Vec<Charge>,
    elements: Vec<SectorElement>,
    index: BTreeMap<(u32, u32, u32), usize>,
}

impl SectorBasis {
    pub fn model(&self) -> &AnyonModel {
        &self.model
    }

    /// The generating anyon `α`.
    pub fn alpha(&self) -> Charge {
        self.alpha
    }

    /// Pair channels `α × α`, ascending. Their count is the local block size `n`.
    pub fn channels(&self) -> &[Charge] {
        &self.channels
    }

    pub fn n(&self) -> usize {
        self.channels.len()
    }

    /// Size of the `β = α` product block, `n²`.
    pub fn block_dim(&self) -> usize {
        self.n() * self.n()
    }

    pub fn tail_dim(&self) -> usize {
        self.dim() - self.block_dim()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SectorElement] {
        &self.elements
    }

    /// Position of `|x⟩_A |y⟩_B` with shared `β`.
    pub fn position(&self, x: Charge, y: Charge, beta: Charge) -> Option<usize> {
        self.index.get(&(x.0, y.0, beta.0)).copied()
    }

    /// Position of the product-block state `|x_i⟩_A |y_j⟩_B` by channel index.
    pub fn product_index(&self, xi: usize, yj: usize) -> usize {
        xi * self.n() + yj
    }

    /// Channel index of an element on the given side, if it is in the product block.
    pub fn channel_index(&self, c: Charge) -> Option<usize> {
        self.channels.iter().position(|&x| x == c)
    }

    pub fn render_local(&self, s: &LocalFusionState) -> String {
        let m = &self.model;
        let side = match s.side {
            Side::A => "A",
            Side::B => "B",
        };
        format!(
            "|{}{}({},{})>_{}",
            m.label_name(s.x),
            if s.primed { "'" } else { "" },
            m.label_name(self.alpha),
            m.label_name(s.beta),
            side
        )
    }

    pub fn render(&self, i: usize) -> String {
        let e = &self.elements[i];
        format!("{} {}", self.render_local(&e.a), self.render_local(&e.b))
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.render(i)).collect()
    }
}

impl fmt::Display for SectorBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            writeln!(f, "{i:>2}  {}", self.render(i))?;
        }
        Ok(())
    }
}

/// Number of fusion paths of `anyons` (fused left to right) ending in `total`.
pub fn sector_dimension(model: &AnyonModel, anyons: &[Charge], total: Charge) -> Result<u64> {
    let Some((&first, rest)) = anyons.split_first() else {
        return Ok(u64::from(total.is_vacuum()));
    };
    let mut counts: BTreeMap<Charge, u64> = BTreeMap::new();
    counts.insert(first, 1);
    for &a in rest {
        let mut next = BTreeMap::new();
        for (&b, &m) in &counts {
            for c in model.fusion_multiply(b, a)? {
                *next.entry(c).or_insert(0) += m;
            }
        }
        counts = next;
    }
    Ok(counts.get(&total).copied().unwrap_or(0))
}

/// Multiplicities of `(1, Λ, Φ)` in `Φ^{×n}` for D(S₃), from the closed form.
pub fn phi_power_multiplicities(n: u32) -> Result<(u64, u64, u64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > 62 {
        return Err(Error::InvalidArgument(format!("n = {n} overflows 64-bit counts")));
    }
    let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
    let p = |e: u32| 1i128 << e;
    let trivial = (p(n - 1) + sign) / 3;
    let phi = (p(n) - sign) / 3;
    Ok((trivial as u64, trivial as u64, phi as u64))
}

/// Builds the canonical sector basis for six copies of the generating anyon.
pub fn build_sector_basis(model: &AnyonModel) -> Result<SectorBasis> {
    let alpha = model.generator();
    let channels = model.fusion_multiply(alpha, alpha)?;
    for &x in &channels {
        if !model.fusion_multiply(x, alpha)?.contains(&alpha) {
            return Err(Error::Inadmissible(format!(
                "{} is not in {} x {}",
                model.label_name(alpha),
                model.label_name(x),
                model.label_name(alpha)
            )));
        }
    }

    let mut betas: Vec<Charge> = Vec::new();
    for &x in &channels {
        for b in model.fusion_multiply(x, alpha)? {
            if !betas.contains(&b) {
                betas.push(b);
            }
        }
    }
    betas.retain(|&b| b != alpha);
    betas.sort_by(|p, q| q.cmp(p));

    let local = |side, x, beta| LocalFusionState {
        side,
        x,
        beta,
        primed: false,
    };
    let mut elements = Vec::new();
    for &x in &channels {
        for &y in &channels {
            elements.push(SectorElement {
                a: local(Side::A, x, alpha),
                b: local(Side::B, y, alpha),
            });
        }
    }
    for beta in betas {
        let mut xs = Vec::new();
        for &x in &channels {
            if model.fusion_multiply(x, alpha)?.contains(&beta) {
                xs.push(x);
            }
        }
        if xs.len() != 1 {
            return Err(Error::Unsupported {
                model: model.name(),
                what: format!("{} channels reaching beta = {}", xs.len(), model.label_name(beta)),
            });
        }
        elements.push(SectorElement {
            a: local(Side::A, xs[0], beta),
            b: local(Side::B, xs[0], beta),
        });
    }

    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.a.x.0, e.b.x.0, e.a.beta.0), i))
        .collect();
    Ok(SectorBasis {
        model: model.clone(),
        alpha,
        channels,
        elements,
        index,
    })
}

/// `O = (F ⊗ 1_n) ⊕ 1_tail`: unprimed product coordinates to primed ones.
pub fn primed_change_matrix(basis: &SectorBasis) -> Result<ComplexMatrix> {
    let f = basis.model().recoupling_matrix();
    let block = f.kron(&ComplexMatrix::identity(basis.n()));
    direct_sum(&[block, ComplexMatrix::identity(basis.tail_dim())])
}

/// Product-block position `x'·n + y` (A slow) of `|φ_j⟩ = |x'⟩_A |y⟩_B` with
/// `x' = j mod n`, `y = j div n`. Tail states keep their own index.
pub fn phi_index(basis: &SectorBasis, j: usize) -> Result<usize> {
    if j >= basis.dim() {
        return Err(Error::InvalidArgument(format!(
            "phi index {j} out of range for dimension {}",
            basis.dim()
        )));
    }
    let n = basis.n();
    if j >= n * n {
        return Ok(j);
    }
    Ok(basis.product_index(j % n, j / n))
}

/// `|φ_j⟩` in unprimed product coordinates.
pub fn phi_state(basis: &SectorBasis, j: usize) -> Result<ComplexVector> {
    let col = phi_index(basis, j)?;
    Ok(primed_change_matrix(basis)?.column(col))
}

/// `|φ₀⟩ = |0'⟩_A |0⟩_B`: three vacuum pairs at (1,2), (3,4), (5,6).
pub fn phi0_state(basis: &SectorBasis) -> Result<ComplexVector> {
    phi_state(basis, 0)
}
