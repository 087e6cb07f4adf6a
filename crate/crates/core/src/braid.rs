//! Braid group `B₆` acting on the six-anyon sector.
//!
//! A [`BraidWord`] stores letters in the order they act: the first letter is
//! applied to the state first. The string form uses operator notation, where
//! the rightmost letter acts first, so `"b3 b4 b2 b1"` applies `b1` first.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, states_equal_up_to_phase, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::models::{AnyonModel, Charge, ModelId};
use crate::observables::WitnessOperator;
use crate::sector::{build_sector_basis, phi0_state, primed_change_matrix, SectorBasis};

/// Residual allowed in braid relations and unitarity.
pub const RELATION_TOL: f64 = 1e-10;

/// Distance below which two rays count as the same orbit state.
pub const ORBIT_TOL: f64 = 1e-8;

/// One braid generator `B_k` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Result<Self> {
        if !(1..=5).contains(&generator) {
            return Err(Error::InvalidArgument(format!(
                "braid generator index {generator} outside 1..5"
            )));
        }
        Ok(Self { generator, inverse })
    }

    pub fn inverted(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// All ten letters, `b1 … b5` then `b1' … b5'`.
    pub fn all() -> Vec<Letter> {
        let mut v: Vec<Letter> = (1..=5).map(|g| Letter { generator: g, inverse: false }).collect();
        v.extend((1..=5).map(|g| Letter { generator: g, inverse: true }));
        v
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}{}", self.generator, if self.inverse { "'" } else { "" })
    }
}

/// A braid word, letters stored in action order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BraidWord {
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// From letters in action order (first acts first).
    pub fn from_action_order(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// From letters written as an operator product (last acts first).
    pub fn from_operator_order(mut letters: Vec<Letter>) -> Self {
        letters.reverse();
        Self { letters }
    }

    /// Shorthand: signed generator indices in operator order, e.g. `[3, -4]` for `B₃B₄⁻¹`.
    pub fn from_signed(indices: &[i8]) -> Result<Self> {
        let letters = indices
            .iter()
            .map(|&i| Letter::new(i.unsigned_abs(), i < 0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_operator_order(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// `other` after `self`: the result acts with `self` first.
    pub fn then(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    pub fn repeat(&self, n: usize) -> Self {
        Self {
            letters: self.letters.repeat(n),
        }
    }

    /// Permutation of the six anyon positions: `p[pos]` is the anyon found at `pos`.
    pub fn permutation(&self) -> [u8; 6] {
        let mut p = [0, 1, 2, 3, 4, 5];
        for l in &self.letters {
            let i = usize::from(l.generator - 1);
            p.swap(i, i + 1);
        }
        p
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.letters.iter().rev().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Letter(Letter),
    Open,
    Close,
    Repeat(usize),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Token::Open));
                i += 1;
            }
            ')' => {
                out.push((pos, Token::Close));
                i += 1;
            }
            'b' | 'B' | 'x' | 'X' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(pos, "expected digits"));
                }
                let digits: String = chars[i + 1..j].iter().map(|&(_, d)| d).collect();
                let n: usize = digits.parse().map_err(|_| err(pos, "number too large"))?;
                if c == 'x' || c == 'X' {
                    out.push((pos, Token::Repeat(n)));
                } else {
                    let inverse = j < chars.len() && chars[j].1 == '\'';
                    if inverse {
                        j += 1;
                    }
                    let g = u8::try_from(n).ok().filter(|g| (1..=5).contains(g));
                    let g = g.ok_or_else(|| err(pos, "generator index must be 1..5"))?;
                    out.push((pos, Token::Letter(Letter { generator: g, inverse })));
                }
                i = j;
            }
            _ => return Err(err(pos, &format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

/// Parses a sequence up to an unmatched `)` or the end; letters in operator order.
fn parse_seq(tokens: &[(usize, Token)], at: &mut usize, depth: usize, end: usize) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    while *at < tokens.len() {
        let (pos, tok) = &tokens[*at];
        match tok {
            Token::Letter(l) => {
                out.push(*l);
                *at += 1;
            }
            Token::Open => {
                *at += 1;
                let inner = parse_seq(tokens, at, depth + 1, *pos)?;
                let mut reps = 1;
                if let Some((_, Token::Repeat(n))) = tokens.get(*at) {
                    reps = *n;
                    *at += 1;
                }
                for _ in 0..reps {
                    out.extend_from_slice(&inner);
                }
            }
            Token::Close => {
                if depth == 0 {
                    return Err(Error::Parse {
                        position: *pos,
                        message: "unmatched ')'".into(),
                    });
                }
                *at += 1;
                return Ok(out);
            }
            Token::Repeat(_) => {
                return Err(Error::Parse {
                    position: *pos,
                    message: "repetition must follow a ')'".into(),
                })
            }
        }
    }
    if depth > 0 {
        return Err(Error::Parse {
            position: end,
            message: "unclosed '('".into(),
        });
    }
    Ok(out)
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Grammar: tokens `b<k>` / `b<k>'`, parentheses, and `x<n>` after a `)`.
    /// Read as an operator product, so the rightmost letter acts first.
    /// `1` alone is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(Self::identity());
        }
        let tokens = tokenize(s)?;
        let mut at = 0;
        let letters = parse_seq(&tokens, &mut at, 0, 0)?;
        Ok(Self::from_operator_order(letters))
    }
}

/// Which scalar multiplies which primed product state inside `B₃`, and the
/// channel labels of the rows of the mixing block.
#[derive(Debug, Clone, PartialEq)]
pub struct B3Assignment {
    /// Sector position and value of each scalar summand.
    pub scalars: Vec<(usize, Complex64)>,
    /// Sector positions of the mixing block, in order.
    pub block_positions: Vec<usize>,
    /// Channel label used for each row of the mixing block.
    pub block_channels: Vec<Charge>,
}

/// How the straddling pair (3,4) splits the sector in the primed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StraddleLayout {
    /// Product-block positions `x'·n + y` whose (3,4) channel is fixed, with that channel.
    pub scalar_positions: Vec<(usize, Charge)>,
    /// Positions mixed by the (3,4) exchange: the multi-channel product state, then the tail.
    pub block_positions: Vec<usize>,
    /// Total charge `β` of each mixed position, used as its channel label.
    pub block_channels: Vec<Charge>,
}

pub fn straddle_layout(basis: &SectorBasis) -> Result<StraddleLayout> {
    let m = basis.model();
    let ch = basis.channels();
    let n = basis.n();
    let mut scalar_positions = Vec::new();
    let mut block_positions = Vec::new();
    let mut block_channels = Vec::new();
    for (xi, &x) in ch.iter().enumerate() {
        for (yi, &y) in ch.iter().enumerate() {
            let pos = xi * n + yi;
            let out = m.fusion_multiply(x, y)?;
            if out.len() == 1 {
                scalar_positions.push((pos, out[0]));
            } else {
                block_positions.push(pos);
                block_channels.push(basis.elements()[pos].beta());
            }
        }
    }
    if block_positions.len() > 1 {
        return Err(Error::Unsupported {
            model: m.name(),
            what: "more than one multi-channel product state under (3,4)".into(),
        });
    }
    for i in basis.block_dim()..basis.dim() {
        block_positions.push(i);
        block_channels.push(basis.elements()[i].beta());
    }
    for c in &block_channels {
        if basis.channel_index(*c).is_none() {
            return Err(Error::Unsupported {
                model: m.name(),
                what: format!("mixing-block label {} is not a pair channel", m.label_name(*c)),
            });
        }
    }
    Ok(StraddleLayout {
        scalar_positions,
        block_positions,
        block_channels,
    })
}

/// `O·[scalars ⊕ F·diag(θ)·F restricted to the block rows]·O` for a channel function `θ`.
pub(crate) fn straddle_matrix(
    basis: &SectorBasis,
    assignment: &B3Assignment,
    local_diag: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let f = basis.model().recoupling_matrix();
    let mix = &(&f * local_diag) * &f;
    let mut d = ComplexMatrix::zeros(basis.dim(), basis.dim());
    for &(pos, v) in &assignment.scalars {
        d[(pos, pos)] = v;
    }
    for (a, &pa) in assignment.block_positions.iter().enumerate() {
        for (b, &pb) in assignment.block_positions.iter().enumerate() {
            let ia = basis.channel_index(assignment.block_channels[a]).expect("checked label");
            let ib = basis.channel_index(assignment.block_channels[b]).expect("checked label");
            d[(pa, pb)] = mix[(ia, ib)];
        }
    }
    let o = primed_change_matrix(basis)?;
    o.adjoint().matmul(&d)?.matmul(&o)
}

/// Residuals of the defining relations of `B₆`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    /// `‖B_i B_{i+1} B_i − B_{i+1} B_i B_{i+1}‖` for i = 1..4.
    pub yang_baxter: Vec<f64>,
    /// `‖B_i B_j − B_j B_i‖` for |i − j| ≥ 2, keyed by `(i, j)`.
    pub far_commutation: Vec<((u8, u8), f64)>,
    pub unitarity: f64,
    /// `max ‖B_j² − 1‖`.
    pub involution: f64,
    pub passed: bool,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.yang_baxter
            .iter()
            .chain(self.far_commutation.iter().map(|(_, r)| r))
            .fold(self.unitarity, |m, &r| m.max(r))
    }
}

pub fn relation_residuals(gens: &[ComplexMatrix]) -> Result<RelationReport> {
    let mut yang_baxter = Vec::new();
    for i in 0..gens.len().saturating_sub(1) {
        let (a, b) = (&gens[i], &gens[i + 1]);
        let lhs = a.matmul(b)?.matmul(a)?;
        let rhs = b.matmul(a)?.matmul(b)?;
        yang_baxter.push(lhs.max_diff(&rhs));
    }
    let mut far_commutation = Vec::new();
    for i in 0..gens.len() {
        for j in i + 2..gens.len() {
            let r = gens[i].commutator(&gens[j])?.max_abs();
            far_commutation.push(((i as u8 + 1, j as u8 + 1), r));
        }
    }
    let unitarity = gens.iter().map(|g| g.unitarity_residual()).fold(0.0, f64::max);
    let mut involution: f64 = 0.0;
    for g in gens {
        let id = ComplexMatrix::identity(g.rows());
        involution = involution.max(g.matmul(g)?.max_diff(&id));
    }
    let mut report = RelationReport {
        yang_baxter,
        far_commutation,
        unitarity,
        involution,
        passed: false,
    };
    report.passed = report.max_residual() <= RELATION_TOL;
    Ok(report)
}

/// The five generators on a model's sector.
#[derive(Debug, Clone)]
pub struct BraidRep {
    basis: SectorBasis,
    generators: Vec<ComplexMatrix>,
    inverses: Vec<ComplexMatrix>,
    b3: Option<B3Assignment>,
}

impl BraidRep {
    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn model(&self) -> &AnyonModel {
        self.basis.model()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `B_k` for k in 1..=5.
    pub fn generator(&self, k: u8) -> &ComplexMatrix {
        &self.generators[usize::from(k) - 1]
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn letter_matrix(&self, l: Letter) -> &ComplexMatrix {
        let i = usize::from(l.generator) - 1;
        if l.inverse {
            &self.inverses[i]
        } else {
            &self.generators[i]
        }
    }

    /// Block assignment used for `B₃`; `None` for the closed-form SU(2)₂ generators.
    pub fn b3_assignment(&self) -> Option<&B3Assignment> {
        self.b3.as_ref()
    }

    /// All ten generators and inverses, in [`Letter::all`] order.
    pub fn all_letter_matrices(&self) -> Vec<ComplexMatrix> {
        Letter::all().into_iter().map(|l| self.letter_matrix(l).clone()).collect()
    }

    pub fn phi0(&self) -> ComplexVector {
        phi0_state(&self.basis).expect("sector has a vacuum-pair state")
    }

    fn from_generators(basis: SectorBasis, generators: Vec<ComplexMatrix>, b3: Option<B3Assignment>) -> Self {
        let inverses = generators.iter().map(|g| g.adjoint()).collect();
        Self {
            basis,
            generators,
            inverses,
            b3,
        }
    }
}

fn r_diag(model: &AnyonModel) -> Result<ComplexMatrix> {
    model.r_matrix()
}

/// `R` phase of each single-channel scalar summand, in canonical order.
pub fn canonical_b3_assignment(basis: &SectorBasis) -> Result<B3Assignment> {
    let m = basis.model();
    let a = m.generator();
    let layout = straddle_layout(basis)?;
    let scalars = layout
        .scalar_positions
        .iter()
        .map(|&(pos, c)| Ok((pos, m.r_symbol(a, a, c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(B3Assignment {
        scalars,
        block_positions: layout.block_positions,
        block_channels: layout.block_channels,
    })
}

/// Generators built from `F` and `R`: exchanges within a side act as `R` in
/// the basis diagonalizing that pair, `B₃` as a block matrix in the primed basis.
pub fn generators_from_data(basis: &SectorBasis, b3: &B3Assignment) -> Result<Vec<ComplexMatrix>> {
    let m = basis.model();
    let a = m.generator();
    let f = m.recoupling_matrix();
    let r = r_diag(m)?;
    let frf = &(&f * &r) * &f;
    let id = ComplexMatrix::identity(basis.n());
    // paired singleton states: pairs (1,2), (2,3) and mirrors fuse to the state's own channel
    let tail = basis.elements()[basis.block_dim()..]
        .iter()
        .map(|e| m.r_symbol(a, a, e.a.x))
        .collect::<Result<Vec<_>>>()?;
    let tail = ComplexMatrix::diagonal(&tail);
    let b1 = direct_sum(&[frf.kron(&id), tail.clone()])?;
    let b2 = direct_sum(&[r.kron(&id), tail.clone()])?;
    let b4 = direct_sum(&[id.kron(&frf), tail.clone()])?;
    let b5 = direct_sum(&[id.kron(&r), tail])?;
    let b3 = straddle_matrix(basis, b3, &r)?;
    Ok(vec![b1, b2, b3, b4, b5])
}

/// SU(2)₂ generators in closed form: `e^{−iπ/4 P}` for the Pauli strings
/// `X⊗1, Z⊗1, X⊗Z, 1⊗X, 1⊗Z`.
pub fn ising_generators() -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    let x = ComplexMatrix::pauli_x();
    let z = ComplexMatrix::pauli_z();
    let e = |p: &ComplexMatrix| ComplexMatrix::exp_involution(FRAC_PI_4, p);
    vec![
        e(&x.kron(&id)),
        e(&z.kron(&id)),
        e(&x.kron(&z)),
        e(&id.kron(&x)),
        e(&id.kron(&z)),
    ]
}

pub fn braid_generators(model: &AnyonModel) -> Result<BraidRep> {
    let basis = build_sector_basis(model)?;
    match model.id() {
        ModelId::Su2k(2) => Ok(BraidRep::from_generators(basis, ising_generators(), None)),
        ModelId::Fibonacci | ModelId::Ds3 => {
            let b3 = canonical_b3_assignment(&basis)?;
            let gens = generators_from_data(&basis, &b3)?;
            Ok(BraidRep::from_generators(basis, gens, Some(b3)))
        }
        _ => Err(Error::Unsupported {
            model: model.name(),
            what: "braid representation".into(),
        }),
    }
}

/// Distinct orderings of a list, lexicographic by index.
fn distinct_permutations<T: Clone + PartialEq>(items: &[T]) -> Vec<Vec<T>> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let mut out: Vec<Vec<T>> = Vec::new();
    loop {
        let cand: Vec<T> = idx.iter().map(|&i| items[i].clone()).collect();
        if !out.contains(&cand) {
            out.push(cand);
        }
        // next lexicographic permutation of idx
        let Some(k) = (0..idx.len().saturating_sub(1)).rev().find(|&k| idx[k] < idx[k + 1]) else {
            break;
        };
        let l = (k + 1..idx.len()).rev().find(|&l| idx[k] < idx[l]).expect("exists");
        idx.swap(k, l);
        idx[k + 1..].reverse();
    }
    out
}

/// Result of permuting the `B₃` summands over all admissible assignments.
#[derive(Debug, Clone)]
pub struct B3Search {
    pub tried: usize,
    pub passing: Vec<B3Assignment>,
    pub canonical_passes: bool,
}

/// Tries every reordering of the scalar summands and of the mixing-block rows.
pub fn b3_assignment_search(model: &AnyonModel) -> Result<B3Search> {
    let basis = build_sector_basis(model)?;
    let canonical = canonical_b3_assignment(&basis)?;
    let positions: Vec<usize> = canonical.scalars.iter().map(|s| s.0).collect();
    let values: Vec<Complex64> = canonical.scalars.iter().map(|s| s.1).collect();
    let mut tried = 0;
    let mut passing = Vec::new();
    for vals in distinct_permutations(&values) {
        for rows in distinct_permutations(&canonical.block_channels) {
            let cand = B3Assignment {
                scalars: positions.iter().copied().zip(vals.iter().copied()).collect(),
                block_positions: canonical.block_positions.clone(),
                block_channels: rows,
            };
            tried += 1;
            if relation_residuals(&generators_from_data(&basis, &cand)?)?.passed {
                passing.push(cand);
            }
        }
    }
    let canonical_passes = passing.contains(&canonical);
    Ok(B3Search {
        tried,
        passing,
        canonical_passes,
    })
}

pub fn verify_braid_relations(rep: &BraidRep) -> Result<RelationReport> {
    relation_residuals(rep.generators())
}

/// The word applied to `v`, first letter first.
pub fn apply_word(rep: &BraidRep, word: &BraidWord, v: &ComplexVector) -> Result<ComplexVector> {
    let mut out = v.clone();
    for &l in word.letters() {
        out = rep.letter_matrix(l).apply(&out)?;
    }
    Ok(out)
}

/// The operator of a word (`B_{last} ⋯ B_{first}`).
pub fn word_matrix(rep: &BraidRep, word: &BraidWord) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(rep.dim());
    for &l in word.letters() {
        out = rep.letter_matrix(l).matmul(&out)?;
    }
    Ok(out)
}

/// Breadth-first closure of `start` under `generators`, modulo global phase.
pub fn orbit_under(generators: &[ComplexMatrix], start: &ComplexVector, max_states: usize) -> Result<Vec<ComplexVector>> {
    let mut seen = vec![start.clone()];
    let mut head = 0;
    while head < seen.len() {
        let v = seen[head].clone();
        head += 1;
        for g in generators {
            let w = g.apply(&v)?;
            let mut new = true;
            for s in &seen {
                if states_equal_up_to_phase(s, &w, ORBIT_TOL)? {
                    new = false;
                    break;
                }
            }
            if new {
                if seen.len() >= max_states {
                    return Err(Error::OrbitTooLarge { limit: max_states });
                }
                seen.push(w);
            }
        }
    }
    Ok(seen)
}

/// Orbit of `start` under all generators and inverses.
pub fn orbit_states(rep: &BraidRep, start: &ComplexVector, max_states: usize) -> Result<Vec<ComplexVector>> {
    orbit_under(&rep.all_letter_matrices(), start, max_states)
}

/// Default orbit cap for a model.
pub fn default_orbit_limit(model: &AnyonModel) -> usize {
    match model.id() {
        ModelId::Ds3 => 10_000,
        _ => 1_000_000,
    }
}

/// A word in the involutive generators realizing a permutation, by bubble sort.
pub fn permutation_word(p: &[u8; 6]) -> BraidWord {
    let mut q = *p;
    let mut swaps = Vec::new();
    for end in (1..6).rev() {
        for i in 0..end {
            if q[i] > q[i + 1] {
                q.swap(i, i + 1);
                swaps.push(i as u8 + 1);
            }
        }
    }
    swaps.reverse();
    BraidWord::from_action_order(
        swaps
            .into_iter()
            .map(|g| Letter { generator: g, inverse: false })
            .collect(),
    )
}

/// All 720 permutations of six positions, lexicographic.
pub fn all_permutations() -> Vec<[u8; 6]> {
    distinct_permutations(&[0u8, 1, 2, 3, 4, 5])
        .into_iter()
        .map(|v| [v[0], v[1], v[2], v[3], v[4], v[5]])
        .collect()
}

#[derive(Debug, Clone)]
pub struct PermutationValue {
    pub permutation: [u8; 6],
    pub word: BraidWord,
    pub value: f64,
}

/// The D(S₃) scan over `S₆`.
#[derive(Debug, Clone)]
pub struct PermutationScan {
    pub values: Vec<PermutationValue>,
    pub max_abs: f64,
    pub min: f64,
    pub max: f64,
    /// Projectively distinct states among the 720.
    pub distinct_states: usize,
    /// Random word pairs with equal permutations that were compared.
    pub consistency_pairs: usize,
    /// Did every pair give the same ray?
    pub consistent: bool,
    /// Is `B₃B₄B₂B₁|φ₀⟩` among the scanned states?
    pub contains_b3b4b2b1: bool,
}

/// `⟨witness⟩` on `word·|φ₀⟩` for one word per permutation of `S₆`.
pub fn ds3_permutation_scan(rep: &BraidRep, witness: &WitnessOperator, seed: u64) -> Result<PermutationScan> {
    if rep.model().id() != ModelId::Ds3 {
        return Err(Error::Unsupported {
            model: rep.model().name(),
            what: "permutation scan (generators are not involutions)".into(),
        });
    }
    let phi0 = rep.phi0();
    let mut values = Vec::with_capacity(720);
    let mut states: Vec<ComplexVector> = Vec::with_capacity(720);
    for p in all_permutations() {
        let word = permutation_word(&p);
        debug_assert_eq!(word.permutation(), p);
        let v = apply_word(rep, &word, &phi0)?;
        values.push(PermutationValue {
            permutation: p,
            word,
            value: witness.expectation(&v)?,
        });
        states.push(v);
    }
    let max = values.iter().map(|v| v.value).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.value).fold(f64::INFINITY, f64::min);

    let mut distinct: Vec<&ComplexVector> = Vec::new();
    for s in &states {
        let mut new = true;
        for d in &distinct {
            if states_equal_up_to_phase(d, s, ORBIT_TOL)? {
                new = false;
                break;
            }
        }
        if new {
            distinct.push(s);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut consistent = true;
    let pairs = 20;
    for _ in 0..pairs {
        let len = rng.gen_range(4..=16);
        let word = BraidWord::from_action_order(
            (0..len)
                .map(|_| Letter {
                    generator: rng.gen_range(1..=5),
                    inverse: rng.gen_bool(0.5),
                })
                .collect(),
        );
        let p = word.permutation();
        let a = apply_word(rep, &word, &phi0)?;
        let b = apply_word(rep, &permutation_word(&p), &phi0)?;
        consistent &= states_equal_up_to_phase(&a, &b, ORBIT_TOL)?;
    }

    let target = apply_word(rep, &"b3 b4 b2 b1".parse()?, &phi0)?;
    let mut contains = false;
    for s in &states {
        if states_equal_up_to_phase(s, &target, ORBIT_TOL)? {
            contains = true;
            break;
        }
    }

    Ok(PermutationScan {
        max_abs: max.abs().max(min.abs()),
        min,
        max,
        distinct_states: distinct.len(),
        consistency_pairs: pairs,
        consistent,
        contains_b3b4b2b1: contains,
        values,
    })
}

/// Does `m` act as `X ⊗ 1` on the product block and diagonally on the tail?
pub fn acts_on_a_only(basis: &SectorBasis, m: &ComplexMatrix, tol: f64) -> bool {
    acts_locally(basis, m, tol, true)
}

/// Does `m` act as `1 ⊗ Y` on the product block and diagonally on the tail?
pub fn acts_on_b_only(basis: &SectorBasis, m: &ComplexMatrix, tol: f64) -> bool {
    acts_locally(basis, m, tol, false)
}

fn acts_locally(basis: &SectorBasis, m: &ComplexMatrix, tol: f64, a_side: bool) -> bool {
    let n = basis.n();
    let nb = basis.block_dim();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            let expected = if i < nb && j < nb {
                let (xi, yi, xj, yj) = (i / n, i % n, j / n, j % n);
                let (same, ri, rj) = if a_side { (yi == yj, xi, xj) } else { (xi == xj, yi, yj) };
                if !same {
                    ZERO
                } else {
                    // compare with the reference row/column in the first slot
                    let (r, c) = if a_side { (ri * n, rj * n) } else { (ri, rj) };
                    m[(r, c)]
                }
            } else if i == j {
                z
            } else {
                ZERO
            };
            if (z - expected).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Phase `c` and residual of `m ≈ c·target`.
pub fn match_up_to_phase(m: &ComplexMatrix, target: &ComplexMatrix) -> (Complex64, f64) {
    let c = m.relative_phase(target).unwrap_or(ONE);
    (c, m.max_diff(&target.scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, I};
    use crate::observables::{build_i3, build_w};
    use std::f64::consts::PI;

    fn rep(id: &str) -> BraidRep {
        braid_generators(&AnyonModel::parse(id).unwrap()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let w: BraidWord = "( b3 b4' b1' b3' b2' ) x5".parse().unwrap();
        assert_eq!(w.len(), 25);
        // b2' acts first
        assert_eq!(w.letters()[0], Letter { generator: 2, inverse: true });
        assert_eq!(w.letters()[4], Letter { generator: 3, inverse: false });
        let short: BraidWord = "b3 b4 b2 b1".parse().unwrap();
        assert_eq!(short.to_string(), "b3 b4 b2 b1");
        assert_eq!(short.letters()[0].generator, 1);
        let nested: BraidWord = "((b1 b2) x2 b3) x2".parse().unwrap();
        assert_eq!(nested.to_string(), "b1 b2 b1 b2 b3 b1 b2 b1 b2 b3");
        assert_eq!("".parse::<BraidWord>().unwrap(), BraidWord::identity());
        assert_eq!(BraidWord::identity().to_string(), "1");
        assert_eq!(BraidWord::from_signed(&[3, -4]).unwrap().to_string(), "b3 b4'");
    }

    #[test]
    fn parse_errors() {
        for bad in ["b6", "b0", "(b1", "b1)", "x3", "b1 x2", "q1", "b"] {
            assert!(matches!(bad.parse::<BraidWord>(), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn inverse_words() {
        let w: BraidWord = "b1 b2' b3".parse().unwrap();
        assert_eq!(w.inverse().to_string(), "b3' b2 b1'");
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn generators_satisfy_relations() {
        for id in ["su2k:2", "fib", "ds3"] {
            let r = rep(id);
            let rel = verify_braid_relations(&r).unwrap();
            assert!(rel.passed, "{id}: {rel:?}");
            assert_eq!(rel.far_commutation.len(), 6);
        }
        let ds3 = verify_braid_relations(&rep("ds3")).unwrap();
        assert!(ds3.involution <= 1e-12);
        assert!(braid_generators(&AnyonModel::su2()).is_err());
        assert!(braid_generators(&AnyonModel::su2k(3).unwrap()).is_err());
    }

    #[test]
    fn canonical_b3_is_among_passing_assignments() {
        let fib = b3_assignment_search(&AnyonModel::fibonacci()).unwrap();
        assert!(fib.canonical_passes);
        assert_eq!(fib.tried, 6);
        let ds3 = b3_assignment_search(&AnyonModel::ds3()).unwrap();
        assert!(ds3.canonical_passes);
        assert_eq!(ds3.tried, 28 * 6);
        assert!(!ds3.passing.is_empty());
    }

    #[test]
    fn ds3_b3_scalars_follow_listing() {
        let r = rep("ds3");
        let b3 = r.b3_assignment().unwrap();
        let got: Vec<f64> = b3.scalars.iter().map(|s| s.1.re).collect();
        assert_eq!(got, vec![1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(b3.block_positions, vec![8, 9, 10]);
        assert_eq!(b3.block_channels, vec![Charge(2), Charge(1), Charge(0)]);
    }

    #[test]
    fn ising_general_pattern_agrees_with_closed_form() {
        let basis = build_sector_basis(&AnyonModel::su2k(2).unwrap()).unwrap();
        let b3 = canonical_b3_assignment(&basis).unwrap();
        let general = generators_from_data(&basis, &b3).unwrap();
        for (g, c) in general.iter().zip(ising_generators()) {
            let (phase, res) = match_up_to_phase(g, &c);
            assert!(res < 1e-12);
            assert!((phase - cis(PI / 4.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn ising_closed_forms() {
        let r = rep("su2k:2");
        let z = ComplexMatrix::pauli_z();
        let want = ComplexMatrix::exp_involution(FRAC_PI_4, &z).kron(&ComplexMatrix::identity(2));
        assert!(r.generator(2).max_diff(&want) < 1e-15);
        // B₂ is R = 1 ⊕ i on the A pair channel, up to a global phase
        let rr = ComplexMatrix::diagonal(&[ONE, I]).kron(&ComplexMatrix::identity(2));
        assert!(match_up_to_phase(r.generator(2), &rr).1 <= 1e-10);
        for (i, j) in [(1, 4), (2, 5)] {
            assert!(r.generator(i).commutator(r.generator(j)).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn fibonacci_b5_form() {
        let r = rep("fib");
        let fib = AnyonModel::fibonacci();
        let rt = fib.r_matrix().unwrap();
        let want = direct_sum(&[
            ComplexMatrix::identity(2).kron(&rt),
            ComplexMatrix::diagonal(&[cis(7.0 * PI / 5.0)]),
        ])
        .unwrap();
        assert!(r.generator(5).max_diff(&want) < 1e-15);
    }

    #[test]
    fn generator_locality() {
        for id in ["su2k:2", "fib", "ds3"] {
            let r = rep(id);
            let b = r.basis();
            assert!(acts_on_a_only(b, r.generator(1), 1e-12), "{id}");
            assert!(acts_on_a_only(b, r.generator(2), 1e-12), "{id}");
            assert!(acts_on_b_only(b, r.generator(4), 1e-12), "{id}");
            assert!(acts_on_b_only(b, r.generator(5), 1e-12), "{id}");
            assert!(!acts_on_a_only(b, r.generator(3), 1e-12), "{id}");
        }
    }

    #[test]
    fn words_and_inverses() {
        let r = rep("fib");
        let phi0 = r.phi0();
        assert_eq!(apply_word(&r, &BraidWord::identity(), &phi0).unwrap(), phi0);
        let w: BraidWord = "(b3 b4' b1' b3' b2') x5".parse().unwrap();
        let v = apply_word(&r, &w, &phi0).unwrap();
        assert!(v.is_normalized(1e-10));
        let back = apply_word(&r, &w.inverse(), &v).unwrap();
        assert!(back.max_diff(&phi0) < 1e-10);
        let m = word_matrix(&r, &w).unwrap();
        assert!(m.apply(&phi0).unwrap().max_diff(&v) < 1e-12);
    }

    #[test]
    fn fibonacci_violating_word() {
        let r = rep("fib");
        let w = build_w(r.basis()).unwrap();
        let word: BraidWord = "( b3 b4' b1' b3' b2' ) x5".parse().unwrap();
        let v = apply_word(&r, &word, &r.phi0()).unwrap();
        let val = w.expectation(&v).unwrap();
        assert!((val - 2.5310).abs() < 1e-4, "{val}");
    }

    #[test]
    fn orbits() {
        let ising = rep("su2k:2");
        let w = build_w(ising.basis()).unwrap();
        let orbit = orbit_states(&ising, &ising.phi0(), 1_000_000).unwrap();
        assert_eq!(orbit.len(), 60);
        let top = orbit.iter().map(|v| w.expectation(v).unwrap().abs()).fold(0.0, f64::max);
        assert!(top <= 2.0 + 1e-9);

        let ds3 = rep("ds3");
        let i3 = build_i3(ds3.basis()).unwrap();
        let orbit = orbit_states(&ds3, &ds3.phi0(), 10_000).unwrap();
        assert_eq!(orbit.len(), 15);
        let top = orbit.iter().map(|v| i3.expectation(v).unwrap().abs()).fold(0.0, f64::max);
        assert!(top <= 2.0 + 1e-9);

        let start = ds3.phi0();
        assert_eq!(orbit_under(&[], &start, 1).unwrap().len(), 1);

        let fib = rep("fib");
        assert!(matches!(
            orbit_states(&fib, &fib.phi0(), 50),
            Err(Error::OrbitTooLarge { limit: 50 })
        ));
    }

    #[test]
    fn permutation_words_realize_permutations() {
        for p in all_permutations() {
            assert_eq!(permutation_word(&p).permutation(), p);
        }
        assert_eq!(all_permutations().len(), 720);
    }

    #[test]
    fn ds3_scan() {
        let r = rep("ds3");
        let i3 = build_i3(r.basis()).unwrap();
        let scan = ds3_permutation_scan(&r, &i3, 0).unwrap();
        assert_eq!(scan.values.len(), 720);
        assert!(scan.max_abs <= 2.0 + 1e-9);
        assert!(scan.max - scan.min > 0.1);
        assert!(scan.consistent);
        assert!(scan.contains_b3b4b2b1);
        let id = &scan.values[0];
        assert_eq!(id.permutation, [0, 1, 2, 3, 4, 5]);
        assert!((id.value - i3.expectation(&r.phi0()).unwrap()).abs() < 1e-14);
        assert!(ds3_permutation_scan(&rep("fib"), &build_w(rep("fib").basis()).unwrap(), 0).is_err());
    }
}
