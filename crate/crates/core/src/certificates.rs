//! Sufficient conditions for full separability, each backed by an explicit
//! convex decomposition into product states.
//!
//! Every decomposition is assembled from two kinds of separable building
//! blocks:
//!
//! * u-states `(I + s B_idx)/n`, split into `2^(m-1)` product states with
//!   local signs read off the character table of the `m` active parties;
//! * even blocks `(I + sum_S s_S B_S)/n` over all even-size party subsets
//!   `S` for fixed local axes, which are the average of one product state
//!   and its global negation.
//!
//! Certificates are checked with [`verify_decomposition`] before they are
//! returned; a failed check downgrades the verdict to inconclusive.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bloch::{from_bloch, local_element, BasisConvention, BlochVector};
use crate::characters::{character_table, CharacterTable};
use crate::criteria::{sgn, CriterionVerdict, Verdict, DECISION_TOL};
use crate::error::{Error, Result};
use crate::linalg::{kron, validate_density, ComplexMatrix, DensityMatrix, SystemShape};

/// Reconstruction tolerance applied to every emitted certificate.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Allowed deviation of the weight sum from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// One local factor of a product state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalFactor {
    /// `I / n`.
    Mixed,
    /// `(I + sign B_axis) / n` with `B_axis` from the decomposition's basis.
    Axis { axis: usize, sign: i8 },
}

impl LocalFactor {
    pub fn matrix(&self, n: usize, convention: BasisConvention) -> Result<ComplexMatrix> {
        let id = ComplexMatrix::identity(n);
        match *self {
            Self::Mixed => Ok(id.scale_real(1.0 / n as f64)),
            Self::Axis { axis, sign } => {
                if axis == 0 || (sign != 1 && sign != -1) {
                    return Err(Error::Usage(format!("bad local factor axis={axis} sign={sign}")));
                }
                let mut m = id;
                m.add_scaled(&local_element(n, convention, axis)?, sign as f64);
                Ok(m.scale_real(1.0 / n as f64))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductState {
    pub locals: Vec<LocalFactor>,
}

impl ProductState {
    pub fn local_matrices(&self, shape: &SystemShape, convention: BasisConvention) -> Result<Vec<ComplexMatrix>> {
        if self.locals.len() != shape.parties() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} local factors", shape.parties()),
                found: format!("{}", self.locals.len()),
            });
        }
        self.locals
            .iter()
            .zip(shape.dims())
            .map(|(f, &n)| f.matrix(n, convention))
            .collect()
    }

    pub fn expand(&self, shape: &SystemShape, convention: BasisConvention) -> Result<ComplexMatrix> {
        kron(&self.local_matrices(shape, convention)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub state: ProductState,
}

/// Convex combination of product states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub shape: SystemShape,
    pub convention: BasisConvention,
    pub terms: Vec<DecompositionTerm>,
}

impl SeparableDecomposition {
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum_i w_i rho_i` as a dense matrix.
    pub fn expand(&self) -> Result<ComplexMatrix> {
        let n = self.shape.total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut cache: HashMap<(usize, LocalFactor), ComplexMatrix> = HashMap::new();
        for term in &self.terms {
            if term.state.locals.len() != self.shape.parties() {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} local factors", self.shape.parties()),
                    found: format!("{}", term.state.locals.len()),
                });
            }
            let mut factors = Vec::with_capacity(term.state.locals.len());
            for (f, &d) in term.state.locals.iter().zip(self.shape.dims()) {
                let m = match cache.get(&(d, *f)) {
                    Some(m) => m.clone(),
                    None => {
                        let m = f.matrix(d, self.convention)?;
                        cache.insert((d, *f), m.clone());
                        m
                    }
                };
                factors.push(m);
            }
            out.add_scaled(&kron(&factors)?, term.weight);
        }
        Ok(out)
    }
}

/// Result of checking a decomposition against a target matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub weight_sum: f64,
    pub min_weight: f64,
    pub reconstruction_distance: f64,
    pub violations: Vec<String>,
}

/// Checks weight positivity, weight sum, validity of every local factor and
/// the Frobenius distance between the mixture and `target`.
pub fn verify_decomposition(d: &SeparableDecomposition, target: &ComplexMatrix, tol: f64) -> VerificationReport {
    let mut violations = Vec::new();
    let weight_sum = d.weight_sum();
    let min_weight = d.terms.iter().map(|t| t.weight).fold(f64::INFINITY, f64::min);
    if let Some((i, t)) = d.terms.iter().enumerate().find(|(_, t)| t.weight.is_nan() || t.weight < 0.0) {
        violations.push(format!("term {i} has negative weight {}", t.weight));
    }
    if (weight_sum - 1.0).abs() > WEIGHT_SUM_TOL {
        violations.push(format!("weights sum to {weight_sum}, not 1"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in &d.terms {
        for (f, &n) in t.state.locals.iter().zip(d.shape.dims()) {
            if !seen.insert((n, *f)) {
                continue;
            }
            let local = SystemShape::new(vec![n]).expect("dimension checked by shape");
            match f.matrix(n, d.convention).and_then(|m| validate_density(m, &local, tol)) {
                Ok(_) => {}
                Err(e) => violations.push(format!("local factor {f:?} on dimension {n}: {e}")),
            }
        }
    }
    let reconstruction_distance = match d.expand() {
        Ok(m) if m.rows() == target.rows() && m.cols() == target.cols() => {
            let dist = m.frobenius_distance(target);
            if dist.is_nan() || dist > tol {
                violations.push(format!("reconstruction distance {dist:e} exceeds {tol:e}"));
            }
            dist
        }
        Ok(m) => {
            violations.push(format!(
                "decomposition is {}x{} but target is {}x{}",
                m.rows(),
                m.cols(),
                target.rows(),
                target.cols()
            ));
            f64::INFINITY
        }
        Err(e) => {
            violations.push(format!("cannot expand decomposition: {e}"));
            f64::INFINITY
        }
    };
    VerificationReport {
        passed: violations.is_empty(),
        weight_sum,
        min_weight: if d.terms.is_empty() { 0.0 } else { min_weight },
        reconstruction_distance,
        violations,
    }
}

/// A criterion verdict and, when certified, the decomposition behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub verdict: CriterionVerdict,
    pub decomposition: Option<SeparableDecomposition>,
}

/// Accumulates weighted product states, merging identical ones.
struct Builder {
    shape: SystemShape,
    convention: BasisConvention,
    terms: BTreeMap<Vec<LocalFactor>, f64>,
}

impl Builder {
    fn new(shape: &SystemShape, convention: BasisConvention) -> Self {
        Self {
            shape: shape.clone(),
            convention,
            terms: BTreeMap::new(),
        }
    }

    fn add(&mut self, weight: f64, locals: Vec<LocalFactor>) {
        if weight != 0.0 {
            *self.terms.entry(locals).or_insert(0.0) += weight;
        }
    }

    fn add_u_state(&mut self, weight: f64, idx: &[usize], sign: i8) -> Result<()> {
        if weight == 0.0 {
            return Ok(());
        }
        for (w, s) in u_state_terms(&self.shape, idx, sign, self.convention)? {
            self.add(weight * w, s.locals);
        }
        Ok(())
    }

    fn add_mixed(&mut self, weight: f64) {
        self.add(weight, vec![LocalFactor::Mixed; self.shape.parties()]);
    }

    /// Drops weights within `DECISION_TOL` of zero or below and rescales the
    /// rest to sum to one.
    fn finish(self) -> SeparableDecomposition {
        let mut terms: Vec<DecompositionTerm> = self
            .terms
            .into_iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|(locals, weight)| DecompositionTerm {
                weight,
                state: ProductState { locals },
            })
            .collect();
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if total > 0.0 {
            for t in &mut terms {
                t.weight /= total;
            }
        }
        SeparableDecomposition {
            shape: self.shape,
            convention: self.convention,
            terms,
        }
    }
}

fn check_u_state_convention(shape: &SystemShape, idx: &[usize], convention: BasisConvention) -> Result<()> {
    match convention {
        BasisConvention::Check => Ok(()),
        BasisConvention::Tilde => {
            if idx.iter().zip(shape.dims()).any(|(&i, &d)| i != 0 && d != 2) {
                Err(Error::UnsupportedConvention(format!(
                    "TILDE u-states need qubit parties at every active position; shape {shape}"
                )))
            } else {
                Ok(())
            }
        }
        BasisConvention::Prime => {
            if shape.is_all_qubits() {
                Ok(())
            } else {
                Err(Error::UnsupportedConvention(format!("PRIME u-states need an all-qubit shape, got {shape}")))
            }
        }
    }
}

fn u_state_terms(
    shape: &SystemShape,
    idx: &[usize],
    sign: i8,
    convention: BasisConvention,
) -> Result<Vec<(f64, ProductState)>> {
    if idx.len() != shape.parties() || idx.iter().zip(shape.dims()).any(|(&i, &d)| i >= d * d) {
        return Err(Error::IndexOutOfRange(format!("multi-index {idx:?} for shape {shape}")));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Usage(format!("u-state sign must be +-1, got {sign}")));
    }
    let active: Vec<usize> = (0..idx.len()).filter(|&k| idx[k] != 0).collect();
    if active.is_empty() {
        return Err(Error::Usage("u-state index must not be all zero".into()));
    }
    check_u_state_convention(shape, idx, convention)?;
    let table = character_table(active.len())?;
    let all: Vec<usize> = (0..active.len()).collect();
    let rows = table.rows_with(table.column_of(&all)?, sign);
    let weight = 1.0 / rows.len() as f64;
    Ok(rows
        .into_iter()
        .map(|r| {
            let x = table.local_signs(r);
            let mut locals = vec![LocalFactor::Mixed; idx.len()];
            for (j, &k) in active.iter().enumerate() {
                locals[k] = LocalFactor::Axis {
                    axis: idx[k],
                    sign: x[j],
                };
            }
            (weight, ProductState { locals })
        })
        .collect())
}

/// Splits `(1/n)(I + sign B_idx)` into `2^(m-1)` equally weighted product
/// states, `m` being the number of active parties. Every local factor is
/// checked to be a valid state.
pub fn u_state_decomposition(
    shape: &SystemShape,
    idx: &[usize],
    sign: i8,
    convention: BasisConvention,
) -> Result<SeparableDecomposition> {
    let mut b = Builder::new(shape, convention);
    for (w, s) in u_state_terms(shape, idx, sign, convention)? {
        b.add(w, s.locals);
    }
    let d = b.finish();
    for t in &d.terms {
        for (f, m) in t.state.locals.iter().zip(t.state.local_matrices(shape, convention)?) {
            let min = m.min_eigenvalue()?;
            if min < -1e-12 {
                return Err(Error::NumericalInconsistency(format!(
                    "local factor {f:?} has eigenvalue {min:e}"
                )));
            }
        }
    }
    Ok(d)
}

/// Component of an even block.
#[derive(Clone, Debug)]
struct BlockComponent {
    idx: Vec<usize>,
    magnitude: f64,
    /// Sign used in the construction; free for zero components.
    sign: i8,
}

/// Fixed local axes on all parties, with signs realized by a character row.
#[derive(Clone, Debug)]
struct BlockPlan {
    axes: Vec<usize>,
    row_signs: [Vec<i8>; 2],
    components: Vec<BlockComponent>,
    /// Sum of the `(len - 1) / 2` smallest magnitudes.
    lessmid: f64,
}

fn even_columns(table: &CharacterTable) -> Vec<usize> {
    table
        .column_labels()
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty() && g.len() % 2 == 0)
        .map(|(c, _)| c)
        .collect()
}

/// Plans the even block on `axes`, or `None` when no product state and its
/// negation reproduce the signs of the nonzero components.
fn plan_block(b: &BlochVector, axes: &[usize]) -> Option<BlockPlan> {
    let table = character_table(axes.len()).ok()?;
    let columns = even_columns(&table);
    let entries: Vec<(Vec<usize>, f64)> = columns
        .iter()
        .map(|&c| {
            let mut idx = vec![0; axes.len()];
            for &k in &table.column_labels()[c] {
                idx[k] = axes[k];
            }
            let v = b.get(&idx);
            (idx, v)
        })
        .collect();
    // Rows with party 0 at +1 cover every reduced expression once; among the
    // compatible ones prefer zero components at +1.
    let mut best: Option<(usize, usize)> = None;
    for r in 0..table.size() / 2 {
        let pattern = table.reduced_expression(r);
        let compatible = columns
            .iter()
            .zip(&entries)
            .all(|(&c, (_, v))| sgn(*v) == 0 || sgn(*v) == pattern[c]);
        if !compatible {
            continue;
        }
        let plus_on_zero = columns
            .iter()
            .zip(&entries)
            .filter(|(&c, (_, v))| sgn(*v) == 0 && pattern[c] == 1)
            .count();
        if best.map_or(true, |(_, score)| plus_on_zero > score) {
            best = Some((r, plus_on_zero));
        }
    }
    let (row, _) = best?;
    let pattern = table.reduced_expression(row);
    let components: Vec<BlockComponent> = columns
        .iter()
        .zip(entries)
        .map(|(&c, (idx, v))| BlockComponent {
            idx,
            magnitude: if sgn(v) == 0 { 0.0 } else { v.abs() },
            sign: pattern[c],
        })
        .collect();
    let mut mags: Vec<f64> = components.iter().map(|c| c.magnitude).collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    let lessmid = mags[..(mags.len() - 1) / 2].iter().sum();
    Some(BlockPlan {
        axes: axes.to_vec(),
        row_signs: [table.local_signs(row), table.local_signs(table.size() - 1 - row)],
        components,
        lessmid,
    })
}

/// Best even block over every axis tuple, ties broken lexicographically.
fn best_block(b: &BlochVector) -> Option<BlockPlan> {
    let lens: Vec<usize> = b.shape().dims().iter().map(|d| d * d - 1).collect();
    let mut axes = vec![1; lens.len()];
    let mut best: Option<BlockPlan> = None;
    loop {
        if let Some(plan) = plan_block(b, &axes) {
            if best.as_ref().map_or(true, |p| plan.lessmid > p.lessmid) {
                best = Some(plan);
            }
        }
        let mut k = lens.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            axes[k] += 1;
            if axes[k] <= lens[k] {
                break;
            }
            axes[k] = 1;
        }
    }
}

/// Heaviest set of at most three tripartite blocks whose axes differ at
/// every party.
fn best_matching(b: &BlochVector) -> Vec<BlockPlan> {
    let lens: Vec<usize> = b.shape().dims().iter().map(|d| d * d - 1).collect();
    let mut candidates = Vec::new();
    for i in 1..=lens[0] {
        for j in 1..=lens[1] {
            for k in 1..=lens[2] {
                if let Some(p) = plan_block(b, &[i, j, k]) {
                    if p.lessmid > 0.0 {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| b.lessmid.total_cmp(&a.lessmid));

    fn disjoint(a: &BlockPlan, b: &BlockPlan) -> bool {
        a.axes.iter().zip(&b.axes).all(|(x, y)| x != y)
    }
    fn search(c: &[BlockPlan], start: usize, chosen: &mut Vec<usize>, sum: f64, best: &mut (f64, Vec<usize>)) {
        if sum > best.0 {
            *best = (sum, chosen.clone());
        }
        if chosen.len() == 3 {
            return;
        }
        for n in start..c.len() {
            if sum + (3 - chosen.len()) as f64 * c[n].lessmid <= best.0 {
                break;
            }
            if chosen.iter().all(|&m| disjoint(&c[m], &c[n])) {
                chosen.push(n);
                search(c, n + 1, chosen, sum + c[n].lessmid, best);
                chosen.pop();
            }
        }
    }
    let mut best = (0.0, Vec::new());
    search(&candidates, 0, &mut Vec::new(), 0.0, &mut best);
    best.1.into_iter().map(|n| candidates[n].clone()).collect()
}

/// Builds the decomposition for the given blocks; all remaining components
/// become u-states and the slack goes to the maximally mixed state.
fn assemble(b: &BlochVector, blocks: &[BlockPlan]) -> Result<SeparableDecomposition> {
    let shape = b.shape();
    let mut builder = Builder::new(shape, b.convention());
    let mut used = std::collections::HashSet::new();
    let mut slack = 1.0;
    for block in blocks {
        if block.lessmid <= 0.0 {
            continue;
        }
        let mut order: Vec<&BlockComponent> = block.components.iter().collect();
        order.sort_by(|x, y| y.magnitude.total_cmp(&x.magnitude));
        let mid = (order.len() - 1) / 2;
        let median = order[mid].magnitude;
        for signs in &block.row_signs {
            let locals = block
                .axes
                .iter()
                .zip(signs)
                .map(|(&axis, &sign)| LocalFactor::Axis { axis, sign })
                .collect();
            builder.add(median / 2.0, locals);
        }
        for (q, c) in order.iter().enumerate() {
            used.insert(c.idx.clone());
            if q < mid {
                builder.add_u_state(c.magnitude - median, &c.idx, c.sign)?;
            } else if q > mid {
                builder.add_u_state(median - c.magnitude, &c.idx, -c.sign)?;
            }
        }
        slack += 2.0 * block.lessmid;
    }
    for (idx, v) in b.nonzero() {
        slack -= v.abs();
        if !used.contains(&idx.0) {
            builder.add_u_state(v.abs(), &idx.0, if v > 0.0 { 1 } else { -1 })?;
        }
    }
    if slack < -DECISION_TOL {
        return Err(Error::NumericalInconsistency(format!("negative identity weight {slack:e}")));
    }
    builder.add_mixed(slack.max(0.0));
    Ok(builder.finish())
}

fn require_qubits(b: &BlochVector, parties: Option<usize>, what: &str) -> Result<()> {
    let s = b.shape();
    if !s.is_all_qubits() || parties.is_some_and(|n| n != s.parties()) {
        let want = parties.map_or("qubit".to_string(), |n| format!("{n}-qubit"));
        return Err(Error::UnsupportedShape(format!("{what} needs a {want} shape, got {s}")));
    }
    Ok(())
}

/// Turns a bound comparison into a certification, building and verifying
/// the decomposition when the bound holds.
fn certify(
    b: &BlochVector,
    name: &str,
    bound: f64,
    blocks: &[BlockPlan],
    mut verdict: CriterionVerdict,
) -> Result<Certification> {
    let lhs = b.l1_norm();
    verdict.lhs = lhs;
    verdict.bound = bound;
    verdict.criterion = name.to_string();
    if lhs > bound + DECISION_TOL {
        verdict.verdict = Verdict::Inconclusive;
        return Ok(Certification {
            verdict,
            decomposition: None,
        });
    }
    let target = from_bloch(b);
    let decomposition = assemble(b, blocks)?;
    let report = verify_decomposition(&decomposition, &target, CERTIFICATE_TOL);
    verdict.detail.insert("terms".into(), decomposition.len() as f64);
    verdict.detail.insert("reconstruction_distance".into(), report.reconstruction_distance);
    if report.passed {
        verdict.verdict = Verdict::SeparableCertified;
        Ok(Certification {
            verdict,
            decomposition: Some(decomposition),
        })
    } else {
        verdict.verdict = Verdict::Inconclusive;
        verdict.detail.insert("verification_failed".into(), 1.0);
        Ok(Certification {
            verdict,
            decomposition: None,
        })
    }
}

fn blank(name: &str) -> CriterionVerdict {
    CriterionVerdict::new(name, Verdict::Inconclusive, 0.0, 0.0)
}

/// `||rho||_1 <= 1` on an all-qubit shape.
pub fn theorem3(b: &BlochVector) -> Result<Certification> {
    require_qubits(b, None, "theorem3")?;
    certify(&b.relabel(BasisConvention::Tilde), "theorem3", 1.0, &[], blank("theorem3"))
}

fn block_verdict(name: &str, plans: &[BlockPlan]) -> CriterionVerdict {
    let mut v = blank(name);
    let lessmid: f64 = plans.iter().map(|p| p.lessmid).sum();
    v.detail.insert("lessmid".into(), lessmid);
    v.indices = plans.iter().filter(|p| p.lessmid > 0.0).map(|p| p.axes.clone()).collect();
    v
}

/// Three qubits: `||rho||_1 <= 1 + 2 min(|rho_0jk|, |rho_i0k|, |rho_ij0|)`
/// for the best sign-compatible `(i, j, k)`.
pub fn theorem4(b: &BlochVector) -> Result<Certification> {
    require_qubits(b, Some(3), "theorem4")?;
    let b = b.relabel(BasisConvention::Tilde);
    let plan: Vec<BlockPlan> = best_block(&b).into_iter().collect();
    let v = block_verdict("theorem4", &plan);
    let bound = 1.0 + 2.0 * v.detail["lessmid"];
    certify(&b, "theorem4", bound, &plan, v)
}

/// Three qubits: up to three blocks with pairwise distinct axes at every
/// party, bound `1 + 2 sum_t min(...)`.
pub fn theorem5(b: &BlochVector) -> Result<Certification> {
    require_qubits(b, Some(3), "theorem5")?;
    let b = b.relabel(BasisConvention::Tilde);
    let plans = best_matching(&b);
    let v = block_verdict("theorem5", &plans);
    let bound = 1.0 + 2.0 * v.detail["lessmid"];
    certify(&b, "theorem5", bound, &plans, v)
}

/// Four qubits: `||rho||_1 <= 1 + 2 lessmid` over the seven pair and
/// four-body components of the best `(i, j, k, l)`.
pub fn theorem6(b: &BlochVector) -> Result<Certification> {
    require_qubits(b, Some(4), "theorem6")?;
    let b = b.relabel(BasisConvention::Tilde);
    let plan: Vec<BlockPlan> = best_block(&b).into_iter().collect();
    let v = block_verdict("theorem6", &plan);
    let bound = 1.0 + 2.0 * v.detail["lessmid"];
    certify(&b, "theorem6", bound, &plan, v)
}

/// CHECK-basis analogue for arbitrary local dimensions. Part 1 is the
/// 1-norm ball; for three parties the block (part 2) and matching (part 3)
/// refinements are also evaluated and the largest bound is used.
pub fn theorem7(b: &BlochVector) -> Result<Certification> {
    if b.convention() != BasisConvention::Check {
        return Err(Error::UnsupportedConvention(format!(
            "theorem7 needs CHECK components, got {}",
            b.convention()
        )));
    }
    let mut best: (f64, usize, Vec<BlockPlan>) = (0.0, 1, Vec::new());
    if b.shape().parties() == 3 {
        if let Some(p) = best_block(b) {
            if p.lessmid > best.0 {
                best = (p.lessmid, 2, vec![p]);
            }
        }
        let m = best_matching(b);
        let total: f64 = m.iter().map(|p| p.lessmid).sum();
        if total > best.0 {
            best = (total, 3, m);
        }
    }
    let mut v = block_verdict("theorem7", &best.2);
    v.detail.insert("part".into(), best.1 as f64);
    certify(b, "theorem7", 1.0 + 2.0 * best.0, &best.2, v)
}

/// The separable state with Bloch support on every even-size product of the
/// chosen local axes, and its two-state decomposition.
pub fn ghz_compatible_state(n: usize, axes: &[usize]) -> Result<(DensityMatrix, SeparableDecomposition)> {
    if n < 2 {
        return Err(Error::ParameterRange {
            name: "N".into(),
            value: n as f64,
            range: ">= 2".into(),
        });
    }
    if axes.len() != n || axes.iter().any(|&a| !(1..=3).contains(&a)) {
        return Err(Error::Usage(format!("need {n} axes in 1..=3, got {axes:?}")));
    }
    let shape = SystemShape::qubits(n)?;
    let mut builder = Builder::new(&shape, BasisConvention::Tilde);
    for sign in [1i8, -1] {
        builder.add(
            0.5,
            axes.iter().map(|&axis| LocalFactor::Axis { axis, sign }).collect(),
        );
    }
    let d = builder.finish();
    let rho = validate_density(d.expand()?, &shape, 1e-12)?;
    Ok((rho, d))
}
