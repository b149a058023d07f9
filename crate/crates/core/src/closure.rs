//! Dynamical Lie algebra closure.
//!
//! String mode works on sets of Pauli words: for anticommuting `p, q` the
//! commutator `[ip, iq]` is a real multiple of `i pq`, so the real span of
//! `{i w}` over the fixpoint set is the generated algebra and its dimension is
//! the set size. General mode tracks an orthonormal real basis of Hermitian
//! Pauli sums and adds the residual of every `i[A, B]` that leaves the span.
//!
//! Both modes process work in rounds: each round pairs the words added in the
//! previous round with everything already present (and with earlier members of
//! the same round), so every unordered pair is examined exactly once.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::PauliSum;
use crate::pauli::{check_qubits, PauliWord};

pub const DEFAULT_GENERAL_TOLERANCE: f64 = 1e-9;

/// Dimension-consistent name of a closure; not a certificate of isomorphism type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureLabel {
    #[serde(rename = "so(2n)")]
    So2n,
    #[serde(rename = "so(2n+1)")]
    So2nPlus1,
    #[serde(rename = "su(2^n)")]
    Su2n,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for ClosureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureLabel::So2n => "so(2n)",
            ClosureLabel::So2nPlus1 => "so(2n+1)",
            ClosureLabel::Su2n => "su(2^n)",
            ClosureLabel::Other => "other",
        })
    }
}

/// Picks the label whose dimension formula matches. `su(2^n)` takes precedence
/// at `n = 1`, where `(2n+1)n = 4^n - 1 = 3`.
pub fn classify_dimension(n: usize, dim: usize) -> ClosureLabel {
    let n = n as u128;
    let dim = dim as u128;
    let su = 4u128.checked_pow(n as u32).map(|p| p - 1);
    if su == Some(dim) {
        ClosureLabel::Su2n
    } else if (2 * n + 1) * n == dim {
        ClosureLabel::So2nPlus1
    } else if (2 * n * n).checked_sub(n) == Some(dim) {
        ClosureLabel::So2n
    } else {
        ClosureLabel::Other
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub n: usize,
    pub dimension: usize,
    pub label: ClosureLabel,
    /// Sorted basis words; absent for general-mode runs, which only track rank.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<PauliWord>>,
    pub rounds: usize,
    pub pairs_processed: usize,
}

/// Closes a set of Pauli words under commutation.
pub fn closure_strings(n: usize, generators: &[PauliWord]) -> Result<ClosureReport> {
    check_qubits(n)?;
    if generators.is_empty() {
        return Err(Error::Precondition(
            "at least one generator is required".into(),
        ));
    }
    for g in generators {
        if g.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: g.n(),
            });
        }
        if g.is_identity() {
            return Err(Error::Precondition(
                "the identity word cannot be a generator".into(),
            ));
        }
    }

    let mut members: BTreeSet<PauliWord> = BTreeSet::new();
    let mut ordered: Vec<PauliWord> = Vec::new();
    let mut frontier: Vec<PauliWord> = generators
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rounds = 0;
    let mut pairs = 0;

    while !frontier.is_empty() {
        rounds += 1;
        let old = ordered.len();
        members.extend(frontier.iter().copied());
        ordered.extend(frontier.iter().copied());
        let mut fresh = BTreeSet::new();
        for (offset, p) in frontier.iter().enumerate() {
            for q in &ordered[..old + offset] {
                pairs += 1;
                if !p.commutes_with(q)? {
                    let (_, w) = p.mul_unchecked(q);
                    if !members.contains(&w) {
                        fresh.insert(w);
                    }
                }
            }
        }
        frontier = fresh.into_iter().collect();
    }

    let basis: Vec<PauliWord> = members.into_iter().collect();
    debug_assert!(basis.iter().all(|w| !w.is_identity()));
    Ok(ClosureReport {
        n,
        dimension: basis.len(),
        label: classify_dimension(n, basis.len()),
        basis: Some(basis),
        rounds,
        pairs_processed: pairs,
    })
}

/// Orthonormal real span of Hermitian Pauli sums.
struct Span {
    basis: Vec<PauliSum>,
    tol: f64,
}

impl Span {
    /// Classical Gram-Schmidt applied twice. Returns the normalized residual
    /// when its norm exceeds the tolerance.
    fn residual(&self, v: &PauliSum) -> Result<Option<PauliSum>> {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let overlap = b.real_inner(&r);
                if overlap != 0.0 {
                    r = r.sub(&b.scale(Complex64::new(overlap, 0.0)))?;
                }
            }
        }
        let norm = r.norm();
        if norm > self.tol {
            Ok(Some(r.scale(Complex64::new(1.0 / norm, 0.0))))
        } else {
            Ok(None)
        }
    }
}

/// Rank-tracked closure of Hermitian Pauli sums.
///
/// Identity components are dropped: the identity is central and only adds a
/// global phase, so the result is the closure inside `su(2^n)`.
pub fn closure_general(n: usize, generators: &[PauliSum], tol: f64) -> Result<ClosureReport> {
    check_qubits(n)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if generators.is_empty() {
        return Err(Error::Precondition(
            "at least one generator is required".into(),
        ));
    }
    for (idx, g) in generators.iter().enumerate() {
        if g.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: g.n(),
            });
        }
        if g.is_empty() {
            return Err(Error::Precondition(format!("generator {idx} is zero")));
        }
        if !g.is_hermitian() {
            return Err(Error::NotHermitian(format!("generator {idx}")));
        }
    }

    let mut span = Span {
        basis: Vec::new(),
        tol,
    };
    for g in generators {
        if let Some(r) = span.residual(&g.without_identity())? {
            span.basis.push(r);
        }
    }
    // Each round pairs basis[start..end] with everything preceding it.
    let i = Complex64::new(0.0, 1.0);
    let mut rounds = 0;
    let mut pairs = 0;
    let mut start = 0;
    while start < span.basis.len() {
        rounds += 1;
        let end = span.basis.len();
        for a in start..end {
            for b in 0..a {
                pairs += 1;
                let c = span.basis[a].commutator(&span.basis[b])?.scale(i);
                if c.is_empty() {
                    continue;
                }
                if let Some(r) = span.residual(&c)? {
                    span.basis.push(r);
                }
            }
        }
        start = end;
    }

    let dimension = span.basis.len();
    Ok(ClosureReport {
        n,
        dimension,
        label: classify_dimension(n, dimension),
        basis: None,
        rounds,
        pairs_processed: pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Universality {
    pub universal: bool,
    pub report: ClosureReport,
}

/// Universal iff the closure has dimension `4^n - 1`.
pub fn check_universality(n: usize, generators: &[PauliWord]) -> Result<Universality> {
    let report = closure_strings(n, generators)?;
    Ok(Universality {
        universal: report.label == ClosureLabel::Su2n,
        report,
    })
}
