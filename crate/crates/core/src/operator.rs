//! Complex-linear combinations of Pauli words, fermionic ladder operators and
//! the canonical anticommutation checks.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators::build_e;
use crate::pauli::{check_qubits, PauliString, PauliWord};

/// Coefficient components below this magnitude are dropped.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `sum_w c_w * w` over phase-free words, iterated in lexicographic word order.
///
/// Real and imaginary parts of every coefficient are pruned independently at
/// [`PRUNE_TOLERANCE`], so a sum built from Hermitian pieces stays exactly real.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

fn prune(c: Complex64) -> Option<Complex64> {
    let re = if c.re.abs() < PRUNE_TOLERANCE {
        0.0
    } else {
        c.re
    };
    let im = if c.im.abs() < PRUNE_TOLERANCE {
        0.0
    } else {
        c.im
    };
    if re == 0.0 && im == 0.0 {
        None
    } else {
        Some(Complex64::new(re, im))
    }
}

impl PauliSum {
    pub fn zero(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(PauliSum {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_string(p: PauliString) -> Self {
        let mut sum = PauliSum {
            n: p.n(),
            terms: BTreeMap::new(),
        };
        sum.accumulate(p.word(), p.phase().to_complex());
        sum
    }

    pub fn from_word(w: PauliWord) -> Self {
        PauliSum::from_string(w.into())
    }

    pub fn from_terms<T>(n: usize, terms: T) -> Result<Self>
    where
        T: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        let mut sum = PauliSum::zero(n)?;
        for (w, c) in terms {
            if w.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: w.n(),
                });
            }
            sum.accumulate_raw(w, c);
        }
        sum.prune_all();
        Ok(sum)
    }

    fn accumulate_raw(&mut self, w: PauliWord, c: Complex64) {
        *self.terms.entry(w).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn accumulate(&mut self, w: PauliWord, c: Complex64) {
        self.accumulate_raw(w, c);
        if let Some(v) = self.terms.get(&w).copied() {
            match prune(v) {
                Some(v) => {
                    self.terms.insert(w, v);
                }
                None => {
                    self.terms.remove(&w);
                }
            }
        }
    }

    fn prune_all(&mut self) {
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .filter_map(|(w, c)| prune(c).map(|c| (w, c)))
            .collect();
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &PauliWord> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &PauliWord) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    fn check_same_n(&self, other: &PauliSum) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate_raw(*w, *c);
        }
        out.prune_all();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> PauliSum {
        let mut out = PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(w, v)| (*w, v * c)).collect(),
        };
        out.prune_all();
        out
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = PauliSum {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (phase, w) = wa.mul_unchecked(wb);
                out.accumulate_raw(w, ca * cb * phase.to_complex());
            }
        }
        out.prune_all();
        Ok(out)
    }

    /// Words are self-adjoint, so only the coefficients are conjugated.
    pub fn dagger(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (*w, c.conj())).collect(),
        }
    }

    /// `ab - ba`. Only anticommuting word pairs contribute.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = PauliSum {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if !wa.commutes_with(wb)? {
                    let (phase, w) = wa.mul_unchecked(wb);
                    out.accumulate_raw(w, 2.0 * ca * cb * phase.to_complex());
                }
            }
        }
        out.prune_all();
        Ok(out)
    }

    /// `ab + ba`. Only commuting word pairs contribute.
    pub fn anticommutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same_n(other)?;
        let mut out = PauliSum {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if wa.commutes_with(wb)? {
                    let (phase, w) = wa.mul_unchecked(wb);
                    out.accumulate_raw(w, 2.0 * ca * cb * phase.to_complex());
                }
            }
        }
        out.prune_all();
        Ok(out)
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    /// Frobenius norm in the word basis, i.e. `sqrt(tr(A^dag A) / 2^n)`.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Re sum_w conj(a_w) b_w`, the normalized real trace form.
    pub fn real_inner(&self, other: &PauliSum) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .terms
            .iter()
            .filter_map(|(w, a)| large.terms.get(w).map(|b| (a.conj() * b).re))
            .sum()
    }

    pub fn without_identity(&self) -> PauliSum {
        let mut out = self.clone();
        out.terms.retain(|w, _| !w.is_identity());
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: PauliWord,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SumRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SumRepr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRepr {
                    word: *w,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SumRepr::deserialize(deserializer)?;
        PauliSum::from_terms(
            repr.n,
            repr.terms
                .into_iter()
                .map(|t| (t.word, Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

fn check_mode(n: usize, k: usize) -> Result<()> {
    check_qubits(n)?;
    if k >= n {
        return Err(Error::IndexOutOfRange {
            what: "fermionic mode",
            index: k,
            limit: n,
        });
    }
    Ok(())
}

fn ladder(e_even: PauliString, e_odd: PauliString, sign: f64) -> Result<PauliSum> {
    let even = PauliSum::from_string(e_even);
    let odd = PauliSum::from_string(e_odd).scale(I * sign);
    Ok(even.add(&odd)?.scale(Complex64::new(0.5, 0.0)))
}

/// `a_k = (e_{2k} + i e_{2k+1}) / 2`.
pub fn build_annihilation(n: usize, k: usize) -> Result<PauliSum> {
    check_mode(n, k)?;
    ladder(build_e(n, 2 * k)?, build_e(n, 2 * k + 1)?, 1.0)
}

/// `a_k^dag = (e_{2k} - i e_{2k+1}) / 2`.
pub fn build_creation(n: usize, k: usize) -> Result<PauliSum> {
    check_mode(n, k)?;
    ladder(build_e(n, 2 * k)?, build_e(n, 2 * k + 1)?, -1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BilinearKind {
    /// `a_j a_k^dag + a_k a_j^dag`
    #[serde(rename = "hopping")]
    Hopping,
    /// `a_j a_k + a_k^dag a_j^dag`
    #[serde(rename = "pairing")]
    Pairing,
}

pub fn build_bilinear(n: usize, j: usize, k: usize, kind: BilinearKind) -> Result<PauliSum> {
    check_mode(n, j)?;
    check_mode(n, k)?;
    let aj = build_annihilation(n, j)?;
    let ak = build_annihilation(n, k)?;
    let aj_dag = aj.dagger();
    let ak_dag = ak.dagger();
    let sum = match kind {
        BilinearKind::Hopping => aj.mul(&ak_dag)?.add(&ak.mul(&aj_dag)?)?,
        BilinearKind::Pairing => aj.mul(&ak)?.add(&ak_dag.mul(&aj_dag)?)?,
    };
    debug_assert!(sum.is_hermitian());
    Ok(sum)
}

/// Which of the three anticommutation families a failure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CarRelation {
    /// `{a_k, a_j} = 0`
    #[serde(rename = "aa")]
    AnnihilationPair,
    /// `{a_k^dag, a_j^dag} = 0`
    #[serde(rename = "adag_adag")]
    CreationPair,
    /// `{a_k, a_j^dag} = delta_kj`
    #[serde(rename = "a_adag")]
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarFailure {
    pub relation: CarRelation,
    pub k: usize,
    pub j: usize,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarReport {
    pub n: usize,
    pub max_deviation: f64,
    pub failures: Vec<CarFailure>,
}

impl CarReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.max_deviation == 0.0
    }
}

/// Checks the anticommutation relations of the ladder operators built from
/// the standard Jordan-Wigner generators.
pub fn verify_car(n: usize) -> Result<CarReport> {
    check_qubits(n)?;
    let e = (0..2 * n)
        .map(|k| build_e(n, k))
        .collect::<Result<Vec<_>>>()?;
    verify_car_with(n, &e)
}

/// Same check over an arbitrary list of `2n` generators, ordered as
/// `(e_0, e_1, ..., e_{2n-1})`; used for negative controls.
pub fn verify_car_with(n: usize, generators: &[PauliString]) -> Result<CarReport> {
    check_qubits(n)?;
    if generators.len() != 2 * n {
        return Err(Error::Precondition(format!(
            "expected {} generators, got {}",
            2 * n,
            generators.len()
        )));
    }
    if let Some(g) = generators.iter().find(|g| g.n() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: g.n(),
        });
    }
    let lower = (0..n)
        .map(|k| ladder(generators[2 * k], generators[2 * k + 1], 1.0))
        .collect::<Result<Vec<_>>>()?;
    let raise: Vec<PauliSum> = (0..n)
        .map(|k| ladder(generators[2 * k], generators[2 * k + 1], -1.0))
        .collect::<Result<_>>()?;
    let zero = PauliSum::zero(n)?;
    let unit = PauliSum::from_string(PauliString::identity(n)?);

    let mut report = CarReport {
        n,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for k in 0..n {
        for j in 0..n {
            let delta = if k == j { &unit } else { &zero };
            let checks = [
                (
                    CarRelation::AnnihilationPair,
                    lower[k].anticommutator(&lower[j])?,
                    &zero,
                ),
                (
                    CarRelation::CreationPair,
                    raise[k].anticommutator(&raise[j])?,
                    &zero,
                ),
                (
                    CarRelation::Mixed,
                    lower[k].anticommutator(&raise[j])?,
                    delta,
                ),
            ];
            for (relation, lhs, rhs) in checks {
                let deviation = lhs.sub(rhs)?.max_abs();
                report.max_deviation = report.max_deviation.max(deviation);
                if deviation > 0.0 {
                    report.failures.push(CarFailure {
                        relation,
                        k,
                        j,
                        deviation,
                    });
                }
            }
        }
    }
    Ok(report)
}
