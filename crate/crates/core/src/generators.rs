//! Named generator families of the Jordan-Wigner chain.
//!
//! - `e_{2m}   = Z^m X I^(n-m-1)`, `e_{2m+1} = Z^m Y I^(n-m-1)`
//! - `d_{2m}   = I^m Z I^(n-m-1)`, `d_{2m+1} = I^m X X I^(n-m-2)`
//! - third-order gate `Y(2) = I Y I^(n-2)`, proportional to `e_0 e_1 e_3`
//! - chirality `Z^n`, the phase-normalized product of all `e_k`
//!
//! Control buses: I = `Z(k+1) = d_{2k}`, II = `X(1) = e_0` plus
//! `X(k+1)X(k+2) = d_{2k+1}`, III = `Y(2)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{check_qubits, Letter, PauliString, PauliWord, Phase};

fn e_word(n: usize, k: usize) -> PauliWord {
    let m = k / 2;
    let prefix = (1u64 << m) - 1;
    let site = 1u64 << m;
    let (x, z) = if k.is_multiple_of(2) {
        (site, prefix)
    } else {
        (site, prefix | site)
    };
    PauliWord::from_masks(n, x, z).expect("mask within n qubits")
}

/// Jordan-Wigner generator `e_k`, `0 <= k < 2n`.
pub fn build_e(n: usize, k: usize) -> Result<PauliString> {
    check_qubits(n)?;
    if k >= 2 * n {
        return Err(Error::IndexOutOfRange {
            what: "e generator",
            index: k,
            limit: 2 * n,
        });
    }
    Ok(e_word(n, k).into())
}

/// Even generator `d_k`, `0 <= k <= 2n - 2`, in its explicit tensor form.
pub fn build_d(n: usize, k: usize) -> Result<PauliString> {
    check_qubits(n)?;
    if k + 1 >= 2 * n {
        return Err(Error::IndexOutOfRange {
            what: "d generator",
            index: k,
            limit: 2 * n - 1,
        });
    }
    let m = k / 2;
    let word = if k.is_multiple_of(2) {
        PauliWord::single(n, m, Letter::Z)?
    } else {
        PauliWord::from_masks(n, 0b11 << m, 0)?
    };
    Ok(word.into())
}

/// Hermitian third-order gate `I Y I...`; equals `e_0 e_1 e_3` up to a unit phase.
pub fn build_third_order(n: usize) -> Result<PauliString> {
    check_qubits(n)?;
    if n < 2 {
        return Err(Error::Precondition(
            "the third-order generator needs at least 2 qubits".into(),
        ));
    }
    let gate: PauliString = PauliWord::single(n, 1, Letter::Y)?.into();
    let product = build_e(n, 0)?.mul(&build_e(n, 1)?.mul(&build_e(n, 3)?)?)?;
    debug_assert_eq!(product.word(), gate.word());
    Ok(gate)
}

/// Chirality element: the product of all `e_k` with its phase dropped.
///
/// It squares to the identity and anticommutes with every `e_k`.
pub fn build_chirality(n: usize) -> Result<PauliString> {
    check_qubits(n)?;
    let mut product = PauliString::identity(n)?;
    for k in 0..2 * n {
        product = product.mul(&build_e(n, k)?)?;
    }
    Ok(product.with_phase(Phase::ONE))
}

/// Ordered product `e_{k1} e_{k2} ...` over the subset in increasing index order.
pub fn subset_product<It>(n: usize, subset: It) -> Result<PauliString>
where
    It: IntoIterator<Item = usize>,
{
    check_qubits(n)?;
    let indices: BTreeSet<usize> = subset.into_iter().collect();
    let mut product = PauliString::identity(n)?;
    for k in indices {
        product = product.mul(&build_e(n, k)?)?;
    }
    Ok(product)
}

/// Reference to a generator, resolved against a chain length.
///
/// Text forms: `e3`, `d0`, `third`, `chirality`, or a Pauli literal like `XY`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorRef {
    E(usize),
    D(usize),
    Third,
    Chirality,
    Raw(PauliString),
}

impl GeneratorRef {
    pub fn resolve(&self, n: usize) -> Result<PauliString> {
        match self {
            GeneratorRef::E(k) => build_e(n, *k),
            GeneratorRef::D(k) => build_d(n, *k),
            GeneratorRef::Third => build_third_order(n),
            GeneratorRef::Chirality => build_chirality(n),
            GeneratorRef::Raw(p) => {
                if p.n() != n {
                    return Err(Error::DimensionMismatch {
                        left: n,
                        right: p.n(),
                    });
                }
                Ok(*p)
            }
        }
    }
}

impl fmt::Display for GeneratorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorRef::E(k) => write!(f, "e{k}"),
            GeneratorRef::D(k) => write!(f, "d{k}"),
            GeneratorRef::Third => f.write_str("third"),
            GeneratorRef::Chirality => f.write_str("chirality"),
            GeneratorRef::Raw(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for GeneratorRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "third" => return Ok(GeneratorRef::Third),
            "chirality" => return Ok(GeneratorRef::Chirality),
            _ => {}
        }
        for (prefix, make) in [
            ('e', GeneratorRef::E as fn(usize) -> GeneratorRef),
            ('d', GeneratorRef::D),
        ] {
            if let Some(digits) = s.strip_prefix(prefix) {
                return digits.parse().map(make).map_err(|_| Error::Parse {
                    position: 1,
                    message: format!("expected a generator index after '{prefix}'"),
                });
            }
        }
        s.parse().map(GeneratorRef::Raw)
    }
}

impl Serialize for GeneratorRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BusId {
    I,
    II,
    III,
}

impl fmt::Display for BusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BusId::I => "I",
            BusId::II => "II",
            BusId::III => "III",
        })
    }
}

impl FromStr for BusId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" => Ok(BusId::I),
            "II" | "2" => Ok(BusId::II),
            "III" | "3" => Ok(BusId::III),
            other => Err(Error::Parse {
                position: 0,
                message: format!("unknown bus {other:?}, expected I, II or III"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateBus {
    pub id: BusId,
    pub members: Vec<GeneratorRef>,
}

impl GateBus {
    pub fn strings(&self, n: usize) -> Result<Vec<PauliString>> {
        self.members.iter().map(|g| g.resolve(n)).collect()
    }

    pub fn words(&self, n: usize) -> Result<Vec<PauliWord>> {
        Ok(self.strings(n)?.into_iter().map(|p| p.word()).collect())
    }
}

/// Builds a control bus. Bus II on a single qubit is just `[e_0]`.
pub fn build_bus(n: usize, id: BusId) -> Result<GateBus> {
    check_qubits(n)?;
    let members = match id {
        BusId::I => (0..n).map(|k| GeneratorRef::D(2 * k)).collect(),
        BusId::II => std::iter::once(GeneratorRef::E(0))
            .chain((0..n - 1).map(|k| GeneratorRef::D(2 * k + 1)))
            .collect(),
        BusId::III => {
            if n < 2 {
                return Err(Error::Precondition(
                    "bus III needs at least 2 qubits".into(),
                ));
            }
            vec![GeneratorRef::Third]
        }
    };
    Ok(GateBus { id, members })
}
