//! Exact secrecy and uniformity checks.
//!
//! Every bit in a run is an XOR of independent uniform basis bits. For such
//! linear functions the mutual information between the key `K` and the
//! transcript `V` is `rank(K) + rank(V) - rank(K, V)` bits, and `K` is
//! uniform iff its forms are linearly independent.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::gf2::{self, BitRow};
use crate::model::BitId;
use crate::{Error, Rational, Result};

/// Largest basis accepted by [`brute_force_mutual_information`].
pub const MAX_MI_ORACLE_BASIS: usize = 20;

/// XOR of a set of basis bits. Stored sorted without repeats.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinearForm {
    ids: Vec<BitId>,
}

impl LinearForm {
    /// Repeated ids cancel in pairs.
    pub fn from_ids(ids: impl IntoIterator<Item = BitId>) -> Self {
        let mut ids: Vec<BitId> = ids.into_iter().collect();
        ids.sort_unstable();
        let mut out: Vec<BitId> = Vec::with_capacity(ids.len());
        for id in ids {
            if out.last() == Some(&id) {
                out.pop();
            } else {
                out.push(id);
            }
        }
        LinearForm { ids: out }
    }

    pub fn single(id: BitId) -> Self {
        LinearForm { ids: alloc::vec![id] }
    }

    pub fn ids(&self) -> &[BitId] {
        &self.ids
    }

    pub fn is_zero(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn xor(&self, other: &LinearForm) -> LinearForm {
        LinearForm::from_ids(self.ids.iter().chain(&other.ids).copied())
    }

    /// Panics if an id is outside `values`.
    pub fn evaluate(&self, values: &[bool]) -> bool {
        self.ids.iter().fold(false, |acc, &id| acc ^ values[id])
    }

    pub fn to_row(&self, width: usize) -> Result<BitRow> {
        if let Some(&bad) = self.ids.iter().find(|&&id| id >= width) {
            return Err(Error::UnknownBasisLabel(bad));
        }
        Ok(BitRow::from_columns(width, self.ids.iter().copied()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecrecyReport {
    pub key_len: usize,
    pub rank_key: usize,
    pub rank_transcript: usize,
    pub rank_joint: usize,
    /// `I(K; V)` in bits.
    pub leaked_bits: usize,
    pub uniform: bool,
}

impl SecrecyReport {
    pub fn is_secret(&self) -> bool {
        self.leaked_bits == 0 && self.uniform
    }
}

fn rows(forms: &[LinearForm], width: usize) -> Result<Vec<BitRow>> {
    forms.iter().map(|f| f.to_row(width)).collect()
}

/// Ranks of the key, the transcript and both together over a basis of `basis_len` bits.
pub fn verify_independence(
    key_forms: &[LinearForm],
    transcript_forms: &[LinearForm],
    basis_len: usize,
) -> Result<SecrecyReport> {
    let key_rows = rows(key_forms, basis_len)?;
    let transcript_rows = rows(transcript_forms, basis_len)?;
    let rank_key = gf2::rank(basis_len, key_rows.iter().cloned());
    let rank_transcript = gf2::rank(basis_len, transcript_rows.iter().cloned());
    let rank_joint = gf2::rank(basis_len, key_rows.into_iter().chain(transcript_rows));
    Ok(SecrecyReport {
        key_len: key_forms.len(),
        rank_key,
        rank_transcript,
        rank_joint,
        leaked_bits: rank_key + rank_transcript - rank_joint,
        uniform: rank_key == key_forms.len(),
    })
}

/// True iff the key forms are linearly independent.
pub fn verify_uniformity(key_forms: &[LinearForm]) -> bool {
    let width = key_forms
        .iter()
        .filter_map(|f| f.ids().last())
        .max()
        .map_or(0, |&id| id + 1);
    let rows = key_forms
        .iter()
        .map(|f| f.to_row(width).expect("width covers every id"));
    gf2::rank(width, rows) == key_forms.len()
}

fn exact_log2(x: u128) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

/// `I(K; V)` in bits by enumerating all `2^basis_size` basis assignments.
///
/// The joint histogram of (key value, transcript value) is built directly.
/// Histograms of linear images of uniform bits are uniform on their
/// support, so every log-ratio is a whole power of two and the sum is an
/// exact rational.
pub fn brute_force_mutual_information(
    key_forms: &[LinearForm],
    transcript_forms: &[LinearForm],
    basis_size: usize,
) -> Result<Rational> {
    if basis_size > MAX_MI_ORACLE_BASIS {
        return Err(Error::InstanceTooLarge {
            what: "mutual information enumeration",
            limit: MAX_MI_ORACLE_BASIS as u64,
            actual: basis_size as u64,
        });
    }
    for form in key_forms.iter().chain(transcript_forms) {
        form.to_row(basis_size)?;
    }
    let total: u128 = 1 << basis_size;
    let mut joint: BTreeMap<(Vec<bool>, Vec<bool>), u128> = BTreeMap::new();
    let mut values = alloc::vec![false; basis_size];
    for assignment in 0..total {
        for (b, v) in values.iter_mut().enumerate() {
            *v = assignment >> b & 1 == 1;
        }
        let k: Vec<bool> = key_forms.iter().map(|f| f.evaluate(&values)).collect();
        let v: Vec<bool> = transcript_forms.iter().map(|f| f.evaluate(&values)).collect();
        *joint.entry((k, v)).or_insert(0) += 1;
    }
    let mut key_marginal: BTreeMap<&Vec<bool>, u128> = BTreeMap::new();
    let mut transcript_marginal: BTreeMap<&Vec<bool>, u128> = BTreeMap::new();
    for ((k, v), &c) in &joint {
        *key_marginal.entry(k).or_insert(0) += c;
        *transcript_marginal.entry(v).or_insert(0) += c;
    }
    // I = sum c/N * log2(c * N / (ck * cv))
    let mut numer: u128 = 0;
    for ((k, v), &c) in &joint {
        let (ck, cv) = (key_marginal[k], transcript_marginal[v]);
        let up = exact_log2(c * total).expect("dyadic histogram");
        let down = exact_log2(ck * cv).expect("dyadic histogram");
        numer += c * u128::from(up - down);
    }
    let value = num_rational::Ratio::new(numer, total);
    Ok(Rational::new(
        u64::try_from(*value.numer()).expect("fits"),
        u64::try_from(*value.denom()).expect("fits"),
    ))
}
