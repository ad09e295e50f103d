//! ab-pictures and ab-diagrams: Young diagrams whose rows alternate between
//! the labels `a` and `b`, taken up to permutation of rows of equal length.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::involution::{Involution, PairType};
use crate::linalg::{in_span, kernel_basis, RatMatrix, Rational, Vector};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::A => 'a',
            Label::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Result<Label> {
        match c {
            'a' => Ok(Label::A),
            'b' => Ok(Label::B),
            _ => Err(Error::Parse(format!("label must be 'a' or 'b', got {c:?}"))),
        }
    }

    /// A labelling `Φ` written as a string, e.g. `"aab"`.
    pub fn parse_phi(s: &str) -> Result<Vec<Label>> {
        s.trim().chars().map(Label::from_char).collect()
    }

    pub fn phi_string(phi: &[Label]) -> String {
        phi.iter().map(|l| l.as_char()).collect()
    }
}

fn alternating(start: Label, len: usize) -> String {
    let mut out = String::with_capacity(len);
    let mut l = start;
    for _ in 0..len {
        out.push(l.as_char());
        l = l.flip();
    }
    out
}

/// An ab-diagram, stored as its canonical picture: rows sorted by length
/// descending, then lexicographically (`a < b`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ABDiagram {
    rows: Vec<String>,
}

impl ABDiagram {
    pub fn empty() -> Self {
        ABDiagram::default()
    }

    /// Canonicalizes any picture. Rows must be non-empty and alternate.
    pub fn from_rows<S: Into<String>>(rows: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut rows: Vec<String> = rows.into_iter().map(Into::into).collect();
        for r in &rows {
            if r.is_empty() {
                return Err(Error::Parse("empty row in ab-diagram".into()));
            }
            let labels: Vec<Label> = r.chars().map(Label::from_char).collect::<Result<_>>()?;
            if labels.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!("row {r:?} does not alternate")));
            }
        }
        rows.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
        Ok(ABDiagram { rows })
    }

    fn from_valid_rows(rows: Vec<String>) -> Self {
        ABDiagram::from_rows(rows).expect("rows built alternating")
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(String::len).sum()
    }

    /// Row lengths; `None` for the empty diagram.
    pub fn shape(&self) -> Option<Partition> {
        if self.rows.is_empty() {
            return None;
        }
        Partition::new(self.rows.iter().map(String::len).collect()).ok()
    }

    pub fn count(&self, label: Label) -> usize {
        self.rows.iter().map(|r| r.chars().filter(|&c| c == label.as_char()).count()).sum()
    }

    /// Column lengths, left to right.
    pub fn column_lengths(&self) -> Vec<usize> {
        self.shape().map(|p| p.transpose().parts().to_vec()).unwrap_or_default()
    }

    /// Removes columns `c` and `c + 1` (0-based). Only meaningful when the
    /// two columns have equal length, so that no row ends between them.
    pub fn remove_column_pair(&self, c: usize) -> ABDiagram {
        let rows = self
            .rows
            .iter()
            .filter_map(|r| {
                if r.len() <= c {
                    return Some(r.clone());
                }
                let mut s = r[..c].to_string();
                s.push_str(r.get(c + 2..).unwrap_or(""));
                (!s.is_empty()).then_some(s)
            })
            .collect();
        ABDiagram::from_valid_rows(rows)
    }

    /// Indices `c` where columns `c` and `c + 1` have the same length.
    pub fn equal_column_pairs(&self) -> Vec<usize> {
        let cols = self.column_lengths();
        (0..cols.len().saturating_sub(1)).filter(|&c| cols[c] == cols[c + 1]).collect()
    }
}

impl fmt::Display for ABDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rows.join("/"))
    }
}

/// Rows separated by `/`; the empty string is the empty diagram.
impl FromStr for ABDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ABDiagram::empty());
        }
        ABDiagram::from_rows(s.split('/').map(str::trim))
    }
}

impl Serialize for ABDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ABDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn check_phi(lambda: &Partition, phi: &[Label]) -> Result<()> {
    if phi.len() != lambda.len() {
        return Err(Error::PhiLength { expected: lambda.len(), got: phi.len() });
    }
    Ok(())
}

/// `Δ(Φ)`: row `i` has length `λ_i` and starts with `Φ(i)`.
pub fn delta_of_phi(lambda: &Partition, phi: &[Label]) -> Result<ABDiagram> {
    check_phi(lambda, phi)?;
    let rows = lambda.parts().iter().zip(phi).map(|(&len, &l)| alternating(l, len)).collect();
    Ok(ABDiagram::from_valid_rows(rows))
}

/// `(N_a, N_b)` for the splitting attached to `Φ`.
pub fn signature_of_phi(lambda: &Partition, phi: &[Label]) -> Result<(usize, usize)> {
    check_phi(lambda, phi)?;
    let na: usize = lambda
        .parts()
        .iter()
        .zip(phi)
        .map(|(&len, &l)| if l == Label::A { len.div_ceil(2) } else { len / 2 })
        .sum();
    Ok((na, lambda.size() - na))
}

pub fn is_admissible(d: &ABDiagram, na: usize, nb: usize) -> bool {
    d.count(Label::A) == na && d.count(Label::B) == nb
}

/// Every admissible diagram of shape `λ`, sorted, without repeats.
///
/// A diagram of shape `λ` is fixed by how many rows of each length start
/// with `a`, so the search runs over those counts instead of over `{a,b}^δ`.
pub fn enumerate_admissible(lambda: &Partition, na: usize, nb: usize) -> Vec<ABDiagram> {
    if na + nb != lambda.size() {
        return Vec::new();
    }
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &len in lambda.parts() {
        match groups.last_mut() {
            Some((l, m)) if *l == len => *m += 1,
            _ => groups.push((len, 1)),
        }
    }
    let mut out = Vec::new();
    let mut starts_a = vec![0; groups.len()];
    loop {
        let a_count: usize = groups
            .iter()
            .zip(&starts_a)
            .map(|(&(len, m), &k)| k * len.div_ceil(2) + (m - k) * (len / 2))
            .sum();
        if a_count == na {
            let rows = groups
                .iter()
                .zip(&starts_a)
                .flat_map(|(&(len, m), &k)| {
                    (0..m).map(move |r| alternating(if r < k { Label::A } else { Label::B }, len))
                })
                .collect();
            out.push(ABDiagram::from_valid_rows(rows));
        }
        // odometer over 0..=multiplicity per length
        let mut i = 0;
        loop {
            if i == groups.len() {
                out.sort();
                out.dedup();
                return out;
            }
            if starts_a[i] < groups[i].1 {
                starts_a[i] += 1;
                break;
            }
            starts_a[i] = 0;
            i += 1;
        }
    }
}

/// `Γ^Φ(x)`: the ab-diagram of the K-orbit of a nilpotent `x ∈ p` for an
/// AIII involution.
///
/// Builds a Jordan string basis whose vectors each lie in `V_a` or `V_b`
/// (possible because `x` swaps the two), level by level from the longest
/// strings down, and reads off the label of each vector along each string.
pub fn gamma_of_nilpotent(inv: &Involution, x: &RatMatrix) -> Result<ABDiagram> {
    if inv.kind() != PairType::AIII {
        return Err(Error::Precondition("ab-diagrams need an AIII involution".into()));
    }
    let n = inv.lambda().size();
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch(format!("x must be {n}x{n}")));
    }
    if !x.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    if inv.theta_apply(x)? != -x {
        return Err(Error::Precondition("x is not in p (θ(x) ≠ −x)".into()));
    }
    let mut powers = vec![RatMatrix::identity(n)];
    while !powers.last().expect("non-empty").is_zero() {
        let next = &powers[powers.len() - 1] * x;
        powers.push(next);
    }
    let height = powers.len() - 1;
    let sides = [(Label::A, inv.a_indices()), (Label::B, inv.b_indices())];
    // basis of ker x^k ∩ V_side, embedded in K^N
    let kernel_on = |k: usize, idx: &[usize]| -> Vec<Vector> {
        let cols: Vec<Vector> = idx.iter().map(|&j| powers[k].column(j)).collect();
        let restricted = if idx.is_empty() { RatMatrix::zeros(n, 0) } else { RatMatrix::from_columns(n, &cols).expect("columns of length n") };
        kernel_basis(&restricted)
            .into_iter()
            .map(|v| {
                let mut full = vec![Rational::default(); n];
                for (c, &j) in v.into_iter().zip(idx) {
                    full[j] = c;
                }
                full
            })
            .collect()
    };
    let label_of = |v: &Vector| -> Label {
        if inv.b_indices().iter().all(|&j| num_traits::Zero::is_zero(&v[j])) {
            Label::A
        } else {
            Label::B
        }
    };
    // (generator, its label, string length)
    let mut generators: Vec<(Vector, Label, usize)> = Vec::new();
    for k in (1..=height).rev() {
        let mut span: Vec<Vector> = sides.iter().flat_map(|(_, idx)| kernel_on(k - 1, idx)).collect();
        for (g, _, len) in &generators {
            span.push(powers[len - k].mul_vec(g));
        }
        for (_, idx) in &sides {
            for cand in kernel_on(k, idx) {
                if !in_span(&span, &cand) {
                    generators.push((cand.clone(), label_of(&cand), k));
                    span.push(cand);
                }
            }
        }
    }
    let total: usize = generators.iter().map(|(_, _, len)| len).sum();
    if total != n {
        return Err(Error::Inconsistency(format!("Jordan strings span {total} vectors, expected {n}")));
    }
    let rows = generators.iter().map(|(_, l, len)| alternating(*l, *len)).collect();
    Ok(ABDiagram::from_valid_rows(rows))
}

/// Deletes the leftmost pair of adjacent equal-length columns until none
/// is left.
pub fn rigidify(d: &ABDiagram) -> ABDiagram {
    let mut cur = d.clone();
    while let Some(&c) = cur.equal_column_pairs().first() {
        cur = cur.remove_column_pair(c);
    }
    cur
}

/// Every ab-diagram of shape `λ`, regardless of signature.
pub fn all_diagrams_of_shape(lambda: &Partition) -> Vec<ABDiagram> {
    let n = lambda.size();
    let set: BTreeSet<ABDiagram> = (0..=n).flat_map(|na| enumerate_admissible(lambda, na, n - na)).collect();
    set.into_iter().collect()
}
