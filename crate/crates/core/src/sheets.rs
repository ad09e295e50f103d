//! Sheet-level classification: Jordan types of slice points, the
//! negation-symmetry condition on torus points, dimension formulas, rigid
//! and Dixmier tests, and the splitting of `S_G ∩ p` into K-sheets.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::ab_diagram::{enumerate_admissible, rigidify, ABDiagram, Label};
use crate::epsilon::{slice_contains, EpsilonMap};
use crate::error::{Error, Result};
use crate::gl_setup::{build_triple, TorusElement};
use crate::involution::{build, build_aii, PairType};
use crate::linalg::rational::to_fraction_string;
use crate::linalg::Rational;
use crate::partition::Partition;

/// `m_i(t, c)`: for each block, how often each value occurs on its diagonal.
pub type Multiplicities = Vec<BTreeMap<Rational, usize>>;

pub fn block_multiplicities(blocks: &[Vec<Rational>]) -> Multiplicities {
    blocks
        .iter()
        .map(|vals| {
            let mut m = BTreeMap::new();
            for v in vals {
                *m.entry(v.clone()).or_insert(0) += 1;
            }
            m
        })
        .collect()
}

pub fn multiplicities(lambda: &Partition, t: &TorusElement) -> Result<Multiplicities> {
    Ok(block_multiplicities(&t.block_values(lambda)?))
}

/// `m_i(t, c) = m_i(t, −c)` for every block `i` and every `c`.
pub fn satisfies_mitc(lambda: &Partition, t: &TorusElement) -> Result<bool> {
    Ok(multiplicities(lambda, t)?
        .iter()
        .all(|m| m.iter().all(|(c, k)| m.get(&-c) == Some(k))))
}

/// Jordan type of `e + t`: semisimple part and Jordan blocks per eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanType {
    pub semisimple_spectrum: BTreeMap<Rational, usize>,
    pub nilpotent_partition: Partition,
    /// Jordan block sizes attached to each eigenvalue, largest first.
    pub blocks: BTreeMap<Rational, Vec<usize>>,
}

impl JordanType {
    /// From per-eigenvalue block sizes, e.g. the output of
    /// [`crate::linalg::jordan_structure`].
    pub fn from_blocks(mut blocks: BTreeMap<Rational, Vec<usize>>) -> Result<Self> {
        blocks.retain(|_, b| !b.is_empty());
        let mut all: Vec<usize> = Vec::new();
        for b in blocks.values_mut() {
            b.sort_unstable_by(|x, y| y.cmp(x));
            all.extend(b.iter().copied());
        }
        all.sort_unstable_by(|x, y| y.cmp(x));
        let semisimple_spectrum = blocks.iter().map(|(c, b)| (c.clone(), b.iter().sum())).collect();
        Ok(JordanType { semisimple_spectrum, nilpotent_partition: Partition::new(all)?, blocks })
    }
}

impl Serialize for JordanType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct ByEigenvalue<'a, V>(&'a BTreeMap<Rational, V>);
        impl<V: Serialize> Serialize for ByEigenvalue<'_, V> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (c, v) in self.0 {
                    m.serialize_entry(&to_fraction_string(c), v)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("semisimple_spectrum", &ByEigenvalue(&self.semisimple_spectrum))?;
        m.serialize_entry("nilpotent_partition", &self.nilpotent_partition)?;
        m.serialize_entry("blocks", &ByEigenvalue(&self.blocks))?;
        m.end()
    }
}

/// Reads the Jordan type of `e + t` off the multiplicities: each block
/// contributes one Jordan block of size `m_i(t, c)` per value `c`.
pub fn jordan_type_on_slice(lambda: &Partition, t: &TorusElement) -> Result<JordanType> {
    let mut blocks: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for m in multiplicities(lambda, t)? {
        for (c, k) in m {
            blocks.entry(c).or_default().push(k);
        }
    }
    JordanType::from_blocks(blocks)
}

fn check_pair(lambda: &Partition, pair: PairType) -> Result<()> {
    if pair == PairType::AII {
        build_aii(lambda)?;
    }
    Ok(())
}

/// Dimension of the part of the slice that lies in `p`: `λ_1` for AI/AII,
/// `Σ ⌊(λ_i − λ_{i+1})/2⌋` for AIII.
pub fn slice_p_dimension(lambda: &Partition, pair: PairType) -> Result<usize> {
    check_pair(lambda, pair)?;
    Ok(match pair {
        PairType::AI | PairType::AII => lambda.largest(),
        PairType::AIII => lambda.gaps().iter().map(|g| g / 2).sum(),
    })
}

/// `dim (S_G ∩ p) = dim K.e + slice_p_dimension`.
pub fn intersection_dimension(lambda: &Partition, pair: PairType) -> Result<usize> {
    Ok(lambda.dim_k_orbit() + slice_p_dimension(lambda, pair)?)
}

/// AI/AII: always. AIII: at most one odd gap.
pub fn is_dixmier(lambda: &Partition, pair: PairType) -> Result<bool> {
    check_pair(lambda, pair)?;
    Ok(match pair {
        PairType::AI | PairType::AII => true,
        PairType::AIII => lambda.gaps().iter().filter(|g| *g % 2 == 1).count() <= 1,
    })
}

/// AI/AII: only the zero orbit. AIII: every gap at most one.
pub fn is_rigid_orbit(lambda: &Partition, pair: PairType) -> Result<bool> {
    check_pair(lambda, pair)?;
    Ok(match pair {
        PairType::AI | PairType::AII => lambda.largest() == 1,
        PairType::AIII => lambda.gaps().iter().all(|&g| g <= 1),
    })
}

/// One K-sheet: the orbits (ab-diagrams) sharing a rigidified diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheetComponent {
    pub rigidified: ABDiagram,
    pub orbits: Vec<ABDiagram>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SheetDims {
    pub dim_g_orbit: usize,
    pub dim_k_orbit: usize,
    pub dim_slice_p: usize,
    pub dim_intersection: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SheetFlags {
    pub dixmier: bool,
    pub rigid_orbits: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheetReport {
    pub lambda: Partition,
    pub pair: PairType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    /// Irreducible components of `S_G ∩ p`. For AI/AII the intersection is
    /// irreducible and this holds a single entry without diagrams.
    pub components: Vec<SheetComponent>,
    pub dims: SheetDims,
    pub flags: SheetFlags,
}

impl SheetReport {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_orbits(&self) -> usize {
        self.components.iter().map(|c| c.orbits.len()).sum()
    }
}

pub fn dims(lambda: &Partition, pair: PairType) -> Result<SheetDims> {
    Ok(SheetDims {
        dim_g_orbit: lambda.dim_g_orbit(),
        dim_k_orbit: lambda.dim_k_orbit(),
        dim_slice_p: slice_p_dimension(lambda, pair)?,
        dim_intersection: intersection_dimension(lambda, pair)?,
    })
}

fn flags(lambda: &Partition, pair: PairType) -> Result<SheetFlags> {
    Ok(SheetFlags { dixmier: is_dixmier(lambda, pair)?, rigid_orbits: is_rigid_orbit(lambda, pair)? })
}

/// AIII: groups the admissible diagrams of shape `λ` by rigidified diagram.
pub fn k_sheet_components(lambda: &Partition, na: usize, nb: usize) -> Result<SheetReport> {
    if na + nb != lambda.size() {
        return Err(Error::Precondition(format!(
            "signature ({na},{nb}) does not add up to N = {}",
            lambda.size()
        )));
    }
    let mut groups: BTreeMap<ABDiagram, Vec<ABDiagram>> = BTreeMap::new();
    for d in enumerate_admissible(lambda, na, nb) {
        groups.entry(rigidify(&d)).or_default().push(d);
    }
    let mut components: Vec<SheetComponent> =
        groups.into_iter().map(|(rigidified, orbits)| SheetComponent { rigidified, orbits }).collect();
    components.sort_by(|x, y| x.orbits.cmp(&y.orbits));
    Ok(SheetReport {
        lambda: lambda.clone(),
        pair: PairType::AIII,
        signature: Some((na, nb)),
        components,
        dims: dims(lambda, PairType::AIII)?,
        flags: flags(lambda, PairType::AIII)?,
    })
}

/// AI/AII counterpart of [`k_sheet_components`]: one component.
pub fn bilinear_sheet_report(lambda: &Partition, pair: PairType) -> Result<SheetReport> {
    if pair == PairType::AIII {
        return Err(Error::Precondition("use k_sheet_components for AIII".into()));
    }
    Ok(SheetReport {
        lambda: lambda.clone(),
        pair,
        signature: None,
        components: vec![SheetComponent { rigidified: ABDiagram::empty(), orbits: Vec::new() }],
        dims: dims(lambda, pair)?,
        flags: flags(lambda, pair)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceMembership {
    pub in_slice: bool,
    /// AI/AII: always; AIII: exactly when `t` satisfies the symmetry condition.
    pub expected_in_p: bool,
    pub observed_in_p: bool,
}

impl SliceMembership {
    pub fn agrees(&self) -> bool {
        self.in_slice && self.expected_in_p == self.observed_in_p
    }
}

/// Computes `ε(e + t)` and compares `p`-membership with the prediction.
pub fn verify_slice_membership(
    lambda: &Partition,
    pair: PairType,
    phi: Option<&[Label]>,
    t: &TorusElement,
) -> Result<SliceMembership> {
    let triple = build_triple(lambda);
    let map = EpsilonMap::new(&triple)?;
    verify_with(&map, pair, phi, t)
}

/// As [`verify_slice_membership`], reusing a prepared ε-map.
pub fn verify_with(map: &EpsilonMap, pair: PairType, phi: Option<&[Label]>, t: &TorusElement) -> Result<SliceMembership> {
    let triple = map.triple();
    let lambda = &triple.lambda;
    let inv = build(pair, lambda, phi)?;
    let x = map.apply_torus(t)?;
    let expected_in_p = match pair {
        PairType::AI | PairType::AII => true,
        PairType::AIII => satisfies_mitc(lambda, t)?,
    };
    Ok(SliceMembership {
        in_slice: slice_contains(triple, &x)?,
        expected_in_p,
        observed_in_p: (&x + &inv.theta_apply(&x)?).is_zero(),
    })
}
