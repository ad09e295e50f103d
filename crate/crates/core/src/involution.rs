//! Involutions θ of types AI, AII and AIII on `gl_N` for which the
//! standard triple of `λ` is normal (`e, f ∈ p`, `h ∈ k`).
//!
//! AI and AII come from a nondegenerate form with Gram matrix `S`
//! (symmetric, resp. alternating) via `θ(x) = −S⁻¹ xᵀ S`. AIII comes from a
//! splitting `V = V_a ⊕ V_b` via `θ(x) = J x J`, `J = 1_{V_a} − 1_{V_b}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ab_diagram::{signature_of_phi, Label};
use crate::error::{Error, Result};
use crate::gl_setup::{basis, SL2Triple};
use crate::linalg::{bracket, int, inverse, RatMatrix, Rational};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairType {
    AI,
    AII,
    AIII,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairType::AI => "AI",
            PairType::AII => "AII",
            PairType::AIII => "AIII",
        })
    }
}

impl FromStr for PairType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AI" => Ok(PairType::AI),
            "AII" => Ok(PairType::AII),
            "AIII" => Ok(PairType::AIII),
            _ => Err(Error::Parse(format!("unknown pair type {s:?}; expected AI, AII or AIII"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Form {
    Bilinear { gram: RatMatrix, inv_gram: RatMatrix },
    Split { phi: Vec<Label>, in_a: Vec<bool>, a_indices: Vec<usize>, b_indices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    kind: PairType,
    lambda: Partition,
    form: Form,
}

/// Symmetric form pairing `v_j` with `v_{λ_i+1−j}` inside each block.
pub fn build_ai(lambda: &Partition) -> Involution {
    let n = lambda.size();
    let mut gram = RatMatrix::zeros(n, n);
    let idx = basis(lambda);
    for u in &idx {
        for v in &idx {
            if u.block == v.block && u.position + v.position + 2 == lambda.part(u.block) + 1 {
                gram[(u.flat, v.flat)] = int(1);
            }
        }
    }
    bilinear(PairType::AI, lambda, gram)
}

/// Symplectic form pairing block `2i−1` with block `2i`; needs
/// `λ_{2i−1} = λ_{2i}` for every `i`.
pub fn build_aii(lambda: &Partition) -> Result<Involution> {
    if !lambda.len().is_multiple_of(2) || lambda.parts().chunks(2).any(|c| c[0] != c[1]) {
        return Err(Error::PairingViolation(format!(
            "{lambda} has an unpaired part; AII needs λ_(2i-1) = λ_(2i) for all i"
        )));
    }
    let n = lambda.size();
    let mut gram = RatMatrix::zeros(n, n);
    let idx = basis(lambda);
    for u in &idx {
        for v in &idx {
            if u.position + v.position + 2 != lambda.part(u.block) + 1 {
                continue;
            }
            // 0-based blocks: (2m, 2m+1) are the 1-based pairs (2m+1, 2m+2)
            if u.block % 2 == 0 && v.block == u.block + 1 {
                gram[(u.flat, v.flat)] = int(1);
            } else if v.block % 2 == 0 && u.block == v.block + 1 {
                gram[(u.flat, v.flat)] = int(-1);
            }
        }
    }
    Ok(bilinear(PairType::AII, lambda, gram))
}

fn bilinear(kind: PairType, lambda: &Partition, gram: RatMatrix) -> Involution {
    let inv_gram = inverse(&gram).expect("square").expect("Gram matrix is a signed permutation");
    Involution { kind, lambda: lambda.clone(), form: Form::Bilinear { gram, inv_gram } }
}

/// `v_j` of block `i` lies in `V_a` iff `Φ(i) = a` and `λ_i − j` is even,
/// or `Φ(i) = b` and `λ_i − j` is odd.
pub fn build_aiii(lambda: &Partition, phi: &[Label]) -> Result<Involution> {
    if phi.len() != lambda.len() {
        return Err(Error::PhiLength { expected: lambda.len(), got: phi.len() });
    }
    let in_a: Vec<bool> = basis(lambda)
        .iter()
        .map(|b| {
            let even = (lambda.part(b.block) - (b.position + 1)).is_multiple_of(2);
            (phi[b.block] == Label::A) == even
        })
        .collect();
    let a_indices = (0..in_a.len()).filter(|&i| in_a[i]).collect();
    let b_indices = (0..in_a.len()).filter(|&i| !in_a[i]).collect();
    Ok(Involution {
        kind: PairType::AIII,
        lambda: lambda.clone(),
        form: Form::Split { phi: phi.to_vec(), in_a, a_indices, b_indices },
    })
}

/// Dispatch on the pair type; `phi` is only read for AIII.
pub fn build(kind: PairType, lambda: &Partition, phi: Option<&[Label]>) -> Result<Involution> {
    match kind {
        PairType::AI => Ok(build_ai(lambda)),
        PairType::AII => build_aii(lambda),
        PairType::AIII => {
            let phi = phi.ok_or_else(|| Error::Precondition("AIII needs a labelling Φ".into()))?;
            build_aiii(lambda, phi)
        }
    }
}

impl Involution {
    pub fn kind(&self) -> PairType {
        self.kind
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn size(&self) -> usize {
        self.lambda.size()
    }

    pub fn gram(&self) -> Option<&RatMatrix> {
        match &self.form {
            Form::Bilinear { gram, .. } => Some(gram),
            Form::Split { .. } => None,
        }
    }

    pub fn phi(&self) -> Option<&[Label]> {
        match &self.form {
            Form::Split { phi, .. } => Some(phi),
            Form::Bilinear { .. } => None,
        }
    }

    /// Flat indices spanning `V_a`; empty unless AIII.
    pub fn a_indices(&self) -> &[usize] {
        match &self.form {
            Form::Split { a_indices, .. } => a_indices,
            Form::Bilinear { .. } => &[],
        }
    }

    pub fn b_indices(&self) -> &[usize] {
        match &self.form {
            Form::Split { b_indices, .. } => b_indices,
            Form::Bilinear { .. } => &[],
        }
    }

    /// `(N_a, N_b)` for AIII.
    pub fn signature(&self) -> Option<(usize, usize)> {
        match &self.form {
            Form::Split { a_indices, b_indices, .. } => Some((a_indices.len(), b_indices.len())),
            Form::Bilinear { .. } => None,
        }
    }

    pub fn theta_apply(&self, x: &RatMatrix) -> Result<RatMatrix> {
        let n = self.size();
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!("θ acts on {n}x{n} matrices")));
        }
        Ok(match &self.form {
            Form::Bilinear { gram, inv_gram } => -&(&(inv_gram * &x.transpose()) * gram),
            Form::Split { in_a, .. } => {
                let mut out = x.clone();
                for r in 0..n {
                    for c in 0..n {
                        if in_a[r] != in_a[c] {
                            out[(r, c)] = -&x[(r, c)];
                        }
                    }
                }
                out
            }
        })
    }

    /// `(x + θx)/2`.
    pub fn k_part(&self, x: &RatMatrix) -> Result<RatMatrix> {
        Ok((x + &self.theta_apply(x)?).scale(&Rational::new(1.into(), 2.into())))
    }

    /// `(x − θx)/2`.
    pub fn p_part(&self, x: &RatMatrix) -> Result<RatMatrix> {
        Ok((x - &self.theta_apply(x)?).scale(&Rational::new(1.into(), 2.into())))
    }

    pub fn in_p(&self, x: &RatMatrix) -> Result<bool> {
        Ok(self.theta_apply(x)? == -x)
    }

    pub fn in_k(&self, x: &RatMatrix) -> Result<bool> {
        Ok(&self.theta_apply(x)? == x)
    }

    /// `e, f ∈ p` and `h ∈ k`.
    pub fn is_normal_triple(&self, triple: &SL2Triple) -> Result<bool> {
        Ok(self.in_p(&triple.e)? && self.in_p(&triple.f)? && self.in_k(&triple.h)?)
    }

    /// `dim k`: `N(N−1)/2` for AI, `N(N+1)/2` for AII, `N_a² + N_b²` for AIII.
    pub fn dim_k(&self) -> usize {
        let n = self.size();
        match self.kind {
            PairType::AI => n * (n - 1) / 2,
            PairType::AII => n * (n + 1) / 2,
            PairType::AIII => {
                let (a, b) = self.signature().expect("AIII has a signature");
                a * a + b * b
            }
        }
    }

    pub fn dim_p(&self) -> usize {
        self.size() * self.size() - self.dim_k()
    }

    /// The signature `Φ` would give, for reporting.
    pub fn phi_signature(&self) -> Option<(usize, usize)> {
        self.phi().map(|phi| signature_of_phi(&self.lambda, phi).expect("length checked at build"))
    }
}

/// `[θx, θy] = θ[x, y]`.
pub fn is_automorphism_on(inv: &Involution, x: &RatMatrix, y: &RatMatrix) -> Result<bool> {
    let lhs = bracket(&inv.theta_apply(x)?, &inv.theta_apply(y)?)?;
    Ok(lhs == inv.theta_apply(&bracket(x, y)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_setup::{block_offsets, build_triple};
    use crate::linalg::{frac, rank};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn phi(s: &str) -> Vec<Label> {
        Label::parse_phi(s).unwrap()
    }

    /// `dim k` from the linear map `x ↦ x − θx` on the matrix units.
    fn dim_k_by_rank(inv: &Involution) -> usize {
        let n = inv.size();
        let cols: Vec<Vec<Rational>> = (0..n * n)
            .map(|i| {
                let mut u = RatMatrix::zeros(n, n);
                u[(i / n, i % n)] = int(1);
                (&u - &inv.theta_apply(&u).unwrap()).entries().to_vec()
            })
            .collect();
        n * n - rank(&RatMatrix::from_columns(n * n, &cols).unwrap())
    }

    fn all_phis(delta: usize) -> Vec<Vec<Label>> {
        (0..1u32 << delta)
            .map(|m| (0..delta).map(|i| if m >> i & 1 == 0 { Label::A } else { Label::B }).collect())
            .collect()
    }

    fn all_involutions(lambda: &Partition) -> Vec<Involution> {
        let mut out = vec![build_ai(lambda)];
        out.extend(build_aii(lambda).ok());
        out.extend(all_phis(lambda.len()).iter().map(|ph| build_aiii(lambda, ph).unwrap()));
        out
    }

    #[test]
    fn ai_examples() {
        let l = p("2");
        let inv = build_ai(&l);
        let t = build_triple(&l);
        assert_eq!(inv.theta_apply(&t.e).unwrap(), -&t.e);
        for lambda in Partition::all_up_to(6) {
            let inv = build_ai(&lambda);
            let t = build_triple(&lambda);
            let n = lambda.size();
            assert!(inv.in_k(&t.h).unwrap());
            assert_eq!(inv.theta_apply(&RatMatrix::identity(n)).unwrap(), -&RatMatrix::identity(n));
        }
    }

    #[test]
    fn aii_examples() {
        let l = p("2,2");
        let inv = build_aii(&l).unwrap();
        let t = build_triple(&l);
        assert!(inv.in_p(&t.e).unwrap());
        assert!(inv.in_k(&t.h).unwrap());
        assert!(matches!(build_aii(&p("3,2")), Err(Error::PairingViolation(_))));
        assert!(matches!(build_aii(&p("2,2,1")), Err(Error::PairingViolation(_))));
        let inv = build_aii(&p("1,1")).unwrap();
        assert_eq!(inv.gram().unwrap(), &RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]));
        assert_eq!(dim_k_by_rank(&inv), 3);
    }

    #[test]
    fn aiii_examples() {
        let l = p("4,3,1");
        let inv = build_aiii(&l, &phi("aab")).unwrap();
        // v_2, v_4 of block 1 and v_1, v_3 of block 2 (1-based)
        let off = block_offsets(&l);
        assert_eq!(inv.a_indices(), &[off[0] + 1, off[0] + 3, off[1], off[1] + 2]);
        assert_eq!(inv.signature(), Some((4, 4)));
        assert_eq!(inv.phi_signature(), Some((4, 4)));
        let inv = build_aiii(&p("1"), &phi("a")).unwrap();
        assert_eq!(inv.signature(), Some((1, 0)));
        assert_eq!(inv.dim_k(), 1);
        assert_eq!(inv.dim_p(), 0);
        assert!(matches!(build_aiii(&l, &phi("ab")), Err(Error::PhiLength { expected: 3, got: 2 })));
    }

    #[test]
    fn standard_triple_is_normal() {
        for lambda in Partition::all_up_to(8) {
            let t = build_triple(&lambda);
            for inv in all_involutions(&lambda) {
                assert!(inv.is_normal_triple(&t).unwrap(), "{} {lambda}", inv.kind());
            }
            let swapped = SL2Triple { e: t.f.clone(), h: -&t.h, f: t.e.clone(), lambda: lambda.clone() };
            assert!(build_ai(&lambda).is_normal_triple(&swapped).unwrap());
        }
    }

    #[test]
    fn dimensions_match_rank_computation() {
        for lambda in Partition::all_up_to(5) {
            for inv in all_involutions(&lambda) {
                assert_eq!(dim_k_by_rank(&inv), inv.dim_k(), "{} {lambda}", inv.kind());
                assert_eq!(inv.dim_k() + inv.dim_p(), lambda.size().pow(2));
            }
        }
    }

    #[test]
    fn aiii_preserves_blocks() {
        // each block q_i is stable, with k ∩ q_i of dimension ⌊λ_i/2⌋² + ⌈λ_i/2⌉²
        for lambda in Partition::all_up_to(7) {
            let off = block_offsets(&lambda);
            for ph in all_phis(lambda.len()) {
                let inv = build_aiii(&lambda, &ph).unwrap();
                for (i, &len) in lambda.parts().iter().enumerate() {
                    let in_block: Vec<usize> = (off[i]..off[i] + len).collect();
                    let a = in_block.iter().filter(|j| inv.a_indices().contains(j)).count();
                    assert_eq!(a * a + (len - a) * (len - a), (len / 2).pow(2) + len.div_ceil(2).pow(2));
                }
            }
        }
    }

    #[test]
    fn parse_pair_type() {
        assert_eq!("aiii".parse::<PairType>().unwrap(), PairType::AIII);
        assert_eq!(PairType::AII.to_string(), "AII");
        assert!("BI".parse::<PairType>().is_err());
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec((-4i64..5, 1i64..4), n * n).prop_map(move |v| {
            let rows = v.chunks(n).map(|r| r.iter().map(|&(a, b)| frac(a, b)).collect()).collect();
            RatMatrix::from_rows(rows).unwrap()
        })
    }

    fn involution_strategy() -> impl Strategy<Value = Involution> {
        proptest::sample::select(Partition::all_up_to(6)).prop_flat_map(|lambda| {
            let invs = all_involutions(&lambda);
            proptest::sample::select(invs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn theta_is_an_involutive_automorphism(
            (inv, x, y) in involution_strategy().prop_flat_map(|inv| {
                let n = inv.size();
                (Just(inv), small_matrix(n), small_matrix(n))
            })
        ) {
            let tx = inv.theta_apply(&x).unwrap();
            prop_assert_eq!(inv.theta_apply(&tx).unwrap(), x.clone());
            prop_assert!(is_automorphism_on(&inv, &x, &y).unwrap());
            let (k, pp) = (inv.k_part(&x).unwrap(), inv.p_part(&x).unwrap());
            prop_assert_eq!(&k + &pp, x.clone());
            let py = inv.p_part(&y).unwrap();
            let br = bracket(&pp, &py).unwrap();
            prop_assert_eq!(inv.k_part(&br).unwrap(), br);
        }
    }
}
