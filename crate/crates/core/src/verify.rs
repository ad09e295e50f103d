//! Seeded randomized property suite, shared by the `verify` subcommand and
//! the test harnesses. The same seed and size bound give the same report.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ab_diagram::{delta_of_phi, gamma_of_nilpotent, rigidify, Label};
use crate::epsilon::{same_rank_profile, slice_contains, EpsilonMap};
use crate::error::Result;
use crate::gl_setup::{build_triple, c_basis, centralizer_of_f, grading_component, TorusElement};
use crate::involution::{build_ai, build_aii, build_aiii, Involution, PairType};
use crate::linalg::{frac, int, inverse, jordan_structure, pow_i, RatMatrix, Rational};
use crate::partition::Partition;
use crate::sheets::{
    intersection_dimension, is_rigid_orbit, jordan_type_on_slice, k_sheet_components, satisfies_mitc,
    slice_p_dimension, verify_with, JordanType,
};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 3`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if r != int(0) {
            return r;
        }
    }
}

pub fn random_torus<R: Rng>(rng: &mut R, len: usize) -> TorusElement {
    TorusElement::new((0..len).map(|_| random_rational(rng)).collect())
}

/// Integer combination of the `c(i, j)` vectors.
pub fn random_c_combination<R: Rng>(rng: &mut R, lambda: &Partition) -> TorusElement {
    let mut coords = vec![int(0); lambda.largest()];
    for c in c_basis(lambda) {
        let k = random_rational(rng);
        for (dst, src) in coords.iter_mut().zip(&c.coords) {
            *dst += &k * src;
        }
    }
    TorusElement::new(coords)
}

/// `x_1 = 1`, all other coordinates zero: the first block then has `1`
/// without `−1` among its values.
pub fn mitc_violator(lambda: &Partition) -> TorusElement {
    let mut coords = vec![int(0); lambda.largest()];
    coords[0] = int(1);
    TorusElement::new(coords)
}

pub fn random_phi<R: Rng>(rng: &mut R, len: usize) -> Vec<Label> {
    (0..len).map(|_| if rng.gen_bool(0.5) { Label::A } else { Label::B }).collect()
}

pub fn all_phis(len: usize) -> Vec<Vec<Label>> {
    (0..1u64 << len)
        .map(|m| (0..len).map(|i| if m >> i & 1 == 0 { Label::A } else { Label::B }).collect())
        .collect()
}

/// A random invertible matrix commuting with `J`, i.e. an element of
/// `GL(V_a) × GL(V_b)`.
pub fn random_k_element<R: Rng>(rng: &mut R, inv: &Involution) -> (RatMatrix, RatMatrix) {
    let n = inv.size();
    loop {
        let mut g = RatMatrix::zeros(n, n);
        for side in [inv.a_indices(), inv.b_indices()] {
            for &r in side {
                for &c in side {
                    g[(r, c)] = int(rng.gen_range(-2..=2));
                }
            }
        }
        if let Some(gi) = inverse(&g).expect("square") {
            return (g, gi);
        }
    }
}

/// `grading_component(ε(e + s t) − e, 2j) = s^{1−j} grading_component(ε(e + t) − e, 2j)`
/// for every `j ≤ 0`.
pub fn homogeneity_holds(map: &EpsilonMap, t: &TorusElement, s: &Rational) -> Result<bool> {
    let triple = map.triple();
    let lambda = &triple.lambda;
    let base = &map.apply_torus(t)? - &triple.e;
    let scaled_t = TorusElement::new(t.coords.iter().map(|x| x * s).collect());
    let scaled = &map.apply_torus(&scaled_t)? - &triple.e;
    let lowest = -2 * (lambda.largest() as i64 - 1);
    let mut w = 0;
    while w >= lowest {
        let j = w / 2;
        let lhs = grading_component(&scaled, &triple.h, w)?;
        let rhs = grading_component(&base, &triple.h, w)?.scale(&pow_i(s, 1 - j)?);
        if lhs != rhs {
            return Ok(false);
        }
        w -= 2;
    }
    Ok(true)
}

/// Tally for one named property.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult { name: name.to_string(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(case());
            }
        }
    }

    fn record_result(&mut self, r: Result<bool>, case: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, case),
            Err(e) => self.record(false, || format!("{}: {e}", case())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub max_size: usize,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().map(|c| c.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest `N` swept.
    pub max_size: usize,
    /// Random points per partition and property.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, max_size: 6, samples: 5 }
    }
}

/// Runs every property on every partition of `N ≤ max_size`.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = rng_from_seed(cfg.seed);
    let mut triple_ok = CheckResult::new("triple relations and normality");
    let mut centralizer = CheckResult::new("dim g^f = N^2 - dim G.e");
    let mut landing = CheckResult::new("epsilon lands on the slice, same rank profile");
    let mut homogeneity = CheckResult::new("epsilon homogeneity");
    let mut symmetry = CheckResult::new("epsilon symmetric in eigenvalues, lambda = (N)");
    let mut bilinear = CheckResult::new("AI/AII: theta(epsilon) = -epsilon");
    let mut mitc = CheckResult::new("AIII: epsilon in p iff mitc");
    let mut jordan = CheckResult::new("Jordan type on slice vs rank profile");
    let mut gamma = CheckResult::new("Gamma(e) = Delta(phi), K-conjugation invariant");
    let mut components = CheckResult::new("components and dimensions consistent");

    for lambda in Partition::all_up_to(cfg.max_size) {
        let n = lambda.size();
        let width = lambda.largest();
        let triple = build_triple(&lambda);
        let label = lambda.to_string();

        let mut invs = vec![build_ai(&lambda)];
        invs.extend(build_aii(&lambda).ok());
        let phi = random_phi(&mut rng, lambda.len());
        let aiii = build_aiii(&lambda, &phi).expect("phi has length delta");
        invs.push(aiii.clone());
        let normal = triple.satisfies_relations()
            && invs.iter().all(|inv| inv.is_normal_triple(&triple).unwrap_or(false));
        triple_ok.record(normal, || label.clone());

        if n <= 8 {
            let dim = centralizer_of_f(&triple).len();
            centralizer.record(dim == n * n - lambda.dim_g_orbit(), || label.clone());
        }

        let map = match EpsilonMap::new(&triple) {
            Ok(m) => m,
            Err(e) => {
                landing.record(false, || format!("{label}: {e}"));
                continue;
            }
        };
        for _ in 0..cfg.samples {
            let t = random_torus(&mut rng, width);
            let case = || format!("{label} t={:?}", t.coords.iter().map(ToString::to_string).collect::<Vec<_>>());
            let r = t.to_matrix(&lambda).and_then(|tm| {
                let x = map.apply_torus(&t)?;
                Ok(slice_contains(&triple, &x)? && same_rank_profile(&(&triple.e + &tm), &x)?)
            });
            landing.record_result(r, case);

            let s = random_nonzero_rational(&mut rng);
            homogeneity.record_result(homogeneity_holds(&map, &t, &s), case);

            for inv in invs.iter().filter(|i| i.kind() != PairType::AIII) {
                let r = verify_with(&map, inv.kind(), None, &t).map(|m| m.agrees() && m.observed_in_p);
                bilinear.record_result(r, || format!("{} {}", inv.kind(), case()));
            }

            let c = random_c_combination(&mut rng, &lambda);
            let r = verify_with(&map, PairType::AIII, Some(&phi), &c).map(|m| m.agrees());
            mitc.record_result(r, || format!("{label} phi={} c-combination", Label::phi_string(&phi)));

            let small = TorusElement::new((0..width).map(|_| int(rng.gen_range(-1..=1))).collect());
            let r = small.to_matrix(&lambda).and_then(|tm| {
                let brute = JordanType::from_blocks(jordan_structure(&(&triple.e + &tm))?)?;
                Ok(brute == jordan_type_on_slice(&lambda, &small)?)
            });
            jordan.record_result(r, || format!("{label} {:?}", small.coords));
        }
        let r = verify_with(&map, PairType::AIII, Some(&phi), &mitc_violator(&lambda))
            .map(|m| m.agrees() && !m.observed_in_p);
        mitc.record_result(r, || format!("{label} violator"));

        if lambda.len() == 1 {
            for _ in 0..cfg.samples.min(3) {
                let t = random_torus(&mut rng, width);
                let mut shuffled = t.coords.clone();
                shuffled.shuffle(&mut rng);
                let r = map
                    .apply_torus(&t)
                    .and_then(|x| Ok(x == map.apply_torus(&TorusElement::new(shuffled.clone()))?));
                symmetry.record_result(r, || label.clone());
            }
        }

        let r = (|| {
            let expected = delta_of_phi(&lambda, &phi)?;
            if gamma_of_nilpotent(&aiii, &triple.e)? != expected {
                return Ok(false);
            }
            let (g, gi) = random_k_element(&mut rng, &aiii);
            let moved = &(&g * &triple.e) * &gi;
            Ok(gamma_of_nilpotent(&aiii, &moved)? == expected)
        })();
        gamma.record_result(r, || format!("{label} phi={}", Label::phi_string(&phi)));

        let r = (|| {
            let (na, nb) = aiii.signature().expect("AIII");
            let rep = k_sheet_components(&lambda, na, nb)?;
            let grouped = rep.components.iter().all(|c| c.orbits.iter().all(|d| rigidify(d) == c.rigidified));
            let dims_ok = intersection_dimension(&lambda, PairType::AIII)?
                == lambda.dim_k_orbit() + slice_p_dimension(&lambda, PairType::AIII)?;
            let rigid_ok =
                is_rigid_orbit(&lambda, PairType::AIII)? == (slice_p_dimension(&lambda, PairType::AIII)? == 0);
            let has_e = rep.components.iter().any(|c| c.orbits.contains(&delta_of_phi(&lambda, &phi).expect("checked")));
            Ok(grouped && dims_ok && rigid_ok && has_e && satisfies_mitc(&lambda, &TorusElement::zero(width))?)
        })();
        components.record_result(r, || label.clone());
    }

    VerifyReport {
        seed: cfg.seed,
        max_size: cfg.max_size,
        samples: cfg.samples,
        checks: vec![
            triple_ok,
            centralizer,
            landing,
            homogeneity,
            symmetry,
            bilinear,
            mitc,
            jordan,
            gamma,
            components,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run(&VerifyConfig { seed: 7, max_size: 4, samples: 3 });
        for c in &report.checks {
            assert_eq!(c.failed, 0, "{}: {:?}", c.name, c.failures);
        }
        assert!(report.passed() > 0);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = VerifyConfig { seed: 42, max_size: 3, samples: 2 };
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn violator_breaks_mitc() {
        for lambda in Partition::all_up_to(6) {
            assert!(!satisfies_mitc(&lambda, &mitc_violator(&lambda)).unwrap());
        }
    }
}
