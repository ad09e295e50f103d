//! The polynomial map ε sending `e + z`, with `z` in the non-positive even
//! part of the `ad h` grading, to a conjugate point of the Slodowy slice
//! `e + g^f`.
//!
//! For `w = 0, −2, −4, ...` the weight-`w` component of the current point
//! is split along `g_w = [e, g_{w−2}] ⊕ (g^f ∩ g_w)`; the unique `η ∈ g_{w−2}`
//! with `[e, η]` equal to the first summand is removed by conjugating with
//! `exp(ad η)`. That leaves the weight-`w` component inside `g^f` and only
//! touches weights below `w`, so after the lowest weight the point lies on
//! the slice.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gl_setup::{grading_component, weights_present, SL2Triple, TorusElement};
use crate::linalg::rational::pow_i;
use crate::linalg::{bracket, conjugate_by_exp, inverse, kernel_basis, rank_profile, rational_spectrum, RatMatrix, Rational, Spectrum};

/// `e + z` with `z ∈ ⊕_{i ≤ 0} g(2i, h)`.
#[derive(Clone, Debug)]
pub struct GradedPoint {
    pub triple: SL2Triple,
    pub z: RatMatrix,
}

impl GradedPoint {
    pub fn new(triple: SL2Triple, z: RatMatrix) -> Result<Self> {
        let n = triple.size();
        if z.rows() != n || z.cols() != n {
            return Err(Error::DimensionMismatch(format!("z must be {n}x{n}")));
        }
        let bad: Vec<i64> = weights_present(&z, &triple.h)?
            .into_iter()
            .filter(|w| *w > 0 || w % 2 != 0)
            .collect();
        if !bad.is_empty() {
            return Err(Error::Precondition(format!(
                "z has components of weight {bad:?}; only non-positive even weights are allowed"
            )));
        }
        Ok(GradedPoint { triple, z })
    }

    pub fn from_torus(triple: SL2Triple, t: &TorusElement) -> Result<Self> {
        let z = t.to_matrix(&triple.lambda)?;
        GradedPoint::new(triple, z)
    }
}

/// One weight of the descent: the coordinates of `g_w`, of `g_{w−2}` and the
/// inverse of the change of basis `[ad e|_{g_{w−2}} | basis of g^f ∩ g_w]`.
#[derive(Clone, Debug)]
struct WeightStep {
    target: Vec<(usize, usize)>,
    source: Vec<(usize, usize)>,
    splitter: RatMatrix,
}

/// Precomputed ε for a fixed triple; reusable across many points.
#[derive(Clone, Debug)]
pub struct EpsilonMap {
    triple: SL2Triple,
    steps: Vec<WeightStep>,
}

impl EpsilonMap {
    pub fn new(triple: &SL2Triple) -> Result<Self> {
        let hw = triple.h_weights();
        let n = hw.len();
        let lowest = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| hw[r] - hw[c]).min().unwrap_or(0);
        let cells = |w: i64| -> Vec<(usize, usize)> {
            (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| hw[r] - hw[c] == w).collect()
        };
        let mut steps = Vec::new();
        let mut w = 0;
        while w >= lowest {
            let target = cells(w);
            let source = cells(w - 2);
            let mut columns: Vec<Vec<Rational>> =
                source.iter().map(|&rc| coords_of(&ad_on_unit(&triple.e, rc), &target)).collect();
            // g^f ∩ g_w = kernel of ad f : g_w → g_{w−2}.
            let ad_f_cols: Vec<Vec<Rational>> =
                target.iter().map(|&rc| coords_of(&ad_on_unit(&triple.f, rc), &source)).collect();
            let ad_f = if source.is_empty() {
                RatMatrix::zeros(0, target.len())
            } else {
                RatMatrix::from_columns(source.len(), &ad_f_cols)?
            };
            columns.extend(kernel_basis(&ad_f));
            if columns.len() != target.len() {
                return Err(Error::Inconsistency(format!(
                    "weight {w}: [e, g_{}] and g^f ∩ g_{w} have total dimension {}, expected {}",
                    w - 2,
                    columns.len(),
                    target.len()
                )));
            }
            let splitter = if target.is_empty() {
                RatMatrix::zeros(0, 0)
            } else {
                let m = RatMatrix::from_columns(target.len(), &columns)?;
                inverse(&m)?.ok_or_else(|| {
                    Error::Inconsistency(format!("weight {w}: [e, g_{}] and g^f ∩ g_{w} are not complementary", w - 2))
                })?
            };
            steps.push(WeightStep { target, source, splitter });
            w -= 2;
        }
        Ok(EpsilonMap { triple: triple.clone(), steps })
    }

    pub fn triple(&self) -> &SL2Triple {
        &self.triple
    }

    /// ε(e + z). `z` must lie in the non-positive even graded part.
    pub fn apply(&self, z: &RatMatrix) -> Result<RatMatrix> {
        let pt = GradedPoint::new(self.triple.clone(), z.clone())?;
        let e = &self.triple.e;
        let mut x = e + &pt.z;
        for step in &self.steps {
            if step.source.is_empty() {
                continue;
            }
            let comp: Vec<Rational> = step.target.iter().map(|&(r, c)| x[(r, c)].clone()).collect();
            if comp.iter().all(Zero::is_zero) {
                continue;
            }
            let split = step.splitter.mul_vec(&comp);
            let mut eta = RatMatrix::zeros(x.rows(), x.cols());
            for (k, &(r, c)) in step.source.iter().enumerate() {
                eta[(r, c)] = split[k].clone();
            }
            if eta.is_zero() {
                continue;
            }
            // exp(ad η)(x) has weight-w part comp + [η, e] = comp − [e, η].
            x = conjugate_by_exp(&eta, &x)?;
        }
        if !slice_contains(&self.triple, &x)? {
            return Err(Error::Inconsistency("ε(e + z) left the slice e + g^f".into()));
        }
        Ok(x)
    }

    pub fn apply_torus(&self, t: &TorusElement) -> Result<RatMatrix> {
        self.apply(&t.to_matrix(&self.triple.lambda)?)
    }
}

/// `[x, E_rc]` for the matrix unit `E_rc`.
fn ad_on_unit(x: &RatMatrix, (r, c): (usize, usize)) -> HashMap<(usize, usize), Rational> {
    let n = x.rows();
    let mut out: HashMap<(usize, usize), Rational> = HashMap::new();
    for i in 0..n {
        if !x[(i, r)].is_zero() {
            *out.entry((i, c)).or_insert_with(Rational::zero) += &x[(i, r)];
        }
    }
    for j in 0..n {
        if !x[(c, j)].is_zero() {
            *out.entry((r, j)).or_insert_with(Rational::zero) -= &x[(c, j)];
        }
    }
    out
}

fn coords_of(m: &HashMap<(usize, usize), Rational>, cells: &[(usize, usize)]) -> Vec<Rational> {
    cells.iter().map(|rc| m.get(rc).cloned().unwrap_or_else(Rational::zero)).collect()
}

/// One-shot ε.
pub fn epsilon(pt: &GradedPoint) -> Result<RatMatrix> {
    EpsilonMap::new(&pt.triple)?.apply(&pt.z)
}

/// Membership in the affine slice: `[f, x − e] = 0`.
pub fn slice_contains(triple: &SL2Triple, x: &RatMatrix) -> Result<bool> {
    Ok(bracket(&triple.f, &(x - &triple.e))?.is_zero())
}

/// Conjugacy test for matrices with rational spectrum: same eigenvalues and
/// `rank((· − cI)^k)` agreeing for every eigenvalue `c` and `k ≤ N`.
pub fn same_rank_profile(x: &RatMatrix, y: &RatMatrix) -> Result<bool> {
    if !x.is_square() || x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch("same_rank_profile needs square matrices of one size".into()));
    }
    let (Spectrum::Split(sx), Spectrum::Split(sy)) = (rational_spectrum(x)?, rational_spectrum(y)?) else {
        return Err(Error::NotSplit);
    };
    let eigen: BTreeSet<Rational> = sx.into_keys().chain(sy.into_keys()).collect();
    Ok(eigen.iter().all(|c| rank_profile(x, c) == rank_profile(y, c)))
}

/// The one-parameter rescaling `y ↦ s^{w−2} y` on `g(w, h)`; fixes `e` and
/// preserves `e + g^f`.
pub fn scaling_action(s: &Rational, triple: &SL2Triple, x: &RatMatrix) -> Result<RatMatrix> {
    if s.is_zero() {
        return Err(Error::ZeroScaling);
    }
    let mut out = RatMatrix::zeros(x.rows(), x.cols());
    for w in weights_present(x, &triple.h)? {
        let part = grading_component(x, &triple.h, w)?;
        out = &out + &part.scale(&pow_i(s, w - 2)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_setup::{build_triple, torus_matrix};
    use crate::linalg::{char_poly, frac, int};
    use crate::partition::Partition;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn gl2_closed_form(a: &Rational, b: &Rational) -> RatMatrix {
        let m = (a + b) / int(2);
        let c = (a - b) / int(2);
        RatMatrix::from_rows(vec![vec![m.clone(), int(1)], vec![&c * &c, m]]).unwrap()
    }

    #[test]
    fn gl2_example() {
        let t = build_triple(&p("2"));
        let pt = GradedPoint::new(t, RatMatrix::diagonal(&[int(2), int(0)])).unwrap();
        assert_eq!(epsilon(&pt).unwrap(), RatMatrix::from_i64(&[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn gl2_matches_closed_form() {
        let t = build_triple(&p("2"));
        let map = EpsilonMap::new(&t).unwrap();
        for (a, b) in [(frac(1, 3), frac(-5, 2)), (int(4), int(4)), (int(0), frac(7, 9))] {
            let got = map.apply(&RatMatrix::diagonal(&[a.clone(), b.clone()])).unwrap();
            assert_eq!(got, gl2_closed_form(&a, &b));
        }
    }

    #[test]
    fn zero_maps_to_e() {
        for lambda in Partition::all_up_to(6) {
            let t = build_triple(&lambda);
            let n = t.size();
            let map = EpsilonMap::new(&t).unwrap();
            assert_eq!(map.apply(&RatMatrix::zeros(n, n)).unwrap(), t.e);
        }
    }

    #[test]
    fn two_one_example_lands_on_conjugate_slice_point() {
        let l = p("2,1");
        let t = build_triple(&l);
        let z = torus_matrix(&l, &[int(1), int(-1)]).unwrap();
        let x = epsilon(&GradedPoint::new(t.clone(), z.clone()).unwrap()).unwrap();
        assert!(slice_contains(&t, &x).unwrap());
        assert!(same_rank_profile(&(&t.e + &z), &x).unwrap());
    }

    #[test]
    fn rejects_positive_or_odd_weights() {
        let t = build_triple(&p("2,1"));
        let err = GradedPoint::new(t.clone(), t.e.clone()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        // (0,2) entry links h-weights 1 and 0: odd weight.
        let mut odd = RatMatrix::zeros(3, 3);
        odd[(0, 2)] = int(1);
        assert!(GradedPoint::new(t, odd).is_err());
    }

    #[test]
    fn accepts_negative_graded_input() {
        let t = build_triple(&p("3"));
        let map = EpsilonMap::new(&t).unwrap();
        let mut z = RatMatrix::diagonal(&[int(1), int(2), int(3)]);
        z[(1, 0)] = int(5);
        z[(2, 0)] = frac(1, 2);
        let x = map.apply(&z).unwrap();
        assert!(slice_contains(&t, &x).unwrap());
        // spectrum of e + z is irrational here; compare characteristic polynomials
        assert_eq!(char_poly(&(&t.e + &z)).unwrap(), char_poly(&x).unwrap());
    }

    #[test]
    fn slice_contains_examples() {
        let t = build_triple(&p("2"));
        assert!(slice_contains(&t, &t.e).unwrap());
        let off = &t.e + &RatMatrix::diagonal(&[int(1), int(0)]);
        assert!(!slice_contains(&t, &off).unwrap());
    }

    #[test]
    fn rank_profile_examples() {
        let e = build_triple(&p("2")).e;
        assert!(!same_rank_profile(&e, &RatMatrix::zeros(2, 2)).unwrap());
        let x = RatMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 0], &[0, 0, 3]]);
        let g = RatMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let gi = inverse(&g).unwrap().unwrap();
        assert!(same_rank_profile(&x, &(&(&g * &x) * &gi)).unwrap());
        let rot = RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(same_rank_profile(&rot, &rot), Err(Error::NotSplit));
    }

    #[test]
    fn scaling_examples() {
        let t = build_triple(&p("3,1"));
        for s in [int(2), frac(-1, 3)] {
            assert_eq!(scaling_action(&s, &t, &t.e).unwrap(), t.e);
        }
        let x = RatMatrix::from_i64(&[&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 1, 2, 3], &[4, 5, 6, 7]]);
        assert_eq!(scaling_action(&int(1), &t, &x).unwrap(), x);
        assert_eq!(scaling_action(&int(0), &t, &x), Err(Error::ZeroScaling));
    }

    #[test]
    fn gl2_scaling_of_f_component() {
        // ε(e + s²t) has f-coefficient s⁴((a − b)/2)².
        let t = build_triple(&p("2"));
        let map = EpsilonMap::new(&t).unwrap();
        let (a, b, s) = (int(3), frac(1, 2), frac(2, 3));
        let s2 = &s * &s;
        let x = map.apply(&RatMatrix::diagonal(&[&a * &s2, &b * &s2])).unwrap();
        let c = (&a - &b) / int(2);
        assert_eq!(x[(1, 0)], &s2 * &s2 * &c * &c);
        // and F_s ∘ ε = ε ∘ (t ↦ s^{-2} t)
        let base = map.apply(&RatMatrix::diagonal(&[a.clone(), b.clone()])).unwrap();
        let scaled = scaling_action(&s, &t, &base).unwrap();
        let s_inv2 = s2.recip();
        assert_eq!(scaled, map.apply(&RatMatrix::diagonal(&[&a * &s_inv2, &b * &s_inv2])).unwrap());
        assert!(slice_contains(&t, &scaled).unwrap());
    }
}
