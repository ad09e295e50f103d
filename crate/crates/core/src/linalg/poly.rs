//! Characteristic polynomials and rational spectra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::elim::rank;
use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Univariate polynomial with rational coefficients, lowest degree first,
/// never carrying trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn monic(&self) -> Poly {
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (Poly(Vec::new()), self.clone());
        }
        let shift_max = rem.len() - d.0.len();
        let mut quot = vec![Rational::zero(); shift_max + 1];
        for shift in (0..=shift_max).rev() {
            let c = &rem[shift + d.0.len() - 1] / d.lead();
            if c.is_zero() {
                continue;
            }
            for (k, dc) in d.0.iter().enumerate() {
                rem[shift + k] -= &c * dc;
            }
            quot[shift] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn scaled_to_primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// Monic characteristic polynomial `det(xI - m)`, coefficients lowest
/// degree first (length `n + 1`, last entry 1).
///
/// Reduces to upper Hessenberg form by similarity, then expands with the
/// standard three-term recurrence.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(p) = (col + 1..n).find(|&i| !h[(i, col)].is_zero()) else {
            continue;
        };
        if p != col + 1 {
            swap_rows(&mut h, p, col + 1);
            swap_cols(&mut h, p, col + 1);
        }
        let pivot = h[(col + 1, col)].clone();
        for i in col + 2..n {
            if h[(i, col)].is_zero() {
                continue;
            }
            let u = &h[(i, col)] / &pivot;
            for j in 0..n {
                let v = &u * &h[(col + 1, j)];
                h[(i, j)] -= v;
            }
            for j in 0..n {
                let v = &u * &h[(j, i)];
                h[(j, col + 1)] += v;
            }
        }
    }
    // p[k] = char poly of the leading k×k block.
    let mut p: Vec<Poly> = vec![Poly::new(vec![Rational::one()])];
    for k in 0..n {
        let x_minus = Poly::new(vec![-h[(k, k)].clone(), Rational::one()]);
        let mut next = mul(&x_minus, &p[k]);
        let mut prod = Rational::one();
        for i in (0..k).rev() {
            prod *= &h[(i + 1, i)];
            if prod.is_zero() {
                break;
            }
            let c = &prod * &h[(i, k)];
            if !c.is_zero() {
                next = sub(&next, &p[i].scale(&c));
            }
        }
        p.push(next);
    }
    let mut coeffs = p.pop().expect("recurrence produced no polynomial").0;
    coeffs.resize(n + 1, Rational::zero());
    Ok(coeffs)
}

fn swap_rows(m: &mut RatMatrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut RatMatrix, a: usize, b: usize) {
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

impl Poly {
    fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly(Vec::new());
    }
    let mut out = vec![Rational::zero(); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly::new(out)
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let len = a.0.len().max(b.0.len());
    let zero = Rational::zero();
    Poly::new(
        (0..len)
            .map(|k| a.0.get(k).unwrap_or(&zero) - b.0.get(k).unwrap_or(&zero))
            .collect(),
    )
}

/// Eigenvalues with algebraic multiplicities, or `NotSplit` when the
/// characteristic polynomial has a non-rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spectrum {
    Split(BTreeMap<Rational, usize>),
    NotSplit,
}

impl Spectrum {
    pub fn split(self) -> Option<BTreeMap<Rational, usize>> {
        match self {
            Spectrum::Split(s) => Some(s),
            Spectrum::NotSplit => None,
        }
    }
}

pub fn rational_spectrum(m: &RatMatrix) -> Result<Spectrum> {
    let p = Poly::new(char_poly(m)?);
    Ok(match rational_roots(&p) {
        Some(s) => Spectrum::Split(s),
        None => Spectrum::NotSplit,
    })
}

/// All roots with multiplicity when `p` (nonzero) splits over the rationals.
pub fn rational_roots(p: &Poly) -> Option<BTreeMap<Rational, usize>> {
    let mut out = BTreeMap::new();
    if p.degree() == 0 {
        return Some(out);
    }
    let squarefree = p.div_rem(&p.gcd(&p.derivative())).0;
    let distinct = distinct_rational_roots(&squarefree)?;
    let mut rest = p.clone();
    for r in distinct {
        let lin = Poly::new(vec![-r.clone(), Rational::one()]);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        out.insert(r, mult);
    }
    (rest.degree() == 0).then_some(out)
}

/// Roots of a square-free polynomial, `None` unless all are rational.
///
/// With integer coefficients `a_i`, the substitution `y = a_n·x` turns the
/// polynomial into a monic integer one, whose rational roots are integers.
/// Those are isolated with a Sturm sequence probed at half-integers, which
/// can never be roots themselves. Every member of the sequence is kept as a
/// primitive integer polynomial (a positive rescaling leaves its signs alone),
/// so probing is pure integer arithmetic.
fn distinct_rational_roots(p: &Poly) -> Option<Vec<Rational>> {
    let d = p.degree();
    let mut a = p.scaled_to_primitive_integers();
    if a[d].is_negative() {
        a.iter_mut().for_each(|c| *c = -&*c);
    }
    let lead = a[d].clone();
    let mut b = Vec::with_capacity(d + 1);
    let mut pw = BigInt::one();
    for i in (0..=d).rev() {
        b.push(&a[i] * &pw);
        pw *= &lead;
    }
    b.reverse();
    // Fujiwara: every root has |y| ≤ 2·max_i |b_{d−i}|^{1/i}.
    let bound = (1..=d)
        .map(|i| b[d - i].abs().nth_root(i as u32) + 1)
        .max()
        .unwrap_or_else(BigInt::one)
        * 2;
    let sturm = integer_sturm_chain(&b);
    let count = |k: &BigInt| sign_changes_at_half(&sturm, k);
    let lo = -&bound - 1;
    let (v_lo, v_hi) = (count(&lo), count(&bound));
    if v_lo - v_hi != d {
        return None;
    }
    let mut roots = Vec::with_capacity(d);
    // Stack of integer intervals (lo, hi]; each carries its root count.
    let mut stack = vec![(lo, v_lo, bound, v_hi)];
    while let Some((lo, vl, hi, vh)) = stack.pop() {
        let n = vl - vh;
        if n == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if n != 1 || !eval_int(&b, &hi).is_zero() {
                return None;
            }
            roots.push(Rational::new(hi, lead.clone()));
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let vm = count(&mid);
        stack.push((lo, vl, mid.clone(), vm));
        stack.push((mid, vm, hi, vh));
    }
    roots.sort();
    Some(roots)
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k)
}

fn integer_sturm_chain(p: &[BigInt]) -> Vec<Vec<BigInt>> {
    let as_poly = |c: &[BigInt]| Poly::new(c.iter().cloned().map(Rational::from_integer).collect());
    let mut chain = vec![p.to_vec()];
    let d = as_poly(p).derivative();
    if !d.is_zero() {
        chain.push(d.scaled_to_primitive_integers());
    }
    while chain.len() >= 2 {
        let n = chain.len();
        let r = as_poly(&chain[n - 2]).div_rem(&as_poly(&chain[n - 1])).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rational::one()).scaled_to_primitive_integers());
    }
    chain
}

/// Sign changes of the chain at `k + 1/2`. Each `q` is evaluated as
/// `2^{deg q}·q((2k+1)/2)`, an integer of the same sign.
fn sign_changes_at_half(chain: &[Vec<BigInt>], k: &BigInt) -> usize {
    let u: BigInt = k * 2 + 1;
    let signs: Vec<bool> = chain
        .iter()
        .filter_map(|q| {
            let d = q.len() - 1;
            let mut acc = q[d].clone();
            for i in (0..d).rev() {
                acc = acc * &u + (&q[i] << (d - i));
            }
            (!acc.is_zero()).then(|| acc.is_positive())
        })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `[rank((m - cI)^k) for k in 1..=n]`.
///
/// Once two consecutive ranks agree the kernels have stopped growing, so
/// the remaining entries are filled in without further elimination.
pub fn rank_profile(m: &RatMatrix, c: &Rational) -> Vec<usize> {
    let n = m.rows();
    let shifted = m.shift(c);
    let mut acc = shifted.clone();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        if k > 1 {
            acc = &acc * &shifted;
        }
        let r = rank(&acc);
        let stable = out.last() == Some(&r) || r == 0;
        out.push(r);
        if stable {
            out.resize(n, r);
            break;
        }
    }
    out
}

/// Sizes of the Jordan blocks for eigenvalue `c`, largest first, read off
/// the rank profile: `#blocks of size ≥ k = r_{k-1} - r_k`.
pub fn jordan_blocks(m: &RatMatrix, c: &Rational) -> Vec<usize> {
    let n = m.rows();
    let mut ranks = vec![n];
    ranks.extend(rank_profile(m, c));
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=n).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    sizes
}

/// Full Jordan structure: eigenvalue ↦ block sizes (largest first).
pub fn jordan_structure(m: &RatMatrix) -> Result<BTreeMap<Rational, Vec<usize>>> {
    let spec = rational_spectrum(m)?.split().ok_or(Error::NotSplit)?;
    Ok(spec.into_keys().map(|c| {
        let blocks = jordan_blocks(m, &c);
        (c, blocks)
    }).collect())
}
