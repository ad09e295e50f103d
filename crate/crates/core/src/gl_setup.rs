//! The standard apparatus attached to a partition λ of N: the Jordan basis
//! of the nilpotent `e`, the sl2-triple `(e, h, f)` built block by block,
//! the `ad h` grading, the torus of block-constant diagonals and the
//! subspace spanned by the `c(i, j)` elements.
//!
//! Basis vectors are enumerated block-major: `v_1^(1), ..., v_{λ_1}^(1),
//! v_1^(2), ...`. On block `i`, `e v_j = v_{j-1}` and
//! `f v_j = j(λ_i − j) v_{j+1}` (1-based `j`), and `h` is
//! `diag(λ_i − 1, λ_i − 3, ..., 1 − λ_i)`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{bracket, int, kernel_basis, RatMatrix, Rational};
use crate::partition::Partition;

/// Position of a basis vector `v_j^(i)`; `block` and `position` are 0-based
/// (so `position = j − 1`), `flat` indexes rows/columns of matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub block: usize,
    pub position: usize,
    pub flat: usize,
}

/// Block-major enumeration of the adapted basis.
pub fn basis(lambda: &Partition) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(lambda.size());
    for (block, &len) in lambda.parts().iter().enumerate() {
        for position in 0..len {
            out.push(BasisIndex { block, position, flat: out.len() });
        }
    }
    out
}

/// First flat index of every block.
pub fn block_offsets(lambda: &Partition) -> Vec<usize> {
    lambda
        .parts()
        .iter()
        .scan(0, |acc, &p| {
            let start = *acc;
            *acc += p;
            Some(start)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SL2Triple {
    pub e: RatMatrix,
    pub h: RatMatrix,
    pub f: RatMatrix,
    pub lambda: Partition,
}

impl SL2Triple {
    pub fn size(&self) -> usize {
        self.lambda.size()
    }

    /// `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn satisfies_relations(&self) -> bool {
        let two = int(2);
        let he = bracket(&self.h, &self.e);
        let hf = bracket(&self.h, &self.f);
        let ef = bracket(&self.e, &self.f);
        match (he, hf, ef) {
            (Ok(he), Ok(hf), Ok(ef)) => {
                he == self.e.scale(&two) && hf == self.f.scale(&-two) && ef == self.h
            }
            _ => false,
        }
    }

    /// Integer `ad h` eigenvalue of every basis vector (the diagonal of `h`).
    pub fn h_weights(&self) -> Vec<i64> {
        weights(&self.lambda)
    }
}

fn weights(lambda: &Partition) -> Vec<i64> {
    basis(lambda)
        .iter()
        .map(|b| {
            let len = lambda.parts()[b.block] as i64;
            len - 1 - 2 * b.position as i64
        })
        .collect()
}

pub fn build_triple(lambda: &Partition) -> SL2Triple {
    let n = lambda.size();
    let mut e = RatMatrix::zeros(n, n);
    let mut f = RatMatrix::zeros(n, n);
    let offsets = block_offsets(lambda);
    for (block, &len) in lambda.parts().iter().enumerate() {
        let o = offsets[block];
        for j in 1..len {
            // e v_{j+1} = v_j ;  f v_j = j(len − j) v_{j+1}   (1-based j)
            e[(o + j - 1, o + j)] = int(1);
            f[(o + j, o + j - 1)] = int((j * (len - j)) as i64);
        }
    }
    let h = RatMatrix::diagonal(&weights(lambda).into_iter().map(int).collect::<Vec<_>>());
    SL2Triple { e, h, f, lambda: lambda.clone() }
}

/// Coordinates `(x_1, ..., x_{λ_1})` of a point of the torus: the diagonal
/// matrix with `x_j` in slot `j` of every block long enough to have one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TorusElement {
    #[serde(serialize_with = "serialize_coords")]
    pub coords: Vec<Rational>,
}

fn serialize_coords<S: serde::Serializer>(c: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for x in c {
        seq.serialize_element(&crate::linalg::rational::to_fraction_string(x))?;
    }
    seq.end()
}

impl TorusElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        TorusElement { coords }
    }

    pub fn zero(len: usize) -> Self {
        TorusElement { coords: vec![Rational::zero(); len] }
    }

    /// Diagonal entries grouped per block: block `i` sees `x_1..x_{λ_i}`.
    pub fn block_values(&self, lambda: &Partition) -> Result<Vec<Vec<Rational>>> {
        check_coords(lambda, &self.coords)?;
        Ok(lambda.parts().iter().map(|&len| self.coords[..len].to_vec()).collect())
    }

    pub fn to_matrix(&self, lambda: &Partition) -> Result<RatMatrix> {
        torus_matrix(lambda, &self.coords)
    }
}

fn check_coords(lambda: &Partition, coords: &[Rational]) -> Result<()> {
    if coords.len() != lambda.largest() {
        return Err(Error::DimensionMismatch(format!(
            "torus coordinates have length {}, expected λ_1 = {}",
            coords.len(),
            lambda.largest()
        )));
    }
    Ok(())
}

pub fn torus_matrix(lambda: &Partition, coords: &[Rational]) -> Result<RatMatrix> {
    check_coords(lambda, coords)?;
    let diag: Vec<Rational> = basis(lambda).iter().map(|b| coords[b.position].clone()).collect();
    Ok(RatMatrix::diagonal(&diag))
}

/// Reads the integer diagonal of `h`.
pub fn integer_diagonal(h: &RatMatrix) -> Result<Vec<i64>> {
    if !h.is_diagonal() {
        return Err(Error::NotIntegerDiagonal);
    }
    h.diagonal_entries()
        .iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).map_err(|_| Error::NotIntegerDiagonal)
            } else {
                Err(Error::NotIntegerDiagonal)
            }
        })
        .collect()
}

/// Projection of `x` onto `g(w, h) = {y : [h, y] = w·y}`: entry `(r, c)`
/// survives iff `h_r − h_c = w`.
pub fn grading_component(x: &RatMatrix, h: &RatMatrix, w: i64) -> Result<RatMatrix> {
    let hw = integer_diagonal(h)?;
    if x.rows() != hw.len() || x.cols() != hw.len() {
        return Err(Error::DimensionMismatch("grading_component: x and h differ in size".into()));
    }
    let mut out = RatMatrix::zeros(x.rows(), x.cols());
    for r in 0..x.rows() {
        for c in 0..x.cols() {
            if hw[r] - hw[c] == w && !x[(r, c)].is_zero() {
                out[(r, c)] = x[(r, c)].clone();
            }
        }
    }
    Ok(out)
}

/// Weights `w` with a nonzero `g(w, h)` component in `x`, ascending.
pub fn weights_present(x: &RatMatrix, h: &RatMatrix) -> Result<Vec<i64>> {
    let hw = integer_diagonal(h)?;
    let mut ws: Vec<i64> = (0..x.rows())
        .flat_map(|r| (0..x.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| !x[(r, c)].is_zero())
        .map(|(r, c)| hw[r] - hw[c])
        .collect();
    ws.sort_unstable();
    ws.dedup();
    Ok(ws)
}

/// Matrix of `ad x` on gl_N, acting on row-major vectorized matrices.
pub fn ad_matrix(x: &RatMatrix) -> RatMatrix {
    let n = x.rows();
    let mut ad = RatMatrix::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for k in 0..n {
                if !x[(r, k)].is_zero() {
                    ad[(row, k * n + c)] += &x[(r, k)];
                }
                if !x[(k, c)].is_zero() {
                    ad[(row, r * n + k)] -= &x[(k, c)];
                }
            }
        }
    }
    ad
}

pub(crate) fn unvec(n: usize, v: &[Rational]) -> RatMatrix {
    RatMatrix::from_rows(v.chunks(n).map(<[Rational]>::to_vec).collect()).expect("square unvec")
}

/// Basis of `g^f = ker(ad f)`.
pub fn centralizer_of_f(triple: &SL2Triple) -> Vec<RatMatrix> {
    let n = triple.size();
    kernel_basis(&ad_matrix(&triple.f)).iter().map(|v| unvec(n, v)).collect()
}

/// `dim g^e = Σ_j λ̃_j²`.
pub fn centralizer_dimension(lambda: &Partition) -> usize {
    lambda.transpose().parts().iter().map(|c| c * c).sum()
}

/// Coordinate vectors `c(i, j)`: `+1` at slot `λ_{i+1} + 2j + 1`, `−1` at
/// slot `λ_{i+1} + 2j + 2` (1-based slots), for every row `i` and
/// `0 ≤ j < ⌊(λ_i − λ_{i+1})/2⌋`.
pub fn c_basis(lambda: &Partition) -> Vec<TorusElement> {
    let width = lambda.largest();
    let mut out = Vec::new();
    for (i, gap) in lambda.gaps().into_iter().enumerate() {
        let below = lambda.part(i + 1);
        for j in 0..gap / 2 {
            let mut coords = vec![Rational::zero(); width];
            coords[below + 2 * j] = int(1);
            coords[below + 2 * j + 1] = int(-1);
            out.push(TorusElement::new(coords));
        }
    }
    out
}

/// `Σ_i ⌊(λ_i − λ_{i+1})/2⌋`.
pub fn c_dimension(lambda: &Partition) -> usize {
    lambda.gaps().iter().map(|g| g / 2).sum()
}
