//! Exact rational scalars and the dense linear algebra kernel.
//!
//! All scalars are arbitrary-precision rationals kept in lowest terms with a
//! positive denominator (that is `num_rational::BigRational`'s own
//! invariant). Matrices are dense and row-major; the sizes in this pipeline
//! are tiny (at most ~20×20), so everything is plain O(n³) elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Convenience constructor: `rat(p, q)` = p/q in lowest terms.
///
/// Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer rational.
pub fn rint(p: i64) -> Rat {
    BigRational::from_integer(BigInt::from(p))
}

/// A strictly increasing list of 1-based indices inside `[1, n]`.
///
/// Used to index column subsets (Plücker coordinates), Cartan subsets
/// J ⊆ [n], face labels, and boundary index sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex {
    n: usize,
    members: Vec<usize>,
}

impl SubsetIndex {
    /// Builds a subset of `[1, n]`; the members are sorted and deduplicated.
    ///
    /// Panics if any member is 0 or exceeds `n`.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            assert!(m >= 1 && m <= n, "subset member {m} out of range 1..={n}");
        }
        SubsetIndex { n, members }
    }

    pub fn empty(n: usize) -> Self {
        SubsetIndex { n, members: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        SubsetIndex { n, members: (1..=n).collect() }
    }

    pub fn ground(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Complement inside the ground set.
    pub fn complement(&self) -> Self {
        let members = (1..=self.n).filter(|i| !self.contains(*i)).collect();
        SubsetIndex { n: self.n, members }
    }

    /// Set union (same ground set).
    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::new(self.n, self.members.iter().chain(other.members.iter()).copied())
    }

    /// Inserts one element.
    pub fn with(&self, i: usize) -> Self {
        Self::new(self.n, self.members.iter().copied().chain([i]))
    }

    /// Removes one element.
    pub fn without(&self, i: usize) -> Self {
        Self::new(self.n, self.members.iter().copied().filter(|&m| m != i))
    }

    /// Symmetric difference with a single element.
    pub fn toggled(&self, i: usize) -> Self {
        if self.contains(i) {
            self.without(i)
        } else {
            self.with(i)
        }
    }

    /// All k-element subsets of `[1, n]`, in lexicographic order.
    pub fn all_k_subsets(n: usize, k: usize) -> Vec<SubsetIndex> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<SubsetIndex>) {
            if current.len() == k {
                out.push(SubsetIndex { n, members: current.clone() });
                return;
            }
            let remaining = k - current.len();
            for i in start..=n.saturating_sub(remaining - 1) {
                current.push(i);
                rec(n, k, i + 1, current, out);
                current.pop();
            }
        }
        if k <= n {
            rec(n, k, 1, &mut current, &mut out);
        }
        out
    }

    /// All subsets of `[1, n]`, ordered by size then lexicographically.
    pub fn all_subsets(n: usize) -> Vec<SubsetIndex> {
        let mut out = Vec::new();
        for k in 0..=n {
            out.extend(Self::all_k_subsets(n, k));
        }
        out
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Builds from `i64` literals; handy in tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| rint(v)).collect()).collect())
    }

    pub fn construct(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::construct(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone())
            })
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::construct(self.rows, self.cols, |i, j| self[(i, j)].clone() + &other[(i, j)])
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::construct(self.rows, self.cols, |i, j| self[(i, j)].clone() - &other[(i, j)])
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product size mismatch");
        Mat::construct(self.rows, other.cols, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                acc += self[(i, k)].clone() * &other[(k, j)];
            }
            acc
        })
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat::construct(self.rows, self.cols, |i, j| self[(i, j)].clone() * s)
    }

    /// Submatrix given by 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::construct(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Principal submatrix on a 1-based index set.
    pub fn principal(&self, idx: &SubsetIndex) -> Mat {
        let ix: Vec<usize> = idx.members().iter().map(|&i| i - 1).collect();
        self.submatrix(&ix, &ix)
    }

    /// Determinant by rational Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Rat::zero();
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() / &p;
                for c in col..n {
                    let delta = factor.clone() * &m[(col, c)];
                    m[(r, c)] -= delta;
                }
            }
        }
        det
    }

    /// Inverse; errors if singular.
    pub fn inverse(&self) -> Result<Mat, Error> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::construct(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (reduced, pivots) = rref_in_place(&mut aug);
        let _ = reduced;
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularBlock);
        }
        Ok(Mat::construct(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let ia = a * self.cols + c;
            let ib = b * self.cols + c;
            self.entries.swap(ia, ib);
        }
    }

    /// Vertically stacks two matrices with equal column counts.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Mat { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Rank via row reduction.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (_, pivots) = rref_in_place(&mut m);
        pivots.len()
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

/// In-place reduced row echelon form with leftmost-nonzero pivoting.
///
/// Row swaps always pull the first row with a nonzero entry in the pivot
/// column, so the result is deterministic. Returns the 0-based pivot
/// columns in order.
fn rref_in_place(m: &mut Mat) -> ((), Vec<usize>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(pr, r);
        let p = m[(r, c)].clone();
        for j in c..cols {
            m[(r, j)] /= &p;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let factor = m[(i, c)].clone();
                for j in c..cols {
                    let delta = factor.clone() * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    ((), pivots)
}

/// Reduced row echelon form with leftmost-nonzero pivoting.
///
/// Returns the reduced matrix together with the pivot columns as a 1-based
/// subset. Deterministic: downstream normal-form extraction depends on it.
pub fn rref_solve(m: &Mat) -> (Mat, SubsetIndex) {
    let mut out = m.clone();
    let (_, pivots) = rref_in_place(&mut out);
    let idx = SubsetIndex::new(m.cols(), pivots.into_iter().map(|c| c + 1));
    (out, idx)
}

/// Pfaffian of a skew-symmetric matrix by skew Gaussian elimination.
///
/// Odd sizes give 0 (the form is degenerate). Errors if the input is not
/// exactly skew-symmetric.
pub fn pfaffian(a: &Mat) -> Result<Rat, Error> {
    if !a.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = a.rows();
    if n % 2 == 1 {
        return Ok(Rat::zero());
    }
    let mut m = a.clone();
    let mut pf = Rat::one();
    let mut k = 0usize;
    while k < n {
        // Find a pivot in column k at or below row k+1.
        let pivot = (k + 1..n).find(|&r| !m[(r, k)].is_zero());
        let Some(pr) = pivot else {
            return Ok(Rat::zero());
        };
        if pr != k + 1 {
            // Swapping rows i and j of a skew matrix must be matched by the
            // same column swap to stay skew; each such double swap flips pf.
            m.swap_rows(pr, k + 1);
            swap_cols(&mut m, pr, k + 1);
            pf = -pf;
        }
        let p = m[(k + 1, k)].clone(); // = -m[(k, k+1)]
        pf *= -p.clone(); // pf multiplies by m[(k, k+1)]
        for r in k + 2..n {
            if m[(r, k)].is_zero() {
                continue;
            }
            // Row operation r -= f * (k+1), mirrored on columns.
            let f = m[(r, k)].clone() / &p;
            for c in 0..n {
                let delta = f.clone() * &m[(k + 1, c)];
                m[(r, c)] -= delta;
            }
            for rr in 0..n {
                let delta = f.clone() * &m[(rr, k + 1)];
                m[(rr, r)] -= delta;
            }
        }
        // Also clear the second pivot column's partners below, using row k.
        for r in k + 2..n {
            if m[(r, k + 1)].is_zero() {
                continue;
            }
            let f = m[(r, k + 1)].clone() / m[(k, k + 1)].clone();
            for c in 0..n {
                let delta = f.clone() * &m[(k, c)];
                m[(r, c)] -= delta;
            }
            for rr in 0..n {
                let delta = f.clone() * &m[(rr, k)];
                m[(rr, r)] -= delta;
            }
        }
        k += 2;
    }
    Ok(pf)
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows() {
        let x = m[(r, a)].clone();
        m[(r, a)] = m[(r, b)].clone();
        m[(r, b)] = x;
    }
}

/// Schur complement of `m` onto the 1-based index set `keep`.
///
/// Computes `M_kk − M_kd · (M_dd)⁻¹ · M_dk` where `d` is the complement of
/// `keep`. Errors with [`Error::SingularBlock`] if the eliminated block is
/// singular.
pub fn schur_complement(m: &Mat, keep: &SubsetIndex) -> Result<Mat, Error> {
    assert!(m.is_square());
    assert_eq!(keep.ground(), m.rows(), "index ground set must match matrix size");
    let k: Vec<usize> = keep.members().iter().map(|&i| i - 1).collect();
    let d: Vec<usize> = keep.complement().members().iter().map(|&i| i - 1).collect();
    if d.is_empty() {
        return Ok(m.submatrix(&k, &k));
    }
    let m_kk = m.submatrix(&k, &k);
    let m_kd = m.submatrix(&k, &d);
    let m_dd = m.submatrix(&d, &d);
    let m_dk = m.submatrix(&d, &k);
    let inv = m_dd.inverse().map_err(|_| Error::SingularBlock)?;
    Ok(m_kk.sub(&m_kd.mul(&inv).mul(&m_dk)))
}

/// All maximal minors of a matrix with `rows ≤ cols`, indexed by the
/// 1-based column subset.
pub fn maximal_minors(m: &Mat) -> Vec<(SubsetIndex, Rat)> {
    let k = m.rows();
    let n = m.cols();
    assert!(k <= n, "maximal minors need rows <= cols");
    let all_rows: Vec<usize> = (0..k).collect();
    SubsetIndex::all_k_subsets(n, k)
        .into_iter()
        .map(|idx| {
            let cols: Vec<usize> = idx.members().iter().map(|&j| j - 1).collect();
            let d = m.submatrix(&all_rows, &cols).det();
            (idx, d)
        })
        .collect()
}

/// Sign of the permutation sorting `seq` (which must have distinct entries):
/// +1 for even, −1 for odd.
pub fn sort_sign(seq: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// True iff the scalar is > 0.
pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
