//! Exact arithmetic over dyadic rationals.
//!
//! A dyadic rational is an integer numerator divided by a power of two. All
//! basis matrices used in this crate have entries of that shape (the `E8`
//! basis has halves, everything else is integral), so exact linear algebra
//! needs nothing heavier. Matrices and vectors share a single denominator
//! exponent across all entries and are kept in canonical form (the exponent
//! is minimal).
//!
//! Arithmetic is checked: any intermediate that would leave `i64` numerators
//! (or `i128` scratch space) reports [`LinalgError::Overflow`] instead of
//! wrapping.

use std::fmt;

use thiserror::Error;

/// Errors from exact linear algebra.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("inverse has a non-dyadic entry (odd determinant factor {odd_factor})")]
    NonDyadicInverse { odd_factor: i128 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("entry {index} is not an integer")]
    NonIntegerEntry { index: usize },
    #[error("modulus at position {index} is not positive")]
    NonPositiveModulus { index: usize },
}

type Result<T> = std::result::Result<T, LinalgError>;

/// A dyadic rational scalar `num / 2^log2_den`, always reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    log2_den: u32,
}

impl Dyadic {
    /// Creates `num / 2^log2_den` and reduces it to canonical form.
    pub fn new(num: i128, log2_den: u32) -> Self {
        let mut d = Dyadic { num, log2_den };
        d.reduce();
        d
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic { num: v as i128, log2_den: 0 }
    }

    /// `1/2`, the only non-integer scale that appears in catalog bases.
    pub fn half() -> Self {
        Dyadic { num: 1, log2_den: 1 }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.log2_den = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.log2_den);
        self.num >>= tz;
        self.log2_den -= tz;
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn is_integer(&self) -> bool {
        self.log2_den == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    /// The integer value, if the scalar is integral.
    pub fn to_int(&self) -> Option<i64> {
        if self.log2_den == 0 {
            i64::try_from(self.num).ok()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / f64::powi(2.0, self.log2_den as i32)
    }

    pub fn checked_mul(&self, other: &Dyadic) -> Result<Dyadic> {
        let num = self.num.checked_mul(other.num).ok_or(LinalgError::Overflow)?;
        Ok(Dyadic::new(num, self.log2_den + other.log2_den))
    }

    pub fn checked_recip(&self) -> Result<Dyadic> {
        // 2^d / num is dyadic only when num is (plus or minus) a power of two.
        if self.num == 0 {
            return Err(LinalgError::Singular);
        }
        let mag = self.num.unsigned_abs();
        if !mag.is_power_of_two() {
            return Err(LinalgError::NonDyadicInverse { odd_factor: self.num >> self.num.trailing_zeros() });
        }
        let shift = mag.trailing_zeros();
        let num = (1i128 << self.log2_den) * self.num.signum();
        Ok(Dyadic::new(num, shift))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_den == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.log2_den)
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A vector of dyadic rationals with a shared denominator exponent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicVec {
    num: Vec<i64>,
    log2_den: u32,
}

impl DyadicVec {
    pub fn new(num: Vec<i64>, log2_den: u32) -> Self {
        let mut v = DyadicVec { num, log2_den };
        v.reduce();
        v
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DyadicVec { num: v.to_vec(), log2_den: 0 }
    }

    pub fn zeros(dim: usize) -> Self {
        DyadicVec { num: vec![0; dim], log2_den: 0 }
    }

    /// Snaps a float vector onto the dyadic grid `2^-resolution_bits`.
    pub fn from_f64_grid(values: &[f64], resolution_bits: u32) -> Self {
        let scale = f64::powi(2.0, resolution_bits as i32);
        let num = values.iter().map(|v| (v * scale).round() as i64).collect();
        DyadicVec::new(num, resolution_bits)
    }

    fn reduce(&mut self) {
        if self.log2_den == 0 {
            return;
        }
        let mut tz = self.log2_den;
        for &n in &self.num {
            if n != 0 {
                tz = tz.min(n.trailing_zeros());
            }
            if tz == 0 {
                return;
            }
        }
        for n in &mut self.num {
            *n >>= tz;
        }
        self.log2_den -= tz;
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn at(&self, i: usize) -> Dyadic {
        Dyadic::new(self.num[i] as i128, self.log2_den)
    }

    pub fn is_integral(&self) -> bool {
        self.log2_den == 0
    }

    /// The integer entries, or `NonIntegerEntry` if any coordinate is fractional.
    pub fn to_int_vec(&self) -> Result<Vec<i64>> {
        if self.log2_den == 0 {
            return Ok(self.num.clone());
        }
        let idx = self
            .num
            .iter()
            .position(|&n| n % (1i64 << self.log2_den) != 0)
            .expect("canonical form with nonzero exponent has a fractional entry");
        Err(LinalgError::NonIntegerEntry { index: idx })
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        let scale = f64::powi(2.0, self.log2_den as i32);
        self.num.iter().map(|&n| n as f64 / scale).collect()
    }

    /// Multiplies by `2^k` (negative `k` divides).
    pub fn scale_pow2(&self, k: i32) -> Result<DyadicVec> {
        if k >= 0 {
            let mut num = Vec::with_capacity(self.num.len());
            for &n in &self.num {
                num.push(n.checked_shl(k as u32).filter(|s| s >> k == n).ok_or(LinalgError::Overflow)?);
            }
            Ok(DyadicVec::new(num, self.log2_den))
        } else {
            Ok(DyadicVec::new(self.num.clone(), self.log2_den + (-k) as u32))
        }
    }

    pub fn checked_sub(&self, other: &DyadicVec) -> Result<DyadicVec> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn checked_add(&self, other: &DyadicVec) -> Result<DyadicVec> {
        self.zip_with(other, i64::checked_add)
    }

    fn zip_with(&self, other: &DyadicVec, op: fn(i64, i64) -> Option<i64>) -> Result<DyadicVec> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimMismatch { expected: self.dim(), got: other.dim() });
        }
        let den = self.log2_den.max(other.log2_den);
        let (sa, sb) = (den - self.log2_den, den - other.log2_den);
        let mut num = Vec::with_capacity(self.dim());
        for (&a, &b) in self.num.iter().zip(&other.num) {
            let a = a.checked_shl(sa).filter(|s| s >> sa == a).ok_or(LinalgError::Overflow)?;
            let b = b.checked_shl(sb).filter(|s| s >> sb == b).ok_or(LinalgError::Overflow)?;
            num.push(op(a, b).ok_or(LinalgError::Overflow)?);
        }
        Ok(DyadicVec::new(num, den))
    }

    /// Exact scalar multiplication.
    pub fn mul_scalar(&self, c: Dyadic) -> Result<DyadicVec> {
        let den = self.log2_den + c.log2_denominator();
        let prods: Vec<i128> = self
            .num
            .iter()
            .map(|&n| (n as i128).checked_mul(c.numerator()).ok_or(LinalgError::Overflow))
            .collect::<Result<_>>()?;
        let mut tz = den;
        for &p in &prods {
            if p != 0 {
                tz = tz.min(p.trailing_zeros());
            }
        }
        let mut num = Vec::with_capacity(prods.len());
        for p in prods {
            num.push(i64::try_from(p >> tz).map_err(|_| LinalgError::Overflow)?);
        }
        Ok(DyadicVec::new(num, den - tz))
    }

    /// Exact squared Euclidean distance to `other`.
    pub fn dist_sq(&self, other: &DyadicVec) -> Dyadic {
        let diff = self.checked_sub(other).expect("dimension checked by caller");
        diff.norm_sq()
    }

    /// Exact squared Euclidean norm.
    pub fn norm_sq(&self) -> Dyadic {
        let mut acc: i128 = 0;
        for &n in &self.num {
            acc += (n as i128) * (n as i128);
        }
        Dyadic::new(acc, 2 * self.log2_den)
    }

    /// Componentwise reduction into `[0, moduli[i])`.
    ///
    /// Every entry must be integral; a fractional entry signals that the
    /// vector is not a point of the fine lattice.
    pub fn mod_per_coordinate(&self, moduli: &[i64]) -> Result<Vec<i64>> {
        if moduli.len() != self.dim() {
            return Err(LinalgError::DimMismatch { expected: self.dim(), got: moduli.len() });
        }
        if let Some(idx) = moduli.iter().position(|&m| m < 1) {
            return Err(LinalgError::NonPositiveModulus { index: idx });
        }
        let ints = self.to_int_vec()?;
        Ok(ints.iter().zip(moduli).map(|(&v, &m)| v.rem_euclid(m)).collect())
    }

    /// Exact lexicographic comparison (entries aligned to a common denominator).
    pub fn lex_cmp(&self, other: &DyadicVec) -> std::cmp::Ordering {
        let den = self.log2_den.max(other.log2_den);
        let (sa, sb) = (den - self.log2_den, den - other.log2_den);
        for (&a, &b) in self.num.iter().zip(&other.num) {
            let ord = ((a as i128) << sa).cmp(&((b as i128) << sb));
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        self.dim().cmp(&other.dim())
    }
}

/// Exact comparison of dyadic scalars.
impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let den = self.log2_den.max(other.log2_den);
        let a = self.num << (den - self.log2_den);
        let b = other.num << (den - other.log2_den);
        a.cmp(&b)
    }
}

/// A matrix of dyadic rationals (row-major, shared denominator exponent).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DyadicMatrix {
    rows: usize,
    cols: usize,
    num: Vec<i64>,
    log2_den: u32,
}

impl DyadicMatrix {
    pub fn new(rows: usize, cols: usize, num: Vec<i64>, log2_den: u32) -> Self {
        assert_eq!(num.len(), rows * cols, "numerator buffer size");
        let mut m = DyadicMatrix { rows, cols, num, log2_den };
        m.reduce();
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], log2_den: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut num = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            num.extend_from_slice(row);
        }
        DyadicMatrix::new(r, c, num, log2_den)
    }

    pub fn identity(n: usize) -> Self {
        let mut num = vec![0; n * n];
        for i in 0..n {
            num[i * n + i] = 1;
        }
        DyadicMatrix { rows: n, cols: n, num, log2_den: 0 }
    }

    fn reduce(&mut self) {
        if self.log2_den == 0 {
            return;
        }
        let mut tz = self.log2_den;
        for &n in &self.num {
            if n != 0 {
                tz = tz.min(n.trailing_zeros());
            }
            if tz == 0 {
                return;
            }
        }
        for n in &mut self.num {
            *n >>= tz;
        }
        self.log2_den -= tz;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn at(&self, i: usize, j: usize) -> Dyadic {
        Dyadic::new(self.num[i * self.cols + j] as i128, self.log2_den)
    }

    fn numerator_at(&self, i: usize, j: usize) -> i128 {
        self.num[i * self.cols + j] as i128
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Scales every entry by `2^k` (negative `k` divides).
    pub fn scale_pow2(&self, k: i32) -> Result<DyadicMatrix> {
        if k >= 0 {
            let mut num = Vec::with_capacity(self.num.len());
            for &n in &self.num {
                num.push(n.checked_shl(k as u32).filter(|s| s >> k == n).ok_or(LinalgError::Overflow)?);
            }
            Ok(DyadicMatrix::new(self.rows, self.cols, num, self.log2_den))
        } else {
            Ok(DyadicMatrix::new(self.rows, self.cols, self.num.clone(), self.log2_den + (-k) as u32))
        }
    }

    /// Block-diagonal matrix with `k` copies of `self`.
    pub fn block_diag(&self, k: usize) -> DyadicMatrix {
        let (r, c) = (self.rows, self.cols);
        let mut num = vec![0i64; r * k * c * k];
        for b in 0..k {
            for i in 0..r {
                for j in 0..c {
                    num[(b * r + i) * (c * k) + b * c + j] = self.num[i * c + j];
                }
            }
        }
        DyadicMatrix::new(r * k, c * k, num, self.log2_den)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination on the
    /// numerator matrix, rescaled by the denominator power.
    pub fn det_exact(&self) -> Result<Dyadic> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut work: Vec<i128> = self.num.iter().map(|&v| v as i128).collect();
        let det_num = det_i128(&mut work, n)?;
        let total_den = (self.log2_den as u64) * (n as u64);
        let total_den = u32::try_from(total_den).map_err(|_| LinalgError::Overflow)?;
        Ok(Dyadic::new(det_num, total_den))
    }

    /// Exact inverse. Fails on singular matrices and on matrices whose
    /// inverse leaves the dyadic rationals.
    pub fn inverse_exact(&self) -> Result<DyadicMatrix> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut work: Vec<i128> = self.num.iter().map(|&v| v as i128).collect();
        let det = det_i128(&mut work, n)?;
        if det == 0 {
            return Err(LinalgError::Singular);
        }
        // inverse of N/2^d is 2^d * adj(N) / det(N); det(N) = sign * 2^e * g
        // with g odd, so each entry is dyadic iff g divides the cofactor.
        let sign = det.signum();
        let e = det.trailing_zeros();
        let g = (det >> e).abs();

        let mut entries = vec![Dyadic::from_int(0); n * n];
        let mut max_den = 0u32;
        for i in 0..n {
            for j in 0..n {
                // entry (i, j) of the inverse uses the cofactor of (j, i)
                let minor = self.minor_det(j, i)?;
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                if cof % g != 0 {
                    return Err(LinalgError::NonDyadicInverse { odd_factor: g });
                }
                let num = (cof / g) * sign;
                // multiply by 2^d / 2^e
                let d = Dyadic::new(
                    num.checked_shl(self.log2_den).filter(|s| s >> self.log2_den == num).ok_or(LinalgError::Overflow)?,
                    e,
                );
                max_den = max_den.max(d.log2_denominator());
                entries[i * n + j] = d;
            }
        }
        let mut num = Vec::with_capacity(n * n);
        for d in entries {
            let shifted = d.numerator().checked_shl(max_den - d.log2_denominator()).ok_or(LinalgError::Overflow)?;
            num.push(i64::try_from(shifted).map_err(|_| LinalgError::Overflow)?);
        }
        let inv = DyadicMatrix::new(n, n, num, max_den);
        debug_assert_eq!(self.checked_mul(&inv).unwrap(), DyadicMatrix::identity(n));
        Ok(inv)
    }

    fn minor_det(&self, skip_row: usize, skip_col: usize) -> Result<i128> {
        let n = self.rows;
        let m = n - 1;
        let mut work = Vec::with_capacity(m * m);
        for i in 0..n {
            if i == skip_row {
                continue;
            }
            for j in 0..n {
                if j == skip_col {
                    continue;
                }
                work.push(self.numerator_at(i, j));
            }
        }
        det_i128(&mut work, m)
    }

    /// True iff the matrix is square, integral and has determinant `+/-1`.
    pub fn is_unimodular(&self) -> bool {
        if !self.is_square() || self.log2_den != 0 {
            return false;
        }
        matches!(self.det_exact(), Ok(d) if d.numerator().abs() == 1 && d.is_integer())
    }

    /// Exact matrix-vector product with an integer vector.
    pub fn matvec(&self, v: &[i64]) -> Result<DyadicVec> {
        if v.len() != self.cols {
            return Err(LinalgError::DimMismatch { expected: self.cols, got: v.len() });
        }
        let mut num = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc: i128 = 0;
            for j in 0..self.cols {
                acc = acc
                    .checked_add(self.numerator_at(i, j).checked_mul(v[j] as i128).ok_or(LinalgError::Overflow)?)
                    .ok_or(LinalgError::Overflow)?;
            }
            num.push(i64::try_from(acc).map_err(|_| LinalgError::Overflow)?);
        }
        Ok(DyadicVec::new(num, self.log2_den))
    }

    /// Exact matrix-vector product with a dyadic vector.
    pub fn matvec_dyadic(&self, v: &DyadicVec) -> Result<DyadicVec> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimMismatch { expected: self.cols, got: v.dim() });
        }
        let mut num = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc: i128 = 0;
            for j in 0..self.cols {
                acc = acc
                    .checked_add(self.numerator_at(i, j).checked_mul(v.num[j] as i128).ok_or(LinalgError::Overflow)?)
                    .ok_or(LinalgError::Overflow)?;
            }
            num.push(i64::try_from(acc).map_err(|_| LinalgError::Overflow)?);
        }
        Ok(DyadicVec::new(num, self.log2_den + v.log2_den))
    }

    /// Exact matrix product.
    pub fn checked_mul(&self, other: &DyadicMatrix) -> Result<DyadicMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimMismatch { expected: self.cols, got: other.rows });
        }
        let mut num = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc = acc
                        .checked_add(
                            self.numerator_at(i, k)
                                .checked_mul(other.numerator_at(k, j))
                                .ok_or(LinalgError::Overflow)?,
                        )
                        .ok_or(LinalgError::Overflow)?;
                }
                num.push(i64::try_from(acc).map_err(|_| LinalgError::Overflow)?);
            }
        }
        Ok(DyadicMatrix::new(self.rows, other.cols, num, self.log2_den + other.log2_den))
    }

    /// Scales row `i` by `pi[i]`.
    pub fn diag_mul(&self, pi: &[Dyadic]) -> Result<DyadicMatrix> {
        if pi.len() != self.rows {
            return Err(LinalgError::DimMismatch { expected: self.rows, got: pi.len() });
        }
        let max_den = pi.iter().map(Dyadic::log2_denominator).max().unwrap_or(0);
        let mut num = Vec::with_capacity(self.num.len());
        for (i, p) in pi.iter().enumerate() {
            for j in 0..self.cols {
                let scaled = (self.numerator_at(i, j))
                    .checked_mul(p.numerator() << (max_den - p.log2_denominator()))
                    .ok_or(LinalgError::Overflow)?;
                num.push(i64::try_from(scaled).map_err(|_| LinalgError::Overflow)?);
            }
        }
        Ok(DyadicMatrix::new(self.rows, self.cols, num, self.log2_den + max_den))
    }

    /// Scales column `j` by `pi[j]`.
    pub fn mul_diag(&self, pi: &[Dyadic]) -> Result<DyadicMatrix> {
        if pi.len() != self.cols {
            return Err(LinalgError::DimMismatch { expected: self.cols, got: pi.len() });
        }
        let max_den = pi.iter().map(Dyadic::log2_denominator).max().unwrap_or(0);
        let mut num = Vec::with_capacity(self.num.len());
        for i in 0..self.rows {
            for (j, p) in pi.iter().enumerate() {
                let scaled = (self.numerator_at(i, j))
                    .checked_mul(p.numerator() << (max_den - p.log2_denominator()))
                    .ok_or(LinalgError::Overflow)?;
                num.push(i64::try_from(scaled).map_err(|_| LinalgError::Overflow)?);
            }
        }
        Ok(DyadicMatrix::new(self.rows, self.cols, num, self.log2_den + max_den))
    }
}

/// Exact determinant of an `n x n` integer matrix; `work` is destroyed.
///
/// Rows and columns with a single nonzero entry are peeled off first (every
/// catalog basis is a permuted triangular matrix times a diagonal, so this
/// keeps intermediates at the size of the entries themselves); whatever dense
/// core remains goes through fraction-free elimination.
fn det_i128(work: &mut [i128], n: usize) -> Result<i128> {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut det: i128 = 1;
    let mut sign = 1i128;
    loop {
        if rows.is_empty() {
            return Ok(sign * det);
        }
        let mut found: Option<(usize, usize)> = None;
        'search: {
            for (ri, &r) in rows.iter().enumerate() {
                let mut nz = None;
                let mut cnt = 0;
                for (ci, &c) in cols.iter().enumerate() {
                    if work[r * n + c] != 0 {
                        cnt += 1;
                        nz = Some(ci);
                        if cnt > 1 {
                            break;
                        }
                    }
                }
                if cnt == 0 {
                    return Ok(0);
                }
                if cnt == 1 {
                    found = Some((ri, nz.expect("counted")));
                    break 'search;
                }
            }
            for (ci, &c) in cols.iter().enumerate() {
                let mut nz = None;
                let mut cnt = 0;
                for (ri, &r) in rows.iter().enumerate() {
                    if work[r * n + c] != 0 {
                        cnt += 1;
                        nz = Some(ri);
                        if cnt > 1 {
                            break;
                        }
                    }
                }
                if cnt == 0 {
                    return Ok(0);
                }
                if cnt == 1 {
                    found = Some((nz.expect("counted"), ci));
                    break 'search;
                }
            }
        }
        match found {
            Some((ri, ci)) => {
                let v = work[rows[ri] * n + cols[ci]];
                det = det.checked_mul(v).ok_or(LinalgError::Overflow)?;
                if (ri + ci) % 2 == 1 {
                    sign = -sign;
                }
                rows.remove(ri);
                cols.remove(ci);
            }
            None => {
                let m = rows.len();
                let mut sub = vec![0i128; m * m];
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in cols.iter().enumerate() {
                        sub[i * m + j] = work[r * n + c];
                    }
                }
                let d = bareiss_det(&mut sub, m)?;
                return det.checked_mul(d).map(|v| sign * v).ok_or(LinalgError::Overflow);
            }
        }
    }
}

/// Fraction-free Gaussian elimination; `work` is destroyed. Returns the exact
/// determinant of the `n x n` matrix.
fn bareiss_det(work: &mut [i128], n: usize) -> Result<i128> {
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if work[k * n + k] == 0 {
            let pivot = (k + 1..n).find(|&r| work[r * n + k] != 0);
            match pivot {
                None => return Ok(0),
                Some(r) => {
                    for j in 0..n {
                        work.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
            }
        }
        let pivot = work[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let a = work[i * n + j].checked_mul(pivot).ok_or(LinalgError::Overflow)?;
                let b = work[i * n + k].checked_mul(work[k * n + j]).ok_or(LinalgError::Overflow)?;
                work[i * n + j] = a.checked_sub(b).ok_or(LinalgError::Overflow)? / prev;
            }
            work[i * n + k] = 0;
        }
        prev = pivot;
    }
    Ok(sign * work[(n - 1) * n + (n - 1)])
}
