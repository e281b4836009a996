//! Closest-vector quantizers for the catalog lattices.
//!
//! Queries are dyadic rationals (measured reals enter at a stated resolution
//! of `2^-20`), so every distance comparison is an exact integer comparison
//! and tie handling is deterministic. The tie rule, everywhere, is: smallest
//! squared distance, then smallest squared norm, then lexicographically
//! smallest vector.
//!
//! Structured quantizers: componentwise rounding for `Z^n`, rounding plus a
//! single parity repair for `D_n`, and coset unions for `E8`, `BW8` and
//! `BW16` (two `D8` cosets, sixteen `2 Z^8` cosets, and thirty-two `2 D16`
//! cosets respectively). `BW32` and `BW64` have no quantizer here: their
//! coset counts (`2^32`, `2^49`) put them out of reach, and the catalog
//! carries them for analysis only.

use std::sync::OnceLock;

use thiserror::Error;

use crate::catalog::{LatticeName, LinearCodeSpec};
use crate::linalg::{Dyadic, DyadicVec, LinalgError};

#[derive(Debug, Error)]
pub enum CvpError {
    #[error("no closest-vector decoder for {0} (coset count out of reach)")]
    DecoderUnavailable(LatticeName),
    #[error("coset representative list is empty")]
    EmptyCosetList,
    #[error("dimension {got} not valid for this quantizer (expected {expected})")]
    WrongDimension { expected: usize, got: usize },
    #[error("scale factor must be a positive power of two")]
    InvalidScale,
    #[error("enumeration budget exceeded ({0} points)")]
    EnumerationBudget(u128),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

type Result<T> = std::result::Result<T, CvpError>;

/// Componentwise nearest integer; exact halves round toward zero, which
/// realizes the smallest-norm tie rule coordinate by coordinate.
pub fn q_zn(t: &DyadicVec) -> DyadicVec {
    let den = t.log2_denominator();
    let num = t.numerators().iter().map(|&a| round_half_toward_zero(a, den)).collect();
    DyadicVec::new(num, 0)
}

fn round_half_toward_zero(a: i64, den: u32) -> i64 {
    if den == 0 {
        return a;
    }
    let m = 1i64 << den;
    let fl = a.div_euclid(m);
    let r = a.rem_euclid(m);
    match ((r as i128) << 1).cmp(&(m as i128)) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if fl < 0 {
                fl + 1
            } else {
                fl
            }
        }
    }
}

/// Keeps the better of `best` and `cand` under the (distance, norm, lex) rule.
fn consider(t: &DyadicVec, best: &mut Option<(DyadicVec, Dyadic)>, cand: DyadicVec) {
    let d = cand.dist_sq(t);
    match best {
        None => *best = Some((cand, d)),
        Some((bv, bd)) => {
            let replace = match d.cmp(bd) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => match cand.norm_sq().cmp(&bv.norm_sq()) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => cand.lex_cmp(bv) == std::cmp::Ordering::Less,
                },
            };
            if replace {
                *best = Some((cand, d));
            }
        }
    }
}

/// Closest point of `D_n` (integer vectors with even coordinate sum).
///
/// Rounds componentwise; on odd parity, flips one coordinate by one. All
/// `2n` single flips are compared exactly, which picks the flip of the
/// largest rounding error in the error's direction and settles ties by the
/// norm-then-lex rule.
pub fn q_dn(t: &DyadicVec) -> DyadicVec {
    assert!(t.dim() >= 2, "D_n needs dimension >= 2");
    let u = q_zn(t);
    let parity: i64 = u.numerators().iter().sum::<i64>() & 1;
    if parity == 0 {
        return u;
    }
    let mut best: Option<(DyadicVec, Dyadic)> = None;
    for i in 0..u.dim() {
        for s in [-1i64, 1] {
            let mut num = u.numerators().to_vec();
            num[i] += s;
            consider(t, &mut best, DyadicVec::new(num, 0));
        }
    }
    best.expect("2n candidates considered").0
}

/// Closest point of `E8`, treated as the union of `D8` and `D8 + h` with the
/// glue vector `h = (1/2, ..., 1/2)`.
pub fn q_e8(t: &DyadicVec) -> DyadicVec {
    check_dim(t, 8).expect("E8 queries are 8-dimensional");
    let h = DyadicVec::new(vec![1; 8], 1);
    let mut best: Option<(DyadicVec, Dyadic)> = None;
    consider(t, &mut best, q_dn(t));
    let shifted = t.checked_sub(&h).expect("dims match");
    let coset = h.checked_add(&q_dn(&shifted)).expect("dims match");
    consider(t, &mut best, coset);
    best.expect("two cosets considered").0
}

fn check_dim(t: &DyadicVec, expected: usize) -> Result<()> {
    if t.dim() != expected {
        return Err(CvpError::WrongDimension { expected, got: t.dim() });
    }
    Ok(())
}

fn code_cosets(code: fn() -> LinearCodeSpec, cache: &'static OnceLock<Vec<Vec<i64>>>) -> &'static [Vec<i64>] {
    cache.get_or_init(|| {
        let c = code();
        c.codewords().iter().map(|&w| c.word_to_vec(w)).collect()
    })
}

static BW8_COSETS: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
static BW16_COSETS: OnceLock<Vec<Vec<i64>>> = OnceLock::new();

/// Closest point of `BW8 = (8,4,4) + 2 Z^8`: best of sixteen scaled-integer
/// cosets.
pub fn q_bw8(t: &DyadicVec) -> DyadicVec {
    check_dim(t, 8).expect("BW8 queries are 8-dimensional");
    let mut best: Option<(DyadicVec, Dyadic)> = None;
    for d in code_cosets(|| LinearCodeSpec::reed_muller(1, 3), &BW8_COSETS) {
        consider(t, &mut best, coset_candidate(t, d, q_zn));
    }
    best.expect("16 cosets considered").0
}

/// Closest point of `BW16 = (16,5,8) + 2 D16`: best of thirty-two cosets,
/// each decoded as `2 Q_D16((t - d)/2) + d`.
pub fn q_bw16(t: &DyadicVec) -> DyadicVec {
    check_dim(t, 16).expect("BW16 queries are 16-dimensional");
    let mut best: Option<(DyadicVec, Dyadic)> = None;
    for d in code_cosets(|| LinearCodeSpec::reed_muller(1, 4), &BW16_COSETS) {
        consider(t, &mut best, coset_candidate(t, d, q_dn));
    }
    best.expect("32 cosets considered").0
}

/// `2 Q((t - d)/2) + d` for a 0/1 coset representative `d`.
fn coset_candidate(t: &DyadicVec, d: &[i64], sub: fn(&DyadicVec) -> DyadicVec) -> DyadicVec {
    let dv = DyadicVec::from_ints(d);
    let halved = t.checked_sub(&dv).expect("dims match").scale_pow2(-1).expect("halving never overflows");
    let q = sub(&halved).scale_pow2(1).expect("doubling an in-range point");
    q.checked_add(&dv).expect("dims match")
}

/// Generic coset-union decoding: the best of `g + Q'(t - g)` over the
/// representatives `g` of the quotient, under the (distance, norm, lex) rule.
pub fn coset_decode<F>(sub_quantizer: F, coset_reps: &[DyadicVec], t: &DyadicVec) -> Result<DyadicVec>
where
    F: Fn(&DyadicVec) -> DyadicVec,
{
    if coset_reps.is_empty() {
        return Err(CvpError::EmptyCosetList);
    }
    let mut best: Option<(DyadicVec, Dyadic)> = None;
    for g in coset_reps {
        let shifted = t.checked_sub(g)?;
        let cand = g.checked_add(&sub_quantizer(&shifted))?;
        consider(t, &mut best, cand);
    }
    Ok(best.expect("nonempty rep list").0)
}

/// Quantizes onto `c * L` via `c * Q_L(t / c)`. The scale must be a
/// (possibly fractional) power of two so the division stays exact.
pub fn q_scaled<F>(base_quantizer: F, c: Dyadic, t: &DyadicVec) -> Result<DyadicVec>
where
    F: Fn(&DyadicVec) -> DyadicVec,
{
    if !c.is_positive() {
        return Err(CvpError::InvalidScale);
    }
    let recip = c.checked_recip().map_err(|_| CvpError::InvalidScale)?;
    let inner = t.mul_scalar(recip)?;
    base_quantizer(&inner).mul_scalar(c).map_err(CvpError::from)
}

/// Blockwise application of a quantizer to consecutive chunks.
pub fn q_product<F>(block_quantizer: F, block_dim: usize, t: &DyadicVec) -> Result<DyadicVec>
where
    F: Fn(&DyadicVec) -> DyadicVec,
{
    if block_dim == 0 || t.dim() % block_dim != 0 {
        return Err(CvpError::WrongDimension { expected: block_dim, got: t.dim() });
    }
    let den = t.log2_denominator();
    let parts: Vec<DyadicVec> = t
        .numerators()
        .chunks(block_dim)
        .map(|chunk| block_quantizer(&DyadicVec::new(chunk.to_vec(), den)))
        .collect();
    let max_den = parts.iter().map(DyadicVec::log2_denominator).max().unwrap_or(0);
    let mut num = Vec::with_capacity(t.dim());
    for part in &parts {
        let shift = max_den - part.log2_denominator();
        num.extend(part.numerators().iter().map(|&n| n << shift));
    }
    Ok(DyadicVec::new(num, max_den))
}

/// The modulo-lattice operation `t - Q(t)`: the quantization error, a point
/// of the Voronoi region of the origin.
pub fn mod_lattice<F>(t: &DyadicVec, quantizer: F) -> DyadicVec
where
    F: Fn(&DyadicVec) -> DyadicVec,
{
    t.checked_sub(&quantizer(t)).expect("quantizer preserves dimension")
}

/// Dispatches to the structured quantizer for a catalog lattice.
///
/// `Z` accepts any dimension, `D4` is the parity rule in dimension 4, and
/// the remaining supported lattices are fixed-dimension coset decoders.
pub fn quantize(name: LatticeName, t: &DyadicVec) -> Result<DyadicVec> {
    match name {
        LatticeName::Z => Ok(q_zn(t)),
        LatticeName::D4 => {
            check_dim(t, 4)?;
            Ok(q_dn(t))
        }
        LatticeName::E8 => {
            check_dim(t, 8)?;
            Ok(q_e8(t))
        }
        LatticeName::Bw8 => {
            check_dim(t, 8)?;
            Ok(q_bw8(t))
        }
        LatticeName::Bw16 => {
            check_dim(t, 16)?;
            Ok(q_bw16(t))
        }
        LatticeName::Bw32 | LatticeName::Bw64 | LatticeName::Leech24 => {
            Err(CvpError::DecoderUnavailable(name))
        }
    }
}

/// True iff a structured decoder exists for the lattice.
pub fn has_decoder(name: LatticeName) -> bool {
    !matches!(name, LatticeName::Bw32 | LatticeName::Bw64 | LatticeName::Leech24)
}

pub mod oracle {
    //! Brute-force closest-vector oracles for the test suites.
    //!
    //! These are deliberately dumb and independent of the structured
    //! decoders: box enumeration around the query for small dimensions, and
    //! exhaustive enumeration of all `2^20` integer cosets for `BW16`.

    use super::*;
    use crate::linalg::DyadicMatrix;

    /// Exact nearest point by enumerating every lattice point `Bz` in a box
    /// guaranteed to contain all points within the search radius.
    ///
    /// The radius starts from the rounding candidate `B round(B^-1 t)` and is
    /// capped by `radius_hint` when positive (pass a covering-radius bound).
    /// Fails if the box exceeds the enumeration budget.
    pub fn brute_force_cvp(basis: &DyadicMatrix, radius_hint: f64, t: &DyadicVec) -> Result<DyadicVec> {
        const BUDGET: u128 = 200_000_000;
        let n = basis.rows();
        if t.dim() != n {
            return Err(CvpError::WrongDimension { expected: n, got: t.dim() });
        }
        let binv = basis.inverse_exact()?;
        let c = binv.matvec_dyadic(t)?;
        let z0 = q_zn(&c);
        let x0 = basis.matvec(z0.numerators())?;
        let d0 = x0.dist_sq(t).to_f64().sqrt();
        let mut radius = d0 + 1e-9;
        if radius_hint > 0.0 {
            radius = radius.min(radius_hint);
        }

        // |z_i - c_i| <= radius * ||row_i(B^-1)||
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        let mut points: u128 = 1;
        for i in 0..n {
            let row = DyadicVec::new(
                (0..n).map(|j| binv.numerators()[i * n + j]).collect(),
                binv.log2_denominator(),
            );
            let r = radius * row.norm_sq().to_f64().sqrt() + 1e-7;
            let ci = c.at(i).to_f64();
            let l = (ci - r).ceil() as i64;
            let h = (ci + r).floor() as i64;
            points = points.saturating_mul((h - l + 1).max(0) as u128);
            if points > BUDGET {
                return Err(CvpError::EnumerationBudget(points));
            }
            lo.push(l);
            hi.push(h);
        }

        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| (0..n).map(|i| basis.numerators()[i * n + j]).collect())
            .collect();
        let mut best: Option<(DyadicVec, Dyadic)> = None;
        let mut partial = vec![vec![0i64; n]; n + 1];
        enumerate_box(&cols, &lo, &hi, basis.log2_denominator(), 0, &mut partial, t, &mut best);
        Ok(best.expect("box contains the rounding candidate").0)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_box(
        cols: &[Vec<i64>],
        lo: &[i64],
        hi: &[i64],
        den: u32,
        depth: usize,
        partial: &mut Vec<Vec<i64>>,
        t: &DyadicVec,
        best: &mut Option<(DyadicVec, Dyadic)>,
    ) {
        let n = cols.len();
        if depth == n {
            let cand = DyadicVec::new(partial[n].clone(), den);
            consider(t, best, cand);
            return;
        }
        for v in lo[depth]..=hi[depth] {
            let (pre, post) = partial.split_at_mut(depth + 1);
            let prev = &pre[depth];
            let next = &mut post[0];
            for i in 0..n {
                next[i] = prev[i] + v * cols[depth][i];
            }
            enumerate_box(cols, lo, hi, den, depth + 1, partial, t, best);
        }
    }

    /// Exhaustive `BW16` oracle: enumerates all `2^20` residues
    /// `c0 + 2 c1 mod 4` (`c0` over the 32 first-order codewords, `c1` over
    /// the `2^15` even-weight words) and takes per-coordinate nearest points
    /// of `4 Z^16` within each coset. Returns the point and its exact
    /// squared distance.
    pub fn bw16_exhaustive(t: &DyadicVec) -> (DyadicVec, Dyadic) {
        assert_eq!(t.dim(), 16);
        let den = t.log2_denominator();
        let scale = 1i64 << den;
        // per-coordinate cost and best value for each residue mod 4
        let mut cost = [[0i128; 4]; 16];
        let mut val = [[0i64; 4]; 16];
        for i in 0..16 {
            let ti = t.numerators()[i];
            for r in 0..4i64 {
                let k = round_to_multiple(ti - r * scale, 4 * scale);
                let mut best_v = r + 4 * k;
                let mut best_c = sq(ti - best_v * scale);
                for alt in [k - 1, k + 1] {
                    let v = r + 4 * alt;
                    let c = sq(ti - v * scale);
                    if c < best_c || (c == best_c && smaller_mag(v, best_v)) {
                        best_v = v;
                        best_c = c;
                    }
                }
                cost[i][r as usize] = best_c;
                val[i][r as usize] = best_v;
            }
        }

        let rm14 = LinearCodeSpec::reed_muller(1, 4);
        let mut best_total = i128::MAX;
        let mut best_pair = (0u64, 0u64);
        for &c0 in &rm14.codewords() {
            for w in 0u64..1 << 16 {
                if w.count_ones() % 2 == 1 {
                    continue;
                }
                let mut total = 0i128;
                for i in 0..16 {
                    let r = (((c0 >> i) & 1) + 2 * ((w >> i) & 1)) as usize;
                    total += cost[i][r];
                }
                if total < best_total {
                    best_total = total;
                    best_pair = (c0, w);
                }
            }
        }
        let (c0, w) = best_pair;
        let num: Vec<i64> = (0..16)
            .map(|i| {
                let r = (((c0 >> i) & 1) + 2 * ((w >> i) & 1)) as usize;
                val[i][r]
            })
            .collect();
        let point = DyadicVec::new(num, 0);
        let d = point.dist_sq(t);
        (point, d)
    }

    fn sq(x: i64) -> i128 {
        (x as i128) * (x as i128)
    }

    fn smaller_mag(a: i64, b: i64) -> bool {
        a.abs() < b.abs() || (a.abs() == b.abs() && a < b)
    }

    /// Nearest multiple count `k` with `k*m` closest to `x`, ties toward zero.
    fn round_to_multiple(x: i64, m: i64) -> i64 {
        let fl = x.div_euclid(m);
        let r = x.rem_euclid(m);
        match ((r as i128) << 1).cmp(&(m as i128)) {
            std::cmp::Ordering::Less => fl,
            std::cmp::Ordering::Greater => fl + 1,
            std::cmp::Ordering::Equal => {
                if fl < 0 {
                    fl + 1
                } else {
                    fl
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_get, LatticeName};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn dy(vals: &[f64]) -> DyadicVec {
        DyadicVec::from_f64_grid(vals, 20)
    }

    fn ints(v: &DyadicVec) -> Vec<i64> {
        v.to_int_vec().unwrap()
    }

    /// Random dyadic query with odd numerators (avoids exact rounding ties).
    fn random_query(rng: &mut ChaCha20Rng, dim: usize, span: f64) -> DyadicVec {
        let num: Vec<i64> = (0..dim)
            .map(|_| {
                let v = (rng.gen::<f64>() * 2.0 - 1.0) * span * (1 << 20) as f64;
                (v as i64) | 1
            })
            .collect();
        DyadicVec::new(num, 20)
    }

    fn e8_member(v: &DyadicVec) -> bool {
        match v.log2_denominator() {
            0 => v.numerators().iter().sum::<i64>() % 2 == 0,
            1 => {
                v.numerators().iter().all(|n| n % 2 != 0)
                    && v.numerators().iter().map(|n| (n - 1) / 2).sum::<i64>() % 2 == 0
            }
            _ => false,
        }
    }

    fn bw16_member(v: &DyadicVec) -> bool {
        let Ok(x) = v.to_int_vec() else { return false };
        let rm = LinearCodeSpec::reed_muller(1, 4);
        let mut word = 0u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi.rem_euclid(2) == 1 {
                word |= 1 << i;
            }
        }
        if !rm.contains(word) {
            return false;
        }
        let half_sum: i64 = x.iter().enumerate().map(|(i, &xi)| (xi - ((word >> i) & 1) as i64) / 2).sum();
        half_sum % 2 == 0
    }

    #[test]
    fn q_zn_rounding_and_ties() {
        assert_eq!(ints(&q_zn(&dy(&[0.4, -0.6]))), vec![0, -1]);
        assert_eq!(ints(&q_zn(&dy(&[0.5, -0.5]))), vec![0, 0]);
        assert_eq!(ints(&q_zn(&dy(&[3.0, 7.0]))), vec![3, 7]);
        assert_eq!(ints(&q_zn(&dy(&[1.5, -1.5]))), vec![1, -1]);
    }

    #[test]
    fn q_dn_examples() {
        assert_eq!(ints(&q_dn(&dy(&[0.6, 0.6]))), vec![1, 1]);
        assert_eq!(ints(&q_dn(&dy(&[0.6, 0.2]))), vec![0, 0]);
        // even-sum integer vectors are fixed points
        assert_eq!(ints(&q_dn(&DyadicVec::from_ints(&[3, 1, -2, 2]))), vec![3, 1, -2, 2]);
    }

    #[test]
    fn q_dn_parity_always_even() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let t = random_query(&mut rng, 5, 6.0);
            let v = q_dn(&t);
            assert_eq!(ints(&v).iter().sum::<i64>() % 2, 0);
        }
    }

    #[test]
    fn q_e8_examples() {
        // glue vector plus a small push stays put
        let mut h = vec![0.5; 8];
        h[0] += 0.01;
        let out = q_e8(&dy(&h));
        assert_eq!(out, DyadicVec::new(vec![1; 8], 1));
        // origin fixed
        assert_eq!(q_e8(&DyadicVec::zeros(8)), DyadicVec::zeros(8));
        // e1 ties resolve to the origin (smallest norm)
        let e1 = DyadicVec::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(q_e8(&e1), DyadicVec::zeros(8));
    }

    #[test]
    fn q_e8_outputs_are_members() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let t = random_query(&mut rng, 8, 3.0);
            assert!(e8_member(&q_e8(&t)));
        }
    }

    #[test]
    fn q_bw16_fixes_lattice_points() {
        assert_eq!(q_bw16(&DyadicVec::zeros(16)), DyadicVec::zeros(16));
        // the all-ones vector is a first-order codeword, hence a lattice point
        let ones = DyadicVec::from_ints(&[1; 16]);
        assert_eq!(q_bw16(&ones), ones);
    }

    #[test]
    fn q_bw16_decodes_within_packing_radius() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let rm = LinearCodeSpec::reed_muller(1, 4);
        let words = rm.codewords();
        for _ in 0..300 {
            let d = rm.word_to_vec(words[rng.gen_range(0..words.len())]);
            let noise: Vec<f64> = (0..16).map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * 0.35).collect();
            let q: Vec<f64> = d.iter().zip(&noise).map(|(&a, &b)| a as f64 + b).collect();
            let out = q_bw16(&dy(&q));
            assert_eq!(ints(&out), d);
        }
    }

    #[test]
    fn q_bw16_outputs_are_members() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..500 {
            let t = random_query(&mut rng, 16, 4.0);
            assert!(bw16_member(&q_bw16(&t)));
        }
    }

    #[test]
    fn coset_decode_reduces_to_sub_quantizer_for_origin_rep() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let reps = [DyadicVec::zeros(4)];
        for _ in 0..200 {
            let t = random_query(&mut rng, 4, 3.0);
            assert_eq!(coset_decode(q_dn, &reps, &t).unwrap(), q_dn(&t));
        }
    }

    #[test]
    fn coset_decode_matches_q_e8() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let reps = [DyadicVec::zeros(8), DyadicVec::new(vec![1; 8], 1)];
        for _ in 0..10_000 {
            let t = random_query(&mut rng, 8, 3.0);
            assert_eq!(coset_decode(q_dn, &reps, &t).unwrap(), q_e8(&t));
        }
    }

    #[test]
    fn coset_decode_matches_q_bw16() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let rm = LinearCodeSpec::reed_muller(1, 4);
        let reps: Vec<DyadicVec> = rm
            .codewords()
            .iter()
            .map(|&w| DyadicVec::from_ints(&rm.word_to_vec(w)))
            .collect();
        // sub-lattice is 2 D16
        let sub = |t: &DyadicVec| {
            q_scaled(q_dn, Dyadic::from_int(2), t).expect("scale 2 is valid")
        };
        for _ in 0..10_000 {
            let t = random_query(&mut rng, 16, 4.0);
            assert_eq!(coset_decode(sub, &reps, &t).unwrap(), q_bw16(&t));
        }
    }

    #[test]
    fn coset_decode_rejects_empty_reps() {
        let t = DyadicVec::zeros(2);
        assert!(matches!(coset_decode(q_zn, &[], &t), Err(CvpError::EmptyCosetList)));
    }

    #[test]
    fn q_scaled_examples() {
        let out = q_scaled(q_zn, Dyadic::from_int(4), &dy(&[5.0, 7.0])).unwrap();
        assert_eq!(ints(&out), vec![4, 8]);
        // scale 1 is the identity wrapper
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..100 {
            let t = random_query(&mut rng, 3, 3.0);
            assert_eq!(q_scaled(q_zn, Dyadic::from_int(1), &t).unwrap(), q_zn(&t));
        }
        assert!(matches!(
            q_scaled(q_zn, Dyadic::from_int(3), &dy(&[1.0])),
            Err(CvpError::InvalidScale)
        ));
        assert!(matches!(
            q_scaled(q_zn, Dyadic::from_int(-2), &dy(&[1.0])),
            Err(CvpError::InvalidScale)
        ));
    }

    #[test]
    fn q_product_applies_blockwise() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..200 {
            let t = random_query(&mut rng, 64, 2.0);
            let whole = q_product(q_e8, 8, &t).unwrap();
            for b in 0..8 {
                let chunk = DyadicVec::new(t.numerators()[b * 8..(b + 1) * 8].to_vec(), t.log2_denominator());
                let part = q_e8(&chunk);
                let shift = whole.log2_denominator() - part.log2_denominator();
                let expect: Vec<i64> = part.numerators().iter().map(|&n| n << shift).collect();
                assert_eq!(&whole.numerators()[b * 8..(b + 1) * 8], &expect[..]);
            }
        }
        assert!(q_product(q_e8, 7, &DyadicVec::zeros(64)).is_err());
    }

    #[test]
    fn mod_lattice_properties() {
        // lattice points map to zero
        let v = DyadicVec::from_ints(&[2, 4, -6, 0]);
        assert_eq!(mod_lattice(&v, q_dn), DyadicVec::zeros(4));
        // a point already in the Voronoi region is its own error
        let t = dy(&[0.3, 0.3]);
        assert_eq!(mod_lattice(&t, q_dn), t);
        // idempotence
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        for _ in 0..10_000 {
            let t = random_query(&mut rng, 4, 5.0);
            let e = mod_lattice(&t, q_dn);
            assert_eq!(mod_lattice(&e, q_dn), e);
        }
    }

    #[test]
    fn translation_invariance_by_lattice_vectors() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let t = random_query(&mut rng, 8, 3.0);
            // random even-sum integer shift
            let mut shift: Vec<i64> = (0..8).map(|_| rng.gen_range(-6..=6i64)).collect();
            if shift.iter().sum::<i64>() % 2 != 0 {
                shift[0] += 1;
            }
            let sv = DyadicVec::from_ints(&shift);
            let shifted = t.checked_add(&sv).unwrap();
            assert_eq!(q_e8(&shifted), q_e8(&t).checked_add(&sv).unwrap());
            assert_eq!(q_dn(&shifted), q_dn(&t).checked_add(&sv).unwrap());
        }
    }

    #[test]
    fn decoding_radius_recovery() {
        // noise strictly inside half the minimum distance decodes exactly
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let lambda1 = (2.0f64).sqrt(); // E8 at volume 1
        for _ in 0..2000 {
            let mut z: Vec<i64> = (0..8).map(|_| rng.gen_range(-4..=4i64)).collect();
            if z.iter().sum::<i64>() % 2 != 0 {
                z[0] += 1;
            }
            let x = DyadicVec::from_ints(&z);
            let mut n: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
            let target = rng.gen::<f64>() * 0.45 * lambda1;
            for v in &mut n {
                *v *= target / norm;
            }
            let y: Vec<f64> = x.to_f64_vec().iter().zip(&n).map(|(a, b)| a + b).collect();
            assert_eq!(q_e8(&dy(&y)), x);
        }
    }

    #[test]
    fn q_dn_matches_brute_force_small_dims() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for dim in 2..=6usize {
            let basis = dn_basis(dim);
            // covering radius of D_n is max(1, sqrt(n)/2)
            let hint = (dim as f64).sqrt().max(2.0) / 2.0 + 1e-6;
            for _ in 0..200 {
                let t = random_query(&mut rng, dim, 3.0);
                let fast = q_dn(&t);
                let slow = oracle::brute_force_cvp(&basis, hint, &t).unwrap();
                assert_eq!(fast.dist_sq(&t), slow.dist_sq(&t), "dim {dim}");
                assert_eq!(fast, slow, "dim {dim}");
            }
        }
    }

    #[test]
    fn q_e8_matches_brute_force() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let basis = catalog_get(LatticeName::E8).basis.as_ref().unwrap().full_matrix();
        for _ in 0..150 {
            let t = random_query(&mut rng, 8, 2.0);
            let fast = q_e8(&t);
            let slow = oracle::brute_force_cvp(&basis, 1.0 + 1e-6, &t).unwrap();
            assert_eq!(fast.dist_sq(&t), slow.dist_sq(&t));
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn q_bw16_matches_exhaustive_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        for _ in 0..25 {
            let t = random_query(&mut rng, 16, 2.0);
            let fast = q_bw16(&t);
            let (point, d) = oracle::bw16_exhaustive(&t);
            assert_eq!(fast.dist_sq(&t), d);
            assert!(bw16_member(&point));
        }
    }

    #[test]
    fn brute_force_budget_guard() {
        let basis = catalog_get(LatticeName::Bw16).basis.as_ref().unwrap().full_matrix();
        let t = DyadicVec::new(vec![1 << 19; 16], 20);
        assert!(matches!(
            oracle::brute_force_cvp(&basis, 3.0, &t),
            Err(CvpError::EnumerationBudget(_))
        ));
    }

    #[test]
    fn quantize_dispatch_and_unavailable_decoders() {
        assert!(quantize(LatticeName::Z, &dy(&[0.4, 0.6])).is_ok());
        assert!(matches!(
            quantize(LatticeName::Bw32, &DyadicVec::zeros(32)),
            Err(CvpError::DecoderUnavailable(LatticeName::Bw32))
        ));
        assert!(matches!(
            quantize(LatticeName::Bw64, &DyadicVec::zeros(64)),
            Err(CvpError::DecoderUnavailable(LatticeName::Bw64))
        ));
        assert!(!has_decoder(LatticeName::Bw32));
        assert!(has_decoder(LatticeName::E8));
        assert!(matches!(
            quantize(LatticeName::E8, &DyadicVec::zeros(4)),
            Err(CvpError::WrongDimension { expected: 8, got: 4 })
        ));
    }

    fn dn_basis(dim: usize) -> crate::linalg::DyadicMatrix {
        // identity with last row all ones, diagonal (1,...,1,2)
        let mut rows = vec![vec![0i64; dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        for j in 0..dim {
            rows[dim - 1][j] = if j == dim - 1 { 2 } else { 1 };
        }
        crate::linalg::DyadicMatrix::from_rows(&rows, 0)
    }
}
