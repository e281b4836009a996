//! Bijective labeling between bit strings and lattice codewords under
//! hypercube shaping.
//!
//! The pipeline per block of dimension `t` is
//!
//! ```text
//! bits <-> message index z (mixed radix) <-> codeword x = (B_f z) mod p
//! ```
//!
//! with the coarse lattice `q Z^n`, `q = 2^delta * p`. Decoding lifts a
//! received word to its centered representative, quantizes onto the fine
//! lattice and inverts the labeling; the message is recovered exactly
//! whenever the quantized noise lands in the coarse lattice.
//!
//! Bit layout is fixed for external reproducibility: big-endian within each
//! coordinate, coordinates in basis-column order, blocks in ascending
//! position. Radices that are not powers of two are supported at the index
//! level only.

use std::collections::HashSet;

use thiserror::Error;

use crate::catalog::{CatalogError, LatticeSpec};
use crate::cvp::{self, CvpError};
use crate::linalg::{DyadicMatrix, DyadicVec, LinalgError};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("shaping modulus {p} is not an integer multiple of diagonal entry {index}")]
    InvalidShapingModulus { p: i64, index: usize },
    #[error("lattice has no basis; cannot build a code over it")]
    NoBasis,
    #[error("message index out of range at coordinate {index}")]
    IndexOutOfRange { index: usize },
    #[error("wrong bit length: expected {expected}, got {got}")]
    WrongBitLength { expected: usize, got: usize },
    #[error("radix {radix} at coordinate {index} is not a power of two; bit mapping unavailable")]
    NonPowerOfTwoRadix { radix: i64, index: usize },
    #[error("vector is not a point of the fine lattice")]
    NotInFineLattice,
    #[error("code too large to enumerate ({0} codewords)")]
    EnumerationTooLarge(u128),
    #[error("received word has wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("codeword coordinates are not integral at scale 2^{delta} (use delta >= 1 for half-integer lattices)")]
    NonIntegralCodeword { delta: u32 },
    #[error("invalid hex string: {0}")]
    BadHex(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cvp(#[from] CvpError),
}

type Result<T> = std::result::Result<T, CodecError>;

/// A nested-lattice code configuration: fine lattice `2^delta * L_t^blocks`,
/// coarse lattice `q Z^n` with `q = 2^delta * p`.
#[derive(Debug, Clone)]
pub struct CodeConfig {
    base: LatticeSpec,
    p: i64,
    delta: u32,
    blocks: usize,
    radices: Vec<i64>,
    q: i64,
    bf: DyadicMatrix,
    u_inv: DyadicMatrix,
}

impl CodeConfig {
    /// Builds a configuration over `blocks` copies of the block lattice.
    ///
    /// `p` must be a positive common multiple of the diagonal entries of the
    /// block basis, so that every radix `p_i = p / pi_i` is a positive
    /// integer.
    pub fn new(base: LatticeSpec, p: i64, delta: u32, blocks: usize) -> Result<Self> {
        assert!(p >= 1, "shaping modulus must be positive");
        assert!(blocks >= 1, "need at least one block");
        let basis = base.basis.as_ref().ok_or(CodecError::NoBasis)?;
        let mut radices = Vec::with_capacity(basis.dim());
        for (i, pi) in basis.diagonal().iter().enumerate() {
            // p / pi = p * 2^den / num must be a positive integer
            let scaled = (p as i128) << pi.log2_denominator();
            if pi.numerator() <= 0 || scaled % pi.numerator() != 0 {
                return Err(CodecError::InvalidShapingModulus { p, index: i });
            }
            radices.push((scaled / pi.numerator()) as i64);
        }
        let q = p
            .checked_shl(delta)
            .filter(|v| v >> delta == p)
            .expect("q = 2^delta * p fits in i64");
        let bf = basis.full_matrix();
        // The unimodular factor always has an integer inverse; delabeling
        // divides by the diagonal afterwards, which also covers bases whose
        // full inverse leaves the dyadic rationals (odd diagonal entries).
        let u_inv = basis.unimodular_factor().inverse_exact()?;
        Ok(CodeConfig { base, p, delta, blocks, radices, q, bf, u_inv })
    }

    pub fn base(&self) -> &LatticeSpec {
        &self.base
    }

    pub fn block_dim(&self) -> usize {
        self.radices.len()
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.block_dim() * self.blocks
    }

    pub fn shaping_modulus(&self) -> i64 {
        self.p
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn radices(&self) -> &[i64] {
        &self.radices
    }

    /// Bits carried by one block, when every radix is a power of two.
    pub fn bits_per_block(&self) -> Result<usize> {
        let mut bits = 0usize;
        for (i, &r) in self.radices.iter().enumerate() {
            if !(r as u64).is_power_of_two() {
                return Err(CodecError::NonPowerOfTwoRadix { radix: r, index: i });
            }
            bits += r.trailing_zeros() as usize;
        }
        Ok(bits)
    }

    /// Total encoded bits across all blocks.
    pub fn total_bits(&self) -> Result<usize> {
        Ok(self.bits_per_block()? * self.blocks)
    }

    /// Number of codewords per block, `prod p_i`.
    pub fn codewords_per_block(&self) -> u128 {
        self.radices.iter().map(|&r| r as u128).product()
    }
}

/// A per-block message index `z` with `0 <= z_i < p_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MessageIndex(Vec<i64>);

impl MessageIndex {
    pub fn new(cfg: &CodeConfig, z: Vec<i64>) -> Result<Self> {
        if z.len() != cfg.block_dim() {
            return Err(CodecError::WrongDimension { expected: cfg.block_dim(), got: z.len() });
        }
        for (i, (&zi, &r)) in z.iter().zip(cfg.radices()).enumerate() {
            if zi < 0 || zi >= r {
                return Err(CodecError::IndexOutOfRange { index: i });
            }
        }
        Ok(MessageIndex(z))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// Labels a message index into its codeword `x = (B_f z) mod p`, with
/// coordinates reduced into `[0, p)`. Coordinates may be half-integral for
/// lattices with dyadic bases; they stay exact.
pub fn label(cfg: &CodeConfig, z: &MessageIndex) -> DyadicVec {
    let x = cfg.bf.matvec(z.as_slice()).expect("dimension fixed by MessageIndex");
    mod_p(&x, cfg.p)
}

fn mod_p(x: &DyadicVec, p: i64) -> DyadicVec {
    let den = x.log2_denominator();
    let modulus = p << den;
    let num = x.numerators().iter().map(|&n| n.rem_euclid(modulus)).collect();
    DyadicVec::new(num, den)
}

/// Inverts the labeling: `z_i = (B_f^-1 x)_i mod p_i`.
///
/// Computed as `diag(pi)^-1 (U^-1 x)` so that bases with odd diagonal
/// entries stay exact. `x` may be any point of the fine lattice (codeword
/// representatives, codewords shifted by coarse vectors, raw quantizer
/// outputs); a non-integral coordinate reports that `x` is not in the
/// lattice.
pub fn delabel(cfg: &CodeConfig, x: &DyadicVec) -> Result<MessageIndex> {
    if x.dim() != cfg.block_dim() {
        return Err(CodecError::WrongDimension { expected: cfg.block_dim(), got: x.dim() });
    }
    let w = cfg.u_inv.matvec_dyadic(x)?;
    let pi = cfg.base.basis.as_ref().expect("checked at construction").diagonal();
    let mut z = Vec::with_capacity(w.dim());
    for (i, p) in pi.iter().enumerate() {
        // z_i = w_i / pi_i must be an integer for lattice points
        let numer = (w.numerators()[i] as i128) << p.log2_denominator();
        let denom = p.numerator() << w.log2_denominator();
        if numer % denom != 0 {
            return Err(CodecError::NotInFineLattice);
        }
        let v = i64::try_from(numer / denom).map_err(|_| CodecError::Linalg(LinalgError::Overflow))?;
        z.push(v.rem_euclid(cfg.radices[i]));
    }
    Ok(MessageIndex(z))
}

/// Packs bits (big-endian per coordinate, basis-column order) into a message
/// index for one block.
pub fn bits_to_index(cfg: &CodeConfig, bits: &[u8]) -> Result<MessageIndex> {
    let expected = cfg.bits_per_block()?;
    if bits.len() != expected {
        return Err(CodecError::WrongBitLength { expected, got: bits.len() });
    }
    let mut z = Vec::with_capacity(cfg.block_dim());
    let mut pos = 0;
    for &r in cfg.radices() {
        let width = r.trailing_zeros() as usize;
        let mut v = 0i64;
        for _ in 0..width {
            v = (v << 1) | bits[pos] as i64;
            pos += 1;
        }
        z.push(v);
    }
    Ok(MessageIndex(z))
}

/// Unpacks a message index back into bits; exact inverse of [`bits_to_index`].
pub fn index_to_bits(cfg: &CodeConfig, z: &MessageIndex) -> Result<Vec<u8>> {
    let mut bits = Vec::with_capacity(cfg.bits_per_block()?);
    for (&zi, &r) in z.as_slice().iter().zip(cfg.radices()) {
        let width = r.trailing_zeros() as usize;
        for b in (0..width).rev() {
            bits.push(((zi >> b) & 1) as u8);
        }
    }
    Ok(bits)
}

/// Enumerates the whole code of one block (all `prod p_i` codewords).
pub fn enumerate_code(cfg: &CodeConfig) -> Result<Vec<DyadicVec>> {
    let count = cfg.codewords_per_block();
    if count > 1 << 20 {
        return Err(CodecError::EnumerationTooLarge(count));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut z = vec![0i64; cfg.block_dim()];
    loop {
        out.push(label(cfg, &MessageIndex(z.clone())));
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == z.len() {
                return Ok(out);
            }
            z[i] += 1;
            if z[i] < cfg.radices[i] {
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
}

/// Distinct codewords as a set; length equals `prod p_i` iff labeling is
/// injective on the block.
pub fn enumerate_code_set(cfg: &CodeConfig) -> Result<HashSet<DyadicVec>> {
    Ok(enumerate_code(cfg)?.into_iter().collect())
}

/// Encodes one block of bits into `[0, q)^t`: `x = 2^delta * label(z)`.
pub fn encode_block(cfg: &CodeConfig, bits: &[u8]) -> Result<Vec<i64>> {
    let z = bits_to_index(cfg, bits)?;
    let x = label(cfg, &z);
    let scaled = x.scale_pow2(cfg.delta as i32)?;
    scaled.to_int_vec().map_err(|_| CodecError::NonIntegralCodeword { delta: cfg.delta })
}

/// Decodes one received block from `Z_q^t` back to bits: centered lift,
/// closest-vector quantization onto the fine lattice, delabel, unpack.
pub fn decode_block(cfg: &CodeConfig, y: &[i64]) -> Result<Vec<u8>> {
    let z = decode_block_index(cfg, y)?;
    index_to_bits(cfg, &z)
}

/// Index-level decoding of one block (works for non-power-of-two radices).
pub fn decode_block_index(cfg: &CodeConfig, y: &[i64]) -> Result<MessageIndex> {
    if y.len() != cfg.block_dim() {
        return Err(CodecError::WrongDimension { expected: cfg.block_dim(), got: y.len() });
    }
    // centered representative in [-q/2, q/2)
    let half = cfg.q / 2;
    let centered: Vec<i64> = y
        .iter()
        .map(|&v| {
            let r = v.rem_euclid(cfg.q);
            if r >= half {
                r - cfg.q
            } else {
                r
            }
        })
        .collect();
    // Q over 2^delta * L(y) = 2^delta * Q_L(y / 2^delta); delabel directly on
    // the unscaled quantizer output.
    let t = DyadicVec::new(centered, cfg.delta);
    let w = cvp::quantize(cfg.base.name, &t)?;
    delabel(cfg, &w)
}

/// Encodes a full message (all blocks) into `[0, q)^(t*blocks)`.
pub fn encode_message(cfg: &CodeConfig, bits: &[u8]) -> Result<Vec<i64>> {
    let per_block = cfg.bits_per_block()?;
    let expected = per_block * cfg.blocks;
    if bits.len() != expected {
        return Err(CodecError::WrongBitLength { expected, got: bits.len() });
    }
    let mut out = Vec::with_capacity(cfg.total_dim());
    for chunk in bits.chunks(per_block) {
        out.extend(encode_block(cfg, chunk)?);
    }
    Ok(out)
}

/// Decodes a full received vector back to message bits.
pub fn decode_message(cfg: &CodeConfig, y: &[i64]) -> Result<Vec<u8>> {
    let t = cfg.block_dim();
    if y.len() != cfg.total_dim() {
        return Err(CodecError::WrongDimension { expected: cfg.total_dim(), got: y.len() });
    }
    let mut bits = Vec::with_capacity(cfg.total_bits()?);
    for chunk in y.chunks(t) {
        bits.extend(decode_block(cfg, chunk)?);
    }
    Ok(bits)
}

/// Parses a hex string (optional `0x` prefix) into exactly `nbits` bits,
/// MSB-first within each byte. Trailing pad bits must be zero.
pub fn bits_from_hex(hex: &str, nbits: usize) -> Result<Vec<u8>> {
    let hex = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
    if hex.len() % 2 != 0 {
        return Err(CodecError::BadHex("odd number of hex digits".into()));
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    for pair in hex.as_bytes().chunks(2) {
        let s = std::str::from_utf8(pair).map_err(|_| CodecError::BadHex("non-ascii".into()))?;
        bytes.push(u8::from_str_radix(s, 16).map_err(|e| CodecError::BadHex(e.to_string()))?);
    }
    if bytes.len() != nbits.div_ceil(8) {
        return Err(CodecError::WrongBitLength { expected: nbits.div_ceil(8) * 2, got: hex.len() });
    }
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for b in &bytes {
        for k in (0..8).rev() {
            bits.push((b >> k) & 1);
        }
    }
    if bits[nbits..].iter().any(|&b| b != 0) {
        return Err(CodecError::BadHex("nonzero padding bits".into()));
    }
    bits.truncate(nbits);
    Ok(bits)
}

/// Formats bits as a hex string, zero-padding the final byte.
pub fn bits_to_hex(bits: &[u8]) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(bits.len().div_ceil(8) * 2);
    for chunk in bits.chunks(8) {
        let mut b = 0u8;
        for (k, &bit) in chunk.iter().enumerate() {
            b |= bit << (7 - k);
        }
        let _ = write!(s, "{b:02x}");
    }
    s
}
