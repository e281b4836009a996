//! A FrodoPKE-style public-key encryption simulation with pluggable message
//! modulation.
//!
//! Keys and ciphertexts live over `Z_q` with `q` a power of two. The message
//! block `C2` is an 8x8 matrix whose 64 entries, vectorized row-major, carry
//! one lattice-coded message: naive modulation is the `Z` block lattice, the
//! coded variants tile `E8` / `BW16` blocks across consecutive entries.
//!
//! All randomness is deterministic: a 32-byte seed plus a fixed stream id
//! per role (matrix `A`, each noise matrix, message generation), so repeated
//! runs are byte-identical. The noise sampler is a rounded continuous
//! Gaussian, matching the noise model the failure-rate analysis assumes.
//!
//! The `BW32` parameter rows are registry-complete for analysis, but
//! encrypt/decrypt with them is rejected: there is no closest-vector decoder
//! at that dimension (`2^32` cosets).

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::catalog::{catalog_get, LatticeName};
use crate::codec::{self, CodeConfig, CodecError};
use crate::cvp;

#[derive(Debug, Error)]
pub enum PkeError {
    #[error("unknown parameter set: {0}")]
    UnknownParamSet(String),
    #[error("message must be {expected} bits, got {got}")]
    WrongMessageLength { expected: usize, got: usize },
    #[error("decoder not implemented for {0} (2^32 cosets or more); analysis-only parameter set")]
    DecoderUnavailable(LatticeName),
    #[error("malformed {kind}: {reason}")]
    Malformed { kind: &'static str, reason: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

type Result<T> = std::result::Result<T, PkeError>;

/// Matrix over `Z_q` (row-major `i64` entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    /// `self * other` without reduction (entries stay well inside `i64`).
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self.data[i * self.cols + k];
                if s == 0 {
                    continue;
                }
                let arow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &a) in orow.iter_mut().zip(arow) {
                    *o += s * a;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn reduce_mod(&self, q: i64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v.rem_euclid(q)).collect(),
        }
    }
}

/// One row of the parameter registry.
#[derive(Debug, Clone)]
pub struct ParamSet {
    pub name: &'static str,
    /// Stable id used in serialized headers.
    pub id: u16,
    /// 2 = higher-security table, 3 = reduced-ciphertext table.
    pub table: u8,
    pub lattice: LatticeName,
    /// Shaping modulus of the block code.
    pub p: i64,
    /// Global scale exponent; `q = 2^delta * p`.
    pub delta: u32,
    pub n_prime: usize,
    pub n_bar: usize,
    pub m_bar: usize,
    pub q_log2: u32,
    pub sigma: f64,
    /// Total message bits (64 * B).
    pub bits_total: usize,
    /// Claimed decryption-failure-rate exponent (log2).
    pub dfr_log2: i32,
    pub ct_bytes: usize,
    /// Classical / quantum / paranoid bit-security estimates (static
    /// metadata; not recomputed here).
    pub sec_c: u16,
    pub sec_q: u16,
    pub sec_p: u16,
}

impl ParamSet {
    pub fn q(&self) -> i64 {
        1i64 << self.q_log2
    }

    /// Number of lattice blocks tiling the 64 message entries.
    pub fn blocks(&self) -> usize {
        64 / catalog_get(self.lattice).dim
    }

    pub fn code_config(&self) -> Result<CodeConfig> {
        Ok(CodeConfig::new(catalog_get(self.lattice).clone(), self.p, self.delta, self.blocks())?)
    }

    /// Ciphertext payload size `(m_bar n' + m_bar n_bar) log2(q) / 8`.
    pub fn ciphertext_bytes(&self) -> usize {
        (self.m_bar * self.n_prime + self.m_bar * self.n_bar) * self.q_log2 as usize / 8
    }

    pub fn supports_pke(&self) -> bool {
        cvp::has_decoder(self.lattice)
    }
}

macro_rules! params {
    ($($name:literal, $id:expr, $table:expr, $lat:ident, $p:expr, $delta:expr,
       $np:expr, $qlog:expr, $sigma:expr, $bits:expr, $dfr:expr, $ct:expr,
       $c:expr, $q:expr, $pp:expr;)*) => {
        &[$(ParamSet {
            name: $name, id: $id, table: $table, lattice: LatticeName::$lat,
            p: $p, delta: $delta, n_prime: $np, n_bar: 8, m_bar: 8,
            q_log2: $qlog, sigma: $sigma, bits_total: $bits, dfr_log2: $dfr,
            ct_bytes: $ct, sec_c: $c, sec_q: $q, sec_p: $pp,
        }),*]
    };
}

/// The full parameter registry: the three original sets plus the coded
/// variants of both recommendation tables (`-ct` marks the
/// reduced-ciphertext table).
pub fn params_registry() -> &'static [ParamSet] {
    params![
        // name, id, table, lattice, p, delta, n', log2 q, sigma, bits, dfr, |c|, C, Q, P;
        "frodo-640", 0, 2, Z, 4, 13, 640, 15, 2.75, 128, -164, 9720, 149, 136, 109;
        "frodo-640-e8", 1, 2, E8, 4, 13, 640, 15, 3.25, 128, -164, 9720, 156, 142, 113;
        "frodo-640-bw16", 2, 2, Bw16, 8, 12, 640, 15, 3.23, 144, -164, 9720, 155, 142, 113;
        "frodo-640-bw32", 3, 2, Bw32, 8, 12, 640, 15, 3.83, 128, -164, 9720, 162, 148, 118;
        "frodo-976", 4, 2, Z, 8, 13, 976, 16, 2.3, 192, -220, 15744, 216, 196, 156;
        "frodo-976-e8", 5, 2, E8, 8, 13, 976, 16, 2.72, 192, -220, 15744, 224, 204, 162;
        "frodo-976-bw16", 6, 2, Bw16, 16, 12, 976, 16, 2.71, 208, -220, 15744, 224, 204, 161;
        "frodo-976-bw32", 7, 2, Bw32, 16, 12, 976, 16, 3.21, 192, -220, 15744, 232, 211, 167;
        "frodo-1344", 8, 2, Z, 16, 12, 1344, 16, 1.4, 256, -290, 21632, 282, 256, 203;
        "frodo-1344-e8", 9, 2, E8, 16, 12, 1344, 16, 1.66, 256, -290, 21632, 292, 265, 210;
        "frodo-1344-bw16", 10, 2, Bw16, 32, 11, 1344, 16, 1.66, 272, -290, 21632, 292, 265, 210;
        "frodo-1344-bw32", 11, 2, Bw32, 32, 11, 1344, 16, 1.97, 256, -290, 21632, 302, 275, 217;
        "frodo-640-e8-ct", 12, 3, E8, 4, 12, 640, 14, 2.30, 128, -164, 9072, 156, 143, 114;
        "frodo-640-bw16-ct", 13, 3, Bw16, 8, 11, 640, 14, 2.29, 144, -164, 9072, 156, 143, 114;
        "frodo-640-bw32-ct", 14, 3, Bw32, 8, 11, 640, 14, 2.71, 128, -164, 9072, 163, 149, 118;
        "frodo-976-e8-ct", 15, 3, E8, 8, 12, 976, 15, 1.93, 192, -220, 14760, 225, 205, 162;
        "frodo-976-bw16-ct", 16, 3, Bw16, 16, 11, 976, 15, 1.92, 208, -220, 14760, 224, 204, 162;
        "frodo-976-bw32-ct", 17, 3, Bw32, 16, 11, 976, 15, 2.27, 192, -220, 14760, 233, 212, 168;
        "frodo-1344-e8-ct", 18, 3, E8, 16, 11, 1344, 15, 1.18, 256, -290, 20280, 291, 265, 210;
        "frodo-1344-bw16-ct", 19, 3, Bw16, 32, 10, 1344, 15, 1.17, 272, -290, 20280, 291, 265, 209;
        "frodo-1344-bw32-ct", 20, 3, Bw32, 32, 10, 1344, 15, 1.39, 256, -290, 20280, 302, 275, 217;
    ]
}

pub fn param_by_name(name: &str) -> Result<&'static ParamSet> {
    params_registry()
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| PkeError::UnknownParamSet(name.to_string()))
}

pub fn param_by_id(id: u16) -> Option<&'static ParamSet> {
    params_registry().iter().find(|p| p.id == id)
}

/// Public key: the seed regenerating `A`, plus `B = A S + E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub seed_a: [u8; 32],
    pub b: Mat,
}

/// Secret key: the matrix `S`, stored reduced mod `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    pub s: Mat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

/// Ciphertext `(C1, C2)`, entries in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub c1: Mat,
    pub c2: Mat,
}

// Stream ids for domain separation of the deterministic generator.
const STREAM_A: u64 = 0;
const STREAM_S: u64 = 1;
const STREAM_E: u64 = 2;
const STREAM_S_PRIME: u64 = 3;
const STREAM_E_PRIME: u64 = 4;
const STREAM_E_DPRIME: u64 = 5;

fn rng_for(seed: &[u8; 32], stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::from_seed(*seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent 32-byte seed from a base seed and a tag.
pub fn derive_seed(base: &[u8; 32], tag: u64) -> [u8; 32] {
    let mut rng = rng_for(base, 0xD0_0000 + tag);
    let mut out = [0u8; 32];
    rng.fill_bytes(&mut out);
    out
}

/// Expands the public matrix `A` from its seed.
pub fn expand_a(seed_a: &[u8; 32], n_prime: usize, q: i64) -> Mat {
    let mut rng = rng_for(seed_a, STREAM_A);
    let mut m = Mat::zeros(n_prime, n_prime);
    for v in &mut m.data {
        *v = sample_uniform_zq(q, &mut rng);
    }
    m
}

/// One uniform draw from `[0, q)`.
pub fn sample_uniform_zq(q: i64, rng: &mut impl Rng) -> i64 {
    rng.gen_range(0..q)
}

/// One rounded-Gaussian draw: a continuous normal deviate of width `sigma`
/// rounded to the nearest integer. `sigma <= 0` degenerates to zero noise,
/// which doubles as the test hook for noiseless runs.
pub fn sample_gaussian(sigma: f64, rng: &mut impl Rng) -> i64 {
    if sigma <= 0.0 {
        return 0;
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    normal.sample(rng).round() as i64
}

fn gaussian_mat(rows: usize, cols: usize, sigma: f64, rng: &mut impl Rng) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    if sigma <= 0.0 {
        return m;
    }
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    for v in &mut m.data {
        *v = normal.sample(rng).round() as i64;
    }
    m
}

/// Key generation; deterministic in the seed. Returns the key pair and the
/// noise matrix `E` (kept for the protocol-identity checks in the tests).
pub fn keygen_with_noise(params: &ParamSet, seed: &[u8; 32]) -> (KeyPair, Mat) {
    let q = params.q();
    let seed_a = derive_seed(seed, 0xA);
    let a = expand_a(&seed_a, params.n_prime, q);
    let s = gaussian_mat(params.n_prime, params.n_bar, params.sigma, &mut rng_for(seed, STREAM_S));
    let e = gaussian_mat(params.n_prime, params.n_bar, params.sigma, &mut rng_for(seed, STREAM_E));
    let b = a.mul(&s).add(&e).reduce_mod(q);
    let kp = KeyPair {
        public: PublicKey { seed_a, b },
        secret: SecretKey { s: s.reduce_mod(q) },
    };
    (kp, e)
}

pub fn keygen(params: &ParamSet, seed: &[u8; 32]) -> KeyPair {
    keygen_with_noise(params, seed).0
}

/// Encryption internals retained for the noise-identity tests.
pub struct EncryptionTranscript {
    pub s_prime: Mat,
    pub e_prime: Mat,
    pub e_dprime: Mat,
    pub v: Mat,
}

pub fn encrypt_with_noise(
    params: &ParamSet,
    pk: &PublicKey,
    msg_bits: &[u8],
    seed: &[u8; 32],
) -> Result<(Ciphertext, EncryptionTranscript)> {
    let a = expand_a(&pk.seed_a, params.n_prime, params.q());
    encrypt_with_expanded_a(params, &a, pk, msg_bits, seed)
}

/// Encryption against an already-expanded `A` (the expansion dominates the
/// cost of repeated encryptions under one key).
pub fn encrypt_with_expanded_a(
    params: &ParamSet,
    a: &Mat,
    pk: &PublicKey,
    msg_bits: &[u8],
    seed: &[u8; 32],
) -> Result<(Ciphertext, EncryptionTranscript)> {
    if !params.supports_pke() {
        return Err(PkeError::DecoderUnavailable(params.lattice));
    }
    if msg_bits.len() != params.bits_total {
        return Err(PkeError::WrongMessageLength { expected: params.bits_total, got: msg_bits.len() });
    }
    let q = params.q();
    let s_prime =
        gaussian_mat(params.m_bar, params.n_prime, params.sigma, &mut rng_for(seed, STREAM_S_PRIME));
    let e_prime =
        gaussian_mat(params.m_bar, params.n_prime, params.sigma, &mut rng_for(seed, STREAM_E_PRIME));
    let e_dprime =
        gaussian_mat(params.m_bar, params.n_bar, params.sigma, &mut rng_for(seed, STREAM_E_DPRIME));

    let c1 = s_prime.mul(a).add(&e_prime).reduce_mod(q);
    let v = s_prime.mul(&pk.b).add(&e_dprime).reduce_mod(q);

    let cfg = params.code_config()?;
    let encoded = codec::encode_message(&cfg, msg_bits)?;
    let mut c2 = Mat::zeros(params.m_bar, params.n_bar);
    for (i, (ve, xe)) in v.data.iter().zip(&encoded).enumerate() {
        c2.data[i] = (ve + xe).rem_euclid(q);
    }
    Ok((Ciphertext { c1, c2 }, EncryptionTranscript { s_prime, e_prime, e_dprime, v }))
}

pub fn encrypt(params: &ParamSet, pk: &PublicKey, msg_bits: &[u8], seed: &[u8; 32]) -> Result<Ciphertext> {
    Ok(encrypt_with_noise(params, pk, msg_bits, seed)?.0)
}

/// Decryption: `Y = C2 - C1 S`, vectorized row-major, decoded per lattice
/// block. Always returns bits; a decryption failure shows up as wrong bits.
pub fn decrypt(params: &ParamSet, sk: &SecretKey, ct: &Ciphertext) -> Result<Vec<u8>> {
    if !params.supports_pke() {
        return Err(PkeError::DecoderUnavailable(params.lattice));
    }
    let q = params.q();
    let y = ct.c2.sub(&ct.c1.mul(&sk.s)).reduce_mod(q);
    let cfg = params.code_config()?;
    Ok(codec::decode_message(&cfg, &y.data)?)
}

/// Seeded round trips (fresh message and encryption randomness per trial,
/// one fixed key pair); returns the number of failed trials. Trials are
/// dispatched by index, so the count is independent of the worker count.
pub fn roundtrip_many(params: &ParamSet, kp: &KeyPair, trials: u64, base_seed: &[u8; 32]) -> Result<u64> {
    use rayon::prelude::*;
    if !params.supports_pke() {
        return Err(PkeError::DecoderUnavailable(params.lattice));
    }
    let a = expand_a(&kp.public.seed_a, params.n_prime, params.q());
    let failures = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(base_seed, 0x1000 + trial);
            let mut msg_rng = rng_for(&seed, 0x66);
            let bits: Vec<u8> = (0..params.bits_total).map(|_| msg_rng.gen_range(0..2u8)).collect();
            let (ct, _) = encrypt_with_expanded_a(params, &a, &kp.public, &bits, &seed)
                .expect("supported params");
            let out = decrypt(params, &kp.secret, &ct).expect("supported params");
            u64::from(out != bits)
        })
        .sum();
    Ok(failures)
}

/// Raw per-entry samples of `S' E + E'' - E' S` (no modular reduction), for
/// checking the effective-noise variance law at reduced dimension.
pub fn effective_noise_samples(n_prime: usize, sigma: f64, rounds: usize, seed: &[u8; 32]) -> Vec<i64> {
    let mut out = Vec::with_capacity(rounds * 64);
    for round in 0..rounds {
        let rseed = derive_seed(seed, 0x2000 + round as u64);
        let s = gaussian_mat(n_prime, 8, sigma, &mut rng_for(&rseed, STREAM_S));
        let e = gaussian_mat(n_prime, 8, sigma, &mut rng_for(&rseed, STREAM_E));
        let s_prime = gaussian_mat(8, n_prime, sigma, &mut rng_for(&rseed, STREAM_S_PRIME));
        let e_prime = gaussian_mat(8, n_prime, sigma, &mut rng_for(&rseed, STREAM_E_PRIME));
        let e_dprime = gaussian_mat(8, 8, sigma, &mut rng_for(&rseed, STREAM_E_DPRIME));
        let w = s_prime.mul(&e).add(&e_dprime).sub(&e_prime.mul(&s));
        out.extend_from_slice(&w.data);
    }
    out
}

// ---------------------------------------------------------------------------
// Serialization: 16-byte header (magic, version, kind, param id, reserved),
// then bit-packed matrices: log2(q) bits per entry, entries row-major, bits
// appended least-significant-first into little-endian bytes.
// ---------------------------------------------------------------------------

const MAGIC: &[u8; 4] = b"LATC";
const VERSION: u8 = 1;
const KIND_PK: u8 = 1;
const KIND_SK: u8 = 2;
const KIND_CT: u8 = 3;

fn header(kind: u8, param_id: u16) -> [u8; 16] {
    let mut h = [0u8; 16];
    h[..4].copy_from_slice(MAGIC);
    h[4] = VERSION;
    h[5] = kind;
    h[6..8].copy_from_slice(&param_id.to_le_bytes());
    h
}

fn check_header(bytes: &[u8], kind: u8, params: &ParamSet, what: &'static str) -> Result<()> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(PkeError::Malformed { kind: what, reason: "bad magic".into() });
    }
    if bytes[4] != VERSION {
        return Err(PkeError::Malformed { kind: what, reason: format!("unsupported version {}", bytes[4]) });
    }
    if bytes[5] != kind {
        return Err(PkeError::Malformed { kind: what, reason: format!("wrong object kind {}", bytes[5]) });
    }
    let id = u16::from_le_bytes([bytes[6], bytes[7]]);
    if id != params.id {
        return Err(PkeError::Malformed {
            kind: what,
            reason: format!("parameter-set id {} does not match {}", id, params.name),
        });
    }
    Ok(())
}

fn pack_entries(out: &mut Vec<u8>, entries: &[i64], bits: u32) {
    let mut acc: u64 = 0;
    let mut nbits: u32 = 0;
    for &e in entries {
        debug_assert!(e >= 0 && e < (1i64 << bits));
        acc |= (e as u64) << nbits;
        nbits += bits;
        while nbits >= 8 {
            out.push((acc & 0xff) as u8);
            acc >>= 8;
            nbits -= 8;
        }
    }
    if nbits > 0 {
        out.push((acc & 0xff) as u8);
    }
}

fn unpack_entries(bytes: &[u8], count: usize, bits: u32) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut acc: u64 = 0;
    let mut nbits: u32 = 0;
    let mut iter = bytes.iter();
    for _ in 0..count {
        while nbits < bits {
            acc |= (*iter.next().expect("length validated") as u64) << nbits;
            nbits += 8;
        }
        out.push((acc & ((1u64 << bits) - 1)) as i64);
        acc >>= bits;
        nbits -= bits;
    }
    out
}

fn packed_len(count: usize, bits: u32) -> usize {
    (count * bits as usize).div_ceil(8)
}

pub fn serialize_public_key(params: &ParamSet, pk: &PublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&header(KIND_PK, params.id));
    out.extend_from_slice(&pk.seed_a);
    pack_entries(&mut out, &pk.b.data, params.q_log2);
    out
}

pub fn parse_public_key(params: &ParamSet, bytes: &[u8]) -> Result<PublicKey> {
    check_header(bytes, KIND_PK, params, "public key")?;
    let nb = params.n_prime * params.n_bar;
    let expected = 16 + 32 + packed_len(nb, params.q_log2);
    if bytes.len() != expected {
        return Err(PkeError::Malformed {
            kind: "public key",
            reason: format!("expected {expected} bytes, got {}", bytes.len()),
        });
    }
    let mut seed_a = [0u8; 32];
    seed_a.copy_from_slice(&bytes[16..48]);
    let data = unpack_entries(&bytes[48..], nb, params.q_log2);
    Ok(PublicKey { seed_a, b: Mat { rows: params.n_prime, cols: params.n_bar, data } })
}

pub fn serialize_secret_key(params: &ParamSet, sk: &SecretKey) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&header(KIND_SK, params.id));
    pack_entries(&mut out, &sk.s.data, params.q_log2);
    out
}

pub fn parse_secret_key(params: &ParamSet, bytes: &[u8]) -> Result<SecretKey> {
    check_header(bytes, KIND_SK, params, "secret key")?;
    let ns = params.n_prime * params.n_bar;
    let expected = 16 + packed_len(ns, params.q_log2);
    if bytes.len() != expected {
        return Err(PkeError::Malformed {
            kind: "secret key",
            reason: format!("expected {expected} bytes, got {}", bytes.len()),
        });
    }
    let data = unpack_entries(&bytes[16..], ns, params.q_log2);
    Ok(SecretKey { s: Mat { rows: params.n_prime, cols: params.n_bar, data } })
}

pub fn serialize_ciphertext(params: &ParamSet, ct: &Ciphertext) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&header(KIND_CT, params.id));
    let mut entries = ct.c1.data.clone();
    entries.extend_from_slice(&ct.c2.data);
    pack_entries(&mut out, &entries, params.q_log2);
    debug_assert_eq!(out.len(), 16 + params.ciphertext_bytes());
    out
}

pub fn parse_ciphertext(params: &ParamSet, bytes: &[u8]) -> Result<Ciphertext> {
    check_header(bytes, KIND_CT, params, "ciphertext")?;
    let n1 = params.m_bar * params.n_prime;
    let n2 = params.m_bar * params.n_bar;
    let expected = 16 + packed_len(n1 + n2, params.q_log2);
    if bytes.len() != expected {
        return Err(PkeError::Malformed {
            kind: "ciphertext",
            reason: format!("expected {expected} bytes, got {}", bytes.len()),
        });
    }
    let all = unpack_entries(&bytes[16..], n1 + n2, params.q_log2);
    Ok(Ciphertext {
        c1: Mat { rows: params.m_bar, cols: params.n_prime, data: all[..n1].to_vec() },
        c2: Mat { rows: params.m_bar, cols: params.n_bar, data: all[n1..].to_vec() },
    })
}
