//! The structured-lattice catalog.
//!
//! Serves rectangular-form bases (`B = U * diag(pi)` with `U` unimodular and
//! positive dyadic `pi`), the Construction A/D builders that lift binary
//! linear codes to lattices, and the coding-gain / kissing-number / volume
//! constants of the supported lattices.
//!
//! The Hermite parameter is stored squared (`gamma_sq`) so that the
//! `sqrt(2)`-valued entries of the Barnes-Wall family stay exact.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Dyadic, DyadicMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown lattice name: {0}")]
    UnknownLattice(String),
    #[error("generator matrix is rank-deficient over GF(2)")]
    RankDeficient,
    #[error("codes are not nested: generator of level {level} is not a prefix of the next level")]
    NonNestedGenerators { level: usize },
    #[error("code lift is not unimodular")]
    NonUnimodularLift,
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

type Result<T> = std::result::Result<T, CatalogError>;

/// Names of the lattices the catalog knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LatticeName {
    Z,
    D4,
    E8,
    Bw8,
    Bw16,
    Bw32,
    Bw64,
    Leech24,
}

impl LatticeName {
    pub const ALL: [LatticeName; 8] = [
        LatticeName::Z,
        LatticeName::D4,
        LatticeName::E8,
        LatticeName::Bw8,
        LatticeName::Bw16,
        LatticeName::Bw32,
        LatticeName::Bw64,
        LatticeName::Leech24,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LatticeName::Z => "z",
            LatticeName::D4 => "d4",
            LatticeName::E8 => "e8",
            LatticeName::Bw8 => "bw8",
            LatticeName::Bw16 => "bw16",
            LatticeName::Bw32 => "bw32",
            LatticeName::Bw64 => "bw64",
            LatticeName::Leech24 => "leech24",
        }
    }
}

impl std::str::FromStr for LatticeName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "zn" => Ok(LatticeName::Z),
            "d4" => Ok(LatticeName::D4),
            "e8" => Ok(LatticeName::E8),
            "bw8" => Ok(LatticeName::Bw8),
            "bw16" => Ok(LatticeName::Bw16),
            "bw32" => Ok(LatticeName::Bw32),
            "bw64" => Ok(LatticeName::Bw64),
            "leech24" | "lambda24" => Ok(LatticeName::Leech24),
            other => Err(CatalogError::UnknownLattice(other.to_string())),
        }
    }
}

impl std::fmt::Display for LatticeName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A lattice basis factored as a unimodular integer matrix times a positive
/// diagonal of dyadic rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangularBasis {
    u: DyadicMatrix,
    pi: Vec<Dyadic>,
}

impl RectangularBasis {
    pub fn new(u: DyadicMatrix, pi: Vec<Dyadic>) -> Result<Self> {
        let b = RectangularBasis { u, pi };
        if !validate_rectangular(&b) {
            return Err(CatalogError::InvalidArgument(
                "not a rectangular form (U must be unimodular, pi positive dyadic)".into(),
            ));
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    pub fn unimodular_factor(&self) -> &DyadicMatrix {
        &self.u
    }

    pub fn diagonal(&self) -> &[Dyadic] {
        &self.pi
    }

    /// The full basis matrix `U * diag(pi)`.
    pub fn full_matrix(&self) -> DyadicMatrix {
        self.u.mul_diag(&self.pi).expect("diagonal length matches by construction")
    }

    /// Block-diagonal basis of the `k`-fold Cartesian product.
    pub fn power(&self, k: usize) -> RectangularBasis {
        let mut pi = Vec::with_capacity(self.pi.len() * k);
        for _ in 0..k {
            pi.extend_from_slice(&self.pi);
        }
        RectangularBasis { u: self.u.block_diag(k), pi }
    }

    /// Exact inverse of the full basis, computed through the factorization:
    /// `(U diag(pi))^-1 = diag(pi)^-1 U^-1`. This stays inside `i64`
    /// numerators even for the 64-dimensional catalog bases, where inverting
    /// the dense product matrix directly can overflow.
    pub fn inverse_full(&self) -> std::result::Result<DyadicMatrix, LinalgError> {
        let u_inv = self.u.inverse_exact()?;
        let pi_recip: Vec<Dyadic> =
            self.pi.iter().map(|p| p.checked_recip()).collect::<std::result::Result<_, _>>()?;
        u_inv.diag_mul(&pi_recip)
    }
}

/// True iff `u` is unimodular and every diagonal entry is a positive dyadic.
pub fn validate_rectangular(basis: &RectangularBasis) -> bool {
    basis.u.rows() == basis.pi.len() && basis.u.is_unimodular() && basis.pi.iter().all(Dyadic::is_positive)
}

/// A named lattice with its exact constants.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub name: LatticeName,
    pub dim: usize,
    /// Rectangular-form basis; `None` for constants-only entries (Leech24).
    pub basis: Option<RectangularBasis>,
    /// Hermite parameter squared (exact integer for every catalog lattice).
    pub gamma_sq: u64,
    /// Kissing number.
    pub tau: u64,
    /// Volume as a power of two.
    pub vol_log2: u32,
    /// Squared minimum distance.
    pub lambda1_sq: u64,
}

impl LatticeSpec {
    /// Checks `lambda1^2 = gamma * vol^(2/n)` in exact integer arithmetic
    /// (all quantities are powers of two, so the identity is checked on
    /// exponents: `2n*log2(lambda1^2) = n*log2(gamma^2) + 4*log2(vol)`).
    pub fn constants_consistent(&self) -> bool {
        if !self.gamma_sq.is_power_of_two() || !self.lambda1_sq.is_power_of_two() {
            return false;
        }
        let n = self.dim as u64;
        let l = self.lambda1_sq.trailing_zeros() as u64;
        let g = self.gamma_sq.trailing_zeros() as u64;
        2 * n * l == n * g + 4 * self.vol_log2 as u64
    }
}

/// A binary linear code given by `k` generator columns of length `n <= 64`.
///
/// Columns are stored as bitmasks: bit `i` of `gen[j]` is coordinate `i` of
/// generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCodeSpec {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    gen: Vec<u64>,
}

impl LinearCodeSpec {
    pub fn new(n: usize, d: usize, gen: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(CatalogError::InvalidCode(format!("length {n} out of range 1..=64")));
        }
        let k = gen.len();
        if f2_rank(&gen) != k {
            return Err(CatalogError::RankDeficient);
        }
        // Verify the declared minimum distance where enumeration is cheap.
        if k <= 16 && k > 0 {
            let min_wt = (1u64..1 << k)
                .map(|m| combine(&gen, m).count_ones() as usize)
                .min()
                .expect("nonempty range");
            if min_wt != d {
                return Err(CatalogError::InvalidCode(format!(
                    "declared distance {d} but minimum weight is {min_wt}"
                )));
            }
        }
        Ok(LinearCodeSpec { n, k, d, gen })
    }

    /// The trivial `(n, n, 1)` code with the standard basis as generators.
    pub fn full(n: usize) -> Self {
        LinearCodeSpec { n, k: n, d: 1, gen: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// Reed-Muller code RM(r, m) of length `2^m`, with generators taken from
    /// the Kronecker power of `[[1,0],[1,1]]`, sorted by monomial degree.
    pub fn reed_muller(r: usize, m: usize) -> Self {
        assert!(m >= 1 && m <= 6 && r <= m, "RM(r={r}, m={m}) out of supported range");
        let n = 1usize << m;
        let mut idx: Vec<u32> = (0..n as u32).filter(|j| j.count_ones() as usize <= r).collect();
        idx.sort_by_key(|j| (j.count_ones(), *j));
        let gen: Vec<u64> = idx
            .iter()
            .map(|&j| {
                let mut col = 0u64;
                for i in 0..n as u32 {
                    if i & j == j {
                        col |= 1 << i;
                    }
                }
                col
            })
            .collect();
        let k = gen.len();
        let d = 1usize << (m - r);
        LinearCodeSpec { n, k, d, gen }
    }

    pub fn generators(&self) -> &[u64] {
        &self.gen
    }

    /// Membership test via reduction against an echelonized generator set.
    pub fn contains(&self, word: u64) -> bool {
        let mut basis = self.gen.clone();
        f2_echelonize(&mut basis);
        let mut w = word;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if w & pivot != 0 {
                w ^= b;
            }
        }
        w == 0
    }

    /// All `2^k` codewords (small codes only).
    pub fn codewords(&self) -> Vec<u64> {
        assert!(self.k <= 20, "codeword enumeration limited to k <= 20");
        (0u64..1 << self.k).map(|m| combine(&self.gen, m)).collect()
    }

    /// Codeword as a 0/1 coordinate vector.
    pub fn word_to_vec(&self, word: u64) -> Vec<i64> {
        (0..self.n).map(|i| ((word >> i) & 1) as i64).collect()
    }
}

fn combine(gen: &[u64], mask: u64) -> u64 {
    let mut acc = 0u64;
    for (j, &g) in gen.iter().enumerate() {
        if (mask >> j) & 1 == 1 {
            acc ^= g;
        }
    }
    acc
}

fn f2_rank(cols: &[u64]) -> usize {
    let mut basis = cols.to_vec();
    f2_echelonize(&mut basis);
    basis.len()
}

/// Reduces `cols` in place to an independent set with distinct leading bits.
fn f2_echelonize(cols: &mut Vec<u64>) {
    let mut basis: Vec<u64> = Vec::new();
    for &c in cols.iter() {
        let mut w = c;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if w & pivot != 0 {
                w ^= b;
            }
        }
        if w != 0 {
            basis.push(w);
        }
    }
    *cols = basis;
}

/// Lifts a binary code to its mod-2 lattice `C + 2 Z^n` in rectangular form.
///
/// The generator is column-reduced over GF(2); pivot coordinates carry the
/// lifted code generators (scale 1) and the remaining coordinates carry
/// `2 e_i`. No coordinate permutation is applied, so the result generates
/// exactly `C + 2 Z^n`.
pub fn construction_a(code: &LinearCodeSpec) -> Result<RectangularBasis> {
    construction_d(std::slice::from_ref(code))
}

/// Lifts a nested family of binary codes (coarsest first) to a Construction-D
/// lattice in rectangular form.
///
/// Each code's generators must be a prefix of the next code's generators. A
/// trailing `(n, n, 1)` code is optional; when absent, the generator set is
/// completed to a unimodular integer matrix (preferring Kronecker-power
/// columns for power-of-two lengths, then standard basis vectors).
pub fn construction_d(codes: &[LinearCodeSpec]) -> Result<RectangularBasis> {
    if codes.is_empty() {
        return Err(CatalogError::InvalidArgument("empty code family".into()));
    }
    let n = codes[0].n;
    for c in codes {
        if c.n != n {
            return Err(CatalogError::InvalidArgument("codes have mixed lengths".into()));
        }
    }
    for lvl in 0..codes.len() - 1 {
        let (a, b) = (&codes[lvl], &codes[lvl + 1]);
        if a.k > b.k || a.gen[..] != b.gen[..a.k] {
            return Err(CatalogError::NonNestedGenerators { level: lvl });
        }
    }
    // Levels 0..a get scale 2^level; the trailing full code, if provided,
    // is the scale-2^a tail.
    let (family, levels) = match codes.last() {
        Some(last) if last.k == n => (&codes[..codes.len() - 1], codes.len() - 1),
        _ => (codes, codes.len()),
    };

    // Assemble the n generator columns of the unimodular factor.
    let columns: Vec<u64> = match codes.last() {
        Some(last) if last.k == n => last.gen.clone(),
        _ => {
            let mut cols = family.last().expect("nonempty").gen.clone();
            complete_to_full_rank(n, &mut cols);
            cols
        }
    };
    if columns.len() != n || f2_rank(&columns) != n {
        return Err(CatalogError::RankDeficient);
    }

    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| columns.iter().map(|&c| ((c >> i) & 1) as i64).collect())
        .collect();
    let u = DyadicMatrix::from_rows(&rows, 0);
    if !u.is_unimodular() {
        return Err(CatalogError::NonUnimodularLift);
    }

    // Column j sits at scale 2^level, where level is the index of the first
    // family code containing it (columns past the whole family sit at 2^a).
    let mut pi = Vec::with_capacity(n);
    for j in 0..n {
        let lvl = family.iter().position(|c| j < c.k).map_or(levels as u32, |p| p as u32);
        pi.push(Dyadic::from_int(1i64 << lvl));
    }

    RectangularBasis::new(u, pi)
}

/// Appends columns until `cols` spans GF(2)^n, preferring Kronecker-power
/// columns (weight-sorted) when `n` is a power of two.
fn complete_to_full_rank(n: usize, cols: &mut Vec<u64>) {
    let mut candidates: Vec<u64> = Vec::new();
    if n.is_power_of_two() {
        let full = LinearCodeSpec::reed_muller(n.trailing_zeros() as usize, n.trailing_zeros() as usize);
        candidates.extend_from_slice(&full.gen);
    }
    candidates.extend((0..n).map(|i| 1u64 << i));

    for cand in candidates {
        if cols.len() == n {
            break;
        }
        let mut trial = cols.clone();
        trial.push(cand);
        if f2_rank(&trial) == cols.len() + 1 {
            cols.push(cand);
        }
    }
}

/// Kissing number and squared Hermite parameter of the dimension-`2^r`
/// Barnes-Wall lattice: `tau = (2+2)(2+4)...(2+2^r)`, `gamma^2 = 2^(r-1)`.
pub fn bw_parameters(r: u32) -> Result<(u64, u64)> {
    if r < 1 {
        return Err(CatalogError::InvalidArgument("Barnes-Wall index r must be >= 1".into()));
    }
    if r > 12 {
        return Err(CatalogError::InvalidArgument("Barnes-Wall index r too large".into()));
    }
    let tau = (1..=r).map(|i| 2 + (1u64 << i)).product();
    Ok((tau, 1u64 << (r - 1)))
}

/// The `k`-fold Cartesian product: kissing number scales by `k`, the Hermite
/// parameter is unchanged, the basis becomes block-diagonal.
pub fn cartesian_product(spec: &LatticeSpec, k: usize) -> Result<LatticeSpec> {
    if k < 1 {
        return Err(CatalogError::InvalidArgument("product multiplicity must be >= 1".into()));
    }
    Ok(LatticeSpec {
        name: spec.name,
        dim: spec.dim * k,
        basis: spec.basis.as_ref().map(|b| b.power(k)),
        gamma_sq: spec.gamma_sq,
        tau: spec.tau * k as u64,
        vol_log2: spec.vol_log2 * k as u32,
        lambda1_sq: spec.lambda1_sq,
    })
}

/// Looks up a lattice by name.
pub fn catalog_get(name: LatticeName) -> &'static LatticeSpec {
    let catalog = CATALOG.get_or_init(build_catalog);
    catalog.iter().find(|s| s.name == name).expect("all names are built")
}

static CATALOG: OnceLock<Vec<LatticeSpec>> = OnceLock::new();

fn build_catalog() -> Vec<LatticeSpec> {
    let z = LatticeSpec {
        name: LatticeName::Z,
        dim: 1,
        basis: Some(
            RectangularBasis::new(DyadicMatrix::identity(1), vec![Dyadic::from_int(1)]).expect("valid"),
        ),
        gamma_sq: 1,
        tau: 2,
        vol_log2: 0,
        lambda1_sq: 1,
    };

    let d4_u = DyadicMatrix::from_rows(
        &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 1]],
        0,
    );
    let d4 = LatticeSpec {
        name: LatticeName::D4,
        dim: 4,
        basis: Some(
            RectangularBasis::new(
                d4_u,
                vec![Dyadic::from_int(1), Dyadic::from_int(1), Dyadic::from_int(1), Dyadic::from_int(2)],
            )
            .expect("valid"),
        ),
        gamma_sq: 2,
        tau: 24,
        vol_log2: 1,
        lambda1_sq: 2,
    };

    let e8 = LatticeSpec {
        name: LatticeName::E8,
        dim: 8,
        basis: Some(e8_basis()),
        gamma_sq: 4,
        tau: 240,
        vol_log2: 0,
        lambda1_sq: 2,
    };

    let bw8 = LatticeSpec {
        name: LatticeName::Bw8,
        dim: 8,
        basis: Some(bw8_basis()),
        gamma_sq: 4,
        tau: 240,
        vol_log2: 4,
        lambda1_sq: 4,
    };

    let bw16 = LatticeSpec {
        name: LatticeName::Bw16,
        dim: 16,
        basis: Some(bw16_basis()),
        gamma_sq: 8,
        tau: 4320,
        vol_log2: 12,
        lambda1_sq: 8,
    };

    let bw32 = LatticeSpec {
        name: LatticeName::Bw32,
        dim: 32,
        basis: Some(
            construction_d(&[LinearCodeSpec::reed_muller(1, 5), LinearCodeSpec::reed_muller(3, 5)])
                .expect("RM(1,5) in RM(3,5) lifts cleanly"),
        ),
        gamma_sq: 16,
        tau: 146880,
        vol_log2: 32,
        lambda1_sq: 16,
    };

    let bw64 = LatticeSpec {
        name: LatticeName::Bw64,
        dim: 64,
        basis: Some(
            construction_d(&[
                LinearCodeSpec::reed_muller(1, 6),
                LinearCodeSpec::reed_muller(3, 6),
                LinearCodeSpec::reed_muller(5, 6),
            ])
            .expect("nested RM family lifts cleanly"),
        ),
        gamma_sq: 32,
        tau: 9_694_080,
        vol_log2: 80,
        lambda1_sq: 32,
    };

    let leech = LatticeSpec {
        name: LatticeName::Leech24,
        dim: 24,
        basis: None,
        gamma_sq: 16,
        tau: 196_560,
        vol_log2: 0,
        lambda1_sq: 4,
    };

    vec![z, d4, e8, bw8, bw16, bw32, bw64, leech]
}

/// The planar lattice used by the small worked examples: basis columns
/// `(1, 5)` and `(0, 7)`, i.e. `U = [[1,0],[5,1]]`, `pi = (1, 7)`.
pub fn planar_example_basis() -> RectangularBasis {
    let u = DyadicMatrix::from_rows(&[vec![1, 0], vec![5, 1]], 0);
    RectangularBasis::new(u, vec![Dyadic::from_int(1), Dyadic::from_int(7)]).expect("valid")
}

/// Ad-hoc spec for the planar example (only the basis fields matter).
pub fn planar_example_spec() -> LatticeSpec {
    LatticeSpec {
        name: LatticeName::Z,
        dim: 2,
        basis: Some(planar_example_basis()),
        gamma_sq: 1,
        tau: 2,
        vol_log2: 0,
        lambda1_sq: 1,
    }
}

fn e8_basis() -> RectangularBasis {
    // Numerators at denominator 2^1; the last column is all halves.
    let rows: [[i64; 8]; 8] = [
        [4, -2, 0, 0, 0, 0, 0, 1],
        [0, 2, -2, 0, 0, 0, 0, 1],
        [0, 0, 2, -2, 0, 0, 0, 1],
        [0, 0, 0, 2, -2, 0, 0, 1],
        [0, 0, 0, 0, 2, -2, 0, 1],
        [0, 0, 0, 0, 0, 2, -2, 1],
        [0, 0, 0, 0, 0, 0, 2, 1],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let full = DyadicMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 1);
    let mut pi = vec![Dyadic::from_int(2)];
    pi.extend(std::iter::repeat(Dyadic::from_int(1)).take(6));
    pi.push(Dyadic::half());
    rectangular_from_full(&full, pi)
}

fn bw8_basis() -> RectangularBasis {
    let rows: [[i64; 8]; 8] = [
        [1, 1, 1, 1, 2, 2, 2, 2],
        [1, 1, 1, 0, 2, 0, 0, 0],
        [1, 1, 0, 1, 0, 2, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0],
        [1, 0, 1, 1, 0, 0, 2, 0],
        [1, 0, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
    ];
    let full = DyadicMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 0);
    let mut pi = vec![Dyadic::from_int(1); 4];
    pi.extend(std::iter::repeat(Dyadic::from_int(2)).take(4));
    rectangular_from_full(&full, pi)
}

fn bw16_basis() -> RectangularBasis {
    let rows: [[i64; 16]; 16] = [
        [1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4],
        [1, 1, 1, 1, 0, 2, 2, 0, 2, 0, 0, 2, 0, 0, 0, 0],
        [1, 1, 1, 0, 1, 2, 0, 2, 0, 2, 0, 0, 2, 0, 0, 0],
        [1, 1, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 1, 1, 0, 2, 2, 0, 0, 2, 0, 0, 2, 0, 0],
        [1, 1, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 1, 1, 1, 0, 0, 0, 2, 2, 2, 0, 0, 0, 2, 0],
        [1, 0, 1, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 1, 0, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    ];
    let full = DyadicMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 0);
    let mut pi = vec![Dyadic::from_int(1); 5];
    pi.extend(std::iter::repeat(Dyadic::from_int(2)).take(10));
    pi.push(Dyadic::from_int(4));
    rectangular_from_full(&full, pi)
}

/// Splits a full basis matrix into `U = B * diag(pi)^-1` and the given
/// diagonal, verifying the rectangular form.
fn rectangular_from_full(full: &DyadicMatrix, pi: Vec<Dyadic>) -> RectangularBasis {
    let inv_diag: Vec<Dyadic> = pi.iter().map(|p| p.checked_recip().expect("pi is a power of two")).collect();
    let u = full.mul_diag(&inv_diag).expect("dimensions match");
    RectangularBasis::new(u, pi).expect("catalog basis is rectangular")
}

/// JSON export of the catalog (one object per lattice) for documentation and
/// cross-checking.
pub fn export_json() -> String {
    #[derive(Serialize)]
    struct BasisDto {
        numerators: Vec<Vec<i64>>,
        log2_denominator: u32,
    }
    #[derive(Serialize)]
    struct SpecDto {
        name: &'static str,
        dim: usize,
        basis: Option<BasisDto>,
        gamma_sq: u64,
        tau: u64,
        vol_log2: u32,
        lambda1_sq: u64,
    }
    let specs: Vec<SpecDto> = LatticeName::ALL
        .iter()
        .map(|&name| {
            let s = catalog_get(name);
            SpecDto {
                name: name.as_str(),
                dim: s.dim,
                basis: s.basis.as_ref().map(|b| {
                    let m = b.full_matrix();
                    BasisDto {
                        numerators: (0..m.rows())
                            .map(|i| (0..m.cols()).map(|j| m.numerators()[i * m.cols() + j]).collect())
                            .collect(),
                        log2_denominator: m.log2_denominator(),
                    }
                }),
                gamma_sq: s.gamma_sq,
                tau: s.tau,
                vol_log2: s.vol_log2,
                lambda1_sq: s.lambda1_sq,
            }
        })
        .collect();
    serde_json::to_string_pretty(&specs).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_constants() {
        let e8 = catalog_get(LatticeName::E8);
        assert_eq!((e8.gamma_sq, e8.tau, e8.vol_log2), (4, 240, 0));
        let bw16 = catalog_get(LatticeName::Bw16);
        assert_eq!(bw16.tau, 4320);
        let z = catalog_get(LatticeName::Z);
        assert_eq!((z.gamma_sq, z.tau, z.vol_log2), (1, 2, 0));
        let leech = catalog_get(LatticeName::Leech24);
        assert_eq!((leech.gamma_sq, leech.tau, leech.dim), (16, 196_560, 24));
        assert!(leech.basis.is_none());
        let bw32 = catalog_get(LatticeName::Bw32);
        assert_eq!((bw32.gamma_sq, bw32.tau, bw32.vol_log2), (16, 146_880, 32));
        let bw64 = catalog_get(LatticeName::Bw64);
        assert_eq!((bw64.gamma_sq, bw64.tau, bw64.vol_log2), (32, 9_694_080, 80));
    }

    #[test]
    fn constants_satisfy_hermite_identity() {
        for &name in &LatticeName::ALL {
            assert!(catalog_get(name).constants_consistent(), "{name}");
        }
    }

    #[test]
    fn catalog_volumes_match_determinants() {
        for &name in &LatticeName::ALL {
            let spec = catalog_get(name);
            let Some(basis) = &spec.basis else { continue };
            let det = basis.full_matrix().det_exact().unwrap();
            assert!(det.is_integer(), "{name}: volume must be integral");
            let vol = det.numerator().abs();
            assert_eq!(vol, 1i128 << spec.vol_log2, "{name}");
        }
    }

    #[test]
    fn e8_determinant_is_one() {
        let det = catalog_get(LatticeName::E8).basis.as_ref().unwrap().full_matrix().det_exact().unwrap();
        assert_eq!(det, Dyadic::from_int(1));
    }

    #[test]
    fn bw16_determinant_is_4096() {
        let det = catalog_get(LatticeName::Bw16).basis.as_ref().unwrap().full_matrix().det_exact().unwrap();
        assert_eq!(det.numerator().abs(), 4096);
        assert!(det.is_integer());
    }

    #[test]
    fn catalog_bases_invert_exactly() {
        for &name in &LatticeName::ALL {
            let spec = catalog_get(name);
            let Some(basis) = &spec.basis else { continue };
            let b = basis.full_matrix();
            let inv = basis.inverse_full().unwrap();
            assert_eq!(b.checked_mul(&inv).unwrap(), DyadicMatrix::identity(spec.dim), "{name}");
            // The dense route agrees wherever it stays inside i128 scratch.
            if spec.dim <= 32 {
                assert_eq!(b.inverse_exact().unwrap(), inv, "{name}");
            }
        }
    }

    #[test]
    fn catalog_unimodular_factors() {
        for &name in &LatticeName::ALL {
            let spec = catalog_get(name);
            let Some(basis) = &spec.basis else { continue };
            assert!(validate_rectangular(basis), "{name}");
            let det = basis.unimodular_factor().det_exact().unwrap();
            assert_eq!(det.numerator().abs(), 1, "{name}");
        }
    }

    #[test]
    fn rectangular_validation_rejects_scaled_identity() {
        let two_i = DyadicMatrix::from_rows(&[vec![2, 0], vec![0, 2]], 0);
        let b = RectangularBasis { u: two_i, pi: vec![Dyadic::from_int(1); 2] };
        assert!(!validate_rectangular(&b));
    }

    #[test]
    fn bw_parameter_formula() {
        assert_eq!(bw_parameters(1).unwrap(), (4, 1));
        assert_eq!(bw_parameters(2).unwrap(), (24, 2));
        assert_eq!(bw_parameters(3).unwrap(), (240, 4));
        assert_eq!(bw_parameters(4).unwrap(), (4320, 8));
        assert_eq!(bw_parameters(5).unwrap(), (146_880, 16));
        assert_eq!(bw_parameters(6).unwrap(), (9_694_080, 32));
        assert!(bw_parameters(0).is_err());
    }

    /// The r = 1 member is D2; count its shortest vectors by brute force.
    #[test]
    fn bw_r1_matches_d2_shortest_vector_count() {
        let mut count = 0;
        let mut min_sq = i64::MAX;
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                if (a + b) % 2 != 0 || (a, b) == (0, 0) {
                    continue;
                }
                let n = a * a + b * b;
                if n < min_sq {
                    min_sq = n;
                    count = 1;
                } else if n == min_sq {
                    count += 1;
                }
            }
        }
        let (tau, gamma_sq) = bw_parameters(1).unwrap();
        assert_eq!(min_sq, 2);
        assert_eq!(count, tau as i64);
        // gamma^2 = lambda1^4 / vol^(4/n) = 4 / 4 = 1 for D2 (vol 2, dim 2)
        assert_eq!(gamma_sq, 1);
    }

    #[test]
    fn cartesian_product_rules() {
        let e8 = catalog_get(LatticeName::E8);
        let prod = cartesian_product(e8, 8).unwrap();
        assert_eq!((prod.dim, prod.tau, prod.gamma_sq), (64, 1920, 4));
        let bw16 = catalog_get(LatticeName::Bw16);
        let prod = cartesian_product(bw16, 4).unwrap();
        assert_eq!((prod.dim, prod.tau), (64, 17_280));
        let same = cartesian_product(e8, 1).unwrap();
        assert_eq!(same.dim, e8.dim);
        assert_eq!(same.tau, e8.tau);
        assert!(cartesian_product(e8, 0).is_err());
        // product basis volume: det scales to vol^k
        let d4 = catalog_get(LatticeName::D4);
        let p = cartesian_product(d4, 3).unwrap();
        let det = p.basis.unwrap().full_matrix().det_exact().unwrap();
        assert_eq!(det.numerator().abs(), 8);
    }

    #[test]
    fn construction_a_volumes() {
        let rm13 = LinearCodeSpec::reed_muller(1, 3);
        assert_eq!((rm13.n, rm13.k, rm13.d), (8, 4, 4));
        let basis = construction_a(&rm13).unwrap();
        let det = basis.full_matrix().det_exact().unwrap();
        assert_eq!(det.numerator().abs(), 16);

        let trivial = LinearCodeSpec::full(6);
        let basis = construction_a(&trivial).unwrap();
        assert_eq!(basis.full_matrix().det_exact().unwrap().numerator().abs(), 1);

        let rm14 = LinearCodeSpec::reed_muller(1, 4);
        assert_eq!((rm14.n, rm14.k, rm14.d), (16, 5, 8));
        let basis = construction_a(&rm14).unwrap();
        assert_eq!(basis.full_matrix().det_exact().unwrap().numerator().abs(), 1 << 11);
    }

    #[test]
    fn construction_d_bw16_volume() {
        let basis =
            construction_d(&[LinearCodeSpec::reed_muller(1, 4), LinearCodeSpec::reed_muller(3, 4)]).unwrap();
        assert_eq!(basis.full_matrix().det_exact().unwrap().numerator().abs(), 1 << 12);
    }

    #[test]
    fn construction_d_bw32_volume() {
        let basis =
            construction_d(&[LinearCodeSpec::reed_muller(1, 5), LinearCodeSpec::reed_muller(3, 5)]).unwrap();
        assert_eq!(basis.full_matrix().det_exact().unwrap().numerator().abs(), 1i128 << 32);
    }

    #[test]
    fn construction_a_equals_single_level_construction_d() {
        // (8,4,4) + 2 Z^8 built two ways generates the same lattice.
        let a = construction_a(&LinearCodeSpec::reed_muller(1, 3)).unwrap();
        let d = construction_d(&[LinearCodeSpec::reed_muller(1, 3), LinearCodeSpec::reed_muller(3, 3)])
            .unwrap();
        assert!(same_lattice(&a.full_matrix(), &d.full_matrix()));
    }

    #[test]
    fn construction_d_matches_catalog_bw16() {
        let constructed =
            construction_d(&[LinearCodeSpec::reed_muller(1, 4), LinearCodeSpec::reed_muller(3, 4)]).unwrap();
        let catalog = catalog_get(LatticeName::Bw16).basis.as_ref().unwrap();
        assert!(same_lattice(&constructed.full_matrix(), &catalog.full_matrix()));
    }

    #[test]
    fn construction_d_rejects_non_nested() {
        // Same k-profile but generators that are not prefixes of each other.
        let c0 = LinearCodeSpec::new(4, 2, vec![0b0011]).unwrap();
        let c1 = LinearCodeSpec::new(4, 1, vec![0b0111, 0b1000]).unwrap();
        assert!(matches!(
            construction_d(&[c0, c1]),
            Err(CatalogError::NonNestedGenerators { level: 0 })
        ));
    }

    #[test]
    fn rank_deficient_code_rejected() {
        assert!(matches!(
            LinearCodeSpec::new(4, 2, vec![0b0011, 0b0011]),
            Err(CatalogError::RankDeficient)
        ));
    }

    #[test]
    fn reed_muller_generators_span_appendix_code_columns() {
        // The unimodular factor of the catalog BW16 basis reduces mod 2 to
        // codewords of RM(1,4) on its unscaled columns.
        let rm14 = LinearCodeSpec::reed_muller(1, 4);
        let basis = catalog_get(LatticeName::Bw16).basis.as_ref().unwrap();
        let u = basis.unimodular_factor();
        for j in 0..5 {
            let mut word = 0u64;
            for i in 0..16 {
                if u.numerators()[i * 16 + j] & 1 == 1 {
                    word |= 1 << i;
                }
            }
            assert!(rm14.contains(word), "column {j}");
        }
    }

    #[test]
    fn code_membership_and_enumeration() {
        let rm14 = LinearCodeSpec::reed_muller(1, 4);
        let words = rm14.codewords();
        assert_eq!(words.len(), 32);
        for &w in &words {
            assert!(rm14.contains(w));
            let wt = w.count_ones();
            assert!(wt == 0 || wt == 8 || wt == 16, "RM(1,4) weights");
        }
        assert!(!rm14.contains(0b1));
    }

    fn same_lattice(b1: &DyadicMatrix, b2: &DyadicMatrix) -> bool {
        let q = b1.inverse_exact().unwrap().checked_mul(b2).unwrap();
        q.is_unimodular()
    }

    #[test]
    fn planar_example_basis_is_rectangular() {
        assert!(validate_rectangular(&planar_example_basis()));
    }

    #[test]
    fn catalog_export_is_valid_json() {
        let json = export_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 8);
        assert_eq!(parsed[2]["name"], "e8");
        assert_eq!(parsed[2]["gamma_sq"], 4);
    }
}
