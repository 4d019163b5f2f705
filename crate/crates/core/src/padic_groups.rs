//! Congruence subgroups of `GL_n(O)` described by integer valuation bounds.
//!
//! A bound matrix `m` describes
//! `K = {g ∈ GL_n(O) : v(g_ij) ≥ m_ij (i ≠ j), g_ii ∈ 1 + p^{m_ii} O}`,
//! where a zero diagonal bound means the diagonal entry is unrestricted
//! (the "unit diagonal" shape of Iwahori-type groups). Point counts in
//! `GL_n(O/p^N)` factor entry by entry once the residue-field pattern is
//! accounted for, which gives exact symbolic volumes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::apartment::{filtration_profile, heart_condition1_check, ApartmentPoint, FiltrationProfile, HeartStatus};
use crate::error::{HeckeError, Result};
use crate::root_datum::{enumerate_weyl, RootDatum, WeylElement};

/// `q^e · Π_k (q^k − 1)^{n_k}`, the shape of every point count and index
/// that arises from bound matrices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VolumeExponent {
    pub logq: i64,
    /// k ↦ multiplicity of the factor `q^k − 1`.
    pub factors: BTreeMap<u32, i64>,
}

impl VolumeExponent {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn q_power(e: i64) -> Self {
        VolumeExponent { logq: e, factors: BTreeMap::new() }
    }

    /// `|GL_b(F_q)| = q^{b(b−1)/2} Π_{k≤b} (q^k − 1)`.
    pub fn gl_order(b: usize) -> Self {
        let mut v = Self::q_power((b * (b.saturating_sub(1)) / 2) as i64);
        for k in 1..=b as u32 {
            *v.factors.entry(k).or_insert(0) += 1;
        }
        v
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&k, &n) in &o.factors {
            *factors.entry(k).or_insert(0) += n;
        }
        factors.retain(|_, n| *n != 0);
        VolumeExponent { logq: self.logq + o.logq, factors }
    }

    pub fn inv(&self) -> Self {
        VolumeExponent { logq: -self.logq, factors: self.factors.iter().map(|(&k, &n)| (k, -n)).collect() }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn is_one(&self) -> bool {
        self.logq == 0 && self.factors.is_empty()
    }

    pub fn eval(&self, q: u64) -> BigRational {
        let q = BigRational::from_integer(BigInt::from(q));
        let pow = |b: &BigRational, e: i64| {
            if e >= 0 {
                num_traits::pow(b.clone(), e as usize)
            } else {
                num_traits::pow(b.recip(), (-e) as usize)
            }
        };
        let mut out = pow(&q, self.logq);
        for (&k, &n) in &self.factors {
            out *= pow(&(num_traits::pow(q.clone(), k as usize) - BigRational::one()), n);
        }
        out
    }
}

impl fmt::Display for VolumeExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        match self.logq {
            0 => {}
            1 => write!(f, "q")?,
            e => write!(f, "q^{e}")?,
        }
        for (&k, &n) in &self.factors {
            let base = if k == 1 { "(q-1)".to_string() } else { format!("(q^{k}-1)") };
            if n == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}^{n}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for VolumeExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A standard Levi `GL_{n_1} × … × GL_{n_k}` given by consecutive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    pub sizes: Vec<usize>,
}

impl Partition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(HeckeError::InvalidPartition(format!("{sizes:?}")));
        }
        Ok(Partition { sizes })
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Half-open index ranges of the blocks.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&s| {
                start += s;
                (start - s, start)
            })
            .collect()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks().iter().position(|&(s, e)| s <= i && i < e).expect("index outside partition")
    }

    pub fn reversed(&self) -> Partition {
        Partition { sizes: self.sizes.iter().rev().copied().collect() }
    }

    /// All compositions of n.
    pub fn all(n: usize) -> Vec<Partition> {
        (0..1u32 << (n - 1))
            .map(|mask| {
                let mut sizes = vec![];
                let mut cur = 1;
                for i in 0..n - 1 {
                    if mask >> i & 1 == 1 {
                        cur += 1;
                    } else {
                        sizes.push(cur);
                        cur = 1;
                    }
                }
                sizes.push(cur);
                Partition { sizes }
            })
            .collect()
    }

    /// The Levi of `GL_n` cut out by the simple roots `e_i − e_{i+1}`, i ∈ θ.
    pub fn from_theta(n: usize, theta: &[usize]) -> Partition {
        let mut sizes = vec![];
        let mut cur = 1;
        for i in 0..n - 1 {
            if theta.contains(&i) {
                cur += 1;
            } else {
                sizes.push(cur);
                cur = 1;
            }
        }
        sizes.push(cur);
        Partition { sizes }
    }
}

impl std::str::FromStr for Partition {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| HeckeError::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(sizes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ValuationGroupScheme {
    pub n: usize,
    pub bounds: Vec<Vec<i64>>,
}

impl ValuationGroupScheme {
    /// Validates shape, signs and closure under multiplication:
    /// `m_ik ≤ m_ij + m_jk` off the diagonal and `m_ii ≤ m_ij + m_ji`.
    pub fn new(bounds: Vec<Vec<i64>>) -> Result<Self> {
        let n = bounds.len();
        if n == 0 || bounds.iter().any(|r| r.len() != n) {
            return Err(HeckeError::InvalidBounds("matrix must be square and nonempty".into()));
        }
        if bounds.iter().flatten().any(|&m| m < 0) {
            return Err(HeckeError::InvalidBounds("entries must be nonnegative".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                if bounds[i][i] > bounds[i][j] + bounds[j][i] {
                    return Err(HeckeError::ClosureViolation { i, j, k: i });
                }
                for k in 0..n {
                    if k != i && k != j && bounds[i][k] > bounds[i][j] + bounds[j][k] {
                        return Err(HeckeError::ClosureViolation { i, j, k });
                    }
                }
            }
        }
        Ok(ValuationGroupScheme { n, bounds })
    }

    /// The standard Iwahori subgroup: integral, upper triangular mod p.
    pub fn iwahori(n: usize) -> Self {
        let bounds = (0..n).map(|i| (0..n).map(|j| i64::from(i > j)).collect()).collect();
        ValuationGroupScheme { n, bounds }
    }

    pub fn max_bound(&self) -> i64 {
        self.bounds.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Entry (i, j) bounded by `t_{e_i − e_j}`, diagonal by `⌈r⌉`.
    pub fn from_filtration(profile: &FiltrationProfile, datum: &RootDatum) -> Result<Self> {
        Self::new(profile.gl_bounds(datum)?)
    }

    /// `bounds'_{ij} = m_{σ(i)σ(j)}`: conjugation by the monomial matrix of σ⁻¹.
    pub fn conjugate_by_permutation(&self, sigma: &[usize]) -> Self {
        let bounds = (0..self.n).map(|i| (0..self.n).map(|j| self.bounds[sigma[i]][sigma[j]]).collect()).collect();
        ValuationGroupScheme { n: self.n, bounds }
    }

    pub fn intersect_levi(&self, partition: &Partition) -> Result<LeviIntersection> {
        if partition.n() != self.n {
            return Err(HeckeError::InvalidPartition(format!("{:?} does not partition {}", partition.sizes, self.n)));
        }
        let blocks = partition
            .blocks()
            .into_iter()
            .map(|(s, e)| ValuationGroupScheme {
                n: e - s,
                bounds: (s..e).map(|i| self.bounds[i][s..e].to_vec()).collect(),
            })
            .collect();
        Ok(LeviIntersection { partition: partition.clone(), blocks })
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        self.first_uncontained(other).is_none()
    }

    fn first_uncontained(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let (a, b) = (self.bounds[i][j], other.bounds[i][j]);
                let ok = if i == j { a == 0 || b >= a } else { b >= a };
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Classes of the preorder `m_ij = 0` that carry a free diagonal; their
    /// sizes decide which residue-field matrices are invertible.
    fn unit_classes(&self) -> Vec<usize> {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut sizes = vec![];
        for i in 0..n {
            if seen[i] || self.bounds[i][i] != 0 {
                continue;
            }
            let class: Vec<usize> =
                (0..n).filter(|&j| j == i || (self.bounds[i][j] == 0 && self.bounds[j][i] == 0)).collect();
            for &j in &class {
                seen[j] = true;
            }
            sizes.push(class.len());
        }
        sizes
    }

    /// `|K mod p^N|` as a symbolic expression in q; needs `N ≥ max bound`.
    pub fn order_mod(&self, level: i64) -> VolumeExponent {
        assert!(level >= self.max_bound(), "level below the largest bound");
        let free: i64 = self.bounds.iter().flatten().map(|&m| level - m).sum();
        let mut v = VolumeExponent::q_power(free);
        for b in self.unit_classes() {
            v = v.mul(&VolumeExponent::gl_order(b)).div(&VolumeExponent::q_power((b * b) as i64));
        }
        v
    }

    /// `vol(K)` for the Haar measure with `vol(reference) = 1`. The ratio is
    /// computed at two levels and required to agree.
    pub fn log_volume(&self, reference: &Self) -> VolumeExponent {
        let level = self.max_bound().max(reference.max_bound());
        let a = self.order_mod(level).div(&reference.order_mod(level));
        let b = self.order_mod(level + 1).div(&reference.order_mod(level + 1));
        assert_eq!(a, b, "volume ratio depends on the truncation level");
        a
    }

    /// `[self : sub]`.
    pub fn index(&self, sub: &Self) -> Result<VolumeExponent> {
        if let Some((i, j)) = self.first_uncontained(sub) {
            return Err(HeckeError::NotContained(i, j));
        }
        Ok(sub.log_volume(self).inv())
    }

    pub fn level(&self) -> i64 {
        self.max_bound() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviIntersection {
    pub partition: Partition,
    pub blocks: Vec<ValuationGroupScheme>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConjugacyObstruction {
    DistinctVolume { ratio: VolumeExponent },
    Inconclusive,
}

/// Volume is a conjugation invariant, so distinct volumes refute conjugacy
/// in `GL_n(F)`. Equal volumes prove nothing.
pub fn conjugacy_obstruction(k1: &ValuationGroupScheme, k2: &ValuationGroupScheme) -> ConjugacyObstruction {
    if k1.n != k2.n {
        return ConjugacyObstruction::DistinctVolume { ratio: VolumeExponent::one() };
    }
    let ratio = k1.log_volume(k2);
    if ratio.is_one() {
        ConjugacyObstruction::Inconclusive
    } else {
        ConjugacyObstruction::DistinctVolume { ratio }
    }
}

/// Permutation `τ` with `t_a(w·x) = m_{τ(i)τ(j)}` for `a = e_i − e_j`, i.e.
/// the argument that makes `conjugate_by_permutation` realize `w`.
pub fn permutation_of(w: &WeylElement, n: usize) -> Vec<usize> {
    (0..n).map(|i| (0..n).find(|&j| w.action[i][j] == 1).expect("not a permutation matrix")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignConvention {
    /// `K = (K ∩ N⁻)(K ∩ M)(K ∩ N)`.
    LowerFirst,
    /// `K = (K ∩ N)(K ∩ M)(K ∩ N⁻)`.
    UpperFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpadeStatus {
    Verified,
    UnverifiedExhaustively,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpadeReport {
    pub partition: Partition,
    pub sign: SignConvention,
    pub analytic: bool,
    pub brute_force: Option<bool>,
    pub status: SpadeStatus,
    pub p: u64,
    pub level: i64,
    pub elements: u64,
}

impl SpadeReport {
    /// True when the analytic answer holds and, if run, the enumeration agrees.
    pub fn passes(&self) -> bool {
        self.analytic && self.brute_force.unwrap_or(true)
    }
}

/// Default ceiling on `|K mod p^N|` for exhaustive verification.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 50_000_000;

const MAXN: usize = 3;
type Mat = [[i64; MAXN]; MAXN];

struct Ring {
    p: i64,
    modulus: i64,
    /// p^k for k ≤ N, so a value has valuation ≥ k iff `v % pow[k] == 0`.
    pow: Vec<i64>,
    inv: Vec<i64>,
    /// Valuation of each residue; zero gets `u8::MAX`.
    val: Vec<u8>,
    /// Residues of `−span..=span`, when small enough to tabulate.
    reduce: Vec<i64>,
    span: i64,
}

impl Ring {
    fn new(p: i64, level: i64) -> Ring {
        let pow: Vec<i64> = (0..=level).map(|k| p.pow(k as u32)).collect();
        let modulus = pow[level as usize];
        let mut inv = vec![0; modulus as usize];
        for a in 0..modulus {
            if a % p != 0 {
                inv[a as usize] = (1..modulus).find(|b| a * b % modulus == 1).unwrap();
            }
        }
        let val = (0..modulus)
            .map(|v| {
                if v == 0 {
                    u8::MAX
                } else {
                    (0..=level).take_while(|&k| v % pow[k as usize] == 0).last().unwrap() as u8
                }
            })
            .collect();
        // covers 3×3 determinants of residues
        let span = 6 * modulus.pow(3) + modulus;
        let reduce = if span <= 1 << 20 { (-span..=span).map(|v| v.rem_euclid(modulus)).collect() } else { vec![] };
        Ring { p, modulus, pow, inv, val, reduce, span }
    }

    /// `v` is a residue in `[0, p^N)`.
    #[inline]
    fn has_val(&self, v: i64, m: i64) -> bool {
        i64::from(self.val[v as usize]) >= m
    }

    #[inline]
    fn red(&self, v: i64) -> i64 {
        if self.reduce.is_empty() || v.abs() > self.span {
            v.rem_euclid(self.modulus)
        } else {
            self.reduce[(v + self.span) as usize]
        }
    }
}

fn det_mod(a: &Mat, rows: std::ops::Range<usize>, ring: &Ring) -> i64 {
    let s = rows.start;
    let x = |i: usize, j: usize| a[s + i][s + j];
    let d = match rows.len() {
        1 => x(0, 0),
        2 => x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0),
        3 => {
            x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) - x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0))
                + x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0))
        }
        _ => unreachable!(),
    };
    ring.red(d)
}

/// Inverse of the diagonal block `rows × rows` of `a`, by adjugate.
#[allow(clippy::needless_range_loop)]
fn block_inverse(a: &Mat, rows: std::ops::Range<usize>, ring: &Ring) -> Option<Mat> {
    let det = det_mod(a, rows.clone(), ring);
    if det % ring.p == 0 {
        return None;
    }
    let di = ring.inv[det as usize];
    let s = rows.start;
    let x = |i: usize, j: usize| a[s + i][s + j];
    let mut out = [[0; MAXN]; MAXN];
    match rows.len() {
        1 => out[0][0] = di,
        2 => {
            out[0][0] = x(1, 1);
            out[0][1] = -x(0, 1);
            out[1][0] = -x(1, 0);
            out[1][1] = x(0, 0);
        }
        3 => {
            for i in 0..3 {
                for j in 0..3 {
                    let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                    let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                    out[i][j] = x(r0, c0) * x(r1, c1) - x(r0, c1) * x(r1, c0);
                }
            }
        }
        _ => unreachable!(),
    }
    if rows.len() > 1 {
        for row in out.iter_mut().take(rows.len()) {
            for v in row.iter_mut().take(rows.len()) {
                *v = ring.red(*v * di);
            }
        }
    }
    Some(out)
}

/// Block LDU elimination of `g` with its last diagonal entry set to zero.
/// Every condition except the one on `D_{n−1,n−1}` is checked; on success
/// returns `s` such that `D_{n−1,n−1} = g_{n−1,n−1} + s`, since that
/// entry enters the elimination only additively.
#[allow(clippy::needless_range_loop)]
fn factor_prefix(g: &Mat, n: usize, blocks: &[(usize, usize)], bounds: &Mat, ring: &Ring) -> Option<i64> {
    let mut a = *g;
    for (bi, &(s, e)) in blocks.iter().enumerate() {
        for i in s..e {
            for j in s..e {
                if i == n - 1 && j == n - 1 {
                    continue;
                }
                let m = bounds[i][j];
                let ok =
                    if i == j { m == 0 || ring.has_val(ring.red(a[i][j] - 1), m) } else { ring.has_val(a[i][j], m) };
                if !ok {
                    return None;
                }
            }
        }
        if bi + 1 == blocks.len() {
            break;
        }
        let pinv = block_inverse(&a, s..e, ring)?;
        let b = e - s;
        let mut l = [[0i64; MAXN]; MAXN];
        for i in e..n {
            for k in 0..b {
                let v: i64 = (0..b).map(|t| a[i][s + t] * pinv[t][k]).sum();
                l[i][k] = ring.red(v);
                if !ring.has_val(l[i][k], bounds[i][s + k]) {
                    return None;
                }
            }
        }
        for j in e..n {
            for k in 0..b {
                let v: i64 = (0..b).map(|t| pinv[k][t] * a[s + t][j]).sum();
                if !ring.has_val(ring.red(v), bounds[s + k][j]) {
                    return None;
                }
            }
        }
        for i in e..n {
            for j in e..n {
                let v: i64 = (0..b).map(|k| l[i][k] * a[s + k][j]).sum();
                a[i][j] = ring.red(a[i][j] - v);
            }
        }
    }
    Some(a[n - 1][n - 1])
}

/// A check index with the block ranges of its partition.
type IndexedBlocks = (usize, Vec<(usize, usize)>);

#[allow(clippy::needless_range_loop)]
fn to_mat(k: &ValuationGroupScheme) -> Mat {
    let mut m = [[0; MAXN]; MAXN];
    for i in 0..k.n {
        for j in 0..k.n {
            m[i][j] = k.bounds[i][j];
        }
    }
    m
}

fn entry_choices(k: &ValuationGroupScheme, ring: &Ring, i: usize, j: usize) -> Vec<i64> {
    let level = ring.pow.len() as i64 - 1;
    let m = k.bounds[i][j].min(level);
    let step = ring.pow[m as usize];
    let base = if i == j && m > 0 { 1 } else { 0 };
    (0..ring.modulus / step).map(|t| ring.red(base + t * step)).collect()
}

/// Enumerates `K mod p^N` as prefixes (all entries but the last diagonal
/// one, which is left zero) together with the admissible last entries.
/// `f` receives the prefix and, for each last entry, whether `g` is
/// invertible.
fn for_each_prefix(k: &ValuationGroupScheme, ring: &Ring, mut f: impl FnMut(&Mat, &[i64], &dyn Fn(i64) -> bool)) {
    let n = k.n;
    let free = n * n - 1;
    let choices: Vec<Vec<i64>> = (0..free).map(|c| entry_choices(k, ring, c / n, c % n)).collect();
    let last = entry_choices(k, ring, n - 1, n - 1);
    let mut idx = vec![0usize; free];
    let mut g: Mat = [[0; MAXN]; MAXN];
    loop {
        for (c, &t) in idx.iter().enumerate() {
            g[c / n][c % n] = choices[c][t];
        }
        let rest = det_mod(&g, 0..n, ring);
        let minor = if n == 1 { 1 } else { det_mod(&g, 0..n - 1, ring) };
        let unit = |v: i64| (rest + v * minor) % ring.p != 0;
        f(&g, &last, &unit);
        let mut c = free;
        loop {
            if c == 0 {
                return;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < choices[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

/// `|K mod p^N|` by enumeration.
pub fn brute_force_order(k: &ValuationGroupScheme, p: u64, level: i64) -> u64 {
    assert!(k.n <= MAXN, "enumeration supports n ≤ 3");
    let ring = Ring::new(p as i64, level);
    let mut count = 0u64;
    for_each_prefix(k, &ring, |_, last, unit| count += last.iter().filter(|&&v| unit(v)).count() as u64);
    count
}

fn factor_counts(k: &ValuationGroupScheme, partition: &Partition, level: i64) -> VolumeExponent {
    let mut unipotent = 0;
    for i in 0..k.n {
        for j in 0..k.n {
            if partition.block_of(i) != partition.block_of(j) {
                unipotent += level - k.bounds[i][j];
            }
        }
    }
    let levi = k.intersect_levi(partition).expect("partition checked by caller");
    levi.blocks.iter().fold(VolumeExponent::q_power(unipotent), |acc, b| acc.mul(&b.order_mod(level)))
}

/// Runs every requested `(partition, sign)` check. The product map
/// `N⁻ × M × N → GL_n` is injective and lands in `K` by closure, so the
/// analytic test compares `|K|` with the product of the three factor
/// counts. The exhaustive test factors every element of `K mod p^N`,
/// `N = max bound + 1`, and compares enumerated sizes; it is skipped above
/// `cap` elements.
pub fn iwahori_factorization_sweep(
    k: &ValuationGroupScheme,
    checks: &[(Partition, SignConvention)],
    p: u64,
    cap: u64,
) -> Result<Vec<SpadeReport>> {
    for (part, _) in checks {
        if part.n() != k.n {
            return Err(HeckeError::InvalidPartition(format!("{:?} does not partition {}", part.sizes, k.n)));
        }
    }
    let level = k.level();
    let whole = k.order_mod(level);
    let analytic: Vec<bool> = checks.iter().map(|(part, _)| factor_counts(k, part, level) == whole).collect();
    let expected = whole.eval(p);
    let feasible = k.n <= MAXN && expected <= BigRational::from_integer(BigInt::from(cap));
    let mut brute: Vec<Option<bool>> = vec![None; checks.len()];
    let mut elements = 0;
    if feasible {
        let ring = Ring::new(p as i64, level);
        let reversal: Vec<usize> = (0..k.n).rev().collect();
        for sign in [SignConvention::LowerFirst, SignConvention::UpperFirst] {
            // (K ∩ N)(K ∩ M)(K ∩ N⁻) is the lower-first product for the
            // reversed partition after conjugating by the longest element.
            let (group, mine): (ValuationGroupScheme, Vec<IndexedBlocks>) = match sign {
                SignConvention::LowerFirst => (
                    k.clone(),
                    checks.iter().enumerate().filter(|(_, c)| c.1 == sign).map(|(i, c)| (i, c.0.blocks())).collect(),
                ),
                SignConvention::UpperFirst => (
                    k.conjugate_by_permutation(&reversal),
                    checks
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.1 == sign)
                        .map(|(i, c)| (i, c.0.reversed().blocks()))
                        .collect(),
                ),
            };
            if mine.is_empty() {
                continue;
            }
            let bounds = to_mat(&group);
            let n = k.n;
            let m_last = bounds[n - 1][n - 1];
            let mut all_factor = vec![true; mine.len()];
            let mut count = 0u64;
            let mut prefix = vec![None; mine.len()];
            for_each_prefix(&group, &ring, |g, last, unit| {
                for (c, (_, blocks)) in mine.iter().enumerate() {
                    prefix[c] = if all_factor[c] { factor_prefix(g, n, blocks, &bounds, &ring) } else { None };
                }
                for &v in last {
                    if !unit(v) {
                        continue;
                    }
                    count += 1;
                    for (c, ok) in all_factor.iter_mut().enumerate() {
                        if *ok {
                            *ok = prefix[c].is_some_and(|s| m_last == 0 || ring.has_val(ring.red(v + s - 1), m_last));
                        }
                    }
                }
            });
            elements = count;
            let count_ok = BigRational::from_integer(BigInt::from(count)) == expected;
            for (c, (i, _)) in mine.iter().enumerate() {
                // K ⊆ product, and |product| ≤ product of enumerated factor sizes.
                let product_size = factor_counts_enumerated(k, &checks[*i].0, &ring);
                brute[*i] = Some(count_ok && all_factor[c] && product_size == count);
            }
        }
    }
    Ok(checks
        .iter()
        .enumerate()
        .map(|(c, (part, sign))| SpadeReport {
            partition: part.clone(),
            sign: *sign,
            analytic: analytic[c],
            brute_force: brute[c],
            status: if feasible { SpadeStatus::Verified } else { SpadeStatus::UnverifiedExhaustively },
            p,
            level,
            elements,
        })
        .collect())
}

fn factor_counts_enumerated(k: &ValuationGroupScheme, part: &Partition, ring: &Ring) -> u64 {
    let level = ring.pow.len() as i64 - 1;
    let mut total = 1u64;
    for i in 0..k.n {
        for j in 0..k.n {
            if part.block_of(i) != part.block_of(j) {
                total *= (0..ring.modulus).filter(|&v| ring.has_val(v, k.bounds[i][j])).count() as u64;
            }
        }
    }
    for b in k.intersect_levi(part).unwrap().blocks {
        total *= brute_force_order(&b, ring.p as u64, level);
    }
    total
}

pub fn iwahori_factorization_check(
    k: &ValuationGroupScheme,
    partition: &Partition,
    sign: SignConvention,
    p: u64,
    cap: u64,
) -> Result<SpadeReport> {
    Ok(iwahori_factorization_sweep(k, &[(partition.clone(), sign)], p, cap)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountCheck {
    pub p: u64,
    pub index_i_k1: u64,
    pub index_i_i1: u64,
    pub matches_symbolic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HeartMembership {
    NotInHeart,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub g_x1: Vec<Vec<i64>>,
    pub conjugated: Vec<Vec<i64>>,
    pub k1: Vec<Vec<i64>>,
    pub i1: Vec<Vec<i64>>,
    pub index_i_k1: VolumeExponent,
    pub index_i_i1: VolumeExponent,
    pub obstruction: ConjugacyObstruction,
    pub point_counts: Vec<PointCountCheck>,
    pub verdict: HeartMembership,
}

/// Escalates a condition-(1) mismatch for `GL_n` at `(θ, w₂)`: compares
/// `G_{x,r} ∩ M_θ` with `w₂ G_{x,r} w₂⁻¹ ∩ M_θ` block by block.
pub fn escalate_gl(
    datum: &RootDatum,
    x: &ApartmentPoint,
    r: Rational64,
    theta: &[usize],
    w2: &WeylElement,
) -> Result<(ValuationGroupScheme, ValuationGroupScheme, LeviIntersection, LeviIntersection, ConjugacyObstruction)> {
    let n = datum.semisimple_rank() + 1;
    let k = ValuationGroupScheme::from_filtration(&filtration_profile(datum, x, r), datum)?;
    let conj = k.conjugate_by_permutation(&permutation_of(w2, n));
    let part = Partition::from_theta(n, theta);
    let (lk, lc) = (k.intersect_levi(&part)?, conj.intersect_levi(&part)?);
    let mut verdict = ConjugacyObstruction::Inconclusive;
    for (a, b) in lk.blocks.iter().zip(&lc.blocks) {
        if let ConjugacyObstruction::DistinctVolume { ratio } = conjugacy_obstruction(a, b) {
            verdict = ConjugacyObstruction::DistinctVolume { ratio };
            break;
        }
    }
    Ok((k, conj, lk, lc, verdict))
}

/// The `GL_3`, `x = e_1^∨/2`, `r = 1` pipeline: thresholds, conjugation by
/// the transposition, the Levi blocks `K₁` and `I₁`, their indices in the
/// Iwahori subgroup, and point-count confirmation in `GL_2(Z/p²)`.
pub fn gl3_counterexample() -> Result<CounterexampleReport> {
    let datum = RootDatum::named("gl3")?;
    let weyl = enumerate_weyl(&datum)?;
    let x = ApartmentPoint::new(&[(1, 2), (0, 1), (0, 1)]);
    let r = Rational64::one();
    let theta = [1usize];
    let verdict = heart_condition1_check(&datum, &weyl, &x, r, &theta);
    if verdict.status != HeartStatus::Mismatch {
        return Err(HeckeError::InvalidModel("expected a condition-(1) mismatch".into()));
    }
    let s1 = weyl.iter().find(|w| w.word == [0]).expect("simple reflection");
    let (k, conj, lk, lc, obstruction) = escalate_gl(&datum, &x, r, &theta, s1)?;
    let k1 = lk.blocks[1].clone();
    let i1 = lc.blocks[1].clone();
    let iw = ValuationGroupScheme::iwahori(2);
    let index_i_k1 = iw.index(&k1)?;
    let index_i_i1 = iw.index(&i1)?;
    let point_counts = [2u64, 3]
        .iter()
        .map(|&p| {
            let order_i = brute_force_order(&iw, p, 2);
            let a = order_i / brute_force_order(&k1, p, 2);
            let b = order_i / brute_force_order(&i1, p, 2);
            let as_rat = |v: u64| BigRational::from_integer(BigInt::from(v));
            PointCountCheck {
                p,
                index_i_k1: a,
                index_i_i1: b,
                matches_symbolic: as_rat(a) == index_i_k1.eval(p) && as_rat(b) == index_i_i1.eval(p),
            }
        })
        .collect();
    let verdict = match obstruction {
        ConjugacyObstruction::DistinctVolume { .. } => HeartMembership::NotInHeart,
        ConjugacyObstruction::Inconclusive => HeartMembership::Undecided,
    };
    Ok(CounterexampleReport {
        g_x1: k.bounds,
        conjugated: conj.bounds,
        k1: k1.bounds,
        i1: i1.bounds,
        index_i_k1,
        index_i_i1,
        obstruction,
        point_counts,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(b: &[&[i64]]) -> ValuationGroupScheme {
        ValuationGroupScheme::new(b.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn displayed_matrices() {
        let rep = gl3_counterexample().unwrap();
        assert_eq!(rep.g_x1, vec![vec![1, 1, 1], vec![2, 1, 1], vec![2, 1, 1]]);
        assert_eq!(rep.conjugated, vec![vec![1, 2, 1], vec![1, 1, 1], vec![1, 2, 1]]);
        assert_eq!(rep.k1, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(rep.i1, vec![vec![1, 1], vec![2, 1]]);
        assert_eq!(rep.index_i_k1.to_string(), "q(q-1)^2");
        assert_eq!(rep.index_i_i1.to_string(), "q^2(q-1)^2");
        assert!(rep.point_counts.iter().all(|c| c.matches_symbolic));
        assert_eq!(rep.verdict, HeartMembership::NotInHeart);
    }

    #[test]
    fn gl2_half_point_is_i1() {
        let gl2 = RootDatum::named("gl2").unwrap();
        let x = ApartmentPoint::new(&[(1, 2), (0, 1)]);
        let k = ValuationGroupScheme::from_filtration(&filtration_profile(&gl2, &x, Rational64::one()), &gl2).unwrap();
        assert_eq!(k.bounds, vec![vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn closure_rejected() {
        let err = ValuationGroupScheme::new(vec![vec![1, 0, 3], vec![0, 1, 0], vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(err, HeckeError::ClosureViolation { .. }));
        assert!(ValuationGroupScheme::new(vec![vec![2, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn permutation_conjugation() {
        let k = g(&[&[1, 1, 1], &[2, 1, 1], &[2, 1, 1]]);
        assert_eq!(k.conjugate_by_permutation(&[0, 1, 2]), k);
        let c = k.conjugate_by_permutation(&[1, 0, 2]);
        assert_eq!(c.conjugate_by_permutation(&[1, 0, 2]), k);
        let full = Partition::new(vec![3]).unwrap();
        assert_eq!(k.intersect_levi(&full).unwrap().blocks, vec![k.clone()]);
    }

    #[test]
    fn volumes_and_indices() {
        let k = g(&[&[1, 1], &[1, 1]]);
        assert!(k.index(&k).unwrap().is_one());
        let iw = ValuationGroupScheme::iwahori(2);
        assert!(matches!(k.index(&iw), Err(HeckeError::NotContained(_, _))));
        let gl2 = g(&[&[0, 0], &[0, 0]]);
        assert_eq!(gl2.index(&iw).unwrap().to_string(), "(q-1)^-1(q^2-1)");
        for p in [2, 3] {
            for kk in [&k, &iw, &gl2] {
                for level in [kk.max_bound().max(1), kk.max_bound() + 1] {
                    let count = BigRational::from_integer(BigInt::from(brute_force_order(kk, p, level)));
                    assert_eq!(count, kk.order_mod(level).eval(p));
                }
            }
        }
    }

    #[test]
    fn obstruction_examples() {
        let k1 = g(&[&[1, 1], &[1, 1]]);
        let i1 = g(&[&[1, 1], &[2, 1]]);
        assert!(matches!(conjugacy_obstruction(&k1, &i1), ConjugacyObstruction::DistinctVolume { .. }));
        assert_eq!(
            conjugacy_obstruction(&i1, &i1.conjugate_by_permutation(&[1, 0])),
            ConjugacyObstruction::Inconclusive
        );
        assert_eq!(conjugacy_obstruction(&k1, &k1), ConjugacyObstruction::Inconclusive);
    }

    #[test]
    fn spade_examples() {
        let i1 = g(&[&[1, 1], &[2, 1]]);
        let part = Partition::new(vec![1, 1]).unwrap();
        for p in [2, 3] {
            for sign in [SignConvention::LowerFirst, SignConvention::UpperFirst] {
                let rep = iwahori_factorization_check(&i1, &part, sign, p, DEFAULT_BRUTE_FORCE_CAP).unwrap();
                assert_eq!(rep.status, SpadeStatus::Verified);
                assert_eq!(rep.level, 3);
                assert!(rep.passes(), "{rep:?}");
            }
        }
        // GL_2(O) has no Iwahori decomposition for the Borel; both methods see it.
        let gl2 = g(&[&[0, 0], &[0, 0]]);
        let rep =
            iwahori_factorization_check(&gl2, &part, SignConvention::LowerFirst, 2, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!((rep.analytic, rep.brute_force), (false, Some(false)));
        let iw = ValuationGroupScheme::iwahori(2);
        let rep =
            iwahori_factorization_check(&iw, &part, SignConvention::UpperFirst, 3, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!((rep.analytic, rep.brute_force), (true, Some(true)));
    }

    #[test]
    fn spade_gl3_counterexample_group() {
        let k = g(&[&[1, 1, 1], &[2, 1, 1], &[2, 1, 1]]);
        let part = Partition::new(vec![1, 2]).unwrap();
        let rep =
            iwahori_factorization_check(&k, &part, SignConvention::LowerFirst, 2, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert!(rep.passes() && rep.brute_force == Some(true));
        let capped = iwahori_factorization_check(&k, &part, SignConvention::LowerFirst, 3, 10).unwrap();
        assert_eq!(capped.status, SpadeStatus::UnverifiedExhaustively);
        assert!(capped.analytic);
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all(3).len(), 4);
        assert_eq!(Partition::from_theta(3, &[1]).sizes, vec![1, 2]);
        assert_eq!(Partition::from_theta(3, &[]).sizes, vec![1, 1, 1]);
        assert_eq!("1,2".parse::<Partition>().unwrap().blocks(), vec![(0, 1), (1, 3)]);
    }
}
