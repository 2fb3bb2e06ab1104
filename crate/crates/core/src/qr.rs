//! Legendre character modulo a prime `p ≡ 3 (mod 4)`, quadratic-residue
//! tournaments, and short character sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Largest modulus for which a character table is built.
pub const MAX_TABLE_MODULUS: u64 = (1 << 31) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin. The first twelve primes as witnesses are
/// exact for every `n < 3.3 * 10^24`, which covers all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn validate_modulus(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidModulus { p, reason: "not prime" });
    }
    match p % 4 {
        3 => Ok(()),
        1 => Err(Error::InvalidModulus { p, reason: "p ≡ 1 (mod 4)" }),
        _ => Err(Error::InvalidModulus { p, reason: "p ≡ 2 (mod 4)" }),
    }
}

/// χ(x) by Euler's criterion, `x^((p-1)/2) mod p`.
pub fn legendre_chi(p: u64, x: u64) -> Result<i8> {
    validate_modulus(p)?;
    if x >= p {
        return Err(Error::ResidueOutOfRange { x, p });
    }
    Ok(euler_chi(p, x))
}

fn euler_chi(p: u64, x: u64) -> i8 {
    if x == 0 {
        return 0;
    }
    match pow_mod(x, (p - 1) / 2, p) {
        1 => 1,
        r => {
            debug_assert_eq!(r, p - 1);
            -1
        }
    }
}

/// A valid modulus with its precomputed character table.
#[derive(Clone, PartialEq, Eq)]
pub struct QrModulus {
    p: u64,
    chi: Vec<i8>,
}

impl std::fmt::Debug for QrModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QrModulus").field("p", &self.p).finish_non_exhaustive()
    }
}

impl QrModulus {
    /// Validates `p` and fills the table by marking the squares `y² mod p`.
    pub fn new(p: u64) -> Result<Self> {
        validate_modulus(p)?;
        if p > MAX_TABLE_MODULUS {
            return Err(Error::InvalidModulus { p, reason: "exceeds 2^31 - 1 table limit" });
        }
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for y in 1..=(p - 1) / 2 {
            chi[mul_mod(y, y, p) as usize] = 1;
        }
        Ok(QrModulus { p, chi })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn table(&self) -> &[i8] {
        &self.chi
    }

    #[inline]
    pub fn chi(&self, x: u64) -> i8 {
        self.chi[(x % self.p) as usize]
    }

    /// χ(x − a) for residues `x`, `a`.
    #[inline]
    pub fn chi_diff(&self, x: u64, a: u64) -> i8 {
        self.chi[((x + self.p - a % self.p) % self.p) as usize]
    }

    /// The QR tournament: edge `(x, y)` iff `x − y` is a nonzero square.
    pub fn tournament(&self) -> Tournament {
        Tournament::from_fn(self.p as usize, |x, y| self.chi_diff(x as u64, y as u64) == 1)
            .expect("p >= 3")
    }

    /// `Σ_x Π_i χ(x − a_i)` by direct scan over all residues.
    pub fn character_sum(&self, offsets: &[u64]) -> Result<CharacterSumReport> {
        let r = offsets.len();
        if r == 0 || r as u64 >= self.p {
            return Err(Error::OffsetCount { r, p: self.p });
        }
        for (i, &a) in offsets.iter().enumerate() {
            if a >= self.p {
                return Err(Error::ResidueOutOfRange { x: a, p: self.p });
            }
            if offsets[..i].contains(&a) {
                return Err(Error::DuplicateOffset(a));
            }
        }
        let value: i64 = (0..self.p)
            .map(|x| offsets.iter().map(|&a| self.chi_diff(x, a) as i64).product::<i64>())
            .sum();
        let r1 = (r - 1) as u128;
        let within_bound = (value.unsigned_abs() as u128).pow(2) <= r1 * r1 * self.p as u128;
        Ok(CharacterSumReport {
            offsets: offsets.to_vec(),
            value,
            burgess_bound: (r - 1) as f64 * (self.p as f64).sqrt(),
            within_bound,
        })
    }
}

pub fn build_qr(p: u64) -> Result<Tournament> {
    Ok(QrModulus::new(p)?.tournament())
}

pub fn character_sum(p: u64, offsets: &[u64]) -> Result<CharacterSumReport> {
    QrModulus::new(p)?.character_sum(offsets)
}

/// A character sum together with the `(r − 1)·√p` comparison.
///
/// `within_bound` is decided exactly as `value² ≤ (r − 1)²·p`;
/// `burgess_bound` is the floating-point bound for display.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSumReport {
    pub offsets: Vec<u64>,
    pub value: i64,
    pub burgess_bound: f64,
    pub within_bound: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(p: u64) -> Vec<u64> {
        let mut s: Vec<u64> = (1..p).map(|y| y * y % p).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(legendre_chi(7, 0), Ok(0));
        assert_eq!(squares(7), [1, 2, 4]);
        assert_eq!(legendre_chi(7, 3), Ok(-1));
        assert_eq!(legendre_chi(7, 6), Ok(-1));
        assert!(matches!(legendre_chi(5, 1), Err(Error::InvalidModulus { p: 5, .. })));
        assert!(matches!(legendre_chi(9, 1), Err(Error::InvalidModulus { p: 9, .. })));
        assert!(matches!(legendre_chi(2, 1), Err(Error::InvalidModulus { p: 2, .. })));
        assert!(matches!(legendre_chi(7, 7), Err(Error::ResidueOutOfRange { .. })));
    }

    #[test]
    fn table_matches_euler_and_invariants() {
        for p in [3u64, 7, 11, 19, 23, 31, 43, 151, 1031] {
            let q = QrModulus::new(p).unwrap();
            let t = q.table();
            assert_eq!(t[0], 0);
            assert_eq!(t.iter().filter(|&&c| c == 1).count() as u64, (p - 1) / 2);
            assert_eq!(t.iter().filter(|&&c| c == -1).count() as u64, (p - 1) / 2);
            for x in 0..p {
                assert_eq!(t[x as usize], legendre_chi(p, x).unwrap());
                if x > 0 {
                    assert_eq!(t[(p - x) as usize], -t[x as usize]);
                }
            }
        }
    }

    #[test]
    fn build_qr_examples() {
        let t3 = build_qr(3).unwrap();
        assert_eq!(t3.edges().collect::<Vec<_>>(), [(0, 2), (1, 0), (2, 1)]);
        // edge (0, y) iff -y is a square: the non-squares {3, 5, 6}, since -1 is a non-square
        let sq = squares(7);
        let beaten_by_0: Vec<usize> = (1..7).filter(|&y| sq.contains(&((7 - y) % 7))).map(|y| y as usize).collect();
        assert_eq!(beaten_by_0, [3, 5, 6]);
        let t7 = build_qr(7).unwrap();
        assert_eq!(t7.neighborhood(0, crate::Direction::Out).unwrap(), beaten_by_0);
        assert_eq!(t7.neighborhood(0, crate::Direction::In).unwrap(), [1, 2, 4]);
        assert!(matches!(build_qr(5), Err(Error::InvalidModulus { p: 5, .. })));
    }

    #[test]
    fn character_sum_examples() {
        assert_eq!(character_sum(7, &[0]).unwrap().value, 0);
        let r = character_sum(7, &[0, 1]).unwrap();
        assert_eq!(r.value, -1);
        assert!(r.within_bound);
        assert!((r.burgess_bound - 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(character_sum(7, &[0, 0]), Err(Error::DuplicateOffset(0)));
        assert!(matches!(character_sum(7, &[]), Err(Error::OffsetCount { .. })));
        assert!(matches!(character_sum(3, &[0, 1, 2]), Err(Error::OffsetCount { .. })));
    }

    #[test]
    fn table_limit() {
        assert!(matches!(
            QrModulus::new(2_147_483_659),
            Err(Error::InvalidModulus { reason: "exceeds 2^31 - 1 table limit", .. })
        ));
    }
}
