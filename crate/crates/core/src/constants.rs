//! The constant tuple driving the certificate pipeline, derived exactly from
//! the target ratio c1.
//!
//! All reals are exact rationals so constraint checks (notably c3 * c4 = 4)
//! never hinge on floating-point rounding. The block size m1* is the minimal
//! k >= 2 with (c1/k) * log2(4k) <= 1/2, decided by the equivalent integer
//! comparison (4k)^(2p) <= 2^(kq) for c1 = p/q.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::ramsey::diagonal_ramsey;

pub type Rat = Ratio<i128>;

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses "p/q" or a plain decimal like "0.25" into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidConstants(format!("cannot parse {s:?} as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| bad())?;
        let d: i128 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1i128, r),
        None => (1i128, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac_part.len() > 18 {
        return Err(Error::InvalidConstants(format!(
            "{s:?} has too many decimal digits (max 18)"
        )));
    }
    let mut num: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let mut den: i128 = 1;
    for c in frac_part.chars() {
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i128))
            .ok_or_else(bad)?;
        den = den.checked_mul(10).ok_or_else(bad)?;
    }
    Ok(Rat::new(sign * num, den))
}

/// The tuple (c1, m1*, m2*, c2..c5, epsilon). `theoretical` records whether
/// every derivation constraint was verified to hold, as opposed to
/// desk-scale overrides that trade the asymptotic guarantees for runnable
/// instance sizes. Certificate checking never consults the flag.
#[derive(Clone, Debug)]
pub struct Constants {
    pub c1: Rat,
    pub m1_star: u64,
    pub m2_star: u128,
    pub c2: Rat,
    pub c3: Rat,
    pub c4: Rat,
    pub c5: Rat,
    pub epsilon: Rat,
    pub theoretical: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstantOverrides {
    pub m1_star: Option<u64>,
    pub m2_star: Option<u128>,
    pub c2: Option<Rat>,
    pub c3: Option<Rat>,
    pub c4: Option<Rat>,
    pub c5: Option<Rat>,
    pub epsilon: Option<Rat>,
}

impl ConstantOverrides {
    pub fn is_empty(&self) -> bool {
        *self == ConstantOverrides::default()
    }
}

fn c1_parts(c1: &Rat) -> Result<(u64, u64)> {
    if !c1.is_positive() {
        return Err(Error::InvalidConstants("c1 must be > 0".into()));
    }
    let p = *c1.numer();
    let q = *c1.denom();
    if p > 1_000_000 || q > 1_000_000 {
        return Err(Error::InvalidConstants(
            "c1 numerator/denominator too large (max 10^6)".into(),
        ));
    }
    Ok((p as u64, q as u64))
}

/// Does (c1/k) * log2(4k) <= 1/2 hold? Fast float screen with an exact
/// big-integer comparison near the boundary.
fn block_condition_holds(p: u64, q: u64, k: u64) -> bool {
    let lhs = 2.0 * p as f64 * (4.0 * k as f64).log2();
    let rhs = (k as f64) * (q as f64);
    if lhs < rhs - 0.5 {
        return true;
    }
    if lhs > rhs + 0.5 {
        return false;
    }
    let lhs = BigUint::from(4 * k).pow(2 * p as u32);
    let rhs = BigUint::one() << ((k * q) as usize);
    lhs <= rhs
}

fn minimal_block_size(p: u64, q: u64) -> Result<u64> {
    for k in 2..=1_000_000u64 {
        if block_condition_holds(p, q, k) {
            return Ok(k);
        }
    }
    Err(Error::InvalidConstants(
        "no block size k <= 10^6 satisfies the derivation condition".into(),
    ))
}

fn rat_recip_u128(x: u128, scale: u128) -> Result<Rat> {
    let d = x
        .checked_mul(scale)
        .filter(|&d| d <= i128::MAX as u128)
        .ok_or(Error::Overflow("constant denominator"))?;
    Ok(Rat::new(1, d as i128))
}

/// Derives the full constant tuple from c1, applying any overrides. The
/// defaults are m2* = diagonal threshold of m1*, c2 = 1/(2 m2*),
/// c3 = 1/(4 m2*), c4 = 4/c3, c5 = 1/m2* - c2 - c3, epsilon = 1/100.
/// Overrides that break c3 * c4 = 4 or make c5 <= 0 are rejected; any other
/// violated constraint just clears the `theoretical` flag.
pub fn derive_constants(c1: Rat, overrides: &ConstantOverrides) -> Result<Constants> {
    let (p, q) = c1_parts(&c1)?;
    let minimal_m1 = minimal_block_size(p, q)?;
    let m1_star = overrides.m1_star.unwrap_or(minimal_m1);
    if m1_star == 0 {
        return Err(Error::InvalidConstants("m1* must be >= 1".into()));
    }
    let diag = diagonal_ramsey(m1_star)?;
    let m2_star = overrides.m2_star.unwrap_or(diag);
    if m2_star == 0 {
        return Err(Error::InvalidConstants("m2* must be >= 1".into()));
    }

    let c2 = match &overrides.c2 {
        Some(v) => *v,
        None => rat_recip_u128(m2_star, 2)?,
    };
    let c3 = match &overrides.c3 {
        Some(v) => *v,
        None => rat_recip_u128(m2_star, 4)?,
    };
    if !c3.is_positive() {
        return Err(Error::InvalidConstants("c3 must be > 0".into()));
    }
    if !c2.is_positive() {
        return Err(Error::InvalidConstants("c2 must be > 0".into()));
    }
    let four = Rat::from_integer(4);
    let c4 = match &overrides.c4 {
        Some(v) => *v,
        None => four / c3,
    };
    if c3 * c4 != four {
        return Err(Error::InvalidConstants(format!(
            "c3 * c4 must equal 4 exactly, got {} * {} = {}",
            c3,
            c4,
            c3 * c4
        )));
    }
    let inv_m2 = rat_recip_u128(m2_star, 1)?;
    let c5 = match &overrides.c5 {
        Some(v) => *v,
        None => inv_m2 - c2 - c3,
    };
    if !c5.is_positive() {
        return Err(Error::InvalidConstants(format!("c5 must be > 0, got {c5}")));
    }
    let epsilon = overrides.epsilon.unwrap_or_else(|| Rat::new(1, 100));
    if !epsilon.is_positive() || epsilon >= Rat::one() {
        return Err(Error::InvalidConstants(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }

    let theoretical = m1_star == minimal_m1
        && m2_star >= diag
        && c2 < inv_m2
        && !(inv_m2 - c2 - c3).is_negative()
        && c3 < inv_m2 - c2
        && c5 == inv_m2 - c2 - c3;

    Ok(Constants {
        c1,
        m1_star,
        m2_star,
        c2,
        c3,
        c4,
        c5,
        epsilon,
        theoretical,
    })
}

/// Convenience for runnable desk-scale experiments: m1* = m2* = 2 with the
/// remaining constants re-derived (clears the `theoretical` flag unless c1
/// itself already yields m1* = 2).
pub fn desk_scale_constants(c1: Rat) -> Result<Constants> {
    derive_constants(
        c1,
        &ConstantOverrides {
            m1_star: Some(2),
            m2_star: Some(2),
            ..Default::default()
        },
    )
}

impl Constants {
    pub fn summary(&self) -> String {
        format!(
            "c1={} m1*={} m2*={} c2={} c3={} c4={} c5={} epsilon={} theoretical={}",
            self.c1,
            self.m1_star,
            self.m2_star,
            self.c2,
            self.c3,
            self.c4,
            self.c5,
            self.epsilon,
            self.theoretical
        )
    }
}

impl std::fmt::Display for Constants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_overrides() -> ConstantOverrides {
        ConstantOverrides::default()
    }

    #[test]
    fn c1_one_gives_block_size_eleven() {
        let c = derive_constants(Rat::one(), &no_overrides()).unwrap();
        assert_eq!(c.m1_star, 11);
        assert_eq!(c.m2_star, 184_756);
        assert!(c.theoretical);
    }

    #[test]
    fn c1_half_gives_block_size_four() {
        let c = derive_constants(Rat::new(1, 2), &no_overrides()).unwrap();
        assert_eq!(c.m1_star, 4);
        assert_eq!(c.m2_star, 20);
        assert!(c.theoretical);
    }

    #[test]
    fn products_and_positivity_are_exact() {
        for c1 in [Rat::one(), Rat::new(1, 2), Rat::new(3, 2), Rat::new(1, 10)] {
            let c = derive_constants(c1, &no_overrides()).unwrap();
            assert_eq!(c.c3 * c.c4, Rat::from_integer(4));
            assert!(c.c5.is_positive());
            assert!(c.c2.is_positive() && c.c2 < Rat::new(1, c.m2_star as i128));
        }
    }

    #[test]
    fn desk_overrides_clear_theoretical_flag() {
        let c = desk_scale_constants(Rat::one()).unwrap();
        assert_eq!((c.m1_star, c.m2_star), (2, 2));
        assert!(!c.theoretical);
        assert_eq!(c.c2, Rat::new(1, 4));
        assert_eq!(c.c3, Rat::new(1, 8));
        assert_eq!(c.c4, Rat::from_integer(32));
        assert_eq!(c.c5, Rat::new(1, 8));
    }

    #[test]
    fn bad_overrides_rejected() {
        let bad_product = ConstantOverrides {
            c3: Some(Rat::new(1, 8)),
            c4: Some(Rat::from_integer(33)),
            ..Default::default()
        };
        assert!(derive_constants(Rat::one(), &bad_product).is_err());

        let bad_c5 = ConstantOverrides {
            c5: Some(Rat::new(-1, 10)),
            ..Default::default()
        };
        assert!(derive_constants(Rat::one(), &bad_c5).is_err());

        let crowding = ConstantOverrides {
            m2_star: Some(2),
            c2: Some(Rat::new(1, 4)),
            c3: Some(Rat::new(1, 4)),
            ..Default::default()
        };
        // c5 = 1/2 - 1/4 - 1/4 = 0 is not positive
        assert!(derive_constants(Rat::one(), &crowding).is_err());
    }

    #[test]
    fn consistent_single_overrides_keep_product() {
        let o = ConstantOverrides {
            m1_star: Some(2),
            m2_star: Some(2),
            c3: Some(Rat::new(1, 10)),
            ..Default::default()
        };
        let c = derive_constants(Rat::one(), &o).unwrap();
        assert_eq!(c.c4, Rat::from_integer(40));
        assert_eq!(c.c3 * c.c4, Rat::from_integer(4));
        // c5 = 1/2 - 1/4 - 1/10 = 3/20
        assert_eq!(c.c5, Rat::new(3, 20));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal_rational("1").unwrap(), Rat::one());
        assert_eq!(parse_decimal_rational("0.5").unwrap(), Rat::new(1, 2));
        assert_eq!(parse_decimal_rational("-2.25").unwrap(), Rat::new(-9, 4));
        assert_eq!(parse_decimal_rational("3/4").unwrap(), Rat::new(3, 4));
        assert_eq!(parse_decimal_rational(".25").unwrap(), Rat::new(1, 4));
        assert!(parse_decimal_rational("").is_err());
        assert!(parse_decimal_rational("1.2.3").is_err());
        assert!(parse_decimal_rational("1/0").is_err());
        assert!(parse_decimal_rational("abc").is_err());
    }

    #[test]
    fn epsilon_default_and_validation() {
        let c = derive_constants(Rat::one(), &no_overrides()).unwrap();
        assert_eq!(c.epsilon, Rat::new(1, 100));
        let bad = ConstantOverrides {
            epsilon: Some(Rat::from_integer(1)),
            ..Default::default()
        };
        assert!(derive_constants(Rat::one(), &bad).is_err());
    }
}
