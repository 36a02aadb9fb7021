//! Matrix-size bounds for identity testing, Nullstellensätze and
//! Positivstellensätze. All arithmetic is overflow-checked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("{kind} bound requires g > 1, got g = {g}")]
    GOutOfRange { kind: StarKind, g: u64 },
    #[error("argument `{0}` must be at least 1")]
    ZeroArgument(&'static str),
    #[error("bound overflows 64-bit integers")]
    Overflow,
}

/// The three families of star zero sets with Nullstellensätze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarKind {
    /// Tuples of unitaries.
    Unitaries,
    /// Spherical isometry tuples.
    Spherical,
    /// Partitioned unitaries.
    Partitioned,
}

impl fmt::Display for StarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarKind::Unitaries => "unitaries",
            StarKind::Spherical => "spherical",
            StarKind::Partitioned => "partitioned",
        })
    }
}

impl FromStr for StarKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unitaries" => Ok(StarKind::Unitaries),
            "spherical" => Ok(StarKind::Spherical),
            "partitioned" => Ok(StarKind::Partitioned),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

/// Parameters shared by the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub m: u64,
    pub n: u64,
    pub u: u64,
    pub v: u64,
    pub d: u64,
    pub g: u64,
    pub real: bool,
}

fn positive(name: &'static str, x: u64) -> Result<u64, BoundError> {
    if x == 0 {
        Err(BoundError::ZeroArgument(name))
    } else {
        Ok(x)
    }
}

fn mul(a: u64, b: u64) -> Result<u64, BoundError> {
    a.checked_mul(b).ok_or(BoundError::Overflow)
}

fn ceil_half(x: u64) -> u64 {
    x / 2 + x % 2
}

/// `m·⌈m·n/2⌉`: a rational expression with a dimension-`n` realization about
/// an `m×m` point that vanishes on matrices of this size is an identity.
pub fn ri_bound(m: u64, n: u64) -> Result<u64, BoundError> {
    positive("m", m)?;
    positive("n", n)?;
    mul(m, ceil_half(mul(m, n)?))
}

/// `m·⌈m·u·v·max(n,2)/2⌉` for polynomials of degree `u` with `v` terms.
pub fn nss_bound(m: u64, n: u64, u: u64, v: u64) -> Result<u64, BoundError> {
    for (name, x) in [("m", m), ("n", n), ("u", u), ("v", v)] {
        positive(name, x)?;
    }
    let inner = mul(mul(mul(m, u)?, v)?, n.max(2))?;
    mul(m, ceil_half(inner))
}

/// `m·⌈m·d·(g+1)^d·max(n,2)/2⌉` for polynomials of degree `d` in `g` letters.
pub fn nss_degree_bound(m: u64, n: u64, d: u64, g: u64) -> Result<u64, BoundError> {
    for (name, x) in [("m", m), ("n", n), ("d", d), ("g", g)] {
        positive(name, x)?;
    }
    let exp = u32::try_from(d).map_err(|_| BoundError::Overflow)?;
    let terms = (g + 1).checked_pow(exp).ok_or(BoundError::Overflow)?;
    let inner = mul(mul(mul(m, d)?, terms)?, n.max(2))?;
    mul(m, ceil_half(inner))
}

/// Size at which vanishing on the star zero set of `kind` forces membership:
/// `uv`, `⌈(g+1)uv/2⌉` or `⌈g·uv/2⌉` (block size), doubled over the reals.
pub fn star_bound(kind: StarKind, g: u64, u: u64, v: u64, real: bool) -> Result<u64, BoundError> {
    positive("g", g)?;
    positive("u", u)?;
    positive("v", v)?;
    let uv = mul(u, v)?;
    let base = match kind {
        StarKind::Unitaries => uv,
        StarKind::Spherical | StarKind::Partitioned if g == 1 => return Err(BoundError::GOutOfRange { kind, g }),
        StarKind::Spherical => ceil_half(mul(g + 1, uv)?),
        StarKind::Partitioned => ceil_half(mul(g, uv)?),
    };
    if real {
        mul(2, base)
    } else {
        Ok(base)
    }
}

/// Size for positivity certificates of degree `2d`: `(2g+1)^d`, or the block
/// size `(2g²+1)^d` for partitioned unitaries.
pub fn pos_size(kind: StarKind, g: u64, d: u64) -> Result<u64, BoundError> {
    positive("g", g)?;
    positive("d", d)?;
    let base = match kind {
        StarKind::Unitaries | StarKind::Spherical => mul(2, g)?.checked_add(1),
        StarKind::Partitioned => mul(2, mul(g, g)?)?.checked_add(1),
    }
    .ok_or(BoundError::Overflow)?;
    let exp = u32::try_from(d).map_err(|_| BoundError::Overflow)?;
    base.checked_pow(exp).ok_or(BoundError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_testing_examples() {
        assert_eq!(ri_bound(1, 1), Ok(1));
        assert_eq!(ri_bound(2, 3), Ok(6));
        assert_eq!(ri_bound(1, 2), Ok(1));
        assert_eq!(ri_bound(0, 2), Err(BoundError::ZeroArgument("m")));
    }

    #[test]
    fn nullstellensatz_examples() {
        assert_eq!(nss_bound(1, 1, 3, 2), Ok(6));
        assert_eq!(nss_bound(1, 3, 2, 3), Ok(9));
        assert_eq!(nss_bound(2, 3, 3, 2), Ok(36));
        assert_eq!(nss_degree_bound(1, 1, 1, 1), Ok(2));
        assert_eq!(nss_degree_bound(1, 2, 2, 2), Ok(18));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_bound(StarKind::Unitaries, 2, 3, 2, false), Ok(6));
        assert_eq!(star_bound(StarKind::Spherical, 2, 2, 3, false), Ok(9));
        assert_eq!(
            star_bound(StarKind::Spherical, 1, 2, 3, false),
            Err(BoundError::GOutOfRange { kind: StarKind::Spherical, g: 1 })
        );
        assert!(star_bound(StarKind::Partitioned, 1, 1, 1, false).is_err());
        assert_eq!(pos_size(StarKind::Unitaries, 1, 2), Ok(9));
        assert_eq!(pos_size(StarKind::Partitioned, 2, 1), Ok(9));
        assert_eq!(pos_size(StarKind::Spherical, 2, 1), Ok(5));
        assert_eq!(pos_size(StarKind::Unitaries, 3, 40), Err(BoundError::Overflow));
    }

    #[test]
    fn worked_identities() {
        for u in 1..=10 {
            for v in 1..=10 {
                let uv = u * v;
                assert_eq!(nss_bound(1, 1, u, v), Ok(uv));
                assert_eq!(nss_bound(2, 3, u, v), Ok(6 * uv));
                for g in 2..=4 {
                    assert_eq!(nss_bound(1, g + 1, u, v), Ok(((g + 1) * uv).div_ceil(2)));
                    assert_eq!(nss_bound(1, g, u, v), Ok((g * uv).div_ceil(2)));
                }
            }
        }
    }

    #[test]
    fn monotone_on_grid() {
        let grid = 1..=5u64;
        for a in grid.clone() {
            for b in grid.clone() {
                for c in grid.clone() {
                    for d in grid.clone() {
                        let base = nss_bound(a, b, c, d).unwrap();
                        assert!(nss_bound(a + 1, b, c, d).unwrap() >= base);
                        assert!(nss_bound(a, b + 1, c, d).unwrap() >= base);
                        assert!(nss_bound(a, b, c + 1, d).unwrap() >= base);
                        assert!(nss_bound(a, b, c, d + 1).unwrap() >= base);
                        let deg = nss_degree_bound(a, b, c, d).unwrap();
                        assert!(nss_degree_bound(a + 1, b, c, d).unwrap() >= deg);
                        assert!(nss_degree_bound(a, b + 1, c, d).unwrap() >= deg);
                        assert!(nss_degree_bound(a, b, c + 1, d).unwrap() >= deg);
                        assert!(nss_degree_bound(a, b, c, d + 1).unwrap() >= deg);
                    }
                    let ri = ri_bound(a, b).unwrap();
                    assert!(ri_bound(a + 1, b).unwrap() >= ri && ri_bound(a, b + 1).unwrap() >= ri);
                    for kind in [StarKind::Unitaries, StarKind::Spherical, StarKind::Partitioned] {
                        let g = a + 1;
                        let s = star_bound(kind, g, b, c, false).unwrap();
                        assert!(star_bound(kind, g + 1, b, c, false).unwrap() >= s);
                        assert!(star_bound(kind, g, b + 1, c, false).unwrap() >= s);
                        assert!(star_bound(kind, g, b, c + 1, false).unwrap() >= s);
                        let p = pos_size(kind, a, b).unwrap();
                        assert!(pos_size(kind, a + 1, b).unwrap() >= p && pos_size(kind, a, b + 1).unwrap() >= p);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn real_case_doubles(g in 2u64..8, u in 1u64..20, v in 1u64..20) {
            for kind in [StarKind::Unitaries, StarKind::Spherical, StarKind::Partitioned] {
                prop_assert_eq!(star_bound(kind, g, u, v, true).unwrap(), 2 * star_bound(kind, g, u, v, false).unwrap());
            }
        }

        #[test]
        fn degree_bound_dominates(m in 1u64..4, n in 1u64..5, d in 1u64..4, g in 1u64..4) {
            let terms = (g + 1).pow(d as u32);
            prop_assert!(nss_degree_bound(m, n, d, g).unwrap() >= nss_bound(m, n, d, terms).unwrap());
        }
    }
}
