//! Subsets of `Z^d` with decidable membership.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::norm::QuadraticNorm;
use super::zeta::zeta;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LatticeSet {
    Full,
    Empty,
    Singleton {
        point: Vec<i64>,
    },
    Finite {
        points: BTreeSet<Vec<i64>>,
    },
    /// `beta_j ≡ a_j (mod l_j)` for every `j`.
    Progression {
        moduli: Vec<i64>,
        residues: Vec<i64>,
    },
    /// `gcd(|beta_1|, ..., |beta_d|) = 1`; excludes the zero vector.
    Coprime,
    /// `beta_axis > 0`, axis 0-based.
    HalfSpace {
        axis: usize,
    },
    /// Nonzero vectors within angle `arccos(min_cos)` of `direction`, in the
    /// Euclidean sense.
    Sector {
        direction: Vec<f64>,
        min_cos: f64,
    },
    Complement {
        of: Box<LatticeSet>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownDensity {
    pub value: f64,
    pub basis: String,
}

impl KnownDensity {
    fn new(value: f64, basis: &str) -> Self {
        Self {
            value,
            basis: basis.to_string(),
        }
    }
}

impl LatticeSet {
    pub fn progression(moduli: Vec<i64>, residues: Vec<i64>) -> Result<Self> {
        if moduli.len() != residues.len() || moduli.is_empty() {
            return Err(Error::InvalidSet("moduli and residues must be nonempty and equally long".into()));
        }
        if let Some(l) = moduli.iter().find(|&&l| l < 1) {
            return Err(Error::InvalidSet(format!("modulus {l} must be >= 1")));
        }
        let residues = residues.iter().zip(&moduli).map(|(a, l)| a.rem_euclid(*l)).collect();
        Ok(LatticeSet::Progression { moduli, residues })
    }

    pub fn complement(self) -> Self {
        LatticeSet::Complement { of: Box::new(self) }
    }

    /// Membership. Vectors of the wrong dimension for a dimensioned set are
    /// not members.
    pub fn contains(&self, beta: &[i64]) -> bool {
        match self {
            LatticeSet::Full => true,
            LatticeSet::Empty => false,
            LatticeSet::Singleton { point } => point.as_slice() == beta,
            LatticeSet::Finite { points } => points.contains(beta),
            LatticeSet::Progression { moduli, residues } => {
                beta.len() == moduli.len()
                    && beta
                        .iter()
                        .zip(moduli.iter().zip(residues))
                        .all(|(b, (l, a))| (b - a).rem_euclid(*l) == 0)
            }
            LatticeSet::Coprime => beta.iter().fold(0i64, |g, b| g.gcd(b)) == 1,
            LatticeSet::HalfSpace { axis } => beta.get(*axis).is_some_and(|&b| b > 0),
            LatticeSet::Sector { direction, min_cos } => {
                if beta.len() != direction.len() || beta.iter().all(|&b| b == 0) {
                    return false;
                }
                let dot: f64 = beta.iter().zip(direction).map(|(&b, u)| b as f64 * u).sum();
                let nb = beta.iter().map(|&b| (b * b) as f64).sum::<f64>().sqrt();
                let nu = direction.iter().map(|u| u * u).sum::<f64>().sqrt();
                dot >= min_cos * nb * nu
            }
            LatticeSet::Complement { of } => !of.contains(beta),
        }
    }

    /// Closed-form density in dimension `dim`, when one is known. `norm`
    /// matters only for sets that are not invariant under linear changes of
    /// the ball shape; `None` means Euclidean.
    pub fn known_density(&self, dim: usize, norm: Option<&QuadraticNorm>) -> Option<KnownDensity> {
        match self {
            LatticeSet::Full => Some(KnownDensity::new(1.0, "whole lattice")),
            LatticeSet::Empty => Some(KnownDensity::new(0.0, "empty set")),
            LatticeSet::Singleton { .. } | LatticeSet::Finite { .. } => Some(KnownDensity::new(0.0, "finite set")),
            LatticeSet::Progression { moduli, .. } if moduli.len() == dim => {
                let p: f64 = moduli.iter().map(|&l| l as f64).product();
                Some(KnownDensity::new(1.0 / p, "exact: index of the sublattice"))
            }
            LatticeSet::Progression { .. } => None,
            LatticeSet::Coprime if dim >= 2 => {
                Some(KnownDensity::new(1.0 / zeta(dim as u32), "1/zeta(d), Cesaro coprimality density"))
            }
            LatticeSet::Coprime => None,
            LatticeSet::HalfSpace { axis } if *axis < dim => {
                Some(KnownDensity::new(0.5, "symmetry x -> -x of every norm ball"))
            }
            LatticeSet::HalfSpace { .. } => None,
            LatticeSet::Sector { direction, min_cos } => {
                let euclidean = norm.is_none_or(|n| *n.matrix() == DMatrix::identity(dim, dim));
                (dim == 2 && direction.len() == 2 && euclidean && (-1.0..=1.0).contains(min_cos))
                    .then(|| KnownDensity::new(min_cos.acos() / PI, "planar sector: opening angle / 2 pi"))
            }
            LatticeSet::Complement { of } => of
                .known_density(dim, norm)
                .map(|d| KnownDensity::new(1.0 - d.value, &format!("complement of {}", d.basis))),
        }
    }

    /// Whether membership factors into per-coordinate conditions.
    pub(crate) fn coordinate_factors(&self, dim: usize) -> Option<Vec<(i64, i64)>> {
        match self {
            LatticeSet::Full => Some(vec![(1, 0); dim]),
            LatticeSet::Progression { moduli, residues } if moduli.len() == dim => {
                Some(moduli.iter().copied().zip(residues.iter().copied()).collect())
            }
            _ => None,
        }
    }
}

fn parse_vec(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidSet(format!("bad integer {x:?}")))
        })
        .collect()
}

fn parse_fields<'a>(body: &'a str, names: &[&str]) -> Result<Vec<&'a str>> {
    let mut out = vec![None; names.len()];
    for part in body.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidSet(format!("expected key=value, got {part:?}")))?;
        let pos = names
            .iter()
            .position(|n| *n == key.trim())
            .ok_or_else(|| Error::InvalidSet(format!("unknown field {key:?}")))?;
        out[pos] = Some(value);
    }
    out.into_iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| Error::InvalidSet(format!("missing field {n}"))))
        .collect()
}

impl FromStr for LatticeSet {
    type Err = Error;

    /// `full`, `empty`, `coprime`, `singleton:0,0`, `finite:[[0,0],[1,2]]`,
    /// `progression:l=2,2;a=0,0`, `halfspace:1` (1-based axis),
    /// `sector:u=1,0;cos=0.5`, `not:<set>`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let (head, body) = t.split_once(':').unwrap_or((t, ""));
        match (head, body) {
            ("full", "") => Ok(LatticeSet::Full),
            ("empty", "") => Ok(LatticeSet::Empty),
            ("coprime", "") => Ok(LatticeSet::Coprime),
            ("singleton", b) => Ok(LatticeSet::Singleton { point: parse_vec(b)? }),
            ("finite", b) => {
                let points: BTreeSet<Vec<i64>> =
                    serde_json::from_str(b).map_err(|e| Error::InvalidSet(format!("finite set JSON: {e}")))?;
                Ok(LatticeSet::Finite { points })
            }
            ("progression", b) => {
                let f = parse_fields(b, &["l", "a"])?;
                LatticeSet::progression(parse_vec(f[0])?, parse_vec(f[1])?)
            }
            ("halfspace", b) => {
                let axis: usize = b.trim().parse().map_err(|_| Error::InvalidSet(format!("bad axis {b:?}")))?;
                if axis == 0 {
                    return Err(Error::InvalidSet("halfspace axis is 1-based".into()));
                }
                Ok(LatticeSet::HalfSpace { axis: axis - 1 })
            }
            ("sector", b) => {
                let f = parse_fields(b, &["u", "cos"])?;
                let direction = f[0]
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Error::InvalidSet(format!("bad direction {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                let min_cos: f64 = f[1].trim().parse().map_err(|_| Error::InvalidSet(format!("bad cos {:?}", f[1])))?;
                if direction.iter().all(|u| *u == 0.0) || !(-1.0..=1.0).contains(&min_cos) {
                    return Err(Error::InvalidSet("sector needs a nonzero direction and cos in [-1, 1]".into()));
                }
                Ok(LatticeSet::Sector { direction, min_cos })
            }
            ("not", b) => Ok(b.parse::<LatticeSet>()?.complement()),
            _ => Err(Error::InvalidSet(format!("unknown set {text:?}"))),
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSet::Full => write!(f, "full"),
            LatticeSet::Empty => write!(f, "empty"),
            LatticeSet::Coprime => write!(f, "coprime"),
            LatticeSet::Singleton { point } => write!(f, "singleton:{}", join(point)),
            LatticeSet::Finite { points } => {
                write!(f, "finite:{}", serde_json::to_string(points).map_err(|_| fmt::Error)?)
            }
            LatticeSet::Progression { moduli, residues } => {
                write!(f, "progression:l={};a={}", join(moduli), join(residues))
            }
            LatticeSet::HalfSpace { axis } => write!(f, "halfspace:{}", axis + 1),
            LatticeSet::Sector { direction, min_cos } => write!(f, "sector:u={};cos={min_cos}", join(direction)),
            LatticeSet::Complement { of } => write!(f, "not:{of}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coprime_convention() {
        let c = LatticeSet::Coprime;
        assert!(!c.contains(&[0, 0]));
        assert!(c.contains(&[0, -1]));
        assert!(c.contains(&[3, -4]));
        assert!(!c.contains(&[4, -6]));
        assert!(!c.contains(&[0, 2]));
    }

    #[test]
    fn parse_specs() {
        assert_eq!("full".parse::<LatticeSet>().unwrap(), LatticeSet::Full);
        assert_eq!(
            "singleton:0,0".parse::<LatticeSet>().unwrap(),
            LatticeSet::Singleton { point: vec![0, 0] }
        );
        let p: LatticeSet = "progression:l=2,2;a=0,1".parse().unwrap();
        assert!(p.contains(&[4, -1]));
        assert!(!p.contains(&[4, 0]));
        let f: LatticeSet = "finite:[[0,0],[1,2]]".parse().unwrap();
        assert!(f.contains(&[1, 2]) && !f.contains(&[2, 1]));
        let h: LatticeSet = "halfspace:2".parse().unwrap();
        assert!(h.contains(&[-5, 1]) && !h.contains(&[5, 0]));
        assert!("not:coprime".parse::<LatticeSet>().unwrap().contains(&[0, 0]));
        for bad in ["foo", "progression:l=2", "progression:l=0;a=0", "halfspace:0", "singleton:x"] {
            assert!(bad.parse::<LatticeSet>().is_err(), "{bad}");
        }
    }

    #[test]
    fn residues_are_normalized() {
        let p = LatticeSet::progression(vec![3], vec![-1]).unwrap();
        assert_eq!(p.to_string(), "progression:l=3;a=2");
        assert!(p.contains(&[5]));
    }

    #[test]
    fn densities() {
        let p = LatticeSet::progression(vec![2, 3], vec![0, 1]).unwrap();
        assert!((p.known_density(2, None).unwrap().value - 1.0 / 6.0).abs() < 1e-15);
        let c = LatticeSet::Coprime.known_density(2, None).unwrap().value;
        assert!((c - 6.0 / (PI * PI)).abs() < 1e-12);
        let s = LatticeSet::Sector {
            direction: vec![1.0, 0.0],
            min_cos: 0.0,
        };
        assert!((s.known_density(2, None).unwrap().value - 0.5).abs() < 1e-15);
        let skew = QuadraticNorm::parse("2,1;1,1").unwrap();
        assert!(s.known_density(2, Some(&skew)).is_none());
        let not_c = LatticeSet::Coprime.complement().known_density(2, None).unwrap();
        assert!((not_c.value - (1.0 - c)).abs() < 1e-15);
    }

    fn arb_set() -> impl Strategy<Value = LatticeSet> {
        prop_oneof![
            Just(LatticeSet::Full),
            Just(LatticeSet::Empty),
            Just(LatticeSet::Coprime),
            prop::collection::vec(-3i64..3, 2).prop_map(|point| LatticeSet::Singleton { point }),
            (1i64..5, 1i64..5, 0i64..5, 0i64..5)
                .prop_map(|(l1, l2, a1, a2)| LatticeSet::progression(vec![l1, l2], vec![a1, a2]).unwrap()),
            (0usize..2).prop_map(|axis| LatticeSet::HalfSpace { axis }),
            (-1.0f64..1.0).prop_map(|c| LatticeSet::Sector {
                direction: vec![1.0, 1.0],
                min_cos: c
            }),
        ]
    }

    proptest! {
        #[test]
        fn display_parses_back(set in arb_set(), b0 in -20i64..20, b1 in -20i64..20) {
            let back: LatticeSet = set.to_string().parse().unwrap();
            prop_assert_eq!(back.contains(&[b0, b1]), set.contains(&[b0, b1]));
        }

        #[test]
        fn complement_partitions(set in arb_set(), b0 in -20i64..20, b1 in -20i64..20) {
            let c = set.clone().complement();
            prop_assert!(set.contains(&[b0, b1]) != c.contains(&[b0, b1]));
        }
    }
}
