//! Dimensions and decompositions of the monodromy representations E_ij and Ẽ_ij
//! on primitive cohomology of quadric intersections, and the catalog of local systems.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::from(1u32);
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

pub(crate) fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.collect_str(v),
    }
}

/// Characters χ of I_N (or of I_{N+1} with N+1 in the support) of a fixed support size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterClass {
    pub ambient: u32,
    pub size: u32,
    pub requires_last: bool,
}

impl CharacterClass {
    pub fn new(ambient: u32, size: u32, requires_last: bool) -> Result<Self> {
        if size % 2 == 1 || size < 2 || size > ambient {
            return Err(Error::OutOfRange(format!("|χ| = {size} in I_{ambient}")));
        }
        Ok(Self { ambient, size, requires_last })
    }

    pub fn count(&self) -> BigUint {
        if self.requires_last {
            binomial(self.ambient as u64 - 1, self.size as i64 - 1)
        } else {
            binomial(self.ambient as u64, self.size as i64)
        }
    }

    /// dim H^1 of the hyperelliptic curve branched over the support.
    pub fn curve_h1(&self) -> u32 {
        self.size - 2
    }
}

/// Dimension of the fundamental representation ω_j of Sp(2g).
pub fn sp_fundamental_dim(g: u32, j: u32) -> Result<BigUint> {
    if j > g {
        return Err(Error::NotFundamentalWeight { g, j });
    }
    Ok(binomial(2 * g as u64, j as i64) - binomial(2 * g as u64, j as i64 - 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    E,
    Etilde,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::E => "E",
            Family::Etilde => "Etilde",
        })
    }
}

fn check_odd(n_total: u32) -> Result<u32> {
    if n_total.is_multiple_of(2) {
        return Err(Error::EvenN(n_total));
    }
    Ok((n_total - 1) / 2)
}

fn check_indices(family: Family, n_total: u32, i: u32, j: u32) -> Result<()> {
    let n = check_odd(n_total)?;
    let top = match family {
        Family::E => n,
        Family::Etilde => n + 1,
    };
    if i < 1 || i > top || j + 1 > i {
        return Err(Error::OutOfRange(format!("{family}_{{{i},{j}}} for N = {n_total}")));
    }
    Ok(())
}

/// C(N, 2i) (resp. C(N, 2i-1)) copies of ω_j of Sp(2i-2).
pub fn dim_label(family: Family, n_total: u32, i: u32, j: u32) -> Result<BigUint> {
    check_indices(family, n_total, i, j)?;
    let chars = match family {
        Family::E => CharacterClass::new(n_total, 2 * i, false)?,
        Family::Etilde => CharacterClass::new(n_total + 1, 2 * i, true)?,
    };
    Ok(chars.count() * sp_fundamental_dim(i - 1, j)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonoLabel {
    pub family: Family,
    pub i: u32,
    pub j: u32,
    #[serde(rename = "N")]
    pub n_total: u32,
    #[serde(serialize_with = "serialize_big")]
    pub dim: BigUint,
    /// The monodromy has Zariski closure with Lie algebra sp(2i-2), hence infinite image.
    /// Recorded from the irreducibility lemmas, not recomputed.
    pub infinite_image: bool,
}

impl MonoLabel {
    pub fn new(family: Family, n_total: u32, i: u32, j: u32) -> Result<Self> {
        let dim = dim_label(family, n_total, i, j)?;
        Ok(Self { family, i, j, n_total, dim, infinite_image: j > 0 })
    }
}

impl fmt::Display for MonoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{{{},{}}}", self.family, self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    X(u32),
    XtildeMinus(u32),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::X(m) => write!(f, "X({m})"),
            Source::XtildeMinus(m) => write!(f, "Xtilde-({m})"),
        }
    }
}

impl Serialize for Source {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub family: Family,
    pub i: u32,
    pub j: u32,
    #[serde(serialize_with = "serialize_big")]
    pub dim: BigUint,
}

/// Multiplicity-free decomposition of a primitive cohomology representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionTable {
    pub source: Source,
    #[serde(rename = "N")]
    pub n_total: u32,
    pub summands: Vec<Summand>,
    #[serde(serialize_with = "serialize_big")]
    pub total: BigUint,
}

impl DecompositionTable {
    pub fn labels(&self) -> Vec<MonoLabel> {
        self.summands
            .iter()
            .map(|s| MonoLabel::new(s.family, self.n_total, s.i, s.j).expect("indices already checked"))
            .collect()
    }
}

fn decompose(family: Family, n_total: u32, m: u32) -> Result<DecompositionTable> {
    let n = check_odd(n_total)?;
    if m < 1 || m + 1 > n_total {
        return Err(Error::OutOfRange(format!("m = {m} for N = {n_total}")));
    }
    let top = match family {
        Family::E => n,
        Family::Etilde => n + 1,
    };
    let codim = (n_total - m) as i64;
    let mut summands = Vec::new();
    for i in 1..=top {
        let two_i = 2 * i as i64;
        if two_i < codim + 1 {
            continue;
        }
        let l = (codim - 1).min(two_i - codim - 1);
        let mut j = (codim - 1).rem_euclid(2);
        while j <= l {
            let dim = dim_label(family, n_total, i, j as u32)?;
            summands.push(Summand { family, i, j: j as u32, dim });
            j += 2;
        }
    }
    let total = summands.iter().map(|s| &s.dim).sum();
    let source = match family {
        Family::E => Source::X(m),
        Family::Etilde => Source::XtildeMinus(m),
    };
    Ok(DecompositionTable { source, n_total, summands, total })
}

/// P(X_m) for m quadrics in P^{N-1}.
pub fn decompose_x(n_total: u32, m: u32) -> Result<DecompositionTable> {
    decompose(Family::E, n_total, m)
}

/// The σ = -1 part of P(X̃_m) for the double cover in P^N.
pub fn decompose_xtilde_minus(n_total: u32, m: u32) -> Result<DecompositionTable> {
    decompose(Family::Etilde, n_total, m)
}

/// Local systems named elsewhere that some E_ij or Ẽ_ij is isomorphic to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum RsLabel {
    Mono(MonoLabel),
    /// L_i, of dimension C(N, i).
    L {
        i: u32,
        #[serde(serialize_with = "serialize_big")]
        dim: BigUint,
    },
    /// F_j = H^1-type system of the universal hyperelliptic curve, ω_j of Sp(2n).
    F {
        j: u32,
        #[serde(serialize_with = "serialize_big")]
        dim: BigUint,
    },
    Constant,
}

impl RsLabel {
    pub fn dim(&self) -> BigUint {
        match self {
            RsLabel::Mono(m) => m.dim.clone(),
            RsLabel::L { dim, .. } | RsLabel::F { dim, .. } => dim.clone(),
            RsLabel::Constant => BigUint::from(1u32),
        }
    }
}

impl fmt::Display for RsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsLabel::Mono(m) => m.fmt(f),
            RsLabel::L { i, .. } => write!(f, "L_{i}"),
            RsLabel::F { j, .. } => write!(f, "F_{j}"),
            RsLabel::Constant => f.write_str("C"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub left: MonoLabel,
    pub right: RsLabel,
}

impl Identification {
    pub fn dims_agree(&self) -> bool {
        self.left.dim == self.right.dim()
    }
}

pub fn identifications(n_total: u32) -> Result<Vec<Identification>> {
    let n = check_odd(n_total)?;
    let big_n = n_total as u64;
    let mut out = Vec::new();
    for i in 1..=n {
        let left = MonoLabel::new(Family::E, n_total, i, 0)?;
        let li = if 2 * i <= n { 2 * i } else { 2 * n - 2 * i + 1 };
        out.push(Identification {
            left: left.clone(),
            right: RsLabel::L { i: li, dim: binomial(big_n, li as i64) },
        });
        let partner = n_total.div_ceil(2) - i;
        out.push(Identification {
            left,
            right: RsLabel::Mono(MonoLabel::new(Family::Etilde, n_total, partner, 0)?),
        });
    }
    for j in 1..=n {
        out.push(Identification {
            left: MonoLabel::new(Family::Etilde, n_total, n + 1, j)?,
            right: RsLabel::F { j, dim: sp_fundamental_dim(n, j)? },
        });
    }
    out.push(Identification {
        left: MonoLabel::new(Family::Etilde, n_total, n + 1, 0)?,
        right: RsLabel::Constant,
    });
    Ok(out)
}

/// Pairwise non-isomorphic local systems: every E_ij, the Ẽ_ij with j ≥ 1, and Ẽ_{n+1,0}.
/// The remaining Ẽ_{i,0} coincide with E_{n+1-i,0}.
pub fn catalog(n_total: u32) -> Result<Vec<MonoLabel>> {
    let n = check_odd(n_total)?;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 0..i {
            out.push(MonoLabel::new(Family::E, n_total, i, j)?);
        }
    }
    for i in 1..=n + 1 {
        for j in 1..i {
            out.push(MonoLabel::new(Family::Etilde, n_total, i, j)?);
        }
    }
    out.push(MonoLabel::new(Family::Etilde, n_total, n + 1, 0)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn keys(t: &DecompositionTable) -> Vec<(u32, u32)> {
        t.summands.iter().map(|s| (s.i, s.j)).collect()
    }

    #[test]
    fn fundamental_dims() {
        assert_eq!(sp_fundamental_dim(2, 1).unwrap(), b(4));
        assert_eq!(sp_fundamental_dim(2, 2).unwrap(), b(5));
        assert_eq!(sp_fundamental_dim(0, 0).unwrap(), b(1));
        assert!(sp_fundamental_dim(1, 2).is_err());
    }

    #[test]
    fn label_dims() {
        assert_eq!(dim_label(Family::E, 5, 2, 0).unwrap(), b(5));
        assert_eq!(dim_label(Family::Etilde, 5, 3, 1).unwrap(), b(4));
        assert_eq!(dim_label(Family::E, 5, 1, 0).unwrap(), b(10));
        assert!(dim_label(Family::E, 5, 3, 0).is_err());
    }

    #[test]
    fn tables() {
        let t = decompose_x(5, 2).unwrap();
        assert_eq!((keys(&t), t.total.clone()), (vec![(2, 0)], b(5)));
        assert!(decompose_x(5, 1).unwrap().summands.is_empty());
        let t = decompose_x(7, 3).unwrap();
        assert_eq!((keys(&t), t.total.clone()), (vec![(3, 1)], b(28)));
        let t = decompose_xtilde_minus(5, 2).unwrap();
        assert_eq!((keys(&t), t.total.clone()), (vec![(2, 0), (3, 0), (3, 2)], b(16)));
        let t = decompose_xtilde_minus(5, 4).unwrap();
        assert_eq!((keys(&t), t.total.clone()), (vec![(1, 0), (2, 0), (3, 0)], b(16)));
        let t = decompose_xtilde_minus(5, 1).unwrap();
        assert_eq!((keys(&t), t.total.clone()), (vec![(3, 1)], b(4)));
        assert!(decompose_x(5, 9).is_err());
    }

    #[test]
    fn catalog_and_identifications() {
        assert_eq!(catalog(5).unwrap().len(), 7);
        assert_eq!(catalog(3).unwrap().len(), 3);
        let ids = identifications(5).unwrap();
        assert!(ids.iter().all(|p| p.dims_agree()));
        let e20 = ids.iter().find(|p| p.left.family == Family::E && p.left.i == 2 && matches!(p.right, RsLabel::L { .. }));
        assert_eq!(e20.unwrap().right.to_string(), "L_1");
    }
}
