//! Partitions indexing nilpotent K-orbits in N_1 for (SL(N), SO(N)), N odd.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        if parts.is_empty() {
            return Err(Error::InvalidPartition("empty partition".into()));
        }
        Ok(Self { parts })
    }

    /// Sorts the given parts; zeros are dropped.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// 3^a 2^b 1^c.
    pub fn from_exponents(threes: u32, twos: u32, ones: u32) -> Result<Self> {
        let mut parts = vec![3; threes as usize];
        parts.extend(std::iter::repeat_n(2, twos as usize));
        parts.extend(std::iter::repeat_n(1, ones as usize));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn max_part(&self) -> u32 {
        self.parts[0]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, size: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == size).count() as u32
    }

    /// Distinct part sizes, ascending.
    pub fn distinct_sizes(&self) -> Vec<u32> {
        self.parts.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn is_order3(&self) -> bool {
        self.max_part() <= 3
    }

    fn prefix_sums(&self, len: usize) -> Vec<u64> {
        let mut acc = 0u64;
        (0..len)
            .map(|i| {
                acc += *self.parts.get(i).unwrap_or(&0) as u64;
                acc
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("+"))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

/// All partitions of `n`, parts bounded by `max_part`, in reverse-lexicographic order.
pub fn partitions_of(n: u32, max_part: Option<u32>) -> Vec<Partition> {
    fn rec(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, max_part.unwrap_or(n).max(1), &mut Vec::new(), &mut out);
    out
}

pub fn transpose(p: &Partition) -> Partition {
    let parts = (0..p.max_part())
        .map(|i| p.parts.iter().filter(|&&x| x > i).count() as u32)
        .collect();
    Partition { parts }
}

fn require_odd(n: u32) -> Result<()> {
    if n.is_multiple_of(2) {
        Err(Error::EvenN(n))
    } else {
        Ok(())
    }
}

fn require_order3(p: &Partition) -> Result<()> {
    if p.is_order3() {
        Ok(())
    } else {
        Err(Error::OutsideOrder3(p.to_string()))
    }
}

/// Complex dimension of the K-orbit: half of N^2 - sum of squared column lengths.
pub fn orbit_dimension(p: &Partition) -> Result<u64> {
    let n = p.total();
    require_odd(n)?;
    let cols: u64 = transpose(p).parts.iter().map(|&c| (c as u64).pow(2)).sum();
    Ok(((n as u64).pow(2) - cols) / 2)
}

/// Closure order: prefix sums of `p` bounded by those of `q`.
pub fn dominance_leq(p: &Partition, q: &Partition) -> Result<bool> {
    if p.total() != q.total() {
        return Err(Error::Incomparable(p.total(), q.total()));
    }
    let len = p.len().max(q.len());
    Ok(p.prefix_sums(len).iter().zip(q.prefix_sums(len)).all(|(a, b)| *a <= b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(v: u64) -> Self {
        if v.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Odd iff the number of 3s is odd and the number of 2s is even.
pub fn orbit_parity(p: &Partition) -> Result<Parity> {
    require_order3(p)?;
    let odd = p.multiplicity(3) % 2 == 1 && p.multiplicity(2).is_multiple_of(2);
    Ok(if odd { Parity::Odd } else { Parity::Even })
}

/// True iff some integer in [1, max part] is not a part.
pub fn has_gaps(p: &Partition) -> bool {
    let sizes = p.distinct_sizes();
    sizes.len() as u32 != p.max_part()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDescriptor {
    pub partition: Partition,
    pub dim: u64,
    pub parity: Parity,
    pub order3: bool,
    pub gaps: bool,
}

pub fn describe(p: &Partition) -> Result<OrbitDescriptor> {
    let dim = orbit_dimension(p)?;
    Ok(OrbitDescriptor {
        partition: p.clone(),
        dim,
        parity: Parity::of(dim),
        order3: p.is_order3(),
        gaps: has_gaps(p),
    })
}

/// Irreducible K-equivariant local systems on an orbit, as characters of A_K(x).
///
/// A_K(x) is the kernel of the product of the sign characters eps_s over odd
/// part sizes s, inside (Z/2)^{distinct sizes}. A character is therefore a set T
/// of part sizes (the product of eps_s over T), modulo T ~ T xor {odd sizes}.
/// The named cases follow the character table on {1, g1, g2, g1g2} for
/// 3^{odd} 2^{even} 1^r, where g1 = (eps_1, eps_3) and g2 = eps_2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    Trivial,
    E1,
    E2,
    E3,
    OrbitNontrivial,
    /// A character the labeling above does not name, keyed by its canonical set T.
    Character(Vec<u32>),
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemKind::Trivial => f.write_str("trivial"),
            SystemKind::E1 => f.write_str("E1"),
            SystemKind::E2 => f.write_str("E2"),
            SystemKind::E3 => f.write_str("E3"),
            SystemKind::OrbitNontrivial => f.write_str("nontrivial"),
            SystemKind::Character(t) => {
                let s: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                write!(f, "chi[{}]", s.join(","))
            }
        }
    }
}

impl Serialize for SystemKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalSystemLabel {
    pub kind: SystemKind,
    pub orbit: Partition,
}

/// Canonical representative of the character class of `t` (a subset of the sizes of `p`):
/// the member of {t, t xor odd sizes} that omits the smallest odd size.
fn canonical_character(p: &Partition, t: &BTreeSet<u32>) -> BTreeSet<u32> {
    let odd: BTreeSet<u32> = p.distinct_sizes().into_iter().filter(|s| s % 2 == 1).collect();
    let s0 = *odd.iter().next().expect("odd N has an odd part");
    if t.contains(&s0) {
        t.symmetric_difference(&odd).copied().collect()
    } else {
        t.clone()
    }
}

fn name_character(p: &Partition, t: &BTreeSet<u32>) -> SystemKind {
    if t.is_empty() {
        return SystemKind::Trivial;
    }
    let (k, l, r) = (p.multiplicity(3), p.multiplicity(2), p.multiplicity(1));
    let set = |v: &[u32]| v.iter().copied().collect::<BTreeSet<u32>>();
    if k == 0 && l >= 1 && r >= 1 && *t == set(&[2]) {
        return SystemKind::OrbitNontrivial;
    }
    if k % 2 == 1 && l % 2 == 0 {
        // here the odd sizes are {1, 3} or {3}; t is canonical, so it omits the smallest one
        if r >= 1 {
            if *t == set(&[3]) {
                return SystemKind::E1;
            }
            if *t == set(&[2, 3]) {
                return SystemKind::E2;
            }
            if *t == set(&[2]) {
                return SystemKind::E3;
            }
        } else if *t == set(&[2]) {
            return SystemKind::E3;
        }
    }
    SystemKind::Character(t.iter().copied().collect())
}

pub fn local_systems(p: &Partition) -> Result<Vec<LocalSystemLabel>> {
    require_order3(p)?;
    require_odd(p.total())?;
    let sizes = p.distinct_sizes();
    let d = sizes.len();
    let mut kinds: BTreeSet<SystemKind> = BTreeSet::new();
    for mask in 0u32..(1 << d) {
        let t: BTreeSet<u32> =
            (0..d).filter(|b| mask >> b & 1 == 1).map(|b| sizes[b]).collect();
        let c = canonical_character(p, &t);
        kinds.insert(name_character(p, &c));
    }
    debug_assert_eq!(kinds.len(), 1 << (d - 1));
    Ok(kinds
        .into_iter()
        .map(|kind| LocalSystemLabel { kind, orbit: p.clone() })
        .collect())
}
