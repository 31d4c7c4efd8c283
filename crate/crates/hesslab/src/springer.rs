//! The matching between the local systems E_ij, Ẽ_ij on the regular semisimple locus
//! and pairs (orbit, local system) in N_1^3: proven cases, the two conjectural case
//! formulas, and a consistency suite over them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monodromy::{catalog, Family};
use crate::orbits::{has_gaps, local_systems, orbit_dimension, partitions_of, Partition, SystemKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proven,
    Conjectural,
    Unknown,
}

/// Index of a monodromy local system, without its dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceKey {
    pub family: Family,
    pub i: u32,
    pub j: u32,
}

impl SourceKey {
    pub fn e(i: u32, j: u32) -> Self {
        Self { family: Family::E, i, j }
    }

    pub fn etilde(i: u32, j: u32) -> Self {
        Self { family: Family::Etilde, i, j }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourierImage {
    pub source: SourceKey,
    /// None when only existence is known.
    pub orbit: Option<Partition>,
    pub system: Option<SystemKind>,
    pub status: Status,
}

impl FourierImage {
    fn known(source: SourceKey, orbit: Partition, system: SystemKind, status: Status) -> Self {
        Self { source, orbit: Some(orbit), system: Some(system), status }
    }

    pub fn pair(&self) -> Option<(Partition, SystemKind)> {
        Some((self.orbit.clone()?, self.system.clone()?))
    }
}

/// 3^a 2^b 1^c, with every exponent checked to be a nonnegative integer.
fn shape(a: i64, b: i64, c: i64) -> Result<Partition> {
    if a < 0 || b < 0 || c < 0 {
        return Err(Error::InvalidPartition(format!("3^{a} 2^{b} 1^{c}")));
    }
    Partition::from_exponents(a as u32, b as u32, c as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    A,
    B,
    C,
}

/// The case conditions that hold for (n, i, j).
pub fn cases(n: u32, i: u32, j: u32) -> Vec<Case> {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    let mut out = Vec::new();
    if i + j > n {
        out.push(Case::A);
    }
    if i + j <= n && 2 * i - j > n {
        out.push(Case::B);
    }
    if i + j <= n && 2 * i - j <= n {
        out.push(Case::C);
    }
    out
}

/// Orbit of the even-index conjecture in a given case.
pub fn even_formula(case: Case, n: u32, i: u32, j: u32) -> Result<Partition> {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    match case {
        Case::A => shape(2 * (n - i) + 1, 2 * (i + j - n) - 1, 2 * i - 4 * j),
        Case::B => shape(2 * j, 2 * (n - i - j) + 1, 4 * i - 2 * n - 2 * j - 1),
        Case::C => shape(2 * j, 2 * i - 4 * j, 2 * n - 4 * i + 2 * j + 1),
    }
}

/// Orbit and local system of the odd-index conjecture in a given case.
pub fn odd_formula(case: Case, n: u32, i: u32, j: u32) -> Result<(Partition, SystemKind)> {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    match case {
        Case::A => Ok((shape(2 * (n - i) + 1, 2 * (i + j - n - 1), 2 * i - 4 * j + 2)?, SystemKind::E1)),
        Case::B => Ok((shape(2 * j - 1, 2 * (n - i - j + 1), 4 * i - 2 * j - 2 * n)?, SystemKind::E2)),
        Case::C => Ok((shape(2 * j - 1, 2 * (i - 2 * j + 1), 2 * n - 4 * i + 2 * j)?, SystemKind::E3)),
    }
}

fn single_case(n: u32, i: u32, j: u32) -> Result<Case> {
    cases(n, i, j)
        .first()
        .copied()
        .ok_or_else(|| Error::OutOfRange(format!("no case applies to n = {n}, i = {i}, j = {j}")))
}

/// Image of E_{i,2j}^{2n+1}; j is the half-index.
pub fn fourier_image_even(n: u32, i: u32, j: u32) -> Result<FourierImage> {
    if n == 0 || i < 1 || i > n || 2 * j + 1 > i {
        return Err(Error::OutOfRange(format!("E_{{{i},{}}} with n = {n}", 2 * j)));
    }
    let orbit = even_formula(single_case(n, i, j)?, n, i, j)?;
    let status = if j == 0 || (i, j) == (n, 1) { Status::Proven } else { Status::Conjectural };
    Ok(FourierImage::known(SourceKey::e(i, 2 * j), orbit, SystemKind::Trivial, status))
}

/// Image of E_{i,2j-1}^{2n+1}.
pub fn fourier_image_odd(n: u32, i: u32, j: u32) -> Result<FourierImage> {
    if n == 0 || i < 1 || i > n || j < 1 || 2 * j > i {
        return Err(Error::OutOfRange(format!("E_{{{i},{}}} with n = {n}", 2 * j as i64 - 1)));
    }
    let (orbit, system) = odd_formula(single_case(n, i, j)?, n, i, j)?;
    let proven = (i, j) == (n, 1) || (n >= 4 && ((i, j) == (n, 2) || (i, j) == (n - 1, 1)));
    let status = if proven { Status::Proven } else { Status::Conjectural };
    Ok(FourierImage::known(SourceKey::e(i, 2 * j - 1), orbit, system, status))
}

/// Conjectural (or proven) image of any E_{i,j}.
pub fn fourier_image(n: u32, i: u32, j: u32) -> Result<FourierImage> {
    if j.is_multiple_of(2) {
        fourier_image_even(n, i, j / 2)
    } else {
        fourier_image_odd(n, i, j.div_ceil(2))
    }
}

/// Orbit of the E_{i,0} image as stated for the minimal cases, independent of the case formulas.
fn e_i0_orbit(n: u32, i: u32) -> Result<Partition> {
    if 2 * i <= n {
        Partition::from_exponents(0, 2 * i, 2 * n - 4 * i + 1)
    } else {
        Partition::from_exponents(0, 2 * n - 2 * i + 1, 4 * i - 2 * n - 1)
    }
}

/// Every correspondence established outright.
pub fn proven_matchings(n: u32) -> Result<Vec<FourierImage>> {
    if n == 0 {
        return Err(Error::OutOfRange("n = 0".into()));
    }
    let nn = 2 * n + 1;
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(FourierImage::known(SourceKey::e(i, 0), e_i0_orbit(n, i)?, SystemKind::Trivial, Status::Proven));
    }
    if n >= 3 {
        out.push(FourierImage::known(
            SourceKey::e(n, 2),
            Partition::from_exponents(1, 1, 2 * n - 4)?,
            SystemKind::Trivial,
            Status::Proven,
        ));
    }
    if n >= 2 {
        out.push(FourierImage::known(
            SourceKey::e(n, 1),
            Partition::from_exponents(1, 0, 2 * n - 2)?,
            SystemKind::E1,
            Status::Proven,
        ));
    }
    if n >= 4 {
        let o = Partition::from_exponents(1, 2, 2 * n - 6)?;
        out.push(FourierImage::known(SourceKey::e(n, 3), o.clone(), SystemKind::E1, Status::Proven));
        out.push(FourierImage::known(SourceKey::e(n - 1, 1), o, SystemKind::E2, Status::Proven));
    }
    for j in 1..=n {
        out.push(FourierImage::known(
            SourceKey::etilde(n + 1, j),
            Partition::from_exponents(0, j, nn - 2 * j)?,
            SystemKind::OrbitNontrivial,
            Status::Proven,
        ));
    }
    out.push(FourierImage::known(
        SourceKey::etilde(n + 1, 0),
        Partition::from_exponents(0, 0, nn)?,
        SystemKind::Trivial,
        Status::Proven,
    ));
    // Ẽ_{i,0} ≅ E_{n+1-i,0}
    for i in 1..=n {
        out.push(FourierImage::known(
            SourceKey::etilde(i, 0),
            e_i0_orbit(n, n + 1 - i)?,
            SystemKind::Trivial,
            Status::Proven,
        ));
    }
    Ok(out)
}

/// The E3 system on 3·2²·1^{2n-6} is matched with some E_{?,1} whose first index is
/// not pinned down; only the candidate the odd conjecture singles out is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnresolvedMatching {
    pub orbit: Partition,
    pub system: SystemKind,
    pub candidate: Option<SourceKey>,
    pub consistent: bool,
}

/// Needs n ≥ 4.
pub fn unresolved_e3(n: u32) -> Result<UnresolvedMatching> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("the E3 matching needs n ≥ 4, got {n}")));
    }
    let orbit = Partition::from_exponents(1, 2, 2 * n - 6)?;
    let system = SystemKind::E3;
    let hits: Vec<u32> = (2..=n)
        .filter(|&i| {
            fourier_image_odd(n, i, 1)
                .ok()
                .and_then(|f| f.pair())
                .is_some_and(|p| p == (orbit.clone(), system.clone()))
        })
        .collect();
    let candidate = (hits.len() == 1).then(|| SourceKey::e(hits[0], 1));
    // the candidate has to be an E_{i,1} with i < n-1: E_{n-1,1} is already matched
    let consistent = matches!(candidate, Some(k) if k.i < n - 1);
    Ok(UnresolvedMatching { orbit, system, candidate, consistent })
}

/// All images: E_ij by the conjectures, Ẽ_ij where proven, the rest Unknown.
pub fn full_map(n: u32) -> Result<Vec<FourierImage>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 0..i {
            out.push(fourier_image(n, i, j)?);
        }
    }
    let proven = proven_matchings(n)?;
    for label in catalog(2 * n + 1)? {
        if label.family != Family::Etilde {
            continue;
        }
        let key = SourceKey::etilde(label.i, label.j);
        match proven.iter().find(|f| f.source == key) {
            Some(f) => out.push(f.clone()),
            None => out.push(FourierImage { source: key, orbit: None, system: None, status: Status::Unknown }),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub lhs: u64,
    pub rhs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, ok: bool, lhs: u64, rhs: u64, detail: Option<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name, status, lhs, rhs, detail }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Names of the core checks, in report order.
pub const CORE_CHECKS: [&str; 7] = [
    "support",
    "parity",
    "injective",
    "proven_agreement",
    "even_exhaustion",
    "odd_exhaustion",
    "case_trichotomy",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub n: u32,
    pub checks: Vec<Check>,
    pub map: Vec<FourierImage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unresolved: Option<UnresolvedMatching>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn core_passed(&self) -> bool {
        self.checks.iter().filter(|c| CORE_CHECKS.contains(&c.name)).all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn dim_parity(p: &Partition) -> u64 {
    orbit_dimension(p).expect("odd N") % 2
}

pub fn consistency_suite(n: u32) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::OutOfRange("n = 0".into()));
    }
    let nn = 2 * n + 1;
    let mut checks = Vec::new();

    // Evaluate every formula; index ranges cannot fail, bad exponents are reported.
    let mut even_imgs: Vec<FourierImage> = Vec::new();
    let mut odd_imgs: Vec<FourierImage> = Vec::new();
    let mut bad_support = Vec::new();
    for i in 1..=n {
        for j in 0..i {
            match fourier_image(n, i, j) {
                Ok(f) if j % 2 == 0 => even_imgs.push(f),
                Ok(f) => odd_imgs.push(f),
                Err(e) => bad_support.push(format!("E_{{{i},{j}}}: {e}")),
            }
        }
    }
    let all_e: Vec<&FourierImage> = even_imgs.iter().chain(odd_imgs.iter()).collect();

    // (1) support in N_1^3, exponents valid, sizes sum to 2n+1, system exists on the orbit
    for f in &all_e {
        let (o, s) = f.pair().expect("E images are explicit");
        let systems_ok = local_systems(&o).map(|ls| ls.iter().any(|l| l.kind == s)).unwrap_or(false);
        if !o.is_order3() || o.total() != nn || !systems_ok {
            bad_support.push(format!("{:?} -> {o} {s}", f.source));
        }
    }
    let total = (even_imgs.len() + odd_imgs.len()) as u64;
    checks.push(Check::new(
        "support",
        bad_support.is_empty(),
        total - bad_support.len().min(total as usize) as u64,
        total,
        (!bad_support.is_empty()).then(|| bad_support.join("; ")),
    ));

    // (2) parity
    let mut bad_parity = Vec::new();
    for f in &even_imgs {
        if dim_parity(f.orbit.as_ref().unwrap()) != 0 {
            bad_parity.push(format!("{:?}", f.source));
        }
    }
    for f in &odd_imgs {
        if dim_parity(f.orbit.as_ref().unwrap()) != 1 {
            bad_parity.push(format!("{:?}", f.source));
        }
    }
    checks.push(Check::new(
        "parity",
        bad_parity.is_empty(),
        total - bad_parity.len() as u64,
        total,
        (!bad_parity.is_empty()).then(|| bad_parity.join("; ")),
    ));

    // (3) injectivity on all E_ij
    let distinct: BTreeSet<(Partition, SystemKind)> = all_e.iter().filter_map(|f| f.pair()).collect();
    checks.push(Check::new("injective", distinct.len() as u64 == total, distinct.len() as u64, total, None));

    // (4) formulas reproduce the proven E cases
    let proven = proven_matchings(n)?;
    let proven_e: Vec<&FourierImage> = proven.iter().filter(|f| f.source.family == Family::E).collect();
    let mut disagree = Vec::new();
    for p in &proven_e {
        let got = fourier_image(n, p.source.i, p.source.j).ok().and_then(|f| f.pair());
        if got != p.pair() {
            disagree.push(format!("{:?}", p.source));
        }
    }
    checks.push(Check::new(
        "proven_agreement",
        disagree.is_empty(),
        (proven_e.len() - disagree.len()) as u64,
        proven_e.len() as u64,
        (!disagree.is_empty()).then(|| disagree.join("; ")),
    ));

    let order3 = partitions_of(nn, Some(3));

    // (5) even images biject onto nonzero even-dimensional gap-free orbits
    let target: BTreeSet<Partition> = order3
        .iter()
        .filter(|p| p.max_part() > 1 && dim_parity(p) == 0 && !has_gaps(p))
        .cloned()
        .collect();
    let even_set: BTreeSet<Partition> = even_imgs.iter().filter_map(|f| f.orbit.clone()).collect();
    checks.push(Check::new(
        "even_exhaustion",
        even_set.len() == even_imgs.len() && even_set == target,
        even_imgs.len() as u64,
        target.len() as u64,
        None,
    ));

    // (6) odd count against nontrivial systems on odd-dimensional orbits
    let odd_targets: BTreeSet<(Partition, SystemKind)> = order3
        .iter()
        .filter(|p| dim_parity(p) == 1)
        .flat_map(|p| local_systems(p).expect("order 3"))
        .filter(|l| l.kind != SystemKind::Trivial)
        .map(|l| (l.orbit, l.kind))
        .collect();
    checks.push(Check::new(
        "odd_exhaustion",
        odd_imgs.len() == odd_targets.len(),
        odd_imgs.len() as u64,
        odd_targets.len() as u64,
        None,
    ));

    // (7) case conditions cover every index; overlapping cases must agree
    let mut uncovered = Vec::new();
    let mut overlaps = 0u64;
    let mut indices = 0u64;
    for i in 1..=n {
        for j in 0..=n {
            let even_ok = 2 * j < i;
            let odd_ok = j >= 1 && 2 * j <= i;
            if !even_ok && !odd_ok {
                continue;
            }
            let cs = cases(n, i, j);
            indices += 1;
            if cs.is_empty() {
                uncovered.push(format!("({i},{j})"));
                continue;
            }
            if cs.len() > 1 {
                overlaps += 1;
                if even_ok {
                    let outs: BTreeSet<Option<Partition>> =
                        cs.iter().map(|&c| even_formula(c, n, i, j).ok()).collect();
                    if outs.len() > 1 {
                        uncovered.push(format!("even ({i},{j}) disagrees"));
                    }
                }
                if odd_ok {
                    let outs: BTreeSet<Option<(Partition, SystemKind)>> =
                        cs.iter().map(|&c| odd_formula(c, n, i, j).ok()).collect();
                    if outs.len() > 1 {
                        uncovered.push(format!("odd ({i},{j}) disagrees"));
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        "case_trichotomy",
        uncovered.is_empty(),
        indices - uncovered.len() as u64,
        indices,
        (overlaps > 0 || !uncovered.is_empty()).then(|| format!("{overlaps} overlapping indices")),
    ));

    // Extra: the odd images are exactly the nontrivial systems on odd orbits.
    let odd_set: BTreeSet<(Partition, SystemKind)> = odd_imgs.iter().filter_map(|f| f.pair()).collect();
    checks.push(Check::new(
        "odd_coincidence",
        odd_set == odd_targets,
        odd_set.intersection(&odd_targets).count() as u64,
        odd_targets.len() as u64,
        None,
    ));

    // Extra: the curve lemma places E_{i,1}, i ≤ n-1, on 3·2^{2j}·1^{2n-4j-2} with an
    // E2 or E3 system and 1 ≤ j ≤ (n-1)/2.
    let mut curve_bad = Vec::new();
    if n >= 2 {
        for i in 1..n {
            if i < 2 {
                continue;
            }
            let Some((o, s)) = fourier_image_odd(n, i, 1).ok().and_then(|f| f.pair()) else {
                curve_bad.push(format!("E_{{{i},1}}"));
                continue;
            };
            let twos = o.multiplicity(2);
            let ok = o.multiplicity(3) == 1
                && twos % 2 == 0
                && twos >= 2
                && twos / 2 <= (n - 1) / 2
                && matches!(s, SystemKind::E2 | SystemKind::E3);
            if !ok {
                curve_bad.push(format!("E_{{{i},1}} -> {o} {s}"));
            }
        }
    }
    let curve_total = n.saturating_sub(2) as u64;
    checks.push(Check::new(
        "curve_lemma_compatibility",
        curve_bad.is_empty(),
        curve_total - curve_bad.len() as u64,
        curve_total,
        (!curve_bad.is_empty()).then(|| curve_bad.join("; ")),
    ));

    let unresolved = if n >= 4 { Some(unresolved_e3(n)?) } else { None };
    if let Some(u) = &unresolved {
        checks.push(Check::new("e3_candidate", u.consistent, u.consistent as u64, 1, None));
    }

    Ok(SuiteReport { n, checks, map: full_map(n)?, unresolved })
}

/// Counts of images by status, for summaries.
pub fn status_counts(map: &[FourierImage]) -> BTreeMap<Status, usize> {
    let mut out = BTreeMap::new();
    for f in map {
        *out.entry(f.status).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn proven_cases() {
        for n in 3..8 {
            let f = fourier_image_even(n, n, 1).unwrap();
            assert_eq!(f.orbit.unwrap(), Partition::from_exponents(1, 1, 2 * n - 4).unwrap());
            assert_eq!(f.status, Status::Proven);
            let f = fourier_image_odd(n, n, 1).unwrap();
            assert_eq!(f.pair().unwrap(), (Partition::from_exponents(1, 0, 2 * n - 2).unwrap(), SystemKind::E1));
        }
        assert_eq!(fourier_image_even(4, 4, 0).unwrap().orbit.unwrap(), p(&[2, 1, 1, 1, 1, 1, 1, 1]));
        let f = fourier_image_odd(5, 4, 1).unwrap();
        assert_eq!(f.pair().unwrap(), (p(&[3, 2, 2, 1, 1, 1, 1]), SystemKind::E2));
        assert_eq!(f.status, Status::Proven);
    }

    #[test]
    fn small_suites() {
        let r = consistency_suite(2).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let odd = r.check("odd_exhaustion").unwrap();
        assert_eq!((odd.lhs, odd.rhs), (1, 1));
        let r = consistency_suite(4).unwrap();
        let odd = r.check("odd_exhaustion").unwrap();
        assert_eq!((odd.lhs, odd.rhs), (4, 4));
        assert_eq!(r.unresolved.unwrap().candidate, Some(SourceKey::e(2, 1)));
    }
}
