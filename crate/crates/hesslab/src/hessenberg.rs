//! The four Hessenberg families over N_1: image orbits, dimensions, and fiber
//! point-count polynomials from the affine pavings.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, Field, Rationals};
use crate::orbits::{dominance_leq, Partition};
use crate::qcombinatorics::{cone_quadric_count, ogr_count, projective_count, PoincarePolynomial, Witt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    E,
    O,
    Eperp,
    Operp,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::E => "E",
            Flavor::O => "O",
            Flavor::Eperp => "Eperp",
            Flavor::Operp => "Operp",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDescriptor {
    pub flavor: Flavor,
    pub l: u32,
    #[serde(rename = "N")]
    pub n_total: u32,
}

fn check_range(l: u32, n_total: u32) -> Result<()> {
    if n_total.is_multiple_of(2) {
        return Err(Error::EvenN(n_total));
    }
    if l == 0 || 2 * l > n_total - 1 {
        return Err(Error::OutOfRange(format!("l = {l} for N = {n_total}")));
    }
    Ok(())
}

/// Closure of the image of the E or O family.
pub fn image_partition(flavor: Flavor, l: u32, n_total: u32) -> Result<Partition> {
    check_range(l, n_total)?;
    let (n, l) = (n_total, l);
    if 3 * l <= n + 1 {
        match flavor {
            Flavor::E => Partition::from_exponents(l - 1, 1, n + 1 - 3 * l),
            Flavor::O => Partition::from_exponents(l - 1, 0, n + 3 - 3 * l),
            _ => Err(Error::OutOfRange(format!("no image formula for {flavor}"))),
        }
    } else {
        match flavor {
            Flavor::E | Flavor::O => Partition::from_exponents(n - 2 * l, 3 * l - n, 0),
            _ => Err(Error::OutOfRange(format!("no image formula for {flavor}"))),
        }
    }
}

/// dim K/P_l for the isotropic flag V_{l-1} ⊂ V_l.
pub fn flag_dimension(l: u32, n_total: u32) -> u64 {
    let (l, n) = (l as u64, n_total as u64);
    l * (n - l) - l * (l + 1) / 2 + l - 1
}

/// Dimension of E_l (or O_l) inside the self-adjoint traceless operators, by exact rank.
///
/// Coordinates are the matrix entries x_{ab}, 0-indexed, for the form
/// <e_a, e_c> = [a + c = N - 1] with V_l = span(e_0, ..., e_{l-1}).
fn stabilized_subspace_dimension(odd_flavor: bool, l: u32, n_total: u32) -> u64 {
    let n = n_total as usize;
    let l = l as usize;
    let f = Rationals;
    let var = |a: usize, b: usize| a * n + b;
    let mut rows: Vec<Vec<(usize, <Rationals as Field>::Elem)>> = Vec::new();
    // self-adjoint: x_{N-1-c, b} = x_{N-1-b, c}
    for b in 0..n {
        for c in b + 1..n {
            rows.push(vec![(var(n - 1 - c, b), f.one()), (var(n - 1 - b, c), f.from_i64(-1))]);
        }
    }
    rows.push((0..n).map(|a| (var(a, a), f.one())).collect());
    // x V_l = 0
    for b in 0..l {
        for a in 0..n {
            rows.push(vec![(var(a, b), f.one())]);
        }
    }
    // x V_l^perp ⊂ V_{l-1} (E), or x V_{l-1}^perp ⊂ V_{l-1} (O)
    let src = if odd_flavor { n - l + 1 } else { n - l };
    for b in 0..src {
        for a in l - 1..n {
            rows.push(vec![(var(a, b), f.one())]);
        }
    }
    (n * n - sparse_rank(&f, &rows)) as u64
}

/// Dimension of the total space of the family, dim K/P_l + dim Σ.
pub fn family_dimension(flavor: Flavor, l: u32, n_total: u32) -> Result<u64> {
    check_range(l, n_total)?;
    let g1 = (n_total as u64) * (n_total as u64 + 1) / 2 - 1;
    let sigma = match flavor {
        Flavor::E => stabilized_subspace_dimension(false, l, n_total),
        Flavor::O => stabilized_subspace_dimension(true, l, n_total),
        Flavor::Eperp => g1 - stabilized_subspace_dimension(false, l, n_total),
        Flavor::Operp => g1 - stabilized_subspace_dimension(true, l, n_total),
    };
    Ok(flag_dimension(l, n_total) + sigma)
}

/// A point x of shape 3^i 2^j 1^k and the fiber over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberQuery {
    pub flavor: Flavor,
    pub m: u32,
    #[serde(rename = "N")]
    pub n_total: u32,
    pub partition: Partition,
}

impl FiberQuery {
    pub fn new(flavor: Flavor, m: u32, n_total: u32, partition: Partition) -> Result<Self> {
        if !matches!(flavor, Flavor::E | Flavor::O) {
            return Err(Error::OutOfRange(format!("fibers are defined for E and O, not {flavor}")));
        }
        if partition.total() != n_total {
            return Err(Error::Incomparable(partition.total(), n_total));
        }
        if !partition.is_order3() {
            return Err(Error::OutsideOrder3(partition.to_string()));
        }
        if n_total.is_multiple_of(2) {
            return Err(Error::EvenN(n_total));
        }
        if m == 0 {
            return Err(Error::OutOfRange("m = 0".into()));
        }
        Ok(Self { flavor, m, n_total, partition })
    }

    /// Whether x lies in the closure of the image of the family.
    pub fn in_image(&self) -> Result<bool> {
        let img = image_partition(self.flavor, self.m, self.n_total)?;
        dominance_leq(&self.partition, &img)
    }
}

/// Strip the 3-blocks: the fiber over 3^i 2^j 1^k at step m in dimension N is the
/// fiber over 2^j 1^k at step m - i in dimension N - 3i. A result with m = 0 is an
/// empty fiber; i > m is an error.
pub fn fiber_reduce(q: &FiberQuery) -> Result<FiberQuery> {
    let i = q.partition.multiplicity(3);
    if i > q.m {
        return Err(Error::EmptyFiber(format!(
            "{} has {i} blocks of size 3 but m = {}",
            q.partition, q.m
        )));
    }
    let j = q.partition.multiplicity(2);
    let n2 = q.n_total - 3 * i;
    Ok(FiberQuery {
        flavor: q.flavor,
        m: q.m - i,
        n_total: n2,
        partition: Partition::from_exponents(0, j, n2 - 2 * j)?,
    })
}

/// Witt types of the induced forms on Im x (dimension j) and on Σ = ker x / Im x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormTypes {
    pub image: Witt,
    pub sigma: Witt,
}

impl FormTypes {
    /// The classes a complex form specializes to, also realized by the split
    /// representative over F_q.
    pub fn split(n_total: u32, j: u32) -> Self {
        Self { image: Witt::split_for(j), sigma: Witt::split_for(n_total - 2 * j) }
    }
}

pub fn upsilon_poincare(n_total: u32, m: u32, j: u32) -> Result<PoincarePolynomial> {
    if 2 * j > n_total {
        return Err(Error::OutOfRange(format!("2j = {} > N = {n_total}", 2 * j)));
    }
    upsilon_poincare_with_forms(n_total, m, j, FormTypes::split(n_total, j))
}

/// Sum over the nonempty pieces k of q^{(m-k)(j-k)} |OGr(j-k, Im x)| |OGr(m-k, Σ)| |P^{m-j+k-1}|.
pub fn upsilon_poincare_with_forms(
    n_total: u32,
    m: u32,
    j: u32,
    forms: FormTypes,
) -> Result<PoincarePolynomial> {
    let (n, m, j) = (n_total as i64, m as i64, j as i64);
    let mut total = PoincarePolynomial::zero();
    for k in 0..=j.min(m) {
        if 2 * k < 2 * m + 2 * j - n || 2 * k < j || k < j + 1 - m {
            continue;
        }
        let fiber = PoincarePolynomial::monomial(((m - k) * (j - k)) as usize);
        let on_image = ogr_count((j - k) as u32, j as u32, forms.image)?;
        let on_sigma = ogr_count((m - k) as u32, (n - 2 * j) as u32, forms.sigma)?;
        let lines = projective_count(m - j + k - 1);
        total = total + &(&(&fiber * &on_image) * &on_sigma) * &lines;
    }
    Ok(total)
}

pub fn gamma_poincare(n_total: u32, m: u32, j: u32) -> Result<PoincarePolynomial> {
    if 2 * j > n_total {
        return Err(Error::OutOfRange(format!("2j = {} > N = {n_total}", 2 * j)));
    }
    gamma_poincare_with_forms(n_total, m, j, FormTypes::split(n_total, j))
}

/// Sum over pieces k of q^{(m-1-k)(j-k)} |OGr(j-k, Im x)| |OGr(m-1-k, Σ)| times the
/// isotropic lines of (V_{m-1}^perp ∩ ker x)/V_{m-1}. That form has a (j-k)-dimensional
/// radical, the part of Im x not in V_{m-1}, so the line count is a cone over a smooth
/// quadric of dimension N - 2m + 2 - 2j + 2k - 2 of the same Witt class as Σ.
pub fn gamma_poincare_with_forms(
    n_total: u32,
    m: u32,
    j: u32,
    forms: FormTypes,
) -> Result<PoincarePolynomial> {
    let (n, m, j) = (n_total as i64, m as i64, j as i64);
    let mut total = PoincarePolynomial::zero();
    for k in 0..=j.min(m - 1) {
        if 2 * k < 2 * m + 2 * j - n - 2 || 2 * k < j || k < j + 1 - m {
            continue;
        }
        let fiber = PoincarePolynomial::monomial(((m - 1 - k) * (j - k)) as usize);
        let on_image = ogr_count((j - k) as u32, j as u32, forms.image)?;
        let on_sigma = ogr_count((m - 1 - k) as u32, (n - 2 * j) as u32, forms.sigma)?;
        let nondeg = n - 2 * m + 2 - 2 * j + 2 * k;
        let lines = cone_quadric_count((j - k) as u32, nondeg as u32, forms.sigma)?;
        total = total + &(&(&fiber * &on_image) * &on_sigma) * &lines;
    }
    Ok(total)
}

/// Point-count polynomial of the fiber over x of the given shape.
pub fn fiber_poincare(flavor: Flavor, m: u32, n_total: u32, partition: &Partition) -> Result<PoincarePolynomial> {
    let q = FiberQuery::new(flavor, m, n_total, partition.clone())?;
    let r = fiber_reduce(&q)?;
    let forms = FormTypes::split(r.n_total, r.partition.multiplicity(2));
    fiber_poincare_reduced(&r, forms)
}

/// Like [`fiber_poincare`] with explicit form types on the reduced data.
pub fn fiber_poincare_with_forms(
    flavor: Flavor,
    m: u32,
    n_total: u32,
    partition: &Partition,
    forms: FormTypes,
) -> Result<PoincarePolynomial> {
    let q = FiberQuery::new(flavor, m, n_total, partition.clone())?;
    fiber_poincare_reduced(&fiber_reduce(&q)?, forms)
}

fn fiber_poincare_reduced(r: &FiberQuery, forms: FormTypes) -> Result<PoincarePolynomial> {
    if r.m == 0 {
        return Ok(PoincarePolynomial::zero());
    }
    let j = r.partition.multiplicity(2);
    match r.flavor {
        Flavor::E => upsilon_poincare_with_forms(r.n_total, r.m, j, forms),
        _ => gamma_poincare_with_forms(r.n_total, r.m, j, forms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn poly(c: &[u64]) -> PoincarePolynomial {
        PoincarePolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn images() {
        assert_eq!(image_partition(Flavor::E, 2, 7).unwrap(), p(&[3, 2, 1, 1]));
        assert_eq!(image_partition(Flavor::O, 2, 7).unwrap(), p(&[3, 1, 1, 1, 1]));
        assert_eq!(image_partition(Flavor::E, 1, 9).unwrap(), p(&[2, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(image_partition(Flavor::E, 3, 7).unwrap(), p(&[3, 2, 2]));
        assert!(image_partition(Flavor::E, 4, 7).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(family_dimension(Flavor::E, 2, 7).unwrap(), 14);
        assert_eq!(family_dimension(Flavor::O, 2, 7).unwrap(), 13);
        for n in 1..6 {
            assert_eq!(family_dimension(Flavor::E, 1, 2 * n + 1).unwrap(), 2 * n as u64);
        }
    }

    #[test]
    fn reduction() {
        let q = FiberQuery::new(Flavor::E, 3, 13, p(&[3, 3, 2, 2, 1, 1, 1])).unwrap();
        let r = fiber_reduce(&q).unwrap();
        assert_eq!((r.m, r.n_total, r.partition.clone()), (1, 7, p(&[2, 2, 1, 1, 1])));
        assert_eq!(fiber_reduce(&r).unwrap(), r);
        let q = FiberQuery::new(Flavor::O, 1, 7, p(&[3, 3, 1])).unwrap();
        assert!(matches!(fiber_reduce(&q), Err(Error::EmptyFiber(_))));
        assert!(fiber_poincare(Flavor::O, 2, 7, &p(&[3, 3, 1])).unwrap().is_zero());
    }

    #[test]
    fn pieces() {
        assert_eq!(upsilon_poincare(7, 2, 3).unwrap(), poly(&[1, 1]));
        assert!(upsilon_poincare(7, 1, 3).unwrap().is_zero());
        assert_eq!(gamma_poincare(5, 2, 1).unwrap(), poly(&[1, 1]));
        assert!(gamma_poincare(5, 1, 2).unwrap().is_zero());
        assert_eq!(fiber_poincare(Flavor::E, 1, 9, &p(&[2, 1, 1, 1, 1, 1, 1, 1])).unwrap(), poly(&[1]));
    }
}
