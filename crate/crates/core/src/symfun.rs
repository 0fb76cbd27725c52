//! Jack symmetric functions built from scratch, as an oracle for the growth
//! kernel.
//!
//! Degree-d symmetric functions are held as coordinate vectors in the
//! monomial basis {m_λ : λ ⊢ d}. The power-sum to monomial change of basis is
//! obtained by multiplying out p_ρ = Π_i (x_1^{ρ_i} + … + x_N^{ρ_i}) in N
//! explicit variables, with N at least the largest degree handled, so no
//! partition is lost to the variable count. The Jack inner product is
//! diagonal on power sums, ⟨p_ρ, p_σ⟩ = δ_{ρσ} z_ρ α^{ℓ(ρ)}.
//!
//! P_ν comes out of Gram–Schmidt over the monomials swept in increasing
//! lexicographic order (a linear extension of dominance), with the m_ν
//! coefficient of P_ν fixed to 1.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::partition::{enumerate_partitions, BoxRef, Partition};
use crate::rational::{int, AlphaParam, Rational};

/// Largest |μ| accepted by the Pieri oracle.
pub const ORACLE_MAX_SIZE: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    Monomial,
    Jack,
}

/// A symmetric function of fixed degree in a named basis; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymFunExpansion {
    pub degree: usize,
    pub coefficients: BTreeMap<Partition, Rational>,
    pub basis_tag: BasisTag,
}

impl SymFunExpansion {
    fn from_dense(
        degree: usize,
        keys: &[Partition],
        values: &[Rational],
        basis_tag: BasisTag,
    ) -> Self {
        let coefficients = keys
            .iter()
            .zip(values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        SymFunExpansion {
            degree,
            coefficients,
            basis_tag,
        }
    }

    pub fn coefficient(&self, key: &Partition) -> Rational {
        self.coefficients
            .get(key)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

type Poly = HashMap<Vec<u8>, BigInt>;

fn power_sum_poly(k: usize, vars: usize) -> Poly {
    (0..vars)
        .map(|i| {
            let mut e = vec![0u8; vars];
            e[i] = k as u8;
            (e, BigInt::one())
        })
        .collect()
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = HashMap::with_capacity(a.len() * 2);
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out
}

/// Coefficient of m_λ in p_ρ for all ρ, λ ⊢ degree: rows indexed by ρ.
fn power_to_monomial(parts: &[Partition], degree: usize, vars: usize) -> Vec<Vec<Rational>> {
    parts
        .iter()
        .map(|rho| {
            let mut constant = vec![0u8; vars];
            constant.iter_mut().for_each(|e| *e = 0);
            let mut poly: Poly = HashMap::from([(constant, BigInt::one())]);
            for &k in rho.parts() {
                poly = poly_mul(&poly, &power_sum_poly(k, vars));
            }
            parts
                .iter()
                .map(|lam| {
                    let mut e = vec![0u8; vars];
                    for (slot, &v) in e.iter_mut().zip(lam.parts()) {
                        *slot = v as u8;
                    }
                    Rational::from_integer(poly.get(&e).cloned().unwrap_or_default())
                })
                .collect()
        })
        .inspect(|_| debug_assert!(degree <= vars))
        .collect()
}

fn invert(matrix: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("power-sum transition matrix is invertible");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// z_ρ·α^{ℓ(ρ)}, the squared norm of p_ρ.
fn power_norm(rho: &Partition, alpha: &Rational) -> Rational {
    let mut z = BigInt::one();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &k in rho.parts() {
        *counts.entry(k).or_default() += 1;
    }
    for (k, m) in counts {
        z *= BigInt::from(k).pow(m as u32);
        z *= (1..=m).map(BigInt::from).product::<BigInt>();
    }
    Rational::from_integer(z) * crate::rational::pow(alpha, rho.len() as u32)
}

/// Dominance order μ ≤ ν (same size).
pub fn dominated_by(mu: &Partition, nu: &Partition) -> bool {
    let (mut a, mut b) = (0usize, 0usize);
    let len = mu.len().max(nu.len());
    for i in 1..=len {
        a += mu.row(i);
        b += nu.row(i);
        if a > b {
            return false;
        }
    }
    true
}

/// Jack polynomials P_ν for all ν ⊢ degree at a fixed α.
#[derive(Clone, Debug)]
pub struct JackBasis {
    pub degree: usize,
    alpha: AlphaParam,
    /// Increasing lexicographic order.
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    p_to_m: Vec<Vec<Rational>>,
    m_to_p: Vec<Vec<Rational>>,
    gram: Vec<Vec<Rational>>,
    jack: Vec<Vec<Rational>>,
}

impl JackBasis {
    pub fn new(degree: usize, vars: usize, alpha: &AlphaParam) -> Result<Self, Error> {
        if vars < degree {
            return Err(Error::Domain(format!(
                "{vars} variables cannot represent every partition of {degree}"
            )));
        }
        let mut parts: Vec<Partition> = enumerate_partitions(degree).collect();
        parts.reverse();
        let index = parts
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let p_to_m = power_to_monomial(&parts, degree, vars.max(1));
        let m_to_p = invert(&p_to_m);
        let norms: Vec<Rational> = parts.iter().map(|r| power_norm(r, alpha.value())).collect();
        let d = parts.len();
        let gram: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|r| &m_to_p[i][r] * &m_to_p[j][r] * &norms[r])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let mut basis = JackBasis {
            degree,
            alpha: alpha.clone(),
            parts,
            index,
            p_to_m,
            m_to_p,
            gram,
            jack: Vec::new(),
        };
        basis.orthogonalize();
        Ok(basis)
    }

    fn orthogonalize(&mut self) {
        let d = self.parts.len();
        let mut done: Vec<Vec<Rational>> = Vec::with_capacity(d);
        let mut norms: Vec<Rational> = Vec::with_capacity(d);
        for i in 0..d {
            let mut v: Vec<Rational> = (0..d)
                .map(|j| if i == j { int(1) } else { int(0) })
                .collect();
            let unit = v.clone();
            for (prev, norm) in done.iter().zip(&norms) {
                let coef = self.inner(&unit, prev) / norm;
                if !coef.is_zero() {
                    for (x, y) in v.iter_mut().zip(prev) {
                        *x -= &coef * y;
                    }
                }
            }
            norms.push(self.inner(&v, &v));
            done.push(v);
        }
        self.jack = done;
    }

    /// Jack inner product of two monomial-coordinate vectors.
    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += ui * &self.gram[i][j] * vj;
                }
            }
        }
        acc
    }

    pub fn alpha(&self) -> &AlphaParam {
        &self.alpha
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    fn jack_vector(&self, nu: &Partition) -> &[Rational] {
        &self.jack[self.index[nu]]
    }

    /// P_ν in the monomial basis.
    pub fn jack_polynomial(&self, nu: &Partition) -> SymFunExpansion {
        SymFunExpansion::from_dense(
            self.degree,
            &self.parts,
            self.jack_vector(nu),
            BasisTag::Monomial,
        )
    }

    /// ⟨P_ν, P_κ⟩.
    pub fn jack_inner(&self, nu: &Partition, kappa: &Partition) -> Rational {
        self.inner(self.jack_vector(nu), self.jack_vector(kappa))
    }

    /// Power-sum coordinates of a monomial-coordinate vector.
    fn to_power(&self, v: &[Rational]) -> Vec<Rational> {
        let d = self.parts.len();
        (0..d)
            .map(|r| {
                v.iter()
                    .enumerate()
                    .map(|(i, c)| c * &self.m_to_p[i][r])
                    .sum()
            })
            .collect()
    }

    /// Expand a monomial-coordinate vector in the Jack basis.
    fn in_jack_basis(&self, m_coords: &[Rational]) -> Vec<Rational> {
        let mut rest = m_coords.to_vec();
        let mut out = vec![Rational::zero(); rest.len()];
        for i in (0..rest.len()).rev() {
            let c = rest[i].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(&self.jack[i]) {
                *x -= &c * y;
            }
            out[i] = c;
        }
        out
    }
}

/// Expansion of p_1·P_μ in the Jack basis, for every μ up to a size bound.
#[derive(Clone, Debug)]
pub struct PieriOracle {
    bases: Vec<JackBasis>,
}

impl PieriOracle {
    pub fn new(max_size: usize, alpha: &AlphaParam) -> Result<Self, Error> {
        if max_size > ORACLE_MAX_SIZE {
            return Err(Error::OutOfRange {
                what: "|mu|",
                value: max_size as i64,
                range: format!("0..={ORACLE_MAX_SIZE}"),
            });
        }
        let vars = max_size + 1;
        let bases = (0..=max_size + 1)
            .map(|d| JackBasis::new(d, vars, alpha))
            .collect::<Result<_, _>>()?;
        Ok(PieriOracle { bases })
    }

    pub fn basis(&self, degree: usize) -> &JackBasis {
        &self.bases[degree]
    }

    /// p_1·P_μ as a Jack-basis expansion of degree |μ| + 1.
    pub fn multiply_by_p1(&self, mu: &Partition) -> Result<SymFunExpansion, Error> {
        let d = mu.size();
        if d + 1 >= self.bases.len() {
            return Err(Error::OutOfRange {
                what: "|mu|",
                value: d as i64,
                range: format!("0..={}", self.bases.len() - 2),
            });
        }
        let low = &self.bases[d];
        let high = &self.bases[d + 1];
        let power = low.to_power(low.jack_vector(mu));
        let mut m_coords = vec![Rational::zero(); high.parts.len()];
        for (rho, c) in low.parts.iter().zip(&power) {
            if c.is_zero() {
                continue;
            }
            let mut bigger = rho.parts().to_vec();
            bigger.push(1);
            let row = &high.p_to_m[high.index[&Partition::new(bigger).expect("valid")]];
            for (x, y) in m_coords.iter_mut().zip(row) {
                *x += c * y;
            }
        }
        let coeffs = high.in_jack_basis(&m_coords);
        Ok(SymFunExpansion::from_dense(
            d + 1,
            &high.parts,
            &coeffs,
            BasisTag::Jack,
        ))
    }

    /// ψ′_{λ/μ} for every addable corner of μ.
    pub fn coefficients(&self, mu: &Partition) -> Result<BTreeMap<BoxRef, Rational>, Error> {
        let product = self.multiply_by_p1(mu)?;
        let mut out = BTreeMap::new();
        for (lam, c) in &product.coefficients {
            let corner = mu
                .addable()
                .into_iter()
                .find(|&b| mu.with_box(b).as_ref() == Some(lam))
                .ok_or_else(|| {
                    Error::Domain(format!("p1*P_{mu} has a term P_{lam} not adjacent to {mu}"))
                })?;
            out.insert(corner, c.clone());
        }
        Ok(out)
    }
}

/// ψ′_{λ/μ} for every corner of μ, from a freshly built Jack basis.
pub fn pieri_oracle(
    mu: &Partition,
    alpha: &AlphaParam,
) -> Result<BTreeMap<BoxRef, Rational>, Error> {
    PieriOracle::new(mu.size(), alpha)?.coefficients(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::sample_alphas;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn known_low_degree_jack_polynomials() {
        for alpha in sample_alphas() {
            let a = alpha.value().clone();
            let basis = JackBasis::new(3, 3, &alpha).unwrap();
            let p21 = basis.jack_polynomial(&p("[2,1]"));
            assert_eq!(p21.coefficient(&p("[2,1]")), int(1));
            assert_eq!(p21.coefficient(&p("[1,1,1]")), int(6) / (&a + int(2)));
            assert_eq!(p21.coefficient(&p("[3]")), int(0));
            let p3 = basis.jack_polynomial(&p("[3]"));
            // P_(3) = m3 + 3/(1+2α) m21 + 6/((1+α)(1+2α)) m111
            let d = int(1) + int(2) * &a;
            assert_eq!(p3.coefficient(&p("[2,1]")), int(3) / &d);
            assert_eq!(p3.coefficient(&p("[1,1,1]")), int(6) / ((int(1) + &a) * &d));
        }
    }

    #[test]
    fn orthogonal_unitriangular_and_dominance_supported() {
        for alpha in [AlphaParam::from_ratio(3, 2), AlphaParam::from_ratio(1, 2)] {
            for degree in 0..=6 {
                let basis = JackBasis::new(degree, degree, &alpha).unwrap();
                let parts = basis.partitions().to_vec();
                for nu in &parts {
                    let poly = basis.jack_polynomial(nu);
                    assert_eq!(poly.coefficient(nu), int(1));
                    for key in poly.coefficients.keys() {
                        assert!(dominated_by(key, nu), "{key} in P_{nu}");
                    }
                    for kappa in &parts {
                        if kappa != nu {
                            assert!(basis.jack_inner(nu, kappa).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn schur_case_has_unit_pieri_coefficients() {
        let oracle = PieriOracle::new(7, &AlphaParam::one()).unwrap();
        for n in 0..=7 {
            for mu in enumerate_partitions(n) {
                let coeffs = oracle.coefficients(&mu).unwrap();
                assert_eq!(coeffs.len(), mu.addable().len());
                assert!(coeffs.values().all(|c| c == &int(1)), "{mu}");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        for alpha in sample_alphas() {
            let a = alpha.value().clone();
            let c = pieri_oracle(&p("[2]"), &alpha).unwrap();
            assert_eq!(c[&BoxRef::new(1, 3)], int(1));
            let c = pieri_oracle(&p("[1,1]"), &alpha).unwrap();
            assert_eq!(c[&BoxRef::new(3, 1)], int(3) * &a / (&a + int(2)));
            assert_eq!(c[&BoxRef::new(1, 2)], int(1));
        }
        assert!(pieri_oracle(&p("[4,4]"), &AlphaParam::one()).is_err());
    }

    #[test]
    fn too_few_variables_rejected() {
        assert!(JackBasis::new(4, 3, &AlphaParam::one()).is_err());
    }
}
