//! Sparse Laurent polynomials over the rationals: the group algebra `Q[N]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{complete_to_basis, IntMatrix, LatticeVector};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A finite sum of `c * t^e` with nonzero rational `c` and exponent vectors
/// of a fixed length. Terms are kept in lexicographic exponent order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<BigInt>, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(c, vec![BigInt::zero(); nvars])
    }

    /// The monomial `t^v` with coefficient 1.
    pub fn monomial(v: &LatticeVector) -> Self {
        Self::term(Rational::one(), v.0.clone())
    }

    pub fn term(c: Rational, exponent: Vec<BigInt>) -> Self {
        let mut p = Self::zero(exponent.len());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// The binomial `t^v - 1`.
    pub fn binomial(v: &LatticeVector) -> Self {
        &Self::monomial(v) - &Self::one(v.len())
    }

    /// Collects `(coefficient, exponent)` pairs, summing repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Vec<BigInt>)>,
    {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor from small integer data.
    pub fn from_i64(nvars: usize, terms: &[(i64, &[i64])]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(c, e)| (rat(*c), e.iter().map(|&x| BigInt::from(x)).collect())),
        )
        .expect("exponent length")
    }

    fn add_term(&mut self, e: Vec<BigInt>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigInt>, &Rational)> {
        self.terms.iter()
    }

    /// Units of `Q[N]` are the nonzero multiples of monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Coefficient of `t^0`.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![BigInt::zero(); self.nvars])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<BigInt> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Ring homomorphism `t^u -> s^{Q u}`; colliding images are summed.
    pub fn monomial_map(&self, q: &IntMatrix) -> Result<Self> {
        if q.cols() != self.nvars {
            return Err(Error::DimensionMismatch { expected: q.cols(), found: self.nvars });
        }
        let mut out = Self::zero(q.rows());
        for (e, c) in &self.terms {
            let image = q.apply(&LatticeVector(e.clone()))?;
            out.add_term(image.0, c.clone());
        }
        Ok(out)
    }

    /// Quotient by `t^v - 1` when it exists in `Q[N]`.
    pub fn divide_by_binomial(&self, v: &LatticeVector) -> Result<Option<Self>> {
        BinomialDivisor::new(v)?.divide(self)
    }

    /// Quotient by the product of `t^v - 1` over `vs`, dividing one factor at a time.
    pub fn divide_by_product(&self, vs: &[LatticeVector]) -> Result<Option<Self>> {
        let mut q = self.clone();
        for v in vs {
            match q.divide_by_binomial(v)? {
                Some(next) => q = next,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    /// Exponents as machine integers, for evaluation on matrices.
    pub fn small_terms(&self) -> Result<Vec<(Rational, Vec<i64>)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let e = e
                    .iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
                    .collect::<Result<Vec<i64>>>()?;
                Ok((c.clone(), e))
            })
            .collect()
    }
}

/// Precomputed coordinate change that turns `t^v - 1` into `t_1 - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialDivisor {
    v: LatticeVector,
    /// Unimodular, sends `v` to the first basis vector.
    forward: IntMatrix,
    /// Inverse of `forward`.
    backward: IntMatrix,
}

impl BinomialDivisor {
    pub fn new(v: &LatticeVector) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !v.is_primitive() {
            return Err(Error::NotPrimitive(v.to_string()));
        }
        let backward = complete_to_basis(v.len(), std::slice::from_ref(v))?;
        let forward = backward.inverse_unimodular()?;
        Ok(BinomialDivisor { v: v.clone(), forward, backward })
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.v
    }

    pub fn divide(&self, f: &LaurentPoly) -> Result<Option<LaurentPoly>> {
        if f.nvars != self.v.len() {
            return Err(Error::DimensionMismatch { expected: self.v.len(), found: f.nvars });
        }
        if f.is_zero() {
            return Ok(Some(f.clone()));
        }
        let g = f.monomial_map(&self.forward)?;
        // Group by the exponents of t_2..t_n; each group is univariate in t_1.
        let mut groups: BTreeMap<Vec<BigInt>, Vec<(BigInt, Rational)>> = BTreeMap::new();
        for (e, c) in g.terms() {
            groups.entry(e[1..].to_vec()).or_default().push((e[0].clone(), c.clone()));
        }
        let mut quotient = LaurentPoly::zero(f.nvars);
        for (tail, mut column) in groups {
            column.sort_by(|a, b| a.0.cmp(&b.0));
            // (t - 1) q = p  with  q_k = -(c_a + ... + c_k)  for a <= k < b.
            let mut prefix = Rational::zero();
            for w in 0..column.len() {
                prefix += &column[w].1;
                let Some(next) = column.get(w + 1) else { break };
                if prefix.is_zero() {
                    continue;
                }
                let mut k = column[w].0.clone();
                while k < next.0 {
                    let mut e = Vec::with_capacity(f.nvars);
                    e.push(k.clone());
                    e.extend(tail.iter().cloned());
                    quotient.add_term(e, -prefix.clone());
                    k += 1;
                }
            }
            if !prefix.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(quotient.monomial_map(&self.backward)?))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("Laurent polynomial rank mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(&-rhs).expect("Laurent polynomial rank mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("Laurent polynomial rank mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest exponent first reads more naturally.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut vars = String::new();
            for (j, x) in e.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                if self.nvars == 1 {
                    vars.push('t');
                } else {
                    vars.push_str(&format!("t{}", j + 1));
                }
                if !x.is_one() {
                    vars.push_str(&format!("^{x}"));
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{vars}")?,
                (false, false) => write!(f, "{mag}*{vars}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn t1() -> LaurentPoly {
        LaurentPoly::from_i64(1, &[(1, &[1])])
    }

    #[test]
    fn ring_examples() {
        let one = LaurentPoly::one(1);
        let a = &t1() - &one;
        let b = &t1() + &one;
        assert_eq!(&a * &b, LaurentPoly::from_i64(1, &[(1, &[2]), (-1, &[0])]));
        assert_eq!(&a * &one, a);
        let inv = LaurentPoly::monomial(&lv(&[-1]));
        assert_eq!(&inv * &t1(), one);
        assert!(LaurentPoly::one(2).checked_mul(&one).is_err());
    }

    #[test]
    fn binomial_division_examples() {
        let f = LaurentPoly::from_i64(1, &[(1, &[2]), (-1, &[0])]);
        assert_eq!(f.divide_by_binomial(&lv(&[1])).unwrap(), Some(&t1() + &LaurentPoly::one(1)));

        let f = LaurentPoly::from_i64(2, &[(1, &[1, 1]), (-1, &[0, 0])]);
        assert_eq!(f.divide_by_binomial(&lv(&[1, 1])).unwrap(), Some(LaurentPoly::one(2)));

        let f = LaurentPoly::from_i64(1, &[(1, &[1]), (-2, &[0])]);
        assert_eq!(f.divide_by_binomial(&lv(&[1])).unwrap(), None);

        assert_eq!(f.divide_by_binomial(&lv(&[0])), Err(Error::ZeroVector));
        assert!(matches!(f.divide_by_binomial(&lv(&[2])), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn product_division_examples() {
        let e1 = lv(&[1, 0]);
        let e2 = lv(&[0, 1]);
        let f = &LaurentPoly::binomial(&e1) * &LaurentPoly::binomial(&e2);
        assert_eq!(f.divide_by_product(&[e1.clone(), e2.clone()]).unwrap(), Some(LaurentPoly::one(2)));
        let g = LaurentPoly::binomial(&e1);
        assert_eq!(g.divide_by_product(&[e1.clone(), e2.clone()]).unwrap(), None);
        assert_eq!(
            LaurentPoly::zero(2).divide_by_product(&[e1, e2]).unwrap(),
            Some(LaurentPoly::zero(2))
        );
    }

    #[test]
    fn laurent_quotients_with_negative_exponents() {
        // 1 - t^-1 = t^-1 (t - 1)
        let f = LaurentPoly::from_i64(1, &[(1, &[0]), (-1, &[-1])]);
        assert_eq!(
            f.divide_by_binomial(&lv(&[1])).unwrap(),
            Some(LaurentPoly::from_i64(1, &[(1, &[-1])]))
        );
        // and 1 - t = t (t^-1 - 1)
        let g = LaurentPoly::from_i64(1, &[(1, &[0]), (-1, &[1])]);
        assert_eq!(
            g.divide_by_binomial(&lv(&[-1])).unwrap(),
            Some(LaurentPoly::from_i64(1, &[(1, &[1])]))
        );
    }

    #[test]
    fn monomial_map_examples() {
        let f = &t1() - &LaurentPoly::one(1);
        let q = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(f.monomial_map(&q).unwrap(), LaurentPoly::from_i64(1, &[(1, &[2]), (-1, &[0])]));
        let zero = IntMatrix::from_rows(&[vec![0]]);
        assert!(f.monomial_map(&zero).unwrap().is_zero());
        let g = LaurentPoly::from_i64(2, &[(1, &[1, -1])]);
        let q = IntMatrix::from_rows(&[vec![1, 1]]);
        assert_eq!(g.monomial_map(&q).unwrap(), LaurentPoly::one(1));
        assert!(g.monomial_map(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn unit_examples() {
        assert!(LaurentPoly::from_i64(2, &[(3, &[1, -1])]).is_unit());
        assert!(!LaurentPoly::from_i64(1, &[(1, &[1]), (-2, &[0])]).is_unit());
        assert!(!LaurentPoly::zero(1).is_unit());
    }

    #[test]
    fn display() {
        let f = LaurentPoly::from_i64(2, &[(3, &[1, -1]), (-1, &[0, 0])]);
        assert_eq!(f.to_string(), "3*t1*t2^-1 - 1");
        assert_eq!(LaurentPoly::zero(1).to_string(), "0");
    }
}
