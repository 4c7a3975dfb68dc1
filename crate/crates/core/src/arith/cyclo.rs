use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{solve_rational, ArithError};

/// Euler's totient.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m as usize;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p as usize;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n as usize;
    }
    result
}

/// Coefficients (constant term first) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "conductor must be positive");
    // x^m - 1
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let div = cyclotomic_polynomial(d);
        num = exact_div(&num, &div);
    }
    num.into_iter().map(|c| c as i64).collect()
}

fn exact_div(num: &[i128], den: &[i64]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn] as i128;
    debug_assert!(lead == 1);
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i128; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn] / lead;
        q[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d as i128;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Power-basis data for `Q(ζ_m) = Q[x]/(Φ_m)`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    modulus: Vec<i64>,
    /// `x^k mod Φ_m` for `k < m`.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    fn build(m: u32) -> Self {
        let modulus = cyclotomic_polynomial(m);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic modulus
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1] - top * modulus[i];
            }
            cur[0] = -top * modulus[0];
        }
        Self {
            conductor: m,
            degree,
            modulus,
            powers,
        }
    }

    /// Shared field for conductor `m`.
    pub fn get(m: u32) -> Arc<CyclotomicField> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        guard
            .entry(m)
            .or_insert_with(|| Arc::new(CyclotomicField::build(m)))
            .clone()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

/// An exact element of `Q(ζ_m)` stored as an integer coefficient vector in the
/// power basis `1, ζ, …, ζ^{φ(m)-1}` over one positive common denominator.
///
/// Elements at different conductors compare equal when they agree after
/// lifting to the least common conductor.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    pub fn zero(m: u32) -> Self {
        let field = CyclotomicField::get(m);
        let num = vec![BigInt::zero(); field.degree];
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    pub fn from_int(m: u32, v: i64) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_rational(m: u32, q: &BigRational) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalize();
        z
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta(m: u32, k: i64) -> Self {
        let field = CyclotomicField::get(m);
        let e = k.rem_euclid(m as i64) as usize;
        let num = field.powers[e].iter().map(|&c| BigInt::from(c)).collect();
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    /// Builds `Σ coeffs[k] ζ_m^k` for an arbitrary-length coefficient list.
    pub fn from_power_coeffs(m: u32, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero(m);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::zeta(m, k as i64).scale(c);
            acc = &acc + &term;
        }
        acc
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Power-basis coordinates as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for n in &mut self.num {
                *n = -&*n;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if !n.is_zero() {
                g = g.gcd(n);
                if g.is_one() {
                    return;
                }
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.num {
                *n /= &g;
            }
        }
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a multiple
    /// of the current conductor.
    pub fn lift(&self, target: u32) -> Self {
        let m = self.conductor();
        assert!(
            target.is_multiple_of(m),
            "cannot lift conductor {m} to non-multiple {target}"
        );
        if target == m {
            return self.clone();
        }
        let step = (target / m) as usize;
        let field = CyclotomicField::get(target);
        let mut num = vec![BigInt::zero(); field.degree];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[(i * step) % target as usize];
            for (t, &r) in row.iter().enumerate() {
                if r != 0 {
                    num[t] += c * r;
                }
            }
        }
        let mut out = Self {
            field,
            num,
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// Inverse of [`lift`](Self::lift): recovers the element in `Q(ζ_m)` for a
    /// divisor `m` of the current conductor.
    pub fn restrict(&self, m: u32) -> Result<Self, ArithError> {
        let big = self.conductor();
        if !big.is_multiple_of(m) {
            return Err(ArithError::NotInSubfield(m));
        }
        if big == m {
            return Ok(self.clone());
        }
        let small_deg = euler_phi(m);
        let images: Vec<Cyclo> = (0..small_deg)
            .map(|k| Cyclo::zeta(m, k as i64).lift(big))
            .collect();
        // Columns are the images of the small power basis.
        let rows: Vec<Vec<BigRational>> = (0..self.field.degree)
            .map(|t| {
                images
                    .iter()
                    .map(|img| BigRational::new(img.num[t].clone(), img.den.clone()))
                    .collect()
            })
            .collect();
        let rhs = self.coeffs();
        let sol = solve_rational(rows, rhs).ok_or(ArithError::NotInSubfield(m))?;
        Ok(Cyclo::from_power_coeffs(m, &sol))
    }

    fn common(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        let l = a.conductor().lcm(&b.conductor());
        (a.lift(l), b.lift(l))
    }

    fn add_same(&self, other: &Cyclo, negate: bool) -> Cyclo {
        let mut out = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| if negate { x - y } else { x + y })
                .collect();
            Cyclo {
                field: self.field.clone(),
                num,
                den: self.den.clone(),
            }
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(x, y)| {
                    let l = x * &other.den;
                    let r = y * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect();
            Cyclo {
                field: self.field.clone(),
                num,
                den: &self.den * &other.den,
            }
        };
        out.normalize();
        out
    }

    fn mul_same(&self, other: &Cyclo) -> Cyclo {
        let deg = self.field.degree;
        let m = self.field.conductor as usize;
        if self.is_zero() || other.is_zero() {
            return Cyclo::zero(self.conductor());
        }
        let mut prod = vec![BigInt::zero(); 2 * deg - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..deg).collect();
        for (off, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.field.powers[(deg + off) % m];
            for (t, &r) in row.iter().enumerate() {
                if r != 0 {
                    num[t] += &c * r;
                }
            }
        }
        let mut out = Cyclo {
            field: self.field.clone(),
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Cyclo {
        let mut out = Cyclo {
            field: self.field.clone(),
            num: self.num.iter().map(|n| n * q.numer()).collect(),
            den: &self.den * q.denom(),
        };
        out.normalize();
        out
    }

    pub fn mul_int(&self, k: i64) -> Cyclo {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Cyclo, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclo::from_rational(self.conductor(), &q.recip()));
        }
        // Solve (self * x) = 1 using the multiplication matrix of self.
        let m = self.conductor();
        let deg = self.field.degree;
        let cols: Vec<Vec<BigRational>> = (0..deg)
            .map(|j| (self * &Cyclo::zeta(m, j as i64)).coeffs())
            .collect();
        let rows: Vec<Vec<BigRational>> = (0..deg)
            .map(|t| cols.iter().map(|c| c[t].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); deg];
        rhs[0] = BigRational::one();
        let sol = solve_rational(rows, rhs).ok_or(ArithError::DivisionByZero)?;
        Ok(Cyclo::from_power_coeffs(m, &sol))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<Cyclo, ArithError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cyclo::one(self.conductor());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.conductor();
        let mut acc = Cyclo::zero(m);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Cyclo::zeta(m, -(k as i64)).scale(&BigRational::new(c.clone(), self.den.clone()));
            acc = &acc + &term;
        }
        acc
    }

    /// Feeds the canonical coordinates into a hasher. Only meaningful for
    /// comparing elements of one fixed conductor.
    pub fn hash_coords<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }

    /// Complex embedding sending `ζ_m` to `exp(2πi/m)`; for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let m = self.conductor() as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Cyclo::common(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[m={}]({})", self.conductor(), super::format_literal(self))
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format_literal(self))
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &'a Cyclo) -> Cyclo {
        if self.conductor() == rhs.conductor() {
            self.add_same(rhs, false)
        } else {
            let (a, b) = Cyclo::common(self, rhs);
            a.add_same(&b, false)
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &'a Cyclo) -> Cyclo {
        if self.conductor() == rhs.conductor() {
            self.add_same(rhs, true)
        } else {
            let (a, b) = Cyclo::common(self, rhs);
            a.add_same(&b, true)
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &'a Cyclo) -> Cyclo {
        if self.conductor() == rhs.conductor() {
            self.mul_same(rhs)
        } else {
            let (a, b) = Cyclo::common(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: Cyclo) -> Cyclo {
        &self + &rhs
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        &self - &rhs
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        &self * &rhs
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(7).len(), 7);
        assert_eq!(cyclotomic_polynomial(60).len() - 1, euler_phi(60));
        assert_eq!(euler_phi(60), 16);
        assert_eq!(euler_phi(28), 12);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Cyclo::zeta(4, 1);
        assert_eq!(&i * &i, Cyclo::from_int(4, -1));
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        let s = &Cyclo::zeta(3, 1) + &Cyclo::zeta(3, 2);
        assert_eq!(s, Cyclo::from_int(3, -1));
    }

    #[test]
    fn inverse_roots_multiply_to_one() {
        assert!((&Cyclo::zeta(7, 1) * &Cyclo::zeta(7, 6)).is_one());
        assert_eq!(Cyclo::zeta(12, 5).inv().unwrap(), Cyclo::zeta(12, 7));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            Cyclo::from_int(5, 2).inv().unwrap(),
            Cyclo::from_rational(5, &q(1, 2))
        );
        let a = &Cyclo::one(4) + &Cyclo::zeta(4, 1);
        let expected = (&Cyclo::one(4) - &Cyclo::zeta(4, 1)).scale(&q(1, 2));
        let inv = a.inv().unwrap();
        assert_eq!(inv, expected);
        assert!((&a * &inv).is_one());
        assert_eq!(Cyclo::zero(5).inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn mixed_conductors_lift_to_lcm() {
        // ζ_3 · ζ_5 = ζ_15^{5+3}
        let p = &Cyclo::zeta(3, 1) * &Cyclo::zeta(5, 1);
        assert_eq!(p.conductor(), 15);
        assert_eq!(p, Cyclo::zeta(15, 8));
        assert_eq!(Cyclo::zeta(4, 2), Cyclo::from_int(1, -1));
    }

    #[test]
    fn lift_restrict_round_trip() {
        let a = (&Cyclo::zeta(7, 3) + &Cyclo::from_int(7, 5)).scale(&q(2, 3));
        let up = a.lift(28);
        assert_eq!(up.restrict(7).unwrap(), a);
        assert!(Cyclo::zeta(28, 1).restrict(7).is_err());
    }

    #[test]
    fn sqrt_five_from_gauss_sum() {
        let e = |k| Cyclo::zeta(5, k);
        let s = &(&(&e(1) - &e(2)) - &e(3)) + &e(4);
        assert_eq!(&s * &s, Cyclo::from_int(5, 5));
    }

    #[test]
    fn conjugation_inverts_roots() {
        assert_eq!(Cyclo::zeta(9, 2).conj(), Cyclo::zeta(9, 7));
        let i = Cyclo::zeta(4, 1);
        assert_eq!(i.conj(), -&i);
    }
}
