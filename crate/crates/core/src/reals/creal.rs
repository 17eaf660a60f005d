//! Computable reals given by rational approximations.
//!
//! A `CReal` answers `approx(k)` with a rational within 2^{-k} of its value.
//! Its Cauchy name in the sense of dense indices with modulus 2^{-i} is
//! i ↦ approx(i+1), see [`CReal::name`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use super::rational::{add_fast, log2_bound, pow2_neg, round_dyadic, Rational};
use super::ratenum::RatEnum;
use super::RealError;
use crate::kernel::Seq;

type ApproxFn = Box<dyn Fn(u32) -> Rational + Send + Sync>;

enum Inner {
    Exact(Rational),
    Approx { f: ApproxFn, cache: Mutex<HashMap<u32, Rational>> },
}

#[derive(Clone)]
pub struct CReal {
    inner: Arc<Inner>,
}

/// Outcome of a fueled comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Gt,
    Unknown,
}

impl CReal {
    pub fn exact(x: Rational) -> Self {
        CReal { inner: Arc::new(Inner::Exact(x)) }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::exact(super::rational::int(n))
    }

    /// Real from an approximation function with |f(k) − x| ≤ 2^{-k}.
    pub fn from_approx(f: impl Fn(u32) -> Rational + Send + Sync + 'static) -> Self {
        CReal { inner: Arc::new(Inner::Approx { f: Box::new(f), cache: Mutex::new(HashMap::new()) }) }
    }

    /// Real from a rational Cauchy name: |name(i) − name(j)| ≤ 2^{-i} for j ≥ i.
    pub fn from_name(name: Seq<Rational>) -> Self {
        Self::from_approx(move |k| name.get(k as u64))
    }

    /// Real from a name over RatEnum indices.
    pub fn from_index_name(name: Seq) -> Self {
        Self::from_approx(move |k| RatEnum::get(name.get(k as u64)))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match &*self.inner {
            Inner::Exact(x) => Some(x),
            Inner::Approx { .. } => None,
        }
    }

    pub fn approx(&self, k: u32) -> Rational {
        match &*self.inner {
            Inner::Exact(x) => x.clone(),
            Inner::Approx { f, cache } => {
                if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&k) {
                    return v.clone();
                }
                let v = f(k);
                cache.lock().unwrap_or_else(|e| e.into_inner()).insert(k, v.clone());
                v
            }
        }
    }

    /// Error bound of `approx(k)`: 0 for exact values, 2^{-k} otherwise.
    pub fn err(&self, k: u32) -> Rational {
        if self.as_exact().is_some() { Rational::zero() } else { pow2_neg(k) }
    }

    /// Rational Cauchy name with the 2^{-i} modulus.
    pub fn name(&self) -> Seq<Rational> {
        let x = self.clone();
        Seq::from_fn(move |i| x.approx(i as u32 + 1))
    }

    /// Checks the name modulus on all pairs i < j ≤ upto.
    pub fn validate(&self, upto: u32) -> Result<(), RealError> {
        let name = self.name();
        for i in 0..upto {
            for j in i + 1..=upto {
                let d = (name.get(i as u64) - name.get(j as u64)).abs();
                if d > pow2_neg(i) {
                    return Err(RealError::InvalidName { i, j });
                }
            }
        }
        Ok(())
    }

    /// Integer-exponent bound e with |x| ≤ 2^e.
    pub fn magnitude_bound(&self) -> u32 {
        let a = self.approx(0);
        log2_bound(&(a.abs() + Rational::from_integer(1.into())))
    }

    pub fn neg(&self) -> CReal {
        if let Some(x) = self.as_exact() {
            return CReal::exact(-x);
        }
        let x = self.clone();
        CReal::from_approx(move |k| -x.approx(k))
    }

    pub fn abs(&self) -> CReal {
        if let Some(x) = self.as_exact() {
            return CReal::exact(x.abs());
        }
        let x = self.clone();
        CReal::from_approx(move |k| x.approx(k).abs())
    }

    pub fn add(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return CReal::exact(a + b);
        }
        let (x, y) = (self.clone(), other.clone());
        CReal::from_approx(move |k| round_dyadic(&add_fast(&x.approx(k + 2), &y.approx(k + 2)), k + 2))
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return CReal::exact(a * b);
        }
        let (x, y) = (self.clone(), other.clone());
        // |x| ≤ 2^ex, |y| ≤ 2^ey; reading both at k+s+1 keeps the product error ≤ 2^{-k-1}.
        let s = x.magnitude_bound().max(y.magnitude_bound()) + 2;
        CReal::from_approx(move |k| round_dyadic(&(x.approx(k + s + 1) * y.approx(k + s + 1)), k + 2))
    }

    pub fn scale(&self, a: &Rational) -> CReal {
        if let Some(x) = self.as_exact() {
            return CReal::exact(x * a);
        }
        if a.is_zero() {
            return CReal::zero();
        }
        let x = self.clone();
        let a = a.clone();
        let s = log2_bound(&a);
        CReal::from_approx(move |k| round_dyadic(&(x.approx(k + s + 1) * &a), k + 1))
    }

    pub fn max(&self, other: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return CReal::exact(super::rational::max(a, b));
        }
        let (x, y) = (self.clone(), other.clone());
        CReal::from_approx(move |k| super::rational::max(&x.approx(k), &y.approx(k)))
    }

    pub fn min(&self, other: &CReal) -> CReal {
        self.neg().max(&other.neg()).neg()
    }

    pub fn sum(items: &[CReal]) -> CReal {
        if items.iter().all(|x| x.as_exact().is_some()) {
            return CReal::exact(items.iter().map(|x| x.as_exact().unwrap().clone()).sum());
        }
        let items = items.to_vec();
        let extra = 64 - (items.len() as u64).leading_zeros() + 1;
        CReal::from_approx(move |k| {
            let s: Rational = items.iter().map(|x| x.approx(k + extra)).sum();
            round_dyadic(&s, k + 1)
        })
    }

    pub fn max_of(items: &[CReal]) -> CReal {
        items.iter().skip(1).fold(items.first().cloned().unwrap_or_else(CReal::zero), |acc, x| acc.max(x))
    }

    /// Certified comparison at precisions 0..=fuel; equality is never certified.
    /// Compares at precisions 0, 1, 2, 4, … and finally `fuel`.
    pub fn cmp(&self, other: &CReal, fuel: u32) -> Cmp {
        let ks = std::iter::once(0).chain((0..32).map(|i| 1u32 << i).take_while(|&k| k < fuel)).chain(std::iter::once(fuel));
        for k in ks {
            let d = self.approx(k) - other.approx(k);
            let r = self.err(k) + other.err(k);
            if d > r {
                return Cmp::Gt;
            }
            if d < -&r {
                return Cmp::Lt;
            }
            if r.is_zero() {
                return Cmp::Unknown;
            }
        }
        Cmp::Unknown
    }

    pub fn lt(&self, other: &CReal, fuel: u32) -> bool {
        self.cmp(other, fuel) == Cmp::Lt
    }

    pub fn gt(&self, other: &CReal, fuel: u32) -> bool {
        self.cmp(other, fuel) == Cmp::Gt
    }

    pub fn lt_rat(&self, r: &Rational, fuel: u32) -> bool {
        self.lt(&CReal::exact(r.clone()), fuel)
    }

    pub fn gt_rat(&self, r: &Rational, fuel: u32) -> bool {
        self.gt(&CReal::exact(r.clone()), fuel)
    }

    /// True if |self − r| ≤ 2^{-k} is consistent with the approximation at precision k+2.
    pub fn within(&self, r: &Rational, k: u32) -> bool {
        (self.approx(k + 2) - r).abs() <= pow2_neg(k) + self.err(k + 2)
    }
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_exact() {
            Some(x) => write!(f, "CReal({x})"),
            None => write!(f, "CReal(≈{})", super::rational::to_f64(&self.approx(20))),
        }
    }
}

impl From<Rational> for CReal {
    fn from(x: Rational) -> Self {
        CReal::exact(x)
    }
}
