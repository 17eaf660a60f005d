//! Sep ≤ HB: from disjoint enumerations p, q a space X(p, q), an ℓ₁-sum of
//! planes whose n-th norm is skewed by δ_n, and a functional on the first
//! coordinates whose norm-one extensions reveal a separator.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Hb, HbInstance};
use crate::banach::{BanachName, CPoint, Combo, Functional, PFName, PseudoNorm};
use crate::hyperspace::ClosedPlus;
use crate::kernel::{Seq, SeqCode};
use crate::multivalued::{Problem, ReduceError, Reduction};
use crate::problems::{CharFn, Sep, SepInstance};
use crate::reals::rational::log2_bound;
use crate::reals::{pow2_neg, CReal, RatEnum, Rational};

/// δ_n when the instance decides it: ±2^{-k} for the first index k at which
/// p (+) or q (−) hits n, 0 when n is in neither range.
pub fn delta_exact(inst: &SepInstance, n: u64) -> Option<Rational> {
    if let Some((ps, qs)) = &inst.planting.spec {
        return Some(match (ps.first_index_of(n), qs.first_index_of(n)) {
            (Some(k), _) => pow2_neg(k as u32),
            (None, Some(k)) => -pow2_neg(k as u32),
            (None, None) => Rational::zero(),
        });
    }
    if let Some(bound) = &inst.planting.p_bound {
        if let Some(k) = (0..bound(&n)).find(|&k| inst.p.get(k) == n) {
            return Some(pow2_neg(k as u32));
        }
        if inst.planting.separator.as_ref().is_some_and(|r| r.at(&n) == 0) {
            return Some(Rational::zero());
        }
    }
    None
}

/// ±2^{-k} for the first witness k < limit, else 0.
fn delta_search(inst: &SepInstance, n: u64, limit: u64) -> Rational {
    for k in 0..limit {
        if inst.p.get(k) == n {
            return pow2_neg(k as u32);
        }
        if inst.q.get(k) == n {
            return -pow2_neg(k as u32);
        }
    }
    Rational::zero()
}

/// δ_n as a real: witnesses beyond index k + 1 move it by at most 2^{-(k+2)}.
pub fn delta_n(inst: &SepInstance, n: u64) -> CReal {
    if let Some(d) = delta_exact(inst, n) {
        return CReal::exact(d);
    }
    let inst = inst.clone();
    CReal::from_approx(move |k| delta_search(&inst, n, k as u64 + 2))
}

/// ‖(α, β)‖ for a known δ.
pub fn coord_norm_with(delta: &Rational, alpha: &Rational, beta: &Rational) -> Rational {
    let one = Rational::one();
    let (a, b) = if delta.is_positive() {
        let rho = (&one - delta) / (&one + delta);
        ((&rho * alpha + beta).abs(), (alpha - beta).abs())
    } else if delta.is_negative() {
        let rho = (&one + delta) / (&one - delta);
        ((&rho * alpha - beta).abs(), (alpha + beta).abs())
    } else {
        ((alpha + beta).abs(), (alpha - beta).abs())
    };
    if a > b { a } else { b }
}

/// ‖(α, β)‖_n. The norm moves by at most 2|δ||α| as |δ| shrinks to 0, so
/// searching witnesses to index k + c + 1 gives precision 2^{-k}.
pub fn coord_norm(inst: &SepInstance, alpha: &Rational, beta: &Rational, n: u64) -> CReal {
    if alpha.is_zero() || beta.is_zero() {
        return CReal::exact(alpha.abs() + beta.abs());
    }
    if let Some(d) = delta_exact(inst, n) {
        return CReal::exact(coord_norm_with(&d, alpha, beta));
    }
    let (inst, alpha, beta) = (inst.clone(), alpha.clone(), beta.clone());
    let c = 3 + log2_bound(&(alpha.abs() + beta.abs()));
    CReal::from_approx(move |k| coord_norm_with(&delta_search(&inst, n, (k + c + 2) as u64), &alpha, &beta))
}

/// ∑_i 2^{-i-1} ‖(c_{2i}, c_{2i+1})‖_i.
pub struct BlockNorm {
    pub inst: SepInstance,
}

impl PseudoNorm for BlockNorm {
    fn name(&self) -> String {
        "block".into()
    }

    fn eval(&self, c: &Combo) -> CReal {
        let blocks = c.support().div_ceil(2);
        let terms: Vec<CReal> = (0..blocks)
            .map(|i| coord_norm(&self.inst, &c.coeff(2 * i), &c.coeff(2 * i + 1), i as u64).scale(&pow2_neg(i as u32 + 1)))
            .collect();
        CReal::sum(&terms)
    }

    fn coords(&self, c: &Combo) -> Option<Vec<Rational>> {
        let mut v = c.coeffs().to_vec();
        v.resize(c.support().div_ceil(2) * 2, Rational::zero());
        Some(v)
    }

    /// max(|α|, |β|) ≤ 2‖(α, β)‖_i on every plane.
    fn coord_lower(&self, support: usize) -> Option<Rational> {
        let blocks = support.div_ceil(2) as u32;
        Some(pow2_neg(blocks + 1) / Rational::from_integer(3.into()))
    }
}

/// z_n = (0, …, 0, (0, 1)) of length n + 1.
pub fn z(n: u64) -> Combo {
    Combo::unit(2 * n as usize + 1)
}

/// The plane signs of a norm-one extension: ε_n = −1 on ran p, +1 on
/// ran q, from whatever the instance plants.
pub fn plane_signs(inst: &SepInstance) -> Option<Arc<dyn Fn(u64) -> bool + Send + Sync>> {
    if let Some(r) = &inst.planting.separator {
        let r = r.clone();
        return Some(Arc::new(move |n| r.at(&n) == 0));
    }
    if let Some(bound) = &inst.planting.p_bound {
        let (bound, p) = (Arc::clone(bound), inst.p.clone());
        return Some(Arc::new(move |n| (0..bound(&n)).any(|k| p.get(k) == n)));
    }
    None
}

/// g_ε(c) = ∑ 2^{-i-1} (c_{2i} + ε_i c_{2i+1}); the signs are read from
/// `minus(i)`.
pub fn g_eps(minus: Arc<dyn Fn(u64) -> bool + Send + Sync>) -> Functional {
    Functional::from_combo(
        "g_eps",
        move |c: &Combo| {
            (0..c.support().div_ceil(2))
                .map(|i| {
                    let b = c.coeff(2 * i + 1);
                    let b = if minus(i as u64) { -b } else { b };
                    (c.coeff(2 * i) + b) * pow2_neg(i as u32 + 1)
                })
                .sum()
        },
        0,
    )
}

/// (X(p, q), A, f, 1) with A spanned by the first plane coordinates and
/// f(c) = ∑ 2^{-i-1} c_{2i}.
pub fn build_hb_instance(inst: &SepInstance) -> HbInstance {
    let space = BanachName::new(BlockNorm { inst: inst.clone() });
    let points = Seq::from_fn(|i| {
        let mut v = Vec::new();
        for &s in SeqCode::decode(i).items() {
            v.push(RatEnum::get(s));
            v.push(Rational::zero());
        }
        CPoint::constant(Combo::new(v))
    });
    let f = Functional::from_combo(
        "f",
        |c: &Combo| (0..c.support().div_ceil(2)).map(|i| c.coeff(2 * i) * pow2_neg(i as u32 + 1)).sum(),
        1,
    );
    HbInstance {
        f: PFName { space, subspace: ClosedPlus { points }, func: f, norm_bound: Rational::one() },
        planted: plane_signs(inst).map(g_eps),
    }
}

/// r(n) = 1 iff g(z_n) > 0, read within 2^{-(n+2)}.
pub fn decode_separator(g: &Functional) -> CharFn<u64> {
    let g = g.clone();
    CharFn::new(move |n: &u64| u64::from(g.at_combo(&z(*n)).approx(*n as u32 + 2).is_positive()))
}

/// Hb verification depth used before decoding a separator.
const REVERSAL_VERIFY_DEPTH: usize = 8;

pub fn sep_le_hb() -> Reduction<Sep<u64>, Hb> {
    Reduction::new(
        "sep_le_hb",
        Arc::new(Sep::<u64>::default()),
        Arc::new(Hb),
        |x: &SepInstance| Ok(build_hb_instance(x)),
        |x: &SepInstance, g: &Functional| {
            let v = Hb.verify(&build_hb_instance(x), g, REVERSAL_VERIFY_DEPTH);
            if v.is_reject() {
                return Err(ReduceError::Invalid(format!("extension rejected: {}", v.label())));
            }
            Ok(decode_separator(g))
        },
    )
}
