//! Functionals as points of ℝ^ℕ and back, and the reduction of Hahn–Banach
//! extension to selection in ℝ^ℕ and on to Sep.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use super::basis::XPlus;
use super::product::{candidate_sets, h_extensions, ProductPoint};
use super::{Hb, HbInstance};
use crate::banach::{CPoint, Combo, Functional};
use crate::hyperspace::{sel_le_pathb, ProductSpace, Sel, SelInstance};
use crate::kernel::Seq;
use crate::multivalued::{chain_reductions, Reduction};
use crate::problems::Sep;
use crate::reals::rational::log2_bound;
use crate::reals::{CReal, Rational};
use crate::reductions::{path2_le_sep, pathb_le_path2};

/// φ(g) = (g(a_{e'}(n)))_n.
pub fn phi_embed(g: &Functional, xp: &XPlus) -> ProductPoint {
    let (g, xp) = (g.clone(), xp.clone());
    Seq::from_fn(move |n| g.at_combo(&xp.point(n))).cached()
}

fn abs_sum(c: &Combo) -> Rational {
    c.coeffs().iter().map(|a| a.abs()).sum()
}

/// χ(a): the functional with χ(a)(e'(j)) = a_{code of e'(j)}, evaluated on
/// x through x's representative, each e(i) rewritten over e' and the values
/// on e'. Each of the three steps errs by at most 2^{-(k+3)}.
pub fn chi_recover(a: &ProductPoint, xp: &XPlus, r: &Rational) -> Functional {
    let (a, xp) = (a.clone(), xp.clone());
    let lr = log2_bound(&r.abs());
    Functional::new("chi", move |x: &CPoint| {
        let (a, xp, x) = (a.clone(), xp.clone(), x.clone());
        CReal::from_approx(move |k| {
            let c = x.rep((k + 3 + lr) as u64);
            let p = k + 4 + lr + log2_bound(&(abs_sum(&c) + Rational::from_integer(1.into())));
            let gamma = c
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(Combo::zero(), |acc, (i, v)| acc.add(&xp.change(i).get(p as u64).scale(v)));
            let prec = k + 3 + log2_bound(&(abs_sum(&gamma) + Rational::from_integer(1.into())));
            gamma
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| v * a.get(XPlus::unit_code(j as u64)).approx(prec))
                .sum()
        })
    })
}

/// HB ≤ Sel_{ℝ^ℕ}: K = X̂⁺, A = H(f, q); solutions map back through χ.
pub fn hb_le_sel() -> Reduction<Hb, Sel<ProductSpace>> {
    Reduction::new(
        "hb_le_sel",
        Arc::new(Hb),
        Arc::new(Sel::<ProductSpace>::default()),
        |x: &HbInstance| {
            let xp = XPlus::new(&x.f.space)?;
            let (k, _) = candidate_sets(&xp, &x.f.norm_bound);
            let inst = SelInstance::new(ProductSpace, k, h_extensions(&x.f, &xp));
            Ok(match &x.planted {
                Some(g) => inst.with_planted(phi_embed(g, &xp)),
                None => inst,
            })
        },
        |x: &HbInstance, a: &ProductPoint| Ok(chi_recover(a, &XPlus::new(&x.f.space)?, &x.f.norm_bound)),
    )
}

/// HB ≤ Sep through selection and the path problems.
pub fn hb_le_sep() -> Reduction<Hb, Sep<BigUint>> {
    let r = chain_reductions(&hb_le_sel(), &sel_le_pathb::<ProductSpace>());
    let r = chain_reductions(&r, &pathb_le_path2());
    let mut r = chain_reductions(&r, &path2_le_sep());
    r.id = "hb_le_sep".into();
    r
}
