//! The independence test: for independent v₁..v_k and a candidate e,
//! certify either that {v₁..v_k, e} is independent or that e lies within
//! 2^{-(n+1)} of a rational combination of the v's.

use num_traits::{One, Signed, Zero};

use super::linalg::{inf_norm, left_inverse, least_squares, solve_in_span};
use crate::banach::{BanachName, Combo};
use crate::reals::{pow2_neg, CReal, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrAnswer {
    /// min over S_{m,k+1} of ‖∑ β w‖ exceeds 2^{-m}·∑‖w‖.
    Independent { m: u32 },
    /// ‖e − ∑ γ_j v_j‖ < 2^{-(n+1)}.
    Approximable { gammas: Vec<Rational> },
    Undecided,
}

/// Dovetailing stages before giving up.
pub const PR_STAGES: u32 = 48;

/// Cube evaluations allowed per lower-bound search on black-box norms.
const BNB_BUDGET: usize = 6000;

/// Largest k for which black-box norms are searched.
const BLACK_BOX_DIM: usize = 3;

/// A sound upper bound of a real.
fn upper(x: &CReal) -> Rational {
    x.approx(8) + x.err(8)
}

fn lower(x: &CReal, k: u32) -> Rational {
    x.approx(k) - x.err(k)
}

/// ⌈√ℓ⌉, so that |β|_∞ ≥ |β|₂/⌈√ℓ⌉.
fn ceil_sqrt(l: usize) -> usize {
    (1..).find(|r| r * r >= l).unwrap()
}

/// Certifies d(e, ∑γv) < 2^{-(n+1)}.
fn approximates(x: &BanachName, vs: &[Combo], cand: &Combo, gammas: &[Rational], n: u32, fuel: u32) -> bool {
    let d = x.norm_of(&cand.sub(&Combo::combine(gammas, vs)));
    d.lt_rat(&pow2_neg(n + 1), fuel)
}

/// A lower bound of the minimum of ‖∑ β w‖ over 1 ≤ |β|₂² ≤ 4 for
/// coordinate-structured norms: ‖∑βw‖ ≥ c·|Wβ|_∞ ≥ c·|β|_∞/‖L‖_∞ with L a
/// left inverse of the coordinate matrix W.
fn structured_lower(x: &BanachName, ws: &[Combo]) -> Option<Option<Rational>> {
    let support = ws.iter().map(Combo::support).max().unwrap_or(0);
    let c = x.norm.coord_lower(support)?;
    let cols: Vec<Vec<Rational>> = ws.iter().map(|w| x.norm.coords(w)).collect::<Option<_>>()?;
    Some(left_inverse(&cols).map(|l| {
        let root = Rational::from_integer((ceil_sqrt(ws.len()) as i64).into());
        c / (inf_norm(&l) * root)
    }))
}

/// Exact coefficients of the candidate over the v's when structured, else
/// the least-squares coefficients.
fn structured_gammas(x: &BanachName, vs: &[Combo], cand: &Combo) -> Option<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = vs.iter().map(|w| x.norm.coords(w)).collect::<Option<_>>()?;
    let b = x.norm.coords(cand)?;
    solve_in_span(&cols, &b).or_else(|| least_squares(&cols, &b))
}

/// Branch-and-bound over cubes of [−2, 2]^ℓ meeting the annulus
/// 1 ≤ |β|₂² ≤ 4: does ‖∑βw‖ exceed `target` everywhere on it?
fn black_box_exceeds(x: &BanachName, ws: &[Combo], lip: &Rational, target: &Rational, prec: u32) -> bool {
    let l = ws.len();
    let mut stack: Vec<(Vec<Rational>, Rational)> = vec![(vec![Rational::zero(); l], Rational::from_integer(2.into()))];
    let mut evals = 0usize;
    while let Some((c, h)) = stack.pop() {
        // Squared distance range of the cube from the origin.
        let (mut lo2, mut hi2) = (Rational::zero(), Rational::zero());
        for ci in &c {
            let (a, b) = ((ci - &h).abs(), (ci + &h).abs());
            let far = if a > b { a.clone() } else { b.clone() };
            let near = if (ci - &h).is_negative() && (ci + &h).is_positive() { Rational::zero() } else if a < b { a } else { b };
            lo2 += &near * &near;
            hi2 += &far * &far;
        }
        if lo2 > Rational::from_integer(4.into()) || hi2 < Rational::one() {
            continue;
        }
        evals += 1;
        if evals > BNB_BUDGET {
            return false;
        }
        let v = x.norm_of(&Combo::combine(&c, ws));
        if lower(&v, prec) - lip * &h > *target {
            continue;
        }
        if h < pow2_neg(prec) {
            return false;
        }
        let h2 = &h / Rational::from_integer(2.into());
        for mask in 0..1u32 << l {
            let child: Vec<Rational> =
                c.iter().enumerate().map(|(i, ci)| if mask >> i & 1 == 1 { ci + &h2 } else { ci - &h2 }).collect();
            stack.push((child, h2.clone()));
        }
    }
    true
}

/// Dyadic γ-tuples of resolution 2^{-t} in [−4, 4]^k, when few enough.
fn grid_gammas(k: usize, t: u32) -> Vec<Vec<Rational>> {
    let side = 8i64 << t;
    let total = (side + 1).checked_pow(k as u32).unwrap_or(i64::MAX);
    if k == 0 || total > 4096 {
        return if k == 0 { vec![vec![]] } else { Vec::new() };
    }
    let step = pow2_neg(t);
    (0..total)
        .map(|mut j| {
            (0..k)
                .map(|_| {
                    let d = j % (side + 1);
                    j /= side + 1;
                    Rational::from_integer((d - side / 2).into()) * &step
                })
                .collect()
        })
        .collect()
}

pub fn pr_test(x: &BanachName, vs: &[Combo], cand: &Combo, n: u32) -> PrAnswer {
    pr_test_staged(x, vs, cand, n, PR_STAGES)
}

/// Stage t tries branch (a) with m = 2(k+1) + t, then branch (b).
pub fn pr_test_staged(x: &BanachName, vs: &[Combo], cand: &Combo, n: u32, stages: u32) -> PrAnswer {
    let ws: Vec<Combo> = vs.iter().cloned().chain([cand.clone()]).collect();
    let ell = ws.len() as u32;
    let norm_sum: Rational = ws.iter().map(|w| upper(&x.norm_of(w))).sum();
    let structured = structured_lower(x, &ws);
    let gamma_star = structured.as_ref().and_then(|_| structured_gammas(x, vs, cand));
    for t in 0..stages {
        let m = 2 * ell + t;
        let target = pow2_neg(m) * &norm_sum;
        let a = match &structured {
            Some(lb) => lb.as_ref().is_some_and(|lb| *lb > target),
            None => ws.len() <= BLACK_BOX_DIM && black_box_exceeds(x, &ws, &norm_sum, &target, m + 4),
        };
        if a {
            return PrAnswer::Independent { m };
        }
        let fuel = 8 + n + t;
        match &gamma_star {
            Some(g) => {
                if approximates(x, vs, cand, g, n, fuel) {
                    return PrAnswer::Approximable { gammas: g.clone() };
                }
            }
            None if structured.is_none() => {
                if let Some(g) = grid_gammas(vs.len(), t).into_iter().find(|g| approximates(x, vs, cand, g, n, fuel)) {
                    return PrAnswer::Approximable { gammas: g };
                }
            }
            None => {}
        }
    }
    PrAnswer::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{two_generator_max, FiniteNorm, NormKind, Opaque};
    use crate::reals::{int, rat};

    fn max2() -> BanachName {
        BanachName::new(two_generator_max())
    }

    #[test]
    fn empty_set_unit_candidate() {
        assert_eq!(pr_test(&max2(), &[], &Combo::unit(0), 4), PrAnswer::Independent { m: 2 });
    }

    #[test]
    fn candidate_equal_to_a_vector() {
        let v = Combo::new(vec![int(1), int(2)]);
        assert_eq!(pr_test(&max2(), &[v.clone()], &v, 10), PrAnswer::Approximable { gammas: vec![int(1)] });
    }

    #[test]
    fn null_generator_is_approximable_by_zero() {
        assert_eq!(
            pr_test(&max2(), &[Combo::unit(0), Combo::unit(1)], &Combo::unit(2), 6),
            PrAnswer::Approximable { gammas: vec![int(0), int(0)] }
        );
    }

    #[test]
    fn collapsed_generator() {
        let n = FiniteNorm::new(NormKind::Max, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]]);
        let x = BanachName::new(n);
        assert_eq!(
            pr_test(&x, &[Combo::unit(0), Combo::unit(1)], &Combo::unit(2), 9),
            PrAnswer::Approximable { gammas: vec![int(1), int(1)] }
        );
        assert!(matches!(pr_test(&x, &[Combo::unit(0)], &Combo::unit(2), 9), PrAnswer::Independent { .. }));
    }

    #[test]
    fn black_box_norms() {
        let x = BanachName::new(Opaque(two_generator_max()));
        assert!(matches!(pr_test(&x, &[], &Combo::unit(1), 4), PrAnswer::Independent { .. }));
        assert!(matches!(pr_test(&x, &[Combo::unit(0)], &Combo::unit(1), 4), PrAnswer::Independent { .. }));
        let v = Combo::new(vec![rat(1, 2), int(1)]);
        assert!(matches!(pr_test(&x, &[v.clone()], &v.scale(&int(2)), 6), PrAnswer::Approximable { .. }));
        assert!(matches!(pr_test(&x, &[Combo::unit(0), Combo::unit(1)], &Combo::unit(3), 6), PrAnswer::Approximable { .. }));
    }
}
