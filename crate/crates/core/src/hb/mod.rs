//! The Hahn–Banach extension problem on constructive Banach completions,
//! its reduction to Sep through selection in ℝ^ℕ and the reduction back.

pub mod basis;
pub mod embed;
pub mod linalg;
pub mod product;
pub mod prtest;
pub mod reversal;

use num_traits::Zero;

use crate::banach::{point_norm, two_generator_max, BanachName, Combo, CPoint, Functional, PFName};
use crate::hyperspace::ClosedPlus;
use crate::kernel::Seq;
use crate::multivalued::{Oracle, Problem, Verdict};
use crate::reals::{int, RatEnum, Rational};

pub use basis::{ueil, ueil_oracle, BasisStream, XPlus, Zeta};
pub use embed::{chi_recover, hb_le_sel, hb_le_sep, phi_embed};
pub use prtest::{pr_test, PrAnswer};
pub use reversal::{build_hb_instance, decode_separator, sep_le_hb};

/// A partial functional with norm ≤ r on A, and optionally a known extension.
#[derive(Clone)]
pub struct HbInstance {
    pub f: PFName,
    pub planted: Option<Functional>,
}

/// Certification fuel for the extension and norm checks.
pub const HB_VERIFY_FUEL: u32 = 12;

/// HB: f ↦ the extensions g ∈ X* with g|A = f and ‖g‖ ≤ r.
pub struct Hb;

impl Problem for Hb {
    type Instance = HbInstance;
    type Solution = Functional;

    fn id(&self) -> String {
        "hb".into()
    }

    fn domain_check(&self, x: &HbInstance, fuel: u64) -> Verdict {
        match &x.planted {
            Some(g) => self.verify(x, g, fuel.min(64) as usize),
            None => Verdict::Undetermined,
        }
    }

    /// Rejects a certified |g(y_i) − f(y_i)| > 0 on the first listed points
    /// of A, or a certified |g(v)| > r‖v‖ on the first rational combinations.
    fn verify(&self, x: &HbInstance, g: &Functional, depth: usize) -> Verdict {
        let zero = Rational::zero();
        for i in 0..depth as u64 {
            let y = x.f.subspace.points.get(i);
            if g.at(&y).sub(&x.f.func.at(&y)).abs().gt_rat(&zero, HB_VERIFY_FUEL) {
                return Verdict::reject(format!("g differs from f on the {i}-th point of A"));
            }
        }
        for j in 0..depth as u64 {
            let v = Combo::from_seq_code(j);
            let bound = point_norm(&x.f.space, &CPoint::constant(v.clone())).scale(&x.f.norm_bound);
            if g.at_combo(&v).abs().sub(&bound).gt_rat(&zero, HB_VERIFY_FUEL) {
                return Verdict::reject(format!("|g| exceeds the norm bound on combination {j}"));
            }
        }
        Verdict::Accept
    }
}

pub fn planted_hb_oracle() -> Oracle<Hb> {
    Oracle::new(
        "planted",
        "instances with a planted extension",
        |x: &HbInstance| x.planted.as_ref().map(|_| ()).ok_or_else(|| "no planted extension".to_string()),
        |x: &HbInstance| Ok(x.planted.clone().unwrap()),
    )
}

/// The max-norm plane with A = ℚ(e0 + e1), f(t, t) = t and norm bound 1,
/// planted with the linear extension of the given weights.
pub fn diagonal_instance(weights: Vec<Rational>) -> HbInstance {
    let points = Seq::from_fn(|i| {
        let t = RatEnum::get(i);
        CPoint::constant(Combo::new(vec![t.clone(), t]))
    });
    HbInstance {
        f: PFName {
            space: BanachName::new(two_generator_max()),
            subspace: ClosedPlus { points },
            func: Functional::linear("f", vec![int(1)], 0),
            norm_bound: int(1),
        },
        planted: Some(Functional::linear("g*", weights, 0)),
    }
}

/// The max-norm plane with A = X and f given by `weights`, which must have
/// ℓ₁ norm at most 1.
pub fn whole_space_instance(weights: Vec<Rational>) -> HbInstance {
    let points = Seq::from_fn(|i| CPoint::constant(Combo::from_seq_code(i)));
    let f = Functional::linear("f", weights, 0);
    HbInstance {
        f: PFName {
            space: BanachName::new(two_generator_max()),
            subspace: ClosedPlus { points },
            func: f.clone(),
            norm_bound: int(1),
        },
        planted: Some(f),
    }
}
