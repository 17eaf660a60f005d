//! Boxes ∏[−|x_n|, |x_n|] in ℝ^ℕ, the candidate set of functional images
//! and its intersection with the extension constraints.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::basis::{identity_char, XPlus};
use crate::banach::{point_norm, point_sub, CPoint, PFName};
use crate::hyperspace::{ClosedMinus, ClosedPlus, CompactName, Cover, Flavor, ProductSpace};
use crate::kernel::{untuple, Seq, SeqCode};
use crate::reals::rational::floor;
use crate::reals::{pow2, pow2_neg, CReal, RatEnum, Rational};

pub type ProductPoint = Seq<CReal>;

/// The open interval radius at coordinate m of the d-ball of radius ρ:
/// t/(1 − t) for t = 2^m·ρ < 1, unbounded otherwise.
pub fn cylinder_radius(rho: &Rational, m: u64) -> Option<Rational> {
    let t = rho * pow2(m as i64);
    (t < Rational::one()).then(|| &t / (Rational::one() - &t))
}

/// A finite point (c_0, …, c_{k−1}, 0, 0, …).
pub fn finite_point(coords: Vec<Rational>) -> ProductPoint {
    Seq::from_fn(move |m| CReal::exact(coords.get(m as usize).cloned().unwrap_or_else(Rational::zero)))
}

/// ρ(x, y)_n = max{−|x_n|, min{y_n, |x_n|}}.
pub fn clamp_to_box(radii: &Seq<CReal>, y: &ProductPoint) -> ProductPoint {
    let (radii, y) = (radii.clone(), y.clone());
    Seq::from_fn(move |n| {
        let r = radii.get(n).abs();
        y.get(n).min(&r).max(&r.neg())
    })
}

/// A rational upper bound of |x|.
fn upper_abs(x: &CReal, k: u32) -> Rational {
    x.approx(k).abs() + x.err(k)
}

/// Y = ∏ [−|x_n|, |x_n|] named by 2^{-N} grid covers (centres clamped into
/// Y, so every ball meets Y) together with its dense clamped rational points.
pub fn compact_box(radii: &Seq<CReal>) -> (CompactName<ProductSpace>, ClosedPlus<ProductSpace>) {
    let r = radii.clone();
    let k = CompactName::by_level(Flavor::Kappa, move |level| box_cover(&r, level as u32));
    let r = radii.clone();
    let points = Seq::from_fn(move |i| {
        let s = SeqCode::decode(i);
        clamp_to_box(&r, &finite_point(s.items().iter().map(|&v| RatEnum::get(v)).collect()))
    });
    (k, ClosedPlus { points })
}

/// Level N: on coordinates m < N a grid of half-spacing h_m = 2^{m−N} over
/// [−R̄_m, R̄_m], zero beyond. Each point of Y is within h_m of a centre on
/// every m < N, so d < 2^{-N}.
fn box_cover(radii: &Seq<CReal>, level: u32) -> Cover<ProductSpace> {
    let n = level as usize;
    let bars: Vec<Rational> = (0..n).map(|m| upper_abs(&radii.get(m as u64), level + 4)).collect();
    let hs: Vec<Rational> = (0..n).map(|m| pow2_neg(level - m as u32)).collect();
    let counts: Vec<BigUint> = bars
        .iter()
        .zip(&hs)
        .map(|(b, h)| {
            let c = crate::reals::rational::ceil(&(b / h)).max(BigInt::one());
            c.to_biguint().unwrap()
        })
        .collect();
    let total = counts.iter().fold(BigUint::one(), |a, c| a * c);
    let (b2, h2, c2, r2) = (bars.clone(), hs.clone(), counts.clone(), radii.clone());
    Cover::new(pow2_neg(level), total, move |j| {
        let mut rest = j.clone();
        let mut coords = Vec::with_capacity(b2.len());
        for m in 0..b2.len() {
            let i = &rest % &c2[m];
            rest /= &c2[m];
            let raw = -&b2[m] + &h2[m] * Rational::from_integer(BigInt::from(2u32 * i + 1u32));
            coords.push(raw);
        }
        clamp_to_box(&r2, &finite_point(coords))
    })
    .with_locate(move |x: &ProductPoint| {
        let mut j = BigUint::zero();
        for m in (0..bars.len()).rev() {
            // Error below h_m² keeps the distance strictly inside the radius.
            let v = x.get(m as u64).approx(2 * (level - m as u32) + 2);
            let raw = floor(&((v + &bars[m]) / (&hs[m] * Rational::from_integer(2.into()))));
            let last = BigInt::from(counts[m].clone()) - 1;
            let i = raw.max(BigInt::zero()).min(last).to_biguint().unwrap();
            j = j * &counts[m] + i;
        }
        j
    })
}

/// Y ⊆ ⋃ B_i for Y = ∏[−R_n, R_n] (R_n = 0 beyond `radii`) and open
/// cylinders B_i = ∏_{n<|B_i|} (α_n, β_n) × ℝ × ⋯: some point with
/// coordinates among the interval endpoints and −R_n lies in Y outside
/// every B_i exactly when the cover fails.
pub fn box_cover_test(radii: &[Rational], balls: &[Vec<(Rational, Rational)>]) -> bool {
    let m = balls.iter().map(Vec::len).max().unwrap_or(0);
    let radius = |n: usize| radii.get(n).map(|r| r.abs()).unwrap_or_else(Rational::zero);
    let cands: Vec<Vec<Rational>> = (0..m)
        .map(|n| {
            let r = radius(n);
            let mut c: Vec<Rational> = balls
                .iter()
                .filter_map(|b| b.get(n))
                .flat_map(|(a, b)| [a.clone(), b.clone()])
                .chain([-r.clone()])
                .filter(|v| v.abs() <= r)
                .collect();
            c.sort();
            c.dedup();
            c
        })
        .collect();
    let inside = |g: &[Rational], b: &Vec<(Rational, Rational)>| b.iter().enumerate().all(|(n, (lo, hi))| lo < &g[n] && &g[n] < hi);
    let mut idx = vec![0usize; m];
    loop {
        let g: Vec<Rational> = (0..m).map(|n| cands[n][idx[n]].clone()).collect();
        if !balls.iter().any(|b| inside(&g, b)) {
            return false;
        }
        let mut n = 0;
        loop {
            if n == m {
                return true;
            }
            idx[n] += 1;
            if idx[n] < cands[n].len() {
                break;
            }
            idx[n] = 0;
            n += 1;
        }
    }
}

fn zigzag(v: u64) -> BigInt {
    if v % 2 == 0 { BigInt::from(v / 2) } else { -BigInt::from(v / 2 + 1) }
}

/// The d-ball of radius 2^{-l} around the dyadic point coded by `cc`.
fn coded_ball(l: u64, cc: u64) -> (Vec<Rational>, Rational) {
    let den = pow2_neg(l as u32);
    let coords = SeqCode::decode(cc).items().iter().map(|&v| Rational::from_integer(zigzag(v)) * &den).collect();
    (coords, den)
}

fn no_ball() -> (ProductPoint, Rational) {
    (finite_point(Vec::new()), Rational::zero())
}

/// Ball levels are capped so that radii stay representable.
const MAX_BALL_LEVEL: u64 = 60;

/// Balls excluding the failure of a_{e'}(n) = α a_{e'}(i) + β a_{e'}(j) ⟹
/// a_n = α a_i + β a_j, coded as ⟨⟨α, β, i, j, n⟩, l, c⟩.
pub fn relation_ball(xp: &XPlus, code: u64) -> (ProductPoint, Rational) {
    let [rel, l, cc] = untuple(code, 3)[..] else { unreachable!() };
    if l > MAX_BALL_LEVEL {
        return no_ball();
    }
    let r = untuple(rel, 5);
    let (coords, rho) = coded_ball(l, cc);
    relation_ball_at(xp, &RatEnum::get(r[0]), &RatEnum::get(r[1]), [r[2], r[3], r[4]], coords, rho)
}

/// The ball around `coords` of radius ρ when it lies inside the open set
/// where L(a) = a_n − α a_i − β a_j ≠ 0 and the relation holds in X.
pub fn relation_ball_at(
    xp: &XPlus,
    alpha: &Rational,
    beta: &Rational,
    [i, j, n]: [u64; 3],
    coords: Vec<Rational>,
    rho: Rational,
) -> (ProductPoint, Rational) {
    let rhs = xp.a_eprime(i).scale(alpha).add(&xp.a_eprime(j).scale(beta));
    if !identity_char(xp, &xp.a_eprime(n), &rhs) {
        return no_ball();
    }
    let mut lambda: BTreeMap<u64, Rational> = BTreeMap::new();
    *lambda.entry(n).or_insert_with(Rational::zero) += Rational::one();
    *lambda.entry(i).or_insert_with(Rational::zero) -= alpha;
    *lambda.entry(j).or_insert_with(Rational::zero) -= beta;
    lambda.retain(|_, v| !v.is_zero());
    if lambda.is_empty() {
        return no_ball();
    }
    // Inside the ball coordinate m moves by less than its cylinder radius.
    let mut spread = Rational::zero();
    for (&m, lam) in &lambda {
        match cylinder_radius(&rho, m) {
            Some(rm) => spread += lam.abs() * rm,
            None => return no_ball(),
        }
    }
    let at = |m: u64| coords.get(m as usize).cloned().unwrap_or_else(Rational::zero);
    let value: Rational = lambda.iter().map(|(&m, lam)| lam * at(m)).sum();
    if value.abs() >= spread {
        (finite_point(coords), rho)
    } else {
        no_ball()
    }
}

/// Balls outside the box on coordinate n, coded as ⟨n, l, c⟩.
pub fn box_ball(radii: &Seq<CReal>, code: u64) -> (ProductPoint, Rational) {
    let [n, l, cc] = untuple(code, 3)[..] else { unreachable!() };
    if l > MAX_BALL_LEVEL {
        return no_ball();
    }
    let (coords, rho) = coded_ball(l, cc);
    let Some(rn) = cylinder_radius(&rho, n) else { return no_ball() };
    let c = coords.get(n as usize).cloned().unwrap_or_else(Rational::zero);
    if radii.get(n).abs().lt_rat(&(c.abs() - rn), l as u32 + 8) {
        (finite_point(coords), rho)
    } else {
        no_ball()
    }
}

/// X̂⁺ = ∏ [−r‖a_{e'}(n)‖, r‖a_{e'}(n)‖] and X̃⁺, its linear members, as the
/// complement of relation balls interleaved with box-complement balls.
pub fn candidate_sets(xp: &XPlus, r: &Rational) -> (CompactName<ProductSpace>, ClosedMinus<ProductSpace>) {
    let radii = box_radii(xp, r);
    let (k, _) = compact_box(&radii);
    let xp2 = xp.clone();
    let balls = Seq::from_fn(move |b| if b % 2 == 0 { relation_ball(&xp2, b / 2) } else { box_ball(&radii, b / 2) }).cached();
    (k, ClosedMinus { balls })
}

pub fn box_radii(xp: &XPlus, r: &Rational) -> Seq<CReal> {
    let (xp, r) = (xp.clone(), r.clone());
    Seq::from_fn(move |n| xp.norm_code(n).scale(&r)).cached()
}

/// Balls violating |f(y_i) − a_n| ≤ ‖y_i − a_{e'}(n)‖, coded ⟨n, i, l, c⟩.
pub fn extension_ball(f: &PFName, xp: &XPlus, code: u64) -> (ProductPoint, Rational) {
    let [n, i, l, cc] = untuple(code, 4)[..] else { unreachable!() };
    if l > MAX_BALL_LEVEL {
        return no_ball();
    }
    let (coords, rho) = coded_ball(l, cc);
    let Some(rn) = cylinder_radius(&rho, n) else { return no_ball() };
    let y = f.subspace.points.get(i);
    let fy = f.func.at(&y);
    let d = point_norm(&f.space, &point_sub(&y, &CPoint::constant(xp.point(n))));
    let c = coords.get(n as usize).cloned().unwrap_or_else(Rational::zero);
    let fuel = l as u32 + 8;
    let above = fy.add(&d).lt_rat(&(&c - &rn), fuel);
    let below = fy.sub(&d).gt_rat(&(&c + &rn), fuel);
    if above || below {
        (finite_point(coords), rho)
    } else {
        no_ball()
    }
}

/// H(f, q): X̃⁺ intersected with the extension constraints.
pub fn h_extensions(f: &PFName, xp: &XPlus) -> ClosedMinus<ProductSpace> {
    let (_, tilde) = candidate_sets(xp, &f.norm_bound);
    let (f, xp) = (f.clone(), xp.clone());
    let balls = Seq::from_fn(move |b| if b % 2 == 0 { tilde.ball(b / 2) } else { extension_ball(&f, &xp, b / 2) }).cached();
    ClosedMinus { balls }
}

/// Does a avoid the given ball, certified within `fuel`?
pub fn outside_ball(a: &ProductPoint, ball: &(ProductPoint, Rational), fuel: u32) -> Option<bool> {
    use crate::hyperspace::SelSpace;
    if ball.1.is_zero() {
        return Some(true);
    }
    let d = ProductSpace.dist(a, &ball.0);
    match d.cmp(&CReal::exact(ball.1.clone()), fuel) {
        crate::reals::Cmp::Lt => Some(false),
        crate::reals::Cmp::Gt => Some(true),
        crate::reals::Cmp::Unknown => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{two_generator_max, BanachName, Combo, Functional};
    use crate::hyperspace::SelSpace;
    use crate::reals::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xp() -> XPlus {
        XPlus::new(&BanachName::new(two_generator_max())).unwrap()
    }

    /// Exact planar coverage of [−1,1]² by open rectangles: every point of
    /// a grid refining all endpoints (including midpoints) is covered.
    fn covers_square(balls: &[Vec<(Rational, Rational)>]) -> bool {
        let mut xs: Vec<Rational> = vec![int(-1), int(1)];
        for b in balls {
            for (lo, hi) in b {
                xs.push(lo.clone());
                xs.push(hi.clone());
            }
        }
        xs.retain(|v| v.abs() <= int(1));
        xs.sort();
        xs.dedup();
        let mut pts = xs.clone();
        for w in xs.windows(2) {
            pts.push((&w[0] + &w[1]) / int(2));
        }
        let inside = |x: &Rational, y: &Rational, b: &Vec<(Rational, Rational)>| {
            let full = (int(-100), int(100));
            let (a, c) = (b.first().unwrap_or(&full), b.get(1).unwrap_or(&full));
            &a.0 < x && x < &a.1 && &c.0 < y && y < &c.1
        };
        pts.iter().all(|x| pts.iter().all(|y| balls.iter().any(|b| inside(x, y, b))))
    }

    #[test]
    fn corner_test_matches_planar_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut agree_true = 0;
        for _ in 0..100 {
            let k = rng.gen_range(1..7);
            let balls: Vec<Vec<(Rational, Rational)>> = (0..k)
                .map(|_| {
                    (0..2)
                        .map(|_| {
                            let a = rat(rng.gen_range(-6..5), 4);
                            let w = rat(rng.gen_range(1..8), 4);
                            (a.clone(), a + w)
                        })
                        .collect()
                })
                .collect();
            let got = box_cover_test(&[int(1), int(1)], &balls);
            assert_eq!(got, covers_square(&balls), "{balls:?}");
            agree_true += got as usize;
        }
        let big = vec![vec![(int(-2), int(2)), (int(-2), int(2))]];
        assert!(box_cover_test(&[int(1), int(1)], &big));
        let _ = agree_true;
    }

    #[test]
    fn zero_box() {
        let radii = Seq::constant(CReal::zero());
        let (k, plus) = compact_box(&radii);
        let c = k.level(5, 16).unwrap();
        assert_eq!(c.count, BigUint::one());
        let p = c.center(&BigUint::zero());
        assert!((0..8).all(|m| p.get(m).approx(10).is_zero()));
        assert!(box_cover_test(&[], &[vec![(rat(-1, 8), rat(1, 8))]]));
        assert!((0..8).all(|m| plus.points.get(37).get(m).approx(4).is_zero()));
    }

    #[test]
    fn clamped_points_are_in_box() {
        let radii = Seq::from_fn(|n| CReal::exact(rat(1, n as i64 + 1)));
        let (_, plus) = compact_box(&radii);
        for i in 0..60 {
            let p = plus.points.get(i);
            for m in 0..6 {
                assert!(p.get(m).approx(20).abs() <= rat(1, m as i64 + 1) + pow2_neg(20));
            }
        }
    }

    #[test]
    fn grid_cover_locates_box_points() {
        let radii = Seq::from_fn(|n| CReal::exact(rat(3, n as i64 + 2)));
        let (k, _) = compact_box(&radii);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for level in [1usize, 3, 6] {
            let c = k.level(level, 16).unwrap();
            for _ in 0..20 {
                let x = finite_point((0..8).map(|m| rat(3 * rng.gen_range(-64..=64), 64 * (m + 2))).collect());
                let j = c.locate(&x).unwrap();
                assert!(j < c.count);
                let d = ProductSpace.dist(&x, &c.center(&j));
                assert!(d.lt_rat(&pow2_neg(level as u32), 40), "level {level}");
            }
        }
    }

    #[test]
    fn trivial_relation_has_no_balls() {
        let x = xp();
        for n in 0..5u64 {
            for l in 0..4 {
                let ball = relation_ball_at(&x, &int(1), &int(0), [n, n, n], vec![int(1); 6], pow2_neg(l + 8));
                assert!(ball.1.is_zero());
            }
        }
        // Small codes decode to relations or levels that give no ball.
        assert!((0..2000).all(|c| relation_ball(&x, c).1.is_zero() || ball_is_consistent(&x, c)));
    }

    fn ball_is_consistent(x: &XPlus, c: u64) -> bool {
        let g = Functional::linear("g", vec![rat(1, 3), rat(1, 5)], 0);
        outside_ball(&super::super::embed::phi_embed(&g, x), &relation_ball(x, c), 20) != Some(false)
    }

    #[test]
    fn nonlinear_point_is_excluded() {
        let x = xp();
        // a_{e'}(s) = a_{e'}(2) + a_{e'}(5) for s naming e'(0) + e'(1).
        let one = RatEnum::index(&int(1)).unwrap();
        let s = SeqCode::encode(&[one, one]).unwrap();
        let (i, j) = (XPlus::unit_code(0), XPlus::unit_code(1));
        assert_eq!((i, j), (2, 5));
        let phi = |a2: Rational, a5: Rational, an: Rational| {
            let mut v = vec![int(0); s as usize + 1];
            v[2] = a2;
            v[5] = a5;
            v[s as usize] = an;
            v
        };
        let good = finite_point(phi(rat(1, 2), rat(1, 4), rat(3, 4)));
        let bad = phi(rat(1, 2), rat(1, 4), int(1));
        let rho = pow2_neg(s as u32 + 3);
        let ball = relation_ball_at(&x, &int(1), &int(1), [i, j, s], bad.clone(), rho.clone());
        assert_eq!(ball.1, rho);
        assert_eq!(outside_ball(&finite_point(bad), &ball, 24), Some(false));
        assert_eq!(outside_ball(&good, &ball, 24), Some(true));
        // A relation that fails in X excludes nothing.
        assert!(relation_ball_at(&x, &int(2), &int(1), [i, j, s], phi(int(0), int(0), int(1)), rho).1.is_zero());
    }

    #[test]
    fn functional_images_are_linear_members() {
        let x = xp();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (_, tilde) = candidate_sets(&x, &int(1));
        for _ in 0..20 {
            let (a, b) = (rat(rng.gen_range(-4..=4), 8), rat(rng.gen_range(-4..=4), 8));
            let g = Functional::linear("g", vec![a, b], 0);
            let img = super::super::embed::phi_embed(&g, &x);
            for bi in 0..400u64 {
                assert_ne!(outside_ball(&img, &tilde.ball(bi), 20), Some(false));
            }
        }
    }

    #[test]
    fn extension_constraints_on_whole_space() {
        let space = BanachName::new(two_generator_max());
        let x = xp();
        let pts = Seq::from_fn(|i| CPoint::constant(Combo::from_seq_code(i)));
        let f = Functional::linear("f", vec![rat(1, 2), rat(-1, 4)], 0);
        let pf = PFName { space, subspace: ClosedPlus { points: pts }, func: f.clone(), norm_bound: int(1) };
        let h = h_extensions(&pf, &x);
        let img = super::super::embed::phi_embed(&f, &x);
        for bi in 0..400u64 {
            assert_ne!(outside_ball(&img, &h.ball(bi), 20), Some(false));
        }
    }
}
