//! The independent dense family: the staged stream q with e' = e∘q, the
//! change of fundamental sequence and the decidable identity problem.

use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::prtest::{pr_test, PrAnswer};
use crate::banach::{BanachName, Combo};
use crate::kernel::{Seq, SeqCode, Step};
use crate::multivalued::{Oracle, Problem, ReduceError, Verdict};
use crate::reals::{pow2_neg, CReal, RatEnum, Rational};

/// Generators searched for a first certified nonzero norm.
pub const MARKER_SEARCH: usize = 1024;

/// q with R = {j > 0 : q(j) = q(0)}; off R, q is injective and e∘q is
/// independent with dense span.
#[derive(Clone)]
pub struct BasisStream {
    pub q: Seq<u64>,
    /// N = q(0), a generator with ‖e(N)‖ ≠ 0.
    pub marker: u64,
}

impl BasisStream {
    /// A given q, for spaces whose basis is known.
    pub fn planted(q: Seq<u64>) -> Self {
        let marker = q.get(0);
        BasisStream { q, marker }
    }

    pub fn at(&self, j: u64) -> u64 {
        self.q.get(j)
    }

    /// j ∈ R* = R ∪ {0}.
    pub fn in_r_star(&self, j: u64) -> bool {
        self.q.get(j) == self.marker
    }

    /// j ∈ R.
    pub fn in_r(&self, j: u64) -> bool {
        j > 0 && self.in_r_star(j)
    }
}

/// Stage-by-stage construction of q: q(0) = N; stage n+1 sets q(n+1) to the
/// least i ≤ n+1 whose test answers independence against T_n, else N.
pub fn ueil(x: &BanachName) -> Result<BasisStream, ReduceError> {
    let marker = (0..MARKER_SEARCH)
        .find(|&i| x.norm_of(&Combo::unit(i)).gt_rat(&Rational::zero(), 32))
        .ok_or_else(|| ReduceError::FuelExhausted(format!("no generator below {MARKER_SEARCH} has certified nonzero norm")))?
        as u64;
    let x = x.clone();
    let mut chosen: Vec<u64> = Vec::new();
    let mut stage = 0u64;
    let q = Seq::from_producer(move || {
        if stage == 0 {
            stage = 1;
            chosen.push(marker);
            return Step::Emit(marker);
        }
        let n = stage - 1;
        stage += 1;
        let t: Vec<Combo> = chosen.iter().map(|&i| Combo::unit(i as usize)).collect();
        // Members of T_n answer (b) with a unit coefficient.
        let pick = (0..=n + 1)
            .filter(|i| !chosen.contains(i))
            .find(|&i| matches!(pr_test(&x, &t, &Combo::unit(i as usize), n as u32), PrAnswer::Independent { .. }));
        match pick {
            Some(i) => {
                chosen.push(i);
                Step::Emit(i)
            }
            None => Step::Emit(marker),
        }
    });
    Ok(BasisStream { q, marker })
}

/// (X, q): a space with its independent dense family e' = e∘q.
#[derive(Clone)]
pub struct XPlus {
    pub x: BanachName,
    pub basis: BasisStream,
    changes: Arc<Mutex<Vec<Option<Seq<Combo>>>>>,
}

impl XPlus {
    pub fn new(x: &BanachName) -> Result<Self, ReduceError> {
        Ok(XPlus::with_basis(x, ueil(x)?))
    }

    pub fn with_basis(x: &BanachName, basis: BasisStream) -> Self {
        XPlus { x: x.clone(), basis, changes: Arc::new(Mutex::new(Vec::new())) }
    }

    /// e'(j) = e(q(j)).
    pub fn e_prime(&self, j: u64) -> Combo {
        Combo::unit(self.basis.at(j) as usize)
    }

    /// ∑ c_j e'(j) as a combination over e.
    pub fn to_e(&self, c: &Combo) -> Combo {
        c.coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()).fold(Combo::zero(), |acc, (j, a)| acc.add(&self.e_prime(j as u64).scale(a)))
    }

    /// The e'-combination a_{e'}(n) named by the sequence number n.
    pub fn a_eprime(&self, n: u64) -> Combo {
        Combo::from_seq_code(n)
    }

    /// a_{e'}(n) over e.
    pub fn point(&self, n: u64) -> Combo {
        self.to_e(&self.a_eprime(n))
    }

    pub fn norm_code(&self, n: u64) -> CReal {
        self.x.norm_of(&self.point(n))
    }

    /// The sequence number of 0̄[j]⌢1, naming e'(j).
    pub fn unit_code(j: u64) -> u64 {
        (1u64 << j) - 1 + (1u64 << (j + 1))
    }

    /// A Cauchy name of e(i) over e', cached per generator.
    pub fn change(&self, i: usize) -> Seq<Combo> {
        let mut c = self.changes.lock().unwrap();
        if c.len() <= i {
            c.resize(i + 1, None);
        }
        c[i].get_or_insert_with(|| basis_change(self, i)).clone()
    }
}

/// Codes s ≤ this are tried by the literal (*) search at each stage.
const LITERAL_CAP: u64 = 4096;

/// A name p of e(i) over e': stage n tries candidates until
/// d(e(i), ∑_{k∉R} a_ℚ(s(k))·e'(k))_{[j+2]} < 2^{-(j+2)} holds for the next
/// index j. Candidates are the exact generator e'(j) = e(i), the coordinate
/// projection for structured norms, then the codes s ≤ n.
pub fn basis_change(xp: &XPlus, i: usize) -> Seq<Combo> {
    let xp = xp.clone();
    let target = Combo::unit(i);
    let mut stage = 0u64;
    let mut exact: Option<Combo> = None;
    let mut j = 0u32;
    Seq::from_producer(move || {
        if let Some(c) = &exact {
            return Step::Emit(c.clone());
        }
        let n = stage;
        stage += 1;
        let passes = |c: &Combo, j: u32| xp.x.dist_combos(&target, &xp.to_e(c)).approx(j + 2) < pow2_neg(j + 2);
        if let Some(k) = (0..=n).find(|&k| (k == 0 || !xp.basis.in_r(k)) && xp.basis.at(k) == i as u64) {
            let c = Combo::unit(k as usize);
            exact = Some(c.clone());
            return Step::Emit(c);
        }
        let basis: Vec<u64> = (0..=n).filter(|&k| k == 0 || !xp.basis.in_r(k)).collect();
        if let Some(g) = projection(&xp, &basis, &target) {
            let mut c = vec![Rational::zero(); n as usize + 1];
            for (k, a) in basis.iter().zip(g.1) {
                c[*k as usize] = a;
            }
            let c = Combo::new(c);
            if g.0 {
                exact = Some(c.clone());
                return Step::Emit(c);
            }
            if passes(&c, j) {
                j += 1;
                return Step::Emit(c);
            }
        }
        for s in 0..=n.min(LITERAL_CAP) {
            let items = SeqCode::decode(s);
            let c = Combo::new(
                items
                    .items()
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| if k > 0 && xp.basis.in_r(k as u64) { Rational::zero() } else { RatEnum::get(v) })
                    .collect(),
            );
            if passes(&c, j) {
                j += 1;
                return Step::Emit(c);
            }
        }
        Step::Stall
    })
}

/// Coordinates of e(i) over the listed e'(k): (exact, coefficients).
fn projection(xp: &XPlus, basis: &[u64], target: &Combo) -> Option<(bool, Vec<Rational>)> {
    let norm = &xp.x.norm;
    let cols: Vec<Vec<Rational>> = basis.iter().map(|&k| norm.coords(&xp.e_prime(k))).collect::<Option<_>>()?;
    let b = norm.coords(target)?;
    if let Some(g) = super::linalg::solve_in_span(&cols, &b) {
        return Some((true, g));
    }
    super::linalg::least_squares(&cols, &b).map(|g| (false, g))
}

/// Decides a_{e'}(s) = a_{e'}(t) on e'-coefficient vectors: coefficients
/// agree off R* and the R*-coefficients have equal sums.
pub fn identity_char(xp: &XPlus, s: &Combo, t: &Combo) -> bool {
    let len = s.support().max(t.support()) as u64;
    let (mut ss, mut ts) = (Rational::zero(), Rational::zero());
    for i in 0..len {
        let (a, b) = (s.coeff(i as usize), t.coeff(i as usize));
        if xp.basis.in_r_star(i) {
            ss += a;
            ts += b;
        } else if a != b {
            return false;
        }
    }
    ss == ts
}

/// identity_char on RatEnum index sequences.
pub fn identity_char_codes(xp: &XPlus, s: &[u64], t: &[u64]) -> bool {
    identity_char(xp, &Combo::from_code(s), &Combo::from_code(t))
}

/// ζ: X ↦ the streams q with the independence and density property.
pub struct Zeta;

impl Problem for Zeta {
    type Instance = BanachName;
    type Solution = BasisStream;

    fn id(&self) -> String {
        "zeta".into()
    }

    fn domain_check(&self, x: &BanachName, fuel: u64) -> Verdict {
        match (0..fuel.min(MARKER_SEARCH as u64) as usize).any(|i| x.norm_of(&Combo::unit(i)).gt_rat(&Rational::zero(), 32)) {
            true => Verdict::Accept,
            false => Verdict::Undetermined,
        }
    }

    /// q off R is injective and {e(q(j)) : j < depth, j ∉ R} is independent,
    /// each certified by the independence test.
    fn verify(&self, x: &BanachName, b: &BasisStream, depth: usize) -> Verdict {
        let mut seen: Vec<u64> = Vec::new();
        for j in 0..depth as u64 {
            if b.in_r(j) {
                continue;
            }
            let i = b.at(j);
            if seen.contains(&i) {
                return Verdict::reject(format!("q repeats {i} off R at {j}"));
            }
            let t: Vec<Combo> = seen.iter().map(|&v| Combo::unit(v as usize)).collect();
            match pr_test(x, &t, &Combo::unit(i as usize), 24) {
                PrAnswer::Independent { .. } => {}
                PrAnswer::Approximable { .. } => return Verdict::reject(format!("e(q({j})) depends on earlier vectors")),
                PrAnswer::Undecided => return Verdict::Undetermined,
            }
            seen.push(i);
        }
        Verdict::Accept
    }
}

pub fn ueil_oracle() -> Oracle<Zeta> {
    Oracle::total("ueil", |x: &BanachName| ueil(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{two_generator_max, FiniteNorm, NormKind};
    use crate::reals::{int, rat};

    fn max2() -> BanachName {
        BanachName::new(two_generator_max())
    }

    /// Exact distance from `v` to the rational span of `basis` in the max
    /// norm of ℚ², by solving with the two coordinates.
    fn in_span_2d(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
        let rank = |vs: &[Vec<Rational>]| -> usize {
            let nz: Vec<&Vec<Rational>> = vs.iter().filter(|w| w.iter().any(|a| !a.is_zero())).collect();
            if nz.is_empty() {
                0
            } else if nz.iter().any(|w| &w[0] * &nz[0][1] != &w[1] * &nz[0][0]) {
                2
            } else {
                1
            }
        };
        let mut all = basis.to_vec();
        all.push(v.to_vec());
        rank(&all) == rank(basis)
    }

    #[test]
    fn two_generator_stream() {
        let b = ueil(&max2()).unwrap();
        assert_eq!(b.q.prefix(8), vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert!(b.in_r_star(0) && !b.in_r(0) && b.in_r(2) && !b.in_r_star(1));
        let sel: Vec<Vec<Rational>> = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        for i in 0..2 {
            let mut e = vec![int(0), int(0)];
            e[i] = int(1);
            assert!(in_span_2d(&sel, &e));
        }
    }

    #[test]
    fn collapsed_generator_lands_in_padding() {
        let n = FiniteNorm::new(NormKind::Max, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]]);
        let b = ueil(&BanachName::new(n)).unwrap();
        let q = b.q.prefix(12);
        assert!(!q.contains(&2));
        assert_eq!(&q[..2], &[0, 1]);
        assert!(q[2..].iter().all(|&v| v == 0));
    }

    #[test]
    fn zeta_verifier_accepts_stream() {
        let x = max2();
        let b = ueil(&x).unwrap();
        assert!(Zeta.verify(&x, &b, 12).is_accept());
        let bad = BasisStream::planted(Seq::from_fn(|j| if j == 3 { 1 } else { j.min(1) }));
        assert!(Zeta.verify(&x, &bad, 12).is_reject());
    }

    #[test]
    fn basis_change_on_two_generators() {
        let xp = XPlus::new(&max2()).unwrap();
        let c = xp.change(0);
        assert_eq!(c.get(5), Combo::unit(0));
        let c1 = xp.change(1);
        assert_eq!(c1.get(3), Combo::unit(1));
        assert!(xp.x.norm_of(&xp.to_e(&xp.change(4).get(3))).approx(12).is_zero());
        // The identity both ways on a sampled combination.
        let v = Combo::new(vec![rat(2, 3), rat(-5, 4)]);
        let back = (0..2).fold(Combo::zero(), |acc, i| acc.add(&xp.to_e(&xp.change(i).get(12)).scale(&v.coeff(i))));
        assert!(xp.x.dist_combos(&v, &back).approx(14) <= pow2_neg(12));
    }

    #[test]
    fn literal_search_on_black_box() {
        let n = FiniteNorm::new(NormKind::Max, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]]);
        let x = BanachName::new(crate::banach::Opaque(n));
        let xp = XPlus::with_basis(&x, BasisStream::planted(Seq::from_fn(|j| if j == 1 { 1 } else { 0 })));
        let name = xp.change(2);
        for j in 0..4u64 {
            assert_eq!(name.get(j), Combo::new(vec![int(1), int(1)]));
        }
        let z = xp.change(5);
        assert!(x.norm_of(&xp.to_e(&z.get(2))).approx(8).is_zero());
    }

    #[test]
    fn identity_problem() {
        let xp = XPlus::new(&max2()).unwrap();
        let s = Combo::new(vec![int(1), int(2), int(3)]);
        assert!(identity_char(&xp, &s, &s));
        let t = Combo::new(vec![int(2), int(2), int(1), int(1)]);
        assert!(identity_char(&xp, &s, &t));
        let u = Combo::new(vec![int(1), int(3), int(3)]);
        assert!(!identity_char(&xp, &s, &u));
        assert!(xp.x.dist_combos(&xp.to_e(&s), &xp.to_e(&u)).gt_rat(&Rational::zero(), 12));
        assert!(identity_char_codes(&xp, &[1, 0, 5], &[5, 0, 1]));
    }

    #[test]
    fn unit_codes_name_units() {
        for j in 0..10 {
            assert_eq!(Combo::from_seq_code(XPlus::unit_code(j)), Combo::unit(j as usize));
        }
    }
}
