//! Built-in pseudo-norms.

use num_traits::{One, Signed, Zero};

use super::{BanachName, Combo, PseudoNorm};
use crate::kernel::{tuple, Seq, SeqCode};
use crate::reals::{CReal, RatEnum, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Max,
    Sum,
}

/// ‖c‖ = |M·c| in the max or sum norm of ℚ^d, where column i of M is the
/// image of generator i; generators beyond the columns are pseudo-null.
#[derive(Clone, Debug)]
pub struct FiniteNorm {
    pub kind: NormKind,
    pub columns: Vec<Vec<Rational>>,
    pub dim: usize,
}

impl FiniteNorm {
    pub fn new(kind: NormKind, columns: Vec<Vec<Rational>>) -> Self {
        let dim = columns.iter().map(Vec::len).max().unwrap_or(0);
        FiniteNorm { kind, columns, dim }
    }

    pub fn image(&self, c: &Combo) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, col) in self.columns.iter().enumerate() {
            let a = c.coeff(i);
            if a.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(col) {
                *o += &a * m;
            }
        }
        out
    }

    pub fn exact(&self, c: &Combo) -> Rational {
        let v = self.image(c);
        match self.kind {
            NormKind::Max => v.iter().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a }),
            NormKind::Sum => v.iter().map(|x| x.abs()).sum(),
        }
    }
}

impl PseudoNorm for FiniteNorm {
    fn name(&self) -> String {
        let k = match self.kind {
            NormKind::Max => "max",
            NormKind::Sum => "sum",
        };
        format!("{k}[{}x{}]", self.dim, self.columns.len())
    }

    fn eval(&self, c: &Combo) -> CReal {
        CReal::exact(self.exact(c))
    }

    fn coords(&self, c: &Combo) -> Option<Vec<Rational>> {
        Some(self.image(c))
    }

    fn coord_lower(&self, _support: usize) -> Option<Rational> {
        Some(Rational::one())
    }
}

/// max(|c_0|, |c_1|); every other generator is pseudo-null.
pub fn two_generator_max() -> FiniteNorm {
    let one = Rational::one;
    FiniteNorm::new(NormKind::Max, vec![vec![one(), Rational::zero()], vec![Rational::zero(), one()]])
}

/// A norm seen only through its values.
pub struct Opaque<N>(pub N);

impl<N: PseudoNorm> PseudoNorm for Opaque<N> {
    fn name(&self) -> String {
        format!("opaque({})", self.0.name())
    }

    fn eval(&self, c: &Combo) -> CReal {
        self.0.eval(c)
    }
}

/// A pseudo-norm read back from an enumeration of sub-basic facts
/// ⟨i, s, t, j⟩: ‖c_s‖ is bracketed by facts ⟨i, s, ⟨⟩, j⟩.
pub struct FactNorm {
    pub facts: Seq,
    pub search: usize,
}

impl FactNorm {
    pub fn from_space(x: &BanachName, search: usize) -> Self {
        FactNorm { facts: x.facts(), search }
    }

    /// The narrowest bracket [a_ℚ(i), a_ℚ(j)] around ‖c‖ among the first
    /// `search` facts.
    pub fn bracket(&self, c: &Combo) -> Option<(Rational, Rational)> {
        let s = SeqCode::encode(&c.to_code()?).ok()?;
        let mut best: Option<(Rational, Rational)> = None;
        for code in self.facts.prefix(self.search) {
            let f = crate::kernel::untuple(code, 4);
            if f[1] != s || f[2] != 0 {
                continue;
            }
            let (lo, hi) = (RatEnum::get(f[0]), RatEnum::get(f[3]));
            if best.as_ref().is_none_or(|(a, b)| hi.clone() - lo.clone() < b - a) {
                best = Some((lo, hi));
            }
        }
        best
    }

    /// Code of the fact bracketing d(a_e(s), a_e(t)) by RatEnum indices i, j.
    pub fn fact_code(i: u64, s: u64, t: u64, j: u64) -> Option<u64> {
        tuple(&[i, s, t, j])
    }
}

impl PseudoNorm for FactNorm {
    fn name(&self) -> String {
        "facts".into()
    }

    /// Only the coarse precision a fact bracket supports is available:
    /// approx(k) is the bracket midpoint and assumes width ≤ 2^{-k+1}.
    fn eval(&self, c: &Combo) -> CReal {
        let b = self.bracket(c);
        CReal::from_approx(move |_| {
            let (lo, hi) = b.clone().expect("no bracketing fact within the search budget");
            (lo + hi) / Rational::from_integer(2.into())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::{int, rat};

    #[test]
    fn finite_norms() {
        let n = FiniteNorm::new(NormKind::Sum, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]]);
        let c = Combo::new(vec![int(1), int(-2), rat(1, 2)]);
        assert_eq!(n.image(&c), vec![rat(3, 2), rat(-3, 2)]);
        assert_eq!(n.exact(&c), int(3));
        let m = two_generator_max();
        assert_eq!(m.exact(&Combo::new(vec![int(1), int(-3), int(7)])), int(3));
        assert!(m.exact(&Combo::unit(4)).is_zero());
    }

    #[test]
    fn facts_round_trip() {
        let x = BanachName::new(two_generator_max());
        let f = FactNorm::from_space(&x, 12000);
        // ‖e(0)‖ = 1 lies in a listed bracket of width at most 2.
        let (lo, hi) = f.bracket(&Combo::unit(0)).expect("bracket");
        assert!(lo < int(1) && int(1) < hi && &hi - &lo <= int(2));
        let approx = f.eval(&Combo::unit(0)).approx(0);
        assert!((approx - int(1)).abs() <= int(1));
    }
}
