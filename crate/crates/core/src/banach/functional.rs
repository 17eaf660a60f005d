//! Bounded linear functionals and names of partial functionals on closed
//! subspaces.

use std::fmt;
use std::sync::Arc;

use super::{BanachName, CPoint, Combo};
use crate::hyperspace::ClosedPlus;
use crate::reals::{CReal, Rational};

type PointFn = Arc<dyn Fn(&CPoint) -> CReal + Send + Sync>;
type ComboFn = Arc<dyn Fn(&Combo) -> Rational + Send + Sync>;

/// A functional on points; `combo`, when present, evaluates rational
/// combinations exactly.
#[derive(Clone)]
pub struct Functional {
    pub name: String,
    eval: PointFn,
    combo: Option<ComboFn>,
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional({})", self.name)
    }
}

impl Functional {
    pub fn new(name: impl Into<String>, eval: impl Fn(&CPoint) -> CReal + Send + Sync + 'static) -> Self {
        Functional { name: name.into(), eval: Arc::new(eval), combo: None }
    }

    /// A functional given on rational combinations with |f(c)| ≤ 2^lip·‖c‖,
    /// read on points through representative k + lip + 1.
    pub fn from_combo(name: impl Into<String>, f: impl Fn(&Combo) -> Rational + Send + Sync + 'static, lip: u32) -> Self {
        let f: ComboFn = Arc::new(f);
        let g = Arc::clone(&f);
        Functional {
            name: name.into(),
            eval: Arc::new(move |x: &CPoint| {
                let (x, g) = (x.clone(), Arc::clone(&g));
                CReal::from_approx(move |k| g(&x.rep((k + lip + 1) as u64)))
            }),
            combo: Some(f),
        }
    }

    /// c ↦ ∑ w_i c_i.
    pub fn linear(name: impl Into<String>, weights: Vec<Rational>, lip: u32) -> Self {
        Functional::from_combo(name, move |c: &Combo| weights.iter().enumerate().map(|(i, a)| a * c.coeff(i)).sum(), lip)
    }

    /// A functional with a separate exact rational path.
    pub fn with_combo(mut self, f: impl Fn(&Combo) -> Rational + Send + Sync + 'static) -> Self {
        self.combo = Some(Arc::new(f));
        self
    }

    pub fn at(&self, x: &CPoint) -> CReal {
        (self.eval)(x)
    }

    pub fn at_combo(&self, c: &Combo) -> CReal {
        match &self.combo {
            Some(f) => CReal::exact(f(c)),
            None => self.at(&CPoint::constant(c.clone())),
        }
    }

    pub fn exact_on(&self, c: &Combo) -> Option<Rational> {
        self.combo.as_ref().map(|f| f(c))
    }
}

/// A partial functional: a closed subspace A ⊆ X named positively, a
/// functional f on A and a bound r ≥ ‖f‖.
#[derive(Clone)]
pub struct PFName {
    pub space: BanachName,
    pub subspace: ClosedPlus<BanachName>,
    pub func: Functional,
    pub norm_bound: Rational,
}
