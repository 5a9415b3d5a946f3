//! The threshold LPs, solved by row differencing and back-substitution.
//!
//! Rows are adversary days `N = N_l + i`, columns purchase days
//! `t = N_l + j`, `i, j = 1..n` with `n = T - N_l`. A cell holds the group's
//! cost when the policy buys on day `t` and everybody leaves after day `N`:
//!
//! ```text
//! j <= i:  D + H + k(j - 1)      (rented until t, then bought)
//! j >  i:  D + k i               (left before t)
//! ```
//!
//! with `D = S + k N_l` the rent paid before the state's first day and
//! `H = k T` the purchase price. The right-hand side of row `i` is
//! `c (D + k i)`. Subtracting each row from the next, then each row's
//! successor from it, leaves an upper-triangular system with diagonal
//! `(D + H, H, ..., H)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::deterministic::{threshold_ov, threshold_sd};
use crate::error::{Error, Result};
use crate::model::{Cost, GroupState, ProblemParams};

/// Largest system the elimination will build.
pub const MAX_LP_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpKind {
    Overall,
    StateDependent,
    /// One agent's own cost against its own benchmark.
    IndividualRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSystem {
    pub matrix: Vec<Vec<BigRational>>,
    /// Row `i` reads `matrix[i] . p = c * rhs[i]`.
    pub rhs: Vec<BigRational>,
    pub first_day: u32,
    pub d: BigRational,
    pub h: BigRational,
    pub k: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub first_day: u32,
    pub masses: Vec<f64>,
    pub ratio: f64,
    #[serde(skip)]
    pub exact_masses: Vec<BigRational>,
    #[serde(skip)]
    pub exact_ratio: BigRational,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn big_cost(c: &Cost) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl LpSystem {
    fn build(n: usize, d: BigRational, h: BigRational, k: BigRational, first_day: u32) -> Result<Self> {
        if n == 0 || n > MAX_LP_SIZE {
            return Err(Error::InvalidArgument(format!(
                "LP size {n} outside 1..={MAX_LP_SIZE}"
            )));
        }
        let mut matrix = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 1..=n {
            let bi = &d + &k * big(i as i64);
            let row = (1..=n)
                .map(|j| {
                    if j <= i {
                        &d + &h + &k * big(j as i64 - 1)
                    } else {
                        bi.clone()
                    }
                })
                .collect();
            matrix.push(row);
            rhs.push(bi);
        }
        Ok(Self {
            matrix,
            rhs,
            first_day,
            d,
            h,
            k,
        })
    }

    /// The state-free system for `M` identical agents (`G/M` integral).
    pub fn homogeneous(params: &ProblemParams) -> Result<Self> {
        let (g, m) = (params.group_cost(), params.num_agents() as i64);
        if g % m != 0 {
            return Err(Error::NonIntegerThreshold(g as f64 / m as f64));
        }
        Self::build((g / m) as usize, big(0), big(g), big(m), 1)
    }

    pub fn for_state(params: &ProblemParams, state: &GroupState, kind: LpKind) -> Result<Self> {
        let t = match kind {
            LpKind::Overall => threshold_ov(params, state),
            LpKind::StateDependent | LpKind::IndividualRational => threshold_sd(params, state),
        };
        if !t.is_integer() {
            return Err(Error::NonIntegerThreshold(crate::model::cost_to_f64(&t)));
        }
        let nl = i64::from(state.last_revealed());
        let ti = t.to_integer();
        if ti <= nl {
            return Err(Error::DegenerateThreshold {
                threshold: ti as f64,
                last_revealed: state.last_revealed(),
            });
        }
        let n = (ti - nl) as usize;
        let first = state.last_revealed() + 1;
        match kind {
            LpKind::IndividualRational => Self::build(n, big(nl), big_cost(&t), big(1), first),
            _ => {
                let k = state.remaining(params) as i64;
                let d = big(state.paid_cost() + k * nl);
                Self::build(n, d, big(k) * big_cost(&t), big(k), first)
            }
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// The two differencing passes, in place.
    pub fn difference(&mut self) {
        let n = self.size();
        // pass 1, bottom-up so that every row is reduced by its original predecessor
        for i in (1..n).rev() {
            let (head, tail) = self.matrix.split_at_mut(i);
            for (x, y) in tail[0].iter_mut().zip(&head[i - 1]) {
                *x -= y;
            }
            let prev = self.rhs[i - 1].clone();
            self.rhs[i] -= prev;
        }
        // pass 2, top-down against the already-differenced successor
        for i in 0..n.saturating_sub(1) {
            let (head, tail) = self.matrix.split_at_mut(i + 1);
            for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                *x -= y;
            }
            let next = self.rhs[i + 1].clone();
            self.rhs[i] -= next;
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(Zero::is_zero) && !row[i].is_zero())
    }

    /// Differences, back-substitutes with `c = 1` and rescales so that the
    /// masses sum to one.
    pub fn solve(&self) -> Result<LpSolution> {
        let mut sys = self.clone();
        sys.difference();
        if !sys.is_upper_triangular() {
            return Err(Error::ConditionViolated(
                "differenced system is not upper triangular".into(),
            ));
        }
        let n = sys.size();
        let mut p = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = sys.rhs[i].clone();
            for (a, x) in sys.matrix[i][i + 1..].iter().zip(&p[i + 1..]) {
                acc -= a * x;
            }
            p[i] = acc / &sys.matrix[i][i];
        }
        let total: BigRational = p.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
        if total.is_zero() {
            return Err(Error::ConditionViolated("masses sum to zero".into()));
        }
        let c = BigRational::one() / &total;
        for v in &mut p {
            *v = &*v * &c;
        }
        Ok(LpSolution {
            first_day: self.first_day,
            masses: p.iter().map(to_f64).collect(),
            ratio: to_f64(&c),
            exact_masses: p,
            exact_ratio: c,
        })
    }

    /// Matrix rows followed by the right-hand-side coefficient of `c`.
    pub fn to_csv(&self) -> String {
        let n = self.size();
        let mut out = String::from("N");
        for j in 0..n {
            out.push_str(&format!(",t{}", self.first_day as usize + j));
        }
        out.push_str(",rhs_c\n");
        for (i, row) in self.matrix.iter().enumerate() {
            out.push_str(&(self.first_day as usize + i).to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push(',');
            out.push_str(&self.rhs[i].to_string());
            out.push('\n');
        }
        out
    }
}

pub fn solve_homogeneous_lp(params: &ProblemParams) -> Result<LpSolution> {
    LpSystem::homogeneous(params)?.solve()
}

pub fn solve_state_lp(params: &ProblemParams, state: &GroupState, kind: LpKind) -> Result<LpSolution> {
    LpSystem::for_state(params, state, kind)?.solve()
}
