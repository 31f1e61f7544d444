//! Cooling, temperature and mean of games.
//!
//! For a game `G` and a tax `t >= 0`, the cooled scores are exact
//! piecewise-linear functions of `t`. Before the temperature `sigma`, Left's
//! score is the best over Left options of the option's cooled Right score
//! minus `t`, and symmetrically for Right; from `sigma` on both are frozen at
//! the mean. Dominated options never decide either envelope, so trees need
//! not be simplified first.

mod pl;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::cgt::{GameId, GameStore};
use crate::{Error, Result, Scalar};

pub use pl::{PLFunction, Piece, PieceRecord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thermograph<S> {
    /// `t -> Ls(G_t)`.
    pub ls: PLFunction<S>,
    /// `t -> Rs(G_t)`.
    pub rs: PLFunction<S>,
    pub sigma: S,
    /// The frozen value, equal to the mean.
    pub mast: S,
}

impl<S: Scalar> Thermograph<S> {
    pub fn number(value: S) -> Self {
        Thermograph {
            ls: PLFunction::constant(value.clone()),
            rs: PLFunction::constant(value.clone()),
            sigma: S::zero(),
            mast: value,
        }
    }

    pub fn mean(&self) -> &S {
        &self.mast
    }

    /// All breakpoints of both trajectories and `sigma`, sorted.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut ts: Vec<S> = std::iter::once(S::zero())
            .chain(self.ls.breakpoints().cloned())
            .chain(self.rs.breakpoints().cloned())
            .chain(std::iter::once(self.sigma.clone()))
            .collect();
        ts.sort();
        ts.dedup();
        ts
    }

    pub fn to_record(&self) -> ThermographRecord {
        ThermographRecord {
            sigma: self.sigma.to_string(),
            mast: self.mast.to_string(),
            ls: self.ls.records(),
            rs: self.rs.records(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("records always serialize")
    }

    /// `t,ls,rs` rows at every breakpoint.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,ls,rs\n");
        for t in self.breakpoints() {
            out.push_str(&format!("{},{},{}\n", t, self.ls.eval(&t), self.rs.eval(&t)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThermographRecord {
    pub sigma: String,
    pub mast: String,
    pub ls: Vec<PieceRecord>,
    pub rs: Vec<PieceRecord>,
}

/// Thermograph of `g`. Fails with [`Error::NotMilnor`] on a zugzwang
/// subgame.
pub fn thermograph<S: Scalar>(store: &GameStore<S>, g: GameId) -> Result<Thermograph<S>> {
    let mut memo = FxHashMap::default();
    cool(store, g, &mut memo)
}

fn cool<S: Scalar>(
    store: &GameStore<S>,
    g: GameId,
    memo: &mut FxHashMap<GameId, Thermograph<S>>,
) -> Result<Thermograph<S>> {
    if let Some(t) = memo.get(&g) {
        return Ok(t.clone());
    }
    let result = match store.as_number(g) {
        Some(v) => Thermograph::number(v.clone()),
        None => {
            let (left, right) = store.options(g);
            let one = S::one();
            let zero = S::zero();
            let mut upper: Option<PLFunction<S>> = None;
            for &l in left {
                let f = cool(store, l, memo)?.rs.add_linear(&zero, &-one.clone());
                upper = Some(match upper {
                    None => f,
                    Some(u) => u.max(&f),
                });
            }
            let mut lower: Option<PLFunction<S>> = None;
            for &r in right {
                let f = cool(store, r, memo)?.ls.add_linear(&zero, &one);
                lower = Some(match lower {
                    None => f,
                    Some(u) => u.min(&f),
                });
            }
            let upper = upper.expect("nodes have left options");
            let lower = lower.expect("nodes have right options");
            let gap = upper.sub(&lower);
            if gap.eval(&zero).is_negative() {
                return Err(Error::NotMilnor(format!(
                    "cannot cool a zugzwang game ({} < {})",
                    upper.eval(&zero),
                    lower.eval(&zero)
                )));
            }
            let sigma = gap.first_zero().expect("the gap eventually falls with slope -2");
            let mast = upper.eval(&sigma);
            Thermograph {
                ls: upper.freeze_at(&sigma),
                rs: lower.freeze_at(&sigma),
                sigma,
                mast,
            }
        }
    };
    memo.insert(g, result.clone());
    Ok(result)
}

pub fn mean<S: Scalar>(store: &GameStore<S>, g: GameId) -> Result<S> {
    Ok(thermograph(store, g)?.mast)
}

/// `(Ls(nG)/n, Rs(nG)/n)`.
pub fn mean_by_repetition<S: Scalar>(store: &mut GameStore<S>, g: GameId, n: usize) -> Result<(S, S)> {
    if n == 0 {
        return Err(Error::InvalidArgument("repetition count must be positive".into()));
    }
    let sum = store.multiple(g, n);
    let (ls, rs) = store.scores(sum);
    let k = S::from_int(n as i64);
    Ok((ls / k.clone(), rs / k))
}

/// One named inequality and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub holds: bool,
}

fn check(label: impl Into<String>, holds: bool) -> Check {
    Check {
        label: label.into(),
        holds,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoolingReport {
    pub t: String,
    pub checks: Vec<Check>,
}

impl CoolingReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `0 <= Ls(G) - Ls(G_t) <= t` and `-t <= Rs(G) - Rs(G_t) <= 0`.
pub fn cooled_score_bounds_check<S: Scalar>(store: &GameStore<S>, g: GameId, t: &S) -> Result<CoolingReport> {
    if t.is_negative() {
        return Err(Error::InvalidArgument("cooling tax must be nonnegative".into()));
    }
    let th = thermograph(store, g)?;
    let zero = S::zero();
    let dl = th.ls.eval(&zero) - th.ls.eval(t);
    let dr = th.rs.eval(&zero) - th.rs.eval(t);
    Ok(CoolingReport {
        t: t.to_string(),
        checks: vec![
            check(format!("0 <= Ls(G)-Ls(G_t) = {dl} <= t"), !dl.is_negative() && dl <= *t),
            check(
                format!("-t <= Rs(G)-Rs(G_t) = {dr} <= 0"),
                !dr.is_positive() && dr >= -t.clone(),
            ),
        ],
    })
}

/// `m - sigma <= Rs <= m <= Ls <= m + sigma`.
pub fn mean_sandwich<S: Scalar>(th: &Thermograph<S>) -> Vec<Check> {
    let zero = S::zero();
    let (ls, rs) = (th.ls.eval(&zero), th.rs.eval(&zero));
    let (m, s) = (th.mast.clone(), th.sigma.clone());
    vec![
        check("m - sigma <= Rs", m.clone() - s.clone() <= rs),
        check("Rs <= m", rs <= m),
        check("m <= Ls", m <= ls),
        check("Ls <= m + sigma", ls <= m + s),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumTemperatureReport {
    pub sigma_g: String,
    pub sigma_h: String,
    pub sigma_sum: String,
    pub mean_g: String,
    pub mean_h: String,
    pub mean_sum: String,
    pub checks: Vec<Check>,
}

impl SumTemperatureReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Temperature and mean of `g`, `h` and `g + h`: the temperature of the
/// sum is at most the larger one and equals it when the other is strictly
/// smaller, means add up, and the sum's scores lie within the larger
/// temperature of the total mean.
pub fn sum_temperature_check<S: Scalar>(
    store: &mut GameStore<S>,
    g: GameId,
    h: GameId,
) -> Result<SumTemperatureReport> {
    let tg = thermograph(store, g)?;
    let th = thermograph(store, h)?;
    let gh = store.sum(g, h);
    let ts = thermograph(store, gh)?;
    let (ls, rs) = store.scores(gh);
    let top = tg.sigma.clone().max(th.sigma.clone());
    let total = tg.mast.clone() + th.mast.clone();
    let mut checks = vec![check("sigma(G+H) <= max(sigma(G), sigma(H))", ts.sigma <= top)];
    if th.sigma < tg.sigma {
        checks.push(check(
            "sigma(H) < sigma(G) implies sigma(G+H) = sigma(G)",
            ts.sigma == tg.sigma,
        ));
    }
    if tg.sigma < th.sigma {
        checks.push(check(
            "sigma(G) < sigma(H) implies sigma(G+H) = sigma(H)",
            ts.sigma == th.sigma,
        ));
    }
    checks.push(check("m(G+H) = m(G) + m(H)", ts.mast == total));
    checks.push(check("m - sigma <= Rs(G+H)", total.clone() - top.clone() <= rs));
    checks.push(check("Rs(G+H) <= m", rs <= total));
    checks.push(check("m <= Ls(G+H)", total <= ls));
    checks.push(check("Ls(G+H) <= m + sigma", ls <= total.clone() + top));
    Ok(SumTemperatureReport {
        sigma_g: tg.sigma.to_string(),
        sigma_h: th.sigma.to_string(),
        sigma_sum: ts.sigma.to_string(),
        mean_g: tg.mast.to_string(),
        mean_h: th.mast.to_string(),
        mean_sum: ts.mast.to_string(),
        checks,
    })
}
