//! Exact counts of IIA social welfare functions.
//!
//! `q(s, v)` counts all IIA functions, `r(s, v)` those that also satisfy the
//! weak Pareto principle and `p(s, v)` those satisfying citizens'
//! sovereignty. Every count follows from the bijection with canonical
//! clerical-dictatorial descriptions: pick a cleric, then independently a
//! ruling for each of its classes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::weak_orders::ordered_bell;

/// Largest voter count accepted by [`CountQuery::validate`]. `3^(3^v)` has
/// about 1.7 million digits at this bound.
pub const MAX_COUNT_VOTERS: usize = 12;
/// Largest number of alternatives accepted by [`CountQuery::validate`].
pub const MAX_COUNT_STATES: usize = 16;

fn memo() -> &'static Mutex<HashMap<(usize, usize), BigUint>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, usize), BigUint>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `3^(3^v)`: all pair tables over `v` voters.
pub fn pair_functions(v: usize) -> BigUint {
    BigUint::from(3u32).pow(3u32.pow(v as u32))
}

/// Rulings available to a cleric class of size `k` with `v` voters.
fn class_rulings(k: usize, v: usize) -> BigUint {
    match k {
        0 | 1 => BigUint::one(),
        2 => pair_functions(v) - 2u32,
        _ if v == 0 => BigUint::one(),
        _ => BigUint::one() + BigUint::from(2 * v) * q(k, v - 1),
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of IIA functions on `s` alternatives and `v` voters.
///
/// Sums, over every ordered partition of the alternatives, the product of
/// the per-class ruling counts; grouping partitions by the size of their
/// least class gives `a_n = Σ_k C(n, k)·h_k·a_{n−k}`.
pub fn q(s: usize, v: usize) -> BigUint {
    match s {
        0 | 1 => return BigUint::one(),
        2 => return pair_functions(v),
        _ => {}
    }
    if let Some(hit) = memo().lock().expect("count memo poisoned").get(&(s, v)) {
        return hit.clone();
    }
    // Computed outside the lock: class_rulings re-enters q.
    let h: Vec<BigUint> = (0..=s).map(|k| class_rulings(k, v)).collect();
    let mut a = vec![BigUint::one()];
    for n in 1..=s {
        let mut total = BigUint::zero();
        for k in 1..=n {
            total += binomial(n, k) * &h[k] * &a[n - k];
        }
        a.push(total);
    }
    let value = a.pop().expect("nonempty");
    memo().lock().expect("count memo poisoned").insert((s, v), value.clone());
    value
}

/// Number of IIA functions satisfying the weak Pareto principle.
///
/// With no voters the principle is vacuous. For `s ≥ 3` such a function has
/// a single cleric class ruled by a verbatim dictator. For `s = 2` every
/// pair table qualifies as long as both unanimous strict inputs map to
/// themselves.
pub fn r(s: usize, v: usize) -> Result<BigUint> {
    if s < 2 {
        return Err(Error::StatesOutOfRange(s));
    }
    Ok(match (s, v) {
        (_, 0) => q(s, 0),
        (2, _) => BigUint::from(3u32).pow(3u32.pow(v as u32) - 2),
        _ => BigUint::from(v) * q(s, v - 1),
    })
}

/// Number of IIA functions satisfying citizens' sovereignty.
pub fn p(s: usize, v: usize) -> Result<BigUint> {
    if s < 2 {
        return Err(Error::StatesOutOfRange(s));
    }
    Ok(match (s, v) {
        (2, _) => pair_functions(v) - 2u32,
        (_, 0) => BigUint::one(),
        _ => BigUint::one() + BigUint::from(2 * v) * q(s, v - 1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountFamily {
    Q,
    R,
    P,
    Bell,
}

impl FromStr for CountFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(CountFamily::Q),
            "r" => Ok(CountFamily::R),
            "p" => Ok(CountFamily::P),
            "bell" => Ok(CountFamily::Bell),
            other => Err(Error::Parse(format!("unknown count family {other:?}"))),
        }
    }
}

impl fmt::Display for CountFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountFamily::Q => "q",
            CountFamily::R => "r",
            CountFamily::P => "p",
            CountFamily::Bell => "bell",
        })
    }
}

/// A counting request. For [`CountFamily::Bell`] `states` is the number of
/// elements and `voters` is ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountQuery {
    pub family: CountFamily,
    pub states: usize,
    pub voters: usize,
}

impl CountQuery {
    /// Rejects degenerate arguments ([`Error::StatesOutOfRange`]) and
    /// arguments whose answer would be unreasonably large
    /// ([`Error::Infeasible`]).
    pub fn validate(&self) -> Result<()> {
        let min_states = match self.family {
            CountFamily::Q => 1,
            CountFamily::R | CountFamily::P => 2,
            CountFamily::Bell => 0,
        };
        if self.states < min_states {
            return Err(Error::StatesOutOfRange(self.states));
        }
        if self.states > MAX_COUNT_STATES {
            return Err(Error::Infeasible(format!("at most {MAX_COUNT_STATES} alternatives")));
        }
        if self.family != CountFamily::Bell && self.voters > MAX_COUNT_VOTERS {
            return Err(Error::Infeasible(format!("at most {MAX_COUNT_VOTERS} voters")));
        }
        Ok(())
    }

    pub fn eval(&self) -> Result<BigUint> {
        self.validate()?;
        match self.family {
            CountFamily::Q => Ok(q(self.states, self.voters)),
            CountFamily::R => r(self.states, self.voters),
            CountFamily::P => p(self.states, self.voters),
            CountFamily::Bell => Ok(ordered_bell(self.states)),
        }
    }
}
