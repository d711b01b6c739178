//! Rational points and local power-series expansions.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Form;
use crate::series::LaurentSeries;

/// Which affine coordinate (in the chart `z = 1`) is the uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `t = x - x0`, `y` is a power series in `t`; requires `F_y(p) != 0`.
    X,
    /// `t = y - y0`, `x` is a power series in `t`; requires `F_x(p) != 0`.
    Y,
}

/// A smooth affine rational point of the curve with its chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurvePoint<K: Field> {
    pub coords: [K::Elem; 3],
    pub chart: Chart,
}

impl<K: Field> CurvePoint<K> {
    pub fn x(&self) -> &K::Elem {
        &self.coords[0]
    }
    pub fn y(&self) -> &K::Elem {
        &self.coords[1]
    }

    pub fn display(&self, k: &K) -> String {
        format!("({}:{}:{})", k.format_elem(&self.coords[0]), k.format_elem(&self.coords[1]), k.format_elem(&self.coords[2]))
    }
}

impl<K: Field> fmt::Debug for CurvePoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurvePoint({:?}, {:?})", self.coords, self.chart)
    }
}

/// The branch of the curve at a point, parametrized by the chart uniformizer.
///
/// Holds the affine coordinates `x(t), y(t)` and `1/F_y` (chart `X`) or
/// `-1/F_x` (chart `Y`) on the branch, so that `dx/F_y = u(t) dt`.
#[derive(Clone, Debug)]
pub struct LocalExpansion<K: Field> {
    pub point: CurvePoint<K>,
    pub x: LaurentSeries<K>,
    pub y: LaurentSeries<K>,
    /// `u(t)` with `dx / F_y = u(t) dt`.
    pub differential: LaurentSeries<K>,
    pub precision: i64,
}

impl<K: Field> LocalExpansion<K> {
    pub fn new(f: &Form<K>, point: &CurvePoint<K>, precision: i64) -> Result<Self> {
        let k = f.field();
        let x0 = LaurentSeries::constant(k, point.coords[0].clone(), precision);
        let y0 = LaurentSeries::constant(k, point.coords[1].clone(), precision);
        let t = LaurentSeries::t(k, precision);
        let (solve_var, deriv) = match point.chart {
            Chart::X => (1, f.partial(1)),
            Chart::Y => (0, f.partial(0)),
        };
        let (mut x, mut y) = match point.chart {
            Chart::X => (x0.add(&t), y0),
            Chart::Y => (x0, y0.add(&t)),
        };
        // Newton iteration on the dependent coordinate; converges quadratically
        let mut converged = false;
        for _ in 0..64 {
            let g = eval_affine(f, &x, &y);
            if g.is_zero() {
                converged = true;
                break;
            }
            let gp = eval_affine(&deriv, &x, &y);
            let step = g.div(&gp).map_err(|_| Error::ChartFailure(point.display(k)))?;
            if solve_var == 1 {
                y = y.sub(&step).with_precision(precision);
            } else {
                x = x.sub(&step).with_precision(precision);
            }
        }
        if !converged {
            return Err(Error::ChartFailure(point.display(k)));
        }
        let differential = match point.chart {
            Chart::X => eval_affine(&f.partial(1), &x, &y).inv(),
            Chart::Y => eval_affine(&f.partial(0), &x, &y).inv().map(|s| s.scale(&k.from_i64(-1))),
        }
        .map_err(|_| Error::ChartFailure(point.display(k)))?;
        if differential.valuation() != Some(0) {
            return Err(Error::ChartFailure(point.display(k)));
        }
        Ok(LocalExpansion { point: point.clone(), x, y, differential, precision })
    }

    /// Local coefficient `q(t)` of the `m`-canonical form `A (dx/F_y)^m`.
    pub fn expand_form(&self, a: &Form<K>, m: u32) -> LaurentSeries<K> {
        let val = eval_affine(a, &self.x, &self.y);
        if m == 0 {
            return val;
        }
        val.mul(&self.differential.pow(m))
    }

    /// The restriction of a form (as a function in the chart `z = 1`).
    pub fn eval_form(&self, a: &Form<K>) -> LaurentSeries<K> {
        eval_affine(a, &self.x, &self.y)
    }

    /// Affine series `x(t)^a y(t)^b` for each exponent triple in `exps`.
    pub fn monomial_series(&self, exps: &[[u32; 3]]) -> Vec<LaurentSeries<K>> {
        let max = exps.iter().map(|e| e[0].max(e[1])).max().unwrap_or(0) as usize;
        let xp = powers(&self.x, max, self.precision);
        let yp = powers(&self.y, max, self.precision);
        exps.iter().map(|e| xp[e[0] as usize].mul(&yp[e[1] as usize])).collect()
    }
}

fn powers<K: Field>(s: &LaurentSeries<K>, max: usize, precision: i64) -> Vec<LaurentSeries<K>> {
    let k = s.field();
    let mut out = Vec::with_capacity(max + 1);
    out.push(LaurentSeries::constant(k, k.one(), precision));
    for i in 0..max {
        let next = out[i].mul(s);
        out.push(next);
    }
    out
}

/// `A(x(t), y(t), 1)` for power series `x, y`.
pub(crate) fn eval_affine<K: Field>(a: &Form<K>, x: &LaurentSeries<K>, y: &LaurentSeries<K>) -> LaurentSeries<K> {
    let k = a.field();
    let precision = x.precision().min(y.precision());
    let d = a.degree() as usize;
    let xp = powers(x, d, precision);
    let yp = powers(y, d, precision);
    let mut acc = LaurentSeries::zero(k, precision);
    for (e, c) in a.terms() {
        acc = acc.add(&xp[e[0] as usize].mul(&yp[e[1] as usize]).scale(c));
    }
    acc.with_precision(precision)
}
