//! Rational points of the hypersurface `S_f` and the explicit point-count
//! bounds used to rule out off-plane points for large q.
//!
//! Every point of the plane `X1 = X3, X2 = X4` lies on `S_f`; an affine zero
//! `(x1, x2, x3, x4)` off that plane is exactly a collinear pair
//! `(x1, x2), (x3, x4)` of `O_4(f)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::mvpoly::{HomogPoly5, SparsePoly};

/// Default largest q for affine point counting.
pub const COUNT_GUARD: u32 = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub q: u32,
    /// Degree of the form, `d + 1` for `S_f`.
    pub degree: u64,
    pub affine_count: u64,
    pub offplane_count: u64,
    pub plane_count: u64,
}

/// The affine chart `X0 = 1` of a form, grouped by the power of `x4`:
/// `F(1, x1, x2, x3, x4) = sum_e c_e(x1, x2, x3) x4^e`.
struct Chart {
    field: Field,
    /// Distinct exponents of each of x1..x4, with power tables `[k][x]`.
    powers: [Vec<Vec<Elem>>; 4],
    /// `(e1 idx, e2 idx, e3 idx, coefficient)` per x4-exponent slot.
    slots: Vec<Vec<(usize, usize, usize, Elem)>>,
    /// Table index of each slot's x4 exponent.
    slot_exp: Vec<usize>,
}

impl Chart {
    fn new(form: &HomogPoly5) -> Result<Self> {
        let field = form.field().clone();
        let affine = form.dehomogenize(0, Elem::ONE)?;
        let mut exps: [Vec<u32>; 4] = Default::default();
        for (e, _) in affine.terms() {
            for v in 0..4 {
                exps[v].push(e[v + 1]);
            }
        }
        for list in exps.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let find = |v: usize, e: u32| exps[v].binary_search(&e).expect("collected");
        let mut by_x4: BTreeMap<usize, Vec<(usize, usize, usize, Elem)>> = BTreeMap::new();
        for (e, c) in affine.terms() {
            by_x4
                .entry(find(3, e[4]))
                .or_default()
                .push((find(0, e[1]), find(1, e[2]), find(2, e[3]), c));
        }
        let powers = exps.clone().map(|list| {
            list.iter()
                .map(|&k| field.elements().map(|x| field.pow(x, k as u64)).collect())
                .collect()
        });
        let (slot_exp, slots) = by_x4.into_iter().unzip();
        Ok(Chart {
            field,
            powers,
            slots,
            slot_exp,
        })
    }

    /// Coefficients `c_e(x1, x2, x3)` in slot order.
    fn coefficients(&self, x1: Elem, x2: Elem, x3: Elem, out: &mut Vec<Elem>) {
        let f = &self.field;
        out.clear();
        for slot in &self.slots {
            let mut acc = Elem::ZERO;
            for &(a, b, c, coef) in slot {
                let m = f.mul(
                    f.mul(self.powers[0][a][x1.0 as usize], self.powers[1][b][x2.0 as usize]),
                    self.powers[2][c][x3.0 as usize],
                );
                acc = f.add(acc, f.mul(coef, m));
            }
            out.push(acc);
        }
    }

    fn value_at(&self, coeffs: &[Elem], x4: Elem) -> Elem {
        let f = &self.field;
        coeffs
            .iter()
            .zip(&self.slot_exp)
            .fold(Elem::ZERO, |acc, (&c, &k)| {
                f.add(acc, f.mul(c, self.powers[3][k][x4.0 as usize]))
            })
    }
}

fn guard(field: &Field, limit: u32) -> Result<()> {
    if field.q() > limit {
        return Err(Error::GuardExceeded {
            what: "affine point count",
            q: field.q() as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// Counts the zeros of `F(1, x1, x2, x3, x4)` in GF(q)^4, split by the
/// plane `x1 = x3, x2 = x4`.
pub fn count_affine(form: &HomogPoly5) -> Result<CountReport> {
    count_affine_with_guard(form, COUNT_GUARD)
}

pub fn count_affine_with_guard(form: &HomogPoly5, limit: u32) -> Result<CountReport> {
    let field = form.field();
    guard(field, limit)?;
    let chart = Chart::new(form)?;
    let (total, plane) = field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x1| {
            let mut coeffs = Vec::new();
            let (mut total, mut plane) = (0u64, 0u64);
            for x2 in field.elements() {
                for x3 in field.elements() {
                    chart.coefficients(x1, x2, x3, &mut coeffs);
                    for x4 in field.elements() {
                        if chart.value_at(&coeffs, x4).is_zero() {
                            total += 1;
                            if x1 == x3 && x2 == x4 {
                                plane += 1;
                            }
                        }
                    }
                }
            }
            (total, plane)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(CountReport {
        q: field.q(),
        degree: form.degree(),
        affine_count: total,
        offplane_count: total - plane,
        plane_count: plane,
    })
}

/// The lexicographically smallest affine zero `(x1, x2, x3, x4)` off the
/// plane `x1 = x3, x2 = x4`.
pub fn find_offplane_witness(form: &HomogPoly5) -> Result<Option<[Elem; 4]>> {
    find_offplane_witness_with_guard(form, COUNT_GUARD)
}

pub fn find_offplane_witness_with_guard(form: &HomogPoly5, limit: u32) -> Result<Option<[Elem; 4]>> {
    let field = form.field();
    guard(field, limit)?;
    let chart = Chart::new(form)?;
    Ok(field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .find_map_first(|x1| {
            let mut coeffs = Vec::new();
            for x2 in field.elements() {
                for x3 in field.elements() {
                    chart.coefficients(x1, x2, x3, &mut coeffs);
                    for x4 in field.elements() {
                        if (x1 != x3 || x2 != x4) && chart.value_at(&coeffs, x4).is_zero() {
                            return Some([x1, x2, x3, x4]);
                        }
                    }
                }
            }
            None
        }))
}

/// `F` restricted to the coordinate hyperplane `X_position = value`.
pub fn hyperplane_section(form: &HomogPoly5, position: usize, value: Elem) -> Result<SparsePoly<5>> {
    form.as_poly().substitute(position, value)
}

fn four_significant<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_significant(*x, 4))
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    // Going through decimal text gives the double nearest to the rounded
    // decimal, which scaling by powers of ten does not.
    let prec = (digits - 1).max(0) as usize;
    format!("{x:.prec$e}").parse().expect("formatted float parses")
}

/// The explicit point-count window for an absolutely irreducible
/// hypersurface of degree `δ` in affine `r + 1` space:
/// `|N - q^r| <= (δ-1)(δ-2) q^(r-1/2) + 5 δ^(13/3) q^(r-1)`, valid for
/// `q > 2(r+1)δ^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub r: u32,
    pub degree: u64,
    pub q: u64,
    pub valid: bool,
    #[serde(serialize_with = "four_significant")]
    pub error_term: f64,
    #[serde(serialize_with = "four_significant")]
    pub window_lo: f64,
    #[serde(serialize_with = "four_significant")]
    pub window_hi: f64,
    #[serde(serialize_with = "four_significant")]
    pub threshold_main: f64,
    pub threshold_cleared: bool,
}

impl BoundReport {
    pub fn contains(&self, count: u64) -> bool {
        let c = count as f64;
        self.window_lo <= c && c <= self.window_hi
    }
}

/// Default ambient dimension parameter for `S_f`.
pub const DEFAULT_R: u32 = 3;

pub fn cm_window(r: u32, d: u32, q: u64) -> BoundReport {
    let delta = d as u64 + 1;
    let df = delta as f64;
    let qf = q as f64;
    let rf = r as f64;
    let error_term = (df - 1.0) * (df - 2.0) * qf.powf(rf - 0.5) + 5.0 * df.powf(13.0 / 3.0) * qf.powf(rf - 1.0);
    let centre = qf.powf(rf);
    let valid = (q as u128) > 2 * (r as u128 + 1) * (delta as u128).pow(2);
    BoundReport {
        r,
        degree: delta,
        q,
        valid,
        error_term,
        window_lo: centre - error_term,
        window_hi: centre + error_term,
        threshold_main: threshold_main(d),
        threshold_cleared: threshold_cleared(d, q),
    }
}

/// `6.3 (d+1)^(13/3)`, the field size above which off-plane points of `S_f`
/// are forced for non-classical `f` of degree `d`.
pub fn threshold_main(d: u32) -> f64 {
    6.3 * (d as f64 + 1.0).powf(13.0 / 3.0)
}

/// Exact test of `q > 6.3 (d+1)^(13/3)`, i.e. `1000 q^3 > 250047 (d+1)^13`.
pub fn threshold_cleared(d: u32, q: u64) -> bool {
    let lhs = (q as u128)
        .checked_pow(3)
        .and_then(|v| v.checked_mul(1000));
    let rhs = (d as u128 + 1)
        .checked_pow(13)
        .and_then(|v| v.checked_mul(250_047));
    match (lhs, rhs) {
        (Some(l), Some(r)) => l > r,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (None, None) => q as f64 > threshold_main(d),
    }
}
