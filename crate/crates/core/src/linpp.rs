//! Linearized `f(x, y) = sum a_i x^(p^i) + sum b_j y^(p^j)`.
//!
//! For such `f` the collinearity condition of `O_4(f)` only depends on the
//! differences `M = x1 - x2`, `L = y1 - y2`:
//! `L^2 + sum a_i M^(p^i + 1) + M sum b_j L^(p^j) = 0`. Along the line
//! `(L, M) = (l0 x, m0 x)` the left side is `x * psi(x)` with `psi` a
//! linearized polynomial, so `O_4(f)` is an ovoid iff every `psi` is a
//! permutation polynomial.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::mvpoly::BivariatePoly;

/// Why a polynomial is not of linearized shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotLinearized {
    /// A monomial `x^i y^j` that is neither `x^(p^k)` nor `y^(p^k)`.
    Monomial(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPair {
    field: Field,
    a: BTreeMap<u32, Elem>,
    b: BTreeMap<u32, Elem>,
}

fn p_log(p: u32, mut e: u32) -> Option<u32> {
    let mut k = 0;
    while e > 1 {
        if e % p != 0 {
            return None;
        }
        e /= p;
        k += 1;
    }
    (e == 1).then_some(k)
}

fn collect(field: &Field, entries: &[(u32, Elem)]) -> Result<BTreeMap<u32, Elem>> {
    let mut out = BTreeMap::new();
    for &(k, c) in entries {
        if k >= field.h() {
            return Err(Error::ExponentOverflow);
        }
        if !field.contains(c) {
            return Err(Error::FieldMismatch);
        }
        let slot = out.entry(k).or_insert(Elem::ZERO);
        *slot = field.add(*slot, c);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

impl LinearizedPair {
    /// `a` and `b` hold `(k, coefficient)` for the exponents `p^k`, `k < h`.
    pub fn new(field: &Field, a: &[(u32, Elem)], b: &[(u32, Elem)]) -> Result<Self> {
        Ok(LinearizedPair {
            field: field.clone(),
            a: collect(field, a)?,
            b: collect(field, b)?,
        })
    }

    /// Splits `f` into its x- and y-parts. Exponents `p^k` with `k >= h`
    /// are folded to `k mod h`, which gives the same function.
    pub fn from_bivariate(f: &BivariatePoly) -> std::result::Result<Self, NotLinearized> {
        let field = f.field();
        let (p, h) = (field.p(), field.h());
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, j, c) in f.terms() {
            match (i, j) {
                (i, 0) if i > 0 => match p_log(p, i) {
                    Some(k) => a.push((k % h, c)),
                    None => return Err(NotLinearized::Monomial(i, j)),
                },
                (0, j) if j > 0 => match p_log(p, j) {
                    Some(k) => b.push((k % h, c)),
                    None => return Err(NotLinearized::Monomial(i, j)),
                },
                _ => return Err(NotLinearized::Monomial(i, j)),
            }
        }
        Ok(LinearizedPair::new(field, &a, &b).expect("indices reduced mod h"))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &BTreeMap<u32, Elem> {
        &self.a
    }

    pub fn b(&self) -> &BTreeMap<u32, Elem> {
        &self.b
    }

    /// Both parts present, as in the general setting; elliptic and Kantor
    /// pairs have no y-part.
    pub fn is_strict(&self) -> bool {
        !self.a.is_empty() && !self.b.is_empty()
    }

    pub fn to_bivariate(&self) -> BivariatePoly {
        let p = self.field.p();
        let terms: Vec<(u32, u32, Elem)> = self
            .a
            .iter()
            .map(|(&k, &c)| (p.pow(k), 0, c))
            .chain(self.b.iter().map(|(&k, &c)| (0, p.pow(k), c)))
            .collect();
        BivariatePoly::from_terms(&self.field, &terms)
    }

    /// `L^2 + sum a_i M^(p^i + 1) + M sum b_j L^(p^j)`.
    pub fn lm_form(&self, l: Elem, m: Elem) -> Elem {
        let f = &self.field;
        let mut acc = f.square(l);
        for (&i, &c) in &self.a {
            acc = f.add(acc, f.mul(c, f.mul(f.frobenius(m, i), m)));
        }
        let mut inner = Elem::ZERO;
        for (&j, &c) in &self.b {
            inner = f.add(inner, f.mul(c, f.frobenius(l, j)));
        }
        f.add(acc, f.mul(m, inner))
    }

    /// Whether `(0, 0)` is the only zero of the L/M form.
    pub fn lm_only_trivial_zero(&self) -> bool {
        let f = &self.field;
        let q = f.q();
        (1..(q as u64) * (q as u64))
            .into_par_iter()
            .all(|k| {
                let (l, m) = (Elem((k / q as u64) as u32), Elem((k % q as u64) as u32));
                !self.lm_form(l, m).is_zero()
            })
    }

    /// `psi(x) = sum_j b_j m0 l0^(p^j) x^(p^j) + sum_i a_i m0^(p^i+1) x^(p^i) + l0^2 x`.
    pub fn psi(&self, l0: Elem, m0: Elem) -> Result<LinearizedUnivariate> {
        if l0.is_zero() && m0.is_zero() {
            return Err(Error::ZeroPair);
        }
        let f = &self.field;
        let mut c = vec![Elem::ZERO; f.h() as usize];
        for (&j, &bj) in &self.b {
            let t = f.mul(bj, f.mul(m0, f.frobenius(l0, j)));
            c[j as usize] = f.add(c[j as usize], t);
        }
        for (&i, &ai) in &self.a {
            let t = f.mul(ai, f.mul(f.frobenius(m0, i), m0));
            c[i as usize] = f.add(c[i as usize], t);
        }
        c[0] = f.add(c[0], f.square(l0));
        Ok(LinearizedUnivariate {
            field: f.clone(),
            coeffs: c,
        })
    }

    /// Whether `psi(l0, m0)` permutes GF(q) for every `(l0, m0) != (0, 0)`.
    pub fn psi_all_pp(&self) -> bool {
        let tester = PpTester::new(&self.field);
        let q = self.field.q() as u64;
        (1..q * q).into_par_iter().all(|k| {
            let (l0, m0) = (Elem((k / q) as u32), Elem((k % q) as u32));
            tester.is_pp(&self.psi(l0, m0).expect("nonzero pair").coeffs)
        })
    }
}

/// `sum_k c_k x^(p^k)`, `k < h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedUnivariate {
    field: Field,
    coeffs: Vec<Elem>,
}

impl LinearizedUnivariate {
    pub fn new(field: &Field, coeffs: &[(u32, Elem)]) -> Result<Self> {
        let map = collect(field, coeffs)?;
        let mut c = vec![Elem::ZERO; field.h() as usize];
        for (k, v) in map {
            c[k as usize] = v;
        }
        Ok(LinearizedUnivariate {
            field: field.clone(),
            coeffs: c,
        })
    }

    /// Reads a polynomial in `x` alone whose exponents are powers of p.
    pub fn from_bivariate(f: &BivariatePoly) -> std::result::Result<Self, NotLinearized> {
        let pair = LinearizedPair::from_bivariate(f)?;
        if let Some((&k, _)) = pair.b.iter().next() {
            return Err(NotLinearized::Monomial(0, f.field().p().pow(k)));
        }
        let a: Vec<(u32, Elem)> = pair.a.into_iter().collect();
        Ok(LinearizedUnivariate::new(f.field(), &a).expect("indices reduced mod h"))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `c_k` for `k = 0..h`.
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Elem::ZERO, |acc, (k, &c)| f.add(acc, f.mul(c, f.frobenius(x, k as u32))))
    }

    /// Kernel scan: no nonzero root.
    pub fn is_pp_by_kernel(&self) -> bool {
        self.field.elements().skip(1).all(|x| !self.eval(x).is_zero())
    }

    /// Rank of the GF(p)-matrix of the map.
    pub fn is_pp_by_rank(&self) -> bool {
        PpTester::new(&self.field).is_pp(&self.coeffs)
    }

    /// Bijectivity of the additive map.
    pub fn is_linearized_pp(&self) -> bool {
        self.is_pp_by_rank()
    }

    pub fn to_bivariate(&self) -> BivariatePoly {
        let p = self.field.p();
        let terms: Vec<(u32, u32, Elem)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (p.pow(k as u32), 0, c))
            .collect();
        BivariatePoly::from_terms(&self.field, &terms)
    }
}

/// Decides bijectivity of linearized maps over one field by rank, with the
/// Frobenius images of the polynomial basis precomputed.
pub struct PpTester {
    field: Field,
    /// `frob[i][k] = (t^i)^(p^k)`
    frob: Vec<Vec<Elem>>,
}

impl PpTester {
    pub fn new(field: &Field) -> Self {
        let h = field.h();
        let frob = (0..h)
            .map(|i| {
                let basis = Elem(field.p().pow(i));
                (0..h).map(|k| field.frobenius(basis, k)).collect()
            })
            .collect();
        PpTester {
            field: field.clone(),
            frob,
        }
    }

    pub fn is_pp(&self, coeffs: &[Elem]) -> bool {
        let f = &self.field;
        let p = f.p();
        let h = f.h() as usize;
        let mut rows: Vec<Vec<u32>> = self
            .frob
            .iter()
            .map(|images| {
                let v = coeffs
                    .iter()
                    .zip(images)
                    .fold(Elem::ZERO, |acc, (&c, &img)| f.add(acc, f.mul(c, img)));
                let mut digits = Vec::with_capacity(h);
                let mut r = v.0;
                for _ in 0..h {
                    digits.push(r % p);
                    r /= p;
                }
                digits
            })
            .collect();
        full_rank_mod_p(&mut rows, p)
    }
}

fn full_rank_mod_p(rows: &mut [Vec<u32>], p: u32) -> bool {
    let n = rows.len();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| rows[r][col] != 0) else {
            return false;
        };
        rows.swap(col, piv);
        let inv = crate::gf::fp_poly::inv_mod(rows[col][col] as u64, p as u64) as u32;
        for r in col + 1..n {
            let factor = rows[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let sub = factor * rows[col][c] % p;
                rows[r][c] = (rows[r][c] + p - sub) % p;
            }
        }
    }
    true
}

/// Outcome of checking a permutation-polynomial family over all
/// `(l0, m0) != (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub q: u32,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Elem>,
    pub pairs_checked: u64,
    /// Pairs `(l0, m0)` whose polynomial is not a permutation.
    pub failures: Vec<(Elem, Elem)>,
}

fn sweep(field: &Field, coeffs: impl Fn(Elem, Elem) -> Vec<Elem> + Sync) -> (u64, Vec<(Elem, Elem)>) {
    let tester = PpTester::new(field);
    let q = field.q() as u64;
    let failures: Vec<(Elem, Elem)> = (1..q * q)
        .into_par_iter()
        .filter_map(|k| {
            let (l0, m0) = (Elem((k / q) as u32), Elem((k % q) as u32));
            (!tester.is_pp(&coeffs(l0, m0))).then_some((l0, m0))
        })
        .collect();
    (q * q - 1, failures)
}

/// `m0 l0^81 x^81 + m0^10 x^9 - l0^2 x` over GF(3^5).
pub fn pw_polynomial(field: &Field, l0: Elem, m0: Elem) -> Result<LinearizedUnivariate> {
    if field.p() != 3 || field.h() != 5 {
        return Err(Error::WrongField(format!("the PW family lives over GF(3^5), got GF({})", field.q())));
    }
    if l0.is_zero() && m0.is_zero() {
        return Err(Error::ZeroPair);
    }
    Ok(LinearizedUnivariate {
        field: field.clone(),
        coeffs: pw_coeffs(field, l0, m0),
    })
}

fn pw_coeffs(f: &Field, l0: Elem, m0: Elem) -> Vec<Elem> {
    vec![
        f.neg(f.square(l0)),
        Elem::ZERO,
        f.pow(m0, 10),
        Elem::ZERO,
        f.mul(m0, f.frobenius(l0, 4)),
    ]
}

pub fn pp_family_pw(field: &Field) -> Result<SweepReport> {
    pw_polynomial(field, Elem::ONE, Elem::ZERO)?;
    let (pairs_checked, failures) = sweep(field, |l0, m0| pw_coeffs(field, l0, m0));
    Ok(SweepReport {
        q: field.q(),
        family: "pw".into(),
        m: None,
        pairs_checked,
        failures,
    })
}

fn tp_check(field: &Field, m: Elem) -> Result<()> {
    if field.p() != 3 || field.h() <= 2 {
        return Err(Error::WrongField(format!(
            "the TP family needs q = 3^n with n > 2, got GF({})",
            field.q()
        )));
    }
    if m.is_zero() || field.is_square(m) {
        return Err(Error::Restriction {
            family: "tp",
            reason: format!("m = {m} must be a non-square"),
        });
    }
    Ok(())
}

fn tp_coeffs(f: &Field, m_inv: Elem, m: Elem, l0: Elem, m0: Elem) -> Vec<Elem> {
    let mut c = vec![Elem::ZERO; f.h() as usize];
    let inner = f.sub(f.mul(m, f.square(m0)), f.square(l0));
    c[2] = f.frobenius(inner, 2);
    c[1] = f.mul(f.frobenius(m0, 2), f.frobenius(l0, 1));
    c[0] = f.mul(m_inv, f.pow(m0, 10));
    c
}

/// `(m m0^2 - l0^2)^9 x^9 + m0^9 l0^3 x^3 + m^-1 m0^10 x` over GF(3^n).
pub fn tp_polynomial(field: &Field, m: Elem, l0: Elem, m0: Elem) -> Result<LinearizedUnivariate> {
    tp_check(field, m)?;
    if l0.is_zero() && m0.is_zero() {
        return Err(Error::ZeroPair);
    }
    Ok(LinearizedUnivariate {
        field: field.clone(),
        coeffs: tp_coeffs(field, field.inv(m)?, m, l0, m0),
    })
}

pub fn pp_family_tp(field: &Field, m: Elem) -> Result<SweepReport> {
    tp_check(field, m)?;
    let m_inv = field.inv(m)?;
    let (pairs_checked, failures) = sweep(field, |l0, m0| tp_coeffs(field, m_inv, m, l0, m0));
    Ok(SweepReport {
        q: field.q(),
        family: "tp".into(),
        m: Some(m),
        pairs_checked,
        failures,
    })
}
