//! The known ovoid families of Q(4,q), each given by the polynomial `f`
//! with `O_4(f)` the ovoid.
//!
//! | family            | f                                   | restriction        |
//! |-------------------|-------------------------------------|--------------------|
//! | elliptic, q odd   | `-n x`                              | n non-square       |
//! | elliptic, q even  | `a x + y`                           | tr(a) = 1          |
//! | Kantor            | `-n x^σ`, σ = p^e                   | q odd, 0 < e < h   |
//! | Penttila-Williams | `-x^9 - y^81`                       | q = 3^5            |
//! | Thas-Payne        | `-n x - (n^-1 x)^(1/9) - y^(1/3)`   | q = 3^h, h > 2     |
//! | Ree-Tits slice    | `-x^(2σ+3) - y^σ`, σ = √(3q)        | q = 3^h, h > 1 odd |
//! | Tits              | `x^(σ+1) + y^σ`, σ = √(2q)          | q = 2^h, h > 1 odd |
//!
//! Fractional exponents are inverse Frobenius powers: `x^(1/3) = x^(3^(h-1))`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::mvpoly::BivariatePoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    EllipticOdd,
    EllipticEven,
    Kantor,
    PenttilaWilliams,
    ThasPayne,
    ReeTitsSlice,
    Tits,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::EllipticOdd,
        Family::EllipticEven,
        Family::Kantor,
        Family::PenttilaWilliams,
        Family::ThasPayne,
        Family::ReeTitsSlice,
        Family::Tits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::EllipticOdd => "elliptic-odd",
            Family::EllipticEven => "elliptic-even",
            Family::Kantor => "kantor",
            Family::PenttilaWilliams => "penttila-williams",
            Family::ThasPayne => "thas-payne",
            Family::ReeTitsSlice => "ree-tits-slice",
            Family::Tits => "tits",
        }
    }

    /// Uses the `n` parameter (a non-square).
    fn takes_n(self) -> bool {
        matches!(self, Family::EllipticOdd | Family::Kantor | Family::ThasPayne)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Restriction {
                family: "family",
                reason: format!("unknown family {s:?}"),
            })
    }
}

/// Optional family parameters; unset values are filled deterministically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    /// Non-square for the odd elliptic, Kantor and Thas-Payne rows.
    pub n: Option<Elem>,
    /// Trace-one element for the even elliptic row.
    pub a: Option<Elem>,
    /// Kantor's `σ = p^sigma_exp`.
    pub sigma_exp: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub field: Field,
    pub params: FamilyParams,
}

impl FamilySpec {
    pub fn new(family: Family, field: &Field) -> Self {
        FamilySpec {
            family,
            field: field.clone(),
            params: FamilyParams::default(),
        }
    }

    pub fn with_params(family: Family, field: &Field, params: FamilyParams) -> Self {
        FamilySpec {
            family,
            field: field.clone(),
            params,
        }
    }

    fn restriction(&self, reason: impl Into<String>) -> Error {
        Error::Restriction {
            family: self.family.name(),
            reason: reason.into(),
        }
    }

    /// Checks the family's restrictions and fills unset parameters.
    pub fn resolve(&self) -> Result<FamilyParams> {
        let field = &self.field;
        let (p, h) = (field.p(), field.h());
        let fam = self.family;
        let mut out = FamilyParams::default();

        if !fam.takes_n() && self.params.n.is_some() {
            return Err(self.restriction("parameter n does not apply"));
        }
        if fam != Family::EllipticEven && self.params.a.is_some() {
            return Err(self.restriction("parameter a does not apply"));
        }
        if fam != Family::Kantor && self.params.sigma_exp.is_some() {
            return Err(self.restriction("parameter sigma does not apply"));
        }
        for e in [self.params.n, self.params.a].into_iter().flatten() {
            if !field.contains(e) {
                return Err(Error::ElementOutOfRange {
                    index: e.0 as u64,
                    q: field.q() as u64,
                });
            }
        }

        match fam {
            Family::EllipticOdd => {
                if p == 2 {
                    return Err(self.restriction("needs q odd"));
                }
            }
            Family::EllipticEven => {
                if p != 2 {
                    return Err(self.restriction("needs q even"));
                }
                let a = match self.params.a {
                    Some(a) => a,
                    None => field.trace_one_element()?,
                };
                if field.trace_abs(a) != Elem::ONE {
                    return Err(self.restriction(format!("tr({a}) must be 1")));
                }
                out.a = Some(a);
            }
            Family::Kantor => {
                if p == 2 || h < 2 {
                    return Err(self.restriction("needs q = p^h with p odd and h > 1"));
                }
                let e = self.params.sigma_exp.unwrap_or(1);
                if e == 0 || e >= h {
                    return Err(self.restriction(format!(
                        "sigma = p^e needs 0 < e < h = {h} (sigma must not be the identity), got e = {e}"
                    )));
                }
                out.sigma_exp = Some(e);
            }
            Family::PenttilaWilliams => {
                if p != 3 || h != 5 {
                    return Err(self.restriction("needs q = 3^5"));
                }
            }
            Family::ThasPayne => {
                if p != 3 || h <= 2 {
                    return Err(self.restriction("needs q = 3^h with h > 2"));
                }
            }
            Family::ReeTitsSlice => {
                if p != 3 || h < 3 || h % 2 == 0 {
                    return Err(self.restriction("needs q = 3^h with h > 1 odd"));
                }
            }
            Family::Tits => {
                if p != 2 || h < 3 || h % 2 == 0 {
                    return Err(self.restriction("needs q = 2^h with h > 1 odd"));
                }
            }
        }

        if fam.takes_n() {
            let n = match self.params.n {
                Some(n) => n,
                None => field.canonical_nonsquare()?,
            };
            if n.is_zero() || field.is_square(n) {
                return Err(self.restriction(format!("n = {n} must be a non-square")));
            }
            out.n = Some(n);
        }
        Ok(out)
    }

    /// The family's polynomial `f`.
    pub fn instantiate(&self) -> Result<BivariatePoly> {
        let params = self.resolve()?;
        let field = &self.field;
        let (p, h) = (field.p(), field.h());
        let minus_one = field.neg(Elem::ONE);
        let terms: Vec<(u32, u32, Elem)> = match self.family {
            Family::EllipticOdd => vec![(1, 0, field.neg(params.n.unwrap()))],
            Family::EllipticEven => vec![(1, 0, params.a.unwrap()), (0, 1, Elem::ONE)],
            Family::Kantor => {
                let sigma = p.pow(params.sigma_exp.unwrap());
                vec![(sigma, 0, field.neg(params.n.unwrap()))]
            }
            Family::PenttilaWilliams => vec![(9, 0, minus_one), (0, 81, minus_one)],
            Family::ThasPayne => {
                let n = params.n.unwrap();
                let ninth_root = 3u32.pow(h - 2);
                let third_root = 3u32.pow(h - 1);
                let c = field.frobenius(field.inv(n)?, h - 2);
                vec![
                    (1, 0, field.neg(n)),
                    (ninth_root, 0, field.neg(c)),
                    (0, third_root, minus_one),
                ]
            }
            Family::ReeTitsSlice => {
                let sigma = 3u32.pow((h + 1) / 2);
                vec![(2 * sigma + 3, 0, minus_one), (0, sigma, minus_one)]
            }
            Family::Tits => {
                let sigma = 2u32.pow((h + 1) / 2);
                vec![(sigma + 1, 0, Elem::ONE), (0, sigma, Elem::ONE)]
            }
        };
        Ok(BivariatePoly::from_terms(field, &terms))
    }
}

/// Matches `f` against the literal shapes of the table.
///
/// Only the coefficient pattern is compared, so e.g. `2x^3` over GF(9) is
/// reported as Kantor-form even though `-2` is a square there; use
/// [`FamilySpec::resolve`] to check the restrictions.
pub fn recognize(f: &BivariatePoly) -> Option<FamilySpec> {
    let field = f.field();
    let (p, h) = (field.p(), field.h());
    let terms: Vec<(u32, u32, Elem)> = f.terms().collect();
    let spec = |family, params| Some(FamilySpec::with_params(family, field, params));

    if let [(i, 0, c)] = terms[..] {
        if p != 2 {
            if i == 1 {
                let n = field.neg(c);
                return spec(Family::EllipticOdd, FamilyParams { n: Some(n), ..Default::default() });
            }
            if let Some(e) = (1..h).find(|&e| p.pow(e) == i) {
                return spec(
                    Family::Kantor,
                    FamilyParams {
                        n: Some(field.neg(c)),
                        sigma_exp: Some(e),
                        ..Default::default()
                    },
                );
            }
        }
    }
    if p == 2 && f.coeff(0, 1) == Elem::ONE && terms.iter().all(|&(i, j, _)| i + j == 1) {
        let a = f.coeff(1, 0);
        return spec(Family::EllipticEven, FamilyParams { a: Some(a), ..Default::default() });
    }
    if p == 3 && h > 2 {
        let n = field.neg(f.coeff(1, 0));
        if !n.is_zero() {
            let candidate = FamilySpec::with_params(
                Family::ThasPayne,
                field,
                FamilyParams { n: Some(n), ..Default::default() },
            );
            if let Some(g) = instantiate_unchecked(&candidate) {
                if &g == f {
                    return Some(candidate);
                }
            }
        }
    }
    for family in [Family::PenttilaWilliams, Family::ReeTitsSlice, Family::Tits] {
        let candidate = FamilySpec::new(family, field);
        if candidate.instantiate().ok().as_ref() == Some(f) {
            return Some(candidate);
        }
    }
    None
}

/// Thas-Payne shape for any nonzero `n`, square or not.
fn instantiate_unchecked(spec: &FamilySpec) -> Option<BivariatePoly> {
    let field = &spec.field;
    let h = field.h();
    let n = spec.params.n?;
    let c = field.frobenius(field.inv(n).ok()?, h - 2);
    let minus_one = field.neg(Elem::ONE);
    Some(BivariatePoly::from_terms(
        field,
        &[
            (1, 0, field.neg(n)),
            (3u32.pow(h - 2), 0, field.neg(c)),
            (0, 3u32.pow(h - 1), minus_one),
        ],
    ))
}
