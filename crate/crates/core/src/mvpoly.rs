//! Sparse multivariate polynomials over GF(q).
//!
//! Exponents are literal: `x^q` is never silently reduced to `x`. Families
//! such as `-x^9 - y^81` have one to three terms with large exponents, so a
//! sparse monomial map is the working representation.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// A polynomial in `N` variables, stored as a map from exponent vectors to
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly<const N: usize> {
    field: Field,
    terms: BTreeMap<[u32; N], Elem>,
}

impl<const N: usize> fmt::Debug for SparsePoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn total(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

fn add_exps<const N: usize>(a: &[u32; N], b: &[u32; N]) -> Result<[u32; N]> {
    let mut out = [0u32; N];
    for i in 0..N {
        out[i] = a[i].checked_add(b[i]).ok_or(Error::ExponentOverflow)?;
    }
    Ok(out)
}

impl<const N: usize> SparsePoly<N> {
    pub fn zero(field: &Field) -> Self {
        SparsePoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::monomial(field, [0; N], c)
    }

    pub fn monomial(field: &Field, exps: [u32; N], c: Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(exps, c);
        p
    }

    /// The variable `X_i`.
    pub fn var(field: &Field, i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(field, e, Elem::ONE)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32; N]) -> Elem {
        self.terms.get(exps).copied().unwrap_or(Elem::ZERO)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * X^exps`, dropping the monomial if it cancels.
    pub fn add_term(&mut self, exps: [u32; N], c: Elem) {
        if c.is_zero() {
            return;
        }
        let field = &self.field;
        let entry = self.terms.entry(exps).or_insert(Elem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn scale(&self, c: Elem) -> Self {
        let mut out = Self::zero(&self.field);
        if c.is_zero() {
            return out;
        }
        for (e, a) in self.terms() {
            out.terms.insert(*e, self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = Self::zero(&self.field);
        for (ea, a) in self.terms() {
            for (eb, b) in other.terms() {
                out.add_term(add_exps(ea, eb)?, self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut acc = Self::constant(&self.field, Elem::ONE);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Largest total degree of a monomial; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| total(e)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| total(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The sum of the monomials of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u64) -> Self {
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(*e) == deg)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// The nonzero homogeneous part of least total degree (the tangent cone
    /// at the origin). The polynomial must vanish at the origin.
    pub fn lowest_part_at_origin(&self) -> Result<Self> {
        let min = self
            .terms
            .keys()
            .map(|e| total(e))
            .min()
            .ok_or(Error::ZeroPolynomial)?;
        if min == 0 {
            return Err(Error::NotThroughOrigin);
        }
        Ok(self.homogeneous_part(min))
    }

    pub fn eval(&self, point: &[Elem; N]) -> Result<Elem> {
        if point.iter().any(|&x| !self.field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Elem; N]) -> Elem {
        let f = &self.field;
        let mut acc = Elem::ZERO;
        for (e, c) in self.terms() {
            let mut t = c;
            for i in 0..N {
                if e[i] != 0 {
                    t = f.mul(t, f.pow(point[i], e[i] as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Sets `X_var = value`.
    pub fn substitute(&self, var: usize, value: Elem) -> Result<Self> {
        if var >= N {
            return Err(Error::BadVariable(var));
        }
        if !self.field.contains(value) {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            let mut e2 = *e;
            e2[var] = 0;
            out.add_term(e2, f.mul(c, f.pow(value, e[var] as u64)));
        }
        Ok(out)
    }

    /// Replaces `X_var` by the polynomial `replacement`.
    pub fn compose(&self, var: usize, replacement: &Self) -> Result<Self> {
        if var >= N {
            return Err(Error::BadVariable(var));
        }
        self.check_field(replacement)?;
        let mut powers: BTreeMap<u32, Self> = BTreeMap::new();
        let mut out = Self::zero(&self.field);
        for (e, c) in self.terms() {
            let k = e[var];
            if !powers.contains_key(&k) {
                powers.insert(k, replacement.pow(k)?);
            }
            let mut rest = *e;
            rest[var] = 0;
            let term = Self::monomial(&self.field, rest, c).mul(&powers[&k])?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `G(X_0, ..., X_{N-1}) = F(X_{perm[0]}, ..., X_{perm[N-1]})`.
    pub fn permute(&self, perm: [usize; N]) -> Result<Self> {
        let mut seen = [false; N];
        for &i in &perm {
            if i >= N || seen[i] {
                return Err(Error::BadVariable(i));
            }
            seen[i] = true;
        }
        let mut out = Self::zero(&self.field);
        for (e, c) in self.terms() {
            let mut e2 = [0u32; N];
            for i in 0..N {
                e2[perm[i]] += e[i];
            }
            out.add_term(e2, c);
        }
        Ok(out)
    }

    /// Terms in graded-lexicographic order, highest first.
    fn sorted_terms(&self) -> Vec<(&[u32; N], Elem)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|(e, _)| Reverse((total(*e), **e)));
        v
    }

    fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut parts = Vec::new();
                if c != Elem::ONE || e.iter().all(|&x| x == 0) {
                    parts.push(c.to_string());
                }
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => parts.push(names[i].to_string()),
                        _ => parts.push(format!("{}^{}", names[i], k)),
                    }
                }
                parts.join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<const N: usize> fmt::Display for SparsePoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..N).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(&refs))
    }
}

/// The polynomial `f(X, Y) = sum a_ij X^i Y^j` attached to a candidate ovoid.
#[derive(Clone, PartialEq, Eq)]
pub struct BivariatePoly(SparsePoly<2>);

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly({self})")
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.render(&["x", "y"]))
    }
}

impl BivariatePoly {
    pub fn zero(field: &Field) -> Self {
        BivariatePoly(SparsePoly::zero(field))
    }

    /// Builds `sum c * X^i * Y^j` from `(i, j, c)` triples; repeated
    /// monomials are summed.
    pub fn from_terms(field: &Field, terms: &[(u32, u32, Elem)]) -> Self {
        let mut p = SparsePoly::zero(field);
        for &(i, j, c) in terms {
            p.add_term([i, j], c);
        }
        BivariatePoly(p)
    }

    pub fn from_poly(p: SparsePoly<2>) -> Self {
        BivariatePoly(p)
    }

    /// Parses the text grammar `coef*x^i*y^j + ...`. Coefficients are
    /// canonical element indices; a leading `-` negates the term.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        parse_bivariate(field, s).map(BivariatePoly)
    }

    pub fn as_poly(&self) -> &SparsePoly<2> {
        &self.0
    }

    pub fn field(&self) -> &Field {
        self.0.field()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.0.coeff(&[i, j])
    }

    /// `(i, j, a_ij)` for every nonzero coefficient, lexicographic in `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Elem)> + '_ {
        self.0.terms().map(|(e, c)| (e[0], e[1], c))
    }

    /// `max(i + j)` over nonzero terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.0.total_degree().unwrap_or(0) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn eval(&self, x: Elem, y: Elem) -> Result<Elem> {
        self.0.eval(&[x, y])
    }

    /// Values on the whole plane, indexed by `x * q + y`.
    pub fn value_table(&self) -> Vec<Elem> {
        let field = self.field();
        let q = field.q() as usize;
        // One power table per distinct exponent keeps this linear in q^2.
        let mut x_pows: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
        let mut y_pows: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
        for (i, j, _) in self.terms() {
            x_pows
                .entry(i)
                .or_insert_with(|| field.elements().map(|x| field.pow(x, i as u64)).collect());
            y_pows
                .entry(j)
                .or_insert_with(|| field.elements().map(|y| field.pow(y, j as u64)).collect());
        }
        let terms: Vec<_> = self
            .terms()
            .map(|(i, j, c)| (&x_pows[&i], &y_pows[&j], c))
            .collect();
        let mut out = vec![Elem::ZERO; q * q];
        for x in 0..q {
            for y in 0..q {
                let mut acc = Elem::ZERO;
                for (xp, yp, c) in &terms {
                    acc = field.add(acc, field.mul(*c, field.mul(xp[x], yp[y])));
                }
                out[x * q + y] = acc;
            }
        }
        out
    }

    /// Removes the `Y` term in odd characteristic through the substitution
    /// `X2 -> X2 - a01 X1 / 2`, `X4 -> X4 - a01 X3 / 2` of the hypersurface.
    /// The induced polynomial is `f(x, y - c x) - 2c y + c^2 x` with
    /// `c = a01 / 2`. Returns `f` unchanged in characteristic 2.
    pub fn normalize_a01(&self) -> Result<Self> {
        let field = self.field();
        let a01 = self.coeff(0, 1);
        if field.p() == 2 || a01.is_zero() {
            return Ok(self.clone());
        }
        let c = field.mul(a01, field.half()?);
        let shifted_y = SparsePoly::var(field, 1).sub(&SparsePoly::var(field, 0).scale(c))?;
        let mut g = self.0.compose(1, &shifted_y)?;
        g.add_term([0, 1], field.neg(field.add(c, c)));
        g.add_term([1, 0], field.square(c));
        Ok(BivariatePoly(g))
    }

    /// Reduces every exponent with `x^q = x`, giving the unique polynomial of
    /// degree below q in each variable that defines the same function.
    pub fn reduce_mod_field(&self) -> Self {
        let q = self.field().q();
        let red = |e: u32| if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 };
        let mut p = SparsePoly::zero(self.field());
        for (i, j, c) in self.terms() {
            p.add_term([red(i), red(j)], c);
        }
        BivariatePoly(p)
    }

    /// The reduced polynomial agreeing with `table` (indexed `x * q + y`).
    pub fn interpolate(field: &Field, table: &[Elem]) -> Result<Self> {
        let q = field.q() as usize;
        if table.len() != q * q {
            return Err(Error::WrongField(format!(
                "table has {} entries, expected {}",
                table.len(),
                q * q
            )));
        }
        // delta_a(z) = 1 - (z - a)^(q-1) is the indicator of z = a.
        let delta = |var: usize, a: Elem| -> Result<SparsePoly<2>> {
            let shifted = SparsePoly::var(field, var).sub(&SparsePoly::constant(field, a))?;
            SparsePoly::constant(field, Elem::ONE).sub(&shifted.pow(q as u32 - 1)?)
        };
        let dx: Vec<_> = field.elements().map(|a| delta(0, a)).collect::<Result<_>>()?;
        let dy: Vec<_> = field.elements().map(|b| delta(1, b)).collect::<Result<_>>()?;
        let mut out = SparsePoly::zero(field);
        for x in 0..q {
            for y in 0..q {
                let v = table[x * q + y];
                if !v.is_zero() {
                    out = out.add(&dx[x].mul(&dy[y])?.scale(v))?;
                }
            }
        }
        Ok(BivariatePoly(out))
    }
}

fn parse_bivariate(field: &Field, s: &str) -> Result<SparsePoly<2>> {
    let err = |msg: &str| Error::ParsePoly(format!("{msg} in {s:?}"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty input"));
    }
    let minus_one = field.neg(Elem::ONE);
    let mut poly = SparsePoly::zero(field);
    let mut pos = 0;
    let read_number = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos)
            .then(|| chars[start..*pos].iter().collect::<String>().parse().ok())
            .flatten()
    };
    let mut first = true;
    while pos < chars.len() {
        let mut coef = Elem::ONE;
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                coef = minus_one;
                pos += 1;
            }
            _ if first => {}
            c => return Err(err(&format!("expected '+' or '-' before {c:?}"))),
        }
        first = false;
        let mut exps = [0u32; 2];
        let mut factors = 0;
        loop {
            if pos >= chars.len() {
                break;
            }
            match chars[pos] {
                '*' if factors > 0 => pos += 1,
                '+' | '-' => break,
                c if c.is_ascii_digit() => {
                    let n = read_number(&mut pos).ok_or_else(|| err("bad number"))?;
                    let e = field.elem(n).map_err(|_| err("coefficient out of range"))?;
                    coef = field.mul(coef, e);
                    factors += 1;
                }
                c @ ('x' | 'X' | 'y' | 'Y') => {
                    pos += 1;
                    let var = usize::from(matches!(c, 'y' | 'Y'));
                    let mut k = 1u64;
                    if pos < chars.len() && chars[pos] == '^' {
                        pos += 1;
                        k = read_number(&mut pos).ok_or_else(|| err("missing exponent"))?;
                    }
                    let k = u32::try_from(k).map_err(|_| Error::ExponentOverflow)?;
                    exps[var] = exps[var].checked_add(k).ok_or(Error::ExponentOverflow)?;
                    factors += 1;
                }
                c => return Err(err(&format!("unexpected {c:?}"))),
            }
        }
        if factors == 0 {
            return Err(err("empty term"));
        }
        if pos > 0 && chars[pos - 1] == '*' {
            return Err(err("dangling '*'"));
        }
        poly.add_term(exps, coef);
    }
    Ok(poly)
}

/// A form of uniform total degree in `X0, ..., X4`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogPoly5(SparsePoly<5>);

impl HomogPoly5 {
    pub fn new(poly: SparsePoly<5>) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::ParsePoly("polynomial is not homogeneous".into()));
        }
        Ok(HomogPoly5(poly))
    }

    pub fn as_poly(&self) -> &SparsePoly<5> {
        &self.0
    }

    pub fn field(&self) -> &Field {
        self.0.field()
    }

    pub fn degree(&self) -> u64 {
        self.0.total_degree().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Elem; 5]) -> Result<Elem> {
        self.0.eval(point)
    }

    /// Sets coordinate `position` to `value` (with `value = 1` this is the
    /// affine chart `X_position = 1`).
    pub fn dehomogenize(&self, position: usize, value: Elem) -> Result<SparsePoly<5>> {
        self.0.substitute(position, value)
    }

    pub fn permute(&self, perm: [usize; 5]) -> Result<Self> {
        Ok(HomogPoly5(self.0.permute(perm)?))
    }
}

impl fmt::Display for HomogPoly5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The form of the hypersurface `S_f`:
/// `F = (X2 - X4)^2 X0^(d-1) + (X1 - X3)(f~(X1, X2, X0) - f~(X3, X4, X0))`
/// where `f~` is the homogenisation of `f` and `d = deg f`.
pub fn build_sf(f: &BivariatePoly) -> Result<HomogPoly5> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let field = f.field();
    let x = |i| SparsePoly::<5>::var(field, i);
    let diff_y = x(2).sub(&x(4))?;
    let mut out = diff_y.pow(2)?.mul(&SparsePoly::monomial(field, [d - 1, 0, 0, 0, 0], Elem::ONE))?;

    let mut inner = SparsePoly::<5>::zero(field);
    for (i, j, c) in f.terms() {
        let t = d - i - j;
        inner.add_term([t, i, j, 0, 0], c);
        inner.add_term([t, 0, 0, i, j], field.neg(c));
    }
    out = out.add(&x(1).sub(&x(3))?.mul(&inner)?)?;
    HomogPoly5::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, h: u32) -> Field {
        Field::gf(p, h).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f3 = gf(3, 1);
        let f = BivariatePoly::parse(&f3, "x").unwrap();
        assert_eq!(f.eval(Elem(2), Elem(1)).unwrap(), Elem(2));

        let f243 = gf(3, 5);
        let pw = BivariatePoly::parse(&f243, "-x^9 - y^81").unwrap();
        assert_eq!(pw.eval(Elem::ZERO, Elem::ZERO).unwrap(), Elem::ZERO);

        let f5 = gf(5, 1);
        let g = BivariatePoly::parse(&f5, "x^2 + x*y").unwrap();
        assert_eq!(g.eval(Elem(1), Elem(2)).unwrap(), Elem(3));
        assert_eq!(g.eval(Elem(5), Elem(0)), Err(Error::FieldMismatch));
    }

    #[test]
    fn parse_and_print() {
        let f243 = gf(3, 5);
        let pw = BivariatePoly::parse(&f243, "-x^9 - y^81").unwrap();
        assert_eq!(pw.to_string(), "2*y^81 + 2*x^9");
        assert_eq!(BivariatePoly::parse(&f243, &pw.to_string()).unwrap(), pw);
        let p = BivariatePoly::parse(&f243, "2 * x^9 + 242*y^81").unwrap();
        assert_eq!(p.coeff(9, 0), Elem(2));
        let q = BivariatePoly::parse(&f243, "x*y + x*y + 3").unwrap();
        assert_eq!(q.coeff(1, 1), Elem(2));
        assert_eq!(q.coeff(0, 0), Elem(3));
        assert_eq!(q.to_string(), "2*x*y + 3");
        for bad in ["", "x^", "2*", "x + + y", "z", "x^2y^", "243*x"] {
            assert!(BivariatePoly::parse(&f243, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn value_table_matches_eval() {
        let f = gf(3, 2);
        let g = BivariatePoly::parse(&f, "4*x^3*y + y^5 + 7*x").unwrap();
        let t = g.value_table();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(t[(x.0 * 9 + y.0) as usize], g.eval(x, y).unwrap());
            }
        }
    }

    fn expected_linear_sf(field: &Field, a: Elem) -> SparsePoly<5> {
        // (X2 - X4)^2 + a (X1 - X3)^2
        let x = |i| SparsePoly::<5>::var(field, i);
        let d24 = x(2).sub(&x(4)).unwrap();
        let d13 = x(1).sub(&x(3)).unwrap();
        d24.pow(2).unwrap().add(&d13.pow(2).unwrap().scale(a)).unwrap()
    }

    #[test]
    fn build_sf_linear_odd() {
        let f = gf(5, 1);
        let a = Elem(3);
        let sf = build_sf(&BivariatePoly::from_terms(&f, &[(1, 0, a)])).unwrap();
        assert_eq!(sf.as_poly(), &expected_linear_sf(&f, a));
        assert_eq!(sf.degree(), 2);
    }

    #[test]
    fn build_sf_even_elliptic() {
        let f = gf(2, 2);
        let a = f.trace_one_element().unwrap();
        let sf = build_sf(&BivariatePoly::from_terms(&f, &[(1, 0, a), (0, 1, Elem::ONE)])).unwrap();
        let x = |i| SparsePoly::<5>::var(&f, i);
        let s24 = x(2).add(&x(4)).unwrap();
        let s13 = x(1).add(&x(3)).unwrap();
        let lin = x(1).scale(a).add(&x(2)).unwrap().add(&x(3).scale(a)).unwrap().add(&x(4)).unwrap();
        let expected = s24.pow(2).unwrap().add(&s13.mul(&lin).unwrap()).unwrap();
        assert_eq!(sf.as_poly(), &expected);
    }

    #[test]
    fn build_sf_tits() {
        // q = 2^(2h+1) with h = 1: f = x^(2^(h+1)+1) + y^(2^(h+1)) = x^5 + y^4.
        let f = gf(2, 3);
        let tits = BivariatePoly::parse(&f, "x^5 + y^4").unwrap();
        let sf = build_sf(&tits).unwrap();
        let x = |i| SparsePoly::<5>::var(&f, i);
        let m = |e| SparsePoly::<5>::monomial(&f, e, Elem::ONE);
        let s24 = x(2).add(&x(4)).unwrap();
        let s13 = x(1).add(&x(3)).unwrap();
        let inner = m([0, 5, 0, 0, 0])
            .add(&m([1, 0, 4, 0, 0]))
            .unwrap()
            .add(&m([0, 0, 0, 5, 0]))
            .unwrap()
            .add(&m([1, 0, 0, 0, 4]))
            .unwrap();
        let expected = s24
            .pow(2)
            .unwrap()
            .mul(&m([4, 0, 0, 0, 0]))
            .unwrap()
            .add(&s13.mul(&inner).unwrap())
            .unwrap();
        assert_eq!(sf.as_poly(), &expected);
        assert_eq!(sf.degree(), 6);
    }

    #[test]
    fn build_sf_rejects_constant() {
        let f = gf(3, 1);
        assert_eq!(build_sf(&BivariatePoly::zero(&f)), Err(Error::ZeroDegree));
    }

    #[test]
    fn build_sf_bridges_pair_condition() {
        for (p, h) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
            let field = gf(p, h);
            let f = BivariatePoly::parse(&field, "x^3 + 2*x*y^2 + y^2 + x").unwrap();
            let sf = build_sf(&f).unwrap();
            assert!(sf.as_poly().is_homogeneous());
            assert_eq!(sf.degree(), 4);
            for x1 in field.elements() {
                for y1 in field.elements() {
                    for x2 in field.elements() {
                        for y2 in field.elements() {
                            let dy = field.sub(y1, y2);
                            let df = field.sub(f.eval(x1, y1).unwrap(), f.eval(x2, y2).unwrap());
                            let expected = field.add(field.square(dy), field.mul(field.sub(x1, x2), df));
                            let got = sf.eval(&[Elem::ONE, x1, y1, x2, y2]).unwrap();
                            assert_eq!(got, expected);
                        }
                    }
                    assert_eq!(sf.eval(&[Elem::ONE, x1, y1, x1, y1]).unwrap(), Elem::ZERO);
                }
            }
        }
    }

    #[test]
    fn dehomogenize_examples() {
        let f = gf(3, 1);
        let x0x4 = HomogPoly5::new(SparsePoly::monomial(&f, [1, 0, 0, 0, 1], Elem::ONE)).unwrap();
        assert_eq!(
            x0x4.dehomogenize(0, Elem::ONE).unwrap(),
            SparsePoly::var(&f, 4)
        );
        let sf = build_sf(&BivariatePoly::from_terms(&f, &[(1, 0, Elem(2))])).unwrap();
        assert_eq!(&sf.dehomogenize(0, Elem::ONE).unwrap(), sf.as_poly());
        assert!(sf.dehomogenize(5, Elem::ONE).is_err());
    }

    #[test]
    fn lowest_part_examples() {
        let f = gf(5, 1);
        let g = SparsePoly::<4>::var(&f, 0)
            .pow(2)
            .unwrap()
            .add(&SparsePoly::var(&f, 1).pow(3).unwrap())
            .unwrap();
        assert_eq!(g.lowest_part_at_origin().unwrap(), SparsePoly::var(&f, 0).pow(2).unwrap());
        assert_eq!(SparsePoly::<4>::zero(&f).lowest_part_at_origin(), Err(Error::ZeroPolynomial));
        let c = SparsePoly::<4>::constant(&f, Elem::ONE).add(&g).unwrap();
        assert_eq!(c.lowest_part_at_origin(), Err(Error::NotThroughOrigin));
    }

    /// `F(X4, X1, X2, X3, 1)` around the origin.
    fn swapped_chart(f: &BivariatePoly) -> SparsePoly<5> {
        build_sf(f)
            .unwrap()
            .permute([4, 1, 2, 3, 0])
            .unwrap()
            .dehomogenize(0, Elem::ONE)
            .unwrap()
    }

    #[test]
    fn tangent_cone_jbar_at_most_one() {
        let f = gf(7, 1);
        let poly = BivariatePoly::parse(&f, "x^4 + 3*x^2*y + x").unwrap();
        let d = poly.degree();
        let cone = swapped_chart(&poly).lowest_part_at_origin().unwrap();
        assert_eq!(cone, SparsePoly::monomial(&f, [0, 0, 0, 0, d - 1], Elem::ONE));
    }

    #[test]
    fn tangent_cone_jbar_at_least_three() {
        // j_bar = 3: cone is (X1 - X3) * sum_i a_{i,3} X3^i X4^(d-i-3), up to the sign -1.
        let f = gf(7, 1);
        let poly = BivariatePoly::parse(&f, "2*x*y^3 + 5*y^3 + x^5 + y^2").unwrap();
        let d = poly.degree();
        let cone = swapped_chart(&poly).lowest_part_at_origin().unwrap();
        let x = |i| SparsePoly::<5>::var(&f, i);
        let mut sum = SparsePoly::<5>::zero(&f);
        for (i, j, c) in poly.terms() {
            if j == 3 {
                sum.add_term([0, 0, 0, i, d - i - 3], c);
            }
        }
        let expected = x(1).sub(&x(3)).unwrap().mul(&sum).unwrap();
        assert_eq!(cone, expected.neg());
    }

    #[test]
    fn tangent_cone_jbar_two() {
        let f = gf(7, 1);
        let poly = BivariatePoly::parse(&f, "3*x*y^2 + x^4 + x").unwrap();
        let d = poly.degree();
        let cone = swapped_chart(&poly).lowest_part_at_origin().unwrap();
        let x = |i| SparsePoly::<5>::var(&f, i);
        let mut sum = SparsePoly::<5>::zero(&f);
        for (i, j, c) in poly.terms() {
            if j == 2 {
                sum.add_term([0, 0, 0, i, d - i - 2], c);
            }
        }
        let expected = SparsePoly::monomial(&f, [0, 0, 0, 0, d - 1], Elem::ONE)
            .sub(&x(1).sub(&x(3)).unwrap().mul(&sum).unwrap())
            .unwrap();
        assert_eq!(cone, expected);
    }

    #[test]
    fn normalize_examples() {
        let f3 = gf(3, 1);
        let g = BivariatePoly::parse(&f3, "x^2").unwrap();
        assert_eq!(g.normalize_a01().unwrap(), g);

        // f = Y: c = 1/2 = 2, f' = (y - 2x) - y + 4x = 2x.
        let y = BivariatePoly::parse(&f3, "y").unwrap();
        let n = y.normalize_a01().unwrap();
        assert_eq!(n, BivariatePoly::parse(&f3, "2*x").unwrap());

        // f = X + Y over GF(5): c = 3, f' = x + (y - 3x) - y + 9x = 7x = 2x.
        let f5 = gf(5, 1);
        let n = BivariatePoly::parse(&f5, "x + y").unwrap().normalize_a01().unwrap();
        assert_eq!(n.coeff(0, 1), Elem::ZERO);
        assert_eq!(n, BivariatePoly::parse(&f5, "2*x").unwrap());

        let f4 = gf(2, 2);
        let e = BivariatePoly::parse(&f4, "2*x + y").unwrap();
        assert_eq!(e.normalize_a01().unwrap(), e);
    }

    #[test]
    fn normalize_is_idempotent() {
        let f = gf(3, 2);
        let g = BivariatePoly::parse(&f, "x^3*y + 4*y^2 + 5*x*y + 7*y + x").unwrap();
        let n = g.normalize_a01().unwrap();
        assert_eq!(n.coeff(0, 1), Elem::ZERO);
        assert_eq!(n.normalize_a01().unwrap(), n);
        assert_eq!(n.degree(), g.degree());
    }

    #[test]
    fn normalize_matches_substituted_surface() {
        // F_f(X0, X1, X2 - c X1, X3, X4 - c X3) == F_{f'} for d >= 2.
        let f = gf(5, 1);
        let g = BivariatePoly::parse(&f, "x^2*y + 3*y^2 + 2*y + x").unwrap();
        let c = f.mul(g.coeff(0, 1), f.half().unwrap());
        let x = |i| SparsePoly::<5>::var(&f, i);
        let sub2 = x(2).sub(&x(1).scale(c)).unwrap();
        let sub4 = x(4).sub(&x(3).scale(c)).unwrap();
        let lhs = build_sf(&g)
            .unwrap()
            .as_poly()
            .compose(2, &sub2)
            .unwrap()
            .compose(4, &sub4)
            .unwrap();
        let rhs = build_sf(&g.normalize_a01().unwrap()).unwrap();
        assert_eq!(&lhs, rhs.as_poly());
    }

    #[test]
    fn reduce_and_interpolate() {
        let f = gf(3, 1);
        let g = BivariatePoly::parse(&f, "x^5 + x^3*y^4 + y^3").unwrap();
        let r = g.reduce_mod_field();
        assert_eq!(r, BivariatePoly::parse(&f, "x^3 + x*y^2 + y").unwrap().reduce_mod_field());
        assert_eq!(r.value_table(), g.value_table());
        let back = BivariatePoly::interpolate(&f, &g.value_table()).unwrap();
        assert_eq!(back, r);

        let f4 = gf(2, 2);
        let g = BivariatePoly::parse(&f4, "3*x^2*y + 2*y^3 + x").unwrap();
        let back = BivariatePoly::interpolate(&f4, &g.value_table()).unwrap();
        assert_eq!(back.value_table(), g.value_table());
        assert_eq!(back, g.reduce_mod_field());
    }

    #[test]
    fn permute_rejects_non_permutations() {
        let f = gf(3, 1);
        assert!(SparsePoly::<5>::var(&f, 0).permute([0, 0, 1, 2, 3]).is_err());
    }
}
