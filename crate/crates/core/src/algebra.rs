//! The twisted Heisenberg-Virasoro algebra at level zero.
//!
//! Basis `{L(n), I(n), C_L, C_LI, C_I : n in Z}` with
//!
//! ```text
//! [L_n, L_m] = (n - m) L_{n+m} + delta_{n+m,0} (n^3 - n)/12 C_L
//! [L_n, I_m] = -m I_{n+m} + sigma delta_{n+m,0} (n^2 + n) C_LI
//! [I_n, I_m] = n delta_{n+m,0} C_I
//! ```
//!
//! and `C_L`, `C_LI`, `C_I` central. `sigma` is the [`CocycleSign`]; both values
//! give a Lie algebra, but only `sigma = -1` makes the outer maps `D2` and `D3`
//! derivations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;

use crate::scalar::Scalar;

/// A basis symbol. The derived ordering is the canonical term order: all `L`
/// terms by ascending index, then all `I` terms, then `C_L`, `C_LI`, `C_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    L(i64),
    I(i64),
    CL,
    CLI,
    CI,
}

impl Basis {
    pub fn index(self) -> Option<i64> {
        match self {
            Basis::L(n) | Basis::I(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_central_symbol(self) -> bool {
        matches!(self, Basis::CL | Basis::CLI | Basis::CI)
    }

    /// Spans the center together with the three central symbols.
    pub fn is_in_center(self) -> bool {
        self.is_central_symbol() || self == Basis::I(0)
    }

    /// Key for sweeps over a window: shell `|n|` first (centrals live in shell 0),
    /// positive before negative index, `L` before `I`.
    pub fn sweep_key(self) -> (u64, u8, u8) {
        match self {
            Basis::L(n) => (n.unsigned_abs(), u8::from(n < 0), 0),
            Basis::I(n) => (n.unsigned_abs(), u8::from(n < 0), 1),
            Basis::CL => (0, 2, 0),
            Basis::CLI => (0, 2, 1),
            Basis::CI => (0, 2, 2),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::L(n) => write!(f, "L[{n}]"),
            Basis::I(n) => write!(f, "I[{n}]"),
            Basis::CL => f.write_str("C_L"),
            Basis::CLI => f.write_str("C_LI"),
            Basis::CI => f.write_str("C_I"),
        }
    }
}

/// `W_N`: `L_n, I_n` for `|n| <= N` plus the three centrals, in canonical order.
pub fn window_basis(n: i64) -> Vec<Basis> {
    let n = n.max(0);
    let mut out: Vec<Basis> = (-n..=n).map(Basis::L).collect();
    out.extend((-n..=n).map(Basis::I));
    out.extend([Basis::CL, Basis::CLI, Basis::CI]);
    out
}

/// [`window_basis`] sorted by [`Basis::sweep_key`].
pub fn window_sweep_order(n: i64) -> Vec<Basis> {
    let mut out = window_basis(n);
    out.sort_by_key(|b| b.sweep_key());
    out
}

/// Sign of the `C_LI` cocycle in `[L_n, I_m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CocycleSign {
    /// `sigma = +1`, the relations exactly as usually printed.
    Paper,
    /// `sigma = -1`, under which all three outer maps are derivations.
    #[default]
    Consistent,
}

impl CocycleSign {
    pub const BOTH: [CocycleSign; 2] = [CocycleSign::Paper, CocycleSign::Consistent];

    pub fn sigma(self) -> i128 {
        match self {
            CocycleSign::Paper => 1,
            CocycleSign::Consistent => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CocycleSign::Paper => "paper",
            CocycleSign::Consistent => "consistent",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(CocycleSign::Paper),
            "consistent" => Some(CocycleSign::Consistent),
            _ => None,
        }
    }
}

impl fmt::Display for CocycleSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finitely supported linear combination of basis symbols. No zero coefficient
/// is ever stored, so structural equality is equality of elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element<S> {
    terms: BTreeMap<Basis, S>,
}

impl<S> Default for Element<S> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: Basis) -> Self {
        Self::term(S::one(), b)
    }

    pub fn term(c: S, b: Basis) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn l(n: i64) -> Self {
        Self::basis(Basis::L(n))
    }

    pub fn i(n: i64) -> Self {
        Self::basis(Basis::I(n))
    }

    pub fn c_l() -> Self {
        Self::basis(Basis::CL)
    }

    pub fn c_li() -> Self {
        Self::basis(Basis::CLI)
    }

    pub fn c_i() -> Self {
        Self::basis(Basis::CI)
    }

    pub fn from_terms<I: IntoIterator<Item = (Basis, S)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Basis, &S)> + '_ {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Basis> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, b: Basis) -> S {
        self.terms.get(&b).cloned().unwrap_or_else(S::zero)
    }

    pub fn contains(&self, b: Basis) -> bool {
        self.terms.contains_key(&b)
    }

    /// Largest `|n|` over the indexed terms, or `None` if there are none.
    pub fn max_abs_index(&self) -> Option<i64> {
        self.terms
            .keys()
            .filter_map(|b| b.index())
            .map(i64::abs)
            .max()
    }

    pub fn add_term(&mut self, b: Basis, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, k: &S, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (b, c) in &other.terms {
            self.add_term(*b, k.clone() * c.clone());
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms whose basis symbol satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(Basis) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Maps every term through a linear map given on basis symbols.
    pub fn map_linear(&self, mut f: impl FnMut(Basis) -> Self) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_scaled(c, &f(*b));
        }
        out
    }
}

impl<S: Scalar> Add for Element<S> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

impl<S: Scalar> Add for &Element<S> {
    type Output = Element<S>;

    fn add(self, rhs: Self) -> Element<S> {
        self.clone() + rhs.clone()
    }
}

impl<S: Scalar> Sub for Element<S> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (b, c) in rhs.terms {
            self.add_term(b, -c);
        }
        self
    }
}

impl<S: Scalar> Sub for &Element<S> {
    type Output = Element<S>;

    fn sub(self, rhs: Self) -> Element<S> {
        self.clone() - rhs.clone()
    }
}

impl<S: Scalar> Neg for Element<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    /// Canonical text form, e.g. `4*L[0] + 1/2*C_L`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (b, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if magnitude.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{magnitude}*{b}")?;
            }
        }
        Ok(())
    }
}

/// Bracket of two basis symbols.
pub fn bracket_basis<S: Scalar>(x: Basis, y: Basis, sign: CocycleSign) -> Element<S> {
    let int = |v: i128| S::from_int(v);
    match (x, y) {
        (Basis::L(n), Basis::L(m)) => {
            let (n, m) = (i128::from(n), i128::from(m));
            let mut e = Element::term(int(n - m), Basis::L((n + m) as i64));
            if n + m == 0 {
                e.add_term(Basis::CL, int(n * n * n - n) / int(12));
            }
            e
        }
        (Basis::L(n), Basis::I(m)) => {
            let (n, m) = (i128::from(n), i128::from(m));
            let mut e = Element::term(int(-m), Basis::I((n + m) as i64));
            if n + m == 0 {
                e.add_term(Basis::CLI, int(sign.sigma() * (n * n + n)));
            }
            e
        }
        (Basis::I(_), Basis::L(_)) => -bracket_basis(y, x, sign),
        (Basis::I(n), Basis::I(m)) => {
            if i128::from(n) + i128::from(m) == 0 {
                Element::term(int(i128::from(n)), Basis::CI)
            } else {
                Element::zero()
            }
        }
        _ => Element::zero(),
    }
}

/// Bilinear extension of [`bracket_basis`].
pub fn bracket<S: Scalar>(x: &Element<S>, y: &Element<S>, sign: CocycleSign) -> Element<S> {
    let mut out = Element::zero();
    for (a, ca) in x.terms() {
        if a.is_central_symbol() {
            continue;
        }
        for (b, cb) in y.terms() {
            if b.is_central_symbol() {
                continue;
            }
            out.add_scaled(&(ca.clone() * cb.clone()), &bracket_basis(a, b, sign));
        }
    }
    out
}

/// Removes the `I_0`, `C_L`, `C_LI`, `C_I` components: the canonical
/// representative of `x` modulo the center.
pub fn center_project<S: Scalar>(x: &Element<S>) -> Element<S> {
    x.filter(|b| !b.is_in_center())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation<S> {
    pub triple: [Basis; 3],
    pub value: Element<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiReport<S> {
    pub max_degree: i64,
    pub sign: CocycleSign,
    pub triples_checked: usize,
    pub violations: Vec<JacobiViolation<S>>,
}

impl<S> JacobiReport<S> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `[[a,b],c] + [[b,c],a] + [[c,a],b]` on basis symbols.
pub fn jacobiator<S: Scalar>(a: Basis, b: Basis, c: Basis, sign: CocycleSign) -> Element<S> {
    let (a, b, c) = (Element::basis(a), Element::basis(b), Element::basis(c));
    bracket(&bracket(&a, &b, sign), &c, sign)
        + bracket(&bracket(&b, &c, sign), &a, sign)
        + bracket(&bracket(&c, &a, sign), &b, sign)
}

/// Evaluates the Jacobi identity on every unordered triple (with repetition) of
/// symbols in `W_max_degree`. Violations come back in sweep order.
pub fn jacobi_check<S: Scalar>(max_degree: i64, sign: CocycleSign) -> JacobiReport<S> {
    let symbols = window_sweep_order(max_degree);
    let n = symbols.len();
    let mut triples = Vec::with_capacity(n * n * n / 6 + n * n);
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                triples.push([symbols[i], symbols[j], symbols[k]]);
            }
        }
    }
    let violations = triples
        .par_iter()
        .filter_map(|t| {
            let value = jacobiator::<S>(t[0], t[1], t[2], sign);
            (!value.is_zero()).then(|| JacobiViolation { triple: *t, value })
        })
        .collect();
    JacobiReport {
        max_degree,
        sign,
        triples_checked: triples.len(),
        violations,
    }
}
