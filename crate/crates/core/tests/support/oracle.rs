//! Brute-force oracle for single-constraint kernels `D(x) = 0`.
//!
//! Builds the constraint matrix straight from the closed-form structure constants
//! (no engine bracket, no engine outer maps) and measures it with an independent
//! integer row reduction. C_L rows are scaled by 12 so every entry is an integer.

#![allow(dead_code, clippy::upper_case_acronyms, clippy::needless_range_loop)]

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sym {
    L(i64),
    I(i64),
    CL,
    CLI,
    CI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    A(i64),
    B(i64),
    Alpha,
    Beta,
    Gamma,
}

pub struct Oracle {
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Vec<i128>>,
}

fn d(n: i64, m: i64) -> bool {
    n + m == 0
}

/// Image of a single unit unknown on a single basis symbol, with C_L scaled by 12.
fn unit_image(u: Unknown, x: Sym, sigma: i128) -> Vec<(Sym, i128)> {
    let mut out = Vec::new();
    match (u, x) {
        (Unknown::A(j), Sym::L(i)) => {
            out.push((Sym::L(i + j), (j - i) as i128));
            if d(i, j) {
                let j = j as i128;
                out.push((Sym::CL, j * j * j - j));
            }
        }
        (Unknown::A(j), Sym::I(i)) => {
            out.push((Sym::I(i + j), -(i as i128)));
            if d(i, j) {
                let j = j as i128;
                out.push((Sym::CLI, sigma * (j * j + j)));
            }
        }
        (Unknown::B(j), Sym::L(i)) => {
            out.push((Sym::I(i + j), j as i128));
            if d(i, j) {
                let i = i as i128;
                out.push((Sym::CLI, -sigma * (i * i + i)));
            }
        }
        (Unknown::B(j), Sym::I(i)) => {
            if d(i, j) {
                out.push((Sym::CI, j as i128));
            }
        }
        (Unknown::Alpha, Sym::I(i)) => out.push((Sym::I(i), 1)),
        (Unknown::Alpha, Sym::CLI) => out.push((Sym::CLI, 1)),
        (Unknown::Alpha, Sym::CI) => out.push((Sym::CI, 2)),
        (Unknown::Beta, Sym::L(n)) => {
            out.push((Sym::I(n), n as i128));
            if n == 0 {
                out.push((Sym::CLI, 1));
            }
        }
        (Unknown::Beta, Sym::I(0)) => out.push((Sym::CI, -1)),
        (Unknown::Gamma, Sym::L(n)) => out.push((Sym::I(n), n as i128 + 1)),
        (Unknown::Beta | Unknown::Gamma, Sym::CL) => out.push((Sym::CLI, 24)),
        (Unknown::Beta | Unknown::Gamma, Sym::CLI) => out.push((Sym::CI, -1)),
        _ => {}
    }
    out
}

impl Oracle {
    /// Matrix of `D(x) = 0` for `x = sum terms`, unknowns `a_{-m..m}`,
    /// `b_{-m..m}` minus `b_0`, `alpha`, `beta`, `gamma`.
    pub fn new(terms: &[(Sym, i128)], m: i64, sigma: i128) -> Self {
        let mut unknowns: Vec<Unknown> = (-m..=m).map(Unknown::A).collect();
        unknowns.extend((-m..=m).filter(|&j| j != 0).map(Unknown::B));
        unknowns.extend([Unknown::Alpha, Unknown::Beta, Unknown::Gamma]);

        let mut by_symbol: BTreeMap<Sym, Vec<i128>> = BTreeMap::new();
        for (col, &u) in unknowns.iter().enumerate() {
            for &(x, c) in terms {
                for (s, v) in unit_image(u, x, sigma) {
                    let row = by_symbol
                        .entry(s)
                        .or_insert_with(|| vec![0; unknowns.len()]);
                    row[col] += c * v;
                }
            }
        }
        let rows = by_symbol
            .into_values()
            .filter(|r| r.iter().any(|&v| v != 0))
            .collect();
        Self { unknowns, rows }
    }

    pub fn col(&self, u: Unknown) -> usize {
        self.unknowns.iter().position(|&v| v == u).unwrap()
    }

    pub fn rank_of(rows: &[Vec<i128>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let (f, g) = (m[r][c], m[rank][c]);
                    for k in 0..cols {
                        m[r][k] = m[r][k] * g - m[rank][k] * f;
                    }
                    let gcd = m[r].iter().fold(0i128, |a, &b| gcd(a, b.abs()));
                    if gcd > 1 {
                        m[r].iter_mut().for_each(|v| *v /= gcd);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.unknowns.len() - Self::rank_of(&self.rows)
    }

    /// `true` iff `sum coeffs[u] * u = 0` holds on the whole kernel, i.e. the
    /// functional lies in the row space.
    pub fn functional_vanishes(&self, coeffs: &[(Unknown, i128)]) -> bool {
        let mut extra = vec![0; self.unknowns.len()];
        for &(u, c) in coeffs {
            extra[self.col(u)] = c;
        }
        let mut rows = self.rows.clone();
        let before = Self::rank_of(&rows);
        rows.push(extra);
        Self::rank_of(&rows) == before
    }

    pub fn forced(&self) -> Vec<Unknown> {
        self.unknowns
            .iter()
            .copied()
            .filter(|&u| self.functional_vanishes(&[(u, 1)]))
            .collect()
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
