//! Reference tables shipped with the crate, parsed from plain text.
//!
//! Lines starting with `#` are comments. Fields are whitespace-separated.

use std::str::FromStr;

const SOLUTIONS: &str = include_str!("../fixtures/solutions.txt");
const CURVE_SURVIVORS: &str = include_str!("../fixtures/curve_survivors.txt");
const GAUSSIAN_EQUATIONS: &str = include_str!("../fixtures/gaussian_equations.txt");
const PYTHAG: &str = include_str!("../fixtures/pythag.txt");
const GAUSSIAN_CASES: &str = include_str!("../fixtures/gaussian_cases.txt");

fn rows(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn nums<T: FromStr>(s: &str) -> Vec<T>
where
    T::Err: std::fmt::Debug,
{
    s.split_whitespace().map(|w| w.parse().expect("numeric field")).collect()
}

/// A representable `n` with its smallest solution `x^4 - y^4 = n z^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionRow {
    pub n: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// An equation `A u^8 + B v^8 = C w^4` left over by the curve methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquationRow {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// A split `(d, e)` of a square-`c` equation and the modulus obstructing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PythagRow {
    pub n: u64,
    pub u_coef: u64,
    pub v_coef: u64,
    pub w_coef: u64,
    pub d: u64,
    pub e: u64,
    pub modulus: u64,
}

/// How a quartic system is eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mechanism {
    /// No `Q_p` points on the scheme.
    Scheme(u64),
    /// A classical form forces `st = 0`.
    Mordell,
    /// No `Q_p` points once `v` is required to be a `p`-adic unit.
    UnitV(u64),
}

impl FromStr for Mechanism {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let prime = |t: &str| t.parse::<u64>().map_err(|e| e.to_string());
        match s.split_once(':') {
            Some(("scheme", p)) => Ok(Mechanism::Scheme(prime(p)?)),
            Some(("unit-v", p)) => Ok(Mechanism::UnitV(prime(p)?)),
            None if s == "mordell" => Ok(Mechanism::Mordell),
            _ => Err(format!("unknown mechanism {s}")),
        }
    }
}

/// One system `F = a u^4, G = b v^4` from the Gaussian case analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussianRow {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub alpha: (i64, i64),
    pub epsilon: u8,
    pub f: [i64; 5],
    pub g: [i64; 5],
    pub mechanism: Mechanism,
}

pub fn rational_solutions() -> Vec<SolutionRow> {
    rows(SOLUTIONS)
        .map(|l| {
            let v: Vec<u64> = nums(l);
            SolutionRow {
                n: v[0],
                x: v[1],
                y: v[2],
                z: v[3],
            }
        })
        .collect()
}

fn equations(text: &str) -> Vec<EquationRow> {
    rows(text)
        .map(|l| {
            let v: Vec<u64> = nums(l);
            EquationRow {
                n: v[0],
                a: v[1],
                b: v[2],
                c: v[3],
            }
        })
        .collect()
}

/// Equations the curve methods could not settle.
pub fn curve_survivors() -> Vec<EquationRow> {
    equations(CURVE_SURVIVORS)
}

/// Equations settled by factoring over the Gaussian integers.
pub fn gaussian_equations() -> Vec<EquationRow> {
    equations(GAUSSIAN_EQUATIONS)
}

pub fn pythag_rows() -> Vec<PythagRow> {
    rows(PYTHAG)
        .map(|l| {
            let v: Vec<u64> = nums(l);
            PythagRow {
                n: v[0],
                u_coef: v[1],
                v_coef: v[2],
                w_coef: v[3],
                d: v[4],
                e: v[5],
                modulus: v[6],
            }
        })
        .collect()
}

pub fn gaussian_rows() -> Vec<GaussianRow> {
    rows(GAUSSIAN_CASES)
        .map(|l| {
            let parts: Vec<&str> = l.split('|').map(str::trim).collect();
            let head: Vec<i64> = nums(parts[0]);
            let f: Vec<i64> = nums(parts[1]);
            let g: Vec<i64> = nums(parts[2]);
            GaussianRow {
                n: head[0] as u64,
                a: head[1] as u64,
                b: head[2] as u64,
                alpha: (head[3], head[4]),
                epsilon: head[5] as u8,
                f: f.try_into().expect("five coefficients"),
                g: g.try_into().expect("five coefficients"),
                mechanism: parts[3].parse().expect("mechanism"),
            }
        })
        .collect()
}
