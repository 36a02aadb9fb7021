//! The named ideals: nc trigonometric (`T′`, `T`), spherical (`S′`, `S`),
//! unitary group (`U′`, `U`) and the commutator-inverse one-relator ideal.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IdealError, Parts, RRIdeal};
use crate::matrix::MatrixExact;
use crate::ncpoly::{Letter, NcPoly};
use crate::ratexpr::{parse_polynomial, RatExpr};
use crate::realization::{Basepoint, ScalarRep, SparseMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealKind {
    Tprime,
    Sprime,
    Uprime,
    CommInv,
    T,
    S,
    U,
}

impl IdealKind {
    pub const ALL: [IdealKind; 7] = [
        IdealKind::Tprime,
        IdealKind::Sprime,
        IdealKind::Uprime,
        IdealKind::CommInv,
        IdealKind::T,
        IdealKind::S,
        IdealKind::U,
    ];

    pub fn is_star(self) -> bool {
        matches!(self, IdealKind::T | IdealKind::S | IdealKind::U)
    }

    /// The only admissible `g` for fixed-alphabet ideals.
    pub fn fixed_g(self) -> Option<usize> {
        (self == IdealKind::CommInv).then_some(3)
    }
}

impl fmt::Display for IdealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealKind::Tprime => "T'",
            IdealKind::Sprime => "S'",
            IdealKind::Uprime => "U'",
            IdealKind::CommInv => "CommInv",
            IdealKind::T => "T",
            IdealKind::S => "S",
            IdealKind::U => "U",
        })
    }
}

impl FromStr for IdealKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "T'" | "Tprime" => IdealKind::Tprime,
            "S'" | "Sprime" => IdealKind::Sprime,
            "U'" | "Uprime" => IdealKind::Uprime,
            "CommInv" | "comminv" => IdealKind::CommInv,
            "T" => IdealKind::T,
            "S" => IdealKind::S,
            "U" => IdealKind::U,
            other => return Err(format!("unknown ideal `{other}`")),
        })
    }
}

fn poly(text: &str, g: usize) -> NcPoly {
    parse_polynomial(text, g).expect("built-in generator text")
}

fn x(i: usize) -> Letter {
    Letter::x(i as u32)
}

fn scalar_bp(pairs: Vec<(Letter, i64)>) -> std::sync::Arc<Basepoint> {
    Basepoint::scalar(pairs.into_iter().map(|(l, v)| (l, Scalar::from_int(v))).collect())
}

pub fn builtin_ideal(kind: IdealKind, g: usize) -> Result<RRIdeal, IdealError> {
    let out_of_range = || Err(IdealError::GOutOfRange { kind, g });
    if g == 0 || kind.fixed_g().is_some_and(|f| f != g) {
        return out_of_range();
    }
    let parts = match kind {
        IdealKind::Tprime | IdealKind::T => trigonometric(kind, g),
        IdealKind::Sprime | IdealKind::S if g < 2 => return out_of_range(),
        IdealKind::Sprime | IdealKind::S => spherical(kind, g),
        IdealKind::Uprime | IdealKind::U => unitary_group(kind, g),
        IdealKind::CommInv => comm_inv(),
    };
    RRIdeal::build(parts)
}

fn trigonometric(kind: IdealKind, g: usize) -> Parts {
    let star = kind == IdealKind::T;
    let partner = |j: usize| if star { Letter::x_star(j as u32) } else { Letter::y(j as u32) };
    let mut generators = Vec::new();
    let mut resolvent = Vec::new();
    for j in 1..=g {
        let (a, b) = (x(j), partner(j));
        generators.push(poly(&format!("1 - {a} {b}"), g));
        generators.push(poly(&format!("1 - {b} {a}"), g));
        resolvent.push((b, RatExpr::inv(RatExpr::var(a))));
    }
    Parts {
        name: kind.to_string(),
        kind: Some(kind),
        g,
        family_g: g,
        star,
        generators,
        resolvent,
        basepoint: scalar_bp((1..=g).map(|j| (x(j), 1)).collect()),
        n: 1,
        leaves: None,
    }
}

fn spherical(kind: IdealKind, g: usize) -> Parts {
    let star = kind == IdealKind::S;
    let partner = |j: usize| if star { Letter::x_star(j as u32) } else { Letter::y(j as u32) };
    // S′: Σ X_j Y_j = 1, Y_1 = X_1^{-1}(1 − Σ_{j≥2} X_j Y_j).
    // S: Σ X_j^* X_j = 1, X_1^* = (1 − Σ_{j≥2} X_j^* X_j) X_1^{-1}.
    let pair = |j: usize| if star { format!("{} {}", partner(j), x(j)) } else { format!("{} {}", x(j), partner(j)) };
    let all: Vec<String> = (1..=g).map(pair).collect();
    let generators = vec![poly(&format!("1 - {}", all.join(" - ")), g)];
    let rest = RatExpr::sum(
        std::iter::once(RatExpr::int(1))
            .chain((2..=g).map(|j| {
                let (a, b) = if star { (partner(j), x(j)) } else { (x(j), partner(j)) };
                RatExpr::neg(RatExpr::product(vec![RatExpr::var(a), RatExpr::var(b)]))
            }))
            .collect(),
    );
    let inv = RatExpr::inv(RatExpr::var(x(1)));
    let expr = if star { RatExpr::product(vec![rest, inv]) } else { RatExpr::product(vec![inv, rest]) };
    let mut bp = vec![(x(1), 1)];
    for j in 2..=g {
        bp.push((x(j), 0));
        bp.push((partner(j), 0));
    }
    Parts {
        name: kind.to_string(),
        kind: Some(kind),
        g,
        family_g: g,
        star,
        generators,
        resolvent: vec![(partner(1), expr)],
        basepoint: scalar_bp(bp),
        n: g + 1,
        leaves: None,
    }
}

fn comm_inv() -> Parts {
    let comm = RatExpr::sub(
        RatExpr::product(vec![RatExpr::var(x(1)), RatExpr::var(x(2))]),
        RatExpr::product(vec![RatExpr::var(x(2)), RatExpr::var(x(1))]),
    );
    let basepoint = Basepoint::new(vec![(x(1), MatrixExact::unit(2, 0, 1)), (x(2), MatrixExact::unit(2, 1, 0))])
        .expect("2x2 base point");
    Parts {
        name: IdealKind::CommInv.to_string(),
        kind: Some(IdealKind::CommInv),
        g: 3,
        family_g: 3,
        star: false,
        generators: vec![poly("1 - (X1 X2 - X2 X1) X3", 3)],
        resolvent: vec![(x(3), RatExpr::inv(comm))],
        basepoint,
        n: 3,
        leaves: None,
    }
}

/// Letter of the matrix entry `(i, j)` (zero-based) of a `g×g` matrix of letters.
pub fn entry_index(g: usize, i: usize, j: usize) -> u32 {
    (i * g + j + 1) as u32
}

fn unitary_group(kind: IdealKind, g: usize) -> Parts {
    let star = kind == IdealKind::U;
    let gg = g * g;
    let xl = |i: usize, j: usize| Letter::x(entry_index(g, i, j));
    // entry (i, j) of the partner matrix: Y_ij, or (X^*)_ij = X_ji^*
    let partner =
        |i: usize, j: usize| if star { Letter::x_star(entry_index(g, j, i)) } else { Letter::y(entry_index(g, i, j)) };
    let mut generators = Vec::new();
    for left in [true, false] {
        for i in 0..g {
            for j in 0..g {
                let terms: Vec<String> = (0..g)
                    .map(|k| {
                        let (a, b) = if left { (xl(i, k), partner(k, j)) } else { (partner(i, k), xl(k, j)) };
                        format!("{a} {b}")
                    })
                    .collect();
                let delta = if i == j { " - 1" } else { "" };
                generators.push(poly(&format!("{}{delta}", terms.join(" + ")), gg));
            }
        }
    }
    let inverse = symbolic_matrix_inverse(g);
    let mut resolvent = Vec::new();
    let mut leaves = BTreeMap::new();
    for i in 0..g {
        for j in 0..g {
            resolvent.push((partner(i, j), inverse[i][j].clone()));
            leaves.insert(partner(i, j), neumann_entry(g, i, j));
        }
    }
    let bp = (0..g).flat_map(|i| (0..g).map(move |j| (i, j))).map(|(i, j)| (xl(i, j), i64::from(i == j))).collect();
    Parts {
        name: kind.to_string(),
        kind: Some(kind),
        g: gg,
        family_g: g,
        star,
        generators,
        resolvent,
        basepoint: scalar_bp(bp),
        n: g,
        leaves: Some(leaves),
    }
}

/// `e_i^T (I − (I − X))^{-1} e_j` about `X = I`: with `X = I + Y`, the state
/// matrix of `Y_kl` is `−E_kl`.
fn neumann_entry(g: usize, i: usize, j: usize) -> ScalarRep {
    let mut c = MatrixExact::zeros(1, g);
    c.set_block(0, i, &MatrixExact::identity(1));
    let mut b = MatrixExact::zeros(g, 1);
    b.set_block(j, 0, &MatrixExact::identity(1));
    let a = (0..g * g)
        .map(|l| {
            let mut s = SparseMatrix::zeros(g, g);
            s.add_at(l / g, l % g, &-Scalar::one());
            s
        })
        .collect();
    ScalarRep::new(c, a, b).expect("consistent shapes")
}

type ExprMatrix = Vec<Vec<RatExpr>>;

fn block(m: &ExprMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ExprMatrix {
    rows.map(|i| cols.clone().map(|j| m[i][j].clone()).collect()).collect()
}

/// Product with nested products spliced in, so `(A B) C` prints as `A B C`.
fn mul2(a: &RatExpr, b: &RatExpr) -> RatExpr {
    let mut factors = Vec::new();
    for e in [a, b] {
        match e {
            RatExpr::Mul(items) => factors.extend(items.iter().cloned()),
            other => factors.push(other.clone()),
        }
    }
    RatExpr::product(factors)
}

fn emul(a: &ExprMatrix, b: &ExprMatrix) -> ExprMatrix {
    let inner = b.len();
    a.iter()
        .map(|row| {
            (0..b[0].len()).map(|j| RatExpr::sum((0..inner).map(|t| mul2(&row[t], &b[t][j])).collect())).collect()
        })
        .collect()
}

fn esub(a: &ExprMatrix, b: &ExprMatrix) -> ExprMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| RatExpr::sub(x.clone(), y.clone())).collect())
        .collect()
}

/// Recursive blockwise inversion
/// `[[A, B], [C, D]]^{-1} = [[(A−BD^{-1}C)^{-1}, A^{-1}B(CA^{-1}B−D)^{-1}],
///  [(CA^{-1}B−D)^{-1}CA^{-1}, (D−CA^{-1}B)^{-1}]]`.
fn block_inverse(m: &ExprMatrix) -> ExprMatrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![RatExpr::inv(m[0][0].clone())]];
    }
    let h = n / 2;
    let (a, b) = (block(m, 0..h, 0..h), block(m, 0..h, h..n));
    let (c, d) = (block(m, h..n, 0..h), block(m, h..n, h..n));
    let a_inv = block_inverse(&a);
    let d_inv = block_inverse(&d);
    let ca_b = emul(&emul(&c, &a_inv), &b);
    let top_left = block_inverse(&esub(&a, &emul(&emul(&b, &d_inv), &c)));
    let mixed = block_inverse(&esub(&ca_b, &d));
    let top_right = emul(&emul(&a_inv, &b), &mixed);
    let bottom_left = emul(&emul(&mixed, &c), &a_inv);
    let bottom_right = block_inverse(&esub(&d, &ca_b));
    let mut out = vec![Vec::with_capacity(n); n];
    for i in 0..h {
        out[i].extend(top_left[i].iter().cloned());
        out[i].extend(top_right[i].iter().cloned());
    }
    for i in 0..n - h {
        out[h + i].extend(bottom_left[i].iter().cloned());
        out[h + i].extend(bottom_right[i].iter().cloned());
    }
    out
}

/// Entries of `X^{-1}` for the `g×g` matrix of letters `X_{(i-1)g+j}`,
/// defined at the identity pattern.
pub fn symbolic_matrix_inverse(g: usize) -> Vec<Vec<RatExpr>> {
    let m: ExprMatrix =
        (0..g).map(|i| (0..g).map(|j| RatExpr::var(Letter::x(entry_index(g, i, j)))).collect()).collect();
    block_inverse(&m)
}
