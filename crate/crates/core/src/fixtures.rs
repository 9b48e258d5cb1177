//! The explicit surfaces used as witnesses.

use serde::Serialize;

use crate::finite_field::{Fe, Field};
use crate::projective::{Line3, QuarticSurface};

/// A named example surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fixture {
    /// λ x0 x1^2 x2 + x1^4 + x1 x2^3 + x0^3 x3 + x0 x2 x3^2, with λ given by
    /// its bitmask in the chosen field.
    FamilyX { lambda: u32 },
    /// 16 lines meet x0 = x1 = 0 (quasi-elliptic, degree 3).
    Ex16,
    /// Exactly 20 lines; x0 = x1 = 0 is cuspidal.
    Ex20,
    /// x0 = x1 = 0 is separable quasi-elliptic of degree 2 and valency 12.
    Ex12,
}

pub const FAMILY_X_TERMS: [[usize; 4]; 4] = [[0, 4, 0, 0], [0, 1, 3, 0], [3, 0, 0, 1], [1, 0, 1, 2]];
pub const FAMILY_X_LAMBDA_TERM: [usize; 4] = [1, 2, 1, 0];

pub const EX16_TERMS: [[usize; 4]; 8] = [
    [3, 1, 0, 0],
    [1, 3, 0, 0],
    [1, 0, 3, 0],
    [2, 1, 0, 1],
    [0, 1, 2, 1],
    [2, 0, 0, 2],
    [0, 2, 0, 2],
    [1, 0, 0, 3],
];

pub const EX20_TERMS: [[usize; 4]; 4] = [[4, 0, 0, 0], [0, 1, 3, 0], [0, 3, 0, 1], [1, 0, 1, 2]];

pub const EX12_TERMS: [[usize; 4]; 12] = [
    [3, 1, 0, 0],
    [2, 2, 0, 0],
    [1, 3, 0, 0],
    [2, 1, 1, 0],
    [1, 2, 1, 0],
    [2, 0, 2, 0],
    [1, 1, 2, 0],
    [0, 1, 3, 0],
    [1, 2, 0, 1],
    [0, 1, 2, 1],
    [0, 2, 0, 2],
    [1, 0, 1, 2],
];

impl Fixture {
    pub fn name(&self) -> String {
        match self {
            Fixture::FamilyX { lambda } => format!("familyX(lambda={lambda})"),
            Fixture::Ex16 => "EX16".into(),
            Fixture::Ex20 => "EX20".into(),
            Fixture::Ex12 => "EX12".into(),
        }
    }

    /// Parse `familyX`, `familyX:λ`, `EX16`, `EX20` or `EX12`.
    pub fn parse(s: &str) -> Option<Fixture> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "ex16" => Some(Fixture::Ex16),
            "ex20" => Some(Fixture::Ex20),
            "ex12" => Some(Fixture::Ex12),
            "familyx" | "x" => Some(Fixture::FamilyX { lambda: 1 }),
            _ => {
                let rest = lower.strip_prefix("familyx:")?;
                rest.parse().ok().map(|lambda| Fixture::FamilyX { lambda })
            }
        }
    }

    /// The surface over `field` (the coefficients lie in GF(2), except λ).
    pub fn surface(&self, field: Field) -> QuarticSurface {
        let terms: Vec<([usize; 4], Fe)> = match self {
            Fixture::FamilyX { lambda } => FAMILY_X_TERMS
                .iter()
                .map(|&e| (e, field.one()))
                .chain(std::iter::once((FAMILY_X_LAMBDA_TERM, field.elem(*lambda))))
                .collect(),
            Fixture::Ex16 => EX16_TERMS.iter().map(|&e| (e, field.one())).collect(),
            Fixture::Ex20 => EX20_TERMS.iter().map(|&e| (e, field.one())).collect(),
            Fixture::Ex12 => EX12_TERMS.iter().map(|&e| (e, field.one())).collect(),
        };
        QuarticSurface::from_terms(field, &terms).expect("fixture is a nonzero quartic")
    }

    /// The distinguished line of the example.
    pub fn line(&self, field: Field) -> Line3 {
        let (o, z) = (field.one(), field.zero());
        match self {
            // x1 = x3 = 0
            Fixture::FamilyX { .. } => Line3::from_equations([z, o, z, z], [z, z, z, o]).unwrap(),
            // x0 = x1 = 0
            _ => Line3::from_equations([o, z, z, z], [z, o, z, z]).unwrap(),
        }
    }
}

/// Family X at the given λ.
pub fn family_x(field: Field, lambda: Fe) -> QuarticSurface {
    Fixture::FamilyX { lambda: lambda.bits() }.surface(field)
}
