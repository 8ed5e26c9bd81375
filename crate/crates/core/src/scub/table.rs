//! The homogeneous-lattice optimum table: for the honeycomb lattice and
//! its line graph, the optimal homogeneous ρ of each SCUB shape at an
//! interior vertex, computed from the closed-form interior neighbourhood.

use crate::error::Result;
use crate::lattice::{hex_interior_neighbourhood, line_interior_neighbourhood};
use crate::scub::{optimal_rho, LeopKind};

#[derive(Debug, Clone)]
pub struct TableRow {
    pub lattice: &'static str,
    pub scub: &'static str,
    pub shape: &'static str,
    pub optimal_rho: f64,
}

/// The eight rows: lattice × {Dobrushin, FP, reduced, returning}.
pub fn optimum_table() -> Result<Vec<TableRow>> {
    let (hex, hex_g) = hex_interior_neighbourhood();
    let (line, line_g) = line_interior_neighbourhood();
    let kinds = [
        (LeopKind::Dobrushin, "Dob"),
        (LeopKind::Fp, "FP"),
        (LeopKind::Reduced, "reduced"),
        (LeopKind::Returning, "returning"),
    ];
    let shapes_hex = [
        "(1+u)^4",
        "u + (1+u)^3",
        "(1+u)(1+u)^2",
        "(1+u)(1+u)^2",
    ];
    let shapes_line = [
        "(1+u)^5",
        "u + (1+2u)^2",
        "(1+u)(1+u)^3",
        "(1+u)(1+u)(1+2u)",
    ];
    let mut rows = Vec::new();
    for (i, (kind, name)) in kinds.iter().enumerate() {
        rows.push(TableRow {
            lattice: "hex",
            scub: name,
            shape: shapes_hex[i],
            optimal_rho: optimal_rho(kind, &hex, hex_g)?,
        });
    }
    for (i, (kind, name)) in kinds.iter().enumerate() {
        rows.push(TableRow {
            lattice: "line",
            scub: name,
            shape: shapes_line[i],
            optimal_rho: optimal_rho(kind, &line, line_g)?,
        });
    }
    Ok(rows)
}
