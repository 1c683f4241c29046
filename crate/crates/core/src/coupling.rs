//! Unitary coupling matrices for the standard families.

use crate::{linalg, CMatrix, Error, Result, VertexCoupling, C64};

/// Allowed `max |U^*U - I|` for user-supplied matrices.
pub const UNITARITY_TOL: f64 = 1e-12;

/// The `d × d` unitary matrix `U` of a coupling family at a vertex of degree `d`.
pub fn coupling_matrix(c: &VertexCoupling, d: usize) -> Result<CMatrix> {
    let id = linalg::identity(d);
    let j = linalg::ones(d);
    let df = d as f64;
    Ok(match c {
        VertexCoupling::Standard => j * C64::new(2.0 / df, 0.0) - id,
        VertexCoupling::Delta(alpha) => j * (C64::new(2.0, 0.0) / C64::new(df, *alpha)) - id,
        VertexCoupling::DeltaPrimeS(beta) => id - j * (C64::new(2.0, 0.0) / C64::new(df, -*beta)),
        VertexCoupling::Dirichlet => -id,
        VertexCoupling::Neumann => id,
        VertexCoupling::Robin(alpha) => {
            if d != 1 {
                return Err(Error::RobinDegree { vertex: String::new(), degree: d });
            }
            // (u - 1) f + i (u + 1) f' = 0 with f' = α f
            let u = -C64::new(*alpha, 1.0) / C64::new(*alpha, -1.0);
            CMatrix::from_element(1, 1, u)
        }
        VertexCoupling::General(u) => {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::CouplingSize { vertex: String::new(), rows: u.nrows(), cols: u.ncols(), degree: d });
            }
            u.clone()
        }
    })
}
