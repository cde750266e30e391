//! The oracle ledger: one row per reference value, written to
//! `oracle_ledger.csv` so every derived number in the test suite can be
//! traced and regenerated.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{grid_fekete, mc_sphere_potential, reference_energy, sphere_potential_quadrature};
use crate::{uniform_sphere_samples, Result};

/// One reference value. Rerunning the named oracle on `inputs` with `seed`
/// reproduces `value` bitwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub name: String,
    pub inputs: String,
    pub value: f64,
    pub error_estimate: f64,
    pub seed: u64,
}

impl OracleRecord {
    fn new(name: &str, inputs: &str, value: f64, error_estimate: f64, seed: u64) -> Self {
        OracleRecord {
            name: name.to_string(),
            inputs: inputs.to_string(),
            value,
            error_estimate,
            seed,
        }
    }
}

pub fn write_csv<W: Write>(records: &[OracleRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<OracleRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Node count of the sphere quadratures in the ledger.
pub const LEDGER_NODES: usize = 4096;

/// Regenerates every ledger row, in ledger order.
pub fn standard_records() -> Result<Vec<OracleRecord>> {
    let mut out = Vec::new();
    out.push(OracleRecord::new(
        "reference_energy",
        "pair at distance 1;d=3;alpha=2",
        reference_energy(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0], 3, 2.0)?,
        0.0,
        0,
    ));
    let h = 0.5f64.sqrt();
    out.push(OracleRecord::new(
        "reference_energy",
        "tetrahedron edge 1;d=3;alpha=2",
        reference_energy(&[0.5, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.5, h, 0.0, -0.5, h], 3, 2.0)?,
        0.0,
        0,
    ));
    for (n, grid) in [(2, 64), (3, 64), (4, 32)] {
        let g = grid_fekete(n, grid, 2.0)?;
        out.push(OracleRecord::new(
            "grid_fekete",
            &format!("unit sphere;n={n};grid={grid};alpha=2"),
            g.energy,
            g.grid_energy - g.energy,
            0,
        ));
    }
    let mut quad = |label: &str, y: [f64; 3]| -> Result<f64> {
        let q = sphere_potential_quadrature(1.0, &y, LEDGER_NODES)?;
        out.push(OracleRecord::new(
            "sphere_potential_quadrature",
            &format!("R=1;d=3;y={label};nodes={LEDGER_NODES}"),
            q.value,
            q.error_estimate,
            0,
        ));
        Ok(q.value)
    };
    let w = quad("origin", [0.0, 0.0, 0.0])?;
    quad("(2,0,0)", [2.0, 0.0, 0.0])?;
    quad("(0.5,0,0)", [0.5, 0.0, 0.0])?;
    let u3 = quad("(3,0,0)", [3.0, 0.0, 0.0])?;
    // two antipodal points on the unit sphere, r = 1:
    // 2 m_E + (1/2) I + r^(2-d)/n - W + 2 g(1 + 2r)
    out.push(OracleRecord::new(
        "discrepancy_composite",
        "antipodal pair;unit sphere;r=1;from quadrature W and U(3,0,0)",
        0.0 + 0.5 * 0.5 - w + 0.5 + 2.0 * (w - u3),
        0.0,
        0,
    ));
    let samples = uniform_sphere_samples(10_000, 3, 1.0, 0);
    let (mean, se) = mc_sphere_potential(&samples, 3, &[2.0, 0.0, 0.0]);
    out.push(OracleRecord::new(
        "mc_potential_error",
        "unit sphere;n=10000;y=(2,0,0);|U(y) - mean|",
        (0.5 - mean).abs(),
        se,
        0,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let records = vec![
            OracleRecord::new("a", "x=1;y=2", 0.1 + 0.2, 1e-17, 3),
            OracleRecord::new("b", "quoted, \"input\"", f64::MIN_POSITIVE, 0.0, u64::MAX),
        ];
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
    }
}
