//! Matrix interchange format: `{"n": 2, "data": [[[re, im], ...], ...]}`.

use serde::{Deserialize, Serialize};
use uqg::{ComplexMatrix, C64};

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixDocument {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.data.len() != self.n || self.data.iter().any(|r| r.len() != self.n) {
            return Err(format!("data must be a {0}x{0} array of [re, im] pairs", self.n));
        }
        for row in &self.data {
            for &[re, im] in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err("matrix entries must be finite".into());
                }
            }
        }
        let rows: Vec<Vec<C64>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(|e| e.to_string())
    }

    pub fn from_matrix(q: &ComplexMatrix) -> Self {
        let n = q.n();
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = q.get(i, j);
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect();
        MatrixDocument { n, data }
    }
}
