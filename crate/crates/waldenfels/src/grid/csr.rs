//! Minimal CSR sparse matrix: assembly from triplets, matvec, transpose.

#[derive(Clone, Debug)]
pub struct Csr {
    pub n_rows: usize,
    pub n_cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl Csr {
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let indptr = counts.clone();
        let mut cursor = counts;
        let nnz = triplets.len();
        let mut indices = vec![0usize; nnz];
        let mut data = vec![0.0; nnz];
        for &(r, c, v) in triplets {
            let at = cursor[r];
            indices[at] = c;
            data[at] = v;
            cursor[r] += 1;
        }
        let mut m = Csr {
            n_rows,
            n_cols,
            indptr,
            indices,
            data,
        };
        m.sort_and_merge();
        m
    }

    fn sort_and_merge(&mut self) {
        let mut new_indptr = Vec::with_capacity(self.n_rows + 1);
        let mut new_indices = Vec::with_capacity(self.indices.len());
        let mut new_data = Vec::with_capacity(self.data.len());
        new_indptr.push(0);
        for r in 0..self.n_rows {
            let (s, e) = (self.indptr[r], self.indptr[r + 1]);
            let mut row: Vec<(usize, f64)> = self.indices[s..e]
                .iter()
                .cloned()
                .zip(self.data[s..e].iter().cloned())
                .collect();
            row.sort_by_key(|&(c, _)| c);
            let mut it = row.into_iter();
            if let Some((mut pc, mut pv)) = it.next() {
                for (c, v) in it {
                    if c == pc {
                        pv += v;
                    } else {
                        new_indices.push(pc);
                        new_data.push(pv);
                        pc = c;
                        pv = v;
                    }
                }
                new_indices.push(pc);
                new_data.push(pv);
            }
            new_indptr.push(new_indices.len());
        }
        self.indptr = new_indptr;
        self.indices = new_indices;
        self.data = new_data;
    }

    #[inline]
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[s..e], &self.data[s..e])
    }

    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            let mut acc = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                acc += v * x[*c];
            }
            out[r] = acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows];
        self.matvec_into(x, &mut out);
        out
    }

    pub fn transpose(&self) -> Csr {
        let mut triplets = Vec::with_capacity(self.data.len());
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                triplets.push((*c, r, *v));
            }
        }
        Csr::from_triplets(self.n_cols, self.n_rows, &triplets)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows)
            .map(|r| self.row(r).1.iter().sum())
            .collect()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }
}
