//! Small dense linear-algebra helpers shared by the oracle and the simulator.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(c)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product with `a` as the most significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    let mut out = identity(1);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Eigen-decomposition of a hermitian matrix with eigenvalues ascending.
///
/// Each eigenvector is phase-fixed so that its largest-magnitude component is
/// real and positive (first such index on ties).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[k]);
        let mut v = eig.eigenvectors.column(k).into_owned();
        fix_phase(v.as_mut_slice());
        vecs.set_column(col, &v);
    }
    (vals, vecs)
}

/// [`hermitian_eigen`] applied to each connected block of the nonzero pattern;
/// eigenvectors vanish exactly outside their block.
pub fn hermitian_eigen_blocked(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut pairs: Vec<(f64, Vec<(usize, C64)>)> = Vec::with_capacity(n);
    for idx in components(m) {
        let sub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        let (vals, vecs) = hermitian_eigen(&sub);
        for (k, v) in vals.into_iter().enumerate() {
            pairs.push((v, idx.iter().enumerate().map(|(i, &r)| (r, vecs[(i, k)])).collect()));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vecs = CMatrix::zeros(n, n);
    for (col, (_, entries)) in pairs.iter().enumerate() {
        for &(r, z) in entries {
            vecs[(r, col)] = z;
        }
    }
    (pairs.into_iter().map(|p| p.0).collect(), vecs)
}

/// Rotate a vector's global phase so its dominant component is real positive.
pub fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs + 1e-12 {
            best_abs = a;
            best = i;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let phase = v[best].conj() / best_abs;
    for z in v.iter_mut() {
        *z *= phase;
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn matvec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    let n = m.nrows();
    let mut out = vec![ZERO; n];
    for j in 0..m.ncols() {
        let x = v[j];
        if x == ZERO {
            continue;
        }
        let col = m.column(j);
        for i in 0..n {
            out[i] += col[i] * x;
        }
    }
    out
}

/// Square operator stored as its nontrivial diagonal blocks.
///
/// Indices not covered by any block are acted on as the identity (unitaries)
/// or as zero (generators); the caller decides which reading applies.
#[derive(Debug, Clone)]
pub struct BlockOp {
    pub dim: usize,
    pub blocks: Vec<(Vec<usize>, CMatrix)>,
}

impl BlockOp {
    /// Blocks are the connected components of the nonzero pattern of `m`;
    /// components equal to `skip` on their single diagonal entry are dropped.
    pub fn from_dense(m: &CMatrix, skip: C64) -> Self {
        let comps = components(m);
        let blocks = comps
            .into_iter()
            .filter(|idx| !(idx.len() == 1 && m[(idx[0], idx[0])] == skip))
            .map(|idx| {
                let b = CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
                (idx, b)
            })
            .collect();
        Self { dim: m.nrows(), blocks }
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, blocks: self.blocks.iter().map(|(i, b)| (i.clone(), b.adjoint())).collect() }
    }

    /// Dense form with uncovered indices set to `fill` on the diagonal.
    pub fn to_dense(&self, fill: C64) -> CMatrix {
        let mut out = CMatrix::from_diagonal_element(self.dim, self.dim, fill);
        for (idx, b) in &self.blocks {
            for (i, &r) in idx.iter().enumerate() {
                for (j, &col) in idx.iter().enumerate() {
                    out[(r, col)] = b[(i, j)];
                }
            }
        }
        out
    }
}

/// Connected components of the nonzero pattern, each sorted ascending.
fn components(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] != ZERO {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Exponential family `exp(θ G)` of a fixed anti-hermitian generator `G`.
///
/// `iG` is hermitian, so `exp(θG) = V diag(e^{-iθμ}) V†` with `iG = V diag(μ) V†`,
/// decomposed independently on each block of `G`.
#[derive(Debug, Clone)]
pub struct GeneratorExp {
    generator: CMatrix,
    sparse: BlockOp,
    eig: Vec<(Vec<f64>, CMatrix)>,
}

impl GeneratorExp {
    pub fn new(generator: CMatrix) -> Self {
        let sparse = BlockOp::from_dense(&generator, ZERO);
        let eig = sparse.blocks.iter().map(|(_, g)| hermitian_eigen(&g.map(|z| z * I))).collect();
        Self { generator, sparse, eig }
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    /// Generator blocks; uncovered indices are zero.
    pub fn generator_blocks(&self) -> &BlockOp {
        &self.sparse
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    /// `exp(θG)` as blocks; uncovered indices are the identity.
    pub fn unitary_blocks(&self, theta: f64) -> BlockOp {
        let blocks = self
            .sparse
            .blocks
            .iter()
            .zip(&self.eig)
            .map(|((idx, _), (vals, vecs))| {
                let mut scaled = vecs.clone();
                for (j, mu) in vals.iter().enumerate() {
                    let ph = C64::from_polar(1.0, -theta * mu);
                    scaled.column_mut(j).iter_mut().for_each(|z| *z *= ph);
                }
                (idx.clone(), &scaled * vecs.adjoint())
            })
            .collect();
        BlockOp { dim: self.dim(), blocks }
    }

    pub fn unitary(&self, theta: f64) -> CMatrix {
        self.unitary_blocks(theta).to_dense(ONE)
    }
}

/// Compare two matrices up to a global phase taken from the largest entry of `b`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let (mut idx, mut best) = ((0, 0), -1.0);
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            let v = b[(i, j)].norm();
            if v > best + 1e-12 {
                best = v;
                idx = (i, j);
            }
        }
    }
    if best <= 0.0 {
        return max_abs(a);
    }
    let ratio = a[idx] / b[idx];
    let phase = ratio / ratio.norm();
    max_abs(&(a - b.map(|z| z * phase)))
}
