//! Graphs, walk Hamiltonians, walker initial states and the thermodynamic
//! reference states they are mixed with.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::operator::{
    c64, spectral_decompose, tensor, ComplexMatrix, DensityMatrix, HermitianOperator, SpectralDecomposition,
};

/// Walk graph. Hypercube node `n` carries the binary-reflected label
/// `n ^ (n >> 1)`, so consecutive indices are neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Graph {
    Ring { nodes: usize },
    Hypercube { dimension: u32 },
}

impl Graph {
    pub fn ring(nodes: usize) -> Result<Self> {
        if nodes < 3 {
            return Err(Error::InvalidGraph(format!("ring needs at least 3 nodes, got {nodes}")));
        }
        Ok(Graph::Ring { nodes })
    }

    pub fn hypercube(dimension: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidGraph("hypercube dimension must be at least 1".into()));
        }
        if dimension > 12 {
            return Err(Error::InvalidGraph(format!(
                "hypercube dimension {dimension} exceeds the dense limit of 12"
            )));
        }
        Ok(Graph::Hypercube { dimension })
    }

    pub fn nodes(&self) -> usize {
        match *self {
            Graph::Ring { nodes } => nodes,
            Graph::Hypercube { dimension } => 1 << dimension,
        }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        match *self {
            Graph::Ring { nodes } => i != j && ((i + 1) % nodes == j || (j + 1) % nodes == i),
            Graph::Hypercube { .. } => (gray(i) ^ gray(j)).count_ones() == 1,
        }
    }

    fn degree(&self) -> f64 {
        match *self {
            Graph::Ring { .. } => 2.0,
            Graph::Hypercube { dimension } => dimension as f64,
        }
    }
}

fn gray(n: usize) -> usize {
    n ^ (n >> 1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ensemble {
    Microcanonical,
    Canonical { beta: f64 },
}

impl Ensemble {
    pub fn canonical(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must be finite and non-negative",
            });
        }
        Ok(Ensemble::Canonical { beta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interaction {
    #[default]
    None,
    Boson,
    Fermion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkerStart {
    Single(usize),
    Pair(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkerConfig {
    pub start: WalkerStart,
    pub interaction: Interaction,
    pub mu: f64,
}

impl WalkerConfig {
    pub fn single(node: usize) -> Self {
        Self {
            start: WalkerStart::Single(node),
            interaction: Interaction::None,
            mu: 1.0,
        }
    }

    pub fn pair(i: usize, j: usize, interaction: Interaction) -> Self {
        Self {
            start: WalkerStart::Pair(i, j),
            interaction,
            mu: 1.0,
        }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    pub fn count(&self) -> usize {
        match self.start {
            WalkerStart::Single(_) => 1,
            WalkerStart::Pair(..) => 2,
        }
    }

    pub fn validate(&self, nodes: usize) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: self.mu,
                reason: "must be positive",
            });
        }
        match self.start {
            WalkerStart::Single(i) => {
                if i >= nodes {
                    return Err(Error::InvalidWalker(format!("start node {i} is outside 0..{nodes}")));
                }
                if self.interaction != Interaction::None {
                    return Err(Error::InvalidWalker("a single walker has no interaction".into()));
                }
            }
            WalkerStart::Pair(i, j) => {
                if i >= nodes || j >= nodes {
                    return Err(Error::InvalidWalker(format!(
                        "start pair ({i}, {j}) is outside 0..{nodes}"
                    )));
                }
                if self.interaction == Interaction::Fermion && i == j {
                    return Err(Error::InvalidWalker(format!(
                        "fermions cannot share start node {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `L = A - D` of the graph.
pub fn build_laplacian(g: &Graph) -> HermitianOperator {
    let degree = g.degree();
    HermitianOperator::symmetrize(ComplexMatrix::from_real_fn(g.nodes(), |i, j| {
        if i == j {
            -degree
        } else if g.adjacent(i, j) {
            1.0
        } else {
            0.0
        }
    }))
}

/// `H = -mu L`.
pub fn hamiltonian(laplacian: &HermitianOperator, mu: f64) -> Result<HermitianOperator> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "must be positive",
        });
    }
    Ok(laplacian.scale(-mu))
}

/// `H1 ⊗ I + I ⊗ H2`.
pub fn two_particle_hamiltonian(h1: &HermitianOperator, h2: &HermitianOperator) -> HermitianOperator {
    let i1 = ComplexMatrix::identity(h1.dim());
    let i2 = ComplexMatrix::identity(h2.dim());
    let sum = &tensor(h1.matrix(), &i2) + &tensor(&i1, h2.matrix());
    HermitianOperator::symmetrize(sum)
}

fn basis_vector(dim: usize, i: usize) -> Vec<c64> {
    let mut v = vec![c64::new(0.0, 0.0); dim];
    v[i] = c64::new(1.0, 0.0);
    v
}

fn pair_vector(nodes: usize, i: usize, j: usize, sign: f64) -> Vec<c64> {
    let mut v = vec![c64::new(0.0, 0.0); nodes * nodes];
    v[i * nodes + j] += c64::new(1.0, 0.0);
    v[j * nodes + i] += c64::new(sign, 0.0);
    v
}

/// Pure starting state of the walkers in the full node (product) space.
pub fn initial_state(cfg: &WalkerConfig, nodes: usize) -> Result<DensityMatrix> {
    cfg.validate(nodes)?;
    let psi = match (cfg.start, cfg.interaction) {
        (WalkerStart::Single(i), _) => basis_vector(nodes, i),
        (WalkerStart::Pair(i, j), Interaction::None) => basis_vector(nodes * nodes, i * nodes + j),
        (WalkerStart::Pair(i, j), Interaction::Boson) => pair_vector(nodes, i, j, 1.0),
        (WalkerStart::Pair(i, j), Interaction::Fermion) => pair_vector(nodes, i, j, -1.0),
    };
    DensityMatrix::pure(&psi)
}

/// Micro-canonical `I/d` or canonical `exp(-beta H)/Z`. The exponent is
/// shifted by the smallest eigenvalue so that large `beta` cannot overflow.
pub fn thermal_state(ens: &Ensemble, h: &HermitianOperator) -> Result<DensityMatrix> {
    match *ens {
        Ensemble::Microcanonical => Ok(DensityMatrix::maximally_mixed(h.dim())),
        Ensemble::Canonical { beta } => {
            let spec = spectral_decompose(h)?;
            Ok(gibbs_from_spectrum(&spec, beta))
        }
    }
}

fn gibbs_from_spectrum(spec: &SpectralDecomposition, beta: f64) -> DensityMatrix {
    let e = spec.eigenvalues();
    let shift = e.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = e.iter().map(|&x| (-beta * (x - shift)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::from_spectrum(SpectralDecomposition::from_parts(p, spec.basis().clone()))
        .expect("normalized Gibbs weights form a state")
}

/// `beta = 2 pi ln 2 / Tr H`.
pub fn compute_beta(h: &HermitianOperator) -> Result<f64> {
    let tr = h.trace();
    if tr == 0.0 || !tr.is_finite() {
        return Err(Error::UndefinedBeta);
    }
    Ok(2.0 * PI * LN_2 / tr)
}

/// `eps rho0 + (1 - eps) rho_therm` for `eps` in `(0, 1]`.
pub fn perturbed_initial(rho0: &DensityMatrix, rho_therm: &DensityMatrix, eps: f64) -> Result<DensityMatrix> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "must lie in (0, 1]",
        });
    }
    if rho0.dim() != rho_therm.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            found: rho_therm.dim(),
        });
    }
    if eps == 1.0 {
        return Ok(rho0.clone());
    }
    let mix = &rho0.matrix().scale(eps) + &rho_therm.matrix().scale(1.0 - eps);
    DensityMatrix::new(HermitianOperator::symmetrize(mix))
}

/// Exchange operator on the two-walker product space, `|i,j> -> |j,i>`.
pub fn swap_operator(nodes: usize) -> ComplexMatrix {
    let dim = nodes * nodes;
    ComplexMatrix::from_real_fn(dim, |r, c| {
        let (i, j) = (c / nodes, c % nodes);
        if r == j * nodes + i {
            1.0
        } else {
            0.0
        }
    })
}

/// Subspace of the node space in which the walkers evolve: the whole space
/// for distinguishable walkers, or the exchange-symmetric/antisymmetric
/// sector of the two-walker product space for bosons/fermions.
#[derive(Clone, Debug, PartialEq)]
pub struct Sector {
    full_dim: usize,
    // Orthonormal sector basis; each column has at most two nonzero entries.
    columns: Option<Vec<Vec<(usize, f64)>>>,
}

impl Sector {
    pub fn full(dim: usize) -> Self {
        Self {
            full_dim: dim,
            columns: None,
        }
    }

    pub fn symmetric(nodes: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut columns = Vec::with_capacity(nodes * (nodes + 1) / 2);
        for i in 0..nodes {
            columns.push(vec![(i * nodes + i, 1.0)]);
            for j in i + 1..nodes {
                columns.push(vec![(i * nodes + j, s), (j * nodes + i, s)]);
            }
        }
        Self {
            full_dim: nodes * nodes,
            columns: Some(columns),
        }
    }

    pub fn antisymmetric(nodes: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut columns = Vec::with_capacity(nodes * nodes.saturating_sub(1) / 2);
        for i in 0..nodes {
            for j in i + 1..nodes {
                columns.push(vec![(i * nodes + j, s), (j * nodes + i, -s)]);
            }
        }
        Self {
            full_dim: nodes * nodes,
            columns: Some(columns),
        }
    }

    pub fn for_walkers(cfg: &WalkerConfig, nodes: usize) -> Self {
        match (cfg.start, cfg.interaction) {
            (WalkerStart::Single(_), _) => Self::full(nodes),
            (WalkerStart::Pair(..), Interaction::None) => Self::full(nodes * nodes),
            (WalkerStart::Pair(..), Interaction::Boson) => Self::symmetric(nodes),
            (WalkerStart::Pair(..), Interaction::Fermion) => Self::antisymmetric(nodes),
        }
    }

    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    pub fn dim(&self) -> usize {
        self.columns.as_ref().map_or(self.full_dim, Vec::len)
    }

    pub fn is_full(&self) -> bool {
        self.columns.is_none()
    }

    /// `V^dag A V` for the sector isometry `V`.
    pub fn restrict(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.full_dim {
            return Err(Error::DimensionMismatch {
                expected: self.full_dim,
                found: a.dim(),
            });
        }
        let Some(cols) = &self.columns else {
            return Ok(a.clone());
        };
        Ok(ComplexMatrix::from_fn(cols.len(), |p, q| {
            let mut acc = c64::new(0.0, 0.0);
            for &(r, vr) in &cols[p] {
                for &(s, vs) in &cols[q] {
                    acc += a.get(r, s) * (vr * vs);
                }
            }
            acc
        }))
    }

    pub fn restrict_operator(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        Ok(HermitianOperator::symmetrize(self.restrict(a.matrix())?))
    }

    /// Restricts a state supported in the sector; weight outside it is lost
    /// and surfaces as a trace error.
    pub fn restrict_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if self.is_full() {
            return Ok(rho.clone());
        }
        DensityMatrix::new(self.restrict_operator(rho.operator())?)
    }

    /// `V rho V^dag`, the sector state seen in the full node space.
    pub fn embed(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let Some(cols) = &self.columns else {
            return Ok(rho.clone());
        };
        if rho.dim() != cols.len() {
            return Err(Error::DimensionMismatch {
                expected: cols.len(),
                found: rho.dim(),
            });
        }
        let mut full = faer::Mat::<c64>::zeros(self.full_dim, self.full_dim);
        for (p, cp) in cols.iter().enumerate() {
            for (q, cq) in cols.iter().enumerate() {
                let z = rho.matrix().get(p, q);
                if z == c64::new(0.0, 0.0) {
                    continue;
                }
                for &(r, vr) in cp {
                    for &(s, vs) in cq {
                        full[(r, s)] += z * (vr * vs);
                    }
                }
            }
        }
        DensityMatrix::new(HermitianOperator::symmetrize(ComplexMatrix::from_mat(full)))
    }
}

/// A fully specified walk: graph, walkers, Hamiltonian in the node space and
/// in the evolution sector.
#[derive(Clone, Debug)]
pub struct WalkSystem {
    graph: Graph,
    walkers: WalkerConfig,
    sector: Sector,
    full_hamiltonian: HermitianOperator,
    hamiltonian: HermitianOperator,
}

impl WalkSystem {
    pub fn new(graph: Graph, walkers: WalkerConfig) -> Result<Self> {
        let nodes = graph.nodes();
        walkers.validate(nodes)?;
        let h1 = hamiltonian(&build_laplacian(&graph), walkers.mu)?;
        let full_hamiltonian = match walkers.start {
            WalkerStart::Single(_) => h1,
            WalkerStart::Pair(..) => two_particle_hamiltonian(&h1, &h1),
        };
        let sector = Sector::for_walkers(&walkers, nodes);
        let hamiltonian = sector.restrict_operator(&full_hamiltonian)?;
        Ok(Self {
            graph,
            walkers,
            sector,
            full_hamiltonian,
            hamiltonian,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn walkers(&self) -> &WalkerConfig {
        &self.walkers
    }

    pub fn nodes(&self) -> usize {
        self.graph.nodes()
    }

    pub fn sector(&self) -> &Sector {
        &self.sector
    }

    /// Hamiltonian on the full node (product) space.
    pub fn full_hamiltonian(&self) -> &HermitianOperator {
        &self.full_hamiltonian
    }

    /// Hamiltonian on the evolution sector.
    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    /// `compute_beta` of the full node-space Hamiltonian.
    pub fn auto_beta(&self) -> Result<f64> {
        compute_beta(&self.full_hamiltonian)
    }

    /// Pure walker state in the evolution sector.
    pub fn initial_state(&self) -> Result<DensityMatrix> {
        let full = initial_state(&self.walkers, self.nodes())?;
        self.sector.restrict_state(&full)
    }

    /// Reference state in the evolution sector.
    pub fn thermal_state(&self, ens: &Ensemble) -> Result<DensityMatrix> {
        thermal_state(ens, &self.hamiltonian)
    }

    /// `eps rho0 + (1 - eps) rho_therm` in the evolution sector.
    pub fn sea_initial(&self, ens: &Ensemble, eps: f64) -> Result<DensityMatrix> {
        perturbed_initial(&self.initial_state()?, &self.thermal_state(ens)?, eps)
    }

    /// Sector state in the full node space.
    pub fn to_node_space(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.sector.embed(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_three_laplacian() {
        let l = build_laplacian(&Graph::ring(3).unwrap());
        let expected = ComplexMatrix::from_real_rows(&[&[-2.0, 1.0, 1.0], &[1.0, -2.0, 1.0], &[1.0, 1.0, -2.0]]).unwrap();
        assert_eq!(l.matrix(), &expected);
    }

    #[test]
    fn hypercube_one_is_an_edge() {
        let l = build_laplacian(&Graph::hypercube(1).unwrap());
        let expected = ComplexMatrix::from_real_rows(&[&[-1.0, 1.0], &[1.0, -1.0]]).unwrap();
        assert_eq!(l.matrix(), &expected);
    }

    #[test]
    fn hypercube_neighbours_follow_gray_order() {
        let g = Graph::hypercube(3).unwrap();
        let l = build_laplacian(&g);
        for n in 0..8 {
            assert_eq!(l.matrix().get(n, (n + 1) % 8).re, 1.0);
            let row: f64 = (0..8).map(|j| l.matrix().get(n, j).re).sum();
            assert_eq!(row, 0.0);
        }
    }

    #[test]
    fn invalid_graphs() {
        assert!(Graph::ring(2).is_err());
        assert!(Graph::hypercube(0).is_err());
    }

    #[test]
    fn ring_hundred_rows_sum_to_zero() {
        let l = build_laplacian(&Graph::ring(100).unwrap());
        for i in 0..100 {
            let s: f64 = (0..100).map(|j| l.matrix().get(i, j).re).sum();
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn ring_hamiltonian_trace_and_entries() {
        let h = hamiltonian(&build_laplacian(&Graph::ring(3).unwrap()), 1.0).unwrap();
        assert_eq!(h.matrix().get(0, 0).re, 2.0);
        assert_eq!(h.matrix().get(0, 1).re, -1.0);
        let h = hamiltonian(&build_laplacian(&Graph::ring(7).unwrap()), 0.5).unwrap();
        assert!((h.trace() - 7.0).abs() < 1e-14);
        assert!(hamiltonian(&build_laplacian(&Graph::ring(3).unwrap()), 0.0).is_err());
    }

    #[test]
    fn two_particle_diagonal() {
        let h = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        let h2 = two_particle_hamiltonian(&h, &h);
        assert_eq!(h2.matrix(), &ComplexMatrix::from_diagonal(&[0.0, 1.0, 1.0, 2.0]));
    }

    #[test]
    fn single_initial_state() {
        let rho = initial_state(&WalkerConfig::single(0), 3).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn boson_pair_on_two_nodes() {
        let rho = initial_state(&WalkerConfig::pair(0, 1, Interaction::Boson), 2).unwrap();
        for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho.matrix().get(r, c).re - 0.5).abs() < 1e-14);
        }
        assert!(rho.matrix().get(0, 0).norm() < 1e-14);
    }

    #[test]
    fn fermions_cannot_share_a_node() {
        let err = initial_state(&WalkerConfig::pair(4, 4, Interaction::Fermion), 8).unwrap_err();
        assert!(matches!(err, Error::InvalidWalker(_)));
    }

    #[test]
    fn exchange_parity_of_initial_states() {
        let n = 5;
        let swap = swap_operator(n);
        let boson = initial_state(&WalkerConfig::pair(1, 3, Interaction::Boson), n).unwrap();
        let fermion = initial_state(&WalkerConfig::pair(1, 3, Interaction::Fermion), n).unwrap();
        assert!((swap.trace_product_re(boson.matrix()) - 1.0).abs() < 1e-12);
        assert!((swap.trace_product_re(fermion.matrix()) + 1.0).abs() < 1e-12);
        let conj = &(&swap * fermion.matrix()) * &swap;
        assert!(conj.max_abs_diff(fermion.matrix()) < 1e-14);
    }

    #[test]
    fn thermal_states() {
        let h = HermitianOperator::from_diagonal(&[0.0, 1.0, 2.0, 3.0]);
        let micro = thermal_state(&Ensemble::Microcanonical, &h).unwrap();
        assert_eq!(micro.matrix(), &ComplexMatrix::identity(4).scale(0.25));
        let hot = thermal_state(&Ensemble::canonical(0.0).unwrap(), &h).unwrap();
        assert!(hot.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
        let two = HermitianOperator::from_diagonal(&[0.0, 1.0]);
        let cold = thermal_state(&Ensemble::canonical(50.0).unwrap(), &two).unwrap();
        assert!(cold.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0])) < 1e-10);
        let huge = thermal_state(&Ensemble::canonical(1e6).unwrap(), &h).unwrap();
        assert!((huge.matrix().get(0, 0).re - 1.0).abs() < 1e-12);
        assert!(Ensemble::canonical(f64::INFINITY).is_err());
    }

    #[test]
    fn beta_examples() {
        let h = hamiltonian(&build_laplacian(&Graph::ring(100).unwrap()), 1.0).unwrap();
        assert!((compute_beta(&h).unwrap() - 0.02178).abs() < 5e-6);
        let h = hamiltonian(&build_laplacian(&Graph::ring(30).unwrap()), 1.0).unwrap();
        assert!((compute_beta(&h).unwrap() - 0.0726).abs() < 5e-5);
        let one = HermitianOperator::from_diagonal(&[2.0 * PI * LN_2]);
        assert!((compute_beta(&one).unwrap() - 1.0).abs() < 1e-15);
        let zero = HermitianOperator::from_diagonal(&[1.0, -1.0]);
        assert_eq!(compute_beta(&zero), Err(Error::UndefinedBeta));
    }

    #[test]
    fn perturbation_mixture() {
        let rho0 = DensityMatrix::new(HermitianOperator::from_diagonal(&[1.0, 0.0])).unwrap();
        let therm = DensityMatrix::maximally_mixed(2);
        let mix = perturbed_initial(&rho0, &therm, 0.5).unwrap();
        assert!(mix.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[0.75, 0.25])) < 1e-15);
        assert_eq!(perturbed_initial(&rho0, &therm, 1.0).unwrap().matrix(), rho0.matrix());
        assert!(perturbed_initial(&rho0, &therm, 0.0).is_err());
        assert!(perturbed_initial(&rho0, &therm, 1.5).is_err());
    }

    #[test]
    fn sector_dimensions() {
        assert_eq!(Sector::symmetric(30).dim(), 465);
        assert_eq!(Sector::antisymmetric(30).dim(), 435);
        assert_eq!(Sector::full(9).dim(), 9);
    }

    #[test]
    fn sector_round_trip_keeps_fermion_state() {
        let n = 4;
        let cfg = WalkerConfig::pair(0, 2, Interaction::Fermion);
        let sys = WalkSystem::new(Graph::ring(n).unwrap(), cfg).unwrap();
        let full = initial_state(&cfg, n).unwrap();
        let back = sys.to_node_space(&sys.initial_state().unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(full.matrix()) < 1e-14);
    }

    #[test]
    fn sector_hamiltonian_spectrum_is_pair_sums() {
        let n = 4;
        let sys = WalkSystem::new(Graph::ring(n).unwrap(), WalkerConfig::pair(0, 1, Interaction::Boson)).unwrap();
        let single: Vec<f64> = (0..n)
            .map(|j| 2.0 * (1.0 - (2.0 * PI * j as f64 / n as f64).cos()))
            .collect();
        let mut expected = Vec::new();
        for i in 0..n {
            for j in i..n {
                expected.push(single[i] + single[j]);
            }
        }
        expected.sort_by(f64::total_cmp);
        let got = spectral_decompose(sys.hamiltonian()).unwrap();
        for (g, e) in got.eigenvalues().iter().zip(&expected) {
            assert!((g - e).abs() < 1e-12);
        }
    }
}
