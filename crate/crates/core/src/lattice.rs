//! Atom-site tables and coherent-coupling graphs for the three lattice geometries.
//!
//! Positions are measured along the waveguide in units of the lattice pitch `d`,
//! so the guided-mode phase between two sites is `k0d * |z_i - z_j|`. Cells are
//! paired into two-cell clusters `(0, 1), (2, 3), …`; an odd trailing cell has no
//! inter-cell partner.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};


#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Scalar physics constants, all rates and detunings in units of Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Decay rate of a coupled atom into the guided mode.
    pub gamma_1d: f64,
    /// Free-space decay of `|e>`, applied to every atom.
    pub gamma_e: f64,
    /// Control-field Rabi frequency on `|s> <-> |e>`.
    pub omega_c: f64,
    /// Control-field detuning.
    pub delta_c: f64,
    /// Intra-cell coherent exchange.
    pub j1: f64,
    /// Inter-cell (intra-cluster) coherent exchange.
    pub j2: f64,
    /// Guided-mode phase per lattice pitch, radians.
    pub k0d: f64,
    /// Intra-cell spacing `a` in units of `d`.
    pub a_over_d: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            gamma_1d: 1.0,
            gamma_e: 0.1,
            omega_c: 2.0,
            delta_c: 0.0,
            j1: 0.0,
            j2: 0.0,
            k0d: FRAC_PI_2,
            a_over_d: 1.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma_1d", self.gamma_1d),
            ("gamma_e", self.gamma_e),
            ("omega_c", self.omega_c),
            ("delta_c", self.delta_c),
            ("j1", self.j1),
            ("j2", self.j2),
            ("k0d", self.k0d),
            ("a_over_d", self.a_over_d),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(invalid(field, "must be finite"));
            }
        }
        for (field, value) in [
            ("gamma_1d", self.gamma_1d),
            ("gamma_e", self.gamma_e),
            ("omega_c", self.omega_c),
        ] {
            if value < 0.0 {
                return Err(invalid(field, "must be non-negative"));
            }
        }
        if !(self.k0d > 0.0 && self.k0d < TAU) {
            return Err(invalid("k0d", "must lie in the open interval (0, 2π)"));
        }
        Ok(())
    }
}

fn invalid(field: &'static str, reason: &str) -> Error {
    Error::InvalidParameter { field, reason: String::from(reason) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Two guided-coupled atoms one pitch apart, no coherent exchange.
    Conventional,
    /// Two atoms per cell, only the lower one coupled to the guide.
    Zigzag,
    /// `N` atoms stacked vertically per cell, only the bottom one coupled.
    Orthogonal,
    /// Hand-assembled lattice; only the generic invariants are enforced.
    Custom,
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Conventional => "conventional",
            Geometry::Zigzag => "zigzag",
            Geometry::Orthogonal => "orthogonal",
            Geometry::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSite {
    pub site_id: usize,
    pub cell_index: usize,
    pub cluster_index: usize,
    /// 0 is the atom closest to the waveguide.
    pub intra_cell_index: usize,
    /// Position along the waveguide in units of `d`.
    pub z_position: f64,
    /// Either exactly 0 or `gamma_1d`.
    pub decay_rate: f64,
}

impl AtomSite {
    pub fn is_coupled(&self) -> bool {
        self.decay_rate > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    /// J₁ bond inside a cell.
    IntraCell,
    /// J₂ bond between the two cells of a cluster.
    InterCell,
}

/// Undirected coherent-exchange bond. Stored once with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub strength: f64,
    pub kind: CouplingKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CouplingGraph {
    edges: Vec<Edge>,
}

impl CouplingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, u: usize, v: usize, strength: f64, kind: CouplingKind) {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.push(Edge { a, b, strength, kind });
    }

    /// Undirected bonds, one entry per pair.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The graph is stored symmetrically: every bond is visible in both orientations.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// Every bond in both orientations, `(u, v, J)` followed by `(v, u, J)`.
    pub fn directed(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges
            .iter()
            .flat_map(|e| [(e.a, e.b, e.strength), (e.b, e.a, e.strength)])
    }

    pub fn count(&self, kind: CouplingKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub geometry: Geometry,
    pub sites: Vec<AtomSite>,
    pub graph: CouplingGraph,
    pub params: SystemParams,
}

/// The baseline: two guided-coupled Λ atoms one pitch apart.
pub fn build_conventional(params: SystemParams) -> Result<LatticeSpec> {
    params.validate()?;
    let sites = (0..2)
        .map(|i| AtomSite {
            site_id: i,
            cell_index: i,
            cluster_index: 0,
            intra_cell_index: 0,
            z_position: i as f64,
            decay_rate: params.gamma_1d,
        })
        .collect();
    Ok(LatticeSpec {
        geometry: Geometry::Conventional,
        sites,
        graph: CouplingGraph::new(),
        params,
    })
}

/// Zigzag lattice of `m_cells` two-atom cells.
///
/// Atom 0 of each cell sits at `z = cell` and carries `gamma_1d`; atom 1 sits at
/// `z = cell + a_over_d` and is decoupled from the guide. J₁ joins the two atoms
/// of every cell, J₂ joins atom 1 of cell `2k` to atom 0 of cell `2k + 1`.
pub fn build_zigzag(m_cells: usize, params: SystemParams) -> Result<LatticeSpec> {
    params.validate()?;
    if m_cells < 1 {
        return Err(Error::InvalidLatticeSize { field: "m_cells", value: m_cells });
    }
    let mut sites = Vec::with_capacity(2 * m_cells);
    let mut graph = CouplingGraph::new();
    for cell in 0..m_cells {
        let z = cell as f64;
        for (intra, (offset, rate)) in [(0.0, params.gamma_1d), (params.a_over_d, 0.0)]
            .into_iter()
            .enumerate()
        {
            sites.push(AtomSite {
                site_id: 2 * cell + intra,
                cell_index: cell,
                cluster_index: cell / 2,
                intra_cell_index: intra,
                z_position: z + offset,
                decay_rate: rate,
            });
        }
        graph.push(2 * cell, 2 * cell + 1, params.j1, CouplingKind::IntraCell);
    }
    for left in (0..m_cells.saturating_sub(1)).step_by(2) {
        graph.push(2 * left + 1, 2 * (left + 1), params.j2, CouplingKind::InterCell);
    }
    Ok(LatticeSpec { geometry: Geometry::Zigzag, sites, graph, params })
}

/// Orthogonal lattice: `m_cells` vertical stacks of `n_per_cell` atoms.
///
/// Every atom of a cell shares `z = cell`; only the bottom atom couples to the
/// guide. J₁ runs up each stack, J₂ joins the bottom atoms of the two cells in a
/// cluster.
pub fn build_orthogonal(m_cells: usize, n_per_cell: usize, params: SystemParams) -> Result<LatticeSpec> {
    params.validate()?;
    if m_cells < 1 {
        return Err(Error::InvalidLatticeSize { field: "m_cells", value: m_cells });
    }
    if n_per_cell < 1 {
        return Err(Error::InvalidLatticeSize { field: "n_per_cell", value: n_per_cell });
    }
    let mut sites = Vec::with_capacity(m_cells * n_per_cell);
    let mut graph = CouplingGraph::new();
    for cell in 0..m_cells {
        let base = cell * n_per_cell;
        for intra in 0..n_per_cell {
            sites.push(AtomSite {
                site_id: base + intra,
                cell_index: cell,
                cluster_index: cell / 2,
                intra_cell_index: intra,
                z_position: cell as f64,
                decay_rate: if intra == 0 { params.gamma_1d } else { 0.0 },
            });
            if intra > 0 {
                graph.push(base + intra - 1, base + intra, params.j1, CouplingKind::IntraCell);
            }
        }
    }
    for left in (0..m_cells.saturating_sub(1)).step_by(2) {
        graph.push(left * n_per_cell, (left + 1) * n_per_cell, params.j2, CouplingKind::InterCell);
    }
    Ok(LatticeSpec { geometry: Geometry::Orthogonal, sites, graph, params })
}

impl LatticeSpec {
    /// Assemble a lattice by hand. Site ids are reassigned to positions in `sites`.
    pub fn custom(mut sites: Vec<AtomSite>, edges: &[(usize, usize, f64)], params: SystemParams) -> Result<Self> {
        params.validate()?;
        if sites.is_empty() {
            return Err(Error::InvalidLattice(String::from("no sites")));
        }
        for (i, site) in sites.iter_mut().enumerate() {
            site.site_id = i;
            if !site.z_position.is_finite() {
                return Err(Error::InvalidLattice(format!("site {i} has a non-finite position")));
            }
            if site.decay_rate != 0.0 && site.decay_rate != params.gamma_1d {
                return Err(Error::InvalidLattice(format!(
                    "site {i} decay rate {} is neither 0 nor gamma_1d",
                    site.decay_rate
                )));
            }
        }
        let mut graph = CouplingGraph::new();
        for &(u, v, j) in edges {
            if u == v || u >= sites.len() || v >= sites.len() {
                return Err(Error::InvalidLattice(format!("bad edge ({u}, {v})")));
            }
            if !j.is_finite() {
                return Err(Error::InvalidLattice(format!("edge ({u}, {v}) has non-finite strength")));
            }
            let kind = if sites[u].cell_index == sites[v].cell_index {
                CouplingKind::IntraCell
            } else {
                CouplingKind::InterCell
            };
            graph.push(u, v, j, kind);
        }
        Ok(LatticeSpec { geometry: Geometry::Custom, sites, graph, params })
    }

    pub fn n_atoms(&self) -> usize {
        self.sites.len()
    }

    pub fn n_cells(&self) -> usize {
        self.sites.iter().map(|s| s.cell_index + 1).max().unwrap_or(0)
    }

    pub fn coupled_sites(&self) -> impl Iterator<Item = &AtomSite> + '_ {
        self.sites.iter().filter(|s| s.is_coupled())
    }

    /// Sum of guided decay rates over all sites.
    pub fn total_decay(&self) -> f64 {
        self.sites.iter().map(|s| s.decay_rate).sum()
    }

    /// Site signs `P` with `P H₁ P = -H₁*`, if such a gauge exists.
    ///
    /// When it does, `|t(Δω)|² = |t(-Δω)|²` exactly. It requires `delta_c = 0`,
    /// every guided phase between coupled sites to be a multiple of π/2, and the
    /// coherent-exchange graph to be compatible with the parity those phases
    /// impose on the coupled sites.
    pub fn mirror_gauge(&self) -> Option<Vec<i8>> {
        if self.params.delta_c != 0.0 {
            return None;
        }
        let n = self.n_atoms();
        // constraint (v, relative sign)
        let mut adjacency: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
        for e in self.graph.edges() {
            if e.strength != 0.0 {
                adjacency[e.a].push((e.b, -1));
                adjacency[e.b].push((e.a, -1));
            }
        }
        let coupled: Vec<&AtomSite> = self.coupled_sites().collect();
        for (i, u) in coupled.iter().enumerate() {
            for v in &coupled[i + 1..] {
                let quarter_turns = self.params.k0d * (u.z_position - v.z_position).abs() / FRAC_PI_2;
                let nearest = quarter_turns.round();
                if (quarter_turns - nearest).abs() > 1e-9 {
                    return None;
                }
                let sign = if (nearest as i64) % 2 == 0 { 1 } else { -1 };
                adjacency[u.site_id].push((v.site_id, sign));
                adjacency[v.site_id].push((u.site_id, sign));
            }
        }
        let mut signs = vec![0i8; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &(v, rel) in &adjacency[u] {
                    let want = signs[u] * rel;
                    if signs[v] == 0 {
                        signs[v] = want;
                        queue.push_back(v);
                    } else if signs[v] != want {
                        return None;
                    }
                }
            }
        }
        Some(signs)
    }
}
