//! Linear-elastic static analysis on hex8 / tet4 volume meshes.
//!
//! Units are mm, N, MPa and s. Material density is given in kg/mm³ and
//! converted to tonne/mm³ so that density times acceleration in mm/s² is a
//! body force in N/mm³.

mod element;
mod sparse;
mod solver;

use std::collections::BTreeSet;

use log::warn;
use nalgebra::{Matrix6, SMatrix, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use element::{element_center_strain, element_stiffness, hex8_stiffness, tet4_stiffness};
pub use solver::{pcg, solve_spd, SolveMethod, SolveStats, SolverSettings};
pub use sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::mesh::{triangle_area, Association, Field, ScalarField, VectorField, VolumeMesh};

/// Standard gravity in mm/s².
pub const STANDARD_GRAVITY: f64 = 9810.0;

/// Isotropic linear-elastic material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// MPa.
    pub young_modulus: f64,
    pub poisson_ratio: f64,
    /// kg/mm³.
    pub density: f64,
}

impl Material {
    pub fn new(young_modulus: f64, poisson_ratio: f64, density: f64) -> Result<Self> {
        let m = Material {
            young_modulus,
            poisson_ratio,
            density,
        };
        m.validate()?;
        Ok(m)
    }

    /// Spruce treated as isotropic: E = 10 000 MPa, ν = 0.3,
    /// ρ = 4.5e-7 kg/mm³.
    pub fn spruce() -> Self {
        Material {
            young_modulus: 10_000.0,
            poisson_ratio: 0.3,
            density: 4.5e-7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.young_modulus > 0.0) || !self.young_modulus.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Young's modulus {} must be positive",
                self.young_modulus
            )));
        }
        if !(self.poisson_ratio > -1.0 && self.poisson_ratio < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "Poisson's ratio {} must lie in (-1, 0.5)",
                self.poisson_ratio
            )));
        }
        if !(self.density >= 0.0) || !self.density.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density {} must be non-negative",
                self.density
            )));
        }
        Ok(())
    }

    /// Density in tonne/mm³.
    pub fn mass_density(&self) -> f64 {
        self.density * 1e-3
    }

    /// Voigt elasticity matrix, order (xx, yy, zz, xy, yz, zx), engineering
    /// shear strains.
    pub fn elasticity_matrix(&self) -> SMatrix<f64, 6, 6> {
        let (e, nu) = (self.young_modulus, self.poisson_ratio);
        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        let mut d = Matrix6::zeros();
        for i in 0..3 {
            for j in 0..3 {
                d[(i, j)] = lambda;
            }
            d[(i, i)] = lambda + 2.0 * mu;
            d[(i + 3, i + 3)] = mu;
        }
        d
    }
}

/// How a surface load's total force is spread over its node set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    EqualPerNode,
    /// Proportional to the boundary-face area attached to each node; only
    /// boundary faces whose nodes all belong to the set count.
    AreaWeighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceLoad {
    pub node_set: String,
    /// Total force in N.
    pub force: [f64; 3],
    #[serde(default)]
    pub distribution: Distribution,
}

/// Fixed translations (1 = x, 2 = y, 3 = z) on every node of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub node_set: String,
    pub dofs: Vec<usize>,
}

impl Constraint {
    /// All three translations fixed.
    pub fn pinned(node_set: impl Into<String>) -> Self {
        Constraint {
            node_set: node_set.into(),
            dofs: vec![1, 2, 3],
        }
    }

    pub fn new(node_set: impl Into<String>, dofs: Vec<usize>) -> Self {
        Constraint {
            node_set: node_set.into(),
            dofs,
        }
    }

    /// Sorted unique DOFs grouped into contiguous (first, last) ranges.
    pub fn dof_ranges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<usize> = self.dofs.iter().copied().collect();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for d in set {
            match out.last_mut() {
                Some((_, last)) if *last + 1 == d => *last = d,
                _ => out.push((d, d)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoadCase {
    /// Acceleration in mm/s².
    pub gravity: [f64; 3],
    pub surface_loads: Vec<SurfaceLoad>,
    pub constraints: Vec<Constraint>,
}

impl LoadCase {
    /// Checks that every referenced node set exists and DOF labels are 1-3.
    pub fn check_sets(&self, mesh: &VolumeMesh) -> Result<()> {
        for sl in &self.surface_loads {
            mesh.node_set(&sl.node_set)?;
        }
        for c in &self.constraints {
            mesh.node_set(&c.node_set)?;
            if let Some(bad) = c.dofs.iter().find(|d| !(1..=3).contains(*d)) {
                return Err(Error::InvalidParameter(format!(
                    "constraint on '{}' has DOF {bad}; expected 1, 2 or 3",
                    c.node_set
                )));
            }
        }
        Ok(())
    }

    /// Global DOF indices (3·node + axis) fixed by the constraints, ascending.
    pub fn constrained_dofs(&self, mesh: &VolumeMesh) -> Result<Vec<usize>> {
        self.check_sets(mesh)?;
        let mut set = BTreeSet::new();
        for c in &self.constraints {
            for &n in mesh.node_set(&c.node_set)? {
                for &d in &c.dofs {
                    set.insert(3 * n + d - 1);
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}

/// Node adjacency through shared elements, each list sorted and including
/// the node itself.
fn node_adjacency(mesh: &VolumeMesh) -> Vec<Vec<usize>> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); mesh.node_count()];
    for el in mesh.elements() {
        let nodes = el.nodes();
        for &a in nodes {
            adj[a].extend(nodes.iter().copied());
        }
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Global stiffness in CSR form over 3·N DOFs. Element matrices are computed
/// in parallel and scattered in element order.
pub fn assemble(mesh: &VolumeMesh, material: &Material) -> Result<CsrMatrix> {
    material.validate()?;
    let adj = node_adjacency(mesh);
    let mut rows = Vec::with_capacity(3 * mesh.node_count());
    for a in &adj {
        let cols: Vec<usize> = a.iter().flat_map(|&j| [3 * j, 3 * j + 1, 3 * j + 2]).collect();
        for _ in 0..3 {
            rows.push(cols.clone());
        }
    }
    let mut k = CsrMatrix::from_pattern(rows);
    let mats: Vec<_> = (0..mesh.element_count())
        .into_par_iter()
        .map(|e| element_stiffness(mesh, e, material))
        .collect::<Result<_>>()?;
    for (e, ke) in mats.iter().enumerate() {
        let el = mesh.element(e);
        let nodes = el.nodes();
        for (i, &ni) in nodes.iter().enumerate() {
            for (j, &nj) in nodes.iter().enumerate() {
                for a in 0..3 {
                    for b in 0..3 {
                        k.add(3 * ni + a, 3 * nj + b, ke[(3 * i + a, 3 * j + b)]);
                    }
                }
            }
        }
    }
    Ok(k)
}

fn face_area(mesh: &VolumeMesh, face: &[usize]) -> f64 {
    let p = mesh.nodes();
    match face.len() {
        3 => triangle_area(&p[face[0]], &p[face[1]], &p[face[2]]),
        _ => 0.5 * (p[face[2]] - p[face[0]]).cross(&(p[face[3]] - p[face[1]])).norm(),
    }
}

/// Nodal forces of one surface load, sorted by node.
pub fn surface_load_forces(mesh: &VolumeMesh, load: &SurfaceLoad) -> Result<Vec<(usize, [f64; 3])>> {
    let nodes = mesh.node_set(&load.node_set)?;
    if nodes.is_empty() {
        return Err(Error::EmptySelection(load.node_set.clone()));
    }
    let f = load.force;
    match load.distribution {
        Distribution::EqualPerNode => {
            let n = nodes.len() as f64;
            Ok(nodes.iter().map(|&i| (i, [f[0] / n, f[1] / n, f[2] / n])).collect())
        }
        Distribution::AreaWeighted => {
            let mut in_set = vec![false; mesh.node_count()];
            for &i in nodes {
                in_set[i] = true;
            }
            let mut weight = vec![0.0; mesh.node_count()];
            for face in mesh.boundary_faces() {
                if face.iter().all(|&i| in_set[i]) {
                    let share = face_area(mesh, &face) / face.len() as f64;
                    for &i in &face {
                        weight[i] += share;
                    }
                }
            }
            let total: f64 = nodes.iter().map(|&i| weight[i]).sum();
            if !(total > 0.0) {
                return Err(Error::EmptySelection(format!(
                    "{} (no boundary faces lie entirely in the set)",
                    load.node_set
                )));
            }
            Ok(nodes
                .iter()
                .map(|&i| {
                    let w = weight[i] / total;
                    (i, [f[0] * w, f[1] * w, f[2] * w])
                })
                .collect())
        }
    }
}

/// Global load vector: lumped gravity plus surface loads.
pub fn assemble_loads(mesh: &VolumeMesh, material: &Material, load: &LoadCase) -> Result<Vec<f64>> {
    load.check_sets(mesh)?;
    let mut f = vec![0.0; 3 * mesh.node_count()];
    let rho = material.mass_density();
    if rho > 0.0 && load.gravity.iter().any(|&g| g != 0.0) {
        for e in 0..mesh.element_count() {
            let el = mesh.element(e);
            let nodes = el.nodes();
            let share = rho * mesh.element_volume(e) / nodes.len() as f64;
            for &n in nodes {
                for a in 0..3 {
                    f[3 * n + a] += share * load.gravity[a];
                }
            }
        }
    }
    for sl in &load.surface_loads {
        for (n, force) in surface_load_forces(mesh, sl)? {
            for a in 0..3 {
                f[3 * n + a] += force[a];
            }
        }
    }
    Ok(f)
}

/// Union-find connected components of nodes linked by elements; orphan
/// nodes get `None`.
fn node_components(mesh: &VolumeMesh) -> (Vec<Option<usize>>, usize) {
    let n = mesh.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut used = vec![false; n];
    for el in mesh.elements() {
        let nodes = el.nodes();
        for &a in nodes {
            used[a] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, nodes[0]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut comp = vec![None; n];
    let mut count = 0;
    for i in 0..n {
        if !used[i] {
            continue;
        }
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        comp[i] = Some(label[r]);
    }
    (comp, count)
}

/// Fails when any connected component keeps a rigid-body mode after the
/// constraints are applied.
fn check_rigid_body_modes(mesh: &VolumeMesh, fixed: &[bool]) -> Result<()> {
    let (comp, count) = node_components(mesh);
    let nodes = mesh.nodes();
    for c in 0..count {
        let members: Vec<usize> = (0..nodes.len()).filter(|&i| comp[i] == Some(c)).collect();
        let centroid =
            members.iter().fold(Vector3::zeros(), |acc, &i| acc + nodes[i].coords) / members.len() as f64;
        let radius = members
            .iter()
            .map(|&i| (nodes[i].coords - centroid).norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut g = Matrix6::<f64>::zeros();
        for &i in &members {
            let r = (nodes[i].coords - centroid) / radius;
            for a in 0..3 {
                if !fixed[3 * i + a] {
                    continue;
                }
                // Row of the mode matrix: translation a, then (ω_k × r)_a.
                let mut row = [0.0; 6];
                row[a] = 1.0;
                for k in 0..3 {
                    let mut w = Vector3::zeros();
                    w[k] = 1.0;
                    row[3 + k] = w.cross(&r)[a];
                }
                for p in 0..6 {
                    for q in 0..6 {
                        g[(p, q)] += row[p] * row[q];
                    }
                }
            }
        }
        let trace = g.trace();
        let eig = nalgebra::SymmetricEigen::new(g).eigenvalues;
        let rank = eig.iter().filter(|&&l| l > 1e-10 * trace).count();
        if rank < 6 {
            return Err(Error::UnderConstrained(format!(
                "component {c} ({} nodes) has {} unrestrained rigid-body mode(s)",
                members.len(),
                6 - rank
            )));
        }
    }
    Ok(())
}

/// Von Mises equivalent stress of a Voigt tensor (xx, yy, zz, xy, yz, zx).
pub fn von_mises(s: &[f64; 6]) -> f64 {
    let d = (s[0] - s[1]).powi(2) + (s[1] - s[2]).powi(2) + (s[2] - s[0]).powi(2);
    (0.5 * d + 3.0 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5])).sqrt()
}

/// Static solution fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldResult {
    /// Nodal displacements, mm.
    pub displacements: Vec<[f64; 3]>,
    /// Element-centre strains, Voigt order with engineering shear.
    pub strains: Vec<[f64; 6]>,
    /// Element-centre stresses, MPa.
    pub stresses: Vec<[f64; 6]>,
    /// Element von Mises stress, MPa.
    pub von_mises: Vec<f64>,
    /// Nodal reaction forces, N; zero on unconstrained DOFs.
    pub reactions: Vec<[f64; 3]>,
    pub stats: SolveStats,
}

const COMPONENTS: [&str; 6] = ["xx", "yy", "zz", "xy", "yz", "zx"];

impl FieldResult {
    pub fn max_displacement(&self) -> f64 {
        self.displacements
            .iter()
            .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn max_von_mises(&self) -> f64 {
        self.von_mises.iter().copied().fold(0.0, f64::max)
    }

    pub fn total_reaction(&self) -> [f64; 3] {
        let mut t = [0.0; 3];
        for r in &self.reactions {
            for a in 0..3 {
                t[a] += r[a];
            }
        }
        t
    }

    /// Export fields: displacement, reaction, von_mises, stress_*, strain_*.
    pub fn fields(&self) -> Vec<Field> {
        let mut out: Vec<Field> = vec![
            VectorField::new("displacement", Association::Node, self.displacements.clone()).into(),
            VectorField::new("reaction", Association::Node, self.reactions.clone()).into(),
            ScalarField::per_element("von_mises", self.von_mises.clone()).into(),
        ];
        for (c, name) in COMPONENTS.iter().enumerate() {
            out.push(
                ScalarField::per_element(format!("stress_{name}"), self.stresses.iter().map(|s| s[c]).collect())
                    .into(),
            );
        }
        for (c, name) in COMPONENTS.iter().enumerate() {
            out.push(
                ScalarField::per_element(format!("strain_{name}"), self.strains.iter().map(|s| s[c]).collect())
                    .into(),
            );
        }
        out
    }
}

/// Solves K·u = f with the load case's constraints.
pub fn solve_static(
    mesh: &VolumeMesh,
    material: &Material,
    load: &LoadCase,
    settings: &SolverSettings,
) -> Result<FieldResult> {
    let ndof = 3 * mesh.node_count();
    let k = assemble(mesh, material)?;
    let f = assemble_loads(mesh, material, load)?;
    let constrained = load.constrained_dofs(mesh)?;
    let mut fixed = vec![false; ndof];
    for &d in &constrained {
        fixed[d] = true;
    }
    check_rigid_body_modes(mesh, &fixed)?;

    let (comp, _) = node_components(mesh);
    let orphans = comp.iter().filter(|c| c.is_none()).count();
    if orphans > 0 {
        warn!("{orphans} node(s) belong to no element; their displacements are fixed at zero");
    }
    let free: Vec<usize> = (0..ndof)
        .filter(|&d| !fixed[d] && comp[d / 3].is_some())
        .collect();
    let kr = k.submatrix(&free);
    let fr: Vec<f64> = free.iter().map(|&d| f[d]).collect();
    let (ur, stats) = solve_spd(&kr, &fr, settings)?;
    let mut u = vec![0.0; ndof];
    for (i, &d) in free.iter().enumerate() {
        u[d] = ur[i];
    }

    let ku = k.mul_vec(&u);
    let mut reactions = vec![[0.0; 3]; mesh.node_count()];
    for &d in &constrained {
        reactions[d / 3][d % 3] = ku[d] - f[d];
    }
    let dmat = material.elasticity_matrix();
    let strains: Vec<[f64; 6]> = (0..mesh.element_count())
        .into_par_iter()
        .map(|e| element_center_strain(mesh, e, &u))
        .collect();
    let stresses: Vec<[f64; 6]> = strains
        .iter()
        .map(|eps| {
            let s = dmat * nalgebra::Vector6::from_column_slice(eps);
            [s[0], s[1], s[2], s[3], s[4], s[5]]
        })
        .collect();
    let von_mises = stresses.iter().map(von_mises).collect();
    Ok(FieldResult {
        displacements: u.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        strains,
        stresses,
        von_mises,
        reactions,
        stats,
    })
}

/// Volume-weighted average of a per-element field at each node. Nodes with
/// no adjacent element get 0 and a warning.
pub fn element_to_nodal(field: &ScalarField, mesh: &VolumeMesh) -> Result<ScalarField> {
    if field.association != Association::Element {
        return Err(Error::UnsupportedField(format!("'{}' is not per-element", field.name)));
    }
    if field.values.len() != mesh.element_count() {
        return Err(Error::FieldLength {
            name: field.name.clone(),
            expected: mesh.element_count(),
            actual: field.values.len(),
        });
    }
    let mut sum = vec![0.0; mesh.node_count()];
    let mut weight = vec![0.0; mesh.node_count()];
    for e in 0..mesh.element_count() {
        let v = mesh.element_volume(e);
        for &n in mesh.element(e).nodes() {
            sum[n] += v * field.values[e];
            weight[n] += v;
        }
    }
    let orphans = weight.iter().filter(|&&w| w == 0.0).count();
    if orphans > 0 {
        warn!("{orphans} orphan node(s) set to 0 in nodal '{}'", field.name);
    }
    let values = sum
        .iter()
        .zip(&weight)
        .map(|(s, w)| if *w > 0.0 { s / w } else { 0.0 })
        .collect();
    Ok(ScalarField::per_node(field.name.clone(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Point;
    use crate::primitives::hex_block;

    #[test]
    fn von_mises_reference_states() {
        assert_eq!(von_mises(&[7.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 7.0);
        assert!(von_mises(&[3.0, 3.0, 3.0, 0.0, 0.0, 0.0]).abs() < 1e-15);
        assert!((von_mises(&[0.0, 0.0, 0.0, 2.0, 0.0, 0.0]) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn material_validation() {
        assert!(Material::new(0.0, 0.3, 0.0).is_err());
        assert!(Material::new(1.0, 0.5, 0.0).is_err());
        assert!(Material::new(1.0, 0.2, -1.0).is_err());
        assert_eq!(Material::spruce().mass_density(), 4.5e-10);
    }

    #[test]
    fn dof_ranges_group_contiguous() {
        assert_eq!(Constraint::pinned("a").dof_ranges(), vec![(1, 3)]);
        assert_eq!(Constraint::new("a", vec![3, 1]).dof_ranges(), vec![(1, 1), (3, 3)]);
    }

    #[test]
    fn gravity_on_unit_hex() {
        let mesh = hex_block([1, 1, 1], 1.0);
        let load = LoadCase {
            gravity: [0.0, 0.0, -STANDARD_GRAVITY],
            ..Default::default()
        };
        let f = assemble_loads(&mesh, &Material::spruce(), &load).unwrap();
        let total: f64 = f.iter().skip(2).step_by(3).sum();
        assert!((total + 4.5e-10 * 9810.0).abs() < 1e-18);
        for n in 0..8 {
            assert!((f[3 * n + 2] + 4.5e-10 * 9810.0 / 8.0).abs() < 1e-20);
        }
    }

    #[test]
    fn equal_and_area_weighted_top_loads() {
        let mut mesh = hex_block([2, 2, 1], 1.0);
        let top: Vec<usize> = (0..mesh.node_count()).filter(|&i| mesh.nodes()[i].z == 1.0).collect();
        assert_eq!(top.len(), 9);
        mesh.add_node_set("top", top).unwrap();
        let mut sl = SurfaceLoad {
            node_set: "top".into(),
            force: [0.0, 0.0, -500.0],
            distribution: Distribution::EqualPerNode,
        };
        for (_, f) in surface_load_forces(&mesh, &sl).unwrap() {
            assert!((f[2] + 500.0 / 9.0).abs() < 1e-12);
        }
        sl.distribution = Distribution::AreaWeighted;
        let forces = surface_load_forces(&mesh, &sl).unwrap();
        let center = forces.iter().find(|(n, _)| mesh.nodes()[*n] == Point::new(1.0, 1.0, 1.0)).unwrap();
        assert!((center.1[2] + 125.0).abs() < 1e-12);
        let corner = forces.iter().find(|(n, _)| mesh.nodes()[*n] == Point::new(0.0, 0.0, 1.0)).unwrap();
        assert!((corner.1[2] + 31.25).abs() < 1e-12);
    }

    #[test]
    fn unconstrained_solve_is_rejected() {
        let mut mesh = hex_block([1, 1, 1], 1.0);
        mesh.add_node_set("one", vec![0]).unwrap();
        let load = LoadCase {
            constraints: vec![Constraint::pinned("one")],
            ..Default::default()
        };
        let err = solve_static(&mesh, &Material::spruce(), &load, &SolverSettings::default());
        assert!(matches!(err, Err(Error::UnderConstrained(_))));
    }

    #[test]
    fn zero_load_gives_zero_fields() {
        let mut mesh = hex_block([2, 1, 1], 1.0);
        mesh.add_node_set("base", vec![0, 1, 2, 3, 4, 5]).unwrap();
        let load = LoadCase {
            constraints: vec![Constraint::pinned("base")],
            ..Default::default()
        };
        let r = solve_static(&mesh, &Material::spruce(), &load, &SolverSettings::default()).unwrap();
        assert!(r.displacements.iter().flatten().all(|&v| v == 0.0));
        assert!(r.von_mises.iter().all(|&v| v == 0.0));
        assert!(r.reactions.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn nodal_average_of_two_elements() {
        let mesh = hex_block([2, 1, 1], 1.0);
        let f = ScalarField::per_element("s", vec![1.0, 3.0]);
        let nodal = element_to_nodal(&f, &mesh).unwrap();
        for (i, p) in mesh.nodes().iter().enumerate() {
            let expect = if p.x == 0.0 {
                1.0
            } else if p.x == 1.0 {
                2.0
            } else {
                3.0
            };
            assert_eq!(nodal.values[i], expect);
        }
        let wrong = ScalarField::per_node("n", vec![0.0; 12]);
        assert!(element_to_nodal(&wrong, &mesh).is_err());
    }
}
