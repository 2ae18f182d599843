//! Global rail-bridge matrices by direct-stiffness assembly.
//!
//! Structural DOFs are numbered rail first, then bridge: node `i` (0-based)
//! of the rail owns `2i` (deflection) and `2i + 1` (rotation); the bridge
//! copies that pattern after an offset of `2(n + 1)`. Once a vehicle is
//! scattered in, its body DOF is prepended at index 0 of the free system.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SMatrix};

use crate::coupling::CouplingBlocks;
use crate::error::ensure;
use crate::hermite::{self, ElementBlocks};
use crate::linalg::Vec4;
use crate::vehicle::WheelLocation;
use crate::{Error, Result};

pub type Mat8 = SMatrix<f64, 8, 8>;

/// Section properties of one beam layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSection {
    /// Flexural rigidity E·I, N·m².
    pub rigidity: f64,
    /// Mass per unit length, kg/m.
    pub mass_per_length: f64,
    /// Distributed viscous damping, N·s/m².
    pub damping_per_length: f64,
}

impl BeamSection {
    pub fn validate(&self) -> Result<()> {
        ensure(self.rigidity > 0.0 && self.rigidity.is_finite(), "rigidity", self.rigidity, "EI > 0")?;
        ensure(
            self.mass_per_length > 0.0 && self.mass_per_length.is_finite(),
            "mass_per_length",
            self.mass_per_length,
            "m > 0",
        )?;
        ensure(
            self.damping_per_length >= 0.0 && self.damping_per_length.is_finite(),
            "damping_per_length",
            self.damping_per_length,
            "c >= 0",
        )
    }
}

/// Two equal meshes of `n` elements: the rail over the bridge deck, tied by a
/// distributed spring-damper bed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub n: usize,
    pub l: f64,
    pub rail: BeamSection,
    pub bridge: BeamSection,
    /// Bed stiffness per unit length, N/m².
    pub k_bed: f64,
    /// Bed damping per unit length, N·s/m².
    pub c_bed: f64,
}

impl Mesh {
    pub fn validate(&self) -> Result<()> {
        ensure(self.n >= 2, "element count", self.n as f64, "n >= 2")?;
        ensure(self.l > 0.0 && self.l.is_finite(), "element length", self.l, "l > 0")?;
        self.rail.validate()?;
        self.bridge.validate()?;
        ensure(self.k_bed >= 0.0 && self.k_bed.is_finite(), "k_bed", self.k_bed, "k_bed >= 0")?;
        ensure(self.c_bed >= 0.0 && self.c_bed.is_finite(), "c_bed", self.c_bed, "c_bed >= 0")
    }

    /// Span length `n·l`.
    pub fn span(&self) -> f64 {
        self.n as f64 * self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beam {
    Rail,
    Bridge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One beam, `2(n + 1)` structural DOFs (used for bridge-only checks).
    SingleBeam,
    /// Rail then bridge, `4(n + 1)` structural DOFs.
    RailBridge,
}

/// Full structural index → free index. Constrained DOFs map to `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    map: Vec<Option<usize>>,
    free: usize,
}

impl DofMap {
    pub fn identity(size: usize) -> Self {
        DofMap {
            map: (0..size).map(Some).collect(),
            free: size,
        }
    }

    fn eliminating(size: usize, constrained: &[usize]) -> Self {
        let mut map = vec![None; size];
        let mut free = 0;
        for (i, slot) in map.iter_mut().enumerate() {
            if !constrained.contains(&i) {
                *slot = Some(free);
                free += 1;
            }
        }
        DofMap { map, free }
    }

    pub fn full_len(&self) -> usize {
        self.map.len()
    }

    pub fn free_len(&self) -> usize {
        self.free
    }

    pub fn get(&self, full: usize) -> Option<usize> {
        self.map.get(full).copied().flatten()
    }

    /// Full indices that were eliminated.
    pub fn constrained(&self) -> impl Iterator<Item = usize> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.is_none().then_some(i))
    }
}

/// `M ü + C u̇ + K u = F` over free DOFs.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSystem {
    pub m: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub f: DVector<f64>,
    pub dof_map: DofMap,
    pub layout: Layout,
    /// Whether index 0 is the vehicle body DOF.
    pub has_vehicle: bool,
    pub n: usize,
    pub l: f64,
}

impl GlobalSystem {
    fn zeros(size: usize, layout: Layout, n: usize, l: f64) -> Self {
        GlobalSystem {
            m: DMatrix::zeros(size, size),
            c: DMatrix::zeros(size, size),
            k: DMatrix::zeros(size, size),
            f: DVector::zeros(size),
            dof_map: DofMap::identity(size),
            layout,
            has_vehicle: false,
            n,
            l,
        }
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn span(&self) -> f64 {
        self.n as f64 * self.l
    }

    fn vehicle_offset(&self) -> usize {
        usize::from(self.has_vehicle)
    }

    /// Position of a full structural DOF in the system vectors, if free.
    pub fn index_of(&self, full: usize) -> Option<usize> {
        self.dof_map.get(full).map(|i| i + self.vehicle_offset())
    }

    /// First full structural index of `beam`.
    pub fn beam_offset(&self, beam: Beam) -> Result<usize> {
        match (self.layout, beam) {
            (Layout::RailBridge, Beam::Rail) => Ok(0),
            (Layout::RailBridge, Beam::Bridge) => Ok(2 * (self.n + 1)),
            (Layout::SingleBeam, Beam::Bridge) => Ok(0),
            (Layout::SingleBeam, Beam::Rail) => {
                Err(Error::Config("single-beam system has no rail".into()))
            }
        }
    }

    /// Full structural indices of element `j` (1-based) of `beam`.
    pub fn element_dofs(&self, beam: Beam, j: usize) -> Result<[usize; 4]> {
        ensure((1..=self.n).contains(&j), "element index", j as f64, "1 <= j <= n")?;
        let o = self.beam_offset(beam)? + 2 * (j - 1);
        Ok([o, o + 1, o + 2, o + 3])
    }

    /// The four element DOF values of `values`, constrained DOFs read as 0.
    pub fn gather(&self, values: &DVector<f64>, beam: Beam, j: usize) -> Result<Vec4> {
        if values.len() != self.size() {
            return Err(Error::Dimension {
                what: "gather",
                expected: self.size(),
                actual: values.len(),
            });
        }
        let dofs = self.element_dofs(beam, j)?;
        let mut q = Vec4::zeros();
        for (slot, full) in q.iter_mut().zip(dofs) {
            *slot = self.index_of(full).map_or(0.0, |i| values[i]);
        }
        Ok(q)
    }

    /// Interpolated `(w, w′, w″)` of a nodal field at abscissa `x` on `beam`.
    pub fn field_at(&self, values: &DVector<f64>, beam: Beam, x: f64) -> Result<(f64, f64, f64)> {
        let loc = crate::vehicle::locate(x, self.l, self.n)?;
        let q = self.gather(values, beam, loc.j)?;
        let sh = hermite::shape(loc.xi, self.l)?;
        Ok((sh.n.dot(&q), sh.d1.dot(&q), sh.d2.dot(&q)))
    }
}

/// Connectivity vectors, 1-based, one per element. Element `p` maps to
/// `[2p−1, 2p, 2p+1, 2p+2, R+2p−1, …, R+2p+2]` with `R = 2(n + 1)`.
pub fn connectivity(n: usize) -> Vec<[usize; 8]> {
    let r = 2 * (n + 1);
    (1..=n)
        .map(|p| {
            let a = 2 * p - 1;
            [a, a + 1, a + 2, a + 3, r + a, r + a + 1, r + a + 2, r + a + 3]
        })
        .collect()
}

/// Rail-bridge element matrices `(M, C, K)`, rail DOFs first.
pub fn element_matrices(mesh: &Mesh, eb: &ElementBlocks) -> (Mat8, Mat8, Mat8) {
    let nn = eb.nn;
    let bb = eb.bb;
    let mut m = Mat8::zeros();
    let mut c = Mat8::zeros();
    let mut k = Mat8::zeros();

    m.fixed_view_mut::<4, 4>(0, 0).copy_from(&(nn * mesh.rail.mass_per_length));
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(&(nn * mesh.bridge.mass_per_length));

    let k_bed = nn * mesh.k_bed;
    k.fixed_view_mut::<4, 4>(0, 0).copy_from(&(bb * mesh.rail.rigidity + k_bed));
    k.fixed_view_mut::<4, 4>(4, 4).copy_from(&(bb * mesh.bridge.rigidity + k_bed));
    k.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-k_bed));
    k.fixed_view_mut::<4, 4>(4, 0).copy_from(&(-k_bed));

    let c_bed = nn * mesh.c_bed;
    c.fixed_view_mut::<4, 4>(0, 0)
        .copy_from(&(nn * (mesh.c_bed + mesh.rail.damping_per_length)));
    c.fixed_view_mut::<4, 4>(4, 4)
        .copy_from(&(nn * (mesh.c_bed + mesh.bridge.damping_per_length)));
    c.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-c_bed));
    c.fixed_view_mut::<4, 4>(4, 0).copy_from(&(-c_bed));

    (m, c, k)
}

fn scatter<const D: usize>(global: &mut DMatrix<f64>, local: &SMatrix<f64, D, D>, dofs: &[usize; D]) {
    for (i, &gi) in dofs.iter().enumerate() {
        for (j, &gj) in dofs.iter().enumerate() {
            global[(gi, gj)] += local[(i, j)];
        }
    }
}

/// Assembles the unconstrained rail-bridge system, `4(n + 1)` DOFs, no vehicle.
/// The rail-bridge structure carries no external load, so `f` is zero.
pub fn assemble_rail_bridge(mesh: &Mesh) -> Result<GlobalSystem> {
    mesh.validate()?;
    let eb = hermite::element_blocks(mesh.l)?;
    let (me, ce, ke) = element_matrices(mesh, &eb);
    let size = 4 * (mesh.n + 1);
    let mut sys = GlobalSystem::zeros(size, Layout::RailBridge, mesh.n, mesh.l);
    for vc in connectivity(mesh.n) {
        let dofs = vc.map(|d| d - 1);
        scatter(&mut sys.m, &me, &dofs);
        scatter(&mut sys.c, &ce, &dofs);
        scatter(&mut sys.k, &ke, &dofs);
    }
    Ok(sys)
}

/// Assembles a single unconstrained beam of `n` elements of length `l`.
pub fn assemble_beam(section: &BeamSection, n: usize, l: f64) -> Result<GlobalSystem> {
    section.validate()?;
    ensure(n >= 1, "element count", n as f64, "n >= 1")?;
    let eb = hermite::element_blocks(l)?;
    let me = eb.nn * section.mass_per_length;
    let ce = eb.nn * section.damping_per_length;
    let ke = eb.bb * section.rigidity;
    let mut sys = GlobalSystem::zeros(2 * (n + 1), Layout::SingleBeam, n, l);
    for p in 0..n {
        let dofs = [2 * p, 2 * p + 1, 2 * p + 2, 2 * p + 3];
        scatter(&mut sys.m, &me, &dofs);
        scatter(&mut sys.c, &ce, &dofs);
        scatter(&mut sys.k, &ke, &dofs);
    }
    Ok(sys)
}

/// Simple supports: removes the end deflection DOFs of every beam by
/// deleting their rows and columns. End rotations stay free.
pub fn apply_constraints(sys: &GlobalSystem) -> Result<GlobalSystem> {
    if sys.has_vehicle || sys.dof_map.free_len() != sys.dof_map.full_len() {
        return Err(Error::Config(
            "constraints apply to an unreduced structure without vehicle".into(),
        ));
    }
    let n = sys.n;
    let mut constrained = vec![0, 2 * n];
    if sys.layout == Layout::RailBridge {
        let r = 2 * (n + 1);
        constrained.extend([r, r + 2 * n]);
    }
    let map = DofMap::eliminating(sys.dof_map.full_len(), &constrained);
    let keep: Vec<usize> = (0..map.full_len()).filter(|i| map.get(*i).is_some()).collect();
    let size = keep.len();
    let pick = |a: &DMatrix<f64>| DMatrix::from_fn(size, size, |i, j| a[(keep[i], keep[j])]);
    Ok(GlobalSystem {
        m: pick(&sys.m),
        c: pick(&sys.c),
        k: pick(&sys.k),
        f: DVector::from_fn(size, |i, _| sys.f[keep[i]]),
        dof_map: map,
        layout: sys.layout,
        has_vehicle: false,
        n,
        l: sys.l,
    })
}

/// Couples a vehicle into a reduced rail-bridge system: prepends the body DOF
/// and adds the interaction blocks on the rail DOFs of element `loc.j`.
/// Contributions aimed at constrained DOFs are dropped.
pub fn scatter_vehicle(sys: &GlobalSystem, blocks: &CouplingBlocks, loc: &WheelLocation) -> Result<GlobalSystem> {
    if sys.has_vehicle || sys.layout != Layout::RailBridge {
        return Err(Error::Config(
            "vehicle scatter needs a rail-bridge system without vehicle".into(),
        ));
    }
    let size = sys.size() + 1;
    let embed = |a: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(size, size);
        out.view_mut((1, 1), (size - 1, size - 1)).copy_from(a);
        out
    };
    let mut out = GlobalSystem {
        m: embed(&sys.m),
        c: embed(&sys.c),
        k: embed(&sys.k),
        f: {
            let mut f = DVector::zeros(size);
            f.rows_mut(1, size - 1).copy_from(&sys.f);
            f
        },
        dof_map: sys.dof_map.clone(),
        layout: sys.layout,
        has_vehicle: true,
        n: sys.n,
        l: sys.l,
    };

    out.m[(0, 0)] += blocks.m_11;
    out.c[(0, 0)] += blocks.c_11;
    out.k[(0, 0)] += blocks.k_11;
    out.f[0] += blocks.f_1;

    let dofs = out.element_dofs(Beam::Rail, loc.j)?;
    let idx = dofs.map(|d| out.index_of(d));
    for (a, ia) in idx.iter().enumerate() {
        let Some(ia) = *ia else { continue };
        out.f[ia] += blocks.f_r[a];
        out.k[(0, ia)] += blocks.k_1r[a];
        out.k[(ia, 0)] += blocks.k_r1[a];
        out.c[(0, ia)] += blocks.c_1r[a];
        out.c[(ia, 0)] += blocks.c_r1[a];
        for (b, ib) in idx.iter().enumerate() {
            let Some(ib) = *ib else { continue };
            out.m[(ia, ib)] += blocks.m_rr_add[(a, b)];
            out.c[(ia, ib)] += blocks.c_rr_add[(a, b)];
            out.k[(ia, ib)] += blocks.k_rr_add[(a, b)];
        }
    }
    Ok(out)
}
