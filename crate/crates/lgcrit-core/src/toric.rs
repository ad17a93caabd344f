//! Exact lattice-polytope, divisor, Picard-group and toric line-bundle
//! cohomology computations.
//!
//! The central object is a Fano polytope: a lattice polytope containing the
//! origin in its interior, each of whose facets is a unimodular simplex. Its
//! vertices are the rays of a complete smooth fan; the associated toric
//! manifold's Picard group, divisor classes, section spaces and sheaf
//! cohomology are all computed exactly over the rationals.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{det_i64, rank, rat, solve_square, Rat};

/// Integer T-divisor: one coefficient per ray.
pub type TDivisor = Vec<i64>;
/// Real divisor (e.g. an argument profile), one entry per ray.
pub type RDivisor = Vec<f64>;
/// Integer coordinates in the chosen Picard basis.
pub type PicClass = Vec<i64>;
/// Real coordinates in the chosen Picard basis.
pub type RPicClass = Vec<f64>;

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),
    #[error("polytope is not smooth: facet {0:?} has determinant {1}")]
    NotSmooth(Vec<usize>, i128),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no integral Picard basis found on the given generators")]
    SingularBasis,
    #[error("unbounded lattice-point region (model is not complete?)")]
    UnboundedRegion,
    #[error("collection is not strongly exceptional")]
    NotStronglyExceptional,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Facet {
    /// Indices into the vertex list; always `dim` of them.
    pub vertex_indices: Vec<usize>,
    /// Inner normal `m` with `<m, v> = -1` on the facet and `> -1` elsewhere.
    pub inner_normal: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanoPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToricModel {
    pub polytope: FanoPolytope,
    pub ray_labels: Vec<String>,
    pub ray_count: usize,
    pub pic_rank: usize,
    /// rho x r integer matrix: divisor coefficients -> Pic basis coordinates.
    pub class_matrix: Vec<Vec<i64>>,
    /// r x n integer matrix with rows `<., n_F>`; row F is just the ray F.
    pub principal_matrix: Vec<Vec<i64>>,
    pub basis_labels: Vec<String>,
    /// Ray indices carrying the basis representatives: the class matrix is
    /// the identity on these unit divisors.
    pub generators: Vec<usize>,
    pub euler: usize,
    /// Reduced rational Betti numbers of the induced subcomplex of the fan
    /// boundary complex, per ray-subset bitmask. `subset_betti[mask][i]`
    /// holds `dim H~^{i-1}` for `i = 0..=dim`.
    #[serde(skip)]
    pub(crate) subset_betti: Vec<Vec<usize>>,
}

impl ToricModel {
    pub fn dim(&self) -> usize {
        self.polytope.dim
    }
}

fn primitive(v: &[i64]) -> bool {
    let g = v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()));
    g == 1
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Build a toric model from the vertex list of a Fano polytope.
///
/// Facets are found by scanning all `n`-subsets of vertices for supporting
/// hyperplanes with every other vertex strictly on the origin side. When
/// `pic_basis` is given it must name `rho` ray indices on whose unit divisors
/// the class matrix becomes the identity; otherwise a canonical generator set
/// is chosen automatically.
pub fn build_model(
    vertices: Vec<Vec<i64>>,
    ray_labels: Option<Vec<String>>,
    pic_basis: Option<(Vec<usize>, Vec<String>)>,
) -> Result<ToricModel, ToricError> {
    let r = vertices.len();
    if r == 0 {
        return Err(ToricError::DegenerateInput("no vertices".into()));
    }
    let n = vertices[0].len();
    if vertices.iter().any(|v| v.len() != n) {
        return Err(ToricError::DegenerateInput(
            "vertices of mixed dimension".into(),
        ));
    }
    if r < n + 1 {
        return Err(ToricError::DegenerateInput(format!(
            "need at least {} vertices, got {r}",
            n + 1
        )));
    }
    for v in &vertices {
        if !primitive(v) {
            return Err(ToricError::DegenerateInput(format!(
                "vertex {v:?} is not primitive"
            )));
        }
    }
    {
        let mat: Vec<Vec<Rat>> = vertices
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect();
        if rank(&mat) < n {
            return Err(ToricError::DegenerateInput(
                "vertices do not span the ambient space".into(),
            ));
        }
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    for v in &vertices {
        if !seen.insert(v.clone()) {
            return Err(ToricError::DegenerateInput(format!(
                "duplicate vertex {v:?}"
            )));
        }
    }

    // Facet scan over all n-subsets.
    let mut facets: Vec<Facet> = Vec::new();
    for subset in subsets(r, n) {
        let a: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| vertices[i].iter().map(|&x| rat(x)).collect())
            .collect();
        let b = vec![rat(-1); n];
        let m = match solve_square(&a, &b) {
            Some(m) => m,
            None => continue,
        };
        // Supporting iff every vertex satisfies <m, v> >= -1, with equality
        // exactly on the subset.
        let mut supporting = true;
        let mut extra_on_plane = false;
        for (i, v) in vertices.iter().enumerate() {
            let val: Rat = v.iter().zip(&m).map(|(&x, &mi)| rat(x) * mi).sum();
            if val < rat(-1) {
                supporting = false;
                break;
            }
            if val == rat(-1) && !subset.contains(&i) {
                extra_on_plane = true;
            }
        }
        if !supporting {
            continue;
        }
        if extra_on_plane {
            return Err(ToricError::NotSmooth(subset, 0));
        }
        if m.iter().any(|mi| !mi.is_integer()) {
            return Err(ToricError::NotReflexive(format!(
                "facet {subset:?} has non-integral inner normal"
            )));
        }
        let simplex: Vec<Vec<i64>> = subset.iter().map(|&i| vertices[i].clone()).collect();
        let d = det_i64(&simplex);
        if d.abs() != 1 {
            return Err(ToricError::NotSmooth(subset, d));
        }
        facets.push(Facet {
            vertex_indices: subset,
            inner_normal: m.iter().map(|mi| mi.to_integer() as i64).collect(),
        });
    }
    if facets.is_empty() {
        return Err(ToricError::NotReflexive("no supporting facets found".into()));
    }
    // Completeness: every vertex on >= 1 facet and each ridge shared by
    // exactly two facets. This also rules out the origin lying on or outside
    // the boundary.
    let mut on_facet = vec![false; r];
    let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for f in &facets {
        for &i in &f.vertex_indices {
            on_facet[i] = true;
            let mut ridge = f.vertex_indices.clone();
            ridge.retain(|&j| j != i);
            *ridge_count.entry(ridge).or_insert(0) += 1;
        }
    }
    if on_facet.iter().any(|&b| !b) {
        return Err(ToricError::NotReflexive(
            "a vertex lies on no facet (origin not interior?)".into(),
        ));
    }
    if n > 1 && ridge_count.values().any(|&c| c != 2) {
        return Err(ToricError::NotReflexive(
            "fan is not complete: a ridge is not shared by exactly two facets".into(),
        ));
    }

    let rho = r - n;
    let labels =
        ray_labels.unwrap_or_else(|| (0..r).map(|i| format!("r{i}")).collect::<Vec<_>>());
    if labels.len() != r {
        return Err(ToricError::LengthMismatch {
            expected: r,
            got: labels.len(),
        });
    }

    let (generators, basis_labels) = match pic_basis {
        Some((gens, names)) => {
            if gens.len() != rho || names.len() != rho {
                return Err(ToricError::LengthMismatch {
                    expected: rho,
                    got: gens.len(),
                });
            }
            (gens, names)
        }
        None => {
            // Canonical fallback: first generator subset (in lexicographic
            // order) that yields an integral class matrix.
            let mut found = None;
            'outer: for gens in subsets(r, rho) {
                if class_matrix_for(&vertices, &gens).is_some() {
                    found = Some(gens);
                    break 'outer;
                }
            }
            let gens = found.ok_or(ToricError::SingularBasis)?;
            let names = gens.iter().map(|&g| format!("L{g}")).collect();
            (gens, names)
        }
    };
    let class_matrix = class_matrix_for(&vertices, &generators).ok_or(ToricError::SingularBasis)?;

    let facet_masks: Vec<u32> = facets
        .iter()
        .map(|f| f.vertex_indices.iter().fold(0u32, |m, &i| m | (1 << i)))
        .collect();
    let subset_betti = all_subset_betti(r, n, &facet_masks);

    Ok(ToricModel {
        euler: facets.len(),
        polytope: FanoPolytope {
            dim: n,
            vertices: vertices.clone(),
            facets,
        },
        ray_labels: labels,
        ray_count: r,
        pic_rank: rho,
        class_matrix,
        principal_matrix: vertices,
        basis_labels,
        generators,
        subset_betti,
    })
}

/// Class matrix rows solve `c . P = 0` with `c` the identity on the chosen
/// generator unit divisors. Returns `None` if the constraints are singular or
/// the solution is not integral.
fn class_matrix_for(vertices: &[Vec<i64>], gens: &[usize]) -> Option<Vec<Vec<i64>>> {
    let r = vertices.len();
    let n = vertices[0].len();
    let rho = r - n;
    // Constraint matrix M (r x r): columns 0..n are the principal matrix
    // (c.P = 0), columns n..r are unit vectors at the generators.
    let mut mt = vec![vec![rat(0); r]; r]; // transposed system: Mt c = rhs
    for (f, v) in vertices.iter().enumerate() {
        for j in 0..n {
            mt[j][f] = rat(v[j]);
        }
    }
    for (i, &g) in gens.iter().enumerate() {
        mt[n + i][g] = rat(1);
    }
    let mut rows = Vec::with_capacity(rho);
    for i in 0..rho {
        let mut rhs = vec![rat(0); r];
        rhs[n + i] = rat(1);
        let c = solve_square(&mt, &rhs)?;
        if c.iter().any(|x| !x.is_integer()) {
            return None;
        }
        rows.push(c.iter().map(|x| x.to_integer() as i64).collect());
    }
    Some(rows)
}

/// `class_matrix . D`.
pub fn divisor_class(model: &ToricModel, d: &[i64]) -> Result<PicClass, ToricError> {
    if d.len() != model.ray_count {
        return Err(ToricError::LengthMismatch {
            expected: model.ray_count,
            got: d.len(),
        });
    }
    Ok(model
        .class_matrix
        .iter()
        .map(|row| row.iter().zip(d).map(|(&c, &x)| c * x).sum())
        .collect())
}

/// Real Picard coordinates of a real divisor: the unique `b` such that
/// `D - sum b_i L_i(rep)` is a real principal divisor. Because the class
/// matrix annihilates the principal span and is the identity on the basis
/// representatives, this is exactly `class_matrix . D`.
pub fn real_class_coords(model: &ToricModel, d: &[f64]) -> Result<RPicClass, ToricError> {
    if d.len() != model.ray_count {
        return Err(ToricError::LengthMismatch {
            expected: model.ray_count,
            got: d.len(),
        });
    }
    Ok(model
        .class_matrix
        .iter()
        .map(|row| row.iter().zip(d).map(|(&c, &x)| c as f64 * x).sum())
        .collect())
}

/// Exact rational variant of [`real_class_coords`].
pub fn rational_class_coords(model: &ToricModel, d: &[Rat]) -> Vec<Rat> {
    model
        .class_matrix
        .iter()
        .map(|row| row.iter().zip(d).map(|(&c, &x)| rat(c) * x).sum())
        .collect()
}

/// Snap-then-floor of real Picard coordinates: entries within `snap_eps` of
/// an integer are rounded first, then everything is floored.
pub fn floor_class(b: &[f64], snap_eps: f64) -> PicClass {
    b.iter()
        .map(|&x| {
            let r = x.round();
            let y = if (x - r).abs() <= snap_eps { r } else { x };
            y.floor() as i64
        })
        .collect()
}

/// Exact counterpart of [`floor_class`] for rational coordinates (no snapping
/// is needed: floors of rationals are exact).
pub fn floor_class_exact(b: &[Rat]) -> PicClass {
    b.iter().map(|&x| crate::linalg::rat_floor(x)).collect()
}

// ---------------------------------------------------------------------------
// Reduced simplicial cohomology of induced subcomplexes (sign patterns).

/// Reduced rational Betti numbers for every ray-subset of the fan boundary
/// complex. Entry `[mask][i]` is `dim H~_{i-1}` of the subcomplex induced on
/// the rays in `mask`, for `i = 0..=n` (so index 0 records `H~_{-1}`).
fn all_subset_betti(r: usize, n: usize, facet_masks: &[u32]) -> Vec<Vec<usize>> {
    // All cone masks: subsets of facet vertex sets.
    let mut cones: BTreeSet<u32> = BTreeSet::new();
    for &fm in facet_masks {
        // enumerate submasks
        let mut sub = fm;
        loop {
            cones.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & fm;
        }
    }
    let cones: Vec<u32> = cones.into_iter().collect();
    let mut out = Vec::with_capacity(1 << r);
    for mask in 0..(1u32 << r) {
        out.push(subset_betti(n, &cones, mask));
    }
    out
}

fn subset_betti(n: usize, cones: &[u32], mask: u32) -> Vec<usize> {
    // Simplices of the induced subcomplex, grouped by dimension; the empty
    // set participates as the (-1)-simplex of the augmented complex.
    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); n + 1]; // index d: d-simplices
    let mut has_empty = false;
    for &c in cones {
        if c & !mask != 0 {
            continue;
        }
        let k = c.count_ones() as usize;
        if k == 0 {
            has_empty = true;
        } else if k <= n {
            by_dim[k - 1].push(c);
        }
    }
    debug_assert!(has_empty);
    // Boundary matrix from d-simplices to (d-1)-simplices (d = 0 maps to the
    // empty simplex: the augmentation). Ranks over Q.
    let mut betti = vec![0usize; n + 1];
    let mut rank_next = 0usize; // rank of boundary from dimension d+1
    for d in (0..n).rev() {
        let simp = &by_dim[d];
        let faces: &[u32] = if d == 0 { &[0u32] } else { &by_dim[d - 1] };
        let face_index: BTreeMap<u32, usize> =
            faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut bmat = vec![vec![rat(0); simp.len()]; faces.len()];
        for (j, &s) in simp.iter().enumerate() {
            let mut sign = 1i64;
            for bit in 0..32 {
                if s & (1 << bit) != 0 {
                    let f = s & !(1 << bit);
                    if let Some(&i) = face_index.get(&f) {
                        bmat[i][j] = rat(sign);
                    }
                    sign = -sign;
                }
            }
        }
        let rank_d = rank(&bmat);
        let nullity = simp.len() - rank_d;
        // H~_d = ker(boundary_d) / im(boundary_{d+1})
        betti[d + 1] = nullity - rank_next;
        rank_next = rank_d;
    }
    // H~_{-1}: dim C_{-1} - rank(augmentation).
    betti[0] = 1 - rank_next;
    betti
}

// ---------------------------------------------------------------------------
// Lattice-point regions.

/// A linear constraint `<m, coeffs> >= rhs` (or `<=` when `is_ge` is false).
struct Constraint {
    coeffs: Vec<i64>,
    rhs: i64,
    is_ge: bool,
}

impl Constraint {
    fn holds_i(&self, m: &[i64]) -> bool {
        let v: i64 = self.coeffs.iter().zip(m).map(|(&c, &x)| c * x).sum();
        if self.is_ge {
            v >= self.rhs
        } else {
            v <= self.rhs
        }
    }
    fn holds_q(&self, m: &[Rat]) -> bool {
        let v: Rat = self.coeffs.iter().zip(m).map(|(&c, &x)| rat(c) * x).sum();
        if self.is_ge {
            v >= rat(self.rhs)
        } else {
            v <= rat(self.rhs)
        }
    }
}

/// Enumerate the lattice points of a bounded region cut out by the given
/// constraints: exact vertex enumeration for the bounding box, then a box
/// scan. A one-cell shell around the box is also scanned; any solution there
/// signals an unbounded region (model bug) and raises an error.
fn lattice_points_of(n: usize, cons: &[Constraint]) -> Result<Vec<Vec<i64>>, ToricError> {
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    for subset in subsets(cons.len(), n) {
        let a: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| cons[i].coeffs.iter().map(|&c| rat(c)).collect())
            .collect();
        let b: Vec<Rat> = subset.iter().map(|&i| rat(cons[i].rhs)).collect();
        if let Some(v) = solve_square(&a, &b) {
            if cons.iter().all(|c| c.holds_q(&v)) {
                verts.push(v);
            }
        }
    }
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &verts {
        for (j, &x) in v.iter().enumerate() {
            lo[j] = lo[j].min(x.ceil().to_integer() as i64 - 1);
            hi[j] = hi[j].max(x.floor().to_integer() as i64 + 1);
        }
    }
    // Scan the box enlarged by one; points satisfying all constraints must
    // lie strictly inside the enlarged box, else the region is unbounded.
    let mut points = Vec::new();
    let mut cur = lo.clone();
    loop {
        if cons.iter().all(|c| c.holds_i(&cur)) {
            if cur
                .iter()
                .zip(lo.iter().zip(&hi))
                .any(|(&x, (&l, &h))| x == l || x == h)
            {
                return Err(ToricError::UnboundedRegion);
            }
            points.push(cur.clone());
        }
        // increment odometer
        let mut j = 0;
        loop {
            if j == n {
                points.sort();
                return Ok(points);
            }
            cur[j] += 1;
            if cur[j] <= hi[j] {
                break;
            }
            cur[j] = lo[j];
            j += 1;
        }
    }
}

/// Sheaf cohomology `h^0..h^n` of the line bundle `O(D)` by the sign-pattern
/// method: for every ray subset `S` with nonvanishing reduced cohomology of
/// its induced boundary subcomplex, count the characters `m` whose negativity
/// pattern with respect to `D` is exactly `S`.
pub fn line_bundle_cohomology(model: &ToricModel, d: &[i64]) -> Result<Vec<u64>, ToricError> {
    if d.len() != model.ray_count {
        return Err(ToricError::LengthMismatch {
            expected: model.ray_count,
            got: d.len(),
        });
    }
    let n = model.dim();
    let r = model.ray_count;
    let mut h = vec![0u64; n + 1];
    for mask in 0..(1u32 << r) {
        let betti = &model.subset_betti[mask as usize];
        if betti.iter().all(|&b| b == 0) {
            continue;
        }
        let cons: Vec<Constraint> = (0..r)
            .map(|f| {
                if mask & (1 << f) != 0 {
                    Constraint {
                        coeffs: model.polytope.vertices[f].clone(),
                        rhs: -d[f] - 1,
                        is_ge: false,
                    }
                } else {
                    Constraint {
                        coeffs: model.polytope.vertices[f].clone(),
                        rhs: -d[f],
                        is_ge: true,
                    }
                }
            })
            .collect();
        let count = lattice_points_of(n, &cons)?.len() as u64;
        if count > 0 {
            for (i, &b) in betti.iter().enumerate() {
                if b > 0 {
                    h[i] += count * b as u64;
                }
            }
        }
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// Hom bases, exceptionality, quivers.

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomBasisEntry {
    /// Character `m` in the dual lattice.
    pub character: Vec<i64>,
    /// The effective divisor `D_rep + div(m)`.
    pub divisor: TDivisor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomBasis {
    pub source: PicClass,
    pub target: PicClass,
    pub entries: Vec<HomBasisEntry>,
}

/// Deterministic integral representative of a class: coordinates placed on
/// the generator rays.
pub fn representative_divisor(model: &ToricModel, class: &[i64]) -> TDivisor {
    let mut d = vec![0i64; model.ray_count];
    for (i, &g) in model.generators.iter().enumerate() {
        d[g] = class[i];
    }
    d
}

pub fn div_of_character(model: &ToricModel, m: &[i64]) -> TDivisor {
    model
        .principal_matrix
        .iter()
        .map(|row| row.iter().zip(m).map(|(&a, &x)| a * x).sum())
        .collect()
}

/// Basis of `Hom(source, target)` as effective T-divisors splitting the Hom
/// space: lattice points of the section polytope of `target - source`.
pub fn hom_basis(
    model: &ToricModel,
    source: &[i64],
    target: &[i64],
) -> Result<HomBasis, ToricError> {
    let diff: PicClass = target.iter().zip(source).map(|(&t, &s)| t - s).collect();
    let d_rep = representative_divisor(model, &diff);
    let cons: Vec<Constraint> = (0..model.ray_count)
        .map(|f| Constraint {
            coeffs: model.polytope.vertices[f].clone(),
            rhs: -d_rep[f],
            is_ge: true,
        })
        .collect();
    let mut entries = Vec::new();
    for m in lattice_points_of(model.dim(), &cons)? {
        let div: TDivisor = div_of_character(model, &m)
            .iter()
            .zip(&d_rep)
            .map(|(&p, &d)| p + d)
            .collect();
        debug_assert!(div.iter().all(|&c| c >= 0));
        entries.push(HomBasisEntry {
            character: m,
            divisor: div,
        });
    }
    Ok(HomBasis {
        source: source.to_vec(),
        target: target.to_vec(),
        entries,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub is_exceptional: bool,
    pub is_strong: bool,
    /// Whether the collection size equals the Euler characteristic
    /// (necessary for fullness; fullness itself is not verified).
    pub size_matches_euler: bool,
    /// Violations `(from_index, to_index, ext_degree, dimension)`.
    pub failures: Vec<(usize, usize, usize, u64)>,
}

/// Check the (strong) exceptionality of an ordered collection of line-bundle
/// classes via exact cohomology of difference classes.
pub fn is_strongly_exceptional(
    model: &ToricModel,
    collection: &[PicClass],
) -> Result<ExceptionalReport, ToricError> {
    let mut failures = Vec::new();
    let mut exceptional = true;
    let mut strong = true;
    for (k, ek) in collection.iter().enumerate() {
        for (j, ej) in collection.iter().enumerate() {
            // Ext^i(E_j, E_k) = H^i(E_k - E_j)
            let diff: PicClass = ek.iter().zip(ej).map(|(&a, &b)| a - b).collect();
            let rep = representative_divisor(model, &diff);
            let h = line_bundle_cohomology(model, &rep)?;
            if j == k {
                if h[0] != 1 {
                    exceptional = false;
                    failures.push((j, k, 0, h[0]));
                }
                for (i, &hi) in h.iter().enumerate().skip(1) {
                    if hi != 0 {
                        exceptional = false;
                        failures.push((j, k, i, hi));
                    }
                }
            } else if j > k {
                for (i, &hi) in h.iter().enumerate() {
                    if hi != 0 {
                        exceptional = false;
                        failures.push((j, k, i, hi));
                    }
                }
            } else {
                for (i, &hi) in h.iter().enumerate().skip(1) {
                    if hi != 0 {
                        strong = false;
                        failures.push((j, k, i, hi));
                    }
                }
            }
        }
    }
    Ok(ExceptionalReport {
        is_exceptional: exceptional,
        is_strong: exceptional && strong,
        size_matches_euler: collection.len() == model.euler,
        failures,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<PicClass>,
    /// Edges `(from, to, label divisor)`, deterministic order.
    pub edges: Vec<(usize, usize, TDivisor)>,
}

/// Quiver of irreducible arrows: Hom-splitting divisors between collection
/// members that do not decompose as `D1 + D2` through an intermediate vertex.
pub fn build_quiver(model: &ToricModel, collection: &[PicClass]) -> Result<Quiver, ToricError> {
    let report = is_strongly_exceptional(model, collection)?;
    if !report.is_strong {
        return Err(ToricError::NotStronglyExceptional);
    }
    let nverts = collection.len();
    let mut hom: Vec<Vec<Vec<TDivisor>>> = vec![vec![Vec::new(); nverts]; nverts];
    for i in 0..nverts {
        for j in 0..nverts {
            if i == j {
                continue;
            }
            hom[i][j] = hom_basis(model, &collection[i], &collection[j])?
                .entries
                .into_iter()
                .map(|e| e.divisor)
                .collect();
        }
    }
    let mut edges = Vec::new();
    for i in 0..nverts {
        for j in 0..nverts {
            'entry: for d in &hom[i][j] {
                for mid in 0..nverts {
                    if mid == i || mid == j {
                        continue;
                    }
                    for d1 in &hom[i][mid] {
                        if d1.iter().zip(d).any(|(&a, &b)| a > b) {
                            continue;
                        }
                        let d2: TDivisor = d.iter().zip(d1).map(|(&a, &b)| a - b).collect();
                        if hom[mid][j].contains(&d2) {
                            continue 'entry; // factors; not irreducible
                        }
                    }
                }
                edges.push((i, j, d.clone()));
            }
        }
    }
    Ok(Quiver {
        vertices: collection.to_vec(),
        edges,
    })
}

/// Anticanonical-style divisor `K = -sum_F V(F)`.
pub fn canonical_divisor(model: &ToricModel) -> TDivisor {
    vec![-1; model.ray_count]
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn p2() -> ToricModel {
        build_model(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            None,
            Some((vec![0], vec!["H".into()])),
        )
        .unwrap()
    }

    pub fn hirzebruch() -> ToricModel {
        // rays v0, v1, e0, e1
        build_model(
            vec![vec![-1, 1], vec![1, 0], vec![0, -1], vec![0, 1]],
            Some(vec!["v0".into(), "v1".into(), "e0".into(), "e1".into()]),
            Some((vec![0, 2], vec!["piH".into(), "xi".into()])),
        )
        .unwrap()
    }

    #[test]
    fn p2_shape() {
        let m = p2();
        assert_eq!(m.euler, 3);
        assert_eq!(m.pic_rank, 1);
        // all three boundary divisors are hyperplanes
        for f in 0..3 {
            let mut d = vec![0; 3];
            d[f] = 1;
            assert_eq!(divisor_class(&m, &d).unwrap(), vec![1]);
        }
    }

    #[test]
    fn hirzebruch_shape_and_classes() {
        let m = hirzebruch();
        assert_eq!(m.euler, 4);
        assert_eq!(m.pic_rank, 2);
        assert_eq!(divisor_class(&m, &[1, 0, 0, 0]).unwrap(), vec![1, 0]);
        assert_eq!(divisor_class(&m, &[0, 1, 0, 0]).unwrap(), vec![1, 0]);
        assert_eq!(divisor_class(&m, &[0, 0, 1, 0]).unwrap(), vec![0, 1]);
        assert_eq!(divisor_class(&m, &[0, 0, 0, 1]).unwrap(), vec![-1, 1]);
        // principal divisor of m = (1,0): sum over rays of first coordinate
        let principal = div_of_character(&m, &[1, 0]);
        assert_eq!(divisor_class(&m, &principal).unwrap(), vec![0, 0]);
    }

    #[test]
    fn class_matrix_kills_principal() {
        let m = hirzebruch();
        for row in &m.class_matrix {
            for col in 0..m.dim() {
                let s: i64 = (0..m.ray_count)
                    .map(|f| row[f] * m.principal_matrix[f][col])
                    .sum();
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn real_coords_match_integer_path() {
        let m = hirzebruch();
        let d = [2.0, -1.0, 3.0, 0.0];
        let b = real_class_coords(&m, &d).unwrap();
        let exact = divisor_class(&m, &[2, -1, 3, 0]).unwrap();
        for (x, e) in b.iter().zip(&exact) {
            assert!((x - *e as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_half_profile_coords() {
        // profile (1/4, 1/4, 1/2, 1/2) on (v0, v1, e0, e1) has coordinates
        // (0, 1) after flooring: real coords are (1/4+1/4-1/2, 1/2+1/2) = (0,1).
        let m = hirzebruch();
        let b = real_class_coords(&m, &[0.25, 0.25, 0.5, 0.5]).unwrap();
        assert!((b[0] - 0.0).abs() < 1e-12 && (b[1] - 1.0).abs() < 1e-12);
        assert_eq!(floor_class(&b, 1e-6), vec![0, 1]);
    }

    #[test]
    fn floor_class_rules() {
        assert_eq!(floor_class(&[1.0, 2.0], 1e-6), vec![1, 2]);
        assert_eq!(floor_class(&[0.74999, 0.5], 1e-6), vec![0, 0]);
        assert_eq!(floor_class(&[1.9999999, 1.25], 1e-6), vec![2, 1]);
    }

    #[test]
    fn hirzebruch_cohomology_oracles() {
        let m = hirzebruch();
        assert_eq!(line_bundle_cohomology(&m, &[0, 0, 0, 0]).unwrap(), vec![1, 0, 0]);
        // pushforward oracle: h1(P1, O(-2)) = 1
        assert_eq!(
            line_bundle_cohomology(&m, &[-1, -1, 0, 0]).unwrap(),
            vec![0, 1, 0]
        );
        // Serre duality against O for the canonical divisor
        assert_eq!(
            line_bundle_cohomology(&m, &canonical_divisor(&m)).unwrap(),
            vec![0, 0, 1]
        );
    }

    #[test]
    fn p2_section_counts_binomial() {
        let m = p2();
        for d in 0..=4i64 {
            let rep = representative_divisor(&m, &[d]);
            let h = line_bundle_cohomology(&m, &rep).unwrap();
            let expect = ((d + 1) * (d + 2) / 2) as u64;
            assert_eq!(h[0], expect, "h0({d}H)");
            assert_eq!(h[1], 0);
            assert_eq!(h[2], 0);
        }
    }

    #[test]
    fn hirzebruch_hom_bases() {
        let m = hirzebruch();
        // 0 -> xi: three sections
        let hb = hom_basis(&m, &[0, 0], &[0, 1]).unwrap();
        let divs: Vec<TDivisor> = hb.entries.iter().map(|e| e.divisor.clone()).collect();
        assert_eq!(divs.len(), 3);
        assert!(divs.contains(&vec![0, 0, 1, 0])); // V(e0)
        assert!(divs.contains(&vec![1, 0, 0, 1])); // V(v0)+V(e1)
        assert!(divs.contains(&vec![0, 1, 0, 1])); // V(v1)+V(e1)
        // 0 -> piH: two sections
        let hb = hom_basis(&m, &[0, 0], &[1, 0]).unwrap();
        let divs: Vec<TDivisor> = hb.entries.iter().map(|e| e.divisor.clone()).collect();
        assert_eq!(divs.len(), 2);
        assert!(divs.contains(&vec![1, 0, 0, 0]) && divs.contains(&vec![0, 1, 0, 0]));
        // xi -> 0: empty
        assert!(hom_basis(&m, &[0, 1], &[0, 0]).unwrap().entries.is_empty());
    }

    #[test]
    fn hom_basis_representative_invariance() {
        let m = hirzebruch();
        // h0 equals the hom-basis count for a non-generator representative.
        let rep = vec![1, 0, 1, 0]; // V(v0)+V(e0), class (1,1)
        let h = line_bundle_cohomology(&m, &rep).unwrap();
        let hb = hom_basis(&m, &[0, 0], &[1, 1]).unwrap();
        assert_eq!(h[0] as usize, hb.entries.len());
    }

    #[test]
    fn exceptionality_checks() {
        let m = p2();
        let rep = is_strongly_exceptional(&m, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(rep.is_exceptional && rep.is_strong && rep.size_matches_euler);

        let m = hirzebruch();
        let coll = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let rep = is_strongly_exceptional(&m, &coll).unwrap();
        assert!(rep.is_strong, "failures: {:?}", rep.failures);

        let bad = vec![vec![0, 0], vec![2, 0]];
        let rep = is_strongly_exceptional(&m, &bad).unwrap();
        assert!(!rep.is_strong);
        assert!(rep.failures.iter().any(|&(_, _, i, d)| i == 1 && d == 1));
    }

    #[test]
    fn hirzebruch_quiver() {
        let m = hirzebruch();
        // order: E00, E10, E01, E11 (lexicographic in (l,k))
        let coll = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let q = build_quiver(&m, &coll).unwrap();
        assert_eq!(q.vertices.len(), 4);
        // 2 horizontal pairs of arrows, 2 vertical, 1 diagonal: 7 edges
        assert_eq!(q.edges.len(), 7);
        let count = |from: usize, to: usize| q.edges.iter().filter(|e| e.0 == from && e.1 == to).count();
        assert_eq!(count(0, 1), 2); // E00 -> E10: V(v0), V(v1)
        assert_eq!(count(2, 3), 2); // E01 -> E11
        assert_eq!(count(0, 2), 1); // E00 -> E01: V(e0)
        assert_eq!(count(1, 3), 1); // E10 -> E11: V(e0)
        assert_eq!(count(1, 2), 1); // E10 -> E01: V(e1)
        assert_eq!(count(0, 3), 0); // everything into E11 from E00 factors
    }

    #[test]
    fn single_vertex_quiver_has_no_edges() {
        let m = hirzebruch();
        let q = build_quiver(&m, &[vec![0, 0]]).unwrap();
        assert!(q.edges.is_empty());
    }

    #[test]
    fn serre_duality_spot() {
        let m = hirzebruch();
        let k = canonical_divisor(&m);
        for d in [
            vec![1, 0, 2, -1],
            vec![-2, 1, 0, 3],
            vec![0, 0, -1, -1],
            vec![2, 2, 2, 2],
        ] {
            let h = line_bundle_cohomology(&m, &d).unwrap();
            let kd: TDivisor = k.iter().zip(&d).map(|(&a, &b)| a - b).collect();
            let hk = line_bundle_cohomology(&m, &kd).unwrap();
            let n = m.dim();
            for i in 0..=n {
                assert_eq!(h[i], hk[n - i], "serre duality failed for {d:?} at {i}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_model(vec![vec![1, 0], vec![-1, 0], vec![0, 2]], None, None),
            Err(ToricError::DegenerateInput(_))
        ));
        // origin on the boundary: segment-like configuration
        assert!(build_model(vec![vec![1, 0], vec![-1, 0], vec![0, 1]], None, None).is_err());
        // non-smooth: P(1,1,2)-style triangle
        assert!(matches!(
            build_model(vec![vec![1, 0], vec![0, 1], vec![-1, -2]], None, None),
            Err(ToricError::NotSmooth(_, _)) | Err(ToricError::NotReflexive(_))
        ));
    }
}
