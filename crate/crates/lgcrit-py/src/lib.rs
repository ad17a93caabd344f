//! Python bindings for the lgcrit toolkit.
//!
//! Exposes a single `Model` class wrapping a toric model, its
//! Landau-Ginzburg family and reference collection, with methods mirroring
//! the library operations (solve, exceptional map, Frobenius image,
//! monodromy, alignment check, parameter sweep).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use lgcrit_core::catalog::{
    lg_family, make_model, reference_collection, LGFamily, ModelSpec, ReferenceCollection,
};
use lgcrit_core::emap::{self, EmapConfig};
use lgcrit_core::monodromy::{self, MonodromyCache, TrackConfig};
use lgcrit_core::solver::{self, SolverConfig};
use lgcrit_core::toric::{self, ToricModel};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// One critical point of the potential, with its asymptotic label.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Solution {
    #[pyo3(get)]
    label: String,
    #[pyo3(get)]
    coords: Vec<Complex64>,
    #[pyo3(get)]
    relative_residual: f64,
    #[pyo3(get)]
    argument_profile: Vec<f64>,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(label={:?}, coords={:?}, relative_residual={:.3e})",
            self.label, self.coords, self.relative_residual
        )
    }
}

/// A toric Fano model with its Landau-Ginzburg potential family.
#[pyclass]
struct Model {
    spec: ModelSpec,
    model: ToricModel,
    family: LGFamily,
    reference: ReferenceCollection,
}

impl Model {
    fn solver_config(&self, seed: Option<u64>) -> SolverConfig {
        let mut c = SolverConfig::default();
        if let Some(s) = seed {
            c.rng_seed = s;
        }
        c
    }

    fn solved(&self, t: f64, seed: Option<u64>) -> PyResult<solver::SolutionSet> {
        let set = solver::solve_all(&self.model, &self.family, t, &self.solver_config(seed))
            .map_err(runtime_err)?;
        if !set.complete {
            return Err(runtime_err(format!(
                "found {} of {} solutions at t={}",
                set.points.len(),
                self.model.euler,
                t
            )));
        }
        Ok(set)
    }
}

#[pymethods]
impl Model {
    /// Build a model from a spec string, e.g. "ps:s=2", "pb:s=3,a=1,2",
    /// "bp:n=4,r=2", "bb:n=5,b=0".
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec = ModelSpec::parse(spec).map_err(value_err)?;
        let model = make_model(&spec).map_err(value_err)?;
        let family = lg_family(&spec).map_err(value_err)?;
        let reference = reference_collection(&spec).map_err(value_err)?;
        Ok(Model {
            spec,
            model,
            family,
            reference,
        })
    }

    #[getter]
    fn spec(&self) -> String {
        self.spec.to_string_spec()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.model.polytope.dim
    }

    #[getter]
    fn euler(&self) -> usize {
        self.model.euler
    }

    #[getter]
    fn pic_rank(&self) -> usize {
        self.model.pic_rank
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.model.polytope.vertices.clone()
    }

    #[getter]
    fn ray_labels(&self) -> Vec<String> {
        self.model.ray_labels.clone()
    }

    #[getter]
    fn basis_labels(&self) -> Vec<String> {
        self.model.basis_labels.clone()
    }

    #[getter]
    fn default_t(&self) -> f64 {
        self.family.default_t
    }

    fn __repr__(&self) -> String {
        format!(
            "Model({:?}, dim={}, euler={}, pic_rank={})",
            self.spec.to_string_spec(),
            self.model.polytope.dim,
            self.model.euler,
            self.model.pic_rank
        )
    }

    /// Picard class of a T-divisor given by ray coefficients.
    fn divisor_class(&self, d: Vec<i64>) -> PyResult<Vec<i64>> {
        toric::divisor_class(&self.model, &d).map_err(value_err)
    }

    fn canonical_divisor(&self) -> Vec<i64> {
        toric::canonical_divisor(&self.model)
    }

    /// Cohomology dimensions (h^0, ..., h^n) of the line bundle O(D).
    fn cohomology(&self, d: Vec<i64>) -> PyResult<Vec<u64>> {
        toric::line_bundle_cohomology(&self.model, &d).map_err(value_err)
    }

    /// Effective divisors splitting Hom(O(source), O(target)).
    fn hom_basis(&self, source: Vec<i64>, target: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
        Ok(toric::hom_basis(&self.model, &source, &target)
            .map_err(value_err)?
            .entries
            .into_iter()
            .map(|e| e.divisor)
            .collect())
    }

    /// Labelled Picard classes of the reference exceptional collection.
    fn reference_collection(&self) -> Vec<(String, Vec<i64>)> {
        self.reference.entries.clone()
    }

    fn is_strongly_exceptional(&self, collection: Vec<Vec<i64>>) -> PyResult<bool> {
        Ok(toric::is_strongly_exceptional(&self.model, &collection)
            .map_err(value_err)?
            .is_strong)
    }

    /// Irreducible arrows of the reference collection's quiver as
    /// (from_label, to_label, divisor) triples.
    fn quiver(&self) -> PyResult<Vec<(String, String, Vec<i64>)>> {
        let labels = self.reference.labels();
        let q = toric::build_quiver(&self.model, &self.reference.classes()).map_err(value_err)?;
        Ok(q.edges
            .into_iter()
            .map(|(i, j, d)| (labels[i].clone(), labels[j].clone(), d))
            .collect())
    }

    /// All critical points of the potential at parameter t.
    #[pyo3(signature = (t=None, seed=None))]
    fn solve(&self, t: Option<f64>, seed: Option<u64>) -> PyResult<Vec<Solution>> {
        let t = t.unwrap_or(self.family.default_t);
        let set = self.solved(t, seed)?;
        Ok(set
            .points
            .iter()
            .map(|p| Solution {
                label: p.label.clone(),
                coords: p.coords.clone(),
                relative_residual: p.relative_residual,
                argument_profile: solver::argument_profile(&self.model, &p.coords),
            })
            .collect())
    }

    /// Exceptional map: solution label -> Picard class, with stabilization
    /// and bijectivity flags.
    #[pyo3(signature = (t=None))]
    fn exceptional_map<'py>(&self, py: Python<'py>, t: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let t = t.unwrap_or(self.family.default_t);
        let res = emap::exceptional_map(&self.model, &self.family, t, &EmapConfig::default())
            .map_err(runtime_err)?;
        let classes = PyDict::new(py);
        for a in &res.assignments {
            classes.set_item(&a.label, &a.class)?;
        }
        let out = PyDict::new(py);
        out.set_item("t", res.t)?;
        out.set_item("classes", classes)?;
        out.set_item("bijective", res.bijective)?;
        out.set_item("stabilized", res.stabilized)?;
        Ok(out)
    }

    /// Verify the exceptional map against the reference collection.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = emap::verify_exceptional_map(&self.model, &self.family, &self.reference)
            .map_err(runtime_err)?;
        let out = PyDict::new(py);
        out.set_item("bijective", report.emap.bijective)?;
        out.set_item("image_matches_reference", report.image_matches_reference)?;
        out.set_item("strong_on_image", report.strong_on_image)?;
        out.set_item("mismatched_labels", &report.mismatched_labels)?;
        out.set_item("pass", report.pass)?;
        Ok(out)
    }

    /// Frobenius pushforward image: class -> multiplicity. Stabilized
    /// search when l is omitted.
    #[pyo3(signature = (l=None))]
    fn frobenius<'py>(&self, py: Python<'py>, l: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
        let image = match l {
            Some(l) => {
                if l < 2 {
                    return Err(value_err("degree l must be at least 2"));
                }
                emap::frobenius_image(&self.model, l)
            }
            None => emap::frobenius_stabilized(&self.model, 4096).map_err(runtime_err)?,
        };
        let classes = PyList::empty(py);
        for (class, count) in &image.multiplicities {
            classes.append((class.clone(), *count))?;
        }
        let out = PyDict::new(py);
        out.set_item("l", image.l)?;
        out.set_item("stabilized", image.stabilized)?;
        out.set_item("total", image.total())?;
        out.set_item("classes", classes)?;
        Ok(out)
    }

    /// Monodromy permutation of a T-divisor, as a label -> label dict.
    #[pyo3(signature = (divisor, t=None, seed=None))]
    fn monodromy(
        &self,
        divisor: Vec<i64>,
        t: Option<f64>,
        seed: Option<u64>,
    ) -> PyResult<std::collections::BTreeMap<String, String>> {
        if divisor.len() != self.model.ray_count {
            return Err(value_err(format!(
                "divisor needs {} coefficients, got {}",
                self.model.ray_count,
                divisor.len()
            )));
        }
        let t = t.unwrap_or(self.family.default_t);
        let start = self.solved(t, seed)?;
        let mut cache = MonodromyCache::default();
        let perm = monodromy::monodromy_of_divisor(
            &self.model,
            &self.family,
            t,
            &divisor,
            &start,
            &mut cache,
            &TrackConfig::default(),
            true,
        )
        .map_err(runtime_err)?;
        Ok(perm.map)
    }

    /// Check the M-aligned property over all solution pairs.
    #[pyo3(signature = (t=None))]
    fn aligned<'py>(&self, py: Python<'py>, t: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let t = t.unwrap_or(self.family.default_t);
        let report =
            monodromy::check_m_aligned(&self.model, &self.family, t).map_err(runtime_err)?;
        let generators = PyDict::new(py);
        for (ray, perm) in &report.generators {
            generators.set_item(&self.model.ray_labels[*ray], perm.map.clone())?;
        }
        let out = PyDict::new(py);
        out.set_item("t", report.t)?;
        out.set_item("pass", report.pass)?;
        out.set_item("instances", report.instances)?;
        out.set_item("violations", &report.violations)?;
        out.set_item("commuting_generators", report.commuting_generators)?;
        out.set_item("generators", generators)?;
        Ok(out)
    }

    /// Track solution trajectories over a parameter sweep. Returns a list
    /// of dicts with label, ts and coordinate samples.
    #[pyo3(signature = (t_start, t_end, steps=120, seed=None))]
    fn sweep<'py>(
        &self,
        py: Python<'py>,
        t_start: f64,
        t_end: f64,
        steps: usize,
        seed: Option<u64>,
    ) -> PyResult<Bound<'py, PyList>> {
        if steps == 0 {
            return Err(value_err("steps must be positive"));
        }
        let sweep = solver::sweep_parameter(
            &self.model,
            &self.family,
            t_start,
            t_end,
            steps,
            &self.solver_config(seed),
        )
        .map_err(runtime_err)?;
        let out = PyList::empty(py);
        for tr in &sweep.trajectories {
            let d = PyDict::new(py);
            d.set_item("label", &tr.label)?;
            d.set_item("ts", &tr.ts)?;
            d.set_item("samples", tr.samples.clone())?;
            d.set_item("start_profile", &tr.start_profile)?;
            d.set_item("end_profile", &tr.end_profile)?;
            out.append(d)?;
        }
        Ok(out)
    }
}

#[pymodule]
fn lgcrit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Solution>()?;
    Ok(())
}
