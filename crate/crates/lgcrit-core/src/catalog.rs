//! Constructors for the supported manifold families: vertex sets, named
//! Picard bases, reference exceptional collections, Landau-Ginzburg
//! coefficient families and asymptotic solution seeds.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Rat};
use crate::toric::{self, PicClass, ToricModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelSpec {
    /// `P^s`.
    ProjectiveSpace { s: usize },
    /// Projectivized split bundle over `P^s` with twists `a_1 <= ... <= a_r`.
    Bundle { s: usize, a: Vec<i64> },
    /// Blow-up of `P^{n-r} x P^r` along a multilinear codimension-two
    /// subspace.
    BlowupProduct { n: usize, r: usize },
    /// Blow-up of the projectivized bundle `P(O + O(b))` over `P^{n-1}`
    /// along a codimension-two linear subspace.
    BlowupBundle { n: usize, b: i64 },
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid model spec: {0}")]
    SpecInvariantViolated(String),
    #[error("cannot parse model spec '{0}'")]
    ParseError(String),
    #[error("|t| = {got} below the minimum {min} for asymptotic seeds")]
    ParameterTooSmall { got: f64, min: f64 },
    #[error(transparent)]
    Toric(#[from] toric::ToricError),
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), CatalogError> {
        match self {
            ModelSpec::ProjectiveSpace { s } => {
                if *s == 0 {
                    return Err(CatalogError::SpecInvariantViolated("need s >= 1".into()));
                }
            }
            ModelSpec::Bundle { s, a } => {
                if *s == 0 || a.is_empty() {
                    return Err(CatalogError::SpecInvariantViolated(
                        "need s >= 1 and r >= 1".into(),
                    ));
                }
                if a.windows(2).any(|w| w[0] > w[1]) || a[0] < 0 {
                    return Err(CatalogError::SpecInvariantViolated(
                        "need 0 <= a_1 <= ... <= a_r".into(),
                    ));
                }
                let sum: i64 = a.iter().sum();
                if sum > *s as i64 {
                    return Err(CatalogError::SpecInvariantViolated(format!(
                        "need sum(a) <= s for a Fano polytope, got {sum} > {s}"
                    )));
                }
            }
            ModelSpec::BlowupProduct { n, r } => {
                if *r < 1 || *r + 1 > *n {
                    return Err(CatalogError::SpecInvariantViolated(
                        "need 1 <= r <= n-1".into(),
                    ));
                }
            }
            ModelSpec::BlowupBundle { n, b } => {
                if *n < 2 || *b < 0 || *b >= *n as i64 - 1 {
                    return Err(CatalogError::SpecInvariantViolated(
                        "need n >= 2 and 0 <= b < n-1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Parse the CLI syntax: `ps:s=2`, `pb:s=3,a=1,2`, `bp:n=4,r=2`,
    /// `bb:n=5,b=0`.
    pub fn parse(s: &str) -> Result<ModelSpec, CatalogError> {
        let err = || CatalogError::ParseError(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(err)?;
        let mut fields: Vec<(&str, Vec<i64>)> = Vec::new();
        // split on commas, but `a=1,2` style lists continue the last field
        for part in rest.split(',') {
            if let Some((k, v)) = part.split_once('=') {
                let v: i64 = v.trim().parse().map_err(|_| err())?;
                fields.push((k.trim(), vec![v]));
            } else {
                let v: i64 = part.trim().parse().map_err(|_| err())?;
                fields.last_mut().ok_or_else(err)?.1.push(v);
            }
        }
        let get = |name: &str| -> Result<Vec<i64>, CatalogError> {
            fields
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(err)
        };
        let scalar = |name: &str| -> Result<i64, CatalogError> {
            let v = get(name)?;
            if v.len() != 1 {
                return Err(err());
            }
            Ok(v[0])
        };
        let spec = match kind.trim() {
            "ps" => ModelSpec::ProjectiveSpace {
                s: scalar("s")? as usize,
            },
            "pb" => ModelSpec::Bundle {
                s: scalar("s")? as usize,
                a: get("a")?,
            },
            "bp" => ModelSpec::BlowupProduct {
                n: scalar("n")? as usize,
                r: scalar("r")? as usize,
            },
            "bb" => ModelSpec::BlowupBundle {
                n: scalar("n")? as usize,
                b: scalar("b")?,
            },
            _ => return Err(err()),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_string_spec(&self) -> String {
        match self {
            ModelSpec::ProjectiveSpace { s } => format!("ps:s={s}"),
            ModelSpec::Bundle { s, a } => format!(
                "pb:s={s},a={}",
                a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
            ModelSpec::BlowupProduct { n, r } => format!("bp:n={n},r={r}"),
            ModelSpec::BlowupBundle { n, b } => format!("bb:n={n},b={b}"),
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Build the toric model of a catalog spec: the vertex set, ray labels and
/// the named Picard basis.
pub fn make_model(spec: &ModelSpec) -> Result<ToricModel, CatalogError> {
    spec.validate()?;
    match spec {
        ModelSpec::ProjectiveSpace { s } => {
            let n = *s;
            let mut rays = vec![vec![-1i64; n]];
            let mut labels = vec!["v0".to_string()];
            for i in 0..n {
                rays.push(unit(n, i));
                labels.push(format!("v{}", i + 1));
            }
            Ok(toric::build_model(
                rays,
                Some(labels),
                Some((vec![0], vec!["H".into()])),
            )?)
        }
        ModelSpec::Bundle { s, a } => {
            let r = a.len();
            let n = s + r;
            // v0 = -sum v_i + sum a_j e_j, then v_1..v_s, e0 = -sum e_j,
            // then e_1..e_r
            let mut v0 = vec![-1i64; *s];
            v0.extend(a.iter().copied());
            let mut rays = vec![v0];
            let mut labels = vec!["v0".to_string()];
            for i in 0..*s {
                rays.push(unit(n, i));
                labels.push(format!("v{}", i + 1));
            }
            let mut e0 = vec![0i64; *s];
            e0.extend(std::iter::repeat(-1).take(r));
            rays.push(e0);
            labels.push("e0".into());
            for j in 0..r {
                rays.push(unit(n, s + j));
                labels.push(format!("e{}", j + 1));
            }
            Ok(toric::build_model(
                rays,
                Some(labels),
                Some((vec![0, s + 1], vec!["piH".into(), "xi".into()])),
            )?)
        }
        ModelSpec::BlowupProduct { n, r } => {
            let nr = n - r;
            let mut rays = Vec::new();
            let mut labels = Vec::new();
            for i in 0..*n {
                rays.push(unit(*n, i));
                labels.push(format!("e{}", i + 1));
            }
            let mut v1 = vec![0i64; *n];
            v1[..nr].fill(-1);
            let mut v2 = vec![0i64; *n];
            v2[nr..].fill(-1);
            let v3 = vec![-1i64; *n];
            rays.push(v1);
            rays.push(v2);
            rays.push(v3);
            labels.extend(["v1".to_string(), "v2".to_string(), "v3".to_string()]);
            Ok(toric::build_model(
                rays,
                Some(labels),
                Some((
                    vec![0, n - 1, n + 2],
                    vec!["U".into(), "V".into(), "E".into()],
                )),
            )?)
        }
        ModelSpec::BlowupBundle { n, b } => {
            let mut rays = Vec::new();
            let mut labels = Vec::new();
            for i in 0..*n {
                rays.push(unit(*n, i));
                labels.push(format!("e{}", i + 1));
            }
            let mut u1 = vec![0i64; *n];
            u1[n - 1] = -1;
            let mut u2 = vec![-1i64; *n];
            u2[n - 1] = -b;
            let mut u3 = vec![-1i64; *n];
            u3[n - 1] = -(b + 1);
            rays.push(u1);
            rays.push(u2);
            rays.push(u3);
            labels.extend(["u1".to_string(), "u2".to_string(), "u3".to_string()]);
            Ok(toric::build_model(
                rays,
                Some(labels),
                Some((
                    vec![0, n + 2, *n],
                    vec!["V".into(), "Y".into(), "T".into()],
                )),
            )?)
        }
    }
}

/// A labelled reference collection of line-bundle classes, in an order under
/// which the collection is strongly exceptional.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceCollection {
    pub entries: Vec<(String, PicClass)>,
}

impl ReferenceCollection {
    pub fn classes(&self) -> Vec<PicClass> {
        self.entries.iter().map(|(_, c)| c.clone()).collect()
    }
    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|(l, _)| l.clone()).collect()
    }
}

pub fn e_label(k: i64, l: i64) -> String {
    format!("E({k},{l})")
}

pub fn f_label2(m: i64, q: i64) -> String {
    format!("F({m},{q})")
}

pub fn reference_collection(spec: &ModelSpec) -> Result<ReferenceCollection, CatalogError> {
    spec.validate()?;
    let mut entries = Vec::new();
    match spec {
        ModelSpec::ProjectiveSpace { s } => {
            for k in 0..=*s as i64 {
                entries.push((format!("E({k})"), vec![k]));
            }
        }
        ModelSpec::Bundle { s, a } => {
            let r = a.len() as i64;
            for l in 0..=r {
                for k in 0..=*s as i64 {
                    entries.push((e_label(k, l), vec![k, l]));
                }
            }
        }
        ModelSpec::BlowupProduct { n, r } => {
            // E-family lexicographic in (l, k), with each F(k, l) inserted
            // immediately before its companion E(k, l): F(k,l) -> E(k,l) is
            // the only Hom-direction compatible with exceptionality
            // (Hom(F(k,l), E(k,l)) = H^0(E) = C).
            let nr = (n - r) as i64;
            let r = *r as i64;
            for l in 0..=r {
                for k in 0..=nr {
                    if l >= 1 && k >= 1 {
                        entries.push((f_label2(k, l), vec![k, l, -1]));
                    }
                    entries.push((e_label(k, l), vec![k, l, 0]));
                }
            }
        }
        ModelSpec::BlowupBundle { n, b } => {
            let n = *n as i64;
            // E_kl = k V + l (Y + T + b V): coordinates (k + l b, l, l) in
            // (V, Y, T); F_m = (m + b) V + T: coordinates (m + b, 0, 1).
            // Each F(m) sits immediately before its companion E(m, 1) for
            // the same reason as in the product-blowup case.
            for l in 0..=1i64 {
                for k in 0..n {
                    if l == 1 && k >= 1 {
                        entries.push((format!("F({k})"), vec![k + b, 0, 1]));
                    }
                    entries.push((e_label(k, l), vec![k + l * b, l, l]));
                }
            }
        }
    }
    Ok(ReferenceCollection { entries })
}

/// Landau-Ginzburg coefficient family: each ray monomial carries a complex
/// base coefficient and an exponential rate in the real parameter `t`:
/// `c_F(t) = base_F * exp(rate_F * t)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LGFamily {
    pub spec: ModelSpec,
    /// Coefficient base per ray (same order as the model's rays).
    pub base: Vec<Complex64>,
    /// Exponential rate per ray.
    pub rate: Vec<f64>,
    /// Limit direction used by the exceptional map: -1 or +1.
    pub t_sign: i8,
    /// Default working parameter value (`t_sign * 24`; 0 for constant
    /// families).
    pub default_t: f64,
}

impl LGFamily {
    pub fn coefficients(&self, t: f64) -> Vec<Complex64> {
        self.base
            .iter()
            .zip(&self.rate)
            .map(|(&b, &r)| b * (r * t).exp())
            .collect()
    }
}

pub fn lg_family(spec: &ModelSpec) -> Result<LGFamily, CatalogError> {
    spec.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let (base, rate, t_sign): (Vec<Complex64>, Vec<f64>, i8) = match spec {
        ModelSpec::ProjectiveSpace { s } => (vec![one; s + 1], vec![0.0; s + 1], -1),
        ModelSpec::Bundle { s, a } => {
            let count = s + a.len() + 2;
            let mut rate = vec![0.0; count];
            rate[0] = 1.0; // e^t on the v0 monomial
            (vec![one; count], rate, -1)
        }
        ModelSpec::BlowupProduct { n, .. } => {
            let count = n + 3;
            let mut rate = vec![0.0; count];
            rate[..*n].fill(-1.0); // e^{-t} on all e monomials
            (vec![one; count], rate, 1)
        }
        ModelSpec::BlowupBundle { n, .. } => {
            let count = n + 3;
            let mut base = vec![one; count];
            let mut rate = vec![0.0; count];
            rate[..*n].fill(-1.0); // e^{-t} on e_1..e_n monomials
            base[n + 2] = Complex64::new(0.0, -1.0); // -i on the u3 monomial
            (base, rate, 1)
        }
    };
    let default_t = match spec {
        ModelSpec::ProjectiveSpace { .. } => 0.0,
        _ => t_sign as f64 * 24.0,
    };
    Ok(LGFamily {
        spec: spec.clone(),
        base,
        rate,
        t_sign,
        default_t,
    })
}

/// A labelled approximate critical point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Seed {
    pub label: String,
    pub point: Vec<Complex64>,
}

pub const T_MIN: f64 = 10.0;

fn polar(log_modulus: f64, arg_fraction: Rat) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * frac_to_f64(arg_fraction);
    Complex64::from_polar(log_modulus.exp(), theta)
}

fn frac_to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn fracr(x: Rat) -> Rat {
    x - x.floor()
}

/// Asymptotic seeds at parameter `t` (|t| >= `T_MIN`, sign matching the
/// family's limit direction), labelled compatibly with the reference
/// collection.
pub fn asymptotic_seeds(spec: &ModelSpec, t: f64) -> Result<Vec<Seed>, CatalogError> {
    spec.validate()?;
    if !matches!(spec, ModelSpec::ProjectiveSpace { .. }) {
        let fam = lg_family(spec)?;
        if t.abs() < T_MIN || (t != 0.0 && t.signum() as i8 != fam.t_sign) {
            return Err(CatalogError::ParameterTooSmall {
                got: t.abs(),
                min: T_MIN,
            });
        }
    }
    let mut seeds = Vec::new();
    match spec {
        ModelSpec::ProjectiveSpace { s } => {
            let s = *s;
            for k in 0..=s as i64 {
                let z = polar(0.0, Ratio::new(k as i128, (s + 1) as i128));
                seeds.push(Seed {
                    label: format!("E({k})"),
                    point: vec![z; s],
                });
            }
        }
        ModelSpec::Bundle { s, a } => {
            let s1 = (*s + 1) as i128;
            let r1 = (a.len() + 1) as i128;
            let suma: i128 = a.iter().map(|&x| x as i128).sum();
            for l in 0..r1 {
                for k in 0..s1 {
                    // z^(s+1) = e^t rho_{r+1}^{l sum(a)}; w^(r+1) = 1
                    let argz = fracr(Ratio::new(l * suma, s1 * r1) + Ratio::new(k, s1));
                    let argw = Ratio::new(l, r1);
                    let z = polar(t / s1 as f64, argz);
                    let w = polar(0.0, argw);
                    let mut point = vec![z; *s];
                    point.extend(vec![w; a.len()]);
                    seeds.push(Seed {
                        label: e_label(k as i64, l as i64),
                        point,
                    });
                }
            }
        }
        ModelSpec::BlowupProduct { n, r } => {
            let nr = (*n - *r) as i128;
            let r = *r as i128;
            for l in 0..=r {
                for k in 0..=nr {
                    let z = polar(t / (nr + 1) as f64, Ratio::new(k, nr + 1));
                    let w = polar(t / (r + 1) as f64, Ratio::new(l, r + 1));
                    let mut point = vec![z; nr as usize];
                    point.extend(vec![w; r as usize]);
                    seeds.push(Seed {
                        label: e_label(k as i64, l as i64),
                        point,
                    });
                }
            }
            for q in 1..=r {
                for m in 1..=nr {
                    let argz = Ratio::new(1, 2 * nr) + Ratio::new(m - 1, nr);
                    let argw = Ratio::new(1, 2 * r) + Ratio::new(q - 1, r);
                    let mut point = vec![polar(0.0, fracr(argz)); nr as usize];
                    point.extend(vec![polar(0.0, fracr(argw)); r as usize]);
                    seeds.push(Seed {
                        label: f_label2(m as i64, q as i64),
                        point,
                    });
                }
            }
        }
        ModelSpec::BlowupBundle { n, b } => {
            let n = *n;
            let ni = n as i128;
            let b = *b as i128;
            // First family: w ~ +/- e^{t/2}, z^n w^b = e^t.
            for l in 0..=1i128 {
                for k in 0..ni {
                    let argw = Ratio::new(l, 2);
                    let argz = fracr(Ratio::new(l * b, 2 * ni) + Ratio::new(k, ni));
                    let zmod = (2 - b) as f64 * t / (2.0 * ni as f64);
                    let mut point = vec![polar(zmod, argz); n - 1];
                    point.push(polar(t / 2.0, argw));
                    seeds.push(Seed {
                        label: e_label(k as i64, l as i64),
                        point,
                    });
                }
            }
            // Second family: w = i, z^{n-1} = i^{1-b}; labels are assigned by
            // the exact limit class of the argument vector.
            let model = make_model(spec)?;
            let refs = reference_collection(spec)?;
            for m in 0..ni - 1 {
                let argz = fracr(Ratio::new(1 - b, 4 * (ni - 1)) + Ratio::new(m, ni - 1));
                let argw = Ratio::new(1, 4);
                let mut point = vec![polar(0.0, argz); n - 1];
                point.push(polar(0.0, argw));
                // Exact limit argument profile per ray.
                let args: Vec<Rat> = (0..n - 1)
                    .map(|_| argz)
                    .chain(std::iter::once(argw))
                    .collect();
                let profile: Vec<Rat> = model
                    .principal_matrix
                    .iter()
                    .map(|ray| {
                        fracr(
                            ray.iter()
                                .zip(&args)
                                .map(|(&e, &a)| rat(e) * a)
                                .sum::<Rat>(),
                        )
                    })
                    .collect();
                let coords = crate::toric::rational_class_coords(&model, &profile);
                let class = crate::toric::floor_class_exact(&coords);
                let label = refs
                    .entries
                    .iter()
                    .find(|(name, c)| name.starts_with('F') && *c == class)
                    .map(|(name, _)| name.clone())
                    .unwrap_or_else(|| format!("F?({m})"));
                seeds.push(Seed { label, point });
            }
        }
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["ps:s=2", "pb:s=3,a=1,2", "bp:n=4,r=2", "bb:n=5,b=0"] {
            let spec = ModelSpec::parse(s).unwrap();
            assert_eq!(spec.to_string_spec(), s);
        }
        assert!(ModelSpec::parse("pb:s=1,a=2").is_err()); // sum(a) > s
        assert!(ModelSpec::parse("xx:s=1").is_err());
        assert!(ModelSpec::parse("bb:n=5,b=4").is_err()); // b >= n-1
    }

    #[test]
    fn model_shapes() {
        let m = make_model(&ModelSpec::ProjectiveSpace { s: 2 }).unwrap();
        assert_eq!((m.euler, m.pic_rank), (3, 1));
        let m = make_model(&ModelSpec::Bundle { s: 1, a: vec![1] }).unwrap();
        assert_eq!((m.euler, m.pic_rank), (4, 2));
        let m = make_model(&ModelSpec::Bundle { s: 3, a: vec![1, 2] }).unwrap();
        assert_eq!((m.euler, m.pic_rank), (12, 2));
        assert_eq!(m.basis_labels, vec!["piH", "xi"]);
        let m = make_model(&ModelSpec::BlowupProduct { n: 4, r: 2 }).unwrap();
        assert_eq!((m.euler, m.pic_rank), (13, 3));
        let m = make_model(&ModelSpec::BlowupBundle { n: 5, b: 0 }).unwrap();
        assert_eq!((m.euler, m.pic_rank), (14, 3));
        assert_eq!(m.basis_labels, vec!["V", "Y", "T"]);
    }

    #[test]
    fn facet_count_formulas() {
        for (s, a) in [(1usize, vec![1i64]), (2, vec![1]), (3, vec![1, 2]), (2, vec![0, 1])] {
            let m = make_model(&ModelSpec::Bundle { s, a: a.clone() }).unwrap();
            assert_eq!(m.euler, (s + 1) * (a.len() + 1));
        }
        for (n, r) in [(3usize, 1usize), (4, 2), (5, 2)] {
            let m = make_model(&ModelSpec::BlowupProduct { n, r }).unwrap();
            assert_eq!(m.euler, (n - r + 1) * (r + 1) + (n - r) * r);
        }
        for (n, b) in [(3usize, 0i64), (4, 1), (5, 0)] {
            let m = make_model(&ModelSpec::BlowupBundle { n, b }).unwrap();
            assert_eq!(m.euler, 3 * n - 1);
        }
    }

    #[test]
    fn bundle_divisor_classes() {
        // [V(e_j)] = xi - a_j piH
        let m = make_model(&ModelSpec::Bundle { s: 3, a: vec![1, 2] }).unwrap();
        let mut d = vec![0i64; m.ray_count];
        d[5] = 1; // e1
        assert_eq!(toric::divisor_class(&m, &d).unwrap(), vec![-1, 1]);
        let mut d = vec![0i64; m.ray_count];
        d[6] = 1; // e2
        assert_eq!(toric::divisor_class(&m, &d).unwrap(), vec![-2, 1]);
    }

    #[test]
    fn collections_sized_and_strong() {
        for spec in [
            ModelSpec::ProjectiveSpace { s: 2 },
            ModelSpec::Bundle { s: 1, a: vec![1] },
            ModelSpec::Bundle { s: 3, a: vec![1, 2] },
            ModelSpec::BlowupProduct { n: 4, r: 2 },
            ModelSpec::BlowupBundle { n: 5, b: 0 },
        ] {
            let m = make_model(&spec).unwrap();
            let coll = reference_collection(&spec).unwrap();
            assert_eq!(coll.entries.len(), m.euler, "{spec:?}");
            let classes = coll.classes();
            let mut sorted = classes.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), classes.len(), "duplicate classes {spec:?}");
            let rep = toric::is_strongly_exceptional(&m, &classes).unwrap();
            assert!(
                rep.is_strong,
                "{spec:?} not strongly exceptional: {:?}",
                rep.failures
            );
        }
    }

    #[test]
    fn hirzebruch_collection_values() {
        let coll = reference_collection(&ModelSpec::Bundle { s: 1, a: vec![1] }).unwrap();
        let expect = vec![
            ("E(0,0)".to_string(), vec![0, 0]),
            ("E(1,0)".to_string(), vec![1, 0]),
            ("E(0,1)".to_string(), vec![0, 1]),
            ("E(1,1)".to_string(), vec![1, 1]),
        ];
        assert_eq!(coll.entries, expect);
    }

    #[test]
    fn family_normalization() {
        for spec in [
            ModelSpec::Bundle { s: 1, a: vec![1] },
            ModelSpec::BlowupProduct { n: 4, r: 2 },
            ModelSpec::BlowupBundle { n: 5, b: 0 },
        ] {
            let fam = lg_family(&spec).unwrap();
            for c in fam.coefficients(0.0) {
                assert!((c.norm() - 1.0).abs() < 1e-15);
            }
        }
        let fam = lg_family(&ModelSpec::BlowupBundle { n: 5, b: 0 }).unwrap();
        let c = fam.coefficients(7.0);
        assert_eq!(c[7], Complex64::new(0.0, -1.0)); // u3 monomial
        assert!((c[0].re - (-7.0f64).exp()).abs() < 1e-18);
        let fam = lg_family(&ModelSpec::BlowupProduct { n: 4, r: 2 }).unwrap();
        let c = fam.coefficients(30.0);
        assert!((c[0].re - (-30.0f64).exp()).abs() < 1e-25);
        assert_eq!(c[4], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hirzebruch_seed_arguments() {
        let seeds = asymptotic_seeds(&ModelSpec::Bundle { s: 1, a: vec![1] }, -30.0).unwrap();
        assert_eq!(seeds.len(), 4);
        let arg_frac = |z: Complex64| {
            let f = z.arg() / (2.0 * std::f64::consts::PI);
            (f + 1.0).rem_euclid(1.0)
        };
        let mut pairs: Vec<(f64, f64)> = seeds
            .iter()
            .map(|s| (arg_frac(s.point[0]), arg_frac(s.point[1])))
            .collect();
        pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [(0.0, 0.0), (0.25, 0.5), (0.5, 0.0), (0.75, 0.5)];
        for ((a, b), (ea, eb)) in pairs.iter().zip(expect) {
            assert!((a - ea).abs() < 1e-12 && (b - eb).abs() < 1e-12);
        }
    }

    #[test]
    fn blowup_product_seed_shapes() {
        let seeds = asymptotic_seeds(&ModelSpec::BlowupProduct { n: 4, r: 2 }, 30.0).unwrap();
        assert_eq!(seeds.len(), 13);
        let big: Vec<_> = seeds.iter().filter(|s| s.point[0].norm() > 2.0).collect();
        assert_eq!(big.len(), 9);
        for s in &big {
            assert!((s.point[0].norm().ln() - 10.0).abs() < 1e-9);
            assert!((s.point[2].norm().ln() - 10.0).abs() < 1e-9);
        }
        let unit: Vec<_> = seeds.iter().filter(|s| s.point[0].norm() <= 2.0).collect();
        assert_eq!(unit.len(), 4);
        for s in &unit {
            assert!((s.point[0].norm() - 1.0).abs() < 1e-12);
            assert!(s.label.starts_with('F'));
        }
    }

    #[test]
    fn blowup_bundle_seed_labels_cover_f_family() {
        let seeds = asymptotic_seeds(&ModelSpec::BlowupBundle { n: 5, b: 0 }, 40.0).unwrap();
        assert_eq!(seeds.len(), 14);
        let mut flabels: Vec<_> = seeds
            .iter()
            .filter(|s| s.label.starts_with('F'))
            .map(|s| s.label.clone())
            .collect();
        flabels.sort();
        assert_eq!(flabels, vec!["F(1)", "F(2)", "F(3)", "F(4)"]);
    }

    #[test]
    fn seeds_reject_small_t() {
        assert!(asymptotic_seeds(&ModelSpec::Bundle { s: 1, a: vec![1] }, -5.0).is_err());
        assert!(asymptotic_seeds(&ModelSpec::BlowupProduct { n: 4, r: 2 }, -30.0).is_err());
    }
}
