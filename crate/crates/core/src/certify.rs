//! Rank-recursive certification that every open interval of a graded poset
//! has a sphere as its order complex.
//!
//! Intervals are processed bottom-up by rank difference `r`:
//!
//! * `r ≤ 2`: the order complex is `[∅]` or a point set; thinness decides.
//! * `r = 3, 4`: the order complex has dimension ≤ 2 and spheres there are
//!   recognised exactly.
//! * `r ≥ 5`: every vertex link `lk(z)` of `Δ(x,y)` must equal the join
//!   `Δ(x,z) * Δ(z,y)` of two already certified spheres, so `Δ(x,y)` is a
//!   manifold. It must further be a strongly connected orientable
//!   pseudomanifold with the homology of a sphere. A manifold with those
//!   properties and trivial fundamental group is a sphere (generalised
//!   Poincaré theorem); that last step is taken only when the bounded
//!   Tietze simplification proves `π₁` trivial. Otherwise a shelling is
//!   searched for (a shellable pseudomanifold is a sphere), and if neither
//!   succeeds the interval stays `homology_sphere_only`. Order complexes
//!   above a size threshold skip the homology steps and are decided by a
//!   shelling alone.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{order_complex, SimplicialComplex};
use crate::homology::{
    is_homology_sphere, orientability_class, pi1_triviality, Orientability, Pi1Verdict, SphereVerdict,
    DEFAULT_PI1_BUDGET,
};
use crate::invariants::reduced_euler_characteristic;
use crate::poset::Poset;
use crate::shelling::{find_shelling, ShellingSearch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("exact sphere recognition is only available up to dimension 2 (got {0})")]
    DimensionTooHigh(isize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowDimVerdict {
    Sphere,
    NotSphere { reason: String },
}

impl LowDimVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LowDimVerdict::Sphere)
    }

    fn no(reason: impl Into<String>) -> Self {
        LowDimVerdict::NotSphere { reason: reason.into() }
    }
}

/// Exact sphere recognition for complexes of dimension at most 2.
pub fn sphere_recognize_lowdim(complex: &SimplicialComplex) -> Result<LowDimVerdict, CertifyError> {
    let dim = complex.dim();
    if dim > 2 {
        return Err(CertifyError::DimensionTooHigh(dim));
    }
    if !complex.is_pure() {
        return Ok(LowDimVerdict::no("not pure"));
    }
    Ok(match dim {
        -1 => LowDimVerdict::Sphere,
        0 => match complex.vertices().len() {
            2 => LowDimVerdict::Sphere,
            n => LowDimVerdict::no(format!("{n} points, expected 2")),
        },
        1 => {
            let adj = complex.adjacency();
            if let Some(v) = adj.iter().position(|nb| nb.len() != 2) {
                LowDimVerdict::no(format!(
                    "vertex {} has degree {}",
                    complex.vertex_label(v),
                    adj[v].len()
                ))
            } else if !complex.is_connected() {
                LowDimVerdict::no(format!("{} components", complex.component_count()))
            } else {
                LowDimVerdict::Sphere
            }
        }
        _ => {
            let report = complex.pseudomanifold_report();
            if let Some((ridge, count)) = report.ridge_witness {
                return Ok(LowDimVerdict::no(format!(
                    "edge {{{}}} lies in {count} triangles",
                    ridge.join(",")
                )));
            }
            if !complex.is_connected() {
                return Ok(LowDimVerdict::no(format!("{} components", complex.component_count())));
            }
            for v in 0..complex.vertices().len() {
                let link = complex.link(&crate::complex::Face::new(vec![v])).expect("vertex");
                if !sphere_recognize_lowdim(&link)?.holds() {
                    return Ok(LowDimVerdict::no(format!(
                        "link of {} is not a circle",
                        complex.vertex_label(v)
                    )));
                }
            }
            let chi = reduced_euler_characteristic(complex) + 1;
            if chi != 2 {
                return Ok(LowDimVerdict::no(format!("Euler characteristic {chi}, expected 2")));
            }
            LowDimVerdict::Sphere
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedSphere,
    HomologySphereOnly,
    Inconclusive,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Thinness (r ≤ 2) or exact recognition in dimension ≤ 2.
    LowDimExact,
    /// A shelling of a pseudomanifold.
    DanarajKlee,
    /// Vertex links are joins of certified spheres, plus homology sphere,
    /// orientability and trivial `π₁`.
    ManifoldInduction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    MiddleCount { count: usize },
    NotLowDimSphere { reason: String },
    LinkNotJoin { vertex: String },
    Dependency { lower: String, upper: String, status: Status },
    NotThin { lower: String, upper: String, middle_count: usize },
    NotHomologySphere { dim: isize, group: String },
    NotPseudomanifold { ridge: Option<(Vec<String>, usize)>, strongly_connected: bool },
    NonOrientable,
    Pi1Unresolved,
    NoShellingFound { search: String },
    TooLarge { facets: usize, limit: usize },
}

/// Verdict for one open interval `(lower, upper)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lower: String,
    pub upper: String,
    pub rank_difference: usize,
    pub status: Status,
    pub route: Route,
    pub witnesses: Vec<Witness>,
    /// Smaller intervals whose certificates the link-join step used.
    pub dependencies: Vec<(String, String)>,
    pub pi1: Option<Pi1Verdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CwVerdict {
    CwPoset,
    NotCwPoset,
    /// Some interval `(0̂, y)` is only known to be a homology sphere, or ran out of budget.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: CwVerdict,
    pub cw_poset: bool,
    /// Set when the poset lacks a unique minimum or has nothing else.
    pub precondition: Option<String>,
    /// First `(0̂, y)` interval that failed, if any.
    pub failing_interval: Option<(String, String)>,
    pub intervals: Vec<IntervalRecord>,
}

impl Certificate {
    pub fn record(&self, lower: &str, upper: &str) -> Option<&IntervalRecord> {
        self.intervals
            .iter()
            .find(|r| r.lower == lower && r.upper == upper)
    }

    pub fn count(&self, status: Status) -> usize {
        self.intervals.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Per-interval limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyBudget {
    pub pi1_moves: u64,
    pub shelling_nodes: u64,
    /// Order complexes with more facets skip the homology and `π₁` steps and
    /// are decided by a shelling alone, or left `inconclusive`.
    pub homology_facets: usize,
}

impl Default for CertifyBudget {
    fn default() -> Self {
        CertifyBudget {
            pi1_moves: DEFAULT_PI1_BUDGET,
            shelling_nodes: 1_000_000,
            homology_facets: 50_000,
        }
    }
}

struct Context<'a> {
    poset: &'a Poset,
    complexes: HashMap<(usize, usize), SimplicialComplex>,
    budget: CertifyBudget,
}

impl Context<'_> {
    fn record(&self, x: usize, y: usize, status: Status, route: Route) -> IntervalRecord {
        IntervalRecord {
            lower: self.poset.label(x).to_string(),
            upper: self.poset.label(y).to_string(),
            rank_difference: self.poset.rank(y) - self.poset.rank(x),
            status,
            route,
            witnesses: Vec::new(),
            dependencies: Vec::new(),
            pi1: None,
        }
    }

    fn certify(&self, x: usize, y: usize, store: &HashMap<(usize, usize), IntervalRecord>) -> IntervalRecord {
        let p = self.poset;
        let r = p.rank(y) - p.rank(x);
        let delta = &self.complexes[&(x, y)];
        match r {
            1 => self.record(x, y, Status::CertifiedSphere, Route::LowDimExact),
            2 => {
                let count = delta.vertices().len();
                if count == 2 {
                    self.record(x, y, Status::CertifiedSphere, Route::LowDimExact)
                } else {
                    let mut rec = self.record(x, y, Status::Failed, Route::LowDimExact);
                    rec.witnesses.push(Witness::MiddleCount { count });
                    rec
                }
            }
            3 | 4 => match sphere_recognize_lowdim(delta).expect("dimension ≤ 2") {
                LowDimVerdict::Sphere => self.record(x, y, Status::CertifiedSphere, Route::LowDimExact),
                LowDimVerdict::NotSphere { reason } => {
                    let mut rec = self.record(x, y, Status::Failed, Route::LowDimExact);
                    rec.witnesses.push(Witness::NotLowDimSphere { reason });
                    rec
                }
            },
            _ => self.certify_high(x, y, delta, store),
        }
    }

    /// Large complexes: a shelling of a pseudomanifold, or nothing.
    fn shelling_only(&self, mut rec: IntervalRecord, delta: &SimplicialComplex) -> IntervalRecord {
        let pm = delta.pseudomanifold_report();
        if !pm.is_pseudomanifold() {
            rec.witnesses.push(Witness::NotPseudomanifold {
                ridge: pm.ridge_witness,
                strongly_connected: pm.strongly_connected,
            });
            return rec;
        }
        if let ShellingSearch::Found(_) = find_shelling(delta, self.budget.shelling_nodes).expect("pure") {
            rec.status = Status::CertifiedSphere;
            rec.route = Route::DanarajKlee;
            rec.witnesses.clear();
        } else {
            rec.status = Status::Inconclusive;
            rec.witnesses.push(Witness::TooLarge {
                facets: delta.facets().len(),
                limit: self.budget.homology_facets,
            });
        }
        rec
    }

    fn certify_high(
        &self,
        x: usize,
        y: usize,
        delta: &SimplicialComplex,
        store: &HashMap<(usize, usize), IntervalRecord>,
    ) -> IntervalRecord {
        let p = self.poset;
        let r = p.rank(y) - p.rank(x);
        let mut rec = self.record(x, y, Status::Failed, Route::ManifoldInduction);
        let too_large = delta.facets().len() > self.budget.homology_facets;

        // (a) vertex links are joins of the two smaller intervals
        let mut worst_dependency = Status::CertifiedSphere;
        for z in p.open_members(x, y) {
            let link = delta
                .link_of_labels(&[p.label(z)])
                .expect("poset element is a vertex of its interval's order complex");
            let join = self.complexes[&(x, z)].join(&self.complexes[&(z, y)]);
            if link.facet_label_set() != join.facet_label_set() {
                rec.witnesses.push(Witness::LinkNotJoin {
                    vertex: p.label(z).to_string(),
                });
                return rec;
            }
            for key in [(x, z), (z, y)] {
                let dep = &store[&key];
                rec.dependencies.push((dep.lower.clone(), dep.upper.clone()));
                if dep.status > worst_dependency {
                    worst_dependency = dep.status;
                }
                if dep.status == Status::Failed {
                    rec.witnesses.push(Witness::Dependency {
                        lower: dep.lower.clone(),
                        upper: dep.upper.clone(),
                        status: dep.status,
                    });
                    return rec;
                }
            }
        }
        rec.dependencies.sort();
        rec.dependencies.dedup();

        // thinness of [x, y], read off the rank-2 records
        for a in (0..p.len()).filter(|&a| p.le(x, a) && p.lt(a, y)) {
            for b in (0..p.len()).filter(|&b| p.lt(a, b) && p.le(b, y) && p.rank(b) == p.rank(a) + 2) {
                let sub = &store[&(a, b)];
                if sub.status != Status::CertifiedSphere {
                    rec.witnesses.push(Witness::NotThin {
                        lower: sub.lower.clone(),
                        upper: sub.upper.clone(),
                        middle_count: self.complexes[&(a, b)].vertices().len(),
                    });
                    return rec;
                }
            }
        }

        if too_large {
            return self.shelling_only(rec, delta);
        }

        // (b) homology sphere
        let d = r as isize - 2;
        match is_homology_sphere(delta, d) {
            Ok(SphereVerdict::HomologySphere) => {}
            Ok(SphereVerdict::NotSphere { dim, group }) => {
                rec.witnesses.push(Witness::NotHomologySphere { dim, group });
                return rec;
            }
            Err(_) => {
                rec.witnesses.push(Witness::NotHomologySphere {
                    dim: delta.dim(),
                    group: format!("complex has dimension {}", delta.dim()),
                });
                return rec;
            }
        }

        // (c) closed pseudomanifold, orientable
        let pm = delta.pseudomanifold_report();
        if !pm.is_pseudomanifold() {
            rec.witnesses.push(Witness::NotPseudomanifold {
                ridge: pm.ridge_witness,
                strongly_connected: pm.strongly_connected,
            });
            return rec;
        }
        if orientability_class(delta) != Orientability::Orientable {
            rec.witnesses.push(Witness::NonOrientable);
            return rec;
        }

        // (d) π₁, then a shelling as the alternative route
        let manifold = worst_dependency == Status::CertifiedSphere;
        if manifold {
            let pi1 = pi1_triviality(delta, self.budget.pi1_moves);
            rec.pi1 = Some(pi1);
            if pi1 == Pi1Verdict::Trivial {
                rec.status = Status::CertifiedSphere;
                return rec;
            }
            rec.witnesses.push(Witness::Pi1Unresolved);
        }
        match find_shelling(delta, self.budget.shelling_nodes).expect("pure") {
            ShellingSearch::Found(_) => {
                rec.status = Status::CertifiedSphere;
                rec.route = Route::DanarajKlee;
                rec.witnesses.clear();
            }
            other => {
                rec.witnesses.push(Witness::NoShellingFound {
                    search: format!("{:?}", other.status()).to_lowercase(),
                });
                rec.status = if worst_dependency == Status::Inconclusive {
                    Status::Inconclusive
                } else {
                    Status::HomologySphereOnly
                };
            }
        }
        rec
    }
}

/// Certifies every open interval bottom-up and decides whether `poset` is a
/// CW poset, i.e. whether every `(0̂, y)` reached `certified_sphere`.
pub fn cw_certify(poset: &Poset, budget: CertifyBudget) -> Certificate {
    let Some(zero) = poset.minimum().filter(|_| poset.is_bounded_below()) else {
        return Certificate {
            verdict: CwVerdict::NotCwPoset,
            cw_poset: false,
            precondition: Some("needs a unique minimal element and at least one other element".into()),
            failing_interval: None,
            intervals: Vec::new(),
        };
    };
    let pairs = poset.strict_pairs();
    let complexes: HashMap<(usize, usize), SimplicialComplex> = pairs
        .par_iter()
        .map(|&(x, y)| ((x, y), order_complex(&poset.open_interval(x, y))))
        .collect();
    let ctx = Context {
        poset,
        complexes,
        budget,
    };

    let mut store: HashMap<(usize, usize), IntervalRecord> = HashMap::with_capacity(pairs.len());
    let mut ordered = Vec::with_capacity(pairs.len());
    // strict_pairs is sorted by rank difference: one stratum at a time
    let mut start = 0;
    while start < pairs.len() {
        let (x0, y0) = pairs[start];
        let r = poset.rank(y0) - poset.rank(x0);
        let end = pairs[start..]
            .iter()
            .position(|&(x, y)| poset.rank(y) - poset.rank(x) != r)
            .map_or(pairs.len(), |k| start + k);
        let stratum = &pairs[start..end];
        let records: Vec<IntervalRecord> = stratum.par_iter().map(|&(x, y)| ctx.certify(x, y, &store)).collect();
        for (&key, rec) in stratum.iter().zip(records) {
            ordered.push(key);
            store.insert(key, rec);
        }
        start = end;
    }

    let intervals: Vec<IntervalRecord> = ordered.iter().map(|k| store.remove(k).unwrap()).collect();
    let zero_label = poset.label(zero);
    let lower: Vec<&IntervalRecord> = intervals.iter().filter(|r| r.lower == zero_label).collect();
    let failing = lower.iter().find(|r| r.status == Status::Failed);
    let verdict = if failing.is_some() {
        CwVerdict::NotCwPoset
    } else if lower.iter().all(|r| r.status == Status::CertifiedSphere) {
        CwVerdict::CwPoset
    } else {
        CwVerdict::Undetermined
    };
    Certificate {
        verdict,
        cw_poset: verdict == CwVerdict::CwPoset,
        precondition: None,
        failing_interval: failing.map(|r| (r.lower.clone(), r.upper.clone())),
        intervals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from(t: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<String>> = t.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        SimplicialComplex::from_faces(&f).unwrap()
    }

    #[test]
    fn low_dimensional_spheres() {
        assert!(sphere_recognize_lowdim(&SimplicialComplex::void_sphere()).unwrap().holds());
        assert!(sphere_recognize_lowdim(&from(&[&[0], &[1]])).unwrap().holds());
        assert!(!sphere_recognize_lowdim(&from(&[&[0], &[1], &[2]])).unwrap().holds());
        let hex = from(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
        assert!(sphere_recognize_lowdim(&hex).unwrap().holds());
        let two_triangles = from(&[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
        assert!(!sphere_recognize_lowdim(&two_triangles).unwrap().holds());
        let tet = from(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert!(sphere_recognize_lowdim(&tet).unwrap().holds());
        let disk = from(&[&[0, 1, 2]]);
        assert!(!sphere_recognize_lowdim(&disk).unwrap().holds());
    }

    #[test]
    fn projective_plane_has_wrong_euler_characteristic() {
        let rp2 = from(&[
            &[1, 2, 3],
            &[1, 3, 4],
            &[1, 4, 5],
            &[1, 5, 6],
            &[1, 2, 6],
            &[2, 3, 5],
            &[3, 4, 6],
            &[2, 4, 5],
            &[3, 5, 6],
            &[2, 4, 6],
        ]);
        assert_eq!(
            sphere_recognize_lowdim(&rp2).unwrap(),
            LowDimVerdict::NotSphere {
                reason: "Euler characteristic 1, expected 2".into()
            }
        );
    }

    #[test]
    fn too_high_dimension() {
        let k = SimplicialComplex::simplex(&["a", "b", "c", "d"]);
        assert_eq!(sphere_recognize_lowdim(&k), Err(CertifyError::DimensionTooHigh(3)));
    }

    #[test]
    fn three_middles_fails_at_top() {
        let p = Poset::build(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap();
        let cert = cw_certify(&p, CertifyBudget::default());
        assert_eq!(cert.verdict, CwVerdict::NotCwPoset);
        assert_eq!(cert.failing_interval, Some(("0".into(), "1".into())));
        assert_eq!(
            cert.record("0", "1").unwrap().witnesses,
            vec![Witness::MiddleCount { count: 3 }]
        );
    }

    #[test]
    fn needs_minimum() {
        let p = Poset::build::<&str>(&["a", "b"], &[]).unwrap();
        let cert = cw_certify(&p, CertifyBudget::default());
        assert!(!cert.cw_poset);
        assert!(cert.precondition.is_some());
        let single = Poset::build::<&str>(&["a"], &[]).unwrap();
        assert!(cw_certify(&single, CertifyBudget::default()).precondition.is_some());
    }

    #[test]
    fn diamond_is_cw() {
        let p = Poset::build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
            .unwrap();
        let cert = cw_certify(&p, CertifyBudget::default());
        assert!(cert.cw_poset);
        assert_eq!(cert.intervals.len(), 5);
        assert!(cert.intervals.iter().all(|r| r.route == Route::LowDimExact));
    }
}
