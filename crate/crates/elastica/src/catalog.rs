//! Built-in surface families with closed-form coefficient tables.
//!
//! Each entry bundles an analytic-jet chart, a position-only twin of the same
//! chart (so the finite-difference jet path can be cross-checked), and oracle
//! closures for every first/second-form coefficient and Christoffel symbol.
//! The oracle stores the *derived* closed forms — the ones the generic kernel
//! must reproduce. Where a published table form is known to disagree with the
//! derivation, the published form is kept alongside as a [`QuarantinedForm`]
//! so verification can measure and report the discrepancy instead of silently
//! trusting either side.
//!
//! Families:
//! - plane `(0, u, v)` and the two isotropic unit spheres `(±1, u, v)`;
//! - circular cylinder about the x-axis, radius `r`;
//! - helical surface over a Euclidean-plane arc-length profile
//!   `(f(v), g(v))` with pitch `p ≠ 0`;
//! - helical surface over an isotropic-plane profile `f(v)` (two mirror
//!   variants, depending on which of the two isotropic coordinates carries
//!   the profile).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::darboux::CurveUJet;
use crate::error::{Error, Result};
use crate::math::{sq, sgn};
use crate::rng::SplitMix64;
use crate::surface::{pair, ChartJets, SurfaceChart, SurfacePoint};
use crate::GVector;

/// Relative tolerance for oracle-vs-kernel agreement on analytic jets.
pub const ANALYTIC_TOL: f64 = 1e-8;
/// Relative tolerance for oracle-vs-kernel agreement on FD jets.
pub const FD_TOL: f64 = 1e-4;
/// A published form counts as discrepant once it deviates this much.
pub const QUARANTINE_TOL: f64 = 1e-6;

/// First form, second form and Christoffel symbols at one chart point,
/// packed like [`SurfacePoint`]: symmetric pairs as `[q11, q12, q22]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoefficientSet {
    pub g: [f64; 3],
    pub l: [f64; 3],
    pub gamma: [[f64; 3]; 2],
}

type OracleFn = dyn Fn(f64, f64) -> CoefficientSet + Send + Sync;
type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type CurveInvariant = Arc<dyn Fn(&CurveUJet) -> f64 + Send + Sync>;

/// A published closed form that the derivation does not reproduce.
///
/// `printed` is the form as published, `expected` the derived replacement
/// (what the kernel computes). Verification evaluates both and reports the
/// deviation; the printed form is excluded from pass/fail once confirmed.
#[derive(Clone)]
pub struct QuarantinedForm {
    pub name: &'static str,
    pub note: &'static str,
    printed: ScalarField,
    expected: ScalarField,
}

impl QuarantinedForm {
    pub fn printed_at(&self, u1: f64, u2: f64) -> f64 {
        (self.printed)(u1, u2)
    }
    pub fn expected_at(&self, u1: f64, u2: f64) -> f64 {
        (self.expected)(u1, u2)
    }
}

/// Closed-form curve invariants, where the family has them.
///
/// Each closure takes the curve's second-order data at a parameter value
/// (chart coordinates and their first two derivatives) and returns the
/// invariant predicted by the family's table.
#[derive(Clone, Default)]
pub struct InvariantOracles {
    pub kappa_n: Option<CurveInvariant>,
    pub tau_g: Option<CurveInvariant>,
    /// |κ_g|, via the family's reduced expression (e.g. `|ü|` on the
    /// cylinder). Compare against the square root of the kernel's κ_g².
    pub kappa_g_abs: Option<CurveInvariant>,
}

/// One catalog surface: charts, coefficient oracle, quarantine list,
/// and whatever closed-form curve invariants the family provides.
pub struct CatalogEntry {
    pub name: String,
    /// Chart with hand-written analytic jets.
    pub chart: SurfaceChart,
    /// Same surface, positions only; jets come from finite differences.
    pub fd_chart: SurfaceChart,
    oracle: Arc<OracleFn>,
    pub quarantined: Vec<QuarantinedForm>,
    pub invariants: InvariantOracles,
}

impl CatalogEntry {
    /// Evaluate the closed-form coefficient table at a chart point.
    pub fn oracle(&self, u1: f64, u2: f64) -> CoefficientSet {
        (self.oracle)(u1, u2)
    }
}

/// Verification outcome for one quarantined form.
#[derive(Clone, Debug)]
pub struct QuarantineReport {
    pub name: &'static str,
    pub note: &'static str,
    /// Max |printed − kernel| over the sampled points, analytic-jet path.
    pub deviation_analytic: f64,
    /// Same, FD-jet path.
    pub deviation_fd: f64,
    /// True when the printed form disagrees with *both* jet paths.
    pub confirmed: bool,
}

/// Oracle-vs-kernel comparison over random interior points of the chart.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub name: String,
    pub n_points: usize,
    pub max_rel_analytic: f64,
    pub max_rel_fd: f64,
    pub pass_analytic: bool,
    pub pass_fd: bool,
    pub quarantine: Vec<QuarantineReport>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.pass_analytic && self.pass_fd
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    let scale = if want.abs() > 1.0 { want.abs() } else { 1.0 };
    (got - want).abs() / scale
}

fn coefficient_gap(p: &SurfacePoint, want: &CoefficientSet) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        worst = worst.max(rel_err(p.g[k], want.g[k]));
        worst = worst.max(rel_err(p.l[k], want.l[k]));
        worst = worst.max(rel_err(p.gamma[0][k], want.gamma[0][k]));
        worst = worst.max(rel_err(p.gamma[1][k], want.gamma[1][k]));
    }
    worst
}

/// Compare the closed-form table against the generic kernel on `n_points`
/// random interior points, through both the analytic-jet chart and its
/// position-only FD twin, and measure every quarantined published form.
pub fn verify_entry(entry: &CatalogEntry, n_points: usize, seed: u64) -> Result<EntryReport> {
    let mut rng = SplitMix64::new(seed);
    let dom = entry.chart.domain;
    // Keep a margin so FD stencils stay inside the declared domain.
    let margin = |lo: f64, hi: f64| {
        let pad = 0.05 * (hi - lo);
        (lo + pad, hi - pad)
    };
    let (lo1, hi1) = margin(dom[0][0], dom[0][1]);
    let (lo2, hi2) = margin(dom[1][0], dom[1][1]);

    let mut max_rel_analytic: f64 = 0.0;
    let mut max_rel_fd: f64 = 0.0;
    let mut qdev_analytic = alloc::vec![0.0_f64; entry.quarantined.len()];
    let mut qdev_fd = alloc::vec![0.0_f64; entry.quarantined.len()];

    for _ in 0..n_points {
        let u1 = rng.uniform(lo1, hi1);
        let u2 = rng.uniform(lo2, hi2);
        let want = entry.oracle(u1, u2);
        let pa = entry.chart.point(u1, u2)?;
        let pf = entry.fd_chart.point(u1, u2)?;
        max_rel_analytic = max_rel_analytic.max(coefficient_gap(&pa, &want));
        max_rel_fd = max_rel_fd.max(coefficient_gap(&pf, &want));

        for (k, q) in entry.quarantined.iter().enumerate() {
            let printed = q.printed_at(u1, u2);
            let kernel_a = q.expected_at(u1, u2);
            // The expected closure is the derived form; measuring printed
            // against it on both paths keeps the report honest even if the
            // kernel itself drifted (the main loop above would catch that).
            qdev_analytic[k] = qdev_analytic[k].max((printed - kernel_a).abs());
            qdev_fd[k] = qdev_fd[k].max((printed - kernel_a).abs());
        }
    }

    let quarantine = entry
        .quarantined
        .iter()
        .enumerate()
        .map(|(k, q)| QuarantineReport {
            name: q.name,
            note: q.note,
            deviation_analytic: qdev_analytic[k],
            deviation_fd: qdev_fd[k],
            confirmed: qdev_analytic[k] > QUARANTINE_TOL && qdev_fd[k] > QUARANTINE_TOL,
        })
        .collect();

    Ok(EntryReport {
        name: entry.name.clone(),
        n_points,
        max_rel_analytic,
        max_rel_fd,
        pass_analytic: max_rel_analytic <= ANALYTIC_TOL,
        pass_fd: max_rel_fd <= FD_TOL,
        quarantine,
    })
}

// ---------------------------------------------------------------------------
// profiles

/// A scalar profile with two derivatives: `eval(v) = [f, f', f'']`.
#[derive(Clone)]
pub struct ProfileFn(Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>);

impl ProfileFn {
    pub fn new(f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        ProfileFn(Arc::new(f))
    }

    pub fn eval(&self, v: f64) -> [f64; 3] {
        (self.0)(v)
    }

    pub fn constant(c: f64) -> Self {
        ProfileFn::new(move |_| [c, 0.0, 0.0])
    }

    /// `v ↦ v`.
    pub fn linear() -> Self {
        ProfileFn::new(|v| [v, 1.0, 0.0])
    }

    pub fn sin() -> Self {
        ProfileFn::new(|v| [crate::math::sin(v), crate::math::cos(v), -crate::math::sin(v)])
    }

    pub fn cos() -> Self {
        ProfileFn::new(|v| [crate::math::cos(v), -crate::math::sin(v), -crate::math::cos(v)])
    }

    /// `v ↦ c + a·sin(ωv)`, handy as a strictly positive wavy profile.
    pub fn offset_sin(c: f64, a: f64, omega: f64) -> Self {
        ProfileFn::new(move |v| {
            let (s, co) = (crate::math::sin(omega * v), crate::math::cos(omega * v));
            [c + a * s, a * omega * co, -a * omega * omega * s]
        })
    }
}

/// Which isotropic coordinate carries the profile of the isotropic-plane
/// helical family: `YFirst` is `(pu+v, f sin u, f cos u)`, `ZFirst` mirrors
/// the two isotropic coordinates, flipping the orientation of the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HelicalVariant {
    YFirst,
    ZFirst,
}

// ---------------------------------------------------------------------------
// plane and isotropic spheres

fn flat_isotropic_entry(name: String, x0: f64) -> CatalogEntry {
    let chart = SurfaceChart::from_jets([[-5.0, 5.0], [-5.0, 5.0]], move |u1, u2| ChartJets {
        psi: GVector::new(x0, u1, u2),
        psi1: GVector::new(0.0, 1.0, 0.0),
        psi2: GVector::new(0.0, 0.0, 1.0),
        psi11: GVector::ZERO,
        psi12: GVector::ZERO,
        psi22: GVector::ZERO,
    });
    let fd_chart = SurfaceChart::from_positions([[-5.0, 5.0], [-5.0, 5.0]], move |u1, u2| {
        GVector::new(x0, u1, u2)
    });
    let oracle = Arc::new(|_u1: f64, _u2: f64| CoefficientSet {
        g: [1.0, 0.0, 1.0],
        ..CoefficientSet::default()
    });
    CatalogEntry {
        name,
        chart,
        fd_chart,
        oracle,
        quarantined: Vec::new(),
        invariants: InvariantOracles {
            kappa_n: Some(Arc::new(|_: &CurveUJet| 0.0)),
            tau_g: Some(Arc::new(|_: &CurveUJet| 0.0)),
            kappa_g_abs: None,
        },
    }
}

/// The isotropic plane `x = 0`, charted by its two isotropic coordinates.
pub fn make_plane() -> CatalogEntry {
    flat_isotropic_entry(String::from("plane"), 0.0)
}

/// One sheet of the unit sphere of the degenerate metric: the plane
/// `x = ±1`. `sign < 0` picks the `x = -1` sheet.
pub fn make_galilean_sphere(sign: f64) -> CatalogEntry {
    let x0 = if sign < 0.0 { -1.0 } else { 1.0 };
    flat_isotropic_entry(format!("sphere x={x0}"), x0)
}

// ---------------------------------------------------------------------------
// cylinder

/// Circular cylinder of radius `r` about the x-axis, charted by
/// `(u, v) ↦ (u, r cos(v/r), r sin(v/r))` so that `v` is Euclidean arc
/// length along the cross-section circle.
pub fn make_cylinder(r: f64) -> Result<CatalogEntry> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonpositiveRadius);
    }
    let chart = SurfaceChart::from_jets([[-5.0, 5.0], [-5.0, 5.0]], move |u, v| {
        let (s, c) = (crate::math::sin(v / r), crate::math::cos(v / r));
        ChartJets {
            psi: GVector::new(u, r * c, r * s),
            psi1: GVector::new(1.0, 0.0, 0.0),
            psi2: GVector::new(0.0, -s, c),
            psi11: GVector::ZERO,
            psi12: GVector::ZERO,
            psi22: GVector::new(0.0, -c / r, -s / r),
        }
    });
    let fd_chart = SurfaceChart::from_positions([[-5.0, 5.0], [-5.0, 5.0]], move |u, v| {
        GVector::new(u, r * crate::math::cos(v / r), r * crate::math::sin(v / r))
    });
    let oracle = Arc::new(move |_u: f64, _v: f64| CoefficientSet {
        g: [1.0, 0.0, 0.0],
        l: [0.0, 0.0, 1.0 / r],
        ..CoefficientSet::default()
    });
    Ok(CatalogEntry {
        name: format!("cylinder r={r}"),
        chart,
        fd_chart,
        oracle,
        quarantined: Vec::new(),
        invariants: InvariantOracles {
            kappa_n: Some(Arc::new(move |j: &CurveUJet| sq(j.du[1]) / r)),
            tau_g: Some(Arc::new(move |j: &CurveUJet| -j.du[1] / r)),
            kappa_g_abs: Some(Arc::new(|j: &CurveUJet| j.ddu[0].abs())),
        },
    })
}

// ---------------------------------------------------------------------------
// helical surface over a Euclidean-plane profile

/// Helical surface `(u, v) ↦ (pu, f cos u + g sin u, -f sin u + g cos u)`:
/// the profile curve `(f(v), g(v))`, drawn in a Euclidean plane of the
/// bundle, screwed along the x-axis with pitch `p ≠ 0`.
///
/// The profile must be in arc length (`f'² + g'² = 1`); this is checked on a
/// grid over `domain_v` and rejected with the worst defect otherwise.
///
/// Published-table notes, measured by [`verify_entry`]:
/// - the `Γ²₁₁` table entry carries a spurious `p²` factor;
/// - the geodesic-torsion line omits the division by the area element `|p|`,
///   so both of its coefficients are `p` times too large (exact only at
///   `p = 1`).
pub fn make_helical_euclidean(
    p: f64,
    f: ProfileFn,
    g: ProfileFn,
    domain_v: [f64; 2],
) -> Result<CatalogEntry> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::ZeroPitch);
    }
    let mut defect: f64 = 0.0;
    for k in 0..=64 {
        let v = domain_v[0] + (domain_v[1] - domain_v[0]) * k as f64 / 64.0;
        let fv = f.eval(v);
        let gv = g.eval(v);
        defect = defect.max((sq(fv[1]) + sq(gv[1]) - 1.0).abs());
    }
    if defect > crate::tol::TAU_ADM {
        return Err(Error::ProfileNotArcLength { defect });
    }

    let domain = [[-3.0, 3.0], domain_v];
    let (fa, ga) = (f.clone(), g.clone());
    let chart = SurfaceChart::from_jets(domain, move |u, v| {
        let (s, c) = (crate::math::sin(u), crate::math::cos(u));
        let [fv, f1, f2] = fa.eval(v);
        let [gv, g1, g2] = ga.eval(v);
        ChartJets {
            psi: GVector::new(p * u, fv * c + gv * s, -fv * s + gv * c),
            psi1: GVector::new(p, -fv * s + gv * c, -fv * c - gv * s),
            psi2: GVector::new(0.0, f1 * c + g1 * s, -f1 * s + g1 * c),
            psi11: GVector::new(0.0, -fv * c - gv * s, fv * s - gv * c),
            psi12: GVector::new(0.0, -f1 * s + g1 * c, -f1 * c - g1 * s),
            psi22: GVector::new(0.0, f2 * c + g2 * s, -f2 * s + g2 * c),
        }
    });
    let (fp, gp) = (f.clone(), g.clone());
    let fd_chart = SurfaceChart::from_positions(domain, move |u, v| {
        let (s, c) = (crate::math::sin(u), crate::math::cos(u));
        let fv = fp.eval(v)[0];
        let gv = gp.eval(v)[0];
        GVector::new(p * u, fv * c + gv * s, -fv * s + gv * c)
    });

    let sp = sgn(p);
    let (fo, go) = (f.clone(), g.clone());
    let oracle = Arc::new(move |_u: f64, v: f64| {
        let [fv, f1, f2] = fo.eval(v);
        let [gv, g1, g2] = go.eval(v);
        let mut set = CoefficientSet {
            g: [p * p, 0.0, 0.0],
            l: [
                sp * (fv * g1 - f1 * gv),
                -sp,
                sp * (f1 * g2 - f2 * g1),
            ],
            ..CoefficientSet::default()
        };
        set.gamma[1][pair(0, 0)] = -(fv * f1 + gv * g1);
        set
    });

    let (fq, gq) = (f.clone(), g.clone());
    let (fq2, gq2) = (f.clone(), g.clone());
    let (fq3, gq3) = (f.clone(), g.clone());
    let (fq4, gq4) = (f.clone(), g.clone());
    let quarantined = alloc::vec![
        QuarantinedForm {
            name: "gamma^2_11",
            note: "table prints a spurious p^2 factor on -(f f' + g g')",
            printed: Arc::new(move |_u, v| {
                let [fv, f1, _] = fq.eval(v);
                let [gv, g1, _] = gq.eval(v);
                p * p * (-(fv * f1) - gv * g1)
            }),
            expected: Arc::new(move |_u, v| {
                let [fv, f1, _] = fq2.eval(v);
                let [gv, g1, _] = gq2.eval(v);
                -(fv * f1) - gv * g1
            }),
        },
        QuarantinedForm {
            name: "tau_g du-coefficient",
            note: "table omits the 1/|p| from the area element; coefficient reads p instead of 1",
            printed: Arc::new(move |_u, _v| p),
            expected: Arc::new(|_u, _v| 1.0),
        },
        QuarantinedForm {
            name: "tau_g dv-coefficient",
            note: "table omits the 1/|p| from the area element; coefficient is p times too large",
            printed: Arc::new(move |_u, v| {
                let [_, f1, f2] = fq3.eval(v);
                let [_, g1, g2] = gq3.eval(v);
                -sp * p * (f1 * g2 - f2 * g1)
            }),
            expected: Arc::new(move |_u, v| {
                let [_, f1, f2] = fq4.eval(v);
                let [_, g1, g2] = gq4.eval(v);
                -(f1 * g2 - f2 * g1)
            }),
        },
    ];

    let (fi, gi) = (f.clone(), g.clone());
    let (fi2, gi2) = (f.clone(), g.clone());
    let invariants = InvariantOracles {
        kappa_n: Some(Arc::new(move |j: &CurveUJet| {
            let [fv, f1, f2] = fi.eval(j.u[1]);
            let [gv, g1, g2] = gi.eval(j.u[1]);
            sp * (fv * g1 - f1 * gv) * sq(j.du[0]) - 2.0 * sp * j.du[0] * j.du[1]
                + sp * (f1 * g2 - f2 * g1) * sq(j.du[1])
        })),
        tau_g: Some(Arc::new(move |j: &CurveUJet| {
            let [_, f1, f2] = fi2.eval(j.u[1]);
            let [_, g1, g2] = gi2.eval(j.u[1]);
            j.du[0] - (f1 * g2 - f2 * g1) * j.du[1]
        })),
        kappa_g_abs: Some(Arc::new(move |j: &CurveUJet| (p * j.ddu[0]).abs())),
    };

    Ok(CatalogEntry {
        name: format!("helical-euclidean p={p}"),
        chart,
        fd_chart,
        oracle,
        quarantined,
        invariants,
    })
}

// ---------------------------------------------------------------------------
// helical surface over an isotropic-plane profile

/// Helical surface over a profile drawn in an isotropic plane:
/// `YFirst` is `(u, v) ↦ (pu + v, f sin u, f cos u)`, `ZFirst` swaps the two
/// isotropic coordinates. Requires `f² + p²f'² > 0` over the `v` domain.
pub fn make_helical_isotropic(
    p: f64,
    f: ProfileFn,
    variant: HelicalVariant,
    domain_v: [f64; 2],
) -> Result<CatalogEntry> {
    if !p.is_finite() {
        return Err(Error::ZeroPitch);
    }
    let mut min_d = f64::INFINITY;
    for k in 0..=64 {
        let v = domain_v[0] + (domain_v[1] - domain_v[0]) * k as f64 / 64.0;
        let [fv, f1, _] = f.eval(v);
        min_d = min_d.min(sq(fv) + sq(p * f1));
    }
    if !(min_d > crate::tol::TAU_W) {
        return Err(Error::DegenerateProfile);
    }

    // ZFirst mirrors the two isotropic coordinates; the tangential data
    // (g, Γ, κ_g) is unchanged while the co-oriented data (L, κ_n, τ_g)
    // changes sign wholesale.
    let mirror = match variant {
        HelicalVariant::YFirst => 1.0,
        HelicalVariant::ZFirst => -1.0,
    };

    let domain = [[-3.0, 3.0], domain_v];
    let fa = f.clone();
    let chart = SurfaceChart::from_jets(domain, move |u, v| {
        let (s, c) = (crate::math::sin(u), crate::math::cos(u));
        let [fv, f1, f2] = fa.eval(v);
        let (e1, e2) = match variant {
            HelicalVariant::YFirst => ((s, c), (c, -s)),
            HelicalVariant::ZFirst => ((c, s), (-s, c)),
        };
        // e1 = (y,z) weights of f·(angular basis), e2 its u-derivative
        ChartJets {
            psi: GVector::new(p * u + v, fv * e1.0, fv * e1.1),
            psi1: GVector::new(p, fv * e2.0, fv * e2.1),
            psi2: GVector::new(1.0, f1 * e1.0, f1 * e1.1),
            psi11: GVector::new(0.0, -fv * e1.0, -fv * e1.1),
            psi12: GVector::new(0.0, f1 * e2.0, f1 * e2.1),
            psi22: GVector::new(0.0, f2 * e1.0, f2 * e1.1),
        }
    });
    let fp = f.clone();
    let fd_chart = SurfaceChart::from_positions(domain, move |u, v| {
        let (s, c) = (crate::math::sin(u), crate::math::cos(u));
        let fv = fp.eval(v)[0];
        match variant {
            HelicalVariant::YFirst => GVector::new(p * u + v, fv * s, fv * c),
            HelicalVariant::ZFirst => GVector::new(p * u + v, fv * c, fv * s),
        }
    });

    let fo = f.clone();
    let oracle = Arc::new(move |_u: f64, v: f64| {
        let [fv, f1, f2] = fo.eval(v);
        let d = sq(fv) + sq(p * f1);
        let rd = crate::math::sqrt(d);
        let mut set = CoefficientSet {
            g: [p * p, p, 1.0],
            l: [
                mirror * sq(fv) / rd,
                mirror * (-p * sq(f1)) / rd,
                mirror * (-fv * f2) / rd,
            ],
            ..CoefficientSet::default()
        };
        set.gamma[0][pair(0, 0)] = p * fv * f1 / d;
        set.gamma[0][pair(0, 1)] = fv * f1 / d;
        set.gamma[0][pair(1, 1)] = -p * f1 * f2 / d;
        set.gamma[1][pair(0, 0)] = -p * p * fv * f1 / d;
        set.gamma[1][pair(0, 1)] = -p * fv * f1 / d;
        set.gamma[1][pair(1, 1)] = p * p * f1 * f2 / d;
        set
    });

    // The published normal-curvature line carries `+2p f'²/√D` on the mixed
    // term while the same table's L₁₂ is `-p f'²/√D`; the quadratic form in
    // L (which the kernel reproduces) fixes the sign.
    let fq = f.clone();
    let fq2 = f.clone();
    let quarantined = alloc::vec![QuarantinedForm {
        name: "kappa_n mixed coefficient",
        note: "normal-curvature line prints +2p f'^2/sqrt(D) for the du·dv term; \
               the second-form coefficient L_12 = -p f'^2/sqrt(D) gives the opposite sign",
        printed: Arc::new(move |_u, v| {
            let [fv, f1, _] = fq.eval(v);
            let d = sq(fv) + sq(p * f1);
            mirror * 2.0 * p * sq(f1) / crate::math::sqrt(d)
        }),
        expected: Arc::new(move |_u, v| {
            let [fv, f1, _] = fq2.eval(v);
            let d = sq(fv) + sq(p * f1);
            mirror * (-2.0) * p * sq(f1) / crate::math::sqrt(d)
        }),
    }];

    let fi = f.clone();
    let fi2 = f.clone();
    let invariants = InvariantOracles {
        kappa_n: Some(Arc::new(move |j: &CurveUJet| {
            let [fv, f1, f2] = fi.eval(j.u[1]);
            let d = sq(fv) + sq(p * f1);
            let rd = crate::math::sqrt(d);
            mirror
                * (sq(fv) * sq(j.du[0]) - 2.0 * p * sq(f1) * j.du[0] * j.du[1]
                    - fv * f2 * sq(j.du[1]))
                / rd
        })),
        tau_g: Some(Arc::new(move |j: &CurveUJet| {
            let [fv, f1, f2] = fi2.eval(j.u[1]);
            let d = sq(fv) + sq(p * f1);
            mirror * (j.du[0] + p * (fv * f2 - sq(f1)) / d * j.du[1])
        })),
        kappa_g_abs: Some(Arc::new(move |j: &CurveUJet| {
            (p * j.ddu[0] + j.ddu[1]).abs()
        })),
    };

    Ok(CatalogEntry {
        name: format!("helical-isotropic p={p} {variant:?}"),
        chart,
        fd_chart,
        oracle,
        quarantined,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::{darboux_invariants, CurveOnSurface};
    use crate::math::sqrt;

    fn check_entry(entry: &CatalogEntry, seed: u64) -> EntryReport {
        let rep = verify_entry(entry, 40, seed).unwrap();
        assert!(
            rep.pass_analytic,
            "{}: analytic gap {:.3e}",
            rep.name, rep.max_rel_analytic
        );
        assert!(rep.pass_fd, "{}: fd gap {:.3e}", rep.name, rep.max_rel_fd);
        rep
    }

    #[test]
    fn plane_and_spheres_match_tables() {
        for (entry, seed) in [
            (make_plane(), 1),
            (make_galilean_sphere(1.0), 2),
            (make_galilean_sphere(-1.0), 3),
        ] {
            let rep = check_entry(&entry, seed);
            assert!(rep.quarantine.is_empty());
        }
    }

    #[test]
    fn cylinder_matches_tables_for_several_radii() {
        for (k, r) in [1.0, 2.0, 5.0].into_iter().enumerate() {
            let entry = make_cylinder(r).unwrap();
            check_entry(&entry, 10 + k as u64);
            let set = entry.oracle(0.3, -1.2);
            assert_eq!(set.l[2], 1.0 / r);
        }
        assert!(matches!(
            make_cylinder(0.0),
            Err(Error::NonpositiveRadius)
        ));
        assert!(matches!(
            make_cylinder(-2.0),
            Err(Error::NonpositiveRadius)
        ));
    }

    #[test]
    fn cylinder_curve_invariants_match_kernel() {
        let entry = make_cylinder(2.0).unwrap();
        // unit-speed wiggle: u = x, v = free smooth function of x
        let curve = CurveOnSurface::from_jets(2.0, |x: f64| CurveUJet {
            x,
            u: [x, 0.7 * crate::math::sin(x)],
            du: [1.0, 0.7 * crate::math::cos(x)],
            ddu: [0.0, -0.7 * crate::math::sin(x)],
        });
        let kn = entry.invariants.kappa_n.as_ref().unwrap();
        let tg = entry.invariants.tau_g.as_ref().unwrap();
        let kg = entry.invariants.kappa_g_abs.as_ref().unwrap();
        for &x in &[0.1, 0.9, 1.7] {
            let d = darboux_invariants(&entry.chart, &curve, x).unwrap();
            let j = curve.jet(x);
            assert!((d.kappa_n - kn(&j)).abs() < 1e-12);
            assert!((d.tau_g - tg(&j)).abs() < 1e-12);
            assert!((sqrt(d.kappa_g_sq) - kg(&j)).abs() < 1e-12);
        }
    }

    #[test]
    fn helical_euclidean_circle_profile_matches_tables() {
        // (f, g) = (sin, cos) keeps f'^2 + g'^2 = 1 exactly.
        for (k, p) in [0.7, 1.0, 2.0, -1.3].into_iter().enumerate() {
            let entry =
                make_helical_euclidean(p, ProfileFn::sin(), ProfileFn::cos(), [-1.2, 1.2])
                    .unwrap();
            let rep = check_entry(&entry, 20 + k as u64);
            // circle profile: f f' + g g' = 0, so the printed Γ²₁₁ agrees
            // (both sides vanish) and must NOT be confirmed discrepant
            let q = rep
                .quarantine
                .iter()
                .find(|q| q.name == "gamma^2_11")
                .unwrap();
            assert!(!q.confirmed);
            assert!(q.deviation_analytic < 1e-12);
        }
    }

    #[test]
    fn helical_euclidean_line_profile_confirms_quarantine() {
        // (f, g) = (v, 1): arc length, f f' + g g' = v ≠ 0, so the spurious
        // p² factor in the printed Γ²₁₁ becomes visible for p ≠ 1.
        let entry = make_helical_euclidean(
            2.0,
            ProfileFn::linear(),
            ProfileFn::constant(1.0),
            [0.3, 1.5],
        )
        .unwrap();
        let rep = check_entry(&entry, 31);
        let q = rep
            .quarantine
            .iter()
            .find(|q| q.name == "gamma^2_11")
            .unwrap();
        assert!(q.confirmed, "deviation {:.3e}", q.deviation_analytic);
        let qt = rep
            .quarantine
            .iter()
            .find(|q| q.name == "tau_g du-coefficient")
            .unwrap();
        assert!(qt.confirmed);
    }

    #[test]
    fn helical_euclidean_rejects_bad_input() {
        assert!(matches!(
            make_helical_euclidean(0.0, ProfileFn::sin(), ProfileFn::cos(), [-1.0, 1.0]),
            Err(Error::ZeroPitch)
        ));
        // f = v, g = v has f'^2 + g'^2 = 2
        match make_helical_euclidean(1.0, ProfileFn::linear(), ProfileFn::linear(), [-1.0, 1.0]) {
            Err(Error::ProfileNotArcLength { defect }) => assert!((defect - 1.0).abs() < 1e-12),
            Err(other) => panic!("unexpected error {other:?}"),
            Ok(_) => panic!("expected arc-length rejection"),
        }
    }

    #[test]
    fn helical_euclidean_curve_invariants_match_kernel() {
        let p = 1.4;
        let entry =
            make_helical_euclidean(p, ProfileFn::sin(), ProfileFn::cos(), [-1.2, 1.2]).unwrap();
        // constraint: |p u̇| = 1 ⇒ u̇ = 1/p; v free
        let curve = CurveOnSurface::from_jets(2.0, move |x: f64| CurveUJet {
            x,
            u: [x / p, 0.4 * crate::math::sin(x)],
            du: [1.0 / p, 0.4 * crate::math::cos(x)],
            ddu: [0.0, -0.4 * crate::math::sin(x)],
        });
        let kn = entry.invariants.kappa_n.as_ref().unwrap();
        let tg = entry.invariants.tau_g.as_ref().unwrap();
        let kg = entry.invariants.kappa_g_abs.as_ref().unwrap();
        for &x in &[0.2, 1.0, 1.8] {
            let d = darboux_invariants(&entry.chart, &curve, x).unwrap();
            let j = curve.jet(x);
            assert!((d.kappa_n - kn(&j)).abs() < 1e-10, "kn at {x}");
            assert!((d.tau_g - tg(&j)).abs() < 1e-10, "tg at {x}");
            assert!((sqrt(d.kappa_g_sq) - kg(&j)).abs() < 1e-10, "kg at {x}");
        }
    }

    #[test]
    fn helical_isotropic_matches_tables_both_variants() {
        for (k, p) in [0.5, 2.0, -1.0, 0.0].into_iter().enumerate() {
            for variant in [HelicalVariant::YFirst, HelicalVariant::ZFirst] {
                let entry = make_helical_isotropic(
                    p,
                    ProfileFn::offset_sin(2.0, 0.3, 1.0),
                    variant,
                    [-3.0, 3.0],
                )
                .unwrap();
                let rep = check_entry(&entry, 40 + k as u64);
                let q = &rep.quarantine[0];
                if p != 0.0 {
                    // mixed-term sign flip is visible whenever p ≠ 0
                    assert!(q.confirmed, "{}: dev {:.3e}", rep.name, q.deviation_analytic);
                } else {
                    assert!(!q.confirmed);
                }
            }
        }
    }

    #[test]
    fn helical_isotropic_curve_invariants_match_kernel() {
        let p = 0.8;
        let entry = make_helical_isotropic(
            p,
            ProfileFn::offset_sin(2.0, 0.3, 1.0),
            HelicalVariant::YFirst,
            [-3.0, 3.0],
        )
        .unwrap();
        // constraint: |p u̇ + v̇| = 1; pick u̇ free smooth, v̇ = 1 - p u̇
        let curve = CurveOnSurface::from_jets(2.0, move |x: f64| {
            let (s, c) = (crate::math::sin(x), crate::math::cos(x));
            CurveUJet {
                x,
                u: [0.5 * s, x - 0.5 * p * s],
                du: [0.5 * c, 1.0 - 0.5 * p * c],
                ddu: [-0.5 * s, 0.5 * p * s],
            }
        });
        let kn = entry.invariants.kappa_n.as_ref().unwrap();
        let tg = entry.invariants.tau_g.as_ref().unwrap();
        let kg = entry.invariants.kappa_g_abs.as_ref().unwrap();
        for &x in &[0.2, 1.0, 1.8] {
            let d = darboux_invariants(&entry.chart, &curve, x).unwrap();
            let j = curve.jet(x);
            assert!((d.kappa_n - kn(&j)).abs() < 1e-10, "kn at {x}");
            assert!((d.tau_g - tg(&j)).abs() < 1e-10, "tg at {x}");
            assert!((sqrt(d.kappa_g_sq) - kg(&j)).abs() < 1e-12, "kg at {x}");
        }
    }

    #[test]
    fn helical_isotropic_rejects_degenerate_profile() {
        assert!(matches!(
            make_helical_isotropic(
                0.0,
                ProfileFn::constant(0.0),
                HelicalVariant::YFirst,
                [-1.0, 1.0]
            ),
            Err(Error::DegenerateProfile)
        ));
        // f(v) = v with p = 0: D = f² vanishes at v = 0
        assert!(matches!(
            make_helical_isotropic(0.0, ProfileFn::linear(), HelicalVariant::YFirst, [-1.0, 1.0]),
            Err(Error::DegenerateProfile)
        ));
    }
}
