//! Design-decision machinery: optimal repetition count, the band/BS-density
//! resource bound with its geographical-diversity ratio, and the two
//! band-selection optimizers (water-filling-style KKT solution for the
//! band-constrained protocol, projected gradient for the band-hopped one).

use crate::analytic::{compositions, harmonic_f};
use crate::error::{Error, Result};
use crate::model::{DerivedParams, NetworkConfig};

/// A point on the probability simplex over the M bands.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Validates nonnegativity and unit sum (tolerance 1e-9).
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::domain("simplex point cannot be empty"));
        }
        if p.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::domain("simplex entries must be nonnegative"));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "simplex entries sum to {sum}, expected 1"
            )));
        }
        Ok(SimplexPoint(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Outcome of the optimal-repetition search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalRepetitions {
    pub n_star: u32,
    /// True when no N up to the cap satisfied the stopping rule; `n_star` is
    /// then the cap itself.
    pub saturated: bool,
}

/// Smallest number of repetitions maximizing the broadcast success
/// probability: the first N with `(1+N) H_N - N` above the ratio of incumbent
/// to UNB interference. Ties break toward smaller N (lower device energy).
///
/// Independent of the BS density and the decoding threshold by construction.
pub fn optimal_repetitions(
    d: &DerivedParams,
    cfg: &NetworkConfig,
    n_max: u32,
) -> Result<OptimalRepetitions> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    // a2 is N-free: strip the repetition factor out of the thinned density.
    let a2 = d.thinned_devices / cfg.repetitions as f64;
    let a3 = d.inc_interference;
    if a2 == 0.0 {
        return Err(Error::domain(
            "no UNB interferers: the repetition trade-off is undefined \
             (with no incumbents either, a single transmission is optimal)",
        ));
    }
    let ratio = a3 / a2;
    for n in 1..=n_max {
        let lhs = (1.0 + n as f64) * harmonic_f(n) - n as f64;
        if lhs > ratio {
            return Ok(OptimalRepetitions {
                n_star: n,
                saturated: false,
            });
        }
    }
    Ok(OptimalRepetitions {
        n_star: n_max,
        saturated: true,
    })
}

/// Which association scheme a resource bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Association {
    Nearest,
    NoAssociation,
}

/// Minimum band/BS-density product `M * lambda_B` that meets a success target
/// `epsilon` with a single transmission per packet.
pub fn min_resource_product(
    epsilon: f64,
    d: &DerivedParams,
    cfg: &NetworkConfig,
    scheme: Association,
) -> Result<f64> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "target epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if cfg.repetitions != 1 {
        return Err(Error::domain(
            "the resource bound is stated for a single transmission (N = 1)",
        ));
    }
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let c = (cfg.beta_time * d.activity * cfg.beta_freq * (cfg.signal_bw / cfg.band_bw)
        * cfg.device_density
        + d.inc_interference_one_band)
        * tau_d
        / d.xi;
    let g = match scheme {
        Association::Nearest => epsilon / (1.0 - epsilon),
        Association::NoAssociation => (1.0 / (1.0 - epsilon)).ln(),
    };
    Ok(c * g)
}

/// Ratio of BS density needed without association to the density needed with
/// nearest-BS association, at equal success target.
pub fn bs_density_reduction(epsilon: f64) -> Result<f64> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "target epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok((1.0 - epsilon) / epsilon * (1.0 / (1.0 - epsilon)).ln())
}

/// Per-band cost coefficients of the band-constrained selection problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCostVector(Vec<f64>);

impl BandCostVector {
    /// `c_m = xi * tau^-delta * H_N * lambda_B / (thinned devices + per-band
    /// incumbent term)`. Requires a positive BS density.
    pub fn from_params(d: &DerivedParams, cfg: &NetworkConfig) -> Result<Self> {
        if cfg.bs_density <= 0.0 {
            return Err(Error::domain(
                "band costs require a positive BS density",
            ));
        }
        let tau_d = cfg.sinr_threshold.powf(d.delta);
        let h = harmonic_f(cfg.repetitions);
        let c = d
            .band_inc_interference
            .iter()
            .map(|q| d.xi / tau_d * h * cfg.bs_density / (d.thinned_devices + q))
            .collect::<Vec<_>>();
        Self::new(c)
    }

    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::domain("cost vector cannot be empty"));
        }
        if c.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::domain("band costs must be positive and finite"));
        }
        Ok(BandCostVector(c))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// KKT residual of a candidate solution to the band-constrained problem:
/// stationarity spread among active bands, complementary slackness on the
/// inactive ones, and the unit-sum constraint, all relative to the
/// multiplier scale.
pub fn band_constrained_kkt_residual(c: &BandCostVector, p: &[f64]) -> f64 {
    let c = c.as_slice();
    let mut nu = 0.0f64;
    for (cm, pm) in c.iter().zip(p) {
        if *pm > 0.0 {
            nu = nu.max(cm * (-cm * pm).exp());
        }
    }
    if nu == 0.0 {
        return f64::INFINITY;
    }
    let mut res = (p.iter().sum::<f64>() - 1.0).abs();
    for (cm, pm) in c.iter().zip(p) {
        let grad = cm * (-cm * pm).exp();
        if *pm > 0.0 {
            res = res.max((grad - nu).abs() / nu);
        } else {
            res = res.max((grad - nu).max(0.0) / nu);
        }
    }
    res
}

/// Water-filling-style solution of the band-constrained selection problem:
/// `p_m = max{0, ln(c_m / nu) / c_m}` with the multiplier `nu` found by
/// bisection on the unit-sum constraint.
pub fn optimize_band_constrained(c: &BandCostVector) -> Result<SimplexPoint> {
    let costs = c.as_slice();
    if costs.len() == 1 {
        return SimplexPoint::new(vec![1.0]);
    }
    let p_of = |nu: f64| -> Vec<f64> {
        costs
            .iter()
            .map(|cm| ((cm / nu).ln() / cm).max(0.0))
            .collect()
    };
    let sum_of = |nu: f64| -> f64 { p_of(nu).iter().sum() };

    // sum(p(nu)) is strictly decreasing where positive; this bracket always
    // straddles 1: every band gets p_m >= 1 at the lower end, none is active
    // at the upper end.
    let mut lo = costs
        .iter()
        .map(|cm| cm * (-cm).exp())
        .fold(f64::INFINITY, f64::min);
    let mut hi = costs.iter().fold(0.0f64, |a, &b| a.max(b));
    debug_assert!(sum_of(lo) >= 1.0);
    debug_assert!(sum_of(hi) <= 1.0 + 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sum_of(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let nu = 0.5 * (lo + hi);
    let mut p = p_of(nu);
    // Absorb the residual of the sum into the largest entry; the correction
    // is at the bisection tolerance.
    let sum: f64 = p.iter().sum();
    let imax = (0..p.len())
        .max_by(|a, b| p[*a].partial_cmp(&p[*b]).unwrap())
        .unwrap();
    p[imax] += 1.0 - sum;
    let point = SimplexPoint::new(p)?;
    debug_assert!(band_constrained_kkt_residual(c, point.as_slice()) < 1e-8);
    Ok(point)
}

/// Result of the projected-gradient solve.
#[derive(Debug, Clone)]
pub struct ProjectedGradientSolution {
    pub point: SimplexPoint,
    pub converged: bool,
    pub iterations: usize,
    pub grad_mapping_norm: f64,
}

/// Minimize a smooth convex objective over the simplex by projected gradient
/// with Armijo backtracking (factor 0.5). Convergence is declared when the
/// gradient-mapping norm falls below `tol`.
pub(crate) fn projected_gradient(
    dim: usize,
    f_and_grad: impl Fn(&[f64]) -> (f64, Vec<f64>),
    tol: f64,
    max_iter: usize,
) -> ProjectedGradientSolution {
    let mut p = vec![1.0 / dim as f64; dim];
    let (mut fp, mut grad) = f_and_grad(&p);
    let mut step = 1.0f64;
    let mut gm_norm = f64::INFINITY;
    for it in 0..max_iter {
        // Backtrack on the proximal decrease condition.
        let mut t = step * 2.0;
        let (cand, fc) = loop {
            let trial: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - t * g).collect();
            let cand = project_to_simplex(&trial);
            let (fc, _) = {
                let v = f_and_grad(&cand);
                (v.0, v.1)
            };
            let dot: f64 = grad
                .iter()
                .zip(cand.iter().zip(&p))
                .map(|(g, (c, x))| g * (c - x))
                .sum();
            let dist2: f64 = cand
                .iter()
                .zip(&p)
                .map(|(c, x)| (c - x) * (c - x))
                .sum();
            if fc <= fp + dot + dist2 / (2.0 * t) || t < 1e-18 {
                break (cand, fc);
            }
            t *= 0.5;
        };
        step = t;
        gm_norm = cand
            .iter()
            .zip(&p)
            .map(|(c, x)| (c - x) * (c - x))
            .sum::<f64>()
            .sqrt()
            / t;
        p = cand;
        fp = fc;
        grad = f_and_grad(&p).1;
        if gm_norm < tol {
            return ProjectedGradientSolution {
                point: SimplexPoint::new(p).expect("projection yields a simplex point"),
                converged: true,
                iterations: it + 1,
                grad_mapping_norm: gm_norm,
            };
        }
    }
    ProjectedGradientSolution {
        point: SimplexPoint::new(project_to_simplex(&p)).expect("projection yields a simplex point"),
        converged: false,
        iterations: max_iter,
        grad_mapping_norm: gm_norm,
    }
}

/// Optimize the BS band-selection probabilities for the band-hopped protocol
/// by minimizing the multinomial-averaged failure probability over the
/// simplex. Convex, so the projected-gradient solution is globally optimal;
/// if the iteration cap (10^5) is hit the best iterate is returned with
/// `converged = false`.
pub fn optimize_band_hopped(
    d: &DerivedParams,
    cfg: &NetworkConfig,
) -> Result<ProjectedGradientSolution> {
    if cfg.bs_density <= 0.0 {
        return Err(Error::domain(
            "band selection requires a positive BS density",
        ));
    }
    let m = cfg.bands as usize;
    let table = compositions(cfg.repetitions, cfg.bands)?;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    // a[i][m] = xi tau^-delta H_{n_m} lambda_B / (thinned devices + q_m)
    let coeff: Vec<Vec<f64>> = table
        .counts
        .iter()
        .map(|counts| {
            counts
                .iter()
                .zip(&d.band_inc_interference)
                .map(|(nm, q)| {
                    if *nm == 0 {
                        0.0
                    } else {
                        d.xi / tau_d * harmonic_f(*nm) * cfg.bs_density / (d.thinned_devices + q)
                    }
                })
                .collect()
        })
        .collect();
    let weights = table.weights.clone();

    let f_and_grad = move |p: &[f64]| -> (f64, Vec<f64>) {
        let mut f = 0.0;
        let mut grad = vec![0.0; m];
        for (a, w) in coeff.iter().zip(&weights) {
            let dot: f64 = a.iter().zip(p).map(|(am, pm)| am * pm).sum();
            let e = w * (-dot).exp();
            f += e;
            for (g, am) in grad.iter_mut().zip(a) {
                *g -= e * am;
            }
        }
        (f, grad)
    };

    Ok(projected_gradient(m, f_and_grad, 1e-8, 100_000))
}
