//! Degree slicing: model constants, slice boundaries, match thresholds, the
//! cascade stopping index, and the asymptotic feasibility report.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the cascade stopping index `k*` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KStarMode {
    /// Verbatim asymptotic formula; at small n it goes negative, so this mode
    /// is for audits rather than matching.
    Theory,
    /// Cascade while slices are wide enough to estimate weights from degrees
    /// (`alpha_k * s >= slice_floor_degree`) and the slice threshold still
    /// demands a whole witness (`tau2(k) >= 1`); capped so `alpha_{k*} >= 1`.
    /// Like the asymptotic rule, the raw index can drop below 1, which
    /// disables the cascade and leaves the percolation subgraph uncapped.
    Practical,
}

/// Matcher parameters. `delta` is pinned at 1/8.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PldParams {
    /// Witness search depth for the first slice.
    pub d_hops: u32,
    /// Slice scale exponent: the top slice boundary is `n^gamma`.
    pub gamma: f64,
    /// Slice widening slack; fixed at 1/8.
    pub delta: f64,
    pub s: f64,
    pub wbar: f64,
    pub beta: f64,
    pub n: usize,
    pub theta: f64,
    /// Percolation mark threshold.
    pub r_pgm: u32,
    /// Multiplies every GMWM threshold; 1 uses the raw formulas.
    pub threshold_scale: f64,
    /// Practical-mode cascade floor: stop slicing once expected slice degrees
    /// drop below this.
    pub slice_floor_degree: f64,
    pub mode: KStarMode,
    /// Keep percolating greedily below `r_pgm` once no pair reaches it
    /// (highest marks first). This is what matches the low-degree bulk, where
    /// pairs cannot accumulate r marks; disable for the strict thresholded
    /// percolation.
    pub pgm_expand: bool,
    /// Replace the first-slice threshold's `n^{gamma((3-beta)(D-1)+1)}` factor
    /// by `n` (exact under the optimal gamma); set when parameters come from
    /// real-graph estimation.
    pub simplified_tau1: bool,
    /// Optional threshold for the final high-degree pass (default: any witness).
    pub q0_threshold: Option<f64>,
}

pub const DELTA: f64 = 0.125;

impl PldParams {
    /// Defaults: `gamma = min(optimal_gamma, 0.49)`, percolation threshold 3,
    /// raw thresholds, practical stopping rule.
    pub fn new(d_hops: u32, n: usize, beta: f64, wbar: f64, s: f64, theta: f64) -> Self {
        PldParams {
            d_hops,
            gamma: optimal_gamma(d_hops, beta).min(0.49),
            delta: DELTA,
            s,
            wbar,
            beta,
            n,
            theta,
            r_pgm: 3,
            threshold_scale: 1.0,
            slice_floor_degree: 8.0,
            mode: KStarMode::Practical,
            pgm_expand: true,
            simplified_tau1: false,
            q0_threshold: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_hops == 0 {
            return Err(Error::Parameter("hop depth must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        if !(self.beta > 2.0 && self.beta < 3.0) {
            return Err(Error::Parameter(format!(
                "beta must lie in (2, 3), got {}",
                self.beta
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Parameter(format!(
                "gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        if (self.delta - DELTA).abs() > 1e-12 {
            return Err(Error::Parameter("delta is fixed at 1/8".into()));
        }
        if !(self.wbar > 0.0) {
            return Err(Error::Parameter("wbar must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::Parameter("s must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Parameter("theta must lie in [0, 1]".into()));
        }
        if self.r_pgm == 0 {
            return Err(Error::Parameter("r_pgm must be at least 1".into()));
        }
        if !(self.threshold_scale > 0.0) {
            return Err(Error::Parameter("threshold_scale must be positive".into()));
        }
        if !(self.slice_floor_degree > 0.0) {
            return Err(Error::Parameter("slice_floor_degree must be positive".into()));
        }
        Ok(())
    }
}

/// The gamma minimizing the seeds needed at depth `d`: `1/((3-beta)(d-1)+1)`.
/// Degenerate at `d = 1` (returns 1); callers cap below 1/2.
pub fn optimal_gamma(d_hops: u32, beta: f64) -> f64 {
    1.0 / ((3.0 - beta) * (d_hops as f64 - 1.0) + 1.0)
}

/// Constants derived from [`PldParams`]: the weight-distribution constant `c`,
/// the neighborhood-growth constant `kappa`, the first-slice threshold `tau1`,
/// the slice boundaries `alpha(k) = n^gamma / 2^k`, the cascade thresholds
/// `tau2(k)`, and the stopping index `k_star`.
#[derive(Debug, Clone)]
pub struct DerivedConstants {
    pub c: f64,
    pub kappa: f64,
    pub tau1: f64,
    /// Raw stopping index; at small n it drops to or below zero in both
    /// modes, meaning no slice supports reliable 1-hop cascading.
    pub k_star: i32,
    k_star_clamped: u32,
    n_gamma: f64,
    beta: f64,
    s: f64,
    wbar: f64,
    threshold_scale: f64,
    delta: f64,
}

impl DerivedConstants {
    /// Slice boundary `alpha(k) = n^gamma / 2^k`; `alpha(-1)` is infinite.
    pub fn alpha(&self, k: i32) -> f64 {
        if k < 0 {
            f64::INFINITY
        } else {
            self.n_gamma / 2f64.powi(k)
        }
    }

    /// Cascade threshold for slice `k`: a constant fraction of the expected
    /// 1-hop witness count of a true pair, `c * alpha_{k-1}^{3-beta} * s^2 / (16 wbar)`.
    pub fn tau2(&self, k: u32) -> f64 {
        let base = self.c * self.alpha(k as i32 - 1).powf(3.0 - self.beta) * self.s * self.s
            / (16.0 * self.wbar);
        base * self.threshold_scale
    }

    /// Imperfect slice membership: degree within
    /// `[(1-delta) * alpha_k * s, (1+delta) * alpha_{k-1} * s]`
    /// (upper bound infinite for k = 0). Adjacent slices overlap.
    pub fn slice_membership(&self, degree: usize, k: u32) -> bool {
        let lo = (1.0 - self.delta) * self.alpha(k as i32) * self.s;
        let hi = (1.0 + self.delta) * self.alpha(k as i32 - 1) * self.s;
        let d = degree as f64;
        d >= lo && d <= hi
    }

    /// Cascade depth used by the matching pipeline: slices `2..=k*` run the
    /// 1-hop stage. A raw index below 2 means no cascade.
    pub fn k_star_effective(&self) -> u32 {
        self.k_star_clamped
    }

    /// Degree cap defining the intermediate-vertex subgraphs:
    /// `(1+delta) * n^gamma * s`.
    pub fn intermediate_cap(&self) -> f64 {
        (1.0 + self.delta) * self.n_gamma * self.s
    }

    /// Degree cap defining the percolation subgraphs,
    /// `(1+delta) * alpha_{k*-1} * s` with the raw stopping index: when the
    /// stopping rule says no slice can be cascaded (raw k* <= 0), the cap is
    /// infinite and percolation runs on the whole graphs.
    pub fn percolation_cap(&self) -> f64 {
        (1.0 + self.delta) * self.alpha(self.k_star - 1) * self.s
    }
}

/// Evaluates the derived constants. Errors on parameters that make the
/// closed forms meaningless rather than silently producing garbage.
pub fn derive_constants(p: &PldParams) -> Result<DerivedConstants> {
    p.validate()?;
    let beta = p.beta;
    let c = (2f64.powf(beta - 1.0) - 1.0) * ((beta - 2.0) * p.wbar / (beta - 1.0)).powf(beta - 1.0);
    let kappa = (1.0 + 2.0 * p.delta).powi(2) * 2f64.powf(5.0 - beta) * c
        / ((2f64.powf(3.0 - beta) - 1.0) * p.wbar);
    if !(c > 0.0 && kappa > 0.0) {
        return Err(Error::Parameter("derived constants must be positive".into()));
    }
    let n = p.n as f64;
    let n_gamma = n.powf(p.gamma);

    let tau1_growth = if p.simplified_tau1 {
        n
    } else {
        n.powf(p.gamma * ((3.0 - beta) * (p.d_hops as f64 - 1.0) + 1.0))
    };
    let tau1_base = 0.3 * (c * p.s * p.s / (12.0 * p.wbar)).powi(p.d_hops as i32) * tau1_growth
        * p.theta;
    let tau1 = tau1_base * p.threshold_scale;

    let to_i32 = |x: f64| {
        if x.is_finite() {
            x.clamp(-1_000_000.0, 1_000_000.0) as i32
        } else if x > 0.0 {
            1_000_000
        } else {
            -1_000_000
        }
    };
    let k_star = match p.mode {
        KStarMode::Theory => {
            let arg = n_gamma * (c * p.s * p.s / (192.0 * p.wbar * n.ln())).powf(1.0 / (3.0 - beta));
            if !(arg >= 0.0) {
                return Err(Error::Parameter(
                    "stopping-index argument must be nonnegative in theory mode".into(),
                ));
            }
            to_i32(arg.log2().floor())
        }
        KStarMode::Practical => {
            let k_floor = to_i32((n_gamma * p.s / p.slice_floor_degree).log2().floor());
            // tau2(k) >= 1 (unscaled): the slice threshold must demand at
            // least one whole witness or the 1-hop stage cannot reject fakes.
            let x_min = (16.0 * p.wbar / (c * p.s * p.s)).powf(1.0 / (3.0 - beta));
            let k_tau = to_i32(1.0 + (n_gamma / x_min).log2().floor());
            k_floor.min(k_tau)
        }
    };
    // Never slice below weight scale 1.
    let k_alpha_cap = to_i32(n_gamma.log2().floor());
    let k_star_clamped = k_star.min(k_alpha_cap).max(1) as u32;

    Ok(DerivedConstants {
        c,
        kappa,
        tau1,
        k_star,
        k_star_clamped,
        n_gamma,
        beta,
        s: p.s,
        wbar: p.wbar,
        threshold_scale: p.threshold_scale,
        delta: p.delta,
    })
}

/// One advisory condition with both sides evaluated numerically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Numeric audit of the asymptotic sufficient conditions. Advisory only:
/// matching proceeds regardless, and desk-scale instances typically fail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub conditions: Vec<ConditionCheck>,
}

impl FeasibilityReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

/// Evaluates three sufficient conditions with `wmax = sqrt(n * wbar)`:
/// the locally-tree-like bound on the first-slice neighborhood size, the seed
/// fraction lower bound, and the minimum witness depth.
pub fn feasibility_report(p: &PldParams) -> FeasibilityReport {
    let beta = p.beta;
    let n = p.n as f64;
    let c = (2f64.powf(beta - 1.0) - 1.0) * ((beta - 2.0) * p.wbar / (beta - 1.0)).powf(beta - 1.0);
    let kappa = (1.0 + 2.0 * p.delta).powi(2) * 2f64.powf(5.0 - beta) * c
        / ((2f64.powf(3.0 - beta) - 1.0) * p.wbar);
    let growth = n.powf(p.gamma * ((3.0 - beta) * (p.d_hops as f64 - 1.0) + 1.0));

    let tree_rhs = c * p.s * (2f64.powf(3.0 - beta) - 1.0) / (20.0 * 2f64.powf(3.0 - beta))
        * (c * p.s * p.s / (12.0 * kappa * kappa * p.wbar)).powi(p.d_hops as i32)
        * n
        / n.ln().powf(3.0 - beta);
    let tree = ConditionCheck {
        condition: "locally_tree_like".into(),
        lhs: growth,
        rhs: tree_rhs,
        pass: growth <= tree_rhs,
    };

    let theta_rhs = 320.0 * n.ln() / ((c * p.s * p.s / (12.0 * p.wbar)).powi(p.d_hops as i32) * growth);
    let seed = ConditionCheck {
        condition: "seed_fraction".into(),
        lhs: p.theta,
        rhs: theta_rhs,
        pass: p.theta >= theta_rhs,
    };

    let wmax = (n * p.wbar).sqrt();
    let depth_size = (1.0 / (3.0 - beta)) * (n.ln() / wmax.ln() - 1.0) + 1.0;
    let depth_strict = (4.0 - beta) / (3.0 - beta);
    let d = p.d_hops as f64;
    let depth = ConditionCheck {
        condition: "min_depth".into(),
        lhs: d,
        rhs: depth_size.max(depth_strict),
        pass: d >= depth_size && d > depth_strict,
    };

    FeasibilityReport { conditions: vec![tree, seed, depth] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_params(theta: f64) -> PldParams {
        PldParams::new(3, 10_000, 2.5, 10.0, 0.8, theta).with_gamma(0.5)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn frozen_constants() {
        // All expectations frozen from a 50-digit evaluation of the closed forms.
        let d = derive_constants(&paper_params(0.005)).unwrap();
        assert!(close(d.c, 11.127453121975563, 1e-12), "c = {}", d.c);
        assert!(close(d.kappa, 23.744688352324877, 1e-12), "kappa = {}", d.kappa);
        assert!(close(d.tau1, 0.0031352686717328624, 1e-12), "tau1 = {}", d.tau1);
        assert!(close(d.tau2(2), 0.31473190239537357, 1e-12));
        assert!(close(d.tau2(3), 0.22254906243951125, 1e-12));
    }

    #[test]
    fn alpha_boundaries() {
        let d = derive_constants(&paper_params(0.005)).unwrap();
        assert_eq!(d.alpha(0), 100.0);
        assert_eq!(d.alpha(1), 50.0);
        assert_eq!(d.alpha(2), 25.0);
        assert!(d.alpha(-1).is_infinite());
        for k in 0..20 {
            assert_eq!(d.alpha(k + 1), d.alpha(k) / 2.0);
        }
    }

    #[test]
    fn optimal_gamma_examples() {
        assert_eq!(optimal_gamma(1, 2.5), 1.0);
        assert_eq!(optimal_gamma(3, 2.5), 0.5);
        assert!((optimal_gamma(4, 2.5) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn membership_intervals() {
        let d = derive_constants(&paper_params(0.005)).unwrap();
        // k = 1 interval is [35, 90]; k = 2 interval is [17.5, 45].
        assert!(d.slice_membership(60, 1));
        assert!(!d.slice_membership(34, 1));
        assert!(d.slice_membership(35, 1) && d.slice_membership(90, 1));
        assert!(!d.slice_membership(91, 1));
        assert!(d.slice_membership(36, 1) && d.slice_membership(36, 2));
        // k = 0 has no upper bound.
        assert!(d.slice_membership(100_000, 0));
        assert!(!d.slice_membership(69, 0));
    }

    #[test]
    fn membership_spans_at_most_two_consecutive_slices() {
        let d = derive_constants(&paper_params(0.005)).unwrap();
        let kmax = 6;
        for deg in 0..=2000usize {
            let members: Vec<u32> = (0..=kmax).filter(|&k| d.slice_membership(deg, k)).collect();
            assert!(members.len() <= 2, "degree {deg} in slices {members:?}");
            if members.len() == 2 {
                assert_eq!(members[1], members[0] + 1);
            }
        }
    }

    #[test]
    fn degrees_above_floor_are_covered() {
        let d = derive_constants(&paper_params(0.005)).unwrap();
        let k_star = d.k_star_effective();
        let lo = ((1.0 - DELTA) * d.alpha(k_star as i32) * 0.8).ceil() as usize;
        for deg in lo..=5000 {
            assert!(
                (0..=k_star).any(|k| d.slice_membership(deg, k)),
                "degree {deg} uncovered"
            );
        }
    }

    #[test]
    fn stopping_index_practical_and_theory() {
        // At the n = 10^4 setting no slice threshold demands a whole witness
        // (tau2(2) = 0.31), so the practical raw index drops to 0: no cascade
        // and an uncapped percolation subgraph.
        let d = derive_constants(&paper_params(0.005)).unwrap();
        assert_eq!(d.k_star, -2);
        assert_eq!(d.k_star_effective(), 1);
        assert!(d.percolation_cap().is_infinite());
        assert!(close(d.intermediate_cap(), 1.125 * 100.0 * 0.8, 1e-12));

        let mut p = paper_params(0.005);
        p.mode = KStarMode::Theory;
        let d = derive_constants(&p).unwrap();
        assert_eq!(d.k_star, -16); // frozen: log2 of the formula is -15.91
        assert_eq!(d.k_star_effective(), 1);
        assert!(d.percolation_cap().is_infinite());

        // Denser weights push the thresholds over 1 and re-enable slicing:
        // here tau2(2) = 1.20 but tau2(3) = 0.85, so the cascade stops at 2,
        // and the percolation cap comes from alpha_1.
        let p = PldParams::new(3, 10_000, 2.5, 60.0, 1.0, 0.01).with_gamma(0.5);
        let d = derive_constants(&p).unwrap();
        assert!(d.tau2(2) > 1.0 && d.tau2(3) < 1.0);
        assert_eq!(d.k_star, 2);
        assert_eq!(d.k_star_effective(), 2);
        assert!(close(d.percolation_cap(), 1.125 * 50.0, 1e-12));
    }

    #[test]
    fn threshold_scale_is_exactly_linear() {
        let mut p = paper_params(0.01);
        let base = derive_constants(&p).unwrap();
        p.threshold_scale = 7.0;
        let scaled = derive_constants(&p).unwrap();
        for k in 1..6 {
            assert_eq!(scaled.tau2(k), 7.0 * base.tau2(k));
        }
        assert_eq!(scaled.tau1, 7.0 * base.tau1);
    }

    #[test]
    fn simplified_tau1_uses_n() {
        let mut p = paper_params(0.01);
        p.simplified_tau1 = true;
        let d = derive_constants(&p).unwrap();
        assert!(close(d.tau1, 0.0062705373434657248, 1e-12), "tau1 = {}", d.tau1);
        // At the optimal gamma the exponent form coincides with n.
        p.simplified_tau1 = false;
        let d2 = derive_constants(&p).unwrap();
        assert!(close(d.tau1, d2.tau1, 1e-9));
    }

    #[test]
    fn bad_params_error() {
        assert!(derive_constants(&PldParams::new(3, 1000, 3.5, 10.0, 0.8, 0.01)).is_err());
        assert!(derive_constants(&PldParams::new(0, 1000, 2.5, 10.0, 0.8, 0.01)).is_err());
        let mut p = paper_params(0.01);
        p.delta = 0.2;
        assert!(derive_constants(&p).is_err());
    }

    #[test]
    fn feasibility_desk_scale_fails_but_reports_numbers() {
        let rep = feasibility_report(&paper_params(0.005));
        assert_eq!(rep.conditions.len(), 3);
        let tree = &rep.conditions[0];
        assert!(close(tree.lhs, 10_000.0, 1e-12));
        assert!(close(tree.rhs, 5.009702107907769e-10, 1e-9), "rhs = {}", tree.rhs);
        assert!(!tree.pass);
        let seed = &rep.conditions[1];
        assert!(close(seed.rhs, 1410.0748106238379, 1e-9), "rhs = {}", seed.rhs);
        assert!(!seed.pass);
        let depth = &rep.conditions[2];
        assert_eq!(depth.lhs, 3.0);
        // Strict bound (4-beta)/(3-beta) = 3 is not met by D = 3.
        assert!(!depth.pass);
        assert!(!rep.all_pass());
        // Serializes as {condition, lhs, rhs, pass} triples.
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("locally_tree_like") && json.contains("\"pass\""));
    }

    #[test]
    fn feasibility_full_seeding_passes_when_rhs_below_one() {
        let p = PldParams::new(3, 1_000_000, 2.5, 100.0, 1.0, 1.0).with_gamma(0.5);
        let rep = feasibility_report(&p);
        let seed = &rep.conditions[1];
        assert!(seed.rhs <= 1.0, "rhs = {}", seed.rhs);
        assert!(seed.pass);
    }

    #[test]
    fn feasibility_depth_below_minimum_fails() {
        let p = PldParams::new(2, 10_000, 2.5, 10.0, 0.8, 0.01).with_gamma(0.49);
        let rep = feasibility_report(&p);
        assert!(!rep.conditions[2].pass);
    }
}
