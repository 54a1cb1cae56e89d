use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{alpha, prob_to_f64, Prob};

/// Completeness, soundness and ratio values for a parameter choice.
///
/// Values are the slack-free closed forms; callers add their own tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub beta: Prob,
    pub gamma: Prob,
    pub k: usize,
    pub alpha: f64,
    /// c′ = α/2 (k = 3 only).
    pub lin2_completeness: Option<f64>,
    /// s′ = ¼(1 − (1−β)³) (k = 3 only).
    pub lin2_soundness: Option<f64>,
    pub lin2_ratio: Option<f64>,
    pub bisection_ratio: f64,
    pub rho: f64,
    /// ρ as an exact rational, for feeding the bisection reduction.
    pub rho_exact: Prob,
}

/// Evaluates the closed forms for 0 ≤ γ < β < ½ and k ≥ 3.
///
/// k = 3: c′ = α/2, s′ = ¼(1−(1−β)³), bisection ratio
/// 2(1−(1−β)³)/((3/2)α) − 1 and ρ = 1 − (3/2)α.
/// k > 3: bisection ratio ((k−1)/k)(1−(1−β)^k)/α − (k−2)/k and ρ = 1 − 2α;
/// the 2-Lin-2 entries are left empty.
pub fn gap_report(beta: Prob, gamma: Prob, k: usize) -> Result<GapReport> {
    if k < 3 {
        return Err(Error::ArityTooSmall { arity: k, min: 3 });
    }
    if gamma < Prob::zero() {
        return Err(Error::InvalidParams(format!("gamma = {gamma} is negative")));
    }
    if gamma >= beta {
        return Err(Error::ParamOrderViolated { beta: beta.to_string(), gamma: gamma.to_string() });
    }
    if beta >= Prob::new(1, 2) {
        return Err(Error::InvalidParams(format!("beta = {beta} must be below 1/2")));
    }
    let a_exact = alpha(beta, gamma);
    let a = prob_to_f64(a_exact);
    let b = prob_to_f64(beta);
    let kf = k as f64;
    let hit = 1.0 - (1.0 - b).powi(k as i32);
    let report = if k == 3 {
        let c = a / 2.0;
        let s = hit / 4.0;
        GapReport {
            beta,
            gamma,
            k,
            alpha: a,
            lin2_completeness: Some(c),
            lin2_soundness: Some(s),
            lin2_ratio: Some(s / c),
            bisection_ratio: 2.0 * hit / (1.5 * a) - 1.0,
            rho: 1.0 - 1.5 * a,
            rho_exact: Prob::one() - Prob::new(3, 2) * a_exact,
        }
    } else {
        GapReport {
            beta,
            gamma,
            k,
            alpha: a,
            lin2_completeness: None,
            lin2_soundness: None,
            lin2_ratio: None,
            bisection_ratio: (kf - 1.0) / kf * hit / a - (kf - 2.0) / kf,
            rho: 1.0 - 2.0 * a,
            rho_exact: Prob::one() - Prob::from_integer(2) * a_exact,
        }
    };
    Ok(report)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "na".to_string(), |x| x.to_string())
}

impl GapReport {
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("beta", prob_to_f64(self.beta).to_string()),
            ("gamma", prob_to_f64(self.gamma).to_string()),
            ("k", self.k.to_string()),
            ("alpha", self.alpha.to_string()),
            ("lin2_completeness", opt(self.lin2_completeness)),
            ("lin2_soundness", opt(self.lin2_soundness)),
            ("lin2_ratio", opt(self.lin2_ratio)),
            ("bisection_ratio", self.bisection_ratio.to_string()),
            ("rho", self.rho.to_string()),
            ("rho_exact", self.rho_exact.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_rational;

    fn p(s: &str) -> Prob {
        parse_rational(s).unwrap()
    }

    #[test]
    fn small_bias_limits() {
        let r = gap_report(p("0.001"), p("0.000001"), 3).unwrap();
        assert!((r.lin2_ratio.unwrap() - 1.5).abs() < 0.005 * 1.5);
        assert!((r.bisection_ratio - 3.0).abs() < 0.005 * 3.0);
        assert!((r.lin2_ratio.unwrap() - 1.497).abs() < 5e-4);
    }

    #[test]
    fn completeness_matches_alpha() {
        let r = gap_report(p("0.1"), p("0.05"), 3).unwrap();
        assert!((r.alpha - 0.14).abs() < 1e-15);
        assert!((r.lin2_completeness.unwrap() - 0.07).abs() < 1e-15);
        assert_eq!(r.rho_exact, Prob::new(79, 100));
    }

    #[test]
    fn larger_arity_has_no_lin2_entries() {
        let r = gap_report(p("0.1"), p("0.05"), 4).unwrap();
        assert!(r.lin2_ratio.is_none());
        assert_eq!(r.rho_exact, Prob::new(72, 100));
        assert!(r.fields().iter().any(|(k, v)| *k == "lin2_ratio" && v == "na"));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(gap_report(p("0.1"), p("0.1"), 3), Err(Error::ParamOrderViolated { .. })));
        assert!(matches!(gap_report(p("0.5"), p("0.1"), 3), Err(Error::InvalidParams(_))));
        assert!(matches!(gap_report(p("0.1"), p("0"), 2), Err(Error::ArityTooSmall { .. })));
    }
}
