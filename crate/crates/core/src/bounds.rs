//! Closed-form bounds on the minimal curve complex translation length
//! `L(S_{g,n})`, the branch-count arithmetic behind the lower bound, and
//! log-log slope fits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::{map_ordered, Execution};
use crate::penner::{penner_upper_bound, PennerSpec};
use crate::rational::{format_ratio, ratio, Rational};

/// Genus and puncture count of a hyperbolic surface (`2g - 2 + n > 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SurfaceSig {
    g: u64,
    n: u64,
}

impl SurfaceSig {
    pub fn new(g: u64, n: u64) -> Result<Self> {
        if 2 * g + n <= 2 {
            return Err(Error::Input(format!("S_{{{g},{n}}} is not hyperbolic (need 2g - 2 + n > 0)")));
        }
        Ok(SurfaceSig { g, n })
    }

    pub fn genus(&self) -> u64 {
        self.g
    }

    pub fn punctures(&self) -> u64 {
        self.n
    }

    /// `2 - 2g - n`.
    pub fn chi(&self) -> i64 {
        2 - 2 * self.g as i64 - self.n as i64
    }

    pub fn abs_chi(&self) -> i64 {
        self.chi().abs()
    }
}

/// Branch counts of an invariant train track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchBudget {
    /// At most `9|chi|` real branches.
    pub real: i64,
    /// At most `24|chi| - 8n` infinitesimal branches.
    pub infinitesimal: i64,
    /// Iterates needed before a measure is positive on some real branch:
    /// `6|chi| - 2n`.
    pub real_hit: i64,
}

pub fn branch_budget(sig: &SurfaceSig) -> BranchBudget {
    let chi = sig.abs_chi();
    let n = sig.n as i64;
    BranchBudget { real: 9 * chi, infinitesimal: 24 * chi - 8 * n, real_hit: 6 * chi - 2 * n }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub k: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub lower: Rational,
}

/// The iterate count as assembled from its three stages:
/// `(9αC + 6)|chi| - 2n` to be positive on every real branch, then
/// `24|chi| - 8n` more for the infinitesimal branches.
pub fn staged_iterate(sig: &SurfaceSig, alpha_c: u64) -> Result<i64> {
    let chi = sig.abs_chi();
    let n = sig.n as i64;
    let a = i64::try_from(alpha_c).map_err(|_| Error::Input("alpha_c too large".into()))?;
    let real = a
        .checked_mul(9)
        .and_then(|x| x.checked_add(6))
        .and_then(|x| x.checked_mul(chi))
        .and_then(|x| x.checked_sub(2 * n))
        .ok_or_else(|| Error::Input("iterate count overflows".into()))?;
    Ok(real + 24 * chi - 8 * n)
}

/// `k = (9αC + 30)|chi| - 10n` and `l(phi) >= 1/k`.
pub fn lower_bound_iterate(sig: &SurfaceSig, alpha_c: u64) -> Result<LowerBound> {
    if alpha_c == 0 {
        return Err(Error::Input("alpha_c must be at least 1".into()));
    }
    let chi = sig.abs_chi();
    let n = sig.n as i64;
    let a = i64::try_from(alpha_c).map_err(|_| Error::Input("alpha_c too large".into()))?;
    let k = a
        .checked_mul(9)
        .and_then(|x| x.checked_add(30))
        .and_then(|x| x.checked_mul(chi))
        .and_then(|x| x.checked_sub(10 * n))
        .ok_or_else(|| Error::Input("iterate count overflows".into()))?;
    let staged = staged_iterate(sig, alpha_c)?;
    if staged != k {
        return Err(Error::Invariant(format!("staged iterate {staged} differs from closed form {k}")));
    }
    if k <= 0 {
        return Err(Error::Contract(format!("degenerate signature: iterate count {k} is not positive")));
    }
    Ok(LowerBound { k, lower: ratio(1, k) })
}

/// `2/n`, from `n` iterates of the twist chain `psi_{g,n}` moving the last
/// curve distance 2.
pub fn upper_bound_fixed_genus(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Input("fixed-genus upper bound needs n >= 1".into()));
    }
    Ok(ratio(2, n as i64))
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn asymptotic_fit(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::Input(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some((x, y)) = points.iter().find(|(x, y)| !(x.is_finite() && y.is_finite() && *x > 0.0 && *y > 0.0)) {
        return Err(Error::Input(format!("point ({x}, {y}) is not strictly positive")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let len = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("all x coordinates coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(Fit { slope, intercept, r_squared, points: points.len() })
}

fn ser_ratio<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(q))
}

fn ser_opt_ratio<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_ratio(q)),
        None => s.serialize_none(),
    }
}

/// Lower and upper bounds for one signature.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub g: u64,
    pub n: u64,
    pub chi: i64,
    pub alpha_c: u64,
    pub branch_budget: BranchBudget,
    pub k_iterate: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub upper_fixed_genus: Option<Rational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub upper_penner: Option<Rational>,
    pub penner_m: Option<u64>,
    /// `lower <= every populated upper bound`.
    pub sandwich: bool,
    pub provenance: BTreeMap<String, String>,
}

/// Assembles the bounds for `sig`. With a Penner spec, its chi model is
/// solved for `m`; when `m >= 4` (and the surface model, if any, yields this
/// genus and puncture count) the certified Penner bound is included.
pub fn bound_report(sig: &SurfaceSig, alpha_c: u64, penner: Option<&PennerSpec>) -> Result<BoundReport> {
    let lb = lower_bound_iterate(sig, alpha_c)?;
    let mut provenance = BTreeMap::new();
    provenance.insert(
        "lower".to_string(),
        "1/k with k = (9*alpha_c + 30)|chi| - 10n iterates to reach every branch".to_string(),
    );
    provenance.insert("alpha_c".to_string(), "assumed genus-only constant (configuration input)".to_string());

    let upper_fixed_genus = if sig.n >= 1 {
        provenance.insert("upper_fixed_genus".to_string(), "2/n from the alternating twist chain psi_{g,n}".to_string());
        Some(upper_bound_fixed_genus(sig.n)?)
    } else {
        None
    };

    let mut upper_penner = None;
    let mut penner_m = None;
    if let Some(template) = penner {
        if let Some(m) = template.chi.solve(sig.chi()).filter(|&m| m >= 4) {
            let matches_surface = template
                .surface
                .is_none_or(|s| s.genus(m) == sig.g as i64 && s.punctures(m) == sig.n as i64);
            if matches_surface {
                let spec = PennerSpec { m: m as usize, ..template.clone() };
                upper_penner = Some(penner_upper_bound(&spec)?.exact_bound);
                penner_m = Some(m);
                provenance.insert(
                    "upper_penner".to_string(),
                    format!(
                        "2/(m(floor(m/2) - 1)) from the Penner vanishing certificate; chi(m) = {}m + {} is a modelling input",
                        template.chi.c1, template.chi.c0
                    ),
                );
            }
        }
    }

    let sandwich = [&upper_fixed_genus, &upper_penner].into_iter().flatten().all(|u| lb.lower <= *u);
    Ok(BoundReport {
        g: sig.g,
        n: sig.n,
        chi: sig.chi(),
        alpha_c,
        branch_budget: branch_budget(sig),
        k_iterate: lb.k,
        lower: lb.lower,
        upper_fixed_genus,
        upper_penner,
        penner_m,
        sandwich,
        provenance,
    })
}

/// Reports for a grid of signatures, sorted by `(g, n)`.
pub fn report_grid(
    mut sigs: Vec<SurfaceSig>,
    alpha_c: u64,
    penner: Option<&PennerSpec>,
    exec: Execution,
) -> Vec<Result<BoundReport>> {
    sigs.sort();
    sigs.dedup();
    map_ordered(sigs, exec, |sig| bound_report(&sig, alpha_c, penner))
}

/// One row of a Penner sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub g: Option<i64>,
    pub n: Option<i64>,
    pub chi: i64,
    pub alpha_c: u64,
    pub k_iterate: Option<i64>,
    pub lower: Option<Rational>,
    pub upper_fixed_genus: Option<Rational>,
    pub upper_penner: Option<Rational>,
    pub m: u64,
    pub r: u64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 10] =
        ["g", "n", "chi", "alpha_c", "k_iterate", "lower", "upper_fixed_genus", "upper_penner", "m", "r"];
}

/// Certifies the template at every `m` in `ms` and attaches the matching
/// lower bound wherever the surface model gives a hyperbolic signature.
/// Rows are in the order of `ms`.
pub fn penner_sweep(template: &PennerSpec, ms: Vec<u64>, alpha_c: u64, exec: Execution) -> Result<Vec<SweepRow>> {
    let rows = map_ordered(ms, exec, |m| -> Result<SweepRow> {
        let spec = PennerSpec { m: m as usize, ..template.clone() };
        let upper = penner_upper_bound(&spec)?;
        let chi = template.chi.chi(m);
        let sig = template.surface.and_then(|s| {
            let (g, n) = (s.genus(m), s.punctures(m));
            (g >= 0 && n >= 0).then(|| SurfaceSig::new(g as u64, n as u64).ok()).flatten()
        });
        let lower = sig.map(|s| lower_bound_iterate(&s, alpha_c)).transpose()?;
        Ok(SweepRow {
            g: sig.map(|s| s.g as i64),
            n: sig.map(|s| s.n as i64),
            chi,
            alpha_c,
            k_iterate: lower.as_ref().map(|l| l.k),
            lower: lower.map(|l| l.lower),
            upper_fixed_genus: sig.filter(|s| s.n >= 1).map(|s| ratio(2, s.n as i64)),
            upper_penner: Some(upper.exact_bound),
            m,
            r: template.r as u64,
        })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_validation() {
        assert!(SurfaceSig::new(1, 0).is_err());
        assert!(SurfaceSig::new(0, 2).is_err());
        assert_eq!(SurfaceSig::new(2, 3).unwrap().chi(), -5);
    }

    #[test]
    fn budget_examples() {
        let b = |g, n| {
            let b = branch_budget(&SurfaceSig::new(g, n).unwrap());
            (b.real, b.infinitesimal, b.real_hit)
        };
        assert_eq!(b(2, 0), (18, 48, 12));
        assert_eq!(b(0, 4), (18, 16, 4));
        assert_eq!(b(1, 1), (9, 16, 4));
    }

    #[test]
    fn budget_signs() {
        for g in 0..=20 {
            for n in 0..=200 {
                let Ok(sig) = SurfaceSig::new(g, n) else { continue };
                let b = branch_budget(&sig);
                assert!(b.real > 0);
                if (g, n) == (0, 3) {
                    // The pair of pants: no infinitesimal branches and no iterates needed.
                    assert_eq!((b.infinitesimal, b.real_hit), (0, 0));
                } else {
                    assert!(b.infinitesimal > 0 && b.real_hit > 0, "{g} {n}");
                }
            }
        }
    }

    #[test]
    fn lower_examples() {
        let lb = lower_bound_iterate(&SurfaceSig::new(2, 50).unwrap(), 1).unwrap();
        assert_eq!((lb.k, lb.lower), (1528, ratio(1, 1528)));
        let lb = lower_bound_iterate(&SurfaceSig::new(2, 0).unwrap(), 1).unwrap();
        assert_eq!((lb.k, lb.lower), (78, ratio(1, 78)));
        assert!(lower_bound_iterate(&SurfaceSig::new(2, 0).unwrap(), 0).is_err());
    }

    #[test]
    fn fixed_genus_examples() {
        assert_eq!(upper_bound_fixed_genus(50).unwrap(), ratio(1, 25));
        assert_eq!(upper_bound_fixed_genus(2).unwrap(), ratio(1, 1));
        assert_eq!(upper_bound_fixed_genus(1000).unwrap(), ratio(1, 500));
        assert!(upper_bound_fixed_genus(0).is_err());
    }

    #[test]
    fn fit_power_laws() {
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0, 64.0].iter().map(|&x: &f64| (x, 4.0 / (x * x))).collect();
        let fit = asymptotic_fit(&pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 4f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(asymptotic_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(asymptotic_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(asymptotic_fit(&[(-1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(asymptotic_fit(&[(2.0, 1.0), (2.0, 3.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn report_with_penner() {
        // Default model: genus m + 1, m punctures, chi = -3m.
        let template = PennerSpec::default();
        let sig = SurfaceSig::new(7, 6).unwrap();
        let report = bound_report(&sig, 1, Some(&template)).unwrap();
        assert_eq!(report.penner_m, Some(6));
        assert_eq!(report.upper_penner, Some(ratio(1, 6)));
        assert_eq!(report.upper_fixed_genus, Some(ratio(1, 3)));
        assert!(report.sandwich);
        assert!(report.provenance.contains_key("upper_penner"));
        // Same chi, different genus: no Penner bound.
        let other = bound_report(&SurfaceSig::new(1, 16).unwrap(), 1, Some(&template)).unwrap();
        assert_eq!(other.upper_penner, None);
    }

    #[test]
    fn report_json() {
        let report = bound_report(&SurfaceSig::new(2, 50).unwrap(), 1, None).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["lower"], "1/1528");
        assert_eq!(v["upper_fixed_genus"], "1/25");
        assert!(v["upper_penner"].is_null());
    }

    #[test]
    fn sweep_rows() {
        let rows = penner_sweep(&PennerSpec::default(), vec![4, 5, 6], 1, Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].upper_penner, Some(ratio(1, 6)));
        assert_eq!(rows[2].g, Some(7));
        assert_eq!(rows[2].chi, -18);
        let par = penner_sweep(&PennerSpec::default(), vec![4, 5, 6], 1, Execution::Parallel).unwrap();
        assert_eq!(rows, par);
    }
}
