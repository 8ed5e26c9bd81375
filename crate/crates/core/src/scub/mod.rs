//! SCUB functionals and their convergence machinery: the classic and new
//! local functionals φ_γ(μ), fixpoint iteration certifying ρ·φ(μ) ≤ μ,
//! homogeneous optimum search, the generic lower bound from an admissible
//! majorant, and the synthetic/mixing algebra.

pub mod fixpoint;
pub mod homogeneous;
pub mod table;
pub mod tree_op;

pub use fixpoint::{iterate_monotone, IterationOutcome};

use crate::error::{Error, Result};
use crate::oracle::{partition_function, FugacityVector};
use crate::schemes::{Behaviour, BehaviourVector};
use crate::system::{PolymerId, PolymerSystem, Volume};

/// The SCUB functional families.
#[derive(Debug, Clone, PartialEq)]
pub enum LeopKind {
    /// exp(Σ_{ξ∈Γ*(γ)} μ_ξ).
    Kp,
    /// Π_{ξ∈Γ*(γ)} (1+μ_ξ).
    Dobrushin,
    /// Ξ_{Γ*(γ)}(μ).
    Fp,
    /// (1+μ_γ) · sup_ε Π_{ξ∈Γ*≠(γ)\{ε}} (1+μ_ξ).
    Reduced,
    /// (1+μ_γ) · sup_ε Ξ_{Γ*≠(γ)\{ε}}(μ).
    Returning,
    /// Per-polymer choice between the greedy and returning shapes.
    Mixing(Vec<Behaviour>),
    /// Per-polymer optimum of the mixing family: min(FP, Returning).
    MixingOptimal,
    /// Per-escape-pair interpolation; see [`leop`] for the evaluated form.
    Synthetic(BehaviourVector),
}

/// Returning-step children of γ under g: labels ξ with g(ξ, γ) = R.
fn returning_children(sys: &PolymerSystem, g: &BehaviourVector, gamma: PolymerId) -> Vec<PolymerId> {
    sys.incompatible_others(gamma)
        .members()
        .iter()
        .copied()
        .filter(|&xi| g.get(xi, gamma) == Behaviour::R)
        .collect()
}

/// Returning-step escapes of γ under g: labels ε with g(γ, ε) = R.
fn returning_escapes(sys: &PolymerSystem, g: &BehaviourVector, gamma: PolymerId) -> Vec<PolymerId> {
    sys.incompatible_others(gamma)
        .members()
        .iter()
        .copied()
        .filter(|&eps| g.get(gamma, eps) == Behaviour::R)
        .collect()
}

fn xi_of(sys: &PolymerSystem, members: Vec<PolymerId>, mu: &FugacityVector) -> Result<f64> {
    partition_function(sys, &Volume::new(members), mu)
}

/// The scalar φ_γ(μ) of the given SCUB family.
///
/// The synthetic form takes the larger of two reachable vertex states: the
/// unescaped state splits the children into the returning-step labels and
/// the rest (two independent compatible sets), the escaped state
/// additionally excludes the escape from both and carries the (1+μ_γ)
/// same-label factor, with the supremum over the reachable escapes.
pub fn leop(kind: &LeopKind, sys: &PolymerSystem, gamma: PolymerId, mu: &FugacityVector) -> Result<f64> {
    if gamma >= sys.len() {
        return Err(Error::UnknownPolymer(format!("#{gamma}")));
    }
    let others = sys.incompatible_others(gamma);
    match kind {
        LeopKind::Kp => {
            let sum: f64 = sys
                .incompatible_set(gamma)
                .members()
                .iter()
                .map(|&xi| mu.get(xi))
                .sum();
            Ok(sum.exp())
        }
        LeopKind::Dobrushin => Ok(sys
            .incompatible_set(gamma)
            .members()
            .iter()
            .map(|&xi| 1.0 + mu.get(xi))
            .product()),
        LeopKind::Fp => xi_of(sys, sys.incompatible_set(gamma).members().to_vec(), mu),
        LeopKind::Reduced => {
            if others.is_empty() {
                return Ok(1.0 + mu.get(gamma));
            }
            let full: f64 = others.members().iter().map(|&xi| 1.0 + mu.get(xi)).product();
            let sup = others
                .members()
                .iter()
                .map(|&eps| full / (1.0 + mu.get(eps)))
                .fold(f64::NEG_INFINITY, f64::max);
            Ok((1.0 + mu.get(gamma)) * sup)
        }
        LeopKind::Returning => {
            if others.is_empty() {
                return Ok(1.0 + mu.get(gamma));
            }
            let mut sup = f64::NEG_INFINITY;
            for &eps in others.members() {
                let members: Vec<_> = others
                    .members()
                    .iter()
                    .copied()
                    .filter(|&x| x != eps)
                    .collect();
                sup = sup.max(xi_of(sys, members, mu)?);
            }
            Ok((1.0 + mu.get(gamma)) * sup)
        }
        LeopKind::Mixing(choice) => {
            let b = choice
                .get(gamma)
                .copied()
                .ok_or_else(|| Error::PreconditionViolated("behaviour vector too short".into()))?;
            match b {
                Behaviour::G => leop(&LeopKind::Fp, sys, gamma, mu),
                Behaviour::R => leop(&LeopKind::Returning, sys, gamma, mu),
            }
        }
        LeopKind::MixingOptimal => {
            let fp = leop(&LeopKind::Fp, sys, gamma, mu)?;
            let ret = leop(&LeopKind::Returning, sys, gamma, mu)?;
            Ok(fp.min(ret))
        }
        LeopKind::Synthetic(g) => {
            if others.is_empty() {
                return Ok(1.0 + mu.get(gamma));
            }
            let kids = returning_children(sys, g, gamma);
            let escapes = returning_escapes(sys, g, gamma);
            let mut best = f64::NEG_INFINITY;
            if escapes.len() != others.len() {
                // Unescaped state: returning-step children and the rest
                // (including γ itself) are independently compatible.
                let rest: Vec<_> = sys
                    .incompatible_set(gamma)
                    .members()
                    .iter()
                    .copied()
                    .filter(|x| !kids.contains(x))
                    .collect();
                best = best.max(xi_of(sys, kids.clone(), mu)? * xi_of(sys, rest, mu)?);
            }
            if !escapes.is_empty() {
                let mut sup = f64::NEG_INFINITY;
                for &eps in &escapes {
                    let k_part: Vec<_> =
                        kids.iter().copied().filter(|&x| x != eps).collect();
                    let rest: Vec<_> = others
                        .members()
                        .iter()
                        .copied()
                        .filter(|&x| x != eps && !kids.contains(&x))
                        .collect();
                    sup = sup.max(xi_of(sys, k_part, mu)? * xi_of(sys, rest, mu)?);
                }
                best = best.max((1.0 + mu.get(gamma)) * sup);
            }
            Ok(best)
        }
    }
}

/// Synthetic functional with the roles of the two behaviour sets
/// exchanged: the children split by the escape set and the supremum over
/// the returning-step children. Kept alongside the evaluated form because
/// the towards-G substitution monotonicity is a property of this
/// arrangement and is checked against it.
pub fn leop_synthetic_transposed(
    g: &BehaviourVector,
    sys: &PolymerSystem,
    gamma: PolymerId,
    mu: &FugacityVector,
) -> Result<f64> {
    let others = sys.incompatible_others(gamma);
    if others.is_empty() {
        return Ok(1.0 + mu.get(gamma));
    }
    let kids = returning_children(sys, g, gamma);
    let escapes = returning_escapes(sys, g, gamma);
    let mut best = f64::NEG_INFINITY;
    if escapes.len() != others.len() {
        let rest: Vec<_> = sys
            .incompatible_set(gamma)
            .members()
            .iter()
            .copied()
            .filter(|x| !escapes.contains(x))
            .collect();
        best = best.max(xi_of(sys, escapes.clone(), mu)? * xi_of(sys, rest, mu)?);
    }
    if !escapes.is_empty() {
        let mut sup = f64::NEG_INFINITY;
        for &eps in &kids {
            let e_part: Vec<_> = escapes.iter().copied().filter(|&x| x != eps).collect();
            let rest: Vec<_> = others
                .members()
                .iter()
                .copied()
                .filter(|&x| x != eps && !escapes.contains(&x))
                .collect();
            sup = sup.max(xi_of(sys, e_part, mu)? * xi_of(sys, rest, mu)?);
        }
        if sup > f64::NEG_INFINITY {
            best = best.max((1.0 + mu.get(gamma)) * sup);
        }
    }
    if best == f64::NEG_INFINITY {
        best = 0.0;
    }
    Ok(best)
}

/// φ(μ) for every polymer.
pub fn leop_all(kind: &LeopKind, sys: &PolymerSystem, mu: &FugacityVector) -> Result<Vec<f64>> {
    (0..sys.len()).map(|g| leop(kind, sys, g, mu)).collect()
}

/// Result of the fixpoint certification of ρ·φ(μ) ≤ μ.
#[derive(Debug, Clone)]
pub struct FixpointReport {
    pub converged: bool,
    pub iterations: usize,
    /// The least fixpoint μ* when converged.
    pub limit: Option<FugacityVector>,
    /// Equal to the limit when converged: μ* itself witnesses ρ·φ(μ*) ≤ μ*.
    pub witness_mu: Option<FugacityVector>,
    /// Strict-inequality variant: ρ·φ(μ̂) < μ̂ at μ̂ slightly above μ*.
    pub strict: bool,
}

/// Iterates μ ← ρ·φ(μ) from 0. Monotone nondecreasing; convergence below
/// the divergence guard certifies the SCUB, the limit being its witness.
pub fn scub_holds(kind: &LeopKind, sys: &PolymerSystem, rho: &FugacityVector) -> Result<FixpointReport> {
    if !rho.is_nonnegative() {
        return Err(Error::PreconditionViolated("rho must be >= 0".into()));
    }
    let map = |mu: &[f64]| -> Result<Vec<f64>> {
        let muv = FugacityVector::from_values(mu.to_vec());
        let phi = leop_all(kind, sys, &muv)?;
        Ok(phi
            .iter()
            .enumerate()
            .map(|(g, p)| rho.get(g) * p)
            .collect())
    };
    let outcome = iterate_monotone(
        map,
        vec![0.0; sys.len()],
        fixpoint::MAX_ITERATIONS,
        fixpoint::DIVERGENCE_GUARD,
        fixpoint::REL_TOL,
    )?;
    if !outcome.converged {
        return Ok(FixpointReport {
            converged: false,
            iterations: outcome.iterations,
            limit: None,
            witness_mu: None,
            strict: false,
        });
    }
    let limit = FugacityVector::from_values(outcome.value.clone());
    // Strictness: bump the fixpoint and ask for a strict decrease.
    let delta = 1e-6;
    let bumped: Vec<f64> = outcome.value.iter().map(|v| v * (1.0 + delta) + 1e-9).collect();
    let phi = leop_all(kind, sys, &FugacityVector::from_values(bumped.clone()))?;
    let strict = phi
        .iter()
        .enumerate()
        .all(|(g, p)| rho.get(g) * p < bumped[g]);
    Ok(FixpointReport {
        converged: true,
        iterations: outcome.iterations,
        limit: Some(limit.clone()),
        witness_mu: Some(limit),
        strict,
    })
}

/// Iterates μ ← ρ·φ(μ) from an arbitrary starting vector (used to check
/// the decreasing-point behaviour from a witness).
pub fn iterate_from(
    kind: &LeopKind,
    sys: &PolymerSystem,
    rho: &FugacityVector,
    start: &FugacityVector,
    max_iter: usize,
) -> Result<IterationOutcome> {
    let map = |mu: &[f64]| -> Result<Vec<f64>> {
        let muv = FugacityVector::from_values(mu.to_vec());
        let phi = leop_all(kind, sys, &muv)?;
        Ok(phi
            .iter()
            .enumerate()
            .map(|(g, p)| rho.get(g) * p)
            .collect())
    };
    iterate_monotone(
        map,
        start.values().to_vec(),
        max_iter,
        fixpoint::DIVERGENCE_GUARD,
        fixpoint::REL_TOL,
    )
}

/// Largest homogeneous ρ admitted by the SCUB shape at `gamma`:
/// max over μ ≥ 0 of μ / φ_γ(μ·1), found by golden-section search on the
/// unimodal ratio and polished by bisection on the finite-difference
/// stationarity condition. Falls back to a dense grid scan if the bracket
/// refuses to form.
pub fn optimal_rho(kind: &LeopKind, sys: &PolymerSystem, gamma: PolymerId) -> Result<f64> {
    let ratio = |mu: f64| -> Result<f64> {
        if mu <= 0.0 {
            return Ok(0.0);
        }
        let m = FugacityVector::homogeneous(sys, mu);
        Ok(mu / leop(kind, sys, gamma, &m)?)
    };
    // Bracket the maximum: grow until the ratio decreases.
    let mut hi = 1.0;
    let mut grow = 0;
    while ratio(hi)? > ratio(hi * 0.5)? {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::NonUnimodal);
        }
    }
    let (mut a, mut b) = (0.0, hi);
    let phi_inv = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi_inv * (b - a);
    let mut x2 = a + phi_inv * (b - a);
    let mut f1 = ratio(x1)?;
    let mut f2 = ratio(x2)?;
    for _ in 0..200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi_inv * (b - a);
            f2 = ratio(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi_inv * (b - a);
            f1 = ratio(x1)?;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    let mut best_mu = 0.5 * (a + b);
    // Bisection on the sign change of the finite-difference derivative.
    let h = 1e-7;
    let deriv = |mu: f64| -> Result<f64> { Ok((ratio(mu + h)? - ratio(mu - h)?) / (2.0 * h)) };
    let (mut lo, mut hi2) = ((best_mu - 1e-3).max(h * 2.0), best_mu + 1e-3);
    if deriv(lo)? > 0.0 && deriv(hi2)? < 0.0 {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi2);
            if deriv(mid)? > 0.0 {
                lo = mid;
            } else {
                hi2 = mid;
            }
        }
        best_mu = 0.5 * (lo + hi2);
    }
    let candidates = [best_mu, 0.5 * (a + b)];
    let mut best: f64 = 0.0;
    for c in candidates {
        best = best.max(ratio(c)?);
    }
    // Defensive fallback: a coarse scan must not beat the refined optimum.
    let mut scan_best: f64 = 0.0;
    let mut mu = 0.0;
    while mu <= hi {
        mu += 1e-4 * hi.max(1.0);
        scan_best = scan_best.max(ratio(mu)?);
    }
    if scan_best > best + 1e-9 {
        return Err(Error::NonUnimodal);
    }
    Ok(best)
}

/// Generic lower bound: (ν_γ − ρ_γ)/ν_γ (1 when ν_γ = 0) for the limiting
/// one-polymer ratio at −ρ, given an admissible majorant ν.
pub fn generic_scub_bound(
    sys: &PolymerSystem,
    rho: &FugacityVector,
    nu: &FugacityVector,
) -> Result<Vec<f64>> {
    if !rho.is_nonnegative() || !rho.le(nu) {
        return Err(Error::PreconditionViolated("need 0 <= rho <= nu".into()));
    }
    Ok((0..sys.len())
        .map(|g| {
            let n = nu.get(g);
            if n == 0.0 {
                1.0
            } else {
                (n - rho.get(g)) / n
            }
        })
        .collect())
}

/// Brute-force admissibility sweep: Ξ_Λ(−ρ) > 0 for every Λ ⊆ P.
pub fn admissible_sweep(sys: &PolymerSystem, rho: &FugacityVector) -> Result<bool> {
    let n = sys.len();
    if n > 20 {
        return Err(Error::TooLarge { size: n, cap: 20 });
    }
    let neg = rho.negated();
    for mask in 0u64..(1u64 << n) {
        let members: Vec<PolymerId> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let xi = partition_function(sys, &Volume::new(members), &neg)?;
        if xi <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Switches a behaviour vector to all-G on the pairs whose first
/// coordinate is `gamma` (the substitution step of the towards-G
/// monotonicity).
pub fn gify_first_coordinate(
    sys: &PolymerSystem,
    g: &BehaviourVector,
    gamma: PolymerId,
) -> BehaviourVector {
    let mut out = g.clone();
    for &eps in sys.incompatible_others(gamma).members() {
        out.set(gamma, eps, Behaviour::G);
    }
    out
}

/// The per-polymer projection used to compare a synthetic behaviour with a
/// mixing one: G where some escape pair of the polymer is greedy, R where
/// all of them return.
pub fn mixing_projection(sys: &PolymerSystem, g: &BehaviourVector) -> Vec<Behaviour> {
    (0..sys.len())
        .map(|gamma| {
            let others = sys.incompatible_others(gamma);
            let all_r = !others.is_empty()
                && others
                    .members()
                    .iter()
                    .all(|&eps| g.get(gamma, eps) == Behaviour::R);
            if all_r {
                Behaviour::R
            } else {
                Behaviour::G
            }
        })
        .collect()
}

/// Report of the synthetic/mixing algebra checks on one instance.
#[derive(Debug, Clone, Default)]
pub struct MixingReport {
    pub failures: Vec<String>,
}

impl MixingReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies, at the given μ and behaviour vector:
/// (i) the all-G/all-R reductions of the mixing and synthetic forms to the
/// FP and returning forms; (ii) the towards-G substitution monotonicity of
/// the transposed synthetic arrangement; (iii) submultiplicativity of Ξ
/// over disjoint volumes with its equality condition; (iv) the two-step
/// domination chain relating a synthetic behaviour to its mixing
/// projection.
pub fn mixing_reduction_check(
    sys: &PolymerSystem,
    mu: &FugacityVector,
    g: &BehaviourVector,
) -> Result<MixingReport> {
    let mut failures = Vec::new();
    let tol = 1e-10;

    // (i) Reductions at the extremes.
    let all_g_mix = LeopKind::Mixing(vec![Behaviour::G; sys.len()]);
    let all_r_mix = LeopKind::Mixing(vec![Behaviour::R; sys.len()]);
    let all_g_syn = LeopKind::Synthetic(BehaviourVector::all_g(sys));
    let all_r_syn = LeopKind::Synthetic(BehaviourVector::all_r(sys));
    for gamma in 0..sys.len() {
        let fp = leop(&LeopKind::Fp, sys, gamma, mu)?;
        let ret = leop(&LeopKind::Returning, sys, gamma, mu)?;
        for (kind, expect, name) in [
            (&all_g_mix, fp, "mixing all-G vs FP"),
            (&all_r_mix, ret, "mixing all-R vs returning"),
            (&all_g_syn, fp, "synthetic all-G vs FP"),
            (&all_r_syn, ret, "synthetic all-R vs returning"),
        ] {
            let v = leop(kind, sys, gamma, mu)?;
            if (v - expect).abs() > tol * expect.abs().max(1.0) {
                failures.push(format!("{name} at polymer {gamma}: {v} vs {expect}"));
            }
        }
        let v = leop_synthetic_transposed(&BehaviourVector::all_g(sys), sys, gamma, mu)?;
        if (v - fp).abs() > tol * fp.abs().max(1.0) {
            failures.push(format!("transposed synthetic all-G vs FP at {gamma}"));
        }
        let v = leop_synthetic_transposed(&BehaviourVector::all_r(sys), sys, gamma, mu)?;
        if (v - ret).abs() > tol * ret.abs().max(1.0) {
            failures.push(format!("transposed synthetic all-R vs returning at {gamma}"));
        }
    }

    // (ii) Towards-G monotonicity of the transposed arrangement: switching
    // one polymer's first-coordinate pairs to G never increases it, under
    // the hypothesis that not all of its escapes were returning.
    for gamma in 0..sys.len() {
        let escapes = returning_escapes(sys, g, gamma);
        if escapes.len() == sys.incompatible_others(gamma).len() {
            continue;
        }
        let g2 = gify_first_coordinate(sys, g, gamma);
        for xi in 0..sys.len() {
            let before = leop_synthetic_transposed(g, sys, xi, mu)?;
            let after = leop_synthetic_transposed(&g2, sys, xi, mu)?;
            if after > before + tol * before.abs().max(1.0) {
                failures.push(format!(
                    "towards-G monotonicity broken at polymer {xi} when G-ifying {gamma}: {before} -> {after}"
                ));
            }
        }
    }

    // (iii) Submultiplicativity with the equality condition, over all
    // disjoint volume pairs of small systems.
    if sys.len() <= 8 {
        let n = sys.len();
        for m1 in 0u64..(1 << n) {
            for m2 in 0u64..(1 << n) {
                if m1 & m2 != 0 {
                    continue;
                }
                let v1 = Volume::new((0..n).filter(|&i| m1 >> i & 1 == 1).collect());
                let v2 = Volume::new((0..n).filter(|&i| m2 >> i & 1 == 1).collect());
                let x1 = partition_function(sys, &v1, mu)?;
                let x2 = partition_function(sys, &v2, mu)?;
                let xu = partition_function(sys, &v1.union(&v2), mu)?;
                if x1 * x2 < xu - tol * xu.abs().max(1.0) {
                    failures.push(format!("submultiplicativity broken on {v1:?} {v2:?}"));
                }
                let equal = (x1 * x2 - xu).abs() <= tol * xu.abs().max(1.0);
                // A vanishing side forces equality; in general equality
                // holds exactly when no weighted cross-incompatibility
                // links the two volumes.
                let trivial = |v: &Volume| {
                    v.is_empty() || v.members().iter().all(|&i| mu.get(i) == 0.0)
                };
                if (trivial(&v1) || trivial(&v2)) && !equal {
                    failures.push(format!(
                        "vanishing side without equality on {v1:?} {v2:?}"
                    ));
                }
                let cross = v1.members().iter().any(|&x| {
                    mu.get(x) > 0.0
                        && v2
                            .members()
                            .iter()
                            .any(|&y| mu.get(y) > 0.0 && sys.incompatible(x, y))
                });
                if equal == cross {
                    failures.push(format!(
                        "equality characterisation broken on {v1:?} {v2:?}: equal={equal}"
                    ));
                }
            }
        }
    }

    // (iv) Two-step domination: the transposed functional decreases
    // towards the projected per-polymer image, which the mixing functional
    // dominates.
    let u = mixing_projection(sys, g);
    let i_u = BehaviourVector::from_polymer_choice(sys, |p| u[p]);
    let mix = LeopKind::Mixing(u.clone());
    for gamma in 0..sys.len() {
        let lhs = leop_synthetic_transposed(g, sys, gamma, mu)?;
        let mid = leop_synthetic_transposed(&i_u, sys, gamma, mu)?;
        let rhs = leop(&mix, sys, gamma, mu)?;
        if lhs < mid - tol * mid.abs().max(1.0) {
            failures.push(format!(
                "transposed synthetic below its projected image at {gamma}: {lhs} vs {mid}"
            ));
        }
        if mid > rhs + tol * rhs.abs().max(1.0) {
            failures.push(format!(
                "projected image above the mixing form at {gamma}: {mid} vs {rhs}"
            ));
        }
    }

    Ok(MixingReport { failures })
}

/// Largest homogeneous r with a certified fixpoint for the given kind,
/// located by bisection with geometric-extrapolation certificates.
pub fn critical_homogeneous_rho(
    kind: &LeopKind,
    sys: &PolymerSystem,
    r_hi: f64,
    steps: usize,
) -> Result<f64> {
    let feasible = |r: f64| -> Result<bool> {
        let map = |mu: &[f64]| -> Result<Vec<f64>> {
            let muv = FugacityVector::from_values(mu.to_vec());
            Ok(leop_all(kind, sys, &muv)?.iter().map(|p| r * p).collect())
        };
        fixpoint::certified_feasible(map, sys.len(), 400, 1e6, 1e-9)
    };
    let (mut lo, mut hi) = (0.0, r_hi);
    if feasible(hi)? {
        return Ok(hi);
    }
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Exhaustive synthetic-vs-mixing homogeneous optima on a small system:
/// max over all pair behaviours of the synthetic critical r against max
/// over all polymer behaviours of the mixing critical r.
pub fn synthetic_vs_mixing_optima(sys: &PolymerSystem, steps: usize) -> Result<(f64, f64)> {
    let pairs = sys.escape_pairs();
    if pairs.len() > 14 {
        return Err(Error::TooLarge {
            size: pairs.len(),
            cap: 14,
        });
    }
    let mut best_syn: f64 = 0.0;
    for mask in 0u64..(1 << pairs.len()) {
        let mut g = BehaviourVector::all_g(sys);
        for (i, p) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.set(p.gamma, p.eps, Behaviour::R);
            }
        }
        let r = critical_homogeneous_rho(&LeopKind::Synthetic(g), sys, 1.0, steps)?;
        best_syn = best_syn.max(r);
    }
    let mut best_mix: f64 = 0.0;
    for mask in 0u64..(1 << sys.len()) {
        let choice: Vec<Behaviour> = (0..sys.len())
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Behaviour::R
                } else {
                    Behaviour::G
                }
            })
            .collect();
        let r = critical_homogeneous_rho(&LeopKind::Mixing(choice), sys, 1.0, steps)?;
        best_mix = best_mix.max(r);
    }
    Ok((best_syn, best_mix))
}

/// Escaping-series bound: for every escape pair (γ, ε) and truncation
/// order m ≤ n_max, ρ_γ · Σ_{n≤m} ... (γ, ρ, exclude ε) stays below the
/// witness μ_γ.
pub fn escaping_series_bound_check(
    sys: &PolymerSystem,
    rho: &FugacityVector,
    witness: &FugacityVector,
    n_max: usize,
    edge_cap: usize,
) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for pair in sys.escape_pairs() {
        for order in 0..=n_max {
            let s = crate::oracle::truncated_pinned_series(
                sys,
                pair.gamma,
                rho,
                order,
                Some(pair.eps),
                edge_cap,
            )?;
            let bound = witness.get(pair.gamma);
            if rho.get(pair.gamma) * s > bound * (1.0 + 1e-12) + 1e-15 {
                failures.push(format!(
                    "pair ({},{}) order {order}: {} > {}",
                    sys.name(pair.gamma),
                    sys.name(pair.eps),
                    rho.get(pair.gamma) * s,
                    bound
                ));
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{hex_interior_neighbourhood, line_interior_neighbourhood};
    use crate::sampling::example_system;

    #[test]
    fn leop_shapes_on_hex_neighbourhood() {
        let (sys, g) = hex_interior_neighbourhood();
        let mu = 0.37;
        let m = FugacityVector::homogeneous(&sys, mu);
        let dob = leop(&LeopKind::Dobrushin, &sys, g, &m).unwrap();
        assert!((dob - (1.0 + mu).powi(4)).abs() < 1e-12);
        let fp = leop(&LeopKind::Fp, &sys, g, &m).unwrap();
        assert!((fp - (mu + (1.0 + mu).powi(3))).abs() < 1e-12);
        let red = leop(&LeopKind::Reduced, &sys, g, &m).unwrap();
        assert!((red - (1.0 + mu).powi(3)).abs() < 1e-12);
        let ret = leop(&LeopKind::Returning, &sys, g, &m).unwrap();
        assert!((ret - red).abs() < 1e-12, "triangle-free: returning = reduced");
    }

    #[test]
    fn leop_shapes_on_line_neighbourhood() {
        let (sys, g) = line_interior_neighbourhood();
        let mu = 0.29;
        let m = FugacityVector::homogeneous(&sys, mu);
        let dob = leop(&LeopKind::Dobrushin, &sys, g, &m).unwrap();
        assert!((dob - (1.0 + mu).powi(5)).abs() < 1e-12);
        let fp = leop(&LeopKind::Fp, &sys, g, &m).unwrap();
        assert!((fp - (mu + (1.0 + 2.0 * mu).powi(2))).abs() < 1e-12);
        let ret = leop(&LeopKind::Returning, &sys, g, &m).unwrap();
        assert!((ret - (1.0 + mu) * (1.0 + mu) * (1.0 + 2.0 * mu)).abs() < 1e-12);
        let red = leop(&LeopKind::Reduced, &sys, g, &m).unwrap();
        assert!((red - (1.0 + mu).powi(4)).abs() < 1e-12);
    }

    #[test]
    fn zero_rho_converges_immediately() {
        let sys = example_system();
        let report = scub_holds(
            &LeopKind::Dobrushin,
            &sys,
            &FugacityVector::zeros(&sys),
        )
        .unwrap();
        assert!(report.converged);
        let limit = report.limit.unwrap();
        assert!(limit.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn optimal_rho_hex_shapes() {
        let (sys, g) = hex_interior_neighbourhood();
        let dob = optimal_rho(&LeopKind::Dobrushin, &sys, g).unwrap();
        assert!((dob - 27.0 / 256.0).abs() < 1e-7, "{dob}");
        let red = optimal_rho(&LeopKind::Reduced, &sys, g).unwrap();
        assert!((red - 4.0 / 27.0).abs() < 1e-7, "{red}");
        let fp = optimal_rho(&LeopKind::Fp, &sys, g).unwrap();
        assert!((fp - 0.5 / 3.875).abs() < 1e-7, "{fp}");
    }

    #[test]
    fn scub_holds_matches_optimum() {
        // On a transitive system the interior optimum is the joint
        // critical point of the fixpoint iteration.
        let sys = crate::lattice::cycle(6).unwrap();
        let opt = optimal_rho(&LeopKind::Dobrushin, &sys, 0).unwrap();
        assert!((opt - 4.0 / 27.0).abs() < 1e-7);
        let below = scub_holds(
            &LeopKind::Dobrushin,
            &sys,
            &FugacityVector::homogeneous(&sys, opt * 0.999),
        )
        .unwrap();
        assert!(below.converged && below.strict);
        let above = scub_holds(
            &LeopKind::Dobrushin,
            &sys,
            &FugacityVector::homogeneous(&sys, opt * 1.001),
        )
        .unwrap();
        assert!(!above.converged || !above.strict);

        // Below the interior optimum the heterogeneous neighbourhood
        // system converges as well (the centre is the binding vertex).
        let (nb, g) = hex_interior_neighbourhood();
        let opt = optimal_rho(&LeopKind::Dobrushin, &nb, g).unwrap();
        let report = scub_holds(
            &LeopKind::Dobrushin,
            &nb,
            &FugacityVector::homogeneous(&nb, opt * 0.999),
        )
        .unwrap();
        assert!(report.converged);
    }

    #[test]
    fn generic_bound_values() {
        let sys = example_system();
        let rho = FugacityVector::homogeneous(&sys, 0.05);
        let nu = FugacityVector::homogeneous(&sys, 0.1);
        let bounds = generic_scub_bound(&sys, &rho, &nu).unwrap();
        for b in bounds {
            assert!((b - 0.5).abs() < 1e-15);
        }
        let zero = FugacityVector::zeros(&sys);
        let bounds = generic_scub_bound(&sys, &zero, &zero).unwrap();
        for b in bounds {
            assert_eq!(b, 1.0);
        }
    }

    #[test]
    fn mixing_reduction_degenerate_single_polymer() {
        let sys = PolymerSystem::new::<&str>(&["a"], &[], true).unwrap();
        let mu = FugacityVector::homogeneous(&sys, 0.4);
        let g = BehaviourVector::all_g(&sys);
        let report = mixing_reduction_check(&sys, &mu, &g).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn mixing_reduction_on_example_system() {
        let sys = example_system();
        let mu = FugacityVector::from_values(vec![0.3, 0.1, 0.25, 0.2, 0.15]);
        let mut rng = crate::sampling::rng(11);
        for _ in 0..5 {
            let g = BehaviourVector::random(&sys, &mut rng);
            let report = mixing_reduction_check(&sys, &mu, &g).unwrap();
            assert!(report.ok(), "{:?}", report.failures);
        }
    }
}
