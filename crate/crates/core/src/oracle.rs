//! Brute-force-exact computation of the partition-function quantities, the
//! deletion-contraction identity, Ursell functions and pinned-series
//! truncations. Everything here is enumeration in double precision; it is
//! the ground truth the scheme and SCUB modules are checked against.

use num_complex::Complex64;

use crate::cluster::Cluster;
use crate::enumerate::signed_connected_sum;
use crate::error::{Error, Result};
use crate::system::{PolymerId, PolymerSystem, Volume};

/// Cap on |Λ| for independent-set enumeration.
pub const DEFAULT_VOLUME_CAP: usize = 30;

/// Default truncation order for the pinned series.
pub const DEFAULT_SERIES_ORDER: usize = 6;

/// Per-polymer real weights (z, ρ or μ depending on the call site).
/// Missing polymers default to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FugacityVector {
    values: Vec<f64>,
}

impl FugacityVector {
    pub fn zeros(sys: &PolymerSystem) -> Self {
        FugacityVector {
            values: vec![0.0; sys.len()],
        }
    }

    pub fn homogeneous(sys: &PolymerSystem, v: f64) -> Self {
        FugacityVector {
            values: vec![v; sys.len()],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        FugacityVector { values }
    }

    pub fn from_names<S: AsRef<str>>(sys: &PolymerSystem, entries: &[(S, f64)]) -> Result<Self> {
        let mut values = vec![0.0; sys.len()];
        for (name, v) in entries {
            values[sys.id(name.as_ref())?] = *v;
        }
        Ok(FugacityVector { values })
    }

    pub fn get(&self, id: PolymerId) -> f64 {
        self.values.get(id).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, id: PolymerId, v: f64) {
        self.values[id] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn negated(&self) -> Self {
        FugacityVector {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        FugacityVector {
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn le(&self, other: &FugacityVector) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a <= b)
    }
}

trait Scalar: Copy {
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
}

impl Scalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
}

impl Scalar for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
}

/// Sum over independent sets of the component given by `mask`:
/// picks the lowest vertex v, splits into "without v" and "with v"
/// (excluding the closed neighbourhood of v).
fn independent_set_sum<T: Scalar>(adj: &[u64], weights: &[T], mask: u64) -> T {
    if mask == 0 {
        return T::one();
    }
    let v = mask.trailing_zeros() as usize;
    let without = independent_set_sum(adj, weights, mask & !(1 << v));
    let with = independent_set_sum(adj, weights, mask & !(1 << v) & !adj[v]);
    without.add(weights[v].mul(with))
}

fn xi_generic<T: Scalar>(sys: &PolymerSystem, volume: &Volume, weight_of: impl Fn(PolymerId) -> T) -> T {
    let members = volume.members();
    let n = members.len();
    let mut adj = vec![0u64; n];
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            if i != j && sys.incompatible(a, b) {
                adj[i] |= 1 << j;
            }
        }
    }
    let weights: Vec<T> = members.iter().map(|&m| weight_of(m)).collect();
    // Split into connected components of the loop-free graph on Λ; the
    // partition function factorises over them.
    let mut remaining: u64 = if n == 0 { 0 } else { !0u64 >> (64 - n) };
    let mut product = T::one();
    while remaining != 0 {
        let start = remaining.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v] & remaining & !comp;
            }
            comp |= next;
            frontier = next;
        }
        product = product.mul(independent_set_sum(&adj, &weights, comp));
        remaining &= !comp;
    }
    product
}

fn check_volume(sys: &PolymerSystem, volume: &Volume, cap: usize) -> Result<()> {
    if volume.len() > cap.min(64) {
        return Err(Error::TooLarge {
            size: volume.len(),
            cap: cap.min(64),
        });
    }
    if let Some(&m) = volume.members().last() {
        if m >= sys.len() {
            return Err(Error::UnknownPolymer(format!("#{m}")));
        }
    }
    Ok(())
}

/// Ξ_Λ(z): sum over compatible subsets S ⊆ Λ of Π_{γ∈S} z_γ, by
/// independent-set enumeration over the loop-free graph on Λ. Ξ_∅ = 1.
pub fn partition_function(sys: &PolymerSystem, volume: &Volume, z: &FugacityVector) -> Result<f64> {
    check_volume(sys, volume, DEFAULT_VOLUME_CAP)?;
    Ok(xi_generic(sys, volume, |m| z.get(m)))
}

/// Complex-fugacity variant of [`partition_function`].
pub fn partition_function_complex(
    sys: &PolymerSystem,
    volume: &Volume,
    z: &[Complex64],
) -> Result<Complex64> {
    check_volume(sys, volume, DEFAULT_VOLUME_CAP)?;
    Ok(xi_generic(sys, volume, |m| z[m]))
}

/// Ψ_{Λ,γ}(z) = Ξ_Λ(z) / Ξ_{Λ\{γ}}(z).
pub fn one_polymer_ratio(
    sys: &PolymerSystem,
    volume: &Volume,
    gamma: PolymerId,
    z: &FugacityVector,
) -> Result<f64> {
    if !volume.contains(gamma) {
        return Err(Error::PreconditionViolated(format!(
            "polymer #{gamma} not in the volume"
        )));
    }
    let denom = partition_function(sys, &volume.without(gamma), z)?;
    if denom == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(partition_function(sys, volume, z)? / denom)
}

/// Reduced correlation of distinct pinned polymers:
/// Ξ_{Λ \ ∪Γ*(ξ_i)}(z) / Ξ_Λ(z).
pub fn reduced_correlation(
    sys: &PolymerSystem,
    volume: &Volume,
    pins: &[PolymerId],
    z: &FugacityVector,
) -> Result<f64> {
    let mut sorted = pins.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pins.len() {
        return Err(Error::PreconditionViolated("pins must be distinct".into()));
    }
    for &p in pins {
        if !volume.contains(p) {
            return Err(Error::PreconditionViolated(format!(
                "pin #{p} not in the volume"
            )));
        }
    }
    let denom = partition_function(sys, volume, z)?;
    if denom == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let mut cut = volume.clone();
    for &p in pins {
        cut = cut.minus(&sys.incompatible_set(p));
    }
    Ok(partition_function(sys, &cut, z)? / denom)
}

/// Pinned connected function: Ξ_{Λ\Γ*(γ)}(z) / Ξ_Λ(z).
pub fn pinned_connected_function(
    sys: &PolymerSystem,
    volume: &Volume,
    gamma: PolymerId,
    z: &FugacityVector,
) -> Result<f64> {
    if !volume.contains(gamma) {
        return Err(Error::PreconditionViolated(format!(
            "polymer #{gamma} not in the volume"
        )));
    }
    let denom = partition_function(sys, volume, z)?;
    if denom == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let cut = volume.minus(&sys.incompatible_set(gamma));
    Ok(partition_function(sys, &cut, z)? / denom)
}

/// Complex variant of [`pinned_connected_function`].
pub fn pinned_connected_function_complex(
    sys: &PolymerSystem,
    volume: &Volume,
    gamma: PolymerId,
    z: &[Complex64],
) -> Result<Complex64> {
    let denom = partition_function_complex(sys, volume, z)?;
    if denom.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let cut = volume.minus(&sys.incompatible_set(gamma));
    Ok(partition_function_complex(sys, &cut, z)? / denom)
}

/// Free energy −log Ξ_Λ(z) / |Λ|.
pub fn free_energy(sys: &PolymerSystem, volume: &Volume, z: &FugacityVector) -> Result<f64> {
    if volume.is_empty() {
        return Err(Error::PreconditionViolated("volume must be nonempty".into()));
    }
    let xi = partition_function(sys, volume, z)?;
    if xi <= 0.0 {
        return Err(Error::NonPositivePartitionFunction);
    }
    Ok(-xi.ln() / volume.len() as f64)
}

/// Ursell function of a label vector's induced graph: 1 on a single vertex,
/// 0 when disconnected, otherwise the signed sum over connected spanning
/// subgraphs.
pub fn ursell(cluster: &Cluster, cap: usize) -> Result<f64> {
    if cluster.len() == 1 {
        return Ok(1.0);
    }
    if !cluster.is_cluster() {
        return Ok(0.0);
    }
    Ok(signed_connected_sum(cluster, cap)? as f64)
}

/// Ξ_Λ(z) − Ξ_{Λ\{γ}}(z) − z_γ·Ξ_{Λ\Γ*(γ)}(z); zero up to round-off.
pub fn fundamental_identity_residual(
    sys: &PolymerSystem,
    volume: &Volume,
    gamma: PolymerId,
    z: &FugacityVector,
) -> Result<f64> {
    if !volume.contains(gamma) {
        return Err(Error::PreconditionViolated(format!(
            "polymer #{gamma} not in the volume"
        )));
    }
    let whole = partition_function(sys, volume, z)?;
    let deleted = partition_function(sys, &volume.without(gamma), z)?;
    let contracted = partition_function(sys, &volume.minus(&sys.incompatible_set(gamma)), z)?;
    Ok(whole - deleted - z.get(gamma) * contracted)
}

/// (−1)^{|I|+1}·u(ξ) ≥ 0.
pub fn alternating_sign_check(cluster: &Cluster, cap: usize) -> Result<bool> {
    let u = ursell(cluster, cap)?;
    let sign = if cluster.len().is_multiple_of(2) { -1.0 } else { 1.0 };
    Ok(sign * u >= 0.0)
}

/// Volume and parameter monotonicity of the one-polymer ratio at negative
/// real fugacity: Ψ_Λ(−ρ) ≤ Ψ_{Λ'}(−ρ) for γ ∈ Λ' ⊆ Λ, and
/// Ψ_Λ(−ρ) ≤ Ψ_Λ(−ν) for 0 ≤ ν ≤ ρ.
pub fn monotonicity_check(
    sys: &PolymerSystem,
    volume: &Volume,
    sub_volume: &Volume,
    gamma: PolymerId,
    rho: &FugacityVector,
    nu: &FugacityVector,
) -> Result<bool> {
    if !sub_volume.contains(gamma) || !sub_volume.is_subset_of(volume) {
        return Err(Error::PreconditionViolated(
            "need gamma in sub-volume and sub-volume inside volume".into(),
        ));
    }
    if !nu.is_nonnegative() || !nu.le(rho) {
        return Err(Error::PreconditionViolated("need 0 <= nu <= rho".into()));
    }
    let at = |vol: &Volume, f: &FugacityVector| one_polymer_ratio(sys, vol, gamma, &f.negated());
    let big_rho = at(volume, rho)?;
    let small_rho = at(sub_volume, rho)?;
    let big_nu = at(volume, nu)?;
    let tol = 1e-12;
    Ok(big_rho <= small_rho + tol * small_rho.abs().max(1.0)
        && big_rho <= big_nu + tol * big_nu.abs().max(1.0))
}

/// Partial sum, up to order `n_max`, of the pinned series
/// Σ (1/n!) Σ_{ξ∈(P\{ε})^n} |u(γ,ξ)| Π ρ_{ξ_i}, with the full polymer set
/// when no polymer is excluded.
///
/// Vectors are grouped by multiset: a multiset with multiplicities m
/// contributes |u| Π ρ^{m_γ} / Π m_γ!.
pub fn truncated_pinned_series(
    sys: &PolymerSystem,
    gamma: PolymerId,
    rho: &FugacityVector,
    n_max: usize,
    exclude: Option<PolymerId>,
    edge_cap: usize,
) -> Result<f64> {
    if !rho.is_nonnegative() {
        return Err(Error::PreconditionViolated("rho must be >= 0".into()));
    }
    let pool: Vec<PolymerId> = (0..sys.len()).filter(|&p| Some(p) != exclude).collect();
    let mut total = 0.0;
    let mut mult = vec![0usize; pool.len()];
    // Depth-first over multisets of size <= n_max in lexicographic order.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        sys: &PolymerSystem,
        gamma: PolymerId,
        rho: &FugacityVector,
        pool: &[PolymerId],
        mult: &mut Vec<usize>,
        from: usize,
        left: usize,
        edge_cap: usize,
        total: &mut f64,
    ) -> Result<()> {
        // Weight of the current multiset.
        let mut labels = vec![gamma];
        let mut coeff = 1.0;
        for (i, &m) in mult.iter().enumerate() {
            for k in 0..m {
                labels.push(pool[i]);
                coeff *= rho.get(pool[i]) / (k + 1) as f64;
            }
        }
        let cluster = Cluster::induce(sys, &labels)?;
        if cluster.is_cluster() {
            let u = ursell(&cluster, edge_cap)?;
            *total += u.abs() * coeff;
        }
        if left == 0 {
            return Ok(());
        }
        for i in from..pool.len() {
            mult[i] += 1;
            rec(sys, gamma, rho, pool, mult, i, left - 1, edge_cap, total)?;
            mult[i] -= 1;
        }
        Ok(())
    }
    rec(
        sys, gamma, rho, &pool, &mut mult, 0, n_max, edge_cap, &mut total,
    )?;
    Ok(total)
}

/// log Ψ_{Λ,γ}(z) computed as z_γ·∫₀¹ pinned(z(α)) dα by adaptive Simpson
/// quadrature, where z(α) scales only the γ coordinate.
pub fn log_ratio_via_quadrature(
    sys: &PolymerSystem,
    volume: &Volume,
    gamma: PolymerId,
    z: &FugacityVector,
    local_tol: f64,
) -> Result<f64> {
    let f = |alpha: f64| -> Result<f64> {
        let mut za = z.clone();
        za.set(gamma, z.get(gamma) * alpha);
        pinned_connected_function(sys, volume, gamma, &za)
    };
    let integral = adaptive_simpson(&f, 0.0, 1.0, local_tol)?;
    Ok(z.get(gamma) * integral)
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &impl Fn(f64) -> Result<f64>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Telescoping product Π_i Ψ_{Λ_i, ξ_i}(z) along the given ordering of Λ.
pub fn telescoped_product(
    sys: &PolymerSystem,
    order: &[PolymerId],
    z: &FugacityVector,
) -> Result<f64> {
    let mut product = 1.0;
    let mut members: Vec<PolymerId> = Vec::new();
    for &p in order {
        members.push(p);
        let vol = Volume::new(members.clone());
        product *= one_polymer_ratio(sys, &vol, p, z)?;
    }
    Ok(product)
}
