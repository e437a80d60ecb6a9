use crate::{Error, Result};

/// `1 − 3(1 − F_p)/2`: the guaranteed entangled-state fidelity of a complete
/// channel whose worst-case pure-state fidelity is `F_p`.
pub fn entangled_bound(pure_fidelity: f64) -> f64 {
    1.0 - 1.5 * (1.0 - pure_fidelity)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `1 − Σ_{j>e} C(r,j) p^j (1−p)^{r−j}`: the fidelity guaranteed by an
/// `e`-error-correcting code on `r` qubits when each qubit independently
/// suffers a channel `{√(1−p) I, …}` with identity weight `1 − p`.
pub fn independent_error_bound(r: usize, e: usize, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    if e > r {
        return Err(Error::param("e", format!("must not exceed r = {r}")));
    }
    let tail: f64 = (e + 1..=r)
        .map(|j| binomial(r, j) * p.powi(j as i32) * (1.0 - p).powi((r - j) as i32))
        .sum();
    Ok(1.0 - tail)
}

/// Closed-form worst-case fidelity of the three-qubit phase code with its
/// one-error recovery under independent per-qubit decoherence `γ`:
/// `1 − (3p₋²p₊ + p₋³)` with `p_± = (1 ± e^{−γ})/2`.
///
/// `p₋` is the probability that a qubit's phase has flipped; the recovery
/// fails exactly when two or three qubits flipped.
pub fn three_qubit_phase_code_fidelity(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", "must be finite and non-negative"));
    }
    let decay = (-gamma).exp();
    let p_minus = (1.0 - decay) / 2.0;
    let p_plus = (1.0 + decay) / 2.0;
    Ok(1.0 - (3.0 * p_minus * p_minus * p_plus + p_minus.powi(3)))
}
