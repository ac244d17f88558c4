"""Fitting and statistics for monitor traces.

Least-squares backends come from scipy/numpy; the models and guesses are
local. Frequencies are normalized internally before fitting so the optimizer
works on O(1) quantities even at GHz carriers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .config import MaterialConfig, ResonatorConfig
from .errors import ShiftRangeError
from .resonator import baseline_frequency, fractional_shift, max_fractional_shift


@dataclass
class FitResult:
    params: dict[str, float]
    sigmas: dict[str, float]
    converged: bool
    rms_residual: float
    message: str = ""

    def __getitem__(self, key: str) -> float:
        return self.params[key]


def _covariance_sigmas(jac: np.ndarray, residuals: np.ndarray,
                       names: list[str]) -> dict[str, float]:
    dof = max(len(residuals) - jac.shape[1], 1)
    try:
        cov = np.linalg.inv(jac.T @ jac) * float(residuals @ residuals) / dof
        return {n: float(math.sqrt(max(cov[i, i], 0.0))) for i, n in enumerate(names)}
    except np.linalg.LinAlgError:
        return {n: float("nan") for n in names}


def fit_lorentzian(f: np.ndarray, y: np.ndarray) -> FitResult:
    """Fit |S21|^2 = offset + A*hw^2/((f-f_res)^2 + hw^2).

    Returns f_res, Q (= f_res/2hw), amplitude, offset with 1-sigma
    uncertainties. A trace without a usable peak is returned with
    converged=False rather than raising.
    """
    f = np.asarray(f, dtype=float)
    y = np.asarray(y, dtype=float)
    if f.shape != y.shape or f.size < 5:
        raise ValueError("need matching arrays with at least 5 samples")
    f_ref = float(f[np.argmax(y)])
    span = float(f.max() - f.min())
    if span <= 0:
        raise ValueError("frequency grid has zero span")
    u = (f - f_ref) / span

    off0 = float(np.median(np.concatenate([y[: max(3, y.size // 20)],
                                           y[-max(3, y.size // 20):]])))
    amp0 = float(y.max() - off0)
    above = y > off0 + 0.5 * amp0
    hw0 = max(float(np.count_nonzero(above)) / y.size * 0.5, 1.0 / y.size)

    def model(p, uu):
        u0, hw, amp, off = p
        return off + amp * hw**2 / ((uu - u0) ** 2 + hw**2)

    def resid(p):
        return model(p, u) - y

    bad = FitResult({"f_res": f_ref, "Q": 0.0, "amplitude": amp0, "offset": off0},
                    {}, False, float(np.std(y)), "no usable peak")
    if amp0 <= 0 or not np.isfinite(amp0):
        return bad
    try:
        sol = least_squares(resid, x0=[0.0, hw0, amp0, off0],
                            xtol=3e-16, ftol=3e-16, gtol=3e-16, max_nfev=4000)
    except Exception as exc:  # singular steps on degenerate traces
        bad.message = str(exc)
        return bad
    u0, hw, amp, off = sol.x
    hw = abs(hw)
    f_res = f_ref + u0 * span
    hw_hz = hw * span
    ok = (sol.status > 0 and hw_hz > 0 and amp > 0
          and f.min() <= f_res <= f.max()
          # peak must actually rise above the residual scatter
          and amp > 5.0 * float(np.sqrt(np.mean(sol.fun**2))))
    sig = _covariance_sigmas(sol.jac, sol.fun, ["u0", "hw", "amplitude", "offset"])
    return FitResult(
        params={"f_res": float(f_res), "Q": float(f_res / (2.0 * hw_hz)),
                "amplitude": float(amp), "offset": float(off),
                "fwhm": float(2.0 * hw_hz)},
        sigmas={"f_res": sig.get("u0", float("nan")) * span,
                "fwhm": 2.0 * sig.get("hw", float("nan")) * span,
                "amplitude": sig.get("amplitude", float("nan")),
                "offset": sig.get("offset", float("nan"))},
        converged=bool(ok),
        rms_residual=float(np.sqrt(np.mean(sol.fun**2))),
        message=sol.message)


def fit_poly3(x: np.ndarray, y: np.ndarray) -> FitResult:
    """Least-squares cubic y = c0 + c1 x + c2 x^2 + c3 x^3 (raw coefficients)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.unique(x).size < 4:
        raise ValueError("cubic fit needs at least 4 distinct abscissae")
    # Scale to [-1, 1] for conditioning, then map coefficients back exactly.
    xm = 0.5 * (x.max() + x.min())
    xs = 0.5 * (x.max() - x.min())
    t = (x - xm) / xs
    V = np.vander(t, 4, increasing=True)
    coef_t, res, rank, _ = np.linalg.lstsq(V, y, rcond=None)
    if rank < 4:
        raise ValueError("degenerate abscissae for a cubic fit")
    # c(x) = sum_k coef_t[k] ((x-xm)/xs)^k -> expand binomially
    c = np.zeros(4)
    for k, a in enumerate(coef_t):
        for j in range(k + 1):
            c[j] += a * math.comb(k, j) * ((-xm) ** (k - j)) / (xs ** k)
    fitted = V @ coef_t
    rms = float(np.sqrt(np.mean((fitted - y) ** 2)))
    return FitResult({f"c{i}": float(c[i]) for i in range(4)}, {}, True, rms)


@dataclass
class CorrectedShift:
    df: np.ndarray
    in_range: np.ndarray = field(repr=False)

    @property
    def all_in_range(self) -> bool:
        return bool(np.all(self.in_range))


def correct_baseline(f_meas: np.ndarray, T: np.ndarray, cfg: ResonatorConfig,
                     T_valid: tuple[float, float] = (5.0, 35.0)) -> CorrectedShift:
    """Film-induced shift: measured frequency minus the bare-cavity baseline.

    in_range flags samples inside the baseline's fitted temperature window;
    outside it the correction is extrapolated and should be treated as
    qualitative.
    """
    f_meas = np.asarray(f_meas, dtype=float)
    T = np.asarray(T, dtype=float)
    base = np.array([baseline_frequency(t, cfg) for t in np.atleast_1d(T)])
    in_range = (np.atleast_1d(T) >= T_valid[0]) & (np.atleast_1d(T) <= T_valid[1])
    return CorrectedShift(f_meas - base, in_range)


def invert_thickness(frac_shift: float, phase: str, morphology: str,
                     material: MaterialConfig, cfg: ResonatorConfig,
                     d_max: float = 40e-6) -> float:
    """Thickness whose fractional shift matches frac_shift, by bisection.

    frac_shift must lie in (asymptote, 0]; beyond the participation
    asymptote no thickness reproduces it and ShiftRangeError is raised.
    Terminates below 0.001 nm interval width.
    """
    if frac_shift > 0:
        raise ShiftRangeError(f"positive shift {frac_shift:.3e} not invertible")
    if frac_shift == 0.0:
        return 0.0
    bound = max_fractional_shift(phase, morphology, material, cfg)
    if frac_shift <= bound:
        raise ShiftRangeError(
            f"shift {frac_shift:.6e} at/beyond the thick-film asymptote {bound:.6e}")
    lo, hi = 0.0, d_max
    f_hi = fractional_shift(hi, phase, morphology, material, cfg)
    while f_hi > frac_shift:  # not yet bracketed: thicker than d_max
        hi *= 2.0
        if hi > 1.0:
            raise ShiftRangeError("no bracket below 1 m; shift too close to asymptote")
        f_hi = fractional_shift(hi, phase, morphology, material, cfg)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12:
            break
        if fractional_shift(mid, phase, morphology, material, cfg) <= frac_shift:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def fit_exponential(t: np.ndarray, y: np.ndarray) -> FitResult:
    """Fit y = y_inf + A exp(-t/tau), parametrized in log tau.

    The guess comes from the tail level and a log-linear regression; the
    log-tau parametrization keeps tau positive without bounds.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size < 5:
        raise ValueError("need at least 5 samples")
    n_tail = max(3, t.size // 10)
    y_inf0 = float(np.mean(y[-n_tail:]))
    a0 = float(y[0] - y_inf0)
    if a0 == 0.0:
        a0 = float(np.max(np.abs(y - y_inf0))) or 1.0
    dev = (y - y_inf0) / a0
    usable = dev > 1e-3
    if np.count_nonzero(usable) >= 3:
        slope = np.polyfit(t[usable], np.log(dev[usable]), 1)[0]
        tau0 = -1.0 / slope if slope < 0 else (t[-1] - t[0]) / 3.0
    else:
        tau0 = (t[-1] - t[0]) / 3.0
    tau0 = float(min(max(tau0, (t[1] - t[0]) * 0.5), (t[-1] - t[0]) * 10))

    def resid(p):
        y_inf, a, log_tau = p
        return y_inf + a * np.exp(-t / math.exp(log_tau)) - y

    sol = least_squares(resid, x0=[y_inf0, a0, math.log(tau0)],
                        xtol=3e-16, ftol=3e-16, gtol=3e-16, max_nfev=4000)
    y_inf, a, log_tau = sol.x
    tau = math.exp(log_tau)
    sig = _covariance_sigmas(sol.jac, sol.fun, ["y_inf", "A", "log_tau"])
    return FitResult(
        params={"tau": float(tau), "y_inf": float(y_inf), "A": float(a)},
        sigmas={"tau": tau * sig.get("log_tau", float("nan")),
                "y_inf": sig.get("y_inf", float("nan")),
                "A": sig.get("A", float("nan"))},
        converged=bool(sol.status > 0 and np.isfinite(tau)),
        rms_residual=float(np.sqrt(np.mean(sol.fun**2))),
        message=sol.message)


def pearson_r(x: np.ndarray, y: np.ndarray, log_space: bool = True) -> float:
    """Sample Pearson correlation, by default on log10 of the inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValueError("need matching samples, at least 3")
    if log_space:
        if np.any(x <= 0) or np.any(y <= 0):
            raise ValueError("log-space correlation needs positive values")
        x = np.log10(x)
        y = np.log10(y)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("correlation undefined for a constant sample")
    return float(np.corrcoef(x, y)[0, 1])


@dataclass
class LogHistogram:
    edges: np.ndarray  # bin edges, meters
    counts: np.ndarray
    n_excluded: int    # nonpositive inputs left out


def histogram_log(values: np.ndarray, decades_per_bin: float = 0.25) -> LogHistogram:
    """Histogram on a log10 axis with fixed decade-width bins."""
    values = np.asarray(values, dtype=float)
    good = values[values > 0]
    n_excluded = int(values.size - good.size)
    if good.size == 0:
        return LogHistogram(np.array([]), np.array([], dtype=int), n_excluded)
    lo = math.floor(math.log10(good.min()) / decades_per_bin) * decades_per_bin
    hi = math.ceil(math.log10(good.max()) / decades_per_bin) * decades_per_bin
    if hi <= lo:
        hi = lo + decades_per_bin
    n_bins = int(round((hi - lo) / decades_per_bin))
    log_edges = lo + decades_per_bin * np.arange(n_bins + 1)
    counts, _ = np.histogram(np.log10(good), bins=log_edges)
    return LogHistogram(10.0 ** log_edges, counts, n_excluded)
