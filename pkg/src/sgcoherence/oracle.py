"""Independent numerical cross-checks for the closed-form dynamics.

Three oracles live here, none of which reuses the closed forms it is meant
to validate:

``overlap_quadrature``
    Adaptive Gauss-Kronrod integration of the pointwise product of the two
    branch wavefunctions, checking the coherence formula.

``propagate_via_kernel``
    Direct convolution of the constant-force propagator with the *initial*
    packet, checking the evolved-packet closed form from first principles.

``decoherence_time_bisection``
    Bracketing/bisection root solve of C(t) = 1/e, checking the closed-form
    decay time.

The integrands oscillate; panels are laid out so every local oscillation
is sampled at least ``min_points_per_oscillation`` times, and regions that
provably contribute less than the tolerance (Gaussian tails, fast-phase
tails far from the stationary point) are replaced by explicit bounds that
are added to the reported error instead of being silently dropped.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .analytic import coherence, kinematics, packet_amplitude, regime_tau_scales
from .params import ExperimentParams, verify_branch

__all__ = [
    "QuadratureSpec",
    "QuadratureConvergenceError",
    "KernelSample",
    "overlap_quadrature",
    "propagate_via_kernel",
    "decoherence_time_bisection",
    "packet_norm_quadrature",
    "total_density_norm_quadrature",
]

# 15-point Kronrod nodes with the embedded 7-point Gauss rule (ascending).
_XGK = np.array(
    [
        -0.991455371120812639206854697526329,
        -0.949107912342758524526189684047851,
        -0.864864423359769072789712788640926,
        -0.741531185599394439863864773280788,
        -0.586087235467691130294144838258730,
        -0.405845151377397166906606412076961,
        -0.207784955007898467600689403773245,
        0.0,
        0.207784955007898467600689403773245,
        0.405845151377397166906606412076961,
        0.586087235467691130294144838258730,
        0.741531185599394439863864773280788,
        0.864864423359769072789712788640926,
        0.949107912342758524526189684047851,
        0.991455371120812639206854697526329,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
        0.204432940075298892414161999234649,
        0.190350578064785409913256402421014,
        0.169004726639267902826583426598550,
        0.140653259715525918745189590510238,
        0.104790010322250183839876322541518,
        0.063092092629978553290700663189204,
        0.022935322010529224963732008058970,
    ]
)
_WG15 = np.zeros(15)
_WG15[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]

_EPS = float(np.finfo(float).eps)

#: Hard ceiling on the initial panel count of a single integral.
_MAX_INITIAL_PANELS = 2**21

#: Panel budget used when choosing the live window of a kernel convolution.
_KERNEL_PANEL_BUDGET = 2**19

#: Nodes evaluated per integrand call while batching panels.
_CHUNK_NODES = 393216


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and resolution settings shared by the quadrature oracles.

    ``abs_tol`` is an absolute tolerance in the units of the integral
    (dimensionless for overlaps, m^(-1/2) for propagated amplitudes).
    ``max_subdivisions`` caps the number of adaptive panel splits performed
    after the initial oscillation-resolving panel layout.
    """

    abs_tol: float = 1e-9
    max_subdivisions: int = 2**20
    window_halfwidth_sigmas: float = 12.0
    min_points_per_oscillation: float = 20.0

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and math.isfinite(self.abs_tol)):
            raise ValueError("abs_tol must be positive and finite")
        if int(self.max_subdivisions) < 0:
            raise ValueError("max_subdivisions must be >= 0")
        if self.window_halfwidth_sigmas < 6.0:
            raise ValueError("window_halfwidth_sigmas must be >= 6")
        if self.min_points_per_oscillation < 8.0:
            raise ValueError("min_points_per_oscillation must be >= 8")


class QuadratureConvergenceError(RuntimeError):
    """Tolerance not reached; carries the best estimate and its error bound."""

    def __init__(self, message: str, estimate: complex, error_bound: float):
        super().__init__(
            f"{message} (best estimate {estimate!r}, error bound {error_bound:.3e})"
        )
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class KernelSample:
    """Kernel-propagated wavefunction value at one grid point."""

    z: float
    value: complex


def _gk_panels(integrand, centers: np.ndarray, halfw: np.ndarray):
    """Gauss-Kronrod 15(7) values and error estimates for a batch of panels."""
    n = centers.size
    vals = np.empty(n, dtype=complex)
    errs = np.empty(n, dtype=float)
    per_chunk = max(1, _CHUNK_NODES // 15)
    for start in range(0, n, per_chunk):
        sl = slice(start, min(n, start + per_chunk))
        c = centers[sl, None]
        h = halfw[sl, None]
        f = integrand((c + h * _XGK[None, :]).ravel()).reshape(-1, 15)
        resk = f @ _WGK
        resg = f @ _WG15
        fabs = np.abs(f)
        resabs = fabs @ _WGK
        resasc = np.abs(f - 0.5 * resk[:, None]) @ _WGK
        err = np.abs(resk - resg)
        mask = (resasc != 0.0) & (err != 0.0)
        scaled = np.empty_like(err)
        scaled[mask] = resasc[mask] * np.minimum(
            1.0, (200.0 * err[mask] / resasc[mask]) ** 1.5
        )
        scaled[~mask] = err[~mask]
        h1 = halfw[sl]
        errs[sl] = np.maximum(scaled, 50.0 * _EPS * resabs) * h1
        vals[sl] = resk * h1
    return vals, errs


def _adaptive(integrand, edges: np.ndarray, abs_tol: float, max_subdivisions: int,
              extra_error: float = 0.0, what: str = "integral"):
    """Adaptive Gauss-Kronrod integration over a fixed panel skeleton.

    ``extra_error`` is a bound on everything outside the panels (truncated
    tails); it is part of the reported error and of the convergence target.
    Raises ``QuadratureConvergenceError`` when the subdivision budget runs
    out, carrying the best estimate.
    """
    if edges.size > _MAX_INITIAL_PANELS + 1:
        raise QuadratureConvergenceError(
            f"{what}: initial panel count {edges.size - 1} exceeds the resolution budget",
            estimate=complex(0.0),
            error_bound=float("inf"),
        )
    centers = 0.5 * (edges[1:] + edges[:-1])
    halfw = 0.5 * np.diff(edges)
    if centers.size == 0:
        return 0.0 + 0.0j, extra_error, 0

    vals, errs = _gk_panels(integrand, centers, halfw)
    panel_err = float(errs.sum())
    if panel_err + extra_error <= abs_tol:
        return complex(vals.sum()), panel_err + extra_error, 0

    # Only the panel part of the error is reducible by subdividing.
    panel_target = abs_tol - extra_error
    if panel_target <= 0.0:
        raise QuadratureConvergenceError(
            f"{what}: truncation bounds alone exceed the tolerance {abs_tol:.3e}",
            estimate=complex(vals.sum()),
            error_bound=panel_err + extra_error,
        )

    # Heap-driven refinement of the worst panels.
    centers_l = list(centers)
    halfw_l = list(halfw)
    vals_l = list(vals)
    errs_l = list(errs)
    heap = [(-e, i) for i, e in enumerate(errs_l)]
    heapq.heapify(heap)
    splits = 0
    max_subdivisions = int(max_subdivisions)
    total_err = panel_err + extra_error
    while total_err > abs_tol:
        if splits >= max_subdivisions or not heap:
            estimate = complex(np.sum(np.asarray(vals_l)))
            raise QuadratureConvergenceError(
                f"{what}: tolerance {abs_tol:.3e} not reached after {splits} subdivisions",
                estimate=estimate,
                error_bound=total_err,
            )
        neg_err, idx = heapq.heappop(heap)
        if -neg_err != errs_l[idx]:
            continue  # stale heap entry
        c0, h0 = centers_l[idx], halfw_l[idx]
        h_child = 0.5 * h0
        child_c = np.array([c0 - h_child, c0 + h_child])
        child_h = np.array([h_child, h_child])
        child_v, child_e = _gk_panels(integrand, child_c, child_h)
        total_err += float(child_e.sum()) - errs_l[idx]
        splits += 1

        centers_l[idx] = child_c[0]
        halfw_l[idx] = h_child
        vals_l[idx] = child_v[0]
        errs_l[idx] = float(child_e[0])
        heapq.heappush(heap, (-errs_l[idx], idx))
        centers_l.append(child_c[1])
        halfw_l.append(h_child)
        vals_l.append(child_v[1])
        errs_l.append(float(child_e[1]))
        heapq.heappush(heap, (-errs_l[-1], len(errs_l) - 1))

    return complex(np.sum(np.asarray(vals_l))), total_err, splits


def _uniform_edges(lo: float, hi: float, wavenumber: float, min_ppo: float,
                   envelope_scale: float) -> np.ndarray:
    """Uniform panels resolving a constant-wavenumber phase and the envelope."""
    span = hi - lo
    width = 0.5 * envelope_scale
    if wavenumber > 0.0:
        width = min(width, 15.0 * 2.0 * math.pi / (min_ppo * wavenumber))
    n = max(4, int(math.ceil(span / width)))
    if n > _MAX_INITIAL_PANELS:
        raise QuadratureConvergenceError(
            f"oscillation-resolving layout needs {n} panels, over the budget",
            estimate=complex(0.0),
            error_bound=float("inf"),
        )
    return np.linspace(lo, hi, n + 1)


def _chirp_edges(lo: float, hi: float, a: float, min_ppo: float,
                 envelope_scale: float) -> np.ndarray:
    """Panels for the phase a*u^2 on [lo, hi], equally spaced in phase.

    Panel phase increments of 15*pi/min_ppo keep at least ``min_ppo``
    samples per local oscillation even at the fast edge of each panel; a
    uniform grid at half the envelope scale is merged in so slowly
    oscillating stretches still resolve the Gaussian.
    """
    dphi = 15.0 * math.pi / min_ppo
    pieces = [np.array([lo, hi])]
    # Right side 0..hi and mirrored left side 0..-lo, in |u| coordinates.
    for sign, extent in ((1.0, hi), (-1.0, -lo)):
        if extent <= 0.0:
            continue
        j_max = int(math.ceil(a * extent * extent / dphi))
        if j_max > _MAX_INITIAL_PANELS:
            raise QuadratureConvergenceError(
                f"oscillation-resolving layout needs {j_max} panels, over the budget",
                estimate=complex(0.0),
                error_bound=float("inf"),
            )
        js = np.arange(1, j_max + 1, dtype=float)
        u = np.sqrt(js * dphi / a)
        u = u[u < extent]
        pieces.append(sign * u)
    n_env = max(2, int(math.ceil((hi - lo) / (0.5 * envelope_scale))))
    n_env = min(n_env, 4096)
    pieces.append(np.linspace(lo, hi, n_env + 1))
    edges = np.unique(np.concatenate(pieces))
    return edges[(edges >= lo) & (edges <= hi)]


def _overlap_packet_args(params: ExperimentParams, t: float):
    """Scalars feeding the branch-product integrand at time t."""
    if t == 0.0:
        sigma_t = params.sigma0
        amp = (2.0 * math.pi * sigma_t**2) ** -0.25
        return {
            "amp": amp,
            "inv4s2": 1.0 / (4.0 * sigma_t**2),
            "center": 0.0,
            "a": 0.0,
            "two_a_dz": 0.0,
            "ratio2": 1.0,
        }, sigma_t, 0.0
    k = kinematics(params, t)
    sigma_t = k.sigma_t
    a = params.mass / (2.0 * params.hbar * t)
    return {
        "amp": (2.0 * math.pi * sigma_t**2) ** -0.25,
        "inv4s2": 1.0 / (4.0 * sigma_t**2),
        "center": k.delta_z_bar,
        "a": a,
        "two_a_dz": params.force * t / (2.0 * params.hbar),
        "ratio2": (params.sigma0 / sigma_t) ** 2,
    }, sigma_t, k.delta_z_bar


def overlap_quadrature(params: ExperimentParams, t: float,
                       spec: QuadratureSpec | None = None,
                       full_output: bool = False):
    """Numerical branch overlap integral of phi_+ against conj(phi_-).

    Integrates the product of the closed-form branch amplitudes over
    ``[-(dzbar + W sigma(t)), +(dzbar + W sigma(t))]`` with
    ``W = window_halfwidth_sigmas``. The product's phase oscillates at the
    cross wavenumber ``k_c = (dp/hbar)(1 + (sigma0/sigma(t))^2)``; panels
    resolve it with at least ``min_points_per_oscillation`` samples.

    Gaussian-tail stretches and, for extreme phase rates, the provably
    cancelling oscillatory remainder are replaced by explicit bounds that
    enter the reported error.

    Returns the complex overlap (with ``full_output=True``, the tuple
    ``(value, error_bound)``).
    """
    spec = spec or QuadratureSpec()
    t = float(t)
    if t < 0.0 or not math.isfinite(t):
        raise ValueError("time must be finite and >= 0")

    args, sigma_t, dzbar = _overlap_packet_args(params, t)
    tol_tail = spec.abs_tol / 8.0

    # Envelope of the product: peak * exp(-z^2 / (2 sigma_t^2)).
    sep2 = (dzbar / sigma_t) ** 2
    peak = math.exp(-min(0.5 * sep2, 700.0)) / (math.sqrt(2.0 * math.pi) * sigma_t)
    envelope_mass = peak * math.sqrt(2.0 * math.pi) * sigma_t
    if envelope_mass <= tol_tail:
        value, bound = 0.0 + 0.0j, envelope_mass
        return (value, bound) if full_output else value

    k_cross = 0.0
    if t > 0.0:
        k_cross = (params.force * t / params.hbar) * (1.0 + args["ratio2"])

    # Fast-phase short circuit: two integrations by parts bound the whole
    # integral once the cross phase is extreme, with no sampling at all.
    window = dzbar + spec.window_halfwidth_sigmas * sigma_t
    if k_cross > 0.0:
        edge = peak * math.exp(-0.5 * min(window / sigma_t, 37.0) ** 2)
        ibp = (
            2.0 * edge / k_cross
            + 2.0 * (window / sigma_t) * edge / (sigma_t * k_cross**2)
            + 2.426 * peak / (sigma_t * k_cross**2)
        )
        if ibp <= tol_tail:
            return (0.0 + 0.0j, ibp) if full_output else 0.0 + 0.0j

    # Live window: where the Gaussian envelope still matters.
    z_live = window
    tail_bound = 0.0
    for s in np.arange(1.0, spec.window_halfwidth_sigmas + dzbar / sigma_t, 0.25):
        cand = 2.0 * peak * sigma_t**2 / (s * sigma_t) * math.exp(-0.5 * s * s)
        if cand <= tol_tail:
            z_live = min(s * sigma_t, window)
            tail_bound = cand if z_live < window else 0.0
            break

    edges = _uniform_edges(-z_live, z_live, k_cross, spec.min_points_per_oscillation, sigma_t)
    integrand = lambda z: kernels.overlap_integrand(np.ascontiguousarray(z), **args)
    value, err, _ = _adaptive(
        integrand, edges, spec.abs_tol, spec.max_subdivisions,
        extra_error=tail_bound, what="overlap quadrature",
    )
    return (value, err) if full_output else value


def _kernel_tail_correction(c: float, env_c: float, denv_out: float,
                            d2env_c: float, a: float):
    """Boundary terms of the integration-by-parts series past a cut at |u| = c.

    For one side tail  T = int_c^inf g(u) exp(i a u^2) du  with outward
    envelope g (g(c) = env_c, outward slope denv_out, curvature d2env_c),
    three integrations by parts give

        T = exp(i a c^2)/(2 i a c) * [ -g(c) + L1(c) - L2(c) ] + remainder

        L1 = (g'/c - g/c^2) / (2 i a)
        L2 = -(g''/c^2 - 3 g'/c^3 + 3 g/c^4) / (4 a^2)

    Returns the bracketed correction (to add to the integral) for this side.
    """
    phase = cmath.exp(1j * a * c * c) / (2j * a * c)
    c2 = c * c
    l1 = (denv_out / c - env_c / c2) / (2j * a)
    l2 = -(d2env_c / c2 - 3.0 * denv_out / (c2 * c) + 3.0 * env_c / (c2 * c2)) / (
        4.0 * a * a
    )
    return phase * (-env_c + l1 - l2)


def _kernel_tail_remainder(c: float, zstar: float, outward: float, u_end: float,
                           a: float, sigma0: float) -> float:
    """Bound on the dropped remainder of the tail series for one side.

    The remainder after three integrations by parts is  int |L3| du  over
    |u| in [c, u_end] with

        |L3| <= (|g'''|/u^3 + 6|g''|/u^4 + 15|g'|/u^5 + 15 g/u^6) / (8 a^3)

    and the unit-peak envelope g(u) = exp(-(zstar + outward*u)^2/(4 s^2)).
    Bounded by an upper Riemann sum on a geometric grid: per cell the
    envelope and its derivative factors take their maximum and 1/u its
    value at the near end. A factor-two margin is applied.
    """
    if u_end <= c:
        return 0.0
    inv = 1.0 / (4.0 * sigma0 * sigma0)
    edges = np.geomspace(c, u_end, 33)
    x = zstar + outward * edges
    total = 0.0
    for k in range(edges.size - 1):
        u0 = edges[k]
        x0, x1 = x[k], x[k + 1]
        x_lo, x_hi = (x0, x1) if x0 <= x1 else (x1, x0)
        x_near = 0.0 if x_lo <= 0.0 <= x_hi else (x_lo if x_lo > 0.0 else x_hi)
        env_max = math.exp(-min(x_near * x_near * inv, 1400.0))
        x_hat = max(abs(x0), abs(x1))
        d1 = 2.0 * x_hat * inv                                  # |g'|/g
        d2 = 4.0 * x_hat * x_hat * inv * inv + 2.0 * inv        # |g''|/g
        d3 = 8.0 * x_hat**3 * inv**3 + 12.0 * x_hat * inv * inv  # |g'''|/g
        u2 = u0 * u0
        u3 = u2 * u0
        term = d3 / u3 + 6.0 * d2 / (u3 * u0) + 15.0 * d1 / (u3 * u2) + 15.0 / (u3 * u3)
        total += env_max * term * (edges[k + 1] - u0)
    return 2.0 * total / (8.0 * a * a * a)


def propagate_via_kernel(params: ExperimentParams, branch: int, z_grid,
                         t: float, spec: QuadratureSpec | None = None,
                         full_output: bool = False):
    """Evolve the initial packet by convolving it with the branch propagator.

    For each output position the convolution integral is taken over the
    initial-packet window ``|z'| <= W sigma0``. In the offset ``u`` from
    the phase's stationary point the integrand is exactly
    ``const * exp(-(z* + u)^2/(4 sigma0^2)) * exp(i a u^2)``; panels near
    the stationary point are integrated by oscillation-resolving
    quadrature while the fast outer stretches are summed analytically by
    an integration-by-parts series whose remainder bound joins the
    reported error.

    The result equals the closed-form evolved packet up to one global
    (z-independent) phase per time; that is what the validation checks
    assert. Returns a list of ``KernelSample`` (with ``full_output=True``,
    ``(samples, error_bounds)``).
    """
    spec = spec or QuadratureSpec()
    s = verify_branch(branch)
    t = float(t)
    if not (t > 0.0 and math.isfinite(t)):
        raise ValueError("kernel propagation requires t > 0")
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=float))

    sigma0 = params.sigma0
    inv4s02 = 1.0 / (4.0 * sigma0 * sigma0)
    hbar = params.hbar
    m = params.mass
    f = params.force
    a = m / (2.0 * hbar * t)
    b_lin = s * f * t / (2.0 * hbar)
    delta_z = f * t * t / (2.0 * m)
    mod = math.sqrt(m / (2.0 * math.pi * hbar * t)) * (2.0 * math.pi * sigma0**2) ** -0.25
    cubic = (f * t / hbar) * (f * t * t) / (24.0 * m)

    w_edge = spec.window_halfwidth_sigmas * sigma0
    # Initial packet mass beyond the window, plain absolute bound.
    beyond_window = mod * (4.0 * sigma0 / spec.window_halfwidth_sigmas) * math.exp(
        -0.25 * spec.window_halfwidth_sigmas**2
    )
    tol_tails = spec.abs_tol / 4.0

    samples: list[KernelSample] = []
    bounds = np.empty(z_grid.size)
    for i, z in enumerate(z_grid):
        zstar = z - s * delta_z
        # Kernel phase a(z-z')^2 + b(z+z') rewritten about its stationary
        # point z' = zstar: the z'-dependence reduces to a u^2, the rest is
        # this constant.
        phi0 = a * (z - zstar) ** 2 + b_lin * (zstar + z)
        const = mod * cmath.exp(1j * (phi0 - cubic - 0.25 * math.pi))

        lo_full, hi_full = -w_edge - zstar, w_edge - zstar

        # Grow the live radius until the tail-series remainder is small
        # enough or the panel budget is exhausted.
        dphi = 15.0 * math.pi / spec.min_points_per_oscillation
        radius = 8.0 * math.sqrt(math.pi / a)
        best = None
        for _ in range(200):
            lo = max(lo_full, -radius)
            hi = min(hi_full, radius)
            if lo < hi:
                rem = 0.0
                if hi < hi_full and hi > 0.0:
                    rem += mod * _kernel_tail_remainder(hi, zstar, +1.0, hi_full, a, sigma0)
                if lo > lo_full and lo < 0.0:
                    rem += mod * _kernel_tail_remainder(-lo, zstar, -1.0, -lo_full, a, sigma0)
                n_panels = a * (hi * hi + lo * lo) / dphi + (hi - lo) / (0.5 * sigma0)
                if n_panels > _KERNEL_PANEL_BUDGET and best is not None:
                    break
                best = (lo, hi, rem)
                if rem <= tol_tails:
                    break
            radius *= 1.35
            if radius > (hi_full - lo_full) + abs(zstar) + w_edge:
                if best is None:
                    best = (lo_full, hi_full, 0.0)
                break
        lo, hi, rem = best

        # Explicit boundary corrections at interior cuts.
        corr = 0.0 + 0.0j
        if hi < hi_full and hi > 0.0:
            x_c = zstar + hi
            env_c = math.exp(-x_c * x_c * inv4s02)
            denv = -2.0 * x_c * inv4s02 * env_c  # outward derivative, +u side
            d2env = (4.0 * x_c * x_c * inv4s02 * inv4s02 - 2.0 * inv4s02) * env_c
            corr += const * _kernel_tail_correction(hi, env_c, denv, d2env, a)
        if lo > lo_full and lo < 0.0:
            x_c = zstar + lo
            env_c = math.exp(-x_c * x_c * inv4s02)
            denv = 2.0 * x_c * inv4s02 * env_c  # outward derivative, -u side
            d2env = (4.0 * x_c * x_c * inv4s02 * inv4s02 - 2.0 * inv4s02) * env_c
            corr += const * _kernel_tail_correction(-lo, env_c, denv, d2env, a)

        extra = rem + beyond_window
        edges = _chirp_edges(lo, hi, a, spec.min_points_per_oscillation, sigma0)
        integrand = lambda u: kernels.kernel_integrand(
            np.ascontiguousarray(u), zstar, inv4s02, a, const
        )
        value, err, _ = _adaptive(
            integrand, edges, spec.abs_tol, spec.max_subdivisions,
            extra_error=extra, what=f"kernel convolution at z={z:.6g}",
        )
        samples.append(KernelSample(z=float(z), value=value + corr))
        bounds[i] = err

    return (samples, bounds) if full_output else samples


def decoherence_time_bisection(params: ExperimentParams, tol_rel: float = 1e-12,
                               full_output: bool = False):
    """Root of C(t) = 1/e by doubling bracket search plus bisection.

    C is monotone non-increasing with C(0) = 1, so the root is unique; the
    bracket starts at one hundredth of the smaller limiting time scale and
    doubles until the coherence drops below 1/e, then bisects until the
    bracket is narrower than ``tol_rel`` relative to the root.
    """
    if not (tol_rel > 0.0 and math.isfinite(tol_rel)):
        raise ValueError("tol_rel must be positive and finite")
    target = 1.0 / math.e
    tau1, tau2 = regime_tau_scales(params)
    t_hi = min(tau1, tau2) / 100.0
    t_lo = 0.0
    iterations = 0
    while float(coherence(params, t_hi)) > target:
        t_lo = t_hi
        t_hi *= 2.0
        iterations += 1
        if iterations > 200:
            raise RuntimeError("failed to bracket the coherence 1/e crossing")
    while (t_hi - t_lo) > tol_rel * t_hi and iterations < 200:
        mid = 0.5 * (t_lo + t_hi)
        if float(coherence(params, mid)) > target:
            t_lo = mid
        else:
            t_hi = mid
        iterations += 1
    root = 0.5 * (t_lo + t_hi)
    return (root, iterations) if full_output else root


def packet_norm_quadrature(params: ExperimentParams, branch: int, t: float,
                           spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Quadrature of |phi_s(z, t)|^2 over the packet window; should be 1.

    Returns ``(norm, error_bound)``. The integrand is the squared modulus
    of the closed-form amplitude, so this checks its normalization without
    assuming the Gaussian density formula.
    """
    spec = spec or QuadratureSpec()
    s = verify_branch(branch)
    t = float(t)
    if t < 0.0:
        raise ValueError("time must be >= 0")
    k = kinematics(params, t)
    center = s * k.delta_z_bar
    halfwidth = spec.window_halfwidth_sigmas * k.sigma_t
    edges = _uniform_edges(center - halfwidth, center + halfwidth, 0.0,
                           spec.min_points_per_oscillation, k.sigma_t)
    integrand = lambda z: np.abs(packet_amplitude(params, s, z, t)) ** 2 + 0.0j
    value, err, _ = _adaptive(integrand, edges, spec.abs_tol, spec.max_subdivisions,
                              what="packet norm")
    return float(value.real), err


def total_density_norm_quadrature(params: ExperimentParams, t: float,
                                  spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Quadrature of the spin-traced position density; should be 1."""
    spec = spec or QuadratureSpec()
    t = float(t)
    if t < 0.0:
        raise ValueError("time must be >= 0")
    k = kinematics(params, t)
    halfwidth = k.delta_z_bar + spec.window_halfwidth_sigmas * k.sigma_t
    edges = _uniform_edges(-halfwidth, halfwidth, 0.0,
                           spec.min_points_per_oscillation, k.sigma_t)
    w_plus = abs(params.alpha) ** 2
    w_minus = abs(params.beta) ** 2

    def integrand(z):
        d_plus = np.abs(packet_amplitude(params, +1, z, t)) ** 2
        d_minus = np.abs(packet_amplitude(params, -1, z, t)) ** 2
        return w_plus * d_plus + w_minus * d_minus + 0.0j

    value, err, _ = _adaptive(integrand, edges, spec.abs_tol, spec.max_subdivisions,
                              what="total density norm")
    return float(value.real), err
