"""Parity between the compiled kernels and the NumPy fallback."""

import numpy as np
import pytest

import sgcoherence as sg
from sgcoherence import _kernels_py, packet_amplitude
from sgcoherence.oracle import _overlap_packet_args

try:
    from sgcoherence import _kernels_c
except ImportError:
    _kernels_c = None

needs_compiled = pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")


def test_fallback_always_available():
    assert "python" in sg.available_backends()


def test_overlap_integrand_is_branch_product(typical):
    # The fused integrand must equal phi_+ * conj(phi_-) built from the
    # reference amplitudes. The reference route forms the branch phases
    # a*z^2 individually (up to 1e9 rad), so its own phase carries
    # cancellation noise of order a*z^2*eps; the comparison allows exactly
    # that much and no more.
    for t in (0.0, 1e-9, 1e-6, 1.3e-5):
        args, sigma_t, dzbar = _overlap_packet_args(typical, t)
        z = np.linspace(-dzbar - 6 * sigma_t, dzbar + 6 * sigma_t, 257)
        fused = _kernels_py.overlap_integrand(z, **args)
        reference = packet_amplitude(typical, +1, z, t) * np.conj(
            packet_amplitude(typical, -1, z, t)
        )
        np.testing.assert_allclose(np.abs(fused), np.abs(reference), rtol=1e-12)
        phase_noise = args["a"] * np.max(z) ** 2 * 5e-16 + 1e-12
        assert float(np.abs(np.angle(fused / reference)).max()) <= phase_noise


@needs_compiled
def test_integrand_parity_overlap():
    rng = np.random.default_rng(11)
    z = np.sort(rng.uniform(-2e-4, 2e-4, size=4096))
    args = (199.7, 2.5e9, 2.6e-6, 8.5e13, 43.97, 0.44)
    a = _kernels_py.overlap_integrand(z, *args)
    b = _kernels_c.overlap_integrand(z, *args)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_compiled
def test_integrand_parity_kernel():
    rng = np.random.default_rng(12)
    u = np.sort(rng.uniform(-3e-6, 3e-6, size=4096))
    args = (-3.7e-5, 2.5e9, 4.27e17, complex(0.3, -1.2))
    a = _kernels_py.kernel_integrand(u, *args)
    b = _kernels_c.kernel_integrand(u, *args)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_compiled
def test_end_to_end_backend_independence(typical):
    from sgcoherence import kernels

    previous = kernels.BACKEND
    try:
        sg.use_backend("cython")
        v_c = sg.overlap_quadrature(typical, 1.3e-5)
        sg.use_backend("python")
        v_p = sg.overlap_quadrature(typical, 1.3e-5)
        assert abs(v_c - v_p) < 1e-15

        z = np.linspace(-2e-5, 2e-5, 5)
        spec = sg.QuadratureSpec(abs_tol=1e-5)
        sg.use_backend("cython")
        k_c = np.array([s.value for s in sg.propagate_via_kernel(typical, +1, z, 2e-9, spec)])
        sg.use_backend("python")
        k_p = np.array([s.value for s in sg.propagate_via_kernel(typical, +1, z, 2e-9, spec)])
        np.testing.assert_allclose(k_c, k_p, rtol=1e-10)
    finally:
        sg.use_backend(previous)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        sg.use_backend("fortran")


def test_backend_reported():
    assert sg.BACKEND in ("cython", "python")
