"""Smoke tests for the python module: thin checks that the bindings expose
the core results; the heavy verification lives in the C++ suites."""

import math
import sys

import opeflow


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    # flow equations at level four
    beta = opeflow.beta_system(4)
    assert beta["ddelta_dlna"] == "1/48*delta^3", beta
    assert beta["dgamma_dlna"] == "1/16*gamma*delta^2 - 1/16*delta^2", beta
    assert beta["dgamma_dlna_lambda"] == "16*lambda*pi", beta
    assert beta["two_trace_self_finite"] and beta["radial_order_symmetric"]

    # an expansion renders and mentions the two-trace coefficient
    text = opeflow.ope_product("OI", "OI")
    assert "term:" in text and "2 ;" in text, text

    # weights and the multifractal parabola
    assert opeflow.scaling_dimension_m(0, 1, 4) == (1.0 / 32.0, 1.0 / 32.0)
    assert opeflow.scaling_dimension_m(1, 1, 4) == (0.0, 0.0)
    assert approx(opeflow.delta_q(2.0, 4), -0.5)
    assert approx(opeflow.delta_q(0.3, 4), opeflow.delta_q(0.7, 4))

    # conductance duality and the ohmic limit
    for tau in (0.05, 0.5, math.pi / 2, 5.0, 20.0):
        gh = opeflow.g_star_half_integer(tau)
        gd = opeflow.g_star_dual(tau)
        assert abs(gh - gd) < 1e-12, (tau, gh, gd)
    assert approx(0.01 * opeflow.g_star(0.01), 1.0, 1e-8)
    assert approx(opeflow.sigma_xx_star(4), 2.0 / math.pi)
    square = opeflow.square_deviation_check()
    assert square["exceeds_band"] and approx(square["g_square"], 0.634242070449527)

    # flow integration against the closed form
    s0 = opeflow.CouplingState(0.5, 0.1 + 0j, 4)
    rows = opeflow.integrate(s0, 50.0, 0.05)
    end = rows[-1]
    exact = opeflow.closed_form(s0, 50.0)
    assert approx(end[1], exact.gamma, 1e-8)
    assert approx(end[2], exact.delta.real, 1e-8)
    assert opeflow.classify_stability(opeflow.CouplingState(1.0, 0.1 + 0j, 4), 1000.0) == "Unstable"
    assert opeflow.classify_stability(opeflow.CouplingState(0.95, 0.1j, 4), 500.0) == "Stable"

    # cylinder numerics reproduce Ohm's law
    assert approx(opeflow.tree_conductance_analytic(4, 1.0, 1.0), 2.0 / math.pi)
    g = opeflow.tree_conductance_numeric(32)
    assert abs(g - 2.0 / math.pi) < 0.02 * (2.0 / math.pi), g

    # KT criticality
    assert opeflow.kt_free_energy(4, 10.0) == 0.0
    assert opeflow.kt_free_energy(2, math.e) < 0.0 < opeflow.kt_free_energy(6, math.e)
    assert opeflow.vortex_count_action([1, -1], 0.3) == 0.0

    print("python smoke tests passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
