"""Smoke test for the compiled `uinf` module.

Build and run:
    maturin develop --release -m crates/py/Cargo.toml
    python crates/py/python/smoke_test.py
"""

import json
import math

import uinf


def check(cond, what):
    if not cond:
        raise AssertionError(what)
    print(f"ok  {what}")


def main():
    c = -math.sqrt(3.0 / (4.0 * math.pi))

    su2 = uinf.su2_generators()
    t1, t2, t3 = su2["generators"]
    check(abs(su2["closure_constant"] - c) < 1e-12, "su2 closure constant")
    check((t1.bracket(t2) - t3 * c).max_abs() < 1e-12, "{T1, T2} = c T3")

    f = uinf.HarmonicField.random(4, seed=1)
    g = uinf.HarmonicField.random(3, seed=2)
    h = uinf.HarmonicField.random(2, seed=3)
    check((uinf.bracket(f, g) + uinf.bracket(g, f)).max_abs() < 1e-12, "bracket antisymmetry")
    jac = f.bracket(g.bracket(h)) + g.bracket(h.bracket(f)) + h.bracket(f.bracket(g))
    check(jac.max_abs() < 1e-10, "Jacobi identity")
    check(abs(uinf.bracket(f, g).integrate()) < 1e-12, "bracket integrates to zero")
    back = uinf.HarmonicField.from_json(f.to_json())
    check((back - f).max_abs() == 0.0, "field JSON round trip")

    y = uinf.HarmonicField.mode(1, 0, 1.0)
    check(y.coeff(1, 0) == 1 and y.l_max == 1, "single mode")

    for name, n in [("delta3_expansion", 5), ("delta4_trace_form", 5), ("eps3_delta3", 3), ("eps4_trace_form", 4)]:
        r = uinf.identity_suite(name, n=n, trials=200, seed=7)
        check(r["max_rel_err"] < 1e-10, f"{name} suite ({r['max_rel_err']:.1e})")
    fs = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    v = [0.0, 0.0, 1.0]
    eu = [1.0, 1.0, 1.0]
    check(uinf.gen_delta_contract_3(fs, v, eu) == 4.0 == uinf.expanded_scalar_form(fs, v, eu), "sparse cubic contraction")

    r = uinf.reduce("ym", dim=4, lmax=2, b=0.1, e=2.0, seed=3)
    check(r["residuals"]["master"] < 1e-10 and r["residuals"]["covariant"] < 1e-9, "ym reduction report")
    r = uinf.reduce("scalar", dim=3, seed=4)
    check(r["residuals"]["master"] < 1e-10, "scalar reduction report")
    m = uinf.masslessness(uinf.HarmonicField.random(2, seed=5))
    check(m["relative"] <= 1e-14, "masslessness")
    scan = uinf.scan_b([0.4, 0.2, 0.1, 0.05], model="ym")
    check(scan["fit_exponent"] >= 1.95, f"b scaling exponent {scan['fit_exponent']:.3f}")
    two = uinf.two_dim_check()
    check(all(abs(row["constant_01"] - 64.0) < 1e-9 for row in two["rows"]), "two-dimensional constant")

    p = uinf.bps_profile(25.0, 4000)
    check(max(p["bogomolnyi_residuals"]) < 1e-8 and len(p["xi"]) == 4000, "BPS profiles")
    e = uinf.monopole_energy(0.0)
    check(abs(e["E0_integral"] - 1.0) < 1e-4, f"first-line integral {e['E0_integral']:.6f}")
    s = uinf.energy_scan([0.1, 0.2, 0.3])
    check(s["r_squared"] > 0.9999, "energy correction linear in epsilon")
    pert = uinf.monopole_perturbation(0.1)
    check(abs(pert["asymptotics"]["origin_k1"]["slope"] - 2.0) < 0.1, "K1 origin exponent")

    xi = p["xi"]
    bump = [math.exp(1.0 - 1.0 / (1.0 - ((x - 5.0) / 3.0) ** 2)) if abs(x - 5.0) < 3.0 else 0.0 for x in xi]
    var = uinf.monopole_variational(bump, [0.0] * len(xi))
    check(var["rel_diff"] < 1e-6, "variational check")

    try:
        uinf.reduce("ym", b=-1.0)
    except ValueError as exc:
        check("invalid" in str(exc) or "positive" in str(exc), "negative radius raises ValueError")
    else:
        raise AssertionError("negative radius accepted")

    json.dumps(uinf.born_infeld(b_list=[0.4, 0.2], alpha_list=[0.01, 0.003]))
    print("smoke test passed")


if __name__ == "__main__":
    main()
