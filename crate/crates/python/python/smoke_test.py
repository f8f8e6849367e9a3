"""Smoke test for the extension module.

Build with `maturin develop` (or copy the cdylib to `juhl.so` on PYTHONPATH)
and run `python python/smoke_test.py`.
"""

import json

import juhl


def main():
    e = juhl.build_e(2)
    assert len(e) == 3, str(e)

    terms = {tuple(a): c for a, c in e.terms()}
    assert terms[(0, 1)] == "2λ"
    assert terms[(2, 0)] == terms[(0, 2)] == "ξ_2"

    e2 = juhl.build_en(2, 2)
    assert len(e2) == 7
    assert juhl.DiffOp.from_json(e2.to_json()) == e2
    assert e.compose(e) != e2  # the composite shifts λ in the outer factor

    a = juhl.juhl_coeffs(3, 2)
    assert a[0] == juhl.a0_closed_form(3, 2) == "4λ^2 + 2λ", a
    table = json.loads(juhl.coeff_table_text(4, 1))
    assert table["a"] == [["2λ - 2"]]
    assert "\\prod" in juhl.coeff_table_text(3, 2, "latex")

    assert all(juhl.check_mi(n) for n in range(1, 9))
    assert juhl.check_inverse_j(2, [0.3 + 0.0j, 1.7 + 0.4j])

    xi = [0.3, -0.4]
    c = juhl.chart_c(xi)
    assert abs(sum(v * v for v in c) - 1.0) < 1e-14
    assert juhl.kappa_c(xi) > 0

    g = juhl.ConformalMap.dilation(2, 2.0).then(juhl.ConformalMap.inversion(2))
    y = g.act(xi)
    back = g.inverse().act(y)
    assert max(abs(p - q) for p, q in zip(back, xi)) < 1e-14
    assert g.preserves_hyperplane()

    meta = json.loads(juhl.normalization_meta(3, 2))
    assert meta["juhl_ratio"]["parity"] == "even"

    report = json.loads(juhl.run_verify("ambient", seed=5, n_max=2))
    assert report["passed"], report
    try:
        juhl.run_verify("ambient", tol={"bogus": 1.0})
    except ValueError:
        pass
    else:
        raise AssertionError("unknown tolerance name accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
