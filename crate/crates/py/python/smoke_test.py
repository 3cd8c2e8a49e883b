import json

import veech


def test_verify_word():
    poly, degree, dominant = veech.verify_word("2qinf", 7, "t^3.s")
    assert poly == "x^3 - 2x^2 - x + 1"
    assert degree == 3
    assert abs(dominant - 2.247) < 5e-4


def test_lyapunov_conjugate_ratio_is_inside_unit_interval():
    mean, stderr = veech.lyapunov("2qinf", 5, 2, steps=2000, samples=20, seed=3)
    assert 0.02 < mean < 0.98
    assert stderr < 0.05


def test_octagon():
    s = json.loads(veech.surface_json(8))
    assert s["genus"] == 2
    c = json.loads(veech.cylinders_json(8, 0.0))
    moduli = sorted(cyl["modulus"] for cyl in c["cylinders"])
    assert abs(moduli[1] / moduli[0] - 2.0) < 1e-9
    assert c["commensurability"]["commensurable"]


def test_errors_raise_value_error():
    try:
        veech.verify_word("hecke", 5, "s")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
    print("python smoke test ok")
