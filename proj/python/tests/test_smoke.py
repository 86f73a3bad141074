import numpy as np
import pytest

import boxqp


def test_bl_ladder():
    bl = boxqp.builtin_bl()
    assert bl.n == 3
    values = [boxqp.run(bl, level).value for level in ("psd+rlt+tri", "etri1", "etri123", "soc")]
    expected = [1.09291, 1.06613, 1.05882, 1.0]
    assert values == pytest.approx(expected, abs=1e-4)


def test_oracle_and_exact_agree():
    inst = boxqp.generate(3, 100, 7, seed=5)
    assert boxqp.solve_exact_qpb3(inst) == pytest.approx(boxqp.solve_global(inst).value, abs=1e-5)


def test_instance_round_trip():
    inst = boxqp.generate(6, 50, 2, seed=3, diag="zero")
    back = boxqp.parse_instance(boxqp.serialize_instance(inst))
    assert np.array_equal(back.Q, inst.Q)
    assert np.array_equal(back.q, inst.q)
    assert np.all(np.diag(inst.Q) == 0)


def test_custom_instance():
    Q = np.array([[0.0, 1.0], [1.0, 0.0]])
    q = np.array([-1.0, 0.0])
    inst = boxqp.BoxQpInstance(Q, q, "tiny")
    sol = boxqp.solve_global(inst)
    assert sol.value == pytest.approx(1.0)
    report = boxqp.run(inst, "psd+rlt")
    assert report.ok
    assert report.value >= sol.value - 1e-6


def test_asymmetric_matrix_rejected():
    with pytest.raises(ValueError):
        boxqp.BoxQpInstance(np.array([[0.0, 1.0], [2.0, 0.0]]), np.zeros(2))


def test_catalog_regenerates():
    for family, rows in (("ETRI1", 24), ("ETRI2", 24), ("ETRI3", 48)):
        reference = {tuple(r) for r in boxqp.catalog(family)}
        assert len(reference) == rows
        assert {tuple(r) for r in boxqp.generate_family(family)} == reference


def test_parse_error_reports_line():
    with pytest.raises(ValueError, match="line"):
        boxqp.parse_instance("n 2\nq 0 0\nQ 0 1\nQ 2 0\n")
