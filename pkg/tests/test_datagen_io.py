from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lassopath import io
from lassopath.datagen import SplitMix64, generate, inverse_normal_cdf
from lassopath.errors import ParseError


def test_splitmix64_reference_stream():
    # published outputs for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423,
        4593380528125082431, 16408922859458223821]


def test_uniform_open_interval():
    rng = SplitMix64(0)
    us = [rng.uniform() for _ in range(10000)]
    assert 0.0 < min(us) and max(us) < 1.0
    assert abs(np.mean(us) - 0.5) < 0.01


@settings(max_examples=200, deadline=None)
@given(u=st.floats(1e-300, 1 - 1e-16))
def test_inverse_cdf_against_stdlib(u):
    ref = NormalDist().inv_cdf(u)
    assert inverse_normal_cdf(u) == pytest.approx(ref, rel=5e-9, abs=1e-9)


def test_inverse_cdf_domain():
    assert inverse_normal_cdf(0.5) == 0.0
    with pytest.raises(ValueError):
        inverse_normal_cdf(1.0)


def test_generate_shapes_and_truth():
    inst = generate(6, 9, 3, 0.1, 17)
    assert inst.X.shape == (6, 9) and len(inst.support) == 3
    assert all(0.5 <= abs(inst.beta[j]) <= 2.0 for j in inst.support)
    np.testing.assert_array_equal(inst.y, inst.X @ inst.beta + inst.z)
    again = generate(6, 9, 3, 0.1, 17)
    assert inst.X.tobytes() == again.X.tobytes() and inst.y.tobytes() == again.y.tobytes()
    assert generate(6, 9, 3, 0.1, 18).X.tobytes() != inst.X.tobytes()


def test_generate_edge_cases():
    pure_noise = generate(4, 5, 0, 1.0, 3)
    np.testing.assert_array_equal(pure_noise.y, pure_noise.z)
    noiseless = generate(4, 5, 2, 0.0, 3)
    np.testing.assert_array_equal(noiseless.y, noiseless.X @ noiseless.beta)
    with pytest.raises(ValueError):
        generate(4, 5, 6, 0.1, 0)


def test_seed42_matches_golden(seed42):
    inst = generate(3, 5, 2, 0.1, 42)
    np.testing.assert_array_equal(inst.X, seed42[0])
    np.testing.assert_array_equal(inst.y, seed42[1])
    assert inst.support == (0, 1) and inst.signs == (1, -1)


def test_csv_round_trip_is_fixed_point(tmp_path):
    X = generate(5, 4, 2, 0.3, 9).X * 1e-7
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    io.write_matrix(a, X)
    back = io.read_matrix(a)
    np.testing.assert_array_equal(back, X)
    io.write_matrix(b, back)
    assert a.read_bytes() == b.read_bytes()
    io.write_vector(a, X[:, 0])
    np.testing.assert_array_equal(io.read_vector(a), X[:, 0])


@pytest.mark.parametrize("text,loc", [
    ("1,2\n3,x\n", "2:3"),
    ("1,2\n3\n", "2:1"),
    ("", "1:1"),
    ("1,nan\n", "1:3"),
])
def test_parse_errors_locate(tmp_path, text, loc):
    f = tmp_path / "bad.csv"
    f.write_text(text)
    with pytest.raises(ParseError) as info:
        io.read_matrix(f)
    assert f"bad.csv:{loc}:" in str(info.value)


def test_response_rejects_rows(tmp_path):
    f = tmp_path / "y.csv"
    f.write_text("1\n2,3\n")
    with pytest.raises(ParseError):
        io.read_vector(f)
