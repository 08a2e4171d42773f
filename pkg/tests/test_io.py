"""Round trips and determinism of the on-disk formats."""

import math

import numpy as np
import pytest

from coinwalk import (
    ArcState,
    BDChain,
    CoinAngles,
    InputFormatError,
    PlanarState,
    VerblunskySeq,
    dispersion_table,
)
from coinwalk import io as cwio


def test_complex_format_round_trip():
    values = [0.3 + 0.4j, -1e-17 + 1j * 0.25, 0.0j, -0.999999999999999 - 0.5e-8j]
    for z in values:
        assert cwio.parse_complex(cwio.fmt_complex(z)) == z


def test_parse_complex_rejects_garbage():
    with pytest.raises(InputFormatError):
        cwio.parse_complex("not-a-number")


def test_arc_state_round_trip(tmp_path):
    state = ArcState.from_amplitudes({
        (0, "L"): 1.0, (0, "R"): 0.25 - 0.125j, (7, "L"): 1e-12j})
    path = tmp_path / "state.csv"
    cwio.write_arc_state(state, path)
    back = cwio.read_arc_state(path)
    assert back.distance(state) == 0.0
    assert path.read_text().startswith("# schema: arc-state/1\n")


def test_arc_state_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("site,direction,re,im\n0,X,1,0\n")
    with pytest.raises(InputFormatError):
        cwio.read_arc_state(path)
    path.write_text("nonsense\n")
    with pytest.raises(InputFormatError):
        cwio.read_arc_state(path)


@pytest.mark.parametrize("seq", [
    VerblunskySeq.constant(0.3 + 0.4j),
    VerblunskySeq.from_table([0.5, -0.5, 0.1j], tail=0.25),
    VerblunskySeq.from_table([0.5, -0.5]),
    VerblunskySeq.fourier_mode(5 * math.pi / 4, math.pi / 6, 0.7),
])
def test_verblunsky_round_trip(tmp_path, seq):
    path = tmp_path / "seq.txt"
    cwio.write_verblunsky(seq, path)
    back = cwio.read_verblunsky(path)
    assert back.flavor == seq.flavor
    assert back.tail_known == seq.tail_known
    for j in range(8):
        assert back.eta(j) == seq.eta(j)


def test_verblunsky_rejects_malformed(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("constant\n")
    with pytest.raises(InputFormatError):
        cwio.read_verblunsky(path)
    path.write_text("table\n1 0.5 0\n")
    with pytest.raises(InputFormatError):
        cwio.read_verblunsky(path)
    path.write_text("mystery\n0.5\n")
    with pytest.raises(InputFormatError):
        cwio.read_verblunsky(path)


def test_chain_round_trip(tmp_path):
    path = tmp_path / "chain.csv"
    chain = BDChain.from_table([0.25, 0.75], tail=0.5)
    cwio.write_chain(chain, path)
    back = cwio.read_chain(path)
    assert back.tail_known
    assert [back.p(j) for j in range(4)] == [0.25, 0.75, 0.5, 0.5]

    bare = BDChain.from_table([0.25, 0.75])
    cwio.write_chain(bare, path)
    back = cwio.read_chain(path)
    assert not back.tail_known
    assert back.known_terms == 2


def test_chain_rejects_gaps(tmp_path):
    path = tmp_path / "chain.csv"
    path.write_text("j,p\n0,0.25\n2,0.75\n")
    with pytest.raises(InputFormatError):
        cwio.read_chain(path)


def test_planar_round_trip_cylinder(tmp_path):
    s = PlanarState.point(2, 5, spin=(0.3 + 0.1j, -0.4), cylinder=8)
    path = tmp_path / "planar.csv"
    cwio.write_planar_state(s, path)
    back = cwio.read_planar_state(path)
    assert back.cylinder == 8
    assert np.allclose(back.data[: s.data.shape[0]], s.data)


def test_planar_round_trip_half_plane(tmp_path):
    s = PlanarState.point(1, -4, spin=(1.0, 1j))
    path = tmp_path / "planar.csv"
    cwio.write_planar_state(s, path)
    back = cwio.read_planar_state(path)
    assert back.cylinder is None
    assert back.y0 == -4
    assert np.allclose(back.amplitude(1, -4), s.amplitude(1, -4))


def test_dispersion_csv_round_trip(tmp_path):
    table = dispersion_table(CoinAngles(5 * math.pi / 4, math.pi / 6), 16)
    path = tmp_path / "disp.csv"
    cwio.write_dispersion(table, path)
    rows = cwio.read_dispersion_rows(path)
    assert len(rows) == 16
    for row, rec in zip(rows, table.rows):
        assert row["k"] == rec.k
        assert row["theta_c"] == rec.theta_c
        assert row["class"] == rec.kind
        if rec.theta_0 is None:
            assert row["theta_0"] is None
        else:
            assert row["theta_0"] == rec.theta_0


def test_deterministic_serialization(tmp_path):
    table = dispersion_table(CoinAngles(1.1, 0.4), 32)
    a = cwio.dispersion_csv(table)
    b = cwio.dispersion_csv(dispersion_table(CoinAngles(1.1, 0.4), 32))
    assert a == b
    seq = VerblunskySeq.constant(1 / 3 + 1j / 7)
    assert cwio.verblunsky_text(seq) == cwio.verblunsky_text(
        VerblunskySeq.constant(1 / 3 + 1j / 7))
