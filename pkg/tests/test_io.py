import numpy as np
import pytest

from mmfs import io as sig_io
from mmfs.errors import SignalFormatError
from mmfs.grid import GridFunction, TorusGrid


def _random_signal(kind, seed=0):
    g = TorusGrid(4)
    rng = np.random.default_rng(seed)
    if kind == "real":
        return GridFunction(g, rng.standard_normal(16))
    return GridFunction(g, rng.standard_normal(16) + 1j * rng.standard_normal(16), "complex")


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_csv_round_trip(tmp_path, kind):
    f = _random_signal(kind)
    path = tmp_path / "sig.csv"
    sig_io.write_csv(f, path)
    back = sig_io.read_csv(path)
    assert back.kind == kind
    assert np.array_equal(back.values, f.values)


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_binary_round_trip(tmp_path, kind):
    f = _random_signal(kind, seed=1)
    path = tmp_path / "sig.bin"
    sig_io.write_binary(f, path)
    back = sig_io.read_binary(path)
    assert back.kind == kind
    assert np.array_equal(back.values, f.values)


def test_sniffing_dispatch(tmp_path):
    f = _random_signal("real", seed=2)
    bin_path = tmp_path / "sig.mmfs"
    csv_path = tmp_path / "sig.csv"
    sig_io.write_signal(f, bin_path)
    sig_io.write_signal(f, csv_path)
    assert bin_path.read_bytes()[:4] == b"MMFS"
    assert np.array_equal(sig_io.read_signal(bin_path).values, f.values)
    assert np.array_equal(sig_io.read_signal(csv_path).values, f.values)


def test_csv_error_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("index,value\n0,1.0\n1,oops\n2,3.0\n3,4.0\n")
    with pytest.raises(SignalFormatError) as err:
        sig_io.read_csv(path)
    assert err.value.line == 3


def test_csv_rejects_bad_header_and_counts(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("value\n1.0\n")
    with pytest.raises(SignalFormatError):
        sig_io.read_csv(path)
    path.write_text("index,value\n" + "\n".join(f"{i},1.0" for i in range(6)))
    with pytest.raises(SignalFormatError):
        sig_io.read_csv(path)


def test_binary_rejects_corruption(tmp_path):
    f = _random_signal("real", seed=3)
    path = tmp_path / "sig.bin"
    sig_io.write_binary(f, path)
    blob = bytearray(path.read_bytes())
    blob[0] = 0
    path.write_bytes(bytes(blob))
    with pytest.raises(SignalFormatError):
        sig_io.read_binary(path)
