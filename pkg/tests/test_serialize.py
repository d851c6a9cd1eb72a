import numpy as np

from roguewave.sampling import SeededStream, sample_theta
from roguewave.serialize import read_csv, read_field, read_theta, write_csv, write_field, write_svg, write_theta
from roguewave.spectrum import GAUSSIAN, CoefficientProfile


def test_csv_round_trip(tmp_path):
    path = tmp_path / "sub" / "a.csv"
    write_csv(path, ("x", "y"), [(1, 0.1), (2, np.float64(1 / 3))], {"seed": 7, "eps": [1.0, 0.5]})
    meta, cols, rows = read_csv(path)
    assert meta == {"seed": "7", "eps": "1.0, 0.5"}
    assert cols == ["x", "y"]
    assert float(rows[1][1]) == 1 / 3
    assert not [p for p in path.parent.iterdir() if p.name.startswith(".tmp")]


def test_field_round_trip(tmp_path):
    prof = CoefficientProfile(0.7, GAUSSIAN)
    th = sample_theta(SeededStream(3, 1), prof)
    u = th.datum()
    write_field(tmp_path / "u.csv", u, prof, seed=3, stream_index=1)
    v, meta = read_field(tmp_path / "u.csv")
    assert np.array_equal(u.modes, v.modes)
    assert meta["master_seed"] == "3" and meta["profile_kind"] == GAUSSIAN


def test_theta_round_trip(tmp_path):
    th = sample_theta(SeededStream(4), CoefficientProfile(1.0))
    write_theta(tmp_path / "t.csv", th, {"z": 2.0})
    back, meta = read_theta(tmp_path / "t.csv")
    assert np.array_equal(back.r, th.r) and np.array_equal(back.phi, th.phi)
    assert back.profile == th.profile and meta["z"] == "2.0"


def test_svg_is_deterministic(tmp_path):
    x = np.linspace(0, 1, 50)
    for name in ("a.svg", "b.svg"):
        write_svg(tmp_path / name, x, [x ** 2], hline=0.5, title="demo")
    a, b = (tmp_path / "a.svg").read_text(), (tmp_path / "b.svg").read_text()
    assert a == b and a.startswith("<?xml")
