import csv
import io
import json
import math

import numpy as np
import pytest

from qslverify.cli import COUNTEREXAMPLE_HEADER, SWEEP_HEADER, main
from qslverify.io import (ProblemError, ProblemFile, decode_complex, dump_problem, encode_complex,
                          format_number, load_problem, parse_problem)
from qslverify import random_hermitian, random_pure_state


def write_problem(path, k, psi0=None, **extra):
    data = {"dim": len(k), "k": encode_complex(np.asarray(k, dtype=complex)), **extra}
    if isinstance(psi0, str):
        data["psi0"] = psi0
    elif psi0 is not None:
        data["psi0"] = encode_complex(np.asarray(psi0, dtype=complex))
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def qubit_file(tmp_path):
    return write_problem(tmp_path / "qubit.json", np.diag([-1.0, 1.0]), np.ones(2) / math.sqrt(2))


@pytest.fixture
def qutrit_file(tmp_path):
    return write_problem(tmp_path / "qutrit.json", np.diag([0.0, 1.0, 2.0]), np.ones(3) / math.sqrt(3))


@pytest.fixture
def eigen_file(tmp_path):
    return write_problem(tmp_path / "eigen.json", np.diag([0.0, 1.0, 2.0]), [1.0, 0.0, 0.0])


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestSweep:
    def test_qubit(self, qubit_file, capsys):
        code, out, _ = run(["sweep", qubit_file, "--grid", "8"], capsys)
        header, rows = read_csv(out)
        assert code == 0
        assert header == SWEEP_HEADER
        assert len(rows) == 8
        row = {k: v for k, v in zip(header, rows[3])}
        assert float(row["theta"]) == pytest.approx(math.pi / 4)
        assert float(row["overlap"]) == pytest.approx(0.70711, abs=1e-5)
        assert float(row["s"]) == pytest.approx(1.5708, abs=1e-4)
        assert float(row["ds_dtheta_fd"]) == pytest.approx(2.0, abs=1e-5)
        assert float(row["mt_bound"]) == 2.0
        # s = pi at the last point: analytic rate undefined
        assert rows[-1][header.index("ds_dtheta_analytic")] == ""

    def test_seventeen_digits(self, qubit_file, capsys):
        _, out, _ = run(["sweep", qubit_file, "--grid", "8"], capsys)
        _, rows = read_csv(out)
        assert rows[3][0] == format(math.pi / 4, ".17g") == "0.78539816339744828"
        assert float(rows[3][0]) == math.pi / 4

    def test_eigenstate(self, eigen_file, capsys):
        code, out, _ = run(["sweep", eigen_file, "--grid", "16"], capsys)
        header, rows = read_csv(out)
        assert code == 0
        for row in rows:
            assert float(row[header.index("s")]) == 0.0
            assert abs(float(row[header.index("ds_dtheta_fd")])) < 1e-8
            assert row[header.index("ml_bound")] == "inf"

    def test_to_file(self, qubit_file, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        assert main(["sweep", qubit_file, "--out", str(out_path)]) == 0
        header, rows = read_csv(out_path.read_text())
        assert header == SWEEP_HEADER and len(rows) == 256

    def test_hbar(self, qubit_file, capsys):
        _, out, _ = run(["sweep", qubit_file, "--grid", "4", "--hbar", "2"], capsys)
        header, rows = read_csv(out)
        assert float(rows[0][header.index("mt_bound")]) == 1.0


class TestInputErrors:
    def test_non_hermitian(self, tmp_path, capsys):
        path = write_problem(tmp_path / "bad.json", [[0.0, 1.0], [0.0, 0.0]], [1.0, 0.0])
        code, _, err = run(["sweep", path], capsys)
        assert code == 2 and "Hermitian" in err

    def test_unknown_field(self, tmp_path, capsys):
        path = write_problem(tmp_path / "bad.json", np.eye(2), [1.0, 0.0], colour="red")
        assert run(["sweep", path], capsys)[0] == 2

    def test_bad_norm(self, tmp_path, capsys):
        path = write_problem(tmp_path / "bad.json", np.diag([0.0, 1.0]), [1.0, 0.01])
        assert run(["speed-limits", path], capsys)[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["sweep", str(tmp_path / "nope.json")], capsys)[0] == 2

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{")
        assert run(["sweep", str(path)], capsys)[0] == 2

    def test_unknown_command(self, capsys):
        assert run(["plot"], capsys)[0] == 2

    def test_no_state(self, tmp_path, capsys):
        path = write_problem(tmp_path / "nostate.json", np.diag([0.0, 1.0]))
        assert run(["sweep", path], capsys)[0] == 2


class TestProblemFile:
    def test_round_trip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(3)
        for d in (2, 5, 8):
            k = random_hermitian(d, rng).matrix
            psi = random_pure_state(d, rng).amplitudes
            first = parse_problem({"k": encode_complex(k), "psi0": encode_complex(psi), "theta_max": 2.5})
            dump_problem(first, tmp_path / "p.json")
            second = load_problem(tmp_path / "p.json")
            assert np.array_equal(first.k, second.k)
            assert np.array_equal(first.psi0, second.psi0)
            assert second.theta_max == 2.5 and second.dim == d

    def test_renormalizes_small_error(self):
        p = parse_problem({"k": encode_complex(np.eye(2)), "psi0": [[1.0 + 5e-7, 0.0], [0.0, 0.0]]})
        assert np.linalg.norm(p.psi0) == pytest.approx(1.0, abs=1e-15)

    def test_optimal_and_seed(self):
        assert parse_problem({"k": encode_complex(np.eye(2)), "psi0": "optimal"}).psi0 == "optimal"
        assert parse_problem({"k": encode_complex(np.eye(2)), "seed": 4}).seed == 4
        with pytest.raises(ProblemError):
            parse_problem({"k": encode_complex(np.eye(2)), "psi0": "ground"})

    @pytest.mark.parametrize("data", [
        [], {}, {"k": [[1, 2]]}, {"k": encode_complex(np.eye(2)), "dim": 3},
        {"k": encode_complex(np.eye(2)), "hbar": 0}, {"k": encode_complex(np.eye(2)), "grid_points": 1},
        {"k": encode_complex(np.eye(2)), "seed": -2}, {"k": [[[1, 0], [float("nan"), 0]], [[0, 0], [1, 0]]]},
    ])
    def test_rejects(self, data):
        with pytest.raises(ProblemError):
            parse_problem(data)

    def test_complex_codec(self):
        z = np.array([[1 + 2j, -0.5j], [3.0, 0]])
        assert np.array_equal(decode_complex(encode_complex(z), (2, 2), "z"), z)

    def test_format_number(self):
        assert format_number(math.inf) == "inf"
        assert format_number(None) == ""
        assert float(format_number(0.1)) == 0.1

    def test_problem_dataclass(self):
        p = ProblemFile(k=np.eye(3))
        assert p.dim == 3 and p.as_dict()["grid_points"] == 256


class TestSpeedLimits:
    def test_qubit(self, qubit_file, capsys):
        code, out, _ = run(["speed-limits", qubit_file], capsys)
        r = json.loads(out)
        assert code == 0
        for key in ("t_mt", "t_ml", "t_orthogonal"):
            assert r[key] == pytest.approx(math.pi / 2, abs=1e-8)
        assert r["t_new"] == pytest.approx(1.0)
        assert r["ratio_t_ml_over_t_new"] == pytest.approx(math.pi / 2, abs=1e-12)

    def test_qutrit(self, qutrit_file, capsys):
        _, out, _ = run(["speed-limits", qutrit_file], capsys)
        r = json.loads(out)
        assert r["t_mt"] == pytest.approx(1.9238, abs=1e-4)
        assert r["t_new"] == pytest.approx(1.0)
        assert r["t_ml"] == pytest.approx(1.5708, abs=1e-4)
        assert r["t_orthogonal"] == pytest.approx(2.0944, abs=1e-4)

    def test_ground_state(self, eigen_file, capsys):
        code, out, _ = run(["speed-limits", eigen_file], capsys)
        r = json.loads(out)
        assert code == 0
        assert r["t_new"] is None
        assert r["reasons"]["t_new"] == "zero energy above ground"
        assert r["reasons"]["t_mt"] == "zero variance"

    def test_s_max(self, qubit_file, capsys):
        _, out, _ = run(["speed-limits", qubit_file, "--s-max", str(math.pi / 2)], capsys)
        assert json.loads(out)["t_generalized"] == pytest.approx(2 * math.sin(math.pi / 8) ** 2)
        assert run(["speed-limits", qubit_file, "--s-max", "4"], capsys)[0] == 2


class TestVerify:
    ARGS = ["verify", "--instances", "10", "--mixed-instances", "4", "--dims", "2,3", "--seed", "1"]

    def test_twice_identical(self, capsys):
        _, first, _ = run(self.ARGS, capsys)
        code, second, _ = run(self.ARGS, capsys)
        assert code == 0 and first == second
        payload = json.loads(first)
        assert payload["passed"] is True
        assert payload["bound"]["summary"]["violation_count"] == 0

    def test_workers_identical(self, capsys):
        _, serial, _ = run(self.ARGS, capsys)
        _, threaded, _ = run(self.ARGS + ["--workers", "3"], capsys)
        assert serial == threaded

    @pytest.mark.parametrize("extra", [["--instances", "0"], ["--dims", "1,2"], ["--grid", "4"],
                                        ["--dims", "two"]])
    def test_bad_flags(self, extra, capsys):
        assert run(self.ARGS + extra, capsys)[0] == 2


class TestCounterexample:
    def test_qubit(self, qubit_file, capsys):
        code, out, _ = run(["counterexample", "--problem", qubit_file], capsys)
        header, rows = read_csv(out)
        assert code == 0 and header == COUNTEREXAMPLE_HEADER
        assert float(rows[0][0]) == pytest.approx(1e-5)
        assert float(rows[0][2]) == pytest.approx(-1e-5, rel=1e-6)
        signs = [np.sign(float(r[2])) for r in rows if r[2]]
        assert all(s < 0 for s in signs[:10])
        crossing = next(float(r[0]) for r in rows if r[2] and float(r[2]) > 0)
        assert crossing > math.pi / 2

    def test_eigenstate(self, eigen_file, capsys):
        _, out, _ = run(["counterexample", "--problem", eigen_file, "--points", "20"], capsys)
        _, rows = read_csv(out)
        assert len(rows) == 20
        assert all(float(r[2]) == 0.0 and r[3] == "stationary" for r in rows)

    def test_seed(self, capsys):
        code, out, _ = run(["counterexample", "--seed", "3", "--dim", "4", "--points", "50"], capsys)
        _, rows = read_csv(out)
        assert code == 0 and float(rows[0][2]) < 0

    def test_requires_source(self, capsys):
        assert run(["counterexample"], capsys)[0] == 2


class TestOptimal:
    def test_qubit(self, tmp_path, capsys):
        path = write_problem(tmp_path / "k.json", np.diag([-1.0, 1.0]))
        code, out, _ = run(["optimal", "--problem", path, "--phi", "0"], capsys)
        r = json.loads(out)
        assert code == 0
        np.testing.assert_allclose(np.array(r["state"])[:, 0], [0.70711, 0.70711], atol=1e-5)
        assert r["saturates_mt"] is True and r["geodesic"] is True

    def test_qutrit(self, tmp_path, capsys):
        path = write_problem(tmp_path / "k.json", np.diag([0.0, 1.0, 2.0]))
        _, out, _ = run(["optimal", "--problem", path], capsys)
        r = json.loads(out)
        np.testing.assert_allclose(np.array(r["state"])[:, 0], [0.70711, 0.0, 0.70711], atol=1e-5)
        assert r["report"]["t_orthogonal"] == pytest.approx(math.pi / 2, abs=1e-8)
        assert r["report"]["t_mt"] == pytest.approx(math.pi / 2)
        assert r["report"]["t_ml"] == pytest.approx(math.pi / 2)

    def test_identity(self, tmp_path, capsys):
        path = write_problem(tmp_path / "k.json", np.eye(3))
        code, _, err = run(["optimal", "--problem", path], capsys)
        assert code == 2 and "single distinct eigenvalue" in err
