import json

import numpy as np
import pytest

import fredkit as fk
from fredkit.cli import RunConfig, main, validate
from fredkit.serialize import obj_to_complex, write_complex_csv


def run_cli(tmp_path, doc, *args):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(doc))
    out = tmp_path / "out.txt"
    code = main(["-c", str(cfg), "--output", str(out), *args])
    return code, (out.read_text() if out.exists() else "")


MEHLER_EIG = {
    "kernel": {"name": "mehler", "r": 0.5},
    "measure": {"kind": "gauss-hermite-prob", "n": 40},
    "command": "eig",
    "params": {},
    "output": {"format": "json", "destination": None},
}

YZ_DET = {
    "kernel": {"name": "separable", "coeffs": [1.0], "rights": [[0, 1]], "lefts": [[0, 1]]},
    "measure": {"kind": "gauss-legendre", "n": 8, "a": 0.0, "b": 1.0},
    "command": "det",
    "params": {"lambda_grid": "0:4:81"},
    "output": {"format": "csv", "destination": None},
}


class TestRun:
    def test_mehler_eig_json(self, tmp_path):
        code, text = run_cli(tmp_path, MEHLER_EIG)
        assert code == 0
        doc = json.loads(text)
        vals = [obj_to_complex(v) for v in doc["eigenvalues"]]
        for j in range(4):
            assert abs(vals[j] - 0.5 ** j) <= 1e-6
        assert doc["hermitian"] is True

    def test_det_grid_brackets_eigenvalue(self, tmp_path):
        code, text = run_cli(tmp_path, YZ_DET)
        assert code == 0
        rows = [line.split(",") for line in text.strip().splitlines()]
        lams = np.array([float(r[0]) for r in rows])
        dets = np.array([float(r[1]) for r in rows])
        prods = dets[:-1] * dets[1:]
        idx = np.nonzero(prods <= 0)[0]
        assert idx.size >= 1
        assert lams[idx[0]] <= 3.0 <= lams[idx[-1] + 1]

    def test_malformed_config_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json")
        assert main(["-c", str(cfg)]) == 2

    def test_invalid_params_exit_1(self, tmp_path):
        doc = dict(MEHLER_EIG, kernel={"name": "mehler", "r": 2.0})
        code, _ = run_cli(tmp_path, doc)
        assert code == 1

    def test_unknown_command_exits_2(self, tmp_path):
        doc = dict(MEHLER_EIG, command="explode")
        code, _ = run_cli(tmp_path, doc)
        assert code == 2

    def test_byte_determinism(self, tmp_path):
        _, one = run_cli(tmp_path, MEHLER_EIG)
        _, two = run_cli(tmp_path, MEHLER_EIG)
        assert one == two

    def test_solve_with_rhs_file(self, tmp_path):
        rule = fk.gauss_legendre(8, 0.0, 1.0)
        rhs = tmp_path / "rhs.csv"
        write_complex_csv(rhs, rule.nodes.reshape(-1, 1).astype(complex))
        doc = {
            "kernel": YZ_DET["kernel"],
            "measure": YZ_DET["measure"],
            "command": "solve",
            "params": {"lambda": {"re": 1.0, "im": 0.0}, "rhs": str(rhs)},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        sol = np.array([obj_to_complex(v) for v in json.loads(text)["solution"]])
        assert sol.real == pytest.approx(1.5 * rule.nodes, abs=1e-9)

    def test_near_eigenvalue_solve_exits_1(self, tmp_path):
        doc = {
            "kernel": YZ_DET["kernel"],
            "measure": YZ_DET["measure"],
            "command": "solve",
            "params": {"lambda": {"re": 3.0, "im": 0.0}, "rhs": "ones"},
            "output": {"format": "json", "destination": None},
        }
        code, _ = run_cli(tmp_path, doc)
        assert code == 1

    def test_powerit_trace(self, tmp_path):
        doc = {
            "kernel": {"name": "mehler", "r": 0.5},
            "measure": {"kind": "gauss-hermite-prob", "n": 40},
            "command": "powerit",
            "params": {"k": 2, "tol": 1e-10, "nmax": 400},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        doc_out = json.loads(text)
        ests = [obj_to_complex(v) for v in doc_out["estimates"]]
        assert abs(ests[0] - 1.0) <= 1e-6
        assert abs(ests[1] - 0.5) <= 1e-6
        assert len(doc_out["ratios"]) == 2

    def test_trace_command(self, tmp_path):
        doc = {
            "kernel": {"name": "separable", "coeffs": [1.0], "rights": [[0, 1]],
                       "lefts": [[0, 0, 1]]},
            "measure": YZ_DET["measure"],
            "command": "trace",
            "params": {"n": 0},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        assert json.loads(text)["value"] == pytest.approx(1.0 / 15.0, abs=1e-12)

    def test_jordan_command_on_defective(self, tmp_path):
        doc = {
            "kernel": {"name": "defective", "lam": {"re": 0.5, "im": 0.0}, "m": 2},
            "measure": {"kind": "gauss-legendre", "n": 6, "a": 0.0, "b": 1.0},
            "command": "jordan",
            "params": {"cluster_tol": 1e-5},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        blocks = json.loads(text)["blocks"]
        sizes = sorted(b["m"] for b in blocks)
        assert sizes == [1, 1, 1, 1, 2]
        top = max(blocks, key=lambda b: b["m"])
        assert obj_to_complex(top["lambda"]) == pytest.approx(0.5, abs=1e-8)

    def test_grid_kernel_from_csv(self, tmp_path):
        rule = fk.gauss_legendre(6, 0.0, 1.0)
        table = fk.separable_kernel([1.0], [lambda y: y], [lambda z: z]).sample_matrix(rule)
        path = tmp_path / "table.csv"
        write_complex_csv(path, table)
        doc = {
            "kernel": {"name": "grid", "csv": str(path)},
            "measure": {"kind": "gauss-legendre", "n": 6, "a": 0.0, "b": 1.0},
            "command": "djf",
            "params": {},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        vals = [obj_to_complex(v) for v in json.loads(text)["eigenvalues"]]
        assert abs(vals[0] - 1.0 / 3.0) <= 1e-12

    def test_iterate_csv(self, tmp_path):
        doc = {
            "kernel": YZ_DET["kernel"],
            "measure": YZ_DET["measure"],
            "command": "iterate",
            "params": {"n": 2},
            "output": {"format": "csv", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        from fredkit.serialize import read_complex_csv
        import io

        M = read_complex_csv(io.StringIO(text))
        rule = fk.gauss_legendre(8, 0.0, 1.0)
        want = np.outer(rule.nodes, rule.nodes) / 3.0
        assert np.max(np.abs(M - want)) <= 1e-15

    def test_dump_operator(self, tmp_path):
        prefix = tmp_path / "op"
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(MEHLER_EIG))
        out = tmp_path / "o.json"
        code = main(["-c", str(cfg), "--output", str(out), "--dump-operator", str(prefix)])
        assert code == 0
        for suffix in ("K", "A", "B"):
            assert (tmp_path / f"op_{suffix}.csv").exists()

    def test_dump_vectors(self, tmp_path):
        prefix = tmp_path / "vec"
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(MEHLER_EIG))
        out = tmp_path / "o.json"
        code = main(["-c", str(cfg), "--output", str(out), "--dump-vectors", str(prefix)])
        assert code == 0
        from fredkit.serialize import read_complex_csv

        P = read_complex_csv(tmp_path / "vec_P.csv")
        assert P.shape == (40, 40)
        rule = fk.gauss_hermite_prob(40)
        assert np.max(np.abs(P[:, 1].real) - np.abs(rule.nodes)) <= 1e-4

    def test_inline_measure_rule(self, tmp_path):
        rule = fk.gauss_legendre(8, 0.0, 1.0)
        doc = dict(YZ_DET, measure=rule.to_dict(), command="djf", params={})
        doc["output"] = {"format": "json", "destination": None}
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        vals = [obj_to_complex(v) for v in json.loads(text)["eigenvalues"]]
        assert abs(vals[0] - 1.0 / 3.0) <= 1e-12

    def test_console_entry_point(self, tmp_path):
        import subprocess
        import sys

        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(MEHLER_EIG))
        proc = subprocess.run(
            [sys.executable, "-m", "fredkit.cli", "-c", str(cfg)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["hermitian"] is True

    def test_svd_command(self, tmp_path):
        doc = {
            "kernel": {"name": "separable", "coeffs": [1.0], "rights": [[0, 1]],
                       "lefts": [[0, 0, 1]]},
            "measure": YZ_DET["measure"],
            "command": "svd",
            "params": {},
            "output": {"format": "json", "destination": None},
        }
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        doc_out = json.loads(text)
        assert doc_out["singular_values"][0] == pytest.approx(1 / np.sqrt(15), abs=1e-12)
        assert doc_out["rank_numerical"] == 1

    def test_subcommand_overrides_config(self, tmp_path):
        doc = dict(MEHLER_EIG, command="djf")
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(doc))
        out = tmp_path / "o.json"
        code = main(["eig", "-c", str(cfg), "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["hermitian"] is True


class TestValidate:
    def test_valid_config_empty_report(self):
        assert validate(RunConfig.from_dict(MEHLER_EIG)) == []

    def test_zero_size_measure(self):
        doc = dict(MEHLER_EIG, measure={"kind": "gauss-hermite-prob", "n": 0})
        report = validate(RunConfig.from_dict(doc))
        assert len(report) == 1 and "measure.n" in report[0]

    def test_bad_correlation(self):
        doc = dict(MEHLER_EIG, kernel={"name": "mehler", "r": 1.5})
        report = validate(RunConfig.from_dict(doc))
        assert len(report) == 1 and "kernel.r" in report[0]

    def test_validate_command_reports_instead_of_failing(self, tmp_path):
        doc = dict(MEHLER_EIG, command="validate",
                   kernel={"name": "mehler", "r": 1.5})
        code, text = run_cli(tmp_path, doc)
        assert code == 0
        assert any("kernel.r" in v for v in json.loads(text)["violations"])

    def test_round_trip_random_configs(self):
        rng = np.random.default_rng(15)
        kernels = [
            {"name": "mehler", "r": 0.3},
            {"name": "separable", "coeffs": [1.0], "rights": [[0, 1]], "lefts": [[0, 1]]},
            {"name": "defective", "lam": {"re": 0.5, "im": 0.0}, "m": 2},
        ]
        measures = [
            {"kind": "gauss-hermite-prob", "n": 12},
            {"kind": "gauss-legendre", "n": 8, "a": 0.0, "b": 1.0},
            {"kind": "discrete", "points": [0.0, 1.0], "weights": [0.5, 0.5]},
        ]
        for _ in range(100):
            doc = {
                "kernel": kernels[rng.integers(len(kernels))],
                "measure": measures[rng.integers(len(measures))],
                "command": str(rng.choice(["eig", "djf", "svd", "trace"])),
                "params": {"n": int(rng.integers(0, 5))},
                "output": {
                    "format": str(rng.choice(["json", "csv"])),
                    "destination": None,
                },
            }
            config = RunConfig.from_dict(doc)
            assert RunConfig.from_dict(config.to_dict()) == config
            assert config.to_dict() == doc
