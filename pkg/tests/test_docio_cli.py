import json
import os

import numpy as np
import pytest

from conftest import random_sym_plant
from qhinf.cli import main
from qhinf.docio import (DocumentError, SystemDocument, atomic_write_text,
                         complex_to_pairs, document_for, instantiate,
                         load_document, pairs_to_complex, save_document)
from qhinf.passive import PassivePlant
from qhinf.plant import HinfPlant


class TestComplexEncoding:
    def test_round_trip(self, rng):
        M = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        assert np.allclose(pairs_to_complex(complex_to_pairs(M)), M)

    def test_rejects_garbage(self):
        with pytest.raises(DocumentError):
            pairs_to_complex([[["a", "b"]]])


class TestDocuments:
    def test_plant_round_trip(self, rng, tmp_path):
        plant = random_sym_plant(rng, gamma=1.7)
        path = str(tmp_path / "plant.json")
        save_document(document_for(plant), path)
        loaded = instantiate(load_document(path))
        assert isinstance(loaded, HinfPlant)
        assert np.allclose(loaded.A, plant.A)
        assert loaded.gamma == pytest.approx(1.7)

    def test_passive_round_trip(self, rng, tmp_path):
        C = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        plant = PassivePlant(C, np.eye(2), np.eye(2), np.eye(2), 0.8)
        path = str(tmp_path / "passive.json")
        save_document(document_for(plant), path)
        loaded = instantiate(load_document(path))
        assert isinstance(loaded, PassivePlant)
        assert np.allclose(loaded.C1, plant.C1)

    def test_gamma_override(self, rng, tmp_path):
        plant = random_sym_plant(rng, gamma=1.7)
        path = str(tmp_path / "plant.json")
        save_document(document_for(plant), path)
        loaded = instantiate(load_document(path), gamma=2.4)
        assert loaded.gamma == pytest.approx(2.4)

    def test_bad_schema_version(self, tmp_path):
        path = str(tmp_path / "bad.json")
        atomic_write_text(path, json.dumps({"schema_version": "99",
                                            "kind": "plant", "matrices": {}}))
        with pytest.raises(DocumentError):
            load_document(path)

    def test_bad_kind(self, tmp_path):
        path = str(tmp_path / "bad.json")
        atomic_write_text(path, json.dumps({"schema_version": "1",
                                            "kind": "widget", "matrices": {}}))
        with pytest.raises(DocumentError):
            load_document(path)

    def test_json_error_is_line_anchored(self, tmp_path):
        path = str(tmp_path / "broken.json")
        atomic_write_text(path, '{\n  "kind": plant\n}\n')
        with pytest.raises(DocumentError, match=r":2:"):
            load_document(path)

    def test_missing_matrix_named(self, tmp_path):
        doc = SystemDocument("plant", {"Hmat": np.zeros((2, 2))}, gamma=1.0)
        path = str(tmp_path / "incomplete.json")
        save_document(doc, path)
        with pytest.raises(DocumentError, match="C1"):
            instantiate(load_document(path))

    def test_atomic_write_leaves_no_temp(self, tmp_path):
        path = str(tmp_path / "file.txt")
        atomic_write_text(path, "hello\n")
        atomic_write_text(path, "world\n")
        assert open(path).read() == "world\n"
        assert os.listdir(tmp_path) == ["file.txt"]


class TestCli:
    def write_plant(self, rng, tmp_path, gamma=1.8) -> str:
        path = str(tmp_path / "plant.json")
        save_document(document_for(random_sym_plant(rng, gamma=gamma)), path)
        return path

    def test_example_cavity_exit_zero(self, capsys):
        assert main(["example", "cavity"]) == 0
        out = capsys.readouterr().out
        assert "certified" in out

    def test_synthesize_json(self, rng, tmp_path, capsys):
        path = self.write_plant(rng, tmp_path)
        assert main(["synthesize", path, "--json"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["certified"] is True
        assert rep["gamma"] == pytest.approx(1.8)

    def test_synthesize_refusal_exit_two(self, rng, tmp_path, capsys):
        path = self.write_plant(rng, tmp_path)
        code = main(["synthesize", path, "--gamma", "0.05"])
        assert code == 2
        err = capsys.readouterr()
        assert "not positive definite" in err.out + err.err

    def test_check_reports_assumptions(self, rng, tmp_path, capsys):
        path = self.write_plant(rng, tmp_path)
        assert main(["check", path]) == 0
        out = capsys.readouterr().out
        assert "pr (joint plant)" in out.lower()
        assert "a3/a4" in out.lower()

    def test_sweep_csv(self, rng, tmp_path, capsys):
        path = self.write_plant(rng, tmp_path)
        out_path = str(tmp_path / "sweep.csv")
        assert main(["sweep-gamma", path, "--min", "0.5", "--max", "3.0",
                     "--steps", "6", "--out", out_path]) == 0
        lines = open(out_path).read().strip().splitlines()
        assert lines[0] == "gamma,certified,hinf"
        assert len(lines) == 7
        # no numpy repr leakage in the table
        assert "np.float64" not in "".join(lines)

    def test_freqresp_csv(self, rng, tmp_path):
        path = self.write_plant(rng, tmp_path)
        out_path = str(tmp_path / "fr.csv")
        assert main(["freqresp", path, "--points", "16",
                     "--out", out_path]) == 0
        lines = open(out_path).read().strip().splitlines()
        assert lines[0].startswith("omega,")
        assert len(lines) == 17

    def test_verify_round_trip(self, rng, tmp_path, capsys):
        path = self.write_plant(rng, tmp_path)
        ctl_path = str(tmp_path / "controller.json")
        assert main(["synthesize", path, "--out", ctl_path + ".report",
                     "--json"]) == 0
        from qhinf.synth import synthesize
        plant = instantiate(load_document(path))
        ctl = synthesize(plant).controller
        save_document(SystemDocument("controller", {
            "AK": ctl.AK, "BK": ctl.BK, "CK": ctl.CK}, gamma=plant.gamma),
            ctl_path)
        assert main(["verify", path, ctl_path]) == 0
        assert "PASS" in capsys.readouterr().out.upper()

    def test_missing_file_exit_one(self, capsys):
        assert main(["synthesize", "/nonexistent/plant.json"]) == 1
        assert "error" in capsys.readouterr().err
