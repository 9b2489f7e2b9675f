import json

import numpy as np
import pytest

from clusterndd import cluster
from clusterndd.cli import main
from clusterndd.qstate import dumps_state, loads_state
from conftest import as_state


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGen:
    def test_c4(self, capsys):
        code, out, _ = run(capsys, "gen", "--family", "c4", "--input", "0000")
        assert code == 0 and out.strip() == "1/2(|0000⟩+|0011⟩+|1100⟩−|1111⟩)"

    def test_c5(self, capsys):
        code, out, _ = run(capsys, "gen", "--family", "c5", "--input", "00000")
        assert out.strip() == "1/2(|00000⟩+|00111⟩+|11010⟩+|11101⟩)"

    def test_bad_bits(self, capsys):
        code, out, err = run(capsys, "gen", "--family", "c4", "--input", "01")
        assert code == 2 and out == "" and "length" in err

    def test_bad_family(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen", "--family", "c7", "--input", "0"])
        assert exc.value.code == 2

    def test_structured_to_file(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        code, _, _ = run(capsys, "gen", "--family", "c4", "--input", "0100", "--format", "structured",
                         "--out", str(path))
        state = loads_state(path.read_text())
        np.testing.assert_allclose(state.amps, cluster.table_state("C4", "1001").amps, atol=1e-12)


class TestNdd:
    def test_row(self, capsys):
        code, out, _ = run(capsys, "ndd", "--family", "c4", "--state", "row:0110")
        assert code == 0
        assert out.strip() == "label 0110  p = 1.000000000000  fidelity = 1.000000000000"

    def test_enumerate_superposition(self, capsys, tmp_path):
        a, b = cluster.table_state("C4", "0000"), cluster.table_state("C4", "0001")
        path = tmp_path / "sup.state"
        path.write_text(dumps_state(as_state(a.amps + b.amps)))
        code, out, _ = run(capsys, "ndd", "--family", "c4", "--state", str(path), "--enumerate")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 2
        assert all("p = 0.500000000000" in line for line in lines)

    def test_c5_repaired_default(self, capsys):
        code, out, _ = run(capsys, "ndd", "--family", "c5", "--state", "row:00010")
        assert code == 0 and out.startswith("label 00010  p = 1.000000000000")

    def test_size_mismatch(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(dumps_state(as_state([1, 0])))
        code, _, err = run(capsys, "ndd", "--family", "c4", "--state", str(path))
        assert code == 2 and err

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "ndd", "--family", "c4", "--state", "/nonexistent.json")
        assert code == 2

    def test_env_seed(self, capsys, monkeypatch, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(dumps_state(as_state(np.arange(1, 17))))
        monkeypatch.setenv("NDD_SEED", "42")
        _, first, _ = run(capsys, "ndd", "--family", "c4", "--state", str(path))
        _, second, _ = run(capsys, "ndd", "--family", "c4", "--state", str(path), "--seed", "42")
        assert first == second


class TestAudit:
    def test_c4(self, capsys):
        code, out, _ = run(capsys, "audit", "--family", "c4", "--verbatim")
        assert code == 0 and "0 non-orthogonal" in out

    def test_c5_verbatim(self, capsys):
        code, out, _ = run(capsys, "audit", "--family", "c5", "--verbatim")
        assert code == 1
        assert "<00010|00011>" in out and "<00010|00110>" in out
        assert "repair: row 00010, term |11000> -> +|11000>" in out

    def test_c5_repaired(self, capsys):
        code, out, _ = run(capsys, "audit", "--family", "c5", "--repaired")
        assert code == 0

    def test_structured(self, capsys):
        code, out, _ = run(capsys, "audit", "--family", "c5", "--format", "structured")
        doc = json.loads(out)
        assert doc["suggested_repairs"] == [{"label": "00010", "ket": "11000", "new_sign": 1}]


class TestDialogue:
    def test_single(self, capsys):
        code, out, _ = run(capsys, "dialogue", "--messages", "0000")
        assert code == 0 and "decoded 0000" in out and "fidelity 1.000000000000" in out

    def test_two(self, capsys):
        code, out, _ = run(capsys, "dialogue", "--messages", "1010,0110", "--seed", "3")
        lines = out.strip().splitlines()
        assert "sent 1010" in lines[0] and "decoded 1010" in lines[0]
        assert "sent 0110" in lines[1] and "decoded 0110" in lines[1]

    def test_malformed(self, capsys):
        code, _, err = run(capsys, "dialogue", "--messages", "10a0")
        assert code == 2 and err

    def test_contiguous_pairing(self, capsys):
        code, _, err = run(capsys, "dialogue", "--messages", "0000", "--pairing", "12|34")
        assert code == 1 and "8 distinct" in err


class TestErrors:
    def test_c4(self, capsys):
        code, out, _ = run(capsys, "errors", "--family", "c4")
        lines = out.strip().splitlines()
        assert code == 0
        assert sum("->" in line for line in lines) == 13
        assert "distinct labels reached: 11" in out

    def test_structured(self, capsys):
        code, out, _ = run(capsys, "errors", "--format", "structured")
        doc = json.loads(out)
        assert doc["distinct_labels"] == 11 and len(doc["cases"]) == 13


class TestRun:
    def test_circuit_file(self, capsys, tmp_path):
        path = tmp_path / "bell.circ"
        path.write_text("qubits 2\nH 1\nCNOT 2 +1\n")
        code, out, _ = run(capsys, "run", "--circuit", str(path))
        assert code == 0 and out.strip() == "1/√2(|00⟩+|11⟩)"


class TestVerify:
    def test_deterministic(self, capsys):
        first = run(capsys, "verify")
        second = run(capsys, "verify")
        assert first == second

    def test_groups_present(self, capsys):
        _, out, _ = run(capsys, "verify")
        for group in ("kernel", "gates", "tables", "audit", "generators", "ndd", "dense-coding", "errors"):
            assert f"] {group}" in out

    def test_corrupted_table_fails_audit(self, capsys, tmp_path):
        for fam in (cluster.C4, cluster.C5):
            (tmp_path / fam.table_file).write_text(cluster.read_table_text(fam))
        good = run(capsys, "verify", "--tables-dir", str(tmp_path))[1]
        assert "[PASS] tables" in good and "[PASS] audit" in good
        bad_file = tmp_path / cluster.C4.table_file
        bad_file.write_text(bad_file.read_text().replace("0001 : +0000 -0011", "0001 : +0000 +0011"))
        code, out, _ = run(capsys, "verify", "--tables-dir", str(tmp_path))
        assert code == 1
        assert "[FAIL] tables" in out and "[FAIL] audit" in out
