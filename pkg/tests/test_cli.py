import json
import subprocess
import sys

import pytest

from ftqec.circuit import dump_circuit
from ftqec.circuits import build_flag_circuit, circuit3_reference
from ftqec.cli import main, read_config
from ftqec.pauli import PauliOperator
from ftqec.stats import CSV_COLUMNS, ConfigError

RUN = ["run", "--protocol", "enc-fb", "--plist", "0.01,0.02", "--shots", "2000",
       "--batch-size", "1000", "--seed", "3"]


@pytest.fixture
def c3_file(tmp_path):
    path = tmp_path / "c3.txt"
    path.write_text(dump_circuit(circuit3_reference()))
    return path


def test_ftverify_circuit3(c3_file, capsys):
    assert main(["ftverify", str(c3_file), "--gate-faults-only"]) == 0
    out, err = capsys.readouterr()
    assert len(out.splitlines()) == 17 and "16 harmful" in err and "fault tolerant" in err
    # preparing the first flag can also fail harmfully
    assert main(["ftverify", str(c3_file)]) == 0
    assert "18 harmful" in capsys.readouterr().err


def test_ftverify_flags_unprotected_circuit(tmp_path, capsys):
    path = tmp_path / "bare.txt"
    path.write_text(dump_circuit(build_flag_circuit(1, PauliOperator(4, 0b1111, 0), 4, ())))
    assert main(["ftverify", str(path)]) == 1
    assert "NOT fault tolerant" in capsys.readouterr().err


def test_run_csv_to_stdout(capsys):
    assert main(RUN) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 3
    assert [float(line.split(",")[0]) for line in lines[1:]] == [0.01, 0.02]


def test_run_json_to_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(RUN + ["--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["points"]) == 2 and doc["metadata"]["seed"] == 3
    assert "wrote 2 points" in capsys.readouterr().err


def test_config_file_with_cli_override(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("# sweep\nprotocol = enc-fb\nplist = 0.01\nshots = 1000\n"
                   "batch-size = 500\nseed = 9   # trailing comment\n")
    assert main(["run", "--config", str(cfg)]) == 0
    from_file = capsys.readouterr().out
    assert main(["run", "--config", str(cfg), "--shots", "1500"]) == 0
    overridden = capsys.readouterr().out
    assert from_file.splitlines()[1].split(",")[1] == "1000"
    assert overridden.splitlines()[1].split(",")[1] == "1500"


def test_read_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("protocol enc-fb\n")
    with pytest.raises(ConfigError, match="key=value"):
        read_config(cfg)


@pytest.mark.parametrize("argv", [
    ["run", "--protocol", "enc-fb"],
    ["run", "--protocol", "enc-fb", "--plist", "0.02,2.0"],
    ["ftverify", "/nonexistent/circuit.txt"],
])
def test_errors_exit_with_code_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("ftqec-grid-sim: error:")


def test_bad_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("protocol = enc-fb\nwarp = 9\n")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "warp" in capsys.readouterr().err


def test_malformed_circuit_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("QUBITS 2\nCX 0 5\n")
    assert main(["ftverify", str(path)]) == 2


def test_module_entry_point(c3_file):
    proc = subprocess.run([sys.executable, "-m", "ftqec.cli", "ftverify", str(c3_file),
                           "--gate-faults-only"], capture_output=True, text=True)
    assert proc.returncode == 0 and "16 harmful" in proc.stderr
