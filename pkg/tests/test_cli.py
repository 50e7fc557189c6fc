import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from ifnetlab import networks as nw
from ifnetlab.cli import run


def write_spec(path: Path, channel, kind="discrete", decimal_strings=False):
    topo = channel.topology
    doc = {
        "k1": topo.k1, "k2": topo.k2,
        "tx_messages": [sorted(s) for s in topo.tx_messages],
        "rx_messages": [sorted(s) for s in topo.rx_messages],
        "adjacency": [[bool(x) for x in row] for row in topo.adjacency],
        "kind": kind,
    }
    if topo.tx_names != tuple(f"X{i+1}" for i in range(topo.k1)):
        doc["tx_names"] = list(topo.tx_names)
    if kind == "discrete":
        flat = [float(x) for x in np.ravel(channel.tensor)]
        if decimal_strings:
            flat = [repr(x) for x in flat]
        doc["discrete"] = {
            "alphabets_in": list(channel.input_cards),
            "alphabets_out": list(channel.output_cards),
            "tensor": flat,
        }
    else:
        doc["gaussian"] = {
            "gains": [[float(x) for x in row] for row in channel.gains],
            "powers": list(channel.powers),
        }
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def swap_spec(tmp_path):
    return write_spec(tmp_path / "swap.json", nw.swap_channel())


@pytest.fixture
def gauss_spec(tmp_path):
    return write_spec(tmp_path / "g.json", nw.gaussian_cic(2.0, 0.5), kind="gaussian")


def xor_cm_spec(tmp_path):
    from conftest import xor_cm_channel

    return write_spec(tmp_path / "xorcm.json", xor_cm_channel(0.1))


def hash_tree(d: Path) -> str:
    h = hashlib.sha256()
    for f in sorted(Path(d).rglob("*")):
        if f.is_file():
            h.update(f.name.encode())
            h.update(f.read_bytes())
    return h.hexdigest()


class TestExitCodes:
    def test_validate_ok(self, swap_spec, tmp_path):
        assert run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                    "validate"]) == 0

    def test_check_holds(self, swap_spec, tmp_path):
        rc = run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                  "--grid", "4", "check", "C-2CIC"])
        assert rc == 0
        doc = json.loads((tmp_path / "o" / "check.json").read_text())
        assert doc["report"]["verdict"] == "HOLDS"
        assert doc["schema_version"] == 1

    def test_check_fails(self, tmp_path):
        spec = write_spec(tmp_path / "par.json", nw.parallel_channel())
        rc = run(["--channel", str(spec), "--out", str(tmp_path / "o"),
                  "--grid", "4", "check", "C-2CIC"])
        assert rc == 1

    def test_bad_tensor_exit_3(self, tmp_path):
        doc = json.loads(write_spec(tmp_path / "x.json", nw.swap_channel()).read_text())
        doc["discrete"]["tensor"] = [0.5] * 16
        (tmp_path / "bad.json").write_text(json.dumps(doc))
        rc = run(["--channel", str(tmp_path / "bad.json"),
                  "--out", str(tmp_path / "o"), "validate"])
        assert rc == 3

    def test_missing_channel_exit_3(self, tmp_path):
        assert run(["--out", str(tmp_path / "o"), "check", "C-2CIC"]) == 3

    def test_unknown_condition_exit_3(self, swap_spec, tmp_path):
        assert run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                    "check", "C-NOPE"]) == 3

    def test_decimal_string_probabilities(self, tmp_path):
        spec = write_spec(tmp_path / "s.json", nw.swap_channel(),
                          decimal_strings=True)
        assert run(["--channel", str(spec), "--out", str(tmp_path / "o"),
                    "validate"]) == 0


class TestListingsRoundTrip:
    def test_every_listed_condition_runs(self, tmp_path, capsys):
        assert run(["--out", str(tmp_path / "o"), "check", "--list"]) == 0
        listed = capsys.readouterr().out.split()
        from ifnetlab import regimes

        assert set(listed) == set(regimes.list_conditions()) | set(
            regimes.list_gaussian_conditions()
        )
        # a listed id is never CATALOG_UNKNOWN: probe one discrete and one
        # gaussian id against matching channels
        swap = write_spec(tmp_path / "swap.json", nw.swap_channel())
        assert run(["--channel", str(swap), "--out", str(tmp_path / "o"),
                    "--grid", "2", "check", "C-2CIC"]) in (0, 1, 2)

    def test_region_list(self, tmp_path, capsys):
        assert run(["--out", str(tmp_path / "o"), "region", "--list"]) == 0
        listed = capsys.readouterr().out.split()
        from ifnetlab import regions

        assert set(listed) == set(regions.list_templates())


class TestArtifacts:
    def test_region_outputs(self, tmp_path):
        spec = xor_cm_spec(tmp_path)
        rc = run(["--channel", str(spec), "--out", str(tmp_path / "o"),
                  "--grid", "2", "region", "T-CICCM-SW", "--hrep"])
        assert rc == 0
        files = {f.name for f in (tmp_path / "o").iterdir()}
        assert "region_T-CICCM-SW_support.csv" in files
        assert "region_T-CICCM-SW_samples.csv" in files
        assert any(f.startswith("region_T-CICCM-SW_maximizer") for f in files)
        csv = (tmp_path / "o" / "region_T-CICCM-SW_support.csv").read_text()
        assert csv.splitlines()[0] == "d_R0,d_R1,d_R2,support"

    def test_compare(self, tmp_path):
        spec = xor_cm_spec(tmp_path)
        rc = run(["--channel", str(spec), "--out", str(tmp_path / "o"),
                  "--grid", "4", "compare", "T-CICCM-SW", "T-CICCM-HAN"])
        assert rc == 0
        doc = json.loads((tmp_path / "o" / "compare.json").read_text())
        assert doc["verdict"] == "EQUAL"

    def test_determinism_across_workers(self, tmp_path):
        spec = xor_cm_spec(tmp_path)
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out, workers in ((a, "1"), (b, "2")):
            rc = run(["--channel", str(spec), "--out", str(out), "--grid", "4",
                      "--workers", workers, "--seed", "7",
                      "region", "T-CICCM-SW"])
            assert rc == 0
        assert hash_tree(a) == hash_tree(b)

    def test_repeat_identical_bytes(self, swap_spec, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert run(["--channel", str(swap_spec), "--out", str(out),
                        "--grid", "4", "--seed", "3", "check", "C-2CIC"]) == 0
        assert hash_tree(a) == hash_tree(b)


class TestLemmasAndBounds:
    def test_verify_lemma_1(self, swap_spec, tmp_path):
        rc = run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                  "--grid", "4", "verify-lemma", "1", "--samples", "20"])
        assert rc == 0
        doc = json.loads((tmp_path / "o" / "verify_lemma.json").read_text())
        assert doc["max_violation_bits"] <= 1e-9

    def test_verify_lemma_2(self, tmp_path):
        net = nw.GaussianNetwork(
            nw.cic_topology(2), np.array([[0.5, 0.7], [1.0, 2.0]]), (1.0, 1.0)
        )
        spec = write_spec(tmp_path / "g.json", net, kind="gaussian")
        rc = run(["--channel", str(spec), "--out", str(tmp_path / "o"),
                  "verify-lemma", "2", "--mu1", "1"])
        assert rc == 0

    def test_verify_lemma_3(self, swap_spec, tmp_path):
        rc = run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                  "--grid", "4", "verify-lemma", "3", "--samples", "10"])
        assert rc == 0

    def test_bounds_replay_all(self, tmp_path):
        rc = run(["--out", str(tmp_path / "o"), "bounds", "replay"])
        assert rc == 0
        doc = json.loads((tmp_path / "o" / "bounds_replay.json").read_text())
        assert doc["mismatches"] == 0
        assert len(doc["results"]) >= 41

    def test_bounds_enumerate(self, swap_spec, tmp_path):
        rc = run(["--channel", str(swap_spec), "--out", str(tmp_path / "o"),
                  "bounds", "enumerate"])
        assert rc == 0

    def test_sumrate_gaussian(self, gauss_spec, tmp_path):
        rc = run(["--channel", str(gauss_spec), "--out", str(tmp_path / "o"),
                  "sumrate", "GAUSS-CIC"])
        assert rc == 0
        doc = json.loads((tmp_path / "o" / "sumrate.json").read_text())
        assert doc["value_bits"] > 0
