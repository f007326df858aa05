# Copyright (c) 2026 The evsim developers
# Distributed under the MIT software license, see the accompanying
# file COPYING or http://www.opensource.org/licenses/mit-license.php.

import hashlib
import json
import os
import pathlib
import subprocess

import pytest

import evsim

ROOT = pathlib.Path(__file__).resolve().parents[2]
MAINNET = ROOT / "tests" / "data" / "mainnet_headers.hex"
GENESIS = "000000000019d6689c085ae165831e934ff763ae46a2a6c172b3f1b60a8ce26f"

SMALL = """
name = "py-small"
seed = 5
duration_s = 600

[topology]
kind = "ws"
n = 20
k = 4
beta = 0.2
seed = 1

[[miners]]
alpha = 0.6
bandwidth_bps = 50e6

[[miners]]
alpha = 0.4
bandwidth_bps = 50e6

[block]
max_bytes = 100_000
target_interval_s = 60

[metrics]
trials = 1000
"""


def dsha(b):
    return hashlib.sha256(hashlib.sha256(b).digest()).digest()


def test_sha256d_matches_hashlib():
    for data in (b"", b"abc", bytes(range(200))):
        assert evsim.sha256d(data) == dsha(data)


def test_mainnet_headers():
    lines = MAINNET.read_text().split()
    assert evsim.header_hash(lines[0]) == GENESIS
    for line in lines:
        assert evsim.header_hash(line) == dsha(bytes.fromhex(line))[::-1].hex()
        assert evsim.check_proof_of_work(line)
    code, out, _ = evsim.verify(str(MAINNET))
    assert code == 0
    assert out.count(" ok") == 10


def test_merkle_round_trip():
    leaves = [dsha(bytes([i]))[::-1].hex() for i in range(7)]
    root = evsim.merkle_root(leaves)
    for i, leaf in enumerate(leaves):
        index, siblings = evsim.merkle_proof(leaves, i)
        assert evsim.verify_merkle_proof(leaf, index, siblings, root)
        assert not evsim.verify_merkle_proof(leaves[(i + 1) % 7], index, siblings, root)


def test_topology_summary():
    s = evsim.topology("full-mesh", [4])
    assert s["avg_path_length"] == 1.0 and s["clustering"] == 1.0 and s["edges"] == 6
    a = evsim.topology("ws", [200, 6, 0.1], seed=7, miners=3)
    assert a == evsim.topology("ws", [200, 6, 0.1], seed=7, miners=3)
    assert a["miner_hop_diameter"] >= 1
    with pytest.raises(ValueError):
        evsim.topology("ws", [10])


def test_sender_cost_shape():
    assert [evsim.sender_cost("unicast-flood", n, 1000) for n in (10, 100)] == [10_000, 100_000]
    assert evsim.sender_cost("multicast", 10, 1000) == evsim.sender_cost("multicast", 10_000, 1000)


def test_finality_and_coalitions():
    e = evsim.finality_error_rate(0.3, 6, trials=20_000, seed=3)
    assert abs(e["rate"] - (0.3 / 0.7) ** 6) <= 4 * e["stderr"]
    assert evsim.is_decentralised([0.34, 0.33, 0.11, 0.11, 0.11], 0.3) == (True, None)
    ok, coalition = evsim.is_decentralised([0.6, 0.2, 0.2], 0.5)
    assert not ok and coalition == [0]
    assert evsim.entropy_bits({0: 1, 1: 1, 2: 1, 3: 1}) == pytest.approx(2.0)


def test_config_error_is_value_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text(SMALL.replace("alpha = 0.4", "alpha = 0.3"))
    with pytest.raises(evsim.ConfigError, match="miners"):
        evsim.load_config(str(bad))
    code, _, err = evsim.run(str(bad), str(tmp_path / "out"))
    assert code == 2 and "line " in err


def test_run_is_reproducible_and_schema_valid(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    cfg = tmp_path / "small.toml"
    cfg.write_text(SMALL)
    assert evsim.run(str(cfg), str(tmp_path / "a"))[0] == 0
    assert evsim.run(str(cfg), str(tmp_path / "b"))[0] == 0
    for name in ("trace.csv", "blocks.csv", "metrics.json", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    doc = json.loads((tmp_path / "a" / "metrics.json").read_text())
    schema = json.loads((ROOT / "docs" / "metrics.schema.json").read_text())
    jsonschema.validate(doc, schema)
    assert doc["config"] == evsim.load_config(str(cfg))
    assert evsim.run_scenario(str(cfg)) == doc
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["config_digest"] == evsim.config_digest(str(cfg))
    for f in manifest["files"]:
        assert hashlib.sha256((tmp_path / "a" / f["name"]).read_bytes()).hexdigest() == f["sha256"]


CLI = os.environ.get("EVSIM_CLI")


@pytest.mark.skipif(not CLI, reason="EVSIM_CLI not set")
def test_cli_exit_codes(tmp_path):
    def run(*args):
        return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env={**os.environ, "NO_COLOR": "1"})

    assert run("topology", "full-mesh", "4").returncode == 0
    assert run("topology", "ws", "10").returncode == 2
    assert run("frobnicate").returncode == 2
    assert run("verify", MAINNET).returncode == 0
    lines = MAINNET.read_text().split()
    lines[5] = lines[5][:150] + ("1" if lines[5][150] == "0" else "0") + lines[5][151:]
    (tmp_path / "t.hex").write_text("\n".join(lines) + "\n")
    r = run("verify", tmp_path / "t.hex")
    assert r.returncode == 1 and "index 5" in r.stderr
    assert "\x1b[" not in r.stdout
    bad = tmp_path / "bad.toml"
    bad.write_text(SMALL.replace("alpha = 0.4", "alpha = 0.3"))
    r = run("run", bad, "-o", tmp_path / "out")
    assert r.returncode == 2 and "miners" in r.stderr
