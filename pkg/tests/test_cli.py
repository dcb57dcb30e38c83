import json

from uminflow.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_measure_exact(capsys):
    code, out, _ = run(capsys, "measure", "ord(0<1<2)")
    assert code == 0 and out.strip() == "1/6"


def test_measure_tautology(capsys):
    code, out, _ = run(capsys, "measure", "ord(0<1)|!ord(0<1)")
    assert code == 0 and out.strip() == "1"


def test_measure_weight_json(capsys):
    code, out, _ = run(
        capsys,
        "measure", "--method", "weight", "-k", "10", "--format", "json",
        "ord(0<1)&!ord(2<3)",
    )
    assert code == 0
    data = json.loads(out)
    assert data["mu"] == "256/2^10" and data["precision"] == 10
    num, denom = data["mu"].split("/2^")
    assert abs(int(num) / 2 ** int(denom) - 0.25) < 2**-10


def test_measure_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "measure", "ord(1<1)")
    assert code == 2 and "parse error" in err


def test_measure_cap_exit_3(capsys):
    code, _, err = run(capsys, "measure", "ord(0<1<2<3<4<5<6<7<8)")
    assert code == 3 and "cap" in err


def test_measure_cap_flag(capsys):
    code, out, _ = run(
        capsys, "measure", "--cap-support", "9", "ord(0<1<2<3<4<5<6<7<8)"
    )
    assert code == 0 and out.strip() == "1/362880"


def test_caps_env_override(capsys, monkeypatch):
    monkeypatch.setenv("UMINFLOW_CAPS", "support=9")
    code, out, _ = run(capsys, "measure", "ord(0<1<2<3<4<5<6<7<8)")
    assert code == 0 and out.strip() == "1/362880"


def test_caps_env_rejects_garbage(capsys, monkeypatch):
    monkeypatch.setenv("UMINFLOW_CAPS", "support=lots")
    code, _, err = run(capsys, "measure", "ord(0<1)")
    assert code == 2 and "UMINFLOW_CAPS" in err


def test_encode_rejects_empty_bits(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("  \n")
    code, _, err = run(capsys, "encode", str(empty))
    assert code == 2 and "no bits" in err


def test_usage_error_exit_2(capsys):
    assert main(["measure"]) == 2
    assert main(["no-such-command"]) == 2


def test_sample_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.txt"
    out2 = tmp_path / "b.txt"
    assert main(["sample", "--seed", "5", "--n", "12", "--out", str(out1)]) == 0
    assert main(["sample", "--seed", "5", "--n", "12", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().split("\n")
    assert lines[0] == "12"
    assert sorted(map(int, lines[1].split())) == list(range(12))


def test_sample_graph_and_encode_round_trip(tmp_path, capsys):
    graph_file = tmp_path / "g.txt"
    assert (
        main(
            ["sample", "--seed", "3", "--n", "10", "--kind", "graph",
             "--out", str(graph_file)]
        )
        == 0
    )
    bits_file = tmp_path / "bits.txt"
    assert (
        main(
            ["encode", str(graph_file), "--direction", "graph-to-bits",
             "--out", str(bits_file)]
        )
        == 0
    )
    graph_again = tmp_path / "g2.txt"
    assert (
        main(
            ["encode", str(bits_file), "--direction", "bits-to-graph",
             "--out", str(graph_again)]
        )
        == 0
    )
    assert graph_file.read_text() == graph_again.read_text()


def test_encode_hex_input(tmp_path, capsys):
    hex_file = tmp_path / "bits.hex"
    hex_file.write_text("ff0\n")
    code, out, _ = run(capsys, "encode", str(hex_file))
    lines = [l for l in out.splitlines() if l]
    assert lines[0] == "6"  # 12 bits need 6 vertices (15 pair slots)
    assert len(lines) - 1 == 8  # ff0 sets the first eight pair bits


def test_test_command_json(capsys):
    code, out, _ = run(
        capsys,
        "test", "--seed", "3", "--depth", "3",
        "--families", "density,unbounded", "--format", "json",
    )
    assert code == 0
    runs = json.loads(out)
    assert runs[0]["seed"] == 3
    families = {r["family"] for r in runs[0]["reports"]}
    assert families == {"density(0,1)", "unbounded(0)"}
    for report in runs[0]["reports"]:
        for level in report["levels"]:
            assert set(level) == {"k", "exact_mu", "member"}


def test_test_command_seed_range_ordered(capsys):
    code, out, _ = run(
        capsys,
        "test", "--seeds", "0:4", "--depth", "1",
        "--families", "density", "--format", "json",
    )
    assert code == 0
    runs = json.loads(out)
    assert [r["seed"] for r in runs] == [0, 1, 2, 3]


def test_test_unknown_family(capsys):
    code, _, err = run(capsys, "test", "--families", "bogus")
    assert code == 2 and "unknown family" in err


def test_test_stream_poset_canon_fails(capsys):
    code, out, _ = run(
        capsys,
        "test", "--stream", "poset-canon", "--families", "poset",
        "--depth", "4", "--format", "json",
    )
    assert code == 0
    runs = json.loads(out)
    assert runs[0]["stream"] == "poset-canon"
    (report,) = runs[0]["reports"]
    assert report["verdict"] == "fails level 4"
    assert all(level["member"] for level in report["levels"])


def test_test_depth_zero_vacuous(capsys):
    code, out, _ = run(
        capsys,
        "test", "--seed", "1", "--depth", "0",
        "--families", "density", "--format", "json",
    )
    assert code == 0
    runs = json.loads(out)
    (report,) = runs[0]["reports"]
    assert report["levels"] == [] and report["verdict"] == "passes to depth 0"


def test_iso_identity(capsys):
    code, out, _ = run(
        capsys, "iso", "--a", "rational-v1", "--b", "rational-v1", "--depth", "15"
    )
    assert code == 0
    data = json.loads(out)
    assert data["pairs"] == [[i, i] for i in range(15)]


def test_randomizer_roundtrip_and_verify(tmp_path, capsys):
    cert_file = tmp_path / "cert.json"
    assert (
        main(["randomizer", "--seed", "2", "--depth", "25", "--out", str(cert_file)])
        == 0
    )
    cert = json.loads(cert_file.read_text())
    assert cert["depth"] == 25 and cert["tau"] == "rational-v1"
    code, out, _ = run(capsys, "randomizer", "--seed", "2", "--verify", str(cert_file))
    assert code == 0 and json.loads(out)["verified"]


def test_randomizer_verify_corrupted_exit_4(tmp_path, capsys):
    cert_file = tmp_path / "cert.json"
    main(["randomizer", "--seed", "2", "--depth", "25", "--out", str(cert_file)])
    cert = json.loads(cert_file.read_text())
    cert["pairs"][0][1], cert["pairs"][1][1] = cert["pairs"][1][1], cert["pairs"][0][1]
    cert_file.write_text(json.dumps(cert))
    code, _, err = run(capsys, "randomizer", "--seed", "2", "--verify", str(cert_file))
    assert code == 4 and "verification failed" in err
