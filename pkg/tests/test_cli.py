import json

from dimlab.cli import main
from dimlab.seqcore import read_seq


def run_cli(*argv):
    return main(list(argv))


def test_gen_deterministic(tmp_path):
    a = tmp_path / "a.seq"
    b = tmp_path / "b.seq"
    for out in (a, b):
        assert run_cli("gen", "--kind", "dilute", "--alpha", "1/2",
                       "--n", "20000", "--seed", "7", "--out", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads((tmp_path / "a.seq.meta.json").read_text())
    assert meta["tool"] == "dimlab"
    assert meta["config"]["kind"] == "dilute"
    assert meta["config_hash"] == json.loads(
        (tmp_path / "b.seq.meta.json").read_text())["config_hash"]


def test_usage_errors_exit_2(tmp_path):
    assert run_cli("gen", "--kind", "bogus", "--n", "10",
                   "--out", str(tmp_path / "x.seq")) == 2
    assert run_cli("gen", "--kind", "dilute", "--n", "10",
                   "--out", str(tmp_path / "x.seq")) == 2  # alpha missing
    out = tmp_path / "o"
    assert run_cli("extract", "--outdir", str(out)) == 2  # no input


def test_domain_errors_exit_1(tmp_path):
    bad = tmp_path / "bad.seq"
    bad.write_bytes(b"NOPE" + b"\x00" * 8)
    assert run_cli("profile", str(bad), "--out", str(tmp_path / "p.csv")) == 1


def test_profile_csv_shape(tmp_path):
    seq = tmp_path / "s.seq"
    run_cli("gen", "--kind", "zeros", "--n", "4096", "--out", str(seq))
    out = tmp_path / "profile.csv"
    assert run_cli("--no-plots", "profile", str(seq), "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,c,ratio,ratio_num,ratio_den"
    first = lines[1].split(",")
    assert int(first[0]) == 64
    # zeros cost 4 bits under the proxy at every length
    assert int(first[1]) == 4
    assert (tmp_path / "profile.csv.meta.json").exists()


def test_encode_decode_roundtrip_via_cli(tmp_path):
    seq = tmp_path / "s.seq"
    run_cli("gen", "--kind", "prng", "--n", "5050", "--seed", "3",
            "--out", str(seq))
    enc = tmp_path / "enc.seq"
    trace = tmp_path / "trace.csv"
    assert run_cli("--no-plots", "encode", str(seq), "--out", str(enc),
                   "--trace", str(trace)) == 0
    dec = tmp_path / "dec.seq"
    assert run_cli("--no-plots", "decode", str(enc), "--n", "5050",
                   "--out", str(dec)) == 0
    assert read_seq(dec) == read_seq(seq)
    lines = trace.read_text().splitlines()
    assert lines[0] == "n,usage"
    assert len(lines) == 5051


def test_decode_malformed_exits_1(tmp_path):
    bad = tmp_path / "bad.seq"
    from dimlab.seqcore import BitSequence, pack
    bad.write_bytes(pack(BitSequence([0, 0, 0, 0])))
    assert run_cli("decode", str(bad), "--n", "3",
                   "--out", str(tmp_path / "d.seq")) == 1


def test_trace_machine_and_class_checks(tmp_path):
    seq = tmp_path / "s.seq"
    run_cli("gen", "--kind", "prng", "--n", "2000", "--seed", "5",
            "--out", str(seq))
    out = tmp_path / "t.csv"
    assert run_cli("--no-plots", "trace", str(seq), "--machine", "identity",
                   "--n", "500", "--verify-declared", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,usage,per_bit_queries"
    assert lines[1] == "1,1,1"


def test_experiment_zeros_row(tmp_path):
    outdir = tmp_path / "exp"
    assert run_cli("--no-plots", "experiment", "--preset", "zeros-degenerate",
                   "--outdir", str(outdir)) == 0
    summary = (outdir / "summary.csv").read_text().splitlines()
    assert summary[0] == ("name,dim_hat_H_S,dim_hat_P_S,target,"
                          "dim_hat_H_R,dim_hat_P_R,pass_fail,note")
    row = summary[1]
    assert row.startswith("zeros-degenerate,")
    assert "fail" in row
    assert "precondition" in row
    assert (outdir / "zeros-degenerate" / "source.seq").exists()
    assert (outdir / "zeros-degenerate" / "profile_source.csv").exists()


def test_experiment_rerun_identical(tmp_path):
    out1 = tmp_path / "e1"
    out2 = tmp_path / "e2"
    for out in (out1, out2):
        assert run_cli("--no-plots", "experiment", "--preset",
                       "zeros-degenerate", "--outdir", str(out)) == 0
    assert (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()


def test_config_file_validation(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{\"name\": \"x\"}")
    assert run_cli("experiment", "--config", str(cfg),
                   "--outdir", str(tmp_path / "o")) == 2
    cfg.write_text("not json")
    assert run_cli("experiment", "--config", str(cfg),
                   "--outdir", str(tmp_path / "o")) == 2
