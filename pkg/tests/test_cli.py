import math

import pytest

from lplab import linear_code as lc
from lplab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def hamming_alist(tmp_path):
    path = tmp_path / "h74.alist"
    path.write_text(lc.to_alist(lc.hamming_7_4()))
    return str(path)


@pytest.fixture
def single_alist(tmp_path):
    path = tmp_path / "sc3.alist"
    path.write_text(lc.to_alist(lc.single_check(3)))
    return str(path)


class TestChannelInfo:
    def test_bsc_table(self, capsys):
        code, out, err = invoke(capsys, "channel-info", "--channel", "bsc:0.1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "index,label,prob,llr,partition,llr_bound"
        assert len(lines) == 3
        row0 = lines[1].split(",")
        assert row0[2] == "9/10"
        assert float(row0[3]) == pytest.approx(math.log(9), abs=1e-12)
        assert float(row0[5]) == pytest.approx(math.log(9), abs=1e-12)

    def test_channel_file(self, capsys, tmp_path):
        spec = tmp_path / "ch.txt"
        spec.write_text("symbol a 0.855\nsymbol b 29/200\npair a b\n")
        code, out, _ = invoke(capsys, "channel-info", "--channel", str(spec))
        assert code == 0
        assert "171/200" in out

    def test_qawgn_shorthand(self, capsys):
        code, out, _ = invoke(capsys, "channel-info", "--channel", "qawgn:1.0:2:1.0")
        assert code == 0
        assert len(out.strip().splitlines()) == 5


class TestDistort:
    def test_csv_columns(self, capsys):
        code, out, _ = invoke(capsys, "distort", "--channel", "bsc:0.1",
                              "--alpha", "0.1")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "delta,c,s,epsilon,l1"
        fields = row.split(",")
        assert fields[0] == "1/20"
        assert float(fields[1]) == pytest.approx(0.8075495535678563, abs=1e-9)
        assert fields[4] == "9/100"


class TestGraph:
    def test_redundant_emission(self, capsys, hamming_alist):
        code, out, _ = invoke(capsys, "graph", "--alist", hamming_alist,
                              "--redundant", "4")
        assert code == 0
        H = lc.from_alist(out)
        assert H.m == 7

    def test_passthrough_roundtrip(self, capsys, hamming_alist):
        code, out, _ = invoke(capsys, "graph", "--alist", hamming_alist)
        assert code == 0
        assert lc.from_alist(out) == lc.hamming_7_4()


class TestDecode:
    def test_success_exit_zero(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("1.0\n1.0\n1.0\n")
        code, out, _ = invoke(capsys, "decode", "--alist", single_alist,
                              "--llr", str(llr))
        assert code == 0
        assert out.splitlines()[1].startswith("success,0/1")

    def test_failure_exit_one_with_witness(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("-1.0\n0.5\n0.5\n")
        code, out, _ = invoke(capsys, "decode", "--alist", single_alist,
                              "--llr", str(llr), "--emit-witness-point")
        assert code == 1
        header, row = out.strip().splitlines()
        assert header == "status,optimal_value,witness_point"
        assert row.startswith("failure,-1/2,")
        assert ";" in row.split(",")[2]

    def test_excess_flag(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("-0.2\n0.7\n0.7\n")
        code, _, _ = invoke(capsys, "decode", "--alist", single_alist,
                            "--llr", str(llr), "--excess", "0.2")
        assert code == 0

    def test_missing_file_is_data_error(self, capsys, single_alist):
        code, _, err = invoke(capsys, "decode", "--alist", single_alist,
                              "--llr", "/nonexistent/llr.txt")
        assert code == 3
        assert "error" in err

    def test_malformed_llr_is_data_error(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("1.0\nbanana\n1.0\n")
        code, _, err = invoke(capsys, "decode", "--alist", single_alist,
                              "--llr", str(llr))
        assert code == 3
        assert "banana" in err


class TestWitnessCommands:
    def test_find(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("-0.4\n0.5\n0.5\n")
        code, out, _ = invoke(capsys, "witness", "find", "--alist", single_alist,
                              "--llr", str(llr))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "kind,variable,check,value"
        assert lines[-1].startswith("slack,")

    def test_find_none(self, capsys, single_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("-1.0\n0.5\n0.5\n")
        code, out, _ = invoke(capsys, "witness", "find", "--alist", single_alist,
                              "--llr", str(llr))
        assert code == 0
        assert "no-witness" in out

    def test_trim(self, capsys, hamming_alist, tmp_path):
        llr = tmp_path / "l.txt"
        llr.write_text("\n".join(["1.5"] * 7) + "\n")
        code, out, _ = invoke(capsys, "witness", "trim", "--alist", hamming_alist,
                              "--llr", str(llr), "--k", "4", "--eps", "0.2")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "removed_checks,risky_count,bound_rhs,verdict"
        assert row.endswith("holds")


class TestExperiments:
    def test_simulate_and_reproducibility(self, capsys, single_alist, tmp_path):
        cfg = tmp_path / "sim.cfg"
        out1 = tmp_path / "a.csv"
        cfg.write_text(f"channel=bsc:0.1\nalist={single_alist}\n"
                       f"eps=0.0\ntrials=400\nseed=5\noutput={out1}\n")
        code, _, _ = invoke(capsys, "simulate", "--config", str(cfg))
        assert code == 0
        text1 = out1.read_bytes()
        code, _, _ = invoke(capsys, "simulate", "--config", str(cfg))
        assert out1.read_bytes() == text1
        header = text1.decode().splitlines()[0]
        assert header == "eps,trials,successes,p_hat,ci_halfwidth"

    def test_seed_override_changes_output(self, capsys, single_alist, tmp_path):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text(f"channel=bsc:0.1\nalist={single_alist}\n"
                       "eps=0.0\ntrials=400\nseed=5\n")
        _, out_a, _ = invoke(capsys, "simulate", "--config", str(cfg))
        _, out_b, _ = invoke(capsys, "simulate", "--config", str(cfg),
                             "--seed", "6")
        assert out_a != out_b

    def test_excess_curve(self, capsys, single_alist, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"channel=bsc:0.1\nalist={single_alist}\n"
                       "eps_grid=0.0,0.5,2.3\ntrials=150\nseed=4\n")
        code, out, _ = invoke(capsys, "excess-curve", "--config", str(cfg))
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        p_hats = [float(l.split(",")[3]) for l in lines[1:]]
        assert p_hats[0] >= p_hats[1] >= p_hats[2]

    def test_markov_check(self, capsys, hamming_alist, tmp_path):
        cfg = tmp_path / "m.cfg"
        cfg.write_text(f"channel=bsc:0.05\nalist={hamming_alist}\n"
                       "alpha=0.05\ntrials=150\nseed=2\n")
        code, out, _ = invoke(capsys, "markov-check", "--config", str(cfg))
        assert code == 0
        assert out.strip().splitlines()[1].endswith("holds")

    def test_awgn_check(self, capsys, single_alist, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text(f"alist={single_alist}\nsigma=0.5\nsigma2=0.6\n"
                       "trials=60\nseed=3\n")
        code, out, _ = invoke(capsys, "awgn-check", "--config", str(cfg))
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert float(row[7]) <= 1e-12   # max identity error

    def test_redundancy_exp(self, capsys, hamming_alist, tmp_path):
        cfg = tmp_path / "r.cfg"
        cfg.write_text(f"channel=bsc:0.1\nalist={hamming_alist}\n"
                       "k=4\neps=0.5\ntrials=80\nseed=8\n")
        code, out, _ = invoke(capsys, "redundancy-exp", "--config", str(cfg))
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert row[5] == "0"   # violations

    def test_missing_config_flag_usage_error(self, capsys):
        code, _, _ = invoke(capsys, "simulate")
        assert code == 2

    def test_missing_required_key_data_error(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("trials=10\n")
        code, _, err = invoke(capsys, "simulate", "--config", str(cfg))
        assert code == 3

    def test_unknown_command_usage_error(self, capsys):
        code, _, _ = invoke(capsys, "frobnicate")
        assert code == 2


class TestHelp:
    def test_every_subcommand_has_help(self, capsys):
        for cmd in ("channel-info", "distort", "graph", "decode", "witness",
                    "simulate", "excess-curve", "markov-check", "awgn-check",
                    "redundancy-exp"):
            code, out, _ = invoke(capsys, cmd, "--help")
            assert code == 0
            assert "usage" in out.lower()
