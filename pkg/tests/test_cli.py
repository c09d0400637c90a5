import json

import pytest

from qpms.cli import main
from qpms.datagen import generate_fm, write_fasta, write_ground_truth


@pytest.fixture
def planted_files(tmp_path):
    planted = generate_fm(5, 40, 6, 1, 5, seed=9)
    fasta = tmp_path / "demo.fasta"
    truth = tmp_path / "demo.truth"
    fasta.write_bytes(write_fasta(planted.instance.sequences))
    truth.write_bytes(write_ground_truth(planted))
    return planted, str(fasta), str(truth)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSolve:
    def test_plain_output_sorted_tab_separated(self, capsys, planted_files):
        planted, fasta, _ = planted_files
        code, out, _ = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                           "--d", "1", "--q", "5", "--algo", "sigma")
        assert code == 0
        lines = out.splitlines()
        assert lines == sorted(lines)
        assert all(line.count("\t") == 1 for line in lines)
        motifs = [line.split("\t")[0] for line in lines]
        assert planted.motif.to_text() in motifs

    def test_all_algorithms_agree(self, capsys, planted_files):
        _, fasta, _ = planted_files
        outputs = set()
        for algo in ["oracle", "prune", "qpms7", "traver", "sigma"]:
            code, out, _ = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                               "--d", "1", "--q", "5", "--algo", algo)
            assert code == 0
            outputs.add(out)
        assert len(outputs) == 1

    def test_json_report(self, capsys, planted_files):
        _, fasta, truth = planted_files
        code, out, _ = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                           "--d", "1", "--q", "5", "--truth", truth, "--json")
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == 1
        assert report["recovered"] is True
        assert report["motif_count"] == len(report["motifs"])
        assert report["params"]["n"] == 5
        assert report["visited_nodes"] > 0

    def test_threads_do_not_change_output(self, capsys, planted_files):
        _, fasta, _ = planted_files
        results = set()
        for t in ("1", "2"):
            code, out, _ = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                               "--d", "1", "--q", "5", "--threads", t)
            assert code == 0
            results.add(out)
        assert len(results) == 1

    def test_bad_params_exit_2(self, capsys, planted_files):
        _, fasta, _ = planted_files
        code, _, err = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                           "--d", "1", "--q", "9")
        assert code == 2
        assert "error" in err

    def test_oracle_budget_exit_3(self, capsys, planted_files):
        _, fasta, _ = planted_files
        code, _, err = run(capsys, "solve", "--fasta", fasta, "--l", "9",
                           "--d", "0", "--q", "5", "--algo", "oracle")
        assert code == 3
        assert "budget" in err

    def test_reorder_flags_accepted(self, capsys, planted_files):
        _, fasta, _ = planted_files
        code, out, _ = run(capsys, "solve", "--fasta", fasta, "--l", "6",
                           "--d", "1", "--q", "5", "--no-string-reorder",
                           "--no-pos-reorder")
        assert code == 0


class TestGenerate:
    def test_writes_files_deterministically(self, capsys, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        for out in (out1, out2):
            code, _, _ = run(capsys, "generate", "--n", "4", "--m", "30",
                             "--l", "5", "--d", "1", "--q", "4",
                             "--seed", "5", "--out", str(out))
            assert code == 0
        assert (tmp_path / "a.fasta").read_bytes() == \
            (tmp_path / "b.fasta").read_bytes()
        assert (tmp_path / "a.truth").read_bytes() == \
            (tmp_path / "b.truth").read_bytes()

    def test_generated_files_resolve_to_motif(self, capsys, tmp_path):
        prefix = tmp_path / "gen"
        code, _, _ = run(capsys, "generate", "--n", "5", "--m", "30",
                         "--l", "5", "--d", "1", "--q", "5",
                         "--seed", "3", "--out", str(prefix))
        assert code == 0
        code, out, _ = run(capsys, "solve", "--fasta", f"{prefix}.fasta",
                           "--l", "5", "--d", "1", "--q", "5",
                           "--truth", f"{prefix}.truth", "--json")
        assert code == 0
        assert json.loads(out)["recovered"] is True

    def test_bad_params_exit_2(self, capsys, tmp_path):
        code, _, _ = run(capsys, "generate", "--n", "1", "--m", "30",
                         "--l", "5", "--d", "1", "--q", "1",
                         "--out", str(tmp_path / "x"))
        assert code == 2


class TestBench:
    def test_timeout_rows(self, capsys):
        code, out, _ = run(capsys, "bench", "--q", "20", "--algos", "sigma",
                           "--seeds", "1", "--timeout", "0.8")
        assert code == 0
        lines = out.splitlines()
        # six challenging columns, all timed out at this budget
        cells = [ln for ln in lines if "TIMEOUT" in ln]
        assert len(cells) == 6
        for l, d in [(13, 4), (15, 5), (17, 6), (19, 7), (21, 8), (23, 9)]:
            assert any(ln.startswith(f"{l}") and f"  {d}  " in ln for ln in lines)

    def test_json_rows(self, capsys):
        code, out, _ = run(capsys, "bench", "--q", "20", "--algos", "sigma",
                           "--seeds", "1", "--timeout", "0.8", "--json")
        assert code == 0
        rows = [json.loads(line) for line in out.splitlines()]
        assert len(rows) == 6
        assert {(r["l"], r["d"]) for r in rows} == \
            {(13, 4), (15, 5), (17, 6), (19, 7), (21, 8), (23, 9)}
        assert all(r["status"] == "TIMEOUT" for r in rows)

    def test_rejects_unknown_algo(self, capsys):
        code, _, err = run(capsys, "bench", "--algos", "magic", "--timeout", "1")
        assert code == 2


class TestScore:
    def test_identical_sequences_score_t_times_l(self, capsys, tmp_path):
        fasta = tmp_path / "same.fasta"
        fasta.write_text(">a\nACGTAC\n>b\nACGTAC\n>c\nACGTAC\n")
        code, out, _ = run(capsys, "score", "--fasta", str(fasta), "--l", "4")
        assert code == 0
        assert "score: 12" in out

    def test_explicit_starts(self, capsys, tmp_path):
        fasta = tmp_path / "two.fasta"
        fasta.write_text(">a\nAAACGT\n>b\nACGTTT\n")
        code, out, _ = run(capsys, "score", "--fasta", str(fasta), "--l", "4",
                           "--starts", "3,1")
        assert code == 0
        assert "consensus: ACGT" in out
        assert "score: 8" in out
        assert "alignment:" in out and "profile:" in out

    def test_budget_exit_3(self, capsys, tmp_path):
        fasta = tmp_path / "big.fasta"
        fasta.write_text("".join(f">s{i}\nACGTACGTACGT\n" for i in range(8)))
        code, _, err = run(capsys, "score", "--fasta", str(fasta), "--l", "3",
                           "--budget", "10")
        assert code == 3

    def test_bad_start_exit_2(self, capsys, tmp_path):
        fasta = tmp_path / "two.fasta"
        fasta.write_text(">a\nACGT\n>b\nACGT\n")
        code, _, _ = run(capsys, "score", "--fasta", str(fasta), "--l", "3",
                         "--starts", "9,1")
        assert code == 2
