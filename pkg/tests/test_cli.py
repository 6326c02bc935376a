import json

import numpy as np
import pytest

from qsem import cli, corpus, qlm, retrieval


@pytest.fixture
def corpus_file(tmp_path):
    p = tmp_path / "corpus.tsv"
    p.write_text(
        "d1\tthe suit fits the man well\n"
        "d2\ta lawsuit suit filed in court by the lawyer\n"
        "d3\tcourt lawyer lawsuit trial\n"
        "d4\tjacket suit garment tailor\n"
        "d5\ttailor garment fabric\n",
        encoding="utf-8")
    return str(p)


@pytest.fixture
def index_file(tmp_path, corpus_file):
    out = str(tmp_path / "toy.idx")
    assert cli.run(["index", "build", "--corpus", corpus_file, "--format", "tsv",
                    "--weighting", "count", "--min-df", "1", "--out", out]) == 0
    return out


@pytest.fixture
def vectors_file(tmp_path):
    p = tmp_path / "vectors.tsv"
    p.write_text(
        "dog\t1.0,0.0,0.0\n"
        "cat\t0.0,1.0,0.0\n"
        "ball\t0.5,0.5,0.0\n"
        "food\t0.0,0.3,0.7\n",
        encoding="utf-8")
    return str(p)


@pytest.fixture
def triples_file(tmp_path):
    p = tmp_path / "triples.tsv"
    p.write_text("dog\tchases\tball\ncat\tchases\tfood\ndog\teats\tfood\n",
                 encoding="utf-8")
    return str(p)


class TestIndexBuild:
    def test_build_reports_sizes(self, tmp_path, corpus_file, capsys):
        out = str(tmp_path / "x.idx")
        code = cli.run(["index", "build", "--corpus", corpus_file,
                        "--format", "tsv", "--out", out])
        captured = capsys.readouterr()
        assert code == 0
        path, vocab, docs = captured.out.strip().split("\t")
        assert path == out and docs == "5"
        ix = corpus.load_index(out)
        assert len(ix.vocab) == int(vocab)

    def test_missing_corpus_is_data_error(self, tmp_path, capsys):
        code = cli.run(["index", "build", "--corpus", "/no/such.tsv",
                        "--out", str(tmp_path / "x.idx")])
        captured = capsys.readouterr()
        assert code == 3
        assert captured.err.startswith("ERROR 3: ")
        assert captured.err.count("\n") == 1

    def test_bad_min_df_is_usage_error(self, tmp_path, corpus_file, capsys):
        code = cli.run(["index", "build", "--corpus", corpus_file,
                        "--min-df", "0", "--out", str(tmp_path / "x.idx")])
        assert code == 2
        assert capsys.readouterr().err.startswith("ERROR 2: ")


class TestSearch:
    def test_ranked_tsv_output(self, index_file, capsys):
        code = cli.run(["search", "--index", index_file,
                        "--query", "suit NOT lawsuit", "--top-k", "3",
                        "--run-id", "q9"])
        captured = capsys.readouterr()
        assert code == 0
        lines = captured.out.splitlines()
        assert len(lines) == 3
        first = lines[0].split("\t")
        assert first[0] == "q9" and first[1] == "1" and first[2] == "d1"

    def test_matches_library_bytes(self, index_file, capsys):
        code = cli.run(["search", "--index", index_file, "--query", "suit",
                        "--top-k", "5", "--run-id", "q1"])
        captured = capsys.readouterr()
        assert code == 0
        ix = corpus.load_index(index_file)
        expected = retrieval.format_run(
            "q1", retrieval.search(ix, retrieval.parse_query("suit"), 5))
        assert captured.out == expected

    def test_unknown_positive_term(self, index_file, capsys):
        code = cli.run(["search", "--index", index_file, "--query", "zebra"])
        assert code == 3
        assert capsys.readouterr().err.startswith("ERROR 3: ")

    def test_malformed_query(self, index_file, capsys):
        assert cli.run(["search", "--index", index_file, "--query", "NOT x"]) == 3
        capsys.readouterr()

    def test_corrupt_index(self, tmp_path, capsys):
        bad = tmp_path / "bad.idx"
        bad.write_text("garbage\n", encoding="utf-8")
        assert cli.run(["search", "--index", str(bad), "--query", "suit"]) == 3
        capsys.readouterr()

    def test_byte_identical_across_runs(self, index_file, capsys):
        outs = []
        for _ in range(2):
            assert cli.run(["search", "--index", index_file,
                            "--query", "suit NOT lawsuit"]) == 0
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1]


class TestEvalMap:
    def test_perfect_run_prints_one(self, tmp_path, index_file, capsys):
        run_file = str(tmp_path / "run.tsv")
        assert cli.run(["search", "--index", index_file, "--query", "garment",
                        "--top-k", "2", "--run-id", "q1"]) == 0
        ranked = capsys.readouterr().out
        with open(run_file, "w", encoding="utf-8") as fh:
            fh.write(ranked)
        top2 = [line.split("\t")[2] for line in ranked.splitlines()]
        qrels_file = str(tmp_path / "qrels.tsv")
        with open(qrels_file, "w", encoding="utf-8") as fh:
            fh.write("".join(f"q1\t{d}\n" for d in top2))
        assert cli.run(["eval", "map", "--run", run_file, "--qrels", qrels_file]) == 0
        assert capsys.readouterr().out == "1.0\n"

    def test_missing_judgments(self, tmp_path, capsys):
        run_file = tmp_path / "run.tsv"
        run_file.write_text("q1\t1\td1\t0.5\n", encoding="utf-8")
        qrels_file = tmp_path / "qrels.tsv"
        qrels_file.write_text("other\td1\n", encoding="utf-8")
        assert cli.run(["eval", "map", "--run", str(run_file),
                        "--qrels", str(qrels_file)]) == 3
        capsys.readouterr()


class TestQlm:
    def test_train_and_rank(self, tmp_path, index_file, capsys):
        phrases = tmp_path / "phrases.txt"
        phrases.write_text("court lawyer\n", encoding="utf-8")
        q_model = str(tmp_path / "q.qlm")
        d2_model = str(tmp_path / "d2.qlm")
        d4_model = str(tmp_path / "d4.qlm")
        assert cli.run(["qlm", "train", "--index", index_file, "--text",
                        "court lawyer", "--phrases", str(phrases),
                        "--max-iters", "300", "--tol", "1e-10",
                        "--out", q_model]) == 0
        assert cli.run(["qlm", "train", "--index", index_file, "--doc", "d3",
                        "--phrases", str(phrases), "--max-iters", "300",
                        "--tol", "1e-10", "--out", d2_model]) == 0
        assert cli.run(["qlm", "train", "--index", index_file, "--doc", "d4",
                        "--phrases", str(phrases), "--max-iters", "300",
                        "--tol", "1e-10", "--out", d4_model]) == 0
        capsys.readouterr()
        assert cli.run(["qlm", "rank", "--query-model", q_model,
                        "--doc-models", d2_model, d4_model,
                        "--smoothing", "0.4"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        # the litigation document diverges less from the litigation query
        assert lines[0].split("\t")[0] == d2_model
        divergences = [float(line.split("\t")[1]) for line in lines]
        assert divergences[0] < divergences[1]

    def test_train_output_is_parity_with_library(self, tmp_path, index_file,
                                                 capsys):
        out = str(tmp_path / "m.qlm")
        assert cli.run(["qlm", "train", "--index", index_file, "--doc", "d5",
                        "--max-iters", "200", "--tol", "1e-9",
                        "--out", out]) == 0
        stdout = capsys.readouterr().out
        ix = corpus.load_index(index_file)
        d = ix.doc_ids.index("d5")
        tokens = sorted(
            ix.vocab[t] for t, dd, w in ix.entries for _ in range(int(w))
            if dd == d)
        model = qlm.estimate_rho(
            [qlm.phrase_projector([(t, 1.0)], ix.vocab) for t in tokens],
            max_iters=200, tol=1e-9)
        expected = (f"{out}\t{len(model.log_likelihood_trace) - 1}"
                    f"\t{model.log_likelihood_trace[-1]!r}\n")
        assert stdout == expected
        saved = qlm.load_model(out)
        assert saved.support == model.support

    def test_unknown_doc(self, tmp_path, index_file, capsys):
        assert cli.run(["qlm", "train", "--index", index_file, "--doc", "nope",
                        "--out", str(tmp_path / "m.qlm")]) == 3
        capsys.readouterr()


class TestHyponymy:
    def test_reports_grade_and_error_trace(self, tmp_path, capsys):
        densities = tmp_path / "densities.json"
        densities.write_text(json.dumps({
            "narrow": [[1.0, 0.0], [0.0, 0.0]],
            "broad": [[0.25, 0.0], [0.0, 0.75]],
        }), encoding="utf-8")
        assert cli.run(["hyponymy", "--densities", str(densities),
                        "--a", "narrow", "--b", "broad"]) == 0
        grade, trace_error = capsys.readouterr().out.strip().split("\t")
        assert float(grade) == pytest.approx(0.25, abs=1e-10)
        assert float(trace_error) == pytest.approx(0.75, abs=1e-10)

    def test_invalid_density_is_data_error(self, tmp_path, capsys):
        densities = tmp_path / "densities.json"
        densities.write_text(json.dumps({"bad": [[2.0, 0.0], [0.0, 0.0]],
                                         "ok": [[1.0, 0.0], [0.0, 0.0]]}),
                             encoding="utf-8")
        assert cli.run(["hyponymy", "--densities", str(densities),
                        "--a", "bad", "--b", "ok"]) == 3
        capsys.readouterr()


class TestCompose:
    def test_verb_tensor_output(self, vectors_file, triples_file, capsys):
        assert cli.run(["compose", "verb", "--triples", triples_file,
                        "--vectors", vectors_file, "--verb", "chases"]) == 0
        rows = [[float(x) for x in line.split("\t")]
                for line in capsys.readouterr().out.splitlines()]
        expected = (np.outer([1, 0, 0], [0.5, 0.5, 0.0])
                    + np.outer([0, 1, 0], [0.0, 0.3, 0.7]))
        np.testing.assert_allclose(np.array(rows), expected, atol=1e-12)

    def test_sentence_differs_under_swap(self, vectors_file, triples_file,
                                         capsys):
        args = ["compose", "sentence", "--triples", triples_file,
                "--vectors", vectors_file, "--verb", "chases"]
        assert cli.run(args + ["--subj", "dog", "--obj", "food"]) == 0
        forward = capsys.readouterr().out
        assert cli.run(args + ["--subj", "food", "--obj", "dog"]) == 0
        backward = capsys.readouterr().out
        assert forward != backward

    def test_unknown_verb(self, vectors_file, triples_file, capsys):
        assert cli.run(["compose", "verb", "--triples", triples_file,
                        "--vectors", vectors_file, "--verb", "flies"]) == 3
        capsys.readouterr()


class TestBindUnbind:
    def test_round_trip_through_cli(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        from qsem.compose import unitary_vector
        a = unitary_vector(rng, 16)
        b = unitary_vector(rng, 16)
        vecs = tmp_path / "v.tsv"
        vecs.write_text(
            "a\t" + ",".join(repr(float(x)) for x in a) + "\n"
            "b\t" + ",".join(repr(float(x)) for x in b) + "\n",
            encoding="utf-8")
        assert cli.run(["bind", "--vectors", str(vecs), "--mode", "conv",
                        "--a", "a", "--b", "b"]) == 0
        bound = np.array([float(x) for x in
                          capsys.readouterr().out.strip().split(",")])
        vecs2 = tmp_path / "v2.tsv"
        vecs2.write_text(
            "c\t" + ",".join(repr(float(x)) for x in bound) + "\n"
            "a\t" + ",".join(repr(float(x)) for x in a) + "\n",
            encoding="utf-8")
        assert cli.run(["unbind", "--vectors", str(vecs2), "--mode", "conv",
                        "--c", "c", "--a", "a"]) == 0
        recovered = np.array([float(x) for x in
                              capsys.readouterr().out.strip().split(",")])
        np.testing.assert_allclose(recovered, b, atol=1e-9)

    def test_phase_mode_with_complex_file(self, tmp_path, capsys):
        vecs = tmp_path / "v.tsv"
        vecs.write_text("a\t1j,-1j\nb\t1j,1j\n", encoding="utf-8")
        assert cli.run(["bind", "--vectors", str(vecs), "--mode", "phase",
                        "--a", "a", "--b", "b"]) == 0
        out = [complex(x) for x in capsys.readouterr().out.strip().split(",")]
        assert out == [(-1 + 0j), (1 + 0j)]

    def test_unknown_vector_name(self, tmp_path, capsys):
        vecs = tmp_path / "v.tsv"
        vecs.write_text("a\t1.0,0.0\n", encoding="utf-8")
        assert cli.run(["bind", "--vectors", str(vecs), "--a", "a",
                        "--b", "missing"]) == 3
        capsys.readouterr()


class TestFourier:
    def test_square_wave_header(self, capsys):
        assert cli.run(["fourier", "--wave", "square", "--harmonics", "4",
                        "--samples", "8"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# sine_coeffs,")
        coeffs = [float(x) for x in lines[0].split(",")[1:]]
        np.testing.assert_allclose(coeffs, [1.0, 0.0, 1.0 / 3.0, 0.0], atol=1e-3)
        assert lines[2] == "x,f,partial_sum"
        assert len(lines) == 3 + 8

    def test_writes_csv_file(self, tmp_path, capsys):
        out = tmp_path / "fig.csv"
        assert cli.run(["fourier", "--wave", "sine", "--order", "2",
                        "--harmonics", "3", "--samples", "16",
                        "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith("# sine_coeffs,")
        assert capsys.readouterr().out == ""

    def test_usage_error(self, capsys):
        assert cli.run(["fourier", "--harmonics", "0"]) == 2
        capsys.readouterr()


class TestConfig:
    def test_config_overrides_defaults_flags_override_config(
            self, tmp_path, index_file, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"top_k": 2}), encoding="utf-8")
        assert cli.run(["--config", str(cfg), "search", "--index", index_file,
                        "--query", "suit"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 2
        assert cli.run(["--config", str(cfg), "search", "--index", index_file,
                        "--query", "suit", "--top-k", "4"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 4

    def test_unknown_key_rejected(self, tmp_path, index_file, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}), encoding="utf-8")
        assert cli.run(["--config", str(cfg), "search", "--index", index_file,
                        "--query", "suit"]) == 2
        capsys.readouterr()

    def test_out_of_range_value_rejected(self, tmp_path, index_file, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"smoothing": 1.5}), encoding="utf-8")
        assert cli.run(["--config", str(cfg), "search", "--index", index_file,
                        "--query", "suit"]) == 2
        capsys.readouterr()

    def test_usage_error_for_unknown_flag(self, capsys):
        assert cli.run(["search", "--no-such-flag"]) == 2
        err = capsys.readouterr().err
        assert err.startswith("ERROR 2: ")
