"""End-to-end smoke tests for the psmselect python module."""

import math

import pytest

import psmselect as ps


def test_tokenize():
    assert ps.tokenize("Breaking: Trump CONFIRMED!") == ["breaking", "trump", "confirmed"]
    assert ps.tokenize("") == []
    assert ps.tokenize("a 2020 win-win") == ["win", "win"]


def test_auroc_matches_hand_enumeration():
    assert ps.auroc([0.9, 0.8, 0.3, 0.2], [1, 0, 1, 0]) == pytest.approx(0.75)
    assert ps.auroc([0.5, 0.5], [1, 0]) == pytest.approx(0.5)
    with pytest.raises(RuntimeError):
        ps.auroc([0.1, 0.2], [1, 1])


def test_matching_and_statistic():
    pairs = ps.greedy_match([0.8, 0.5, 0.75], [1, 0, 0])
    assert len(pairs) == 1
    assert pairs.pairs[0].treatment == 0
    assert pairs.pairs[0].control == 2
    stat = ps.pair_statistic(pairs, [0, 0, 1], ps.StatMode.literal)
    assert stat.tn == 1 and stat.cp == 1
    assert stat.chi_square == 0.0


def test_logreg_probability():
    X = ps.BinaryTermMatrix.from_rows(2, [[0], [0, 1], [1], []], [1, 1, 0, 0])
    cfg = ps.TrainConfig()
    cfg.learning_rate = 0.5
    cfg.max_epochs = 500
    cfg.l2_lambda = 0.01
    model = ps.train_logreg(X, [1, 1, 0, 0], cfg)
    assert ps.predict_proba(model, [1, 0]) > 0.5
    assert ps.predict_proba(model, [0, 1]) < 0.5


def test_synth_pipeline_recovers_causal_features():
    cfg = ps.SynthConfig()
    cfg.n_docs = 600
    cfg.n_causal_fake = 5
    cfg.n_causal_real = 5
    cfg.n_confounder = 5
    cfg.n_noise = 30
    cfg.rho_train = 0.5  # confounder decoupled from the label: clean plant
    cfg.seed = 1
    out = ps.generate(cfg)
    assert len(out.train) == 600
    assert len(out.truth) == 10

    rc = ps.RunConfig()
    rc.vocab.min_df = 2
    rc.vocab.max_features = 0
    rc.train.max_epochs = 80
    rc.seed = 1
    art = ps.prepare_corpus(out.train, rc, 1)
    ranking_psm = ps.compute_ranking(art, ps.RankMethod.psm, rc)
    ranking_df = ps.compute_ranking(art, ps.RankMethod.df, rc)

    truth_ids = [art.vocab.lookup(t) for t in out.truth]
    assert all(i >= 0 for i in truth_ids)
    p_psm = ps.precision_at_k(ranking_psm, truth_ids, 10)
    p_df = ps.precision_at_k(ranking_df, truth_ids, 10)
    assert p_psm > p_df  # confounders dominate df, not psm

    # df must rank confounder tokens on top (they are the most frequent)
    df_top = {e.token for e in ranking_df.entries[:5]}
    assert any(t.startswith("conf") for t in df_top)


def test_sweep_and_reports(tmp_path):
    cfg = ps.SynthConfig()
    cfg.n_docs = 300
    cfg.n_causal_fake = 4
    cfg.n_causal_real = 4
    cfg.n_confounder = 4
    cfg.n_noise = 20
    cfg.seed = 2
    out = ps.generate(cfg)

    rc = ps.RunConfig()
    rc.vocab.min_df = 2
    rc.vocab.max_features = 0
    rc.train.max_epochs = 60
    rc.seed = 2
    report = ps.sweep(out.train, out.test, [ps.RankMethod.psm, ps.RankMethod.df],
                      [5.0, 20.0, 100.0], ps.Classifier.logreg, rc)
    assert len(report.points) == 6
    assert set(report.summary) == {"psm", "df"}

    csv_path = tmp_path / "sweep.csv"
    json_path = tmp_path / "sweep.json"
    ps.write_sweep_csv(report, str(csv_path))
    ps.write_sweep_json(report, str(json_path))
    header = csv_path.read_text().splitlines()[0]
    assert header == "method,percent,classifier,auroc,accuracy"
    back = ps.read_sweep_json(str(json_path))
    assert back.summary == report.summary


def test_model_serialization_roundtrip(tmp_path):
    X = ps.BinaryTermMatrix.from_rows(2, [[0], [1], [0, 1], []], [1, 0, 1, 0])
    model = ps.train_logreg(X, [1, 0, 1, 0], ps.TrainConfig())
    path = tmp_path / "model.json"
    ps.save_linear_model(model, str(path))
    back = ps.load_linear_model(str(path))
    assert back.weights == pytest.approx(model.weights, abs=0)
    assert back.bias == model.bias


def test_run_config_validation():
    rc = ps.RunConfig.from_json('{"matching": {"stat": "mcnemar"}}')
    assert rc.stat_mode == ps.StatMode.mcnemar
    with pytest.raises(RuntimeError):
        ps.RunConfig.from_json('{"bogus": 1}')
