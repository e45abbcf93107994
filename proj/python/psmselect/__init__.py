"""Propensity-score-matched feature selection for text classification."""

from ._core import (  # noqa: F401
    BinaryTermMatrix,
    Classifier,
    Corpus,
    Document,
    Estimator,
    EvalResult,
    FeatureRanking,
    Forest,
    ForestParams,
    LinearModel,
    MatchedPair,
    MatchedPairs,
    ModelKind,
    PairStatistic,
    PipelineArtifacts,
    PropensityOptions,
    PropensityTable,
    RankEntry,
    RankMethod,
    RunConfig,
    StatMode,
    SweepPoint,
    SweepReport,
    SynthConfig,
    SynthOutput,
    TrainConfig,
    VocabOptions,
    Vocabulary,
    accuracy,
    auroc,
    balance,
    build_vocabulary,
    compute_ranking,
    cross_eval,
    decision_score,
    estimate_all,
    estimate_feature,
    forest_proba,
    forest_proba_all,
    generate,
    greedy_match,
    ingest_fakenewsnet_csv,
    ingest_jsonl,
    load_forest,
    load_linear_model,
    pair_statistic,
    precision_at_k,
    predict_proba,
    predict_proba_all,
    prepare_corpus,
    rank_df,
    rank_psm,
    read_ranking_csv,
    read_sweep_json,
    save_forest,
    save_linear_model,
    select_top,
    sweep,
    tokenize,
    train_forest,
    train_linear_svm,
    train_logreg,
    vectorize,
    write_jsonl,
    write_ranking_csv,
    write_sweep_csv,
    write_sweep_json,
    write_synth_output,
)

__version__ = "0.1.0"
