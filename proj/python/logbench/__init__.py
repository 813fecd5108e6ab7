"""LLM log parsing benchmark harness.

The heavy lifting lives in the compiled ``_logbench`` extension: string
metrics (edit distance, LCS, parsing accuracy), placeholder normalization,
response/template extraction, prompt rendering, corpus loading, and the
rank/correlation analysis used for reporting.
"""

from ._logbench import (  # noqa: F401
    METRICS,
    Corpus,
    LogRecord,
    LogbenchError,
    NormalizedTemplate,
    PromptMode,
    PromptSpec,
    RenderedPrompt,
    RuleSet,
    ScoreRow,
    TemplateCandidate,
    __version__,
    aggregate_scores,
    corpus_hash,
    edit_distance,
    extract_template,
    load_corpus,
    load_prompt_spec,
    load_rules,
    longest_common_subsequence,
    normalize,
    parsing_accuracy,
    pearson_rank_correlation,
    rank_configurations,
    render_prompt,
    request_fingerprint,
    score,
    score_record,
    validate_ground_truth,
)
