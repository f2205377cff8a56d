"""Stability measurement and adversarial manipulation of local surrogate
explanations for text classifiers."""

from .attack import (
    PRESETS,
    STRATEGIES,
    AttackConfig,
    AttackResult,
    SearchOrder,
    Substitution,
    baseline_attack,
    budget,
    order_words,
    xaifooler_attack,
)
from .corpus import (
    Document,
    LabeledDataset,
    StopwordSet,
    load_csv,
    tokenize,
    unique_features,
)
from .embed import (
    CandidateSet,
    EmbeddingStore,
    load_embeddings,
    load_pos_lexicon,
    nearest_neighbors,
    pos_compatible,
    semantic_similarity,
)
from .errors import (
    ConfigError,
    DatasetError,
    FormatError,
    InterfaceError,
    ParameterError,
    TrainingError,
    XaistabError,
)
from .explainer import (
    Explanation,
    SamplingConfig,
    explain,
    inherency_probe,
    sample_perturbations,
    top_k,
)
from .harness import (
    CampaignReport,
    StabilitySweepReport,
    UnigramPerplexity,
    derive_seed,
    run_campaign,
    stability_sweep,
)
from .model import (
    BowLogisticModel,
    TextClassifier,
    load_model,
    save_model,
    train_bow_logistic,
)
from .ranksim import (
    RankedList,
    center_of_mass,
    jaccard,
    kendall_tau,
    lp_distance,
    metrics_abs_rc_ins,
    rbo,
    rbo_prefix_mass,
    solve_p_for_mass,
    spearman_rho,
)

__version__ = "0.1.0"
