"""Bayes linear model-synthesis workbench.

Turns the outputs of competing predictive models into a single owned set of
posterior beliefs, with the elicitation machinery needed to specify the
required prior covariance judgements.
"""

from .beliefs import (
    BeliefSpec,
    CoherenceVerdict,
    JointBelief,
    VariableSet,
    adjust_expectation,
    adjust_variance,
    check_coherence,
)
from .class_priors import (
    ClassPrior,
    SeparationRule,
    complete_by_separation,
    complete_by_zero_fill,
    preference_separation_rules,
    scale_class_covariances,
)
from .elicitation import (
    ElicitationSession,
    QuestionPrompt,
    finalize,
    next_question,
    start_session,
    submit_answers,
)
from .linalg import pseudo_inverse
from .synthesis import (
    ClassStructure,
    ModelOutput,
    ModelOutputBatch,
    PbaReport,
    SynthesisWeights,
    convergence_limit,
    derive_weights,
    dominance_check,
    pba,
    sample_means,
)

__version__ = "0.1.0"

__all__ = [
    "BeliefSpec",
    "ClassPrior",
    "ClassStructure",
    "CoherenceVerdict",
    "ElicitationSession",
    "JointBelief",
    "ModelOutput",
    "ModelOutputBatch",
    "PbaReport",
    "QuestionPrompt",
    "SeparationRule",
    "SynthesisWeights",
    "VariableSet",
    "adjust_expectation",
    "adjust_variance",
    "check_coherence",
    "complete_by_separation",
    "complete_by_zero_fill",
    "convergence_limit",
    "derive_weights",
    "dominance_check",
    "finalize",
    "next_question",
    "pba",
    "preference_separation_rules",
    "pseudo_inverse",
    "sample_means",
    "scale_class_covariances",
    "start_session",
    "submit_answers",
    "__version__",
]
