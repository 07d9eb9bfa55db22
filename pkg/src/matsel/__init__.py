"""matsel: materials selection engine.

Classifies an engineer's design requirement into a material class via a
rule knowledgebase, fragments the materials database down to that class
and the requested attributes, scores every candidate with six
similarity/distance functions, and returns ranked selections.
"""

from .errors import (
    DataLoadError,
    InvalidValueError,
    MatselError,
    MetricDomainError,
    NoCandidatesError,
    NoScorableCandidatesError,
    RequirementError,
    RulesLoadError,
    SchemaLoadError,
    UnclassifiableError,
)
from .schema import (
    DEFAULT_ORDINAL_SCALE,
    DesignRequirement,
    Interval,
    Material,
    MaterialClass,
    PropertyDef,
    PropertySchema,
    PropertyValue,
    ValueKind,
    default_schema,
    encode_ordinal,
    load_schema,
    parse_requirement,
    parse_requirement_inline,
    parse_schema,
    scalarize,
)
from .knowledgebase import (
    ClassificationResult,
    Condition,
    DecisionRule,
    Knowledgebase,
    classify,
    default_rules,
    load_rules,
    parse_rules,
)
from .datastore import (
    DataMatrix,
    FragmentDatabase,
    MaterialDatabase,
    fragment,
    generate_synthetic,
    ingest_csv,
    load_database,
    serialize_csv,
    to_matrix,
    validate_csv,
)
from .metrics import (
    ALL_METRICS,
    AxiomReport,
    MetricKind,
    Orientation,
    check_metric_axioms,
    min_max_normalize,
    score,
)
from .selector import (
    ComparisonReport,
    SelectionMode,
    SelectionReport,
    compare_metrics,
    rank_top_k,
    select_best,
)

__version__ = "0.1.0"
