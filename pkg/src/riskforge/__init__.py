"""Design-risk analysis for requirement/function/component models.

Build or parse a design model, validate it, propagate severity forward
and occurrence backward across the two mapping matrices, prioritize
failure modes by risk priority number, and emit the worksheet and
priority-report artifacts.
"""

from .analysis import (
    AnalysisError,
    AnalysisResult,
    MissingDetection,
    MissingOccurrence,
    MissingSeverity,
    RpnRow,
    TraceChain,
    TraceHop,
    analyze,
    assign_detection,
    backward_occurrence,
    fm_detection,
    fm_occurrence,
    fm_severity,
    forward_severity,
    oracle_propagate,
    trace,
)
from .io import ParseError, ParseFailure, parse_model, serialize_model
from .model import (
    COMPONENT_CATEGORIES,
    CONTROL_METHOD_CLASSES,
    Cause,
    Component,
    ControlPlan,
    DesignModel,
    Domain,
    Effect,
    FailureMode,
    Flow,
    Frequency,
    Function,
    FUNCTION_CATEGORIES,
    MappingEdge,
    Meta,
    ModelError,
    REQUIREMENT_CATEGORIES,
    Requirement,
    UnknownElement,
    UnknownFailureMode,
    allowed_categories,
    element_domain,
    element_text,
)
from .rating import (
    BANDS,
    RankBand,
    SEVERITY_CLASSES,
    detection_band,
    occurrence_band,
    rank_consistent,
    representative_rank,
    rpn,
    severity_band,
)
from .reports import (
    ArtifactBundle,
    FmeaDocument,
    FmeaRow,
    PriorityReport,
    PriorityRow,
    ValidationFailed,
    emit_fmea_document,
    emit_priority_report,
    risk_consequence_report,
    run_procedure,
    write_bundle,
)
from .validation import (
    ANALYSIS_READY,
    STRUCTURAL,
    Finding,
    ValidationReport,
    validate_model,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYSIS_READY",
    "AnalysisError",
    "AnalysisResult",
    "ArtifactBundle",
    "BANDS",
    "COMPONENT_CATEGORIES",
    "CONTROL_METHOD_CLASSES",
    "Cause",
    "Component",
    "ControlPlan",
    "DesignModel",
    "Domain",
    "Effect",
    "FUNCTION_CATEGORIES",
    "FailureMode",
    "Finding",
    "Flow",
    "FmeaDocument",
    "FmeaRow",
    "Frequency",
    "Function",
    "MappingEdge",
    "Meta",
    "MissingDetection",
    "MissingOccurrence",
    "MissingSeverity",
    "ModelError",
    "ParseError",
    "ParseFailure",
    "PriorityReport",
    "PriorityRow",
    "REQUIREMENT_CATEGORIES",
    "RankBand",
    "Requirement",
    "RpnRow",
    "SEVERITY_CLASSES",
    "STRUCTURAL",
    "TraceChain",
    "TraceHop",
    "UnknownElement",
    "UnknownFailureMode",
    "ValidationFailed",
    "ValidationReport",
    "allowed_categories",
    "analyze",
    "assign_detection",
    "backward_occurrence",
    "detection_band",
    "element_domain",
    "element_text",
    "emit_fmea_document",
    "emit_priority_report",
    "fm_detection",
    "fm_occurrence",
    "fm_severity",
    "forward_severity",
    "occurrence_band",
    "oracle_propagate",
    "parse_model",
    "rank_consistent",
    "representative_rank",
    "risk_consequence_report",
    "rpn",
    "run_procedure",
    "serialize_model",
    "severity_band",
    "trace",
    "validate_model",
    "write_bundle",
]
