"""Nonsequenceable (partial) Steiner triple systems: construction,
certification, and verification, plus the exact-cover and difference
machinery they are built on."""

from .designs import (
    AlmostParallelClass,
    Block,
    Design,
    Gdd,
    GroupType,
    NonseqCertificate,
    ValidationReport,
    canonical_block,
    validate_gdd,
    validate_psts,
    validate_sts,
    verify_apc,
    verify_certificate,
)
from .differences import (
    BaseBlock,
    CyclicGroup,
    GroupSpec,
    ProductGroup,
    complete_base_blocks,
    coverage_is_exact,
    develop,
    difference_coverage,
    residual_differences,
    translate_apc,
)
from .exact_cover import (
    BudgetExceededError,
    ExactCoverInstance,
    ExactCoverSolution,
    SegmentOracle,
    exists_cover,
    find_apc,
    segment_partitionable,
    solve,
)
from .gdd import (
    GddRequest,
    bose_gdd,
    bose_sts,
    build_gdd,
    canonical_groups,
    hill_climb_gdd,
    inflate,
    necessary_conditions,
    sts_as_gdd,
    td3,
)
from .constructions import BASE_ORDERS, CertifiedDesign, base_case, certified_psts, certified_sts
from .documents import SCHEMA_VERSION, DesignDocument, DocumentError
from .sequencing import (
    CertificationError,
    SegmentPolicy,
    SequenceViolation,
    certify_nonsequenceable,
    explain_nonsequenceable,
    find_admissible_sequence,
    is_admissible,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostParallelClass",
    "BASE_ORDERS",
    "BaseBlock",
    "Block",
    "BudgetExceededError",
    "CertificationError",
    "CertifiedDesign",
    "CyclicGroup",
    "Design",
    "DesignDocument",
    "DocumentError",
    "ExactCoverInstance",
    "ExactCoverSolution",
    "Gdd",
    "GddRequest",
    "GroupSpec",
    "GroupType",
    "NonseqCertificate",
    "ProductGroup",
    "SCHEMA_VERSION",
    "SegmentOracle",
    "SegmentPolicy",
    "SequenceViolation",
    "ValidationReport",
    "base_case",
    "bose_gdd",
    "bose_sts",
    "build_gdd",
    "canonical_block",
    "canonical_groups",
    "certified_psts",
    "certified_sts",
    "certify_nonsequenceable",
    "complete_base_blocks",
    "coverage_is_exact",
    "develop",
    "difference_coverage",
    "exists_cover",
    "explain_nonsequenceable",
    "find_admissible_sequence",
    "find_apc",
    "hill_climb_gdd",
    "inflate",
    "is_admissible",
    "necessary_conditions",
    "residual_differences",
    "segment_partitionable",
    "solve",
    "sts_as_gdd",
    "td3",
    "translate_apc",
    "validate_gdd",
    "validate_psts",
    "validate_sts",
    "verify_apc",
    "verify_certificate",
]
