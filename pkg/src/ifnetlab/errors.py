"""Error types shared across the workbench.

Every exception carries a short machine-readable ``code`` so CLI callers can
map failures onto exit codes without parsing messages.
"""


class IfnetError(Exception):
    """Base class; ``code`` is a stable identifier like COVERAGE_VIOLATION."""

    code = "ERROR"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class CoverageViolation(IfnetError):
    code = "COVERAGE_VIOLATION"


class OrphanMessage(IfnetError):
    code = "ORPHAN_MESSAGE"


class AdjacencyMismatch(IfnetError):
    code = "ADJACENCY_MISMATCH"


class AmbiguousConnectivity(IfnetError):
    code = "AMBIGUOUS_CONNECTIVITY"


class AlphabetMismatch(IfnetError):
    code = "ALPHABET_MISMATCH"


class AlphabetTooLarge(IfnetError):
    code = "ALPHABET_TOO_LARGE"


class VariableUnknown(IfnetError):
    code = "VARIABLE_UNKNOWN"


class OverlappingSets(IfnetError):
    code = "OVERLAPPING_SETS"


class SpecCycle(IfnetError):
    code = "SPEC_CYCLE"


class NegativeSnr(IfnetError):
    code = "NEGATIVE_SNR"


class NotPsd(IfnetError):
    code = "NOT_PSD"


class DimensionEmpty(IfnetError):
    code = "DIMENSION_EMPTY"


class DimensionTooHigh(IfnetError):
    code = "DIMENSION_TOO_HIGH"


class VariableMismatch(IfnetError):
    code = "VARIABLE_MISMATCH"


class GridMismatch(IfnetError):
    code = "GRID_MISMATCH"


class CatalogUnknown(IfnetError):
    code = "CATALOG_UNKNOWN"


class TopologyMismatch(IfnetError):
    code = "TOPOLOGY_MISMATCH"


class PreconditionNotEstablished(IfnetError):
    code = "PRECONDITION_NOT_ESTABLISHED"


class RatioViolation(IfnetError):
    code = "RATIO_VIOLATION"


class FamilyViolation(IfnetError):
    code = "FAMILY_VIOLATION"


class TemplateUnknown(IfnetError):
    code = "TEMPLATE_UNKNOWN"


class NotRightSidedClosure(IfnetError):
    code = "NOT_RIGHT_SIDED_CLOSURE"


class ConditionNotVerified(IfnetError):
    code = "CONDITION_NOT_VERIFIED"


class TooLarge(IfnetError):
    code = "TOO_LARGE"


class InconsistentIdentification(IfnetError):
    code = "INCONSISTENT_IDENTIFICATION"


class FactorizationViolation(IfnetError):
    code = "FACTORIZATION_VIOLATION"


class InputError(IfnetError):
    """Malformed user input (file syntax, bad flags, invalid probabilities)."""

    code = "INPUT_ERROR"
