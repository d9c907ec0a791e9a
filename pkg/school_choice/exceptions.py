"""
Jerarquía de errores del toolkit de school choice
"""

from django.core.exceptions import ValidationError


class SchoolChoiceError(Exception):
    """Error base del toolkit"""


class ProblemValidationError(SchoolChoiceError, ValidationError):
    """Error de validación de una instancia, matching o lotería; nombra la entidad culpable"""

    default_code = 'invalid'

    def __init__(self, message, entity=None, code=None):
        ValidationError.__init__(self, message, code=code or self.default_code, params={'entity': entity})
        self.entity = entity

    def __str__(self):
        return self.message


class MalformedInstance(ProblemValidationError):
    default_code = 'malformed'


class UnknownId(ProblemValidationError):
    default_code = 'unknown_id'


class DuplicateId(ProblemValidationError):
    default_code = 'duplicate_id'


class IncompletePreference(ProblemValidationError):
    default_code = 'incomplete_preference'


class IncompletePriority(ProblemValidationError):
    default_code = 'incomplete_priority'


class OverlappingTiers(ProblemValidationError):
    default_code = 'overlapping_tiers'


class CapacityShortfall(ProblemValidationError):
    default_code = 'capacity_shortfall'


class InvalidQuota(ProblemValidationError):
    default_code = 'invalid_quota'


class InvalidGroupPartition(ProblemValidationError):
    default_code = 'invalid_groups'


class InvalidMatching(ProblemValidationError):
    default_code = 'invalid_matching'


class InvalidLottery(ProblemValidationError):
    default_code = 'invalid_lottery'


class MatchingUnstable(SchoolChoiceError):
    """La operación exige un matching estable"""

    def __init__(self, witness):
        super().__init__(
            f"Matching is not stable: {witness.student} envies {witness.rival} at {witness.school}"
        )
        self.witness = witness


class SupportTooLarge(SchoolChoiceError):
    """El soporte explícito de la reasignación ETE excede el límite configurado"""

    def __init__(self, size, limit):
        super().__init__(
            f"ETE reassignment needs {size} derived matchings per support matching "
            f"(limit {limit}); use the marginal or sampling forms instead"
        )
        self.size = size
        self.limit = limit


class BudgetExceeded(SchoolChoiceError):
    """El oráculo se niega a enumerar más allá del presupuesto"""


class AuditInconsistency(SchoolChoiceError):
    """Un testigo de auditoría no se re-verifica contra la definición"""


class ImprovementLimitExceeded(SchoolChoiceError):
    """Los ciclos de mejora estable no terminaron dentro del límite de iteraciones"""

    def __init__(self, max_iterations):
        super().__init__(f"Stable improvement cycles did not terminate within {max_iterations} iterations")
        self.max_iterations = max_iterations
