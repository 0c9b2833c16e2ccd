"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class RankError(DomainError):
    """Basis vectors are linearly dependent."""


class DimensionTooLarge(DomainError):
    """Refusal: the lattice dimension exceeds what exhaustive paths support."""


class ParameterError(DomainError):
    """A parameter set violates its invariants, or generation kept failing."""


class SamplerStall(RuntimeError):
    """A rejection loop hit its iteration cap; usually a parameter bug."""


class PromiseViolation(RuntimeError):
    """An input broke the promise an oracle relies on (e.g. lattice uniqueness)."""


class ProtocolError(RuntimeError):
    """An oracle answered inconsistently with what the reduction requires."""


class StepBudgetExceeded(RuntimeError):
    """A reduction ran past its oracle-call budget."""


class OracleExhausted(RuntimeError):
    """A sample oracle or distinguisher ran out of its declared budget."""


class CollisionNotFound(LookupError):
    """Exhaustive search found no short collision witness."""


class USVPFailure(RuntimeError):
    """No candidate returned by the search-to-decision reduction was valid."""
