"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class StrataLabError(Exception):
    code = "error"


class NonTameStep(StrataLabError):
    code = "non_tame_step"


class BadTwist(StrataLabError):
    code = "bad_twist"


class ZeroElement(StrataLabError):
    code = "zero_element"


class ZeroResidue(StrataLabError):
    code = "zero_residue"


class NotSubfield(StrataLabError):
    code = "not_subfield"


class InsufficientPrecision(StrataLabError):
    code = "insufficient_precision"


class OmegaTooSmall(StrataLabError):
    code = "omega_too_small"


class SingularAtPrecision(StrataLabError):
    code = "singular_at_precision"


class NotNormalizing(StrataLabError):
    code = "not_normalizing"


class NotContained(StrataLabError):
    code = "not_contained"


class ModulusTooSmall(StrataLabError):
    code = "modulus_too_small"


class NotPure(StrataLabError):
    code = "not_pure"


class ConstructionFailed(StrataLabError):
    code = "construction_failed"


class NotMinimal(StrataLabError):
    code = "not_minimal"


class ConductorMismatch(StrataLabError):
    code = "conductor_mismatch"


class AxiomViolation(StrataLabError):
    code = "axiom_violation"

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(str(f) for f in self.failures))


class NotSimple(StrataLabError):
    code = "not_simple"


class MonotonicityViolation(StrataLabError):
    code = "monotonicity_violation"


class NegativeDepthGroup(StrataLabError):
    code = "negative_depth_group"


class IdentityFailed(StrataLabError):
    code = "identity_failed"


class EqualityFailed(StrataLabError):
    code = "equality_failed"


class ProductMismatch(StrataLabError):
    code = "product_mismatch"


class OddExponent(StrataLabError):
    code = "odd_exponent"


class NotMaximal(StrataLabError):
    code = "not_maximal"


class NotTame(StrataLabError):
    code = "not_tame"


class Mismatch(StrataLabError):
    code = "mismatch"


class ConfigError(StrataLabError):
    code = "config_error"
