"""Exception hierarchy for bdcoh.

Every validation error carries an optional ``witness`` (the elements,
tuple or class that exhibits the failure) so callers can report it.
"""


class BDCohError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MalformedInput(BDCohError):
    pass


class NonAssociative(BDCohError):
    pass


class NoIdentity(BDCohError):
    pass


class NoInverse(BDCohError):
    pass


class IndexOutOfRange(BDCohError):
    pass


class NotWellDefined(BDCohError):
    pass


class NotEquivariant(BDCohError):
    pass


class NotEquivariantInput(NotEquivariant):
    pass


class AlgebraAxiomError(BDCohError):
    pass


class DegreeOverflow(BDCohError):
    pass


class DegreeMismatch(BDCohError):
    pass


class NotACocycle(BDCohError):
    pass


class GroupMismatch(BDCohError):
    pass


class PairingNotBilinear(BDCohError):
    pass


class LemmaViolation(BDCohError):
    pass


class SituationNotValidated(BDCohError):
    pass


class NotPrime(BDCohError):
    pass


class UnknownElement(BDCohError):
    pass


class ContextMismatch(BDCohError):
    pass


class NonAbelianGroup(BDCohError):
    pass


class FamilyNotValidated(BDCohError):
    pass


class TablesNotClosed(BDCohError):
    pass
