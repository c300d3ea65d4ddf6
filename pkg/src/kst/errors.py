"""Exception hierarchy shared by all kst modules."""


class KstError(Exception):
    """Base class for all errors raised by this package."""


class UnknownItem(KstError):
    pass


class MissingEmptyOrFull(KstError):
    pass


class StateNotInStructure(KstError):
    pass


class NoMatch(KstError):
    pass


class MultipleMatches(KstError):
    """Two distinct states share a fringe pair; the structure cannot be a
    learning space."""


class NotUnionClosed(KstError):
    pass


class EmptyClauseList(KstError):
    pass


class NotTransitive(KstError):
    pass


class EmptyOrFullSubdomain(KstError):
    pass


class MalformedString(KstError):
    pass


class MalformedWord(KstError):
    pass


class RepeatedItem(MalformedWord):
    pass


class NotLearningSpace(KstError):
    pass


class ZetaOutOfRange(KstError):
    pass


class BadPartition(KstError):
    pass


class ItemInAntecedent(KstError):
    pass


class OracleFailure(KstError):
    pass


class TraceMismatch(KstError):
    pass


class InteractiveResponderNeedsExternalAnswer(KstError):
    pass


class ParseError(KstError):
    pass


class BindError(KstError):
    pass


class StoreCorruption(KstError):
    pass
