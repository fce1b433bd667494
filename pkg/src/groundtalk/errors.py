"""Exception types shared across the package."""


class GroundtalkError(Exception):
    """Base class for all errors raised by this package."""


# --- scene graph documents ---

class MalformedDocument(GroundtalkError):
    """Document does not conform to the scene graph schema."""


class DanglingEdge(GroundtalkError):
    """An edge references a node id that does not exist."""


class DuplicateId(GroundtalkError):
    """Two nodes in one document share an id."""


class MissingBBox(GroundtalkError):
    """An image graph node arrived without a bounding box."""


class EmptyToken(GroundtalkError):
    """A token was blank after trimming."""


# --- similarity providers ---

class ProviderUnavailable(GroundtalkError):
    """Lexicon or vector file is missing or unreadable."""


# --- expression parsing ---

class EmptyExpression(GroundtalkError):
    """The referring expression was blank."""


class ParseError(GroundtalkError):
    """The expression does not fit the supported grammar."""


# --- question generation ---

class InvalidAction(GroundtalkError):
    """A question was requested for an outcome that needs none."""


# --- dialogue sessions ---

class InvalidOption(GroundtalkError):
    """Reply chose an option number outside the question's range."""


class WrongReplyKind(GroundtalkError):
    """Reply shape does not fit the pending question (e.g. yes/no to a selection)."""


class SessionFinished(GroundtalkError):
    """An answer arrived for a session already in a terminal state."""


# --- evaluation harness ---

class MissingScene(GroundtalkError):
    """A command references a scene id that is not loaded."""


class MalformedCommands(GroundtalkError):
    """The commands file is empty or has a bad record."""
