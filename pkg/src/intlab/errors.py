"""Exception hierarchy shared by every intlab module."""


class IntlabError(Exception):
    pass


class TypeMismatch(IntlabError):
    pass


class CombinatorialBlowup(IntlabError):
    pass


class NotInImage(IntlabError):
    """A vector or map lies outside the image of the embedding."""


class SpaceMismatch(IntlabError):
    pass


class UndecidableMembership(IntlabError):
    pass


class UnknownSort(IntlabError):
    pass


class UnboundedQuery(IntlabError):
    pass


class ModelError(IntlabError):
    """Malformed or inconsistent model data."""


class Unsupported(IntlabError):
    pass


class ParseError(IntlabError):
    def __init__(self, message, text="", pos=0):
        self.message = message
        self.text = text
        self.pos = pos
        before = text[:pos]
        self.line = before.count("\n") + 1
        self.column = pos - (before.rfind("\n") + 1) + 1
        super().__init__(f"{message} at line {self.line}, column {self.column}")

    def caret(self):
        """Render the offending source line with a caret under the error column."""
        lines = self.text.split("\n") or [""]
        src = lines[self.line - 1] if self.line - 1 < len(lines) else ""
        return f"{src}\n{' ' * (self.column - 1)}^\n{self}"


class TypingError(IntlabError):
    def __init__(self, node, expected, found, detail=""):
        self.node = node
        self.expected = expected
        self.found = found
        msg = f"type error in {node}: expected {expected}, found {found}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnboundVariable(IntlabError):
    pass
