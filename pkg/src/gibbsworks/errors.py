"""Exception types shared across modules; the CLI maps each one to an exit code."""


class CapExceeded(ValueError):
    """An enumeration would exceed the configured pattern cap."""


class EmptySubshift(ValueError):
    """The subshift (or the admissible set being asked for) is empty."""


class IncompatibleArguments(ValueError):
    """Arguments are individually valid but do not fit together."""


class ReducibleMatrix(ValueError):
    """The essential transition graph is not strongly connected."""
