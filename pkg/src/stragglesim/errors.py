"""Exception types raised across the simulator."""


class InsufficientSurvivors(RuntimeError):
    """Too few non-straggling servers for the decoder to be fitted."""


class DegenerateConfiguration(RuntimeError):
    """A trial kept drawing undecodable straggler patterns."""


class NumericalPole(ArithmeticError):
    """A rational interpolant's denominator vanished away from every node."""


class InsufficientData(ValueError):
    """Not enough usable rows to fit a convergence rate."""
