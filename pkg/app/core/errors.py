"""
Exception hierarchy for the toolkit.

Every error carries the exit status the command-line front end reports
for it: 0 success, 1 domain violation, 2 input error, 3 internal fault.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors"""

    exit_code: int = 3


class InputError(ToolkitError):
    """Malformed file, bad argument, or out-of-range request"""

    exit_code = 2


class InstanceStructureError(InputError):
    """Tables disagree with the number of agents, or an index is out of range"""


class CapacityError(InputError):
    """An exhaustive computation was asked for more agents than it supports"""


class DomainViolation(ToolkitError):
    """A model assumption, persuasiveness condition or invariant does not hold"""

    exit_code = 1


class InvalidMarginalsError(DomainViolation):
    """A marginal table cannot be realised by the sampling procedure"""


class ContractError(DomainViolation):
    """An operation was called outside its precondition"""


class SolverError(ToolkitError):
    """Internal or LP solver fault"""

    exit_code = 3


class InfeasibleError(SolverError):
    """The linear program has no feasible point"""


class UnboundedError(SolverError):
    """The linear program is unbounded above"""


class TrivialMechanismSignal(ToolkitError):
    """Raised by LP builders when the prior puts no mass on the good state.

    The caller should fall back to the all-stay mechanism.
    """

    exit_code = 0
