"""Exception hierarchy shared by all symbreak modules."""


class SymbreakError(Exception):
    """Base class for every error raised by this package."""


class GroupMismatchError(SymbreakError, ValueError):
    pass


class UnsupportedGroupError(SymbreakError, ValueError):
    pass


class DimensionError(SymbreakError, ValueError):
    pass


class NonCommutingError(SymbreakError, ValueError):
    """Velocity and momentum do not commute, so (mu, xi) cannot be a relative equilibrium."""


class SpaceMismatchError(SymbreakError, ValueError):
    pass


class ConstraintViolationError(SymbreakError, ValueError):
    pass


class NotCriticalError(SymbreakError, ValueError):
    pass


class DegenerateSeedError(SymbreakError):
    """Hessian is singular transverse to the seed orbit."""


class NonRegularLevelSetError(SymbreakError):
    """The induced momentum map is not submersive at the point."""


class EmptyLevelSetError(SymbreakError):
    pass


class NotEquilibriumError(SymbreakError, ValueError):
    pass


class NoTableEntryError(SymbreakError, KeyError):
    pass


class ConfigError(SymbreakError, ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))

    def __str__(self):
        return "; ".join(self.problems)
