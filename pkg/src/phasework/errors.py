"""Exception types shared across the workbench."""


class PhaseworkError(Exception):
    """Base class for workbench errors."""


class GridMismatchError(PhaseworkError):
    """Two objects live on incompatible sampling grids."""


class AliasingRiskError(PhaseworkError):
    """A chirp/dilation/resampling step would alias significant energy.

    The caller must refine the grid (larger N or smaller dx) before retrying.
    """


class NotSymplecticError(PhaseworkError):
    """Input matrix fails the symplectic condition."""


class NotCovariantError(PhaseworkError):
    """The symplectic matrix does not have the covariant block form."""


class TooFewShellsError(PhaseworkError):
    """Field grid too small to populate enough radial shells for a decay fit."""


class SeriesDivergenceError(PhaseworkError):
    """Truncated exponential series for a bounded perturbation will not converge."""
