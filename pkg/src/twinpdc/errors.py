"""Exception types shared across the library."""


class TwinPdcError(Exception):
    """Base class for all library errors."""


class OutOfValidityWindow(TwinPdcError):
    """Wavelength falls outside the fitted range of a dispersion model.

    The Sellmeier fit is untrusted there; callers must not silently
    extrapolate further.
    """

    def __init__(self, wavelength_nm: float, window_nm: tuple, label: str = ""):
        self.wavelength_nm = wavelength_nm
        self.window_nm = window_nm
        self.label = label
        super().__init__(
            f"wavelength {wavelength_nm:.2f} nm outside validity window "
            f"[{window_nm[0]:.1f}, {window_nm[1]:.1f}] nm"
            + (f" of {label}" if label else "")
        )


class NoPhaseMatch(TwinPdcError):
    """Momentum-closure root not bracketed anywhere in the search window."""


class AmbiguousMatch(TwinPdcError):
    """Several phase-matched triples found; the caller must pick one.

    ``candidates`` carries every solved geometry, ordered by signal
    wavelength.
    """

    def __init__(self, candidates):
        self.candidates = list(candidates)
        lams = ", ".join(f"{g.signal.wavelength_nm:.1f}" for g in self.candidates)
        super().__init__(f"{len(self.candidates)} phase-matched roots (lambda_s = {lams} nm)")


class GridTooNarrow(TwinPdcError):
    """Requested grid window is below the coverage rule for this scenario."""

    def __init__(self, required, given):
        self.required = required
        self.given = given
        super().__init__(f"grid window {given} below required coverage {required}")


class NotSpectral(TwinPdcError):
    """Operation expects a grid tagged as spectral."""


class NotTemporal(TwinPdcError):
    """Operation expects a grid tagged as temporal."""


class NonPowerOfTwo(TwinPdcError):
    """FFT path requires power-of-two axis lengths."""


class DegenerateVelocities(TwinPdcError):
    """tau_i - tau_s below threshold: the linearized closed forms are invalid."""


class RegimeNotApplicable(TwinPdcError):
    """The requested asymptotic regime cannot exist for this geometry."""


class TruncatedGrid(TwinPdcError):
    """Grid truncation audit failed; downstream results would be corrupted."""


class UnderResolvedGrid(TwinPdcError):
    """Grid steps too coarse to sample the pump ridge; results untrusted."""


class NotConverged(TwinPdcError):
    """Grid-refinement check moved the result more than the tolerance."""


class NoInteriorMinimum(TwinPdcError):
    """1-D minimization found the objective monotone over the search window."""


class ConfigError(TwinPdcError):
    """Scenario config failed validation; message names the section/field."""


class ComputeError(TwinPdcError):
    """A computation failed while running a scenario; wraps the module error."""


class UnknownPreset(TwinPdcError):
    """Preset name not recognized."""
