"""
Domain models for boostdecay
"""

from boostdecay.models.frames import ComplexRate, LabContext, TailSpec, ValidityWarning
from boostdecay.models.mdd import BreitWigner, LorentzianSum, MddSpec, QuadratureConfig, ThresholdPowerLaw
from boostdecay.models.modes import ExpMode, ExpModeSet, FitConfig, RestModel, SurvivalCurve
from boostdecay.models.run import GridSpec, RunConfig
from boostdecay.models.windows import ConstraintMargins, IntervalSet, ModeWindow, WindowReport, ZetaBounds

__all__ = [
    "BreitWigner",
    "ComplexRate",
    "ConstraintMargins",
    "ExpMode",
    "ExpModeSet",
    "FitConfig",
    "GridSpec",
    "IntervalSet",
    "LabContext",
    "LorentzianSum",
    "MddSpec",
    "ModeWindow",
    "QuadratureConfig",
    "RestModel",
    "RunConfig",
    "SurvivalCurve",
    "TailSpec",
    "ThresholdPowerLaw",
    "ValidityWarning",
    "WindowReport",
    "ZetaBounds",
]
