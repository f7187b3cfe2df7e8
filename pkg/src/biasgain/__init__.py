"""Schlick's bias and gain, their two-parameter (slope, threshold) generalization, and tooling around it."""

from .curve_core import (
    MACHINE_EPS,
    CurveParams,
    DomainError,
    EpsilonPolicy,
    ShapeParam,
    bias_as_curve,
    curve,
    curve_array,
    curve_derivative,
    curve_inverse,
    gain_as_curve,
    reflect_params,
    schlick_bias,
    schlick_gain,
)
from .curve_tools import FitResult, Lut, SampleSeries, build_lut, fit_params, lut_eval, sample_curve
from .plot_emit import (
    FamilySpec,
    FormatError,
    PlotSpec,
    emit_csv,
    emit_json,
    emit_svg_family,
    emit_svg_grid,
    parse_csv,
    parse_json,
)

__version__ = "0.1.0"
