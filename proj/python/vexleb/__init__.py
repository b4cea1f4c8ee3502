"""Variable-exponent Lebesgue norms, Hardy-type operators and weight conditions."""

import functools
import json

from . import _vexleb
from ._vexleb import (
    DomainError,
    ExponentField,
    Grid1D,
    GridFunction,
    NonconvergenceError,
    ParameterError,
    Rectangle,
    double_average,
    hardy1,
    hardy2,
    hardy_average,
    integrate,
    luxemburg_norm,
    modular,
)


def _decoded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return json.loads(fn(*args, **kwargs))

    return wrapper


muckenhoupt_am = _decoded(_vexleb.muckenhoupt_am)
persson_stepanov_aps = _decoded(_vexleb.persson_stepanov_aps)
condition_b = _decoded(_vexleb.condition_b)
rectangle_condition_ar = _decoded(_vexleb.rectangle_condition_ar)
hardy_sandwich = _decoded(_vexleb.hardy_sandwich)
blowup_series = _decoded(_vexleb.blowup_series)
verify_double_hardy = _decoded(_vexleb.verify_double_hardy)
embedding = _decoded(_vexleb.embedding)
