"""Exact local computations for theta transfer: Python front end over the C++ core."""

import json
from fractions import Fraction

from ._ttl import TtlError
from . import _ttl

__all__ = [
    "TtlError", "quadspace", "basic_phi", "fourier", "weil_index", "p_value", "fiber_volume",
    "whittaker_orbital", "x_transfer_value", "hecke_translate", "lx_sharp", "x_volume_from_groups",
    "assembly_check", "run_job", "cycnum_str", "to_fraction",
]


def _j(x):
    if isinstance(x, Fraction):
        x = f"{x.numerator}/{x.denominator}"
    return json.dumps(x)


def _call(fn, *args):
    return json.loads(fn(*(_j(a) for a in args)))


def quadspace(spec):
    return _call(_ttl.quadspace, spec)


def basic_phi(space):
    return _call(_ttl.basic_phi, space)


def fourier(phi, space):
    return _call(_ttl.fourier, phi, space)


def weil_index(space):
    return _call(_ttl.weil_index, space)


def p_value(phi, g, space, allow_metaplectic=False):
    return json.loads(_ttl.p_value(_j(phi), _j(g), _j(space), allow_metaplectic))


def fiber_volume(phi, a, space, m_max=12):
    return json.loads(_ttl.fiber_volume(_j(phi), _j(a), _j(space), m_max))


def whittaker_orbital(phi, a, space, n_max=12):
    return json.loads(_ttl.whittaker_orbital(_j(phi), _j(a), _j(space), n_max))


def x_transfer_value(phi, a, space, m_max=12):
    return json.loads(_ttl.x_transfer_value(_j(phi), _j(a), _j(space), m_max))


def hecke_translate(phi, space):
    return _call(_ttl.hecke_translate, phi, space)


def lx_sharp(space, alpha, convention="shimura"):
    return json.loads(_ttl.lx_sharp(_j(space), _j(alpha), convention))


def x_volume_from_groups(space):
    return to_fraction(_call(_ttl.x_volume_from_groups, space))


def assembly_check(space, alpha, convention="shimura"):
    return json.loads(_ttl.assembly_check(_j(space), _j(alpha), convention))


def run_job(config):
    """Run a job config (dict); returns (report dict, exit code)."""
    report, code = _ttl.run_job(_j(config))
    return json.loads(report), code


def cycnum_str(x):
    return _ttl.cycnum_str(_j(x))


def to_fraction(x):
    """Rational JSON ("a/b" or int) or a rational CycNum to Fraction."""
    if isinstance(x, dict):
        terms = x["terms"]
        if not terms:
            return Fraction(0)
        if len(terms) != 1 or terms[0]["order"] != 1 or terms[0].get("sqrtp", 0):
            raise ValueError("not a rational number")
        return Fraction(int(terms[0]["num"]), int(terms[0]["den"]))
    return Fraction(x)
