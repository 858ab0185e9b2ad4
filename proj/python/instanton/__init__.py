"""Dict-level wrappers over the _instanton extension.

The extension speaks JSON text (same documents as the CLI); this package converts
to and from plain dicts so a notebook never touches serialization.
"""

import json as _json

try:
    from . import _instanton as _core  # installed layout: extension inside the package
except ImportError:  # in-tree build: extension directory on sys.path
    import _instanton as _core

InstantonError = _core.InstantonError

commands = _core.commands
euler_class = _core.euler_class
gauss_link_raw = _core.gauss_link


def run(command, config=None, *, seed=None, budget=None, tol=None):
    """Execute a scenario; returns (exit_code, result document as a dict)."""
    text = _json.dumps(config) if config is not None else ""
    code, doc = _core.run(command, text, seed, budget, tol)
    return code, _json.loads(doc)


def plotdata(document):
    """CSV text from a result document (dict or JSON text)."""
    if not isinstance(document, str):
        document = _json.dumps(document)
    return _core.plotdata(document)


def sample_adhm(k, seed=1, spread=1.0):
    return _json.loads(_core.sample_adhm(k, seed, spread))


def moment_residual(datum):
    return _core.moment_residual(_json.dumps(datum))


def charge(datum, budget=0):
    return _core.charge(_json.dumps(datum), budget)


def c2_density(datum, x):
    return _core.c2_density(_json.dumps(datum), list(x))


def asd_residual(datum, x):
    return _core.asd_residual(_json.dumps(datum), list(x))


def gauss_link(a, b):
    return _core.gauss_link(_json.dumps(a), _json.dumps(b))


def verify_vanishing(k_min=2, k_max=5, l_max=12):
    return _json.loads(_core.verify_vanishing(k_min, k_max, l_max))
