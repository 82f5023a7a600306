"""Test functionals of a segment for derivative estimates.

Each entry pairs ``f(x)`` with ``grad_f(x, u)``, the derivative of ``f`` at
``x`` in the direction of the segment ``u``. Both act on the leading batch
axes of their arguments.
"""
from collections import namedtuple

import numpy as np

from .errors import DomainError


Functional = namedtuple('Functional', ['name', 'value', 'pairing'])


def head_value(x):
    return x.head[..., 0]


def head_pairing(x, u):
    return u.head[..., 0]


def tanh_head_value(x):
    return np.tanh(x.head[..., 0])


def tanh_head_pairing(x, u):
    return u.head[..., 0] / np.cosh(x.head[..., 0]) ** 2


FUNCTIONALS = {
    'head': Functional('head', head_value, head_pairing),
    'tanh-head': Functional('tanh-head', tanh_head_value, tanh_head_pairing),
}


def get_functional(name):
    try:
        return FUNCTIONALS[name]
    except KeyError:
        raise DomainError("unknown functional {!r}; expected one of {}".format(name, ', '.join(FUNCTIONALS)))
