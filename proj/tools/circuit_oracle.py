#!/usr/bin/env python3
"""Independent circuit pipeline (numpy + scipy brentq) used to freeze reference values in the unit tests.

Usage: circuit_oracle.py [ej1 ej2 flux_bias pump_amplitude length cap_per_len ind_per_len]
"""
import json
import sys

import numpy as np
from scipy.optimize import brentq

REFERENCE = (930.8397619659662, 1259.3714426598365, 2.8, 0.09, 1.0, 1e3, 1e-3)


def pipeline(ej1, ej2, phi, lam, d, c, l, modes=3):
    delta = (ej2 - ej1) / (ej1 + ej2)
    e_bar = 2 * ej1 * np.sqrt(1 + 2 * delta) * abs(np.cos(phi))
    d_alpha = delta / np.cos(phi / 2) ** 2 / (1 + np.tan(phi / 2) ** 2 * delta ** 2)
    r = l * d * e_bar / 2
    x = np.array([brentq(lambda v: v * np.sin(v) - r * np.cos(v), n * np.pi, n * np.pi + np.pi / 2 - 1e-12,
                         xtol=1e-15, rtol=1e-15) for n in range(modes)])
    s = np.sin(2 * x) / (2 * x)
    c_n = c * d / 2 * (1 + s)
    l_n = 1 / ((x ** 2 / (2 * l * d)) * (1 - s))
    w = 1 / np.sqrt(l_n * c_n)
    z = np.sqrt(0.5 * np.sqrt(l_n / c_n))
    edge = np.cos(x)
    m3_tilde = e_bar * d_alpha / 6 * np.prod(edge[:3] * z[:3])
    return {
        "e_bar": e_bar,
        "delta_alpha": d_alpha,
        "rhs": r,
        "k": list(x / d),
        "omega": list(w),
        "c_n": list(c_n),
        "l_n": list(l_n),
        "m3_tilde_012": m3_tilde,
        "g0": abs(3 * lam * m3_tilde),
    }


if __name__ == "__main__":
    args = tuple(float(a) for a in sys.argv[1:]) or REFERENCE
    print(json.dumps(pipeline(*args), indent=2))
