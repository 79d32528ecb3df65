#!/usr/bin/env python3
"""Scan the two-tone DCE envelope (amplitude g, detuning delta) and report which settings keep the
qubit near its ground state while the windowed photon number grows monotonically.

H = w a+a + (Omega/2) sz + g(t) sx (a + a+),  g(t) = g [cos((w+Omega+delta) t) + cos((w-Omega-delta) t)]

Usage: dce_tune.py [--g 0.004 0.008 0.01] [--delta 0.05 0.1 0.2] [--periods 10.5]
"""
import argparse

import numpy as np
from scipy.integrate import solve_ivp

W, OMEGA = 1.0, 0.6


def simulate(g, delta, t_max, cutoff, points=2001):
    n = cutoff + 1
    a = np.kron(np.diag(np.sqrt(np.arange(1, n)), 1), np.eye(2))
    sm = np.kron(np.eye(n), [[0, 1], [0, 0]])
    h0 = W * a.conj().T @ a + OMEGA / 2 * np.kron(np.eye(n), np.diag([-1, 1]))
    x = (sm + sm.T) @ (a + a.conj().T)
    wc, wr = W + OMEGA + delta, W - OMEGA - delta

    def rhs(t, y):
        return -1j * ((h0 + g * (np.cos(wc * t) + np.cos(wr * t)) * x) @ y)

    y0 = np.zeros(2 * n, complex)
    y0[0] = 1
    ts = np.linspace(0, t_max, points)
    ys = solve_ivp(rhs, (0, t_max), y0, t_eval=ts, rtol=1e-10, atol=1e-12, method="DOP853").y.T
    num = np.array([np.vdot(y, a.conj().T @ a @ y).real for y in ys])
    pe = np.array([np.sum(np.abs(y.reshape(n, 2)[:, 1]) ** 2) for y in ys])
    ent = []
    for y in ys:
        m = y.reshape(n, 2)
        ev = np.linalg.eigvalsh(m.T @ m.conj())
        ev = ev[ev > 1e-15]
        ent.append(-(ev * np.log(ev)).sum())
    return ts, num, pe, np.array(ent)


def windowed(ts, v, window):
    k = np.floor(ts / window).astype(int)
    full = int(np.floor(ts[-1] / window + 1e-12))
    return np.array([v[k == i].mean() for i in range(full)])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--g", type=float, nargs="+", default=[0.004, 0.008, 0.01])
    ap.add_argument("--delta", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    ap.add_argument("--periods", type=float, default=10.5)
    args = ap.parse_args()
    print(f"{'g':>7} {'delta':>6} {'t_max':>8} {'windows':>7} {'monotone':>8} {'N_final':>9} "
          f"{'max_pe':>8} {'max_S':>8} {'d(8->10)':>9}  ok")
    for g in args.g:
        for delta in args.delta:
            window = 2 * np.pi / delta
            t_max = args.periods * window
            ts, n8, pe, ent = simulate(g, delta, t_max, 8)
            n10 = simulate(g, delta, t_max, 10)[1]
            avg = windowed(ts, n8, window)
            mono = len(avg) >= 10 and bool(np.all(np.diff(avg) > 0))
            change = np.abs(n8 - n10).max()
            ok = mono and pe.max() < 0.1 and ent.max() < 0.1 and change < 1e-6
            print(f"{g:7.4f} {delta:6.3f} {t_max:8.1f} {len(avg):7d} {str(mono):>8} {n8[-1]:9.4f} "
                  f"{pe.max():8.4f} {ent.max():8.4f} {change:9.1e}  {'yes' if ok else 'no'}")


if __name__ == "__main__":
    main()
