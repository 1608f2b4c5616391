#!/usr/bin/env python3
"""Regenerates tests/oracle_values.hpp.

Every expected value used by the unit and acceptance tests is derived here,
by straight-line arithmetic on the reference preset constants, so the test
suite checks the library against an independent computation rather than
against itself.  Run from the repo root:

    python3 tools/make_oracle_values.py > tests/oracle_values.hpp
"""
import math
from fractions import Fraction

# Reference preset ("C" mix): classes ordered M, SC, FC, S.
C = [0.20, 0.15, 0.12, 0.10]          # per-class max service, ms
D = [80.0, 20.0, 8.0, 5.0]            # deadlines, ms
PRIO = [1, 2, 3, 4]                   # higher rank served first
MIX_C = [0.70, 0.15, 0.10, 0.05]
MU = 1000.0                           # 1/s
V_MAX = 1.5                           # ms
LAMBDA_S = 120.0                      # 1/s
W = (0.34, 0.33, 0.33)
SFRT_STAR = 6.0                       # ms
DELTA_TAR = 150.0                     # ms
EPS = 0.2
ALPHA = 1.37
RHO_MAX = 0.28
S_MIN = 0.05                          # ms

def wcrt_base(k):
    return sum(C[i] for i in range(4) if PRIO[i] > PRIO[k]) + C[k]

def wcrt_bound(k, delta):
    return V_MAX * (1.0 - delta) + wcrt_base(k)

def thresholds():
    dq = RHO_MAX * LAMBDA_S / (EPS * MU)
    dw = max(max(1.0 - (D[k] - wcrt_base(k)) / V_MAX, 0.0) for k in range(4))
    return dq, dw, max(dw, ALPHA * dq)

def rho_safe(delta):
    return min(max(EPS * MU * delta / (ALPHA * LAMBDA_S), 0.0), 1.0)

def aos_asym(rho, delta, wq_ms=(0.0, 0.0, 0.0, 0.0), mix=MIX_C, monitoring=(0,)):
    vals = []
    for k in monitoring:
        lam = rho * LAMBDA_S * mix[k]        # 1/s
        gen = math.inf if lam == 0.0 else 1000.0 / lam
        vals.append(gen + wq_ms[k] / 2.0 + 1000.0 / (MU * delta))
    return max(vals)

def safety(delta):
    return math.exp(-max(wcrt_bound(k, delta) for k in range(4)) / SFRT_STAR)

def psi(f, r, s):
    def p(b, e):
        return 1.0 if e == 0.0 else b ** e
    return p(f, W[0]) * p(r, W[1]) * p(s, W[2])

def f0(rho, delta):
    return min(1.0, DELTA_TAR / aos_asym(rho, delta))

def emit(name, value, comment=""):
    tail = f"  // {comment}" if comment else ""
    print(f"inline constexpr double {name} = {value!r};{tail}")

dq, dw, ds = thresholds()

print("// Frozen expected values for the test suite.")
print("// Generated by tools/make_oracle_values.py; edit that script, not this file.")
print("#pragma once")
print()
print("namespace oracle {")
print()
emit("kDeltaQueue", dq)
emit("kDeltaWcrt", dw)
emit("kDeltaSafe", ds)
emit("kRhoSafeAt030", rho_safe(0.30))
emit("kRhoSafeAt024", rho_safe(0.24))
emit("kRhoSafeCoeff", EPS * MU / (ALPHA * LAMBDA_S))
print()
for k, n in enumerate(("M", "SC", "FC", "S")):
    emit(f"kWcrtBase{n}", wcrt_base(k))
emit("kWcrtBoundM023", wcrt_bound(0, 0.23))
emit("kWcrtBoundM030", wcrt_bound(0, 0.30))
emit("kWcrtBoundM100", wcrt_bound(0, 1.00))
print()
emit("kAosRho01Delta03", aos_asym(0.1, 0.3))
emit("kAosRho01Delta03WqM2", aos_asym(0.1, 0.3, wq_ms=(2.0, 0, 0, 0)))
emit("kAosRho0001Delta03", aos_asym(0.001, 0.3))
emit("kSafetyDelta1", safety(1.0))
emit("kSafetyDelta023", safety(0.23))
emit("kSafetyDelta03", safety(0.30))
emit("kPsiLimitRho01Delta023", psi(f0(0.1, 0.23), 1.0, safety(0.23)))
emit("kPsiLimitRho01Delta03", psi(f0(0.1, 0.30), 1.0, safety(0.30)))
emit("kPsiLimitRho0001Delta03", psi(f0(0.001, 0.30), 1.0, safety(0.30)))
emit("kF0Rho001Delta03", f0(0.01, 0.30))
print()
# Arrival-rate spot checks.
emit("kLambdaM_rho01_mixC", 0.1 * LAMBDA_S * MIX_C[0])
emit("kUtil_rho028_delta1", 0.28 * LAMBDA_S / (MU * 1.0))
emit("kUtil_rho028_small", 0.28 * LAMBDA_S / (MU * 0.0336))
print()
# M/G/1 mean queueing delay, exponential service with mean 1/MU, utilisation 1/2:
# lam * E[S^2] / (2 (1 - util)) with lam = util * MU, E[S^2] = 2 / MU^2 (seconds),
# converted to ms.
util = 0.5
lam = util * MU
emit("kPkWaitMs", 1000.0 * lam * (2.0 / MU**2) / (2.0 * (1.0 - util)))
print()
# Piecewise-linear age test cases (exact rational arithmetic, then to double).
# Case 1: one update generated at t=5 delivered at t=8, horizon 20, window from 0.
#   age-of-latest starts from a virtual sync at t=0.
ai = Fraction(8 * 8, 2) + Fraction((20 - 5) ** 2 - (8 - 5) ** 2, 2)
emit("kAgeSingleAoi", float(ai / 20), "integral 140 over horizon 20")
emit("kAgeSinglePaoi", 8.0)
emit("kAgeSingleAos", float(Fraction((8 - 5) ** 2, 2) / 20))
# Case 2: updates every 10 at 0,10,...,90, each delivered 2 later, horizon 102,
# stats window starts at 5 (so the first delivery at t=2 is excluded).
w, hor, per, dly = 5, 102, 10, 2
aoi = Fraction(12 ** 2 - 5 ** 2, 2)                # window start to delivery at 12
aoi += Fraction(8 * (12 ** 2 - 2 ** 2), 2)          # eight full sawtooth periods
aoi += Fraction(12 ** 2 - 2 ** 2, 2)                # tail after delivery at 92
emit("kAgeSawAoi", float(aoi / (hor - w)), "P/2 + d plus window-edge effects")
emit("kAgeSawPaoi", float(per + dly))
aos = Fraction(9 * dly ** 2, 2)                     # gens 10..90 desync for 2 each
emit("kAgeSawAos", float(aos / (hor - w)))
print()
emit("kVoiAtTau", math.exp(-1.0), "aoi equal to tau_v")
emit("kAocAtTau", 0.5, "aoi equal to tau_c")
emit("kWorstActivation", (1.0 - 0.23) * V_MAX)
print()
print("} // namespace oracle")
