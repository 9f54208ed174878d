"""Reproducible synthetic instances y = X beta + z.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014) with its
published constants, so any language can regenerate the same streams:

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                      (all arithmetic mod 2^64)

Uniforms on the open unit interval are ((out >> 11) + 0.5) * 2^-53.
Gaussians are Acklam's rational approximation of the inverse normal CDF
applied to one uniform each (relative error below 1.2e-9), with no
refinement step.

Draw order for an instance (n, p, s, sigma): the n*p entries of X row by row,
then s support indices by partial Fisher-Yates over range(p) (index
i + floor(u * (p - i))), then for each support slot in draw order a magnitude
0.5 + 1.5 u and a sign (-1 if u < 0.5 else +1), then n noise values sigma * N.
"""
import math
from dataclasses import dataclass

import numpy as np

MASK = (1 << 64) - 1

_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return ((self.next_u64() >> 11) + 0.5) * 2.0**-53

    def normal(self):
        return inverse_normal_cdf(self.uniform())


def inverse_normal_cdf(u):
    if not 0.0 < u < 1.0:
        raise ValueError("u must lie in (0, 1)")
    if u < _P_LOW:
        q = math.sqrt(-2.0 * math.log(u))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if u > 1.0 - _P_LOW:
        return -inverse_normal_cdf(1.0 - u)
    q = u - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


@dataclass(frozen=True)
class Instance:
    X: np.ndarray
    y: np.ndarray
    beta: np.ndarray
    z: np.ndarray
    seed: int

    @property
    def support(self):
        return tuple(int(j) for j in np.flatnonzero(self.beta))

    @property
    def signs(self):
        return tuple(int(np.sign(self.beta[j])) for j in self.support)


def generate(n, p, s, sigma, seed):
    if n < 1 or p < 1 or not 0 <= s <= p or sigma < 0:
        raise ValueError(f"invalid dimensions n={n}, p={p}, s={s}, sigma={sigma}")
    rng = SplitMix64(seed)
    X = np.array([[rng.normal() for _ in range(p)] for _ in range(n)]).reshape(n, p)
    perm = list(range(p))
    for i in range(s):
        k = i + int(rng.uniform() * (p - i))
        perm[i], perm[k] = perm[k], perm[i]
    beta = np.zeros(p)
    for j in perm[:s]:
        mag = 0.5 + 1.5 * rng.uniform()
        beta[j] = -mag if rng.uniform() < 0.5 else mag
    z = np.array([sigma * rng.normal() for _ in range(n)])
    return Instance(X, X @ beta + z, beta, z, seed)
