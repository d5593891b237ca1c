"""Dedekind eta, lattice Eisenstein series and the Weierstrass discriminant.

Conventions: q = exp(2 pi i tau) on the upper half-plane, eta(tau) =
q^(1/24) prod_(k>=1) (1 - q^k) with the 24th root taken as
exp(2 pi i tau / 24), and G_k(tau) = sum'_(m,n) (m + n tau)^(-2k), the
weight-2k Eisenstein series of the lattice Z + tau Z.  The elliptic
invariants are g2 = 60 G2, g3 = 140 G3 and the discriminant is
Delta = g2^3 - 27 g3^2, which satisfies Delta = (2 pi)^12 eta^24.

Two evaluation routes exist for G_k: the literal shell-truncated double sum
(eisenstein_series, with an integral-comparison tail bound) and a
geometrically convergent divisor-sum q-expansion (eisenstein_series_q).
The q-expansion is what weierstrass_discriminant uses; the double sum
serves as its independent cross-check at coarser precision.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _riemann_zeta

from .accum import Accumulator, shell_points
from .errors import ConvergenceError, DomainError
from .report import VerificationReport

_ETA_MAX_TERMS = 200_000


@dataclass(frozen=True)
class Modulus:
    """A point tau in the upper half-plane plus an absolute error target."""

    tau: complex
    precision_target: float = 1e-12

    def __post_init__(self):
        if not complex(self.tau).imag > 0:
            raise DomainError(f"Im(tau) must be positive, got {self.tau}")
        if not self.precision_target > 0:
            raise DomainError("precision_target must be positive")


@dataclass
class ModularValues:
    eta: complex
    G2: complex
    G3: complex
    g2: complex
    g3: complex
    discriminant: complex


def dedekind_eta(m):
    """Dedekind eta via the q-product, truncated below m.precision_target.

    The product is cut at the first k with |q|^k / (1 - |q|) below a tenth
    of the precision target, which bounds the relative tail of the
    logarithm of the product.
    """
    tau = complex(m.tau)
    q = cmath.exp(2j * math.pi * tau)
    aq = abs(q)
    out = cmath.exp(2j * math.pi * tau / 24.0)
    k = 1
    qk = q
    while abs(qk) / (1.0 - aq) >= m.precision_target / 10.0:
        out *= 1.0 - qk
        qk *= q
        k += 1
        if k > _ETA_MAX_TERMS:
            raise ConvergenceError(
                f"eta tail bound not met within {_ETA_MAX_TERMS} factors "
                f"(Im tau = {tau.imag:.3g} too small)"
            )
    out *= 1.0 - qk
    return out


def _min_boundary_distance(tau):
    # min |x + y tau| over the boundary of the sup-norm unit square;
    # on each edge |x + y tau|^2 is a quadratic in the free parameter.
    best = math.inf
    for fixed in (-1.0, 1.0):
        # edge x = fixed, y in [-1, 1]: |fixed + y tau|^2
        a = abs(tau) ** 2
        b = 2.0 * fixed * tau.real
        c = fixed * fixed
        ystar = max(-1.0, min(1.0, -b / (2 * a)))
        best = min(best, a * ystar**2 + b * ystar + c)
        # edge y = fixed, x in [-1, 1]: |x + fixed tau|^2
        xstar = max(-1.0, min(1.0, -fixed * tau.real))
        best = min(best, xstar**2 + 2 * fixed * xstar * tau.real + fixed * fixed * a)
    return math.sqrt(best)


def eisenstein_tail_bound(k, tau, cutoff):
    """Upper bound on the absolute tail of the G_k double sum beyond cutoff."""
    mu = _min_boundary_distance(complex(tau))
    # shell j holds 8j points, each term bounded by (mu j)^(-2k)
    return 8.0 * mu ** (-2 * k) * cutoff ** (2 - 2 * k) / (2 * k - 2) * (1 + 2.0 / cutoff)


def eisenstein_series(k, m, cutoff):
    """G_k(tau) by the literal double sum over 0 < max(|m|,|n|) <= cutoff.

    Shells are summed in increasing sup-norm order, lexicographically inside
    each shell, with compensated accumulation across shells.  The integral
    comparison tail bound must meet m.precision_target, otherwise a
    ConvergenceError reports the certified tail.
    """
    if k < 2:
        raise DomainError("weight 2k >= 4 required (k >= 2); weight 2 is not absolutely convergent")
    if cutoff < 1:
        raise DomainError("cutoff must be a positive integer")
    tau = complex(m.tau)
    tail = eisenstein_tail_bound(k, tau, cutoff)
    if tail > m.precision_target:
        raise ConvergenceError(
            f"tail bound {tail:.3e} exceeds precision target {m.precision_target:.3e}; "
            f"increase cutoff"
        )
    acc_re = Accumulator()
    acc_im = Accumulator()
    for j in range(1, cutoff + 1):
        pts = shell_points(2, j)
        w = pts[:, 0] + pts[:, 1] * tau
        vals = w ** (-2 * k)
        s = complex(vals.sum())
        acc_re.add(s.real)
        acc_im.add(s.imag)
    return complex(acc_re.value, acc_im.value)


def eisenstein_series_q(k, m):
    """G_k(tau) via the divisor-sum q-expansion (geometric convergence).

    G_k = 2 zeta(2k) + 2 (2 pi i)^(2k) / (2k-1)! * sum_(j>=1) sigma_(2k-1)(j) q^j.
    The tail is certified with sigma_(2k-1)(j) <= j^(2k).
    """
    if k < 2:
        raise DomainError("k >= 2 required")
    tau = complex(m.tau)
    q = cmath.exp(2j * math.pi * tau)
    aq = abs(q)
    pref = 2.0 * (2j * math.pi) ** (2 * k) / math.factorial(2 * k - 1)
    # choose J so the tail sum_(j>J) j^(2k) aq^j, bounded by a geometric
    # series with ratio r, stays below a tenth of the target
    target = m.precision_target / 10.0
    J = 8
    while True:
        r = ((J + 2) / (J + 1)) ** (2 * k) * aq
        head = (J + 1) ** (2 * k) * aq ** (J + 1)
        if r < 0.9 and abs(pref) * head / (1.0 - r) < target:
            break
        J += 4
        if J > 20_000:
            raise ConvergenceError("q-expansion tail bound not met (Im tau too small)")
    sigma = np.zeros(J + 1)
    for d in range(1, J + 1):
        sigma[d::d] += float(d) ** (2 * k - 1)
    powers = q ** np.arange(1, J + 1)
    series = complex(np.sum(sigma[1:] * powers))
    return 2.0 * complex(_riemann_zeta(2 * k)) + pref * series


def weierstrass_discriminant(m):
    """Eisenstein values, elliptic invariants and Delta = g2^3 - 27 g3^2."""
    G2 = eisenstein_series_q(2, m)
    G3 = eisenstein_series_q(3, m)
    g2 = 60.0 * G2
    g3 = 140.0 * G3
    disc = g2**3 - 27.0 * g3**2
    eta = dedekind_eta(m)
    return ModularValues(eta=eta, G2=G2, G3=G3, g2=g2, g3=g3, discriminant=disc)


def modular_identity_residuals(m, tolerance=1e-10):
    """Self-consistency residuals of the classical identities at m.tau.

    (a) |Delta / ((2 pi)^12 eta^24) - 1|
    (b) |eta(tau+1) exp(-i pi/12) / eta(tau) - 1|
    (c) |eta(-1/tau) / (sqrt(-i tau) eta(tau)) - 1|, principal square root.
    """
    tau = complex(m.tau)
    vals = weierstrass_discriminant(m)
    eta_tau = vals.eta
    res_a = abs(vals.discriminant / ((2 * math.pi) ** 12 * eta_tau**24) - 1.0)

    eta_T = dedekind_eta(Modulus(tau + 1.0, m.precision_target))
    res_b = abs(eta_T * cmath.exp(-1j * math.pi / 12.0) / eta_tau - 1.0)

    eta_S = dedekind_eta(Modulus(-1.0 / tau, m.precision_target))
    res_c = abs(eta_S / (cmath.sqrt(-1j * tau) * eta_tau) - 1.0)

    inputs = f"tau={tau}"
    return [
        VerificationReport("modular.discriminant_eta24", inputs, res_a, tolerance),
        VerificationReport("modular.eta_T_transform", inputs, res_b, tolerance),
        VerificationReport("modular.eta_S_transform", inputs, res_c, tolerance),
    ]
