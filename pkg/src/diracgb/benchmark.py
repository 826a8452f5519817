"""Generated singular Lagrangians for timing runs.

``gauge_mechanics_problem`` builds SU(2) gauge mechanics with ``n_matter``
isovector matter fields x, z, ... coupled to the gauge field y, plus a
quartic gauge-invariant potential with seeded random rational couplings.
With one matter field the Lagrangian has degree 4 in 12 variables
(6 coordinates and their velocities).
"""

from __future__ import annotations

import random
from fractions import Fraction

_EPS = [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)]


def _rational(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 5)) * rng.choice((1, -1))


def _fmt(c: Fraction) -> str:
    return f"({c.numerator}/{c.denominator})"


def gauge_mechanics_problem(seed: int = 0, n_matter: int = 1, gauge_mass: bool = False) -> str:
    """Problem-file text for a seeded gauge-mechanics Lagrangian.

    ``gauge_mass`` adds a mass term for y, which breaks the gauge symmetry
    and turns the constraints second class.
    """
    rng = random.Random(seed)
    fields = [f"{chr(ord('x') + 2 * k) if k < 2 else 'w' + str(k)}" for k in range(n_matter)]
    coords = [f"{f}{i}" for f in fields for i in (1, 2, 3)] + ["y1", "y2", "y3"]
    g = abs(_rational(rng))
    kinetic = []
    for f in fields:
        for i in range(3):
            # (D f)_i = df_i + g eps_ijk y_j f_k
            rot = " + ".join(
                f"{s}*y{j + 1}*{f}{k + 1}" for (a, j, k, s) in _EPS if a == i
            ).replace("+ -1*", "- ").replace("1*", "", 1)
            kinetic.append(f"(d{f}{i + 1} + g*({rot}))^2")
    invariants = []
    for a in range(n_matter):
        for b in range(a, n_matter):
            fa, fb = fields[a], fields[b]
            invariants.append("(" + " + ".join(f"{fa}{i}*{fb}{i}" for i in (1, 2, 3)) + ")")
    potential = []
    for s in invariants:
        potential.append(f"{_fmt(_rational(rng))}*{s}")
        potential.append(f"{_fmt(_rational(rng))}*{s}^2")
    if gauge_mass:
        potential.append(f"{_fmt(abs(_rational(rng)))}*(y1^2 + y2^2 + y3^2)")
    lines = [
        f"# generated gauge mechanics, seed={seed}, matter fields={n_matter}, gauge mass={gauge_mass}",
        "coords: " + " ".join(coords),
        f"params: g={g}",
        "L = 1/2*(" + " + ".join(kinetic) + ")",
        "    - (" + " + ".join(potential) + ")",
    ]
    return "\n".join(lines) + "\n"
