from dataclasses import dataclass

import pytest

from polardeg.poly import Polynomial


@dataclass(frozen=True)
class Entry:
    name: str
    ring: tuple
    source: str
    pol: int
    isolated: bool  # only isolated singular points (or smooth)

    @property
    def f(self) -> Polynomial:
        return Polynomial.parse(self.source, self.ring)


XYZ = ("x", "y", "z")
XYZW = ("x", "y", "z", "w")
GN_RING = ("z0", "z1", "z2", "z3", "z4")

CORPUS = [
    Entry("conic_and_tangent", XYZ, "x*(x*y+z^2)", 1, True),
    Entry("conic_tangent_cubic", XYZ, "x*(x*y+z^2) - z^3", 2, True),
    Entry("cubic_surface_line", XYZW, "x^2*z+x*y*w+y^3", 1, False),
    Entry("whitney_type_surface", XYZW, "x^2*z+y^2*w", 2, False),
    Entry("fermat_cubic", XYZ, "x^3+y^3+z^3", 4, True),
    Entry("smooth_quadric", XYZ, "x^2+y^2+z^2", 1, True),
    Entry("vanishing_hessian", GN_RING, "z3^2*z0+z3*z4*z1+z4^2*z2", 0, False),
]


def pt(*coords):
    from gmpy2 import mpq

    return tuple(mpq(c) for c in coords)


@pytest.fixture(params=CORPUS, ids=lambda e: e.name)
def entry(request):
    return request.param


# acceptance summary lines ------------------------------------------------------------

ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
