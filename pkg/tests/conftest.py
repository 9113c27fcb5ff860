import numpy as np
from hypothesis import HealthCheck, settings

from cone_zeta.symplectic import SpectralSpec

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_lagrangian(rng: np.random.Generator, q0: int, q1: int, complex_: bool = False):
    """A valid (A, B) for the given block sizes.

    With A' = G C V and B = G S V (C, S diagonal cos/sin of random angles,
    V unitary, G invertible), A' B* = G C S G* is self-adjoint and (A' B) has
    rank q.  A is A' with its first q0 columns negated.
    """
    q = q0 + q1
    th = rng.uniform(0, np.pi, q)
    if complex_:
        z = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
        g = rng.normal(size=(q, q)) + 1j * rng.normal(size=(q, q))
    else:
        z = rng.normal(size=(q, q))
        g = rng.normal(size=(q, q))
    v, _ = np.linalg.qr(z)
    g = g + 3 * np.eye(q)
    ap = g @ np.diag(np.cos(th)) @ v
    b = g @ np.diag(np.sin(th)) @ v
    a = ap.copy()
    a[:, :q0] *= -1
    return a, b


def random_spec(rng: np.random.Generator, q0: int, q1: int, R: float = 1.0) -> SpectralSpec:
    nus = tuple(float(v) for v in rng.uniform(0.05, 0.95, q1))
    return SpectralSpec(q0, nus, R)
