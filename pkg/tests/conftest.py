import numpy as np


def rand_bloch(rng, r_max=0.95, r_min=0.0):
    """Bloch vector with uniform direction and radius uniform in [r_min, r_max]."""
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * rng.uniform(r_min, r_max)


def rand_ball(rng, r_max=0.95):
    """Bloch vector uniform in the ball of radius r_max."""
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v * r_max * rng.uniform() ** (1.0 / 3.0)


def rand_unitary(rng):
    """Haar-ish random 2x2 unitary from a QR decomposition."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def log_uniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def relerr(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale
