import numpy as np

from mbcoherence.states import DensityMatrix


def random_density(dim, rng, rank=None):
    """Random full-rank (or given-rank) density matrix."""
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real)
