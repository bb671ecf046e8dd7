import numpy as np
import pytest

from fastpoisson.grid import BoundaryCondition, GridKind

# the five supported boundary/grid rows
ROWS = (
    (BoundaryCondition.PERIODIC, GridKind.REGULAR),
    (BoundaryCondition.DIRICHLET, GridKind.REGULAR),
    (BoundaryCondition.DIRICHLET, GridKind.STAGGERED),
    (BoundaryCondition.NEUMANN, GridKind.REGULAR),
    (BoundaryCondition.NEUMANN, GridKind.STAGGERED),
)

ROW_IDS = ["per-reg", "dir-reg", "dir-stag", "neu-reg", "neu-stag"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
