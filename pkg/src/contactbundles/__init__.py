"""Numerical verification of contact fibre bundles on embedded manifolds.

Contact forms, principal connections, moment maps, associated bundles,
K-contact metrics and contact cross-sections, all checked pointwise at
sampled points of level-set manifolds.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, GeometryError, NonConvergence, NotContact,  # noqa: E402
                     ScenarioError)
from .geomcore import (EmbeddedManifold, SampleSet, TangentFrame, ellipsoid,  # noqa: E402
                       euclidean, point_manifold, product, sphere)
from .forms import OneFormField, VectorFieldEntity, pfaffian, reeb  # noqa: E402
from .contact import ContactStructure, verify_contact  # noqa: E402

__all__ = [
    "ConfigError", "GeometryError", "NonConvergence", "NotContact", "ScenarioError",
    "EmbeddedManifold", "SampleSet", "TangentFrame", "ellipsoid", "euclidean",
    "point_manifold", "product", "sphere", "OneFormField", "VectorFieldEntity", "pfaffian",
    "reeb", "ContactStructure", "verify_contact",
]
