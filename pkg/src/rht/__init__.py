"""Rational homotopy toolkit: Gottlieb groups from Sullivan models, exactly."""

from .algebra import (
    AlgElement,
    GenSet,
    Generator,
    Monomial,
    augment,
    basis_in_degree,
    multiply,
    normalize_product,
)
from .catalog import Catalog, build_poset, enumerate_fibrations
from .derivations import (
    ABSOLUTE,
    IDEAL,
    RELATIVE,
    Derivation,
    apply_derivation,
    augmentation_matrix,
    boundary_matrix,
    der_basis,
    restriction_matrix,
)
from .invariants import (
    DepthResult,
    GottliebResult,
    ToralCertificate,
    connecting_image,
    connecting_images,
    depth_of_subspaces,
    depth_over_catalog,
    der_homology,
    fibre_gottlieb,
    finiteness_window,
    gottlieb,
    les_check,
    toral_certificate,
)
from .linalg import RatMatrix, Subspace, homology, image, kernel, rref
from .model import (
    ClassificationReport,
    RelativeModel,
    SullivanModel,
    classify,
    cohomology,
    parse_document,
    parse_fibration,
    parse_model,
    trivial_fibration,
)
from .poset import Poset, poset_of_subspaces, render

__version__ = "0.1.0"
