"""mrw: a workbench for rewriting systems over arbitrary ambient monoids."""

from mrw.backends import (
    FreeBackend,
    FreeProductBackend,
    NaturalsBackend,
    PowersetBackend,
    TableBackend,
    UsageError,
    free_product_adjoin,
)
from mrw.engine import (
    Bounds,
    CheckVerdict,
    DerivationTrace,
    Mrs,
    Rule,
    Status,
    certify,
    check_confluent,
    check_noetherian,
    equivalent,
    is_irreducible,
    mrs,
    normal_form,
    one_step,
    reaches,
)
from mrw.tables import FiniteMonoid

__all__ = [
    "Bounds",
    "CheckVerdict",
    "DerivationTrace",
    "FiniteMonoid",
    "FreeBackend",
    "FreeProductBackend",
    "Mrs",
    "NaturalsBackend",
    "PowersetBackend",
    "Rule",
    "Status",
    "TableBackend",
    "UsageError",
    "certify",
    "check_confluent",
    "check_noetherian",
    "equivalent",
    "free_product_adjoin",
    "is_irreducible",
    "mrs",
    "normal_form",
    "one_step",
    "reaches",
]

__version__ = "0.1.0"
