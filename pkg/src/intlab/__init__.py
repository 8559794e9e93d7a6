"""Intensional semantics with a vector-space homomorphism and modal operators."""
from pathlib import Path

from .errors import IntlabError
from .model import IntensionalModel, load_model, model_from_dict

__version__ = "0.1.0"

DATA_DIR = Path(__file__).parent / "data"


def demo_model_path(name: str):
    """Path of a shipped demo model (``fourworld`` or ``twosort``)."""
    return DATA_DIR / f"{name}.json"


__all__ = ["IntensionalModel", "IntlabError", "load_model", "model_from_dict",
           "demo_model_path", "DATA_DIR"]
