"""svss: verifiable secret sharing with space-efficient verification."""

from .config import Settings
from .fields import FieldElement, FieldSpec
from .orchestrator import Orchestrator

__all__ = ["FieldElement", "FieldSpec", "Orchestrator", "Settings"]
