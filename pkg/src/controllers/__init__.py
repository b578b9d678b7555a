"""
Controllers Module
CLI 하위 명령 핸들러
"""

from .lattice_controller import shellcore
from .paper_controller import paper_examples
from .system_controller import analyze, check, collect_formulas
from .witness_controller import witness

__all__ = ["analyze", "check", "collect_formulas", "shellcore", "witness", "paper_examples"]
