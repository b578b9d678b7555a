"""
Utils Module
텍스트 파서와 소형 모델 생성기
"""

from .formula_parser import load_formulas, parse_formula, tokenize
from .parsers import (
    LatticeFile,
    fixture_path,
    load_lattice,
    load_transition_system,
    parse_lattice_text,
    parse_trace,
    parse_ts_text,
)
from .small_models import (
    all_small_systems,
    enumerate_total_systems,
    formula_chains,
    formula_corpus,
    ltl_det_chains,
    ltl_det_corpus,
)

__all__ = [
    "load_formulas",
    "parse_formula",
    "tokenize",
    "LatticeFile",
    "fixture_path",
    "load_lattice",
    "load_transition_system",
    "parse_lattice_text",
    "parse_trace",
    "parse_ts_text",
    "all_small_systems",
    "enumerate_total_systems",
    "formula_chains",
    "formula_corpus",
    "ltl_det_chains",
    "ltl_det_corpus",
]
