"""
Configuration Package
환경 변수 및 분석 기본값
"""

from .env import EnvConfig
from .defaults import AnalysisDefaults

__all__ = ["EnvConfig", "AnalysisDefaults"]
