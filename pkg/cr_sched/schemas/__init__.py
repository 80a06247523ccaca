from .schemas import (
    Method,
    PowerMode,
    UserLink,
    PrimarySide,
    Scenario,
    AlphaVector,
    QuadratureConfig,
    SelectionProbabilities,
    BlockTally,
    McReport,
    ComparisonRow,
    Comparison,
    ReportRow,
    RunMetadata,
    RunReport,
    SweepPoint,
)

__all__ = [
    "Method",
    "PowerMode",
    "UserLink",
    "PrimarySide",
    "Scenario",
    "AlphaVector",
    "QuadratureConfig",
    "SelectionProbabilities",
    "BlockTally",
    "McReport",
    "ComparisonRow",
    "Comparison",
    "ReportRow",
    "RunMetadata",
    "RunReport",
    "SweepPoint",
]
