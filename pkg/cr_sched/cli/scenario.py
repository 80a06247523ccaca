# cr_sched/cli/scenario.py

"""
Scenario ingestion: JSON scenario documents and the built-in presets.

Every validation problem is reported as ScenarioLoadError naming the field
and, for files, the line it appears on.
"""

import json
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from cr_sched.channel import PowerMode
from cr_sched.cli.presets import is_preset, preset_document
from cr_sched.core.config import settings
from cr_sched.core.errors import ScenarioLoadError
from cr_sched.core.logger import logger
from cr_sched.schemas import PrimarySide, Scenario, UserLink

MethodChoice = Literal["closed-form", "quadrature", "monte-carlo", "all"]
FormatChoice = Literal["json", "csv"]


class LinkEntry(BaseModel):
    """One entry of the users array."""
    model_config = ConfigDict(extra="forbid")

    d_sd: float = Field(..., gt=0, allow_inf_nan=False)
    d_sp: float = Field(..., gt=0, allow_inf_nan=False)


class ScenarioFile(BaseModel):
    """
    Textual scenario document. Omitted optional keys take the settings defaults.
    """
    model_config = ConfigDict(extra="forbid")

    users: List[LinkEntry] = Field(..., min_length=2)
    beta: float = Field(default_factory=lambda: settings.default_beta, gt=0, allow_inf_nan=False)
    trials: int = Field(default_factory=lambda: settings.default_trials, ge=1)
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0, lt=2**64)
    method: MethodChoice = "all"
    power_mode: PowerMode = PowerMode.APPROX
    primary: Optional[PrimarySide] = None
    format: FormatChoice = "json"
    record_snr: bool = False
    label: Optional[str] = None
    description: Optional[str] = None

    def to_scenario(self) -> Scenario:
        return Scenario(
            users=[UserLink(d_sd=u.d_sd, d_sp=u.d_sp, beta=self.beta) for u in self.users],
            beta=self.beta,
            primary=self.primary or PrimarySide(),
            power_mode=self.power_mode,
            trials=self.trials,
            seed=self.seed,
            record_snr=self.record_snr,
            label=self.label,
        )


def _field_name(loc: tuple) -> str:
    name = ""
    for part in loc:
        if isinstance(part, int):
            name += f"[{part}]"
        else:
            name += f".{part}" if name else str(part)
    return name or "<document>"


def _line_of(text: str, loc: tuple) -> Optional[int]:
    """1-based line of the key an error location points at, if it can be found."""
    keys = [p for p in loc if isinstance(p, str)]
    if not keys:
        return None
    needle = f'"{keys[-1]}"'
    # users[i].key is the (i+1)-th occurrence of "key"
    occurrence = loc[1] if len(loc) >= 3 and loc[0] == "users" and isinstance(loc[1], int) else 0
    start = -1
    for _ in range(occurrence + 1):
        start = text.find(needle, start + 1)
        if start < 0:
            return None
    return text.count("\n", 0, start) + 1


def parse_scenario_text(text: str, source: str = "<string>", overrides: Optional[dict] = None) -> ScenarioFile:
    """Parse and validate a JSON scenario document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        logger.error("Invalid JSON in %s: %s", source, e)
        raise ScenarioLoadError(e.msg, line=e.lineno, source=source) from e
    if not isinstance(data, dict):
        raise ScenarioLoadError("scenario document must be a JSON object", line=1, source=source)
    return _validate(data, text, source, overrides)


def _validate(data: dict, text: str, source: str, overrides: Optional[dict]) -> ScenarioFile:
    merged = {**data, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    try:
        parsed = ScenarioFile.model_validate(merged)
        parsed.to_scenario()
        return parsed
    except ValidationError as e:
        err = e.errors()[0]
        loc = tuple(err["loc"])
        field = _field_name(loc)
        message = "unknown key" if err["type"] == "extra_forbidden" else err["msg"]
        line = _line_of(text, loc) if text else None
        logger.error("Invalid scenario %s: %s: %s", source, field, message)
        raise ScenarioLoadError(message, field=field, line=line, source=source) from e


def load_scenario_file(source: str | Path, overrides: Optional[dict] = None) -> ScenarioFile:
    """
    Read a scenario document from a path, or build a built-in preset by name.

    overrides (e.g. CLI flags) replace keys of the document; None values are ignored.
    """
    path = Path(source)
    if not path.exists() and is_preset(str(source)):
        logger.info("Using built-in preset %s", source)
        return _validate(preset_document(str(source)), "", str(source), overrides)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Cannot read scenario %s: %s", source, e)
        raise ScenarioLoadError(f"cannot read file ({e.strerror or e})", source=str(source)) from e
    return parse_scenario_text(text, str(source), overrides)


def load_scenario(source: str | Path, overrides: Optional[dict] = None) -> Scenario:
    """Validated Scenario from a file path or preset name."""
    return load_scenario_file(source, overrides).to_scenario()
