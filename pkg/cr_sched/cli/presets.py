# cr_sched/cli/presets.py

"""
Built-in scenarios fig1..fig4: three users at roughly equal distances (about 2)
from the eNodeB and the PU-RX, with the second user moved to distance about 1
from one or both of them.

The base distances are slightly perturbed so that no two alphas coincide:
d_sd = (2.002, 2.004, 2.006) and d_sp = (2.001, 2.003, 2.005). A second user
moved "to about 1" gets the same pattern, d_sd = 1.004 and d_sp = 1.003.
"""

from cr_sched.core.errors import DomainError

BASE_D_SD = (2.002, 2.004, 2.006)
BASE_D_SP = (2.001, 2.003, 2.005)
NEAR_D_SD = 1.004
NEAR_D_SP = 1.003

# name -> (description, d_sd overrides, d_sp overrides), overrides keyed by 0-based user
_PRESETS: dict[str, tuple[str, dict[int, float], dict[int, float]]] = {
    "fig1": ("every user about equally far from the eNodeB and the PU-RX", {}, {}),
    "fig2": ("second user close to the eNodeB", {1: NEAR_D_SD}, {}),
    "fig3": ("second user close to the PU-RX", {}, {1: NEAR_D_SP}),
    "fig4": ("second user close to both, equal distance ratio", {1: NEAR_D_SD}, {1: NEAR_D_SP}),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_document(name: str) -> dict:
    """Scenario-file document (as a dict) of a built-in preset."""
    try:
        description, sd_over, sp_over = _PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose one of {', '.join(PRESET_NAMES)}") from None
    users = [
        {"d_sd": sd_over.get(i, d_sd), "d_sp": sp_over.get(i, d_sp)}
        for i, (d_sd, d_sp) in enumerate(zip(BASE_D_SD, BASE_D_SP))
    ]
    return {"label": name, "description": description, "users": users, "beta": 3.0}


def is_preset(name: str) -> bool:
    return name in _PRESETS
