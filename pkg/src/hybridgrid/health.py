"""Unit-level health accounting and intra-system charge distribution.

Every MWd pushed through a unit costs state of health in proportion to the
unit's cycle-wear rate. The health-aware distributor ranks units by a
weighted blend of SoH and emptiness and fills the best-ranked first, which
steers throughput away from worn units; the baseline splits charge equally.
Discharge is always split equally across units (see dispatch.apply_discharge)
regardless of these settings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dispatch import split_equally
from .model import BatteryUnit, StorageSystem, system_headroom

_REL_TOL = 1e-9

DEFAULT_W_SOH = 0.5
DEFAULT_W_SOC = 0.5

# Calibrated cycle-wear defaults: SoH percentage points lost per equivalent
# full cycle. Chosen so a two-year run on the reference scenario drives the
# fleet toward the 80% end-of-life region, where ranked and uniform charging
# become measurably different; see scenarios/reference.json.
DEFAULT_R_CHARGE = 0.2
DEFAULT_R_DISCHARGE = 0.25


@dataclass(frozen=True)
class UnitScore:
    unit_id: int
    score: float


def degrade_on_charge(unit: BatteryUnit, charged_mwd: float) -> None:
    """Apply cycle wear for a charge of charged_mwd; energy is untouched."""
    if charged_mwd < 0:
        raise ValueError(f"unit {unit.id}: negative charge {charged_mwd}")
    unit.soh_pct = max(0.0, unit.soh_pct - charged_mwd * unit.r_charge / unit.capacity_mwd)


def degrade_on_discharge(unit: BatteryUnit, discharged_mwd: float) -> None:
    """Apply cycle wear for a discharge of discharged_mwd; energy is untouched."""
    if discharged_mwd < 0:
        raise ValueError(f"unit {unit.id}: negative discharge {discharged_mwd}")
    unit.soh_pct = max(
        0.0, unit.soh_pct - discharged_mwd * unit.r_discharge / unit.capacity_mwd
    )


def unit_score(
    unit: BatteryUnit,
    w_soh: float = DEFAULT_W_SOH,
    w_soc: float = DEFAULT_W_SOC,
    charge_full_first: bool = False,
) -> UnitScore:
    """Charging desirability in [0, 1]: healthy and empty scores high.

    charge_full_first flips the emptiness term for experiments that
    deliberately concentrate charge on already-full units.
    """
    soc = unit.energy_mwd / unit.capacity_mwd
    soc_term = soc if charge_full_first else 1.0 - soc
    return UnitScore(unit.id, w_soh * unit.soh_pct / 100.0 + w_soc * soc_term)


def rank_units(
    system: StorageSystem,
    w_soh: float = DEFAULT_W_SOH,
    w_soc: float = DEFAULT_W_SOC,
    charge_full_first: bool = False,
) -> list[int]:
    """Unit ids by descending score; ties broken by ascending unit position."""
    scored = [
        (unit_score(u, w_soh, w_soc, charge_full_first).score, idx, u.id)
        for idx, u in enumerate(system.units)
    ]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [uid for _, _, uid in scored]


def _check_charge(system: StorageSystem, q: float) -> float:
    room = system_headroom(system)
    if q < 0:
        raise ValueError(f"system {system.id}: negative charge {q}")
    if q > room + _REL_TOL * max(1.0, room):
        raise ValueError(f"system {system.id}: charge {q} exceeds headroom {room}")
    return min(q, room)


def distribute_charge_ranked(
    system: StorageSystem,
    q_mwd: float,
    w_soh: float = DEFAULT_W_SOH,
    w_soc: float = DEFAULT_W_SOC,
    charge_full_first: bool = False,
) -> list[float]:
    """Fill units greedily in rank order, wearing each by what it received.

    The ranking is computed once per call, so one day's charge lands on the
    units that looked best at the start of the day. Returns per-unit amounts
    in unit order.
    """
    q_mwd = _check_charge(system, q_mwd)
    order = rank_units(system, w_soh, w_soc, charge_full_first)
    idx_of = {u.id: i for i, u in enumerate(system.units)}
    amounts = [0.0] * len(system.units)
    left = q_mwd
    for uid in order:
        if left <= 0:
            break
        unit = system.units[idx_of[uid]]
        take = min(left, unit.headroom_mwd)
        amounts[idx_of[uid]] = take
        left -= take
    for unit, amt in zip(system.units, amounts):
        if amt > 0:
            unit.energy_mwd = min(unit.capacity_mwd, unit.energy_mwd + amt)
            degrade_on_charge(unit, amt)
    return amounts


def distribute_charge_equal(system: StorageSystem, q_mwd: float) -> list[float]:
    """Split a day's charge equally across units, overflow re-split.

    Health-blind baseline. Returns per-unit amounts in unit order.
    """
    q_mwd = _check_charge(system, q_mwd)
    amounts = split_equally(q_mwd, [u.headroom_mwd for u in system.units])
    for unit, amt in zip(system.units, amounts):
        if amt > 0:
            unit.energy_mwd = min(unit.capacity_mwd, unit.energy_mwd + amt)
            degrade_on_charge(unit, amt)
    return amounts
