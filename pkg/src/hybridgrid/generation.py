"""Plant-level generation models.

Converts site weather into plant output: global horizontal irradiance to
photovoltaic power, and hub-height wind speed to turbine-farm power with
cut-in/cut-out clamping. Power is expressed in MW; under the one-day tick
convention a constant MW output over a day equals the same number in MWd.
"""

from __future__ import annotations

from dataclasses import dataclass

W_PER_MW = 1e6

# Betz limit: no rotor extracts more than 16/27 of the kinetic energy flux.
BETZ_LIMIT = 16.0 / 27.0


@dataclass(frozen=True)
class SolarPlantParams:
    """Photovoltaic plant: collector area in m^2 and panel efficiency in (0, 1]."""

    area_m2: float
    efficiency: float

    def __post_init__(self) -> None:
        if self.area_m2 <= 0:
            raise ValueError(f"solar plant area must be positive, got {self.area_m2}")
        if not 0 < self.efficiency <= 1:
            raise ValueError(f"panel efficiency must be in (0, 1], got {self.efficiency}")


@dataclass(frozen=True)
class WindPlantParams:
    """Wind plant: identical turbines described by rotor disc and power coefficient."""

    power_coefficient: float = 0.4
    air_density: float = 1.225      # kg/m^3
    rotor_area_m2: float = 10_000.0  # frontal area per turbine
    turbine_count: int = 1
    cut_in_ms: float = 3.0
    cut_out_ms: float = 25.0

    def __post_init__(self) -> None:
        if not 0 < self.power_coefficient <= BETZ_LIMIT:
            raise ValueError(
                f"power coefficient must be in (0, {BETZ_LIMIT:.6f}], got {self.power_coefficient}"
            )
        if self.air_density <= 0:
            raise ValueError(f"air density must be positive, got {self.air_density}")
        if self.rotor_area_m2 <= 0:
            raise ValueError(f"rotor area must be positive, got {self.rotor_area_m2}")
        if self.turbine_count < 1:
            raise ValueError(f"turbine count must be >= 1, got {self.turbine_count}")
        if self.cut_in_ms < 0 or self.cut_out_ms <= self.cut_in_ms:
            raise ValueError(
                f"need 0 <= cut-in < cut-out, got {self.cut_in_ms}, {self.cut_out_ms}"
            )


def solar_power(irradiance_w_m2: float, params: SolarPlantParams) -> float:
    """PV plant output in MW for a given irradiance in W/m^2."""
    if irradiance_w_m2 < 0:
        raise ValueError(f"irradiance must be >= 0, got {irradiance_w_m2}")
    return irradiance_w_m2 * params.area_m2 * params.efficiency / W_PER_MW


def wind_power(speed_ms: float, params: WindPlantParams) -> float:
    """Wind farm output in MW at a given wind speed in m/s.

    Output is exactly zero below cut-in and above cut-out; both boundary
    speeds themselves produce power. Between the cuts each turbine delivers
    Cp * rho * A * v^3 / 2 watts.
    """
    if speed_ms < 0:
        raise ValueError(f"wind speed must be >= 0, got {speed_ms}")
    if speed_ms < params.cut_in_ms or speed_ms > params.cut_out_ms:
        return 0.0
    per_turbine_w = (
        params.power_coefficient
        * params.air_density
        * params.rotor_area_m2
        * speed_ms**3
        / 2.0
    )
    return params.turbine_count * per_turbine_w / W_PER_MW


def daily_energy(power_mw: float) -> float:
    """Energy in MWd delivered by a constant power over one daily tick."""
    if power_mw < 0:
        raise ValueError(f"power must be >= 0, got {power_mw}")
    return power_mw * 1.0
