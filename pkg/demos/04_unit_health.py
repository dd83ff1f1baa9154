"""Show why health-aware charging slows fleet wear.

Builds one storage system whose units wear at different rates, then cycles
it daily under two charging policies: score-ranked (healthier and emptier
units first) versus a uniform split. Units that wear quickly end up doing
less work under the ranked policy, so the fleet as a whole ages slower.
"""

import numpy as np

from hybridgrid import (
    BatteryUnit,
    StorageSystem,
    apply_discharge,
    distribute_charge_equal,
    distribute_charge_ranked,
    stored_energy,
)


def build_system(wear_rates):
    return StorageSystem(
        id=1,
        units=[
            BatteryUnit(
                id=i,
                capacity_mwd=100.0,
                energy_mwd=50.0,
                r_charge=rate,
                r_discharge=rate * 1.25,
            )
            for i, rate in enumerate(wear_rates)
        ],
    )


def cycle(system, ranked, days=365, charge=400.0):
    # Hard daily duty: take whatever charge arrives, then serve an evening
    # peak that drains the whole pool. Deep cycling is where the policies
    # separate — under a uniform split every unit works every day, while the
    # ranked policy lets the most-worn units sit out.
    for _ in range(days):
        room = sum(u.capacity_mwd - u.energy_mwd for u in system.units)
        q = min(charge, room)
        if ranked:
            distribute_charge_ranked(system, q)
        else:
            distribute_charge_equal(system, q)
        apply_discharge(system, stored_energy(system))
    return system


def main():
    rng = np.random.default_rng(8)
    wear_rates = 0.2 * rng.uniform(0.2, 1.8, size=10)
    print("=== Ten units, uneven wear rates ===")
    print("  per-unit wear (SoH pp lost per full equivalent cycle):")
    print("  " + "  ".join(f"{r:.3f}" for r in wear_rates))

    ranked = cycle(build_system(wear_rates), ranked=True)
    uniform = cycle(build_system(wear_rates), ranked=False)

    print()
    print("=== After one year of daily cycling ===")
    print("  unit   wear-rate   ranked SoH   uniform SoH")
    for u_r, u_e in zip(ranked.units, uniform.units):
        print(
            f"  {u_r.id:>4}   {u_r.r_charge:9.3f}   {u_r.soh_pct:10.2f}"
            f"   {u_e.soh_pct:11.2f}"
        )
    mean_ranked = ranked.mean_soh_pct
    mean_uniform = uniform.mean_soh_pct
    print(f"  fleet mean: ranked {mean_ranked:.2f}%  uniform {mean_uniform:.2f}%")
    print()
    print(
        f"Ranked charging ends {mean_ranked - mean_uniform:+.2f} SoH points ahead: "
        "fragile units sit out more cycles, durable units carry the load."
    )


if __name__ == "__main__":
    main()
