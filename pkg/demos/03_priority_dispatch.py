"""Trace one morning of charge dispatch on the benchmark grid.

Builds the seven-system benchmark topology, forecasts the day's demand per
load center, turns those forecasts into buffered charge targets, and shows
how deficit-priority allocation routes scarce generation compared with a
plain equal split.
"""

from hybridgrid import (
    allocate_equal,
    allocate_priority,
    compute_charge_targets,
    prioritize,
    reference_topology,
    system_soc,
)


def main():
    # Start the fleet low and uneven so the deficits differ per system.
    topo = reference_topology(initial_soc_pct=4.0)
    for system in topo.systems[3:]:
        for unit in system.units:
            unit.energy_mwd = unit.capacity_mwd * 0.12

    forecasts = {load.id: 95.0 for load in topo.loads}
    targets = compute_charge_targets(topo, forecasts)
    order = prioritize(targets)

    print("=== Charge targets (25% safety buffer over forecasts) ===")
    for t in sorted(targets, key=lambda t: t.system_id):
        soc = system_soc(topo.system_by_id[t.system_id])
        print(
            f"  system {t.system_id}: SoC {soc:5.1f}%  "
            f"target {t.target_mwd:7.1f} MWd  deficit {t.deficit_mwd:7.1f} MWd"
        )
    print(f"  charge priority order: {order}")

    # A lean generation day: the wind arm has little to give.
    per_source = {1: 120.0, 2: 260.0, 3: 300.0, 4: 420.0}
    print()
    print(f"=== Dispatching {sum(per_source.values()):.0f} MWd of generation ===")

    priority_alloc = allocate_priority(order, targets, per_source, topo)
    equal_topo = reference_topology(initial_soc_pct=4.0)
    for system in equal_topo.systems[3:]:
        for unit in system.units:
            unit.energy_mwd = unit.capacity_mwd * 0.12
    equal_alloc = allocate_equal(per_source, equal_topo)

    print("  system   priority-inflow   equal-inflow")
    for system in topo.systems:
        print(
            f"  {system.id:>6}   {priority_alloc.inflow(system.id):15.1f}"
            f"   {equal_alloc.inflow(system.id):12.1f}"
        )
    print(
        f"  curtailed: priority {priority_alloc.total_curtailed():.1f} MWd, "
        f"equal {equal_alloc.total_curtailed():.1f} MWd"
    )
    print()
    print("Priority dispatch pushes energy at the emptiest systems first;")
    print("the equal split ignores need and spreads each source uniformly.")


if __name__ == "__main__":
    main()
