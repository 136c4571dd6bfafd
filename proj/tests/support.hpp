#pragma once

// Shared fixture helpers for the test suites.

#include <string>
#include <vector>

#include "torsio/complexes.hpp"

namespace torsio::testsupport {

struct Prepared {
    Triangulation t;
    Placement p;
    MetricCache mc;
    RigidConstruction rc_int;
    std::vector<RigidConstruction> rc_surf;
    std::vector<int> eligible;  // boundary edges usable in C and D

    ChainComplex complex(std::vector<int> C, std::vector<int> D,
                         PlanSpec plan = {}) const {
        return build_complex({t, p, mc, rc_int, rc_surf, std::move(C), std::move(D), plan});
    }
};

// Builds the builtin, refines to three inner vertices when needed for the
// standard plan, places it and computes the construction data.
inline Prepared prepare(const std::string& name, std::uint64_t seed,
                        bool refine_for_standard_plan = true) {
    Triangulation t = Triangulation::builtin(name);
    if (refine_for_standard_plan) t = ensure_inner_vertices(t, 3);
    Placement p = random_placement(t, seed);
    MetricCache mc = metric_cache(t, p);
    RigidConstruction rc = rigid_construction_interior(t, p);
    std::vector<RigidConstruction> surf;
    for (std::size_t c = 0; c < t.num_boundary_components(); ++c)
        surf.push_back(rigid_construction_surface(t, p, static_cast<int>(c)));
    std::vector<int> eligible = eligible_boundary_edges(surf);
    return {std::move(t), std::move(p), std::move(mc), std::move(rc), std::move(surf),
            std::move(eligible)};
}

}  // namespace torsio::testsupport
