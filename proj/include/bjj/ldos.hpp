#pragma once

#include <vector>

#include "bjj/params.hpp"

namespace bjj::analytics {

// Weight distribution of a state over energy eigenlevels, together with the
// derived quantities used throughout the fluctuation analysis.
struct LdosProfile {
    DimerParams params;
    std::vector<double> energies;  // ascending level energies
    std::vector<double> weights;   // p_nu >= 0, sum = 1

    // effective number of participating levels, [sum p^2]^-1
    double participation() const;
    double mean_energy() const;
    double energy_width() const;  // std dev of energy under the weights
    // weighted mean gap between consecutive populated levels; for a
    // parity-culled profile this is the observable beat frequency
    double beat_frequency() const;
    // few dominant levels vs quasi-continuous band (operational cut:
    // participation below sqrt(dim))
    bool discrete_dominated() const;

    // Renormalizes the weights to unit sum; negative weights rejected.
    static LdosProfile from_weights(const DimerParams& params,
                                    std::vector<double> energies,
                                    std::vector<double> weights);
};

}  // namespace bjj::analytics
