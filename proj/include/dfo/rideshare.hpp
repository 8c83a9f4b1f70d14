/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfo/controller.hpp"
#include "dfo/convex_set.hpp"
#include "dfo/cost_model.hpp"
#include "dfo/lti_system.hpp"

namespace dfo {

/**
 * Region graph of the ride-service network: rebalancing fractions a (row i
 * sums to at most one, zero diagonal), routing costs c, price caps p_max and
 * demand-elasticity steepness theta in [0, 1], all n x n with the diagonal
 * unused. Trips take between 1 and max_travel_slots slots.
 */
struct RegionGraph {
    int n = 0;
    Eigen::MatrixXd a;
    Eigen::MatrixXd c;
    Eigen::MatrixXd p_max;
    Eigen::MatrixXd theta;
    int max_travel_slots = 3;

    int pair_count() const { return n * (n - 1); }
};

/// Validates the graph invariants; throws ConfigError with the violated one.
void validate_graph(const RegionGraph& g);

/// Chain-connected test topology: neighbours exchange a fraction `a` of
/// their idle vehicles; uniform costs, caps and elasticity.
RegionGraph make_chain_graph(int n, double a, double cost, double p_max,
                             double theta, int max_travel_slots = 3);

/// Flattened ordered-pair indexing (origin-major, diagonal skipped).
int pair_index(int n, int origin, int dest);
std::pair<int, int> pair_origin_dest(int n, int index);
Eigen::VectorXd flatten_pairs(const Eigen::MatrixXd& M, int n);
Eigen::MatrixXd unflatten_pairs(const Eigen::VectorXd& v, int n);

/// Potential ride demand per slot (n x n, zero diagonal), 5-minute slots.
struct DemandProfile {
    std::vector<Eigen::MatrixXd> delta;
    double slot_minutes = 5.0;

    int slots() const { return static_cast<int>(delta.size()); }
};

/// Synthetic demand day: two Gaussian rush-hour bumps over the horizon with
/// a base floor, per-pair weights drawn once from the seed. The busiest slot
/// has total demand `peak_total` (in fleet-size units).
DemandProfile synthetic_two_peak_demand(int n_regions, int slots,
                                        double peak_total, uint64_t seed);

/// Demand CSV (`slot,origin,dest,delta`, 1-based regions) and graph JSON.
DemandProfile read_demand_csv(const std::string& path, int n_regions);
void write_demand_csv(const std::string& path, const DemandProfile& demand,
                      int n_regions);
RegionGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const RegionGraph& g);

/// Demand elasticity: the accepted fraction of potential demand at price p,
/// clamped at zero.
double accepted_demand(double delta, double theta, double p, double p_max);

/// Matrix version over all pairs; prices must respect the caps.
Eigen::MatrixXd accepted_demand(const RegionGraph& g,
                                const Eigen::MatrixXd& delta,
                                const Eigen::MatrixXd& prices);

/// Idle-vehicle occupancy per region (normalized by fleet size) plus the
/// in-transit ledger realizing delayed arrivals.
struct FleetState {
    Eigen::VectorXd idle;
    struct TransitEntry {
        int dest = 0;
        int arrival_step = 0;
        double volume = 0.0;
    };
    std::vector<TransitEntry> in_transit;
    int step = 0;

    double total_mass() const;
};

FleetState initial_fleet_state(const Eigen::VectorXd& idle);

struct FleetStepResult {
    FleetState next;
    Eigen::MatrixXd served;    ///< demand actually dispatched (after rationing)
    double shortfall = 0.0;    ///< demand dropped for lack of idle vehicles
    double clipped = 0.0;      ///< negative occupancy clipped away (e_k driven)
};

/// One conservation-law step: rebalancing flows, ride departures, ledger
/// arrivals and the exogenous term e. Demand beyond the serviceable idle
/// supply is served proportionally and the rest recorded as shortfall.
/// travel_slots gives the per-pair trip duration for departures this slot.
FleetStepResult fleet_step(const FleetState& state, const RegionGraph& g,
                           const Eigen::MatrixXd& demand,
                           const Eigen::MatrixXi& travel_slots,
                           const Eigen::VectorXd& e);

/**
 * Difference-coordinate reduction of the (marginally stable) compartmental
 * model. States are consecutive occupancy differences; the input is the
 * stacked pair demand acting through departures; arrivals, exogenous terms
 * and the conserved-mass offset ride on the disturbance channel:
 *
 *   diff+ = A diff + B d + E w_eff,   w_eff = w_other + (mass/n) R 1.
 */
struct ReducedModel {
    LtiSystem sys;
    Eigen::MatrixXd diff_map;    ///< (n-1) x n: levels -> differences
    Eigen::MatrixXd lift_map;    ///< n x (n-1): differences -> zero-mass levels
    Eigen::MatrixXd departures;  ///< n x pair_count
    Eigen::MatrixXd rebalance;   ///< n x n one-step rebalancing matrix
};

/// Builds the reduction; throws SystemPropertyError when the rebalancing
/// graph does not mix (reduced dynamics not Schur).
ReducedModel reduced_system(const RegionGraph& g);

/// Profit program as a minimization in the stacked prices, with the
/// occupancy-imbalance penalty expressed through the measured differences:
///   phi(p, y) = -sum (p - c) . d(p) + rho |lift(y)|^2 (+ tiny regularizer
/// on pairs with degenerate demand). The constraint set is the price box.
struct PricingCost {
    CostModel cost;
    ConvexSet price_box;
    Eigen::VectorXd base_demand;     ///< d0, stacked
    Eigen::VectorXd elasticity;      ///< diag slope delta*theta/p_max, stacked
    Eigen::VectorXd regularization;  ///< per-pair epsilon actually added
    int degenerate_count = 0;
};

PricingCost build_pricing_cost(const RegionGraph& g,
                               const Eigen::MatrixXd& delta, double rho,
                               const Eigen::MatrixXd& lift_map,
                               double eps_mu = 1e-6);

/// Pricing policies of the comparison study.
struct PricingPolicy {
    enum class Kind { AdaptiveController, FixedMarkup };
    Kind kind = Kind::FixedMarkup;
    double markup = 0.25;  ///< fixed: price = min((1 + markup) c, p_max)
    double eta = 0.0;      ///< adaptive gain; 0 selects a curvature-safe gain
    double rho = 0.02;     ///< adaptive: occupancy-imbalance weight
};

struct RideshareScenario {
    RegionGraph graph;
    DemandProfile demand;
    Eigen::VectorXd initial_idle;  ///< sums to the idle fraction of the fleet
    double rho = 0.02;
    double markup = 0.25;
    double eta = 0.0;              ///< 0 = auto
    double demand_noise = 0.1;     ///< relative per-seed demand fluctuation
    double service_noise = 0.0;    ///< magnitude of e_k; 0 = closed system
    int training_slots = 0;        ///< 0 = auto
    double training_demand_scale = 0.3;
    uint64_t training_seed = 1;
};

struct SlotMetrics {
    int slot = 0;
    double accepted = 0.0;
    double profit = 0.0;
    double mean_price = 0.0;   ///< served-weighted, normalized by p_max
    double utilization = 0.0;  ///< 1 - total idle fraction
};

struct PolicyComparison {
    std::vector<SlotMetrics> adaptive;
    std::vector<SlotMetrics> fixed;
    double adaptive_cum_profit = 0.0;
    double fixed_cum_profit = 0.0;
    double adaptive_cum_accepted = 0.0;
    double fixed_cum_accepted = 0.0;
    Eigen::MatrixXd G_hat_demand;  ///< trained demand -> difference gain
    double eta_used = 0.0;
    double max_conservation_drift = 0.0;  ///< per-step, closed-system runs
};

/// Runs the adaptive projected-gradient policy against the fixed-markup
/// policy over `n_seeds` paired noise realizations and averages the series.
PolicyComparison run_policy_comparison(const RideshareScenario& scenario,
                                       int n_seeds, uint64_t seed);

}  // namespace dfo
